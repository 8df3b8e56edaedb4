//! Runs independent checks on a fixed number of threads, returning results in
//! submission order.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use normfam_core::{CheckReport, Error, Verdict};

pub struct Outcome {
    pub check: String,
    pub result: Result<CheckReport, Error>,
    /// Expected verdict for scenario checks.
    pub expected: Option<Verdict>,
    pub elapsed_ms: f64,
}

pub type Task = Box<dyn FnOnce() -> Outcome + Send>;

pub fn run(tasks: Vec<Task>, jobs: usize) -> Vec<Outcome> {
    let n = tasks.len();
    if jobs <= 1 || n <= 1 {
        return tasks.into_iter().map(|t| t()).collect();
    }
    let queue: Vec<Mutex<Option<Task>>> = tasks.into_iter().map(|t| Mutex::new(Some(t))).collect();
    let slots: Vec<Mutex<Option<Outcome>>> = (0..n).map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|s| {
        for _ in 0..jobs.min(n) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= n {
                    break;
                }
                let task = queue[i].lock().unwrap().take().expect("task taken once");
                *slots[i].lock().unwrap() = Some(task());
            });
        }
    });
    slots
        .into_iter()
        .map(|s| s.into_inner().unwrap().expect("every task ran"))
        .collect()
}
