//! One constructor per subcommand; each returns tasks for the runner.

use std::path::PathBuf;

use anyhow::bail;
use normfam_core::constants::{
    gamma_quarter, hempel_lai_a, landau_check, max_feasible_c, poisson_jensen_check, spherical_landau_check,
    theorem4_feasible, theorem4_lower_bound, theorem4_witness_check,
};
use normfam_core::dsl::FnSource;
use normfam_core::roots::{count_a_points, locate_a_points, verify_lemma7, Lemma7Verdict};
use normfam_core::scenario::{self as sc, find_scenario, run_scenario, Scenario};
use normfam_core::zalcman::{find_rescaling, run_sequence};
use normfam_core::zerofree::{extract_form, verify_form_bounds, FormOptions};
use normfam_core::{AnalyticFn, CheckReport, Complex64, Disk, Error, LabConfig};

use crate::runner::Task;
use crate::timed;

pub fn constants(digits: u32, cs: &[f64], bisect: Option<f64>) -> anyhow::Result<Vec<Task>> {
    if !(10..=2000).contains(&digits) {
        bail!("--digits must lie in [10, 2000]");
    }
    let mut tasks: Vec<Task> = vec![Box::new(move || {
        timed("hempel_lai_a", None, || {
            let a = hempel_lai_a(digits);
            Ok(CheckReport::new("hempel_lai_a")
                .meta("A", a.to_decimal(digits as usize))
                .meta("A_error_bound", a.error_bound())
                .meta("gamma_quarter", gamma_quarter(digits).to_decimal(digits as usize))
                .meta("digits", digits))
        })
    })];
    for &c in cs {
        tasks.push(Box::new(move || {
            timed("theorem4_feasible", None, || {
                let v = theorem4_feasible(c)?;
                let margin = v.margin.to_f64();
                let report = CheckReport::new("theorem4_feasible")
                    .margin("feasibility_margin", margin)
                    .meta("lower_bound", theorem4_lower_bound(c)?)
                    .meta("verdict", &v);
                Ok(if v.feasible {
                    report
                } else {
                    report.fail(None, margin, format!("feasibility inequality fails at C = {c}"))
                })
            })
        }));
    }
    if let Some(tol) = bisect {
        tasks.push(Box::new(move || {
            timed("max_feasible_c", None, || {
                let r = max_feasible_c(tol)?;
                Ok(CheckReport::new("max_feasible_c")
                    .margin("bracket_width", r.upper - r.lower)
                    .meta("critical", &r))
            })
        }));
    }
    Ok(tasks)
}

pub fn count(f: AnalyticFn, a: Complex64, disk: Disk, locate: bool, cfg: LabConfig) -> Task {
    Box::new(move || {
        timed("count_a_points", None, || {
            let n = count_a_points(&f, a, disk, &cfg.circle_grid(disk.radius))?;
            let mut report = CheckReport::new("count_a_points")
                .margin("winding_residual", n.winding_residual)
                .meta("count", n.count)
                .meta("result", &n);
            if locate {
                let roots = locate_a_points(&f, a, disk, cfg.root_tol)?;
                if roots.total() != n.count {
                    return Ok(report.fail(None, roots.total() as f64, "located points disagree with the count"));
                }
                report = report.meta("roots", &roots.roots);
            }
            Ok(report)
        })
    })
}

pub fn rescale_point(f: AnalyticFn, a: Complex64, eps: f64, cfg: LabConfig) -> Task {
    Box::new(move || {
        timed("find_rescaling", None, || {
            let cert = find_rescaling(&f, a, eps, &cfg.weight(), &cfg.polar_grid())?;
            let report = CheckReport::new("find_rescaling")
                .margin("bound_margin", cert.bound_margin)
                .margin("normalization_error", cert.invariants.normalization_error)
                .meta("certificate", &cert);
            Ok(if cert.invariants.hold() {
                report
            } else {
                report.fail(Some(cert.c), cert.rho, "certificate invariants do not hold")
            })
        })
    })
}

pub fn rescale_sequence(src: FnSource, param: String, z0: Complex64, ks: Vec<f64>, cfg: LabConfig) -> Task {
    Box::new(move || {
        timed("run_sequence", None, || {
            let family = |k: f64| src.instantiate(&[(param.as_str(), k)]);
            let run = run_sequence(&family, z0, &ks, &cfg.sequence_options())?;
            let report = CheckReport::new("run_sequence")
                .margin("bound12_margin_min", run.min_bound12_margin)
                .margin("relation_error_max", run.max_relation_error)
                .meta("weight", cfg.weight().describe())
                .meta("run", &run);
            let drop = run.rows.windows(2).find(|w| w[1].r_k <= w[0].r_k);
            Ok(match drop {
                Some(w) => report.fail(
                    Some(w[1].z_k),
                    w[1].r_k,
                    format!("R_k does not increase from k = {} to k = {}", w[0].k, w[1].k),
                ),
                None => report,
            })
        })
    })
}

pub fn form(g: AnalyticFn, radius: f64, strict: bool, cfg: LabConfig) -> Task {
    Box::new(move || {
        timed("zero_free_form", None, || {
            let opts = FormOptions {
                strict,
                ..cfg.form_options()
            };
            let form = extract_form(&g, radius, &opts)?;
            let b = verify_form_bounds(&form, &cfg.delta_grid())?;
            let mut report = CheckReport::new("zero_free_form")
                .margin("c_lower_margin", b.c_abs - b.c_lower)
                .margin("c_upper_margin", b.c_upper - b.c_abs)
                .margin("delta_margin", b.delta_margin)
                .margin("growth_margin", b.hypotheses.growth_margin)
                .meta("bounds", &b);
            if !b.hypotheses.growth_ok {
                report = report.note("sampled growth bound on g# fails: the input is outside the hypotheses");
            }
            Ok(if !b.c_bound_ok {
                report.fail(Some(b.b), b.c_abs, "|c| outside its bound")
            } else if !b.delta_ok {
                report.fail(Some(b.delta_worst_point), b.max_abs_delta, "|δ| exceeds its quadratic bound")
            } else {
                report
            })
        })
    })
}

pub fn lemma7(f: AnalyticFn, r: f64, cfg: LabConfig) -> Task {
    Box::new(move || {
        timed("lemma7", None, || {
            let rep = verify_lemma7(&f, r, &cfg.lemma7_options())?;
            let report = CheckReport::new("lemma7")
                .margin("min_modulus", rep.min_modulus)
                .meta("result", &rep);
            Ok(if !rep.hypothesis_ok {
                report.hypothesis_failed("zeros or 1-points off their half-axes")
            } else if rep.verdict == Lemma7Verdict::Violation {
                report.fail(None, rep.min_modulus, "counts violate the dichotomy")
            } else {
                report
            })
        })
    })
}

pub fn pj(f: AnalyticFn, b: Complex64, r: f64, cfg: LabConfig) -> Task {
    Box::new(move || {
        timed("poisson_jensen", None, || {
            let disk = Disk::new(b, r)?;
            let zeros = locate_a_points(&f, Complex64::new(0.0, 0.0), disk, cfg.root_tol)?;
            poisson_jensen_check(&f, b, r, &zeros)
        })
    })
}

pub fn landau(f: AnalyticFn, a: Complex64, r: f64, spherical: bool, b_used: f64) -> Task {
    let check = if spherical { "spherical_landau" } else { "landau" };
    Box::new(move || {
        timed(check, None, || {
            if spherical {
                spherical_landau_check(&f, a, r, b_used)
            } else {
                landau_check(&f, a, r)
            }
        })
    })
}

pub fn witness(f: AnalyticFn, r: f64) -> Task {
    Box::new(move || timed("theorem4_witness", None, || theorem4_witness_check(&f, r)))
}

pub fn scenarios_selected(id: &str) -> anyhow::Result<Vec<Scenario>> {
    if id == "all" {
        return Ok(sc::scenarios());
    }
    match find_scenario(id) {
        Some(s) => Ok(vec![s]),
        None => {
            let ids: Vec<&str> = sc::scenarios().iter().map(|s| s.id).collect();
            bail!("unknown scenario `{id}`; known: all, {}", ids.join(", "))
        }
    }
}

pub fn scenario(id: &str, ks: Vec<f64>, radii: Vec<f64>, cfg: LabConfig) -> anyhow::Result<Vec<Task>> {
    let selected = scenarios_selected(id)?;
    Ok(selected
        .into_iter()
        .map(|s| {
            let uses_radii = s.id.starts_with("0a1");
            let schedule = if uses_radii { radii.clone() } else { ks.clone() };
            let cfg = cfg.clone();
            Box::new(move || {
                timed(s.id, Some(s.expected), || {
                    let sched = (!schedule.is_empty()).then_some(schedule.as_slice());
                    run_scenario(&s, sched, &cfg)
                })
            }) as Task
        })
        .collect())
}

pub fn grid(f: AnalyticFn, center: Complex64, radius: f64, n: usize, out: PathBuf) -> Task {
    Box::new(move || {
        timed("grid", None, || {
            if n < 2 {
                return Err(Error::InvalidGrid("at least 2 points per axis".into()));
            }
            Disk::new(center, radius)?;
            let mut w = csv::Writer::from_path(&out).map_err(|e| Error::Io(e.into()))?;
            let io = |e: csv::Error| Error::Io(e.into());
            w.write_record(["re", "im", "absf", "sphderiv"]).map_err(io)?;
            let mut rows = 0usize;
            let mut skipped = 0usize;
            for i in 0..n {
                for j in 0..n {
                    let t = |k: usize| -radius + 2.0 * radius * k as f64 / (n - 1) as f64;
                    let z = center + Complex64::new(t(j), t(i));
                    if (z - center).norm() > radius {
                        continue;
                    }
                    // points outside the function's domain are left out of the grid
                    let (absf, sph) = match (f.abs(z), f.spherical_derivative(z)) {
                        (Ok(a), Ok(s)) => (a, s),
                        (Err(Error::DomainExceeded { .. }), _) | (_, Err(Error::DomainExceeded { .. })) => {
                            skipped += 1;
                            continue;
                        }
                        (Err(e), _) | (_, Err(e)) => return Err(e),
                    };
                    w.write_record(&[z.re.to_string(), z.im.to_string(), absf.to_string(), sph.to_string()])
                        .map_err(io)?;
                    rows += 1;
                }
            }
            w.flush()?;
            Ok(CheckReport::new("grid")
                .meta("path", out.display().to_string())
                .meta("rows", rows)
                .meta("skipped_outside_domain", skipped))
        })
    })
}
