//! Value parsers for command-line arguments.

use normfam_core::{Complex64, Disk};

fn number(s: &str) -> Result<f64, String> {
    s.trim().parse::<f64>().map_err(|_| format!("`{s}` is not a number"))
}

/// `re` or `re,im`.
pub fn complex(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').collect();
    match parts.as_slice() {
        [re] => Ok(Complex64::new(number(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(number(re)?, number(im)?)),
        _ => Err(format!("expected `re` or `re,im`, got `{s}`")),
    }
}

/// `cx,cy,r`.
pub fn disk(s: &str) -> Result<Disk, String> {
    let parts = s.split(',').map(number).collect::<Result<Vec<_>, _>>()?;
    match parts.as_slice() {
        [cx, cy, r] => Disk::new(Complex64::new(*cx, *cy), *r).map_err(|e| e.to_string()),
        _ => Err(format!("expected `cx,cy,r`, got `{s}`")),
    }
}

/// `name=value`.
pub fn param(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected `name=value`, got `{s}`"))?;
    Ok((name.trim().to_string(), number(value)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_values() {
        assert_eq!(complex("1.5").unwrap(), Complex64::new(1.5, 0.0));
        assert_eq!(complex("0,-2").unwrap(), Complex64::new(0.0, -2.0));
        assert!(complex("1,2,3").is_err());
        let d = disk("0,0,0.95").unwrap();
        assert_eq!(d.radius, 0.95);
        assert!(disk("0,0,0").is_err());
        assert!(disk("0,0").is_err());
        assert_eq!(param("k=10").unwrap(), ("k".to_string(), 10.0));
        assert!(param("k").is_err());
    }
}
