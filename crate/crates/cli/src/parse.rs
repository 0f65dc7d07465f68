//! Value parsers for list-shaped flags.

use std::str::FromStr;

use dmexp_core::linalg::{PureState, C64};
use dmexp_core::{Error, Result};

/// Comma-separated numbers. `a,b,...,c` expands to a geometric progression
/// with ratio `b / a` when that lands on `c`, otherwise to an arithmetic one
/// with step `b - a`.
pub fn u64_list(s: &str) -> std::result::Result<Vec<u64>, String> {
    let tokens: Vec<&str> = s.split(',').map(str::trim).collect();
    let parse = |t: &str| t.parse::<u64>().map_err(|e| format!("{t:?}: {e}"));
    match tokens.iter().position(|t| *t == "...") {
        None => tokens.iter().map(|t| parse(t)).collect(),
        Some(2) if tokens.len() == 4 => {
            let (a, b, c) = (parse(tokens[0])?, parse(tokens[1])?, parse(tokens[3])?);
            expand(a, b, c).ok_or_else(|| format!("cannot expand {a},{b},...,{c}"))
        }
        Some(_) => Err("the form with an ellipsis is a,b,...,c".into()),
    }
}

fn expand(a: u64, b: u64, c: u64) -> Option<Vec<u64>> {
    if a == 0 || b <= a || c < b {
        return None;
    }
    if b % a == 0 {
        let mut seq = vec![a];
        while *seq.last()? < c {
            let next = seq.last()?.checked_mul(b / a)?;
            seq.push(next);
        }
        if *seq.last()? == c {
            return Some(seq);
        }
    }
    let step = b - a;
    ((c - a) % step == 0).then(|| (a..=c).step_by(step as usize).collect())
}

pub fn f64_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect()
}

/// Amplitudes like `1,0` or `0.6,0.8i` or `1+2i,3`; normalized.
pub fn amplitudes(s: &str) -> Result<PureState> {
    let amps = s
        .split(',')
        .map(|t| C64::from_str(t.trim()).map_err(|_| Error::Parse(format!("bad amplitude {t:?}"))))
        .collect::<Result<Vec<_>>>()?;
    PureState::normalized(amps)
}

/// Inline JSON, or `@path` to read it from a file.
pub fn inline_or_file(s: &str) -> Result<String> {
    match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{path}: {e}"))),
        None => Ok(s.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lists() {
        assert_eq!(u64_list("16,32,...,1024").unwrap(), vec![16, 32, 64, 128, 256, 512, 1024]);
        assert_eq!(u64_list("10,20,...,50").unwrap(), vec![10, 20, 30, 40, 50]);
        assert_eq!(u64_list("3, 5").unwrap(), vec![3, 5]);
        assert!(u64_list("1,...,4").is_err());
        assert!(u64_list("4,2,...,1").is_err());
        assert!(u64_list("2,5,...,9").is_err());
        assert_eq!(f64_list("0.1,0.01").unwrap(), vec![0.1, 0.01]);
    }

    #[test]
    fn amplitude_parsing() {
        let s = amplitudes("1,1i").unwrap();
        assert!((s.amplitudes()[1].im - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(amplitudes("1,x").is_err());
        assert!(amplitudes("0,0").is_err());
    }
}
