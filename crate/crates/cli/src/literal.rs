//! Complex literals (`"re+imi"`) and comma-separated integer tuples.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiteralError {
    #[error("invalid complex literal {0:?} (expected re+imi, parts may be p/q)")]
    Complex(String),
    #[error("invalid tuple {text:?}: expected {expected} comma-separated integers")]
    Tuple { text: String, expected: usize },
}

fn real_part(s: &str) -> Option<f64> {
    let v = match s.split_once('/') {
        Some((p, q)) => {
            let (p, q): (f64, f64) = (p.trim().parse().ok()?, q.trim().parse().ok()?);
            if q == 0.0 {
                return None;
            }
            p / q
        }
        None => s.trim().parse().ok()?,
    };
    v.is_finite().then_some(v)
}

/// Parses `"2"`, `"-0.7"`, `"1.5+0.5i"`, `"1/2-1/3i"`, `"i"`, `"-2i"`, `"1e-3+2i"`.
pub fn parse_complex(text: &str) -> Result<Complex64, LiteralError> {
    let err = || LiteralError::Complex(text.to_string());
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(err());
    }
    let Some(body) = s.strip_suffix('i') else {
        return real_part(&s).map(|re| Complex64::new(re, 0.0)).ok_or_else(err);
    };
    // last sign that is not the leading one and not an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let im = match im {
        "" | "+" => Some(1.0),
        "-" => Some(-1.0),
        _ => real_part(im),
    }
    .ok_or_else(err)?;
    let re = if re.is_empty() { Some(0.0) } else { real_part(re) }.ok_or_else(err)?;
    Ok(Complex64::new(re, im))
}

/// Parses exactly `N` comma-separated integers.
pub fn parse_tuple<const N: usize>(text: &str) -> Result<[i64; N], LiteralError> {
    let err = || LiteralError::Tuple { text: text.to_string(), expected: N };
    let parts: Vec<i64> = text
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| err())?;
    parts.try_into().map_err(|_| err())
}
