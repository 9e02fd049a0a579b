//! Argument parsers for complex scalars and sweep grids.

use num_complex::Complex64;
use opran::Error;

/// Parse "a+bi" / "a-bi" / "a" / "bi" (also accepts a trailing "j").
pub fn parse_complex(text: &str) -> Result<Complex64, Error> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let s = s.trim_end_matches(['i', 'j']);
    let bad = || Error::Parse(format!("bad complex number `{text}`"));
    if text.trim_end().ends_with(['i', 'j']) {
        // Split the imaginary part off at the last interior sign.
        let split = s
            .char_indices()
            .skip(1)
            .filter(|(idx, c)| {
                matches!(c, '+' | '-') && !matches!(s.as_bytes()[idx - 1], b'e' | b'E')
            })
            .map(|(idx, _)| idx)
            .last();
        match split {
            Some(idx) => {
                let re: f64 = s[..idx].parse().map_err(|_| bad())?;
                let im_text = &s[idx..];
                let im: f64 = if im_text == "+" {
                    1.0
                } else if im_text == "-" {
                    -1.0
                } else {
                    im_text.parse().map_err(|_| bad())?
                };
                Ok(Complex64::new(re, im))
            }
            None => {
                let im: f64 = if s.is_empty() { 1.0 } else { s.parse().map_err(|_| bad())? };
                Ok(Complex64::new(0.0, im))
            }
        }
    } else {
        let re: f64 = s.parse().map_err(|_| bad())?;
        Ok(Complex64::new(re, 0.0))
    }
}

/// Parse a sweep grid: "8..1024" doubles from the start to the end bound,
/// "2,4,8" is an explicit list.
pub fn parse_ns(text: &str) -> Result<Vec<usize>, Error> {
    let bad = || Error::Parse(format!("bad sweep grid `{text}`"));
    if let Some((lo, hi)) = text.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().parse().map_err(|_| bad())?;
        if lo == 0 || hi < lo {
            return Err(bad());
        }
        let mut out = Vec::new();
        let mut n = lo;
        while n <= hi {
            out.push(n);
            n = n.saturating_mul(2);
        }
        Ok(out)
    } else {
        text.split(',')
            .map(|t| t.trim().parse().map_err(|_| bad()))
            .collect()
    }
}

pub fn parse_f64_list(text: &str) -> Result<Vec<f64>, Error> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad number `{t}`")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("1+0i").unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(parse_complex("0.5-2i").unwrap(), Complex64::new(0.5, -2.0));
        assert_eq!(parse_complex("3").unwrap(), Complex64::new(3.0, 0.0));
        assert_eq!(parse_complex("2i").unwrap(), Complex64::new(0.0, 2.0));
        assert_eq!(parse_complex("-1.5e-3+2e1i").unwrap(), Complex64::new(-1.5e-3, 20.0));
        assert!(parse_complex("nope").is_err());
    }

    #[test]
    fn sweep_grids() {
        assert_eq!(parse_ns("8..1024").unwrap().len(), 8);
        assert_eq!(parse_ns("2,4,8").unwrap(), vec![2, 4, 8]);
        assert!(parse_ns("0..4").is_err());
        assert!(parse_ns("x").is_err());
    }
}
