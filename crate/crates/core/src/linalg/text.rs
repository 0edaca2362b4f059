//! Plain-text matrix format.
//!
//! ```text
//! 2
//! 1 0.5+2i
//! -3e-2-1i 0
//! ```
//!
//! The first line holds `n`; each of the next `n` lines holds `n`
//! whitespace-separated entries. Complex entries are written `re`,
//! `re+imi` or `re-imi`; rational entries are written `num` or `num/den`.
//! Floating output uses 17 significant digits, so it parses back to the
//! same bits.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use super::{Matrix, RationalMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        column,
        message: message.into(),
    }
}

/// Splits input into `(dimension, rows of (column, token))` with 1-based positions.
fn tokenize(input: &str) -> Result<(usize, Vec<(usize, Vec<(usize, &str)>)>), ParseError> {
    let mut lines = input.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| err(1, 1, "empty input"))?;
    let header_trim = header.trim();
    let n: usize = header_trim
        .parse()
        .map_err(|_| err(1, 1, format!("expected dimension, found `{header_trim}`")))?;
    if n == 0 {
        return Err(err(1, 1, "dimension must be positive"));
    }
    let mut rows = Vec::with_capacity(n);
    for (idx, line) in lines {
        let line_no = idx + 1;
        if rows.len() == n {
            if !line.trim().is_empty() {
                return Err(err(line_no, 1, "unexpected content after matrix"));
            }
            continue;
        }
        let mut tokens = Vec::new();
        let mut start = None;
        for (pos, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
            match (ch.is_whitespace(), start) {
                (false, None) => start = Some(pos),
                (true, Some(s)) => {
                    tokens.push((line[..s].chars().count() + 1, &line[s..pos]));
                    start = None;
                }
                _ => {}
            }
        }
        if tokens.len() != n {
            return Err(err(
                line_no,
                1,
                format!("expected {n} entries, found {}", tokens.len()),
            ));
        }
        rows.push((line_no, tokens));
    }
    if rows.len() < n {
        return Err(err(
            input.lines().count() + 1,
            1,
            format!("expected {n} rows, found {}", rows.len()),
        ));
    }
    Ok((n, rows))
}

fn parse_real(token: &str) -> Option<f64> {
    if let Some((num, den)) = token.split_once('/') {
        let q = parse_fraction(num, den)?;
        return q.to_f64();
    }
    let x: f64 = token.parse().ok()?;
    x.is_finite().then_some(x)
}

fn parse_fraction(num: &str, den: &str) -> Option<BigRational> {
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    (!den.is_zero()).then(|| BigRational::new(num, den))
}

/// Parses `re`, `re+imi`, `re-imi`, `imi`.
pub fn parse_complex(token: &str) -> Option<Complex64> {
    let Some(body) = token.strip_suffix('i') else {
        return parse_real(token).map(|re| Complex64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (parse_real(&body[..k])?, &body[k..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => parse_real(other.strip_prefix('+').unwrap_or(other))?,
    };
    Some(Complex64::new(re, im))
}

pub fn parse_matrix(input: &str) -> Result<Matrix, ParseError> {
    let (n, rows) = tokenize(input)?;
    let mut entries = Vec::with_capacity(n);
    for (line, tokens) in rows {
        let mut row = Vec::with_capacity(n);
        for (column, token) in tokens {
            row.push(
                parse_complex(token)
                    .ok_or_else(|| err(line, column, format!("invalid complex entry `{token}`")))?,
            );
        }
        entries.push(row);
    }
    Matrix::from_rows(&entries).map_err(|e| err(1, 1, e.to_string()))
}

pub fn parse_rational_matrix(input: &str) -> Result<RationalMatrix, ParseError> {
    let (n, rows) = tokenize(input)?;
    let mut entries = Vec::with_capacity(n * n);
    for (line, tokens) in rows {
        for (column, token) in tokens {
            let q = match token.split_once('/') {
                Some((num, den)) => parse_fraction(num, den),
                None => token.parse::<BigInt>().ok().map(BigRational::from_integer),
            };
            entries.push(
                q.ok_or_else(|| err(line, column, format!("invalid rational entry `{token}`")))?,
            );
        }
    }
    RationalMatrix::new(n, entries).map_err(|e| err(1, 1, e.to_string()))
}

/// Formats a float with 17 significant digits.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        return format_real(z.re);
    }
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{sign}{}i", format_real(z.re), format_real(z.im.abs()))
}

pub fn format_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn write_matrix(m: &Matrix) -> String {
    let n = m.dim();
    let mut out = format!("{n}\n");
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format_complex(m.get(i, j))).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

pub fn write_rational_matrix(m: &RationalMatrix) -> String {
    let n = m.dim();
    let mut out = format!("{n}\n");
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format_rational(m.get(i, j))).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn complex_tokens() {
        let c = |re, im| Some(Complex64::new(re, im));
        assert_eq!(parse_complex("1.5"), c(1.5, 0.0));
        assert_eq!(parse_complex("-2"), c(-2.0, 0.0));
        assert_eq!(parse_complex("1+2i"), c(1.0, 2.0));
        assert_eq!(parse_complex("1-2i"), c(1.0, -2.0));
        assert_eq!(parse_complex("1e-3-2.5E+2i"), c(1e-3, -250.0));
        assert_eq!(parse_complex("-3i"), c(0.0, -3.0));
        assert_eq!(parse_complex("i"), c(0.0, 1.0));
        assert_eq!(parse_complex("2-i"), c(2.0, -1.0));
        assert_eq!(parse_complex("1/4"), c(0.25, 0.0));
        assert_eq!(parse_complex("abc"), None);
        assert_eq!(parse_complex("inf"), None);
        assert_eq!(parse_complex("1+2j"), None);
    }

    #[test]
    fn reports_line_and_column() {
        let e = parse_matrix("2\n1 0\n0 x1\n").unwrap_err();
        assert_eq!((e.line, e.column), (3, 3));
        let e = parse_matrix("2\n1 0 0\n0 1\n").unwrap_err();
        assert_eq!(e.line, 2);
        let e = parse_matrix("2\n1 0\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_matrix("two\n").unwrap_err();
        assert_eq!((e.line, e.column), (1, 1));
        let e = parse_rational_matrix("1\n1/0\n").unwrap_err();
        assert_eq!((e.line, e.column), (2, 1));
    }

    #[test]
    fn trailing_blank_lines_are_accepted() {
        let m = parse_matrix("1\n  3-4i  \n\n\n").unwrap();
        assert_eq!(m.get(0, 0), Complex64::new(3.0, -4.0));
    }

    #[test]
    fn rational_output_format() {
        let m = parse_rational_matrix("2\n1/2 -3\n0 6/4\n").unwrap();
        assert_eq!(write_rational_matrix(&m), "2\n1/2 -3\n0 3/2\n");
    }

    proptest! {
        #[test]
        fn float_format_round_trips_bits(
            entries in proptest::collection::vec((-1e300f64..1e300, -1e300f64..1e300), 9)
        ) {
            let rows: Vec<Vec<Complex64>> = entries
                .chunks(3)
                .map(|c| c.iter().map(|&(re, im)| Complex64::new(re, im)).collect())
                .collect();
            let m = Matrix::from_rows(&rows).unwrap();
            prop_assert_eq!(parse_matrix(&write_matrix(&m)).unwrap(), m);
        }

        #[test]
        fn rational_format_round_trips(
            entries in proptest::collection::vec((-10_000i64..10_000, 1i64..10_000), 16)
        ) {
            let q: Vec<BigRational> = entries
                .iter()
                .map(|&(a, b)| BigRational::new(a.into(), b.into()))
                .collect();
            let m = RationalMatrix::new(4, q).unwrap();
            prop_assert_eq!(parse_rational_matrix(&write_rational_matrix(&m)).unwrap(), m);
        }
    }
}
