//! Real-valued arguments written as products and quotients of numbers and
//! `pi`, e.g. `pi/12`, `-8*pi`, `3*pi/4`, `0.25`.

use std::f64::consts::PI;

use crate::error::CliError;

fn factor(token: &str, whole: &str) -> Result<f64, CliError> {
    let t = token.trim();
    match t {
        "pi" | "π" | "PI" => Ok(PI),
        "" => Err(CliError::Validation(format!("malformed expression '{whole}'"))),
        _ => {
            if let Some(rest) = t.strip_suffix("pi").or_else(|| t.strip_suffix("π")) {
                // `8pi`
                return Ok(factor(rest, whole)? * PI);
            }
            t.parse::<f64>()
                .map_err(|_| CliError::Validation(format!("malformed expression '{whole}'")))
        }
    }
}

/// Evaluates `[+-] f (('*'|'/') f)*` where each `f` is a number or `pi`.
pub fn parse_real(input: &str) -> Result<f64, CliError> {
    let s = input.trim();
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, s.strip_prefix('+').unwrap_or(s)),
    };
    let mut value = 1.0;
    let mut op = '*';
    let mut start = 0;
    for (i, c) in body.char_indices().chain(std::iter::once((body.len(), '*'))) {
        if c != '*' && c != '/' {
            continue;
        }
        let f = factor(&body[start..i], input)?;
        if op == '*' {
            value *= f;
        } else {
            value /= f;
        }
        op = c;
        start = i + c.len_utf8();
    }
    let value = sign * value;
    if value.is_finite() {
        Ok(value)
    } else {
        Err(CliError::Validation(format!("expression '{input}' is not finite")))
    }
}
