//! Scaled interaction time `tau = g t`.
//!
//! The special times of the four-photon model are rational multiples of pi,
//! and the quadratic Rabi frequencies are odd integers. A [`Tau`] keeps the
//! exact rational next to the floating value so that `Omega_n * tau` can be
//! reduced modulo `2 pi` in integer arithmetic when both are exact.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{CheckedAdd, CheckedMul, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tau {
    value: f64,
    pi_multiple: Option<Rational64>,
}

impl Tau {
    pub fn new(value: f64) -> Self {
        Self { value, pi_multiple: None }
    }

    /// `tau = r * pi` with `r` kept exactly.
    pub fn from_pi_multiple(r: Rational64) -> Self {
        let value = PI * (*r.numer() as f64) / (*r.denom() as f64);
        Self { value, pi_multiple: Some(r) }
    }

    /// `tau = num * pi / den`.
    pub fn pi_fraction(num: i64, den: i64) -> Self {
        Self::from_pi_multiple(Rational64::new(num, den))
    }

    pub fn zero() -> Self {
        Self::from_pi_multiple(Rational64::zero())
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn pi_multiple(&self) -> Option<Rational64> {
        self.pi_multiple
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }

    /// `(cos(freq * tau), sin(freq * tau))`.
    ///
    /// When `integral` is set, `freq` must hold an integer; if `tau` is an exact
    /// multiple of pi the angle is reduced exactly and quarter turns come out as
    /// exact 0 / +-1.
    pub fn cos_sin(&self, freq: f64, integral: bool) -> (f64, f64) {
        if integral && freq.abs() < 1e15 {
            if let Some(r) = self.pi_multiple {
                let f = freq as i128;
                let p = *r.numer() as i128;
                let q = *r.denom() as i128;
                if let Some(fp) = f.checked_mul(p) {
                    return cos_sin_pi_fraction(fp.rem_euclid(2 * q), q);
                }
            }
        }
        let (s, c) = (freq * self.value).sin_cos();
        (c, s)
    }

    /// File-name friendly rendering, e.g. `2999pi_24000` or `0p785`.
    pub fn slug(&self) -> String {
        match self.pi_multiple {
            Some(r) => {
                let sign = if *r.numer() < 0 { "m" } else { "" };
                let num = r.numer().unsigned_abs();
                if num == 0 {
                    "0".to_string()
                } else if *r.denom() == 1 {
                    format!("{sign}{num}pi")
                } else {
                    format!("{sign}{num}pi_{}", r.denom())
                }
            }
            None => format!("{:.9}", self.value).replace('-', "m").replace('.', "p"),
        }
    }
}

/// cos/sin of `pi * m / q` for `0 <= m < 2q`.
fn cos_sin_pi_fraction(m: i128, q: i128) -> (f64, f64) {
    if (2 * m) % q == 0 {
        return match 2 * m / q {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        };
    }
    let (s, c) = (PI * (m as f64) / (q as f64)).sin_cos();
    (c, s)
}

impl From<f64> for Tau {
    fn from(value: f64) -> Self {
        Tau::new(value)
    }
}

impl Add for Tau {
    type Output = Tau;

    fn add(self, rhs: Tau) -> Tau {
        match (self.pi_multiple, rhs.pi_multiple) {
            (Some(a), Some(b)) => match a.checked_add(&b) {
                Some(r) => Tau::from_pi_multiple(r),
                None => Tau::new(self.value + rhs.value),
            },
            _ => Tau::new(self.value + rhs.value),
        }
    }
}

impl Neg for Tau {
    type Output = Tau;

    fn neg(self) -> Tau {
        Tau { value: -self.value, pi_multiple: self.pi_multiple.map(|r| -r) }
    }
}

impl Sub for Tau {
    type Output = Tau;

    fn sub(self, rhs: Tau) -> Tau {
        self + (-rhs)
    }
}

impl fmt::Display for Tau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pi_multiple {
            Some(r) if r.is_zero() => write!(f, "0"),
            Some(r) => {
                let num = *r.numer();
                let coeff = match num {
                    1 => String::new(),
                    -1 => "-".to_string(),
                    n => n.to_string(),
                };
                if *r.denom() == 1 {
                    write!(f, "{coeff}pi")
                } else {
                    write!(f, "{coeff}pi/{}", r.denom())
                }
            }
            None => write!(f, "{}", self.value),
        }
    }
}

enum Term {
    PiMultiple(Rational64),
    Real(f64),
}

impl FromStr for Tau {
    type Err = Error;

    /// Sums of terms such as `pi/8-pi/24000`, `3pi/4`, `3*pi/4`, `0`, `0.25`.
    /// Terms with an integer coefficient and denominator are kept exact.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(Error::parse(s, "empty time expression"));
        }
        let mut exact = Some(Rational64::zero());
        let mut value = 0.0;
        for (sign, raw) in split_terms(&compact) {
            if raw.is_empty() {
                return Err(Error::parse(s, "dangling sign"));
            }
            let term = parse_term(raw).map_err(|reason| Error::parse(s, reason))?;
            match term {
                Term::PiMultiple(r) => {
                    let r = if sign < 0 { -r } else { r };
                    value += PI * (*r.numer() as f64) / (*r.denom() as f64);
                    exact = exact.and_then(|acc| acc.checked_add(&r));
                }
                Term::Real(x) => {
                    let x = if sign < 0 { -x } else { x };
                    value += x;
                    if x != 0.0 {
                        exact = None;
                    }
                }
            }
        }
        if !value.is_finite() {
            return Err(Error::parse(s, "time is not finite"));
        }
        Ok(match exact {
            Some(r) => Tau::from_pi_multiple(r),
            None => Tau::new(value),
        })
    }
}

/// Splits on top-level `+`/`-`, leaving exponent signs (`1e-3`) attached.
fn split_terms(s: &str) -> Vec<(i8, &str)> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut sign = 1i8;
    let mut start = 0usize;
    let mut i = 0usize;
    if let Some(&b) = bytes.first() {
        if b == b'+' || b == b'-' {
            sign = if b == b'-' { -1 } else { 1 };
            start = 1;
            i = 1;
        }
    }
    while i < bytes.len() {
        let b = bytes[i];
        let after_exponent =
            i > start && matches!(bytes[i - 1], b'e' | b'E') && i >= 2 && bytes[i - 2].is_ascii_digit();
        if (b == b'+' || b == b'-') && i > start && !after_exponent {
            out.push((sign, &s[start..i]));
            sign = if b == b'-' { -1 } else { 1 };
            start = i + 1;
        }
        i += 1;
    }
    out.push((sign, &s[start..]));
    out
}

fn parse_term(raw: &str) -> std::result::Result<Term, String> {
    let pi_pos = raw.find("pi").map(|p| (p, 2)).or_else(|| raw.find('π').map(|p| (p, 'π'.len_utf8())));
    match pi_pos {
        Some((pos, len)) => {
            let coeff = raw[..pos].trim_end_matches('*');
            let rest = &raw[pos + len..];
            let den = match rest {
                "" => Some(1i64),
                r if r.starts_with('/') => match r[1..].parse::<i64>() {
                    Ok(0) => return Err("division by zero".into()),
                    Ok(d) => Some(d),
                    Err(_) => None,
                },
                _ => return Err(format!("unexpected '{rest}' after pi")),
            };
            let num = if coeff.is_empty() { Some(1i64) } else { coeff.parse::<i64>().ok() };
            match (num, den) {
                (Some(n), Some(d)) => Ok(Term::PiMultiple(Rational64::new(n, d))),
                _ => {
                    let c = if coeff.is_empty() {
                        1.0
                    } else {
                        coeff.parse::<f64>().map_err(|_| format!("bad coefficient '{coeff}'"))?
                    };
                    let d = if rest.is_empty() {
                        1.0
                    } else {
                        rest[1..].parse::<f64>().map_err(|_| format!("bad denominator '{}'", &rest[1..]))?
                    };
                    if d == 0.0 {
                        return Err("division by zero".into());
                    }
                    Ok(Term::Real(c * PI / d))
                }
            }
        }
        None => {
            if let Some((a, b)) = raw.split_once('/') {
                let a: f64 = a.parse().map_err(|_| format!("bad number '{a}'"))?;
                let b: f64 = b.parse().map_err(|_| format!("bad number '{b}'"))?;
                if b == 0.0 {
                    return Err("division by zero".into());
                }
                return Ok(Term::Real(a / b));
            }
            let x: f64 = raw.parse().map_err(|_| format!("bad term '{raw}'"))?;
            if x == 0.0 {
                Ok(Term::PiMultiple(Rational64::zero()))
            } else {
                Ok(Term::Real(x))
            }
        }
    }
}

/// `steps` evenly spaced times from `start` to `end` inclusive. Exact when
/// both endpoints are exact multiples of pi.
pub fn linspace(start: Tau, end: Tau, steps: usize) -> Vec<Tau> {
    if steps == 0 {
        return Vec::new();
    }
    if steps == 1 {
        return vec![start];
    }
    let last = (steps - 1) as i64;
    if let (Some(a), Some(b)) = (start.pi_multiple, end.pi_multiple) {
        let span = b - a;
        let exact: Option<Vec<Tau>> = (0..steps as i64)
            .map(|i| {
                span.checked_mul(&Rational64::new(i, last)).and_then(|x| a.checked_add(&x)).map(Tau::from_pi_multiple)
            })
            .collect();
        if let Some(v) = exact {
            return v;
        }
    }
    let h = (end.value - start.value) / last as f64;
    (0..steps)
        .map(|i| if i + 1 == steps { Tau::new(end.value) } else { Tau::new(start.value + i as f64 * h) })
        .collect()
}
