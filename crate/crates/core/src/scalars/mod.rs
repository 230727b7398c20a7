//! Exact coefficient fields: rational functions in named parameters, and Q(i).

mod gauss;
mod poly;
mod rf;

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed};
use parking_lot::RwLock;
use thiserror::Error;

pub use gauss::GaussRat;
pub use poly::{Monomial, Poly};
pub use rf::ScalarRF;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("assignment hits a pole of the denominator")]
    PoleAtAssignment,
    #[error("no value assigned to parameter `{0}`")]
    UnboundParameter(String),
}

static PARAMS: RwLock<Vec<String>> = RwLock::new(Vec::new());

fn ensure_defaults(v: &mut Vec<String>) {
    if v.is_empty() {
        v.push("q".into());
        v.push("p".into());
    }
}

/// Index of a parameter name, registering it on first use.
///
/// `q` and `p` are always registered first, so they lead the monomial order.
pub fn param_index(name: &str) -> usize {
    if let Some(i) = lookup_param(name) {
        return i;
    }
    let mut w = PARAMS.write();
    ensure_defaults(&mut w);
    if let Some(i) = w.iter().position(|n| n == name) {
        return i;
    }
    w.push(name.to_string());
    w.len() - 1
}

pub fn lookup_param(name: &str) -> Option<usize> {
    {
        let r = PARAMS.read();
        if !r.is_empty() {
            return r.iter().position(|n| n == name);
        }
    }
    let mut w = PARAMS.write();
    ensure_defaults(&mut w);
    w.iter().position(|n| n == name)
}

pub fn param_name(i: usize) -> String {
    let r = PARAMS.read();
    match r.get(i) {
        Some(n) => n.clone(),
        None if i == 0 => "q".into(),
        None if i == 1 => "p".into(),
        None => format!("t{i}"),
    }
}

/// Minimal field interface shared by the exact linear algebra.
pub trait Field: Clone + PartialEq + fmt::Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn inverse(&self) -> Option<Self>;
    /// Rough size, used to prefer cheap pivots.
    fn weight(&self) -> usize {
        0
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, exps: &[i64]) -> fmt::Result {
    let mut first = true;
    for (i, &e) in exps.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "{}", param_name(i))?;
        if e != 1 {
            write!(f, "^{e}")?;
        }
    }
    Ok(())
}

/// Writes `c1*m1 + c2*m2 - ...` with signed exponents.
pub(crate) fn write_terms(f: &mut fmt::Formatter<'_>, parts: &[(BigRational, Vec<i64>)]) -> fmt::Result {
    if parts.is_empty() {
        return write!(f, "0");
    }
    for (k, (c, exps)) in parts.iter().enumerate() {
        let neg = c.is_negative();
        if k == 0 {
            if neg {
                write!(f, "-")?;
            }
        } else {
            write!(f, "{}", if neg { " - " } else { " + " })?;
        }
        let a = c.abs();
        let unit = exps.iter().all(|&e| e == 0);
        if unit {
            write!(f, "{a}")?;
        } else {
            if !a.is_one() {
                write!(f, "{a}*")?;
            }
            write_monomial(f, exps)?;
        }
    }
    Ok(())
}

