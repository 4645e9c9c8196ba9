//! Logarithm bases and their classification.
//!
//! Transcendence cannot be decided numerically, so the caller declares the
//! class of a base. Integer and integer-root bases are validated exactly.

use crate::error::{Error, Result};
use crate::qpoch::Order;
use crate::real::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum BaseKind {
    Transcendental,
    Integer,
    IntegerRoot,
}

/// A classified base `b > 1` for the sequence `log_b n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LogBase<T> {
    /// Declared transcendental by the caller.
    Transcendental { b: T },
    /// `b ∈ ℤ`, `b ≥ 2`.
    Integer { b: u64 },
    /// `b = m^{1/r}` with `m^{1/p} ∉ ℤ` for every prime `p | r`, `r ≥ 2`.
    IntegerRoot { m: u64, r: u32 },
}

impl<T: Real> LogBase<T> {
    pub fn transcendental(b: T) -> Result<Self> {
        if !b.is_finite() || b <= T::one() {
            return Err(Error::InvalidBase(format!("transcendental base must be finite and > 1, got {b}")));
        }
        Ok(LogBase::Transcendental { b })
    }

    pub fn integer(b: u64) -> Result<Self> {
        if b < 2 {
            return Err(Error::InvalidBase(format!("integer base must be >= 2, got {b}")));
        }
        Ok(LogBase::Integer { b })
    }

    pub fn integer_root(m: u64, r: u32) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidBase(format!("root base needs m >= 2, got {m}")));
        }
        match r {
            0 => return Err(Error::InvalidBase("root base needs r >= 1".into())),
            1 => {
                return Err(Error::InvalidBase(format!(
                    "root base with r = 1 is the integer base {m}; use the integer kind"
                )))
            }
            _ => {}
        }
        for p in prime_divisors(r) {
            if exact_root(m, p).is_some() {
                return Err(Error::InvalidBase(format!(
                    "m = {m} is a perfect {p}-th power and {p} divides r = {r}"
                )));
            }
        }
        Ok(LogBase::IntegerRoot { m, r })
    }

    pub fn kind(&self) -> BaseKind {
        match self {
            LogBase::Transcendental { .. } => BaseKind::Transcendental,
            LogBase::Integer { .. } => BaseKind::Integer,
            LogBase::IntegerRoot { .. } => BaseKind::IntegerRoot,
        }
    }

    /// Natural logarithm of the base.
    pub fn ln_b(&self) -> T {
        match *self {
            LogBase::Transcendental { b } => b.ln(),
            LogBase::Integer { b } => T::lit(b as f64).ln(),
            LogBase::IntegerRoot { m, r } => T::lit(m as f64).ln() / T::lit(r as f64),
        }
    }

    pub fn value(&self) -> T {
        match *self {
            LogBase::Transcendental { b } => b,
            LogBase::Integer { b } => T::lit(b as f64),
            LogBase::IntegerRoot { .. } => self.ln_b().exp(),
        }
    }

    /// `q = b^{-1}`.
    pub fn q(&self) -> T {
        (-self.ln_b()).exp()
    }

    /// Number of factors in the Pochhammer symbol governing the limit laws:
    /// infinite for transcendental bases, `r` for `m^{1/r}`, one for integers.
    pub fn order(&self) -> Order {
        match *self {
            LogBase::Transcendental { .. } => Order::Infinite,
            LogBase::Integer { .. } => Order::Finite(1),
            LogBase::IntegerRoot { r, .. } => Order::Finite(r),
        }
    }

    /// Limiting fraction of exactly-zero gaps, `b^{-r}` (zero if transcendental).
    pub fn zero_gap_mass(&self) -> T {
        match *self {
            LogBase::Transcendental { .. } => T::zero(),
            LogBase::Integer { b } => T::one() / T::lit(b as f64),
            LogBase::IntegerRoot { m, .. } => T::one() / T::lit(m as f64),
        }
    }
}

fn prime_divisors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Returns `c` with `c^p = m` if it exists.
fn exact_root(m: u64, p: u32) -> Option<u64> {
    let guess = (m as f64).powf(1.0 / p as f64).round() as u64;
    let lo = guess.saturating_sub(1).max(1);
    (lo..=guess + 1).find(|&c| c.checked_pow(p) == Some(m))
}
