//! q-Pochhammer symbols `(a;q)_r = ∏_{n<r} (1 − a qⁿ)` (finite and infinite)
//! with their first two derivatives in `a`.
//!
//! All evaluations go through one pass that factors out the `n = 0` term:
//!
//! ```text
//! (a;q)       = (1 − a)·(aq;q)
//! ∂(a;q)      = −[(aq;q) + (a;q)·T₁]
//! ∂²(a;q)     = 2(aq;q)·T₁ + (a;q)·(T₁² − T₂)
//! T_k         = Σ_{j≥1} (q^j / (1 − a q^j))^k
//! ```
//!
//! which equals `(a;q)·(S₁² − S₂)` for the second derivative but stays finite
//! at `a = 1`, where the first factor vanishes.

use crate::error::{Error, Result};
use crate::real::Real;

/// Default truncation tolerance for the infinite symbol.
pub const DEFAULT_EPS: f64 = 1e-12;

/// Number of factors in the product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Order {
    Infinite,
    Finite(u32),
}

/// `a ↦ (a;q)_order` for a fixed `q`.
#[derive(Debug, Clone, Copy)]
pub struct Pochhammer<T> {
    q: T,
    order: Order,
    terms: usize,
}

#[derive(Debug, Clone, Copy)]
struct Pass<T> {
    value: T,
    rest: T,
    t1: T,
    t2: T,
}

impl<T: Real> Pochhammer<T> {
    /// Infinite symbol truncated so that, for every `|a| ≤ 1`, the dropped
    /// factors change the product by a relative `eps` at most (absolute for
    /// `a ∈ [0, 1]`) and the derivative series tails are below `eps`.
    pub fn infinite(q: T, eps: T) -> Result<Self> {
        check_q(q)?;
        check_eps(eps)?;
        Ok(Self { q, order: Order::Infinite, terms: infinite_terms(q, eps) })
    }

    pub fn finite(q: T, r: u32) -> Self {
        Self { q, order: Order::Finite(r), terms: r as usize }
    }

    pub fn new(q: T, order: Order, eps: T) -> Result<Self> {
        match order {
            Order::Infinite => Self::infinite(q, eps),
            Order::Finite(r) => Ok(Self::finite(q, r)),
        }
    }

    pub fn q(&self) -> T {
        self.q
    }

    pub fn order(&self) -> Order {
        self.order
    }

    /// Number of factors actually multiplied.
    pub fn terms(&self) -> usize {
        self.terms
    }

    fn pass(&self, a: T) -> Pass<T> {
        let one = T::one();
        if self.terms == 0 {
            // empty product: constant one, every derivative zero
            return Pass { value: one, rest: T::zero(), t1: T::zero(), t2: T::zero() };
        }
        let mut rest = one;
        let mut t1 = T::zero();
        let mut t2 = T::zero();
        let mut qj = one;
        for _ in 1..self.terms {
            qj = qj * self.q;
            let factor = one - a * qj;
            rest = rest * factor;
            let u = qj / factor;
            t1 = t1 + u;
            t2 = t2 + u * u;
        }
        Pass { value: (one - a) * rest, rest, t1, t2 }
    }

    pub fn value(&self, a: T) -> T {
        self.pass(a).value
    }

    /// `∂/∂a (a;q)`.
    pub fn d1(&self, a: T) -> T {
        let p = self.pass(a);
        -(p.rest + p.value * p.t1)
    }

    /// `∂²/∂a² (a;q)`.
    pub fn d2(&self, a: T) -> T {
        let p = self.pass(a);
        let two = T::lit(2.0);
        two * p.rest * p.t1 + p.value * (p.t1 * p.t1 - p.t2)
    }

    /// `F(a) = a ∂(a;q) − (a;q)`.
    pub fn f(&self, a: T) -> T {
        let p = self.pass(a);
        -a * (p.rest + p.value * p.t1) - p.value
    }

    /// Value and first derivative in one pass.
    pub fn value_d1(&self, a: T) -> (T, T) {
        let p = self.pass(a);
        (p.value, -(p.rest + p.value * p.t1))
    }
}

fn check_q<T: Real>(q: T) -> Result<()> {
    if !(q > T::zero() && q < T::one()) {
        return Err(Error::Domain(format!("q must lie in (0,1), got {q}")));
    }
    Ok(())
}

fn check_eps<T: Real>(eps: T) -> Result<()> {
    if !(eps > T::zero() && eps <= T::lit(1e-3)) {
        return Err(Error::Domain(format!("truncation eps must lie in (0, 1e-3], got {eps}")));
    }
    Ok(())
}

/// `J = ⌈log(eps (1−q)²) / log q⌉`: the product tail `Σ_{n≥J} |a| qⁿ` is then at
/// most `eps (1−q)` and the series tails `Σ_{j≥J} qʲ/(1−aqʲ)` at most `eps`.
fn infinite_terms<T: Real>(q: T, eps: T) -> usize {
    let one = T::one();
    let j = (eps * (one - q) * (one - q)).ln() / q.ln();
    j.ceil().to_usize().unwrap_or(usize::MAX).max(1)
}

/// `(a;q)_∞`.
pub fn qpoch_inf<T: Real>(a: T, q: T, eps: T) -> Result<T> {
    check_a(a)?;
    Ok(Pochhammer::infinite(q, eps)?.value(a))
}

/// `(a;q)_r`; `r = 0` is the empty product.
pub fn qpoch_fin<T: Real>(a: T, q: T, r: u32) -> T {
    Pochhammer::finite(q, r).value(a)
}

/// `∂/∂a (a;q)_∞`, finite at `a = 1` where it equals `−(q;q)_∞`.
pub fn dqpoch_inf<T: Real>(a: T, q: T, eps: T) -> Result<T> {
    check_a(a)?;
    Ok(Pochhammer::infinite(q, eps)?.d1(a))
}

pub fn dqpoch_fin<T: Real>(a: T, q: T, r: u32) -> T {
    Pochhammer::finite(q, r).d1(a)
}

/// `∂²/∂a² (a;q)_∞` for `a < 1`.
pub fn d2qpoch_inf<T: Real>(a: T, q: T, eps: T) -> Result<T> {
    check_a(a)?;
    if a >= T::one() {
        return Err(Error::Domain(format!("second derivative needs a < 1, got {a}")));
    }
    Ok(Pochhammer::infinite(q, eps)?.d2(a))
}

pub fn d2qpoch_fin<T: Real>(a: T, q: T, r: u32) -> T {
    Pochhammer::finite(q, r).d2(a)
}

/// `F(a) = a ∂(a;q)_∞ − (a;q)_∞` at the default truncation.
pub fn f_inf<T: Real>(a: T, q: T) -> Result<T> {
    check_a(a)?;
    Ok(Pochhammer::infinite(q, T::lit(DEFAULT_EPS))?.f(a))
}

/// `F_r(a) = a ∂(a;q)_r − (a;q)_r`.
pub fn f_fin<T: Real>(a: T, q: T, r: u32) -> T {
    Pochhammer::finite(q, r).f(a)
}

fn check_a<T: Real>(a: T) -> Result<()> {
    if !(a.abs() <= T::one()) {
        return Err(Error::Domain(format!("|a| must be at most 1, got {a}")));
    }
    Ok(())
}
