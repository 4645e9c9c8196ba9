//! Limiting gap laws of `{log_b n}` for transcendental, integer and
//! integer-root bases, plus the counting family `E^{(b)}(k, L)`.
//!
//! Every law is built from the Pochhammer symbol `(a; 1/b)` of the base's
//! order (infinite, `r`, or one for integers):
//!
//! * `R(a)`: atom `(q;q)_{order−1}` at `a = 1`, density `∂²(a;q)` on `(0, 1)`.
//! * `P̃(s) = b^{-r}δ(s) + (1−q)² R((1−q)s)`, the unfolded gap law.
//! * `P(x, s) = (b^{x−1} ln b)² R(s b^{x−1} ln b)` plus the x-dependent zero atom.
//! * `P(s) = ∫₀¹ P(x, s) dx`, written through `F(a) = a∂(a;q) − (a;q)`.
//!
//! The raw law has the closed-form antiderivative `∫ s⁻² F(cs) ds = (cs;q)/s`,
//! so all CDFs are analytic.

use std::sync::Arc;

use crate::base::LogBase;
use crate::density::{Atom, MixedDensity, Piece};
use crate::error::{Error, Result};
use crate::qpoch::{Order, Pochhammer, DEFAULT_EPS};
use crate::quad::{integrate, Tolerance};
use crate::real::Real;
use crate::superposition::e_conv_distribution;

/// Density of `η_n = {log_b(n/N)}`: `ρ(x) = ln b · bˣ / (b − 1)`.
pub fn rho<T: Real>(x: T, b: T) -> Result<T> {
    if !(b > T::one()) {
        return Err(Error::Domain(format!("base must exceed 1, got {b}")));
    }
    if !(x >= T::zero() && x <= T::one()) {
        return Err(Error::Domain(format!("x must lie in [0,1], got {x}")));
    }
    let ln_b = b.ln();
    Ok(ln_b / (b - T::one()) * (x * ln_b).exp())
}

/// Below this value of `s ln b` the first raw piece is integrated directly
/// instead of differencing `F`, which would cancel catastrophically.
const SMALL_ARGUMENT: f64 = 1e-2;

/// Limit laws for one base.
#[derive(Debug, Clone, Copy)]
pub struct LimitLaw<T> {
    base: LogBase<T>,
    symbol: Pochhammer<T>,
    ln_b: T,
    q: T,
}

impl<T: Real> LimitLaw<T> {
    pub fn new(base: LogBase<T>) -> Result<Self> {
        Self::with_eps(base, T::lit(DEFAULT_EPS).max(T::epsilon() * T::lit(8.0)))
    }

    pub fn with_eps(base: LogBase<T>, eps: T) -> Result<Self> {
        let q = base.q();
        let symbol = Pochhammer::new(q, base.order(), eps)?;
        Ok(Self { base, symbol, ln_b: base.ln_b(), q })
    }

    pub fn base(&self) -> &LogBase<T> {
        &self.base
    }

    pub fn symbol(&self) -> &Pochhammer<T> {
        &self.symbol
    }

    fn b(&self) -> T {
        self.ln_b.exp()
    }

    fn is_integer(&self) -> bool {
        self.base.order() == Order::Finite(1)
    }

    /// Mass of the atom of `R` at `a = 1`: `(q;q)_∞` or `(q;q)_{r−1}`.
    pub fn r_atom_mass(&self) -> T {
        match self.symbol.order() {
            Order::Infinite => self.symbol.value(self.q),
            Order::Finite(r) => Pochhammer::finite(self.q, r - 1).value(self.q),
        }
    }

    /// Continuous part of `R(a)`: `∂²(a;q)` on `(0,1)`, zero elsewhere.
    pub fn r_continuous(&self, a: T) -> T {
        if a > T::zero() && a < T::one() {
            self.symbol.d2(a)
        } else {
            T::zero()
        }
    }

    /// `R` as a density in `a`.
    pub fn limit_r(&self) -> Result<MixedDensity<T>> {
        let atoms = vec![Atom { location: T::one(), mass: self.r_atom_mass() }];
        let mut pieces = Vec::new();
        if !self.is_integer() {
            let (s1, s2) = (self.symbol, self.symbol);
            pieces.push(
                Piece::new(T::zero(), T::one(), Arc::new(move |a| s1.d2(a)))
                    .with_antiderivative(Arc::new(move |a| s2.d1(a))),
            );
        }
        MixedDensity::new(atoms, pieces)
    }

    /// Continuous part of the raw gap law `P(s)`.
    pub fn gap_density_value(&self, s: T) -> T {
        raw_density(&self.symbol, self.ln_b, self.q, s)
    }

    /// The raw gap law `P(s)`, jumps at `1/ln b` and `b/ln b`, zero beyond.
    pub fn gap_density(&self) -> Result<MixedDensity<T>> {
        let (ln_b, q) = (self.ln_b, self.q);
        let mid = T::one() / ln_b;
        let end = self.b() / ln_b;
        let mut atoms = Vec::new();
        let zero_mass = self.base.zero_gap_mass();
        if zero_mass > T::zero() {
            atoms.push(Atom { location: T::zero(), mass: zero_mass });
        }
        let mut pieces = Vec::new();
        if !self.is_integer() {
            let (d, g) = (self.symbol, self.symbol);
            pieces.push(
                Piece::new(T::zero(), mid, Arc::new(move |s| raw_density(&d, ln_b, q, s)))
                    .with_antiderivative(Arc::new(move |s| raw_inner_antiderivative(&g, ln_b, q, s))),
            );
        }
        let (d, g) = (self.symbol, self.symbol);
        pieces.push(
            Piece::new(mid, end, Arc::new(move |s| raw_density(&d, ln_b, q, s))).with_antiderivative(Arc::new(
                move |s| {
                    let a1 = s * ln_b;
                    -g.value(a1 * q) / a1
                },
            )),
        );
        MixedDensity::new(atoms, pieces)
    }

    /// Continuous part of the joint law `P(x, s) = (b^{x−1} ln b)² R(s b^{x−1} ln b)`.
    pub fn joint_density(&self, x: T, s: T) -> Result<T> {
        check_unit(x)?;
        let c = ((x - T::one()) * self.ln_b).exp() * self.ln_b;
        Ok(c * c * self.r_continuous(s * c))
    }

    /// The joint law at fixed `x` as a density in `s`; its mass is `ρ(x)`.
    /// Carries the atom at `s = b^{1−x}/ln b` and, for integer and root
    /// bases, the zero-gap atom `ln b/(b−1) · b^{x−r}`.
    pub fn joint_slice(&self, x: T) -> Result<MixedDensity<T>> {
        check_unit(x)?;
        let c = ((x - T::one()) * self.ln_b).exp() * self.ln_b;
        let mut atoms = vec![Atom { location: T::one() / c, mass: c * self.r_atom_mass() }];
        let zero_mass = self.base.zero_gap_mass();
        if zero_mass > T::zero() {
            let density_at_x = self.ln_b / (self.b() - T::one()) * (x * self.ln_b).exp();
            atoms.push(Atom { location: T::zero(), mass: density_at_x * zero_mass });
        }
        let mut pieces = Vec::new();
        if !self.is_integer() {
            let (d, g) = (self.symbol, self.symbol);
            pieces.push(
                Piece::new(T::zero(), T::one() / c, Arc::new(move |s| c * c * d.d2(c * s)))
                    .with_antiderivative(Arc::new(move |s| c * g.d1(c * s))),
            );
        }
        MixedDensity::new(atoms, pieces)
    }

    /// Gap law of the unfolded sequence, `P̃(s)`.
    pub fn rescaled_density(&self) -> Result<MixedDensity<T>> {
        let c = T::one() - self.q;
        let mut atoms = vec![Atom { location: T::one() / c, mass: c * self.r_atom_mass() }];
        let zero_mass = self.base.zero_gap_mass();
        if zero_mass > T::zero() {
            atoms.push(Atom { location: T::zero(), mass: zero_mass });
        }
        let mut pieces = Vec::new();
        if !self.is_integer() {
            let (d, g) = (self.symbol, self.symbol);
            pieces.push(
                Piece::new(T::zero(), T::one() / c, Arc::new(move |s| c * c * d.d2(c * s)))
                    .with_antiderivative(Arc::new(move |s| c * g.d1(c * s))),
            );
        }
        MixedDensity::new(atoms, pieces)
    }

    /// `P̃(s)` continuous part evaluated pointwise.
    pub fn rescaled_density_value(&self, s: T) -> T {
        let c = T::one() - self.q;
        c * c * self.r_continuous(c * s)
    }
}

fn check_unit<T: Real>(x: T) -> Result<()> {
    if !(x >= T::zero() && x <= T::one()) {
        return Err(Error::Domain(format!("x must lie in [0,1], got {x}")));
    }
    Ok(())
}

fn raw_density<T: Real>(sym: &Pochhammer<T>, ln_b: T, q: T, s: T) -> T {
    if !(s > T::zero()) {
        return T::zero();
    }
    let a1 = s * ln_b;
    let a0 = a1 * q;
    let scale = T::one() / (s * s * ln_b);
    if a1 < T::one() {
        if sym.order() == Order::Finite(1) {
            return T::zero();
        }
        let diff = if a1 < T::lit(SMALL_ARGUMENT) {
            // ∫_{a0}^{a1} t ∂²(t;q) dt = F(a1) − F(a0)
            integrate(|t| t * sym.d2(t), a0, a1, Tolerance::default()).map(|(v, _)| v).unwrap_or(T::nan())
        } else {
            sym.f(a1) - sym.f(a0)
        };
        scale * diff
    } else if a0 < T::one() {
        -scale * sym.f(a0)
    } else {
        T::zero()
    }
}

/// `[(a1;q) − (a0;q)] / a1` with `a1 = s ln b`, `a0 = q a1`; tends to
/// `(1 − q)∂(0;q)` as `s → 0`.
fn raw_inner_antiderivative<T: Real>(sym: &Pochhammer<T>, ln_b: T, q: T, s: T) -> T {
    let a1 = s * ln_b;
    if a1 < T::lit(1e-7) {
        let one = T::one();
        return sym.d1(T::zero()) * (one - q) + sym.d2(T::zero()) * (one - q * q) * a1 * T::lit(0.5);
    }
    (sym.value(a1) - sym.value(a1 * q)) / a1
}

/// Largest doubling of the truncation tried by [`family_e`].
const FAMILY_MAX_TERMS: usize = 1 << 24;

/// `E^{(b)}(k, L)` truncated to `J` progressions with `ωⱼ = (b−1)b^{−j}`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct FamilyValue<T> {
    pub value: T,
    /// Truncation actually used.
    pub terms: usize,
    /// `L b^{−J}`, the total frequency mass dropped.
    pub tail_estimate: T,
}

/// Counting statistics `E^{(b)}(k, L)` of the family indexed by `b > 1`.
#[derive(Debug, Clone, Copy)]
pub struct FamilyStats<T> {
    b: T,
    default_terms: usize,
}

impl<T: Real> FamilyStats<T> {
    pub fn new(b: T) -> Result<Self> {
        if !(b > T::one() && b.is_finite()) {
            return Err(Error::Domain(format!("family parameter b must exceed 1, got {b}")));
        }
        let j = (T::lit(1e-10).ln() / (-b.ln())).ceil().to_usize().unwrap_or(2000);
        Ok(Self { b, default_terms: j.clamp(1, 2000) })
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn default_terms(&self) -> usize {
        self.default_terms
    }

    pub fn frequencies(&self, terms: usize) -> Vec<T> {
        let q = T::one() / self.b;
        let mut w = self.b - T::one();
        (0..terms)
            .map(|_| {
                w = w * q;
                w
            })
            .collect()
    }

    /// `(E(0,L), …, E(k_max,L))` at a fixed truncation.
    pub fn distribution(&self, k_max: usize, length: T, terms: usize) -> Vec<T> {
        e_conv_distribution(k_max, length, &self.frequencies(terms))
    }

    pub fn e(&self, k: usize, length: T) -> Result<FamilyValue<T>> {
        family_e(self.b, k, length, self.default_terms)
    }
}

/// `E^{(b)}(k, L)`, starting from `terms` progressions and doubling until
/// consecutive values differ by less than `1e−10`.
pub fn family_e<T: Real>(b: T, k: usize, length: T, terms: usize) -> Result<FamilyValue<T>> {
    let family = FamilyStats::new(b)?;
    if !(length >= T::zero()) {
        return Err(Error::Domain(format!("window length must be >= 0, got {length}")));
    }
    let mut j = terms.max(1);
    let mut value = family.distribution(k, length, j)[k];
    loop {
        let next_j = j.saturating_mul(2);
        let next = family.distribution(k, length, next_j)[k];
        let converged = (next - value).abs() < T::lit(1e-10);
        j = next_j;
        value = next;
        if converged || j >= FAMILY_MAX_TERMS {
            break;
        }
    }
    let tail_estimate = length * (-(T::from_count(j)) * b.ln()).exp();
    Ok(FamilyValue { value, terms: j, tail_estimate })
}
