//! Densities on `[0, ∞)` made of Dirac atoms plus piecewise continuous parts.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_with_breaks, Tolerance};
use crate::real::Real;

pub type Curve<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct Atom<T> {
    pub location: T,
    pub mass: T,
}

/// Continuous density on `[lo, hi)`. When an antiderivative is known the
/// CDF is evaluated in closed form, otherwise by quadrature.
#[derive(Clone)]
pub struct Piece<T> {
    pub lo: T,
    pub hi: T,
    density: Curve<T>,
    antiderivative: Option<Curve<T>>,
}

impl<T: Real> Piece<T> {
    pub fn new(lo: T, hi: T, density: Curve<T>) -> Self {
        Self { lo, hi, density, antiderivative: None }
    }

    pub fn with_antiderivative(mut self, antiderivative: Curve<T>) -> Self {
        self.antiderivative = Some(antiderivative);
        self
    }

    pub fn eval(&self, s: T) -> T {
        (self.density)(s)
    }

    pub fn has_antiderivative(&self) -> bool {
        self.antiderivative.is_some()
    }

    /// `∫_lo^{min(s,hi)}` of the density.
    fn mass_below(&self, s: T) -> T {
        if s <= self.lo {
            return T::zero();
        }
        let upper = s.min(self.hi);
        match &self.antiderivative {
            Some(g) => g(upper) - g(self.lo),
            None => self.quad(self.lo, upper),
        }
    }

    fn quad(&self, a: T, b: T) -> T {
        let f = &self.density;
        integrate(|x| f(x), a, b, Tolerance::default()).map(|(v, _)| v).unwrap_or(T::nan())
    }

    fn mass_between(&self, a: T, b: T) -> T {
        let a = a.max(self.lo);
        let b = b.min(self.hi);
        if b <= a {
            return T::zero();
        }
        match &self.antiderivative {
            Some(g) => g(b) - g(a),
            None => self.quad(a, b),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for Piece<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Piece")
            .field("lo", &self.lo)
            .field("hi", &self.hi)
            .field("closed_form_cdf", &self.antiderivative.is_some())
            .finish()
    }
}

/// Probability (or intensity) density: atoms plus disjoint continuous pieces.
#[derive(Debug, Clone)]
pub struct MixedDensity<T> {
    atoms: Vec<Atom<T>>,
    pieces: Vec<Piece<T>>,
    total_mass: T,
}

impl<T: Real> MixedDensity<T> {
    pub fn new(mut atoms: Vec<Atom<T>>, mut pieces: Vec<Piece<T>>) -> Result<Self> {
        for a in &atoms {
            if !(a.location >= T::zero() && a.mass >= T::zero()) {
                return Err(Error::Domain(format!("atom must have location >= 0 and mass >= 0: {a:?}")));
            }
        }
        atoms.sort_by(|x, y| x.location.partial_cmp(&y.location).unwrap_or(std::cmp::Ordering::Equal));
        pieces.sort_by(|x, y| x.lo.partial_cmp(&y.lo).unwrap_or(std::cmp::Ordering::Equal));
        for w in pieces.windows(2) {
            if w[1].lo < w[0].hi {
                return Err(Error::Domain("density pieces overlap".into()));
            }
        }
        for p in &pieces {
            if !(p.lo >= T::zero() && p.hi > p.lo) {
                return Err(Error::Domain(format!("bad piece interval [{}, {})", p.lo, p.hi)));
            }
        }
        let mut total = atoms.iter().fold(T::zero(), |acc, a| acc + a.mass);
        for p in &pieces {
            total = total + p.mass_below(p.hi);
        }
        Ok(Self { atoms, pieces, total_mass: total })
    }

    pub fn atoms(&self) -> &[Atom<T>] {
        &self.atoms
    }

    pub fn pieces(&self) -> &[Piece<T>] {
        &self.pieces
    }

    pub fn total_mass(&self) -> T {
        self.total_mass
    }

    /// Right end of the support (largest atom or piece end).
    pub fn support_end(&self) -> T {
        let a = self.atoms.iter().map(|a| a.location).fold(T::zero(), T::max);
        self.pieces.iter().map(|p| p.hi).fold(a, T::max)
    }

    /// Piece boundaries and atom locations, sorted and deduplicated.
    pub fn breakpoints(&self) -> Vec<T> {
        let mut pts: Vec<T> = self.pieces.iter().flat_map(|p| [p.lo, p.hi]).collect();
        pts.extend(self.atoms.iter().map(|a| a.location));
        pts.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
        pts.dedup();
        pts
    }

    /// Continuous part at `s`; right-continuous at piece boundaries, zero outside.
    pub fn density(&self, s: T) -> T {
        self.pieces
            .iter()
            .find(|p| s >= p.lo && s < p.hi)
            .map(|p| p.eval(s))
            .unwrap_or_else(T::zero)
    }

    /// Mass in `[0, s]` (atoms at `s` included).
    pub fn cdf(&self, s: T) -> T {
        self.continuous_cdf(s) + self.atom_mass_where(|loc| loc <= s)
    }

    /// Mass in `[0, s)`.
    pub fn cdf_left(&self, s: T) -> T {
        self.continuous_cdf(s) + self.atom_mass_where(|loc| loc < s)
    }

    pub fn continuous_cdf(&self, s: T) -> T {
        self.pieces.iter().fold(T::zero(), |acc, p| acc + p.mass_below(s))
    }

    /// Mass of the continuous part in `[a, b]`.
    pub fn continuous_mass_between(&self, a: T, b: T) -> T {
        self.pieces.iter().fold(T::zero(), |acc, p| acc + p.mass_between(a, b))
    }

    fn atom_mass_where(&self, keep: impl Fn(T) -> bool) -> T {
        self.atoms.iter().filter(|a| keep(a.location)).fold(T::zero(), |acc, a| acc + a.mass)
    }

    /// CDF at every point of an ascending slice. Quadrature-backed pieces are
    /// integrated incrementally between consecutive points.
    pub fn cdf_sorted(&self, points: &[T]) -> Vec<T> {
        if self.pieces.iter().all(Piece::has_antiderivative) {
            return points.iter().map(|&s| self.cdf(s)).collect();
        }
        let mut out = Vec::with_capacity(points.len());
        let mut acc = T::zero();
        let mut prev = T::zero();
        for &s in points {
            if s > prev {
                for p in &self.pieces {
                    acc = acc + p.mass_between(prev, s);
                }
                prev = s;
            }
            out.push(acc + self.atom_mass_where(|loc| loc <= s));
        }
        out
    }

    /// `∫ g(s) dP(s)` over atoms and pieces.
    pub fn expect(&self, g: impl Fn(T) -> T) -> Result<T> {
        let mut total = self.atoms.iter().fold(T::zero(), |acc, a| acc + a.mass * g(a.location));
        for p in &self.pieces {
            let (v, _) = integrate_with_breaks(|s| g(s) * p.eval(s), p.lo, p.hi, &[], Tolerance::default())?;
            total = total + v;
        }
        Ok(total)
    }

    /// `∫ s dP(s)`.
    pub fn mean(&self) -> Result<T> {
        self.expect(|s| s)
    }

    /// Total mass recomputed by quadrature, independent of any antiderivative.
    pub fn quadrature_mass(&self) -> Result<T> {
        self.expect(|_| T::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn half_atom_half_uniform() -> MixedDensity<f64> {
        MixedDensity::new(
            vec![Atom { location: 0.0, mass: 0.5 }],
            vec![Piece::new(1.0, 2.0, Arc::new(|_| 0.5))],
        )
        .unwrap()
    }

    #[test]
    fn cdf_includes_atoms_and_pieces() {
        let d = half_atom_half_uniform();
        assert_relative_eq!(d.total_mass(), 1.0, max_relative = 1e-14);
        assert_eq!(d.cdf_left(0.0), 0.0);
        assert_eq!(d.cdf(0.0), 0.5);
        assert_eq!(d.cdf(0.99), 0.5);
        assert_relative_eq!(d.cdf(1.5), 0.75, max_relative = 1e-14);
        assert_relative_eq!(d.cdf(10.0), 1.0, max_relative = 1e-14);
        assert_relative_eq!(d.mean().unwrap(), 0.75, max_relative = 1e-13);
    }

    #[test]
    fn density_is_right_continuous_and_zero_outside() {
        let d = half_atom_half_uniform();
        assert_eq!(d.density(1.0), 0.5);
        assert_eq!(d.density(2.0), 0.0);
        assert_eq!(d.density(0.5), 0.0);
    }

    #[test]
    fn sorted_cdf_matches_pointwise() {
        let d = MixedDensity::new(vec![], vec![Piece::new(0.0, 3.0, Arc::new(|s: f64| (-s).exp()))]).unwrap();
        let pts = [0.0, 0.1, 0.5, 0.5, 2.0, 4.0];
        let many = d.cdf_sorted(&pts);
        for (p, c) in pts.iter().zip(many) {
            assert_relative_eq!(c, d.cdf(*p), epsilon = 1e-12);
        }
    }

    #[test]
    fn rejects_overlaps_and_negative_mass() {
        let pieces = vec![Piece::new(0.0, 2.0, Arc::new(|_| 0.1)), Piece::new(1.0, 3.0, Arc::new(|_| 0.1))];
        assert!(MixedDensity::<f64>::new(vec![], pieces).is_err());
        assert!(MixedDensity::new(vec![Atom { location: 1.0, mass: -0.1 }], vec![]).is_err());
    }
}
