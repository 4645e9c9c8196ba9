//! The sequences `ξₙ = {log_b n}`, `ηₙ = {log_b(n/N)}` and the unfolded
//! `η̃ₙ = (b^{ηₙ} − 1)/(b − 1)`, plus ordering and scaled gap extraction.

use rayon::prelude::*;

use crate::base::LogBase;
use crate::error::{Error, Result};
use crate::real::Real;

/// Values this close below 1 are snapped to 0.
const SNAP: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Provenance {
    Raw,
    Shifted,
    Unfolded,
}

/// Sorted fractional parts with the wrap element `values[0] + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderedFracs<T> {
    pub values: Vec<T>,
    pub wrap: T,
    pub provenance: Provenance,
}

impl<T> OrderedFracs<T> {
    pub fn n_count(&self) -> usize {
        self.values.len()
    }
}

/// Scaled gaps `N(ξ_{n+1,N} − ξ_{n,N})` and their left endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct GapSample<T> {
    pub scaled_gaps: Vec<T>,
    pub anchors: Vec<T>,
}

impl<T: Real> GapSample<T> {
    pub fn len(&self) -> usize {
        self.scaled_gaps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scaled_gaps.is_empty()
    }

    /// Gaps whose unscaled difference is exactly zero.
    pub fn zero_count(&self) -> usize {
        self.scaled_gaps.iter().filter(|&&g| g == T::zero()).count()
    }
}

/// `x − ⌊x⌋`, with results within `1e−12` of 1 mapped to 0.
pub fn frac<T: Real>(x: T) -> T {
    let f = x - x.floor();
    if f >= T::one() - T::lit(SNAP) {
        T::zero()
    } else {
        f
    }
}

/// `{log_b n}`. For integer and root bases the factors of `b` (resp. `m`)
/// are stripped from `n` first, so `n` and `m·n` give bit-identical values.
pub fn log_frac<T: Real>(base: &LogBase<T>, n: u64) -> T {
    match *base {
        LogBase::Transcendental { b } => frac(T::lit(n as f64).ln() / b.ln()),
        LogBase::Integer { b } => {
            let core = strip_powers(n, b);
            frac(T::lit(core as f64).ln() / T::lit(b as f64).ln())
        }
        LogBase::IntegerRoot { m, r } => {
            let core = strip_powers(n, m);
            frac(T::lit(r as f64) * (T::lit(core as f64).ln() / T::lit(m as f64).ln()))
        }
    }
}

fn strip_powers(mut n: u64, factor: u64) -> u64 {
    while n % factor == 0 {
        n /= factor;
    }
    n
}

fn check_len(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::EmptyInput("sequence length N must be at least 1"));
    }
    Ok(())
}

/// `ξₙ` for `n = 1..=N`, unsorted.
pub fn generate_raw<T: Real>(base: &LogBase<T>, n: usize) -> Result<Vec<T>> {
    check_len(n)?;
    Ok((1..=n as u64).into_par_iter().map(|k| log_frac(base, k)).collect())
}

/// `ηₙ = {ξₙ − ξ_N}`, a rigid rotation of the raw sequence.
pub fn generate_shifted<T: Real>(base: &LogBase<T>, n: usize) -> Result<Vec<T>> {
    check_len(n)?;
    let shift = log_frac(base, n as u64);
    Ok((1..=n as u64).into_par_iter().map(|k| frac(log_frac(base, k) - shift)).collect())
}

/// `T(η) = (b^η − 1)/(b − 1)`, strictly increasing on `[0, 1)`.
pub fn unfold<T: Real>(etas: &[T], base: &LogBase<T>) -> Result<Vec<T>> {
    if let Some(x) = etas.iter().find(|&&x| !(x >= T::zero() && x < T::one())) {
        return Err(Error::Domain(format!("unfolding needs values in [0,1), got {x}")));
    }
    let ln_b = base.ln_b();
    let denom = ln_b.exp_m1();
    Ok(etas.par_iter().map(|&x| (x * ln_b).exp_m1() / denom).collect())
}

/// `η̃ₙ = (bᵏn − N)/(N(b − 1))` for `n ∈ [N b^{−k}, N b^{1−k})`.
pub fn unfold_closed_form<T: Real>(base: &LogBase<T>, n: u64, big_n: u64) -> T {
    let ln_b = base.ln_b();
    let nf = T::lit(n as f64);
    let big = T::lit(big_n as f64);
    let k = -((nf / big).ln() / ln_b).floor();
    let b = ln_b.exp();
    ((k * ln_b).exp() * nf - big) / (big * (b - T::one()))
}

/// Stable sort, wrap element, and scaled gaps (the last gap wraps around).
pub fn order_and_gaps<T: Real>(mut values: Vec<T>, provenance: Provenance) -> Result<(OrderedFracs<T>, GapSample<T>)> {
    check_len(values.len())?;
    if let Some(x) = values.iter().find(|&&x| !(x >= T::zero() && x < T::one())) {
        return Err(Error::Domain(format!("fractional parts must lie in [0,1), got {x}")));
    }
    values.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let n = T::from_count(values.len());
    let wrap = values[0] + T::one();
    let scaled_gaps: Vec<T> = values
        .iter()
        .zip(values.iter().skip(1).chain(std::iter::once(&wrap)))
        .map(|(&lo, &hi)| n * (hi - lo))
        .collect();
    let anchors = values.clone();
    Ok((OrderedFracs { values, wrap, provenance }, GapSample { scaled_gaps, anchors }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::E;

    #[test]
    fn raw_decimal_logs() {
        let b = LogBase::integer(10).unwrap();
        let v = generate_raw::<f64>(&b, 3).unwrap();
        assert_eq!(v[0], 0.0);
        assert_relative_eq!(v[1], 0.301_029_995_7, epsilon = 1e-10);
        assert_relative_eq!(v[2], 0.477_121_254_7, epsilon = 1e-10);
    }

    #[test]
    fn raw_natural_log_of_one() {
        let b = LogBase::transcendental(E).unwrap();
        assert_eq!(generate_raw(&b, 1).unwrap(), vec![0.0]);
        assert!(generate_raw(&b, 0).is_err());
    }

    #[test]
    fn root_base_collides_exactly() {
        let b = LogBase::<f64>::integer_root(10, 2).unwrap();
        let v = generate_raw(&b, 10).unwrap();
        assert_eq!(v[0], v[9]);
        let v = generate_raw(&b, 700).unwrap();
        assert_eq!(v[6], v[69]);
        assert_eq!(v[6], v[699]);
    }

    #[test]
    fn shifted_values() {
        let b = LogBase::transcendental(E).unwrap();
        let v = generate_shifted(&b, 2).unwrap();
        assert_eq!(v[1], 0.0);
        assert_relative_eq!(v[0], 1.0 - 2f64.ln(), epsilon = 1e-15);
        let b = LogBase::integer(10).unwrap();
        assert_eq!(generate_shifted::<f64>(&b, 10).unwrap(), generate_raw(&b, 10).unwrap());
    }

    #[test]
    fn unfolding_map() {
        let b = LogBase::integer(2).unwrap();
        let v = unfold(&[0.0, 0.5], &b).unwrap();
        assert_eq!(v[0], 0.0);
        assert_relative_eq!(v[1], 2f64.sqrt() - 1.0, epsilon = 1e-15);
        let near_one = unfold(&[1.0 - 1e-15], &b).unwrap()[0];
        assert!(near_one < 1.0 && near_one > 1.0 - 1e-14);
        assert!(unfold(&[1.0], &b).is_err());
        assert!(unfold(&[-0.1], &b).is_err());
    }

    #[test]
    fn unfolding_agrees_with_closed_form_at_seventy() {
        let b = LogBase::transcendental(E).unwrap();
        let etas = generate_shifted(&b, 100).unwrap();
        let mapped = unfold(&etas, &b).unwrap();
        let direct = (E * 70.0 - 100.0) / (100.0 * (E - 1.0));
        assert_relative_eq!(mapped[69], direct, epsilon = 1e-12);
        assert_relative_eq!(unfold_closed_form(&b, 70, 100), direct, epsilon = 1e-12);
    }

    #[test]
    fn gaps_of_equally_spaced_points() {
        let (o, g) = order_and_gaps(vec![0.5, 0.0, 0.25, 0.75], Provenance::Raw).unwrap();
        assert_eq!(o.values, vec![0.0, 0.25, 0.5, 0.75]);
        assert_eq!(o.wrap, 1.0);
        assert_eq!(g.scaled_gaps, vec![1.0; 4]);
    }

    #[test]
    fn wrap_gap() {
        let (_, g) = order_and_gaps(vec![0.9, 0.1], Provenance::Raw).unwrap();
        assert_relative_eq!(g.scaled_gaps[0], 1.6, epsilon = 1e-14);
        assert_relative_eq!(g.scaled_gaps[1], 0.4, epsilon = 1e-14);
        assert_eq!(g.anchors, vec![0.1, 0.9]);
    }

    #[test]
    fn duplicates_give_zero_gap() {
        let (_, g) = order_and_gaps(vec![0.3, 0.3, 0.8], Provenance::Raw).unwrap();
        assert_eq!(g.zero_count(), 1);
        assert!(order_and_gaps(Vec::<f64>::new(), Provenance::Raw).is_err());
        assert!(order_and_gaps(vec![1.0], Provenance::Raw).is_err());
    }

    #[test]
    fn frac_snaps_near_one() {
        assert_eq!(frac(2.0 - 1e-14), 0.0);
        assert_eq!(frac(-1e-17), 0.0);
        assert_relative_eq!(frac(-0.25), 0.75);
    }
}
