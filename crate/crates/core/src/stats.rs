//! Empirical distributions of gap samples and distances to limit laws.

use crate::density::MixedDensity;
use crate::error::{Error, Result};
use crate::real::Real;
use crate::sequence::GapSample;

/// Step function `F̂(s) = #{values ≤ s}/n`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf<T> {
    sorted: Vec<T>,
    zero_fraction: T,
}

impl<T: Real> EmpiricalCdf<T> {
    pub fn from_values(mut values: Vec<T>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyInput("empirical CDF needs at least one value"));
        }
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::Domain("NaN in sample".into()));
        }
        values.sort_by(|a, b| a.partial_cmp(b).expect("no NaN"));
        let zeros = values.iter().take_while(|&&v| v <= T::zero()).count();
        let zero_fraction = T::from_count(zeros) / T::from_count(values.len());
        Ok(Self { sorted: values, zero_fraction })
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    pub fn sorted(&self) -> &[T] {
        &self.sorted
    }

    /// Fraction of samples that are exactly zero (`F̂(0)` for nonnegative data).
    pub fn zero_fraction(&self) -> T {
        self.zero_fraction
    }

    pub fn eval(&self, s: T) -> T {
        let k = self.sorted.partition_point(|&v| v <= s);
        T::from_count(k) / T::from_count(self.sorted.len())
    }

    /// `#{values < s}/n`.
    pub fn eval_left(&self, s: T) -> T {
        let k = self.sorted.partition_point(|&v| v < s);
        T::from_count(k) / T::from_count(self.sorted.len())
    }
}

/// Relative distance within which a sample value is identified with an atom
/// location: rounding scatters exact atom hits by a few ulps on either side.
pub const ATOM_RESOLUTION: f64 = 1e-9;

impl<T: Real> EmpiricalCdf<T> {
    /// Moves every value within `ATOM_RESOLUTION` (relative) of a location
    /// onto that location. Exact zeros are only matched by zero.
    pub fn snapped_to(&self, locations: &[T]) -> Self {
        let tol = T::lit(ATOM_RESOLUTION);
        let mut sorted = self.sorted.clone();
        for &loc in locations {
            let w = loc.abs() * tol;
            let lo = sorted.partition_point(|&v| v < loc - w);
            let hi = sorted.partition_point(|&v| v <= loc + w);
            sorted[lo..hi].iter_mut().for_each(|v| *v = loc);
        }
        Self { sorted, zero_fraction: self.zero_fraction }
    }
}

pub fn empirical_cdf<T: Real>(gaps: &GapSample<T>) -> Result<EmpiricalCdf<T>> {
    EmpiricalCdf::from_values(gaps.scaled_gaps.clone())
}

/// `sup_s |F̂(s) − F(s)|`, checked on both sides of every sample value and
/// every atom of the limit law. Sample values within `ATOM_RESOLUTION` of an
/// atom count as hitting it.
pub fn ks_distance<T: Real>(emp: &EmpiricalCdf<T>, theory: &MixedDensity<T>) -> T {
    ks_distance_excluding(emp, theory, &[])
}

/// As [`ks_distance`], but the jump at each location in `excluded` is not
/// compared: only the right limit is used there.
pub fn ks_distance_excluding<T: Real>(emp: &EmpiricalCdf<T>, theory: &MixedDensity<T>, excluded: &[T]) -> T {
    let locations: Vec<T> = theory.atoms().iter().map(|a| a.location).collect();
    let emp = &emp.snapped_to(&locations);
    let mut points: Vec<T> = emp.sorted.clone();
    points.extend(theory.atoms().iter().map(|a| a.location));
    points.extend(theory.breakpoints());
    points.sort_by(|a, b| a.partial_cmp(b).expect("no NaN"));
    points.dedup();
    let right = theory.cdf_sorted(&points);
    let n = T::from_count(emp.sorted.len());
    let mut below = 0usize;
    let mut sup = T::zero();
    for (&s, &f_right) in points.iter().zip(&right) {
        while below < emp.sorted.len() && emp.sorted[below] < s {
            below += 1;
        }
        let mut at = below;
        while at < emp.sorted.len() && emp.sorted[at] <= s {
            at += 1;
        }
        let emp_left = T::from_count(below) / n;
        let emp_right = T::from_count(at) / n;
        let jump = theory.atoms().iter().filter(|a| a.location == s).fold(T::zero(), |acc, a| acc + a.mass);
        sup = sup.max((emp_right - f_right).abs());
        if !excluded.contains(&s) {
            sup = sup.max((emp_left - (f_right - jump)).abs());
        }
    }
    sup
}

/// Two-sample sup distance between empirical CDFs.
pub fn ks_two_sample<T: Real>(a: &EmpiricalCdf<T>, b: &EmpiricalCdf<T>) -> T {
    let mut sup = T::zero();
    for &s in a.sorted.iter().chain(&b.sorted) {
        sup = sup.max((a.eval(s) - b.eval(s)).abs());
        sup = sup.max((a.eval_left(s) - b.eval_left(s)).abs());
    }
    sup
}

/// `sup_s |F(s) − G(s)|` between a law and a continuous reference CDF `G`,
/// over `resolution` uniform points on `[0, 2·support_end]` plus both sides of
/// every breakpoint.
pub fn sup_distance_to_cdf<T: Real>(theory: &MixedDensity<T>, reference: impl Fn(T) -> T, resolution: usize) -> T {
    let end = theory.support_end() * T::lit(2.0);
    let n = resolution.max(2);
    let mut points: Vec<T> = (0..=n).map(|i| end * T::from_count(i) / T::from_count(n)).collect();
    points.extend(theory.breakpoints());
    points.sort_by(|a, b| a.partial_cmp(b).expect("no NaN"));
    points.dedup();
    let right = theory.cdf_sorted(&points);
    let mut sup = T::zero();
    for (&s, &f) in points.iter().zip(&right) {
        let g = reference(s);
        let at_s = theory.atoms().iter().filter(|a| a.location == s).fold(T::zero(), |acc, a| acc + a.mass);
        sup = sup.max((f - g).abs()).max((f - at_s - g).abs());
    }
    sup
}

/// Fraction of `values` in `[lo, hi)`.
pub fn density_fraction<T: Real>(values: &[T], interval: (T, T)) -> Result<T> {
    let (lo, hi) = interval;
    if !(lo >= T::zero() && lo < hi && hi <= T::one()) {
        return Err(Error::Domain(format!("need 0 <= lo < hi <= 1, got [{lo}, {hi})")));
    }
    if values.is_empty() {
        return Err(Error::EmptyInput("no values"));
    }
    let inside = values.iter().filter(|&&v| v >= lo && v < hi).count();
    Ok(T::from_count(inside) / T::from_count(values.len()))
}

/// Counts of (anchor, scaled gap) pairs on `[0,1] × [0, s_max)`. Gaps at or
/// beyond `s_max` go to a per-x overflow row.
#[derive(Debug, Clone, PartialEq)]
pub struct JointHistogram<T> {
    pub x_bins: usize,
    pub s_bins: usize,
    pub s_max: T,
    /// `counts[i][j]` for x-bin `i`, s-bin `j`.
    pub counts: Vec<Vec<u64>>,
    pub overflow: Vec<u64>,
    pub total: u64,
}

impl<T: Real> JointHistogram<T> {
    pub fn x_width(&self) -> T {
        T::one() / T::from_count(self.x_bins)
    }

    pub fn s_width(&self) -> T {
        self.s_max / T::from_count(self.s_bins)
    }

    /// Counts per x-bin, overflow included.
    pub fn x_marginal(&self) -> Vec<u64> {
        self.counts.iter().zip(&self.overflow).map(|(row, o)| row.iter().sum::<u64>() + o).collect()
    }

    /// Counts per s-bin (overflow excluded).
    pub fn s_marginal(&self) -> Vec<u64> {
        (0..self.s_bins).map(|j| self.counts.iter().map(|row| row[j]).sum()).collect()
    }

    pub fn overflow_total(&self) -> u64 {
        self.overflow.iter().sum()
    }

    /// x-marginal as a density on `[0,1]`.
    pub fn x_density(&self) -> Vec<T> {
        let scale = T::one() / (T::lit(self.total as f64) * self.x_width());
        self.x_marginal().into_iter().map(|c| T::lit(c as f64) * scale).collect()
    }
}

pub fn joint_histogram<T: Real>(gaps: &GapSample<T>, x_bins: usize, s_bins: usize, s_max: T) -> Result<JointHistogram<T>> {
    if x_bins == 0 || s_bins == 0 {
        return Err(Error::Domain("histogram needs at least one bin per axis".into()));
    }
    if !(s_max > T::zero()) {
        return Err(Error::Domain(format!("s_max must be positive, got {s_max}")));
    }
    let mut counts = vec![vec![0u64; s_bins]; x_bins];
    let mut overflow = vec![0u64; x_bins];
    let xb = T::from_count(x_bins);
    let sb = T::from_count(s_bins);
    for (&x, &s) in gaps.anchors.iter().zip(&gaps.scaled_gaps) {
        let i = (x * xb).floor().to_usize().unwrap_or(0).min(x_bins - 1);
        if s >= s_max {
            overflow[i] += 1;
        } else {
            let j = (s / s_max * sb).floor().to_usize().unwrap_or(0).min(s_bins - 1);
            counts[i][j] += 1;
        }
    }
    Ok(JointHistogram { x_bins, s_bins, s_max, counts, overflow, total: gaps.len() as u64 })
}

/// One-dimensional histogram density of values on `[0, s_max)` with `bins`
/// bins; values beyond are dropped from the bins but counted in the total.
pub fn histogram_density<T: Real>(values: &[T], bins: usize, s_max: T) -> Vec<T> {
    let mut counts = vec![0u64; bins];
    let sb = T::from_count(bins);
    for &v in values {
        if v >= T::zero() && v < s_max {
            let j = (v / s_max * sb).floor().to_usize().unwrap_or(0).min(bins - 1);
            counts[j] += 1;
        }
    }
    let width = s_max / sb;
    let scale = T::one() / (T::from_count(values.len().max(1)) * width);
    counts.into_iter().map(|c| T::lit(c as f64) * scale).collect()
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct AtomError {
    pub location: f64,
    pub theoretical: f64,
    pub empirical: f64,
    pub abs_error: f64,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ComparisonReport {
    pub sup_cdf_distance: f64,
    /// Sup distance with the jumps at atom locations skipped.
    pub sup_cdf_distance_off_atoms: f64,
    pub l1_density_distance: f64,
    pub atom_mass_errors: Vec<AtomError>,
    pub sample_size: usize,
    pub zero_fraction: f64,
    pub notes: Vec<String>,
}

/// Relative half-width of the window used to measure an atom away from zero.
const ATOM_WINDOW: f64 = 0.01;

/// Compares a gap sample with a probability law.
///
/// The L1 distance is between bin masses on `[0, s_max)` (`bins` bins, atoms
/// assigned to their bins). The atom at zero is matched against the exact
/// zero-gap fraction; other atoms against the empirical mass within ±1% of
/// the atom location, less the law's continuous mass there.
pub fn compare<T: Real>(emp: &EmpiricalCdf<T>, theory: &MixedDensity<T>, bins: usize, s_max: T) -> Result<ComparisonReport> {
    if bins == 0 || !(s_max > T::zero()) {
        return Err(Error::Domain("comparison needs bins >= 1 and s_max > 0".into()));
    }
    let locations: Vec<T> = theory.atoms().iter().map(|a| a.location).collect();
    let emp = &emp.snapped_to(&locations);
    let sup = ks_distance(emp, theory);
    let sup_off = ks_distance_excluding(emp, theory, &locations);

    let width = s_max / T::from_count(bins);
    let edges: Vec<T> = (0..=bins).map(|i| T::from_count(i) * width).collect();
    let theory_cdf_left: Vec<T> = edges.iter().map(|&e| theory.cdf_left(e)).collect();
    let mut l1 = T::zero();
    for i in 0..bins {
        let emp_mass = emp.eval_left(edges[i + 1]) - emp.eval_left(edges[i]);
        let th_mass = theory_cdf_left[i + 1] - theory_cdf_left[i];
        l1 = l1 + (emp_mass - th_mass).abs();
    }
    // mass at or beyond s_max
    l1 = l1 + ((T::one() - emp.eval_left(s_max)) - (theory.total_mass() - theory.cdf_left(s_max))).abs();

    let mut atom_mass_errors = Vec::new();
    for atom in theory.atoms() {
        let (empirical, theoretical) = if atom.location == T::zero() {
            (emp.zero_fraction(), atom.mass)
        } else {
            let w = atom.location * T::lit(ATOM_WINDOW);
            let lo = atom.location - w;
            let hi = atom.location + w;
            (emp.eval(hi) - emp.eval_left(lo), atom.mass + theory.continuous_mass_between(lo, hi))
        };
        atom_mass_errors.push(AtomError {
            location: atom.location.to_f64_lossy(),
            theoretical: theoretical.to_f64_lossy(),
            empirical: empirical.to_f64_lossy(),
            abs_error: (empirical - theoretical).abs().to_f64_lossy(),
        });
    }
    let mut notes = Vec::new();
    if (theory.total_mass() - T::one()).abs() > T::lit(1e-8) {
        notes.push(format!("limit law total mass {} differs from 1", theory.total_mass()));
    }
    Ok(ComparisonReport {
        sup_cdf_distance: sup.to_f64_lossy(),
        sup_cdf_distance_off_atoms: sup_off.to_f64_lossy(),
        l1_density_distance: l1.to_f64_lossy(),
        atom_mass_errors,
        sample_size: emp.len(),
        zero_fraction: emp.zero_fraction().to_f64_lossy(),
        notes,
    })
}
