//! Superpositions of arithmetic progressions `⊎ⱼ (βⱼ + ωⱼ⁻¹ℤ)`: window
//! counts, the factorised counting law `E(k, L)`, the gap density `P_ω` and
//! brute-force / Monte-Carlo oracles for both.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::density::{Atom, MixedDensity, Piece};
use crate::error::{Error, Result};
use crate::real::{Real, Total};

/// Frequencies `ω₁..ω_J` and phases `β₁..β_J`.
#[derive(Debug, Clone, PartialEq)]
pub struct CountingModel<T> {
    omegas: Vec<T>,
    betas: Vec<T>,
}

impl<T: Real> CountingModel<T> {
    pub fn new(omegas: Vec<T>, betas: Vec<T>) -> Result<Self> {
        if omegas.is_empty() {
            return Err(Error::EmptyInput("counting model needs at least one frequency"));
        }
        if omegas.len() != betas.len() {
            return Err(Error::Precondition(format!(
                "{} frequencies but {} phases",
                omegas.len(),
                betas.len()
            )));
        }
        if let Some(w) = omegas.iter().find(|w| !(**w > T::zero() && w.is_finite())) {
            return Err(Error::Domain(format!("frequencies must be positive and finite, got {w}")));
        }
        if let Some(b) = betas.iter().find(|b| !b.is_finite()) {
            return Err(Error::Domain(format!("phases must be finite, got {b}")));
        }
        Ok(Self { omegas, betas })
    }

    pub fn with_zero_phases(omegas: Vec<T>) -> Result<Self> {
        let betas = vec![T::zero(); omegas.len()];
        Self::new(omegas, betas)
    }

    pub fn omegas(&self) -> &[T] {
        &self.omegas
    }

    pub fn betas(&self) -> &[T] {
        &self.betas
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    /// Asymptotic density `Σ ωⱼ`.
    pub fn intensity(&self) -> T {
        self.omegas.iter().fold(T::zero(), |acc, &w| acc + w)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WindowCount<T> {
    pub t: T,
    pub length: T,
    pub per_progression: Vec<u64>,
    pub total: u64,
}

/// `|x|_ℤ`, distance to the nearest integer.
pub fn nearest_int_dist<T: Real>(x: T) -> T {
    (x - x.round()).abs()
}

/// `n(x, L) = |[x − L/2, x + L/2] ∩ ℤ|`.
pub fn lattice_count<T: Real>(x: T, length: T) -> u64 {
    let half = T::lit(0.5) * length;
    let hi = (x + half).floor();
    let lo = (x - half).ceil();
    let n = if hi >= lo { (hi - lo).to_u64().unwrap_or(0) + 1 } else { 0 };
    debug_assert!(half_integer_consistent(x, length, n), "lattice count {n} disagrees with |x - k/2| criterion at x={x}, L={length}");
    n
}

/// `n(x, L) = k` iff `|x − k/2|_ℤ ≥ (k − L)/2` and `> (L − k)/2`. Points within
/// rounding distance of a boundary are accepted either way.
fn half_integer_consistent<T: Real>(x: T, length: T, n: u64) -> bool {
    let k = T::lit(n as f64);
    let half = T::lit(0.5);
    let d = nearest_int_dist(x - half * k);
    let slack = T::epsilon() * T::lit(64.0) * (T::one() + x.abs() + length);
    let first = d - half * (k - length);
    let second = d - half * (length - k);
    if first.abs() <= slack || second.abs() <= slack {
        return true;
    }
    first >= T::zero() && second > T::zero()
}

/// Window counts `Nⱼ(t, L)` and their sum.
pub fn window_count<T: Real>(model: &CountingModel<T>, t: T, length: T) -> WindowCount<T> {
    let per: Vec<u64> = model
        .omegas
        .iter()
        .zip(&model.betas)
        .map(|(&w, &b)| {
            let n = lattice_count(w * (t - b), w * length);
            debug_assert!(
                {
                    let wl = w * length;
                    let nf = T::lit(n as f64);
                    let slack = T::lit(1e-9) * (T::one() + wl);
                    wl - T::one() < nf + slack && nf <= wl + T::one() + slack
                },
                "count {n} outside (wL-1, wL+1]"
            );
            n
        })
        .collect();
    let total = per.iter().sum();
    WindowCount { t, length, per_progression: per, total }
}

/// `E₁(k, L) = 1 − |k − L|` for `L − 1 < k < L + 1`, else 0.
pub fn e1<T: Real>(k: u64, length: T) -> T {
    let kf = T::lit(k as f64);
    if length - T::one() < kf && kf < length + T::one() {
        T::one() - (kf - length).abs()
    } else {
        T::zero()
    }
}

/// `(E(0,L), …, E(k_max,L))` as the convolution over progressions of the
/// two-point laws `E₁(·, ωⱼL)`.
pub fn e_conv_distribution<T: Real>(k_max: usize, length: T, omegas: &[T]) -> Vec<T> {
    let mut dist = vec![T::zero(); k_max + 1];
    dist[0] = T::one();
    let mut next = vec![T::zero(); k_max + 1];
    for &w in omegas {
        let x = w * length;
        let base = x.floor();
        let upper_weight = x - base;
        let lower_weight = T::one() - upper_weight;
        let shift = base.to_usize().unwrap_or(usize::MAX);
        for v in next.iter_mut() {
            *v = T::zero();
        }
        for (i, &p) in dist.iter().enumerate() {
            if p == T::zero() {
                continue;
            }
            let lo = i.saturating_add(shift);
            if lo <= k_max {
                next[lo] = next[lo] + p * lower_weight;
            }
            if upper_weight > T::zero() && lo < k_max {
                next[lo + 1] = next[lo + 1] + p * upper_weight;
            }
        }
        std::mem::swap(&mut dist, &mut next);
    }
    dist
}

/// `E(k, L) = Σ_{k₁+…+k_J=k} ∏ E₁(kⱼ, ωⱼL)`.
pub fn e_conv<T: Real>(k: usize, length: T, omegas: &[T]) -> T {
    e_conv_distribution(k, length, omegas)[k]
}

/// `∏ (1 − ωⱼ s)` and its first two derivatives in `s`.
pub fn product_derivatives<T: Real>(s: T, omegas: &[T]) -> (T, T, T) {
    let two = T::lit(2.0);
    omegas.iter().fold((T::one(), T::zero(), T::zero()), |(p, d, dd), &w| {
        let f = T::one() - w * s;
        (p * f, d * f - p * w, dd * f - two * d * w)
    })
}

/// Gap density of the superposition:
/// atom `ω₁ ∏_{j≥2}(1 − ωⱼ/ω₁)` at `1/ω₁` plus `d²/ds² ∏(1 − ωⱼs)` on `(0, 1/ω₁)`.
/// Its total mass is the intensity `Σ ωⱼ`. `omegas` must be sorted descending
/// with a strictly largest first entry.
pub fn gap_density_omega<T: Real>(omegas: &[T]) -> Result<MixedDensity<T>> {
    let first = *omegas.first().ok_or(Error::EmptyInput("no frequencies"))?;
    if let Some(w) = omegas.iter().find(|w| !(**w > T::zero())) {
        return Err(Error::Domain(format!("frequencies must be positive, got {w}")));
    }
    if omegas.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::Precondition("frequencies must be sorted descending".into()));
    }
    if omegas.len() > 1 && omegas[1] == first {
        return Err(Error::Precondition("largest frequency must be unique".into()));
    }
    let mass = omegas[1..].iter().fold(first, |acc, &w| acc * (T::one() - w / first));
    let edge = T::one() / first;
    let ws: Arc<Vec<T>> = Arc::new(omegas.to_vec());
    let ws2 = ws.clone();
    let intensity = omegas.iter().fold(T::zero(), |acc, &w| acc + w);
    let mut pieces = Vec::new();
    if omegas.len() > 1 {
        pieces.push(
            Piece::new(T::zero(), edge, Arc::new(move |s| product_derivatives(s, &ws).2))
                .with_antiderivative(Arc::new(move |s| product_derivatives(s, &ws2).1 + intensity)),
        );
    }
    MixedDensity::new(vec![Atom { location: edge, mass }], pieces)
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct McEstimate {
    pub k: usize,
    pub hits: u64,
    pub samples: u64,
    pub estimate: f64,
    /// `sqrt(p̂(1 − p̂)/samples)`.
    pub std_err: f64,
}

const SHARD: u64 = 4096;

/// Monte-Carlo frequencies of `N(t, L) = k` for `k = 0..=k_max`, with `t`
/// uniform in `[a·scale, b·scale]`. Sample `i` always consumes the `i`-th
/// output of a ChaCha8 stream keyed by `seed`, so results do not depend on
/// how the work is sharded across threads.
pub fn mc_count_distribution<T: Real>(
    model: &CountingModel<T>,
    length: T,
    range: (T, T),
    scale: T,
    samples: u64,
    seed: u64,
    k_max: usize,
) -> Result<Vec<McEstimate>> {
    if samples == 0 {
        return Err(Error::Precondition("need at least one sample".into()));
    }
    if !(range.0 < range.1) {
        return Err(Error::Precondition("window range must satisfy a < b".into()));
    }
    let start = range.0 * scale;
    let width = (range.1 - range.0) * scale;
    let shards = samples.div_ceil(SHARD);
    let counts = (0..shards)
        .into_par_iter()
        .map(|shard| {
            let first = shard * SHARD;
            let last = (first + SHARD).min(samples);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_word_pos(2 * first as u128);
            let mut local = vec![0u64; k_max + 1];
            for _ in first..last {
                let u: f64 = rng.gen();
                let t = start + T::lit(u) * width;
                let n = window_count(model, t, length).total as usize;
                if n <= k_max {
                    local[n] += 1;
                }
            }
            local
        })
        .reduce(
            || vec![0u64; k_max + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(k, hits)| {
            let p = hits as f64 / samples as f64;
            McEstimate { k, hits, samples, estimate: p, std_err: (p * (1.0 - p) / samples as f64).sqrt() }
        })
        .collect())
}

/// Monte-Carlo estimate of `meas{t ∈ [aT, bT] : N(t, L) = k} / ((b − a)T)`.
pub fn mc_estimate_e<T: Real>(
    model: &CountingModel<T>,
    k: usize,
    length: T,
    range: (T, T),
    scale: T,
    samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    Ok(mc_count_distribution(model, length, range, scale, samples, seed, k)?[k])
}

/// Phases `βⱼ` uniform in `[0, 1/ωⱼ)`, drawn from a stream separate from the
/// one used for window positions.
pub fn random_phases<T: Real>(omegas: &[T], seed: u64) -> Vec<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(1);
    omegas.iter().map(|&w| T::lit(rng.gen::<f64>()) / w).collect()
}

/// Consecutive differences of the merged points of all progressions lying in
/// `[lo, hi]`. Coincident points produce zero gaps.
pub fn enumerate_gaps<T: Real>(model: &CountingModel<T>, interval: (T, T)) -> Vec<T> {
    let (lo, hi) = interval;
    if !(hi > lo) {
        return Vec::new();
    }
    let point = |j: usize, m: i64| model.betas[j] + T::lit(m as f64) / model.omegas[j];
    let mut heap = BinaryHeap::new();
    let mut last_index = Vec::with_capacity(model.len());
    for (j, (&w, &b)) in model.omegas.iter().zip(&model.betas).enumerate() {
        let mut first = ((lo - b) * w).ceil().to_i64().unwrap_or(i64::MAX);
        let mut last = ((hi - b) * w).floor().to_i64().unwrap_or(i64::MIN);
        // float rounding of m/ω can move a point just outside the interval
        while first <= last && point(j, first) < lo {
            first += 1;
        }
        while last >= first && point(j, last) > hi {
            last -= 1;
        }
        last_index.push(last);
        if first <= last {
            heap.push(Reverse((Total(point(j, first)), j, first)));
        }
    }
    let mut gaps = Vec::new();
    let mut prev: Option<T> = None;
    while let Some(Reverse((Total(x), j, m))) = heap.pop() {
        if let Some(p) = prev {
            gaps.push(x - p);
        }
        prev = Some(x);
        if m < last_index[j] {
            heap.push(Reverse((Total(point(j, m + 1)), j, m + 1)));
        }
    }
    gaps
}

/// Number of gaps exceeding `s` per unit length of the window.
pub fn gap_exceedance_rate<T: Real>(gaps: &[T], s: T, window_length: T) -> T {
    let n = gaps.iter().filter(|&&g| g > s).count();
    T::from_count(n) / window_length
}
