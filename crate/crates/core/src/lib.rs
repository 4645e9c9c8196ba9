//! Gap statistics of the fractional parts of `log_b n`.
//!
//! The crate generates the sequences `{log_b n}`, extracts scaled nearest
//! neighbour gaps, and evaluates the exact limiting gap laws for transcendental,
//! integer and integer-root bases. The superposition-of-progressions model that
//! underlies those laws is available on its own, with Monte-Carlo and
//! enumeration oracles.
//!
//! All numerics are generic over [`Real`] (`f32` or `f64`); the `*64`
//! aliases below fix the scalar to `f64`.

pub mod base;
pub mod density;
pub mod error;
pub mod limitdist;
pub mod qpoch;
pub mod quad;
mod real;
pub mod sequence;
pub mod stats;
pub mod superposition;

pub use base::{BaseKind, LogBase};
pub use density::{Atom, MixedDensity, Piece};
pub use error::{Error, Result};
pub use limitdist::{family_e, rho, FamilyStats, FamilyValue, LimitLaw};
pub use qpoch::{
    d2qpoch_fin, d2qpoch_inf, dqpoch_fin, dqpoch_inf, f_fin, f_inf, qpoch_fin, qpoch_inf, Order, Pochhammer,
};
pub use real::Real;
pub use sequence::{
    generate_raw, generate_shifted, order_and_gaps, unfold, unfold_closed_form, GapSample, OrderedFracs, Provenance,
};
pub use stats::{
    compare, density_fraction, empirical_cdf, joint_histogram, ks_distance, ks_distance_excluding, ks_two_sample,
    sup_distance_to_cdf,
    ComparisonReport, EmpiricalCdf, JointHistogram,
};
pub use superposition::{
    e1, e_conv, enumerate_gaps, gap_density_omega, lattice_count, mc_estimate_e, nearest_int_dist, window_count,
    CountingModel, McEstimate, WindowCount,
};

pub type LogBase64 = LogBase<f64>;
pub type MixedDensity64 = MixedDensity<f64>;
pub type LimitLaw64 = LimitLaw<f64>;
pub type Pochhammer64 = Pochhammer<f64>;
pub type GapSample64 = GapSample<f64>;
pub type EmpiricalCdf64 = EmpiricalCdf<f64>;
pub type CountingModel64 = CountingModel<f64>;
pub type FamilyStats64 = FamilyStats<f64>;
