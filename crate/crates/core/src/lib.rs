//! Missing q-ary digit sets and the automatic sequences attached to them.
//!
//! A digit set `(q, A)` with `0 ∈ A ⊆ {0, …, q-1}` defines two objects:
//!
//! * the fractal `F ⊆ [0,1]` of reals whose base-`q` expansion uses only
//!   digits from `A`, together with its natural mass distribution, and
//! * the binary `q`-automatic sequence `f` with `f(n) = 1` iff every base-`q`
//!   digit of `n` lies in `A`, the fixed point of a length-`q` substitution.
//!
//! [`digitset`] builds the sequence and the dimension, [`mahler`] the
//! generating-function side (functional equation, eigenvalue, radial
//! asymptotics) and [`measures`] the level sets, ghost measures, distribution
//! functions and Fourier–Stieltjes coefficients.

pub mod bits;
pub mod digitset;
mod error;
pub mod exec;
pub mod mahler;
pub mod measures;
pub mod point;
pub mod report;

pub use bits::BitWord;
pub use digitset::{
    oracle_prefix, oracle_prefix_with, Budget, DigitSet, SequencePrefix, Substitution,
};
pub use error::{Error, Result};
pub use exec::Execution;
pub use mahler::{
    asymptotic_probe, evaluate_truncated_product, AsymptoticProbeReport, CharacteristicPolynomial,
    DigitPolynomial, MahlerEigenvalue, MahlerEquation, ProbeSample, SparsePoly,
};
pub use measures::{
    fourier_ghost_direct, fourier_ghost_product, fourier_level_measure, fourier_limit,
    ghost_level_measure, level_cdf, level_set, limit_cdf, staircase_samples, CdfSample,
    FourierCoefficient, FourierRoute, GhostLevelMeasure, LevelSet, QAdicPoint,
};
pub use point::UnitPoint;
