//! Level sets, mass distributions, ghost measures and their Fourier–Stieltjes
//! coefficients.
//!
//! All coefficients use the convention `ĥ(n) = ∫ e^{-2πinx} dh(x)`. Four
//! routes compute them:
//!
//! * [`FourierRoute::Direct`]: sum over the atoms of the ghost measure
//!   `μ_{f,k}`, read off the materialized sequence prefix;
//! * [`FourierRoute::FiniteProduct`]: `Π_{ℓ=1}^{k} p_f(e^{-2πin/q^ℓ})/m`,
//!   which equals the direct route exactly;
//! * [`FourierRoute::LevelMeasure`]: the coefficient of the absolutely
//!   continuous level measure `ν_{F,k}`, i.e. the finite product times
//!   `∫_0^1 e^{-2πi(n/q^k)x} dx`;
//! * [`FourierRoute::TruncatedLimit`]: the infinite product for the limit
//!   measure, cut at depth `L`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::io::{self, Write};

use num_bigint::BigUint;
use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::One;
use serde::Serialize;

use crate::digitset::{Budget, DigitSet};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::point::UnitPoint;
use crate::report::sig17;

/// The point `numerator / q^level`, with `q` taken from the digit set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QAdicPoint {
    pub numerator: u64,
    pub level: u32,
}

impl QAdicPoint {
    pub fn to_f64(self, q: u32) -> f64 {
        self.numerator as f64 / f64::from(q).powi(self.level as i32)
    }

    pub fn to_unit_point(self, q: u32) -> Result<UnitPoint> {
        UnitPoint::q_adic(self.numerator, self.level, q)
    }
}

/// `E_k`: the union of the intervals `[j/q^k, (j+1)/q^k]` for every listed `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSet {
    q: u32,
    m: u32,
    level: u32,
    intervals: Vec<u64>,
}

impl LevelSet {
    pub fn level(&self) -> u32 {
        self.level
    }

    /// Left endpoints `j` (in units of `q^-k`), increasing.
    pub fn intervals(&self) -> &[u64] {
        &self.intervals
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn contains(&self, j: u64) -> bool {
        self.intervals.binary_search(&j).is_ok()
    }

    /// `(m/q)^k`.
    pub fn lebesgue_measure(&self) -> f64 {
        (f64::from(self.m) / f64::from(self.q)).powi(self.level as i32)
    }

    /// `log N / log q^k` with `N` the number of intervals; `None` at level 0.
    pub fn box_counting_dimension(&self) -> Option<f64> {
        if self.level == 0 {
            return None;
        }
        let n = self.intervals.len() as f64;
        Some(n.ln() / (f64::from(self.level) * f64::from(self.q).ln()))
    }
}

pub fn level_set(ds: &DigitSet, k: u32, budget: Budget) -> Result<LevelSet> {
    level_set_with(ds, k, budget, Execution::default())
}

/// Enumerates the `m^k` admissible indices by reading `0 … m^k - 1` in base
/// `m` and replacing each base-`m` digit `i` with the digit `a_{i+1}`.
pub fn level_set_with(ds: &DigitSet, k: u32, budget: Budget, exec: Execution) -> Result<LevelSet> {
    budget.check(ds.base(), k)?;
    let m = u64::from(ds.m());
    let q = u64::from(ds.base());
    let count = m.pow(k) as usize;
    let digits = ds.digits();
    let intervals = exec.map_range(count, |i| {
        let mut rest = i as u64;
        let mut place = 1u64;
        let mut j = 0u64;
        for _ in 0..k {
            j += u64::from(digits[(rest % m) as usize]) * place;
            rest /= m;
            place *= q;
        }
        j
    });
    Ok(LevelSet {
        q: ds.base(),
        m: ds.m(),
        level: k,
        intervals,
    })
}

/// `ν_{F,k}([0, x])`.
///
/// Exact in `x`: the float is expanded in base `q` as the dyadic rational it
/// is. Runs in `O(k)` without materializing `E_k`.
pub fn level_cdf(ds: &DigitSet, k: u32, x: f64) -> Result<f64> {
    Ok(level_cdf_at(ds, k, &UnitPoint::from_f64(x)?))
}

pub fn level_cdf_at(ds: &DigitSet, k: u32, x: &UnitPoint) -> f64 {
    if x.is_one() {
        return 1.0;
    }
    let m = f64::from(ds.m());
    let mut digits = x.expansion(ds.base());
    let mut weight = 1.0;
    let mut mass = 0.0;
    for _ in 0..k {
        let d = digits.next().expect("expansions are infinite");
        weight /= m;
        mass += f64::from(ds.count_below(d)) * weight;
        if !ds.contains_digit(d) {
            return mass;
        }
    }
    // x lies in a level-k interval of E_k, where the density is constant
    mass + weight * digits.remainder()
}

/// `ν_F([0, x])` to within `m^-depth`.
pub fn limit_cdf(ds: &DigitSet, x: f64, depth: u32) -> Result<f64> {
    if depth == 0 {
        return Err(Error::InvalidParameter("depth must be at least 1".into()));
    }
    Ok(limit_cdf_at(ds, &UnitPoint::from_f64(x)?, depth))
}

/// Scans the first `depth` base-`q` digits of `x`, adding the mass of every
/// level-`i` cylinder that lies entirely left of `x`, and stops at the first
/// digit outside `A` (there `x` sits in a gap).
pub fn limit_cdf_at(ds: &DigitSet, x: &UnitPoint, depth: u32) -> f64 {
    if x.is_one() {
        return 1.0;
    }
    let m = f64::from(ds.m());
    let mut weight = 1.0;
    let mut mass = 0.0;
    for d in x.expansion(ds.base()).take(depth as usize) {
        weight /= m;
        mass += f64::from(ds.count_below(d)) * weight;
        if !ds.contains_digit(d) {
            break;
        }
    }
    mass
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CdfSample {
    pub x: f64,
    #[serde(rename = "F")]
    pub value: f64,
}

/// `level_cdf` on the `grid_size` equally spaced points `i/(grid_size-1)`.
pub fn staircase_samples(ds: &DigitSet, k: u32, grid_size: usize) -> Result<Vec<CdfSample>> {
    staircase_samples_with(ds, k, grid_size, Execution::default())
}

pub fn staircase_samples_with(
    ds: &DigitSet,
    k: u32,
    grid_size: usize,
    exec: Execution,
) -> Result<Vec<CdfSample>> {
    if grid_size < 2 {
        return Err(Error::InvalidParameter(format!(
            "grid needs at least 2 points (got {grid_size})"
        )));
    }
    let last = (grid_size - 1) as u64;
    Ok(exec.map_range(grid_size, |i| {
        let x = UnitPoint::new(i as u64, last).expect("i <= last");
        CdfSample {
            x: x.to_f64(),
            value: level_cdf_at(ds, k, &x),
        }
    }))
}

/// CSV with header `x,F`.
pub fn write_staircase_csv<W: Write>(mut out: W, samples: &[CdfSample]) -> io::Result<()> {
    writeln!(out, "x,F")?;
    for s in samples {
        writeln!(out, "{},{}", sig17(s.x), sig17(s.value))?;
    }
    Ok(())
}

/// The staircase as a single SVG polyline in a 800×400 box.
pub fn write_staircase_svg<W: Write>(mut out: W, samples: &[CdfSample]) -> io::Result<()> {
    const W: f64 = 800.0;
    const H: f64 = 400.0;
    const PAD: f64 = 20.0;
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = W + 2.0 * PAD,
        h = H + 2.0 * PAD
    )?;
    writeln!(
        out,
        r##"<rect x="{PAD}" y="{PAD}" width="{W}" height="{H}" fill="none" stroke="#bbb"/>"##
    )?;
    write!(
        out,
        r#"<polyline fill="none" stroke="black" stroke-width="1" points=""#
    )?;
    for (i, s) in samples.iter().enumerate() {
        if i > 0 {
            write!(out, " ")?;
        }
        write!(out, "{:.3},{:.3}", PAD + s.x * W, PAD + (1.0 - s.value) * H)?;
    }
    writeln!(out, r#""/>"#)?;
    writeln!(out, "</svg>")
}

/// `μ_{f,k} = m^{-k} Σ_{j<q^k} f(j) δ_{j/q^k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GhostLevelMeasure {
    q: u32,
    m: u32,
    level: u32,
    support: Vec<QAdicPoint>,
}

impl GhostLevelMeasure {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn support(&self) -> &[QAdicPoint] {
        &self.support
    }

    /// Mass of each atom, `m^{-k}`.
    pub fn weight_per_point(&self) -> Ratio<BigUint> {
        Ratio::new(BigUint::one(), BigUint::from(self.m).pow(self.level))
    }

    pub fn total_mass(&self) -> Ratio<BigUint> {
        self.weight_per_point() * Ratio::from_integer(BigUint::from(self.support.len()))
    }

    /// `m^{-k} Σ_j f(j) e^{-2πinj/q^k}` summed over the atoms in order.
    pub fn fourier_coefficient(&self, n: i64) -> FourierCoefficient {
        let modulus = u128::from(self.q).pow(self.level);
        let n_mod = i128::from(n).rem_euclid(modulus as i128) as u128;
        let sum: Complex64 = self
            .support
            .iter()
            .map(|p| unit_root(n_mod * u128::from(p.numerator) % modulus, modulus))
            .sum();
        FourierCoefficient {
            n,
            value: sum / f64::from(self.m).powi(self.level as i32),
            route: FourierRoute::Direct,
            param: self.level,
        }
    }

    pub fn fourier_table(&self, frequencies: &[i64], exec: Execution) -> Vec<FourierCoefficient> {
        exec.map_slice(frequencies, |&n| self.fourier_coefficient(n))
    }
}

/// Builds `μ_{f,k}` from the prefix `ρ^k(1)` of the automatic sequence.
pub fn ghost_level_measure(ds: &DigitSet, k: u32, budget: Budget) -> Result<GhostLevelMeasure> {
    ghost_level_measure_with(ds, k, budget, Execution::default())
}

pub fn ghost_level_measure_with(
    ds: &DigitSet,
    k: u32,
    budget: Budget,
    exec: Execution,
) -> Result<GhostLevelMeasure> {
    let prefix = ds.substitution().iterate_with(k, budget, exec)?;
    let support = prefix
        .bits()
        .iter_ones()
        .map(|j| QAdicPoint {
            numerator: j as u64,
            level: k,
        })
        .collect();
    Ok(GhostLevelMeasure {
        q: ds.base(),
        m: ds.m(),
        level: k,
        support,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FourierRoute {
    Direct,
    FiniteProduct,
    LevelMeasure,
    TruncatedLimit,
}

impl FourierRoute {
    pub const ALL: [FourierRoute; 4] = [
        FourierRoute::Direct,
        FourierRoute::FiniteProduct,
        FourierRoute::LevelMeasure,
        FourierRoute::TruncatedLimit,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FourierRoute::Direct => "direct",
            FourierRoute::FiniteProduct => "product",
            FourierRoute::LevelMeasure => "level",
            FourierRoute::TruncatedLimit => "limit",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        FourierRoute::ALL.into_iter().find(|r| r.as_str() == name)
    }
}

impl fmt::Display for FourierRoute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A coefficient together with the route and the level `k` (or depth `L`)
/// that produced it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourierCoefficient {
    pub n: i64,
    pub value: Complex64,
    pub route: FourierRoute,
    pub param: u32,
}

/// CSV with header `n,route,k_or_L,re,im`.
pub fn write_fourier_csv<W: Write>(mut out: W, rows: &[FourierCoefficient]) -> io::Result<()> {
    writeln!(out, "n,route,k_or_L,re,im")?;
    for c in rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            c.n,
            c.route,
            c.param,
            sig17(c.value.re),
            sig17(c.value.im)
        )?;
    }
    Ok(())
}

/// `e^{-2πi r/M}` for `0 ≤ r < M`, reduced to the symmetric range first so
/// that `r` and `M - r` give exact conjugates.
#[inline]
fn unit_root(residue: u128, modulus: u128) -> Complex64 {
    let signed = if residue > modulus - residue {
        -((modulus - residue) as f64)
    } else {
        residue as f64
    };
    let (sin, cos) = (TAU * (signed / modulus as f64)).sin_cos();
    Complex64::new(cos, -sin)
}

/// Largest modulus for which `(n mod M)·a` is formed exactly in `u128`.
const EXACT_MODULUS_LIMIT: u128 = 1 << 96;

/// `p_f(e^{-2πin/q^ℓ}) / m`.
fn product_factor(ds: &DigitSet, n: i64, level: u32) -> Complex64 {
    let modulus = u128::from(ds.base())
        .checked_pow(level)
        .filter(|&m| m <= EXACT_MODULUS_LIMIT);
    let sum: Complex64 = match modulus {
        Some(modulus) => {
            let n_mod = i128::from(n).rem_euclid(modulus as i128) as u128;
            ds.digits()
                .iter()
                .map(|&a| unit_root(n_mod * u128::from(a) % modulus, modulus))
                .sum()
        }
        // q^ℓ > 2^96 > |n·a|, so n·a/q^ℓ is already inside (-1, 1)
        None => {
            let scale = f64::from(ds.base()).powi(level as i32);
            ds.digits()
                .iter()
                .map(|&a| {
                    let theta = n as f64 * f64::from(a) / scale;
                    let (sin, cos) = (TAU * theta).sin_cos();
                    Complex64::new(cos, -sin)
                })
                .sum()
        }
    };
    sum / f64::from(ds.m())
}

fn partial_product(ds: &DigitSet, n: i64, levels: u32) -> Complex64 {
    (1..=levels).fold(Complex64::new(1.0, 0.0), |acc, l| {
        acc * product_factor(ds, n, l)
    })
}

/// `μ̂_{f,k}(n)` summed over the sequence prefix.
pub fn fourier_ghost_direct(
    ds: &DigitSet,
    k: u32,
    n: i64,
    budget: Budget,
) -> Result<FourierCoefficient> {
    Ok(ghost_level_measure(ds, k, budget)?.fourier_coefficient(n))
}

/// `Π_{ℓ=1}^{k} p_f(e^{-2πin/q^ℓ}) / m`; needs no materialization.
pub fn fourier_ghost_product(ds: &DigitSet, k: u32, n: i64) -> FourierCoefficient {
    FourierCoefficient {
        n,
        value: partial_product(ds, n, k),
        route: FourierRoute::FiniteProduct,
        param: k,
    }
}

/// `∫_0^1 e^{-2πi(n/q^k)x} dx`.
pub fn interval_transform(q: u32, k: u32, n: i64) -> Complex64 {
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if let Some(modulus) = i128::from(q).checked_pow(k) {
        if i128::from(n) % modulus == 0 {
            return Complex64::new(0.0, 0.0);
        }
    }
    let theta = n as f64 / f64::from(q).powi(k as i32);
    let x = PI * theta;
    // (1 - e^{-2πiθ}) / (2πiθ) = e^{-iπθ} sin(πθ)/(πθ)
    let (sin, cos) = x.sin_cos();
    Complex64::new(cos, -sin) * (sin / x)
}

/// `ν̂_{F,k}(n)`, the coefficient of the level measure.
pub fn fourier_level_measure(ds: &DigitSet, k: u32, n: i64) -> FourierCoefficient {
    FourierCoefficient {
        n,
        value: partial_product(ds, n, k) * interval_transform(ds.base(), k, n),
        route: FourierRoute::LevelMeasure,
        param: k,
    }
}

/// Default depth for [`fourier_limit`]: `ceil(log_q max(|n|, 1)) + 40`.
pub fn default_limit_depth(q: u32, n: i64) -> u32 {
    let target = u128::from(n.unsigned_abs().max(1));
    let mut exponent = 0;
    let mut power = 1u128;
    while power < target {
        power *= u128::from(q);
        exponent += 1;
    }
    exponent + 40
}

/// `ν̂_F(n) = Π_{ℓ≥1} p_f(e^{-2πin/q^ℓ}) / m`, truncated after `depth` factors.
pub fn fourier_limit(ds: &DigitSet, n: i64, depth: u32) -> FourierCoefficient {
    FourierCoefficient {
        n,
        value: partial_product(ds, n, depth),
        route: FourierRoute::TruncatedLimit,
        param: depth,
    }
}
