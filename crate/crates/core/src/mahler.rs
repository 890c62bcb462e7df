//! Generating functions of digit-set sequences as Mahler functions.
//!
//! The generating function `M_f(z) = Σ f(n) z^n` factors as
//! `Π_{j≥0} p_f(z^{q^j})` with the digit polynomial `p_f(z) = Σ_{a∈A} z^a`,
//! so it satisfies the degree-one functional equation
//! `M_f(z) - p_f(z) M_f(z^q) = 0`. Its eigenvalue `p_f(1) = m` controls the
//! growth `M_f(z) ≍ (1-z)^{-log_q m}` as `z → 1⁻`.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{self, Write};

use num_rational::Ratio;
use serde::Serialize;

use crate::digitset::DigitSet;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::report::sig17;

/// Integer polynomial stored as `exponent → coefficient`, zero terms omitted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    terms: BTreeMap<u32, i64>,
}

impl SparsePoly {
    pub fn from_terms(terms: impl IntoIterator<Item = (u32, i64)>) -> Self {
        let mut map = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_insert(0) += c;
        }
        map.retain(|_, c| *c != 0);
        SparsePoly { terms: map }
    }

    pub fn constant(c: i64) -> Self {
        SparsePoly::from_terms([(0, c)])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().next_back().copied()
    }

    pub fn coefficient(&self, exponent: u32) -> i64 {
        self.terms.get(&exponent).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, i64)> + '_ {
        self.terms.iter().map(|(&e, &c)| (e, c))
    }

    /// `p(1)`, the sum of the coefficients.
    pub fn eval_at_one(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn eval(&self, z: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&e, &c)| c as f64 * z.powi(e as i32))
            .sum()
    }

    pub fn neg(&self) -> Self {
        SparsePoly {
            terms: self.terms.iter().map(|(&e, &c)| (e, -c)).collect(),
        }
    }

    fn all_negative(&self) -> bool {
        !self.is_zero() && self.terms.values().all(|&c| c < 0)
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (&e, &c)) in self.terms.iter().enumerate() {
            let magnitude = c.unsigned_abs();
            match (i, c < 0) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            match (e, magnitude) {
                (0, _) => write!(f, "{magnitude}")?,
                (_, 1) => {}
                _ => write!(f, "{magnitude}")?,
            }
            match e {
                0 => {}
                1 => f.write_str("z")?,
                _ => write!(f, "z^{e}")?,
            }
        }
        Ok(())
    }
}

/// `p_f(z) = Σ_{a∈A} z^a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitPolynomial {
    poly: SparsePoly,
}

impl DigitPolynomial {
    pub fn new(ds: &DigitSet) -> Self {
        DigitPolynomial {
            poly: SparsePoly::from_terms(ds.digits().iter().map(|&a| (a, 1))),
        }
    }

    pub fn poly(&self) -> &SparsePoly {
        &self.poly
    }

    pub fn exponents(&self) -> Vec<u32> {
        self.poly.terms().map(|(e, _)| e).collect()
    }

    pub fn value_at_one(&self) -> i64 {
        self.poly.eval_at_one()
    }
}

impl fmt::Display for DigitPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.poly, f)
    }
}

/// `p_0(z)M(z) + p_1(z)M(z^q) + … + p_d(z)M(z^{q^d}) = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MahlerEquation {
    base: u32,
    coefficients: Vec<SparsePoly>,
}

impl MahlerEquation {
    pub fn new(base: u32, coefficients: Vec<SparsePoly>) -> Result<Self> {
        if base < 2 {
            return Err(Error::BaseTooSmall(base));
        }
        if coefficients.len() < 2 {
            return Err(Error::InvalidEquation("degree must be at least 1"));
        }
        if coefficients[0].is_zero() {
            return Err(Error::InvalidEquation("p_0 is the zero polynomial"));
        }
        if coefficients.last().is_some_and(SparsePoly::is_zero) {
            return Err(Error::InvalidEquation("p_d is the zero polynomial"));
        }
        Ok(MahlerEquation { base, coefficients })
    }

    /// `M_f(z) - p_f(z) M_f(z^q) = 0`.
    pub fn for_digit_set(ds: &DigitSet) -> Self {
        let pf = DigitPolynomial::new(ds);
        MahlerEquation::new(ds.base(), vec![SparsePoly::constant(1), pf.poly().neg()])
            .expect("digit-set equations are well formed")
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[SparsePoly] {
        &self.coefficients
    }

    pub fn characteristic_polynomial(&self) -> CharacteristicPolynomial {
        CharacteristicPolynomial {
            coefficients: self
                .coefficients
                .iter()
                .map(SparsePoly::eval_at_one)
                .collect(),
        }
    }

    /// The root of the (linear) characteristic polynomial.
    pub fn mahler_eigenvalue(&self) -> Result<MahlerEigenvalue> {
        if self.degree() != 1 {
            return Err(Error::UnsupportedDegree(self.degree()));
        }
        let chi = self.characteristic_polynomial();
        let (lead, constant) = (chi.coefficients[0], chi.coefficients[1]);
        if lead == 0 {
            return Err(Error::DegenerateLeadingCoefficient);
        }
        Ok(MahlerEigenvalue {
            exact: Ratio::new(-constant, lead),
        })
    }
}

impl fmt::Display for MahlerEquation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.coefficients.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let arg = match i {
                0 => "z".to_string(),
                _ => format!("z^{}", u128::from(self.base).pow(i as u32)),
            };
            let (negative, shown) = if p.all_negative() {
                (true, p.neg())
            } else {
                (false, p.clone())
            };
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if shown != SparsePoly::constant(1) {
                if shown.terms.len() == 1 && shown.degree() == Some(0) {
                    write!(f, "{shown}")?;
                } else {
                    write!(f, "({shown})")?;
                }
            }
            write!(f, "M({arg})")?;
        }
        f.write_str(" = 0")
    }
}

/// `χ(λ) = p_0(1)λ^d + p_1(1)λ^{d-1} + … + p_d(1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacteristicPolynomial {
    coefficients: Vec<i64>,
}

impl CharacteristicPolynomial {
    /// Coefficients from the highest power of `λ` down to the constant.
    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    /// Degree of `χ` as a polynomial in `λ`, after dropping zero leading terms.
    pub fn degree(&self) -> Option<usize> {
        let d = self.coefficients.len() - 1;
        self.coefficients
            .iter()
            .position(|&c| c != 0)
            .map(|i| d - i)
    }

    /// Set when `p_0(1) = 0`, i.e. `χ` has lower degree than the equation.
    pub fn warning(&self) -> Option<Error> {
        (self.coefficients[0] == 0).then_some(Error::DegenerateLeadingCoefficient)
    }

    pub fn eval(&self, lambda: f64) -> f64 {
        self.coefficients
            .iter()
            .fold(0.0, |acc, &c| acc * lambda + c as f64)
    }
}

impl fmt::Display for CharacteristicPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.coefficients.len() - 1;
        let mut first = true;
        for (i, &c) in self.coefficients.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let power = d - i;
            let magnitude = c.unsigned_abs();
            match (first, c < 0) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            if power == 0 || magnitude != 1 {
                write!(f, "{magnitude}")?;
            }
            match power {
                0 => {}
                1 => f.write_str("λ")?,
                _ => write!(f, "λ^{power}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MahlerEigenvalue {
    exact: Ratio<i64>,
}

impl MahlerEigenvalue {
    pub fn exact(&self) -> Ratio<i64> {
        self.exact
    }

    pub fn value(&self) -> f64 {
        *self.exact.numer() as f64 / *self.exact.denom() as f64
    }

    pub fn as_integer(&self) -> Option<i64> {
        self.exact.is_integer().then(|| self.exact.to_integer())
    }
}

impl fmt::Display for MahlerEigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.exact)
    }
}

/// Factors `z^{q^J}` below this are dropped from the infinite product.
pub const PRODUCT_CUTOFF: f64 = 1e-15;

/// Least `J ≥ 1` with `z^{q^J} < PRODUCT_CUTOFF`, given `ln z`.
fn truncation_terms(q: u32, ln_z: f64) -> u32 {
    let mut terms = 1;
    let mut scale = f64::from(q);
    while (scale * ln_z).exp() >= PRODUCT_CUTOFF {
        terms += 1;
        scale *= f64::from(q);
    }
    terms
}

/// `Π_{j<J} p_f(z^{q^j})` with `z = e^{ln_z}`; every power is formed as
/// `exp(e·ln z)` so that `z` extremely close to 1 keeps full precision.
fn product_from_log(ds: &DigitSet, ln_z: f64, terms: u32) -> f64 {
    let mut product = 1.0;
    let mut scale = 1.0;
    for _ in 0..terms {
        let factor: f64 = ds
            .digits()
            .iter()
            .map(|&a| (f64::from(a) * scale * ln_z).exp())
            .sum();
        product *= factor;
        scale *= f64::from(ds.base());
    }
    product
}

/// `Π_{j=0}^{J-1} p_f(z^{q^j})` for `z ∈ [0, 1)`.
pub fn evaluate_truncated_product(ds: &DigitSet, z: f64, terms: u32) -> Result<f64> {
    if !(0.0..1.0).contains(&z) {
        return Err(Error::InvalidParameter(format!("z = {z} is not in [0, 1)")));
    }
    if z == 0.0 {
        return Ok(1.0);
    }
    Ok(product_from_log(ds, z.ln(), terms))
}

/// Number of factors the probe keeps at `z`: the least `J` with
/// `z^{q^J} < 10^-15`.
pub fn default_truncation(ds: &DigitSet, z: f64) -> Result<u32> {
    if !(0.0..1.0).contains(&z) {
        return Err(Error::InvalidParameter(format!("z = {z} is not in [0, 1)")));
    }
    if z == 0.0 {
        return Ok(1);
    }
    Ok(truncation_terms(ds.base(), z.ln()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProbeSample {
    pub t: f64,
    /// `1 - q^{-t}`, rounded; the computation itself uses `q^{-t}` directly.
    pub z: f64,
    #[serde(rename = "J")]
    pub terms: u32,
    #[serde(rename = "G")]
    pub g: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AsymptoticProbeReport {
    pub samples: Vec<ProbeSample>,
}

impl AsymptoticProbeReport {
    /// Smallest and largest `G` over the report.
    pub fn range(&self) -> Option<(f64, f64)> {
        self.samples
            .iter()
            .map(|s| s.g)
            .fold(None, |acc, g| match acc {
                None => Some((g, g)),
                Some((lo, hi)) => Some((lo.min(g), hi.max(g))),
            })
    }

    /// CSV with header `t,z,J,G`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,z,J,G")?;
        for s in &self.samples {
            writeln!(
                out,
                "{},{},{},{}",
                sig17(s.t),
                sig17(s.z),
                s.terms,
                sig17(s.g)
            )?;
        }
        Ok(())
    }
}

/// Samples `G = (1-z)^{log_q m} · M_f(z)` along `z = 1 - q^{-t}` for
/// `t = t_min, t_min + step, …, ≤ t_max`.
pub fn asymptotic_probe(
    ds: &DigitSet,
    t_min: f64,
    t_max: f64,
    step: f64,
) -> Result<AsymptoticProbeReport> {
    asymptotic_probe_with(ds, t_min, t_max, step, Execution::default())
}

pub fn asymptotic_probe_with(
    ds: &DigitSet,
    t_min: f64,
    t_max: f64,
    step: f64,
    exec: Execution,
) -> Result<AsymptoticProbeReport> {
    if !(t_min >= 1.0 && t_max > t_min && step > 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "probe grid needs 1 <= t_min < t_max and step > 0 (got {t_min}, {t_max}, {step})"
        )));
    }
    let count = ((t_max - t_min) / step + 1e-9).floor() as usize + 1;
    let q = f64::from(ds.base());
    let m = f64::from(ds.m());
    let samples = exec.map_range(count, |i| {
        let t = t_min + i as f64 * step;
        let gap = q.powf(-t);
        let ln_z = (-gap).ln_1p();
        let terms = truncation_terms(ds.base(), ln_z);
        let product = product_from_log(ds, ln_z, terms);
        // (1 - z)^{log_q m} = (q^{-t})^{log_q m} = m^{-t}
        let g = m.powf(-t) * product;
        ProbeSample {
            t,
            z: 1.0 - gap,
            terms,
            g,
        }
    });
    Ok(AsymptoticProbeReport { samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigUint;

    fn ds(q: u32, a: &[i64]) -> DigitSet {
        DigitSet::new(q, a).unwrap()
    }

    #[test]
    fn digit_polynomials() {
        assert_eq!(
            DigitPolynomial::new(&DigitSet::cantor()).to_string(),
            "1 + z^2"
        );
        assert_eq!(DigitPolynomial::new(&ds(5, &[0])).to_string(), "1");
        let p = DigitPolynomial::new(&ds(10, &[0, 3, 7]));
        assert_eq!(p.to_string(), "1 + z^3 + z^7");
        assert_eq!(p.exponents(), vec![0, 3, 7]);
        assert_eq!(p.value_at_one(), 3);
        assert_eq!(p.poly().coefficient(0), 1);
    }

    #[test]
    fn equations() {
        let cantor = MahlerEquation::for_digit_set(&DigitSet::cantor());
        assert_eq!(cantor.to_string(), "M(z) - (1 + z^2)M(z^3) = 0");
        assert_eq!(cantor.degree(), 1);
        assert_eq!(
            MahlerEquation::for_digit_set(&ds(5, &[0])).to_string(),
            "M(z) - M(z^5) = 0"
        );
        assert_eq!(
            MahlerEquation::for_digit_set(&ds(4, &[0, 1, 3])).to_string(),
            "M(z) - (1 + z + z^3)M(z^4) = 0"
        );
    }

    #[test]
    fn characteristic_polynomials() {
        let chi = MahlerEquation::for_digit_set(&DigitSet::cantor()).characteristic_polynomial();
        assert_eq!(chi.coefficients(), &[1, -2]);
        assert_eq!(chi.to_string(), "λ - 2");
        assert!(chi.warning().is_none());
        let chi = MahlerEquation::for_digit_set(&ds(6, &[0])).characteristic_polynomial();
        assert_eq!(chi.to_string(), "λ - 1");
        let chi = MahlerEquation::for_digit_set(&ds(4, &[0, 1, 3])).characteristic_polynomial();
        assert_eq!(chi.to_string(), "λ - 3");
        assert_eq!(chi.degree(), Some(1));
    }

    #[test]
    fn eigenvalues() {
        let ev = |d: &DigitSet| {
            MahlerEquation::for_digit_set(d)
                .mahler_eigenvalue()
                .unwrap()
        };
        assert_eq!(ev(&DigitSet::cantor()).as_integer(), Some(2));
        assert_eq!(ev(&ds(8, &[0])).as_integer(), Some(1));
        assert_eq!(ev(&ds(10, &[0, 2, 5, 8])).as_integer(), Some(4));
    }

    #[test]
    fn degenerate_and_higher_degree_equations() {
        // (1 - z)M(z) + M(z^2) - M(z^4) = 0: p_0(1) = 0
        let eq = MahlerEquation::new(
            2,
            vec![
                SparsePoly::from_terms([(0, 1), (1, -1)]),
                SparsePoly::constant(1),
                SparsePoly::constant(-1),
            ],
        )
        .unwrap();
        let chi = eq.characteristic_polynomial();
        assert_eq!(chi.warning(), Some(Error::DegenerateLeadingCoefficient));
        assert_eq!(chi.degree(), Some(1));
        assert_eq!(eq.mahler_eigenvalue(), Err(Error::UnsupportedDegree(2)));

        let linear = MahlerEquation::new(
            3,
            vec![
                SparsePoly::from_terms([(0, 1), (2, -1)]),
                SparsePoly::constant(5),
            ],
        )
        .unwrap();
        assert_eq!(
            linear.mahler_eigenvalue(),
            Err(Error::DegenerateLeadingCoefficient)
        );

        let rational = MahlerEquation::new(
            3,
            vec![
                SparsePoly::constant(2),
                SparsePoly::from_terms([(0, -1), (4, -2)]),
            ],
        )
        .unwrap();
        let ev = rational.mahler_eigenvalue().unwrap();
        assert_eq!(ev.exact(), Ratio::new(3, 2));
        assert_eq!(ev.as_integer(), None);
        assert!(rational.characteristic_polynomial().eval(ev.value()).abs() < 1e-12);

        assert!(MahlerEquation::new(2, vec![SparsePoly::constant(1)]).is_err());
        assert!(
            MahlerEquation::new(2, vec![SparsePoly::default(), SparsePoly::constant(1)]).is_err()
        );
        assert!(
            MahlerEquation::new(2, vec![SparsePoly::constant(1), SparsePoly::default()]).is_err()
        );
    }

    #[test]
    fn truncated_product_values() {
        let c = DigitSet::cantor();
        assert_eq!(evaluate_truncated_product(&c, 0.0, 7).unwrap(), 1.0);
        assert!((evaluate_truncated_product(&c, 0.5, 1).unwrap() - 1.25).abs() < 1e-15);
        let j = default_truncation(&c, 0.5).unwrap();
        let value = evaluate_truncated_product(&c, 0.5, j).unwrap();
        // Σ c(n) 2^-n, summed to 40 digits
        assert!((value - 1.269_536_092_877_388).abs() < 1e-14);
        assert!(evaluate_truncated_product(&c, 1.0, 3).is_err());
        assert!(evaluate_truncated_product(&c, -0.1, 3).is_err());
    }

    #[test]
    fn truncated_product_brackets_partial_series() {
        for d in DigitSet::reference_family() {
            let q = d.base();
            for &z in &[0.1f64, 0.5, 0.9, 0.99] {
                for terms in 1..=4u32 {
                    let Some(len) = u64::from(q).checked_pow(terms) else {
                        continue;
                    };
                    if len > 20_000 {
                        continue;
                    }
                    let series: f64 = (0..len)
                        .filter(|&n| d.digit_membership(&BigUint::from(n)))
                        .map(|n| z.powi(n as i32))
                        .sum();
                    let product = evaluate_truncated_product(&d, z, terms).unwrap();
                    let tail = z.powf(len as f64) / (1.0 - z);
                    let slack = 1e-12 * product;
                    assert!(product - series >= -slack, "{d} z={z} J={terms}");
                    assert!(product - series <= tail + slack, "{d} z={z} J={terms}");
                }
            }
        }
    }

    #[test]
    fn truncated_product_monotone_in_terms() {
        let d = ds(4, &[0, 1, 3]);
        let mut last = 0.0;
        for terms in 1..12 {
            let v = evaluate_truncated_product(&d, 0.97, terms).unwrap();
            assert!(v >= last);
            last = v;
        }
    }

    #[test]
    fn full_set_product_is_geometric() {
        let d = DigitSet::full(3).unwrap();
        for &z in &[0.0, 0.3, 0.9, 0.999] {
            let j = default_truncation(&d, z).unwrap();
            let v = evaluate_truncated_product(&d, z, j).unwrap();
            assert!(((1.0 - z) * v - 1.0).abs() < 1e-12, "z={z}");
        }
    }

    #[test]
    fn probe_grid_and_validation() {
        let r = asymptotic_probe(&DigitSet::cantor(), 10.0, 11.0, 0.25).unwrap();
        let ts: Vec<f64> = r.samples.iter().map(|s| s.t).collect();
        assert_eq!(ts, vec![10.0, 10.25, 10.5, 10.75, 11.0]);
        assert!(r.samples.iter().all(|s| s.g.is_finite() && s.g > 0.0));
        assert!(asymptotic_probe(&DigitSet::cantor(), 0.5, 2.0, 0.1).is_err());
        assert!(asymptotic_probe(&DigitSet::cantor(), 2.0, 2.0, 0.1).is_err());
        assert!(asymptotic_probe(&DigitSet::cantor(), 2.0, 3.0, 0.0).is_err());

        let single = asymptotic_probe(&ds(5, &[0]), 1.0, 5.0, 0.5).unwrap();
        assert!(single.samples.iter().all(|s| s.g == 1.0));
    }

    #[test]
    fn probe_csv() {
        let r = asymptotic_probe(&DigitSet::cantor(), 10.0, 10.1, 0.05).unwrap();
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,z,J,G"));
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row[0], "1.0000000000000000e1");
        assert_eq!(text.lines().count(), 4);
    }

    #[test]
    fn probe_modes_agree() {
        let d = DigitSet::cantor();
        let a = asymptotic_probe_with(&d, 1.0, 30.0, 0.005, Execution::Sequential).unwrap();
        let b = asymptotic_probe_with(&d, 1.0, 30.0, 0.005, Execution::Parallel).unwrap();
        assert_eq!(a, b);
    }
}
