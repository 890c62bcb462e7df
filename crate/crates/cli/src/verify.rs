//! Built-in verification suites over the reference family of digit sets.

use ghostdim::measures::{level_cdf_at, limit_cdf_at};
use ghostdim::{
    asymptotic_probe, fourier_ghost_product, ghost_level_measure, oracle_prefix, Budget, DigitSet,
    Execution, MahlerEquation, UnitPoint,
};

use crate::args::Suite;
use crate::commands::{Outcome, Run};

struct Checks {
    failed: usize,
    total: usize,
}

impl Checks {
    fn record(&mut self, suite: &str, subject: &str, pass: bool, detail: String) {
        self.total += 1;
        if !pass {
            self.failed += 1;
        }
        let status = if pass { "PASS" } else { "FAIL" };
        println!("{status} {suite:<10} {subject:<18} {detail}");
    }
}

pub fn run(suite: Suite, k_max: Option<u32>, n_max: i64, budget: Budget) -> Run {
    let mut checks = Checks {
        failed: 0,
        total: 0,
    };
    let family = DigitSet::reference_family();
    let all = suite == Suite::All;
    if all || suite == Suite::Dimension {
        dimension(&mut checks, &family);
    }
    if all || suite == Suite::Oracle {
        oracle(&mut checks, &family, k_max.unwrap_or(8), budget)?;
    }
    if all || suite == Suite::Fourier {
        fourier(&mut checks, &family, k_max.unwrap_or(8), n_max, budget)?;
    }
    if all || suite == Suite::Cdf {
        cdf(&mut checks, &family, k_max.unwrap_or(10));
    }
    if all || suite == Suite::Asymptotic {
        asymptotic(&mut checks)?;
    }
    println!(
        "{} of {} checks passed",
        checks.total - checks.failed,
        checks.total
    );
    if checks.failed > 0 {
        return Err(Outcome::Failed);
    }
    Ok(())
}

/// Largest `k ≤ cap` whose prefix fits the budget.
fn fitting_level(ds: &DigitSet, cap: u32, budget: Budget) -> u32 {
    (0..=cap)
        .rev()
        .find(|&k| budget.check(ds.base(), k).is_ok())
        .unwrap_or(0)
}

fn dimension(checks: &mut Checks, family: &[DigitSet]) {
    for ds in family {
        let eq = MahlerEquation::for_digit_set(ds);
        let (pass, detail) = match eq.mahler_eigenvalue() {
            Ok(ev) => {
                let via_eigenvalue = ev.value().ln() / f64::from(ds.base()).ln();
                let diff = (ds.hausdorff_dimension() - via_eigenvalue).abs();
                (
                    diff <= 1e-12 && ev.as_integer() == Some(i64::from(ds.m())),
                    format!(
                        "dim={:.12} lambda={} |diff|={diff:.1e}",
                        ds.hausdorff_dimension(),
                        ev
                    ),
                )
            }
            Err(e) => (false, e.to_string()),
        };
        checks.record("dimension", &ds.to_string(), pass, detail);
    }
}

fn oracle(checks: &mut Checks, family: &[DigitSet], k_max: u32, budget: Budget) -> Run {
    for ds in family {
        let k = fitting_level(ds, k_max, budget);
        let sub = ds.substitution().iterate(k, budget)?;
        let direct = oracle_prefix(ds, k, budget)?;
        let mismatches = Execution::default().count_range(sub.bits().blocks().len(), |i| {
            u64::from((sub.bits().blocks()[i] ^ direct.bits().blocks()[i]).count_ones())
        });
        let ones = sub.bits().count_ones();
        let pass = mismatches == 0 && ones == u64::from(ds.m()).pow(k);
        checks.record(
            "oracle",
            &ds.to_string(),
            pass,
            format!(
                "k={k} symbols={} ones={ones} mismatches={mismatches}",
                sub.len()
            ),
        );
    }
    Ok(())
}

fn fourier(
    checks: &mut Checks,
    family: &[DigitSet],
    k_max: u32,
    n_max: i64,
    budget: Budget,
) -> Run {
    let frequencies: Vec<i64> = (-n_max..=n_max).collect();
    let exec = Execution::default();
    for ds in family {
        let top = fitting_level(ds, k_max, budget);
        let mut worst = 0.0f64;
        for k in 1..=top {
            let measure = ghost_level_measure(ds, k, budget)?;
            let direct = measure.fourier_table(&frequencies, exec);
            let diff = exec
                .map_slice(&direct, |c| {
                    (c.value - fourier_ghost_product(ds, k, c.n).value).norm()
                })
                .into_iter()
                .fold(0.0, f64::max);
            worst = worst.max(diff);
        }
        checks.record(
            "fourier",
            &ds.to_string(),
            worst <= 1e-9,
            format!("k=1..{top} |n|<={n_max} max|direct-product|={worst:.3e}"),
        );
    }
    Ok(())
}

fn cdf(checks: &mut Checks, family: &[DigitSet], k_max: u32) {
    const GRID: u64 = 10_000;
    let exec = Execution::default();
    let grid: Vec<UnitPoint> = (0..=GRID)
        .map(|i| UnitPoint::new(i, GRID).expect("on grid"))
        .collect();
    for ds in family {
        let m = f64::from(ds.m());
        let mut pass = true;
        let mut worst_ratio = 0.0f64;
        for k in 1..=k_max {
            let diff = exec
                .map_slice(&grid, |x| {
                    (level_cdf_at(ds, k, x) - level_cdf_at(ds, k + 1, x)).abs()
                })
                .into_iter()
                .fold(0.0, f64::max);
            let bound = m.powi(-(k as i32));
            pass &= diff <= bound;
            worst_ratio = worst_ratio.max(diff / bound);
        }
        let depth = 40;
        let level = k_max;
        let q_pow = u64::from(ds.base()).pow(level);
        let stride = (q_pow / GRID).max(1);
        let points: Vec<u64> = (0..=q_pow / stride)
            .map(|i| i * stride)
            .chain([q_pow])
            .collect();
        let tolerance = m.powi(-(depth as i32)) + m.powi(-(level as i32));
        let agree_worst = exec
            .map_slice(&points, |&j| {
                let x = UnitPoint::q_adic(j, level, ds.base()).expect("q-adic point");
                (limit_cdf_at(ds, &x, depth) - level_cdf_at(ds, level, &x)).abs()
            })
            .into_iter()
            .fold(0.0, f64::max);
        pass &= agree_worst <= tolerance;
        checks.record(
            "cdf",
            &ds.to_string(),
            pass,
            format!("k=1..{k_max} max diff/m^-k={worst_ratio:.3} limit-vs-level={agree_worst:.1e}"),
        );
    }
}

fn asymptotic(checks: &mut Checks) -> Run {
    let cantor = DigitSet::cantor();
    let report = asymptotic_probe(&cantor, 10.0, 30.0, 0.05)?;
    let (lo, hi) = report.range().expect("nonempty grid");
    checks.record(
        "asymptotic",
        &cantor.to_string(),
        lo > 0.0 && hi.is_finite(),
        format!("G in [{lo:.9}, {hi:.9}]"),
    );
    let shift = (1.0f64 / 0.05).round() as usize;
    let lock = report
        .samples
        .iter()
        .zip(report.samples.iter().skip(shift))
        .filter(|(a, _)| a.t >= 20.0 - 1e-9)
        .map(|(a, b)| (a.g - b.g).abs())
        .fold(0.0, f64::max);
    checks.record(
        "asymptotic",
        &cantor.to_string(),
        lock <= 1e-3,
        format!("max |G(t)-G(t+1)| for t>=20 = {lock:.3e}"),
    );
    for q in [2, 3, 10] {
        let full = DigitSet::full(q)?;
        let report = asymptotic_probe(&full, 10.0, 30.0, 0.05)?;
        let worst = report
            .samples
            .iter()
            .map(|s| (s.g - 1.0).abs())
            .fold(0.0, f64::max);
        checks.record(
            "asymptotic",
            &full.to_string(),
            worst <= 1e-6,
            format!("max |G-1| = {worst:.3e}"),
        );
    }
    Ok(())
}
