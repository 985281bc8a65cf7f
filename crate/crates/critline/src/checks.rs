//! Residual sweeps shared by the command line and the acceptance suite.
//!
//! Each sweep returns a [`CheckTable`]: one row per case with the measured
//! value, the tolerance it is held to and the verdict.

use std::f64::consts::PI;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::integral::xi_integral;
use crate::region::{in_d_decomposition, in_d_inequality, CONSISTENCY_BAND};
use crate::settings::EvalSettings;
use crate::shifts::{moment_limit_report, moment_numeric, moment_rhs, LimitNodes, ShiftConfig};
use crate::specfun::eta_completed;
use crate::theta::{
    general_theta_sides, jacobi_residual, psi1_limit_residuals, psi_xz_transform_residual, small_delta_decay,
};
use crate::Complex;

/// Seed used when a sweep draws random cases and none is given.
pub const DEFAULT_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRow {
    pub check: &'static str,
    pub case: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckRow {
    /// Passes when `value ≤ tolerance` (NaN fails).
    pub fn at_most(check: &'static str, case: String, value: f64, tolerance: f64) -> Self {
        Self { check, case, value, tolerance, pass: value <= tolerance }
    }

    /// Passes when `value < bound` strictly.
    pub fn below(check: &'static str, case: String, value: f64, bound: f64) -> Self {
        Self { check, case, value, tolerance: bound, pass: value < bound }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckTable {
    pub title: String,
    pub rows: Vec<CheckRow>,
}

impl CheckTable {
    pub fn new(title: impl Into<String>) -> Self {
        Self { title: title.into(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: CheckRow) {
        self.rows.push(row);
    }

    pub fn extend(&mut self, other: CheckTable) {
        self.rows.extend(other.rows);
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRow> {
        self.rows.iter().filter(|r| !r.pass)
    }

    /// Largest value among rows of the given check, NaN-propagating.
    pub fn max_value(&self, check: &str) -> Option<f64> {
        self.rows.iter().filter(|r| r.check == check).map(|r| r.value).reduce(|a, b| {
            if a.is_nan() || b.is_nan() {
                f64::NAN
            } else {
                a.max(b)
            }
        })
    }

    /// Columns check, case, value, tolerance, pass.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let io = |e: csv::Error| Error::Parameter(format!("csv output failed: {e}"));
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["check", "case", "value", "tolerance", "pass"]).map_err(io)?;
        for r in &self.rows {
            w.write_record([
                r.check,
                &r.case,
                &format!("{:e}", r.value),
                &format!("{:e}", r.tolerance),
                if r.pass { "true" } else { "false" },
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| Error::Parameter(format!("csv output failed: {e}")))
    }
}

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn fmt_c(z: Complex) -> String {
    format!("{}{:+}i", z.re, z.im)
}

/// η(s) = η(1−s) and η(s̄) = conj η(s) at random s with Re s ∈ [0.2, 0.8], |Im s| ≤ 30.
pub fn functional_equation(samples: usize, seed: u64, settings: &EvalSettings) -> Result<CheckTable> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = CheckTable::new("completed zeta symmetries");
    for _ in 0..samples {
        let s = c(rng.gen_range(0.2..=0.8), rng.gen_range(-30.0..=30.0));
        let e = eta_completed(s, settings)?.value;
        let scale = e.norm().max(1.0);
        let reflected = eta_completed(c(1.0, 0.0) - s, settings)?.value;
        let conjugated = eta_completed(s.conj(), settings)?.value;
        table.push(CheckRow::at_most("functional_equation", fmt_c(s), (e - reflected).norm() / scale, 1e-9));
        table.push(CheckRow::at_most("conjugation", fmt_c(s), (e.conj() - conjugated).norm() / scale, 1e-12));
    }
    Ok(table)
}

/// Jacobi's transformation on a log-spaced grid of x ∈ [0.1, 10].
pub fn jacobi(points: usize, settings: &EvalSettings) -> Result<CheckTable> {
    let mut table = CheckTable::new("jacobi transformation");
    let n = points.max(2);
    for k in 0..n {
        let x = 10f64.powf(-1.0 + 2.0 * k as f64 / (n - 1) as f64);
        table.push(CheckRow::at_most("jacobi", format!("x={x}"), jacobi_residual(x, settings)?, 1e-12));
    }
    Ok(table)
}

/// The generalized theta transformation at random (a, z): half the cases on
/// the unit circle a = e^{iα}, |α| ≤ 0.6, the rest with |a| ∈ [0.5, 2] and
/// Re(a²) > 0.05; |z| ≤ 1.5 throughout.
pub fn general_theta(samples: usize, seed: u64, settings: &EvalSettings) -> Result<CheckTable> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = CheckTable::new("generalized theta transformation");
    for k in 0..samples {
        let a = if k % 2 == 0 {
            Complex::from_polar(1.0, rng.gen_range(-0.6..=0.6))
        } else {
            let r: f64 = rng.gen_range(0.5..=2.0);
            // Re(a²) = r² cos 2φ > 0.05
            let phi_max = 0.5 * (0.05 / (r * r)).acos();
            Complex::from_polar(r, rng.gen_range(-phi_max..phi_max))
        };
        let z = Complex::from_polar(1.5 * rng.gen::<f64>().sqrt(), rng.gen_range(-PI..PI));
        let (sa, sb) = general_theta_sides(a, z, settings)?;
        let residual = (sa - sb).norm() / sa.norm().max(1.0);
        table.push(CheckRow::at_most("general_theta", format!("a={} z={}", fmt_c(a), fmt_c(z)), residual, 1e-9));
    }
    Ok(table)
}

/// The x ↔ 1/x transformation of ψ(x, z) on a small parameter sweep.
pub fn theta_transform(settings: &EvalSettings) -> Result<CheckTable> {
    let mut table = CheckTable::new("psi(x, z) transformation");
    for x in [c(0.3, 0.0), c(1.0, 0.0), c(2.5, 0.0), c(0.8, 0.4), c(1.5, -0.7)] {
        for z in [c(0.0, 0.0), c(0.4, 0.1), c(1.0, -0.5)] {
            let r = psi_xz_transform_residual(x, z, settings)?;
            table.push(CheckRow::at_most("psi_transform", format!("x={} z={}", fmt_c(x), fmt_c(z)), r, 1e-9));
        }
    }
    Ok(table)
}

/// The integral against ∇ equals both theta sides for a ∈ {1, 1.2, e^{0.2i}}, z ∈ {0, 0.4+0.1i, 0.5−0.2i}.
pub fn integral_identity(settings: &EvalSettings) -> Result<CheckTable> {
    let mut table = CheckTable::new("integral representation");
    for a in [c(1.0, 0.0), c(1.2, 0.0), Complex::from_polar(1.0, 0.2)] {
        for z in [c(0.0, 0.0), c(0.4, 0.1), c(0.5, -0.2)] {
            let integral = xi_integral(a, z, settings)?.value;
            let (sa, sb) = general_theta_sides(a, z, settings)?;
            let case = format!("a={} z={}", fmt_c(a), fmt_c(z));
            table.push(CheckRow::at_most("integral_vs_side_a", case.clone(), (integral - sa).norm(), 1e-6));
            table.push(CheckRow::at_most("integral_vs_side_inv_a", case, (integral - sb).norm(), 1e-6));
        }
    }
    Ok(table)
}

/// Count of random points of [−4, 4]² where the two membership tests of 𝔇
/// disagree, ignoring a band of `band` around the boundary.
pub fn region_agreement(samples: usize, seed: u64, band: f64) -> CheckTable {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut disagreements = 0usize;
    let mut banded = 0usize;
    for _ in 0..samples {
        let z = c(rng.gen_range(-4.0..=4.0), rng.gen_range(-4.0..=4.0));
        let a = in_d_inequality(z);
        if a.margin.abs() <= band {
            banded += 1;
            continue;
        }
        if a.inside != in_d_decomposition(z).inside {
            disagreements += 1;
        }
    }
    let mut table = CheckTable::new("region membership agreement");
    let case = format!("samples={samples} seed={seed} in_band={banded}");
    table.push(CheckRow::at_most("region_disagreements", case, disagreements as f64, 0.0));
    table
}

/// Default boundary band for [`region_agreement`].
pub const AGREEMENT_BAND: f64 = CONSISTENCY_BAND;

fn monotone_rows(table: &mut CheckTable, check: &'static str, case: &str, seq: &[f64], final_bound: f64) {
    // Largest ratio of consecutive terms: strictly decreasing iff < 1.
    let ratio = seq.windows(2).map(|w| w[1] / w[0]).fold(0.0, |m: f64, r| if r.is_nan() { f64::NAN } else { m.max(r) });
    table.push(CheckRow::below(check, format!("{case} ratio"), ratio, 1.0));
    table.push(CheckRow::below(check, format!("{case} final"), *seq.last().unwrap_or(&f64::NAN), final_bound));
}

pub const SMALL_DELTAS: [f64; 5] = [0.2, 0.1, 0.05, 0.02, 0.01];

/// Both small-δ theta expressions decrease strictly over [`SMALL_DELTAS`] and end below 1e−8.
pub fn small_delta(settings: &EvalSettings) -> Result<CheckTable> {
    let mut table = CheckTable::new("small-delta theta decay");
    for z in [c(0.0, 0.0), c(0.5, 0.2), c(1.0, 0.5)] {
        let seq = small_delta_decay(z, &SMALL_DELTAS, settings)?;
        monotone_rows(&mut table, "decay_quarter", &format!("z={}", fmt_c(z)), &seq.quarter, 1e-8);
        monotone_rows(&mut table, "decay_unit", &format!("z={}", fmt_c(z)), &seq.unit, 1e-8);
    }
    Ok(table)
}

/// ψ₁ and its second α-derivative approach their limits along α = π/4 − 10^{−k}, k = 1..3.
pub fn psi1_limits(settings: &EvalSettings) -> Result<CheckTable> {
    let mut table = CheckTable::new("psi1 limits");
    for order in [0usize, 2] {
        for lambda in [0.0, 0.3] {
            for z in [c(0.4, 0.0), c(0.4, 0.1)] {
                let seq = psi1_limit_residuals(z, lambda, order, &[1, 2, 3], settings)?;
                let case = format!("m={} lambda={lambda} z={}", order / 2, fmt_c(z));
                monotone_rows(&mut table, "psi1_limit", &case, &seq, 1e-2);
            }
        }
    }
    Ok(table)
}

/// Tolerance of the moment identity at order m.
pub fn moment_identity_tolerance(m: u32) -> f64 {
    if m == 0 {
        1e-5
    } else {
        1e-4
    }
}

/// Numeric moments against their closed-form right-hand sides on an (m, α) grid.
pub fn moments(cfg: &ShiftConfig, ms: &[u32], alphas: &[f64], settings: &EvalSettings) -> Result<CheckTable> {
    let mut table = CheckTable::new("moment identities");
    for &m in ms {
        for &alpha in alphas {
            let numeric = moment_numeric(m, alpha, cfg, settings)?;
            let rhs = moment_rhs(m, alpha, cfg, settings)?;
            let case = format!("m={m} alpha={alpha} numeric={} rhs={rhs}", numeric.value);
            table.push(CheckRow::at_most(
                "moment_identity",
                case,
                (numeric.value - rhs).abs(),
                moment_identity_tolerance(m),
            ));
        }
    }
    Ok(table)
}

/// Tolerance of the α → π/4 limit check at order m.
pub fn moment_limit_tolerance(m: u32) -> f64 {
    if m == 0 {
        5e-3
    } else {
        2e-2
    }
}

/// Relative discrepancy of the extrapolated limit against the closed form.
pub fn moment_limit(cfg: &ShiftConfig, m: u32, settings: &EvalSettings) -> Result<CheckTable> {
    let r = moment_limit_report(m, cfg, &LimitNodes::default(), settings)?;
    let mut table = CheckTable::new("moment limits");
    let case = format!("m={m} extrapolated={} closed_form={}", r.extrapolated, r.closed_form);
    table.push(CheckRow::at_most("moment_limit", case, r.discrepancy, moment_limit_tolerance(m)));
    Ok(table)
}
