//! Acceptance suite: one PASS/FAIL line per criterion, each with its
//! tolerance and runtime budget. Exits nonzero if any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use critline::checks::{self, CheckTable, DEFAULT_SEED};
use critline::shifts::{f_z, f_z_critical_scaled, ShiftConfig};
use critline::zeroscan::scan_fz;
use critline::{Complex, EvalSettings};

/// Outcome of one criterion: verdict plus a one-line summary.
struct Verdict {
    pass: bool,
    summary: String,
}

fn table_verdict(table: &CheckTable, what: &str) -> Verdict {
    let worst = table
        .rows
        .iter()
        .max_by(|a, b| (a.value / a.tolerance).total_cmp(&(b.value / b.tolerance)))
        .map(|r| format!("worst {} = {:.3e} (limit {:.0e})", r.check, r.value, r.tolerance))
        .unwrap_or_else(|| "no rows".into());
    let failed = table.failures().count();
    Verdict { pass: failed == 0, summary: format!("{what}: {} cases, {failed} failed, {worst}", table.rows.len()) }
}

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn exhibit_config() -> ShiftConfig {
    ShiftConfig::new(vec![1.0, 0.5, 0.25], vec![0.0, 1.0, 2.0], c(0.5, 0.25), 0.0).expect("exhibit config is valid")
}

fn two_term(z: Complex) -> ShiftConfig {
    ShiftConfig::new(vec![1.0, 0.5], vec![0.0, 1.0], z, 0.0).expect("two-term config is valid")
}

fn functional_equation(s: &EvalSettings) -> critline::Result<Verdict> {
    let table = checks::functional_equation(200, DEFAULT_SEED, s)?;
    Ok(table_verdict(&table, "eta(s) = eta(1-s) at 200 random s"))
}

fn jacobi(s: &EvalSettings) -> critline::Result<Verdict> {
    Ok(table_verdict(&checks::jacobi(50, s)?, "Jacobi transformation on 50 log-spaced x"))
}

fn general_theta(s: &EvalSettings) -> critline::Result<Verdict> {
    Ok(table_verdict(&checks::general_theta(50, DEFAULT_SEED, s)?, "generalized theta at 50 random (a, z)"))
}

fn integral_identity(s: &EvalSettings) -> critline::Result<Verdict> {
    Ok(table_verdict(&checks::integral_identity(s)?, "integral vs both theta sides, 3 a x 3 z"))
}

fn region(_: &EvalSettings) -> critline::Result<Verdict> {
    let table = checks::region_agreement(100_000, DEFAULT_SEED, 1e-9);
    Ok(table_verdict(&table, "membership tests at 1e5 random points"))
}

fn small_delta(s: &EvalSettings) -> critline::Result<Verdict> {
    Ok(table_verdict(&checks::small_delta(s)?, "small-delta decay, strict decrease and final < 1e-8"))
}

fn psi1_limits(s: &EvalSettings) -> critline::Result<Verdict> {
    Ok(table_verdict(&checks::psi1_limits(s)?, "psi1 limits, decrease and final < 1e-2"))
}

fn moments(s: &EvalSettings) -> critline::Result<Verdict> {
    let mut table = checks::moments(&two_term(c(0.3, -0.2)), &[0, 1], &[0.2], s)?;
    table.extend(checks::moment_limit(&ShiftConfig::hardy(), 0, s)?);
    table.extend(checks::moment_limit(&two_term(c(0.3, 0.0)), 0, s)?);
    let single = ShiftConfig::new(vec![1.0], vec![0.3], c(0.4, 0.2), 0.0)?;
    table.extend(checks::moment_limit(&single, 1, s)?);
    Ok(table_verdict(&table, "moment identities at alpha = 0.2 and extrapolated limits"))
}

fn hardy_zeros(s: &EvalSettings) -> critline::Result<Verdict> {
    // First three ordinates of zeta zeros.
    const REFERENCE: [f64; 3] = [14.134_725_141_734_694, 21.022_039_638_771_555, 25.010_857_580_145_69];
    let report = scan_fz(&ShiftConfig::hardy(), 10.0, 30.0, 0.05, 1e-8, 1, s)?;
    let found: Vec<f64> = report.zeros.iter().map(|z| z.t).collect();
    let worst = if found.len() == REFERENCE.len() {
        found.iter().zip(REFERENCE).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    Ok(Verdict {
        pass: worst <= 1e-6,
        summary: format!("{} zeros in [10, 30], max deviation {worst:.2e} (limit 1e-6)", found.len()),
    })
}

fn exhibit(s: &EvalSettings) -> critline::Result<Verdict> {
    let cfg = exhibit_config();
    let step = 0.02;
    let report = scan_fz(&cfg, 0.0, 40.0, step, 1e-8, 1, s)?;
    let mut confirmed = 0;
    let mut worst_imag = 0.0f64;
    let mut reality = |t: f64| -> critline::Result<()> {
        let v = f_z(c(0.5, t), &cfg, s)?.value;
        worst_imag = worst_imag.max(v.im.abs() / (1.0 + v.norm()));
        Ok(())
    };
    for k in 0..=2000 {
        reality(k as f64 * step)?;
    }
    for b in &report.brackets {
        // Endpoints plus 10 interior points at step/10 spacing.
        let dense: Vec<f64> = (0..=11).map(|k| b.t_lo + (b.t_hi - b.t_lo) * k as f64 / 11.0).collect();
        let mut values = Vec::with_capacity(dense.len());
        for &t in &dense {
            values.push(f_z_critical_scaled(t, &cfg, s)?);
            reality(t)?;
        }
        let changes = values.windows(2).filter(|w| w[0] * w[1] < 0.0).count();
        if changes == 1 {
            confirmed += 1;
        }
    }
    let zeros: Vec<String> = report.zeros.iter().map(|z| format!("{:.4}", z.t)).collect();
    Ok(Verdict {
        pass: report.brackets.len() >= 5 && confirmed == report.brackets.len() && worst_imag < 1e-9,
        summary: format!(
            "{} sign changes in [0, 40] at [{}], {confirmed} densely confirmed, max |Im F|/(1+|F|) = {worst_imag:.1e} (limit 1e-9)",
            report.brackets.len(),
            zeros.join(", ")
        ),
    })
}

fn run_cli(args: &[&str]) -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_critline")).args(args).output().expect("critline binary runs");
    assert!(out.status.success(), "critline {args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    out.stdout
}

fn determinism(s: &EvalSettings) -> critline::Result<Verdict> {
    let cfg = exhibit_config();
    let render = |workers: usize| -> critline::Result<(String, Vec<u8>)> {
        let r = scan_fz(&cfg, 0.0, 40.0, 0.02, 1e-8, workers, s)?;
        let mut csv = Vec::new();
        r.write_csv(&mut csv)?;
        Ok((r.to_json()?, csv))
    };
    let base = render(1)?;
    let library_ok = [4, 8].into_iter().map(render).collect::<critline::Result<Vec<_>>>()?.iter().all(|r| *r == base);

    let dir = std::env::temp_dir().join(format!("critline-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temporary directory");
    let cfg_path = dir.join("exhibit.toml");
    std::fs::write(&cfg_path, "coefficients = [1, 0.5, 0.25]\nshifts = [0, 1, 2]\nz_re = 0.5\nz_im = 0.25\n")
        .expect("write config");
    let cfg_arg = cfg_path.to_str().expect("utf-8 temp path");
    let mut cli_ok = true;
    for format in ["json", "csv"] {
        let runs: Vec<Vec<u8>> = ["1", "4", "1"]
            .iter()
            .map(|w| run_cli(&["scan", "--config", cfg_arg, "--t-max", "40", "--workers", w, "--format", format]))
            .collect();
        cli_ok &= runs.windows(2).all(|p| p[0] == p[1]);
    }
    let region = |w: &str| run_cli(&["region", "--format", "json", "--workers", w]);
    cli_ok &= region("1") == region("3");
    let _ = std::fs::remove_dir_all(Path::new(&dir));

    Ok(Verdict {
        pass: library_ok && cli_ok,
        summary: format!(
            "scan reports for workers 1/4/8 identical: {library_ok}; CLI outputs byte-identical: {cli_ok}"
        ),
    })
}

type Check = fn(&EvalSettings) -> critline::Result<Verdict>;

fn main() {
    let criteria: [(&str, Check, u64); 11] = [
        ("functional equation", functional_equation, 10),
        ("Jacobi transformation", jacobi, 1),
        ("generalized theta", general_theta, 30),
        ("integral representation", integral_identity, 120),
        ("region equivalence", region, 5),
        ("small-delta decay", small_delta, 5),
        ("psi1 limits", psi1_limits, 30),
        ("moment identities", moments, 300),
        ("Hardy reduction zeros", hardy_zeros, 120),
        ("shifted combination zeros", exhibit, 300),
        ("determinism", determinism, 300),
    ];
    let settings = EvalSettings::default();
    let mut failed = 0;
    for (k, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check(&settings);
        let elapsed = start.elapsed();
        let within = elapsed <= Duration::from_secs(*budget);
        let (pass, summary) = match result {
            Ok(v) => (v.pass && within, v.summary),
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!pass);
        println!(
            "criterion {:>2} {} {name}: {summary} [{:.2} s, budget {budget} s]",
            k + 1,
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
