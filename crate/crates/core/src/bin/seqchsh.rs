//! Command-line surface: evaluate strategy files, emit boundary and sweep
//! CSVs, rerun the pinned reproductions, and report noise thresholds.

use std::f64::consts::{FRAC_PI_4, SQRT_2};
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use seqchsh::boundary::{self, Curve};
use seqchsh::catalog;
use seqchsh::io::{self, StateSpec};
use seqchsh::optimizer::{self, BranchTemplate, SearchSpace};
use seqchsh::report::{self, Check};
use seqchsh::scenario::{
    evaluate_branch, evaluate_strategy, make_state, InstrumentSetting, MeasurementKind,
    ProjectiveInstrument, SequentialStrategy, StateKind,
};
use seqchsh::{analysis, linalg, Error, Result};

#[derive(Parser)]
#[command(name = "seqchsh", version, about = "Sequential CHSH trade-off toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a strategy file: per-branch and mixed values, violation
    /// verdicts and instrument diagnostics.
    Evaluate {
        /// Strategy JSON file.
        strategy: PathBuf,
        /// Report format.
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        output: OutputFormat,
    },
    /// Rebuild a named artifact and check it against its pinned numbers.
    Reproduce {
        /// One of: boundary, fig2, insets, triple, independent, noise,
        /// appendixB_fig.
        target: String,
        /// Output directory for CSV files.
        #[arg(long, default_value = "./out")]
        out: PathBuf,
        /// Samples per emitted curve.
        #[arg(long, default_value_t = 10_000)]
        grid: usize,
    },
    /// Write the optimal trade-off boundary as CSV.
    Boundary {
        /// Samples along the S1 axis.
        #[arg(long, default_value_t = 10_000)]
        grid: usize,
        /// Output directory.
        #[arg(long, default_value = "./out")]
        out: PathBuf,
    },
    /// Optimize S2 over rank-class mixtures at a grid of pinned S1 values.
    Sweep {
        /// Number of S1 targets.
        #[arg(long, default_value_t = 25)]
        grid: usize,
        /// Base seed for the restart streams.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output directory.
        #[arg(long, default_value = "./out")]
        out: PathBuf,
        /// Entanglement angle of the shared state; maximal when omitted.
        #[arg(long)]
        ent_angle: Option<f64>,
    },
    /// Search for the best strategy under a constraint.
    Optimize {
        /// Pin S1 near this value and maximize S2.
        #[arg(long)]
        target: Option<f64>,
        /// Equalize this many pair values and maximize the common value.
        #[arg(long)]
        pairs: Option<usize>,
        /// Forbid shared randomness: one angle set across branches.
        #[arg(long)]
        independent: bool,
        /// Entanglement angle of the shared state; maximal when omitted.
        #[arg(long)]
        ent_angle: Option<f64>,
        /// Base seed for the restart streams.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Pinning tolerance for --target.
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
        /// Independent restarts of the local search.
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        /// Output directory for the best strategy file.
        #[arg(long, default_value = "./out")]
        out: PathBuf,
    },
    /// Report isotropic-noise visibility thresholds.
    Noise {
        /// Violation target every pair value must exceed.
        #[arg(long, default_value_t = 2.0)]
        target: f64,
        /// Samples along the visibility axis.
        #[arg(long, default_value_t = 10_000)]
        grid: usize,
        /// Output directory.
        #[arg(long, default_value = "./out")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    // Die quietly when a downstream pipe closes instead of panicking on
    // EPIPE; Rust installs SIG_IGN for SIGPIPE before main.
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::Io(_) => ExitCode::from(1),
                Error::Schema(_) => ExitCode::from(2),
                _ => ExitCode::from(3),
            }
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Evaluate { strategy, output } => {
            cmd_evaluate(&strategy, output)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Reproduce { target, out, grid } => cmd_reproduce(&target, &out, grid),
        Command::Boundary { grid, out } => {
            let csv = boundary::optimal_boundary().to_csv(grid)?;
            write_file(&out.join("boundary.csv"), &csv)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            grid,
            seed,
            out,
            ent_angle,
        } => {
            cmd_sweep(grid, seed, &out, ent_angle)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Optimize {
            target,
            pairs,
            independent,
            ent_angle,
            seed,
            tol,
            restarts,
            out,
        } => {
            cmd_optimize(target, pairs, independent, ent_angle, seed, tol, restarts, &out)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Noise { target, grid, out } => {
            cmd_noise(target, grid, &out)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn write_file(path: &Path, content: &str) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    fs::write(path, content)?;
    println!("wrote {}", path.display());
    Ok(())
}

fn fmt_values(values: &[f64]) -> String {
    let inner: Vec<String> = values.iter().map(|v| format!("{v:.6}")).collect();
    format!("[{}]", inner.join(", "))
}

fn state_label(spec: &StateSpec) -> String {
    match spec {
        StateSpec::MaximallyEntangled => "maximally_entangled".into(),
        StateSpec::Partial { ent_angle } => format!("partial(ent_angle = {ent_angle:.6})"),
        StateSpec::Isotropic { visibility } => format!("isotropic(visibility = {visibility:.6})"),
    }
}

fn setting_label(setting: &InstrumentSetting) -> String {
    match &setting.kind {
        MeasurementKind::Basis(obs) => format!("basis({:.6})", obs.angle()),
        MeasurementKind::TrivialZero => "trivial_zero".into(),
        MeasurementKind::TrivialOne => "trivial_one".into(),
    }
}

/// Largest deviation of sum_b K_b^dag K_b from the identity over both
/// inputs.
fn completeness_residual(instrument: &ProjectiveInstrument) -> f64 {
    let id = linalg::identity2();
    instrument
        .settings
        .iter()
        .map(|setting| {
            let mut sum = linalg::ComplexMatrix::zeros(2).expect("qubit dimension");
            for k in setting.kraus() {
                sum = sum.add(&k.adjoint().matmul(&k));
            }
            sum.max_abs_diff(&id)
        })
        .fold(0.0, f64::max)
}

fn cmd_evaluate(path: &Path, output: OutputFormat) -> Result<()> {
    let file = io::load_strategy(path)?;
    let strategy = file.to_strategy()?;
    let mixed = evaluate_strategy(&strategy)?;

    let mut branch_rows = Vec::new();
    for weighted in strategy.branches() {
        let point = evaluate_branch(&weighted.branch)?;
        branch_rows.push((weighted.weight, point));
    }

    let mut instrument_rows = Vec::new();
    for (b, weighted) in strategy.branches().iter().enumerate() {
        for (r, instrument) in weighted.branch.instruments.iter().enumerate() {
            instrument_rows.push((
                b + 1,
                r + 1,
                setting_label(&instrument.settings[0]),
                setting_label(&instrument.settings[1]),
                completeness_residual(instrument),
            ));
        }
    }

    match output {
        OutputFormat::Text => {
            println!("state: {}", state_label(&file.state));
            for (k, (weight, point)) in branch_rows.iter().enumerate() {
                println!(
                    "branch {}: weight {weight:.6}  S = {}",
                    k + 1,
                    fmt_values(point.values())
                );
            }
            println!("mixed: S = {}", fmt_values(mixed.values()));
            for (k, s) in mixed.values().iter().enumerate() {
                let verdict = if *s > 2.0 { "violation" } else { "no violation" };
                println!("pair {}: S = {s:.6}  {verdict}", k + 1);
            }
            if instrument_rows.is_empty() {
                println!("instruments: none (single pair)");
            } else {
                for (b, r, y0, y1, residual) in &instrument_rows {
                    println!(
                        "branch {b} relay {r}: y=0 {y0}, y=1 {y1}; completeness residual {residual:.1e}"
                    );
                }
            }
        }
        OutputFormat::Json => {
            let doc = json!({
                "state": file.state,
                "branches": branch_rows
                    .iter()
                    .map(|(weight, point)| json!({
                        "weight": weight,
                        "values": point.values(),
                    }))
                    .collect::<Vec<_>>(),
                "mixed": mixed.values(),
                "verdicts": mixed
                    .values()
                    .iter()
                    .enumerate()
                    .map(|(k, s)| json!({
                        "pair": k + 1,
                        "value": s,
                        "violation": *s > 2.0,
                    }))
                    .collect::<Vec<_>>(),
                "instruments": instrument_rows
                    .iter()
                    .map(|(b, r, y0, y1, residual)| json!({
                        "branch": b,
                        "relay": r,
                        "settings": [y0, y1],
                        "completeness_residual": residual,
                    }))
                    .collect::<Vec<_>>(),
            });
            println!(
                "{}",
                serde_json::to_string_pretty(&doc).expect("report serializes")
            );
        }
    }
    Ok(())
}

fn state_kind(ent_angle: Option<f64>) -> StateKind {
    match ent_angle {
        None => StateKind::MaximallyEntangled,
        Some(ent_angle) => StateKind::Partial { ent_angle },
    }
}

fn cmd_sweep(grid: usize, seed: u64, out: &Path, ent_angle: Option<f64>) -> Result<()> {
    let state = state_kind(ent_angle);
    let space = SearchSpace::rank_classes(state)?;
    let points = optimizer::sweep_boundary(&space, grid, seed)?;
    write_file(&out.join("sweep.csv"), &optimizer::sweep_to_csv(&points))?;

    if matches!(state, StateKind::MaximallyEntangled) {
        let bnd = boundary::optimal_boundary();
        let [lo, hi] = bnd.span();
        let mut excess = f64::NEG_INFINITY;
        for point in &points {
            let cap = bnd.value(point.s1_achieved.clamp(lo, hi))?;
            excess = excess.max(point.s2_best - cap);
        }
        println!("max excess over the optimal boundary: {excess:.6}");
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_optimize(
    target: Option<f64>,
    pairs: Option<usize>,
    independent: bool,
    ent_angle: Option<f64>,
    seed: u64,
    tol: f64,
    restarts: usize,
    out: &Path,
) -> Result<()> {
    let state = state_kind(ent_angle);
    let two_pair_space = || -> Result<SearchSpace> {
        if independent {
            SearchSpace::mixture(
                state,
                vec![BranchTemplate::case_i(1), BranchTemplate::case_iii(1)],
                true,
            )
        } else {
            SearchSpace::rank_classes(state)
        }
    };

    let (space, result) = match (target, pairs) {
        (Some(_), Some(_)) => {
            return Err(Error::InvalidArgument(
                "--target and --pairs are mutually exclusive".into(),
            ))
        }
        (Some(s1), None) => {
            let space = two_pair_space()?;
            let result = optimizer::maximize_s2_at_s1_with(&space, s1, tol, seed, restarts)?;
            (space, result)
        }
        (None, maybe_pairs) => {
            let n = maybe_pairs.unwrap_or(2);
            let space = match n {
                2 => two_pair_space()?,
                3 => {
                    if independent || ent_angle.is_some() {
                        return Err(Error::InvalidArgument(
                            "the three-pair search runs on the shared maximally \
                             entangled state"
                                .into(),
                        ));
                    }
                    SearchSpace::triple_structured()
                }
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "pairs must be 2 or 3, got {other}"
                    )))
                }
            };
            let result = optimizer::maximize_equal_violations_with(&space, n, seed, restarts)?;
            (space, result)
        }
    };

    let file = io::StrategyFile::from_strategy(space.state(), &result.best_strategy)?;
    let path = out.join("best_strategy.json");
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    io::save_strategy(&path, &file)?;

    println!("space: {}", space.label());
    println!("objective: {:.6}", result.objective);
    println!("best point: S = {}", fmt_values(result.best_point.values()));
    println!("evaluations: {}", result.evaluations);
    println!("seed: {}", result.seed);
    println!("wrote {}", path.display());
    Ok(())
}

fn noise_csv(strategy: &SequentialStrategy, grid: usize) -> Result<String> {
    if grid < 2 {
        return Err(Error::InvalidArgument("need at least 2 samples".into()));
    }
    let mut csv = String::from("visibility,s1,s2,min\n");
    for k in 0..grid {
        let v = k as f64 / (grid - 1) as f64;
        let state = make_state(StateKind::Isotropic { visibility: v })?;
        let point = evaluate_strategy(&strategy.with_initial_state(&state))?;
        let s = point.values();
        writeln!(
            csv,
            "{v:.12},{:.12},{:.12},{:.12}",
            s[0],
            s[1],
            point.min()
        )
        .expect("string write");
    }
    Ok(csv)
}

fn cmd_noise(target: f64, grid: usize, out: &Path) -> Result<()> {
    let mixture = catalog::fixed_point_strategy()?;
    let v_mix = analysis::visibility_threshold(&mixture, target)?;
    let v_bisect = analysis::visibility_threshold_bisect(&mixture, target)?;
    let control = SequentialStrategy::single(catalog::tsirelson_branch()?);
    let v_control = analysis::visibility_threshold(&control, target)?;

    println!("fixed-point mixture: v* = {v_mix:.6} (bisection {v_bisect:.6})");
    println!("single-pair control: v* = {v_control:.6}");
    write_file(&out.join("noise.csv"), &noise_csv(&mixture, grid)?)?;
    Ok(())
}

fn curve_csv(curve: &Curve, samples: usize) -> Result<String> {
    if samples < 2 {
        return Err(Error::InvalidArgument("need at least 2 samples".into()));
    }
    let [lo, hi] = curve.domain();
    let mut out = String::from("s1,s2\n");
    for k in 0..samples {
        let x = lo + (hi - lo) * k as f64 / (samples - 1) as f64;
        let y = curve.value(x)?;
        writeln!(out, "{x:.12},{y:.12}").expect("string write");
    }
    Ok(out)
}

fn cmd_reproduce(target: &str, out: &Path, grid: usize) -> Result<ExitCode> {
    let checks = match target {
        "boundary" => reproduce_boundary(out, grid)?,
        "fig2" => reproduce_fig2(out, grid)?,
        "insets" => reproduce_insets(out, grid)?,
        "triple" => reproduce_triple(out)?,
        "independent" => reproduce_independent(out, grid)?,
        "noise" => reproduce_noise(out, grid)?,
        "appendixB_fig" => reproduce_appendix_b(out)?,
        other => {
            eprintln!("error: unknown target `{other}`");
            return Ok(ExitCode::from(1));
        }
    };
    print!("{}", report::render(&checks));
    if report::all_pass(&checks) {
        println!("all {} checks passed", checks.len());
        Ok(ExitCode::SUCCESS)
    } else {
        let failed = checks.iter().filter(|c| !c.pass).count();
        println!("{failed} of {} checks failed", checks.len());
        Ok(ExitCode::from(1))
    }
}

fn reproduce_boundary(out: &Path, grid: usize) -> Result<Vec<Check>> {
    let bnd = boundary::optimal_boundary();
    write_file(&out.join("boundary.csv"), &bnd.to_csv(grid)?)?;
    let mut checks = Vec::new();

    let rows: [(&str, fn(f64) -> f64); 4] = [
        ("mix(point,case_iii)", |x| {
            (1.0 - 7.0_f64.sqrt() / 2.0) * x + 2.0 * SQRT_2
        }),
        ("case_iii", |x| x + 0.5 * (4.0 - x * x).max(0.0).sqrt()),
        ("mix(case_iii,case_i)", |x| 10.0_f64.sqrt() - 0.5 * x),
        ("case_i", |x| 0.5 * (x + (8.0 - x * x).max(0.0).sqrt())),
    ];
    for (piece, (label, f)) in bnd.pieces().iter().zip(rows) {
        let [lo, hi] = piece.interval();
        let mut worst = 0.0_f64;
        for k in 0..1000 {
            let x = lo + (hi - lo) * k as f64 / 999.0;
            worst = worst.max((piece.value(x) - f(x)).abs());
        }
        checks.push(Check::close(format!("row {label}"), worst, 0.0, 1e-9));
    }

    for (k, bp) in bnd.breakpoints().iter().enumerate() {
        let gap = (bnd.pieces()[k].value(*bp) - bnd.pieces()[k + 1].value(*bp)).abs();
        checks.push(Check::close(
            format!("breakpoint {} continuity", k + 1),
            gap,
            0.0,
            1e-9,
        ));
    }

    let fp = 2.0 * 10.0_f64.sqrt() / 3.0;
    checks.push(Check::close("fixed point S1 = S2", bnd.value(fp)?, fp, 1e-9));

    let samples = grid.max(2);
    let env = boundary::upper_envelope(
        &[[0.0, 2.0 * SQRT_2]],
        &[Curve::case_i(), Curve::case_iii()],
        samples,
    )?;
    let mut sup = 0.0_f64;
    for k in 0..samples {
        let x = 2.0 * SQRT_2 * k as f64 / (samples - 1) as f64;
        sup = sup.max((env.value(x)? - bnd.value(x)?).abs());
    }
    checks.push(Check::close("envelope sup error", sup, 0.0, 1e-6));
    Ok(checks)
}

fn reproduce_fig2(out: &Path, grid: usize) -> Result<Vec<Check>> {
    let bnd = boundary::optimal_boundary();
    let case_i = Curve::case_i();
    let case_iii = Curve::case_iii();
    write_file(&out.join("fig2_boundary.csv"), &bnd.to_csv(grid)?)?;
    write_file(&out.join("fig2_case_i.csv"), &curve_csv(&case_i, grid)?)?;
    write_file(&out.join("fig2_case_iii.csv"), &curve_csv(&case_iii, grid)?)?;

    let mut anchors = String::from("label,s1,s2\n");
    for id in [
        "maxent.case_i",
        "maxent.case_ii",
        "maxent.case_iii",
        "maxent.fixed_point",
        "appendixC",
    ] {
        let strategy = catalog::from_id(id, catalog::CatalogParams::default())?;
        let point = evaluate_strategy(&strategy)?;
        let s = point.values();
        writeln!(anchors, "{id},{:.12},{:.12}", s[0], s[1]).expect("string write");
    }
    write_file(&out.join("fig2_anchors.csv"), &anchors)?;

    let mut checks = Vec::new();
    let tangent = boundary::tangent_from_point(0.0, 2.0 * SQRT_2, &case_iii)?;
    checks.push(Check::close(
        "point tangent slope",
        tangent.slope,
        1.0 - 7.0_f64.sqrt() / 2.0,
        1e-9,
    ));
    checks.push(Check::close(
        "point tangent touch",
        tangent.touch,
        (7.0_f64 / 2.0).sqrt(),
        1e-9,
    ));

    let common = boundary::common_tangent(&case_iii, &case_i)?;
    checks.push(Check::close("common tangent slope", common.slope, -0.5, 1e-9));
    checks.push(Check::close(
        "common tangent intercept",
        common.intercept,
        10.0_f64.sqrt(),
        1e-9,
    ));
    checks.push(Check::close(
        "common tangent touch (case iii)",
        common.touch_a,
        3.0 * (2.0_f64 / 5.0).sqrt(),
        1e-9,
    ));
    checks.push(Check::close(
        "common tangent touch (case i)",
        common.touch_b,
        4.0 * (2.0_f64 / 5.0).sqrt(),
        1e-9,
    ));

    let fp = 2.0 * 10.0_f64.sqrt() / 3.0;
    checks.push(Check::close("fixed point S1 = S2", bnd.value(fp)?, fp, 1e-9));
    Ok(checks)
}

fn reproduce_insets(out: &Path, grid: usize) -> Result<Vec<Check>> {
    let bnd = boundary::optimal_boundary();
    let [win_lo, win_hi] = boundary::TYPE_III_WINDOW;
    let samples = grid.max(2);
    let mut csv = String::from("s1,ent_angle,s2_partial,s2_maxent\n");
    for k in 0..samples {
        let x = win_lo + (win_hi - win_lo) * k as f64 / (samples - 1) as f64;
        let ent = boundary::type_iii_optimal_ent_angle(x)?;
        let s2 = boundary::type_iii_tradeoff(x, ent)?;
        writeln!(csv, "{x:.12},{ent:.12},{s2:.12},{:.12}", bnd.value(x)?)
            .expect("string write");
    }
    write_file(&out.join("insets.csv"), &csv)?;

    let mut checks = Vec::new();
    let crossover = boundary::type_ii_crossover()?;
    let expected = 8.0 * SQRT_2 * (7.0 * 7.0_f64.sqrt() - 2.0) / 113.0;
    checks.push(Check::close("type-ii crossover", crossover, expected, 1e-9));

    let phi = boundary::type_iii_optimal_ent_angle(1.99)?;
    checks.push(Check::close("optimal ent angle at S1 = 1.99", phi, 0.686, 2e-3));

    let mut min_margin = f64::INFINITY;
    for k in 0..27 {
        let x = 1.85 + (1.98 - 1.85) * k as f64 / 26.0;
        let ent = boundary::type_iii_optimal_ent_angle(x)?;
        let margin = boundary::type_iii_tradeoff(x, ent)? - bnd.value(x)?;
        min_margin = min_margin.min(margin);
    }
    checks.push(Check::at_least(
        "partial-state margin on [1.85, 1.98]",
        min_margin,
        1e-12,
    ));
    Ok(checks)
}

fn reproduce_triple(out: &Path) -> Result<Vec<Check>> {
    let [phi, phi_hat, phi_tilde] = catalog::TRIPLE_ANGLES;
    let weights = catalog::triple_equalizing_weights(phi, phi_hat, phi_tilde)?;
    let strategy = catalog::triple_strategy(phi, phi_hat, phi_tilde, weights)?;
    let point = evaluate_strategy(&strategy)?;

    let mut csv = String::from("pair,s\n");
    for (k, s) in point.values().iter().enumerate() {
        writeln!(csv, "{},{s:.12}", k + 1).expect("string write");
    }
    write_file(&out.join("triple.csv"), &csv)?;

    let mut checks = Vec::new();
    let s = point.values();
    checks.push(Check::close("equal values (1 vs 2)", s[0] - s[1], 0.0, 1e-9));
    checks.push(Check::close("equal values (1 vs 3)", s[0] - s[2], 0.0, 1e-9));
    checks.push(Check::close("triple violation", s[0], 2.00227, 1e-4));
    Ok(checks)
}

fn reproduce_independent(out: &Path, grid: usize) -> Result<Vec<Check>> {
    let samples = grid.max(2);
    let mut csv = String::from("q,s1,s2\n");
    for k in 0..samples {
        let q = k as f64 / (samples - 1) as f64;
        let point = evaluate_strategy(&catalog::independent_strategy(q)?)?;
        let s = point.values();
        writeln!(csv, "{q:.12},{:.12},{:.12}", s[0], s[1]).expect("string write");
    }
    write_file(&out.join("independent.csv"), &csv)?;

    let q = catalog::equalizing_weight(|q| catalog::independent_strategy(q))?;
    let point = evaluate_strategy(&catalog::independent_strategy(q)?)?;
    let s = point.values();
    let mut checks = Vec::new();
    checks.push(Check::close("equalized pair values", s[0] - s[1], 0.0, 1e-9));
    checks.push(Check::close("equalized violation", s[0], 2.046, 5e-3));
    Ok(checks)
}

fn reproduce_noise(out: &Path, grid: usize) -> Result<Vec<Check>> {
    let mixture = catalog::fixed_point_strategy()?;
    write_file(&out.join("noise.csv"), &noise_csv(&mixture, grid.max(2))?)?;

    let mut checks = Vec::new();
    let v_mix = analysis::visibility_threshold(&mixture, 2.0)?;
    checks.push(Check::close("mixture threshold", v_mix, 0.949, 1e-3));

    let v_bisect = analysis::visibility_threshold_bisect(&mixture, 2.0)?;
    checks.push(Check::close("bisection agreement", v_bisect, v_mix, 2e-6));

    let control = SequentialStrategy::single(catalog::tsirelson_branch()?);
    let v_control = analysis::visibility_threshold(&control, 2.0)?;
    checks.push(Check::close(
        "single-pair control",
        v_control,
        1.0 / SQRT_2,
        1e-9,
    ));
    Ok(checks)
}

fn reproduce_appendix_b(out: &Path) -> Result<Vec<Check>> {
    let mut csv = String::from("ent_angle,s1,s2,min\n");
    let mut checks = Vec::new();
    for ent_angle in [0.1, 0.2, 0.3, 0.5, FRAC_PI_4] {
        let point = evaluate_strategy(&catalog::double_violation_strategy(ent_angle)?)?;
        let s = point.values();
        writeln!(
            csv,
            "{ent_angle:.12},{:.12},{:.12},{:.12}",
            s[0],
            s[1],
            point.min()
        )
        .expect("string write");
        checks.push(Check::from_bool(
            format!("double violation at ent_angle {ent_angle:.6}"),
            format!("min(S1, S2) = {:.6}", point.min()),
            point.min() > 2.0,
        ));
    }
    write_file(&out.join("appendixB.csv"), &csv)?;
    Ok(checks)
}
