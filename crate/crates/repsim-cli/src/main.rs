//! `repsim`: scenario-driven CLI for the repeater performance models.
//!
//! Exit codes: 0 success, 2 config/validation error, 3 numerical
//! non-convergence, 4 runtime cap exceeded.

mod output;

use clap::{Args, Parser, Subcommand};
use output::{csv_row, emit, field, Format, RunManifest};
use repsim_core::emission::{
    collection_fraction, direction_from_angles, pattern_value, QuadratureOptions,
};
use repsim_core::fidelity::{
    self, optimize_rabi, scenario_fidelity, FidelityBudget,
};
use repsim_core::montecarlo::{
    expected_multiplexed_time, simulate_link, simulate_multiplexed_link, simulate_repeater,
    MultiplexMode, SimLimits, SimOutcome,
};
use repsim_core::params::mhz_over_2pi_to_rad_s;
use repsim_core::rates::{
    self, curve_sweep, direct_transmission_time, NestingPolicy, DIRECT_SOURCE_RATE_HZ,
    FIBER_LOSS_DB_PER_KM,
};
use repsim_core::ScenarioConfig;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "repsim", version, about = "Quantum repeater performance engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Distance sweep: repeater total time next to the direct-transmission baseline
    Rates(RatesArgs),
    /// Error budget and fidelity at the configured Rabi frequencies
    Fidelity(CommonArgs),
    /// Rabi frequencies minimizing the final error, with reference comparison
    Optimize(CommonArgs),
    /// Cooperative emission pattern and collection-cone fraction
    Emission(EmissionArgs),
    /// Monte Carlo simulation of entanglement delivery times
    Simulate(SimulateArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Scenario config file (JSON)
    #[arg(long)]
    config: PathBuf,
    /// Write output here instead of stdout; a `.manifest.json` lands alongside
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Master seed override
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct RatesArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Distances in km: comma list ("500,600") or range ("100:1000:50")
    #[arg(long, default_value = "100:1000:50")]
    distances: String,
    /// Nesting policy: "best" or "fixed:<n>"
    #[arg(long, default_value = "best")]
    n_policy: String,
    /// Largest nesting level considered by the sweep
    #[arg(long, default_value_t = 4)]
    max_n: u32,
    /// External baseline CSV (`distance_km,T_s`) appended as an overlay column
    #[arg(long)]
    overlay: Option<PathBuf>,
}

#[derive(Args)]
struct EmissionArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Collection cone half-angle (rad)
    #[arg(long, default_value_t = 0.3)]
    cone_rad: f64,
    /// Polar rows in the pattern dump
    #[arg(long, default_value_t = 61)]
    pattern_theta: usize,
    /// Azimuthal columns in the pattern dump
    #[arg(long, default_value_t = 36)]
    pattern_phi: usize,
    /// Resolution doublings allowed before giving up on convergence
    #[arg(long, default_value_t = QuadratureOptions::default().max_doublings)]
    quad_max_doublings: u32,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Trial count override
    #[arg(long)]
    trials: Option<u64>,
    /// Write one delivery time per line to this path
    #[arg(long)]
    dump_samples: Option<PathBuf>,
    /// Scheduling model for multiplexed links
    #[arg(long, value_enum, default_value_t = MultiplexModeArg::Staggered)]
    multiplex_mode: MultiplexModeArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum MultiplexModeArg {
    Staggered,
    Batch,
}

impl From<MultiplexModeArg> for MultiplexMode {
    fn from(arg: MultiplexModeArg) -> Self {
        match arg {
            MultiplexModeArg::Staggered => MultiplexMode::Staggered,
            MultiplexModeArg::Batch => MultiplexMode::Batch,
        }
    }
}

#[derive(Debug)]
enum AppError {
    Config(String),
    NonConvergence(String),
    CapExceeded(String),
    Io(String),
}

impl AppError {
    fn exit_code(&self) -> u8 {
        match self {
            AppError::Config(_) => 2,
            AppError::NonConvergence(_) => 3,
            AppError::CapExceeded(_) => 4,
            AppError::Io(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            AppError::Config(m)
            | AppError::NonConvergence(m)
            | AppError::CapExceeded(m)
            | AppError::Io(m) => m,
        }
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Rates(args) => cmd_rates(args),
        Command::Fidelity(args) => cmd_fidelity(args),
        Command::Optimize(args) => cmd_optimize(args),
        Command::Emission(args) => cmd_emission(args),
        Command::Simulate(args) => cmd_simulate(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("repsim: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}

fn load_config(common: &CommonArgs) -> Result<ScenarioConfig, AppError> {
    let text = std::fs::read_to_string(&common.config)
        .map_err(|e| AppError::Config(format!("cannot read {}: {e}", common.config.display())))?;
    let mut cfg =
        ScenarioConfig::from_document(&text).map_err(|e| AppError::Config(e.to_string()))?;
    if let Some(seed) = common.seed {
        cfg = cfg.with_seed(seed);
    }
    for warning in cfg.warnings() {
        eprintln!("warning: {warning}");
    }
    Ok(cfg)
}

fn parse_distances_km(spec: &str) -> Result<Vec<f64>, AppError> {
    let s = spec.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let mut distances: Vec<f64> = if s.contains(':') {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(AppError::Config(format!(
                "invalid --distances range `{s}`, expected start:stop:step"
            )));
        }
        let parse = |x: &str| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| AppError::Config(format!("invalid distance `{x}`")))
        };
        let (start, stop, step) = (parse(parts[0])?, parse(parts[1])?, parse(parts[2])?);
        if step <= 0.0 || stop < start {
            return Err(AppError::Config(
                "distance range needs step > 0 and stop >= start".into(),
            ));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| start + i as f64 * step).collect()
    } else {
        s.split(',')
            .map(|x| {
                x.trim()
                    .parse::<f64>()
                    .map_err(|_| AppError::Config(format!("invalid distance `{x}`")))
            })
            .collect::<Result<_, _>>()?
    };
    if distances.iter().any(|&d| d <= 0.0 || !d.is_finite()) {
        return Err(AppError::Config("distances must be positive".into()));
    }
    distances.sort_by(|a, b| a.total_cmp(b));
    Ok(distances)
}

fn parse_policy(spec: &str, max_n: u32) -> Result<NestingPolicy, AppError> {
    if spec == "best" {
        return Ok(NestingPolicy::Best);
    }
    if let Some(n) = spec.strip_prefix("fixed:") {
        let n: u32 = n
            .parse()
            .map_err(|_| AppError::Config(format!("invalid --n-policy `{spec}`")))?;
        if n > max_n {
            return Err(AppError::Config(format!(
                "--n-policy fixed:{n} exceeds --max-n {max_n}"
            )));
        }
        return Ok(NestingPolicy::Fixed(n));
    }
    Err(AppError::Config(format!(
        "invalid --n-policy `{spec}`, expected `best` or `fixed:<n>`"
    )))
}

fn read_overlay(path: &Path) -> Result<Vec<(f64, f64)>, AppError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| AppError::Config(format!("cannot read overlay {}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 || line.trim().is_empty() {
            continue; // header
        }
        let mut cols = line.split(',');
        let (km, t) = (cols.next(), cols.next());
        match (
            km.and_then(|x| x.trim().parse::<f64>().ok()),
            t.and_then(|x| x.trim().parse::<f64>().ok()),
        ) {
            (Some(km), Some(t)) => rows.push((km, t)),
            _ => {
                return Err(AppError::Config(format!(
                    "overlay line {} is not `distance_km,T_s`",
                    i + 1
                )))
            }
        }
    }
    Ok(rows)
}

fn cmd_rates(args: RatesArgs) -> Result<(), AppError> {
    let cfg = load_config(&args.common)?;
    let distances_km = parse_distances_km(&args.distances)?;
    let policy = parse_policy(&args.n_policy, args.max_n)?;
    let distances_m: Vec<f64> = distances_km.iter().map(|&d| d * 1e3).collect();
    let overlay = args.overlay.as_deref().map(read_overlay).transpose()?;

    let points = curve_sweep(&distances_m, &cfg.link, policy, args.max_n)
        .map_err(|e| AppError::Config(e.to_string()))?;

    let lookup_overlay = |km: f64| -> Option<f64> {
        overlay.as_ref().and_then(|rows| {
            rows.iter()
                .find(|(d, _)| (d - km).abs() <= 1e-9 * km.abs().max(1.0))
                .map(|&(_, t)| t)
        })
    };

    let payload = match args.common.format {
        Format::Csv => {
            let mut s = String::from("distance_km,n_levels,L0_km,eta_t,P0,T_link_s,T_total_s,T_direct_s");
            if overlay.is_some() {
                s.push_str(",T_overlay_s");
            }
            s.push('\n');
            for p in &points {
                let km = p.distance / 1e3;
                let r = &p.result;
                let direct =
                    direct_transmission_time(p.distance, DIRECT_SOURCE_RATE_HZ, FIBER_LOSS_DB_PER_KM);
                let mut fields = vec![
                    field(km),
                    r.n_levels.to_string(),
                    field(repsim_core::params::derive_link_geometry(p.distance, r.n_levels) / 1e3),
                    field(r.eta_t),
                    field(r.p0),
                    field(r.t_link),
                    field(r.t_total),
                    field(direct.seconds),
                ];
                if overlay.is_some() {
                    fields.push(lookup_overlay(km).map(field).unwrap_or_default());
                }
                s.push_str(&csv_row(&fields));
            }
            s
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = points
                .iter()
                .map(|p| {
                    let km = p.distance / 1e3;
                    let r = &p.result;
                    let direct = direct_transmission_time(
                        p.distance,
                        DIRECT_SOURCE_RATE_HZ,
                        FIBER_LOSS_DB_PER_KM,
                    );
                    let mut row = json!({
                        "distance_km": km,
                        "n_levels": r.n_levels,
                        "L0_km": repsim_core::params::derive_link_geometry(p.distance, r.n_levels) / 1e3,
                        "eta_t": r.eta_t,
                        "P0": r.p0,
                        "T_link_s": r.t_link,
                        "T_total_s": r.t_total,
                        "T_direct_s": direct.seconds,
                    });
                    if let Some(t) = lookup_overlay(km) {
                        row["T_overlay_s"] = json!(t);
                    }
                    row
                })
                .collect();
            let mut doc = serde_json::to_string_pretty(&json!({ "points": rows })).unwrap();
            doc.push('\n');
            doc
        }
    };

    let manifest_args = json!({
        "distances_km": distances_km,
        "n_policy": args.n_policy,
        "max_n": args.max_n,
        "format": format_name(args.common.format),
        "overlay": args.overlay.as_ref().map(|p| p.display().to_string()),
    });
    let manifest = RunManifest::new("rates", cfg.rng_seed, manifest_args, &cfg.to_document());
    emit(args.common.out.as_deref(), &payload, manifest)?;
    Ok(())
}

fn budget_rows(budget: &FidelityBudget<f64>) -> Vec<(&'static str, f64)> {
    let t = &budget.terms;
    vec![
        ("P2_is", t.p2_init_s),
        ("Ploss_is", t.ploss_init_s),
        ("E_is", t.e_init_s),
        ("P2_if", t.p2_init_f),
        ("Ploss_if", t.ploss_init_f),
        ("E_if", t.e_init_f),
        ("P2_en", t.p2_entangle),
        ("Ploss_en", t.ploss_entangle),
        ("E_en", t.e_entangle),
        ("P2_sw", t.p2_swap),
        ("Ploss_sw", t.ploss_swap),
        ("E_sw", t.e_swap),
        ("E_c", budget.e_c),
        ("E_n", budget.e_n),
        ("F", budget.fidelity),
    ]
}

fn term_table(rows: &[(&'static str, f64)], format: Format) -> String {
    match format {
        Format::Csv => {
            let mut s = String::from("term,value\n");
            for (term, value) in rows {
                s.push_str(&csv_row(&[term.to_string(), field(*value)]));
            }
            s
        }
        Format::Json => {
            let mut map = serde_json::Map::new();
            for (term, value) in rows {
                map.insert(term.to_string(), json!(value));
            }
            let mut doc = serde_json::to_string_pretty(&serde_json::Value::Object(map)).unwrap();
            doc.push('\n');
            doc
        }
    }
}

fn emit_budget_warnings(budget: &FidelityBudget<f64>) {
    for warning in budget.terms.warnings() {
        eprintln!("warning: {warning}");
    }
    if budget.clamped {
        eprintln!("warning: accumulated error exceeds 1; fidelity clamped to 0");
    }
}

fn cmd_fidelity(args: CommonArgs) -> Result<(), AppError> {
    let cfg = load_config(&args)?;
    let budget = scenario_fidelity(&cfg.blockade, cfg.link.n_levels);
    emit_budget_warnings(&budget);
    let payload = term_table(&budget_rows(&budget), args.format);
    let manifest_args = json!({ "format": format_name(args.format) });
    let manifest = RunManifest::new("fidelity", cfg.rng_seed, manifest_args, &cfg.to_document());
    emit(args.out.as_deref(), &payload, manifest)?;
    Ok(())
}

fn cmd_optimize(args: CommonArgs) -> Result<(), AppError> {
    let cfg = load_config(&args)?;
    let bp = &cfg.blockade;
    let n = cfg.link.n_levels;
    let optimum = optimize_rabi(bp.b, bp.tau, bp.d, bp.eta_ion, n);

    let optimal_blockade = repsim_core::BlockadeParams {
        omega_s: optimum.omega_s,
        omega_f: optimum.omega_f,
        ..bp.clone()
    };
    let budget = scenario_fidelity(&optimal_blockade, n);
    emit_budget_warnings(&budget);

    let to_mhz = |rad: f64| rad / mhz_over_2pi_to_rad_s(1.0);
    let mut rows = budget_rows(&budget);
    rows.push(("Omega_s_opt_over_2pi_MHz", to_mhz(optimum.omega_s)));
    rows.push(("Omega_f_opt_over_2pi_MHz", to_mhz(optimum.omega_f)));
    rows.push(("F_opt", optimum.fidelity));
    let payload = term_table(&rows, args.format);

    eprintln!("comparison with published reference values:");
    eprintln!(
        "  Omega_s/2pi MHz: computed {}, reference {}",
        field(to_mhz(optimum.omega_s)),
        field(fidelity::REFERENCE_OMEGA_S_OVER_2PI_MHZ)
    );
    eprintln!(
        "  Omega_f/2pi MHz: computed {}, reference {}",
        field(to_mhz(optimum.omega_f)),
        field(fidelity::REFERENCE_OMEGA_F_OVER_2PI_MHZ)
    );
    eprintln!(
        "  fidelity:        computed {}, reference {}",
        field(optimum.fidelity),
        field(fidelity::REFERENCE_FIDELITY)
    );

    let manifest_args = json!({ "format": format_name(args.format) });
    let manifest = RunManifest::new("optimize", cfg.rng_seed, manifest_args, &cfg.to_document());
    emit(args.out.as_deref(), &payload, manifest)?;
    Ok(())
}

fn cmd_emission(args: EmissionArgs) -> Result<(), AppError> {
    let cfg = load_config(&args.common)?;
    if !(args.cone_rad > 0.0 && args.cone_rad <= std::f64::consts::PI) {
        return Err(AppError::Config(
            "--cone-rad must lie in (0, pi]".into(),
        ));
    }
    let geometry = repsim_core::realize_geometry(&cfg.geometry, cfg.lambda, cfg.rng_seed);
    geometry
        .validate()
        .map_err(|e| AppError::Config(e.to_string()))?;
    let quadrature = QuadratureOptions {
        max_doublings: args.quad_max_doublings,
        ..QuadratureOptions::default()
    };
    let report = collection_fraction(&geometry, args.cone_rad, &quadrature);
    eprintln!(
        "quadrature: n_theta={} n_phi={} converged={}",
        report.n_theta, report.n_phi, report.converged
    );

    let thetas: Vec<f64> = (0..args.pattern_theta)
        .map(|i| std::f64::consts::PI * i as f64 / (args.pattern_theta.max(2) - 1) as f64)
        .collect();
    let phis: Vec<f64> = (0..args.pattern_phi)
        .map(|j| 2.0 * std::f64::consts::PI * j as f64 / args.pattern_phi as f64)
        .collect();

    let payload = match args.common.format {
        Format::Csv => {
            let mut s = String::from("theta_rad,phi_rad,P\n");
            for &theta in &thetas {
                for &phi in &phis {
                    let k_hat = direction_from_angles(geometry.axis, theta, phi);
                    let p = pattern_value(&geometry, k_hat);
                    s.push_str(&csv_row(&[field(theta), field(phi), field(p)]));
                }
            }
            s.push_str(&format!("collected_fraction={}\n", field(report.fraction)));
            s
        }
        Format::Json => {
            let pattern: Vec<serde_json::Value> = thetas
                .iter()
                .flat_map(|&theta| {
                    let geometry = &geometry;
                    phis.iter().map(move |&phi| {
                        let k_hat = direction_from_angles(geometry.axis, theta, phi);
                        json!([theta, phi, pattern_value(geometry, k_hat)])
                    })
                })
                .collect();
            let mut doc = serde_json::to_string_pretty(&json!({
                "collected_fraction": report.fraction,
                "cone_half_angle_rad": args.cone_rad,
                "converged": report.converged,
                "n_theta": report.n_theta,
                "n_phi": report.n_phi,
                "geometry": report.descriptor,
                "seed": report.seed,
                "pattern": pattern,
            }))
            .unwrap();
            doc.push('\n');
            doc
        }
    };

    let manifest_args = json!({
        "cone_rad": args.cone_rad,
        "pattern_theta": args.pattern_theta,
        "pattern_phi": args.pattern_phi,
        "quad_max_doublings": args.quad_max_doublings,
        "format": format_name(args.common.format),
    });
    let manifest = RunManifest::new("emission", cfg.rng_seed, manifest_args, &cfg.to_document());
    emit(args.common.out.as_deref(), &payload, manifest)?;

    if !report.converged {
        return Err(AppError::NonConvergence(format!(
            "collection fraction did not stabilize below {} at n_theta={}, n_phi={}",
            quadrature.tolerance, report.n_theta, report.n_phi
        )));
    }
    Ok(())
}

fn sim_limits() -> Result<SimLimits, AppError> {
    match std::env::var("REPSIM_MAX_ROUNDS") {
        Ok(raw) => raw
            .parse::<u64>()
            .map(|max_total_rounds| SimLimits { max_total_rounds })
            .map_err(|_| {
                AppError::Config(format!("REPSIM_MAX_ROUNDS must be an integer, got `{raw}`"))
            }),
        Err(_) => Ok(SimLimits::default()),
    }
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), AppError> {
    let mut cfg = load_config(&args.common)?;
    if let Some(trials) = args.trials {
        if trials == 0 {
            return Err(AppError::Config("--trials must be >= 1".into()));
        }
        cfg = cfg.with_trials(trials);
    }
    let limits = sim_limits()?;
    let link = &cfg.link;
    let (outcome, analytic): (SimOutcome, f64) = if cfg.multiplex_m > 1 {
        if link.n_levels > 0 {
            return Err(AppError::Config(
                "multiplex_m > 1 requires n_levels = 0; the multiplexed nested protocol is not modeled"
                    .into(),
            ));
        }
        let eta_t = rates::transmission_efficiency(link.l0, link.l_att);
        let p0 = rates::link_success_probability(link.p, link.eta_d, eta_t);
        let mode: MultiplexMode = args.multiplex_mode.into();
        let outcome = simulate_multiplexed_link(
            p0,
            link.t_p,
            link.t_com(),
            cfg.multiplex_m,
            mode,
            cfg.rng_seed,
            cfg.trials,
            &limits,
        )
        .map_err(|e| AppError::Config(e.to_string()))?;
        let analytic = expected_multiplexed_time(p0, link.t_p, link.t_com(), cfg.multiplex_m, mode);
        (outcome, analytic)
    } else if link.n_levels == 0 {
        let eta_t = rates::transmission_efficiency(link.l0, link.l_att);
        let p0 = rates::link_success_probability(link.p, link.eta_d, eta_t);
        let outcome = simulate_link(p0, link.t_p, link.t_com(), cfg.rng_seed, cfg.trials, &limits)
            .map_err(|e| AppError::Config(e.to_string()))?;
        let analytic = rates::total_time(link)
            .map_err(|e| AppError::Config(e.to_string()))?
            .t_total;
        (outcome, analytic)
    } else {
        let outcome = simulate_repeater(link, cfg.rng_seed, cfg.trials, &limits)
            .map_err(|e| AppError::Config(e.to_string()))?;
        let analytic = rates::total_time(link)
            .map_err(|e| AppError::Config(e.to_string()))?
            .t_total;
        (outcome, analytic)
    };

    let ratio = outcome.mean / analytic;
    let payload = match args.common.format {
        Format::Csv => {
            let mut s = String::from("trials,mean_s,stderr_s,analytic_s,ratio\n");
            s.push_str(&csv_row(&[
                outcome.trials.to_string(),
                field(outcome.mean),
                field(outcome.stderr),
                field(analytic),
                field(ratio),
            ]));
            s
        }
        Format::Json => {
            let mut doc = serde_json::to_string_pretty(&json!({
                "trials": outcome.trials,
                "mean_s": outcome.mean,
                "stderr_s": outcome.stderr,
                "analytic_s": analytic,
                "ratio": ratio,
                "link_attempts": outcome.link_attempts,
                "swap_attempts": outcome.swap_attempts,
                "truncated_trials": outcome.truncated_trials,
                "seed": outcome.seed,
            }))
            .unwrap();
            doc.push('\n');
            doc
        }
    };

    if let Some(path) = &args.dump_samples {
        let mut dump = String::with_capacity(outcome.samples.len() * 20);
        for sample in &outcome.samples {
            dump.push_str(&field(*sample));
            dump.push('\n');
        }
        std::fs::write(path, dump)?;
    }

    let manifest_args = json!({
        "trials": cfg.trials,
        "multiplex_mode": match args.multiplex_mode {
            MultiplexModeArg::Staggered => "staggered",
            MultiplexModeArg::Batch => "batch",
        },
        "dump_samples": args.dump_samples.as_ref().map(|p| p.display().to_string()),
        "format": format_name(args.common.format),
        "max_total_rounds": limits.max_total_rounds,
    });
    let mut manifest = RunManifest::new("simulate", cfg.rng_seed, manifest_args, &cfg.to_document());
    if let Some(path) = &args.dump_samples {
        manifest.outputs.push(path.display().to_string());
        if args.common.out.is_none() {
            // the dump is the only output file; anchor the manifest to it
            let mut doc = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
            doc.push('\n');
            std::fs::write(output::manifest_path(path), doc)?;
        }
    }
    emit(args.common.out.as_deref(), &payload, manifest)?;

    if outcome.is_partial() {
        return Err(AppError::CapExceeded(format!(
            "{} of {} trials hit the round cap; results are partial",
            outcome.truncated_trials, outcome.trials
        )));
    }
    Ok(())
}

fn format_name(format: Format) -> &'static str {
    match format {
        Format::Csv => "csv",
        Format::Json => "json",
    }
}
