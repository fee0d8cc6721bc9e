use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tas_sop::montecarlo::EavesdropperMode;
use tas_sop::sweep::{
    emit_csv, find_alpha_star, load_scenario, parse_grid, parse_mode, parse_solutions, run_sweep,
    write_csv, Outputs, SweepError, SweepRow, SweepSpec,
};
use tas_sop::SolutionId;

/// Absolute agreement floor used by `validate`.
const VALIDATE_ABS_TOL: f64 = 1e-3;
const VALIDATE_SIGMAS: f64 = 3.0;

#[derive(Parser)]
#[command(name = "tas-sop", version, about = "Secrecy outage sweeps for MIMO NOMA with antenna selection")]
struct Cli {
    #[command(flatten)]
    overrides: Overrides,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Overrides {
    /// Gauss–Chebyshev nodes for the far-user SOP.
    #[arg(long, global = true)]
    quadrature_n: Option<usize>,
    /// Monte Carlo trials per point.
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Monte Carlo seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Eavesdropper model for Monte Carlo: sic or wces.
    #[arg(long, global = true, value_parser = parse_mode)]
    mode: Option<EavesdropperMode>,
    /// Selection rules to evaluate: 1, 2 or both.
    #[arg(long, global = true, value_parser = parse_solution_set)]
    solutions: Option<SolutionSet>,
}

#[derive(Clone)]
struct SolutionSet(Vec<SolutionId>);

fn parse_solution_set(text: &str) -> Result<SolutionSet, SweepError> {
    parse_solutions(text).map(SolutionSet)
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file or built-in preset (fig2 … fig10) and write CSV.
    Sweep {
        scenario: String,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Find the power split minimising the exact overall SOP.
    AlphaStar {
        scenario: String,
        /// Selection rule: 1 or 2.
        #[arg(long, value_parser = parse_solution_set)]
        solution: Option<SolutionSet>,
        /// α_F grid as start:stop:step.
        #[arg(long, default_value = "0.51:0.99:0.01")]
        grid: String,
    },
    /// Compare exact and Monte Carlo SOPs at every point of a scenario.
    Validate { scenario: String },
}

impl Overrides {
    fn apply(&self, spec: &mut SweepSpec) {
        if let Some(n) = self.quadrature_n {
            spec.base.quadrature_n = n;
        }
        if let Some(t) = self.trials {
            spec.trials = t;
        }
        if let Some(s) = self.seed {
            spec.seed = s;
        }
        if let Some(m) = self.mode {
            spec.mode = m;
        }
        if let Some(s) = &self.solutions {
            spec.solutions = s.0.clone();
        }
    }
}

enum Failure {
    Input(SweepError),
    Validation,
}

impl From<SweepError> for Failure {
    fn from(e: SweepError) -> Self {
        Failure::Input(e)
    }
}

fn load(name: &str, overrides: &Overrides) -> Result<SweepSpec, Failure> {
    let mut spec = load_scenario(name)?;
    overrides.apply(&mut spec);
    spec.validate()?;
    Ok(spec)
}

fn sweep(spec: &SweepSpec, out: Option<&PathBuf>) -> Result<(), Failure> {
    let rows = run_sweep(spec)?;
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    if failed > 0 {
        log::warn!("{failed} of {} rows have errors", rows.len());
    }
    match out {
        Some(path) => emit_csv(&rows, path)?,
        None => write_csv(&rows, std::io::stdout().lock())?,
    }
    Ok(())
}

fn alpha_star(spec: &SweepSpec, solutions: &[SolutionId], grid: &str) -> Result<(), Failure> {
    let grid = parse_grid(grid)?;
    for &sol in solutions {
        let a = find_alpha_star(&spec.base, sol, &grid).map_err(SweepError::from)?;
        let interior = grid.len() > 2 && a.alpha_far != grid[0] && a.alpha_far != grid[grid.len() - 1];
        println!(
            "solution {sol}: alphaF* = {} alphaN* = {:.12} sopO* = {:e}{}",
            a.alpha_far,
            1.0 - a.alpha_far,
            a.sop_overall,
            if interior { "" } else { " (grid endpoint)" }
        );
    }
    Ok(())
}

/// `(name, exact, mc, stderr)` for each SOP present in the row.
fn comparisons(r: &SweepRow) -> Vec<(&'static str, f64, f64, f64)> {
    [
        ("sopN", r.sop_near_exact, r.sop_near_mc, r.sop_near_mc_stderr),
        ("sopF", r.sop_far_exact, r.sop_far_mc, r.sop_far_mc_stderr),
        ("sopO", r.sop_overall_exact, r.sop_overall_mc, r.sop_overall_mc_stderr),
    ]
    .into_iter()
    .filter_map(|(n, e, m, s)| Some((n, e?, m?, s?)))
    .collect()
}

fn validate(mut spec: SweepSpec) -> Result<(), Failure> {
    spec.outputs = Outputs {
        exact: true,
        asymptotic: false,
        montecarlo: true,
    };
    let rows = run_sweep(&spec)?;
    let mut max_z: f64 = 0.0;
    let mut failures = 0usize;
    for r in &rows {
        if let Some(e) = &r.error {
            println!("FAIL {} {}={} solution {}: {e}", r.curve, r.axis, r.axis_value, r.solution);
            failures += 1;
            continue;
        }
        for (name, exact, mc, se) in comparisons(r) {
            let diff = (exact - mc).abs();
            // A zero-variance estimate (no or only outage events) has no
            // z-score; such points are judged by the absolute floor alone.
            let z = (se > 0.0).then(|| diff / se);
            if let Some(z) = z {
                max_z = max_z.max(z);
            }
            let ok = diff <= (VALIDATE_SIGMAS * se).max(VALIDATE_ABS_TOL);
            if !ok {
                failures += 1;
            }
            println!(
                "{} {} {}={} solution {} {name}: exact {exact:e} mc {mc:e} ± {se:e} |z| {}",
                if ok { "ok  " } else { "FAIL" },
                r.curve,
                r.axis,
                r.axis_value,
                r.solution,
                z.map_or("n/a".to_string(), |z| format!("{z:.2}")),
            );
        }
    }
    println!("max |z| = {max_z:.3}; {failures} failure(s) over {} rows", rows.len());
    if failures > 0 {
        Err(Failure::Validation)
    } else {
        Ok(())
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Sweep { scenario, out } => sweep(&load(scenario, &cli.overrides)?, out.as_ref()),
        Command::AlphaStar {
            scenario,
            solution,
            grid,
        } => {
            let spec = load(scenario, &cli.overrides)?;
            let solutions = solution.as_ref().map_or(&spec.solutions, |s| &s.0);
            alpha_star(&spec, solutions, grid)
        }
        Command::Validate { scenario } => validate(load(scenario, &cli.overrides)?),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Validation) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
