use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use su11_sweep::grid::{parse_counts, parse_reals};
use su11_sweep::output::{write_eval, write_report, write_rows};
use su11_sweep::{
    evaluate, run_fig2, run_fig3, run_fig4, run_validate, Command, EvalArgs, InputKind, OutputFormat, Result,
    RowStatus, RunConfig, EXIT_FAILURE, EXIT_OK,
};

/// SU(1,1) interferometer with a Fock state in one arm: figure tables,
/// closed-form validation, single-point evaluation.
#[derive(Debug, Parser)]
#[command(name = "su11", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// QCRB, SNL and HL against the total photon number.
    Fig2(SweepFlags),
    /// Parity signal against phase at a matched photon budget.
    Fig3(SweepFlags),
    /// Phase sensitivity against phase at a matched photon budget.
    Fig4(SweepFlags),
    /// Compare every closed form with the Fock-space simulator.
    Validate(SweepFlags),
    /// Evaluate one closed form by name.
    Eval(EvalFlags),
}

#[derive(Debug, Clone)]
struct Reals(Vec<f64>);

#[derive(Debug, Clone)]
struct Counts(Vec<usize>);

fn reals(text: &str) -> std::result::Result<Reals, String> {
    parse_reals(text).map(Reals)
}

fn counts(text: &str) -> std::result::Result<Counts, String> {
    parse_counts(text).map(Counts)
}

#[derive(Debug, Args)]
struct OutputFlags {
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Grid flags take `a,b,c` or `start:stop:count`; `--n` takes `a,b,c` or
/// `start:stop`. Unset flags keep the command's defaults.
#[derive(Debug, Args)]
struct SweepFlags {
    /// Gains: fig2 panel (a) series, fig3/fig4 gain, validate grid.
    #[arg(long, value_parser = reals)]
    g: Option<Reals>,
    /// Gain axis of fig2 panel (b).
    #[arg(long, value_parser = reals)]
    g_sweep: Option<Reals>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Mode-b Fock numbers.
    #[arg(long, value_parser = counts)]
    n: Option<Counts>,
    /// Mode-a mean photon numbers.
    #[arg(long, value_parser = reals)]
    na: Option<Reals>,
    /// Total photon budgets.
    #[arg(long, value_parser = reals)]
    ntot: Option<Reals>,
    #[arg(long, allow_hyphen_values = true)]
    phi_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    phi_max: Option<f64>,
    #[arg(long)]
    phi_steps: Option<usize>,
    /// Mode-a state families; repeat or comma-separate.
    #[arg(long, value_enum, value_delimiter = ',')]
    input: Vec<InputKind>,
    /// Photon-number distribution for `diag` inputs.
    #[arg(long, value_parser = reals)]
    weights: Option<Reals>,
    /// Leak budget of the Fock-space simulator.
    #[arg(long)]
    cutoff_budget: Option<f64>,
    /// Tail tolerance for truncating coherent and thermal distributions.
    #[arg(long)]
    tail_tol: Option<f64>,
    #[command(flatten)]
    output: OutputFlags,
}

#[derive(Debug, Args)]
struct EvalFlags {
    /// Closed-form operation, e.g. `parity_fock_fock` or `qcrb`.
    op: String,
    #[arg(long)]
    g: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<f64>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    #[arg(long)]
    na: Option<f64>,
    #[arg(long)]
    ntot: Option<f64>,
    #[arg(long)]
    beta_mean: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha_phase: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    beta_phase: Option<f64>,
    #[arg(long, value_enum)]
    input: Option<InputKind>,
    #[arg(long, value_parser = reals)]
    weights: Option<Reals>,
    #[command(flatten)]
    output: OutputFlags,
}

impl SweepFlags {
    fn into_config(self, command: Command) -> RunConfig {
        let mut c = RunConfig::new(command);
        if let Some(Reals(g)) = self.g {
            c.gains = g;
        }
        if let Some(Reals(g)) = self.g_sweep {
            c.gain_sweep = g;
        }
        if let Some(theta) = self.theta {
            c.theta = theta;
        }
        if let Some(Counts(n)) = self.n {
            c.fock_numbers = n;
        }
        if let Some(Reals(na)) = self.na {
            c.mean_a = na;
        }
        if let Some(Reals(n_tot)) = self.ntot {
            c.n_tot = n_tot;
        }
        c.phi.min = self.phi_min.unwrap_or(c.phi.min);
        c.phi.max = self.phi_max.unwrap_or(c.phi.max);
        c.phi.steps = self.phi_steps.unwrap_or(c.phi.steps);
        if !self.input.is_empty() {
            c.inputs = self.input;
        }
        c.weights = self.weights.map(|Reals(w)| w);
        c.cutoff_budget = self.cutoff_budget.unwrap_or(c.cutoff_budget);
        c.tail_tol = self.tail_tol.unwrap_or(c.tail_tol);
        c.format = self.output.format;
        c.out = self.output.out;
        c
    }
}

fn sink(out: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> Result<i32> {
    let (command, flags) = match cli.command {
        Sub::Fig2(f) => (Command::Fig2, f),
        Sub::Fig3(f) => (Command::Fig3, f),
        Sub::Fig4(f) => (Command::Fig4, f),
        Sub::Validate(f) => (Command::Validate, f),
        Sub::Eval(f) => {
            let args = EvalArgs {
                g: f.g,
                theta: f.theta,
                phi: f.phi,
                m: f.m,
                n: f.n,
                k: f.k,
                l: f.l,
                na: f.na,
                n_tot: f.ntot,
                beta_mean: f.beta_mean,
                alpha_phase: f.alpha_phase,
                beta_phase: f.beta_phase,
                input: f.input,
                weights: f.weights.map(|Reals(w)| w),
            };
            let values = evaluate(&f.op, &args)?;
            let mut out = sink(&f.output.out)?;
            write_eval(&f.op, &values, f.output.format, &mut out)?;
            out.flush()?;
            return Ok(EXIT_OK);
        }
    };
    let config = flags.into_config(command);
    if command == Command::Validate {
        let report = run_validate(&config)?;
        let mut out = sink(&config.out)?;
        write_report(&report, config.format, &mut out)?;
        out.flush()?;
        if !report.passed() {
            let failed: Vec<&str> = report.failures().collect();
            eprintln!("validation failed: {}", failed.join(", "));
            return Ok(EXIT_FAILURE);
        }
        return Ok(EXIT_OK);
    }
    let rows = match command {
        Command::Fig2 => run_fig2(&config)?,
        Command::Fig3 => run_fig3(&config)?,
        _ => run_fig4(&config)?,
    };
    let skipped = rows.iter().filter(|r| r.status == RowStatus::Infeasible).count();
    if skipped > 0 {
        eprintln!("warning: {skipped} grid points exceed the photon budget and are marked infeasible");
    }
    let mut out = sink(&config.out)?;
    write_rows(&rows, config.format, &mut out)?;
    out.flush()?;
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
