//! `fidbound` command-line interface.
//!
//! Exit codes: 0 success, 1 oracle disagreement beyond tolerance, 2 bad
//! input or domain violation. Data goes to stdout, diagnostics to stderr.

use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{self, Sign};
use crate::error::{domain, Result};
use crate::families::{self, Family};
use crate::output::{self, fmt_sig, Hyper, OutputRecord};
use crate::search::{self, GridSpec, VerifyReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "fidbound",
    version,
    about = "Maximal fidelity of oscillator states at a fixed energy gap"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form maximal fidelity for one energy gap.
    Bound(BoundArgs),
    /// Re-derive the bound with the brute-force oracle and compare.
    Verify(VerifyArgs),
    /// Table of bounds over a range of symmetric gaps.
    Scan(ScanArgs),
    /// Fidelity and energy gap of |n> against sqrt(1-b^2)|n> + b|m>.
    Pair(PairArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Coherent,
    Squeezed,
    Negbin,
    Binomial,
    /// Alias for negbin with mu = 1.
    Phase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyName,
    /// Negative binomial order (required for negbin).
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    /// Binomial order (required for binomial).
    #[arg(long = "big-m", allow_negative_numbers = true)]
    pub big_m: Option<i64>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct EnergyArgs {
    /// Relative gap E = (E2 - E1) / E1.
    #[arg(long = "rel-energy", allow_negative_numbers = true)]
    pub rel_energy: Option<f64>,
    /// Symmetric gap Y = |E2 - E1| / sqrt(E1 E2); the positive branch is used.
    #[arg(long = "sym-energy", allow_negative_numbers = true)]
    pub sym_energy: Option<f64>,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub energy: EnergyArgs,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub energy: EnergyArgs,
    /// Coarse grid points before golden-section refinement.
    #[arg(long, default_value_t = 10_001)]
    pub grid: usize,
    /// Override the fidelity tolerance (1e-8 interior, 1e-6 boundary).
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long = "y-min", allow_negative_numbers = true)]
    pub y_min: f64,
    #[arg(long = "y-max", allow_negative_numbers = true)]
    pub y_max: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub steps: i64,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub m: u32,
    #[arg(long, allow_negative_numbers = true)]
    pub beta: f64,
}

impl FamilyArgs {
    fn resolve(&self) -> Result<Family> {
        let fam = match self.family {
            FamilyName::Negbin => {
                let mu = self
                    .mu
                    .ok_or_else(|| domain("--mu is required for negbin"))?;
                Family::negbin(mu)?
            }
            FamilyName::Binomial => {
                let m = self
                    .big_m
                    .ok_or_else(|| domain("--big-m is required for binomial"))?;
                let m = u32::try_from(m)
                    .map_err(|_| domain(format!("--big-m must be >= 1, got {m}")))?;
                Family::binomial(m)?
            }
            FamilyName::Coherent => Family::Coherent,
            FamilyName::Squeezed => Family::Squeezed,
            FamilyName::Phase => Family::phase(),
        };
        if self.mu.is_some() && self.family != FamilyName::Negbin {
            return Err(domain("--mu only applies to negbin"));
        }
        if self.big_m.is_some() && self.family != FamilyName::Binomial {
            return Err(domain("--big-m only applies to binomial"));
        }
        Ok(fam)
    }

    fn label(&self) -> &'static str {
        match self.family {
            FamilyName::Phase => "phase",
            _ => "",
        }
    }
}

fn label_of(args: &FamilyArgs, fam: &Family) -> String {
    match args.label() {
        "" => fam.name().to_string(),
        l => l.to_string(),
    }
}

fn hyper_of(fam: &Family) -> Option<Hyper> {
    match *fam {
        Family::NegBin { mu } => Some(Hyper::Real(mu)),
        Family::Binomial { big_m } => Some(Hyper::Int(big_m)),
        _ => None,
    }
}

/// Relative gap requested on the command line (positive branch for `--sym-energy`).
fn requested_rel(e: &EnergyArgs) -> Result<f64> {
    match (e.rel_energy, e.sym_energy) {
        (Some(rel), _) => {
            bounds::y_from_e(rel)?;
            Ok(rel)
        }
        (None, Some(sym)) => bounds::e_from_y(sym, Sign::Positive),
        (None, None) => Err(domain("one of --rel-energy or --sym-energy is required")),
    }
}

fn cmd_bound(args: &BoundArgs) -> Result<String> {
    let fam = args.family.resolve()?;
    let (y, rel, r) = match (args.energy.rel_energy, args.energy.sym_energy) {
        (Some(rel), _) => {
            let r = bounds::fmax_for_rel(&fam, rel)?;
            (bounds::y_from_e(rel)?, rel, r)
        }
        _ => {
            let y = args.energy.sym_energy.unwrap_or_default();
            let r = bounds::fmax(&fam, y)?;
            (y, bounds::e_from_y(y, Sign::Positive)?, r)
        }
    };
    let rec = OutputRecord {
        family: label_of(&args.family, &fam),
        hyper: hyper_of(&fam),
        y,
        e_rel: rel,
        f_max: r.f_max,
        param_star: r.extremal_param,
        branch: r.branch.to_string(),
    };
    Ok(match args.format {
        Format::Text => rec.to_text(),
        Format::Csv => output::to_csv(&[rec]),
        Format::Json => output::to_json(&[rec]),
    })
}

fn render_report(label: &str, rep: &VerifyReport, pass: bool, format: Format) -> String {
    let status = if pass { "pass" } else { "fail" };
    if format == Format::Json {
        let v = serde_json::json!({
            "family": label,
            "hyper": rep.family.hyper(),
            "e_rel": rep.rel,
            "f_closed": rep.f_closed,
            "f_oracle": rep.f_oracle,
            "abs_gap": rep.abs_gap,
            "param_closed": rep.param_closed,
            "param_oracle": rep.param_oracle,
            "branch": rep.branch.as_str(),
            "coarse_points": rep.grid.coarse_points,
            "refine_tol": rep.grid.refine_tol,
            "boundary_margin": rep.grid.boundary_margin,
            "infeasible_points": rep.infeasible_points,
            "boundary_approach": rep.boundary_approach,
            "boundary_monotone": rep.boundary_monotone,
            "status": status,
        });
        return serde_json::to_string_pretty(&v).expect("serializable") + "\n";
    }
    let mut s = String::new();
    let mut line = |k: &str, v: String| s.push_str(&format!("{k:<18} {v}\n"));
    line("family", label.to_string());
    line("hyper", rep.family.hyper().map_or("-".into(), fmt_sig));
    line("e_rel", fmt_sig(rep.rel));
    line("y", bounds::y_from_e(rep.rel).map_or("-".into(), fmt_sig));
    line("f_closed", fmt_sig(rep.f_closed));
    line("f_oracle", fmt_sig(rep.f_oracle));
    line("abs_gap", format!("{:.3e}", rep.abs_gap));
    line("param_closed", fmt_sig(rep.param_closed));
    line("param_oracle", fmt_sig(rep.param_oracle));
    line("branch", rep.branch.to_string());
    line(
        "grid",
        format!(
            "coarse_points={} refine_tol={:e} boundary_margin={:e}",
            rep.grid.coarse_points, rep.grid.refine_tol, rep.grid.boundary_margin
        ),
    );
    line("infeasible_points", rep.infeasible_points.to_string());
    for (z, f) in &rep.boundary_approach {
        line(
            "boundary",
            format!("zeta={} f={}", fmt_sig(*z), fmt_sig(*f)),
        );
    }
    if !rep.boundary_approach.is_empty() {
        line("boundary_monotone", rep.boundary_monotone.to_string());
    }
    line("status", status.to_string());
    s
}

fn cmd_verify(args: &VerifyArgs) -> Result<(String, bool)> {
    let fam = args.family.resolve()?;
    let rel = requested_rel(&args.energy)?;
    if let Some(t) = args.tolerance {
        if !(t >= 0.0) {
            return Err(domain("--tolerance must be >= 0"));
        }
    }
    let grid = GridSpec {
        coarse_points: args.grid,
        ..GridSpec::default()
    };
    let rep = search::oracle_max_fidelity(&fam, rel, &grid)?;
    let pass = rep.passes_with(args.tolerance);
    Ok((
        render_report(&label_of(&args.family, &fam), &rep, pass, args.format),
        pass,
    ))
}

fn cmd_scan(args: &ScanArgs) -> Result<String> {
    let fam = args.family.resolve()?;
    if !(args.y_min >= 0.0) || !(args.y_max >= args.y_min) {
        return Err(domain("need 0 <= --y-min <= --y-max"));
    }
    if args.steps < 1 {
        return Err(domain("--steps must be >= 1"));
    }
    let steps = args.steps as usize;
    let h = (args.y_max - args.y_min) / steps as f64;
    let ys: Vec<f64> = (0..=steps)
        .map(|i| {
            if i == steps {
                args.y_max
            } else {
                args.y_min + h * i as f64
            }
        })
        .collect();
    let rows = search::scan_tradeoff(&fam, &ys)?;
    let label = label_of(&args.family, &fam);
    let recs: Vec<OutputRecord> = rows
        .iter()
        .map(|r| OutputRecord {
            family: label.clone(),
            hyper: hyper_of(&fam),
            y: r.sym,
            e_rel: r.rel_pos,
            f_max: r.f_max,
            param_star: r.extremal_param,
            branch: r.branch.to_string(),
        })
        .collect();
    Ok(match args.format {
        Format::Json => output::to_json(&recs),
        Format::Csv | Format::Text => output::to_csv(&recs),
    })
}

fn cmd_pair(args: &PairArgs) -> Result<String> {
    let (f, de) = families::fock_pair_tradeoff(args.n, args.m, args.beta)?;
    let linear = families::fock_pair_delta_e_linear_form(args.n, args.m, args.beta);
    let mut s = String::new();
    s.push_str(&format!("n         {}\n", args.n));
    s.push_str(&format!("m         {}\n", args.m));
    s.push_str(&format!("beta      {}\n", fmt_sig(args.beta)));
    s.push_str(&format!("fidelity  {}\n", fmt_sig(f)));
    s.push_str(&format!("delta_e   {}\n", fmt_sig(de)));
    s.push_str(&format!(
        "note: delta_e is <n> of the superposition minus n, i.e. beta^2 (m - n); \
         the form beta*m - (1 - sqrt(1 - beta^2))*n gives {} and does not match it \
         unless beta is 0 or 1\n",
        fmt_sig(linear)
    ));
    Ok(s)
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Bound(a) => cmd_bound(a).map(|s| (s, true)),
        Command::Verify(a) => cmd_verify(a),
        Command::Scan(a) => cmd_scan(a).map(|s| (s, true)),
        Command::Pair(a) => cmd_pair(a).map(|s| (s, true)),
    };
    match result {
        Ok((text, ok)) => {
            let _ = out.write_all(text.as_bytes());
            if ok {
                EXIT_OK
            } else {
                let _ = writeln!(
                    err,
                    "fidbound: oracle disagrees with the closed form beyond tolerance"
                );
                EXIT_VERIFY_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(err, "fidbound: {e}");
            EXIT_INPUT
        }
    }
}
