//! `quon`: command-line front end for the quon library.
//!
//! Tables go out as CSV, scalar summaries as JSON, diagnostics on stderr.
//! Exit status: 0 success, 2 invalid parameters, 3 verification or
//! conditioning failure.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "quon", version, about = "Quon algebra computations with CSV/JSON output")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Nonlinear,
    Gk,
}

#[derive(Debug, Args)]
pub struct OutArg {
    /// Write data here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Table of q-numbers ε_n for n < dim, plus the q-mutator residual.
    Spectrum {
        #[arg(long, allow_hyphen_values = true)]
        q: f64,
        #[arg(long, default_value_t = 16)]
        dim: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        out: OutArg,
    },
    /// Samples the position-space eigenstate φ_n on a grid (CSV x,re,im,abs2).
    Wave {
        #[arg(long, allow_hyphen_values = true)]
        q: f64,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long, default_value_t = 1.0)]
        nu2: f64,
        #[arg(long, default_value_t = -5.0, allow_hyphen_values = true)]
        grid_min: f64,
        #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
        grid_max: f64,
        #[arg(long, default_value_t = 201)]
        points: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Coherent-state diagnostics.
    Cs {
        #[command(subcommand)]
        family: CsCommand,
    },
    /// Power intertwiner X = (B†)^l: closed form, spectra and ladder identities.
    Intertwine {
        #[arg(long, allow_hyphen_values = true)]
        q: f64,
        #[arg(long, default_value_t = 64)]
        dim: usize,
        #[arg(long)]
        l: usize,
        #[command(flatten)]
        out: OutArg,
    },
    /// Gauss measure for a coherent-state moment problem (CSV i,node,weight).
    Moments {
        #[arg(long, allow_hyphen_values = true)]
        q: f64,
        /// Number of quadrature nodes (at most 8).
        #[arg(long)]
        m: usize,
        #[arg(long, value_enum, default_value_t = FamilyArg::Nonlinear)]
        family: FamilyArg,
        #[arg(long, default_value_t = 1.0)]
        rho0: f64,
        /// Projection order of the resolution check; defaults to M-1.
        #[arg(long)]
        m_proj: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Where the JSON summary goes in CSV mode; stderr if absent.
        #[arg(long)]
        summary: Option<PathBuf>,
        #[command(flatten)]
        out: OutArg,
    },
    /// Runs the invariant suite; exit 0 iff every check passes.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        q: f64,
        #[arg(long, default_value_t = 32)]
        dim: usize,
        #[command(flatten)]
        out: OutArg,
    },
}

#[derive(Debug, Subcommand)]
enum CsCommand {
    /// Non-linear coherent state Φ_z.
    Nonlinear {
        #[arg(long, allow_hyphen_values = true)]
        q: f64,
        #[arg(long, allow_hyphen_values = true)]
        z_re: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        z_im: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        out: OutArg,
    },
    /// Gazeau–Klauder state |J,γ⟩.
    Gk {
        #[arg(long, allow_hyphen_values = true)]
        q: f64,
        #[arg(long = "J", alias = "j")]
        j: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long, default_value_t = 1.0)]
        rho0: f64,
        /// Evolution time for the temporal-stability check.
        #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
        t: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        out: OutArg,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Spectrum { q, dim, format, out } => commands::spectrum(q, dim, format, out.out.as_deref()),
        Command::Wave {
            q,
            n,
            gamma,
            nu2,
            grid_min,
            grid_max,
            points,
            out,
        } => commands::wave(q, n, gamma, nu2, (grid_min, grid_max, points), out.out.as_deref()),
        Command::Cs { family } => match family {
            CsCommand::Nonlinear { q, z_re, z_im, tol, out } => {
                commands::cs_nonlinear(q, z_re, z_im, tol, out.out.as_deref())
            }
            CsCommand::Gk {
                q,
                j,
                gamma,
                rho0,
                t,
                tol,
                out,
            } => commands::cs_gk(q, j, gamma, rho0, t, tol, out.out.as_deref()),
        },
        Command::Intertwine { q, dim, l, out } => commands::intertwine(q, dim, l, out.out.as_deref()),
        Command::Moments {
            q,
            m,
            family,
            rho0,
            m_proj,
            format,
            summary,
            out,
        } => commands::moments(
            commands::MomentsArgs {
                q,
                m,
                family,
                rho0,
                m_proj,
                format,
                summary,
            },
            out.out.as_deref(),
        ),
        Command::Verify { q, dim, out } => commands::verify(q, dim, out.out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("quon: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
