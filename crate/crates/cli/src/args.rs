use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dirac_core::bispinor::{GridSpec, SpecialCase};
use dirac_core::radial::Sigma;
use dirac_core::FINE_STRUCTURE;

use crate::output::Format;

/// Bound states of the Dirac equation in a Coulomb field.
///
/// Units: ħ = m = c = 1. Radial coordinates are in r_B/Z, energies ε in mc².
#[derive(Debug, Parser)]
#[command(name = "dirac", version, about, long_about = None)]
pub struct Cli {
    /// Nuclear charge.
    #[arg(long = "Z", global = true, default_value_t = 1.0)]
    pub z: f64,

    /// Fine-structure constant.
    #[arg(long, global = true, default_value_t = FINE_STRUCTURE)]
    pub alpha: f64,

    /// Output file (stdout when absent).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Output format; `field` defaults to csv, everything else to json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Energy levels, fine-structure shifts and degeneracies up to n-max.
    Spectrum(SpectrumArgs),
    /// Bispinor components of one state at given points.
    State(StateArgs),
    /// Density and spin fields on a quadrature grid or a (z, ρ) slice.
    Field(FieldArgs),
    /// Run the verification suites; exit 1 if any check fails.
    Verify(VerifyArgs),
    /// Shooting-solver spectrum compared with the closed form.
    Oracle(OracleArgs),
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..=20))]
    pub n_max: u32,
}

/// Selects `(n, κ, m_j, σ)` and the spin parameters.
#[derive(Debug, Clone, Args)]
pub struct Selector {
    /// Principal quantum number n = n_r + κ.
    #[arg(long)]
    pub n: u32,

    /// κ = j + 1/2.
    #[arg(long)]
    pub kappa: u32,

    /// 2·m_j (odd, |2m_j| ≤ 2j).
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    pub two_mj: i32,

    /// σ ∈ {+, -}.
    #[arg(long, default_value = "+", value_parser = parse_sigma, allow_hyphen_values = true)]
    pub sigma: Sigma,

    /// Spin parameter θ.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub theta: f64,

    /// Spin parameter φ.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi: f64,

    /// Named invariant family; overrides --theta/--phi.
    #[arg(long, value_parser = parse_case, conflicts_with_all = ["theta", "phi"])]
    pub case: Option<SpecialCase>,

    /// Upper (Pauli) spinor only.
    #[arg(long)]
    pub pauli: bool,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    #[command(flatten)]
    pub sel: Selector,

    /// Evaluation point r:ϑ:φ (repeatable).
    #[arg(long = "point", value_parser = parse_point, required = true, allow_hyphen_values = true)]
    pub points: Vec<(f64, f64, f64)>,
}

#[derive(Debug, Args)]
pub struct FieldArgs {
    #[command(flatten)]
    pub sel: Selector,

    /// Quadrature node counts r:ϑ:φ.
    #[arg(long, default_value = "64:32:32", value_parser = parse_grid)]
    pub grid: GridSpec,

    /// Sample the (z, ρ) plane instead; negative ρ lies at azimuth φ + π.
    #[arg(long)]
    pub slice: bool,

    /// Slice points per axis.
    #[arg(long, default_value_t = 200, requires = "slice")]
    pub slice_n: usize,

    /// Slice half-width in r_B/Z.
    #[arg(long, default_value_t = 12.0, requires = "slice")]
    pub extent: f64,

    /// Azimuth of the slice plane.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true, requires = "slice")]
    pub slice_phi: f64,

    /// Add spherical components s_r, s_ϑ, s_φ.
    #[arg(long)]
    pub spherical: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    Normalization,
    Spectrum,
    Operators,
    Anticommutators,
    Observables,
    Oracle,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Normalization,
        Suite::Spectrum,
        Suite::Operators,
        Suite::Anticommutators,
        Suite::Observables,
        Suite::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Normalization => "normalization",
            Suite::Spectrum => "spectrum",
            Suite::Operators => "operators",
            Suite::Anticommutators => "anticommutators",
            Suite::Observables => "observables",
            Suite::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Highest principal number for the state-wise suites.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=4))]
    pub n_max: u32,

    /// Suites to run (repeatable); all when absent.
    #[arg(long = "suite", value_enum)]
    pub suites: Vec<Suite>,

    /// Multiply every state by this factor (fault injection).
    #[arg(long, default_value_t = 1.0)]
    pub beta_scale: f64,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=10))]
    pub kappa_max: u32,

    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(0..=10))]
    pub n_r_max: u32,
}

fn parse_sigma(s: &str) -> Result<Sigma, String> {
    match s {
        "+" | "+1" | "1" | "plus" => Ok(Sigma::Plus),
        "-" | "-1" | "minus" => Ok(Sigma::Minus),
        _ => Err(format!("sigma must be + or -, got `{s}`")),
    }
}

fn parse_case(s: &str) -> Result<SpecialCase, String> {
    SpecialCase::from_str(s).map_err(|e| e.to_string())
}

fn split3(s: &str) -> Result<[&str; 3], String> {
    let parts: Vec<&str> = s.split(':').collect();
    <[&str; 3]>::try_from(parts).map_err(|_| format!("expected three `:`-separated values, got `{s}`"))
}

fn parse_point(s: &str) -> Result<(f64, f64, f64), String> {
    let [a, b, c] = split3(s)?;
    let f = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
    Ok((f(a)?, f(b)?, f(c)?))
}

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let [a, b, c] = split3(s)?;
    let f = |t: &str| match t.trim().parse::<usize>() {
        Ok(0) => Err("grid counts must be positive".to_string()),
        Ok(v) => Ok(v),
        Err(e) => Err(format!("`{t}`: {e}")),
    };
    Ok(GridSpec {
        n_r: f(a)?,
        n_theta: f(b)?,
        n_phi: f(c)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn value_parsers() {
        assert_eq!(parse_sigma("-").unwrap(), Sigma::Minus);
        assert!(parse_sigma("0").is_err());
        assert_eq!(parse_point("1:-0.5:2").unwrap(), (1.0, -0.5, 2.0));
        assert!(parse_point("1:2").is_err());
        assert_eq!(
            parse_grid("8:4:2").unwrap(),
            GridSpec {
                n_r: 8,
                n_theta: 4,
                n_phi: 2
            }
        );
        assert!(parse_grid("8:0:2").is_err());
    }

    #[test]
    fn parses_a_field_request() {
        let cli = Cli::try_parse_from([
            "dirac", "field", "--n", "2", "--kappa", "1", "--two-mj", "-1", "--sigma", "-", "--case", "bel", "--slice",
            "--Z", "20",
        ])
        .unwrap();
        assert_eq!(cli.z, 20.0);
        let Command::Field(f) = cli.command else {
            panic!("wrong subcommand")
        };
        assert_eq!(f.sel.two_mj, -1);
        assert_eq!(f.sel.sigma, Sigma::Minus);
        assert_eq!(f.sel.case, Some(SpecialCase::Bel));
        assert!(f.slice);
    }
}
