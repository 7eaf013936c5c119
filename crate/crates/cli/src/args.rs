use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Inclusive integer range written as `v` or `lo..hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub lo: usize,
    pub hi: usize,
}

impl Span {
    pub fn single(v: usize) -> Self {
        Span { lo: v, hi: v }
    }

    pub fn pair(self) -> [usize; 2] {
        [self.lo, self.hi]
    }

    pub fn values(self) -> impl Iterator<Item = usize> {
        self.lo..=self.hi
    }
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("'{t}' is not a nonnegative integer"))
        };
        let span = match s.split_once("..") {
            Some((lo, hi)) => Span {
                lo: parse(lo)?,
                hi: parse(hi.strip_prefix('=').unwrap_or(hi))?,
            },
            None => Span::single(parse(s)?),
        };
        if span.lo == 0 || span.lo > span.hi {
            return Err(format!("range {s} must satisfy 1 <= lo <= hi"));
        }
        Ok(span)
    }
}

impl Serialize for Span {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}..{}", self.lo, self.hi)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Schwarz,
    Identities,
    Gruss,
    Transforms,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TransformKind {
    Fourier,
    Mellin,
}

#[derive(Debug, Parser)]
#[command(name = "gruss", version, about = "Check Grüss-type inequalities in Hilbert C*-modules over M_k(C)")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Base seed for every random draw.
    #[arg(long, global = true, env = "GRUSS_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Algebra dimension k (value or lo..hi).
    #[arg(long, global = true)]
    pub k: Option<Span>,
    /// Module rows m (value or lo..hi).
    #[arg(long = "m-dim", global = true)]
    pub m_dim: Option<Span>,
    /// Tuple length n (value or lo..hi).
    #[arg(long, global = true)]
    pub n: Option<Span>,
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub rtol: f64,
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub atol: f64,
    /// Report file; defaults to gruss-<command>.<format> in the working directory.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Suppress the summary on standard output.
    #[arg(long, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run verification suites, or replay the worst cases of a stored report.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Random instances per inequality.
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Re-evaluate the worst cases stored in a report file.
        #[arg(long)]
        replay: Option<PathBuf>,
    },
    /// Fuzz one inequality with seeded random instances.
    Fuzz {
        /// Inequality id, e.g. thm42 or schwarz_abs.
        id: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
    },
    /// Bound reports for Fourier or Mellin transforms over an (n, m, omega) grid.
    Transforms {
        #[arg(value_enum)]
        kind: TransformKind,
        /// Frequency or moment index m (value or lo..hi); defaults to 1..n.
        #[arg(long)]
        m: Option<Span>,
        /// Comma-separated frequencies in radians; required for fourier.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        omega: Vec<f64>,
    },
    /// Evaluate the two-point extremal instance for |G_p| <= r s.
    Sharpness {
        #[arg(long, default_value_t = 1.0)]
        r: f64,
        #[arg(long, default_value_t = 1.0)]
        s: f64,
    },
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spans_parse() {
        assert_eq!("3".parse::<Span>().unwrap(), Span::single(3));
        assert_eq!("1..4".parse::<Span>().unwrap(), Span { lo: 1, hi: 4 });
        assert_eq!("2..=5".parse::<Span>().unwrap(), Span { lo: 2, hi: 5 });
        assert!("0".parse::<Span>().is_err());
        assert!("4..2".parse::<Span>().is_err());
        assert!("a..2".parse::<Span>().is_err());
        assert_eq!(Span { lo: 1, hi: 4 }.to_string(), "1..4");
    }

    #[test]
    fn global_flags_after_subcommand() {
        let cli = Cli::try_parse_from(["gruss", "fuzz", "thm42", "--trials", "5", "--seed", "9", "--k", "2..3"]).unwrap();
        assert_eq!(cli.common.seed, 9);
        assert_eq!(cli.common.k, Some(Span { lo: 2, hi: 3 }));
        assert!(matches!(cli.command, Command::Fuzz { trials: 5, .. }));
    }

    #[test]
    fn omega_list() {
        let cli = Cli::try_parse_from(["gruss", "transforms", "fourier", "--omega", "0,0.5,-1.25"]).unwrap();
        match cli.command {
            Command::Transforms { omega, .. } => assert_eq!(omega, vec![0.0, 0.5, -1.25]),
            _ => panic!("wrong command"),
        }
    }
}
