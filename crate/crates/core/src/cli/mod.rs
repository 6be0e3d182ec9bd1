//! The `haarwell` command line.
//!
//! [`run`] parses arguments, dispatches, writes the report to `out` and
//! returns the process exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success, every requested check passed |
//! | 1 | usage or parse error |
//! | 2 | a size cap was exceeded |
//! | 3 | pole (evaluation at a singular point) |
//! | 4 | a requested check ran and failed |
//! | 5 | cache or I/O failure |

mod commands;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;
use crate::weingarten::TableCache;

pub use output::Format;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CAP: i32 = 2;
pub const EXIT_POLE: i32 = 3;
pub const EXIT_CHECK_FAILED: i32 = 4;
pub const EXIT_IO: i32 = 5;

/// Exit code for an engine error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::CapExceeded { .. } => EXIT_CAP,
        Error::Pole { .. } | Error::DivisionByZero | Error::Singular { .. } => EXIT_POLE,
        Error::Cache(_) | Error::Io(_) => EXIT_IO,
        Error::Parse(_)
        | Error::InvalidArgument(_)
        | Error::Unsupported(_)
        | Error::SizeMismatch(_)
        | Error::NotSymmetric => EXIT_USAGE,
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "haarwell",
    version,
    about = "Exact Weingarten calculus and Haar moment checks for U(n), O(n) and O_n^+"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    pub format: Format,

    /// Shorthand for `--format json`.
    #[arg(long, global = true)]
    pub json: bool,

    /// Table cache directory (default: $HAARWELL_CACHE, then the user cache dir).
    #[arg(long, global = true, value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,

    /// Keep tables in memory only.
    #[arg(long, global = true)]
    pub no_cache: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Weingarten function values.
    Wg(WgArgs),
    /// Exact Haar integral of a monomial.
    Integrate(IntegrateArgs),
    /// Run a verification suite: recursion, bounds, three-path, free-survey,
    /// mc:<samples> or clt:<samples>.
    Verify(VerifyArgs),
    /// Random channel eigenvalue demo.
    Channel(ChannelArgs),
    /// Print a full Weingarten table (built or loaded through the cache).
    Table(TableArgs),
    /// Inspect or clear the table cache.
    Cache(CacheArgs),
}

#[derive(Args, Debug, Clone)]
pub struct DimensionArgs {
    /// Evaluate at this dimension (integer, or rational for `free`).
    #[arg(long, value_name = "N", allow_hyphen_values = true, conflicts_with = "symbolic")]
    pub n: Option<String>,

    /// Keep `n` symbolic (the default).
    #[arg(long)]
    pub symbolic: bool,
}

#[derive(Args, Debug)]
pub struct WgArgs {
    /// unitary | orthogonal | free
    pub group: String,
    pub k: usize,
    /// Permutation in cycle notation ("(1 2)(3)", "e"), class ("[2,1]"),
    /// or pair of pairings ("{1,2}{3,4}|{1,4}{2,3}").
    pub key: Option<String>,
    #[command(flatten)]
    pub dim: DimensionArgs,
    /// gram | character | series:<order>; repeat to cross-check.
    #[arg(long = "method", value_name = "METHOD")]
    pub methods: Vec<String>,
    /// Print every entry of the table.
    #[arg(long)]
    pub all_classes: bool,
}

#[derive(Args, Debug)]
pub struct IntegrateArgs {
    /// unitary | orthogonal | free
    pub group: String,
    /// Factors `u[i,j]` and `~u[i,j]` separated by spaces.
    pub monomial: String,
    #[command(flatten)]
    pub dim: DimensionArgs,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub suite: String,
    #[arg(long)]
    pub k: Option<usize>,
    #[command(flatten)]
    pub dim: DimensionArgs,
    /// Seed for Monte-Carlo suites (required there).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Series truncation order for three-path.
    #[arg(long)]
    pub order: Option<usize>,
}

#[derive(Args, Debug)]
pub struct ChannelArgs {
    #[arg(long, default_value_t = 30)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Corner fraction, a rational in (0, 1].
    #[arg(long, default_value = "1/2")]
    pub t: String,
    #[arg(long, default_value_t = 1)]
    pub samples: usize,
    #[arg(long)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct TableArgs {
    pub group: String,
    pub k: usize,
    #[command(flatten)]
    pub dim: DimensionArgs,
}

#[derive(Args, Debug)]
pub struct CacheArgs {
    #[arg(value_enum)]
    pub action: CacheAction,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheAction {
    /// Print the cache directory.
    Path,
    /// Delete cached table files.
    Clear,
}

/// Settings shared by all commands.
#[derive(Clone, Debug)]
pub struct Config {
    pub cache_dir: Option<PathBuf>,
    pub format: Format,
    pub mc_samples: usize,
}

impl Config {
    pub fn from_cli(cli: &Cli) -> Self {
        let cache_dir = if cli.no_cache {
            None
        } else {
            cli.cache_dir.clone().or_else(TableCache::default_dir)
        };
        Config {
            cache_dir,
            format: if cli.json { Format::Json } else { cli.format },
            mc_samples: 100_000,
        }
    }

    pub fn cache(&self) -> TableCache {
        match &self.cache_dir {
            Some(dir) => TableCache::with_dir(dir),
            None => TableCache::in_memory(),
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let config = Config::from_cli(&cli);
    match commands::dispatch(&cli.command, &config) {
        Ok(report) => {
            if let Err(e) = report.write(config.format, out) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_IO;
            }
            if report.passed {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
