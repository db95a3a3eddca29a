mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "betamat", version, about = "Spectra of beta-matrices B_n = T_n(e^{i theta}) + (v - e_1) e^T")]
#[command(after_help = "Exit codes: 0 success, 1 computational failure, 2 usage error.\n\
Failures print one JSON line {\"error\": KIND, \"message\": TEXT} on stderr.")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Csv,
    Json,
}

#[derive(Args, Clone, Debug)]
pub struct Common {
    /// beta as p/q, decimal, or a+bi (beta1 defaults to 1)
    #[arg(long)]
    pub beta: Option<String>,
    /// Matrix order(s), comma separated
    #[arg(long, value_delimiter = ',', default_value = "10")]
    pub n: Vec<usize>,
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    pub format: OutFormat,
    /// Output file; a directory when a command writes one file per order.
    /// Standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Significant digits in printed numbers (and root-finding target)
    #[arg(long, default_value_t = 20)]
    pub digits: u32,
    /// Working precision in bits where a command needs one
    #[arg(long, default_value_t = 256)]
    pub prec: u32,
    /// Print exact p/q values where they exist
    #[arg(long)]
    pub exact: bool,
}

#[derive(Subcommand)]
pub enum Command {
    /// Dense B_n. CSV: one matrix row per line, no header.
    Matrix(Common),
    /// Characteristic polynomial p_n. CSV columns: k, coeff (low to high).
    Charpoly(Common),
    /// Eigenvalues as roots of p_n. CSV columns: re, im, residual.
    Eigs(Common),
    /// Strong-clustering counts (beta real, > 1). CSV columns: n, beta, epsilon, outside_count.
    Cluster {
        #[command(flatten)]
        common: Common,
        /// Annulus half-width around the unit circle
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
    },
    /// Real outliers for beta in (1, 2). CSV columns: n, large, small, err_large, err_small.
    Outliers {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.05)]
        eps: f64,
    },
    /// Singular values, nonincreasing. CSV columns: index, sigma.
    Singvals(Common),
    /// Weyl sums for built-in test functions. CSV columns: n, F_id, empirical, reference, gap.
    Weyl {
        #[command(flatten)]
        common: Common,
        /// Test function id (constant, radial_bump, angular_window, re_moment, im_moment); all when absent
        #[arg(long)]
        function: Option<String>,
        /// eigen or singular
        #[arg(long, default_value = "eigen")]
        kind: String,
    },
    /// beta = 1: dominant eigenvalue fit. CSV columns: n, c0_est, c1_est.
    Beta1 {
        #[command(flatten)]
        common: Common,
        /// Dump K exact power-method iterates as JSON instead
        #[arg(long)]
        trace: Option<usize>,
    },
    /// Regenerate figure data and tables into the --out directory.
    ///
    /// fig1/fig2/fig3: fig*_n{50,100,200,400}.csv with columns re, im, for beta = 5, 3, 4/3.
    /// outlier-digits: outlier_digits.csv with columns n, lambda_M (beta = 4/3, 50 digits).
    /// table1: table1.csv with columns n, k, v_k_1, expected, matches, r_k.
    /// table2: table2.csv with columns n, c0_est, c1_est.
    Reproduce {
        #[arg(value_enum)]
        target: Target,
        /// Output directory
        #[arg(long, default_value = ".")]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutFormat,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    Fig1,
    Fig2,
    Fig3,
    OutlierDigits,
    Table1,
    Table2,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let line = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{line}");
            if e.is_usage() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
