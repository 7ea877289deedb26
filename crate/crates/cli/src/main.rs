//! skoda: command-line front end for the containment workbench.
//!
//! Exit codes: 0 ok / all verdicts as expected, 1 usage or parse error,
//! 2 falsification alarm, 3 resource cap exceeded.

mod commands;

use clap::{Parser, Subcommand};
use skoda_core::Config;
use std::path::PathBuf;
use std::process::ExitCode;

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_FALSIFICATION: u8 = 2;
pub const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(
    name = "skoda",
    about = "Exact workbench for Briançon-Skoda-type containments: Gröbner bases, \
             blowup charts, Čech complexes, integral-closure certificates, and \
             constructive vanishing witnesses",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Configuration file (JSON); SKODA_CONFIG is consulted when absent.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Override the S-pair budget.
    #[arg(long, global = true)]
    cap_pairs: Option<usize>,

    /// Override the total-degree budget.
    #[arg(long, global = true)]
    cap_degree: Option<u32>,

    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,

    /// Worker threads for the corpus runner.
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Reduced Gröbner basis of an ideal.
    Gb {
        /// Ring descriptor file (JSON).
        #[arg(long)]
        ring: PathBuf,
        /// Comma-separated generator expressions.
        exprs: String,
    },
    /// Ideal membership of an element.
    Member {
        #[arg(long)]
        ring: PathBuf,
        /// The element.
        element: String,
        /// Comma-separated ideal generators.
        exprs: String,
    },
    /// Integral-closure generators of J^m (monomial J), or a membership
    /// verdict for a single element.
    Icl {
        #[arg(long)]
        ring: PathBuf,
        /// Comma-separated generators of J.
        #[arg(long, short = 'j')]
        ideal: String,
        /// Power m of J whose closure is taken.
        #[arg(long, short = 'm', default_value = "1")]
        power: u32,
        /// Element to test instead of listing generators.
        #[arg(long)]
        element: Option<String>,
    },
    /// The degree-k free complex on given generators.
    Lcomplex {
        #[arg(long)]
        ring: PathBuf,
        /// Comma-separated generators f_1..f_n.
        #[arg(long, short = 'f')]
        generators: String,
        #[arg(long, short = 'k')]
        k: u32,
    },
    /// Blowup model: chart and overlap presentations with restrictions.
    Blowup {
        #[arg(long)]
        ring: PathBuf,
        /// Comma-separated center generators.
        #[arg(long)]
        center: String,
        /// Comma-separated chart index generators f_i.
        #[arg(long)]
        charts: String,
        /// The power: charts present center/f_i^power.
        #[arg(long)]
        power: u32,
    },
    /// Containment check closure(J^(n+k-1)) ⊆ J^k on an instance file.
    BsCheck { instance: PathBuf },
    /// Vanishing witness for the certified element of an instance file.
    VerifyMain { instance: PathBuf },
    /// Birational pre-closure membership on an instance file.
    BirMember { instance: PathBuf },
    /// Run a manifest of instance files and compare against expectations.
    Corpus { manifest: PathBuf },
    /// The elliptic×ℙ¹ counterexample suite.
    Counterexample,
}

fn load_config(cli: &Cli) -> Result<Config, String> {
    let path = cli
        .config
        .clone()
        .or_else(|| std::env::var_os("SKODA_CONFIG").map(PathBuf::from));
    let mut config = match path {
        None => Config::default(),
        Some(p) => {
            let text = std::fs::read_to_string(&p)
                .map_err(|e| format!("cannot read config {}: {e}", p.display()))?;
            serde_json::from_str(&text).map_err(|e| format!("bad config: {e}"))?
        }
    };
    if let Some(v) = cli.cap_pairs {
        config.cap_pairs = v;
    }
    if let Some(v) = cli.cap_degree {
        config.cap_degree = v;
    }
    if let Some(v) = cli.workers {
        config.workers = v;
    }
    config.validate()?;
    Ok(config)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match load_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let json = cli.json;
    let code = match &cli.command {
        Command::Gb { ring, exprs } => commands::cmd_gb(ring, exprs, &config, json),
        Command::Member {
            ring,
            element,
            exprs,
        } => commands::cmd_member(ring, element, exprs, &config, json),
        Command::Icl {
            ring,
            ideal,
            power,
            element,
        } => commands::cmd_icl(ring, ideal, *power, element.as_deref(), &config, json),
        Command::Lcomplex {
            ring,
            generators,
            k,
        } => commands::cmd_lcomplex(ring, generators, *k, &config, json),
        Command::Blowup {
            ring,
            center,
            charts,
            power,
        } => commands::cmd_blowup(ring, center, charts, *power, &config, json),
        Command::BsCheck { instance } => commands::cmd_bs_check(instance, &config, json),
        Command::VerifyMain { instance } => commands::cmd_verify_main(instance, &config, json),
        Command::BirMember { instance } => commands::cmd_bir_member(instance, &config, json),
        Command::Corpus { manifest } => commands::cmd_corpus(manifest, &config, json),
        Command::Counterexample => commands::cmd_counterexample(&config, json),
    };
    ExitCode::from(code)
}
