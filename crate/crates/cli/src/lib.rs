//! The `sl2amen` command line: argument handling, configuration, the result
//! cache and one function per subcommand.

pub mod cache;
pub mod commands;
pub mod config;

use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

use cache::{Cache, ResultRecord};
use config::RunConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_REFUSED: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_INPUT: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "sl2amen", version, about = "Centralizers, Folner certificates and first-order checks over finite groups")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Flat key = value config file.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Subset-search budget.
    #[arg(long, global = true)]
    pub budget: Option<u64>,
    /// Output directory (cache and exported files).
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Print the full result record as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Forbid the identity in T (default: on for conjugation, off for translation).
    #[arg(long, global = true, require_equals = true, num_args = 0..=1, default_missing_value = "true", value_name = "BOOL")]
    pub exclude_identity: Option<bool>,
    /// Skip the cache for this run.
    #[arg(long, global = true)]
    pub no_cache: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SearchArgs {
    /// Group spec: sl2:gf2_<k>, sl2:gfp_<p>, sym:<n> or prod(A,B).
    pub group: String,
    /// Elements of S separated by ';' (default: the group's generators).
    #[arg(short = 's', long = "set", value_name = "ELEMS")]
    pub s: Option<String>,
    /// Exact fraction p/q (default: the config's epsilon).
    #[arg(long)]
    pub epsilon: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub min_size: usize,
    /// Certify this T instead of searching; elements separated by ';'.
    #[arg(long, value_name = "ELEMS")]
    pub check: Option<String>,
    /// Seeds and greedy refinement only.
    #[arg(long)]
    pub heuristic: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Structural centralizer of an element, cross-checked by brute force.
    Centralizer { group: String, element: String },
    /// Exhaustive check that every nontrivial centralizer is abelian.
    Ct { group: String },
    /// Conjugacy classes with sizes and centralizer orders.
    Classes { group: String },
    /// Distinct conjugates of an element, and class growth along tower levels.
    Icc {
        group: String,
        element: String,
        /// Number of conjugates to produce.
        #[arg(short, long, default_value_t = 8)]
        n: usize,
        /// Tower degrees for the class-growth table, e.g. 2,4.
        #[arg(long, value_delimiter = ',')]
        levels: Vec<u32>,
    },
    /// Minimal Folner set for left translation.
    Folner(SearchArgs),
    /// Minimal c-Folner set for conjugation.
    Cfolner(SearchArgs),
    /// Uniformity profile over a family of groups; writes CSV and JSON.
    Profile {
        /// A spec, a ';' list, or a range such as sym:2..5 or sl2:gf2_1..gf2_3.
        family: String,
        #[arg(long, default_value = "conjugation")]
        mode: String,
        /// Range a..b or a single n.
        #[arg(short, long, default_value = "1..3")]
        n: String,
        /// mixed, random:<k> or fixed:<e1;e2;...>.
        #[arg(long, default_value = "mixed")]
        sampler: String,
    },
    /// Evaluates first-order sentences over groups.
    Fo {
        /// A spec, a ';' list, or a range.
        groups: String,
        /// File with one sentence per line ('#' comments); '-' reads stdin.
        file: Option<PathBuf>,
        #[arg(long = "sentence", value_name = "TEXT")]
        sentences: Vec<String>,
        /// Adds the bounded Folner sentence for n,m.
        #[arg(long, value_name = "N,M")]
        folner: Option<String>,
        #[arg(long, default_value = "conjugation")]
        mode: String,
    },
    /// Evaluates every reduced word up to a length over GF(2)(t).
    Freewords {
        #[arg(default_value_t = 8)]
        max_len: usize,
        /// default or hyperbolic.
        #[arg(long, default_value = "default")]
        pair: String,
        /// Custom generator a as [[..],[..]]@rf2 (needs --b).
        #[arg(long, requires = "b")]
        a: Option<String>,
        #[arg(long, requires = "a")]
        b: Option<String>,
        /// Include every word's value in the output.
        #[arg(long)]
        words: bool,
    },
    /// Inspects the result cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum CacheAction {
    List,
    /// Prints a stored record; any unique key prefix works.
    Show { key: String },
    /// Re-verifies every stored certificate from its JSON alone.
    Verify,
    Clear,
}

/// Resolves the config: defaults, then `--config`, then flags.
pub fn resolve_config(g: &GlobalArgs) -> Result<RunConfig> {
    let mut cfg = match &g.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = g.seed {
        cfg.seed = s;
    }
    if let Some(b) = g.budget {
        cfg.search_budget = b;
    }
    if let Some(o) = &g.out {
        cfg.out = o.clone();
    }
    if let Some(e) = g.exclude_identity {
        cfg.exclude_identity = Some(e);
    }
    if g.no_cache {
        cfg.cache = false;
    }
    Ok(cfg)
}

fn print_record(rec: &ResultRecord, stored: &str, json: bool) {
    if json {
        print!("{stored}");
    } else {
        print!("{}", rec.text);
    }
}

/// Runs a parsed command line and returns the exit code.
pub fn run(cli: Cli) -> i32 {
    let cfg = match resolve_config(&cli.global) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return EXIT_INPUT;
        }
    };
    if let Command::Cache { action } = &cli.command {
        return match commands::cache_command(action, &Cache::new(&cfg.out), cli.global.json) {
            Ok(code) => code,
            Err(e) => {
                eprintln!("error: {e:#}");
                EXIT_INPUT
            }
        };
    }
    match commands::execute(&cli.command, &cfg) {
        Ok(run) => {
            if run.cache_hit {
                eprintln!("cache hit {}", &run.record.key[..12]);
            }
            print_record(&run.record, &run.stored, cli.global.json);
            run.record.exit_code
        }
        Err(e) => {
            let code = commands::exit_code_for(&e);
            let label = match code {
                EXIT_REFUSED => "refused",
                EXIT_BUDGET => "budget exhausted",
                _ => "error",
            };
            eprintln!("{label}: {e:#}");
            code
        }
    }
}
