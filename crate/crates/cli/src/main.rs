mod cache;
mod commands;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use verlinde_core::decompose::DEFAULT_SEED;
use verlinde_core::limits;

use cache::{Cache, CacheEntry, Lookup};
use commands::CliError;

/// Exact characters, module decompositions and claim verification for SL2 in
/// odd characteristic.
#[derive(Parser, Debug)]
#[command(name = "verlinde", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Cache directory (default: $VERLINDE_CACHE_DIR, else ~/.verlinde-cache).
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Neither read nor write the cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Largest module or matrix dimension any construction may reach.
    #[arg(long, global = true)]
    dim_cap: Option<usize>,
    /// Seed for randomized splitting searches.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Record wall-clock time in verification reports (bypasses the cache).
    #[arg(long, global = true)]
    timing: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Characters as exponent -> coefficient maps.
    Char {
        #[arg(value_enum)]
        kind: commands::CharKind,
        #[command(flatten)]
        params: commands::Params,
    },
    /// Certified tilting decomposition of a module (`--module EXPR`, or V^m with `--m`).
    Decompose {
        #[command(flatten)]
        params: commands::Params,
    },
    /// Cell index of T_m (`--m`) or of a module (`--module`).
    Cell {
        #[command(flatten)]
        params: commands::Params,
    },
    /// p-adic dimension from exterior dimensions (`--dims`), or of L_m (`--m`, `--n`).
    PadicDim {
        #[command(flatten)]
        params: commands::Params,
    },
    /// Run one verification and print its report.
    Verify {
        #[arg(value_enum)]
        claim: commands::Claim,
        #[command(flatten)]
        params: commands::Params,
    },
    /// Inspect or prune the result cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand, Debug)]
enum CacheAction {
    Ls,
    Gc {
        /// Also remove entries older than this many days.
        #[arg(long)]
        max_age_days: Option<u64>,
    },
}

fn emit(format: Format, payload: &Value, text: impl FnOnce(&Value) -> String) {
    match format {
        Format::Json => println!("{payload}"),
        Format::Text => println!("{}", text(payload)),
    }
}

fn run_cache(cli: &Cli, action: &CacheAction) -> Result<Value, CliError> {
    let cache = Cache::new(cache::default_root(cli.cache_dir.as_deref()));
    match action {
        CacheAction::Ls => {
            let rows: Vec<Value> = cache
                .entries()
                .into_iter()
                .map(|(path, entry)| match entry {
                    Ok(e) => json!({
                        "key": e.key,
                        "request": e.request,
                        "tool_version": e.tool_version,
                        "created": e.created,
                    }),
                    Err(msg) => json!({ "path": path.display().to_string(), "error": msg }),
                })
                .collect();
            Ok(json!({ "root": cache.root().display().to_string(), "entries": rows }))
        }
        CacheAction::Gc { max_age_days } => {
            let stats = cache.gc(max_age_days.map(|d| d * 86_400)).map_err(|e| CliError::Io(e.to_string()))?;
            Ok(json!({ "kept": stats.kept, "removed": stats.removed }))
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, CliError> {
    if let Some(cap) = cli.dim_cap {
        limits::set_dim_cap(cap);
    }
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    let (command, kind, params) = match &cli.command {
        Command::Cache { action } => {
            let out = run_cache(cli, action)?;
            emit(cli.format, &out, render::cache_text);
            return Ok(ExitCode::SUCCESS);
        }
        Command::Char { kind, params } => ("char", Some(kind.name()), params),
        Command::Decompose { params } => ("decompose", None, params),
        Command::Cell { params } => ("cell", None, params),
        Command::PadicDim { params } => ("padic-dim", None, params),
        Command::Verify { claim, params } => ("verify", Some(claim.name()), params),
    };

    let mut request = Map::new();
    request.insert("command".into(), json!(command));
    if let Some(k) = kind {
        request.insert("kind".into(), json!(k));
    }
    request.insert("params".into(), params.to_json());
    request.insert("seed".into(), json!(seed));
    request.insert("dim_cap".into(), json!(limits::dim_cap()));
    let request = cache::canonical(&Value::Object(request));

    let use_cache = !cli.no_cache && !cli.timing;
    let cache = Cache::new(cache::default_root(cli.cache_dir.as_deref()));
    let key = cache::digest(&request);
    let mut payload = None;
    if use_cache {
        match cache.get(&key) {
            Lookup::Hit(entry) => match commands::revalidate(command, params, &entry.payload) {
                Ok(()) if entry.tool_version == cache::TOOL_VERSION => payload = Some(entry.payload),
                Ok(()) => {}
                Err(msg) => eprintln!("warning: ignoring cache entry {key}: {msg}"),
            },
            Lookup::Corrupt(msg) => eprintln!("warning: ignoring corrupt cache entry: {msg}"),
            Lookup::Miss => {}
        }
    }
    let payload = match payload {
        Some(p) => p,
        None => {
            let fresh = commands::compute(&cli.command, seed, cli.timing)?;
            if use_cache {
                if let Err(e) = cache.put(&CacheEntry::new(&request, fresh.clone())) {
                    eprintln!("warning: could not write cache entry under {}: {e}", cache.root().display());
                }
            }
            fresh
        }
    };
    emit(cli.format, &payload, |v| render::text(command, v));
    Ok(ExitCode::from(commands::exit_code(command, &payload)))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
