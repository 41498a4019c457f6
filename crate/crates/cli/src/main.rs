use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use stirlab::families::{family_polynomial_cached, Family, FamilyPolynomial};
use stirlab::grammar::{coefficient_profile, parse_grammar, parse_polynomial};
use stirlab::identities::{self, Bounds, IdentityResult, Scope};
use stirlab::objects::{enumerate_matchings, enumerate_permutations, enumerate_signed, enumerate_stirling};
use stirlab::stats::{distribution_bounded, DEFAULT_ENUMERATION_BOUND};
use stirlab::{Error, ObjectClass, Stat, TableCache};

#[derive(Parser)]
#[command(
    name = "stirlab",
    version,
    about = "Stirling permutation statistics, grammars and identities"
)]
struct Cli {
    #[command(flatten)]
    config: Config,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Config {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,

    /// Directory for cached coefficient tables.
    #[arg(long, global = true, env = "STIRLAB_CACHE")]
    cache_dir: Option<PathBuf>,

    /// Maximum number of worker threads.
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// Largest order accepted by enumerating commands.
    #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_BOUND, value_parser = positive)]
    bound: usize,

    /// Default truncation order for series identities.
    #[arg(long, global = true, value_parser = positive)]
    series_order: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Plain,
}

#[derive(Subcommand)]
enum Command {
    /// List every object of a class, one per line.
    Enumerate {
        #[arg(long)]
        class: ObjectClass,
        #[arg(long)]
        n: usize,
    },
    /// Joint distribution of statistics.
    Stats {
        #[arg(long)]
        class: ObjectClass,
        #[arg(long)]
        n: usize,
        /// Comma-separated statistic names.
        #[arg(long)]
        stats: String,
    },
    /// A named polynomial (A, B, F, M, N, C, T, G or P).
    Poly {
        #[arg(long)]
        name: Family,
        #[arg(long)]
        n: usize,
    },
    /// Apply a grammar's formal derivative to an expression.
    Grammar {
        /// Rule file.
        #[arg(long)]
        rules: PathBuf,
        /// Start expression, e.g. "x*y".
        #[arg(long)]
        start: String,
        /// Number of derivative applications.
        #[arg(long, default_value_t = 1)]
        order: usize,
        /// Comma-separated letters whose exponents index a coefficient profile.
        #[arg(long)]
        profile: Option<String>,
    },
    /// Run identity checks.
    Verify {
        #[arg(long, conflicts_with = "all", required_unless_present = "all")]
        identity: Option<String>,
        #[arg(long)]
        all: bool,
        #[arg(long)]
        max_n: Option<usize>,
        /// Only identities of this scope (stirling, mixed or tables).
        #[arg(long, requires = "all")]
        scope: Option<Scope>,
    },
    /// List registered identities.
    Identities,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

enum Failure {
    Usage(String),
    Identities,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Out<'a> = BufWriter<io::StdoutLock<'a>>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.config.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build_global() {
            eprintln!("stirlab: {e}");
            return ExitCode::from(2);
        }
    }
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(&cli, &mut out).and_then(|()| out.flush().map_err(Failure::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Identities) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            let _ = out.flush();
            eprintln!("stirlab: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli, out: &mut Out) -> Result<(), Failure> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Enumerate { class, n } => enumerate(cfg, out, *class, *n),
        Command::Stats { class, n, stats } => stats_cmd(cfg, out, *class, *n, &Stat::parse_list(stats)?),
        Command::Poly { name, n } => poly(cfg, out, *name, *n),
        Command::Grammar {
            rules,
            start,
            order,
            profile,
        } => grammar(cfg, out, rules, start, *order, profile.as_deref()),
        Command::Verify {
            identity,
            all,
            max_n,
            scope,
        } => verify(cfg, out, identity.as_deref(), *all, *max_n, *scope),
        Command::Identities => list_identities(cfg, out),
    }
}

fn check_bound(cfg: &Config, class: ObjectClass, n: usize) -> Result<(), Failure> {
    if n > cfg.bound {
        return Err(Error::BoundExceeded {
            what: format!("{class} enumeration"),
            n,
            bound: cfg.bound,
        }
        .into());
    }
    Ok(())
}

fn enumerate(cfg: &Config, out: &mut Out, class: ObjectClass, n: usize) -> Result<(), Failure> {
    check_bound(cfg, class, n)?;
    let items: Box<dyn Iterator<Item = String>> = match class {
        ObjectClass::Stirling => Box::new(enumerate_stirling(n).map(|s| s.to_string())),
        ObjectClass::Signed => Box::new(enumerate_signed(n).map(|s| s.to_string())),
        ObjectClass::Matching => Box::new(enumerate_matchings(n).map(|s| s.to_string())),
        ObjectClass::Permutation => Box::new(enumerate_permutations(n).map(|s| s.to_string())),
    };
    match cfg.format {
        Format::Plain => {
            for s in items {
                writeln!(out, "{s}")?;
            }
        }
        Format::Csv => {
            writeln!(out, "object")?;
            for s in items {
                writeln!(out, "\"{s}\"")?;
            }
        }
        Format::Json => {
            let objects: Vec<String> = items.collect();
            serde_json::to_writer(&mut *out, &json!({ "class": class, "n": n, "objects": objects }))?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn stats_cmd(cfg: &Config, out: &mut Out, class: ObjectClass, n: usize, stats: &[Stat]) -> Result<(), Failure> {
    check_bound(cfg, class, n)?;
    if stats.is_empty() {
        return Err(Failure::Usage("no statistics given".into()));
    }
    let table = distribution_bounded(class, n, stats, cfg.bound)?;
    match cfg.format {
        Format::Plain => {
            let parts: Vec<String> = table
                .rows()
                .map(|(v, c)| {
                    let key = if v.len() == 1 {
                        v[0].to_string()
                    } else {
                        let inner: Vec<String> = v.iter().map(u32::to_string).collect();
                        format!("({})", inner.join(","))
                    };
                    format!("{key}:{c}")
                })
                .collect();
            writeln!(out, "{{{}}}", parts.join(","))?;
        }
        Format::Csv => {
            let header: Vec<&str> = stats.iter().map(|s| s.name()).collect();
            writeln!(out, "{},count", header.join(","))?;
            for (v, c) in table.rows() {
                let vals: Vec<String> = v.iter().map(u32::to_string).collect();
                writeln!(out, "{},{c}", vals.join(","))?;
            }
        }
        Format::Json => {
            serde_json::to_writer(&mut *out, &table)?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn cache(cfg: &Config) -> Option<TableCache> {
    cfg.cache_dir
        .clone()
        .or_else(|| dirs::cache_dir().map(|d| d.join("stirlab")))
        .map(TableCache::new)
}

fn poly(cfg: &Config, out: &mut Out, family: Family, n: usize) -> Result<(), Failure> {
    let cache = cache(cfg);
    let p = family_polynomial_cached(family, n, cache.as_ref())?;
    match cfg.format {
        Format::Plain => writeln!(out, "{p}")?,
        Format::Json => {
            serde_json::to_writer(&mut *out, &json!({ "name": family.name(), "n": n, "poly": p }))?;
            writeln!(out)?;
        }
        Format::Csv => match &p {
            FamilyPolynomial::Univariate(q) => {
                writeln!(out, "k,coeff")?;
                for (k, c) in q.coeffs().iter().enumerate() {
                    writeln!(out, "{k},{c}")?;
                }
            }
            FamilyPolynomial::Multivariate(t) => {
                writeln!(out, "i,j,k,coeff")?;
                for (e, c) in t.terms() {
                    writeln!(out, "{},{},{},{c}", e[0], e[1], e[2])?;
                }
            }
        },
    }
    Ok(())
}

fn grammar(
    cfg: &Config,
    out: &mut Out,
    rules: &PathBuf,
    start: &str,
    order: usize,
    profile: Option<&str>,
) -> Result<(), Failure> {
    let text = fs::read_to_string(rules).map_err(|e| Failure::Usage(format!("{}: {e}", rules.display())))?;
    let g = parse_grammar(&text).map_err(|e| Failure::Usage(format!("{}:{e}", rules.display())))?;
    let start = parse_polynomial(start).map_err(|e| Failure::Usage(format!("start expression: {e}")))?;
    let result = g.derive_n(&start, order)?;
    let Some(axes) = profile else {
        match cfg.format {
            Format::Plain => writeln!(out, "{result}")?,
            Format::Json => {
                serde_json::to_writer(&mut *out, &result)?;
                writeln!(out)?;
            }
            Format::Csv => {
                let letters: Vec<_> = g.alphabet().iter().collect();
                let header: Vec<&str> = letters.iter().map(|l| l.as_str()).collect();
                writeln!(out, "{},coeff", header.join(","))?;
                for (m, c) in result.terms() {
                    let e: Vec<String> = letters.iter().map(|l| m.exponent(l).to_string()).collect();
                    writeln!(out, "{},{c}", e.join(","))?;
                }
            }
        }
        return Ok(());
    };
    let axes = axes
        .split(',')
        .map(|a| stirlab::Letter::new(a.trim()))
        .collect::<Result<Vec<_>, _>>()?;
    for a in &axes {
        if !g.alphabet().contains(a) {
            return Err(Error::AlphabetMismatch(a.as_str().to_string()).into());
        }
    }
    let prof = coefficient_profile(&result, &axes)?;
    match cfg.format {
        Format::Plain => {
            let parts: Vec<String> = prof
                .iter()
                .map(|(k, c)| {
                    let inner: Vec<String> = k.iter().map(u32::to_string).collect();
                    if k.len() == 1 {
                        format!("{}:{c}", inner[0])
                    } else {
                        format!("({}):{c}", inner.join(","))
                    }
                })
                .collect();
            writeln!(out, "{{{}}}", parts.join(","))?;
        }
        Format::Csv => {
            let header: Vec<&str> = axes.iter().map(|l| l.as_str()).collect();
            writeln!(out, "{},coeff", header.join(","))?;
            for (k, c) in &prof {
                let e: Vec<String> = k.iter().map(u32::to_string).collect();
                writeln!(out, "{},{c}", e.join(","))?;
            }
        }
        Format::Json => {
            let rows: Vec<_> = prof
                .iter()
                .map(|(k, c)| json!({ "exponents": k, "coeff": c.to_string() }))
                .collect();
            let names: Vec<&str> = axes.iter().map(|l| l.as_str()).collect();
            serde_json::to_writer(&mut *out, &json!({ "axes": names, "rows": rows }))?;
            writeln!(out)?;
        }
    }
    Ok(())
}

fn verify(
    cfg: &Config,
    out: &mut Out,
    identity: Option<&str>,
    all: bool,
    max_n: Option<usize>,
    scope: Option<Scope>,
) -> Result<(), Failure> {
    let bounds = Bounds {
        max_n,
        series_order: cfg.series_order,
    };
    let results = match (identity, all) {
        (Some(name), false) => vec![identities::run_identity(name, bounds)?],
        (None, true) => identities::run_all(bounds, scope)?,
        _ => return Err(Failure::Usage("give either --identity NAME or --all".into())),
    };
    write_report(cfg.format, out, &results)?;
    if results.iter().all(|r| r.pass) {
        Ok(())
    } else {
        Err(Failure::Identities)
    }
}

fn write_report(format: Format, out: &mut Out, results: &[IdentityResult]) -> Result<(), Failure> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, results)?;
            writeln!(out)?;
        }
        Format::Csv => {
            writeln!(out, "name,pass,min_n,max_n,order,millis,witness_n,witness")?;
            for r in results {
                let (wn, wd) = match &r.witness {
                    Some(w) => (w.n.to_string(), w.detail.replace('"', "\"\"")),
                    None => (String::new(), String::new()),
                };
                let order = r.params.order.map(|o| o.to_string()).unwrap_or_default();
                writeln!(
                    out,
                    "{},{},{},{},{order},{},{wn},\"{wd}\"",
                    r.name, r.pass, r.params.min_n, r.params.max_n, r.millis
                )?;
            }
        }
        Format::Plain => {
            for r in results {
                let status = if r.pass { "PASS" } else { "FAIL" };
                let order = r.params.order.map(|o| format!(", order {o}")).unwrap_or_default();
                write!(
                    out,
                    "{status} {} (n {}..={}{order}) {} ms",
                    r.name, r.params.min_n, r.params.max_n, r.millis
                )?;
                if let Some(w) = &r.witness {
                    write!(out, " -- n = {}: {}", w.n, w.detail)?;
                }
                writeln!(out)?;
            }
            let passed = results.iter().filter(|r| r.pass).count();
            writeln!(out, "{passed}/{} identities hold", results.len())?;
        }
    }
    Ok(())
}

fn list_identities(cfg: &Config, out: &mut Out) -> Result<(), Failure> {
    let rows: Vec<_> = identities::REGISTRY
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "scope": c.scope,
                "min_n": c.min_n,
                "default_max_n": c.default_max_n,
                "limit": c.limit,
                "description": c.description,
            })
        })
        .collect();
    match cfg.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &rows)?;
            writeln!(out)?;
        }
        Format::Csv => {
            writeln!(out, "name,scope,min_n,default_max_n,limit")?;
            for c in identities::REGISTRY {
                let scope = serde_json::to_value(c.scope)?;
                writeln!(
                    out,
                    "{},{},{},{},{}",
                    c.name,
                    scope.as_str().unwrap_or_default(),
                    c.min_n,
                    c.default_max_n,
                    c.limit
                )?;
            }
        }
        Format::Plain => {
            let width = identities::REGISTRY.iter().map(|c| c.name.len()).max().unwrap_or(0);
            for c in identities::REGISTRY {
                writeln!(out, "{:width$}  {}", c.name, c.description)?;
            }
        }
    }
    Ok(())
}
