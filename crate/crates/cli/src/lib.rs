//! The `sagan` command-line tool.
//!
//! Exit codes: 0 success (or pattern found), 1 pattern not found within the
//! limit, 2 bad arguments, 3 corrupt cache, 4 digits could not be resolved,
//! 5 unresolved carry in digit extraction.

pub mod render;

use std::collections::BTreeSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;

use sagan::bbp::{self, BbpError};
use sagan::digits::{
    cross_checked_digits, digits_in_base, open_stream, read_cache, write_cache, ConstantSpec,
    DigitBlock, DigitCache, DigitError,
};
use sagan::normality::{self, NormalityError};
use sagan::raster::{rasterize, GeneralizedPattern, Scheme};
use sagan::search::{
    compile, cost_estimate, expected_position, find_first_with_context, SearchError,
};

use render::SearchRecord;

/// Widest context accepted by `--context`.
pub const MAX_CONTEXT: usize = 10_000;

/// Largest side accepted by `circle`.
pub const MAX_CIRCLE: usize = 4096;

const STREAM_BLOCK: usize = 4096;

#[derive(Debug, Parser)]
#[command(
    name = "sagan",
    version,
    about = "Digits of constants and the circles hidden in them"
)]
pub struct Cli {
    /// Directory for digit caches.
    #[arg(long, global = true, env = "SAGAN_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Digits of context shown around a match.
    #[arg(long, global = true, default_value_t = sagan::search::DEFAULT_CONTEXT)]
    pub context: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print fractional digits of a constant.
    Digits(DigitsArgs),
    /// Draw a digital n-circle.
    Circle(CircleArgs),
    /// Find the first place a circle pattern appears in an expansion.
    Search(SearchArgs),
    /// Extract digits at a position from a BBP-type series.
    Bbp(BbpArgs),
    /// Chi-square k-gram frequency diagnostics.
    Normality(NormalityArgs),
    /// Expected position of a window and the cost of scanning that far.
    Estimate(EstimateArgs),
}

#[derive(Debug, Args)]
pub struct DigitsArgs {
    #[arg(long)]
    pub constant: String,
    #[arg(long, default_value_t = 10)]
    pub base: u32,
    #[arg(long)]
    pub count: usize,
    /// Neither read nor write the cache.
    #[arg(long)]
    pub no_cache: bool,
}

#[derive(Debug, Args)]
pub struct CircleArgs {
    #[arg(short)]
    pub n: usize,
    #[arg(long, default_value = "naive")]
    pub scheme: String,
    /// Print the row-major bit string instead of the raster.
    #[arg(long)]
    pub flat: bool,
    /// Surround the raster with a frame of background cells.
    #[arg(long)]
    pub frame: bool,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long)]
    pub constant: String,
    #[arg(long, default_value_t = 10)]
    pub base: u32,
    #[arg(short)]
    pub n: usize,
    #[arg(long, default_value = "naive")]
    pub scheme: String,
    /// Digits allowed on the circle, comma separated.
    #[arg(long = "P", default_value = "1")]
    pub circle_digits: String,
    /// Digits allowed in the background, comma separated.
    #[arg(long = "Q", default_value = "0")]
    pub background_digits: String,
    /// Last digit position the match may use.
    #[arg(long)]
    pub limit: u64,
    /// Recompute the digits through the match by a second, independent
    /// route and fail unless both agree.
    #[arg(long)]
    pub verify: bool,
}

#[derive(Debug, Args)]
pub struct BbpArgs {
    #[arg(long, default_value = "pi")]
    pub constant: String,
    #[arg(long)]
    pub position: u64,
    #[arg(long, default_value_t = 8)]
    pub count: usize,
    #[arg(long)]
    pub base: Option<u32>,
}

#[derive(Debug, Args)]
pub struct NormalityArgs {
    #[arg(long)]
    pub constant: String,
    #[arg(long, default_value_t = 10)]
    pub base: u32,
    #[arg(long)]
    pub length: usize,
    #[arg(long, default_value_t = 2)]
    pub kmax: usize,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(long)]
    pub base: u32,
    /// Window length in digits.
    #[arg(long, conflicts_with = "n", required_unless_present = "n")]
    pub window: Option<u64>,
    /// Circle side; the window is n².
    #[arg(short)]
    pub n: Option<u64>,
    /// Nanoseconds spent per digit, e.g. `1` or `1/4`.
    #[arg(long, default_value = "1")]
    pub ns_per_digit: String,
}

/// A failure with its exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Cache(String),
    Precision(String),
    Ambiguity(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Cache(_) => 3,
            CliError::Precision(_) => 4,
            CliError::Ambiguity(_) => 5,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m)
            | CliError::Cache(m)
            | CliError::Precision(m)
            | CliError::Ambiguity(m) => f.write_str(m),
        }
    }
}

impl From<DigitError> for CliError {
    fn from(e: DigitError) -> Self {
        match e {
            DigitError::PrecisionExhausted { .. } | DigitError::PipelineMismatch { .. } => {
                CliError::Precision(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::Digits(d) => d.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<BbpError> for CliError {
    fn from(e: BbpError) -> Self {
        match e {
            BbpError::CarryAmbiguity { .. } => CliError::Ambiguity(e.to_string()),
            BbpError::PrecisionExhausted { .. } => CliError::Precision(e.to_string()),
            BbpError::Digits(d) => d.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<NormalityError> for CliError {
    fn from(e: NormalityError) -> Self {
        match e {
            NormalityError::Digits(d) => d.into(),
            other => CliError::Usage(other.to_string()),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_constant(s: &str) -> Result<ConstantSpec, CliError> {
    ConstantSpec::from_str(s).map_err(CliError::from)
}

fn parse_scheme(s: &str) -> Result<Scheme, CliError> {
    Scheme::from_str(s).map_err(usage)
}

fn parse_digit_set(s: &str) -> Result<BTreeSet<u8>, CliError> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<u8>()
                .map_err(|_| usage(format!("bad digit {t:?}")))
        })
        .collect()
}

fn parse_ratio(s: &str) -> Result<Ratio<u64>, CliError> {
    let bad = || usage(format!("bad rational {s:?}"));
    let r = match s.split_once('/') {
        Some((a, b)) => {
            let (a, b): (u64, u64) = (
                a.trim().parse().map_err(|_| bad())?,
                b.trim().parse().map_err(|_| bad())?,
            );
            if b == 0 {
                return Err(bad());
            }
            Ratio::new(a, b)
        }
        None => Ratio::from_integer(s.trim().parse().map_err(|_| bad())?),
    };
    if *r.numer() == 0 {
        return Err(bad());
    }
    Ok(r)
}

/// Platform cache location when neither flag nor environment sets one.
fn default_cache_dir() -> Option<PathBuf> {
    std::env::var_os("XDG_CACHE_HOME")
        .map(PathBuf::from)
        .or_else(|| std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache")))
        .map(|d| d.join("sagan"))
}

pub fn cache_path(dir: &Path, constant: &ConstantSpec, base: u32) -> PathBuf {
    let id: String = constant
        .id()
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' {
                c
            } else {
                '_'
            }
        })
        .collect();
    dir.join(format!("{id}-b{base}.sgnd"))
}

/// Digits from the cache when it holds enough, otherwise computed and
/// written back as a whole new file.
fn cached_digits(
    dir: &Path,
    constant: &ConstantSpec,
    base: u32,
    count: usize,
) -> Result<DigitBlock, CliError> {
    let path = cache_path(dir, constant, base);
    if path.exists() {
        let cache =
            read_cache(&path).map_err(|e| CliError::Cache(format!("{}: {e}", path.display())))?;
        if cache.constant_id != constant.id() || cache.base != base {
            return Err(CliError::Cache(format!(
                "{}: holds {} in base {}",
                path.display(),
                cache.constant_id,
                cache.base
            )));
        }
        if cache.digits.len() >= count {
            return Ok(DigitBlock::new(base, 1, cache.digits[..count].to_vec())?);
        }
    }
    let block = digits_in_base(constant, base, count)?;
    let cache = DigitCache {
        constant_id: constant.id(),
        base,
        digits: block.digits.clone(),
    };
    write_cache(&path, &cache).map_err(|e| CliError::Cache(format!("{}: {e}", path.display())))?;
    Ok(block)
}

fn cmd_digits(cli: &Cli, args: &DigitsArgs) -> Result<(String, i32), CliError> {
    let constant = parse_constant(&args.constant)?;
    if args.count == 0 {
        return Err(usage("--count must be at least 1"));
    }
    let dir = cli.cache_dir.clone().or_else(default_cache_dir);
    let block = match dir {
        Some(dir) if !args.no_cache => cached_digits(&dir, &constant, args.base, args.count)?,
        _ => digits_in_base(&constant, args.base, args.count)?,
    };
    let out = match cli.format {
        Format::Text => format!("{}\n", render::glyphs(&block.digits)),
        Format::Json => {
            let value = serde_json::json!({
                "constant": constant.id(),
                "base": args.base,
                "digits": render::bracketed(&block.digits),
            });
            format!("{}\n", serde_json::to_string_pretty(&value).expect("json"))
        }
    };
    Ok((out, 0))
}

fn cmd_circle(args: &CircleArgs) -> Result<(String, i32), CliError> {
    if !(1..=MAX_CIRCLE).contains(&args.n) {
        return Err(usage(format!("-n must be in 1..={MAX_CIRCLE}")));
    }
    let pattern =
        rasterize(args.n, parse_scheme(&args.scheme)?).map_err(|e| usage(e.to_string()))?;
    let out = if args.flat {
        format!("{}\n", pattern.flat())
    } else if args.frame {
        pattern.ascii_framed()
    } else {
        pattern.ascii()
    };
    Ok((out, 0))
}

fn cmd_search(cli: &Cli, args: &SearchArgs) -> Result<(String, i32), CliError> {
    if cli.context > MAX_CONTEXT {
        return Err(usage(format!("--context must be at most {MAX_CONTEXT}")));
    }
    let constant = parse_constant(&args.constant)?;
    let scheme = parse_scheme(&args.scheme)?;
    if !(1..=MAX_CIRCLE).contains(&args.n) {
        return Err(usage(format!("-n must be in 1..={MAX_CIRCLE}")));
    }
    let shape = rasterize(args.n, scheme).map_err(|e| usage(e.to_string()))?;
    let p = parse_digit_set(&args.circle_digits)?;
    let q = parse_digit_set(&args.background_digits)?;
    let pattern =
        GeneralizedPattern::new(shape, p.clone(), q.clone()).map_err(|e| usage(e.to_string()))?;
    let matcher = compile(&pattern, args.base)?;
    let mut stream = open_stream(&constant, args.base, STREAM_BLOCK)?;
    let result = find_first_with_context(&mut stream, &matcher, args.limit, cli.context)?;

    if args.verify {
        if let Some(window) = &result.window {
            let through = (window.end() - 1) as usize;
            let checked = cross_checked_digits(&constant, args.base, through)?;
            if checked.slice(window.start, window.len()).as_ref() != Some(window) {
                return Err(CliError::Precision(format!(
                    "verification disagrees on the window at {}",
                    window.start
                )));
            }
        }
    }

    let code = if result.found { 0 } else { 1 };
    let out = match cli.format {
        Format::Text => render::search_text(args.n, &result),
        Format::Json => {
            let record = SearchRecord::new(
                &constant.id(),
                args.base,
                &scheme.to_string(),
                args.n,
                p.into_iter().collect(),
                q.into_iter().collect(),
                &result,
            );
            format!("{}\n", record.to_json())
        }
    };
    Ok((out, code))
}

fn cmd_bbp(cli: &Cli, args: &BbpArgs) -> Result<(String, i32), CliError> {
    let formula = match args.constant.as_str() {
        "pi" => bbp::pi_formula(),
        "log2" => bbp::log2_formula(),
        other => return Err(usage(format!("no BBP formula for {other:?} (pi or log2)"))),
    };
    if let Some(base) = args.base {
        if base != formula.base {
            return Err(usage(format!(
                "the {} formula works in base {}, not {base}",
                args.constant, formula.base
            )));
        }
    }
    let e = bbp::digit_extract_detailed(&formula, args.position, args.count)?;
    let out = match cli.format {
        Format::Text => format!(
            "{}\nbase {} from position {}, guard bits {}\n",
            render::glyphs(&e.block.digits),
            formula.base,
            args.position,
            e.guard_bits
        ),
        Format::Json => {
            let value = serde_json::json!({
                "constant": args.constant,
                "base": formula.base,
                "position": args.position,
                "digits": render::bracketed(&e.block.digits),
                "guard_bits": e.guard_bits,
            });
            format!("{}\n", serde_json::to_string_pretty(&value).expect("json"))
        }
    };
    Ok((out, 0))
}

fn cmd_normality(cli: &Cli, args: &NormalityArgs) -> Result<(String, i32), CliError> {
    let constant = parse_constant(&args.constant)?;
    if args.kmax == 0 || args.length == 0 {
        return Err(usage("--length and --kmax must be positive"));
    }
    let report = normality::normality_scan(&constant, args.base, args.length, args.kmax)?;
    let out = match cli.format {
        Format::Text => render::normality_table(&report),
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&report).expect("json")),
    };
    Ok((out, 0))
}

fn cmd_estimate(cli: &Cli, args: &EstimateArgs) -> Result<(String, i32), CliError> {
    if args.base < 2 {
        return Err(usage("--base must be at least 2"));
    }
    let window = match (args.window, args.n) {
        (Some(w), _) => w,
        (None, Some(n)) => n.checked_mul(n).ok_or_else(|| usage("-n too large"))?,
        (None, None) => return Err(usage("give --window or -n")),
    };
    if window == 0 {
        return Err(usage("window must be at least 1"));
    }
    let ns = parse_ratio(&args.ns_per_digit)?;
    let cost = cost_estimate(expected_position(args.base, window), ns);
    let out = match cli.format {
        Format::Text => format!(
            "{} digits; ~{} universe ages\n",
            cost.expected_digits.format(4),
            cost.universe_age_multiples.format(2)
        ),
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&cost).expect("json")),
    };
    Ok((out, 0))
}

/// Runs a parsed command, returning its standard output and exit code.
pub fn execute(cli: &Cli) -> Result<(String, i32), CliError> {
    match &cli.command {
        Command::Digits(a) => cmd_digits(cli, a),
        Command::Circle(a) => cmd_circle(a),
        Command::Search(a) => cmd_search(cli, a),
        Command::Bbp(a) => cmd_bbp(cli, a),
        Command::Normality(a) => cmd_normality(cli, a),
        Command::Estimate(a) => cmd_estimate(cli, a),
    }
}

/// Parses the process arguments, runs, prints, and returns the exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok((out, code)) => {
            print!("{out}");
            code
        }
        Err(e) => {
            eprintln!("sagan: {e}");
            e.exit_code()
        }
    }
}
