//! Argument parsing and command dispatch for the `partitions` binary.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use partitions::asymptotics::{relative_error_table, AsymptoticRow, PAPER_TABLE_NS};
use partitions::bessel::{bessel_i_3_2_closed, bessel_i_series, BesselOrder};
use partitions::dedekind::{a_k, dedekind_sum};
use partitions::eta::{eta_samples, f_transform_samples, verify_eta, verify_f_transform};
use partitions::farey::{farey, fraction_string, path_chords};
use partitions::precision::relative_difference;
use partitions::series::working_bits;
use partitions::{
    p_exact, p_series, Error, HighReal, PartitionCache, PrecisionContext, SeriesOptions,
};

pub const CACHE_ENV: &str = "PARTITIONS_CACHE";

const DIGITS: usize = 20;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Plain,
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "partitions",
    version,
    about = "The integer partition function p(n)"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: CliConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct CliConfig {
    /// Working precision in bits; only ever raises the default.
    #[arg(long = "prec", global = true, value_parser = clap::value_parser!(u64).range(64..))]
    pub precision_bits: Option<u64>,
    /// File holding cached `n,p(n)` lines.
    #[arg(long = "cache", global = true, env = CACHE_ENV)]
    pub cache_path: Option<PathBuf>,
    #[arg(long = "format", global = true, value_enum, default_value_t)]
    pub output_format: OutputFormat,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// p(n) by the pentagonal recurrence.
    Exact { n: u64 },
    /// Certified rounding of the convergent series.
    Series {
        n: u64,
        /// Starting number of terms.
        #[arg(long)]
        terms: Option<u64>,
    },
    /// The leading term L(n) and its percentage error.
    Asym { n: u64 },
    /// p(n), L(n) and the relative error over a grid.
    Table {
        #[arg(
            long,
            value_enum,
            conflicts_with = "list",
            required_unless_present = "list"
        )]
        set: Option<TableSet>,
        #[arg(long, value_delimiter = ',')]
        list: Option<Vec<u64>>,
    },
    /// The Farey sequence of order N.
    Farey { order: u64 },
    /// Chord endpoints of the Ford-circle path of order N.
    Ford { order: u64 },
    /// The Dedekind sum s(h, k).
    Dedekind {
        #[arg(allow_negative_numbers = true)]
        h: i64,
        k: u64,
    },
    /// The exponential sum A_k(n).
    Ak { k: u64, n: u64 },
    /// I_{3/2}(x) by the power series and the closed form.
    Bessel {
        #[arg(allow_negative_numbers = true)]
        x: String,
    },
    /// Residuals of a transformation law on sampled points.
    Verify {
        #[arg(value_enum)]
        law: Law,
        #[arg(long, default_value_t = 24)]
        samples: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableSet {
    Paper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Law {
    Eta,
    Ftransform,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Check(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Check(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Check(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(_) => Failure::Usage(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Check(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

fn context(config: &CliConfig, default_bits: usize) -> Result<PrecisionContext, Failure> {
    let bits = config
        .precision_bits
        .map_or(default_bits, |b| (b as usize).max(default_bits));
    Ok(PrecisionContext::new(bits)?)
}

fn positive(name: &str, v: u64) -> CmdResult {
    if v == 0 {
        return Err(Failure::Usage(format!("{name} must be positive")));
    }
    Ok(())
}

fn open_cache(path: Option<&Path>) -> Result<PartitionCache, Failure> {
    match path {
        Some(p) if p.exists() => Ok(PartitionCache::load(p)?),
        _ => Ok(PartitionCache::new()),
    }
}

fn store_cache(cache: &PartitionCache, path: Option<&Path>, before: u64) -> CmdResult {
    if let Some(p) = path {
        if cache.max_n() > before || !p.exists() {
            cache.save(p)?;
        }
    }
    Ok(())
}

fn write_json(out: &mut dyn Write, value: &Value) -> CmdResult {
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(value).expect("serializable")
    )?;
    Ok(())
}

fn sci(v: &HighReal) -> String {
    v.to_sci_string(DIGITS)
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CmdResult {
    let config = &cli.config;
    let format = config.output_format;
    match &cli.command {
        Command::Exact { n } => {
            let path = config.cache_path.as_deref();
            let mut cache = open_cache(path)?;
            let before = cache.max_n();
            let p = p_exact(*n, &mut cache);
            store_cache(&cache, path, before)?;
            match format {
                OutputFormat::Plain => writeln!(out, "{p}")?,
                OutputFormat::Csv => writeln!(out, "n,p_n\n{n},{p}")?,
                OutputFormat::Json => write_json(out, &json!({ "n": n, "p": p.to_string() }))?,
            }
        }
        Command::Series { n, terms } => {
            positive("n", *n)?;
            if *terms == Some(0) {
                return Err(Failure::Usage("--terms must be positive".into()));
            }
            let opts = SeriesOptions {
                initial_terms: *terms,
                prec: config.precision_bits.map(|b| b as usize),
                ..Default::default()
            };
            let report = p_series(*n, opts)?;
            if format == OutputFormat::Csv {
                writeln!(out, "k,a_k,r_k")?;
                for t in &report.terms {
                    writeln!(out, "{},{},{}", t.k, sci(&t.a_k), sci(&t.r_k))?;
                }
            } else {
                let digits = report.rounded.to_string().len() + 10;
                let terms: Vec<Value> = report
                    .terms
                    .iter()
                    .map(|t| json!({ "k": t.k, "a_k": sci(&t.a_k), "r_k": sci(&t.r_k) }))
                    .collect();
                write_json(
                    out,
                    &json!({
                        "n": report.n,
                        "prec": report.prec,
                        "terms_used": report.n_terms_used,
                        "terms": terms,
                        "partial_sum": report.partial_sum.to_sci_string(digits),
                        "rounded": report.rounded.to_string(),
                        "gap": report.gap.to_f64(),
                    }),
                )?;
            }
        }
        Command::Asym { n } => {
            positive("n", *n)?;
            let ctx = context(config, working_bits(*n).max(128))?;
            let path = config.cache_path.as_deref();
            let mut cache = open_cache(path)?;
            let before = cache.max_n();
            let rows = relative_error_table(&[*n], &mut cache, ctx)?;
            store_cache(&cache, path, before)?;
            let row = &rows[0];
            match format {
                OutputFormat::Plain => {
                    writeln!(out, "L({n}) = {}", sci(&row.l_n))?;
                    writeln!(out, "eps({n}) = {:.2}%", row.eps_rounded())?;
                }
                _ => emit_rows(out, format, &rows)?,
            }
        }
        Command::Table { set, list } => {
            let ns: Vec<u64> = match (set, list) {
                (Some(TableSet::Paper), _) => PAPER_TABLE_NS.to_vec(),
                (None, Some(ns)) => ns.clone(),
                (None, None) => unreachable!("clap requires one of --set/--list"),
            };
            if ns.is_empty() {
                return Err(Failure::Usage("--list needs at least one n".into()));
            }
            for &n in &ns {
                positive("n", n)?;
            }
            let ctx = context(config, 128)?;
            let path = config.cache_path.as_deref();
            let mut cache = open_cache(path)?;
            let before = cache.max_n();
            let rows = relative_error_table(&ns, &mut cache, ctx)?;
            store_cache(&cache, path, before)?;
            let format = if format == OutputFormat::Json {
                format
            } else {
                OutputFormat::Csv
            };
            emit_rows(out, format, &rows)?;
        }
        Command::Farey { order } => {
            let seq = farey(*order)?;
            if format == OutputFormat::Json {
                let entries: Vec<Value> = seq
                    .entries
                    .iter()
                    .map(|f| json!({ "h": f.h, "k": f.k }))
                    .collect();
                write_json(out, &json!({ "order": order, "entries": entries }))?;
            } else {
                writeln!(out, "h,k")?;
                for f in &seq.entries {
                    writeln!(out, "{},{}", f.h, f.k)?;
                }
            }
        }
        Command::Ford { order } => {
            positive("N", *order)?;
            let seq = farey(*order)?;
            let chords = path_chords(*order)?;
            // chord j belongs to the fraction at position j + 1
            let rows = seq.entries.iter().skip(1).zip(&chords);
            if format == OutputFormat::Json {
                let items: Vec<Value> = rows
                    .map(|(f, c)| {
                        json!({
                            "h": f.h, "k": f.k, "k1": c.k1, "k2": c.k2,
                            "w1_re": fraction_string(&c.w1.re), "w1_im": fraction_string(&c.w1.im),
                            "w2_re": fraction_string(&c.w2.re), "w2_im": fraction_string(&c.w2.im),
                        })
                    })
                    .collect();
                write_json(out, &json!({ "order": order, "chords": items }))?;
            } else {
                writeln!(out, "h,k,k1,k2,w1_re,w1_im,w2_re,w2_im")?;
                for (f, c) in rows {
                    writeln!(
                        out,
                        "{},{},{},{},{},{},{},{}",
                        f.h,
                        f.k,
                        c.k1,
                        c.k2,
                        fraction_string(&c.w1.re),
                        fraction_string(&c.w1.im),
                        fraction_string(&c.w2.re),
                        fraction_string(&c.w2.im)
                    )?;
                }
            }
        }
        Command::Dedekind { h, k } => {
            let s = fraction_string(&dedekind_sum(*h, *k)?);
            match format {
                OutputFormat::Json => write_json(out, &json!({ "h": h, "k": k, "s": s }))?,
                OutputFormat::Csv => writeln!(out, "h,k,s\n{h},{k},{s}")?,
                OutputFormat::Plain => writeln!(out, "{s}")?,
            }
        }
        Command::Ak { k, n } => {
            positive("k", *k)?;
            positive("n", *n)?;
            let ctx = context(config, 128)?;
            let v = a_k(*k, *n, ctx)?.value;
            match format {
                OutputFormat::Json => write_json(out, &json!({ "k": k, "n": n, "a_k": sci(&v) }))?,
                OutputFormat::Csv => writeln!(out, "k,n,a_k\n{k},{n},{}", sci(&v))?,
                OutputFormat::Plain => writeln!(out, "{}", sci(&v))?,
            }
        }
        Command::Bessel { x } => {
            let ctx = context(config, 128)?;
            let x_val = ctx.parse_decimal(x)?;
            let series = bessel_i_series(BesselOrder::THREE_HALVES, &x_val, ctx)?;
            let closed = if x_val.is_positive() {
                Some(bessel_i_3_2_closed(&x_val, ctx)?)
            } else {
                None
            };
            let diff = closed.as_ref().map(|c| relative_difference(&series, c));
            let show = |v: &Option<HighReal>| v.as_ref().map_or("undefined".to_string(), sci);
            match format {
                OutputFormat::Json => write_json(
                    out,
                    &json!({
                        "x": x,
                        "series": sci(&series),
                        "closed": closed.as_ref().map(sci),
                        "relative_difference": diff.as_ref().map(sci),
                    }),
                )?,
                OutputFormat::Csv => writeln!(
                    out,
                    "x,series,closed,relative_difference\n{x},{},{},{}",
                    sci(&series),
                    show(&closed),
                    show(&diff)
                )?,
                OutputFormat::Plain => {
                    writeln!(out, "series: {}", sci(&series))?;
                    writeln!(out, "closed: {}", show(&closed))?;
                    writeln!(out, "relative difference: {}", show(&diff))?;
                }
            }
        }
        Command::Verify { law, samples } => {
            if *samples == 0 {
                return Err(Failure::Usage("--samples must be positive".into()));
            }
            let ctx = context(config, 128)?;
            let threshold = ctx.one() / ctx.int(2).powi(ctx.bits() / 2);
            let cases: Vec<(String, HighReal)> = match law {
                Law::Eta => eta_samples(*samples)
                    .into_iter()
                    .map(|(m, tau)| {
                        let r = verify_eta(m, &tau.to_complex(ctx), ctx)?;
                        Ok((format!("({},{},{},{})", m.a, m.b, m.c, m.d), r.residual))
                    })
                    .collect::<Result<_, Error>>()?,
                Law::Ftransform => f_transform_samples(*samples)
                    .into_iter()
                    .map(|(h, k, z)| {
                        let r = verify_f_transform(h, k, &z.to_complex(ctx), ctx)?;
                        Ok((format!("h={h} k={k}"), r.residual))
                    })
                    .collect::<Result<_, Error>>()?,
            };
            let failures = cases.iter().filter(|(_, r)| !(*r < threshold)).count();
            match format {
                OutputFormat::Json => {
                    let items: Vec<Value> = cases
                        .iter()
                        .map(|(c, r)| json!({ "case": c, "residual": sci(r) }))
                        .collect();
                    write_json(
                        out,
                        &json!({
                            "prec": ctx.bits(),
                            "threshold": sci(&threshold),
                            "cases": items,
                            "failures": failures,
                        }),
                    )?;
                }
                _ => {
                    writeln!(out, "case,residual")?;
                    for (c, r) in &cases {
                        writeln!(out, "\"{c}\",{}", sci(r))?;
                    }
                }
            }
            if failures > 0 {
                return Err(Failure::Check(format!(
                    "{failures} of {} residuals exceed {}",
                    cases.len(),
                    sci(&threshold)
                )));
            }
        }
    }
    Ok(())
}

fn emit_rows(out: &mut dyn Write, format: OutputFormat, rows: &[AsymptoticRow]) -> CmdResult {
    if format == OutputFormat::Json {
        let items: Vec<Value> = rows
            .iter()
            .map(|r| {
                json!({
                    "n": r.n,
                    "p_n": r.p_n.to_string(),
                    "L_n": sci(&r.l_n),
                    "eps_percent": r.eps_rounded(),
                })
            })
            .collect();
        return write_json(out, &Value::Array(items));
    }
    writeln!(out, "n,p_n,L_n,eps_percent")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{:.2}",
            r.n,
            r.p_n,
            sci(&r.l_n),
            r.eps_rounded()
        )?;
    }
    Ok(())
}
