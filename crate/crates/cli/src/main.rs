//! `severi`: command-line front end for severi-core.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;
use severi_core::algebra::rational::parse_rational;
use severi_core::algebra::Rational;
use severi_core::enumerate::TemplateCache;
use severi_core::graphs::{EdgeType, Mode, Tau};
use severi_core::severi::{
    a1_coefficient, a2_from_eta, a2_from_statistics, node_polynomial, q_poly_delta, severi_direct,
    severi_via_exp, QPolynomial,
};
use severi_core::table::{render_csv, render_rows, render_table, template_rows, FORMAT_VERSION};
use severi_core::verify::{run_all, VerifyConfig};
use severi_core::words::{PickRule, TauWord, WordSpace};
use severi_core::Error;

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

#[derive(Parser)]
#[command(name = "severi", version, about = "Exact Severi degrees, node polynomials and template statistics")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Table)]
    format: OutFormat,
    /// Largest cogenus any command may request.
    #[arg(long, global = true, default_value_t = 4)]
    max_delta: u64,
    /// Largest degree any command may request.
    #[arg(long, global = true, default_value_t = 8)]
    max_d: u64,
    /// Directory for cached template lists.
    #[arg(long, global = true, env = "SEVERI_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Table,
    Json,
    Csv,
}

impl From<OutFormat> for severi_core::table::Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Table => Self::Table,
            OutFormat::Json => Self::Json,
            OutFormat::Csv => Self::Csv,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Direct,
    Exp,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    A1,
    A2,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Level {
    Quick,
    Full,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Rule {
    Smallest,
    Largest,
}

#[derive(Subcommand)]
enum Command {
    /// Templates of a given cogenus with their statistics.
    Templates {
        #[arg(long)]
        delta: u64,
    },
    /// The Severi degree N^{d,δ}.
    Severi {
        #[arg(long)]
        d: u64,
        #[arg(long)]
        delta: u64,
        #[arg(long, value_enum, default_value_t = Method::Direct)]
        method: Method,
    },
    /// The quadratic polynomial Q_δ(d).
    Qpoly {
        #[arg(long)]
        delta: u64,
    },
    /// The node polynomial N_δ(d).
    Nodepoly {
        #[arg(long)]
        delta: u64,
    },
    /// Coefficients [t^1]..[t^order] of A₁ or A₂.
    Series {
        #[arg(value_enum)]
        which: Which,
        #[arg(long)]
        order: u64,
    },
    /// (τ, n)-word utilities.
    #[command(subcommand)]
    Words(WordsCommand),
    /// Runs the oracle suites.
    Verify {
        #[arg(long, value_enum, default_value_t = Level::Quick)]
        level: Level,
        /// Shift added to every checked coefficient (negative control).
        #[arg(long, hide = true, allow_hyphen_values = true)]
        perturb: Option<String>,
    },
}

#[derive(Args)]
struct TauArgs {
    /// Edge types separated by spaces: `a-b:r` for the interval edge {a,b},
    /// or `{j1,j2,..}:r` for an arbitrary support.
    #[arg(long)]
    tau: String,
    /// Number of letter positions; defaults to maxv(τ).
    #[arg(long)]
    ell: Option<u32>,
    /// Largest number of letters to enumerate.
    #[arg(long)]
    budget: Option<usize>,
}

#[derive(Subcommand)]
enum WordsCommand {
    /// |S_τ(n, t)|, or its irreducible part.
    Count {
        #[command(flatten)]
        tau: TauArgs,
        /// Comma-separated multiplicities, one per edge type.
        #[arg(long)]
        n: String,
        /// Comma-separated zero counts, one per position.
        #[arg(long)]
        t: String,
        #[arg(long)]
        irreducible: bool,
    },
    /// Splits a word into its irreducible prefix of the given height and the rest.
    Fis {
        #[command(flatten)]
        tau: TauArgs,
        /// Letters `s0 s1 ..`, positions separated by `|`.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        /// Comma-separated non-positive target height.
        #[arg(long, allow_hyphen_values = true)]
        height: String,
        #[arg(long, value_enum, default_value_t = Rule::Smallest)]
        rule: Rule,
    },
}

/// A command failure carrying its exit code.
struct Failure {
    code: u8,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Resource(_) => EXIT_RESOURCE,
            Error::InternalInvariant(_) => EXIT_VERIFY,
            _ => EXIT_USAGE,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, msg: msg.into() }
}

type Outcome = Result<(String, u8), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, code)) => {
            print!("{out}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let g = &cli.global;
    match &cli.command {
        Command::Templates { delta } => {
            prepare(g, *delta)?;
            let rows = template_rows(*delta)?;
            ok(render_rows(&rows, *delta, g.format.into())?)
        }
        Command::Severi { d, delta, method } => cmd_severi(g, *d, *delta, *method),
        Command::Qpoly { delta } => {
            prepare(g, *delta)?;
            ok(render_qpoly("qpoly", *delta, &q_poly_delta(*delta)?, g.format))
        }
        Command::Nodepoly { delta } => {
            prepare(g, *delta)?;
            ok(render_qpoly("nodepoly", *delta, &node_polynomial(*delta)?, g.format))
        }
        Command::Series { which, order } => cmd_series(g, *which, *order),
        Command::Words(w) => cmd_words(g, w),
        Command::Verify { level, perturb } => cmd_verify(g, *level, perturb.as_deref()),
    }
}

fn ok(out: String) -> Outcome {
    Ok((out, 0))
}

/// Enforces the cogenus ceiling and loads cached templates up to `delta`.
fn prepare(g: &Global, delta: u64) -> Result<(), Failure> {
    if delta > g.max_delta {
        return Err(Failure {
            code: EXIT_RESOURCE,
            msg: format!("δ = {delta} exceeds --max-delta {}", g.max_delta),
        });
    }
    if let Some(dir) = &g.cache_dir {
        let cache = TemplateCache::new(dir);
        for k in 1..=delta {
            cache.templates(k, false)?;
        }
    }
    Ok(())
}

fn check_d(g: &Global, d: u64) -> Result<(), Failure> {
    if d == 0 {
        return Err(usage("d must be positive"));
    }
    if d > g.max_d {
        return Err(Failure { code: EXIT_RESOURCE, msg: format!("d = {d} exceeds --max-d {}", g.max_d) });
    }
    Ok(())
}

fn strs(rs: &[Rational]) -> Vec<String> {
    rs.iter().map(Rational::to_string).collect()
}

fn json_out(v: serde_json::Value) -> String {
    serde_json::to_string_pretty(&v).expect("json value serializes") + "\n"
}

fn render(format: OutFormat, headers: &[&str], rows: &[Vec<String>]) -> String {
    match format {
        OutFormat::Csv => render_csv(headers, rows),
        _ => render_table(headers, rows),
    }
}

fn cmd_severi(g: &Global, d: u64, delta: u64, method: Method) -> Outcome {
    check_d(g, d)?;
    prepare(g, delta)?;
    let direct = match method {
        Method::Direct | Method::Both => Some(severi_direct(d, delta)?),
        Method::Exp => None,
    };
    let exp = match method {
        Method::Exp | Method::Both => Some(severi_via_exp(d, delta)?),
        Method::Direct => None,
    };
    let matched = match (&direct, &exp) {
        (Some(a), Some(b)) => Some(a == b),
        _ => None,
    };
    let code = if matched == Some(false) { EXIT_VERIFY } else { 0 };
    let out = match g.format {
        OutFormat::Json => {
            let mut v = json!({ "format_version": FORMAT_VERSION, "d": d, "delta": delta });
            if let Some(x) = &direct {
                v["direct"] = json!(x.to_string());
            }
            if let Some(x) = &exp {
                v["exp"] = json!(x.to_string());
            }
            if let Some(m) = matched {
                v["match"] = json!(m);
            }
            json_out(v)
        }
        OutFormat::Table if matched.is_none() => {
            format!("{}\n", direct.as_ref().or(exp.as_ref()).unwrap())
        }
        OutFormat::Table => format!(
            "{}\n{}\n{}\n",
            direct.unwrap(),
            exp.unwrap(),
            if matched == Some(true) { "match" } else { "mismatch" }
        ),
        OutFormat::Csv => {
            let mut headers = vec!["d", "delta"];
            let mut row = vec![d.to_string(), delta.to_string()];
            if let Some(x) = &direct {
                headers.push("direct");
                row.push(x.to_string());
            }
            if let Some(x) = &exp {
                headers.push("exp");
                row.push(x.to_string());
            }
            if let Some(m) = matched {
                headers.push("match");
                row.push(m.to_string());
            }
            render_csv(&headers, &[row])
        }
    };
    Ok((out, code))
}

fn render_qpoly(kind: &str, delta: u64, q: &QPolynomial, format: OutFormat) -> String {
    match format {
        OutFormat::Json => json_out(json!({
            "format_version": FORMAT_VERSION,
            "kind": kind,
            "delta": delta,
            "poly": q.poly.to_string(),
            "coeffs": strs(&q.coeffs()),
            "threshold": q.threshold,
        })),
        OutFormat::Table => format!("{}\nvalid for d >= {}\n", q.poly, q.threshold),
        OutFormat::Csv => {
            render_csv(&["delta", "poly", "threshold"], &[vec![delta.to_string(), q.poly.to_string(), q.threshold.to_string()]])
        }
    }
}

fn cmd_series(g: &Global, which: Which, order: u64) -> Outcome {
    prepare(g, order)?;
    let ks: Vec<u64> = (1..=order).collect();
    match which {
        Which::A1 => {
            let cs = ks.iter().map(|&k| a1_coefficient(k)).collect::<Result<Vec<_>, _>>()?;
            let out = match g.format {
                OutFormat::Json => json_out(json!({
                    "format_version": FORMAT_VERSION,
                    "series": "a1",
                    "order": order,
                    "coeffs": strs(&cs),
                })),
                f => {
                    let rows: Vec<Vec<String>> =
                        ks.iter().zip(&cs).map(|(k, c)| vec![k.to_string(), c.to_string()]).collect();
                    render(f, &["δ", "[t^δ]A₁"], &rows)
                }
            };
            ok(out)
        }
        Which::A2 => {
            let a = ks.iter().map(|&k| a2_from_statistics(k)).collect::<Result<Vec<_>, _>>()?;
            let b = ks.iter().map(|&k| a2_from_eta(k)).collect::<Result<Vec<_>, _>>()?;
            let agree = a == b;
            let out = match g.format {
                OutFormat::Json => json_out(json!({
                    "format_version": FORMAT_VERSION,
                    "series": "a2",
                    "order": order,
                    "coeffs": strs(&a),
                    "coeffs_from_eta": strs(&b),
                    "agree": agree,
                })),
                f => {
                    let rows: Vec<Vec<String>> = ks
                        .iter()
                        .zip(a.iter().zip(&b))
                        .map(|(k, (x, y))| vec![k.to_string(), x.to_string(), y.to_string(), (x == y).to_string()])
                        .collect();
                    render(f, &["δ", "[t^δ]A₂", "via η₀", "agree"], &rows)
                }
            };
            Ok((out, if agree { 0 } else { EXIT_VERIFY }))
        }
    }
}

fn parse_u64s(text: &str, what: &str) -> Result<Vec<u64>, Failure> {
    text.split(',')
        .map(|s| s.trim().parse::<u64>().map_err(|_| usage(format!("bad {what} entry {s:?}"))))
        .collect()
}

fn parse_i64s(text: &str, what: &str) -> Result<Vec<i64>, Failure> {
    text.split(',')
        .map(|s| s.trim().parse::<i64>().map_err(|_| usage(format!("bad {what} entry {s:?}"))))
        .collect()
}

fn parse_u32(s: &str, what: &str) -> Result<u32, Failure> {
    s.trim().parse().map_err(|_| usage(format!("bad {what} {s:?}")))
}

/// Parses `a-b:r` and `{j,..}:r` items; the result is long-edge when every
/// item is a long interval edge.
fn parse_tau(text: &str) -> Result<Tau, Failure> {
    let mut types = Vec::new();
    let mut general = false;
    for item in text.split_whitespace() {
        let (lhs, r) = item.rsplit_once(':').ok_or_else(|| usage(format!("edge type {item:?} lacks a weight")))?;
        let r = parse_u32(r, "weight")?;
        let t = if let Some(inner) = lhs.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
            general = true;
            let js = inner.split(',').map(|s| parse_u32(s, "support entry")).collect::<Result<Vec<_>, _>>()?;
            EdgeType::from_support(&js, r)?
        } else {
            let (a, b) = lhs.split_once('-').ok_or_else(|| usage(format!("bad edge {lhs:?}")))?;
            EdgeType::interval(parse_u32(a, "vertex")?, parse_u32(b, "vertex")?, r)?
        };
        general |= !t.is_long_edge();
        types.push(t);
    }
    if types.is_empty() {
        return Err(usage("τ needs at least one edge type"));
    }
    Ok(Tau::new(types, if general { Mode::General } else { Mode::LongEdge })?)
}

fn word_space(a: &TauArgs) -> Result<WordSpace, Failure> {
    let tau = parse_tau(&a.tau)?;
    let ell = a.ell.unwrap_or_else(|| tau.maxv());
    let ws = WordSpace::with_ell(tau, ell)?;
    Ok(match a.budget {
        Some(b) => ws.with_budget(b),
        None => ws,
    })
}

fn cmd_words(g: &Global, w: &WordsCommand) -> Outcome {
    match w {
        WordsCommand::Count { tau, n, t, irreducible } => {
            let ws = word_space(tau)?;
            let n = parse_u64s(n, "n")?;
            let t = parse_u64s(t, "t")?;
            let count = if *irreducible { ws.count_irreducible(&n, &t)? } else { ws.count_s(&n, &t)? };
            let out = match g.format {
                OutFormat::Json => json_out(json!({
                    "format_version": FORMAT_VERSION,
                    "n": n,
                    "t": t,
                    "irreducible": irreducible,
                    "count": count,
                })),
                OutFormat::Table => format!("{count}\n"),
                OutFormat::Csv => render_csv(&["count"], &[vec![count.to_string()]]),
            };
            ok(out)
        }
        WordsCommand::Fis { tau, word, height, rule } => {
            let ws = word_space(tau)?;
            let w = TauWord::parse(word)?;
            let h = parse_i64s(height, "height")?;
            let rule = match rule {
                Rule::Smallest => PickRule::Smallest,
                Rule::Largest => PickRule::Largest,
            };
            let (u, v) = ws.fis(&w, &h, rule)?;
            let out = match g.format {
                OutFormat::Json => json_out(json!({
                    "format_version": FORMAT_VERSION,
                    "prefix": u.to_string().trim(),
                    "rest": v.to_string().trim(),
                })),
                f => render(
                    f,
                    &["part", "word"],
                    &[
                        vec!["prefix".into(), u.to_string().trim().to_string()],
                        vec!["rest".into(), v.to_string().trim().to_string()],
                    ],
                ),
            };
            ok(out)
        }
    }
}

fn cmd_verify(g: &Global, level: Level, perturb: Option<&str>) -> Outcome {
    let mut cfg = match level {
        Level::Quick => VerifyConfig::quick(),
        Level::Full => VerifyConfig::full(),
    };
    if let Some(p) = perturb {
        cfg.perturb = Some(parse_rational(p).ok_or_else(|| usage(format!("bad rational {p:?}")))?);
    }
    let reports = run_all(&cfg);
    let passed = reports.iter().all(|r| r.passed());
    let out = match g.format {
        OutFormat::Json => json_out(json!({
            "format_version": FORMAT_VERSION,
            "passed": passed,
            "suites": reports,
        })),
        f => {
            let rows: Vec<Vec<String>> = reports
                .iter()
                .map(|r| {
                    vec![
                        r.name.clone(),
                        r.checks.to_string(),
                        r.failures.len().to_string(),
                        if r.passed() { "PASS" } else { "FAIL" }.to_string(),
                    ]
                })
                .collect();
            let mut s = render(f, &["suite", "checks", "failures", "status"], &rows);
            if f == OutFormat::Table {
                for r in &reports {
                    for msg in r.failures.iter().take(5) {
                        s += &format!("{}: {msg}\n", r.name);
                    }
                }
            }
            s
        }
    };
    Ok((out, if passed { 0 } else { EXIT_VERIFY }))
}
