use clap::{Args, Parser, Subcommand, ValueEnum};
use igusa_core::arith::MultiPoly;
use igusa_core::complex::{build_complex, check_collapse_theorem, check_max_face, min_locus, DEFAULT_COLLAPSE_BUDGET};
use igusa_core::corpus::{builtin_corpus, parse_corpus, verify_corpus};
use igusa_core::count::{
    count_lifting, count_naive, poincare_truncated, CountOptions, CountQuery, Method, DEFAULT_LIFTING_BUDGET,
    DEFAULT_NAIVE_BUDGET,
};
use igusa_core::datum::{datum_builtin, ResolutionDatum};
use igusa_core::denef::{denef_zeta, verify_against_counts, zeta_to_poincare};
use igusa_core::poles::{extract_poles, igusa_bounds_check, lct_from_datum, veys_check, Outcome, PoleReport};
use igusa_core::primes::smallest_primes_excluding;
use igusa_core::resolve::{resolve_state, ResolveOptions, DEFAULT_BLOWUP_BUDGET};
use igusa_core::{Error, Result};
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "igusa", version, about = "Igusa zeta functions, congruence counts and resolution data")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum CountMethod {
    Naive,
    Lifting,
}

#[derive(Clone, Copy, ValueEnum)]
enum Check {
    Maxface,
    Collapse,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct DatumSource {
    /// Resolution datum JSON file.
    #[arg(long)]
    datum: Option<PathBuf>,
    /// Built-in datum, e.g. cusp or monomial(2,3).
    #[arg(long)]
    builtin: Option<String>,
}

#[derive(Args)]
struct Budgets {
    #[arg(long, default_value_t = DEFAULT_NAIVE_BUDGET)]
    naive_budget: u64,
    #[arg(long, default_value_t = DEFAULT_LIFTING_BUDGET)]
    lifting_budget: u64,
}

impl Budgets {
    fn options(&self) -> CountOptions {
        CountOptions { naive_budget: self.naive_budget, lifting_budget: self.lifting_budget, ..Default::default() }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Count solutions of f = 0 mod p^(d+1) reducing to the origin.
    Count {
        #[arg(long)]
        f: String,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        dmax: u32,
        #[arg(long, value_enum, default_value_t = CountMethod::Lifting)]
        method: CountMethod,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Poincare series predicted by a resolution datum.
    Series {
        #[arg(long, conflicts_with_all = ["datum", "builtin"])]
        f: Option<String>,
        #[arg(long)]
        datum: Option<PathBuf>,
        #[arg(long)]
        builtin: Option<String>,
        #[arg(long, default_value_t = 6)]
        dmax: u32,
        /// Also specialize q to this prime.
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Embedded resolution of a plane curve at the origin.
    Resolve {
        #[arg(long)]
        f: String,
        /// Write the datum JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the dual graph in DOT format here.
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_BLOWUP_BUDGET)]
        budget: usize,
    },
    /// Denef's formula for the zeta function.
    Zeta {
        #[command(flatten)]
        src: DatumSource,
        /// Specialize q to this prime.
        #[arg(long)]
        prime: Option<u64>,
        /// Compare with congruence counts up to this level.
        #[arg(long)]
        verify: Option<u32>,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Candidate poles, their orders and the lct.
    Poles {
        #[command(flatten)]
        src: DatumSource,
    },
    /// Check that maximal-order poles sit at -lct.
    Veys {
        #[command(flatten)]
        src: DatumSource,
    },
    /// Dual intersection complex and its weight function.
    Complex {
        #[command(flatten)]
        src: DatumSource,
        #[arg(long)]
        dot: Option<PathBuf>,
        #[arg(long, value_enum)]
        check: Option<Check>,
        #[arg(long, default_value_t = DEFAULT_COLLAPSE_BUDGET)]
        budget: usize,
    },
    /// Run the full pipeline over a corpus of examples.
    VerifyCorpus {
        /// Corpus JSON file; the built-in library by default.
        #[arg(long)]
        corpus: Option<PathBuf>,
        #[command(flatten)]
        budgets: Budgets,
    },
}

struct Report {
    text: String,
    json: Value,
    ok: bool,
}

fn load(datum: &Option<PathBuf>, builtin: &Option<String>) -> Result<ResolutionDatum> {
    match (datum, builtin) {
        (Some(path), None) => ResolutionDatum::from_json(&std::fs::read_to_string(path)?),
        (None, Some(name)) => datum_builtin(name),
        _ => Err(Error::Parse("give one of --datum and --builtin".into())),
    }
}

fn load_src(src: &DatumSource) -> Result<ResolutionDatum> {
    load(&src.datum, &src.builtin)
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn cmd_count(f: &str, p: u64, dmax: u32, method: CountMethod, budgets: &Budgets) -> Result<Report> {
    let poly = MultiPoly::parse(f)?;
    let q = CountQuery::new(poly, p, dmax)?;
    let table = match method {
        CountMethod::Naive => count_naive(&q, &budgets.options())?,
        CountMethod::Lifting => count_lifting(&q, &budgets.options())?,
    };
    let series = poincare_truncated(&table);
    let method = match table.method {
        Method::Naive => "naive",
        Method::Lifting => "lifting",
    };
    let text = format!("f = {}, p = {p}, method = {method}\n{table}P(T) = {series} + O(T^{})\n", q.f(), dmax + 1);
    let json = json!({ "f": q.f().to_string(), "p": p, "dmax": dmax, "table": to_json(&table) });
    Ok(Report { text, json, ok: true })
}

fn cmd_series(d: &ResolutionDatum, dmax: u32, prime: Option<u64>) -> Result<Report> {
    let z = denef_zeta(d)?;
    let p = zeta_to_poincare(&z, d.n)?;
    let coeffs = p.series(dmax as usize);
    let mut text = format!("P(T) = {}\n", p.render("T"));
    let mut numeric = Vec::new();
    if let Some(pr) = prime {
        if d.bad_primes.contains(&pr) {
            return Err(Error::BadPrime(pr));
        }
        let sp = p.eval_at_prime(pr)?;
        numeric = sp.series(dmax as usize).iter().map(ToString::to_string).collect();
    }
    let _ = writeln!(text, "{:>4}  coefficient{}", "d", if prime.is_some() { "  value" } else { "" });
    for (k, c) in coeffs.iter().enumerate() {
        let _ = write!(text, "{k:>4}  {c}");
        if let Some(v) = numeric.get(k) {
            let _ = write!(text, "  {v}");
        }
        text.push('\n');
    }
    let json = json!({
        "poincare": p.render("T"),
        "coefficients": coeffs.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "prime": prime,
        "values": if prime.is_some() { json!(numeric) } else { Value::Null },
    });
    Ok(Report { text, json, ok: true })
}

fn cmd_resolve(f: &str, out: &Option<PathBuf>, dot: &Option<PathBuf>, budget: usize) -> Result<Report> {
    let poly = MultiPoly::parse(f)?;
    let state = resolve_state(&poly, &ResolveOptions { budget, ..Default::default() })?;
    let d = state.to_datum()?;
    if let Some(path) = out {
        std::fs::write(path, d.to_json() + "\n")?;
    }
    if let Some(path) = dot {
        std::fs::write(path, build_complex(&d)?.to_dot())?;
    }
    let mut text = format!("f = {}\n{} blow-ups\n", state.f, state.blowups());
    let _ = writeln!(text, "{:<6} {:>4} {:>4}  {:<11} ν/N", "id", "N", "ν", "kind");
    for c in &d.components {
        let kind = if c.exceptional { "exceptional" } else { "strict" };
        let _ = writeln!(text, "{:<6} {:>4} {:>4}  {kind:<11} {}", c.id, c.n, c.nu, c.weight());
    }
    for s in &d.strata {
        let _ = writeln!(text, "stratum {{{}}}: {}", s.j.join(","), s.count);
    }
    let bad: Vec<String> = d.bad_primes.iter().map(u64::to_string).collect();
    let _ = writeln!(text, "bad primes: {}", bad.join(" "));
    let json: Value = serde_json::from_str(&d.to_json())?;
    Ok(Report { text, json, ok: true })
}

fn cmd_zeta(d: &ResolutionDatum, prime: Option<u64>, verify: Option<u32>, budgets: &Budgets) -> Result<Report> {
    let z = denef_zeta(d)?;
    let mut text = format!("Z(t) = {z}\n");
    let mut json = json!({ "zeta": z.to_string() });
    if let Some(p) = prime {
        if d.bad_primes.contains(&p) {
            return Err(Error::BadPrime(p));
        }
        let s = z.zeta.eval_at_prime(p)?;
        let _ = writeln!(text, "at q = {p}: {s}");
        json["specialized"] = json!({ "prime": p, "zeta": s.to_string() });
    }
    let mut ok = true;
    if let Some(dmax) = verify {
        let p = match prime {
            Some(p) => p,
            None => smallest_primes_excluding(1, &d.bad_primes)[0],
        };
        let v = verify_against_counts(d, p, dmax, &budgets.options())?;
        ok = v.success();
        text.push_str(&v.to_string());
        json["verdict"] = to_json(&v);
    }
    Ok(Report { text, json, ok })
}

fn pole_report(d: &ResolutionDatum) -> Result<PoleReport> {
    let z = denef_zeta(d)?;
    Ok(extract_poles(&z, d.n).with_lct(lct_from_datum(d)?))
}

fn cmd_poles(d: &ResolutionDatum) -> Result<Report> {
    let r = pole_report(d)?;
    let b = igusa_bounds_check(&r, d)?;
    let mut text = r.to_string();
    let _ = writeln!(text, "bounds: {}", b.outcome);
    for p in &b.problems {
        let _ = writeln!(text, "  {p}");
    }
    let json = json!({ "poles": to_json(&r), "bounds": to_json(&b) });
    Ok(Report { text, json, ok: b.outcome != Outcome::Fail })
}

fn cmd_veys(d: &ResolutionDatum) -> Result<Report> {
    let r = pole_report(d)?;
    let o = veys_check(&r, d.n)?;
    let text = format!("{r}veys: {o}\n");
    let json = json!({ "poles": to_json(&r), "veys": to_json(&o) });
    Ok(Report { text, json, ok: o != Outcome::Fail })
}

fn cmd_complex(d: &ResolutionDatum, dot: &Option<PathBuf>, check: Option<Check>, budget: usize) -> Result<Report> {
    let c = build_complex(d)?;
    if let Some(path) = dot {
        std::fs::write(path, c.to_dot())?;
    }
    let min = min_locus(&c);
    let mut text = String::new();
    for v in &c.vertices {
        let _ = writeln!(text, "{} (ν/N = {}){}", v.id, v.weight, if v.exceptional { "" } else { " strict" });
    }
    for k in 0..=c.dim() {
        let _ = writeln!(text, "{}-faces: {}", k, c.count_faces(k));
    }
    let names: Vec<String> = min.faces.iter().map(|f| c.face_name(*f)).collect();
    let _ = writeln!(text, "min locus: {}", names.join(" "));
    let mut json = json!({ "complex": to_json(&c), "min_locus": names });
    let mut ok = true;
    match check {
        Some(Check::Maxface) => {
            let r = check_max_face(&c, &lct_from_datum(d)?);
            let _ = writeln!(text, "max face: {}", r.outcome);
            for o in &r.offending {
                let _ = writeln!(text, "  {o}");
            }
            ok = r.outcome != Outcome::Fail;
            json["max_face"] = to_json(&r);
        }
        Some(Check::Collapse) => {
            let r = check_collapse_theorem(&c, d, budget)?;
            let _ = writeln!(text, "collapse: {}", r.outcome);
            for t in &r.thresholds {
                let steps = t.collapse_steps.map_or("no collapse found".to_string(), |s| format!("{s} steps"));
                let _ = writeln!(
                    text,
                    "  w = {}: {steps}, euler {}, b0 {}, b1 {}",
                    t.w, t.invariants.euler, t.invariants.b0, t.invariants.b1
                );
            }
            ok = r.outcome != Outcome::Fail;
            json["collapse"] = to_json(&r);
        }
        None => {}
    }
    Ok(Report { text, json, ok })
}

fn cmd_verify_corpus(path: &Option<PathBuf>, budgets: &Budgets) -> Result<Report> {
    let entries = match path {
        Some(p) => parse_corpus(&std::fs::read_to_string(p)?)?,
        None => builtin_corpus(),
    };
    let r = verify_corpus(&entries, &budgets.options());
    Ok(Report { text: r.to_string(), json: to_json(&r), ok: r.all_ok })
}

fn run(cli: &Cli) -> Result<Report> {
    match &cli.cmd {
        Cmd::Count { f, p, dmax, method, budgets } => cmd_count(f, *p, *dmax, *method, budgets),
        Cmd::Series { f, datum, builtin, dmax, prime } => {
            let d = match f {
                Some(f) => resolve_state(&MultiPoly::parse(f)?, &ResolveOptions::default())?.to_datum()?,
                None => load(datum, builtin)?,
            };
            cmd_series(&d, *dmax, *prime)
        }
        Cmd::Resolve { f, out, dot, budget } => cmd_resolve(f, out, dot, *budget),
        Cmd::Zeta { src, prime, verify, budgets } => cmd_zeta(&load_src(src)?, *prime, *verify, budgets),
        Cmd::Poles { src } => cmd_poles(&load_src(src)?),
        Cmd::Veys { src } => cmd_veys(&load_src(src)?),
        Cmd::Complex { src, dot, check, budget } => cmd_complex(&load_src(src)?, dot, *check, *budget),
        Cmd::VerifyCorpus { corpus, budgets } => cmd_verify_corpus(corpus, budgets),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(r) => {
            match cli.format {
                Format::Text => print!("{}", r.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&r.json).expect("valid JSON")),
            }
            if r.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            match cli.format {
                Format::Text => eprintln!("error: {e}"),
                Format::Json => println!("{}", json!({ "error": e.to_string() })),
            }
            ExitCode::from(2)
        }
    }
}
