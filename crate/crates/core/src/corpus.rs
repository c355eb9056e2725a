//! The example library and the batch pipeline run over it.

use crate::arith::{BigRat, MultiPoly};
use crate::complex::{build_complex, check_collapse_theorem, check_max_face, DEFAULT_COLLAPSE_BUDGET};
use crate::count::CountOptions;
use crate::datum::{datum_builtin, ResolutionDatum};
use crate::denef::{denef_zeta, poincare_to_zeta, verify_against_counts, zeta_to_poincare};
use crate::error::{Error, Result};
use crate::poles::{extract_poles, igusa_bounds_check, lct_from_datum, veys_check, Outcome, PoleReport};
use crate::primes::smallest_primes_excluding;
use crate::resolve::resolve_plane_curve;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;

/// The built-in corpus shipped with the library.
pub const BUILTIN_CORPUS: &str = include_str!("../corpus/corpus.json");

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    /// A published value.
    Literature,
    /// Computed by an independent method, named in `oracle`.
    Computed,
    /// Immediate from the definitions.
    Immediate,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tagged<T> {
    pub value: T,
    pub source: Source,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NegativeControl {
    /// Stages that must report FAIL.
    pub expect_fail: Vec<String>,
    pub source: Source,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub name: String,
    /// Plane curve to resolve.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    /// Built-in datum used instead of resolving.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    pub dmax: u32,
    /// Primes to count at; defaults to the three smallest good primes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub primes: Option<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lct: Option<Tagged<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poles: Option<Tagged<Vec<(String, u32)>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub negative_control: Option<NegativeControl>,
}

pub const STAGES: [&str; 10] =
    ["datum", "zeta", "transform", "counts", "poles", "lct", "veys", "bounds", "max_face", "collapse"];

impl CorpusEntry {
    pub fn datum(&self) -> Result<ResolutionDatum> {
        match (&self.f, &self.builtin) {
            (Some(f), None) => resolve_plane_curve(&MultiPoly::parse(f)?),
            (None, Some(b)) => datum_builtin(b),
            _ => Err(Error::Parse(format!("entry {}: give exactly one of f and builtin", self.name))),
        }
    }

    pub fn is_negative_control(&self) -> bool {
        self.negative_control.is_some()
    }

    fn check(&self) -> Result<()> {
        self.datum_source()?;
        if let Some(l) = &self.lct {
            parse_rat(&l.value)?;
        }
        if let Some(p) = &self.poles {
            for (r, _) in &p.value {
                parse_rat(r)?;
            }
        }
        if let Some(nc) = &self.negative_control {
            if nc.expect_fail.is_empty() {
                return Err(Error::Parse(format!("entry {}: negative control expects no failure", self.name)));
            }
            if let Some(s) = nc.expect_fail.iter().find(|s| !STAGES.contains(&s.as_str())) {
                return Err(Error::Parse(format!("entry {}: unknown stage {s:?}", self.name)));
            }
        }
        Ok(())
    }

    fn datum_source(&self) -> Result<()> {
        match (&self.f, &self.builtin) {
            (Some(_), None) | (None, Some(_)) => Ok(()),
            _ => Err(Error::Parse(format!("entry {}: give exactly one of f and builtin", self.name))),
        }
    }
}

fn parse_rat(s: &str) -> Result<BigRat> {
    s.trim().parse::<BigRat>().map_err(|_| Error::Parse(format!("not a rational number: {s:?}")))
}

pub fn parse_corpus(json: &str) -> Result<Vec<CorpusEntry>> {
    let entries: Vec<CorpusEntry> = serde_json::from_str(json)?;
    let mut seen = std::collections::BTreeSet::new();
    for e in &entries {
        e.check()?;
        if !seen.insert(e.name.as_str()) {
            return Err(Error::Parse(format!("duplicate corpus entry {}", e.name)));
        }
    }
    Ok(entries)
}

pub fn builtin_corpus() -> Vec<CorpusEntry> {
    parse_corpus(BUILTIN_CORPUS).expect("the shipped corpus parses")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Vacuous,
    Inconclusive,
    Skip,
    Fail,
    Error,
}

impl Status {
    fn is_failure(self) -> bool {
        matches!(self, Status::Fail | Status::Error)
    }
}

impl From<Outcome> for Status {
    fn from(o: Outcome) -> Self {
        match o {
            Outcome::Pass => Status::Pass,
            Outcome::Vacuous => Status::Vacuous,
            Outcome::Inconclusive => Status::Inconclusive,
            Outcome::Fail => Status::Fail,
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Vacuous => "VACUOUS",
            Status::Inconclusive => "INCONCLUSIVE",
            Status::Skip => "SKIP",
            Status::Fail => "FAIL",
            Status::Error => "ERROR",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct StageResult {
    pub status: Status,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

impl StageResult {
    fn new(status: Status, detail: impl Into<String>) -> Self {
        StageResult { status, detail: detail.into() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryReport {
    pub name: String,
    pub negative_control: bool,
    pub stages: BTreeMap<String, StageResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub zeta: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub poles: Option<PoleReport>,
    /// Whether the entry behaved as expected.
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusReport {
    pub entries: Vec<EntryReport>,
    pub all_ok: bool,
}

/// Runs the whole pipeline on one entry, recording every stage.
pub fn run_entry(e: &CorpusEntry, opts: &CountOptions) -> EntryReport {
    let mut stages: BTreeMap<String, StageResult> = BTreeMap::new();
    let mut put = |k: &str, r: StageResult| {
        stages.insert(k.to_string(), r);
    };
    let mut zeta_text = None;
    let mut pole_report = None;
    let datum = match e.datum() {
        Ok(d) => {
            put("datum", StageResult::new(Status::Pass, format!("{} components", d.components.len())));
            Some(d)
        }
        Err(err) => {
            put("datum", StageResult::new(Status::Error, err.to_string()));
            None
        }
    };
    if let Some(d) = &datum {
        match denef_zeta(d) {
            Err(err) => put("zeta", StageResult::new(Status::Error, err.to_string())),
            Ok(z) => {
                put("zeta", StageResult::new(Status::Pass, ""));
                zeta_text = Some(z.to_string());
                put("transform", transform_stage(&z, d.n));
                put("counts", counts_stage(e, d, opts));
                let lct = lct_from_datum(d);
                match lct {
                    Err(err) => put("lct", StageResult::new(Status::Error, err.to_string())),
                    Ok(lct) => {
                        let rep = extract_poles(&z, d.n).with_lct(lct.clone());
                        put("lct", compare_lct(e, &lct));
                        put("poles", compare_poles(e, &rep));
                        put("veys", outcome_stage(veys_check(&rep, d.n)));
                        put(
                            "bounds",
                            match igusa_bounds_check(&rep, d) {
                                Ok(b) => StageResult::new(b.outcome.into(), b.problems.join("; ")),
                                Err(err) => StageResult::new(Status::Error, err.to_string()),
                            },
                        );
                        complex_stages(d, &lct, &mut put);
                        pole_report = Some(rep);
                    }
                }
            }
        }
    }
    for s in STAGES {
        stages.entry(s.to_string()).or_insert_with(|| StageResult::new(Status::Skip, "earlier stage failed"));
    }
    let ok = match &e.negative_control {
        None => stages.values().all(|s| !s.status.is_failure()),
        Some(nc) => nc.expect_fail.iter().all(|s| stages[s].status == Status::Fail),
    };
    EntryReport {
        name: e.name.clone(),
        negative_control: e.is_negative_control(),
        stages,
        zeta: zeta_text,
        poles: pole_report,
        ok,
    }
}

fn outcome_stage(o: Result<Outcome>) -> StageResult {
    match o {
        Ok(o) => StageResult::new(o.into(), ""),
        Err(err) => StageResult::new(Status::Error, err.to_string()),
    }
}

fn transform_stage(z: &crate::denef::ZetaResult, n: usize) -> StageResult {
    let run = || -> Result<bool> {
        let p = zeta_to_poincare(z, n)?;
        let back = poincare_to_zeta(&p, n)?;
        let again = zeta_to_poincare(&back, n)?;
        Ok(back.zeta == z.zeta && again == p)
    };
    match run() {
        Ok(true) => StageResult::new(Status::Pass, ""),
        Ok(false) => StageResult::new(Status::Fail, "round trip changed the function"),
        Err(err) => StageResult::new(Status::Error, err.to_string()),
    }
}

fn counts_stage(e: &CorpusEntry, d: &ResolutionDatum, opts: &CountOptions) -> StageResult {
    if d.f.is_none() {
        return StageResult::new(Status::Skip, "datum carries no polynomial");
    }
    let primes = e.primes.clone().unwrap_or_else(|| smallest_primes_excluding(3, &d.bad_primes));
    let mut agreed = Vec::new();
    for p in primes {
        match verify_against_counts(d, p, e.dmax, opts) {
            Ok(v) if v.success() => agreed.push(p.to_string()),
            Ok(v) => return StageResult::new(Status::Fail, v.to_string().trim_end().to_string()),
            Err(err) => return StageResult::new(Status::Error, err.to_string()),
        }
    }
    StageResult::new(Status::Pass, format!("p = {} up to d = {}", agreed.join(", "), e.dmax))
}

fn compare_lct(e: &CorpusEntry, lct: &BigRat) -> StageResult {
    let Some(exp) = &e.lct else {
        return StageResult::new(Status::Pass, format!("lct = {lct}"));
    };
    match parse_rat(&exp.value) {
        Ok(x) if x == *lct => StageResult::new(Status::Pass, format!("lct = {lct}")),
        Ok(x) => StageResult::new(Status::Fail, format!("lct = {lct}, expected {x}")),
        Err(err) => StageResult::new(Status::Error, err.to_string()),
    }
}

fn compare_poles(e: &CorpusEntry, rep: &PoleReport) -> StageResult {
    let mut got: Vec<(BigRat, u32)> = rep.groups.iter().map(|g| (g.real_part.clone(), g.order)).collect();
    got.sort();
    let show = |v: &[(BigRat, u32)]| v.iter().map(|(r, k)| format!("{r}^{k}")).collect::<Vec<_>>().join(" ");
    let Some(exp) = &e.poles else {
        return StageResult::new(Status::Pass, show(&got));
    };
    let mut want = Vec::new();
    for (r, k) in &exp.value {
        match parse_rat(r) {
            Ok(r) => want.push((r, *k)),
            Err(err) => return StageResult::new(Status::Error, err.to_string()),
        }
    }
    want.sort();
    if want == got {
        StageResult::new(Status::Pass, show(&got))
    } else {
        StageResult::new(Status::Fail, format!("{}, expected {}", show(&got), show(&want)))
    }
}

fn complex_stages(d: &ResolutionDatum, lct: &BigRat, put: &mut impl FnMut(&str, StageResult)) {
    let c = match build_complex(d) {
        Ok(c) => c,
        Err(err) => {
            put("max_face", StageResult::new(Status::Error, err.to_string()));
            put("collapse", StageResult::new(Status::Error, err.to_string()));
            return;
        }
    };
    let m = check_max_face(&c, lct);
    put("max_face", StageResult::new(m.outcome.into(), m.offending.join("; ")));
    if !d.is_reduced() {
        put("collapse", StageResult::new(Status::Skip, "div(f) is not reduced"));
        return;
    }
    put(
        "collapse",
        match check_collapse_theorem(&c, d, DEFAULT_COLLAPSE_BUDGET) {
            Ok(r) => {
                let bad: Vec<String> =
                    r.thresholds.iter().filter(|t| t.collapse_steps.is_none()).map(|t| format!("w = {}", t.w)).collect();
                StageResult::new(r.outcome.into(), bad.join("; "))
            }
            Err(err) => StageResult::new(Status::Error, err.to_string()),
        },
    );
}

/// Runs every entry in parallel; the report is sorted by entry name.
pub fn verify_corpus(entries: &[CorpusEntry], opts: &CountOptions) -> CorpusReport {
    let mut reports: Vec<EntryReport> = entries.par_iter().map(|e| run_entry(e, opts)).collect();
    reports.sort_by(|a, b| a.name.cmp(&b.name));
    let all_ok = reports.iter().all(|r| r.ok);
    CorpusReport { entries: reports, all_ok }
}

impl fmt::Display for CorpusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.entries.iter().map(|e| e.name.len()).max().unwrap_or(5).max(5);
        write!(f, "{:<width$}", "entry")?;
        for s in STAGES {
            write!(f, "  {s:<12}")?;
        }
        writeln!(f, "  result")?;
        for e in &self.entries {
            write!(f, "{:<width$}", e.name)?;
            for s in STAGES {
                write!(f, "  {:<12}", e.stages[s].status.to_string())?;
            }
            let verdict = match (e.ok, e.negative_control) {
                (true, false) => "ok",
                (true, true) => "ok (failed as expected)",
                (false, false) => "FAILED",
                (false, true) => "FAILED (control not caught)",
            };
            writeln!(f, "  {verdict}")?;
        }
        writeln!(f)?;
        for e in &self.entries {
            for (s, r) in &e.stages {
                if r.status.is_failure() && !r.detail.is_empty() {
                    writeln!(f, "{}: {s}: {}", e.name, r.detail)?;
                }
            }
        }
        writeln!(f, "{}", if self.all_ok { "all entries ok" } else { "some entries failed" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn corpus_parses_with_tags() {
        let c = builtin_corpus();
        assert!(c.len() >= 13);
        for e in &c {
            assert!(e.is_negative_control() || (e.lct.is_some() && e.poles.is_some()), "{}", e.name);
            for t in e.lct.iter().map(|l| (l.source, &l.oracle)).chain(e.poles.iter().map(|p| (p.source, &p.oracle))) {
                assert!(t.0 != Source::Computed || t.1.is_some(), "{} lacks an oracle note", e.name);
            }
        }
    }

    #[test]
    fn malformed_corpora_are_rejected() {
        for bad in [
            r#"[{"name": "a", "dmax": 2}]"#,
            r#"[{"name": "a", "f": "x", "builtin": "cusp", "dmax": 2}]"#,
            r#"[{"name": "a", "f": "x", "dmax": 2, "lct": {"value": "1"}}]"#,
            r#"[{"name": "a", "f": "x", "dmax": 2, "lct": {"value": "one", "source": "immediate"}}]"#,
            r#"[{"name": "a", "f": "x", "dmax": 2, "negative_control": {"expect_fail": ["bogus"], "source": "immediate"}}]"#,
            r#"[{"name": "a", "f": "x", "dmax": 2}, {"name": "a", "f": "y", "dmax": 2}]"#,
        ] {
            assert!(parse_corpus(bad).is_err(), "{bad}");
        }
    }

    // Quasi-homogeneous x^a - y^b: lct min(1, 1/a + 1/b), poles at -lct and -1.
    fn quasi_homogeneous(a: i64, b: i64) -> Vec<(BigRat, u32)> {
        let w = rat(1, a) + rat(1, b);
        let mut v = vec![(rat(-1, 1), 1), (-w, 1)];
        v.sort();
        v
    }

    #[test]
    fn quasi_homogeneous_expectations_match_oracle() {
        let c = builtin_corpus();
        for (name, a, b) in [("cusp", 2, 3), ("tacnode", 2, 4), ("ramphoid-cusp", 2, 5), ("e6", 3, 4)] {
            let e = c.iter().find(|e| e.name == name).unwrap();
            let mut want: Vec<(BigRat, u32)> =
                e.poles.as_ref().unwrap().value.iter().map(|(r, k)| (parse_rat(r).unwrap(), *k)).collect();
            want.sort();
            assert_eq!(want, quasi_homogeneous(a, b), "{name}");
            assert_eq!(parse_rat(&e.lct.as_ref().unwrap().value).unwrap(), rat(1, a) + rat(1, b));
        }
    }

    #[test]
    fn single_entries() {
        let c = builtin_corpus();
        let get = |n: &str| c.iter().find(|e| e.name == n).unwrap();
        let opts = CountOptions::default();
        let cusp = run_entry(get("cusp"), &opts);
        assert!(cusp.ok, "{:?}", cusp.stages);
        assert_eq!(cusp.stages["veys"].status, Status::Vacuous);
        let axes = run_entry(get("coordinate-axes"), &opts);
        assert_eq!(axes.stages["veys"].status, Status::Pass);
        let corrupted = run_entry(get("control-cusp-corrupted"), &opts);
        assert!(corrupted.ok);
        assert_eq!(corrupted.stages["veys"].status, Status::Fail);
    }

    #[test]
    fn full_corpus_behaves_and_is_deterministic() {
        let c = builtin_corpus();
        let opts = CountOptions::default();
        let r = verify_corpus(&c, &opts);
        assert!(r.all_ok, "{r}");
        let again = verify_corpus(&c, &opts);
        assert_eq!(serde_json::to_string(&r).unwrap(), serde_json::to_string(&again).unwrap());
        assert_eq!(r.to_string(), again.to_string());
        let names: Vec<&str> = r.entries.iter().map(|e| e.name.as_str()).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
    }
}
