//! Combinatorial record of a log-resolution above the origin.
//!
//! A datum lists the prime divisors `E_i` with their multiplicities `N_i` and
//! log-discrepancies `nu_i`, and the nonempty intersections `E_J` together with
//! the number of `F_q`-points of `E_J^o` lying over the origin, written as a
//! polynomial in the symbolic prime `q`.

use crate::arith::{int, BigRat, MultiPoly, QPoly};
use crate::error::{Error, Result};
use crate::primes::{is_prime, smallest_primes_excluding};
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Component {
    pub id: String,
    #[serde(rename = "N")]
    pub n: u32,
    pub nu: u32,
    pub exceptional: bool,
    pub meets_fiber: bool,
}

impl Component {
    pub fn new(id: &str, n: u32, nu: u32, exceptional: bool) -> Self {
        Component { id: id.to_string(), n, nu, exceptional, meets_fiber: true }
    }

    /// `nu / N`, the value of the weight function at this vertex.
    pub fn weight(&self) -> BigRat {
        BigRat::new(self.nu.into(), self.n.into())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Stratum {
    #[serde(rename = "J")]
    pub j: Vec<String>,
    pub connected_components: u32,
    pub count: QPoly,
}

impl Stratum {
    pub fn new(j: &[&str], connected_components: u32, count: QPoly) -> Self {
        Stratum { j: j.iter().map(|s| s.to_string()).collect(), connected_components, count }
    }

    pub fn key(&self) -> BTreeSet<&str> {
        self.j.iter().map(String::as_str).collect()
    }
}

/// The JSON document consumed and produced by every tool.
///
/// `f` is optional; when present it is the polynomial the datum resolves and
/// enables comparison against brute-force counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolutionDatum {
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    pub components: Vec<Component>,
    pub strata: Vec<Stratum>,
    pub bad_primes: BTreeSet<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Issue {
    pub subject: String,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub errors: Vec<Issue>,
    pub warnings: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.errors.is_empty()
    }

    fn error(&mut self, subject: impl Into<String>, message: impl Into<String>) {
        self.errors.push(Issue { subject: subject.into(), message: message.into() });
    }

    fn warn(&mut self, subject: impl Into<String>, message: impl Into<String>) {
        self.warnings.push(Issue { subject: subject.into(), message: message.into() });
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            writeln!(f, "valid")?;
        } else {
            writeln!(f, "invalid")?;
        }
        for i in &self.errors {
            writeln!(f, "  error   [{}] {}", i.subject, i.message)?;
        }
        for i in &self.warnings {
            writeln!(f, "  warning [{}] {}", i.subject, i.message)?;
        }
        Ok(())
    }
}

fn set_name(j: &BTreeSet<&str>) -> String {
    let v: Vec<&str> = j.iter().copied().collect();
    format!("{{{}}}", v.join(","))
}

impl ResolutionDatum {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("datum serializes")
    }

    pub fn component(&self, id: &str) -> Option<&Component> {
        self.components.iter().find(|c| c.id == id)
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.components.iter().position(|c| c.id == id)
    }

    pub fn stratum(&self, j: &[&str]) -> Option<&Stratum> {
        let key: BTreeSet<&str> = j.iter().copied().collect();
        self.strata.iter().find(|s| s.key() == key)
    }

    /// `div(f)` is reduced when every strict transform component has `N = 1`.
    pub fn is_reduced(&self) -> bool {
        self.components.iter().filter(|c| !c.exceptional).all(|c| c.n == 1)
    }

    pub fn polynomial(&self) -> Result<Option<MultiPoly>> {
        match &self.f {
            None => Ok(None),
            Some(s) => {
                let p = MultiPoly::parse(s)?;
                if p.nvars() > self.n {
                    return Err(Error::InvalidDatum(format!(
                        "f has {} variables but n = {}",
                        p.nvars(),
                        self.n
                    )));
                }
                Ok(Some(p.with_nvars(self.n)))
            }
        }
    }

    /// Checks every structural invariant; problems are collected, not thrown.
    pub fn validate(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        if self.n == 0 {
            r.error("n", "ambient dimension must be at least 1");
        }
        if self.components.is_empty() {
            r.error("components", "no components");
        }
        let mut ids = BTreeSet::new();
        for c in &self.components {
            if c.id.is_empty() {
                r.error("components", "empty id");
            }
            if !ids.insert(c.id.as_str()) {
                r.error(&c.id, "duplicate component id");
            }
            if c.n == 0 {
                r.error(&c.id, "N must be at least 1");
            }
            if c.nu == 0 {
                r.error(&c.id, "nu must be at least 1");
            }
        }
        if !self.components.iter().any(|c| !c.exceptional) {
            r.warn("components", "no strict transform component");
        }
        if !self.components.iter().any(|c| c.meets_fiber) {
            r.warn("components", "no component meets the fiber over the origin");
        }
        for p in &self.bad_primes {
            if !is_prime(*p) {
                r.error("bad_primes", format!("{p} is not prime"));
            }
        }

        let primes = smallest_primes_excluding(5, &self.bad_primes);
        let mut seen: BTreeSet<BTreeSet<&str>> = BTreeSet::new();
        for s in &self.strata {
            let key = s.key();
            let name = set_name(&key);
            if key.is_empty() {
                r.error("strata", "empty index set J");
                continue;
            }
            if key.len() != s.j.len() {
                r.error(&name, "repeated id in J");
            }
            if !seen.insert(key.clone()) {
                r.error(&name, "duplicate stratum");
            }
            for id in &key {
                if !ids.contains(id) {
                    r.error(&name, format!("unknown component {id}"));
                }
            }
            if key.len() > self.n {
                r.error(&name, format!("{} components cannot meet in dimension {}", key.len(), self.n));
            }
            if s.connected_components == 0 {
                r.error(&name, "connected_components must be at least 1");
            }
            for p in &primes {
                let v = s.count.eval_int(*p);
                if !v.is_integer() || v.is_negative() {
                    r.error(&name, format!("count {} at q = {p} is {v}, not a non-negative integer", s.count));
                    break;
                }
            }
            let meets = |id: &&str| self.component(id).map(|c| c.meets_fiber).unwrap_or(true);
            if !s.count.is_zero() && !key.iter().all(meets) {
                r.error(&name, "nonzero fiber count on a component flagged as missing the fiber");
            } else if !key.iter().all(meets) {
                r.warn(&name, "nonempty intersection with a component that misses the fiber");
            }
        }
        // nerve: every intersection of at least two members of a stored J is stored
        for key in &seen {
            if key.len() < 3 {
                continue;
            }
            for sub in proper_subsets(key) {
                if sub.len() >= 2 && !seen.contains(&sub) {
                    r.error(set_name(key), format!("face {} is missing", set_name(&sub)));
                }
            }
        }
        r
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let r = self.validate();
        if r.is_valid() {
            Ok(())
        } else {
            let msgs: Vec<String> = r.errors.iter().map(|i| format!("[{}] {}", i.subject, i.message)).collect();
            Err(Error::InvalidDatum(msgs.join("; ")))
        }
    }
}

fn proper_subsets<'a>(s: &BTreeSet<&'a str>) -> Vec<BTreeSet<&'a str>> {
    let v: Vec<&str> = s.iter().copied().collect();
    let full = (1u64 << v.len()) - 1;
    (1..full)
        .map(|mask| (0..v.len()).filter(|i| mask >> i & 1 == 1).map(|i| v[i]).collect())
        .collect()
}

fn q_plus(k: i64) -> QPoly {
    &QPoly::q_pow(1) + &QPoly::from_int(k)
}

fn names(k: usize) -> Vec<String> {
    (0..k).map(|i| format!("E{i}")).collect()
}

/// Normal crossings of coordinate hyperplanes: `x1^a1 ... xn^an` needs no blow-up.
fn monomial_datum(exps: &[u32]) -> Result<ResolutionDatum> {
    if exps.is_empty() || exps.len() > 8 {
        return Err(Error::UnknownBuiltin("monomial needs between 1 and 8 exponents".into()));
    }
    if exps.contains(&0) {
        return Err(Error::UnknownBuiltin("monomial exponents must be positive".into()));
    }
    let ids = names(exps.len());
    let components = exps
        .iter()
        .zip(&ids)
        .map(|(a, id)| Component::new(id, *a, 1, false))
        .collect();
    let full = (1u64 << exps.len()) - 1;
    let strata = (1..=full)
        .map(|mask| {
            let j: Vec<String> = (0..exps.len()).filter(|i| mask >> i & 1 == 1).map(|i| ids[i].clone()).collect();
            // the fiber over the origin is the origin, which lies on every E_i
            let count = if mask == full { QPoly::one() } else { QPoly::zero() };
            Stratum { j, connected_components: 1, count }
        })
        .collect();
    let vars: Vec<String> = exps
        .iter()
        .enumerate()
        .map(|(i, a)| if *a == 1 { format!("x{}", i + 1) } else { format!("x{}^{a}", i + 1) })
        .collect();
    Ok(ResolutionDatum {
        n: exps.len(),
        f: Some(vars.join("*")),
        components,
        strata,
        bad_primes: BTreeSet::new(),
    })
}

fn cusp_with(e1: (u32, u32), e3: (u32, u32)) -> ResolutionDatum {
    ResolutionDatum {
        n: 2,
        f: Some("x^2 - y^3".into()),
        components: vec![
            Component::new("E0", 1, 1, false),
            Component::new("E1", e1.0, e1.1, true),
            Component::new("E2", 3, 3, true),
            Component::new("E3", e3.0, e3.1, true),
        ],
        strata: vec![
            Stratum::new(&["E0"], 1, QPoly::zero()),
            Stratum::new(&["E1"], 1, QPoly::q_pow(1)),
            Stratum::new(&["E2"], 1, QPoly::q_pow(1)),
            Stratum::new(&["E3"], 1, q_plus(-2)),
            Stratum::new(&["E0", "E3"], 1, QPoly::one()),
            Stratum::new(&["E1", "E3"], 1, QPoly::one()),
            Stratum::new(&["E2", "E3"], 1, QPoly::one()),
        ],
        bad_primes: [2, 3].into(),
    }
}

fn two_lines(f: &str, bad: &[u64]) -> ResolutionDatum {
    ResolutionDatum {
        n: 2,
        f: Some(f.into()),
        components: vec![Component::new("E0", 1, 1, false), Component::new("E1", 1, 1, false)],
        strata: vec![
            Stratum::new(&["E0"], 1, QPoly::zero()),
            Stratum::new(&["E1"], 1, QPoly::zero()),
            Stratum::new(&["E0", "E1"], 1, QPoly::one()),
        ],
        bad_primes: bad.iter().copied().collect(),
    }
}

/// Three exceptional curves meeting pairwise with no triple point, plus one
/// strict branch. Not the output of any resolution: its exceptional part is a
/// cycle, which is never collapsible.
fn hollow_triangle() -> ResolutionDatum {
    ResolutionDatum {
        n: 2,
        f: None,
        components: vec![
            Component::new("E0", 1, 1, false),
            Component::new("E1", 2, 1, true),
            Component::new("E2", 1, 1, true),
            Component::new("E3", 1, 1, true),
        ],
        strata: vec![
            Stratum::new(&["E0"], 1, QPoly::zero()),
            Stratum::new(&["E1"], 1, q_plus(-2)),
            Stratum::new(&["E2"], 1, q_plus(-1)),
            Stratum::new(&["E3"], 1, q_plus(-1)),
            Stratum::new(&["E0", "E1"], 1, QPoly::one()),
            Stratum::new(&["E1", "E2"], 1, QPoly::one()),
            Stratum::new(&["E1", "E3"], 1, QPoly::one()),
            Stratum::new(&["E2", "E3"], 1, QPoly::one()),
        ],
        bad_primes: BTreeSet::new(),
    }
}

/// Names accepted by [`datum_builtin`], with a one-line description each.
pub const BUILTINS: &[(&str, &str)] = &[
    ("cusp", "x^2 - y^3 after three point blow-ups"),
    ("node", "x^2 - y^2, two transversal lines"),
    ("coordinate-axes", "x*y, identity resolution"),
    ("smooth-line(n)", "x1 in n variables, default n = 1"),
    ("monomial(a1,...,an)", "x1^a1*...*xn^an, identity resolution"),
    ("cusp-nu7", "cusp with nu of E3 replaced by 7 (not a resolution)"),
    ("cusp-corrupted", "cusp with E1 = (2,1) and E3 = (6,6) (not a resolution)"),
    ("hollow-triangle", "exceptional cycle of length three (not a resolution)"),
];

fn parse_args(name: &str) -> Result<(&str, Vec<u32>)> {
    let name = name.trim();
    let Some(open) = name.find('(') else {
        return Ok((name, Vec::new()));
    };
    let head = name[..open].trim();
    let rest = name[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| Error::UnknownBuiltin(name.to_string()))?;
    let args = rest
        .split(',')
        .map(|a| a.trim().parse::<u32>().map_err(|_| Error::UnknownBuiltin(name.to_string())))
        .collect::<Result<Vec<_>>>()?;
    Ok((head, args))
}

pub fn datum_builtin(name: &str) -> Result<ResolutionDatum> {
    let (head, args) = parse_args(name)?;
    let unknown = || Error::UnknownBuiltin(name.to_string());
    let no_args = |d: ResolutionDatum| if args.is_empty() { Ok(d) } else { Err(unknown()) };
    match head {
        "cusp" => no_args(cusp_with((2, 2), (6, 5))),
        "cusp-nu7" => no_args(cusp_with((2, 2), (6, 7))),
        "cusp-corrupted" => no_args(cusp_with((2, 1), (6, 6))),
        "node" => no_args(two_lines("x^2 - y^2", &[2])),
        "coordinate-axes" => no_args(two_lines("x*y", &[])),
        "hollow-triangle" => no_args(hollow_triangle()),
        "smooth-line" => {
            let n = match args.as_slice() {
                [] => 1,
                [n] if (1..=8).contains(n) => *n as usize,
                _ => return Err(unknown()),
            };
            let mut d = monomial_datum(&[1])?;
            d.n = n;
            d.f = Some("x1".into());
            Ok(d)
        }
        "monomial" if !args.is_empty() => monomial_datum(&args),
        _ => Err(unknown()),
    }
}

/// Counts of points on each exceptional curve of a surface datum that lie on
/// some other component, keyed by component id.
pub fn incidence_counts(d: &ResolutionDatum) -> BTreeMap<&str, BigRat> {
    let mut out: BTreeMap<&str, BigRat> = BTreeMap::new();
    for s in &d.strata {
        if s.j.len() == 2 {
            for id in &s.j {
                *out.entry(id.as_str()).or_insert_with(BigRat::zero) += int(s.connected_components as i64);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cusp_builtin_is_valid() {
        let d = datum_builtin("cusp").unwrap();
        let r = d.validate();
        assert!(r.is_valid(), "{r}");
        let nn: Vec<(u32, u32)> = d.components.iter().map(|c| (c.n, c.nu)).collect();
        assert_eq!(nn, [(1, 1), (2, 2), (3, 3), (6, 5)]);
        assert_eq!(d.stratum(&["E3"]).unwrap().count, q_plus(-2));
        assert_eq!(d.stratum(&["E3", "E1"]).unwrap().count, QPoly::one());
        assert_eq!(d.bad_primes, [2, 3].into());
        assert!(d.is_reduced());
    }

    #[test]
    fn too_many_components_in_a_stratum() {
        let mut d = datum_builtin("cusp").unwrap();
        d.strata.push(Stratum::new(&["E0", "E1", "E3"], 1, QPoly::zero()));
        let r = d.validate();
        assert!(r.errors.iter().any(|i| i.subject == "{E0,E1,E3}" && i.message.contains("cannot meet")));
    }

    #[test]
    fn zero_discrepancy_is_rejected() {
        let mut d = datum_builtin("cusp").unwrap();
        d.components[2].nu = 0;
        let r = d.validate();
        assert_eq!(r.errors.len(), 1);
        assert_eq!(r.errors[0].subject, "E2");
        assert!(d.ensure_valid().is_err());
    }

    #[test]
    fn negative_counts_are_rejected() {
        let mut d = datum_builtin("cusp").unwrap();
        d.strata[3].count = q_plus(-9);
        assert!(!d.validate().is_valid());
        d.strata[3].count = QPoly::constant(crate::arith::rat(1, 2));
        assert!(!d.validate().is_valid());
    }

    #[test]
    fn nerve_condition() {
        let mut d = datum_builtin("monomial(1,1,1)").unwrap();
        assert!(d.validate().is_valid());
        d.strata.retain(|s| s.key() != ["E0", "E2"].into());
        let r = d.validate();
        assert!(r.errors.iter().any(|i| i.message.contains("{E0,E2} is missing")), "{r}");
    }

    #[test]
    fn fiber_flags() {
        let mut d = datum_builtin("cusp").unwrap();
        d.components[3].meets_fiber = false;
        assert!(!d.validate().is_valid());
        let mut d = datum_builtin("cusp").unwrap();
        d.components.push(Component { meets_fiber: false, ..Component::new("E4", 1, 1, false) });
        d.strata.push(Stratum::new(&["E1", "E4"], 1, QPoly::zero()));
        let r = d.validate();
        assert!(r.is_valid());
        assert!(!r.warnings.is_empty());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let mut v: serde_json::Value = serde_json::from_str(&datum_builtin("node").unwrap().to_json()).unwrap();
        v["extra"] = 1.into();
        assert!(ResolutionDatum::from_json(&v.to_string()).is_err());
        let mut v: serde_json::Value = serde_json::from_str(&datum_builtin("node").unwrap().to_json()).unwrap();
        v["components"][0]["weight"] = 1.into();
        assert!(ResolutionDatum::from_json(&v.to_string()).is_err());
    }

    #[test]
    fn json_layout() {
        let d = datum_builtin("cusp").unwrap();
        let v: serde_json::Value = serde_json::from_str(&d.to_json()).unwrap();
        assert_eq!(v["components"][3]["N"], 6);
        assert_eq!(v["strata"][3]["J"], serde_json::json!(["E3"]));
        assert_eq!(v["strata"][3]["count"], serde_json::json!([[1, "1"], [0, "-2"]]));
        assert_eq!(v["bad_primes"], serde_json::json!([2, 3]));
    }

    #[test]
    fn builtin_catalogue() {
        for name in ["cusp", "node", "coordinate-axes", "smooth-line", "smooth-line(3)", "monomial(2,3)", "cusp-nu7", "cusp-corrupted", "hollow-triangle"] {
            let d = datum_builtin(name).unwrap();
            assert!(d.validate().is_valid(), "{name}");
        }
        for bad in ["cusp(2)", "monomial", "monomial(0)", "smooth-line(0)", "quartic", "monomial(1,"] {
            assert!(matches!(datum_builtin(bad), Err(Error::UnknownBuiltin(_))), "{bad}");
        }
        let d = datum_builtin("smooth-line(3)").unwrap();
        assert_eq!((d.n, d.components.len()), (3, 1));
        assert_eq!(d.strata[0].count, QPoly::one());
        let d = datum_builtin("monomial(2,3)").unwrap();
        assert_eq!(d.f.as_deref(), Some("x1^2*x2^3"));
        assert!(!d.is_reduced());
    }

    #[test]
    fn exceptional_curves_have_consistent_counts() {
        // on a surface each exceptional P^1 has q + 1 points, minus those on other components
        for name in ["cusp", "hollow-triangle"] {
            let d = datum_builtin(name).unwrap();
            let inc = incidence_counts(&d);
            for c in d.components.iter().filter(|c| c.exceptional) {
                let s = d.stratum(&[&c.id]).unwrap();
                assert_eq!(s.count, q_plus(1 - inc[c.id.as_str()].to_integer().try_into().unwrap_or(0i64)));
            }
        }
    }

    fn arb_datum() -> impl Strategy<Value = ResolutionDatum> {
        (1usize..4, prop::collection::vec((1u32..9, 1u32..9, any::<bool>()), 1..5), prop::collection::vec((-3i64..4, -5i64..6), 0..3))
            .prop_map(|(n, comps, count)| {
                let components: Vec<Component> = comps
                    .iter()
                    .enumerate()
                    .map(|(i, (a, b, e))| Component::new(&format!("E{i}"), *a, *b, *e))
                    .collect();
                let strata = vec![Stratum {
                    j: vec!["E0".into()],
                    connected_components: 1,
                    count: QPoly::from_terms(count.into_iter().map(|(e, c)| (e, int(c)))),
                }];
                ResolutionDatum { n, f: Some("x1".into()), components, strata, bad_primes: [5, 7].into() }
            })
    }

    proptest! {
        #[test]
        fn render_parse_round_trip(d in arb_datum()) {
            let back = ResolutionDatum::from_json(&d.to_json()).unwrap();
            prop_assert_eq!(back, d);
        }
    }
}
