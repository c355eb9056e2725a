//! Poles of `Z(t)` grouped by real part, their exact orders, the log canonical
//! threshold, and the checks that pole data must satisfy.
//!
//! An atom `1 - q^-nu t^N` with `g = gcd(N, nu)`, `N = g b`, `nu = g a` equals
//! `-prod_{d | g} Phi_d(u)` with `u = q^-a t^b`. For fixed `(a, b)` the factors
//! `Phi_d(u)` are irreducible over `Q(q)` and pairwise coprime, so the order of
//! the poles on `Re(s) = -a/b` is read off by trial division of the numerator.

use crate::arith::ratfun::TPoly;
use crate::arith::{int, Atom, BigRat, QPoly, UPoly};
use crate::datum::ResolutionDatum;
use crate::denef::ZetaResult;
use crate::error::{Error, Result};
use num_integer::Integer;
use num_traits::Zero;
use serde::{Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Outcome of a check that is a theorem on valid input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Outcome {
    Pass,
    Vacuous,
    Inconclusive,
    Fail,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "PASS",
            Outcome::Vacuous => "VACUOUS",
            Outcome::Inconclusive => "INCONCLUSIVE",
            Outcome::Fail => "FAIL",
        })
    }
}

pub(crate) fn rat_string<S: Serializer>(r: &BigRat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

fn opt_rat_string<S: Serializer>(r: &Option<BigRat>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_some(&r.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PoleGroup {
    #[serde(serialize_with = "rat_string")]
    pub real_part: BigRat,
    pub order: u32,
    /// Surviving atoms `(N, nu)` with a zero on this line.
    pub witnesses: BTreeSet<(u32, i64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PoleReport {
    pub groups: Vec<PoleGroup>,
    #[serde(serialize_with = "opt_rat_string")]
    pub lct: Option<BigRat>,
    pub max_possible_order: usize,
}

impl PoleReport {
    pub fn with_lct(mut self, lct: BigRat) -> Self {
        self.lct = Some(lct);
        self
    }

    /// Real parts of the surviving poles, the candidates for monodromy eigenvalues.
    pub fn candidates(&self) -> Vec<BigRat> {
        self.groups.iter().map(|g| g.real_part.clone()).collect()
    }
}

impl fmt::Display for PoleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>10}  {:>5}  witnesses (N, nu)", "real part", "order")?;
        for g in &self.groups {
            let w: Vec<String> = g.witnesses.iter().map(|(n, nu)| format!("({n}, {nu})")).collect();
            writeln!(f, "{:>10}  {:>5}  {}", g.real_part.to_string(), g.order, w.join(" "))?;
        }
        if let Some(l) = &self.lct {
            writeln!(f, "lct = {l}")?;
        }
        writeln!(f, "max possible order = {}", self.max_possible_order)
    }
}

fn cyclotomic(d: u64, cache: &mut BTreeMap<u64, UPoly>) -> UPoly {
    if let Some(p) = cache.get(&d) {
        return p.clone();
    }
    let mut p = UPoly::monomial(int(1), d as usize).sub(&UPoly::one());
    for e in (1..d).filter(|e| d % e == 0) {
        p = p.div_exact(&cyclotomic(e, cache)).expect("cyclotomic factor");
    }
    cache.insert(d, p.clone());
    p
}

/// `Phi_d(q^-a t^b)` as a polynomial in `t`.
fn substituted(phi: &UPoly, a: i64, b: u32) -> TPoly {
    let deg = phi.degree().unwrap_or(0) * b as usize;
    let mut c = vec![QPoly::zero(); deg + 1];
    for (k, ck) in phi.coeffs().iter().enumerate() {
        if !ck.is_zero() {
            c[k * b as usize] = QPoly::monomial(ck.clone(), -a * k as i64);
        }
    }
    TPoly::from_coeffs(c)
}

fn divisors(g: u64) -> Vec<u64> {
    (1..=g).filter(|d| g % d == 0).collect()
}

/// Groups the surviving poles of a normalized rational function in `t`.
pub fn extract_poles(z: &ZetaResult, n: usize) -> PoleReport {
    let r = &z.zeta;
    // (a, b) -> atoms on the line Re(s) = -a/b
    let mut lines: BTreeMap<(i64, u32), Vec<(Atom, u32)>> = BTreeMap::new();
    for (atom, m) in r.atoms() {
        let g = (atom.n as i64).gcd(&atom.nu) as u64;
        let key = (atom.nu / g as i64, atom.n / g as u32);
        lines.entry(key).or_default().push((*atom, *m));
    }
    let mut cache = BTreeMap::new();
    let mut groups = Vec::new();
    for ((a, b), atoms) in lines {
        let gmax = atoms.iter().map(|(at, _)| at.n / b).max().unwrap_or(1) as u64;
        let mut order = 0u32;
        let mut witnesses = BTreeSet::new();
        for d in divisors(gmax) {
            let holders: Vec<&(Atom, u32)> = atoms.iter().filter(|(at, _)| (at.n / b) as u64 % d == 0).collect();
            let den: u32 = holders.iter().map(|(_, m)| m).sum();
            if den == 0 {
                continue;
            }
            let factor = substituted(&cyclotomic(d, &mut cache), a, b);
            let mut num = r.num().clone();
            let mut cancelled = 0u32;
            while cancelled < den {
                match num.div_exact(&factor) {
                    Some(q) => {
                        num = q;
                        cancelled += 1;
                    }
                    None => break,
                }
            }
            if den > cancelled {
                order = order.max(den - cancelled);
                witnesses.extend(holders.iter().map(|(at, _)| (at.n, at.nu)));
            }
        }
        if order > 0 {
            groups.push(PoleGroup { real_part: -BigRat::new(a.into(), b.into()), order, witnesses });
        }
    }
    groups.sort_by(|x, y| y.real_part.cmp(&x.real_part));
    PoleReport { groups, lct: None, max_possible_order: n }
}

/// Minimum of `nu / N` over the components meeting the fiber.
pub fn lct_from_datum(d: &ResolutionDatum) -> Result<BigRat> {
    d.components
        .iter()
        .filter(|c| c.meets_fiber && c.n > 0)
        .map(|c| c.weight())
        .min()
        .ok_or(Error::NoFiberComponent)
}

/// Every pole of maximal order `n` must lie on `Re(s) = -lct`.
pub fn veys_check(r: &PoleReport, n: usize) -> Result<Outcome> {
    let lct = r
        .lct
        .as_ref()
        .ok_or_else(|| Error::Precondition("pole report has no lct".into()))?;
    let top: Vec<&PoleGroup> = r.groups.iter().filter(|g| g.order as usize == n).collect();
    Ok(if top.is_empty() {
        Outcome::Vacuous
    } else if top.iter().all(|g| g.real_part == -lct.clone()) {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub outcome: Outcome,
    pub problems: Vec<String>,
}

/// Checks the real-part and order restrictions imposed by a resolution.
pub fn igusa_bounds_check(r: &PoleReport, d: &ResolutionDatum) -> Result<BoundsReport> {
    let lct = match &r.lct {
        Some(l) => l.clone(),
        None => lct_from_datum(d)?,
    };
    let weight = |id: &str| d.component(id).map(|c| c.weight());
    let mut problems = Vec::new();
    for g in &r.groups {
        let w = -g.real_part.clone();
        if g.real_part > -lct.clone() {
            problems.push(format!("real part {} exceeds -lct = {}", g.real_part, -lct.clone()));
        }
        if !d.components.iter().any(|c| c.meets_fiber && c.weight() == w) {
            problems.push(format!("real part {} is not -nu/N of a component meeting the fiber", g.real_part));
        }
        if g.order as usize > d.n {
            problems.push(format!("order {} at {} exceeds n = {}", g.order, g.real_part, d.n));
        }
        let singles = d.components.iter().any(|c| c.weight() == w) as usize;
        let bound = d
            .strata
            .iter()
            .filter(|s| s.j.iter().all(|id| weight(id) == Some(w.clone())))
            .map(|s| s.j.len())
            .max()
            .unwrap_or(0)
            .max(singles);
        if g.order as usize > bound {
            problems.push(format!("order {} at {} exceeds the stratum bound {bound}", g.order, g.real_part));
        }
    }
    let outcome = if problems.is_empty() { Outcome::Pass } else { Outcome::Fail };
    Ok(BoundsReport { outcome, problems })
}
