//! Embedded resolution of a plane curve germ at the origin by point blow-ups.
//!
//! Each infinitely near point is kept in centred local coordinates `(u, v)`
//! together with the local equations of the strict transform and the
//! exceptional curves through it, which are always coordinate axes. Blowing
//! up uses the charts `(u, v) = (u1, u1 v1)`, where the new curve is `u1 = 0`,
//! and `(u, v) = (u2 v2, v2)`, where it is `v2 = 0`.
//!
//! Strict transform components are the analytic branches of `f` at the origin.
//! Every centre must be rational; irrational tangent directions abort.

use crate::arith::{int, BigRat, MultiPoly, QPoly, UPoly};
use crate::datum::{Component, ResolutionDatum, Stratum};
use crate::error::{Error, Result};
use crate::primes::prime_divisors;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

pub const DEFAULT_BLOWUP_BUDGET: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Axis {
    /// The curve `u = 0`.
    U,
    /// The curve `v = 0`.
    V,
}

/// An additional, unnecessary blow-up performed after the resolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtraBlowup {
    /// The `k`-th point where two components meet, in traversal order.
    Intersection(usize),
    /// A rational point of the `k`-th exceptional curve lying on no other component.
    Generic(usize),
}

#[derive(Clone, Debug)]
pub struct ResolveOptions {
    pub budget: usize,
    pub extra: Option<ExtraBlowup>,
    /// Stop after this many blow-ups, leaving later non-snc points unresolved.
    pub stop_after: Option<usize>,
}

impl Default for ResolveOptions {
    fn default() -> Self {
        ResolveOptions { budget: DEFAULT_BLOWUP_BUDGET, extra: None, stop_after: None }
    }
}

/// A point above the origin in centred local coordinates.
#[derive(Clone, Debug)]
struct LocalPoint {
    /// Local equations of strict transform factors through the point, with
    /// their exponent in `f`.
    factors: Vec<(MultiPoly, u32)>,
    exc: Vec<(usize, Axis)>,
    place: String,
    forced: bool,
}

impl LocalPoint {
    fn product(&self) -> MultiPoly {
        self.factors.iter().fold(MultiPoly::constant(int(1), 2), |acc, (g, _)| acc.mul(g))
    }

    fn axis(&self, a: Axis) -> Option<usize> {
        self.exc.iter().find(|(_, x)| *x == a).map(|(i, _)| *i)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExceptionalCurve {
    #[serde(rename = "N")]
    pub n: u32,
    pub nu: u32,
    /// Number of points of the curve lying on other components.
    pub special_points: usize,
    /// Where the centre of the blow-up was.
    pub center: String,
}

/// A point of the final configuration where components meet.
#[derive(Clone, Debug, Serialize)]
pub struct Leaf {
    pub exceptional: Vec<usize>,
    /// Multiplicities `N` of the strict branches through the point.
    pub branches: Vec<u32>,
}

/// Outcome of running the blow-up procedure, possibly stopped early.
#[derive(Clone, Debug, Serialize)]
pub struct PlaneResolution {
    pub f: String,
    pub exceptional: Vec<ExceptionalCurve>,
    pub leaves: Vec<Leaf>,
    /// Non-snc points left unresolved because of `stop_after`.
    pub offending: Vec<String>,
    pub bad_primes: BTreeSet<u64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SncReport {
    pub snc: bool,
    pub offending: Vec<String>,
}

/// Whether the total transform is strict normal crossings above the origin.
pub fn snc_check(r: &PlaneResolution) -> SncReport {
    SncReport { snc: r.offending.is_empty(), offending: r.offending.clone() }
}

struct Resolver<'a> {
    opts: &'a ResolveOptions,
    exc: Vec<ExceptionalCurve>,
    leaves: Vec<Leaf>,
    offending: Vec<String>,
    bad: BTreeSet<u64>,
    blowups: usize,
    extra_used: bool,
}

fn add_primes(bad: &mut BTreeSet<u64>, c: &BigRat) -> Result<()> {
    for part in [c.numer(), c.denom()] {
        let ps = prime_divisors(part)
            .ok_or_else(|| Error::Resolution(format!("cannot factor {part} to certify primes")))?;
        bad.extend(ps);
    }
    Ok(())
}

fn int_divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    let n = n.abs();
    let ps = prime_divisors(&n).ok_or_else(|| Error::Resolution(format!("cannot factor {n}")))?;
    let mut divs = vec![BigInt::one()];
    for p in ps {
        let bp = BigInt::from(p);
        let mut m = n.clone();
        let mut k = 0;
        while (&m % &bp).is_zero() {
            m /= &bp;
            k += 1;
        }
        let mut next = Vec::with_capacity(divs.len() * (k + 1));
        for d in &divs {
            let mut pw = d.clone();
            for _ in 0..=k {
                next.push(pw.clone());
                pw *= &bp;
            }
        }
        divs = next;
    }
    Ok(divs)
}

/// Distinct rational roots of `p` and the cofactor free of rational roots.
fn rational_roots(p: &UPoly) -> Result<(Vec<BigRat>, UPoly)> {
    let mut rest = p.clone();
    let mut roots = Vec::new();
    let linear = |r: &BigRat| UPoly::from_coeffs(vec![-r.clone(), int(1)]);
    if rest.degree().unwrap_or(0) == 0 {
        return Ok((roots, rest));
    }
    if rest.coeff(0).is_zero() {
        roots.push(BigRat::zero());
        while rest.coeff(0).is_zero() && !rest.is_zero() {
            rest = rest.div_exact(&linear(&BigRat::zero())).expect("root at zero");
        }
    }
    if rest.degree().unwrap_or(0) == 0 {
        return Ok((roots, rest));
    }
    let lcm = rest.coeffs().iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = rest.coeffs().iter().map(|c| (c * BigRat::from_integer(lcm.clone())).to_integer()).collect();
    let a0 = ints.first().expect("nonzero");
    let an = ints.last().expect("nonzero");
    let nums = int_divisors(a0)?;
    let dens = int_divisors(an)?;
    let mut cands: BTreeSet<BigRat> = BTreeSet::new();
    for a in &nums {
        for b in &dens {
            let r = BigRat::new(a.clone(), b.clone());
            cands.insert(r.clone());
            cands.insert(-r);
        }
    }
    for r in cands {
        if rest.degree().unwrap_or(0) == 0 {
            break;
        }
        if rest.eval(&r).is_zero() {
            roots.push(r.clone());
            while rest.degree().unwrap_or(0) > 0 && rest.eval(&r).is_zero() {
                rest = rest.div_exact(&linear(&r)).expect("root divides");
            }
        }
    }
    roots.sort();
    Ok((roots, rest))
}

fn coeff(g: &MultiPoly, i: u32, j: u32) -> BigRat {
    g.coeff(&[i, j])
}

/// `g_m(1, v)` for the degree-`m` form of `g`, as a polynomial in `v`.
fn dehomogenize(g: &MultiPoly, m: u32) -> UPoly {
    UPoly::from_coeffs((0..=m).map(|j| coeff(g, m - j, j)).collect())
}

fn u() -> MultiPoly {
    MultiPoly::var(0, 2)
}

fn v() -> MultiPoly {
    MultiPoly::var(1, 2)
}

impl Resolver<'_> {
    fn exc_name(&self, i: usize) -> String {
        format!("X{}", i + 1)
    }

    fn describe(&self, p: &LocalPoint) -> String {
        if p.exc.is_empty() {
            return p.place.clone();
        }
        let names: Vec<String> = p.exc.iter().map(|(i, _)| self.exc_name(*i)).collect();
        format!("{} ({})", p.place, names.join(" ∩ "))
    }

    /// `Some(branch multiplicities)` if the point is already snc.
    fn snc_branches(&mut self, p: &LocalPoint) -> Result<Option<Vec<u32>>> {
        let g = p.product();
        let m = g.order_at_origin().unwrap_or(0);
        let a = coeff(&g, 1, 0);
        let b = coeff(&g, 0, 1);
        let ok = match (p.exc.len(), m) {
            (_, 0) => Some(vec![]),
            (0, 1) => {
                for c in [&a, &b].into_iter().filter(|c| !c.is_zero()) {
                    add_primes(&mut self.bad, c)?;
                }
                Some(vec![p.factors[0].1])
            }
            (0, 2) => self.ordinary_double_point(p)?,
            (1, 1) => {
                // transversal to the exceptional axis through the point
                let c = if p.exc[0].1 == Axis::U { &b } else { &a };
                if c.is_zero() {
                    None
                } else {
                    add_primes(&mut self.bad, c)?;
                    Some(vec![p.factors[0].1])
                }
            }
            _ => None,
        };
        Ok(ok)
    }

    /// Two smooth branches with distinct rational tangents.
    fn ordinary_double_point(&mut self, p: &LocalPoint) -> Result<Option<Vec<u32>>> {
        let g = p.product();
        let (a, b, c) = (coeff(&g, 2, 0), coeff(&g, 1, 1), coeff(&g, 0, 2));
        let disc = &b * &b - int(4) * &a * &c;
        if disc.is_zero() || !is_rational_square(&disc) {
            return Ok(None);
        }
        add_primes(&mut self.bad, &disc)?;
        for x in [&a, &b, &c].into_iter().filter(|x| !x.is_zero()) {
            add_primes(&mut self.bad, x)?;
        }
        let branches = match p.factors.as_slice() {
            [(_, k)] => vec![*k, *k],
            [(_, k1), (_, k2)] => vec![*k1, *k2],
            _ => unreachable!("multiplicity two comes from at most two factors"),
        };
        Ok(Some(branches))
    }

    fn visit(&mut self, p: LocalPoint) -> Result<()> {
        let snc = if p.forced { None } else { self.snc_branches(&p)? };
        if let Some(branches) = snc {
            let is_meeting = p.exc.len() + branches.len() >= 2;
            let force = is_meeting
                && !self.extra_used
                && matches!(self.opts.extra, Some(ExtraBlowup::Intersection(k)) if k == self.leaves.iter().filter(|l| l.exceptional.len() + l.branches.len() >= 2).count());
            if !force {
                if !branches.is_empty() || p.exc.len() >= 2 {
                    self.leaves.push(Leaf { exceptional: p.exc.iter().map(|(i, _)| *i).collect(), branches });
                }
                return Ok(());
            }
            self.extra_used = true;
        }
        if self.opts.stop_after.is_some_and(|s| self.blowups >= s) {
            self.offending.push(self.describe(&p));
            return Ok(());
        }
        self.blow_up(p)
    }

    fn blow_up(&mut self, p: LocalPoint) -> Result<()> {
        self.blowups += 1;
        if self.blowups > self.opts.budget {
            return Err(Error::BlowupBudget(self.opts.budget));
        }
        let idx = self.exc.len();
        let mut n_new = 0u32;
        let mut nu_new = 2u32;
        for (i, _) in &p.exc {
            n_new += self.exc[*i].n;
            nu_new += self.exc[*i].nu - 1;
        }
        // strict factors: multiplicities, tangent directions, charts
        let mut finite: BTreeSet<BigRat> = BTreeSet::new();
        let mut infinite = false;
        let mut chart_a = Vec::new();
        let mut chart_b = Vec::new();
        let ia = [u(), u().mul(&v())];
        let ib = [u().mul(&v()), v()];
        for (g, k) in &p.factors {
            let m = g.order_at_origin().expect("factor vanishes at the point");
            n_new += k * m;
            let cone = g.homogeneous_part(m);
            for c in cone.terms().map(|(_, c)| c.clone()).collect::<Vec<_>>() {
                add_primes(&mut self.bad, &c)?;
            }
            let dh = dehomogenize(&cone, m);
            let (roots, rest) = rational_roots(&dh)?;
            if rest.degree().unwrap_or(0) > 0 {
                return Err(Error::UnresolvableOverQ(format!(
                    "tangent directions {} at {} are not rational",
                    cone.display_with(&["u", "v"]),
                    self.describe(&p)
                )));
            }
            if dh.degree().map_or(true, |d| (d as u32) < m) {
                infinite = true;
            }
            finite.extend(roots);
            let pa = g.compose(&ia);
            let pb = g.compose(&ib);
            // both charts must see the same order along the new curve
            if pa.var_order(0) != Some(m) || pb.var_order(1) != Some(m) {
                return Err(Error::Resolution(format!("chart disagreement blowing up {}", self.describe(&p))));
            }
            chart_a.push((pa.div_var_pow(0, m), *k));
            chart_b.push((pb.div_var_pow(1, m), *k));
        }
        let ea = p.axis(Axis::U);
        let eb = p.axis(Axis::V);
        if eb.is_some() {
            finite.insert(BigRat::zero());
        }
        if ea.is_some() {
            infinite = true;
        }
        let generic = match self.opts.extra {
            Some(ExtraBlowup::Generic(k)) if k == idx && !self.extra_used => {
                self.extra_used = true;
                let c = (0i64..).map(int).find(|c| !finite.contains(c)).expect("unbounded");
                Some(c)
            }
            _ => None,
        };
        let points: Vec<&BigRat> = finite.iter().chain(generic.as_ref()).collect();
        for (i, x) in points.iter().enumerate() {
            add_primes(&mut self.bad, x)?;
            for y in &points[i + 1..] {
                add_primes(&mut self.bad, &(*x - *y))?;
            }
        }
        let special = points.len() + infinite as usize;
        let place = if p.exc.is_empty() && p.place == "origin" { "origin".to_string() } else { self.describe(&p) };
        self.exc.push(ExceptionalCurve { n: n_new, nu: nu_new, special_points: special, center: place });

        let name = self.exc_name(idx);
        for c in points {
            let img = [u(), u().mul(&v().add(&MultiPoly::constant(c.clone(), 2)))];
            let factors: Vec<(MultiPoly, u32)> = chart_a
                .iter()
                .map(|(g, k)| (g.compose(&[u(), v().add(&MultiPoly::constant(c.clone(), 2))]), *k))
                .filter(|(g, _)| g.constant_term().is_zero())
                .collect();
            debug_assert!(img.len() == 2);
            let mut exc = vec![(idx, Axis::U)];
            if c.is_zero() {
                if let Some(b) = eb {
                    exc.push((b, Axis::V));
                }
            }
            let forced = generic.as_ref() == Some(c);
            self.visit(LocalPoint { factors, exc, place: format!("{name}: v = {c}"), forced })?;
        }
        if infinite {
            let factors = chart_b.into_iter().filter(|(g, _)| g.constant_term().is_zero()).collect();
            let mut exc = vec![(idx, Axis::V)];
            if let Some(a) = ea {
                exc.push((a, Axis::U));
            }
            self.visit(LocalPoint { factors, exc, place: format!("{name}: u = 0"), forced: false })?;
        }
        Ok(())
    }
}

fn is_rational_square(r: &BigRat) -> bool {
    let sq = |n: &BigInt| {
        let s = n.sqrt();
        &s * &s == *n
    };
    !r.is_negative() && sq(r.numer()) && sq(r.denom())
}

fn prepare(f: &MultiPoly) -> Result<(MultiPoly, Vec<(MultiPoly, u32)>)> {
    if f.nvars() > 2 {
        return Err(Error::Resolution(format!("plane curves only; f has {} variables", f.nvars())));
    }
    let f = f.with_nvars(2);
    if f.is_constant() {
        return Err(Error::Resolution("f is constant".into()));
    }
    if !f.constant_term().is_zero() {
        return Err(Error::Resolution("f does not vanish at the origin".into()));
    }
    let factors: Vec<(MultiPoly, u32)> = f
        .squarefree_decomposition()
        .into_iter()
        .filter(|(g, _)| g.constant_term().is_zero())
        .collect();
    Ok((f, factors))
}

/// Runs the blow-up procedure and returns the final configuration.
pub fn resolve_state(f: &MultiPoly, opts: &ResolveOptions) -> Result<PlaneResolution> {
    let (f, factors) = prepare(f)?;
    let mut r = Resolver {
        opts,
        exc: Vec::new(),
        leaves: Vec::new(),
        offending: Vec::new(),
        bad: BTreeSet::new(),
        blowups: 0,
        extra_used: false,
    };
    for (_, c) in f.terms() {
        add_primes(&mut r.bad, c)?;
    }
    r.visit(LocalPoint { factors, exc: vec![], place: "origin".into(), forced: false })?;
    if opts.extra.is_some() && !r.extra_used {
        return Err(Error::Resolution("the requested extra blow-up point does not exist".into()));
    }
    for e in &r.exc {
        r.bad.extend(prime_divisors(&BigInt::from(e.n)).expect("small"));
    }
    for l in &r.leaves {
        for k in &l.branches {
            r.bad.extend(prime_divisors(&BigInt::from(*k)).expect("small"));
        }
    }
    Ok(PlaneResolution {
        f: f.display_with(&["x", "y"]),
        exceptional: r.exc,
        leaves: r.leaves,
        offending: r.offending,
        bad_primes: r.bad,
    })
}

impl PlaneResolution {
    pub fn blowups(&self) -> usize {
        self.exceptional.len()
    }

    /// Emits the datum: branches `E0..`, then exceptional curves in blow-up order.
    pub fn to_datum(&self) -> Result<ResolutionDatum> {
        if !self.offending.is_empty() {
            return Err(Error::Resolution(format!("not snc at {}", self.offending.join(", "))));
        }
        let nb: usize = self.leaves.iter().map(|l| l.branches.len()).sum();
        let exc_id = |i: usize| format!("E{}", nb + i);
        let mut components = Vec::new();
        let mut pairs: BTreeMap<(usize, usize), u32> = BTreeMap::new();
        let mut branch_count: Vec<QPoly> = Vec::new();
        for l in &self.leaves {
            let first = components.len();
            for k in &l.branches {
                components.push(Component::new(&format!("E{}", components.len()), *k, 1, false));
                branch_count.push(QPoly::zero());
            }
            let ids: Vec<usize> = (first..first + l.branches.len()).chain(l.exceptional.iter().map(|i| nb + i)).collect();
            match ids.as_slice() {
                [only] => branch_count[*only] = QPoly::one(),
                [a, b] => *pairs.entry(((*a).min(*b), (*a).max(*b))).or_default() += 1,
                _ => return Err(Error::Resolution("more than two components meet at a point".into())),
            }
        }
        for (i, e) in self.exceptional.iter().enumerate() {
            components.push(Component::new(&exc_id(i), e.n, e.nu, true));
        }
        let mut strata = Vec::new();
        for (i, c) in components.iter().enumerate() {
            let count = if i < nb {
                branch_count[i].clone()
            } else {
                &QPoly::q_pow(1) + &QPoly::from_int(1 - self.exceptional[i - nb].special_points as i64)
            };
            strata.push(Stratum::new(&[&c.id], 1, count));
        }
        for ((a, b), k) in pairs {
            strata.push(Stratum::new(&[&components[a].id, &components[b].id], k, QPoly::from_int(k as i64)));
        }
        let d = ResolutionDatum { n: 2, f: Some(self.f.clone()), components, strata, bad_primes: self.bad_primes.clone() };
        d.ensure_valid()?;
        Ok(d)
    }
}

pub fn resolve_plane_curve(f: &MultiPoly) -> Result<ResolutionDatum> {
    resolve_state(f, &ResolveOptions::default())?.to_datum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::datum_builtin;

    fn resolve(s: &str) -> ResolutionDatum {
        resolve_plane_curve(&MultiPoly::parse(s).unwrap()).unwrap()
    }

    fn data(d: &ResolutionDatum) -> Vec<(u32, u32, bool)> {
        d.components.iter().map(|c| (c.n, c.nu, c.exceptional)).collect()
    }

    #[test]
    fn cusp_is_the_catalogued_datum() {
        let d = resolve("x^2 - y^3");
        let cusp = datum_builtin("cusp").unwrap();
        assert_eq!(d.components, cusp.components);
        assert_eq!(d.strata, cusp.strata);
        assert_eq!(d.bad_primes, [2, 3].into());
        assert_eq!(d.f.as_deref(), Some("x^2 - y^3"));
    }

    #[test]
    fn cusp_blowup_sequence() {
        let f = MultiPoly::parse("x^2 - y^3").unwrap();
        let nn: Vec<(u32, u32)> = (1..=3)
            .map(|k| {
                let r = resolve_state(&f, &ResolveOptions { stop_after: Some(k), ..Default::default() }).unwrap();
                let e = r.exceptional.last().unwrap();
                (e.n, e.nu)
            })
            .collect();
        assert_eq!(nn, [(2, 2), (3, 3), (6, 5)]);
        let two = resolve_state(&f, &ResolveOptions { stop_after: Some(2), ..Default::default() }).unwrap();
        let report = snc_check(&two);
        assert!(!report.snc);
        assert_eq!(report.offending, ["X2: v = 0 (X2 ∩ X1)"]);
        let three = resolve_state(&f, &ResolveOptions { stop_after: Some(3), ..Default::default() }).unwrap();
        assert!(snc_check(&three).snc);
        assert!(two.to_datum().is_err());
    }

    #[test]
    fn normal_crossings_need_nothing() {
        let axes = resolve("x*y");
        assert_eq!(data(&axes), [(1, 1, false), (1, 1, false)]);
        assert_eq!(axes.strata, datum_builtin("coordinate-axes").unwrap().strata);
        let r = resolve_state(&MultiPoly::parse("x*y").unwrap(), &ResolveOptions::default()).unwrap();
        assert!(snc_check(&r).snc);
        assert_eq!(r.blowups(), 0);
        let node = resolve("x^2 - y^2");
        assert_eq!(node.strata, datum_builtin("node").unwrap().strata);
        assert!(node.bad_primes.contains(&2));
        let smooth = resolve("x + y^2");
        assert_eq!(data(&smooth), [(1, 1, false)]);
        assert_eq!(smooth.strata[0].count, QPoly::one());
    }

    #[test]
    fn classical_singularities() {
        // ordinary triple point: one blow-up, three branches through distinct points
        let d = resolve("x*y*(x - y)");
        assert_eq!(data(&d), [(1, 1, false), (1, 1, false), (1, 1, false), (3, 2, true)]);
        assert_eq!(d.stratum(&["E3"]).unwrap().count, &QPoly::q_pow(1) + &QPoly::from_int(-2));
        // tacnode: two blow-ups, lct 3/4
        let d = resolve("x^2 - y^4");
        assert_eq!(data(&d), [(1, 1, false), (1, 1, false), (2, 2, true), (4, 3, true)]);
        // E6-type: x^3 - y^4 has (12, 7) on the last curve
        let d = resolve("x^3 - y^4");
        assert!(d.components.iter().any(|c| (c.n, c.nu) == (12, 7)));
        // x^2 - y^5: (10, 7)
        let d = resolve("x^2 - y^5");
        assert!(d.components.iter().any(|c| (c.n, c.nu) == (10, 7)));
    }

    #[test]
    fn multiplicities_follow_the_original_polynomial() {
        let d = resolve("x^2*y^3");
        assert_eq!(data(&d), [(2, 1, false), (3, 1, false)]);
        assert!(!d.is_reduced());
        let d = resolve("x^2");
        assert_eq!(data(&d), [(2, 1, false)]);
    }

    #[test]
    fn irrational_centres_abort() {
        let f = MultiPoly::parse("x^2 + y^2").unwrap();
        assert!(matches!(resolve_plane_curve(&f), Err(Error::UnresolvableOverQ(_))));
        let f = MultiPoly::parse("x^2 - 2y^2").unwrap();
        assert!(matches!(resolve_plane_curve(&f), Err(Error::UnresolvableOverQ(_))));
    }

    #[test]
    fn invalid_input() {
        for s in ["x + 1", "3", "x*y*z"] {
            assert!(resolve_plane_curve(&MultiPoly::parse(s).unwrap()).is_err(), "{s}");
        }
        let f = MultiPoly::parse("x^2 - y^30").unwrap();
        let opts = ResolveOptions { budget: 3, ..Default::default() };
        assert!(matches!(resolve_state(&f, &opts), Err(Error::BlowupBudget(3))));
    }

    #[test]
    fn extra_blowups() {
        let f = MultiPoly::parse("x^2 - y^3").unwrap();
        let r = resolve_state(&f, &ResolveOptions { extra: Some(ExtraBlowup::Intersection(0)), ..Default::default() }).unwrap();
        let d = r.to_datum().unwrap();
        assert_eq!(d.components.len(), 5);
        let r = resolve_state(&f, &ResolveOptions { extra: Some(ExtraBlowup::Generic(2)), ..Default::default() }).unwrap();
        let d = r.to_datum().unwrap();
        let last = d.components.last().unwrap();
        assert_eq!((last.n, last.nu), (6, 6));
        assert_eq!(d.stratum(&["E3"]).unwrap().count, &QPoly::q_pow(1) + &QPoly::from_int(-3));
        let bad = ResolveOptions { extra: Some(ExtraBlowup::Generic(9)), ..Default::default() };
        assert!(resolve_state(&f, &bad).is_err());
    }

    #[test]
    fn rational_root_extraction() {
        let p = UPoly::from_coeffs(vec![int(-6), int(1), int(1)]); // (v + 3)(v - 2)
        let (roots, rest) = rational_roots(&p).unwrap();
        assert_eq!(roots, [int(-3), int(2)]);
        assert_eq!(rest.degree(), Some(0));
        let p = UPoly::from_coeffs(vec![int(0), int(-2), int(0), int(1)]); // v (v^2 - 2)
        let (roots, rest) = rational_roots(&p).unwrap();
        assert_eq!(roots, [int(0)]);
        assert_eq!(rest.degree(), Some(2));
        let p = UPoly::from_coeffs(vec![int(1), int(-4), int(4)]); // (2v - 1)^2
        assert_eq!(rational_roots(&p).unwrap().0, [crate::arith::rat(1, 2)]);
    }
}
