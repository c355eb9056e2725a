//! Counting solutions of `f ≡ 0 mod p^(d+1)` that reduce to the origin mod p.
//!
//! Two independent routes: exhaustive enumeration of `(pZ/p^(d+1)Z)^n` and
//! level-by-level lifting of the solution set. They must agree exactly.

use crate::arith::MultiPoly;
use crate::error::{Error, Result};
use crate::primes::is_prime;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;

pub const DEFAULT_NAIVE_BUDGET: u64 = 1_000_000_000;
pub const DEFAULT_LIFTING_BUDGET: u64 = 100_000_000;

#[derive(Clone, Debug)]
pub struct CountQuery {
    f: MultiPoly,
    int_terms: Vec<(Vec<u32>, BigInt)>,
    p: u64,
    dmax: u32,
}

impl CountQuery {
    pub fn new(f: MultiPoly, p: u64, dmax: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if f.is_constant() {
            return Err(Error::InvalidQuery("f is constant".into()));
        }
        if !f.constant_term().is_zero() {
            return Err(Error::InvalidQuery(format!("f(0) = {} is not zero", f.constant_term())));
        }
        let int_terms = f
            .integer_terms()
            .ok_or_else(|| Error::InvalidQuery("f must have integer coefficients".into()))?;
        Ok(CountQuery {
            f,
            int_terms,
            p,
            dmax,
        })
    }

    pub fn f(&self) -> &MultiPoly {
        &self.f
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dmax(&self) -> u32 {
        self.dmax
    }

    pub fn n(&self) -> usize {
        self.f.nvars()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Naive,
    Lifting,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Method::Naive),
            "lifting" => Ok(Method::Lifting),
            other => Err(Error::Parse(format!("unknown method {other:?}"))),
        }
    }
}

/// Which residue representation to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ArithMode {
    /// Machine words whenever the modulus fits, big integers otherwise.
    #[default]
    Auto,
    /// Always big integers.
    Big,
}

#[derive(Clone, Copy, Debug)]
pub struct CountOptions {
    pub naive_budget: u64,
    pub lifting_budget: u64,
    pub arith: ArithMode,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions {
            naive_budget: DEFAULT_NAIVE_BUDGET,
            lifting_budget: DEFAULT_LIFTING_BUDGET,
            arith: ArithMode::Auto,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountTable {
    #[serde(serialize_with = "decimal_list")]
    pub counts: Vec<BigUint>,
    pub method: Method,
}

// Counts outgrow JSON numbers quickly, so they are written as decimal strings.
fn decimal_list<S: serde::Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| c.to_string()))
}

impl fmt::Display for CountTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:>4}  N(d)", "d")?;
        for (d, c) in self.counts.iter().enumerate() {
            writeln!(f, "{d:>4}  {c}")?;
        }
        Ok(())
    }
}

/// Truncated generating series `sum N(d) T^d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TruncatedSeries {
    #[serde(serialize_with = "decimal_list")]
    pub coeffs: Vec<BigUint>,
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (d, c.is_one()) {
                (0, _) => write!(f, "{c}")?,
                (1, true) => write!(f, "T")?,
                (1, false) => write!(f, "{c}*T")?,
                (_, true) => write!(f, "T^{d}")?,
                (_, false) => write!(f, "{c}*T^{d}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

pub fn poincare_truncated(t: &CountTable) -> TruncatedSeries {
    TruncatedSeries {
        coeffs: t.counts.clone(),
    }
}

/// Residues modulo a fixed modulus.
trait ModRing: Sync {
    type E: Clone + Send + Sync;
    fn reduce(&self, c: &BigInt) -> Self::E;
    fn from_u64(&self, v: u64) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn zero(&self) -> Self::E;
    /// `a + b * c` without reduction; callers keep it below the modulus.
    fn lift(&self, a: &Self::E, b: &Self::E, c: u64) -> Self::E;
    /// `(a / b) mod p` with integer division of representatives.
    fn digit(&self, a: &Self::E, b: &Self::E, p: u64) -> u64;
}

struct WordRing {
    m: u64,
}

impl WordRing {
    fn fits(m: &BigUint) -> Option<u64> {
        m.to_u64().filter(|v| *v <= u64::MAX >> 1)
    }
}

impl ModRing for WordRing {
    type E = u64;
    fn reduce(&self, c: &BigInt) -> u64 {
        c.mod_floor(&BigInt::from(self.m)).to_u64().expect("reduced")
    }
    fn from_u64(&self, v: u64) -> u64 {
        v % self.m
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.m {
            s - self.m
        } else {
            s
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.m as u128) as u64
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn zero(&self) -> u64 {
        0
    }
    fn lift(&self, a: &u64, b: &u64, c: u64) -> u64 {
        a + b * c
    }
    fn digit(&self, a: &u64, b: &u64, p: u64) -> u64 {
        (a / b) % p
    }
}

struct BigRing {
    m: BigUint,
    m_int: BigInt,
}

impl BigRing {
    fn new(m: BigUint) -> Self {
        BigRing {
            m_int: BigInt::from(m.clone()),
            m,
        }
    }
}

impl ModRing for BigRing {
    type E = BigUint;
    fn reduce(&self, c: &BigInt) -> BigUint {
        c.mod_floor(&self.m_int).to_biguint().expect("reduced")
    }
    fn from_u64(&self, v: u64) -> BigUint {
        BigUint::from(v) % &self.m
    }
    fn add(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a + b) % &self.m
    }
    fn mul(&self, a: &BigUint, b: &BigUint) -> BigUint {
        (a * b) % &self.m
    }
    fn is_zero(&self, a: &BigUint) -> bool {
        a.is_zero()
    }
    fn zero(&self) -> BigUint {
        BigUint::zero()
    }
    fn lift(&self, a: &BigUint, b: &BigUint, c: u64) -> BigUint {
        a + b * c
    }
    fn digit(&self, a: &BigUint, b: &BigUint, p: u64) -> u64 {
        ((a / b) % p).to_u64().expect("digit")
    }
}

/// Nested Horner form: `sum_k coeffs[k] * x_var^k` with coefficients in the
/// remaining variables.
enum Horner<E> {
    Const(E),
    Poly { var: usize, coeffs: Vec<Horner<E>> },
}

impl<E: Clone> Horner<E> {
    fn compile<R: ModRing<E = E>>(ring: &R, terms: &[(Vec<u32>, BigInt)], var: usize, n: usize) -> Self {
        if var == n {
            let sum = terms.iter().fold(BigInt::zero(), |acc, (_, c)| acc + c);
            return Horner::Const(ring.reduce(&sum));
        }
        let deg = terms.iter().map(|(e, _)| e[var]).max().unwrap_or(0) as usize;
        if deg == 0 {
            return Self::compile(ring, terms, var + 1, n);
        }
        let mut buckets: Vec<Vec<(Vec<u32>, BigInt)>> = vec![Vec::new(); deg + 1];
        for t in terms {
            buckets[t.0[var] as usize].push(t.clone());
        }
        Horner::Poly {
            var,
            coeffs: buckets
                .iter()
                .map(|b| Self::compile(ring, b, var + 1, n))
                .collect(),
        }
    }

    fn eval<R: ModRing<E = E>>(&self, ring: &R, x: &[E]) -> E {
        match self {
            Horner::Const(c) => c.clone(),
            Horner::Poly { var, coeffs } => {
                let xv = &x[*var];
                let mut acc = ring.zero();
                for c in coeffs.iter().rev() {
                    acc = ring.add(&ring.mul(&acc, xv), &c.eval(ring, x));
                }
                acc
            }
        }
    }
}

fn pow_big(p: u64, e: u32) -> BigUint {
    num_traits::pow(BigUint::from(p), e as usize)
}

/// Exhaustive enumeration of `(pZ/p^(d+1)Z)^n` for every level `d`.
pub fn count_naive(q: &CountQuery, opts: &CountOptions) -> Result<CountTable> {
    let n = q.n() as u32;
    let needed: BigUint = (0..=q.dmax).map(|d| pow_big(q.p, n * d)).sum();
    if needed > BigUint::from(opts.naive_budget) {
        return Err(Error::NaiveBudget {
            needed: needed.to_string(),
            budget: opts.naive_budget,
        });
    }
    let mut counts = Vec::with_capacity(q.dmax as usize + 1);
    for d in 0..=q.dmax {
        let m = pow_big(q.p, d + 1);
        let c = match (opts.arith, WordRing::fits(&m)) {
            (ArithMode::Auto, Some(m)) => naive_level(&WordRing { m }, q, d),
            _ => naive_level(&BigRing::new(m), q, d),
        };
        counts.push(BigUint::from(c));
    }
    Ok(CountTable {
        counts,
        method: Method::Naive,
    })
}

fn naive_level<R: ModRing>(ring: &R, q: &CountQuery, d: u32) -> u64 {
    let n = q.n();
    let h = Horner::compile(ring, &q.int_terms, 0, n);
    // coordinates are p*y with 0 <= y < p^d
    let side = num_traits::pow(q.p, d as usize);
    let p_e = ring.from_u64(q.p);
    let count_slice = |y0: u64| -> u64 {
        let mut ys = vec![0u64; n];
        ys[0] = y0;
        let mut x: Vec<R::E> = ys.iter().map(|&y| ring.mul(&p_e, &ring.from_u64(y))).collect();
        let mut count = 0u64;
        loop {
            if ring.is_zero(&h.eval(ring, &x)) {
                count += 1;
            }
            // lexicographic odometer over coordinates 1..n
            let mut i = n;
            loop {
                if i == 1 {
                    return count;
                }
                i -= 1;
                ys[i] += 1;
                if ys[i] < side {
                    x[i] = ring.mul(&p_e, &ring.from_u64(ys[i]));
                    break;
                }
                ys[i] = 0;
                x[i] = ring.zero();
            }
        }
    };
    if n == 0 {
        return 0;
    }
    (0..side).into_par_iter().map(count_slice).sum()
}

/// Level-by-level lifting of the solution set.
///
/// A solution `x` mod `p^(d+1)` has lifts `x + p^(d+1) k`, `k` in
/// `[0,p)^n`, and `f(x + p^(d+1) k) ≡ f(x) + p^(d+1) ∇f(0)·k (mod p^(d+2))`
/// since `x ≡ 0 mod p`. So either the gradient at the origin is nonzero mod
/// `p` and exactly `p^(n-1)` lifts survive, or all `p^n` lifts survive when
/// `p^(d+2) | f(x)` and none otherwise.
pub fn count_lifting(q: &CountQuery, opts: &CountOptions) -> Result<CountTable> {
    let m = pow_big(q.p, q.dmax + 1);
    match (opts.arith, WordRing::fits(&m)) {
        (ArithMode::Auto, Some(_)) => lifting_run(q, opts, |k| WordRing {
            m: num_traits::pow(q.p, k as usize),
        }),
        _ => lifting_run(q, opts, |k| BigRing::new(pow_big(q.p, k))),
    }
}

fn lifting_run<R: ModRing, F: Fn(u32) -> R>(
    q: &CountQuery,
    opts: &CountOptions,
    ring_for: F,
) -> Result<CountTable> {
    let n = q.n();
    let p = q.p;
    let gradient: Vec<u64> = (0..n)
        .map(|i| {
            let mut e = vec![0u32; n];
            e[i] = 1;
            q.int_terms
                .iter()
                .find(|(te, _)| *te == e)
                .map(|(_, c)| c.mod_floor(&BigInt::from(p)).to_u64().expect("small"))
                .unwrap_or(0)
        })
        .collect();
    let smooth = gradient.iter().any(|g| *g != 0);

    let mut counts = vec![BigUint::one()];
    // packed residue vectors, stride n, each entry < p^(d+1)
    let ring0 = ring_for(1);
    let mut level: Vec<R::E> = vec![ring0.zero(); n];
    let pn = num_traits::pow(BigUint::from(p), n);
    let pn1 = num_traits::pow(BigUint::from(p), n - 1);
    for d in 0..q.dmax {
        let next_ring = ring_for(d + 2);
        let h = Horner::compile(&next_ring, &q.int_terms, 0, n);
        let last = d + 1 == q.dmax;
        let mut total = BigUint::zero();
        let mut next: Vec<R::E> = Vec::new();
        let mut next_live = 0u64;
        let pk = {
            let r = &next_ring;
            // p^(d+1) as a residue mod p^(d+2)
            let mut acc = r.from_u64(1);
            let pe = r.from_u64(p);
            for _ in 0..=d {
                acc = r.mul(&acc, &pe);
            }
            acc
        };
        for x in level.chunks(n) {
            let alive = smooth || next_ring.is_zero(&h.eval(&next_ring, x));
            if !alive {
                continue;
            }
            let children = if smooth { &pn1 } else { &pn };
            total += children;
            if last {
                continue;
            }
            next_live += children.to_u64().unwrap_or(u64::MAX);
            if next_live > opts.lifting_budget {
                return Err(Error::LiftingBudget {
                    level: d + 1,
                    stored: next_live,
                    budget: opts.lifting_budget,
                });
            }
            if smooth {
                let fx = h.eval(&next_ring, x);
                push_smooth_children(&next_ring, x, &fx, &pk, &gradient, p, &mut next);
            } else {
                push_all_children(&next_ring, x, &pk, p, &mut next);
            }
        }
        counts.push(total);
        level = next;
    }
    Ok(CountTable {
        counts,
        method: Method::Lifting,
    })
}

fn for_each_digit_vector(n: usize, p: u64, mut f: impl FnMut(&[u64])) {
    let mut k = vec![0u64; n];
    loop {
        f(&k);
        let mut i = n;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            k[i] += 1;
            if k[i] < p {
                break;
            }
            k[i] = 0;
        }
    }
}

fn push_all_children<R: ModRing>(ring: &R, x: &[R::E], pk: &R::E, p: u64, out: &mut Vec<R::E>) {
    for_each_digit_vector(x.len(), p, |k| {
        for (xi, ki) in x.iter().zip(k) {
            out.push(ring.lift(xi, pk, *ki));
        }
    });
}

/// Children of `x` solving `f(x)/p^(d+1) + g·k ≡ 0 (mod p)` with `g ≠ 0`.
fn push_smooth_children<R: ModRing>(
    ring: &R,
    x: &[R::E],
    fx: &R::E,
    pk: &R::E,
    g: &[u64],
    p: u64,
    out: &mut Vec<R::E>,
) {
    let n = x.len();
    // f(x) = c * p^(d+1) mod p^(d+2)
    let c = ring.digit(fx, pk, p);
    let j = g.iter().rposition(|v| *v != 0).expect("nonzero gradient");
    let inv = mod_inverse(g[j], p);
    let free: Vec<usize> = (0..n).filter(|&i| i != j).collect();
    for_each_digit_vector(free.len(), p, |ks| {
        let mut rhs = (p - c % p) % p;
        for (idx, &i) in free.iter().enumerate() {
            rhs = (rhs + p - (g[i] * ks[idx]) % p) % p;
        }
        let kj = (rhs * inv) % p;
        let mut it = ks.iter();
        for i in 0..n {
            let ki = if i == j { kj } else { *it.next().expect("free digit") };
            out.push(ring.lift(&x[i], pk, ki));
        }
    });
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    let e = BigInt::from(a).extended_gcd(&BigInt::from(p));
    e.x.mod_floor(&BigInt::from(p)).to_u64().expect("small")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn counts(f: &str, p: u64, dmax: u32, m: Method) -> Vec<u64> {
        let q = CountQuery::new(MultiPoly::parse(f).unwrap(), p, dmax).unwrap();
        let opts = CountOptions::default();
        let t = match m {
            Method::Naive => count_naive(&q, &opts),
            Method::Lifting => count_lifting(&q, &opts),
        }
        .unwrap();
        assert_eq!(t.method, m);
        t.counts.iter().map(|c| c.to_u64().unwrap()).collect()
    }

    #[test]
    fn linear_form_has_one_solution_per_level() {
        for p in [2, 3, 5] {
            assert_eq!(counts("x", p, 3, Method::Naive), [1, 1, 1, 1]);
        }
        assert_eq!(counts("x", 7, 5, Method::Lifting), [1; 6]);
    }

    #[test]
    fn cusp_small_levels() {
        // hand count: x = 5a, y = 5b; mod 25 everything solves, mod 125 only 5 | a
        assert_eq!(counts("x^2 - y^3", 5, 2, Method::Naive), [1, 25, 125]);
        assert_eq!(
            counts("x^2 - y^3", 5, 4, Method::Lifting),
            counts("x^2 - y^3", 5, 4, Method::Naive)
        );
    }

    #[test]
    fn coordinate_axes_mod_nine() {
        assert_eq!(counts("x*y", 3, 1, Method::Naive), [1, 9]);
    }

    #[test]
    fn smooth_point_hensel_law() {
        assert_eq!(counts("x + y^2", 3, 3, Method::Lifting), [1, 3, 9, 27]);
        assert_eq!(counts("x + y^2", 3, 3, Method::Naive), [1, 3, 9, 27]);
    }

    #[test]
    fn query_validation() {
        let f = MultiPoly::parse("x + 1").unwrap();
        assert!(matches!(CountQuery::new(f, 5, 2), Err(Error::InvalidQuery(_))));
        let f = MultiPoly::parse("x/2").unwrap();
        assert!(matches!(CountQuery::new(f, 5, 2), Err(Error::InvalidQuery(_))));
        let f = MultiPoly::parse("x").unwrap();
        assert!(matches!(CountQuery::new(f, 6, 2), Err(Error::NotPrime(6))));
        let f = MultiPoly::parse("3").unwrap();
        assert!(CountQuery::new(f, 5, 2).is_err());
    }

    #[test]
    fn budgets_are_enforced() {
        let q = CountQuery::new(MultiPoly::parse("x*y*z").unwrap(), 7, 6).unwrap();
        let opts = CountOptions {
            naive_budget: 1000,
            lifting_budget: 50,
            ..Default::default()
        };
        assert!(matches!(count_naive(&q, &opts), Err(Error::NaiveBudget { .. })));
        match count_lifting(&q, &opts) {
            Err(Error::LiftingBudget { level, .. }) => assert!(level >= 1),
            other => panic!("expected lifting budget error, got {other:?}"),
        }
    }

    #[test]
    fn big_and_word_residues_agree() {
        let q = CountQuery::new(MultiPoly::parse("x^2 - y^3 + 3x*y^2").unwrap(), 3, 4).unwrap();
        let word = CountOptions::default();
        let big = CountOptions {
            arith: ArithMode::Big,
            ..Default::default()
        };
        assert_eq!(count_naive(&q, &word).unwrap(), count_naive(&q, &big).unwrap());
        assert_eq!(count_lifting(&q, &word).unwrap(), count_lifting(&q, &big).unwrap());
    }

    #[test]
    fn horner_agrees_at_the_word_boundary() {
        // the largest modulus handled with machine words, and one above it
        let f = MultiPoly::parse("7x^5 - 3x^2*y^3 + 11y^7 - 2x*y + 5y").unwrap();
        let terms = f.integer_terms().unwrap();
        let word_max = (u64::MAX >> 1) - 24;
        let wr = WordRing { m: word_max };
        let br = BigRing::new(BigUint::from(word_max));
        let hw = Horner::compile(&wr, &terms, 0, 2);
        let hb = Horner::compile(&br, &terms, 0, 2);
        for (a, b) in [(word_max - 1, word_max - 2), (1 << 62, 3), (123_456_789_012_345, word_max / 3)] {
            let w = hw.eval(&wr, &[a, b]);
            let big = hb.eval(&br, &[BigUint::from(a), BigUint::from(b)]);
            assert_eq!(BigUint::from(w), big);
        }
        assert!(WordRing::fits(&BigUint::from(u64::MAX >> 1)).is_some());
        assert!(WordRing::fits(&(BigUint::from(u64::MAX >> 1) + 1u32)).is_none());
    }

    #[test]
    fn lifting_crosses_into_big_integers() {
        // 3^41 > 2^63 forces the big-integer path
        let q = CountQuery::new(MultiPoly::parse("x - x^2").unwrap(), 3, 40).unwrap();
        let t = count_lifting(&q, &CountOptions::default()).unwrap();
        assert!(t.counts.iter().all(|c| c.is_one()));
    }

    #[test]
    fn series_display() {
        let t = CountTable {
            counts: vec![1u32, 1, 1, 1].into_iter().map(BigUint::from).collect(),
            method: Method::Naive,
        };
        assert_eq!(poincare_truncated(&t).to_string(), "1 + T + T^2 + T^3");
    }

    fn small_poly() -> impl Strategy<Value = (String, usize)> {
        (1usize..=2).prop_flat_map(|n| {
            let mono = (-3i64..=3, prop::collection::vec(0u32..=3, n));
            prop::collection::vec(mono, 1..4).prop_map(move |ts| {
                let vars = ["x", "y"];
                let mut parts = Vec::new();
                for (c, e) in ts {
                    if e.iter().all(|k| *k == 0) || c == 0 {
                        continue;
                    }
                    let mono: Vec<String> = e
                        .iter()
                        .enumerate()
                        .map(|(i, k)| format!("{}^{k}", vars[i]))
                        .collect();
                    parts.push(format!("({c})*{}", mono.join("*")));
                }
                if parts.is_empty() {
                    parts.push(format!("{}", vars[n - 1]));
                }
                (parts.join(" + "), n)
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn naive_equals_lifting((f, _n) in small_poly(), p in prop::sample::select(vec![2u64, 3, 5]), dmax in 0u32..=3) {
            let poly = MultiPoly::parse(&f).unwrap();
            prop_assume!(!poly.is_constant());
            let q = CountQuery::new(poly, p, dmax).unwrap();
            let opts = CountOptions::default();
            let a = count_naive(&q, &opts).unwrap();
            let b = count_lifting(&q, &opts).unwrap();
            prop_assert_eq!(&a.counts, &b.counts);
            prop_assert!(a.counts[0].is_one());
            let pn = num_traits::pow(BigUint::from(p), q.n());
            for d in 1..a.counts.len() {
                prop_assert!(a.counts[d] <= &a.counts[d - 1] * &pn);
            }
        }

        #[test]
        fn unit_scaling_leaves_counts_unchanged((f, _n) in small_poly(), c in prop::sample::select(vec![2i64, -1, 4])) {
            let poly = MultiPoly::parse(&f).unwrap();
            prop_assume!(!poly.is_constant());
            let p = 3;
            let scaled = poly.scale(&crate::arith::int(c));
            let opts = CountOptions::default();
            let a = count_lifting(&CountQuery::new(poly, p, 3).unwrap(), &opts).unwrap();
            let b = count_lifting(&CountQuery::new(scaled, p, 3).unwrap(), &opts).unwrap();
            prop_assert_eq!(a.counts, b.counts);
        }
    }
}
