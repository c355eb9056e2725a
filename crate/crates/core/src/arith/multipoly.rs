//! Multivariate polynomials over Q in variables `x1..xn`.

use super::expr::{parse_expr, ExprValue};
use super::upoly::UPoly;
use super::{write_term, BigRat};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Sparse polynomial. Exponent vectors all have length `nvars`; no zero
/// coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, BigRat>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: BigRat, nvars: usize) -> Self {
        Self::monomial(c, vec![0; nvars])
    }

    pub fn monomial(c: BigRat, exps: Vec<u32>) -> Self {
        let mut p = MultiPoly::zero(exps.len());
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// The coordinate function `x_{i+1}`.
    pub fn var(i: usize, nvars: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(BigRational::one(), e)
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, BigRat)>>(nvars: usize, it: I) -> Self {
        let mut p = MultiPoly::zero(nvars);
        for (e, c) in it {
            assert_eq!(e.len(), nvars);
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigRat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> BigRat {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRat {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    /// Pads with unused variables up to `n`.
    pub fn with_nvars(&self, n: usize) -> Self {
        assert!(n >= self.nvars, "cannot drop variables");
        MultiPoly {
            nvars: n,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    e.resize(n, 0);
                    (e, c.clone())
                })
                .collect(),
        }
    }

    fn aligned(&self, o: &Self) -> (Self, Self) {
        let n = self.nvars.max(o.nvars);
        (self.with_nvars(n), o.with_nvars(n))
    }

    pub fn add(&self, o: &Self) -> Self {
        let (mut a, b) = self.aligned(o);
        for (e, c) in b.terms {
            a.add_term(e, c);
        }
        a
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let (a, b) = self.aligned(o);
        let mut out = MultiPoly::zero(a.nvars);
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = MultiPoly::constant(BigRational::one(), self.nvars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Order of vanishing at the origin (lowest total degree); `None` for 0.
    pub fn order_at_origin(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    /// The homogeneous component of total degree `m`.
    pub fn homogeneous_part(&self, m: u32) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == m)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Lowest exponent of variable `i` over all terms.
    pub fn var_order(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).min()
    }

    /// Divides by `x_i^k`; every term must be divisible.
    pub fn div_var_pow(&self, i: usize, k: u32) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = e.clone();
                    assert!(e[i] >= k, "term not divisible by x{}^{k}", i + 1);
                    e[i] -= k;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            out.add_term(e2, c * BigRational::from_integer(e[i].into()));
        }
        out
    }

    /// Substitutes `x_i := images[i]`; all images share one variable count.
    pub fn compose(&self, images: &[MultiPoly]) -> Self {
        assert_eq!(images.len(), self.nvars);
        let m = images.first().map(|p| p.nvars).unwrap_or(0);
        let mut cache: Vec<Vec<MultiPoly>> = images
            .iter()
            .map(|p| vec![MultiPoly::constant(BigRational::one(), m), p.clone()])
            .collect();
        let mut out = MultiPoly::zero(m);
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(c.clone(), m);
            for (i, &k) in e.iter().enumerate() {
                while cache[i].len() <= k as usize {
                    let next = cache[i].last().expect("seeded").mul(&images[i]);
                    cache[i].push(next);
                }
                term = term.mul(&cache[i][k as usize]);
            }
            out = out.add(&term);
        }
        out
    }

    /// `f(x + c)`.
    pub fn translate(&self, center: &[BigRat]) -> Self {
        let images: Vec<_> = (0..self.nvars)
            .map(|i| {
                MultiPoly::var(i, self.nvars).add(&MultiPoly::constant(center[i].clone(), self.nvars))
            })
            .collect();
        self.compose(&images)
    }

    pub fn eval(&self, point: &[BigRat]) -> BigRat {
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                t *= num_traits::pow(x.clone(), k as usize);
            }
            acc += t;
        }
        acc
    }

    /// Integer coefficients, or `None` if some coefficient is fractional.
    pub fn integer_terms(&self) -> Option<Vec<(Vec<u32>, BigInt)>> {
        self.terms
            .iter()
            .map(|(e, c)| c.is_integer().then(|| (e.clone(), c.to_integer())))
            .collect()
    }

    /// Scales to a primitive polynomial with integer coefficients and a
    /// positive leading coefficient (lex order).
    pub fn primitive_integer(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        use num_integer::Integer;
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .terms
            .values()
            .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let mut g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        if self.terms.values().next_back().is_some_and(|c| c.is_negative()) {
            g = -g;
        }
        let factor = BigRational::new(lcm, g);
        self.scale(&factor)
    }

    /// Exact quotient (lex leading-term division) or `None`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (mut rem, d) = self.aligned(d);
        let (lead_e, lead_c) = d.terms.iter().next_back()?;
        let mut quot = MultiPoly::zero(rem.nvars);
        while let Some((e, c)) = rem.terms.iter().next_back() {
            if !e.iter().zip(lead_e).all(|(a, b)| a >= b) {
                return None;
            }
            let qe: Vec<u32> = e.iter().zip(lead_e).map(|(a, b)| a - b).collect();
            let qc = c / lead_c;
            let t = MultiPoly::monomial(qc, qe);
            rem = rem.sub(&t.mul(&d));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    /// Parses integer/rational coefficient expressions in `x1..xn`, with
    /// `x`, `y`, `z` accepted as aliases of `x1`, `x2`, `x3`.
    pub fn parse(s: &str) -> Result<Self> {
        let e = parse_expr(s)?;
        let v: PolyIn = e.eval()?;
        Ok(v.0)
    }

    pub fn display_with(&self, names: &[&str]) -> String {
        struct D<'a>(&'a MultiPoly, &'a [&'a str]);
        impl fmt::Display for D<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt_with(f, self.1)
            }
        }
        D(self, names).to_string()
    }

    fn fmt_with(&self, f: &mut fmt::Formatter<'_>, names: &[&str]) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(j, &k)| {
                    if k == 1 {
                        names[j].to_string()
                    } else {
                        format!("{}^{k}", names[j])
                    }
                })
                .collect();
            if mono.is_empty() {
                write_term(f, c, "", 0, i == 0)?;
            } else {
                let neg = c.is_negative();
                let abs = c.abs();
                match (i == 0, neg) {
                    (true, true) => write!(f, "-")?,
                    (true, false) => {}
                    (false, true) => write!(f, " - ")?,
                    (false, false) => write!(f, " + ")?,
                }
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write!(f, "{}", mono.join("*"))?;
            }
        }
        Ok(())
    }

    /// Converts a polynomial in `x1, x2` to coefficients in `x1` over Q[x2].
    fn to_nested(&self) -> Vec<UPoly> {
        assert!(self.nvars <= 2, "bivariate routine called with {} variables", self.nvars);
        let p = self.with_nvars(2);
        let dx = p.terms.keys().map(|e| e[0]).max().map_or(0, |d| d as usize + 1);
        let mut rows: Vec<Vec<BigRat>> = vec![Vec::new(); dx];
        for (e, c) in &p.terms {
            let row = &mut rows[e[0] as usize];
            if row.len() <= e[1] as usize {
                row.resize(e[1] as usize + 1, BigRational::zero());
            }
            row[e[1] as usize] = c.clone();
        }
        rows.into_iter().map(UPoly::from_coeffs).collect()
    }

    fn from_nested(rows: &[UPoly]) -> Self {
        let mut out = MultiPoly::zero(2);
        for (i, r) in rows.iter().enumerate() {
            for (j, c) in r.coeffs().iter().enumerate() {
                out.add_term(vec![i as u32, j as u32], c.clone());
            }
        }
        out
    }

    /// Greatest common divisor of two polynomials in at most two variables,
    /// normalized to a monic leading term; `gcd(0, 0) = 0`.
    pub fn gcd2(&self, other: &Self) -> Self {
        let n = self.nvars.max(other.nvars).max(2);
        let a = trim_rows(self.to_nested());
        let b = trim_rows(other.to_nested());
        if a.is_empty() {
            return monic_lex(&MultiPoly::from_nested(&b)).with_nvars(n);
        }
        if b.is_empty() {
            return monic_lex(&MultiPoly::from_nested(&a)).with_nvars(n);
        }
        let (ca, mut pa) = content_split(&a);
        let (cb, mut pb) = content_split(&b);
        let g_cont = ca.gcd(&cb);
        if pa.len() < pb.len() {
            std::mem::swap(&mut pa, &mut pb);
        }
        while !pb.is_empty() {
            let r = trim_rows(pseudo_rem(&pa, &pb));
            pa = pb;
            pb = if r.is_empty() { r } else { content_split(&r).1 };
        }
        let g = if pa.len() <= 1 {
            vec![g_cont]
        } else {
            pa.iter().map(|c| c.mul(&g_cont)).collect()
        };
        monic_lex(&MultiPoly::from_nested(&g)).with_nvars(n)
    }

    /// Squarefree decomposition `f = c * prod A_k^k` of a polynomial in at
    /// most two variables; returns the nonconstant `(A_k, k)`.
    pub fn squarefree_decomposition(&self) -> Vec<(MultiPoly, u32)> {
        let n = self.nvars.max(2);
        let f = self.with_nvars(n);
        let gcd_with_partials = |h: &MultiPoly| {
            h.gcd2(&h.derivative(0)).gcd2(&h.derivative(1))
        };
        let mut out = Vec::new();
        if f.is_constant() {
            return out;
        }
        let mut g_prev = gcd_with_partials(&f);
        let mut r_prev = f.div_exact(&g_prev).expect("gcd divides");
        let mut k = 1;
        while !r_prev.is_constant() {
            let g_next = if g_prev.is_constant() {
                g_prev.clone()
            } else {
                gcd_with_partials(&g_prev)
            };
            let r_next = g_prev.div_exact(&g_next).expect("gcd divides");
            let a_k = r_prev.div_exact(&r_next).expect("nested radicals divide");
            if !a_k.is_constant() {
                out.push((monic_lex(&a_k), k));
            }
            r_prev = r_next;
            g_prev = g_next;
            k += 1;
        }
        out
    }
}

fn trim_rows(mut rows: Vec<UPoly>) -> Vec<UPoly> {
    while rows.last().is_some_and(|r| r.is_zero()) {
        rows.pop();
    }
    rows
}

/// Splits into content (gcd of coefficients in Q[x2]) and primitive part.
fn content_split(rows: &[UPoly]) -> (UPoly, Vec<UPoly>) {
    let c = rows.iter().fold(UPoly::zero(), |acc, r| acc.gcd(r));
    let pp = rows
        .iter()
        .map(|r| r.div_exact(&c).expect("content divides"))
        .collect();
    (c, pp)
}

fn pseudo_rem(a: &[UPoly], b: &[UPoly]) -> Vec<UPoly> {
    let mut r: Vec<UPoly> = a.to_vec();
    let db = b.len() - 1;
    let lb = &b[db];
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = c.mul(lb);
        }
        for (j, bj) in b.iter().enumerate() {
            r[j + shift] = r[j + shift].sub(&bj.mul(&lr));
        }
        r = trim_rows(r);
    }
    r
}

/// Scales so that the lex-leading coefficient is 1.
fn monic_lex(p: &MultiPoly) -> MultiPoly {
    match p.terms.values().next_back() {
        None => p.clone(),
        Some(c) => p.scale(&c.recip()),
    }
}

struct PolyIn(MultiPoly);

fn var_index(name: &str) -> Option<usize> {
    match name {
        "x" => Some(0),
        "y" => Some(1),
        "z" => Some(2),
        _ => {
            let idx: usize = name.strip_prefix('x')?.parse().ok()?;
            (idx >= 1).then(|| idx - 1)
        }
    }
}

impl ExprValue for PolyIn {
    fn from_int(n: &BigInt) -> Result<Self> {
        Ok(PolyIn(MultiPoly::constant(BigRational::from_integer(n.clone()), 0)))
    }
    fn from_var(name: &str) -> Result<Self> {
        let i = var_index(name)
            .ok_or_else(|| Error::Parse(format!("unknown variable {name:?}; use x1..xn or x, y, z")))?;
        Ok(PolyIn(MultiPoly::var(i, i + 1)))
    }
    fn add(self, rhs: Self) -> Result<Self> {
        Ok(PolyIn(self.0.add(&rhs.0)))
    }
    fn sub(self, rhs: Self) -> Result<Self> {
        Ok(PolyIn(self.0.sub(&rhs.0)))
    }
    fn mul(self, rhs: Self) -> Result<Self> {
        Ok(PolyIn(self.0.mul(&rhs.0)))
    }
    fn div(self, rhs: Self) -> Result<Self> {
        if !rhs.0.is_constant() || rhs.0.is_zero() {
            return Err(Error::Parse("polynomials may only be divided by nonzero constants".into()));
        }
        Ok(PolyIn(self.0.scale(&rhs.0.constant_term().recip())))
    }
    fn neg(self) -> Result<Self> {
        Ok(PolyIn(self.0.neg()))
    }
    fn pow(self, e: i64) -> Result<Self> {
        let e = u32::try_from(e)
            .ok()
            .filter(|e| *e <= 4096)
            .ok_or_else(|| Error::Parse(format!("exponent {e} not allowed in a polynomial")))?;
        Ok(PolyIn(self.0.pow(e)))
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.nvars).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        self.fmt_with(f, &refs)
    }
}
