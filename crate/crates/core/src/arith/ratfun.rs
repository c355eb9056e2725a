//! Rational functions in `t` over Q(q) whose denominators are products of
//! atoms `1 - q^-nu t^n`.
//!
//! Canonical form: the numerator is a polynomial in `t` with Laurent
//! coefficients in `q`, the denominator is `unit * prod(atoms)` where `unit`
//! is a monic polynomial in `q` with nonzero constant term that shares no
//! factor with the numerator content, and no atom divides the numerator.

use super::expr::{parse_expr, ExprValue};
use super::qpoly::{QFrac, QPoly};
use super::upoly::UPoly;
use super::BigRat;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// The factor `1 - q^-nu * t^n`. Ordered by `(n, nu)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub n: u32,
    pub nu: i64,
}

impl Atom {
    pub fn new(n: u32, nu: i64) -> Self {
        assert!(n >= 1, "atom needs a positive t-exponent");
        Atom { n, nu }
    }

    /// Coefficient list in `t`.
    pub fn poly(&self) -> TPoly {
        let mut c = vec![QPoly::zero(); self.n as usize + 1];
        c[0] = QPoly::one();
        c[self.n as usize] = -QPoly::q_pow(-self.nu);
        TPoly::from_coeffs(c)
    }

    fn render(&self, var: &str) -> String {
        let q = match -self.nu {
            0 => String::new(),
            1 => "q*".to_string(),
            e => format!("q^{e}*"),
        };
        let t = if self.n == 1 {
            var.to_string()
        } else {
            format!("{var}^{}", self.n)
        };
        format!("1 - {q}{t}")
    }
}

/// Polynomial in `t` with Laurent-polynomial coefficients; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct TPoly {
    coeffs: Vec<QPoly>,
}

impl TPoly {
    pub fn zero() -> Self {
        TPoly::default()
    }

    pub fn constant(c: QPoly) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<QPoly>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        TPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[QPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> QPoly {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::from_coeffs((0..n).map(|k| &self.coeff(k) + &o.coeff(k)).collect())
    }

    pub fn neg(&self) -> Self {
        TPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![QPoly::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, c: &QPoly) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Exact division; `None` unless `divisor` divides `self` in Q[q,1/q][t].
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let dd = divisor.degree()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return None;
        }
        let lc = &divisor.coeffs[dd];
        let mut quot = vec![QPoly::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            if rem[k + dd].is_zero() {
                continue;
            }
            let c = rem[k + dd].div_exact(lc)?;
            for (j, b) in divisor.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    rem[k + j] = &rem[k + j] - &(&c * b);
                }
            }
            quot[k] = c;
        }
        rem.iter()
            .all(|c| c.is_zero())
            .then(|| Self::from_coeffs(quot))
    }

    /// Substitutes `t := q^k t`.
    pub fn scale_var(&self, k: i64) -> Self {
        TPoly {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c.shift(k * i as i64))
                .collect(),
        }
    }

    fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let first = out.is_empty();
            let tpart = match k {
                0 => None,
                1 => Some(var.to_string()),
                _ => Some(format!("{var}^{k}")),
            };
            if c.is_monomial() {
                let (e, a) = c.terms().next().expect("monomial");
                let neg = a.is_negative();
                let abs = a.abs();
                let mut parts = Vec::new();
                if !abs.is_one() || (e == 0 && k == 0) {
                    parts.push(abs.to_string());
                }
                match e {
                    0 => {}
                    1 => parts.push("q".into()),
                    _ => parts.push(format!("q^{e}")),
                }
                parts.extend(tpart);
                out.push_str(match (first, neg) {
                    (true, true) => "-",
                    (true, false) => "",
                    (false, true) => " - ",
                    (false, false) => " + ",
                });
                out.push_str(&parts.join("*"));
            } else {
                if !first {
                    out.push_str(" + ");
                }
                out.push('(');
                out.push_str(&c.to_string());
                out.push(')');
                if let Some(t) = tpart {
                    out.push('*');
                    out.push_str(&t);
                }
            }
        }
        out
    }
}

/// Unnormalized quotient `num / (unit * prod atoms)`.
#[derive(Clone, Debug, Default)]
pub struct RawRatFun {
    pub num: TPoly,
    pub unit: QPoly,
    pub atoms: Vec<(Atom, u32)>,
}

/// Normalized rational function. See the module docs for the canonical form.
#[derive(Clone, Debug)]
pub struct RatFun {
    num: TPoly,
    unit: QPoly,
    atoms: BTreeMap<Atom, u32>,
}

/// Brings a raw quotient into canonical form.
pub fn ratfun_normalize(raw: RawRatFun) -> Result<RatFun> {
    if raw.unit.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let mut atoms = BTreeMap::new();
    for (a, m) in raw.atoms {
        if m > 0 {
            *atoms.entry(a).or_insert(0) += m;
        }
    }
    Ok(RatFun::normalized(raw.num, raw.unit, atoms))
}

impl RatFun {
    pub fn zero() -> Self {
        RatFun {
            num: TPoly::zero(),
            unit: QPoly::one(),
            atoms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(QPoly::one())
    }

    pub fn constant(c: QPoly) -> Self {
        Self::normalized(TPoly::constant(c), QPoly::one(), BTreeMap::new())
    }

    /// `c * t^k`.
    pub fn monomial(c: QPoly, k: usize) -> Self {
        let mut coeffs = vec![QPoly::zero(); k + 1];
        coeffs[k] = c;
        Self::normalized(TPoly::from_coeffs(coeffs), QPoly::one(), BTreeMap::new())
    }

    pub fn polynomial(num: TPoly) -> Self {
        Self::normalized(num, QPoly::one(), BTreeMap::new())
    }

    /// `1 / atom`.
    pub fn atom_inverse(a: Atom) -> Self {
        let mut atoms = BTreeMap::new();
        atoms.insert(a, 1);
        Self::normalized(TPoly::constant(QPoly::one()), QPoly::one(), atoms)
    }

    pub fn num(&self) -> &TPoly {
        &self.num
    }

    pub fn unit(&self) -> &QPoly {
        &self.unit
    }

    pub fn atoms(&self) -> &BTreeMap<Atom, u32> {
        &self.atoms
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Structural identity of the canonical representations.
    pub fn same_repr(&self, other: &Self) -> bool {
        self.num == other.num && self.unit == other.unit && self.atoms == other.atoms
    }

    fn normalized(mut num: TPoly, unit: QPoly, mut atoms: BTreeMap<Atom, u32>) -> Self {
        debug_assert!(!unit.is_zero());
        if num.is_zero() {
            return RatFun::zero();
        }
        for (a, m) in atoms.iter_mut() {
            let ap = a.poly();
            while *m > 0 {
                match num.div_exact(&ap) {
                    Some(q) => {
                        num = q;
                        *m -= 1;
                    }
                    None => break,
                }
            }
        }
        atoms.retain(|_, m| *m > 0);

        let (shift, mut up) = unit.to_upoly();
        let mut coeffs: Vec<QPoly> = num.coeffs.iter().map(|c| c.shift(-shift)).collect();
        let mut g = up.clone();
        for c in &coeffs {
            if g.is_constant() {
                break;
            }
            if !c.is_zero() {
                g = g.gcd(&c.to_upoly().1);
            }
        }
        if !g.is_constant() {
            up = up.div_exact(&g).expect("gcd divides unit");
            coeffs = coeffs
                .iter()
                .map(|c| {
                    if c.is_zero() {
                        return QPoly::zero();
                    }
                    let (s, p) = c.to_upoly();
                    QPoly::from_upoly(&p.div_exact(&g).expect("gcd divides content"), s)
                })
                .collect();
        }
        let lc_inv = up.leading().expect("nonzero unit").recip();
        let up = up.scale(&lc_inv);
        let coeffs = coeffs.iter().map(|c| c.scale(&lc_inv)).collect();
        RatFun {
            num: TPoly::from_coeffs(coeffs),
            unit: QPoly::from_upoly(&up, 0),
            atoms,
        }
    }

    fn atoms_product(atoms: &BTreeMap<Atom, u32>) -> TPoly {
        let mut p = TPoly::constant(QPoly::one());
        for (a, m) in atoms {
            let ap = a.poly();
            for _ in 0..*m {
                p = p.mul(&ap);
            }
        }
        p
    }

    /// Multiset difference `a - b`.
    fn atoms_minus(a: &BTreeMap<Atom, u32>, b: &BTreeMap<Atom, u32>) -> BTreeMap<Atom, u32> {
        a.iter()
            .filter_map(|(k, m)| {
                let r = m.saturating_sub(*b.get(k).unwrap_or(&0));
                (r > 0).then_some((*k, r))
            })
            .collect()
    }

    fn atoms_lcm(a: &BTreeMap<Atom, u32>, b: &BTreeMap<Atom, u32>) -> BTreeMap<Atom, u32> {
        let mut out = a.clone();
        for (k, m) in b {
            let e = out.entry(*k).or_insert(0);
            *e = (*e).max(*m);
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let common = Self::atoms_lcm(&self.atoms, &o.atoms);
        let fa = Self::atoms_product(&Self::atoms_minus(&common, &self.atoms));
        let fb = Self::atoms_product(&Self::atoms_minus(&common, &o.atoms));
        let num = self
            .num
            .mul(&fa)
            .scale(&o.unit)
            .add(&o.num.mul(&fb).scale(&self.unit));
        Self::normalized(num, &self.unit * &o.unit, common)
    }

    pub fn neg(&self) -> Self {
        RatFun {
            num: self.num.neg(),
            unit: self.unit.clone(),
            atoms: self.atoms.clone(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut atoms = self.atoms.clone();
        for (a, m) in &o.atoms {
            *atoms.entry(*a).or_insert(0) += m;
        }
        Self::normalized(self.num.mul(&o.num), &self.unit * &o.unit, atoms)
    }

    pub fn scale(&self, c: &QPoly) -> Self {
        Self::normalized(self.num.scale(c), self.unit.clone(), self.atoms.clone())
    }

    /// Inverse, defined when the numerator is a Q(q)-multiple of a product
    /// of atoms.
    pub fn try_inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let c0 = self.num.coeff(0);
        if c0.is_zero() {
            return Err(Error::NotInvertible(format!(
                "{} vanishes at t = 0",
                self.num.render("t")
            )));
        }
        let not_inv = || Error::NotInvertible(format!("{} is not a product of atoms", self.num.render("t")));
        let mut rest = TPoly::from_coeffs(
            self.num
                .coeffs
                .iter()
                .map(|c| c.div_exact(&c0).ok_or_else(not_inv))
                .collect::<Result<Vec<_>>>()?,
        );
        let mut atoms: BTreeMap<Atom, u32> = BTreeMap::new();
        while rest.degree().unwrap_or(0) > 0 {
            let (k, ck) = rest
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .find(|(_, c)| !c.is_zero())
                .expect("positive degree");
            let e = ck.max_exp().expect("nonzero");
            let atom = Atom::new(k as u32, -e);
            rest = rest.div_exact(&atom.poly()).ok_or_else(not_inv)?;
            *atoms.entry(atom).or_insert(0) += 1;
        }
        if !rest.coeff(0).is_one() {
            return Err(not_inv());
        }
        let num = Self::atoms_product(&self.atoms).scale(&self.unit);
        Ok(Self::normalized(num, c0, atoms))
    }

    pub fn try_div(&self, o: &Self) -> Result<Self> {
        Ok(self.mul(&o.try_inv()?))
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.try_inv()? } else { self.clone() };
        let mut out = RatFun::one();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        Ok(out)
    }

    /// Substitutes `t := q^k t`; atoms `1 - q^-nu t^n` become
    /// `1 - q^(k n - nu) t^n`.
    pub fn scale_var(&self, k: i64) -> Self {
        let atoms = self
            .atoms
            .iter()
            .map(|(a, m)| (Atom::new(a.n, a.nu - k * a.n as i64), *m))
            .collect();
        Self::normalized(self.num.scale_var(k), self.unit.clone(), atoms)
    }

    /// Value at `t = 0`.
    pub fn value_at_zero(&self) -> QFrac {
        QFrac::new(self.num.coeff(0), self.unit.clone())
    }

    /// Coefficients of `t^0 .. t^order` of the expansion at `t = 0`.
    pub fn series(&self, order: usize) -> Vec<QFrac> {
        let len = order + 1;
        let mut s: Vec<QPoly> = (0..len).map(|k| self.num.coeff(k)).collect();
        for (a, m) in &self.atoms {
            let step = a.n as usize;
            let ratio = QPoly::q_pow(-a.nu);
            for _ in 0..*m {
                // multiply by 1/(1 - ratio t^n): s_k += ratio * s_{k-n}
                for k in step..len {
                    let add = &ratio * &s[k - step];
                    s[k] = &s[k] + &add;
                }
            }
        }
        s.into_iter()
            .map(|c| QFrac::new(c, self.unit.clone()))
            .collect()
    }

    /// Substitutes `q := p`.
    pub fn eval_at_prime(&self, p: u64) -> Result<SpecializedRatFun> {
        if !crate::primes::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let pq = BigRational::from_integer(BigInt::from(p));
        let u = self.unit.eval(&pq);
        if u.is_zero() {
            return Err(Error::BadSpecialization {
                prime: p,
                unit: self.unit.to_string(),
            });
        }
        let num = UPoly::from_coeffs(self.num.coeffs.iter().map(|c| c.eval(&pq)).collect());
        let mut den = UPoly::constant(u);
        for (a, m) in &self.atoms {
            let ap = UPoly::from_coeffs(a.poly().coeffs.iter().map(|c| c.eval(&pq)).collect());
            den = den.mul(&ap.pow(*m));
        }
        Ok(SpecializedRatFun::new(num, den))
    }

    pub fn render(&self, var: &str) -> String {
        let num = self.num.render(var);
        let mut factors = Vec::new();
        if !self.unit.is_one() {
            factors.push(format!("({})", self.unit));
        }
        for (a, m) in &self.atoms {
            if *m == 1 {
                factors.push(format!("({})", a.render(var)));
            } else {
                factors.push(format!("({})^{m}", a.render(var)));
            }
        }
        match factors.len() {
            0 => num,
            1 => format!("({num}) / {}", factors[0]),
            _ => format!("({num}) / ({})", factors.join("*")),
        }
    }

    /// Parses an expression in `q` and `var`; inverse of [`RatFun::render`].
    pub fn parse(s: &str, var: &str) -> Result<Self> {
        let e = parse_expr(s)?;
        if let Some(bad) = find_foreign_var(&e, var) {
            return Err(Error::Parse(format!(
                "unknown variable {bad:?}; expected q or {var}"
            )));
        }
        let v: RatFunIn = e.eval()?;
        Ok(v.0)
    }
}

fn find_foreign_var(e: &super::expr::Expr, var: &str) -> Option<String> {
    use super::expr::Expr::*;
    match e {
        Num(_) => None,
        Var(v) => (v != "q" && v != var).then(|| v.clone()),
        Neg(a) | Pow(a, _) => find_foreign_var(a, var),
        Add(a, b) | Sub(a, b) | Mul(a, b) | Div(a, b) => {
            find_foreign_var(a, var).or_else(|| find_foreign_var(b, var))
        }
    }
}

/// Evaluation target for parsing: any identifier other than `q` is taken to
/// be the series variable; [`RatFun::parse`] rejects foreign names.
struct RatFunIn(RatFun);

impl ExprValue for RatFunIn {
    fn from_int(n: &BigInt) -> Result<Self> {
        Ok(wrap(RatFun::constant(QPoly::constant(
            BigRational::from_integer(n.clone()),
        ))))
    }
    fn from_var(name: &str) -> Result<Self> {
        Ok(wrap(if name == "q" {
            RatFun::constant(QPoly::q_pow(1))
        } else {
            RatFun::monomial(QPoly::one(), 1)
        }))
    }
    fn add(self, rhs: Self) -> Result<Self> {
        Ok(wrap(self.0.add(&rhs.0)))
    }
    fn sub(self, rhs: Self) -> Result<Self> {
        Ok(wrap(self.0.sub(&rhs.0)))
    }
    fn mul(self, rhs: Self) -> Result<Self> {
        Ok(wrap(self.0.mul(&rhs.0)))
    }
    fn div(self, rhs: Self) -> Result<Self> {
        Ok(wrap(self.0.try_div(&rhs.0)?))
    }
    fn neg(self) -> Result<Self> {
        Ok(wrap(self.0.neg()))
    }
    fn pow(self, e: i64) -> Result<Self> {
        Ok(wrap(self.0.pow(e)?))
    }
}

fn wrap(value: RatFun) -> RatFunIn {
    RatFunIn(value)
}

impl PartialEq for RatFun {
    /// Equality of values, by cross-multiplication.
    fn eq(&self, other: &Self) -> bool {
        let fa = Self::atoms_product(&Self::atoms_minus(&other.atoms, &self.atoms));
        let fb = Self::atoms_product(&Self::atoms_minus(&self.atoms, &other.atoms));
        let lhs = self.num.mul(&fa).scale(&other.unit);
        let rhs = other.num.mul(&fb).scale(&self.unit);
        lhs == rhs
    }
}

impl Eq for RatFun {}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("t"))
    }
}

/// Rational function in `t` over Q, obtained by fixing `q` to a prime.
#[derive(Clone, Debug)]
pub struct SpecializedRatFun {
    num: UPoly,
    den: UPoly,
}

impl SpecializedRatFun {
    fn new(num: UPoly, den: UPoly) -> Self {
        // normalize so that the denominator has constant term 1 when possible
        let c = den.coeff(0);
        if c.is_zero() {
            return SpecializedRatFun { num, den };
        }
        let inv = c.recip();
        SpecializedRatFun {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn num(&self) -> &UPoly {
        &self.num
    }

    pub fn den(&self) -> &UPoly {
        &self.den
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    /// Power-series coefficients; requires a nonzero constant term in the
    /// denominator.
    pub fn series(&self, order: usize) -> Vec<BigRat> {
        let d0 = self.den.coeff(0);
        assert!(!d0.is_zero(), "denominator vanishes at t = 0");
        let mut out: Vec<BigRat> = Vec::with_capacity(order + 1);
        for k in 0..=order {
            let mut acc = self.num.coeff(k);
            for j in 1..=k {
                let dj = self.den.coeff(j);
                if !dj.is_zero() {
                    acc -= dj * &out[k - j];
                }
            }
            out.push(acc / &d0);
        }
        out
    }
}

impl PartialEq for SpecializedRatFun {
    fn eq(&self, o: &Self) -> bool {
        self.num.mul(&o.den) == o.num.mul(&self.den)
    }
}

impl fmt::Display for SpecializedRatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let num = self.num.to_string().replace('X', "t");
        if self.den.degree() == Some(0) && self.den.coeff(0).is_one() {
            return write!(f, "{num}");
        }
        let den = self.den.to_string().replace('X', "t");
        write!(f, "({num}) / ({den})")
    }
}
