//! Laurent polynomials in the symbolic prime `q`, and fractions of them.

use super::{upoly::UPoly, write_term, BigRat};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Element of Q[q, q^-1]. No zero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    terms: BTreeMap<i64, BigRat>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly::default()
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRat) -> Self {
        Self::monomial(c, 0)
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(c.into()))
    }

    /// `c * q^e`.
    pub fn monomial(c: BigRat, e: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        QPoly { terms }
    }

    /// `q^e`.
    pub fn q_pow(e: i64) -> Self {
        Self::monomial(BigRational::one(), e)
    }

    /// `q - 1`.
    pub fn q_minus_one() -> Self {
        Self::q_pow(1) - Self::one()
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, BigRat)>>(it: I) -> Self {
        let mut out = QPoly::zero();
        for (e, c) in it {
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, e: i64, c: BigRat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigRat)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: i64) -> BigRat {
        self.terms.get(&e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// True for `c * q^e` with `c != 0`.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Coefficient of the highest power of q.
    pub fn leading(&self) -> Option<&BigRat> {
        self.terms.values().next_back()
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        QPoly {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        if c.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            terms: self.terms.iter().map(|(e, a)| (*e, a * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = QPoly::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Splits `self = q^shift * poly` with `poly(0) != 0`.
    pub fn to_upoly(&self) -> (i64, UPoly) {
        let Some(lo) = self.min_exp() else {
            return (0, UPoly::zero());
        };
        let hi = self.max_exp().unwrap_or(lo);
        let mut coeffs = vec![BigRational::zero(); (hi - lo) as usize + 1];
        for (e, c) in &self.terms {
            coeffs[(e - lo) as usize] = c.clone();
        }
        (lo, UPoly::from_coeffs(coeffs))
    }

    pub fn from_upoly(p: &UPoly, shift: i64) -> Self {
        QPoly::from_terms(
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(i, c)| (i as i64 + shift, c.clone())),
        )
    }

    /// Evaluates at a nonzero rational.
    pub fn eval(&self, q: &BigRat) -> BigRat {
        assert!(!q.is_zero(), "Laurent polynomial evaluated at 0");
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            acc += c * pow_rat(q, *e);
        }
        acc
    }

    pub fn eval_int(&self, p: u64) -> BigRat {
        self.eval(&BigRational::from_integer(BigInt::from(p)))
    }

    /// Exact quotient in Q[q, q^-1] or `None`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(QPoly::zero());
        }
        let (sa, a) = self.to_upoly();
        let (sb, b) = divisor.to_upoly();
        a.div_exact(&b).map(|q| QPoly::from_upoly(&q, sa - sb))
    }

    /// Serialized form: `[exponent, "rational"]` pairs in descending exponent order.
    pub fn to_pairs(&self) -> Vec<(i64, String)> {
        self.terms
            .iter()
            .rev()
            .map(|(e, c)| (*e, c.to_string()))
            .collect()
    }

    pub fn from_pairs(pairs: &[(i64, String)]) -> Result<Self, String> {
        let mut out = QPoly::zero();
        for (e, s) in pairs {
            let c = super::parse_rat(s).ok_or_else(|| format!("bad rational {s:?}"))?;
            out.add_term(*e, c);
        }
        Ok(out)
    }
}

pub(crate) fn pow_rat(q: &BigRat, e: i64) -> BigRat {
    let base = if e < 0 { q.recip() } else { q.clone() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

impl Serialize for QPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_pairs().serialize(s)
    }
}

impl<'de> Deserialize<'de> for QPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let pairs = Vec::<(i64, String)>::deserialize(d)?;
        QPoly::from_pairs(&pairs).map_err(serde::de::Error::custom)
    }
}

impl Add for &QPoly {
    type Output = QPoly;
    fn add(self, rhs: &QPoly) -> QPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &QPoly {
    type Output = QPoly;
    fn sub(self, rhs: &QPoly) -> QPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c);
        }
        out
    }
}

impl Mul for &QPoly {
    type Output = QPoly;
    fn mul(self, rhs: &QPoly) -> QPoly {
        let mut out = QPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, ca * cb);
            }
        }
        out
    }
}

impl Neg for &QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        QPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QPoly {
            type Output = QPoly;
            fn $m(self, rhs: QPoly) -> QPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QPoly {
    type Output = QPoly;
    fn neg(self) -> QPoly {
        -&self
    }
}

impl fmt::Display for QPoly {
    /// Descending powers of q, e.g. `q^2 - 2*q + 1/2*q^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            write_term(f, c, "q", *e, i == 0)?;
        }
        Ok(())
    }
}

/// Element of Q(q) as a reduced fraction `num / den`; `den` is a monic
/// polynomial with nonzero constant term.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QFrac {
    num: QPoly,
    den: QPoly,
}

impl QFrac {
    pub fn new(num: QPoly, den: QPoly) -> Self {
        assert!(!den.is_zero(), "QFrac with zero denominator");
        if num.is_zero() {
            return QFrac {
                num,
                den: QPoly::one(),
            };
        }
        let (ds, dp) = den.to_upoly();
        let (ns, np) = num.to_upoly();
        let g = np.gcd(&dp);
        let np = np.div_exact(&g).expect("gcd divides");
        let dp = dp.div_exact(&g).expect("gcd divides");
        let lc = dp.leading().expect("nonzero").clone();
        let np = np.scale(&lc.recip());
        let dp = dp.monic();
        QFrac {
            num: QPoly::from_upoly(&np, ns - ds),
            den: QPoly::from_upoly(&dp, 0),
        }
    }

    pub fn from_qpoly(num: QPoly) -> Self {
        QFrac {
            num,
            den: QPoly::one(),
        }
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The Laurent polynomial, when the denominator is trivial.
    pub fn as_qpoly(&self) -> Option<&QPoly> {
        self.den.is_one().then_some(&self.num)
    }

    pub fn add(&self, other: &Self) -> Self {
        QFrac::new(
            &(&self.num * &other.den) + &(&other.num * &self.den),
            &self.den * &other.den,
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        QFrac::new(&self.num * &other.num, &self.den * &other.den)
    }

    /// `None` when the denominator vanishes at `q`.
    pub fn eval(&self, q: &BigRat) -> Option<BigRat> {
        let d = self.den.eval(q);
        (!d.is_zero()).then(|| self.num.eval(q) / d)
    }
}

impl fmt::Display for QFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}
