//! Denef's formula, the monomial closed form and the passage between the zeta
//! function `Z(t)`, `t = p^-s`, and the Poincaré series `P(T)` of the counts.
//!
//! With `T = q^-n t` the two are related by `P(T) (1 - t) = 1 - q^n Z(t)`.

use crate::arith::{Atom, BigRat, QPoly, RatFun};
use crate::count::{count_lifting, CountOptions, CountQuery};
use crate::datum::ResolutionDatum;
use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint};
use serde::Serialize;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaResult {
    pub zeta: RatFun,
    pub source: String,
}

impl fmt::Display for ZetaResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.zeta.render("t"))
    }
}

/// `(q - 1) q^-nu t^N / (1 - q^-nu t^N)`, the contribution of one divisor.
fn divisor_factor(n: u32, nu: i64) -> RatFun {
    RatFun::monomial(&QPoly::q_minus_one() * &QPoly::q_pow(-nu), n as usize).mul(&RatFun::atom_inverse(Atom::new(n, nu)))
}

pub fn denef_zeta(d: &ResolutionDatum) -> Result<ZetaResult> {
    d.ensure_valid()?;
    let mut z = RatFun::zero();
    for s in d.strata.iter().filter(|s| !s.count.is_zero()) {
        let mut term = RatFun::constant(s.count.clone());
        for id in &s.j {
            let c = d.component(id).expect("validated");
            term = term.mul(&divisor_factor(c.n, c.nu as i64));
        }
        z = z.add(&term);
    }
    Ok(ZetaResult { zeta: z.scale(&QPoly::q_pow(-(d.n as i64))), source: "denef".into() })
}

/// Zeta function of `x1^a1 ... xn^an` on `(pZ_p)^n`, a product of one-variable
/// integrals `(1 - q^-1) q^-1 t^a / (1 - q^-1 t^a)`.
pub fn monomial_zeta(exps: &[u32]) -> Result<ZetaResult> {
    if exps.is_empty() {
        return Err(Error::InvalidQuery("monomial needs at least one exponent".into()));
    }
    if exps.contains(&0) {
        return Err(Error::InvalidQuery("monomial exponents must be positive; drop constant factors".into()));
    }
    let z = exps
        .iter()
        .fold(RatFun::one(), |acc, a| acc.mul(&divisor_factor(*a, 1).scale(&QPoly::q_pow(-1))));
    let list: Vec<String> = exps.iter().map(u32::to_string).collect();
    Ok(ZetaResult { zeta: z, source: format!("monomial({})", list.join(",")) })
}

/// `P(T)` from `Z(t)`. The result is written in the variable `T`.
pub fn zeta_to_poincare(z: &ZetaResult, n: usize) -> Result<RatFun> {
    if z.zeta.is_zero() {
        return Err(Error::InvalidZeta("Z = 0 would give N(0) = 0".into()));
    }
    if !z.zeta.value_at_zero().is_zero() {
        return Err(Error::InvalidZeta("Z(0) must vanish for N(0) = 1".into()));
    }
    let n = n as i64;
    let w = RatFun::one().sub(&z.zeta.scale(&QPoly::q_pow(n)));
    Ok(w.mul(&RatFun::atom_inverse(Atom::new(1, 0))).scale_var(n))
}

/// Inverse of [`zeta_to_poincare`].
pub fn poincare_to_zeta(p: &RatFun, n: usize) -> Result<ZetaResult> {
    let n = n as i64;
    let w = p.scale_var(-n);
    let one_minus_t = RatFun::polynomial(Atom::new(1, 0).poly());
    let z = RatFun::one().sub(&one_minus_t.mul(&w)).scale(&QPoly::q_pow(-n));
    Ok(ZetaResult { zeta: z, source: "poincare".into() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub prime: u64,
    pub dmax: u32,
    #[serde(serialize_with = "decimal_rats")]
    pub predicted: Vec<BigRat>,
    #[serde(serialize_with = "decimal_ints")]
    pub counted: Vec<BigUint>,
    /// First level where the two disagree.
    pub mismatch: Option<usize>,
}

fn decimal_rats<S: serde::Serializer>(v: &[BigRat], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| c.to_string()))
}

fn decimal_ints<S: serde::Serializer>(v: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|c| c.to_string()))
}

impl Verdict {
    pub fn success(&self) -> bool {
        self.mismatch.is_none()
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.mismatch {
            None => writeln!(f, "p = {}: counts agree with the formula up to d = {}", self.prime, self.dmax)?,
            Some(d) => writeln!(
                f,
                "p = {}: mismatch at d = {d}: formula {} vs count {}",
                self.prime, self.predicted[d], self.counted[d]
            )?,
        }
        Ok(())
    }
}

/// Compares the series predicted by the datum with lifted congruence counts.
pub fn verify_against_counts(d: &ResolutionDatum, p: u64, dmax: u32, opts: &CountOptions) -> Result<Verdict> {
    if d.bad_primes.contains(&p) {
        return Err(Error::BadPrime(p));
    }
    let f = d
        .polynomial()?
        .ok_or_else(|| Error::Precondition("datum carries no polynomial f to count".into()))?;
    let z = denef_zeta(d)?;
    let predicted = zeta_to_poincare(&z, d.n)?.eval_at_prime(p)?.series(dmax as usize);
    let counted = count_lifting(&CountQuery::new(f, p, dmax)?, opts)?.counts;
    let mismatch = predicted
        .iter()
        .zip(&counted)
        .position(|(a, b)| *a != BigRat::from_integer(BigInt::from(b.clone())));
    Ok(Verdict { prime: p, dmax, predicted, counted, mismatch })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, QFrac};
    use crate::datum::datum_builtin;
    use proptest::prelude::*;

    fn rf(s: &str) -> RatFun {
        RatFun::parse(s, "t").unwrap()
    }

    #[test]
    fn cusp_matches_displayed_formula() {
        let z = denef_zeta(&datum_builtin("cusp").unwrap()).unwrap();
        let lhs = z.zeta.mul(&rf("(q - 1)/q^2").try_inv().unwrap());
        let a1 = "q^-1 t / (1 - q^-1 t)";
        let a2 = "q^-2 t^2 / (1 - q^-2 t^2)";
        let a3 = "q^-3 t^3 / (1 - q^-3 t^3)";
        let a6 = "q^-5 t^6 / (1 - q^-5 t^6)";
        let rhs = rf(&format!("q ({a2}) + q ({a3}) + (q - 2)({a6}) + (q - 1)({a6})(({a1}) + ({a2}) + ({a3}))"));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn smooth_line_is_monomial() {
        let z = denef_zeta(&datum_builtin("smooth-line").unwrap()).unwrap();
        assert_eq!(z.zeta, rf("(1 - q^-1) q^-1 t / (1 - q^-1 t)"));
        assert_eq!(z.zeta, monomial_zeta(&[1]).unwrap().zeta);
    }

    #[test]
    fn coordinate_axes_is_a_product() {
        let z = denef_zeta(&datum_builtin("coordinate-axes").unwrap()).unwrap();
        let one = monomial_zeta(&[1]).unwrap().zeta;
        assert_eq!(z.zeta, one.mul(&one));
        assert_eq!(z.zeta, monomial_zeta(&[1, 1]).unwrap().zeta);
    }

    #[test]
    fn monomial_closed_forms() {
        assert_eq!(monomial_zeta(&[2]).unwrap().zeta, rf("(1 - q^-1) q^-1 t^2 / (1 - q^-1 t^2)"));
        assert!(monomial_zeta(&[1, 0]).is_err());
        assert!(monomial_zeta(&[]).is_err());
        // geometric series: the coefficient of t^(ak) is q^-k (1 - q^-1)
        let s = monomial_zeta(&[3]).unwrap().zeta.series(9);
        for (i, c) in s.iter().enumerate() {
            let want = if i > 0 && i % 3 == 0 {
                &QPoly::q_pow(-(i as i64 / 3)) - &QPoly::q_pow(-(i as i64 / 3) - 1)
            } else {
                QPoly::zero()
            };
            assert_eq!(*c, QFrac::from_qpoly(want), "t^{i}");
        }
    }

    #[test]
    fn monomial_datum_agrees_with_closed_form() {
        for exps in [vec![2, 3], vec![1, 1, 1], vec![4], vec![1, 2, 2]] {
            let name = format!("monomial({})", exps.iter().map(u32::to_string).collect::<Vec<_>>().join(","));
            let z = denef_zeta(&datum_builtin(&name).unwrap()).unwrap();
            assert_eq!(z.zeta, monomial_zeta(&exps).unwrap().zeta, "{name}");
        }
    }

    #[test]
    fn atoms_come_from_components() {
        let d = datum_builtin("cusp").unwrap();
        let z = denef_zeta(&d).unwrap();
        for a in z.zeta.atoms().keys() {
            assert!(d.components.iter().any(|c| (c.n, c.nu as i64) == (a.n, a.nu)), "{a:?}");
        }
    }

    #[test]
    fn smooth_poincare_series() {
        let z = monomial_zeta(&[1]).unwrap();
        assert_eq!(zeta_to_poincare(&z, 1).unwrap(), RatFun::parse("1/(1 - T)", "T").unwrap());
        let z = denef_zeta(&datum_builtin("smooth-line(3)").unwrap()).unwrap();
        assert_eq!(zeta_to_poincare(&z, 3).unwrap(), RatFun::parse("1/(1 - q^2 T)", "T").unwrap());
    }

    #[test]
    fn cusp_poincare_series() {
        let z = denef_zeta(&datum_builtin("cusp").unwrap()).unwrap();
        let p = zeta_to_poincare(&z, 2).unwrap();
        // the displayed series is P(q^-2 T)
        let shown = RatFun::parse(
            "(1 + (1 - q^-1) T + (q^-3 - q^-4) T^5 - q^-5 T^6) / ((1 - q^-1 T)(1 - q^-5 T^6))",
            "T",
        )
        .unwrap();
        assert_eq!(p.scale_var(-2), shown);
        let s: Vec<QFrac> = shown.series(2);
        assert_eq!(s, [QFrac::from_qpoly(QPoly::one()), QFrac::from_qpoly(QPoly::one()), QFrac::from_qpoly(QPoly::q_pow(-1))]);
    }

    #[test]
    fn degenerate_zeta_is_rejected() {
        let zero = ZetaResult { zeta: RatFun::zero(), source: "test".into() };
        assert!(matches!(zeta_to_poincare(&zero, 2), Err(Error::InvalidZeta(_))));
        let c = ZetaResult { zeta: RatFun::one(), source: "test".into() };
        assert!(matches!(zeta_to_poincare(&c, 2), Err(Error::InvalidZeta(_))));
    }

    #[test]
    fn verification_against_counts() {
        let d = datum_builtin("cusp").unwrap();
        let opts = CountOptions::default();
        for p in [5, 7] {
            let v = verify_against_counts(&d, p, 6, &opts).unwrap();
            assert!(v.success(), "{v}");
        }
        assert!(matches!(verify_against_counts(&d, 3, 4, &opts), Err(Error::BadPrime(3))));
        let bad = datum_builtin("cusp-nu7").unwrap();
        let v = verify_against_counts(&bad, 5, 6, &opts).unwrap();
        assert!(!v.success());
        let none = datum_builtin("hollow-triangle").unwrap();
        assert!(matches!(verify_against_counts(&none, 5, 2, &opts), Err(Error::Precondition(_))));
    }

    #[test]
    fn builtins_verify() {
        let opts = CountOptions::default();
        for name in ["node", "coordinate-axes", "smooth-line(2)", "monomial(2,3)", "monomial(1,1,1)"] {
            let d = datum_builtin(name).unwrap();
            for p in [3, 5] {
                if d.bad_primes.contains(&p) {
                    continue;
                }
                let v = verify_against_counts(&d, p, 3, &opts).unwrap();
                assert!(v.success(), "{name}: {v}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn transform_round_trip(exps in prop::collection::vec(1u32..5, 1..4), extra in 0i64..3) {
            let mut z = monomial_zeta(&exps).unwrap();
            z.zeta = z.zeta.add(&z.zeta.mul(&RatFun::monomial(QPoly::q_pow(-extra), 1)));
            let n = exps.len();
            let p = zeta_to_poincare(&z, n).unwrap();
            prop_assert_eq!(p.value_at_zero(), QFrac::from_qpoly(QPoly::one()));
            let back = poincare_to_zeta(&p, n).unwrap();
            prop_assert_eq!(back.zeta, z.zeta);
        }

        #[test]
        fn disjoint_products_multiply(a in prop::collection::vec(1u32..4, 1..3), b in prop::collection::vec(1u32..4, 1..3)) {
            let ab: Vec<u32> = a.iter().chain(&b).copied().collect();
            let lhs = monomial_zeta(&ab).unwrap().zeta;
            let rhs = monomial_zeta(&a).unwrap().zeta.mul(&monomial_zeta(&b).unwrap().zeta);
            prop_assert_eq!(&lhs, &rhs);
            prop_assert_eq!(lhs.eval_at_prime(5).unwrap().series(4)[0].clone(), int(0));
        }
    }
}
