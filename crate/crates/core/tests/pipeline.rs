use igusa_core::arith::{rat, BigRat, MultiPoly};
use igusa_core::corpus::builtin_corpus;
use igusa_core::count::CountOptions;
use igusa_core::datum::ResolutionDatum;
use igusa_core::denef::{denef_zeta, verify_against_counts};
use igusa_core::poles::{extract_poles, lct_from_datum};
use igusa_core::primes::smallest_primes_excluding;
use igusa_core::resolve::{resolve_plane_curve, resolve_state, ExtraBlowup, ResolveOptions};
use igusa_core::Error;
use num_integer::Integer;
use proptest::prelude::*;

fn resolve(f: &str) -> ResolutionDatum {
    resolve_plane_curve(&MultiPoly::parse(f).unwrap()).unwrap()
}

#[test]
fn resolved_corpus_curves_match_counts() {
    for e in builtin_corpus().iter().filter(|e| e.f.is_some()) {
        let d = e.datum().unwrap();
        for p in smallest_primes_excluding(3, &d.bad_primes) {
            let v = verify_against_counts(&d, p, e.dmax.min(5), &CountOptions::default()).unwrap();
            assert!(v.success(), "{}: {v}", e.name);
        }
    }
}

#[test]
fn resolved_datum_survives_json() {
    let d = resolve("x*y*(x - y)");
    assert_eq!(ResolutionDatum::from_json(&d.to_json()).unwrap(), d);
}

#[test]
fn smooth_curves_have_lct_one() {
    for f in ["x", "y - x^2", "x + y^3 + x*y", "2*x - 3*y"] {
        assert_eq!(lct_from_datum(&resolve(f)).unwrap(), rat(1, 1), "{f}");
    }
}

// k distinct rational lines y = c x through the origin.
fn lines(slopes: &[i64]) -> String {
    slopes.iter().map(|c| format!("(y - {c}*x)")).collect::<Vec<_>>().join("*")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn quasi_homogeneous_lct(a in 2i64..8, b in 2i64..8) {
        prop_assume!(a.gcd(&b) == 1);
        let d = resolve(&format!("x^{a} - y^{b}"));
        let oracle = (rat(1, a) + rat(1, b)).min(rat(1, 1));
        prop_assert_eq!(lct_from_datum(&d).unwrap(), oracle.clone());
        let r = extract_poles(&denef_zeta(&d).unwrap(), 2);
        let mut poles: Vec<(BigRat, u32)> = r.groups.iter().map(|g| (g.real_part.clone(), g.order)).collect();
        poles.sort();
        prop_assert_eq!(poles, vec![(rat(-1, 1), 1), (-oracle, 1)]);
    }

    #[test]
    fn line_arrangements(slopes in prop::collection::btree_set(-4i64..5, 1..5)) {
        let s: Vec<i64> = slopes.into_iter().collect();
        let k = s.len() as i64;
        let d = resolve(&lines(&s));
        prop_assert_eq!(lct_from_datum(&d).unwrap(), rat(2, k).min(rat(1, 1)));
        let strict = d.components.iter().filter(|c| !c.exceptional).count();
        prop_assert_eq!(strict as i64, k);
    }

    #[test]
    fn extra_blowups_leave_zeta_unchanged(which in 0usize..8, slopes in prop::collection::btree_set(-3i64..4, 2..4)) {
        let f = MultiPoly::parse(&format!("{} + x^5", lines(&slopes.into_iter().collect::<Vec<_>>()))).unwrap();
        let base = match resolve_state(&f, &ResolveOptions::default()) {
            Ok(b) => b,
            Err(Error::UnresolvableOverQ(_)) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        let z = denef_zeta(&base.to_datum().unwrap()).unwrap();
        let meeting = base.leaves.iter().filter(|l| l.exceptional.len() + l.branches.len() >= 2).count();
        let extra = if which < meeting {
            ExtraBlowup::Intersection(which)
        } else if base.blowups() > 0 {
            ExtraBlowup::Generic(which % base.blowups())
        } else {
            return Ok(());
        };
        let more = resolve_state(&f, &ResolveOptions { extra: Some(extra), ..Default::default() }).unwrap();
        prop_assert_eq!(more.blowups(), base.blowups() + 1);
        prop_assert_eq!(denef_zeta(&more.to_datum().unwrap()).unwrap().zeta, z.zeta);
    }
}
