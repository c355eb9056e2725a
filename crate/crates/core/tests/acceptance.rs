//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use igusa_core::arith::{int, rat, BigRat, MultiPoly, RatFun};
use igusa_core::complex::{build_complex, check_collapse_theorem, check_max_face, min_locus, DEFAULT_COLLAPSE_BUDGET};
use igusa_core::corpus::builtin_corpus;
use igusa_core::count::{count_lifting, count_naive, poincare_truncated, CountOptions, CountQuery};
use igusa_core::datum::{datum_builtin, ResolutionDatum};
use igusa_core::denef::{denef_zeta, poincare_to_zeta, zeta_to_poincare};
use igusa_core::poles::{extract_poles, lct_from_datum, veys_check, Outcome};
use igusa_core::resolve::{resolve_plane_curve, resolve_state, ExtraBlowup, ResolveOptions};
use num_bigint::BigInt;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::time::Instant;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|x| x.to_string())
}

fn poly(s: &str) -> MultiPoly {
    MultiPoly::parse(s).expect("test polynomial parses")
}

fn counts(f: &str, p: u64, dmax: u32) -> Result<Vec<BigRat>, String> {
    let q = e(CountQuery::new(poly(f), p, dmax))?;
    let t = e(count_lifting(&q, &CountOptions::default()))?;
    Ok(poincare_truncated(&t).coeffs.into_iter().map(|c| BigRat::from_integer(BigInt::from(c))).collect())
}

/// Corpus data for entries that are not negative controls.
fn valid_corpus() -> Result<Vec<(String, ResolutionDatum)>, String> {
    builtin_corpus()
        .into_iter()
        .filter(|c| !c.is_negative_control())
        .map(|c| Ok((c.name.clone(), e(c.datum())?)))
        .collect()
}

fn all_corpus() -> Result<Vec<(String, ResolutionDatum)>, String> {
    builtin_corpus().into_iter().map(|c| Ok((c.name.clone(), e(c.datum())?))).collect()
}

fn cusp_series_identity() -> Check {
    // the displayed formula is P(p^-2 T), so N(d) = p^(2d) [T^d]
    let shown = e(RatFun::parse(
        "(1 + (q - 1) q^-1 T + (q - 1) q^-4 T^5 - q^-5 T^6) / ((1 - q^-1 T)(1 - q^-5 T^6))",
        "T",
    ))?;
    let mut notes = Vec::new();
    for p in [5u64, 7, 11] {
        let start = Instant::now();
        let got = counts("x^2 - y^3", p, 6)?;
        let expect = e(shown.eval_at_prime(p))?.series(6);
        for (d, (n, s)) in got.iter().zip(&expect).enumerate() {
            let scaled = s * BigRat::from_integer(BigInt::from(p).pow(2 * d as u32));
            ensure(*n == scaled, || format!("p = {p}, d = {d}: counted {n}, formula {scaled}"))?;
        }
        let secs = start.elapsed().as_secs_f64();
        ensure(secs < 10.0, || format!("p = {p} took {secs:.1}s"))?;
        notes.push(format!("p={p} {secs:.2}s"));
    }
    Ok(notes.join(", "))
}

fn cusp_denef_formula() -> Check {
    let a1 = "q^-1 t / (1 - q^-1 t)";
    let a2 = "q^-2 t^2 / (1 - q^-2 t^2)";
    let a3 = "q^-3 t^3 / (1 - q^-3 t^3)";
    let a6 = "q^-5 t^6 / (1 - q^-5 t^6)";
    let shown = e(RatFun::parse(
        &format!("q ({a2}) + q ({a3}) + (q - 2)({a6}) + (q - 1)({a6})(({a1}) + ({a2}) + ({a3}))"),
        "t",
    ))?;
    let factor = e(RatFun::parse("q^2 / (q - 1)", "t"))?;
    for (label, d) in [("catalogue", e(datum_builtin("cusp"))?), ("resolved", e(resolve_plane_curve(&poly("x^2 - y^3")))?)] {
        let z = e(denef_zeta(&d))?;
        ensure(z.zeta.mul(&factor) == shown, || format!("{label} datum gives {z}"))?;
    }
    Ok("catalogued and resolved data".into())
}

fn transform_identity() -> Check {
    let data = all_corpus()?;
    for (name, d) in &data {
        let z = e(denef_zeta(d))?;
        let p = e(zeta_to_poincare(&z, d.n))?;
        let back = e(poincare_to_zeta(&p, d.n))?;
        ensure(back.zeta == z.zeta, || format!("{name}: Z does not survive the round trip"))?;
        ensure(e(zeta_to_poincare(&back, d.n))? == p, || format!("{name}: P does not survive the round trip"))?;
        // P(q^-n T)(1 - T) = 1 - q^n Z(T) coefficientwise
        let lhs = p.scale_var(-(d.n as i64)).mul(&e(RatFun::parse("1 - t", "t"))?);
        let rhs = RatFun::one().sub(&z.zeta.scale(&igusa_core::arith::QPoly::q_pow(d.n as i64)));
        ensure(lhs == rhs, || format!("{name}: transform identity fails"))?;
    }
    Ok(format!("{} entries", data.len()))
}

fn smooth_case() -> Check {
    for p in [3u64, 5] {
        let n = counts("x + y^2", p, 5)?;
        let pn = BigRat::from_integer(BigInt::from(p));
        for d in 0..=4 {
            ensure(n[d + 1] == &n[d] * &pn, || format!("p = {p}: N({}) != p N({d})", d + 1))?;
        }
        for (d, c) in n.iter().enumerate() {
            let want = BigRat::from_integer(BigInt::from(p).pow(d as u32));
            ensure(*c == want, || format!("p = {p}: coefficient {d} is {c}, not {want}"))?;
        }
    }
    Ok("p = 3, 5 up to d = 5".into())
}

fn lct_values() -> Check {
    let cusp = e(lct_from_datum(&e(resolve_plane_curve(&poly("x^2 - y^3")))?))?;
    ensure(cusp == rat(5, 6), || format!("cusp lct {cusp}"))?;
    let axes = e(lct_from_datum(&e(resolve_plane_curve(&poly("x*y")))?))?;
    ensure(axes == int(1), || format!("x*y lct {axes}"))?;
    for a in 1..=7u32 {
        let l = e(lct_from_datum(&e(datum_builtin(&format!("monomial({a})")))?))?;
        ensure(l == rat(1, a as i64), || format!("x^{a} lct {l}"))?;
    }
    Ok("cusp 5/6, x*y 1, x^a 1/a for a <= 7".into())
}

fn veys_suite() -> Check {
    let data = valid_corpus()?;
    for (name, d) in &data {
        let r = extract_poles(&e(denef_zeta(d))?, d.n).with_lct(e(lct_from_datum(d))?);
        let o = e(veys_check(&r, d.n))?;
        ensure(o != Outcome::Fail, || format!("{name}: FAIL"))?;
    }
    let d = e(datum_builtin("coordinate-axes"))?;
    let r = extract_poles(&e(denef_zeta(&d))?, 2).with_lct(e(lct_from_datum(&d))?);
    ensure(r.groups.iter().any(|g| g.real_part == int(-1) && g.order == 2), || "axes: no order-2 pole at -1".into())?;
    ensure(r.lct == Some(int(1)), || "axes: lct is not 1".into())?;
    ensure(e(veys_check(&r, 2))? == Outcome::Pass, || "axes: not PASS".into())?;
    Ok(format!("{} entries, axes PASS", data.len()))
}

fn igusa_bounds() -> Check {
    let data = all_corpus()?;
    for (name, d) in &data {
        let lct = e(lct_from_datum(d))?;
        let r = extract_poles(&e(denef_zeta(d))?, d.n);
        for g in &r.groups {
            ensure(g.real_part <= -lct.clone(), || format!("{name}: pole at {} > -lct", g.real_part))?;
            ensure(g.order as usize <= d.n, || format!("{name}: order {} > n", g.order))?;
        }
    }
    Ok(format!("{} entries", data.len()))
}

fn random_poly(rng: &mut StdRng, n: usize) -> String {
    let names = ["x", "y", "z"];
    let terms = rng.gen_range(1..=4);
    let mut parts = Vec::new();
    for _ in 0..terms {
        let c: i64 = rng.gen_range(-3..=3);
        let mut m = c.to_string();
        let mut exps: Vec<u32> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
        // no constant terms: the origin must be a zero
        if exps.iter().all(|k| *k == 0) {
            exps[rng.gen_range(0..n)] = 1;
        }
        for (v, k) in names.iter().zip(exps) {
            if k > 0 {
                m.push_str(&format!("*{v}^{k}"));
            }
        }
        parts.push(format!("({m})"));
    }
    parts.join(" + ")
}

fn oracle_equivalence() -> Check {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x1605);
    let mut done = 0;
    while done < 20 {
        let n = rng.gen_range(1..=3usize);
        let p = [2u64, 3, 5, 7][rng.gen_range(0..4)];
        let dmax = rng.gen_range(1..=3u32);
        if (p as f64).powi((n as u32 * dmax) as i32) > 2e5 {
            continue;
        }
        let f = random_poly(&mut rng, n);
        let g = poly(&f).with_nvars(n);
        if g.is_constant() {
            continue;
        }
        let q = e(CountQuery::new(g, p, dmax))?;
        let a = e(count_naive(&q, &CountOptions::default()))?;
        let b = e(count_lifting(&q, &CountOptions::default()))?;
        ensure(a.counts == b.counts, || format!("f = {f}, p = {p}: naive {:?} vs lifting {:?}", a.counts, b.counts))?;
        done += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 60.0, || format!("took {secs:.1}s"))?;
    Ok(format!("20 polynomials in {secs:.2}s"))
}

fn dual_complex_suite() -> Check {
    let cusp = e(datum_builtin("cusp"))?;
    let c = e(build_complex(&cusp))?;
    ensure(c.count_faces(0) == 4 && c.count_faces(1) == 3 && c.dim() == 1, || "cusp complex shape".into())?;
    let weights: Vec<(String, BigRat)> = c.vertices.iter().map(|v| (v.id.clone(), v.weight.clone())).collect();
    let want = [("E0", int(1)), ("E1", int(1)), ("E2", int(1)), ("E3", rat(5, 6))];
    ensure(weights.iter().map(|(a, b)| (a.as_str(), b.clone())).eq(want.iter().cloned()), || {
        format!("cusp weights {weights:?}")
    })?;
    let min = min_locus(&c);
    let names: Vec<String> = min.faces.iter().map(|f| c.face_name(*f)).collect();
    ensure(names == ["{E3}"], || format!("cusp min locus {names:?}"))?;

    let mut checked = 0;
    for (name, d) in valid_corpus()? {
        let c = e(build_complex(&d))?;
        let lct = e(lct_from_datum(&d))?;
        ensure(check_max_face(&c, &lct).outcome == Outcome::Pass, || format!("{name}: max face"))?;
        if d.is_reduced() {
            let o = e(check_collapse_theorem(&c, &d, DEFAULT_COLLAPSE_BUDGET))?.outcome;
            ensure(o == Outcome::Pass, || format!("{name}: collapse {o}"))?;
            checked += 1;
        }
    }
    let corrupted = e(datum_builtin("cusp-corrupted"))?;
    let cc = e(build_complex(&corrupted))?;
    ensure(check_max_face(&cc, &e(lct_from_datum(&corrupted))?).outcome == Outcome::Fail, || {
        "cusp-corrupted passes the max-face check".into()
    })?;
    let hollow = e(datum_builtin("hollow-triangle"))?;
    let hc = e(build_complex(&hollow))?;
    let o = e(check_collapse_theorem(&hc, &hollow, DEFAULT_COLLAPSE_BUDGET))?.outcome;
    ensure(o == Outcome::Fail, || format!("hollow-triangle collapse {o}"))?;
    Ok(format!("cusp graph matches; collapse checked on {checked} reduced entries; controls FAIL"))
}

fn resolution_independence() -> Check {
    let f = poly("x^2 - y^3");
    let base = e(resolve_state(&f, &ResolveOptions::default()))?;
    let z = e(denef_zeta(&e(base.to_datum())?))?;
    let meeting = base.leaves.iter().filter(|l| l.exceptional.len() + l.branches.len() >= 2).count();
    let extras = (0..meeting).map(ExtraBlowup::Intersection).chain((0..base.blowups()).map(ExtraBlowup::Generic));
    let mut tried = 0;
    for extra in extras {
        let r = e(resolve_state(&f, &ResolveOptions { extra: Some(extra), ..Default::default() }))?;
        let d = e(r.to_datum())?;
        ensure(d.components.len() == 5, || format!("{extra:?}: no extra component"))?;
        let z2 = e(denef_zeta(&d))?;
        ensure(z2.zeta == z.zeta, || format!("{extra:?}: Z changed to {z2}"))?;
        tried += 1;
    }
    ensure(tried > 0, || "no extra point to blow up".into())?;
    Ok(format!("{tried} extra blow-ups"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("cusp series identity", cusp_series_identity),
        ("cusp Denef formula", cusp_denef_formula),
        ("transform identity", transform_identity),
        ("smooth case", smooth_case),
        ("lct values", lct_values),
        ("Veys property suite", veys_suite),
        ("Igusa bounds", igusa_bounds),
        ("oracle equivalence", oracle_equivalence),
        ("dual-complex suite", dual_complex_suite),
        ("resolution independence", resolution_independence),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(note) => println!("criterion {:>2} {name}: PASS ({note})", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({why})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
