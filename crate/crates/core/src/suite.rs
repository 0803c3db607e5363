//! Reproduction cases for the worked examples and the acceptance checks,
//! shared by the command line and the integration tests.

use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::barcobar::{algebra_complex, bar, cobar, counit_check, nerve_bar_iso_check, unit_check};
use crate::dgcoalg::{chains, DgCoalgebraWindow};
use crate::exactlin::{homology_window, smith_normal_form, HomologyGroup, HomologyTable, IntMatrix};
use crate::loopgroup::{h0_compare, hurewicz_check};
use crate::monoids::{monoid_algebra, random_monoid, FiniteMonoid, MonoidMap};
use crate::rewrite::{
    adjoin_inverses, basis_in_degree, complete, extended_cobar, h0_ring, parse_assignment, ring_iso_certify,
    AlgebraWindow, BasisOutcome, CycleBasis, Monomial, Poly, PresentedDgAlgebra, RewriteError, RewriteSystem,
};
use crate::simplicial::{
    collapsed_tetrahedron, localized_nerve, minimal_sphere, point, rp2, Nerve, Simplicial, SimplicialSet,
};
use crate::weqcheck::{weq_verdict, WeqVerdict};

#[derive(Clone, Debug, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub cases: usize,
    pub budget: usize,
    pub cap: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            cases: 200,
            budget: 100_000,
            cap: 10_000,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseOutcome {
    pub criterion: String,
    pub case: String,
    pub passed: bool,
    pub detail: Value,
    pub elapsed_ms: u128,
}

type CaseFn = fn(&SuiteConfig) -> Result<Value, String>;

/// `(case name, criterion, runner)`.
pub const CASES: &[(&str, &str, CaseFn)] = &[
    ("nerve-bar", "A1", nerve_bar_cases),
    ("sphere-cobar", "A2", sphere_cobar),
    ("loop-s2", "A3", loop_spheres),
    ("localization", "A4", localization_cases),
    ("counit-unit", "A5", counit_unit),
    ("localized-nerve", "A6", localized_nerve_case),
    ("h0", "A7", h0_cases),
    ("hurewicz", "A8", hurewicz_cases),
    ("weq", "A9", weq_cases),
    ("properties", "A10", properties),
];

pub fn case_names() -> Vec<&'static str> {
    CASES.iter().map(|c| c.0).collect()
}

/// Run one named case, or every case for `"all"`. `None` for an unknown name.
pub fn run(name: &str, cfg: &SuiteConfig) -> Option<Vec<CaseOutcome>> {
    let selected: Vec<_> = CASES.iter().filter(|c| name == "all" || c.0 == name).collect();
    if selected.is_empty() {
        return None;
    }
    Some(
        selected
            .into_iter()
            .map(|(case, criterion, f)| {
                let start = Instant::now();
                let result = f(cfg);
                let elapsed_ms = start.elapsed().as_millis();
                let (passed, detail) = match result {
                    Ok(v) => (true, v),
                    Err(e) => (false, json!({ "error": e })),
                };
                CaseOutcome {
                    criterion: criterion.to_string(),
                    case: case.to_string(),
                    passed,
                    detail,
                    elapsed_ms,
                }
            })
            .collect(),
    )
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

/// Monoids shipped with the library.
pub fn bundled_monoids() -> Vec<(&'static str, FiniteMonoid)> {
    vec![
        ("trivial", FiniteMonoid::trivial()),
        ("idempotent", FiniteMonoid::idempotent()),
        ("z2", FiniteMonoid::cyclic(2)),
        ("z3", FiniteMonoid::cyclic(3)),
    ]
}

/// Reduced simplicial sets shipped with the library, materialized through degree 3.
pub fn bundled_reduced() -> Vec<(String, SimplicialSet)> {
    let mut out: Vec<(String, SimplicialSet)> = (1..=4).map(|n| (format!("sphere{n}"), minimal_sphere(n))).collect();
    out.push(("point".into(), point()));
    out.push(("collapsed_tetrahedron".into(), collapsed_tetrahedron()));
    out.push(("rp2".into(), rp2()));
    for (name, m) in bundled_monoids() {
        out.push((format!("nerve_{name}"), SimplicialSet::from_simplicial(&Nerve::new(&m), 3).unwrap()));
    }
    let idem = Nerve::new(&FiniteMonoid::idempotent());
    let local = localized_nerve(&idem, &[vec![1]]).unwrap().truncated(1);
    out.push(("localized_nerve_idempotent".into(), SimplicialSet::from_simplicial(&local, 3).unwrap()));
    out
}

fn table(h: &HomologyTable, upto: usize) -> Vec<String> {
    (0..=upto).map(|n| h.get(n).map_or("-".into(), |g| g.to_string())).collect()
}

fn nerve_bar_cases(cfg: &SuiteConfig) -> Result<Value, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut monoids: Vec<(String, FiniteMonoid)> =
        bundled_monoids().into_iter().map(|(n, m)| (n.to_string(), m)).collect();
    for k in 0..20 {
        monoids.push((format!("random{k}"), random_monoid(&mut rng, 4)));
    }
    let mut checked = vec![];
    for (name, m) in &monoids {
        let cert = nerve_bar_iso_check(m, 4).map_err(|e| format!("{name}: {e}"))?;
        checked.push(json!({ "monoid": name, "order": m.order(), "ranks": cert.ranks, "coproduct_terms": cert.coproduct_terms }));
    }
    Ok(json!({ "hi": 4, "checked": checked }))
}

fn laurent() -> PresentedDgAlgebra {
    let mut l = PresentedDgAlgebra::free(&[("u", 0), ("w", 0)]).unwrap();
    l.augmentation = Some(vec![BigInt::one(), BigInt::one()]);
    l.relate("u*w", "1").unwrap();
    l.relate("w*u", "1").unwrap();
    l
}

fn sphere_cobar(cfg: &SuiteConfig) -> Result<Value, String> {
    let s1 = minimal_sphere(1);
    let omega = cobar(&chains(&s1, 2).map_err(err)?, 2).map_err(err)?;
    ensure(
        omega.generators.len() == 1 && omega.generators[0].degree == 0,
        "cobar of the circle should have one degree-0 generator",
    )?;
    ensure(omega.differential[0].is_zero() && omega.relations.is_empty(), "cobar of the circle is not free")?;
    let ext = extended_cobar(&s1, 2, CycleBasis::Natural).map_err(err)?;
    let h0 = h0_ring(&ext);
    let t = h0.labels()[0].clone();
    let v = h0.labels()[1].clone();
    let target = laurent();
    let f = parse_assignment(&target, &h0, &[("u", &format!("1 + {t}")), ("w", &v)]).map_err(err)?;
    let g = parse_assignment(&h0, &target, &[(&t, "u - 1"), (&v, "w")]).map_err(err)?;
    let cert = ring_iso_certify(&target, &h0, &f, &g, cfg.budget).map_err(err)?;
    let sys = complete(&h0, cfg.budget).map_err(err)?;
    let gradings = laurent_gradings(&sys, 6)?;
    Ok(json!({
        "cobar": omega,
        "h0": h0,
        "rules": sys.show_rules(),
        "certificate": cert,
        "irreducible_per_grading": gradings,
    }))
}

/// Irreducible words of length at most `len` in the two generators, counted
/// by `#t - #v`; each grading in `-len..=len` must occur exactly once.
fn laurent_gradings(sys: &RewriteSystem, len: usize) -> Result<Vec<(i64, usize)>, String> {
    let mut counts = std::collections::BTreeMap::new();
    let mut frontier = vec![Monomial::one()];
    for _ in 0..=len {
        let mut next = vec![];
        for w in frontier {
            if !sys.is_irreducible(&w) {
                continue;
            }
            let g: i64 = w.0.iter().map(|&x| if x == 0 { 1 } else { -1 }).sum();
            *counts.entry(g).or_insert(0usize) += 1;
            for x in 0..2 {
                let mut u = w.0.clone();
                u.push(x);
                next.push(Monomial(u));
            }
        }
        frontier = next;
    }
    let out: Vec<(i64, usize)> = counts.into_iter().collect();
    let len = len as i64;
    ensure(
        out.len() == (2 * len + 1) as usize && out.iter().all(|&(g, c)| c == 1 && g.abs() <= len),
        format!("irreducible words per grading: {out:?}"),
    )?;
    Ok(out)
}

/// Homology of `Ω C(K)` on `0..hi`, computed by SNF on a finite window.
pub fn loop_homology<K: Simplicial>(k: &K, hi: usize, budget: usize, cap: usize) -> Result<HomologyTable, String> {
    let c = chains(k, hi + 1).map_err(err)?;
    let omega = cobar(&c, hi + 1).map_err(err)?;
    let w = AlgebraWindow::new(&omega, hi, budget, cap).map_err(err)?;
    homology_window(&algebra_complex(&w, hi).map_err(err)?).map_err(err)
}

fn loop_spheres(cfg: &SuiteConfig) -> Result<Value, String> {
    let z = HomologyGroup::free(1);
    let h2 = loop_homology(&minimal_sphere(2), 6, cfg.budget, cfg.cap)?;
    for n in 0..=5 {
        ensure(h2.get(n).is_some_and(|g| g.exact && g.same_group(&z)), format!("S2: H_{n} = {:?}", h2.get(n)))?;
    }
    let h3 = loop_homology(&minimal_sphere(3), 6, cfg.budget, cfg.cap)?;
    for n in 0..=5 {
        let want = if n % 2 == 0 { z.clone() } else { HomologyGroup::zero() };
        ensure(h3.get(n).is_some_and(|g| g.exact && g.same_group(&want)), format!("S3: H_{n} = {:?}", h3.get(n)))?;
    }
    Ok(json!({ "sphere2": table(&h2, 5), "sphere3": table(&h3, 5) }))
}

fn idempotent_algebra() -> PresentedDgAlgebra {
    monoid_algebra(&FiniteMonoid::idempotent()).unwrap()
}

fn localization_cases(cfg: &SuiteConfig) -> Result<Value, String> {
    let a = idempotent_algebra();
    let at_b = adjoin_inverses(&a, &[a.parse("b").map_err(err)?]).map_err(err)?;
    let ground = PresentedDgAlgebra::ground();
    let cert_b = ring_iso_certify(&at_b, &ground, &[Poly::one(), Poly::one()], &[], cfg.budget).map_err(err)?;

    let at_2b = adjoin_inverses(&a, &[a.parse("2 - b").map_err(err)?]).map_err(err)?;
    let mut prod = PresentedDgAlgebra::free(&[("p", 0), ("q", 0)]).unwrap();
    prod.relate("q*q", "q").map_err(err)?;
    prod.relate("p*q", "0").map_err(err)?;
    prod.relate("q*p", "0").map_err(err)?;
    prod.relate("2*p", "1 - q").map_err(err)?;
    let f = parse_assignment(&at_2b, &prod, &[("b", "q"), ("v", "p + q")]).map_err(err)?;
    let g = parse_assignment(&prod, &at_2b, &[("p", "v - b"), ("q", "b")]).map_err(err)?;
    let cert_2b = ring_iso_certify(&at_2b, &prod, &f, &g, cfg.budget).map_err(err)?;
    let not_z = match ring_iso_certify(&at_2b, &ground, &[Poly::one(), Poly::one()], &[], cfg.budget) {
        Ok(_) => return Err("localization at 2 - b was certified isomorphic to Z".into()),
        Err(e @ (RewriteError::NotAHomomorphism(..) | RewriteError::Inconclusive(_))) => e.to_string(),
        Err(e) => return Err(e.to_string()),
    };

    let a2 = a.reduce_mod(2);
    let at_2b_mod2 = adjoin_inverses(&a2, &[a2.parse("2 - b").map_err(err)?]).map_err(err)?;
    let sys2 = complete(&at_2b_mod2, cfg.budget).map_err(err)?;
    let basis = basis_in_degree(&sys2, 0, cfg.cap).map_err(err)?;
    ensure(basis == BasisOutcome::Basis(vec![Monomial::one()]), format!("mod 2 basis: {basis:?}"))?;
    Ok(json!({
        "at_b": cert_b,
        "at_two_minus_b": cert_2b,
        "at_two_minus_b_vs_z": not_z,
        "mod2_rules": sys2.show_rules(),
        "mod2_basis": ["1"],
    }))
}

fn free_x() -> PresentedDgAlgebra {
    PresentedDgAlgebra::free(&[("x", 1)]).unwrap()
}

fn exterior_x() -> PresentedDgAlgebra {
    let mut a = free_x();
    a.relate("x*x", "0").unwrap();
    a
}

fn counit_unit(cfg: &SuiteConfig) -> Result<Value, String> {
    let mut out = serde_json::Map::new();
    for (name, a) in [("Z", PresentedDgAlgebra::ground()), ("exterior", exterior_x()), ("free", free_x())] {
        let v = counit_check(&a, 4, cfg.budget, cfg.cap).map_err(|e| format!("counit {name}: {e}"))?;
        ensure(v.is_quasi_iso(), format!("counit {name}: {v:?}"))?;
        out.insert(format!("counit_{name}"), json!(v));
    }
    for (n, hi) in [(2, 4), (3, 5)] {
        let c = chains(&minimal_sphere(n), hi).map_err(err)?;
        let v = unit_check(&c, hi, cfg.budget, cfg.cap).map_err(|e| format!("unit S{n}: {e}"))?;
        ensure(v.is_quasi_iso(), format!("unit S{n}: {v:?}"))?;
        out.insert(format!("unit_sphere{n}"), json!(v));
    }
    Ok(Value::Object(out))
}

fn localized_nerve_case(cfg: &SuiteConfig) -> Result<Value, String> {
    let a = idempotent_algebra();
    let local = adjoin_inverses(&a, &[a.parse("b").map_err(err)?]).map_err(err)?;
    let w = AlgebraWindow::new(&local, 4, cfg.budget, cfg.cap).map_err(err)?;
    let hb = homology_window(&bar(&w, 5).map_err(err)?.complex).map_err(err)?;
    let hn = homology_window(&chains(&Nerve::new(&FiniteMonoid::idempotent()), 5).map_err(err)?.complex).map_err(err)?;
    for n in 0..=4 {
        let want = if n == 0 { HomologyGroup::free(1) } else { HomologyGroup::zero() };
        ensure(hb.get(n).is_some_and(|g| g.exact && g.same_group(&want)), format!("bar H_{n}"))?;
        ensure(hn.get(n).is_some_and(|g| g.exact && g.same_group(&want)), format!("nerve H_{n}"))?;
    }
    Ok(json!({ "bar_of_localization": table(&hb, 4), "nerve": table(&hn, 4) }))
}

fn h0_cases(cfg: &SuiteConfig) -> Result<Value, String> {
    let mut out = serde_json::Map::new();
    let cases: Vec<(&str, SimplicialSet)> = vec![
        ("sphere1", minimal_sphere(1)),
        ("sphere2", minimal_sphere(2)),
        ("collapsed_tetrahedron", collapsed_tetrahedron()),
        ("rp2", rp2()),
    ];
    for (name, k) in cases {
        let c = h0_compare(&k, cfg.budget).map_err(|e| format!("{name}: {e}"))?;
        out.insert(
            name.to_string(),
            json!({
                "pi1": c.pi1,
                "group_ring_rules": c.certificate.source_rules,
                "h0_rules": c.certificate.target_rules,
                "checks": c.certificate.checks.len(),
            }),
        );
    }
    Ok(Value::Object(out))
}

fn hurewicz_cases(_: &SuiteConfig) -> Result<Value, String> {
    let mut out = serde_json::Map::new();
    for (name, k) in bundled_reduced() {
        let h = hurewicz_check(&k).map_err(|e| format!("{name}: {e}"))?;
        ensure(h.agree, format!("{name}: pi1^ab = {}, H1 = {}", h.abelianized_pi1, h.h1))?;
        out.insert(name, json!(h.h1.to_string()));
    }
    Ok(Value::Object(out))
}

fn weq_cases(cfg: &SuiteConfig) -> Result<Value, String> {
    let idem = FiniteMonoid::idempotent();
    let collapse = weq_verdict(&MonoidMap::to_trivial(&idem), 4, cfg.budget);
    ensure(
        matches!(collapse, WeqVerdict::CertifiedEquivalent { .. }),
        format!("idempotent to trivial: {collapse:?}"),
    )?;
    let z2 = weq_verdict(&MonoidMap::to_trivial(&FiniteMonoid::cyclic(2)), 4, cfg.budget);
    match &z2 {
        WeqVerdict::Distinguished { witness } if witness.invariant == "H_1" => {}
        other => return Err(format!("z2 to trivial: {other:?}")),
    }
    let mut ids = serde_json::Map::new();
    for (name, m) in bundled_monoids() {
        let v = weq_verdict(&MonoidMap::identity(&m), 4, cfg.budget);
        ensure(matches!(v, WeqVerdict::CertifiedEquivalent { .. }), format!("identity on {name}: {v:?}"))?;
        ids.insert(name.to_string(), json!(v));
    }
    Ok(json!({ "idempotent_to_trivial": collapse, "z2_to_trivial": z2, "identities": ids }))
}

fn d_squared_zero(c: &crate::exactlin::ChainComplexWindow) -> bool {
    (c.lo + 2..=c.hi).all(|n| c.boundary(n - 1).mul(c.boundary(n)).is_zero())
}

fn random_matrix<R: Rng>(rng: &mut R) -> IntMatrix {
    let rows = rng.gen_range(0..=5);
    let cols = rng.gen_range(0..=5);
    let entries: Vec<i64> = (0..rows * cols)
        .map(|_| if rng.gen_bool(0.3) { 0 } else { rng.gen_range(-9..=9) })
        .collect();
    IntMatrix::from_i64(rows, cols, &entries).unwrap()
}

fn random_poly<R: Rng>(rng: &mut R, gens: usize) -> Poly {
    let mut p = Poly::zero();
    for _ in 0..rng.gen_range(1..=4) {
        let len = if gens == 0 { 0 } else { rng.gen_range(0..=5) };
        let w: Vec<usize> = (0..len).map(|_| rng.gen_range(0..gens)).collect();
        p.add_term(BigInt::from(rng.gen_range(-5..=5)), Monomial(w));
    }
    p
}

/// Seeded sweeps of the structural laws, `cfg.cases` samples each.
fn properties(cfg: &SuiteConfig) -> Result<Value, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.cases;
    let laws = |c: &DgCoalgebraWindow, what: &str| -> Result<(), String> {
        ensure(d_squared_zero(&c.complex), format!("d^2 != 0 on {what}"))?;
        let r = c.check_laws();
        ensure(r.is_valid(), format!("{what}: {r}"))
    };
    for i in 0..n {
        let m = random_monoid(&mut rng, 4);
        laws(&chains(&Nerve::new(&m), 4).map_err(err)?, &format!("chains of nerve {i}"))?;
    }
    for i in 0..n {
        let m = random_monoid(&mut rng, 4);
        let w = AlgebraWindow::new(&monoid_algebra(&m).map_err(err)?, 4, cfg.budget, cfg.cap).map_err(err)?;
        laws(&bar(&w, 4).map_err(err)?, &format!("bar {i}"))?;
    }
    let complexes: Vec<SimplicialSet> = bundled_reduced().into_iter().map(|(_, k)| k).collect();
    for i in 0..n {
        let omega = if i % 2 == 0 {
            let m = random_monoid(&mut rng, 4);
            cobar(&chains(&Nerve::new(&m), 3).map_err(err)?, 3).map_err(err)?
        } else {
            let k = &complexes[rng.gen_range(0..complexes.len())];
            cobar(&chains(k, 3).map_err(err)?, 3).map_err(err)?
        };
        for g in 0..omega.generators.len() {
            ensure(omega.d(&omega.d(&Poly::generator(g))).is_zero(), format!("d^2 on cobar {i}"))?;
        }
    }
    for i in 0..n {
        let m = random_matrix(&mut rng);
        let s = smith_normal_form(&m);
        ensure(s.u.mul(&m).mul(&s.v).is_diagonal_with(&s.d), format!("snf {i} not diagonal"))?;
        ensure(s.u.is_unimodular() && s.v.is_unimodular(), format!("snf {i} not unimodular"))?;
        for w in s.d.windows(2) {
            let ok = if w[0].is_zero() { w[1].is_zero() } else { (&w[1] % &w[0]).is_zero() };
            ensure(ok, format!("snf {i} divisibility"))?;
        }
    }
    for i in 0..n {
        let a = match i % 3 {
            0 => {
                let a = idempotent_algebra();
                adjoin_inverses(&a, &[a.parse("b").unwrap()]).unwrap()
            }
            1 => laurent(),
            _ => monoid_algebra(&random_monoid(&mut rng, 4)).map_err(err)?,
        };
        let sys = complete(&a, cfg.budget).map_err(err)?;
        ensure(sys.is_canonical(), format!("rewrite sample {i} did not complete"))?;
        let p = random_poly(&mut rng, a.generators.len());
        let nf = sys.normal_form(&p);
        let other = sys.reduce_randomly(&p, &mut rng);
        ensure(nf == other, format!("rewrite sample {i}: {} vs {}", a.show(&nf), a.show(&other)))?;
    }
    Ok(json!({ "seed": cfg.seed, "cases_per_property": n, "properties": 5 }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_case() {
        assert!(run("nope", &SuiteConfig::default()).is_none());
        assert!(case_names().contains(&"localization"));
    }

    #[test]
    fn quick_cases_pass() {
        let cfg = SuiteConfig::default();
        for name in ["sphere-cobar", "localization", "weq", "hurewicz"] {
            let out = run(name, &cfg).unwrap();
            assert!(out[0].passed, "{name}: {}", out[0].detail);
        }
    }
}
