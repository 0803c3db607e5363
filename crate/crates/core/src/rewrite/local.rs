use num_bigint::BigInt;
use num_traits::{One, Signed};
use serde::Serialize;

use super::poly::{Gen, Poly};
use super::system::{complete, Completeness, RewriteSystem, TraceStep};
use super::{one_plus, PresentedDgAlgebra, Relation, RewriteError};
use crate::barcobar::cobar;
use crate::dgcoalg::chains;
use crate::simplicial::Simplicial;

const COFIBRANCY_NOTE: &str = "assumption: the algebra is cofibrant over the subalgebra generated by the inverted cycles, \
so adjoining inverses computes the derived localization";

fn remap(p: &Poly, map: &[Option<Gen>]) -> Option<Poly> {
    let mut out = Poly::zero();
    for (m, c) in p.terms() {
        let word: Option<Vec<Gen>> = m.0.iter().map(|&g| map[g]).collect();
        out.add_term(c.clone(), super::Monomial(word?));
    }
    Some(out)
}

/// Degree-0 homology as a ring: the degree-0 generators modulo the old
/// degree-0 relations and the boundaries of the degree-1 generators.
pub fn h0_ring(a: &PresentedDgAlgebra) -> PresentedDgAlgebra {
    let mut out = PresentedDgAlgebra::ground();
    out.coefficients = a.coefficients;
    out.notes = a.notes.clone();
    let mut map = vec![None; a.generators.len()];
    let mut aug = a.augmentation.as_ref().map(|_| vec![]);
    for (i, g) in a.generators.iter().enumerate() {
        if g.degree == 0 {
            map[i] = Some(out.generators.len());
            out.generators.push(g.clone());
            out.differential.push(Poly::zero());
            if let (Some(v), Some(src)) = (aug.as_mut(), a.augmentation.as_ref()) {
                v.push(src[i].clone());
            }
        }
    }
    out.augmentation = aug;
    let order = a.order();
    for r in &a.relations {
        if r.as_poly().homogeneous_degree(&order).unwrap_or(0) != 0 {
            continue;
        }
        if let (Some(l), Some(rhs)) = (remap(&r.lhs, &map), remap(&r.rhs, &map)) {
            out.relations.push(Relation::new(l, rhs));
        }
    }
    for g in a.generators_of_degree(1) {
        if let Some(dg) = remap(&a.differential[g], &map) {
            if !dg.is_zero() {
                out.relations.push(Relation::new(dg, Poly::zero()));
            }
        }
    }
    out
}

fn fresh_label(a: &PresentedDgAlgebra, base: &str) -> String {
    let mut label = base.to_string();
    while a.generator(&label).is_some() {
        label.push('\'');
    }
    label
}

fn adjoin_one(out: &mut PresentedDgAlgebra, x: &Poly, base: &str) -> Result<(), RewriteError> {
    let label = fresh_label(out, base);
    let aug = match out.augment(x) {
        Some(e) if e.abs().is_one() => Some(e),
        _ => None,
    };
    let dx = out.d(x);
    let v = out.push_generator(&label, 0, Poly::zero(), aug)?;
    let vp = Poly::generator(v);
    // d(v) = -v d(x) v, zero for cycles
    out.differential[v] = vp.mul(&dx).mul(&vp).scale(&-BigInt::one());
    out.relations.push(Relation::new(vp.mul(x), Poly::one()));
    out.relations.push(Relation::new(x.mul(&vp), Poly::one()));
    let note = format!("{label} inverts {}", out.show(x));
    out.notes.push(note);
    Ok(())
}

/// Adjoin a two-sided inverse `v_s` for each degree-0 cycle `s`.
pub fn adjoin_inverses(a: &PresentedDgAlgebra, s: &[Poly]) -> Result<PresentedDgAlgebra, RewriteError> {
    let order = a.order();
    for x in s {
        let deg = x.homogeneous_degree(&order);
        if !(x.is_zero() || deg == Some(0)) || !a.d(x).is_zero() {
            return Err(RewriteError::NotACycle(a.show(x)));
        }
    }
    let mut out = a.clone();
    for (i, x) in s.iter().enumerate() {
        let base = if s.len() == 1 { "v".to_string() } else { format!("v{}", i + 1) };
        adjoin_one(&mut out, x, &base)?;
    }
    if !s.is_empty() {
        out.notes.push(COFIBRANCY_NOTE.to_string());
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CycleBasis {
    /// Invert `1 + s⁻¹x`.
    Natural,
    /// Invert `1 - s⁻¹x`.
    Negated,
}

/// Invert `1 ± g` for every degree-0 generator `g` of a cobar algebra.
pub fn localize_cobar(omega: &PresentedDgAlgebra, basis: CycleBasis) -> Result<PresentedDgAlgebra, RewriteError> {
    let sign = match basis {
        CycleBasis::Natural => 1,
        CycleBasis::Negated => -1,
    };
    let mut cycles = vec![];
    let mut labels = vec![];
    for g in omega.generators_of_degree(0) {
        if !omega.differential[g].is_zero() {
            return Err(RewriteError::NotACycle(omega.generators[g].label.clone()));
        }
        cycles.push(one_plus(g, sign));
        labels.push(omega.generators[g].label.clone());
    }
    let mut out = omega.clone();
    for (x, label) in cycles.iter().zip(&labels) {
        adjoin_one(&mut out, x, &format!("v_{label}"))?;
    }
    if !cycles.is_empty() {
        out.notes.push(COFIBRANCY_NOTE.to_string());
    }
    Ok(out)
}

/// Cobar of the chains of `k` with the cycles `1 ± s⁻¹x` inverted, one per
/// nondegenerate 1-simplex.
pub fn extended_cobar<K: Simplicial>(k: &K, hi: usize, basis: CycleBasis) -> Result<PresentedDgAlgebra, RewriteError> {
    let c = chains(k, hi).map_err(|e| RewriteError::Upstream(e.to_string()))?;
    let omega = cobar(&c, hi).map_err(|e| RewriteError::Upstream(e.to_string()))?;
    localize_cobar(&omega, basis)
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub kind: String,
    pub subject: String,
    pub image: String,
    pub normal_form: String,
    pub trace: Vec<TraceStep>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IsoCertificate {
    pub source_rules: Vec<String>,
    pub source_status: Completeness,
    pub target_rules: Vec<String>,
    pub target_status: Completeness,
    pub checks: Vec<CheckRecord>,
}

struct Side<'a> {
    alg: &'a PresentedDgAlgebra,
    sys: RewriteSystem,
}

impl Side<'_> {
    fn check_zero(&self, kind: &str, subject: String, image: &Poly) -> Result<CheckRecord, (Poly, bool)> {
        let (nf, trace) = self.sys.normal_form_traced(image);
        if nf.is_zero() {
            Ok(CheckRecord {
                kind: kind.to_string(),
                subject,
                image: self.alg.show(image),
                normal_form: "0".to_string(),
                trace,
            })
        } else {
            Err((nf, self.sys.is_canonical()))
        }
    }
}

fn check_map(
    from: &Side,
    to: &Side,
    f: &[Poly],
    checks: &mut Vec<CheckRecord>,
) -> Result<(), RewriteError> {
    for r in &from.alg.relations {
        let subject = from.alg.show_relation(r);
        let image = r.as_poly().substitute(f);
        match to.check_zero("relation", subject.clone(), &image) {
            Ok(rec) => checks.push(rec),
            Err((nf, true)) => return Err(RewriteError::NotAHomomorphism(subject, to.alg.show(&nf))),
            Err((nf, false)) => {
                return Err(RewriteError::Inconclusive(format!(
                    "relation {subject} maps to {} under a non-canonical system",
                    to.alg.show(&nf)
                )))
            }
        }
    }
    for (g, dg) in from.alg.differential.iter().enumerate() {
        let image = dg.substitute(f).sub(&to.alg.d(&f[g]));
        let subject = format!("d({})", from.alg.generators[g].label);
        match to.check_zero("differential", subject.clone(), &image) {
            Ok(rec) => checks.push(rec),
            Err((nf, true)) => return Err(RewriteError::NotAHomomorphism(subject, to.alg.show(&nf))),
            Err((nf, false)) => {
                return Err(RewriteError::Inconclusive(format!(
                    "{subject} commutes only up to {} under a non-canonical system",
                    to.alg.show(&nf)
                )))
            }
        }
    }
    Ok(())
}

fn check_round_trip(
    side: &Side,
    there: &[Poly],
    back: &[Poly],
    checks: &mut Vec<CheckRecord>,
) -> Result<(), RewriteError> {
    for (g, img) in there.iter().enumerate() {
        let label = side.alg.generators[g].label.clone();
        let image = img.substitute(back).sub(&Poly::generator(g));
        match side.check_zero("round trip", label.clone(), &image) {
            Ok(rec) => checks.push(rec),
            Err((nf, true)) => {
                let rt = nf.add(&Poly::generator(g));
                return Err(RewriteError::NotInverse(label, side.alg.show(&side.sys.normal_form(&rt))));
            }
            Err((nf, false)) => {
                return Err(RewriteError::Inconclusive(format!(
                    "round trip on {label} differs by {} under a non-canonical system",
                    side.alg.show(&nf)
                )))
            }
        }
    }
    Ok(())
}

/// Check that `f: a → b` and `g: b → a`, given on generators, are mutually
/// inverse dg ring maps. Equalities are established by reduction to zero.
pub fn ring_iso_certify(
    a: &PresentedDgAlgebra,
    b: &PresentedDgAlgebra,
    f: &[Poly],
    g: &[Poly],
    budget: usize,
) -> Result<IsoCertificate, RewriteError> {
    if f.len() != a.generators.len() || g.len() != b.generators.len() {
        return Err(RewriteError::Parse("assignment does not cover every generator".into()));
    }
    let sa = Side {
        alg: a,
        sys: complete(a, budget)?,
    };
    let sb = Side {
        alg: b,
        sys: complete(b, budget)?,
    };
    let mut checks = vec![];
    check_map(&sa, &sb, f, &mut checks)?;
    check_map(&sb, &sa, g, &mut checks)?;
    check_round_trip(&sa, f, g, &mut checks)?;
    check_round_trip(&sb, g, f, &mut checks)?;
    Ok(IsoCertificate {
        source_rules: sa.sys.show_rules(),
        source_status: sa.sys.status.clone(),
        target_rules: sb.sys.show_rules(),
        target_status: sb.sys.status.clone(),
        checks,
    })
}

/// Parse an assignment `label -> expression` for every generator of `from`
/// into polynomials over `to`.
pub fn parse_assignment(
    from: &PresentedDgAlgebra,
    to: &PresentedDgAlgebra,
    pairs: &[(&str, &str)],
) -> Result<Vec<Poly>, RewriteError> {
    let mut out = vec![None; from.generators.len()];
    for (l, e) in pairs {
        let gi = from
            .generator(l)
            .ok_or_else(|| RewriteError::UnknownGenerator(l.to_string()))?;
        out[gi] = Some(to.parse(e)?);
    }
    out.into_iter()
        .enumerate()
        .map(|(i, p)| {
            p.ok_or_else(|| RewriteError::Parse(format!("no image for {}", from.generators[i].label)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::{basis_in_degree, BasisOutcome, Coefficients, Monomial};
    use num_traits::Zero;

    fn idempotent() -> PresentedDgAlgebra {
        let mut a = PresentedDgAlgebra::free(&[("b", 0)]).unwrap();
        a.augmentation = Some(vec![BigInt::one()]);
        a.relate("b*b", "b").unwrap();
        a
    }

    #[test]
    fn localize_at_b_is_integers() {
        let a = idempotent();
        let b = a.parse("b").unwrap();
        let l = adjoin_inverses(&a, &[b]).unwrap();
        assert!(l.notes.iter().any(|n| n.contains("cofibrant")));
        let z = PresentedDgAlgebra::ground();
        let f = vec![Poly::one(), Poly::one()];
        let cert = ring_iso_certify(&l, &z, &f, &[], 10_000).unwrap();
        assert_eq!(cert.source_status, Completeness::Complete);
    }

    #[test]
    fn localize_at_two_minus_b() {
        let a = idempotent();
        let s = a.parse("2 - b").unwrap();
        let l = adjoin_inverses(&a, &[s]).unwrap();
        let mut t = PresentedDgAlgebra::free(&[("p", 0), ("q", 0)]).unwrap();
        t.relate("q*q", "q").unwrap();
        t.relate("p*q", "0").unwrap();
        t.relate("q*p", "0").unwrap();
        t.relate("2*p", "1 - q").unwrap();
        let f = parse_assignment(&l, &t, &[("b", "q"), ("v", "p + q")]).unwrap();
        let g = parse_assignment(&t, &l, &[("p", "v - b"), ("q", "b")]).unwrap();
        ring_iso_certify(&l, &t, &f, &g, 10_000).unwrap();
        // and it is not the integers: b - 1 does not vanish
        let z = PresentedDgAlgebra::ground();
        let err = ring_iso_certify(&l, &z, &[Poly::one(), Poly::one()], &[], 10_000).unwrap_err();
        assert!(matches!(err, RewriteError::Inconclusive(_) | RewriteError::NotAHomomorphism(..)));
    }

    #[test]
    fn characteristic_two_collapses() {
        let a = idempotent().reduce_mod(2);
        let s = a.parse("2 - b").unwrap();
        let l = adjoin_inverses(&a, &[s]).unwrap();
        let sys = complete(&l, 10_000).unwrap();
        assert_eq!(
            basis_in_degree(&sys, 0, 100).unwrap(),
            BasisOutcome::Basis(vec![Monomial::one()])
        );
        assert_eq!(sys.coefficients, Coefficients::Modular(2));
    }

    #[test]
    fn inverting_one_changes_nothing() {
        let a = idempotent();
        let l = adjoin_inverses(&a, &[Poly::one()]).unwrap();
        let f = parse_assignment(&l, &a, &[("b", "b"), ("v", "1")]).unwrap();
        let g = parse_assignment(&a, &l, &[("b", "b")]).unwrap();
        ring_iso_certify(&l, &a, &f, &g, 10_000).unwrap();
    }

    #[test]
    fn wrong_map_is_refuted() {
        let a = idempotent();
        let f = vec![Poly::constant(2)];
        let g = vec![a.parse("b").unwrap()];
        let err = ring_iso_certify(&a, &a, &f, &g, 1000).unwrap_err();
        assert!(matches!(err, RewriteError::NotAHomomorphism(..)));
    }

    #[test]
    fn non_cycle_rejected() {
        let a = PresentedDgAlgebra::free(&[("x", 1)]).unwrap();
        let x = a.parse("x").unwrap();
        assert!(matches!(adjoin_inverses(&a, &[x]), Err(RewriteError::NotACycle(_))));
    }

    #[test]
    fn h0_adds_boundaries() {
        let mut a = PresentedDgAlgebra::free(&[("a", 0)]).unwrap();
        a.push_generator("s", 1, Poly::zero(), Some(BigInt::zero())).unwrap();
        a.differential[1] = a.parse("a").unwrap();
        let h = h0_ring(&a);
        assert_eq!(h.generators.len(), 1);
        let sys = complete(&h, 100).unwrap();
        assert!(sys.normal_form(&h.parse("a").unwrap()).is_zero());
    }
}
