//! Kan's loop group of a reduced simplicial set, the fundamental group
//! presentation, and the degree-0 comparison of its group ring with the
//! extended cobar construction.

use std::collections::HashMap;

use serde::Serialize;
use thiserror::Error;

use crate::dgcoalg::chains;
use crate::exactlin::{homology_window, HomologyGroup};
use crate::monoids::{abelianization, free_reduce, invert_word, GroupPresentation, Letter, Word};
use crate::rewrite::{extended_cobar, h0_ring, ring_iso_certify, CycleBasis, IsoCertificate, Poly, PresentedDgAlgebra, RewriteError};
use crate::simplicial::{fundamental_monoid, FormalSimplex, Simplicial, SimplicialError};
use crate::ValidationReport;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LoopGroupError {
    #[error("not reduced: {0} vertices")]
    NotReduced(usize),
    #[error("degree {0} is not finite")]
    Unbounded(usize),
    #[error("simplicial identities fail: {0}")]
    Identities(String),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error("{0}")]
    Upstream(String),
}

/// Level `n` of `G(K)`: free on the `(n+1)`-simplices outside the image of
/// `s₀`. `faces[i][g]` is `∂ᵢ` of generator `g`, a word in level `n-1`;
/// `degeneracies[i][g]` is `sᵢ g` in level `n+1` when that level was built.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LoopGroupLevel {
    pub n: usize,
    pub generators: Vec<String>,
    pub faces: Vec<Vec<Word>>,
    pub degeneracies: Vec<Vec<Word>>,
}

impl LoopGroupLevel {
    pub fn rank(&self) -> usize {
        self.generators.len()
    }
}

/// Increasing `k`-subsets of `lo..=hi`.
fn subsets(lo: usize, hi: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if lo > hi || hi - lo + 1 < k {
        return vec![];
    }
    let mut out = vec![];
    for first in lo..=hi {
        for mut rest in subsets(first + 1, hi, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn in_s0_image<Id>(x: &FormalSimplex<Id>) -> bool {
    x.degens.last() == Some(&0)
}

/// All `m`-simplices outside the image of `s₀`, nondegenerate first.
fn level_basis<K: Simplicial>(k: &K, m: usize) -> Result<Vec<FormalSimplex<K::Id>>, LoopGroupError> {
    let mut out = vec![];
    for d in (0..=m).rev() {
        let xs = k.simplices(d).finite().ok_or(LoopGroupError::Unbounded(d))?;
        for js in subsets(1, m - 1, m - d) {
            let degens: Vec<usize> = js.into_iter().rev().collect();
            for x in &xs {
                out.push(FormalSimplex {
                    base: x.clone(),
                    degens: degens.clone(),
                });
            }
        }
    }
    Ok(out)
}

fn show_formal<K: Simplicial>(k: &K, x: &FormalSimplex<K::Id>) -> String {
    let mut s = String::new();
    for j in &x.degens {
        s.push_str(&format!("s{j} "));
    }
    s.push_str(&k.label(&x.base));
    s
}

/// Levels `0..=hi` of `G(K)` with `∂₀ x̄ = (∂₁x)‾ · ((∂₀x)‾)⁻¹`,
/// `∂ᵢ x̄ = (∂ᵢ₊₁x)‾` for `i ≥ 1` and `sᵢ x̄ = (sᵢ₊₁x)‾`, where `ȳ = 1`
/// on the image of `s₀`. Simplicial identities are checked on the window.
pub fn kan_loop_group<K: Simplicial>(k: &K, hi: usize) -> Result<Vec<LoopGroupLevel>, LoopGroupError> {
    if !k.is_reduced() {
        let n = k.simplices(0).finite().map_or(0, |v| v.len());
        return Err(LoopGroupError::NotReduced(n));
    }
    let bases: Vec<Vec<FormalSimplex<K::Id>>> = (0..=hi + 1).map(|n| level_basis(k, n + 1)).collect::<Result<_, _>>()?;
    let index: Vec<HashMap<FormalSimplex<K::Id>, usize>> = bases
        .iter()
        .map(|b| b.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect())
        .collect();
    let bar = |level: usize, x: &FormalSimplex<K::Id>| -> Word {
        if in_s0_image(x) {
            vec![]
        } else {
            vec![Letter::gen(index[level][x])]
        }
    };
    let mut levels = vec![];
    for n in 0..=hi {
        let mut faces = vec![];
        if n >= 1 {
            for i in 0..=n {
                let row = bases[n]
                    .iter()
                    .map(|x| {
                        if i == 0 {
                            let mut w = bar(n - 1, &k.face_formal(x, 1));
                            w.extend(invert_word(&bar(n - 1, &k.face_formal(x, 0))));
                            free_reduce(&w)
                        } else {
                            bar(n - 1, &k.face_formal(x, i + 1))
                        }
                    })
                    .collect();
                faces.push(row);
            }
        }
        let mut degeneracies = vec![];
        if n < hi {
            for i in 0..=n {
                degeneracies.push(bases[n].iter().map(|x| bar(n + 1, &k.degeneracy(x, i + 1))).collect());
            }
        }
        levels.push(LoopGroupLevel {
            n,
            generators: bases[n].iter().map(|x| show_formal(k, x)).collect(),
            faces,
            degeneracies,
        });
    }
    let report = validate_loop_group(&levels);
    if !report.is_valid() {
        return Err(LoopGroupError::Identities(report.to_string()));
    }
    Ok(levels)
}

fn apply(images: &[Word], w: &[Letter]) -> Word {
    let mut out = vec![];
    for l in w {
        if l.inverse {
            out.extend(invert_word(&images[l.gen]));
        } else {
            out.extend_from_slice(&images[l.gen]);
        }
    }
    free_reduce(&out)
}

/// Face/face, degeneracy/degeneracy and face/degeneracy identities on the
/// generators of every level.
pub fn validate_loop_group(levels: &[LoopGroupLevel]) -> ValidationReport {
    let mut r = ValidationReport::default();
    for lv in levels {
        let n = lv.n;
        for g in 0..lv.rank() {
            let x = vec![Letter::gen(g)];
            let name = format!("{} (level {n})", lv.generators[g]);
            if n >= 2 {
                for j in 1..=n {
                    for i in 0..j {
                        let a = apply(&levels[n - 1].faces[i], &apply(&lv.faces[j], &x));
                        let b = apply(&levels[n - 1].faces[j - 1], &apply(&lv.faces[i], &x));
                        if a != b {
                            r.push("FaceFace", format!("d{i} d{j} on {name}"));
                        }
                    }
                }
            }
            if lv.degeneracies.is_empty() {
                continue;
            }
            let up = &levels[n + 1];
            for j in 0..=n {
                let sx = apply(&lv.degeneracies[j], &x);
                for i in 0..=n + 1 {
                    let lhs = apply(&up.faces[i], &sx);
                    let rhs = if i == j || i == j + 1 {
                        x.clone()
                    } else if i < j {
                        apply(&levels[n - 1].degeneracies[j - 1], &apply(&lv.faces[i], &x))
                    } else {
                        apply(&levels[n - 1].degeneracies[j], &apply(&lv.faces[i - 1], &x))
                    };
                    if lhs != rhs {
                        r.push("FaceDegeneracy", format!("d{i} s{j} on {name}"));
                    }
                }
                if !up.degeneracies.is_empty() {
                    for i in 0..=j {
                        let a = apply(&up.degeneracies[i], &sx);
                        let b = apply(&up.degeneracies[j + 1], &apply(&lv.degeneracies[i], &x));
                        if a != b {
                            r.push("DegeneracyDegeneracy", format!("s{i} s{j} on {name}"));
                        }
                    }
                }
            }
        }
    }
    r
}

/// `π₁` of a reduced set: one generator per nondegenerate edge and
/// `∂₁σ = ∂₂σ·∂₀σ` per nondegenerate triangle.
pub fn pi1_presentation<K: Simplicial>(k: &K) -> Result<GroupPresentation, LoopGroupError> {
    Ok(fundamental_monoid(k)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HurewiczCheck {
    pub abelianized_pi1: HomologyGroup,
    pub h1: HomologyGroup,
    pub agree: bool,
}

/// Abelianized `π₁` against `H₁` of the chains.
pub fn hurewicz_check<K: Simplicial>(k: &K) -> Result<HurewiczCheck, LoopGroupError> {
    let p = pi1_presentation(k)?;
    let ab = abelianization(&p);
    let c = chains(k, 2).map_err(|e| LoopGroupError::Upstream(e.to_string()))?;
    let h = homology_window(&c.complex).map_err(|e| LoopGroupError::Upstream(e.to_string()))?;
    let h1 = h.get(1).cloned().unwrap_or_else(HomologyGroup::zero);
    Ok(HurewiczCheck {
        agree: ab.same_group(&h1),
        abelianized_pi1: ab,
        h1,
    })
}

/// `ℤ[G]` for a group presentation: generators `x` and `x'` with
/// `x x' = x' x = 1`, plus the relations, augmented by 1.
pub fn group_ring(p: &GroupPresentation) -> Result<(PresentedDgAlgebra, Vec<(usize, usize)>), RewriteError> {
    let mut a = PresentedDgAlgebra::ground();
    let mut pairs = vec![];
    let mut taken = HashMap::new();
    let fresh = |l: String, taken: &HashMap<String, ()>| {
        let mut l = if crate::rewrite::valid_label(&l) { l } else { format!("[{l}]") };
        while taken.contains_key(&l) {
            l.push('\'');
        }
        l
    };
    for g in &p.generators {
        let x = fresh(g.clone(), &taken);
        taken.insert(x.clone(), ());
        let xi = fresh(format!("{x}'"), &taken);
        taken.insert(xi.clone(), ());
        let one = num_bigint::BigInt::from(1);
        let gx = a.push_generator(&x, 0, Poly::zero(), Some(one.clone()))?;
        let gi = a.push_generator(&xi, 0, Poly::zero(), Some(one))?;
        pairs.push((gx, gi));
    }
    let word = |w: &[Letter]| -> Poly {
        w.iter().fold(Poly::one(), |acc, l| {
            let (x, xi) = pairs[l.gen];
            acc.mul(&Poly::generator(if l.inverse { xi } else { x }))
        })
    };
    for &(x, xi) in &pairs {
        let (px, pi) = (Poly::generator(x), Poly::generator(xi));
        a.relations.push(crate::rewrite::Relation::new(px.mul(&pi), Poly::one()));
        a.relations.push(crate::rewrite::Relation::new(pi.mul(&px), Poly::one()));
    }
    for (u, w) in &p.relations {
        a.relations.push(crate::rewrite::Relation::new(word(u), word(w)));
    }
    Ok((a, pairs))
}

#[derive(Clone, Debug, Serialize)]
pub struct H0Comparison {
    pub pi1: GroupPresentation,
    pub group_ring: PresentedDgAlgebra,
    pub h0: PresentedDgAlgebra,
    pub certificate: IsoCertificate,
}

/// Compare `ℤ[π₁K]` with `H₀` of the extended cobar construction along
/// `x ↦ 1 + s⁻¹x`, `x⁻¹ ↦ v_x`.
pub fn h0_compare<K: Simplicial>(k: &K, budget: usize) -> Result<H0Comparison, LoopGroupError> {
    let p = pi1_presentation(k)?;
    let (ring, pairs) = group_ring(&p)?;
    let ext = extended_cobar(k, 2, CycleBasis::Natural)?;
    let h0 = h0_ring(&ext);
    let n = p.generators.len();
    // degree-0 generators of the extended cobar: the edges in order, then their inverses
    debug_assert_eq!(h0.generators.len(), 2 * n);
    let mut f = vec![Poly::zero(); ring.generators.len()];
    let mut g = vec![Poly::zero(); h0.generators.len()];
    for (e, &(x, xi)) in pairs.iter().enumerate() {
        f[x] = Poly::one().add(&Poly::generator(e));
        f[xi] = Poly::generator(n + e);
        g[e] = Poly::generator(x).sub(&Poly::one());
        g[n + e] = Poly::generator(xi);
    }
    let certificate = ring_iso_certify(&ring, &h0, &f, &g, budget)?;
    Ok(H0Comparison {
        pi1: p,
        group_ring: ring,
        h0,
        certificate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoids::group_completion;
    use crate::simplicial::{collapsed_tetrahedron, minimal_sphere, point, rp2};

    #[test]
    fn circle_loop_group() {
        let g = kan_loop_group(&minimal_sphere(1), 2).unwrap();
        assert_eq!(g[0].rank(), 1);
        assert_eq!(g[1].rank(), 1);
        assert_eq!(g[0].generators, vec!["e1"]);
    }

    #[test]
    fn sphere_loop_group() {
        let g = kan_loop_group(&minimal_sphere(2), 2).unwrap();
        assert_eq!(g[0].rank(), 0);
        assert_eq!(g[1].rank(), 1);
        let p = kan_loop_group(&point(), 3).unwrap();
        assert!(p.iter().all(|l| l.rank() == 0));
    }

    #[test]
    fn identities_on_larger_models() {
        assert!(kan_loop_group(&rp2(), 2).is_ok());
        assert!(kan_loop_group(&collapsed_tetrahedron(), 2).is_ok());
        assert!(kan_loop_group(&minimal_sphere(3), 3).is_ok());
    }

    #[test]
    fn fundamental_groups() {
        let s1 = pi1_presentation(&minimal_sphere(1)).unwrap();
        assert_eq!(s1.generators.len(), 1);
        assert!(s1.relations.is_empty());
        assert_eq!(group_completion(&pi1_presentation(&collapsed_tetrahedron()).unwrap(), 100).order(), Some(1));
        assert_eq!(group_completion(&pi1_presentation(&rp2()).unwrap(), 100).order(), Some(2));
    }

    #[test]
    fn hurewicz() {
        let h = hurewicz_check(&rp2()).unwrap();
        assert!(h.agree);
        assert!(h.h1.same_group(&HomologyGroup::with_torsion(0, &[2])));
    }

    #[test]
    fn h0_of_circle_and_rp2() {
        h0_compare(&minimal_sphere(1), 10_000).unwrap();
        h0_compare(&rp2(), 10_000).unwrap();
        h0_compare(&collapsed_tetrahedron(), 10_000).unwrap();
        h0_compare(&minimal_sphere(2), 10_000).unwrap();
    }
}
