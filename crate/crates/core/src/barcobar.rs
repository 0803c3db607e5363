//! Bar construction of augmented dg algebras, cobar construction of
//! conilpotent dg coalgebras, the nerve/bar isomorphism and the unit and
//! counit comparisons.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::dgcoalg::{
    chains, filtered_quasi_iso_window, skeletal_filtration, AdmissibleFiltration, CoalgebraMap, DgCoalgebraWindow,
    DgError, Tensor2, Verdict,
};
use crate::exactlin::{induces_iso_at, ChainComplexWindow, ChainMap, IntMatrix, LinError};
use crate::monoids::{monoid_algebra, validate_monoid, FiniteMonoid};
use crate::rewrite::{valid_label, AlgebraWindow, Monomial, Poly, PresentedDgAlgebra, RewriteError};
use crate::signs::{bar_internal, bar_merge, cobar_quadratic, COBAR_LINEAR};
use crate::simplicial::{Nerve, Simplicial};

/// Completion budget and basis cap used when the caller gives none.
pub const DEFAULT_BUDGET: usize = 100_000;
pub const DEFAULT_CAP: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BarCobarError {
    #[error("degree {degree} of the bar construction is not finite")]
    InfiniteRank { degree: usize },
    #[error("algebra window reaches degree {have}, need {need}")]
    WindowTooSmall { have: usize, need: usize },
    #[error("coalgebra is not conilpotent: {0}")]
    NotConilpotent(String),
    #[error("algebra has augmentation ideal in degree 0")]
    NotConnected,
    #[error("coalgebra has reduced part below degree 2")]
    NotSimplyConnected,
    #[error("nerve and bar differ at degree {degree}, element {element}")]
    MismatchAt { degree: usize, element: String },
    #[error("invalid monoid: {0}")]
    InvalidMonoid(String),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
    #[error(transparent)]
    Dg(#[from] DgError),
    #[error(transparent)]
    Lin(#[from] LinError),
}

/// A bar word: letters `(degree, index)` into the basis of `A₊`.
pub type BarWord = Vec<(usize, usize)>;

fn suspended(w: &[(usize, usize)]) -> usize {
    w.iter().map(|(d, _)| d + 1).sum()
}

fn words_of_degree(a: &AlgebraWindow, n: usize) -> Vec<BarWord> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    for first in 0..n {
        for i in 0..a.plus_rank(first) {
            for rest in words_of_degree(a, n - first - 1) {
                let mut w = vec![(first, i)];
                w.extend(rest);
                out.push(w);
            }
        }
    }
    out
}

/// Basis words of `B(A)` by degree, as used by [`bar`].
pub fn bar_words(a: &AlgebraWindow, hi: usize) -> Vec<Vec<BarWord>> {
    (0..=hi).map(|n| words_of_degree(a, n)).collect()
}

fn show_word(a: &AlgebraWindow, w: &[(usize, usize)]) -> String {
    let parts: Vec<String> = w.iter().map(|&(d, i)| a.show_plus(d, i)).collect();
    format!("[{}]", parts.join("|"))
}

/// `B(A)` in degrees `0..=hi`: words in `sA₊`, deconcatenation coproduct,
/// coaugmented by the empty word.
pub fn bar(a: &AlgebraWindow, hi: usize) -> Result<DgCoalgebraWindow, BarCobarError> {
    if hi >= 1 && a.hi < hi - 1 {
        return Err(BarCobarError::WindowTooSmall { have: a.hi, need: hi - 1 });
    }
    let words = bar_words(a, hi);
    let index: Vec<HashMap<BarWord, usize>> = words
        .iter()
        .map(|ws| ws.iter().cloned().enumerate().map(|(i, w)| (w, i)).collect())
        .collect();
    let ranks: Vec<usize> = words.iter().map(Vec::len).collect();
    let mut boundaries = vec![];
    for n in 1..=hi {
        let mut d = IntMatrix::zeros(ranks[n - 1], ranks[n]);
        for (col, w) in words[n].iter().enumerate() {
            let mut prefix = 0;
            for (i, &(deg, idx)) in w.iter().enumerate() {
                if deg >= 1 {
                    let s = BigInt::from(bar_internal(prefix));
                    for (j, c) in a.plus_d(deg, idx).into_iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let mut v = w.clone();
                        v[i] = (deg - 1, j);
                        d.add_to(index[n - 1][&v], col, &(&s * c));
                    }
                }
                prefix += deg + 1;
                if i + 1 < w.len() {
                    let (deg2, idx2) = w[i + 1];
                    let s = BigInt::from(bar_merge(prefix));
                    for (j, c) in a.plus_product(deg, idx, deg2, idx2).into_iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let mut v = w[..i].to_vec();
                        v.push((deg + deg2, j));
                        v.extend_from_slice(&w[i + 2..]);
                        d.add_to(index[n - 1][&v], col, &(&s * c));
                    }
                }
            }
        }
        boundaries.push(d);
    }
    let complex = ChainComplexWindow::new(0, hi, ranks.clone(), boundaries, true)?;
    let coproduct = words
        .iter()
        .map(|ws| {
            ws.iter()
                .map(|w| {
                    let mut t = Tensor2::new();
                    for cut in 0..=w.len() {
                        let (l, r) = w.split_at(cut);
                        let p = suspended(l);
                        t.insert((p, index[p][l], index[suspended(r)][r]), BigInt::one());
                    }
                    t
                })
                .collect()
        })
        .collect();
    let mut counit = vec![BigInt::zero(); ranks[0]];
    counit[0] = BigInt::one();
    Ok(DgCoalgebraWindow {
        complex,
        labels: words.iter().map(|ws| ws.iter().map(|w| show_word(a, w)).collect()).collect(),
        coproduct,
        counit,
        coaugmentation: Some(0),
    })
}

fn cobar_label(label: &str, taken: &HashMap<String, ()>) -> String {
    let mut l = if valid_label(label) { label.to_string() } else { format!("[{label}]") };
    if !valid_label(&l) {
        l = format!("c{}", l.chars().filter(|c| c.is_alphanumeric()).collect::<String>());
    }
    while taken.contains_key(&l) {
        l.push('\'');
    }
    l
}

/// `Ω(C)` together with the coalgebra basis element behind each generator.
pub fn cobar_with_sources(
    c: &DgCoalgebraWindow,
    hi: usize,
) -> Result<(PresentedDgAlgebra, Vec<(usize, usize)>), BarCobarError> {
    c.check_conilpotent().map_err(BarCobarError::NotConilpotent)?;
    let top = hi.min(c.hi());
    let mut a = PresentedDgAlgebra::ground();
    let mut sources = vec![];
    let mut gen_of: HashMap<(usize, usize), usize> = HashMap::new();
    let mut taken = HashMap::new();
    for n in 1..=top {
        for i in 0..c.rank(n) {
            let label = cobar_label(c.label(n, i), &taken);
            taken.insert(label.clone(), ());
            let g = a.push_generator(&label, n - 1, Poly::zero(), Some(BigInt::zero()))?;
            gen_of.insert((n, i), g);
            sources.push((n, i));
        }
    }
    for (g, &(n, i)) in sources.clone().iter().enumerate() {
        let mut d = Poly::zero();
        if n >= 2 {
            for (j, x) in c.d_of(n, i).iter().enumerate() {
                if !x.is_zero() {
                    d.add_term(x * COBAR_LINEAR, Monomial::letter(gen_of[&(n - 1, j)]));
                }
            }
        }
        for (&(p, l, r), x) in &c.reduced_coproduct(n, i) {
            let s = cobar_quadratic(p);
            d.add_term(x * s, Monomial(vec![gen_of[&(p, l)], gen_of[&(n - p, r)]]));
        }
        a.differential[g] = d;
    }
    a.validate()?;
    Ok((a, sources))
}

/// `Ω(C)`: the tensor algebra on `s⁻¹C̄` in degrees below `hi`.
pub fn cobar(c: &DgCoalgebraWindow, hi: usize) -> Result<PresentedDgAlgebra, BarCobarError> {
    Ok(cobar_with_sources(c, hi)?.0)
}

#[derive(Clone, Debug, Serialize)]
pub struct NerveBarCertificate {
    pub hi: usize,
    pub ranks: Vec<usize>,
    /// Boundary matrices, equal on both sides in matched bases.
    pub boundaries: Vec<IntMatrix>,
    pub coproduct_terms: usize,
}

/// Build `C(N M)` and `B(ℤM)` and check that `(m₁,…,mₙ) ↦ [m̲₁|…|m̲ₙ]`,
/// `m̲ = m - 1`, matches differentials and coproducts exactly.
pub fn nerve_bar_iso_check(m: &FiniteMonoid, hi: usize) -> Result<NerveBarCertificate, BarCobarError> {
    let report = validate_monoid(m);
    if !report.is_valid() {
        return Err(BarCobarError::InvalidMonoid(report.to_string()));
    }
    let nerve = Nerve::new(m);
    let cn = chains(&nerve, hi)?;
    let alg = monoid_algebra(m).map_err(|e| BarCobarError::InvalidMonoid(e.to_string()))?;
    let w = AlgebraWindow::new(&alg, hi, DEFAULT_BUDGET, DEFAULT_CAP)?;
    let b = bar(&w, hi)?;
    let letter: HashMap<usize, usize> = m
        .non_identity()
        .into_iter()
        .enumerate()
        .map(|(g, elem)| {
            let pos = w.plus_basis(0).iter().position(|x| *x == Monomial::letter(g));
            (elem, pos.expect("generator is a normal monomial"))
        })
        .collect();
    let words = bar_words(&w, hi);
    let mut perm = vec![];
    for n in 0..=hi {
        let tuples = nerve.simplices(n).finite().expect("finite nerve");
        let idx: HashMap<&BarWord, usize> = words[n].iter().enumerate().map(|(i, x)| (x, i)).collect();
        let mut p = IntMatrix::zeros(b.rank(n), cn.rank(n));
        if b.rank(n) != cn.rank(n) {
            return Err(BarCobarError::MismatchAt {
                degree: n,
                element: format!("rank {} vs {}", cn.rank(n), b.rank(n)),
            });
        }
        for (j, t) in tuples.iter().enumerate() {
            let word: BarWord = t.iter().map(|x| (0, letter[x])).collect();
            p.set(idx[&word], j, BigInt::one());
        }
        perm.push(p);
    }
    for n in 1..=hi {
        let left = b.complex.boundary(n).mul(&perm[n]);
        let right = perm[n - 1].mul(cn.complex.boundary(n));
        for j in 0..cn.rank(n) {
            if left.column(j) != right.column(j) {
                return Err(BarCobarError::MismatchAt {
                    degree: n,
                    element: cn.label(n, j).to_string(),
                });
            }
        }
    }
    let position = |n: usize, i: usize| -> usize { (0..b.rank(n)).find(|&r| !perm[n].get(r, i).is_zero()).unwrap() };
    let mut terms = 0;
    for n in 0..=hi {
        for j in 0..cn.rank(n) {
            let mapped: Tensor2 = cn.coproduct[n][j]
                .iter()
                .map(|(&(p, l, r), x)| ((p, position(p, l), position(n - p, r)), x.clone()))
                .collect();
            if mapped != b.coproduct[n][position(n, j)] {
                return Err(BarCobarError::MismatchAt {
                    degree: n,
                    element: cn.label(n, j).to_string(),
                });
            }
            terms += mapped.len();
        }
    }
    Ok(NerveBarCertificate {
        hi,
        ranks: cn.complex.ranks.clone(),
        boundaries: cn.complex.boundaries.clone(),
        coproduct_terms: terms,
    })
}

/// The chain complex underlying an algebra window, on its full monomial basis.
pub fn algebra_complex(w: &AlgebraWindow, hi: usize) -> Result<ChainComplexWindow, BarCobarError> {
    let hi = hi.min(w.hi);
    let ranks: Vec<usize> = (0..=hi).map(|n| w.basis(n).len()).collect();
    let mut boundaries = vec![];
    for n in 1..=hi {
        let mut d = IntMatrix::zeros(ranks[n - 1], ranks[n]);
        for (j, m) in w.basis(n).iter().enumerate() {
            let dm = w.system.normal_form(&w.algebra.d(&Poly::monomial(BigInt::one(), m.clone())));
            for (i, b) in w.basis(n - 1).iter().enumerate() {
                d.set(i, j, dm.coeff(b));
            }
        }
        boundaries.push(d);
    }
    Ok(ChainComplexWindow::new(0, hi, ranks, boundaries, true)?)
}

fn coords(w: &AlgebraWindow, p: &Poly, n: usize) -> Vec<BigInt> {
    let nf = w.system.normal_form(p);
    w.basis(n).iter().map(|b| nf.coeff(b)).collect()
}

/// `ΩB(A) → A` on degrees `0..=hi`: `s⁻¹[a] ↦ a`, longer words to zero.
/// Homology is compared in degrees below `hi`.
pub fn counit_check(a: &PresentedDgAlgebra, hi: usize, budget: usize, cap: usize) -> Result<Verdict, BarCobarError> {
    let wa = AlgebraWindow::new(a, hi, budget, cap)?;
    if !wa.is_connected() {
        return Err(BarCobarError::NotConnected);
    }
    let b = bar(&wa, hi + 1)?;
    let (omega, sources) = cobar_with_sources(&b, hi + 1)?;
    let wo = AlgebraWindow::new(&omega, hi, budget, cap)?;
    let words = bar_words(&wa, hi + 1);
    let images: Vec<Poly> = sources
        .iter()
        .map(|&(n, i)| match words[n][i].as_slice() {
            [(deg, idx)] => wa.plus_element(*deg, *idx),
            _ => Poly::zero(),
        })
        .collect();
    let src = algebra_complex(&wo, hi)?;
    let dst = algebra_complex(&wa, hi)?;
    let components = (0..=hi)
        .map(|n| {
            let mut m = IntMatrix::zeros(dst.rank(n), src.rank(n));
            for (j, x) in wo.basis(n).iter().enumerate() {
                let img = Poly::monomial(BigInt::one(), x.clone()).substitute(&images);
                for (i, c) in coords(&wa, &img, n).into_iter().enumerate() {
                    m.set(i, j, c);
                }
            }
            m
        })
        .collect();
    let f = ChainMap { components };
    f.check(&src, &dst)?;
    for n in 0..hi {
        if !induces_iso_at(&src, &dst, &f, n)? {
            return Ok(Verdict::Fails { level: None, degree: n });
        }
    }
    Ok(Verdict::QuasiIso)
}

/// The unit `C → BΩ(C)`, `c ↦ Σ_k [s⁻¹c₍₁₎|…|s⁻¹c₍ₖ₎]` over the iterated
/// reduced coproduct, with the skeletal filtration on `C` and the
/// filtration of `BΩ(C)` by total coalgebra degree of the cobar letters.
pub struct UnitData {
    pub bar_omega: DgCoalgebraWindow,
    pub map: CoalgebraMap,
    pub source_filtration: AdmissibleFiltration,
    pub target_filtration: AdmissibleFiltration,
}

pub fn unit_map(c: &DgCoalgebraWindow, hi: usize, budget: usize, cap: usize) -> Result<UnitData, BarCobarError> {
    let hi = hi.min(c.hi());
    if c.coaugmentation.is_none() || c.rank(0) != 1 || (hi >= 1 && c.rank(1) != 0) {
        return Err(BarCobarError::NotSimplyConnected);
    }
    let (omega, sources) = cobar_with_sources(c, hi)?;
    let wo = AlgebraWindow::new(&omega, hi.saturating_sub(1), budget, cap)?;
    let b = bar(&wo, hi)?;
    let words = bar_words(&wo, hi);
    let index: Vec<HashMap<&BarWord, usize>> =
        words.iter().map(|ws| ws.iter().enumerate().map(|(i, w)| (w, i)).collect()).collect();
    let gen_of: HashMap<(usize, usize), usize> = sources.iter().enumerate().map(|(g, &s)| (s, g)).collect();
    let letter_of = |n: usize, i: usize| -> (usize, usize) {
        let g = gen_of[&(n, i)];
        let pos = wo.plus_basis(n - 1).iter().position(|m| *m == Monomial::letter(g)).expect("generator is normal");
        (n - 1, pos)
    };
    let mut components = vec![];
    for n in 0..=hi {
        let mut m = IntMatrix::zeros(b.rank(n), c.rank(n));
        for i in 0..c.rank(n) {
            if n == 0 {
                m.set(0, i, BigInt::one());
                continue;
            }
            let mut cur: BTreeMap<Vec<(usize, usize)>, BigInt> = BTreeMap::new();
            cur.insert(vec![(n, i)], BigInt::one());
            while !cur.is_empty() {
                let mut next: BTreeMap<Vec<(usize, usize)>, BigInt> = BTreeMap::new();
                for (tensor, x) in &cur {
                    let word: BarWord = tensor.iter().map(|&(d, j)| letter_of(d, j)).collect();
                    m.add_to(index[n][&word], i, x);
                    let &(deg, j) = tensor.last().unwrap();
                    for (&(p, l, r), y) in &c.reduced_coproduct(deg, j) {
                        let mut t = tensor[..tensor.len() - 1].to_vec();
                        t.push((p, l));
                        t.push((deg - p, r));
                        *next.entry(t).or_insert_with(BigInt::zero) += x * y;
                    }
                }
                next.retain(|_, v| !v.is_zero());
                cur = next;
            }
        }
        components.push(m);
    }
    let map = CoalgebraMap {
        map: ChainMap { components },
    };
    let mut c_trunc = c.clone();
    truncate(&mut c_trunc, hi);
    let source_filtration = skeletal_filtration(&c_trunc)?;
    let level_of_letter = |deg: usize, idx: usize| -> usize {
        let m = &wo.plus_basis(deg)[idx];
        m.0.iter().map(|&g| sources[g].0).sum()
    };
    let target_filtration = AdmissibleFiltration {
        level: words
            .iter()
            .map(|ws| ws.iter().map(|w| w.iter().map(|&(d, i)| level_of_letter(d, i)).sum()).collect())
            .collect(),
    };
    Ok(UnitData {
        bar_omega: b,
        map,
        source_filtration,
        target_filtration,
    })
}

fn truncate(c: &mut DgCoalgebraWindow, hi: usize) {
    if c.hi() == hi {
        return;
    }
    c.complex.hi = hi;
    c.complex.ranks.truncate(hi + 1);
    c.complex.boundaries.truncate(hi);
    c.labels.truncate(hi + 1);
    c.coproduct.truncate(hi + 1);
}

/// `C → BΩ(C)` as a filtered quasi-isomorphism on degrees below `hi`.
pub fn unit_check(c: &DgCoalgebraWindow, hi: usize, budget: usize, cap: usize) -> Result<Verdict, BarCobarError> {
    let u = unit_map(c, hi, budget, cap)?;
    let mut src = c.clone();
    truncate(&mut src, hi.min(c.hi()));
    u.map.check(&src, &u.bar_omega)?;
    Ok(filtered_quasi_iso_window(
        &u.map,
        &src,
        &u.bar_omega,
        &u.source_filtration,
        &u.target_filtration,
    )?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::{homology_window, HomologyGroup};
    use crate::simplicial::{collapsed_tetrahedron, minimal_sphere, rp2};

    fn exterior() -> PresentedDgAlgebra {
        let mut a = PresentedDgAlgebra::free(&[("x", 1)]).unwrap();
        a.relate("x*x", "0").unwrap();
        a
    }

    #[test]
    fn bar_of_ground_ring() {
        let w = AlgebraWindow::new(&PresentedDgAlgebra::ground(), 3, 100, 100).unwrap();
        let b = bar(&w, 3).unwrap();
        assert_eq!(b.complex.ranks, vec![1, 0, 0, 0]);
    }

    #[test]
    fn bar_of_exterior_algebra() {
        let w = AlgebraWindow::new(&exterior(), 5, 100, 100).unwrap();
        let b = bar(&w, 6).unwrap();
        assert_eq!(b.complex.ranks, vec![1, 0, 1, 0, 1, 0, 1]);
        assert!(b.complex.boundaries.iter().all(IntMatrix::is_zero));
        assert!(b.check_laws().is_valid());
    }

    #[test]
    fn bar_of_idempotent_is_a_coalgebra() {
        let alg = monoid_algebra(&FiniteMonoid::idempotent()).unwrap();
        let w = AlgebraWindow::new(&alg, 4, 1000, 100).unwrap();
        let b = bar(&w, 4).unwrap();
        assert_eq!(b.complex.ranks, vec![1, 1, 1, 1, 1]);
        assert!(b.check_laws().is_valid());
        let h = homology_window(&b.complex).unwrap();
        assert!(h.get(0).unwrap().same_group(&HomologyGroup::free(1)));
        for n in 1..4 {
            assert!(h.get(n).unwrap().is_zero());
        }
    }

    #[test]
    fn nerve_bar_small_monoids() {
        for m in [FiniteMonoid::trivial(), FiniteMonoid::idempotent(), FiniteMonoid::cyclic(2), FiniteMonoid::cyclic(3)] {
            let cert = nerve_bar_iso_check(&m, 4).unwrap();
            assert_eq!(cert.ranks.len(), 5);
        }
    }

    #[test]
    fn cobar_of_circle_and_sphere() {
        let c = chains(&minimal_sphere(1), 2).unwrap();
        let o = cobar(&c, 2).unwrap();
        assert_eq!(o.generators.len(), 1);
        assert_eq!(o.generators[0].degree, 0);
        assert!(o.differential[0].is_zero());
        let c = chains(&minimal_sphere(2), 3).unwrap();
        let o = cobar(&c, 3).unwrap();
        assert_eq!(o.generators.len(), 1);
        assert_eq!(o.generators[0].degree, 1);
        assert!(o.differential[0].is_zero());
    }

    #[test]
    fn cobar_of_collapsed_tetrahedron() {
        let c = chains(&collapsed_tetrahedron(), 2).unwrap();
        let o = cobar(&c, 2).unwrap();
        assert_eq!(o.generators_of_degree(0).count(), 3);
        assert_eq!(o.generators_of_degree(1).count(), 4);
        let t = o.generator("[123]").unwrap();
        assert_eq!(o.show(&o.differential[t]), o.show(&o.parse("-[12] + [13] - [23] - [12]*[23]").unwrap()));
        for g in 0..o.generators.len() {
            assert!(o.d(&o.d(&Poly::generator(g))).is_zero());
        }
    }

    #[test]
    fn cobar_of_rp2() {
        let c = chains(&rp2(), 2).unwrap();
        let o = cobar(&c, 2).unwrap();
        let f = o.generator("f").unwrap();
        assert_eq!(o.show(&o.differential[f]), o.show(&o.parse("-2*e - e*e").unwrap()));
    }

    #[test]
    fn counit_small_windows() {
        assert!(counit_check(&PresentedDgAlgebra::ground(), 3, 1000, 1000).unwrap().is_quasi_iso());
        assert!(counit_check(&exterior(), 3, 1000, 1000).unwrap().is_quasi_iso());
        let alg = monoid_algebra(&FiniteMonoid::idempotent()).unwrap();
        assert_eq!(counit_check(&alg, 2, 1000, 1000), Err(BarCobarError::NotConnected));
    }

    #[test]
    fn unit_on_spheres() {
        let c = chains(&minimal_sphere(2), 4).unwrap();
        let u = unit_map(&c, 4, 1000, 1000).unwrap();
        assert!(crate::dgcoalg::check_admissible(&u.bar_omega, &u.target_filtration).is_valid());
        assert!(unit_check(&c, 4, 1000, 1000).unwrap().is_quasi_iso());
        let circle = chains(&minimal_sphere(1), 3).unwrap();
        assert!(matches!(unit_check(&circle, 3, 100, 100), Err(BarCobarError::NotSimplyConnected)));
    }
}
