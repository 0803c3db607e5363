//! Windows of degreewise finite dg coalgebras over ℤ, admissible
//! filtrations and filtered quasi-isomorphism checks.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactlin::{bigint_str, induces_iso_at, ChainComplexWindow, ChainMap, IntMatrix, LinError};
use crate::signs::{koszul, parity};
use crate::simplicial::{Enumeration, Simplicial};
use crate::ValidationReport;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DgError {
    #[error("degree {0} has infinitely many nondegenerate simplices")]
    UnboundedDegree(usize),
    #[error("coalgebra has no coaugmentation")]
    NotCoaugmented,
    #[error("filtration is not admissible: {0}")]
    NotAdmissible(String),
    #[error("map does not respect the filtrations at degree {degree}, element {element}")]
    FiltrationNotRespected { degree: usize, element: String },
    #[error("not a coalgebra map: {0}")]
    NotACoalgebraMap(String),
    #[error("windows differ: {0}")]
    WindowMismatch(String),
    #[error(transparent)]
    Lin(#[from] LinError),
}

/// `Σ c · (basis p, i) ⊗ (basis n-p, j)`, keyed by `(p, i, j)`.
pub type Tensor2 = BTreeMap<(usize, usize, usize), BigInt>;

fn add_to<K: Ord>(t: &mut BTreeMap<K, BigInt>, k: K, c: BigInt) {
    if c.is_zero() {
        return;
    }
    let e = t.entry(k).or_insert_with(BigInt::zero);
    *e += c;
    if e.is_zero() {
        // re-borrow to remove
    }
}

fn prune<K: Ord + Clone>(t: BTreeMap<K, BigInt>) -> BTreeMap<K, BigInt> {
    t.into_iter().filter(|(_, c)| !c.is_zero()).collect()
}

/// A dg coalgebra truncated to degrees `0..=hi`, bounded below at 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DgCoalgebraWindow {
    pub complex: ChainComplexWindow,
    pub labels: Vec<Vec<String>>,
    /// `coproduct[n][i]` is `Δ` of basis element `i` in degree `n`.
    pub coproduct: Vec<Vec<Tensor2>>,
    pub counit: Vec<BigInt>,
    pub coaugmentation: Option<usize>,
}

impl DgCoalgebraWindow {
    pub fn hi(&self) -> usize {
        self.complex.hi
    }

    pub fn rank(&self, n: usize) -> usize {
        self.complex.rank(n)
    }

    pub fn label(&self, n: usize, i: usize) -> &str {
        &self.labels[n][i]
    }

    /// `d` of basis element `i` in degree `n ≥ 1`, as a column.
    pub fn d_of(&self, n: usize, i: usize) -> Vec<BigInt> {
        if n == 0 {
            return vec![];
        }
        self.complex.boundary(n).column(i)
    }

    fn is_unit(&self, deg: usize, i: usize) -> bool {
        deg == 0 && self.coaugmentation == Some(i)
    }

    /// `Δx - x⊗1 - 1⊗x`, dropping every term with a coaugmentation factor.
    pub fn reduced_coproduct(&self, n: usize, i: usize) -> Tensor2 {
        self.coproduct[n][i]
            .iter()
            .filter(|((p, a, b), _)| !self.is_unit(*p, *a) && !self.is_unit(n - p, *b))
            .map(|(k, c)| (*k, c.clone()))
            .collect()
    }

    /// Coassociativity, counit, coderivation and conilpotence on every basis
    /// element of the window.
    pub fn check_laws(&self) -> ValidationReport {
        let mut r = ValidationReport::default();
        let hi = self.hi();
        for n in 0..=hi {
            for i in 0..self.rank(n) {
                let name = format!("{} (degree {n})", self.labels[n][i]);
                if self.coassoc_left(n, i) != self.coassoc_right(n, i) {
                    r.push("Coassociativity", name.clone());
                }
                let (l, rt) = self.counit_images(n, i);
                let mut unit = vec![BigInt::zero(); self.rank(n)];
                unit[i] = BigInt::one();
                if l != unit || rt != unit {
                    r.push("Counit", name.clone());
                }
                if n >= 1 && self.delta_of_d(n, i) != self.d_of_delta(n, i) {
                    r.push("Coderivation", name.clone());
                }
            }
        }
        if let Err(e) = self.check_conilpotent() {
            r.push("Conilpotence", e);
        }
        r
    }

    fn coassoc_left(&self, n: usize, i: usize) -> BTreeMap<(usize, usize, usize, usize, usize), BigInt> {
        let mut out = BTreeMap::new();
        for (&(p, a, b), c) in &self.coproduct[n][i] {
            for (&(p1, a1, a2), c2) in &self.coproduct[p][a] {
                add_to(&mut out, (p1, p - p1, a1, a2, b), c * c2);
            }
        }
        prune(out)
    }

    fn coassoc_right(&self, n: usize, i: usize) -> BTreeMap<(usize, usize, usize, usize, usize), BigInt> {
        let mut out = BTreeMap::new();
        for (&(p, a, b), c) in &self.coproduct[n][i] {
            for (&(q1, b1, b2), c2) in &self.coproduct[n - p][b] {
                add_to(&mut out, (p, q1, a, b1, b2), c * c2);
            }
        }
        prune(out)
    }

    fn counit_images(&self, n: usize, i: usize) -> (Vec<BigInt>, Vec<BigInt>) {
        let mut left = vec![BigInt::zero(); self.rank(n)];
        let mut right = vec![BigInt::zero(); self.rank(n)];
        for (&(p, a, b), c) in &self.coproduct[n][i] {
            if p == 0 {
                left[b] += c * &self.counit[a];
            }
            if p == n {
                right[a] += c * &self.counit[b];
            }
        }
        (left, right)
    }

    fn delta_of_d(&self, n: usize, i: usize) -> Tensor2 {
        let mut out = BTreeMap::new();
        for (y, c) in self.d_of(n, i).iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (&k, c2) in &self.coproduct[n - 1][y] {
                add_to(&mut out, k, c * c2);
            }
        }
        prune(out)
    }

    fn d_of_delta(&self, n: usize, i: usize) -> Tensor2 {
        let mut out = BTreeMap::new();
        for (&(p, a, b), c) in &self.coproduct[n][i] {
            let q = n - p;
            if p >= 1 {
                for (a2, c2) in self.d_of(p, a).iter().enumerate() {
                    if !c2.is_zero() {
                        add_to(&mut out, (p - 1, a2, b), c * c2);
                    }
                }
            }
            if q >= 1 {
                let s = BigInt::from(koszul(p));
                for (b2, c2) in self.d_of(q, b).iter().enumerate() {
                    if !c2.is_zero() {
                        add_to(&mut out, (p, a, b2), c * c2 * &s);
                    }
                }
            }
        }
        prune(out)
    }

    /// The iterated reduced coproduct vanishes on every basis element.
    pub fn check_conilpotent(&self) -> Result<(), String> {
        let Some(_) = self.coaugmentation else {
            return Err("no coaugmentation".into());
        };
        if self.rank(0) != 1 {
            return Err("degree 0 is larger than the coaugmentation".into());
        }
        for n in 1..=self.hi() {
            for i in 0..self.rank(n) {
                // multi-tensors as lists of (degree, index)
                let mut cur: BTreeMap<Vec<(usize, usize)>, BigInt> = BTreeMap::new();
                cur.insert(vec![(n, i)], BigInt::one());
                let mut steps = 0;
                while !cur.is_empty() {
                    if steps > n {
                        return Err(format!("{} survives {steps} reduced coproducts", self.labels[n][i]));
                    }
                    let mut next = BTreeMap::new();
                    for (word, c) in &cur {
                        let &(deg, idx) = word.last().unwrap();
                        for (&(p, a, b), c2) in &self.reduced_coproduct(deg, idx) {
                            let mut w = word[..word.len() - 1].to_vec();
                            w.push((p, a));
                            w.push((deg - p, b));
                            add_to(&mut next, w, c * c2);
                        }
                    }
                    cur = prune(next);
                    steps += 1;
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    left_degree: usize,
    left: usize,
    right: usize,
    #[serde(with = "bigint_str")]
    coeff: BigInt,
}

#[derive(Serialize, Deserialize)]
struct WindowRepr {
    complex: ChainComplexWindow,
    labels: Vec<Vec<String>>,
    coproduct: Vec<Vec<Vec<TermRepr>>>,
    #[serde(with = "crate::exactlin::bigint_vec_str")]
    counit: Vec<BigInt>,
    coaugmentation: Option<usize>,
}

impl Serialize for DgCoalgebraWindow {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        WindowRepr {
            complex: self.complex.clone(),
            labels: self.labels.clone(),
            coproduct: self
                .coproduct
                .iter()
                .map(|deg| {
                    deg.iter()
                        .map(|t| {
                            t.iter()
                                .map(|(&(p, a, b), c)| TermRepr {
                                    left_degree: p,
                                    left: a,
                                    right: b,
                                    coeff: c.clone(),
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect(),
            counit: self.counit.clone(),
            coaugmentation: self.coaugmentation,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DgCoalgebraWindow {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = WindowRepr::deserialize(d)?;
        r.complex.validate().map_err(D::Error::custom)?;
        Ok(DgCoalgebraWindow {
            complex: r.complex,
            labels: r.labels,
            coproduct: r
                .coproduct
                .into_iter()
                .map(|deg| {
                    deg.into_iter()
                        .map(|t| t.into_iter().map(|x| ((x.left_degree, x.left, x.right), x.coeff)).collect())
                        .collect()
                })
                .collect(),
            counit: r.counit,
            coaugmentation: r.coaugmentation,
        })
    }
}

/// Normalized chains of `k` in degrees `0..=hi` with the Alexander–Whitney
/// coproduct; coaugmented by the basepoint when `k` is reduced.
pub fn chains<K: Simplicial>(k: &K, hi: usize) -> Result<DgCoalgebraWindow, DgError> {
    let mut basis: Vec<Vec<K::Id>> = vec![];
    let mut index: Vec<HashMap<K::Id, usize>> = vec![];
    for n in 0..=hi {
        let Enumeration::Finite(xs) = k.simplices(n) else {
            return Err(DgError::UnboundedDegree(n));
        };
        index.push(xs.iter().cloned().enumerate().map(|(i, x)| (x, i)).collect());
        basis.push(xs);
    }
    let ranks: Vec<usize> = basis.iter().map(Vec::len).collect();
    let mut boundaries = vec![];
    for n in 1..=hi {
        let mut d = IntMatrix::zeros(ranks[n - 1], ranks[n]);
        for (j, x) in basis[n].iter().enumerate() {
            for i in 0..=n {
                let f = k.face(x, i);
                if !f.is_degenerate() {
                    d.add_to(index[n - 1][&f.base], j, &BigInt::from(parity(i)));
                }
            }
        }
        boundaries.push(d);
    }
    let complex = ChainComplexWindow::new(0, hi, ranks.clone(), boundaries, true)?;
    let mut coproduct = vec![];
    for n in 0..=hi {
        let mut per = vec![];
        for x in &basis[n] {
            let mut t = Tensor2::new();
            for p in 0..=n {
                let front = k.sub_simplex(x, 0, p);
                let back = k.sub_simplex(x, p, n);
                if front.is_degenerate() || back.is_degenerate() {
                    continue;
                }
                add_to(&mut t, (p, index[p][&front.base], index[n - p][&back.base]), BigInt::one());
            }
            per.push(prune(t));
        }
        coproduct.push(per);
    }
    let labels = basis
        .iter()
        .map(|xs| xs.iter().map(|x| k.label(x)).collect())
        .collect();
    let coaugmentation = if k.is_reduced() { Some(0) } else { None };
    Ok(DgCoalgebraWindow {
        complex,
        labels,
        coproduct,
        counit: vec![BigInt::one(); ranks[0]],
        coaugmentation,
    })
}

/// Filtration level of every basis element.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibleFiltration {
    pub level: Vec<Vec<usize>>,
}

impl AdmissibleFiltration {
    pub fn max_level(&self) -> usize {
        self.level.iter().flatten().copied().max().unwrap_or(0)
    }
}

/// Level 0 is exactly the coaugmentation, `d` does not raise the level and
/// `Δ` splits levels additively.
pub fn check_admissible(c: &DgCoalgebraWindow, f: &AdmissibleFiltration) -> ValidationReport {
    let mut r = ValidationReport::default();
    if f.level.len() != c.hi() + 1 || (0..=c.hi()).any(|n| f.level[n].len() != c.rank(n)) {
        r.push("Shape", "filtration does not cover the window");
        return r;
    }
    for n in 0..=c.hi() {
        for i in 0..c.rank(n) {
            let lv = f.level[n][i];
            let name = c.labels[n][i].clone();
            if (lv == 0) != c.is_unit(n, i) {
                r.push("LevelZero", format!("{name} at level {lv}"));
            }
            for (y, x) in c.d_of(n, i).iter().enumerate() {
                if !x.is_zero() && f.level[n - 1][y] > lv {
                    r.push("Differential", format!("d {name} leaves level {lv}"));
                }
            }
            for &(p, a, b) in c.coproduct[n][i].keys() {
                if f.level[p][a] + f.level[n - p][b] > lv {
                    r.push(
                        "Coproduct",
                        format!("{name}: {} ⊗ {} exceeds level {lv}", c.labels[p][a], c.labels[n - p][b]),
                    );
                }
            }
        }
    }
    r
}

/// Level = degree, except 0 on the coaugmentation.
pub fn skeletal_filtration(c: &DgCoalgebraWindow) -> Result<AdmissibleFiltration, DgError> {
    if c.coaugmentation.is_none() {
        return Err(DgError::NotCoaugmented);
    }
    let f = AdmissibleFiltration {
        level: (0..=c.hi())
            .map(|n| (0..c.rank(n)).map(|_| n).collect())
            .collect(),
    };
    let report = check_admissible(c, &f);
    if report.is_valid() {
        Ok(f)
    } else {
        Err(DgError::NotAdmissible(report.to_string()))
    }
}

/// A degreewise map of coalgebra windows over the same degrees.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoalgebraMap {
    pub map: ChainMap,
}

impl CoalgebraMap {
    pub fn component(&self, n: usize) -> &IntMatrix {
        self.map.component(0, n)
    }

    pub fn identity(c: &DgCoalgebraWindow) -> Self {
        CoalgebraMap {
            map: ChainMap {
                components: (0..=c.hi()).map(|n| IntMatrix::identity(c.rank(n))).collect(),
            },
        }
    }

    /// Chain map, counit, coaugmentation and coproduct compatibility.
    pub fn check(&self, src: &DgCoalgebraWindow, dst: &DgCoalgebraWindow) -> Result<(), DgError> {
        if src.hi() != dst.hi() {
            return Err(DgError::WindowMismatch(format!("{} vs {}", src.hi(), dst.hi())));
        }
        self.map.check(&src.complex, &dst.complex)?;
        let f0 = self.component(0);
        for i in 0..src.rank(0) {
            let img = f0.column(i);
            let e: BigInt = img.iter().zip(&dst.counit).map(|(a, b)| a * b).sum();
            if e != src.counit[i] {
                return Err(DgError::NotACoalgebraMap(format!("counit on {}", src.labels[0][i])));
            }
        }
        if let (Some(a), Some(b)) = (src.coaugmentation, dst.coaugmentation) {
            let img = f0.column(a);
            if img.iter().enumerate().any(|(j, x)| *x != BigInt::from((j == b) as i64)) {
                return Err(DgError::NotACoalgebraMap("coaugmentation".into()));
            }
        }
        for n in 0..=src.hi() {
            for i in 0..src.rank(n) {
                // (f⊗f)Δx
                let mut left = BTreeMap::new();
                for (&(p, a, b), c) in &src.coproduct[n][i] {
                    let fa = self.component(p).column(a);
                    let fb = self.component(n - p).column(b);
                    for (a2, x) in fa.iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        for (b2, y) in fb.iter().enumerate() {
                            if !y.is_zero() {
                                add_to(&mut left, (p, a2, b2), c * x * y);
                            }
                        }
                    }
                }
                // Δ f x
                let mut right = BTreeMap::new();
                for (y, x) in self.component(n).column(i).iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (&k, c) in &dst.coproduct[n][y] {
                        add_to(&mut right, k, x * c);
                    }
                }
                if prune(left) != prune(right) {
                    return Err(DgError::NotACoalgebraMap(format!(
                        "coproduct on {} (degree {n})",
                        src.labels[n][i]
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    QuasiIso,
    Fails { level: Option<usize>, degree: usize },
}

impl Verdict {
    pub fn is_quasi_iso(&self) -> bool {
        matches!(self, Verdict::QuasiIso)
    }
}

fn graded_piece(c: &DgCoalgebraWindow, f: &AdmissibleFiltration, p: usize) -> (ChainComplexWindow, Vec<Vec<usize>>) {
    let hi = c.hi();
    let members: Vec<Vec<usize>> = (0..=hi)
        .map(|n| (0..c.rank(n)).filter(|&i| f.level[n][i] == p).collect())
        .collect();
    let ranks = members.iter().map(Vec::len).collect();
    let mut boundaries = vec![];
    for n in 1..=hi {
        let full = c.complex.boundary(n);
        let mut d = IntMatrix::zeros(members[n - 1].len(), members[n].len());
        for (j, &x) in members[n].iter().enumerate() {
            for (i, &y) in members[n - 1].iter().enumerate() {
                d.set(i, j, full.get(y, x).clone());
            }
        }
        boundaries.push(d);
    }
    let w = ChainComplexWindow {
        lo: 0,
        hi,
        ranks,
        boundaries,
        bounded_below: true,
    };
    (w, members)
}

/// Compare the associated graded pieces of `f: src → dst` level by level, in
/// the degrees where homology is exact.
pub fn filtered_quasi_iso_window(
    f: &CoalgebraMap,
    src: &DgCoalgebraWindow,
    dst: &DgCoalgebraWindow,
    fc: &AdmissibleFiltration,
    fd: &AdmissibleFiltration,
) -> Result<Verdict, DgError> {
    if src.hi() != dst.hi() {
        return Err(DgError::WindowMismatch(format!("{} vs {}", src.hi(), dst.hi())));
    }
    f.map.check(&src.complex, &dst.complex)?;
    let hi = src.hi();
    for n in 0..=hi {
        let m = f.component(n);
        for i in 0..src.rank(n) {
            for j in 0..dst.rank(n) {
                if !m.get(j, i).is_zero() && fd.level[n][j] > fc.level[n][i] {
                    return Err(DgError::FiltrationNotRespected {
                        degree: n,
                        element: src.labels[n][i].clone(),
                    });
                }
            }
        }
    }
    let top = fc.max_level().max(fd.max_level());
    for p in 0..=top {
        let (gs, ms) = graded_piece(src, fc, p);
        let (gd, md) = graded_piece(dst, fd, p);
        let components = (0..=hi)
            .map(|n| {
                let full = f.component(n);
                let mut m = IntMatrix::zeros(md[n].len(), ms[n].len());
                for (j, &x) in ms[n].iter().enumerate() {
                    for (i, &y) in md[n].iter().enumerate() {
                        m.set(i, j, full.get(y, x).clone());
                    }
                }
                m
            })
            .collect();
        let gf = ChainMap { components };
        for n in 0..hi {
            if !induces_iso_at(&gs, &gd, &gf, n)? {
                return Ok(Verdict::Fails { level: Some(p), degree: n });
            }
        }
    }
    Ok(Verdict::QuasiIso)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monoids::FiniteMonoid;
    use crate::simplicial::{minimal_sphere, point, rp2, standard_simplex, Nerve};

    #[test]
    fn circle_chains() {
        let c = chains(&minimal_sphere(1), 3).unwrap();
        assert_eq!(c.complex.ranks, vec![1, 1, 0, 0]);
        assert!(c.complex.boundary(1).is_zero());
        assert!(c.reduced_coproduct(1, 0).is_empty());
        assert!(c.check_laws().is_valid());
    }

    #[test]
    fn sphere_chains() {
        let c = chains(&minimal_sphere(2), 4).unwrap();
        assert_eq!(c.complex.ranks, vec![1, 0, 1, 0, 0]);
        assert!(c.reduced_coproduct(2, 0).is_empty());
        assert!(c.check_laws().is_valid());
        let f = skeletal_filtration(&c).unwrap();
        assert_eq!(f.level[0], vec![0]);
        assert_eq!(f.level[2], vec![2]);
    }

    #[test]
    fn nerve_z2_coproduct() {
        let c = chains(&Nerve::new(&FiniteMonoid::cyclic(2)), 4).unwrap();
        assert!(c.check_laws().is_valid());
        let t = &c.coproduct[2][0];
        let expected: Tensor2 = [((0, 0, 0), 1), ((1, 0, 0), 1), ((2, 0, 0), 1)]
            .into_iter()
            .map(|(k, v)| (k, BigInt::from(v)))
            .collect();
        assert_eq!(t, &expected);
        assert_eq!(c.labels[2][0], "[g|g]");
        assert!(skeletal_filtration(&c).is_ok());
    }

    #[test]
    fn laws_hold_on_simplex_and_rp2() {
        assert!(chains(&standard_simplex(3), 3).unwrap().check_laws().violations.iter().all(|v| v.kind == "Conilpotence"));
        assert!(chains(&rp2(), 3).unwrap().check_laws().is_valid());
    }

    #[test]
    fn non_coaugmented_rejected() {
        let c = chains(&standard_simplex(2), 2).unwrap();
        assert_eq!(skeletal_filtration(&c), Err(DgError::NotCoaugmented));
    }

    #[test]
    fn bad_filtration_reported() {
        let c = chains(&Nerve::new(&FiniteMonoid::cyclic(2)), 3).unwrap();
        let mut f = skeletal_filtration(&c).unwrap();
        f.level[2][0] = 1;
        let r = check_admissible(&c, &f);
        assert!(r.violations.iter().any(|v| v.kind == "Coproduct"));
    }

    #[test]
    fn identity_is_filtered_quasi_iso() {
        let c = chains(&minimal_sphere(2), 4).unwrap();
        let f = skeletal_filtration(&c).unwrap();
        let id = CoalgebraMap::identity(&c);
        id.check(&c, &c).unwrap();
        assert_eq!(filtered_quasi_iso_window(&id, &c, &c, &f, &f).unwrap(), Verdict::QuasiIso);
    }

    #[test]
    fn collapse_to_point_fails_at_level_two() {
        let c = chains(&minimal_sphere(2), 4).unwrap();
        let p = chains(&point(), 4).unwrap();
        let fc = skeletal_filtration(&c).unwrap();
        let fp = skeletal_filtration(&p).unwrap();
        let map = CoalgebraMap {
            map: ChainMap {
                components: (0..=4).map(|n| IntMatrix::zeros(p.rank(n), c.rank(n))).collect(),
            },
        };
        let mut map = map;
        map.map.components[0] = IntMatrix::identity(1);
        map.check(&c, &p).unwrap();
        assert_eq!(
            filtered_quasi_iso_window(&map, &c, &p, &fc, &fp).unwrap(),
            Verdict::Fails { level: Some(2), degree: 2 }
        );
    }

    #[test]
    fn json_round_trip() {
        let c = chains(&Nerve::new(&FiniteMonoid::cyclic(3)), 3).unwrap();
        let js = serde_json::to_string(&c).unwrap();
        let back: DgCoalgebraWindow = serde_json::from_str(&js).unwrap();
        assert_eq!(c, back);
    }
}
