//! Simplicial sets through their nondegenerate simplices. Degenerate
//! simplices are formal: a nondegenerate base plus a degeneracy word in
//! normal form.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Debug;
use std::hash::Hash;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::monoids::{FiniteMonoid, Letter, MonoidPresentation};
use crate::ValidationReport;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimplicialError {
    #[error("simplex set is not closed under faces: {0}")]
    NotASubcomplex(String),
    #[error("unknown simplex {0:?}")]
    UnknownSimplex(String),
    #[error("malformed simplicial set: {0}")]
    Malformed(String),
    #[error("not reduced: {0} vertices")]
    NotReduced(usize),
    #[error("1-simplex {0} is degenerate or unknown")]
    NotAnEdge(String),
}

/// `s_{i_1} … s_{i_k} base` with `i_1 > … > i_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FormalSimplex<Id> {
    pub base: Id,
    pub degens: Vec<usize>,
}

impl<Id> FormalSimplex<Id> {
    pub fn nondegenerate(base: Id) -> Self {
        FormalSimplex { base, degens: vec![] }
    }

    pub fn is_degenerate(&self) -> bool {
        !self.degens.is_empty()
    }

    pub fn map<J>(self, f: impl FnOnce(Id) -> J) -> FormalSimplex<J> {
        FormalSimplex {
            base: f(self.base),
            degens: self.degens,
        }
    }
}

/// Normal form of a composite `s_{a_1} ∘ … ∘ s_{a_m}` (leftmost outermost),
/// using `s_i s_j = s_{j+1} s_i` for `i ≤ j`.
pub fn normalize_degeneracies(word: &[usize]) -> Vec<usize> {
    let mut w = word.to_vec();
    loop {
        let mut changed = false;
        for p in 0..w.len().saturating_sub(1) {
            if w[p] <= w[p + 1] {
                let (i, j) = (w[p], w[p + 1]);
                w[p] = j + 1;
                w[p + 1] = i;
                changed = true;
            }
        }
        if !changed {
            return w;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Enumeration<Id> {
    Finite(Vec<Id>),
    Unbounded,
}

impl<Id> Enumeration<Id> {
    pub fn finite(self) -> Option<Vec<Id>> {
        match self {
            Enumeration::Finite(v) => Some(v),
            Enumeration::Unbounded => None,
        }
    }

    pub fn map_ids<J>(self, f: impl FnMut(Id) -> J) -> Enumeration<J> {
        match self {
            Enumeration::Finite(v) => Enumeration::Finite(v.into_iter().map(f).collect()),
            Enumeration::Unbounded => Enumeration::Unbounded,
        }
    }
}

pub trait Simplicial {
    type Id: Clone + Debug + Ord + Hash;

    /// Nondegenerate simplices of dimension `n`.
    fn simplices(&self, n: usize) -> Enumeration<Self::Id>;
    fn dim(&self, x: &Self::Id) -> usize;
    /// `∂_i x` for a nondegenerate `x`.
    fn face(&self, x: &Self::Id, i: usize) -> FormalSimplex<Self::Id>;
    fn label(&self, x: &Self::Id) -> String;

    fn is_reduced(&self) -> bool {
        matches!(self.simplices(0), Enumeration::Finite(v) if v.len() == 1)
    }

    fn basepoint(&self) -> Option<Self::Id> {
        match self.simplices(0) {
            Enumeration::Finite(v) if v.len() == 1 => v.into_iter().next(),
            _ => None,
        }
    }

    /// `∂_i` on a formal simplex.
    fn face_formal(&self, x: &FormalSimplex<Self::Id>, i: usize) -> FormalSimplex<Self::Id> {
        face_of_word(self, &x.base, &x.degens, i)
    }

    /// `s_j` on a formal simplex.
    fn degeneracy(&self, x: &FormalSimplex<Self::Id>, j: usize) -> FormalSimplex<Self::Id> {
        let mut w = vec![j];
        w.extend_from_slice(&x.degens);
        FormalSimplex {
            base: x.base.clone(),
            degens: normalize_degeneracies(&w),
        }
    }

    fn formal_dim(&self, x: &FormalSimplex<Self::Id>) -> usize {
        self.dim(&x.base) + x.degens.len()
    }

    /// Iterated face keeping vertices `from..=to` of a nondegenerate simplex.
    fn sub_simplex(&self, x: &Self::Id, from: usize, to: usize) -> FormalSimplex<Self::Id> {
        let n = self.dim(x);
        let mut y = FormalSimplex::nondegenerate(x.clone());
        for _ in to + 1..=n {
            let top = self.formal_dim(&y);
            y = self.face_formal(&y, top);
        }
        for _ in 0..from {
            y = self.face_formal(&y, 0);
        }
        y
    }
}

fn face_of_word<K: Simplicial + ?Sized>(k: &K, base: &K::Id, word: &[usize], i: usize) -> FormalSimplex<K::Id> {
    let Some((&j, rest)) = word.split_first() else {
        return k.face(base, i);
    };
    if i == j || i == j + 1 {
        return FormalSimplex {
            base: base.clone(),
            degens: rest.to_vec(),
        };
    }
    let (outer, inner) = if i < j { (j - 1, i) } else { (j, i - 1) };
    let y = face_of_word(k, base, rest, inner);
    let mut w = vec![outer];
    w.extend(y.degens);
    FormalSimplex {
        base: y.base,
        degens: normalize_degeneracies(&w),
    }
}

/// Check the simplicial identities `∂_i ∂_j = ∂_{j-1} ∂_i` (`i < j`) on
/// nondegenerate simplices up to `up_to`, the face/degeneracy laws on their
/// first degeneracies, and the reduced condition when `reduced` is claimed.
pub fn validate_simplicial<K: Simplicial>(k: &K, up_to: usize) -> ValidationReport {
    let mut r = ValidationReport::default();
    for n in 0..=up_to {
        let Enumeration::Finite(xs) = k.simplices(n) else {
            r.push("Unbounded", format!("degree {n} is not finite"));
            continue;
        };
        for x in &xs {
            if k.dim(x) != n {
                r.push("Dimension", format!("{} listed in degree {n}", k.label(x)));
                continue;
            }
            for i in 0..=n {
                if n == 0 {
                    break;
                }
                let f = k.face(x, i);
                if k.formal_dim(&f) != n - 1 {
                    r.push("FaceDimension", format!("d{i} {} has wrong dimension", k.label(x)));
                    continue;
                }
                if !f.degens.windows(2).all(|w| w[0] > w[1]) || f.degens.iter().enumerate().any(|(p, &s)| s > n - 2 - p) {
                    r.push("DegeneracyWord", format!("d{i} {} is not in normal form", k.label(x)));
                }
            }
            if n >= 2 {
                for j in 0..=n {
                    for i in 0..j {
                        let lhs = k.face_formal(&k.face(x, j), i);
                        let rhs = k.face_formal(&k.face(x, i), j - 1);
                        if lhs != rhs {
                            r.push(
                                "FaceFace",
                                format!("d{i} d{j} != d{} d{i} on {}", j - 1, k.label(x)),
                            );
                        }
                    }
                }
            }
            // d_i s_j on the first degeneracies of x
            let fx = FormalSimplex::nondegenerate(x.clone());
            for j in 0..=n {
                let s = k.degeneracy(&fx, j);
                for i in 0..=n + 1 {
                    let lhs = k.face_formal(&s, i);
                    let expected = if i == j || i == j + 1 {
                        fx.clone()
                    } else if i < j {
                        k.degeneracy(&k.face_formal(&fx, i), j - 1)
                    } else {
                        k.degeneracy(&k.face_formal(&fx, i - 1), j)
                    };
                    if lhs != expected {
                        r.push("FaceDegeneracy", format!("d{i} s{j} on {}", k.label(x)));
                    }
                }
            }
        }
    }
    r
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct SimplexData {
    id: String,
    dim: usize,
    faces: Vec<FormalSimplex<usize>>,
}

/// A finite simplicial set with explicit face data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialSet {
    simplices: Vec<SimplexData>,
    by_dim: Vec<Vec<usize>>,
    index: HashMap<String, usize>,
    /// Declared reduced.
    pub reduced: bool,
}

impl SimplicialSet {
    pub fn empty() -> Self {
        SimplicialSet {
            simplices: vec![],
            by_dim: vec![],
            index: HashMap::new(),
            reduced: false,
        }
    }

    /// Add a simplex whose faces are given as `(base label, degeneracies)`.
    pub fn add(&mut self, id: &str, dim: usize, faces: &[(&str, &[usize])]) -> Result<usize, SimplicialError> {
        if self.index.contains_key(id) {
            return Err(SimplicialError::Malformed(format!("duplicate simplex {id}")));
        }
        let expected = if dim == 0 { 0 } else { dim + 1 };
        if faces.len() != expected {
            return Err(SimplicialError::Malformed(format!("{id} needs {expected} faces")));
        }
        let faces = faces
            .iter()
            .map(|(b, d)| {
                let base = *self
                    .index
                    .get(*b)
                    .ok_or_else(|| SimplicialError::UnknownSimplex(b.to_string()))?;
                Ok(FormalSimplex {
                    base,
                    degens: d.to_vec(),
                })
            })
            .collect::<Result<Vec<_>, SimplicialError>>()?;
        Ok(self.push(id.to_string(), dim, faces))
    }

    fn push(&mut self, id: String, dim: usize, faces: Vec<FormalSimplex<usize>>) -> usize {
        let k = self.simplices.len();
        self.index.insert(id.clone(), k);
        self.simplices.push(SimplexData { id, dim, faces });
        if self.by_dim.len() <= dim {
            self.by_dim.resize(dim + 1, vec![]);
        }
        self.by_dim[dim].push(k);
        k
    }

    pub fn id_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn top_dim(&self) -> usize {
        self.by_dim.len().saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    pub fn count(&self, n: usize) -> usize {
        self.by_dim.get(n).map_or(0, Vec::len)
    }

    /// Overwrite a face; for building negative controls.
    pub fn set_face(&mut self, x: usize, i: usize, f: FormalSimplex<usize>) {
        self.simplices[x].faces[i] = f;
    }

    /// Materialize the nondegenerate simplices of `k` up to `hi`.
    pub fn from_simplicial<K: Simplicial>(k: &K, hi: usize) -> Result<Self, SimplicialError> {
        let mut out = SimplicialSet::empty();
        let mut ids: HashMap<K::Id, usize> = HashMap::new();
        for n in 0..=hi {
            let xs = k
                .simplices(n)
                .finite()
                .ok_or_else(|| SimplicialError::Malformed(format!("degree {n} is unbounded")))?;
            for x in xs {
                let faces = if n == 0 {
                    vec![]
                } else {
                    (0..=n)
                        .map(|i| {
                            let f = k.face(&x, i);
                            let base = *ids
                                .get(&f.base)
                                .ok_or_else(|| SimplicialError::UnknownSimplex(k.label(&f.base)))?;
                            Ok(FormalSimplex { base, degens: f.degens })
                        })
                        .collect::<Result<Vec<_>, SimplicialError>>()?
                };
                let label = k.label(&x);
                let i = out.push(label, n, faces);
                ids.insert(x, i);
            }
        }
        out.reduced = k.is_reduced();
        Ok(out)
    }

    /// Identify the face-closed set `sub` (by label) with a single vertex.
    pub fn quotient_by_subcomplex(&self, sub: &[&str]) -> Result<SimplicialSet, SimplicialError> {
        let mut collapse = BTreeSet::new();
        for s in sub {
            let x = self
                .id_of(s)
                .ok_or_else(|| SimplicialError::UnknownSimplex(s.to_string()))?;
            collapse.insert(x);
        }
        for &x in &collapse {
            for f in &self.simplices[x].faces {
                if !collapse.contains(&f.base) {
                    return Err(SimplicialError::NotASubcomplex(format!(
                        "face {} of {} is missing",
                        self.simplices[f.base].id, self.simplices[x].id
                    )));
                }
            }
        }
        let vertices: Vec<usize> = collapse.iter().copied().filter(|&x| self.simplices[x].dim == 0).collect();
        if vertices.len() <= 1 && collapse.iter().all(|&x| self.simplices[x].dim == 0) {
            return Ok(self.clone());
        }
        let point_label = self.simplices[vertices[0]].id.clone();
        let mut out = SimplicialSet::empty();
        let mut map: HashMap<usize, usize> = HashMap::new();
        let point = out.push(point_label, 0, vec![]);
        for &x in &collapse {
            map.insert(x, point);
        }
        for n in 0..self.by_dim.len() {
            for &x in &self.by_dim[n] {
                if collapse.contains(&x) {
                    continue;
                }
                let faces = self.simplices[x]
                    .faces
                    .iter()
                    .map(|f| {
                        if collapse.contains(&f.base) {
                            // the whole face collapses to the point
                            FormalSimplex {
                                base: point,
                                degens: (0..n - 1).rev().collect(),
                            }
                        } else {
                            FormalSimplex {
                                base: map[&f.base],
                                degens: f.degens.clone(),
                            }
                        }
                    })
                    .collect();
                let y = out.push(self.simplices[x].id.clone(), n, faces);
                map.insert(x, y);
            }
        }
        out.reduced = out.count(0) == 1;
        Ok(out)
    }
}

impl Simplicial for SimplicialSet {
    type Id = usize;

    fn simplices(&self, n: usize) -> Enumeration<usize> {
        Enumeration::Finite(self.by_dim.get(n).cloned().unwrap_or_default())
    }

    fn dim(&self, x: &usize) -> usize {
        self.simplices[*x].dim
    }

    fn face(&self, x: &usize, i: usize) -> FormalSimplex<usize> {
        self.simplices[*x].faces[i].clone()
    }

    fn label(&self, x: &usize) -> String {
        self.simplices[*x].id.clone()
    }
}

#[derive(Serialize, Deserialize)]
struct FaceRepr {
    base: String,
    #[serde(default)]
    degens: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct SimplexRepr {
    id: String,
    dim: usize,
    #[serde(default)]
    faces: Vec<FaceRepr>,
}

#[derive(Serialize, Deserialize)]
struct SetRepr {
    simplices: Vec<SimplexRepr>,
    #[serde(default)]
    reduced: bool,
}

impl Serialize for SimplicialSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut simplices = vec![];
        for dim in &self.by_dim {
            for &x in dim {
                let d = &self.simplices[x];
                simplices.push(SimplexRepr {
                    id: d.id.clone(),
                    dim: d.dim,
                    faces: d
                        .faces
                        .iter()
                        .map(|f| FaceRepr {
                            base: self.simplices[f.base].id.clone(),
                            degens: f.degens.clone(),
                        })
                        .collect(),
                });
            }
        }
        SetRepr {
            simplices,
            reduced: self.reduced,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SimplicialSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let mut repr = SetRepr::deserialize(d)?;
        repr.simplices.sort_by_key(|s| s.dim);
        let mut out = SimplicialSet::empty();
        for s in &repr.simplices {
            let faces: Vec<(&str, &[usize])> = s.faces.iter().map(|f| (f.base.as_str(), f.degens.as_slice())).collect();
            out.add(&s.id, s.dim, &faces).map_err(D::Error::custom)?;
        }
        out.reduced = repr.reduced;
        if out.reduced && out.count(0) != 1 {
            return Err(D::Error::custom(SimplicialError::NotReduced(out.count(0))));
        }
        Ok(out)
    }
}

/// `Δⁿ/∂Δⁿ`: a vertex `*` and one nondegenerate simplex `e{n}`.
pub fn minimal_sphere(n: usize) -> SimplicialSet {
    assert!(n >= 1);
    let mut k = SimplicialSet::empty();
    k.add("*", 0, &[]).unwrap();
    let degens: Vec<usize> = (0..n - 1).rev().collect();
    let faces: Vec<(&str, &[usize])> = (0..=n).map(|_| ("*", degens.as_slice())).collect();
    k.add(&format!("e{n}"), n, &faces).unwrap();
    k.reduced = true;
    k
}

/// The standard simplex `Δⁿ`; simplices are labelled by their vertex lists.
pub fn standard_simplex(n: usize) -> SimplicialSet {
    simplex_skeleton(n, n)
}

/// `∂Δⁿ`.
pub fn simplex_boundary(n: usize) -> SimplicialSet {
    assert!(n >= 1);
    simplex_skeleton(n, n - 1)
}

fn simplex_skeleton(n: usize, top: usize) -> SimplicialSet {
    let name = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<String>();
    let mut k = SimplicialSet::empty();
    for d in 0..=top {
        for verts in combinations(n + 1, d + 1) {
            let faces: Vec<String> = if d == 0 {
                vec![]
            } else {
                (0..=d)
                    .map(|i| {
                        let mut f = verts.clone();
                        f.remove(i);
                        name(&f)
                    })
                    .collect()
            };
            let faces: Vec<(&str, &[usize])> = faces.iter().map(|f| (f.as_str(), &[][..])).collect();
            k.add(&name(&verts), d, &faces).unwrap();
        }
    }
    k
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    for last in k - 1..n {
        for mut c in combinations(last, k - 1) {
            c.push(last);
            out.push(c);
        }
    }
    out.sort();
    out
}

/// `∂Δ³` with the edges `01, 02, 03` collapsed: three edges and four
/// triangles on one vertex.
pub fn collapsed_tetrahedron() -> SimplicialSet {
    simplex_boundary(3)
        .quotient_by_subcomplex(&["0", "1", "2", "3", "01", "02", "03"])
        .unwrap()
}

/// A reduced model of ℝP²: one edge `e` and a triangle with faces
/// `(e, *, e)`, imposing `e·e = 1`.
pub fn rp2() -> SimplicialSet {
    let mut k = SimplicialSet::empty();
    k.add("*", 0, &[]).unwrap();
    k.add("e", 1, &[("*", &[]), ("*", &[])]).unwrap();
    k.add("f", 2, &[("e", &[]), ("*", &[0]), ("e", &[])]).unwrap();
    k.reduced = true;
    k
}

/// The point.
pub fn point() -> SimplicialSet {
    let mut k = SimplicialSet::empty();
    k.add("*", 0, &[]).unwrap();
    k.reduced = true;
    k
}

/// Nerve of a finite monoid: nondegenerate `n`-simplices are `n`-tuples of
/// non-identity elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Nerve {
    pub monoid: FiniteMonoid,
}

impl Nerve {
    pub fn new(m: &FiniteMonoid) -> Self {
        Nerve { monoid: m.clone() }
    }
}

/// Strip identity entries from a tuple, recording them as degeneracies.
fn normalize_tuple<T: Clone>(t: &[T], is_unit: impl Fn(&T) -> bool) -> FormalSimplex<Vec<T>> {
    let mut base = vec![];
    let mut degens = vec![];
    for (p, x) in t.iter().enumerate() {
        if is_unit(x) {
            degens.push(p);
        } else {
            base.push(x.clone());
        }
    }
    degens.reverse();
    FormalSimplex { base, degens }
}

/// `∂_i` of a tuple in a nerve, before normalization.
fn tuple_face<T: Clone>(t: &[T], i: usize, mul: impl Fn(&T, &T) -> T) -> Vec<T> {
    let n = t.len();
    if i == 0 {
        t[1..].to_vec()
    } else if i == n {
        t[..n - 1].to_vec()
    } else {
        let mut out = t[..i - 1].to_vec();
        out.push(mul(&t[i - 1], &t[i]));
        out.extend_from_slice(&t[i + 1..]);
        out
    }
}

impl Simplicial for Nerve {
    type Id = Vec<usize>;

    fn simplices(&self, n: usize) -> Enumeration<Vec<usize>> {
        let gens = self.monoid.non_identity();
        let mut out: Vec<Vec<usize>> = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|t| {
                    gens.iter().map(move |&g| {
                        let mut t = t.clone();
                        t.push(g);
                        t
                    })
                })
                .collect();
        }
        Enumeration::Finite(out)
    }

    fn dim(&self, x: &Vec<usize>) -> usize {
        x.len()
    }

    fn face(&self, x: &Vec<usize>, i: usize) -> FormalSimplex<Vec<usize>> {
        let f = tuple_face(x, i, |a, b| self.monoid.mul(*a, *b));
        normalize_tuple(&f, |&a| a == self.monoid.identity)
    }

    fn label(&self, x: &Vec<usize>) -> String {
        if x.is_empty() {
            return "*".to_string();
        }
        let parts: Vec<&str> = x.iter().map(|&g| self.monoid.label(g)).collect();
        format!("[{}]", parts.join("|"))
    }
}

/// A simplex of a localized set: either from the original set or a
/// nondegenerate simplex of the nerve of ℤ attached along an edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LocalId<Id> {
    Old(Id),
    New { edge: Id, tuple: Vec<i64> },
}

/// `K` with a copy of the nerve of ℤ glued along each chosen edge: the
/// pushout of `K ← ∐ S¹ → ∐ N(ℤ)`, where the circle's edge goes to the
/// generator `+1`. Infinite in every positive degree once an edge is chosen;
/// `bound` restricts the attached tuples to those whose block sums lie in
/// `[-bound, bound]`, which is closed under faces.
#[derive(Clone, Debug)]
pub struct LocalizedSet<K: Simplicial> {
    pub base: K,
    pub edges: Vec<K::Id>,
    pub bound: Option<i64>,
}

/// Localize `k` at the nondegenerate 1-simplices `w`.
pub fn localized_nerve<K: Simplicial + Clone>(k: &K, w: &[K::Id]) -> Result<LocalizedSet<K>, SimplicialError> {
    if !k.is_reduced() {
        let n = k.simplices(0).finite().map_or(0, |v| v.len());
        return Err(SimplicialError::NotReduced(n));
    }
    for e in w {
        if k.dim(e) != 1 {
            return Err(SimplicialError::NotAnEdge(k.label(e)));
        }
    }
    Ok(LocalizedSet {
        base: k.clone(),
        edges: w.to_vec(),
        bound: None,
    })
}

impl<K: Simplicial + Clone> LocalizedSet<K> {
    pub fn truncated(&self, bound: i64) -> Self {
        LocalizedSet {
            base: self.base.clone(),
            edges: self.edges.clone(),
            bound: Some(bound),
        }
    }

    fn block_sums_ok(&self, t: &[i64]) -> bool {
        let Some(b) = self.bound else { return true };
        (0..t.len()).all(|i| {
            let mut s = 0;
            t[i..].iter().all(|x| {
                s += x;
                s.abs() <= b
            })
        })
    }

    fn attach(&self, edge: &K::Id, f: FormalSimplex<Vec<i64>>) -> FormalSimplex<LocalId<K::Id>> {
        let degens = f.degens;
        let base = if f.base.is_empty() {
            LocalId::Old(self.base.basepoint().expect("reduced"))
        } else if f.base == [1] {
            LocalId::Old(edge.clone())
        } else {
            LocalId::New {
                edge: edge.clone(),
                tuple: f.base,
            }
        };
        FormalSimplex { base, degens }
    }
}

impl<K: Simplicial + Clone> Simplicial for LocalizedSet<K> {
    type Id = LocalId<K::Id>;

    fn simplices(&self, n: usize) -> Enumeration<Self::Id> {
        let Enumeration::Finite(old) = self.base.simplices(n) else {
            return Enumeration::Unbounded;
        };
        let mut out: Vec<Self::Id> = old.into_iter().map(LocalId::Old).collect();
        if n == 0 || self.edges.is_empty() {
            return Enumeration::Finite(out);
        }
        let Some(b) = self.bound else {
            return Enumeration::Unbounded;
        };
        let entries: Vec<i64> = (-b..=b).filter(|&x| x != 0).collect();
        let mut tuples: Vec<Vec<i64>> = vec![vec![]];
        for _ in 0..n {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    entries.iter().map(move |&x| {
                        let mut t = t.clone();
                        t.push(x);
                        t
                    })
                })
                .filter(|t| self.block_sums_ok(t))
                .collect();
        }
        for e in &self.edges {
            for t in &tuples {
                if n == 1 && t[0] == 1 {
                    continue;
                }
                out.push(LocalId::New {
                    edge: e.clone(),
                    tuple: t.clone(),
                });
            }
        }
        Enumeration::Finite(out)
    }

    fn dim(&self, x: &Self::Id) -> usize {
        match x {
            LocalId::Old(y) => self.base.dim(y),
            LocalId::New { tuple, .. } => tuple.len(),
        }
    }

    fn face(&self, x: &Self::Id, i: usize) -> FormalSimplex<Self::Id> {
        match x {
            LocalId::Old(y) => self.base.face(y, i).map(LocalId::Old),
            LocalId::New { edge, tuple } => {
                let f = tuple_face(tuple, i, |a, b| a + b);
                self.attach(edge, normalize_tuple(&f, |&a| a == 0))
            }
        }
    }

    fn label(&self, x: &Self::Id) -> String {
        match x {
            LocalId::Old(y) => self.base.label(y),
            LocalId::New { edge, tuple } => {
                let parts: Vec<String> = tuple.iter().map(|a| a.to_string()).collect();
                format!("{}@[{}]", self.base.label(edge), parts.join("|"))
            }
        }
    }

    fn is_reduced(&self) -> bool {
        self.base.is_reduced()
    }

    fn basepoint(&self) -> Option<Self::Id> {
        self.base.basepoint().map(LocalId::Old)
    }
}

/// Presentation of the fundamental monoid of a reduced set from its
/// simplices up to degree 2: one generator per nondegenerate edge and the
/// relation `∂₁σ = ∂₂σ·∂₀σ` per nondegenerate triangle, degenerate edges
/// read as the identity.
pub fn fundamental_monoid<K: Simplicial>(k: &K) -> Result<MonoidPresentation, SimplicialError> {
    if !k.is_reduced() {
        let n = k.simplices(0).finite().map_or(0, |v| v.len());
        return Err(SimplicialError::NotReduced(n));
    }
    let edges = k
        .simplices(1)
        .finite()
        .ok_or_else(|| SimplicialError::Malformed("infinitely many edges".into()))?;
    let tris = k
        .simplices(2)
        .finite()
        .ok_or_else(|| SimplicialError::Malformed("infinitely many triangles".into()))?;
    let pos: BTreeMap<K::Id, usize> = edges.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
    let word = |f: FormalSimplex<K::Id>| -> Vec<Letter> {
        if f.is_degenerate() {
            vec![]
        } else {
            vec![Letter::gen(pos[&f.base])]
        }
    };
    let mut p = MonoidPresentation {
        generators: edges.iter().map(|e| k.label(e)).collect(),
        relations: vec![],
    };
    for t in &tris {
        let lhs = word(k.face(t, 1));
        let mut rhs = word(k.face(t, 2));
        rhs.extend(word(k.face(t, 0)));
        p.relations.push((lhs, rhs));
    }
    Ok(p)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Grouplike {
    /// Every edge has a left and a right inverse witnessed by triangles
    /// whose long edge is degenerate.
    Yes { inverses: Vec<(String, String, String)> },
    /// The fundamental monoid is a finite monoid that is not a group.
    No { reason: String },
    Undetermined,
}

/// Decide grouplikeness where a triangle-level witness exists.
pub fn grouplike_witness<K: Simplicial>(k: &K) -> Result<Grouplike, SimplicialError> {
    let p = fundamental_monoid(k)?;
    let mut right = vec![None; p.generators.len()];
    let mut left = vec![None; p.generators.len()];
    for (lhs, rhs) in &p.relations {
        if lhs.is_empty() && rhs.len() == 2 {
            right[rhs[0].gen].get_or_insert(rhs[1].gen);
            left[rhs[1].gen].get_or_insert(rhs[0].gen);
        }
    }
    let mut inverses = vec![];
    for g in 0..p.generators.len() {
        match (left[g], right[g]) {
            (Some(l), Some(r)) => inverses.push((
                p.generators[g].clone(),
                p.generators[l].clone(),
                p.generators[r].clone(),
            )),
            _ => return Ok(Grouplike::Undetermined),
        }
    }
    Ok(Grouplike::Yes { inverses })
}

/// Grouplike test for nerves, where it is decidable.
pub fn nerve_grouplike(m: &FiniteMonoid) -> Grouplike {
    if crate::monoids::is_group(m) {
        match grouplike_witness(&Nerve::new(m)) {
            Ok(g @ Grouplike::Yes { .. }) => g,
            _ => Grouplike::Undetermined,
        }
    } else {
        Grouplike::No {
            reason: "some element has no two-sided inverse".into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degeneracy_normal_form() {
        assert_eq!(normalize_degeneracies(&[0, 0]), vec![1, 0]);
        assert_eq!(normalize_degeneracies(&[2, 0]), vec![2, 0]);
        assert_eq!(normalize_degeneracies(&[0, 1]), vec![2, 0]);
    }

    #[test]
    fn spheres_validate() {
        for n in 1..=4 {
            let s = minimal_sphere(n);
            assert!(validate_simplicial(&s, n + 1).is_valid(), "S{n}");
            assert!(s.is_reduced());
        }
        assert!(validate_simplicial(&rp2(), 3).is_valid());
        assert!(validate_simplicial(&standard_simplex(3), 3).is_valid());
    }

    #[test]
    fn corrupted_face_reported() {
        let mut k = standard_simplex(2);
        let e = k.id_of("01").unwrap();
        let v = k.id_of("2").unwrap();
        k.set_face(e, 0, FormalSimplex::nondegenerate(v));
        let r = validate_simplicial(&k, 2);
        assert!(r.violations.iter().any(|v| v.kind == "FaceFace"));
    }

    #[test]
    fn nerve_faces() {
        let n = Nerve::new(&FiniteMonoid::idempotent());
        let bb = vec![1, 1];
        for i in 0..3 {
            assert_eq!(n.face(&bb, i), FormalSimplex::nondegenerate(vec![1]));
        }
        let z2 = Nerve::new(&FiniteMonoid::cyclic(2));
        assert_eq!(z2.face(&vec![1, 1], 1), FormalSimplex { base: vec![], degens: vec![0] });
        assert!(validate_simplicial(&z2, 4).is_valid());
        assert!(validate_simplicial(&Nerve::new(&FiniteMonoid::cyclic(3)), 3).is_valid());
    }

    #[test]
    fn nerve_counts() {
        let m = FiniteMonoid::cyclic(3);
        let n = Nerve::new(&m);
        for d in 0..4 {
            assert_eq!(n.simplices(d).finite().unwrap().len(), 2usize.pow(d as u32));
        }
    }

    #[test]
    fn tetrahedron_quotient_counts() {
        let k = collapsed_tetrahedron();
        assert!(k.is_reduced());
        assert_eq!((k.count(0), k.count(1), k.count(2)), (1, 3, 4));
        assert!(validate_simplicial(&k, 3).is_valid());
    }

    #[test]
    fn trivial_quotients() {
        let d = standard_simplex(2);
        assert_eq!(d.quotient_by_subcomplex(&["0"]).unwrap(), d);
        let s1 = standard_simplex(1).quotient_by_subcomplex(&["0", "1"]).unwrap();
        assert_eq!(s1.count(0), 1);
        assert_eq!(s1.count(1), 1);
        assert!(validate_simplicial(&s1, 2).is_valid());
        assert!(matches!(
            d.quotient_by_subcomplex(&["01"]),
            Err(SimplicialError::NotASubcomplex(_))
        ));
    }

    #[test]
    fn json_round_trip() {
        let k = collapsed_tetrahedron();
        let js = serde_json::to_string(&k).unwrap();
        let back: SimplicialSet = serde_json::from_str(&js).unwrap();
        assert_eq!(k, back);
    }

    #[test]
    fn localized_nerve_of_idempotent() {
        let m = FiniteMonoid::idempotent();
        let n = Nerve::new(&m);
        let same = localized_nerve(&n, &[]).unwrap();
        assert_eq!(same.simplices(2), n.simplices(2).map_ids(LocalId::Old));
        let l = localized_nerve(&n, &[vec![1]]).unwrap();
        assert_eq!(l.simplices(1), Enumeration::Unbounded);
        let t = l.truncated(1);
        assert!(validate_simplicial(&t, 3).is_valid());
        assert!(matches!(grouplike_witness(&t).unwrap(), Grouplike::Yes { .. }));
        assert_eq!(grouplike_witness(&n).unwrap(), Grouplike::Undetermined);
    }

    #[test]
    fn grouplike_nerves() {
        assert!(matches!(nerve_grouplike(&FiniteMonoid::cyclic(2)), Grouplike::Yes { .. }));
        assert!(matches!(nerve_grouplike(&FiniteMonoid::idempotent()), Grouplike::No { .. }));
    }
}
