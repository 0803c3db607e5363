//! Finite monoids, monoid and group presentations, monoid algebras and
//! group completion.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use rand::Rng;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::exactlin::{smith_normal_form, HomologyGroup, IntMatrix};
use crate::rewrite::{Poly, PresentedDgAlgebra, RewriteError};
use crate::ValidationReport;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MonoidError {
    #[error("malformed monoid: {0}")]
    Malformed(String),
    #[error("word {0:?} uses an undeclared generator")]
    UnknownLetter(String),
    #[error("not a monoid homomorphism: {0}")]
    NotAHomomorphism(String),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

/// A monoid given by its full multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMonoid {
    pub elements: Vec<String>,
    pub identity: usize,
    /// `table[x][y]` is the index of `x·y`.
    pub table: Vec<Vec<usize>>,
}

impl FiniteMonoid {
    pub fn new(elements: Vec<String>, identity: usize, table: Vec<Vec<usize>>) -> Result<Self, MonoidError> {
        let m = FiniteMonoid {
            elements,
            identity,
            table,
        };
        let report = validate_monoid(&m);
        if report.is_valid() {
            Ok(m)
        } else {
            Err(MonoidError::Malformed(report.to_string()))
        }
    }

    pub fn trivial() -> Self {
        FiniteMonoid {
            elements: vec!["1".into()],
            identity: 0,
            table: vec![vec![0]],
        }
    }

    /// `{1, b}` with `b·b = b`.
    pub fn idempotent() -> Self {
        FiniteMonoid {
            elements: vec!["1".into(), "b".into()],
            identity: 0,
            table: vec![vec![0, 1], vec![1, 1]],
        }
    }

    /// Cyclic group of order `n`, elements `1, g, g2, …`.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let elements = (0..n)
            .map(|k| match k {
                0 => "1".to_string(),
                1 => "g".to_string(),
                _ => format!("g{k}"),
            })
            .collect();
        let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteMonoid {
            elements,
            identity: 0,
            table,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn label(&self, x: usize) -> &str {
        &self.elements[x]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.elements.iter().position(|e| e == label)
    }

    /// Non-identity elements in order.
    pub fn non_identity(&self) -> Vec<usize> {
        (0..self.order()).filter(|&x| x != self.identity).collect()
    }

    /// Presentation with one generator per non-identity element and the
    /// multiplication table as relations.
    pub fn presentation(&self) -> MonoidPresentation {
        let gens = self.non_identity();
        let pos: HashMap<usize, usize> = gens.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let word = |x: usize| -> Word {
            if x == self.identity {
                vec![]
            } else {
                vec![Letter::gen(pos[&x])]
            }
        };
        let mut relations = vec![];
        for &x in &gens {
            for &y in &gens {
                let mut lhs = word(x);
                lhs.extend(word(y));
                relations.push((lhs, word(self.mul(x, y))));
            }
        }
        MonoidPresentation {
            generators: gens.iter().map(|&x| self.elements[x].clone()).collect(),
            relations,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum Entry {
    Index(usize),
    Label(String),
}

#[derive(Serialize, Deserialize)]
struct MonoidRepr {
    elements: Vec<String>,
    identity: Entry,
    table: Vec<Vec<Entry>>,
}

impl Serialize for FiniteMonoid {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let name = |x: usize| Entry::Label(self.elements.get(x).cloned().unwrap_or_else(|| x.to_string()));
        MonoidRepr {
            elements: self.elements.clone(),
            identity: name(self.identity),
            table: self.table.iter().map(|row| row.iter().map(|&x| name(x)).collect()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteMonoid {
    /// Unknown labels become out-of-range indices so that validation can
    /// report them.
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = MonoidRepr::deserialize(d)?;
        let n = repr.elements.len();
        let resolve = |e: &Entry| match e {
            Entry::Index(i) => *i,
            Entry::Label(l) => repr.elements.iter().position(|x| x == l).unwrap_or(n),
        };
        if repr.elements.is_empty() {
            return Err(D::Error::custom("monoid has no elements"));
        }
        Ok(FiniteMonoid {
            identity: resolve(&repr.identity),
            table: repr.table.iter().map(|row| row.iter().map(resolve).collect()).collect(),
            elements: repr.elements,
        })
    }
}

/// Lists shape problems (`MalformedTable`), identity failures and
/// associativity failures.
pub fn validate_monoid(m: &FiniteMonoid) -> ValidationReport {
    let mut r = ValidationReport::default();
    let n = m.elements.len();
    if n == 0 {
        r.push("MalformedTable", "no elements");
        return r;
    }
    let mut labels = m.elements.clone();
    labels.sort();
    labels.dedup();
    if labels.len() != n {
        r.push("MalformedTable", "duplicate element labels");
    }
    if m.identity >= n {
        r.push("MalformedTable", "identity is not an element");
    }
    if m.table.len() != n || m.table.iter().any(|row| row.len() != n) {
        r.push("MalformedTable", format!("table is not {n}x{n}"));
        return r;
    }
    for (x, row) in m.table.iter().enumerate() {
        for (y, &z) in row.iter().enumerate() {
            if z >= n {
                r.push(
                    "MalformedTable",
                    format!("{}*{} is not an element", m.elements[x], m.elements[y]),
                );
            }
        }
    }
    if !r.is_valid() {
        return r;
    }
    let e = m.identity;
    for x in 0..n {
        if m.mul(e, x) != x || m.mul(x, e) != x {
            r.push("Identity", format!("identity law fails at {}", m.elements[x]));
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if m.mul(m.mul(x, y), z) != m.mul(x, m.mul(y, z)) {
                    r.push(
                        "Associativity",
                        format!("({0}*{1})*{2} != {0}*({1}*{2})", m.elements[x], m.elements[y], m.elements[z]),
                    );
                }
            }
        }
    }
    r
}

pub fn is_group(m: &FiniteMonoid) -> bool {
    let e = m.identity;
    (0..m.order()).all(|x| (0..m.order()).any(|y| m.mul(x, y) == e && m.mul(y, x) == e))
}

/// The monoid ring as a degree-0 presentation: one generator per
/// non-identity element, relations from the table, augmentation `m ↦ 1`.
pub fn monoid_algebra(m: &FiniteMonoid) -> Result<PresentedDgAlgebra, MonoidError> {
    let mut a = PresentedDgAlgebra::ground();
    let gens = m.non_identity();
    let mut pos = HashMap::new();
    for &x in &gens {
        let g = a.push_generator(&m.elements[x], 0, Poly::zero(), Some(BigInt::one()))?;
        pos.insert(x, g);
    }
    let elem = |x: usize| {
        if x == m.identity {
            Poly::one()
        } else {
            Poly::generator(pos[&x])
        }
    };
    for &x in &gens {
        for &y in &gens {
            let lhs = elem(x).mul(&elem(y));
            a.relations.push(crate::rewrite::Relation::new(lhs, elem(m.mul(x, y))));
        }
    }
    Ok(a)
}

/// A monoid together with its augmented monoid algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonoidAlgebraDescriptor {
    pub monoid: FiniteMonoid,
    pub algebra: PresentedDgAlgebra,
}

impl MonoidAlgebraDescriptor {
    pub fn new(m: &FiniteMonoid) -> Result<Self, MonoidError> {
        Ok(MonoidAlgebraDescriptor {
            monoid: m.clone(),
            algebra: monoid_algebra(m)?,
        })
    }
}

/// Random monoid with at most `max_order` elements, found by rejection
/// sampling of tables with a fixed identity.
pub fn random_monoid<R: Rng>(rng: &mut R, max_order: usize) -> FiniteMonoid {
    let n = rng.gen_range(1..=max_order.max(1));
    let elements: Vec<String> = (0..n)
        .map(|k| if k == 0 { "1".to_string() } else { format!("m{k}") })
        .collect();
    loop {
        let mut table = vec![vec![0; n]; n];
        for x in 0..n {
            for y in 0..n {
                table[x][y] = if x == 0 {
                    y
                } else if y == 0 {
                    x
                } else {
                    rng.gen_range(0..n)
                };
            }
        }
        let m = FiniteMonoid {
            elements: elements.clone(),
            identity: 0,
            table,
        };
        if validate_monoid(&m).is_valid() {
            return m;
        }
    }
}

/// A homomorphism of finite monoids given on elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonoidMap {
    pub source: FiniteMonoid,
    pub target: FiniteMonoid,
    pub images: Vec<usize>,
}

impl MonoidMap {
    pub fn new(source: FiniteMonoid, target: FiniteMonoid, images: Vec<usize>) -> Result<Self, MonoidError> {
        let f = MonoidMap {
            source,
            target,
            images,
        };
        f.check()?;
        Ok(f)
    }

    pub fn identity(m: &FiniteMonoid) -> Self {
        MonoidMap {
            source: m.clone(),
            target: m.clone(),
            images: (0..m.order()).collect(),
        }
    }

    /// The map to the trivial monoid.
    pub fn to_trivial(m: &FiniteMonoid) -> Self {
        MonoidMap {
            source: m.clone(),
            target: FiniteMonoid::trivial(),
            images: vec![0; m.order()],
        }
    }

    pub fn check(&self) -> Result<(), MonoidError> {
        let (s, t) = (&self.source, &self.target);
        if self.images.len() != s.order() || self.images.iter().any(|&y| y >= t.order()) {
            return Err(MonoidError::NotAHomomorphism("images do not match the elements".into()));
        }
        if self.images[s.identity] != t.identity {
            return Err(MonoidError::NotAHomomorphism("identity not preserved".into()));
        }
        for x in 0..s.order() {
            for y in 0..s.order() {
                if self.images[s.mul(x, y)] != t.mul(self.images[x], self.images[y]) {
                    return Err(MonoidError::NotAHomomorphism(format!(
                        "{}*{} not preserved",
                        s.label(x),
                        s.label(y)
                    )));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn gen(g: usize) -> Self {
        Letter { gen: g, inverse: false }
    }

    pub fn inv(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }
}

pub type Word = Vec<Letter>;

pub fn invert_word(w: &[Letter]) -> Word {
    w.iter().rev().map(|l| l.inv()).collect()
}

pub fn free_reduce(w: &[Letter]) -> Word {
    let mut out: Word = vec![];
    for &l in w {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

fn cyclic_reduce(w: &[Letter]) -> Word {
    let mut w = free_reduce(w);
    while w.len() >= 2 && w[0] == w[w.len() - 1].inv() {
        w = w[1..w.len() - 1].to_vec();
    }
    w
}

/// Generators and relations `u = w`. Letters may carry inverses, in which
/// case the presentation is read as a group presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidPresentation {
    pub generators: Vec<String>,
    pub relations: Vec<(Word, Word)>,
}

pub type GroupPresentation = MonoidPresentation;

impl MonoidPresentation {
    pub fn free(gens: &[&str]) -> Self {
        MonoidPresentation {
            generators: gens.iter().map(|s| s.to_string()).collect(),
            relations: vec![],
        }
    }

    pub fn show_word(&self, w: &[Letter]) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.iter()
            .map(|l| {
                let g = &self.generators[l.gen];
                if l.inverse {
                    format!("{g}^-1")
                } else {
                    g.clone()
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    pub fn parse_word(&self, s: &str) -> Result<Word, MonoidError> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(vec![]);
        }
        let mut out = vec![];
        for tok in s.split('*') {
            let tok = tok.trim();
            let (name, inverse) = match tok.strip_suffix("^-1") {
                Some(n) => (n, true),
                None => (tok, false),
            };
            if name == "1" {
                continue;
            }
            let g = self
                .generators
                .iter()
                .position(|x| x == name)
                .ok_or_else(|| MonoidError::UnknownLetter(s.to_string()))?;
            out.push(Letter { gen: g, inverse });
        }
        Ok(out)
    }

    pub fn relate(&mut self, u: &str, w: &str) -> Result<(), MonoidError> {
        let u = self.parse_word(u)?;
        let w = self.parse_word(w)?;
        self.relations.push((u, w));
        Ok(())
    }

    /// Relators `u w⁻¹`, cyclically reduced, trivial ones dropped.
    pub fn relators(&self) -> Vec<Word> {
        self.relations
            .iter()
            .map(|(u, w)| {
                let mut r = u.clone();
                r.extend(invert_word(w));
                cyclic_reduce(&r)
            })
            .filter(|r| !r.is_empty())
            .collect()
    }

    pub fn validate(&self) -> Result<(), MonoidError> {
        for (u, w) in &self.relations {
            if u.iter().chain(w).any(|l| l.gen >= self.generators.len()) {
                return Err(MonoidError::UnknownLetter(format!("{u:?} = {w:?}")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for MonoidPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self
            .relations
            .iter()
            .map(|(u, w)| format!("{} = {}", self.show_word(u), self.show_word(w)))
            .collect();
        write!(f, "< {} | {} >", self.generators.join(", "), rels.join(", "))
    }
}

#[derive(Serialize, Deserialize)]
struct PresentationRepr {
    gens: Vec<String>,
    #[serde(default)]
    rels: Vec<(String, String)>,
}

impl Serialize for MonoidPresentation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PresentationRepr {
            gens: self.generators.clone(),
            rels: self
                .relations
                .iter()
                .map(|(u, w)| (self.show_word(u), self.show_word(w)))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MonoidPresentation {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = PresentationRepr::deserialize(d)?;
        let mut p = MonoidPresentation {
            generators: repr.gens,
            relations: vec![],
        };
        for (u, w) in &repr.rels {
            p.relate(u, w).map_err(D::Error::custom)?;
        }
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CompletionKind {
    /// No relators survive simplification.
    Free { rank: usize },
    /// Coset enumeration closed; `table[g][c]` is the coset `c·g`.
    Finite { order: usize, table: Vec<Vec<usize>> },
    /// Coset enumeration ran out of budget.
    Exhausted { budget: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupCompletion {
    /// Simplified group presentation.
    pub presentation: GroupPresentation,
    #[serde(flatten)]
    pub kind: CompletionKind,
}

impl GroupCompletion {
    pub fn order(&self) -> Option<usize> {
        match &self.kind {
            CompletionKind::Finite { order, .. } => Some(*order),
            CompletionKind::Free { rank: 0 } => Some(1),
            _ => None,
        }
    }

    pub fn is_exhausted(&self) -> bool {
        matches!(self.kind, CompletionKind::Exhausted { .. })
    }
}

fn substitute(w: &[Letter], g: usize, image: &[Letter]) -> Word {
    let mut out = vec![];
    for &l in w {
        if l.gen == g {
            if l.inverse {
                out.extend(invert_word(image));
            } else {
                out.extend_from_slice(image);
            }
        } else {
            out.push(l);
        }
    }
    free_reduce(&out)
}

/// Tietze moves: drop trivial relators and eliminate generators that occur
/// exactly once in some relator.
pub fn tietze_simplify(p: &GroupPresentation) -> GroupPresentation {
    let mut gens: Vec<Option<String>> = p.generators.iter().cloned().map(Some).collect();
    let mut rels = p.relators();
    loop {
        let mut found = None;
        'search: for (ri, r) in rels.iter().enumerate() {
            let mut count: BTreeMap<usize, usize> = BTreeMap::new();
            for l in r {
                *count.entry(l.gen).or_default() += 1;
            }
            for (&g, &c) in &count {
                if c == 1 {
                    found = Some((ri, g));
                    break 'search;
                }
            }
        }
        let Some((ri, g)) = found else { break };
        let r = rels.swap_remove(ri);
        // rotate so that g leads: r = g^e * rest, hence g = rest^{-e}
        let pos = r.iter().position(|l| l.gen == g).unwrap();
        let mut rot = r[pos..].to_vec();
        rot.extend_from_slice(&r[..pos]);
        let rest = &rot[1..];
        let image = if rot[0].inverse {
            rest.to_vec()
        } else {
            invert_word(rest)
        };
        gens[g] = None;
        rels = rels
            .iter()
            .map(|x| cyclic_reduce(&substitute(x, g, &image)))
            .filter(|x| !x.is_empty())
            .collect();
        rels.sort();
        rels.dedup();
    }
    let mut remap = vec![usize::MAX; gens.len()];
    let mut names = vec![];
    for (i, g) in gens.iter().enumerate() {
        if let Some(name) = g {
            remap[i] = names.len();
            names.push(name.clone());
        }
    }
    MonoidPresentation {
        generators: names,
        relations: rels
            .into_iter()
            .map(|r| {
                let w = r
                    .iter()
                    .map(|l| Letter {
                        gen: remap[l.gen],
                        inverse: l.inverse,
                    })
                    .collect();
                (w, vec![])
            })
            .collect(),
    }
}

/// Coset enumeration over the trivial subgroup (HLT with lookahead-free
/// coincidence handling). `None` when more than `budget` cosets are needed.
pub fn todd_coxeter(p: &GroupPresentation, budget: usize) -> Option<Vec<Vec<usize>>> {
    let ng = p.generators.len();
    let rels = p.relators();
    let col = |l: Letter| 2 * l.gen + l.inverse as usize;
    let inv_col = |c: usize| c ^ 1;
    let mut table: Vec<Vec<Option<usize>>> = vec![vec![None; 2 * ng]];
    let mut parent: Vec<usize> = vec![0];
    let mut defined = 1usize;

    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }

    fn merge(table: &mut [Vec<Option<usize>>], parent: &mut [usize], a: usize, b: usize) {
        let mut queue = std::collections::VecDeque::new();
        let join = |parent: &mut [usize], queue: &mut std::collections::VecDeque<usize>, a: usize, b: usize| {
            let (a, b) = (find(parent, a), find(parent, b));
            if a != b {
                let (keep, drop) = if a < b { (a, b) } else { (b, a) };
                parent[drop] = keep;
                queue.push_back(drop);
            }
        };
        join(parent, &mut queue, a, b);
        while let Some(g) = queue.pop_front() {
            for x in 0..table[g].len() {
                let Some(d) = table[g][x] else { continue };
                table[d][x ^ 1] = None;
                let mu = find(parent, g);
                let nu = find(parent, d);
                if let Some(t) = table[mu][x] {
                    join(parent, &mut queue, nu, t);
                } else if let Some(t) = table[nu][x ^ 1] {
                    join(parent, &mut queue, mu, t);
                } else {
                    table[mu][x] = Some(nu);
                    table[nu][x ^ 1] = Some(mu);
                }
            }
        }
    }

    let mut c = 0;
    while c < table.len() {
        if find(&mut parent, c) != c {
            c += 1;
            continue;
        }
        for r in &rels {
            if find(&mut parent, c) != c {
                break;
            }
            // scan and fill r from c
            let mut f = c;
            let mut b = c;
            let mut i = 0;
            let mut j = r.len();
            loop {
                // forward
                while i < j {
                    match table[f][col(r[i])] {
                        Some(t) => {
                            f = find(&mut parent, t);
                            i += 1;
                        }
                        None => break,
                    }
                }
                if i == j {
                    if f != b {
                        merge(&mut table, &mut parent, f, b);
                    }
                    break;
                }
                // backward
                while j > i {
                    match table[b][inv_col(col(r[j - 1]))] {
                        Some(t) => {
                            b = find(&mut parent, t);
                            j -= 1;
                        }
                        None => break,
                    }
                }
                if j == i {
                    merge(&mut table, &mut parent, f, b);
                    break;
                }
                if j == i + 1 {
                    // deduction
                    let cc = col(r[i]);
                    table[f][cc] = Some(b);
                    table[b][inv_col(cc)] = Some(f);
                    break;
                }
                // define a new coset
                if defined >= budget {
                    return None;
                }
                let n = table.len();
                table.push(vec![None; 2 * ng]);
                parent.push(n);
                defined += 1;
                let cc = col(r[i]);
                table[f][cc] = Some(n);
                table[n][inv_col(cc)] = Some(f);
            }
        }
        if find(&mut parent, c) == c {
            for cc in 0..2 * ng {
                if table[c][cc].is_none() {
                    if defined >= budget {
                        return None;
                    }
                    let n = table.len();
                    table.push(vec![None; 2 * ng]);
                    parent.push(n);
                    defined += 1;
                    table[c][cc] = Some(n);
                    table[n][inv_col(cc)] = Some(c);
                }
            }
        }
        c += 1;
    }
    let live: Vec<usize> = (0..table.len()).filter(|&x| find(&mut parent, x) == x).collect();
    let index: HashMap<usize, usize> = live.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut out = vec![vec![0; live.len()]; ng];
    for (i, &x) in live.iter().enumerate() {
        for (g, row) in out.iter_mut().enumerate() {
            let t = table[x][2 * g].expect("closed table");
            row[i] = index[&find(&mut parent, t)];
        }
    }
    Some(out)
}

/// Group completion of a presented monoid: adjoin inverses, simplify,
/// then try to enumerate the group within `budget` cosets.
pub fn group_completion(p: &MonoidPresentation, budget: usize) -> GroupCompletion {
    let simple = tietze_simplify(p);
    if simple.relations.is_empty() {
        let rank = simple.generators.len();
        return GroupCompletion {
            presentation: simple,
            kind: CompletionKind::Free { rank },
        };
    }
    match todd_coxeter(&simple, budget) {
        Some(table) => GroupCompletion {
            kind: CompletionKind::Finite {
                order: table.first().map_or(1, |r| r.len()),
                table,
            },
            presentation: simple,
        },
        None => GroupCompletion {
            presentation: simple,
            kind: CompletionKind::Exhausted { budget },
        },
    }
}

/// Abelian invariants of a group presentation: the cokernel of the
/// exponent-sum matrix.
pub fn abelianization(p: &GroupPresentation) -> HomologyGroup {
    let rels = p.relators();
    let n = p.generators.len();
    let mut m = IntMatrix::zeros(rels.len(), n);
    for (i, r) in rels.iter().enumerate() {
        for l in r {
            m.add_to(i, l.gen, &BigInt::from(if l.inverse { -1 } else { 1 }));
        }
    }
    let snf = smith_normal_form(&m);
    let rank = snf.rank();
    HomologyGroup {
        free_rank: n - rank,
        torsion: snf.d[..rank].iter().filter(|x| !x.is_one()).cloned().collect(),
        exact: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_monoids_validate() {
        assert!(validate_monoid(&FiniteMonoid::trivial()).is_valid());
        assert!(validate_monoid(&FiniteMonoid::idempotent()).is_valid());
        assert!(validate_monoid(&FiniteMonoid::cyclic(3)).is_valid());
    }

    #[test]
    fn malformed_table_reported() {
        let js = r#"{"elements":["1","b"],"identity":"1","table":[["1","b"],["b","c"]]}"#;
        let m: FiniteMonoid = serde_json::from_str(js).unwrap();
        let r = validate_monoid(&m);
        assert!(r.violations.iter().any(|v| v.kind == "MalformedTable"));
    }

    #[test]
    fn associativity_failure_reported() {
        let m = FiniteMonoid {
            elements: vec!["1".into(), "a".into(), "b".into()],
            identity: 0,
            table: vec![vec![0, 1, 2], vec![1, 2, 1], vec![2, 2, 2]],
        };
        let r = validate_monoid(&m);
        assert!(r.violations.iter().any(|v| v.kind == "Associativity"));
    }

    #[test]
    fn groups_detected() {
        assert!(is_group(&FiniteMonoid::cyclic(2)));
        assert!(is_group(&FiniteMonoid::cyclic(3)));
        assert!(!is_group(&FiniteMonoid::idempotent()));
    }

    #[test]
    fn json_round_trip() {
        let m = FiniteMonoid::cyclic(3);
        let js = serde_json::to_string(&m).unwrap();
        assert!(js.contains("\"identity\":\"1\""));
        let back: FiniteMonoid = serde_json::from_str(&js).unwrap();
        assert_eq!(m, back);
        let p = m.presentation();
        let back: MonoidPresentation = serde_json::from_str(&serde_json::to_string(&p).unwrap()).unwrap();
        assert_eq!(p, back);
    }

    #[test]
    fn algebra_of_idempotent() {
        let a = monoid_algebra(&FiniteMonoid::idempotent()).unwrap();
        assert_eq!(a.labels(), vec!["b"]);
        assert_eq!(a.show_relation(&a.relations[0]), "b*b = b");
        let t = monoid_algebra(&FiniteMonoid::trivial()).unwrap();
        assert!(t.generators.is_empty());
        let z2 = monoid_algebra(&FiniteMonoid::cyclic(2)).unwrap();
        assert_eq!(z2.show_relation(&z2.relations[0]), "g*g = 1");
    }

    #[test]
    fn completions() {
        let free = group_completion(&MonoidPresentation::free(&["t"]), 100);
        assert_eq!(free.kind, CompletionKind::Free { rank: 1 });
        let idem = group_completion(&FiniteMonoid::idempotent().presentation(), 100);
        assert_eq!(idem.order(), Some(1));
        let z2 = group_completion(&FiniteMonoid::cyclic(2).presentation(), 100);
        assert_eq!(z2.order(), Some(2));
        let z3 = group_completion(&FiniteMonoid::cyclic(3).presentation(), 100);
        assert_eq!(z3.order(), Some(3));
    }

    #[test]
    fn coset_enumeration_of_s3() {
        let mut p = MonoidPresentation::free(&["a", "b"]);
        p.relate("a*a", "1").unwrap();
        p.relate("b*b*b", "1").unwrap();
        p.relate("a*b*a*b", "1").unwrap();
        assert_eq!(todd_coxeter(&p, 1000).unwrap()[0].len(), 6);
        assert!(todd_coxeter(&p, 3).is_none());
    }

    #[test]
    fn abelian_invariants() {
        let z2 = FiniteMonoid::cyclic(2).presentation();
        assert_eq!(abelianization(&z2).to_string(), "Z/2");
        let free = MonoidPresentation::free(&["x", "y"]);
        assert_eq!(abelianization(&free).free_rank, 2);
    }

    #[test]
    fn homomorphisms_checked() {
        let f = MonoidMap::new(FiniteMonoid::idempotent(), FiniteMonoid::trivial(), vec![0, 0]);
        assert!(f.is_ok());
        let bad = MonoidMap::new(FiniteMonoid::cyclic(2), FiniteMonoid::idempotent(), vec![0, 1]);
        assert!(bad.is_err());
    }
}
