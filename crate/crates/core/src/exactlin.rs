//! Exact integer linear algebra: Smith normal form with recorded transforms,
//! and homology of bounded chain-complex windows.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinError {
    #[error("matrix {rows}x{cols} needs {} entries, got {got}", rows * cols)]
    BadShape { rows: usize, cols: usize, got: usize },
    #[error("window too small: hi {hi} <= lo {lo}")]
    WindowTooSmall { lo: usize, hi: usize },
    #[error("boundary d_{degree} has shape {got:?}, expected {expected:?}")]
    BoundaryShape {
        degree: usize,
        expected: (usize, usize),
        got: (usize, usize),
    },
    #[error("d_{lower} . d_{upper} is nonzero")]
    NotAComplex { lower: usize, upper: usize },
    #[error("chain map component in degree {degree} has the wrong shape")]
    MapShape { degree: usize },
    #[error("invalid integer literal {0:?}")]
    BadInteger(String),
}

/// Dense integer matrix, row-major, arbitrary precision.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigInt>) -> Result<Self, LinError> {
        if entries.len() != rows * cols {
            return Err(LinError::BadShape {
                rows,
                cols,
                got: entries.len(),
            });
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Result<Self, LinError> {
        Self::new(rows, cols, entries.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vec<BigInt>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                m.entries[i * cols + j] = x.clone();
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.entries[i * self.cols + j] = x;
    }

    pub fn add_to(&mut self, i: usize, j: usize, x: &BigInt) {
        self.entries[i * self.cols + j] += x;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .filter(|&j| !v[j].is_zero())
                    .map(|j| self.get(i, j) * &v[j])
                    .sum()
            })
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a: Vec<Vec<BigInt>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs().is_one()
    }

    pub fn is_diagonal_with(&self, d: &[BigInt]) -> bool {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let expect = if i == j { d.get(i).cloned().unwrap_or_default() } else { BigInt::zero() };
                if *self.get(i, j) != expect {
                    return false;
                }
            }
        }
        true
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(src, j) * q;
            if !v.is_zero() {
                self.entries[dst * self.cols + j] += v;
            }
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, src) * q;
            if !v.is_zero() {
                self.entries[i * self.cols + dst] += v;
            }
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self.get(r, j);
            self.set(r, j, v);
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<String>,
}

impl Serialize for IntMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x.to_string()).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(d)?;
        let entries = repr
            .entries
            .iter()
            .map(|s| parse_int(s))
            .collect::<Result<Vec<_>, _>>()
            .map_err(serde::de::Error::custom)?;
        IntMatrix::new(repr.rows, repr.cols, entries).map_err(serde::de::Error::custom)
    }
}

pub fn parse_int(s: &str) -> Result<BigInt, LinError> {
    s.trim()
        .parse::<BigInt>()
        .map_err(|_| LinError::BadInteger(s.to_string()))
}

/// Integers serialized as decimal strings.
pub mod bigint_str {
    use super::*;

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        parse_int(&s).map_err(serde::de::Error::custom)
    }
}

pub mod bigint_vec_str {
    use super::*;

    pub fn serialize<S: Serializer>(xs: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_int(s))
            .collect::<Result<_, _>>()
            .map_err(serde::de::Error::custom)
    }
}

/// `u * m * v == diag(d)` with `d[i] | d[i+1]`, `u` and `v` unimodular.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfResult {
    #[serde(with = "bigint_vec_str")]
    pub d: Vec<BigInt>,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.d.iter().filter(|x| !x.is_zero()).count()
    }
}

/// Smith normal form, pivoting on the nonzero entry of least absolute value.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let steps = rows.min(cols);

    for t in 0..steps {
        let Some((pi, pj)) = min_abs_entry(&a, t) else {
            break;
        };
        a.swap_rows(t, pi);
        u.swap_rows(t, pi);
        a.swap_cols(t, pj);
        v.swap_cols(t, pj);

        loop {
            // Clear column t below the pivot.
            let mut dirty = false;
            for i in t + 1..rows {
                if a.get(i, t).is_zero() {
                    continue;
                }
                let q = -(a.get(i, t) / a.get(t, t));
                a.add_row(i, t, &q);
                u.add_row(i, t, &q);
                if !a.get(i, t).is_zero() {
                    dirty = true;
                }
            }
            // Clear row t right of the pivot.
            for j in t + 1..cols {
                if a.get(t, j).is_zero() {
                    continue;
                }
                let q = -(a.get(t, j) / a.get(t, t));
                a.add_col(j, t, &q);
                v.add_col(j, t, &q);
                if !a.get(t, j).is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // A smaller remainder appeared in row or column t: move it to the pivot.
                let (bi, bj) = min_abs_in_cross(&a, t);
                a.swap_rows(t, bi);
                u.swap_rows(t, bi);
                a.swap_cols(t, bj);
                v.swap_cols(t, bj);
                continue;
            }
            // Enforce divisibility of the remaining block by the pivot.
            let p = a.get(t, t).clone();
            let bad = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !a.get(i, j).is_multiple_of(&p));
            match bad {
                Some((i, _)) => {
                    a.add_row(t, i, &BigInt::one());
                    u.add_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if a.get(t, t).is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
    }

    let d = (0..steps).map(|i| a.get(i, i).clone()).collect();
    SnfResult { d, u, v }
}

fn min_abs_entry(a: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = a.get(i, j);
            if x.is_zero() {
                continue;
            }
            match best {
                Some((bi, bj)) if a.get(bi, bj).abs() <= x.abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

fn min_abs_in_cross(a: &IntMatrix, t: usize) -> (usize, usize) {
    let mut best = (t, t);
    let mut val = a.get(t, t).abs();
    for i in t + 1..a.rows() {
        let x = a.get(i, t).abs();
        if !x.is_zero() && (val.is_zero() || x < val) {
            best = (i, t);
            val = x;
        }
    }
    for j in t + 1..a.cols() {
        let x = a.get(t, j).abs();
        if !x.is_zero() && (val.is_zero() || x < val) {
            best = (t, j);
            val = x;
        }
    }
    best
}

/// Is `z` in the lattice spanned by the columns of `m`?
pub fn in_column_lattice(m: &IntMatrix, z: &[BigInt]) -> bool {
    assert_eq!(m.rows(), z.len());
    if m.cols() == 0 {
        return z.iter().all(Zero::is_zero);
    }
    let snf = smith_normal_form(m);
    let uz = snf.u.mul_vec(z);
    uz.iter().enumerate().all(|(i, x)| match snf.d.get(i) {
        Some(d) if !d.is_zero() => x.is_multiple_of(d),
        _ => x.is_zero(),
    })
}

/// A lattice basis of the kernel of `m`, as columns.
pub fn kernel_basis(m: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(m);
    let r = snf.rank();
    (r..m.cols()).map(|j| snf.v.column(j)).collect()
}

/// A bounded window `lo..=hi` of a chain complex of free abelian groups.
/// `boundaries[k]` is `d_n: C_n -> C_{n-1}` for `n = lo + 1 + k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainComplexWindow {
    pub lo: usize,
    pub hi: usize,
    pub ranks: Vec<usize>,
    pub boundaries: Vec<IntMatrix>,
    /// The complex vanishes below `lo`, so `H_lo` is computed exactly.
    #[serde(default)]
    pub bounded_below: bool,
}

impl ChainComplexWindow {
    pub fn new(
        lo: usize,
        hi: usize,
        ranks: Vec<usize>,
        boundaries: Vec<IntMatrix>,
        bounded_below: bool,
    ) -> Result<Self, LinError> {
        let c = ChainComplexWindow {
            lo,
            hi,
            ranks,
            boundaries,
            bounded_below,
        };
        c.validate()?;
        Ok(c)
    }

    /// Shape checks plus `d_{n-1} d_n = 0`.
    pub fn validate(&self) -> Result<(), LinError> {
        if self.hi < self.lo {
            return Err(LinError::WindowTooSmall {
                lo: self.lo,
                hi: self.hi,
            });
        }
        let width = self.hi - self.lo + 1;
        if self.ranks.len() != width || self.boundaries.len() != width - 1 {
            return Err(LinError::BadShape {
                rows: width,
                cols: width - 1,
                got: self.boundaries.len(),
            });
        }
        for n in self.lo + 1..=self.hi {
            let d = self.boundary(n);
            let expected = (self.rank(n - 1), self.rank(n));
            if d.shape() != expected {
                return Err(LinError::BoundaryShape {
                    degree: n,
                    expected,
                    got: d.shape(),
                });
            }
        }
        for n in self.lo + 2..=self.hi {
            if !self.boundary(n - 1).mul(self.boundary(n)).is_zero() {
                return Err(LinError::NotAComplex {
                    lower: n - 1,
                    upper: n,
                });
            }
        }
        Ok(())
    }

    pub fn rank(&self, n: usize) -> usize {
        if n < self.lo || n > self.hi {
            0
        } else {
            self.ranks[n - self.lo]
        }
    }

    /// `d_n`, for `lo < n <= hi`.
    pub fn boundary(&self, n: usize) -> &IntMatrix {
        &self.boundaries[n - self.lo - 1]
    }

    pub fn is_exact_degree(&self, n: usize) -> bool {
        (self.lo < n && n < self.hi) || (n == self.lo && self.bounded_below && n < self.hi)
    }
}

/// One homology group: `Z^free_rank + sum Z/t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyGroup {
    pub free_rank: usize,
    #[serde(with = "bigint_vec_str")]
    pub torsion: Vec<BigInt>,
    /// False on window edges, where only an upper bound is known.
    pub exact: bool,
}

impl HomologyGroup {
    pub fn zero() -> Self {
        HomologyGroup {
            free_rank: 0,
            torsion: vec![],
            exact: true,
        }
    }

    pub fn free(rank: usize) -> Self {
        HomologyGroup {
            free_rank: rank,
            torsion: vec![],
            exact: true,
        }
    }

    pub fn with_torsion(rank: usize, torsion: &[i64]) -> Self {
        HomologyGroup {
            free_rank: rank,
            torsion: torsion.iter().map(|&t| BigInt::from(t)).collect(),
            exact: true,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Same abstract group, ignoring the exactness tag.
    pub fn same_group(&self, other: &HomologyGroup) -> bool {
        self.free_rank == other.free_rank && self.torsion == other.torsion
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            parts.push("0".to_string());
        }
        write!(f, "{}", parts.join(" + "))?;
        if !self.exact {
            write!(f, " (partial)")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyTable {
    pub entries: BTreeMap<usize, HomologyGroup>,
}

impl HomologyTable {
    pub fn get(&self, n: usize) -> Option<&HomologyGroup> {
        self.entries.get(&n)
    }

    pub fn exact_degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries
            .iter()
            .filter(|(_, g)| g.exact)
            .map(|(&n, _)| n)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,free_rank,torsion,exact\n");
        for (n, g) in &self.entries {
            let tors: Vec<String> = g.torsion.iter().map(|t| t.to_string()).collect();
            out.push_str(&format!("{},{},{},{}\n", n, g.free_rank, tors.join(";"), g.exact));
        }
        out
    }
}

impl fmt::Display for HomologyTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, g) in &self.entries {
            writeln!(f, "H_{n} = {g}")?;
        }
        Ok(())
    }
}

pub fn homology_window(c: &ChainComplexWindow) -> Result<HomologyTable, LinError> {
    if c.hi <= c.lo {
        return Err(LinError::WindowTooSmall { lo: c.lo, hi: c.hi });
    }
    c.validate()?;
    let snfs: BTreeMap<usize, SnfResult> = (c.lo + 1..=c.hi)
        .map(|n| (n, smith_normal_form(c.boundary(n))))
        .collect();
    let mut entries = BTreeMap::new();
    for n in c.lo..=c.hi {
        let rank_out = snfs.get(&n).map_or(0, SnfResult::rank);
        let (rank_in, torsion) = match snfs.get(&(n + 1)) {
            Some(s) => (
                s.rank(),
                s.d.iter()
                    .filter(|x| !x.is_zero() && !x.is_one())
                    .cloned()
                    .collect(),
            ),
            None => (0, vec![]),
        };
        entries.insert(
            n,
            HomologyGroup {
                free_rank: c.rank(n) - rank_out - rank_in,
                torsion,
                exact: c.is_exact_degree(n),
            },
        );
    }
    Ok(HomologyTable { entries })
}

/// A degreewise map between two windows over the same degree range.
/// `components[k]` maps degree `lo + k`; shape `target.rank × source.rank`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainMap {
    pub components: Vec<IntMatrix>,
}

impl ChainMap {
    pub fn component(&self, lo: usize, n: usize) -> &IntMatrix {
        &self.components[n - lo]
    }

    pub fn check(&self, src: &ChainComplexWindow, dst: &ChainComplexWindow) -> Result<(), LinError> {
        for n in src.lo..=src.hi {
            let f = self.component(src.lo, n);
            if f.shape() != (dst.rank(n), src.rank(n)) {
                return Err(LinError::MapShape { degree: n });
            }
        }
        for n in src.lo + 1..=src.hi {
            let left = dst.boundary(n).mul(self.component(src.lo, n));
            let right = self.component(src.lo, n - 1).mul(src.boundary(n));
            if left != right {
                return Err(LinError::MapShape { degree: n });
            }
        }
        Ok(())
    }
}

/// Does `f` induce an isomorphism on `H_n`? Requires `n` exact in both windows.
///
/// Uses that a surjection between isomorphic finitely generated abelian groups
/// is an isomorphism.
pub fn induces_iso_at(
    src: &ChainComplexWindow,
    dst: &ChainComplexWindow,
    f: &ChainMap,
    n: usize,
) -> Result<bool, LinError> {
    let hs = homology_window(src)?;
    let hd = homology_window(dst)?;
    let (Some(a), Some(b)) = (hs.get(n), hd.get(n)) else {
        return Ok(false);
    };
    if !a.same_group(b) {
        return Ok(false);
    }
    let fn_ = f.component(src.lo, n);
    let outgoing = |c: &ChainComplexWindow| {
        if n > c.lo {
            c.boundary(n).clone()
        } else {
            IntMatrix::zeros(0, c.rank(n))
        }
    };
    let ds_n = outgoing(src);
    let dd_n = outgoing(dst);
    let src_cycles = kernel_basis(&ds_n);
    let dst_cycles = kernel_basis(&dd_n);
    // Generators of f(Z_n(src)) + B_n(dst).
    let mut gens: Vec<Vec<BigInt>> = src_cycles.iter().map(|z| fn_.mul_vec(z)).collect();
    if n < dst.hi {
        let up = dst.boundary(n + 1);
        gens.extend((0..up.cols()).map(|j| up.column(j)));
    }
    let rows = dst.rank(n);
    let mut m = IntMatrix::zeros(rows, gens.len());
    for (j, g) in gens.iter().enumerate() {
        for (i, x) in g.iter().enumerate() {
            m.set(i, j, x.clone());
        }
    }
    Ok(dst_cycles.iter().all(|z| in_column_lattice(&m, z)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_snf(m: &IntMatrix) -> SnfResult {
        let s = smith_normal_form(m);
        let prod = s.u.mul(m).mul(&s.v);
        assert!(prod.is_diagonal_with(&s.d), "{} not diagonal", prod);
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
        for w in s.d.windows(2) {
            if !w[0].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]));
            } else {
                assert!(w[1].is_zero());
            }
        }
        s
    }

    #[test]
    fn snf_zero_matrix() {
        let s = check_snf(&IntMatrix::zeros(2, 2));
        assert_eq!(s.d, ints(&[0, 0]));
        assert_eq!(s.u, IntMatrix::identity(2));
        assert_eq!(s.v, IntMatrix::identity(2));
    }

    #[test]
    fn snf_identity() {
        let s = check_snf(&IntMatrix::identity(3));
        assert_eq!(s.d, ints(&[1, 1, 1]));
    }

    #[test]
    fn snf_two_by_two() {
        // gcd of entries = 2, |det| = |12 - 16| = 4, so d = [2, 2].
        let m = IntMatrix::from_i64(2, 2, &[2, 4, 4, 6]).unwrap();
        let s = check_snf(&m);
        assert_eq!(s.d, ints(&[2, 2]));
        assert_eq!(m.det(), BigInt::from(-4));
    }

    #[test]
    fn snf_rectangular() {
        let m = IntMatrix::from_i64(2, 3, &[2, 4, 6, 1, 3, 5]).unwrap();
        let s = check_snf(&m);
        assert_eq!(s.d, ints(&[1, 2]));
    }

    #[test]
    fn bad_shape_rejected() {
        assert!(IntMatrix::from_i64(2, 2, &[1, 2, 3]).is_err());
    }

    #[test]
    fn minimal_s2_homology() {
        let c = ChainComplexWindow::new(
            0,
            3,
            vec![1, 0, 1, 0],
            vec![IntMatrix::zeros(1, 0), IntMatrix::zeros(0, 1), IntMatrix::zeros(1, 0)],
            true,
        )
        .unwrap();
        let h = homology_window(&c).unwrap();
        assert!(h.get(0).unwrap().same_group(&HomologyGroup::free(1)));
        assert!(h.get(1).unwrap().is_zero());
        assert!(h.get(2).unwrap().same_group(&HomologyGroup::free(1)));
        assert!(h.get(0).unwrap().exact && h.get(2).unwrap().exact);
        assert!(!h.get(3).unwrap().exact);
    }

    #[test]
    fn rp_infinity_resolution() {
        // Normalized chains on the nerve of Z/2: one generator per degree,
        // d_n = 0 for n odd, 2 for n even > 0.
        let hi = 5;
        let bds = (1..=hi)
            .map(|n| IntMatrix::from_i64(1, 1, &[if n % 2 == 0 { 2 } else { 0 }]).unwrap())
            .collect();
        let c = ChainComplexWindow::new(0, hi, vec![1; hi + 1], bds, true).unwrap();
        let h = homology_window(&c).unwrap();
        assert_eq!(h.get(0).unwrap(), &HomologyGroup::free(1));
        assert_eq!(h.get(1).unwrap(), &HomologyGroup::with_torsion(0, &[2]));
        assert_eq!(h.get(2).unwrap(), &HomologyGroup::zero());
        assert_eq!(h.get(3).unwrap(), &HomologyGroup::with_torsion(0, &[2]));
    }

    #[test]
    fn non_complex_rejected() {
        let one = IntMatrix::from_i64(1, 1, &[1]).unwrap();
        let err = ChainComplexWindow::new(0, 2, vec![1, 1, 1], vec![one.clone(), one], true);
        assert_eq!(err.unwrap_err(), LinError::NotAComplex { lower: 1, upper: 2 });
    }

    #[test]
    fn window_too_small() {
        let c = ChainComplexWindow::new(2, 2, vec![1], vec![], false).unwrap();
        assert!(matches!(homology_window(&c), Err(LinError::WindowTooSmall { .. })));
    }

    #[test]
    fn lattice_membership() {
        let m = IntMatrix::from_i64(2, 1, &[2, 0]).unwrap();
        assert!(in_column_lattice(&m, &ints(&[4, 0])));
        assert!(!in_column_lattice(&m, &ints(&[1, 0])));
        assert!(!in_column_lattice(&m, &ints(&[2, 1])));
    }

    #[test]
    fn multiplication_by_two_is_not_iso() {
        // Z in degree 0, f = 2: same groups, but not surjective.
        let c = ChainComplexWindow::new(0, 1, vec![1, 0], vec![IntMatrix::zeros(1, 0)], true).unwrap();
        let two = ChainMap {
            components: vec![IntMatrix::from_i64(1, 1, &[2]).unwrap(), IntMatrix::zeros(0, 0)],
        };
        let one = ChainMap {
            components: vec![IntMatrix::identity(1), IntMatrix::zeros(0, 0)],
        };
        assert!(!induces_iso_at(&c, &c, &two, 0).unwrap());
        assert!(induces_iso_at(&c, &c, &one, 0).unwrap());
    }

    #[test]
    fn json_uses_decimal_strings() {
        let m = IntMatrix::from_i64(1, 2, &[3, -7]).unwrap();
        let js = serde_json::to_string(&m).unwrap();
        assert!(js.contains("\"-7\""));
        let back: IntMatrix = serde_json::from_str(&js).unwrap();
        assert_eq!(back, m);
    }
}
