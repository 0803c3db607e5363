//! Noncommutative polynomials with integer (or mod-p) coefficients.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::RewriteError;

/// Generator index into a presentation's generator list.
pub type Gen = usize;

/// A word in the generators; the empty word is the unit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(pub Vec<Gen>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn letter(g: Gen) -> Self {
        Monomial(vec![g])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Monomial) -> Monomial {
        let mut w = self.0.clone();
        w.extend_from_slice(&other.0);
        Monomial(w)
    }

    pub fn slice(&self, from: usize, to: usize) -> Monomial {
        Monomial(self.0[from..to].to_vec())
    }

    /// Positions at which `pat` occurs as a factor.
    pub fn occurrences(&self, pat: &Monomial) -> Vec<usize> {
        if pat.len() > self.len() {
            return vec![];
        }
        if pat.is_empty() {
            return (0..=self.len()).collect();
        }
        (0..=self.len() - pat.len())
            .filter(|&i| self.0[i..i + pat.len()] == pat.0[..])
            .collect()
    }

    pub fn display(&self, labels: &[String]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        self.0
            .iter()
            .map(|&g| labels[g].as_str())
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Coefficient ring: the integers or a prime field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Coefficients {
    #[default]
    Integers,
    Modular(u64),
}

impl Coefficients {
    pub fn normalize(&self, c: BigInt) -> BigInt {
        match self {
            Coefficients::Integers => c,
            Coefficients::Modular(p) => c.mod_floor(&BigInt::from(*p)),
        }
    }

    pub fn is_unit(&self, c: &BigInt) -> bool {
        match self {
            Coefficients::Integers => c.abs().is_one(),
            Coefficients::Modular(p) => !c.mod_floor(&BigInt::from(*p)).is_zero(),
        }
    }

    pub fn inverse(&self, c: &BigInt) -> Option<BigInt> {
        match self {
            Coefficients::Integers => c.abs().is_one().then(|| c.clone()),
            Coefficients::Modular(p) => {
                let p = BigInt::from(*p);
                let c = c.mod_floor(&p);
                if c.is_zero() {
                    return None;
                }
                // Fermat: c^(p-2) mod p
                Some(c.modpow(&(&p - 2), &p))
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            Coefficients::Integers => "Z".to_string(),
            Coefficients::Modular(p) => format!("Z/{p}"),
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if s == "Z" {
            return Some(Coefficients::Integers);
        }
        let p: u64 = s.strip_prefix("Z/")?.parse().ok()?;
        (p >= 2).then_some(Coefficients::Modular(p))
    }
}

impl Serialize for Coefficients {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.name())
    }
}

impl<'de> Deserialize<'de> for Coefficients {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Coefficients::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("bad coefficient ring {s:?}")))
    }
}

/// Degree, then length, then lexicographic by generator index
/// (later generators are larger).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    pub degrees: Vec<usize>,
}

impl MonomialOrder {
    pub fn degree(&self, m: &Monomial) -> usize {
        m.0.iter().map(|&g| self.degrees[g]).sum()
    }

    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        self.degree(a)
            .cmp(&self.degree(b))
            .then(a.len().cmp(&b.len()))
            .then_with(|| a.0.cmp(&b.0))
    }
}

/// Finite linear combination of monomials.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigInt::one(), Monomial::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(c.into(), Monomial::one())
    }

    pub fn generator(g: Gen) -> Self {
        Self::monomial(BigInt::one(), Monomial::letter(g))
    }

    pub fn monomial(c: BigInt, m: Monomial) -> Self {
        let mut p = Poly::zero();
        p.add_term(c, m);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, c: BigInt, m: Monomial) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(c.clone(), m.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-BigInt::one()))
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(x * y, a.concat(b));
            }
        }
        out
    }

    /// `left * self * right` for monomials.
    pub fn sandwich(&self, left: &Monomial, right: &Monomial) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (left.concat(m).concat(right), c.clone()))
                .collect(),
        }
    }

    pub fn reduce_coefficients(&self, k: Coefficients) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            out.add_term(k.normalize(c.clone()), m.clone());
        }
        out
    }

    pub fn leading(&self, order: &MonomialOrder) -> Option<(&Monomial, &BigInt)> {
        self.terms.iter().max_by(|a, b| order.cmp(a.0, b.0))
    }

    pub fn homogeneous_degree(&self, order: &MonomialOrder) -> Option<usize> {
        let mut degs = self.terms.keys().map(|m| order.degree(m));
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self, order: &MonomialOrder) -> bool {
        self.is_zero() || self.homogeneous_degree(order).is_some()
    }

    /// Substitute a polynomial for each generator.
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut acc = Poly::constant(c.clone());
            for &g in &m.0 {
                acc = acc.mul(&images[g]);
            }
            out = out.add(&acc);
        }
        out
    }

    /// Rendering with terms in decreasing monomial order.
    pub fn display(&self, labels: &[String], order: &MonomialOrder) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| order.cmp(b.0, a.0));
        let mut out = String::new();
        for (i, (m, c)) in terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if m.is_empty() {
                out.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    out.push_str(&mag.to_string());
                    out.push('*');
                }
                out.push_str(&m.display(labels));
            }
        }
        out
    }
}

/// Characters that may not appear in a generator label.
pub const RESERVED: &[char] = &['+', '-', '*', ' ', '\t', '\n', '"'];

pub fn valid_label(s: &str) -> bool {
    !s.is_empty()
        && !s.chars().any(|c| RESERVED.contains(&c))
        && !s.starts_with(|c: char| c.is_ascii_digit())
}

/// Parse `2*b*v - v + 1`-style expressions against a label table.
pub fn parse_poly(src: &str, labels: &HashMap<String, Gen>) -> Result<Poly, RewriteError> {
    let err = |msg: &str| RewriteError::Parse(format!("{msg} in {src:?}"));
    let mut out = Poly::zero();
    let chars: Vec<char> = src.chars().collect();
    let mut i = 0;
    let mut sign = BigInt::one();
    let skip_ws = |i: &mut usize| {
        while *i < chars.len() && chars[*i].is_whitespace() {
            *i += 1;
        }
    };
    loop {
        skip_ws(&mut i);
        if i >= chars.len() {
            break;
        }
        if chars[i] == '+' || chars[i] == '-' {
            if chars[i] == '-' {
                sign = -sign;
            }
            i += 1;
            continue;
        }
        // One term: factors joined by '*'.
        let mut coeff = sign.clone();
        let mut word = Vec::new();
        loop {
            skip_ws(&mut i);
            if i >= chars.len() {
                return Err(err("dangling '*'"));
            }
            if chars[i].is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = chars[start..i].iter().collect::<String>().parse().map_err(|_| err("bad integer"))?;
                coeff *= n;
            } else {
                let start = i;
                while i < chars.len() && !RESERVED.contains(&chars[i]) {
                    i += 1;
                }
                if start == i {
                    return Err(err("expected a factor"));
                }
                let name: String = chars[start..i].iter().collect();
                let g = labels
                    .get(&name)
                    .ok_or_else(|| RewriteError::UnknownGenerator(name.clone()))?;
                word.push(*g);
            }
            skip_ws(&mut i);
            if i < chars.len() && chars[i] == '*' {
                i += 1;
                continue;
            }
            break;
        }
        out.add_term(coeff, Monomial(word));
        sign = BigInt::one();
        skip_ws(&mut i);
        if i < chars.len() && chars[i] != '+' && chars[i] != '-' {
            return Err(err("expected an operator"));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(names: &[&str]) -> (Vec<String>, HashMap<String, Gen>) {
        let labels: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let map = labels.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        (labels, map)
    }

    #[test]
    fn parse_and_display() {
        let (labels, map) = table(&["b", "v"]);
        let order = MonomialOrder { degrees: vec![0, 0] };
        let p = parse_poly("2*b*v - v + 1", &map).unwrap();
        assert_eq!(p.coeff(&Monomial(vec![0, 1])), BigInt::from(2));
        assert_eq!(p.coeff(&Monomial(vec![1])), BigInt::from(-1));
        assert_eq!(p.coeff(&Monomial::one()), BigInt::one());
        assert_eq!(p.display(&labels, &order), "2*b*v - v + 1");
        let q = parse_poly(&p.display(&labels, &order), &map).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn cancellation_removes_terms() {
        let (_, map) = table(&["x"]);
        let p = parse_poly("x - x", &map).unwrap();
        assert!(p.is_zero());
        let q = parse_poly("x*x + 3 - x*x - 3", &map).unwrap();
        assert!(q.is_zero());
    }

    #[test]
    fn bracket_labels_parse() {
        let (_, map) = table(&["[b]", "[b|b]"]);
        let p = parse_poly("-[b|b] - [b]*[b]", &map).unwrap();
        assert_eq!(p.num_terms(), 2);
        assert_eq!(p.coeff(&Monomial(vec![0, 0])), BigInt::from(-1));
    }

    #[test]
    fn unknown_generator() {
        let (_, map) = table(&["x"]);
        assert!(matches!(parse_poly("y", &map), Err(RewriteError::UnknownGenerator(_))));
        assert!(parse_poly("x x", &map).is_err());
    }

    #[test]
    fn order_is_degree_length_lex() {
        let order = MonomialOrder { degrees: vec![0, 0, 1] };
        let m = |v: &[usize]| Monomial(v.to_vec());
        assert_eq!(order.cmp(&m(&[2]), &m(&[1, 1, 1])), Ordering::Greater);
        assert_eq!(order.cmp(&m(&[0, 0]), &m(&[1])), Ordering::Greater);
        assert_eq!(order.cmp(&m(&[1, 0]), &m(&[0, 1])), Ordering::Greater);
    }

    #[test]
    fn modular_inverse() {
        let k = Coefficients::Modular(7);
        assert_eq!(k.inverse(&BigInt::from(3)), Some(BigInt::from(5)));
        assert_eq!(Coefficients::Integers.inverse(&BigInt::from(2)), None);
        assert_eq!(Coefficients::parse("Z/2"), Some(Coefficients::Modular(2)));
    }
}
