//! Finitely presented dg rings over the integers: normal forms by bounded
//! completion, degreewise bases, H₀ rings, and localization by adjoining
//! inverses.

mod local;
mod poly;
mod system;
mod window;

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub use local::{
    adjoin_inverses, extended_cobar, h0_ring, localize_cobar, parse_assignment, ring_iso_certify, CheckRecord, CycleBasis,
    IsoCertificate,
};
pub use poly::{parse_poly, valid_label, Coefficients, Gen, Monomial, MonomialOrder, Poly};
pub use system::{
    basis_in_degree, complete, BasisOutcome, Completeness, RewriteSystem, Rule, TraceStep,
};
pub use window::AlgebraWindow;

use crate::exactlin::{parse_int, LinError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RewriteError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("invalid generator label {0:?}")]
    InvalidLabel(String),
    #[error("duplicate generator label {0:?}")]
    DuplicateLabel(String),
    #[error("relation {0} is not homogeneous and cannot be oriented by the degree order")]
    Unorientable(String),
    #[error("differential of {0} is not of degree -1")]
    BadDifferential(String),
    #[error("{0} is not a degree-0 cycle")]
    NotACycle(String),
    #[error("rewrite system is not complete with unit leading coefficients")]
    NotCanonical,
    #[error("degree {degree} has more than {cap} basis monomials")]
    InfiniteRank { degree: usize, cap: usize },
    #[error("presentation has no augmentation")]
    NoAugmentation,
    #[error("augmentation does not vanish on the boundary of {0}")]
    AugmentationNotChainMap(String),
    #[error("not a homomorphism: relation {0} maps to nonzero normal form {1}")]
    NotAHomomorphism(String, String),
    #[error("not inverse on generator {0}: round trip gives {1}")]
    NotInverse(String, String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error(transparent)]
    Lin(#[from] LinError),
    #[error("{0}")]
    Upstream(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub label: String,
    #[serde(rename = "deg")]
    pub degree: usize,
}

/// `lhs = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub lhs: Poly,
    pub rhs: Poly,
}

impl Relation {
    pub fn new(lhs: Poly, rhs: Poly) -> Self {
        Relation { lhs, rhs }
    }

    pub fn as_poly(&self) -> Poly {
        self.lhs.sub(&self.rhs)
    }
}

/// A graded algebra given by generators, relations and a differential on
/// generators, extended as a derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PresentedDgAlgebra {
    pub generators: Vec<Generator>,
    pub differential: Vec<Poly>,
    pub relations: Vec<Relation>,
    /// Value of the augmentation on each generator.
    pub augmentation: Option<Vec<BigInt>>,
    pub coefficients: Coefficients,
    pub notes: Vec<String>,
}

impl PresentedDgAlgebra {
    /// The ground ring: no generators.
    pub fn ground() -> Self {
        PresentedDgAlgebra {
            generators: vec![],
            differential: vec![],
            relations: vec![],
            augmentation: Some(vec![]),
            coefficients: Coefficients::Integers,
            notes: vec![],
        }
    }

    /// Free graded algebra with zero differential.
    pub fn free(gens: &[(&str, usize)]) -> Result<Self, RewriteError> {
        let mut a = Self::ground();
        for (label, deg) in gens {
            a.push_generator(label, *deg, Poly::zero(), Some(BigInt::zero()))?;
        }
        Ok(a)
    }

    pub fn push_generator(
        &mut self,
        label: &str,
        degree: usize,
        differential: Poly,
        augmentation: Option<BigInt>,
    ) -> Result<Gen, RewriteError> {
        if !valid_label(label) {
            return Err(RewriteError::InvalidLabel(label.to_string()));
        }
        if self.generators.iter().any(|g| g.label == label) {
            return Err(RewriteError::DuplicateLabel(label.to_string()));
        }
        self.generators.push(Generator {
            label: label.to_string(),
            degree,
        });
        self.differential.push(differential);
        match (&mut self.augmentation, augmentation) {
            (Some(aug), Some(x)) => aug.push(x),
            (aug, _) => *aug = None,
        }
        Ok(self.generators.len() - 1)
    }

    /// Add a relation written as `lhs = rhs` in the label syntax.
    pub fn relate(&mut self, lhs: &str, rhs: &str) -> Result<(), RewriteError> {
        let l = self.parse(lhs)?;
        let r = self.parse(rhs)?;
        self.relations.push(Relation::new(l, r));
        Ok(())
    }

    pub fn labels(&self) -> Vec<String> {
        self.generators.iter().map(|g| g.label.clone()).collect()
    }

    pub fn label_map(&self) -> HashMap<String, Gen> {
        self.generators
            .iter()
            .enumerate()
            .map(|(i, g)| (g.label.clone(), i))
            .collect()
    }

    pub fn generator(&self, label: &str) -> Option<Gen> {
        self.generators.iter().position(|g| g.label == label)
    }

    pub fn order(&self) -> MonomialOrder {
        MonomialOrder {
            degrees: self.generators.iter().map(|g| g.degree).collect(),
        }
    }

    pub fn parse(&self, s: &str) -> Result<Poly, RewriteError> {
        parse_poly(s, &self.label_map())
    }

    pub fn show(&self, p: &Poly) -> String {
        p.display(&self.labels(), &self.order())
    }

    pub fn degree_of(&self, m: &Monomial) -> usize {
        self.order().degree(m)
    }

    /// Apply the differential to a polynomial as a graded derivation:
    /// `d(xy) = dx*y + (-1)^|x| x*dy`.
    pub fn d(&self, p: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in p.terms() {
            let mut sign_deg = 0usize;
            for (i, &g) in m.0.iter().enumerate() {
                let dg = &self.differential[g];
                if !dg.is_zero() {
                    let left = m.slice(0, i);
                    let right = m.slice(i + 1, m.len());
                    let sign = if sign_deg.is_multiple_of(2) { c.clone() } else { -c.clone() };
                    out = out.add(&dg.sandwich(&left, &right).scale(&sign));
                }
                sign_deg += self.generators[g].degree;
            }
        }
        out.reduce_coefficients(self.coefficients)
    }

    /// Evaluate the augmentation on a polynomial.
    pub fn augment(&self, p: &Poly) -> Option<BigInt> {
        let aug = self.augmentation.as_ref()?;
        let mut total = BigInt::zero();
        for (m, c) in p.terms() {
            let mut v = c.clone();
            for &g in &m.0 {
                v *= &aug[g];
            }
            total += v;
        }
        Some(self.coefficients.normalize(total))
    }

    /// Structural checks: labels, differential degrees, homogeneity.
    pub fn validate(&self) -> Result<(), RewriteError> {
        let order = self.order();
        for (i, g) in self.generators.iter().enumerate() {
            if !valid_label(&g.label) {
                return Err(RewriteError::InvalidLabel(g.label.clone()));
            }
            let dg = &self.differential[i];
            if dg.is_zero() {
                continue;
            }
            if g.degree == 0 || dg.homogeneous_degree(&order) != Some(g.degree - 1) {
                return Err(RewriteError::BadDifferential(g.label.clone()));
            }
        }
        for r in &self.relations {
            if !r.as_poly().is_homogeneous(&order) {
                return Err(RewriteError::Unorientable(self.show_relation(r)));
            }
        }
        Ok(())
    }

    pub fn show_relation(&self, r: &Relation) -> String {
        format!("{} = {}", self.show(&r.lhs), self.show(&r.rhs))
    }

    /// Same presentation with coefficients reduced modulo `p`.
    pub fn reduce_mod(&self, p: u64) -> Self {
        let k = Coefficients::Modular(p);
        let mut out = self.clone();
        out.coefficients = k;
        out.differential = self.differential.iter().map(|d| d.reduce_coefficients(k)).collect();
        out.relations = self
            .relations
            .iter()
            .map(|r| Relation::new(r.lhs.reduce_coefficients(k), r.rhs.reduce_coefficients(k)))
            .collect();
        if let Some(aug) = &mut out.augmentation {
            for x in aug.iter_mut() {
                *x = k.normalize(x.clone());
            }
        }
        out.notes.push(format!("coefficients reduced modulo {p}"));
        out
    }

    pub fn generators_of_degree(&self, n: usize) -> impl Iterator<Item = Gen> + '_ {
        self.generators
            .iter()
            .enumerate()
            .filter(move |(_, g)| g.degree == n)
            .map(|(i, _)| i)
    }
}

#[derive(Serialize, Deserialize)]
struct AlgebraRepr {
    gens: Vec<Generator>,
    #[serde(default)]
    rels: Vec<(String, String)>,
    #[serde(default)]
    diff: BTreeMap<String, String>,
    #[serde(default)]
    aug: Option<BTreeMap<String, String>>,
    #[serde(default)]
    coefficients: Coefficients,
    #[serde(default)]
    notes: Vec<String>,
}

impl Serialize for PresentedDgAlgebra {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let diff = self
            .generators
            .iter()
            .zip(&self.differential)
            .filter(|(_, d)| !d.is_zero())
            .map(|(g, d)| (g.label.clone(), self.show(d)))
            .collect();
        let aug = self.augmentation.as_ref().map(|aug| {
            self.generators
                .iter()
                .zip(aug)
                .map(|(g, x)| (g.label.clone(), x.to_string()))
                .collect()
        });
        AlgebraRepr {
            gens: self.generators.clone(),
            rels: self
                .relations
                .iter()
                .map(|r| (self.show(&r.lhs), self.show(&r.rhs)))
                .collect(),
            diff,
            aug,
            coefficients: self.coefficients,
            notes: self.notes.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PresentedDgAlgebra {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = AlgebraRepr::deserialize(d)?;
        let mut a = PresentedDgAlgebra::ground();
        a.coefficients = repr.coefficients;
        a.notes = repr.notes;
        for g in &repr.gens {
            a.push_generator(&g.label, g.degree, Poly::zero(), Some(BigInt::zero()))
                .map_err(D::Error::custom)?;
        }
        for (label, expr) in &repr.diff {
            let g = a
                .generator(label)
                .ok_or_else(|| D::Error::custom(format!("unknown generator {label}")))?;
            a.differential[g] = a.parse(expr).map_err(D::Error::custom)?;
        }
        for (l, r) in &repr.rels {
            a.relate(l, r).map_err(D::Error::custom)?;
        }
        a.augmentation = match repr.aug {
            None => None,
            Some(map) => {
                let mut aug = vec![BigInt::zero(); a.generators.len()];
                for (label, v) in &map {
                    let g = a
                        .generator(label)
                        .ok_or_else(|| D::Error::custom(format!("unknown generator {label}")))?;
                    aug[g] = parse_int(v).map_err(D::Error::custom)?;
                }
                Some(aug)
            }
        };
        a.validate().map_err(D::Error::custom)?;
        Ok(a)
    }
}

/// `1 + x` style helper used by localization constructors.
pub(crate) fn one_plus(g: Gen, sign: i64) -> Poly {
    Poly::one().add(&Poly::generator(g).scale(&BigInt::from(sign)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivation_signs() {
        // x of degree 1: d(x*x) = dx*x - x*dx.
        let mut a = PresentedDgAlgebra::free(&[("y", 2)]).unwrap();
        a.push_generator("x", 1, Poly::zero(), Some(BigInt::zero())).unwrap();
        a.push_generator("z", 2, Poly::zero(), Some(BigInt::zero())).unwrap();
        a.differential[2] = a.parse("x*x").unwrap();
        let dzx = a.d(&a.parse("z*x").unwrap());
        assert_eq!(a.show(&dzx), "x*x*x");
        let dxz = a.d(&a.parse("x*z").unwrap());
        assert_eq!(a.show(&dxz), "-x*x*x");
    }

    #[test]
    fn json_round_trip() {
        let mut a = PresentedDgAlgebra::free(&[("b", 0)]).unwrap();
        a.relate("b*b", "b").unwrap();
        let js = serde_json::to_string(&a).unwrap();
        let back: PresentedDgAlgebra = serde_json::from_str(&js).unwrap();
        assert_eq!(a, back);
    }

    #[test]
    fn inhomogeneous_relation_rejected() {
        let mut a = PresentedDgAlgebra::free(&[("x", 1)]).unwrap();
        a.relate("x", "1").unwrap();
        assert!(matches!(a.validate(), Err(RewriteError::Unorientable(_))));
    }

    #[test]
    fn bad_labels_rejected() {
        let mut a = PresentedDgAlgebra::ground();
        assert!(a.push_generator("2x", 0, Poly::zero(), None).is_err());
        assert!(a.push_generator("a-b", 0, Poly::zero(), None).is_err());
        a.push_generator("a", 0, Poly::zero(), None).unwrap();
        assert!(matches!(
            a.push_generator("a", 0, Poly::zero(), None),
            Err(RewriteError::DuplicateLabel(_))
        ));
    }
}
