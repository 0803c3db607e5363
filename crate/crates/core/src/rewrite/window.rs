use num_bigint::BigInt;
use num_traits::Zero;

use super::poly::{Coefficients, Monomial, Poly};
use super::system::{basis_in_degree, complete, BasisOutcome, RewriteSystem};
use super::{PresentedDgAlgebra, RewriteError};

/// An augmented dg algebra with canonical normal forms and finite bases in
/// degrees `0..=hi`. The augmentation ideal `A₊` has basis `w - ε(w)` for
/// the nonempty normal monomials `w`.
#[derive(Clone, Debug)]
pub struct AlgebraWindow {
    pub algebra: PresentedDgAlgebra,
    pub system: RewriteSystem,
    pub hi: usize,
    basis: Vec<Vec<Monomial>>,
}

impl AlgebraWindow {
    pub fn new(a: &PresentedDgAlgebra, hi: usize, budget: usize, cap: usize) -> Result<Self, RewriteError> {
        a.validate()?;
        if a.coefficients != Coefficients::Integers {
            return Err(RewriteError::NotCanonical);
        }
        let Some(aug) = &a.augmentation else {
            return Err(RewriteError::NoAugmentation);
        };
        for (i, g) in a.generators.iter().enumerate() {
            if g.degree > 0 && !aug[i].is_zero() {
                return Err(RewriteError::AugmentationNotChainMap(g.label.clone()));
            }
        }
        let system = complete(a, budget)?;
        if !system.is_canonical() {
            return Err(RewriteError::NotCanonical);
        }
        let mut basis = Vec::with_capacity(hi + 1);
        for n in 0..=hi {
            match basis_in_degree(&system, n, cap)? {
                BasisOutcome::Basis(b) => basis.push(b),
                BasisOutcome::CapExceeded => return Err(RewriteError::InfiniteRank { degree: n, cap }),
            }
        }
        for g in a.generators_of_degree(1) {
            let dg = system.normal_form(&a.differential[g]);
            if a.augment(&dg) != Some(BigInt::zero()) {
                return Err(RewriteError::AugmentationNotChainMap(a.generators[g].label.clone()));
            }
        }
        Ok(AlgebraWindow {
            algebra: a.clone(),
            system,
            hi,
            basis,
        })
    }

    /// Normal monomials of degree `n`, including the empty word in degree 0.
    pub fn basis(&self, n: usize) -> &[Monomial] {
        &self.basis[n]
    }

    /// Basis monomials of `A₊` in degree `n`.
    pub fn plus_basis(&self, n: usize) -> &[Monomial] {
        let b = &self.basis[n];
        if n == 0 {
            // the empty word sorts first
            &b[1..]
        } else {
            b
        }
    }

    pub fn plus_rank(&self, n: usize) -> usize {
        if n > self.hi {
            0
        } else {
            self.plus_basis(n).len()
        }
    }

    fn eps(&self, m: &Monomial) -> BigInt {
        self.algebra.augment(&Poly::monomial(BigInt::from(1), m.clone())).unwrap()
    }

    /// The element `w - ε(w)` for the `i`-th basis monomial of `A₊` in degree `n`.
    pub fn plus_element(&self, n: usize, i: usize) -> Poly {
        let w = &self.plus_basis(n)[i];
        let mut p = Poly::monomial(BigInt::from(1), w.clone());
        p.add_term(-self.eps(w), Monomial::one());
        p
    }

    /// Coordinates of an element of `A₊` of degree `n`.
    pub fn plus_coords(&self, p: &Poly, n: usize) -> Vec<BigInt> {
        let nf = self.system.normal_form(p);
        self.plus_basis(n).iter().map(|w| nf.coeff(w)).collect()
    }

    /// Product of basis elements of `A₊`, in coordinates of degree `n1 + n2`.
    pub fn plus_product(&self, n1: usize, i: usize, n2: usize, j: usize) -> Vec<BigInt> {
        let p = self.plus_element(n1, i).mul(&self.plus_element(n2, j));
        self.plus_coords(&p, n1 + n2)
    }

    /// Differential of a basis element of `A₊` of degree `n ≥ 1`.
    pub fn plus_d(&self, n: usize, i: usize) -> Vec<BigInt> {
        let p = self.algebra.d(&self.plus_element(n, i));
        self.plus_coords(&p, n - 1)
    }

    pub fn show_plus(&self, n: usize, i: usize) -> String {
        let w = &self.plus_basis(n)[i];
        let labels = self.algebra.labels();
        if n == 0 {
            format!("_{}", w.display(&labels))
        } else {
            w.display(&labels)
        }
    }

    /// Whether `A₊` vanishes in degree 0.
    pub fn is_connected(&self) -> bool {
        self.plus_rank(0) == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn idempotent_window() {
        let mut a = PresentedDgAlgebra::free(&[("b", 0)]).unwrap();
        a.augmentation = Some(vec![BigInt::from(1)]);
        a.relate("b*b", "b").unwrap();
        let w = AlgebraWindow::new(&a, 3, 1000, 100).unwrap();
        assert_eq!(w.plus_rank(0), 1);
        assert_eq!(w.plus_rank(1), 0);
        // (b-1)^2 = -(b-1)
        assert_eq!(w.plus_product(0, 0, 0, 0), vec![BigInt::from(-1)]);
        assert_eq!(w.show_plus(0, 0), "_b");
    }

    #[test]
    fn exterior_window() {
        let mut a = PresentedDgAlgebra::free(&[("x", 1)]).unwrap();
        a.relate("x*x", "0").unwrap();
        let w = AlgebraWindow::new(&a, 4, 1000, 100).unwrap();
        assert!(w.is_connected());
        assert_eq!(w.plus_rank(1), 1);
        assert_eq!(w.plus_rank(2), 0);
        assert_eq!(w.plus_product(1, 0, 1, 0), Vec::<BigInt>::new());
    }

    #[test]
    fn free_degree_zero_is_infinite() {
        let a = PresentedDgAlgebra::free(&[("t", 0)]).unwrap();
        assert!(matches!(
            AlgebraWindow::new(&a, 2, 100, 20),
            Err(RewriteError::InfiniteRank { degree: 0, .. })
        ));
    }
}
