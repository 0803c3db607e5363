use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::poly::{Coefficients, Monomial, MonomialOrder, Poly};
use super::{PresentedDgAlgebra, RewriteError};

/// `lead * lhs -> rhs`, every monomial of `rhs` below `lhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lhs: Monomial,
    pub lead: BigInt,
    pub rhs: Poly,
}

impl Rule {
    pub fn as_poly(&self) -> Poly {
        Poly::monomial(self.lead.clone(), self.lhs.clone()).sub(&self.rhs)
    }

    pub fn is_unit(&self) -> bool {
        self.lead.is_one()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Completeness {
    /// All critical pairs resolve and every rule has leading coefficient 1:
    /// normal forms are canonical.
    Complete,
    /// All critical pairs resolve but some rule has a non-unit leading
    /// coefficient; reduction to zero still proves equality.
    CompleteNonUnit,
    /// Budget exhausted; reduction is sound but not canonical.
    Incomplete { pending: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceStep {
    pub rule: usize,
    pub word: String,
    pub position: usize,
    pub multiplier: String,
}

#[derive(Clone, Debug)]
pub struct RewriteSystem {
    pub order: MonomialOrder,
    pub coefficients: Coefficients,
    pub rules: Vec<Rule>,
    pub status: Completeness,
    pub labels: Vec<String>,
    /// Reduction steps spent during completion.
    pub steps: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisOutcome {
    Basis(Vec<Monomial>),
    CapExceeded,
}

impl RewriteSystem {
    pub fn empty(a: &PresentedDgAlgebra) -> Self {
        RewriteSystem {
            order: a.order(),
            coefficients: a.coefficients,
            rules: vec![],
            status: Completeness::Complete,
            labels: a.labels(),
            steps: 0,
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.status == Completeness::Complete
    }

    pub fn normal_form(&self, p: &Poly) -> Poly {
        let mut budget = usize::MAX;
        self.reduce(p, &mut budget, None)
    }

    pub fn normal_form_traced(&self, p: &Poly) -> (Poly, Vec<TraceStep>) {
        let mut trace = vec![];
        let mut budget = usize::MAX;
        let nf = self.reduce(p, &mut budget, Some(&mut trace));
        (nf, trace)
    }

    /// Whether some rule applies to `c * m`.
    fn find_reducer(&self, m: &Monomial, c: &BigInt) -> Option<(usize, usize, BigInt)> {
        for (i, r) in self.rules.iter().enumerate() {
            if r.lhs.len() > m.len() {
                continue;
            }
            let q = self.quotient(c, &r.lead);
            if q.is_zero() {
                continue;
            }
            if let Some(&pos) = m.occurrences(&r.lhs).first() {
                return Some((i, pos, q));
            }
        }
        None
    }

    /// Multiple of `lead` to subtract from `c`, leaving a remainder in `[0, lead)`.
    fn quotient(&self, c: &BigInt, lead: &BigInt) -> BigInt {
        match self.coefficients {
            Coefficients::Integers => c.div_floor(lead),
            Coefficients::Modular(_) => c.clone(),
        }
    }

    /// Reduce until no rule applies; `budget` counts single rewrite steps.
    fn reduce(&self, p: &Poly, budget: &mut usize, mut trace: Option<&mut Vec<TraceStep>>) -> Poly {
        let k = self.coefficients;
        let mut todo = p.reduce_coefficients(k);
        let mut done = Poly::zero();
        loop {
            let Some((m, c)) = todo.leading(&self.order).map(|(m, c)| (m.clone(), c.clone())) else {
                return done;
            };
            match self.find_reducer(&m, &c) {
                Some((i, pos, q)) if *budget > 0 => {
                    *budget -= 1;
                    let r = &self.rules[i];
                    let left = m.slice(0, pos);
                    let right = m.slice(pos + r.lhs.len(), m.len());
                    if let Some(t) = trace.as_deref_mut() {
                        t.push(TraceStep {
                            rule: i,
                            word: m.display(&self.labels),
                            position: pos,
                            multiplier: q.to_string(),
                        });
                    }
                    todo.add_term(-(&q * &r.lead), m.clone());
                    todo = todo.add(&r.rhs.sandwich(&left, &right).scale(&q));
                    todo = todo.reduce_coefficients(k);
                }
                _ => {
                    todo.add_term(-c.clone(), m.clone());
                    done.add_term(c, m);
                }
            }
        }
    }

    /// Reduce by applying a randomly chosen rule at a randomly chosen place
    /// in any term, until nothing applies. Agrees with [`Self::normal_form`]
    /// on complete systems.
    pub fn reduce_randomly<R: rand::Rng>(&self, p: &Poly, rng: &mut R) -> Poly {
        let k = self.coefficients;
        let mut cur = p.reduce_coefficients(k);
        loop {
            let mut moves = vec![];
            for (m, c) in cur.terms() {
                for (i, r) in self.rules.iter().enumerate() {
                    let q = self.quotient(c, &r.lead);
                    if q.is_zero() {
                        continue;
                    }
                    for pos in m.occurrences(&r.lhs) {
                        moves.push((m.clone(), i, pos, q.clone()));
                    }
                }
            }
            if moves.is_empty() {
                return cur;
            }
            let (m, i, pos, q) = moves.swap_remove(rng.gen_range(0..moves.len()));
            let r = &self.rules[i];
            let left = m.slice(0, pos);
            let right = m.slice(pos + r.lhs.len(), m.len());
            cur.add_term(-(&q * &r.lead), m.clone());
            cur = cur.add(&r.rhs.sandwich(&left, &right).scale(&q)).reduce_coefficients(k);
        }
    }

    /// Turn a nonzero polynomial into a rule with positive (or monic) lead.
    fn orient(&self, p: &Poly) -> Rule {
        let (m, c) = p.leading(&self.order).expect("nonzero polynomial");
        let m = m.clone();
        let scale = match self.coefficients {
            Coefficients::Integers => {
                if c.is_negative() {
                    -BigInt::one()
                } else {
                    BigInt::one()
                }
            }
            Coefficients::Modular(_) => self.coefficients.inverse(c).expect("nonzero mod p"),
        };
        let p = p.scale(&scale).reduce_coefficients(self.coefficients);
        let lead = p.coeff(&m);
        let mut rhs = Poly::monomial(lead.clone(), m.clone()).sub(&p);
        rhs = rhs.reduce_coefficients(self.coefficients);
        Rule { lhs: m, lead, rhs }
    }

    /// No unit rule applies anywhere in `m`.
    pub fn is_irreducible(&self, m: &Monomial) -> bool {
        self.rules
            .iter()
            .filter(|r| r.is_unit())
            .all(|r| m.occurrences(&r.lhs).is_empty())
    }

    pub fn show_rules(&self) -> Vec<String> {
        self.rules
            .iter()
            .map(|r| {
                let lead = if r.lead.is_one() {
                    String::new()
                } else {
                    format!("{}*", r.lead)
                };
                format!(
                    "{lead}{} -> {}",
                    r.lhs.display(&self.labels),
                    r.rhs.display(&self.labels, &self.order)
                )
            })
            .collect()
    }
}

/// Placements of two words inside a common superword:
/// `(left1, right1, left2, right2)` with `left1 m1 right1 = left2 m2 right2`.
fn ambiguities(m1: &Monomial, m2: &Monomial, same: bool) -> Vec<(Monomial, Monomial, Monomial, Monomial)> {
    let mut out = vec![];
    let (n1, n2) = (m1.len(), m2.len());
    // suffix of m1 = prefix of m2
    for k in 1..n1.min(n2) {
        if m1.0[n1 - k..] == m2.0[..k] {
            out.push((
                Monomial::one(),
                m2.slice(k, n2),
                m1.slice(0, n1 - k),
                Monomial::one(),
            ));
        }
    }
    if same {
        return out;
    }
    // suffix of m2 = prefix of m1
    for k in 1..n1.min(n2) {
        if m2.0[n2 - k..] == m1.0[..k] {
            out.push((
                m2.slice(0, n2 - k),
                Monomial::one(),
                Monomial::one(),
                m1.slice(k, n1),
            ));
        }
    }
    // m2 inside m1
    if n2 <= n1 {
        for pos in m1.occurrences(m2) {
            out.push((
                Monomial::one(),
                Monomial::one(),
                m1.slice(0, pos),
                m1.slice(pos + n2, n1),
            ));
        }
    } else {
        for pos in m2.occurrences(m1) {
            out.push((
                m2.slice(0, pos),
                m2.slice(pos + n1, n2),
                Monomial::one(),
                Monomial::one(),
            ));
        }
    }
    out
}

fn pair_polys(r1: &Rule, r2: &Rule, same: bool, k: Coefficients) -> Vec<Poly> {
    let f1 = r1.as_poly();
    let f2 = r2.as_poly();
    let mut out = vec![];
    for (l1, rr1, l2, rr2) in ambiguities(&r1.lhs, &r2.lhs, same) {
        let g1 = f1.sandwich(&l1, &rr1);
        let g2 = f2.sandwich(&l2, &rr2);
        match k {
            Coefficients::Modular(_) => out.push(g1.sub(&g2)),
            Coefficients::Integers => {
                let l = r1.lead.lcm(&r2.lead);
                out.push(g1.scale(&(&l / &r1.lead)).sub(&g2.scale(&(&l / &r2.lead))));
                let divides = r1.lead.is_multiple_of(&r2.lead) || r2.lead.is_multiple_of(&r1.lead);
                if !divides {
                    let e = r1.lead.extended_gcd(&r2.lead);
                    out.push(g1.scale(&e.x).add(&g2.scale(&e.y)));
                }
            }
        }
    }
    out
}

/// Bounded completion of the relations of `a`. `budget` bounds the total
/// number of rewrite steps and critical pairs processed.
pub fn complete(a: &PresentedDgAlgebra, budget: usize) -> Result<RewriteSystem, RewriteError> {
    let order = a.order();
    for r in &a.relations {
        if !r.as_poly().is_homogeneous(&order) {
            return Err(RewriteError::Unorientable(a.show_relation(r)));
        }
    }
    let mut sys = RewriteSystem::empty(a);
    let k = a.coefficients;
    let mut pending: Vec<Poly> = a
        .relations
        .iter()
        .map(|r| r.as_poly().reduce_coefficients(k))
        .collect();
    let mut seen: BTreeSet<Vec<(Monomial, BigInt)>> = BTreeSet::new();
    let mut remaining = budget;

    while !pending.is_empty() {
        if remaining == 0 {
            sys.status = Completeness::Incomplete {
                pending: pending.len(),
            };
            sys.steps = budget;
            return Ok(sys);
        }
        remaining -= 1;
        // smallest leading monomial first
        let idx = (0..pending.len())
            .min_by(|&i, &j| cmp_lead(&pending[i], &pending[j], &order))
            .unwrap();
        let p = pending.swap_remove(idx);
        let r = sys.reduce(&p, &mut remaining, None);
        if r.is_zero() {
            continue;
        }
        let rule = sys.orient(&r);
        let key: Vec<_> = rule.as_poly().terms().map(|(m, c)| (m.clone(), c.clone())).collect();
        if !seen.insert(key) {
            continue;
        }
        // older rules whose lhs the new rule reduces go back to pending
        let mut kept = vec![];
        for old in std::mem::take(&mut sys.rules) {
            let hit = !old.lhs.occurrences(&rule.lhs).is_empty()
                && !sys.quotient(&old.lead, &rule.lead).is_zero();
            if hit {
                pending.push(old.as_poly());
            } else {
                kept.push(old);
            }
        }
        sys.rules = kept;
        for other in sys.rules.clone() {
            pending.extend(pair_polys(&rule, &other, false, k));
        }
        pending.extend(pair_polys(&rule, &rule, true, k));
        sys.rules.push(rule);
        // keep right-hand sides reduced
        for i in 0..sys.rules.len() {
            let rhs = sys.rules[i].rhs.clone();
            let nf = sys.reduce(&rhs, &mut remaining, None);
            sys.rules[i].rhs = nf;
        }
    }
    sys.steps = budget - remaining;
    sys.rules.sort_by(|x, y| order.cmp(&x.lhs, &y.lhs));
    sys.status = if sys.rules.iter().all(Rule::is_unit) {
        Completeness::Complete
    } else {
        Completeness::CompleteNonUnit
    };
    Ok(sys)
}

fn cmp_lead(p: &Poly, q: &Poly, order: &MonomialOrder) -> Ordering {
    match (p.leading(order), q.leading(order)) {
        (Some((a, _)), Some((b, _))) => order.cmp(a, b),
        (None, Some(_)) => Ordering::Less,
        (Some(_), None) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    }
}

/// Irreducible monomials of degree `n`, or `CapExceeded` when more than
/// `cap` candidate words had to be explored.
pub fn basis_in_degree(sys: &RewriteSystem, n: usize, cap: usize) -> Result<BasisOutcome, RewriteError> {
    if !sys.is_canonical() {
        return Err(RewriteError::NotCanonical);
    }
    let degs = &sys.order.degrees;
    let mut found = vec![];
    let mut frontier = vec![Monomial::one()];
    let mut explored = 0usize;
    while let Some(w) = frontier.pop() {
        explored += 1;
        if explored > cap {
            return Ok(BasisOutcome::CapExceeded);
        }
        let d = sys.order.degree(&w);
        if d == n {
            found.push(w.clone());
        }
        for (g, &dg) in degs.iter().enumerate() {
            if d + dg > n {
                continue;
            }
            let next = w.concat(&Monomial::letter(g));
            if sys.is_irreducible(&next) {
                frontier.push(next);
            }
        }
    }
    found.sort_by(|a, b| sys.order.cmp(a, b));
    Ok(BasisOutcome::Basis(found))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn idempotent() -> PresentedDgAlgebra {
        let mut a = PresentedDgAlgebra::free(&[("b", 0)]).unwrap();
        a.relate("b*b", "b").unwrap();
        a
    }

    #[test]
    fn idempotent_is_complete() {
        let sys = complete(&idempotent(), 1000).unwrap();
        assert_eq!(sys.status, Completeness::Complete);
        assert_eq!(sys.show_rules(), vec!["b*b -> b"]);
        let a = idempotent();
        assert_eq!(a.show(&sys.normal_form(&a.parse("b*b*b").unwrap())), "b");
        assert!(sys.normal_form(&Poly::zero()).is_zero());
    }

    #[test]
    fn inverting_idempotent_collapses() {
        let mut a = idempotent();
        a.push_generator("v", 0, Poly::zero(), None).unwrap();
        a.relate("v*b", "1").unwrap();
        a.relate("b*v", "1").unwrap();
        let sys = complete(&a, 1000).unwrap();
        assert_eq!(sys.status, Completeness::Complete);
        assert_eq!(a.show(&sys.normal_form(&a.parse("b*v").unwrap())), "1");
        assert_eq!(a.show(&sys.normal_form(&a.parse("b").unwrap())), "1");
        assert_eq!(
            basis_in_degree(&sys, 0, 100).unwrap(),
            BasisOutcome::Basis(vec![Monomial::one()])
        );
    }

    #[test]
    fn laurent_ring() {
        let mut a = PresentedDgAlgebra::free(&[("t", 0), ("v", 0)]).unwrap();
        a.relate("v*t + v", "1").unwrap();
        a.relate("t*v + v", "1").unwrap();
        let sys = complete(&a, 1000).unwrap();
        assert_eq!(sys.status, Completeness::Complete);
        assert_eq!(sys.rules.len(), 2);
        assert_eq!(basis_in_degree(&sys, 0, 50).unwrap(), BasisOutcome::CapExceeded);
    }

    #[test]
    fn non_unit_lead_over_integers() {
        let mut a = idempotent();
        a.push_generator("v", 0, Poly::zero(), None).unwrap();
        a.relate("2*v - v*b", "1").unwrap();
        a.relate("2*v - b*v", "1").unwrap();
        let sys = complete(&a, 10_000).unwrap();
        assert_eq!(sys.status, Completeness::CompleteNonUnit);
        let two_v = sys.normal_form(&a.parse("2*v").unwrap());
        assert_eq!(a.show(&two_v), "b + 1");
        assert_eq!(a.show(&sys.normal_form(&a.parse("v*b").unwrap())), "b");
        assert!(matches!(basis_in_degree(&sys, 0, 10), Err(RewriteError::NotCanonical)));
    }

    #[test]
    fn free_ring_degree_bases() {
        let a = PresentedDgAlgebra::free(&[("x", 1)]).unwrap();
        let sys = complete(&a, 10).unwrap();
        let BasisOutcome::Basis(b) = basis_in_degree(&sys, 3, 100).unwrap() else {
            panic!()
        };
        assert_eq!(b, vec![Monomial(vec![0, 0, 0])]);
        let t = PresentedDgAlgebra::free(&[("t", 0)]).unwrap();
        let sys = complete(&t, 10).unwrap();
        assert_eq!(basis_in_degree(&sys, 0, 5).unwrap(), BasisOutcome::CapExceeded);
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        // a*b*a = b*a*b style relation that needs many rounds
        let mut a = PresentedDgAlgebra::free(&[("a", 0), ("b", 0)]).unwrap();
        a.relate("a*b*a", "b*a*b").unwrap();
        let sys = complete(&a, 3).unwrap();
        assert!(matches!(sys.status, Completeness::Incomplete { .. }));
    }

    #[test]
    fn traces_record_rules() {
        let a = idempotent();
        let sys = complete(&a, 100).unwrap();
        let (nf, trace) = sys.normal_form_traced(&a.parse("b*b*b").unwrap());
        assert_eq!(a.show(&nf), "b");
        assert_eq!(trace.len(), 2);
        assert_eq!(trace[0].rule, 0);
    }
}
