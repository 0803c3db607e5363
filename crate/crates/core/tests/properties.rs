use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use nervebar::barcobar::{bar, cobar, nerve_bar_iso_check};
use nervebar::dgcoalg::{chains, DgCoalgebraWindow};
use nervebar::exactlin::{homology_window, smith_normal_form, ChainComplexWindow, HomologyTable, IntMatrix};
use nervebar::loopgroup::{hurewicz_check, kan_loop_group};
use nervebar::monoids::{monoid_algebra, random_monoid, FiniteMonoid, MonoidMap};
use nervebar::rewrite::{adjoin_inverses, complete, AlgebraWindow, Monomial, Poly, PresentedDgAlgebra};
use nervebar::simplicial::{
    collapsed_tetrahedron, minimal_sphere, rp2, simplex_boundary, standard_simplex, Nerve, SimplicialSet,
};
use nervebar::weqcheck::{weq_verdict, Certificate, WeqVerdict};

fn monoid(seed: u64, max: usize) -> FiniteMonoid {
    random_monoid(&mut ChaCha8Rng::seed_from_u64(seed), max)
}

fn d_squared_zero(c: &ChainComplexWindow) -> bool {
    (c.lo + 2..=c.hi).all(|n| c.boundary(n - 1).mul(c.boundary(n)).is_zero())
}

fn assert_laws(c: &DgCoalgebraWindow) {
    assert!(d_squared_zero(&c.complex));
    let r = c.check_laws();
    assert!(r.is_valid(), "{r}");
}

/// Every homomorphism between two small monoids.
fn homomorphisms(a: &FiniteMonoid, b: &FiniteMonoid) -> Vec<MonoidMap> {
    let n = a.order();
    let mut out = vec![];
    let mut images = vec![0; n];
    loop {
        if let Ok(f) = MonoidMap::new(a.clone(), b.clone(), images.clone()) {
            out.push(f);
        }
        let mut k = 0;
        while k < n {
            images[k] += 1;
            if images[k] < b.order() {
                break;
            }
            images[k] = 0;
            k += 1;
        }
        if k == n {
            return out;
        }
    }
}

fn rank(v: &WeqVerdict) -> u8 {
    match v {
        WeqVerdict::Distinguished { .. } => 0,
        WeqVerdict::ConsistentUpToWindow { .. } => 1,
        WeqVerdict::CertifiedEquivalent { .. } => 2,
    }
}

fn bundled() -> Vec<SimplicialSet> {
    vec![
        minimal_sphere(1),
        minimal_sphere(2),
        minimal_sphere(3),
        rp2(),
        collapsed_tetrahedron(),
        standard_simplex(2),
        standard_simplex(3),
        simplex_boundary(3),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn nerve_chains_are_coalgebras(seed in any::<u64>()) {
        assert_laws(&chains(&Nerve::new(&monoid(seed, 4)), 4).unwrap());
    }

    #[test]
    fn bar_of_monoid_algebra_is_a_coalgebra(seed in any::<u64>()) {
        let a = monoid_algebra(&monoid(seed, 4)).unwrap();
        let w = AlgebraWindow::new(&a, 4, 100_000, 10_000).unwrap();
        assert_laws(&bar(&w, 4).unwrap());
    }

    #[test]
    fn nerve_chains_match_bar(seed in any::<u64>()) {
        let m = monoid(seed, 4);
        let cert = nerve_bar_iso_check(&m, 3).unwrap();
        prop_assert_eq!(cert.ranks[1], m.order() - 1);
    }

    #[test]
    fn cobar_squares_to_zero(seed in any::<u64>(), pick in 0usize..6) {
        let c = if pick == 5 {
            chains(&Nerve::new(&monoid(seed, 4)), 3).unwrap()
        } else {
            chains(&bundled()[pick].clone(), 3).unwrap()
        };
        let omega = cobar(&c, 3).unwrap();
        for g in 0..omega.generators.len() {
            prop_assert!(omega.d(&omega.d(&Poly::generator(g))).is_zero());
        }
    }

    #[test]
    fn smith_normal_form_is_certified(rows in 0usize..6, cols in 0usize..6, seed in proptest::collection::vec(-9i64..=9, 36)) {
        let m = IntMatrix::from_i64(rows, cols, &seed[..rows * cols]).unwrap();
        let s = smith_normal_form(&m);
        prop_assert!(s.u.mul(&m).mul(&s.v).is_diagonal_with(&s.d));
        prop_assert!(s.u.is_unimodular() && s.v.is_unimodular());
        for w in s.d.windows(2) {
            if w[0].is_zero() {
                prop_assert!(w[1].is_zero());
            } else {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }
    }

    #[test]
    fn normal_forms_are_unique(seed in any::<u64>(), words in proptest::collection::vec((-5i64..=5, proptest::collection::vec(0usize..8, 0..5)), 1..5)) {
        let algebras = {
            let a = monoid_algebra(&FiniteMonoid::idempotent()).unwrap();
            let loc = adjoin_inverses(&a, &[a.parse("b").unwrap()]).unwrap();
            vec![loc, monoid_algebra(&monoid(seed, 4)).unwrap(), monoid_algebra(&FiniteMonoid::cyclic(3)).unwrap()]
        };
        let a = &algebras[(seed % 3) as usize];
        let sys = complete(a, 100_000).unwrap();
        prop_assert!(sys.is_canonical());
        let n = a.generators.len();
        let mut p = Poly::zero();
        if n > 0 {
            for (c, w) in &words {
                p.add_term(BigInt::from(*c), Monomial(w.iter().map(|g| g % n).collect()));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assert_eq!(sys.normal_form(&p), sys.reduce_randomly(&p, &mut rng));
    }

    #[test]
    fn weq_verdicts_are_monotone_in_the_window(s in any::<u64>(), t in any::<u64>()) {
        let (a, b) = (monoid(s, 3), monoid(t, 3));
        for f in homomorphisms(&a, &b).into_iter().take(4) {
            let v2 = weq_verdict(&f, 2, 1_000);
            let v3 = weq_verdict(&f, 3, 1_000);
            if let WeqVerdict::Distinguished { .. } = v2 {
                prop_assert_eq!(rank(&v3), 0);
            }
            if let WeqVerdict::CertifiedEquivalent { .. } = v2 {
                prop_assert_eq!(rank(&v3), 2);
            }
        }
    }

    #[test]
    fn identities_are_certified(seed in any::<u64>()) {
        let m = monoid(seed, 4);
        let v = weq_verdict(&MonoidMap::identity(&m), 3, 1_000);
        let certified = matches!(v, WeqVerdict::CertifiedEquivalent { certificate: Certificate::Isomorphism });
        prop_assert!(certified);
    }

    #[test]
    fn hurewicz_holds_for_nerves(seed in any::<u64>()) {
        let k = SimplicialSet::from_simplicial(&Nerve::new(&monoid(seed, 4)), 3).unwrap();
        prop_assert!(hurewicz_check(&k).unwrap().agree);
    }

    #[test]
    fn loop_groups_of_nerves_satisfy_identities(seed in any::<u64>()) {
        let k = SimplicialSet::from_simplicial(&Nerve::new(&monoid(seed, 3)), 3).unwrap();
        prop_assert!(kan_loop_group(&k, 1).is_ok());
    }

    #[test]
    fn json_round_trips(seed in any::<u64>()) {
        let m = monoid(seed, 4);
        let back: FiniteMonoid = serde_json::from_str(&serde_json::to_string(&m).unwrap()).unwrap();
        prop_assert_eq!(&back, &m);
        let k = SimplicialSet::from_simplicial(&Nerve::new(&m), 3).unwrap();
        let back: SimplicialSet = serde_json::from_str(&serde_json::to_string(&k).unwrap()).unwrap();
        prop_assert_eq!(&back, &k);
        let c = chains(&k, 3).unwrap();
        let back: DgCoalgebraWindow = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        prop_assert_eq!(&back, &c);
        let h = homology_window(&c.complex).unwrap();
        let back: HomologyTable = serde_json::from_str(&serde_json::to_string(&h).unwrap()).unwrap();
        prop_assert_eq!(back, h);
    }
}

/// Euler characteristic of the nondegenerate simplices against that of the
/// homology, on complexes fully inside the window.
#[test]
fn euler_characteristic() {
    for k in bundled() {
        let top = k.top_dim();
        let cells: i64 = (0..=top).map(|n| if n % 2 == 0 { k.count(n) as i64 } else { -(k.count(n) as i64) }).sum();
        let h = homology_window(&chains(&k, top + 1).unwrap().complex).unwrap();
        let homology: i64 = (0..=top)
            .map(|n| {
                let r = h.get(n).unwrap().free_rank as i64;
                if n % 2 == 0 { r } else { -r }
            })
            .sum();
        assert_eq!(cells, homology);
    }
}

#[test]
fn presented_algebra_round_trip() {
    let mut a = PresentedDgAlgebra::free(&[("x", 1), ("y", 0)]).unwrap();
    a.relate("y*y", "y").unwrap();
    let back: PresentedDgAlgebra = serde_json::from_str(&serde_json::to_string(&a).unwrap()).unwrap();
    assert_eq!(back, a);
}
