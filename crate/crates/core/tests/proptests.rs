mod common;

use common::*;
use foliation_core::cli::parse_field;
use foliation_core::liealg::{LieAlgebra, Vector};
use foliation_core::{PolyVectorField, Polynomial};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn ring_axioms(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let [a, b, c] = [0, 1, 2].map(|_| rand_poly(&mut rng, 2, 0, 3, 3));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Polynomial::one(2), a.clone());
    }

    #[test]
    fn vanishing_order_is_additive(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let a = rand_poly(&mut rng, 3, 0, 4, 3);
        let b = rand_poly(&mut rng, 3, 0, 4, 3);
        prop_assume!(!a.is_zero() && !b.is_zero());
        let (va, vb) = (a.vanishing_order().finite().unwrap(), b.vanishing_order().finite().unwrap());
        prop_assert_eq!((&a * &b).vanishing_order().finite(), Some(va + vb));
    }

    #[test]
    fn homogeneous_parts_sum_back(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let x = rand_field(&mut rng, 2, 0, 5, 4);
        let mut acc = PolyVectorField::zero(2);
        for (d, part) in x.homogeneous_components() {
            prop_assert!(part.is_homogeneous_of_degree(d));
            prop_assert_eq!(&part, &x.homogeneous_part(d));
            acc = &acc + &part;
        }
        prop_assert_eq!(acc, x);
    }

    #[test]
    fn bracket_jacobi(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let [x, y, z] = [0, 1, 2].map(|_| rand_field(&mut rng, 2, 0, 2, 2));
        let br = |a: &PolyVectorField, b: &PolyVectorField| a.lie_bracket(b).unwrap();
        let j = &(&br(&x, &br(&y, &z)) + &br(&y, &br(&z, &x))) + &br(&z, &br(&x, &y));
        prop_assert!(j.is_zero());
        prop_assert_eq!(br(&x, &y), -&br(&y, &x));
    }

    #[test]
    fn p_q_inverse(seed in any::<u64>(), k in 1u32..=3) {
        let mut rng = seeded(seed);
        let x = rand_field(&mut rng, 3, k + 1, k + 3, 3);
        prop_assert_eq!(x.apply_q(k).unwrap().apply_p(k), x.clone());
        prop_assert_eq!(x.apply_p(k).apply_q(k).unwrap(), x);
    }

    #[test]
    fn parse_render_round_trip(seed in any::<u64>()) {
        let mut rng = seeded(seed);
        let x = rand_field(&mut rng, 3, 0, 3, 3);
        let vars = names("x, y, z");
        let back = parse_field(&x.render(&vars), &vars).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn isotropy_structure_is_lie(seed in any::<u64>()) {
        // gl2 with a random cubic tail divisible by x, which keeps the module closed
        let mut rng = seeded(seed);
        let tail = rand_field(&mut rng, 2, 2, 2, 2).mul_poly(&Polynomial::var(2, 0));
        let gens = vec![fld("x, y", "x*dy"), fld("x, y", "y*dx"), fld("x, y", "x*dx"), &fld("x, y", "y*dy") + &tail];
        let f = foliation_core::modalg::FoliationModule::new(gens).unwrap();
        let iso = foliation_core::holonomy::isotropy_algebra(&f).map_err(|e| TestCaseError::fail(format!("{e} for {tail:?}")))?;
        prop_assert_eq!(iso.dim(), 4);
        let g = &iso.algebra;
        let e = |i: usize| -> Vector { (0..4).map(|j| q((i == j) as i64)).collect() };
        for a in 0..4 {
            for b in 0..4 {
                prop_assert_eq!(g.bracket(&e(a), &e(b)), g.bracket(&e(b), &e(a)).iter().map(|v| -v).collect::<Vec<_>>());
            }
        }
        prop_assert!(LieAlgebra::new(g.structure().to_vec()).is_ok());
    }
}
