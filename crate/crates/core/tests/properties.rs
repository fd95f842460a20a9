//! Algebraic laws of the exact kernels and the character engine.

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::ToPrimitive;
use proptest::prelude::*;

use verlinde_core::characters::{
    decompose_tilting, exterior_char, simple_char, symmetric_char, tilting_char, weyl_char, Character, TiltingMultiset,
};
use verlinde_core::exactcore::{base_digits, lp_eval_cyclotomic, lp_mul, lucas_binomial, solve_linear, FFMatrix, Field, LaurentPoly};

fn poly() -> impl Strategy<Value = LaurentPoly> + Clone {
    prop::collection::vec((-8i64..=8, -30i64..=30), 0..7).prop_map(LaurentPoly::from_terms)
}

fn prime() -> impl Strategy<Value = u32> + Clone {
    prop::sample::select(vec![3u32, 5, 7])
}

fn field() -> impl Strategy<Value = &'static Field> {
    prop::sample::select(vec![(2u32, 1u32), (3, 1), (5, 1), (3, 2), (2, 3), (5, 2)]).prop_map(|(p, e)| Field::get(p, e).unwrap())
}

fn tilting_multiset() -> impl Strategy<Value = TiltingMultiset> {
    (prime(), prop::collection::vec((0u64..15, 1u64..3), 0..4)).prop_map(|(p, v)| {
        let mut m = TiltingMultiset::new(p);
        for (w, c) in v {
            m.insert(w, c);
        }
        m
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn laurent_ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &(-&a), LaurentPoly::zero());
        prop_assert_eq!(&a * &LaurentPoly::one(), a.clone());
        prop_assert_eq!(lp_mul(&a, &b), &a * &b);
    }

    #[test]
    fn evaluation_at_roots_of_unity_is_a_ring_map(a in poly(), b in poly(), p in prime(), s in 1u32..3) {
        let (ea, eb) = (lp_eval_cyclotomic(&a, p, s), lp_eval_cyclotomic(&b, p, s));
        prop_assert_eq!(lp_eval_cyclotomic(&(&a + &b), p, s), ea.add(&eb));
        prop_assert_eq!(lp_eval_cyclotomic(&(&a * &b), p, s), ea.mul(&eb));
    }

    #[test]
    fn bar_and_substitution_are_ring_maps(a in poly(), b in poly(), k in 1i64..4) {
        prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
        prop_assert_eq!((&a * &b).substitute_power(k), &a.substitute_power(k) * &b.substitute_power(k));
        prop_assert_eq!(a.bar().bar(), a.clone());
        prop_assert_eq!((&a * &b).eval_one(), a.eval_one() * b.eval_one());
    }

    #[test]
    fn exact_division_inverts_multiplication(a in poly(), b in poly()) {
        prop_assume!(!b.is_zero());
        let q = (&a * &b).div_exact(&b).unwrap();
        prop_assert_eq!(q, a);
    }

    #[test]
    fn field_axioms(f in field(), x in 0u32..125, y in 0u32..125, z in 0u32..125) {
        let q = f.order();
        let (a, b, c) = (x % q, y % q, z % q);
        prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.add(a, f.neg(a)), 0);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            prop_assert_eq!(f.pow(a, (q - 1) as u64), 1);
        } else {
            prop_assert!(f.inv(a).is_none());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn solutions_solve(p in prime(), rows in 1usize..6, cols in 1usize..6, entries in prop::collection::vec(0u32..7, 36), rhs in prop::collection::vec(0u32..7, 6)) {
        let f = Field::prime(p).unwrap();
        let a = FFMatrix::from_vec(f, rows, cols, entries[..rows * cols].iter().map(|&x| x % p).collect());
        let b = FFMatrix::column(f, rhs[..rows].iter().map(|&x| x % p).collect());
        let sol = solve_linear(&a, &b).unwrap();
        prop_assert_eq!(sol.rank, a.rank());
        prop_assert_eq!(sol.kernel.cols(), cols - sol.rank);
        prop_assert!(a.mul(&sol.kernel).is_zero());
        match &sol.particular {
            Some(x) => prop_assert_eq!(a.mul(x), b),
            None => prop_assert!(FFMatrix::hstack(&[&a, &b]).rank() > a.rank()),
        }
    }

    #[test]
    fn lucas_agrees_with_big_binomials(n in 0u64..400, k in 0u64..400, p in prime()) {
        let exact = if k > n { BigInt::from(0) } else { binomial(BigInt::from(n), BigInt::from(k)) };
        let expected = (exact % p).to_u32().unwrap();
        prop_assert_eq!(lucas_binomial(n, k, p), expected);
    }

    #[test]
    fn base_digits_reconstruct(n in 0u64..100_000, p in prime()) {
        let d = base_digits(n, p);
        prop_assert_eq!(d.iter().rev().fold(0u64, |acc, &x| acc * p as u64 + x as u64), n);
        prop_assert!(d.iter().all(|&x| x < p));
    }

    #[test]
    fn tilting_characters_are_honest(p in prime(), m in 0u64..60) {
        let t = tilting_char(p, m);
        prop_assert!(t.poly().is_bar_invariant());
        prop_assert!(t.poly().has_nonnegative_coeffs());
        prop_assert_eq!(t.poly().max_exp(), Some(m as i64));
        // sum of (weight + 1) over the Weyl constituents
        let weyl_dim: BigInt = t.weyl_coordinates().iter().map(|(w, c)| c * BigInt::from(w + 1)).sum();
        prop_assert_eq!(t.dim(), weyl_dim);
        let s = simple_char(p, m).unwrap();
        prop_assert!(s.poly().is_bar_invariant() && s.poly().has_nonnegative_coeffs());
        let expected: u64 = base_digits(m, p).iter().map(|&d| d as u64 + 1).product();
        prop_assert_eq!(s.dim(), BigInt::from(expected));
    }

    #[test]
    fn tilting_decomposition_round_trips(m in tilting_multiset()) {
        prop_assert_eq!(decompose_tilting(m.p, &m.character()).unwrap(), m);
    }

    #[test]
    fn products_of_tilting_characters_are_tilting(p in prime(), a in 0u64..12, b in 0u64..12) {
        let prod = tilting_char(p, a).mul(&tilting_char(p, b));
        let d = decompose_tilting(p, &prod).unwrap();
        prop_assert_eq!(d.character(), prod);
    }

    #[test]
    fn exterior_and_symmetric_dimensions(p in prime(), m in 0u64..10, i in 0u64..6) {
        let f = tilting_char(p, m);
        let n = f.dim().to_u64().unwrap();
        let choose = |a: u64, b: u64| if b > a { BigInt::from(0) } else { binomial(BigInt::from(a), BigInt::from(b)) };
        prop_assert_eq!(exterior_char(&f, i).unwrap().dim(), choose(n, i));
        prop_assert_eq!(symmetric_char(&f, i).unwrap().dim(), choose(n + i - 1, i));
    }

    #[test]
    fn e_h_duality(m in tilting_multiset()) {
        let f = Character::one().add(&m.character());
        for k in 1..=8u64 {
            let mut acc = LaurentPoly::zero();
            for i in 0..=k {
                let t = exterior_char(&f, i).unwrap().poly() * symmetric_char(&f, k - i).unwrap().poly();
                acc = if i % 2 == 0 { &acc + &t } else { &acc - &t };
            }
            prop_assert!(acc.is_zero(), "order {}", k);
        }
    }

    #[test]
    fn weyl_characters_multiply_by_clebsch_gordan(a in 0u64..15, b in 0u64..15) {
        let expected = (0..=a.min(b)).fold(Character::zero(), |acc, k| acc.add(&weyl_char(a + b - 2 * k)));
        prop_assert_eq!(weyl_char(a).mul(&weyl_char(b)), expected);
    }
}
