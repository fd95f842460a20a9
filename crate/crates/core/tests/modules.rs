//! Explicit modules against the character engine, Hom adjunction and
//! certificate serialization.

use num_traits::ToPrimitive;
use proptest::prelude::*;

use verlinde_core::characters::{decompose_tilting, exterior_char, simple_char, symmetric_char, tilting_char, Character};
use verlinde_core::decompose::{decompose_module, is_isomorphic, DecompositionCertificate, IsoOutcome, DEFAULT_SEED};
use verlinde_core::slmod::{
    braiding, dual, hom_space, natural_module, parse_module_expr, tensor_many, tilting_module, ModuleExpr, ModuleMap,
    WeightModule,
};

fn predicted(e: &ModuleExpr, p: u32) -> Character {
    match e {
        ModuleExpr::Natural => tilting_char(p, 1),
        ModuleExpr::One => Character::one(),
        ModuleExpr::Tilting(m) => tilting_char(p, *m),
        ModuleExpr::Simple(m) => simple_char(p, *m).unwrap(),
        ModuleExpr::Steinberg(r) => simple_char(p, (p as u64).pow(*r) - 1).unwrap(),
        ModuleExpr::Dual(x) => Character::new(predicted(x, p).poly().bar()).unwrap(),
        ModuleExpr::Frobenius(x) => predicted(x, p).frobenius(p),
        ModuleExpr::Sym(x, i) => symmetric_char(&predicted(x, p), *i as u64).unwrap(),
        ModuleExpr::Wedge(x, i) => exterior_char(&predicted(x, p), *i as u64).unwrap(),
        ModuleExpr::Tensor(xs) => xs.iter().fold(Character::one(), |acc, x| acc.mul(&predicted(x, p))),
        ModuleExpr::Power(x, n) => (0..*n).fold(Character::one(), |acc, _| acc.mul(&predicted(x, p))),
        ModuleExpr::Sum(xs) => xs.iter().fold(Character::zero(), |acc, x| acc.add(&predicted(x, p))),
    }
}

fn expr() -> impl Strategy<Value = ModuleExpr> {
    let leaf = prop_oneof![
        Just(ModuleExpr::Natural),
        Just(ModuleExpr::One),
        (0u64..7).prop_map(ModuleExpr::Tilting),
        (0u64..10).prop_map(ModuleExpr::Simple),
        Just(ModuleExpr::Steinberg(1)),
    ];
    leaf.prop_recursive(3, 8, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|x| ModuleExpr::Dual(Box::new(x))),
            inner.clone().prop_map(|x| ModuleExpr::Frobenius(Box::new(x))),
            (inner.clone(), 0usize..4).prop_map(|(x, i)| ModuleExpr::Sym(Box::new(x), i)),
            (inner.clone(), 0usize..4).prop_map(|(x, i)| ModuleExpr::Wedge(Box::new(x), i)),
            prop::collection::vec(inner.clone(), 2..3).prop_map(ModuleExpr::Tensor),
            (inner.clone(), 0usize..3).prop_map(|(x, n)| ModuleExpr::Power(Box::new(x), n)),
            prop::collection::vec(inner, 2..3).prop_map(ModuleExpr::Sum),
        ]
    })
}

fn small(e: &ModuleExpr, p: u32, cap: u64) -> bool {
    // the expression and every subterm stay below the cap
    fn walk(e: &ModuleExpr, p: u32, cap: u64) -> bool {
        let ok = predicted(e, p).dim().to_u64().is_some_and(|d| d <= cap);
        ok && match e {
            ModuleExpr::Dual(x) | ModuleExpr::Frobenius(x) => walk(x, p, cap),
            ModuleExpr::Sym(x, i) | ModuleExpr::Wedge(x, i) | ModuleExpr::Power(x, i) => {
                walk(x, p, cap) && predicted(x, p).dim().to_u64().unwrap().pow(*i as u32) <= 4 * cap
            }
            ModuleExpr::Tensor(xs) | ModuleExpr::Sum(xs) => xs.iter().all(|x| walk(x, p, cap)),
            _ => true,
        }
    }
    walk(e, p, cap)
}

fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![3u32, 5])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn built_modules_have_predicted_characters(p in prime(), e in expr()) {
        prop_assume!(small(&e, p, 80));
        let m = e.build(p).unwrap();
        prop_assert!(m.check_grading());
        prop_assert_eq!(m.character(), predicted(&e, p));
        prop_assert_eq!(parse_module_expr(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn hom_tensor_adjunction(p in prime(), a in 0u64..6, b in 0u64..4, c in 0u64..6) {
        let (ta, tb, tc) = (tilting_module(p, a).unwrap(), tilting_module(p, b).unwrap(), tilting_module(p, c).unwrap());
        prop_assume!(ta.dim() * tb.dim() * tc.dim() <= 120);
        let ab = tensor_many(&[ta.clone(), tb.clone()]).unwrap().module;
        let cb = tensor_many(&[tc.clone(), dual(&tb).unwrap().module]).unwrap().module;
        let left = hom_space(&ab, &tc).unwrap();
        let right = hom_space(&ta, &cb).unwrap();
        prop_assert_eq!(left.len(), right.len());
        prop_assert!(left.iter().chain(&right).all(ModuleMap::is_intertwiner));
        // Hom(A, C) = Hom(1, A* C)
        let one = WeightModule::trivial(ta.field());
        let ac = tensor_many(&[dual(&ta).unwrap().module, tc.clone()]).unwrap().module;
        prop_assert_eq!(hom_space(&ta, &tc).unwrap().len(), hom_space(&one, &ac).unwrap().len());
    }

    #[test]
    fn certificates_survive_serialization(p in prime(), parts in prop::collection::vec(0u64..8, 1..4)) {
        let text = parts.iter().map(|m| format!("T({m})")).collect::<Vec<_>>().join("*");
        let e = parse_module_expr(&text).unwrap();
        prop_assume!(small(&e, p, 150));
        let m = e.build(p).unwrap();
        let cert = decompose_module(&m, DEFAULT_SEED).unwrap();
        prop_assert_eq!(cert.multiset(), decompose_tilting(p, &m.character()).unwrap());
        let json = serde_json::to_string(&cert.to_json(true)).unwrap();
        let back = DecompositionCertificate::from_json(&serde_json::from_str(&json).unwrap()).unwrap();
        prop_assert!(back.validate().unwrap().ok());
        prop_assert_eq!(back.multiset(), cert.multiset());
        prop_assert_eq!(serde_json::to_string(&back.to_json(true)).unwrap(), json);
    }

    #[test]
    fn decomposition_does_not_depend_on_the_seed(p in prime(), k in 2usize..6, seed in any::<u64>()) {
        let v = natural_module(p).unwrap();
        let m = tensor_many(&vec![v; k]).unwrap().module;
        let a = decompose_module(&m, seed).unwrap();
        prop_assert!(a.validate().unwrap().ok());
        prop_assert_eq!(a.multiset(), decompose_module(&m, DEFAULT_SEED).unwrap().multiset());
    }
}

#[test]
fn braiding_is_an_involutive_intertwiner() {
    for p in [3, 5] {
        let a = tilting_module(p, 2).unwrap();
        let b = tilting_module(p, p as u64).unwrap();
        let ab = tensor_many(&[a.clone(), b.clone()]).unwrap();
        let ba = tensor_many(&[b, a]).unwrap();
        let s = braiding(&ab, &ba).unwrap();
        let t = braiding(&ba, &ab).unwrap();
        assert!(s.is_intertwiner());
        assert!(t.compose(&s).unwrap().matrix.is_identity());
    }
}

#[test]
fn commuted_tensor_products_are_isomorphic() {
    let x = parse_module_expr("T(3)*V").unwrap().build(3).unwrap();
    let y = parse_module_expr("V*T(3)").unwrap().build(3).unwrap();
    assert!(matches!(is_isomorphic(&x, &y, DEFAULT_SEED).unwrap(), IsoOutcome::Isomorphic { .. }));
    let z = parse_module_expr("T(4)+V^2").unwrap().build(3).unwrap();
    assert!(!is_isomorphic(&x, &z, DEFAULT_SEED).unwrap().is_isomorphic());
}
