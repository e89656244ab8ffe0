use super::*;
use crate::expr;
use crate::field::TowerBuilder;
use crate::ore::OreRing;
use crate::petit::make_petit;
use proptest::prelude::*;
use std::sync::Arc;

fn ring(p: u64) -> OreRing {
    let b = if p == 0 { TowerBuilder::rationals() } else { TowerBuilder::prime(p) };
    OreRing::new(Arc::new(b.rational("x").derivation("x", "1").build().unwrap()))
}

fn algebra(r: &OreRing, s: &str) -> PetitAlgebra {
    make_petit(r, &expr::eval_ore(r, &expr::parse(s).unwrap()).unwrap()).unwrap()
}

fn cfg(a: &PetitAlgebra, bound: usize) -> AnsatzConfig {
    AnsatzConfig {
        bound,
        denominator: a.tower().one(),
    }
}

/// Coefficient vector over Q of `g0 + g1 t` for polynomial `g0, g1` of degree <= 2.
fn flat(a: &PetitAlgebra, g: &SfElement) -> Vec<Element> {
    let r = a.ring();
    (0..2).map(|i| r.coeff(g.poly(), i)).collect()
}

#[test]
fn eigenring_of_t_squared_over_q() {
    let r = ring(0);
    let k = r.tower();
    let a = algebra(&r, "t^2");
    let s = right_nucleus(&a, Some(&cfg(&a, 2))).unwrap();
    assert_eq!(s.dim(), 4);
    assert_eq!(s.status, SubspaceStatus::CertifiedMaximal { bound: 2 });
    assert_eq!(AnsatzConfig::default_for(&a), cfg(&a, 4));

    // oracle: t^2 (g0 + g1 t) mod_r t^2 = g0'' + (2 g0' + g1'') t
    for g in &s.basis {
        let (g0, g1) = (r.coeff(g.poly(), 0), r.coeff(g.poly(), 1));
        assert!(k.derive_n(&g0, 2).is_zero());
        assert!(k.add(&k.mul(&k.from_int(2), &k.derive(&g0)), &k.derive_n(&g1, 2)).is_zero());
    }
    // and the hand solution {1, t, x t, x - x^2 t} lies in the computed span
    let images: Vec<Vec<Element>> = s.basis.iter().map(|g| flat(&a, g)).collect();
    for h in ["1", "t", "x*t", "x - x^2*t"] {
        let h = a.element(&expr::eval_ore(&r, &expr::parse(h).unwrap()).unwrap()).unwrap();
        assert!(ansatz::prime_solve(k, &images, &flat(&a, &h)).is_some());
    }
    assert_eq!(a_polynomial_test(&a, Some(&cfg(&a, 2))).unwrap(), APolyVerdict::APolynomial { dim: 4 });
}

#[test]
fn ansatz_errors() {
    let r = ring(0);
    let a = algebra(&r, "t^2");
    assert_eq!(right_nucleus(&a, None).unwrap_err(), Error::AnsatzRequired);
    let bad = AnsatzConfig {
        bound: 2,
        denominator: a.tower().zero(),
    };
    assert_eq!(right_nucleus(&a, Some(&bad)).unwrap_err(), Error::InconsistentAnsatz);
}

#[test]
fn two_sided_modulus_is_its_own_nucleus() {
    let r = ring(3);
    let a = algebra(&r, "t^3 - x^3");
    let all = all_nuclei(&a).unwrap();
    for s in [&all.left, &all.middle, &all.right, &all.nucleus] {
        assert_eq!(s.dim_over_constants(), Some(9));
    }
    assert!(k_in_right_nucleus(&a).unwrap());
    // the center contains F and the image of t^3 = x^3, which lies in F
    assert!(all.center.dim() >= 1);
    let p = presentation(&a, &all.right).unwrap();
    assert_eq!(p.constants.len(), 9);
    assert!(p.associative);
    assert!(p.unit.is_some());
}

#[test]
fn degree_one_is_k() {
    let r = ring(3);
    let a = algebra(&r, "t");
    let all = all_nuclei(&a).unwrap();
    for s in [&all.left, &all.middle, &all.right, &all.nucleus, &all.center] {
        assert_eq!(s.dim_over_constants(), Some(3));
    }
    assert!(k_in_right_nucleus(&a).unwrap());
    // the eigenring of t is the constants
    assert_eq!(eigenring(&a, None).unwrap().dim(), 1);

    let q = ring(0);
    let a = algebra(&q, "t");
    let s = right_nucleus(&a, None).unwrap();
    assert_eq!(s.status, SubspaceStatus::StructuralK { samples: 100 });
    assert_eq!(a_polynomial_test(&a, Some(&cfg(&a, 2))).unwrap(), APolyVerdict::APolynomial { dim: 1 });
}

#[test]
fn t2_minus_x_over_f3() {
    let r = ring(3);
    let a = algebra(&r, "t^2 - x");
    assert!(!a.two_sided());
    assert_eq!(a.dimension_over_constants(), Some(6));
    let all = all_nuclei(&a).unwrap();
    assert_eq!(all.left.dim(), 3);
    assert_eq!(all.middle.dim(), 3);
    assert!(all.left.basis.iter().all(|g| g.poly().degree().unwrap_or(0) == 0));
    let n = all.nucleus.dim();
    assert!((1..3).contains(&n), "nucleus dimension {n}");
    assert!(!k_in_right_nucleus(&a).unwrap());
    // the nucleus is a field inside K, so presentable and associative
    let p = presentation(&a, &all.nucleus).unwrap();
    assert!(p.associative && p.unit.is_some());
    assert!(matches!(
        a_polynomial_test(&a, None).unwrap(),
        APolyVerdict::EigenringDimension { .. }
    ));
}

#[test]
fn presentations() {
    let r = ring(0);
    let a = algebra(&r, "t^2");
    let s = right_nucleus(&a, Some(&cfg(&a, 2))).unwrap();
    let p = presentation(&a, &s).unwrap();
    assert_eq!(p.constants.len(), 4);
    assert!(p.associative);
    assert!(p.unit.is_some());

    let one = FSubspace {
        basis: vec![a.one()],
        status: SubspaceStatus::Exact,
    };
    let p = presentation(&a, &one).unwrap();
    assert_eq!(p.constants, vec![vec![vec![p.scalars.one()]]]);

    // t o t = x leaves the span of t
    let b = algebra(&r, "t^2 - x");
    let t = FSubspace {
        basis: vec![b.t().unwrap()],
        status: SubspaceStatus::Exact,
    };
    assert_eq!(presentation(&b, &t).unwrap_err(), Error::NotClosed);
}

#[test]
fn inconclusive_for_t2_minus_x_over_q() {
    let r = ring(0);
    let a = algebra(&r, "t^2 - x");
    match a_polynomial_test(&a, Some(&cfg(&a, 3))).unwrap() {
        APolyVerdict::Inconclusive { lower_bound } => assert!((1..4).contains(&lower_bound)),
        v => panic!("unexpected verdict {v:?}"),
    }
}

#[test]
fn ansatz_dimension_is_monotone() {
    let r = ring(0);
    for f in ["t^2", "t^2 - x", "t^2 + x*t"] {
        let a = algebra(&r, f);
        let dims: Vec<usize> = (0..4).map(|n| right_nucleus(&a, Some(&cfg(&a, n))).unwrap().dim()).collect();
        assert!(dims.windows(2).all(|w| w[0] <= w[1]), "{f}: {dims:?}");
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn right_nucleus_kills_associators(seed in any::<u64>()) {
        let mut g = rng(seed);
        let r = ring(0);
        let a = algebra(&r, "t^2");
        let s = right_nucleus(&a, Some(&cfg(&a, 2))).unwrap();
        let (u, v) = (a.random_element(&mut g, 3), a.random_element(&mut g, 3));
        for x in &s.basis {
            prop_assert!(a.associator(&u, &v, x).unwrap().is_zero());
        }
    }

    #[test]
    fn finite_right_nucleus_properties(seed in any::<u64>()) {
        let mut g = rng(seed);
        let r = ring(3);
        let f = r.random_monic(&mut g, 2, 1);
        let a = make_petit(&r, &f).unwrap();
        let s = right_nucleus(&a, None).unwrap();
        let fk = a.tower().constant_field().unwrap();
        let mut span = EchelonBasis::new();
        for x in &s.basis {
            prop_assert!(in_right_nucleus(&a, x.poly()).unwrap());
            span.insert(fk, &a.coordinates(x).unwrap());
        }
        prop_assert!(span.contains(fk, &a.coordinates(&a.one()).unwrap()));
        let t = a.coordinates(&a.t().unwrap()).unwrap();
        prop_assert_eq!(span.contains(fk, &t), a.t_powers_associative());
        let (u, v) = (a.random_element(&mut g, 2), a.random_element(&mut g, 2));
        for x in &s.basis {
            prop_assert!(a.associator(&u, &v, x).unwrap().is_zero());
        }
    }
}
