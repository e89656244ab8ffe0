use super::*;
use crate::expr;
use crate::field::TowerBuilder;
use proptest::prelude::*;

fn ring(p: u64) -> OreRing {
    let b = if p == 0 { TowerBuilder::rationals() } else { TowerBuilder::prime(p) };
    OreRing::new(Arc::new(b.rational("x").derivation("x", "1").build().unwrap()))
}

fn poly(r: &OreRing, s: &str) -> OrePoly {
    expr::eval_ore(r, &expr::parse(s).unwrap()).unwrap()
}

fn el(a: &PetitAlgebra, s: &str) -> SfElement {
    a.element(&poly(a.ring(), s)).unwrap()
}

#[test]
fn t_squared_over_q_is_not_two_sided() {
    let r = ring(0);
    let a = make_petit(&r, &poly(&r, "t^2")).unwrap();
    assert!(!a.two_sided());
    // oracle: t^2 x = x t^2 + 2 t + 0, so t^2 x mod_r t^2 = 2t
    assert_eq!(r.mod_r(&poly(&r, "t^2*x"), &poly(&r, "t^2")).unwrap(), poly(&r, "2*t"));
    assert!(a.t_powers_associative());
    assert_eq!(a.t_powers_associative_literal(), Some(true));
}

#[test]
fn cubes_over_f3_are_two_sided() {
    let r = ring(3);
    assert!(is_two_sided(&r, &poly(&r, "t^3 - x^3")).unwrap());
    assert!(!is_two_sided(&r, &poly(&r, "t^3 - x")).unwrap());
    // oracle: (t^3 - x) t = t (t^3 - x) + 1, hence the remainder 1
    let f = poly(&r, "t^3 - x");
    assert_eq!(r.mod_r(&r.mul(&f, &r.t()), &f).unwrap(), r.one());
}

#[test]
fn scaled_modulus_gives_the_same_algebra() {
    let r = ring(0);
    let g = poly(&r, "t^2 - x*t + 1");
    let f = r.scale_left(&r.tower().from_int(7), &g);
    assert_eq!(make_petit(&r, &f).unwrap(), make_petit(&r, &g).unwrap());
}

#[test]
fn construction_errors_and_degree_one() {
    let r = ring(0);
    assert_eq!(make_petit(&r, &r.zero()).unwrap_err(), Error::ZeroModulus);
    let a = make_petit(&r, &r.t()).unwrap();
    assert!(a.is_degree_one());
    assert_eq!(a.t().unwrap_err(), Error::AlgebraMismatch);
}

#[test]
fn worked_products() {
    let r = ring(0);
    let a = make_petit(&r, &poly(&r, "t^2")).unwrap();
    // t (x t + 1) = x t^2 + 2 t
    assert_eq!(a.circ(&el(&a, "t"), &el(&a, "x*t + 1")).unwrap(), el(&a, "2*t"));
    // (t o t) o x = 0, t o (t o x) = t o (x t + 1) = 2t
    assert_eq!(a.associator(&el(&a, "t"), &el(&a, "t"), &el(&a, "x")).unwrap(), el(&a, "-2*t"));
    let big = SfElement { poly: poly(&r, "t^2") };
    assert_eq!(a.circ(&big, &a.one()).unwrap_err(), Error::AlgebraMismatch);
}

#[test]
fn t_associativity_criteria_agree_for_t2_minus_x() {
    let r = ring(3);
    let a = make_petit(&r, &poly(&r, "t^2 - x")).unwrap();
    assert_eq!(a.t_powers_associative_literal(), Some(a.t_powers_associative()));
}

#[test]
fn zero_divisors_of_reducible_modulus() {
    let r = ring(0);
    let f = r.mul(&poly(&r, "t - x"), &poly(&r, "t + x"));
    let a = make_petit(&r, &f).unwrap();
    // oracle: (t - x) o (t + x) = f mod_r f = 0
    assert!(a.circ(&el(&a, "t - x"), &el(&a, "t + x")).unwrap().is_zero());
    let (g, h) = a.zero_divisor_search(1, 7, 2).unwrap().expect("zero divisor");
    assert!(!g.is_zero() && !h.is_zero());
    assert!(a.circ(&g, &h).unwrap().is_zero());
}

#[test]
fn degree_one_has_no_zero_divisors() {
    let r = ring(3);
    let a = make_petit(&r, &r.t()).unwrap();
    assert_eq!(a.zero_divisor_search(5, 1, 2).unwrap(), None);
}

#[test]
fn differential_extension_has_zero_divisors() {
    let r = ring(3);
    let a = make_petit(&r, &poly(&r, "t^3 - x^3")).unwrap();
    let x = r.tower().generator(0);
    // oracle: (t - x)^3 = t^3 - x^3, so (t - x) o (t - x)^2 = 0
    let h = a.element(&r.linear_power(&x, 2)).unwrap();
    assert!(a.circ(&el(&a, "t - x"), &h).unwrap().is_zero());
    let (g, h) = a.zero_divisor_search(2, 3, 3).unwrap().expect("zero divisor");
    assert!(a.circ(&g, &h).unwrap().is_zero());
}

#[test]
fn fbasis_dimension_is_m_times_p() {
    let r = ring(3);
    let a = make_petit(&r, &poly(&r, "t^2 - x")).unwrap();
    assert_eq!(a.dimension_over_constants(), Some(6));
    assert_eq!(a.fbasis().unwrap().len(), 6);
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn two_sided_modulus_is_associative(seed in any::<u64>()) {
        let r = ring(3);
        let a = make_petit(&r, &poly(&r, "t^3 - x^3")).unwrap();
        let mut g = rng(seed);
        let (u, v, w) = (a.random_element(&mut g, 2), a.random_element(&mut g, 2), a.random_element(&mut g, 2));
        prop_assert!(a.associator(&u, &v, &w).unwrap().is_zero());
    }

    #[test]
    fn product_is_left_k_linear_and_unital(seed in any::<u64>()) {
        let mut g = rng(seed);
        for r in [ring(0), ring(3)] {
            let f = r.random_monic(&mut g, 3, 2);
            let a = make_petit(&r, &f).unwrap();
            let (u, v) = (a.random_element(&mut g, 2), a.random_element(&mut g, 2));
            let c = r.tower().random_element(&mut g, 2);
            prop_assert_eq!(a.circ(&a.scale(&c, &u), &v).unwrap(), a.scale(&c, &a.circ(&u, &v).unwrap()));
            prop_assert_eq!(a.circ(&a.one(), &u).unwrap(), u.clone());
            prop_assert_eq!(a.circ(&u, &a.one()).unwrap(), u.clone());
            prop_assert!(a.associator(&a.one(), &u, &v).unwrap().is_zero());
            let w = a.random_element(&mut g, 2);
            prop_assert_eq!(
                a.circ(&a.add(&u, &w), &v).unwrap(),
                a.add(&a.circ(&u, &v).unwrap(), &a.circ(&w, &v).unwrap())
            );
        }
    }

    #[test]
    fn small_products_need_no_reduction(seed in any::<u64>()) {
        let mut g = rng(seed);
        let r = ring(0);
        let a = make_petit(&r, &r.random_monic(&mut g, 4, 2)).unwrap();
        let u = a.element(&r.random(&mut g, 1, 2)).unwrap();
        let v = a.element(&r.random(&mut g, 2, 2)).unwrap();
        prop_assert_eq!(a.circ(&u, &v).unwrap().into_poly(), r.mul(u.poly(), v.poly()));
    }

    #[test]
    fn t_associativity_criteria_agree(seed in any::<u64>()) {
        let mut g = rng(seed);
        for r in [ring(0), ring(3), ring(5)] {
            let f = r.random_monic(&mut g, 2 + (seed % 2) as usize, 2);
            let a = make_petit(&r, &f).unwrap();
            prop_assert_eq!(a.t_powers_associative_literal(), Some(a.t_powers_associative()));
        }
    }

    #[test]
    fn right_factors_have_left_annihilators(seed in any::<u64>()) {
        let mut g = rng(seed);
        let r = ring(3);
        let h = r.random_monic(&mut g, 1, 2);
        let f = r.mul(&r.random_monic(&mut g, 1, 2), &h);
        let a = make_petit(&r, &f).unwrap();
        let h = a.element(&h).unwrap();
        let u = a.left_annihilator(&h).unwrap().expect("right factor");
        prop_assert!(!u.is_zero());
        prop_assert!(a.circ(&u, &h).unwrap().is_zero());
    }
}
