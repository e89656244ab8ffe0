use super::*;
use crate::expr;
use crate::field::TowerBuilder;
use crate::nucleus::{self, AnsatzConfig};
use proptest::prelude::*;

fn ring(p: u64) -> OreRing {
    let b = if p == 0 { TowerBuilder::rationals() } else { TowerBuilder::prime(p) };
    OreRing::new(Arc::new(b.rational("x").derivation("x", "1").build().unwrap()))
}

fn el(k: &FieldTower, s: &str) -> Element {
    expr::eval_element(k, &expr::parse(s).unwrap()).unwrap()
}

fn poly(r: &OreRing, s: &str) -> OrePoly {
    expr::eval_ore(r, &expr::parse(s).unwrap()).unwrap()
}

fn linear(r: &OreRing, b: &Element) -> OrePoly {
    r.from_coeffs(vec![r.tower().neg(b), r.tower().one()])
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn companion_transforms() {
    let r = ring(0);
    let k = r.tower();
    let b = el(k, "x^2 + 1/x");
    let t = from_polynomial(&r, &linear(&r, &b)).unwrap();
    assert_eq!(t.matrix(), &[vec![b.clone()]]);
    assert_eq!(characteristic_polynomial(&t, 0).unwrap().polynomial, linear(&r, &b));

    let t = from_polynomial(&r, &poly(&r, "t^2")).unwrap();
    // T(1) = t, T(t) = 0
    assert_eq!(t.apply(&[k.one(), k.zero()]), vec![k.zero(), k.one()]);
    assert_eq!(t.apply(&[k.zero(), k.one()]), vec![k.zero(), k.zero()]);
    assert_eq!(from_polynomial(&r, &poly(&r, "2*t^2")).unwrap_err(), Error::NotMonic);
    assert_eq!(from_polynomial(&r, &r.one()).unwrap_err(), Error::NotMonic);
}

#[test]
fn zero_transform_char_poly() {
    let r = ring(0);
    let k = r.tower();
    let z = zero_plt(r.tower_arc().clone(), 2);
    // T(x, 1) = (1, 0), T^2 = 0
    let c = characteristic_polynomial_at(&z, &[el(k, "x"), k.one()]).unwrap();
    assert_eq!(c.polynomial, poly(&r, "t^2"));
    assert!(characteristic_polynomial_at(&z, &[k.one(), k.zero()]).is_none());
    let h = characteristic_polynomial(&z, 1).unwrap().polynomial;
    assert_eq!(h.degree(), Some(2));

    // the class of e_2 is split: eigenring of dimension 4
    let a = make_petit(&r, &h).unwrap();
    let cfg = AnsatzConfig {
        bound: 4,
        denominator: AnsatzConfig::default_for(&a).denominator,
    };
    assert_eq!(nucleus::eigenring(&a, Some(&cfg)).unwrap().dim(), 4);
}

#[test]
fn resultants_of_small_cases() {
    let r = ring(0);
    assert_eq!(resultant(&r, &r.t(), &r.t(), 0).unwrap(), r.t());
    let r3 = ring(3);
    let f = poly(&r3, "t^2 - x");
    let g = poly(&r3, "t^2 + x*t + 1");
    assert_eq!(resultant(&r3, &f, &g, 0).unwrap().degree(), Some(4));
}

#[test]
fn similarity_examples() {
    let r = ring(0);
    let k = r.tower();
    let f = poly(&r, "t^2 - x*t + 1");
    let w = similarity_search(&r, &f, &f, 0).unwrap().unwrap();
    assert_eq!((w.u, w.u_prime), (r.one(), r.one()));
    let w = similarity_search(&r, &f, &r.scale_left(&k.from_int(3), &f), 0).unwrap().unwrap();
    assert_eq!(r.mul(&w.u_prime, &f), r.scale_left(&k.from_int(3), &f));

    assert_eq!(similarity_search(&r, &r.t(), &poly(&r, "t - 1"), 3).unwrap(), None);
    assert_eq!(similarity_search(&r, &r.t(), &f, 3).unwrap_err(), Error::DegreeMismatch(1, 2));

    // g = t - (x + c'/c) and u = c
    let c = el(k, "x^2 + 1");
    let b = k.add(&el(k, "x"), &k.div(&k.derive(&c), &c));
    let g = linear(&r, &b);
    let f = poly(&r, "t - x");
    let w = similarity_search(&r, &f, &g, 4).unwrap().expect("witness");
    assert_eq!(r.mul(&w.u_prime, &f), r.mul(&g, &w.u));
    let ratio = k.div(&r.coeff(&w.u, 0), &c);
    assert!(k.is_in_base(&ratio));
}

#[test]
fn similarity_over_f3() {
    let r = ring(3);
    let k = r.tower();
    // t - x and t - x - 1/(x+1) differ by the logarithmic derivative of x + 1
    let f = poly(&r, "t - x");
    let g = linear(&r, &el(k, "x + 1/(x+1)"));
    let w = similarity_search(&r, &f, &g, 0).unwrap().expect("witness");
    assert_eq!(r.mul(&w.u_prime, &f), r.mul(&g, &w.u));
    assert_eq!(r.right_gcd(&w.u, &f).unwrap(), r.one());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn pseudo_linearity(seed in any::<u64>()) {
        let mut g = rng(seed);
        for r in [ring(0), ring(5)] {
            let k = r.tower();
            let n = 1 + (seed % 3) as usize;
            let m: Vec<Vec<Element>> = (0..n).map(|_| (0..n).map(|_| k.random_element(&mut g, 2)).collect()).collect();
            let t = PseudoLinearTransform::new(r.tower_arc().clone(), m);
            let alpha = k.random_element(&mut g, 2);
            let v: Vec<Element> = (0..n).map(|_| k.random_element(&mut g, 2)).collect();
            let av: Vec<Element> = v.iter().map(|x| k.mul(&alpha, x)).collect();
            let da = k.derive(&alpha);
            let rhs: Vec<Element> = t.apply(&v).iter().zip(&v).map(|(tv, x)| k.add(&k.mul(&alpha, tv), &k.mul(&da, x))).collect();
            prop_assert_eq!(t.apply(&av), rhs);
        }
    }

    #[test]
    fn char_poly_round_trip(seed in any::<u64>()) {
        let mut g = rng(seed);
        for r in [ring(0), ring(3)] {
            let k = r.tower();
            let d = 1 + (seed % 4) as usize;
            let f = r.random_monic(&mut g, d, 2);
            let t = from_polynomial(&r, &f).unwrap();
            let mut e0 = vec![k.zero(); d];
            e0[0] = k.one();
            let c = characteristic_polynomial_at(&t, &e0).unwrap();
            prop_assert_eq!(c.polynomial, f);
        }
    }

    #[test]
    fn resultant_of_linear_factors(seed in any::<u64>()) {
        let mut g = rng(seed);
        let r = ring(0);
        let k = r.tower();
        let (a, b) = (k.random_element(&mut g, 3), k.random_element(&mut g, 3));
        let res = resultant(&r, &linear(&r, &a), &linear(&r, &b), seed).unwrap();
        prop_assert_eq!(res, linear(&r, &k.add(&a, &b)));
    }

    #[test]
    fn resultant_degree_is_multiplicative(seed in any::<u64>()) {
        // char 0: over F_p(x) a module of dimension above [K:F] may have no cyclic vector
        let mut g = rng(seed);
        let r = ring(0);
        let (m, n) = (1 + (seed % 3) as usize, 1 + (seed / 3 % 3) as usize);
        let f = r.random_monic(&mut g, m, 1);
        let h = r.random_monic(&mut g, n, 1);
        let res = resultant(&r, &f, &h, seed).unwrap();
        prop_assert_eq!(res.degree(), Some(m * n));
        prop_assert!(r.tower().is_one(res.leading().unwrap()));
    }

    #[test]
    fn similarity_witnesses_verify(seed in any::<u64>()) {
        let mut g = rng(seed);
        let r = ring(3);
        let k = r.tower();
        let c = k.random_nonzero(&mut g, 2);
        let a = k.random_element(&mut g, 2);
        let f = linear(&r, &a);
        let h = linear(&r, &k.add(&a, &k.div(&k.derive(&c), &c)));
        let w = similarity_search(&r, &f, &h, 0).unwrap().expect("logarithmic shift is similar");
        prop_assert_eq!(r.mul(&w.u_prime, &f), r.mul(&h, &w.u));
        prop_assert_eq!(r.right_gcd(&w.u, &f).unwrap(), r.one());
    }
}
