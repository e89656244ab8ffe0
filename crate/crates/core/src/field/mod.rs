//! Coefficient fields built as towers over Q or F_p, carrying a derivation.
//!
//! A tower is evaluated innermost-out. Level 0 is the base field; level `j`
//! adjoins the `j`-th layer generator to level `j - 1`, either as a
//! transcendental (`Rational`) or as a root of `u^p - alpha` (`PInsep`).
//! Elements are stored in a canonical recursive form so that equality is
//! structural equality:
//!
//! * rational layers hold reduced fractions of univariate polynomials in the
//!   layer generator whose denominator is monic;
//! * inseparable layers hold polynomials in `u` of degree `< p`.

mod basis;
mod build;
mod format;
pub(crate) mod poly;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use serde::Serialize;

pub(crate) use basis::ConstantField;
pub use basis::FBasis;
pub(crate) use format::is_atomic;
pub use build::{make_tower, LayerDescription, TowerBuilder, TowerDescription};
use poly::Polys;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BaseField {
    Rationals,
    Prime(u64),
}

impl BaseField {
    /// 0 for Q, `p` for F_p.
    pub fn characteristic(&self) -> u64 {
        match self {
            BaseField::Rationals => 0,
            BaseField::Prime(p) => *p,
        }
    }
}

/// An element of some level of a [`FieldTower`].
///
/// Elements carry no reference to their tower; all arithmetic goes through
/// the tower that created them.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Element {
    Rational(BigRational),
    Modular(u64),
    Frac(Box<Frac>),
    Alg(Vec<Element>),
}

/// Reduced fraction `num / den` of polynomials over the level below.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Frac {
    pub(crate) num: Vec<Element>,
    pub(crate) den: Vec<Element>,
}

/// How a layer relates to the constant field `F = ker(d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LayerRole {
    /// Transcendental with nonzero derivative in characteristic 0.
    Separating,
    /// Transcendental `x` with nonzero derivative in characteristic p; `x^p` lies in F.
    Inseparable,
    /// Transcendental with zero derivative; the generator itself lies in F.
    Constant,
    /// Root of `u^p - alpha` with `alpha` in F.
    PurelyInseparable,
}

#[derive(Clone, Debug)]
pub(crate) struct Layer {
    pub(crate) name: String,
    /// `Some(alpha)` for a purely inseparable layer; `alpha` lives one level down.
    pub(crate) alpha: Option<Element>,
    /// Image of the generator under the derivation, at this layer's level.
    pub(crate) delta: Element,
    pub(crate) role: LayerRole,
}

/// A coefficient field `K` with derivation `d` and identified constants `F`.
#[derive(Clone, Debug)]
pub struct FieldTower {
    base: BaseField,
    layers: Vec<Layer>,
    constants: Option<Box<ConstantField>>,
}

impl FieldTower {
    pub(crate) fn bare(base: BaseField) -> Self {
        FieldTower {
            base,
            layers: Vec::new(),
            constants: None,
        }
    }

    /// The prime field of this tower's characteristic, as a tower of its own.
    pub fn prime_field(&self) -> FieldTower {
        FieldTower::bare(self.base)
    }

    pub fn base(&self) -> BaseField {
        self.base
    }

    pub fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn generator_names(&self) -> Vec<&str> {
        self.layers.iter().map(|l| l.name.as_str()).collect()
    }

    pub fn layer_roles(&self) -> Vec<LayerRole> {
        self.layers.iter().map(|l| l.role).collect()
    }

    /// Index of the layer with the given generator name.
    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.layers.iter().position(|l| l.name == name)
    }

    /// The `i`-th generator, at top level.
    pub fn generator(&self, i: usize) -> Element {
        let lvl = i + 1;
        let g = match self.layers[i].alpha {
            Some(_) => Element::Alg(vec![self.zero_at(lvl - 1), self.one_at(lvl - 1)]),
            None => Element::Frac(Box::new(Frac {
                num: vec![self.zero_at(lvl - 1), self.one_at(lvl - 1)],
                den: vec![self.one_at(lvl - 1)],
            })),
        };
        self.lift(g, lvl, self.depth())
    }

    pub fn generators(&self) -> Vec<Element> {
        (0..self.depth()).map(|i| self.generator(i)).collect()
    }

    /// Derivation image of the `i`-th generator, at top level.
    pub fn generator_derivative(&self, i: usize) -> Element {
        self.lift(self.layers[i].delta.clone(), i + 1, self.depth())
    }

    /// `alpha` of a purely inseparable layer, at top level.
    pub fn generator_alpha(&self, i: usize) -> Option<Element> {
        self.layers[i]
            .alpha
            .as_ref()
            .map(|a| self.lift(a.clone(), i, self.depth()))
    }

    // ---- constants and embeddings -------------------------------------

    pub fn zero(&self) -> Element {
        self.zero_at(self.depth())
    }

    pub fn one(&self) -> Element {
        self.one_at(self.depth())
    }

    pub fn from_int(&self, n: i64) -> Element {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Element {
        let c = match self.base {
            BaseField::Rationals => Element::Rational(BigRational::from_integer(n.clone())),
            BaseField::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(p));
                Element::Modular(r.to_u64().expect("reduced residue fits"))
            }
        };
        self.lift(c, 0, self.depth())
    }

    /// An integer as a level-0 element.
    pub(crate) fn prime_field_int(&self, n: i64) -> Element {
        match self.base {
            BaseField::Rationals => Element::Rational(BigRational::from_integer(BigInt::from(n))),
            BaseField::Prime(p) => Element::Modular(n.rem_euclid(p as i64) as u64),
        }
    }

    /// The rational number `num/den` mapped into K; `None` if `den` vanishes in K.
    pub fn from_ratio(&self, num: &BigInt, den: &BigInt) -> Option<Element> {
        let d = self.from_bigint(den);
        if d.is_zero() {
            return None;
        }
        Some(self.div(&self.from_bigint(num), &d))
    }

    pub(crate) fn zero_at(&self, lvl: usize) -> Element {
        if lvl == 0 {
            return match self.base {
                BaseField::Rationals => Element::Rational(BigRational::zero()),
                BaseField::Prime(_) => Element::Modular(0),
            };
        }
        match self.layers[lvl - 1].alpha {
            Some(_) => Element::Alg(Vec::new()),
            None => Element::Frac(Box::new(Frac {
                num: Vec::new(),
                den: vec![self.one_at(lvl - 1)],
            })),
        }
    }

    pub(crate) fn one_at(&self, lvl: usize) -> Element {
        if lvl == 0 {
            return match self.base {
                BaseField::Rationals => Element::Rational(BigRational::one()),
                BaseField::Prime(_) => Element::Modular(1),
            };
        }
        let c = self.one_at(lvl - 1);
        match self.layers[lvl - 1].alpha {
            Some(_) => Element::Alg(vec![c]),
            None => Element::Frac(Box::new(Frac {
                num: vec![c.clone()],
                den: vec![c],
            })),
        }
    }

    /// Embed an element of level `from` into level `to >= from`.
    pub(crate) fn lift(&self, mut a: Element, from: usize, to: usize) -> Element {
        for lvl in from + 1..=to {
            a = if a.is_zero() {
                self.zero_at(lvl)
            } else {
                match self.layers[lvl - 1].alpha {
                    Some(_) => Element::Alg(vec![a]),
                    None => Element::Frac(Box::new(Frac {
                        num: vec![a],
                        den: vec![self.one_at(lvl - 1)],
                    })),
                }
            };
        }
        a
    }

    /// Inverse of [`lift`](Self::lift): `Some` iff `a` does not involve the
    /// generators above level `to`.
    pub(crate) fn lower(&self, mut a: Element, from: usize, to: usize) -> Option<Element> {
        for lvl in (to + 1..=from).rev() {
            a = match a {
                Element::Frac(f) => {
                    if f.num.is_empty() {
                        self.zero_at(lvl - 1)
                    } else if f.num.len() == 1 && f.den.len() == 1 {
                        // den is monic of degree 0, hence 1
                        f.num.into_iter().next().unwrap()
                    } else {
                        return None;
                    }
                }
                Element::Alg(c) => match c.len() {
                    0 => self.zero_at(lvl - 1),
                    1 => c.into_iter().next().unwrap(),
                    _ => return None,
                },
                _ => return None,
            };
        }
        Some(a)
    }

    /// Embed an element of the base field.
    pub fn from_prime(&self, c: &Element) -> Element {
        self.lift(c.clone(), 0, self.depth())
    }

    /// `true` if `a` lies in the base field.
    pub fn is_in_base(&self, a: &Element) -> bool {
        self.lower(a.clone(), self.depth(), 0).is_some()
    }

    // ---- arithmetic (top level) -----------------------------------------

    pub fn add(&self, a: &Element, b: &Element) -> Element {
        self.add_at(self.depth(), a, b)
    }

    pub fn sub(&self, a: &Element, b: &Element) -> Element {
        self.sub_at(self.depth(), a, b)
    }

    pub fn neg(&self, a: &Element) -> Element {
        self.neg_at(self.depth(), a)
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        self.mul_at(self.depth(), a, b)
    }

    /// Multiplicative inverse.
    ///
    /// # Panics
    /// If `a` is zero.
    pub fn inv(&self, a: &Element) -> Element {
        self.inv_at(self.depth(), a)
    }

    pub fn checked_inv(&self, a: &Element) -> Option<Element> {
        if a.is_zero() {
            None
        } else {
            Some(self.inv(a))
        }
    }

    pub fn div(&self, a: &Element, b: &Element) -> Element {
        self.mul(a, &self.inv(b))
    }

    pub fn pow(&self, a: &Element, n: i64) -> Element {
        self.pow_at(self.depth(), a, n)
    }

    pub fn sum<'a>(&self, items: impl IntoIterator<Item = &'a Element>) -> Element {
        items
            .into_iter()
            .fold(self.zero(), |acc, x| self.add(&acc, x))
    }

    // ---- arithmetic (per level) -----------------------------------------

    fn prime(&self) -> u64 {
        match self.base {
            BaseField::Prime(p) => p,
            BaseField::Rationals => unreachable!("modular arithmetic over Q"),
        }
    }

    pub(crate) fn add_at(&self, lvl: usize, a: &Element, b: &Element) -> Element {
        if a.is_zero() {
            return b.clone();
        }
        if b.is_zero() {
            return a.clone();
        }
        match (a, b) {
            (Element::Rational(x), Element::Rational(y)) => Element::Rational(x + y),
            (Element::Modular(x), Element::Modular(y)) => Element::Modular((x + y) % self.prime()),
            (Element::Frac(x), Element::Frac(y)) => {
                let p = Polys::new(self, lvl - 1);
                if x.den == y.den {
                    return self.make_frac(lvl, p.add(&x.num, &y.num), x.den.clone());
                }
                // with g = gcd(d1, d2), any common factor of the sum's numerator
                // and denominator divides g
                let g = p.gcd(&x.den, &y.den);
                if g.len() == 1 {
                    let num = p.add(&p.mul(&x.num, &y.den), &p.mul(&y.num, &x.den));
                    if num.is_empty() {
                        return self.zero_at(lvl);
                    }
                    return Element::Frac(Box::new(Frac {
                        num,
                        den: p.mul(&x.den, &y.den),
                    }));
                }
                let d1 = p.exact_div(&x.den, &g);
                let d2 = p.exact_div(&y.den, &g);
                let mut num = p.add(&p.mul(&x.num, &d2), &p.mul(&y.num, &d1));
                if num.is_empty() {
                    return self.zero_at(lvl);
                }
                let mut den = p.mul(&x.den, &d2);
                let h = p.gcd(&num, &g);
                if h.len() > 1 {
                    num = p.exact_div(&num, &h);
                    den = p.exact_div(&den, &h);
                }
                Element::Frac(Box::new(Frac { num, den }))
            }
            (Element::Alg(x), Element::Alg(y)) => Element::Alg(Polys::new(self, lvl - 1).add(x, y)),
            _ => panic!("mismatched element levels"),
        }
    }

    pub(crate) fn neg_at(&self, lvl: usize, a: &Element) -> Element {
        match a {
            Element::Rational(x) => Element::Rational(-x),
            Element::Modular(x) => Element::Modular((self.prime() - x) % self.prime()),
            Element::Frac(x) => Element::Frac(Box::new(Frac {
                num: Polys::new(self, lvl - 1).neg(&x.num),
                den: x.den.clone(),
            })),
            Element::Alg(x) => Element::Alg(Polys::new(self, lvl - 1).neg(x)),
        }
    }

    pub(crate) fn sub_at(&self, lvl: usize, a: &Element, b: &Element) -> Element {
        self.add_at(lvl, a, &self.neg_at(lvl, b))
    }

    pub(crate) fn mul_at(&self, lvl: usize, a: &Element, b: &Element) -> Element {
        if a.is_zero() || b.is_zero() {
            return self.zero_at(lvl);
        }
        match (a, b) {
            (Element::Rational(x), Element::Rational(y)) => Element::Rational(x * y),
            (Element::Modular(x), Element::Modular(y)) => {
                Element::Modular(((*x as u128 * *y as u128) % self.prime() as u128) as u64)
            }
            (Element::Frac(x), Element::Frac(y)) => {
                let p = Polys::new(self, lvl - 1);
                // inputs are reduced, so cross cancellation yields a reduced product
                let g1 = p.gcd(&x.num, &y.den);
                let g2 = p.gcd(&y.num, &x.den);
                let n1 = p.exact_div(&x.num, &g1);
                let d2 = p.exact_div(&y.den, &g1);
                let n2 = p.exact_div(&y.num, &g2);
                let d1 = p.exact_div(&x.den, &g2);
                let num = p.mul(&n1, &n2);
                let den = p.mul(&d1, &d2);
                Element::Frac(Box::new(Frac { num, den }))
            }
            (Element::Alg(x), Element::Alg(y)) => {
                let p = Polys::new(self, lvl - 1);
                Element::Alg(self.reduce_alg(lvl, p.mul(x, y)))
            }
            _ => panic!("mismatched element levels"),
        }
    }

    /// Reduce a polynomial in `u` modulo `u^p - alpha`.
    fn reduce_alg(&self, lvl: usize, mut c: Vec<Element>) -> Vec<Element> {
        let p = self.prime() as usize;
        let alpha = self.layers[lvl - 1].alpha.as_ref().expect("inseparable layer");
        while c.len() > p {
            let top = c.pop().unwrap();
            let k = c.len();
            let shifted = self.mul_at(lvl - 1, &top, alpha);
            c[k - p] = self.add_at(lvl - 1, &c[k - p], &shifted);
        }
        Polys::trim(&mut c);
        c
    }

    pub(crate) fn inv_at(&self, lvl: usize, a: &Element) -> Element {
        assert!(!a.is_zero(), "inverse of zero");
        match a {
            Element::Rational(x) => Element::Rational(x.recip()),
            Element::Modular(x) => Element::Modular(mod_inverse(*x, self.prime())),
            Element::Frac(x) => self.make_frac(lvl, x.den.clone(), x.num.clone()),
            Element::Alg(x) => {
                let p = Polys::new(self, lvl - 1);
                let pp = self.prime() as usize;
                let alpha = self.layers[lvl - 1].alpha.as_ref().unwrap();
                let mut modulus = vec![self.zero_at(lvl - 1); pp + 1];
                modulus[0] = self.neg_at(lvl - 1, alpha);
                modulus[pp] = self.one_at(lvl - 1);
                let (g, s, _) = p.xgcd(x, &modulus);
                assert!(g.len() == 1, "u^p - alpha is reducible over the layer below");
                let ginv = self.inv_at(lvl - 1, &g[0]);
                Element::Alg(p.scale(&ginv, &s))
            }
        }
    }

    pub(crate) fn pow_at(&self, lvl: usize, a: &Element, n: i64) -> Element {
        let mut base = if n < 0 { self.inv_at(lvl, a) } else { a.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = self.one_at(lvl);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_at(lvl, &acc, &base);
            }
            e >>= 1;
            if e > 0 {
                base = self.mul_at(lvl, &base, &base);
            }
        }
        acc
    }

    /// Canonical fraction at level `lvl` from an arbitrary `num/den`.
    pub(crate) fn make_frac(&self, lvl: usize, mut num: Vec<Element>, mut den: Vec<Element>) -> Element {
        let p = Polys::new(self, lvl - 1);
        Polys::trim(&mut num);
        Polys::trim(&mut den);
        assert!(!den.is_empty(), "zero denominator");
        if num.is_empty() {
            return self.zero_at(lvl);
        }
        if den.len() > 1 {
            let g = p.gcd(&num, &den);
            if g.len() > 1 {
                num = p.exact_div(&num, &g);
                den = p.exact_div(&den, &g);
            }
        }
        let lc = den.last().unwrap().clone();
        if !self.is_one(&lc) {
            let inv = self.inv_at(lvl - 1, &lc);
            num = p.scale(&inv, &num);
            den = p.scale(&inv, &den);
        }
        Element::Frac(Box::new(Frac { num, den }))
    }

    pub fn is_one(&self, a: &Element) -> bool {
        match a {
            Element::Rational(x) => x.is_one(),
            Element::Modular(x) => *x == 1,
            Element::Frac(f) => {
                f.num.len() == 1 && f.den.len() == 1 && self.is_one(&f.num[0]) && self.is_one(&f.den[0])
            }
            Element::Alg(c) => c.len() == 1 && self.is_one(&c[0]),
        }
    }

    // ---- derivation -------------------------------------------------------

    /// `d(a)`, extended from the generator images by additivity, the Leibniz
    /// rule and the quotient rule.
    pub fn derive(&self, a: &Element) -> Element {
        self.derive_at(self.depth(), a)
    }

    /// `d^k(a)`.
    pub fn derive_n(&self, a: &Element, k: usize) -> Element {
        let mut x = a.clone();
        for _ in 0..k {
            if x.is_zero() {
                break;
            }
            x = self.derive(&x);
        }
        x
    }

    pub fn is_constant(&self, a: &Element) -> bool {
        self.derive(a).is_zero()
    }

    pub(crate) fn derive_at(&self, lvl: usize, a: &Element) -> Element {
        if lvl == 0 || a.is_zero() {
            return self.zero_at(lvl);
        }
        let layer = &self.layers[lvl - 1];
        match a {
            Element::Frac(f) => {
                let p = Polys::new(self, lvl - 1);
                // with d(x) = a/b, d(n) = (b n^d + a n') / b where n^d differentiates coefficients
                let (a, b) = match &layer.delta {
                    Element::Frac(df) => (df.num.clone(), df.den.clone()),
                    _ => unreachable!("rational layer"),
                };
                let scaled = |c: &[Element]| -> Vec<Element> {
                    let mut cd: Vec<Element> = c.iter().map(|x| self.derive_at(lvl - 1, x)).collect();
                    Polys::trim(&mut cd);
                    p.add(&p.mul(&b, &cd), &p.mul(&a, &p.formal_derivative(c)))
                };
                let dn = scaled(&f.num);
                if f.den.len() == 1 {
                    return self.make_frac(lvl, dn, b);
                }
                let dd = scaled(&f.den);
                let top = p.sub(&p.mul(&dn, &f.den), &p.mul(&f.num, &dd));
                self.make_frac(lvl, top, p.mul(&b, &p.mul(&f.den, &f.den)))
            }
            Element::Alg(c) => {
                let p = Polys::new(self, lvl - 1);
                let coeff_part: Vec<Element> = c.iter().map(|x| self.derive_at(lvl - 1, x)).collect();
                let mut out = Element::Alg({
                    let mut v = coeff_part;
                    Polys::trim(&mut v);
                    v
                });
                if !layer.delta.is_zero() {
                    let formal = p.formal_derivative(c);
                    let formal = Element::Alg(self.reduce_alg(lvl, formal));
                    out = self.add_at(lvl, &out, &self.mul_at(lvl, &formal, &layer.delta));
                }
                out
            }
            _ => panic!("mismatched element level"),
        }
    }

    /// A polynomial in the generator of a rational layer, as an element.
    pub(crate) fn poly_to_elem(&self, lvl: usize, mut c: Vec<Element>) -> Element {
        Polys::trim(&mut c);
        if c.is_empty() {
            return self.zero_at(lvl);
        }
        Element::Frac(Box::new(Frac {
            num: c,
            den: vec![self.one_at(lvl - 1)],
        }))
    }

    // ---- misc ---------------------------------------------------------------

    /// A rough size measure used for pivot selection.
    pub fn complexity(&self, a: &Element) -> usize {
        match a {
            Element::Rational(x) => {
                if x.is_zero() {
                    0
                } else {
                    (x.numer().bits() + x.denom().bits()) as usize
                }
            }
            Element::Modular(x) => usize::from(*x != 0),
            Element::Frac(f) => {
                f.num.iter().chain(f.den.iter()).map(|c| 1 + self.complexity(c)).sum()
            }
            Element::Alg(c) => c.iter().map(|x| 1 + self.complexity(x)).sum(),
        }
    }

    /// Random element of bounded height: base coefficients in `[-h, h]`
    /// (resp. all of F_p), small degrees, occasional denominators.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R, height: i64) -> Element {
        self.random_at(self.depth(), rng, height, 2)
    }

    /// Random element with polynomial degrees at most `degree` in each generator.
    pub fn random_element_deg<R: Rng + ?Sized>(&self, rng: &mut R, height: i64, degree: usize) -> Element {
        self.random_at(self.depth(), rng, height, degree)
    }

    fn random_at<R: Rng + ?Sized>(&self, lvl: usize, rng: &mut R, h: i64, degree: usize) -> Element {
        if lvl == 0 {
            return match self.base {
                BaseField::Rationals => {
                    Element::Rational(BigRational::from_integer(BigInt::from(rng.gen_range(-h..=h))))
                }
                BaseField::Prime(p) => Element::Modular(rng.gen_range(0..p)),
            };
        }
        let lower = |rng: &mut R| self.random_at(lvl - 1, rng, h, degree.min(1));
        match self.layers[lvl - 1].alpha {
            Some(_) => {
                let p = self.prime() as usize;
                let mut c: Vec<Element> = (0..p.min(degree + 1)).map(|_| lower(rng)).collect();
                Polys::trim(&mut c);
                Element::Alg(c)
            }
            None => {
                let d = rng.gen_range(0..=degree);
                let num: Vec<Element> = (0..=d).map(|_| lower(rng)).collect();
                let den = if rng.gen_bool(0.3) {
                    let mut den: Vec<Element> = vec![lower(rng), self.one_at(lvl - 1)];
                    if den[0].is_zero() && rng.gen_bool(0.5) {
                        den[0] = self.one_at(lvl - 1);
                    }
                    den
                } else {
                    vec![self.one_at(lvl - 1)]
                };
                self.make_frac(lvl, num, den)
            }
        }
    }

    /// Random nonzero element.
    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R, height: i64) -> Element {
        loop {
            let a = self.random_element(rng, height);
            if !a.is_zero() {
                return a;
            }
        }
    }

    /// Common denominator of a set of elements: an element `D` such that
    /// `D * a` has no denominator at any rational layer for each input `a`.
    pub fn common_denominator(&self, items: &[Element]) -> Element {
        self.common_den_at(self.depth(), items)
    }

    fn common_den_at(&self, lvl: usize, items: &[Element]) -> Element {
        if lvl == 0 {
            return match self.base {
                BaseField::Rationals => {
                    let l = items.iter().fold(BigInt::one(), |acc, x| match x {
                        Element::Rational(r) => acc.lcm(r.denom()),
                        _ => acc,
                    });
                    Element::Rational(BigRational::from_integer(l))
                }
                BaseField::Prime(_) => Element::Modular(1),
            };
        }
        let p = Polys::new(self, lvl - 1);
        match self.layers[lvl - 1].alpha {
            Some(_) => {
                let coeffs: Vec<Element> = items
                    .iter()
                    .flat_map(|x| match x {
                        Element::Alg(c) => c.clone(),
                        _ => Vec::new(),
                    })
                    .collect();
                let d = self.common_den_at(lvl - 1, &coeffs);
                self.lift(d, lvl - 1, lvl)
            }
            None => {
                let mut l = vec![self.one_at(lvl - 1)];
                for x in items {
                    if let Element::Frac(f) = x {
                        let g = p.gcd(&l, &f.den);
                        l = p.mul(&l, &p.exact_div(&f.den, &g));
                    }
                }
                // numerators over the common denominator, then clear lower denominators
                let mut coeffs = Vec::new();
                for x in items {
                    if let Element::Frac(f) = x {
                        coeffs.extend(p.mul(&f.num, &p.exact_div(&l, &f.den)));
                    }
                }
                let lower = self.common_den_at(lvl - 1, &coeffs);
                let l_elem = self.poly_to_elem(lvl, l);
                self.mul_at(lvl, &l_elem, &self.lift(lower, lvl - 1, lvl))
            }
        }
    }
}

impl Element {
    pub fn is_zero(&self) -> bool {
        match self {
            Element::Rational(x) => x.is_zero(),
            Element::Modular(x) => *x == 0,
            Element::Frac(f) => f.num.is_empty(),
            Element::Alg(c) => c.is_empty(),
        }
    }
}

pub(crate) fn mod_inverse(a: u64, p: u64) -> u64 {
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (p as i128, a as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    assert!(r == 1, "{a} is not invertible mod {p}");
    t.rem_euclid(p as i128) as u64
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}
