//! Dense univariate polynomials over one level of a tower, lowest degree first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use super::{BaseField, Element, FieldTower};

pub(crate) struct Polys<'a> {
    k: &'a FieldTower,
    lvl: usize,
}

impl<'a> Polys<'a> {
    pub(crate) fn new(k: &'a FieldTower, lvl: usize) -> Self {
        Polys { k, lvl }
    }

    pub(crate) fn trim(v: &mut Vec<Element>) {
        while v.last().is_some_and(Element::is_zero) {
            v.pop();
        }
    }

    pub(crate) fn add(&self, a: &[Element], b: &[Element]) -> Vec<Element> {
        let n = a.len().max(b.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(match (a.get(i), b.get(i)) {
                (Some(x), Some(y)) => self.k.add_at(self.lvl, x, y),
                (Some(x), None) | (None, Some(x)) => x.clone(),
                (None, None) => unreachable!(),
            });
        }
        Self::trim(&mut out);
        out
    }

    pub(crate) fn neg(&self, a: &[Element]) -> Vec<Element> {
        a.iter().map(|x| self.k.neg_at(self.lvl, x)).collect()
    }

    pub(crate) fn sub(&self, a: &[Element], b: &[Element]) -> Vec<Element> {
        self.add(a, &self.neg(b))
    }

    pub(crate) fn scale(&self, c: &Element, a: &[Element]) -> Vec<Element> {
        if c.is_zero() {
            return Vec::new();
        }
        let mut out: Vec<Element> = a.iter().map(|x| self.k.mul_at(self.lvl, c, x)).collect();
        Self::trim(&mut out);
        out
    }

    pub(crate) fn mul(&self, a: &[Element], b: &[Element]) -> Vec<Element> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.k.zero_at(self.lvl); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let prod = self.k.mul_at(self.lvl, x, y);
                out[i + j] = self.k.add_at(self.lvl, &out[i + j], &prod);
            }
        }
        Self::trim(&mut out);
        out
    }

    pub(crate) fn pow(&self, a: &[Element], n: usize) -> Vec<Element> {
        let mut acc = vec![self.k.one_at(self.lvl)];
        for _ in 0..n {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Euclidean division `a = q b + r`, `deg r < deg b`.
    pub(crate) fn divrem(&self, a: &[Element], b: &[Element]) -> (Vec<Element>, Vec<Element>) {
        assert!(!b.is_empty(), "polynomial division by zero");
        let mut r = a.to_vec();
        Self::trim(&mut r);
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let lc = b.last().unwrap();
        let lc_inv = if self.k.is_one(lc) {
            None
        } else {
            Some(self.k.inv_at(self.lvl, lc))
        };
        let mut q = vec![self.k.zero_at(self.lvl); r.len() - b.len() + 1];
        while r.len() >= b.len() {
            let shift = r.len() - b.len();
            let top = r.last().unwrap();
            let c = match &lc_inv {
                Some(inv) => self.k.mul_at(self.lvl, top, inv),
                None => top.clone(),
            };
            for (i, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let prod = self.k.mul_at(self.lvl, &c, y);
                r[shift + i] = self.k.sub_at(self.lvl, &r[shift + i], &prod);
            }
            q[shift] = c;
            // the leading term cancels exactly
            r.pop();
            Self::trim(&mut r);
        }
        Self::trim(&mut q);
        (q, r)
    }

    pub(crate) fn exact_div(&self, a: &[Element], b: &[Element]) -> Vec<Element> {
        if b.len() == 1 && self.k.is_one(&b[0]) {
            return a.to_vec();
        }
        let (q, r) = self.divrem(a, b);
        debug_assert!(r.is_empty(), "inexact polynomial division");
        q
    }

    pub(crate) fn monic(&self, a: &[Element]) -> Vec<Element> {
        match a.last() {
            None => Vec::new(),
            Some(lc) if self.k.is_one(lc) => a.to_vec(),
            Some(lc) => self.scale(&self.k.inv_at(self.lvl, lc), a),
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub(crate) fn gcd(&self, a: &[Element], b: &[Element]) -> Vec<Element> {
        if a.len() == 1 || b.len() == 1 {
            // a nonzero constant is a unit
            if !a.is_empty() && !b.is_empty() {
                return vec![self.k.one_at(self.lvl)];
            }
        }
        if !a.is_empty() && !b.is_empty() && self.certainly_coprime(a, b) {
            return vec![self.k.one_at(self.lvl)];
        }
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        Self::trim(&mut x);
        Self::trim(&mut y);
        while !y.is_empty() {
            let (_, r) = self.divrem(&x, &y);
            x = y;
            y = self.monic(&r);
        }
        self.monic(&x)
    }

    /// Extended gcd: `s a + t b = g` with `g` monic.
    pub(crate) fn xgcd(
        &self,
        a: &[Element],
        b: &[Element],
    ) -> (Vec<Element>, Vec<Element>, Vec<Element>) {
        let one = vec![self.k.one_at(self.lvl)];
        let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
        let (mut s0, mut s1) = (one.clone(), Vec::new());
        let (mut t0, mut t1) = (Vec::new(), one);
        while !r1.is_empty() {
            let (q, r) = self.divrem(&r0, &r1);
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let t2 = self.sub(&t0, &self.mul(&q, &t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        match r0.last() {
            Some(lc) if !self.k.is_one(lc) => {
                let inv = self.k.inv_at(self.lvl, lc);
                (self.scale(&inv, &r0), self.scale(&inv, &s0), self.scale(&inv, &t0))
            }
            _ => (r0, s0, t0),
        }
    }

    /// Formal derivative `sum k c_k X^{k-1}`.
    pub(crate) fn formal_derivative(&self, a: &[Element]) -> Vec<Element> {
        let mut out: Vec<Element> = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| {
                let kk = self.k.lift(self.k.prime_field_int(k as i64), 0, self.lvl);
                self.k.mul_at(self.lvl, &kk, c)
            })
            .collect();
        Self::trim(&mut out);
        out
    }

    /// Cheap sufficient test for `gcd(a, b) = 1`.
    ///
    /// Coefficients are mapped to F_q by reducing mod a prime and evaluating
    /// the lower generators at fixed points. When both leading coefficients
    /// survive, the images have the resultant's image as their resultant, so
    /// coprime images certify coprime inputs.
    fn certainly_coprime(&self, a: &[Element], b: &[Element]) -> bool {
        const PRIMES: [u64; 2] = [2_147_483_647, 2_147_483_629];
        let attempts: Vec<(u64, u64)> = match self.k.base {
            BaseField::Rationals => PRIMES.iter().map(|&q| (q, q)).collect(),
            BaseField::Prime(p) => vec![(p, 1), (p, 2)],
        };
        for (q, salt) in attempts {
            let pts: Vec<u64> = (0..self.lvl as u64)
                .map(|i| (salt.wrapping_mul(0x9e37_79b9).wrapping_add(i * 7919 + 12345)) % q)
                .collect();
            let (Some(ia), Some(ib)) = (self.image_poly(a, q, &pts), self.image_poly(b, q, &pts)) else {
                continue;
            };
            if ia.len() != a.len() || ib.len() != b.len() {
                continue;
            }
            return modp_gcd_is_one(ia, ib, q);
        }
        false
    }

    fn image_poly(&self, c: &[Element], q: u64, pts: &[u64]) -> Option<Vec<u64>> {
        let mut out: Vec<u64> = c
            .iter()
            .map(|x| image(self.k, self.lvl, x, q, pts))
            .collect::<Option<_>>()?;
        while out.last() == Some(&0) {
            out.pop();
        }
        Some(out)
    }
}

/// Image of a level-`lvl` element in F_q, `None` if a denominator vanishes
/// or a purely inseparable layer is involved.
fn image(k: &FieldTower, lvl: usize, a: &Element, q: u64, pts: &[u64]) -> Option<u64> {
    match a {
        Element::Modular(x) => Some(*x % q),
        Element::Rational(r) => {
            let qq = BigInt::from(q);
            let n = r.numer().mod_floor(&qq).to_u64()?;
            let d = r.denom().mod_floor(&qq).to_u64()?;
            if d == 0 {
                return None;
            }
            Some(mulmod(n, super::mod_inverse(d, q), q))
        }
        Element::Frac(f) => {
            let x = pts[lvl - 1];
            let horner = |c: &[Element]| -> Option<u64> {
                let mut acc = 0u64;
                for e in c.iter().rev() {
                    acc = (mulmod(acc, x, q) + image(k, lvl - 1, e, q, pts)?) % q;
                }
                Some(acc)
            };
            let n = horner(&f.num)?;
            let d = horner(&f.den)?;
            if d == 0 {
                return None;
            }
            Some(mulmod(n, super::mod_inverse(d, q), q))
        }
        Element::Alg(_) => None,
    }
}

fn mulmod(a: u64, b: u64, q: u64) -> u64 {
    ((a as u128 * b as u128) % q as u128) as u64
}

fn modp_gcd_is_one(mut a: Vec<u64>, mut b: Vec<u64>, q: u64) -> bool {
    while !b.is_empty() {
        // a mod b
        let inv = super::mod_inverse(*b.last().unwrap(), q);
        while a.len() >= b.len() {
            let c = mulmod(*a.last().unwrap(), inv, q);
            let shift = a.len() - b.len();
            for (i, &y) in b.iter().enumerate() {
                a[shift + i] = (a[shift + i] + q - mulmod(c, y, q)) % q;
            }
            a.pop();
            while a.last() == Some(&0) {
                a.pop();
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len() == 1
}
