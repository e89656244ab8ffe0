//! The differential polynomial ring `R = K[t; d]` with `t a = a t + d(a)`.

use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Element, FieldTower};

/// Element of `K[t; d]`, coefficients lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrePoly {
    coeffs: Vec<Element>,
}

impl OrePoly {
    pub fn coeffs(&self) -> &[Element] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Element> {
        self.coeffs.last()
    }

    fn trimmed(mut coeffs: Vec<Element>) -> OrePoly {
        while coeffs.last().is_some_and(Element::is_zero) {
            coeffs.pop();
        }
        OrePoly { coeffs }
    }
}

/// Quotient and remainder of a division.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivMod {
    pub quotient: OrePoly,
    pub remainder: OrePoly,
}

/// `K[t; d]` over a shared tower.
#[derive(Clone, Debug)]
pub struct OreRing {
    tower: Arc<FieldTower>,
}

impl OreRing {
    pub fn new(tower: Arc<FieldTower>) -> Self {
        OreRing { tower }
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn tower_arc(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn zero(&self) -> OrePoly {
        OrePoly { coeffs: Vec::new() }
    }

    pub fn one(&self) -> OrePoly {
        self.constant(self.tower.one())
    }

    pub fn t(&self) -> OrePoly {
        self.monomial(self.tower.one(), 1)
    }

    pub fn constant(&self, a: Element) -> OrePoly {
        OrePoly::trimmed(vec![a])
    }

    /// `a t^n`.
    pub fn monomial(&self, a: Element, n: usize) -> OrePoly {
        if a.is_zero() {
            return self.zero();
        }
        let mut c = vec![self.tower.zero(); n];
        c.push(a);
        OrePoly { coeffs: c }
    }

    pub fn from_coeffs(&self, coeffs: Vec<Element>) -> OrePoly {
        OrePoly::trimmed(coeffs)
    }

    /// Coefficient of `t^i` (zero past the degree).
    pub fn coeff(&self, f: &OrePoly, i: usize) -> Element {
        f.coeffs.get(i).cloned().unwrap_or_else(|| self.tower.zero())
    }

    pub fn add(&self, f: &OrePoly, g: &OrePoly) -> OrePoly {
        let k = &self.tower;
        let n = f.coeffs.len().max(g.coeffs.len());
        let c = (0..n)
            .map(|i| match (f.coeffs.get(i), g.coeffs.get(i)) {
                (Some(a), Some(b)) => k.add(a, b),
                (Some(a), None) | (None, Some(a)) => a.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        OrePoly::trimmed(c)
    }

    pub fn neg(&self, f: &OrePoly) -> OrePoly {
        OrePoly {
            coeffs: f.coeffs.iter().map(|a| self.tower.neg(a)).collect(),
        }
    }

    pub fn sub(&self, f: &OrePoly, g: &OrePoly) -> OrePoly {
        self.add(f, &self.neg(g))
    }

    /// `a f` for `a` in K.
    pub fn scale_left(&self, a: &Element, f: &OrePoly) -> OrePoly {
        OrePoly::trimmed(f.coeffs.iter().map(|c| self.tower.mul(a, c)).collect())
    }

    /// `t f`, by the defining relation applied once per coefficient.
    pub fn t_times(&self, f: &OrePoly) -> OrePoly {
        let k = &self.tower;
        let mut c = vec![k.zero(); f.coeffs.len() + 1];
        for (i, a) in f.coeffs.iter().enumerate() {
            c[i + 1] = k.add(&c[i + 1], a);
            c[i] = k.add(&c[i], &k.derive(a));
        }
        OrePoly::trimmed(c)
    }

    /// Rows `C(n, 0..=n)` of Pascal's triangle in the base field, `n <= max`.
    fn binomials(&self, max: usize) -> Vec<Vec<Element>> {
        let k = &self.tower;
        let mut rows: Vec<Vec<Element>> = vec![vec![k.one()]];
        for n in 1..=max {
            let prev = &rows[n - 1];
            let mut row = Vec::with_capacity(n + 1);
            row.push(k.one());
            for j in 1..n {
                row.push(k.add(&prev[j - 1], &prev[j]));
            }
            row.push(k.one());
            rows.push(row);
        }
        rows
    }

    /// Product in `K[t; d]` via `t^n a = sum_k C(n,k) d^k(a) t^(n-k)`.
    pub fn mul(&self, f: &OrePoly, g: &OrePoly) -> OrePoly {
        if f.is_zero() || g.is_zero() {
            return self.zero();
        }
        let k = &self.tower;
        let n = f.coeffs.len() - 1;
        let binom = self.binomials(n);
        let mut out = vec![k.zero(); f.coeffs.len() + g.coeffs.len() - 1];
        for (j, b) in g.coeffs.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            // d^s(b) for s = 0..=n
            let mut ders = Vec::with_capacity(n + 1);
            ders.push(b.clone());
            for s in 1..=n {
                let prev: &Element = &ders[s - 1];
                let next = if prev.is_zero() { prev.clone() } else { k.derive(prev) };
                ders.push(next);
            }
            for (i, a) in f.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for s in 0..=i {
                    let d = &ders[s];
                    let c = &binom[i][s];
                    if d.is_zero() || c.is_zero() {
                        continue;
                    }
                    let term = k.mul(a, &k.mul(c, d));
                    let slot = i - s + j;
                    out[slot] = k.add(&out[slot], &term);
                }
            }
        }
        OrePoly::trimmed(out)
    }

    pub fn pow(&self, f: &OrePoly, n: usize) -> OrePoly {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, f);
        }
        acc
    }

    /// `(t - b)^n`.
    pub fn linear_power(&self, b: &Element, n: usize) -> OrePoly {
        let lin = self.from_coeffs(vec![self.tower.neg(b), self.tower.one()]);
        self.pow(&lin, n)
    }

    /// `g = q f + r` with `deg r < deg f`.
    pub fn right_divmod(&self, g: &OrePoly, f: &OrePoly) -> Result<DivMod> {
        let k = &self.tower;
        let m = f.degree().ok_or(Error::DivisionByZero)?;
        let lc_inv = k.inv(f.leading().unwrap());
        let mut r = g.clone();
        let top = match r.degree() {
            Some(d) if d >= m => d - m,
            _ => {
                return Ok(DivMod {
                    quotient: self.zero(),
                    remainder: r,
                })
            }
        };
        // table of t^s f
        let mut shifted = Vec::with_capacity(top + 1);
        shifted.push(f.clone());
        for s in 1..=top {
            let next = self.t_times(&shifted[s - 1]);
            shifted.push(next);
        }
        let mut q = vec![k.zero(); top + 1];
        while let Some(d) = r.degree() {
            if d < m {
                break;
            }
            let s = d - m;
            let a = k.mul(r.leading().unwrap(), &lc_inv);
            let sub = self.scale_left(&a, &shifted[s]);
            r = self.sub(&r, &sub);
            debug_assert!(r.degree().map_or(true, |e| e < d));
            q[s] = a;
        }
        Ok(DivMod {
            quotient: OrePoly::trimmed(q),
            remainder: r,
        })
    }

    /// `g = f q + r` with `deg r < deg f`.
    pub fn left_divmod(&self, g: &OrePoly, f: &OrePoly) -> Result<DivMod> {
        let k = &self.tower;
        let m = f.degree().ok_or(Error::DivisionByZero)?;
        let lc_inv = k.inv(f.leading().unwrap());
        let mut r = g.clone();
        let mut q = self.zero();
        while let Some(d) = r.degree() {
            if d < m {
                break;
            }
            let a = k.mul(r.leading().unwrap(), &lc_inv);
            let mono = self.monomial(a, d - m);
            r = self.sub(&r, &self.mul(f, &mono));
            q = self.add(&q, &mono);
        }
        Ok(DivMod {
            quotient: q,
            remainder: r,
        })
    }

    /// Remainder of right division by `f`.
    pub fn mod_r(&self, g: &OrePoly, f: &OrePoly) -> Result<OrePoly> {
        Ok(self.right_divmod(g, f)?.remainder)
    }

    pub fn monic(&self, f: &OrePoly) -> OrePoly {
        match f.leading() {
            None => f.clone(),
            Some(lc) if self.tower.is_one(lc) => f.clone(),
            Some(lc) => self.scale_left(&self.tower.inv(lc), f),
        }
    }

    /// Monic generator of `Rf + Rg`.
    pub fn right_gcd(&self, f: &OrePoly, g: &OrePoly) -> Result<OrePoly> {
        if f.is_zero() && g.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (mut a, mut b) = (f.clone(), g.clone());
        while !b.is_zero() {
            let r = self.mod_r(&a, &b)?;
            a = b;
            b = r;
        }
        Ok(self.monic(&a))
    }

    /// Random polynomial of exact degree `deg` (leading coefficient nonzero).
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R, deg: usize, height: i64) -> OrePoly {
        let k = &self.tower;
        let mut c: Vec<Element> = (0..deg).map(|_| k.random_element(rng, height)).collect();
        c.push(k.random_nonzero(rng, height));
        OrePoly { coeffs: c }
    }

    /// Random monic polynomial of degree `deg`.
    pub fn random_monic<R: Rng + ?Sized>(&self, rng: &mut R, deg: usize, height: i64) -> OrePoly {
        let k = &self.tower;
        let mut c: Vec<Element> = (0..deg).map(|_| k.random_element(rng, height)).collect();
        c.push(k.one());
        OrePoly { coeffs: c }
    }

    /// Canonical text, highest degree first, e.g. `t^2 - 2*x*t + (x^2-1)`.
    pub fn format(&self, f: &OrePoly) -> String {
        let k = &self.tower;
        let mut out = String::new();
        let nterms = f.coeffs.iter().filter(|c| !c.is_zero()).count();
        for (i, c) in f.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let cs = k.format(c);
            let (neg, mag) = match cs.strip_prefix('-') {
                Some(rest) if crate::field::is_atomic(&cs) => (true, rest.to_string()),
                _ => (false, cs),
            };
            let mono = match i {
                0 => String::new(),
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            let body = if i == 0 {
                if crate::field::is_atomic(&mag) || nterms == 1 {
                    mag
                } else {
                    format!("({mag})")
                }
            } else if mag == "1" {
                mono
            } else if crate::field::is_atomic(&mag) {
                format!("{mag}*{mono}")
            } else {
                format!("({mag})*{mono}")
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}
