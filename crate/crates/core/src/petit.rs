//! The algebra `S_f`: polynomials of degree `< m` with `g o h = g h mod_r f`.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::charp;
use crate::error::{Error, Result};
use crate::field::{Element, FieldTower};
use crate::linalg;
use crate::ore::{OrePoly, OreRing};

/// An element of some `S_f`; always of degree `< m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SfElement {
    poly: OrePoly,
}

impl SfElement {
    pub fn poly(&self) -> &OrePoly {
        &self.poly
    }

    pub fn into_poly(self) -> OrePoly {
        self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
}

#[derive(Clone, Debug)]
pub struct PetitAlgebra {
    ring: OreRing,
    f: OrePoly,
    m: usize,
    two_sided: bool,
    t_associative: bool,
}

impl PartialEq for PetitAlgebra {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(self.ring.tower_arc(), other.ring.tower_arc()) && self.f == other.f
    }
}

impl Eq for PetitAlgebra {}

/// Build `S_f`; the modulus is made monic.
pub fn make_petit(ring: &OreRing, f: &OrePoly) -> Result<PetitAlgebra> {
    let m = f.degree().ok_or(Error::ZeroModulus)?;
    if m == 0 {
        return Err(Error::UnsatisfiedHypothesis(
            "the modulus must have degree at least 1".into(),
        ));
    }
    let f = ring.monic(f);
    let two_sided = is_two_sided(ring, &f)?;
    let t_associative = ring.mod_r(&ring.mul(&f, &ring.t()), &f)?.is_zero();
    Ok(PetitAlgebra {
        ring: ring.clone(),
        f,
        m,
        two_sided,
        t_associative,
    })
}

/// `f t` and `f a` lie in `R f` for every generator `a` of K.
pub fn is_two_sided(ring: &OreRing, f: &OrePoly) -> Result<bool> {
    let f = ring.monic(f);
    if f.is_zero() {
        return Err(Error::ZeroModulus);
    }
    if !ring.mod_r(&ring.mul(&f, &ring.t()), &f)?.is_zero() {
        return Ok(false);
    }
    for a in ring.tower().generators() {
        let fa = ring.mul(&f, &ring.constant(a));
        if !ring.mod_r(&fa, &f)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

impl PetitAlgebra {
    pub fn ring(&self) -> &OreRing {
        &self.ring
    }

    pub fn tower(&self) -> &FieldTower {
        self.ring.tower()
    }

    pub fn modulus(&self) -> &OrePoly {
        &self.f
    }

    pub fn degree(&self) -> usize {
        self.m
    }

    pub fn two_sided(&self) -> bool {
        self.two_sided
    }

    /// `m = 1`, in which case `S_f` is K itself.
    pub fn is_degree_one(&self) -> bool {
        self.m == 1
    }

    /// `dim_F S_f = m [K:F]` when finite.
    pub fn dimension_over_constants(&self) -> Option<usize> {
        self.tower().degree_over_constants().map(|n| n * self.m)
    }

    pub fn element(&self, g: &OrePoly) -> Result<SfElement> {
        match g.degree() {
            Some(d) if d >= self.m => Err(Error::AlgebraMismatch),
            _ => Ok(SfElement { poly: g.clone() }),
        }
    }

    /// `g mod_r f` as an element.
    pub fn reduce(&self, g: &OrePoly) -> SfElement {
        SfElement {
            poly: self.ring.mod_r(g, &self.f).expect("nonzero modulus"),
        }
    }

    pub fn one(&self) -> SfElement {
        SfElement { poly: self.ring.one() }
    }

    pub fn zero(&self) -> SfElement {
        SfElement { poly: self.ring.zero() }
    }

    /// The class of `t`; only an element when `m >= 2`.
    pub fn t(&self) -> Result<SfElement> {
        self.element(&self.ring.t())
    }

    pub fn constant(&self, a: Element) -> SfElement {
        SfElement {
            poly: self.ring.constant(a),
        }
    }

    fn check(&self, g: &SfElement) -> Result<()> {
        match g.poly.degree() {
            Some(d) if d >= self.m => Err(Error::AlgebraMismatch),
            _ => Ok(()),
        }
    }

    pub fn add(&self, g: &SfElement, h: &SfElement) -> SfElement {
        SfElement {
            poly: self.ring.add(&g.poly, &h.poly),
        }
    }

    pub fn sub(&self, g: &SfElement, h: &SfElement) -> SfElement {
        SfElement {
            poly: self.ring.sub(&g.poly, &h.poly),
        }
    }

    pub fn scale(&self, a: &Element, g: &SfElement) -> SfElement {
        SfElement {
            poly: self.ring.scale_left(a, &g.poly),
        }
    }

    /// The product `g h mod_r f`.
    pub fn circ(&self, g: &SfElement, h: &SfElement) -> Result<SfElement> {
        self.check(g)?;
        self.check(h)?;
        Ok(self.reduce(&self.ring.mul(&g.poly, &h.poly)))
    }

    /// `(a o b) o c - a o (b o c)`.
    pub fn associator(&self, a: &SfElement, b: &SfElement, c: &SfElement) -> Result<SfElement> {
        let left = self.circ(&self.circ(a, b)?, c)?;
        let right = self.circ(a, &self.circ(b, c)?)?;
        Ok(self.sub(&left, &right))
    }

    /// `t^m o t = t o t^m`, decided through `f t` lying in `R f`.
    pub fn t_powers_associative(&self) -> bool {
        self.t_associative
    }

    /// The literal comparison `s o t = t o s` with `s = t o t^(m-1)`; `None` when `m = 1`.
    pub fn t_powers_associative_literal(&self) -> Option<bool> {
        if self.m < 2 {
            return None;
        }
        let t = self.t().ok()?;
        let tm1 = self.element(&self.ring.monomial(self.tower().one(), self.m - 1)).ok()?;
        let s = self.circ(&t, &tm1).ok()?;
        Some(self.circ(&s, &t).ok()? == self.circ(&t, &s).ok()?)
    }

    pub fn random_element<R: rand::Rng + ?Sized>(&self, rng: &mut R, height: i64) -> SfElement {
        let k = self.tower();
        let c: Vec<Element> = (0..self.m).map(|_| k.random_element(rng, height)).collect();
        SfElement {
            poly: self.ring.from_coeffs(c),
        }
    }

    pub fn format(&self, g: &SfElement) -> String {
        self.ring.format(&g.poly)
    }

    // ---- F-linear structure (finite [K:F]) -------------------------------

    /// F-basis `{b_i t^j}` of `S_f`, index `j [K:F] + i`.
    pub fn fbasis(&self) -> Result<Vec<SfElement>> {
        let kb = self.tower().fbasis()?;
        let mut out = Vec::with_capacity(kb.len() * self.m);
        for j in 0..self.m {
            for b in &kb.elements {
                out.push(SfElement {
                    poly: self.ring.monomial(b.clone(), j),
                });
            }
        }
        Ok(out)
    }

    /// Coordinates over F in the basis of [`fbasis`](Self::fbasis).
    pub fn coordinates(&self, g: &SfElement) -> Result<Vec<Element>> {
        let k = self.tower();
        let mut out = Vec::new();
        for j in 0..self.m {
            out.extend(k.coordinates(&self.ring.coeff(&g.poly, j))?);
        }
        Ok(out)
    }

    pub fn from_coordinates(&self, c: &[Element]) -> Result<SfElement> {
        let k = self.tower();
        let n = k.degree_over_constants().ok_or(Error::InfiniteDimension)?;
        let coeffs = c
            .chunks(n)
            .map(|block| k.from_coordinates(block))
            .collect::<Result<Vec<_>>>()?;
        Ok(SfElement {
            poly: self.ring.from_coeffs(coeffs),
        })
    }

    /// Search for `g, h != 0` with `g o h = 0`.
    ///
    /// Candidates `h` are the linear right factors `t - r` found by the
    /// bounded root search, followed by `trials` random elements. For each
    /// `h` the left kernel of right multiplication is computed over K.
    pub fn zero_divisor_search(&self, trials: usize, seed: u64, root_bound: usize) -> Result<Option<(SfElement, SfElement)>> {
        if self.m < 2 {
            // S_f is the field K
            return Ok(None);
        }
        let mut candidates: Vec<SfElement> = Vec::new();
        let roots = charp::right_root_search(&self.ring, &self.f, root_bound)?;
        for r in roots.roots {
            let lin = self.ring.from_coeffs(vec![self.tower().neg(&r), self.tower().one()]);
            candidates.push(self.element(&lin)?);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..trials {
            let h = self.random_element(&mut rng, 3);
            if !h.is_zero() {
                candidates.push(h);
            }
        }
        for h in candidates {
            if let Some(g) = self.left_annihilator(&h)? {
                return Ok(Some((g, h)));
            }
        }
        Ok(None)
    }

    /// A nonzero `g` with `g o h = 0`, if one exists.
    pub fn left_annihilator(&self, h: &SfElement) -> Result<Option<SfElement>> {
        let k = self.tower();
        // g o h = sum g_i mod_r(t^i h, f), left K-linear in g
        let mut tih = h.poly.clone();
        let mut columns = Vec::with_capacity(self.m);
        for _ in 0..self.m {
            let r = self.ring.mod_r(&tih, &self.f)?;
            columns.push((0..self.m).map(|j| self.ring.coeff(&r, j)).collect::<Vec<_>>());
            tih = self.ring.t_times(&tih);
        }
        let rows = linalg::transpose(k, &columns, self.m);
        let Some(v) = linalg::nullspace(k, &rows, self.m).into_iter().next() else {
            return Ok(None);
        };
        let g = SfElement {
            poly: self.ring.from_coeffs(v),
        };
        if !self.circ(&g, h)?.is_zero() {
            return Err(Error::InternalInconsistency("zero divisor failed re-multiplication".into()));
        }
        Ok(Some(g))
    }
}

#[cfg(test)]
mod tests;
