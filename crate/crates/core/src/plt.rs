//! Pseudo-linear transformations `T(v) = A v + d(v)` on `K^n`, their
//! characteristic polynomials via cyclic vectors, resultants and a bounded
//! similarity search.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ansatz;
use crate::error::{Error, Result};
use crate::field::{Element, FieldTower};
use crate::linalg;
use crate::ore::{OrePoly, OreRing};
use crate::petit::make_petit;

#[derive(Clone, Debug)]
pub struct PseudoLinearTransform {
    tower: Arc<FieldTower>,
    /// Row-major `n x n` matrix over K.
    matrix: Vec<Vec<Element>>,
}

impl PartialEq for PseudoLinearTransform {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.tower, &other.tower) && self.matrix == other.matrix
    }
}

impl PseudoLinearTransform {
    pub fn new(tower: Arc<FieldTower>, matrix: Vec<Vec<Element>>) -> Self {
        assert!(matrix.iter().all(|r| r.len() == matrix.len()), "square matrix");
        PseudoLinearTransform { tower, matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn matrix(&self) -> &[Vec<Element>] {
        &self.matrix
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    /// `A v + d(v)`, `d` applied entrywise.
    pub fn apply(&self, v: &[Element]) -> Vec<Element> {
        let k = &self.tower;
        linalg::mat_vec(k, &self.matrix, v)
            .iter()
            .zip(v)
            .map(|(a, b)| k.add(a, &k.derive(b)))
            .collect()
    }
}

/// `T` on `R / R f` in the basis `1, t, ..., t^(n-1)`: left multiplication by `t`.
pub fn from_polynomial(ring: &OreRing, f: &OrePoly) -> Result<PseudoLinearTransform> {
    let k = ring.tower();
    let n = match f.degree() {
        Some(n) if n >= 1 && k.is_one(f.leading().unwrap()) => n,
        _ => return Err(Error::NotMonic),
    };
    let mut m = vec![vec![k.zero(); n]; n];
    for i in 0..n - 1 {
        m[i + 1][i] = k.one();
    }
    for (j, row) in m.iter_mut().enumerate() {
        row[n - 1] = k.neg(&ring.coeff(f, j));
    }
    Ok(PseudoLinearTransform::new(ring.tower_arc().clone(), m))
}

/// `e_n`: the zero matrix, so `T = d` entrywise.
pub fn zero_plt(tower: Arc<FieldTower>, n: usize) -> PseudoLinearTransform {
    let z = tower.zero();
    PseudoLinearTransform::new(tower, vec![vec![z; n]; n])
}

/// A cyclic vector and the characteristic polynomial of `T` at it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclicCertificate {
    pub vector: Vec<Element>,
    pub polynomial: OrePoly,
}

/// Characteristic polynomial of `T` at `v`, or `None` if `v` is not cyclic.
pub fn characteristic_polynomial_at(t: &PseudoLinearTransform, v: &[Element]) -> Option<CyclicCertificate> {
    let k = t.tower();
    let n = t.dim();
    let ring = OreRing::new(t.tower.clone());
    let mut iterates = vec![v.to_vec()];
    for _ in 0..n {
        let next = t.apply(iterates.last().unwrap());
        iterates.push(next);
    }
    let basis = &iterates[..n];
    if linalg::rank(k, basis, n) < n {
        return None;
    }
    // T^n v = sum c_j T^j v, h = t^n - sum c_j t^j
    let rows = linalg::transpose(k, basis, n);
    let c = linalg::solve(k, &rows, &iterates[n], n)?;
    let mut coeffs: Vec<Element> = c.iter().map(|x| k.neg(x)).collect();
    coeffs.push(k.one());
    Some(CyclicCertificate {
        vector: v.to_vec(),
        polynomial: ring.from_coeffs(coeffs),
    })
}

/// Candidate cyclic vectors: standard basis vectors, the vectors
/// `(1, x, ..., x^(n-1))` and its reverse for the first generator `x`, then
/// ten random vectors of height 5 drawn from `seed`.
fn candidates(t: &PseudoLinearTransform, seed: u64) -> Vec<Vec<Element>> {
    let k = t.tower();
    let n = t.dim();
    let mut out = Vec::new();
    for i in 0..n {
        let mut v = vec![k.zero(); n];
        v[i] = k.one();
        out.push(v);
    }
    if k.depth() > 0 {
        let x = k.generator(0);
        let powers: Vec<Element> = (0..n).map(|i| k.pow(&x, i as i64)).collect();
        out.push(powers.clone());
        out.push(powers.into_iter().rev().collect());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..10 {
        out.push((0..n).map(|_| k.random_element(&mut rng, 5)).collect());
    }
    out
}

/// First cyclic vector among the candidates and its characteristic polynomial.
pub fn characteristic_polynomial(t: &PseudoLinearTransform, seed: u64) -> Result<CyclicCertificate> {
    candidates(t, seed)
        .iter()
        .find_map(|v| characteristic_polynomial_at(t, v))
        .ok_or(Error::NoCyclicVectorFound)
}

/// `T x T'` on the Kronecker basis `v_i (x) w_j`, index `i n' + j`.
pub fn tensor(a: &PseudoLinearTransform, b: &PseudoLinearTransform) -> PseudoLinearTransform {
    let k = a.tower();
    let (n, n2) = (a.dim(), b.dim());
    let mut m = vec![vec![k.zero(); n * n2]; n * n2];
    for i in 0..n {
        for j in 0..n2 {
            let col = i * n2 + j;
            // (A (x) I) e_ij = sum_r A[r][i] e_rj
            for r in 0..n {
                let slot = &mut m[r * n2 + j][col];
                *slot = k.add(slot, &a.matrix[r][i]);
            }
            for s in 0..n2 {
                let slot = &mut m[i * n2 + s][col];
                *slot = k.add(slot, &b.matrix[s][j]);
            }
        }
    }
    PseudoLinearTransform::new(a.tower.clone(), m)
}

/// The resultant `f x g`: the characteristic polynomial of the tensor
/// product of the transforms of `f` and `g`. One representative of its
/// similarity class.
pub fn resultant(ring: &OreRing, f: &OrePoly, g: &OrePoly, seed: u64) -> Result<OrePoly> {
    let t = tensor(&from_polynomial(ring, f)?, &from_polynomial(ring, g)?);
    Ok(characteristic_polynomial(&t, seed)?.polynomial)
}

/// `u' f = g u` with `right_gcd(u, f) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimilarityWitness {
    pub u: OrePoly,
    pub u_prime: OrePoly,
}

/// Bounded search for a similarity witness between `f` and `g`.
///
/// `u` ranges over the solutions of `g u in R f` with `deg u < deg f`: exactly
/// when `[K:F]` is finite, and over Q with coefficients `num / D`, `deg num <=
/// bound`, `D` the product of the coefficient denominators of `f` and `g`.
pub fn similarity_search(ring: &OreRing, f: &OrePoly, g: &OrePoly, bound: usize) -> Result<Option<SimilarityWitness>> {
    let (df, dg) = match (f.degree(), g.degree()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::ZeroPolynomial),
    };
    if df != dg {
        return Err(Error::DegreeMismatch(df, dg));
    }
    let (f0, g0) = (f, g);
    let (f, g) = (ring.monic(f), ring.monic(g));
    if f == g {
        // g0 = (lc g0 / lc f0) f0
        let k = ring.tower();
        let s = k.div(g0.leading().unwrap(), f0.leading().unwrap());
        return Ok(Some(SimilarityWitness {
            u: ring.one(),
            u_prime: ring.constant(s),
        }));
    }
    if df == 0 {
        return Ok(None);
    }
    let solutions = intertwiners(ring, &f, &g, bound)?;
    let mut tries: Vec<OrePoly> = solutions.clone();
    if solutions.len() > 1 {
        tries.push(solutions.iter().fold(ring.zero(), |acc, u| ring.add(&acc, u)));
    }
    for u in tries {
        if u.is_zero() || ring.right_gcd(&u, &f)? != ring.one() {
            continue;
        }
        let d = ring.right_divmod(&ring.mul(g0, &u), f0)?;
        if !d.remainder.is_zero() {
            return Err(Error::InternalInconsistency("similarity witness failed g u in R f".into()));
        }
        return Ok(Some(SimilarityWitness { u, u_prime: d.quotient }));
    }
    Ok(None)
}

/// Basis of `{u : deg u < deg f, g u in R f}` (within the ansatz over Q).
fn intertwiners(ring: &OreRing, f: &OrePoly, g: &OrePoly, bound: usize) -> Result<Vec<OrePoly>> {
    let k = ring.tower();
    let n = f.degree().unwrap();
    let image = |u: &OrePoly| -> Result<Vec<Element>> {
        let r = ring.mod_r(&ring.mul(g, u), f)?;
        Ok((0..n).map(|i| ring.coeff(&r, i)).collect())
    };
    if let Some(fk) = k.constant_field() {
        let a = make_petit(ring, f)?;
        let basis = a.fbasis()?;
        let columns = basis
            .iter()
            .map(|e| {
                let img = ring.mod_r(&ring.mul(g, e.poly()), f)?;
                a.coordinates(&a.element(&img)?)
            })
            .collect::<Result<Vec<_>>>()?;
        let rows = linalg::transpose(fk, &columns, basis.len());
        return linalg::nullspace(fk, &rows, basis.len())
            .iter()
            .map(|v| Ok(a.from_coordinates(v)?.into_poly()))
            .collect();
    }
    let den = f
        .coeffs()
        .iter()
        .chain(g.coeffs())
        .filter(|c| !c.is_zero())
        .fold(k.one(), |acc, c| k.mul(&acc, &k.common_denominator(std::slice::from_ref(c))));
    let dinv = k.inv(&den);
    let mut unknowns = Vec::new();
    for j in 0..n {
        for mo in ansatz::monomials(k, bound) {
            unknowns.push(ring.monomial(k.mul(&mo, &dinv), j));
        }
    }
    let images = unknowns.iter().map(image).collect::<Result<Vec<_>>>()?;
    Ok(ansatz::prime_kernel(k, &images)
        .iter()
        .map(|c| {
            c.iter().zip(&unknowns).fold(ring.zero(), |acc, (ci, u)| {
                if ci.is_zero() {
                    acc
                } else {
                    ring.add(&acc, &ring.scale_left(&k.from_prime(ci), u))
                }
            })
        })
        .collect())
}

#[cfg(test)]
mod tests;
