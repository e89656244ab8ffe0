//! Nuclei and center of `S_f`, structure constants of closed subspaces and
//! the eigenring test for A-polynomials.
//!
//! With `[K:F]` finite every nucleus is the solution space of an exact
//! linear system over F. Over Q the right nucleus (the eigenring) is solved
//! inside a bounded ansatz and the left and middle nuclei are reported as K.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ansatz;
use crate::error::{Error, Result};
use crate::field::{Element, FieldTower};
use crate::linalg::{self, EchelonBasis};
use crate::ore::OrePoly;
use crate::petit::{PetitAlgebra, SfElement};

/// How a subspace was obtained.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubspaceStatus {
    /// Exact solution space of a finite linear system.
    Exact,
    /// Solution space inside an ansatz; the true space may be larger.
    LowerBound { bound: usize },
    /// Solution space inside an ansatz that reached the maximum `m^2`.
    CertifiedMaximal { bound: usize },
    /// The subfield K itself (infinite over F), checked on random samples.
    StructuralK { samples: usize },
}

/// An F-subspace of `S_f` given by an F-independent basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FSubspace {
    pub basis: Vec<SfElement>,
    pub status: SubspaceStatus,
}

impl FSubspace {
    /// Dimension over F; `None` for `StructuralK`.
    pub fn dim_over_constants(&self) -> Option<usize> {
        match self.status {
            SubspaceStatus::StructuralK { .. } => None,
            _ => Some(self.basis.len()),
        }
    }

    /// Number of basis elements (for `StructuralK`, the single element 1).
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Ansatz for the right nucleus over Q: coefficients `num / denominator`
/// with `deg num <= bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnsatzConfig {
    pub bound: usize,
    pub denominator: Element,
}

impl AnsatzConfig {
    /// Product of the coefficient denominators of `f`, raised to `m`, and `N = 2m`.
    pub fn default_for(a: &PetitAlgebra) -> AnsatzConfig {
        let k = a.tower();
        let prod = a
            .modulus()
            .coeffs()
            .iter()
            .filter(|c| !c.is_zero())
            .fold(k.one(), |acc, c| k.mul(&acc, &k.common_denominator(std::slice::from_ref(c))));
        AnsatzConfig {
            bound: 2 * a.degree(),
            denominator: k.pow(&prod, a.degree() as i64),
        }
    }
}

fn fdim(a: &PetitAlgebra) -> Option<usize> {
    a.dimension_over_constants()
}

fn constants(a: &PetitAlgebra) -> Result<&FieldTower> {
    a.tower().constant_field().ok_or(Error::InfiniteDimension)
}

fn elements_from(a: &PetitAlgebra, vectors: &[Vec<Element>]) -> Result<Vec<SfElement>> {
    vectors.iter().map(|v| a.from_coordinates(v)).collect()
}

/// `g` with `f g` in `R f`.
fn in_right_nucleus(a: &PetitAlgebra, g: &OrePoly) -> Result<bool> {
    let r = a.ring();
    Ok(r.mod_r(&r.mul(a.modulus(), g), a.modulus())?.is_zero())
}

/// `Nuc_r(S_f)`: the eigenring for `m >= 2`, all of `S_f = K` for `m = 1`.
pub fn right_nucleus(a: &PetitAlgebra, cfg: Option<&AnsatzConfig>) -> Result<FSubspace> {
    if a.is_degree_one() {
        return match fdim(a) {
            Some(_) => whole_algebra(a),
            None => structural_k(a, 2),
        };
    }
    eigenring(a, cfg)
}

/// The eigenring `{g : deg g < m, f g in R f}`.
pub fn eigenring(a: &PetitAlgebra, cfg: Option<&AnsatzConfig>) -> Result<FSubspace> {
    match fdim(a) {
        Some(_) => exact_right_nucleus(a),
        None => {
            let cfg = cfg.ok_or(Error::AnsatzRequired)?;
            ansatz_right_nucleus(a, cfg)
        }
    }
}

fn exact_right_nucleus(a: &PetitAlgebra) -> Result<FSubspace> {
    let f = constants(a)?;
    let basis = a.fbasis()?;
    let n = basis.len();
    let r = a.ring();
    let columns = basis
        .iter()
        .map(|e| {
            let img = r.mod_r(&r.mul(a.modulus(), e.poly()), a.modulus())?;
            a.coordinates(&a.element(&img)?)
        })
        .collect::<Result<Vec<_>>>()?;
    let rows = linalg::transpose(f, &columns, n);
    let sol = elements_from(a, &linalg::nullspace(f, &rows, n))?;
    for g in &sol {
        if !in_right_nucleus(a, g.poly())? {
            return Err(Error::InternalInconsistency("right nucleus element fails f g in R f".into()));
        }
    }
    let s = FSubspace {
        basis: sol,
        status: SubspaceStatus::Exact,
    };
    check_closed(a, &s)?;
    Ok(s)
}

fn ansatz_right_nucleus(a: &PetitAlgebra, cfg: &AnsatzConfig) -> Result<FSubspace> {
    let k = a.tower();
    if cfg.denominator.is_zero() {
        return Err(Error::InconsistentAnsatz);
    }
    let r = a.ring();
    let m = a.degree();
    let dinv = k.inv(&cfg.denominator);
    let monos = ansatz::monomials(k, cfg.bound);
    let mut unknowns: Vec<OrePoly> = Vec::new();
    for j in 0..m {
        for mo in &monos {
            unknowns.push(r.monomial(k.mul(mo, &dinv), j));
        }
    }
    let images = unknowns
        .iter()
        .map(|u| {
            let img = r.mod_r(&r.mul(a.modulus(), u), a.modulus())?;
            Ok((0..m).map(|i| r.coeff(&img, i)).collect())
        })
        .collect::<Result<Vec<Vec<Element>>>>()?;
    let kernel = ansatz::prime_kernel(k, &images);
    let mut basis = Vec::with_capacity(kernel.len());
    for c in &kernel {
        let mut g = r.zero();
        for (ci, u) in c.iter().zip(&unknowns) {
            if !ci.is_zero() {
                g = r.add(&g, &r.scale_left(&k.from_prime(ci), u));
            }
        }
        if !in_right_nucleus(a, &g)? {
            return Err(Error::InternalInconsistency("right nucleus element fails f g in R f".into()));
        }
        basis.push(a.element(&g)?);
    }
    let status = if basis.len() == m * m {
        SubspaceStatus::CertifiedMaximal { bound: cfg.bound }
    } else {
        SubspaceStatus::LowerBound { bound: cfg.bound }
    };
    // closure: products of eigenring elements stay in the eigenring
    for x in &basis {
        for y in &basis {
            if !in_right_nucleus(a, a.circ(x, y)?.poly())? {
                return Err(Error::InternalInconsistency("right nucleus not closed".into()));
            }
        }
    }
    Ok(FSubspace { basis, status })
}

fn structural_k(a: &PetitAlgebra, slot: usize) -> Result<FSubspace> {
    const SAMPLES: usize = 100;
    let k = a.tower();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for _ in 0..SAMPLES {
        let x = a.constant(k.random_element(&mut rng, 3));
        let u = a.random_element(&mut rng, 2);
        let v = a.random_element(&mut rng, 2);
        let assoc = match slot {
            0 => a.associator(&x, &u, &v)?,
            1 => a.associator(&u, &x, &v)?,
            _ => a.associator(&u, &v, &x)?,
        };
        if !assoc.is_zero() {
            return Err(Error::InternalInconsistency("K is not contained in the nucleus".into()));
        }
    }
    Ok(FSubspace {
        basis: vec![a.one()],
        status: SubspaceStatus::StructuralK { samples: SAMPLES },
    })
}

fn whole_algebra(a: &PetitAlgebra) -> Result<FSubspace> {
    Ok(FSubspace {
        basis: a.fbasis()?,
        status: SubspaceStatus::Exact,
    })
}

/// The copy of K must come back whenever `f` is not two-sided.
fn check_is_k(a: &PetitAlgebra, s: &FSubspace, what: &str) -> Result<()> {
    if a.two_sided() || a.degree() == 1 {
        return Ok(());
    }
    let n = a.tower().degree_over_constants().unwrap_or(0);
    if s.basis.len() != n || s.basis.iter().any(|g| g.poly().degree().unwrap_or(0) > 0) {
        return Err(Error::InternalInconsistency(format!("{what} nucleus differs from K")));
    }
    Ok(())
}

/// `Nuc_l(S_f)`: all `x` with `[x, a, b] = 0`.
pub fn left_nucleus(a: &PetitAlgebra) -> Result<FSubspace> {
    if fdim(a).is_none() {
        return structural_k(a, 0);
    }
    if a.two_sided() {
        return whole_algebra(a);
    }
    // [x, a, b] is left K-linear in x: solve over K in the coordinates x_j of x = sum x_j t^j
    let k = a.tower();
    let r = a.ring();
    let m = a.degree();
    let basis = a.fbasis()?;
    let tj: Vec<SfElement> = (0..m).map(|j| a.element(&r.monomial(k.one(), j))).collect::<Result<_>>()?;
    let mut eqs = EchelonBasis::new();
    for u in &basis {
        for v in &basis {
            let assoc = tj.iter().map(|x| a.associator(x, u, v)).collect::<Result<Vec<_>>>()?;
            for l in 0..m {
                let row: Vec<Element> = assoc.iter().map(|s| r.coeff(s.poly(), l)).collect();
                eqs.insert(k, &row);
            }
        }
    }
    let kbasis = k.fbasis()?;
    let mut out = Vec::new();
    for v in linalg::nullspace(k, eqs.rows(), m) {
        let g = r.from_coeffs(v);
        for b in &kbasis.elements {
            out.push(a.element(&r.scale_left(b, &g))?);
        }
    }
    let s = FSubspace {
        basis: out,
        status: SubspaceStatus::Exact,
    };
    check_is_k(a, &s, "left")?;
    Ok(s)
}

/// `Nuc_m(S_f)`: all `x` with `[a, x, b] = 0`.
pub fn middle_nucleus(a: &PetitAlgebra) -> Result<FSubspace> {
    if fdim(a).is_none() {
        return structural_k(a, 1);
    }
    if a.two_sided() {
        return whole_algebra(a);
    }
    // [c a, x, b] = c [a, x, b], so a ranges over t^i only
    let f = constants(a)?;
    let k = a.tower();
    let r = a.ring();
    let m = a.degree();
    let basis = a.fbasis()?;
    let n = basis.len();
    let mut eqs = EchelonBasis::new();
    for i in 0..m {
        let u = a.element(&r.monomial(k.one(), i))?;
        for v in &basis {
            let cols = basis
                .iter()
                .map(|x| a.coordinates(&a.associator(&u, x, v)?))
                .collect::<Result<Vec<_>>>()?;
            for row in linalg::transpose(f, &cols, n) {
                eqs.insert(f, &row);
            }
        }
    }
    let s = FSubspace {
        basis: elements_from(a, &linalg::nullspace(f, eqs.rows(), n))?,
        status: SubspaceStatus::Exact,
    };
    check_is_k(a, &s, "middle")?;
    Ok(s)
}

fn coords_of(a: &PetitAlgebra, s: &FSubspace) -> Result<Vec<Vec<Element>>> {
    s.basis.iter().map(|g| a.coordinates(g)).collect()
}

/// Verify that `s` is closed under the product (finite case).
fn check_closed(a: &PetitAlgebra, s: &FSubspace) -> Result<()> {
    let f = constants(a)?;
    let mut span = EchelonBasis::new();
    for v in coords_of(a, s)? {
        span.insert(f, &v);
    }
    for x in &s.basis {
        for y in &s.basis {
            if !span.contains(f, &a.coordinates(&a.circ(x, y)?)?) {
                return Err(Error::NotClosed);
            }
        }
    }
    Ok(())
}

/// All nuclei and the center (finite case).
#[derive(Clone, Debug)]
pub struct Nuclei {
    pub left: FSubspace,
    pub middle: FSubspace,
    pub right: FSubspace,
    pub nucleus: FSubspace,
    pub center: FSubspace,
}

/// `Nuc = Nuc_l ∩ Nuc_m ∩ Nuc_r` and the center `{x in Nuc : x a = a x}`.
pub fn nucleus_and_center(a: &PetitAlgebra) -> Result<(FSubspace, FSubspace)> {
    let all = all_nuclei(a)?;
    Ok((all.nucleus, all.center))
}

pub fn all_nuclei(a: &PetitAlgebra) -> Result<Nuclei> {
    let f = constants(a)?;
    let n = a.fbasis()?.len();
    let left = left_nucleus(a)?;
    let middle = middle_nucleus(a)?;
    let right = right_nucleus(a, None)?;
    let lm = linalg::intersect(f, &coords_of(a, &left)?, &coords_of(a, &middle)?, n);
    let nuc = linalg::intersect(f, &lm, &coords_of(a, &right)?, n);
    let nucleus = FSubspace {
        basis: elements_from(a, &nuc)?,
        status: SubspaceStatus::Exact,
    };
    // x = sum c_i nuc_i commuting with every F-basis element
    let basis = a.fbasis()?;
    let mut eqs = EchelonBasis::new();
    for u in &basis {
        let cols = nucleus
            .basis
            .iter()
            .map(|x| a.coordinates(&a.sub(&a.circ(x, u)?, &a.circ(u, x)?)))
            .collect::<Result<Vec<_>>>()?;
        for row in linalg::transpose(f, &cols, nuc.len()) {
            eqs.insert(f, &row);
        }
    }
    let center_coords: Vec<Vec<Element>> = linalg::nullspace(f, eqs.rows(), nuc.len())
        .into_iter()
        .map(|c| {
            let mut acc = vec![f.zero(); n];
            for (ci, v) in c.iter().zip(&nuc) {
                for (slot, x) in acc.iter_mut().zip(v) {
                    *slot = f.add(slot, &f.mul(ci, x));
                }
            }
            acc
        })
        .collect();
    let center = FSubspace {
        basis: elements_from(a, &center_coords)?,
        status: SubspaceStatus::Exact,
    };
    Ok(Nuclei {
        left,
        middle,
        right,
        nucleus,
        center,
    })
}

/// `true` iff `f c` lies in `R f` for every generator `c` of K, i.e. `K ⊆ Nuc_r`.
pub fn k_in_right_nucleus(a: &PetitAlgebra) -> Result<bool> {
    if a.is_degree_one() {
        return Ok(true);
    }
    for c in a.tower().generators() {
        if !in_right_nucleus(a, &a.ring().constant(c))? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Structure constants `x_i o x_j = sum_k c[i][j][k] x_k` of a closed subspace.
#[derive(Clone, Debug)]
pub struct FAlgebraPresentation {
    pub basis: Vec<SfElement>,
    /// The scalar field of the constants (F, or the prime field over Q).
    pub scalars: FieldTower,
    pub constants: Vec<Vec<Vec<Element>>>,
    /// Coordinates of the unit, if it lies in the span.
    pub unit: Option<Vec<Element>>,
    pub associative: bool,
}

/// Structure constants of `s`; fails with `NotClosed` if a product leaves the span.
pub fn presentation(a: &PetitAlgebra, s: &FSubspace) -> Result<FAlgebraPresentation> {
    let r = a.ring();
    let k = a.tower();
    let d = s.basis.len();
    // coordinate map into the span of s
    let (scalars, solve): (FieldTower, Box<dyn Fn(&SfElement) -> Result<Option<Vec<Element>>>>) =
        match a.tower().constant_field() {
            Some(f) => {
                let f = f.clone();
                let cols = coords_of(a, s)?;
                let rows = linalg::transpose(&f, &cols, d);
                let f2 = f.clone();
                (
                    f,
                    Box::new(move |g: &SfElement| Ok(linalg::solve(&f2, &rows, &a.coordinates(g)?, d))),
                )
            }
            None => {
                let m = a.degree();
                let images: Vec<Vec<Element>> = s
                    .basis
                    .iter()
                    .map(|x| (0..m).map(|i| r.coeff(x.poly(), i)).collect())
                    .collect();
                (
                    k.prime_field(),
                    Box::new(move |g: &SfElement| {
                        let target: Vec<Element> = (0..m).map(|i| r.coeff(g.poly(), i)).collect();
                        Ok(ansatz::prime_solve(k, &images, &target))
                    }),
                )
            }
        };
    let mut constants = Vec::with_capacity(d);
    for x in &s.basis {
        let mut row = Vec::with_capacity(d);
        for y in &s.basis {
            row.push(solve(&a.circ(x, y)?)?.ok_or(Error::NotClosed)?);
        }
        constants.push(row);
    }
    let unit = solve(&a.one())?;
    let sf = &scalars;
    // (x_i x_j) x_k = sum_l c_ijl c_lkq x_q against x_i (x_j x_k) = sum_l c_jkl c_ilq x_q
    let mut associative = true;
    'check: for i in 0..d {
        for j in 0..d {
            for kk in 0..d {
                for q in 0..d {
                    let mut lhs = sf.zero();
                    let mut rhs = sf.zero();
                    for l in 0..d {
                        lhs = sf.add(&lhs, &sf.mul(&constants[i][j][l], &constants[l][kk][q]));
                        rhs = sf.add(&rhs, &sf.mul(&constants[j][kk][l], &constants[i][l][q]));
                    }
                    if lhs != rhs {
                        associative = false;
                        break 'check;
                    }
                }
            }
        }
    }
    Ok(FAlgebraPresentation {
        basis: s.basis.clone(),
        scalars,
        constants,
        unit,
        associative,
    })
}

/// Outcome of [`a_polynomial_test`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum APolyVerdict {
    /// The eigenring reached dimension `m^2`.
    APolynomial { dim: usize },
    /// Only a lower bound on the eigenring dimension was found.
    Inconclusive { lower_bound: usize },
    /// Characteristic p: the exact eigenring dimension, without a label.
    EigenringDimension { dim: usize },
}

/// Over Q: `APolynomial` iff the eigenring has dimension `m^2`.
pub fn a_polynomial_test(a: &PetitAlgebra, cfg: Option<&AnsatzConfig>) -> Result<APolyVerdict> {
    let s = eigenring(a, cfg)?;
    let m = a.degree();
    Ok(match s.status {
        SubspaceStatus::Exact => APolyVerdict::EigenringDimension { dim: s.dim() },
        _ if s.dim() == m * m => APolyVerdict::APolynomial { dim: s.dim() },
        _ => APolyVerdict::Inconclusive { lower_bound: s.dim() },
    })
}

#[cfg(test)]
mod tests;
