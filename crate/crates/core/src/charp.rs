//! Characteristic-p machinery: `V_p` maps, the minimum p-polynomial of the
//! derivation, the center of `R`, bounds, differential extensions, split
//! witnesses, linear right factors and the `(p, e, m)` scenario builder.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::One;

use crate::ansatz;
use crate::error::{Error, Result};
use crate::field::{Element, FieldTower, TowerBuilder};
use crate::linalg;
use crate::nucleus;
use crate::ore::{OrePoly, OreRing};
use crate::petit::{make_petit, PetitAlgebra};

fn require_char_p(k: &FieldTower) -> Result<usize> {
    match k.characteristic() {
        0 => Err(Error::WrongCharacteristic),
        p => Ok(p as usize),
    }
}

/// `V_p(b) = b^p + d^(p-1)(b)`.
pub fn v_p(k: &FieldTower, b: &Element) -> Result<Element> {
    let p = require_char_p(k)?;
    Ok(k.add(&k.pow(b, p as i64), &k.derive_n(b, p - 1)))
}

/// `V_p` iterated `e` times.
pub fn v_pe(k: &FieldTower, b: &Element, e: usize) -> Result<Element> {
    require_char_p(k)?;
    let mut acc = b.clone();
    for _ in 0..e {
        acc = v_p(k, &acc)?;
    }
    Ok(acc)
}

/// `g(t) = t^(p^e) + c_1 t^(p^(e-1)) + ... + c_e t` and optionally `f = g - d0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PPolynomial {
    pub p: usize,
    pub e: usize,
    /// `c_1, ..., c_e`, constants embedded in K.
    pub c: Vec<Element>,
    pub d0: Option<Element>,
}

impl PPolynomial {
    /// Degree `p^e`.
    pub fn degree(&self) -> usize {
        self.p.pow(self.e as u32)
    }

    pub fn with_d0(&self, d0: Element) -> PPolynomial {
        PPolynomial {
            d0: Some(d0),
            ..self.clone()
        }
    }

    /// `g(t)` as an element of `R`.
    pub fn g(&self, ring: &OreRing) -> OrePoly {
        let k = ring.tower();
        let mut g = ring.monomial(k.one(), self.degree());
        for (i, c) in self.c.iter().enumerate() {
            let exp = self.p.pow((self.e - 1 - i) as u32);
            g = ring.add(&g, &ring.monomial(c.clone(), exp));
        }
        g
    }

    /// `f(t) = g(t) - d0`.
    pub fn f(&self, ring: &OreRing) -> OrePoly {
        match &self.d0 {
            Some(d) => ring.sub(&self.g(ring), &ring.constant(d.clone())),
            None => self.g(ring),
        }
    }
}

/// `V_g(b) = V_(p^e)(b) + c_1 V_(p^(e-1))(b) + ... + c_e b`.
pub fn v_f(k: &FieldTower, g: &PPolynomial, b: &Element) -> Result<Element> {
    require_char_p(k)?;
    // iterates[i] = V_(p^i)(b)
    let mut iterates = vec![b.clone()];
    for _ in 0..g.e {
        let next = v_p(k, iterates.last().unwrap())?;
        iterates.push(next);
    }
    let mut acc = iterates[g.e].clone();
    for (i, c) in g.c.iter().enumerate() {
        acc = k.add(&acc, &k.mul(c, &iterates[g.e - 1 - i]));
    }
    Ok(acc)
}

fn mat_mul(f: &FieldTower, a: &[Vec<Element>], b: &[Vec<Element>]) -> Vec<Vec<Element>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = f.zero();
                    for l in 0..n {
                        if !a[i][l].is_zero() && !b[l][j].is_zero() {
                            acc = f.add(&acc, &f.mul(&a[i][l], &b[l][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

fn mat_pow(f: &FieldTower, a: &[Vec<Element>], p: usize) -> Vec<Vec<Element>> {
    let mut acc = a.to_vec();
    for _ in 1..p {
        acc = mat_mul(f, &acc, a);
    }
    acc
}

/// Matrix of the derivation over F in the basis of `fbasis`, row-major.
pub fn derivation_matrix(k: &FieldTower) -> Result<Vec<Vec<Element>>> {
    let f = k.constant_field().ok_or(Error::InfiniteDimension)?;
    let basis = k.fbasis()?;
    let columns = basis
        .elements
        .iter()
        .map(|b| k.coordinates(&k.derive(b)))
        .collect::<Result<Vec<_>>>()?;
    Ok(linalg::transpose(f, &columns, basis.len()))
}

/// Least `e` and constants `c_i` with `g(d) = 0` as an F-linear operator on K.
pub fn min_p_polynomial(k: &FieldTower) -> Result<PPolynomial> {
    let f = k.constant_field().ok_or(Error::InfiniteDimension)?;
    let p = k.characteristic() as usize;
    let d = derivation_matrix(k)?;
    let flat = |m: &[Vec<Element>]| -> Vec<Element> { m.iter().flatten().cloned().collect() };
    // powers[i] = vec(D^(p^i))
    let mut powers = vec![flat(&d)];
    let mut current = d;
    loop {
        current = mat_pow(f, &current, p);
        let v = flat(&current);
        let e = powers.len();
        let rows = linalg::transpose(f, &powers, e);
        if let Some(a) = linalg::solve(f, &rows, &v, e) {
            // D^(p^e) = sum a_j D^(p^j), so c_i = -a_(e-i)
            let c = (1..=e).map(|i| k.embed_constant(&f.neg(&a[e - i]))).collect();
            return Ok(PPolynomial { p, e, c, d0: None });
        }
        powers.push(v);
        if powers.len() > 64 {
            return Err(Error::InternalInconsistency("no p-polynomial relation found".into()));
        }
    }
}

/// The center `F[z]` of `R` with `z = g(t) - d0`.
#[derive(Clone, Debug)]
pub struct CenterReport {
    pub g: PPolynomial,
    pub z: OrePoly,
}

fn check_d0(k: &FieldTower, d0: &Element) -> Result<()> {
    if k.is_constant(d0) {
        Ok(())
    } else {
        Err(Error::NonConstantD0(k.format(d0)))
    }
}

/// `z = g(t) - d0` with centrality verified against `t` and every generator.
pub fn center_of_r(ring: &OreRing, d0: &Element) -> Result<CenterReport> {
    let k = ring.tower();
    let g = min_p_polynomial(k)?;
    check_d0(k, d0)?;
    let g = g.with_d0(d0.clone());
    let z = g.f(ring);
    if !commutes_with_generators(ring, &z) {
        return Err(Error::InternalInconsistency("z = g(t) - d0 is not central".into()));
    }
    Ok(CenterReport { g, z })
}

/// `z t = t z` and `z a = a z` for every tower generator `a`.
pub fn commutes_with_generators(ring: &OreRing, z: &OrePoly) -> bool {
    let t = ring.t();
    if ring.mul(z, &t) != ring.mul(&t, z) {
        return false;
    }
    ring.tower().generators().into_iter().all(|a| {
        let a = ring.constant(a);
        ring.mul(z, &a) == ring.mul(&a, z)
    })
}

/// Monic generator of the largest two-sided ideal inside `R f`: the least
/// `h(z)`, `z = g(t)`, with `h(z) mod_r f = 0`.
pub fn bound_of(ring: &OreRing, f: &OrePoly) -> Result<OrePoly> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let k = ring.tower();
    let fk = k.constant_field().ok_or(Error::InfiniteDimension)?;
    let z = min_p_polynomial(k)?.g(ring);
    let f = ring.monic(f);
    if f.degree() == Some(0) {
        return Ok(ring.one());
    }
    let a = make_petit(ring, &f)?;
    // r_j = z^j mod_r f, as F-coordinates
    let mut zpow = ring.one();
    let mut reduced = ring.one();
    let mut coords: Vec<Vec<Element>> = Vec::new();
    let mut zpows: Vec<OrePoly> = Vec::new();
    loop {
        let v = a.coordinates(&a.element(&reduced)?)?;
        let j = coords.len();
        if j > 0 {
            let rows = linalg::transpose(fk, &coords, j);
            if let Some(c) = linalg::solve(fk, &rows, &v, j) {
                // z^j - sum c_i z^i
                let mut h = zpow.clone();
                for (ci, zi) in c.iter().zip(&zpows) {
                    h = ring.sub(&h, &ring.scale_left(&k.embed_constant(ci), zi));
                }
                return Ok(ring.monic(&h));
            }
        } else if v.iter().all(Element::is_zero) {
            return Ok(ring.one());
        }
        coords.push(v);
        zpows.push(zpow.clone());
        zpow = ring.mul(&zpow, &z);
        reduced = ring.mod_r(&ring.mul(&z, &reduced), &f)?;
    }
}

/// `(K, d, d0) = R / R (g - d0)`, which is two-sided.
pub fn differential_extension(ring: &OreRing, d0: &Element) -> Result<PetitAlgebra> {
    let c = center_of_r(ring, d0)?;
    let a = make_petit(ring, &c.z)?;
    if !a.two_sided() {
        return Err(Error::InternalInconsistency("g - d0 is not two-sided".into()));
    }
    Ok(a)
}

/// Outcome of the bounded search for `b` with `V_g(b) = d0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitOutcome {
    pub witness: Option<Element>,
    pub bound: usize,
    /// `split`, `division (uncertified at bound N)` or `no solution within bound N`.
    pub label: String,
}

/// Default ansatz bound `2 p^e`.
pub fn default_split_bound(k: &FieldTower) -> Result<usize> {
    Ok(2 * k.degree_over_constants().ok_or(Error::InfiniteDimension)?)
}

/// Search `b = (sum c_mu mu) / D` with `c` in F_p, `deg mu <= bound` and `D`
/// the denominator of `d0`, solving the F_p-linear system `V_g(b) = d0`.
pub fn split_solver(ring: &OreRing, g: &PPolynomial, bound: usize) -> Result<SplitOutcome> {
    let k = ring.tower();
    require_char_p(k)?;
    let d0 = g.d0.clone().unwrap_or_else(|| k.zero());
    check_d0(k, &d0)?;
    let den = k.common_denominator(std::slice::from_ref(&d0));
    let dinv = k.inv(&den);
    let candidates: Vec<Element> = ansatz::monomials(k, bound)
        .into_iter()
        .map(|m| k.mul(&m, &dinv))
        .collect();
    let images = candidates
        .iter()
        .map(|b| v_f(k, g, b).map(|v| vec![v]))
        .collect::<Result<Vec<_>>>()?;
    let witness = ansatz::prime_solve(k, &images, std::slice::from_ref(&d0))
        .map(|c| ansatz::combine(k, &c, &candidates));
    if let Some(b) = &witness {
        let lin = ring.from_coeffs(vec![k.neg(b), k.one()]);
        if v_f(k, g, b)? != d0 || !ring.mod_r(&g.f(ring), &lin)?.is_zero() {
            return Err(Error::InternalInconsistency("split witness failed verification".into()));
        }
    }
    let label = match (&witness, g.e == 1) {
        (Some(_), _) => "split".to_string(),
        (None, true) => format!("division (uncertified at bound {bound})"),
        (None, false) => format!("no solution within bound {bound}"),
    };
    Ok(SplitOutcome { witness, bound, label })
}

/// Roots `r` with `t - r` right-dividing `f`, and whether the ansatz was exhausted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootSearch {
    pub roots: Vec<Element>,
    pub exhausted: bool,
    pub candidates: usize,
}

/// Candidate limit of [`right_root_search`].
pub const ROOT_CANDIDATE_CAP: usize = 50_000;

/// Remainder of `f` modulo `t - r`: `sum f_i N_i(r)` with `N_0 = 1`,
/// `N_(i+1) = r N_i + d(N_i)`.
pub fn remainder_at(ring: &OreRing, f: &OrePoly, r: &Element) -> Element {
    let k = ring.tower();
    let mut n = k.one();
    let mut acc = k.zero();
    for (i, c) in f.coeffs().iter().enumerate() {
        if i > 0 {
            n = k.add(&k.mul(r, &n), &k.derive(&n));
        }
        if !c.is_zero() {
            acc = k.add(&acc, &k.mul(c, &n));
        }
    }
    acc
}

/// Bounded search for linear right factors `t - r` of `f`.
///
/// Candidates are `r = (sum c_mu mu) / T` for the denominator templates
/// `T = D` and `T = D x` (`D` the common denominator of the coefficients of
/// `f`, `x` the first generator), monomials `mu` of total degree `<= bound`
/// and `c` in F_p, resp. integers in `[-2, 2]` over Q. Numerators are
/// enumerated by their leading monomial, lowest first.
pub fn right_root_search(ring: &OreRing, f: &OrePoly, bound: usize) -> Result<RootSearch> {
    let k = ring.tower();
    let m = f.degree().ok_or(Error::ZeroPolynomial)?;
    if m == 0 {
        return Ok(RootSearch {
            roots: Vec::new(),
            exhausted: true,
            candidates: 0,
        });
    }
    if m == 1 {
        let c = f.coeffs();
        let r = k.neg(&k.div(&c[0], &c[1]));
        return Ok(RootSearch {
            roots: vec![r],
            exhausted: true,
            candidates: 1,
        });
    }
    let scalars: Vec<Element> = match k.characteristic() {
        0 => (-2..=2).map(|i| k.from_int(i)).collect(),
        p => (0..p as i64).map(|i| k.from_int(i)).collect(),
    };
    let nonzero: Vec<&Element> = scalars.iter().filter(|s| !s.is_zero()).collect();
    let d = k.common_denominator(f.coeffs());
    let mut templates = vec![d.clone()];
    if k.depth() > 0 {
        templates.push(k.mul(&d, &k.generator(0)));
    }
    let monos = ansatz::monomials(k, bound);
    let mut roots: Vec<Element> = Vec::new();
    let mut count = 0usize;
    let test = |r: Element, roots: &mut Vec<Element>| {
        if remainder_at(ring, f, &r).is_zero() && !roots.contains(&r) {
            roots.push(r);
        }
    };
    count += 1;
    test(k.zero(), &mut roots);
    for den in &templates {
        let dinv = k.inv(den);
        let scaled: Vec<Element> = monos.iter().map(|mo| k.mul(mo, &dinv)).collect();
        for lead in 0..scaled.len() {
            // digits for monomials below `lead`, a nonzero digit at `lead`
            let mut digits = vec![0usize; lead];
            'outer: loop {
                for c in &nonzero {
                    if count >= ROOT_CANDIDATE_CAP {
                        return Ok(RootSearch {
                            roots,
                            exhausted: false,
                            candidates: count,
                        });
                    }
                    let mut r = k.mul(c, &scaled[lead]);
                    for (i, dg) in digits.iter().enumerate() {
                        if !scalars[*dg].is_zero() {
                            r = k.add(&r, &k.mul(&scalars[*dg], &scaled[i]));
                        }
                    }
                    count += 1;
                    test(r, &mut roots);
                }
                // next digit vector
                for dg in digits.iter_mut() {
                    *dg += 1;
                    if *dg < scalars.len() {
                        continue 'outer;
                    }
                    *dg = 0;
                }
                break;
            }
        }
    }
    Ok(RootSearch {
        roots,
        exhausted: true,
        candidates: count,
    })
}

/// Which structure result governs `S_f` for `[K:F] = p^e` and `deg f = m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// `m < p^e`: `S_f` is not associative and its nucleus is a proper subfield of K.
    ProperSubfieldNucleus,
    /// `m = p^e`: `f = g - d0` is two-sided and `S_f` is a differential extension.
    DifferentialExtension,
}

impl Regime {
    pub fn label(self) -> &'static str {
        match self {
            Regime::ProperSubfieldNucleus => "m < p^e",
            Regime::DifferentialExtension => "m = p^e",
        }
    }
}

/// Dimension bookkeeping for `m = p^n`, `e = m - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BookkeepingRow {
    pub p: u64,
    pub n: u32,
    pub m: BigUint,
    pub e: BigUint,
    /// `n + 1 <= p^n`.
    pub n_plus_one_le_p_pow_n: bool,
    /// `m^2 < m p^e`.
    pub m_squared_lt_m_p_e: bool,
    /// `m p^e <= m p^(m-1)`.
    pub m_p_e_le_m_p_m_minus_one: bool,
}

pub fn dimension_bookkeeping(p: u64, n: u32) -> BookkeepingRow {
    let pb = BigUint::from(p);
    let m = pb.pow(n);
    let e = &m - BigUint::one();
    let e_u32 = u32::try_from(&e).expect("exponent fits in u32");
    let m_minus_one = u32::try_from(&m - BigUint::one()).expect("exponent fits in u32");
    let m_p_e = &m * pb.pow(e_u32);
    let m_p_m1 = &m * pb.pow(m_minus_one);
    BookkeepingRow {
        p,
        n,
        n_plus_one_le_p_pow_n: BigUint::from(n + 1) <= m,
        m_squared_lt_m_p_e: &m * &m < m_p_e,
        m_p_e_le_m_p_m_minus_one: m_p_e <= m_p_m1,
        m,
        e,
    }
}

/// Result of [`scenario_builder`].
#[derive(Clone, Debug)]
pub struct ScenarioReport {
    pub p: u64,
    pub e: usize,
    pub m: usize,
    pub k_degree: usize,
    pub regime: Regime,
    pub algebra: PetitAlgebra,
    pub dim_sf: usize,
    pub right_nucleus_dim: usize,
    pub left_nucleus_dim: usize,
    pub middle_nucleus_dim: usize,
    pub nucleus_dim: usize,
    pub center_dim: usize,
}

/// The tower `F_p(x1, ..., xe)` with `d(x1) = 1`, `d(xi) = x(i-1)^(p-1)`, of
/// degree `p^e` over its constants.
pub fn scenario_tower(p: u64, e: usize) -> Result<FieldTower> {
    let mut b = TowerBuilder::prime(p);
    for i in 1..=e {
        b = b.rational(&format!("x{i}"));
    }
    for i in 1..=e {
        let image = if i == 1 { "1".to_string() } else { format!("x{}^{}", i - 1, p - 1) };
        b = b.derivation(&format!("x{i}"), &image);
    }
    b.build()
}

/// Build `K` with `[K:F] = p^e`, a modulus of degree `m` and report the
/// dimensions and nuclei of `S_f`.
pub fn scenario_builder(p: u64, e: usize, m: usize) -> Result<ScenarioReport> {
    if e == 0 {
        return Err(Error::UnsatisfiedHypothesis("e >= 1 violated: e = 0".into()));
    }
    if m == 0 {
        return Err(Error::UnsatisfiedHypothesis("m >= 1 violated: m = 0".into()));
    }
    let k = Arc::new(scenario_tower(p, e)?);
    let ring = OreRing::new(k.clone());
    let n = k.degree_over_constants().ok_or(Error::InfiniteDimension)?;
    if m > n {
        return Err(Error::UnsatisfiedHypothesis(format!(
            "m <= p^e violated: m = {m} > p^e = {n}"
        )));
    }
    let x1 = k.generator(0);
    let (regime, f) = if m < n {
        let f = ring.sub(&ring.monomial(k.one(), m), &ring.constant(x1));
        (Regime::ProperSubfieldNucleus, f)
    } else {
        let d0 = k.pow(&x1, p as i64);
        (Regime::DifferentialExtension, center_of_r(&ring, &d0)?.z)
    };
    let algebra = make_petit(&ring, &f)?;
    let dim_sf = algebra.fbasis()?.len();
    if dim_sf != m * n {
        return Err(Error::InternalInconsistency("dim S_f differs from m p^e".into()));
    }
    if (regime == Regime::DifferentialExtension) != algebra.two_sided() {
        return Err(Error::InternalInconsistency("two-sidedness does not match the regime".into()));
    }
    let nuclei = nucleus::all_nuclei(&algebra)?;
    Ok(ScenarioReport {
        p,
        e,
        m,
        k_degree: n,
        regime,
        dim_sf,
        right_nucleus_dim: nuclei.right.dim(),
        left_nucleus_dim: nuclei.left.dim(),
        middle_nucleus_dim: nuclei.middle.dim(),
        nucleus_dim: nuclei.nucleus.dim(),
        center_dim: nuclei.center.dim(),
        algebra,
    })
}

#[cfg(test)]
mod tests;
