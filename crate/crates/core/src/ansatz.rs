//! Bounded ansatz spaces: monomials in the tower generators and linear
//! solves over the prime field.

use std::collections::BTreeMap;

use crate::field::{Element, FieldTower};
use crate::linalg;

/// Monomials in the generators of total degree `<= n`, lowest degree first.
/// Generators of purely inseparable layers appear with exponent `< p`.
pub(crate) fn monomials(k: &FieldTower, n: usize) -> Vec<Element> {
    let d = k.depth();
    let caps: Vec<usize> = (0..d)
        .map(|i| if k.generator_alpha(i).is_some() { k.characteristic() as usize - 1 } else { n })
        .collect();
    let mut exps: Vec<Vec<usize>> = vec![vec![]];
    for cap in &caps {
        exps = exps
            .into_iter()
            .flat_map(|e| {
                (0..=*cap).map(move |i| {
                    let mut e = e.clone();
                    e.push(i);
                    e
                })
            })
            .filter(|e| e.iter().sum::<usize>() <= n)
            .collect();
    }
    exps.sort_by_key(|e| (e.iter().sum::<usize>(), e.iter().rev().cloned().collect::<Vec<_>>()));
    let gens = k.generators();
    exps.iter()
        .map(|e| {
            e.iter()
                .zip(&gens)
                .fold(k.one(), |acc, (i, g)| k.mul(&acc, &k.pow(g, *i as i64)))
        })
        .collect()
}

/// Exponent vector -> base-field coefficient of a denominator-free element.
fn terms(k: &FieldTower, a: &Element, out: &mut BTreeMap<Vec<usize>, Element>) {
    fn go(k: &FieldTower, lvl: usize, a: &Element, exps: &mut Vec<usize>, out: &mut BTreeMap<Vec<usize>, Element>) {
        if lvl == 0 {
            if !a.is_zero() {
                out.insert(exps.clone(), a.clone());
            }
            return;
        }
        let coeffs = match a {
            Element::Frac(f) => {
                debug_assert_eq!(f.den.len(), 1, "element still has a denominator");
                &f.num
            }
            Element::Alg(c) => c,
            _ => unreachable!("element at wrong level"),
        };
        for (i, c) in coeffs.iter().enumerate() {
            exps[lvl - 1] = i;
            go(k, lvl - 1, c, exps, out);
        }
        exps[lvl - 1] = 0;
    }
    let mut exps = vec![0; k.depth()];
    go(k, k.depth(), a, &mut exps, out);
}

/// Prime-field coordinates of vectors over K, in a shared monomial basis.
///
/// All entries are first multiplied by one common denominator, which keeps
/// linear relations over the prime field intact.
pub(crate) fn flatten(k: &FieldTower, vectors: &[Vec<Element>]) -> Vec<Vec<Element>> {
    let all: Vec<Element> = vectors.iter().flatten().cloned().collect();
    let d = k.common_denominator(&all);
    let maps: Vec<Vec<BTreeMap<Vec<usize>, Element>>> = vectors
        .iter()
        .map(|v| {
            v.iter()
                .map(|a| {
                    let mut m = BTreeMap::new();
                    terms(k, &k.mul(&d, a), &mut m);
                    m
                })
                .collect()
        })
        .collect();
    let mut index: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
    for v in &maps {
        for (pos, m) in v.iter().enumerate() {
            for e in m.keys() {
                let next = index.len();
                index.entry((pos, e.clone())).or_insert(next);
            }
        }
    }
    let zero = k.prime_field().zero();
    maps.iter()
        .map(|v| {
            let mut out = vec![zero.clone(); index.len()];
            for (pos, m) in v.iter().enumerate() {
                for (e, c) in m {
                    out[index[&(pos, e.clone())]] = c.clone();
                }
            }
            out
        })
        .collect()
}

/// Prime-field vectors `c` with `sum c_u images[u] = 0`.
pub(crate) fn prime_kernel(k: &FieldTower, images: &[Vec<Element>]) -> Vec<Vec<Element>> {
    let flat = flatten(k, images);
    let pf = k.prime_field();
    let len = flat.first().map_or(0, Vec::len);
    let rows = linalg::transpose(&pf, &flat, images.len());
    debug_assert!(rows.len() == len);
    linalg::nullspace(&pf, &rows, images.len())
}

/// One prime-field solution of `sum c_u images[u] = target`, if any.
pub(crate) fn prime_solve(k: &FieldTower, images: &[Vec<Element>], target: &[Element]) -> Option<Vec<Element>> {
    let mut all = images.to_vec();
    all.push(target.to_vec());
    let mut flat = flatten(k, &all);
    let rhs = flat.pop().unwrap();
    let pf = k.prime_field();
    let rows = linalg::transpose(&pf, &flat, images.len());
    if rows.is_empty() {
        // no coordinates at all: every image and the target vanish
        return Some(vec![pf.zero(); images.len()]);
    }
    linalg::solve(&pf, &rows, &rhs, images.len())
}

/// `sum c_i a_i` for prime-field scalars `c_i`.
pub(crate) fn combine(k: &FieldTower, c: &[Element], items: &[Element]) -> Element {
    let mut acc = k.zero();
    for (ci, a) in c.iter().zip(items) {
        if !ci.is_zero() {
            acc = k.add(&acc, &k.mul(&k.from_prime(ci), a));
        }
    }
    acc
}
