//! The constant field F of a characteristic-p tower and coordinates of K over F.
//!
//! F is presented as a tower of its own: a rational layer `x^p` for each
//! inseparable layer `x`, the generator itself for each constant layer, and
//! nothing for purely inseparable layers (their `alpha` already lies in F).
//! Coordinates use the monomial basis `prod g_i^{k_i}` with `k_i < p` over
//! the inseparable generators, outermost layer major.

use super::poly::Polys;
use super::{Element, FieldTower, Frac, LayerRole};
use crate::error::{Error, Result};
use crate::linalg;

#[derive(Clone, Debug)]
pub(crate) struct ConstantField {
    pub(crate) tower: FieldTower,
    /// F level matching each K level, `0..=depth`.
    pub(crate) f_level: Vec<usize>,
    /// `alpha` of each purely inseparable layer as an F element.
    pub(crate) alpha: Vec<Option<Element>>,
    /// `[K_j : F_j]` for each level.
    pub(crate) dims: Vec<usize>,
}

/// An ordered F-basis of K together with the coordinate maps.
#[derive(Clone, Debug)]
pub struct FBasis {
    pub elements: Vec<Element>,
}

impl FBasis {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

impl ConstantField {
    /// Skeleton of F for the given K layers; `alpha` entries are filled later.
    pub(crate) fn skeleton(k: &FieldTower) -> ConstantField {
        let p = k.characteristic() as usize;
        let mut tower = FieldTower::bare(k.base);
        let mut f_level = vec![0];
        let mut dims = vec![1];
        for layer in &k.layers {
            let (fl, d) = (*f_level.last().unwrap(), *dims.last().unwrap());
            match layer.role {
                LayerRole::Inseparable | LayerRole::Constant => {
                    let name = if layer.role == LayerRole::Inseparable {
                        format!("({}^{})", layer.name, p)
                    } else {
                        layer.name.clone()
                    };
                    tower.layers.push(super::Layer {
                        name,
                        alpha: None,
                        delta: Element::Modular(0),
                        role: LayerRole::Constant,
                    });
                    f_level.push(fl + 1);
                }
                LayerRole::PurelyInseparable | LayerRole::Separating => f_level.push(fl),
            }
            dims.push(match layer.role {
                LayerRole::Inseparable | LayerRole::PurelyInseparable => d * p,
                _ => d,
            });
        }
        // derivation images in F are zero at every level
        for i in 0..tower.layers.len() {
            tower.layers[i].delta = tower.zero_at(i + 1);
        }
        ConstantField {
            tower,
            f_level,
            alpha: vec![None; k.layers.len()],
            dims,
        }
    }
}

impl FieldTower {
    /// The constant field F as a tower of its own (characteristic p only).
    pub fn constant_field(&self) -> Option<&FieldTower> {
        self.constants.as_ref().map(|c| &c.tower)
    }

    /// `[K:F]` when finite.
    pub fn degree_over_constants(&self) -> Option<usize> {
        self.constants.as_ref().map(|c| *c.dims.last().unwrap())
    }

    fn cf(&self) -> Result<&ConstantField> {
        self.constants.as_deref().ok_or(Error::InfiniteDimension)
    }

    /// Embed an element of F (top level of [`constant_field`](Self::constant_field)) into K.
    pub fn embed_constant(&self, c: &Element) -> Element {
        let cf = self.constants.as_deref().expect("tower has a finite constant field");
        self.embed_at(cf, self.depth(), c)
    }

    /// Coordinates of `a` over F in the basis returned by [`fbasis`](Self::fbasis).
    pub fn coordinates(&self, a: &Element) -> Result<Vec<Element>> {
        let cf = self.cf()?;
        Ok(self.coords_at(cf, self.depth(), a))
    }

    /// Inverse of [`coordinates`](Self::coordinates).
    pub fn from_coordinates(&self, coords: &[Element]) -> Result<Element> {
        let basis = self.fbasis()?;
        assert_eq!(coords.len(), basis.len(), "coordinate vector length");
        let mut acc = self.zero();
        for (b, c) in basis.elements.iter().zip(coords) {
            if !c.is_zero() {
                acc = self.add(&acc, &self.mul(b, &self.embed_constant(c)));
            }
        }
        Ok(acc)
    }

    pub fn fbasis(&self) -> Result<FBasis> {
        let cf = self.cf()?;
        Ok(FBasis {
            elements: self.basis_at(cf, self.depth()),
        })
    }

    /// `a^p` as an element of F.
    pub fn frobenius_to_constants(&self, a: &Element) -> Result<Element> {
        let cf = self.cf()?;
        Ok(self.frob_at(cf, self.depth(), a))
    }

    /// `Some(c)` with `c` in F if `a` lies in F.
    pub fn as_constant(&self, a: &Element) -> Result<Option<Element>> {
        let coords = self.coordinates(a)?;
        if coords[1..].iter().all(Element::is_zero) {
            Ok(Some(coords[0].clone()))
        } else {
            Ok(None)
        }
    }

    /// `ker d` as an F-subspace of K, returned as a list of basis vectors in K.
    pub fn constant_kernel(&self) -> Result<Vec<Element>> {
        let cf = self.cf()?;
        let basis = self.basis_at(cf, self.depth());
        let columns: Vec<Vec<Element>> = basis
            .iter()
            .map(|b| self.coords_at(cf, self.depth(), &self.derive(b)))
            .collect();
        let rows = linalg::transpose(&cf.tower, &columns, basis.len());
        linalg::nullspace(&cf.tower, &rows, basis.len())
            .into_iter()
            .map(|v| self.from_coordinates(&v))
            .collect()
    }

    // ---- per-level implementations ----------------------------------------

    pub(crate) fn embed_at(&self, cf: &ConstantField, j: usize, c: &Element) -> Element {
        if j == 0 {
            return c.clone();
        }
        let layer = &self.layers[j - 1];
        match layer.role {
            LayerRole::Inseparable | LayerRole::Constant => {
                let Element::Frac(fr) = c else {
                    panic!("constant at wrong level")
                };
                let stride = if layer.role == LayerRole::Inseparable {
                    self.characteristic() as usize
                } else {
                    1
                };
                let num = self.embed_poly(cf, j, &fr.num, stride);
                let den = self.embed_poly(cf, j, &fr.den, stride);
                self.make_frac(j, num, den)
            }
            LayerRole::PurelyInseparable | LayerRole::Separating => {
                let e = self.embed_at(cf, j - 1, c);
                self.lift(e, j - 1, j)
            }
        }
    }

    fn embed_poly(&self, cf: &ConstantField, j: usize, c: &[Element], stride: usize) -> Vec<Element> {
        if c.is_empty() {
            return Vec::new();
        }
        let mut out = vec![self.zero_at(j - 1); (c.len() - 1) * stride + 1];
        for (k, x) in c.iter().enumerate() {
            out[k * stride] = self.embed_at(cf, j - 1, x);
        }
        out
    }

    pub(crate) fn frob_at(&self, cf: &ConstantField, j: usize, a: &Element) -> Element {
        if j == 0 {
            // Frobenius is the identity on F_p
            return a.clone();
        }
        let layer = &self.layers[j - 1];
        let fl = cf.f_level[j];
        let p = self.characteristic() as usize;
        match layer.role {
            LayerRole::Inseparable | LayerRole::Constant => {
                let Element::Frac(fr) = a else {
                    panic!("element at wrong level")
                };
                let stride = if layer.role == LayerRole::Inseparable { 1 } else { p };
                let conv = |c: &[Element]| -> Vec<Element> {
                    if c.is_empty() {
                        return Vec::new();
                    }
                    let mut out = vec![cf.tower.zero_at(fl - 1); (c.len() - 1) * stride + 1];
                    for (k, x) in c.iter().enumerate() {
                        out[k * stride] = self.frob_at(cf, j - 1, x);
                    }
                    out
                };
                cf.tower.make_frac(fl, conv(&fr.num), conv(&fr.den))
            }
            LayerRole::PurelyInseparable => {
                let Element::Alg(c) = a else {
                    panic!("element at wrong level")
                };
                let alpha = cf.alpha[j - 1].as_ref().expect("alpha registered");
                let mut acc = cf.tower.zero_at(fl);
                let mut apow = cf.tower.one_at(fl);
                for x in c {
                    let term = cf.tower.mul_at(fl, &self.frob_at(cf, j - 1, x), &apow);
                    acc = cf.tower.add_at(fl, &acc, &term);
                    apow = cf.tower.mul_at(fl, &apow, alpha);
                }
                acc
            }
            LayerRole::Separating => unreachable!("no Frobenius in characteristic 0"),
        }
    }

    pub(crate) fn coords_at(&self, cf: &ConstantField, j: usize, a: &Element) -> Vec<Element> {
        if j == 0 {
            return vec![a.clone()];
        }
        let layer = &self.layers[j - 1];
        let p = self.characteristic() as usize;
        let fl = cf.f_level[j];
        let lower_dim = cf.dims[j - 1];
        match layer.role {
            LayerRole::PurelyInseparable => {
                let Element::Alg(c) = a else {
                    panic!("element at wrong level")
                };
                let zero = self.zero_at(j - 1);
                (0..p)
                    .flat_map(|i| self.coords_at(cf, j - 1, c.get(i).unwrap_or(&zero)))
                    .collect()
            }
            LayerRole::Inseparable | LayerRole::Constant => {
                let Element::Frac(fr) = a else {
                    panic!("element at wrong level")
                };
                let insep = layer.role == LayerRole::Inseparable;
                let kp = Polys::new(self, j - 1);
                // a = n d^{p-1} / d^p with d^p in F
                let (numer, denom) = if fr.den.len() == 1 {
                    (fr.num.clone(), None)
                } else {
                    let n = kp.mul(&fr.num, &kp.pow(&fr.den, p - 1));
                    let d = self.poly_to_elem(j, fr.den.clone());
                    (n, Some(self.frob_at(cf, j, &d)))
                };
                let blocks = if insep { p } else { 1 };
                let mut polys: Vec<Vec<Element>> = vec![Vec::new(); blocks * lower_dim];
                for (k, c) in numer.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let cv = self.coords_at(cf, j - 1, c);
                    let (i, e) = if insep { (k % p, k / p) } else { (0, k) };
                    for (b, x) in cv.into_iter().enumerate() {
                        let poly = &mut polys[i * lower_dim + b];
                        if poly.len() <= e {
                            poly.resize(e + 1, cf.tower.zero_at(fl - 1));
                        }
                        poly[e] = cf.tower.add_at(fl - 1, &poly[e], &x);
                    }
                }
                let dinv = denom.map(|d| cf.tower.inv_at(fl, &d));
                polys
                    .into_iter()
                    .map(|poly| {
                        let e = cf.tower.poly_to_elem(fl, poly);
                        match &dinv {
                            Some(inv) => cf.tower.mul_at(fl, &e, inv),
                            None => e,
                        }
                    })
                    .collect()
            }
            LayerRole::Separating => unreachable!("no coordinates in characteristic 0"),
        }
    }

    pub(crate) fn basis_at(&self, cf: &ConstantField, j: usize) -> Vec<Element> {
        if j == 0 {
            return vec![self.one_at(0)];
        }
        let prev: Vec<Element> = self
            .basis_at(cf, j - 1)
            .into_iter()
            .map(|b| self.lift(b, j - 1, j))
            .collect();
        match self.layers[j - 1].role {
            LayerRole::Constant | LayerRole::Separating => prev,
            LayerRole::Inseparable | LayerRole::PurelyInseparable => {
                let p = self.characteristic() as usize;
                let g = self.generator_at(j);
                let mut out = Vec::with_capacity(p * prev.len());
                let mut gi = self.one_at(j);
                for _ in 0..p {
                    for b in &prev {
                        out.push(self.mul_at(j, &gi, b));
                    }
                    gi = self.mul_at(j, &gi, &g);
                }
                out
            }
        }
    }

    /// Generator of layer `j` at its own level.
    pub(crate) fn generator_at(&self, j: usize) -> Element {
        match self.layers[j - 1].alpha {
            Some(_) => Element::Alg(vec![self.zero_at(j - 1), self.one_at(j - 1)]),
            None => Element::Frac(Box::new(Frac {
                num: vec![self.zero_at(j - 1), self.one_at(j - 1)],
                den: vec![self.one_at(j - 1)],
            })),
        }
    }
}
