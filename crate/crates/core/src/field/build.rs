//! Tower construction and validation.

use super::basis::ConstantField;
use super::{is_prime, BaseField, Element, FieldTower, Layer, LayerRole};
use crate::error::{Error, Result};
use crate::expr;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LayerDescription {
    /// Adjoin a transcendental.
    Rational(String),
    /// Adjoin `u` with `u^p = alpha`; `alpha` is an expression in earlier generators.
    PInsep { name: String, alpha: String },
}

impl LayerDescription {
    pub fn name(&self) -> &str {
        match self {
            LayerDescription::Rational(n) => n,
            LayerDescription::PInsep { name, .. } => name,
        }
    }
}

/// Unvalidated tower data: base, layers and derivation images as expressions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TowerDescription {
    pub base: BaseField,
    pub layers: Vec<LayerDescription>,
    /// `(generator, image)`; generators without an entry map to 0.
    pub derivation: Vec<(String, String)>,
}

/// Fluent construction of a [`TowerDescription`].
#[derive(Clone, Debug)]
pub struct TowerBuilder {
    descr: TowerDescription,
}

impl TowerBuilder {
    pub fn rationals() -> Self {
        Self::over(BaseField::Rationals)
    }

    pub fn prime(p: u64) -> Self {
        Self::over(BaseField::Prime(p))
    }

    pub fn over(base: BaseField) -> Self {
        TowerBuilder {
            descr: TowerDescription {
                base,
                layers: Vec::new(),
                derivation: Vec::new(),
            },
        }
    }

    pub fn rational(mut self, name: &str) -> Self {
        self.descr.layers.push(LayerDescription::Rational(name.into()));
        self
    }

    pub fn pinsep(mut self, name: &str, alpha: &str) -> Self {
        self.descr.layers.push(LayerDescription::PInsep {
            name: name.into(),
            alpha: alpha.into(),
        });
        self
    }

    pub fn derivation(mut self, name: &str, image: &str) -> Self {
        self.descr.derivation.push((name.into(), image.into()));
        self
    }

    pub fn description(self) -> TowerDescription {
        self.descr
    }

    pub fn build(self) -> Result<FieldTower> {
        make_tower(&self.descr)
    }
}

/// Validate a description and build the tower.
///
/// In characteristic p the constant field is assembled layer by layer and
/// `dim_F ker d = 1` is checked by exact linear algebra.
pub fn make_tower(descr: &TowerDescription) -> Result<FieldTower> {
    if let BaseField::Prime(p) = descr.base {
        if !is_prime(p) {
            return Err(Error::UnsupportedCombination(format!("{p} is not prime")));
        }
        if p > u32::MAX as u64 {
            return Err(Error::UnsupportedCombination(format!("prime {p} is too large")));
        }
    }
    let mut k = FieldTower::bare(descr.base);
    let mut seen: Vec<&str> = Vec::new();
    for layer in &descr.layers {
        let name = layer.name();
        if name == "t" || seen.contains(&name) {
            return Err(Error::UnsupportedCombination(format!(
                "generator name '{name}' is reserved or repeated"
            )));
        }
        seen.push(name);
        let alpha = match layer {
            LayerDescription::Rational(_) => None,
            LayerDescription::PInsep { alpha, .. } => {
                if descr.base == BaseField::Rationals {
                    return Err(Error::UnsupportedCombination(
                        "purely inseparable layers need a prime base field".into(),
                    ));
                }
                let a = expr::eval_element(&k, &expr::parse(alpha)?)?;
                if k.pth_root_at(k.depth(), &a).is_some() {
                    return Err(Error::UnsupportedCombination(format!(
                        "{} is a p-th power, so u^p - alpha is reducible",
                        k.format(&a)
                    )));
                }
                Some(a)
            }
        };
        let lvl = k.depth();
        k.layers.push(Layer {
            name: name.into(),
            alpha,
            delta: Element::Modular(0),
            role: LayerRole::Constant,
        });
        k.layers[lvl].delta = k.zero_at(lvl + 1);
    }

    for (name, image) in &descr.derivation {
        let Some(i) = k.generator_index(name) else {
            return Err(Error::TypeError(format!("derivation of unknown generator '{name}'")));
        };
        let v = expr::eval_element(&k, &expr::parse(image)?)?;
        let Some(v) = k.lower(v, k.depth(), i + 1) else {
            return Err(Error::UnsupportedCombination(format!(
                "the image of {name} may only involve {name} and earlier generators"
            )));
        };
        k.layers[i].delta = v;
    }

    let char_p = descr.base != BaseField::Rationals;
    for layer in &mut k.layers {
        layer.role = match (&layer.alpha, layer.delta.is_zero(), char_p) {
            (Some(_), _, _) => LayerRole::PurelyInseparable,
            (None, true, _) => LayerRole::Constant,
            (None, false, true) => LayerRole::Inseparable,
            (None, false, false) => LayerRole::Separating,
        };
    }
    if k.depth() > 0 && k.layers.iter().all(|l| l.delta.is_zero()) {
        return Err(Error::ConstantFieldTooLarge(
            "the derivation vanishes on every generator".into(),
        ));
    }
    if !char_p {
        return Ok(k);
    }

    let mut cf = ConstantField::skeleton(&k);
    for j in 1..=k.depth() {
        let Some(alpha) = k.layers[j - 1].alpha.clone() else {
            continue;
        };
        let shown = k.format_at(j - 1, &alpha);
        if !k.derive_at(j - 1, &alpha).is_zero() {
            return Err(Error::NonConstantAlpha(shown));
        }
        let coords = k.coords_at(&cf, j - 1, &alpha);
        if coords[1..].iter().any(|c| !c.is_zero()) {
            return Err(Error::ConstantFieldTooLarge(format!(
                "{shown} is a constant outside the designated constant field"
            )));
        }
        cf.alpha[j - 1] = Some(coords[0].clone());
    }
    k.constants = Some(Box::new(cf));

    let kernel = k.constant_kernel()?;
    if kernel.len() != 1 {
        return Err(Error::ConstantFieldTooLarge(format!(
            "ker d has dimension {} over the constant field",
            kernel.len()
        )));
    }
    Ok(k)
}

impl FieldTower {
    /// A `p`-th root of `a` at level `lvl`, if one is found.
    ///
    /// Exact on rational layers; on purely inseparable layers only roots
    /// coming from the layer below are detected.
    pub(crate) fn pth_root_at(&self, lvl: usize, a: &Element) -> Option<Element> {
        let p = self.characteristic() as usize;
        match a {
            Element::Modular(_) => Some(a.clone()),
            Element::Rational(_) => None,
            Element::Frac(f) => {
                let root = |c: &[Element]| -> Option<Vec<Element>> {
                    let mut out = Vec::new();
                    for (i, x) in c.iter().enumerate() {
                        if i % p != 0 {
                            if !x.is_zero() {
                                return None;
                            }
                            continue;
                        }
                        out.push(self.pth_root_at(lvl - 1, x)?);
                    }
                    Some(out)
                };
                let num = root(&f.num)?;
                let den = root(&f.den)?;
                Some(self.make_frac(lvl, num, den))
            }
            Element::Alg(c) => match c.len() {
                0 => Some(a.clone()),
                1 => self
                    .pth_root_at(lvl - 1, &c[0])
                    .map(|r| Element::Alg(vec![r])),
                _ => None,
            },
        }
    }
}
