//! Canonical text form of elements, e.g. `(2*x^2+1)/(x^3+2)`.

use num_traits::One;

use super::{BaseField, Element, FieldTower};

/// `true` if `s` has no `+` or `-` outside parentheses, apart from a leading
/// sign; such strings can be used as factors without parentheses.
pub(crate) fn is_atomic(s: &str) -> bool {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            '+' | '-' if depth == 0 && i > 0 => return false,
            _ => {}
        }
    }
    true
}

impl FieldTower {
    pub fn format(&self, a: &Element) -> String {
        self.format_at(self.depth(), a)
    }

    pub(crate) fn format_at(&self, lvl: usize, a: &Element) -> String {
        match a {
            Element::Modular(x) => x.to_string(),
            Element::Rational(x) => {
                if x.denom().is_one() {
                    x.numer().to_string()
                } else {
                    format!("{}/{}", x.numer(), x.denom())
                }
            }
            Element::Frac(f) => {
                let name = &self.layers[lvl - 1].name;
                let num = self.format_poly(lvl - 1, &f.num, name);
                if f.den.len() == 1 {
                    // monic constant denominator is 1
                    num
                } else {
                    format!("({})/({})", num, self.format_poly(lvl - 1, &f.den, name))
                }
            }
            Element::Alg(c) => self.format_poly(lvl - 1, c, &self.layers[lvl - 1].name),
        }
    }

    /// Polynomial in `var` with level-`lvl` coefficients, highest degree first.
    fn format_poly(&self, lvl: usize, c: &[Element], var: &str) -> String {
        let mut out = String::new();
        for (i, x) in c.iter().enumerate().rev() {
            if x.is_zero() {
                continue;
            }
            let cs = self.format_at(lvl, x);
            // a constant term is appended as is; `+` and `-` associate
            let term = if i == 0 {
                cs
            } else {
                let mono = if i == 1 { var.to_string() } else { format!("{var}^{i}") };
                if self.is_one(x) {
                    mono
                } else if cs == "-1" {
                    format!("-{mono}")
                } else if is_atomic(&cs) {
                    format!("{cs}*{mono}")
                } else {
                    format!("({cs})*{mono}")
                }
            };
            if !out.is_empty() && !term.starts_with('-') {
                out.push('+');
            }
            out.push_str(&term);
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Short name of the base field, `Q` or `F<p>`.
    pub fn base_name(&self) -> String {
        match self.base {
            BaseField::Rationals => "Q".into(),
            BaseField::Prime(p) => format!("F{p}"),
        }
    }

    /// Human-readable field name such as `F3(x)` or `F3(x)(u)`.
    pub fn field_name(&self) -> String {
        let mut s = self.base_name();
        for l in &self.layers {
            s.push_str(&format!("({})", l.name));
        }
        s
    }
}
