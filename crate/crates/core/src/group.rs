//! The group interface gain graphs are generic over.
//!
//! [`GroupSpec`] is the main instance. Two further abelian groups are needed
//! by the geometric pipeline: rational vectors under addition and nonzero
//! rationals under multiplication. Neither is finitely generated, so they
//! get their own small types instead of being squeezed into a spec.

use std::fmt::Debug;

use num_traits::{One, Zero};
use serde_json::Value;

use crate::abelian::{GroupElement, GroupSpec};
use crate::rational::{format_rational, parse_rational, Rational};

/// An abelian group with decidable equality, written multiplicatively in
/// the method names (`op`, `inverse`) but additive for [`GroupSpec`].
pub trait GainGroup: Clone + Debug {
    type Elem: Clone + PartialEq + Debug;

    fn identity(&self) -> Self::Elem;
    fn op(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inverse(&self, a: &Self::Elem) -> Self::Elem;
    fn conforms(&self, a: &Self::Elem) -> bool;

    fn is_identity(&self, a: &Self::Elem) -> bool {
        *a == self.identity()
    }

    /// `a⁻¹ · b`, the "difference" from `a` to `b`.
    fn between(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.op(&self.inverse(a), b)
    }

    fn describe(&self) -> String;
    fn elem_to_json(&self, a: &Self::Elem) -> Value;
    fn elem_from_json(&self, v: &Value) -> Result<Self::Elem, String>;
}

impl GainGroup for GroupSpec {
    type Elem = GroupElement;

    fn identity(&self) -> GroupElement {
        GroupSpec::identity(self)
    }

    fn op(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add_unchecked(a, b)
    }

    fn inverse(&self, a: &GroupElement) -> GroupElement {
        self.negate(a)
    }

    fn conforms(&self, a: &GroupElement) -> bool {
        GroupSpec::conforms(self, a)
    }

    fn is_identity(&self, a: &GroupElement) -> bool {
        a.is_identity()
    }

    fn describe(&self) -> String {
        self.to_string()
    }

    fn elem_to_json(&self, a: &GroupElement) -> Value {
        a.to_json()
    }

    fn elem_from_json(&self, v: &Value) -> Result<GroupElement, String> {
        self.element_from_json(v).map_err(|e| e.to_string())
    }
}

/// `Q^dim` under addition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RationalVectors {
    pub dim: usize,
}

impl GainGroup for RationalVectors {
    type Elem = Vec<Rational>;

    fn identity(&self) -> Vec<Rational> {
        vec![Rational::zero(); self.dim]
    }

    fn op(&self, a: &Vec<Rational>, b: &Vec<Rational>) -> Vec<Rational> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn inverse(&self, a: &Vec<Rational>) -> Vec<Rational> {
        a.iter().map(|x| -x).collect()
    }

    fn conforms(&self, a: &Vec<Rational>) -> bool {
        a.len() == self.dim
    }

    fn describe(&self) -> String {
        format!("Q^{}", self.dim)
    }

    fn elem_to_json(&self, a: &Vec<Rational>) -> Value {
        Value::Array(
            a.iter()
                .map(|q| Value::String(format_rational(q)))
                .collect(),
        )
    }

    fn elem_from_json(&self, v: &Value) -> Result<Vec<Rational>, String> {
        let items = v
            .as_array()
            .ok_or_else(|| format!("expected an array of rationals, got {v}"))?;
        if items.len() != self.dim {
            return Err(format!(
                "expected {} entries, got {}",
                self.dim,
                items.len()
            ));
        }
        items.iter().map(rational_from_json).collect()
    }
}

/// Nonzero rationals under multiplication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct NonzeroRationals;

impl GainGroup for NonzeroRationals {
    type Elem = Rational;

    fn identity(&self) -> Rational {
        Rational::one()
    }

    fn op(&self, a: &Rational, b: &Rational) -> Rational {
        a * b
    }

    fn inverse(&self, a: &Rational) -> Rational {
        a.recip()
    }

    fn conforms(&self, a: &Rational) -> bool {
        !a.is_zero()
    }

    fn describe(&self) -> String {
        "Q*".to_string()
    }

    fn elem_to_json(&self, a: &Rational) -> Value {
        Value::String(format_rational(a))
    }

    fn elem_from_json(&self, v: &Value) -> Result<Rational, String> {
        let q = rational_from_json(v)?;
        if q.is_zero() {
            return Err("zero is not a multiplicative gain".to_string());
        }
        Ok(q)
    }
}

pub(crate) fn rational_from_json(v: &Value) -> Result<Rational, String> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| e.to_string()),
        Value::Number(n) => n
            .as_i64()
            .map(|i| Rational::from_integer(i.into()))
            .ok_or_else(|| format!("{n} is not an integer; write rationals as \"p/q\"")),
        other => Err(format!("expected a rational, got {other}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    #[test]
    fn multiplicative_inverse() {
        let g = NonzeroRationals;
        let a = ratio(-3, 4);
        assert!(g.is_identity(&g.op(&a, &g.inverse(&a))));
        assert_eq!(g.between(&rat(2), &rat(6)), rat(3));
        assert!(!g.conforms(&rat(0)));
    }

    #[test]
    fn vector_json_round_trip() {
        let g = RationalVectors { dim: 2 };
        let a = vec![ratio(1, 3), rat(-2)];
        assert_eq!(g.elem_from_json(&g.elem_to_json(&a)).unwrap(), a);
        assert!(g.elem_from_json(&serde_json::json!([1])).is_err());
    }
}
