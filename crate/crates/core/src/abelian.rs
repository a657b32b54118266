//! Gain groups of the form `Z^r ⊕ Z_n1 ⊕ … ⊕ Z_nk ⊕ D^m`, where `D` is the
//! additive group of dyadic rationals (denominators powers of two).
//!
//! A [`GroupSpec`] describes the group; a [`GroupElement`] is a plain value
//! that only makes sense together with its spec, so the group law lives on
//! the spec. Torsion residues are always stored reduced, which makes
//! structural equality coincide with group equality.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;
use thiserror::Error;

use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("torsion order {0} is invalid (must be at least 2)")]
    InvalidTorsionOrder(u64),
    #[error("element does not conform to group {spec}: {reason}")]
    SpecMismatch { spec: String, reason: String },
    #[error("dyadic component {0} has a denominator that is not a power of two")]
    NotDyadic(String),
    #[error("cannot parse group spec {input:?}: {reason}")]
    ParseSpec { input: String, reason: String },
    #[error("cannot parse group element: {0}")]
    ParseElement(String),
}

/// A finitely generated abelian group, optionally with dyadic summands.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupSpec {
    free_rank: usize,
    torsion_orders: Vec<u64>,
    dyadic_rank: usize,
}

/// An element of some [`GroupSpec`], stored componentwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    pub free_part: Vec<BigInt>,
    pub torsion_part: Vec<u64>,
    pub dyadic_part: Vec<Rational>,
}

/// Order of a group element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ElementOrder {
    Finite(BigInt),
    Infinite,
}

impl GroupElement {
    pub fn is_identity(&self) -> bool {
        self.free_part.iter().all(Zero::is_zero)
            && self.torsion_part.iter().all(|&r| r == 0)
            && self.dyadic_part.iter().all(Zero::is_zero)
    }

    /// Flat JSON array: integers for free and torsion parts, `"p/q"` strings
    /// for dyadic parts.
    pub fn to_json(&self) -> Value {
        let mut out: Vec<Value> = self.free_part.iter().map(bigint_to_json).collect();
        out.extend(self.torsion_part.iter().map(|&r| Value::from(r)));
        out.extend(
            self.dyadic_part
                .iter()
                .map(|q| Value::String(format_rational(q))),
        );
        Value::Array(out)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .free_part
            .iter()
            .map(ToString::to_string)
            .chain(self.torsion_part.iter().map(ToString::to_string))
            .chain(self.dyadic_part.iter().map(format_rational))
            .collect();
        write!(f, "({})", parts.join(","))
    }
}

fn bigint_to_json(n: &BigInt) -> Value {
    match n.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(n.to_string()),
    }
}

fn json_to_bigint(v: &Value) -> Option<BigInt> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from),
        Value::String(s) => s.trim().parse().ok(),
        _ => None,
    }
}

pub(crate) fn is_power_of_two(n: &BigInt) -> bool {
    n.is_positive() && (n & (n - BigInt::one())).is_zero()
}

impl GroupSpec {
    pub fn new(
        free_rank: usize,
        torsion_orders: Vec<u64>,
        dyadic_rank: usize,
    ) -> Result<Self, GroupError> {
        if let Some(&bad) = torsion_orders.iter().find(|&&n| n < 2) {
            return Err(GroupError::InvalidTorsionOrder(bad));
        }
        Ok(GroupSpec {
            free_rank,
            torsion_orders,
            dyadic_rank,
        })
    }

    pub fn trivial() -> Self {
        GroupSpec::new(0, vec![], 0).unwrap()
    }

    /// `Z^r`.
    pub fn integers(rank: usize) -> Self {
        GroupSpec::new(rank, vec![], 0).unwrap()
    }

    /// `Z_n`; panics if `n < 2`.
    pub fn cyclic(n: u64) -> Self {
        GroupSpec::new(0, vec![n], 0).expect("cyclic order must be at least 2")
    }

    /// `D^m`.
    pub fn dyadic(rank: usize) -> Self {
        GroupSpec::new(0, vec![], rank).unwrap()
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion_orders(&self) -> &[u64] {
        &self.torsion_orders
    }

    pub fn dyadic_rank(&self) -> usize {
        self.dyadic_rank
    }

    /// Number of entries in the flat serialization of an element.
    pub fn width(&self) -> usize {
        self.free_rank + self.torsion_orders.len() + self.dyadic_rank
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement {
            free_part: vec![BigInt::zero(); self.free_rank],
            torsion_part: vec![0; self.torsion_orders.len()],
            dyadic_part: vec![Rational::zero(); self.dyadic_rank],
        }
    }

    /// Builds an element, reducing torsion residues and checking dyadic
    /// denominators.
    pub fn element(
        &self,
        free: Vec<BigInt>,
        torsion: Vec<BigInt>,
        dyadic: Vec<Rational>,
    ) -> Result<GroupElement, GroupError> {
        if free.len() != self.free_rank
            || torsion.len() != self.torsion_orders.len()
            || dyadic.len() != self.dyadic_rank
        {
            return Err(self.mismatch(format!(
                "component lengths ({}, {}, {}) do not match",
                free.len(),
                torsion.len(),
                dyadic.len()
            )));
        }
        if let Some(q) = dyadic.iter().find(|q| !is_power_of_two(q.denom())) {
            return Err(GroupError::NotDyadic(format_rational(q)));
        }
        let torsion_part = torsion
            .iter()
            .zip(&self.torsion_orders)
            .map(|(r, &n)| reduce(r, n))
            .collect();
        Ok(GroupElement {
            free_part: free,
            torsion_part,
            dyadic_part: dyadic,
        })
    }

    /// Convenience constructor from small integers; dyadic parts are given
    /// as `(numerator, denominator)` pairs.
    pub fn element_from_i64(
        &self,
        free: &[i64],
        torsion: &[i64],
        dyadic: &[(i64, i64)],
    ) -> Result<GroupElement, GroupError> {
        self.element(
            free.iter().map(|&x| BigInt::from(x)).collect(),
            torsion.iter().map(|&x| BigInt::from(x)).collect(),
            dyadic
                .iter()
                .map(|&(p, q)| Rational::new(p.into(), q.into()))
                .collect(),
        )
    }

    /// The `i`-th canonical generator in flat order (free, torsion, dyadic).
    pub fn generator(&self, i: usize) -> GroupElement {
        let mut e = self.identity();
        let t = self.torsion_orders.len();
        if i < self.free_rank {
            e.free_part[i] = BigInt::one();
        } else if i < self.free_rank + t {
            e.torsion_part[i - self.free_rank] = 1;
        } else {
            e.dyadic_part[i - self.free_rank - t] = Rational::one();
        }
        e
    }

    pub fn conforms(&self, a: &GroupElement) -> bool {
        a.free_part.len() == self.free_rank
            && a.torsion_part.len() == self.torsion_orders.len()
            && a.dyadic_part.len() == self.dyadic_rank
            && a.torsion_part
                .iter()
                .zip(&self.torsion_orders)
                .all(|(&r, &n)| r < n)
            && a.dyadic_part.iter().all(|q| is_power_of_two(q.denom()))
    }

    fn check(&self, a: &GroupElement) -> Result<(), GroupError> {
        if self.conforms(a) {
            Ok(())
        } else {
            Err(self.mismatch(format!("element {a} is not in this group")))
        }
    }

    fn mismatch(&self, reason: String) -> GroupError {
        GroupError::SpecMismatch {
            spec: self.to_string(),
            reason,
        }
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, b))
    }

    pub(crate) fn add_unchecked(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement {
            free_part: a
                .free_part
                .iter()
                .zip(&b.free_part)
                .map(|(x, y)| x + y)
                .collect(),
            torsion_part: a
                .torsion_part
                .iter()
                .zip(&b.torsion_part)
                .zip(&self.torsion_orders)
                .map(|((&x, &y), &n)| ((x as u128 + y as u128) % n as u128) as u64)
                .collect(),
            dyadic_part: a
                .dyadic_part
                .iter()
                .zip(&b.dyadic_part)
                .map(|(x, y)| x + y)
                .collect(),
        }
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add_unchecked(a, &self.negate(b)))
    }

    pub fn negate(&self, a: &GroupElement) -> GroupElement {
        GroupElement {
            free_part: a.free_part.iter().map(|x| -x).collect(),
            torsion_part: a
                .torsion_part
                .iter()
                .zip(&self.torsion_orders)
                .map(|(&r, &n)| if r == 0 { 0 } else { n - r })
                .collect(),
            dyadic_part: a.dyadic_part.iter().map(|q| -q).collect(),
        }
    }

    /// The `k`-fold sum of `a` (negative `k` scales the inverse).
    pub fn scale(&self, k: &BigInt, a: &GroupElement) -> GroupElement {
        let kq = Rational::from_integer(k.clone());
        GroupElement {
            free_part: a.free_part.iter().map(|x| k * x).collect(),
            torsion_part: a
                .torsion_part
                .iter()
                .zip(&self.torsion_orders)
                .map(|(&r, &n)| reduce(&(k * BigInt::from(r)), n))
                .collect(),
            dyadic_part: a.dyadic_part.iter().map(|q| &kq * q).collect(),
        }
    }

    /// Least `k ≥ 1` with `k·a = 0`, or [`ElementOrder::Infinite`].
    pub fn element_order(&self, a: &GroupElement) -> ElementOrder {
        if a.free_part.iter().any(|x| !x.is_zero()) || a.dyadic_part.iter().any(|q| !q.is_zero()) {
            return ElementOrder::Infinite;
        }
        let order =
            a.torsion_part
                .iter()
                .zip(&self.torsion_orders)
                .fold(BigInt::one(), |acc, (&r, &n)| {
                    let n = BigInt::from(n);
                    let component = &n / n.gcd(&BigInt::from(r));
                    acc.lcm(&component)
                });
        ElementOrder::Finite(order)
    }

    /// True iff some torsion order has an odd prime factor, i.e. the group
    /// has a nonzero element of odd order.
    pub fn has_odd_torsion(&self) -> bool {
        self.torsion_orders.iter().any(|&n| odd_part(n) > 1)
    }

    /// True iff some nonzero element is divisible by every power of two.
    ///
    /// In `Z_n` these elements form the odd-order subgroup, in `Z` only zero
    /// qualifies, and in the dyadic rationals every element does.
    pub fn has_nontrivial_inf_2_divisible(&self) -> bool {
        self.has_odd_torsion() || self.dyadic_rank > 0
    }

    /// Parses an element from its flat JSON array.
    pub fn element_from_json(&self, v: &Value) -> Result<GroupElement, GroupError> {
        let items = v
            .as_array()
            .ok_or_else(|| GroupError::ParseElement(format!("expected an array, got {v}")))?;
        if items.len() != self.width() {
            return Err(self.mismatch(format!(
                "expected {} entries, got {}",
                self.width(),
                items.len()
            )));
        }
        let t = self.torsion_orders.len();
        let ints = |slice: &[Value]| -> Result<Vec<BigInt>, GroupError> {
            slice
                .iter()
                .map(|x| {
                    json_to_bigint(x)
                        .ok_or_else(|| GroupError::ParseElement(format!("{x} is not an integer")))
                })
                .collect()
        };
        let free = ints(&items[..self.free_rank])?;
        let torsion = ints(&items[self.free_rank..self.free_rank + t])?;
        let dyadic = items[self.free_rank + t..]
            .iter()
            .map(|x| match x {
                Value::String(s) => {
                    parse_rational(s).map_err(|e| GroupError::ParseElement(e.to_string()))
                }
                Value::Number(n) => n
                    .as_i64()
                    .map(|i| Rational::from_integer(i.into()))
                    .ok_or_else(|| GroupError::ParseElement(format!("{n} is not an integer"))),
                other => Err(GroupError::ParseElement(format!(
                    "{other} is not a dyadic rational"
                ))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        self.element(free, torsion, dyadic)
    }
}

fn reduce(r: &BigInt, n: u64) -> u64 {
    r.mod_floor(&BigInt::from(n))
        .to_u64()
        .expect("residue fits")
}

fn odd_part(mut n: u64) -> u64 {
    while n.is_multiple_of(2) {
        n /= 2;
    }
    n
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut factors = Vec::new();
        match self.free_rank {
            0 => {}
            1 => factors.push("Z".to_string()),
            r => factors.push(format!("Z^{r}")),
        }
        factors.extend(self.torsion_orders.iter().map(|n| format!("Z_{n}")));
        match self.dyadic_rank {
            0 => {}
            1 => factors.push("D".to_string()),
            m => factors.push(format!("D^{m}")),
        }
        if factors.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", factors.join(" * "))
        }
    }
}

impl FromStr for GroupSpec {
    type Err = GroupError;

    /// Syntax: `Z^r * Z_n1 * ... * Z_nk * D^m`. Factors may repeat and
    /// appear in any order; `0` or an empty string is the trivial group.
    fn from_str(input: &str) -> Result<Self, Self::Err> {
        let err = |reason: &str| GroupError::ParseSpec {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let mut free = 0usize;
        let mut torsion = Vec::new();
        let mut dyadic = 0usize;
        let trimmed = input.trim();
        if trimmed.is_empty() || trimmed == "0" || trimmed == "1" {
            return Ok(GroupSpec::trivial());
        }
        for factor in trimmed.split('*').map(str::trim) {
            let exponent = |rest: &str| -> Result<usize, GroupError> {
                if rest.is_empty() {
                    Ok(1)
                } else if let Some(e) = rest.strip_prefix('^') {
                    e.trim().parse().map_err(|_| err("bad exponent"))
                } else {
                    Err(err(&format!("unexpected {rest:?}")))
                }
            };
            if let Some(n) = factor.strip_prefix("Z_") {
                let n: u64 = n.trim().parse().map_err(|_| err("bad torsion order"))?;
                if n < 2 {
                    return Err(GroupError::InvalidTorsionOrder(n));
                }
                torsion.push(n);
            } else if let Some(rest) = factor.strip_prefix('Z') {
                free += exponent(rest.trim())?;
            } else if let Some(rest) = factor.strip_prefix('D') {
                dyadic += exponent(rest.trim())?;
            } else {
                return Err(err(&format!("unknown factor {factor:?}")));
            }
        }
        GroupSpec::new(free, torsion, dyadic)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use proptest::prelude::*;

    /// Brute force: intersection of `2^k Z_n` over all k, as a set.
    fn inf_2_divisible_in_cyclic(n: u64) -> Vec<u64> {
        let mut current: Vec<u64> = (0..n).collect();
        loop {
            let mut next: Vec<u64> = current.iter().map(|x| (2 * x) % n).collect();
            next.sort_unstable();
            next.dedup();
            if next == current {
                return current;
            }
            current = next;
        }
    }

    #[test]
    fn addition_examples() {
        let z5 = GroupSpec::cyclic(5);
        let a = z5.element_from_i64(&[], &[3], &[]).unwrap();
        let b = z5.element_from_i64(&[], &[4], &[]).unwrap();
        assert_eq!(z5.add(&a, &b).unwrap().torsion_part, vec![2]);

        let z2 = GroupSpec::integers(2);
        let a = z2.element_from_i64(&[1, -2], &[], &[]).unwrap();
        let b = z2.element_from_i64(&[0, 2], &[], &[]).unwrap();
        assert_eq!(
            z2.add(&a, &b).unwrap(),
            z2.element_from_i64(&[1, 0], &[], &[]).unwrap()
        );

        let d = GroupSpec::dyadic(1);
        let a = d.element_from_i64(&[], &[], &[(1, 2)]).unwrap();
        let b = d.element_from_i64(&[], &[], &[(3, 4)]).unwrap();
        assert_eq!(d.add(&a, &b).unwrap().dyadic_part, vec![ratio(5, 4)]);
    }

    #[test]
    fn negate_scale_identity() {
        let z4 = GroupSpec::cyclic(4);
        let three = z4.element_from_i64(&[], &[3], &[]).unwrap();
        assert_eq!(z4.negate(&three).torsion_part, vec![1]);

        let d = GroupSpec::dyadic(1);
        let half = d.element_from_i64(&[], &[], &[(1, 2)]).unwrap();
        assert_eq!(
            d.scale(&BigInt::from(2), &half).dyadic_part,
            vec![ratio(1, 1)]
        );

        assert!(GroupSpec::integers(2).identity().is_identity());
    }

    #[test]
    fn spec_mismatch_is_an_error() {
        let z5 = GroupSpec::cyclic(5);
        let z2 = GroupSpec::integers(2);
        let a = z5.identity();
        let b = z2.identity();
        assert!(matches!(
            z5.add(&a, &b),
            Err(GroupError::SpecMismatch { .. })
        ));
    }

    #[test]
    fn non_dyadic_rejected() {
        let d = GroupSpec::dyadic(1);
        assert!(matches!(
            d.element_from_i64(&[], &[], &[(1, 3)]),
            Err(GroupError::NotDyadic(_))
        ));
    }

    #[test]
    fn odd_torsion_examples() {
        assert!(GroupSpec::cyclic(5).has_odd_torsion());
        assert!(!GroupSpec::new(3, vec![4], 0).unwrap().has_odd_torsion());
        assert!(GroupSpec::cyclic(6).has_odd_torsion());
    }

    #[test]
    fn inf_2_divisible_examples() {
        assert!(!GroupSpec::integers(2).has_nontrivial_inf_2_divisible());
        assert!(GroupSpec::dyadic(1).has_nontrivial_inf_2_divisible());
        assert!(GroupSpec::cyclic(12).has_nontrivial_inf_2_divisible());
        assert_eq!(inf_2_divisible_in_cyclic(12), vec![0, 4, 8]);
    }

    #[test]
    fn inf_2_divisible_matches_brute_force_on_small_cyclic_groups() {
        for n in 2..=64 {
            let brute = inf_2_divisible_in_cyclic(n).len() > 1;
            assert_eq!(
                GroupSpec::cyclic(n).has_nontrivial_inf_2_divisible(),
                brute,
                "Z_{n}"
            );
        }
    }

    #[test]
    fn element_order_examples() {
        let z6 = GroupSpec::cyclic(6);
        let two = z6.element_from_i64(&[], &[2], &[]).unwrap();
        assert_eq!(z6.element_order(&two), ElementOrder::Finite(3.into()));
        let z2 = GroupSpec::integers(2);
        let e = z2.element_from_i64(&[1, 0], &[], &[]).unwrap();
        assert_eq!(z2.element_order(&e), ElementOrder::Infinite);
        assert_eq!(
            z2.element_order(&z2.identity()),
            ElementOrder::Finite(1.into())
        );
    }

    #[test]
    fn spec_string_round_trip() {
        let spec: GroupSpec = "Z^2 * Z_4 * Z_3 * D".parse().unwrap();
        assert_eq!(spec, GroupSpec::new(2, vec![4, 3], 1).unwrap());
        assert_eq!(spec.to_string(), "Z^2 * Z_4 * Z_3 * D");
        assert_eq!("Z".parse::<GroupSpec>().unwrap(), GroupSpec::integers(1));
        assert_eq!("0".parse::<GroupSpec>().unwrap(), GroupSpec::trivial());
        assert!("Z_1".parse::<GroupSpec>().is_err());
        assert!("Q^2".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn element_json_round_trip() {
        let spec: GroupSpec = "Z * Z_4 * D".parse().unwrap();
        let e = spec.element_from_i64(&[-7], &[6], &[(3, 8)]).unwrap();
        let json = e.to_json();
        assert_eq!(json.to_string(), r#"[-7,2,"3/8"]"#);
        assert_eq!(spec.element_from_json(&json).unwrap(), e);
    }

    fn spec_strategy() -> impl Strategy<Value = GroupSpec> {
        (0usize..3, prop::collection::vec(2u64..13, 0..3), 0usize..2)
            .prop_map(|(r, t, m)| GroupSpec::new(r, t, m).unwrap())
    }

    fn element_strategy(spec: GroupSpec) -> impl Strategy<Value = GroupElement> {
        let (r, t, m) = (
            spec.free_rank(),
            spec.torsion_orders().len(),
            spec.dyadic_rank(),
        );
        (
            prop::collection::vec(-20i64..20, r),
            prop::collection::vec(-20i64..20, t),
            prop::collection::vec((-20i64..20, 0u32..4), m),
        )
            .prop_map(move |(f, tor, d)| {
                let d: Vec<(i64, i64)> = d.into_iter().map(|(p, e)| (p, 1i64 << e)).collect();
                spec.element_from_i64(&f, &tor, &d).unwrap()
            })
    }

    proptest! {
        #[test]
        fn group_axioms(
            (spec, a, b, c) in spec_strategy().prop_flat_map(|s| {
                (Just(s.clone()), element_strategy(s.clone()), element_strategy(s.clone()), element_strategy(s))
            })
        ) {
            let ab = spec.add(&a, &b).unwrap();
            prop_assert_eq!(&ab, &spec.add(&b, &a).unwrap());
            let ab_c = spec.add(&ab, &c).unwrap();
            let a_bc = spec.add(&a, &spec.add(&b, &c).unwrap()).unwrap();
            prop_assert_eq!(ab_c, a_bc);
            prop_assert!(spec.add(&a, &spec.negate(&a)).unwrap().is_identity());
            prop_assert!(spec.add(&spec.negate(&a), &a).unwrap().is_identity());
            for (i, &n) in spec.torsion_orders().iter().enumerate() {
                let g = spec.generator(spec.free_rank() + i);
                prop_assert!(spec.scale(&BigInt::from(n), &g).is_identity());
            }
        }

        #[test]
        fn no_odd_torsion_and_no_dyadic_means_no_inf_2_divisible(spec in spec_strategy()) {
            if !spec.has_odd_torsion() && spec.dyadic_rank() == 0 {
                prop_assert!(!spec.has_nontrivial_inf_2_divisible());
            }
        }
    }
}
