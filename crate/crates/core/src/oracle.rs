// Copyright 2026 The orderdeps Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Brute-force reference implementations.
//!
//! Everything here works on the parsed values with a comparator of its own
//! and scans all tuple pairs directly. Nothing is shared with the rank
//! encoding or the partition code, so a bug there shows up as a mismatch.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::attrset::AttributeSet;
use crate::error::{Error, Result};
use crate::inference::ODSet;
use crate::odmodel::{CanonicalOD, ListOD, OdForm};
use crate::relation::{AttrId, NullPolicy, Relation, Value};

pub const DEFAULT_CHECK_BUDGET: u64 = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    /// Largest node size (context plus right-hand attributes).
    pub max_level: usize,
    /// Cap on distinct candidate validations; `None` for no cap.
    pub check_budget: Option<u64>,
}

impl OracleConfig {
    pub fn for_relation(rel: &Relation) -> Self {
        OracleConfig {
            max_level: rel.attr_count(),
            check_budget: Some(DEFAULT_CHECK_BUDGET),
        }
    }
}

fn compare(x: &Value, y: &Value, nulls: NullPolicy) -> Ordering {
    let null_side = match nulls {
        NullPolicy::NullsFirst => Ordering::Less,
        NullPolicy::NullsLast | NullPolicy::Reject => Ordering::Greater,
    };
    match (x, y) {
        (Value::Null, Value::Null) => Ordering::Equal,
        (Value::Null, _) => null_side,
        (_, Value::Null) => null_side.reverse(),
        (Value::Integer(a), Value::Integer(b)) => a.cmp(b),
        (Value::Float(a), Value::Float(b)) => a.partial_cmp(b).expect("NaN is rejected at load"),
        (Value::Text(a), Value::Text(b)) => a.chars().cmp(b.chars()),
        (Value::Date(a), Value::Date(b)) => a.cmp(b),
        (a, b) => panic!("values of different types in one column: {a:?} vs {b:?}"),
    }
}

struct Raw<'a> {
    rel: &'a Relation,
    nulls: NullPolicy,
}

impl Raw<'_> {
    fn cmp(&self, s: usize, t: usize, a: AttrId) -> Ordering {
        compare(self.rel.value(s, a), self.rel.value(t, a), self.nulls)
    }

    fn agree(&self, s: usize, t: usize, attrs: AttributeSet) -> bool {
        attrs.iter().all(|a| self.cmp(s, t, a) == Ordering::Equal)
    }

    fn lex(&self, s: usize, t: usize, spec: &[AttrId]) -> Ordering {
        spec.iter()
            .map(|&a| self.cmp(s, t, a))
            .find(|o| *o != Ordering::Equal)
            .unwrap_or(Ordering::Equal)
    }

    fn constant_holds(&self, context: AttributeSet, a: AttrId) -> bool {
        let n = self.rel.row_count();
        (0..n).all(|s| {
            (s + 1..n).all(|t| !self.agree(s, t, context) || self.cmp(s, t, a) == Ordering::Equal)
        })
    }

    fn order_compat_holds(&self, context: AttributeSet, a: AttrId, b: AttrId) -> bool {
        let n = self.rel.row_count();
        (0..n).all(|s| {
            (s + 1..n).all(|t| {
                if !self.agree(s, t, context) {
                    return true;
                }
                let on_a = self.cmp(s, t, a);
                let on_b = self.cmp(s, t, b);
                !(on_a == Ordering::Less && on_b == Ordering::Greater
                    || on_a == Ordering::Greater && on_b == Ordering::Less)
            })
        })
    }
}

fn raw(rel: &Relation) -> Raw<'_> {
    Raw {
        rel,
        nulls: rel.schema().null_policy(),
    }
}

fn check_attrs(rel: &Relation, attrs: impl IntoIterator<Item = AttrId>) -> Result<()> {
    for a in attrs {
        if a >= rel.attr_count() {
            return Err(Error::UnknownAttribute(format!("#{a}")));
        }
    }
    Ok(())
}

/// Pairwise check of a canonical OD.
pub fn brute_validate_canonical(rel: &Relation, od: &CanonicalOD) -> Result<bool> {
    check_attrs(rel, od.context().iter().chain(od.attrs().iter()))?;
    let r = raw(rel);
    Ok(match od.form() {
        OdForm::Constant(a) => r.constant_holds(od.context(), a),
        OdForm::OrderCompat(a, b) => r.order_compat_holds(od.context(), a, b),
    })
}

/// Pairwise check of a list OD: for every ordered pair, `s ⪯ t` on the left
/// implies `s ⪯ t` on the right.
pub fn brute_validate_list(rel: &Relation, od: &ListOD) -> Result<bool> {
    check_attrs(rel, od.lhs.attrs().iter().chain(od.rhs.attrs()).copied())?;
    let r = raw(rel);
    let n = rel.row_count();
    for s in 0..n {
        for t in 0..n {
            if r.lex(s, t, od.lhs.attrs()) != Ordering::Greater
                && r.lex(s, t, od.rhs.attrs()) == Ordering::Greater
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Candidate {
    Constant(AttributeSet, AttrId),
    Pair(AttributeSet, AttrId, AttrId),
}

struct Memo<'a> {
    raw: Raw<'a>,
    seen: HashMap<Candidate, bool>,
    budget: Option<u64>,
}

impl Memo<'_> {
    fn holds(&mut self, c: Candidate) -> Result<bool> {
        if let Some(&v) = self.seen.get(&c) {
            return Ok(v);
        }
        if let Some(b) = self.budget {
            if self.seen.len() as u64 >= b {
                return Err(Error::BudgetExceeded(b));
            }
        }
        let v = match c {
            Candidate::Constant(x, a) => x.contains(a) || self.raw.constant_holds(x, a),
            Candidate::Pair(x, a, b) => {
                a == b || x.contains(a) || x.contains(b) || self.raw.order_compat_holds(x, a, b)
            }
        };
        self.seen.insert(c, v);
        Ok(v)
    }

    fn constant(&mut self, x: AttributeSet, a: AttrId) -> Result<bool> {
        self.holds(Candidate::Constant(x, a))
    }

    fn pair(&mut self, x: AttributeSet, a: AttrId, b: AttrId) -> Result<bool> {
        self.holds(Candidate::Pair(x, a, b))
    }

    /// Some attribute of the context is determined by the rest of it.
    fn reducible(&mut self, x: AttributeSet) -> Result<bool> {
        for c in x.iter() {
            if self.constant(x.without(c), c)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn minimal_constant(&mut self, x: AttributeSet, a: AttrId) -> Result<bool> {
        for y in x.subsets() {
            if y != x && self.constant(y, a)? {
                return Ok(false);
            }
        }
        Ok(!self.reducible(x)?)
    }

    fn minimal_pair(&mut self, x: AttributeSet, a: AttrId, b: AttrId) -> Result<bool> {
        for y in x.subsets() {
            if y != x && self.pair(y, a, b)? {
                return Ok(false);
            }
        }
        if self.constant(x, a)? || self.constant(x, b)? {
            return Ok(false);
        }
        Ok(!self.reducible(x)?)
    }
}

/// All valid, minimal canonical ODs whose node size is at most
/// `cfg.max_level`, found by enumerating every context.
pub fn brute_discover(rel: &Relation, cfg: &OracleConfig) -> Result<ODSet> {
    let n_attrs = rel.attr_count();
    let max_level = cfg.max_level.min(n_attrs);
    let universe = AttributeSet::full(n_attrs);
    let mut memo = Memo {
        raw: raw(rel),
        seen: HashMap::new(),
        budget: cfg.check_budget,
    };
    let mut out = ODSet::new(universe);
    for x in universe.subsets() {
        let outside: Vec<AttrId> = universe.difference(x).iter().collect();
        if x.len() < max_level {
            for &a in &outside {
                if memo.constant(x, a)? && memo.minimal_constant(x, a)? {
                    out.insert(CanonicalOD::constant(x, a)?);
                }
            }
        }
        if x.len() + 1 < max_level {
            for (i, &a) in outside.iter().enumerate() {
                for &b in &outside[i + 1..] {
                    if memo.pair(x, a, b)? && memo.minimal_pair(x, a, b)? {
                        out.insert(CanonicalOD::order_compat(x, a, b)?);
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::odmodel::OrderSpec;
    use crate::relation::{Attribute, DataType, Schema};
    use crate::test_support::{attr, attrs, taxes};

    #[test]
    fn taxes_examples() {
        let r = taxes();
        let oc = CanonicalOD::order_compat(attrs(&["yr"]), attr("bin"), attr("sal")).unwrap();
        assert!(brute_validate_canonical(&r, &oc).unwrap());
        let c = CanonicalOD::constant(attrs(&["posit"]), attr("sal")).unwrap();
        assert!(!brute_validate_canonical(&r, &c).unwrap());
        let list = |l: &[&str], rr: &[&str]| {
            ListOD::new(
                OrderSpec::new(l.iter().map(|n| attr(n)).collect()),
                OrderSpec::new(rr.iter().map(|n| attr(n)).collect()),
            )
        };
        assert!(brute_validate_list(&r, &list(&["sal"], &["tax"])).unwrap());
        assert!(!brute_validate_list(&r, &list(&["sal"], &["subg"])).unwrap());
    }

    #[test]
    fn one_row_satisfies_everything() {
        let r = Relation::from_int_columns(&["A", "B"], vec![vec![3], vec![1]]).unwrap();
        let c = CanonicalOD::constant(AttributeSet::EMPTY, 0).unwrap();
        let o = CanonicalOD::order_compat(AttributeSet::EMPTY, 0, 1).unwrap();
        assert!(brute_validate_canonical(&r, &c).unwrap());
        assert!(brute_validate_canonical(&r, &o).unwrap());
    }

    #[test]
    fn empty_list_lhs_requires_constant_rhs() {
        let r = Relation::from_int_columns(&["A", "B"], vec![vec![1, 2], vec![5, 5]]).unwrap();
        let od = |rhs| ListOD::new(OrderSpec::empty(), OrderSpec::new(vec![rhs]));
        assert!(!brute_validate_list(&r, &od(0)).unwrap());
        assert!(brute_validate_list(&r, &od(1)).unwrap());
    }

    #[test]
    fn two_row_example() {
        let r = Relation::from_int_columns(&["A", "B"], vec![vec![1, 2], vec![1, 2]]).unwrap();
        let m = brute_discover(&r, &OracleConfig::for_relation(&r)).unwrap();
        let got: Vec<_> = m.iter().copied().collect();
        assert_eq!(
            got,
            vec![
                CanonicalOD::order_compat(AttributeSet::EMPTY, 0, 1).unwrap(),
                CanonicalOD::constant(AttributeSet::single(0), 1).unwrap(),
                CanonicalOD::constant(AttributeSet::single(1), 0).unwrap(),
            ]
        );
    }

    #[test]
    fn constant_column_only_at_the_root() {
        let r =
            Relation::from_int_columns(&["A", "B"], vec![vec![4, 4, 4], vec![1, 3, 2]]).unwrap();
        let m = brute_discover(&r, &OracleConfig::for_relation(&r)).unwrap();
        let constants_of_a: Vec<_> = m
            .iter()
            .filter(|od| od.form() == OdForm::Constant(0))
            .collect();
        assert_eq!(
            constants_of_a,
            vec![&CanonicalOD::constant(AttributeSet::EMPTY, 0).unwrap()]
        );
    }

    #[test]
    fn budget_is_enforced() {
        let r = taxes();
        let cfg = OracleConfig {
            max_level: 9,
            check_budget: Some(10),
        };
        assert!(matches!(
            brute_discover(&r, &cfg),
            Err(Error::BudgetExceeded(10))
        ));
    }

    #[test]
    fn nulls_follow_the_policy() {
        let schema = |p| {
            Schema::new(
                vec![
                    Attribute::new("A", DataType::Integer),
                    Attribute::new("B", DataType::Integer),
                ],
                p,
            )
            .unwrap()
        };
        let rows = || {
            vec![
                vec![Value::Null, Value::Integer(0)],
                vec![Value::Integer(1), Value::Integer(1)],
            ]
        };
        let od = CanonicalOD::order_compat(AttributeSet::EMPTY, 0, 1).unwrap();
        let first = Relation::from_rows(schema(NullPolicy::NullsFirst), rows()).unwrap();
        assert!(brute_validate_canonical(&first, &od).unwrap());
        let last = Relation::from_rows(schema(NullPolicy::NullsLast), rows()).unwrap();
        assert!(!brute_validate_canonical(&last, &od).unwrap());
    }

    #[test]
    fn taxes_agrees_with_discovery() {
        let r = taxes();
        let m = brute_discover(&r, &OracleConfig::for_relation(&r)).unwrap();
        assert_eq!(m, crate::discovery::fastod(&r, None).minimal_ods);
    }
}
