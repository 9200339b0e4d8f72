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

//! List-based and canonical order dependencies.
//!
//! A list OD `X -> Y` says that sorting by `X` also sorts by `Y`. Every list
//! OD is equivalent to a finite set of canonical ODs, which come in two
//! forms: `X: [] |-> A` (A is constant inside each X-class) and `X: A ~ B`
//! (no swap between A and B inside any X-class). The quadratic functions in
//! this module follow the definitions literally and serve as the reference
//! semantics; [`validate_canonical`] is the partition-based fast path.

pub mod syntax;

use std::cmp::Ordering;
use std::collections::BTreeSet;

use crate::attrset::AttributeSet;
use crate::error::{Error, Result};
use crate::partitions::{
    check_constant, check_order_compatible, partition_of, sorted_partition, RowId,
};
use crate::relation::{AttrId, Relation};

/// A lexicographic order specification. May be empty.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrderSpec(Vec<AttrId>);

impl OrderSpec {
    /// Keeps the list as given, repeats included.
    pub fn new(attrs: Vec<AttrId>) -> Self {
        OrderSpec(attrs)
    }

    pub fn empty() -> Self {
        OrderSpec(Vec::new())
    }

    pub fn attrs(&self) -> &[AttrId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_set(&self) -> AttributeSet {
        self.0.iter().copied().collect()
    }

    /// Concatenation without normalization.
    pub fn concat(&self, other: &OrderSpec) -> OrderSpec {
        let mut attrs = self.0.clone();
        attrs.extend_from_slice(&other.0);
        OrderSpec(attrs)
    }

    fn check(&self, rel: &Relation) -> Result<()> {
        self.0.iter().try_for_each(|&a| rel.check_attr(a))
    }
}

impl From<Vec<AttrId>> for OrderSpec {
    fn from(attrs: Vec<AttrId>) -> Self {
        OrderSpec(attrs)
    }
}

/// Drops every repeat of an attribute after its first occurrence.
pub fn normalize_spec(spec: &OrderSpec) -> OrderSpec {
    let mut seen = AttributeSet::EMPTY;
    let mut out = Vec::with_capacity(spec.len());
    for &a in spec.attrs() {
        if !seen.contains(a) {
            seen = seen.with(a);
            out.push(a);
        }
    }
    OrderSpec(out)
}

/// `lhs -> rhs`: any order sorted by `lhs` is sorted by `rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ListOD {
    pub lhs: OrderSpec,
    pub rhs: OrderSpec,
}

impl ListOD {
    /// Both sides are normalized.
    pub fn new(lhs: OrderSpec, rhs: OrderSpec) -> Self {
        ListOD {
            lhs: normalize_spec(&lhs),
            rhs: normalize_spec(&rhs),
        }
    }

    pub fn to_text<S: AsRef<str>>(&self, names: &[S]) -> String {
        syntax::format_list(self, names)
    }
}

/// Right-hand side of a canonical OD.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum OdForm {
    /// `X: [] |-> A`
    Constant(AttrId),
    /// `X: A ~ B`, stored with `A < B`.
    OrderCompat(AttrId, AttrId),
}

/// A non-trivial canonical OD.
///
/// Ordering is by node size (context plus right-hand attributes), then
/// context, then constants before order-compatible forms, then attributes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalOD {
    context: AttributeSet,
    form: OdForm,
}

impl CanonicalOD {
    pub fn constant(context: AttributeSet, attr: AttrId) -> Result<Self> {
        if context.contains(attr) {
            return Err(Error::TrivialDependency(format!(
                "constant attribute #{attr} is in its own context"
            )));
        }
        Ok(CanonicalOD {
            context,
            form: OdForm::Constant(attr),
        })
    }

    /// Accepts the pair in either order.
    pub fn order_compat(context: AttributeSet, a: AttrId, b: AttrId) -> Result<Self> {
        if a == b {
            return Err(Error::TrivialDependency(format!(
                "attribute #{a} is compared with itself"
            )));
        }
        if context.contains(a) || context.contains(b) {
            return Err(Error::TrivialDependency(format!(
                "attribute #{} is in the context",
                if context.contains(a) { a } else { b }
            )));
        }
        Ok(CanonicalOD {
            context,
            form: OdForm::OrderCompat(a.min(b), a.max(b)),
        })
    }

    pub fn context(&self) -> AttributeSet {
        self.context
    }

    pub fn form(&self) -> OdForm {
        self.form
    }

    pub fn is_constant(&self) -> bool {
        matches!(self.form, OdForm::Constant(_))
    }

    /// Attributes on the right of the colon.
    pub fn attrs(&self) -> AttributeSet {
        match self.form {
            OdForm::Constant(a) => AttributeSet::single(a),
            OdForm::OrderCompat(a, b) => AttributeSet::single(a).with(b),
        }
    }

    /// The lattice node that certifies this OD: context plus attributes.
    pub fn node(&self) -> AttributeSet {
        self.context.union(self.attrs())
    }

    pub fn level(&self) -> usize {
        self.node().len()
    }

    pub fn to_text<S: AsRef<str>>(&self, names: &[S]) -> String {
        syntax::format_canonical(self, names)
    }

    fn check(&self, rel: &Relation) -> Result<()> {
        self.node().iter().try_for_each(|a| rel.check_attr(a))
    }
}

impl Ord for CanonicalOD {
    fn cmp(&self, other: &Self) -> Ordering {
        self.level()
            .cmp(&other.level())
            .then_with(|| self.context.cmp(&other.context))
            .then_with(|| self.form.cmp(&other.form))
    }
}

impl PartialOrd for CanonicalOD {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    Split,
    Swap,
}

/// The dependency a violation report was computed for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckedDependency {
    /// Rows equal on `lhs` must be equal on `rhs`.
    Split {
        lhs: AttributeSet,
        rhs: AttributeSet,
    },
    /// Rows equal on `context` must not order `a` and `b` oppositely.
    Swap {
        context: AttributeSet,
        a: AttrId,
        b: AttrId,
    },
}

/// Witness pairs for a failed check, as 1-based tuple ids `(s, t)` with
/// `s < t`, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ViolationReport {
    pub dependency: CheckedDependency,
    pub pairs: Vec<(usize, usize)>,
}

impl ViolationReport {
    pub fn kind(&self) -> ViolationKind {
        match self.dependency {
            CheckedDependency::Split { .. } => ViolationKind::Split,
            CheckedDependency::Swap { .. } => ViolationKind::Swap,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Lexicographic comparison of rows `s` and `t` under `spec`.
/// Attributes must belong to the relation.
pub fn lex_cmp(rel: &Relation, s: usize, t: usize, spec: &OrderSpec) -> Ordering {
    for &a in spec.attrs() {
        match rel.rank(s, a).cmp(&rel.rank(t, a)) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// `s ⪯ t` under `spec`. The empty spec relates every pair.
pub fn lex_leq(rel: &Relation, s: usize, t: usize, spec: &OrderSpec) -> Result<bool> {
    spec.check(rel)?;
    check_row(rel, s)?;
    check_row(rel, t)?;
    Ok(lex_cmp(rel, s, t, spec) != Ordering::Greater)
}

fn check_row(rel: &Relation, row: usize) -> Result<()> {
    if row < rel.row_count() {
        Ok(())
    } else {
        Err(Error::Schema(format!(
            "tuple index {} out of range for {} rows",
            row + 1,
            rel.row_count()
        )))
    }
}

/// Checks `lhs -> rhs` over all ordered row pairs.
pub fn satisfies_list_od(rel: &Relation, od: &ListOD) -> Result<bool> {
    od.lhs.check(rel)?;
    od.rhs.check(rel)?;
    let n = rel.row_count();
    for s in 0..n {
        for t in 0..n {
            if lex_cmp(rel, s, t, &od.lhs) != Ordering::Greater
                && lex_cmp(rel, s, t, &od.rhs) == Ordering::Greater
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `x <-> y`: each orders the other.
pub fn order_equivalent(rel: &Relation, x: &OrderSpec, y: &OrderSpec) -> Result<bool> {
    Ok(satisfies_list_od(rel, &ListOD::new(x.clone(), y.clone()))?
        && satisfies_list_od(rel, &ListOD::new(y.clone(), x.clone()))?)
}

/// `x ~ y`: `xy <-> yx`.
pub fn order_compatible(rel: &Relation, x: &OrderSpec, y: &OrderSpec) -> Result<bool> {
    order_equivalent(rel, &x.concat(y), &y.concat(x))
}

fn same_on(rel: &Relation, s: usize, t: usize, attrs: AttributeSet) -> bool {
    attrs.iter().all(|a| rel.rank(s, a) == rel.rank(t, a))
}

/// All pairs equal on `x` and different on `y`.
pub fn find_splits(rel: &Relation, x: AttributeSet, y: AttributeSet) -> Result<ViolationReport> {
    y.iter().try_for_each(|a| rel.check_attr(a))?;
    let classes = partition_of(rel, x)?;
    let mut pairs = Vec::new();
    for class in classes.classes() {
        for_each_pair(class, |s, t| {
            if !same_on(rel, s, t, y) {
                pairs.push((s + 1, t + 1));
            }
        });
    }
    pairs.sort_unstable();
    Ok(ViolationReport {
        dependency: CheckedDependency::Split { lhs: x, rhs: y },
        pairs,
    })
}

/// All pairs inside one context class ordered one way by `a` and strictly
/// the other way by `b`.
pub fn find_swaps(
    rel: &Relation,
    context: AttributeSet,
    a: AttrId,
    b: AttrId,
) -> Result<ViolationReport> {
    rel.check_attr(a)?;
    rel.check_attr(b)?;
    let classes = partition_of(rel, context)?;
    let mut pairs = Vec::new();
    for class in classes.classes() {
        for_each_pair(class, |s, t| {
            let on_a = rel.rank(s, a).cmp(&rel.rank(t, a));
            let on_b = rel.rank(s, b).cmp(&rel.rank(t, b));
            if on_a != Ordering::Equal && on_b == on_a.reverse() {
                pairs.push((s + 1, t + 1));
            }
        });
    }
    pairs.sort_unstable();
    Ok(ViolationReport {
        dependency: CheckedDependency::Swap { context, a, b },
        pairs,
    })
}

fn for_each_pair(class: &[RowId], mut f: impl FnMut(usize, usize)) {
    for (i, &s) in class.iter().enumerate() {
        for &t in &class[i + 1..] {
            f(s as usize, t as usize);
        }
    }
}

/// `context: [] |-> a` via partitions. Trivial forms hold.
pub fn validate_constant(rel: &Relation, context: AttributeSet, a: AttrId) -> Result<bool> {
    rel.check_attr(a)?;
    if context.contains(a) {
        return Ok(true);
    }
    let ctx = partition_of(rel, context)?;
    Ok(check_constant(&ctx, rel.ranks(a)))
}

/// `context: a ~ b` via partitions. Trivial forms hold.
pub fn validate_order_compat(
    rel: &Relation,
    context: AttributeSet,
    a: AttrId,
    b: AttrId,
) -> Result<bool> {
    rel.check_attr(a)?;
    rel.check_attr(b)?;
    if a == b || context.contains(a) || context.contains(b) {
        return Ok(true);
    }
    let ctx = partition_of(rel, context)?;
    let tau = sorted_partition(rel, a)?;
    Ok(check_order_compatible(&ctx, &tau, rel.ranks(b)))
}

pub fn validate_canonical(rel: &Relation, od: &CanonicalOD) -> Result<bool> {
    od.check(rel)?;
    match od.form() {
        OdForm::Constant(a) => validate_constant(rel, od.context(), a),
        OdForm::OrderCompat(a, b) => validate_order_compat(rel, od.context(), a, b),
    }
}

/// The canonical ODs equivalent to `od`, trivial members omitted.
///
/// For `X -> Y` these are `X: [] |-> Yj` for every `j`, and
/// `{X1..Xi-1, Y1..Yj-1}: Xi ~ Yj` for every `i`, `j`.
pub fn map_list_to_canonical(od: &ListOD) -> BTreeSet<CanonicalOD> {
    let x = normalize_spec(&od.lhs);
    let y = normalize_spec(&od.rhs);
    let x_set = x.to_set();
    let mut out = BTreeSet::new();
    for &yj in y.attrs() {
        if let Ok(c) = CanonicalOD::constant(x_set, yj) {
            out.insert(c);
        }
    }
    let mut x_prefix = AttributeSet::EMPTY;
    for &xi in x.attrs() {
        let mut y_prefix = AttributeSet::EMPTY;
        for &yj in y.attrs() {
            if let Ok(c) = CanonicalOD::order_compat(x_prefix.union(y_prefix), xi, yj) {
                out.insert(c);
            }
            y_prefix = y_prefix.with(yj);
        }
        x_prefix = x_prefix.with(xi);
    }
    out
}

/// Fast check of a list OD through its canonical mapping.
pub fn validate_list_od(rel: &Relation, od: &ListOD) -> Result<bool> {
    od.lhs.check(rel)?;
    od.rhs.check(rel)?;
    for c in map_list_to_canonical(od) {
        if !validate_canonical(rel, &c)? {
            return Ok(false);
        }
    }
    Ok(true)
}
