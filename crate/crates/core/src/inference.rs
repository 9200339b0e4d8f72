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

//! Forward chaining over the set-based axioms for canonical ODs.
//!
//! Rules (trivial ODs are never stored; they hold implicitly):
//!
//! | rule | premises | conclusion |
//! |---|---|---|
//! | Reflexivity | | `X: [] |-> A`, `A ∈ X` |
//! | Identity | | `X: A ~ A` |
//! | Commutativity | `X: A ~ B` | `X: B ~ A` |
//! | Strengthen | `X: [] |-> A`, `XA: [] |-> B` | `X: [] |-> B` |
//! | Propagate | `X: [] |-> A` | `X: A ~ B` |
//! | Augmentation-I | `X: [] |-> A` | `ZX: [] |-> A` |
//! | Augmentation-II | `X: A ~ B` | `ZX: A ~ B` |
//! | Chain | `X: A ~ B1`, `X: Bi ~ Bi+1`, `X: Bn ~ C`, `XBi: A ~ C` | `X: A ~ C` |
//!
//! Commutativity is structural (pairs are stored sorted), so only the last
//! five rules produce new members.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use crate::attrset::AttributeSet;
use crate::error::{Error, Result};
use crate::odmodel::{validate_constant, validate_order_compat, CanonicalOD, OdForm};
use crate::relation::{AttrId, Relation};

/// Bounds on the search. The Chain rule is instantiated with at most
/// `max_chain_length` intermediate attributes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DerivationLimit {
    pub max_context_size: usize,
    pub max_chain_length: usize,
}

impl Default for DerivationLimit {
    fn default() -> Self {
        DerivationLimit {
            max_context_size: usize::MAX,
            max_chain_length: 3,
        }
    }
}

impl DerivationLimit {
    /// Limits that cut nothing off for the given universe.
    pub fn unbounded(universe: AttributeSet) -> Self {
        DerivationLimit {
            max_context_size: universe.len(),
            max_chain_length: universe.len(),
        }
    }

    /// True when closure under these limits is the full set of implied ODs.
    pub fn is_exhaustive(&self, universe: AttributeSet) -> bool {
        self.max_context_size >= universe.len()
            && self.max_chain_length >= universe.len().saturating_sub(2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    Premise,
    Strengthen,
    Propagate,
    AugmentationI,
    AugmentationII,
    Chain,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Premise => "premise",
            Rule::Strengthen => "Strengthen",
            Rule::Propagate => "Propagate",
            Rule::AugmentationI => "Augmentation-I",
            Rule::AugmentationII => "Augmentation-II",
            Rule::Chain => "Chain",
        })
    }
}

/// One step of a derivation. Trivial premises are left implicit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub conclusion: CanonicalOD,
    pub rule: Rule,
    pub premises: Vec<CanonicalOD>,
}

/// A duplicate-free set of canonical ODs over a fixed universe.
#[derive(Clone, Debug)]
pub struct ODSet {
    universe: AttributeSet,
    ods: BTreeSet<CanonicalOD>,
    consts: HashMap<AttributeSet, AttributeSet>,
    ocs: BTreeMap<AttributeSet, BTreeSet<(AttrId, AttrId)>>,
}

impl PartialEq for ODSet {
    fn eq(&self, other: &Self) -> bool {
        self.universe == other.universe && self.ods == other.ods
    }
}

impl Eq for ODSet {}

impl ODSet {
    pub fn new(universe: AttributeSet) -> Self {
        ODSet {
            universe,
            ods: BTreeSet::new(),
            consts: HashMap::new(),
            ocs: BTreeMap::new(),
        }
    }

    pub fn from_ods(
        universe: AttributeSet,
        ods: impl IntoIterator<Item = CanonicalOD>,
    ) -> Result<Self> {
        let mut set = ODSet::new(universe);
        for od in ods {
            if !od.node().is_subset(universe) {
                return Err(Error::UnknownAttribute(format!(
                    "{:?} lies outside the universe {:?}",
                    od.node(),
                    universe
                )));
            }
            set.insert(od);
        }
        Ok(set)
    }

    pub fn universe(&self) -> AttributeSet {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.ods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ods.is_empty()
    }

    /// Members in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = &CanonicalOD> + '_ {
        self.ods.iter()
    }

    pub fn contains(&self, od: &CanonicalOD) -> bool {
        self.ods.contains(od)
    }

    pub fn is_subset(&self, other: &ODSet) -> bool {
        self.ods.is_subset(&other.ods)
    }

    /// Returns false when already present.
    pub fn insert(&mut self, od: CanonicalOD) -> bool {
        if !self.ods.insert(od) {
            return false;
        }
        let ctx = od.context();
        match od.form() {
            OdForm::Constant(a) => {
                let entry = self.consts.entry(ctx).or_insert(AttributeSet::EMPTY);
                *entry = entry.with(a);
            }
            OdForm::OrderCompat(a, b) => {
                self.ocs.entry(ctx).or_default().insert((a, b));
            }
        }
        true
    }

    /// Membership with trivial forms counted as present.
    pub fn holds_const(&self, context: AttributeSet, a: AttrId) -> bool {
        context.contains(a) || self.consts.get(&context).is_some_and(|s| s.contains(a))
    }

    /// Membership with trivial forms counted as present.
    pub fn holds_oc(&self, context: AttributeSet, a: AttrId, b: AttrId) -> bool {
        a == b
            || context.contains(a)
            || context.contains(b)
            || self
                .ocs
                .get(&context)
                .is_some_and(|s| s.contains(&(a.min(b), a.max(b))))
    }

    fn constants(&self) -> impl Iterator<Item = (AttributeSet, AttrId)> + '_ {
        self.ods.iter().filter_map(|od| match od.form() {
            OdForm::Constant(a) => Some((od.context(), a)),
            _ => None,
        })
    }
}

impl<'a> IntoIterator for &'a ODSet {
    type Item = &'a CanonicalOD;
    type IntoIter = std::collections::btree_set::Iter<'a, CanonicalOD>;

    fn into_iter(self) -> Self::IntoIter {
        self.ods.iter()
    }
}

/// Every superset of `base` inside `within` with at most `max_len` members,
/// `base` itself excluded.
fn proper_supersets(
    base: AttributeSet,
    within: AttributeSet,
    max_len: usize,
) -> impl Iterator<Item = AttributeSet> {
    let free = within.difference(base);
    let room = max_len.saturating_sub(base.len());
    free.subsets()
        .filter(move |z| !z.is_empty() && z.len() <= room)
        .map(move |z| base.union(z))
}

/// Applies every rule once to the members of `s` and to `fresh`, reporting
/// each conclusion with its rule and premises. Unary rules only look at
/// `fresh`; binary rules consult the whole set.
fn one_step(
    s: &ODSet,
    fresh: &[CanonicalOD],
    lim: DerivationLimit,
    mut emit: impl FnMut(CanonicalOD, Rule, Vec<CanonicalOD>),
) {
    let u = s.universe;
    let max_ctx = lim.max_context_size.min(u.len());
    for &od in fresh {
        let ctx = od.context();
        match od.form() {
            OdForm::Constant(a) => {
                for b in u.difference(ctx).without(a).iter() {
                    emit(
                        CanonicalOD::order_compat(ctx, a, b).expect("non-trivial"),
                        Rule::Propagate,
                        vec![od],
                    );
                }
                for z in proper_supersets(ctx, u.without(a), max_ctx) {
                    emit(
                        CanonicalOD::constant(z, a).expect("non-trivial"),
                        Rule::AugmentationI,
                        vec![od],
                    );
                }
            }
            OdForm::OrderCompat(a, b) => {
                for z in proper_supersets(ctx, u.without(a).without(b), max_ctx) {
                    emit(
                        CanonicalOD::order_compat(z, a, b).expect("non-trivial"),
                        Rule::AugmentationII,
                        vec![od],
                    );
                }
            }
        }
    }
    for (ctx, a) in s.constants() {
        let Some(&bs) = s.consts.get(&ctx.with(a)) else {
            continue;
        };
        for b in bs.difference(ctx).iter() {
            emit(
                CanonicalOD::constant(ctx, b).expect("non-trivial"),
                Rule::Strengthen,
                vec![
                    CanonicalOD::constant(ctx, a).expect("stored"),
                    CanonicalOD::constant(ctx.with(a), b).expect("stored"),
                ],
            );
        }
    }
    for (&ctx, pairs) in &s.ocs {
        if pairs.len() < 2 {
            continue;
        }
        let outside: Vec<AttrId> = u.difference(ctx).iter().collect();
        for (i, &a) in outside.iter().enumerate() {
            for &c in &outside[i + 1..] {
                if s.holds_oc(ctx, a, c) {
                    continue;
                }
                if let Some(path) = chain_path(s, ctx, a, c, lim.max_chain_length) {
                    let mut premises = Vec::with_capacity(2 * path.len() + 1);
                    let mut prev = a;
                    for &b in path.iter().chain([&c]) {
                        premises.push(CanonicalOD::order_compat(ctx, prev, b).expect("stored"));
                        prev = b;
                    }
                    for &b in &path {
                        premises
                            .push(CanonicalOD::order_compat(ctx.with(b), a, c).expect("stored"));
                    }
                    emit(
                        CanonicalOD::order_compat(ctx, a, c).expect("non-trivial"),
                        Rule::Chain,
                        premises,
                    );
                }
            }
        }
    }
}

/// Shortest list of intermediates `B1..Bn` (1 ≤ n ≤ max_len) linking `a` to
/// `c` in context `ctx`, where each `ctx ∪ {Bi}: a ~ c` is present.
fn chain_path(
    s: &ODSet,
    ctx: AttributeSet,
    a: AttrId,
    c: AttrId,
    max_len: usize,
) -> Option<Vec<AttrId>> {
    if max_len == 0 {
        return None;
    }
    let allowed: Vec<AttrId> = s
        .universe
        .difference(ctx)
        .without(a)
        .without(c)
        .iter()
        .filter(|&b| s.holds_oc(ctx.with(b), a, c))
        .collect();
    let mut parent: HashMap<AttrId, AttrId> = HashMap::new();
    let mut depth: HashMap<AttrId, usize> = HashMap::new();
    let mut queue = VecDeque::new();
    for &b in &allowed {
        if s.holds_oc(ctx, a, b) {
            depth.insert(b, 1);
            queue.push_back(b);
        }
    }
    while let Some(b) = queue.pop_front() {
        let d = depth[&b];
        if s.holds_oc(ctx, b, c) {
            let mut path = vec![b];
            let mut cur = b;
            while let Some(&p) = parent.get(&cur) {
                path.push(p);
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        if d == max_len {
            continue;
        }
        for &next in &allowed {
            if !depth.contains_key(&next) && s.holds_oc(ctx, b, next) {
                depth.insert(next, d + 1);
                parent.insert(next, b);
                queue.push_back(next);
            }
        }
    }
    None
}

/// `s` plus everything one rule application away, within `lim`.
pub fn apply_axioms_once(s: &ODSet, lim: DerivationLimit) -> ODSet {
    let mut out = s.clone();
    let fresh: Vec<CanonicalOD> = s.iter().copied().collect();
    one_step(s, &fresh, lim, |od, _, _| {
        out.insert(od);
    });
    out
}

/// Closure under the rules, with the first derivation found for each member.
#[derive(Clone, Debug)]
pub struct Closure {
    pub set: ODSet,
    steps: HashMap<CanonicalOD, (Rule, Vec<CanonicalOD>)>,
}

impl Closure {
    /// A derivation of `od` in dependency order, ending with `od` itself.
    pub fn trace(&self, od: &CanonicalOD) -> Option<Vec<Step>> {
        if !self.set.contains(od) {
            return None;
        }
        let mut out = Vec::new();
        let mut done = BTreeSet::new();
        self.walk(*od, &mut done, &mut out);
        Some(out)
    }

    fn walk(&self, od: CanonicalOD, done: &mut BTreeSet<CanonicalOD>, out: &mut Vec<Step>) {
        if !done.insert(od) {
            return;
        }
        let (rule, premises) = self
            .steps
            .get(&od)
            .cloned()
            .unwrap_or((Rule::Premise, Vec::new()));
        for p in &premises {
            self.walk(*p, done, out);
        }
        out.push(Step {
            conclusion: od,
            rule,
            premises,
        });
    }
}

fn saturate(s: &ODSet, lim: DerivationLimit, stop_at: Option<&CanonicalOD>) -> Closure {
    let mut set = s.clone();
    let mut steps = HashMap::new();
    let mut fresh: Vec<CanonicalOD> = s.iter().copied().collect();
    loop {
        if stop_at.is_some_and(|t| set.contains(t)) {
            break;
        }
        let mut found: Vec<(CanonicalOD, Rule, Vec<CanonicalOD>)> = Vec::new();
        let mut seen = BTreeSet::new();
        one_step(&set, &fresh, lim, |od, rule, premises| {
            if !set.contains(&od) && seen.insert(od) {
                found.push((od, rule, premises));
            }
        });
        if found.is_empty() {
            break;
        }
        found.sort_by_key(|(od, _, _)| (od.context().len(), *od));
        fresh.clear();
        for (od, rule, premises) in found {
            set.insert(od);
            steps.insert(od, (rule, premises));
            fresh.push(od);
        }
    }
    Closure { set, steps }
}

/// Least fixpoint of [`apply_axioms_once`].
pub fn closure(s: &ODSet, lim: DerivationLimit) -> ODSet {
    saturate(s, lim, None).set
}

/// Closure with derivations kept.
pub fn closure_with_trace(s: &ODSet, lim: DerivationLimit) -> Closure {
    saturate(s, lim, None)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Derivation {
    Derivable(Vec<Step>),
    /// The limits were exhaustive, so the target does not follow.
    NotDerivable,
    /// The bounded search did not reach the target.
    NotDerivableWithinLimits,
}

/// Searches for a derivation of `target`, stopping as soon as it appears.
pub fn derive(s: &ODSet, target: &CanonicalOD, lim: DerivationLimit) -> Derivation {
    if s.contains(target) {
        return Derivation::Derivable(vec![Step {
            conclusion: *target,
            rule: Rule::Premise,
            premises: Vec::new(),
        }]);
    }
    let c = saturate(s, lim, Some(target));
    match c.trace(target) {
        Some(steps) => Derivation::Derivable(steps),
        None if lim.is_exhaustive(s.universe.union(target.node())) => Derivation::NotDerivable,
        None => Derivation::NotDerivableWithinLimits,
    }
}

/// Trivial forms are never [`CanonicalOD`]s; use [`ODSet::holds_const`] and
/// [`ODSet::holds_oc`] on a closure to ask about them.
pub fn derives(s: &ODSet, target: &CanonicalOD, lim: DerivationLimit) -> bool {
    matches!(derive(s, target, lim), Derivation::Derivable(_))
}

/// For a valid `context: [] |-> a`: no proper subset of the context works,
/// and no context attribute is itself determined by the rest.
pub fn is_minimal_constant(rel: &Relation, context: AttributeSet, a: AttrId) -> Result<bool> {
    if context.contains(a) {
        return Ok(false);
    }
    for c in context.iter() {
        let rest = context.without(c);
        if validate_constant(rel, rest, a)? || validate_constant(rel, rest, c)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// For a valid `context: a ~ b`: no proper subset of the context works,
/// neither side is constant in the context, and no context attribute is
/// determined by the rest.
pub fn is_minimal_oc(rel: &Relation, context: AttributeSet, a: AttrId, b: AttrId) -> Result<bool> {
    if a == b || context.contains(a) || context.contains(b) {
        return Ok(false);
    }
    if validate_constant(rel, context, a)? || validate_constant(rel, context, b)? {
        return Ok(false);
    }
    for c in context.iter() {
        let rest = context.without(c);
        if validate_order_compat(rel, rest, a, b)? || validate_constant(rel, rest, c)? {
            return Ok(false);
        }
    }
    Ok(true)
}
