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

//! Level-wise discovery of all minimal canonical ODs.
//!
//! Level `l` of the lattice holds attribute sets of size `l`. At node `X`
//! the constant candidates `C+c(X)` and pair candidates `C+s(X)` decide
//! which of `X \ A: [] |-> A` and `X \ {A,B}: A ~ B` can still be minimal;
//! only those are validated. Nodes left without candidates are pruned, and
//! a set enters the next level only when all of its subsets survived.

use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use rayon::ThreadPool;
use serde::Serialize;

use crate::attrset::AttributeSet;
use crate::inference::ODSet;
use crate::odmodel::CanonicalOD;
use crate::partitions::{
    check_constant, check_order_compatible, empty_context_partition, partition_single, Refiner,
    SortedPartition, StrippedPartition,
};
use crate::relation::{AttrId, Relation};

#[derive(Clone, Debug)]
pub struct LatticeNode {
    pub attrs: AttributeSet,
    pub stripped: Arc<StrippedPartition>,
    /// `C+c(X)`; ranges over the whole schema, not just `X`.
    pub cand_const: AttributeSet,
    /// `C+s(X)` as sorted pairs `(A, B)` with `A < B`.
    pub cand_oc: Vec<(AttrId, AttrId)>,
}

#[derive(Clone, Debug, Default)]
pub struct Level {
    pub index: usize,
    pub nodes: BTreeMap<AttributeSet, LatticeNode>,
}

impl Level {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Level 0: the empty set, with every attribute a constant candidate.
    pub fn root(rel: &Relation) -> Level {
        let node = LatticeNode {
            attrs: AttributeSet::EMPTY,
            stripped: Arc::new(empty_context_partition(rel)),
            cand_const: AttributeSet::full(rel.attr_count()),
            cand_oc: Vec::new(),
        };
        Level {
            index: 0,
            nodes: BTreeMap::from([(AttributeSet::EMPTY, node)]),
        }
    }

    /// Level 1: singletons. Candidate sets are filled in by [`compute_ods`].
    pub fn singletons(rel: &Relation) -> Level {
        let nodes = (0..rel.attr_count())
            .map(|a| {
                let attrs = AttributeSet::single(a);
                let stripped = partition_single(rel, a).expect("attribute in range");
                (
                    attrs,
                    LatticeNode {
                        attrs,
                        stripped: Arc::new(stripped),
                        cand_const: AttributeSet::EMPTY,
                        cand_oc: Vec::new(),
                    },
                )
            })
            .collect();
        Level { index: 1, nodes }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LevelStats {
    pub level: usize,
    pub nodes_generated: u64,
    pub nodes_pruned: u64,
    pub constant_checks: u64,
    pub swap_checks: u64,
    pub keys_found: u64,
    pub constants_found: u64,
    pub order_compat_found: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DiscoveryStats {
    pub levels: Vec<LevelStats>,
}

impl DiscoveryStats {
    pub fn nodes_generated(&self) -> u64 {
        self.levels.iter().map(|l| l.nodes_generated).sum()
    }

    pub fn nodes_pruned(&self) -> u64 {
        self.levels.iter().map(|l| l.nodes_pruned).sum()
    }

    pub fn constant_checks(&self) -> u64 {
        self.levels.iter().map(|l| l.constant_checks).sum()
    }

    pub fn swap_checks(&self) -> u64 {
        self.levels.iter().map(|l| l.swap_checks).sum()
    }
}

#[derive(Clone, Debug)]
pub struct DiscoveryResult {
    pub minimal_ods: ODSet,
    pub stats: DiscoveryStats,
    pub levels_processed: usize,
    /// False when `max_level` stopped the traversal while nodes remained.
    pub complete: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DiscoveryConfig {
    /// Largest node size to process; `None` means all attributes.
    pub max_level: Option<usize>,
    /// Node pruning and the superkey shortcuts.
    pub prune: bool,
    /// Worker threads for work inside a level. 1 runs inline.
    pub threads: usize,
}

impl Default for DiscoveryConfig {
    fn default() -> Self {
        DiscoveryConfig {
            max_level: None,
            prune: true,
            threads: 1,
        }
    }
}

pub fn fastod(rel: &Relation, max_level: Option<usize>) -> DiscoveryResult {
    discover(
        rel,
        &DiscoveryConfig {
            max_level,
            ..DiscoveryConfig::default()
        },
    )
}

/// Same output as [`fastod`], without node pruning or superkey shortcuts.
pub fn fastod_unpruned(rel: &Relation, max_level: Option<usize>) -> DiscoveryResult {
    discover(
        rel,
        &DiscoveryConfig {
            max_level,
            prune: false,
            threads: 1,
        },
    )
}

pub fn discover(rel: &Relation, cfg: &DiscoveryConfig) -> DiscoveryResult {
    let pool = (cfg.threads > 1).then(|| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .expect("thread pool")
    });
    let run = || run_levels(rel, cfg, pool.as_ref());
    match &pool {
        Some(p) => p.install(run),
        None => run(),
    }
}

fn run_levels(rel: &Relation, cfg: &DiscoveryConfig, pool: Option<&ThreadPool>) -> DiscoveryResult {
    let n_attrs = rel.attr_count();
    let max_level = cfg.max_level.unwrap_or(n_attrs).min(n_attrs);
    let taus: Vec<SortedPartition> = (0..n_attrs)
        .map(|a| SortedPartition::from_column(rel.ranks(a)))
        .collect();
    let mut minimal = ODSet::new(AttributeSet::full(n_attrs));
    let mut stats = DiscoveryStats::default();
    let mut grandparent = Level::default();
    let mut parent = Level::root(rel);
    let mut current = if max_level >= 1 {
        Level::singletons(rel)
    } else {
        Level::default()
    };
    let mut complete = true;
    let mut levels_processed = 0;
    while !current.is_empty() {
        let l = current.index;
        let mut level_stats = LevelStats {
            level: l,
            nodes_generated: current.len() as u64,
            keys_found: current
                .nodes
                .values()
                .filter(|n| n.stripped.is_superkey())
                .count() as u64,
            ..LevelStats::default()
        };
        let outcome = compute_ods_with(
            rel,
            &taus,
            &mut current,
            &parent,
            &grandparent,
            cfg.prune,
            pool,
        );
        level_stats.constant_checks = outcome.constant_checks;
        level_stats.swap_checks = outcome.swap_checks;
        for od in &outcome.emitted {
            if od.is_constant() {
                level_stats.constants_found += 1;
            } else {
                level_stats.order_compat_found += 1;
            }
            minimal.insert(*od);
        }
        if cfg.prune {
            level_stats.nodes_pruned = prune_levels(&mut current) as u64;
        }
        stats.levels.push(level_stats);
        levels_processed = l;
        if l >= max_level {
            complete = next_level_sets(&current).is_empty();
            break;
        }
        let next = next_level_with(rel, &current, pool);
        grandparent = std::mem::replace(&mut parent, std::mem::replace(&mut current, next));
    }
    DiscoveryResult {
        minimal_ods: minimal,
        stats,
        levels_processed,
        complete,
    }
}

/// Removes nodes of level `l ≥ 2` whose candidate sets are both empty.
/// Returns the number removed.
pub fn prune_levels(level: &mut Level) -> usize {
    if level.index < 2 {
        return 0;
    }
    let before = level.len();
    level
        .nodes
        .retain(|_, n| !(n.cand_const.is_empty() && n.cand_oc.is_empty()));
    before - level.len()
}

/// Candidate sets of the next level with the two parents that generate each.
fn next_level_sets(level: &Level) -> Vec<(AttributeSet, AttributeSet, AttributeSet)> {
    let mut blocks: BTreeMap<AttributeSet, Vec<AttrId>> = BTreeMap::new();
    for &x in level.nodes.keys() {
        let last = x.iter().last().expect("non-empty node");
        blocks.entry(x.without(last)).or_default().push(last);
    }
    let mut out = Vec::new();
    for (prefix, tails) in &blocks {
        for (i, &b) in tails.iter().enumerate() {
            for &c in &tails[i + 1..] {
                let x = prefix.with(b).with(c);
                if x.iter().all(|d| level.nodes.contains_key(&x.without(d))) {
                    out.push((x, prefix.with(b), prefix.with(c)));
                }
            }
        }
    }
    out.sort_unstable_by_key(|t| t.0);
    out
}

/// Builds level `l + 1`; each node's partition is the product of the two
/// parents sharing its prefix.
pub fn calculate_next_level(rel: &Relation, level: &Level) -> Level {
    next_level_with(rel, level, None)
}

fn next_level_with(rel: &Relation, level: &Level, pool: Option<&ThreadPool>) -> Level {
    let sets = next_level_sets(level);
    let product = |refiner: &mut Refiner,
                   (x, p, q): &(AttributeSet, AttributeSet, AttributeSet)| {
        let stripped = refiner.product(&level.nodes[p].stripped, &level.nodes[q].stripped);
        (
            *x,
            LatticeNode {
                attrs: *x,
                stripped: Arc::new(stripped),
                cand_const: AttributeSet::EMPTY,
                cand_oc: Vec::new(),
            },
        )
    };
    let rows = rel.row_count();
    let nodes: Vec<(AttributeSet, LatticeNode)> = match pool {
        Some(_) => sets
            .par_iter()
            .map_init(|| Refiner::new(rows), product)
            .collect(),
        None => {
            let mut refiner = Refiner::new(rows);
            sets.iter().map(|s| product(&mut refiner, s)).collect()
        }
    };
    Level {
        index: level.index + 1,
        nodes: nodes.into_iter().collect(),
    }
}

/// What [`compute_ods`] found at one level.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LevelOutcome {
    /// Emitted ODs in node order, constants before pairs within a node.
    pub emitted: Vec<CanonicalOD>,
    pub constant_checks: u64,
    pub swap_checks: u64,
}

struct NodeOutcome {
    cand_const: AttributeSet,
    cand_oc: Vec<(AttrId, AttrId)>,
    emitted: Vec<CanonicalOD>,
    constant_checks: u64,
    swap_checks: u64,
}

/// Fills in the candidate sets of every node of `level` and validates the
/// surviving candidates. `parent` is the processed level `l - 1` and
/// `grandparent` level `l - 2`; with `shortcuts`, contexts that are
/// superkeys skip their scans.
pub fn compute_ods(
    rel: &Relation,
    taus: &[SortedPartition],
    level: &mut Level,
    parent: &Level,
    grandparent: &Level,
    shortcuts: bool,
) -> LevelOutcome {
    compute_ods_with(rel, taus, level, parent, grandparent, shortcuts, None)
}

fn compute_ods_with(
    rel: &Relation,
    taus: &[SortedPartition],
    level: &mut Level,
    parent: &Level,
    grandparent: &Level,
    shortcuts: bool,
    pool: Option<&ThreadPool>,
) -> LevelOutcome {
    let keys: Vec<AttributeSet> = level.nodes.keys().copied().collect();
    let l = level.index;
    let visit = |x: &AttributeSet| visit_node(rel, taus, *x, l, parent, grandparent, shortcuts);
    let outcomes: Vec<NodeOutcome> = match pool {
        Some(_) => keys.par_iter().map(visit).collect(),
        None => keys.iter().map(visit).collect(),
    };
    let mut out = LevelOutcome::default();
    for (x, o) in keys.iter().zip(outcomes) {
        let node = level.nodes.get_mut(x).expect("node present");
        node.cand_const = o.cand_const;
        node.cand_oc = o.cand_oc;
        out.emitted.extend(o.emitted);
        out.constant_checks += o.constant_checks;
        out.swap_checks += o.swap_checks;
    }
    out
}

fn visit_node(
    rel: &Relation,
    taus: &[SortedPartition],
    x: AttributeSet,
    l: usize,
    parent: &Level,
    grandparent: &Level,
    shortcuts: bool,
) -> NodeOutcome {
    let up = |y: AttributeSet| &parent.nodes[&y];
    let mut cand_const = x
        .iter()
        .fold(AttributeSet::full(rel.attr_count()), |acc, a| {
            acc.intersection(up(x.without(a)).cand_const)
        });
    let members: Vec<AttrId> = x.iter().collect();
    let mut cand_oc = Vec::new();
    if l == 2 {
        cand_oc.push((members[0], members[1]));
    } else if l > 2 {
        for (i, &a) in members.iter().enumerate() {
            for &b in &members[i + 1..] {
                let pair = (a, b);
                let everywhere = x
                    .without(a)
                    .without(b)
                    .iter()
                    .all(|d| up(x.without(d)).cand_oc.binary_search(&pair).is_ok());
                if everywhere {
                    cand_oc.push(pair);
                }
            }
        }
    }
    let mut emitted = Vec::new();
    let mut constant_checks = 0;
    let mut swap_checks = 0;

    for a in x.intersection(cand_const).iter() {
        let ctx = x.without(a);
        let ctx_partition = &up(ctx).stripped;
        let valid = if shortcuts && ctx_partition.is_superkey() {
            true
        } else {
            constant_checks += 1;
            check_constant(ctx_partition, rel.ranks(a))
        };
        if valid {
            emitted.push(CanonicalOD::constant(ctx, a).expect("a is outside its context"));
            cand_const = cand_const.without(a).intersection(x);
        }
    }

    cand_oc.retain(|&(a, b)| {
        if !up(x.without(b)).cand_const.contains(a) || !up(x.without(a)).cand_const.contains(b) {
            return false;
        }
        let ctx = x.without(a).without(b);
        let ctx_partition = &grandparent.nodes[&ctx].stripped;
        if shortcuts && ctx_partition.is_superkey() {
            return false;
        }
        swap_checks += 1;
        if check_order_compatible(ctx_partition, &taus[a], rel.ranks(b)) {
            emitted.push(CanonicalOD::order_compat(ctx, a, b).expect("distinct, outside context"));
            false
        } else {
            true
        }
    });

    NodeOutcome {
        cand_const,
        cand_oc,
        emitted,
        constant_checks,
        swap_checks,
    }
}
