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

//! Equivalence-class structures and the linear-time validators built on them.
//!
//! A [`StrippedPartition`] keeps only the classes of size two or more; rows
//! that are alone in their class can never witness a split or a swap, so
//! dropping them leaves every verdict unchanged. An empty stripped partition
//! means the generating attribute set is a superkey.

use crate::attrset::AttributeSet;
use crate::error::Result;
use crate::relation::{AttrId, Rank, Relation};

/// 0-based row index. Row `i` is tuple `t{i+1}`.
pub type RowId = u32;

const UNLABELED: u32 = u32::MAX;

/// A full partition, singletons included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    classes: Vec<Vec<RowId>>,
    covered_rows: usize,
}

impl Partition {
    /// Groups rows by rank. Classes are ordered by their smallest row.
    pub fn from_column(ranks: &[Rank]) -> Self {
        let mut by_rank: Vec<(Rank, RowId)> = ranks
            .iter()
            .enumerate()
            .map(|(i, &r)| (r, i as RowId))
            .collect();
        by_rank.sort_unstable();
        let mut classes: Vec<Vec<RowId>> = Vec::new();
        let mut prev = None;
        for (r, row) in by_rank {
            if prev == Some(r) {
                classes.last_mut().unwrap().push(row);
            } else {
                classes.push(vec![row]);
                prev = Some(r);
            }
        }
        classes.sort_unstable_by_key(|c| c[0]);
        Partition {
            classes,
            covered_rows: ranks.len(),
        }
    }

    pub fn classes(&self) -> &[Vec<RowId>] {
        &self.classes
    }

    pub fn covered_rows(&self) -> usize {
        self.covered_rows
    }

    pub fn strip(&self) -> StrippedPartition {
        StrippedPartition::from_classes(
            self.classes
                .iter()
                .filter(|c| c.len() > 1)
                .cloned()
                .collect(),
            self.covered_rows,
        )
    }
}

/// Classes of size at least two, each ascending, ordered by smallest member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrippedPartition {
    classes: Vec<Vec<RowId>>,
    stripped_rows: usize,
    relation_rows: usize,
}

impl StrippedPartition {
    fn from_classes(classes: Vec<Vec<RowId>>, relation_rows: usize) -> Self {
        debug_assert!(classes.iter().all(|c| c.len() > 1));
        let stripped_rows = classes.iter().map(Vec::len).sum();
        StrippedPartition {
            classes,
            stripped_rows,
            relation_rows,
        }
    }

    pub fn from_column(ranks: &[Rank]) -> Self {
        Partition::from_column(ranks).strip()
    }

    pub fn classes(&self) -> &[Vec<RowId>] {
        &self.classes
    }

    /// Number of rows that sit in a retained class.
    pub fn stripped_row_count(&self) -> usize {
        self.stripped_rows
    }

    pub fn relation_rows(&self) -> usize {
        self.relation_rows
    }

    /// True iff no two rows agree on the generating attributes.
    pub fn is_superkey(&self) -> bool {
        self.classes.is_empty()
    }

    /// Number of classes in the unstripped partition.
    pub fn full_class_count(&self) -> usize {
        self.relation_rows - self.stripped_rows + self.classes.len()
    }

    /// Refinement: two rows share a class iff they share one in both inputs.
    pub fn product(&self, other: &StrippedPartition) -> StrippedPartition {
        Refiner::new(self.relation_rows).product(self, other)
    }
}

/// Scratch space for repeated partition products over one relation.
///
/// Each product costs time linear in the stripped sizes of its inputs; the
/// row-label table is allocated once and restored after every call.
pub struct Refiner {
    labels: Vec<u32>,
    buckets: Vec<Vec<RowId>>,
}

impl Refiner {
    pub fn new(rows: usize) -> Self {
        Refiner {
            labels: vec![UNLABELED; rows],
            buckets: Vec::new(),
        }
    }

    pub fn product(&mut self, p: &StrippedPartition, q: &StrippedPartition) -> StrippedPartition {
        debug_assert_eq!(p.relation_rows, q.relation_rows);
        if self.labels.len() < p.relation_rows {
            self.labels.resize(p.relation_rows, UNLABELED);
        }
        if self.buckets.len() < p.classes.len() {
            self.buckets.resize_with(p.classes.len(), Vec::new);
        }
        for (i, class) in p.classes.iter().enumerate() {
            for &row in class {
                self.labels[row as usize] = i as u32;
            }
        }
        let mut out = Vec::new();
        for class in &q.classes {
            for &row in class {
                let label = self.labels[row as usize];
                if label != UNLABELED {
                    self.buckets[label as usize].push(row);
                }
            }
            for &row in class {
                let label = self.labels[row as usize];
                if label == UNLABELED {
                    continue;
                }
                let bucket = &mut self.buckets[label as usize];
                match bucket.len() {
                    0 => {}
                    1 => bucket.clear(),
                    _ => out.push(std::mem::take(bucket)),
                }
            }
        }
        for class in &p.classes {
            for &row in class {
                self.labels[row as usize] = UNLABELED;
            }
        }
        out.sort_unstable_by_key(|c: &Vec<RowId>| c[0]);
        StrippedPartition::from_classes(out, p.relation_rows)
    }
}

/// Classes of one attribute in ascending rank order, singletons included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SortedPartition {
    ordered_classes: Vec<Vec<RowId>>,
    position: Vec<u32>,
}

impl SortedPartition {
    pub fn from_column(ranks: &[Rank]) -> Self {
        let mut by_rank: Vec<(Rank, RowId)> = ranks
            .iter()
            .enumerate()
            .map(|(i, &r)| (r, i as RowId))
            .collect();
        by_rank.sort_unstable();
        let mut ordered_classes: Vec<Vec<RowId>> = Vec::new();
        let mut position = vec![0u32; ranks.len()];
        let mut prev = None;
        for (r, row) in by_rank {
            if prev != Some(r) {
                ordered_classes.push(Vec::new());
                prev = Some(r);
            }
            position[row as usize] = (ordered_classes.len() - 1) as u32;
            ordered_classes.last_mut().unwrap().push(row);
        }
        SortedPartition {
            ordered_classes,
            position,
        }
    }

    pub fn ordered_classes(&self) -> &[Vec<RowId>] {
        &self.ordered_classes
    }

    /// Index of the class containing `row`.
    pub fn position_of(&self, row: RowId) -> u32 {
        self.position[row as usize]
    }

    /// Splits every class of `context` into buckets that follow this sorted
    /// partition's order, with one pass over the sorted classes. The result
    /// is aligned with `context.classes()`.
    pub fn bucketize(&self, context: &StrippedPartition) -> Vec<Vec<Vec<RowId>>> {
        let mut class_of = vec![UNLABELED; self.position.len()];
        for (i, class) in context.classes().iter().enumerate() {
            for &row in class {
                class_of[row as usize] = i as u32;
            }
        }
        let mut out: Vec<Vec<Vec<RowId>>> = vec![Vec::new(); context.classes().len()];
        let mut last_seen: Vec<u32> = vec![UNLABELED; context.classes().len()];
        for (pos, sorted_class) in self.ordered_classes.iter().enumerate() {
            for &row in sorted_class {
                let c = class_of[row as usize];
                if c == UNLABELED {
                    continue;
                }
                let c = c as usize;
                if last_seen[c] != pos as u32 {
                    out[c].push(Vec::new());
                    last_seen[c] = pos as u32;
                }
                out[c].last_mut().unwrap().push(row);
            }
        }
        out
    }
}

pub fn partition_single(rel: &Relation, a: AttrId) -> Result<StrippedPartition> {
    rel.check_attr(a)?;
    Ok(StrippedPartition::from_column(rel.ranks(a)))
}

/// Partition of the empty attribute set: all rows in one class.
pub fn empty_context_partition(rel: &Relation) -> StrippedPartition {
    let n = rel.row_count();
    let classes = if n > 1 {
        vec![(0..n as RowId).collect()]
    } else {
        Vec::new()
    };
    StrippedPartition::from_classes(classes, n)
}

/// Stripped partition of an arbitrary attribute set, built by products of
/// single-attribute partitions.
pub fn partition_of(rel: &Relation, attrs: AttributeSet) -> Result<StrippedPartition> {
    let mut members = attrs.iter();
    let Some(first) = members.next() else {
        return Ok(empty_context_partition(rel));
    };
    let mut acc = partition_single(rel, first)?;
    let mut refiner = Refiner::new(rel.row_count());
    for a in members {
        if acc.is_superkey() {
            break;
        }
        let next = partition_single(rel, a)?;
        acc = refiner.product(&acc, &next);
    }
    Ok(acc)
}

pub fn sorted_partition(rel: &Relation, a: AttrId) -> Result<SortedPartition> {
    rel.check_attr(a)?;
    Ok(SortedPartition::from_column(rel.ranks(a)))
}

/// True iff `column` takes a single value within every class of `context`.
pub fn check_constant(context: &StrippedPartition, column: &[Rank]) -> bool {
    context.classes().iter().all(|class| {
        let first = column[class[0] as usize];
        class[1..].iter().all(|&row| column[row as usize] == first)
    })
}

/// True iff no class of `context` holds rows `s`, `t` with `s` strictly
/// before `t` on A and strictly after it on B.
///
/// Each class is ordered by (A-position, B-rank); within that order the rows
/// form A-buckets, and the check is that the largest B seen in earlier
/// buckets never exceeds the smallest B of the current one.
pub fn check_order_compatible(
    context: &StrippedPartition,
    tau_a: &SortedPartition,
    b_column: &[Rank],
) -> bool {
    let mut scratch: Vec<(u32, Rank)> = Vec::new();
    for class in context.classes() {
        scratch.clear();
        scratch.extend(
            class
                .iter()
                .map(|&row| (tau_a.position_of(row), b_column[row as usize])),
        );
        scratch.sort_unstable();
        let mut prev_max: Option<Rank> = None;
        let mut i = 0;
        while i < scratch.len() {
            let bucket = scratch[i].0;
            // sorted by (a, b): the bucket minimum comes first
            let bucket_min = scratch[i].1;
            if prev_max.is_some_and(|m| m > bucket_min) {
                return false;
            }
            let mut bucket_max = bucket_min;
            while i < scratch.len() && scratch[i].0 == bucket {
                bucket_max = scratch[i].1;
                i += 1;
            }
            prev_max = Some(prev_max.map_or(bucket_max, |m| m.max(bucket_max)));
        }
    }
    true
}
