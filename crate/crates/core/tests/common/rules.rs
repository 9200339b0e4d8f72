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

//! Random instances of the set-based rules, checked on data.
//!
//! Every premise and conclusion is evaluated with a direct pairwise scan
//! over ranks, including forms the library treats as trivial.

use orderdeps::{AttributeSet, Relation};
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleName {
    Reflexivity,
    Identity,
    Commutativity,
    Strengthen,
    Propagate,
    AugmentationI,
    AugmentationII,
    Chain,
    Transitivity,
    WeakTransitivity,
    Normalization,
}

pub const ALL_RULES: [RuleName; 11] = [
    RuleName::Reflexivity,
    RuleName::Identity,
    RuleName::Commutativity,
    RuleName::Strengthen,
    RuleName::Propagate,
    RuleName::AugmentationI,
    RuleName::AugmentationII,
    RuleName::Chain,
    RuleName::Transitivity,
    RuleName::WeakTransitivity,
    RuleName::Normalization,
];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trial {
    /// Some premise failed on the data.
    Rejected,
    Holds,
    Fails,
}

pub fn constant(rel: &Relation, ctx: AttributeSet, a: usize) -> bool {
    let n = rel.row_count();
    (0..n).all(|s| {
        (0..n).all(|t| {
            !ctx.iter().all(|c| rel.rank(s, c) == rel.rank(t, c))
                || rel.rank(s, a) == rel.rank(t, a)
        })
    })
}

pub fn compatible(rel: &Relation, ctx: AttributeSet, a: usize, b: usize) -> bool {
    let n = rel.row_count();
    (0..n).all(|s| {
        (0..n).all(|t| {
            !ctx.iter().all(|c| rel.rank(s, c) == rel.rank(t, c))
                || !(rel.rank(s, a) < rel.rank(t, a) && rel.rank(s, b) > rel.rank(t, b))
        })
    })
}

fn random_set(rng: &mut impl Rng, n: usize, p: f64) -> AttributeSet {
    (0..n).filter(|_| rng.gen_bool(p)).collect()
}

fn random_list(rng: &mut impl Rng, n: usize, max_len: usize) -> Vec<usize> {
    let mut all: Vec<usize> = (0..n).collect();
    all.shuffle(rng);
    all.truncate(rng.gen_range(1..=max_len.min(n)));
    all
}

fn prefix(list: &[usize], len: usize) -> AttributeSet {
    list[..len].iter().copied().collect()
}

fn verdict(premises: bool, conclusion: bool) -> Trial {
    match (premises, conclusion) {
        (false, _) => Trial::Rejected,
        (true, true) => Trial::Holds,
        (true, false) => Trial::Fails,
    }
}

/// Draws one instance of `rule` over `rel` and evaluates it.
pub fn trial(rule: RuleName, rel: &Relation, rng: &mut impl Rng) -> Trial {
    let n = rel.attr_count();
    let pick = |rng: &mut dyn rand::RngCore| rng.gen_range(0..n);
    match rule {
        RuleName::Reflexivity => {
            let a = pick(rng);
            let x = random_set(rng, n, 0.4).with(a);
            verdict(true, constant(rel, x, a))
        }
        RuleName::Identity => {
            let a = pick(rng);
            let x = random_set(rng, n, 0.4);
            verdict(true, compatible(rel, x, a, a))
        }
        RuleName::Commutativity => {
            let (a, b) = (pick(rng), pick(rng));
            let x = random_set(rng, n, 0.3);
            verdict(compatible(rel, x, a, b), compatible(rel, x, b, a))
        }
        RuleName::Strengthen => {
            let (a, b) = (pick(rng), pick(rng));
            let x = random_set(rng, n, 0.3);
            verdict(
                constant(rel, x, a) && constant(rel, x.with(a), b),
                constant(rel, x, b),
            )
        }
        RuleName::Propagate => {
            let (a, b) = (pick(rng), pick(rng));
            let x = random_set(rng, n, 0.3);
            verdict(constant(rel, x, a), compatible(rel, x, a, b))
        }
        RuleName::AugmentationI => {
            let a = pick(rng);
            let x = random_set(rng, n, 0.3);
            let z = random_set(rng, n, 0.4);
            verdict(constant(rel, x, a), constant(rel, x.union(z), a))
        }
        RuleName::AugmentationII => {
            let (a, b) = (pick(rng), pick(rng));
            let x = random_set(rng, n, 0.3);
            let z = random_set(rng, n, 0.4);
            verdict(compatible(rel, x, a, b), compatible(rel, x.union(z), a, b))
        }
        RuleName::Chain => {
            let (a, c) = (pick(rng), pick(rng));
            let x = random_set(rng, n, 0.25);
            let len = rng.gen_range(1..=3);
            let bs: Vec<usize> = (0..len).map(|_| pick(rng)).collect();
            let mut links = vec![a];
            links.extend(&bs);
            links.push(c);
            let premises = links.windows(2).all(|w| compatible(rel, x, w[0], w[1]))
                && bs.iter().all(|&b| compatible(rel, x.with(b), a, c));
            verdict(premises, compatible(rel, x, a, c))
        }
        RuleName::Transitivity => {
            let xs = random_list(rng, n, 2);
            let ys = random_list(rng, n, 2);
            let zs = random_list(rng, n, 2);
            let (x, y) = (prefix(&xs, xs.len()), prefix(&ys, ys.len()));
            let premises = ys.iter().all(|&yj| constant(rel, x, yj))
                && zs.iter().all(|&zk| constant(rel, y, zk));
            verdict(premises, zs.iter().all(|&zk| constant(rel, x, zk)))
        }
        RuleName::WeakTransitivity => {
            let xs = random_list(rng, n, 2);
            let ys = random_list(rng, n, 2);
            let zs = random_list(rng, n, 2);
            let compat_lists = |l: &[usize], r: &[usize]| {
                (0..l.len()).all(|i| {
                    (0..r.len())
                        .all(|j| compatible(rel, prefix(l, i).union(prefix(r, j)), l[i], r[j]))
                })
            };
            let y = prefix(&ys, ys.len());
            let premises = compat_lists(&xs, &ys)
                && compat_lists(&ys, &zs)
                && zs.iter().all(|&zk| constant(rel, y, zk));
            verdict(premises, compat_lists(&xs, &zs))
        }
        RuleName::Normalization => {
            let (a, b) = (pick(rng), pick(rng));
            let x = random_set(rng, n, 0.4).with(a);
            verdict(true, compatible(rel, x, a, b))
        }
    }
}
