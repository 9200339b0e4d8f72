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

use std::cmp::Ordering;
use std::fmt;

use crate::relation::AttrId;

/// A set of attributes stored as a 64-bit mask.
///
/// Sets order first by size and then by their ascending member lists, which
/// is the order lattice levels are processed in.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct AttributeSet(u64);

impl AttributeSet {
    pub const EMPTY: AttributeSet = AttributeSet(0);

    pub fn from_bits(bits: u64) -> Self {
        AttributeSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn single(a: AttrId) -> Self {
        AttributeSet(1u64 << a)
    }

    /// The set {0, .., n-1}.
    pub fn full(n: usize) -> Self {
        if n >= 64 {
            AttributeSet(u64::MAX)
        } else {
            AttributeSet((1u64 << n) - 1)
        }
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, a: AttrId) -> bool {
        a < 64 && self.0 & (1u64 << a) != 0
    }

    pub fn with(self, a: AttrId) -> Self {
        AttributeSet(self.0 | (1u64 << a))
    }

    pub fn without(self, a: AttrId) -> Self {
        AttributeSet(self.0 & !(1u64 << a))
    }

    pub fn union(self, other: Self) -> Self {
        AttributeSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        AttributeSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        AttributeSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset(self, other: Self) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn iter(self) -> Members {
        Members(self.0)
    }

    pub fn to_vec(self) -> Vec<AttrId> {
        self.iter().collect()
    }

    /// All subsets of `self`, including the empty set and `self`.
    pub fn subsets(self) -> impl Iterator<Item = AttributeSet> {
        let full = self.0;
        let mut next = Some(0u64);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full {
                None
            } else {
                Some((cur.wrapping_sub(full)) & full)
            };
            Some(AttributeSet(cur))
        })
    }
}

impl FromIterator<AttrId> for AttributeSet {
    fn from_iter<I: IntoIterator<Item = AttrId>>(iter: I) -> Self {
        iter.into_iter()
            .fold(AttributeSet::EMPTY, AttributeSet::with)
    }
}

impl IntoIterator for AttributeSet {
    type Item = AttrId;
    type IntoIter = Members;

    fn into_iter(self) -> Members {
        self.iter()
    }
}

pub struct Members(u64);

impl Iterator for Members {
    type Item = AttrId;

    fn next(&mut self) -> Option<AttrId> {
        if self.0 == 0 {
            return None;
        }
        let a = self.0.trailing_zeros() as AttrId;
        self.0 &= self.0 - 1;
        Some(a)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let n = self.0.count_ones() as usize;
        (n, Some(n))
    }
}

impl ExactSizeIterator for Members {}

impl Ord for AttributeSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.iter().cmp(other.iter()))
    }
}

impl PartialOrd for AttributeSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for AttributeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn membership_and_algebra() {
        let s: AttributeSet = [0, 3, 5].into_iter().collect();
        assert_eq!(s.len(), 3);
        assert!(s.contains(3) && !s.contains(1));
        assert_eq!(s.without(3).to_vec(), vec![0, 5]);
        assert!(s.without(3).is_proper_subset(s));
        assert!(!s.is_proper_subset(s));
        assert_eq!(s.union(AttributeSet::single(1)).to_vec(), vec![0, 1, 3, 5]);
        assert_eq!(AttributeSet::full(3).to_vec(), vec![0, 1, 2]);
        assert_eq!(AttributeSet::full(64).len(), 64);
    }

    #[test]
    fn subsets_enumerates_powerset() {
        let s: AttributeSet = [1, 4, 6].into_iter().collect();
        let subs: Vec<_> = s.subsets().collect();
        assert_eq!(subs.len(), 8);
        assert!(subs.iter().all(|x| x.is_subset(s)));
        assert_eq!(AttributeSet::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn ordering_is_by_size_then_members() {
        let a: AttributeSet = [2].into_iter().collect();
        let b: AttributeSet = [0, 1].into_iter().collect();
        let c: AttributeSet = [0, 2].into_iter().collect();
        let mut v = vec![c, b, a, AttributeSet::EMPTY];
        v.sort();
        assert_eq!(v, vec![AttributeSet::EMPTY, a, b, c]);
    }
}
