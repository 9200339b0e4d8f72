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

//! Relation generators shared by the integration tests.

#![allow(dead_code)]

pub mod rules;

use std::path::PathBuf;

use orderdeps::{
    Attribute, AttributeSet, CanonicalOD, DataType, ListOD, NullPolicy, OrderSpec, Relation,
    Schema, Value,
};
use proptest::prelude::*;
use rand::Rng;

pub const TYPES: [DataType; 4] = [
    DataType::Integer,
    DataType::Float,
    DataType::Text,
    DataType::Date,
];

/// Text values whose code-point order differs from their index order.
const WORDS: [&str; 8] = ["b", "a", "aa", "B", "ab", "é", "z9", "z10"];

/// Column description: type plus one code per row. Code 0 is null when
/// `nullable` is set.
#[derive(Clone, Debug)]
pub struct ColumnSpec {
    pub data_type: DataType,
    pub nullable: bool,
    pub codes: Vec<u8>,
}

pub fn value(t: DataType, code: u8) -> Value {
    let k = code as i64;
    match t {
        DataType::Integer => Value::Integer(k * 7 - 10),
        DataType::Float => Value::parse(&format!("{}", k as f64 * 1.5 - 2.0), t).unwrap(),
        DataType::Text => Value::Text(WORDS[code as usize % WORDS.len()].to_string()),
        DataType::Date => {
            let day = 1 + (k * 9) % 28;
            let month = 1 + k / 3;
            Value::parse(&format!("2021-{month:02}-{day:02}"), t).unwrap()
        }
    }
}

pub fn build(columns: &[ColumnSpec], nulls: NullPolicy) -> Relation {
    let schema = Schema::new(
        columns
            .iter()
            .enumerate()
            .map(|(i, c)| Attribute::new(format!("c{i}"), c.data_type))
            .collect(),
        nulls,
    )
    .unwrap();
    let values = columns
        .iter()
        .map(|c| {
            c.codes
                .iter()
                .map(|&k| {
                    if c.nullable && k == 0 {
                        Value::Null
                    } else {
                        value(c.data_type, k)
                    }
                })
                .collect()
        })
        .collect();
    Relation::from_columns(schema, values).unwrap()
}

/// `attrs` columns, `rows` rows, each column drawing from its own domain
/// of `domain` values. Mixed types, occasional nulls.
pub fn random_relation(
    rng: &mut impl Rng,
    attrs: std::ops::RangeInclusive<usize>,
    rows: std::ops::RangeInclusive<usize>,
    domain: std::ops::RangeInclusive<u8>,
) -> Relation {
    let n_attrs = rng.gen_range(attrs);
    let n_rows = rng.gen_range(rows);
    let columns: Vec<ColumnSpec> = (0..n_attrs)
        .map(|_| {
            let d = rng.gen_range(domain.clone());
            let nullable = rng.gen_bool(0.15);
            ColumnSpec {
                data_type: TYPES[rng.gen_range(0..TYPES.len())],
                nullable,
                codes: (0..n_rows).map(|_| rng.gen_range(0..d)).collect(),
            }
        })
        .collect();
    let nulls = if rng.gen_bool(0.5) {
        NullPolicy::NullsFirst
    } else {
        NullPolicy::NullsLast
    };
    build(&columns, nulls)
}

pub fn arb_relation(
    max_attrs: usize,
    max_rows: usize,
    max_domain: u8,
) -> impl Strategy<Value = Relation> {
    (1..=max_attrs, 0..=max_rows, any::<bool>()).prop_flat_map(move |(attrs, rows, first)| {
        let column = (0..TYPES.len(), 1..=max_domain, prop::bool::weighted(0.15)).prop_flat_map(
            move |(t, d, nullable)| {
                prop::collection::vec(0..d, rows).prop_map(move |codes| ColumnSpec {
                    data_type: TYPES[t],
                    nullable,
                    codes,
                })
            },
        );
        prop::collection::vec(column, attrs).prop_map(move |cols| {
            let nulls = if first {
                NullPolicy::NullsFirst
            } else {
                NullPolicy::NullsLast
            };
            build(&cols, nulls)
        })
    })
}

pub fn random_spec(rng: &mut impl Rng, n_attrs: usize, max_len: usize) -> OrderSpec {
    let len = rng.gen_range(0..=max_len);
    OrderSpec::new((0..len).map(|_| rng.gen_range(0..n_attrs)).collect())
}

pub fn random_list_od(rng: &mut impl Rng, n_attrs: usize) -> ListOD {
    ListOD::new(random_spec(rng, n_attrs, 3), random_spec(rng, n_attrs, 3))
}

/// A random non-trivial canonical OD, or `None` when the schema is too
/// narrow for the drawn form.
pub fn random_canonical(rng: &mut impl Rng, n_attrs: usize) -> Option<CanonicalOD> {
    let ctx: AttributeSet = (0..n_attrs).filter(|_| rng.gen_bool(0.3)).collect();
    let outside: Vec<usize> = (0..n_attrs).filter(|a| !ctx.contains(*a)).collect();
    if outside.is_empty() {
        return None;
    }
    let a = outside[rng.gen_range(0..outside.len())];
    if rng.gen_bool(0.5) {
        return Some(CanonicalOD::constant(ctx, a).unwrap());
    }
    let b = outside[rng.gen_range(0..outside.len())];
    CanonicalOD::order_compat(ctx, a, b).ok()
}

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("data")
}

pub fn taxes() -> Relation {
    let schema = Schema::from_json_file(&data_dir().join("taxes.json")).unwrap();
    Relation::load_csv(&data_dir().join("taxes.csv"), schema, true).unwrap()
}

pub fn id(rel: &Relation, name: &str) -> usize {
    rel.attr(name).unwrap()
}

pub fn set(rel: &Relation, names: &[&str]) -> AttributeSet {
    names.iter().map(|n| id(rel, n)).collect()
}

/// Rows grouped by their exact rank tuple over `attrs`, classes of size
/// two or more only, each ascending, ordered by smallest member.
pub fn direct_classes(rel: &Relation, attrs: AttributeSet) -> Vec<Vec<u32>> {
    let mut groups: std::collections::BTreeMap<Vec<u32>, Vec<u32>> = Default::default();
    for row in 0..rel.row_count() {
        let key = attrs.iter().map(|a| rel.rank(row, a)).collect();
        groups.entry(key).or_default().push(row as u32);
    }
    let mut out: Vec<Vec<u32>> = groups.into_values().filter(|c| c.len() > 1).collect();
    out.sort();
    out
}
