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

//! Fixtures shared by unit tests.

use crate::attrset::AttributeSet;
use crate::relation::{Attribute, DataType, NullPolicy, Relation, Schema, Value};

pub const TAXES: [&str; 9] = [
    "ID", "yr", "posit", "bin", "sal", "perc", "tax", "grp", "subg",
];

/// The employee tax table; salary and tax are in thousands.
pub fn taxes() -> Relation {
    use DataType::*;
    let types = [
        Integer, Integer, Text, Integer, Float, Integer, Float, Text, Text,
    ];
    let schema = Schema::new(
        TAXES
            .iter()
            .zip(types)
            .map(|(n, t)| Attribute::new(*n, t))
            .collect(),
        NullPolicy::NullsFirst,
    )
    .unwrap();
    let rows = [
        "10,16,secr,1,5,20,1,A,III",
        "11,16,mngr,2,8,25,2,C,II",
        "12,16,direct,3,10,30,3,D,I",
        "10,15,secr,1,4.5,20,0.9,A,III",
        "11,15,mngr,2,6,25,1.5,C,I",
        "12,15,direct,3,8,25,2,C,II",
    ];
    let rows = rows
        .iter()
        .map(|r| {
            r.split(',')
                .zip(types)
                .map(|(f, t)| Value::parse(f, t).unwrap())
                .collect()
        })
        .collect();
    Relation::from_rows(schema, rows).unwrap()
}

pub fn attr(name: &str) -> usize {
    TAXES.iter().position(|n| *n == name).unwrap()
}

pub fn attrs(names: &[&str]) -> AttributeSet {
    names.iter().map(|n| attr(n)).collect()
}
