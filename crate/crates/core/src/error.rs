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

use thiserror::Error;

use crate::relation::DataType;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error: {0}")]
    Io(String),
    #[error("CSV error: {0}")]
    Csv(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("row {row}, column {column}: {reason}")]
    Parse {
        row: usize,
        column: String,
        reason: String,
    },
    #[error("row {row}: expected {expected} fields, found {found}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("column {column}: expected {expected} values, found {found}")]
    RaggedColumn {
        column: String,
        expected: usize,
        found: usize,
    },
    #[error("expected {expected} columns, found {found}")]
    ColumnCount { expected: usize, found: usize },
    #[error("row {row}: null value under reject policy")]
    NullRejected { row: usize },
    #[error("row {row}: expected a {expected} value, found {found}")]
    MixedTypes {
        row: usize,
        expected: DataType,
        found: DataType,
    },
    #[error("duplicate attribute name {0:?}")]
    DuplicateAttribute(String),
    #[error("attribute names must be non-empty")]
    EmptyAttributeName,
    #[error("{0} attributes exceed the supported maximum of 64")]
    TooManyAttributes(usize),
    #[error("unknown attribute {0:?}")]
    UnknownAttribute(String),
    #[error("trivial dependency: {0}")]
    TrivialDependency(String),
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("candidate budget of {0} validations exceeded")]
    BudgetExceeded(u64),
}
