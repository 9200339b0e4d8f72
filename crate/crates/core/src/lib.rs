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

//! Discovery, validation and inference of order dependencies.
//!
//! ```
//! use orderdeps::{fastod, Relation};
//!
//! let rel = Relation::from_int_columns(
//!     &["year", "month", "day_of_year"],
//!     vec![vec![1, 1, 2, 2], vec![1, 2, 1, 2], vec![1, 32, 1, 32]],
//! )
//! .unwrap();
//! let names = rel.schema().names();
//! for od in fastod(&rel, None).minimal_ods.iter() {
//!     println!("{}", od.to_text(&names));
//! }
//! ```

pub mod attrset;
pub mod discovery;
pub mod error;
pub mod inference;
pub mod odmodel;
pub mod oracle;
pub mod partitions;
pub mod relation;

#[cfg(test)]
mod test_support;

pub use attrset::AttributeSet;
pub use discovery::{discover, fastod, fastod_unpruned, DiscoveryConfig, DiscoveryResult};
pub use error::{Error, Result};
pub use inference::{DerivationLimit, ODSet};
pub use odmodel::{CanonicalOD, ListOD, OdForm, OrderSpec};
pub use relation::{AttrId, Attribute, DataType, NullPolicy, Relation, Schema, Value};
