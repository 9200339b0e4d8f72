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

//! Typed relations and order-preserving rank encoding.
//!
//! Every column of a [`Relation`] is stored twice: once as the parsed
//! [`Value`]s (kept for reference checks and reporting) and once as dense
//! integer ranks. All dependency machinery runs on the ranks; two rows get
//! the same rank in a column iff their values are equal, and a smaller rank
//! iff their value sorts first under the column type.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on the number of attributes; attribute sets are 64-bit masks.
pub const MAX_ATTRIBUTES: usize = 64;

/// Index of an attribute within its schema.
pub type AttrId = usize;

/// Rank of a value within its column. Null takes 0 (nulls first) or d + 1
/// (nulls last); non-null values use 1..=d.
pub type Rank = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DataType {
    Integer,
    Float,
    Text,
    Date,
}

impl fmt::Display for DataType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            DataType::Integer => "integer",
            DataType::Float => "float",
            DataType::Text => "text",
            DataType::Date => "date",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NullPolicy {
    #[default]
    NullsFirst,
    NullsLast,
    Reject,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Attribute {
    pub name: String,
    #[serde(rename = "type")]
    pub data_type: DataType,
}

impl Attribute {
    pub fn new(name: impl Into<String>, data_type: DataType) -> Self {
        Attribute {
            name: name.into(),
            data_type,
        }
    }
}

/// Ordered attribute list plus the null policy applied to every column.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Schema {
    attributes: Vec<Attribute>,
    null_policy: NullPolicy,
}

// Schema files are either `{"attributes": [...], "null_policy": ...}` or a
// bare attribute array.
#[derive(Deserialize)]
#[serde(untagged)]
enum SchemaFile {
    Full {
        attributes: Vec<Attribute>,
        #[serde(default)]
        null_policy: NullPolicy,
    },
    Bare(Vec<Attribute>),
}

impl Schema {
    pub fn new(attributes: Vec<Attribute>, null_policy: NullPolicy) -> Result<Self> {
        if attributes.len() > MAX_ATTRIBUTES {
            return Err(Error::TooManyAttributes(attributes.len()));
        }
        let mut seen = HashSet::new();
        for a in &attributes {
            if a.name.is_empty() {
                return Err(Error::EmptyAttributeName);
            }
            if !seen.insert(a.name.as_str()) {
                return Err(Error::DuplicateAttribute(a.name.clone()));
            }
        }
        Ok(Schema {
            attributes,
            null_policy,
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SchemaFile =
            serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        match file {
            SchemaFile::Full {
                attributes,
                null_policy,
            } => Schema::new(attributes, null_policy),
            SchemaFile::Bare(attributes) => Schema::new(attributes, NullPolicy::default()),
        }
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let mut text = String::new();
        File::open(path)
            .and_then(|mut f| f.read_to_string(&mut text))
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Schema::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("schema serializes")
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn len(&self) -> usize {
        self.attributes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attributes.is_empty()
    }

    pub fn null_policy(&self) -> NullPolicy {
        self.null_policy
    }

    pub fn with_null_policy(mut self, policy: NullPolicy) -> Self {
        self.null_policy = policy;
        self
    }

    pub fn names(&self) -> Vec<String> {
        self.attributes.iter().map(|a| a.name.clone()).collect()
    }

    pub fn position(&self, name: &str) -> Option<AttrId> {
        self.attributes.iter().position(|a| a.name == name)
    }

    pub fn name(&self, attr: AttrId) -> &str {
        &self.attributes[attr].name
    }
}

/// A parsed cell. Floats are never NaN and `-0.0` is stored as `0.0`.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Null,
    Integer(i64),
    Float(f64),
    Text(String),
    Date(NaiveDate),
}

impl Value {
    pub fn is_null(&self) -> bool {
        matches!(self, Value::Null)
    }

    pub fn data_type(&self) -> Option<DataType> {
        match self {
            Value::Null => None,
            Value::Integer(_) => Some(DataType::Integer),
            Value::Float(_) => Some(DataType::Float),
            Value::Text(_) => Some(DataType::Text),
            Value::Date(_) => Some(DataType::Date),
        }
    }

    /// Parses one CSV field under `data_type`. An empty field is null.
    pub fn parse(field: &str, data_type: DataType) -> std::result::Result<Value, String> {
        if field.is_empty() {
            return Ok(Value::Null);
        }
        match data_type {
            DataType::Integer => field
                .trim()
                .parse::<i64>()
                .map(Value::Integer)
                .map_err(|e| format!("invalid integer {field:?}: {e}")),
            DataType::Float => {
                let x = field
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| format!("invalid float {field:?}: {e}"))?;
                Value::float(x).ok_or_else(|| format!("NaN is not orderable: {field:?}"))
            }
            DataType::Text => Ok(Value::Text(field.to_string())),
            DataType::Date => NaiveDate::parse_from_str(field.trim(), "%Y-%m-%d")
                .map(Value::Date)
                .map_err(|e| format!("invalid date {field:?}: {e}")),
        }
    }

    pub fn float(x: f64) -> Option<Value> {
        if x.is_nan() {
            None
        } else if x == 0.0 {
            Some(Value::Float(0.0))
        } else {
            Some(Value::Float(x))
        }
    }

    /// Order between two non-null values of the same type; `None` otherwise.
    /// Text compares by Unicode code point.
    pub fn cmp_same_type(&self, other: &Value) -> Option<Ordering> {
        match (self, other) {
            (Value::Integer(a), Value::Integer(b)) => Some(a.cmp(b)),
            (Value::Float(a), Value::Float(b)) => a.partial_cmp(b),
            (Value::Text(a), Value::Text(b)) => Some(a.cmp(b)),
            (Value::Date(a), Value::Date(b)) => Some(a.cmp(b)),
            _ => None,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Null => f.write_str("NULL"),
            Value::Integer(v) => write!(f, "{v}"),
            Value::Float(v) => write!(f, "{v}"),
            Value::Text(v) => f.write_str(v),
            Value::Date(v) => write!(f, "{}", v.format("%Y-%m-%d")),
        }
    }
}

/// Encodes a column as dense ranks that preserve equality and order.
pub fn encode_ranks(
    values: &[Value],
    data_type: DataType,
    null_policy: NullPolicy,
) -> Result<Vec<Rank>> {
    let mut distinct: Vec<&Value> = Vec::new();
    for (row, v) in values.iter().enumerate() {
        match v.data_type() {
            None => {
                if null_policy == NullPolicy::Reject {
                    return Err(Error::NullRejected { row: row + 1 });
                }
            }
            Some(t) if t == data_type => distinct.push(v),
            Some(t) => {
                return Err(Error::MixedTypes {
                    row: row + 1,
                    expected: data_type,
                    found: t,
                })
            }
        }
    }
    let by_value = |a: &&Value, b: &&Value| a.cmp_same_type(b).expect("homogeneous column");
    distinct.sort_by(by_value);
    distinct.dedup_by(|a, b| a.cmp_same_type(b) == Some(Ordering::Equal));
    let d = distinct.len() as Rank;
    let null_rank = match null_policy {
        NullPolicy::NullsFirst => 0,
        _ => d + 1,
    };
    Ok(values
        .iter()
        .map(|v| {
            if v.is_null() {
                null_rank
            } else {
                let pos = distinct
                    .binary_search_by(|probe| probe.cmp_same_type(v).expect("homogeneous column"))
                    .expect("value present in distinct list");
                pos as Rank + 1
            }
        })
        .collect())
}

/// An immutable relation instance. Row `i` (0-based) is tuple `t{i+1}`.
#[derive(Clone, Debug)]
pub struct Relation {
    schema: Schema,
    row_count: usize,
    values: Vec<Vec<Value>>,
    ranks: Vec<Vec<Rank>>,
}

impl Relation {
    /// Builds a relation from column-major values.
    pub fn from_columns(schema: Schema, columns: Vec<Vec<Value>>) -> Result<Self> {
        if columns.len() != schema.len() {
            return Err(Error::ColumnCount {
                expected: schema.len(),
                found: columns.len(),
            });
        }
        let row_count = columns.first().map_or(0, Vec::len);
        let mut ranks = Vec::with_capacity(columns.len());
        for (attr, col) in schema.attributes().iter().zip(&columns) {
            if col.len() != row_count {
                return Err(Error::RaggedColumn {
                    column: attr.name.clone(),
                    expected: row_count,
                    found: col.len(),
                });
            }
            let encoded =
                encode_ranks(col, attr.data_type, schema.null_policy()).map_err(|e| match e {
                    Error::NullRejected { row } => Error::Parse {
                        row,
                        column: attr.name.clone(),
                        reason: "null under reject policy".into(),
                    },
                    other => other,
                })?;
            ranks.push(encoded);
        }
        Ok(Relation {
            schema,
            row_count,
            values: columns,
            ranks,
        })
    }

    /// Builds a relation from row-major values.
    pub fn from_rows(schema: Schema, rows: Vec<Vec<Value>>) -> Result<Self> {
        let width = schema.len();
        let mut columns = vec![Vec::with_capacity(rows.len()); width];
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != width {
                return Err(Error::RaggedRow {
                    row: i + 1,
                    expected: width,
                    found: row.len(),
                });
            }
            for (col, v) in columns.iter_mut().zip(row) {
                col.push(v);
            }
        }
        Relation::from_columns(schema, columns)
    }

    /// Integer-only convenience constructor, mostly for tests.
    pub fn from_int_columns(names: &[&str], columns: Vec<Vec<i64>>) -> Result<Self> {
        let schema = Schema::new(
            names
                .iter()
                .map(|n| Attribute::new(*n, DataType::Integer))
                .collect(),
            NullPolicy::NullsFirst,
        )?;
        let columns = columns
            .into_iter()
            .map(|c| c.into_iter().map(Value::Integer).collect())
            .collect();
        Relation::from_columns(schema, columns)
    }

    pub fn load_csv(path: &Path, schema: Schema, has_header: bool) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Relation::read_csv(file, schema, has_header)
    }

    /// Reads RFC-4180 CSV. File order becomes tuple order.
    pub fn read_csv<R: Read>(reader: R, schema: Schema, has_header: bool) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_reader(reader);
        let width = schema.len();
        let mut columns: Vec<Vec<Value>> = vec![Vec::new(); width];
        let mut records = rdr.records();
        if has_header {
            if let Some(header) = records.next() {
                let header = header.map_err(|e| Error::Csv(e.to_string()))?;
                let mut seen = HashSet::new();
                for name in header.iter() {
                    if !seen.insert(name.to_string()) {
                        return Err(Error::DuplicateAttribute(name.to_string()));
                    }
                }
                if header.len() != width {
                    return Err(Error::RaggedRow {
                        row: 0,
                        expected: width,
                        found: header.len(),
                    });
                }
            }
        }
        for (i, record) in records.enumerate() {
            let record = record.map_err(|e| Error::Csv(e.to_string()))?;
            let row = i + 1;
            if record.len() != width {
                return Err(Error::RaggedRow {
                    row,
                    expected: width,
                    found: record.len(),
                });
            }
            for (c, (field, attr)) in record.iter().zip(schema.attributes()).enumerate() {
                let v = Value::parse(field, attr.data_type).map_err(|reason| Error::Parse {
                    row,
                    column: attr.name.clone(),
                    reason,
                })?;
                if v.is_null() && schema.null_policy() == NullPolicy::Reject {
                    return Err(Error::Parse {
                        row,
                        column: attr.name.clone(),
                        reason: "null under reject policy".into(),
                    });
                }
                columns[c].push(v);
            }
        }
        Relation::from_columns(schema, columns)
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn row_count(&self) -> usize {
        self.row_count
    }

    pub fn attr_count(&self) -> usize {
        self.schema.len()
    }

    pub fn ranks(&self, attr: AttrId) -> &[Rank] {
        &self.ranks[attr]
    }

    pub fn rank(&self, row: usize, attr: AttrId) -> Rank {
        self.ranks[attr][row]
    }

    pub fn values(&self, attr: AttrId) -> &[Value] {
        &self.values[attr]
    }

    pub fn value(&self, row: usize, attr: AttrId) -> &Value {
        &self.values[attr][row]
    }

    pub fn attr(&self, name: &str) -> Result<AttrId> {
        self.schema
            .position(name)
            .ok_or_else(|| Error::UnknownAttribute(name.to_string()))
    }

    pub(crate) fn check_attr(&self, attr: AttrId) -> Result<()> {
        if attr < self.attr_count() {
            Ok(())
        } else {
            Err(Error::UnknownAttribute(format!("#{attr}")))
        }
    }

    /// Keeps only the listed attributes, in the given order.
    pub fn project(&self, attrs: &[AttrId]) -> Result<Relation> {
        for &a in attrs {
            self.check_attr(a)?;
        }
        let schema = Schema::new(
            attrs
                .iter()
                .map(|&a| self.schema.attributes()[a].clone())
                .collect(),
            self.schema.null_policy(),
        )?;
        let columns = attrs.iter().map(|&a| self.values[a].clone()).collect();
        Relation::from_columns(schema, columns)
    }
}

/// Guesses a column type by trial parsing: integer, then float, then date,
/// falling back to text. Empty fields are ignored.
pub fn infer_schema<R: Read>(reader: R, null_policy: NullPolicy) -> Result<Schema> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let names: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::Csv(e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    let order = [DataType::Integer, DataType::Float, DataType::Date];
    let mut candidate = vec![0usize; names.len()];
    for record in rdr.records() {
        let record = record.map_err(|e| Error::Csv(e.to_string()))?;
        for (c, field) in record.iter().enumerate().take(names.len()) {
            while candidate[c] < order.len() && Value::parse(field, order[candidate[c]]).is_err() {
                candidate[c] += 1;
            }
        }
    }
    let attributes = names
        .into_iter()
        .zip(candidate)
        .map(|(n, c)| Attribute::new(n, order.get(c).copied().unwrap_or(DataType::Text)))
        .collect();
    Schema::new(attributes, null_policy)
}
