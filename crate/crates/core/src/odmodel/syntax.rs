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

//! Text form of order dependencies.
//!
//! ```text
//! [A,B] -> [C,D]        list OD (also `↦`)
//! {A,B}: [] |-> C       constant (also `->` or `↦`)
//! {A}: B ~ C            order compatibility
//! ```
//!
//! Names run up to whitespace or one of `[]{},:~"`; other names are written
//! in double quotes, with `""` for a literal quote.

use std::borrow::Cow;

use super::{CanonicalOD, ListOD, OdForm, OrderSpec};
use crate::attrset::AttributeSet;
use crate::error::{Error, Result};
use crate::relation::{AttrId, Schema};

const DELIMITERS: &[char] = &['[', ']', '{', '}', ',', ':', '~', '"'];
const ARROWS: &[&str] = &["|->", "->", "↦"];

/// A parsed OD whose attribute names are not yet resolved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawOd {
    List {
        lhs: Vec<String>,
        rhs: Vec<String>,
    },
    Constant {
        context: Vec<String>,
        attr: String,
    },
    OrderCompat {
        context: Vec<String>,
        a: String,
        b: String,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParsedOd {
    List(ListOD),
    Canonical(CanonicalOD),
}

impl RawOd {
    /// Names in order of first appearance.
    pub fn names(&self) -> Vec<&str> {
        let all: Vec<&String> = match self {
            RawOd::List { lhs, rhs } => lhs.iter().chain(rhs).collect(),
            RawOd::Constant { context, attr } => context.iter().chain([attr]).collect(),
            RawOd::OrderCompat { context, a, b } => context.iter().chain([a, b]).collect(),
        };
        let mut out: Vec<&str> = Vec::new();
        for n in all {
            if !out.contains(&n.as_str()) {
                out.push(n);
            }
        }
        out
    }

    pub fn resolve(&self, mut lookup: impl FnMut(&str) -> Result<AttrId>) -> Result<ParsedOd> {
        let mut ids =
            |names: &[String]| -> Result<Vec<AttrId>> { names.iter().map(|n| lookup(n)).collect() };
        match self {
            RawOd::List { lhs, rhs } => {
                let lhs = ids(lhs)?;
                let rhs = ids(rhs)?;
                Ok(ParsedOd::List(ListOD::new(
                    OrderSpec::new(lhs),
                    OrderSpec::new(rhs),
                )))
            }
            RawOd::Constant { context, attr } => {
                let ctx: AttributeSet = ids(context)?.into_iter().collect();
                let a = ids(std::slice::from_ref(attr))?[0];
                if ctx.contains(a) {
                    return Err(Error::TrivialDependency(format!(
                        "{attr} is in its own context"
                    )));
                }
                Ok(ParsedOd::Canonical(CanonicalOD::constant(ctx, a)?))
            }
            RawOd::OrderCompat { context, a, b } => {
                let ctx: AttributeSet = ids(context)?.into_iter().collect();
                let ia = ids(std::slice::from_ref(a))?[0];
                let ib = ids(std::slice::from_ref(b))?[0];
                if ia == ib {
                    return Err(Error::TrivialDependency(format!(
                        "{a} is compared with itself"
                    )));
                }
                for (name, id) in [(a, ia), (b, ib)] {
                    if ctx.contains(id) {
                        return Err(Error::TrivialDependency(format!(
                            "{name} is in the context"
                        )));
                    }
                }
                Ok(ParsedOd::Canonical(CanonicalOD::order_compat(ctx, ia, ib)?))
            }
        }
    }
}

/// Parses and resolves names against a schema.
pub fn parse_od(text: &str, schema: &Schema) -> Result<ParsedOd> {
    parse_raw(text)?.resolve(|n| {
        schema
            .position(n)
            .ok_or_else(|| Error::UnknownAttribute(n.to_string()))
    })
}

/// Like [`parse_od`] but rejects list ODs.
pub fn parse_canonical(text: &str, schema: &Schema) -> Result<CanonicalOD> {
    match parse_od(text, schema)? {
        ParsedOd::Canonical(c) => Ok(c),
        ParsedOd::List(_) => Err(Error::Syntax {
            offset: 0,
            message: "expected a canonical OD, found a list OD".into(),
        }),
    }
}

pub fn parse_raw(text: &str) -> Result<RawOd> {
    let mut p = Parser { src: text, pos: 0 };
    p.skip_ws();
    let od = if p.peek() == Some('[') {
        let lhs = p.list('[', ']')?;
        p.arrow()?;
        let rhs = p.list('[', ']')?;
        RawOd::List { lhs, rhs }
    } else if p.peek() == Some('{') {
        let context = p.list('{', '}')?;
        p.expect(":")?;
        p.skip_ws();
        if p.peek() == Some('[') {
            p.expect("[")?;
            p.expect("]")?;
            p.arrow()?;
            let attr = p.name()?;
            RawOd::Constant { context, attr }
        } else {
            let a = p.name()?;
            p.expect("~")?;
            let b = p.name()?;
            RawOd::OrderCompat { context, a, b }
        }
    } else {
        return Err(p.error("expected '[' or '{'"));
    };
    p.skip_ws();
    if p.pos < p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(od)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{token}'")))
        }
    }

    fn arrow(&mut self) -> Result<()> {
        if ARROWS.iter().any(|a| self.eat(a)) {
            Ok(())
        } else {
            Err(self.error("expected '->'"))
        }
    }

    fn list(&mut self, open: char, close: char) -> Result<Vec<String>> {
        self.expect(&open.to_string())?;
        let mut names = Vec::new();
        self.skip_ws();
        if self.eat(&close.to_string()) {
            return Ok(names);
        }
        loop {
            names.push(self.name()?);
            if self.eat(",") {
                continue;
            }
            self.expect(&close.to_string())?;
            return Ok(names);
        }
    }

    fn name(&mut self) -> Result<String> {
        self.skip_ws();
        if self.peek() == Some('"') {
            return self.quoted();
        }
        let len = self
            .rest()
            .find(|c: char| c.is_whitespace() || DELIMITERS.contains(&c))
            .unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.error("expected an attribute name"));
        }
        let name = self.rest()[..len].to_string();
        self.pos += len;
        Ok(name)
    }

    fn quoted(&mut self) -> Result<String> {
        let start = self.pos;
        self.pos += 1;
        let mut out = String::new();
        loop {
            let Some(c) = self.peek() else {
                self.pos = start;
                return Err(self.error("unterminated quoted name"));
            };
            self.pos += c.len_utf8();
            if c == '"' {
                if self.peek() == Some('"') {
                    self.pos += 1;
                    out.push('"');
                } else {
                    break;
                }
            } else {
                out.push(c);
            }
        }
        if out.is_empty() {
            self.pos = start;
            return Err(self.error("empty attribute name"));
        }
        Ok(out)
    }
}

/// Quotes a name when it would not read back as a bare name.
pub fn format_name(name: &str) -> Cow<'_, str> {
    let bare = !name.is_empty()
        && !name
            .chars()
            .any(|c| c.is_whitespace() || DELIMITERS.contains(&c))
        && !ARROWS.iter().any(|a| name.contains(a));
    if bare {
        Cow::Borrowed(name)
    } else {
        Cow::Owned(format!("\"{}\"", name.replace('"', "\"\"")))
    }
}

fn name_of<S: AsRef<str>>(names: &[S], a: AttrId) -> Cow<'_, str> {
    match names.get(a) {
        Some(n) => format_name(n.as_ref()),
        None => Cow::Owned(format!("#{a}")),
    }
}

fn join<S: AsRef<str>>(names: &[S], attrs: impl Iterator<Item = AttrId>) -> String {
    attrs
        .map(|a| name_of(names, a).into_owned())
        .collect::<Vec<_>>()
        .join(",")
}

pub fn format_canonical<S: AsRef<str>>(od: &CanonicalOD, names: &[S]) -> String {
    let ctx = join(names, od.context().iter());
    match od.form() {
        OdForm::Constant(a) => format!("{{{ctx}}}: [] |-> {}", name_of(names, a)),
        OdForm::OrderCompat(a, b) => {
            format!("{{{ctx}}}: {} ~ {}", name_of(names, a), name_of(names, b))
        }
    }
}

pub fn format_list<S: AsRef<str>>(od: &ListOD, names: &[S]) -> String {
    format!(
        "[{}] -> [{}]",
        join(names, od.lhs.attrs().iter().copied()),
        join(names, od.rhs.attrs().iter().copied())
    )
}
