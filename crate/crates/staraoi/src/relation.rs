//! In-memory relation model: typed values, schemas, tuple storage and
//! identical-tuple merging with vote accumulation.
//!
//! Relations are immutable after construction; every operation returns a new
//! relation, so they can be shared freely across threads.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// A single cell of a relation.
///
/// `Any` is the distinguished most-general concept; it shows up only in
/// classic-path output after an attribute has been generalized past the top
/// of its tree. `Set` holds the label set produced by merge-set unioning.
#[derive(Debug, Clone)]
pub enum Value {
    Text(String),
    Number(f64),
    Any,
    Set(BTreeSet<String>),
}

impl Value {
    pub fn text(s: impl Into<String>) -> Value {
        Value::Text(s.into())
    }

    /// Builds a finite number, normalizing `-0.0` so equality is structural.
    pub fn number(n: f64) -> Value {
        debug_assert!(n.is_finite());
        Value::Number(if n == 0.0 { 0.0 } else { n })
    }

    pub fn is_any(&self) -> bool {
        matches!(self, Value::Any)
    }

    fn rank(&self) -> u8 {
        match self {
            Value::Any => 0,
            Value::Text(_) => 1,
            Value::Number(_) => 2,
            Value::Set(_) => 3,
        }
    }
}

impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Value::Text(a), Value::Text(b)) => a == b,
            (Value::Number(a), Value::Number(b)) => a.to_bits() == b.to_bits(),
            (Value::Any, Value::Any) => true,
            (Value::Set(a), Value::Set(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Value {}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Value {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Value::Text(a), Value::Text(b)) => a.cmp(b),
            (Value::Number(a), Value::Number(b)) => a.total_cmp(b),
            (Value::Set(a), Value::Set(b)) => a.cmp(b),
            _ => self.rank().cmp(&other.rank()),
        }
    }
}

impl std::hash::Hash for Value {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.rank().hash(state);
        match self {
            Value::Text(s) => s.hash(state),
            Value::Number(n) => n.to_bits().hash(state),
            Value::Any => {}
            Value::Set(s) => s.hash(state),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Text(s) => f.write_str(s),
            Value::Number(n) => f.write_str(&fmt_decimal(*n)),
            Value::Any => f.write_str("ANY"),
            Value::Set(s) => {
                f.write_str("{")?;
                for (i, v) in s.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    f.write_str(v)?;
                }
                f.write_str("}")
            }
        }
    }
}

/// Renders a finite decimal the way the dimension tables print bounds:
/// shortest form with at least one fraction digit (`0.0`, `1.99`, `3.5`).
pub fn fmt_decimal(n: f64) -> String {
    let mut s = format!("{}", n);
    if !s.contains('.') {
        s.push_str(".0");
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AttrKind {
    Text,
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Attribute {
    pub name: String,
    pub kind: AttrKind,
}

impl Attribute {
    pub fn text(name: impl Into<String>) -> Attribute {
        Attribute {
            name: name.into(),
            kind: AttrKind::Text,
        }
    }

    pub fn numeric(name: impl Into<String>) -> Attribute {
        Attribute {
            name: name.into(),
            kind: AttrKind::Numeric,
        }
    }
}

/// Ordered attribute list. Names are unique case-insensitively and lookups
/// ignore case; concept labels, by contrast, always compare exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    attrs: Vec<Attribute>,
}

impl Schema {
    pub fn new(attrs: Vec<Attribute>) -> Result<Schema> {
        for (i, a) in attrs.iter().enumerate() {
            if attrs[..i]
                .iter()
                .any(|b| b.name.eq_ignore_ascii_case(&a.name))
            {
                return Err(Error::DuplicateAttribute {
                    name: a.name.clone(),
                });
            }
        }
        Ok(Schema { attrs })
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.attrs
            .iter()
            .position(|a| a.name.eq_ignore_ascii_case(name))
    }

    pub fn attr(&self, idx: usize) -> &Attribute {
        &self.attrs[idx]
    }

    pub fn attrs(&self) -> &[Attribute] {
        &self.attrs
    }

    pub fn len(&self) -> usize {
        self.attrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.attrs.is_empty()
    }

    pub fn names(&self) -> Vec<&str> {
        self.attrs.iter().map(|a| a.name.as_str()).collect()
    }
}

/// A typed relation with an optional vote column.
///
/// Votes, when present, count how many original tuples each row covers; they
/// live outside the schema so generalization never has to special-case a
/// "vote attribute" by name. A relation produced by [`Relation::merge_identical`]
/// has pairwise-distinct rows; intermediate relations (e.g. a projection that
/// has not been re-merged yet) may carry duplicate rows with votes.
#[derive(Debug, Clone, PartialEq)]
pub struct Relation {
    schema: Schema,
    rows: Vec<Vec<Value>>,
    votes: Option<Vec<u64>>,
}

impl Relation {
    /// Builds a raw (vote-less) relation, validating arity and value kinds.
    pub fn new(schema: Schema, rows: Vec<Vec<Value>>) -> Result<Relation> {
        let r = Relation {
            schema,
            rows,
            votes: None,
        };
        r.check_shape()?;
        Ok(r)
    }

    /// Builds a relation with votes. All votes must be >= 1.
    pub fn with_votes(schema: Schema, rows: Vec<Vec<Value>>, votes: Vec<u64>) -> Result<Relation> {
        if votes.len() != rows.len() {
            return Err(Error::Config(format!(
                "{} rows but {} votes",
                rows.len(),
                votes.len()
            )));
        }
        if votes.contains(&0) {
            return Err(Error::Config("votes must be >= 1".into()));
        }
        let r = Relation {
            schema,
            rows,
            votes: Some(votes),
        };
        r.check_shape()?;
        Ok(r)
    }

    fn check_shape(&self) -> Result<()> {
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.schema.len() {
                return Err(Error::Arity {
                    row: i + 1,
                    expected: self.schema.len(),
                    found: row.len(),
                });
            }
            for (a, v) in self.schema.attrs().iter().zip(row) {
                let ok = match a.kind {
                    AttrKind::Text => !matches!(v, Value::Number(_)),
                    AttrKind::Numeric => matches!(v, Value::Number(_)),
                };
                if !ok {
                    return Err(Error::Config(format!(
                        "row {}: value {} does not match the kind of attribute {}",
                        i + 1,
                        v,
                        a.name
                    )));
                }
            }
        }
        Ok(())
    }

    /// Loads parsed tabular records against a schema. Fields are trimmed;
    /// numeric fields must parse as finite decimals. Row numbers in errors
    /// are 1-based data rows (the header does not count).
    pub fn load(records: &[Vec<String>], schema: Schema) -> Result<Relation> {
        let mut rows = Vec::with_capacity(records.len());
        for (i, rec) in records.iter().enumerate() {
            if rec.len() != schema.len() {
                return Err(Error::Arity {
                    row: i + 1,
                    expected: schema.len(),
                    found: rec.len(),
                });
            }
            let mut row = Vec::with_capacity(rec.len());
            for (a, field) in schema.attrs().iter().zip(rec) {
                let field = field.trim();
                match a.kind {
                    AttrKind::Text => row.push(Value::text(field)),
                    AttrKind::Numeric => match field.parse::<f64>() {
                        Ok(n) if n.is_finite() => row.push(Value::number(n)),
                        _ => {
                            return Err(Error::NumericParse {
                                row: i + 1,
                                column: a.name.clone(),
                                value: field.to_string(),
                            })
                        }
                    },
                }
            }
            rows.push(row);
        }
        Relation::new(schema, rows)
    }

    pub fn schema(&self) -> &Schema {
        &self.schema
    }

    pub fn rows(&self) -> &[Vec<Value>] {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn votes(&self) -> Option<&[u64]> {
        self.votes.as_deref()
    }

    /// Vote of row `i`; rows of a vote-less relation count 1 each.
    pub fn vote(&self, i: usize) -> u64 {
        self.votes.as_ref().map_or(1, |v| v[i])
    }

    pub fn total_votes(&self) -> u64 {
        match &self.votes {
            Some(v) => v.iter().sum(),
            None => self.rows.len() as u64,
        }
    }

    /// Number of distinct values in one column.
    pub fn distinct_count(&self, col: usize) -> usize {
        let mut seen: std::collections::HashSet<&Value> = std::collections::HashSet::new();
        for row in &self.rows {
            seen.insert(&row[col]);
        }
        seen.len()
    }

    /// Merges identical rows, summing votes, and canonicalizes row order
    /// (descending vote, then lexicographic by values).
    pub fn merge_identical(&self) -> Relation {
        let mut groups: HashMap<&[Value], u64> = HashMap::new();
        for (i, row) in self.rows.iter().enumerate() {
            *groups.entry(row.as_slice()).or_insert(0) += self.vote(i);
        }
        let mut merged: Vec<(Vec<Value>, u64)> = groups
            .into_iter()
            .map(|(row, vote)| (row.to_vec(), vote))
            .collect();
        sort_canonical(&mut merged);
        let (rows, votes) = merged.into_iter().unzip();
        Relation {
            schema: self.schema.clone(),
            rows,
            votes: Some(votes),
        }
    }

    /// Projects onto the named attributes, in the given order. Votes are
    /// carried through unmerged; callers re-merge when they need distinct rows.
    pub fn project(&self, names: &[&str]) -> Result<Relation> {
        let mut indices = Vec::with_capacity(names.len());
        for name in names {
            match self.schema.index_of(name) {
                Some(i) => indices.push(i),
                None => {
                    return Err(Error::UnknownAttribute {
                        name: (*name).to_string(),
                    })
                }
            }
        }
        let schema = Schema::new(
            indices
                .iter()
                .map(|&i| self.schema.attr(i).clone())
                .collect(),
        )?;
        let rows = self
            .rows
            .iter()
            .map(|row| indices.iter().map(|&i| row[i].clone()).collect())
            .collect();
        Ok(Relation {
            schema,
            rows,
            votes: self.votes.clone(),
        })
    }
}

/// Canonical output order: descending vote, then lexicographic by values.
pub(crate) fn sort_canonical(rows: &mut [(Vec<Value>, u64)]) {
    rows.sort_by(|(ra, va), (rb, vb)| vb.cmp(va).then_with(|| ra.cmp(rb)));
}
