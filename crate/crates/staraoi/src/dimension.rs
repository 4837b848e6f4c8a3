//! Dimension tables: the tabular encoding of concept trees.
//!
//! A categorical tree of depth `d` becomes a table with one row per leaf and
//! `d` columns, leaf level first and highest level last. A numeric tree is
//! compressed: one row per labeled range, with `start`/`fin` bound columns
//! followed by the label columns, so a range covering hundreds of raw values
//! still costs a single row.
//!
//! Tables are derived from trees at load time, never authored by hand; the
//! tree stays the single source of truth and the table is its join-ready
//! materialization.

use std::collections::HashMap;
use std::io::Write;

use crate::error::{Error, Result};
use crate::hierarchy::{ConceptTree, TreeKind, UNKNOWN_LEAF};
use crate::relation::{fmt_decimal, Value};

#[derive(Debug, Clone, PartialEq)]
pub struct DimensionTable {
    attribute: String,
    kind: TreeKind,
    /// Tree depth (levels including the leaf/raw level).
    depth: usize,
    columns: Vec<String>,
    rows: Vec<Vec<Value>>,
    aliases: Vec<(String, String)>,
    has_unknown: bool,
}

/// Converts a concept tree into its dimension table.
pub fn build_dimension_table(tree: &ConceptTree) -> DimensionTable {
    let depth = tree.depth();
    match tree.kind() {
        TreeKind::Categorical => {
            let columns = tree.level_names().to_vec();
            let rows = tree
                .leaves()
                .iter()
                .map(|leaf| {
                    let mut row = Vec::with_capacity(depth);
                    let mut cur = leaf.as_str();
                    row.push(Value::text(cur));
                    while let Some(p) = tree.parent_of(cur) {
                        row.push(Value::text(p));
                        cur = p;
                    }
                    debug_assert_eq!(row.len(), depth);
                    row
                })
                .collect();
            DimensionTable {
                attribute: tree.attribute().to_string(),
                kind: TreeKind::Categorical,
                depth,
                columns,
                rows,
                aliases: tree.aliases().to_vec(),
                has_unknown: tree.unknown_parent().is_some(),
            }
        }
        TreeKind::Numeric => {
            let leaf_name = tree.level_name(0);
            let mut columns = vec![
                format!("{leaf_name}_start"),
                format!("{leaf_name}_fin"),
            ];
            columns.extend(tree.level_names()[1..].iter().cloned());
            // ranges() is already sorted ascending by start
            let rows = tree
                .ranges()
                .iter()
                .map(|r| {
                    let mut row = vec![Value::number(r.start), Value::number(r.fin)];
                    let mut cur = r.label.as_str();
                    row.push(Value::text(cur));
                    while let Some(p) = tree.parent_of(cur) {
                        row.push(Value::text(p));
                        cur = p;
                    }
                    debug_assert_eq!(row.len(), 2 + (depth - 1));
                    row
                })
                .collect();
            DimensionTable {
                attribute: tree.attribute().to_string(),
                kind: TreeKind::Numeric,
                depth,
                columns,
                rows,
                aliases: Vec::new(),
                has_unknown: false,
            }
        }
    }
}

/// Number of dimension tables (one per concept tree).
pub fn dimension_count(dims: &[DimensionTable]) -> usize {
    dims.len()
}

/// Case-insensitive lookup of one attribute's dimension table.
pub fn find_dimension<'a>(dims: &'a [DimensionTable], attribute: &str) -> Option<&'a DimensionTable> {
    dims.iter()
        .find(|d| d.attribute.eq_ignore_ascii_case(attribute))
}

impl DimensionTable {
    pub fn attribute(&self) -> &str {
        &self.attribute
    }

    pub fn kind(&self) -> TreeKind {
        self.kind
    }

    pub fn is_numeric(&self) -> bool {
        self.kind == TreeKind::Numeric
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn top_level(&self) -> usize {
        self.depth - 1
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Value>] {
        &self.rows
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    /// Column index holding the level-`level` concept.
    fn level_column_index(&self, level: usize) -> Result<usize> {
        match self.kind {
            TreeKind::Categorical if level < self.depth => Ok(level),
            TreeKind::Numeric if level >= 1 && level < self.depth => Ok(1 + level),
            _ => Err(Error::LevelOutOfRange {
                attribute: self.attribute.clone(),
                level,
                depth: self.depth,
            }),
        }
    }

    /// Column name for a level (used for display and emitted SQL).
    pub fn level_column(&self, level: usize) -> Result<&str> {
        Ok(&self.columns[self.level_column_index(level)?])
    }

    /// Leaf/bound join columns: the categorical leaf column, or the numeric
    /// `(start, fin)` pair.
    pub fn join_columns(&self) -> Vec<&str> {
        match self.kind {
            TreeKind::Categorical => vec![self.columns[0].as_str()],
            TreeKind::Numeric => vec![self.columns[0].as_str(), self.columns[1].as_str()],
        }
    }

    /// The level-`level` concept for the row matching `raw`: equality on the
    /// leaf column for categorical tables, range containment for numeric.
    pub fn lookup(&self, raw: &Value, level: usize) -> Result<Value> {
        let col = self.level_column_index(level)?;
        let row = self.match_row(raw)?;
        Ok(self.rows[row][col].clone())
    }

    fn match_row(&self, raw: &Value) -> Result<usize> {
        match (self.kind, raw) {
            (TreeKind::Categorical, Value::Text(s)) => {
                let leaf = self.resolve_leaf(s);
                self.rows
                    .iter()
                    .position(|r| matches!(&r[0], Value::Text(l) if l == leaf))
                    .ok_or_else(|| Error::Unmappable {
                        attribute: self.attribute.clone(),
                        value: s.clone(),
                    })
            }
            (TreeKind::Numeric, Value::Number(x)) => self
                .rows
                .iter()
                .position(|r| match (&r[0], &r[1]) {
                    (Value::Number(s), Value::Number(f)) => *x >= *s && *x <= *f,
                    _ => false,
                })
                .ok_or(Error::OutOfDomain {
                    attribute: self.attribute.clone(),
                    value: *x,
                }),
            (_, other) => Err(Error::Unmappable {
                attribute: self.attribute.clone(),
                value: other.to_string(),
            }),
        }
    }

    fn resolve_leaf<'a>(&'a self, raw: &'a str) -> &'a str {
        if let Some((_, leaf)) = self.aliases.iter().find(|(a, _)| a == raw) {
            return leaf;
        }
        if self.has_unknown
            && !self
                .rows
                .iter()
                .any(|r| matches!(&r[0], Value::Text(l) if l == raw))
        {
            return UNKNOWN_LEAF;
        }
        raw
    }

    /// Hash index from leaf label to row, for join-style probing.
    pub(crate) fn probe_index(&self) -> ProbeIndex<'_> {
        match self.kind {
            TreeKind::Categorical => {
                let mut by_leaf = HashMap::with_capacity(self.rows.len());
                for (i, r) in self.rows.iter().enumerate() {
                    if let Value::Text(l) = &r[0] {
                        by_leaf.insert(l.as_str(), i);
                    }
                }
                ProbeIndex {
                    dim: self,
                    by_leaf: Some(by_leaf),
                }
            }
            TreeKind::Numeric => ProbeIndex {
                dim: self,
                by_leaf: None,
            },
        }
    }

    /// Writes the table as delimited text with a header line. Numeric bounds
    /// render in their shortest form with at least one fraction digit.
    pub fn write_delimited<W: Write>(&self, w: W, delimiter: u8) -> Result<()> {
        let mut wtr = csv::WriterBuilder::new()
            .delimiter(delimiter)
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        wtr.write_record(&self.columns).map_err(csv_io)?;
        for row in &self.rows {
            let rec: Vec<String> = row
                .iter()
                .map(|v| match v {
                    Value::Number(n) => fmt_decimal(*n),
                    other => other.to_string(),
                })
                .collect();
            wtr.write_record(&rec).map_err(csv_io)?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn to_delimited_string(&self, delimiter: u8) -> Result<String> {
        let mut buf = Vec::new();
        self.write_delimited(&mut buf, delimiter)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }
}

fn csv_io(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Borrowed probe structure used by the star path's group-by join.
pub(crate) struct ProbeIndex<'a> {
    dim: &'a DimensionTable,
    by_leaf: Option<HashMap<&'a str, usize>>,
}

impl<'a> ProbeIndex<'a> {
    pub(crate) fn lookup(&self, raw: &Value, col: usize) -> Result<&'a Value> {
        let row = match (&self.by_leaf, raw) {
            (Some(idx), Value::Text(s)) => {
                let leaf = self.dim.resolve_leaf(s);
                *idx.get(leaf).ok_or_else(|| Error::Unmappable {
                    attribute: self.dim.attribute.clone(),
                    value: s.clone(),
                })?
            }
            _ => self.dim.match_row(raw)?,
        };
        Ok(&self.dim.rows[row][col])
    }

    pub(crate) fn level_column_index(&self, level: usize) -> Result<usize> {
        self.dim.level_column_index(level)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    
    use crate::samples;

    fn paper_dims() -> Vec<DimensionTable> {
        samples::graduate_trees()
            .iter()
            .map(build_dimension_table)
            .collect()
    }

    fn dim<'a>(dims: &'a [DimensionTable], name: &str) -> &'a DimensionTable {
        find_dimension(dims, name).unwrap()
    }

    #[test]
    fn major_table_has_ten_rows_and_two_columns() {
        let dims = paper_dims();
        let major = dim(&dims, "Major");
        assert_eq!(major.columns(), &["Major", "StudyProg"]);
        assert_eq!(major.row_count(), 10);
        assert!(major
            .rows()
            .contains(&vec![Value::text("Computing"), Value::text("Science")]));
        assert!(major
            .rows()
            .contains(&vec![Value::text("History"), Value::text("Art")]));
    }

    #[test]
    fn birthplace_table_has_eleven_rows_and_three_columns() {
        let dims = paper_dims();
        let birth = dim(&dims, "Birthplace");
        assert_eq!(birth.columns(), &["Birthplace", "City", "Country"]);
        assert_eq!(birth.row_count(), 11);
        assert!(birth.rows().contains(&vec![
            Value::text("Bombay"),
            Value::text("India"),
            Value::text("Foreign")
        ]));
    }

    #[test]
    fn gpa_table_compresses_ranges_to_four_rows() {
        let dims = paper_dims();
        let gpa = dim(&dims, "GPA");
        assert_eq!(gpa.columns(), &["GPA_start", "GPA_fin", "range"]);
        assert_eq!(gpa.row_count(), 4);
        assert_eq!(
            gpa.rows()[0],
            vec![Value::number(0.0), Value::number(1.99), Value::text("Poor")]
        );
        assert_eq!(
            gpa.rows()[3],
            vec![
                Value::number(3.5),
                Value::number(4.0),
                Value::text("Excellent")
            ]
        );
    }

    #[test]
    fn row_counts_match_the_reference_tables() {
        let dims = paper_dims();
        assert_eq!(dim(&dims, "Major").row_count(), 10);
        assert_eq!(dim(&dims, "Category").row_count(), 7);
        assert_eq!(dim(&dims, "Birthplace").row_count(), 11);
        assert_eq!(dim(&dims, "GPA").row_count(), 4);
    }

    #[test]
    fn lookup_walks_categorical_levels() {
        let dims = paper_dims();
        let birth = dim(&dims, "Birthplace");
        assert_eq!(
            birth.lookup(&Value::text("Victoria"), 2).unwrap(),
            Value::text("Canada")
        );
        assert_eq!(
            birth.lookup(&Value::text("Victoria"), 1).unwrap(),
            Value::text("British Columbia")
        );
        assert_eq!(
            birth.lookup(&Value::text("Victoria"), 0).unwrap(),
            Value::text("Victoria")
        );
    }

    #[test]
    fn lookup_contains_numeric_values_in_ranges() {
        let dims = paper_dims();
        let gpa = dim(&dims, "GPA");
        assert_eq!(
            gpa.lookup(&Value::number(3.2), 1).unwrap(),
            Value::text("Good")
        );
        assert!(matches!(
            gpa.lookup(&Value::number(4.5), 1),
            Err(Error::OutOfDomain { .. })
        ));
        assert!(matches!(
            gpa.lookup(&Value::number(3.2), 0),
            Err(Error::LevelOutOfRange { .. })
        ));
    }

    #[test]
    fn lookup_of_unlisted_leaf_errors() {
        let dims = paper_dims();
        let major = dim(&dims, "Major");
        assert!(matches!(
            major.lookup(&Value::text("Philosophy"), 1),
            Err(Error::Unmappable { .. })
        ));
    }

    #[test]
    fn lookup_resolves_aliases_like_the_join_would() {
        let dims = paper_dims();
        let cat = dim(&dims, "Category");
        assert_eq!(
            cat.lookup(&Value::text("M.S."), 1).unwrap(),
            Value::text("graduate")
        );
    }

    #[test]
    fn lookup_agrees_with_iterated_ascend_over_every_leaf_and_level() {
        let trees = samples::graduate_trees();
        for tree in &trees {
            let d = build_dimension_table(tree);
            if tree.is_numeric() {
                continue;
            }
            for leaf in tree.leaves() {
                for level in 0..tree.depth() {
                    let mut v = Value::text(leaf.clone());
                    for step in 0..level {
                        v = tree.ascend(&v, step).unwrap();
                    }
                    assert_eq!(
                        d.lookup(&Value::text(leaf.clone()), level).unwrap(),
                        v,
                        "{}: {leaf} at level {level}",
                        tree.attribute()
                    );
                }
            }
        }
    }

    #[test]
    fn dimension_count_counts_tables() {
        let dims = paper_dims();
        assert_eq!(dimension_count(&dims), 4);
        assert_eq!(dimension_count(&[]), 0);
        let extra = parse_extra();
        let mut five = dims.clone();
        five.push(build_dimension_table(&extra));
        assert_eq!(dimension_count(&five), 5);
    }

    fn parse_extra() -> crate::hierarchy::ConceptTree {
        crate::hierarchy::parse_hierarchy("tree Extra\nP: a, b\n", "<test>")
            .unwrap()
            .remove(0)
    }

    #[test]
    fn deep_numeric_tree_gets_one_label_column_per_level() {
        let src = "tree Score numeric\n  levels Score, band, verdict\n  Low: 0.0 .. 4.9\n  High: 5.0 .. 10.0\n  Fail: Low\n  Pass: High\n";
        let tree = crate::hierarchy::parse_hierarchy(src, "<test>")
            .unwrap()
            .remove(0);
        let dim = build_dimension_table(&tree);
        assert_eq!(dim.columns(), &["Score_start", "Score_fin", "band", "verdict"]);
        assert_eq!(dim.row_count(), 2);
        assert_eq!(
            dim.lookup(&Value::number(7.0), 2).unwrap(),
            Value::text("Pass")
        );
    }

    #[test]
    fn unknown_routing_reaches_the_synthetic_leaf_row() {
        let src = "tree T\nA: x, y\nB: z\nunknown B\n";
        let tree = crate::hierarchy::parse_hierarchy(src, "<test>")
            .unwrap()
            .remove(0);
        let dim = build_dimension_table(&tree);
        assert_eq!(dim.row_count(), 4);
        assert_eq!(
            dim.lookup(&Value::text("never-seen"), 1).unwrap(),
            Value::text("B")
        );
    }

    #[test]
    fn export_renders_bounds_like_the_printed_tables() {
        let dims = paper_dims();
        let gpa = dim(&dims, "GPA");
        let text = gpa.to_delimited_string(b',').unwrap();
        assert_eq!(
            text,
            "GPA_start,GPA_fin,range\n0.0,1.99,Poor\n2.0,2.99,Average\n3.0,3.49,Good\n3.5,4.0,Excellent\n"
        );
    }
}
