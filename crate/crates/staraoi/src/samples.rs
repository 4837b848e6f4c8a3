//! The bundled graduate-student demo dataset.
//!
//! Six students, four concept trees (major, category, birthplace, GPA).
//! Small enough to check by hand, rich enough to exercise every operation;
//! the runnable examples and the benchmark's reference instance all start
//! here.

use crate::error::Result;
use crate::hierarchy::{parse_hierarchy, ConceptTree};
use crate::relation::{AttrKind, Attribute, Relation, Schema};

/// `data/student.csv` as shipped.
pub const STUDENT_CSV: &str = include_str!("../data/student.csv");

/// `data/student.trees` as shipped.
pub const STUDENT_TREES: &str = include_str!("../data/student.trees");

/// `data/paper.task` as shipped.
pub const STUDENT_TASK: &str = include_str!("../data/paper.task");

/// Schema of the student relation: four text attributes and a numeric GPA.
pub fn graduate_schema() -> Schema {
    Schema::new(vec![
        Attribute::text("Name"),
        Attribute::text("Category"),
        Attribute::text("Major"),
        Attribute::text("Birthplace"),
        Attribute {
            name: "GPA".into(),
            kind: AttrKind::Numeric,
        },
    ])
    .expect("sample schema is valid")
}

/// The six-row student relation.
pub fn graduate_students() -> Relation {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(STUDENT_CSV.as_bytes());
    let records: Vec<Vec<String>> = rdr
        .records()
        .map(|r| {
            r.expect("sample csv is well-formed")
                .iter()
                .map(|f| f.to_string())
                .collect()
        })
        .collect();
    Relation::load(&records, graduate_schema()).expect("sample data matches its schema")
}

/// The four concept trees.
pub fn graduate_trees() -> Vec<ConceptTree> {
    parse_hierarchy(STUDENT_TREES, "student.trees").expect("sample hierarchy parses")
}

/// Convenience: data and trees together.
pub fn graduate_instance() -> Result<(Relation, Vec<ConceptTree>)> {
    Ok((graduate_students(), graduate_trees()))
}
