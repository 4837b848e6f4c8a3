//! Attribute-oriented induction over in-memory relations, two ways.
//!
//! The crate characterizes a target class of tuples by generalizing
//! attribute values up per-attribute concept trees and merging identical
//! tuples, producing a compact generalized relation and a quantitative
//! characteristic rule. Two interchangeable engines are provided:
//!
//! - **classic** — the threshold-driven algorithm: attribute removal,
//!   level-at-a-time concept ascension under an attribute threshold, vote
//!   propagation, relation-threshold control, interactive further
//!   generalization and unioning. Over-generalization surfaces as the
//!   universal concept `ANY`.
//! - **star** — generalization as a star-schema query: concept trees are
//!   materialized as dimension tables, the fact relation joins each
//!   dimension at a selected level, and a group-by with counting replaces
//!   both thresholds and the explicit algorithm. `ANY` cannot occur, and
//!   picking lower levels is an OLAP-style drill-down.
//!
//! Both engines produce identical results when the classic thresholds are
//! set to the trees' top-level concept counts, which the test suite checks
//! on randomized instances.
//!
//! # Quick start
//!
//! ```
//! use staraoi::{build_dimension_table, samples, star_generalize, StarTask};
//!
//! let fact = samples::graduate_students();
//! let dims: Vec<_> = samples::graduate_trees()
//!     .iter()
//!     .map(build_dimension_table)
//!     .collect();
//! let task = StarTask::new("Category", "graduate", 1);
//! let result = star_generalize(&fact, &dims, &task).unwrap();
//! assert_eq!(result.relation().row_count(), 3);
//! ```
//!
//! # Runnable examples
//!
//! Each major capability has a self-contained example:
//!
//! ```text
//! cargo run --example dimension_tables      # trees -> dimension tables
//! cargo run --example paper_walkthrough     # both paths on the sample data
//! cargo run --example classic_thresholds    # threshold sweep 1..=6
//! cargo run --example star_rollup           # level selection + drill-down
//! cargo run --example unioning              # merge-set and drop unions
//! cargo run --example rule_rendering        # characteristic rules
//! cargo run --example synthetic_cross_check # randomized path equivalence
//! cargo run --example bench_report          # timing report
//! ```
//!
//! The thin `staraoi` binary drives the same library from task files; see
//! the README.

pub mod bench;
pub mod classic;
pub mod dimension;
pub mod error;
pub mod hierarchy;
pub mod relation;
pub mod report;
pub mod rules;
pub mod samples;
pub mod star;
pub mod synth;
pub mod task;

pub use classic::{
    classic_generalize, further_generalize, union_on, ClassicTask, GenAttribute,
    GeneralizedRelation, Step, UnionMode,
};
pub use dimension::{build_dimension_table, dimension_count, find_dimension, DimensionTable};
pub use error::{Error, Result};
pub use hierarchy::{
    find_tree, parse_hierarchy, serialize_hierarchy, ConceptHierarchy, ConceptTree, NumericRange,
    TreeKind,
};
pub use relation::{AttrKind, Attribute, Relation, Schema, Value};
pub use rules::{to_rule, CharacteristicRule, Conjunct, Disjunct, RuleValue};
pub use star::{drill_down, emit_sql, star_generalize, StarTask};
pub use synth::{generate_instance, generate_synthetic, BenchConfig};
