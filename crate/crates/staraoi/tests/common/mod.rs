//! Shared fixtures and independent oracles for the integration suites.
//!
//! The oracles deliberately avoid the library's own `ascend`/grouping code
//! paths: they walk raw tree data (parent maps, alias lists, range bounds)
//! and group through ordered maps, so agreement with the engine is a real
//! cross-check rather than the same code run twice.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use staraoi::hierarchy::find_tree;
use staraoi::{samples, ConceptTree, Relation, Value};

pub fn paper_instance() -> (Relation, Vec<ConceptTree>) {
    (samples::graduate_students(), samples::graduate_trees())
}

pub fn data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests")
        .join("golden")
}

fn resolve_leaf(tree: &ConceptTree, raw: &str) -> String {
    if tree.concept_level(raw) == Some(0) {
        return raw.to_string();
    }
    for (a, leaf) in tree.aliases() {
        if a == raw {
            return leaf.clone();
        }
    }
    if tree.unknown_parent().is_some() {
        return staraoi::hierarchy::UNKNOWN_LEAF.to_string();
    }
    panic!("oracle: {raw:?} not mappable in {}", tree.attribute());
}

/// Maps one raw cell to its concept at `level` by walking the tree's data
/// directly; `level` past the top yields ANY.
pub fn oracle_map(tree: &ConceptTree, v: &Value, level: usize) -> Value {
    if level > tree.top_level() {
        return Value::Any;
    }
    if tree.is_numeric() {
        let x = match v {
            Value::Number(x) => *x,
            other => panic!("oracle: numeric tree fed {other}"),
        };
        if level == 0 {
            return v.clone();
        }
        let mut label = tree
            .ranges()
            .iter()
            .find(|r| x >= r.start && x <= r.fin)
            .unwrap_or_else(|| panic!("oracle: {x} outside {}", tree.attribute()))
            .label
            .clone();
        for _ in 1..level {
            label = tree.parent_of(&label).expect("balanced tree").to_string();
        }
        Value::text(label)
    } else {
        let raw = match v {
            Value::Text(s) => s.as_str(),
            other => panic!("oracle: categorical tree fed {other}"),
        };
        let mut label = resolve_leaf(tree, raw);
        for _ in 0..level {
            label = tree.parent_of(&label).expect("balanced tree").to_string();
        }
        Value::text(label)
    }
}

/// True iff walking upward from `v` passes through `target`.
pub fn oracle_generalizes(tree: &ConceptTree, v: &Value, target: &str) -> bool {
    let mut label = match v {
        Value::Text(s) => {
            if tree.concept_level(s).is_some() {
                s.clone()
            } else {
                resolve_leaf(tree, s)
            }
        }
        Value::Number(x) => match tree.ranges().iter().find(|r| *x >= r.start && *x <= r.fin) {
            Some(r) => r.label.clone(),
            None => return false,
        },
        _ => return false,
    };
    loop {
        if label == target {
            return true;
        }
        match tree.parent_of(&label) {
            Some(p) => label = p.to_string(),
            None => return false,
        }
    }
}

/// Rows paired with votes, in canonical order.
pub type VotedRows = Vec<(Vec<Value>, u64)>;

/// Brute-force classic generalization: per attribute, scan level 0 upward
/// and take the minimal level whose distinct-value count fits the attribute
/// threshold (capped at ANY); then map, group through a BTreeMap, and order
/// canonically. Returns (rows, votes) plus the chosen levels.
pub fn oracle_classic(
    data: &Relation,
    trees: &[ConceptTree],
    target_attr: &str,
    target_concept: &str,
    attr_threshold: usize,
) -> (VotedRows, Vec<(String, usize)>) {
    let ti = data.schema().index_of(target_attr).expect("target exists");
    let ttree = find_tree(trees, target_attr).expect("target tree exists");
    let selected: Vec<&Vec<Value>> = data
        .rows()
        .iter()
        .filter(|r| oracle_generalizes(ttree, &r[ti], target_concept))
        .collect();
    assert!(!selected.is_empty(), "oracle: empty target class");

    let learn: Vec<(usize, &ConceptTree)> = (0..data.schema().len())
        .filter(|&i| i != ti)
        .filter_map(|i| find_tree(trees, &data.schema().attr(i).name).map(|t| (i, t)))
        .collect();

    let mut chosen: Vec<usize> = Vec::new();
    for &(i, tree) in &learn {
        let mut level = 0;
        loop {
            let distinct: std::collections::BTreeSet<Value> = selected
                .iter()
                .map(|r| oracle_map(tree, &r[i], level))
                .collect();
            if distinct.len() <= attr_threshold || level > tree.top_level() {
                break;
            }
            level += 1;
        }
        chosen.push(level);
    }

    let mut groups: BTreeMap<Vec<Value>, u64> = BTreeMap::new();
    for r in &selected {
        let key: Vec<Value> = learn
            .iter()
            .zip(&chosen)
            .map(|(&(i, tree), &level)| oracle_map(tree, &r[i], level))
            .collect();
        *groups.entry(key).or_insert(0) += 1;
    }
    let mut rows: Vec<(Vec<Value>, u64)> = groups.into_iter().collect();
    rows.sort_by(|(ra, va), (rb, vb)| vb.cmp(va).then_with(|| ra.cmp(rb)));

    let levels = learn
        .iter()
        .zip(&chosen)
        .map(|(&(_, t), &l)| (t.attribute().to_string(), l))
        .collect();
    (rows, levels)
}

/// Rows and votes of a generalized relation, for comparison against oracles.
pub fn rows_and_votes(g: &staraoi::GeneralizedRelation) -> VotedRows {
    g.relation()
        .rows()
        .iter()
        .enumerate()
        .map(|(i, r)| (r.clone(), g.relation().vote(i)))
        .collect()
}
