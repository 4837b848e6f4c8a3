//! Deterministic synthetic instances for benchmarking and randomized
//! cross-path checks.
//!
//! An instance is a fact relation plus balanced concept trees: one small
//! `class` tree acting as the target attribute, an `id` column with no tree
//! (so attribute removal always has work to do), and `dimensions` learn
//! trees of the configured depth and fanout. Fact values draw uniformly over
//! each tree's leaves from a seeded ChaCha stream, so a fixed seed always
//! reproduces the same instance.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hierarchy::{parse_hierarchy, ConceptTree};
use crate::relation::{Attribute, Relation, Schema, Value};

/// Target attribute of every synthetic instance.
pub const CLASS_ATTRIBUTE: &str = "class";

/// Target concept the cross-path checks select on (one of the two top
/// concepts of the class tree).
pub const CLASS_TARGET: &str = "class_g0";

/// Benchmark configuration: instance sizes, tree shape, and repetitions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BenchConfig {
    /// Fact row counts to sweep.
    pub row_counts: Vec<usize>,
    /// Levels per learn tree, counting the leaf level.
    pub depth: usize,
    /// Concept counts top-down: `fanout[0]` top concepts, each splitting
    /// into `fanout[k]` children at the next level down.
    pub fanout: Vec<usize>,
    /// Maximum learn-dimension count (the sweep doubles up to it).
    pub dimensions: usize,
    /// Timing repetitions per instance (median is reported).
    pub repetitions: usize,
    pub seed: u64,
}

impl BenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.row_counts.is_empty() || self.row_counts.contains(&0) {
            return Err(Error::Config("row counts must be positive".into()));
        }
        if self.depth < 2 {
            return Err(Error::Config("tree depth must be at least 2".into()));
        }
        if self.fanout.len() != self.depth {
            return Err(Error::Config(format!(
                "fanout lists {} entries but depth is {}",
                self.fanout.len(),
                self.depth
            )));
        }
        if self.fanout.contains(&0) {
            return Err(Error::Config("fanout entries must be positive".into()));
        }
        if self.dimensions == 0 {
            return Err(Error::Config("dimension count must be positive".into()));
        }
        if self.repetitions == 0 {
            return Err(Error::Config("repetitions must be positive".into()));
        }
        Ok(())
    }

    /// Leaves per learn tree: the product of the fanouts.
    pub fn leaves_per_tree(&self) -> usize {
        self.fanout.iter().product()
    }
}

/// Builds one balanced tree in DSL form and parses it back, so synthetic
/// trees go through exactly the validation real ones do.
fn balanced_tree(attribute: &str, fanout: &[usize]) -> ConceptTree {
    let depth = fanout.len();
    // concept count per level, top level first
    let mut counts_td = Vec::with_capacity(depth);
    let mut c = 1usize;
    for &f in fanout {
        c *= f;
        counts_td.push(c);
    }
    let count_at_level = |level: usize| counts_td[depth - 1 - level];
    let label = |level: usize, idx: usize| format!("{attribute}_L{level}_{idx}");

    let mut dsl = format!("tree {attribute}\n");
    for level in (0..depth - 1).rev() {
        let branching = count_at_level(level) / count_at_level(level + 1);
        for parent in 0..count_at_level(level + 1) {
            let children: Vec<String> = (0..branching)
                .map(|j| label(level, parent * branching + j))
                .collect();
            dsl.push_str(&format!(
                "  {}: {}\n",
                label(level + 1, parent),
                children.join(", ")
            ));
        }
    }
    parse_hierarchy(&dsl, "<synthetic>")
        .expect("generated tree is valid")
        .remove(0)
}

fn class_tree() -> ConceptTree {
    let dsl = "tree class\n  class_g0: class_c0, class_c1, class_c2\n  class_g1: class_c3, class_c4, class_c5\n";
    parse_hierarchy(dsl, "<synthetic>")
        .expect("class tree is valid")
        .remove(0)
}

/// Generates one instance: `rows` fact tuples over `dimensions` learn trees
/// of the given fanout, plus the class tree and a tree-less `id` column.
/// The first row always draws the first class leaf, so the default target
/// class is never empty.
pub fn generate_instance(
    fanout: &[usize],
    dimensions: usize,
    rows: usize,
    seed: u64,
) -> Result<(Relation, Vec<ConceptTree>)> {
    if fanout.len() < 2 || fanout.contains(&0) || dimensions == 0 {
        return Err(Error::Config(
            "instance generation needs depth >= 2, positive fanout and dimensions".into(),
        ));
    }
    let mut trees = vec![class_tree()];
    for d in 0..dimensions {
        trees.push(balanced_tree(&format!("d{d}"), fanout));
    }

    let mut attrs = vec![Attribute::text("id"), Attribute::text(CLASS_ATTRIBUTE)];
    attrs.extend((0..dimensions).map(|d| Attribute::text(format!("d{d}"))));
    let schema = Schema::new(attrs)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let class_leaves: Vec<&str> = trees[0].leaves().iter().map(|s| s.as_str()).collect();
    let dim_leaves: Vec<Vec<&str>> = trees[1..]
        .iter()
        .map(|t| t.leaves().iter().map(|s| s.as_str()).collect())
        .collect();

    let mut data = Vec::with_capacity(rows);
    for r in 0..rows {
        let mut row = Vec::with_capacity(2 + dimensions);
        row.push(Value::text(format!("r{r}")));
        let class_leaf = if r == 0 {
            class_leaves[0]
        } else {
            class_leaves[rng.gen_range(0..class_leaves.len())]
        };
        row.push(Value::text(class_leaf));
        for leaves in &dim_leaves {
            row.push(Value::text(leaves[rng.gen_range(0..leaves.len())]));
        }
        data.push(row);
    }
    Ok((Relation::new(schema, data)?, trees))
}

/// Generates the instance described by a bench config (its first row count).
pub fn generate_synthetic(cfg: &BenchConfig) -> Result<(Relation, Vec<ConceptTree>)> {
    cfg.validate()?;
    generate_instance(&cfg.fanout, cfg.dimensions, cfg.row_counts[0], cfg.seed)
}
