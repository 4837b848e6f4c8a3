//! The classic attribute-oriented induction path.
//!
//! Generalization proceeds in the textbook order: select the target class,
//! remove attributes that cannot generalize, ascend each remaining attribute
//! level by level until its distinct-value count fits the attribute
//! threshold, merge identical tuples while accumulating votes, and flag
//! whether the result fits the relation threshold. Ascending past the top of
//! a tree produces the universal concept `ANY` — the telltale of
//! over-generalization.
//!
//! Further generalization and unioning are explicit operator moves, not an
//! automatic search: callers pick the attribute, exactly like working
//! through the alternatives interactively.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::hierarchy::{find_tree, ConceptTree};
use crate::relation::{fmt_decimal, sort_canonical, AttrKind, Attribute, Relation, Schema, Value};

/// Target class plus the two thresholds controlling classic generalization.
#[derive(Debug, Clone)]
pub struct ClassicTask {
    pub target_attribute: String,
    pub target_concept: String,
    /// Cap on generalized-relation row count (step 6).
    pub relation_threshold: usize,
    /// Cap on distinct values per attribute (step 5).
    pub attribute_threshold: usize,
    /// Attributes to learn over; defaults to every non-target attribute.
    pub learn_attributes: Option<Vec<String>>,
}

impl ClassicTask {
    /// Builds a task with one generalization threshold feeding both controls.
    pub fn new(
        target_attribute: impl Into<String>,
        target_concept: impl Into<String>,
        threshold: usize,
    ) -> ClassicTask {
        ClassicTask {
            target_attribute: target_attribute.into(),
            target_concept: target_concept.into(),
            relation_threshold: threshold,
            attribute_threshold: threshold,
        learn_attributes: None,
        }
    }

    pub fn with_attribute_threshold(mut self, threshold: usize) -> ClassicTask {
        self.attribute_threshold = threshold;
        self
    }

    pub fn with_learn_attributes(mut self, attrs: Vec<String>) -> ClassicTask {
        self.learn_attributes = Some(attrs);
        self
    }
}

/// How `union_on` shrinks a relation along one attribute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnionMode {
    /// Project the attribute away, then merge.
    Drop,
    /// Merge rows identical elsewhere, collecting the attribute's values
    /// into a set.
    MergeSet,
}

impl fmt::Display for UnionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnionMode::Drop => f.write_str("drop"),
            UnionMode::MergeSet => f.write_str("merge-set"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RemovalReason {
    /// The target attribute collapses to one concept once the class is fixed.
    TargetClass,
    /// No concept tree exists, so the attribute cannot generalize.
    NoTree,
    /// An explicit learn list left the attribute out.
    NotRequested,
    /// Generalization collapsed the attribute to a single concept.
    Collapsed { value: String },
}

/// One entry of the provenance log carried by every generalized relation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    TargetSelected {
        attribute: String,
        concept: String,
        matched: usize,
        total: usize,
    },
    AttributeRemoved {
        attribute: String,
        reason: RemovalReason,
    },
    Ascended {
        attribute: String,
        from_level: usize,
        to_level: usize,
        distinct_before: usize,
    },
    Merged {
        rows_in: usize,
        rows_out: usize,
    },
    MappedAtLevel {
        attribute: String,
        level: usize,
        column: String,
    },
    FurtherGeneralized {
        attribute: String,
        to_level: usize,
    },
    Unioned {
        attribute: String,
        mode: UnionMode,
        rows_out: usize,
    },
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::TargetSelected {
                attribute,
                concept,
                matched,
                total,
            } => write!(
                f,
                "selected target class {attribute} = {concept}: {matched} of {total} tuples"
            ),
            Step::AttributeRemoved { attribute, reason } => match reason {
                RemovalReason::TargetClass => write!(
                    f,
                    "removed {attribute}: target attribute collapses to a single concept"
                ),
                RemovalReason::NoTree => write!(f, "removed {attribute}: no concept tree"),
                RemovalReason::NotRequested => {
                    write!(f, "removed {attribute}: not among the learn attributes")
                }
                RemovalReason::Collapsed { value } => write!(
                    f,
                    "removed {attribute}: collapsed to the single concept {value}"
                ),
            },
            Step::Ascended {
                attribute,
                from_level,
                to_level,
                distinct_before,
            } => write!(
                f,
                "ascended {attribute} from level {from_level} to level {to_level} ({distinct_before} distinct values)"
            ),
            Step::Merged { rows_in, rows_out } => {
                write!(f, "merged identical tuples: {rows_in} -> {rows_out} rows")
            }
            Step::MappedAtLevel {
                attribute,
                level,
                column,
            } => write!(f, "mapped {attribute} to level {level} ({column})"),
            Step::FurtherGeneralized {
                attribute,
                to_level,
            } => write!(f, "further generalized {attribute} to level {to_level}"),
            Step::Unioned {
                attribute,
                mode,
                rows_out,
            } => write!(f, "unioned on {attribute} ({mode}): {rows_out} rows"),
        }
    }
}

/// One output column of a generalized relation: which source attribute it
/// came from, the level it currently sits at, and the name to display
/// (the tree's level name once a categorical attribute has been lifted).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenAttribute {
    pub source: String,
    pub display: String,
    pub level: usize,
}

/// A merged, vote-carrying relation produced by either induction path.
///
/// `level` of an attribute equal to its tree depth means the column has been
/// generalized past the top and holds `ANY` everywhere.
#[derive(Debug, Clone)]
pub struct GeneralizedRelation {
    relation: Relation,
    attrs: Vec<GenAttribute>,
    threshold_satisfied: bool,
    relation_threshold: Option<usize>,
    provenance: Vec<Step>,
}

impl GeneralizedRelation {
    pub(crate) fn assemble(
        relation: Relation,
        attrs: Vec<GenAttribute>,
        relation_threshold: Option<usize>,
        provenance: Vec<Step>,
    ) -> GeneralizedRelation {
        let threshold_satisfied =
            relation_threshold.is_none_or(|t| relation.row_count() <= t);
        GeneralizedRelation {
            relation,
            attrs,
            threshold_satisfied,
            relation_threshold,
            provenance,
        }
    }

    pub fn relation(&self) -> &Relation {
        &self.relation
    }

    pub fn attrs(&self) -> &[GenAttribute] {
        &self.attrs
    }

    pub fn threshold_satisfied(&self) -> bool {
        self.threshold_satisfied
    }

    pub fn relation_threshold(&self) -> Option<usize> {
        self.relation_threshold
    }

    pub fn provenance(&self) -> &[Step] {
        &self.provenance
    }

    /// True iff any cell holds the universal concept.
    pub fn contains_any(&self) -> bool {
        self.relation
            .rows()
            .iter()
            .any(|row| row.iter().any(Value::is_any))
    }

    /// Number of concept-ascension steps recorded so far.
    pub fn ascension_count(&self) -> usize {
        self.provenance
            .iter()
            .filter(|s| matches!(s, Step::Ascended { .. }))
            .count()
    }

    /// Column headers for display: level names plus the vote column.
    pub fn display_headers(&self) -> Vec<String> {
        let mut h: Vec<String> = self.attrs.iter().map(|a| a.display.clone()).collect();
        h.push("vote".to_string());
        h
    }

    /// Row-for-row equality of the underlying relations (schema, values,
    /// votes); provenance and flags are not compared.
    pub fn same_result(&self, other: &GeneralizedRelation) -> bool {
        self.relation == other.relation
    }

    fn attr_index(&self, attribute: &str) -> Result<usize> {
        self.attrs
            .iter()
            .position(|a| a.source.eq_ignore_ascii_case(attribute))
            .ok_or_else(|| Error::UnknownAttribute {
                name: attribute.to_string(),
            })
    }
}

/// Display name for an attribute generalized to `level`: the tree's level
/// name for lifted categorical attributes, the plain attribute name for the
/// leaf level, numeric attributes, and ANY-valued columns.
fn display_name(tree: &ConceptTree, level: usize) -> String {
    if level == 0 || level > tree.top_level() || tree.is_numeric() {
        tree.attribute().to_string()
    } else {
        tree.level_name(level).to_string()
    }
}

fn ascend_column(col: &mut [Value], tree: &ConceptTree, from_level: usize) -> Result<()> {
    let mut cache: HashMap<Value, Value> = HashMap::new();
    for v in col.iter_mut() {
        let next = match cache.get(v) {
            Some(n) => n.clone(),
            None => {
                let n = tree.ascend(v, from_level)?;
                cache.insert(v.clone(), n.clone());
                n
            }
        };
        *v = next;
    }
    Ok(())
}

fn distinct_count(col: &[Value]) -> usize {
    col.iter().collect::<HashSet<_>>().len()
}

/// Runs the classic generalization strategy over a raw relation.
pub fn classic_generalize(
    data: &Relation,
    trees: &[ConceptTree],
    task: &ClassicTask,
) -> Result<GeneralizedRelation> {
    if task.relation_threshold < 1 || task.attribute_threshold < 1 {
        return Err(Error::Config("thresholds must be >= 1".into()));
    }
    let target_idx = data
        .schema()
        .index_of(&task.target_attribute)
        .ok_or_else(|| Error::UnknownAttribute {
            name: task.target_attribute.clone(),
        })?;
    let target_tree = find_tree(trees, &task.target_attribute).ok_or_else(|| {
        Error::Config(format!(
            "target attribute {} has no concept tree",
            task.target_attribute
        ))
    })?;
    if target_tree.concept_level(&task.target_concept).is_none() {
        return Err(Error::UnknownConcept {
            attribute: target_tree.attribute().to_string(),
            concept: task.target_concept.clone(),
        });
    }

    let mut provenance = Vec::new();

    // Step 1: collect the relevant tuples.
    let mut selected = Vec::new();
    for (i, row) in data.rows().iter().enumerate() {
        if target_tree.generalizes_to(&row[target_idx], &task.target_concept)? {
            selected.push(i);
        }
    }
    if selected.is_empty() {
        return Err(Error::EmptyTargetClass {
            attribute: task.target_attribute.clone(),
            concept: task.target_concept.clone(),
        });
    }
    provenance.push(Step::TargetSelected {
        attribute: data.schema().attr(target_idx).name.clone(),
        concept: task.target_concept.clone(),
        matched: selected.len(),
        total: data.row_count(),
    });

    // Learn attributes: explicit list or every non-target attribute.
    let requested: Vec<usize> = match &task.learn_attributes {
        Some(names) => {
            let mut idxs = Vec::with_capacity(names.len());
            for n in names {
                let i = data
                    .schema()
                    .index_of(n)
                    .ok_or_else(|| Error::UnknownAttribute { name: n.clone() })?;
                if !idxs.contains(&i) {
                    idxs.push(i);
                }
            }
            idxs
        }
        None => (0..data.schema().len())
            .filter(|&i| i != target_idx)
            .collect(),
    };

    // Step 2: the target collapses once the class is fixed; attributes
    // without trees cannot generalize.
    if !requested.contains(&target_idx) {
        provenance.push(Step::AttributeRemoved {
            attribute: data.schema().attr(target_idx).name.clone(),
            reason: RemovalReason::TargetClass,
        });
    }
    for i in 0..data.schema().len() {
        if i != target_idx && !requested.contains(&i) {
            provenance.push(Step::AttributeRemoved {
                attribute: data.schema().attr(i).name.clone(),
                reason: RemovalReason::NotRequested,
            });
        }
    }
    let mut kept: Vec<(usize, &ConceptTree)> = Vec::new();
    for &i in &requested {
        let name = &data.schema().attr(i).name;
        match find_tree(trees, name) {
            Some(t) => kept.push((i, t)),
            None => provenance.push(Step::AttributeRemoved {
                attribute: name.clone(),
                reason: RemovalReason::NoTree,
            }),
        }
    }

    // Steps 3 and 5: ascend each attribute until it fits its threshold.
    let mut columns: Vec<Vec<Value>> = kept
        .iter()
        .map(|&(i, _)| selected.iter().map(|&r| data.rows()[r][i].clone()).collect())
        .collect();
    let mut levels = vec![0usize; kept.len()];
    for (k, &(i, tree)) in kept.iter().enumerate() {
        let name = &data.schema().attr(i).name;
        loop {
            let distinct = distinct_count(&columns[k]);
            if distinct <= task.attribute_threshold || levels[k] >= tree.depth() {
                break;
            }
            ascend_column(&mut columns[k], tree, levels[k])?;
            provenance.push(Step::Ascended {
                attribute: name.clone(),
                from_level: levels[k],
                to_level: levels[k] + 1,
                distinct_before: distinct,
            });
            levels[k] += 1;
        }
    }

    // Step 4: vote propagation via merging.
    let schema = Schema::new(
        kept.iter()
            .zip(&levels)
            .map(|(&(i, _), &level)| {
                let a = data.schema().attr(i);
                Attribute {
                    name: a.name.clone(),
                    kind: if a.kind == AttrKind::Numeric && level == 0 {
                        AttrKind::Numeric
                    } else {
                        AttrKind::Text
                    },
                }
            })
            .collect(),
    )?;
    let rows: Vec<Vec<Value>> = (0..selected.len())
        .map(|r| columns.iter().map(|c| c[r].clone()).collect())
        .collect();
    let merged = Relation::new(schema, rows)?.merge_identical();
    provenance.push(Step::Merged {
        rows_in: selected.len(),
        rows_out: merged.row_count(),
    });

    let attrs = kept
        .iter()
        .zip(&levels)
        .map(|(&(_, tree), &level)| GenAttribute {
            source: tree.attribute().to_string(),
            display: display_name(tree, level),
            level,
        })
        .collect();

    // Step 6 is a flag, not an automatic reduction: further generalization
    // stays an operator decision.
    Ok(GeneralizedRelation::assemble(
        merged,
        attrs,
        Some(task.relation_threshold),
        provenance,
    ))
}

/// Ascends one attribute a single level and re-merges. An attribute that
/// collapses to a single proper concept is removed; a column that turns to
/// `ANY` is kept, making over-generalization visible.
pub fn further_generalize(
    g: &GeneralizedRelation,
    attribute: &str,
    trees: &[ConceptTree],
) -> Result<GeneralizedRelation> {
    let idx = g.attr_index(attribute)?;
    let source = g.attrs[idx].source.clone();
    let tree = find_tree(trees, &source).ok_or_else(|| {
        Error::Config(format!("attribute {source} has no concept tree"))
    })?;
    let level = g.attrs[idx].level;
    if level >= tree.depth() {
        return Err(Error::FullyGeneralized { attribute: source });
    }

    let mut column: Vec<Value> = g.relation.rows().iter().map(|r| r[idx].clone()).collect();
    ascend_column(&mut column, tree, level)?;
    let new_level = level + 1;

    let mut provenance = g.provenance.clone();
    provenance.push(Step::FurtherGeneralized {
        attribute: source.clone(),
        to_level: new_level,
    });

    let collapsed = new_level <= tree.top_level() && distinct_count(&column) == 1;
    let (relation, attrs) = if collapsed {
        let value = column[0].to_string();
        provenance.push(Step::AttributeRemoved {
            attribute: source.clone(),
            reason: RemovalReason::Collapsed { value },
        });
        let names: Vec<&str> = g
            .attrs
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != idx)
            .map(|(_, a)| a.source.as_str())
            .collect();
        let projected = g.relation.project(&names)?;
        let attrs: Vec<GenAttribute> = g
            .attrs
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != idx)
            .map(|(_, a)| a.clone())
            .collect();
        (projected, attrs)
    } else {
        let mut schema_attrs: Vec<Attribute> = g.relation.schema().attrs().to_vec();
        schema_attrs[idx].kind = AttrKind::Text;
        let rows: Vec<Vec<Value>> = g
            .relation
            .rows()
            .iter()
            .enumerate()
            .map(|(r, row)| {
                let mut row = row.clone();
                row[idx] = column[r].clone();
                row
            })
            .collect();
        let votes = g.relation.votes().expect("generalized relations carry votes");
        let relation = Relation::with_votes(Schema::new(schema_attrs)?, rows, votes.to_vec())?;
        let mut attrs = g.attrs.clone();
        attrs[idx].level = new_level;
        attrs[idx].display = display_name(tree, new_level);
        (relation, attrs)
    };

    let rows_in = relation.row_count();
    let merged = relation.merge_identical();
    provenance.push(Step::Merged {
        rows_in,
        rows_out: merged.row_count(),
    });

    Ok(GeneralizedRelation::assemble(
        merged,
        attrs,
        g.relation_threshold,
        provenance,
    ))
}

/// Shrinks a generalized relation along one attribute, either by dropping
/// the column or by collecting its values into sets.
pub fn union_on(
    g: &GeneralizedRelation,
    attribute: &str,
    mode: UnionMode,
) -> Result<GeneralizedRelation> {
    let idx = g.attr_index(attribute)?;
    let source = g.attrs[idx].source.clone();
    let mut provenance = g.provenance.clone();

    match mode {
        UnionMode::Drop => {
            let names: Vec<&str> = g
                .attrs
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != idx)
                .map(|(_, a)| a.source.as_str())
                .collect();
            let merged = g.relation.project(&names)?.merge_identical();
            let attrs: Vec<GenAttribute> = g
                .attrs
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != idx)
                .map(|(_, a)| a.clone())
                .collect();
            provenance.push(Step::Unioned {
                attribute: source,
                mode,
                rows_out: merged.row_count(),
            });
            Ok(GeneralizedRelation::assemble(
                merged,
                attrs,
                g.relation_threshold,
                provenance,
            ))
        }
        UnionMode::MergeSet => {
            let mut groups: HashMap<Vec<Value>, (BTreeSet<String>, u64)> = HashMap::new();
            for (r, row) in g.relation.rows().iter().enumerate() {
                let key: Vec<Value> = row
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != idx)
                    .map(|(_, v)| v.clone())
                    .collect();
                let entry = groups.entry(key).or_default();
                match &row[idx] {
                    Value::Text(s) => {
                        entry.0.insert(s.clone());
                    }
                    Value::Number(n) => {
                        entry.0.insert(fmt_decimal(*n));
                    }
                    Value::Set(ss) => entry.0.extend(ss.iter().cloned()),
                    Value::Any => {
                        return Err(Error::Config(format!(
                            "cannot merge-set union on {source}: the column holds ANY"
                        )))
                    }
                }
                entry.1 += g.relation.vote(r);
            }
            let mut merged_rows: Vec<(Vec<Value>, u64)> = groups
                .into_iter()
                .map(|(key, (set, vote))| {
                    let mut row = Vec::with_capacity(key.len() + 1);
                    let mut it = key.into_iter();
                    for i in 0..g.attrs.len() {
                        if i == idx {
                            row.push(Value::Set(set.clone()));
                        } else {
                            row.push(it.next().expect("key arity matches"));
                        }
                    }
                    (row, vote)
                })
                .collect();
            sort_canonical(&mut merged_rows);
            let (rows, votes): (Vec<_>, Vec<_>) = merged_rows.into_iter().unzip();

            let mut schema_attrs: Vec<Attribute> = g.relation.schema().attrs().to_vec();
            schema_attrs[idx].kind = AttrKind::Text;
            let relation = Relation::with_votes(Schema::new(schema_attrs)?, rows, votes)?;
            provenance.push(Step::Unioned {
                attribute: source,
                mode,
                rows_out: relation.row_count(),
            });
            Ok(GeneralizedRelation::assemble(
                relation,
                g.attrs.clone(),
                g.relation_threshold,
                provenance,
            ))
        }
    }
}
