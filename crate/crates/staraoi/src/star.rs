//! The star-schema induction path.
//!
//! Generalization is a join-and-group-by: the fact relation joins each
//! dimension table (equality on the leaf column, range containment for
//! numeric dimensions), every learn attribute maps to its concept at a
//! selected level, and identical mapped tuples group with a count. There is
//! no threshold and no `ANY` — the group-by bounds the output, and dimension
//! tables simply have no ANY row to join against. Choosing a lower level is
//! a drill-down; the default is each dimension's highest level.
//!
//! The equivalent SQL can be printed for inspection via [`emit_sql`]; the
//! engine itself evaluates the same semantics natively with hash grouping.

use std::collections::{BTreeMap, HashMap};

use crate::classic::{GenAttribute, GeneralizedRelation, Step};
use crate::dimension::{find_dimension, DimensionTable};
use crate::error::{Error, Result};
use crate::relation::{sort_canonical, Attribute, Relation, Schema, Value};

/// Target predicate and level selection for the star path.
#[derive(Debug, Clone)]
pub struct StarTask {
    pub target_attribute: String,
    pub target_concept: String,
    /// Level of the target dimension's column carrying the target concept
    /// (>= 1: the selection predicate reads a generalized column).
    pub target_level: usize,
    /// Attribute -> selected level; unlisted attributes group at their
    /// dimension's highest level.
    pub level_selection: BTreeMap<String, usize>,
    /// Attributes participating; defaults to every fact attribute with a
    /// dimension table, minus the target.
    pub learn_attributes: Option<Vec<String>>,
    /// Keep the target attribute in the output, mapped at this level.
    pub retain_target_at: Option<usize>,
}

impl StarTask {
    pub fn new(
        target_attribute: impl Into<String>,
        target_concept: impl Into<String>,
        target_level: usize,
    ) -> StarTask {
        StarTask {
            target_attribute: target_attribute.into(),
            target_concept: target_concept.into(),
            target_level,
            level_selection: BTreeMap::new(),
            learn_attributes: None,
            retain_target_at: None,
        }
    }

    pub fn with_level(mut self, attribute: impl Into<String>, level: usize) -> StarTask {
        self.level_selection.insert(attribute.into(), level);
        self
    }

    pub fn with_learn_attributes(mut self, attrs: Vec<String>) -> StarTask {
        self.learn_attributes = Some(attrs);
        self
    }

    pub fn retaining_target_at(mut self, level: usize) -> StarTask {
        self.retain_target_at = Some(level);
        self
    }

    fn selected_level(&self, attribute: &str) -> Option<usize> {
        self.level_selection
            .iter()
            .find(|(a, _)| a.eq_ignore_ascii_case(attribute))
            .map(|(_, &l)| l)
    }
}

struct MappedColumn<'a> {
    fact_index: usize,
    dim: &'a DimensionTable,
    level: usize,
    column_index: usize,
}

/// Runs the star-schema generalization: select facts whose target-dimension
/// concept at `target_level` equals the target, map every learn attribute to
/// its selected level, group, and count.
pub fn star_generalize(
    fact: &Relation,
    dims: &[DimensionTable],
    task: &StarTask,
) -> Result<GeneralizedRelation> {
    let target_idx = fact
        .schema()
        .index_of(&task.target_attribute)
        .ok_or_else(|| Error::UnknownAttribute {
            name: task.target_attribute.clone(),
        })?;
    let target_dim = find_dimension(dims, &task.target_attribute).ok_or_else(|| {
        Error::Config(format!(
            "target attribute {} has no dimension table",
            task.target_attribute
        ))
    })?;
    if task.target_level < 1 {
        return Err(Error::Config(
            "the star target level must be >= 1 (select on a generalized column)".into(),
        ));
    }
    target_dim.level_column(task.target_level)?;
    let target_value = Value::text(task.target_concept.clone());
    if !target_dim
        .rows()
        .iter()
        .any(|r| r[target_dim_level_index(target_dim, task.target_level)] == target_value)
    {
        return Err(Error::UnknownConcept {
            attribute: target_dim.attribute().to_string(),
            concept: task.target_concept.clone(),
        });
    }

    // Learn attributes in fact-schema order (or the caller's explicit order);
    // fact attributes without a dimension table stay out of the query.
    let learn_indices: Vec<usize> = match &task.learn_attributes {
        Some(names) => {
            let mut idxs = Vec::with_capacity(names.len());
            for n in names {
                let i = fact
                    .schema()
                    .index_of(n)
                    .ok_or_else(|| Error::UnknownAttribute { name: n.clone() })?;
                if find_dimension(dims, &fact.schema().attr(i).name).is_none() {
                    return Err(Error::Config(format!(
                        "learn attribute {n} has no dimension table"
                    )));
                }
                if !idxs.contains(&i) {
                    idxs.push(i);
                }
            }
            idxs
        }
        None => (0..fact.schema().len())
            .filter(|&i| {
                i != target_idx && find_dimension(dims, &fact.schema().attr(i).name).is_some()
            })
            .collect(),
    };

    let mut mapped: Vec<MappedColumn<'_>> = Vec::new();
    let mut provenance = Vec::new();
    for &i in &learn_indices {
        let name = &fact.schema().attr(i).name;
        let dim = find_dimension(dims, name).expect("validated above");
        let level = match task.selected_level(name) {
            Some(l) => l,
            None => dim.top_level(),
        };
        let column_index = dim_level_index_checked(dim, level)?;
        provenance.push(Step::MappedAtLevel {
            attribute: dim.attribute().to_string(),
            level,
            column: dim.level_column(level)?.to_string(),
        });
        mapped.push(MappedColumn {
            fact_index: i,
            dim,
            level,
            column_index,
        });
    }
    if let Some(level) = task.retain_target_at {
        let column_index = dim_level_index_checked(target_dim, level)?;
        provenance.push(Step::MappedAtLevel {
            attribute: target_dim.attribute().to_string(),
            level,
            column: target_dim.level_column(level)?.to_string(),
        });
        // the retained target groups like any other mapped column
        mapped.push(MappedColumn {
            fact_index: target_idx,
            dim: target_dim,
            level,
            column_index,
        });
    }

    // Join + group-by with count.
    let target_probe = target_dim.probe_index();
    let target_cell = target_probe.level_column_index(task.target_level)?;
    let probes: Vec<_> = mapped.iter().map(|m| m.dim.probe_index()).collect();
    let mut groups: HashMap<Vec<Value>, u64> = HashMap::new();
    let mut matched = 0usize;
    for (r, row) in fact.rows().iter().enumerate() {
        let concept = target_probe.lookup(&row[target_idx], target_cell)?;
        if *concept != target_value {
            continue;
        }
        matched += 1;
        let mut key = Vec::with_capacity(mapped.len());
        for (m, probe) in mapped.iter().zip(&probes) {
            key.push(probe.lookup(&row[m.fact_index], m.column_index)?.clone());
        }
        *groups.entry(key).or_insert(0) += fact.vote(r);
    }
    if matched == 0 {
        return Err(Error::EmptyTargetClass {
            attribute: task.target_attribute.clone(),
            concept: task.target_concept.clone(),
        });
    }
    provenance.insert(
        0,
        Step::TargetSelected {
            attribute: target_dim.attribute().to_string(),
            concept: task.target_concept.clone(),
            matched,
            total: fact.row_count(),
        },
    );

    let mut rows: Vec<(Vec<Value>, u64)> = groups.into_iter().collect();
    sort_canonical(&mut rows);
    provenance.push(Step::Merged {
        rows_in: matched,
        rows_out: rows.len(),
    });
    let (rows, votes): (Vec<_>, Vec<_>) = rows.into_iter().unzip();

    let schema = Schema::new(
        mapped
            .iter()
            .map(|m| Attribute::text(m.dim.attribute().to_string()))
            .collect(),
    )?;
    let attrs = mapped
        .iter()
        .map(|m| GenAttribute {
            source: m.dim.attribute().to_string(),
            display: display_name(m.dim, m.level),
            level: m.level,
        })
        .collect();
    let relation = Relation::with_votes(schema, rows, votes)?;
    // No relation threshold exists on this path; the group-by is the bound.
    Ok(GeneralizedRelation::assemble(relation, attrs, None, provenance))
}

fn target_dim_level_index(dim: &DimensionTable, level: usize) -> usize {
    if dim.is_numeric() {
        1 + level
    } else {
        level
    }
}

fn dim_level_index_checked(dim: &DimensionTable, level: usize) -> Result<usize> {
    // level_column validates the range for the dimension's kind
    dim.level_column(level)?;
    Ok(target_dim_level_index(dim, level))
}

/// Display name for a dimension column at `level`: the dimension's column
/// name for lifted categorical levels, the attribute name otherwise.
fn display_name(dim: &DimensionTable, level: usize) -> String {
    if level == 0 || dim.is_numeric() {
        dim.attribute().to_string()
    } else {
        dim.level_column(level)
            .expect("level validated")
            .to_string()
    }
}

/// Re-runs the star query with one attribute pushed down to a finer level.
/// Drill-down needs the facts: the rolled-up relation alone cannot refine.
pub fn drill_down(
    fact: &Relation,
    dims: &[DimensionTable],
    task: &StarTask,
    attribute: &str,
    new_level: usize,
) -> Result<GeneralizedRelation> {
    let dim = find_dimension(dims, attribute).ok_or_else(|| Error::UnknownAttribute {
        name: attribute.to_string(),
    })?;
    dim.level_column(new_level)?;
    let current = task.selected_level(attribute).unwrap_or(dim.top_level());
    if new_level > current {
        return Err(Error::Config(format!(
            "drill-down cannot raise {attribute} from level {current} to {new_level}"
        )));
    }
    let mut adjusted = task.clone();
    adjusted
        .level_selection
        .insert(dim.attribute().to_string(), new_level);
    star_generalize(fact, dims, &adjusted)
}

/// Prints the equivalent join/group-by SQL for documentation: one dimension
/// table per learn attribute plus the target dimension, equality joins on
/// leaf columns, range predicates for numeric dimensions.
pub fn emit_sql(fact_table: &str, fact: &Relation, dims: &[DimensionTable], task: &StarTask) -> Result<String> {
    let target_dim = find_dimension(dims, &task.target_attribute).ok_or_else(|| {
        Error::Config(format!(
            "target attribute {} has no dimension table",
            task.target_attribute
        ))
    })?;
    let target_idx = fact
        .schema()
        .index_of(&task.target_attribute)
        .ok_or_else(|| Error::UnknownAttribute {
            name: task.target_attribute.clone(),
        })?;

    let learn: Vec<&DimensionTable> = match &task.learn_attributes {
        Some(names) => names
            .iter()
            .filter_map(|n| find_dimension(dims, n))
            .collect(),
        None => fact
            .schema()
            .attrs()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != target_idx)
            .filter_map(|(_, a)| find_dimension(dims, &a.name))
            .collect(),
    };

    let table = |dim: &DimensionTable| format!("hierarchy_{}", dim.attribute().to_lowercase());
    let mut select_cols = Vec::new();
    for dim in &learn {
        let level = task
            .selected_level(dim.attribute())
            .unwrap_or(dim.top_level());
        select_cols.push(format!(
            "{}.{}",
            table(dim),
            dim.level_column(level)?.to_lowercase()
        ));
    }
    let count_col = select_cols
        .last()
        .cloned()
        .unwrap_or_else(|| format!("{}.{}", table(target_dim), target_dim.columns()[0].to_lowercase()));

    let mut from_tables = vec![fact_table.to_lowercase(), table(target_dim)];
    from_tables.extend(learn.iter().map(|d| table(d)));

    let fact_col = |dim: &DimensionTable| {
        format!("{}.{}", fact_table.to_lowercase(), dim.attribute().to_lowercase())
    };
    let mut predicates = vec![format!(
        "{}.{}='{}'",
        table(target_dim),
        target_dim.level_column(task.target_level)?.to_lowercase(),
        task.target_concept
    )];
    for dim in std::iter::once(&target_dim).chain(learn.iter()) {
        if dim.is_numeric() {
            let cols = dim.join_columns();
            predicates.push(format!(
                "{}>={}.{}",
                fact_col(dim),
                table(dim),
                cols[0].to_lowercase()
            ));
            predicates.push(format!(
                "{}<={}.{}",
                fact_col(dim),
                table(dim),
                cols[1].to_lowercase()
            ));
        } else {
            predicates.push(format!(
                "{}={}.{}",
                fact_col(dim),
                table(dim),
                dim.columns()[0].to_lowercase()
            ));
        }
    }

    let mut sql = String::new();
    sql.push_str("select ");
    sql.push_str(&select_cols.join(", "));
    if !select_cols.is_empty() {
        sql.push_str(",\n       ");
    }
    sql.push_str(&format!("count({count_col}) as vote\n"));
    sql.push_str(&format!("from {}\n", from_tables.join(", ")));
    sql.push_str(&format!("where {}", predicates.join("\n  and ")));
    sql.push('\n');
    if !select_cols.is_empty() {
        sql.push_str(&format!("group by {}\n", select_cols.join(", ")));
    }
    Ok(sql)
}
