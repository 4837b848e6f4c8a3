//! Concept hierarchies and per-attribute concept trees.
//!
//! Background knowledge arrives as a line-oriented hierarchy file declaring
//! one tree per attribute. A tree is a balanced taxonomy: level 0 holds the
//! leaf concepts (or, for numeric trees, the raw value domain) and each
//! higher level holds coarser concepts. `ANY`, the universal concept, is not
//! a tree node; the classic path reaches it by ascending past the top level.
//!
//! File format:
//!
//! ```text
//! tree Major                      # opens a categorical block
//!   levels Major, StudyProg      # one name per level, leaves first
//!   Science: Computing, Math     # parent: children (quote labels with spaces)
//!   Art: Music, History
//!
//! tree GPA numeric
//!   levels GPA, range
//!   Poor: 0.0 .. 1.99            # label: start .. fin (inclusive bounds)
//!   Excellent: 3.5 .. 4.0
//! ```
//!
//! A label used as a child on one line and a parent on another stitches
//! levels together. `alias "M.S." = "MS"` maps a raw data spelling onto a
//! leaf. `unknown <parent>` opts into routing unlisted raw values through a
//! synthetic `UNKNOWN` leaf instead of failing. `ANY: ...` lines are
//! accepted and stripped; ANY is never stored as a node.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::relation::{fmt_decimal, Value};

/// Synthetic leaf used for unlisted raw values when a tree opts in.
pub const UNKNOWN_LEAF: &str = "UNKNOWN";

const KEYWORDS: [&str; 5] = ["tree", "levels", "alias", "unknown", "ANY"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeKind {
    Categorical,
    Numeric,
}

/// One labeled range of a numeric tree: `start <= x <= fin`.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericRange {
    pub start: f64,
    pub fin: f64,
    pub label: String,
}

/// A single attribute's balanced taxonomy.
#[derive(Debug, Clone, PartialEq)]
pub struct ConceptTree {
    attribute: String,
    kind: TreeKind,
    /// One name per level; `level_names[0]` names the leaf level.
    level_names: Vec<String>,
    /// Concepts per level in declaration order. Numeric trees keep level 0
    /// empty (the raw value domain is not enumerable).
    level_concepts: Vec<Vec<String>>,
    parent: HashMap<String, String>,
    level_of: HashMap<String, usize>,
    /// Numeric trees only; sorted ascending by start.
    ranges: Vec<NumericRange>,
    /// Raw data spelling -> leaf label, in declaration order.
    aliases: Vec<(String, String)>,
    unknown_parent: Option<String>,
}

impl ConceptTree {
    pub fn attribute(&self) -> &str {
        &self.attribute
    }

    pub fn kind(&self) -> TreeKind {
        self.kind
    }

    pub fn is_numeric(&self) -> bool {
        self.kind == TreeKind::Numeric
    }

    /// Number of levels, counting the leaf level.
    pub fn depth(&self) -> usize {
        self.level_names.len()
    }

    /// Index of the highest level below ANY.
    pub fn top_level(&self) -> usize {
        self.depth() - 1
    }

    pub fn level_name(&self, level: usize) -> &str {
        &self.level_names[level]
    }

    pub fn level_names(&self) -> &[String] {
        &self.level_names
    }

    /// Leaf concepts in declaration order (empty for numeric trees).
    pub fn leaves(&self) -> &[String] {
        &self.level_concepts[0]
    }

    /// Concepts at `level` in declaration order.
    pub fn level_concepts(&self, level: usize) -> &[String] {
        &self.level_concepts[level]
    }

    pub fn ranges(&self) -> &[NumericRange] {
        &self.ranges
    }

    pub fn aliases(&self) -> &[(String, String)] {
        &self.aliases
    }

    pub fn unknown_parent(&self) -> Option<&str> {
        self.unknown_parent.as_deref()
    }

    pub fn parent_of(&self, label: &str) -> Option<&str> {
        self.parent.get(label).map(|s| s.as_str())
    }

    /// Level of a concept label, if it names a node of this tree.
    pub fn concept_level(&self, label: &str) -> Option<usize> {
        self.level_of.get(label).copied()
    }

    /// Resolves a raw text value to a leaf label: exact leaf match first,
    /// then the alias map, then the synthetic UNKNOWN leaf when declared.
    pub fn resolve_leaf<'a>(&'a self, raw: &'a str) -> Result<&'a str> {
        if self.level_of.get(raw) == Some(&0) {
            return Ok(raw);
        }
        if let Some((_, leaf)) = self.aliases.iter().find(|(a, _)| a == raw) {
            return Ok(leaf);
        }
        if self.unknown_parent.is_some() {
            return Ok(UNKNOWN_LEAF);
        }
        Err(Error::Unmappable {
            attribute: self.attribute.clone(),
            value: raw.to_string(),
        })
    }

    /// Label of the unique range containing `x`.
    pub fn classify(&self, x: f64) -> Result<&str> {
        for r in &self.ranges {
            if x >= r.start && x <= r.fin {
                return Ok(&r.label);
            }
        }
        Err(Error::OutOfDomain {
            attribute: self.attribute.clone(),
            value: x,
        })
    }

    /// The concept one level above `v`. `v` must be a concept at
    /// `from_level` (or a raw value when `from_level` is 0); ascending from
    /// the top level yields [`Value::Any`].
    pub fn ascend(&self, v: &Value, from_level: usize) -> Result<Value> {
        if from_level >= self.depth() {
            return Err(Error::LevelOutOfRange {
                attribute: self.attribute.clone(),
                level: from_level,
                depth: self.depth(),
            });
        }
        if self.is_numeric() && from_level == 0 {
            return match v {
                Value::Number(x) => Ok(Value::text(self.classify(*x)?)),
                other => Err(Error::Unmappable {
                    attribute: self.attribute.clone(),
                    value: other.to_string(),
                }),
            };
        }
        let label: &str = match v {
            Value::Text(s) if from_level == 0 => self.resolve_leaf(s)?,
            Value::Text(s) => {
                if self.level_of.get(s.as_str()) == Some(&from_level) {
                    s
                } else {
                    return Err(Error::UnknownConcept {
                        attribute: self.attribute.clone(),
                        concept: s.clone(),
                    });
                }
            }
            other => {
                return Err(Error::Unmappable {
                    attribute: self.attribute.clone(),
                    value: other.to_string(),
                })
            }
        };
        if from_level == self.top_level() {
            return Ok(Value::Any);
        }
        match self.parent.get(label) {
            Some(p) => Ok(Value::text(p.clone())),
            None => Err(Error::UnknownConcept {
                attribute: self.attribute.clone(),
                concept: label.to_string(),
            }),
        }
    }

    /// True iff repeatedly ascending from `v` reaches `target` (reflexive).
    pub fn generalizes_to(&self, v: &Value, target: &str) -> Result<bool> {
        if !self.level_of.contains_key(target) {
            return Err(Error::UnknownConcept {
                attribute: self.attribute.clone(),
                concept: target.to_string(),
            });
        }
        let start: String = match v {
            Value::Text(s) => {
                if self.level_of.contains_key(s.as_str()) {
                    s.clone()
                } else if self.is_numeric() {
                    return Err(Error::Unmappable {
                        attribute: self.attribute.clone(),
                        value: s.clone(),
                    });
                } else {
                    self.resolve_leaf(s)?.to_string()
                }
            }
            Value::Number(x) if self.is_numeric() => self.classify(*x)?.to_string(),
            _ => return Ok(false),
        };
        let mut cur = start.as_str();
        loop {
            if cur == target {
                return Ok(true);
            }
            match self.parent.get(cur) {
                Some(p) => cur = p,
                None => return Ok(false),
            }
        }
    }

    /// Serializes the tree back to its DSL block form.
    pub fn to_dsl(&self) -> String {
        let mut out = String::new();
        out.push_str("tree ");
        out.push_str(&quote_label(&self.attribute));
        if self.is_numeric() {
            out.push_str(" numeric");
        }
        out.push('\n');
        out.push_str("  levels ");
        let names: Vec<String> = self.level_names.iter().map(|n| quote_label(n)).collect();
        out.push_str(&names.join(", "));
        out.push('\n');
        for (raw, leaf) in &self.aliases {
            out.push_str(&format!("  alias \"{}\" = \"{}\"\n", raw, leaf));
        }
        if let Some(p) = &self.unknown_parent {
            out.push_str(&format!("  unknown {}\n", quote_label(p)));
        }
        for r in &self.ranges {
            out.push_str(&format!(
                "  {}: {} .. {}\n",
                quote_label(&r.label),
                fmt_decimal(r.start),
                fmt_decimal(r.fin)
            ));
        }
        let first_pair_level = if self.is_numeric() { 1 } else { 0 };
        for level in first_pair_level..self.depth().saturating_sub(1) {
            // Group consecutive same-parent children so declaration order
            // survives a round trip.
            let mut run_parent: Option<&str> = None;
            let mut run: Vec<&str> = Vec::new();
            let flush = |parent: Option<&str>, run: &mut Vec<&str>, out: &mut String| {
                if let Some(p) = parent {
                    if !run.is_empty() {
                        let children: Vec<String> =
                            run.iter().map(|c| quote_label(c)).collect();
                        out.push_str(&format!(
                            "  {}: {}\n",
                            quote_label(p),
                            children.join(", ")
                        ));
                        run.clear();
                    }
                }
            };
            for c in &self.level_concepts[level] {
                if self.unknown_parent.is_some() && level == 0 && c == UNKNOWN_LEAF {
                    continue; // recreated by the `unknown` directive
                }
                let p = self.parent.get(c).map(|s| s.as_str());
                if p != run_parent {
                    flush(run_parent, &mut run, &mut out);
                    run_parent = p;
                }
                run.push(c);
            }
            flush(run_parent, &mut run, &mut out);
        }
        out
    }
}

/// Flat child -> parent pair table: the single-table encoding of background
/// knowledge used by the classic path. Top concepts point at ANY.
#[derive(Debug, Clone, PartialEq)]
pub struct ConceptHierarchy {
    pub entries: Vec<(String, String)>,
}

impl ConceptHierarchy {
    pub fn from_trees(trees: &[ConceptTree]) -> ConceptHierarchy {
        let mut entries = Vec::new();
        for t in trees {
            for level in 0..t.depth() {
                for c in t.level_concepts(level) {
                    match t.parent_of(c) {
                        Some(p) => entries.push((c.clone(), p.to_string())),
                        None => entries.push((c.clone(), "ANY".to_string())),
                    }
                }
            }
        }
        ConceptHierarchy { entries }
    }
}

/// Serializes a full hierarchy file.
pub fn serialize_hierarchy(trees: &[ConceptTree]) -> String {
    trees
        .iter()
        .map(|t| t.to_dsl())
        .collect::<Vec<_>>()
        .join("\n")
}

fn needs_quoting(label: &str) -> bool {
    label.is_empty()
        || label.contains([',', ':', '#', '=', '"'])
        || label.contains(char::is_whitespace)
        || label.contains("..")
        || KEYWORDS.contains(&label)
        || label != label.trim()
}

fn quote_label(label: &str) -> String {
    if needs_quoting(label) {
        format!("\"{}\"", label)
    } else {
        label.to_string()
    }
}

// -------------------------------------------------------------------------
// Parser
// -------------------------------------------------------------------------

struct RawTree {
    attribute: String,
    numeric: bool,
    line: usize,
    level_names: Option<(Vec<String>, usize)>,
    aliases: Vec<(String, String, usize)>,
    unknown: Option<(String, usize)>,
    /// (child, parent, line) in declaration order; ANY lines excluded.
    pairs: Vec<(String, String, usize)>,
    ranges: Vec<(String, f64, f64, usize)>,
}

struct Parser<'a> {
    file: &'a str,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, line: usize, message: impl Into<String>) -> Result<T> {
        Err(Error::Parse {
            file: self.file.to_string(),
            line,
            message: message.into(),
        })
    }
}

/// Parses a hierarchy file into one concept tree per declared attribute.
/// `origin` names the source in error messages.
pub fn parse_hierarchy(source: &str, origin: &str) -> Result<Vec<ConceptTree>> {
    let p = Parser { file: origin };
    let mut raws: Vec<RawTree> = Vec::new();

    for (idx, raw_line) in source.lines().enumerate() {
        let lineno = idx + 1;
        let line = strip_comment(raw_line);
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let first = line.split_whitespace().next().unwrap_or("");
        if first == "tree" {
            let rest = line["tree".len()..].trim();
            let (attribute, tail) = take_label(rest, &p, lineno)?;
            let numeric = match tail.trim() {
                "" => false,
                "numeric" => true,
                other => return p.err(lineno, format!("unexpected trailing {:?}", other)),
            };
            if raws
                .iter()
                .any(|r| r.attribute.eq_ignore_ascii_case(&attribute))
            {
                return p.err(lineno, format!("duplicate tree for attribute {attribute:?}"));
            }
            raws.push(RawTree {
                attribute,
                numeric,
                line: lineno,
                level_names: None,
                aliases: Vec::new(),
                unknown: None,
                pairs: Vec::new(),
                ranges: Vec::new(),
            });
            continue;
        }
        let cur = match raws.last_mut() {
            Some(r) => r,
            None => return p.err(lineno, "expected `tree <attribute>` before this line"),
        };
        match first {
            "levels" => {
                if cur.level_names.is_some() {
                    return p.err(lineno, "levels already declared for this tree");
                }
                let names = split_labels(line["levels".len()..].trim(), &p, lineno)?;
                if names.is_empty() {
                    return p.err(lineno, "levels line declares no names");
                }
                cur.level_names = Some((names, lineno));
            }
            "alias" => {
                let rest = line["alias".len()..].trim();
                let (raw, tail) = take_label(rest, &p, lineno)?;
                let tail = tail.trim();
                let tail = match tail.strip_prefix('=') {
                    Some(t) => t.trim(),
                    None => return p.err(lineno, "expected `alias \"<raw>\" = \"<leaf>\"`"),
                };
                let (leaf, tail) = take_label(tail, &p, lineno)?;
                if !tail.trim().is_empty() {
                    return p.err(lineno, "unexpected text after alias declaration");
                }
                if cur.aliases.iter().any(|(r, _, _)| *r == raw) {
                    return p.err(lineno, format!("duplicate alias for {raw:?}"));
                }
                cur.aliases.push((raw, leaf, lineno));
            }
            "unknown" => {
                if cur.unknown.is_some() {
                    return p.err(lineno, "unknown directive already declared");
                }
                let (parent, tail) = take_label(line["unknown".len()..].trim(), &p, lineno)?;
                if !tail.trim().is_empty() {
                    return p.err(lineno, "unexpected text after unknown directive");
                }
                cur.unknown = Some((parent, lineno));
            }
            _ => {
                let colon = match find_outside_quotes(line, ':') {
                    Some(i) => i,
                    None => return p.err(lineno, "expected `parent: child, ...`"),
                };
                let parent = unquote_label(&line[..colon], &p, lineno)?;
                let rest = line[colon + 1..].trim();
                if parent == "ANY" {
                    // Accepted for compatibility with hierarchies that spell
                    // out the universal root; carries no tree structure.
                    split_labels(rest, &p, lineno)?;
                    continue;
                }
                if contains_outside_quotes(rest, "..") {
                    if !cur.numeric {
                        return p.err(
                            lineno,
                            "numeric range in a categorical tree (declare `tree <attr> numeric`)",
                        );
                    }
                    let (start, fin) = parse_range(rest, &p, lineno)?;
                    if cur.ranges.iter().any(|(l, ..)| *l == parent) {
                        return p.err(lineno, format!("duplicate range label {parent:?}"));
                    }
                    cur.ranges.push((parent, start, fin, lineno));
                } else {
                    let children = split_labels(rest, &p, lineno)?;
                    if children.is_empty() {
                        return p.err(lineno, "no children listed");
                    }
                    for c in children {
                        if c == "ANY" {
                            return p.err(lineno, "ANY may appear only as a parent");
                        }
                        cur.pairs.push((c, parent.clone(), lineno));
                    }
                }
            }
        }
    }

    if raws.is_empty() {
        return p.err(1, "hierarchy file declares no trees");
    }
    raws.into_iter().map(|r| finalize_tree(r, &p)).collect()
}

fn finalize_tree(raw: RawTree, p: &Parser<'_>) -> Result<ConceptTree> {
    let attr = raw.attribute.clone();

    // Ranges: validate bounds, uniqueness against pair labels, overlap.
    let mut ranges: Vec<NumericRange> = Vec::new();
    if raw.numeric {
        if raw.ranges.is_empty() {
            return p.err(raw.line, format!("numeric tree {attr:?} declares no ranges"));
        }
        for (label, start, fin, line) in &raw.ranges {
            if start > fin {
                return p.err(*line, format!("range {label:?}: start {start} > fin {fin}"));
            }
            ranges.push(NumericRange {
                start: if *start == 0.0 { 0.0 } else { *start },
                fin: if *fin == 0.0 { 0.0 } else { *fin },
                label: label.clone(),
            });
        }
        ranges.sort_by(|a, b| a.start.total_cmp(&b.start));
        for w in ranges.windows(2) {
            if w[1].start <= w[0].fin {
                return p.err(
                    raw.line,
                    format!(
                        "ranges {:?} and {:?} of tree {attr:?} overlap",
                        w[0].label, w[1].label
                    ),
                );
            }
        }
    } else {
        if !raw.ranges.is_empty() {
            return p.err(raw.ranges[0].3, "ranges are only valid in numeric trees");
        }
        if raw.pairs.is_empty() {
            return p.err(raw.line, format!("tree {attr:?} declares no concepts"));
        }
    }

    // Child -> parent map; duplicate and two-parent detection.
    let mut parent: HashMap<String, String> = HashMap::new();
    let mut appearance: Vec<String> = Vec::new();
    let seen = |label: &str, appearance: &mut Vec<String>| {
        if !appearance.iter().any(|l| l == label) {
            appearance.push(label.to_string());
        }
    };
    for r in &ranges {
        seen(&r.label, &mut appearance);
    }
    for (child, par, line) in &raw.pairs {
        seen(par, &mut appearance);
        seen(child, &mut appearance);
        match parent.get(child) {
            Some(existing) if existing == par => {
                return p.err(
                    *line,
                    format!("duplicate concept {child:?} under {par:?}"),
                );
            }
            Some(existing) => {
                return p.err(
                    *line,
                    format!("concept {child:?} has two parents: {existing:?} and {par:?}"),
                );
            }
            None => {
                parent.insert(child.clone(), par.clone());
            }
        }
        if ranges.iter().any(|r| r.label == *par) {
            return p.err(
                *line,
                format!("range label {par:?} cannot have children below it"),
            );
        }
    }

    // Cycle check.
    for start in parent.keys() {
        let mut cur = start;
        let mut steps = 0usize;
        while let Some(next) = parent.get(cur) {
            cur = next;
            steps += 1;
            if steps > parent.len() {
                return p.err(raw.line, format!("cycle involving concept {start:?}"));
            }
        }
    }

    // Level assignment: leaves (or ranges) upward, demanding balance.
    let mut children: HashMap<&str, Vec<&str>> = HashMap::new();
    for (child, par, _) in &raw.pairs {
        children.entry(par.as_str()).or_default().push(child.as_str());
    }
    let mut level_of: HashMap<String, usize> = HashMap::new();
    for r in &ranges {
        level_of.insert(r.label.clone(), 1);
    }
    fn level(
        node: &str,
        children: &HashMap<&str, Vec<&str>>,
        level_of: &mut HashMap<String, usize>,
        numeric: bool,
        attr: &str,
    ) -> std::result::Result<usize, String> {
        if let Some(&l) = level_of.get(node) {
            return Ok(l);
        }
        let l = match children.get(node) {
            Some(kids) => {
                let mut kid_level: Option<usize> = None;
                for k in kids {
                    let kl = level(k, children, level_of, numeric, attr)?;
                    match kid_level {
                        None => kid_level = Some(kl),
                        Some(existing) if existing != kl => {
                            return Err(format!(
                                "unbalanced tree: children of {node:?} sit at levels {existing} and {kl}"
                            ));
                        }
                        _ => {}
                    }
                }
                kid_level.unwrap() + 1
            }
            None if numeric => {
                return Err(format!(
                    "concept {node:?} in numeric tree {attr:?} must generalize from a declared range"
                ));
            }
            None => 0,
        };
        level_of.insert(node.to_string(), l);
        Ok(l)
    }
    let all_nodes: Vec<String> = appearance.clone();
    for node in &all_nodes {
        if let Err(msg) = level(node, &children, &mut level_of, raw.numeric, &attr) {
            return p.err(raw.line, msg);
        }
    }

    // Roots must share one level, otherwise leaf paths differ in length.
    let depth = level_of.values().copied().max().unwrap_or(0) + 1;
    for node in &all_nodes {
        if !parent.contains_key(node.as_str()) {
            let l = level_of[node.as_str()];
            if l != depth - 1 {
                return p.err(
                    raw.line,
                    format!(
                        "unbalanced tree: top concept {node:?} sits at level {l}, expected {}",
                        depth - 1
                    ),
                );
            }
        }
    }
    if raw.numeric && depth < 2 {
        return p.err(raw.line, "numeric tree must have at least two levels");
    }

    // Level names: declared or defaulted, one per level.
    let level_names = match raw.level_names {
        Some((names, line)) => {
            if names.len() != depth {
                return p.err(
                    line,
                    format!(
                        "levels declares {} names but tree {attr:?} has depth {depth}",
                        names.len()
                    ),
                );
            }
            for (i, n) in names.iter().enumerate() {
                if names[..i].iter().any(|m| m.eq_ignore_ascii_case(n)) {
                    return p.err(line, format!("duplicate level name {n:?}"));
                }
            }
            names
        }
        None => (0..depth)
            .map(|k| {
                if k == 0 {
                    attr.clone()
                } else {
                    format!("{attr}_L{k}")
                }
            })
            .collect(),
    };

    // Aliases: categorical only, must point at an existing leaf.
    let mut aliases = Vec::new();
    for (raw_value, leaf, line) in raw.aliases {
        if raw.numeric {
            return p.err(line, "aliases apply to categorical trees only");
        }
        if level_of.get(&leaf) != Some(&0) {
            return p.err(line, format!("alias target {leaf:?} is not a leaf"));
        }
        if level_of.contains_key(&raw_value) {
            return p.err(
                line,
                format!("alias source {raw_value:?} is already a concept of this tree"),
            );
        }
        aliases.push((raw_value, leaf));
    }

    // Unknown-value routing: synthesize the UNKNOWN leaf under the parent.
    let mut unknown_parent = None;
    if let Some((par, line)) = raw.unknown {
        if raw.numeric {
            return p.err(line, "unknown directive applies to categorical trees only");
        }
        if level_of.get(&par) != Some(&1) {
            return p.err(
                line,
                format!("unknown-value parent {par:?} is not a level-1 concept"),
            );
        }
        if level_of.contains_key(UNKNOWN_LEAF) {
            return p.err(line, format!("{UNKNOWN_LEAF:?} is already a concept"));
        }
        level_of.insert(UNKNOWN_LEAF.to_string(), 0);
        parent.insert(UNKNOWN_LEAF.to_string(), par.clone());
        appearance.push(UNKNOWN_LEAF.to_string());
        unknown_parent = Some(par);
    }

    // Leaf order follows declaration; each higher level takes the order its
    // concepts are first reached from the level below. That makes the order
    // a function of the tree itself, so serialization round-trips exactly.
    let mut level_concepts: Vec<Vec<String>> = vec![Vec::new(); depth];
    if raw.numeric {
        level_concepts[1] = ranges.iter().map(|r| r.label.clone()).collect();
    } else {
        for label in &appearance {
            if level_of[label.as_str()] == 0 {
                level_concepts[0].push(label.clone());
            }
        }
    }
    let first_derived = if raw.numeric { 2 } else { 1 };
    for k in first_derived..depth {
        let mut order: Vec<String> = Vec::new();
        for c in &level_concepts[k - 1] {
            if let Some(p) = parent.get(c.as_str()) {
                if !order.iter().any(|x| x == p) {
                    order.push(p.clone());
                }
            }
        }
        level_concepts[k] = order;
    }

    Ok(ConceptTree {
        attribute: attr,
        kind: if raw.numeric {
            TreeKind::Numeric
        } else {
            TreeKind::Categorical
        },
        level_names,
        level_concepts,
        parent,
        level_of,
        ranges,
        aliases,
        unknown_parent,
    })
}

/// Case-insensitive lookup of one attribute's tree.
pub fn find_tree<'a>(trees: &'a [ConceptTree], attribute: &str) -> Option<&'a ConceptTree> {
    trees
        .iter()
        .find(|t| t.attribute.eq_ignore_ascii_case(attribute))
}

// --- low-level line helpers ----------------------------------------------

fn strip_comment(line: &str) -> &str {
    let mut in_quotes = false;
    for (i, c) in line.char_indices() {
        match c {
            '"' => in_quotes = !in_quotes,
            '#' if !in_quotes => return &line[..i],
            _ => {}
        }
    }
    line
}

fn find_outside_quotes(s: &str, needle: char) -> Option<usize> {
    let mut in_quotes = false;
    for (i, c) in s.char_indices() {
        match c {
            '"' => in_quotes = !in_quotes,
            c if c == needle && !in_quotes => return Some(i),
            _ => {}
        }
    }
    None
}

fn contains_outside_quotes(s: &str, needle: &str) -> bool {
    let mut in_quotes = false;
    let bytes = s.as_bytes();
    let nb = needle.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i] == b'"' {
            in_quotes = !in_quotes;
        } else if !in_quotes && bytes[i..].starts_with(nb) {
            return true;
        }
        i += 1;
    }
    false
}

/// Takes one label (quoted or bare) off the front; returns it and the rest.
fn take_label<'s>(s: &'s str, p: &Parser<'_>, line: usize) -> Result<(String, &'s str)> {
    let s = s.trim_start();
    if let Some(rest) = s.strip_prefix('"') {
        match rest.find('"') {
            Some(end) => Ok((rest[..end].to_string(), &rest[end + 1..])),
            None => p.err(line, "unterminated quoted label"),
        }
    } else {
        let end = s
            .find(|c: char| c.is_whitespace() || c == ',' || c == ':' || c == '=')
            .unwrap_or(s.len());
        if end == 0 {
            return p.err(line, "expected a label");
        }
        Ok((s[..end].to_string(), &s[end..]))
    }
}

fn unquote_label(s: &str, p: &Parser<'_>, line: usize) -> Result<String> {
    let s = s.trim();
    if s.starts_with('"') {
        let (label, rest) = take_label(s, p, line)?;
        if !rest.trim().is_empty() {
            return p.err(line, format!("unexpected text after {label:?}"));
        }
        if label.is_empty() {
            return p.err(line, "empty label");
        }
        Ok(label)
    } else {
        if s.is_empty() {
            return p.err(line, "empty label");
        }
        if s.contains('"') {
            return p.err(line, "stray quote inside a bare label");
        }
        Ok(s.to_string())
    }
}

/// Splits a comma-separated label list, honoring quotes.
fn split_labels(s: &str, p: &Parser<'_>, line: usize) -> Result<Vec<String>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    let mut labels = Vec::new();
    let mut start = 0;
    let mut in_quotes = false;
    for (i, c) in s.char_indices() {
        match c {
            '"' => in_quotes = !in_quotes,
            ',' if !in_quotes => {
                labels.push(unquote_label(&s[start..i], p, line)?);
                start = i + 1;
            }
            _ => {}
        }
    }
    if in_quotes {
        return p.err(line, "unterminated quoted label");
    }
    labels.push(unquote_label(&s[start..], p, line)?);
    Ok(labels)
}

fn parse_range(s: &str, p: &Parser<'_>, line: usize) -> Result<(f64, f64)> {
    let (a, b) = match s.split_once("..") {
        Some(parts) => parts,
        None => return p.err(line, "expected `<start> .. <fin>`"),
    };
    let parse = |txt: &str| -> Result<f64> {
        match txt.trim().parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => p.err(line, format!("cannot parse {:?} as a number", txt.trim())),
        }
    };
    Ok((parse(a)?, parse(b)?))
}
