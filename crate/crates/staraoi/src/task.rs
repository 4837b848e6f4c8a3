//! Task files: the line-oriented front end driving both induction paths.
//!
//! A task file names the data, its schema, the hierarchy file, the target
//! class, and per-path options:
//!
//! ```text
//! data student.csv
//! delimiter ,
//! schema Name text, Category text, Major text, Birthplace text, GPA numeric
//! hierarchy student.trees
//! target Category = graduate
//! path both              # classic | star | both
//! threshold 3            # classic only
//! level Birthplace = 1   # star only, repeatable
//! further Major          # classic only, repeatable
//! union Major            # repeatable
//! union-mode merge-set   # or drop
//! format text            # or records
//! ```
//!
//! Relative paths resolve against the task file's directory. Running a task
//! executes the chosen path(s), applies the scripted further/union moves,
//! renders the report, and — in `both` mode — states whether the two paths
//! produced identical relations before any refinement.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use crate::classic::{
    classic_generalize, further_generalize, union_on, ClassicTask, GeneralizedRelation, UnionMode,
};
use crate::dimension::{build_dimension_table, DimensionTable};
use crate::error::{Error, Result};
use crate::hierarchy::{find_tree, parse_hierarchy, ConceptTree};
use crate::relation::{AttrKind, Attribute, Relation, Schema};
use crate::report::{generalized_records, generalized_table};
use crate::rules::{to_rule, CharacteristicRule};
use crate::star::{emit_sql, star_generalize, StarTask};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathChoice {
    Classic,
    Star,
    Both,
}

impl PathChoice {
    pub fn runs_classic(self) -> bool {
        matches!(self, PathChoice::Classic | PathChoice::Both)
    }

    pub fn runs_star(self) -> bool {
        matches!(self, PathChoice::Star | PathChoice::Both)
    }
}

impl fmt::Display for PathChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PathChoice::Classic => f.write_str("classic"),
            PathChoice::Star => f.write_str("star"),
            PathChoice::Both => f.write_str("both"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Text,
    Records,
}

#[derive(Debug, Clone)]
pub struct TaskFile {
    pub data_path: PathBuf,
    pub delimiter: u8,
    pub schema: Schema,
    pub hierarchy_path: PathBuf,
    pub target_attribute: String,
    pub target_concept: String,
    pub path: PathChoice,
    pub threshold: Option<usize>,
    pub attr_threshold: Option<usize>,
    pub levels: Vec<(String, usize)>,
    pub further: Vec<String>,
    pub unions: Vec<String>,
    pub union_mode: UnionMode,
    pub format: OutputFormat,
}

/// Command-line overrides layered on top of a task file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub threshold: Option<usize>,
    pub attr_threshold: Option<usize>,
    pub levels: Vec<(String, usize)>,
    pub further: Vec<String>,
    pub unions: Vec<String>,
    pub union_mode: Option<UnionMode>,
    pub format: Option<OutputFormat>,
    pub path: Option<PathChoice>,
    pub delimiter: Option<u8>,
}

impl TaskFile {
    pub fn apply(&mut self, o: &Overrides) {
        if let Some(p) = o.path {
            self.path = p;
            // file-sourced directives for a path that no longer runs are
            // dropped; explicit flags below still hit validation
            if !p.runs_classic() {
                self.threshold = None;
                self.attr_threshold = None;
                self.further.clear();
            }
            if !p.runs_star() {
                self.levels.clear();
            }
        }
        if let Some(t) = o.threshold {
            self.threshold = Some(t);
        }
        if let Some(t) = o.attr_threshold {
            self.attr_threshold = Some(t);
        }
        for (a, l) in &o.levels {
            self.levels.retain(|(b, _)| !b.eq_ignore_ascii_case(a));
            self.levels.push((a.clone(), *l));
        }
        if !o.further.is_empty() {
            self.further = o.further.clone();
        }
        if !o.unions.is_empty() {
            self.unions = o.unions.clone();
        }
        if let Some(m) = o.union_mode {
            self.union_mode = m;
        }
        if let Some(f) = o.format {
            self.format = f;
        }
        if let Some(d) = o.delimiter {
            self.delimiter = d;
        }
    }

    /// Checks that directives fit the chosen path and that every referenced
    /// attribute exists in the schema.
    pub fn validate(&self) -> Result<()> {
        let check_attr = |name: &str| -> Result<()> {
            if self.schema.index_of(name).is_none() {
                return Err(Error::UnknownAttribute {
                    name: name.to_string(),
                });
            }
            Ok(())
        };
        check_attr(&self.target_attribute)?;
        for (a, _) in &self.levels {
            check_attr(a)?;
        }
        for a in self.further.iter().chain(self.unions.iter()) {
            check_attr(a)?;
        }
        if !self.path.runs_classic() && (self.threshold.is_some() || self.attr_threshold.is_some())
        {
            return Err(Error::Config(
                "thresholds apply to the classic path only".into(),
            ));
        }
        if !self.path.runs_star() && !self.levels.is_empty() {
            return Err(Error::Config(
                "level selection applies to the star path only".into(),
            ));
        }
        if !self.path.runs_classic() && !self.further.is_empty() {
            return Err(Error::Config(
                "further generalization applies to the classic path only".into(),
            ));
        }
        if self.path.runs_classic() && self.threshold.is_none() {
            return Err(Error::Config(
                "the classic path requires a generalization threshold".into(),
            ));
        }
        Ok(())
    }
}

fn strip_task_comment(line: &str) -> &str {
    if line.trim_start().starts_with('#') {
        return "";
    }
    // inline comments need a space before the hash, so paths may contain #
    match line.find(" #") {
        Some(i) => &line[..i],
        None => line,
    }
}

/// Parses task file text. `origin` is the file path; relative data and
/// hierarchy paths resolve against its directory.
pub fn parse_task(source: &str, origin: &Path) -> Result<TaskFile> {
    let file = origin.display().to_string();
    let base = origin.parent().unwrap_or_else(|| Path::new("."));
    let err = |line: usize, message: String| Error::Parse {
        file: file.clone(),
        line,
        message,
    };

    let mut data_path = None;
    let mut delimiter = b',';
    let mut schema_attrs: Option<Vec<Attribute>> = None;
    let mut hierarchy_path = None;
    let mut target: Option<(String, String)> = None;
    let mut path = PathChoice::Both;
    let mut threshold = None;
    let mut attr_threshold = None;
    let mut levels = Vec::new();
    let mut further = Vec::new();
    let mut unions = Vec::new();
    let mut union_mode = UnionMode::MergeSet;
    let mut format = OutputFormat::Text;

    for (idx, raw_line) in source.lines().enumerate() {
        let lineno = idx + 1;
        let line = strip_task_comment(raw_line).trim();
        if line.is_empty() {
            continue;
        }
        let (keyword, rest) = match line.split_once(char::is_whitespace) {
            Some((k, r)) => (k, r.trim()),
            None => (line, ""),
        };
        match keyword {
            "data" => data_path = Some(base.join(rest)),
            "hierarchy" => hierarchy_path = Some(base.join(rest)),
            "delimiter" => delimiter = parse_delimiter(rest).map_err(|m| err(lineno, m))?,
            "schema" => {
                let mut attrs = Vec::new();
                for part in rest.split(',') {
                    let part = part.trim();
                    let (name, kind) = match part.rsplit_once(char::is_whitespace) {
                        Some((n, k)) => (n.trim(), k.trim()),
                        None => {
                            return Err(err(
                                lineno,
                                format!("expected `<name> text|numeric`, got {part:?}"),
                            ))
                        }
                    };
                    let kind = match kind.to_ascii_lowercase().as_str() {
                        "text" => AttrKind::Text,
                        "numeric" => AttrKind::Numeric,
                        other => {
                            return Err(err(lineno, format!("unknown attribute kind {other:?}")))
                        }
                    };
                    attrs.push(Attribute {
                        name: name.to_string(),
                        kind,
                    });
                }
                schema_attrs = Some(attrs);
            }
            "target" => {
                let (attr, concept) = rest
                    .split_once('=')
                    .ok_or_else(|| err(lineno, "expected `target <attr> = <concept>`".into()))?;
                target = Some((attr.trim().to_string(), concept.trim().to_string()));
            }
            "path" => {
                path = match rest {
                    "classic" => PathChoice::Classic,
                    "star" => PathChoice::Star,
                    "both" => PathChoice::Both,
                    other => return Err(err(lineno, format!("unknown path {other:?}"))),
                }
            }
            "threshold" => threshold = Some(parse_count(rest).map_err(|m| err(lineno, m))?),
            "attr-threshold" => {
                attr_threshold = Some(parse_count(rest).map_err(|m| err(lineno, m))?)
            }
            "level" => {
                let (attr, l) = rest
                    .split_once('=')
                    .ok_or_else(|| err(lineno, "expected `level <attr> = <index>`".into()))?;
                let l = l
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| err(lineno, format!("cannot parse level {:?}", l.trim())))?;
                levels.push((attr.trim().to_string(), l));
            }
            "further" => further.push(rest.to_string()),
            "union" => unions.push(rest.to_string()),
            "union-mode" => {
                union_mode = match rest {
                    "drop" => UnionMode::Drop,
                    "merge-set" => UnionMode::MergeSet,
                    other => return Err(err(lineno, format!("unknown union mode {other:?}"))),
                }
            }
            "format" => {
                format = match rest {
                    "text" => OutputFormat::Text,
                    "records" => OutputFormat::Records,
                    other => return Err(err(lineno, format!("unknown format {other:?}"))),
                }
            }
            other => return Err(err(lineno, format!("unknown directive {other:?}"))),
        }
    }

    let schema = Schema::new(
        schema_attrs.ok_or_else(|| err(0, "missing `schema` directive".into()))?,
    )?;
    let (target_attribute, target_concept) =
        target.ok_or_else(|| err(0, "missing `target` directive".into()))?;
    Ok(TaskFile {
        data_path: data_path.ok_or_else(|| err(0, "missing `data` directive".into()))?,
        delimiter,
        schema,
        hierarchy_path: hierarchy_path
            .ok_or_else(|| err(0, "missing `hierarchy` directive".into()))?,
        target_attribute,
        target_concept,
        path,
        threshold,
        attr_threshold,
        levels,
        further,
        unions,
        union_mode,
        format,
    })
}

fn parse_count(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(n) if n >= 1 => Ok(n),
        _ => Err(format!("expected a positive integer, got {s:?}")),
    }
}

/// Parses a delimiter spec: a single ASCII character or one of the words
/// `tab`, `comma`, `semicolon`, `space`.
pub fn parse_delimiter(s: &str) -> std::result::Result<u8, String> {
    match s {
        "tab" => Ok(b'\t'),
        "comma" => Ok(b','),
        "semicolon" => Ok(b';'),
        "space" => Ok(b' '),
        s if s.len() == 1 && s.is_ascii() => Ok(s.as_bytes()[0]),
        other => Err(format!("unsupported delimiter {other:?}")),
    }
}

/// Reads and parses a task file from disk.
pub fn parse_task_file(path: &Path) -> Result<TaskFile> {
    let source = fs::read_to_string(path)?;
    parse_task(&source, path)
}

/// Loads delimited data against the task's schema. The header line must
/// name the schema's attributes in order (case-insensitive).
pub fn load_data_file(path: &Path, delimiter: u8, schema: &Schema) -> Result<Relation> {
    let content = fs::read_to_string(path)?;
    let file = path.display().to_string();
    let mut rdr = csv::ReaderBuilder::new()
        .delimiter(delimiter)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(content.as_bytes());
    let headers = rdr
        .headers()
        .map_err(|e| Error::Parse {
            file: file.clone(),
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    if headers.len() != schema.len()
        || !headers
            .iter()
            .zip(schema.attrs())
            .all(|(h, a)| h.trim().eq_ignore_ascii_case(&a.name))
    {
        return Err(Error::Parse {
            file,
            line: 1,
            message: format!(
                "header ({}) does not match the declared schema ({})",
                headers.iter().collect::<Vec<_>>().join(", "),
                schema.names().join(", ")
            ),
        });
    }
    let mut records = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse {
            file: file.clone(),
            line: i + 2,
            message: e.to_string(),
        })?;
        records.push(rec.iter().map(|f| f.to_string()).collect::<Vec<String>>());
    }
    Relation::load(&records, schema.clone())
}

#[derive(Debug)]
/// One executed path: the raw generalization, the result after scripted
/// further/union moves, and its characteristic rule.
pub struct PathRun {
    pub generalized: GeneralizedRelation,
    pub refined: GeneralizedRelation,
    pub rule: CharacteristicRule,
}

#[derive(Debug)]
pub struct TaskOutcome {
    pub classic: Option<PathRun>,
    pub star: Option<PathRun>,
    /// `both` mode: whether the two generalizations match row for row
    /// (compared before further/union refinement).
    pub identical: Option<bool>,
    pub report: String,
}

/// Executes a task end to end and renders its report.
pub fn run_task(task: &TaskFile) -> Result<TaskOutcome> {
    task.validate()?;
    let trees = parse_hierarchy(
        &fs::read_to_string(&task.hierarchy_path)?,
        &task.hierarchy_path.display().to_string(),
    )?;
    let data = load_data_file(&task.data_path, task.delimiter, &task.schema)?;

    let classic = if task.path.runs_classic() {
        Some(run_classic_path(task, &data, &trees)?)
    } else {
        None
    };
    let star = if task.path.runs_star() {
        Some(run_star_path(task, &data, &trees)?)
    } else {
        None
    };
    let identical = match (&classic, &star) {
        (Some(c), Some(s)) => Some(c.generalized.same_result(&s.generalized)),
        _ => None,
    };

    let report = render_report(task, classic.as_ref(), star.as_ref(), identical);
    Ok(TaskOutcome {
        classic,
        star,
        identical,
        report,
    })
}

fn run_classic_path(
    task: &TaskFile,
    data: &Relation,
    trees: &[ConceptTree],
) -> Result<PathRun> {
    let threshold = task
        .threshold
        .expect("validate() requires a classic threshold");
    let ctask = ClassicTask::new(&task.target_attribute, &task.target_concept, threshold)
        .with_attribute_threshold(task.attr_threshold.unwrap_or(threshold));
    let generalized = classic_generalize(data, trees, &ctask)?;
    let mut refined = generalized.clone();
    for attr in &task.further {
        refined = further_generalize(&refined, attr, trees)?;
    }
    for attr in &task.unions {
        refined = union_on(&refined, attr, task.union_mode)?;
    }
    let total = generalized.relation().total_votes();
    let rule = to_rule(&refined, &task.target_concept, total)?;
    Ok(PathRun {
        generalized,
        refined,
        rule,
    })
}

fn run_star_path(task: &TaskFile, data: &Relation, trees: &[ConceptTree]) -> Result<PathRun> {
    let tree = find_tree(trees, &task.target_attribute).ok_or_else(|| {
        Error::Config(format!(
            "target attribute {} has no concept tree",
            task.target_attribute
        ))
    })?;
    let target_level = tree
        .concept_level(&task.target_concept)
        .ok_or_else(|| Error::UnknownConcept {
            attribute: tree.attribute().to_string(),
            concept: task.target_concept.clone(),
        })?;
    if target_level == 0 {
        return Err(Error::Config(format!(
            "star target {} is a leaf; pick a concept above the leaf level",
            task.target_concept
        )));
    }
    let dims: Vec<DimensionTable> = trees.iter().map(build_dimension_table).collect();
    let mut stask = StarTask::new(
        &task.target_attribute,
        &task.target_concept,
        target_level,
    );
    for (attr, level) in &task.levels {
        stask = stask.with_level(attr.clone(), *level);
    }
    let generalized = star_generalize(data, &dims, &stask)?;
    let mut refined = generalized.clone();
    for attr in &task.unions {
        refined = union_on(&refined, attr, task.union_mode)?;
    }
    let total = generalized.relation().total_votes();
    let rule = to_rule(&refined, &task.target_concept, total)?;
    Ok(PathRun {
        generalized,
        refined,
        rule,
    })
}

/// The SQL equivalent of the task's star query, for inspection.
pub fn emit_task_sql(task: &TaskFile) -> Result<String> {
    let trees = parse_hierarchy(
        &fs::read_to_string(&task.hierarchy_path)?,
        &task.hierarchy_path.display().to_string(),
    )?;
    let tree = find_tree(&trees, &task.target_attribute).ok_or_else(|| {
        Error::Config(format!(
            "target attribute {} has no concept tree",
            task.target_attribute
        ))
    })?;
    let target_level = tree
        .concept_level(&task.target_concept)
        .ok_or_else(|| Error::UnknownConcept {
            attribute: tree.attribute().to_string(),
            concept: task.target_concept.clone(),
        })?;
    let dims: Vec<DimensionTable> = trees.iter().map(build_dimension_table).collect();
    let mut stask = StarTask::new(
        &task.target_attribute,
        &task.target_concept,
        target_level.max(1),
    );
    for (attr, level) in &task.levels {
        stask = stask.with_level(attr.clone(), *level);
    }
    let fact = Relation::new(task.schema.clone(), Vec::new())?;
    let fact_table = task
        .data_path
        .file_stem()
        .map(|s| s.to_string_lossy().to_string())
        .unwrap_or_else(|| "fact".to_string());
    emit_sql(&fact_table, &fact, &dims, &stask)
}

/// Writes each dimension table as delimited text under `out_dir`; returns
/// the written paths.
pub fn export_dimensions(task: &TaskFile, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let trees = parse_hierarchy(
        &fs::read_to_string(&task.hierarchy_path)?,
        &task.hierarchy_path.display().to_string(),
    )?;
    fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();
    for tree in &trees {
        let dim = build_dimension_table(tree);
        let path = out_dir.join(format!(
            "hierarchy_{}.csv",
            dim.attribute().to_lowercase()
        ));
        let file = fs::File::create(&path)?;
        dim.write_delimited(file, task.delimiter)?;
        written.push(path);
    }
    Ok(written)
}

fn path_flags(run: &PathRun, is_classic: bool) -> String {
    let mut flags = Vec::new();
    if run.refined.contains_any() {
        flags.push("contains ANY".to_string());
    }
    if is_classic && run.refined.ascension_count() == 0 {
        flags.push("no generalization".to_string());
    }
    if is_classic && !run.refined.threshold_satisfied() {
        flags.push("relation threshold exceeded".to_string());
    }
    if flags.is_empty() {
        "none".to_string()
    } else {
        flags.join("; ")
    }
}

fn render_path_section(
    out: &mut String,
    title: &str,
    run: &PathRun,
    task: &TaskFile,
    is_classic: bool,
) {
    out.push_str(&format!("== {title} ==\n"));
    let table = |g: &GeneralizedRelation| match task.format {
        OutputFormat::Text => generalized_table(g),
        OutputFormat::Records => generalized_records(g, task.delimiter),
    };
    out.push_str("generalized relation:\n");
    out.push_str(&table(&run.generalized));
    let refined_differs =
        !task.further.is_empty() || !task.unions.is_empty();
    if refined_differs {
        out.push_str("after further generalization / unioning:\n");
        out.push_str(&table(&run.refined));
    }
    out.push_str(&format!(
        "rows: {}, total vote: {}\n",
        run.refined.relation().row_count(),
        run.refined.relation().total_votes()
    ));
    if is_classic {
        out.push_str(&format!(
            "threshold satisfied: {}\n",
            if run.refined.threshold_satisfied() {
                "yes"
            } else {
                "no"
            }
        ));
    } else {
        out.push_str("thresholds: none (the group-by bounds the result)\n");
    }
    out.push_str(&format!("flags: {}\n", path_flags(run, is_classic)));
    out.push_str("provenance:\n");
    for step in run.refined.provenance() {
        out.push_str(&format!("  - {step}\n"));
    }
    out.push_str("characteristic rule:\n");
    match task.format {
        OutputFormat::Text => out.push_str(&run.rule.to_text()),
        OutputFormat::Records => out.push_str(&run.rule.to_records(task.delimiter)),
    }
    out.push('\n');
}

fn render_report(
    task: &TaskFile,
    classic: Option<&PathRun>,
    star: Option<&PathRun>,
    identical: Option<bool>,
) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "target class: {} = {}\n",
        task.target_attribute, task.target_concept
    ));
    out.push_str(&format!("path: {}\n\n", task.path));
    if let Some(run) = classic {
        let title = format!(
            "classic path (relation threshold {}, attribute threshold {})",
            task.threshold.unwrap_or(0),
            task.attr_threshold.or(task.threshold).unwrap_or(0)
        );
        render_path_section(&mut out, &title, run, task, true);
    }
    if let Some(run) = star {
        let levels: Vec<String> = run
            .generalized
            .attrs()
            .iter()
            .map(|a| format!("{}={} ({})", a.source, a.level, a.display))
            .collect();
        let title = format!("star path (levels: {})", levels.join(", "));
        render_path_section(&mut out, &title, run, task, false);
    }
    if let Some(same) = identical {
        out.push_str("== path comparison ==\n");
        let (c, s) = (classic.unwrap(), star.unwrap());
        out.push_str(&format!(
            "outputs identical (before refinement): {} ({} vs {} rows)\n",
            if same { "yes" } else { "no" },
            c.generalized.relation().row_count(),
            s.generalized.relation().row_count()
        ));
    }
    out
}
