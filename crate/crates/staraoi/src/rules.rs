//! Rule transformation: rendering a generalized relation as a quantitative
//! characteristic rule.
//!
//! Each row becomes one disjunct; each non-ANY cell becomes a conjunct.
//! Votes carry over and percentages are derived from the target-class size.
//! ANY-valued attributes are omitted from their disjunct — a row of nothing
//! but ANY renders as the degenerate `true` disjunct, which is exactly how
//! an over-generalized result gives itself away.

use std::collections::BTreeSet;
use std::fmt;

use crate::classic::GeneralizedRelation;
use crate::error::{Error, Result};
use crate::relation::{fmt_decimal, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum RuleValue {
    One(String),
    /// Rendered as an inner disjunction of equalities.
    Set(BTreeSet<String>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Conjunct {
    pub attribute: String,
    pub value: RuleValue,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Disjunct {
    pub conjuncts: Vec<Conjunct>,
    pub vote: u64,
    /// Exact percentage (100 * vote / total); rendering rounds half-up to
    /// one decimal place.
    pub percent: f64,
}

/// A disjunction of conjuncts describing one target class.
#[derive(Debug, Clone, PartialEq)]
pub struct CharacteristicRule {
    pub target: String,
    pub total_votes: u64,
    pub disjuncts: Vec<Disjunct>,
}

/// Transforms a merged, vote-carrying relation into a characteristic rule.
/// `total_votes` is the target-class tuple count the percentages are
/// measured against; it must cover the relation's votes.
pub fn to_rule(
    g: &GeneralizedRelation,
    target_name: &str,
    total_votes: u64,
) -> Result<CharacteristicRule> {
    if total_votes == 0 {
        return Err(Error::Config("total_votes must be positive".into()));
    }
    let sum: u64 = g.relation().total_votes();
    if total_votes < sum {
        return Err(Error::Config(format!(
            "total_votes {total_votes} is smaller than the relation's vote sum {sum}"
        )));
    }
    let mut disjuncts = Vec::with_capacity(g.relation().row_count());
    for (r, row) in g.relation().rows().iter().enumerate() {
        let vote = g.relation().vote(r);
        let mut conjuncts = Vec::new();
        for (a, v) in g.attrs().iter().zip(row) {
            let value = match v {
                Value::Any => continue,
                Value::Text(s) => RuleValue::One(s.clone()),
                Value::Number(n) => RuleValue::One(fmt_decimal(*n)),
                Value::Set(s) => RuleValue::Set(s.clone()),
            };
            conjuncts.push(Conjunct {
                attribute: a.display.clone(),
                value,
            });
        }
        disjuncts.push(Disjunct {
            conjuncts,
            vote,
            percent: 100.0 * vote as f64 / total_votes as f64,
        });
    }
    Ok(CharacteristicRule {
        target: target_name.to_string(),
        total_votes,
        disjuncts,
    })
}

/// Half-up rounding to one decimal place.
pub fn percent_1dp(x: f64) -> f64 {
    (x * 10.0 + 0.5).floor() / 10.0
}

fn fmt_percent(x: f64) -> String {
    format!("{:.1}", percent_1dp(x))
}

impl Disjunct {
    fn body_text(&self) -> String {
        if self.conjuncts.is_empty() {
            return "true".to_string();
        }
        let parts: Vec<String> = self
            .conjuncts
            .iter()
            .map(|c| match &c.value {
                RuleValue::One(v) => format!("{}={}", c.attribute, v),
                RuleValue::Set(set) => {
                    let eqs: Vec<String> =
                        set.iter().map(|v| format!("{}={}", c.attribute, v)).collect();
                    if eqs.len() == 1 {
                        eqs.into_iter().next().unwrap()
                    } else {
                        format!("({})", eqs.join(" \u{2228} "))
                    }
                }
            })
            .collect();
        format!("({})", parts.join(" \u{2227} "))
    }
}

impl CharacteristicRule {
    /// Human-readable logical formula using `∨`/`∧`.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}(x) \u{2192}\n", self.target);
        for (i, d) in self.disjuncts.iter().enumerate() {
            let prefix = if i == 0 { "    " } else { "  \u{2228} " };
            out.push_str(&format!(
                "{prefix}{} [{}, {}%]\n",
                d.body_text(),
                d.vote,
                fmt_percent(d.percent)
            ));
        }
        out
    }

    /// Machine-readable form: one disjunct per delimited line holding the
    /// `attribute=value` conjuncts, the vote, and the percentage. Set values
    /// use `OR` between equalities.
    pub fn to_records(&self, delimiter: u8) -> String {
        let mut wtr = csv::WriterBuilder::new()
            .delimiter(delimiter)
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        for d in &self.disjuncts {
            let mut fields: Vec<String> = Vec::new();
            if d.conjuncts.is_empty() {
                fields.push("true".to_string());
            }
            for c in &d.conjuncts {
                match &c.value {
                    RuleValue::One(v) => fields.push(format!("{}={}", c.attribute, v)),
                    RuleValue::Set(set) => fields.push(
                        set.iter()
                            .map(|v| format!("{}={}", c.attribute, v))
                            .collect::<Vec<_>>()
                            .join(" OR "),
                    ),
                }
            }
            fields.push(d.vote.to_string());
            fields.push(fmt_percent(d.percent));
            wtr.write_record(&fields).expect("writing to memory");
        }
        String::from_utf8(wtr.into_inner().expect("writing to memory")).expect("utf-8")
    }
}

impl fmt::Display for CharacteristicRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classic::{classic_generalize, union_on, ClassicTask, UnionMode};
    use crate::samples;

    fn three_row_rule() -> CharacteristicRule {
        let data = samples::graduate_students();
        let trees = samples::graduate_trees();
        let g = classic_generalize(&data, &trees, &ClassicTask::new("Category", "graduate", 3))
            .unwrap();
        to_rule(&g, "graduate", 6).unwrap()
    }

    #[test]
    fn three_row_result_renders_three_weighted_disjuncts() {
        let rule = three_row_rule();
        assert_eq!(rule.disjuncts.len(), 3);
        let votes: Vec<u64> = rule.disjuncts.iter().map(|d| d.vote).collect();
        assert_eq!(votes, vec![3, 2, 1]);
        let rendered = rule.to_text();
        assert!(rendered.starts_with("graduate(x) \u{2192}\n"));
        assert!(rendered
            .contains("(StudyProg=Science \u{2227} Country=Foreign \u{2227} GPA=Good) [3, 50.0%]"));
        assert!(rendered.contains(
            "(StudyProg=Science \u{2227} Country=Canada \u{2227} GPA=Excellent) [2, 33.3%]"
        ));
        assert!(rendered
            .contains("(StudyProg=Art \u{2227} Country=Canada \u{2227} GPA=Excellent) [1, 16.7%]"));
    }

    #[test]
    fn percents_recompute_from_votes_within_tolerance() {
        let rule = three_row_rule();
        for d in &rule.disjuncts {
            let expect = 100.0 * d.vote as f64 / rule.total_votes as f64;
            assert!((d.percent - expect).abs() < 0.05);
        }
        let sum: f64 = rule.disjuncts.iter().map(|d| d.percent).sum();
        assert!((sum - 100.0).abs() < 0.05);
    }

    #[test]
    fn single_row_relation_renders_one_full_disjunct() {
        let data = samples::graduate_students();
        let trees = samples::graduate_trees();
        let g = classic_generalize(&data, &trees, &ClassicTask::new("Category", "graduate", 3))
            .unwrap();
        let u = union_on(&g, "Major", UnionMode::Drop).unwrap();
        let u = union_on(&u, "GPA", UnionMode::Drop).unwrap();
        let u = union_on(&u, "Birthplace", UnionMode::Drop).unwrap();
        let rule = to_rule(&u, "graduate", 6).unwrap();
        assert_eq!(rule.disjuncts.len(), 1);
        assert_eq!(rule.disjuncts[0].vote, 6);
        assert!(rule.to_text().contains("true [6, 100.0%]"));
    }

    #[test]
    fn all_any_row_renders_as_the_degenerate_true_rule() {
        let data = samples::graduate_students();
        let trees = samples::graduate_trees();
        let g = classic_generalize(&data, &trees, &ClassicTask::new("Category", "graduate", 1))
            .unwrap();
        let rule = to_rule(&g, "graduate", 6).unwrap();
        assert_eq!(rule.disjuncts.len(), 1);
        assert!(rule.disjuncts[0].conjuncts.is_empty());
        assert_eq!(rule.disjuncts[0].vote, 6);
        assert!((rule.disjuncts[0].percent - 100.0).abs() < 0.05);
        assert!(rule.to_text().contains("true [6, 100.0%]"));
    }

    #[test]
    fn value_sets_render_as_inner_disjunctions() {
        let data = samples::graduate_students();
        let trees = samples::graduate_trees();
        let g = classic_generalize(&data, &trees, &ClassicTask::new("Category", "graduate", 3))
            .unwrap();
        let u = union_on(&g, "Major", UnionMode::MergeSet).unwrap();
        let rule = to_rule(&u, "graduate", 6).unwrap();
        let rendered = rule.to_text();
        assert!(rendered.contains("(StudyProg=Art \u{2228} StudyProg=Science)"));
        let records = rule.to_records(b',');
        assert!(records.contains("StudyProg=Art OR StudyProg=Science"));
    }

    #[test]
    fn vote_multiset_round_trips_from_the_relation() {
        let rule = three_row_rule();
        let data = samples::graduate_students();
        let trees = samples::graduate_trees();
        let g = classic_generalize(&data, &trees, &ClassicTask::new("Category", "graduate", 3))
            .unwrap();
        let mut rule_votes: Vec<u64> = rule.disjuncts.iter().map(|d| d.vote).collect();
        let mut rel_votes: Vec<u64> = g.relation().votes().unwrap().to_vec();
        rule_votes.sort_unstable();
        rel_votes.sort_unstable();
        assert_eq!(rule_votes, rel_votes);
        for (d, row) in rule.disjuncts.iter().zip(g.relation().rows()) {
            let non_any = row.iter().filter(|v| !v.is_any()).count();
            assert_eq!(d.conjuncts.len(), non_any);
        }
    }

    #[test]
    fn records_format_is_one_line_per_disjunct() {
        let rule = three_row_rule();
        let records = rule.to_records(b',');
        let lines: Vec<&str> = records.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(
            lines[0],
            "StudyProg=Science,Country=Foreign,GPA=Good,3,50.0"
        );
    }

    #[test]
    fn total_votes_below_the_vote_sum_is_rejected() {
        let data = samples::graduate_students();
        let trees = samples::graduate_trees();
        let g = classic_generalize(&data, &trees, &ClassicTask::new("Category", "graduate", 3))
            .unwrap();
        assert!(to_rule(&g, "graduate", 5).is_err());
        assert!(to_rule(&g, "graduate", 0).is_err());
    }

    #[test]
    fn half_up_rounding_at_the_boundary() {
        // 12.25 is exactly representable, so the .05 boundary rounds up
        assert_eq!(fmt_percent(12.25), "12.3");
        assert_eq!(fmt_percent(16.64), "16.6");
        assert_eq!(fmt_percent(33.333333), "33.3");
        assert_eq!(fmt_percent(100.0), "100.0");
    }
}
