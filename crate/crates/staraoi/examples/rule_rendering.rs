//! Characteristic rules: the logical-formula rendering and the
//! machine-readable records form, including the degenerate all-ANY case.
//!
//! ```bash
//! cargo run --example rule_rendering
//! ```

use staraoi::{
    build_dimension_table, classic_generalize, samples, star_generalize, to_rule, union_on,
    ClassicTask, Result, StarTask, UnionMode,
};

fn main() -> Result<()> {
    let (data, trees) = samples::graduate_instance()?;
    let dims: Vec<_> = trees.iter().map(build_dimension_table).collect();

    let star = star_generalize(&data, &dims, &StarTask::new("Category", "graduate", 1))?;
    let total = star.relation().total_votes();

    println!("rule from the 3-tuple result:");
    let rule = to_rule(&star, "graduate", total)?;
    print!("{}", rule.to_text());

    println!("\nsame rule as delimited records (attribute=value..., vote, percent):");
    print!("{}", rule.to_records(b','));

    println!("\nafter a merge-set union on Major (sets become inner disjunctions):");
    let merged = union_on(&star, "Major", UnionMode::MergeSet)?;
    print!("{}", to_rule(&merged, "graduate", total)?.to_text());

    println!("\nthe threshold-1 classic result over-generalizes to ANY everywhere,");
    println!("and its rule degenerates accordingly:");
    let flat = classic_generalize(&data, &trees, &ClassicTask::new("Category", "graduate", 1))?;
    print!("{}", to_rule(&flat, "graduate", total)?.to_text());
    Ok(())
}
