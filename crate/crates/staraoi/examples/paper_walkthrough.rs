//! The whole pipeline on the bundled student data: both induction paths,
//! their equality, and the characteristic rule.
//!
//! ```bash
//! cargo run --example paper_walkthrough
//! ```

use staraoi::report::generalized_table;
use staraoi::{
    build_dimension_table, classic_generalize, samples, star_generalize, to_rule, ClassicTask,
    Result, StarTask,
};

fn main() -> Result<()> {
    let (data, trees) = samples::graduate_instance()?;
    println!("fact relation: {} students\n", data.row_count());

    // Classic: threshold-controlled ascension.
    let classic_task = ClassicTask::new("Category", "graduate", 3);
    let classic = classic_generalize(&data, &trees, &classic_task)?;
    println!("classic path (generalization threshold 3):");
    print!("{}", generalized_table(&classic));
    println!("threshold satisfied: {}\n", classic.threshold_satisfied());

    // Star: dimension join + group-by, no thresholds.
    let dims: Vec<_> = trees.iter().map(build_dimension_table).collect();
    let star_task = StarTask::new("Category", "graduate", 1);
    let star = star_generalize(&data, &dims, &star_task)?;
    println!("star path (default: highest level per dimension):");
    print!("{}", generalized_table(&star));
    println!();

    println!(
        "paths agree row for row: {}\n",
        classic.same_result(&star)
    );

    let rule = to_rule(&star, "graduate", star.relation().total_votes())?;
    println!("characteristic rule:");
    print!("{}", rule.to_text());

    println!("\nhow the classic path got there:");
    for step in classic.provenance() {
        println!("  - {step}");
    }
    Ok(())
}
