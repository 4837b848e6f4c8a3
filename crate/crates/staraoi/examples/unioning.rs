//! Shrinking a generalized relation by unioning along one attribute: the
//! information-preserving merge-set mode versus plain column dropping.
//!
//! ```bash
//! cargo run --example unioning
//! ```

use staraoi::report::generalized_table;
use staraoi::{
    build_dimension_table, samples, star_generalize, union_on, Result, StarTask, UnionMode,
};

fn main() -> Result<()> {
    let (data, trees) = samples::graduate_instance()?;
    let dims: Vec<_> = trees.iter().map(build_dimension_table).collect();
    let base = star_generalize(&data, &dims, &StarTask::new("Category", "graduate", 1))?;

    println!("base result:");
    print!("{}", generalized_table(&base));

    println!("\nunion on Major, merge-set mode (values collect into a set):");
    let merged = union_on(&base, "Major", UnionMode::MergeSet)?;
    print!("{}", generalized_table(&merged));

    println!("\nunion on Birthplace, drop mode:");
    let no_birth = union_on(&base, "Birthplace", UnionMode::Drop)?;
    print!("{}", generalized_table(&no_birth));

    println!("\nunion on GPA, drop mode:");
    let no_gpa = union_on(&base, "GPA", UnionMode::Drop)?;
    print!("{}", generalized_table(&no_gpa));

    println!(
        "\nnote the matching vote patterns above: in this data Canada and \
         Excellent always co-occur, so dropping either column loses the same \
         information"
    );
    Ok(())
}
