//! Materialize concept trees as star-schema dimension tables.
//!
//! ```bash
//! cargo run --example dimension_tables
//! ```

use staraoi::{build_dimension_table, samples, Result};

fn main() -> Result<()> {
    let trees = samples::graduate_trees();

    for tree in &trees {
        let dim = build_dimension_table(tree);
        println!(
            "dimension for {} ({} rows x {} columns):",
            dim.attribute(),
            dim.row_count(),
            dim.columns().len()
        );
        print!("{}", dim.to_delimited_string(b',')?);
        println!();
    }

    // The numeric tree is the interesting one: a range covering hundreds of
    // raw values still costs a single row, so GPA needs 4 rows, not 400.
    let gpa = trees.iter().find(|t| t.attribute() == "GPA").unwrap();
    let dim = build_dimension_table(gpa);
    println!(
        "numeric compression: GPA covers [{}, {}] with {} rows",
        dim.rows()[0][0],
        dim.rows()[dim.row_count() - 1][1],
        dim.row_count()
    );
    Ok(())
}
