//! Level selection on the star path: roll up at the top levels, drill down
//! to a finer one, and print the equivalent SQL.
//!
//! ```bash
//! cargo run --example star_rollup
//! ```

use staraoi::report::generalized_table;
use staraoi::{
    build_dimension_table, drill_down, emit_sql, samples, star_generalize, Result, StarTask,
};

fn main() -> Result<()> {
    let (data, trees) = samples::graduate_instance()?;
    let dims: Vec<_> = trees.iter().map(build_dimension_table).collect();
    let task = StarTask::new("Category", "graduate", 1);

    println!("rolled up (every dimension at its highest level):");
    let top = star_generalize(&data, &dims, &task)?;
    print!("{}", generalized_table(&top));

    println!("\ndrill down: Birthplace from Country (level 2) to City (level 1):");
    let drilled = drill_down(&data, &dims, &task, "Birthplace", 1)?;
    print!("{}", generalized_table(&drilled));
    println!(
        "\nfiner levels mean more tuples: {} rows instead of {}",
        drilled.relation().row_count(),
        top.relation().row_count()
    );

    println!("\nthe equivalent SQL the engine evaluates natively:");
    print!("{}", emit_sql("student", &data, &dims, &task)?);
    Ok(())
}
