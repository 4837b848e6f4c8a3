//! Acceptance suite: one test per release criterion, each printing a PASS
//! line (visible with `cargo test --test acceptance -- --nocapture`).

mod common;

use std::time::Instant;

use common::{data_dir, golden_dir, paper_instance, rows_and_votes};
use staraoi::bench::{run_bench, BenchReport};
use staraoi::task::{parse_task_file, run_task, Overrides, PathChoice};
use staraoi::{
    build_dimension_table, classic_generalize, find_dimension, further_generalize,
    generate_instance, star_generalize, to_rule, union_on, BenchConfig, ClassicTask,
    DimensionTable, StarTask, UnionMode, Value,
};

fn text_row(vals: &[&str]) -> Vec<Value> {
    vals.iter().map(|v| Value::text(*v)).collect()
}

fn paper_dims() -> Vec<DimensionTable> {
    paper_instance()
        .1
        .iter()
        .map(build_dimension_table)
        .collect()
}

fn graduate_star() -> StarTask {
    StarTask::new("Category", "graduate", 1)
}

fn graduate_classic(threshold: usize) -> ClassicTask {
    ClassicTask::new("Category", "graduate", threshold)
}

#[test]
fn criterion_01_dimension_table_goldens() {
    let started = Instant::now();
    let dims = paper_dims();
    let by_name = |name: &str| find_dimension(&dims, name).unwrap();

    assert_eq!(by_name("Major").row_count(), 10);
    assert_eq!(by_name("Category").row_count(), 7);
    assert_eq!(by_name("Birthplace").row_count(), 11);
    assert_eq!(by_name("GPA").row_count(), 4);

    assert!(by_name("Major")
        .rows()
        .contains(&text_row(&["Computing", "Science"])));
    assert!(by_name("Category")
        .rows()
        .contains(&text_row(&["Freshman", "undergraduate"])));
    assert!(by_name("Birthplace")
        .rows()
        .contains(&text_row(&["Bombay", "India", "Foreign"])));
    assert!(by_name("GPA").rows().contains(&vec![
        Value::number(3.5),
        Value::number(4.0),
        Value::text("Excellent")
    ]));

    for dim in &dims {
        let golden_path = golden_dir().join(format!(
            "hierarchy_{}.csv",
            dim.attribute().to_lowercase()
        ));
        let golden = std::fs::read_to_string(&golden_path).unwrap();
        let exported = dim.to_delimited_string(b',').unwrap();
        assert_eq!(
            exported,
            golden,
            "export of {} differs from {}",
            dim.attribute(),
            golden_path.display()
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("criterion 01: PASS — dimension tables match the goldens bit for bit ({elapsed:?})");
}

#[test]
fn criterion_02_star_result_on_the_reference_instance() {
    let (fact, _) = paper_instance();
    let g = star_generalize(&fact, &paper_dims(), &graduate_star()).unwrap();
    assert_eq!(
        rows_and_votes(&g),
        vec![
            (text_row(&["Science", "Foreign", "Good"]), 3),
            (text_row(&["Science", "Canada", "Excellent"]), 2),
            (text_row(&["Art", "Canada", "Excellent"]), 1),
        ]
    );
    assert_eq!(g.relation().total_votes(), 6);
    println!("criterion 02: PASS — star path yields the exact 3-tuple result with votes 3/2/1");
}

#[test]
fn criterion_03_path_equivalence_at_threshold_three() {
    let (fact, trees) = paper_instance();
    let star = star_generalize(&fact, &paper_dims(), &graduate_star()).unwrap();
    let classic = classic_generalize(&fact, &trees, &graduate_classic(3)).unwrap();
    assert!(classic.same_result(&star));
    assert_eq!(rows_and_votes(&classic), rows_and_votes(&star));
    println!("criterion 03: PASS — classic(threshold 3) equals star row for row, votes included");
}

#[test]
fn criterion_04_threshold_sweep_qualitative_checks() {
    let (fact, trees) = paper_instance();

    // threshold 1: a single all-ANY row, and the report flags it
    let g1 = classic_generalize(&fact, &trees, &graduate_classic(1)).unwrap();
    assert_eq!(g1.relation().row_count(), 1);
    assert!(g1.relation().rows()[0].iter().all(Value::is_any));
    assert!(g1.contains_any());

    let task_path = data_dir().join("paper.task");
    let mut t1 = parse_task_file(&task_path).unwrap();
    t1.apply(&Overrides {
        threshold: Some(1),
        path: Some(PathChoice::Classic),
        ..Overrides::default()
    });
    let report1 = run_task(&t1).unwrap().report;
    assert!(report1.contains("contains ANY"));

    // threshold 6: six rows, zero ascension steps, flagged as no generalization
    let g6 = classic_generalize(&fact, &trees, &graduate_classic(6)).unwrap();
    assert_eq!(g6.relation().row_count(), 6);
    assert_eq!(g6.ascension_count(), 0);
    let mut t6 = parse_task_file(&task_path).unwrap();
    t6.apply(&Overrides {
        threshold: Some(6),
        path: Some(PathChoice::Classic),
        ..Overrides::default()
    });
    let report6 = run_task(&t6).unwrap().report;
    assert!(report6.contains("no generalization"));

    // thresholds 2 and 4, scripted further generalization on the major
    // attribute: at least one ANY cell appears
    for t in [2usize, 4] {
        let g = classic_generalize(&fact, &trees, &graduate_classic(t)).unwrap();
        assert!(!g.threshold_satisfied(), "threshold {t} needs further work");
        let f = further_generalize(&g, "Major", &trees).unwrap();
        assert!(f.contains_any(), "threshold {t} + further(Major)");
        assert!(f.relation().rows().iter().any(|r| r.iter().any(Value::is_any)));
    }

    // thresholds 3 and 5: no ANY anywhere
    for t in [3usize, 5] {
        let g = classic_generalize(&fact, &trees, &graduate_classic(t)).unwrap();
        assert!(!g.contains_any(), "threshold {t}");
    }
    println!("criterion 04: PASS — threshold sweep shows the expected ANY/no-generalization flags");
}

#[test]
fn criterion_05_no_any_guarantee_for_star() {
    let (fact, _) = paper_instance();
    let g = star_generalize(&fact, &paper_dims(), &graduate_star()).unwrap();
    assert!(!g.contains_any());

    let fanouts: [&[usize]; 5] = [&[2, 4], &[2, 5], &[3, 3], &[2, 2, 2], &[2, 3, 2]];
    for seed in 0..120u64 {
        let fanout = fanouts[(seed % 5) as usize];
        let rows = 100 + (seed as usize % 7) * 150;
        let (fact, trees) = generate_instance(fanout, 1 + (seed as usize % 3), rows, seed).unwrap();
        let dims: Vec<DimensionTable> = trees.iter().map(build_dimension_table).collect();
        let task = StarTask::new(staraoi::synth::CLASS_ATTRIBUTE, staraoi::synth::CLASS_TARGET, 1);
        let g = star_generalize(&fact, &dims, &task).unwrap();
        assert!(!g.contains_any(), "seed {seed}");
        assert!(g
            .relation()
            .rows()
            .iter()
            .all(|row| row.iter().all(|v| !v.is_any())));
    }
    println!("criterion 05: PASS — zero ANY cells across the reference instance and 120 seeded instances");
}

#[test]
fn criterion_06_vote_conservation_everywhere() {
    let (fact, trees) = paper_instance();
    let dims = paper_dims();

    // classic, all thresholds, with further and both union modes
    for t in 1..=6 {
        let g = classic_generalize(&fact, &trees, &graduate_classic(t)).unwrap();
        assert_eq!(g.relation().total_votes(), 6, "classic t={t}");
        for attr in ["Major", "Birthplace", "GPA"] {
            if let Ok(f) = further_generalize(&g, attr, &trees) {
                assert_eq!(f.relation().total_votes(), 6, "further {attr} t={t}");
            }
            for mode in [UnionMode::Drop, UnionMode::MergeSet] {
                if let Ok(u) = union_on(&g, attr, mode) {
                    assert_eq!(u.relation().total_votes(), 6, "union {attr} {mode} t={t}");
                }
            }
        }
    }
    // star, default and drilled levels, with unions
    let g = star_generalize(&fact, &dims, &graduate_star()).unwrap();
    assert_eq!(g.relation().total_votes(), 6);
    let drilled = staraoi::drill_down(&fact, &dims, &graduate_star(), "Birthplace", 1).unwrap();
    assert_eq!(drilled.relation().total_votes(), 6);
    for attr in ["Major", "Birthplace", "GPA"] {
        for mode in [UnionMode::Drop, UnionMode::MergeSet] {
            let u = union_on(&g, attr, mode).unwrap();
            assert_eq!(u.relation().total_votes(), 6);
        }
    }

    // synthetic instances: total votes equal the target-class row count
    for seed in 200..225u64 {
        let (fact, trees) = generate_instance(&[2, 4], 3, 400, seed).unwrap();
        let dims: Vec<DimensionTable> = trees.iter().map(build_dimension_table).collect();
        let class_col = fact.schema().index_of("class").unwrap();
        let class_tree = staraoi::find_tree(&trees, "class").unwrap();
        let expected: u64 = fact
            .rows()
            .iter()
            .filter(|r| class_tree.generalizes_to(&r[class_col], "class_g0").unwrap())
            .count() as u64;
        let ctask = ClassicTask::new("class", "class_g0", 400).with_attribute_threshold(2);
        let cg = classic_generalize(&fact, &trees, &ctask).unwrap();
        assert_eq!(cg.relation().total_votes(), expected, "seed {seed}");
        let sg = star_generalize(
            &fact,
            &dims,
            &StarTask::new("class", "class_g0", 1),
        )
        .unwrap();
        assert_eq!(sg.relation().total_votes(), expected, "seed {seed}");
        let f = further_generalize(&cg, "d0", &trees).unwrap();
        assert_eq!(f.relation().total_votes(), expected, "seed {seed}");
        let u = union_on(&sg, "d1", UnionMode::MergeSet).unwrap();
        assert_eq!(u.relation().total_votes(), expected, "seed {seed}");
    }
    println!("criterion 06: PASS — votes are conserved across generalize, further, and both union modes");
}

#[test]
fn criterion_07_unioning_results() {
    let (fact, _) = paper_instance();
    let g = star_generalize(&fact, &paper_dims(), &graduate_star()).unwrap();

    let merged = union_on(&g, "Major", UnionMode::MergeSet).unwrap();
    assert_eq!(merged.relation().row_count(), 2);
    let mut votes: Vec<u64> = merged.relation().votes().unwrap().to_vec();
    votes.sort_unstable();
    assert_eq!(votes, vec![3, 3]);
    let set = |vals: &[&str]| Value::Set(vals.iter().map(|s| s.to_string()).collect());
    assert_eq!(
        merged.relation().rows(),
        &[
            vec![set(&["Art", "Science"]), Value::text("Canada"), Value::text("Excellent")],
            vec![set(&["Science"]), Value::text("Foreign"), Value::text("Good")],
        ]
    );

    let drop_birth = union_on(&g, "Birthplace", UnionMode::Drop).unwrap();
    let drop_gpa = union_on(&g, "GPA", UnionMode::Drop).unwrap();
    assert_eq!(drop_birth.relation().row_count(), 3);
    assert_eq!(drop_gpa.relation().row_count(), 3);
    let multiset = |g: &staraoi::GeneralizedRelation| {
        let mut v: Vec<u64> = g.relation().votes().unwrap().to_vec();
        v.sort_unstable();
        v
    };
    assert_eq!(multiset(&drop_birth), vec![1, 2, 3]);
    assert_eq!(multiset(&drop_gpa), vec![1, 2, 3]);
    println!("criterion 07: PASS — merge-set union gives 2 rows with votes {{3,3}}; drop unions agree on votes {{1,2,3}}");
}

#[test]
fn criterion_08_randomized_cross_path_equivalence() {
    let started = Instant::now();
    let fanouts: [&[usize]; 5] = [&[2, 4], &[2, 5], &[3, 3], &[2, 2, 2], &[2, 3, 2]];
    let mut checked = 0usize;
    for seed in 0..110u64 {
        let fanout = fanouts[(seed % 5) as usize];
        let rows = match seed % 10 {
            0 => 10_000,
            k => 300 + (k as usize) * 350,
        };
        let dims_count = 3;
        let (fact, trees) = generate_instance(fanout, dims_count, rows, 1000 + seed).unwrap();
        let dims: Vec<DimensionTable> = trees.iter().map(build_dimension_table).collect();

        // classic thresholds pinned to the trees' top-level concept counts
        let top_count = fanout[0];
        let ctask = ClassicTask::new("class", "class_g0", rows)
            .with_attribute_threshold(top_count);
        let classic = classic_generalize(&fact, &trees, &ctask).unwrap();
        let star = star_generalize(&fact, &dims, &StarTask::new("class", "class_g0", 1)).unwrap();
        assert!(
            classic.same_result(&star),
            "seed {seed}: classic {:?} vs star {:?}",
            rows_and_votes(&classic),
            rows_and_votes(&star)
        );
        assert!(!classic.contains_any(), "seed {seed}");
        checked += 1;
    }
    let elapsed = started.elapsed();
    assert!(checked >= 100);
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!(
        "criterion 08: PASS — classic(top-level thresholds) equals star on {checked} instances in {elapsed:?}"
    );
}

#[test]
fn criterion_09_performance_reporting() {
    let cfg = BenchConfig {
        row_counts: vec![10_000],
        depth: 2,
        fanout: vec![2, 4],
        dimensions: 8,
        repetitions: 3,
        seed: 42,
    };
    let BenchReport {
        reference,
        sweep,
        text,
    } = run_bench(&cfg).unwrap();

    assert_eq!(reference.rows, 6);
    assert!(reference.identical);
    assert!(reference.classic_ms > 0.0 && reference.star_ms > 0.0);
    assert!(text.contains("around 60 milliseconds"));

    let dims_swept: Vec<usize> = sweep.iter().map(|t| t.dimensions).collect();
    assert_eq!(dims_swept, vec![2, 4, 8]);
    for t in &sweep {
        assert_eq!(t.rows, 10_000);
        assert!(t.identical);
        assert!(t.classic_ms > 0.0 && t.star_ms > 0.0);
    }
    println!(
        "criterion 09: PASS — bench reports both paths; star join cost across 2/4/8 dims: {:.3}/{:.3}/{:.3} ms (classic {:.3}/{:.3}/{:.3} ms); absolute numbers are hardware-specific",
        sweep[0].star_ms,
        sweep[1].star_ms,
        sweep[2].star_ms,
        sweep[0].classic_ms,
        sweep[1].classic_ms,
        sweep[2].classic_ms,
    );
}

#[test]
fn criterion_10_rule_transformation() {
    let (fact, trees) = paper_instance();
    let g = star_generalize(&fact, &paper_dims(), &graduate_star()).unwrap();
    let rule = to_rule(&g, "graduate", 6).unwrap();
    assert_eq!(rule.disjuncts.len(), 3);
    let votes: Vec<u64> = rule.disjuncts.iter().map(|d| d.vote).collect();
    assert_eq!(votes, vec![3, 2, 1]);
    for (d, expect) in rule.disjuncts.iter().zip([50.0, 100.0 / 3.0, 100.0 / 6.0]) {
        assert!((d.percent - expect).abs() < 0.05, "{} vs {expect}", d.percent);
    }
    let rendered = rule.to_text();
    assert!(rendered.contains("[3, 50.0%]"));
    assert!(rendered.contains("[2, 33.3%]"));
    assert!(rendered.contains("[1, 16.7%]"));

    let g1 = classic_generalize(&fact, &trees, &graduate_classic(1)).unwrap();
    let degenerate = to_rule(&g1, "graduate", 6).unwrap();
    assert_eq!(degenerate.disjuncts.len(), 1);
    assert!(degenerate.disjuncts[0].conjuncts.is_empty());
    assert_eq!(degenerate.disjuncts[0].vote, 6);
    assert!((degenerate.disjuncts[0].percent - 100.0).abs() < 0.05);
    assert!(degenerate.to_text().contains("true [6, 100.0%]"));
    println!("criterion 10: PASS — 3-disjunct rule at 50.0/33.3/16.7 and the degenerate true-rule render correctly");
}

#[test]
fn criterion_05_extra_union_outputs_stay_any_free() {
    // unioning star output cannot reintroduce ANY
    let (fact, _) = paper_instance();
    let g = star_generalize(&fact, &paper_dims(), &graduate_star()).unwrap();
    for attr in ["Major", "Birthplace", "GPA"] {
        for mode in [UnionMode::Drop, UnionMode::MergeSet] {
            let u = union_on(&g, attr, mode).unwrap();
            assert!(!u.contains_any());
        }
    }
}
