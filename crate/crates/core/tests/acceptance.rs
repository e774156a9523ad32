use std::time::{Duration, Instant};

use weilbench::verify::{criterion, NAMES};

fn budget(id: u8) -> Option<Duration> {
    match id {
        1 => Some(Duration::from_secs(60)),
        5 => Some(Duration::from_secs(30)),
        _ => None,
    }
}

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for id in 1..=NAMES.len() as u8 {
        let start = Instant::now();
        let c = criterion(id).expect("criterion exists");
        let elapsed = start.elapsed();
        let in_budget = budget(id).map_or(true, |b| elapsed < b);
        let ok = c.passed && in_budget;
        println!(
            "criterion {id:>2} {:<38} {} ({}, {:.2}s)",
            c.name,
            if ok { "PASS" } else { "FAIL" },
            c.summary,
            elapsed.as_secs_f64()
        );
        for f in &c.failures {
            println!("    {f}");
        }
        if !in_budget {
            println!("    over budget {:?}", budget(id).unwrap());
        }
        if !ok {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
