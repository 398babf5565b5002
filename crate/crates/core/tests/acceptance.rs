use rospace::verify::{run_criterion, DEFAULT_SEED};

#[test]
fn acceptance_criteria() {
    let mut failed = Vec::new();
    for id in 1..=9 {
        let r = run_criterion(id, DEFAULT_SEED);
        println!("{}", r.line());
        if !r.pass {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
