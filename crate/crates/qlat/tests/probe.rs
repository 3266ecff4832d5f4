// Temporary timing probe for the heavy operations.

use qlat::claims;
use qlat::Limits;
use std::time::Instant;

#[test]
#[ignore]
fn probe_claim_groups() {
    let lim = Limits::default();
    for prefix in [
        "l12.", "l16.disc", "l16.dual-min", "l16.root", "l16.indec", "m14.", "m20.invariants",
        "m20.min", "m20.dual", "m20.indec", "glue-isom.dplus8", "glue-isom.a01", "a8.",
        "cubic.e7-search", "anrep.oracle-n2", "anrep.oracle-n3", "anrep.oracle-n4",
        "frontier.", "classify.d4", "classify.d5", "classify.a3", "classify.a4", "classify.a2",
        "aki.e8-sum",
    ] {
        let start = Instant::now();
        let reports = claims::run_claims(Some(prefix), 1, &lim);
        let secs = start.elapsed().as_secs_f64();
        for r in &reports {
            println!("{:>9.2}s  {}  {}  {}", secs, r.id, r.outcome, r.measured);
        }
    }
}
