use std::process::ExitCode;
use std::time::Instant;

use preproj::selftest::{
    adjunction, braid_relations, coxeter_calculus, dimension_law, equivalence_roundtrip, ext_quiver_structure,
    relation_soundness, rigid_simple_construction, serre_oracle, sigma_stabilization, two_cy_shadow, Check, Workbench,
};

type Criterion = fn(&Workbench) -> Check;

fn main() -> ExitCode {
    let wb = Workbench::builtin();
    let criteria: [(&str, Criterion); 11] = [
        ("relation soundness", relation_soundness),
        ("2-CY shadow", two_cy_shadow),
        ("reflection dimension law", dimension_law),
        ("adjunction", adjunction),
        ("equivalence round-trip", equivalence_roundtrip),
        ("braid relations", braid_relations),
        ("sigma stabilization", sigma_stabilization),
        ("ext-quiver structure", ext_quiver_structure),
        ("serre oracle equivalence", serre_oracle),
        ("coxeter calculus", coxeter_calculus),
        ("rigid simple construction", rigid_simple_construction),
    ];
    let mut failed = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let check = run(&wb);
        let status = if check.passed { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {name}: {status} ({} instances, {:.1}s)",
            k + 1,
            check.instances,
            start.elapsed().as_secs_f64()
        );
        for f in check.failures.iter().take(5) {
            println!("    {f}");
        }
        if !check.passed {
            failed.push(k + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria pass", criteria.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
