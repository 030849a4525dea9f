//! Torsion pairs from a simple-minded system in the derived window: the
//! AR-quiver top row generates everything, and the subset
//! S = {P1, S1[-1], S2[-1], S3[-1]} yields the torsion pairs
//! (Filt(S), S^⊥) and (^⊥S, Filt(S)) on the inner window.
//!
//! Run with: cargo run --example torsion_pairs

use extricat::catalog::build_catalog;
use extricat::derived::DerivedBackend;
use extricat::exact::ExactBackend;
use extricat::quiver::Quiver;
use extricat::report::verify_example_59;

fn main() -> extricat::Result<()> {
    let spec = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/a3_right.json"
    ))?;
    let exact = ExactBackend::new(build_catalog(Quiver::from_json(&spec, None)?)?);
    let bk = DerivedBackend::new(exact, -3, 2)?;
    let report = verify_example_59(&bk)?;
    for check in &report.checks {
        println!(
            "[{}] {} {}",
            if check.pass { "ok" } else { "FAIL" },
            check.name,
            check.detail
        );
    }
    for s in &report.skipped_window {
        println!("skipped (window): {s}");
    }
    println!("{}", if report.pass { "PASS" } else { "FAIL" });
    Ok(())
}
