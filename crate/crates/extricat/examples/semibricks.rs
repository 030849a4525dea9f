//! Enumerate every semibrick of a module category and flag the simple ones
//! (those contained in the simple objects of their own filtration closure).
//!
//! Run with: cargo run --example semibricks

use extricat::catalog::build_catalog;
use extricat::exact::ExactBackend;
use extricat::quiver::Quiver;
use extricat::report::cmd_semibricks;

fn main() -> extricat::Result<()> {
    let spec = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/a3_left.json"
    ))?;
    let backend = ExactBackend::new(build_catalog(Quiver::from_json(&spec, None)?)?);
    let report = cmd_semibricks(&backend, 4)?;
    println!(
        "{} semibricks, {} of them simple:",
        report.count, report.simple_count
    );
    for row in &report.semibricks {
        println!(
            "  {{{}}}{}",
            row.members.join(", "),
            if row.simple { "  (simple)" } else { "" }
        );
    }
    Ok(())
}
