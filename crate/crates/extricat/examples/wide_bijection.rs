//! Exhaustively verify the bijection between simple semibricks and length
//! wide subcategories on the A2 and A3 module categories: the classes are
//! equinumerous, and Filt and sim compose to the identity both ways.
//!
//! Run with: cargo run --example wide_bijection

use extricat::catalog::build_catalog;
use extricat::exact::ExactBackend;
use extricat::extri::verify_main_bijection;
use extricat::quiver::Quiver;

fn main() -> extricat::Result<()> {
    for fixture in ["a2.json", "a3_left.json"] {
        let spec = std::fs::read_to_string(format!(
            "{}/fixtures/{fixture}",
            env!("CARGO_MANIFEST_DIR")
        ))?;
        let backend = ExactBackend::new(build_catalog(Quiver::from_json(&spec, None)?)?);
        let outcome = verify_main_bijection(&backend, 4)?;
        println!(
            "{fixture}: {} simple semibricks ↔ {} length wide subcategories, bijection {}",
            outcome.simple_semibricks.len(),
            outcome.length_wide.len(),
            if outcome.ok() { "holds" } else { "FAILS" }
        );
        for x in &outcome.simple_semibricks {
            let labels: Vec<String> = x
                .iter()
                .map(|m| backend.catalog.class_label(m))
                .collect();
            println!("  {{{}}}", labels.join(", "));
        }
    }
    Ok(())
}
