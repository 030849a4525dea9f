//! The correspondence between cotorsion pairs and subsets of a semibrick:
//! on T = mod kA3 with X = the simples, (Filt(S), S^⊥1) is a cotorsion pair
//! exactly when S contains the support set of the projectives.
//!
//! Run with: cargo run --example cotorsion_pairs

use extricat::catalog::build_catalog;
use extricat::exact::ExactBackend;
use extricat::quiver::Quiver;
use extricat::report::verify_cotorsion;

fn main() -> extricat::Result<()> {
    let spec = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/a3_left.json"
    ))?;
    let backend = ExactBackend::new(build_catalog(Quiver::from_json(&spec, None)?)?);
    let report = verify_cotorsion(&backend, 4)?;
    println!("S_P (projective support set) = {{{}}}", report.s_p.join(", "));
    println!("{} subset(s) give cotorsion pairs:", report.valid_subsets);
    for pair in &report.cotorsion_pairs {
        println!(
            "  S = {{{}}}: (Filt(S), S^perp1) = (add{{{}}}, add{{{}}})",
            pair.s.join(", "),
            pair.u_support.join(", "),
            pair.v_support.join(", ")
        );
    }
    println!(
        "approximation postconditions checked {} times, violations: {}",
        report.approximation_checks,
        report.violations.len()
    );
    Ok(())
}
