//! Approximation triangles: for M in T = Filt(X) and a subset S of the
//! semibrick X there is a conflation N → M → P with N ∈ Filt(S) and
//! P ∈ S^⊥, and dually. The witnesses are explicit short exact sequences
//! and the right-approximation factorization property is checked.
//!
//! Run with: cargo run --example approximation_triangles

use extricat::catalog::{build_catalog, ObjClass};
use extricat::cotorsion::{approx_left, approx_right, is_right_approximation};
use extricat::exact::ExactBackend;
use extricat::extri::filt_closure;
use extricat::quiver::Quiver;

fn main() -> extricat::Result<()> {
    let spec = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/a3_left.json"
    ))?;
    let backend = ExactBackend::new(build_catalog(Quiver::from_json(&spec, None)?)?);
    let cat = backend.catalog.clone();
    let cls = |l: &str| -> ObjClass { ObjClass::module(cat.id_of_label(l).unwrap()) };

    let i2 = cls("I2");
    for s in [vec![cls("S2"), cls("S3")], vec![cls("S2")], vec![cls("S3")]] {
        let names: Vec<String> = s.iter().map(|m| cat.class_label(m)).collect();
        let filt = filt_closure(&backend, &s, 4)?;
        let right = approx_right(&backend, &i2, &s, &filt)?;
        let factorizes =
            is_right_approximation(&backend, &right.witness.as_ref().unwrap().x, &filt.closure)?;
        println!(
            "S = {{{}}}: right triangle {} → I2 → {} (factorization {})",
            names.join(", "),
            cat.class_label(&right.a),
            cat.class_label(&right.c),
            if factorizes { "ok" } else { "FAILS" },
        );
        let left = approx_left(&backend, &i2, &s, &filt)?;
        println!(
            "              left triangle {} → I2 → {}",
            cat.class_label(&left.a),
            cat.class_label(&left.c),
        );
    }
    Ok(())
}
