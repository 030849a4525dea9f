//! Filtration closures and minimal lengths: the closure of X = {S2, S3}
//! is add{S2, I2, S3}, and enlarging the generating set to Y = {S2, S3, I2}
//! drops the length of I2 from 2 to 1 — lengths are strictly subadditive
//! along the conflation S2 → I2 → S3.
//!
//! Run with: cargo run --example filtration_lengths

use extricat::catalog::{build_catalog, ObjClass};
use extricat::exact::ExactBackend;
use extricat::extri::{filt_closure, x_length};
use extricat::quiver::Quiver;

fn main() -> extricat::Result<()> {
    let spec = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/a3_left.json"
    ))?;
    let backend = ExactBackend::new(build_catalog(Quiver::from_json(&spec, None)?)?);
    let cat = backend.catalog.clone();
    let cls = |l: &str| -> ObjClass { ObjClass::module(cat.id_of_label(l).unwrap()) };

    let x = vec![cls("S2"), cls("S3")];
    let res = filt_closure(&backend, &x, 4)?;
    println!("Filt({{S2, S3}}):");
    for m in res.closure.members() {
        println!("  {:<4} length {}", cat.class_label(&m), res.lengths[&m]);
    }
    let i2 = cls("I2");
    println!(
        "  l(S2 ⊕ S3) = {}",
        x_length(&backend, &res, &x, &cls("S2").sum(&cls("S3")))?
    );

    let y = vec![cls("S2"), cls("S3"), cls("I2")];
    let res_y = filt_closure(&backend, &y, 4)?;
    println!("\nWith Y = {{S2, S3, I2}}:");
    println!("  l_Y(I2) = {}", res_y.lengths[&i2]);
    println!(
        "  the conflation S2 → I2 → S3 has 1 = l_Y(I2) < l_Y(S2) + l_Y(S3) = {}",
        res_y.lengths[&cls("S2")] + res_y.lengths[&cls("S3")]
    );
    Ok(())
}
