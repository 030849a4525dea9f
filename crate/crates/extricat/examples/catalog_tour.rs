//! Build the indecomposable catalog of a representation-finite quiver and
//! inspect its Hom/Ext tables.
//!
//! Run with: cargo run --example catalog_tour

use extricat::catalog::build_catalog;
use extricat::quiver::Quiver;

fn main() -> extricat::Result<()> {
    let spec = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/a3_left.json"
    ))?;
    let quiver = Quiver::from_json(&spec, None)?;
    println!(
        "quiver: vertices {:?}, arrows {:?}",
        quiver.vertices,
        quiver
            .arrows
            .iter()
            .map(|a| format!(
                "{}: {} -> {}",
                a.name, quiver.vertices[a.source], quiver.vertices[a.target]
            ))
            .collect::<Vec<_>>()
    );
    let cat = build_catalog(quiver)?;
    println!("{} indecomposables over GF({}):", cat.len(), cat.quiver.p);
    for (i, label) in cat.labels.iter().enumerate() {
        println!("  {label:<4} dimension vector {:?}", cat.dim_vector(i));
    }
    println!("\nhom dimensions (row = source):");
    for (i, row) in cat.hom.iter().enumerate() {
        println!("  {:<4} {:?}", cat.labels[i], row);
    }
    println!("\next dimensions (row = first argument):");
    for (i, row) in cat.ext.iter().enumerate() {
        println!("  {:<4} {:?}", cat.labels[i], row);
    }
    Ok(())
}
