//! The derived shift window: formal objects, Hom spaces in two degrees,
//! mapping cones, and agreement with the module backend on shift 0.
//!
//! Run with: cargo run --example derived_window

use extricat::catalog::{build_catalog, ObjClass};
use extricat::derived::{DMor, DerivedBackend};
use extricat::exact::ExactBackend;
use extricat::quiver::Quiver;

fn main() -> extricat::Result<()> {
    let spec = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/fixtures/a3_right.json"
    ))?;
    let exact = ExactBackend::new(build_catalog(Quiver::from_json(&spec, None)?)?);
    let bk = DerivedBackend::new(exact, -3, 2)?;
    let cat = bk.exact.catalog.clone();
    let cls = |l: &str| -> ObjClass { ObjClass::from_parts(vec![cat.parse_part(l).unwrap()]) };

    // Hom in two degrees
    let s1 = cls("S1");
    let s2 = cls("S2");
    println!("hom(S1, S2)      = {}", bk.hom_d_dim(&s1, &s2)?);
    println!("hom(S1, S2[1])   = {} (this is Ext¹(S1, S2))", bk.hom_d_dim(&s1, &s2.shifted(1))?);
    println!("hom(S1, S2[2])   = {}", bk.hom_d_dim(&s1, &s2.shifted(2))?);

    // realize the nonsplit class of E(S1, S2): the middle is I2
    let conf = bk.realize_d(&s1, &s2, &[1])?;
    println!(
        "\ntriangle {} → {} → {} realizes the nonsplit class",
        cat.class_label(&conf.a),
        cat.class_label(&conf.b),
        cat.class_label(&conf.c)
    );

    // cones of module morphisms: ker[1] ⊕ coker
    let p2 = cls("P2");
    let f = DMor {
        source: cls("S3"),
        target: p2.clone(),
        coords: vec![1],
    };
    let (cone, _, _) = bk.cone(&f)?;
    println!("cone(S3 ↪ P2) = {}", cat.class_label(&cone));
    let g = DMor {
        source: p2,
        target: s2.clone(),
        coords: vec![1],
    };
    let (cone2, _, _) = bk.cone(&g)?;
    println!("cone(P2 ↠ S2) = {}", cat.class_label(&cone2));

    // shift-0 agreement with the exact backend
    let mut agreements = 0;
    for c in 0..cat.len() {
        for a in 0..cat.len() {
            let cc = ObjClass::module(c);
            let aa = ObjClass::module(a);
            if bk.e_space_d(&cc, &aa)?.dim() == cat.ext[c][a] {
                agreements += 1;
            }
        }
    }
    println!("\nE-dimension agreement with the module backend: {agreements}/36 pairs");
    Ok(())
}
