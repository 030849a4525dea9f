//! The exact (hence extriangulated) structure on mod kQ.
//!
//! For a hereditary path algebra every module has a two-term projective
//! resolution 0 → P1 → P0 → M → 0, so E(C, A) := Ext¹(C, A) is the cokernel
//! of Hom(P0, A) → Hom(P1, A). An extension class is stored as a coordinate
//! vector in a fixed complement basis of that cokernel together with its
//! cocycle representative P1 → A; realization builds the middle term as the
//! pushout of P1 → P0 along the cocycle, which yields explicit short exact
//! sequence witnesses.

use crate::catalog::{Catalog, ObjClass};
use crate::error::{Error, Result};
use crate::linalg::{Fp, Mat};
use crate::quiver::{
    combine, cokernel, coords_in_basis, hom_space, image_sub, kernel_sub, quotient_rep, CoeffIter,
    Rep, RepMap,
};
use std::collections::HashMap;
use std::sync::{Arc, Mutex};

/// Minimal projective resolution 0 → P1 → P0 → M → 0.
pub struct ProjResolution {
    pub module: Rep,
    pub p0: Rep,
    pub p1: Rep,
    /// inclusion P1 → P0
    pub incl: RepMap,
    /// cover P0 → M
    pub cover: RepMap,
}

/// rad M at each vertex: the span of all incoming arrow images.
fn radical_bases(m: &Rep) -> Vec<Mat> {
    let q = &m.quiver;
    (0..q.vertex_count())
        .map(|v| {
            let mut stacked = Mat::zero(m.dims[v], 0, m.p());
            for (ai, a) in q.arrows.iter().enumerate() {
                if a.target == v {
                    stacked = stacked.hstack(&m.maps[ai]);
                }
            }
            stacked.column_space_basis()
        })
        .collect()
}

/// The morphism P_v → M sending the projective generator to `gen_image`,
/// via the evaluation isomorphism Hom(P_v, M) ≅ M_v.
fn projective_map_from_generator(pv: &Rep, v: usize, m: &Rep, gen_image: &[Fp]) -> RepMap {
    let basis = hom_space(pv, m);
    let p = m.p();
    // the generator is the trivial path, which sorts first at vertex v
    let cols: Vec<Vec<Fp>> = basis.iter().map(|f| f.blocks[v].column(0)).collect();
    let eval = Mat::from_columns(&cols, m.dims[v], p);
    let coeffs = eval
        .solve(&gen_image.to_vec())
        .expect("Hom(P_v, M) -> M_v is onto");
    combine(&basis, &coeffs, pv, m)
}

pub fn proj_resolution(m: &Rep) -> ProjResolution {
    let q = m.quiver.clone();
    let p = m.p();
    if m.is_zero() {
        let z = Rep::zero(q);
        return ProjResolution {
            module: m.clone(),
            p0: z.clone(),
            p1: z.clone(),
            incl: RepMap::identity(&z),
            cover: RepMap::new(
                z,
                m.clone(),
                m.dims.iter().map(|&d| Mat::zero(d, 0, p)).collect(),
            ),
        };
    }
    let rad = radical_bases(m);
    // one projective copy per top basis vector, vertices in index order
    let mut copies: Vec<(Rep, RepMap)> = Vec::new();
    for v in 0..q.vertex_count() {
        let comp = Mat::complement_basis(&rad[v]);
        if comp.cols() == 0 {
            continue;
        }
        let pv = Rep::projective(q.clone(), v);
        for j in 0..comp.cols() {
            let f = projective_map_from_generator(&pv, v, m, &comp.column(j));
            copies.push((pv.clone(), f));
        }
    }
    assert!(!copies.is_empty(), "nonzero module has nonzero top");
    let maps: Vec<&RepMap> = copies.iter().map(|(_, f)| f).collect();
    let reps: Vec<&Rep> = copies.iter().map(|(r, _)| r).collect();
    let p0 = Rep::direct_sum(&reps);
    let n = q.vertex_count();
    let blocks: Vec<Mat> = (0..n)
        .map(|v| {
            let mut b = Mat::zero(m.dims[v], 0, p);
            for f in &maps {
                b = b.hstack(&f.blocks[v]);
            }
            b
        })
        .collect();
    let cover = RepMap::new(p0.clone(), m.clone(), blocks);
    assert!(cover.is_surjective(), "projective cover must be onto");
    let ker = kernel_sub(&cover);
    ProjResolution {
        module: m.clone(),
        p1: ker.rep,
        incl: ker.inclusion,
        p0,
        cover,
    }
}

/// The Ext¹ group of a pair of representations, with explicit cocycles.
pub struct ExtSpaceRep {
    pub c: Rep,
    pub a: Rep,
    pub res: ProjResolution,
    /// basis of Hom(P1, A)
    hom_p1a: Vec<RepMap>,
    /// image of precomposition Hom(P0, A) → Hom(P1, A), echelon column basis
    im_cols: Mat,
    /// complement columns: the chosen Ext basis, in Hom(P1, A) coordinates
    comp_cols: Mat,
}

impl ExtSpaceRep {
    pub fn dim(&self) -> usize {
        self.comp_cols.cols()
    }

    /// The k-th chosen basis cocycle P1 → A.
    pub fn basis_cocycle(&self, k: usize) -> RepMap {
        let coords: Vec<Fp> = self.comp_cols.column(k);
        combine(&self.hom_p1a, &coords, &self.res.p1, &self.a)
    }

    /// Cocycle representative of the class with the given coordinates.
    pub fn cocycle_of(&self, coords: &[u32]) -> RepMap {
        assert_eq!(coords.len(), self.dim());
        let p = self.c.p();
        let mut acc = RepMap::zero(&self.res.p1, &self.a);
        for (k, &ck) in coords.iter().enumerate() {
            if ck != 0 {
                acc = acc.add(&self.basis_cocycle(k).scale(Fp::new(ck as i64, p)));
            }
        }
        acc
    }

    /// Coordinates of an arbitrary cocycle, i.e. its class modulo the image
    /// of Hom(P0, A).
    pub fn class_coords(&self, cocycle: &RepMap) -> Vec<u32> {
        let raw =
            coords_in_basis(&self.hom_p1a, cocycle).expect("cocycle lies in Hom(P1, A)");
        if self.dim() == 0 {
            return Vec::new();
        }
        let full = self.im_cols.hstack(&self.comp_cols);
        let alpha = full.solve(&raw).expect("im + comp span Hom(P1, A)");
        alpha[self.im_cols.cols()..].iter().map(|x| x.value()).collect()
    }
}

/// Compute Ext¹(C, A) with explicit cocycle representatives.
pub fn ext_space_rep(c: &Rep, a: &Rep) -> ExtSpaceRep {
    let res = proj_resolution(c);
    let hom_p1a = hom_space(&res.p1, a);
    let hom_p0a = hom_space(&res.p0, a);
    let p = c.p();
    let d1 = hom_p1a.len();
    let cols: Vec<Vec<Fp>> = hom_p0a
        .iter()
        .map(|g| {
            let restricted = g.compose(&res.incl);
            coords_in_basis(&hom_p1a, &restricted).expect("restriction stays in Hom(P1, A)")
        })
        .collect();
    let t = Mat::from_columns(&cols, d1, p);
    let im_cols = t.column_space_basis();
    let comp_cols = Mat::complement_basis(&im_cols);
    ExtSpaceRep {
        c: c.clone(),
        a: a.clone(),
        res,
        hom_p1a,
        im_cols,
        comp_cols,
    }
}

/// An explicit short exact sequence A → B → C (B not yet decomposed).
pub struct RealizedSeq {
    pub x: RepMap,
    pub y: RepMap,
}

impl RealizedSeq {
    pub fn middle(&self) -> &Rep {
        &self.x.target
    }
}

/// Realize the class with the given coordinates as the pushout of
/// P1 → P0 along its cocycle.
pub fn realize_rep(space: &ExtSpaceRep, coords: &[u32]) -> RealizedSeq {
    let xi = space.cocycle_of(coords);
    let a = &space.a;
    let res = &space.res;
    let p = a.p();
    let q = a.quiver.clone();
    let n = q.vertex_count();
    // W = A ⊕ P0; embed P1 by (ξ, -ι) and divide by its image
    let w = Rep::direct_sum(&[a, &res.p0]);
    let minus_one = Fp::new(-1, p);
    let embed_blocks: Vec<Mat> = (0..n)
        .map(|v| xi.blocks[v].vstack(&res.incl.blocks[v].scale(minus_one)))
        .collect();
    let embed = RepMap::new(res.p1.clone(), w.clone(), embed_blocks);
    let image_bases: Vec<Mat> = embed
        .blocks
        .iter()
        .map(|b| b.column_space_basis())
        .collect();
    let quot = quotient_rep(&w, &image_bases);
    // x: A → B through the quotient
    let x_blocks: Vec<Mat> = (0..n)
        .map(|v| {
            let ia =
                Mat::identity(a.dims[v], p).vstack(&Mat::zero(res.p0.dims[v], a.dims[v], p));
            quot.projection.blocks[v].mul(&ia)
        })
        .collect();
    let x = RepMap::new(a.clone(), quot.rep.clone(), x_blocks);
    // y: B → C induced by (0, cover), evaluated on quotient coordinates
    let y_blocks: Vec<Mat> = (0..n)
        .map(|v| {
            let g = Mat::zero(space.c.dims[v], a.dims[v], p).hstack(&res.cover.blocks[v]);
            g.mul(&quot.sections[v])
        })
        .collect();
    let y = RepMap::new(quot.rep.clone(), space.c.clone(), y_blocks);
    debug_assert!(x.is_injective());
    debug_assert!(y.is_surjective());
    debug_assert!(y.compose(&x).is_zero());
    debug_assert_eq!(
        quot.rep.total_dim(),
        a.total_dim() + space.c.total_dim(),
        "middle term dimension"
    );
    RealizedSeq { x, y }
}

/// An enumerated extension class together with its decomposed middle term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EMiddle {
    pub coords: Vec<u32>,
    pub middle: ObjClass,
}

/// A conflation at the iso-class level, with Rep-level witnesses when the
/// backend provides them.
#[derive(Clone)]
pub struct Conflation {
    pub a: ObjClass,
    pub b: ObjClass,
    pub c: ObjClass,
    pub coords: Vec<u32>,
    pub witness: Option<ConflationWitness>,
}

#[derive(Clone)]
pub struct ConflationWitness {
    pub x: RepMap,
    pub y: RepMap,
}

/// An E-group element at the iso-class level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtClass {
    pub c: ObjClass,
    pub a: ObjClass,
    pub coords: Vec<u32>,
}

impl ExtClass {
    pub fn is_split(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
}

/// The module-category backend: a frozen catalog plus memoized Ext data for
/// arbitrary (possibly decomposable) iso-class pairs.
pub struct ExactBackend {
    pub catalog: Arc<Catalog>,
    pub e_enum_cap: u64,
    ext_cache: Mutex<HashMap<(ObjClass, ObjClass), Arc<ExtSpaceRep>>>,
    middles_cache: Mutex<HashMap<(ObjClass, ObjClass), Arc<Vec<EMiddle>>>>,
    pub(crate) cones_cache: Mutex<HashMap<(ObjClass, ObjClass), Vec<ObjClass>>>,
    resolution_cache: Mutex<HashMap<crate::catalog::CatId, Arc<ProjResolution>>>,
}

impl ExactBackend {
    pub fn new(catalog: Arc<Catalog>) -> Self {
        ExactBackend {
            catalog,
            e_enum_cap: 1 << 12,
            ext_cache: Mutex::new(HashMap::new()),
            middles_cache: Mutex::new(HashMap::new()),
            cones_cache: Mutex::new(HashMap::new()),
            resolution_cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn p(&self) -> u32 {
        self.catalog.quiver.p
    }

    /// Ext space for an arbitrary pair of iso-classes (shift 0).
    pub fn ext_space(&self, c: &ObjClass, a: &ObjClass) -> Arc<ExtSpaceRep> {
        let key = (c.clone(), a.clone());
        if let Some(hit) = self.ext_cache.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let space = Arc::new(ext_space_rep(
            &self.catalog.rep_of(c),
            &self.catalog.rep_of(a),
        ));
        self.ext_cache.lock().unwrap().insert(key, space.clone());
        space
    }

    /// Ext dimension from the frozen table (biadditivity over summands).
    pub fn ext_dim_class(&self, c: &ObjClass, a: &ObjClass) -> usize {
        let mut acc = 0;
        for &(ci, _) in c.parts() {
            for &(ai, _) in a.parts() {
                acc += self.catalog.ext[ci][ai];
            }
        }
        acc
    }

    pub fn hom_dim_class(&self, x: &ObjClass, y: &ObjClass) -> usize {
        let mut acc = 0;
        for &(xi, _) in x.parts() {
            for &(yi, _) in y.parts() {
                acc += self.catalog.hom[xi][yi];
            }
        }
        acc
    }

    /// Realize one class as a conflation with witnesses; the middle term is
    /// returned in decomposed canonical form.
    pub fn realize(&self, c: &ObjClass, a: &ObjClass, coords: &[u32]) -> Result<Conflation> {
        let space = self.ext_space(c, a);
        let seq = realize_rep(&space, coords);
        let (b_class, iso) = self.catalog.decompose_with_iso(seq.middle())?;
        // rebase witnesses onto the canonical middle term
        let x = iso.compose(&seq.x);
        let y = seq.y.compose(&iso.inverse());
        Ok(Conflation {
            a: a.clone(),
            b: b_class,
            c: c.clone(),
            coords: coords.to_vec(),
            witness: Some(ConflationWitness { x, y }),
        })
    }

    /// All extension classes of the pair with their middle terms.
    pub fn enumerate_middles(&self, c: &ObjClass, a: &ObjClass) -> Result<Arc<Vec<EMiddle>>> {
        let key = (c.clone(), a.clone());
        if let Some(hit) = self.middles_cache.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let space = self.ext_space(c, a);
        let d = space.dim();
        let needed = (self.p() as u128).saturating_pow(d as u32);
        if needed > self.e_enum_cap as u128 {
            return Err(Error::CapExceeded {
                what: "E-group enumeration",
                needed,
                cap: self.e_enum_cap,
            });
        }
        let mut out = Vec::with_capacity(needed as usize);
        for coords in CoeffIter::new(self.p(), d) {
            let seq = realize_rep(&space, &coords);
            let middle = self.catalog.decompose(seq.middle())?;
            out.push(EMiddle { coords, middle });
        }
        let out = Arc::new(out);
        self.middles_cache.lock().unwrap().insert(key, out.clone());
        Ok(out)
    }

    /// The combined functorial transport: post-compose with a: A → A' and
    /// pre-compose with the resolution lift of c: C' → C.
    pub fn act(&self, delta: &ExtClass, a_map: &RepMap, c_map: &RepMap) -> Result<ExtClass> {
        let moved = self.act_left(delta, a_map)?;
        self.act_right(&moved, c_map)
    }

    /// Functorial transport a∗δ: post-compose the cocycle with a: A → A'.
    pub fn act_left(&self, delta: &ExtClass, a_map: &RepMap) -> Result<ExtClass> {
        let space = self.ext_space(&delta.c, &delta.a);
        let (target_class, iso) = self.catalog.decompose_with_iso(&a_map.target)?;
        let new_space = self.ext_space(&delta.c, &target_class);
        let cocycle = space.cocycle_of(&delta.coords);
        let moved = iso.compose(&a_map).compose(&cocycle);
        let coords = new_space.class_coords(&moved);
        Ok(ExtClass {
            c: delta.c.clone(),
            a: target_class,
            coords,
        })
    }

    /// Functorial transport c∗δ: lift c: C' → C through the resolutions and
    /// pre-compose the cocycle with the lifted map.
    pub fn act_right(&self, delta: &ExtClass, c_map: &RepMap) -> Result<ExtClass> {
        let space = self.ext_space(&delta.c, &delta.a);
        let (source_class, iso) = self.catalog.decompose_with_iso(&c_map.source)?;
        let c_canon = c_map.compose(&iso.inverse());
        let new_space = self.ext_space(&source_class, &delta.a);
        // lift c ∘ cover' through cover: c0: P0' → P0
        let c0 = lift_through_surjection(
            &new_space.res.p0,
            &c_canon.compose(&new_space.res.cover),
            &space.res.cover,
        );
        // restrict to kernels: c1: P1' → P1 with incl ∘ c1 = c0 ∘ incl'
        let rhs = c0.compose(&new_space.res.incl);
        let c1 = factor_through_injection(&rhs, &space.res.incl);
        let cocycle = space.cocycle_of(&delta.coords);
        let moved = cocycle.compose(&c1);
        let coords = new_space.class_coords(&moved);
        Ok(ExtClass {
            c: source_class,
            a: delta.a.clone(),
            coords,
        })
    }
}

/// Solve g = through ∘ x for x (lifting along a surjection out of a
/// projective source).
fn lift_through_surjection(source: &Rep, g: &RepMap, through: &RepMap) -> RepMap {
    let basis = hom_space(source, &through.source);
    let composed: Vec<RepMap> = basis.iter().map(|f| through.compose(f)).collect();
    let target_basis = hom_space(source, &g.target);
    let cols: Vec<Vec<Fp>> = composed
        .iter()
        .map(|f| coords_in_basis(&target_basis, f).expect("composition in hom space"))
        .collect();
    let gc = coords_in_basis(&target_basis, g).expect("g in hom space");
    let m = Mat::from_columns(&cols, gc.len(), source.p());
    let coeffs = m.solve(&gc).expect("projective lifting exists");
    combine(&basis, &coeffs, source, &through.source)
}

/// Solve rhs = incl ∘ x for x when incl is injective (the solution is
/// unique, hence automatically a morphism).
fn factor_through_injection(rhs: &RepMap, incl: &RepMap) -> RepMap {
    let blocks: Vec<Mat> = rhs
        .blocks
        .iter()
        .zip(incl.blocks.iter())
        .map(|(r, i)| i.solve_mat(r).expect("factors through the inclusion"))
        .collect();
    RepMap::new(rhs.source.clone(), incl.source.clone(), blocks)
}

/// Kernel of a morphism as a decomposed class.
pub fn kernel_class(backend: &ExactBackend, f: &RepMap) -> Result<ObjClass> {
    backend.catalog.decompose(&kernel_sub(f).rep)
}

/// Image of a morphism as a decomposed class.
pub fn image_class(backend: &ExactBackend, f: &RepMap) -> Result<ObjClass> {
    backend.catalog.decompose(&image_sub(f).rep)
}

/// Cokernel of a morphism as a decomposed class.
pub fn cokernel_class(backend: &ExactBackend, f: &RepMap) -> Result<ObjClass> {
    backend.catalog.decompose(&cokernel(f).rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{build_catalog, test_support::a2};
    use crate::quiver::test_support::a3_left;
    use crate::quiver::hom_dim;

    /// Independent oracle: for hereditary kQ the Euler form
    /// <C, A> = Σ_v dim C_v · dim A_v − Σ_{a: s→t} dim C_s · dim A_t
    /// equals dim Hom(C, A) − dim Ext¹(C, A). It is computed from dimension
    /// vectors alone, independently of any resolution.
    fn euler_form(c: &Rep, a: &Rep) -> i64 {
        let mut acc: i64 = 0;
        for v in 0..c.quiver.vertex_count() {
            acc += (c.dims[v] * a.dims[v]) as i64;
        }
        for arrow in &c.quiver.arrows {
            acc -= (c.dims[arrow.source] * a.dims[arrow.target]) as i64;
        }
        acc
    }

    #[test]
    fn resolution_of_projective_is_trivial() {
        let q = a3_left();
        let p2 = Rep::projective(q, 1);
        let res = proj_resolution(&p2);
        assert!(res.p1.is_zero());
        assert_eq!(res.p0.dims, p2.dims);
    }

    #[test]
    fn resolution_of_s3_on_a3() {
        // S3 has cover P3 (dims 1,1,1) and first syzygy P2 (dims 1,1,0)
        let q = a3_left();
        let s3 = Rep::simple(q.clone(), 2);
        let res = proj_resolution(&s3);
        assert_eq!(res.p0.dims, vec![1, 1, 1]);
        assert_eq!(res.p1.dims, vec![1, 1, 0]);
        assert!(res.incl.is_injective());
        assert!(res.cover.is_surjective());
    }

    #[test]
    fn resolution_of_i2_on_a3() {
        // I2 (dims 0,1,1): cover P3, syzygy S1 = P1
        let q = a3_left();
        let i2 = Rep::injective(q, 1);
        let res = proj_resolution(&i2);
        assert_eq!(res.p0.dims, vec![1, 1, 1]);
        assert_eq!(res.p1.dims, vec![1, 0, 0]);
    }

    #[test]
    fn ext_dims_on_a3() {
        let q = a3_left();
        let s2 = Rep::simple(q.clone(), 1);
        let s3 = Rep::simple(q.clone(), 2);
        assert_eq!(ext_space_rep(&s3, &s2).dim(), 1);
        assert_eq!(ext_space_rep(&s2, &s3).dim(), 0);
        // Ext¹(P, -) = 0 for projectives
        let p3 = Rep::projective(q.clone(), 2);
        for v in 0..3 {
            assert_eq!(ext_space_rep(&p3, &Rep::simple(q.clone(), v)).dim(), 0);
        }
    }

    #[test]
    fn ext_table_matches_euler_form() {
        let cat = build_catalog(a3_left()).unwrap();
        for i in 0..cat.len() {
            for j in 0..cat.len() {
                let expected = cat.hom[i][j] as i64 - euler_form(&cat.members[i], &cat.members[j]);
                assert_eq!(
                    cat.ext[i][j] as i64, expected,
                    "Euler form mismatch at ({}, {})",
                    cat.labels[i], cat.labels[j]
                );
            }
        }
    }

    #[test]
    fn ext_vanishes_into_injectives() {
        let cat = build_catalog(a3_left()).unwrap();
        for v in 0..3 {
            let inj = cat.injective_at[v];
            for i in 0..cat.len() {
                assert_eq!(cat.ext[i][inj], 0);
            }
        }
    }

    #[test]
    fn realize_split_and_nonsplit() {
        let cat = build_catalog(a3_left()).unwrap();
        let backend = ExactBackend::new(cat.clone());
        let s2 = ObjClass::module(cat.id_of_label("S2").unwrap());
        let s3 = ObjClass::module(cat.id_of_label("S3").unwrap());
        let i2 = ObjClass::module(cat.id_of_label("I2").unwrap());
        // split class has middle S2 ⊕ S3
        let split = backend.realize(&s3, &s2, &[0]).unwrap();
        assert_eq!(split.b, s2.sum(&s3));
        // the nonsplit class realizes the sequence with middle I2
        let nonsplit = backend.realize(&s3, &s2, &[1]).unwrap();
        assert_eq!(nonsplit.b, i2);
        let w = nonsplit.witness.unwrap();
        assert!(w.x.is_injective());
        assert!(w.y.is_surjective());
        assert!(w.y.compose(&w.x).is_zero());
    }

    #[test]
    fn enumerate_middles_on_a3() {
        let cat = build_catalog(a3_left()).unwrap();
        let backend = ExactBackend::new(cat.clone());
        let s2 = ObjClass::module(cat.id_of_label("S2").unwrap());
        let s3 = ObjClass::module(cat.id_of_label("S3").unwrap());
        let i2 = ObjClass::module(cat.id_of_label("I2").unwrap());
        let ms = backend.enumerate_middles(&s3, &s2).unwrap();
        let set: std::collections::BTreeSet<ObjClass> =
            ms.iter().map(|m| m.middle.clone()).collect();
        assert_eq!(
            set.into_iter().collect::<Vec<_>>(),
            vec![s2.sum(&s3), i2.clone()]
        );
        // the opposite pair has no nonsplit extension
        let ms_rev = backend.enumerate_middles(&s2, &s3).unwrap();
        assert_eq!(ms_rev.len(), 1);
        assert_eq!(ms_rev[0].middle, s2.sum(&s3));
    }

    #[test]
    fn realization_is_additive() {
        // s(δ ⊕ δ') realizes as middle(δ) ⊕ middle(δ')
        let cat = build_catalog(a3_left()).unwrap();
        let backend = ExactBackend::new(cat.clone());
        let s2 = ObjClass::module(cat.id_of_label("S2").unwrap());
        let s3 = ObjClass::module(cat.id_of_label("S3").unwrap());
        let c = s3.sum(&s3);
        let a = s2.sum(&s2);
        // E(S3⊕S3, S2⊕S2) is 4-dimensional; the "diagonal" class
        // (1,0,0,1)-ish realizes as I2 ⊕ I2 for some basis arrangement:
        // verify additivity by dimension bookkeeping over all classes
        let space = backend.ext_space(&c, &a);
        assert_eq!(space.dim(), 4);
        let all = backend.enumerate_middles(&c, &a).unwrap();
        assert_eq!(all.len(), 16);
        for m in all.iter() {
            // every middle is built from S2, S3, I2 with matching dims
            let rep = cat.rep_of(&m.middle);
            assert_eq!(rep.dims, vec![0, 2, 2]);
        }
        // zero class splits
        let z = backend.realize(&c, &a, &[0, 0, 0, 0]).unwrap();
        assert_eq!(z.b, c.sum(&a));
    }

    #[test]
    fn combined_act_with_identities_is_identity() {
        let cat = build_catalog(a3_left()).unwrap();
        let backend = ExactBackend::new(cat.clone());
        let s2 = ObjClass::module(cat.id_of_label("S2").unwrap());
        let s3 = ObjClass::module(cat.id_of_label("S3").unwrap());
        let delta = ExtClass {
            c: s3.clone(),
            a: s2.clone(),
            coords: vec![1],
        };
        let id_a = RepMap::identity(&cat.rep_of(&s2));
        let id_c = RepMap::identity(&cat.rep_of(&s3));
        assert_eq!(backend.act(&delta, &id_a, &id_c).unwrap(), delta);
    }

    #[test]
    fn act_identities() {
        let cat = build_catalog(a3_left()).unwrap();
        let backend = ExactBackend::new(cat.clone());
        let s2 = ObjClass::module(cat.id_of_label("S2").unwrap());
        let s3 = ObjClass::module(cat.id_of_label("S3").unwrap());
        let delta = ExtClass {
            c: s3.clone(),
            a: s2.clone(),
            coords: vec![1],
        };
        let id_a = RepMap::identity(&cat.rep_of(&s2));
        let id_c = RepMap::identity(&cat.rep_of(&s3));
        // act(δ, id, id) = δ
        let left = backend.act_left(&delta, &id_a).unwrap();
        assert_eq!(left, delta);
        let right = backend.act_right(&delta, &id_c).unwrap();
        assert_eq!(right, delta);
        // a = 0 kills the class
        let zero_a = RepMap::zero(&cat.rep_of(&s2), &cat.rep_of(&s2));
        let killed = backend.act_left(&delta, &zero_a).unwrap();
        assert!(killed.is_split());
        // act on the split class stays split
        let split = ExtClass {
            c: s3,
            a: s2.clone(),
            coords: vec![0],
        };
        assert!(backend.act_left(&split, &id_a).unwrap().is_split());
    }

    #[test]
    fn nonsplit_admits_no_retraction() {
        // δ ≠ 0 means the inclusion x: A → B has no left inverse
        let cat = build_catalog(a3_left()).unwrap();
        let backend = ExactBackend::new(cat.clone());
        let s2 = ObjClass::module(cat.id_of_label("S2").unwrap());
        let s3 = ObjClass::module(cat.id_of_label("S3").unwrap());
        let nonsplit = backend.realize(&s3, &s2, &[1]).unwrap();
        let w = nonsplit.witness.unwrap();
        let a_rep = cat.rep_of(&s2);
        // search r: B → A with r ∘ x = id by linear algebra
        let candidates = crate::quiver::hom_space(&w.x.target, &a_rep);
        let id = RepMap::identity(&a_rep);
        let found = CoeffIter::new(2, candidates.len()).any(|coeffs| {
            let r = crate::quiver::combine(
                &candidates,
                &coeffs.iter().map(|&c| Fp::new(c as i64, 2)).collect::<Vec<_>>(),
                &w.x.target,
                &a_rep,
            );
            r.compose(&w.x) == id
        });
        assert!(!found, "nonsplit class admitted a retraction");
        // and the split one does admit a retraction
        let split = backend.realize(&s3, &s2, &[0]).unwrap();
        let w0 = split.witness.unwrap();
        let candidates0 = crate::quiver::hom_space(&w0.x.target, &a_rep);
        let found0 = CoeffIter::new(2, candidates0.len()).any(|coeffs| {
            let r = crate::quiver::combine(
                &candidates0,
                &coeffs.iter().map(|&c| Fp::new(c as i64, 2)).collect::<Vec<_>>(),
                &w0.x.target,
                &a_rep,
            );
            r.compose(&w0.x) == id
        });
        assert!(found0);
    }

    #[test]
    fn ext_biadditive() {
        let cat = build_catalog(a2()).unwrap();
        let backend = ExactBackend::new(cat.clone());
        let ids: Vec<ObjClass> = (0..cat.len()).map(ObjClass::module).collect();
        for c1 in &ids {
            for c2 in &ids {
                for a in &ids {
                    let lhs = backend.ext_space(&c1.sum(c2), a).dim();
                    let rhs =
                        backend.ext_space(c1, a).dim() + backend.ext_space(c2, a).dim();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn hom_evaluation_isomorphism_on_projectives() {
        // dim Hom(P_v, M) = dim M_v, the fact behind the cover construction
        let q = a3_left();
        let i2 = Rep::injective(q.clone(), 1);
        for v in 0..3 {
            let pv = Rep::projective(q.clone(), v);
            assert_eq!(hom_dim(&pv, &i2), i2.dims[v]);
        }
    }
}

impl ExactBackend {
    /// Every possible cone of a conflation `bottom → middle → cone`: in the
    /// module backend the inflations bottom → middle are exactly the
    /// injective morphisms, and the cone is the cokernel.
    pub(crate) fn extension_cones_cached(
        &self,
        bottom: &ObjClass,
        middle: &ObjClass,
    ) -> Result<Vec<ObjClass>> {
        let key = (bottom.clone(), middle.clone());
        if let Some(hit) = self.cones_cache.lock().unwrap().get(&key) {
            return Ok(hit.clone());
        }
        let p = self.p();
        let b_rep = self.catalog.rep_of(bottom);
        let m_rep = self.catalog.rep_of(middle);
        let basis = hom_space(&b_rep, &m_rep);
        let needed = (p as u128).saturating_pow(basis.len() as u32);
        let cap = 1u64 << 16;
        if needed > cap as u128 {
            return Err(Error::CapExceeded {
                what: "cone enumeration over Hom elements",
                needed,
                cap,
            });
        }
        let mut out = std::collections::BTreeSet::new();
        for coeffs in CoeffIter::new(p, basis.len()) {
            let f = crate::quiver::combine(
                &basis,
                &coeffs
                    .iter()
                    .map(|&c| Fp::new(c as i64, p))
                    .collect::<Vec<_>>(),
                &b_rep,
                &m_rep,
            );
            if f.is_injective() {
                out.insert(self.catalog.decompose(&cokernel(&f).rep)?);
            }
        }
        let out: Vec<ObjClass> = out.into_iter().collect();
        self.cones_cache.lock().unwrap().insert(key, out.clone());
        Ok(out)
    }
}

impl ExactBackend {
    /// Cached minimal resolution of a catalog member.
    pub fn indec_resolution(&self, id: crate::catalog::CatId) -> Arc<ProjResolution> {
        {
            let cache = self.resolution_cache.lock().unwrap();
            if let Some(hit) = cache.get(&id) {
                return hit.clone();
            }
        }
        let res = Arc::new(proj_resolution(&self.catalog.members[id]));
        self.resolution_cache
            .lock()
            .unwrap()
            .insert(id, res.clone());
        res
    }
}
