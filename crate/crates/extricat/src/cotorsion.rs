//! Perpendicular categories, approximation triangles, cotorsion pairs and
//! their correspondence with subsets of a semibrick, simple-minded systems,
//! and torsion pairs in the triangulated backend.
//!
//! The approximation recursion follows the constructive proof shape: peel a
//! nonzero morphism from a semibrick member (an inflation with cone of
//! length one less), recurse on the cone, and assemble the final conflation
//! as the kernel of the composed deflation. Every postcondition the theory
//! promises is asserted on the computed witnesses rather than trusted.

use crate::catalog::ObjClass;
use crate::error::{Error, Result};
use crate::exact::{Conflation, ConflationWitness, ExactBackend};
use crate::extri::{
    filt_closure, multisets_over, peel_membership, ExtriCategory, FiltResult, Subcat,
    PEEL_DEPTH_CAP,
};
use crate::quiver::{cokernel, coords_in_basis, hom_space, kernel_sub, RepMap};

/// Which perpendicular category to compute.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PerpKind {
    /// ^⊥ base = { M : Hom(M, base) = 0 }
    HomLeft,
    /// base ^⊥ = { M : Hom(base, M) = 0 }
    HomRight,
    /// ^⊥1 base = { M : E(M, base) = 0 }
    ExtLeft,
    /// base ^⊥1 = { M : E(base, M) = 0 }
    ExtRight,
}

/// The perpendicular subcategory of `scope` against `base`.
pub fn perp<B: ExtriCategory + ?Sized>(
    bk: &B,
    base: &[ObjClass],
    kind: PerpKind,
    scope: &Subcat,
) -> Result<Subcat> {
    let mut support = Vec::new();
    for m in scope.members() {
        let mut orthogonal = true;
        for s in base {
            let d = match kind {
                PerpKind::HomLeft => bk.hom_dim(&m, s)?,
                PerpKind::HomRight => bk.hom_dim(s, &m)?,
                PerpKind::ExtLeft => bk.e_dim(&m, s)?,
                PerpKind::ExtRight => bk.e_dim(s, &m)?,
            };
            if d != 0 {
                orthogonal = false;
                break;
            }
        }
        if orthogonal {
            support.extend(m.parts().iter().copied());
        }
    }
    Ok(Subcat::from_support(support))
}

/// The class of an explicit short exact sequence, recovered by lifting the
/// projective resolution of its cokernel term through the deflation.
pub fn class_of_sequence(bk: &ExactBackend, x: &RepMap, y: &RepMap) -> Result<Vec<u32>> {
    let c_class = bk.catalog.decompose(&y.target)?;
    let a_class = bk.catalog.decompose(&x.source)?;
    let space = bk.ext_space(&c_class, &a_class);
    // the resolution resolves the canonical rep of C; rebase y
    let (_, c_iso) = bk.catalog.decompose_with_iso(&y.target)?;
    let (_, a_iso) = bk.catalog.decompose_with_iso(&x.source)?;
    let y_canon = c_iso.compose(y);
    // lift cover: c0: P0 → M with y_canon ∘ c0 = cover
    let c0 = lift_hom(&space.res.p0, &space.res.cover, &y_canon)?;
    // ξ = x^{-1} ∘ (c0 ∘ incl) : P1 → A, rebased to the canonical A
    let into_m = c0.compose(&space.res.incl);
    let xi_raw = factor_injection(&into_m, x)?;
    let xi = a_iso.compose(&xi_raw);
    Ok(space.class_coords(&xi))
}

/// Solve g = through ∘ f for f by linear algebra on Hom spaces.
fn lift_hom(source: &crate::quiver::Rep, g: &RepMap, through: &RepMap) -> Result<RepMap> {
    let basis = hom_space(source, &through.source);
    let target_basis = hom_space(source, &g.target);
    let p = source.p();
    let cols: Vec<Vec<crate::linalg::Fp>> = basis
        .iter()
        .map(|f| {
            coords_in_basis(&target_basis, &through.compose(f)).expect("composite in hom space")
        })
        .collect();
    let gc = coords_in_basis(&target_basis, g).expect("goal in hom space");
    let m = crate::linalg::Mat::from_columns(&cols, gc.len(), p);
    let coeffs = m
        .solve(&gc)
        .ok_or_else(|| Error::Precondition("lifting through deflation failed".into()))?;
    Ok(crate::quiver::combine(&basis, &coeffs, source, &through.source))
}

/// Solve rhs = incl ∘ f for f when incl is injective.
fn factor_injection(rhs: &RepMap, incl: &RepMap) -> Result<RepMap> {
    let blocks: Vec<crate::linalg::Mat> = rhs
        .blocks
        .iter()
        .zip(incl.blocks.iter())
        .map(|(r, i)| {
            i.solve_mat(r)
                .ok_or_else(|| Error::Precondition("factor through inclusion failed".into()))
        })
        .collect::<Result<_>>()?;
    Ok(RepMap::new(
        rhs.source.clone(),
        incl.source.clone(),
        blocks,
    ))
}

/// Right approximation triangle N → M → P with N ∈ Filt(S), P ∈ S^⊥.
///
/// Recursion: if Hom(S, M) = 0 the triangle is 0 → M → M; otherwise the
/// first nonzero morphism f from an S-member is an inflation whose cone has
/// smaller length, and N is the kernel of the composite deflation onto the
/// recursive P. Memberships are asserted, not assumed.
pub fn approx_right(
    bk: &ExactBackend,
    m: &ObjClass,
    s: &[ObjClass],
    filt_s: &FiltResult,
) -> Result<Conflation> {
    let m_rep = bk.catalog.rep_of(m);
    let conf = approx_right_rep(bk, &m_rep, s)?;
    let n_class = bk.catalog.decompose(&conf.x.source)?;
    let p_class = bk.catalog.decompose(&conf.y.target)?;
    // postconditions: N ∈ Filt(S), P ∈ S^⊥
    if !filt_s.closure.contains(&n_class) {
        return Err(Error::Precondition(format!(
            "approximation sub-term {} escaped Filt(S)",
            bk.catalog.class_label(&n_class)
        )));
    }
    for sm in s {
        if bk.hom_dim_class(sm, &p_class) != 0 {
            return Err(Error::Precondition(format!(
                "approximation quotient {} is not in S-perp",
                bk.catalog.class_label(&p_class)
            )));
        }
    }
    let coords = class_of_sequence(bk, &conf.x, &conf.y)?;
    Ok(Conflation {
        a: n_class,
        b: m.clone(),
        c: p_class,
        coords,
        witness: Some(ConflationWitness {
            x: conf.x,
            y: conf.y,
        }),
    })
}

struct RepSeq {
    x: RepMap,
    y: RepMap,
}

fn approx_right_rep(
    bk: &ExactBackend,
    m_rep: &crate::quiver::Rep,
    s: &[ObjClass],
) -> Result<RepSeq> {
    // find the first nonzero morphism from an S-member
    for sm in s {
        let s_rep = bk.catalog.rep_of(sm);
        let basis = hom_space(&s_rep, m_rep);
        if basis.is_empty() {
            continue;
        }
        let f = basis[0].clone();
        assert!(!f.is_zero(), "hom basis elements are nonzero");
        // the brick-source property makes f an inflation
        assert!(
            f.is_injective(),
            "nonzero morphism from a semibrick member must be an inflation"
        );
        let quot = cokernel(&f);
        let rec = approx_right_rep(bk, &quot.rep, s)?;
        // composite deflation M → H → P, then N = ker
        let deflation = rec.y.compose(&quot.projection);
        assert!(deflation.is_surjective());
        let ker = kernel_sub(&deflation);
        return Ok(RepSeq {
            x: ker.inclusion,
            y: deflation,
        });
    }
    // base case: Hom(S, M) = 0, use 0 → M → M
    let zero = crate::quiver::Rep::zero(m_rep.quiver.clone());
    let x = RepMap::new(
        zero,
        m_rep.clone(),
        m_rep
            .dims
            .iter()
            .map(|&d| crate::linalg::Mat::zero(d, 0, m_rep.p()))
            .collect(),
    );
    Ok(RepSeq {
        x,
        y: RepMap::identity(m_rep),
    })
}

/// Left approximation triangle U → M → V with U ∈ ^⊥S, V ∈ Filt(S); dual of
/// `approx_right` via deflations onto S-members.
pub fn approx_left(
    bk: &ExactBackend,
    m: &ObjClass,
    s: &[ObjClass],
    filt_s: &FiltResult,
) -> Result<Conflation> {
    let m_rep = bk.catalog.rep_of(m);
    let conf = approx_left_rep(bk, &m_rep, s)?;
    let u_class = bk.catalog.decompose(&conf.x.source)?;
    let v_class = bk.catalog.decompose(&conf.y.target)?;
    for sm in s {
        if bk.hom_dim_class(&u_class, sm) != 0 {
            return Err(Error::Precondition(format!(
                "approximation sub-term {} is not in perp-S",
                bk.catalog.class_label(&u_class)
            )));
        }
    }
    if !filt_s.closure.contains(&v_class) {
        return Err(Error::Precondition(format!(
            "approximation quotient {} escaped Filt(S)",
            bk.catalog.class_label(&v_class)
        )));
    }
    let coords = class_of_sequence(bk, &conf.x, &conf.y)?;
    Ok(Conflation {
        a: u_class,
        b: m.clone(),
        c: v_class,
        coords,
        witness: Some(ConflationWitness {
            x: conf.x,
            y: conf.y,
        }),
    })
}

fn approx_left_rep(
    bk: &ExactBackend,
    m_rep: &crate::quiver::Rep,
    s: &[ObjClass],
) -> Result<RepSeq> {
    for sm in s {
        let s_rep = bk.catalog.rep_of(sm);
        let basis = hom_space(m_rep, &s_rep);
        if basis.is_empty() {
            continue;
        }
        let f = basis[0].clone();
        // dual brick-source property: f is a deflation
        assert!(
            f.is_surjective(),
            "nonzero morphism onto a semibrick member must be a deflation"
        );
        let ker = kernel_sub(&f);
        let rec = approx_left_rep(bk, &ker.rep, s)?;
        // composite inflation U → K → M, then V = coker
        let inflation = ker.inclusion.compose(&rec.x);
        assert!(inflation.is_injective());
        let quot = cokernel(&inflation);
        return Ok(RepSeq {
            x: inflation,
            y: quot.projection,
        });
    }
    // base case: Hom(M, S) = 0, use M → M → 0
    let zero = crate::quiver::Rep::zero(m_rep.quiver.clone());
    let y = RepMap::new(
        m_rep.clone(),
        zero,
        m_rep
            .dims
            .iter()
            .map(|&d| crate::linalg::Mat::zero(0, d, m_rep.p()))
            .collect(),
    );
    Ok(RepSeq {
        x: RepMap::identity(m_rep),
        y,
    })
}

/// The factorization property of right approximations: every morphism from
/// an S-filtered test object into M factors through x: N → M.
pub fn is_right_approximation(
    bk: &ExactBackend,
    x: &RepMap,
    filt_support: &Subcat,
) -> Result<bool> {
    let m_rep = &x.target;
    for t in filt_support.members() {
        let t_rep = bk.catalog.rep_of(&t);
        let into_m = hom_space(&t_rep, m_rep);
        if into_m.is_empty() {
            continue;
        }
        let through = hom_space(&t_rep, &x.source);
        let composed: Vec<RepMap> = through.iter().map(|h| x.compose(h)).collect();
        for g in &into_m {
            // g must lie in the span of x ∘ Hom(T, N)
            let p = t_rep.p();
            let flat = |f: &RepMap| -> Vec<crate::linalg::Fp> {
                f.blocks
                    .iter()
                    .flat_map(|b| {
                        b.entries()
                            .iter()
                            .map(|&e| crate::linalg::Fp::new(e as i64, p))
                    })
                    .collect()
            };
            let gv = flat(g);
            let cols: Vec<Vec<crate::linalg::Fp>> = composed.iter().map(flat).collect();
            if cols.is_empty() {
                if gv.iter().any(|v| !v.is_zero()) {
                    return Ok(false);
                }
                continue;
            }
            let mat = crate::linalg::Mat::from_columns(&cols, gv.len(), p);
            if mat.solve(&gv).is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Projective objects of the scope by the E-vanishing criterion
/// E(P, scope) = 0 (equivalent to the lifting property in extriangulated
/// categories; the lifting property itself is spot-checked in tests).
pub fn projectives_of<B: ExtriCategory + ?Sized>(bk: &B, scope: &Subcat) -> Result<Subcat> {
    let members: Vec<ObjClass> = scope.members().collect();
    perp(bk, &members, PerpKind::ExtLeft, scope)
}

pub fn injectives_of<B: ExtriCategory + ?Sized>(bk: &B, scope: &Subcat) -> Result<Subcat> {
    let members: Vec<ObjClass> = scope.members().collect();
    perp(bk, &members, PerpKind::ExtRight, scope)
}

/// Does every scope member admit a conflation A → P → M with P a sum of
/// scope-projectives and A in the scope? Searched over E-groups: a middle
/// term isomorphic to a projective sum witnesses the deflation P → M.
pub fn has_enough_projectives<B: ExtriCategory + ?Sized>(
    bk: &B,
    scope: &Subcat,
    sum_bound: usize,
) -> Result<bool> {
    let projs = projectives_of(bk, scope)?;
    for m in scope.members() {
        if projs.contains(&m) {
            continue;
        }
        let mut found = false;
        'search: for a in multisets_over(&scope.support_vec(), sum_bound) {
            for middle in bk.e_middles(&m, &a)?.iter() {
                if !middle.middle.is_zero() && projs.contains(&middle.middle) {
                    found = true;
                    break 'search;
                }
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn has_enough_injectives<B: ExtriCategory + ?Sized>(
    bk: &B,
    scope: &Subcat,
    sum_bound: usize,
) -> Result<bool> {
    let injs = injectives_of(bk, scope)?;
    for m in scope.members() {
        if injs.contains(&m) {
            continue;
        }
        let mut found = false;
        'search: for c in multisets_over(&scope.support_vec(), sum_bound) {
            for middle in bk.e_middles(&c, &m)?.iter() {
                if !middle.middle.is_zero() && injs.contains(&middle.middle) {
                    found = true;
                    break 'search;
                }
            }
        }
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A cotorsion-pair verdict with the approximation witnesses found.
pub struct CotorsionOutcome {
    pub holds: bool,
    pub failures: Vec<String>,
    /// per scope member: a (b)-witness conflation V → U → C
    pub b_witnesses: Vec<(ObjClass, ObjClass, ObjClass, Vec<u32>)>,
    /// per scope member: a (c)-witness conflation C → V' → U'
    pub c_witnesses: Vec<(ObjClass, ObjClass, ObjClass, Vec<u32>)>,
}

/// Check the cotorsion pair conditions for (U, V) inside `scope`:
/// (a) E(U, V) = 0 by tables, (b) and (c) by exhaustive conflation search
/// over direct sums of the complementary support, witnesses returned.
/// Conflations add over direct summands, so scope members suffice as the
/// test objects.
pub fn is_cotorsion_pair<B: ExtriCategory + ?Sized>(
    bk: &B,
    u: &Subcat,
    v: &Subcat,
    scope: &Subcat,
    sum_bound: usize,
) -> Result<CotorsionOutcome> {
    let mut failures = Vec::new();
    for um in u.members() {
        for vm in v.members() {
            if bk.e_dim(&um, &vm)? != 0 {
                failures.push(format!(
                    "E({}, {}) is nonzero",
                    bk.class_label(&um),
                    bk.class_label(&vm)
                ));
            }
        }
    }
    let mut b_witnesses = Vec::new();
    let mut c_witnesses = Vec::new();
    for cm in scope.members() {
        // (b): V → U → C, i.e. a class in E(C, v-sum) with middle in add U
        let mut b_found = None;
        'b_search: for vv in multisets_over(&v.support_vec(), sum_bound) {
            for middle in bk.e_middles(&cm, &vv)?.iter() {
                if u.contains(&middle.middle) {
                    b_found = Some((
                        vv.clone(),
                        middle.middle.clone(),
                        cm.clone(),
                        middle.coords.clone(),
                    ));
                    break 'b_search;
                }
            }
        }
        match b_found {
            Some(w) => b_witnesses.push(w),
            None => failures.push(format!(
                "no conflation V → U → {} with V ∈ V, U ∈ U",
                bk.class_label(&cm)
            )),
        }
        // (c): C → V' → U', i.e. a class in E(u-sum, C) with middle in add V
        let mut c_found = None;
        'c_search: for uu in multisets_over(&u.support_vec(), sum_bound) {
            for middle in bk.e_middles(&uu, &cm)?.iter() {
                if v.contains(&middle.middle) {
                    c_found = Some((
                        cm.clone(),
                        middle.middle.clone(),
                        uu.clone(),
                        middle.coords.clone(),
                    ));
                    break 'c_search;
                }
            }
        }
        match c_found {
            Some(w) => c_witnesses.push(w),
            None => failures.push(format!(
                "no conflation {} → V' → U' with V' ∈ V, U' ∈ U",
                bk.class_label(&cm)
            )),
        }
    }
    Ok(CotorsionOutcome {
        holds: failures.is_empty(),
        failures,
        b_witnesses,
        c_witnesses,
    })
}

/// The minimal subset S_D of the semibrick X with D ⊆ Filt(S_D): seeded from
/// the filtration factors recorded by the closure, then greedily shrunk; the
/// final minimality is re-verified by single-element removals, and a
/// distinct second minimal set is reported as an error rather than ignored.
pub fn support_set<B: ExtriCategory + ?Sized>(
    bk: &B,
    d: &Subcat,
    x: &[ObjClass],
    closure_of_x: &FiltResult,
    sum_bound: usize,
) -> Result<Vec<ObjClass>> {
    let mut seed: Vec<ObjClass> = Vec::new();
    for m in d.members() {
        if !closure_of_x.lengths.contains_key(&m) {
            return Err(Error::Precondition(format!(
                "{} is not in Filt(X)",
                bk.class_label(&m)
            )));
        }
        for f in closure_of_x.factors_of(&m) {
            if !seed.contains(&f) {
                seed.push(f);
            }
        }
    }
    seed.sort();
    let contained_in_filt = |s: &[ObjClass]| -> Result<bool> {
        let res = filt_closure(bk, s, sum_bound)?;
        Ok(d
            .support()
            .iter()
            .all(|&p| res.closure.support().contains(&p)))
    };
    // greedy removal in a fixed order
    let mut minimal = seed.clone();
    let mut idx = 0;
    while idx < minimal.len() {
        let mut candidate = minimal.clone();
        candidate.remove(idx);
        if contained_in_filt(&candidate)? {
            minimal = candidate;
        } else {
            idx += 1;
        }
    }
    // verify minimality
    for i in 0..minimal.len() {
        let mut candidate = minimal.clone();
        candidate.remove(i);
        if contained_in_filt(&candidate)? {
            return Err(Error::Precondition(
                "support set not minimal after greedy sweep".into(),
            ));
        }
    }
    // detect a distinct minimal set (uniqueness is expected, not assumed)
    for i in 0..minimal.len() {
        for y in x {
            if minimal.contains(y) {
                continue;
            }
            let mut candidate = minimal.clone();
            candidate.remove(i);
            candidate.push(y.clone());
            candidate.sort();
            if contained_in_filt(&candidate)? && candidate.len() <= minimal.len() {
                return Err(Error::Precondition(format!(
                    "two distinct minimal support sets: {} and {}",
                    bk.set_label(&minimal),
                    bk.set_label(&candidate)
                )));
            }
        }
    }
    Ok(minimal)
}

/// The correspondence between cotorsion pairs (U, U^⊥1) in T = Filt(X) and
/// subsets S ⊆ X containing S_P.
pub struct CorrespondenceOutcome {
    pub precondition_ok: bool,
    pub s_p: Vec<ObjClass>,
    pub valid_subsets: Vec<Vec<ObjClass>>,
    pub violations: Vec<String>,
}

pub fn verify_correspondence(
    bk: &ExactBackend,
    x: &[ObjClass],
    sum_bound: usize,
) -> Result<CorrespondenceOutcome> {
    let closure = filt_closure(bk, x, sum_bound)?;
    let t_scope = closure.closure.clone();
    let enough = has_enough_projectives(bk, &t_scope, sum_bound)?
        && has_enough_injectives(bk, &t_scope, sum_bound)?;
    if !enough {
        return Ok(CorrespondenceOutcome {
            precondition_ok: false,
            s_p: Vec::new(),
            valid_subsets: Vec::new(),
            violations: Vec::new(),
        });
    }
    let projs = projectives_of(bk, &t_scope)?;
    let s_p = support_set(bk, &projs, x, &closure, sum_bound)?;
    let mut violations = Vec::new();
    let mut valid_subsets = Vec::new();
    let n = x.len();
    for mask in 0..(1u64 << n) {
        let s: Vec<ObjClass> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| x[i].clone())
            .collect();
        let filt_s = filt_closure(bk, &s, sum_bound)?;
        let u = filt_s.closure.clone();
        let v = perp_within(bk, &s, &t_scope)?;
        let outcome = is_cotorsion_pair(bk, &u, &v, &t_scope, sum_bound)?;
        let expected = s_p.iter().all(|sp| s.contains(sp));
        if outcome.holds != expected {
            violations.push(format!(
                "(Filt({0}), {0}^perp1) cotorsion: got {1}, expected {2}: {3:?}",
                bk.set_label(&s),
                outcome.holds,
                expected,
                outcome.failures
            ));
        }
        if expected {
            valid_subsets.push(s.clone());
            // the maps are mutually inverse: S_(Filt(S)) = S
            let back = support_set(bk, &u, x, &closure, sum_bound)?;
            let mut sorted_s = s.clone();
            sorted_s.sort();
            if back != sorted_s {
                violations.push(format!(
                    "S_(Filt(S)) = {} differs from S = {}",
                    bk.set_label(&back),
                    bk.set_label(&s)
                ));
            }
        }
    }
    Ok(CorrespondenceOutcome {
        precondition_ok: true,
        s_p,
        valid_subsets,
        violations,
    })
}

/// S^⊥1 within a scope.
pub fn perp_within<B: ExtriCategory + ?Sized>(
    bk: &B,
    s: &[ObjClass],
    scope: &Subcat,
) -> Result<Subcat> {
    perp(bk, s, PerpKind::ExtRight, scope)
}

/// Is X a simple-minded system of the scope, i.e. Filt(X) covers the whole
/// universe? Membership is certified by peeling; window-limited steps are
/// reported alongside the verdict.
pub fn is_sms<B: ExtriCategory + ?Sized>(
    bk: &B,
    x: &[ObjClass],
    scope_universe: &[ObjClass],
) -> Result<(bool, Vec<String>)> {
    let (members, skipped) = peel_membership(bk, x, scope_universe, PEEL_DEPTH_CAP)?;
    Ok((members.len() == scope_universe.len(), skipped))
}

// -- torsion pairs in the derived window ---------------------------------------

use crate::derived::{DMor, DerivedBackend};

/// Which torsion-pair shape to verify.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TorsionShape {
    /// (Filt(S), S^⊥)
    FiltPerp,
    /// (^⊥S, Filt(S))
    PerpFilt,
}

pub struct TorsionOutcome {
    pub holds: bool,
    pub failures: Vec<String>,
    pub skipped: Vec<String>,
    /// per test object: the witness triangle u → C → v → u[1]
    pub witnesses: Vec<(ObjClass, ObjClass, ObjClass)>,
}

/// The composite deflation q: M → P with P ∈ S^⊥, built by repeatedly
/// coning off the first nonzero morphism from an S-member (each such
/// morphism has a cone of strictly smaller S-length).
fn perp_quotient_mor(
    bk: &DerivedBackend,
    m: &ObjClass,
    s: &[ObjClass],
    depth: usize,
) -> Result<DMor> {
    if depth == 0 {
        return Err(Error::CapExceeded {
            what: "derived approximation recursion",
            needed: 64,
            cap: 64,
        });
    }
    for sm in s {
        let space = bk.formal_space(sm, m)?;
        if space.dim() == 0 {
            continue;
        }
        let mut coords = vec![0; space.dim()];
        coords[0] = 1;
        let f = DMor {
            source: sm.clone(),
            target: m.clone(),
            coords,
        };
        let (h, to_cone, _) = bk.cone(&f)?;
        let rec = perp_quotient_mor(bk, &h, s, depth - 1)?;
        return bk.compose(&rec, &to_cone);
    }
    bk.identity(m)
}

/// The composite inflation j: U → M with U ∈ ^⊥S, dual recursion via
/// cocones of morphisms onto S-members.
fn perp_sub_mor(bk: &DerivedBackend, m: &ObjClass, s: &[ObjClass], depth: usize) -> Result<DMor> {
    if depth == 0 {
        return Err(Error::CapExceeded {
            what: "derived approximation recursion",
            needed: 64,
            cap: 64,
        });
    }
    for sm in s {
        let space = bk.formal_space(m, sm)?;
        if space.dim() == 0 {
            continue;
        }
        let mut coords = vec![0; space.dim()];
        coords[0] = 1;
        let f = DMor {
            source: m.clone(),
            target: sm.clone(),
            coords,
        };
        // cocone: triangle cone(f)[−1] → M → s
        let (_, _, from_cone) = bk.cone(&f)?;
        let j = from_cone.shifted(-1); // cone(f)[−1] → M
        let rec = perp_sub_mor(bk, &j.source, s, depth - 1)?;
        return bk.compose(&j, &rec);
    }
    bk.identity(m)
}

/// Check a torsion pair of the given shape on the listed test objects.
///
/// Orthogonality Hom(U, V) = 0 is table-checked over the supports; each test
/// object receives a witness triangle u → C → v → u[1] built from the
/// approximation recursion, with u, v membership asserted. Objects whose
/// construction would leave the window are reported in `skipped`, never
/// counted as passes.
pub fn is_torsion_pair_tri(
    bk: &DerivedBackend,
    s: &[ObjClass],
    filt_support: &Subcat,
    shape: TorsionShape,
    test_objects: &[ObjClass],
) -> Result<TorsionOutcome> {
    let window_scope = Subcat::from_classes(&bk.window_universe(bk.lo, bk.hi));
    let perp_side = match shape {
        TorsionShape::FiltPerp => perp(bk, s, PerpKind::HomRight, &window_scope)?,
        TorsionShape::PerpFilt => perp(bk, s, PerpKind::HomLeft, &window_scope)?,
    };
    let (u_sub, v_sub) = match shape {
        TorsionShape::FiltPerp => (filt_support.clone(), perp_side),
        TorsionShape::PerpFilt => (perp_side, filt_support.clone()),
    };
    let mut failures = Vec::new();
    let mut skipped = Vec::new();
    // (a) Hom(U, V) = 0
    for um in u_sub.members() {
        for vm in v_sub.members() {
            match bk.hom_dim(&um, &vm) {
                Ok(0) => {}
                Ok(_) => failures.push(format!(
                    "Hom({}, {}) is nonzero",
                    bk.class_label(&um),
                    bk.class_label(&vm)
                )),
                Err(Error::Window { .. }) => skipped.push(format!(
                    "orthogonality of ({}, {}) not representable in the window",
                    bk.class_label(&um),
                    bk.class_label(&vm)
                )),
                Err(e) => return Err(e),
            }
        }
    }
    // (b) witness triangles
    let mut witnesses = Vec::new();
    for c in test_objects {
        let attempt = (|| -> Result<(ObjClass, ObjClass)> {
            match shape {
                TorsionShape::FiltPerp => {
                    let q = perp_quotient_mor(bk, c, s, 64)?;
                    let v = q.target.clone();
                    let (cone_q, _, _) = bk.cone(&q)?;
                    let u = bk.shift_obj(&cone_q, -1)?;
                    Ok((u, v))
                }
                TorsionShape::PerpFilt => {
                    let j = perp_sub_mor(bk, c, s, 64)?;
                    let u = j.source.clone();
                    let (v, _, _) = bk.cone(&j)?;
                    Ok((u, v))
                }
            }
        })();
        match attempt {
            Ok((u, v)) => {
                if !u_sub.contains(&u) {
                    failures.push(format!(
                        "triangle for {} has u = {} outside the torsion class",
                        bk.class_label(c),
                        bk.class_label(&u)
                    ));
                } else if !v_sub.contains(&v) {
                    failures.push(format!(
                        "triangle for {} has v = {} outside the torsion-free class",
                        bk.class_label(c),
                        bk.class_label(&v)
                    ));
                } else {
                    witnesses.push((c.clone(), u, v));
                }
            }
            Err(Error::Window { shift, lo, hi }) => skipped.push(format!(
                "triangle for {} needs shift {shift} outside [{lo}, {hi}]",
                bk.class_label(c)
            )),
            Err(e) => return Err(e),
        }
    }
    Ok(TorsionOutcome {
        holds: failures.is_empty(),
        failures,
        skipped,
        witnesses,
    })
}

/// Exhaustive fallback for one object: search u over bounded sums of the
/// torsion-class support and all morphisms u → C, testing cone membership.
pub fn torsion_triangle_search(
    bk: &DerivedBackend,
    c: &ObjClass,
    u_sub: &Subcat,
    v_sub: &Subcat,
    sum_bound: usize,
) -> Result<Option<(ObjClass, ObjClass)>> {
    for u in multisets_over(&u_sub.support_vec(), sum_bound) {
        let space = match bk.formal_space(&u, c) {
            Ok(s) => s,
            Err(Error::Window { .. }) => continue,
            Err(e) => return Err(e),
        };
        let p = bk.p();
        let needed = (p as u128).saturating_pow(space.dim() as u32);
        if needed > (1u128 << 12) {
            continue;
        }
        for coords in crate::quiver::CoeffIter::new(p, space.dim()) {
            let f = DMor {
                source: u.clone(),
                target: c.clone(),
                coords,
            };
            match bk.cone_object(&f) {
                Ok(v) => {
                    if v_sub.contains(&v) {
                        return Ok(Some((u, v)));
                    }
                }
                Err(Error::Window { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    Ok(None)
}


#[cfg(test)]
mod derived_fixture_tests {
    use super::*;
    use crate::catalog::build_catalog;
    use crate::derived::DerivedBackend;
    use crate::quiver::test_support::a3_right;

    fn backend() -> DerivedBackend {
        let cat = build_catalog(a3_right()).unwrap();
        DerivedBackend::new(ExactBackend::new(cat), -3, 2).unwrap()
    }

    fn cls(bk: &DerivedBackend, label: &str) -> ObjClass {
        ObjClass::from_parts(vec![bk.exact.catalog.parse_part(label).unwrap()])
    }

    fn fixture_s(bk: &DerivedBackend) -> Vec<ObjClass> {
        ["P1", "S1[-1]", "S2[-1]", "S3[-1]"]
            .iter()
            .map(|l| cls(bk, l))
            .collect()
    }

    #[test]
    fn trapezoid_membership() {
        let bk = backend();
        let s = fixture_s(&bk);
        let targets = bk.window_universe(bk.lo, bk.hi);
        let (members, skipped) =
            peel_membership(&bk, &s, &targets, PEEL_DEPTH_CAP).unwrap();
        let mut labels: Vec<String> = members
            .iter()
            .map(|m| bk.exact.catalog.class_label(m))
            .collect();
        labels.sort();
        // the trapezoidal area of the AR quiver between the S-diagonal
        // and P1: cross-checked once against the mesh, then pinned
        let mut expect = vec![
            "S3[-1]", "S2[-1]", "S1[-1]", "P1", "P2[-1]", "I2[-1]", "P2", "P1[-1]", "S3",
        ];
        expect.sort();
        assert_eq!(labels, expect);
        assert!(skipped.is_empty(), "skipped: {skipped:?}");
    }

    #[test]
    fn window_top_row_is_sms_on_inner_window() {
        let bk = backend();
        let cat = &bk.exact.catalog;
        let p1 = cat.id_of_label("P1").unwrap();
        let top_row: Vec<ObjClass> = bk
            .tau_orbit_in_window((p1, 0))
            .into_iter()
            .map(|part| ObjClass::from_parts(vec![part]))
            .collect();
        assert_eq!(top_row.len(), 12);
        let (lo, hi) = bk.inner_window();
        let inner = bk.window_universe(lo, hi);
        let (yes, skipped) = is_sms(&bk, &top_row, &inner).unwrap();
        assert!(yes, "top row must generate the inner window");
        // steps through the window edge get recorded, not silently dropped
        let _ = skipped;
    }

    #[test]
    fn torsion_pairs_on_the_fixture() {
        let bk = backend();
        let s = fixture_s(&bk);
        let targets = bk.window_universe(bk.lo, bk.hi);
        let (members, _) = peel_membership(&bk, &s, &targets, PEEL_DEPTH_CAP).unwrap();
        let filt_support = Subcat::from_classes(&members);
        let (lo, hi) = bk.inner_window();
        let inner = bk.window_universe(lo, hi);
        let out = is_torsion_pair_tri(&bk, &s, &filt_support, TorsionShape::FiltPerp, &inner)
            .unwrap();
        assert!(out.holds, "failures: {:?}", out.failures);
        let out2 = is_torsion_pair_tri(&bk, &s, &filt_support, TorsionShape::PerpFilt, &inner)
            .unwrap();
        assert!(out2.holds, "failures: {:?}", out2.failures);
    }

    #[test]
    fn torsion_reduction_shift_identity() {
        // S^⊥1[1] = S^⊥ on the inner window: M ∈ S^⊥ iff M[−1] ∈ S^⊥1
        let bk = backend();
        let s = fixture_s(&bk);
        let (lo, hi) = bk.inner_window();
        for m in bk.window_universe(lo, hi) {
            let in_hom_perp = s
                .iter()
                .all(|sm| bk.hom_dim(sm, &m).unwrap() == 0);
            let m_down = m.shifted(-1);
            let in_ext_perp = s
                .iter()
                .all(|sm| bk.e_dim(sm, &m_down).unwrap() == 0);
            assert_eq!(
                in_hom_perp,
                in_ext_perp,
                "reduction fails at {}",
                bk.exact.catalog.class_label(&m)
            );
        }
    }

    #[test]
    fn thick_closure_of_shift_stable_semibrick() {
        // if X[±1] stay in Filt(X) where representable, the closure is
        // shift-stable on the inner window
        let bk = backend();
        let cat = &bk.exact.catalog;
        let p1 = cat.id_of_label("P1").unwrap();
        let top_row: Vec<ObjClass> = bk
            .tau_orbit_in_window((p1, 0))
            .into_iter()
            .map(|part| ObjClass::from_parts(vec![part]))
            .collect();
        let targets = bk.window_universe(bk.lo, bk.hi);
        let (members, _) = peel_membership(&bk, &top_row, &targets, PEEL_DEPTH_CAP).unwrap();
        let closure = Subcat::from_classes(&members);
        let (lo, hi) = bk.inner_window();
        for m in bk.window_universe(lo, hi) {
            if closure.contains(&m) {
                for n in [-1i32, 1] {
                    let shifted = m.shifted(n);
                    let (_, sshift) = shifted.parts()[0];
                    if sshift >= lo && sshift <= hi {
                        assert!(
                            closure.contains(&shifted),
                            "closure not shift-stable at {}",
                            bk.exact.catalog.class_label(&shifted)
                        );
                    }
                }
            }
        }
    }
}
