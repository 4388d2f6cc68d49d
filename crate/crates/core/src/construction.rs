//! The two m-ovoid families.
//!
//! - [`Family::QMinus1`]: q ≡ 3 (mod 4), split model, m = (q−1)/2,
//!   `M = S ∪ O(1,0,1,1) ∪ O(1,1,μ,0) ∪ O(1,1,0,1) ∪ O(−1,1,ad,a)`.
//! - [`Family::QPlus1`]: q ≡ 1 (mod 4), trace model, m = (q+1)/2,
//!   `M = O(0,0,1) ∪ O(1,1,−1/2) ∪ O(0,1,δ) ∪ S`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldCtx, Fq, Fq2};
use crate::geometry::{ModelKind, ProjPoint, Quadric};
use crate::group::{GroupAction, GroupError, NamedOrbit, OrbitClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("no admissible a: no nonzero a in GF({0}) has 1 + a^2 a nonzero square")]
    NoValidA(u32),
    #[error("family {family} needs q ≡ {residue} (mod 4), got q = {q}")]
    WrongResidue { family: Family, residue: u32, q: u32 },
    #[error("invalid parameters: {0}")]
    InvalidParams(&'static str),
    #[error("parts {0} and {1} overlap")]
    Overlap(String, String),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    #[serde(rename = "qminus1")]
    QMinus1,
    #[serde(rename = "qplus1")]
    QPlus1,
}

impl Family {
    pub fn model(self) -> ModelKind {
        match self {
            Family::QMinus1 => ModelKind::Split,
            Family::QPlus1 => ModelKind::Trace,
        }
    }

    /// The residue of q mod 4 the family applies to.
    pub fn residue(self) -> u32 {
        match self {
            Family::QMinus1 => 3,
            Family::QPlus1 => 1,
        }
    }

    pub fn m(self, q: u32) -> u32 {
        match self {
            Family::QMinus1 => (q - 1) / 2,
            Family::QPlus1 => (q + 1) / 2,
        }
    }

    pub fn for_q(q: u32) -> Family {
        if q % 4 == 3 {
            Family::QMinus1
        } else {
            Family::QPlus1
        }
    }

    fn check(self, q: u32) -> Result<(), ConstructionError> {
        if q % 4 != self.residue() {
            return Err(ConstructionError::WrongResidue { family: self, residue: self.residue(), q });
        }
        Ok(())
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::QMinus1 => "qminus1",
            Family::QPlus1 => "qplus1",
        })
    }
}

impl FromStr for Family {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "qminus1" => Ok(Family::QMinus1),
            "qplus1" => Ok(Family::QPlus1),
            other => Err(format!("unknown family {other:?} (expected qminus1 or qplus1)")),
        }
    }
}

/// Parameters of the split construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitParams {
    pub a: Fq,
    pub d: Fq,
    pub mu: Fq2,
}

impl SplitParams {
    /// Canonical choice: smallest admissible a, canonical root d, smallest μ.
    pub fn select(ctx: &FieldCtx) -> Result<Self, ConstructionError> {
        Family::QMinus1.check(ctx.q())?;
        let a = admissible_a(ctx).into_iter().next().ok_or(ConstructionError::NoValidA(ctx.q()))?;
        Self::with_a(ctx, a)
    }

    /// Canonical d and μ for a caller-chosen a.
    pub fn with_a(ctx: &FieldCtx, a: Fq) -> Result<Self, ConstructionError> {
        Family::QMinus1.check(ctx.q())?;
        if a.is_zero() || ctx.sgn(ctx.add(Fq::ONE, ctx.mul(a, a))) != 1 {
            return Err(ConstructionError::InvalidParams("1 + a^2 must be a nonzero square"));
        }
        let d = ctx.sqrt(d_squared(ctx, a)).expect("a^-2 + 1 = (1 + a^2)/a^2 is a square");
        let mu = norm_minus_one(ctx)[0];
        Ok(SplitParams { a, d, mu })
    }

    /// Validate an arbitrary (a, d, μ).
    pub fn new(ctx: &FieldCtx, a: Fq, d: Fq, mu: Fq2) -> Result<Self, ConstructionError> {
        let base = Self::with_a(ctx, a)?;
        if ctx.mul(d, d) != d_squared(ctx, a) {
            return Err(ConstructionError::InvalidParams("d^2 must equal a^-2 + 1"));
        }
        if ctx.norm(mu) != ctx.neg(Fq::ONE) {
            return Err(ConstructionError::InvalidParams("mu must have norm -1"));
        }
        Ok(SplitParams { d, mu, ..base })
    }

    /// R = (a, −a, 0, 1).
    pub fn r_point(&self, ctx: &FieldCtx) -> ProjPoint {
        ProjPoint::split(ctx, self.a, ctx.neg(self.a), Fq2::ZERO, Fq::ONE).expect("z = 1")
    }
}

fn d_squared(ctx: &FieldCtx, a: Fq) -> Fq {
    let ai = ctx.inv(a).expect("a nonzero");
    ctx.add(ctx.mul(ai, ai), Fq::ONE)
}

/// All nonzero a with sgn(1 + a²) = +1, in encoding order.
pub fn admissible_a(ctx: &FieldCtx) -> Vec<Fq> {
    ctx.elements()
        .filter(|&a| !a.is_zero() && ctx.sgn(ctx.add(Fq::ONE, ctx.mul(a, a))) == 1)
        .collect()
}

/// All μ with N(μ) = −1, in encoding order.
pub fn norm_minus_one(ctx: &FieldCtx) -> Vec<Fq2> {
    let m1 = ctx.neg(Fq::ONE);
    ctx.elements2().filter(|&x| ctx.norm(x) == m1).collect()
}

/// Parameters of the trace construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceParams {
    pub gamma: Fq2,
    /// γ^((q+1)/2), which satisfies δ + δ^q = 0.
    pub delta: Fq2,
    /// 1 if q ≡ 1 (mod 8), 3 if q ≡ 5 (mod 8).
    pub epsilon: u64,
}

impl TraceParams {
    pub fn new(ctx: &FieldCtx) -> Result<Self, ConstructionError> {
        let q = ctx.q();
        Family::QPlus1.check(q)?;
        let delta = ctx.exp((q as u64 + 1) / 2);
        debug_assert!(ctx.trace(delta).is_zero());
        Ok(TraceParams { gamma: ctx.gamma(), delta, epsilon: if q % 8 == 1 { 1 } else { 3 } })
    }

    /// Whether `w` lies in the cyclotomic class of index (q+1)/2 and modulus
    /// 2(q+1).
    pub fn w_admissible(&self, ctx: &FieldCtx, w: Fq2) -> bool {
        let q = ctx.q() as u64;
        ctx.cyclotomic_index(w, 2 * (q + 1)).is_ok_and(|i| i == (q + 1) / 2)
    }
}

/// A set of quadric point ids with a declared m.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    pub model: ModelKind,
    /// Sorted, duplicate-free.
    pub ids: Vec<u32>,
    pub m: u32,
}

impl PointSet {
    pub fn new(model: ModelKind, mut ids: Vec<u32>, m: u32) -> Self {
        ids.sort_unstable();
        ids.dedup();
        PointSet { model, ids, m }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn contains(&self, id: u32) -> bool {
        self.ids.binary_search(&id).is_ok()
    }

    /// Membership bitmap over `0..n`.
    pub fn bitmap(&self, n: usize) -> Vec<bool> {
        let mut b = vec![false; n];
        for &i in &self.ids {
            b[i as usize] = true;
        }
        b
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Part {
    pub name: String,
    pub ids: Vec<u32>,
}

/// A constructed m-ovoid together with its parts.
#[derive(Debug, Clone)]
pub struct Construction {
    pub family: Family,
    pub set: PointSet,
    pub parts: Vec<Part>,
    pub split: Option<SplitParams>,
    pub trace: Option<TraceParams>,
}

impl Construction {
    pub fn part_sizes(&self) -> Vec<(String, usize)> {
        self.parts.iter().map(|p| (p.name.clone(), p.ids.len())).collect()
    }
}

fn check_model(quadric: &Quadric, family: Family) -> Result<(), ConstructionError> {
    family.check(quadric.ctx().q())?;
    if quadric.model().kind() != family.model() {
        return Err(GroupError::ModelMismatch.into());
    }
    Ok(())
}

/// S = {(x1, x2, y, 1) : sgn(1 + a²x1x2) = +1, x1x2y ≠ 0}.
pub fn build_s_split(quadric: &Quadric, params: &SplitParams) -> Result<PointSet, ConstructionError> {
    check_model(quadric, Family::QMinus1)?;
    let f = quadric.ctx();
    let a2 = f.mul(params.a, params.a);
    let ids: Vec<u32> = (0..quadric.len() as u32)
        .into_par_iter()
        .filter(|&id| {
            let (x1, x2, y, z) = quadric.point(id).split_coords().expect("split model");
            if z.is_zero() || x1.is_zero() || x2.is_zero() || y.is_zero() {
                return false;
            }
            // z² + a²x1x2 is the homogeneous version of 1 + a²x1x2 at z = 1
            f.sgn(f.add(f.mul(z, z), f.mul(a2, f.mul(x1, x2)))) == 1
        })
        .collect();
    Ok(PointSet::new(ModelKind::Split, ids, Family::QMinus1.m(f.q())))
}

/// S = {(1, y, y⁻¹(w − 1/2)) : y ≠ 0, w admissible}.
pub fn build_s_trace(quadric: &Quadric, params: &TraceParams) -> Result<PointSet, ConstructionError> {
    check_model(quadric, Family::QPlus1)?;
    let f = quadric.ctx();
    let half = Fq2::from(f.inv(f.from_int(2)).expect("q odd"));
    let ws: Vec<Fq2> = f.elements2().filter(|&w| params.w_admissible(f, w)).collect();
    let ys: Vec<Fq2> = f.elements2().filter(|y| !y.is_zero()).collect();
    let ids: Vec<u32> = ys
        .par_iter()
        .flat_map_iter(|&y| {
            let yi = f.inv2(y).expect("nonzero");
            ws.iter().map(move |&w| {
                let z = f.mul2(yi, f.sub2(w, half));
                let p = ProjPoint::trace(f, Fq::ONE, y, z).expect("x = 1");
                quadric.id_of(&p).expect("members of S lie on the quadric")
            })
        })
        .collect();
    Ok(PointSet::new(ModelKind::Trace, ids, Family::QPlus1.m(f.q())))
}

fn assemble(
    family: Family,
    q: u32,
    parts: Vec<Part>,
) -> Result<(PointSet, Vec<Part>), ConstructionError> {
    let mut all: Vec<u32> = Vec::new();
    for (i, a) in parts.iter().enumerate() {
        for b in &parts[i + 1..] {
            let (small, big) = if a.ids.len() < b.ids.len() { (a, b) } else { (b, a) };
            if small.ids.iter().any(|x| big.ids.binary_search(x).is_ok()) {
                return Err(ConstructionError::Overlap(a.name.clone(), b.name.clone()));
            }
        }
        all.extend_from_slice(&a.ids);
    }
    Ok((PointSet::new(family.model(), all, family.m(q)), parts))
}

/// M for q ≡ 3 (mod 4).
pub fn build_movoid_split(
    action: &GroupAction,
    params: &SplitParams,
) -> Result<Construction, ConstructionError> {
    let quadric = action.quadric();
    check_model(quadric, Family::QMinus1)?;
    let mut parts = vec![Part { name: "S".into(), ids: build_s_split(quadric, params)?.ids }];
    for n in [
        NamedOrbit::OneZeroOneOne,
        NamedOrbit::OneOneMu,
        NamedOrbit::Conic,
        NamedOrbit::MinusOneOneAdA,
    ] {
        let o = action.named_orbit(n, Some(params))?;
        parts.push(Part { name: n.name().into(), ids: o.members });
    }
    let (set, parts) = assemble(Family::QMinus1, quadric.ctx().q(), parts)?;
    Ok(Construction { family: Family::QMinus1, set, parts, split: Some(*params), trace: None })
}

/// M for q ≡ 1 (mod 4).
pub fn build_movoid_trace(action: &GroupAction) -> Result<Construction, ConstructionError> {
    let quadric = action.quadric();
    check_model(quadric, Family::QPlus1)?;
    let params = TraceParams::new(quadric.ctx())?;
    let mut parts = Vec::new();
    for n in [
        NamedOrbit::TraceZeroZeroOne,
        NamedOrbit::TraceOneOneMinusHalf,
        NamedOrbit::TraceZeroOneDelta,
    ] {
        let o = action.named_orbit(n, None)?;
        parts.push(Part { name: n.name().into(), ids: o.members });
    }
    parts.push(Part { name: "S".into(), ids: build_s_trace(quadric, &params)?.ids });
    let (set, parts) = assemble(Family::QPlus1, quadric.ctx().q(), parts)?;
    Ok(Construction { family: Family::QPlus1, set, parts, split: None, trace: Some(params) })
}

/// The two sides of the equivalent descriptions of admissible w = z + 1/2:
/// `(w admissible, N(z) − 1/4 ∈ C_ε^(4,q) and z^q + z + 1 = 0)`, the class
/// on the right taken inside GF(q).
pub fn w_condition_equiv(ctx: &FieldCtx, params: &TraceParams, z: Fq2) -> (bool, bool) {
    let half = Fq2::from(ctx.inv(ctx.from_int(2)).expect("q odd"));
    let quarter = ctx.inv(ctx.from_int(4)).expect("q odd");
    let lhs = params.w_admissible(ctx, ctx.add2(z, half));
    let on_line = ctx.add2(ctx.add2(ctx.frobenius(z), z), Fq2::ONE).is_zero();
    let t = ctx.sub(ctx.norm(z), quarter);
    let rhs = on_line && ctx.subfield_cyclotomic_index(t, 4).is_ok_and(|i| i == params.epsilon);
    (lhs, rhs)
}

/// Outcome of comparing the orbit choices of the split construction with
/// their description through R = (a, −a, 0, 1).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CharacterizationReport {
    /// Long orbits with x1x2y ≠ 0 that were examined.
    pub long_orbits: usize,
    /// Representatives of long orbits where "contained in M" and "meets R⊥"
    /// disagree.
    pub long_mismatches: Vec<u32>,
    /// Short orbits of the form O(b, −b, c, 1) contained in M.
    pub short_orbits: usize,
    /// Representatives of those without a point of R⊥ having y ∈ GF(q).
    pub short_mismatches: Vec<u32>,
}

impl CharacterizationReport {
    pub fn holds(&self) -> bool {
        self.long_mismatches.is_empty() && self.short_mismatches.is_empty()
    }
}

/// Diagnostic: long orbits in M are exactly those meeting R⊥, and short
/// orbits O(b, −b, c, 1) in M contain a point of R⊥ with rational y.
///
/// Restricted to orbits with x1x2y ≠ 0; orbits with a zero coordinate
/// are chosen individually by name.
pub fn geometric_characterization(
    action: &GroupAction,
    construction: &Construction,
) -> Result<CharacterizationReport, ConstructionError> {
    let params = construction.split.ok_or(GroupError::ModelMismatch)?;
    let quadric = action.quadric();
    let f = quadric.ctx();
    let r = params.r_point(f);
    let mut perp = vec![false; quadric.len()];
    for id in quadric.perp_of(r.coords()) {
        perp[id as usize] = true;
    }
    let in_m = construction.set.bitmap(quadric.len());
    let mut report = CharacterizationReport::default();
    for orbit in action.census() {
        let (x1, x2, y, z) = quadric.point(orbit.representative).split_coords().expect("split");
        if x1.is_zero() || x2.is_zero() || y.is_zero() {
            continue;
        }
        let contained = orbit.members.iter().all(|&i| in_m[i as usize]);
        match OrbitClass::of_len(quadric.q(), orbit.len()) {
            OrbitClass::Long => {
                report.long_orbits += 1;
                let meets = orbit.members.iter().any(|&i| perp[i as usize]);
                if meets != contained {
                    report.long_mismatches.push(orbit.representative);
                }
            }
            OrbitClass::Short if contained && !z.is_zero() => {
                let antipodal = orbit.members.iter().any(|&i| {
                    let (x1, x2, _, z) = quadric.point(i).split_coords().expect("split");
                    !z.is_zero() && x2 == f.neg(x1)
                });
                if !antipodal {
                    continue;
                }
                report.short_orbits += 1;
                let rational = orbit.members.iter().any(|&i| {
                    let (_, _, y, _) = quadric.point(i).split_coords().expect("split");
                    perp[i as usize] && y.is_base()
                });
                if !rational {
                    report.short_mismatches.push(orbit.representative);
                }
            }
            _ => {}
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::make_field_ctx;
    use crate::geometry::QuadricModel;
    use std::sync::Arc;

    fn quadric(p: u32, k: u32, kind: ModelKind) -> Quadric {
        Quadric::new(QuadricModel::new(Arc::new(make_field_ctx(p, k).unwrap()), kind))
    }

    #[test]
    fn split_parameter_selection() {
        let f7 = make_field_ctx(7, 1).unwrap();
        let p = SplitParams::select(&f7).unwrap();
        assert_eq!((p.a, p.d), (f7.from_int(1), f7.from_int(3)));
        assert_eq!(p.mu, Fq2::new(f7.from_int(2), f7.from_int(2)));
        let f11 = make_field_ctx(11, 1).unwrap();
        assert_eq!(SplitParams::select(&f11).unwrap().a, f11.from_int(2));
        let f3 = make_field_ctx(3, 1).unwrap();
        assert_eq!(SplitParams::select(&f3), Err(ConstructionError::NoValidA(3)));
        let f5 = make_field_ctx(5, 1).unwrap();
        assert!(matches!(SplitParams::select(&f5), Err(ConstructionError::WrongResidue { .. })));
    }

    #[test]
    fn split_parameter_validation() {
        let f = make_field_ctx(7, 1).unwrap();
        // 1 + 3² = 3 is a nonsquare mod 7
        assert!(SplitParams::with_a(&f, f.from_int(3)).is_err());
        assert!(SplitParams::with_a(&f, Fq::ZERO).is_err());
        let p = SplitParams::select(&f).unwrap();
        assert!(SplitParams::new(&f, p.a, f.neg(p.d), p.mu).is_ok());
        assert!(SplitParams::new(&f, p.a, f.from_int(1), p.mu).is_err());
        assert!(SplitParams::new(&f, p.a, p.d, Fq2::ONE).is_err());
    }

    #[test]
    fn trace_params() {
        let f = make_field_ctx(5, 1).unwrap();
        let t = TraceParams::new(&f).unwrap();
        assert_eq!(t.epsilon, 3);
        assert!(f.trace(t.delta).is_zero());
        let f17 = make_field_ctx(17, 1).unwrap();
        assert_eq!(TraceParams::new(&f17).unwrap().epsilon, 1);
        assert!(TraceParams::new(&make_field_ctx(7, 1).unwrap()).is_err());
    }

    #[test]
    fn split_sizes() {
        for (q, s, parts) in [(7u32, 48usize, [48, 48, 24, 6, 24]), (11, 360, [360, 120, 60, 10, 60])] {
            let quad = quadric(q, 1, ModelKind::Split);
            let action = GroupAction::new(&quad).unwrap();
            let params = SplitParams::select(quad.ctx()).unwrap();
            assert_eq!(build_s_split(&quad, &params).unwrap().len(), s);
            let c = build_movoid_split(&action, &params).unwrap();
            let sizes: Vec<usize> = c.parts.iter().map(|p| p.ids.len()).collect();
            assert_eq!(sizes, parts);
            let q = q as usize;
            assert_eq!(c.set.len(), (q - 1) / 2 * (q * q + 1));
            assert_eq!(c.set.m as usize, (q - 1) / 2);
        }
    }

    #[test]
    fn s_split_members_have_nonzero_coordinates() {
        let quad = quadric(7, 1, ModelKind::Split);
        let params = SplitParams::select(quad.ctx()).unwrap();
        for &id in &build_s_split(&quad, &params).unwrap().ids {
            let (x1, x2, y, z) = quad.point(id).split_coords().unwrap();
            assert!(!x1.is_zero() && !x2.is_zero() && !y.is_zero() && !z.is_zero());
        }
    }

    #[test]
    fn trace_sizes() {
        for (p, k, s) in [(5u32, 1u32, 48usize), (3, 2, 320), (13, 1, 1008)] {
            let quad = quadric(p, k, ModelKind::Trace);
            let action = GroupAction::new(&quad).unwrap();
            let c = build_movoid_trace(&action).unwrap();
            let q = quad.q() as usize;
            assert_eq!(c.parts[3].ids.len(), s);
            assert_eq!(c.set.len(), (q * q + 1) * (q + 1) / 2);
        }
        let quad = quadric(5, 1, ModelKind::Trace);
        let c = build_movoid_trace(&GroupAction::new(&quad).unwrap()).unwrap();
        let sizes: Vec<usize> = c.parts.iter().map(|p| p.ids.len()).collect();
        assert_eq!(sizes, [6, 12, 12, 48]);
    }

    #[test]
    fn wrong_family_for_quadric() {
        let quad = quadric(5, 1, ModelKind::Trace);
        let f7 = make_field_ctx(7, 1).unwrap();
        let params = SplitParams::select(&f7).unwrap();
        assert!(build_s_split(&quad, &params).is_err());
    }

    fn invariant(action: &GroupAction, set: &PointSet) -> bool {
        action
            .generator_permutations()
            .iter()
            .all(|perm| set.ids.iter().all(|&i| set.contains(perm[i as usize])))
    }

    #[test]
    fn constructions_are_a_invariant() {
        let quad = quadric(7, 1, ModelKind::Split);
        let action = GroupAction::new(&quad).unwrap();
        let params = SplitParams::select(quad.ctx()).unwrap();
        let c = build_movoid_split(&action, &params).unwrap();
        assert!(invariant(&action, &c.set));
        assert!(invariant(&action, &build_s_split(&quad, &params).unwrap()));

        let quad = quadric(5, 1, ModelKind::Trace);
        let action = GroupAction::new(&quad).unwrap();
        let c = build_movoid_trace(&action).unwrap();
        assert!(invariant(&action, &c.set));
        let s = build_s_trace(&quad, c.trace.as_ref().unwrap()).unwrap();
        assert!(invariant(&action, &s));
    }

    #[test]
    fn independent_of_mu_and_d() {
        for q in [7, 11] {
            let quad = quadric(q, 1, ModelKind::Split);
            let action = GroupAction::new(&quad).unwrap();
            let f = quad.ctx();
            let base = SplitParams::select(f).unwrap();
            let reference = build_movoid_split(&action, &base).unwrap().set;
            for mu in norm_minus_one(f) {
                for d in [base.d, f.neg(base.d)] {
                    let p = SplitParams::new(f, base.a, d, mu).unwrap();
                    assert_eq!(build_movoid_split(&action, &p).unwrap().set, reference);
                }
            }
        }
    }

    #[test]
    fn w_condition_equivalence_small_q() {
        for (p, k) in [(5, 1), (3, 2)] {
            let f = make_field_ctx(p, k).unwrap();
            let t = TraceParams::new(&f).unwrap();
            let mut hits = 0;
            for z in f.elements2() {
                let (l, r) = w_condition_equiv(&f, &t, z);
                assert_eq!(l, r, "z = {z:?}");
                hits += l as usize;
            }
            assert_eq!(hits, (f.q() as usize - 1) / 2);
        }
    }

    #[test]
    fn characterization_diagnostic() {
        let quad = quadric(7, 1, ModelKind::Split);
        let action = GroupAction::new(&quad).unwrap();
        let c = build_movoid_split(&action, &SplitParams::select(quad.ctx()).unwrap()).unwrap();
        let r = geometric_characterization(&action, &c).unwrap();
        assert!(r.long_orbits > 0);
        assert!(r.holds(), "{r:?}");
    }
}
