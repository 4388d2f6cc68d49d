//! The prescribed group A = ⟨H, σ, τ⟩ of order 2(q² − 1) acting on Q(4,q).
//!
//! Split model (q ≡ 3 mod 4):
//!
//! - `T_{β,w}: (x1, x2, y, z) ↦ (β·x1, β⁻¹·x2, w·y, w^((q+1)/2)·z)`, β a
//!   nonzero square of GF(q), N(w) = 1
//! - `σ: (x1, x2, y, z) ↦ (x1, x2, −y^q, z)`
//! - `τ: (x1, x2, y, z) ↦ (x2, x1, y, −z)`
//!
//! Trace model:
//!
//! - `T_u: (x, y, z) ↦ (x, u·y, u⁻¹·z)`, u a nonzero square of GF(q²)
//! - `σ: (x, y, z) ↦ (x, y^q, z^q)`
//! - `τ: (x, y, z) ↦ (x, z, y)`
//!
//! Elements are kept in the normal form `T_h ∘ σ^s ∘ τ^t`. Conjugating H by
//! the involutions gives σ T_{β,w} σ = T_{β,w^q}, τ T_{β,w} τ = T_{β⁻¹,w}
//! (split) and σ T_u σ = T_{u^q}, τ T_u τ = T_{u⁻¹} (trace).

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::construction::SplitParams;
use crate::field::{FieldCtx, Fq, Fq2};
use crate::geometry::{Coords, ModelKind, ProjPoint, Quadric, QuadricModel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("element or point belongs to the other quadric model")]
    ModelMismatch,
    #[error("point is not on the quadric")]
    OffQuadric,
    #[error("unknown orbit name {0:?}")]
    UnknownName(String),
    #[error("orbit {0} needs construction parameters")]
    ParamsRequired(&'static str),
    #[error("the split-model group needs q ≡ 3 (mod 4), got q = {0}")]
    WrongResidue(u32),
    #[error("invalid group element: {0}")]
    InvalidElement(&'static str),
}

/// The H-component of a group element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HPart {
    Split { beta: Fq, w: Fq2 },
    Trace { u: Fq2 },
}

/// `T_h ∘ σ^sigma ∘ τ^tau`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub h: HPart,
    pub sigma: bool,
    pub tau: bool,
}

impl GroupElement {
    pub fn model(&self) -> ModelKind {
        match self.h {
            HPart::Split { .. } => ModelKind::Split,
            HPart::Trace { .. } => ModelKind::Trace,
        }
    }
}

/// A, realized for one quadric model.
#[derive(Debug, Clone)]
pub struct PrescribedGroup {
    model: QuadricModel,
}

impl PrescribedGroup {
    pub fn new(model: QuadricModel) -> Result<Self, GroupError> {
        let q = model.ctx().q();
        // For q ≡ 1 (mod 4), T_{−1,−1} is the scalar −1 and H collapses.
        if model.kind() == ModelKind::Split && q % 4 != 3 {
            return Err(GroupError::WrongResidue(q));
        }
        Ok(PrescribedGroup { model })
    }

    pub fn model(&self) -> &QuadricModel {
        &self.model
    }

    fn ctx(&self) -> &FieldCtx {
        self.model.ctx()
    }

    /// |A| = 2(q² − 1).
    pub fn order(&self) -> usize {
        2 * self.ctx().ext_order() as usize
    }

    fn h_identity(&self) -> HPart {
        match self.model.kind() {
            ModelKind::Split => HPart::Split { beta: Fq::ONE, w: Fq2::ONE },
            ModelKind::Trace => HPart::Trace { u: Fq2::ONE },
        }
    }

    fn flags(&self, sigma: bool, tau: bool) -> GroupElement {
        GroupElement { h: self.h_identity(), sigma, tau }
    }

    pub fn identity(&self) -> GroupElement {
        self.flags(false, false)
    }

    pub fn sigma(&self) -> GroupElement {
        self.flags(true, false)
    }

    pub fn tau(&self) -> GroupElement {
        self.flags(false, true)
    }

    /// `T_{β,w}` of the split model.
    pub fn t_split(&self, beta: Fq, w: Fq2) -> Result<GroupElement, GroupError> {
        if self.model.kind() != ModelKind::Split {
            return Err(GroupError::ModelMismatch);
        }
        let f = self.ctx();
        if f.sgn(beta) != 1 {
            return Err(GroupError::InvalidElement("beta must be a nonzero square"));
        }
        if f.norm(w) != Fq::ONE {
            return Err(GroupError::InvalidElement("w must have norm 1"));
        }
        Ok(GroupElement { h: HPart::Split { beta, w }, sigma: false, tau: false })
    }

    /// `T_u` of the trace model.
    pub fn t_trace(&self, u: Fq2) -> Result<GroupElement, GroupError> {
        if self.model.kind() != ModelKind::Trace {
            return Err(GroupError::ModelMismatch);
        }
        match self.ctx().cyclotomic_index(u, 2) {
            Ok(0) => Ok(GroupElement { h: HPart::Trace { u }, sigma: false, tau: false }),
            _ => Err(GroupError::InvalidElement("u must be a nonzero square of GF(q^2)")),
        }
    }

    /// The generating set used for orbit closure.
    ///
    /// Split: `T_{g²,1}`, `T_{1,w0}`, σ, τ with g the canonical primitive
    /// element of GF(q) and w0 = γ^(q−1). Trace: `T_{γ²}`, `T_{w0}`, σ, τ.
    pub fn generators(&self) -> [GroupElement; 4] {
        let f = self.ctx();
        let q = f.q() as u64;
        let w0 = f.exp(q - 1);
        let first = match self.model.kind() {
            ModelKind::Split => {
                let g = f.base_primitive();
                let a = self.t_split(f.mul(g, g), Fq2::ONE).expect("g^2 is a square");
                let b = self.t_split(Fq::ONE, w0).expect("w0 has norm 1");
                [a, b]
            }
            ModelKind::Trace => {
                let a = self.t_trace(f.exp(2)).expect("gamma^2 is a square");
                let b = self.t_trace(w0).expect("gamma^(q-1) is a square");
                [a, b]
            }
        };
        [first[0], first[1], self.sigma(), self.tau()]
    }

    /// All H-components, in a deterministic order.
    pub fn h_parts(&self) -> Vec<HPart> {
        let f = self.ctx();
        match self.model.kind() {
            ModelKind::Split => {
                let circle: Vec<Fq2> = f.elements2().filter(|&w| f.norm(w) == Fq::ONE).collect();
                f.elements()
                    .filter(|&b| f.sgn(b) == 1)
                    .flat_map(|beta| circle.iter().map(move |&w| HPart::Split { beta, w }))
                    .collect()
            }
            ModelKind::Trace => (0..f.ext_order() / 2)
                .map(|i| HPart::Trace { u: f.exp(2 * i) })
                .collect(),
        }
    }

    /// Every element of A, each exactly once.
    pub fn elements(&self) -> Vec<GroupElement> {
        let mut out = Vec::with_capacity(self.order());
        for h in self.h_parts() {
            for sigma in [false, true] {
                for tau in [false, true] {
                    out.push(GroupElement { h, sigma, tau });
                }
            }
        }
        out
    }

    fn check_element(&self, g: &GroupElement) -> Result<(), GroupError> {
        if g.model() != self.model.kind() {
            return Err(GroupError::ModelMismatch);
        }
        Ok(())
    }

    fn apply_raw(&self, g: &GroupElement, c: &Coords) -> Coords {
        let f = self.ctx();
        let mut c = *c;
        match g.h {
            HPart::Split { beta, w } => {
                if g.tau {
                    c = [c[1], c[0], c[2], c[3], f.neg(c[4])];
                }
                if g.sigma {
                    let y = f.neg2(f.frobenius(Fq2::new(c[2], c[3])));
                    c[2] = y.u;
                    c[3] = y.v;
                }
                let q = f.q() as u64;
                let zw = f.pow2(w, (q + 1) / 2);
                debug_assert!(zw.is_base());
                let y = f.mul2(w, Fq2::new(c[2], c[3]));
                let binv = f.inv(beta).expect("beta is nonzero");
                [f.mul(beta, c[0]), f.mul(binv, c[1]), y.u, y.v, f.mul(zw.u, c[4])]
            }
            HPart::Trace { u } => {
                let (mut y, mut z) = (Fq2::new(c[1], c[2]), Fq2::new(c[3], c[4]));
                if g.tau {
                    std::mem::swap(&mut y, &mut z);
                }
                if g.sigma {
                    y = f.frobenius(y);
                    z = f.frobenius(z);
                }
                let y = f.mul2(u, y);
                let z = f.mul2(f.inv2(u).expect("u is nonzero"), z);
                [c[0], y.u, y.v, z.u, z.v]
            }
        }
    }

    /// The image of `p` under `g`, normalized.
    pub fn apply(&self, g: &GroupElement, p: &ProjPoint) -> Result<ProjPoint, GroupError> {
        self.check_element(g)?;
        if p.model() != self.model.kind() {
            return Err(GroupError::ModelMismatch);
        }
        Ok(self.model.point(self.apply_raw(g, p.coords())).expect("group elements are invertible"))
    }

    /// Conjugate of `h` by `σ^sigma τ^tau`.
    fn conjugate(&self, h: HPart, sigma: bool, tau: bool) -> HPart {
        let f = self.ctx();
        match h {
            HPart::Split { mut beta, mut w } => {
                if tau {
                    beta = f.inv(beta).expect("nonzero");
                }
                if sigma {
                    w = f.frobenius(w);
                }
                HPart::Split { beta, w }
            }
            HPart::Trace { mut u } => {
                if tau {
                    u = f.inv2(u).expect("nonzero");
                }
                if sigma {
                    u = f.frobenius(u);
                }
                HPart::Trace { u }
            }
        }
    }

    fn h_mul(&self, a: HPart, b: HPart) -> HPart {
        let f = self.ctx();
        match (a, b) {
            (HPart::Split { beta: b1, w: w1 }, HPart::Split { beta: b2, w: w2 }) => {
                HPart::Split { beta: f.mul(b1, b2), w: f.mul2(w1, w2) }
            }
            (HPart::Trace { u: u1 }, HPart::Trace { u: u2 }) => HPart::Trace { u: f.mul2(u1, u2) },
            _ => unreachable!("model checked by caller"),
        }
    }

    /// `g ∘ h`: apply `h` first.
    pub fn compose(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_element(g)?;
        self.check_element(h)?;
        let moved = self.conjugate(h.h, g.sigma, g.tau);
        Ok(GroupElement {
            h: self.h_mul(g.h, moved),
            sigma: g.sigma ^ h.sigma,
            tau: g.tau ^ h.tau,
        })
    }

    pub fn inverse(&self, g: &GroupElement) -> Result<GroupElement, GroupError> {
        self.check_element(g)?;
        let f = self.ctx();
        let hinv = match g.h {
            HPart::Split { beta, w } => HPart::Split {
                beta: f.inv(beta).expect("nonzero"),
                w: f.inv2(w).expect("nonzero"),
            },
            HPart::Trace { u } => HPart::Trace { u: f.inv2(u).expect("nonzero") },
        };
        Ok(GroupElement { h: self.conjugate(hinv, g.sigma, g.tau), sigma: g.sigma, tau: g.tau })
    }
}

/// An A-orbit on quadric point ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Orbit {
    /// Smallest id in the orbit.
    pub representative: u32,
    /// Sorted member ids.
    pub members: Vec<u32>,
}

impl Orbit {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, id: u32) -> bool {
        self.members.binary_search(&id).is_ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbitClass {
    /// Length (q² − 1)/2.
    Short,
    /// Length q² − 1.
    Long,
    Other,
}

impl OrbitClass {
    pub fn of_len(q: u64, len: usize) -> Self {
        let len = len as u64;
        if len == q * q - 1 {
            OrbitClass::Long
        } else if len == (q * q - 1) / 2 {
            OrbitClass::Short
        } else {
            OrbitClass::Other
        }
    }
}

/// Catalog of orbit representatives with a zero coordinate (and the one
/// used by the split construction).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NamedOrbit {
    /// O(1,0,0,0) = {e1, e2}
    E1,
    /// O(1,1,0,1): the conic y = 0 without e1, e2
    Conic,
    /// O(0,0,1,1)
    Y1Z1,
    /// O(1,1,μ,0), N(μ) = −1
    OneOneMu,
    /// O(1,−1,1,0)
    OneMinusOne,
    /// O(1,0,1,1)
    OneZeroOneOne,
    /// O(−1,0,1,1)
    MinusOneZeroOneOne,
    /// O(−1,1,ad,a)
    MinusOneOneAdA,
    /// O(0,0,1)
    TraceZeroZeroOne,
    /// O(0,0,δ)
    TraceZeroZeroDelta,
    /// O(0,1,δ)
    TraceZeroOneDelta,
    /// O(0,1,δ⁻¹)
    TraceZeroOneDeltaInv,
    /// O(1,1,−1/2)
    TraceOneOneMinusHalf,
}

impl NamedOrbit {
    pub const ALL: [NamedOrbit; 13] = [
        NamedOrbit::E1,
        NamedOrbit::Conic,
        NamedOrbit::Y1Z1,
        NamedOrbit::OneOneMu,
        NamedOrbit::OneMinusOne,
        NamedOrbit::OneZeroOneOne,
        NamedOrbit::MinusOneZeroOneOne,
        NamedOrbit::MinusOneOneAdA,
        NamedOrbit::TraceZeroZeroOne,
        NamedOrbit::TraceZeroZeroDelta,
        NamedOrbit::TraceZeroOneDelta,
        NamedOrbit::TraceZeroOneDeltaInv,
        NamedOrbit::TraceOneOneMinusHalf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NamedOrbit::E1 => "O(1,0,0,0)",
            NamedOrbit::Conic => "O(1,1,0,1)",
            NamedOrbit::Y1Z1 => "O(0,0,1,1)",
            NamedOrbit::OneOneMu => "O(1,1,mu,0)",
            NamedOrbit::OneMinusOne => "O(1,-1,1,0)",
            NamedOrbit::OneZeroOneOne => "O(1,0,1,1)",
            NamedOrbit::MinusOneZeroOneOne => "O(-1,0,1,1)",
            NamedOrbit::MinusOneOneAdA => "O(-1,1,ad,a)",
            NamedOrbit::TraceZeroZeroOne => "O(0,0,1)",
            NamedOrbit::TraceZeroZeroDelta => "O(0,0,delta)",
            NamedOrbit::TraceZeroOneDelta => "O(0,1,delta)",
            NamedOrbit::TraceZeroOneDeltaInv => "O(0,1,delta^-1)",
            NamedOrbit::TraceOneOneMinusHalf => "O(1,1,-1/2)",
        }
    }

    pub fn model(self) -> ModelKind {
        match self {
            NamedOrbit::TraceZeroZeroOne
            | NamedOrbit::TraceZeroZeroDelta
            | NamedOrbit::TraceZeroOneDelta
            | NamedOrbit::TraceZeroOneDeltaInv
            | NamedOrbit::TraceOneOneMinusHalf => ModelKind::Trace,
            _ => ModelKind::Split,
        }
    }

    /// The representative point; `params` supplies μ, a, d where needed.
    pub fn representative(
        self,
        ctx: &FieldCtx,
        params: Option<&SplitParams>,
    ) -> Result<ProjPoint, GroupError> {
        let one = Fq::ONE;
        let zero = Fq::ZERO;
        let m1 = ctx.neg(one);
        let y1 = Fq2::ONE;
        let need = || params.ok_or(GroupError::ParamsRequired(self.name()));
        let delta = ctx.exp((ctx.q() as u64 + 1) / 2);
        let p = match self {
            NamedOrbit::E1 => ProjPoint::split(ctx, one, zero, Fq2::ZERO, zero),
            NamedOrbit::Conic => ProjPoint::split(ctx, one, one, Fq2::ZERO, one),
            NamedOrbit::Y1Z1 => ProjPoint::split(ctx, zero, zero, y1, one),
            NamedOrbit::OneOneMu => ProjPoint::split(ctx, one, one, need()?.mu, zero),
            NamedOrbit::OneMinusOne => ProjPoint::split(ctx, one, m1, y1, zero),
            NamedOrbit::OneZeroOneOne => ProjPoint::split(ctx, one, zero, y1, one),
            NamedOrbit::MinusOneZeroOneOne => ProjPoint::split(ctx, m1, zero, y1, one),
            NamedOrbit::MinusOneOneAdA => {
                let s = need()?;
                ProjPoint::split(ctx, m1, one, Fq2::from(ctx.mul(s.a, s.d)), s.a)
            }
            NamedOrbit::TraceZeroZeroOne => ProjPoint::trace(ctx, zero, Fq2::ZERO, y1),
            NamedOrbit::TraceZeroZeroDelta => ProjPoint::trace(ctx, zero, Fq2::ZERO, delta),
            NamedOrbit::TraceZeroOneDelta => ProjPoint::trace(ctx, zero, y1, delta),
            NamedOrbit::TraceZeroOneDeltaInv => {
                ProjPoint::trace(ctx, zero, y1, ctx.inv2(delta).expect("nonzero"))
            }
            NamedOrbit::TraceOneOneMinusHalf => {
                let half = ctx.inv(ctx.from_int(2)).expect("q odd");
                ProjPoint::trace(ctx, one, y1, Fq2::from(ctx.neg(half)))
            }
        };
        Ok(p.expect("catalog points are nonzero"))
    }
}

impl fmt::Display for NamedOrbit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NamedOrbit {
    type Err = GroupError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        NamedOrbit::ALL
            .into_iter()
            .find(|n| n.name() == compact)
            .ok_or_else(|| GroupError::UnknownName(s.to_string()))
    }
}

/// The action of A on the enumerated points of one quadric.
pub struct GroupAction<'a> {
    group: PrescribedGroup,
    quadric: &'a Quadric,
    generator_perms: Vec<Vec<u32>>,
}

impl<'a> GroupAction<'a> {
    pub fn new(quadric: &'a Quadric) -> Result<Self, GroupError> {
        let group = PrescribedGroup::new(quadric.model().clone())?;
        let mut action = GroupAction { group, quadric, generator_perms: Vec::new() };
        action.generator_perms =
            action.group.generators().iter().map(|g| action.permutation(g)).collect();
        Ok(action)
    }

    pub fn group(&self) -> &PrescribedGroup {
        &self.group
    }

    pub fn quadric(&self) -> &'a Quadric {
        self.quadric
    }

    /// `g` as a permutation of quadric ids.
    pub fn permutation(&self, g: &GroupElement) -> Vec<u32> {
        self.quadric
            .points()
            .par_iter()
            .map(|p| {
                let img = self.group.apply(g, p).expect("element of this model");
                self.quadric.id_of(&img).expect("A preserves the quadric")
            })
            .collect()
    }

    pub fn generator_permutations(&self) -> &[Vec<u32>] {
        &self.generator_perms
    }

    pub fn orbit_of(&self, id: u32) -> Orbit {
        let mut seen = vec![false; self.quadric.len()];
        let mut members = vec![id];
        let mut queue = VecDeque::from([id]);
        seen[id as usize] = true;
        while let Some(x) = queue.pop_front() {
            for perm in &self.generator_perms {
                let y = perm[x as usize];
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    members.push(y);
                    queue.push_back(y);
                }
            }
        }
        members.sort_unstable();
        Orbit { representative: members[0], members }
    }

    pub fn orbit_of_point(&self, p: &ProjPoint) -> Result<Orbit, GroupError> {
        if p.model() != self.quadric.model().kind() {
            return Err(GroupError::ModelMismatch);
        }
        let id = self.quadric.id_of(p).ok_or(GroupError::OffQuadric)?;
        Ok(self.orbit_of(id))
    }

    /// Partition of all quadric points into orbits, ordered by
    /// representative.
    pub fn census(&self) -> Vec<Orbit> {
        let mut assigned = vec![false; self.quadric.len()];
        let mut out = Vec::new();
        for id in 0..self.quadric.len() as u32 {
            if assigned[id as usize] {
                continue;
            }
            let orbit = self.orbit_of(id);
            for &m in &orbit.members {
                assigned[m as usize] = true;
            }
            out.push(orbit);
        }
        out
    }

    /// |Stab_A(P)| by scanning every element of A.
    pub fn stabilizer_order(&self, p: &ProjPoint) -> Result<usize, GroupError> {
        if p.model() != self.quadric.model().kind() {
            return Err(GroupError::ModelMismatch);
        }
        if self.quadric.id_of(p).is_none() {
            return Err(GroupError::OffQuadric);
        }
        Ok(self
            .group
            .elements()
            .par_iter()
            .filter(|g| self.group.apply(g, p).expect("same model") == *p)
            .count())
    }

    pub fn named_orbit(
        &self,
        name: NamedOrbit,
        params: Option<&SplitParams>,
    ) -> Result<Orbit, GroupError> {
        if name.model() != self.quadric.model().kind() {
            return Err(GroupError::ModelMismatch);
        }
        let rep = name.representative(self.quadric.ctx(), params)?;
        self.orbit_of_point(&rep)
    }
}
