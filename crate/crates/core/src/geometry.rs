//! Points of PG(4,q), the two models of Q(4,q), totally singular lines and
//! hyperplane sections.
//!
//! Both models live on a 5-dimensional GF(q)-space. A point is stored as five
//! GF(q) components, with each GF(q²) coordinate expanded as `(u, v)`:
//!
//! - split model, form `x1·x2 + N(y) − z²`: `(x1, x2, y.u, y.v, z)`
//! - trace model, form `x² + Tr(y·z)`: `(x, y.u, y.v, z.u, z.v)`
//!
//! Points are normalized so that the first nonzero component is 1. Quadric
//! points get ids `0..N` by lexicographic rank of their normalized components.
//!
//! The value of the form on a normalized representative is not a projective
//! invariant (it scales by squares); only its vanishing and its sign are, and
//! those are the only things the crate draws conclusions from.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{FieldCtx, Fq, Fq2};

pub type Coords = [Fq; 5];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeometryError {
    #[error("point belongs to the {found:?} model, expected {expected:?}")]
    ModelMismatch { expected: ModelKind, found: ModelKind },
    #[error("points are not collinear on the quadric")]
    NotCollinear,
    #[error("a line needs two distinct points")]
    DegeneratePair,
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("hyperplane section of unexpected size {0}")]
    UnclassifiedSection(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Split,
    Trace,
}

/// A normalized point of PG(4,q) in one of the two coordinate systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjPoint {
    model: ModelKind,
    coords: Coords,
}

impl ProjPoint {
    /// Normalize `coords`; `None` for the zero vector.
    pub fn from_coords(ctx: &FieldCtx, model: ModelKind, coords: Coords) -> Option<Self> {
        let lead = coords.iter().find(|c| !c.is_zero())?;
        let s = ctx.inv(*lead).ok()?;
        Some(ProjPoint { model, coords: coords.map(|c| ctx.mul(s, c)) })
    }

    pub fn split(ctx: &FieldCtx, x1: Fq, x2: Fq, y: Fq2, z: Fq) -> Option<Self> {
        Self::from_coords(ctx, ModelKind::Split, [x1, x2, y.u, y.v, z])
    }

    pub fn trace(ctx: &FieldCtx, x: Fq, y: Fq2, z: Fq2) -> Option<Self> {
        Self::from_coords(ctx, ModelKind::Trace, [x, y.u, y.v, z.u, z.v])
    }

    pub fn model(&self) -> ModelKind {
        self.model
    }

    pub fn coords(&self) -> &Coords {
        &self.coords
    }

    /// `(x1, x2, y, z)` for a split-model point.
    pub fn split_coords(&self) -> Option<(Fq, Fq, Fq2, Fq)> {
        let c = &self.coords;
        (self.model == ModelKind::Split).then(|| (c[0], c[1], Fq2::new(c[2], c[3]), c[4]))
    }

    /// `(x, y, z)` for a trace-model point.
    pub fn trace_coords(&self) -> Option<(Fq, Fq2, Fq2)> {
        let c = &self.coords;
        (self.model == ModelKind::Trace)
            .then(|| (c[0], Fq2::new(c[1], c[2]), Fq2::new(c[3], c[4])))
    }
}

/// Every point of PG(4,q), normalized, in lexicographic order.
pub fn pg4_points(ctx: &FieldCtx, model: ModelKind) -> impl Iterator<Item = ProjPoint> + '_ {
    let q = ctx.q() as usize;
    (0..5usize).rev().flat_map(move |lead| {
        let free = 4 - lead;
        (0..q.pow(free as u32)).map(move |mut t| {
            let mut coords = [Fq::ZERO; 5];
            coords[lead] = Fq::ONE;
            for slot in coords[lead + 1..].iter_mut().rev() {
                *slot = ctx.from_index(t % q);
                t /= q;
            }
            ProjPoint { model, coords }
        })
    })
}

/// Number of points of PG(4,q).
pub fn pg4_size(q: u64) -> u64 {
    (0..5).map(|i| q.pow(i)).sum()
}

/// One of the two quadratic-form models of Q(4,q) over a shared field.
#[derive(Debug, Clone)]
pub struct QuadricModel {
    kind: ModelKind,
    ctx: Arc<FieldCtx>,
}

impl QuadricModel {
    pub fn new(ctx: Arc<FieldCtx>, kind: ModelKind) -> Self {
        QuadricModel { kind, ctx }
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn ctx_arc(&self) -> &Arc<FieldCtx> {
        &self.ctx
    }

    /// The form on a raw coordinate vector.
    pub fn form(&self, c: &Coords) -> Fq {
        let f = &*self.ctx;
        match self.kind {
            ModelKind::Split => {
                let y = Fq2::new(c[2], c[3]);
                f.sub(f.add(f.mul(c[0], c[1]), f.norm(y)), f.mul(c[4], c[4]))
            }
            ModelKind::Trace => {
                let y = Fq2::new(c[1], c[2]);
                let z = Fq2::new(c[3], c[4]);
                f.add(f.mul(c[0], c[0]), f.trace(f.mul2(y, z)))
            }
        }
    }

    /// Polar form f(a + b) − f(a) − f(b) on raw vectors.
    pub fn polar(&self, a: &Coords, b: &Coords) -> Fq {
        let f = &*self.ctx;
        let sum: Coords = std::array::from_fn(|i| f.add(a[i], b[i]));
        f.sub(f.sub(self.form(&sum), self.form(a)), self.form(b))
    }

    fn check(&self, p: &ProjPoint) -> Result<(), GeometryError> {
        if p.model != self.kind {
            return Err(GeometryError::ModelMismatch { expected: self.kind, found: p.model });
        }
        Ok(())
    }

    pub fn eval_f(&self, p: &ProjPoint) -> Result<Fq, GeometryError> {
        self.check(p)?;
        Ok(self.form(&p.coords))
    }

    pub fn polar_b(&self, p: &ProjPoint, q: &ProjPoint) -> Result<Fq, GeometryError> {
        self.check(p)?;
        self.check(q)?;
        Ok(self.polar(&p.coords, &q.coords))
    }

    /// Gram matrix of the polar form in the flattened basis.
    pub fn gram(&self) -> [[Fq; 5]; 5] {
        let unit = |i: usize| {
            let mut c = [Fq::ZERO; 5];
            c[i] = Fq::ONE;
            c
        };
        std::array::from_fn(|i| std::array::from_fn(|j| self.polar(&unit(i), &unit(j))))
    }

    pub fn point(&self, coords: Coords) -> Option<ProjPoint> {
        ProjPoint::from_coords(&self.ctx, self.kind, coords)
    }
}

/// A totally singular line: the sorted ids of its q + 1 points.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line(Vec<u32>);

impl Line {
    pub fn ids(&self) -> &[u32] {
        &self.0
    }

    pub fn contains(&self, id: u32) -> bool {
        self.0.binary_search(&id).is_ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SectionKind {
    Elliptic,
    Hyperbolic,
    Cone,
}

impl SectionKind {
    /// Classify a hyperplane section of Q(4,q) by its size.
    pub fn from_size(q: u64, size: usize) -> Option<Self> {
        let size = size as u64;
        if size == q * q + 1 {
            Some(SectionKind::Elliptic)
        } else if size == (q + 1) * (q + 1) {
            Some(SectionKind::Hyperbolic)
        } else if size == q * q + q + 1 {
            Some(SectionKind::Cone)
        } else {
            None
        }
    }
}

/// The points of the quadric on the hyperplane `{X : B(dual, X) = 0}`.
#[derive(Debug, Clone)]
pub struct Section {
    pub dual: ProjPoint,
    pub kind: SectionKind,
    pub ids: Vec<u32>,
}

/// Linear functional `X ↦ B(c, X)` as a coefficient vector.
pub type Functional = [Fq; 5];

/// The enumerated point set of one quadric model, with id lookup.
pub struct Quadric {
    model: QuadricModel,
    points: Vec<ProjPoint>,
    keys: Vec<u64>,
    gram: [[Fq; 5]; 5],
}

impl Quadric {
    /// Enumerate all points of the quadric, ids in lexicographic order.
    pub fn new(model: QuadricModel) -> Self {
        let ctx = model.ctx();
        let mut points: Vec<ProjPoint> = pg4_points(ctx, model.kind())
            .filter(|p| model.form(&p.coords).is_zero())
            .collect();
        points.sort();
        let q = ctx.q() as u64;
        let keys = points.iter().map(|p| key(q, &p.coords)).collect();
        let gram = model.gram();
        Quadric { model, points, keys, gram }
    }

    pub fn model(&self) -> &QuadricModel {
        &self.model
    }

    pub fn ctx(&self) -> &FieldCtx {
        self.model.ctx()
    }

    pub fn q(&self) -> u64 {
        self.ctx().q() as u64
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[ProjPoint] {
        &self.points
    }

    pub fn point(&self, id: u32) -> &ProjPoint {
        &self.points[id as usize]
    }

    /// Id of a normalized point, `None` if it is off the quadric or from the
    /// other model.
    pub fn id_of(&self, p: &ProjPoint) -> Option<u32> {
        if p.model != self.model.kind() {
            return None;
        }
        self.keys.binary_search(&key(self.q(), &p.coords)).ok().map(|i| i as u32)
    }

    /// Id of the point spanned by a raw (unnormalized) vector.
    pub fn id_of_coords(&self, c: Coords) -> Option<u32> {
        self.id_of(&self.model.point(c)?)
    }

    /// Coefficients of `X ↦ B(c, X)`.
    pub fn functional(&self, c: &Coords) -> Functional {
        let f = self.ctx();
        std::array::from_fn(|j| {
            (0..5).fold(Fq::ZERO, |acc, i| f.add(acc, f.mul(c[i], self.gram[i][j])))
        })
    }

    #[inline]
    pub fn apply_functional(&self, l: &Functional, x: &Coords) -> Fq {
        let f = self.ctx();
        let mut acc = Fq::ZERO;
        for i in 0..5 {
            acc = f.add(acc, f.mul(l[i], x[i]));
        }
        acc
    }

    /// Ids of all quadric points X with B(c, X) = 0.
    pub fn perp_of(&self, c: &Coords) -> Vec<u32> {
        let l = self.functional(c);
        (0..self.len() as u32)
            .filter(|&i| self.apply_functional(&l, &self.points[i as usize].coords).is_zero())
            .collect()
    }

    fn line_ids(&self, p: &Coords, q: &Coords) -> Vec<u32> {
        let f = self.ctx();
        let mut ids: Vec<u32> = f
            .elements()
            .map(|lam| {
                let c: Coords = std::array::from_fn(|i| f.add(f.mul(lam, p[i]), q[i]));
                self.id_of_coords(c).expect("points of a totally singular line lie on the quadric")
            })
            .collect();
        ids.push(self.id_of_coords(*p).expect("endpoint on quadric"));
        ids.sort_unstable();
        ids
    }

    /// The line {λP + Q : λ ∈ GF(q)} ∪ {P}.
    pub fn line_through(&self, p: &ProjPoint, q: &ProjPoint) -> Result<Line, GeometryError> {
        let b = self.model.polar_b(p, q)?;
        if p == q {
            return Err(GeometryError::DegeneratePair);
        }
        let on_quadric = |x: &ProjPoint| self.model.form(&x.coords).is_zero();
        if !b.is_zero() || !on_quadric(p) || !on_quadric(q) {
            return Err(GeometryError::NotCollinear);
        }
        Ok(Line(self.line_ids(&p.coords, &q.coords)))
    }

    /// First dual point, in lexicographic order, whose section is elliptic.
    pub fn first_elliptic_dual(&self) -> ProjPoint {
        let q = self.q();
        pg4_points(self.ctx(), self.model.kind())
            .find(|c| {
                !self.model.form(&c.coords).is_zero()
                    && self.perp_of(&c.coords).len() as u64 == q * q + 1
            })
            .expect("Q(4,q) has elliptic hyperplane sections")
    }

    /// All (q+1)(q²+1) totally singular lines, sorted.
    ///
    /// An elliptic section E contains no line, so every line meets E in
    /// exactly one point. Lines are generated from that point: for P ∈ E the
    /// quadric points of P⊥ outside E fall into q + 1 lines of q points each.
    pub fn lines(&self) -> Vec<Line> {
        let e_dual = self.first_elliptic_dual();
        let e_fun = self.functional(&e_dual.coords);
        let e_ids = self.perp_of(&e_dual.coords);
        let n = self.len();
        let mut lines: Vec<Line> = e_ids
            .par_iter()
            .flat_map_iter(|&pid| {
                let p = self.points[pid as usize].coords;
                let l = self.functional(&p);
                let mut seen = vec![false; n];
                let mut out = Vec::new();
                for (xid, x) in self.points.iter().enumerate() {
                    if seen[xid]
                        || self.apply_functional(&e_fun, &x.coords).is_zero()
                        || !self.apply_functional(&l, &x.coords).is_zero()
                    {
                        continue;
                    }
                    let ids = self.line_ids(&p, &x.coords);
                    for &i in &ids {
                        seen[i as usize] = true;
                    }
                    out.push(Line(ids));
                }
                out
            })
            .collect();
        lines.sort_unstable();
        lines
    }

    /// Section of the quadric by the hyperplane dual to `c` (any point of
    /// PG(4,q) in this model's coordinates).
    pub fn hyperplane_section(&self, c: &ProjPoint) -> Result<Section, GeometryError> {
        self.model.check(c)?;
        let ids = self.perp_of(&c.coords);
        let kind =
            SectionKind::from_size(self.q(), ids.len()).ok_or(GeometryError::UnclassifiedSection(ids.len()))?;
        Ok(Section { dual: *c, kind, ids })
    }
}

fn key(q: u64, c: &Coords) -> u64 {
    c.iter().fold(0u64, |acc, x| acc * q + x.index() as u64)
}
