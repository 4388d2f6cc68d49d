//! JSON point-set files.
//!
//! Field elements are written as coefficient vectors over GF(p) (constant
//! term first), GF(q²) elements as `[u, v]` pairs of those, and points as
//! their five flattened components. A file carries enough of the field
//! description to detect being read against a different tower.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::construction::{Construction, Family, PointSet};
use crate::field::{make_field_ctx, FieldCtx, FieldError, Fq, Fq2};
use crate::geometry::{Coords, ModelKind, ProjPoint, Quadric};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("header field {0} does not match the rebuilt field")]
    HeaderMismatch(&'static str),
    #[error("point {0} is the zero vector")]
    ZeroPoint(usize),
    #[error("point {0} is not on the quadric")]
    OffQuadric(usize),
    #[error("point {0} has {1} components, expected 5")]
    BadArity(usize, usize),
}

pub type Coeffs = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldHeader {
    pub p: u32,
    pub k: u32,
    /// Defining polynomial of GF(q) over GF(p), constant term first.
    pub g1: Vec<u32>,
    /// The nonsquare n with GF(q²) = GF(q)[Y]/(Y² − n).
    pub nonsquare: Coeffs,
    pub gamma: [Coeffs; 2],
}

impl FieldHeader {
    pub fn of(ctx: &FieldCtx) -> Self {
        FieldHeader {
            p: ctx.p(),
            k: ctx.k(),
            g1: ctx.g1().to_vec(),
            nonsquare: ctx.coeffs(ctx.nonsquare()),
            gamma: enc2(ctx, ctx.gamma()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartSize {
    pub name: String,
    pub size: usize,
}

/// Everything needed to rebuild the set from scratch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub family: Family,
    pub q: u32,
    pub a: Option<Coeffs>,
    pub d: Option<Coeffs>,
    pub mu: Option<[Coeffs; 2]>,
    pub gamma: [Coeffs; 2],
    pub delta: Option<[Coeffs; 2]>,
    pub part_sizes: Vec<PartSize>,
}

impl Manifest {
    pub fn of(ctx: &FieldCtx, c: &Construction) -> Self {
        Manifest {
            family: c.family,
            q: ctx.q(),
            a: c.split.map(|s| ctx.coeffs(s.a)),
            d: c.split.map(|s| ctx.coeffs(s.d)),
            mu: c.split.map(|s| enc2(ctx, s.mu)),
            gamma: enc2(ctx, ctx.gamma()),
            delta: c.trace.map(|t| enc2(ctx, t.delta)),
            part_sizes: c
                .part_sizes()
                .into_iter()
                .map(|(name, size)| PartSize { name, size })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSetFile {
    pub field: FieldHeader,
    pub model: ModelKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<Manifest>,
    pub m: u32,
    pub points: Vec<Vec<Coeffs>>,
}

fn enc2(ctx: &FieldCtx, x: Fq2) -> [Coeffs; 2] {
    [ctx.coeffs(x.u), ctx.coeffs(x.v)]
}

fn dec2(ctx: &FieldCtx, x: &[Coeffs; 2]) -> Result<Fq2, FieldError> {
    Ok(Fq2::new(ctx.from_coeffs(&x[0])?, ctx.from_coeffs(&x[1])?))
}

impl PointSetFile {
    pub fn new(quadric: &Quadric, set: &PointSet, manifest: Option<Manifest>) -> Self {
        let ctx = quadric.ctx();
        let points = set
            .ids
            .iter()
            .map(|&i| quadric.point(i).coords().iter().map(|&c| ctx.coeffs(c)).collect())
            .collect();
        PointSetFile { field: FieldHeader::of(ctx), model: set.model, manifest, m: set.m, points }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("point sets serialize");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, FormatError> {
        Ok(serde_json::from_str(s)?)
    }

    /// Rebuild the field and check the header against it.
    pub fn field_ctx(&self) -> Result<Arc<FieldCtx>, FormatError> {
        let ctx = make_field_ctx(self.field.p, self.field.k)?;
        let rebuilt = FieldHeader::of(&ctx);
        if rebuilt.g1 != self.field.g1 {
            return Err(FormatError::HeaderMismatch("g1"));
        }
        if rebuilt.nonsquare != self.field.nonsquare {
            return Err(FormatError::HeaderMismatch("nonsquare"));
        }
        if rebuilt.gamma != self.field.gamma {
            return Err(FormatError::HeaderMismatch("gamma"));
        }
        if let Some(m) = &self.manifest {
            if m.q != ctx.q() {
                return Err(FormatError::HeaderMismatch("manifest.q"));
            }
            if m.family.model() != self.model {
                return Err(FormatError::HeaderMismatch("manifest.family"));
            }
            if dec2(&ctx, &m.gamma)? != ctx.gamma() {
                return Err(FormatError::HeaderMismatch("manifest.gamma"));
            }
        }
        Ok(Arc::new(ctx))
    }

    /// Decode the points (normalizing them) without a quadric.
    pub fn decode_points(&self, ctx: &FieldCtx) -> Result<Vec<ProjPoint>, FormatError> {
        self.points
            .iter()
            .enumerate()
            .map(|(i, comps)| {
                if comps.len() != 5 {
                    return Err(FormatError::BadArity(i, comps.len()));
                }
                let mut c: Coords = [Fq::ZERO; 5];
                for (slot, v) in c.iter_mut().zip(comps) {
                    *slot = ctx.from_coeffs(v)?;
                }
                ProjPoint::from_coords(ctx, self.model, c).ok_or(FormatError::ZeroPoint(i))
            })
            .collect()
    }

    /// Resolve the points to ids of `quadric`, rejecting points off it.
    pub fn to_point_set(&self, quadric: &Quadric) -> Result<PointSet, FormatError> {
        if quadric.model().kind() != self.model {
            return Err(FormatError::HeaderMismatch("model"));
        }
        let ids = self
            .decode_points(quadric.ctx())?
            .iter()
            .enumerate()
            .map(|(i, p)| quadric.id_of(p).ok_or(FormatError::OffQuadric(i)))
            .collect::<Result<Vec<u32>, _>>()?;
        Ok(PointSet::new(self.model, ids, self.m))
    }
}
