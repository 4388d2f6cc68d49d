//! Construction and exhaustive verification of m-ovoids of the parabolic
//! quadric Q(4,q), q odd.
//!
//! The crate is layered bottom-up:
//!
//! - [`field`]: table-driven arithmetic in GF(p) ⊂ GF(q) ⊂ GF(q²).
//! - [`geometry`]: the two quadric models, point enumeration, totally
//!   singular lines and hyperplane sections.
//! - [`group`]: the prescribed group A = ⟨H, σ, τ⟩ of order 2(q² − 1), its
//!   action, orbits and stabilizers.
//! - [`construction`]: the (q−1)/2-ovoids (q ≡ 3 mod 4, split model) and
//!   (q+1)/2-ovoids (q ≡ 1 mod 4, trace model).
//! - [`verify`]: line, perp, section and invariance checks producing
//!   [`verify::Report`]s.
//! - [`format`]: JSON point-set files.

pub mod field;
pub mod geometry;
pub mod group;
pub mod construction;
pub mod verify;
pub mod format;
