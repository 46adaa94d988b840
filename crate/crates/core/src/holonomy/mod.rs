//! Matrix holonomy of pants and X-pieces, and curve lengths from traces.

mod isometry;
mod word;
mod xpiece;

pub use isometry::Isometry2;
pub use word::{dehn_twist_word, CurveWord, Symbol, XKind};
pub use xpiece::{pants_rep, torus_dual_length, xpiece_rep, PantsRep, XPieceRep};

/// `2 acosh(|tr ρ(w)| / 2)` in the given representation.
pub fn curve_length(rep: &XPieceRep, w: &CurveWord) -> crate::Result<f64> {
    rep.curve_length(w)
}
