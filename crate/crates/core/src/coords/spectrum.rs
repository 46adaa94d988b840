use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::holonomy::{dehn_twist_word, xpiece_rep, CurveWord, XPieceRep};
use crate::surface::Slot;

use super::FnVector;

/// Which curves enter a length-spectrum lower bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    /// Decomposition curves only.
    Decomposition,
    /// Dual curves and their Dehn-twist images in the X-piece of each curve.
    Crossing,
    All,
}

/// A finite family of closed curves: decomposition curves `curves`, and in the X-piece
/// of each, the dual word twisted `-depth..=depth` times.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveFamily {
    pub kind: FamilyKind,
    pub curves: Vec<i64>,
    pub depth: u32,
}

impl CurveFamily {
    pub fn new(kind: FamilyKind, curves: Vec<i64>) -> Self {
        CurveFamily { kind, curves, depth: 2 }
    }

    /// Curves where `x` or `y` deviate from the base, their X-piece neighbours, and the
    /// first `window` tail indices when a tail is not the base tail.
    pub fn around(kind: FamilyKind, x: &FnVector, y: &FnVector, window: u64) -> Self {
        let g = x.base_structure().graph();
        let mut curves: BTreeSet<i64> = x.overrides().keys().chain(y.overrides().keys()).copied().collect();
        if !(x.tail().is_base() && y.tail().is_base()) {
            curves.extend(g.indices_up_to(window));
        }
        let near: Vec<i64> = curves
            .iter()
            .filter_map(|&i| g.xpiece(i).ok())
            .flat_map(|p| p.neighbours().collect::<Vec<_>>())
            .collect();
        curves.extend(near);
        CurveFamily::new(kind, curves.into_iter().collect())
    }
}

/// A lower bound with the curve that achieves it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LsBound {
    pub value: f64,
    pub curve: Option<i64>,
    /// `None` for the decomposition curve itself.
    pub word: Option<String>,
}

/// Holonomy of the X-piece around curve `i` in the coordinates of `x`.
///
/// Fails with `Unsupported` when a cuff of the X-piece is a cusp.
pub fn xpiece_at(x: &FnVector, i: i64) -> Result<XPieceRep> {
    let g = x.base_structure().graph();
    let piece = g.xpiece(i)?;
    let mut boundary = Vec::with_capacity(piece.boundary.len());
    for slot in &piece.boundary {
        boundary.push(match *slot {
            Slot::Curve(j) => x.coord_unchecked(j).length,
            Slot::Boundary(l) => l,
            Slot::Puncture => {
                return Err(Error::Unsupported(format!("X-piece of curve {i} has a cusp")));
            }
        });
    }
    let c = x.coord_unchecked(i);
    xpiece_rep(piece.kind, c.length, c.twist, &boundary)
}

/// `(1/2) max |log(ℓ_x(w) / ℓ_y(w))|` over a finite curve family, a lower bound for the
/// length-spectrum distance. X-pieces with a cusp contribute their decomposition curve
/// only.
pub fn d_ls_lower_bound(x: &FnVector, y: &FnVector, family: &CurveFamily) -> Result<LsBound> {
    x.require_same_base(y)?;
    let g = x.base_structure().graph();
    let mut best = LsBound { value: 0.0, curve: None, word: None };
    let mut offer = |value: f64, curve: i64, word: Option<String>| {
        if value > best.value {
            best = LsBound { value, curve: Some(curve), word };
        }
    };
    for &i in &family.curves {
        g.check(i)?;
        if family.kind != FamilyKind::Crossing {
            let v = 0.5 * (x.coord_unchecked(i).length / y.coord_unchecked(i).length).ln().abs();
            offer(v, i, None);
        }
        if family.kind == FamilyKind::Decomposition {
            continue;
        }
        let (rx, ry) = match (xpiece_at(x, i), xpiece_at(y, i)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(Error::Unsupported(_)), _) => continue,
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        let dual = CurveWord::dual(rx.kind());
        let beta = CurveWord::beta(rx.kind());
        let d = family.depth as i32;
        for n in -d..=d {
            let w = dehn_twist_word(&dual, &beta, n)?;
            let v = 0.5 * (rx.curve_length(&w)? / ry.curve_length(&w)?).ln().abs();
            offer(v, i, Some(w.to_string()));
        }
    }
    Ok(best)
}
