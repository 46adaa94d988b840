use twofloat::TwoFloat;

use crate::error::{positive, Error, Result};
use crate::hyptrig::{acosh_from_excess, hexagon_solve};

use super::isometry::Isometry2;
use super::word::{CurveWord, Symbol, XKind};

/// A 2x2 product accumulated in double-double precision.
///
/// Twist images `A^n R A^{-n}` have entries of size `e^{nℓ}` while their traces grow only
/// like `nℓ`, so plain f64 products lose most significant digits to cancellation.
#[derive(Clone, Copy)]
struct Wide([TwoFloat; 4]);

impl Wide {
    fn identity() -> Self {
        let (one, zero) = (TwoFloat::from(1.0), TwoFloat::from(0.0));
        Wide([one, zero, zero, one])
    }

    fn times(&self, m: &Isometry2) -> Self {
        let x = &self.0;
        Wide([
            x[0] * m.a + x[1] * m.c,
            x[0] * m.b + x[1] * m.d,
            x[2] * m.a + x[3] * m.c,
            x[2] * m.b + x[3] * m.d,
        ])
    }

    fn trace(&self) -> f64 {
        f64::from(self.0[0] + self.0[3])
    }

    fn rounded(&self) -> Isometry2 {
        let [a, b, c, d] = self.0.map(f64::from);
        Isometry2 { a, b, c, d }
    }
}

/// Holonomy of a pair of pants in normalized position: the first boundary is the
/// imaginary axis, translated by `X1 = diag(e^{ℓ1/2}, e^{-ℓ1/2})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PantsRep {
    /// `X1, X2, X3` with `X1 X2 X3 = 1` and `|tr Xk| = 2 cosh(ℓk/2)`.
    pub generators: [Isometry2; 3],
    /// `seams[k]` is the common perpendicular between the two boundaries other than `k`.
    pub seams: [f64; 3],
}

pub fn pants_rep(l1: f64, l2: f64, l3: f64) -> Result<PantsRep> {
    positive("boundary length", l1)?;
    positive("boundary length", l2)?;
    positive("boundary length", l3)?;
    let lam = (0.5 * l1).exp();
    let y = 2.0 * (0.5 * l2).cosh();
    let z = 2.0 * (0.5 * l3).cosh();
    // λ² - 1 = 2λ sinh(ℓ1/2), written without cancellation
    let a = -(z * lam + y) / (2.0 * lam * (0.5 * l1).sinh());
    let d = y - a;
    let s = (1.0 - a * d).sqrt();
    let x1 = Isometry2::translation(l1);
    let x2 = Isometry2 { a, b: -s, c: s, d }.renormalized();
    let x3 = (x1 * x2).inverse().renormalized();
    let hex = hexagon_solve(0.5 * l1, 0.5 * l2, 0.5 * l3)?;
    Ok(PantsRep { generators: [x1, x2, x3], seams: [hex.a_opp, hex.b_opp, hex.c_opp] })
}

impl PantsRep {
    /// `‖X1 X2 X3 - 1‖_max`.
    pub fn relation_residual(&self) -> f64 {
        let [x1, x2, x3] = self.generators;
        max_deviation(&(x1 * x2 * x3), &Isometry2::IDENTITY)
    }
}

fn max_deviation(m: &Isometry2, n: &Isometry2) -> f64 {
    (m.a - n.a).abs().max((m.b - n.b).abs()).max((m.c - n.c).abs()).max((m.d - n.d).abs())
}

/// Holonomy of an X-piece with interior curve β on the imaginary axis.
///
/// One-holed torus: generators `A, B` with boundary `[A, B]`. Four-holed sphere:
/// generators `A, P, Q, R, S` where `P, Q` bound the first pants (`PQ = A⁻¹`) and
/// `R, S` the second (`RS = A`); the boundaries are `P, Q, R, S` in that order.
#[derive(Debug, Clone, PartialEq)]
pub struct XPieceRep {
    kind: XKind,
    length: f64,
    twist: f64,
    boundary: Vec<f64>,
    generators: Vec<(Symbol, Isometry2)>,
}

/// `T m T⁻¹` for `T = diag(e^{τ/2}, e^{-τ/2})`.
fn slide(m: &Isometry2, tau: f64) -> Isometry2 {
    let e = tau.exp();
    Isometry2 { a: m.a, b: e * m.b, c: m.c / e, d: m.d }
}

/// `R m R⁻¹` for the half turn `R: z -> -1/z`.
fn flip(m: &Isometry2) -> Isometry2 {
    Isometry2 { a: m.d, b: -m.c, c: -m.b, d: m.a }
}

/// Dual generator of a one-holed torus at zero twist: `B A⁻¹ B⁻¹ = X2`, so that
/// `[A, B] = X3⁻¹`, with diagonal entries equal.
fn torus_dual(p: &PantsRep, length: f64) -> Isometry2 {
    let x2 = p.generators[1];
    let (a, s) = (x2.a, x2.c);
    let lam = (0.5 * length).exp();
    // eigenvectors of X2: (s, a - 1/λ) for 1/λ and (s, a - λ) for λ
    let alpha = ((lam - a) / (s * s * 2.0 * (0.5 * length).sinh())).sqrt();
    let beta = alpha * s / (a - lam);
    Isometry2 { a: alpha * s, b: beta * s, c: alpha * (a - lam.recip()), d: beta * (a - lam) }
}

pub fn xpiece_rep(kind: XKind, length: f64, twist: f64, boundary: &[f64]) -> Result<XPieceRep> {
    positive("interior curve length", length)?;
    if !twist.is_finite() {
        return Err(Error::Domain(format!("twist must be finite, got {twist}")));
    }
    if boundary.len() != kind.boundary_count() {
        return Err(Error::Arity { expected: kind.boundary_count(), got: boundary.len() });
    }
    for &l in boundary {
        positive("boundary length", l)?;
    }
    let generators = match kind {
        XKind::OneHoled => {
            let p = pants_rep(length, length, boundary[0])?;
            let b = torus_dual(&p, length);
            let t = (0.5 * twist).exp();
            let b = Isometry2 { a: b.a * t, b: b.b / t, c: b.c * t, d: b.d / t };
            vec![(Symbol::A, p.generators[0]), (Symbol::B, b)]
        }
        XKind::FourHoled => {
            let first = pants_rep(length, boundary[0], boundary[1])?;
            let second = pants_rep(length, boundary[2], boundary[3])?;
            let [a, p, q] = first.generators;
            // the flipped pants meets the seams of the first half a turn along the axis
            let shift = twist + 0.5 * length;
            let r = slide(&flip(&second.generators[1]), shift);
            let s = slide(&flip(&second.generators[2]), shift);
            vec![(Symbol::A, a), (Symbol::P, p), (Symbol::Q, q), (Symbol::R, r), (Symbol::S, s)]
        }
    };
    Ok(XPieceRep { kind, length, twist, boundary: boundary.to_vec(), generators })
}

impl XPieceRep {
    pub fn kind(&self) -> XKind {
        self.kind
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn twist(&self) -> f64 {
        self.twist
    }

    pub fn boundary(&self) -> &[f64] {
        &self.boundary
    }

    pub fn generators(&self) -> &[(Symbol, Isometry2)] {
        &self.generators
    }

    pub fn generator(&self, s: Symbol) -> Option<Isometry2> {
        self.generators.iter().find(|(t, _)| *t == s).map(|(_, m)| *m)
    }

    /// Word of the distinguished interior curve.
    pub fn beta_word(&self) -> CurveWord {
        CurveWord::beta(self.kind)
    }

    /// Words of the boundary curves, in the order of [`XPieceRep::boundary`].
    pub fn boundary_words(&self) -> Vec<CurveWord> {
        let k = self.kind;
        let parse = |w| CurveWord::parse(k, w).expect("fixed boundary words are valid");
        match k {
            XKind::OneHoled => vec![parse("abAB")],
            XKind::FourHoled => ["p", "q", "r", "s"].into_iter().map(parse).collect(),
        }
    }

    fn wide_holonomy(&self, w: &CurveWord) -> Result<Wide> {
        if w.kind() != self.kind {
            return Err(Error::Malformed(format!("{} word evaluated in a {} piece", w.kind(), self.kind)));
        }
        let mut acc = Wide::identity();
        for &(s, e) in w.letters() {
            let g = self.generator(s).expect("word generators are validated against the kind");
            let g = if e < 0 { g.inverse() } else { g };
            for _ in 0..e.unsigned_abs() {
                acc = acc.times(&g);
            }
        }
        Ok(acc)
    }

    /// Holonomy of a word, rounded to f64 after an extended-precision product.
    pub fn holonomy(&self, w: &CurveWord) -> Result<Isometry2> {
        Ok(self.wide_holonomy(w)?.rounded())
    }

    /// `tr ρ(w)`, rounded only once at the end.
    pub fn trace(&self, w: &CurveWord) -> Result<f64> {
        Ok(self.wide_holonomy(w)?.trace())
    }

    /// Geodesic length `2 acosh(|tr ρ(w)| / 2)`.
    pub fn curve_length(&self, w: &CurveWord) -> Result<f64> {
        let t = self.trace(w)?.abs();
        if t <= 2.0 {
            return Err(Error::NonHyperbolic { trace: t });
        }
        Ok(2.0 * acosh_from_excess(0.5 * t - 1.0))
    }

    /// `|tr[A,B] - (tr²A + tr²B + tr²AB - trA trB trAB - 2)|` for a one-holed torus.
    pub fn fricke_residual(&self) -> Option<f64> {
        if self.kind != XKind::OneHoled {
            return None;
        }
        let word = |w: &str| self.trace(&CurveWord::parse(XKind::OneHoled, w).expect("fixed word")).ok();
        let (x, y, z) = (word("a")?, word("b")?, word("ab")?);
        let comm = word("abAB")?;
        Some((comm - (x * x + y * y + z * z - x * y * z - 2.0)).abs())
    }

    /// Largest deviation of a boundary or interior trace from `2 cosh(ℓ/2)`.
    pub fn trace_residual(&self) -> f64 {
        let beta = self.generator(Symbol::A).expect("interior generator is always present");
        let mut worst = (beta.trace().abs() - 2.0 * (0.5 * self.length).cosh()).abs();
        for (w, &l) in self.boundary_words().iter().zip(&self.boundary) {
            let t = self.trace(w).expect("boundary words match the kind");
            worst = worst.max((t.abs() - 2.0 * (0.5 * l).cosh()).abs());
        }
        worst
    }

    /// Residual of the group relation: `PQRS = 1` or `[A,B]` against the boundary.
    pub fn relation_residual(&self) -> f64 {
        match self.kind {
            XKind::FourHoled => {
                let w = CurveWord::parse(self.kind, "pqrs").expect("fixed word");
                self.holonomy(&w).map(|m| max_deviation(&m, &Isometry2::IDENTITY)).unwrap_or(f64::INFINITY)
            }
            XKind::OneHoled => {
                let t = self.trace(&self.boundary_words()[0]).expect("fixed word");
                (t + 2.0 * (0.5 * self.boundary[0]).cosh()).abs()
            }
        }
    }
}

/// Length of the dual curve `B` in a one-holed torus:
/// `cosh(ℓ_B/2) = cosh(h/2) cosh(τ/2)` with `h` the seam between the two copies of β.
pub fn torus_dual_length(length: f64, boundary: f64, twist: f64) -> Result<f64> {
    let hex = hexagon_solve(0.5 * boundary, 0.5 * length, 0.5 * length)?;
    let c = (0.5 * hex.a_opp).cosh() * (0.5 * twist).cosh();
    Ok(2.0 * c.acosh())
}
