//! Dilatation of the collar twist map, Wolpert's length-ratio test and Bishop's bound.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{positive, Error, Result};
use crate::exec::Exec;
use crate::holonomy::{dehn_twist_word, xpiece_rep, CurveWord, XKind};
use crate::hyptrig::collar_width;

/// Twist amount `t` (length units) and the angular half-width `θ0` of the lifted collar
/// `{π/2 - θ0 < arg z < π/2 + θ0}` around the imaginary axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwistMapParams {
    t: f64,
    theta0: f64,
}

impl TwistMapParams {
    pub fn new(t: f64, theta0: f64) -> Result<Self> {
        if !t.is_finite() {
            return Err(Error::Domain(format!("twist must be finite, got {t}")));
        }
        if !(theta0 > 0.0 && theta0 < FRAC_PI_2) {
            return Err(Error::Domain(format!("theta0 must lie in (0, π/2), got {theta0}")));
        }
        Ok(TwistMapParams { t, theta0 })
    }

    /// `θ0 = atan(sinh ω(β))`, the angle subtended by the standard collar of `β`.
    pub fn from_collar(length: f64, t: f64) -> Result<Self> {
        TwistMapParams::new(t, theta0_from_collar(length)?)
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }

    fn r(&self) -> f64 {
        self.t / (2.0 * self.theta0)
    }
}

/// Points at distance `ω` from the imaginary axis have `|cot arg z| = sinh ω`.
pub fn theta0_from_collar(length: f64) -> Result<f64> {
    Ok(collar_width(length)?.sinh().atan())
}

/// Beltrami coefficient of the twist map at argument `θ`:
/// `μ = (ir / (2 - ir)) e^{2iθ}` inside the collar sector, `0` outside, `r = t / (2θ0)`.
pub fn beltrami_twist(p: &TwistMapParams, theta: f64) -> Result<Complex64> {
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::Domain(format!("argument must lie in (0, π), got {theta}")));
    }
    if (theta - FRAC_PI_2).abs() > p.theta0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let ir = Complex64::new(0.0, p.r());
    Ok(ir / (2.0 - ir) * Complex64::from_polar(1.0, 2.0 * theta))
}

/// `|μ| = r / sqrt(4 + r²)`.
pub fn beltrami_modulus(p: &TwistMapParams) -> f64 {
    let r = p.r().abs();
    r / (4.0 + r * r).sqrt()
}

/// `K = (1 + |μ|) / (1 - |μ|) = exp(2 asinh(|t| / (4 θ0)))`.
pub fn dilatation_twist(p: &TwistMapParams) -> f64 {
    // the closed form avoids cancellation in 1 - |μ| for large twists
    (2.0 * (p.t.abs() / (4.0 * p.theta0)).asinh()).exp()
}

/// Whether `1/K <= ℓ2/ℓ1 <= K`.
pub fn wolpert_check(k: f64, l1: f64, l2: f64) -> Result<bool> {
    if k.is_nan() || k < 1.0 {
        return Err(Error::Domain(format!("dilatation must be at least 1, got {k}")));
    }
    positive("length", l1)?;
    positive("length", l2)?;
    let ratio = l2 / l1;
    Ok(ratio * k >= 1.0 && ratio <= k)
}

/// `C(N) |log(ℓ / ℓ')|`.
pub fn bishop_bound(c: f64, l: f64, l_prime: f64) -> Result<f64> {
    positive("constant", c)?;
    positive("length", l)?;
    positive("length", l_prime)?;
    Ok(c * (l / l_prime).ln().abs())
}

/// One point of the twist harness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WolpertSample {
    pub kind: XKind,
    pub length: f64,
    pub t: f64,
    pub dilatation: f64,
    pub ratio_bound: f64,
    /// Extreme length ratios `ℓ_{τ+t}(w) / ℓ_τ(w)` over the test words.
    pub min_ratio: f64,
    pub max_ratio: f64,
}

impl WolpertSample {
    pub fn wolpert_ok(&self) -> bool {
        self.min_ratio * self.dilatation >= 1.0 && self.max_ratio <= self.dilatation
    }

    pub fn ratio_bound_ok(&self) -> bool {
        self.max_ratio <= self.ratio_bound && self.min_ratio * self.ratio_bound >= 1.0
    }
}

/// Test words crossing the interior curve: the dual curve and `depth` twist images
/// either way.
pub fn crossing_words(kind: XKind, depth: i32) -> Vec<CurveWord> {
    let dual = CurveWord::dual(kind);
    let beta = CurveWord::beta(kind);
    (-depth..=depth).map(|n| dehn_twist_word(&dual, &beta, n).expect("dual words twist")).collect()
}

/// Twist the interior curve of an X-piece by `t` and compare all crossing-word lengths
/// with the dilatation of the collar twist map and with the uniform ratio bound.
pub fn wolpert_sample(kind: XKind, length: f64, twist: f64, boundary: &[f64], t: f64) -> Result<WolpertSample> {
    let before = xpiece_rep(kind, length, twist, boundary)?;
    let after = xpiece_rep(kind, length, twist + t, boundary)?;
    let mut min_ratio = f64::INFINITY;
    let mut max_ratio: f64 = 0.0;
    for w in crossing_words(kind, 3) {
        let r = after.curve_length(&w)? / before.curve_length(&w)?;
        min_ratio = min_ratio.min(r);
        max_ratio = max_ratio.max(r);
    }
    Ok(WolpertSample {
        kind,
        length,
        t,
        dilatation: dilatation_twist(&TwistMapParams::from_collar(length, t)?),
        ratio_bound: 1.0 + t.abs() / collar_width(length)?,
        min_ratio,
        max_ratio,
    })
}

/// Regular grid of `n_length × n_twist` points over `ℓ_β ∈ [0.1, 4]`, `t ∈ [-4, 4]` for
/// each X-piece kind, with fixed boundary lengths.
pub fn wolpert_grid(n_length: usize, n_twist: usize, exec: Exec) -> Result<Vec<WolpertSample>> {
    let (nl, nt) = (n_length.max(2), n_twist.max(2));
    let points: Vec<(XKind, f64, f64)> = [XKind::OneHoled, XKind::FourHoled]
        .into_iter()
        .flat_map(|kind| {
            (0..nl * nt).map(move |k| {
                let (a, b) = ((k / nt) as f64 / (nl - 1) as f64, (k % nt) as f64 / (nt - 1) as f64);
                (kind, 0.1 + 3.9 * a, -4.0 + 8.0 * b)
            })
        })
        .collect();
    exec.map(&points, |&(kind, l, t)| {
        let boundary = match kind {
            XKind::OneHoled => vec![1.5],
            XKind::FourHoled => vec![1.0, 2.0, 0.5, 3.0],
        };
        wolpert_sample(kind, l, 0.3, &boundary, t)
    })
    .into_iter()
    .collect()
}
