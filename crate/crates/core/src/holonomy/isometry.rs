use std::ops::Mul;

use crate::error::{Error, Result};
use crate::hyptrig::acosh_from_excess;

/// An orientation-preserving isometry of the upper half-plane, `z -> (az + b) / (cz + d)`,
/// stored as a real 2x2 matrix with determinant 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Isometry2 {
    pub const IDENTITY: Isometry2 = Isometry2 { a: 1.0, b: 0.0, c: 0.0, d: 1.0 };

    /// Rotation by pi about `i`, `z -> -1/z`.
    pub const HALF_TURN: Isometry2 = Isometry2 { a: 0.0, b: -1.0, c: 1.0, d: 0.0 };

    /// Build from entries, rescaling so that the determinant is 1.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det.is_finite() && det > 0.0) {
            return Err(Error::Domain(format!("matrix determinant must be positive, got {det}")));
        }
        let k = det.sqrt().recip();
        Ok(Isometry2 { a: a * k, b: b * k, c: c * k, d: d * k })
    }

    /// Hyperbolic translation of length `t` along the imaginary axis, `z -> e^t z`.
    pub fn translation(t: f64) -> Self {
        let h = (0.5 * t).exp();
        Isometry2 { a: h, b: 0.0, c: 0.0, d: h.recip() }
    }

    #[inline]
    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    #[inline]
    pub fn trace(&self) -> f64 {
        self.a + self.d
    }

    #[inline]
    pub fn inverse(&self) -> Self {
        Isometry2 { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// Rescale so that the determinant is exactly 1 again after accumulated rounding.
    pub fn renormalized(&self) -> Self {
        let k = self.det().abs().sqrt().recip();
        Isometry2 { a: self.a * k, b: self.b * k, c: self.c * k, d: self.d * k }
    }

    /// `self * m * self^{-1}`.
    pub fn conjugate(&self, m: &Isometry2) -> Isometry2 {
        *self * *m * self.inverse()
    }

    pub fn is_hyperbolic(&self) -> bool {
        self.trace().abs() > 2.0
    }

    /// Translation length `2 acosh(|tr| / 2)`, when the element is hyperbolic.
    pub fn translation_length(&self) -> Option<f64> {
        let t = self.trace().abs();
        (t > 2.0).then(|| 2.0 * acosh_from_excess(0.5 * t - 1.0))
    }

    /// Endpoints on the real line of the axis of a hyperbolic element, `None` when the
    /// element is not hyperbolic. An endpoint at infinity is reported as `f64::INFINITY`.
    pub fn axis_endpoints(&self) -> Option<(f64, f64)> {
        if !self.is_hyperbolic() {
            return None;
        }
        // c z^2 + (d - a) z - b = 0
        let disc = ((self.d - self.a).powi(2) + 4.0 * self.b * self.c).sqrt();
        if self.c == 0.0 {
            return Some((self.b / (self.a - self.d), f64::INFINITY));
        }
        let r1 = (self.a - self.d + disc) / (2.0 * self.c);
        let r2 = (self.a - self.d - disc) / (2.0 * self.c);
        Some((r1.min(r2), r1.max(r2)))
    }

    /// Length of the common perpendicular between the axes of two hyperbolic elements,
    /// or `None` when the axes meet (or either element is not hyperbolic).
    pub fn perpendicular_distance(&self, other: &Isometry2) -> Option<f64> {
        let (tx, ty) = (self.trace(), other.trace());
        if tx.abs() <= 2.0 || ty.abs() <= 2.0 {
            return None;
        }
        let v = (tx * ty - 2.0 * (*self * *other).trace()) / ((tx * tx - 4.0) * (ty * ty - 4.0)).sqrt();
        (v.abs() > 1.0).then(|| acosh_from_excess(v.abs() - 1.0))
    }

    pub fn approx_eq(&self, other: &Isometry2, tol: f64) -> bool {
        // projective: M and -M are the same isometry
        let same = |s: f64| {
            (self.a - s * other.a).abs() <= tol
                && (self.b - s * other.b).abs() <= tol
                && (self.c - s * other.c).abs() <= tol
                && (self.d - s * other.d).abs() <= tol
        };
        same(1.0) || same(-1.0)
    }
}

impl Mul for Isometry2 {
    type Output = Isometry2;

    #[inline]
    fn mul(self, r: Isometry2) -> Isometry2 {
        Isometry2 {
            a: self.a * r.a + self.b * r.c,
            b: self.a * r.b + self.b * r.d,
            c: self.c * r.a + self.d * r.c,
            d: self.c * r.b + self.d * r.d,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn translation_length_of_diagonal() {
        let t = Isometry2::translation(1.7);
        assert!((t.translation_length().unwrap() - 1.7).abs() < 1e-14);
        assert_eq!(t.axis_endpoints(), Some((0.0, f64::INFINITY)));
        assert!(Isometry2::HALF_TURN.translation_length().is_none());
        assert!(Isometry2::IDENTITY.translation_length().is_none());
    }

    #[test]
    fn new_normalizes_determinant() {
        let m = Isometry2::new(2.0, 1.0, 1.0, 3.0).unwrap();
        assert!((m.det() - 1.0).abs() < 1e-15);
        assert!(Isometry2::new(1.0, 2.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn axis_endpoints_are_fixed() {
        let m = Isometry2::new(3.0, 2.0, 1.0, 1.0).unwrap();
        let (p, q) = m.axis_endpoints().unwrap();
        for z in [p, q] {
            let image = (m.a * z + m.b) / (m.c * z + m.d);
            assert!((image - z).abs() < 1e-12);
        }
    }

    #[test]
    fn perpendicular_to_imaginary_axis() {
        // Distance from the imaginary axis to the geodesic with endpoints 0 < r < R
        // satisfies cosh d = (R + r) / (R - r).
        let a = Isometry2::translation(1.0);
        let (r, big_r) = (0.5, 4.0);
        let g = Isometry2::new(big_r, r, 1.0, 1.0).unwrap(); // 0 -> r, inf -> R
        let b = g.conjugate(&Isometry2::translation(0.8));
        let (p, q) = b.axis_endpoints().unwrap();
        assert!((p - r).abs() < 1e-12 && (q - big_r).abs() < 1e-12);
        let expected = ((big_r + r) / (big_r - r)).acosh();
        assert!((a.perpendicular_distance(&b).unwrap() - expected).abs() < 1e-12);
        // crossing axes have no common perpendicular
        let tilted = Isometry2::new(1.0, 1.0, -1.0, 1.0).unwrap().conjugate(&a);
        assert!(a.perpendicular_distance(&tilted).is_none());
    }
}
