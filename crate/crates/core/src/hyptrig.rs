//! Closed-form hyperbolic trigonometry.
//!
//! Right-angled hexagons (three alternate sides determine the other three),
//! quadrilaterals with two adjacent right angles, collar widths, and the
//! explicit side/arc bounds used to control X-piece geometry.
//!
//! All inverse hyperbolic cosines go through [`acosh_from_excess`], which
//! takes `cosh x - 1` rather than `cosh x`. The hexagon and quadrilateral
//! formulas are rearranged so that excess is computed without cancellation.

use crate::error::{positive, Error, Result};

/// Relative tolerance used by the residual checks in this module.
pub const RESIDUAL_TOLERANCE: f64 = 1e-9;

/// Sides shorter than this are treated as degenerate and rejected.
pub const DEGENERATE_SIDE: f64 = 1e-12;

/// `acosh(1 + excess)` evaluated without forming `1 + excess`.
#[inline]
pub fn acosh_from_excess(excess: f64) -> f64 {
    debug_assert!(excess >= -1e-15, "negative cosh excess {excess}");
    let e = excess.max(0.0);
    (e + (e * (e + 2.0)).sqrt()).ln_1p()
}

/// `acosh(c)` for `c >= 1`, routed through the stable excess form.
#[inline]
pub fn acosh_stable(c: f64) -> f64 {
    acosh_from_excess(c - 1.0)
}

fn side(name: &str, value: f64) -> Result<f64> {
    let v = positive(name, value)?;
    if v < DEGENERATE_SIDE {
        return Err(Error::Domain(format!("{name} = {v} is degenerate")));
    }
    Ok(v)
}

/// A right-angled hexagon given by alternate sides `a, b, c` and their opposites.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hexagon {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub a_opp: f64,
    pub b_opp: f64,
    pub c_opp: f64,
}

/// Side opposite `a` in the right-angled hexagon with alternate sides `a, b, c`.
fn opposite_side(a: f64, b: f64, c: f64) -> f64 {
    // cosh a' - 1 = (cosh a + cosh(b - c)) / (sinh b sinh c)
    let excess = (a.cosh() + (b - c).cosh()) / (b.sinh() * c.sinh());
    acosh_from_excess(excess)
}

/// Solve a right-angled hexagon from three pairwise non-adjacent sides.
pub fn hexagon_solve(a: f64, b: f64, c: f64) -> Result<Hexagon> {
    let a = side("a", a)?;
    let b = side("b", b)?;
    let c = side("c", c)?;
    Ok(Hexagon {
        a,
        b,
        c,
        a_opp: opposite_side(a, b, c),
        b_opp: opposite_side(b, c, a),
        c_opp: opposite_side(c, a, b),
    })
}

impl Hexagon {
    /// The opposite triple `(a', b', c')`.
    pub fn opposite(&self) -> (f64, f64, f64) {
        (self.a_opp, self.b_opp, self.c_opp)
    }

    /// All six sides in cyclic order `a, c', b, a', c, b'`.
    pub fn sides(&self) -> [f64; 6] {
        [self.a, self.c_opp, self.b, self.a_opp, self.c, self.b_opp]
    }

    /// Largest relative residual of `cosh x' sinh y sinh z = cosh x + cosh y cosh z`
    /// over the three cyclic rotations.
    pub fn cosine_rule_residual(&self) -> f64 {
        let rel = |x: f64, y: f64, z: f64, x_opp: f64| {
            let rhs = x.cosh() + y.cosh() * z.cosh();
            (x_opp.cosh() * y.sinh() * z.sinh() - rhs).abs() / rhs
        };
        rel(self.a, self.b, self.c, self.a_opp)
            .max(rel(self.b, self.c, self.a, self.b_opp))
            .max(rel(self.c, self.a, self.b, self.c_opp))
    }

    /// Relative spread of the three sine-rule ratios `sinh x / sinh x'`.
    pub fn sine_rule_residual(&self) -> f64 {
        let r = [
            self.a.sinh() / self.a_opp.sinh(),
            self.b.sinh() / self.b_opp.sinh(),
            self.c.sinh() / self.c_opp.sinh(),
        ];
        let max = r.iter().cloned().fold(f64::MIN, f64::max);
        let min = r.iter().cloned().fold(f64::MAX, f64::min);
        (max - min) / max
    }
}

/// Interval for the opposite sides of a hexagon whose alternate sides lie in
/// `[1/m', m']`: `(acosh(1 + e^{-2/m'}), acosh(m'^2 (e^{m'} + e^{2m'})))`.
///
/// The lower end is evaluated as printed. It is not a valid lower bound near
/// the corner of the band where all alternate sides approach `m'`; see the
/// tests for a concrete counterexample. The upper end holds throughout.
pub fn hexagon_side_bounds(m: f64) -> Result<(f64, f64)> {
    if !(m.is_finite() && m > 1.0) {
        return Err(Error::Domain(format!("band parameter must exceed 1, got {m}")));
    }
    let lower = acosh_from_excess((-2.0 / m).exp());
    let upper = acosh_stable(m * m * (m.exp() + (2.0 * m).exp()));
    Ok((lower, upper))
}

/// Fourth side `c` of a quadrilateral with right angles at both ends of the base `c'`.
///
/// `cosh c = cosh a cosh b cosh c' - sinh a sinh b` when convex,
/// `cosh c = cosh a cosh b cosh c' + sinh a sinh b` otherwise.
pub fn quad_fourth_side(a: f64, b: f64, base: f64, convex: bool) -> Result<f64> {
    let base = side("c'", base)?;
    if convex {
        for (n, v) in [("a", a), ("b", b)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Domain(format!("{n} must be non-negative, got {v}")));
            }
        }
        // cosh a cosh b cosh c' - sinh a sinh b - 1
        //   = (cosh(a - b) - 1) + cosh a cosh b (cosh c' - 1)
        let excess = (a - b).cosh() - 1.0 + a.cosh() * b.cosh() * (base.cosh() - 1.0);
        if excess < -1e-12 {
            return Err(Error::Infeasible(format!(
                "convex quadrilateral would need cosh c = {} < 1",
                1.0 + excess
            )));
        }
        Ok(acosh_from_excess(excess))
    } else {
        let a = side("a", a)?;
        let b = side("b", b)?;
        let excess = (a + b).cosh() - 1.0 + a.cosh() * b.cosh() * (base.cosh() - 1.0);
        Ok(acosh_from_excess(excess))
    }
}

/// A quadrilateral with two adjacent right angles, realized in the hyperboloid model.
///
/// Legs `a` and `b` stand perpendicular on the base `c'` (on the same side of
/// its line when convex, on opposite sides otherwise); the top side is `c`,
/// `alpha` is the angle between `a` and `c`, `beta` the angle between `b` and `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrilateral {
    pub a: f64,
    pub b: f64,
    pub base: f64,
    pub c: f64,
    pub convex: bool,
    pub alpha: f64,
    pub beta: f64,
}

type Vec3 = [f64; 3];

#[inline]
fn minkowski(u: Vec3, v: Vec3) -> f64 {
    -u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

/// Angle at `p` between the geodesics towards `x` and `y`.
fn vertex_angle(p: Vec3, x: Vec3, y: Vec3) -> f64 {
    let tangent = |q: Vec3| {
        let k = minkowski(p, q);
        [q[0] + k * p[0], q[1] + k * p[1], q[2] + k * p[2]]
    };
    let (u, v) = (tangent(x), tangent(y));
    let cos = minkowski(u, v) / (minkowski(u, u) * minkowski(v, v)).sqrt();
    cos.clamp(-1.0, 1.0).acos()
}

impl Quadrilateral {
    pub fn new(a: f64, b: f64, base: f64, convex: bool) -> Result<Self> {
        let a = side("a", a)?;
        let b = side("b", b)?;
        let c = quad_fourth_side(a, b, base, convex)?;
        let sign = if convex { 1.0 } else { -1.0 };
        let foot_a = [1.0, 0.0, 0.0];
        let foot_b = [base.cosh(), base.sinh(), 0.0];
        let top_a = [a.cosh(), 0.0, a.sinh()];
        let top_b = [b.cosh() * foot_b[0], b.cosh() * foot_b[1], sign * b.sinh()];
        Ok(Quadrilateral {
            a,
            b,
            base,
            c,
            convex,
            alpha: vertex_angle(top_a, foot_a, top_b),
            beta: vertex_angle(top_b, foot_b, top_a),
        })
    }

    /// Relative residual of the side relation for the stored `c`.
    pub fn side_residual(&self) -> f64 {
        let sign = if self.convex { -1.0 } else { 1.0 };
        let rhs = self.a.cosh() * self.b.cosh() * self.base.cosh()
            + sign * self.a.sinh() * self.b.sinh();
        (self.c.cosh() - rhs).abs() / rhs
    }

    /// Relative spread of `sinh c / sinh c' = cosh b / sin alpha = cosh a / sin beta`.
    pub fn angle_relation_residual(&self) -> f64 {
        let r = [
            self.c.sinh() / self.base.sinh(),
            self.b.cosh() / self.alpha.sin(),
            self.a.cosh() / self.beta.sin(),
        ];
        let max = r.iter().cloned().fold(f64::MIN, f64::max);
        let min = r.iter().cloned().fold(f64::MAX, f64::min);
        (max - min) / max
    }
}

/// Half-width `arcsinh(1 / sinh(l/2))` of the embedded collar about a geodesic of length `l`.
pub fn collar_width(length: f64) -> Result<f64> {
    let l = positive("length", length)?;
    Ok((1.0 / (0.5 * l).sinh()).asinh())
}

/// Conservative interval `(acosh(1 + e^{-m}), acosh(e^{3m} + e^{2m}))` for
/// boundary-to-boundary geodesic arcs of an X-piece whose hexagon sides lie in `[1/m, m]`.
pub fn arc_bounds(m: f64) -> Result<(f64, f64)> {
    let m = positive("band parameter", m)?;
    let lower = acosh_from_excess((-m).exp());
    let upper = acosh_stable((3.0 * m).exp() + (2.0 * m).exp());
    Ok((lower, upper))
}
