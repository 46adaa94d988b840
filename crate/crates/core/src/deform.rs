//! Twist, length and Dehn-twist deformations of coordinate vectors, and the
//! non-discreteness experiment for short-curve bases.

use serde::Serialize;

use crate::coords::{support_of, xpiece_at, FnVector};
use crate::error::{positive, Error, Result};
use crate::exec::Exec;
use crate::holonomy::{dehn_twist_word, CurveWord};
use crate::hyptrig::collar_width;
use crate::surface::Coord;

/// Fenchel-Nielsen twist: `τ_i += t`.
pub fn twist(x: &FnVector, i: i64, t: f64) -> Result<FnVector> {
    let c = x.coord(i)?;
    x.with_coord(i, Coord { length: c.length, twist: c.twist + t })
}

/// Fenchel-Nielsen length change: `ℓ_i += r`, requiring `ℓ_i + r > 0`.
pub fn lengthen(x: &FnVector, i: i64, r: f64) -> Result<FnVector> {
    let c = x.coord(i)?;
    let length = c.length + r;
    if length.is_nan() || length <= 0.0 {
        return Err(Error::Domain(format!("length of curve {i} would become {length}")));
    }
    x.with_coord(i, Coord { length, twist: c.twist })
}

/// A product of Dehn twists about decomposition curves.
///
/// Factors are stored in the order they act: `(i, n)` first acts by `τ_i += n ℓ_i`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct MappingClassFs {
    factors: Vec<(i64, i32)>,
}

impl MappingClassFs {
    pub fn identity() -> Self {
        Self::default()
    }

    /// `n`-fold Dehn twist about curve `i`.
    pub fn dehn(i: i64, n: i32) -> Self {
        MappingClassFs { factors: vec![(i, n)] }
    }

    pub fn from_factors(factors: Vec<(i64, i32)>) -> Self {
        MappingClassFs { factors }
    }

    pub fn factors(&self) -> &[(i64, i32)] {
        &self.factors
    }

    /// `self ∘ other`: `other` acts first.
    pub fn compose(&self, other: &MappingClassFs) -> MappingClassFs {
        MappingClassFs { factors: other.factors.iter().chain(&self.factors).copied().collect() }
    }

    pub fn inverse(&self) -> MappingClassFs {
        MappingClassFs { factors: self.factors.iter().rev().map(|&(i, n)| (i, -n)).collect() }
    }
}

/// Action on coordinates: each factor `(i, n)` gives `τ_i += n ℓ_i(x)`.
pub fn apply_mcg(x: &FnVector, phi: &MappingClassFs) -> Result<FnVector> {
    let g = x.base_structure().graph();
    for &(i, _) in phi.factors() {
        g.check(i)?;
    }
    let mut y = x.clone();
    for &(i, n) in phi.factors() {
        if n != 0 {
            let l = y.coord_unchecked(i).length;
            y = twist(&y, i, n as f64 * l)?;
        }
    }
    Ok(y)
}

/// Uniform bound `1 + |t| / ω(β)` on the length ratio of any curve under a time-`t`
/// twist about `β`.
pub fn twist_ratio_bound(length: f64, t: f64) -> Result<f64> {
    Ok(1.0 + t.abs() / collar_width(length)?)
}

/// `log(1 + ε / |log ε|)` for `0 < ε < 1`.
pub fn nondiscreteness_bound(eps: f64) -> Result<f64> {
    positive("epsilon", eps)?;
    if eps >= 1.0 {
        return Err(Error::Domain(format!("epsilon must be below 1, got {eps}")));
    }
    Ok((eps / eps.ln().abs()).ln_1p())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NondiscreteRow {
    pub n: i64,
    pub epsilon: f64,
    pub bound: f64,
    /// `(1/2) |log(ℓ(Dα) / ℓ(α))|` for the dual curve `α` and one Dehn twist `D`.
    pub measured: f64,
    /// `log(1 + i(α, β) ε / min(ℓ(α), ℓ(Dα)))`, certified by the triangle inequality.
    pub certified: f64,
    /// `max(0, certified - bound)`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NondiscreteReport {
    pub rows: Vec<NondiscreteRow>,
}

impl NondiscreteReport {
    /// Rows where the measured value exceeds `bound + residual + tol`.
    pub fn violations(&self, tol: f64) -> Vec<NondiscreteRow> {
        self.rows.iter().filter(|r| r.measured > r.bound + r.residual + tol).copied().collect()
    }

    /// Whether the measured column is below `tol` on every row with `ε ≤ tol`.
    pub fn converges(&self, tol: f64) -> bool {
        self.rows.iter().filter(|r| r.epsilon <= tol).all(|r| r.measured <= tol)
    }
}

/// Evaluate one Dehn twist about each curve `1..=n_max` with length below 1.
///
/// The n-th short curve is the curve with index n; `ε_n` is its length in `x`
/// (equal to the base length outside the support of `x`).
pub fn nondiscreteness_experiment(x: &FnVector, n_max: i64, exec: Exec) -> Result<NondiscreteReport> {
    let base = x.base_structure();
    if !base.predicates().admits_short_curves {
        return Err(Error::Precondition("base structure does not admit short curves".into()));
    }
    if support_of(x).is_none() {
        return Err(Error::Precondition("vector is not finitely supported".into()));
    }
    let g = base.graph();
    let indices: Vec<i64> = (1..=n_max).filter(|&i| g.contains(i)).collect();
    let rows = exec.map(&indices, |&n| -> Result<Option<NondiscreteRow>> {
        let eps = x.coord_unchecked(n).length;
        if eps >= 1.0 {
            return Ok(None);
        }
        let rep = xpiece_at(x, n)?;
        let alpha = CurveWord::dual(rep.kind());
        let twisted = dehn_twist_word(&alpha, &rep.beta_word(), 1)?;
        let (la, lt) = (rep.curve_length(&alpha)?, rep.curve_length(&twisted)?);
        let bound = nondiscreteness_bound(eps)?;
        let certified = (alpha.intersection() as f64 * eps / la.min(lt)).ln_1p();
        Ok(Some(NondiscreteRow {
            n,
            epsilon: eps,
            bound,
            measured: 0.5 * (lt / la).ln().abs(),
            certified,
            residual: (certified - bound).max(0.0),
        }))
    });
    let rows = rows.into_iter().filter_map(Result::transpose).collect::<Result<Vec<_>>>()?;
    Ok(NondiscreteReport { rows })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::coords::{classify, d_inf, support_of};
    use crate::surface::{BaseRule, BaseStructure, LengthRule, PantsGraph};

    fn ladder() -> FnVector {
        FnVector::base(Arc::new(BaseStructure::new(PantsGraph::ladder(), BaseRule::constant(1.0)).unwrap()))
    }

    fn short_flute() -> FnVector {
        let rule = BaseRule::new(LengthRule::PowerDecay { scale: 1.0, exponent: 1.0 });
        FnVector::base(Arc::new(BaseStructure::new(PantsGraph::flute(1.0).unwrap(), rule).unwrap()))
    }

    #[test]
    fn twist_basics() {
        let x = ladder();
        assert_eq!(twist(&x, 3, 0.0).unwrap(), x);
        let a = twist(&twist(&x, 3, 0.25).unwrap(), 3, 0.5).unwrap();
        assert_eq!(a, twist(&x, 3, 0.75).unwrap());
        assert_eq!(d_inf(&x, &twist(&x, -2, -1.5).unwrap()).unwrap(), 1.5);
        assert_eq!(support_of(&twist(&x, 5, 1.0).unwrap()), Some([5].into()));
    }

    #[test]
    fn lengthen_basics() {
        let x = ladder();
        assert_eq!(lengthen(&x, 1, 0.0).unwrap(), x);
        let y = lengthen(&x, 1, std::f64::consts::E - 1.0).unwrap();
        assert!((crate::coords::embed(&y).value(1).0 - 1.0).abs() < 1e-15);
        assert!(matches!(lengthen(&x, 1, -1.0), Err(Error::Domain(_))));
        assert!(lengthen(&x, 1, -0.999).is_ok());
    }

    #[test]
    fn deformations_commute_at_distinct_curves() {
        let x = ladder();
        let a = lengthen(&twist(&x, 1, 0.3).unwrap(), 2, 0.7).unwrap();
        let b = twist(&lengthen(&x, 2, 0.7).unwrap(), 1, 0.3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn dehn_twists_act_by_lengths() {
        let x = ladder();
        assert_eq!(apply_mcg(&x, &MappingClassFs::identity()).unwrap(), x);
        let y = apply_mcg(&x, &MappingClassFs::dehn(4, 1)).unwrap();
        assert_eq!(y.coord(4).unwrap().twist, 1.0);
        let z = lengthen(&x, 4, 0.5).unwrap();
        assert_eq!(apply_mcg(&z, &MappingClassFs::dehn(4, 1)).unwrap(), twist(&z, 4, 1.5).unwrap());
        let phi = MappingClassFs::dehn(1, 2);
        let psi = MappingClassFs::dehn(7, -1);
        let both = apply_mcg(&x, &phi.compose(&psi)).unwrap();
        assert_eq!(both, apply_mcg(&apply_mcg(&x, &psi).unwrap(), &phi).unwrap());
        assert_eq!(apply_mcg(&both, &phi.compose(&psi).inverse()).unwrap(), x);
        assert_eq!(classify(&both).unwrap().finest, crate::coords::Class::Fs);
        let flute = short_flute();
        assert_eq!(apply_mcg(&flute, &MappingClassFs::dehn(0, 1)), Err(Error::InvalidIndex(0)));
    }

    #[test]
    fn ratio_bound_values() {
        assert_eq!(twist_ratio_bound(1.0, 0.0).unwrap(), 1.0);
        let l = 2.0 * 1f64.asinh();
        assert!((twist_ratio_bound(l, 0.881373587019543).unwrap() - 2.0).abs() < 1e-12);
        assert!(twist_ratio_bound(0.0, 1.0).is_err());
    }

    #[test]
    fn bound_values() {
        assert!((nondiscreteness_bound(0.01).unwrap() - 0.002169118170797225).abs() < 1e-15);
        assert!(nondiscreteness_bound(1.0).is_err());
        assert!(nondiscreteness_bound(0.0).is_err());
        assert!(nondiscreteness_bound(1e-300).unwrap() < 1e-302);
        let mut prev = 0.0;
        for k in 0..=50 {
            let eps = 10f64.powf(-6.0 + 5.0 * k as f64 / 50.0);
            let b = nondiscreteness_bound(eps).unwrap();
            assert!(b > prev);
            prev = b;
        }
    }

    #[test]
    fn experiment_on_short_flute() {
        let x = short_flute();
        let report = nondiscreteness_experiment(&x, 200, Exec::Sequential).unwrap();
        assert_eq!(report.rows.len(), 199);
        assert!(report.violations(0.0).is_empty());
        for w in report.rows.windows(2) {
            assert!(w[1].bound < w[0].bound);
            assert!(w[1].measured < w[0].measured);
        }
        assert_eq!(report, nondiscreteness_experiment(&x, 200, Exec::Parallel).unwrap());
        assert!(matches!(nondiscreteness_experiment(&ladder(), 5, Exec::Sequential), Err(Error::Precondition(_))));
    }
}
