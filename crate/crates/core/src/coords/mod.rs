//! Fenchel-Nielsen coordinate vectors relative to a base structure, their sequence
//! images, distances and membership classes.

mod classify;
mod metric;
mod series;
mod spectrum;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::surface::{BaseStructure, Coord};

pub use classify::{classify, classify_with, Behaviour, Class, Classification, Denominator, Memberships};
pub use metric::{d_fn, d_inf, density_table, embed, SeqImage, FN_WINDOW};
pub use series::{ratio_limit, Order, Series};
pub use spectrum::{d_ls_lower_bound, xpiece_at, CurveFamily, FamilyKind, LsBound};

/// A deviation profile in the tail index `k >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "profile", rename_all = "snake_case")]
pub enum Profile {
    #[default]
    Zero,
    /// `scale · k^{-exponent}`.
    Decay { scale: f64, exponent: f64 },
    /// `value`.
    Const { value: f64 },
    /// `scale · ln k`.
    LogGrowth { scale: f64 },
    /// `scale · k^{exponent}`.
    PowerGrowth { scale: f64, exponent: f64 },
}

impl Profile {
    pub fn at(&self, k: u64) -> f64 {
        let kf = k.max(1) as f64;
        match *self {
            Profile::Zero => 0.0,
            Profile::Decay { scale, exponent } => scale * kf.powf(-exponent),
            Profile::Const { value } => value,
            Profile::LogGrowth { scale } => scale * kf.ln(),
            Profile::PowerGrowth { scale, exponent } => scale * kf.powf(exponent),
        }
    }

    pub fn series(&self) -> Series {
        match *self {
            Profile::Zero => Series::default(),
            Profile::Decay { scale, exponent } => Series::decay(scale, exponent),
            Profile::Const { value } => Series::constant(value),
            Profile::LogGrowth { scale } => Series::log(scale),
            Profile::PowerGrowth { scale, exponent } => Series::power(scale, exponent),
        }
    }

    /// Profiles with a zero coefficient collapse to `Zero`.
    pub fn normalized(self) -> Self {
        let zero = match self {
            Profile::Zero => true,
            Profile::Decay { scale, .. } | Profile::LogGrowth { scale } | Profile::PowerGrowth { scale, .. } => {
                scale == 0.0
            }
            Profile::Const { value } => value == 0.0,
        };
        if zero {
            Profile::Zero
        } else {
            self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::Domain(format!("{name} must be finite, got {v}")))
            }
        };
        let exponent = |v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Domain(format!("profile exponent must be positive, got {v}")))
            }
        };
        match *self {
            Profile::Zero => Ok(()),
            Profile::Decay { scale, exponent: e } | Profile::PowerGrowth { scale, exponent: e } => {
                finite("profile scale", scale)?;
                exponent(e)
            }
            Profile::Const { value } => finite("profile value", value),
            Profile::LogGrowth { scale } => finite("profile scale", scale),
        }
    }
}

/// Behaviour beyond the overrides: `log(ℓ_i / ℓ⁰_i) = length(k)` and
/// `τ_i - τ⁰_i = twist(k)` with `k` the tail index of curve `i`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub struct TailRule {
    pub length: Profile,
    pub twist: Profile,
}

impl TailRule {
    /// Agree with the base beyond the overrides.
    pub const BASE: TailRule = TailRule { length: Profile::Zero, twist: Profile::Zero };

    /// `log(ℓ/ℓ⁰) = c k^{-p}`, `τ - τ⁰ = c' k^{-q}`.
    pub fn log_decay(c: f64, p: f64, c_twist: f64, q: f64) -> Self {
        TailRule {
            length: Profile::Decay { scale: c, exponent: p },
            twist: Profile::Decay { scale: c_twist, exponent: q },
        }
    }

    /// Constant log-ratio `c` and twist offset `c'`.
    pub fn const_offset(c: f64, c_twist: f64) -> Self {
        TailRule { length: Profile::Const { value: c }, twist: Profile::Const { value: c_twist } }
    }

    pub fn is_base(&self) -> bool {
        self.length == Profile::Zero && self.twist == Profile::Zero
    }

    fn normalized(self) -> Self {
        TailRule { length: self.length.normalized(), twist: self.twist.normalized() }
    }
}

/// A marked hyperbolic structure in Fenchel-Nielsen coordinates relative to a base:
/// finitely many explicit coordinates plus an analytic tail rule.
///
/// Overrides equal to what the tail would give are dropped on construction, so the
/// override set is the support relative to the tail. On finite graphs the tail is
/// materialized into overrides.
#[derive(Debug, Clone)]
pub struct FnVector {
    base: Arc<BaseStructure>,
    overrides: BTreeMap<i64, Coord>,
    tail: TailRule,
}

impl PartialEq for FnVector {
    fn eq(&self, other: &Self) -> bool {
        self.same_base(other) && self.overrides == other.overrides && self.tail == other.tail
    }
}

impl FnVector {
    pub fn base(base: Arc<BaseStructure>) -> Self {
        FnVector { base, overrides: BTreeMap::new(), tail: TailRule::BASE }
    }

    pub fn new(base: Arc<BaseStructure>, overrides: BTreeMap<i64, Coord>, tail: TailRule) -> Result<Self> {
        tail.length.validate()?;
        tail.twist.validate()?;
        for (&i, c) in &overrides {
            base.graph().check(i)?;
            Coord::new(c.length, c.twist)?;
        }
        let mut x = FnVector { base, overrides, tail: tail.normalized() };
        if let Some(curves) = x.base.graph().finite_curves() {
            for i in curves {
                let c = x.coord_unchecked(i);
                x.overrides.insert(i, c);
            }
            x.tail = TailRule::BASE;
        }
        for c in x.overrides.values() {
            // tails can push lengths out of range of f64
            Coord::new(c.length, c.twist)?;
        }
        x.normalize();
        Ok(x)
    }

    pub fn with_tail(base: Arc<BaseStructure>, tail: TailRule) -> Result<Self> {
        FnVector::new(base, BTreeMap::new(), tail)
    }

    fn normalize(&mut self) {
        let base = &self.base;
        let tail = self.tail;
        self.overrides.retain(|&i, c| *c != tail_coord(base, &tail, i));
    }

    pub fn base_structure(&self) -> &Arc<BaseStructure> {
        &self.base
    }

    pub fn overrides(&self) -> &BTreeMap<i64, Coord> {
        &self.overrides
    }

    pub fn tail(&self) -> TailRule {
        self.tail
    }

    pub fn same_base(&self, other: &FnVector) -> bool {
        Arc::ptr_eq(&self.base, &other.base) || *self.base == *other.base
    }

    pub(crate) fn require_same_base(&self, other: &FnVector) -> Result<()> {
        if self.same_base(other) {
            Ok(())
        } else {
            Err(Error::IncompatibleBase)
        }
    }

    pub fn coord_unchecked(&self, i: i64) -> Coord {
        match self.overrides.get(&i) {
            Some(c) => *c,
            None => tail_coord(&self.base, &self.tail, i),
        }
    }

    pub fn coord(&self, i: i64) -> Result<Coord> {
        self.base.graph().check(i)?;
        Ok(self.coord_unchecked(i))
    }

    pub fn length(&self, i: i64) -> Result<f64> {
        self.coord(i).map(|c| c.length)
    }

    /// Copy with coordinate `i` replaced.
    pub fn with_coord(&self, i: i64, c: Coord) -> Result<FnVector> {
        self.base.graph().check(i)?;
        let c = Coord::new(c.length, c.twist)?;
        let mut x = self.clone();
        x.overrides.insert(i, c);
        x.normalize();
        Ok(x)
    }

    /// Largest tail index carrying an override.
    pub fn horizon(&self) -> u64 {
        let g = self.base.graph();
        self.overrides.keys().map(|&i| g.tail_index(i)).max().unwrap_or(0)
    }
}

fn tail_coord(base: &BaseStructure, tail: &TailRule, i: i64) -> Coord {
    let c0 = base.coord_unchecked(i);
    if tail.is_base() {
        return c0;
    }
    let k = base.graph().tail_index(i);
    Coord { length: c0.length * tail.length.at(k).exp(), twist: c0.twist + tail.twist.at(k) }
}

/// Curves where `x` differs from the base, or `None` when that set is infinite.
pub fn support_of(x: &FnVector) -> Option<BTreeSet<i64>> {
    if !x.tail.is_base() {
        return None;
    }
    Some(x.overrides.keys().copied().collect())
}

/// Finitely supported vector agreeing with `x` on curves of tail index at most `n`
/// and with the base beyond.
pub fn truncate(x: &FnVector, n: u64) -> FnVector {
    let graph = x.base.graph();
    let mut overrides: BTreeMap<i64, Coord> =
        x.overrides.iter().filter(|(&i, _)| graph.tail_index(i) <= n).map(|(&i, &c)| (i, c)).collect();
    if !x.tail.is_base() {
        for i in graph.indices_up_to(n) {
            overrides.entry(i).or_insert_with(|| x.coord_unchecked(i));
        }
    }
    let mut t = FnVector { base: x.base.clone(), overrides, tail: TailRule::BASE };
    t.normalize();
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{BaseRule, PantsGraph};

    fn flute() -> Arc<BaseStructure> {
        Arc::new(BaseStructure::new(PantsGraph::flute(1.0).unwrap(), BaseRule::constant(1.0)).unwrap())
    }

    #[test]
    fn noop_overrides_are_dropped() {
        let b = flute();
        let mut ov = BTreeMap::new();
        ov.insert(2, Coord { length: 2.0, twist: 0.0 });
        ov.insert(4, Coord { length: 1.0, twist: 0.0 });
        ov.insert(7, Coord { length: 1.0, twist: 0.5 });
        let x = FnVector::new(b.clone(), ov, TailRule::BASE).unwrap();
        assert_eq!(support_of(&x), Some(BTreeSet::from([2, 7])));
        assert_eq!(support_of(&FnVector::base(b.clone())), Some(BTreeSet::new()));
        let decay = FnVector::with_tail(b, TailRule::log_decay(1.0, 1.0, 0.0, 1.0)).unwrap();
        assert_eq!(support_of(&decay), None);
    }

    #[test]
    fn truncation() {
        let b = flute();
        let x = FnVector::with_tail(b.clone(), TailRule::log_decay(1.0, 1.0, 0.0, 1.0)).unwrap();
        let t = truncate(&x, 3);
        assert_eq!(support_of(&t), Some(BTreeSet::from([1, 2, 3])));
        assert_eq!(t.coord(2).unwrap(), x.coord(2).unwrap());
        assert_eq!(t.coord(4).unwrap(), b.coord(4).unwrap());
        let base = FnVector::base(b);
        assert_eq!(truncate(&base, 10), base);
    }

    #[test]
    fn finite_graphs_materialize_tails() {
        let g = PantsGraph::caterpillar(2, 1, 0, 1.0).unwrap();
        let b = Arc::new(BaseStructure::new(g, BaseRule::constant(1.0)).unwrap());
        let x = FnVector::with_tail(b, TailRule::const_offset(0.5, 0.0)).unwrap();
        assert!(x.tail().is_base());
        assert_eq!(x.overrides().len(), 4);
        assert!((x.length(3).unwrap() - 0.5f64.exp()).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_input() {
        let b = flute();
        let mut ov = BTreeMap::new();
        ov.insert(0, Coord { length: 1.0, twist: 0.0 });
        assert_eq!(FnVector::new(b.clone(), ov, TailRule::BASE), Err(Error::InvalidIndex(0)));
        let bad = TailRule { length: Profile::Decay { scale: 1.0, exponent: -1.0 }, twist: Profile::Zero };
        assert!(FnVector::with_tail(b.clone(), bad).is_err());
        let huge = TailRule { length: Profile::PowerGrowth { scale: 1.0, exponent: 1.0 }, twist: Profile::Zero };
        // fine on an infinite graph: lengths are only evaluated on demand
        assert!(FnVector::with_tail(b, huge).is_ok());
    }

    #[test]
    fn profiles_normalize() {
        assert_eq!(Profile::Const { value: 0.0 }.normalized(), Profile::Zero);
        assert_eq!(Profile::LogGrowth { scale: 0.0 }.normalized(), Profile::Zero);
        let t = TailRule::log_decay(0.0, 1.0, 0.0, 2.0);
        let x = FnVector::with_tail(flute(), t).unwrap();
        assert!(x.tail().is_base());
    }
}
