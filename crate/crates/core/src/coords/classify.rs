use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::surface::BaseStructure;

use super::metric::{base_log_series, embed};
use super::series::{Order, Series};
use super::{FnVector, Profile};

/// Membership classes, from finest to coarsest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Class {
    Fs,
    ZeroQc,
    ZeroLs,
    Qc,
    Ls,
    Outside,
}

impl Class {
    pub fn name(self) -> &'static str {
        match self {
            Class::Fs => "fs",
            Class::ZeroQc => "zero_qc",
            Class::ZeroLs => "zero_ls",
            Class::Qc => "qc",
            Class::Ls => "ls",
            Class::Outside => "outside",
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Memberships {
    pub fs: bool,
    pub zero_qc: bool,
    pub zero_ls: bool,
    pub qc: bool,
    pub ls: bool,
}

impl Memberships {
    /// `fs ⊆ zero_qc ⊆ zero_ls ⊆ ls` and `zero_qc ⊆ qc ⊆ ls`.
    pub fn is_nested(&self) -> bool {
        let implies = |a: bool, b: bool| !a || b;
        implies(self.fs, self.zero_qc)
            && implies(self.zero_qc, self.zero_ls)
            && implies(self.zero_ls, self.ls)
            && implies(self.zero_qc, self.qc)
            && implies(self.qc, self.ls)
    }

    /// Finest class. When a vector is both `zero_ls` and `qc` (the two are not nested),
    /// `zero_ls` is reported; both memberships remain visible in the flags.
    pub fn finest(&self) -> Class {
        if self.fs {
            Class::Fs
        } else if self.zero_qc {
            Class::ZeroQc
        } else if self.zero_ls {
            Class::ZeroLs
        } else if self.qc {
            Class::Qc
        } else if self.ls {
            Class::Ls
        } else {
            Class::Outside
        }
    }
}

/// Which lengths normalize the twist offsets in the length-spectrum conditions:
/// `max(1, |log ℓ⁰_i|)` from the base, or `max(1, |log ℓ_i|)` from the vector itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Denominator {
    #[default]
    Base,
    Target,
}

/// Asymptotic behaviour of a tail sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Behaviour {
    Vanishing,
    /// Bounded, converging to a nonzero limit.
    Converges(f64),
    Unbounded,
}

impl Behaviour {
    pub fn is_bounded(self) -> bool {
        !matches!(self, Behaviour::Unbounded)
    }

    pub fn vanishes(self) -> bool {
        matches!(self, Behaviour::Vanishing)
    }

    fn of(s: &Series) -> Behaviour {
        match s.limit() {
            None => Behaviour::Unbounded,
            Some(0.0) => Behaviour::Vanishing,
            Some(c) => Behaviour::Converges(c),
        }
    }
}

impl fmt::Display for Behaviour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Behaviour::Vanishing => f.write_str("->0"),
            Behaviour::Converges(c) => write!(f, "->{c}"),
            Behaviour::Unbounded => f.write_str("unbounded"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Classification {
    pub finest: Class,
    pub memberships: Memberships,
    /// Overrides when the support is finite.
    pub support: Option<usize>,
    /// `sup |log(ℓ_i/ℓ⁰_i)|` and `sup |τ_i - τ⁰_i|` (possibly infinite).
    pub length_sup: f64,
    pub twist_sup: f64,
    pub length_tail: Behaviour,
    pub twist_tail: Behaviour,
    /// Twist offsets over `max(1, |log ℓ|)` along the tail.
    pub twist_ratio_tail: Behaviour,
}

/// Growth of `max(1, |log ℓ_k|)` given the series of `log ℓ_k`.
fn denominator_growth(log_length: &Series) -> Option<(Order, f64)> {
    match log_length.leading() {
        Some((o @ (Order::Log | Order::Power(_)), c)) => Some((o, c.abs())),
        _ => None,
    }
}

/// Behaviour of `twist(k) / max(1, |log ℓ_k|)`.
fn twist_ratio(twist: &Profile, log_length: &Series) -> Behaviour {
    let num = twist.series();
    let Some((order, coef)) = denominator_growth(log_length) else {
        let d = log_length.limit().map_or(1.0, |l| l.abs().max(1.0));
        return match Behaviour::of(&num) {
            Behaviour::Converges(c) => Behaviour::Converges(c / d),
            other => other,
        };
    };
    match num.leading() {
        None => Behaviour::Vanishing,
        Some((o, c)) => {
            if o < order {
                Behaviour::Vanishing
            } else if o == order {
                Behaviour::Converges(c / coef)
            } else {
                Behaviour::Unbounded
            }
        }
    }
}

fn tail_behaviour(base: &BaseStructure, x: &FnVector, denominator: Denominator) -> (Behaviour, Behaviour, Behaviour) {
    let tail = x.tail();
    let length = Behaviour::of(&tail.length.series());
    let twist = Behaviour::of(&tail.twist.series());
    let mut log_len = base_log_series(&base.rule().lengths);
    if denominator == Denominator::Target {
        log_len = log_len.add(&tail.length.series());
    }
    (length, twist, twist_ratio(&tail.twist, &log_len))
}

/// Classify with the base-length denominator.
pub fn classify(x: &FnVector) -> Result<Classification> {
    classify_with(x, Denominator::Base)
}

/// Membership of `x` in the finitely supported, asymptotically conformal, asymptotically
/// isometric, quasiconformal and length-spectrum classes, decided from the tail rule.
///
/// Each membership is computed independently:
/// `fs` iff the tail is the base tail; `zero_qc` iff both sequence components tend to
/// zero; `zero_ls` iff the log-ratio tends to zero and the twist offset over
/// `max(1, |log ℓ|)` tends to zero; `qc` iff both components are bounded; `ls` iff the
/// log-ratio and the normalized twist offset are bounded.
pub fn classify_with(x: &FnVector, denominator: Denominator) -> Result<Classification> {
    let base = x.base_structure();
    if !base.predicates().upper_bounded {
        return Err(Error::Precondition("classification needs an upper bounded base".into()));
    }
    let image = embed(x);
    let [length_sup, twist_sup] = image.component_sups();
    let (length_tail, twist_tail, twist_ratio_tail) = if base.graph().is_finite() {
        (Behaviour::Vanishing, Behaviour::Vanishing, Behaviour::Vanishing)
    } else {
        tail_behaviour(base, x, denominator)
    };
    let memberships = Memberships {
        fs: x.tail().is_base(),
        zero_qc: length_tail.vanishes() && twist_tail.vanishes(),
        zero_ls: length_tail.vanishes() && twist_ratio_tail.vanishes(),
        qc: length_tail.is_bounded() && twist_tail.is_bounded(),
        ls: length_tail.is_bounded() && twist_ratio_tail.is_bounded(),
    };
    let support = x.tail().is_base().then(|| x.overrides().len());
    Ok(Classification {
        finest: memberships.finest(),
        memberships,
        support,
        length_sup,
        twist_sup,
        length_tail,
        twist_tail,
        twist_ratio_tail,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::coords::TailRule;
    use crate::surface::{BaseRule, LengthRule, PantsGraph};

    fn base(rule: LengthRule) -> Arc<BaseStructure> {
        Arc::new(BaseStructure::new(PantsGraph::ladder(), BaseRule::new(rule)).unwrap())
    }

    fn constant() -> Arc<BaseStructure> {
        base(LengthRule::Constant { value: 1.0 })
    }

    #[test]
    fn base_is_finitely_supported() {
        let c = classify(&FnVector::base(constant())).unwrap();
        assert_eq!(c.finest, Class::Fs);
        let m = c.memberships;
        assert!(m.fs && m.zero_qc && m.zero_ls && m.qc && m.ls);
        assert_eq!(c.support, Some(0));
    }

    #[test]
    fn decaying_lengths_are_asymptotically_conformal() {
        let x = FnVector::with_tail(constant(), TailRule::log_decay(1.0, 1.0, 0.0, 1.0)).unwrap();
        let c = classify(&x).unwrap();
        assert_eq!(c.finest, Class::ZeroQc);
        assert!(!c.memberships.fs);
        assert_eq!(c.length_sup, 1.0);
    }

    #[test]
    fn constant_twist_offset_is_qc() {
        let x = FnVector::with_tail(constant(), TailRule::const_offset(0.0, 5.0)).unwrap();
        let c = classify(&x).unwrap();
        assert!(c.memberships.qc && !c.memberships.zero_qc && !c.memberships.zero_ls);
        assert_eq!(c.finest, Class::Qc);
        assert_eq!(c.twist_sup, 5.0);
    }

    #[test]
    fn log_twist_over_short_curves_is_ls_not_qc() {
        let b = base(LengthRule::PowerDecay { scale: 1.0, exponent: 1.0 });
        let tail = TailRule { length: Profile::Zero, twist: Profile::LogGrowth { scale: 0.5 } };
        let c = classify(&FnVector::with_tail(b, tail).unwrap()).unwrap();
        assert_eq!(c.finest, Class::Ls);
        assert!(!c.memberships.qc && !c.memberships.zero_ls);
        assert_eq!(c.twist_ratio_tail, Behaviour::Converges(0.5));
    }

    #[test]
    fn constant_twist_over_short_curves_is_zero_ls_and_qc() {
        let b = base(LengthRule::PowerDecay { scale: 1.0, exponent: 2.0 });
        let x = FnVector::with_tail(b, TailRule::const_offset(0.0, 1.0)).unwrap();
        let c = classify(&x).unwrap();
        assert!(c.memberships.zero_ls && c.memberships.qc && !c.memberships.zero_qc);
        assert_eq!(c.finest, Class::ZeroLs);
    }

    #[test]
    fn unbounded_lengths_are_outside() {
        let tail = TailRule { length: Profile::LogGrowth { scale: 1.0 }, twist: Profile::Zero };
        let c = classify(&FnVector::with_tail(constant(), tail).unwrap()).unwrap();
        assert_eq!(c.finest, Class::Outside);
        assert!(c.memberships.is_nested());
    }

    #[test]
    fn unbounded_base_is_rejected() {
        let b = base(LengthRule::CappedGrowth { scale: 1.0, exponent: 1.0, cap: None });
        assert!(matches!(classify(&FnVector::base(b)), Err(Error::Precondition(_))));
    }

    #[test]
    fn target_denominator_agrees_on_bounded_lengths() {
        let b = base(LengthRule::PowerDecay { scale: 1.0, exponent: 1.0 });
        for tail in [
            TailRule { length: Profile::Const { value: 2.0 }, twist: Profile::LogGrowth { scale: 0.5 } },
            TailRule { length: Profile::Decay { scale: 1.0, exponent: 1.0 }, twist: Profile::Const { value: 3.0 } },
            TailRule { length: Profile::Zero, twist: Profile::PowerGrowth { scale: 1.0, exponent: 0.5 } },
        ] {
            let x = FnVector::with_tail(b.clone(), tail).unwrap();
            let a = classify_with(&x, Denominator::Base).unwrap();
            let t = classify_with(&x, Denominator::Target).unwrap();
            assert_eq!(a.memberships, t.memberships);
        }
    }
}
