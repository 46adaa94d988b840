use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::surface::{BaseStructure, LengthRule};

use super::series::{ratio_limit, Series};
use super::{truncate, FnVector};

/// Number of leading tail indices enumerated explicitly by [`d_fn`].
pub const FN_WINDOW: u64 = 4096;

/// The double sequence `(log(ℓ_i/ℓ⁰_i), τ_i - τ⁰_i)` of a vector: finitely many
/// explicit entries and a closed-form tail in the tail index.
#[derive(Debug, Clone)]
pub struct SeqImage {
    base: Arc<BaseStructure>,
    entries: BTreeMap<i64, (f64, f64)>,
    length: Series,
    twist: Series,
    sup_norm: f64,
}

impl SeqImage {
    fn new(base: Arc<BaseStructure>, entries: BTreeMap<i64, (f64, f64)>, length: Series, twist: Series) -> Self {
        let mut s = SeqImage { base, entries, length, twist, sup_norm: 0.0 };
        s.sup_norm = s.component_sups().iter().fold(0.0, |a, &b| a.max(b));
        s
    }

    pub fn entries(&self) -> &BTreeMap<i64, (f64, f64)> {
        &self.entries
    }

    pub fn length_tail(&self) -> &Series {
        &self.length
    }

    pub fn twist_tail(&self) -> &Series {
        &self.twist
    }

    pub fn value(&self, i: i64) -> (f64, f64) {
        match self.entries.get(&i) {
            Some(&v) => v,
            None => {
                let k = self.base.graph().tail_index(i);
                (self.length.at(k), self.twist.at(k))
            }
        }
    }

    fn horizon(&self) -> u64 {
        let g = self.base.graph();
        self.entries.keys().map(|&i| g.tail_index(i)).max().unwrap_or(0)
    }

    /// `[sup |log-ratio|, sup |twist offset|]`: explicit up to the last entry, then the
    /// exact supremum of the closed-form tail.
    pub fn component_sups(&self) -> [f64; 2] {
        let g = self.base.graph();
        let curves = match g.finite_curves() {
            Some(c) => c,
            None => g.indices_up_to(self.horizon()),
        };
        let mut sups = [0.0f64; 2];
        for i in curves {
            let (l, t) = self.value(i);
            sups[0] = sups[0].max(l.abs());
            sups[1] = sups[1].max(t.abs());
        }
        if !g.is_finite() {
            let k = self.horizon() + 1;
            sups[0] = sups[0].max(self.length.sup_abs_from(k));
            sups[1] = sups[1].max(self.twist.sup_abs_from(k));
        }
        sups
    }

    pub fn sup_norm(&self) -> f64 {
        self.sup_norm
    }

    pub fn sub(&self, other: &SeqImage) -> Result<SeqImage> {
        if !(Arc::ptr_eq(&self.base, &other.base) || *self.base == *other.base) {
            return Err(Error::IncompatibleBase);
        }
        let mut entries = BTreeMap::new();
        for &i in self.entries.keys().chain(other.entries.keys()) {
            let (a, b) = (self.value(i), other.value(i));
            entries.insert(i, (a.0 - b.0, a.1 - b.1));
        }
        Ok(SeqImage::new(self.base.clone(), entries, self.length.sub(&other.length), self.twist.sub(&other.twist)))
    }
}

/// Image of `x` in the sequence space; the base maps to zero.
pub fn embed(x: &FnVector) -> SeqImage {
    let base = x.base_structure();
    let entries = x
        .overrides()
        .iter()
        .map(|(&i, c)| {
            let c0 = base.coord_unchecked(i);
            (i, ((c.length / c0.length).ln(), c.twist - c0.twist))
        })
        .collect();
    let tail = x.tail();
    SeqImage::new(base.clone(), entries, tail.length.series(), tail.twist.series())
}

/// `sup_i max(|log(ℓ_i(x)/ℓ_i(y))|, |τ_i(x) - τ_i(y)|)`, the sup-norm distance of the
/// sequence images.
pub fn d_inf(x: &FnVector, y: &FnVector) -> Result<f64> {
    x.require_same_base(y)?;
    Ok(embed(x).sub(&embed(y))?.sup_norm())
}

/// `log ℓ⁰_k` along the tail of a base rule.
pub(crate) fn base_log_series(rule: &LengthRule) -> Series {
    match *rule {
        LengthRule::Constant { value } => Series::constant(value.ln()),
        LengthRule::PowerDecay { scale, exponent } => Series::constant(scale.ln()).add(&Series::log(-exponent)),
        LengthRule::CappedGrowth { cap: Some(cap), .. } => Series::constant(cap.ln()),
        LengthRule::CappedGrowth { scale, exponent, cap: None } => {
            Series::constant(scale.ln()).add(&Series::log(exponent))
        }
    }
}

fn log_quotient(lx: f64, ly: f64) -> f64 {
    if ly == 0.0 {
        if lx == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        (lx / ly).abs()
    }
}

/// `sup_i max(|log ℓ_i(x) / log ℓ_i(y)|, |τ_i(x) - τ_i(y)|)` taken literally.
///
/// A curve with `ℓ_i(y) = 1 ≠ ℓ_i(x)` makes the value `+∞` and `0/0` counts as `1`.
/// Each length quotient of a vector with itself is 1, so `d_fn(x, x) = 1`: this is
/// not a metric, and [`d_inf`] is the distance used elsewhere. The length quotient is
/// enumerated over the first [`FN_WINDOW`] tail indices (and all overrides) and
/// completed by its limit along the tail; the twist part is exact.
pub fn d_fn(x: &FnVector, y: &FnVector) -> Result<f64> {
    x.require_same_base(y)?;
    let base = x.base_structure();
    let g = base.graph();
    let twist_sup = embed(x).sub(&embed(y))?.component_sups()[1];
    let curves = match g.finite_curves() {
        Some(c) => c,
        None => {
            let base_horizon = base.rule().overrides.keys().map(|&i| g.tail_index(i)).max().unwrap_or(0);
            g.indices_up_to(FN_WINDOW.max(x.horizon()).max(y.horizon()).max(base_horizon))
        }
    };
    let mut sup = twist_sup;
    for i in curves {
        let (a, b) = (x.coord_unchecked(i), y.coord_unchecked(i));
        sup = sup.max(log_quotient(a.length.ln(), b.length.ln()));
    }
    if !g.is_finite() {
        let lb = base_log_series(&base.rule().lengths);
        let lx = lb.add(&x.tail().length.series());
        let ly = lb.add(&y.tail().length.series());
        sup = sup.max(ratio_limit(&lx, &ly));
    }
    Ok(sup)
}

/// `(n, d_inf(truncate(x, n), x))` for each requested `n`.
pub fn density_table(x: &FnVector, ns: &[u64], exec: Exec) -> Vec<(u64, f64)> {
    exec.map(ns, |&n| {
        let t = truncate(x, n);
        (n, d_inf(&t, x).expect("a truncation shares the base of its source"))
    })
}
