//! Pants decompositions (finite, ladder, flute) and base structures over them.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{positive, Error, Result};
use crate::holonomy::XKind;

/// Number of interior curves of a pants decomposition of a surface of genus `g` with
/// `b` holes (boundary components and punctures counted together).
pub fn curve_count(g: i64, b: i64) -> Result<i64> {
    let n = 3 * g - 3 + b;
    if g < 0 || b < 0 || n < 0 {
        return Err(Error::Domain(format!("genus {g} with {b} holes has no pants decomposition")));
    }
    Ok(n)
}

/// Number of generalized pairs of pants for genus `g`, `b` boundaries and `p` punctures.
pub fn pants_count(g: i64, b: i64, p: i64) -> Result<i64> {
    let n = 2 * g - 2 + b + p;
    if g < 0 || b < 0 || p < 0 || n < 1 {
        return Err(Error::Domain(format!(
            "signature ({g}, {b}, {p}) is not hyperbolic: 2g - 2 + b + p = {n}"
        )));
    }
    Ok(n)
}

/// One of the three cuffs of a pair of pants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Slot {
    /// An interior decomposition curve.
    Curve(i64),
    /// A geodesic boundary component of the given length.
    Boundary(f64),
    /// A cusp.
    Puncture,
}

impl Slot {
    pub fn curve(&self) -> Option<i64> {
        match self {
            Slot::Curve(i) => Some(*i),
            _ => None,
        }
    }
}

/// The X-piece around an interior curve.
///
/// For a four-holed sphere `boundary` holds the other two cuffs of the first pants
/// followed by the other two cuffs of the second; for a one-holed torus it holds the
/// single remaining cuff.
#[derive(Debug, Clone, PartialEq)]
pub struct XPiece {
    pub curve: i64,
    pub kind: XKind,
    pub pants: [i64; 2],
    pub boundary: Vec<Slot>,
}

impl XPiece {
    pub fn neighbours(&self) -> impl Iterator<Item = i64> + '_ {
        self.boundary.iter().filter_map(Slot::curve)
    }
}

#[derive(Debug, Clone, PartialEq)]
struct FiniteGraph {
    pants: Vec<[Slot; 3]>,
    /// curve -> (pants, slot) incidences, always exactly two
    incidence: BTreeMap<i64, [(usize, usize); 2]>,
    genus: i64,
    boundaries: i64,
    punctures: i64,
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Finite(FiniteGraph),
    Ladder,
    Flute { hole: f64 },
}

/// Combinatorics of a pants decomposition.
///
/// Infinite graphs are described by rules. The *ladder* is a bi-infinite chain of
/// handles with two non-planar ends; curves are indexed by all integers with
/// `C_{3j} = w_j`, `C_{3j+1} = s_j`, `C_{3j+2} = m_j`, pants `Q_j = (w_j, w_{j+1}, s_j)`
/// and `R_j = (s_j, m_j, m_j)`. The *flute* is a one-ended planar chain with curves
/// `C_1, C_2, ...`, pants `P_0 = (∂, ∂, C_1)` and `P_k = (C_k, C_{k+1}, ∂)`, where every
/// `∂` is a boundary hole of a fixed length.
#[derive(Debug, Clone, PartialEq)]
pub struct PantsGraph {
    shape: Shape,
}

/// A family of infinite pants graphs, used by the structured-text format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Finite,
    Ladder,
    Flute,
}

impl PantsGraph {
    pub fn ladder() -> Self {
        PantsGraph { shape: Shape::Ladder }
    }

    pub fn flute(hole_length: f64) -> Result<Self> {
        positive("hole length", hole_length)?;
        Ok(PantsGraph { shape: Shape::Flute { hole: hole_length } })
    }

    /// Finite graph from an explicit list of pants. Every curve index must occur in
    /// exactly two slots.
    pub fn finite(pants: Vec<[Slot; 3]>) -> Result<Self> {
        if pants.is_empty() {
            return Err(Error::Malformed("a pants decomposition needs at least one pair of pants".into()));
        }
        let mut seen: BTreeMap<i64, Vec<(usize, usize)>> = BTreeMap::new();
        let (mut boundaries, mut punctures) = (0i64, 0i64);
        for (p, slots) in pants.iter().enumerate() {
            for (k, slot) in slots.iter().enumerate() {
                match *slot {
                    Slot::Curve(i) => seen.entry(i).or_default().push((p, k)),
                    Slot::Boundary(l) => {
                        positive("boundary length", l)?;
                        boundaries += 1;
                    }
                    Slot::Puncture => punctures += 1,
                }
            }
        }
        let mut incidence = BTreeMap::new();
        for (i, occ) in seen {
            if occ.len() != 2 {
                return Err(Error::Malformed(format!("curve {i} occurs in {} slots, expected 2", occ.len())));
            }
            incidence.insert(i, [occ[0], occ[1]]);
        }
        if !connected(pants.len(), &incidence) {
            return Err(Error::Malformed("pants decomposition is not connected".into()));
        }
        // Euler characteristic: -|pants| = 2 - 2g - b - p
        let twice_genus = pants.len() as i64 + 2 - boundaries - punctures;
        if twice_genus < 0 || twice_genus % 2 != 0 {
            return Err(Error::Malformed("pants list does not describe an orientable surface".into()));
        }
        let genus = twice_genus / 2;
        let graph = FiniteGraph { pants, incidence, genus, boundaries, punctures };
        debug_assert_eq!(
            curve_count(genus, boundaries + punctures).ok(),
            Some(graph.incidence.len() as i64)
        );
        Ok(PantsGraph { shape: Shape::Finite(graph) })
    }

    /// Standard decomposition of a surface of genus `g` with `b` boundary holes of length
    /// `hole_length` and `p` punctures: handles and holes hang off a chain of pants.
    /// Curves are numbered `1..=3g-3+b+p`.
    pub fn caterpillar(g: u32, b: u32, p: u32, hole_length: f64) -> Result<Self> {
        positive("hole length", hole_length)?;
        pants_count(g as i64, b as i64, p as i64)?;
        let mut next = 0i64;
        let mut fresh = || {
            next += 1;
            next
        };
        let handles: Vec<i64> = (0..g).map(|_| fresh()).collect();
        let mut pants = Vec::new();
        if g + b + p == 2 {
            // (1,1,0), (1,0,1) or (2,0,0): handles glued directly
            let other = match (g, b) {
                (2, _) => {
                    let c = fresh();
                    pants.push([Slot::Curve(handles[1]), Slot::Curve(handles[1]), Slot::Curve(c)]);
                    Slot::Curve(c)
                }
                (_, 1) => Slot::Boundary(hole_length),
                _ => Slot::Puncture,
            };
            pants.push([Slot::Curve(handles[0]), Slot::Curve(handles[0]), other]);
            return PantsGraph::finite(pants);
        }
        let mut leaf_slots = Vec::new();
        for &m in &handles {
            let c = fresh();
            pants.push([Slot::Curve(m), Slot::Curve(m), Slot::Curve(c)]);
            leaf_slots.push(Slot::Curve(c));
        }
        leaf_slots.extend((0..b).map(|_| Slot::Boundary(hole_length)));
        leaf_slots.extend((0..p).map(|_| Slot::Puncture));
        let total = leaf_slots.len();
        // chain K_1 .. K_{L-2}
        let mut prev = leaf_slots[0];
        for (n, &leaf) in leaf_slots.iter().enumerate().skip(1).take(total - 2) {
            let right = if n == total - 2 { leaf_slots[total - 1] } else { Slot::Curve(fresh()) };
            pants.push([prev, leaf, right]);
            prev = right;
        }
        PantsGraph::finite(pants)
    }

    pub fn family(&self) -> Family {
        match self.shape {
            Shape::Finite(_) => Family::Finite,
            Shape::Ladder => Family::Ladder,
            Shape::Flute { .. } => Family::Flute,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.shape, Shape::Finite(_))
    }

    /// Length of the boundary holes of a flute.
    pub fn hole_length(&self) -> Option<f64> {
        match self.shape {
            Shape::Flute { hole } => Some(hole),
            _ => None,
        }
    }

    /// Explicit pants list of a finite graph.
    pub fn pants(&self) -> Option<&[[Slot; 3]]> {
        match &self.shape {
            Shape::Finite(f) => Some(&f.pants),
            _ => None,
        }
    }

    /// `(genus, boundaries, punctures)` of a finite graph.
    pub fn signature(&self) -> Option<(i64, i64, i64)> {
        match &self.shape {
            Shape::Finite(f) => Some((f.genus, f.boundaries, f.punctures)),
            _ => None,
        }
    }

    pub fn contains(&self, i: i64) -> bool {
        match &self.shape {
            Shape::Finite(f) => f.incidence.contains_key(&i),
            Shape::Ladder => true,
            Shape::Flute { .. } => i >= 1,
        }
    }

    pub fn check(&self, i: i64) -> Result<()> {
        if self.contains(i) {
            Ok(())
        } else {
            Err(Error::InvalidIndex(i))
        }
    }

    /// Interior curves of a finite graph, in increasing order.
    pub fn finite_curves(&self) -> Option<Vec<i64>> {
        match &self.shape {
            Shape::Finite(f) => Some(f.incidence.keys().copied().collect()),
            _ => None,
        }
    }

    /// Position of a curve along the ends of the surface. Rules of base structures and
    /// tails of coordinate vectors are functions of this index: `max(|i|, 1)` on infinite
    /// graphs, and the rank of the curve in increasing order (from 1) on finite ones.
    pub fn tail_index(&self, i: i64) -> u64 {
        match &self.shape {
            Shape::Finite(f) => f.incidence.range(..=i).count().max(1) as u64,
            _ => i.unsigned_abs().max(1),
        }
    }

    /// All curve indices with tail index exactly `k` (infinite graphs only).
    pub fn indices_at(&self, k: u64) -> Vec<i64> {
        let k_i = k as i64;
        match &self.shape {
            Shape::Finite(f) => f.incidence.keys().copied().filter(|&i| self.tail_index(i) == k).collect(),
            Shape::Ladder if k == 1 => vec![-1, 0, 1],
            Shape::Ladder => vec![-k_i, k_i],
            Shape::Flute { .. } => vec![k_i],
        }
    }

    /// Curves with tail index at most `k`, in increasing order.
    pub fn indices_up_to(&self, k: u64) -> Vec<i64> {
        let k_i = k as i64;
        match &self.shape {
            Shape::Finite(f) => f.incidence.keys().copied().filter(|&i| self.tail_index(i) <= k).collect(),
            Shape::Ladder => (-k_i..=k_i).collect(),
            Shape::Flute { .. } => (1..=k_i).collect(),
        }
    }

    /// The pants containing curve `i` (twice for a one-holed torus), with their cuffs.
    pub fn incident_pants(&self, i: i64) -> Result<[(i64, [Slot; 3]); 2]> {
        self.check(i)?;
        match &self.shape {
            Shape::Finite(f) => {
                let [(p, _), (q, _)] = f.incidence[&i];
                Ok([(p as i64, f.pants[p]), (q as i64, f.pants[q])])
            }
            Shape::Ladder => {
                let j = i.div_euclid(3);
                let q = |j: i64| (2 * j, ladder_q(j));
                let r = |j: i64| (2 * j + 1, ladder_r(j));
                Ok(match i.rem_euclid(3) {
                    0 => [q(j), q(j - 1)],
                    1 => [q(j), r(j)],
                    _ => [r(j), r(j)],
                })
            }
            Shape::Flute { hole } => Ok([(i - 1, flute_pants(i - 1, *hole)), (i, flute_pants(i, *hole))]),
        }
    }

    /// X-piece descriptor of an interior curve.
    pub fn xpiece(&self, i: i64) -> Result<XPiece> {
        let [(p, ps), (q, qs)] = self.incident_pants(i)?;
        if p == q {
            // one-holed torus: the cuff that is not i
            let mut rest = ps.iter().filter(|s| **s != Slot::Curve(i));
            let cuff = *rest.next().ok_or_else(|| Error::Malformed(format!("pants {p} is bounded by {i} only")))?;
            return Ok(XPiece { curve: i, kind: XKind::OneHoled, pants: [p, q], boundary: vec![cuff] });
        }
        let mut boundary = others(&ps, i);
        boundary.extend(others(&qs, i));
        Ok(XPiece { curve: i, kind: XKind::FourHoled, pants: [p, q], boundary })
    }
}

fn others(slots: &[Slot; 3], i: i64) -> Vec<Slot> {
    let mut out = Vec::with_capacity(2);
    let mut skipped = false;
    for s in slots {
        if !skipped && *s == Slot::Curve(i) {
            skipped = true;
        } else {
            out.push(*s);
        }
    }
    out
}

fn ladder_q(j: i64) -> [Slot; 3] {
    [Slot::Curve(3 * j), Slot::Curve(3 * j + 3), Slot::Curve(3 * j + 1)]
}

fn ladder_r(j: i64) -> [Slot; 3] {
    [Slot::Curve(3 * j + 1), Slot::Curve(3 * j + 2), Slot::Curve(3 * j + 2)]
}

fn flute_pants(k: i64, hole: f64) -> [Slot; 3] {
    if k == 0 {
        [Slot::Boundary(hole), Slot::Boundary(hole), Slot::Curve(1)]
    } else {
        [Slot::Curve(k), Slot::Curve(k + 1), Slot::Boundary(hole)]
    }
}

fn connected(n: usize, incidence: &BTreeMap<i64, [(usize, usize); 2]>) -> bool {
    let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
    for [(p, _), (q, _)] in incidence.values() {
        adj.entry(*p).or_default().push(*q);
        adj.entry(*q).or_default().push(*p);
    }
    let mut seen = BTreeSet::from([0usize]);
    let mut stack = vec![0usize];
    while let Some(p) = stack.pop() {
        for &q in adj.get(&p).into_iter().flatten() {
            if seen.insert(q) {
                stack.push(q);
            }
        }
    }
    seen.len() == n
}

/// Fenchel-Nielsen coordinates of one curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coord {
    pub length: f64,
    pub twist: f64,
}

impl Coord {
    pub fn new(length: f64, twist: f64) -> Result<Self> {
        positive("length", length)?;
        if !twist.is_finite() {
            return Err(Error::Domain(format!("twist must be finite, got {twist}")));
        }
        Ok(Coord { length, twist })
    }
}

/// Base lengths as a function of the tail index `k >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum LengthRule {
    /// `c`.
    Constant { value: f64 },
    /// `c k^{-p}`, `p > 0`.
    PowerDecay { scale: f64, exponent: f64 },
    /// `min(c k^p, cap)`, `p > 0`; without a cap the lengths are unbounded.
    CappedGrowth {
        scale: f64,
        exponent: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cap: Option<f64>,
    },
}

impl LengthRule {
    pub fn validate(&self) -> Result<()> {
        match *self {
            LengthRule::Constant { value } => positive("constant length", value).map(drop),
            LengthRule::PowerDecay { scale, exponent } => {
                positive("decay scale", scale)?;
                positive("decay exponent", exponent).map(drop)
            }
            LengthRule::CappedGrowth { scale, exponent, cap } => {
                positive("growth scale", scale)?;
                positive("growth exponent", exponent)?;
                if let Some(cap) = cap {
                    positive("growth cap", cap)?;
                }
                Ok(())
            }
        }
    }

    pub fn at(&self, k: u64) -> f64 {
        let k = k.max(1) as f64;
        match *self {
            LengthRule::Constant { value } => value,
            LengthRule::PowerDecay { scale, exponent } => scale * k.powf(-exponent),
            LengthRule::CappedGrowth { scale, exponent, cap } => {
                let v = scale * k.powf(exponent);
                cap.map_or(v, |c| v.min(c))
            }
        }
    }

    /// Limit of the rule as `k -> ∞` (possibly infinite).
    pub fn limit(&self) -> f64 {
        match *self {
            LengthRule::Constant { value } => value,
            LengthRule::PowerDecay { .. } => 0.0,
            LengthRule::CappedGrowth { cap, .. } => cap.unwrap_or(f64::INFINITY),
        }
    }

    /// `+1` for non-decreasing rules, `-1` for non-increasing ones, `0` for constant.
    fn direction(&self) -> i8 {
        match self {
            LengthRule::Constant { .. } => 0,
            LengthRule::PowerDecay { .. } => -1,
            LengthRule::CappedGrowth { .. } => 1,
        }
    }
}

/// Base assignment `i -> (ℓ⁰_i, τ⁰_i)`: a length rule in the tail index, a constant
/// twist, and finitely many explicit overrides.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseRule {
    pub lengths: LengthRule,
    pub twist: f64,
    pub overrides: BTreeMap<i64, Coord>,
}

impl BaseRule {
    pub fn new(lengths: LengthRule) -> Self {
        BaseRule { lengths, twist: 0.0, overrides: BTreeMap::new() }
    }

    pub fn constant(value: f64) -> Self {
        Self::new(LengthRule::Constant { value })
    }

    pub fn with_twist(mut self, twist: f64) -> Self {
        self.twist = twist;
        self
    }

    pub fn with_override(mut self, i: i64, coord: Coord) -> Self {
        self.overrides.insert(i, coord);
        self
    }
}

/// Which of the geometric conditions on the base hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GeometryPredicates {
    pub upper_bounded: bool,
    pub lower_bounded: bool,
    /// Lengths bounded above and below.
    pub shiga: bool,
    pub admits_short_curves: bool,
}

/// Growth class of `max(1, |log ℓ⁰_k|)` along the tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LogScale {
    /// Eventually bounded.
    Bounded,
    /// Asymptotic to `coef · ln k`.
    Log(f64),
}

/// A pants graph with base Fenchel-Nielsen coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseStructure {
    graph: PantsGraph,
    rule: BaseRule,
}

impl BaseStructure {
    pub fn new(graph: PantsGraph, rule: BaseRule) -> Result<Self> {
        rule.lengths.validate()?;
        if !rule.twist.is_finite() {
            return Err(Error::Domain(format!("base twist must be finite, got {}", rule.twist)));
        }
        for (&i, c) in &rule.overrides {
            graph.check(i)?;
            Coord::new(c.length, c.twist)?;
        }
        Ok(BaseStructure { graph, rule })
    }

    pub fn graph(&self) -> &PantsGraph {
        &self.graph
    }

    pub fn rule(&self) -> &BaseRule {
        &self.rule
    }

    /// Base coordinates of curve `i`, unchecked.
    pub fn coord_unchecked(&self, i: i64) -> Coord {
        self.rule.overrides.get(&i).copied().unwrap_or(Coord {
            length: self.rule.lengths.at(self.graph.tail_index(i)),
            twist: self.rule.twist,
        })
    }

    pub fn coord(&self, i: i64) -> Result<Coord> {
        self.graph.check(i)?;
        Ok(self.coord_unchecked(i))
    }

    pub fn length(&self, i: i64) -> Result<f64> {
        self.coord(i).map(|c| c.length)
    }

    /// Largest tail index touched by a base override.
    fn override_horizon(&self) -> u64 {
        self.rule.overrides.keys().map(|&i| self.graph.tail_index(i)).max().unwrap_or(0)
    }

    /// Exact `(inf, sup)` of the base lengths over all interior curves.
    ///
    /// On infinite graphs the rule is monotone, so only the first tail index whose curves
    /// are not all overridden and the limit matter.
    pub fn length_range(&self) -> (f64, f64) {
        if let Some(curves) = self.graph.finite_curves() {
            return curves.iter().map(|&i| self.coord_unchecked(i).length).fold(
                (f64::INFINITY, f64::NEG_INFINITY),
                |(lo, hi), l| (lo.min(l), hi.max(l)),
            );
        }
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for c in self.rule.overrides.values() {
            lo = lo.min(c.length);
            hi = hi.max(c.length);
        }
        let horizon = self.override_horizon();
        let mut first = 1;
        while first <= horizon
            && self.graph.indices_at(first).iter().all(|i| self.rule.overrides.contains_key(i))
        {
            first += 1;
        }
        let start = self.rule.lengths.at(first);
        let limit = self.rule.lengths.limit();
        match self.rule.lengths.direction() {
            0 => (lo.min(start), hi.max(start)),
            -1 => (lo.min(limit), hi.max(start)),
            _ => (lo.min(start), hi.max(limit)),
        }
    }

    pub fn predicates(&self) -> GeometryPredicates {
        let (inf, sup) = self.length_range();
        let upper_bounded = sup.is_finite();
        let lower_bounded = inf > 0.0;
        GeometryPredicates {
            upper_bounded,
            lower_bounded,
            shiga: upper_bounded && lower_bounded,
            admits_short_curves: !lower_bounded,
        }
    }

    /// Tail behaviour of `max(1, |log ℓ⁰_k|)`.
    pub fn log_scale(&self) -> LogScale {
        match self.rule.lengths {
            LengthRule::PowerDecay { exponent, .. } if !self.graph.is_finite() => LogScale::Log(exponent),
            LengthRule::CappedGrowth { exponent, cap: None, .. } if !self.graph.is_finite() => {
                LogScale::Log(exponent)
            }
            _ => LogScale::Bounded,
        }
    }
}
