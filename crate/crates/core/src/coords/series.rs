//! Closed-form tail sequences `k -> C + Σ a_j k^{-p_j} + s ln k + Σ b_j k^{e_j}`.

/// Exact linear combination of the tail profiles, closed under addition.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Series {
    pub constant: f64,
    /// `(a, p)` with `p > 0`: `a k^{-p}`.
    pub decay: Vec<(f64, f64)>,
    /// coefficient of `ln k`.
    pub log: f64,
    /// `(b, e)` with `e > 0`: `b k^e`.
    pub power: Vec<(f64, f64)>,
}

/// Growth order of a term: `k^{-p}` < constants < `ln k` < `k^e`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Order {
    Decay(f64),
    Constant,
    Log,
    Power(f64),
}

impl Order {
    fn key(self) -> (u8, f64) {
        match self {
            Order::Decay(p) => (0, -p),
            Order::Constant => (1, 0.0),
            Order::Log => (2, 0.0),
            Order::Power(e) => (3, e),
        }
    }
}

impl PartialOrd for Order {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        self.key().partial_cmp(&other.key())
    }
}

fn merge(terms: &mut Vec<(f64, f64)>) {
    terms.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(terms.len());
    for &(c, e) in terms.iter() {
        match out.last_mut() {
            Some(last) if last.1 == e => last.0 += c,
            _ => out.push((c, e)),
        }
    }
    out.retain(|t| t.0 != 0.0);
    *terms = out;
}

impl Series {
    pub fn constant(c: f64) -> Self {
        Series { constant: c, ..Default::default() }
    }

    pub fn decay(a: f64, p: f64) -> Self {
        Series { decay: vec![(a, p)], ..Default::default() }.normalized()
    }

    pub fn log(s: f64) -> Self {
        Series { log: s, ..Default::default() }
    }

    pub fn power(b: f64, e: f64) -> Self {
        Series { power: vec![(b, e)], ..Default::default() }.normalized()
    }

    fn normalized(mut self) -> Self {
        merge(&mut self.decay);
        merge(&mut self.power);
        self
    }

    pub fn add(&self, other: &Series) -> Series {
        Series {
            constant: self.constant + other.constant,
            decay: self.decay.iter().chain(&other.decay).copied().collect(),
            log: self.log + other.log,
            power: self.power.iter().chain(&other.power).copied().collect(),
        }
        .normalized()
    }

    pub fn neg(&self) -> Series {
        Series {
            constant: -self.constant,
            decay: self.decay.iter().map(|&(a, p)| (-a, p)).collect(),
            log: -self.log,
            power: self.power.iter().map(|&(b, e)| (-b, e)).collect(),
        }
    }

    pub fn sub(&self, other: &Series) -> Series {
        self.add(&other.neg())
    }

    pub fn at(&self, k: u64) -> f64 {
        let k = k.max(1) as f64;
        let mut v = self.constant;
        for &(a, p) in &self.decay {
            v += a * k.powf(-p);
        }
        if self.log != 0.0 {
            v += self.log * k.ln();
        }
        for &(b, e) in &self.power {
            v += b * k.powf(e);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.constant == 0.0 && self.decay.is_empty() && self.log == 0.0 && self.power.is_empty()
    }

    pub fn is_bounded(&self) -> bool {
        self.log == 0.0 && self.power.is_empty()
    }

    /// Limit as `k -> ∞`, `None` when unbounded.
    pub fn limit(&self) -> Option<f64> {
        self.is_bounded().then_some(self.constant)
    }

    /// Dominant term `(order, coefficient)`, `None` for the zero sequence.
    pub fn leading(&self) -> Option<(Order, f64)> {
        if let Some(&(b, e)) = self.power.last() {
            return Some((Order::Power(e), b));
        }
        if self.log != 0.0 {
            return Some((Order::Log, self.log));
        }
        if self.constant != 0.0 {
            return Some((Order::Constant, self.constant));
        }
        self.decay.first().map(|&(a, p)| (Order::Decay(p), a))
    }

    /// `sup_{k >= k0} |g(k)|` over integers, exact for at most two decay terms.
    ///
    /// `g` has at most one critical point `k* = (-q b / (p a))^{1/(q-p)}`, so the
    /// supremum is attained at `k0`, at an integer neighbour of `k*`, or in the limit.
    pub fn sup_abs_from(&self, k0: u64) -> f64 {
        if !self.is_bounded() {
            return f64::INFINITY;
        }
        let k0 = k0.max(1);
        let mut best = self.at(k0).abs().max(self.constant.abs());
        match self.decay[..] {
            [] | [_] => {}
            [(a, p), (b, q)] => {
                let ratio = -q * b / (p * a);
                if ratio > 0.0 {
                    let kstar = ratio.powf(1.0 / (q - p));
                    if kstar.is_finite() && kstar > k0 as f64 {
                        for k in [kstar.floor(), kstar.ceil()] {
                            if k >= k0 as f64 && k < u64::MAX as f64 {
                                best = best.max(self.at(k as u64).abs());
                            }
                        }
                    }
                }
            }
            _ => {
                // not produced by differences of two profiles; scan a safe range
                let mut k = k0;
                while k < k0 + 1_000_000 {
                    best = best.max(self.at(k).abs());
                    k += 1;
                }
            }
        }
        best
    }
}

/// `lim |num(k) / den(k)|` as `k -> ∞` for two series, with `0/0` read as `1`.
pub fn ratio_limit(num: &Series, den: &Series) -> f64 {
    match (num.leading(), den.leading()) {
        (None, None) => 1.0,
        (None, Some(_)) => 0.0,
        (Some(_), None) => f64::INFINITY,
        (Some((on, cn)), Some((od, cd))) => {
            if on == od {
                (cn / cd).abs()
            } else if on > od {
                f64::INFINITY
            } else {
                0.0
            }
        }
    }
}
