use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Topological type of an X-piece: the neighbourhood of one interior decomposition curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum XKind {
    /// Four-holed sphere, type (0,4): two distinct pants glued along the curve.
    #[serde(rename = "0,4")]
    FourHoled,
    /// One-holed torus, type (1,1): one pants glued to itself along the curve.
    #[serde(rename = "1,1")]
    OneHoled,
}

impl XKind {
    pub fn boundary_count(self) -> usize {
        match self {
            XKind::FourHoled => 4,
            XKind::OneHoled => 1,
        }
    }
}

impl fmt::Display for XKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XKind::FourHoled => f.write_str("(0,4)"),
            XKind::OneHoled => f.write_str("(1,1)"),
        }
    }
}

/// Generator symbols of an X-piece group.
///
/// `A` is the interior curve in both kinds. In a one-holed torus `B` is the dual
/// generator and the boundary is the commutator `ABA⁻¹B⁻¹`. In a four-holed sphere
/// `P, Q` go around the boundaries of the first pants and `R, S` around those of the
/// second, with `PQRS = 1` and `PQ = A⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    A,
    B,
    P,
    Q,
    R,
    S,
}

impl Symbol {
    pub fn valid_for(self, kind: XKind) -> bool {
        match kind {
            XKind::OneHoled => matches!(self, Symbol::A | Symbol::B),
            XKind::FourHoled => !matches!(self, Symbol::B),
        }
    }

    fn from_char(c: char) -> Option<(Symbol, i32)> {
        let sym = match c.to_ascii_lowercase() {
            'a' => Symbol::A,
            'b' => Symbol::B,
            'p' => Symbol::P,
            'q' => Symbol::Q,
            'r' => Symbol::R,
            's' => Symbol::S,
            _ => return None,
        };
        Some((sym, if c.is_ascii_uppercase() { -1 } else { 1 }))
    }

    fn to_char(self, inverse: bool) -> char {
        let c = match self {
            Symbol::A => 'a',
            Symbol::B => 'b',
            Symbol::P => 'p',
            Symbol::Q => 'q',
            Symbol::R => 'r',
            Symbol::S => 's',
        };
        if inverse {
            c.to_ascii_uppercase()
        } else {
            c
        }
    }

    /// Side of the interior curve a four-holed-sphere generator lives on.
    fn side(self) -> Option<u8> {
        match self {
            Symbol::P | Symbol::Q => Some(0),
            Symbol::R | Symbol::S => Some(1),
            _ => None,
        }
    }
}

/// A freely reduced word in X-piece generators, with its crossing count against `A`.
///
/// The crossing count is taken on the cyclic reduction. In a one-holed torus it is the
/// absolute exponent sum of `B`, which is exact for every simple closed curve (slopes
/// have all `B` exponents of one sign, the boundary has sum zero). In a four-holed
/// sphere it is the number of cyclically adjacent letter pairs (ignoring `A`) that lie
/// on different sides of the interior curve. For the dual curves and their twist images
/// both counts equal the geometric intersection number with the interior curve.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CurveWord {
    kind: XKind,
    letters: Vec<(Symbol, i32)>,
    intersection: u32,
}

fn reduce(letters: impl IntoIterator<Item = (Symbol, i32)>) -> Vec<(Symbol, i32)> {
    let mut out: Vec<(Symbol, i32)> = Vec::new();
    for (s, e) in letters {
        if e == 0 {
            continue;
        }
        match out.last_mut() {
            Some((last, exp)) if *last == s => {
                *exp += e;
                if *exp == 0 {
                    out.pop();
                }
            }
            _ => out.push((s, e)),
        }
    }
    out
}

fn cyclic_core(letters: &[(Symbol, i32)]) -> Vec<(Symbol, i32)> {
    let mut w = letters.to_vec();
    while w.len() >= 2 {
        let (fs, fe) = w[0];
        let (ls, le) = w[w.len() - 1];
        if fs != ls {
            break;
        }
        w.pop();
        if fe + le == 0 {
            w.remove(0);
        } else {
            w[0].1 = fe + le;
            break;
        }
    }
    w
}

fn crossing_count(kind: XKind, letters: &[(Symbol, i32)]) -> u32 {
    let core = cyclic_core(letters);
    match kind {
        XKind::OneHoled => core
            .iter()
            .filter(|(s, _)| *s == Symbol::B)
            .map(|(_, e)| e)
            .sum::<i32>()
            .unsigned_abs(),
        XKind::FourHoled => {
            let sides: Vec<u8> = core.iter().filter_map(|(s, _)| s.side()).collect();
            if sides.len() < 2 {
                return 0;
            }
            let n = sides.len();
            (0..n).filter(|&k| sides[k] != sides[(k + 1) % n]).count() as u32
        }
    }
}

impl CurveWord {
    pub fn new(kind: XKind, letters: impl IntoIterator<Item = (Symbol, i32)>) -> Result<Self> {
        let letters = reduce(letters);
        if let Some((s, _)) = letters.iter().find(|(s, _)| !s.valid_for(kind)) {
            return Err(Error::Malformed(format!("generator {s:?} does not exist in a {kind} piece")));
        }
        let intersection = crossing_count(kind, &letters);
        Ok(CurveWord { kind, letters, intersection })
    }

    /// Parse a compact word: lowercase letters are generators, uppercase their inverses
    /// (`"bA"` is `B A⁻¹`). Whitespace is ignored.
    pub fn parse(kind: XKind, text: &str) -> Result<Self> {
        let mut letters = Vec::new();
        for c in text.chars().filter(|c| !c.is_whitespace()) {
            let letter = Symbol::from_char(c)
                .ok_or_else(|| Error::Malformed(format!("unknown generator '{c}' in word {text:?}")))?;
            letters.push(letter);
        }
        CurveWord::new(kind, letters)
    }

    /// The interior curve of the X-piece.
    pub fn beta(kind: XKind) -> Self {
        CurveWord { kind, letters: vec![(Symbol::A, 1)], intersection: 0 }
    }

    /// The standard curve crossing the interior curve: `B` in a one-holed torus
    /// (once), `QR` in a four-holed sphere (twice).
    pub fn dual(kind: XKind) -> Self {
        match kind {
            XKind::OneHoled => CurveWord::new(kind, [(Symbol::B, 1)]).unwrap(),
            XKind::FourHoled => CurveWord::new(kind, [(Symbol::Q, 1), (Symbol::R, 1)]).unwrap(),
        }
    }

    pub fn kind(&self) -> XKind {
        self.kind
    }

    pub fn letters(&self) -> &[(Symbol, i32)] {
        &self.letters
    }

    pub fn intersection(&self) -> u32 {
        self.intersection
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_beta(&self) -> bool {
        self.letters == [(Symbol::A, 1)]
    }

    pub fn inverse(&self) -> Self {
        let letters: Vec<_> = self.letters.iter().rev().map(|&(s, e)| (s, -e)).collect();
        CurveWord { kind: self.kind, letters, intersection: self.intersection }
    }

    /// `self` followed by `other`.
    pub fn concat(&self, other: &CurveWord) -> Result<Self> {
        if self.kind != other.kind {
            return Err(Error::Malformed("cannot concatenate words of different X-piece kinds".into()));
        }
        CurveWord::new(self.kind, self.letters.iter().chain(other.letters.iter()).copied())
    }

    /// Cyclic rotation by `k` letters (a conjugate of the same curve).
    pub fn rotated(&self, k: usize) -> Self {
        let mut expanded: Vec<(Symbol, i32)> = self
            .letters
            .iter()
            .flat_map(|&(s, e)| std::iter::repeat_n((s, e.signum()), e.unsigned_abs() as usize))
            .collect();
        if !expanded.is_empty() {
            let k = k % expanded.len();
            expanded.rotate_left(k);
        }
        CurveWord::new(self.kind, expanded).expect("rotation keeps generators valid")
    }

    /// Total number of generator factors, counting exponents.
    pub fn factor_count(&self) -> usize {
        self.letters.iter().map(|(_, e)| e.unsigned_abs() as usize).sum()
    }
}

impl fmt::Display for CurveWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for &(s, e) in &self.letters {
            for _ in 0..e.unsigned_abs() {
                write!(f, "{}", s.to_char(e < 0))?;
            }
        }
        Ok(())
    }
}

/// Word of the `n`-fold Dehn twist about the interior curve applied to `w`.
///
/// One-holed torus: `B -> B Aⁿ`. Four-holed sphere: generators of the second pants
/// are conjugated, `R -> Aⁿ R A⁻ⁿ`, `S -> Aⁿ S A⁻ⁿ`. With these conventions the
/// holonomy at twist `τ + n·ℓ` evaluated on `w` equals the holonomy at twist `τ`
/// evaluated on the twisted word.
pub fn dehn_twist_word(w: &CurveWord, beta: &CurveWord, n: i32) -> Result<CurveWord> {
    if w.kind != beta.kind {
        return Err(Error::Malformed("word and twist curve belong to different X-piece kinds".into()));
    }
    if !beta.is_beta() {
        return Err(Error::Unsupported(format!(
            "Dehn twists are realized only about the interior curve, got {beta}"
        )));
    }
    if n == 0 {
        return Ok(w.clone());
    }
    let mut out = Vec::with_capacity(w.letters.len() * 3);
    for &(s, e) in &w.letters {
        let unit = e.signum();
        for _ in 0..e.unsigned_abs() {
            match (w.kind, s) {
                (XKind::OneHoled, Symbol::B) => {
                    if unit > 0 {
                        out.extend([(Symbol::B, 1), (Symbol::A, n)]);
                    } else {
                        out.extend([(Symbol::A, -n), (Symbol::B, -1)]);
                    }
                }
                (XKind::FourHoled, Symbol::R | Symbol::S) => {
                    out.extend([(Symbol::A, n), (s, unit), (Symbol::A, -n)]);
                }
                _ => out.push((s, unit)),
            }
        }
    }
    let twisted = CurveWord::new(w.kind, out)?;
    debug_assert_eq!(twisted.intersection, w.intersection);
    Ok(twisted)
}
