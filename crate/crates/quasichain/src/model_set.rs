//! Cut-and-project model sets of the golden cut-and-project scheme:
//! window algebra with exact end-inclusion flags, typed point generation,
//! per-tile coding windows, exact patch frequencies, difference-set
//! membership, and equidistribution diagnostics.
//!
//! Conventions used throughout (and by the correlation and diffraction
//! modules): a point x of a chain is typed by the tile ending at x, so the
//! per-letter windows of a total window W are W ∩ (W + star(length)). The
//! per-tile coding windows of the canonical scheme are the fixed base
//! intervals [1−τ, 2−τ) for a and [2−τ, 1) for b, translated by star of the
//! tile position.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::algebra::{parse_golden, GoldenInt, GoldenNum};
use crate::error::{Error, Result};

/// The two tile types of a golden chain: `A` has length τ, `B` length 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TileKind {
    A,
    B,
}

impl TileKind {
    pub const ALL: [TileKind; 2] = [TileKind::A, TileKind::B];

    pub fn index(self) -> usize {
        match self {
            TileKind::A => 0,
            TileKind::B => 1,
        }
    }

    pub fn from_index(i: usize) -> Option<Self> {
        match i {
            0 => Some(TileKind::A),
            1 => Some(TileKind::B),
            _ => None,
        }
    }

    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'a' | 'A' => Ok(TileKind::A),
            'b' | 'B' => Ok(TileKind::B),
            _ => Err(Error::Parse(format!("unknown letter '{c}'"))),
        }
    }

    /// Natural tile length: τ for `A`, 1 for `B`.
    pub fn length(self) -> GoldenNum {
        match self {
            TileKind::A => GoldenNum::tau(),
            TileKind::B => GoldenNum::one(),
        }
    }

    pub fn letter(self) -> char {
        match self {
            TileKind::A => 'a',
            TileKind::B => 'b',
        }
    }
}

impl fmt::Display for TileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// Internal-space interval with explicit end-inclusion flags.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Window {
    lo: GoldenNum,
    hi: GoldenNum,
    lo_closed: bool,
    hi_closed: bool,
}

impl Window {
    pub fn new(lo: GoldenNum, hi: GoldenNum, lo_closed: bool, hi_closed: bool) -> Result<Self> {
        if lo >= hi {
            return Err(Error::InvalidWindow(format!(
                "window needs lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Window {
            lo,
            hi,
            lo_closed,
            hi_closed,
        })
    }

    pub fn closed(lo: GoldenNum, hi: GoldenNum) -> Result<Self> {
        Window::new(lo, hi, true, true)
    }

    pub fn lo(&self) -> &GoldenNum {
        &self.lo
    }

    pub fn hi(&self) -> &GoldenNum {
        &self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    /// Exactly one end included.
    pub fn is_half_open(&self) -> bool {
        self.lo_closed != self.hi_closed
    }

    pub fn volume(&self) -> GoldenNum {
        &self.hi - &self.lo
    }

    /// Exact membership with flag handling.
    pub fn contains(&self, x: &GoldenNum) -> bool {
        let lo_ok = match x.cmp(&self.lo) {
            Ordering::Greater => true,
            Ordering::Equal => self.lo_closed,
            Ordering::Less => false,
        };
        if !lo_ok {
            return false;
        }
        match x.cmp(&self.hi) {
            Ordering::Less => true,
            Ordering::Equal => self.hi_closed,
            Ordering::Greater => false,
        }
    }

    pub fn translate(&self, t: &GoldenNum) -> Window {
        Window {
            lo: &self.lo + t,
            hi: &self.hi + t,
            lo_closed: self.lo_closed,
            hi_closed: self.hi_closed,
        }
    }

    /// Scales by a nonzero factor; a negative factor flips the orientation
    /// (and the end flags with it).
    pub fn scale(&self, f: &GoldenNum) -> Window {
        match f.sign() {
            Ordering::Greater => Window {
                lo: f * &self.lo,
                hi: f * &self.hi,
                lo_closed: self.lo_closed,
                hi_closed: self.hi_closed,
            },
            Ordering::Less => Window {
                lo: f * &self.hi,
                hi: f * &self.lo,
                lo_closed: self.hi_closed,
                hi_closed: self.lo_closed,
            },
            Ordering::Equal => panic!("window scaled by zero"),
        }
    }

    /// Exact intersection; `None` when empty (kissing half-open ends do not
    /// intersect).
    pub fn intersect(&self, other: &Window) -> Option<Window> {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            Ordering::Greater => (self.lo.clone(), self.lo_closed),
            Ordering::Less => (other.lo.clone(), other.lo_closed),
            Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            Ordering::Less => (self.hi.clone(), self.hi_closed),
            Ordering::Greater => (other.hi.clone(), other.hi_closed),
            Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        if lo < hi {
            Some(Window {
                lo,
                hi,
                lo_closed,
                hi_closed,
            })
        } else {
            None
        }
    }

    /// Minkowski difference {a − b : a ∈ self, b ∈ other}, with exact
    /// attainment of the ends.
    pub fn minkowski_sub(&self, other: &Window) -> Window {
        Window {
            lo: &self.lo - &other.hi,
            hi: &self.hi - &other.lo,
            lo_closed: self.lo_closed && other.hi_closed,
            hi_closed: self.hi_closed && other.lo_closed,
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.lo.to_f64(), self.hi.to_f64())
    }

    /// Parses "(-1, t-1]" style text.
    pub fn parse(text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut chars = s.chars();
        let open = chars
            .next()
            .ok_or_else(|| Error::Parse("empty window".into()))?;
        let close = s
            .chars()
            .last()
            .ok_or_else(|| Error::Parse("empty window".into()))?;
        let lo_closed = match open {
            '[' => true,
            '(' => false,
            _ => {
                return Err(Error::Parse(format!(
                    "window must start with [ or ( : {text}"
                )))
            }
        };
        let hi_closed = match close {
            ']' => true,
            ')' => false,
            _ => {
                return Err(Error::Parse(format!(
                    "window must end with ] or ) : {text}"
                )))
            }
        };
        let inner = &s[1..s.len() - 1];
        let (lo_s, hi_s) = inner
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("window needs two endpoints: {text}")))?;
        let lo = parse_golden(lo_s)?;
        let hi = parse_golden(hi_s)?;
        Window::new(lo, hi, lo_closed, hi_closed)
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            self.lo,
            self.hi,
            if self.hi_closed { ']' } else { ')' },
        )
    }
}

impl FromStr for Window {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Window::parse(s)
    }
}

/// A golden-chain model set: total window of volume τ plus the derived
/// per-letter windows W_α = W ∩ (W + star(length α)).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelSetSpec {
    total: Window,
    letter: [Window; 2],
}

impl ModelSetSpec {
    /// Builds the spec from a half-open total window of volume exactly τ.
    pub fn from_total_window(total: Window) -> Result<Self> {
        if total.volume() != GoldenNum::tau() {
            return Err(Error::InvalidWindow(format!(
                "golden chain total window must have volume tau, got {}",
                total.volume()
            )));
        }
        if !total.is_half_open() {
            return Err(Error::InvalidWindow(
                "total window must be half-open so the letter windows partition it".into(),
            ));
        }
        let w_a = total
            .intersect(&total.translate(&GoldenNum::tau().star()))
            .ok_or_else(|| Error::InvalidWindow("degenerate a-window".into()))?;
        let w_b = total
            .intersect(&total.translate(&GoldenNum::one().star()))
            .ok_or_else(|| Error::InvalidWindow("degenerate b-window".into()))?;
        // The two letter windows partition the total window exactly.
        debug_assert_eq!(&w_a.volume() + &w_b.volume(), total.volume());
        Ok(ModelSetSpec {
            total,
            letter: [w_a, w_b],
        })
    }

    /// The default chain with window W = (−1, τ−1].
    pub fn fibonacci() -> Self {
        let w = Window::new(
            GoldenNum::from_int(-1),
            GoldenNum::tau() - GoldenNum::one(),
            false,
            true,
        )
        .expect("static window");
        ModelSetSpec::from_total_window(w).expect("static spec")
    }

    /// The singular partner with window W′ = [−1, τ−1).
    pub fn fibonacci_partner() -> Self {
        let w = Window::new(
            GoldenNum::from_int(-1),
            GoldenNum::tau() - GoldenNum::one(),
            true,
            false,
        )
        .expect("static window");
        ModelSetSpec::from_total_window(w).expect("static spec")
    }

    /// The translate whose letter windows are the canonical per-tile coding
    /// windows [1−τ, 2−τ) and [2−τ, 1).
    pub fn canonical_tiles() -> Self {
        let w = Window::new(
            GoldenNum::one() - GoldenNum::tau(),
            GoldenNum::one(),
            true,
            false,
        )
        .expect("static window");
        ModelSetSpec::from_total_window(w).expect("static spec")
    }

    pub fn total_window(&self) -> &Window {
        &self.total
    }

    pub fn letter_window(&self, kind: TileKind) -> &Window {
        &self.letter[kind.index()]
    }

    /// Letter windows in the left-endpoint (tile-start) frame:
    /// W_α = W ∩ (W − star(length α)). These are the typing windows
    /// translated by −star(length α) and carry the covariogram identities.
    pub fn letter_window_left(&self, kind: TileKind) -> Window {
        self.letter[kind.index()].translate(&-kind.length().star())
    }

    fn classify(&self, star: &GoldenNum) -> Option<TileKind> {
        if self.letter[0].contains(star) {
            Some(TileKind::A)
        } else if self.letter[1].contains(star) {
            Some(TileKind::B)
        } else {
            None
        }
    }
}

/// A typed point of a chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypedPoint {
    pub pos: GoldenInt,
    pub kind: TileKind,
}

/// Sorted typed point set, the concrete form of a model set on a region.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypedPointSet {
    points: Vec<TypedPoint>,
}

impl TypedPointSet {
    pub fn from_sorted(points: Vec<TypedPoint>) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0].pos < w[1].pos));
        TypedPointSet { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[TypedPoint] {
        &self.points
    }

    pub fn iter(&self) -> impl Iterator<Item = &TypedPoint> {
        self.points.iter()
    }

    /// Gaps between consecutive points, exact.
    pub fn gaps(&self) -> Vec<GoldenNum> {
        self.points
            .windows(2)
            .map(|w| (&w[1].pos - &w[0].pos).to_golden_num())
            .collect()
    }

    /// The letter sequence induced by the gaps (τ ↦ a, 1 ↦ b).
    pub fn gap_letters(&self) -> Result<Vec<TileKind>> {
        self.gaps()
            .iter()
            .map(|g| {
                if *g == GoldenNum::tau() {
                    Ok(TileKind::A)
                } else if *g == GoldenNum::one() {
                    Ok(TileKind::B)
                } else {
                    Err(Error::InvalidArgument(format!(
                        "gap {g} is not a tile length"
                    )))
                }
            })
            .collect()
    }
}

/// Exact integer range for the τ-coordinate of lattice points with
/// x in [lo, hi] and star(x) in the closed hull of the window.
fn coordinate_ranges(
    lo: &GoldenNum,
    hi: &GoldenNum,
    star_lo: &GoldenNum,
    star_hi: &GoldenNum,
) -> (BigInt, BigInt) {
    // x − star(x) = n√5, so n is pinned by the two intervals.
    let sqrt5 = GoldenNum::sqrt5();
    let n_min = ((lo - star_hi) / &sqrt5).ceil_bigint();
    let n_max = ((hi - star_lo) / &sqrt5).floor_bigint();
    (n_min, n_max)
}

/// All points of the model set with position in the closed region [lo, hi],
/// typed by letter window, sorted by position.
///
/// The enumeration solves the 2×2 system for exact integer bounds on the
/// lattice coordinates, then filters by exact membership.
pub fn cut_and_project(
    spec: &ModelSetSpec,
    lo: &GoldenNum,
    hi: &GoldenNum,
) -> Result<TypedPointSet> {
    if lo > hi {
        return Err(Error::InvalidRegion(format!(
            "region [{lo}, {hi}] has lo > hi"
        )));
    }
    let w = spec.total_window();
    let (n_min, n_max) = coordinate_ranges(lo, hi, w.lo(), w.hi());
    let mut points = Vec::new();
    let mut n = n_min.clone();
    while n <= n_max {
        let n_int = GoldenInt::new(BigInt::from(0), n.clone());
        let n_tau = n_int.to_golden_num();
        let n_tau_star = n_tau.star();
        // m + nτ ∈ [lo, hi] and m + n·star(τ) in the window hull
        let m_lo_region = (lo - &n_tau).ceil_bigint();
        let m_hi_region = (hi - &n_tau).floor_bigint();
        let m_lo_window = (w.lo() - &n_tau_star).ceil_bigint();
        let m_hi_window = (w.hi() - &n_tau_star).floor_bigint();
        let m_min = m_lo_region.max(m_lo_window);
        let m_max = m_hi_region.min(m_hi_window);
        let mut m = m_min.clone();
        while m <= m_max {
            let x = GoldenInt::new(m.clone(), n.clone());
            let star = x.star().to_golden_num();
            if let Some(kind) = spec.classify(&star) {
                let pos = x.to_golden_num();
                if &pos >= lo && &pos <= hi {
                    points.push(TypedPoint { pos: x, kind });
                }
            }
            m += 1;
        }
        n += 1;
    }
    points.sort_by(|p, q| p.pos.cmp(&q.pos));
    Ok(TypedPointSet::from_sorted(points))
}

/// Canonical per-tile base coding windows: [1−τ, 2−τ) for a, [2−τ, 1) for b.
pub fn coding_window_base(kind: TileKind) -> Window {
    let one = GoldenNum::one();
    let tau = GoldenNum::tau();
    let two = GoldenNum::from_int(2);
    match kind {
        TileKind::A => Window::new(&one - &tau, &two - &tau, true, false).expect("static"),
        TileKind::B => Window::new(&two - &tau, one, true, false).expect("static"),
    }
}

/// Coding window for the occurrence of a tile of the given type at the given
/// position: the base window translated by star(position).
pub fn coding_window(kind: TileKind, position: &GoldenInt) -> Window {
    coding_window_base(kind).translate(&position.star().to_golden_num())
}

/// A finite set of tiles (adjacent or not), described by type and position.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PatchSpec {
    tiles: Vec<(TileKind, GoldenInt)>,
}

impl PatchSpec {
    pub fn new(tiles: Vec<(TileKind, GoldenInt)>) -> Result<Self> {
        for (i, (_, p)) in tiles.iter().enumerate() {
            for (_, q) in &tiles[..i] {
                if p == q {
                    return Err(Error::InvalidArgument(format!(
                        "duplicate patch position {p}"
                    )));
                }
            }
        }
        Ok(PatchSpec { tiles })
    }

    pub fn empty() -> Self {
        PatchSpec { tiles: Vec::new() }
    }

    /// Parses "a@0 b@1 a@1+1*t" (whitespace-separated tiles).
    pub fn parse(text: &str) -> Result<Self> {
        let mut tiles = Vec::new();
        for tok in text.split_whitespace() {
            let (letter, pos) = tok
                .split_once('@')
                .ok_or_else(|| Error::Parse(format!("patch tile '{tok}' needs letter@position")))?;
            let mut chars = letter.chars();
            let c = chars
                .next()
                .ok_or_else(|| Error::Parse("empty tile letter".into()))?;
            if chars.next().is_some() {
                return Err(Error::Parse(format!("'{letter}' is not a letter")));
            }
            let kind = TileKind::from_char(c)?;
            let position: GoldenInt = pos.parse()?;
            tiles.push((kind, position));
        }
        PatchSpec::new(tiles)
    }

    pub fn tiles(&self) -> &[(TileKind, GoldenInt)] {
        &self.tiles
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn translate(&self, t: &GoldenInt) -> PatchSpec {
        PatchSpec {
            tiles: self.tiles.iter().map(|(k, p)| (*k, p + t)).collect(),
        }
    }
}

/// Exact relative frequency of a patch: vol(V₁ ∩ … ∩ Vₙ)/vol(W) over the
/// coding windows Vᵢ, which is 0 exactly when the patch is illegal. The
/// empty patch has frequency 1.
pub fn patch_frequency(patch: &PatchSpec) -> GoldenNum {
    let tau = GoldenNum::tau();
    if patch.is_empty() {
        return GoldenNum::one();
    }
    let mut acc: Option<Window> = None;
    for (kind, pos) in patch.tiles() {
        let v = coding_window(*kind, pos);
        acc = match acc {
            None => Some(v),
            Some(w) => match w.intersect(&v) {
                Some(i) => Some(i),
                None => return GoldenNum::zero(),
            },
        };
    }
    // Volumes ignore end-inclusion (boundaries have measure zero).
    acc.expect("nonempty patch").volume() / tau
}

/// True exactly when the patch can occur in a chain, i.e. frequency > 0.
pub fn is_legal(patch: &PatchSpec) -> bool {
    !patch_frequency(patch).is_zero()
}

/// Membership z ∈ Λ_α − Λ_β, decided exactly through the Minkowski
/// difference of the canonical per-letter windows.
pub fn difference_set_member(z: &GoldenInt, alpha: TileKind, beta: TileKind) -> bool {
    let spec = ModelSetSpec::canonical_tiles();
    let diff = spec
        .letter_window(alpha)
        .minkowski_sub(spec.letter_window(beta));
    diff.contains(&z.star().to_golden_num())
}

/// The first `count` points of the model set ordered by |x|, positive before
/// negative on ties.
pub fn points_by_absolute_value(spec: &ModelSetSpec, count: usize) -> Result<Vec<TypedPoint>> {
    if count == 0 {
        return Ok(Vec::new());
    }
    // Density of the chain is τ/√5 ≈ 0.7236 points per unit length.
    let mut radius = (count as f64 / 0.7236 / 2.0 * 1.2 + 5.0).ceil() as i64;
    loop {
        let lo = GoldenNum::from_int(-radius);
        let hi = GoldenNum::from_int(radius);
        let pts = cut_and_project(spec, &lo, &hi)?;
        if pts.len() >= count {
            let mut all: Vec<TypedPoint> = pts.points().to_vec();
            all.sort_by(|p, q| {
                let ap = p.pos.to_golden_num().abs();
                let aq = q.pos.to_golden_num().abs();
                ap.cmp(&aq).then_with(|| q.pos.cmp(&p.pos))
            });
            all.truncate(count);
            return Ok(all);
        }
        radius = radius * 3 / 2 + 8;
    }
}

/// Star-discrepancy of the first N star images of the chain, ordered by |x|
/// with positive positions first on ties.
///
/// The sample is normalised to [0, 1] over the window and the standard
/// finite-sample formula is evaluated.
pub fn weyl_discrepancy(spec: &ModelSetSpec, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one point".into()));
    }
    let pts = points_by_absolute_value(spec, n)?;
    let w = spec.total_window();
    let lo = w.lo().to_f64();
    let vol = w.volume().to_f64();
    let mut sample: Vec<f64> = pts
        .iter()
        .map(|p| (p.pos.star().to_f64() - lo) / vol)
        .collect();
    sample.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let nn = sample.len() as f64;
    let mut d = 0.0f64;
    for (i, u) in sample.iter().enumerate() {
        let up = (i + 1) as f64 / nn - u;
        let down = u - i as f64 / nn;
        d = d.max(up).max(down);
    }
    Ok(d)
}

/// Brute-force oracle used by the tests: scans the full integer box and
/// keeps points by exact membership.
pub fn brute_force_cut_and_project(
    spec: &ModelSetSpec,
    lo: &GoldenNum,
    hi: &GoldenNum,
    m_bound: i64,
    n_bound: i64,
) -> TypedPointSet {
    let mut points = Vec::new();
    for m in -m_bound..=m_bound {
        for n in -n_bound..=n_bound {
            let x = GoldenInt::from_ints(m, n);
            let pos = x.to_golden_num();
            if &pos < lo || &pos > hi {
                continue;
            }
            let star = x.star().to_golden_num();
            if let Some(kind) = spec.classify(&star) {
                points.push(TypedPoint { pos: x, kind });
            }
        }
    }
    points.sort_by(|p, q| p.pos.cmp(&q.pos));
    TypedPointSet::from_sorted(points)
}

/// Integer box bounds sufficient to cover a region for the brute-force scan,
/// derived from region and window.
pub fn brute_force_bounds(spec: &ModelSetSpec, lo: &GoldenNum, hi: &GoldenNum) -> (i64, i64) {
    let w = spec.total_window();
    let (n_min, n_max) = coordinate_ranges(lo, hi, w.lo(), w.hi());
    let n_bound = n_min
        .magnitude()
        .max(n_max.magnitude())
        .to_i64()
        .expect("n bound fits i64")
        + 1;
    // |m| ≤ |x| + |n|τ
    let span = lo.abs().max(hi.abs()).to_f64();
    let m_bound = (span + (n_bound as f64 + 1.0) * 1.62).ceil() as i64 + 1;
    (m_bound, n_bound)
}
