//! The graph-directed iterated function system satisfied by the windows of a
//! golden Pisot inflation, window approximants for rules whose windows have
//! fractal boundary, and a box-count estimator for the boundary dimension.
//!
//! The set equation used here is W_α = ⋃_β (c·W_β + s_αβ) with contraction
//! c = star(λ) and internal translations s_αβ = −star(T_αβ); with these
//! signs the Fibonacci attractor is exactly the pair of canonical per-tile
//! coding windows.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::{GoldenInt, GoldenNum};
use crate::error::{Error, Result};
use crate::linalg;
use crate::model_set::{TileKind, Window};
use crate::substitution::GeometricInflation;

/// Graph IFS data: contraction factor and per-pair translation sets.
#[derive(Clone, Debug)]
pub struct GraphIFS {
    contraction: GoldenNum,
    lambda: GoldenNum,
    /// Applied internal translations s[child][parent] = −star(T[child][parent]).
    translations: [[Vec<GoldenNum>; 2]; 2],
    /// Starred displacement sets star(T[child][parent]), kept for reference.
    starred: [[Vec<GoldenNum>; 2]; 2],
    matrix: [[u64; 2]; 2],
    volumes: [GoldenNum; 2],
}

impl GraphIFS {
    /// Builds the window IFS of a two-letter golden Pisot inflation.
    pub fn from_inflation(inflation: &GeometricInflation) -> Result<Self> {
        if inflation.dim() != 2 {
            return Err(Error::UnsupportedRule(
                "window IFS requires a two-letter rule".into(),
            ));
        }
        let lambda = inflation.lambda().clone();
        let contraction = lambda.star();
        if contraction.abs() >= GoldenNum::one() {
            return Err(Error::NotPisot(format!(
                "|star(lambda)| = {} >= 1",
                contraction.abs().to_f64()
            )));
        }
        let mut translations: [[Vec<GoldenNum>; 2]; 2] = Default::default();
        let mut starred: [[Vec<GoldenNum>; 2]; 2] = Default::default();
        let mut matrix = [[0u64; 2]; 2];
        for child in 0..2 {
            for parent in 0..2 {
                for t in inflation.displacement_set(child, parent) {
                    let st = t.star();
                    translations[child][parent].push(-&st);
                    starred[child][parent].push(st);
                    matrix[child][parent] += 1;
                }
            }
        }
        // Window volumes solve v = |c| M v; for a golden Pisot unit this is
        // the right PF eigenvector scaled to total volume τ.
        let pf = inflation.rule().pf_data()?;
        let volumes = [
            GoldenNum::tau() * &pf.right[0],
            GoldenNum::tau() * &pf.right[1],
        ];
        let abs_c = contraction.abs();
        for alpha in 0..2 {
            let mut rhs = GoldenNum::zero();
            for beta in 0..2 {
                rhs = &rhs + &(GoldenNum::from_int(matrix[alpha][beta] as i64) * &volumes[beta]);
            }
            if volumes[alpha] != &abs_c * &rhs {
                return Err(Error::NotPisot(
                    "volume vector is not invariant; inflation factor is not a unit".into(),
                ));
            }
        }
        Ok(GraphIFS {
            contraction,
            lambda,
            translations,
            starred,
            matrix,
            volumes,
        })
    }

    pub fn contraction(&self) -> &GoldenNum {
        &self.contraction
    }

    pub fn lambda(&self) -> &GoldenNum {
        &self.lambda
    }

    /// The translations applied in the set equation (−star of the
    /// displacement sets).
    pub fn translations(&self, child: TileKind, parent: TileKind) -> &[GoldenNum] {
        &self.translations[child.index()][parent.index()]
    }

    /// star(T[child][parent]) as printed in the displacement tables.
    pub fn starred_displacements(&self, child: TileKind, parent: TileKind) -> &[GoldenNum] {
        &self.starred[child.index()][parent.index()]
    }

    pub fn map_count(&self, child: TileKind, parent: TileKind) -> u64 {
        self.matrix[child.index()][parent.index()]
    }

    /// Exact per-letter window volumes ((1, 1/τ) for the built-in rules).
    pub fn volume_vector(&self) -> [GoldenNum; 2] {
        self.volumes.clone()
    }

    /// Seed intervals of the exact per-letter volumes, positioned so that
    /// the first moments solve the fixed-point equation. For rules with
    /// interval windows this seed is the attractor itself.
    pub fn canonical_seed(&self) -> Result<[Window; 2]> {
        let c = &self.contraction;
        let abs_c = c.abs();
        let cc = &abs_c * c;
        // b_α v_α = Σ_β |c|·c·m_αβ v_β b_β + |c|·Σ_β v_β Σ_s s
        let mut a = vec![vec![GoldenNum::zero(); 2]; 2];
        let mut rhs = vec![GoldenNum::zero(); 2];
        for alpha in 0..2 {
            a[alpha][alpha] = &a[alpha][alpha] + &self.volumes[alpha];
            for beta in 0..2 {
                let m = GoldenNum::from_int(self.matrix[alpha][beta] as i64);
                a[alpha][beta] = &a[alpha][beta] - &(&cc * &m * &self.volumes[beta]);
                let mut s_sum = GoldenNum::zero();
                for s in &self.translations[alpha][beta] {
                    s_sum = &s_sum + s;
                }
                rhs[alpha] = &rhs[alpha] + &(&abs_c * &self.volumes[beta] * &s_sum);
            }
        }
        let b = linalg::solve(&a, &rhs)
            .ok_or_else(|| Error::NotPisot("barycenter system is singular".into()))?;
        let half = GoldenNum::from_rational(1, 2);
        let mk = |idx: usize| -> Result<Window> {
            let hv = &half * &self.volumes[idx];
            Window::closed(&b[idx] - &hv, &b[idx] + &hv)
        };
        Ok([mk(0)?, mk(1)?])
    }

    /// Closed hulls of the attractor windows, approximated by float
    /// iteration with a safety margin.
    pub fn window_hulls_f64(&self, margin: f64) -> [(f64, f64); 2] {
        let c = self.contraction.to_f64();
        let mut hull = [(-10.0f64, 10.0f64); 2];
        for _ in 0..200 {
            let mut next = [(f64::INFINITY, f64::NEG_INFINITY); 2];
            for alpha in 0..2 {
                for beta in 0..2 {
                    for s in &self.translations[alpha][beta] {
                        let sv = s.to_f64();
                        let (lo, hi) = hull[beta];
                        let (a, b) = if c >= 0.0 {
                            (c * lo + sv, c * hi + sv)
                        } else {
                            (c * hi + sv, c * lo + sv)
                        };
                        next[alpha].0 = next[alpha].0.min(a);
                        next[alpha].1 = next[alpha].1.max(b);
                    }
                }
            }
            hull = next;
        }
        [
            (hull[0].0 - margin, hull[0].1 + margin),
            (hull[1].0 - margin, hull[1].1 + margin),
        ]
    }
}

/// Exact endpoint (m + nτ)/denom with machine-word coefficients; private to
/// the iteration engine.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct QPoint {
    m: i128,
    n: i128,
}

impl QPoint {
    fn le(&self, other: &QPoint) -> bool {
        self.cmp_q(other) != std::cmp::Ordering::Greater
    }

    fn cmp_q(&self, other: &QPoint) -> std::cmp::Ordering {
        // sign of Δm + Δn·τ = sign of (2Δm + Δn) + Δn·√5, halved
        let p = self.m - other.m;
        let q = self.n - other.n;
        let e = 2 * p + q;
        let f = q;
        if e == 0 && f == 0 {
            return std::cmp::Ordering::Equal;
        }
        if e >= 0 && f >= 0 {
            return std::cmp::Ordering::Greater;
        }
        if e <= 0 && f <= 0 {
            return std::cmp::Ordering::Less;
        }
        let e2 = e.checked_mul(e).expect("overflow in window comparison");
        let f2 = 5 * f.checked_mul(f).expect("overflow in window comparison");
        let positive_side = e > 0;
        match e2.cmp(&f2) {
            std::cmp::Ordering::Greater => {
                if positive_side {
                    std::cmp::Ordering::Greater
                } else {
                    std::cmp::Ordering::Less
                }
            }
            std::cmp::Ordering::Less => {
                if positive_side {
                    std::cmp::Ordering::Less
                } else {
                    std::cmp::Ordering::Greater
                }
            }
            std::cmp::Ordering::Equal => std::cmp::Ordering::Equal,
        }
    }

    fn to_f64(self, denom: f64) -> f64 {
        const TAU: f64 = 1.618_033_988_749_894_8;
        (self.m as f64 + self.n as f64 * TAU) / denom
    }

    fn to_golden(self, denom: &BigInt) -> GoldenNum {
        let g = GoldenInt::new(BigInt::from(self.m), BigInt::from(self.n)).to_golden_num();
        g / GoldenNum::from_big_rational(BigRational::from_integer(denom.clone()))
    }
}

fn q_mul_add(c: (i128, i128), x: QPoint, add: (i128, i128)) -> QPoint {
    // (cm + cnτ)(m + nτ) = (cm·m + cn·n) + (cm·n + cn·m + cn·n)τ, then + add
    let (cm, cn) = c;
    let m = cm
        .checked_mul(x.m)
        .and_then(|v| v.checked_add(cn.checked_mul(x.n)?))
        .and_then(|v| v.checked_add(add.0))
        .expect("overflow in window iteration");
    let n = cm
        .checked_mul(x.n)
        .and_then(|v| v.checked_add(cn.checked_mul(x.m)?))
        .and_then(|v| v.checked_add(cn.checked_mul(x.n)?))
        .and_then(|v| v.checked_add(add.1))
        .expect("overflow in window iteration");
    QPoint { m, n }
}

/// Depth-d union-of-intervals approximant of the attractor windows.
#[derive(Clone, Debug)]
pub struct WindowApprox {
    depth: usize,
    denom: BigInt,
    intervals: [Vec<(QPoint, QPoint)>; 2],
    /// Measure absorbed by merging overlapping images, summed over all
    /// depths, as an exact golden number.
    overlap: GoldenNum,
    /// |contraction|^depth · max seed diameter; geometric distance bound to
    /// the attractor.
    detail_hint: f64,
    exactly_invariant: bool,
}

impl WindowApprox {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn interval_count(&self, kind: TileKind) -> usize {
        self.intervals[kind.index()].len()
    }

    /// Exact union measure per letter.
    pub fn volumes(&self) -> [GoldenNum; 2] {
        let denom = GoldenNum::from_big_rational(BigRational::from_integer(self.denom.clone()));
        let mut out = [GoldenNum::zero(), GoldenNum::zero()];
        for k in 0..2 {
            let mut m = 0i128;
            let mut n = 0i128;
            for (lo, hi) in &self.intervals[k] {
                m += hi.m - lo.m;
                n += hi.n - lo.n;
            }
            out[k] = GoldenInt::new(BigInt::from(m), BigInt::from(n)).to_golden_num() / &denom;
        }
        out
    }

    /// Total measure lost to merging across all iteration depths.
    pub fn total_overlap(&self) -> &GoldenNum {
        &self.overlap
    }

    pub fn intervals_f64(&self, kind: TileKind) -> Vec<(f64, f64)> {
        let d = self.denom.to_f64().unwrap_or(1.0);
        self.intervals[kind.index()]
            .iter()
            .map(|(lo, hi)| (lo.to_f64(d), hi.to_f64(d)))
            .collect()
    }

    pub fn intervals_exact(&self, kind: TileKind) -> Vec<(GoldenNum, GoldenNum)> {
        self.intervals[kind.index()]
            .iter()
            .map(|(lo, hi)| (lo.to_golden(&self.denom), hi.to_golden(&self.denom)))
            .collect()
    }

    /// True when one more application of the IFS reproduces the approximant
    /// exactly (interval windows: the attractor has been reached).
    pub fn is_exactly_invariant(&self) -> bool {
        self.exactly_invariant
    }

    pub fn detail_scale(&self) -> f64 {
        self.detail_hint
    }
}

struct QEngine {
    contraction: (i128, i128),
    negative: bool,
    translations: [[Vec<(i128, i128)>; 2]; 2],
}

impl QEngine {
    fn step(
        &self,
        intervals: &[Vec<(QPoint, QPoint)>; 2],
    ) -> ([Vec<(QPoint, QPoint)>; 2], (i128, i128)) {
        let mut out: [Vec<(QPoint, QPoint)>; 2] = Default::default();
        let mut overlap = (0i128, 0i128);
        for alpha in 0..2 {
            let mut images: Vec<(QPoint, QPoint)> = Vec::new();
            for beta in 0..2 {
                for s in &self.translations[alpha][beta] {
                    for (lo, hi) in &intervals[beta] {
                        let a = q_mul_add(self.contraction, *lo, *s);
                        let b = q_mul_add(self.contraction, *hi, *s);
                        if self.negative {
                            images.push((b, a));
                        } else {
                            images.push((a, b));
                        }
                    }
                }
            }
            images.sort_by(|x, y| x.0.cmp_q(&y.0));
            let mut merged: Vec<(QPoint, QPoint)> = Vec::new();
            for (lo, hi) in images {
                match merged.last_mut() {
                    Some((_, cur_hi)) if lo.le(cur_hi) => {
                        // Touching intervals merge with zero loss; genuine
                        // overlap is accounted exactly.
                        let cut = if hi.le(cur_hi) { hi } else { *cur_hi };
                        if lo.cmp_q(&cut) == std::cmp::Ordering::Less {
                            overlap.0 += cut.m - lo.m;
                            overlap.1 += cut.n - lo.n;
                        }
                        if cur_hi.cmp_q(&hi) == std::cmp::Ordering::Less {
                            *cur_hi = hi;
                        }
                    }
                    _ => merged.push((lo, hi)),
                }
            }
            out[alpha] = merged;
        }
        (out, overlap)
    }
}

/// Applies the window set equation `depth` times to the seed, merging
/// interval unions exactly at every step.
pub fn iterate_windows(ifs: &GraphIFS, seed: &[Window; 2], depth: usize) -> Result<WindowApprox> {
    // Common denominator for all endpoints in (m + nτ)/D form.
    let mut denom = BigInt::one();
    let mut coords = Vec::new();
    for w in seed {
        for v in [w.lo(), w.hi()] {
            let p = v.rational_part() - v.surd_part();
            let q = v.surd_part() * BigRational::from_integer(BigInt::from(2));
            denom = lcm(&denom, p.denom());
            denom = lcm(&denom, q.denom());
            coords.push((p, q));
        }
    }
    let to_q = |p: &BigRational, q: &BigRational, denom: &BigInt| -> Result<QPoint> {
        let m = (p * BigRational::from_integer(denom.clone())).to_integer();
        let n = (q * BigRational::from_integer(denom.clone())).to_integer();
        Ok(QPoint {
            m: m.to_i128()
                .ok_or_else(|| Error::Range("seed coefficients too large".into()))?,
            n: n.to_i128()
                .ok_or_else(|| Error::Range("seed coefficients too large".into()))?,
        })
    };
    let mut pts = Vec::new();
    for (p, q) in &coords {
        pts.push(to_q(p, q, &denom)?);
    }
    let intervals0: [Vec<(QPoint, QPoint)>; 2] = [vec![(pts[0], pts[1])], vec![(pts[2], pts[3])]];

    let c_int = ifs
        .contraction()
        .to_golden_int()
        .ok_or_else(|| Error::UnsupportedRule("contraction is not in Z[tau]".into()))?;
    let contraction = (
        c_int
            .unit_part()
            .to_i128()
            .ok_or_else(|| Error::Range("contraction too large".into()))?,
        c_int
            .tau_part()
            .to_i128()
            .ok_or_else(|| Error::Range("contraction too large".into()))?,
    );
    let mut translations: [[Vec<(i128, i128)>; 2]; 2] = Default::default();
    let denom_i = denom
        .to_i128()
        .ok_or_else(|| Error::Range("denominator too large".into()))?;
    for child in 0..2 {
        for parent in 0..2 {
            for s in ifs.translations(
                TileKind::from_index(child).unwrap(),
                TileKind::from_index(parent).unwrap(),
            ) {
                let si = s
                    .to_golden_int()
                    .ok_or_else(|| Error::UnsupportedRule("translation is not in Z[tau]".into()))?;
                translations[child][parent].push((
                    si.unit_part().to_i128().unwrap() * denom_i,
                    si.tau_part().to_i128().unwrap() * denom_i,
                ));
            }
        }
    }
    let engine = QEngine {
        contraction,
        negative: ifs.contraction().sign() == std::cmp::Ordering::Less,
        translations,
    };

    let mut intervals = intervals0;
    let mut overlap_acc = (0i128, 0i128);
    for _ in 0..depth {
        let (next, overlap) = engine.step(&intervals);
        overlap_acc.0 += overlap.0;
        overlap_acc.1 += overlap.1;
        intervals = next;
    }

    // Detect exact invariance cheaply when the approximant is small.
    let exactly_invariant = if intervals[0].len() + intervals[1].len() <= 4096 {
        let (next, _) = engine.step(&intervals);
        next == intervals
    } else {
        false
    };

    let c_abs = ifs.contraction().abs().to_f64();
    let diam = seed
        .iter()
        .map(|w| w.volume().to_f64())
        .fold(0.0f64, f64::max);
    let overlap_g = QPoint {
        m: overlap_acc.0,
        n: overlap_acc.1,
    }
    .to_golden(&denom);
    Ok(WindowApprox {
        depth,
        denom,
        intervals,
        overlap: overlap_g,
        detail_hint: c_abs.powi(depth as i32) * diam,
        exactly_invariant,
    })
}

fn lcm(a: &BigInt, b: &BigInt) -> BigInt {
    if a.is_zero() || b.is_zero() {
        return BigInt::zero();
    }
    let g = gcd(a.clone(), b.clone());
    (a / &g) * b
}

fn gcd(mut a: BigInt, mut b: BigInt) -> BigInt {
    a = a.abs();
    b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

/// Box-count estimate of the boundary dimension of an approximant.
#[derive(Clone, Debug)]
pub struct BoxCountEstimate {
    /// Dyadic scales ε = 2^−j actually used.
    pub scales: Vec<f64>,
    /// Boundary box counts per scale.
    pub counts: Vec<usize>,
    /// Least-squares slope of log N against log 1/ε.
    pub slope: f64,
    /// Root-mean-square residual of the fit in log space.
    pub residual: f64,
}

/// Counts dyadic boxes meeting both the approximant and the closure of its
/// complement, and fits the log–log slope.
///
/// Scales run from the seed diameter down to the geometric detail scale of
/// the approximant; at least five scales must resolve structure.
pub fn boundary_dimension(approx: &WindowApprox) -> Result<BoxCountEstimate> {
    let j_min = 3i32;
    let j_max = if approx.exactly_invariant {
        14
    } else {
        let detail = approx.detail_hint.max(f64::MIN_POSITIVE);
        ((-detail.log2()).floor() as i32 - 1).min(17)
    };
    if j_max - j_min + 1 < 5 {
        return Err(Error::InsufficientDepth(format!(
            "only {} usable dyadic scales at depth {}; increase the depth",
            (j_max - j_min + 1).max(0),
            approx.depth
        )));
    }
    let mut scales = Vec::new();
    let mut counts = Vec::new();
    let denom = approx.denom.to_f64().unwrap_or(1.0);
    for j in j_min..=j_max {
        let inv_eps = (1u64 << j) as f64;
        let mut boxes: HashSet<i64> = HashSet::new();
        for k in 0..2 {
            for (lo, hi) in &approx.intervals[k] {
                for e in [lo.to_f64(denom), hi.to_f64(denom)] {
                    let scaled = e * inv_eps;
                    let idx = scaled.floor() as i64;
                    boxes.insert(idx);
                    // An endpoint on a box corner bounds both neighbours.
                    if (scaled - scaled.round()).abs() < 1e-12 {
                        boxes.insert(idx - 1);
                    }
                }
            }
        }
        scales.push(1.0 / inv_eps);
        counts.push(boxes.len());
    }
    let xs: Vec<f64> = (j_min..=j_max)
        .map(|j| j as f64 * std::f64::consts::LN_2)
        .collect();
    let ys: Vec<f64> = counts.iter().map(|&c| (c as f64).ln()).collect();
    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut cov = 0.0;
    let mut var = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        cov += (x - mean_x) * (y - mean_y);
        var += (x - mean_x) * (x - mean_x);
    }
    let slope = cov / var;
    let intercept = mean_y - slope * mean_x;
    let mut ss = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        let r = y - (slope * x + intercept);
        ss += r * r;
    }
    let residual = (ss / n).sqrt();
    Ok(BoxCountEstimate {
        scales,
        counts,
        slope,
        residual,
    })
}

/// Hausdorff distance between two unions of closed intervals, both sorted
/// by lower endpoint.
pub fn hausdorff_distance(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    // Distance from a point to a sorted interval union, by binary search.
    fn dist_to(x: f64, to: &[(f64, f64)]) -> f64 {
        if to.is_empty() {
            return f64::INFINITY;
        }
        let idx = to.partition_point(|&(lo, _)| lo <= x);
        let mut d = f64::INFINITY;
        if idx < to.len() {
            d = d.min(to[idx].0 - x);
        }
        if idx > 0 {
            let (_, hi) = to[idx - 1];
            d = d.min(if x <= hi { 0.0 } else { x - hi });
        }
        d.max(0.0)
    }
    fn covered(x: f64, by: &[(f64, f64)]) -> bool {
        let idx = by.partition_point(|&(lo, _)| lo <= x);
        idx > 0 && x <= by[idx - 1].1
    }
    fn directed(from: &[(f64, f64)], to: &[(f64, f64)]) -> f64 {
        // sup over `from` of d(x, to): attained at endpoints of `from` or at
        // gap midpoints of `to` covered by `from`.
        let mut worst = 0.0f64;
        for &(lo, hi) in from {
            worst = worst.max(dist_to(lo, to)).max(dist_to(hi, to));
        }
        for w in to.windows(2) {
            let mid = (w[0].1 + w[1].0) / 2.0;
            if covered(mid, from) {
                worst = worst.max(dist_to(mid, to));
            }
        }
        worst
    }
    directed(a, b).max(directed(b, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::parse_golden;
    use crate::substitution::SubstRule;

    fn g(s: &str) -> GoldenNum {
        parse_golden(s).unwrap()
    }

    fn ifs_for(name: &str) -> GraphIFS {
        let inf = SubstRule::by_name(name)
            .unwrap()
            .geometric_inflation()
            .unwrap();
        GraphIFS::from_inflation(&inf).unwrap()
    }

    #[test]
    fn fibonacci_ifs_data() {
        let ifs = ifs_for("fibonacci");
        assert_eq!(ifs.contraction(), &g("1-t"));
        // starred displacement sets as printed
        assert_eq!(
            ifs.starred_displacements(TileKind::B, TileKind::A),
            &[g("1-t")]
        );
        assert_eq!(
            ifs.starred_displacements(TileKind::A, TileKind::A),
            &[g("0")]
        );
        // applied translations carry the opposite sign
        assert_eq!(ifs.translations(TileKind::B, TileKind::A), &[g("t-1")]);
        // map counts match the substitution matrix
        assert_eq!(ifs.map_count(TileKind::A, TileKind::A), 1);
        assert_eq!(ifs.map_count(TileKind::B, TileKind::B), 0);
    }

    #[test]
    fn reshuffled_ifs_data() {
        let ifs = ifs_for("reshuffled");
        assert_eq!(ifs.contraction(), &g("2-t"));
        assert_eq!(
            ifs.starred_displacements(TileKind::A, TileKind::A),
            &[g("0"), g("1-t")]
        );
        assert_eq!(
            ifs.starred_displacements(TileKind::B, TileKind::A),
            &[g("2-2*t")]
        );
        assert_eq!(
            ifs.starred_displacements(TileKind::A, TileKind::B),
            &[g("1")]
        );
        assert_eq!(
            ifs.starred_displacements(TileKind::B, TileKind::B),
            &[g("0")]
        );
        for child in TileKind::ALL {
            for parent in TileKind::ALL {
                assert_eq!(
                    ifs.translations(child, parent).len() as u64,
                    ifs.map_count(child, parent)
                );
            }
        }
    }

    #[test]
    fn non_pisot_rejected() {
        let inf = SubstRule::parse("a->ab; b->ab")
            .unwrap()
            .geometric_inflation();
        assert!(inf.is_err());
    }

    #[test]
    fn volume_vector_values() {
        for name in ["fibonacci", "reshuffled"] {
            let v = ifs_for(name).volume_vector();
            assert_eq!(v[0], GoldenNum::one(), "{name}");
            assert_eq!(v[1], g("t-1"), "{name}");
            // ratio vol(W_a)/vol(W_b) = τ
            assert_eq!(&v[0] / &v[1], GoldenNum::tau());
        }
    }

    #[test]
    fn fibonacci_seed_is_the_coding_window_pair() {
        let ifs = ifs_for("fibonacci");
        let seed = ifs.canonical_seed().unwrap();
        assert_eq!(seed[0].lo(), &g("1-t"));
        assert_eq!(seed[0].hi(), &g("2-t"));
        assert_eq!(seed[1].lo(), &g("2-t"));
        assert_eq!(seed[1].hi(), &g("1"));
    }

    #[test]
    fn fibonacci_attractor_is_fixed_at_every_depth() {
        let ifs = ifs_for("fibonacci");
        let seed = ifs.canonical_seed().unwrap();
        for depth in [0usize, 1, 2, 5, 9] {
            let approx = iterate_windows(&ifs, &seed, depth).unwrap();
            assert_eq!(approx.interval_count(TileKind::A), 1);
            assert_eq!(approx.interval_count(TileKind::B), 1);
            let a = approx.intervals_exact(TileKind::A);
            assert_eq!(a[0].0, g("1-t"));
            assert_eq!(a[0].1, g("2-t"));
            let b = approx.intervals_exact(TileKind::B);
            assert_eq!(b[0].0, g("2-t"));
            assert_eq!(b[0].1, g("1"));
            assert!(approx.total_overlap().is_zero());
            assert!(approx.is_exactly_invariant());
        }
    }

    #[test]
    fn depth_zero_echoes_seed() {
        let ifs = ifs_for("reshuffled");
        let seed = ifs.canonical_seed().unwrap();
        let approx = iterate_windows(&ifs, &seed, 0).unwrap();
        let a = approx.intervals_exact(TileKind::A);
        assert_eq!(a[0].0, seed[0].lo().clone());
        assert_eq!(a[0].1, seed[0].hi().clone());
    }

    #[test]
    fn volume_conserved_exactly_with_overlap_accounted() {
        let ifs = ifs_for("reshuffled");
        let seed = ifs.canonical_seed().unwrap();
        for depth in [0usize, 1, 2, 4, 8, 12] {
            let approx = iterate_windows(&ifs, &seed, depth).unwrap();
            let v = approx.volumes();
            let total = &v[0] + &v[1] + approx.total_overlap();
            assert_eq!(total, GoldenNum::tau(), "depth {depth}");
        }
    }

    #[test]
    fn approximant_volumes_converge() {
        let ifs = ifs_for("reshuffled");
        let seed = ifs.canonical_seed().unwrap();
        let a10 = iterate_windows(&ifs, &seed, 10).unwrap();
        let a14 = iterate_windows(&ifs, &seed, 14).unwrap();
        let tot = |a: &WindowApprox| {
            let v = a.volumes();
            (&v[0] + &v[1]).to_f64()
        };
        assert!((tot(&a10) - tot(&a14)).abs() < 1e-3);
        // approximants nest within a contraction-factor-sized thickening
        for kind in TileKind::ALL {
            let d = hausdorff_distance(&a10.intervals_f64(kind), &a14.intervals_f64(kind));
            let bound = ifs.contraction().abs().to_f64().powi(10) * 2.0;
            assert!(d <= bound, "{kind}: d = {d}, bound = {bound}");
        }
    }

    #[test]
    fn hausdorff_monotone_in_depth() {
        let ifs = ifs_for("reshuffled");
        let seed = ifs.canonical_seed().unwrap();
        let c = ifs.contraction().abs().to_f64();
        let diam = seed
            .iter()
            .map(|w| w.volume().to_f64())
            .fold(0.0f64, f64::max);
        let mut prev = iterate_windows(&ifs, &seed, 0).unwrap();
        for d in 1..=10usize {
            let cur = iterate_windows(&ifs, &seed, d).unwrap();
            for kind in TileKind::ALL {
                let dist = hausdorff_distance(&prev.intervals_f64(kind), &cur.intervals_f64(kind));
                let bound = c.powi(d as i32 - 1) * diam + 1e-9;
                assert!(dist <= bound, "depth {d} {kind}: {dist} > {bound}");
            }
            prev = cur;
        }
    }

    #[test]
    fn mirror_windows_are_reflected_translates() {
        // In the starred reference frame the mirror windows satisfy
        // W̃_a = τ−1−W_a and W̃_b = −1−W_b; our stored windows are the
        // negatives of that frame, where the same relation reads
        // W̃_a = (1−τ)−W_a and W̃_b = 1−W_b.
        let ifs = ifs_for("reshuffled");
        let ifs_m = ifs_for("reshuffled-mirror");
        let depth = 12;
        let a = iterate_windows(&ifs, &ifs.canonical_seed().unwrap(), depth).unwrap();
        let m = iterate_windows(&ifs_m, &ifs_m.canonical_seed().unwrap(), depth).unwrap();
        let reflect = |ints: &[(f64, f64)], offset: f64| -> Vec<(f64, f64)> {
            let mut out: Vec<(f64, f64)> = ints
                .iter()
                .map(|&(lo, hi)| (offset - hi, offset - lo))
                .collect();
            out.sort_by(|x, y| x.partial_cmp(y).unwrap());
            out
        };
        let tau = GoldenNum::tau().to_f64();
        let tol = ifs.contraction().abs().to_f64().powi(depth as i32) * 4.0;
        let da = hausdorff_distance(
            &m.intervals_f64(TileKind::A),
            &reflect(&a.intervals_f64(TileKind::A), 1.0 - tau),
        );
        assert!(da < tol, "a-window reflection distance {da} (tol {tol})");
        let db = hausdorff_distance(
            &m.intervals_f64(TileKind::B),
            &reflect(&a.intervals_f64(TileKind::B), 1.0),
        );
        assert!(db < tol, "b-window reflection distance {db} (tol {tol})");
    }

    #[test]
    fn fibonacci_boundary_dimension_is_zero() {
        let ifs = ifs_for("fibonacci");
        let seed = ifs.canonical_seed().unwrap();
        let approx = iterate_windows(&ifs, &seed, 5).unwrap();
        let est = boundary_dimension(&approx).unwrap();
        assert!(est.slope.abs() < 0.1, "slope {}", est.slope);
    }

    #[test]
    fn reshuffled_boundary_dimension() {
        let ifs = ifs_for("reshuffled");
        let seed = ifs.canonical_seed().unwrap();
        let approx = iterate_windows(&ifs, &seed, 16).unwrap();
        let est = boundary_dimension(&approx).unwrap();
        let expect = (1.0 + 2.0f64.sqrt()).ln() / (2.0 * GoldenNum::tau().to_f64().ln());
        assert!((expect - 0.915_785_46).abs() < 1e-7);
        assert!(
            (est.slope - expect).abs() < 0.05,
            "slope {} vs {expect}, residual {}",
            est.slope,
            est.residual
        );
    }

    #[test]
    fn too_shallow_approximant_errors() {
        let ifs = ifs_for("reshuffled");
        let seed = ifs.canonical_seed().unwrap();
        let approx = iterate_windows(&ifs, &seed, 2).unwrap();
        assert!(matches!(
            boundary_dimension(&approx),
            Err(Error::InsufficientDepth(_))
        ));
    }

    #[test]
    fn deeper_slope_stays_within_residual() {
        let ifs = ifs_for("reshuffled");
        let seed = ifs.canonical_seed().unwrap();
        let e8 = boundary_dimension(&iterate_windows(&ifs, &seed, 8).unwrap()).unwrap();
        let e16 = boundary_dimension(&iterate_windows(&ifs, &seed, 16).unwrap()).unwrap();
        assert!(
            (e16.slope - e8.slope).abs() <= e8.residual + e16.residual,
            "slopes {} vs {} residuals {} {}",
            e8.slope,
            e16.slope,
            e8.residual,
            e16.residual
        );
    }
}
