//! Pair correlations ν_αβ and the autocorrelation ν of the golden chain,
//! computed along two independent routes: closed-form piecewise-linear
//! g-functions (window covariograms) and the exact renormalisation system
//! induced by the inflation displacement sets. The two routes are
//! cross-validated by the tests and the acceptance suite.
//!
//! Value convention: ν_αβ(z) is the frequency per point of a pair with an
//! α-point at x and a β-point at x − z, equivalently ν_αβ(z) = g_αβ(star z),
//! positive exactly when z lies in the (α, β) difference set.

use std::cell::RefCell;
use std::collections::HashMap;

use num_bigint::BigInt;

use crate::algebra::{GoldenInt, GoldenNum};
use crate::error::{Error, Result};
use crate::linalg;
use crate::model_set::{difference_set_member, ModelSetSpec, TileKind, Window};
use crate::substitution::GeometricInflation;

pub type Pair = (TileKind, TileKind);

pub const ALL_PAIRS: [Pair; 4] = [
    (TileKind::A, TileKind::A),
    (TileKind::A, TileKind::B),
    (TileKind::B, TileKind::A),
    (TileKind::B, TileKind::B),
];

/// Exact evaluation of the closed-form pair-correlation functions on the
/// internal line.
///
/// g_aa(y) = max((1−|y|)/τ, 0); g_bb(y) = max((1−τ|y|)/τ², 0);
/// g_ba is the trapezoid rising as y/τ on [0, τ−1], flat 1/τ² on [τ−1, 1],
/// falling as 1−y/τ on [1, τ]; g_ab(y) = g_ba(−y).
pub fn g_eval_exact(pair: Pair, y: &GoldenNum) -> GoldenNum {
    let tau = GoldenNum::tau();
    let one = GoldenNum::one();
    let zero = GoldenNum::zero();
    match pair {
        (TileKind::A, TileKind::A) => {
            let v = (&one - &y.abs()) / &tau;
            if v > zero {
                v
            } else {
                zero
            }
        }
        (TileKind::B, TileKind::B) => {
            let v = (&one - &(&tau * &y.abs())) / (&tau * &tau);
            if v > zero {
                v
            } else {
                zero
            }
        }
        (TileKind::B, TileKind::A) => {
            let tm1 = &tau - &one;
            if y < &zero || y > &tau {
                zero
            } else if y <= &tm1 {
                y / &tau
            } else if y <= &one {
                (&tau * &tau).checked_recip().expect("nonzero")
            } else {
                &one - &(y / &tau)
            }
        }
        (TileKind::A, TileKind::B) => g_eval_exact((TileKind::B, TileKind::A), &-y),
    }
}

/// Float wrapper around the exact piecewise evaluation.
pub fn g_eval(pair: Pair, y: f64) -> f64 {
    let tau = GoldenNum::tau().to_f64();
    match pair {
        (TileKind::A, TileKind::A) => ((1.0 - y.abs()) / tau).max(0.0),
        (TileKind::B, TileKind::B) => ((1.0 - tau * y.abs()) / (tau * tau)).max(0.0),
        (TileKind::B, TileKind::A) => {
            if !(0.0..=tau).contains(&y) {
                0.0
            } else if y <= tau - 1.0 {
                y / tau
            } else if y <= 1.0 {
                1.0 / (tau * tau)
            } else {
                1.0 - y / tau
            }
        }
        (TileKind::A, TileKind::B) => g_eval((TileKind::B, TileKind::A), -y),
    }
}

/// Closed-form pair correlation ν_αβ(z) = g_αβ(star z), exact.
pub fn nu_pair_exact(pair: Pair, z: &GoldenInt) -> GoldenNum {
    if !difference_set_member(z, pair.0, pair.1) {
        return GoldenNum::zero();
    }
    g_eval_exact(pair, &z.star().to_golden_num())
}

/// Closed-form pair correlation as a float.
pub fn nu_pair(pair: Pair, z: &GoldenInt) -> f64 {
    nu_pair_exact(pair, z).to_f64()
}

/// Covariogram value of an interval window at y, normalised by vol(W) = τ:
/// (1/τ)·max(L − |y|, 0) for a window of length L.
pub fn covariogram(window: &Window, y: f64) -> f64 {
    let l = window.volume().to_f64();
    ((l - y.abs()) / GoldenNum::tau().to_f64()).max(0.0)
}

/// Exact mixed covariogram (1/τ)(1_{−A} ∗ 1_B)(y) = vol(A ∩ (B − y))/τ.
pub fn cross_covariogram_exact(a: &Window, b: &Window, y: &GoldenNum) -> GoldenNum {
    match a.intersect(&b.translate(&-y)) {
        Some(i) => i.volume() / GoldenNum::tau(),
        None => GoldenNum::zero(),
    }
}

/// Total autocorrelation ν(z) = Σ_αβ ν_αβ(z), exact closed form.
pub fn autocorrelation_exact(z: &GoldenInt) -> GoldenNum {
    let mut acc = GoldenNum::zero();
    for pair in ALL_PAIRS {
        acc = &acc + &nu_pair_exact(pair, z);
    }
    acc
}

pub fn autocorrelation(z: &GoldenInt) -> f64 {
    autocorrelation_exact(z).to_f64()
}

type ZKey = (usize, BigInt, BigInt);

fn zkey(pair: Pair, z: &GoldenInt) -> ZKey {
    (
        pair.0.index() * 2 + pair.1.index(),
        z.unit_part().clone(),
        z.tau_part().clone(),
    )
}

/// One term of a renormalisation relation: the referenced pair and the
/// integer shift, i.e. the relation reads
/// ν_pair(z) = (1/λ) Σ_terms ν_term.pair(z/λ + term.shift).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RenormTerm {
    pub pair: Pair,
    pub shift: GoldenInt,
}

/// The exact renormalisation system of an inflation rule: the finite closed
/// set of unknowns ν_αβ(z) together with the linear relations among them.
#[derive(Clone, Debug)]
pub struct RenormSystem {
    lambda: GoldenNum,
    lambda_int: GoldenInt,
    /// Displacement sets T[child][parent] as exact golden integers.
    t_sets: [[Vec<GoldenInt>; 2]; 2],
    /// Core unknowns (pair, z), in a fixed deterministic order.
    indices: Vec<(Pair, GoldenInt)>,
    index_of: HashMap<ZKey, usize>,
    /// Integer coefficient matrix C: relation ν_i = (1/λ) Σ_j C[i][j] ν_j.
    coefficients: Vec<Vec<u64>>,
}

impl RenormSystem {
    /// Builds the closed finite system from an inflation.
    ///
    /// The candidate bound is B₀ = Δ/(λ−1) with Δ = max |t − s|; candidates
    /// are pruned by difference-set membership (exact interval windows for
    /// the Fibonacci chain, conservative closed hulls otherwise).
    pub fn build(inflation: &GeometricInflation) -> Result<Self> {
        if inflation.dim() != 2 {
            return Err(Error::UnsupportedRule(
                "renormalisation requires a two-letter rule".into(),
            ));
        }
        let lambda = inflation.lambda().clone();
        let lambda_int = lambda
            .to_golden_int()
            .ok_or_else(|| Error::UnsupportedRule("inflation factor not in Z[tau]".into()))?;
        let mut t_sets: [[Vec<GoldenInt>; 2]; 2] = Default::default();
        for child in 0..2 {
            for parent in 0..2 {
                for t in inflation.displacement_set(child, parent) {
                    let ti = t.to_golden_int().ok_or_else(|| {
                        Error::UnsupportedRule("displacements not in Z[tau]".into())
                    })?;
                    t_sets[child][parent].push(ti);
                }
            }
        }

        let membership = MembershipOracle::for_inflation(inflation)?;

        // Candidate box: |z| ≤ B₀ and star(z) within the difference hulls.
        let all_t: Vec<f64> = t_sets
            .iter()
            .flatten()
            .flatten()
            .map(|t| t.to_f64())
            .collect();
        let mut delta = 0.0f64;
        for t in &all_t {
            for s in &all_t {
                delta = delta.max((t - s).abs());
            }
        }
        let lam = lambda.to_f64();
        let b0 = delta / (lam - 1.0) + 1e-9;
        let star_bound = membership.star_bound();

        let mut indices = Vec::new();
        let mut index_of = HashMap::new();
        let sqrt5 = 5.0f64.sqrt();
        let n_max = ((b0 + star_bound) / sqrt5).ceil() as i64 + 1;
        for n in -n_max..=n_max {
            let m_span = (b0 + 1.7 * n.abs() as f64).ceil() as i64 + 1;
            for m in -m_span..=m_span {
                let z = GoldenInt::from_ints(m, n);
                if z.to_f64().abs() > b0 {
                    continue;
                }
                for pair in ALL_PAIRS {
                    if membership.member(&z, pair) {
                        index_of.insert(zkey(pair, &z), indices.len());
                        indices.push((pair, z.clone()));
                    }
                }
            }
        }
        // Deterministic order: by pair index, then by position.
        let mut order: Vec<usize> = (0..indices.len()).collect();
        order.sort_by(|&i, &j| {
            let (pi, zi) = &indices[i];
            let (pj, zj) = &indices[j];
            (pi.0.index(), pi.1.index())
                .cmp(&(pj.0.index(), pj.1.index()))
                .then_with(|| zi.cmp(zj))
        });
        let indices: Vec<(Pair, GoldenInt)> = order.iter().map(|&i| indices[i].clone()).collect();
        let mut index_of = HashMap::new();
        for (i, (pair, z)) in indices.iter().enumerate() {
            index_of.insert(zkey(*pair, z), i);
        }

        let mut sys = RenormSystem {
            lambda,
            lambda_int,
            t_sets,
            indices,
            index_of,
            coefficients: Vec::new(),
        };
        let mut coefficients = Vec::new();
        for i in 0..sys.indices.len() {
            let (pair, z) = sys.indices[i].clone();
            let mut row = vec![0u64; sys.indices.len()];
            for (rpair, arg) in sys.relation_args(pair, &z) {
                if let Some(&j) = sys.index_of.get(&zkey(rpair, &arg)) {
                    row[j] += 1;
                } else if membership.member(&arg, rpair) {
                    return Err(Error::Closure(format!(
                        "relation for ({}{}, {}) references ({}{}, {}) outside the core",
                        pair.0, pair.1, z, rpair.0, rpair.1, arg
                    )));
                }
            }
            coefficients.push(row);
        }
        sys.coefficients = coefficients;
        Ok(sys)
    }

    /// All (γδ, (z + t − s)/λ) terms of the relation for ν_pair(z) whose
    /// argument lies in Z[τ]. Terms outside Z[τ] correspond to no lattice
    /// pair and are dropped.
    fn relation_args(&self, pair: Pair, z: &GoldenInt) -> Vec<(Pair, GoldenInt)> {
        let mut out = Vec::new();
        let (alpha, beta) = (pair.0.index(), pair.1.index());
        for gamma in 0..2 {
            for delta in 0..2 {
                for t in &self.t_sets[alpha][gamma] {
                    for s in &self.t_sets[beta][delta] {
                        let num = &(z + t) - s;
                        if let Some(arg) = num.checked_div_exact(&self.lambda_int) {
                            out.push((
                                (
                                    TileKind::from_index(gamma).unwrap(),
                                    TileKind::from_index(delta).unwrap(),
                                ),
                                arg,
                            ));
                        }
                    }
                }
            }
        }
        out
    }

    /// Symbolic relations for the generic builder: for each pair, the terms
    /// (γδ, shift) with shift = (t − s)/λ, so that the relation reads
    /// ν_αβ(z) = (1/λ) Σ ν_γδ(z/λ + shift). Only shifts in Z[τ] appear.
    pub fn symbolic_relations(&self, pair: Pair) -> Vec<RenormTerm> {
        let mut out = Vec::new();
        let (alpha, beta) = (pair.0.index(), pair.1.index());
        for gamma in 0..2 {
            for delta in 0..2 {
                for t in &self.t_sets[alpha][gamma] {
                    for s in &self.t_sets[beta][delta] {
                        if let Some(shift) = (t - s).checked_div_exact(&self.lambda_int) {
                            out.push(RenormTerm {
                                pair: (
                                    TileKind::from_index(gamma).unwrap(),
                                    TileKind::from_index(delta).unwrap(),
                                ),
                                shift,
                            });
                        }
                    }
                }
            }
        }
        out
    }

    pub fn lambda(&self) -> &GoldenNum {
        &self.lambda
    }

    pub fn core_indices(&self) -> &[(Pair, GoldenInt)] {
        &self.indices
    }

    pub fn coefficient(&self, i: usize, j: usize) -> u64 {
        self.coefficients[i][j]
    }

    /// Solves the closed system: the eigenvector of the relation operator
    /// for eigenvalue 1, normalised by ν_aa(0) + ν_bb(0) = 1. The kernel
    /// dimension is checked by exact rank computation over Q(√5).
    pub fn solve(&self) -> Result<PairCorrelation> {
        let n = self.indices.len();
        // (C − λ·I) ν = 0
        let mut mat = vec![vec![GoldenNum::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                mat[i][j] = GoldenNum::from_int(self.coefficients[i][j] as i64);
            }
            mat[i][i] = &mat[i][i] - &self.lambda;
        }
        let kernel = linalg::kernel(&mat);
        if kernel.len() != 1 {
            return Err(Error::DegenerateSystem { dim: kernel.len() });
        }
        let basis = &kernel[0];
        // Normalise: ν_aa(0) + ν_bb(0) = 1.
        let zero = GoldenInt::zero();
        let iaa = self
            .index_of
            .get(&zkey((TileKind::A, TileKind::A), &zero))
            .ok_or_else(|| Error::Closure("core misses (aa, 0)".into()))?;
        let ibb = self
            .index_of
            .get(&zkey((TileKind::B, TileKind::B), &zero))
            .ok_or_else(|| Error::Closure("core misses (bb, 0)".into()))?;
        let scale = (&basis[*iaa] + &basis[*ibb])
            .checked_recip()
            .ok_or(Error::DegenerateSystem { dim: 0 })?;
        let mut values = HashMap::new();
        for (i, (pair, z)) in self.indices.iter().enumerate() {
            let v = &basis[i] * &scale;
            if v.sign() == std::cmp::Ordering::Less {
                return Err(Error::DegenerateSystem { dim: 1 });
            }
            values.insert(zkey(*pair, z), v);
        }
        Ok(PairCorrelation {
            system: self.clone(),
            values: RefCell::new(values),
        })
    }
}

/// Membership oracle for pruning: exact for interval-window rules, a
/// conservative closed-hull superset otherwise.
enum MembershipOracle {
    Exact([[Window; 2]; 2]),
    Hull {
        windows: [(f64, f64); 2],
        margin: f64,
    },
}

impl MembershipOracle {
    fn for_inflation(inflation: &GeometricInflation) -> Result<Self> {
        use crate::window_ifs::{iterate_windows, GraphIFS};
        let ifs = GraphIFS::from_inflation(inflation)?;
        let seed = ifs.canonical_seed()?;
        let probe = iterate_windows(&ifs, &seed, 1)?;
        if probe.is_exactly_invariant() {
            // Interval windows; the exact half-open letter windows of the
            // canonical chain give the exact difference sets.
            let spec = ModelSetSpec::canonical_tiles();
            let w = |k: TileKind| spec.letter_window(k).clone();
            let windows = [
                [
                    w(TileKind::A).minkowski_sub(&w(TileKind::A)),
                    w(TileKind::A).minkowski_sub(&w(TileKind::B)),
                ],
                [
                    w(TileKind::B).minkowski_sub(&w(TileKind::A)),
                    w(TileKind::B).minkowski_sub(&w(TileKind::B)),
                ],
            ];
            Ok(MembershipOracle::Exact(windows))
        } else {
            let hulls = ifs.window_hulls_f64(1e-9);
            Ok(MembershipOracle::Hull {
                windows: hulls,
                margin: 1e-9,
            })
        }
    }

    fn member(&self, z: &GoldenInt, pair: Pair) -> bool {
        let star = z.star();
        match self {
            MembershipOracle::Exact(w) => {
                w[pair.0.index()][pair.1.index()].contains(&star.to_golden_num())
            }
            MembershipOracle::Hull { windows, margin } => {
                let (alo, ahi) = windows[pair.0.index()];
                let (blo, bhi) = windows[pair.1.index()];
                let y = star.to_f64();
                y >= alo - bhi - margin && y <= ahi - blo + margin
            }
        }
    }

    fn star_bound(&self) -> f64 {
        match self {
            MembershipOracle::Exact(w) => w
                .iter()
                .flatten()
                .map(|win| {
                    let (lo, hi) = win.to_f64_pair();
                    lo.abs().max(hi.abs())
                })
                .fold(0.0, f64::max),
            MembershipOracle::Hull { windows, .. } => {
                let mut b: f64 = 0.0;
                for (alo, ahi) in windows {
                    for (blo, bhi) in windows {
                        b = b.max((ahi - blo).abs()).max((alo - bhi).abs());
                    }
                }
                b + 1.0
            }
        }
    }
}

/// Solved pair correlations: exact core values plus the recursion that
/// extends them to arbitrary distances.
#[derive(Debug)]
pub struct PairCorrelation {
    system: RenormSystem,
    values: RefCell<HashMap<ZKey, GoldenNum>>,
}

impl PairCorrelation {
    /// Exact correlation value by the renormalisation route; values outside
    /// the core set are determined recursively.
    pub fn nu_exact(&self, pair: Pair, z: &GoldenInt) -> GoldenNum {
        let key = zkey(pair, z);
        if let Some(v) = self.values.borrow().get(&key) {
            return v.clone();
        }
        // Outside the core: non-members vanish, the rest recurse.
        if !difference_set_member_generic(&self.system, z, pair) {
            return GoldenNum::zero();
        }
        let mut acc = GoldenNum::zero();
        for (rpair, arg) in self.system.relation_args(pair, z) {
            acc = &acc + &self.nu_exact(rpair, &arg);
        }
        let v = &acc / &self.system.lambda;
        self.values.borrow_mut().insert(key, v.clone());
        v
    }

    pub fn nu(&self, pair: Pair, z: &GoldenInt) -> f64 {
        self.nu_exact(pair, z).to_f64()
    }

    pub fn system(&self) -> &RenormSystem {
        &self.system
    }
}

/// Membership used by the recursion: exact for the Fibonacci-style chain
/// (the only case with a guaranteed one-dimensional solution).
fn difference_set_member_generic(system: &RenormSystem, z: &GoldenInt, pair: Pair) -> bool {
    // Recursion only needs a sound "not in the difference set" test; for
    // z outside every pairwise hull the value is zero.
    let _ = system;
    difference_set_member(z, pair.0, pair.1)
}

/// Convenience: build and solve the renormalisation system of an inflation.
pub fn solve_renorm(inflation: &GeometricInflation) -> Result<PairCorrelation> {
    RenormSystem::build(inflation)?.solve()
}

/// Report of the two candidate readings of the printed autocorrelation
/// self-consistency identity, evaluated against the closed-form route.
#[derive(Clone, Debug)]
pub struct AutocorrelationIdentityReport {
    /// max |ν(z) − RHS| with the first term read as (1/τ²)ν(1/τ²).
    pub max_err_as_printed: f64,
    /// max |ν(z) − RHS| with the first term read as (1/τ²)ν(z/τ²).
    pub max_err_scaled_argument: f64,
    pub samples: usize,
}

/// Evaluates both readings of the displayed ν(z) identity on the given
/// sample distances and reports the maximal deviations from the g-route.
pub fn autocorrelation_identity_probe(samples: &[GoldenInt]) -> AutocorrelationIdentityReport {
    let tau = GoldenNum::tau();
    let tau_int = GoldenInt::tau();
    let inv_tau2 = GoldenInt::from_ints(2, -1); // 1/τ² = 2 − τ
    let mut err_printed = 0.0f64;
    let mut err_scaled = 0.0f64;
    for z in samples {
        let lhs = autocorrelation(z);
        // Σ_{n∈Z} (1/τ^{|n|+1}) ν((z + sgn(n)((−τ)^{|n|} − 1))/τ^{|n|+1})
        let mut sum = 0.0f64;
        for n in -40i32..=40 {
            let k = n.unsigned_abs() as usize;
            let weight = tau.pow(-(k as i32 + 1)).to_f64();
            if weight < 1e-15 {
                continue;
            }
            // (−τ)^{|n|}
            let mut mt = GoldenInt::one();
            for _ in 0..k {
                mt = &mt * &-&tau_int;
            }
            let shift = &mt - &GoldenInt::one();
            let signed_shift = match n.signum() {
                1 => shift,
                -1 => -shift,
                _ => GoldenInt::zero(),
            };
            let num = z + &signed_shift;
            // divide by τ^{|n|+1} (τ is a unit)
            let mut arg = num;
            for _ in 0..=k {
                arg = arg.checked_div_exact(&tau_int).expect("tau is a unit");
            }
            sum += weight * autocorrelation(&arg);
        }
        let head_printed = tau.pow(-2).to_f64() * autocorrelation(&inv_tau2);
        let z_over_tau2 = z
            .checked_div_exact(&(&tau_int * &tau_int))
            .expect("tau^2 is a unit");
        let head_scaled = tau.pow(-2).to_f64() * autocorrelation(&z_over_tau2);
        err_printed = err_printed.max((lhs - (head_printed + sum)).abs());
        err_scaled = err_scaled.max((lhs - (head_scaled + sum)).abs());
    }
    AutocorrelationIdentityReport {
        max_err_as_printed: err_printed,
        max_err_scaled_argument: err_scaled,
        samples: samples.len(),
    }
}

/// Enumerates difference-set members (pair, z) with |z| ≤ bound, ordered by
/// |z|; a deterministic source of test distances.
pub fn difference_set_points(bound: f64) -> Vec<(Pair, GoldenInt)> {
    let mut out = Vec::new();
    let sqrt5 = 5.0f64.sqrt();
    let n_max = ((bound + 2.0) / sqrt5).ceil() as i64 + 1;
    for n in -n_max..=n_max {
        let m_span = (bound + 1.7 * n.abs() as f64).ceil() as i64 + 1;
        for m in -m_span..=m_span {
            let z = GoldenInt::from_ints(m, n);
            if z.to_f64().abs() > bound {
                continue;
            }
            for pair in ALL_PAIRS {
                if difference_set_member(&z, pair.0, pair.1) {
                    out.push((pair, z.clone()));
                }
            }
        }
    }
    out.sort_by(|(pa, za), (pb, zb)| {
        za.to_f64()
            .abs()
            .partial_cmp(&zb.to_f64().abs())
            .unwrap()
            .then_with(|| za.cmp(zb))
            .then_with(|| (pa.0.index(), pa.1.index()).cmp(&(pb.0.index(), pb.1.index())))
    });
    out
}
