//! Iterating distillation maps: fixed points, thresholds, tightness,
//! error-suppression order and yield.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::distill::{BlochMap, BlochVector, CliffordRotation, Evaluation};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `ρ_M = (1 - p)|M⟩⟨M| + p·1/2`, i.e. Bloch vector `(1 - p)·m`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DepolarizedInput<T> {
    pub target: BlochVector<T>,
    pub p: T,
}

impl<T: Scalar> DepolarizedInput<T> {
    pub fn new(target: BlochVector<T>, p: T) -> Result<Self> {
        if (target.norm() - T::one()).abs() > T::lit(1e-6) {
            return Err(Error::Unsupported(format!("depolarizing target {target} is not a unit vector")));
        }
        if p < T::zero() || p > T::one() {
            return Err(Error::Unsupported(format!("depolarizing rate {p} outside [0, 1]")));
        }
        Ok(Self { target, p })
    }

    pub fn bloch(&self) -> BlochVector<T> {
        self.target.scale(T::one() - self.p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IterationStatus {
    Converged,
    EnteredOctahedron,
    MaxIters,
    Dead,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationOutcome<T> {
    pub status: IterationStatus,
    /// Set when `status` is `Converged`.
    pub fixed_point: Option<BlochVector<T>>,
    pub last: BlochVector<T>,
    pub iterations: usize,
    pub trajectory: Option<Vec<(BlochVector<T>, T)>>,
}

impl<T: Scalar> IterationOutcome<T> {
    pub fn converged(&self) -> bool {
        self.status == IterationStatus::Converged
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IterateOptions {
    pub max_iters: usize,
    pub tol: f64,
    /// A point counts as inside the octahedron when `|x|+|y|+|z| < 1 - margin`.
    pub octahedron_margin: f64,
    /// Consecutive inside iterations before giving up.
    pub octahedron_patience: usize,
    pub record_trajectory: bool,
}

impl Default for IterateOptions {
    fn default() -> Self {
        Self { max_iters: 500, tol: 1e-12, octahedron_margin: 1e-6, octahedron_patience: 10, record_trajectory: false }
    }
}

impl IterateOptions {
    pub fn for_scalar<T: Scalar>() -> Self {
        Self { tol: T::ITER_TOL, ..Self::default() }
    }
}

/// Applies the map until the step size drops below `tol`, the trajectory
/// stays inside the octahedron, postselection dies, or `max_iters` is hit.
pub fn iterate<T: Scalar, M: BlochMap<T> + ?Sized>(
    map: &M,
    start: &BlochVector<T>,
    opts: &IterateOptions,
) -> IterationOutcome<T> {
    iterate_inner(map, start, opts, None)
}

fn iterate_inner<T: Scalar, M: BlochMap<T> + ?Sized>(
    map: &M,
    start: &BlochVector<T>,
    opts: &IterateOptions,
    line: Option<&BlochVector<T>>,
) -> IterationOutcome<T> {
    let tol = T::lit(opts.tol);
    let inside = T::one() - T::lit(opts.octahedron_margin);
    let mut r = *start;
    let mut trajectory = opts.record_trajectory.then(Vec::new);
    let mut inside_run = 0usize;
    let done = |status, fixed_point, last, iterations, trajectory| IterationOutcome {
        status,
        fixed_point,
        last,
        iterations,
        trajectory,
    };
    for it in 1..=opts.max_iters {
        let (mut out, p) = match map.step(&r) {
            Evaluation::Success { output, p_success } => (output, p_success),
            Evaluation::NeverSucceeds { p_success } => {
                if let Some(t) = trajectory.as_mut() {
                    t.push((r, p_success));
                }
                return done(IterationStatus::Dead, None, r, it, trajectory);
            }
        };
        if let Some(axis) = line {
            out = axis.scale(out.dot(axis));
        }
        if let Some(t) = trajectory.as_mut() {
            t.push((out, p));
        }
        if out.distance(&r) < tol {
            return done(IterationStatus::Converged, Some(out), out, it, trajectory);
        }
        if out.l1() < inside {
            inside_run += 1;
            if inside_run >= opts.octahedron_patience {
                return done(IterationStatus::EnteredOctahedron, None, out, it, trajectory);
            }
        } else {
            inside_run = 0;
        }
        r = out;
    }
    done(IterationStatus::MaxIters, None, r, opts.max_iters, trajectory)
}

/// Depolarizing rate at which `(1 - p)·m` reaches the octahedron face,
/// `1 - 1/(|x|+|y|+|z|)`, clamped to `[0, 1]`.
pub fn p_oct_for<T: Scalar>(target: &BlochVector<T>) -> Result<T> {
    let l1 = target.l1();
    if l1 <= T::zero() {
        return Err(Error::Unsupported("p_oct of the zero vector".into()));
    }
    let m = target.normalized();
    Ok((T::one() - T::one() / m.l1()).max(T::zero()).min(T::one()))
}

/// Lexicographically largest image under the 24 octahedral rotations.
pub fn canonicalize_bloch<T: Scalar>(r: &BlochVector<T>) -> BlochVector<T> {
    let mut best = *r;
    for rot in CliffordRotation::all() {
        let c = rot.apply(r);
        if lex_greater(&c.to_array(), &best.to_array()) {
            best = c;
        }
    }
    // normalise signed zeros
    BlochVector::new(best.x + T::zero(), best.y + T::zero(), best.z + T::zero())
}

/// Lexicographic comparison that treats components within `1e-9` as equal,
/// so rounding noise cannot decide between images of a symmetric point.
fn lex_greater<T: Scalar>(a: &[T; 3], b: &[T; 3]) -> bool {
    let tie = T::lit(1e-9);
    for (&x, &y) in a.iter().zip(b) {
        if x > y + tie {
            return true;
        }
        if x < y - tie {
            return false;
        }
    }
    false
}

/// Whether `a` and `b` agree within `tol` after canonicalization.
pub fn canonically_close<T: Scalar>(a: &BlochVector<T>, b: &BlochVector<T>, tol: T) -> bool {
    let ca = canonicalize_bloch(a);
    if ca.max_abs_diff(&canonicalize_bloch(b)) <= tol {
        return true;
    }
    // lexicographic ties broken by rounding noise: compare against every image
    CliffordRotation::all().iter().any(|r| r.apply(b).max_abs_diff(a) <= tol)
}

/// Infidelity `(1 - r·m)/2` of Bloch vector `r` to the pure state `m`.
pub fn infidelity<T: Scalar>(r: &BlochVector<T>, target: &BlochVector<T>) -> T {
    (T::one() - r.dot(target)) * T::lit(0.5)
}

/// Whether the map keeps the depolarizing line through `target` invariant.
///
/// Checked at a few rates; when it holds, threshold and yield iterations are
/// projected back onto the line so rounding error cannot push them off a line
/// the exact map never leaves.
pub fn preserves_line<T: Scalar, M: BlochMap<T> + ?Sized>(map: &M, target: &BlochVector<T>) -> bool {
    [0.05, 0.15, 0.25, 0.4].iter().all(|&p| {
        match map.step(&target.scale(T::one() - T::lit(p))).output() {
            Some(out) => (out - target.scale(out.dot(target))).norm() < T::lit(1e-11),
            None => false,
        }
    })
}

/// Iterates from `target` itself and returns the converged point if it stays
/// within `radius`; used to polish a fixed point known to a few digits.
pub fn refine_fixed_point<T: Scalar, M: BlochMap<T> + ?Sized>(
    map: &M,
    approx: &BlochVector<T>,
    radius: T,
) -> Option<BlochVector<T>> {
    let opts = IterateOptions { max_iters: 5000, ..IterateOptions::for_scalar::<T>() };
    let start = approx.normalized();
    let line = preserves_line(map, &start).then_some(start);
    let out = iterate_inner(map, &start, &opts, line.as_ref());
    out.fixed_point.filter(|fp| fp.distance(approx) <= radius)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThresholdOptions {
    /// Bisection stops once the bracket is narrower than this.
    pub tol: f64,
    /// Canonical distance at which an endpoint counts as the target.
    pub match_tol: f64,
    /// Extra room above `p_oct` for the upper bracket.
    pub bracket_margin: f64,
    pub iterate: IterateOptions,
}

impl Default for ThresholdOptions {
    fn default() -> Self {
        Self {
            tol: 1e-7,
            match_tol: 1e-6,
            bracket_margin: 0.05,
            iterate: IterateOptions { max_iters: 5000, ..IterateOptions::default() },
        }
    }
}

fn converges_to<T: Scalar, M: BlochMap<T> + ?Sized>(
    map: &M,
    start: &BlochVector<T>,
    target: &BlochVector<T>,
    line: Option<&BlochVector<T>>,
    opts: &IterateOptions,
    match_tol: T,
) -> bool {
    let out = iterate_inner(map, start, opts, line);
    match out.fixed_point {
        Some(fp) => canonically_close(&fp, target, match_tol),
        None => false,
    }
}

/// Largest depolarizing rate whose input `(1 - p)·target` iterates back to
/// `target`, found by bisection and rounded to 6 decimals. Zero when even
/// `p = 0` fails to converge.
pub fn threshold<T: Scalar, M: BlochMap<T> + ?Sized>(
    map: &M,
    target: &BlochVector<T>,
    opts: &ThresholdOptions,
) -> Result<T> {
    let p_oct = p_oct_for(target)?;
    let m = target.normalized();
    let line = preserves_line(map, &m).then_some(m);
    let it = IterateOptions { tol: opts.iterate.tol.max(T::ITER_TOL), ..opts.iterate };
    let match_tol = T::lit(opts.match_tol);
    let ok = |p: T| converges_to(map, &m.scale(T::one() - p), &m, line.as_ref(), &it, match_tol);
    // a tiny offset so that p = 0 is a genuine test of attraction
    let mut lo = T::lit(1e-6);
    if !ok(lo) {
        return Ok(T::zero());
    }
    let mut hi = (p_oct + T::lit(opts.bracket_margin)).min(T::one());
    if ok(hi) {
        return Ok(round6(hi));
    }
    let tol = T::lit(opts.tol);
    while hi - lo > tol {
        let mid = (lo + hi) * T::lit(0.5);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(round6(lo))
}

fn round6<T: Scalar>(v: T) -> T {
    let s = T::lit(1e6);
    (v * s).round() / s
}

/// Sign pattern of the region a target should attract: components of the
/// target with magnitude above `1e-9` fix a sign, the rest are free.
fn region_signs<T: Scalar>(target: &BlochVector<T>) -> [T; 3] {
    let eps = T::lit(1e-9);
    target.to_array().map(|c| {
        if c > eps {
            T::one()
        } else if c < -eps {
            -T::one()
        } else {
            T::zero()
        }
    })
}

/// Whether `r` lies in the non-stabilizer region attached to `target`:
/// `Σ sᵢ rᵢ > 1` over the signed support of the target. For `(x, 0, z)` with
/// `x, z > 0` this is the quadrant `x + z > 1`; for a T-type target it is
/// the face cone of its octant.
pub fn in_target_region<T: Scalar>(r: &BlochVector<T>, target: &BlochVector<T>) -> bool {
    let s = region_signs(target);
    let a = r.to_array();
    let lin = s[0] * a[0] + s[1] * a[1] + s[2] * a[2];
    lin > T::one() && r.norm() <= T::one()
}

#[derive(Clone, Debug, PartialEq)]
pub struct TightnessResult<T> {
    pub tight: bool,
    pub tested: usize,
    pub first_failure: Option<BlochVector<T>>,
}

/// Where tightness samples are drawn from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TightnessRegion {
    /// Components on which the target vanishes are held at zero, so an
    /// equatorial target is tested on its own quadrant of the great circle
    /// plane and a T-type target on its full octant cone.
    #[default]
    Quadrant,
    /// Full three-dimensional cone `Σ sᵢ rᵢ > 1`, with vanishing components
    /// of the target left free.
    Cone,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TightnessOptions {
    pub samples: usize,
    pub region: TightnessRegion,
    pub seed: u64,
    pub match_tol: f64,
    pub iterate: IterateOptions,
}

impl Default for TightnessOptions {
    fn default() -> Self {
        Self {
            samples: 1000,
            region: TightnessRegion::Quadrant,
            seed: 0x5eed,
            match_tol: 1e-6,
            iterate: IterateOptions { max_iters: 5000, ..IterateOptions::default() },
        }
    }
}

/// Draws `samples` points uniformly from the unit ball restricted to the
/// target's region and checks that every one converges to the target (up to
/// canonical equivalence). Stops at the first failure.
pub fn tightness<T: Scalar, M: BlochMap<T> + ?Sized>(
    map: &M,
    target: &BlochVector<T>,
    opts: &TightnessOptions,
) -> TightnessResult<T> {
    let m = target.normalized();
    let points = sample_region(&m, opts.samples, opts.seed, opts.region);
    if points.len() < opts.samples {
        return TightnessResult { tight: false, tested: 0, first_failure: None };
    }
    let match_tol = T::lit(opts.match_tol);
    let it = IterateOptions { tol: opts.iterate.tol.max(T::ITER_TOL), ..opts.iterate };
    for (k, r) in points.iter().enumerate() {
        if !converges_to(map, r, &m, None, &it, match_tol) {
            return TightnessResult { tight: false, tested: k + 1, first_failure: Some(*r) };
        }
    }
    TightnessResult { tight: true, tested: points.len(), first_failure: None }
}

/// Rejection samples uniformly from the target region. Returns fewer points
/// than asked when the region is (numerically) empty.
pub fn sample_region<T: Scalar>(
    target: &BlochVector<T>,
    samples: usize,
    seed: u64,
    region: TightnessRegion,
) -> Vec<BlochVector<T>> {
    let signs = region_signs(target);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(samples);
    let max_draws = 10_000 * samples.max(1);
    for _ in 0..max_draws {
        if out.len() == samples {
            break;
        }
        let mut c = [0.0f64; 3];
        for (k, v) in c.iter_mut().enumerate() {
            if region == TightnessRegion::Cone || signs[k] != T::zero() {
                *v = rng.gen_range(-1.0..=1.0);
            }
        }
        let v = BlochVector::new(T::lit(c[0]), T::lit(c[1]), T::lit(c[2]));
        if in_target_region(&v, target) {
            out.push(v);
        }
    }
    out
}

/// Least-squares slope of `log ε_out` against `log ε_in` for one round
/// started on the depolarizing line at infidelities `1e-3 … 1e-6`.
pub fn convergence_order<T: Scalar, M: BlochMap<T> + ?Sized>(map: &M, target: &BlochVector<T>) -> Result<T> {
    let m = target.normalized();
    let floor = T::lit(1e-14);
    let mut pts = Vec::new();
    for eps_in in [1e-3, 1e-4, 1e-5, 1e-6] {
        let e = T::lit(eps_in);
        let r = m.scale(T::one() - e - e);
        if let Some(out) = map.step(&r).output() {
            let eps_out = infidelity(&out, &m);
            if eps_out > floor {
                pts.push((e.ln(), eps_out.ln()));
            }
        }
    }
    if pts.len() < 2 {
        return Err(Error::NotDistillable("too few usable samples for the suppression order".into()));
    }
    let k = T::from_usize(pts.len()).expect("small count");
    let mx = pts.iter().fold(T::zero(), |a, p| a + p.0) / k;
    let my = pts.iter().fold(T::zero(), |a, p| a + p.1) / k;
    let sxy = pts.iter().fold(T::zero(), |a, p| a + (p.0 - mx) * (p.1 - my));
    let sxx = pts.iter().fold(T::zero(), |a, p| a + (p.0 - mx) * (p.0 - mx));
    Ok(sxy / sxx)
}

#[derive(Clone, Debug, PartialEq)]
pub struct YieldResult<T> {
    pub value: T,
    /// `Σ log(p_s/n)`, computed independently of `value`.
    pub log_value: T,
    pub rounds: usize,
    pub success_probabilities: Vec<T>,
}

/// `Y = ∏_k p_s^(k) / n` over the rounds needed to bring `(1 - p)·target`
/// to infidelity at most `target_eps`.
pub fn yield_of<T: Scalar, M: BlochMap<T> + ?Sized>(
    map: &M,
    target: &BlochVector<T>,
    p: T,
    target_eps: T,
) -> Result<YieldResult<T>> {
    const MAX_ROUNDS: usize = 100_000;
    let m = target.normalized();
    let line = preserves_line(map, &m).then_some(m);
    let n = T::from_usize(map.n()).expect("small count");
    let mut r = DepolarizedInput::new(m, p)?.bloch();
    let mut probs = Vec::new();
    let mut best = infidelity(&r, &m);
    let mut stalled = 0usize;
    while infidelity(&r, &m) > target_eps {
        if probs.len() >= MAX_ROUNDS {
            return Err(Error::NotDistillable(format!("p = {p}: no convergence after {MAX_ROUNDS} rounds")));
        }
        let (mut out, ps) = match map.step(&r) {
            Evaluation::Success { output, p_success } => (output, p_success),
            Evaluation::NeverSucceeds { .. } => {
                return Err(Error::NotDistillable(format!("p = {p}: postselection never succeeds")))
            }
        };
        if let Some(axis) = line.as_ref() {
            out = axis.scale(out.dot(axis));
        }
        probs.push(ps);
        r = out;
        let eps = infidelity(&r, &m);
        if eps < best {
            best = eps;
            stalled = 0;
        } else {
            stalled += 1;
            if stalled > 50 || r.l1() < T::one() {
                return Err(Error::NotDistillable(format!("p = {p}: iteration moves away from the target")));
            }
        }
    }
    let value = probs.iter().fold(T::one(), |acc, &ps| acc * ps / n);
    let log_value = probs.iter().fold(T::zero(), |acc, &ps| acc + (ps / n).ln());
    Ok(YieldResult { value, log_value, rounds: probs.len(), success_probabilities: probs })
}

/// Analysis record of one code at one fixed point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CodeReport<T> {
    pub fixed_point: [T; 3],
    pub canonical_fixed_point: [T; 3],
    pub threshold: T,
    pub p_oct: T,
    pub tight: bool,
    /// `false` when tightness sampling was pruned because the threshold is
    /// already too far below `p_oct`.
    pub tightness_sampled: bool,
    pub convergence_order: T,
    pub p_success_at_fixed_point: T,
    pub correction_used: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalysisOptions {
    pub threshold: ThresholdOptions,
    pub tightness: TightnessOptions,
    /// Largest `|threshold - p_oct|` compatible with a tight verdict.
    pub tight_tolerance: f64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self { threshold: ThresholdOptions::default(), tightness: TightnessOptions::default(), tight_tolerance: 1e-3 }
    }
}

/// Threshold, tightness and order of `map` at `fixed_point`.
pub fn analyze<T: Scalar, M: BlochMap<T> + ?Sized>(
    map: &M,
    fixed_point: &BlochVector<T>,
    correction: Option<CliffordRotation>,
    opts: &AnalysisOptions,
) -> Result<CodeReport<T>> {
    let fp = *fixed_point;
    let p_oct = p_oct_for(&fp)?;
    let thr = threshold(map, &fp, &opts.threshold)?;
    let close = (thr - p_oct).abs() <= T::lit(opts.tight_tolerance);
    let (tight, sampled) = if close && p_oct > T::zero() {
        (tightness(map, &fp, &opts.tightness).tight, true)
    } else {
        (false, false)
    };
    let order = convergence_order(map, &fp).unwrap_or_else(|_| T::nan());
    let ps = map.step(&fp).p_success();
    Ok(CodeReport {
        fixed_point: fp.to_array(),
        canonical_fixed_point: canonicalize_bloch(&fp).to_array(),
        threshold: thr,
        p_oct,
        tight,
        tightness_sampled: sampled,
        convergence_order: order,
        p_success_at_fixed_point: ps,
        correction_used: correction.filter(|c| !c.is_identity()).map(|c| c.label()),
    })
}
