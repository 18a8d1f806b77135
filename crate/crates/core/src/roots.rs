//! Roots of the characteristic family.
//!
//! The positive root `alpha_{k,h}` of `g_{k,h}` lies in `(1, 2)` and `g`
//! changes sign exactly once on the positive axis, so it is isolated by
//! bisection on that interval and then refined by safeguarded Newton.
//! The remaining roots come from Aberth's simultaneous iteration started on
//! a circle just inside the Cauchy bound, which for `g_{k,h}` is `alpha`
//! itself.

use std::cmp::Ordering;

use rug::float::Constant;
use rug::{Complex, Float};
use serde::{Deserialize, Serialize};

use crate::charpoly::{build_g, build_p, IntPolynomial};
use crate::error::{Error, Result};
use crate::numeric::{abs, pow2};
use crate::sequences::SequenceParams;

/// Smallest and largest accepted `precision_bits`.
pub const MIN_PRECISION_BITS: u32 = 24;
pub const MAX_PRECISION_BITS: u32 = 1 << 16;

/// Tuning knobs for the root finders.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RootConfig {
    /// A Newton/Aberth step below `2^(-precision_bits + step_slack_bits)`
    /// accepts the iterate.
    pub step_slack_bits: u32,
    /// Iteration cap is `cap_per_order * (k + h)`.
    pub cap_per_order: u32,
    /// Initial Aberth circle has radius `alpha * (1 - 2^-circle_shrink_bits)`.
    pub circle_shrink_bits: u32,
    /// Extra bits carried internally above the requested precision.
    pub guard_bits: u32,
}

impl Default for RootConfig {
    fn default() -> Self {
        RootConfig {
            step_slack_bits: 4,
            cap_per_order: 64,
            circle_shrink_bits: 8,
            guard_bits: 32,
        }
    }
}

pub(crate) fn check_precision(precision_bits: u32) -> Result<()> {
    if !(MIN_PRECISION_BITS..=MAX_PRECISION_BITS).contains(&precision_bits) {
        return Err(Error::InvalidParameter(format!(
            "precision_bits must lie in [{MIN_PRECISION_BITS}, {MAX_PRECISION_BITS}], got {precision_bits}"
        )));
    }
    Ok(())
}

/// A positive real root with a sign-change bracket.
#[derive(Debug, Clone, PartialEq)]
pub struct RealRoot {
    pub value: Float,
    pub lo: Float,
    pub hi: Float,
    /// `|f(value)|`.
    pub residual: Float,
    pub precision_bits: u32,
}

impl RealRoot {
    fn exact(value: u32, precision_bits: u32) -> Self {
        let v = Float::with_val(precision_bits, value);
        RealRoot {
            lo: v.clone(),
            hi: v.clone(),
            value: v,
            residual: Float::with_val(precision_bits, 0),
            precision_bits,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    /// `Less` or `Greater` only when the brackets are disjoint; `Equal`
    /// when both roots are exact and equal; `None` otherwise.
    pub fn certified_cmp(&self, other: &RealRoot) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else if self.is_exact() && other.is_exact() && self.value == other.value {
            Some(Ordering::Equal)
        } else {
            None
        }
    }
}

/// Root of `f` in `(lo, hi]` given `f(lo) < 0 <= f(hi)`.
pub fn bracketed_root(
    f: &IntPolynomial,
    lo: u32,
    hi: u32,
    precision_bits: u32,
    config: &RootConfig,
) -> Result<RealRoot> {
    check_precision(precision_bits)?;
    let wp = precision_bits + config.guard_bits;
    let mut lo = Float::with_val(wp, lo);
    let mut hi = Float::with_val(wp, hi);
    let f_lo = f.eval(&lo);
    let f_hi = f.eval(&hi);
    if f_lo >= 0 || f_hi < 0 {
        return Err(Error::InvalidParameter(format!(
            "{f} has no sign change on [{}, {}]",
            lo.to_f64(),
            hi.to_f64()
        )));
    }
    if f_hi == 0 {
        return Ok(RealRoot::exact(hi.to_u32_saturating().unwrap_or(0), precision_bits));
    }

    // coarse isolation: 2^-20 is well inside Newton's basin for a simple root
    for _ in 0..20 {
        let mid = Float::with_val(wp, &lo + &hi) / 2u32;
        if f.eval(&mid) < 0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }

    let tol = pow2(wp, config.step_slack_bits as i32 - precision_bits as i32);
    let cap = config.cap_per_order as usize * f.coeffs().len().max(2);
    let mut x = Float::with_val(wp, &lo + &hi) / 2u32;
    let mut converged = false;
    for _ in 0..cap {
        let (value, slope) = f.eval_with_derivative(&x);
        if value == 0 {
            converged = true;
            break;
        }
        if value < 0 {
            lo.clone_from(&x);
        } else {
            hi.clone_from(&x);
        }
        let step = Float::with_val(wp, &value / &slope);
        let mut next = Float::with_val(wp, &x - &step);
        if Float::with_val(wp, step.abs_ref()) < tol {
            x = next;
            converged = true;
            break;
        }
        if !(next > lo && next < hi) || slope == 0 {
            next = Float::with_val(wp, &lo + &hi) / 2u32;
        }
        x = next;
    }
    if !converged {
        return Err(Error::ConvergenceFailure(format!(
            "Newton iteration on {f} exceeded {cap} steps"
        )));
    }

    let value = Float::with_val(precision_bits, &x);
    let (bracket_lo, bracket_hi) = certify_bracket(f, &value, &lo, &hi, precision_bits)?;
    let residual = Float::with_val(precision_bits, f.eval(&Float::with_val(wp, &value)).abs());
    Ok(RealRoot {
        value,
        lo: bracket_lo,
        hi: bracket_hi,
        residual,
        precision_bits,
    })
}

/// Narrow sign-change bracket around `value`, representable at
/// `precision_bits`.
fn certify_bracket(
    f: &IntPolynomial,
    value: &Float,
    outer_lo: &Float,
    outer_hi: &Float,
    precision_bits: u32,
) -> Result<(Float, Float)> {
    let mut width = pow2(precision_bits, 8 - precision_bits as i32);
    for _ in 0..precision_bits {
        let lo = Float::with_val(precision_bits, value - &width);
        let hi = Float::with_val(precision_bits, value + &width);
        if f.eval(&lo) < 0 && f.eval(&hi) > 0 {
            return Ok((lo, hi));
        }
        width *= 2u32;
    }
    let lo = Float::with_val(precision_bits, outer_lo);
    let hi = Float::with_val(precision_bits, outer_hi);
    if f.eval(&lo) < 0 && f.eval(&hi) > 0 {
        return Ok((lo, hi));
    }
    Err(Error::ConvergenceFailure(format!(
        "could not certify a sign change of {f} around {}",
        value.to_f64()
    )))
}

/// `alpha_{k,h}`, the unique positive root of `g_{k,h}`.
pub fn dominant_root(params: SequenceParams, precision_bits: u32) -> Result<RealRoot> {
    dominant_root_with(params, precision_bits, &RootConfig::default())
}

pub fn dominant_root_with(params: SequenceParams, precision_bits: u32, config: &RootConfig) -> Result<RealRoot> {
    check_precision(precision_bits)?;
    if params.k() == 1 {
        // g_{1,h} = x^h - 1
        return Ok(RealRoot::exact(1, precision_bits));
    }
    bracketed_root(&build_g(params), 1, 2, precision_bits, config)
}

/// `alpha_h = lim_{k -> inf} alpha_{k,h}`, the positive root of `p_h`.
pub fn row_limit(h: u32, precision_bits: u32) -> Result<RealRoot> {
    bracketed_root(&build_p(h)?, 1, 2, precision_bits, &RootConfig::default())
}

/// Position of a point relative to `alpha_{k,h}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootPosition {
    Below,
    Root,
    Above,
}

/// Places `y >= 0` against `alpha_{k,h}` from the sign of `g_{k,h}(y)`
/// alone. Values within `2^(-p+8) * max(1, |g'(y)|)` of zero, `p` being
/// the precision of `y`, count as the root.
pub fn sign_test(params: SequenceParams, y: &Float) -> Result<RootPosition> {
    if y.is_sign_negative() && !y.is_zero() || y.is_nan() {
        return Err(Error::InvalidParameter("sign test needs y >= 0".into()));
    }
    let (value, slope) = build_g(params).eval_with_derivative(y);
    let prec = y.prec();
    let band = pow2(prec, 8 - prec as i32) * Float::with_val(prec, slope.abs()).max(&Float::with_val(prec, 1));
    if Float::with_val(prec, value.abs_ref()) <= band {
        Ok(RootPosition::Root)
    } else if value > 0 {
        Ok(RootPosition::Above)
    } else {
        Ok(RootPosition::Below)
    }
}

/// All roots of `g_{k,h}` with the dominant root first.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexRootSet {
    pub params: SequenceParams,
    pub roots: Vec<Complex>,
    pub precision_bits: u32,
    /// Largest `|g(r_i)|`.
    pub max_residual: Float,
}

impl ComplexRootSet {
    pub fn dominant(&self) -> &Complex {
        &self.roots[0]
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    /// `alpha - max_{i >= 1} |r_i|`.
    pub fn dominance_margin(&self) -> Float {
        let alpha = self.roots[0].real().clone();
        let largest = self.roots[1..]
            .iter()
            .map(abs)
            .fold(Float::with_val(self.precision_bits, 0), |a, b| a.max(&b));
        alpha - largest
    }

    pub fn min_pairwise_distance(&self) -> Float {
        let mut best = Float::with_val(self.precision_bits, rug::float::Special::Infinity);
        for (i, a) in self.roots.iter().enumerate() {
            for b in &self.roots[i + 1..] {
                let d = abs(&Complex::with_val(self.precision_bits, a - b));
                if d < best {
                    best = d;
                }
            }
        }
        best
    }

    /// Index of the root paired with `roots[i]` under conjugation.
    pub fn conjugate_of(&self, i: usize) -> Option<usize> {
        let target = Complex::with_val(self.precision_bits, self.roots[i].conj_ref());
        self.roots.iter().position(|z| *z == target)
    }

    pub fn is_real(&self, i: usize) -> bool {
        self.roots[i].imag().is_zero()
    }

    /// Coefficients of `prod (x - r_i)` over `roots[from..]`, constant term
    /// first.
    pub fn expand_product(&self, from: usize) -> Vec<Complex> {
        expand_monic(&self.roots[from..], self.precision_bits)
    }
}

pub(crate) fn expand_monic(roots: &[Complex], prec: u32) -> Vec<Complex> {
    let mut coeffs = vec![Complex::with_val(prec, 1)];
    for r in roots {
        let mut next = vec![Complex::with_val(prec, 0); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= Complex::with_val(prec, c * r);
        }
        coeffs = next;
    }
    coeffs
}

/// The complete spectrum of `g_{k,h}`; requires `k >= 2`.
pub fn all_roots(params: SequenceParams, precision_bits: u32) -> Result<ComplexRootSet> {
    all_roots_with(params, precision_bits, &RootConfig::default())
}

pub fn all_roots_with(params: SequenceParams, precision_bits: u32, config: &RootConfig) -> Result<ComplexRootSet> {
    check_precision(precision_bits)?;
    if params.k() < 2 {
        return Err(Error::Unsupported(
            "k=1: every root of x^h - 1 has modulus 1, so no root dominates".into(),
        ));
    }
    let wp = precision_bits + config.guard_bits;
    let g = build_g(params);
    let degree = params.order();
    let alpha = dominant_root_with(params, wp, config)?.value;

    let mut z = initial_circle(&alpha, degree, wp, config);
    let tol = pow2(wp, config.step_slack_bits as i32 - precision_bits as i32);
    let cap = config.cap_per_order as usize * (params.k() + params.h()) as usize;
    let mut converged = false;
    for _ in 0..cap {
        if aberth_sweep(&g, &mut z, wp) < tol {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::ConvergenceFailure(format!(
            "Aberth iteration for g_{{{},{}}} exceeded {cap} sweeps",
            params.k(),
            params.h()
        )));
    }

    // pin the dominant root to the certified real value
    let pinned = z
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            let da = abs(&Complex::with_val(wp, *a - &alpha));
            let db = abs(&Complex::with_val(wp, *b - &alpha));
            da.partial_cmp(&db).unwrap_or(Ordering::Equal)
        })
        .map(|(i, _)| i)
        .unwrap();
    z.swap(0, pinned);
    z[0] = Complex::with_val(wp, (&alpha, 0));
    for root in z[1..].iter_mut() {
        newton_polish(&g, root, &tol, 8);
    }
    symmetrize(&mut z[1..], precision_bits)?;
    let mut rest: Vec<Complex> = z.drain(1..).collect();
    rest.sort_by(root_order);
    z.extend(rest);

    let roots: Vec<Complex> = z.into_iter().map(|r| Complex::with_val(precision_bits, r)).collect();
    let set = certify_spectrum(params, &g, roots, precision_bits)?;
    Ok(set)
}

fn initial_circle(alpha: &Float, degree: usize, wp: u32, config: &RootConfig) -> Vec<Complex> {
    let shrink = Float::with_val(wp, 1) - pow2(wp, -(config.circle_shrink_bits as i32));
    let radius = Float::with_val(wp, alpha * &shrink);
    let two_pi = Float::with_val(wp, Constant::Pi) * 2u32;
    // phase offset: golden-ratio fraction of one angular step
    let golden = (Float::with_val(wp, 5).sqrt() - 1u32) / 2u32;
    (0..degree)
        .map(|j| {
            let turn = (Float::with_val(wp, j) + &golden) / degree as u32;
            let angle = Float::with_val(wp, &two_pi * &turn);
            let (sin, cos) = angle.sin_cos(Float::new(wp));
            Complex::with_val(
                wp,
                (Float::with_val(wp, &radius * &cos), Float::with_val(wp, &radius * &sin)),
            )
        })
        .collect()
}

/// One Gauss-Seidel Aberth sweep; returns the largest correction.
fn aberth_sweep(g: &IntPolynomial, z: &mut [Complex], wp: u32) -> Float {
    let mut largest = Float::with_val(wp, 0);
    for i in 0..z.len() {
        let (value, slope) = g.eval_complex_with_derivative(&z[i]);
        if value.real().is_zero() && value.imag().is_zero() {
            continue;
        }
        let newton = Complex::with_val(wp, &value / &slope);
        let mut repulsion = Complex::with_val(wp, 0);
        for (j, other) in z.iter().enumerate() {
            if j != i {
                let diff = Complex::with_val(wp, &z[i] - other);
                repulsion += diff.recip();
            }
        }
        let denom = Complex::with_val(wp, 1) - Complex::with_val(wp, &newton * &repulsion);
        let step = newton / denom;
        let size = abs(&step);
        if !size.is_finite() {
            return Float::with_val(wp, rug::float::Special::Infinity);
        }
        z[i] -= step;
        if size > largest {
            largest = size;
        }
    }
    largest
}

fn newton_polish(g: &IntPolynomial, z: &mut Complex, tol: &Float, max_steps: usize) {
    let wp = z.prec().0;
    for _ in 0..max_steps {
        let (value, slope) = g.eval_complex_with_derivative(z);
        if slope.real().is_zero() && slope.imag().is_zero() {
            return;
        }
        let step = Complex::with_val(wp, &value / &slope);
        *z -= &step;
        if abs(&step) < *tol {
            return;
        }
    }
}

/// Forces exact conjugate symmetry: near-real roots become real, the rest
/// are matched with their mirror images and averaged.
fn symmetrize(z: &mut [Complex], precision_bits: u32) -> Result<()> {
    let wp = z.first().map(|c| c.prec().0).unwrap_or(precision_bits);
    let real_band = pow2(wp, -(precision_bits as i32) / 2);
    let mut paired = vec![false; z.len()];
    for i in 0..z.len() {
        if Float::with_val(wp, z[i].imag().abs_ref()) <= real_band {
            *z[i].mut_imag() = Float::with_val(wp, 0);
            paired[i] = true;
        }
    }
    for i in 0..z.len() {
        if paired[i] || z[i].imag().is_sign_negative() {
            continue;
        }
        let mirror = Complex::with_val(wp, z[i].conj_ref());
        let partner = (0..z.len())
            .filter(|&j| !paired[j] && j != i && z[j].imag().is_sign_negative())
            .min_by(|&a, &b| {
                let da = abs(&Complex::with_val(wp, &z[a] - &mirror));
                let db = abs(&Complex::with_val(wp, &z[b] - &mirror));
                da.partial_cmp(&db).unwrap_or(Ordering::Equal)
            })
            .ok_or_else(|| Error::ConvergenceFailure("unpaired complex root".into()))?;
        let mirrored = Complex::with_val(wp, z[partner].conj_ref());
        let mean = Complex::with_val(wp, &z[i] + &mirrored) / 2u32;
        z[partner] = Complex::with_val(wp, mean.conj_ref());
        z[i] = mean;
        paired[i] = true;
        paired[partner] = true;
    }
    if paired.iter().all(|&p| p) {
        Ok(())
    } else {
        Err(Error::ConvergenceFailure("unpaired complex root".into()))
    }
}

/// Descending modulus, then descending real part, upper half-plane first.
fn root_order(a: &Complex, b: &Complex) -> Ordering {
    abs(b)
        .partial_cmp(&abs(a))
        .unwrap_or(Ordering::Equal)
        .then_with(|| b.real().partial_cmp(a.real()).unwrap_or(Ordering::Equal))
        .then_with(|| b.imag().partial_cmp(a.imag()).unwrap_or(Ordering::Equal))
}

fn certify_spectrum(
    params: SequenceParams,
    g: &IntPolynomial,
    roots: Vec<Complex>,
    precision_bits: u32,
) -> Result<ComplexRootSet> {
    let check_prec = precision_bits * 2;
    let half = pow2(check_prec, -(precision_bits as i32) / 2);
    let mut max_residual = Float::with_val(precision_bits, 0);
    for r in &roots {
        let (value, slope) = g.eval_complex_with_derivative(&Complex::with_val(check_prec, r));
        let residual = abs(&value);
        if residual > Float::with_val(check_prec, &half * &abs(&slope)) {
            return Err(Error::ConvergenceFailure(format!(
                "residual {} too large at root {}",
                residual.to_f64(),
                r
            )));
        }
        if residual > max_residual {
            max_residual = Float::with_val(precision_bits, &residual);
        }
    }
    let set = ComplexRootSet {
        params,
        roots,
        precision_bits,
        max_residual,
    };
    let margin = pow2(precision_bits, -(precision_bits as i32) / 4);
    if set.dominance_margin() <= margin {
        return Err(Error::ConvergenceFailure(format!(
            "dominance margin {} below 2^-{}",
            set.dominance_margin().to_f64(),
            precision_bits / 4
        )));
    }
    if set.min_pairwise_distance() <= margin {
        return Err(Error::ConvergenceFailure(format!(
            "two roots closer than 2^-{}",
            precision_bits / 4
        )));
    }
    Ok(set)
}

/// Strict-ordering flags for one grid cell against its neighbours; edges
/// with no neighbour are vacuously true.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellFlags {
    /// `alpha_{k,h} < alpha_{k+1,h}`.
    pub increasing_in_k: bool,
    /// `alpha_{k,h} > alpha_{k,h+1}` for `k >= 2`, equality for `k = 1`.
    pub decreasing_in_h: bool,
}

/// Table of `alpha_{k,h}` for `1 <= k <= kmax`, `1 <= h <= hmax`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaGrid {
    pub kmax: u32,
    pub hmax: u32,
    /// `alpha[k-1][h-1]`.
    pub alpha: Vec<Vec<RealRoot>>,
    /// `alpha_h` for `h = 1..=hmax`.
    pub row_limits: Vec<RealRoot>,
    pub flags: Vec<Vec<CellFlags>>,
}

impl AlphaGrid {
    pub fn get(&self, k: u32, h: u32) -> &RealRoot {
        &self.alpha[(k - 1) as usize][(h - 1) as usize]
    }

    pub fn all_flags_true(&self) -> bool {
        self.flags
            .iter()
            .flatten()
            .all(|f| f.increasing_in_k && f.decreasing_in_h)
    }
}

pub fn alpha_grid(kmax: u32, hmax: u32, precision_bits: u32) -> Result<AlphaGrid> {
    if kmax == 0 || hmax == 0 {
        return Err(Error::InvalidParameter("kmax and hmax must be at least 1".into()));
    }
    check_precision(precision_bits)?;
    let alpha = std::thread::scope(|scope| {
        let rows: Vec<_> = (1..=kmax)
            .map(|k| {
                scope.spawn(move || {
                    (1..=hmax)
                        .map(|h| dominant_root(SequenceParams::new(k, h)?, precision_bits))
                        .collect::<Result<Vec<_>>>()
                })
            })
            .collect();
        rows.into_iter()
            .map(|r| r.join().expect("grid worker panicked"))
            .collect::<Result<Vec<_>>>()
    })?;
    let row_limits = (1..=hmax)
        .map(|h| row_limit(h, precision_bits))
        .collect::<Result<Vec<_>>>()?;

    let mut flags = Vec::with_capacity(kmax as usize);
    for k in 0..kmax as usize {
        let mut row = Vec::with_capacity(hmax as usize);
        for h in 0..hmax as usize {
            let here = &alpha[k][h];
            let increasing_in_k = match alpha.get(k + 1) {
                Some(next) => here.certified_cmp(&next[h]) == Some(Ordering::Less),
                None => true,
            };
            let decreasing_in_h = match alpha[k].get(h + 1) {
                Some(next) if k == 0 => here.certified_cmp(next) == Some(Ordering::Equal),
                Some(next) => here.certified_cmp(next) == Some(Ordering::Greater),
                None => true,
            };
            row.push(CellFlags {
                increasing_in_k,
                decreasing_in_h,
            });
        }
        flags.push(row);
    }
    Ok(AlphaGrid {
        kmax,
        hmax,
        alpha,
        row_limits,
        flags,
    })
}

/// `|alpha_{k,h} - alpha_h|` along one row.
#[derive(Debug, Clone, PartialEq)]
pub struct RowLimitCheck {
    pub h: u32,
    pub limit: Float,
    /// Gap for `k = 1..=kmax`.
    pub gaps: Vec<Float>,
    pub strictly_decreasing: bool,
    pub below_target: bool,
}

/// `alpha_{k,h} - 1` down one column.
#[derive(Debug, Clone, PartialEq)]
pub struct ColumnLimitCheck {
    pub k: u32,
    /// Gap for `h = 1..=hmax`.
    pub gaps: Vec<Float>,
    /// Strict decrease for `k >= 2`; all gaps exactly zero for `k = 1`.
    pub strictly_decreasing: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitReport {
    pub kmax: u32,
    pub hmax: u32,
    pub precision_bits: u32,
    pub target_gap: Float,
    pub rows: Vec<RowLimitCheck>,
    pub columns: Vec<ColumnLimitCheck>,
}

impl LimitReport {
    /// Every row and column gap sequence is strictly monotone.
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.strictly_decreasing) && self.columns.iter().all(|c| c.strictly_decreasing)
    }

    /// Every row gap at `kmax` is below the target.
    pub fn targets_met(&self) -> bool {
        self.rows.iter().all(|r| r.below_target)
    }
}

/// Gap to the last row entry that should fall under `target_gap`.
pub const DEFAULT_TARGET_GAP: f64 = 0.05;

/// Checks the two limits of `alpha_{k,h}`: towards `alpha_h` as `k` grows
/// and towards 1 as `h` grows. Violations are reported, not raised.
pub fn limit_checks(kmax: u32, hmax: u32, precision_bits: u32, target_gap: f64) -> Result<LimitReport> {
    let grid = alpha_grid(kmax, hmax, precision_bits)?;
    Ok(limit_report_from_grid(&grid, precision_bits, target_gap))
}

pub fn limit_report_from_grid(grid: &AlphaGrid, precision_bits: u32, target_gap: f64) -> LimitReport {
    let target = Float::with_val(precision_bits, target_gap);
    let rows = (1..=grid.hmax)
        .map(|h| {
            let limit = grid.row_limits[(h - 1) as usize].value.clone();
            let gaps: Vec<Float> = (1..=grid.kmax)
                .map(|k| Float::with_val(precision_bits, &limit - &grid.get(k, h).value).abs())
                .collect();
            let strictly_decreasing = gaps.windows(2).all(|w| w[1] < w[0]);
            let below_target = gaps.last().is_some_and(|g| *g < target);
            RowLimitCheck {
                h,
                limit,
                gaps,
                strictly_decreasing,
                below_target,
            }
        })
        .collect();
    let columns = (1..=grid.kmax)
        .map(|k| {
            let gaps: Vec<Float> = (1..=grid.hmax)
                .map(|h| Float::with_val(precision_bits, &grid.get(k, h).value - 1u32))
                .collect();
            let strictly_decreasing = if k == 1 {
                gaps.iter().all(|g| g.is_zero())
            } else {
                gaps.windows(2).all(|w| w[1] < w[0])
            };
            ColumnLimitCheck {
                k,
                gaps,
                strictly_decreasing,
            }
        })
        .collect();
    LimitReport {
        kmax: grid.kmax,
        hmax: grid.hmax,
        precision_bits,
        target_gap: target,
        rows,
        columns,
    }
}

/// Rounds each coefficient of `prod (x - r_i)` to the nearest integer.
/// Returns `None` if some coefficient is not within 1/2 of an integer.
pub fn reconstruct_integer_polynomial(set: &ComplexRootSet) -> Option<IntPolynomial> {
    let half = Float::with_val(set.precision_bits, 0.5);
    let mut coeffs = Vec::new();
    for c in set.expand_product(0) {
        let nearest = Float::with_val(set.precision_bits, c.real().round_ref());
        let off = Float::with_val(set.precision_bits, c.real() - &nearest).abs()
            + Float::with_val(set.precision_bits, c.imag().abs_ref());
        if off >= half {
            return None;
        }
        coeffs.push(nearest.to_integer().unwrap_or_default());
    }
    Some(IntPolynomial::new(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(k: u32, h: u32) -> SequenceParams {
        SequenceParams::new(k, h).unwrap()
    }

    fn close(x: &Float, expected: f64, tol: f64) -> bool {
        (x.to_f64() - expected).abs() < tol
    }

    /// Plain bisection on (1, 2) in f64, independent of the Newton path.
    fn bisect_oracle(k: u32, h: u32) -> f64 {
        let g = |x: f64| x.powi((k + h - 1) as i32) - (0..k).map(|i| x.powi(i as i32)).sum::<f64>();
        let (mut lo, mut hi) = (1.0f64, 2.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn dominant_root_examples() {
        let phi = dominant_root(params(2, 1), 128).unwrap();
        assert!(close(&phi.value, 1.618_033_988_749_895, 1e-15));
        let golden = (Float::with_val(256, 5).sqrt() + 1u32) / 2u32;
        assert!(Float::with_val(256, &phi.value - &golden).abs() < pow2(256, -120));

        let plastic = dominant_root(params(2, 2), 128).unwrap();
        assert!(close(&plastic.value, 1.324_717_957_244_746, 1e-15));
        assert!(close(&plastic.value, bisect_oracle(2, 2), 1e-14));

        let one = dominant_root(params(1, 5), 128).unwrap();
        assert_eq!(one.value, 1);
        assert!(one.is_exact());
        assert_eq!(one.residual, 0);

        let r32 = dominant_root(params(3, 2), 128).unwrap();
        assert!(close(&r32.value, 1.465_571_231_876_768, 1e-15));
    }

    #[test]
    fn bracket_and_residual_certificates() {
        for k in 2..=12 {
            for h in 1..=12 {
                let g = build_g(params(k, h));
                let root = dominant_root(params(k, h), 128).unwrap();
                assert!(root.lo > 1 && root.hi < 2);
                assert!(root.lo <= root.value && root.value <= root.hi);
                assert!(g.eval(&root.lo) < 0 && g.eval(&root.hi) > 0);
                let (_, slope) = g.eval_with_derivative(&root.value);
                assert!(root.residual <= pow2(128, -64) * slope.abs(), "k={k} h={h}");
                assert!(close(&root.value, bisect_oracle(k, h), 1e-13));
            }
        }
    }

    #[test]
    fn precision_limits() {
        assert!(dominant_root(params(2, 1), 8).is_err());
        assert!(dominant_root(params(2, 1), MIN_PRECISION_BITS).is_ok());
        assert!(dominant_root(params(2, 1), 1024).is_ok());
    }

    #[test]
    fn cauchy_companion_shares_root() {
        use crate::charpoly::cauchy_companion;
        for k in 2..=8 {
            for h in 1..=8 {
                let g = build_g(params(k, h));
                let bound = bracketed_root(&cauchy_companion(&g).unwrap(), 1, 2, 128, &RootConfig::default()).unwrap();
                let alpha = dominant_root(params(k, h), 128).unwrap();
                assert!(Float::with_val(128, &bound.value - &alpha.value).abs() < pow2(128, -120));
            }
        }
    }

    #[test]
    fn sign_test_examples() {
        let p = params(3, 2);
        assert_eq!(sign_test(p, &Float::with_val(64, 2)).unwrap(), RootPosition::Above);
        assert_eq!(sign_test(p, &Float::with_val(64, 1)).unwrap(), RootPosition::Below);
        assert_eq!(sign_test(p, &Float::with_val(64, 0)).unwrap(), RootPosition::Below);
        let phi = dominant_root(params(2, 1), 128).unwrap().value;
        assert_eq!(sign_test(params(2, 1), &phi).unwrap(), RootPosition::Root);
        assert!(sign_test(p, &Float::with_val(64, -0.5)).is_err());
        assert_eq!(
            sign_test(params(1, 3), &Float::with_val(64, 1)).unwrap(),
            RootPosition::Root
        );
    }

    proptest! {
        #[test]
        fn sign_test_agrees_with_root(y in 0.0f64..3.0, k in 1u32..8, h in 1u32..8) {
            let p = params(k, h);
            let alpha = dominant_root(p, 128).unwrap().value.to_f64();
            prop_assume!((y - alpha).abs() > 1e-9);
            let expected = if y > alpha { RootPosition::Above } else { RootPosition::Below };
            prop_assert_eq!(sign_test(p, &Float::with_val(128, y)).unwrap(), expected);
        }
    }

    #[test]
    fn fibonacci_spectrum() {
        let set = all_roots(params(2, 1), 128).unwrap();
        assert_eq!(set.len(), 2);
        let sqrt5 = Float::with_val(256, 5).sqrt();
        let r1 = (Float::with_val(256, 1) + &sqrt5) / 2u32;
        let r2 = (Float::with_val(256, 1) - &sqrt5) / 2u32;
        assert!(Float::with_val(256, set.roots[0].real() - &r1).abs() < pow2(256, -120));
        assert!(Float::with_val(256, set.roots[1].real() - &r2).abs() < pow2(256, -120));
        assert!(set.is_real(0) && set.is_real(1));
    }

    #[test]
    fn plastic_spectrum() {
        let set = all_roots(params(2, 2), 128).unwrap();
        assert_eq!(set.len(), 3);
        let alpha = set.roots[0].real().clone();
        // the conjugate pair has modulus 1/sqrt(alpha) since r1 r2 r3 = 1
        let expected = Float::with_val(128, alpha.recip_ref()).sqrt();
        for i in 1..3 {
            assert!(!set.is_real(i));
            assert!(Float::with_val(128, abs(&set.roots[i]) - &expected).abs() < pow2(128, -100));
            assert_eq!(set.conjugate_of(i), Some(3 - i));
        }
        assert!(close(&expected, 0.868_836_961_832_3, 1e-12));
        assert!(set.roots[1].imag().is_sign_positive());
    }

    #[test]
    fn spectrum_certificates() {
        for k in 2..=10 {
            for h in 1..=10 {
                let p = params(k, h);
                let set = all_roots(p, 128).unwrap();
                assert_eq!(set.len(), p.order());
                let margin = pow2(128, -32);
                assert!(set.dominance_margin() > margin, "k={k} h={h}");
                assert!(set.min_pairwise_distance() > margin);
                for i in 0..set.len() {
                    let j = set.conjugate_of(i).expect("conjugate present");
                    assert_eq!(set.is_real(i), i == j);
                }
                assert_eq!(reconstruct_integer_polynomial(&set), Some(build_g(p)), "k={k} h={h}");
                // Vieta: product of roots = (-1)^(k+h-1) * (-1)
                let product = set.roots.iter().fold(Complex::with_val(128, 1), |acc, r| acc * r);
                let sign = if (k + h) % 2 == 0 { 1 } else { -1 };
                assert!(abs(&(product - sign)) < pow2(128, -100));
            }
        }
    }

    #[test]
    fn spectrum_is_deterministic() {
        let a = all_roots(params(4, 3), 192).unwrap();
        let b = all_roots(params(4, 3), 192).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn k1_spectrum_rejected() {
        assert!(matches!(all_roots(params(1, 4), 128), Err(Error::Unsupported(_))));
    }

    #[test]
    fn iteration_cap_is_enforced() {
        let config = RootConfig {
            cap_per_order: 0,
            ..RootConfig::default()
        };
        assert!(matches!(
            all_roots_with(params(3, 3), 128, &config),
            Err(Error::ConvergenceFailure(_))
        ));
    }

    #[test]
    fn grid_examples() {
        let grid = alpha_grid(4, 4, 128).unwrap();
        assert!(grid.all_flags_true());
        assert!(close(&grid.get(2, 1).value, 1.618_034, 1e-6));
        assert!(close(&grid.get(3, 1).value, 1.839_286_755_2, 1e-9));
        assert!(close(&grid.get(4, 1).value, 1.927_561_975_5, 1e-9));
        assert!(grid.get(2, 2).value < grid.get(2, 1).value);
        for h in 1..=4 {
            assert_eq!(grid.get(1, h).value, 1);
        }
        let column = alpha_grid(1, 3, 128).unwrap();
        assert!(column.all_flags_true());
        assert!(close(&column.row_limits[1].value, 1.618_033_988_7, 1e-9));
        assert_eq!(column.row_limits[0].value, 2);
    }

    #[test]
    fn grid_twelve_is_monotone() {
        let grid = alpha_grid(12, 12, 128).unwrap();
        assert!(grid.all_flags_true());
    }

    #[test]
    fn limits_report() {
        let report = limit_checks(10, 12, 128, DEFAULT_TARGET_GAP).unwrap();
        assert!(report.all_ok());
        assert!(report.columns[0].gaps.iter().all(|g| g.is_zero()));
        let row2 = &report.rows[1];
        assert!(close(&row2.limit, 1.618_033_988_7, 1e-9));
        assert!(row2.gaps.windows(2).all(|w| w[1] < w[0]));
        let col2 = &report.columns[1];
        assert_eq!(col2.gaps.len(), 12);
        assert!(col2.strictly_decreasing);

        // a loose grid cannot reach a tight target; this is reported
        let tight = limit_checks(3, 3, 128, 1e-6).unwrap();
        assert!(tight.all_ok());
        assert!(!tight.targets_met());
        assert!(tight.rows.iter().all(|r| r.strictly_decreasing && !r.below_target));
    }
}
