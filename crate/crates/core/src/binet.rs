//! Binet-style closed forms `C_n = a_1 r_1^n + ... + a_m r_m^n`.
//!
//! Three independent routes to the coefficients are provided:
//!
//! - [`coefficients_via_solve`]: the Vandermonde system `sum_i a_i r_i^l = C_l`
//!   solved by Gaussian elimination with partial pivoting;
//! - [`coefficients_explicit`]: the closed expression for `a_n` built from the
//!   elementary symmetric functions of the other roots (`k, h >= 2`);
//! - [`miles_coefficients`]: `a_i = 1 / prod_{j != i} (r_i - r_j)` for `h = 1`,
//!   combined with exact integer shifts for an arbitrary seed.
//!
//! The exact recurrence in [`crate::sequences`] is the ground truth every
//! route is checked against.

use rug::{Complex, Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{abs, format_float, pow2, powu};
use crate::roots::{all_roots, check_precision, dominant_root, expand_monic, ComplexRootSet};
use crate::sequences::{custom_seq, dying_rabbit_seq, InitialConditions, SequenceParams};

fn require_k2(params: SequenceParams, what: &str) -> Result<()> {
    if params.k() < 2 {
        return Err(Error::Unsupported(format!(
            "k=1 unsupported for {what}: the roots of x^h - 1 share modulus 1"
        )));
    }
    Ok(())
}

/// `e_0 .. e_{k+h-1}` of all roots of `g_{k,h}`, read off its coefficients:
/// `1`, then `h-1` zeros, then `(-1)^(s+1)`.
pub fn elem_sym_full(params: SequenceParams) -> Vec<Integer> {
    let m = params.order();
    let h = params.h() as usize;
    (0..=m)
        .map(|s| match s {
            0 => Integer::from(1),
            s if s < h => Integer::new(),
            s if s % 2 == 0 => Integer::from(-1),
            _ => Integer::from(1),
        })
        .collect()
}

/// How [`elem_sym_dropped`] evaluates `e_s` of the roots other than `r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DroppedMode {
    /// Summed geometric series in `r`.
    ClosedForm,
    /// `e_t(rest) = sum_{i=1}^{m-t} (-1)^(i+1) e_{t+i}(all) / r^i`.
    Recursion,
}

/// `e_0 .. e_{k+h-2}` of the roots of `g_{k,h}` other than `root`, at the
/// precision of `root`. `root` must be a root of `g_{k,h}`.
pub fn elem_sym_dropped(params: SequenceParams, root: &Complex, mode: DroppedMode) -> Result<Vec<Complex>> {
    require_k2(params, "dropped symmetric functions")?;
    let prec = root.prec().0;
    let m = params.order();
    let (k, h) = (params.k() as u64, params.h() as usize);
    let one = Complex::with_val(prec, 1);
    match mode {
        DroppedMode::ClosedForm => {
            let r_minus_1 = Complex::with_val(prec, root - 1u32);
            let r_k_minus_1 = Complex::with_val(prec, powu(root, k) - 1u32);
            Ok((0..m)
                .map(|s| {
                    if s == 0 {
                        return one.clone();
                    }
                    let exponent = (m - s) as u64;
                    let scale = Complex::with_val(prec, powu(root, exponent) * &r_minus_1);
                    let numerator = if s < h {
                        r_k_minus_1.clone()
                    } else {
                        Complex::with_val(prec, powu(root, exponent) - 1u32)
                    };
                    let value = numerator / scale;
                    if s % 2 == 1 {
                        -value
                    } else {
                        value
                    }
                })
                .collect())
        }
        DroppedMode::Recursion => {
            let full = elem_sym_full(params);
            let inv = Complex::with_val(prec, root.recip_ref());
            Ok((0..m)
                .map(|t| {
                    let mut acc = Complex::with_val(prec, 0);
                    let mut inv_pow = one.clone();
                    for i in 1..=m - t {
                        inv_pow *= &inv;
                        let term = Complex::with_val(prec, &inv_pow * &full[t + i]);
                        if i % 2 == 1 {
                            acc += term;
                        } else {
                            acc -= term;
                        }
                    }
                    acc
                })
                .collect())
        }
    }
}

/// Full and dropped elementary symmetric values side by side.
#[derive(Debug, Clone, PartialEq)]
pub struct ElemSymTable {
    pub full: Vec<Integer>,
    pub dropped: Vec<Complex>,
}

pub fn elem_sym_table(params: SequenceParams, root: &Complex, mode: DroppedMode) -> Result<ElemSymTable> {
    Ok(ElemSymTable {
        full: elem_sym_full(params),
        dropped: elem_sym_dropped(params, root, mode)?,
    })
}

/// `e_s` of the roots other than `roots[skip]`, from the coefficients of
/// `prod_{i != skip} (x - r_i)`.
pub fn dropped_from_vieta(set: &ComplexRootSet, skip: usize) -> Vec<Complex> {
    let others: Vec<Complex> = set
        .roots
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != skip)
        .map(|(_, r)| r.clone())
        .collect();
    let coeffs = expand_monic(&others, set.precision_bits);
    let n = others.len();
    (0..=n)
        .map(|s| {
            let c = coeffs[n - s].clone();
            if s % 2 == 1 {
                -c
            } else {
                c
            }
        })
        .collect()
}

/// Which route produced a [`BinetForm`]'s coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    VandermondeSolve,
    ExplicitFormula,
    Miles,
}

impl Solver {
    pub fn as_str(&self) -> &'static str {
        match self {
            Solver::VandermondeSolve => "vandermonde-solve",
            Solver::ExplicitFormula => "explicit-formula",
            Solver::Miles => "miles",
        }
    }
}

/// Roots, coefficients and the seed they reproduce.
#[derive(Debug, Clone, PartialEq)]
pub struct BinetForm {
    pub params: SequenceParams,
    pub roots: ComplexRootSet,
    pub coeffs: Vec<Complex>,
    pub solver: Solver,
    pub precision_bits: u32,
    pub init: InitialConditions,
    /// `max_l |sum_i a_i r_i^l - C_l| / max(1, max_l |C_l|)`.
    pub system_residual: Float,
}

fn system_residual(roots: &[Complex], coeffs: &[Complex], init: &InitialConditions, prec: u32) -> Float {
    let scale = init
        .values()
        .iter()
        .map(|c| Float::with_val(prec, c).abs())
        .fold(Float::with_val(prec, 1), |a, b| a.max(&b));
    let mut worst = Float::with_val(prec, 0);
    let mut powers: Vec<Complex> = roots.iter().map(|_| Complex::with_val(prec, 1)).collect();
    for target in init.values() {
        let mut sum = Complex::with_val(prec, 0);
        for (p, a) in powers.iter().zip(coeffs) {
            sum += Complex::with_val(prec, p * a);
        }
        sum -= target;
        let err = abs(&sum);
        if err > worst {
            worst = err;
        }
        for (p, r) in powers.iter_mut().zip(roots) {
            *p *= r;
        }
    }
    worst / scale
}

fn finish(roots: &ComplexRootSet, init: &InitialConditions, coeffs: Vec<Complex>, solver: Solver) -> Result<BinetForm> {
    let prec = roots.precision_bits;
    let residual = system_residual(&roots.roots, &coeffs, init, prec);
    if residual.is_nan() || residual > pow2(prec, -(prec as i32) / 2) {
        return Err(Error::IllConditioned {
            precision_bits: prec,
            residual: format_float(&residual, 64),
        });
    }
    Ok(BinetForm {
        params: roots.params,
        roots: roots.clone(),
        coeffs,
        solver,
        precision_bits: prec,
        init: init.clone(),
        system_residual: residual,
    })
}

/// Gaussian elimination with partial pivoting; `None` when singular.
fn solve_linear(mut a: Vec<Vec<Complex>>, mut b: Vec<Complex>, prec: u32) -> Option<Vec<Complex>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).max_by(|&i, &j| {
            abs(&a[i][col])
                .partial_cmp(&abs(&a[j][col]))
                .unwrap_or(std::cmp::Ordering::Equal)
        })?;
        if abs(&a[pivot][col]).is_zero() {
            return None;
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = Complex::with_val(prec, a[col][col].recip_ref());
        for row in col + 1..n {
            let factor = Complex::with_val(prec, &a[row][col] * &inv);
            if factor.real().is_zero() && factor.imag().is_zero() {
                continue;
            }
            let (upper, lower) = a.split_at_mut(row);
            for (target, pivot_entry) in lower[0][col..].iter_mut().zip(&upper[col][col..]) {
                *target -= Complex::with_val(prec, &factor * pivot_entry);
            }
            let delta = Complex::with_val(prec, &factor * &b[col]);
            b[row] -= delta;
        }
    }
    let mut x = vec![Complex::with_val(prec, 0); n];
    for row in (0..n).rev() {
        let mut acc = b[row].clone();
        for c in row + 1..n {
            acc -= Complex::with_val(prec, &a[row][c] * &x[c]);
        }
        x[row] = acc / &a[row][row];
    }
    Some(x)
}

/// Solves `sum_i a_i r_i^l = C_l`, `0 <= l <= k+h-2`.
pub fn coefficients_via_solve(roots: &ComplexRootSet, init: &InitialConditions) -> Result<BinetForm> {
    init.check_order(roots.params)?;
    let prec = roots.precision_bits;
    let n = roots.len();
    let mut rows: Vec<Vec<Complex>> = Vec::with_capacity(n);
    let mut row: Vec<Complex> = roots.roots.iter().map(|_| Complex::with_val(prec, 1)).collect();
    for _ in 0..n {
        let next: Vec<Complex> = row
            .iter()
            .zip(&roots.roots)
            .map(|(p, r)| Complex::with_val(prec, p * r))
            .collect();
        rows.push(std::mem::replace(&mut row, next));
    }
    let rhs: Vec<Complex> = init.values().iter().map(|c| Complex::with_val(prec, c)).collect();
    let coeffs = solve_linear(rows, rhs, prec).ok_or_else(|| Error::IllConditioned {
        precision_bits: prec,
        residual: "singular".into(),
    })?;
    finish(roots, init, coeffs, Solver::VandermondeSolve)
}

/// The closed expression
///
/// ```text
/// a_n = (-1)^(k+h+n-1) / (prod_{i>n} (r_i - r_n) * prod_{j<n} (r_n - r_j))
///       * [ sum_{l=0}^{k-2}     C_l (r_n^(l+1) - 1) / (r_n^(l+1) (r_n - 1))
///         + sum_{l=k-1}^{k+h-3} C_l (r_n^k - 1)     / (r_n^(l+1) (r_n - 1))
///         + C_{k+h-2} ]
/// ```
///
/// with 1-based `n`. Valid for `k, h >= 2`.
pub fn coefficients_explicit(roots: &ComplexRootSet, init: &InitialConditions) -> Result<BinetForm> {
    let params = roots.params;
    require_k2(params, "the explicit coefficient formula")?;
    if params.h() < 2 {
        return Err(Error::Unsupported(
            "the explicit coefficient formula needs h >= 2; use the Miles coefficients for h=1".into(),
        ));
    }
    init.check_order(params)?;
    let prec = roots.precision_bits;
    let (k, h) = (params.k() as usize, params.h() as usize);
    let c = init.values();
    let r = &roots.roots;
    let m = r.len();

    let mut coeffs = Vec::with_capacity(m);
    for n in 0..m {
        let rn = &r[n];
        let rn_minus_1 = Complex::with_val(prec, rn - 1u32);
        let rn_k_minus_1 = Complex::with_val(prec, powu(rn, k as u64) - 1u32);
        let mut bracket = Complex::with_val(prec, &c[k + h - 2]);
        let mut rn_pow = Complex::with_val(prec, 1);
        for (l, cl) in c.iter().enumerate().take(k + h - 2) {
            rn_pow *= rn;
            let denom = Complex::with_val(prec, &rn_pow * &rn_minus_1);
            let numer = if l <= k - 2 {
                Complex::with_val(prec, &rn_pow - 1u32)
            } else {
                rn_k_minus_1.clone()
            };
            bracket += numer / denom * cl;
        }

        let mut denom = Complex::with_val(prec, 1);
        for ri in &r[n + 1..] {
            denom *= Complex::with_val(prec, ri - rn);
        }
        for rj in &r[..n] {
            denom *= Complex::with_val(prec, rn - rj);
        }
        // 1-based index is n + 1
        let exponent = k + h + (n + 1) - 1;
        let mut a = bracket / denom;
        if exponent % 2 == 1 {
            a = -a;
        }
        coeffs.push(a);
    }
    finish(roots, init, coeffs, Solver::ExplicitFormula)
}

/// Integer weights `b` with `C_n = sum_j b_j u_{n+j}`, where `u` is the
/// fundamental solution seeded `(0, ..., 0, 1)`.
fn unit_shift_weights(params: SequenceParams, init: &InitialConditions) -> Result<Vec<Integer>> {
    let m = params.order();
    let unit = custom_seq(params, &InitialConditions::unit(m), 2 * m as u64)?.terms;
    let c = init.values();
    let mut b = vec![Integer::new(); m];
    for l in 0..m {
        let j0 = m - 1 - l;
        let mut rest = c[l].clone();
        for j in j0 + 1..m {
            rest -= Integer::from(&b[j] * &unit[l + j]);
        }
        // unit[m - 1] == 1
        b[j0] = rest;
    }
    Ok(b)
}

/// Coefficients for `h = 1`: `1 / prod_{j != i} (r_i - r_j)` reproduces the
/// seed `(0, ..., 0, 1)`; any other seed is an integer combination of its
/// shifts, which multiplies `a_i` by `sum_j b_j r_i^j`.
pub fn miles_coefficients(roots: &ComplexRootSet, init: &InitialConditions) -> Result<BinetForm> {
    let params = roots.params;
    if params.h() != 1 {
        return Err(Error::Unsupported(format!(
            "the Miles coefficients need h=1, got h={}",
            params.h()
        )));
    }
    require_k2(params, "the Miles coefficients")?;
    init.check_order(params)?;
    let prec = roots.precision_bits;
    let weights = unit_shift_weights(params, init)?;
    let r = &roots.roots;
    let coeffs = (0..r.len())
        .map(|i| {
            let mut denom = Complex::with_val(prec, 1);
            for (j, rj) in r.iter().enumerate() {
                if j != i {
                    denom *= Complex::with_val(prec, &r[i] - rj);
                }
            }
            let mut shift = Complex::with_val(prec, 0);
            for b in weights.iter().rev() {
                shift *= &r[i];
                shift += b;
            }
            shift / denom
        })
        .collect();
    finish(roots, init, coeffs, Solver::Miles)
}

/// One evaluation of a closed form.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedFormValue {
    pub n: u64,
    pub value: Complex,
    /// Nearest integer to the real part.
    pub rounded: Integer,
    /// Distance of the real part to `rounded`, plus `|imaginary part|`.
    pub residual: Float,
    /// A priori bound on the floating-point error of `value`:
    /// `(n + m + 16) * 2^(4 - p) * sum_i |a_i| |r_i|^n`.
    pub error_bound: Float,
}

/// Largest accepted distance from the nearest integer.
pub const ROUNDING_LIMIT: f64 = 0.25;

pub fn closed_form_eval(form: &BinetForm, n: u64) -> Result<ClosedFormValue> {
    let prec = form.precision_bits;
    let mut value = Complex::with_val(prec, 0);
    let mut magnitude = Float::with_val(prec, 0);
    for (a, r) in form.coeffs.iter().zip(&form.roots.roots) {
        let term = Complex::with_val(prec, a * &powu(r, n));
        magnitude += abs(&term);
        value += term;
    }
    let terms = n.saturating_add(form.coeffs.len() as u64 + 16);
    let error_bound = magnitude * pow2(prec, 4 - prec as i32) * Float::with_val(prec, terms);
    let nearest = Float::with_val(prec, value.real().round_ref());
    let residual = Float::with_val(prec, value.real() - &nearest).abs() + Float::with_val(prec, value.imag().abs_ref());
    let worst = Float::with_val(prec, &residual + &error_bound);
    if worst.is_nan() || worst > ROUNDING_LIMIT {
        return Err(Error::PrecisionExhausted {
            n,
            precision_bits: prec,
            residual: format_float(&worst, 32),
        });
    }
    let rounded = nearest.to_integer().unwrap_or_default();
    Ok(ClosedFormValue {
        n,
        value,
        rounded,
        residual,
        error_bound,
    })
}

/// `max_i |a_i - b_i| / max_j |b_j|`: componentwise difference relative to
/// the largest reference coefficient (a coefficient may vanish exactly, as
/// for the root `-1` of `g_{3,2}`).
pub fn coefficient_disagreement(a: &BinetForm, reference: &BinetForm) -> Float {
    let prec = reference.precision_bits;
    let scale = crate::numeric::max_abs(prec, &reference.coeffs);
    let worst = a
        .coeffs
        .iter()
        .zip(&reference.coeffs)
        .map(|(x, y)| abs(&Complex::with_val(prec, x - y)))
        .fold(Float::with_val(prec, 0), |acc, d| acc.max(&d));
    worst / scale
}

/// Default-route closed form: Miles coefficients for `h = 1`, the explicit
/// formula otherwise. `None` selects the default seed.
pub fn binet_form(params: SequenceParams, init: Option<&InitialConditions>, precision_bits: u32) -> Result<BinetForm> {
    require_k2(params, "closed form")?;
    check_precision(precision_bits)?;
    let default_init;
    let init = match init {
        Some(init) => init,
        None => {
            default_init = InitialConditions::default_for(params);
            &default_init
        }
    };
    init.check_order(params)?;
    let roots = all_roots(params, precision_bits)?;
    if params.h() == 1 {
        miles_coefficients(&roots, init)
    } else {
        coefficients_explicit(&roots, init)
    }
}

/// `C_{N+1} / C_N` against `alpha_{k,h}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioReport {
    pub params: SequenceParams,
    pub n: u64,
    pub ratio: Float,
    pub alpha: Float,
    pub gap: Float,
}

pub fn ratio_limit(params: SequenceParams, n: u64, precision_bits: u32) -> Result<RatioReport> {
    require_k2(params, "the ratio limit")?;
    if n == 0 {
        return Err(Error::InvalidParameter("N must be positive".into()));
    }
    let terms = dying_rabbit_seq(params, n + 1)?.terms;
    let exact = Rational::from((terms[n as usize + 1].clone(), terms[n as usize].clone()));
    let ratio = Float::with_val(precision_bits, &exact);
    let alpha = dominant_root(params, precision_bits)?.value;
    let gap = Float::with_val(precision_bits, &ratio - &alpha).abs();
    Ok(RatioReport {
        params,
        n,
        ratio,
        alpha,
        gap,
    })
}

/// A closed-form value that disagrees with the recurrence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub n: u64,
    pub expected: Integer,
    pub got: Integer,
}

/// Outcome of [`verify`].
#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub params: SequenceParams,
    pub n_max: u64,
    pub solver: Solver,
    /// Precision of the final, complete run.
    pub precision_bits: u32,
    /// Number of precision doublings needed.
    pub escalations: u32,
    pub max_residual: Float,
    pub mismatches: Vec<Mismatch>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares the rounded closed form with the exact recurrence for
/// `n = 0..=n_max`, doubling the precision on numerical failure up to
/// `max_precision_bits`.
pub fn verify(
    params: SequenceParams,
    init: Option<&InitialConditions>,
    n_max: u64,
    precision_bits: u32,
    max_precision_bits: u32,
) -> Result<VerifyReport> {
    require_k2(params, "closed form")?;
    let exact = match init {
        Some(init) => custom_seq(params, init, n_max)?.terms,
        None => dying_rabbit_seq(params, n_max)?.terms,
    };
    let mut prec = precision_bits;
    let mut escalations = 0;
    loop {
        match verify_at(params, init, &exact, prec) {
            Ok((solver, max_residual, mismatches)) => {
                return Ok(VerifyReport {
                    params,
                    n_max,
                    solver,
                    precision_bits: prec,
                    escalations,
                    max_residual,
                    mismatches,
                })
            }
            Err(e) if e.is_numerical() && prec.saturating_mul(2) <= max_precision_bits => {
                prec *= 2;
                escalations += 1;
            }
            Err(e) => return Err(e),
        }
    }
}

fn verify_at(
    params: SequenceParams,
    init: Option<&InitialConditions>,
    exact: &[Integer],
    prec: u32,
) -> Result<(Solver, Float, Vec<Mismatch>)> {
    let form = binet_form(params, init, prec)?;
    let mut max_residual = Float::with_val(prec, 0);
    let mut mismatches = Vec::new();
    for (n, expected) in exact.iter().enumerate() {
        let v = closed_form_eval(&form, n as u64)?;
        if v.residual > max_residual {
            max_residual = v.residual.clone();
        }
        if v.rounded != *expected {
            mismatches.push(Mismatch {
                n: n as u64,
                expected: expected.clone(),
                got: v.rounded,
            });
        }
    }
    Ok((form.solver, max_residual, mismatches))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::charpoly::build_g;

    fn params(k: u32, h: u32) -> SequenceParams {
        SequenceParams::new(k, h).unwrap()
    }

    fn near(a: &Complex, b: &Complex, tol: f64) -> bool {
        let prec = a.prec().0;
        abs(&Complex::with_val(prec, a - b)) < tol
    }

    fn each_root(set: &ComplexRootSet, f: impl Fn(&Complex) -> Complex) -> Vec<Complex> {
        set.roots.iter().map(f).collect()
    }

    #[test]
    fn full_symmetric_examples() {
        let ints = |p| elem_sym_full(p).iter().map(|v| v.to_i32().unwrap()).collect::<Vec<_>>();
        assert_eq!(ints(params(2, 2)), [1, 0, -1, 1]);
        assert_eq!(ints(params(3, 1)), [1, 1, -1, 1]);
        assert_eq!(ints(params(2, 4)), [1, 0, 0, 0, -1, 1]);
    }

    #[test]
    fn full_symmetric_matches_coefficients() {
        // g = sum_s (-1)^s e_s x^(m-s)
        for k in 1..=12 {
            for h in 1..=12 {
                let p = params(k, h);
                let g = build_g(p);
                let m = p.order();
                for (s, e) in elem_sym_full(p).iter().enumerate() {
                    let coeff = g.coeffs()[m - s].clone();
                    let signed = if s % 2 == 1 { -coeff } else { coeff };
                    assert_eq!(*e, signed, "k={k} h={h} s={s}");
                }
            }
        }
    }

    #[test]
    fn dropped_modes_agree_with_vieta() {
        for k in 2..=7 {
            for h in 1..=7 {
                let p = params(k, h);
                let set = all_roots(p, 192).unwrap();
                for (idx, root) in set.roots.iter().enumerate() {
                    let closed = elem_sym_dropped(p, root, DroppedMode::ClosedForm).unwrap();
                    let rec = elem_sym_dropped(p, root, DroppedMode::Recursion).unwrap();
                    let vieta = dropped_from_vieta(&set, idx);
                    assert_eq!(closed.len(), p.order());
                    assert_eq!(closed[0], 1);
                    for s in 0..closed.len() {
                        assert!(near(&closed[s], &rec[s], 1e-40), "k={k} h={h} s={s}");
                        assert!(near(&closed[s], &vieta[s], 1e-40), "k={k} h={h} s={s}");
                    }
                }
            }
        }
    }

    #[test]
    fn dropped_small_cases() {
        let set = all_roots(params(2, 1), 128).unwrap();
        let e = elem_sym_dropped(params(2, 1), set.dominant(), DroppedMode::ClosedForm).unwrap();
        assert!(near(&e[1], &set.roots[1], 1e-30));

        let set = all_roots(params(2, 2), 128).unwrap();
        let e = elem_sym_dropped(params(2, 2), set.dominant(), DroppedMode::Recursion).unwrap();
        assert!(near(&e[1], &Complex::with_val(128, -set.dominant()), 1e-30));

        let table = elem_sym_table(params(2, 2), set.dominant(), DroppedMode::ClosedForm).unwrap();
        assert_eq!(table.full.len(), 4);
        assert_eq!(table.dropped.len(), 3);

        let one = Complex::with_val(64, 1);
        assert!(elem_sym_dropped(params(1, 3), &one, DroppedMode::ClosedForm).is_err());
    }

    #[test]
    fn fibonacci_coefficients() {
        let set = all_roots(params(2, 1), 128).unwrap();
        let (r1, r2) = (&set.roots[0], &set.roots[1]);
        let diff = Complex::with_val(128, r1 - r2);
        // seed (f_0, f_1) = (0, 1): a = (1/(r1-r2), 1/(r2-r1))
        let form = coefficients_via_solve(&set, &InitialConditions::from_i64(&[0, 1])).unwrap();
        assert!(near(&form.coeffs[0], &Complex::with_val(128, diff.recip_ref()), 1e-30));
        assert!(near(
            &form.coeffs[1],
            &Complex::with_val(128, -diff.clone().recip()),
            1e-30
        ));
        // seed (1, 1): a_i = r_i / (r_i - r_j)
        let form = coefficients_via_solve(&set, &InitialConditions::from_i64(&[1, 1])).unwrap();
        assert!(near(&form.coeffs[0], &Complex::with_val(128, r1 / &diff), 1e-30));
        assert!(near(&form.coeffs[1], &-Complex::with_val(128, r2 / &diff), 1e-30));
    }

    fn perrin_family_check(form: &BinetForm, expected: &[Complex], tol: f64) {
        for (a, e) in form.coeffs.iter().zip(expected) {
            assert!(near(a, e, tol), "{a} vs {e}");
        }
    }

    #[test]
    fn named_plastic_coefficients_both_routes() {
        let set = all_roots(params(2, 2), 128).unwrap();
        let padovan = each_root(&set, |r| {
            let num = Complex::with_val(128, r * r) + r + 1u32;
            num / (Complex::with_val(128, r * 2u32) + 3u32)
        });
        let default = each_root(&set, |r| {
            let r1 = Complex::with_val(128, r + 1u32);
            Complex::with_val(128, &r1 * &r1) / (Complex::with_val(128, r * 2u32) + 3u32)
        });
        let ones = vec![Complex::with_val(128, 1); 3];
        for route in [coefficients_via_solve, coefficients_explicit] {
            perrin_family_check(
                &route(&set, &InitialConditions::from_i64(&[3, 0, 2])).unwrap(),
                &ones,
                1e-30,
            );
            perrin_family_check(
                &route(&set, &InitialConditions::from_i64(&[1, 1, 1])).unwrap(),
                &padovan,
                1e-30,
            );
            perrin_family_check(
                &route(&set, &InitialConditions::from_i64(&[1, 1, 2])).unwrap(),
                &default,
                1e-30,
            );
        }
    }

    #[test]
    fn explicit_agrees_with_solve() {
        for k in 2..=6 {
            for h in 2..=6 {
                let p = params(k, h);
                let set = all_roots(p, 128).unwrap();
                let init = InitialConditions::default_for(p);
                let a = coefficients_explicit(&set, &init).unwrap();
                let b = coefficients_via_solve(&set, &init).unwrap();
                assert!(coefficient_disagreement(&a, &b) < pow2(128, -42), "k={k} h={h}");
            }
        }
    }

    #[test]
    fn explicit_rejects_h1_and_k1() {
        let set = all_roots(params(3, 1), 128).unwrap();
        let err = coefficients_explicit(&set, &InitialConditions::default_for(params(3, 1))).unwrap_err();
        assert!(matches!(err, Error::Unsupported(_)));
        assert!(matches!(
            binet_form(params(1, 3), None, 128),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn miles_route() {
        // k = 2 with the unit seed reproduces 1/(r1 - r2), 1/(r2 - r1)
        let set = all_roots(params(2, 1), 128).unwrap();
        let unit = miles_coefficients(&set, &InitialConditions::unit(2)).unwrap();
        let diff = Complex::with_val(128, &set.roots[0] - &set.roots[1]);
        assert!(near(&unit.coeffs[0], &Complex::with_val(128, diff.recip_ref()), 1e-30));
        // Miles' all-ones seed: a_1 + a_2 = f_0 = 1
        let ones = miles_coefficients(&set, &InitialConditions::miles(2)).unwrap();
        let sum = Complex::with_val(128, &ones.coeffs[0] + &ones.coeffs[1]);
        assert!(near(&sum, &Complex::with_val(128, 1), 1e-30));

        for k in 2..=8 {
            let p = params(k, 1);
            let set = all_roots(p, 128).unwrap();
            for init in [
                InitialConditions::default_for(p),
                InitialConditions::miles(k),
                InitialConditions::unit(k as usize),
            ] {
                let miles = miles_coefficients(&set, &init).unwrap();
                let solved = coefficients_via_solve(&set, &init).unwrap();
                for (x, y) in miles.coeffs.iter().zip(&solved.coeffs) {
                    assert!(near(x, y, 1e-12), "k={k}");
                }
            }
        }
        let set = all_roots(params(2, 2), 128).unwrap();
        assert!(miles_coefficients(&set, &InitialConditions::from_i64(&[1, 1, 2])).is_err());
    }

    #[test]
    fn miles_sequence_from_closed_form() {
        for k in 2..=6 {
            let p = params(k, 1);
            let set = all_roots(p, 256).unwrap();
            let form = miles_coefficients(&set, &InitialConditions::miles(k)).unwrap();
            let exact = crate::sequences::miles_seq(k, 100).unwrap().terms;
            for (n, e) in exact.iter().enumerate() {
                assert_eq!(closed_form_eval(&form, n as u64).unwrap().rounded, *e);
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        let form = binet_form(params(3, 2), None, 128).unwrap();
        assert_eq!(form.solver, Solver::ExplicitFormula);
        assert_eq!(closed_form_eval(&form, 10).unwrap().rounded, 41);
        let form = binet_form(params(7, 4), None, 128).unwrap();
        assert_eq!(closed_form_eval(&form, 13).unwrap().rounded, 32);
        let perrin = binet_form(params(2, 2), Some(&InitialConditions::from_i64(&[3, 0, 2])), 128).unwrap();
        assert_eq!(closed_form_eval(&perrin, 5).unwrap().rounded, 5);
        let miles = binet_form(params(4, 1), None, 128).unwrap();
        assert_eq!(miles.solver, Solver::Miles);
    }

    #[test]
    fn reproduces_seed_and_conjugacy() {
        for k in 2..=8 {
            for h in 1..=8 {
                let p = params(k, h);
                let form = binet_form(p, None, 160).unwrap();
                for (l, c) in form.init.values().iter().enumerate() {
                    assert_eq!(closed_form_eval(&form, l as u64).unwrap().rounded, *c);
                }
                assert!(abs(&form.coeffs[0]) > pow2(160, -40));
                assert!(form.coeffs[0].imag().clone().abs() < pow2(160, -80));
                for i in 0..form.coeffs.len() {
                    let j = form.roots.conjugate_of(i).unwrap();
                    let mirrored = Complex::with_val(160, form.coeffs[j].conj_ref());
                    assert!(near(&form.coeffs[i], &mirrored, 1e-30));
                }
                let v = closed_form_eval(&form, 40).unwrap();
                assert!(v.value.imag().clone().abs() < pow2(160, -60));
            }
        }
    }

    #[test]
    fn low_precision_is_exhausted() {
        let form = binet_form(params(2, 1), None, 24).unwrap();
        assert!(matches!(
            closed_form_eval(&form, 200),
            Err(Error::PrecisionExhausted { .. })
        ));
    }

    #[test]
    fn verify_escalates_precision() {
        let report = verify(params(2, 1), None, 200, 32, 1024).unwrap();
        assert!(report.passed());
        assert!(report.escalations >= 1);
        assert!(report.precision_bits >= 64);
        assert!(report.max_residual <= ROUNDING_LIMIT);
    }

    #[test]
    fn verify_custom_seed() {
        let perrin = InitialConditions::from_i64(&[3, 0, 2]);
        let report = verify(params(2, 2), Some(&perrin), 120, 128, 1024).unwrap();
        assert!(report.passed());
        let negative = InitialConditions::from_i64(&[-7, 4, 0, 11]);
        assert!(verify(params(3, 2), Some(&negative), 120, 128, 1024).unwrap().passed());
    }

    #[test]
    fn ratio_examples() {
        let fib = ratio_limit(params(2, 1), 30, 128).unwrap();
        assert!(fib.gap < 1e-12);
        // C_10 / C_9 = 41 / 28
        let r32 = ratio_limit(params(3, 2), 9, 128).unwrap();
        let exact = Float::with_val(128, 41) / 28u32;
        assert_eq!(r32.ratio, exact);
        assert!((r32.gap.to_f64() - 0.001_285_517_5).abs() < 1e-9);
        assert!((r32.alpha.to_f64() - 1.465_571_231_876_768).abs() < 1e-14);
        let plastic = ratio_limit(params(2, 2), 60, 128).unwrap();
        assert!(plastic.gap < 1e-5);
        let mut last = ratio_limit(params(3, 3), 10, 128).unwrap().gap;
        for n in [40, 80, 160] {
            let gap = ratio_limit(params(3, 3), n, 128).unwrap().gap;
            assert!(gap < last);
            last = gap;
        }
        assert!(ratio_limit(params(1, 2), 10, 128).is_err());
    }
}
