//! Wigner matrix functions of number-state pairs and their angular
//! coefficients `w^ang_{m,n}(0) = ∫₀^∞ w_{m,n}(r, 0) r dr`.
//!
//! Three independent routes to the angular coefficient are provided:
//!
//! * [`angular_coeff_sum`]: the closed-form alternating sum over
//!   `k = max(m,n) ..= m+n`, accumulated exactly in big integers,
//! * [`angular_coeff_genfun`]: the `m`-th Taylor coefficient of
//!   `(1-t)^{-d/2} (1+t)^{-d/2-1}`, `d = n - m`, by exact series convolution,
//! * [`angular_coeff_contour`]: the same coefficient as a contour integral
//!   on `|t| = r`, evaluated with the periodic trapezoid rule.

use std::f64::consts::{LN_2, PI};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::special::{laguerre, ln_gamma_half, log_factorial, SignedLogValue};

/// Indices `(m, n)` of a pair of number states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ModePair {
    pub m: usize,
    pub n: usize,
}

impl ModePair {
    pub fn new(m: usize, n: usize) -> Self {
        Self { m, n }
    }

    /// `(min, max)`; the angular coefficient is symmetric in the pair.
    pub fn ordered(self) -> (usize, usize) {
        (self.m.min(self.n), self.m.max(self.n))
    }
}

/// `w_{m,n}(q, p)`, with `w_{n,m} = conj(w_{m,n})`.
pub fn wigner_point(pair: ModePair, q: f64, p: f64) -> Complex64 {
    if pair.m > pair.n {
        return wigner_point(ModePair::new(pair.n, pair.m), q, p).conj();
    }
    let (m, n) = (pair.m, pair.n);
    let d = n - m;
    let z = Complex64::new(q, p) / 2f64.sqrt();
    let z2 = z.norm_sqr();
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    let ratio = (0.5 * (log_factorial(m as u64) - log_factorial(n as u64))).exp();
    let radial = sign / PI * ratio * (-2.0 * z2).exp() * laguerre(m, d, 4.0 * z2);
    (2.0 * z).powi(d as i32) * radial
}

/// Default bit budget for the exact accumulator of [`angular_coeff_sum`].
pub const DEFAULT_SUM_BIT_BUDGET: u64 = 1 << 16;

/// `w^ang_{m,n}(0)` from the closed-form alternating sum.
pub fn angular_coeff_sum(pair: ModePair) -> Result<f64> {
    angular_coeff_sum_with_budget(pair, DEFAULT_SUM_BIT_BUDGET)
}

/// As [`angular_coeff_sum`] with an explicit bit budget for the accumulator.
///
/// With `d = n - m` and `j = k - n`, every term of the sum becomes an
/// integer `T_j` over a common denominator, and consecutive terms satisfy
/// an exact integer recurrence. The sum is therefore formed without
/// rounding; only the final square root is taken in floating point.
pub fn angular_coeff_sum_with_budget(pair: ModePair, budget_bits: u64) -> Result<f64> {
    let (m, n) = pair.ordered();
    let d = n - m;

    let over_budget = |bits: u64| Error::OverflowBeyondRange {
        m: pair.m,
        n: pair.n,
        bits,
        budget: budget_bits,
    };

    // n!/d!
    let falling = (d + 1..=n).fold(BigInt::one(), |acc, i| acc * i);
    let mut term = if d % 2 == 0 {
        // T_j = 2^j (j + d/2)! C(m, j) n!/(d + j)!
        factorial(d / 2) * &falling
    } else {
        // T_j = 2^{m-j} (2i)!/i! C(m, j) n!/(d + j)!,  i = j + (d + 1)/2
        let i0 = d.div_ceil(2);
        (BigInt::one() << m) * (i0 + 1..=2 * i0).fold(BigInt::one(), |acc, i| acc * i) * &falling
    };
    let mut sum = BigInt::zero();
    for j in 0..=m {
        if term.bits() > budget_bits {
            return Err(over_budget(term.bits()));
        }
        if j % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        if j < m {
            // T_{j+1}/T_j = (2j + d + 2)(m - j) / ((j + 1)(d + j + 1)), exact
            term *= ((2 * j + d + 2) * (m - j)) as u64;
            term /= ((j + 1) * (d + j + 1)) as u64;
        }
    }
    if sum.is_zero() {
        return Ok(0.0);
    }

    let sign = if (m % 2 == 0) == sum.is_positive() {
        1.0
    } else {
        -1.0
    };
    let denom = factorial(m) * factorial(n);
    let squared = &sum * &sum;
    let value = if d % 2 == 0 {
        // w² = Σ² 2^{d-2} / (m! n! π²)
        let num = squared << d;
        let den = denom << 2;
        ratio_to_f64(&num, &den).sqrt() / PI
    } else {
        // w² = Σ² / (2^{2m+d+4} m! n! π)
        let den = denom << (2 * m + d + 4);
        ratio_to_f64(&squared, &den).sqrt() / PI.sqrt()
    };
    Ok(sign * value)
}

/// `w^ang_{m,n}(0)` as a Taylor coefficient of the generating function.
///
/// The `m`-th coefficient of `(1-t)^{-d/2} (1+t)^{-d/2-1}` is
/// `Σ_k (-1)^{m-k} C(m,k) P(d,k) P(d+2,m-k) / (2^m m!)` with
/// `P(x,k) = x(x+2)⋯(x+2k-2)`, summed exactly.
pub fn angular_coeff_genfun(pair: ModePair) -> Result<f64> {
    let (m, n) = pair.ordered();
    let d = n - m;
    let rising = |start: usize, len: usize| -> Vec<BigInt> {
        let mut out = Vec::with_capacity(len + 1);
        let mut acc = BigInt::one();
        out.push(acc.clone());
        for i in 0..len {
            acc *= start + 2 * i;
            out.push(acc.clone());
        }
        out
    };
    let left = rising(d, m);
    let right = rising(d + 2, m);

    let mut coeff = BigInt::zero();
    let mut binom = BigInt::one();
    for k in 0..=m {
        let term = &binom * &left[k] * &right[m - k];
        if (m - k) % 2 == 0 {
            coeff += term;
        } else {
            coeff -= term;
        }
        binom *= m - k;
        binom /= k + 1;
    }

    let taylor = SignedLogValue::from_bigint(&coeff)
        / SignedLogValue::from_ln(m as f64 * LN_2 + log_factorial(m as u64));
    Ok((genfun_prefactor(m, n) * taylor).to_f64())
}

/// `(-1)^m/π · √(m!/n!) · 2^{d/2-1} · Γ(d/2 + 1)` in log space.
fn genfun_prefactor(m: usize, n: usize) -> SignedLogValue {
    let d = n - m;
    let log_mag = -PI.ln()
        + 0.5 * (log_factorial(m as u64) - log_factorial(n as u64))
        + (0.5 * d as f64 - 1.0) * LN_2
        + ln_gamma_half(d as u32 + 2);
    SignedLogValue::new(if m.is_multiple_of(2) { 1 } else { -1 }, log_mag)
}

/// Radius `√(max(m,1)/n)` clamped to `[0.05, 0.95]`.
pub fn default_contour_radius(pair: ModePair) -> f64 {
    let (m, n) = pair.ordered();
    if n == 0 {
        return 0.5;
    }
    (m.max(1) as f64 / n as f64).sqrt().clamp(0.05, 0.95)
}

/// Node-count ceiling for the trapezoid doubling in [`angular_coeff_contour`].
pub const MAX_CONTOUR_NODES: usize = 1 << 20;

/// `w^ang_{m,n}(0)` from the contour integral on `|t| = r`, `0 < r < 1`.
///
/// The integrand is smooth and `2π`-periodic, so the trapezoid rule
/// converges geometrically; nodes are doubled until two successive
/// estimates agree to 1e-10 relative (or reach the rounding floor).
pub fn angular_coeff_contour(pair: ModePair, r: f64) -> Result<f64> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "contour radius must lie in (0, 1), got {r}"
        )));
    }
    let (m, n) = pair.ordered();
    let d = n - m;
    let exponent = -(0.5 * d as f64 + 1.0);
    // (1 - r e^{iφ}) (1 - r² e^{2iφ})^{-d/2-1} e^{-imφ}; the r^{-m} factor is
    // applied in log space
    let integrand = |phi: f64| -> Complex64 {
        let e = Complex64::from_polar(1.0, phi);
        let base = Complex64::new(1.0, 0.0) - e * e * (r * r);
        (Complex64::new(1.0, 0.0) - e * r)
            * base.powf(exponent)
            * Complex64::from_polar(1.0, -(m as f64) * phi)
    };
    let node = |j: usize, count: usize| -PI + 2.0 * PI * j as f64 / count as f64;

    let mut count = (2 * m + 2).next_power_of_two().max(32);
    let mut sum = Complex64::zero();
    let mut abs_sum = 0.0;
    for j in 0..count {
        let v = integrand(node(j, count));
        sum += v;
        abs_sum += v.norm();
    }
    let mut estimate = sum / count as f64;
    loop {
        if count >= MAX_CONTOUR_NODES {
            return Err(Error::NonConvergent {
                what: "contour trapezoid rule",
                detail: format!("({m},{n}) at r = {r} after {count} nodes"),
            });
        }
        let doubled = 2 * count;
        for j in (1..doubled).step_by(2) {
            let v = integrand(node(j, doubled));
            sum += v;
            abs_sum += v.norm();
        }
        count = doubled;
        let next = sum / count as f64;
        let change = (next - estimate).norm();
        estimate = next;
        let floor = 1e-15 * abs_sum / count as f64;
        if change <= 1e-10 * estimate.norm() || change <= floor {
            break;
        }
    }
    let scaled =
        SignedLogValue::from_f64(estimate.re) * SignedLogValue::from_ln(-(m as f64) * r.ln());
    Ok((genfun_prefactor(m, n) * scaled).to_f64())
}

/// [`angular_coeff_contour`] at [`default_contour_radius`].
pub fn angular_coeff_contour_default(pair: ModePair) -> Result<f64> {
    angular_coeff_contour(pair, default_contour_radius(pair))
}

/// `w^ang_{m,n}(0)` for all `0 ≤ m ≤ n < max_index`, packed by rows.
#[derive(Debug, Clone, PartialEq)]
pub struct AngularCoefficientTable {
    max_index: usize,
    values: Vec<f64>,
}

impl AngularCoefficientTable {
    /// Builds the table with the exact alternating sum, falling back to the
    /// contour route for any pair that exceeds the accumulator budget.
    /// Rows are computed in parallel.
    pub fn build(max_index: usize) -> Result<Self> {
        let rows: Vec<Vec<f64>> = (0..max_index)
            .into_par_iter()
            .map(|m| {
                (m..max_index)
                    .map(|n| {
                        let pair = ModePair::new(m, n);
                        match angular_coeff_sum(pair) {
                            Err(Error::OverflowBeyondRange { .. }) => {
                                angular_coeff_contour_default(pair)
                            }
                            other => other,
                        }
                    })
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<_>>()?;
        let values: Vec<f64> = rows.into_iter().flatten().collect();
        Self::from_values(max_index, values)
    }

    /// Wraps precomputed row-packed values (`(0,0), (0,1), …, (1,1), …`).
    pub fn from_values(max_index: usize, values: Vec<f64>) -> Result<Self> {
        let expected = max_index * (max_index + 1) / 2;
        if values.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "table of size {max_index} needs {expected} values, got {}",
                values.len()
            )));
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "non-finite angular coefficient at packed index {bad}"
            )));
        }
        Ok(Self { max_index, values })
    }

    pub fn max_index(&self) -> usize {
        self.max_index
    }

    fn offset(&self, m: usize, n: usize) -> usize {
        // rows m' < m hold max_index - m' entries each
        m * self.max_index - m * (m.saturating_sub(1)) / 2 + (n - m)
    }

    /// `w^ang_{m,n}(0)`, either index order.
    pub fn get(&self, m: usize, n: usize) -> f64 {
        let (lo, hi) = ModePair::new(m, n).ordered();
        assert!(
            hi < self.max_index,
            "({m},{n}) outside table of size {}",
            self.max_index
        );
        self.values[self.offset(lo, hi)]
    }

    /// Copy with one entry shifted by `delta`; used for fault injection.
    pub fn perturbed(&self, m: usize, n: usize, delta: f64) -> Self {
        let (lo, hi) = ModePair::new(m, n).ordered();
        let mut out = self.clone();
        let at = out.offset(lo, hi);
        out.values[at] += delta;
        out
    }

    /// CSV with header `m,n,w_ang`, one row per pair `m ≤ n`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,n,w_ang\n");
        for m in 0..self.max_index {
            for n in m..self.max_index {
                let _ = writeln!(out, "{m},{n},{:.16e}", self.get(m, n));
            }
        }
        out
    }
}

/// Normalised finite superposition `Σ c_n |n⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperpositionState {
    coefficients: Vec<Complex64>,
}

impl SuperpositionState {
    pub fn new(coefficients: Vec<Complex64>) -> Result<Self> {
        let norm = coefficients
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidArgument(
                "superposition must have finite nonzero norm".into(),
            ));
        }
        Ok(Self {
            coefficients: coefficients.into_iter().map(|c| c / norm).collect(),
        })
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn dimension(&self) -> usize {
        self.coefficients.len()
    }
}

/// `W^ang_ψ(φ) = Σ_{m,n} conj(c_m) c_n e^{i(n-m)φ} w^ang_{m,n}(0)` on `grid`.
pub fn angular_profile(
    state: &SuperpositionState,
    table: &AngularCoefficientTable,
    grid: &[f64],
) -> Result<Vec<f64>> {
    let c = state.coefficients();
    let dim = c.len();
    if dim > table.max_index() {
        return Err(Error::DimensionMismatch(format!(
            "state of dimension {dim} exceeds coefficient table of size {}",
            table.max_index()
        )));
    }
    // Fourier coefficients by frequency k = n - m, shifted by dim - 1
    let mut fourier = vec![Complex64::zero(); 2 * dim.max(1) - 1];
    for m in 0..dim {
        for n in 0..dim {
            let k = n + dim - 1 - m;
            fourier[k] += c[m].conj() * c[n] * table.get(m, n);
        }
    }
    Ok(grid
        .iter()
        .map(|&phi| {
            let value: Complex64 = fourier
                .iter()
                .enumerate()
                .map(|(idx, &coef)| {
                    let k = idx as f64 - (dim as f64 - 1.0);
                    coef * Complex64::from_polar(1.0, k * phi)
                })
                .sum();
            debug_assert!(value.im.abs() <= 1e-10, "imaginary residue {}", value.im);
            value.re
        })
        .collect())
}

fn factorial(n: usize) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Correctly scaled `num / den` for positive big integers, within 1 ulp.
fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    let shift = 64 + den.bits() as i64 - num.bits() as i64;
    let quotient = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    let q = quotient.to_f64().expect("quotient fits in f64");
    q * 2f64.powi(-(shift as i32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_1_PI;

    // radial quadrature of w_{0,3}(r, 0) r dr (mpmath, 60 digits)
    const V03: f64 = 0.244_301_255_951_459_96;

    #[test]
    fn wigner_point_examples() {
        let w = wigner_point(ModePair::new(0, 0), 0.0, 0.0);
        assert_relative_eq!(w.re, FRAC_1_PI, max_relative = 1e-15);
        assert_eq!(w.im, 0.0);
        assert_eq!(wigner_point(ModePair::new(0, 1), 0.0, 0.0).norm(), 0.0);
        let w = wigner_point(ModePair::new(0, 0), 1.0, 0.0);
        assert_relative_eq!(w.re, (-1f64).exp() / PI, max_relative = 1e-15);
    }

    #[test]
    fn wigner_point_hermitian_swap() {
        let a = wigner_point(ModePair::new(2, 5), 0.3, -1.1);
        let b = wigner_point(ModePair::new(5, 2), 0.3, -1.1);
        assert_eq!(a, b.conj());
    }

    #[test]
    fn sum_route_small_pairs() {
        assert_relative_eq!(
            angular_coeff_sum(ModePair::new(0, 0)).unwrap(),
            0.5 * FRAC_1_PI,
            max_relative = 1e-15
        );
        assert_relative_eq!(
            angular_coeff_sum(ModePair::new(0, 3)).unwrap(),
            V03,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            angular_coeff_sum(ModePair::new(0, 1)).unwrap(),
            1.0 / (8.0 * PI).sqrt(),
            max_relative = 1e-15
        );
        assert_eq!(
            angular_coeff_sum(ModePair::new(3, 0)).unwrap(),
            angular_coeff_sum(ModePair::new(0, 3)).unwrap()
        );
    }

    #[test]
    fn sum_route_budget() {
        let err = angular_coeff_sum_with_budget(ModePair::new(50, 60), 64).unwrap_err();
        assert!(matches!(
            err,
            Error::OverflowBeyondRange { m: 50, n: 60, .. }
        ));
    }

    #[test]
    fn genfun_route_small_pairs() {
        for (m, n) in [(0, 0), (1, 1), (4, 4)] {
            assert_relative_eq!(
                angular_coeff_genfun(ModePair::new(m, n)).unwrap(),
                0.5 * FRAC_1_PI,
                max_relative = 1e-13
            );
        }
        assert_relative_eq!(
            angular_coeff_genfun(ModePair::new(0, 3)).unwrap(),
            V03,
            max_relative = 1e-13
        );
    }

    #[test]
    fn contour_route_examples() {
        assert_relative_eq!(
            angular_coeff_contour(ModePair::new(1, 1), 0.5).unwrap(),
            0.5 * FRAC_1_PI,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            angular_coeff_contour(ModePair::new(0, 3), 0.3).unwrap(),
            V03,
            max_relative = 1e-12
        );
        let base = angular_coeff_contour(ModePair::new(2, 8), 0.3).unwrap();
        for r in [0.5, 0.7] {
            let v = angular_coeff_contour(ModePair::new(2, 8), r).unwrap();
            assert!((v - base).abs() <= 1e-9);
        }
    }

    #[test]
    fn contour_rejects_bad_radius() {
        for r in [0.0, 1.0, -0.2, f64::NAN] {
            assert!(matches!(
                angular_coeff_contour(ModePair::new(1, 2), r),
                Err(Error::InvalidArgument(_))
            ));
        }
    }

    #[test]
    fn default_radius_is_clamped() {
        assert_eq!(default_contour_radius(ModePair::new(0, 0)), 0.5);
        assert_eq!(default_contour_radius(ModePair::new(5, 5)), 0.95);
        assert_eq!(default_contour_radius(ModePair::new(0, 1000)), 0.05);
        assert_relative_eq!(default_contour_radius(ModePair::new(2, 8)), 0.5);
    }

    #[test]
    fn table_indexing_and_csv() {
        let table = AngularCoefficientTable::build(6).unwrap();
        for m in 0..6 {
            for n in 0..6 {
                let direct = angular_coeff_sum(ModePair::new(m, n)).unwrap();
                assert_eq!(table.get(m, n), direct);
            }
        }
        let csv = table.to_csv();
        assert!(csv.starts_with("m,n,w_ang\n0,0,1.5915494309189535e-1\n"));
        assert_eq!(csv.lines().count(), 1 + 21);
        assert!(AngularCoefficientTable::from_values(3, vec![0.0; 5]).is_err());
    }

    #[test]
    fn profile_of_ground_state_is_flat() {
        let table = AngularCoefficientTable::build(4).unwrap();
        let state = SuperpositionState::new(vec![Complex64::new(1.0, 0.0)]).unwrap();
        let grid: Vec<f64> = (0..16).map(|i| -PI + i as f64 * PI / 8.0).collect();
        for v in angular_profile(&state, &table, &grid).unwrap() {
            assert_relative_eq!(v, 0.5 * FRAC_1_PI, max_relative = 1e-15);
        }
    }

    #[test]
    fn profile_dimension_mismatch() {
        let table = AngularCoefficientTable::build(2).unwrap();
        let state = SuperpositionState::new(vec![Complex64::new(1.0, 0.0); 3]).unwrap();
        assert!(matches!(
            angular_profile(&state, &table, &[0.0]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn superposition_normalises() {
        let s = SuperpositionState::new(vec![Complex64::new(3.0, 0.0), Complex64::new(0.0, 4.0)])
            .unwrap();
        let norm: f64 = s.coefficients().iter().map(|c| c.norm_sqr()).sum();
        assert_relative_eq!(norm, 1.0, epsilon = 1e-15);
        assert!(SuperpositionState::new(vec![Complex64::zero(); 2]).is_err());
    }
}
