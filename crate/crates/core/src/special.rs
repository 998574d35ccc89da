//! Scalar special functions: log-factorials, Gamma at half-integers,
//! associated Laguerre polynomials and the sine integral.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};
use std::ops::{Div, Mul, Neg};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, Zero};

/// A real number stored as a sign and the natural log of its magnitude.
///
/// Used wherever factorial prefactors would overflow `f64` long before the
/// quantity they multiply does.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignedLogValue {
    sign: i8,
    log_magnitude: f64,
}

impl SignedLogValue {
    pub const ZERO: Self = Self {
        sign: 0,
        log_magnitude: f64::NEG_INFINITY,
    };
    pub const ONE: Self = Self {
        sign: 1,
        log_magnitude: 0.0,
    };

    pub fn new(sign: i8, log_magnitude: f64) -> Self {
        match sign.signum() {
            0 => Self::ZERO,
            s => Self {
                sign: s,
                log_magnitude,
            },
        }
    }

    /// Positive value `exp(log_magnitude)`.
    pub fn from_ln(log_magnitude: f64) -> Self {
        Self::new(1, log_magnitude)
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self::new(if x > 0.0 { 1 } else { -1 }, x.abs().ln())
        }
    }

    /// Sign and log-magnitude of an arbitrary-size integer.
    pub fn from_bigint(x: &BigInt) -> Self {
        if x.is_zero() {
            return Self::ZERO;
        }
        let sign = if x.is_negative() { -1 } else { 1 };
        let mag = x.abs();
        let bits = mag.bits();
        // keep the leading 64 bits, fold the rest into the exponent
        let shift = bits.saturating_sub(64);
        let top: BigInt = &mag >> shift;
        let top = top.to_u64_digits().1.first().copied().unwrap_or(0) as f64;
        Self::new(sign, top.ln() + shift as f64 * LN_2)
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn log_magnitude(&self) -> f64 {
        self.log_magnitude
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn to_f64(self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.log_magnitude.exp(),
        }
    }

    pub fn sqrt(self) -> Self {
        assert!(self.sign >= 0, "square root of a negative SignedLogValue");
        Self::new(self.sign, 0.5 * self.log_magnitude)
    }

    pub fn recip(self) -> Self {
        assert!(self.sign != 0, "reciprocal of zero");
        Self::new(self.sign, -self.log_magnitude)
    }
}

impl Neg for SignedLogValue {
    type Output = Self;

    fn neg(self) -> Self {
        Self::new(-self.sign, self.log_magnitude)
    }
}

impl Mul for SignedLogValue {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        if self.sign == 0 || rhs.sign == 0 {
            return Self::ZERO;
        }
        Self::new(self.sign * rhs.sign, self.log_magnitude + rhs.log_magnitude)
    }
}

impl Div for SignedLogValue {
    type Output = Self;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.recip()
    }
}

/// `ln(n!)`.
///
/// Integer-accumulated for `n ≤ 20`, Stirling series for `ln Γ(n + 1)` beyond.
pub fn log_factorial(n: u64) -> f64 {
    if n <= 20 {
        let mut acc: u64 = 1;
        for i in 2..=n {
            acc *= i;
        }
        return (acc as f64).ln();
    }
    ln_gamma_large(n as f64 + 1.0)
}

/// Stirling series for `ln Γ(z)`; accurate to ~1 ulp for `z ≥ 20`.
fn ln_gamma_large(z: f64) -> f64 {
    const COEFFS: [f64; 6] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360360.0,
    ];
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut pow = inv;
    for c in COEFFS {
        series += c * pow;
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + 0.5 * (2.0 * PI).ln() + series
}

/// `Γ(two_x / 2)` for a positive integer `two_x`.
///
/// Integer arguments give `(j-1)!`, half-integers `Γ(j + 1/2) = √π·∏(i + 1/2)`.
/// Overflows to `+∞` past `Γ(171.5)`; use [`ln_gamma_half`] there.
pub fn gamma_half(two_x: u32) -> f64 {
    if two_x == 0 {
        return f64::INFINITY;
    }
    let j = two_x / 2;
    if two_x.is_multiple_of(2) {
        (1..j).fold(1.0, |acc, i| acc * f64::from(i))
    } else {
        (0..j).fold(PI.sqrt(), |acc, i| acc * (f64::from(i) + 0.5))
    }
}

/// `ln Γ(two_x / 2)` for a positive integer `two_x`.
pub fn ln_gamma_half(two_x: u32) -> f64 {
    if two_x == 0 {
        return f64::INFINITY;
    }
    let j = u64::from(two_x / 2);
    if two_x.is_multiple_of(2) {
        log_factorial(j - 1)
    } else {
        log_factorial(2 * j) - j as f64 * 4f64.ln() - log_factorial(j) + 0.5 * PI.ln()
    }
}

/// Associated Laguerre polynomial `L_m^{(k)}(x)` by the three-term
/// recurrence in the degree.
pub fn laguerre(m: usize, k: usize, x: f64) -> f64 {
    let alpha = k as f64;
    let mut prev = 1.0;
    if m == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for j in 1..m {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + alpha - x) * cur - (jf + alpha) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Crossover between the Maclaurin series and the auxiliary-function branch.
pub(crate) const SI_CROSSOVER: f64 = 4.0;

/// Sine integral `Si(x) = ∫₀ˣ sin(u)/u du`, absolute error below 1e-12.
pub fn sine_integral(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    let value = if ax <= SI_CROSSOVER {
        si_series(ax)
    } else if ax.is_infinite() {
        FRAC_PI_2
    } else {
        si_auxiliary(ax)
    };
    if x < 0.0 {
        -value
    } else {
        value
    }
}

/// Maclaurin series `Σ (-1)^k x^{2k+1} / ((2k+1)(2k+1)!)`.
pub(crate) fn si_series(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x; // x^{2k+1}/(2k+1)!
    let mut sum = x;
    let mut k = 0u32;
    loop {
        let a = f64::from(2 * k + 2);
        let b = f64::from(2 * k + 3);
        term *= -x2 / (a * b);
        let contrib = term / b;
        sum += contrib;
        k += 1;
        if contrib.abs() <= 1e-17 * sum.abs() || k > 60 {
            return sum;
        }
    }
}

/// `Si(x) = π/2 - f(x) cos x - g(x) sin x` with the auxiliary functions
/// taken from the continued fraction of `e^{ix} E₁(ix)` (modified Lentz).
pub(crate) fn si_auxiliary(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / TINY, 0.0);
    let mut d = b.inv();
    let mut h = d;
    for i in 2..10_000u32 {
        let a = -f64::from((i - 1) * (i - 1));
        b += 2.0;
        d = (d * a + b).inv();
        c = b + c.inv() * a;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    // h = e^{ix} E₁(ix); E₁(ix) = -Ci(x) + i(Si(x) - π/2)
    let e1 = h * Complex64::new(x.cos(), -x.sin());
    FRAC_PI_2 + e1.im
}
