//! The truncated operator `(1/3)(E(0) + E(s) + E(t))` in the number-state
//! basis, its arc Fourier integrals, and the classical baseline.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::{self, Write as _};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::wigner::AngularCoefficientTable;

/// Measurement instants `{0, s, t}` (radians, period `2π`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InstantTriple {
    pub s: f64,
    pub t: f64,
}

impl InstantTriple {
    pub fn new(s: f64, t: f64) -> Result<Self> {
        if !(s.is_finite() && t.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "instants must be finite, got s = {s}, t = {t}"
            )));
        }
        Ok(Self { s, t })
    }

    /// `(2π/3, 4π/3)`.
    pub fn symmetric() -> Self {
        Self {
            s: 2.0 * PI / 3.0,
            t: 4.0 * PI / 3.0,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        *self == Self::symmetric()
    }

    /// Inside the window `s < π < t < s + π`.
    pub fn is_regular(&self) -> bool {
        self.s < PI && PI < self.t && self.t < self.s + PI
    }

    pub fn times(&self) -> [f64; 3] {
        [0.0, self.s, self.t]
    }
}

impl fmt::Display for InstantTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(0, {}, {})", self.s, self.t)
    }
}

/// `sin(kπ/2)` without rounding.
fn sin_quarter_turns(k: i64) -> f64 {
    match k.rem_euclid(4) {
        1 => 1.0,
        3 => -1.0,
        _ => 0.0,
    }
}

/// `∫_{t-π/2}^{t+π/2} e^{ikφ} dφ`.
pub fn arc_fourier(k: i64, t: f64) -> Complex64 {
    if k == 0 {
        return Complex64::new(PI, 0.0);
    }
    let amplitude = 2.0 / k as f64 * sin_quarter_turns(k);
    if amplitude == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::from_polar(amplitude, k as f64 * t)
}

/// `Σ_{τ ∈ {0, 2π/3, 4π/3}} ∫_{τ-π/2}^{τ+π/2} e^{ikφ} dφ` in closed form.
pub fn symmetric_fourier(k: i64) -> f64 {
    if k == 0 {
        3.0 * PI
    } else if (k + 3) % 12 == 0 {
        6.0 / k as f64
    } else if (k - 3) % 12 == 0 {
        -6.0 / k as f64
    } else {
        0.0
    }
}

/// Hermitian matrix `(1/3)⟨m|E(0) + E(s) + E(t)|n⟩`, `0 ≤ m, n < dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    instants: InstantTriple,
    entries: DMatrix<Complex64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixMetadata {
    pub n: usize,
    pub s: f64,
    pub t: f64,
    pub regular: bool,
}

impl OperatorMatrix {
    /// Wraps an explicit square Hermitian matrix.
    pub fn from_entries(instants: InstantTriple, entries: DMatrix<Complex64>) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "operator matrix must be square, got {}×{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        let dim = entries.nrows();
        for m in 0..dim {
            for n in m..dim {
                if entries[(m, n)] != entries[(n, m)].conj() {
                    return Err(Error::InvalidArgument(format!(
                        "operator matrix is not Hermitian at ({m},{n})"
                    )));
                }
            }
        }
        Ok(Self { instants, entries })
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn instants(&self) -> InstantTriple {
        self.instants
    }

    pub fn entry(&self, m: usize, n: usize) -> Complex64 {
        self.entries[(m, n)]
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// Leading `dim × dim` principal block.
    pub fn truncated(&self, dim: usize) -> Result<Self> {
        if dim > self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "cannot truncate a {0}×{0} matrix to {dim}",
                self.dim()
            )));
        }
        Ok(Self {
            instants: self.instants,
            entries: self.entries.view((0, 0), (dim, dim)).into_owned(),
        })
    }

    /// `trace((A_N² - 1)²)` with `A_N = 6 M_N - 3`, the truncated analogue of
    /// the squared Hilbert–Schmidt norm of `A² - 1`.
    pub fn sign_sum_hs_trace(&self) -> f64 {
        let dim = self.dim();
        let identity = DMatrix::<Complex64>::identity(dim, dim);
        let a = self.entries.map(|z| z * 6.0) - identity.map(|z| z * 3.0);
        let b = &a * &a - identity;
        b.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn metadata(&self) -> MatrixMetadata {
        MatrixMetadata {
            n: self.dim(),
            s: self.instants.s,
            t: self.instants.t,
            regular: self.instants.is_regular(),
        }
    }

    /// CSV `m,n,re,im` over the upper triangle `m ≤ n`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("m,n,re,im\n");
        for m in 0..self.dim() {
            for n in m..self.dim() {
                let z = self.entries[(m, n)];
                let _ = writeln!(out, "{m},{n},{:.16e},{:.16e}", z.re, z.im);
            }
        }
        out
    }
}

/// Assembles the `dim × dim` operator matrix from the angular coefficients.
///
/// `entry(m, n) = (1/3) w^ang_{m,n}(0) Σ_τ arc_fourier(n - m, τ)`, with the
/// lower triangle filled by conjugation. For the symmetric triple the
/// closed-form [`symmetric_fourier`] is used after checking it against the
/// arc sum.
pub fn assemble_matrix(
    dim: usize,
    instants: InstantTriple,
    table: &AngularCoefficientTable,
) -> Result<OperatorMatrix> {
    if dim > table.max_index() {
        return Err(Error::DimensionMismatch(format!(
            "matrix dimension {dim} exceeds coefficient table of size {}",
            table.max_index()
        )));
    }
    let symmetric = instants.is_symmetric();
    let span = dim.max(1) as i64;
    // the arc sum depends on n - m only
    let fourier: Vec<Complex64> = (0..span)
        .map(|k| {
            let generic: Complex64 = instants
                .times()
                .iter()
                .map(|&tau| arc_fourier(k, tau))
                .sum();
            if symmetric {
                let exact = symmetric_fourier(k);
                assert!(
                    (generic - exact).norm() <= 1e-13,
                    "arc sum disagrees with the closed form at k = {k}"
                );
                Complex64::new(exact, 0.0)
            } else {
                generic
            }
        })
        .collect();

    let mut entries = DMatrix::<Complex64>::zeros(dim, dim);
    for m in 0..dim {
        entries[(m, m)] = Complex64::new(0.5, 0.0);
        for n in m + 1..dim {
            let f = fourier[n - m];
            let value = if f.re == 0.0 && f.im == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                f * (table.get(m, n) / 3.0)
            };
            entries[(m, n)] = value;
            entries[(n, m)] = value.conj();
        }
    }
    Ok(OperatorMatrix { instants, entries })
}

/// Fraction of the three instants at which a classical trajectory has
/// strictly positive coordinate: one of `0, 1/3, 2/3, 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Thirds(pub u8);

impl Thirds {
    pub fn as_f64(self) -> f64 {
        f64::from(self.0) / 3.0
    }
}

impl fmt::Display for Thirds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            0 => write!(f, "0"),
            3 => write!(f, "1"),
            k => write!(f, "{k}/3"),
        }
    }
}

/// Classical probability that `q(τ) = q0 cos τ + p0 sin τ > 0` for `τ`
/// uniform on the three instants.
pub fn classical_probability(q0: f64, p0: f64, instants: InstantTriple) -> Thirds {
    let positives = instants
        .times()
        .iter()
        .filter(|&&tau| {
            let (sin, cos) = tau.sin_cos();
            q0 * cos + p0 * sin > 0.0
        })
        .count();
    Thirds(positives as u8)
}

/// Angle of the line `q cos τ + p sin τ = 0`, in `[0, π)`.
pub(crate) fn null_line_angle(tau: f64) -> f64 {
    (tau + FRAC_PI_2).rem_euclid(PI)
}
