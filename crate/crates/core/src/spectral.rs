//! Extremal eigenpairs of the truncated operator and convergence in the
//! truncation size.

use std::fmt::Write as _;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{assemble_matrix, InstantTriple, OperatorMatrix};
use crate::wigner::AngularCoefficientTable;

const EIGEN_EPS: f64 = 1e-15;
const EIGEN_MAX_ITER: usize = 10_000;

/// Smallest and largest eigenvalue of an [`OperatorMatrix`] and the unit
/// eigenvector of the largest.
///
/// The eigenvector gauge is fixed by making its largest-magnitude component
/// (lowest index on ties) real and positive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralResult {
    pub n: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub top_vector: Vec<Complex64>,
    pub instants: InstantTriple,
}

impl SpectralResult {
    /// `⟨v|M|v⟩` for the stored top vector.
    pub fn rayleigh_quotient(&self, matrix: &OperatorMatrix) -> f64 {
        let v = nalgebra::DVector::from_column_slice(&self.top_vector);
        (v.adjoint() * matrix.entries() * &v)[(0, 0)].re
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
}

/// Full dense Hermitian eigendecomposition; the real symmetric solver is
/// used when every entry is real.
pub fn extremal_eigs(matrix: &OperatorMatrix) -> Result<SpectralResult> {
    let dim = matrix.dim();
    if dim == 0 {
        return Err(Error::DimensionMismatch("empty operator matrix".into()));
    }
    let entries = matrix.entries();
    let non_convergent = || Error::NonConvergent {
        what: "Hermitian eigensolver",
        detail: format!("{dim}×{dim} matrix after {EIGEN_MAX_ITER} sweeps"),
    };

    let (eigenvalues, eigenvectors): (Vec<f64>, DMatrix<Complex64>) =
        if entries.iter().all(|z| z.im == 0.0) {
            let real = entries.map(|z| z.re);
            let eig = SymmetricEigen::try_new(real, EIGEN_EPS, EIGEN_MAX_ITER)
                .ok_or_else(non_convergent)?;
            (
                eig.eigenvalues.iter().copied().collect(),
                eig.eigenvectors.map(|x| Complex64::new(x, 0.0)),
            )
        } else {
            let eig = SymmetricEigen::try_new(entries.clone(), EIGEN_EPS, EIGEN_MAX_ITER)
                .ok_or_else(non_convergent)?;
            (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
        };

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eigenvalues[a].total_cmp(&eigenvalues[b]).then(a.cmp(&b)));
    let lo = order[0];
    let hi = order[dim - 1];

    let mut top: Vec<Complex64> = eigenvectors.column(hi).iter().copied().collect();
    let norm = top.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let pivot = top
        .iter()
        .enumerate()
        .fold((0, -1.0), |best, (i, z)| {
            if z.norm() > best.1 {
                (i, z.norm())
            } else {
                best
            }
        })
        .0;
    let phase = top[pivot].conj() / top[pivot].norm();
    for z in &mut top {
        *z = *z * phase / norm;
    }
    top[pivot] = Complex64::new(top[pivot].re, 0.0);

    Ok(SpectralResult {
        n: dim,
        lambda_min: eigenvalues[lo],
        lambda_max: eigenvalues[hi],
        top_vector: top,
        instants: matrix.instants(),
    })
}

/// `λ_max` (and `λ_min`) for each truncation size in `sizes`.
///
/// Sizes must be nonempty and strictly increasing; every row reuses the
/// leading block of one matrix assembled at the largest size.
pub fn convergence_table(
    sizes: &[usize],
    instants: InstantTriple,
    table: &AngularCoefficientTable,
) -> Result<Vec<ConvergenceRow>> {
    let Some(&largest) = sizes.last() else {
        return Err(Error::InvalidArgument("no truncation sizes given".into()));
    };
    if sizes.contains(&0) || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(format!(
            "sizes must be positive and strictly increasing, got {sizes:?}"
        )));
    }
    let full = assemble_matrix(largest, instants, table)?;
    sizes
        .iter()
        .map(|&n| {
            let res = extremal_eigs(&full.truncated(n)?)?;
            Ok(ConvergenceRow {
                n,
                lambda_min: res.lambda_min,
                lambda_max: res.lambda_max,
            })
        })
        .collect()
}

/// `‖A‖ = 6 (λ_max - 1/2)` for the sign sum `A = 6 M - 3`.
pub fn sign_sum_norm(result: &SpectralResult) -> f64 {
    norm_from_lambda_max(result.lambda_max)
}

pub fn norm_from_lambda_max(lambda_max: f64) -> f64 {
    6.0 * (lambda_max - 0.5)
}

/// CSV `n,lambda_min,lambda_max`.
pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from("n,lambda_min,lambda_max\n");
    for row in rows {
        let _ = writeln!(
            out,
            "{},{:.16e},{:.16e}",
            row.n, row.lambda_min, row.lambda_max
        );
    }
    out
}
