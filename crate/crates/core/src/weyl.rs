//! Weyl symbols of products of sign operators and the Hilbert–Schmidt
//! norm of `A² - 1`, `A = sgn Q(0) + sgn Q(s) + sgn Q(t)`.
//!
//! The symbol of the Jordan product `sgn Q(a) ∘ sgn Q(b)` is
//! `(2/π) Si(2 ℓ_a ℓ_b / |sin(b - a)|)` with `ℓ_τ(q, p) = q cos τ + p sin τ`,
//! so the symbol of `(A² - 3)/2` is the sum `f` of the three pair symbols and
//! `trace((A² - 1)²) = (2/π) ∬ (f + 1)² dq dp`.
//!
//! The integral is computed over a disk of radius `R` by adaptive polar
//! cubature. The exterior is bounded by splitting the plane into six
//! sectors, one around each ray of the three null lines `ℓ_τ = 0`. Inside
//! the sector of line `a` (other lines `b`, `c`) two pointwise majorants
//! hold everywhere:
//!
//! * near the line: `|f + 1| ≤ A ℓ_a² + E/ρ²`,
//! * away from it: `|f + 1| ≤ D/(ρ |ℓ_a|) + E/ρ²`,
//!
//! and the exterior integral is split at `|ℓ_a| = ρ^{-1/3}`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{assemble_matrix, null_line_angle, InstantTriple};
use crate::quadrature::{integrate_2d, Rect};
use crate::special::sine_integral;
use crate::wigner::AngularCoefficientTable;

/// Smallest `|sin(b - a)|` accepted for a pair of instants.
pub const MIN_PAIR_SINE: f64 = 1e-9;

/// Default disk radius for [`hs_norm_integral`].
pub const DEFAULT_HS_RADIUS: f64 = 64.0;

/// Default absolute tolerance for [`hs_norm_integral`].
pub const DEFAULT_HS_TOLERANCE: f64 = 1e-4;

const MAX_CUBATURE_CELLS: usize = 2_000_000;

fn pair_sine(a: f64, b: f64) -> Result<f64> {
    let sine = (b - a).sin().abs();
    if sine < MIN_PAIR_SINE {
        return Err(Error::DegenerateInstants(format!(
            "|sin({b} - {a})| = {sine:.3e} is below {MIN_PAIR_SINE:e}"
        )));
    }
    Ok(sine)
}

/// Weyl symbol of `sgn Q(s) ∘ sgn Q(t)` at `(q, p)`.
pub fn pair_symbol(q: f64, p: f64, s: f64, t: f64) -> Result<f64> {
    let sine = pair_sine(s, t)?;
    let (ss, cs) = s.sin_cos();
    let (st, ct) = t.sin_cos();
    let arg = 2.0 / sine * (q * cs + p * ss) * (q * ct + p * st);
    Ok(2.0 / PI * sine_integral(arg))
}

/// Weyl symbol `f_{s,t}` of `(A_{s,t}² - 3)/2`: the sum of the pair
/// symbols over `{0,s}`, `{0,t}` and `{s,t}`.
pub fn triple_symbol(q: f64, p: f64, instants: InstantTriple) -> Result<f64> {
    Ok(TripleSymbol::new(instants)?.eval(q, p))
}

/// [`triple_symbol`] with the trigonometric coefficients precomputed.
#[derive(Debug, Clone, Copy)]
pub struct TripleSymbol {
    normals: [(f64, f64); 3],
    // 2/|sin| for pairs (0,1), (0,2), (1,2)
    scales: [f64; 3],
}

const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

impl TripleSymbol {
    pub fn new(instants: InstantTriple) -> Result<Self> {
        let times = instants.times();
        let mut scales = [0.0; 3];
        for (slot, &(a, b)) in PAIRS.iter().enumerate() {
            scales[slot] = 2.0 / pair_sine(times[a], times[b])?;
        }
        let normals = times.map(|tau| {
            let (sin, cos) = tau.sin_cos();
            (cos, sin)
        });
        Ok(Self { normals, scales })
    }

    pub fn eval(&self, q: f64, p: f64) -> f64 {
        let l = self.normals.map(|(c, s)| q * c + p * s);
        let mut sum = 0.0;
        for (slot, &(a, b)) in PAIRS.iter().enumerate() {
            sum += sine_integral(self.scales[slot] * l[a] * l[b]);
        }
        2.0 / PI * sum
    }
}

/// Per-sector constants of the exterior majorants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SectorBound {
    /// Index into `{0, s, t}` of the line whose ray the sector contains.
    pub line: usize,
    /// Direction of that ray.
    pub ray: f64,
    /// Sector edges on either side of the ray, as angular distances.
    pub half_widths: (f64, f64),
    pub near_quadratic: f64,
    pub far_inverse: f64,
    pub cross: f64,
}

impl SectorBound {
    /// `(near, far)` majorants of `|f + 1|` at polar point `(ρ, θ)` inside
    /// the sector; `ℓ = ρ sin(θ - ray)` is the signed distance to the line.
    pub fn majorants(&self, rho: f64, theta: f64) -> (f64, f64) {
        let dist = (rho * (theta - self.ray).sin()).abs();
        let tail = self.cross / (rho * rho);
        (
            self.near_quadratic * dist * dist + tail,
            self.far_inverse / (rho * dist) + tail,
        )
    }

    /// Angular distance from `theta` to the sector, zero inside it.
    fn excess(&self, theta: f64) -> f64 {
        let offset = (theta - self.ray + PI).rem_euclid(TAU) - PI;
        (-self.half_widths.0 - offset)
            .max(offset - self.half_widths.1)
            .max(0.0)
    }

    /// Upper bound on `∬_{ρ > R, sector} (f + 1)² dq dp`, or `+∞` if the
    /// near-line layer `|ℓ| < ρ^{-1/3}` does not fit in the sector at `R`.
    fn exterior_bound(&self, radius: f64) -> f64 {
        let min_half = self.half_widths.0.min(self.half_widths.1);
        if radius < 1.0 || radius.powf(-4.0 / 3.0).asin() >= min_half {
            return f64::INFINITY;
        }
        let (a, d, e) = (self.near_quadratic, self.far_inverse, self.cross);
        let width = self.half_widths.0 + self.half_widths.1;
        let r23 = radius.powf(-2.0 / 3.0);
        let near = 3.0 * PI * a * a * r23 + 0.6 * PI * e * e * radius.powf(-10.0 / 3.0);
        let far = 6.0 * d * d * r23 + e * e * width / (radius * radius);
        near + far
    }
}

/// Sector decomposition and majorant constants for a regular triple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailModel {
    pub sectors: Vec<SectorBound>,
}

impl TailModel {
    pub fn new(instants: InstantTriple) -> Result<Self> {
        let times = instants.times();
        for &(a, b) in &PAIRS {
            pair_sine(times[a], times[b])?;
        }
        let mut rays: Vec<(f64, usize)> = (0..3)
            .flat_map(|line| {
                let angle = null_line_angle(times[line]);
                [(angle, line), (angle + PI, line)]
            })
            .collect();
        rays.sort_by(|x, y| x.0.total_cmp(&y.0));

        let normal = |tau: f64| (tau.cos(), tau.sin());
        let mut sectors = Vec::with_capacity(6);
        for idx in 0..6 {
            let (ray, a) = rays[idx];
            let prev = rays[(idx + 5) % 6].0;
            let next = rays[(idx + 1) % 6].0;
            let gap_before = (ray - prev).rem_euclid(TAU);
            let gap_after = (next - ray).rem_euclid(TAU);
            let half_widths = (0.5 * gap_before, 0.5 * gap_after);
            let [b, c] = others(a);
            let edges = [ray - half_widths.0, ray + half_widths.1];

            // |ℓ_b| ≥ ρ m_b in the sector: |cos(θ - τ_b)| is concave between
            // its zeros, so the minimum sits on an edge
            let min_abs_cos = |tau: f64| {
                edges
                    .iter()
                    .map(|&theta| (theta - tau).cos().abs())
                    .fold(f64::INFINITY, f64::min)
            };
            let (mb, mc) = (min_abs_cos(times[b]), min_abs_cos(times[c]));
            let lb = (ray - times[b]).cos();
            let lc = (ray - times[c]).cos();
            if !(mb > 0.0 && mc > 0.0) || lb * lc >= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "instants {instants} lack the alternating sign structure around ray {ray:.6}"
                )));
            }

            let sin_ab = (times[b] - times[a]).sin().abs();
            let sin_ac = (times[c] - times[a]).sin().abs();
            let sin_bc = (times[c] - times[b]).sin().abs();
            // κ_ab ν_b + κ_ac ν_c = μ ν_a on the line where ℓ_a vanishes
            let (nb, nc, na) = (normal(times[b]), normal(times[c]), normal(times[a]));
            let w = (
                2.0 / sin_ab * nb.0 + 2.0 / sin_ac * nc.0,
                2.0 / sin_ab * nb.1 + 2.0 / sin_ac * nc.1,
            );
            let mu = w.0 * na.0 + w.1 * na.1;
            let residual = ((w.0 - mu * na.0).powi(2) + (w.1 - mu * na.1).powi(2)).sqrt();
            if residual > 1e-9 * (w.0.hypot(w.1) + 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "instants {instants}: pair symbols of line {a} do not cancel on it"
                )));
            }

            sectors.push(SectorBound {
                line: a,
                ray,
                half_widths,
                near_quadratic: 2.0 / PI * mu.abs(),
                far_inverse: 2.0 * sin_ab / (PI * mb) + 2.0 * sin_ac / (PI * mc),
                cross: 2.0 * sin_bc / (PI * mb * mc),
            });
        }
        Ok(Self { sectors })
    }

    /// The sector containing direction `theta`; on a shared edge, the first.
    pub fn sector_of(&self, theta: f64) -> &SectorBound {
        self.sectors
            .iter()
            .min_by(|a, b| a.excess(theta).total_cmp(&b.excess(theta)))
            .expect("six sectors")
    }

    /// Pointwise upper bound on `|f(q, p) + 1|`.
    pub fn majorant(&self, q: f64, p: f64) -> f64 {
        let rho = q.hypot(p);
        let theta = p.atan2(q);
        let (near, far) = self.sector_of(theta).majorants(rho, theta);
        near.min(far)
    }

    /// Upper bound on `(2/π) ∬_{ρ > R} (f + 1)² dq dp`.
    pub fn tail_bound(&self, radius: f64) -> f64 {
        2.0 / PI
            * self
                .sectors
                .iter()
                .map(|s| s.exterior_bound(radius))
                .sum::<f64>()
    }
}

fn others(a: usize) -> [usize; 2] {
    match a {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HsIntegralResult {
    /// `(1/2π) ∬_{ρ < R} |2(f + 1)|² dq dp`.
    pub value: f64,
    pub radius: f64,
    /// Upper bound on the omitted integral over `ρ > R`.
    pub tail_bound: f64,
    pub instants: InstantTriple,
    pub quadrature_error: f64,
    pub cells: usize,
}

/// Squared Hilbert–Schmidt norm of `A² - 1` restricted to the disk of
/// radius `radius`, with an explicit bound on the remainder.
///
/// Only a half plane is integrated, since `f` is even. For the symmetric
/// triple this shrinks to the wedge `π/3 ≤ θ ≤ π/2`, as `f` is then
/// invariant under rotation by `π/3` and under `q → -q`.
pub fn hs_norm_integral(
    instants: InstantTriple,
    radius: f64,
    tolerance: f64,
) -> Result<HsIntegralResult> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "radius must be positive, got {radius}"
        )));
    }
    if tolerance.is_nan() || tolerance <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be positive, got {tolerance}"
        )));
    }
    let symbol = TripleSymbol::new(instants)?;
    if !instants.is_regular() {
        return Err(Error::InvalidArgument(format!(
            "instants {instants} lie outside the window s < π < t < s + π"
        )));
    }
    let tails = TailModel::new(instants)?;

    let (angles, copies) = if instants.is_symmetric() {
        (vec![PI / 3.0, FRAC_PI_2], 12.0)
    } else {
        // f(-q, -p) = f(q, p); sectors come sorted, so the first three rays
        // and the antipode of the first span a half plane
        let rays: Vec<f64> = tails.sectors.iter().map(|s| s.ray).collect();
        (vec![rays[0], rays[1], rays[2], rays[0] + PI], 2.0)
    };
    let cells = initial_cells(&angles, radius);
    let integrand = |rho: f64, theta: f64| {
        let (sin, cos) = theta.sin_cos();
        let g = symbol.eval(rho * cos, rho * sin) + 1.0;
        2.0 / PI * g * g * rho
    };
    let est = integrate_2d(integrand, cells, tolerance / copies, MAX_CUBATURE_CELLS)?;
    Ok(HsIntegralResult {
        value: copies * est.value,
        radius,
        tail_bound: tails.tail_bound(radius),
        instants,
        quadrature_error: copies * est.error,
        cells: est.pieces,
    })
}

/// Radial panels `[0, ½, 1, 2, 3, …, R]` crossed with four angular panels
/// between consecutive entries of `angles`.
fn initial_cells(angles: &[f64], radius: f64) -> Vec<Rect> {
    let mut radii = vec![0.0];
    let mut r = 0.5;
    while r < radius {
        radii.push(r);
        r = if r < 1.0 { 1.0 } else { r + 1.0 };
    }
    radii.push(radius);
    let mut cells = Vec::new();
    for w in angles.windows(2) {
        let step = (w[1] - w[0]) / 4.0;
        for j in 0..4 {
            let (t0, t1) = (w[0] + j as f64 * step, w[0] + (j + 1) as f64 * step);
            for rw in radii.windows(2) {
                cells.push(Rect::new(rw[0], rw[1], t0, t1));
            }
        }
    }
    cells
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatrixSideEstimate {
    pub n: usize,
    pub trace: f64,
}

/// `trace((A_N² - 1)²)` for each truncation size, from one matrix
/// assembled at the largest size.
pub fn matrix_side_estimates(
    instants: InstantTriple,
    sizes: &[usize],
    table: &AngularCoefficientTable,
) -> Result<Vec<MatrixSideEstimate>> {
    let Some(&largest) = sizes.iter().max() else {
        return Ok(Vec::new());
    };
    let full = assemble_matrix(largest, instants, table)?;
    sizes
        .iter()
        .map(|&n| {
            Ok(MatrixSideEstimate {
                n,
                trace: full.truncated(n)?.sign_sum_hs_trace(),
            })
        })
        .collect()
}

/// JSON report of the `weyl-norm` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylReport {
    pub s: f64,
    pub t: f64,
    pub radius: f64,
    pub value: f64,
    pub tail_bound: f64,
    pub matrix_side_estimates: Vec<MatrixSideEstimate>,
}

impl WeylReport {
    pub fn new(result: &HsIntegralResult, estimates: Vec<MatrixSideEstimate>) -> Self {
        Self {
            s: result.instants.s,
            t: result.instants.t,
            radius: result.radius,
            value: result.value,
            tail_bound: result.tail_bound,
            matrix_side_estimates: estimates,
        }
    }
}
