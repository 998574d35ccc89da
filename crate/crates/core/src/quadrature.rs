//! Globally adaptive Gauss–Kronrod (7/15) quadrature on intervals and on
//! tensor-product rectangles.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Nodes of the 15-point Kronrod rule on `[a, b]` with their Kronrod and
/// Gauss weights (Gauss weight is zero at Kronrod-only nodes).
fn kronrod_nodes(a: f64, b: f64) -> [(f64, f64, f64); 15] {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut out = [(0.0, 0.0, 0.0); 15];
    let mut idx = 0;
    for j in 0..7 {
        let wg = if j % 2 == 1 { WG[j / 2] } else { 0.0 };
        out[idx] = (center - half * XGK[j], half * WGK[j], half * wg);
        out[idx + 1] = (center + half * XGK[j], half * WGK[j], half * wg);
        idx += 2;
    }
    out[14] = (center, half * WGK[7], half * WG[3]);
    out
}

/// Kronrod and Gauss estimates of `∫_a^b f`.
pub fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let mut k = 0.0;
    let mut g = 0.0;
    for (x, wk, wg) in kronrod_nodes(a, b) {
        let y = f(x);
        k += wk * y;
        g += wg * y;
    }
    (k, g)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate {
    pub value: f64,
    pub error: f64,
    pub pieces: usize,
}

struct Piece<T, A> {
    id: usize,
    error: f64,
    value: f64,
    region: T,
    hint: A,
}

impl<T, A> PartialEq for Piece<T, A> {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl<T, A> Eq for Piece<T, A> {}
impl<T, A> PartialOrd for Piece<T, A> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T, A> Ord for Piece<T, A> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.id.cmp(&self.id))
    }
}

/// Global refinement loop shared by the 1D and 2D drivers: split the piece
/// with the largest error estimate until the summed error is below
/// `abs_tol` or `max_pieces` is reached. `estimate` returns the value, the
/// error and a hint handed back to `split`.
fn refine<T, A, E, S>(
    initial: Vec<T>,
    estimate: E,
    split: S,
    abs_tol: f64,
    max_pieces: usize,
    what: &'static str,
) -> Result<QuadEstimate>
where
    T: Copy,
    E: Fn(&T) -> (f64, f64, A),
    S: Fn(&T, &A) -> Vec<T>,
{
    let mut heap = BinaryHeap::new();
    let mut next_id = 0;
    let mut total_err = 0.0;
    for region in initial {
        let (value, error, hint) = estimate(&region);
        total_err += error;
        heap.push(Piece {
            id: next_id,
            error,
            value,
            region,
            hint,
        });
        next_id += 1;
    }
    let mut since_resum = 0;
    while total_err > abs_tol {
        if heap.len() >= max_pieces {
            return Err(Error::NonConvergent {
                what,
                detail: format!(
                    "{} pieces, error estimate {total_err:.3e} > tolerance {abs_tol:.3e}",
                    heap.len()
                ),
            });
        }
        let worst = heap
            .pop()
            .expect("heap is nonempty while error is positive");
        total_err -= worst.error;
        for region in split(&worst.region, &worst.hint) {
            let (value, error, hint) = estimate(&region);
            total_err += error;
            heap.push(Piece {
                id: next_id,
                error,
                value,
                region,
                hint,
            });
            next_id += 1;
        }
        since_resum += 1;
        if since_resum == 256 {
            total_err = heap.iter().map(|p| p.error).sum();
            since_resum = 0;
        }
    }
    let mut pieces = heap.into_vec();
    pieces.sort_by_key(|p| p.id);
    Ok(QuadEstimate {
        value: pieces.iter().map(|p| p.value).sum(),
        error: pieces.iter().map(|p| p.error).sum(),
        pieces: pieces.len(),
    })
}

/// Adaptive `∫_a^b f` to absolute tolerance `abs_tol`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    breakpoints: &[f64],
    abs_tol: f64,
    max_pieces: usize,
) -> Result<QuadEstimate> {
    let initial: Vec<(f64, f64)> = breakpoints.windows(2).map(|w| (w[0], w[1])).collect();
    refine(
        initial,
        |&(a, b)| {
            let (k, g) = gk15(&f, a, b);
            (k, (k - g).abs(), ())
        },
        |&(a, b), _| {
            let mid = 0.5 * (a + b);
            vec![(a, mid), (mid, b)]
        },
        abs_tol,
        max_pieces,
        "adaptive 1D quadrature",
    )
}

/// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Self {
        Self { x0, x1, y0, y1 }
    }

    fn halves(&self, axis: Axis) -> Vec<Rect> {
        match axis {
            Axis::X => {
                let xm = 0.5 * (self.x0 + self.x1);
                vec![
                    Rect::new(self.x0, xm, self.y0, self.y1),
                    Rect::new(xm, self.x1, self.y0, self.y1),
                ]
            }
            Axis::Y => {
                let ym = 0.5 * (self.y0 + self.y1);
                vec![
                    Rect::new(self.x0, self.x1, self.y0, ym),
                    Rect::new(self.x0, self.x1, ym, self.y1),
                ]
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Axis {
    X,
    Y,
}

/// Tensor-product rules on a rectangle: Kronrod in both directions, and
/// the two mixed rules with Gauss in `x` or in `y` only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectRules {
    pub kk: f64,
    pub gk: f64,
    pub kg: f64,
    pub gg: f64,
}

pub fn gk15_rect<F: Fn(f64, f64) -> f64>(f: &F, rect: &Rect) -> RectRules {
    let xs = kronrod_nodes(rect.x0, rect.x1);
    let ys = kronrod_nodes(rect.y0, rect.y1);
    let mut out = RectRules {
        kk: 0.0,
        gk: 0.0,
        kg: 0.0,
        gg: 0.0,
    };
    for &(x, wkx, wgx) in &xs {
        let mut row_k = 0.0;
        let mut row_g = 0.0;
        for &(y, wky, wgy) in &ys {
            let v = f(x, y);
            row_k += wky * v;
            row_g += wgy * v;
        }
        out.kk += wkx * row_k;
        out.kg += wkx * row_g;
        out.gk += wgx * row_k;
        out.gg += wgx * row_g;
    }
    out
}

/// Adaptive 2D cubature over a union of rectangles. A cell is bisected
/// across the axis whose Gauss/Kronrod discrepancy is larger.
pub fn integrate_2d<F: Fn(f64, f64) -> f64>(
    f: F,
    cells: Vec<Rect>,
    abs_tol: f64,
    max_pieces: usize,
) -> Result<QuadEstimate> {
    refine(
        cells,
        |r| {
            let rules = gk15_rect(&f, r);
            let ex = (rules.kk - rules.gk).abs();
            let ey = (rules.kk - rules.kg).abs();
            let error = (rules.kk - rules.gg).abs().max(ex).max(ey);
            (rules.kk, error, if ex >= ey { Axis::X } else { Axis::Y })
        },
        |r, &axis| r.halves(axis),
        abs_tol,
        max_pieces,
        "adaptive 2D cubature",
    )
}
