#![allow(dead_code)]

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::{Command, Output};

/// `(m, n, w^ang_{m,n}(0))` computed independently at 30 digits.
pub const ANCHORS: [(usize, usize, f64); 5] = [
    (0, 0, 0.159_154_943_091_895_35),
    (0, 3, 0.244_301_255_951_459_96),
    (1, 4, 0.122_150_627_975_729_98),
    (2, 5, 0.193_137_101_011_594_8),
    (3, 6, 0.136_568_553_824_009_9),
];

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn binomial(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Generalised Laguerre polynomial from its explicit sum.
pub fn laguerre_sum(m: usize, k: usize, x: f64) -> f64 {
    (0..=m)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(m + k, m - j) * x.powi(j as i32) / factorial(j)
        })
        .sum()
}

/// `w_{m,n}(r, 0)` for `m ≤ n`, written out on the real axis.
pub fn wigner_on_axis(m: usize, n: usize, r: f64) -> f64 {
    let d = n - m;
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign / PI
        * (factorial(m) / factorial(n)).sqrt()
        * (2f64.sqrt() * r).powi(d as i32)
        * (-r * r).exp()
        * laguerre_sum(m, d, 2.0 * r * r)
}

/// Interval with its endpoint and midpoint samples and Simpson estimate.
#[derive(Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
}

impl Panel {
    fn new(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> Self {
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        Self {
            a,
            b,
            fa,
            fm,
            fb,
            whole,
        }
    }
}

fn simpson_step<F: Fn(f64) -> f64>(f: &F, p: Panel, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (p.a + p.b);
    let left = Panel::new(p.a, m, p.fa, f(0.5 * (p.a + m)), p.fm);
    let right = Panel::new(m, p.b, p.fm, f(0.5 * (m + p.b)), p.fb);
    let delta = left.whole + right.whole - p.whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left.whole + right.whole + delta / 15.0;
    }
    simpson_step(f, left, 0.5 * tol, depth - 1) + simpson_step(f, right, 0.5 * tol, depth - 1)
}

pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let panel = Panel::new(a, b, f(a), f(0.5 * (a + b)), f(b));
    simpson_step(&f, panel, tol, 40)
}

/// `∫_0^∞ w_{m,n}(r, 0) r dr`, truncated at `r = 12`.
pub fn radial_oracle(m: usize, n: usize) -> f64 {
    let (m, n) = (m.min(n), m.max(n));
    // split at 1 so the first Simpson panel resolves the bump near the origin
    adaptive_simpson(|r| wigner_on_axis(m, n, r) * r, 0.0, 1.0, 1e-14)
        + adaptive_simpson(|r| wigner_on_axis(m, n, r) * r, 1.0, 12.0, 1e-14)
}

pub fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_osc-positivity")
}

pub fn run_cli(args: &[&str]) -> Output {
    Command::new(binary())
        .args(args)
        .output()
        .expect("binary runs")
}

pub fn scratch_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("osc-positivity-{name}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).expect("temp dir");
    dir
}

/// Rows of a CSV with a header line, parsed as floats.
pub fn parse_csv(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines
        .next()
        .expect("header")
        .split(',')
        .map(str::to_owned)
        .collect();
    let rows = lines
        .filter(|l| !l.is_empty())
        .map(|l| l.split(',').map(|x| x.parse().expect("float")).collect())
        .collect();
    (header, rows)
}
