//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

mod common;

use std::f64::consts::PI;
use std::fs;
use std::time::Instant;

use num_complex::Complex64;
use osc_positivity::operator::{arc_fourier, assemble_matrix, symmetric_fourier};
use osc_positivity::special::sine_integral;
use osc_positivity::spectral::extremal_eigs;
use osc_positivity::weyl::{hs_norm_integral, TailModel, DEFAULT_HS_RADIUS, DEFAULT_HS_TOLERANCE};
use osc_positivity::wigner::{
    angular_coeff_contour_default, angular_coeff_genfun, angular_coeff_sum, ModePair,
};
use osc_positivity::{AngularCoefficientTable, InstantTriple};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::{parse_csv, radial_oracle, run_cli, scratch_dir, ANCHORS};

type Outcome = Result<String, String>;

const TABLE_SIZES: [usize; 5] = [25, 50, 100, 200, 300];
const PUBLISHED: [f64; 5] = [0.6961, 0.6997, 0.7025, 0.7045, 0.7054];

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn cli_ok(args: &[&str]) -> Result<String, String> {
    let out = run_cli(args);
    if !out.status.success() {
        return Err(format!(
            "{args:?} exited with {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    String::from_utf8(out.stdout).map_err(|e| e.to_string())
}

/// Rows `(n, λ_min, λ_max)` of the convergence table, produced by the binary.
fn convergence_rows() -> Result<(Vec<[f64; 3]>, f64), String> {
    let path = scratch_dir("acceptance").join("convergence.csv");
    let sizes = TABLE_SIZES.map(|n| n.to_string()).join(",");
    let start = Instant::now();
    cli_ok(&[
        "table",
        "--sizes",
        &sizes,
        "--output",
        path.to_str().unwrap(),
    ])?;
    let secs = start.elapsed().as_secs_f64();
    let text = fs::read_to_string(&path).map_err(|e| e.to_string())?;
    let (header, rows) = parse_csv(&text);
    if header != ["n", "lambda_min", "lambda_max"] {
        return Err(format!("unexpected header {header:?}"));
    }
    Ok((rows.into_iter().map(|r| [r[0], r[1], r[2]]).collect(), secs))
}

fn table_reproduction(rows: &[[f64; 3]], secs: f64) -> Outcome {
    if rows.len() != PUBLISHED.len() {
        return Err(format!("{} rows", rows.len()));
    }
    let mut worst: f64 = 0.0;
    for (row, (&n, &published)) in rows.iter().zip(TABLE_SIZES.iter().zip(&PUBLISHED)) {
        if row[0] != n as f64 {
            return Err(format!("row for n = {} where {n} expected", row[0]));
        }
        worst = worst.max((row[2] - published).abs());
    }
    let values: Vec<String> = rows.iter().map(|r| format!("{:.6}", r[2])).collect();
    ensure(
        worst <= 2e-4 && secs < 300.0,
        format!(
            "λ_max = [{}], max |Δ| = {worst:.2e}, {secs:.1} s",
            values.join(", ")
        ),
    )
}

fn spectrum_symmetry(rows: &[[f64; 3]]) -> Outcome {
    let worst = rows
        .iter()
        .map(|r| (r[1] - (1.0 - r[2])).abs())
        .fold(0.0, f64::max);
    ensure(
        worst <= 1e-9,
        format!("max |λ_min - (1 - λ_max)| = {worst:.2e}"),
    )
}

fn monotonicity(rows: &[[f64; 3]]) -> Outcome {
    let worst = rows
        .windows(2)
        .map(|w| w[0][2] - w[1][2])
        .fold(f64::NEG_INFINITY, f64::max);
    ensure(
        worst <= 1e-10,
        format!("max decrease {:.2e}", worst.max(0.0)),
    )
}

fn classical_violation(rows: &[[f64; 3]]) -> Outcome {
    let top = rows.last().map(|r| r[2]).unwrap_or(f64::NAN);
    ensure(
        top > 2.0 / 3.0 + 0.03,
        format!(
            "λ_max(300) = {top:.6} vs 2/3 + 0.03 = {:.6}",
            2.0 / 3.0 + 0.03
        ),
    )
}

fn oracle_triangle() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 0..=40 {
        for m in 0..=n {
            let pair = ModePair::new(m, n);
            let vals = [
                angular_coeff_sum(pair),
                angular_coeff_genfun(pair),
                angular_coeff_contour_default(pair),
            ];
            let vals: Vec<f64> = vals
                .into_iter()
                .collect::<Result<_, _>>()
                .map_err(|e| format!("({m},{n}): {e}"))?;
            let scale = vals.iter().map(|v| v.abs()).fold(0.0, f64::max);
            for i in 0..3 {
                for j in i + 1..3 {
                    let diff = (vals[i] - vals[j]).abs();
                    if diff > 0.0 {
                        worst = worst.max(diff / scale);
                    }
                }
            }
        }
    }
    let mut anchor_worst: f64 = 0.0;
    for (m, n, reference) in ANCHORS {
        let oracle = radial_oracle(m, n);
        if (oracle - reference).abs() > 1e-10 {
            return Err(format!(
                "radial oracle ({m},{n}) = {oracle} disagrees with {reference}"
            ));
        }
        let pair = ModePair::new(m, n);
        for v in [
            angular_coeff_sum(pair),
            angular_coeff_genfun(pair),
            angular_coeff_contour_default(pair),
        ] {
            let v = v.map_err(|e| e.to_string())?;
            anchor_worst = anchor_worst.max((v - oracle).abs());
        }
    }
    ensure(
        worst <= 1e-8 && anchor_worst <= 1e-8,
        format!("pairwise relative {worst:.2e} on m ≤ n ≤ 40; anchors vs radial quadrature {anchor_worst:.2e}"),
    )
}

fn diagonal_law(table: &AngularCoefficientTable) -> Outcome {
    let worst = (0..=300)
        .map(|n| (2.0 * PI * table.get(n, n) - 1.0).abs())
        .fold(0.0, f64::max);
    ensure(
        worst <= 1e-10,
        format!("max |2π w_nn - 1| = {worst:.2e} for n ≤ 300"),
    )
}

fn fourier_cross_check() -> Outcome {
    let times = InstantTriple::symmetric().times();
    let worst = (-400i64..=400)
        .map(|k| {
            let sum: Complex64 = times.iter().map(|&tau| arc_fourier(k, tau)).sum();
            (sum - symmetric_fourier(k)).norm()
        })
        .fold(0.0, f64::max);
    ensure(
        worst <= 1e-12,
        format!("max deviation {worst:.2e} for |k| ≤ 400"),
    )
}

fn si_inequalities() -> Outcome {
    let points = 4001;
    let mut tail_excess = f64::NEG_INFINITY;
    for i in 0..points {
        let x = 10f64.powf(-1.0 + 7.0 * i as f64 / (points - 1) as f64);
        tail_excess = tail_excess.max((sine_integral(x) - PI / 2.0).abs() - 2.0 / x);
    }
    let mut rng = StdRng::seed_from_u64(0x5151);
    let mut lipschitz: f64 = 0.0;
    for i in 0..10_000 {
        let x: f64 = rng.random_range(-1e3..1e3);
        let h: f64 = if i % 2 == 0 {
            rng.random_range(-1e-3..1e-3)
        } else {
            rng.random_range(-50.0..50.0)
        };
        let y = x + h;
        if x != y {
            lipschitz = lipschitz.max((sine_integral(x) - sine_integral(y)).abs() / (x - y).abs());
        }
    }
    ensure(
        tail_excess <= 0.0 && lipschitz <= 1.0 + 1e-12,
        format!(
            "max(|Si - π/2| - 2/x) = {tail_excess:.2e} on {points} points; max slope {lipschitz:.12}"
        ),
    )
}

fn asymptotics() -> Outcome {
    let w = |m: usize, n: usize| angular_coeff_sum(ModePair::new(m, n)).map_err(|e| e.to_string());
    let mut first: f64 = 0.0;
    for k in 0..=4 {
        first = first.max((2.0 * PI * w(200, 200 + k)? - 1.0).abs());
    }
    let quarter = 2f64.powf(0.25);
    let even = 2.0 * PI * w(120, 240)? / quarter - 1.0;
    let odd = 2.0 * PI * w(121, 242)? * quarter - 1.0;
    let ratio0 = w(0, 512)? / w(0, 256)?;
    let ratio1 = w(1, 512)? / w(1, 256)?;
    let growth0 = ratio0 / quarter - 1.0;
    let growth1 = ratio1 / quarter - 1.0;
    let detail = format!(
        "|2π w_{{200,200+k}} - 1| ≤ {first:.3e}; c = 1/2 relative error even {even:+.3e}, odd {odd:+.3e}; \
         w_{{m,512}}/w_{{m,256}} = {ratio0:.6} (m = 0), {ratio1:.6} (m = 1) vs 2^(1/4) = {quarter:.6}"
    );
    ensure(
        first <= 0.05
            && even.abs() <= 0.1
            && odd.abs() <= 0.1
            && growth0.abs() <= 0.1
            && growth1.abs() <= 0.1,
        detail,
    )
}

fn weyl_stability() -> Outcome {
    let sym = InstantTriple::symmetric();
    let r = DEFAULT_HS_RADIUS;
    let base = hs_norm_integral(sym, r, DEFAULT_HS_TOLERANCE).map_err(|e| e.to_string())?;
    let doubled =
        hs_norm_integral(sym, 2.0 * r, DEFAULT_HS_TOLERANCE).map_err(|e| e.to_string())?;
    let change = (doubled.value - base.value).abs() / base.value;
    let model = TailModel::new(sym).map_err(|e| e.to_string())?;
    let radii = [r / 8.0, r / 4.0, r / 2.0, r, 2.0 * r, 4.0 * r];
    let bounds: Vec<f64> = radii.iter().map(|&x| model.tail_bound(x)).collect();
    let monotone = bounds.windows(2).all(|w| w[1] < w[0]) && doubled.tail_bound < base.tail_bound;
    ensure(
        base.value.is_finite() && base.value > 0.0 && change < 0.01 && monotone,
        format!(
            "value {:.6} at R = {r}, {:.6} at R = {}, change {:.3}%; tail bound {:.3} → {:.3}",
            base.value,
            doubled.value,
            2.0 * r,
            100.0 * change,
            base.tail_bound,
            doubled.tail_bound
        ),
    )
}

fn sweep_sanity(table: &AngularCoefficientTable) -> Outcome {
    let (header, rows) = parse_csv(&cli_ok(&["sweep", "--n", "150"])?);
    if header != ["s", "t", "lambda_max"] || rows.len() != 121 {
        return Err(format!("header {header:?}, {} rows", rows.len()));
    }
    let margin = 0.05 - 1e-12;
    for r in &rows {
        let (a, b) = (PI - r[0], r[1] - PI);
        if a < margin || b < margin || PI - a - b < margin {
            return Err(format!(
                "grid point ({}, {}) outside the window",
                r[0], r[1]
            ));
        }
    }
    let max = rows.iter().map(|r| r[2]).fold(f64::NEG_INFINITY, f64::max);
    let min = rows.iter().map(|r| r[2]).fold(f64::INFINITY, f64::min);
    let sym = InstantTriple::symmetric();
    let nearest = rows
        .iter()
        .min_by(|x, y| {
            let d = |r: &Vec<f64>| (r[0] - sym.s).hypot(r[1] - sym.t);
            d(x).total_cmp(&d(y))
        })
        .expect("rows");
    let matrix = assemble_matrix(150, sym, table).map_err(|e| e.to_string())?;
    let reference = extremal_eigs(&matrix)
        .map_err(|e| e.to_string())?
        .lambda_max;
    let diff = (nearest[2] - reference).abs();
    ensure(
        max < 1.0 && min >= 0.5 && diff <= 1e-6,
        format!("λ_max ∈ [{min:.6}, {max:.6}] over 121 points; symmetric point off by {diff:.2e}"),
    )
}

fn determinism() -> Outcome {
    let dir = scratch_dir("determinism");
    let file = |name: &str| dir.join(name).to_str().unwrap().to_owned();
    let runs: Vec<Vec<String>> = vec![
        vec![
            "table".into(),
            "--sizes".into(),
            "10,20,40".into(),
            "--output".into(),
            file("t.csv"),
        ],
        vec![
            "table".into(),
            "--sizes".into(),
            "10,20".into(),
            "--format".into(),
            "json".into(),
            "--output".into(),
            file("t.json"),
        ],
        vec!["spectrum".into(), "--n".into(), "40".into()],
        vec![
            "spectrum".into(),
            "--n".into(),
            "30".into(),
            "--s".into(),
            "2.4".into(),
            "--t".into(),
            "4.0".into(),
        ],
        vec![
            "angular".into(),
            "--n".into(),
            "40".into(),
            "--resolution".into(),
            "90".into(),
            "--output".into(),
            file("a.csv"),
        ],
        vec![
            "sweep".into(),
            "--n".into(),
            "30".into(),
            "--resolution".into(),
            "5".into(),
        ],
        vec!["weyl-norm".into(), "--sizes".into(), "20,40".into()],
        vec!["selfcheck".into()],
    ];
    let mut compared = 0;
    for args in &runs {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let mut outputs = Vec::new();
        for _ in 0..2 {
            let out = run_cli(&args);
            let file_bytes = args
                .iter()
                .position(|&a| a == "--output")
                .map(|i| fs::read(args[i + 1]).unwrap_or_default());
            outputs.push((out.status.code(), out.stdout, file_bytes));
        }
        if outputs[0].0 != Some(0) {
            return Err(format!("{args:?} exited with {:?}", outputs[0].0));
        }
        if outputs[0] != outputs[1] {
            return Err(format!("{args:?} produced different output on rerun"));
        }
        compared += 1;
    }
    Ok(format!("{compared} commands byte-identical across reruns"))
}

fn main() {
    let mut results: Vec<(&str, Outcome)> = Vec::new();

    match convergence_rows() {
        Ok((rows, secs)) => {
            results.push((
                "convergence table reproduction",
                table_reproduction(&rows, secs),
            ));
            results.push(("spectrum symmetry", spectrum_symmetry(&rows)));
            results.push(("monotonicity", monotonicity(&rows)));
            results.push(("classical bound violation", classical_violation(&rows)));
        }
        Err(e) => {
            for name in [
                "convergence table reproduction",
                "spectrum symmetry",
                "monotonicity",
                "classical bound violation",
            ] {
                results.push((name, Err(e.clone())));
            }
        }
    }
    results.push(("oracle triangle", oracle_triangle()));
    let table = AngularCoefficientTable::build(301).expect("coefficient table");
    results.push(("diagonal law", diagonal_law(&table)));
    results.push(("fourier cross-check", fourier_cross_check()));
    results.push(("sine integral inequalities", si_inequalities()));
    results.push(("asymptotics", asymptotics()));
    results.push(("weyl side", weyl_stability()));
    results.push(("sweep sanity", sweep_sanity(&table)));
    results.push(("determinism", determinism()));

    let mut failed = 0;
    for (idx, (name, outcome)) in results.iter().enumerate() {
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail}", idx + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail}", idx + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
