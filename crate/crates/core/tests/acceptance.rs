//! Acceptance suite. Runs every criterion in order and prints one
//! `[PASS]`/`[FAIL]` line each; exits non-zero if any fails.
//!
//! `cargo test -p scurve --test acceptance`

use std::panic;
use std::process::ExitCode;
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use scurve::data::{
    auto_histogram, build_ecdf, bundled_iris, gen_erf_target, gen_sigmoid_target, linspace,
    select_inflections_mode, select_inflections_slope, EmpiricalCdf, HistogramSpec, Strategy,
    TargetTable,
};
use scurve::fit::{self, fit, fit_samples, FitConfig, FitReport};
use scurve::kernel::{
    eval_scurve, eval_scurve_derivative, eval_superposition_derivative, Component, SCurveParams,
    Superposition, A_LOWER_BOUND,
};
use scurve::measures::{self, max_slope, nonlinearity_percent, padded_interval, ratio_measure};

mod tol {
    //! Thresholds, copied from the acceptance criteria.
    pub const CUBIC_RESIDUAL: f64 = 1e-9;
    pub const CUBIC_SAMPLES: usize = 100_000;
    pub const UNIFORM_LIMIT: f64 = 1e-6;
    pub const DERIVATIVE_FD: f64 = 1e-6;
    pub const DERIVATIVE_FLOOR: f64 = 1e-8;
    pub const SIGMOID_PEAK: f64 = 0.02;
    pub const ERF_PEAK: f64 = 0.03;
    pub const IRIS_M: f64 = 0.05;
    pub const IRIS_A: f64 = 0.15;
    pub const IRIS_MULTI_MIN_OK: usize = 9;
    pub const PUBLISHED_MEASURES: f64 = 0.01;
    pub const GRID_ORACLE: f64 = 1e-6;
    pub const MASS_SUM: f64 = 1e-12;
}

static VERDICTS: Mutex<Vec<(String, bool)>> = Mutex::new(Vec::new());

fn verdict(id: &str, what: &str, pass: bool, detail: impl AsRef<str>) {
    println!(
        "[{}] {id}: {what} -- {}",
        if pass { "PASS" } else { "FAIL" },
        detail.as_ref()
    );
    VERDICTS.lock().unwrap().push((id.to_string(), pass));
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

fn c01_cubic_residual() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst = 0.0f64;
    for _ in 0..tol::CUBIC_SAMPLES {
        let a = log_uniform(&mut rng, A_LOWER_BOUND, 1e6);
        let m = rng.gen_range(-1e3..1e3);
        let x_c = rng.gen_range(-10.0..10.0);
        let y_c = rng.gen_range(-10.0..10.0);
        // Spread |x - x_c| over many decades up to 1e6.
        let dx = log_uniform(&mut rng, 1e-12, 1e6) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let x = x_c + dx;
        let p = SCurveParams::new(a, m, x_c, y_c).unwrap();
        let u = eval_scurve(&p, x).unwrap() - y_c;
        let z = m * (x - x_c);
        let res = (a * u * u * u + u - z).abs() / (1.0 + z.abs());
        worst = worst.max(res);
    }
    verdict(
        "C1",
        "cubic residual over 1e5 random evaluations",
        worst <= tol::CUBIC_RESIDUAL,
        format!(
            "worst scaled residual {worst:.3e} (limit {:.0e})",
            tol::CUBIC_RESIDUAL
        ),
    );
}

fn c02_uniform_limit() {
    let mut worst = 0.0f64;
    for m in [0.5, 1.0, 3.0] {
        let (x_c, y_c) = (0.7, 0.2);
        let p = SCurveParams::new(A_LOWER_BOUND, m, x_c, y_c).unwrap();
        let half = 10.0 / m;
        for x in linspace(x_c - half, x_c + half, 2001) {
            let y = eval_scurve(&p, x).unwrap();
            worst = worst.max((y - (m * (x - x_c) + y_c)).abs());
        }
    }
    verdict(
        "C2",
        "a = 1e-9 recovers the straight line for |m(x - x_c)| <= 10",
        worst <= tol::UNIFORM_LIMIT,
        format!("max deviation {worst:.3e}"),
    );
}

fn c03_derivative_vs_central_differences() {
    // Parameter ranges where a central difference with h = 1e-5 max(1,|x|)
    // is itself accurate to better than the tolerance.
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let mut checked = 0usize;
    for _ in 0..20_000 {
        let a = log_uniform(&mut rng, A_LOWER_BOUND, 10.0);
        let m = rng.gen_range(0.05..3.0) * if rng.gen::<bool>() { 1.0 } else { -1.0 };
        let x_c = rng.gen_range(-2.0..2.0);
        let y_c = rng.gen_range(-1.0..1.0);
        let x = x_c + rng.gen_range(-4.0..4.0);
        let p = SCurveParams::new(a, m, x_c, y_c).unwrap();
        let d = eval_scurve_derivative(&p, x).unwrap();
        if d.abs() <= tol::DERIVATIVE_FLOOR {
            continue;
        }
        let h = 1e-5 * x.abs().max(1.0);
        let fd = (eval_scurve(&p, x + h).unwrap() - eval_scurve(&p, x - h).unwrap()) / (2.0 * h);
        worst = worst.max((fd - d).abs() / d.abs());
        checked += 1;
    }
    verdict(
        "C3",
        "kernel derivative vs central finite differences",
        worst <= tol::DERIVATIVE_FD && checked > 10_000,
        format!("worst relative error {worst:.3e} over {checked} points"),
    );
}

fn constant_init(n: usize) -> FitConfig {
    FitConfig {
        n,
        init_m: Some(vec![1.0]),
        init_p: Some(vec![1.0]),
        ..FitConfig::default()
    }
}

fn fit_target(t: &TargetTable, n: usize) -> FitReport {
    let infl = select_inflections_slope(t, n).unwrap();
    fit(t, &infl, &constant_init(n)).unwrap()
}

fn c04_sigmoid_peak_slope() {
    let t = gen_sigmoid_target((-5.0, 5.0), 101).unwrap();
    let rep = fit_target(&t, 4);
    let m = rep.measures.m_max;
    let rel = (m - 0.25).abs() / 0.25;
    verdict(
        "C4",
        "sigmoid on [-5,5], n = 4: peak slope within 2% of 1/4",
        rel <= tol::SIGMOID_PEAK,
        format!(
            "m = {m:.6} (rel err {rel:.3e}), a = {:.4e}, sse = {:.3e}",
            rep.params.a, rep.sse
        ),
    );
}

fn c05_erf_peak_slope() {
    let t = gen_erf_target((-3.0, 3.0), 101).unwrap();
    let rep = fit_target(&t, 4);
    let want = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
    let m = rep.measures.m_max;
    let rel = (m - want).abs() / want;
    verdict(
        "C5",
        "normal CDF on [-3,3], n = 4: peak slope within 3% of 1/sqrt(2 pi)",
        rel <= tol::ERF_PEAK,
        format!(
            "m = {m:.6} (rel err {rel:.3e}), a = {:.4e}, sse = {:.3e}",
            rep.params.a, rep.sse
        ),
    );
}

fn c06_sse_decreases_with_n() {
    let t = gen_sigmoid_target((-5.0, 5.0), 101).unwrap();
    let sse: Vec<f64> = [1, 2, 4].iter().map(|&n| fit_target(&t, n).sse).collect();
    verdict(
        "C6",
        "sigmoid SSE(n=4) <= SSE(n=2) <= SSE(n=1)",
        sse[2] <= sse[1] && sse[1] <= sse[0],
        format!(
            "SSE n=1 {:.4e}, n=2 {:.4e}, n=4 {:.4e}",
            sse[0], sse[1], sse[2]
        ),
    );
}

/// Published single-curve fits: (a, m, x_c, y_c), in the column order of the
/// bundled data (attribute-major, then setosa, versicolor, virginica).
const PUBLISHED_N1: [(f64, f64, f64, f64); 12] = [
    (1.519780, 1.086830, 5.1, 0.72),
    (2.295256, 0.772745, 5.7, 0.42),
    (4.896959, 0.901669, 6.3, 0.38),
    (11.216869, 1.789357, 3.4, 0.58),
    (0.257162, 1.068846, 3.0, 0.84),
    (9.462835, 2.127825, 3.0, 0.66),
    (2.109128, 2.470337, 1.5, 0.74),
    (1.264663, 0.866053, 4.5, 0.72),
    (1.495541, 0.694955, 5.1, 0.32),
    (3664.935912, 529.168336, 0.2, 0.68),
    (11.989745, 3.591652, 1.3, 0.56),
    (0.124025, 1.043516, 1.8, 0.32),
];

fn iris_n1() -> Vec<(String, EmpiricalCdf, FitReport)> {
    bundled_iris()
        .iter()
        .map(|col| {
            let fitted =
                fit_samples(col, Strategy::ModeFrequency, &FitConfig::default(), &[]).unwrap();
            (
                format!("{}/{}", col.label, col.group),
                fitted.cdf,
                fitted.report,
            )
        })
        .collect()
}

fn c07a_iris_single_curve_parameters() {
    let mut lines = Vec::new();
    let mut all = true;
    for ((name, _, rep), &(a, m, x_c, y_c)) in iris_n1().iter().zip(&PUBLISHED_N1) {
        let c = rep.params.components[0];
        assert!(
            (c.x_c - x_c).abs() < 1e-12 && (c.y_c - y_c).abs() < 1e-12,
            "{name}: inflection"
        );
        let rel_m = (c.slope - m).abs() / m;
        let rel_a = (rep.params.a - a).abs() / a;
        let ok = rel_m <= tol::IRIS_M && rel_a <= tol::IRIS_A;
        all &= ok;
        lines.push(format!(
            "{name}: a {:.6} vs {a} ({rel_a:.1e}), m {:.6} vs {m} ({rel_m:.1e}){}",
            rep.params.a,
            c.slope,
            if ok { "" } else { "  <-- outside tolerance" }
        ));
    }
    println!("{}", lines.join("\n"));
    verdict(
        "C7a",
        "iris n = 1: m within 5% and a within 15% of the published tables",
        all,
        format!(
            "{} of 12 within tolerance",
            lines.iter().filter(|l| !l.contains("<--")).count()
        ),
    );
}

fn c07b_iris_oracle_dominance() {
    let mut worse = Vec::new();
    for ((name, cdf, rep), &(a, m, x_c, y_c)) in iris_n1().iter().zip(&PUBLISHED_N1) {
        let published = Superposition::single(SCurveParams::new(a, m, x_c, y_c).unwrap());
        let sse_pub = fit::sse(&published, cdf).unwrap();
        if rep.sse > sse_pub {
            worse.push(format!("{name}: {:.15e} > {sse_pub:.15e}", rep.sse));
        }
    }
    verdict(
        "C7b",
        "iris n = 1: final SSE <= SSE at published parameters",
        worse.is_empty(),
        if worse.is_empty() {
            "12 of 12".to_string()
        } else {
            worse.join("; ")
        },
    );
}

/// Component counts and initial slopes of the published multi-curve fits.
fn multi_config(attribute: &str) -> FitConfig {
    let (n, m0) = match attribute {
        "sepal_length" => (3, 1.0),
        "petal_width" => (2, -1.0),
        _ => (3, -1.0),
    };
    FitConfig {
        n,
        init_m: Some(vec![m0]),
        init_p: Some(vec![1.0]),
        max_iterations: 20_000,
        ..FitConfig::default()
    }
}

fn c07c_iris_multi_curve() {
    let singles = iris_n1();
    let mut ok = 0;
    let mut lines = Vec::new();
    for (col, (name, _, single)) in bundled_iris().iter().zip(&singles) {
        let cfg = multi_config(&col.label);
        let rep = fit_samples(col, Strategy::ModeFrequency, &cfg, &[])
            .unwrap()
            .report;
        let good = rep.converged && rep.sse <= single.sse;
        ok += good as usize;
        lines.push(format!(
            "{name}: n={} converged={} ({:?}, {} it) sse {:.4e} vs n=1 {:.4e}",
            cfg.n, rep.converged, rep.termination, rep.iterations, rep.sse, single.sse
        ));
    }
    println!("{}", lines.join("\n"));
    verdict(
        "C7c",
        "iris n > 1: converged with SSE <= single-curve SSE on at least 9 of 12",
        ok >= tol::IRIS_MULTI_MIN_OK,
        format!("{ok} of 12"),
    );
}

fn c08_measures_from_published_parameters() {
    let sup = Superposition::new(
        1.496536,
        vec![
            Component::new(-0.136528, 0.757782, 5.4, 0.9),
            Component::new(0.808445, 2.722941, 5.0, 0.56),
            Component::new(-0.171879, 4.248980, 5.1, 0.72),
        ],
    )
    .unwrap();
    let cdf = build_ecdf(&bundled_iris()[0]).unwrap();
    let (m, _) = max_slope(&sup, fit::measure_interval(&cdf)).unwrap();
    let nl = nonlinearity_percent(&sup, m).unwrap();
    let rel_m = (m - 1.679906).abs() / 1.679906;
    let rel_nl = (nl - 18.591877).abs() / 18.591877;
    verdict(
        "C8",
        "published setosa sepal-length n = 3 parameters give m and NL within 1%",
        rel_m <= tol::PUBLISHED_MEASURES && rel_nl <= tol::PUBLISHED_MEASURES,
        format!("m = {m:.6} ({rel_m:.1e}), NL = {nl:.6} ({rel_nl:.1e})"),
    );
}

fn c09_petal_width_zero_point() {
    let col = &bundled_iris()[9];
    assert_eq!(
        (col.label.as_str(), col.group.as_str()),
        ("petal_width", "Iris-setosa")
    );
    let cfg = FitConfig {
        n: 2,
        init_m: Some(vec![1.0]),
        init_p: Some(vec![1.0]),
        ..FitConfig::default()
    };
    let fitted = fit_samples(col, Strategy::ModeFrequency, &cfg, &[0.15]).unwrap();
    let x = fitted.report.measures.argmax_x;
    verdict(
        "C9",
        "setosa petal width with a zero-frequency point at 0.15: density peak in [0.15, 0.25]",
        (0.15..=0.25).contains(&x) && fitted.report.measures.m_bar.is_some(),
        format!(
            "argmax {x:.6}, m_bar {:?}, sse {:.4e}, converged {}",
            fitted.report.measures.m_bar, fitted.report.sse, fitted.report.converged
        ),
    );
}

fn c10_property_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut failures: Vec<String> = Vec::new();

    // ECDF permutation invariance and terminal value.
    for _ in 0..200 {
        let len = rng.gen_range(1..60);
        let mut v: Vec<f64> = (0..len)
            .map(|_| (rng.gen_range(0..25) as f64) * 0.1)
            .collect();
        let a = EmpiricalCdf::from_values(&v).unwrap();
        for i in (1..v.len()).rev() {
            let j = rng.gen_range(0..=i);
            v.swap(i, j);
        }
        let b = EmpiricalCdf::from_values(&v).unwrap();
        if a != b {
            failures.push("ECDF not permutation invariant".into());
        }
        if *a.fractions.last().unwrap() != 1.0 || a.fractions.windows(2).any(|w| w[0] >= w[1]) {
            failures.push("ECDF fractions not strictly increasing to 1".into());
        }
    }

    // Mode selection prefix property.
    for col in bundled_iris() {
        let cdf = build_ecdf(&col).unwrap();
        for k in 1..cdf.xs.len() {
            let small = select_inflections_mode(&cdf, k).unwrap().points;
            let big = select_inflections_mode(&cdf, k + 1).unwrap().points;
            if big[..k] != small[..] {
                failures.push(format!("mode prefix broken for {} k={k}", col.label));
            }
        }
    }

    // Histogram masses.
    for col in bundled_iris() {
        let h = auto_histogram(&col).unwrap();
        let s: f64 = h.masses.iter().sum();
        if (s - 1.0).abs() > tol::MASS_SUM || h.masses.iter().any(|m| *m < 0.0) {
            failures.push(format!("histogram masses of {} sum to {s}", col.label));
        }
    }

    // NL vanishes with nonlinearity switched off; ratio falls with a.
    for _ in 0..50 {
        let n = rng.gen_range(1..5);
        let comps: Vec<Component> = (0..n)
            .map(|i| {
                Component::new(
                    rng.gen_range(0.1..2.0),
                    rng.gen_range(0.1..3.0),
                    i as f64,
                    0.1 * i as f64,
                )
            })
            .collect();
        let sup = Superposition::new(A_LOWER_BOUND, comps).unwrap();
        let (m, _) = max_slope(&sup, (-1.0, n as f64)).unwrap();
        let nl = nonlinearity_percent(&sup, m).unwrap();
        if nl > 1e-5 {
            failures.push(format!("NL {nl:e} at a lower bound"));
        }
        let mm = rng.gen_range(0.1..5.0);
        let a1 = log_uniform(&mut rng, 1e-9, 1e3);
        let a2 = a1 * rng.gen_range(1.01..10.0);
        if ratio_measure(a2, mm) >= ratio_measure(a1, mm) {
            failures.push("ratio not decreasing in a".into());
        }
    }

    // max_slope against a 1e6-point brute-force grid.
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let n = rng.gen_range(2..5);
        let comps: Vec<Component> = (0..n)
            .map(|_| {
                Component::new(
                    rng.gen_range(0.2..1.5),
                    rng.gen_range(0.3..2.0),
                    rng.gen_range(-2.0..2.0),
                    rng.gen_range(0.0..1.0),
                )
            })
            .collect();
        let sup = Superposition::new(log_uniform(&mut rng, 1e-2, 10.0), comps).unwrap();
        let interval = padded_interval(-3.0, 3.0);
        let (m, _) = max_slope(&sup, interval).unwrap();
        let grid = linspace(interval.0, interval.1, 1_000_000);
        let brute = sup
            .derivative_many(&grid)
            .unwrap()
            .into_iter()
            .fold(f64::NEG_INFINITY, f64::max);
        worst = worst.max((m - brute).abs() / brute.abs());
    }
    if worst > tol::GRID_ORACLE {
        failures.push(format!("max_slope vs brute force rel err {worst:e}"));
    }

    // Normalized peak is a positive rescaling of the raw derivative.
    let sup = Superposition::new(
        0.5,
        vec![
            Component::new(0.7, 1.0, 0.0, 0.3),
            Component::new(0.3, 2.0, 1.0, 0.8),
        ],
    )
    .unwrap();
    let hist = HistogramSpec {
        edges: linspace(-2.0, 3.0, 8),
        masses: vec![1.0 / 7.0; 7],
    };
    let (m, _) = max_slope(&sup, padded_interval(-2.0, 3.0)).unwrap();
    let denom: f64 = hist
        .edges
        .iter()
        .map(|&e| eval_superposition_derivative(&sup, e).unwrap())
        .sum();
    let mb = measures::normalized_peak(&sup, &hist).unwrap();
    if (mb - m / denom).abs() > 1e-12 {
        failures.push("normalized peak is not peak / edge sum".into());
    }

    verdict(
        "C10",
        "data-prep and measure properties",
        failures.is_empty(),
        if failures.is_empty() {
            format!("all hold; max_slope vs 1e6-point grid worst rel err {worst:.2e}")
        } else {
            failures.join("; ")
        },
    );
}

fn main() -> ExitCode {
    let criteria: [(&str, fn()); 12] = [
        ("C1", c01_cubic_residual),
        ("C2", c02_uniform_limit),
        ("C3", c03_derivative_vs_central_differences),
        ("C4", c04_sigmoid_peak_slope),
        ("C5", c05_erf_peak_slope),
        ("C6", c06_sse_decreases_with_n),
        ("C7a", c07a_iris_single_curve_parameters),
        ("C7b", c07b_iris_oracle_dominance),
        ("C7c", c07c_iris_multi_curve),
        ("C8", c08_measures_from_published_parameters),
        ("C9", c09_petal_width_zero_point),
        ("C10", c10_property_suite),
    ];
    let mut failed = Vec::new();
    for (id, run) in criteria {
        let before = VERDICTS.lock().unwrap().len();
        let outcome = panic::catch_unwind(run);
        let verdicts = VERDICTS.lock().unwrap();
        match outcome {
            Ok(()) if verdicts[before..].iter().all(|(_, ok)| *ok) => {}
            Ok(()) => failed.push(id),
            Err(_) => {
                println!("[FAIL] {id}: panicked before reaching a verdict");
                failed.push(id);
            }
        }
    }
    println!(
        "\nacceptance: {} of {} criteria passed{}",
        criteria.len() - failed.len(),
        criteria.len(),
        if failed.is_empty() {
            String::new()
        } else {
            format!("; failing: {}", failed.join(", "))
        }
    );
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
