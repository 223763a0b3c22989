//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use radial_gauss::clt::{
    angular_chi2, cf_product, exact_covariance, gaussian_cf, ks_radius, rect_frequency,
    rect_probability, run_monte_carlo, CltConfig, Normalization,
};
use radial_gauss::filter::{blur, variable_blur, Boundary, WidthMap};
use radial_gauss::kernel::{
    build_kernel, covariance_of_spec, gaussian_kernel, isotropic_widths, kernel_distance,
    widths_from_covariance, BoxSplineSpec,
};
use radial_gauss::measure::unit_box_measure;
use radial_gauss::{Covariance2, Error, ScalarGrid, Vec2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tempfile::TempDir;

const SEED: u64 = 42;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn cli(args: &[&str]) -> std::process::Output {
    let o = Command::new(env!("CARGO_BIN_EXE_radial-gauss"))
        .args(args)
        .output()
        .expect("binary runs");
    assert!(
        o.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    o
}

fn stat(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(',')))
        .unwrap_or_else(|| panic!("missing {key}"))
        .parse()
        .unwrap()
}

fn exact_covariance_reproduction() -> Outcome {
    let mut worst_cov = 0.0f64;
    let mut worst_mean = 0.0f64;
    for (name, limit) in [("sqrt-n", 0.5), ("standardized", 1.0)] {
        let seed = SEED.to_string();
        let out = cli(&[
            "sim",
            "--n",
            "10",
            "--trials",
            "100000",
            "--seed",
            &seed,
            "--normalization",
            name,
        ]);
        let text = String::from_utf8(out.stdout).unwrap();
        let dev = [
            (stat(&text, "cov_xx") - limit).abs(),
            stat(&text, "cov_xy").abs(),
            (stat(&text, "cov_yy") - limit).abs(),
        ];
        worst_cov = dev.iter().copied().fold(worst_cov, f64::max);
        worst_mean = worst_mean
            .max(stat(&text, "mean_x").abs())
            .max(stat(&text, "mean_y").abs());
    }
    outcome(
        worst_cov <= 0.01 && worst_mean <= 0.01,
        format!("max |cov - exact| = {worst_cov:.5}, max |mean| = {worst_mean:.5} (bound 0.01)"),
    )
}

fn cf_grid_error(n: usize, norm: Normalization) -> f64 {
    let m = unit_box_measure();
    let cov = exact_covariance(n, norm).unwrap();
    let mut worst = 0.0f64;
    for i in 0..11 {
        for j in 0..11 {
            let w = Vec2::new(-3.0 + 0.6 * i as f64, -3.0 + 0.6 * j as f64);
            let d = (cf_product(n, &m, w, norm).unwrap() - gaussian_cf(w, &cov)).abs();
            worst = worst.max(d);
        }
    }
    worst
}

fn cf_product_convergence() -> Outcome {
    let mut pass = true;
    let mut detail = Vec::new();
    for norm in [Normalization::SqrtN, Normalization::Standardized] {
        let (e4, e16) = (cf_grid_error(4, norm), cf_grid_error(16, norm));
        pass &= e16 < e4 && e16 <= 0.01;
        detail.push(format!("{}: n=4 {e4:.6}, n=16 {e16:.6}", norm.name()));
    }
    outcome(pass, format!("{} (n=16 bound 0.01)", detail.join("; ")))
}

fn n32_run() -> Vec<Vec2> {
    let cfg = CltConfig::new(32, 100_000, SEED, Normalization::SqrtN);
    run_monte_carlo(&cfg, &unit_box_measure())
        .unwrap()
        .samples
        .unwrap()
}

fn borel_set_limit(samples: &[Vec2]) -> Outcome {
    let p = rect_probability(1.0, &exact_covariance(32, Normalization::SqrtN).unwrap()).unwrap();
    let f = rect_frequency(samples, 1.0);
    outcome(
        (f - p).abs() <= 0.01 && (p - 0.71014).abs() < 1e-5,
        format!("frequency {f:.5} vs erf(1)^2 = {p:.5} (bound 0.01)"),
    )
}

fn goodness_of_fit(samples: &[Vec2]) -> Outcome {
    let d = ks_radius(samples, 0.5).unwrap();
    let chi = angular_chi2(samples, 16).unwrap();
    outcome(
        d <= 0.02 && chi.passes(),
        format!(
            "KS {d:.5} (bound 0.02), chi2 {:.2} over {} dof (bound {:.2})",
            chi.statistic, chi.dof, chi.threshold
        ),
    )
}

fn covariance_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let cxx: f64 = rng.random_range(0.1..10.0);
        let cyy = rng.random_range(0.1..10.0);
        let bound = cxx.min(cyy);
        let cxy = rng.random_range(-bound..=bound);
        let c = Covariance2::new(cxx, cxy, cyy).unwrap();
        let back = covariance_of_spec(&widths_from_covariance(&c).unwrap());
        worst = worst.max(back.max_abs_diff(&c));
    }
    let mut rejected = 0;
    for _ in 0..100 {
        let lo: f64 = rng.random_range(0.1..5.0);
        let hi: f64 = lo * rng.random_range(1.5..4.0);
        let (cxx, cyy) = if rng.random_bool(0.5) {
            (lo, hi)
        } else {
            (hi, lo)
        };
        let mag = rng.random_range(lo * 1.01..=(lo * hi).sqrt());
        let cxy = if rng.random_bool(0.5) { mag } else { -mag };
        let c = Covariance2::new(cxx, cxy, cyy).unwrap();
        if let Err(e @ Error::InfeasibleCovariance { .. }) = widths_from_covariance(&c) {
            if e.to_string().contains("|cxy| <= min(cxx, cyy)") {
                rejected += 1;
            }
        }
    }
    outcome(
        worst <= 1e-12 && rejected == 100,
        format!(
            "round-trip max error {worst:.2e} (bound 1e-12), {rejected}/100 infeasible rejected"
        ),
    )
}

fn kernel_error(n: usize) -> (f64, f64) {
    let spec = isotropic_widths(2.0, n).unwrap();
    let cov = covariance_of_spec(&spec);
    let k = build_kernel(&spec, 0.25, 16.0).unwrap();
    let g = gaussian_kernel(&cov, 0.25, 16.0).unwrap();
    (kernel_distance(&k, &g).unwrap().max_abs, g.peak())
}

fn kernel_fidelity() -> Outcome {
    let (e4, peak) = kernel_error(4);
    let (e8, _) = kernel_error(8);
    outcome(
        e4 <= 0.05 * peak && e8 < e4,
        format!(
            "n=4 max_abs/peak {:.4} (bound 0.05), n=8 {:.4} < n=4: {}",
            e4 / peak,
            e8 / peak,
            e8 < e4
        ),
    )
}

fn impulse_response(spec: &BoxSplineSpec) -> ScalarGrid {
    let mut img = ScalarGrid::zeros(129, 129).unwrap();
    img.set(64, 64, 1.0);
    blur(&img, spec, Boundary::Zero).unwrap()
}

fn grid_covariance(g: &ScalarGrid, c: usize) -> Covariance2 {
    let (mut m, mut xx, mut xy, mut yy) = (0.0, 0.0, 0.0, 0.0);
    for y in 0..g.height() {
        for x in 0..g.width() {
            let v = g.get(x, y);
            let (dx, dy) = (x as f64 - c as f64, y as f64 - c as f64);
            m += v;
            xx += v * dx * dx;
            xy += v * dx * dy;
            yy += v * dy * dy;
        }
    }
    Covariance2::new(xx / m, xy / m, yy / m).unwrap()
}

fn filter_oracle_agreement() -> Outcome {
    let spec = isotropic_widths(2.0, 4).unwrap();
    let response = impulse_response(&spec);
    let oracle = build_kernel(&spec, 1.0, 64.0).unwrap();
    let diff = response.max_abs_diff(&oracle.grid).unwrap();
    let peak = oracle.peak();

    let mut cov_err = 0.0f64;
    for target in [
        Covariance2::isotropic(4.0).unwrap(),
        Covariance2::new(3.0, 1.0, 5.0).unwrap(),
    ] {
        let s = widths_from_covariance(&target).unwrap();
        let c = grid_covariance(&impulse_response(&s), 64);
        cov_err = cov_err.max(c.max_abs_diff(&covariance_of_spec(&s)));
    }
    outcome(
        diff <= 0.02 * peak && cov_err <= 1e-6,
        format!(
            "max |impulse - oracle|/peak {:.4} (bound 0.02), covariance error {cov_err:.2e} (bound 1e-6)",
            diff / peak
        ),
    )
}

fn space_variant_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let img = ScalarGrid::from_fn(256, 256, |_, _| rng.random::<f64>()).unwrap();
    let mut worst = 0.0f64;
    for spec in [
        isotropic_widths(2.0, 4).unwrap(),
        widths_from_covariance(&Covariance2::new(6.0, -2.5, 9.0).unwrap()).unwrap(),
    ] {
        let maps = WidthMap::constant(256, 256, &spec).unwrap();
        for boundary in [Boundary::Replicate, Boundary::Reflect] {
            let a = blur(&img, &spec, boundary).unwrap();
            let b = variable_blur(&img, &maps, boundary).unwrap();
            let rel = a.max_abs_diff(&b).unwrap()
                / a.as_slice().iter().fold(0.0f64, |m, v| m.max(v.abs()));
            worst = worst.max(rel);
        }
    }
    outcome(
        worst <= 1e-6,
        format!("max relative difference {worst:.2e} (bound 1e-6)"),
    )
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

fn constant_time() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let img = ScalarGrid::from_fn(512, 512, |_, _| rng.random::<f64>()).unwrap();
    let small = isotropic_widths(2.0, 4).unwrap();
    let large = isotropic_widths(20.0, 4).unwrap();
    let time = |spec: &BoxSplineSpec| {
        let start = Instant::now();
        std::hint::black_box(blur(&img, spec, Boundary::Replicate).unwrap());
        start.elapsed().as_secs_f64()
    };
    time(&small);
    time(&large);
    // Interleaved so drift in machine load hits both sizes alike.
    let (mut ts, mut tl) = (Vec::new(), Vec::new());
    for _ in 0..5 {
        ts.push(time(&small));
        tl.push(time(&large));
    }
    let (ms, ml) = (median(ts), median(tl));
    outcome(
        ml <= 1.25 * ms,
        format!(
            "median sigma=2 {:.2} ms, sigma=20 {:.2} ms, ratio {:.3} (bound 1.25)",
            ms * 1e3,
            ml * 1e3,
            ml / ms
        ),
    )
}

fn determinism() -> Outcome {
    let dir = TempDir::new().unwrap();
    let p = |name: &str| dir.path().join(name).to_str().unwrap().to_owned();
    let mut identical = true;
    let mut compared = 0;
    for tag in ["a", "b"] {
        cli(&[
            "sim",
            "--n",
            "10",
            "--trials",
            "20000",
            "--seed",
            "7",
            "--out",
            &p(&format!("stats_{tag}.csv")),
            "--samples-out",
            &p(&format!("samples_{tag}.csv")),
        ]);
        cli(&[
            "density",
            "--n",
            "10",
            "--trials",
            "20000",
            "--seed",
            "7",
            "--bins",
            "25",
            "--out",
            &p(&format!("grid_{tag}.csv")),
        ]);
        cli(&[
            "kernel",
            "--sigma",
            "2",
            "--n",
            "4",
            "--compare-gaussian",
            "--out",
            &p(&format!("kernel_{tag}.csv")),
        ]);
    }
    for stem in [
        "stats",
        "samples",
        "grid",
        "kernel",
        "kernel_gaussian",
        "kernel_distance",
    ] {
        let (a, b) = if stem.starts_with("kernel_") {
            let suffix = stem.trim_start_matches("kernel");
            (
                p(&format!("kernel_a{suffix}.csv")),
                p(&format!("kernel_b{suffix}.csv")),
            )
        } else {
            (p(&format!("{stem}_a.csv")), p(&format!("{stem}_b.csv")))
        };
        identical &= std::fs::read(a).unwrap() == std::fs::read(b).unwrap();
        compared += 1;
    }
    outcome(
        identical,
        format!("{compared} file pairs byte-identical: {identical}"),
    )
}

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn main() -> ExitCode {
    let samples = n32_run();
    let criteria: Vec<Criterion> = vec![
        (
            "1 exact-covariance reproduction",
            Box::new(exact_covariance_reproduction),
        ),
        ("2 cf-product convergence", Box::new(cf_product_convergence)),
        ("3 borel-set limit", Box::new(|| borel_set_limit(&samples))),
        ("4 goodness of fit", Box::new(|| goodness_of_fit(&samples))),
        ("5 covariance round trip", Box::new(covariance_round_trip)),
        ("6 kernel fidelity", Box::new(kernel_fidelity)),
        (
            "7 filter/oracle agreement",
            Box::new(filter_oracle_agreement),
        ),
        (
            "8 space-variant equivalence",
            Box::new(space_variant_equivalence),
        ),
        ("9 constant-time property", Box::new(constant_time)),
        ("10 determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let o = check();
        failed += usize::from(!o.pass);
        println!(
            "{} criterion {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
