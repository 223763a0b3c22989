use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use radial_gauss::clt::{
    angular_chi2, empirical_density, exact_covariance, ks_radius, rect_frequency, rect_probability,
    run_monte_carlo, CltConfig,
};
use radial_gauss::filter::{blur as blur_grid, variable_blur, WidthMap};
use radial_gauss::io::{read_csv_grid, read_pgm, write_csv_grid, write_pgm, CsvGrid, RangePolicy};
use radial_gauss::kernel::{
    build_kernel, covariance_of_spec, gaussian_kernel, isotropic_widths, kernel_distance,
    widths_from_covariance, BoxSplineSpec,
};
use radial_gauss::measure::unit_box_measure;
use radial_gauss::{Covariance2, Error, Result, ScalarGrid};
use serde_json::{json, Map, Value};

use crate::{
    BenchArgs, BlurArgs, DensityArgs, KernelArgs, ShapeArgs, SimArgs, SimulationArgs, VarblurArgs,
    WidthsArgs,
};

/// Ordered key/value report, rendered as CSV rows or one JSON object.
#[derive(Default)]
struct Report {
    rows: Vec<(String, Value)>,
}

impl Report {
    fn push(&mut self, key: &str, value: impl Into<Value>) {
        self.rows.push((key.to_owned(), value.into()));
    }

    fn to_csv(&self) -> String {
        let mut out = String::from("key,value\n");
        for (k, v) in &self.rows {
            match v {
                Value::String(s) => writeln!(out, "{k},{s}").unwrap(),
                other => writeln!(out, "{k},{other}").unwrap(),
            }
        }
        out
    }

    fn to_json(&self) -> String {
        let map: Map<String, Value> = self.rows.iter().cloned().collect();
        Value::Object(map).to_string()
    }

    fn emit(&self, json: bool, out: Option<&Path>) -> Result<()> {
        if let Some(path) = out {
            fs::write(path, self.to_csv())?;
        }
        if json {
            println!("{}", self.to_json());
        } else if out.is_none() {
            print!("{}", self.to_csv());
        }
        Ok(())
    }
}

fn config(a: &SimulationArgs) -> Result<CltConfig> {
    let cfg = CltConfig::new(a.n as usize, a.trials as usize, a.seed, a.normalization);
    cfg.validate()?;
    Ok(cfg)
}

fn push_config(r: &mut Report, cfg: &CltConfig) {
    r.push("n", cfg.n);
    r.push("trials", cfg.trials);
    r.push("seed", cfg.seed);
    r.push("normalization", cfg.normalization.name());
}

pub fn sim(a: SimArgs) -> Result<()> {
    let cfg = config(&a.sim)?;
    if !(a.square > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "--square must be positive, got {}",
            a.square
        )));
    }
    let run = run_monte_carlo(&cfg, &unit_box_measure())?;
    let s = &run.stats;

    let mut r = Report::default();
    push_config(&mut r, &cfg);
    r.push("mean_x", s.mean.x);
    r.push("mean_y", s.mean.y);
    r.push("cov_xx", s.cov.cxx());
    r.push("cov_xy", s.cov.cxy());
    r.push("cov_yy", s.cov.cyy());
    // The limit law is degenerate for a single direction.
    if cfg.n >= 2 {
        let exact = exact_covariance(cfg.n, cfg.normalization)?;
        r.push("exact_cov_xx", exact.cxx());
        r.push("exact_cov_xy", exact.cxy());
        r.push("exact_cov_yy", exact.cyy());
        r.push("rect_a", a.square);
        r.push("rect_probability", rect_probability(a.square, &exact)?);
        if let Some(samples) = &run.samples {
            let sigma2 = cfg.normalization.limit_variance();
            r.push("rect_frequency", rect_frequency(samples, a.square));
            r.push("ks_radius", ks_radius(samples, sigma2)?);
            let chi = angular_chi2(samples, 16)?;
            r.push("angular_chi2", chi.statistic);
            r.push("angular_chi2_threshold", chi.threshold);
        }
    }
    r.emit(a.json, a.out.as_deref())?;

    if let Some(path) = &a.samples_out {
        let samples = run
            .samples
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("too many trials to keep raw samples".into()))?;
        let mut out = String::with_capacity(samples.len() * 40);
        out.push_str("x,y\n");
        for p in samples {
            writeln!(out, "{},{}", p.x, p.y).unwrap();
        }
        fs::write(path, out)?;
    }
    Ok(())
}

pub fn density(a: DensityArgs) -> Result<()> {
    let cfg = config(&a.sim)?;
    let run = run_monte_carlo(&cfg, &unit_box_measure())?;
    let samples = run
        .samples
        .ok_or_else(|| Error::InvalidArgument("too many trials to histogram".into()))?;
    let d = empirical_density(&samples, a.extent, a.bins as usize)?;
    write_csv_grid(&CsvGrid::from(&d), &a.out)?;

    if a.json {
        let q = d.quadrant_counts();
        let mut r = Report::default();
        push_config(&mut r, &cfg);
        r.push("extent", d.extent);
        r.push("bins", d.bins);
        r.push("in_window", d.total - d.overflow);
        r.push("overflow", d.overflow);
        r.push("quadrant_counts", json!(q));
        // A single cell straddles both axes and leaves no quadrant counts.
        if q.iter().sum::<u64>() > 0 {
            let chi = radial_gauss::clt::chi_square_uniform(&q)?;
            r.push("quadrant_chi2", chi.statistic);
            r.push("quadrant_chi2_threshold", chi.threshold);
        }
        println!("{}", r.to_json());
    }
    Ok(())
}

fn parse_cov(text: &str) -> Result<Covariance2> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let values: Vec<f64> = parts
        .iter()
        .map(|p| p.parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| {
            Error::InvalidArgument(format!("--cov expects \"cxx,cxy,cyy\", got {text:?}"))
        })?;
    match values[..] {
        [cxx, cxy, cyy] => Covariance2::new(cxx, cxy, cyy),
        _ => Err(Error::InvalidArgument(format!(
            "--cov expects three numbers, got {}",
            values.len()
        ))),
    }
}

fn shape_spec(shape: &ShapeArgs, n: usize) -> Result<BoxSplineSpec> {
    match (&shape.cov, shape.sigma) {
        (Some(cov), _) => widths_from_covariance(&parse_cov(cov)?),
        (None, Some(sigma)) => isotropic_widths(sigma, n),
        (None, None) => Err(Error::InvalidArgument(
            "one of --cov or --sigma is required".into(),
        )),
    }
}

fn push_spec(r: &mut Report, spec: &BoxSplineSpec) {
    r.push("directions", spec.directions().len());
    r.push("angles_rad", json!(spec.directions().angles()));
    r.push("widths", json!(spec.widths()));
    let c = covariance_of_spec(spec);
    r.push("cov_xx", c.cxx());
    r.push("cov_xy", c.cxy());
    r.push("cov_yy", c.cyy());
}

/// CSV rendering of array values as `;`-separated lists.
fn flatten_arrays(r: &mut Report) {
    for (_, v) in r.rows.iter_mut() {
        if let Value::Array(items) = v {
            let joined: Vec<String> = items.iter().map(Value::to_string).collect();
            *v = Value::String(joined.join(";"));
        }
    }
}

pub fn widths(a: WidthsArgs) -> Result<()> {
    let spec = shape_spec(&a.shape, a.n)?;
    let mut r = Report::default();
    push_spec(&mut r, &spec);
    if !a.json {
        flatten_arrays(&mut r);
    }
    r.emit(a.json, None)
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}{suffix}"))
}

pub fn kernel(a: KernelArgs) -> Result<()> {
    let spec = shape_spec(&a.shape, a.n)?;
    let cov = covariance_of_spec(&spec);
    let extent = match a.extent {
        Some(e) => e,
        None => {
            let half_sum: f64 = spec.widths().iter().map(|w| 0.5 * w).sum();
            let mut e = half_sum.max(5.0 * cov.max_eigenvalue().sqrt()) + a.h;
            if let Err(Error::ExtentTooSmall { required, .. }) = build_kernel(&spec, a.h, e) {
                e = required + a.h;
            }
            e
        }
    };
    let k = build_kernel(&spec, a.h, extent)?;
    write_csv_grid(&CsvGrid::from(&k), &a.out)?;

    let mut r = Report::default();
    push_spec(&mut r, &spec);
    r.push("h", a.h);
    r.push("extent", k.extent());
    r.push("side", k.side());
    r.push("peak", k.peak());
    if a.compare_gaussian {
        let g = gaussian_kernel(&cov, a.h, extent)?;
        let d = kernel_distance(&k, &g)?;
        let gpath = sibling(&a.out, "_gaussian.csv");
        write_csv_grid(&CsvGrid::from(&g), &gpath)?;
        r.push("gaussian_peak", g.peak());
        r.push("max_abs", d.max_abs);
        r.push("rms", d.rms);
        r.push("l1", d.l1);
        r.push("max_abs_over_peak", d.max_abs / g.peak());
        let mut metrics = Report::default();
        for key in ["gaussian_peak", "max_abs", "rms", "l1", "max_abs_over_peak"] {
            let v = r.rows.iter().find(|(k, _)| k == key).unwrap().1.clone();
            metrics.push(key, v);
        }
        fs::write(sibling(&a.out, "_distance.csv"), metrics.to_csv())?;
    }
    if !a.json {
        flatten_arrays(&mut r);
    }
    r.emit(a.json, None)
}

pub fn blur(a: BlurArgs) -> Result<()> {
    let spec = shape_spec(&a.shape, 4)?;
    let image = read_pgm(&a.input)?;
    let start = Instant::now();
    let out = blur_grid(&image, &spec, a.out.boundary)?;
    let elapsed = start.elapsed();
    write_pgm(&out, &a.output, a.out.maxval, RangePolicy::Clamp)?;
    if a.bench {
        eprintln!("blur_ms,{}", elapsed.as_secs_f64() * 1e3);
    }
    Ok(())
}

fn load_map(path: &Path) -> Result<ScalarGrid> {
    Ok(read_csv_grid(path)?.grid)
}

pub fn varblur(a: VarblurArgs) -> Result<()> {
    if a.width_maps.as_ref().is_some_and(|p| p.len() != 4) {
        return Err(Error::InvalidArgument(
            "--width-maps expects four paths".into(),
        ));
    }
    let image = read_pgm(&a.input)?;
    let widths = match (&a.width_maps, &a.sigma_map) {
        (Some(paths), _) => {
            let [h, v, du, dd] = <[&PathBuf; 4]>::try_from(paths.iter().collect::<Vec<_>>())
                .map_err(|_| Error::InvalidArgument("--width-maps expects four paths".into()))?;
            WidthMap::new([load_map(h)?, load_map(v)?, load_map(du)?, load_map(dd)?])?
        }
        (None, Some(path)) => WidthMap::from_sigma_map(&load_map(path)?)?,
        (None, None) => {
            return Err(Error::InvalidArgument(
                "one of --width-maps or --sigma-map is required".into(),
            ))
        }
    };
    let out = variable_blur(&image, &widths, a.out.boundary)?;
    write_pgm(&out, &a.output, a.out.maxval, RangePolicy::Clamp)
}

/// Deterministic pseudo-random test image in `[0, 1)`.
pub fn bench_image(size: usize) -> Result<ScalarGrid> {
    ScalarGrid::from_fn(size, size, |x, y| {
        let mut z = (x as u64) << 32 | y as u64;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        z ^= z >> 31;
        (z >> 11) as f64 / (1u64 << 53) as f64
    })
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        0.5 * (v[m - 1] + v[m])
    }
}

pub fn bench(a: BenchArgs) -> Result<()> {
    if a.size == 0 || a.runs == 0 || a.sigmas.is_empty() {
        return Err(Error::InvalidArgument(
            "--size, --runs and --sigmas must be non-empty".into(),
        ));
    }
    let image = bench_image(a.size)?;
    let mut r = Report::default();
    r.push("size", a.size);
    r.push("runs", a.runs);
    let mut medians = Vec::new();
    for &sigma in &a.sigmas {
        let spec = isotropic_widths(sigma, 4)?;
        // Warm-up run so allocation and thread start-up are not timed.
        blur_grid(&image, &spec, Default::default())?;
        let times: Vec<f64> = (0..a.runs)
            .map(|_| {
                let start = Instant::now();
                let out = blur_grid(&image, &spec, Default::default());
                let t = start.elapsed().as_secs_f64() * 1e3;
                out.map(|_| t)
            })
            .collect::<Result<_>>()?;
        let m = median(times);
        r.push(&format!("median_ms_sigma_{sigma}"), m);
        medians.push(m);
    }
    let fastest = medians.iter().copied().fold(f64::INFINITY, f64::min);
    let slowest = medians.iter().copied().fold(0.0, f64::max);
    r.push("max_ratio", slowest / fastest);
    r.emit(a.json, None)
}
