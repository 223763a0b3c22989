use radial_gauss::filter::{blur, variable_blur, Boundary, GridDirection, WidthMap};
use radial_gauss::kernel::{covariance_of_spec, widths_from_covariance, BoxSplineSpec};
use radial_gauss::{Covariance2, ScalarGrid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Taps for a box of width `w` along a step of length `len`: unit inner taps
/// and an end weight found by bisection on the tap variance.
fn oracle_taps(w: f64, len: f64) -> Vec<f64> {
    let v = w * w / 12.0 / (len * len);
    let variance = |r: usize, f: f64| {
        let inner: f64 = (1..=r).map(|k| 2.0 * (k * k) as f64).sum();
        let edge = 2.0 * f * ((r + 1) * (r + 1)) as f64;
        (inner + edge) / (2 * r + 1) as f64 / (1.0 + 2.0 * f / (2 * r + 1) as f64)
    };
    let mut r = 0;
    while variance(r + 1, 0.0) <= v * (1.0 + 1e-12) {
        r += 1;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if variance(r, mid) < v {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let f = 0.5 * (lo + hi);
    let mut taps = vec![1.0; 2 * r + 3];
    taps[0] = f;
    taps[2 * r + 2] = f;
    let m: f64 = taps.iter().sum();
    taps.iter().map(|t| t / m).collect()
}

/// Value at `(x, y)`, extended along the `dir` line through it.
fn sample(g: &ScalarGrid, x: isize, y: isize, dir: GridDirection, boundary: Boundary) -> f64 {
    let (w, h) = (g.width() as isize, g.height() as isize);
    let inside = |p: (isize, isize)| p.0 >= 0 && p.1 >= 0 && p.0 < w && p.1 < h;
    if inside((x, y)) {
        return g.get(x as usize, y as usize);
    }
    let (dx, dy) = dir.step();
    let reach = 4 * (w + h);
    let mut start = (-reach..=reach)
        .map(|s| (x + s * dx, y + s * dy))
        .find(|&p| inside(p))
        .expect("every line meets the grid");
    while inside((start.0 - dx, start.1 - dy)) {
        start = (start.0 - dx, start.1 - dy);
    }
    let mut len = 0;
    while inside((start.0 + len * dx, start.1 + len * dy)) {
        len += 1;
    }
    let i = if dx != 0 {
        (x - start.0) / dx
    } else {
        (y - start.1) / dy
    };
    let j = match boundary {
        Boundary::Zero => return 0.0,
        Boundary::Replicate => i.clamp(0, len - 1),
        Boundary::Reflect => {
            let p = i.rem_euclid(2 * len);
            if p < len {
                p
            } else {
                2 * len - 1 - p
            }
        }
    };
    g.get((start.0 + j * dx) as usize, (start.1 + j * dy) as usize)
}

/// One direct-sum pass with per-pixel widths.
fn oracle_pass(
    g: &ScalarGrid,
    dir: GridDirection,
    widths: &ScalarGrid,
    boundary: Boundary,
) -> ScalarGrid {
    let (dx, dy) = dir.step();
    ScalarGrid::from_fn(g.width(), g.height(), |x, y| {
        let taps = oracle_taps(widths.get(x, y), dir.step_length());
        let r = (taps.len() / 2) as isize;
        taps.iter()
            .enumerate()
            .map(|(t, wt)| {
                let k = t as isize - r;
                wt * sample(g, x as isize + k * dx, y as isize + k * dy, dir, boundary)
            })
            .sum()
    })
    .unwrap()
}

fn oracle_variable(g: &ScalarGrid, maps: &WidthMap, boundary: Boundary) -> ScalarGrid {
    GridDirection::ORDER.iter().fold(g.clone(), |acc, &dir| {
        oracle_pass(&acc, dir, maps.get(dir), boundary)
    })
}

fn random_image(w: usize, h: usize, seed: u64) -> ScalarGrid {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    ScalarGrid::from_fn(w, h, |_, _| rng.random::<f64>()).unwrap()
}

#[test]
fn space_variant_blur_matches_direct_sums() {
    let img = random_image(23, 17, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut map = || ScalarGrid::from_fn(23, 17, |_, _| rng.random_range(0.0..9.0)).unwrap();
    let maps = WidthMap::new([map(), map(), map(), map()]).unwrap();
    for boundary in [Boundary::Replicate, Boundary::Reflect, Boundary::Zero] {
        let fast = variable_blur(&img, &maps, boundary).unwrap();
        let slow = oracle_variable(&img, &maps, boundary);
        assert!(fast.max_abs_diff(&slow).unwrap() < 1e-12, "{boundary:?}");
    }
}

#[test]
fn blur_matches_direct_sums() {
    let img = random_image(31, 26, 3);
    let spec = widths_from_covariance(&Covariance2::new(5.0, -1.5, 2.5).unwrap()).unwrap();
    let maps = WidthMap::constant(31, 26, &spec).unwrap();
    for boundary in [Boundary::Replicate, Boundary::Reflect, Boundary::Zero] {
        let fast = blur(&img, &spec, boundary).unwrap();
        let slow = oracle_variable(&img, &maps, boundary);
        assert!(fast.max_abs_diff(&slow).unwrap() < 1e-12, "{boundary:?}");
    }
}

fn impulse_covariance(spec: &BoxSplineSpec) -> Covariance2 {
    let mut img = ScalarGrid::zeros(97, 97).unwrap();
    img.set(48, 48, 1.0);
    let g = blur(&img, spec, Boundary::Zero).unwrap();
    let (mut m, mut xx, mut xy, mut yy) = (0.0, 0.0, 0.0, 0.0);
    for y in 0..97 {
        for x in 0..97 {
            let v = g.get(x, y);
            let (dx, dy) = (x as f64 - 48.0, y as f64 - 48.0);
            m += v;
            xx += v * dx * dx;
            xy += v * dx * dy;
            yy += v * dy * dy;
        }
    }
    assert!((m - 1.0).abs() < 1e-12);
    Covariance2::new(xx / m, xy / m, yy / m).unwrap()
}

#[test]
fn impulse_covariance_is_exact() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..25 {
        let cxx: f64 = rng.random_range(0.2..12.0);
        let cyy: f64 = rng.random_range(0.2..12.0);
        let b = cxx.min(cyy);
        let c = Covariance2::new(cxx, rng.random_range(-b..=b), cyy).unwrap();
        let spec = widths_from_covariance(&c).unwrap();
        let got = impulse_covariance(&spec);
        assert!(
            got.max_abs_diff(&covariance_of_spec(&spec)) < 1e-9,
            "{c:?} -> {got:?}"
        );
    }
}

#[test]
fn half_zero_map_keeps_the_sharp_half() {
    let img = random_image(64, 40, 4);
    let sigma = ScalarGrid::from_fn(64, 40, |x, _| if x < 32 { 0.0 } else { 3.0 }).unwrap();
    let out = variable_blur(
        &img,
        &WidthMap::from_sigma_map(&sigma).unwrap(),
        Boundary::Replicate,
    )
    .unwrap();
    // Later passes at sharp pixels copy their input, so the sharp half is
    // untouched everywhere, not only away from the seam.
    for y in 0..40 {
        for x in 0..32 {
            assert_eq!(out.get(x, y), img.get(x, y));
        }
    }
    let blurred = (32..64).any(|x| (out.get(x, 20) - img.get(x, 20)).abs() > 1e-3);
    assert!(blurred);
}
