//! Oracles, generators and property checks shared by the property suite and
//! the acceptance target.
#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use slice_radon::detector::{
    detect_end_of_restriction, find_extrema_in, locate_circle, normalize_profile, project_cst,
    DetectorSettings,
};
use slice_radon::image::{load_pgm, save_pgm, synth_sign, GrayImage, SignSpec};
use slice_radon::transforms::{dft2, radon_direct, Backend};

/// Image with intensities `j / 256`: every partial sum is exact in f64.
pub fn dyadic_image(max_side: usize) -> impl Strategy<Value = GrayImage> {
    (1..=max_side, 1..=max_side).prop_flat_map(|(w, h)| {
        prop::collection::vec(0u32..=256, w * h).prop_map(move |v| {
            GrayImage::new(w, h, v.into_iter().map(|j| j as f64 / 256.0).collect()).unwrap()
        })
    })
}

pub fn angle() -> impl Strategy<Value = f64> {
    0.0..180.0f64
}

pub fn backend() -> impl Strategy<Value = Backend> {
    prop_oneof![Just(Backend::Dft), Just(Backend::Dct)]
}

/// A striped sign with random geometry and contrast; rejected specs are
/// filtered out.
pub fn sign() -> impl Strategy<Value = GrayImage> {
    (
        20usize..=64,
        1usize..=6,
        0.0..180.0f64,
        0.2..0.8f64,
        0.0..0.4f64,
        0.6..1.0f64,
        any::<bool>(),
    )
        .prop_filter_map(
            "spec too dense",
            |(size, num_stripes, stripe_angle, duty, foreground, background, circle_border)| {
                synth_sign(&SignSpec {
                    size,
                    num_stripes,
                    stripe_angle,
                    stripe_width: duty * size as f64 / (2.0 * num_stripes as f64 + 1.0),
                    duty,
                    foreground,
                    background,
                    circle_border,
                })
                .ok()
            },
        )
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Projection is linear in the image.
pub fn check_linearity(
    f: &GrayImage,
    seed: u64,
    a: f64,
    b: f64,
    angle: f64,
    backend: Backend,
    ramp: bool,
) -> Result<(), TestCaseError> {
    let g = GrayImage::from_fn(f.width(), f.height(), |x, row| {
        ((x * 31 + row * 17 + seed as usize) % 97) as f64 / 96.0
    })
    .unwrap();
    let mix = GrayImage::new(
        f.width(),
        f.height(),
        f.pixels()
            .iter()
            .zip(g.pixels())
            .map(|(p, q)| a * p + b * q)
            .collect(),
    )
    .unwrap();
    let pf = project_cst(f, angle, backend, ramp).unwrap().values;
    let pg = project_cst(&g, angle, backend, ramp).unwrap().values;
    let pm = project_cst(&mix, angle, backend, ramp).unwrap().values;
    let scale = max_abs(&pf).max(max_abs(&pg)).max(1.0);
    for i in 0..pm.len() {
        let want = a * pf[i] + b * pg[i];
        prop_assert!(
            (pm[i] - want).abs() <= 1e-9 * scale,
            "bin {i}: {} vs {want}",
            pm[i]
        );
    }
    Ok(())
}

/// A real image has a conjugate-symmetric spectrum.
pub fn check_hermitian(img: &GrayImage, pad: usize) -> Result<(), TestCaseError> {
    let s = dft2(img, pad).unwrap();
    let (w, h) = (s.width() as isize, s.height() as isize);
    let tol = 1e-9 * img.sum().max(1.0);
    for ky in -h / 2..h / 2 {
        for kx in -w / 2..w / 2 {
            let d = s.bin(kx, ky) - s.bin(-kx, -ky).conj();
            prop_assert!(d.norm() <= tol, "({kx},{ky}): {d}");
        }
    }
    Ok(())
}

/// The direct projection keeps every pixel's mass; the DFT slice path keeps
/// the total through its DC bin.
pub fn check_mass(img: &GrayImage, angle: f64) -> Result<(), TestCaseError> {
    let bins = 2 * (img.width() + img.height()) + 2;
    let direct: f64 = radon_direct(img, angle, bins).unwrap().iter().sum();
    prop_assert_eq!(direct, img.sum());
    let cst: f64 = project_cst(img, angle, Backend::Dft, false)
        .unwrap()
        .values
        .iter()
        .sum();
    prop_assert!(
        (cst - img.sum()).abs() <= 1e-9 * img.sum().max(1.0),
        "{cst} vs {}",
        img.sum()
    );
    Ok(())
}

/// Raising the prominence threshold only ever removes extrema.
pub fn check_extrema_monotone(values: &[f64], p1: f64, p2: f64) -> Result<(), TestCaseError> {
    let (lo, hi) = if p1 <= p2 { (p1, p2) } else { (p2, p1) };
    let key = |e: &slice_radon::detector::Extremum| (e.index, e.kind);
    let loose: Vec<_> = find_extrema_in(values, lo)
        .unwrap()
        .iter()
        .map(key)
        .collect();
    let strict: Vec<_> = find_extrema_in(values, hi)
        .unwrap()
        .iter()
        .map(key)
        .collect();
    for k in &strict {
        prop_assert!(loose.contains(k), "{k:?} at {hi} but not at {lo}");
    }
    Ok(())
}

/// Brightness and contrast changes do not move the normalized profile or
/// the verdict.
pub fn check_affine_invariance(
    img: &GrayImage,
    a: f64,
    b: f64,
    backend: Backend,
) -> Result<(), TestCaseError> {
    let moved = img.affine(a, b).unwrap();
    let s = DetectorSettings {
        backend,
        ..Default::default()
    };
    let x = detect_end_of_restriction(img, &s).unwrap();
    let y = detect_end_of_restriction(&moved, &s).unwrap();
    prop_assert_eq!(x.positive, y.positive);
    for (p, q) in x.profile.values.iter().zip(&y.profile.values) {
        prop_assert!((p - q).abs() <= 1e-9, "{p} vs {q}");
    }
    let raw =
        |i: &GrayImage| normalize_profile(&project_cst(i, 45.0, backend, false).unwrap()).values;
    // without a mean subtraction only the contrast factor cancels
    for (p, q) in raw(img).iter().zip(&raw(&img.affine(a, 0.0).unwrap())) {
        prop_assert!((p - q).abs() <= 1e-9, "{p} vs {q}");
    }
    Ok(())
}

/// 8-bit images survive a write and read in both encodings.
pub fn check_pgm_round_trip(levels: &[u8], w: usize) -> Result<(), TestCaseError> {
    let h = levels.len() / w;
    let img = GrayImage::new(
        w,
        h,
        levels[..w * h].iter().map(|&l| l as f64 / 255.0).collect(),
    )
    .unwrap();
    for binary in [true, false] {
        let bytes = save_pgm(&img, binary);
        let back = load_pgm(&bytes).unwrap();
        prop_assert_eq!(&back, &img);
        prop_assert_eq!(save_pgm(&back, binary), bytes);
    }
    Ok(())
}

/// Exhaustive circular Hough: for every `(cx, cy, r)` cell, count the edge
/// pixels with at least one vote within one pixel of the center and one
/// step of the radius. Written independently of the library's accumulator.
pub fn hough_oracle(
    img: &GrayImage,
    r_min: usize,
    r_max: usize,
) -> Option<(usize, usize, usize, u32)> {
    let (w, h) = (img.width() as isize, img.height() as isize);
    let px = |x: isize, y: isize| img.get(x.clamp(0, w - 1) as usize, y.clamp(0, h - 1) as usize);
    let mut grads = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let gx = (px(x + 1, y) - px(x - 1, y)) / 2.0;
            let gy = (px(x, y + 1) - px(x, y - 1)) / 2.0;
            grads.push((x, y, gx, gy, gx.hypot(gy)));
        }
    }
    let n = grads.len() as f64;
    let mean = grads.iter().map(|g| g.4).sum::<f64>() / n;
    let sd = (grads
        .iter()
        .map(|g| (g.4 - mean) * (g.4 - mean))
        .sum::<f64>()
        / n)
        .sqrt();
    let edges: Vec<_> = grads
        .into_iter()
        .filter(|g| g.4 > mean + sd && g.4 > 0.0)
        .collect();

    let mut best: Option<(usize, usize, usize, u32)> = None;
    for cy in 0..h {
        for cx in 0..w {
            for r in r_min..=r_max {
                let mut score = 0;
                for &(x, y, gx, gy, m) in &edges {
                    let hit = (r.saturating_sub(1).max(r_min)..=(r + 1).min(r_max)).any(|rr| {
                        [1.0, -1.0].iter().any(|s| {
                            let vx = (x as f64 + s * rr as f64 * gx / m).round();
                            let vy = (y as f64 + s * rr as f64 * gy / m).round();
                            vx >= 0.0
                                && vy >= 0.0
                                && vx < w as f64
                                && vy < h as f64
                                && (vx - cx as f64).abs() <= 1.0
                                && (vy - cy as f64).abs() <= 1.0
                        })
                    });
                    score += hit as u32;
                }
                if score > best.map_or(0, |b| b.3) {
                    best = Some((cx as usize, cy as usize, r, score));
                }
            }
        }
    }
    best.filter(|b| b.3 as f64 > std::f64::consts::PI * b.2 as f64)
}

/// Library and oracle agree on the winning cell (or on there being none).
pub fn check_hough_oracle(
    img: &GrayImage,
    r_min: usize,
    r_max: usize,
) -> Result<(), TestCaseError> {
    let got = locate_circle(img, r_min, r_max).unwrap().map(|c| {
        (
            c.cx as usize,
            c.cy as usize,
            c.radius as usize,
            c.score as u32,
        )
    });
    prop_assert_eq!(got, hough_oracle(img, r_min, r_max));
    Ok(())
}

/// Anti-aliased ring of the given contrast over a flat background, with
/// optional deterministic noise. `cx`, `cy` are raster coordinates.
pub fn ring_image(
    size: usize,
    cx: f64,
    cy: f64,
    radius: f64,
    background: f64,
    contrast: f64,
    noise_seed: Option<u64>,
) -> GrayImage {
    const SS: usize = 4;
    GrayImage::from_fn(size, size, |x, row| {
        let mut cover = 0.0;
        for sy in 0..SS {
            for sx in 0..SS {
                let dx = x as f64 + (sx as f64 + 0.5) / SS as f64 - (cx + 0.5);
                let dy = row as f64 + (sy as f64 + 0.5) / SS as f64 - (cy + 0.5);
                cover += ((dx.hypot(dy) - radius).abs() <= 1.0) as u32 as f64;
            }
        }
        let mut v = background - contrast * cover / (SS * SS) as f64;
        if let Some(seed) = noise_seed {
            let k =
                (x as u64 * 73_856_093) ^ (row as u64 * 19_349_663) ^ seed.wrapping_mul(83_492_791);
            v += ((k % 1000) as f64 / 1000.0 - 0.5) * 0.04;
        }
        v.clamp(0.0, 1.0)
    })
    .unwrap()
}
