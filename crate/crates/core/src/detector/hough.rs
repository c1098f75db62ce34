use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::GrayImage;

/// A detected circle in raster coordinates (row index grows downwards).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub cx: f64,
    pub cy: f64,
    #[serde(rename = "r")]
    pub radius: f64,
    /// Votes collected by the winning accumulator cell.
    pub score: f64,
}

/// Edge pixel with its unit gradient direction.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Voter {
    x: f64,
    row: f64,
    ux: f64,
    uy: f64,
}

/// Pixels whose central-difference gradient magnitude exceeds the mean by
/// more than one standard deviation.
pub(crate) fn voters(img: &GrayImage) -> Vec<Voter> {
    let (w, h) = (img.width(), img.height());
    let mut grads = Vec::with_capacity(w * h);
    for row in 0..h {
        for x in 0..w {
            let (xi, ri) = (x as isize, row as isize);
            let gx = 0.5 * (img.get_clamped(xi + 1, ri) - img.get_clamped(xi - 1, ri));
            let gy = 0.5 * (img.get_clamped(xi, ri + 1) - img.get_clamped(xi, ri - 1));
            grads.push((x, row, gx, gy, gx.hypot(gy)));
        }
    }
    let n = grads.len() as f64;
    let mean = grads.iter().map(|g| g.4).sum::<f64>() / n;
    let var = grads.iter().map(|g| (g.4 - mean).powi(2)).sum::<f64>() / n;
    let threshold = mean + var.sqrt();
    grads
        .into_iter()
        .filter(|g| g.4 > threshold && g.4 > 0.0)
        .map(|(x, row, gx, gy, m)| Voter {
            x: x as f64,
            row: row as f64,
            ux: gx / m,
            uy: gy / m,
        })
        .collect()
}

/// Cells a voter supports at radius `r`: one step along and one against
/// its gradient, so dark-on-light and light-on-dark rims both register.
pub(crate) fn votes(
    v: Voter,
    r: usize,
    w: usize,
    h: usize,
) -> impl Iterator<Item = (usize, usize)> {
    let r = r as f64;
    [1.0, -1.0].into_iter().filter_map(move |sign: f64| {
        let cx = (v.x + sign * r * v.ux).round();
        let cy = (v.row + sign * r * v.uy).round();
        (cx >= 0.0 && cy >= 0.0 && (cx as usize) < w && (cy as usize) < h)
            .then_some((cx as usize, cy as usize))
    })
}

pub(crate) fn check_radii(img: &GrayImage, r_min: usize, r_max: usize) -> Result<()> {
    let (w, h) = (img.width(), img.height());
    if r_min < 1 || r_min > r_max || 2 * r_max > w.min(h) {
        return Err(Error::BadRadiusRange {
            r_min,
            r_max,
            width: w,
            height: h,
        });
    }
    Ok(())
}

/// Cells within one step of `(cx, cy, ri)` on every axis, clipped to the grid.
fn neighborhood(
    cx: usize,
    cy: usize,
    ri: usize,
    w: usize,
    h: usize,
    nr: usize,
) -> impl Iterator<Item = usize> {
    let span = |c: usize, n: usize| c.saturating_sub(1)..=(c + 1).min(n - 1);
    span(cy, h).flat_map(move |y| {
        span(cx, w).flat_map(move |x| span(ri, nr).map(move |r| (y * w + x) * nr + r))
    })
}

/// Support of every `(cy, cx, r)` cell, laid out so a linear scan visits
/// cells in that order: the number of distinct edge pixels with a vote
/// within one pixel of the center and one step of the radius.
pub(crate) fn accumulate(img: &GrayImage, r_lo: usize, r_hi: usize) -> Vec<u32> {
    let (w, h) = (img.width(), img.height());
    let nr = r_hi - r_lo + 1;
    let mut acc = vec![0u32; w * h * nr];
    let mut touched = Vec::new();
    for v in voters(img) {
        touched.clear();
        for r in r_lo..=r_hi {
            for (cx, cy) in votes(v, r, w, h) {
                touched.extend(neighborhood(cx, cy, r - r_lo, w, h, nr));
            }
        }
        touched.sort_unstable();
        touched.dedup();
        for &i in &touched {
            acc[i] += 1;
        }
    }
    acc
}

/// Circular Hough transform by gradient voting.
///
/// Every edge pixel votes, at each radius, for the cells one radius away
/// along and against its gradient. A cell's score counts the edge pixels
/// voting within one pixel of its center and one step of its radius, which
/// absorbs the rounding of vote positions and the two edges of a drawn rim.
/// The best cell (ties broken towards the lowest `(cy, cx, r)`) is returned
/// if its score exceeds half the circumference, `pi * r`.
pub fn locate_circle(img: &GrayImage, r_min: usize, r_max: usize) -> Result<Option<Circle>> {
    check_radii(img, r_min, r_max)?;
    let w = img.width();
    let nr = r_max - r_min + 1;
    let scores = accumulate(img, r_min, r_max);
    let mut best: Option<(usize, u32)> = None;
    for (i, &score) in scores.iter().enumerate() {
        if score > best.map_or(0, |b| b.1) {
            best = Some((i, score));
        }
    }
    Ok(best.and_then(|(i, score)| {
        let r = i % nr + r_min;
        let cell = i / nr;
        let (cx, cy) = (cell % w, cell / w);
        (score as f64 > 0.5 * std::f64::consts::TAU * r as f64).then_some(Circle {
            cx: cx as f64,
            cy: cy as f64,
            radius: r as f64,
            score: score as f64,
        })
    }))
}
