use serde::{Deserialize, Serialize};

use super::GrayImage;
use crate::error::{Error, Result};

/// Sub-samples per pixel side used for coverage-weighted edges.
const SUPERSAMPLE: usize = 4;

/// Geometry of a synthetic round sign with parallel dark stripes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignSpec {
    /// Side length of the square image, pixels.
    pub size: usize,
    pub num_stripes: usize,
    /// Direction across the stripes (their normal), degrees counterclockwise
    /// from +x with y pointing up. At 45 the stripes run from the top-left
    /// towards the bottom-right of the raster, which is the orientation the
    /// 45 degree projection resolves into separate dips.
    pub stripe_angle: f64,
    /// Stripe thickness, pixels.
    pub stripe_width: f64,
    /// Fraction of the stripe period covered by the stripe, in (0, 1).
    pub duty: f64,
    /// Stripe (and rim) intensity.
    pub foreground: f64,
    pub background: f64,
    /// Draw a 2 px dark rim at radius `size / 2 - 2`.
    pub circle_border: bool,
}

impl SignSpec {
    /// Five stripes at 45 degrees with a rim, scaled to `size`.
    pub fn end_of_restriction(size: usize) -> Self {
        Self {
            size,
            num_stripes: 5,
            stripe_angle: 45.0,
            stripe_width: 2.5 * size as f64 / 64.0,
            duty: 0.55,
            foreground: 0.1,
            background: 0.9,
            circle_border: true,
        }
    }

    /// Center-to-center stripe distance, pixels.
    pub fn period(&self) -> f64 {
        self.stripe_width / self.duty
    }

    /// Radius of the disk the stripes are clipped to (inside the rim).
    pub fn inner_radius(&self) -> f64 {
        self.size as f64 / 2.0 - 3.0
    }

    pub fn rim_radius(&self) -> f64 {
        self.size as f64 / 2.0 - 2.0
    }

    /// Signed distances of the stripe centers from the image center, along
    /// the stripe normal.
    pub fn stripe_offsets(&self) -> Vec<f64> {
        let mid = (self.num_stripes as f64 - 1.0) / 2.0;
        (0..self.num_stripes)
            .map(|i| (i as f64 - mid) * self.period())
            .collect()
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidSpec(m.to_string()));
        if self.size < 8 {
            return bad("size must be at least 8 px");
        }
        if !(0.0..=1.0).contains(&self.foreground) || !(0.0..=1.0).contains(&self.background) {
            return bad("intensities must lie in [0, 1]");
        }
        if self.num_stripes > 0 {
            if !(self.stripe_width > 0.0) || !self.stripe_width.is_finite() {
                return bad("stripe_width must be positive");
            }
            if !(self.duty > 0.0 && self.duty < 1.0) {
                return bad("duty must lie in (0, 1)");
            }
            if !self.stripe_angle.is_finite() {
                return bad("stripe_angle must be finite");
            }
            if self.foreground >= self.background {
                return bad("stripes must be darker than the background");
            }
            let diameter = 2.0 * self.inner_radius();
            let span = self.num_stripes as f64 * self.period();
            if span > diameter {
                return Err(Error::SpecTooDense {
                    stripes: self.num_stripes,
                    period: self.period(),
                    diameter,
                });
            }
        }
        Ok(())
    }
}

/// Primitive painted by [`render`]. Coordinates are pixels relative to the
/// image center with y pointing up.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    /// Points whose signed distance along `normal_deg` lies within
    /// `half_width` of `offset`, restricted to the disk of `clip_radius`.
    Band {
        normal_deg: f64,
        offset: f64,
        half_width: f64,
        clip_radius: f64,
    },
    /// Annulus of the given center radius.
    Ring {
        radius: f64,
        half_width: f64,
    },
    Disk {
        radius: f64,
    },
    /// Capsule around the segment `from`-`to`.
    Stroke {
        from: (f64, f64),
        to: (f64, f64),
        half_width: f64,
    },
}

impl Shape {
    fn contains(&self, x: f64, y: f64) -> bool {
        match *self {
            Shape::Band {
                normal_deg,
                offset,
                half_width,
                clip_radius,
            } => {
                let (s, c) = normal_deg.to_radians().sin_cos();
                let r = x * c + y * s;
                (r - offset).abs() <= half_width && x.hypot(y) < clip_radius
            }
            Shape::Ring { radius, half_width } => (x.hypot(y) - radius).abs() <= half_width,
            Shape::Disk { radius } => x.hypot(y) <= radius,
            Shape::Stroke {
                from,
                to,
                half_width,
            } => {
                let (dx, dy) = (to.0 - from.0, to.1 - from.1);
                let len2 = dx * dx + dy * dy;
                let t = if len2 > 0.0 {
                    (((x - from.0) * dx + (y - from.1) * dy) / len2).clamp(0.0, 1.0)
                } else {
                    0.0
                };
                let (px, py) = (from.0 + t * dx, from.1 + t * dy);
                (x - px).hypot(y - py) <= half_width
            }
        }
    }
}

/// Paints `shapes` in order over a uniform background. Each pixel is the
/// average over a 4x4 grid of sub-samples, which anti-aliases every edge.
pub fn render(
    width: usize,
    height: usize,
    background: f64,
    shapes: &[(Shape, f64)],
) -> Result<GrayImage> {
    let (cx, cy) = (width as f64 / 2.0, height as f64 / 2.0);
    let n = SUPERSAMPLE as f64;
    GrayImage::from_fn(width, height, |x, row| {
        let mut acc = 0.0;
        for sy in 0..SUPERSAMPLE {
            let py = cy - (row as f64 + (sy as f64 + 0.5) / n);
            for sx in 0..SUPERSAMPLE {
                let px = x as f64 + (sx as f64 + 0.5) / n - cx;
                let v = shapes
                    .iter()
                    .rev()
                    .find(|(shape, _)| shape.contains(px, py))
                    .map_or(background, |(_, v)| *v);
                acc += v;
            }
        }
        acc / (n * n)
    })
}

/// Renders the sign described by `spec`.
pub fn synth_sign(spec: &SignSpec) -> Result<GrayImage> {
    spec.validate()?;
    let mut shapes: Vec<(Shape, f64)> = spec
        .stripe_offsets()
        .into_iter()
        .map(|offset| {
            (
                Shape::Band {
                    normal_deg: spec.stripe_angle,
                    offset,
                    half_width: spec.stripe_width / 2.0,
                    clip_radius: spec.inner_radius(),
                },
                spec.foreground,
            )
        })
        .collect();
    if spec.circle_border {
        shapes.push((
            Shape::Ring {
                radius: spec.rim_radius(),
                half_width: 1.0,
            },
            spec.foreground,
        ));
    }
    render(spec.size, spec.size, spec.background, &shapes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_stripes_is_uniform() {
        let spec = SignSpec {
            num_stripes: 0,
            circle_border: false,
            ..SignSpec::end_of_restriction(64)
        };
        let img = synth_sign(&spec).unwrap();
        assert!(img.pixels().iter().all(|&v| (v - 0.9).abs() < 1e-12));
    }

    #[test]
    fn rim_darkens_border_pixels_only() {
        let spec = SignSpec {
            num_stripes: 0,
            ..SignSpec::end_of_restriction(64)
        };
        let img = synth_sign(&spec).unwrap();
        // the rim passes through x = 2.5 on the middle row (radius 30)
        assert!(img.get(2, 32) < 0.5);
        assert!((img.get(32, 32) - 0.9).abs() < 1e-12);
        assert!((img.get(0, 0) - 0.9).abs() < 1e-12);
    }

    #[test]
    fn stripes_run_top_left_to_bottom_right() {
        let spec = SignSpec {
            circle_border: false,
            stripe_width: 4.0,
            duty: 0.5,
            ..SignSpec::end_of_restriction(64)
        };
        let img = synth_sign(&spec).unwrap();
        // the central stripe contains the image center and the diagonal
        // towards the bottom-right, not the one towards the top-right
        assert!(img.get(32, 32) < 0.2);
        assert!(img.get(40, 40) < 0.2);
        assert!(img.get(40, 24) > 0.8);
    }

    #[test]
    fn too_dense_is_rejected() {
        let spec = SignSpec {
            num_stripes: 20,
            stripe_width: 4.0,
            duty: 0.5,
            ..SignSpec::end_of_restriction(64)
        };
        assert!(matches!(synth_sign(&spec), Err(Error::SpecTooDense { .. })));
    }

    #[test]
    fn light_stripes_are_rejected() {
        let spec = SignSpec {
            foreground: 0.9,
            background: 0.1,
            ..SignSpec::end_of_restriction(64)
        };
        assert!(matches!(synth_sign(&spec), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn edges_are_antialiased() {
        let img = render(
            8,
            8,
            1.0,
            &[(
                Shape::Band {
                    normal_deg: 0.0,
                    offset: 0.0,
                    half_width: 0.5,
                    clip_radius: 100.0,
                },
                0.0,
            )],
        )
        .unwrap();
        // band covers x in [-0.5, 0.5] around the center column boundary
        assert!((img.get(3, 4) - 0.5).abs() < 1e-12);
        assert!((img.get(4, 4) - 0.5).abs() < 1e-12);
        assert_eq!(img.get(0, 4), 1.0);
    }
}
