//! Droplet domains as weighted grid masks.
//!
//! A domain is carried as a uniform grid of cells with a coverage weight in
//! [0, 1] per cell. Analytic variants (disks, half-disks) rasterize with
//! exact circle/rectangle intersection areas, so area-type integrals keep
//! full accuracy at the boundary; file-loaded masks are plain 0/1 bitmaps.
//! Grids are anchored so the origin sits on a cell corner, which makes
//! origin-symmetric domains rasterize to symmetric weight sets.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::sync::Arc;

/// Uniform-grid coverage mask. Cell (i, j) covers
/// [x0 + i h, x0 + (i+1) h] x [y0 + j h, y0 + (j+1) h].
#[derive(Clone, Debug)]
pub struct GridMask {
    pub x0: f64,
    pub y0: f64,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    /// Row-major: coverage[j * nx + i].
    pub coverage: Vec<f64>,
}

impl GridMask {
    pub fn cell_center(&self, i: usize, j: usize) -> Complex64 {
        Complex64::new(
            self.x0 + (i as f64 + 0.5) * self.h,
            self.y0 + (j as f64 + 0.5) * self.h,
        )
    }

    pub fn coverage_at(&self, i: usize, j: usize) -> f64 {
        self.coverage[j * self.nx + i]
    }

    /// Total covered area.
    pub fn area(&self) -> f64 {
        self.coverage.iter().sum::<f64>() * self.h * self.h
    }

    /// Parse the plain-text bitmap format:
    ///
    /// ```text
    /// mask <nx> <ny> <x0> <y0> <h>
    /// <ny rows of nx characters, '#' covered / '.' empty, top row first>
    /// ```
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty mask file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 6 || fields[0] != "mask" {
            return Err(Error::Parse(
                "header must be: mask <nx> <ny> <x0> <y0> <h>".into(),
            ));
        }
        let nx: usize = fields[1]
            .parse()
            .map_err(|_| Error::Parse("bad nx".into()))?;
        let ny: usize = fields[2]
            .parse()
            .map_err(|_| Error::Parse("bad ny".into()))?;
        let x0: f64 = fields[3]
            .parse()
            .map_err(|_| Error::Parse("bad x0".into()))?;
        let y0: f64 = fields[4]
            .parse()
            .map_err(|_| Error::Parse("bad y0".into()))?;
        let h: f64 = fields[5].parse().map_err(|_| Error::Parse("bad h".into()))?;
        if nx == 0 || ny == 0 || !(h > 0.0) {
            return Err(Error::Parse("mask dimensions must be positive".into()));
        }
        let mut coverage = vec![0.0; nx * ny];
        let mut rows = 0;
        for (row_idx, line) in lines.enumerate() {
            if row_idx >= ny {
                return Err(Error::Parse("too many mask rows".into()));
            }
            let j = ny - 1 - row_idx; // top row first
            let chars: Vec<char> = line.trim_end().chars().collect();
            if chars.len() != nx {
                return Err(Error::Parse(format!(
                    "row {row_idx} has {} cells, expected {nx}",
                    chars.len()
                )));
            }
            for (i, &c) in chars.iter().enumerate() {
                coverage[j * nx + i] = match c {
                    '#' => 1.0,
                    '.' => 0.0,
                    other => {
                        return Err(Error::Parse(format!("bad mask character {other:?}")))
                    }
                };
            }
            rows += 1;
        }
        if rows != ny {
            return Err(Error::Parse(format!("expected {ny} mask rows, got {rows}")));
        }
        Ok(GridMask {
            x0,
            y0,
            h,
            nx,
            ny,
            coverage,
        })
    }

    /// Serialize in the format accepted by [`from_text`] (coverage >= 1/2
    /// marks a cell covered).
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "mask {} {} {} {} {}\n",
            self.nx, self.ny, self.x0, self.y0, self.h
        );
        for row in 0..self.ny {
            let j = self.ny - 1 - row;
            for i in 0..self.nx {
                out.push(if self.coverage_at(i, j) >= 0.5 { '#' } else { '.' });
            }
            out.push('\n');
        }
        out
    }

    /// Halve the resolution by merging 2x2 cell blocks (averaging coverage);
    /// the refinement partner for error estimates on file-loaded masks.
    pub fn coarsened(&self) -> Result<GridMask> {
        if self.nx % 2 != 0 || self.ny % 2 != 0 {
            return Err(Error::invalid("mask dimensions must be even to coarsen"));
        }
        let nx = self.nx / 2;
        let ny = self.ny / 2;
        let mut coverage = vec![0.0; nx * ny];
        for j in 0..ny {
            for i in 0..nx {
                coverage[j * nx + i] = 0.25
                    * (self.coverage_at(2 * i, 2 * j)
                        + self.coverage_at(2 * i + 1, 2 * j)
                        + self.coverage_at(2 * i, 2 * j + 1)
                        + self.coverage_at(2 * i + 1, 2 * j + 1));
            }
        }
        Ok(GridMask {
            x0: self.x0,
            y0: self.y0,
            h: 2.0 * self.h,
            nx,
            ny,
            coverage,
        })
    }
}

/// Charge density sigma(z) > 0 on the domain; the plane measure with
/// U = |z|^2 corresponds to the constant 1/pi.
#[derive(Clone)]
pub enum ChargeDensity {
    Constant(f64),
    Field(Arc<dyn Fn(Complex64) -> f64 + Send + Sync>),
}

impl ChargeDensity {
    /// The droplet density of the quadratic potential, sigma = 1/pi.
    pub fn standard() -> Self {
        ChargeDensity::Constant(1.0 / std::f64::consts::PI)
    }

    pub fn eval(&self, z: Complex64) -> f64 {
        match self {
            ChargeDensity::Constant(c) => *c,
            ChargeDensity::Field(f) => f(z),
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, ChargeDensity::Constant(_))
    }
}

impl std::fmt::Debug for ChargeDensity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ChargeDensity::Constant(c) => write!(f, "ChargeDensity::Constant({c})"),
            ChargeDensity::Field(_) => write!(f, "ChargeDensity::Field(..)"),
        }
    }
}

/// Droplet geometry.
#[derive(Clone, Debug)]
pub enum DomainSpec {
    /// Disk of given center and radius, rasterized at resolution h.
    Disk {
        center: Complex64,
        radius: f64,
        h: f64,
    },
    /// Upper half-disk {|z - cx| < r, Im z > 0} with the flat side on the
    /// real axis (a fat-slit shape).
    HalfDisk { center_x: f64, radius: f64, h: f64 },
    /// An explicit coverage mask.
    Mask(GridMask),
}

impl DomainSpec {
    /// Largest distance from the origin to a covered point (rasterization
    /// box sizing).
    fn extent(&self) -> f64 {
        match self {
            DomainSpec::Disk { center, radius, .. } => center.norm() + radius,
            DomainSpec::HalfDisk {
                center_x, radius, ..
            } => center_x.abs() + radius,
            DomainSpec::Mask(m) => {
                let cx = [m.x0.abs(), (m.x0 + m.h * m.nx as f64).abs()];
                let cy = [m.y0.abs(), (m.y0 + m.h * m.ny as f64).abs()];
                (cx[0].max(cx[1]).powi(2) + cy[0].max(cy[1]).powi(2)).sqrt()
            }
        }
    }

    /// Rasterize at the native resolution divided by `refine`, inside a box
    /// of half-width `box_scale` times the domain extent (minimum 1.0 plus a
    /// couple of cells). The grid is anchored with the origin on a cell
    /// corner. Mask variants ignore both knobs and return themselves
    /// (`refine` > 1 is rejected: a bitmap has no sub-cell information).
    pub fn rasterize(&self, refine: u32, box_scale: f64) -> Result<GridMask> {
        assert!(refine >= 1);
        match self {
            DomainSpec::Mask(m) => {
                if refine > 1 {
                    return Err(Error::invalid(
                        "cannot refine a file mask; use coarsened() for error estimates",
                    ));
                }
                Ok(m.clone())
            }
            DomainSpec::Disk { center, radius, h } => {
                let h = h / f64::from(refine);
                let half = box_scale.max(1.02) * self.extent() + 2.0 * h;
                let n_half = (half / h).ceil() as usize;
                let (nx, ny) = (2 * n_half, 2 * n_half);
                let x0 = -(n_half as f64) * h;
                let y0 = x0;
                let mut coverage = vec![0.0; nx * ny];
                rasterize_disk_into(
                    &mut coverage,
                    nx,
                    x0,
                    y0,
                    h,
                    *center,
                    *radius,
                    f64::NEG_INFINITY,
                );
                Ok(GridMask {
                    x0,
                    y0,
                    h,
                    nx,
                    ny,
                    coverage,
                })
            }
            DomainSpec::HalfDisk {
                center_x, radius, h,
            } => {
                let h = h / f64::from(refine);
                let half = box_scale.max(1.02) * self.extent() + 2.0 * h;
                let n_half = (half / h).ceil() as usize;
                let nx = 2 * n_half;
                let ny = n_half;
                let x0 = -(n_half as f64) * h;
                let y0 = 0.0;
                let mut coverage = vec![0.0; nx * ny];
                rasterize_disk_into(
                    &mut coverage,
                    nx,
                    x0,
                    y0,
                    h,
                    Complex64::new(*center_x, 0.0),
                    *radius,
                    0.0,
                );
                Ok(GridMask {
                    x0,
                    y0,
                    h,
                    nx,
                    ny,
                    coverage,
                })
            }
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn rasterize_disk_into(
    coverage: &mut [f64],
    nx: usize,
    x0: f64,
    y0: f64,
    h: f64,
    center: Complex64,
    radius: f64,
    y_floor: f64,
) {
    let ny = coverage.len() / nx;
    for j in 0..ny {
        let y1 = (y0 + j as f64 * h).max(y_floor);
        let y2 = y0 + (j + 1) as f64 * h;
        if y2 <= y1 {
            continue;
        }
        for i in 0..nx {
            let x1 = x0 + i as f64 * h;
            let x2 = x1 + h;
            let a = circle_rect_area(
                radius,
                x1 - center.re,
                x2 - center.re,
                y1 - center.im,
                y2 - center.im,
            );
            coverage[j * nx + i] = (a / (h * h)).clamp(0.0, 1.0);
        }
    }
}

/// Area of {u^2 + v^2 <= r^2} intersected with [x1, x2] x [y1, y2], exact up
/// to rounding. Assembled from the corner primitive
/// C(x, y) = area{u <= x, v <= y} within the disk.
pub fn circle_rect_area(r: f64, x1: f64, x2: f64, y1: f64, y2: f64) -> f64 {
    debug_assert!(x1 <= x2 && y1 <= y2);
    (corner_area(r, x2, y2) - corner_area(r, x1, y2) - corner_area(r, x2, y1)
        + corner_area(r, x1, y1))
    .max(0.0)
}

/// S(a, b) = int_a^b sqrt(r^2 - u^2) du for -r <= a <= b <= r.
fn sqrt_strip(r: f64, a: f64, b: f64) -> f64 {
    let h = |t: f64| 0.5 * (t * (r * r - t * t).max(0.0).sqrt() + r * r * (t / r).asin());
    h(b) - h(a)
}

/// Area of the disk region {u <= x, v <= y}.
fn corner_area(r: f64, x: f64, y: f64) -> f64 {
    let x = x.clamp(-r, r);
    if y <= -r {
        return 0.0;
    }
    if x <= -r {
        return 0.0;
    }
    if y >= r {
        // full vertical extent: half-plane u <= x
        return sqrt_strip(r, -r, x) * 2.0;
    }
    let uy = (r * r - y * y).max(0.0).sqrt();
    if y >= 0.0 {
        // u in [-r, -uy]: full chord 2 s(u); u in [-uy, min(x, uy)]: y + s(u);
        // u in [uy, x]: full chord again
        let mut area = 0.0;
        let lo = (-uy).min(x);
        area += 2.0 * sqrt_strip(r, -r, lo);
        let mid_hi = x.min(uy);
        if mid_hi > -uy {
            area += y * (mid_hi + uy) + sqrt_strip(r, -uy, mid_hi);
        }
        if x > uy {
            area += 2.0 * sqrt_strip(r, uy, x);
        }
        area
    } else {
        // only u with s(u) > -y contributes, each with height y + s(u)
        let lo = -uy;
        let hi = x.min(uy);
        if hi <= lo {
            return 0.0;
        }
        y * (hi - lo) + sqrt_strip(r, lo, hi)
    }
}
