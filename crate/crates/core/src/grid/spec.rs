use serde::{Deserialize, Serialize};

use crate::analysis::special::sphere_area;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    /// Uniform tensor grid on the box `[-L, L]^N`.
    Full,
    /// One-dimensional grid in `|x|` on `[0, L]`, cell-centred so the origin
    /// is never a node.
    Radial,
}

/// Uniform cell-centred grid. Full boxes have spacing `2L/n`; radial grids
/// put `n` cells on `[0, L]`, so their spacing is `L/n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    dim: usize,
    geometry: Geometry,
    half_width: f64,
    n: usize,
}

impl GridSpec {
    pub fn new(dim: usize, geometry: Geometry, half_width: f64, n: usize) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidGrid(format!("dimension {dim} not in 1..=3")));
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidGrid(format!("half-width must be positive, got {half_width}")));
        }
        if n < 16 || n % 2 != 0 {
            return Err(Error::InvalidGrid(format!("points per axis must be even and >= 16, got {n}")));
        }
        if geometry == Geometry::Full && n.checked_pow(dim as u32).is_none_or(|c| c > 1 << 26) {
            return Err(Error::InvalidGrid(format!("{n}^{dim} full grid is too large")));
        }
        Ok(Self { dim, geometry, half_width, n })
    }

    pub fn full(dim: usize, half_width: f64, n: usize) -> Result<Self> {
        Self::new(dim, Geometry::Full, half_width, n)
    }

    pub fn radial(dim: usize, half_width: f64, n: usize) -> Result<Self> {
        Self::new(dim, Geometry::Radial, half_width, n)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn points_per_axis(&self) -> usize {
        self.n
    }

    pub fn spacing(&self) -> f64 {
        match self.geometry {
            Geometry::Full => 2.0 * self.half_width / self.n as f64,
            Geometry::Radial => self.half_width / self.n as f64,
        }
    }

    /// Number of stored values.
    pub fn len(&self) -> usize {
        match self.geometry {
            Geometry::Full => self.n.pow(self.dim as u32),
            Geometry::Radial => self.n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Same domain, `factor` times more points per axis.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        Self::new(self.dim, self.geometry, self.half_width, self.n * factor)
    }

    /// Coordinate of the `i`-th cell centre along one axis.
    pub fn axis_coord(&self, i: usize) -> f64 {
        let h = self.spacing();
        match self.geometry {
            Geometry::Full => -self.half_width + (i as f64 + 0.5) * h,
            Geometry::Radial => (i as f64 + 0.5) * h,
        }
    }

    pub fn axis_coords(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.axis_coord(i)).collect()
    }

    /// Multi-index of a flat (row-major) index on a full grid.
    pub fn unravel(&self, mut idx: usize) -> [usize; 3] {
        let mut out = [0; 3];
        for axis in (0..self.dim).rev() {
            out[axis] = idx % self.n;
            idx /= self.n;
        }
        out
    }

    /// Distance from the origin of the centre of cell `idx`.
    pub fn radius(&self, idx: usize) -> f64 {
        match self.geometry {
            Geometry::Radial => self.axis_coord(idx),
            Geometry::Full => {
                let m = self.unravel(idx);
                (0..self.dim)
                    .map(|a| self.axis_coord(m[a]).powi(2))
                    .sum::<f64>()
                    .sqrt()
            }
        }
    }

    /// Midpoint quadrature weight of cell `idx`.
    pub fn cell_weight(&self, idx: usize) -> f64 {
        let h = self.spacing();
        match self.geometry {
            Geometry::Full => h.powi(self.dim as i32),
            Geometry::Radial => {
                let r = self.axis_coord(idx);
                sphere_area(self.dim) * r.powi(self.dim as i32 - 1) * h
            }
        }
    }

    pub fn weights(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.cell_weight(i)).collect()
    }

    /// Whether each cell is an interval in `|x|` (1-D boxes and radial grids),
    /// which is what the analytic cell corrections require.
    pub(crate) fn cells_are_shells(&self) -> bool {
        self.geometry == Geometry::Radial || self.dim == 1
    }

    /// `|x|`-interval and radial weight constant of a shell-type cell.
    pub(crate) fn shell(&self, idx: usize) -> (f64, f64, f64) {
        let h = self.spacing();
        let c = self.axis_coord(idx);
        match self.geometry {
            Geometry::Radial => (c - 0.5 * h, c + 0.5 * h, sphere_area(self.dim)),
            Geometry::Full => {
                let r = c.abs();
                ((r - 0.5 * h).max(0.0), r + 0.5 * h, 1.0)
            }
        }
    }

    /// Weight constant for the exterior `|x| > L` (two half-lines in 1-D).
    pub(crate) fn exterior_weight(&self) -> Option<f64> {
        match self.geometry {
            Geometry::Radial => Some(sphere_area(self.dim)),
            Geometry::Full if self.dim == 1 => Some(2.0),
            Geometry::Full => None,
        }
    }

    /// Lebesgue measure of the represented domain.
    pub fn domain_measure(&self) -> f64 {
        match self.geometry {
            Geometry::Full => (2.0 * self.half_width).powi(self.dim as i32),
            Geometry::Radial => {
                sphere_area(self.dim) * self.half_width.powi(self.dim as i32) / self.dim as f64
            }
        }
    }
}

/// Half-width making the Gaussian `e^{-|x|²/(4s)}` tail beyond `L` smaller
/// than `1e-8` of its mass (with a safety factor for later smoothing to time
/// `t_max`).
pub fn gaussian_half_width(s: f64, t_max: f64) -> f64 {
    // e^{-L²/(4(s+t))} < 1e-8  ⇔  L > sqrt(4 (s+t) ln 1e8)
    (4.0 * (s + t_max) * (1e8f64).ln()).sqrt().ceil()
}
