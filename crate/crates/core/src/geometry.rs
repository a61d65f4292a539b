//! Staggered computational grid.
//!
//! Vertices sit at `x_i = i h_x`, `y_j = j h_y`. In x the domain runs from
//! the left outer surface at `x_0 + h_x/2` to the right outer surface at
//! `x_{n_x} + h_x/2`; vertex columns `1..=n_x` are interior. The
//! superconductor occupies columns `n_sx..=n_ex`, the blanket the remaining
//! interior columns. One y-period is covered by rows `1..=n_y`; rows `0` and
//! `n_y + 1` are periodic ghosts.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DomainGeometry {
    /// Interior vertex count in x.
    pub n_x: usize,
    /// Vertex rows per y-period (ghost rows excluded).
    pub n_y: usize,
    pub h_x: f64,
    pub h_y: f64,
    /// First superconducting column.
    pub n_sx: usize,
    /// Last superconducting column.
    pub n_ex: usize,
}

impl DomainGeometry {
    /// Builds the grid for a superconductor `sc_width_cells` vertices wide,
    /// wrapped in `blanket_cells` insulating columns on each side, with a
    /// y-period of `period_cells` rows.
    pub fn build(
        sc_width_cells: usize,
        blanket_cells: usize,
        period_cells: usize,
        h_x: f64,
        h_y: f64,
    ) -> Result<Self> {
        if sc_width_cells == 0 {
            return Err(Error::InvalidGeometry("sc_width_cells must be at least 1"));
        }
        if blanket_cells == 0 {
            return Err(Error::InvalidGeometry("blanket_cells must be at least 1"));
        }
        if period_cells == 0 {
            return Err(Error::InvalidGeometry("period_cells must be at least 1"));
        }
        if !(h_x.is_finite() && h_x > 0.0) {
            return Err(Error::InvalidGeometry("h_x must be positive and finite"));
        }
        if !(h_y.is_finite() && h_y > 0.0) {
            return Err(Error::InvalidGeometry("h_y must be positive and finite"));
        }
        let n_x = sc_width_cells + 2 * blanket_cells;
        let geom = DomainGeometry {
            n_x,
            n_y: period_cells,
            h_x,
            h_y,
            n_sx: blanket_cells + 1,
            n_ex: n_x - blanket_cells,
        };
        debug_assert!(geom.validate().is_ok());
        Ok(geom)
    }

    /// Checks the structural invariants of a hand-assembled geometry.
    pub fn validate(&self) -> Result<()> {
        if !(self.h_x.is_finite() && self.h_x > 0.0 && self.h_y.is_finite() && self.h_y > 0.0) {
            return Err(Error::InvalidGeometry("mesh widths must be positive"));
        }
        if self.n_y == 0 {
            return Err(Error::InvalidGeometry("n_y must be at least 1"));
        }
        if self.n_sx < 2 || self.n_sx > self.n_ex || self.n_ex + 1 > self.n_x {
            return Err(Error::InvalidGeometry(
                "need 2 <= n_sx <= n_ex <= n_x - 1 (nonempty blanket on both sides)",
            ));
        }
        Ok(())
    }

    /// Number of superconducting columns.
    #[inline]
    pub fn n_sc(&self) -> usize {
        self.n_ex - self.n_sx + 1
    }

    /// Stored rows, ghosts included.
    #[inline]
    pub fn rows(&self) -> usize {
        self.n_y + 2
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        i as f64 * self.h_x
    }

    #[inline]
    pub fn y(&self, j: usize) -> f64 {
        j as f64 * self.h_y
    }

    /// Length of one y-period.
    #[inline]
    pub fn period_y(&self) -> f64 {
        self.n_y as f64 * self.h_y
    }

    /// Total system width between the outer surfaces.
    #[inline]
    pub fn width(&self) -> f64 {
        self.n_x as f64 * self.h_x
    }

    /// Width of the superconductor between the two interfaces.
    #[inline]
    pub fn sc_width(&self) -> f64 {
        self.n_sc() as f64 * self.h_x
    }

    #[inline]
    pub fn area_total(&self) -> f64 {
        self.width() * self.period_y()
    }

    #[inline]
    pub fn area_sc(&self) -> f64 {
        self.sc_width() * self.period_y()
    }

    #[inline]
    pub fn cell_area(&self) -> f64 {
        self.h_x * self.h_y
    }

    /// `(i, j)` belongs to the superconducting index set.
    pub fn in_sc(&self, i: usize, j: usize) -> bool {
        (self.n_sx..=self.n_ex).contains(&i) && (1..=self.n_y).contains(&j)
    }

    /// `(i, j)` belongs to the blanket index set.
    pub fn in_blanket(&self, i: usize, j: usize) -> bool {
        let col = (1..self.n_sx).contains(&i) || (self.n_ex + 1..=self.n_x).contains(&i);
        col && (1..=self.n_y).contains(&j)
    }
}
