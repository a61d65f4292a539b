//! Row-major storage for grid-aligned quantities.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

/// A dense array over a rectangular block of grid indices.
///
/// Columns are the x-index `i` in `first_col..first_col + cols`; rows are the
/// y-index `j` in `0..rows`. Storage is row-major, so a fixed `j` is a
/// contiguous slice.
#[derive(Debug, Clone, PartialEq)]
pub struct GridArray<T> {
    first_col: usize,
    cols: usize,
    rows: usize,
    data: Vec<T>,
}

impl<T: Copy> GridArray<T> {
    pub fn filled(first_col: usize, cols: usize, rows: usize, value: T) -> Self {
        GridArray {
            first_col,
            cols,
            rows,
            data: vec![value; cols * rows],
        }
    }

    /// Wraps existing row-major data; `None` if the length does not match.
    pub fn from_vec(first_col: usize, cols: usize, rows: usize, data: Vec<T>) -> Option<Self> {
        (data.len() == cols * rows).then_some(GridArray {
            first_col,
            cols,
            rows,
            data,
        })
    }

    #[inline]
    pub fn first_col(&self) -> usize {
        self.first_col
    }

    /// One past the last column index.
    #[inline]
    pub fn end_col(&self) -> usize {
        self.first_col + self.cols
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn same_shape<U>(&self, other: &GridArray<U>) -> bool {
        self.first_col == other.first_col && self.cols == other.cols && self.rows == other.rows
    }

    #[inline]
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn as_mut_slice(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    /// Row `j`, indexed from `first_col`.
    #[inline]
    pub fn row(&self, j: usize) -> &[T] {
        &self.data[j * self.cols..(j + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, j: usize) -> &mut [T] {
        &mut self.data[j * self.cols..(j + 1) * self.cols]
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[self.offset(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: T) {
        let k = self.offset(i, j);
        self.data[k] = value;
    }

    #[inline]
    fn offset(&self, i: usize, j: usize) -> usize {
        debug_assert!(i >= self.first_col && i < self.end_col(), "column {i} out of range");
        debug_assert!(j < self.rows, "row {j} out of range");
        j * self.cols + (i - self.first_col)
    }

    pub fn fill(&mut self, value: T) {
        self.data.iter_mut().for_each(|v| *v = value);
    }

    /// Copies the periodic ghost rows: row 0 from row `rows - 2`, row
    /// `rows - 1` from row 1.
    pub fn sync_periodic_rows(&mut self) {
        let (c, r) = (self.cols, self.rows);
        if r < 3 {
            return;
        }
        self.data.copy_within((r - 2) * c..(r - 1) * c, 0);
        self.data.copy_within(c..2 * c, (r - 1) * c);
    }

    pub fn map<U: Copy>(&self, f: impl Fn(T) -> U) -> GridArray<U> {
        GridArray {
            first_col: self.first_col,
            cols: self.cols,
            rows: self.rows,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }
}

impl<T: Copy> Index<(usize, usize)> for GridArray<T> {
    type Output = T;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[self.offset(i, j)]
    }
}

impl<T: Copy> IndexMut<(usize, usize)> for GridArray<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        let k = self.offset(i, j);
        &mut self.data[k]
    }
}
