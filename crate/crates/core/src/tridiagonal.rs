//! Direct solvers for tridiagonal and periodic (cyclic) tridiagonal systems.
//!
//! The non-periodic case is the Thomas algorithm with the factors kept for
//! reuse. The periodic case removes the two corner couplings with a rank-one
//! modification and restores them with the Sherman-Morrison formula, so one
//! factorization of the reduced system serves every right-hand side.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Debug;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Field of coefficients a system may be built over.
pub trait Scalar:
    Copy
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn modulus(self) -> f64;
    fn finite(self) -> bool;
}

impl Scalar for f64 {
    #[inline]
    fn modulus(self) -> f64 {
        if self < 0.0 {
            -self
        } else {
            self
        }
    }
    #[inline]
    fn finite(self) -> bool {
        self.is_finite()
    }
}

impl Scalar for Complex64 {
    #[inline]
    fn modulus(self) -> f64 {
        self.norm()
    }
    #[inline]
    fn finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

/// `lower[i]` multiplies `x[i-1]` in row `i`, `upper[i]` multiplies `x[i+1]`.
/// With `periodic` set, `lower[0]` couples row 0 to `x[n-1]` and
/// `upper[n-1]` couples row `n-1` to `x[0]`; otherwise those two entries
/// are ignored.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem<T> {
    pub lower: Vec<T>,
    pub diag: Vec<T>,
    pub upper: Vec<T>,
    pub periodic: bool,
}

impl<T: Scalar> TridiagonalSystem<T> {
    pub fn new(lower: Vec<T>, diag: Vec<T>, upper: Vec<T>, periodic: bool) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::ShapeMismatch("tridiagonal system needs n >= 1"));
        }
        if lower.len() != diag.len() || upper.len() != diag.len() {
            return Err(Error::ShapeMismatch("tridiagonal bands must have equal length"));
        }
        Ok(TridiagonalSystem {
            lower,
            diag,
            upper,
            periodic,
        })
    }

    /// Constant bands `(a, b, c)` of size `n`.
    pub fn constant(n: usize, lower: T, diag: T, upper: T, periodic: bool) -> Result<Self> {
        Self::new(vec![lower; n], vec![diag; n], vec![upper; n], periodic)
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Matrix-vector product.
    pub fn apply(&self, x: &[T]) -> Vec<T> {
        let n = self.len();
        assert_eq!(x.len(), n);
        let mut out = vec![T::zero(); n];
        for i in 0..n {
            let mut acc = self.diag[i] * x[i];
            if i > 0 {
                acc = acc + self.lower[i] * x[i - 1];
            } else if self.periodic {
                acc = acc + self.lower[0] * x[n - 1];
            }
            if i + 1 < n {
                acc = acc + self.upper[i] * x[i + 1];
            } else if self.periodic {
                acc = acc + self.upper[n - 1] * x[0];
            }
            out[i] = acc;
        }
        out
    }
}

/// Reusable factored form of a [`TridiagonalSystem`].
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization<T> {
    n: usize,
    lower: Vec<T>,
    inv_pivot: Vec<T>,
    gamma: Vec<T>,
    // Sherman-Morrison data, empty unless periodic with n >= 3.
    z: Vec<T>,
    v_last: T,
    inv_sm: T,
}

impl<T: Scalar> Factorization<T> {
    pub fn factor(system: &TridiagonalSystem<T>) -> Result<Self> {
        let mut f = Factorization {
            n: 0,
            lower: Vec::new(),
            inv_pivot: Vec::new(),
            gamma: Vec::new(),
            z: Vec::new(),
            v_last: T::zero(),
            inv_sm: T::zero(),
        };
        f.refactor(&system.lower, &system.diag, &system.upper, system.periodic)?;
        Ok(f)
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Refactors in place, reusing the allocations of `self`.
    pub fn refactor(&mut self, lower: &[T], diag: &[T], upper: &[T], periodic: bool) -> Result<()> {
        let n = diag.len();
        if n == 0 || lower.len() != n || upper.len() != n {
            return Err(Error::ShapeMismatch("tridiagonal bands must have equal nonzero length"));
        }
        self.n = n;
        self.lower.clear();
        self.lower.extend_from_slice(lower);
        self.inv_pivot.resize(n, T::zero());
        self.gamma.resize(n, T::zero());
        self.z.clear();
        self.v_last = T::zero();
        self.inv_sm = T::zero();

        let mut upper_eff = T::zero();
        let mut d_first = diag[0];
        let mut d_last = diag[n - 1];
        let cyclic = periodic && n >= 3;
        let (mut c_tr, mut c_bl, mut shift) = (T::zero(), T::zero(), T::zero());
        if periodic && n == 1 {
            d_first = diag[0] + lower[0] + upper[0];
        } else if periodic && n == 2 {
            // The corner couplings land on the same entries as the bands.
            self.lower[1] = lower[1] + upper[1];
            upper_eff = upper[0] + lower[0];
        } else if cyclic {
            c_tr = lower[0];
            c_bl = upper[n - 1];
            shift = if diag[0] == T::zero() { -T::one() } else { -diag[0] };
            d_first = diag[0] - shift;
            d_last = diag[n - 1] - c_bl * c_tr / shift;
        }

        let band_upper = |i: usize| if periodic && n == 2 && i == 0 { upper_eff } else { upper[i] };
        let mut prev_gamma = T::zero();
        for i in 0..n {
            let d = if i == 0 {
                d_first
            } else if i == n - 1 {
                d_last
            } else {
                diag[i]
            };
            let pivot = if i == 0 { d } else { d - self.lower[i] * prev_gamma };
            if pivot.modulus() == 0.0 || !pivot.finite() {
                return Err(Error::SingularPivot { row: i });
            }
            let inv = T::one() / pivot;
            self.inv_pivot[i] = inv;
            prev_gamma = if i + 1 < n { band_upper(i) * inv } else { T::zero() };
            self.gamma[i] = prev_gamma;
        }

        if cyclic {
            let mut u = vec![T::zero(); n];
            u[0] = shift;
            u[n - 1] = c_bl;
            self.thomas_in_place(&mut u);
            self.v_last = c_tr / shift;
            let denom = T::one() + u[0] + self.v_last * u[n - 1];
            if denom.modulus() == 0.0 || !denom.finite() {
                return Err(Error::SingularPivot { row: n - 1 });
            }
            self.inv_sm = T::one() / denom;
            self.z = u;
        }
        Ok(())
    }

    fn thomas_in_place(&self, rhs: &mut [T]) {
        let n = self.n;
        rhs[0] = rhs[0] * self.inv_pivot[0];
        for i in 1..n {
            rhs[i] = (rhs[i] - self.lower[i] * rhs[i - 1]) * self.inv_pivot[i];
        }
        for i in (0..n - 1).rev() {
            rhs[i] = rhs[i] - self.gamma[i] * rhs[i + 1];
        }
    }

    /// Overwrites `rhs` with the solution.
    pub fn solve_in_place(&self, rhs: &mut [T]) {
        assert_eq!(rhs.len(), self.n, "right-hand side length must match the system");
        self.thomas_in_place(rhs);
        if !self.z.is_empty() {
            let n = self.n;
            let f = (rhs[0] + self.v_last * rhs[n - 1]) * self.inv_sm;
            for (x, &z) in rhs.iter_mut().zip(&self.z) {
                *x = *x - f * z;
            }
        }
    }

    pub fn solve(&self, rhs: &[T]) -> Vec<T> {
        let mut x = rhs.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}
