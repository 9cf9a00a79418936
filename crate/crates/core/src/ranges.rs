//! Range functions of invariant subspaces.
//!
//! An invariant subspace generated by a set of functions is described fiber
//! by fiber: `J(a)` is the span of the Zak fibers of the generators at `a`.
//! Each `J(a)` is stored through an orthonormal basis obtained from the SVD of
//! the `W^{1/2}`-scaled fiber matrix.

use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{column_svd, dot, ColumnSvd};
use crate::scalar::{czero, Real, Tolerances};
use crate::zak::{FiberLayout, FiberedVector, ZakTransform};

pub(crate) fn check_layouts<T: Real>(layout: &Arc<FiberLayout<T>>, gens: &[FiberedVector<T>]) -> Result<()> {
    match gens.iter().position(|g| **g.layout() != **layout) {
        Some(i) => Err(Error::Input(format!("generator {i} has a different fiber layout"))),
        None => Ok(()),
    }
}

/// Per-fiber SVD of the scaled matrix whose columns are the generator fibers.
pub(crate) fn fiber_svds<T: Real>(layout: &FiberLayout<T>, gens: &[FiberedVector<T>]) -> Vec<ColumnSvd<T>> {
    (0..layout.num_fibers())
        .into_par_iter()
        .map(|a| {
            let cols: Vec<Vec<Complex<T>>> = gens.iter().map(|g| layout.scale(g.fiber(a))).collect();
            column_svd(&cols)
        })
        .collect()
}

/// Largest singular value over every fiber.
pub(crate) fn global_scale<T: Real>(svds: &[ColumnSvd<T>]) -> T {
    svds.iter().flat_map(|s| s.singular_values.first().copied()).fold(T::zero(), T::max)
}

/// Singular values counted as nonzero: `s > tol * scale` (and `s > 0`).
pub(crate) fn numerical_rank<T: Real>(svd: &ColumnSvd<T>, tol: T, scale: T) -> usize {
    svd.singular_values.iter().take_while(|&&s| s > tol * scale && s > T::zero()).count()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Membership<T> {
    pub member: bool,
    pub residual: T,
}

/// `a -> J(a)` for a finitely generated invariant subspace.
#[derive(Clone, Debug)]
pub struct RangeFunction<T> {
    layout: Arc<FiberLayout<T>>,
    // Orthonormal in the Euclidean (W^{1/2}-scaled) coordinates.
    bases: Vec<Vec<Vec<Complex<T>>>>,
    rank_tolerance: T,
}

impl<T: Real> RangeFunction<T> {
    pub fn from_generators(layout: Arc<FiberLayout<T>>, gens: &[FiberedVector<T>], rank_tolerance: T) -> Result<Self> {
        check_layouts(&layout, gens)?;
        let svds = fiber_svds(&layout, gens);
        let scale = global_scale(&svds);
        let bases = svds
            .into_iter()
            .map(|svd| {
                let r = numerical_rank(&svd, rank_tolerance, scale);
                svd.left_vectors.into_iter().take(r).collect()
            })
            .collect();
        Ok(RangeFunction { layout, bases, rank_tolerance })
    }

    pub fn layout(&self) -> &Arc<FiberLayout<T>> {
        &self.layout
    }

    pub fn rank_tolerance(&self) -> T {
        self.rank_tolerance
    }

    pub fn dim(&self, alpha: usize) -> usize {
        self.bases[alpha].len()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.bases.iter().map(Vec::len).collect()
    }

    /// `max_a dim J(a)`, the minimal number of generators of the subspace.
    pub fn length(&self) -> usize {
        self.bases.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Columns of `Q_a`, orthonormal for the weighted fiber inner product.
    pub fn basis(&self, alpha: usize) -> Vec<Vec<Complex<T>>> {
        self.bases[alpha].iter().map(|u| self.layout.unscale(u)).collect()
    }

    fn project_fiber(&self, alpha: usize, u: &[Complex<T>]) -> Vec<Complex<T>> {
        let x = self.layout.scale(u);
        let mut out = vec![czero(); x.len()];
        for q in &self.bases[alpha] {
            let coeff = dot(q, &x);
            for (o, qi) in out.iter_mut().zip(q) {
                *o = *o + qi * coeff;
            }
        }
        self.layout.unscale(&out)
    }

    /// Fiberwise orthogonal projection onto `J`.
    pub fn project_fibers(&self, phi: &FiberedVector<T>) -> Result<FiberedVector<T>> {
        check_layouts(&self.layout, std::slice::from_ref(phi))?;
        let fibers = (0..self.layout.num_fibers())
            .into_par_iter()
            .map(|a| self.project_fiber(a, phi.fiber(a)))
            .collect();
        FiberedVector::new(self.layout.clone(), fibers)
    }

    /// `(sum_a m(a) ||Phi(a) - P_J(a) Phi(a)||^2)^{1/2}`.
    pub fn residual(&self, phi: &FiberedVector<T>) -> Result<T> {
        let proj = self.project_fibers(phi)?;
        let diff = phi.combine(Complex::new(T::one(), T::zero()), &proj, Complex::new(-T::one(), T::zero()))?;
        Ok(diff.norm_sqr().sqrt())
    }

    /// Whether `Phi(a)` lies in `J(a)` for every `a`, up to `tol * max(1, ||Phi||)`.
    pub fn membership(&self, phi: &FiberedVector<T>, tol: T) -> Result<Membership<T>> {
        let residual = self.residual(phi)?;
        let bound = tol * T::one().max(phi.norm_sqr().sqrt());
        Ok(Membership { member: residual <= bound, residual })
    }
}

/// Range function of the subspace generated by the orbits of `gens`.
pub fn range_of<T: Real>(zak: &ZakTransform<T>, gens: &[Vec<Complex<T>>], tol: &Tolerances<T>) -> Result<RangeFunction<T>> {
    let fibers = zak.forward_all(gens)?;
    RangeFunction::from_generators(zak.layout().clone(), &fibers, tol.rank)
}

pub fn membership<T: Real>(
    zak: &ZakTransform<T>,
    psi: &[Complex<T>],
    range: &RangeFunction<T>,
    tol: &Tolerances<T>,
) -> Result<Membership<T>> {
    range.membership(&zak.forward(psi)?, tol.membership)
}

/// Orthogonal projection of `psi` onto the invariant subspace described by `range`.
pub fn project<T: Real>(zak: &ZakTransform<T>, psi: &[Complex<T>], range: &RangeFunction<T>) -> Result<Vec<Complex<T>>> {
    zak.inverse(&range.project_fibers(&zak.forward(psi)?)?)
}
