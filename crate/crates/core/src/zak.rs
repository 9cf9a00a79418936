//! The generalized Zak transform `L^2(X) -> L^2(dual, L^2(C))` and the fibered
//! vectors it produces.

use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;

use crate::action::{QuasiInvariantAction, TilingTransversal};
use crate::error::{check_len, Error, Result};
use crate::group::{dft_with_table, inverse_dft_with_table};
use crate::scalar::{czero, from_usize, Real};

/// Shape and geometry shared by all fibered vectors of one transform: the
/// number of fibers, the masses of the transversal points, and the mass of a
/// single fiber (`1/|G|` for the normalized dual measure).
#[derive(Clone, Debug, PartialEq)]
pub struct FiberLayout<T> {
    num_fibers: usize,
    weights: Vec<T>,
    fiber_measure: T,
}

impl<T: Real> FiberLayout<T> {
    pub fn new(num_fibers: usize, weights: Vec<T>, fiber_measure: T) -> Self {
        FiberLayout { num_fibers, weights, fiber_measure }
    }

    pub fn num_fibers(&self) -> usize {
        self.num_fibers
    }

    /// Length of each fiber (`|C|`).
    pub fn width(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn fiber_measure(&self) -> T {
        self.fiber_measure
    }

    /// Multiplies by `W^{1/2}` so the weighted fiber geometry becomes Euclidean.
    pub(crate) fn scale(&self, u: &[Complex<T>]) -> Vec<Complex<T>> {
        u.iter().zip(&self.weights).map(|(z, w)| z * w.sqrt()).collect()
    }

    pub(crate) fn unscale(&self, u: &[Complex<T>]) -> Vec<Complex<T>> {
        u.iter().zip(&self.weights).map(|(z, w)| z / w.sqrt()).collect()
    }

    pub fn fiber_inner(&self, u: &[Complex<T>], v: &[Complex<T>]) -> Complex<T> {
        u.iter().zip(v).zip(&self.weights).fold(czero(), |acc, ((a, b), &w)| acc + a * b.conj() * w)
    }

    pub fn fiber_norm_sqr(&self, u: &[Complex<T>]) -> T {
        u.iter().zip(&self.weights).map(|(a, &w)| a.norm_sqr() * w).sum()
    }
}

/// An element of `L^2(dual, L^2(C))`: one complex vector per dual point.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberedVector<T> {
    layout: Arc<FiberLayout<T>>,
    fibers: Vec<Vec<Complex<T>>>,
}

impl<T: Real> FiberedVector<T> {
    pub fn new(layout: Arc<FiberLayout<T>>, fibers: Vec<Vec<Complex<T>>>) -> Result<Self> {
        check_len(layout.num_fibers(), fibers.len())?;
        for f in &fibers {
            check_len(layout.width(), f.len())?;
        }
        Ok(FiberedVector { layout, fibers })
    }

    pub fn zeros(layout: Arc<FiberLayout<T>>) -> Self {
        let fibers = vec![vec![czero(); layout.width()]; layout.num_fibers()];
        FiberedVector { layout, fibers }
    }

    pub fn layout(&self) -> &Arc<FiberLayout<T>> {
        &self.layout
    }

    pub fn fibers(&self) -> &[Vec<Complex<T>>] {
        &self.fibers
    }

    pub fn fiber(&self, alpha: usize) -> &[Complex<T>] {
        &self.fibers[alpha]
    }

    pub fn num_fibers(&self) -> usize {
        self.fibers.len()
    }

    pub fn fiber_inner(&self, alpha: usize, other: &Self) -> Complex<T> {
        self.layout.fiber_inner(&self.fibers[alpha], &other.fibers[alpha])
    }

    pub fn fiber_norm_sqr(&self, alpha: usize) -> T {
        self.layout.fiber_norm_sqr(&self.fibers[alpha])
    }

    pub fn norm_sqr(&self) -> T {
        let total: T = (0..self.num_fibers()).map(|a| self.fiber_norm_sqr(a)).sum();
        total * self.layout.fiber_measure()
    }

    pub fn inner(&self, other: &Self) -> Complex<T> {
        let total: Complex<T> = (0..self.num_fibers()).map(|a| self.fiber_inner(a, other)).sum();
        total * self.layout.fiber_measure()
    }

    /// `a * self + b * other`.
    pub fn combine(&self, a: Complex<T>, other: &Self, b: Complex<T>) -> Result<Self> {
        if self.layout != other.layout {
            return Err(Error::Input("fibered vectors have different layouts".into()));
        }
        let fibers = self
            .fibers
            .iter()
            .zip(&other.fibers)
            .map(|(u, v)| u.iter().zip(v).map(|(x, y)| x * a + y * b).collect())
            .collect();
        Ok(FiberedVector { layout: self.layout.clone(), fibers })
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_deviation(&self, other: &Self) -> T {
        self.fibers
            .iter()
            .flatten()
            .zip(other.fibers.iter().flatten())
            .map(|(x, y)| (x - y).norm())
            .fold(T::zero(), T::max)
    }
}

/// Zak transform attached to a free action, with its orbit tables cached.
#[derive(Clone, Debug)]
pub struct ZakTransform<T> {
    action: QuasiInvariantAction<T>,
    transversal: TilingTransversal,
    layout: Arc<FiberLayout<T>>,
    characters: Vec<Complex<T>>,
    // orbits[c][g] = (sigma_{-g}(x_c), J(-g, x_c)^{1/2})
    orbits: Vec<Vec<(usize, T)>>,
}

impl<T: Real> ZakTransform<T> {
    pub fn new(action: &QuasiInvariantAction<T>) -> Result<Self> {
        let transversal = action.tiling_transversal()?;
        let group = action.group();
        let order = group.order();
        let weights: Vec<T> = transversal.points().iter().map(|&x| action.space().weights()[x]).collect();
        let layout = Arc::new(FiberLayout::new(order, weights, T::one() / from_usize::<T>(order)));
        let orbits = transversal
            .points()
            .iter()
            .map(|&x| {
                (0..order)
                    .map(|g| {
                        let minus = group.neg_idx(g);
                        (action.apply(minus, x), action.jacobian_idx(minus, x).sqrt())
                    })
                    .collect()
            })
            .collect();
        Ok(ZakTransform {
            action: action.clone(),
            transversal,
            layout,
            characters: group.character_table(),
            orbits,
        })
    }

    pub fn action(&self) -> &QuasiInvariantAction<T> {
        &self.action
    }

    pub fn transversal(&self) -> &TilingTransversal {
        &self.transversal
    }

    pub fn layout(&self) -> &Arc<FiberLayout<T>> {
        &self.layout
    }

    /// `(g, a)` for flat indices.
    pub fn character(&self, g: usize, a: usize) -> Complex<T> {
        self.characters[g * self.layout.num_fibers() + a]
    }

    /// The orbit sequence `g -> (Pi(g) psi)(x_c)` for transversal point `c`.
    fn orbit_sequence(&self, c: usize, psi: &[Complex<T>]) -> Vec<Complex<T>> {
        self.orbits[c].iter().map(|&(y, s)| psi[y] * s).collect()
    }

    /// `||psi_sigma(., x_c)||^2_{l^2(G)}` for every transversal point.
    pub fn orbit_norms(&self, psi: &[Complex<T>]) -> Result<Vec<T>> {
        check_len(self.action.size(), psi.len())?;
        Ok((0..self.transversal.len())
            .map(|c| self.orbit_sequence(c, psi).iter().map(|z| z.norm_sqr()).sum())
            .collect())
    }

    pub fn forward(&self, psi: &[Complex<T>]) -> Result<FiberedVector<T>> {
        check_len(self.action.size(), psi.len())?;
        let columns: Vec<Vec<Complex<T>>> = (0..self.transversal.len())
            .into_par_iter()
            .map(|c| dft_with_table(&self.characters, &self.orbit_sequence(c, psi)))
            .collect();
        let fibers = (0..self.layout.num_fibers())
            .map(|a| columns.iter().map(|col| col[a]).collect())
            .collect();
        Ok(FiberedVector { layout: self.layout.clone(), fibers })
    }

    pub fn inverse(&self, phi: &FiberedVector<T>) -> Result<Vec<Complex<T>>> {
        if **phi.layout() != *self.layout {
            return Err(Error::Input("fibered vector does not match this transform".into()));
        }
        let sequences: Vec<Vec<Complex<T>>> = (0..self.transversal.len())
            .into_par_iter()
            .map(|c| {
                let values: Vec<Complex<T>> = phi.fibers().iter().map(|f| f[c]).collect();
                inverse_dft_with_table(&self.characters, &values)
            })
            .collect();
        let mut psi = vec![czero(); self.action.size()];
        for (c, seq) in sequences.iter().enumerate() {
            for (&(y, s), v) in self.orbits[c].iter().zip(seq) {
                psi[y] = v / s;
            }
        }
        Ok(psi)
    }

    pub fn forward_all(&self, functions: &[Vec<Complex<T>>]) -> Result<Vec<FiberedVector<T>>> {
        functions.iter().map(|f| self.forward(f)).collect()
    }
}
