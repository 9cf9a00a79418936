//! Dense ground truth for the fiberwise computations.
//!
//! Everything here works directly in weighted `L^2(X)` with the full
//! synthesis matrix of the orbit system and Hermitian eigensolvers from
//! `nalgebra`, always in `f64`. No Zak transform is involved, so agreement with
//! the fiberwise results is an independent check.

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::action::QuasiInvariantAction;
use crate::error::{check_len, Result};
use crate::scalar::Real;

type C64 = Complex<f64>;

/// Relative eigenvalue threshold separating the spanned space from its complement.
pub const SPECTRAL_TOLERANCE: f64 = 1e-9;
/// Relative singular value threshold used for dense ranks.
pub const RANK_TOLERANCE: f64 = 1e-10;
/// Membership threshold, relative to `max(1, ||f||)`.
pub const MEMBERSHIP_TOLERANCE: f64 = 1e-9;

fn to_c64<T: Real>(z: &Complex<T>) -> C64 {
    C64::new(z.re.to_f64().unwrap_or(f64::NAN), z.im.to_f64().unwrap_or(f64::NAN))
}

fn weights_f64<T: Real>(a: &QuasiInvariantAction<T>) -> Vec<f64> {
    a.space().weights().iter().map(|w| w.to_f64().unwrap_or(f64::NAN)).collect()
}

/// `W^{1/2} Pi(g) phi` evaluated straight from the permutation table.
fn scaled_translate(a_table: &[usize], weights: &[f64], phi: &[C64]) -> Vec<C64> {
    // a_table = sigma_{-g}; sqrt(mu(x)) * sqrt(mu(y)/mu(x)) * phi(y) = sqrt(mu(y)) * phi(y)
    a_table.iter().map(|&y| phi[y] * weights[y].sqrt()).collect()
}

/// Columns `W^{1/2} Pi(g) phi`, generator-major and `g` in lexicographic order.
#[derive(Clone, Debug)]
pub struct SynthesisMatrix {
    matrix: DMatrix<C64>,
}

impl SynthesisMatrix {
    pub fn new<T: Real>(a: &QuasiInvariantAction<T>, gens: &[Vec<Complex<T>>]) -> Result<Self> {
        let n = a.size();
        let group = a.group();
        let weights = weights_f64(a);
        let mut columns: Vec<C64> = Vec::with_capacity(n * group.order() * gens.len());
        for phi in gens {
            check_len(n, phi.len())?;
            let phi: Vec<C64> = phi.iter().map(to_c64).collect();
            for g in 0..group.order() {
                columns.extend(scaled_translate(&a.table()[group.neg_idx(g)], &weights, &phi));
            }
        }
        Ok(SynthesisMatrix { matrix: DMatrix::from_vec(n, group.order() * gens.len(), columns) })
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn column_norms(&self) -> Vec<f64> {
        self.matrix.column_iter().map(|c| c.norm()).collect()
    }
}

fn hermitian_spectrum(m: DMatrix<C64>) -> Vec<f64> {
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Optimal frame bounds of the orbit system for its span: extreme nonzero
/// eigenvalues of the frame operator `M M^H`. `None` when every column is zero.
pub fn dense_frame_bounds<T: Real>(a: &QuasiInvariantAction<T>, gens: &[Vec<Complex<T>>]) -> Result<Option<(f64, f64)>> {
    let m = SynthesisMatrix::new(a, gens)?.matrix;
    let ev = hermitian_spectrum(&m * m.adjoint());
    let top = ev.last().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return Ok(None);
    }
    let lower = ev.iter().copied().find(|&l| l > SPECTRAL_TOLERANCE * top).unwrap_or(top);
    Ok(Some((lower, top)))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DenseRieszBounds {
    pub lower: f64,
    pub upper: f64,
    pub independent: bool,
}

/// Extreme eigenvalues of the full Gram matrix `M^H M`.
pub fn dense_riesz_bounds<T: Real>(a: &QuasiInvariantAction<T>, gens: &[Vec<Complex<T>>]) -> Result<Option<DenseRieszBounds>> {
    let m = SynthesisMatrix::new(a, gens)?.matrix;
    if m.ncols() == 0 {
        return Ok(None);
    }
    let ev = hermitian_spectrum(m.adjoint() * &m);
    let (lower, upper) = (ev[0], *ev.last().unwrap());
    if upper <= 0.0 {
        return Ok(None);
    }
    Ok(Some(DenseRieszBounds { lower, upper, independent: lower > SPECTRAL_TOLERANCE * upper }))
}

fn orthonormal_range(m: &DMatrix<C64>, scale: Option<f64>) -> Vec<nalgebra::DVector<C64>> {
    if m.ncols() == 0 || m.nrows() == 0 {
        return Vec::new();
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("left vectors requested");
    let top = scale.unwrap_or_else(|| svd.singular_values.iter().copied().fold(0.0, f64::max));
    svd.singular_values
        .iter()
        .enumerate()
        .filter(|&(_, &s)| s > RANK_TOLERANCE * top && s > 0.0)
        .map(|(i, _)| u.column(i).into_owned())
        .collect()
}

/// Least-squares residual of `W^{1/2} f` against the synthesis columns.
pub fn brute_membership<T: Real>(
    a: &QuasiInvariantAction<T>,
    f: &[Complex<T>],
    gens: &[Vec<Complex<T>>],
) -> Result<(bool, f64)> {
    check_len(a.size(), f.len())?;
    let m = SynthesisMatrix::new(a, gens)?.matrix;
    let weights = weights_f64(a);
    let target = nalgebra::DVector::from_iterator(f.len(), f.iter().zip(&weights).map(|(z, w)| to_c64(z) * w.sqrt()));
    let mut residual = target.clone();
    for u in orthonormal_range(&m, None) {
        let coeff = u.dotc(&target);
        residual -= u * coeff;
    }
    let r = residual.norm();
    Ok((r <= MEMBERSHIP_TOLERANCE * target.norm().max(1.0), r))
}

/// For each character `a` of the acting group, the dimension of the part of
/// the generated space on which `Pi(g)` acts as multiplication by `(g, a)`.
/// Computed with the isotypic projections `P_a = |G|^{-1} sum_g conj((g, a)) Pi(g)`.
pub fn dense_fiber_ranks<T: Real>(a: &QuasiInvariantAction<T>, gens: &[Vec<Complex<T>>]) -> Result<Vec<usize>> {
    let n = a.size();
    let group = a.group();
    let order = group.order();
    let weights = weights_f64(a);
    let mut projected = Vec::with_capacity(order);
    for alpha in 0..order {
        let mut cols: Vec<C64> = Vec::with_capacity(n * gens.len());
        for phi in gens {
            check_len(n, phi.len())?;
            let phi: Vec<C64> = phi.iter().map(to_c64).collect();
            let mut acc = vec![C64::new(0.0, 0.0); n];
            for g in 0..order {
                let chi: C64 = group.character(&group.element(g), &group.element(alpha))?;
                let t = scaled_translate(&a.table()[group.neg_idx(g)], &weights, &phi);
                for (s, v) in acc.iter_mut().zip(t) {
                    *s += chi.conj() * v / order as f64;
                }
            }
            cols.extend(acc);
        }
        projected.push(DMatrix::from_vec(n, gens.len(), cols));
    }
    let scale = projected
        .iter()
        .filter(|m| m.ncols() > 0)
        .map(|m| m.clone().singular_values().iter().copied().fold(0.0, f64::max))
        .fold(0.0, f64::max);
    Ok(projected.iter().map(|m| orthonormal_range(m, Some(scale)).len()).collect())
}
