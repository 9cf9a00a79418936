//! Small dense kernels for the fiberwise computations.
//!
//! Fibers are short complex vectors, so a one-sided (Hestenes) Jacobi SVD is
//! used: it yields singular values with high relative accuracy and needs no
//! external LAPACK.

use num_complex::Complex;

use crate::scalar::{czero, Real};

#[inline]
pub(crate) fn dot<T: Real>(u: &[Complex<T>], v: &[Complex<T>]) -> Complex<T> {
    // u^H v
    u.iter().zip(v).fold(czero(), |acc, (a, b)| acc + a.conj() * b)
}

#[inline]
pub(crate) fn norm_sqr<T: Real>(u: &[Complex<T>]) -> T {
    u.iter().map(|z| z.norm_sqr()).sum()
}

/// Thin SVD data of a matrix given by its columns: singular values sorted
/// descending, and for each a left singular vector (unit norm, or zero when
/// the singular value is exactly zero).
#[derive(Clone, Debug)]
pub struct ColumnSvd<T> {
    pub singular_values: Vec<T>,
    pub left_vectors: Vec<Vec<Complex<T>>>,
}

/// One-sided Jacobi SVD of the `rows x columns.len()` matrix whose columns are
/// `columns`. Returns one singular value per column (so rank-deficient and
/// wide matrices report trailing zeros).
pub fn column_svd<T: Real>(columns: &[Vec<Complex<T>>]) -> ColumnSvd<T> {
    let mut cols: Vec<Vec<Complex<T>>> = columns.to_vec();
    let n = cols.len();
    let eps = T::epsilon();
    let two = T::one() + T::one();
    for _sweep in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let alpha = norm_sqr(&cols[p]);
                let beta = norm_sqr(&cols[q]);
                if alpha == T::zero() || beta == T::zero() {
                    continue;
                }
                let gamma = dot(&cols[p], &cols[q]);
                let g = gamma.norm();
                if g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (two * g);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let t = if zeta == T::zero() { T::one() } else { t };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                let (left, right) = cols.split_at_mut(q);
                let (ap, aq) = (&mut left[p], &mut right[0]);
                for (x, y) in ap.iter_mut().zip(aq.iter_mut()) {
                    let b = *y * phase.conj();
                    let new_p = *x * c - b * s;
                    let new_q = *x * s + b * c;
                    *x = new_p;
                    *y = new_q;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let mut pairs: Vec<(T, Vec<Complex<T>>)> = cols
        .into_iter()
        .map(|col| {
            let s = norm_sqr(&col).sqrt();
            let u = if s > T::zero() { col.into_iter().map(|z| z / s).collect() } else { col };
            (s, u)
        })
        .collect();
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
    let (singular_values, left_vectors) = pairs.into_iter().unzip();
    ColumnSvd { singular_values, left_vectors }
}
