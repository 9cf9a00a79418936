//! Frame and Riesz bounds of orbit systems, computed fiber by fiber.
//!
//! In finite dimensions every finite system is a frame for its span, so the
//! reports carry the optimal bounds: the extreme nonzero squared singular
//! values of the fiber matrices (frame) or the extreme Gram eigenvalues over
//! all fibers (Riesz).

use std::sync::Arc;

use num_complex::Complex;

use crate::error::Result;
use crate::ranges::{check_layouts, fiber_svds, global_scale, numerical_rank};
use crate::scalar::{Real, Tolerances};
use crate::zak::{FiberLayout, FiberedVector, ZakTransform};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    Frame,
    Riesz,
}

/// Spectral data of one fiber.
#[derive(Clone, Debug, PartialEq)]
pub struct FiberBounds<T> {
    pub dim: usize,
    /// Smallest squared singular value on `J(a)`; `None` when `J(a) = 0`.
    pub smin2_range: Option<T>,
    pub smax2: T,
    /// Smallest Gram eigenvalue, zeros included.
    pub full_smin2: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrameReport<T> {
    pub kind: BoundKind,
    pub fibers: Vec<FiberBounds<T>>,
    /// Fibers where the system is nonzero.
    pub support: Vec<usize>,
    /// Optimal bounds of the requested kind; `None` for a degenerate system.
    pub lower: Option<T>,
    pub upper: Option<T>,
    pub degenerate: bool,
    pub is_bessel: bool,
    pub is_frame: bool,
    pub is_parseval: bool,
    pub is_riesz: bool,
    pub tolerance: Tolerances<T>,
}

impl<T: Real> FrameReport<T> {
    pub fn bounds(&self) -> Option<(T, T)> {
        self.lower.zip(self.upper)
    }

    fn assemble(kind: BoundKind, fibers: Vec<FiberBounds<T>>, tolerance: Tolerances<T>) -> Self {
        let support: Vec<usize> = fibers.iter().enumerate().filter(|(_, f)| f.dim > 0).map(|(a, _)| a).collect();
        let degenerate = support.is_empty();
        let frame_lower = fibers.iter().filter_map(|f| f.smin2_range).reduce(T::min);
        let upper = fibers.iter().map(|f| f.smax2).reduce(T::max).filter(|_| !degenerate);
        let riesz_lower = fibers.iter().map(|f| f.full_smin2).reduce(T::min).filter(|_| !degenerate);
        let is_frame = !degenerate;
        let is_parseval = match (frame_lower, upper) {
            (Some(a), Some(b)) => {
                is_frame && (a - T::one()).abs() <= tolerance.verdict && (b - T::one()).abs() <= tolerance.verdict
            }
            _ => false,
        };
        let is_riesz = match (riesz_lower, upper) {
            (Some(a), Some(b)) => a > tolerance.riesz * b,
            _ => false,
        };
        let lower = match kind {
            BoundKind::Frame => frame_lower,
            BoundKind::Riesz => riesz_lower,
        };
        FrameReport {
            kind,
            fibers,
            support,
            lower,
            upper,
            degenerate,
            is_bessel: true,
            is_frame,
            is_parseval,
            is_riesz,
            tolerance,
        }
    }
}

/// Bounds of the system `{X_g Phi : g, Phi in gens}` from its fibers.
pub fn fiber_report<T: Real>(
    layout: &Arc<FiberLayout<T>>,
    gens: &[FiberedVector<T>],
    kind: BoundKind,
    tol: &Tolerances<T>,
) -> Result<FrameReport<T>> {
    check_layouts(layout, gens)?;
    let svds = fiber_svds(layout, gens);
    let scale = global_scale(&svds);
    let fibers = svds
        .iter()
        .map(|svd| {
            let dim = numerical_rank(svd, tol.rank, scale);
            let s2: Vec<T> = svd.singular_values.iter().map(|&s| s * s).collect();
            FiberBounds {
                dim,
                smin2_range: if dim > 0 { Some(s2[dim - 1]) } else { None },
                smax2: s2.first().copied().unwrap_or(T::zero()),
                full_smin2: s2.last().copied().unwrap_or(T::zero()),
            }
        })
        .collect();
    Ok(FrameReport::assemble(kind, fibers, *tol))
}

pub fn frame_check<T: Real>(zak: &ZakTransform<T>, gens: &[Vec<Complex<T>>], tol: &Tolerances<T>) -> Result<FrameReport<T>> {
    fiber_report(zak.layout(), &zak.forward_all(gens)?, BoundKind::Frame, tol)
}

pub fn riesz_check<T: Real>(zak: &ZakTransform<T>, gens: &[Vec<Complex<T>>], tol: &Tolerances<T>) -> Result<FrameReport<T>> {
    fiber_report(zak.layout(), &zak.forward_all(gens)?, BoundKind::Riesz, tol)
}

/// `[psi, phi](a) = <Z psi(a), Z phi(a)>`.
#[derive(Clone, Debug, PartialEq)]
pub struct BracketFunction<T> {
    values: Vec<Complex<T>>,
    fiber_measure: T,
}

impl<T: Real> BracketFunction<T> {
    pub fn from_fibers(psi: &FiberedVector<T>, phi: &FiberedVector<T>) -> Result<Self> {
        check_layouts(psi.layout(), std::slice::from_ref(phi))?;
        let values = (0..psi.num_fibers()).map(|a| psi.fiber_inner(a, phi)).collect();
        Ok(BracketFunction { values, fiber_measure: psi.layout().fiber_measure() })
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    /// Integral over the dual with its normalized measure; equals `<psi, phi>`.
    pub fn integral(&self) -> Complex<T> {
        self.values.iter().copied().sum::<Complex<T>>() * self.fiber_measure
    }
}

pub fn bracket<T: Real>(zak: &ZakTransform<T>, psi: &[Complex<T>], phi: &[Complex<T>]) -> Result<BracketFunction<T>> {
    BracketFunction::from_fibers(&zak.forward(psi)?, &zak.forward(phi)?)
}

/// Frame and Riesz data of a single orbit, read off the bracket `[psi, psi]`.
pub fn single_generator_fibers<T: Real>(
    zpsi: &FiberedVector<T>,
    tol: &Tolerances<T>,
) -> (FrameReport<T>, BracketFunction<T>) {
    let br = BracketFunction::from_fibers(zpsi, zpsi).expect("same layout");
    let norms: Vec<T> = br.values.iter().map(|v| v.re.max(T::zero())).collect();
    let scale = norms.iter().map(|n| n.sqrt()).fold(T::zero(), T::max);
    let fibers = norms
        .iter()
        .map(|&n| {
            let on = n > T::zero() && n.sqrt() > tol.rank * scale;
            FiberBounds { dim: usize::from(on), smin2_range: on.then_some(n), smax2: n, full_smin2: n }
        })
        .collect();
    (FrameReport::assemble(BoundKind::Frame, fibers, *tol), br)
}

pub fn single_generator_report<T: Real>(
    zak: &ZakTransform<T>,
    psi: &[Complex<T>],
    tol: &Tolerances<T>,
) -> Result<(FrameReport<T>, BracketFunction<T>)> {
    Ok(single_generator_fibers(&zak.forward(psi)?, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{delta, psi_star, s1, s2};

    fn sum(a: &[Complex<f64>], b: &[Complex<f64>]) -> Vec<Complex<f64>> {
        a.iter().zip(b).map(|(x, y)| x + y).collect()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * b.abs().max(1.0)
    }

    #[test]
    fn s1_orthonormal_basis_is_parseval_and_riesz() {
        let z = ZakTransform::new(&s1::<f64>()).unwrap();
        let tol = Tolerances::default();
        let r = frame_check(&z, &[delta(8, 0), delta(8, 1)], &tol).unwrap();
        let (a, b) = r.bounds().unwrap();
        assert!(close(a, 1.0) && close(b, 1.0));
        assert!(r.is_parseval && r.is_riesz);
        let r = riesz_check(&z, &[delta(8, 0), delta(8, 1)], &tol).unwrap();
        let (a, b) = r.bounds().unwrap();
        assert!(close(a, 1.0) && close(b, 1.0));
    }

    #[test]
    fn s1_colinear_pair() {
        let z = ZakTransform::new(&s1::<f64>()).unwrap();
        let tol = Tolerances::default();
        let gens = [delta(8, 0), sum(&delta(8, 0), &delta(8, 2))];
        let r = frame_check(&z, &gens, &tol).unwrap();
        let (a, b) = r.bounds().unwrap();
        assert!(close(a, 1.0) && close(b, 5.0), "{a} {b}");
        let smax: Vec<f64> = r.fibers.iter().map(|f| f.smax2).collect();
        for (got, want) in smax.iter().zip([5.0, 3.0, 1.0, 3.0]) {
            assert!(close(*got, want));
        }
        assert!(!r.is_parseval && !r.is_riesz && r.is_frame);
        let r = riesz_check(&z, &gens, &tol).unwrap();
        assert!(!r.is_riesz);
        assert!(r.lower.unwrap() < 1e-12);
    }

    #[test]
    fn brackets_on_s1() {
        let z = ZakTransform::new(&s1::<f64>()).unwrap();
        let b00 = bracket(&z, &delta(8, 0), &delta(8, 0)).unwrap();
        assert!(b00.values().iter().all(|v| *v == Complex::new(1.0, 0.0)));
        let b01 = bracket(&z, &delta(8, 0), &delta(8, 1)).unwrap();
        assert!(b01.values().iter().all(|v| v.norm() == 0.0));
        let b02 = bracket(&z, &delta(8, 0), &delta(8, 2)).unwrap();
        let mut minus_i_pow = Complex::new(1.0, 0.0);
        for v in b02.values() {
            assert!((v - minus_i_pow).norm() < 1e-15);
            minus_i_pow *= Complex::new(0.0, -1.0);
        }
    }

    #[test]
    fn single_generator_on_s2() {
        let z = ZakTransform::new(&s2::<f64>()).unwrap();
        let (r, br) = single_generator_report(&z, &sum(&delta(4, 0), &delta(4, 3)), &Tolerances::default()).unwrap();
        assert_eq!(br.values(), &[Complex::new(9.0, 0.0), Complex::new(1.0, 0.0)]);
        assert_eq!(r.bounds(), Some((1.0, 9.0)));
        assert!(r.is_riesz && !r.is_parseval);
        assert!((br.integral().re - 5.0).abs() < 1e-14);
    }

    #[test]
    fn psi_star_is_parseval_but_not_riesz() {
        let z = ZakTransform::new(&s1::<f64>()).unwrap();
        let tol = Tolerances::default();
        let (r, _) = single_generator_report(&z, &psi_star(), &tol).unwrap();
        assert_eq!(r.support, vec![0]);
        assert!(r.is_parseval && !r.is_riesz);
        let multi = frame_check(&z, &[psi_star()], &tol).unwrap();
        assert_eq!(multi.support, vec![0]);
        assert!(multi.is_parseval);
        assert!(!riesz_check(&z, &[psi_star()], &tol).unwrap().is_riesz);
    }

    #[test]
    fn zero_generator_is_degenerate() {
        let z = ZakTransform::new(&s1::<f64>()).unwrap();
        let zero = vec![Complex::new(0.0, 0.0); 8];
        let r = frame_check(&z, std::slice::from_ref(&zero), &Tolerances::default()).unwrap();
        assert!(r.degenerate && r.bounds().is_none() && !r.is_frame && !r.is_riesz);
        let (r, _) = single_generator_report(&z, &zero, &Tolerances::default()).unwrap();
        assert!(r.support.is_empty() && r.degenerate);
    }
}
