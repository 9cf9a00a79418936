//! Orthogonal decomposition of an invariant subspace into principal subspaces
//! whose generators have Parseval orbits.
//!
//! Fiber by fiber, the generator fibers are orthonormalized (modified
//! Gram-Schmidt in generator order, dependent vectors dropped). The `n`-th
//! surviving vector of every fiber, zero where fewer survive, is the Zak
//! transform of the `n`-th part.

use num_complex::Complex;
use rayon::prelude::*;

use crate::error::Result;
use crate::frames::single_generator_fibers;
use crate::linalg::{dot, norm_sqr};
use crate::ranges::RangeFunction;
use crate::scalar::{czero, Real, Tolerances};
use crate::zak::{FiberedVector, ZakTransform};

fn orthonormalize<T: Real>(vectors: &[Vec<Complex<T>>], drop_below: T) -> Vec<Vec<Complex<T>>> {
    let mut basis: Vec<Vec<Complex<T>>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        // two passes keep the basis orthogonal to working precision
        for _ in 0..2 {
            for q in &basis {
                let c = dot(q, &w);
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi = *wi - qi * c;
                }
            }
        }
        let n = norm_sqr(&w).sqrt();
        if n > drop_below && n > T::zero() {
            basis.push(w.into_iter().map(|z| z / n).collect());
        }
    }
    basis
}

/// Zak-side decomposition: the fibered vectors `Phi_1, ..., Phi_L`.
pub fn parseval_fibers<T: Real>(gens: &[FiberedVector<T>], tol: &Tolerances<T>) -> Vec<FiberedVector<T>> {
    let Some(first) = gens.first() else { return Vec::new() };
    let layout = first.layout().clone();
    let scale = gens
        .iter()
        .flat_map(|g| (0..g.num_fibers()).map(move |a| g.fiber_norm_sqr(a).sqrt()))
        .fold(T::zero(), T::max);
    if scale == T::zero() {
        return Vec::new();
    }
    let per_fiber: Vec<Vec<Vec<Complex<T>>>> = (0..layout.num_fibers())
        .into_par_iter()
        .map(|a| {
            let cols: Vec<Vec<Complex<T>>> = gens.iter().map(|g| layout.scale(g.fiber(a))).collect();
            orthonormalize(&cols, tol.rank * scale)
        })
        .collect();
    let parts = per_fiber.iter().map(Vec::len).max().unwrap_or(0);
    (0..parts)
        .map(|n| {
            let fibers = per_fiber
                .iter()
                .map(|basis| match basis.get(n) {
                    Some(u) => layout.unscale(u),
                    None => vec![czero(); layout.width()],
                })
                .collect();
            FiberedVector::new(layout.clone(), fibers).expect("layout preserved")
        })
        .collect()
}

/// Functions `psi_1, ..., psi_L` with orthogonal principal subspaces summing to
/// the space generated by `gens`, each orbit a Parseval frame for its span.
pub fn parseval_decompose<T: Real>(
    zak: &ZakTransform<T>,
    gens: &[Vec<Complex<T>>],
    tol: &Tolerances<T>,
) -> Result<Vec<Vec<Complex<T>>>> {
    let fibers = zak.forward_all(gens)?;
    parseval_fibers(&fibers, tol).iter().map(|phi| zak.inverse(phi)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionReport<T> {
    /// Largest `|<Z psi_m(a), Z psi_n(a)>|` over `m != n` and all fibers.
    pub orthogonality_defect: T,
    pub orthogonal: bool,
    /// Largest distance of a fiber norm `||Z psi_n(a)||` from `{0, 1}`.
    pub norm_defect: T,
    pub norms_binary: bool,
    /// Whether each part's orbit is a Parseval frame for its span.
    pub parseval: Vec<bool>,
    pub part_dims: Vec<usize>,
    pub space_dims: Vec<usize>,
    pub dims_match: bool,
    pub generator_residuals: Vec<T>,
    pub generators_covered: bool,
}

impl<T: Real> DecompositionReport<T> {
    pub fn passed(&self) -> bool {
        self.orthogonal
            && self.norms_binary
            && self.parseval.iter().all(|&p| p)
            && self.dims_match
            && self.generators_covered
    }
}

pub fn verify_decomposition<T: Real>(
    zak: &ZakTransform<T>,
    gens: &[Vec<Complex<T>>],
    parts: &[Vec<Complex<T>>],
    tol: &Tolerances<T>,
) -> Result<DecompositionReport<T>> {
    let layout = zak.layout();
    let zgens = zak.forward_all(gens)?;
    let zparts = zak.forward_all(parts)?;

    let mut orthogonality_defect = T::zero();
    let mut norm_defect = T::zero();
    for a in 0..layout.num_fibers() {
        for (m, pm) in zparts.iter().enumerate() {
            let n = pm.fiber_norm_sqr(a).sqrt();
            norm_defect = norm_defect.max(n.min((n - T::one()).abs()));
            for pn in &zparts[m + 1..] {
                orthogonality_defect = orthogonality_defect.max(pm.fiber_inner(a, pn).norm());
            }
        }
    }

    let parseval = zparts
        .iter()
        .map(|p| {
            let (r, _) = single_generator_fibers(p, tol);
            r.is_parseval
        })
        .collect();

    let space = RangeFunction::from_generators(layout.clone(), &zgens, tol.rank)?;
    let space_dims = space.dims();
    let mut part_dims = vec![0; layout.num_fibers()];
    for p in &zparts {
        let r = RangeFunction::from_generators(layout.clone(), std::slice::from_ref(p), tol.rank)?;
        for (acc, d) in part_dims.iter_mut().zip(r.dims()) {
            *acc += d;
        }
    }

    let union = RangeFunction::from_generators(layout.clone(), &zparts, tol.rank)?;
    let memberships = zgens.iter().map(|g| union.membership(g, tol.membership)).collect::<Result<Vec<_>>>()?;

    Ok(DecompositionReport {
        orthogonality_defect,
        orthogonal: orthogonality_defect <= tol.verdict,
        norm_defect,
        norms_binary: norm_defect <= tol.verdict,
        parseval,
        dims_match: part_dims == space_dims,
        part_dims,
        space_dims,
        generators_covered: memberships.iter().all(|m| m.member),
        generator_residuals: memberships.into_iter().map(|m| m.residual).collect(),
    })
}
