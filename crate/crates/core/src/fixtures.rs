//! Small reference scenarios.
//!
//! * `s1`: `Z_4` acting on `Z_8` by `x -> x + 2g`, unit masses.
//! * `s2`: `Z_2` acting on four points of masses 1..4 by `x -> 5 - x`
//!   (points are 1-based in that description, 0-based here).
//! * `s3`: `Z_12` with the subgroup generated by 3.
//! * `psi_star`: on `s1`, the function whose Zak transform is `(1, 0)` on
//!   the trivial character and zero elsewhere.

use num_complex::Complex;

use crate::action::{QuasiInvariantAction, WeightedSpace};
use crate::group::FiniteAbelianGroup;
use crate::scalar::{from_usize, lit, Real};
use crate::translation::TranslationScenario;

pub fn delta<T: Real>(n: usize, k: usize) -> Vec<Complex<T>> {
    let mut v = vec![Complex::new(T::zero(), T::zero()); n];
    v[k] = Complex::new(T::one(), T::zero());
    v
}

pub fn s1<T: Real>() -> QuasiInvariantAction<T> {
    QuasiInvariantAction::affine(FiniteAbelianGroup::cyclic(4).unwrap(), WeightedSpace::uniform(8), &[2]).unwrap()
}

pub fn s2<T: Real>() -> QuasiInvariantAction<T> {
    let weights = (1..=4).map(from_usize).collect();
    QuasiInvariantAction::new(
        FiniteAbelianGroup::cyclic(2).unwrap(),
        WeightedSpace::new(weights).unwrap(),
        vec![vec![0, 1, 2, 3], vec![3, 2, 1, 0]],
    )
    .unwrap()
}

pub fn s3() -> TranslationScenario {
    TranslationScenario::build(FiniteAbelianGroup::cyclic(12).unwrap(), &[vec![3]]).unwrap()
}

pub fn psi_star<T: Real>() -> Vec<Complex<T>> {
    let quarter = Complex::new(lit::<T>(0.25), T::zero());
    (0..8).map(|x| if x % 2 == 0 { quarter } else { Complex::new(T::zero(), T::zero()) }).collect()
}

/// Free action of `group` on `group.order() * orbits` points: point
/// `labels[c * |G| + h]` is `sigma_h` of the `c`-th orbit's base point.
/// `labels` must be a permutation; `weights` gives the point masses.
pub fn free_action<T: Real>(
    group: FiniteAbelianGroup,
    orbits: usize,
    labels: &[usize],
    weights: Vec<T>,
) -> crate::Result<QuasiInvariantAction<T>> {
    let order = group.order();
    let n = order * orbits;
    let table = (0..order)
        .map(|g| {
            let mut row = vec![0; n];
            for c in 0..orbits {
                for h in 0..order {
                    row[labels[c * order + h]] = labels[c * order + group.add_idx(g, h)];
                }
            }
            row
        })
        .collect();
    QuasiInvariantAction::new(group, WeightedSpace::new(weights)?, table)
}
