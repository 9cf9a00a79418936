//! Actions of a finite abelian group on a finite weighted point set.
//!
//! The action is a table of permutations `sigma_g`. Its Jacobian is derived
//! from the point masses, `J(g, x) = mu(sigma_g(x)) / mu(x)`, and the unitary
//! representation is `(Pi(g) psi)(x) = J(-g, x)^{1/2} psi(sigma_{-g}(x))`.

use std::fmt;

use num_complex::Complex;

use crate::error::{check_len, Error, Result};
use crate::group::FiniteAbelianGroup;
use crate::scalar::{lit, Real};

/// Finite atomic measure space: point `x` carries mass `weights[x] > 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightedSpace<T> {
    weights: Vec<T>,
}

impl<T: Real> WeightedSpace<T> {
    pub fn new(weights: Vec<T>) -> Result<Self> {
        if let Some(k) = weights.iter().position(|w| w.partial_cmp(&T::zero()) != Some(std::cmp::Ordering::Greater) || !w.is_finite()) {
            return Err(Error::Input(format!("space.weights[{k}] must be > 0")));
        }
        Ok(WeightedSpace { weights })
    }

    pub fn uniform(n: usize) -> Self {
        WeightedSpace { weights: vec![T::one(); n] }
    }

    pub fn size(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// `sum_x |psi(x)|^2 mu(x)`.
    pub fn norm_sqr(&self, psi: &[Complex<T>]) -> T {
        psi.iter().zip(&self.weights).map(|(v, &w)| v.norm_sqr() * w).sum()
    }

    /// `sum_x psi(x) conj(phi(x)) mu(x)`.
    pub fn inner(&self, psi: &[Complex<T>], phi: &[Complex<T>]) -> Complex<T> {
        psi.iter().zip(phi).zip(&self.weights).map(|((a, b), &w)| a * b.conj() * w).sum()
    }
}

/// Which defining property of an action a table violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Condition {
    /// `sigma_0` is the identity.
    Identity,
    /// `sigma_g o sigma_h = sigma_{g+h}`.
    Composition,
    /// `J(g+h, x) = J(g, sigma_h(x)) J(h, x)`.
    Cocycle,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Identity => "(iii)",
            Condition::Composition => "(ii)",
            Condition::Cocycle => "cocycle",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub condition: Condition,
    /// Flat group index (or indices) and point witnessing the failure.
    pub gamma: Vec<usize>,
    pub point: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

/// Permutation action of `group` on `space`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuasiInvariantAction<T> {
    group: FiniteAbelianGroup,
    space: WeightedSpace<T>,
    table: Vec<Vec<usize>>,
}

impl<T: Real> QuasiInvariantAction<T> {
    /// `table[g][x] = sigma_g(x)` with `g` the flat group index. Rejects tables
    /// that are not `|G|` permutations of the points; the group-action laws are
    /// checked separately by [`Self::validate`].
    pub fn new(group: FiniteAbelianGroup, space: WeightedSpace<T>, table: Vec<Vec<usize>>) -> Result<Self> {
        if table.len() != group.order() {
            return Err(Error::Input(format!(
                "action.table has {} rows, group order is {}",
                table.len(),
                group.order()
            )));
        }
        let n = space.size();
        for (g, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Input(format!("action.table[{g}] has length {}, expected {n}", row.len())));
            }
            let mut seen = vec![false; n];
            for &y in row {
                if y >= n || std::mem::replace(&mut seen[y], true) {
                    return Err(Error::Input(format!("action.table[{g}] not a permutation")));
                }
            }
        }
        Ok(QuasiInvariantAction { group, space, table })
    }

    /// Affine shorthand `sigma_g(x) = x + sum_j steps[j] * g_j (mod N)`.
    pub fn affine(group: FiniteAbelianGroup, space: WeightedSpace<T>, steps: &[usize]) -> Result<Self> {
        if steps.len() != group.factors().len() {
            return Err(Error::Input(format!(
                "affine action needs {} steps, got {}",
                group.factors().len(),
                steps.len()
            )));
        }
        let n = space.size();
        if n == 0 {
            return Err(Error::Input("space.size must be > 0".into()));
        }
        let table = group
            .elements()
            .map(|g| {
                let shift = g.iter().zip(steps).map(|(&a, &m)| a * m).sum::<usize>() % n;
                (0..n).map(|x| (x + shift) % n).collect()
            })
            .collect();
        Self::new(group, space, table)
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn space(&self) -> &WeightedSpace<T> {
        &self.space
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }

    pub fn size(&self) -> usize {
        self.space.size()
    }

    /// `sigma_g(x)` for flat group index `g`.
    #[inline]
    pub fn apply(&self, g: usize, x: usize) -> usize {
        self.table[g][x]
    }

    pub fn validate(&self) -> ValidationReport {
        let order = self.group.order();
        let n = self.size();
        let mut violations = Vec::new();
        for x in 0..n {
            if self.table[0][x] != x {
                violations.push(Violation { condition: Condition::Identity, gamma: vec![0], point: x });
            }
        }
        let tol: T = lit(1e-12);
        for g in 0..order {
            for h in 0..order {
                let gh = self.group.add_idx(g, h);
                for x in 0..n {
                    if self.table[g][self.table[h][x]] != self.table[gh][x] {
                        violations.push(Violation { condition: Condition::Composition, gamma: vec![g, h], point: x });
                        continue;
                    }
                    let lhs = self.jacobian_idx(gh, x);
                    let rhs = self.jacobian_idx(g, self.table[h][x]) * self.jacobian_idx(h, x);
                    if (lhs - rhs).abs() > tol * lhs.abs().max(rhs.abs()) {
                        violations.push(Violation { condition: Condition::Cocycle, gamma: vec![g, h], point: x });
                    }
                }
            }
        }
        ValidationReport { ok: violations.is_empty(), violations }
    }

    pub fn jacobian(&self, g: &[usize], x: usize) -> Result<T> {
        let gi = self.group.index_of(g)?;
        self.check_point(x)?;
        Ok(self.jacobian_idx(gi, x))
    }

    #[inline]
    pub(crate) fn jacobian_idx(&self, g: usize, x: usize) -> T {
        let w = self.space.weights();
        w[self.table[g][x]] / w[x]
    }

    fn check_point(&self, x: usize) -> Result<()> {
        if x < self.size() {
            Ok(())
        } else {
            Err(Error::Input(format!("point {x} out of range 0..{}", self.size())))
        }
    }

    /// `Pi(g) psi`.
    pub fn apply_rep(&self, g: &[usize], psi: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        let gi = self.group.index_of(g)?;
        check_len(self.size(), psi.len())?;
        Ok(self.apply_rep_idx(gi, psi))
    }

    pub(crate) fn apply_rep_idx(&self, g: usize, psi: &[Complex<T>]) -> Vec<Complex<T>> {
        let minus = self.group.neg_idx(g);
        (0..self.size())
            .map(|x| psi[self.table[minus][x]] * self.jacobian_idx(minus, x).sqrt())
            .collect()
    }

    /// One representative per orbit (the smallest point index), orbits in
    /// order of first appearance. Fails unless the action is free.
    pub fn tiling_transversal(&self) -> Result<TilingTransversal> {
        let n = self.size();
        let order = self.group.order();
        let mut orbit_index: Vec<Option<(usize, usize)>> = vec![None; n];
        let mut points = Vec::new();
        for x in 0..n {
            if orbit_index[x].is_some() {
                continue;
            }
            let orbit = points.len();
            points.push(x);
            for g in 0..order {
                let y = self.table[g][x];
                if orbit_index[y].is_some() {
                    // y = sigma_g(x) = sigma_h(x) for an earlier h, so g - h fixes x.
                    let (_, h) = orbit_index[y].unwrap();
                    let fixer = self.group.add_idx(g, self.group.neg_idx(h));
                    return Err(Error::NotFree { point: x, gamma: fixer });
                }
                orbit_index[y] = Some((orbit, g));
            }
        }
        Ok(TilingTransversal { points, orbit_index: orbit_index.into_iter().map(Option::unwrap).collect() })
    }
}

/// One point per orbit of a free action.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TilingTransversal {
    points: Vec<usize>,
    orbit_index: Vec<(usize, usize)>,
}

impl TilingTransversal {
    /// Representatives, one per orbit.
    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `(orbit, g)` with `x = sigma_g(points[orbit])`.
    pub fn locate(&self, x: usize) -> (usize, usize) {
        self.orbit_index[x]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn delta(n: usize, k: usize) -> Vec<Complex<f64>> {
        let mut v = vec![Complex::new(0.0, 0.0); n];
        v[k] = Complex::new(1.0, 0.0);
        v
    }

    #[test]
    fn fixtures_validate() {
        assert!(fixtures::s1::<f64>().validate().ok);
        assert!(fixtures::s2::<f64>().validate().ok);
    }

    #[test]
    fn identity_violation_is_reported() {
        let g = FiniteAbelianGroup::cyclic(2).unwrap();
        let a = QuasiInvariantAction::new(g, WeightedSpace::<f64>::uniform(2), vec![vec![1, 0], vec![1, 0]]).unwrap();
        let report = a.validate();
        assert!(!report.ok);
        assert!(report.violations.iter().any(|v| v.condition == Condition::Identity));
        assert_eq!(Condition::Identity.to_string(), "(iii)");
    }

    #[test]
    fn composition_violation_is_reported() {
        let g = FiniteAbelianGroup::cyclic(3).unwrap();
        let t = vec![vec![0, 1, 2], vec![1, 0, 2], vec![0, 2, 1]];
        let report = QuasiInvariantAction::new(g, WeightedSpace::<f64>::uniform(3), t).unwrap().validate();
        assert!(report.violations.iter().any(|v| v.condition == Condition::Composition));
    }

    #[test]
    fn non_permutation_row_is_input_error() {
        let g = FiniteAbelianGroup::cyclic(2).unwrap();
        let err = QuasiInvariantAction::new(g, WeightedSpace::<f64>::uniform(2), vec![vec![0, 1], vec![0, 0]]);
        assert_eq!(err.unwrap_err(), Error::Input("action.table[1] not a permutation".into()));
    }

    #[test]
    fn weights_must_be_positive() {
        assert!(WeightedSpace::new(vec![1.0, 0.0]).is_err());
        assert!(WeightedSpace::new(vec![1.0, -2.0]).is_err());
    }

    #[test]
    fn jacobians() {
        let s1 = fixtures::s1::<f64>();
        for g in s1.group().elements() {
            for x in 0..8 {
                assert_eq!(s1.jacobian(&g, x).unwrap(), 1.0);
            }
        }
        let s2 = fixtures::s2::<f64>();
        assert_eq!(s2.jacobian(&[1], 0).unwrap(), 4.0);
        for x in 0..4 {
            assert_eq!(s2.jacobian(&[0], x).unwrap(), 1.0);
        }
    }

    #[test]
    fn transversals() {
        assert_eq!(fixtures::s1::<f64>().tiling_transversal().unwrap().points(), &[0, 1]);
        // masses 1 and 2 sit at point indices 0 and 1
        assert_eq!(fixtures::s2::<f64>().tiling_transversal().unwrap().points(), &[0, 1]);
        let g = FiniteAbelianGroup::cyclic(2).unwrap();
        let trivial = QuasiInvariantAction::new(g, WeightedSpace::<f64>::uniform(1), vec![vec![0], vec![0]]).unwrap();
        assert_eq!(trivial.tiling_transversal().unwrap_err(), Error::NotFree { point: 0, gamma: 1 });
    }

    #[test]
    fn representation_examples() {
        let s1 = fixtures::s1::<f64>();
        assert_eq!(s1.apply_rep(&[0], &delta(8, 3)).unwrap(), delta(8, 3));
        assert_eq!(s1.apply_rep(&[1], &delta(8, 0)).unwrap(), delta(8, 2));
        let s2 = fixtures::s2::<f64>();
        let out = s2.apply_rep(&[1], &delta(4, 0)).unwrap();
        let expected: Vec<Complex<f64>> = delta(4, 3).into_iter().map(|v| v * 0.5).collect();
        assert_eq!(out, expected);
    }
}
