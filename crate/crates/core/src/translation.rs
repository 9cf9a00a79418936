//! Translation-invariant subspaces of `L^2(G)` for a subgroup `H` of a finite
//! abelian group `G`: the Weil formula, the Zak map over `Omega x C`, the
//! fiberization map over the annihilator, and the identity linking the two.
//!
//! Normalizations: counting measure on `G`, `H` and the section `C`; mass
//! `1/|G|` per point of the dual; `nu = 1/|H|` per point of the section
//! `Omega`; `1/|H*|` per point of the annihilator `H*`. The Fourier transform
//! on `H*` carries the factor `|H|/|G|`, so that Poisson summation reads
//! `sum_{h in H} g(h) = (|H|/|G|) sum_{d in H*} g^(d)`.

use std::sync::Arc;

use num_complex::Complex;
use rayon::prelude::*;

use crate::action::{QuasiInvariantAction, WeightedSpace};
use crate::error::{check_len, Error, Result};
use crate::frames::{fiber_report, BoundKind, FrameReport};
use crate::group::{root_of_unity, Element, FiniteAbelianGroup, Subgroup};
use crate::ranges::RangeFunction;
use crate::scalar::{czero, from_usize, Real, Tolerances};
use crate::zak::{FiberLayout, FiberedVector};

/// Point masses used for each measure in the finite setting.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Normalization<T> {
    pub group: T,
    pub subgroup: T,
    pub section: T,
    pub dual: T,
    pub dual_section: T,
    pub annihilator: T,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationScenario {
    group: FiniteAbelianGroup,
    subgroup: Subgroup,
    annihilator: Subgroup,
    section: Vec<usize>,
    dual_section: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeilCheck<T> {
    pub lhs: Complex<T>,
    pub rhs: Complex<T>,
    pub deviation: T,
}

#[derive(Clone, Debug)]
pub struct TiAnalysis<T> {
    pub range: RangeFunction<T>,
    pub frame: FrameReport<T>,
    pub riesz: FrameReport<T>,
}

/// The translation action of `H` on `G`, presented as an action of an
/// abstract `Z_{n_1} x ... x Z_{n_k}` isomorphic to `H`.
#[derive(Clone, Debug)]
pub struct TranslationAction<T> {
    pub action: QuasiInvariantAction<T>,
    /// Image in `H` of the `j`-th standard generator.
    pub generators: Vec<usize>,
    /// For the `i`-th point of `Omega`, the flat index of the matching
    /// character of the abstract group.
    pub omega_to_dual: Vec<usize>,
}

impl TranslationScenario {
    pub fn build(group: FiniteAbelianGroup, subgroup_generators: &[Element]) -> Result<Self> {
        let subgroup = Subgroup::from_generators(&group, subgroup_generators)?;
        let annihilator = subgroup.annihilator();
        let section = subgroup.coset_transversal();
        let dual_section = annihilator.coset_transversal();
        Ok(TranslationScenario { group, subgroup, annihilator, section, dual_section })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn subgroup(&self) -> &Subgroup {
        &self.subgroup
    }

    pub fn annihilator(&self) -> &Subgroup {
        &self.annihilator
    }

    /// Section `C` of `G / H` (flat indices).
    pub fn section(&self) -> &[usize] {
        &self.section
    }

    /// Section `Omega` of the dual modulo `H*` (flat indices).
    pub fn dual_section(&self) -> &[usize] {
        &self.dual_section
    }

    pub fn normalization<T: Real>(&self) -> Normalization<T> {
        Normalization {
            group: T::one(),
            subgroup: T::one(),
            section: T::one(),
            dual: T::one() / from_usize(self.group.order()),
            dual_section: T::one() / from_usize(self.subgroup.order()),
            annihilator: T::one() / from_usize(self.annihilator.order()),
        }
    }

    pub fn layout<T: Real>(&self) -> Arc<FiberLayout<T>> {
        Arc::new(FiberLayout::new(
            self.dual_section.len(),
            vec![T::one(); self.section.len()],
            T::one() / from_usize(self.subgroup.order()),
        ))
    }

    fn pairing<T: Real>(&self, x: usize, xi: usize) -> Complex<T> {
        let g = &self.group;
        root_of_unity(g.pairing_phase(&g.element(x), &g.element(xi)), g.exponent())
    }

    fn sub(&self, x: usize, y: usize) -> usize {
        self.group.add_idx(x, self.group.neg_idx(y))
    }

    fn check<T>(&self, f: &[Complex<T>]) -> Result<()> {
        check_len(self.group.order(), f.len())
    }

    /// Both sides of `sum_G f = sum_{x in C} sum_{h in H} f(x + h)`.
    pub fn weil_check<T: Real>(&self, f: &[Complex<T>]) -> Result<WeilCheck<T>> {
        self.check(f)?;
        let lhs: Complex<T> = f.iter().copied().sum();
        let rhs: Complex<T> = self
            .section
            .iter()
            .flat_map(|&x| self.subgroup.members().iter().map(move |&h| (x, h)))
            .map(|(x, h)| f[self.group.add_idx(x, h)])
            .sum();
        Ok(WeilCheck { lhs, rhs, deviation: (lhs - rhs).norm() })
    }

    /// `Z f(w)(x) = sum_{h in H} f(x - h) conj((h, w))` at any `w` in the dual
    /// and any `x` in `G`.
    pub fn zak_at<T: Real>(&self, f: &[Complex<T>], omega: usize, x: usize) -> Complex<T> {
        self.subgroup
            .members()
            .iter()
            .fold(czero(), |acc, &h| acc + f[self.sub(x, h)] * self.pairing::<T>(h, omega).conj())
    }

    /// Zak transform sampled on `Omega x C`.
    pub fn zak_forward<T: Real>(&self, f: &[Complex<T>]) -> Result<FiberedVector<T>> {
        self.check(f)?;
        let fibers = self
            .dual_section
            .par_iter()
            .map(|&w| self.section.iter().map(|&x| self.zak_at(f, w, x)).collect())
            .collect();
        FiberedVector::new(self.layout(), fibers)
    }

    pub fn zak_inverse<T: Real>(&self, phi: &FiberedVector<T>) -> Result<Vec<Complex<T>>> {
        if **phi.layout() != *self.layout::<T>() {
            return Err(Error::Input("fibered vector does not match the scenario".into()));
        }
        let scale = T::one() / from_usize(self.subgroup.order());
        let mut f = vec![czero(); self.group.order()];
        for (c, &x) in self.section.iter().enumerate() {
            for &h in self.subgroup.members() {
                let v = self
                    .dual_section
                    .iter()
                    .enumerate()
                    .fold(czero(), |acc, (i, &w)| acc + phi.fiber(i)[c] * self.pairing::<T>(h, w));
                f[self.sub(x, h)] = v * scale;
            }
        }
        Ok(f)
    }

    /// `f^(xi) = sum_x f(x) conj((x, xi))` over the whole dual.
    pub fn fourier<T: Real>(&self, f: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        self.check(f)?;
        Ok((0..self.group.order())
            .map(|xi| f.iter().enumerate().fold(czero(), |acc, (x, &v)| acc + v * self.pairing::<T>(x, xi).conj()))
            .collect())
    }

    /// `T f(w) = (f^(w + d))_{d in H*}` for each `w` in `Omega`.
    pub fn fiberize<T: Real>(&self, f: &[Complex<T>]) -> Result<Vec<Vec<Complex<T>>>> {
        let fh = self.fourier(f)?;
        Ok(self
            .dual_section
            .iter()
            .map(|&w| self.annihilator.members().iter().map(|&d| fh[self.group.add_idx(w, d)]).collect())
            .collect())
    }

    /// Fourier transform on the annihilator, evaluated at `x` in `G`.
    pub fn annihilator_fourier<T: Real>(&self, a: &[Complex<T>], x: usize) -> Complex<T> {
        let factor = from_usize::<T>(self.subgroup.order()) / from_usize::<T>(self.group.order());
        self.annihilator
            .members()
            .iter()
            .zip(a)
            .fold(czero(), |acc, (&d, &v)| acc + v * self.pairing::<T>(x, d).conj())
            * factor
    }

    /// Largest deviation of `F(T f(w))(x) = (x, w) Z f(-w)(-x)` over `Omega x C`.
    pub fn duality_check<T: Real>(&self, f: &[Complex<T>]) -> Result<T> {
        let tf = self.fiberize(f)?;
        let mut worst = T::zero();
        for (i, &w) in self.dual_section.iter().enumerate() {
            let minus_w = self.group.neg_idx(w);
            for &x in &self.section {
                let lhs = self.annihilator_fourier(&tf[i], x);
                let rhs = self.pairing::<T>(x, w) * self.zak_at(f, minus_w, self.group.neg_idx(x));
                worst = worst.max((lhs - rhs).norm());
            }
        }
        Ok(worst)
    }

    /// Largest deviation of `<T f(w), T g(w)> = <Z f(-w), Z g(-w)>` over `Omega`.
    pub fn gramian_check<T: Real>(&self, f: &[Complex<T>], g: &[Complex<T>]) -> Result<T> {
        let tf = self.fiberize(f)?;
        let tg = self.fiberize(g)?;
        let m = self.normalization::<T>().annihilator;
        let mut worst = T::zero();
        for (i, &w) in self.dual_section.iter().enumerate() {
            let lhs = tf[i].iter().zip(&tg[i]).fold(czero(), |acc, (a, b)| acc + a * b.conj()) * m;
            let minus_w = self.group.neg_idx(w);
            let rhs = self
                .section
                .iter()
                .fold(czero(), |acc, &x| acc + self.zak_at(f, minus_w, x) * self.zak_at(g, minus_w, x).conj());
            worst = worst.max((lhs - rhs).norm());
        }
        Ok(worst)
    }

    /// Range function and frame/Riesz bounds of the translates of `gens` by `H`.
    pub fn ti_analyze<T: Real>(&self, gens: &[Vec<Complex<T>>], tol: &Tolerances<T>) -> Result<TiAnalysis<T>> {
        let fibers = gens.iter().map(|f| self.zak_forward(f)).collect::<Result<Vec<_>>>()?;
        let layout = self.layout();
        Ok(TiAnalysis {
            range: RangeFunction::from_generators(layout.clone(), &fibers, tol.rank)?,
            frame: fiber_report(&layout, &fibers, BoundKind::Frame, tol)?,
            riesz: fiber_report(&layout, &fibers, BoundKind::Riesz, tol)?,
        })
    }

    /// `sigma_h(x) = h + x`, as a general action on the uniform space `G`.
    pub fn as_action<T: Real>(&self) -> Result<TranslationAction<T>> {
        let g = &self.group;
        let decomposition = self.subgroup.cyclic_decomposition();
        let abstract_group = FiniteAbelianGroup::new(decomposition.iter().map(|d| d.1).collect())?;
        let generators: Vec<usize> = decomposition.iter().map(|d| d.0).collect();
        let image = |k: &[usize]| {
            k.iter().zip(&generators).fold(0, |acc, (&c, &gen)| g.add_idx(acc, g.scale_idx(gen, c)))
        };
        let table = abstract_group
            .elements()
            .map(|k| {
                let h = image(&k);
                (0..g.order()).map(|x| g.add_idx(h, x)).collect()
            })
            .collect();
        let action = QuasiInvariantAction::new(abstract_group.clone(), WeightedSpace::uniform(g.order()), table)?;
        let exponent = g.exponent();
        let omega_to_dual = self
            .dual_section
            .iter()
            .map(|&w| {
                let we = g.element(w);
                let alpha: Vec<usize> = decomposition
                    .iter()
                    .map(|&(gen, n)| g.pairing_phase(&g.element(gen), &we) * n / exponent)
                    .collect();
                abstract_group.index_of(&alpha)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TranslationAction { action, generators, omega_to_dual })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{delta, s3};

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn scenario_layout_for_z12_mod_3() {
        let s = s3();
        assert_eq!(s.subgroup().members(), &[0, 3, 6, 9]);
        assert_eq!(s.annihilator().members(), &[0, 4, 8]);
        assert_eq!(s.section(), &[0, 1, 2]);
        assert_eq!(s.dual_section(), &[0, 1, 2, 3]);
        let n = s.normalization::<f64>();
        assert!((n.annihilator * n.dual_section - n.dual).abs() < 1e-15);
    }

    #[test]
    fn degenerate_subgroups() {
        let z12 = FiniteAbelianGroup::cyclic(12).unwrap();
        let full = TranslationScenario::build(z12.clone(), &[vec![1]]).unwrap();
        assert_eq!(full.section(), &[0]);
        assert_eq!(full.annihilator().members(), &[0]);
        assert_eq!(full.dual_section().len(), 12);
        let trivial = TranslationScenario::build(z12, &[]).unwrap();
        assert_eq!(trivial.section().len(), 12);
        assert_eq!(trivial.annihilator().order(), 12);
        assert_eq!(trivial.dual_section(), &[0]);
    }

    #[test]
    fn weil_examples() {
        let s = s3();
        let w = s.weil_check(&delta::<f64>(12, 0)).unwrap();
        assert_eq!((w.lhs, w.rhs), (c(1.0, 0.0), c(1.0, 0.0)));
        let w = s.weil_check(&[c(1.0, 0.0); 12]).unwrap();
        assert_eq!((w.lhs, w.rhs, w.deviation), (c(12.0, 0.0), c(12.0, 0.0), 0.0));
        let w = s.weil_check(&[c(0.0, 0.0); 12]).unwrap();
        assert_eq!(w.deviation, 0.0);
    }

    #[test]
    fn zak_examples() {
        let s = s3();
        let z = s.zak_forward(&delta::<f64>(12, 0)).unwrap();
        for w in 0..4 {
            assert_eq!(z.fiber(w), &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        }
        let z = s.zak_forward(&delta::<f64>(12, 3)).unwrap();
        let mut ipow = c(1.0, 0.0);
        for w in 0..4 {
            assert!((z.fiber(w)[0] - ipow).norm() < 1e-15);
            ipow *= c(0.0, 1.0);
        }
        assert_eq!(s.zak_inverse(&z).unwrap(), delta(12, 3));
    }

    #[test]
    fn fiberization_examples() {
        let s = s3();
        let t = s.fiberize(&delta::<f64>(12, 0)).unwrap();
        assert_eq!(t, vec![vec![c(1.0, 0.0); 3]; 4]);
        let full = TranslationScenario::build(FiniteAbelianGroup::cyclic(12).unwrap(), &[vec![1]]).unwrap();
        let f: Vec<Complex<f64>> = (0..12).map(|k| c(k as f64, 1.0)).collect();
        let t = full.fiberize(&f).unwrap();
        let fh = full.fourier(&f).unwrap();
        assert!(t.iter().zip(&fh).all(|(seq, v)| seq.len() == 1 && seq[0] == *v));
        assert!(s.fiberize(&[c(0.0, 0.0); 12]).unwrap().iter().flatten().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn duality_on_delta() {
        let s = s3();
        assert!(s.duality_check(&delta::<f64>(12, 0)).unwrap() <= 1e-12);
        assert_eq!(s.duality_check(&[c(0.0, 0.0); 12]).unwrap(), 0.0);
    }

    #[test]
    fn ti_analysis_of_delta() {
        let s = s3();
        let t = s.ti_analyze(&[delta::<f64>(12, 0)], &Tolerances::default()).unwrap();
        assert_eq!(t.range.dims(), vec![1; 4]);
        let (a, b) = t.frame.bounds().unwrap();
        assert!((a - 1.0).abs() < 1e-12 && (b - 1.0).abs() < 1e-12);
        let zero = s.ti_analyze(&[vec![c(0.0, 0.0); 12]], &Tolerances::default()).unwrap();
        assert_eq!(zero.range.dims(), vec![0; 4]);
    }

    #[test]
    fn translation_action_for_z12() {
        let t = s3().as_action::<f64>().unwrap();
        assert!(t.action.validate().ok);
        assert_eq!(t.action.group().factors(), &[4]);
        assert_eq!(t.omega_to_dual, vec![0, 1, 2, 3]);
    }
}
