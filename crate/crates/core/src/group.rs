//! Finite abelian groups in invariant-factor form, their duals and subgroups.
//!
//! A group `Z_{n_1} x ... x Z_{n_k}` is identified with its dual through the
//! pairing `(g, a) = exp(2 pi i sum_j g_j a_j / n_j)`. Elements are tuples of
//! residues; internally they are addressed by their row-major flat index, which
//! coincides with lexicographic order of the tuples.

use std::collections::BTreeSet;

use num_complex::Complex;

use crate::error::{check_len, Error, Result};
use crate::scalar::{from_usize, Real};

/// Residue tuple. The same representation is used for points of the dual.
pub type Element = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    factors: Vec<usize>,
    order: usize,
    exponent: usize,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// `exp(2 pi i num / den)`, exact at multiples of a quarter turn.
pub fn root_of_unity<T: Real>(num: usize, den: usize) -> Complex<T> {
    let num = num % den;
    if (4 * num).is_multiple_of(den) {
        return match 4 * num / den {
            0 => Complex::new(T::one(), T::zero()),
            1 => Complex::new(T::zero(), T::one()),
            2 => Complex::new(-T::one(), T::zero()),
            _ => Complex::new(T::zero(), -T::one()),
        };
    }
    let angle = T::TAU() * from_usize::<T>(num) / from_usize::<T>(den);
    Complex::new(angle.cos(), angle.sin())
}

impl FiniteAbelianGroup {
    pub fn new(factors: Vec<usize>) -> Result<Self> {
        if let Some(j) = factors.iter().position(|&n| n == 0) {
            return Err(Error::Input(format!("invariant_factors[{j}] must be >= 1")));
        }
        let order = factors.iter().product();
        let exponent = factors.iter().fold(1, |l, &n| l / gcd(l, n) * n);
        Ok(FiniteAbelianGroup { factors, order, exponent })
    }

    pub fn cyclic(n: usize) -> Result<Self> {
        Self::new(vec![n])
    }

    pub fn factors(&self) -> &[usize] {
        &self.factors
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Least common multiple of the invariant factors.
    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn validate(&self, g: &[usize]) -> Result<()> {
        if g.len() != self.factors.len() {
            return Err(Error::Input(format!(
                "element {g:?} has arity {}, group has {} factors",
                g.len(),
                self.factors.len()
            )));
        }
        for (j, (&c, &n)) in g.iter().zip(&self.factors).enumerate() {
            if c >= n {
                return Err(Error::Input(format!("element {g:?}: component {j} not in [0, {n})")));
            }
        }
        Ok(())
    }

    pub fn index_of(&self, g: &[usize]) -> Result<usize> {
        self.validate(g)?;
        Ok(g.iter().zip(&self.factors).fold(0, |acc, (&c, &n)| acc * n + c))
    }

    pub fn element(&self, mut index: usize) -> Element {
        let mut out = vec![0; self.factors.len()];
        for (slot, &n) in out.iter_mut().zip(&self.factors).rev() {
            *slot = index % n;
            index /= n;
        }
        out
    }

    /// All elements in lexicographic order.
    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        (0..self.order).map(|i| self.element(i))
    }

    pub fn add(&self, a: &[usize], b: &[usize]) -> Element {
        a.iter().zip(b).zip(&self.factors).map(|((&x, &y), &n)| (x + y) % n).collect()
    }

    pub fn neg(&self, a: &[usize]) -> Element {
        a.iter().zip(&self.factors).map(|(&x, &n)| (n - x) % n).collect()
    }

    pub fn add_idx(&self, a: usize, b: usize) -> usize {
        let s = self.add(&self.element(a), &self.element(b));
        self.flat(&s)
    }

    pub fn neg_idx(&self, a: usize) -> usize {
        self.flat(&self.neg(&self.element(a)))
    }

    /// `k * a`.
    pub fn scale_idx(&self, a: usize, k: usize) -> usize {
        let e = self.element(a);
        let s: Element = e.iter().zip(&self.factors).map(|(&x, &n)| (x * (k % n)) % n).collect();
        self.flat(&s)
    }

    fn flat(&self, g: &[usize]) -> usize {
        g.iter().zip(&self.factors).fold(0, |acc, (&c, &n)| acc * n + c)
    }

    /// Numerator `s` of the pairing `(g, a) = exp(2 pi i s / exponent)`.
    pub fn pairing_phase(&self, g: &[usize], a: &[usize]) -> usize {
        let e = self.exponent;
        g.iter()
            .zip(a)
            .zip(&self.factors)
            .fold(0, |acc, ((&x, &y), &n)| (acc + (x * y) % n * (e / n)) % e)
    }

    pub fn character<T: Real>(&self, g: &[usize], a: &[usize]) -> Result<Complex<T>> {
        self.validate(g)?;
        self.validate(a)?;
        Ok(root_of_unity(self.pairing_phase(g, a), self.exponent))
    }

    /// Row-major `order x order` table with entry `[g * order + a] = (g, a)`.
    pub fn character_table<T: Real>(&self) -> Vec<Complex<T>> {
        let elems: Vec<Element> = self.elements().collect();
        let mut out = Vec::with_capacity(self.order * self.order);
        for g in &elems {
            for a in &elems {
                out.push(root_of_unity(self.pairing_phase(g, a), self.exponent));
            }
        }
        out
    }

    /// `F(a) = sum_g c_g conj((g, a))`, indexed by the dual in lexicographic order.
    pub fn dft<T: Real>(&self, c: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        check_len(self.order, c.len())?;
        let table = self.character_table::<T>();
        Ok(dft_with_table(&table, c))
    }

    /// `c_g = (1/|G|) sum_a F(a) (g, a)`.
    pub fn inverse_dft<T: Real>(&self, f: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        check_len(self.order, f.len())?;
        let table = self.character_table::<T>();
        Ok(inverse_dft_with_table(&table, f))
    }
}

pub(crate) fn dft_with_table<T: Real>(table: &[Complex<T>], c: &[Complex<T>]) -> Vec<Complex<T>> {
    let n = c.len();
    (0..n)
        .map(|a| {
            c.iter()
                .enumerate()
                .fold(Complex::new(T::zero(), T::zero()), |acc, (g, &v)| acc + v * table[g * n + a].conj())
        })
        .collect()
}

pub(crate) fn inverse_dft_with_table<T: Real>(table: &[Complex<T>], f: &[Complex<T>]) -> Vec<Complex<T>> {
    let n = f.len();
    let scale = T::one() / from_usize::<T>(n);
    (0..n)
        .map(|g| {
            f.iter()
                .enumerate()
                .fold(Complex::new(T::zero(), T::zero()), |acc, (a, &v)| acc + v * table[g * n + a])
                * scale
        })
        .collect()
}

/// A subgroup, stored as the sorted flat indices of its members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    parent: FiniteAbelianGroup,
    members: Vec<usize>,
    generators: Vec<usize>,
}

impl Subgroup {
    /// Smallest subgroup containing `gens`.
    pub fn from_generators(parent: &FiniteAbelianGroup, gens: &[Element]) -> Result<Self> {
        let idx = gens.iter().map(|g| parent.index_of(g)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_generator_indices(parent, &idx))
    }

    pub(crate) fn from_generator_indices(parent: &FiniteAbelianGroup, gens: &[usize]) -> Self {
        let mut members: BTreeSet<usize> = BTreeSet::from([0]);
        let mut frontier = vec![0];
        while let Some(x) = frontier.pop() {
            for &g in gens {
                let y = parent.add_idx(x, g);
                if members.insert(y) {
                    frontier.push(y);
                }
            }
        }
        Subgroup { parent: parent.clone(), members: members.into_iter().collect(), generators: gens.to_vec() }
    }

    pub fn parent(&self) -> &FiniteAbelianGroup {
        &self.parent
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    /// Flat indices of the members, ascending.
    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn member_elements(&self) -> Vec<Element> {
        self.members.iter().map(|&i| self.parent.element(i)).collect()
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn contains(&self, index: usize) -> bool {
        self.members.binary_search(&index).is_ok()
    }

    /// Characters of the parent that are trivial on this subgroup, as a
    /// subgroup of the dual (same factor list).
    pub fn annihilator(&self) -> Subgroup {
        let g = &self.parent;
        let gens: Vec<Element> = self.generators.iter().map(|&i| g.element(i)).collect();
        let members: Vec<usize> = (0..g.order())
            .filter(|&d| {
                let de = g.element(d);
                gens.iter().all(|ge| g.pairing_phase(ge, &de) == 0)
            })
            .collect();
        // Generating set: greedy scan keeping elements outside the current span.
        let mut generators = Vec::new();
        let mut span = Subgroup::from_generator_indices(g, &[]);
        for &m in &members {
            if !span.contains(m) {
                generators.push(m);
                span = Subgroup::from_generator_indices(g, &generators);
            }
        }
        Subgroup { parent: g.clone(), members, generators }
    }

    /// Lexicographically smallest member of each coset, in lexicographic order.
    pub fn coset_transversal(&self) -> Vec<usize> {
        let g = &self.parent;
        let mut covered = vec![false; g.order()];
        let mut reps = Vec::with_capacity(g.order() / self.order());
        for x in 0..g.order() {
            if covered[x] {
                continue;
            }
            reps.push(x);
            for &m in &self.members {
                covered[g.add_idx(x, m)] = true;
            }
        }
        reps
    }

    /// Coset representative (from [`Self::coset_transversal`]) of `x`.
    pub fn coset_representative(&self, x: usize) -> usize {
        let g = &self.parent;
        self.members.iter().map(|&m| g.add_idx(x, m)).min().unwrap_or(x)
    }

    /// Order of an element of the parent group.
    pub fn element_order(parent: &FiniteAbelianGroup, x: usize) -> usize {
        let mut k = 1;
        let mut y = x;
        while y != 0 {
            y = parent.add_idx(y, x);
            k += 1;
        }
        k
    }

    /// Independent generators `(g_j, n_j)` with this subgroup equal to the
    /// internal direct sum of the cyclic groups `<g_j>` of order `n_j`.
    pub fn cyclic_decomposition(&self) -> Vec<(usize, usize)> {
        let g = &self.parent;
        let mut candidates: Vec<(usize, usize)> = self
            .members
            .iter()
            .filter(|&&m| m != 0)
            .map(|&m| (m, Self::element_order(g, m)))
            .collect();
        candidates.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        let mut chosen = Vec::new();
        let span = BTreeSet::from([0usize]);
        let found = decompose_search(g, &candidates, self.order(), &span, &mut chosen);
        debug_assert!(found, "every finite abelian group is a direct sum of cyclic groups");
        chosen
    }
}

fn decompose_search(
    g: &FiniteAbelianGroup,
    candidates: &[(usize, usize)],
    target: usize,
    span: &BTreeSet<usize>,
    chosen: &mut Vec<(usize, usize)>,
) -> bool {
    if span.len() == target {
        return true;
    }
    for &(c, ord) in candidates {
        if span.len() * ord > target || !target.is_multiple_of(span.len() * ord) {
            continue;
        }
        let independent = (1..ord).all(|k| !span.contains(&g.scale_idx(c, k)));
        if !independent {
            continue;
        }
        let mut next = BTreeSet::new();
        for &s in span {
            for k in 0..ord {
                next.insert(g.add_idx(s, g.scale_idx(c, k)));
            }
        }
        chosen.push((c, ord));
        if decompose_search(g, candidates, target, &next, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}
