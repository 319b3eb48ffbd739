//! Ideals of Weil algebras as echelonized subspaces.

use std::fmt;

use crate::algebra::{AlgebraElement, AlgebraRef};
use crate::derivation::{derivation_space, ModuleSpec};
use crate::error::{Result, WeilError};
use crate::linalg::{unit_vector, RowEchelon, Q};

/// An ideal of a Weil algebra. Equality compares reduced echelon bases.
#[derive(Clone, PartialEq, Eq)]
pub struct Ideal {
    algebra: AlgebraRef,
    span: RowEchelon,
}

impl fmt::Debug for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let basis: Vec<String> = self
            .span
            .basis()
            .iter()
            .map(|v| self.algebra.format(v))
            .collect();
        write!(f, "Ideal({})", basis.join(", "))
    }
}

impl Ideal {
    /// Wraps a subspace that is already known to be an ideal.
    pub(crate) fn from_subspace(algebra: AlgebraRef, span: RowEchelon) -> Self {
        debug_assert_eq!(span.ncols(), algebra.dim());
        Ideal { algebra, span }
    }

    pub fn zero(algebra: &AlgebraRef) -> Self {
        Ideal::from_subspace(algebra.clone(), RowEchelon::new(algebra.dim()))
    }

    pub fn whole(algebra: &AlgebraRef) -> Self {
        Ideal::from_subspace(algebra.clone(), algebra.maximal_power(0))
    }

    pub fn algebra(&self) -> &AlgebraRef {
        &self.algebra
    }

    pub fn subspace(&self) -> &RowEchelon {
        &self.span
    }

    pub fn dim(&self) -> usize {
        self.span.rank()
    }

    pub fn basis(&self) -> Vec<Vec<Q>> {
        self.span.basis()
    }

    pub fn basis_elements(&self) -> Vec<AlgebraElement> {
        self.basis()
            .into_iter()
            .map(|v| AlgebraElement::new(self.algebra.clone(), v).expect("basis vector length"))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.span.is_zero()
    }

    pub fn is_whole(&self) -> bool {
        self.span.is_full()
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        self.span.contains(v)
    }

    pub fn is_subset_of(&self, other: &Ideal) -> bool {
        other.span.contains_all(&self.span)
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.same_algebra(other)?;
        Ok(Ideal::from_subspace(self.algebra.clone(), self.span.sum(&other.span)))
    }

    pub fn intersection(&self, other: &Ideal) -> Result<Ideal> {
        self.same_algebra(other)?;
        Ok(Ideal::from_subspace(
            self.algebra.clone(),
            self.span.intersection(&other.span),
        ))
    }

    fn same_algebra(&self, other: &Ideal) -> Result<()> {
        if self.algebra != other.algebra {
            Err(WeilError::AlgebraMismatch)
        } else {
            Ok(())
        }
    }

    /// First pair of basis elements with a nonzero product, if any.
    pub fn nonzero_product_witness(&self, other: &Ideal) -> Option<(Vec<Q>, Vec<Q>, Vec<Q>)> {
        let a = &self.algebra;
        let xs = self.basis();
        let ys = other.basis();
        for x in &xs {
            for y in &ys {
                let p = a.mul(x, y);
                if !crate::linalg::is_zero_vec(&p) {
                    return Some((x.clone(), y.clone(), p));
                }
            }
        }
        None
    }
}

/// Smallest ideal containing `gens`.
pub fn ideal_span(a: &AlgebraRef, gens: &[Vec<Q>]) -> Result<Ideal> {
    let d = a.dim();
    let mut span = RowEchelon::new(d);
    let mut frontier = Vec::new();
    for g in gens {
        if g.len() != d {
            return Err(WeilError::DimensionMismatch {
                expected: d,
                got: g.len(),
            });
        }
        if span.insert(g) {
            frontier.push(g.clone());
        }
    }
    while let Some(x) = frontier.pop() {
        for i in 1..d {
            let p = a.mul(&x, &unit_vector(d, i));
            if span.insert(&p) {
                frontier.push(p);
            }
        }
    }
    Ok(Ideal::from_subspace(a.clone(), span))
}

pub fn ideal_span_elements(a: &AlgebraRef, gens: &[AlgebraElement]) -> Result<Ideal> {
    if gens.iter().any(|g| g.algebra() != a) {
        return Err(WeilError::AlgebraMismatch);
    }
    let v: Vec<Vec<Q>> = gens.iter().map(|g| g.coords().to_vec()).collect();
    ideal_span(a, &v)
}

/// `I·J`, spanned by products of basis elements.
pub fn ideal_product(i: &Ideal, j: &Ideal) -> Result<Ideal> {
    i.same_algebra(j)?;
    let a = &i.algebra;
    let mut span = RowEchelon::new(a.dim());
    let ys = j.basis();
    for x in i.basis() {
        for y in &ys {
            span.insert(&a.mul(&x, y));
        }
    }
    Ok(Ideal::from_subspace(a.clone(), span))
}

/// `I^k`, with `I^0 = A`.
pub fn ideal_power(i: &Ideal, k: usize) -> Ideal {
    let mut acc = Ideal::whole(&i.algebra);
    for _ in 0..k {
        acc = ideal_product(&acc, i).expect("same algebra");
    }
    acc
}

pub fn ideal_square(i: &Ideal) -> Ideal {
    ideal_product(i, i).expect("same algebra")
}

/// `m^k`, read from the filtration.
pub fn maximal_power(a: &AlgebraRef, k: usize) -> Ideal {
    Ideal::from_subspace(a.clone(), a.maximal_power(k))
}

/// `Ann(I) = {a : a·x = 0 for all x in I}`.
pub fn annihilator(i: &Ideal) -> Ideal {
    let a = &i.algebra;
    let d = a.dim();
    let mut constraints = RowEchelon::new(d);
    for x in i.basis() {
        // row k of the map t ↦ t·x
        let m = a.mult_matrix(&x);
        for r in m.row_vectors() {
            constraints.insert(&r);
        }
    }
    Ideal::from_subspace(
        a.clone(),
        RowEchelon::from_vectors(d, &constraints.nullspace()),
    )
}

pub fn is_null_square(i: &Ideal) -> bool {
    i.nonzero_product_witness(i).is_none()
}

/// Whether every derivation `A → A` maps `I` into itself.
pub fn is_infinitesimally_invariant(i: &Ideal) -> bool {
    invariance_witness(i).is_none()
}

/// A derivation and a basis element of `I` it moves outside `I`.
pub fn invariance_witness(i: &Ideal) -> Option<(crate::linalg::Matrix, Vec<Q>)> {
    if i.is_zero() || i.is_whole() {
        return None;
    }
    let ders = derivation_space(i.algebra(), &ModuleSpec::WholeAlgebra)
        .expect("whole algebra is always a compatible module");
    for d in ders.maps() {
        for x in i.basis() {
            if !i.contains(&d.apply(&x)) {
                return Some((d.clone(), x));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::truncated_algebra;

    fn xi_pow(a: &AlgebraRef, k: usize) -> Vec<Q> {
        unit_vector(a.dim(), k)
    }

    #[test]
    fn span_examples() {
        let a = truncated_algebra(1, 3).unwrap();
        assert!(ideal_span(&a, &[]).unwrap().is_zero());
        assert!(ideal_span(&a, &[a.unit()]).unwrap().is_whole());
        let i = ideal_span(&a, &[xi_pow(&a, 2)]).unwrap();
        assert_eq!(i.basis(), vec![xi_pow(&a, 2), xi_pow(&a, 3)]);
    }

    #[test]
    fn product_examples() {
        let a = truncated_algebra(1, 3).unwrap();
        let m2 = maximal_power(&a, 2);
        assert!(ideal_product(&m2, &Ideal::zero(&a)).unwrap().is_zero());
        assert!(ideal_square(&m2).is_zero());
        let b = truncated_algebra(1, 4).unwrap();
        let m2 = maximal_power(&b, 2);
        assert_eq!(ideal_square(&m2).basis(), vec![xi_pow(&b, 4)]);
    }

    #[test]
    fn product_requires_same_algebra() {
        let a = truncated_algebra(1, 3).unwrap();
        let b = truncated_algebra(1, 4).unwrap();
        assert_eq!(
            ideal_product(&maximal_power(&a, 1), &maximal_power(&b, 1)).unwrap_err(),
            WeilError::AlgebraMismatch
        );
    }

    #[test]
    fn maximal_power_examples() {
        let a = truncated_algebra(2, 2).unwrap();
        assert!(maximal_power(&a, 0).is_whole());
        assert!(maximal_power(&a, 3).is_zero());
        assert_eq!(maximal_power(&a, 2).basis(), (3..6).map(|k| xi_pow(&a, k)).collect::<Vec<_>>());
    }

    #[test]
    fn annihilator_examples() {
        let a = truncated_algebra(1, 1).unwrap();
        assert!(annihilator(&Ideal::zero(&a)).is_whole());
        assert_eq!(annihilator(&maximal_power(&a, 1)), maximal_power(&a, 1));
        for l in 1..=6 {
            let a = truncated_algebra(1, l).unwrap();
            for k in 0..l {
                assert_eq!(annihilator(&maximal_power(&a, k + 1)), maximal_power(&a, l - k));
            }
        }
    }

    #[test]
    fn null_square_examples() {
        let a = truncated_algebra(1, 3).unwrap();
        assert!(is_null_square(&Ideal::zero(&a)));
        assert!(is_null_square(&maximal_power(&a, 2)));
        let b = truncated_algebra(1, 2).unwrap();
        assert!(!is_null_square(&maximal_power(&b, 1)));
    }

    #[test]
    fn invariance_examples() {
        let a = truncated_algebra(2, 2).unwrap();
        for k in 0..=3 {
            assert!(is_infinitesimally_invariant(&maximal_power(&a, k)));
        }
        assert!(is_infinitesimally_invariant(&Ideal::zero(&a)));
        let xi1 = ideal_span(&a, &[xi_pow(&a, 1)]).unwrap();
        let (d, x) = invariance_witness(&xi1).unwrap();
        assert!(!xi1.contains(&d.apply(&x)));
    }

    #[test]
    fn sum_and_intersection() {
        let a = truncated_algebra(2, 2).unwrap();
        let x = ideal_span(&a, &[xi_pow(&a, 1)]).unwrap();
        let y = ideal_span(&a, &[xi_pow(&a, 2)]).unwrap();
        assert_eq!(x.intersection(&y).unwrap().basis(), vec![xi_pow(&a, 4)]);
        assert_eq!(x.sum(&y).unwrap(), maximal_power(&a, 1));
    }
}
