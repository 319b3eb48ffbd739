//! Derivation spaces, the map they induce on a quotient, left exactness of the
//! affine sequence, and automorphisms.
//!
//! A derivation `δ: S → M` is found as the nullspace of the full Leibniz
//! system `δ(e_i e_j) = e_i·δ(e_j) + e_j·δ(e_i)`, `δ(1) = 0`, written in
//! coordinates of a basis of `M`. Maps are stored as matrices in the ambient
//! coordinates of the algebra that contains `M`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{generator_monomial_basis, quotient, AlgebraRef, Quotient, WeilAlgebra};
use crate::error::{Result, WeilError};
use crate::ideal::{annihilator, ideal_square, maximal_power, Ideal};
use crate::linalg::{
    add_vec, is_zero_vec, scale_vec, to_sparse, unit_vector, zeros, Matrix, RowEchelon,
    SparseRow, Q,
};

/// Coefficient module of a derivation space.
#[derive(Clone, Debug)]
pub enum ModuleSpec {
    /// `Der(A, A)`.
    WholeAlgebra,
    /// `Der(A, I)` for an ideal `I ⊆ A`.
    Ideal(Ideal),
    /// `Der(A/J, I)` where `I` is a module over `A/J` because `J·I = 0`.
    IdealOverQuotient { ideal: Ideal, by: Ideal },
    /// `Der(A, A/I)`.
    QuotientAlgebra(Ideal),
}

/// A basis of derivations `source → M`.
#[derive(Clone, Debug)]
pub struct DerivationSpace {
    source: AlgebraRef,
    ambient_dim: usize,
    maps: Vec<Matrix>,
    /// Columns of this matrix are the flattened basis maps; used for coordinates.
    flat: Matrix,
    quotient: Option<Quotient>,
}

impl DerivationSpace {
    pub fn source(&self) -> &AlgebraRef {
        &self.source
    }

    pub fn dim(&self) -> usize {
        self.maps.len()
    }

    /// Basis maps, each `ambient × source.dim`.
    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    /// Dimension of the algebra whose coordinates the maps take values in.
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// The quotient used as source, for `IdealOverQuotient` spaces.
    pub fn quotient(&self) -> Option<&Quotient> {
        self.quotient.as_ref()
    }

    /// Coordinates of `map` in the basis, or `None` if it is not in the span.
    pub fn coordinates(&self, map: &Matrix) -> Option<Vec<Q>> {
        if map.rows() != self.ambient_dim || map.cols() != self.source.dim() {
            return None;
        }
        if self.maps.is_empty() {
            return map.is_zero().then(Vec::new);
        }
        self.flat.solve(map.entries())
    }

    pub fn contains(&self, map: &Matrix) -> bool {
        self.coordinates(map).is_some()
    }

    pub fn combination(&self, coeffs: &[Q]) -> Matrix {
        let mut acc = Matrix::zeros(self.ambient_dim, self.source.dim());
        for (c, m) in coeffs.iter().zip(&self.maps) {
            if !c.is_zero() {
                acc = acc.add(&m.scale(c));
            }
        }
        acc
    }
}

/// Nullspace of the Leibniz system. `act[i][k]` is row `k` of the action of
/// `e_i` on the coefficient module, in module coordinates.
fn solve_leibniz(src: &WeilAlgebra, vdim: usize, act: &[Vec<SparseRow>]) -> Vec<Vec<Q>> {
    let s = src.dim();
    let unknown = |i: usize, r: usize| i * vdim + r;
    let mut system = RowEchelon::new(s * vdim);
    for k in 0..vdim {
        system.insert_sparse(vec![(unknown(0, k), Q::one())]);
    }
    for i in 1..s {
        for j in i..s {
            for k in 0..vdim {
                let mut row: BTreeMap<usize, Q> = BTreeMap::new();
                for (p, c) in src.basis_product(i, j) {
                    *row.entry(unknown(*p, k)).or_insert_with(Q::zero) += c;
                }
                for (r, c) in &act[i][k] {
                    *row.entry(unknown(j, *r)).or_insert_with(Q::zero) -= c;
                }
                for (r, c) in &act[j][k] {
                    *row.entry(unknown(i, *r)).or_insert_with(Q::zero) -= c;
                }
                let row: SparseRow = row.into_iter().filter(|(_, v)| !v.is_zero()).collect();
                if !row.is_empty() {
                    system.insert_sparse(row);
                }
            }
        }
    }
    system.nullspace()
}

/// Turns an action given on module basis vectors into the row layout used by `solve_leibniz`.
fn action_rows(s: usize, vdim: usize, act: impl Fn(usize, usize) -> Vec<Q>) -> Vec<Vec<SparseRow>> {
    (0..s)
        .map(|i| {
            let mut rows: Vec<SparseRow> = vec![Vec::new(); vdim];
            for r in 0..vdim {
                for (k, c) in to_sparse(&act(i, r)) {
                    rows[k].push((r, c));
                }
            }
            rows
        })
        .collect()
}

fn assemble(
    source: AlgebraRef,
    ambient_dim: usize,
    vdim: usize,
    solutions: Vec<Vec<Q>>,
    embed: impl Fn(&[Q]) -> Vec<Q>,
    quotient: Option<Quotient>,
) -> DerivationSpace {
    let s = source.dim();
    let maps: Vec<Matrix> = solutions
        .iter()
        .map(|u| {
            let cols: Vec<Vec<Q>> = (0..s).map(|i| embed(&u[i * vdim..(i + 1) * vdim])).collect();
            Matrix::from_columns(&cols, ambient_dim)
        })
        .collect();
    let flat_cols: Vec<Vec<Q>> = maps.iter().map(|m| m.entries().to_vec()).collect();
    let flat = Matrix::from_columns(&flat_cols, ambient_dim * s);
    DerivationSpace {
        source,
        ambient_dim,
        maps,
        flat,
        quotient,
    }
}

/// Basis of derivations from `a` (or from `A/J` for `IdealOverQuotient`) into the given module.
pub fn derivation_space(a: &AlgebraRef, module: &ModuleSpec) -> Result<DerivationSpace> {
    let d = a.dim();
    match module {
        ModuleSpec::WholeAlgebra => {
            let act = action_rows(d, d, |i, r| a.mul(&unit_vector(d, i), &unit_vector(d, r)));
            let sol = solve_leibniz(a, d, &act);
            Ok(assemble(a.clone(), d, d, sol, |v| v.to_vec(), None))
        }
        ModuleSpec::Ideal(ideal) => {
            if ideal.algebra() != a {
                return Err(WeilError::IncompatibleModule("ideal of another algebra".into()));
            }
            let basis = ideal.basis();
            let v = basis.len();
            let embed = |c: &[Q]| -> Vec<Q> {
                let mut out = zeros(d);
                for (ci, b) in c.iter().zip(&basis) {
                    crate::linalg::axpy(&mut out, ci, b);
                }
                out
            };
            let sub = ideal.subspace();
            let act = action_rows(d, v, |i, r| {
                let p = a.mul(&unit_vector(d, i), &basis[r]);
                sub.coordinates(&p).expect("ideal is closed under multiplication")
            });
            let sol = solve_leibniz(a, v, &act);
            Ok(assemble(a.clone(), d, v, sol, embed, None))
        }
        ModuleSpec::IdealOverQuotient { ideal, by } => {
            if ideal.algebra() != a || by.algebra() != a {
                return Err(WeilError::IncompatibleModule("ideal of another algebra".into()));
            }
            if !by.is_subset_of(&annihilator(ideal)) {
                return Err(WeilError::IncompatibleModule(
                    "the quotient ideal does not annihilate the module".into(),
                ));
            }
            let q = quotient(by)?;
            let b = q.algebra.clone();
            let s = b.dim();
            let basis = ideal.basis();
            let v = basis.len();
            let sub = ideal.subspace();
            let act = action_rows(s, v, |i, r| {
                let lifted = q.lift(&unit_vector(s, i));
                sub.coordinates(&a.mul(&lifted, &basis[r]))
                    .expect("ideal is closed under multiplication")
            });
            let sol = solve_leibniz(&b, v, &act);
            let embed = |c: &[Q]| -> Vec<Q> {
                let mut out = zeros(d);
                for (ci, bv) in c.iter().zip(&basis) {
                    crate::linalg::axpy(&mut out, ci, bv);
                }
                out
            };
            Ok(assemble(b, d, v, sol, embed, Some(q)))
        }
        ModuleSpec::QuotientAlgebra(ideal) => {
            if ideal.algebra() != a {
                return Err(WeilError::IncompatibleModule("ideal of another algebra".into()));
            }
            let q = quotient(ideal)?;
            let b = q.algebra.clone();
            let db = b.dim();
            let act = action_rows(d, db, |i, r| {
                b.mul(&q.projection.apply(&unit_vector(d, i)), &unit_vector(db, r))
            });
            let sol = solve_leibniz(a, db, &act);
            Ok(assemble(a.clone(), db, db, sol, |v| v.to_vec(), Some(q)))
        }
    }
}

/// Whether `map` (ambient `a` coordinates on both sides) is a derivation of `a`
/// with values in `values_in` (all of `a` when `None`).
pub fn is_derivation_into(a: &WeilAlgebra, map: &Matrix, values_in: Option<&Ideal>) -> bool {
    let d = a.dim();
    if map.rows() != d || map.cols() != d {
        return false;
    }
    let cols = map.columns();
    if !is_zero_vec(&cols[0]) {
        return false;
    }
    if let Some(i) = values_in {
        if cols.iter().any(|c| !i.contains(c)) {
            return false;
        }
    }
    for i in 0..d {
        for j in i..d {
            let mut e = zeros(d);
            for (k, c) in a.basis_product(i, j) {
                e[*k] = c.clone();
            }
            let lhs = map.apply(&e);
            let rhs = add_vec(
                &a.mul(&unit_vector(d, i), &cols[j]),
                &a.mul(&unit_vector(d, j), &cols[i]),
            );
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// The derivation of `a` determined by the values on its distinguished generators.
pub fn derivation_from_generator_images(a: &AlgebraRef, images: &[Vec<Q>]) -> Result<Matrix> {
    let d = a.dim();
    let gens = a.generators();
    if images.len() != gens.len() || images.iter().any(|v| v.len() != d) {
        return Err(WeilError::DimensionMismatch {
            expected: gens.len(),
            got: images.len(),
        });
    }
    let (exps, change) = generator_monomial_basis(a);
    let values: Vec<Vec<Q>> = exps
        .iter()
        .map(|e| {
            let mut acc = zeros(d);
            for (i, &ei) in e.iter().enumerate() {
                if ei == 0 {
                    continue;
                }
                let mut rest = e.clone();
                rest[i] -= 1;
                let mut mono = a.unit();
                for (g, &k) in gens.iter().zip(&rest) {
                    mono = a.mul(&mono, &a.pow(g, k));
                }
                let term = a.mul(&mono, &images[i]);
                acc = add_vec(&acc, &scale_vec(&Q::from_integer(ei.into()), &term));
            }
            acc
        })
        .collect();
    let on_monomials = Matrix::from_columns(&values, d);
    let map = on_monomials.mul(&change.inverse().expect("monomial basis"));
    if !is_derivation_into(a, &map, None) {
        return Err(WeilError::RelationsViolated);
    }
    Ok(map)
}

/// Linear map `ψ: Der(A, A) → Der(B, B)` induced on `B = A/I`.
#[derive(Clone, Debug)]
pub struct InducedDerivationMap {
    pub quotient: Quotient,
    pub source_space: DerivationSpace,
    pub target_space: DerivationSpace,
    /// `dim Der(B,B) × dim Der(A,A)`.
    pub matrix: Matrix,
    pub rank: usize,
}

impl InducedDerivationMap {
    pub fn kernel_dim(&self) -> usize {
        self.source_space.dim() - self.rank
    }

    pub fn cokernel_dim(&self) -> usize {
        self.target_space.dim() - self.rank
    }

    pub fn is_surjective(&self) -> bool {
        self.cokernel_dim() == 0
    }

    /// A basis derivation of `B` outside the image of `ψ`.
    pub fn cokernel_witness(&self) -> Option<Matrix> {
        let n = self.target_space.dim();
        let image = self.matrix.image();
        (0..n)
            .find(|&t| !image.contains(&unit_vector(n, t)))
            .map(|t| self.target_space.maps()[t].clone())
    }

    /// Derivations of `A` that descend to zero, as maps.
    pub fn kernel_maps(&self) -> Vec<Matrix> {
        self.matrix
            .kernel()
            .iter()
            .map(|c| self.source_space.combination(c))
            .collect()
    }
}

/// Descends every derivation of `A` to `A/I`; fails if some derivation moves `I`.
pub fn induced_derivation_map(ideal: &Ideal) -> Result<InducedDerivationMap> {
    let a = ideal.algebra();
    let q = quotient(ideal)?;
    let b = q.algebra.clone();
    let der_a = derivation_space(a, &ModuleSpec::WholeAlgebra)?;
    let der_b = derivation_space(&b, &ModuleSpec::WholeAlgebra)?;
    for m in der_a.maps() {
        for x in ideal.basis() {
            if !ideal.contains(&m.apply(&x)) {
                return Err(WeilError::NotInvariant);
            }
        }
    }
    let db = b.dim();
    let mut columns = Vec::with_capacity(der_a.dim());
    for m in der_a.maps() {
        let cols: Vec<Vec<Q>> = (0..db)
            .map(|s| q.projection.apply(&m.apply(&q.lift(&unit_vector(db, s)))))
            .collect();
        let descended = Matrix::from_columns(&cols, db);
        let c = der_b
            .coordinates(&descended)
            .expect("descended map is a derivation of the quotient");
        columns.push(c);
    }
    let matrix = Matrix::from_columns(&columns, der_b.dim());
    let rank = matrix.rank();
    Ok(InducedDerivationMap {
        quotient: q,
        source_space: der_a,
        target_space: der_b,
        matrix,
        rank,
    })
}

/// How left exactness was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LeftExactnessRoute {
    /// `I ⊆ Ann(I)²` forces every derivation into `I` to vanish on `I`.
    AnnihilatorSquare,
    /// Every basis derivation `A → I` was evaluated on `I`.
    FullDerivationCheck,
}

/// A derivation `A → I` that does not vanish on `I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationWitness {
    pub map: Matrix,
    pub element: Vec<Q>,
    pub value: Vec<Q>,
}

#[derive(Clone, Debug)]
pub struct LeftExactness {
    pub holds: bool,
    pub via: LeftExactnessRoute,
    pub witness: Option<DerivationWitness>,
}

fn require_self_annihilating(ideal: &Ideal) -> Result<()> {
    if !ideal.is_subset_of(&annihilator(ideal)) {
        return Err(WeilError::HypothesisViolated("I is not contained in Ann(I)".into()));
    }
    Ok(())
}

/// Decides whether `Der(A, I) = Der(A/I, I)`, taking the `I ⊆ Ann(I)²` shortcut when available.
pub fn left_exactness_test(ideal: &Ideal) -> Result<LeftExactness> {
    require_self_annihilating(ideal)?;
    if ideal.is_subset_of(&ideal_square(&annihilator(ideal))) {
        return Ok(LeftExactness {
            holds: true,
            via: LeftExactnessRoute::AnnihilatorSquare,
            witness: None,
        });
    }
    left_exactness_full(ideal)
}

/// Left exactness by evaluating every derivation `A → I` on `I`.
pub fn left_exactness_full(ideal: &Ideal) -> Result<LeftExactness> {
    require_self_annihilating(ideal)?;
    let space = derivation_space(ideal.algebra(), &ModuleSpec::Ideal(ideal.clone()))?;
    for m in space.maps() {
        for x in ideal.basis() {
            let value = m.apply(&x);
            if !is_zero_vec(&value) {
                return Ok(LeftExactness {
                    holds: false,
                    via: LeftExactnessRoute::FullDerivationCheck,
                    witness: Some(DerivationWitness {
                        map: m.clone(),
                        element: x,
                        value,
                    }),
                });
            }
        }
    }
    Ok(LeftExactness {
        holds: true,
        via: LeftExactnessRoute::FullDerivationCheck,
        witness: None,
    })
}

/// An automorphism of a Weil algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    algebra: AlgebraRef,
    matrix: Matrix,
}

impl Automorphism {
    /// Verifies unit, multiplicativity, invertibility and `σ(m) ⊆ m`.
    pub fn new(algebra: AlgebraRef, matrix: Matrix) -> Result<Self> {
        let d = algebra.dim();
        if matrix.rows() != d || matrix.cols() != d {
            return Err(WeilError::DimensionMismatch {
                expected: d,
                got: matrix.rows(),
            });
        }
        crate::algebra::AlgebraMorphism::new(algebra.clone(), algebra.clone(), matrix.clone())?;
        if matrix.rank() != d {
            return Err(WeilError::NotInvertible);
        }
        for i in 1..d {
            if !algebra.in_maximal(&matrix.column(i)) {
                return Err(WeilError::NotAutomorphism("maximal ideal is not preserved".into()));
            }
        }
        Ok(Automorphism { algebra, matrix })
    }

    pub fn identity(a: &AlgebraRef) -> Self {
        Automorphism {
            algebra: a.clone(),
            matrix: Matrix::identity(a.dim()),
        }
    }

    pub fn algebra(&self) -> &AlgebraRef {
        &self.algebra
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        self.matrix.apply(v)
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism> {
        if self.algebra != other.algebra {
            return Err(WeilError::AlgebraMismatch);
        }
        Ok(Automorphism {
            algebra: self.algebra.clone(),
            matrix: self.matrix.mul(&other.matrix),
        })
    }

    pub fn inverse(&self) -> Automorphism {
        Automorphism {
            algebra: self.algebra.clone(),
            matrix: self.matrix.inverse().expect("automorphisms are invertible"),
        }
    }

    /// Whether `σ(I) ⊆ I`.
    pub fn preserves(&self, ideal: &Ideal) -> bool {
        ideal.basis().iter().all(|x| ideal.contains(&self.apply(x)))
    }

    /// The induced automorphism of the quotient.
    pub fn project(&self, q: &Quotient) -> Result<Automorphism> {
        let kernel = q.projection.kernel();
        let ideal = Ideal::from_subspace(self.algebra.clone(), kernel);
        if !self.preserves(&ideal) {
            return Err(WeilError::NotInvariant);
        }
        let b = q.algebra.clone();
        let db = b.dim();
        let cols: Vec<Vec<Q>> = (0..db)
            .map(|s| q.projection.apply(&self.apply(&q.lift(&unit_vector(db, s)))))
            .collect();
        Ok(Automorphism {
            algebra: b,
            matrix: Matrix::from_columns(&cols, db),
        })
    }
}

/// The endomorphism sending each distinguished generator to the given image,
/// checked to be an automorphism.
pub fn automorphism_from_generator_images(a: &AlgebraRef, images: &[Vec<Q>]) -> Result<Automorphism> {
    let d = a.dim();
    let gens = a.generators();
    if images.len() != gens.len() || images.iter().any(|v| v.len() != d) {
        return Err(WeilError::DimensionMismatch {
            expected: gens.len(),
            got: images.len(),
        });
    }
    for (i, img) in images.iter().enumerate() {
        if !a.in_maximal(img) {
            return Err(WeilError::ElementNotInMaximal(i));
        }
    }
    let mut classes = a.maximal_power(2);
    let before = classes.rank();
    for img in images {
        classes.insert(img);
    }
    if classes.rank() - before != a.width() {
        return Err(WeilError::NotInvertible);
    }
    let (exps, change) = generator_monomial_basis(a);
    let values: Vec<Vec<Q>> = exps
        .iter()
        .map(|e| {
            let mut acc = a.unit();
            for (img, &k) in images.iter().zip(e) {
                acc = a.mul(&acc, &a.pow(img, k));
            }
            acc
        })
        .collect();
    let matrix = Matrix::from_columns(&values, d).mul(&change.inverse().expect("monomial basis"));
    match crate::algebra::AlgebraMorphism::new(a.clone(), a.clone(), matrix.clone()) {
        Ok(_) => {}
        Err(_) => return Err(WeilError::RelationsViolated),
    }
    Automorphism::new(a.clone(), matrix)
}

fn check_oplus_hypothesis(ideal: &Ideal) -> Result<()> {
    let a = ideal.algebra();
    let ok = ideal.is_subset_of(&annihilator(ideal)) && ideal.is_subset_of(&maximal_power(a, 2));
    if !ok {
        return Err(WeilError::HypothesisViolated(
            "I is not contained in Ann(I) ∩ m²".into(),
        ));
    }
    Ok(())
}

/// `σ ⊕ D = σ + σ∘D` for a derivation `D: A → I`.
pub fn aut_oplus(sigma: &Automorphism, d: &Matrix, ideal: &Ideal) -> Result<Automorphism> {
    if sigma.algebra() != ideal.algebra() {
        return Err(WeilError::AlgebraMismatch);
    }
    check_oplus_hypothesis(ideal)?;
    if !is_derivation_into(sigma.algebra(), d, Some(ideal)) {
        return Err(WeilError::HypothesisViolated("D is not a derivation A → I".into()));
    }
    let m = sigma.matrix().add(&sigma.matrix().mul(d));
    Automorphism::new(sigma.algebra().clone(), m).map_err(|e| WeilError::NotAutomorphism(e.to_string()))
}

/// The unique `D` with `σ ⊕ D = τ`, i.e. `σ⁻¹∘(τ − σ)`; checked to lie in `Der(A, I)`.
pub fn oplus_difference(sigma: &Automorphism, tau: &Automorphism, ideal: &Ideal) -> Result<Matrix> {
    if sigma.algebra() != tau.algebra() || sigma.algebra() != ideal.algebra() {
        return Err(WeilError::AlgebraMismatch);
    }
    let d = sigma.inverse().matrix().mul(&tau.matrix().sub(sigma.matrix()));
    if !is_derivation_into(sigma.algebra(), &d, Some(ideal)) {
        return Err(WeilError::HypothesisViolated(
            "automorphisms do not lie in the same fibre".into(),
        ));
    }
    Ok(d)
}

/// `exp(D)` for a nilpotent derivation.
pub fn exp_nilpotent(a: &AlgebraRef, d: &Matrix) -> Result<Automorphism> {
    let n = a.dim();
    let mut term = Matrix::identity(n);
    let mut acc = Matrix::identity(n);
    for k in 1..=n {
        term = term.mul(d).scale(&Q::new(1.into(), (k as i64).into()));
        if term.is_zero() {
            return Automorphism::new(a.clone(), acc);
        }
        acc = acc.add(&term);
    }
    Err(WeilError::HypothesisViolated("derivation is not nilpotent".into()))
}

fn small_rational<R: Rng>(rng: &mut R, bound: i64) -> Q {
    Q::from_integer(rng.gen_range(-bound..=bound).into())
}

/// Random automorphism: random invertible linear part on the generators plus
/// random terms in `m²`, resampled until the relations hold. Algebras whose
/// relations reject substitution fall back to `exp` of a random derivation
/// with values in `m²`, composed with a random substitution when one works.
pub fn random_automorphism<R: Rng>(a: &AlgebraRef, rng: &mut R) -> Automorphism {
    let d = a.dim();
    let gens = a.generators().to_vec();
    let m2 = a.maximal_power(2).basis();
    for _ in 0..32 {
        let images: Vec<Vec<Q>> = (0..gens.len())
            .map(|_| {
                let mut v = zeros(d);
                for g in &gens {
                    crate::linalg::axpy(&mut v, &small_rational(rng, 3), g);
                }
                for b in &m2 {
                    crate::linalg::axpy(&mut v, &small_rational(rng, 3), b);
                }
                v
            })
            .collect();
        if let Ok(s) = automorphism_from_generator_images(a, &images) {
            return s;
        }
    }
    let space = derivation_space(a, &ModuleSpec::Ideal(maximal_power(a, 2)))
        .expect("m² is an ideal of the algebra");
    let coeffs: Vec<Q> = (0..space.dim()).map(|_| small_rational(rng, 3)).collect();
    exp_nilpotent(a, &space.combination(&coeffs)).expect("derivations into m² are nilpotent")
}

/// Random element of `Der(A, I)` with small integer coefficients.
pub fn random_derivation<R: Rng>(space: &DerivationSpace, rng: &mut R) -> Matrix {
    let coeffs: Vec<Q> = (0..space.dim()).map(|_| small_rational(rng, 4)).collect();
    space.combination(&coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::truncated_algebra;
    use crate::ideal::Ideal;
    use crate::linalg::q;

    #[test]
    fn derivation_dimensions() {
        let r = truncated_algebra(1, 0).unwrap();
        assert_eq!(derivation_space(&r, &ModuleSpec::WholeAlgebra).unwrap().dim(), 0);
        for l in 1..=5 {
            let a = truncated_algebra(1, l).unwrap();
            assert_eq!(derivation_space(&a, &ModuleSpec::WholeAlgebra).unwrap().dim(), l);
        }
    }

    #[test]
    fn induced_map_examples() {
        let a = truncated_algebra(1, 3).unwrap();
        let psi = induced_derivation_map(&Ideal::zero(&a)).unwrap();
        assert_eq!(psi.matrix, Matrix::identity(3));
        let psi = induced_derivation_map(&maximal_power(&a, 3)).unwrap();
        assert_eq!((psi.source_space.dim(), psi.target_space.dim()), (3, 2));
        assert!(psi.is_surjective());
        assert_eq!(psi.kernel_dim(), 1);
        let b = truncated_algebra(1, 2).unwrap();
        let psi = induced_derivation_map(&maximal_power(&b, 2)).unwrap();
        assert_eq!((psi.source_space.dim(), psi.target_space.dim()), (2, 1));
        assert!(psi.is_surjective());
    }

    #[test]
    fn induced_map_rejects_non_invariant() {
        let a = truncated_algebra(2, 2).unwrap();
        let i = crate::ideal::ideal_span(&a, &[unit_vector(6, 1)]).unwrap();
        assert_eq!(induced_derivation_map(&i).unwrap_err(), WeilError::NotInvariant);
    }

    #[test]
    fn left_exactness_examples() {
        let a = truncated_algebra(1, 3).unwrap();
        let z = left_exactness_test(&Ideal::zero(&a)).unwrap();
        assert!(z.holds);
        let m3 = maximal_power(&a, 3);
        let fast = left_exactness_test(&m3).unwrap();
        assert!(fast.holds);
        assert_eq!(fast.via, LeftExactnessRoute::AnnihilatorSquare);
        assert!(left_exactness_full(&m3).unwrap().holds);

        let m2 = maximal_power(&a, 2);
        let res = left_exactness_test(&m2).unwrap();
        assert!(!res.holds);
        let w = res.witness.unwrap();
        assert!(is_derivation_into(&a, &w.map, Some(&m2)));
        assert!(!is_zero_vec(&w.map.apply(&w.element)));
        // δ(ξ) = ξ² is in Der(A, m²) and δ(ξ²) = 2ξ³
        let delta = derivation_from_generator_images(&a, &[unit_vector(4, 2)]).unwrap();
        assert!(is_derivation_into(&a, &delta, Some(&m2)));
        assert_eq!(delta.apply(&unit_vector(4, 2)), vec![q(0), q(0), q(0), q(2)]);
    }

    #[test]
    fn left_exactness_requires_hypothesis() {
        let a = truncated_algebra(1, 2).unwrap();
        let err = left_exactness_test(&maximal_power(&a, 1)).unwrap_err();
        assert!(matches!(err, WeilError::HypothesisViolated(_)));
    }

    #[test]
    fn automorphism_examples() {
        let a = truncated_algebra(1, 2).unwrap();
        let id = automorphism_from_generator_images(&a, &[unit_vector(3, 1)]).unwrap();
        assert_eq!(id, Automorphism::identity(&a));
        let s = automorphism_from_generator_images(&a, &[vec![q(0), q(2), q(0)]]).unwrap();
        assert_eq!(s.apply(&unit_vector(3, 2)), vec![q(0), q(0), q(4)]);
        let u = automorphism_from_generator_images(&a, &[vec![q(0), q(1), q(1)]]).unwrap();
        assert_eq!(u.apply(&unit_vector(3, 1)), vec![q(0), q(1), q(1)]);
        assert_eq!(u.apply(&unit_vector(3, 2)), vec![q(0), q(0), q(1)]);
        let err = automorphism_from_generator_images(&a, &[unit_vector(3, 2)]).unwrap_err();
        assert_eq!(err, WeilError::NotInvertible);
    }

    #[test]
    fn relations_are_checked() {
        // In R[x,y]/(x², xy, y²), sending x ↦ x, y ↦ x is a valid endomorphism but
        // not invertible; in R^2_2 / (ξ1²) sending ξ1 ↦ ξ2 violates ξ1² = 0.
        let t = truncated_algebra(2, 2).unwrap();
        let i = crate::ideal::ideal_span(&t, &[unit_vector(6, 3)]).unwrap();
        let (b, _) = crate::algebra::quotient_algebra(&i).unwrap();
        let x1 = b.generators()[0].clone();
        let x2 = b.generators()[1].clone();
        let err = automorphism_from_generator_images(&b, &[x2.clone(), x1.clone()]).unwrap_err();
        assert_eq!(err, WeilError::RelationsViolated);
    }

    #[test]
    fn oplus_examples() {
        let a = truncated_algebra(1, 3).unwrap();
        let m3 = maximal_power(&a, 3);
        let sigma = automorphism_from_generator_images(&a, &[vec![q(0), q(2), q(1), q(0)]]).unwrap();
        let zero = Matrix::zeros(4, 4);
        assert_eq!(aut_oplus(&sigma, &zero, &m3).unwrap(), sigma);
        let d = derivation_from_generator_images(&a, &[unit_vector(4, 3)]).unwrap();
        let id_plus = aut_oplus(&Automorphism::identity(&a), &d, &m3).unwrap();
        assert_eq!(id_plus.matrix(), &Matrix::identity(4).add(&d));
        // the hypothesis fails for m in R^3_1
        let err = aut_oplus(&sigma, &zero, &maximal_power(&a, 1)).unwrap_err();
        assert!(matches!(err, WeilError::HypothesisViolated(_)));
    }

    #[test]
    fn incompatible_module_is_rejected() {
        let a = truncated_algebra(1, 2).unwrap();
        let m = maximal_power(&a, 1);
        let err = derivation_space(
            &a,
            &ModuleSpec::IdealOverQuotient {
                ideal: m.clone(),
                by: m,
            },
        )
        .unwrap_err();
        assert!(matches!(err, WeilError::IncompatibleModule(_)));
    }
}
