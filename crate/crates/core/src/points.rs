//! Near-points and jets of `Rⁿ`.
//!
//! Functions on `Rⁿ` are modelled by polynomials. A near-point with values in
//! `A` only sees the Taylor expansion of a function up to `height(A)` at its
//! base point, so polynomials of that degree centred at the base are exact.
//! A jet is stored as the kernel of the point on those centred polynomials;
//! the full ideal is that kernel plus every centred monomial of degree
//! `height(A) + 1`.

use std::fmt;

use num_traits::One;

use crate::algebra::{graded_monomials, monomials_of_degree, quotient, AlgebraMorphism, AlgebraRef};
use crate::derivation::{
    derivation_space, left_exactness_full, induced_derivation_map, ModuleSpec,
};
use crate::error::{Result, WeilError};
use crate::ideal::{annihilator, is_infinitesimally_invariant, maximal_power, Ideal};
use crate::linalg::{add_vec, is_zero_vec, sub_vec, zeros, Matrix, RowEchelon, Q};
use crate::poly::{Poly, PolyMap};

/// An algebra morphism `Poly(Rⁿ) → A`, given by the images of the coordinates.
#[derive(Clone, PartialEq, Eq)]
pub struct NearPoint {
    algebra: AlgebraRef,
    images: Vec<Vec<Q>>,
    base: Vec<Q>,
}

impl fmt::Debug for NearPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imgs: Vec<String> = self.images.iter().map(|v| self.algebra.format(v)).collect();
        write!(f, "NearPoint({})", imgs.join(", "))
    }
}

pub fn make_near_point(a: &AlgebraRef, images: Vec<Vec<Q>>) -> Result<NearPoint> {
    for v in &images {
        if v.len() != a.dim() {
            return Err(WeilError::DimensionMismatch {
                expected: a.dim(),
                got: v.len(),
            });
        }
    }
    let base = images.iter().map(|v| a.augmentation(v)).collect();
    Ok(NearPoint {
        algebra: a.clone(),
        images,
        base,
    })
}

impl NearPoint {
    pub fn algebra(&self) -> &AlgebraRef {
        &self.algebra
    }

    pub fn ambient_dim(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[Vec<Q>] {
        &self.images
    }

    pub fn base(&self) -> &[Q] {
        &self.base
    }

    /// `image_i − base_i`, the parts in the maximal ideal.
    pub fn infinitesimal_parts(&self) -> Vec<Vec<Q>> {
        let unit = self.algebra.unit();
        self.images
            .iter()
            .zip(&self.base)
            .map(|(v, b)| sub_vec(v, &crate::linalg::scale_vec(b, &unit)))
            .collect()
    }

    pub fn eval(&self, f: &Poly) -> Vec<Q> {
        assert_eq!(f.nvars(), self.ambient_dim(), "polynomial in the wrong number of variables");
        f.eval_in(&self.algebra, &self.images)
    }

    /// Composition with an algebra morphism out of `A`.
    pub fn push(&self, phi: &AlgebraMorphism) -> Result<NearPoint> {
        if phi.source() != &self.algebra {
            return Err(WeilError::AlgebraMismatch);
        }
        make_near_point(phi.target(), self.images.iter().map(|v| phi.apply(v)).collect())
    }
}

/// Surjectivity, decided on classes modulo `m²`.
pub fn is_regular_point(p: &NearPoint) -> bool {
    let a = &p.algebra;
    let mut span = a.maximal_power(2);
    let before = span.rank();
    for v in p.infinitesimal_parts() {
        span.insert(&v);
    }
    span.rank() - before == a.width()
}

/// A derivation at `p`: `δ(f) = Σ_i p(∂_i f)·values_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointDerivation {
    at: NearPoint,
    values: Vec<Vec<Q>>,
}

impl PointDerivation {
    pub fn new(at: &NearPoint, values: Vec<Vec<Q>>) -> Result<Self> {
        if values.len() != at.ambient_dim() {
            return Err(WeilError::DimensionMismatch {
                expected: at.ambient_dim(),
                got: values.len(),
            });
        }
        if values.iter().any(|v| v.len() != at.algebra.dim()) {
            return Err(WeilError::DimensionMismatch {
                expected: at.algebra.dim(),
                got: values.iter().map(|v| v.len()).find(|&l| l != at.algebra.dim()).unwrap(),
            });
        }
        Ok(PointDerivation {
            at: at.clone(),
            values,
        })
    }

    pub fn zero(at: &NearPoint) -> Self {
        let d = at.algebra.dim();
        PointDerivation {
            at: at.clone(),
            values: vec![zeros(d); at.ambient_dim()],
        }
    }

    pub fn at(&self) -> &NearPoint {
        &self.at
    }

    pub fn values(&self) -> &[Vec<Q>] {
        &self.values
    }

    pub fn apply(&self, f: &Poly) -> Vec<Q> {
        let a = &self.at.algebra;
        let mut acc = zeros(a.dim());
        for (i, v) in self.values.iter().enumerate() {
            if is_zero_vec(v) {
                continue;
            }
            let di = self.at.eval(&f.partial(i));
            acc = add_vec(&acc, &a.mul(&di, v));
        }
        acc
    }

    /// Sum of derivations at the same point.
    pub fn add(&self, other: &PointDerivation) -> Result<PointDerivation> {
        if self.at != other.at {
            return Err(WeilError::BaseMismatch);
        }
        Ok(PointDerivation {
            at: self.at.clone(),
            values: self.values.iter().zip(&other.values).map(|(x, y)| add_vec(x, y)).collect(),
        })
    }

    /// The same values read as a derivation at another point.
    pub fn rebase(&self, at: &NearPoint) -> Result<PointDerivation> {
        PointDerivation::new(at, self.values.clone())
    }

    /// Ideal generated by the values.
    pub fn image_ideal(&self) -> Ideal {
        crate::ideal::ideal_span(&self.at.algebra, &self.values).expect("values have algebra length")
    }
}

/// Two coordinate functions whose derivative values multiply to a nonzero element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObstructionWitness {
    pub f: Poly,
    pub g: Poly,
    pub product: Vec<Q>,
}

fn square_obstruction(a: &AlgebraRef, values: &[Vec<Q>]) -> Option<ObstructionWitness> {
    let n = values.len();
    for i in 0..n {
        for j in i..n {
            let p = a.mul(&values[i], &values[j]);
            if !is_zero_vec(&p) {
                return Some(ObstructionWitness {
                    f: Poly::var(n, i),
                    g: Poly::var(n, j),
                    product: p,
                });
            }
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointSum {
    Point(NearPoint),
    Obstructed(ObstructionWitness),
}

/// `p + D`, a near-point exactly when the values of `D` generate a null-square ideal.
pub fn add_derivation_to_point(p: &NearPoint, d: &PointDerivation) -> Result<PointSum> {
    if &d.at != p {
        return Err(WeilError::BaseMismatch);
    }
    let a = &p.algebra;
    if let Some(w) = square_obstruction(a, &d.values) {
        return Ok(PointSum::Obstructed(w));
    }
    let images = p.images.iter().zip(&d.values).map(|(x, y)| add_vec(x, y)).collect();
    let sum = make_near_point(a, images)?;
    let n = p.ambient_dim();
    for e in graded_monomials(n, (a.height() as u32 + 1).min(3)) {
        let f = Poly::monomial(e, Q::one());
        debug_assert_eq!(sum.eval(&f), add_vec(&p.eval(&f), &d.apply(&f)));
    }
    Ok(PointSum::Point(sum))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointDifference {
    Derivation(PointDerivation),
    Obstructed(ObstructionWitness),
}

/// `q − p` as a derivation at `p`.
pub fn point_difference(p: &NearPoint, q: &NearPoint) -> Result<PointDifference> {
    if p.algebra != q.algebra || p.ambient_dim() != q.ambient_dim() || p.base != q.base {
        return Err(WeilError::BaseMismatch);
    }
    let values: Vec<Vec<Q>> = q.images.iter().zip(&p.images).map(|(x, y)| sub_vec(x, y)).collect();
    if let Some(w) = square_obstruction(&p.algebra, &values) {
        return Ok(PointDifference::Obstructed(w));
    }
    Ok(PointDifference::Derivation(PointDerivation {
        at: p.clone(),
        values,
    }))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomCheck {
    pub name: String,
    pub holds: bool,
    pub witness: Option<String>,
}

/// Checks on a sample of one fibre of `M^A → M^B`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberCheck {
    pub checks: Vec<AxiomCheck>,
}

impl FiberCheck {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// Verifies that vertical derivations act freely and transitively on the sampled
/// fibre and that the action is associative.
pub fn fiber_affine_check(ideal: &Ideal, points: &[NearPoint]) -> Result<FiberCheck> {
    let a = ideal.algebra();
    if let Some((x, y, xy)) = ideal.nonzero_product_witness(ideal) {
        return Err(WeilError::HypothesisViolated(format!(
            "I^2 != 0: ({}) * ({}) = {}",
            a.format(&x),
            a.format(&y),
            a.format(&xy)
        )));
    }
    if points.iter().any(|p| &p.algebra != a) {
        return Err(WeilError::AlgebraMismatch);
    }
    let q = quotient(ideal)?;
    if let Some(p0) = points.first() {
        let b0 = p0.push(&q.projection)?;
        for p in &points[1..] {
            if p.push(&q.projection)? != b0 {
                return Err(WeilError::BaseMismatch);
            }
        }
    }
    let fmt_point = |p: &NearPoint| format!("{p:?}");
    let mut transitive = AxiomCheck {
        name: "transitive".into(),
        holds: true,
        witness: None,
    };
    let mut free = AxiomCheck {
        name: "free".into(),
        holds: true,
        witness: None,
    };
    let mut assoc = AxiomCheck {
        name: "associative".into(),
        holds: true,
        witness: None,
    };
    let diff = |p: &NearPoint, r: &NearPoint| -> Result<Option<PointDerivation>> {
        match point_difference(p, r)? {
            PointDifference::Derivation(d) => Ok(Some(d)),
            PointDifference::Obstructed(_) => Ok(None),
        }
    };
    for p in points {
        for r in points {
            let d = match diff(p, r)? {
                Some(d) if d.values.iter().all(|v| ideal.contains(v)) => d,
                _ => {
                    transitive.holds = false;
                    transitive.witness.get_or_insert_with(|| {
                        format!("{} - {} is not vertical", fmt_point(r), fmt_point(p))
                    });
                    continue;
                }
            };
            match add_derivation_to_point(p, &d)? {
                PointSum::Point(s) if &s == r => {}
                _ => {
                    transitive.holds = false;
                    transitive
                        .witness
                        .get_or_insert_with(|| format!("{} + ({} - {})", fmt_point(p), fmt_point(r), fmt_point(p)));
                }
            }
            let is_zero = d.values.iter().all(|v| is_zero_vec(v));
            if is_zero != (p == r) {
                free.holds = false;
                free.witness
                    .get_or_insert_with(|| format!("{} and {}", fmt_point(p), fmt_point(r)));
            }
            for s in points {
                let Some(e) = diff(r, s)? else { continue };
                let lhs = match add_derivation_to_point(r, &e)? {
                    PointSum::Point(x) => Some(x),
                    PointSum::Obstructed(_) => None,
                };
                let total = d.add(&e.rebase(p)?)?;
                let rhs = match add_derivation_to_point(p, &total)? {
                    PointSum::Point(x) => Some(x),
                    PointSum::Obstructed(_) => None,
                };
                if lhs.is_none() || lhs != rhs {
                    assoc.holds = false;
                    assoc.witness.get_or_insert_with(|| {
                        format!("{}, {}, {}", fmt_point(p), fmt_point(r), fmt_point(s))
                    });
                }
            }
        }
    }
    Ok(FiberCheck {
        checks: vec![free, transitive, assoc],
    })
}

/// The kernel of a regular near-point.
#[derive(Clone)]
pub struct Jet {
    representative: NearPoint,
    order: u32,
    /// Span of the kernel in centred monomial coordinates of degree `≤ order`.
    kernel: RowEchelon,
}

impl PartialEq for Jet {
    fn eq(&self, other: &Self) -> bool {
        self.representative.algebra == other.representative.algebra
            && self.representative.base == other.representative.base
            && self.kernel == other.kernel
    }
}

impl Eq for Jet {}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.kernel_polys().iter().map(|p| p.to_string()).collect();
        write!(f, "Jet(order {}; {})", self.order, gens.join(", "))
    }
}

impl Jet {
    pub fn representative(&self) -> &NearPoint {
        &self.representative
    }

    pub fn algebra(&self) -> &AlgebraRef {
        &self.representative.algebra
    }

    pub fn base(&self) -> &[Q] {
        &self.representative.base
    }

    /// Truncation degree of the centred polynomial model.
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn kernel(&self) -> &RowEchelon {
        &self.kernel
    }

    /// Kernel basis as polynomials in the centred coordinates `x_i − base_i`.
    pub fn kernel_polys(&self) -> Vec<Poly> {
        let n = self.representative.ambient_dim();
        let monos = graded_monomials(n, self.order);
        self.kernel
            .basis()
            .into_iter()
            .map(|v| Poly::from_terms(n, monos.iter().cloned().zip(v)))
            .collect()
    }

    /// Generators of the full jet ideal in centred coordinates: the kernel
    /// basis and all monomials of degree `order + 1`.
    pub fn ideal_generators(&self) -> Vec<Poly> {
        let n = self.representative.ambient_dim();
        let mut g = self.kernel_polys();
        for e in monomials_of_degree(n, self.order + 1) {
            g.push(Poly::monomial(e, Q::one()));
        }
        g
    }
}

/// Matrix of the point on centred monomials of degree `≤ h`.
fn centred_evaluation(p: &NearPoint, h: u32) -> Matrix {
    let n = p.ambient_dim();
    let parts = p.infinitesimal_parts();
    let monos = graded_monomials(n, h);
    let cols: Vec<Vec<Q>> = monos
        .iter()
        .map(|e| Poly::monomial(e.clone(), Q::one()).eval_in(&p.algebra, &parts))
        .collect();
    Matrix::from_columns(&cols, p.algebra.dim())
}

pub fn jet_of(p: &NearPoint) -> Result<Jet> {
    if !is_regular_point(p) {
        return Err(WeilError::NotRegular);
    }
    let h = p.algebra.height() as u32;
    let e = centred_evaluation(p, h);
    let kernel = RowEchelon::from_vectors(e.cols(), &e.kernel());
    Ok(Jet {
        representative: p.clone(),
        order: h,
        kernel,
    })
}

/// The jet of `φ∘p` over `B = A/I`.
pub fn jet_project(j: &Jet, ideal: &Ideal) -> Result<Jet> {
    if ideal.algebra() != j.algebra() {
        return Err(WeilError::AlgebraMismatch);
    }
    if !is_infinitesimally_invariant(ideal) {
        return Err(WeilError::NotInvariant);
    }
    let q = quotient(ideal)?;
    jet_of(&j.representative.push(&q.projection)?)
}

fn check_jet_hypothesis(ideal: &Ideal) -> Result<()> {
    let a = ideal.algebra();
    if !(ideal.is_subset_of(&annihilator(ideal)) && ideal.is_subset_of(&maximal_power(a, 2))) {
        return Err(WeilError::HypothesisViolated(
            "I is not contained in Ann(I) ∩ m²".into(),
        ));
    }
    Ok(())
}

/// Result of adding a vertical derivation to a jet.
#[derive(Clone, Debug)]
pub struct JetSum {
    pub jet: Jet,
    /// Whether the affine sequence of `I` is exact, so that the sum does not
    /// depend on the representative or on `D` within its class.
    pub well_defined: bool,
    pub warning: Option<String>,
}

/// `𝔭 + D`, the jet of `p + D` for the stored representative `p`.
pub fn jet_add(j: &Jet, d: &PointDerivation, ideal: &Ideal) -> Result<JetSum> {
    if ideal.algebra() != j.algebra() {
        return Err(WeilError::AlgebraMismatch);
    }
    check_jet_hypothesis(ideal)?;
    if d.at != j.representative {
        return Err(WeilError::BaseMismatch);
    }
    if d.values.iter().any(|v| !ideal.contains(v)) {
        return Err(WeilError::HypothesisViolated("D has values outside I".into()));
    }
    let sum = match add_derivation_to_point(&j.representative, d)? {
        PointSum::Point(p) => p,
        PointSum::Obstructed(_) => unreachable!("I ⊆ Ann(I) forces a null-square image"),
    };
    let jet = jet_of(&sum)?;
    let exact = sequence_is_exact(ideal)?;
    Ok(JetSum {
        jet,
        well_defined: exact,
        warning: (!exact).then(|| {
            "NotExact: the affine sequence of I is not exact; the sum may depend on the representative"
                .to_string()
        }),
    })
}

fn sequence_is_exact(ideal: &Ideal) -> Result<bool> {
    if !left_exactness_full(ideal)?.holds {
        return Ok(false);
    }
    if !is_infinitesimally_invariant(ideal) {
        return Ok(false);
    }
    Ok(induced_derivation_map(ideal)?.is_surjective())
}

/// Two derivations in the same class modulo `Der(A, I)∘p` whose sums with the
/// jet differ.
#[derive(Clone, Debug)]
pub struct AmbiguityWitness {
    pub derivation: PointDerivation,
    /// `D_A∘p` for a derivation `D_A: A → I`; adding it does not change the class.
    pub correction: PointDerivation,
    pub first: Jet,
    pub second: Jet,
}

/// Searches for a pair `D`, `D + D_A∘p` giving different jets. For exact
/// sequences none exists; otherwise the search tries `D` supported on one
/// coordinate with value an element of `I` moved by some `D_A`.
pub fn jet_add_ambiguity(j: &Jet, ideal: &Ideal) -> Result<Option<AmbiguityWitness>> {
    check_jet_hypothesis(ideal)?;
    let a = j.algebra().clone();
    let p = &j.representative;
    let space = derivation_space(&a, &ModuleSpec::Ideal(ideal.clone()))?;
    let n = p.ambient_dim();
    for da in space.maps() {
        let correction_values: Vec<Vec<Q>> = p.images.iter().map(|v| da.apply(v)).collect();
        for x in ideal.basis() {
            if is_zero_vec(&da.apply(&x)) {
                continue;
            }
            for c in 0..n {
                let mut values = vec![zeros(a.dim()); n];
                values[c] = x.clone();
                let d = PointDerivation::new(p, values)?;
                let shifted = d.add(&PointDerivation::new(p, correction_values.clone())?)?;
                let first = jet_add(j, &d, ideal)?.jet;
                let second = jet_add(j, &shifted, ideal)?.jet;
                if first != second {
                    return Ok(Some(AmbiguityWitness {
                        derivation: d,
                        correction: PointDerivation::new(p, correction_values)?,
                        first,
                        second,
                    }));
                }
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct TangentDimensions {
    /// Derivations at a near-point: free on the `n` coordinate values.
    pub near_point_tangent: usize,
    pub algebra_derivations: usize,
    /// `n·dim A − dim Der(A, A)`; absent when `n < width(A)` and there are no jets.
    pub jet_tangent: Option<usize>,
}

pub fn tangent_dimensions(a: &AlgebraRef, n: usize) -> Result<TangentDimensions> {
    let der = derivation_space(a, &ModuleSpec::WholeAlgebra)?.dim();
    let total = n * a.dim();
    Ok(TangentDimensions {
        near_point_tangent: total,
        algebra_derivations: der,
        jet_tangent: (n >= a.width()).then(|| total - der),
    })
}

/// The natural map `M^A → N^B` induced by a polynomial map and a morphism:
/// `p ↦ φ∘p∘f*`.
pub fn push_forward(p: &NearPoint, f: &PolyMap, phi: &AlgebraMorphism) -> Result<NearPoint> {
    if f.source_dim() != p.ambient_dim() {
        return Err(WeilError::DimensionMismatch {
            expected: p.ambient_dim(),
            got: f.source_dim(),
        });
    }
    if phi.source() != &p.algebra {
        return Err(WeilError::AlgebraMismatch);
    }
    let images = f.components().iter().map(|g| phi.apply(&p.eval(g))).collect();
    make_near_point(phi.target(), images)
}

/// `φ∘δ∘f*`, a derivation at the pushed-forward point.
pub fn push_forward_derivation(
    d: &PointDerivation,
    f: &PolyMap,
    phi: &AlgebraMorphism,
) -> Result<PointDerivation> {
    let at = push_forward(&d.at, f, phi)?;
    let values = f.components().iter().map(|g| phi.apply(&d.apply(g))).collect();
    PointDerivation::new(&at, values)
}

/// For `I ⊄ m²`, a proper subalgebra `S ⊊ A` that still maps onto `A/I`,
/// with its inclusion. Points with values in `S` project to regular points
/// of `A/I` without being regular themselves.
pub fn proper_subalgebra_onto_quotient(ideal: &Ideal) -> Result<Option<(AlgebraRef, AlgebraMorphism)>> {
    let a = ideal.algebra();
    if ideal.is_subset_of(&maximal_power(a, 2)) {
        return Ok(None);
    }
    let q = quotient(ideal)?;
    let lifts: Vec<_> = q
        .algebra
        .generators()
        .iter()
        .map(|g| a.element(q.lift(g)))
        .collect::<Result<_>>()?;
    let (s, incl) = crate::algebra::subalgebra_generated(a, &lifts)?;
    debug_assert!(s.dim() < a.dim());
    Ok(Some((s, incl)))
}

/// Coordinates `x_i ↦ base_i + ξ_i` in a truncated algebra, or any algebra
/// with at least `n` generators.
pub fn standard_point(a: &AlgebraRef, base: &[Q]) -> Result<NearPoint> {
    let gens = a.generators();
    let images = base
        .iter()
        .enumerate()
        .map(|(i, b)| {
            let mut v = crate::linalg::scale_vec(b, &a.unit());
            if let Some(g) = gens.get(i) {
                v = add_vec(&v, g);
            }
            v
        })
        .collect();
    make_near_point(a, images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::truncated_algebra;
    use crate::linalg::{q, unit_vector};

    fn v(xs: &[i64]) -> Vec<Q> {
        xs.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn evaluation_examples() {
        let r = truncated_algebra(0, 0).unwrap();
        let p = make_near_point(&r, vec![v(&[3]), v(&[4])]).unwrap();
        assert_eq!(p.base(), &[q(3), q(4)]);
        let dual = truncated_algebra(1, 1).unwrap();
        let p = make_near_point(&dual, vec![v(&[2, 3])]).unwrap();
        assert_eq!(p.eval(&Poly::var(1, 0).pow(2)), v(&[4, 12]));
        let a = truncated_algebra(1, 2).unwrap();
        let p = make_near_point(&a, vec![v(&[0, 1, 0])]).unwrap();
        assert_eq!(p.eval(&Poly::var(1, 0).pow(3)), v(&[0, 0, 0]));
    }

    #[test]
    fn regularity_examples() {
        let a = truncated_algebra(2, 3).unwrap();
        assert!(is_regular_point(&standard_point(&a, &[q(1), q(-2)]).unwrap()));
        let b = truncated_algebra(1, 2).unwrap();
        assert!(!is_regular_point(&make_near_point(&b, vec![v(&[0, 0, 1])]).unwrap()));
        let r = truncated_algebra(0, 0).unwrap();
        assert!(is_regular_point(&make_near_point(&r, vec![v(&[5])]).unwrap()));
    }

    #[test]
    fn addition_examples() {
        let dual = truncated_algebra(1, 1).unwrap();
        let p = make_near_point(&dual, vec![v(&[1, 0])]).unwrap();
        let d = PointDerivation::new(&p, vec![v(&[0, 7])]).unwrap();
        assert!(matches!(add_derivation_to_point(&p, &d).unwrap(), PointSum::Point(_)));

        let a = truncated_algebra(1, 2).unwrap();
        let p = make_near_point(&a, vec![v(&[0, 0, 0])]).unwrap();
        let d = PointDerivation::new(&p, vec![v(&[0, 1, 0])]).unwrap();
        match add_derivation_to_point(&p, &d).unwrap() {
            PointSum::Obstructed(w) => assert_eq!(w.product, v(&[0, 0, 1])),
            other => panic!("{other:?}"),
        }

        let a = truncated_algebra(1, 3).unwrap();
        let p = make_near_point(&a, vec![v(&[0, 1, 0, 0])]).unwrap();
        let d = PointDerivation::new(&p, vec![v(&[0, 0, 1, 0])]).unwrap();
        assert!(matches!(add_derivation_to_point(&p, &d).unwrap(), PointSum::Point(_)));

        let other = make_near_point(&a, vec![v(&[1, 1, 0, 0])]).unwrap();
        assert_eq!(add_derivation_to_point(&other, &d).unwrap_err(), WeilError::BaseMismatch);
    }

    #[test]
    fn difference_examples() {
        let dual = truncated_algebra(1, 1).unwrap();
        let p = make_near_point(&dual, vec![v(&[2, 3])]).unwrap();
        let r = make_near_point(&dual, vec![v(&[2, 5])]).unwrap();
        match point_difference(&p, &r).unwrap() {
            PointDifference::Derivation(d) => assert_eq!(d.values(), &[v(&[0, 2])]),
            other => panic!("{other:?}"),
        }
        match point_difference(&p, &p).unwrap() {
            PointDifference::Derivation(d) => assert_eq!(d, PointDerivation::zero(&p)),
            other => panic!("{other:?}"),
        }
        let a = truncated_algebra(1, 2).unwrap();
        let z = make_near_point(&a, vec![v(&[0, 0, 0])]).unwrap();
        let x = make_near_point(&a, vec![v(&[0, 1, 0])]).unwrap();
        assert!(matches!(point_difference(&z, &x).unwrap(), PointDifference::Obstructed(_)));
        let shifted = make_near_point(&a, vec![v(&[1, 1, 0])]).unwrap();
        assert_eq!(point_difference(&z, &shifted).unwrap_err(), WeilError::BaseMismatch);
    }

    #[test]
    fn fiber_examples() {
        let a = truncated_algebra(1, 3).unwrap();
        let m2 = maximal_power(&a, 2);
        let p = make_near_point(&a, vec![v(&[0, 1, 0, 0])]).unwrap();
        let r = make_near_point(&a, vec![v(&[0, 1, 3, -1])]).unwrap();
        let s = make_near_point(&a, vec![v(&[0, 1, -2, 5])]).unwrap();
        assert!(fiber_affine_check(&m2, &[p.clone(), r.clone(), s]).unwrap().holds());
        assert!(fiber_affine_check(&m2, std::slice::from_ref(&p)).unwrap().holds());

        let b = truncated_algebra(1, 4).unwrap();
        let p = make_near_point(&b, vec![v(&[0, 1, 0, 0, 0])]).unwrap();
        match fiber_affine_check(&maximal_power(&b, 2), &[p]).unwrap_err() {
            WeilError::HypothesisViolated(msg) => assert!(msg.ends_with("= xi^4"), "{msg}"),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn jet_examples() {
        let dual = truncated_algebra(1, 1).unwrap();
        let j1 = jet_of(&make_near_point(&dual, vec![v(&[0, 1]), v(&[0, 2])]).unwrap()).unwrap();
        let j2 = jet_of(&make_near_point(&dual, vec![v(&[0, 2]), v(&[0, 4])]).unwrap()).unwrap();
        let j3 = jet_of(&make_near_point(&dual, vec![v(&[0, 1]), v(&[0, 3])]).unwrap()).unwrap();
        assert_eq!(j1, j2);
        assert_ne!(j1, j3);
        // span{2x1 − x2}; the degree-2 monomials are implicit
        assert_eq!(j1.kernel().rank(), 1);
        assert_eq!(j1.ideal_generators().len(), 4);

        let r = truncated_algebra(0, 0).unwrap();
        let j = jet_of(&make_near_point(&r, vec![v(&[1]), v(&[2])]).unwrap()).unwrap();
        assert_eq!(j.ideal_generators().len(), 2);
        assert!(j.kernel().is_zero());

        let a = truncated_algebra(1, 2).unwrap();
        let bad = make_near_point(&a, vec![v(&[0, 0, 1])]).unwrap();
        assert_eq!(jet_of(&bad).unwrap_err(), WeilError::NotRegular);
    }

    #[test]
    fn projection_examples() {
        let a = truncated_algebra(1, 2).unwrap();
        let parabola = make_near_point(&a, vec![v(&[0, 1, 0]), v(&[0, 0, 1])]).unwrap();
        let j = jet_of(&parabola).unwrap();
        assert_eq!(jet_project(&j, &Ideal::zero(&a)).unwrap(), j);
        let t = jet_project(&j, &maximal_power(&a, 2)).unwrap();
        let dual = truncated_algebra(1, 1).unwrap();
        let line = jet_of(&make_near_point(&dual, vec![v(&[0, 1]), v(&[0, 0])]).unwrap()).unwrap();
        assert_eq!(t, line);
        let base = jet_project(&j, &maximal_power(&a, 1)).unwrap();
        assert_eq!(base.order(), 0);
    }

    #[test]
    fn jet_addition_examples() {
        let a = truncated_algebra(1, 2).unwrap();
        let m2 = maximal_power(&a, 2);
        let p = make_near_point(&a, vec![v(&[0, 1, 0]), v(&[0, 0, 0])]).unwrap();
        let j = jet_of(&p).unwrap();
        let zero = jet_add(&j, &PointDerivation::zero(&p), &m2).unwrap();
        assert_eq!(zero.jet, j);
        let d = PointDerivation::new(&p, vec![v(&[0, 0, 0]), v(&[0, 0, 1])]).unwrap();
        let moved = jet_add(&j, &d, &m2).unwrap();
        assert!(moved.well_defined);
        let target = jet_of(&make_near_point(&a, vec![v(&[0, 1, 0]), v(&[0, 0, 1])]).unwrap()).unwrap();
        assert_eq!(moved.jet, target);
        assert_ne!(moved.jet, j);
        assert_eq!(jet_project(&moved.jet, &m2).unwrap(), jet_project(&j, &m2).unwrap());
    }

    #[test]
    fn ambiguity_dichotomy() {
        let a = truncated_algebra(1, 3).unwrap();
        let p = make_near_point(&a, vec![v(&[0, 1, 0, 0]), v(&[0, 0, 0, 0])]).unwrap();
        let j = jet_of(&p).unwrap();
        assert!(jet_add_ambiguity(&j, &maximal_power(&a, 3)).unwrap().is_none());
        let w = jet_add_ambiguity(&j, &maximal_power(&a, 2)).unwrap().unwrap();
        assert_ne!(w.first, w.second);
        let d = PointDerivation::new(&p, vec![v(&[0, 0, 0, 0]), v(&[0, 0, 1, 0])]).unwrap();
        assert!(!jet_add(&j, &d, &maximal_power(&a, 2)).unwrap().well_defined);
    }

    #[test]
    fn tangent_examples() {
        let r = truncated_algebra(0, 0).unwrap();
        let t = tangent_dimensions(&r, 3).unwrap();
        assert_eq!((t.near_point_tangent, t.algebra_derivations, t.jet_tangent), (3, 0, Some(3)));
        let dual = truncated_algebra(1, 1).unwrap();
        let t = tangent_dimensions(&dual, 2).unwrap();
        assert_eq!((t.near_point_tangent, t.algebra_derivations, t.jet_tangent), (4, 1, Some(3)));
        let a = truncated_algebra(1, 2).unwrap();
        let t = tangent_dimensions(&a, 2).unwrap();
        assert_eq!((t.near_point_tangent, t.algebra_derivations, t.jet_tangent), (6, 2, Some(4)));
    }

    #[test]
    fn subalgebra_witness() {
        let a = truncated_algebra(2, 2).unwrap();
        let i = crate::ideal::ideal_span(&a, &[unit_vector(6, 2)]).unwrap();
        let (s, incl) = proper_subalgebra_onto_quotient(&i).unwrap().unwrap();
        assert!(s.dim() < a.dim());
        let q = quotient(&i).unwrap();
        assert!(q.projection.compose(&incl).unwrap().is_surjective());
        assert!(proper_subalgebra_onto_quotient(&maximal_power(&a, 2)).unwrap().is_none());
    }
}
