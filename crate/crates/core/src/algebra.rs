//! Weil algebras given by structure constants over the rationals.
//!
//! Every algebra is stored in a normalized basis: `e_0` is the unit and
//! `e_1, ..., e_{d-1}` span the maximal ideal. The filtration
//! `m ⊇ m² ⊇ ... ⊇ m^h ⊋ 0` is computed once at construction.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Result, WeilError};
use crate::ideal::Ideal;
use crate::linalg::{
    add_vec, axpy, fmt_q, is_zero_vec, scale_vec, sub_vec, to_sparse, unit_vector, zeros, Matrix,
    RowEchelon, SparseRow, Q,
};

/// Constructions refuse algebras larger than this.
pub const DIM_CAP: usize = 5000;

pub type AlgebraRef = Arc<WeilAlgebra>;

/// How an algebra was produced. Used to attach closed-form cross-checks to reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Origin {
    Truncated { width: usize, height: usize },
    Table,
    Quotient,
    Subalgebra,
}

pub struct WeilAlgebra {
    labels: Vec<String>,
    products: Vec<SparseRow>,
    filtration: Vec<RowEchelon>,
    generators: Vec<Vec<Q>>,
    generator_names: Vec<String>,
    origin: Origin,
}

impl PartialEq for WeilAlgebra {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self, other)
            || (self.labels == other.labels && self.products == other.products)
    }
}

impl Eq for WeilAlgebra {}

impl fmt::Debug for WeilAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeilAlgebra")
            .field("dim", &self.dim())
            .field("labels", &self.labels)
            .field("origin", &self.origin)
            .finish()
    }
}

fn check_cap(dim: usize) -> Result<()> {
    if dim > DIM_CAP {
        Err(WeilError::DimensionCap { dim, cap: DIM_CAP })
    } else {
        Ok(())
    }
}

impl WeilAlgebra {
    /// Assembles an algebra whose basis is already normalized. Generators are
    /// filtered greedily to a minimal set modulo `m²`; when none are given the
    /// basis elements themselves are used.
    pub(crate) fn from_normalized(
        labels: Vec<String>,
        products: Vec<SparseRow>,
        candidate_generators: Vec<(String, Vec<Q>)>,
        origin: Origin,
    ) -> Result<AlgebraRef> {
        let dim = labels.len();
        check_cap(dim)?;
        assert_eq!(products.len(), dim * dim);
        let mut alg = WeilAlgebra {
            labels,
            products,
            filtration: Vec::new(),
            generators: Vec::new(),
            generator_names: Vec::new(),
            origin,
        };
        alg.filtration = alg.compute_filtration();
        let candidates = if candidate_generators.is_empty() {
            (1..dim)
                .map(|i| (alg.labels[i].clone(), unit_vector(dim, i)))
                .collect()
        } else {
            candidate_generators
        };
        let mut span = alg.maximal_power(2);
        for (name, g) in candidates {
            if span.insert(&g) {
                alg.generators.push(g);
                alg.generator_names.push(name);
            }
        }
        Ok(Arc::new(alg))
    }

    fn compute_filtration(&self) -> Vec<RowEchelon> {
        let d = self.dim();
        let m: Vec<Vec<Q>> = (1..d).map(|i| unit_vector(d, i)).collect();
        let mut layers = Vec::new();
        let mut current = RowEchelon::from_vectors(d, &m);
        while !current.is_zero() {
            let mut next = RowEchelon::new(d);
            for x in current.basis() {
                for i in 1..d {
                    next.insert(&self.mul_basis_right(&x, i));
                }
            }
            layers.push(current);
            if layers.len() > d {
                unreachable!("maximal ideal of a normalized algebra is nilpotent");
            }
            current = next;
        }
        layers
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    /// Indices of the basis elements spanning the maximal ideal.
    pub fn maximal_basis(&self) -> Vec<usize> {
        (1..self.dim()).collect()
    }

    pub fn generators(&self) -> &[Vec<Q>] {
        &self.generators
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    /// `e_i · e_j` as a sparse coordinate vector.
    pub fn basis_product(&self, i: usize, j: usize) -> &SparseRow {
        &self.products[i * self.dim() + j]
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> Q {
        self.basis_product(i, j)
            .iter()
            .find(|(c, _)| *c == k)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(Q::zero)
    }

    pub fn unit(&self) -> Vec<Q> {
        unit_vector(self.dim(), 0)
    }

    fn mul_basis_right(&self, x: &[Q], i: usize) -> Vec<Q> {
        let d = self.dim();
        let mut out = zeros(d);
        for (j, xj) in x.iter().enumerate() {
            if xj.is_zero() {
                continue;
            }
            for (k, c) in self.basis_product(j, i) {
                out[*k] += xj * c;
            }
        }
        out
    }

    pub fn mul(&self, a: &[Q], b: &[Q]) -> Vec<Q> {
        let d = self.dim();
        let mut out = zeros(d);
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let ab = ai * bj;
                for (k, c) in self.basis_product(i, j) {
                    out[*k] += &ab * c;
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &[Q], k: u32) -> Vec<Q> {
        let mut acc = self.unit();
        for _ in 0..k {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Matrix of `x ↦ a·x`.
    pub fn mult_matrix(&self, a: &[Q]) -> Matrix {
        let d = self.dim();
        let cols: Vec<Vec<Q>> = (0..d).map(|j| self.mul_basis_right(a, j)).collect();
        Matrix::from_columns(&cols, d)
    }

    /// Value of the unique morphism `A → Q`.
    pub fn augmentation(&self, a: &[Q]) -> Q {
        a[0].clone()
    }

    pub fn in_maximal(&self, a: &[Q]) -> bool {
        a[0].is_zero()
    }

    /// `m^k`, with `m^0 = A`.
    pub fn maximal_power(&self, k: usize) -> RowEchelon {
        let d = self.dim();
        match k {
            0 => RowEchelon::from_vectors(d, &(0..d).map(|i| unit_vector(d, i)).collect::<Vec<_>>()),
            k if k <= self.filtration.len() => self.filtration[k - 1].clone(),
            _ => RowEchelon::new(d),
        }
    }

    pub fn height(&self) -> usize {
        self.filtration.len()
    }

    pub fn width(&self) -> usize {
        let m = self.maximal_power(1).rank();
        let m2 = self.maximal_power(2).rank();
        m - m2
    }

    pub fn element(self: &Arc<Self>, coords: Vec<Q>) -> Result<AlgebraElement> {
        AlgebraElement::new(self.clone(), coords)
    }

    pub fn basis_element(self: &Arc<Self>, i: usize) -> AlgebraElement {
        AlgebraElement {
            algebra: self.clone(),
            coords: unit_vector(self.dim(), i),
        }
    }

    /// Human-readable form such as `xi^2 + 2*xi^3`.
    pub fn format(&self, a: &[Q]) -> String {
        let mut out = String::new();
        for (i, c) in a.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c < &Q::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let label = &self.labels[i];
            if label == "1" {
                out.push_str(&fmt_q(&mag));
            } else if mag.is_one() {
                out.push_str(label);
            } else {
                out.push_str(&format!("{}*{}", fmt_q(&mag), label));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// Dense structure-constant cube `c[i][j][k]`.
    pub fn structure_constants(&self) -> Vec<Vec<Vec<Q>>> {
        let d = self.dim();
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        let mut v = zeros(d);
                        for (k, c) in self.basis_product(i, j) {
                            v[*k] = c.clone();
                        }
                        v
                    })
                    .collect()
            })
            .collect()
    }
}

/// An element of a specific algebra.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    algebra: AlgebraRef,
    coords: Vec<Q>,
}

impl fmt::Debug for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.algebra.format(&self.coords))
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.algebra.format(&self.coords))
    }
}

impl AlgebraElement {
    pub fn new(algebra: AlgebraRef, coords: Vec<Q>) -> Result<Self> {
        if coords.len() != algebra.dim() {
            return Err(WeilError::DimensionMismatch {
                expected: algebra.dim(),
                got: coords.len(),
            });
        }
        Ok(AlgebraElement { algebra, coords })
    }

    pub fn zero(algebra: &AlgebraRef) -> Self {
        AlgebraElement {
            algebra: algebra.clone(),
            coords: zeros(algebra.dim()),
        }
    }

    pub fn scalar(algebra: &AlgebraRef, c: Q) -> Self {
        let mut coords = zeros(algebra.dim());
        coords[0] = c;
        AlgebraElement {
            algebra: algebra.clone(),
            coords,
        }
    }

    pub fn algebra(&self) -> &AlgebraRef {
        &self.algebra
    }

    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Q> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        is_zero_vec(&self.coords)
    }

    pub fn augmentation(&self) -> Q {
        self.coords[0].clone()
    }

    pub fn scale(&self, c: &Q) -> Self {
        AlgebraElement {
            algebra: self.algebra.clone(),
            coords: scale_vec(c, &self.coords),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        AlgebraElement {
            algebra: self.algebra.clone(),
            coords: self.algebra.pow(&self.coords, k),
        }
    }

    fn same(&self, other: &Self) {
        assert!(
            self.algebra == other.algebra,
            "arithmetic between elements of different algebras"
        );
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: Self) -> AlgebraElement {
        self.same(rhs);
        AlgebraElement {
            algebra: self.algebra.clone(),
            coords: add_vec(&self.coords, &rhs.coords),
        }
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: Self) -> AlgebraElement {
        self.same(rhs);
        AlgebraElement {
            algebra: self.algebra.clone(),
            coords: sub_vec(&self.coords, &rhs.coords),
        }
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: Self) -> AlgebraElement {
        self.same(rhs);
        AlgebraElement {
            algebra: self.algebra.clone(),
            coords: self.algebra.mul(&self.coords, &rhs.coords),
        }
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale(&-Q::one())
    }
}

/// A linear map between algebras, stored as a `target.dim × source.dim` matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AlgebraMorphism {
    source: AlgebraRef,
    target: AlgebraRef,
    matrix: Matrix,
}

impl AlgebraMorphism {
    /// Wraps a matrix after checking that it fixes the unit and is multiplicative.
    pub fn new(source: AlgebraRef, target: AlgebraRef, matrix: Matrix) -> Result<Self> {
        let m = AlgebraMorphism::new_unchecked(source, target, matrix);
        m.verify()?;
        Ok(m)
    }

    pub(crate) fn new_unchecked(source: AlgebraRef, target: AlgebraRef, matrix: Matrix) -> Self {
        assert_eq!(matrix.rows(), target.dim());
        assert_eq!(matrix.cols(), source.dim());
        AlgebraMorphism {
            source,
            target,
            matrix,
        }
    }

    pub fn identity(a: &AlgebraRef) -> Self {
        AlgebraMorphism::new_unchecked(a.clone(), a.clone(), Matrix::identity(a.dim()))
    }

    /// The unique morphism onto the ground field.
    pub fn augmentation(a: &AlgebraRef) -> Result<Self> {
        let r = truncated_algebra(0, 0)?;
        let mut m = Matrix::zeros(1, a.dim());
        m.set(0, 0, Q::one());
        Ok(AlgebraMorphism::new_unchecked(a.clone(), r, m))
    }

    pub fn source(&self) -> &AlgebraRef {
        &self.source
    }

    pub fn target(&self) -> &AlgebraRef {
        &self.target
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn apply(&self, a: &[Q]) -> Vec<Q> {
        self.matrix.apply(a)
    }

    pub fn apply_element(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        if a.algebra() != &self.source {
            return Err(WeilError::AlgebraMismatch);
        }
        AlgebraElement::new(self.target.clone(), self.apply(a.coords()))
    }

    /// `self ∘ first`
    pub fn compose(&self, first: &AlgebraMorphism) -> Result<Self> {
        if first.target != self.source {
            return Err(WeilError::AlgebraMismatch);
        }
        Ok(AlgebraMorphism::new_unchecked(
            first.source.clone(),
            self.target.clone(),
            self.matrix.mul(&first.matrix),
        ))
    }

    pub fn is_surjective(&self) -> bool {
        self.matrix.rank() == self.target.dim()
    }

    /// Kernel as a subspace of the source.
    pub fn kernel(&self) -> RowEchelon {
        RowEchelon::from_vectors(self.source.dim(), &self.matrix.kernel())
    }

    /// Checks unit preservation and multiplicativity on every basis pair.
    pub fn verify(&self) -> Result<()> {
        if self.apply(&self.source.unit()) != self.target.unit() {
            return Err(WeilError::NotAutomorphism("unit is not preserved".into()));
        }
        let d = self.source.dim();
        let images: Vec<Vec<Q>> = self.matrix.columns();
        for i in 0..d {
            for j in i..d {
                let mut lhs = zeros(d);
                for (k, c) in self.source.basis_product(i, j) {
                    lhs[*k] = c.clone();
                }
                let lhs = self.apply(&lhs);
                let rhs = self.target.mul(&images[i], &images[j]);
                if lhs != rhs {
                    return Err(WeilError::NotAutomorphism(format!(
                        "not multiplicative on ({}, {})",
                        self.source.labels[i], self.source.labels[j]
                    )));
                }
            }
        }
        Ok(())
    }
}

fn binomial(n: usize, k: usize) -> usize {
    let k = k.min(n - k.min(n));
    let mut r: u128 = 1;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    r.min(usize::MAX as u128) as usize
}

/// Exponent vectors of total degree `deg` in `nvars` variables, lexicographically descending.
pub fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<Vec<u32>> {
    fn rec(nvars: usize, deg: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == nvars {
            prefix.push(deg);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=deg).rev() {
            prefix.push(e);
            rec(nvars, deg - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if deg == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(nvars, deg, &mut Vec::new(), &mut out);
    out
}

/// Monomials of degree at most `max_deg` in graded-lexicographic order.
pub fn graded_monomials(nvars: usize, max_deg: u32) -> Vec<Vec<u32>> {
    (0..=max_deg)
        .flat_map(|d| monomials_of_degree(nvars, d))
        .collect()
}

pub fn variable_names(prefix: &str, nvars: usize) -> Vec<String> {
    if nvars == 1 {
        vec![prefix.to_string()]
    } else {
        (1..=nvars).map(|i| format!("{prefix}{i}")).collect()
    }
}

pub fn monomial_label(names: &[String], exps: &[u32]) -> String {
    let parts: Vec<String> = names
        .iter()
        .zip(exps)
        .filter(|(_, e)| **e > 0)
        .map(|(n, e)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
        .collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

/// `R^l_m`: formal power series in `width` variables truncated above degree `height`.
pub fn truncated_algebra(width: usize, height: usize) -> Result<AlgebraRef> {
    let height = if width == 0 { 0 } else { height };
    check_cap(binomial(width + height, width))?;
    let monos = graded_monomials(width, height as u32);
    let index: HashMap<&Vec<u32>, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let names = variable_names("xi", width);
    let labels: Vec<String> = monos.iter().map(|m| monomial_label(&names, m)).collect();
    let d = monos.len();
    let mut products = Vec::with_capacity(d * d);
    for a in &monos {
        for b in &monos {
            let s: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            products.push(match index.get(&s) {
                Some(&k) => vec![(k, Q::one())],
                None => Vec::new(),
            });
        }
    }
    let free_vars = if height == 0 { 0 } else { width };
    let gens = (0..free_vars)
        .map(|i| {
            let mut e = vec![0; width];
            e[i] = 1;
            (names[i].clone(), unit_vector(d, index[&e]))
        })
        .collect();
    WeilAlgebra::from_normalized(labels, products, gens, Origin::Truncated { width, height })
}

/// Validates a user-supplied multiplication table and normalizes its basis.
///
/// `table[i][j][k]` is the coefficient of `e_k` in `e_i·e_j`; `e_0` must be
/// the unit. Non-unit basis elements are shifted by their augmentation so that
/// they span the maximal ideal; labels are kept.
pub fn algebra_from_table(labels: Vec<String>, table: Vec<Vec<Vec<Q>>>) -> Result<AlgebraRef> {
    let d = labels.len();
    if d == 0 {
        return Err(WeilError::MalformedTable("empty basis".into()));
    }
    check_cap(d)?;
    if table.len() != d || table.iter().any(|r| r.len() != d || r.iter().any(|v| v.len() != d)) {
        return Err(WeilError::MalformedTable(format!("expected a {d}x{d}x{d} table")));
    }
    let prod = |a: &[Q], b: &[Q]| -> Vec<Q> {
        let mut out = zeros(d);
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                axpy(&mut out, &(ai * bj), &table[i][j]);
            }
        }
        out
    };
    for i in 0..d {
        for j in 0..d {
            if table[i][j] != table[j][i] {
                return Err(WeilError::NotCommutative { i, j });
            }
        }
    }
    for j in 0..d {
        if table[0][j] != unit_vector(d, j) {
            return Err(WeilError::NoUnit);
        }
    }
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let lhs = prod(&table[i][j], &unit_vector(d, k));
                let rhs = prod(&unit_vector(d, i), &table[j][k]);
                if lhs != rhs {
                    return Err(WeilError::NotAssociative { i, j, k });
                }
            }
        }
    }
    // For a local algebra with residue field Q, L_x has the single eigenvalue
    // ε(x), so ε = trace / dim. The kernel of ε must then consist of nilpotents.
    let dq = Q::from_integer((d as i64).into());
    let eps: Vec<Q> = (0..d)
        .map(|i| {
            let tr: Q = (0..d).map(|j| table[i][j][j].clone()).sum();
            tr / &dq
        })
        .collect();
    let new_basis: Vec<Vec<Q>> = (0..d)
        .map(|i| {
            let mut v = unit_vector(d, i);
            if i > 0 {
                v[0] -= &eps[i];
            }
            v
        })
        .collect();
    for (i, v) in new_basis.iter().enumerate().skip(1) {
        let mut p = v.clone();
        let mut k = 1;
        while !is_zero_vec(&p) {
            if k > d {
                return Err(WeilError::NotLocal(format!(
                    "{} - {} is not nilpotent",
                    labels[i],
                    fmt_q(&eps[i])
                )));
            }
            p = prod(&p, v);
            k += 1;
        }
    }
    let p = Matrix::from_columns(&new_basis, d);
    let p_inv = p.inverse().expect("unitriangular change of basis");
    let mut products = Vec::with_capacity(d * d);
    for a in &new_basis {
        for b in &new_basis {
            products.push(to_sparse(&p_inv.apply(&prod(a, b))));
        }
    }
    WeilAlgebra::from_normalized(labels, products, Vec::new(), Origin::Table)
}

/// `B = A/I` together with the chosen complement basis.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub algebra: AlgebraRef,
    pub projection: AlgebraMorphism,
    /// Indices of the basis elements of `A` whose classes form the basis of `B`.
    pub complement: Vec<usize>,
}

impl Quotient {
    /// The complement-basis lift `B → A` (linear, not multiplicative).
    pub fn lift(&self, b: &[Q]) -> Vec<Q> {
        let src = self.projection.source();
        let mut out = zeros(src.dim());
        for (k, &i) in self.complement.iter().enumerate() {
            out[i] = b[k].clone();
        }
        out
    }
}

/// Quotient by a proper ideal, with the complement chosen greedily in basis order.
pub fn quotient(ideal: &Ideal) -> Result<Quotient> {
    let a = ideal.algebra();
    let d = a.dim();
    if ideal.is_whole() {
        return Err(WeilError::ImproperIdeal);
    }
    let mut span = ideal.subspace().clone();
    let mut complement = Vec::new();
    for i in 0..d {
        if span.insert(&unit_vector(d, i)) {
            complement.push(i);
        }
    }
    let pivots: Vec<usize> = (0..d).filter(|i| !complement.contains(i)).collect();
    // Rows of the ideal normalized to the identity on the non-complement columns.
    let basis = ideal.subspace().basis();
    let restricted: Vec<Vec<Q>> = basis
        .iter()
        .map(|v| pivots.iter().map(|&p| v[p].clone()).collect())
        .collect();
    let r = Matrix::from_rows(restricted, pivots.len())
        .inverse()
        .expect("complement projection is invertible");
    let normalized: Vec<Vec<Q>> = (0..pivots.len())
        .map(|t| {
            let mut v = zeros(d);
            for (s, b) in basis.iter().enumerate() {
                axpy(&mut v, r.get(t, s), b);
            }
            v
        })
        .collect();
    let reduce = |v: &[Q]| -> Vec<Q> {
        let mut out = v.to_vec();
        for (t, &p) in pivots.iter().enumerate() {
            let c = out[p].clone();
            if !c.is_zero() {
                axpy(&mut out, &-c, &normalized[t]);
            }
        }
        complement.iter().map(|&i| out[i].clone()).collect()
    };
    let db = complement.len();
    let mut products = Vec::with_capacity(db * db);
    for &i in &complement {
        for &j in &complement {
            let mut e = zeros(d);
            for (k, c) in a.basis_product(i, j) {
                e[*k] = c.clone();
            }
            products.push(to_sparse(&reduce(&e)));
        }
    }
    let proj_cols: Vec<Vec<Q>> = (0..d).map(|i| reduce(&unit_vector(d, i))).collect();
    let projection_matrix = Matrix::from_columns(&proj_cols, db);
    let labels = complement.iter().map(|&i| a.labels[i].clone()).collect();
    let gens = a
        .generator_names
        .iter()
        .zip(&a.generators)
        .map(|(n, g)| (n.clone(), projection_matrix.apply(g)))
        .collect();
    let b = WeilAlgebra::from_normalized(labels, products, gens, Origin::Quotient)?;
    let projection = AlgebraMorphism::new_unchecked(a.clone(), b.clone(), projection_matrix);
    Ok(Quotient {
        algebra: b,
        projection,
        complement,
    })
}

/// `A/I` and the canonical projection.
pub fn quotient_algebra(ideal: &Ideal) -> Result<(AlgebraRef, AlgebraMorphism)> {
    let q = quotient(ideal)?;
    Ok((q.algebra, q.projection))
}

/// `R[gens] ⊆ A` with its inclusion morphism.
pub fn subalgebra_generated(
    a: &AlgebraRef,
    gens: &[AlgebraElement],
) -> Result<(AlgebraRef, AlgebraMorphism)> {
    let d = a.dim();
    for (i, g) in gens.iter().enumerate() {
        if g.algebra() != a {
            return Err(WeilError::AlgebraMismatch);
        }
        if !a.in_maximal(g.coords()) {
            return Err(WeilError::GeneratorNotNilpotent(i));
        }
    }
    let mut span = RowEchelon::new(d);
    span.insert(&a.unit());
    let mut frontier: Vec<Vec<Q>> = Vec::new();
    for g in gens {
        if span.insert(g.coords()) {
            frontier.push(g.coords().to_vec());
        }
    }
    while let Some(x) = frontier.pop() {
        for g in gens {
            let p = a.mul(&x, g.coords());
            if span.insert(&p) {
                frontier.push(p);
            }
        }
    }
    let basis = span.basis();
    let pivots = span.pivots();
    let ds = basis.len();
    let coords_of = |v: &[Q]| -> Vec<Q> { pivots.iter().map(|&p| v[p].clone()).collect() };
    let mut products = Vec::with_capacity(ds * ds);
    for x in &basis {
        for y in &basis {
            products.push(to_sparse(&coords_of(&a.mul(x, y))));
        }
    }
    let labels = basis.iter().map(|v| a.format(v)).collect::<Vec<_>>();
    let mut labels = labels;
    labels[0] = "1".into();
    let gen_candidates = gens
        .iter()
        .map(|g| (a.format(g.coords()), coords_of(g.coords())))
        .collect();
    let s = WeilAlgebra::from_normalized(labels, products, gen_candidates, Origin::Subalgebra)?;
    let inclusion = AlgebraMorphism::new_unchecked(s.clone(), a.clone(), Matrix::from_columns(&basis, d));
    Ok((s, inclusion))
}

/// `(height, width)`.
pub fn height_width(a: &WeilAlgebra) -> (usize, usize) {
    (a.height(), a.width())
}

/// Whether the classes of `elems` span `m/m²`, i.e. whether they generate `A`.
pub fn is_generating_set(a: &WeilAlgebra, elems: &[AlgebraElement]) -> Result<bool> {
    let mut span = a.maximal_power(2);
    let base = span.rank();
    for (i, e) in elems.iter().enumerate() {
        if e.coords().len() != a.dim() {
            return Err(WeilError::AlgebraMismatch);
        }
        if !a.in_maximal(e.coords()) {
            return Err(WeilError::ElementNotInMaximal(i));
        }
        span.insert(e.coords());
    }
    Ok(span.rank() - base == a.width())
}

/// Basis of `A` made of products of the distinguished generators: returns the
/// exponent vectors and the change-of-basis matrix (columns = monomial values).
pub(crate) fn generator_monomial_basis(a: &WeilAlgebra) -> (Vec<Vec<u32>>, Matrix) {
    let d = a.dim();
    let ng = a.generators.len();
    let mut span = RowEchelon::new(d);
    let mut exps = Vec::new();
    let mut values = Vec::new();
    let mut cache: HashMap<Vec<u32>, Vec<Q>> = HashMap::new();
    cache.insert(vec![0; ng], a.unit());
    'outer: for deg in 0..=a.height() as u32 {
        for e in monomials_of_degree(ng, deg) {
            let v = if deg == 0 {
                a.unit()
            } else {
                let i = e.iter().position(|x| *x > 0).unwrap();
                let mut prev = e.clone();
                prev[i] -= 1;
                let pv = cache[&prev].clone();
                a.mul(&pv, &a.generators[i])
            };
            cache.insert(e.clone(), v.clone());
            if span.insert(&v) {
                exps.push(e);
                values.push(v);
                if span.is_full() {
                    break 'outer;
                }
            }
        }
    }
    assert!(span.is_full(), "distinguished generators must generate the algebra");
    (exps, Matrix::from_columns(&values, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::q;

    fn table_from_products(d: usize, f: impl Fn(usize, usize) -> Vec<Q>) -> Vec<Vec<Vec<Q>>> {
        (0..d).map(|i| (0..d).map(|j| f(i, j)).collect()).collect()
    }

    #[test]
    fn dual_numbers() {
        let a = truncated_algebra(1, 1).unwrap();
        assert_eq!(a.dim(), 2);
        assert_eq!(a.labels(), &["1".to_string(), "xi".to_string()]);
        let xi = a.basis_element(1);
        assert!((&xi * &xi).is_zero());
        assert_eq!(height_width(&a), (1, 1));
    }

    #[test]
    fn zero_height_is_ground_field() {
        let a = truncated_algebra(3, 0).unwrap();
        assert_eq!(a.dim(), 1);
        assert!(a.maximal_power(1).is_zero());
        assert_eq!(height_width(&a), (0, 0));
    }

    #[test]
    fn graded_lex_order() {
        let a = truncated_algebra(2, 2).unwrap();
        assert_eq!(a.labels(), &["1", "xi1", "xi2", "xi1^2", "xi1*xi2", "xi2^2"]);
    }

    #[test]
    fn dimension_cap_is_enforced() {
        assert!(matches!(truncated_algebra(10, 10), Err(WeilError::DimensionCap { .. })));
    }

    #[test]
    fn table_dual_numbers_accepted() {
        let t = table_from_products(2, |i, j| match (i, j) {
            (0, k) | (k, 0) => unit_vector(2, k),
            _ => zeros(2),
        });
        let a = algebra_from_table(vec!["1".into(), "e".into()], t).unwrap();
        assert_eq!(height_width(&a), (1, 1));
    }

    #[test]
    fn table_product_of_fields_rejected() {
        // basis {1, e} with e² = e
        let t = table_from_products(2, |i, j| match (i, j) {
            (0, k) | (k, 0) => unit_vector(2, k),
            _ => unit_vector(2, 1),
        });
        let err = algebra_from_table(vec!["1".into(), "e".into()], t).unwrap_err();
        assert!(matches!(err, WeilError::NotLocal(_)));
    }

    #[test]
    fn table_square_zero_plane() {
        let t = table_from_products(3, |i, j| match (i, j) {
            (0, k) | (k, 0) => unit_vector(3, k),
            _ => zeros(3),
        });
        let a = algebra_from_table(vec!["1".into(), "x".into(), "y".into()], t).unwrap();
        assert_eq!(a.dim(), 3);
        assert_eq!(height_width(&a), (1, 2));
    }

    #[test]
    fn table_errors() {
        let mut t = table_from_products(2, |i, j| match (i, j) {
            (0, k) | (k, 0) => unit_vector(2, k),
            _ => zeros(2),
        });
        t[0][1] = zeros(2);
        let err = algebra_from_table(vec!["1".into(), "e".into()], t.clone()).unwrap_err();
        assert!(matches!(err, WeilError::NotCommutative { .. }));
        t[1][0] = zeros(2);
        let err = algebra_from_table(vec!["1".into(), "e".into()], t).unwrap_err();
        assert_eq!(err, WeilError::NoUnit);
    }

    #[test]
    fn table_with_shifted_basis_is_normalized() {
        // basis {1, u = 1 + ξ} of the dual numbers: u² = 2u - 1
        let t = table_from_products(2, |i, j| match (i, j) {
            (0, k) | (k, 0) => unit_vector(2, k),
            _ => vec![q(-1), q(2)],
        });
        let a = algebra_from_table(vec!["1".into(), "u".into()], t).unwrap();
        let u = a.basis_element(1);
        assert!((&u * &u).is_zero());
    }

    #[test]
    fn structure_constants_roundtrip_through_table() {
        let a = truncated_algebra(2, 2).unwrap();
        let b = algebra_from_table(a.labels().to_vec(), a.structure_constants()).unwrap();
        assert_eq!(*a, *b);
        assert_eq!(b.generator_names(), &["xi1", "xi2"]);
    }
}
