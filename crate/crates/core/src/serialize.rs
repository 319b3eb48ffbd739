//! JSON documents for algebras, ideals, maps, near-points and jets.
//!
//! Rationals are written as `"p/q"` (or `"p"`); objects other than algebras
//! refer to their algebra by the SHA-256 of its canonical JSON.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebra::{algebra_from_table, AlgebraRef, WeilAlgebra};
use crate::derivation::{Automorphism, DerivationSpace};
use crate::error::{Result, WeilError};
use crate::ideal::Ideal;
use crate::linalg::{fmt_q, parse_q, Matrix, Q};
use crate::points::{Jet, NearPoint};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraDoc {
    pub labels: Vec<String>,
    pub dim: usize,
    /// `structure_constants[i][j][k]`: coefficient of `e_k` in `e_i·e_j`.
    pub structure_constants: Vec<Vec<Vec<String>>>,
    /// Indices of the basis elements spanning the maximal ideal.
    pub maximal_basis: Vec<usize>,
}

fn strings(v: &[Q]) -> Vec<String> {
    v.iter().map(fmt_q).collect()
}

fn parse_vec(v: &[String]) -> Result<Vec<Q>> {
    v.iter().map(|s| parse_q(s)).collect()
}

fn matrix_strings(m: &Matrix) -> Vec<Vec<String>> {
    m.row_vectors().iter().map(|r| strings(r)).collect()
}

pub fn algebra_doc(a: &WeilAlgebra) -> AlgebraDoc {
    AlgebraDoc {
        labels: a.labels().to_vec(),
        dim: a.dim(),
        structure_constants: a
            .structure_constants()
            .iter()
            .map(|row| row.iter().map(|v| strings(v)).collect())
            .collect(),
        maximal_basis: a.maximal_basis(),
    }
}

pub fn algebra_to_json(a: &WeilAlgebra) -> String {
    serde_json::to_string(&algebra_doc(a)).expect("algebra documents serialize")
}

/// Validates and normalizes an algebra document.
pub fn algebra_from_doc(doc: &AlgebraDoc) -> Result<AlgebraRef> {
    if doc.labels.len() != doc.dim {
        return Err(WeilError::MalformedTable(format!(
            "{} labels for dimension {}",
            doc.labels.len(),
            doc.dim
        )));
    }
    let table = doc
        .structure_constants
        .iter()
        .map(|row| row.iter().map(|v| parse_vec(v)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    algebra_from_table(doc.labels.clone(), table)
}

pub fn algebra_from_json(text: &str) -> Result<AlgebraRef> {
    let doc: AlgebraDoc =
        serde_json::from_str(text).map_err(|e| WeilError::Serialization(e.to_string()))?;
    algebra_from_doc(&doc)
}

/// SHA-256 hex digest of the canonical algebra JSON.
pub fn content_hash(a: &WeilAlgebra) -> String {
    hex::encode(Sha256::digest(algebra_to_json(a).as_bytes()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealDoc {
    pub algebra: String,
    pub basis: Vec<Vec<String>>,
}

pub fn ideal_doc(i: &Ideal) -> IdealDoc {
    IdealDoc {
        algebra: content_hash(i.algebra()),
        basis: i.basis().iter().map(|v| strings(v)).collect(),
    }
}

/// Rebuilds an ideal from its document, checking the algebra hash.
pub fn ideal_from_doc(a: &AlgebraRef, doc: &IdealDoc) -> Result<Ideal> {
    if doc.algebra != content_hash(a) {
        return Err(WeilError::AlgebraMismatch);
    }
    let gens = doc.basis.iter().map(|v| parse_vec(v)).collect::<Result<Vec<_>>>()?;
    crate::ideal::ideal_span(a, &gens)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomorphismDoc {
    pub algebra: String,
    pub matrix: Vec<Vec<String>>,
}

pub fn automorphism_doc(s: &Automorphism) -> AutomorphismDoc {
    AutomorphismDoc {
        algebra: content_hash(s.algebra()),
        matrix: matrix_strings(s.matrix()),
    }
}

pub fn automorphism_from_doc(a: &AlgebraRef, doc: &AutomorphismDoc) -> Result<Automorphism> {
    if doc.algebra != content_hash(a) {
        return Err(WeilError::AlgebraMismatch);
    }
    let rows = doc.matrix.iter().map(|r| parse_vec(r)).collect::<Result<Vec<_>>>()?;
    Automorphism::new(a.clone(), Matrix::from_rows(rows, a.dim()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationSpaceDoc {
    pub source: String,
    pub ambient_dim: usize,
    pub basis: Vec<Vec<Vec<String>>>,
}

pub fn derivation_space_doc(d: &DerivationSpace) -> DerivationSpaceDoc {
    DerivationSpaceDoc {
        source: content_hash(d.source()),
        ambient_dim: d.ambient_dim(),
        basis: d.maps().iter().map(matrix_strings).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NearPointDoc {
    pub algebra: String,
    pub base: Vec<String>,
    pub images: Vec<Vec<String>>,
}

pub fn near_point_doc(p: &NearPoint) -> NearPointDoc {
    NearPointDoc {
        algebra: content_hash(p.algebra()),
        base: strings(p.base()),
        images: p.images().iter().map(|v| strings(v)).collect(),
    }
}

pub fn near_point_from_doc(a: &AlgebraRef, doc: &NearPointDoc) -> Result<NearPoint> {
    if doc.algebra != content_hash(a) {
        return Err(WeilError::AlgebraMismatch);
    }
    let images = doc.images.iter().map(|v| parse_vec(v)).collect::<Result<Vec<_>>>()?;
    let p = crate::points::make_near_point(a, images)?;
    if strings(p.base()) != doc.base {
        return Err(WeilError::BaseMismatch);
    }
    Ok(p)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JetDoc {
    pub algebra: String,
    pub base: Vec<String>,
    pub order: u32,
    /// Kernel basis in centred monomial coordinates, graded order.
    pub kernel_basis: Vec<Vec<String>>,
    pub representative: NearPointDoc,
}

pub fn jet_doc(j: &Jet) -> JetDoc {
    JetDoc {
        algebra: content_hash(j.algebra()),
        base: strings(j.base()),
        order: j.order(),
        kernel_basis: j.kernel().basis().iter().map(|v| strings(v)).collect(),
        representative: near_point_doc(j.representative()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::truncated_algebra;
    use crate::ideal::maximal_power;

    #[test]
    fn algebra_round_trip() {
        let a = truncated_algebra(2, 2).unwrap();
        let json = algebra_to_json(&a);
        let b = algebra_from_json(&json).unwrap();
        assert_eq!(b.structure_constants(), a.structure_constants());
        assert_eq!(content_hash(&b), content_hash(&a));
        assert_eq!(content_hash(&a).len(), 64);
    }

    #[test]
    fn ideal_round_trip_checks_hash() {
        let a = truncated_algebra(1, 3).unwrap();
        let i = maximal_power(&a, 2);
        let doc = ideal_doc(&i);
        assert_eq!(ideal_from_doc(&a, &doc).unwrap(), i);
        let other = truncated_algebra(1, 4).unwrap();
        assert_eq!(ideal_from_doc(&other, &doc).unwrap_err(), WeilError::AlgebraMismatch);
    }

    #[test]
    fn bad_rational_is_reported() {
        let a = truncated_algebra(1, 1).unwrap();
        let mut doc = algebra_doc(&a);
        doc.structure_constants[1][0][1] = "1/0".into();
        let json = serde_json::to_string(&doc).unwrap();
        assert!(matches!(algebra_from_json(&json).unwrap_err(), WeilError::BadRational(_)));
    }
}
