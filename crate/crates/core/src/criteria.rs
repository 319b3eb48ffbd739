//! Decision procedures for affine structures on Weil bundles, regular points,
//! automorphism groups and jet bundles, plus the threshold scan over truncated
//! algebras.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{truncated_algebra, AlgebraRef, Origin};
use crate::derivation::{derivation_space, induced_derivation_map, ModuleSpec};
use crate::error::{Result, WeilError};
use crate::ideal::{annihilator, invariance_witness, maximal_power, Ideal};
use crate::linalg::{is_zero_vec, Matrix, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subject {
    WeilBundle,
    RegularBundle,
    AutGroups,
    JetBundle,
}

impl Subject {
    pub fn keyword(self) -> &'static str {
        match self {
            Subject::WeilBundle => "weil",
            Subject::RegularBundle => "regular",
            Subject::AutGroups => "aut",
            Subject::JetBundle => "jet",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Subject> {
        Some(match s {
            "weil" => Subject::WeilBundle,
            "regular" => Subject::RegularBundle,
            "aut" => Subject::AutGroups,
            "jet" => Subject::JetBundle,
            _ => return None,
        })
    }
}

impl fmt::Display for Subject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Concrete evidence for a failed criterion; elements are printed in the
/// algebra's basis labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `x·y = product ≠ 0`.
    Product { x: String, y: String, product: String },
    /// An element of the ideal outside the required subspace.
    Element { element: String },
    /// A derivation, given by its values on the basis, with `value = D(element)`.
    Derivation {
        images: Vec<String>,
        element: String,
        value: String,
    },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Product { x, y, product } => write!(f, "({x}) * ({y}) = {product}"),
            Witness::Element { element } => write!(f, "{element}"),
            Witness::Derivation { images, element, value } => {
                write!(f, "D[{}]: D({element}) = {value}", images.join(", "))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Criterion {
    pub name: String,
    pub requirement: String,
    pub holds: bool,
    pub witness: Option<Witness>,
}

/// Closed-form prediction for `A = R^l_m`, `I = m^{k+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdCheck {
    pub m: usize,
    pub l: usize,
    pub k: usize,
    pub formula: String,
    pub predicted: bool,
    pub agrees: bool,
    /// Whether `Ann(I) = m^{l−k}` was confirmed by recomputation.
    pub annihilator_formula: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineReport {
    pub subject: Subject,
    pub holds: bool,
    pub criteria: Vec<Criterion>,
    /// Standing assumptions checked before the verdict.
    pub hypotheses: Vec<Criterion>,
    pub thresholds: Option<ThresholdCheck>,
    pub caveats: Vec<String>,
}

impl AffineReport {
    fn new(subject: Subject, criteria: Vec<Criterion>, hypotheses: Vec<Criterion>) -> Self {
        AffineReport {
            subject,
            holds: criteria.iter().all(|c| c.holds),
            criteria,
            hypotheses,
            thresholds: None,
            caveats: Vec::new(),
        }
    }

    /// First witness among failed criteria.
    pub fn first_witness(&self) -> Option<&Witness> {
        self.criteria.iter().filter(|c| !c.holds).find_map(|c| c.witness.as_ref())
    }
}

fn product_witness(a: &AlgebraRef, (x, y, p): (Vec<Q>, Vec<Q>, Vec<Q>)) -> Witness {
    Witness::Product {
        x: a.format(&x),
        y: a.format(&y),
        product: a.format(&p),
    }
}

fn derivation_witness(a: &AlgebraRef, map: &Matrix, element: &[Q]) -> Witness {
    Witness::Derivation {
        images: (0..a.dim())
            .map(|i| format!("{} -> {}", a.labels()[i], a.format(&map.column(i))))
            .collect(),
        element: a.format(element),
        value: a.format(&map.apply(element)),
    }
}

fn require_proper(ideal: &Ideal) -> Result<()> {
    if ideal.is_whole() {
        Err(WeilError::ImproperIdeal)
    } else {
        Ok(())
    }
}

fn null_square_criterion(ideal: &Ideal) -> Criterion {
    let w = ideal.nonzero_product_witness(ideal);
    Criterion {
        name: "null_square".into(),
        requirement: "I^2 = 0".into(),
        holds: w.is_none(),
        witness: w.map(|w| product_witness(ideal.algebra(), w)),
    }
}

fn in_m_squared_criterion(ideal: &Ideal) -> Criterion {
    let a = ideal.algebra();
    let m2 = maximal_power(a, 2);
    let w = ideal.basis().into_iter().find(|x| !m2.contains(x));
    Criterion {
        name: "in_m_squared".into(),
        requirement: "I ⊆ m^2".into(),
        holds: w.is_none(),
        witness: w.map(|x| Witness::Element { element: a.format(&x) }),
    }
}

fn self_annihilating_criterion(ideal: &Ideal) -> Criterion {
    let w = ideal.nonzero_product_witness(ideal);
    Criterion {
        name: "self_annihilating".into(),
        requirement: "I ⊆ Ann(I)".into(),
        holds: w.is_none(),
        witness: w.map(|w| product_witness(ideal.algebra(), w)),
    }
}

/// Whether every derivation `A → I` vanishes on `I`, evaluated without the
/// `I ⊆ Ann(I)` precondition.
fn left_exact_criterion(ideal: &Ideal) -> Result<Criterion> {
    let a = ideal.algebra();
    let space = derivation_space(a, &ModuleSpec::Ideal(ideal.clone()))?;
    let mut witness = None;
    'search: for m in space.maps() {
        for x in ideal.basis() {
            if !is_zero_vec(&m.apply(&x)) {
                witness = Some(derivation_witness(a, m, &x));
                break 'search;
            }
        }
    }
    Ok(Criterion {
        name: "left_exact".into(),
        requirement: "every derivation A -> I vanishes on I".into(),
        holds: witness.is_none(),
        witness,
    })
}

fn right_exact_criterion(ideal: &Ideal) -> Result<Criterion> {
    let psi = induced_derivation_map(ideal)?;
    let b = psi.quotient.algebra.clone();
    let witness = psi.cokernel_witness().map(|m| {
        let moved = (0..b.dim()).find(|&i| !is_zero_vec(&m.column(i))).unwrap_or(0);
        derivation_witness(&b, &m, &crate::linalg::unit_vector(b.dim(), moved))
    });
    Ok(Criterion {
        name: "right_exact".into(),
        requirement: "Der(A,A) -> Der(A/I,A/I) is onto".into(),
        holds: witness.is_none(),
        witness,
    })
}

fn require_invariant(ideal: &Ideal) -> Result<()> {
    if invariance_witness(ideal).is_some() {
        Err(WeilError::NotInvariant)
    } else {
        Ok(())
    }
}

const LIE_LEVEL: &str = "right exactness is certified at the Lie-algebra level only";
const TRUNCATED_SURJECTIVE: &str =
    "for truncated algebras the group map onto the quotient's automorphisms is surjective";

/// `(width, height, k)` when `A = R^l_m` and `I = m^{k+1}` with `0 ≤ k < l`.
pub fn truncated_power_parameters(ideal: &Ideal) -> Option<(usize, usize, usize)> {
    let a = ideal.algebra();
    let Origin::Truncated { width, height } = *a.origin() else {
        return None;
    };
    if width == 0 || height == 0 {
        return None;
    }
    (0..height)
        .find(|&k| &maximal_power(a, k + 1) == ideal)
        .map(|k| (width, height, k))
}

fn attach_threshold(report: &mut AffineReport, ideal: &Ideal, formula: &str, predict: fn(usize, usize) -> bool) {
    if let Some((m, l, k)) = truncated_power_parameters(ideal) {
        let predicted = predict(l, k);
        let ann = annihilator(ideal) == maximal_power(ideal.algebra(), l - k);
        report.thresholds = Some(ThresholdCheck {
            m,
            l,
            k,
            formula: formula.into(),
            predicted,
            agrees: predicted == report.holds,
            annihilator_formula: ann,
        });
    }
}

pub fn predicted_null_square(l: usize, k: usize) -> bool {
    2 * k + 1 >= l
}

pub fn predicted_regular(l: usize, k: usize) -> bool {
    k > 0 && 2 * k + 1 >= l
}

pub fn predicted_jet(l: usize, k: usize) -> bool {
    3 * k + 1 >= 2 * l
}

/// `I² = 0`.
pub fn weil_affine(ideal: &Ideal) -> Result<AffineReport> {
    require_proper(ideal)?;
    let mut r = AffineReport::new(Subject::WeilBundle, vec![null_square_criterion(ideal)], vec![]);
    attach_threshold(&mut r, ideal, "2k+1 >= l", predicted_null_square);
    Ok(r)
}

/// `I ⊆ m² ∩ Ann(I)`.
pub fn regular_affine(ideal: &Ideal) -> Result<AffineReport> {
    require_proper(ideal)?;
    let mut r = AffineReport::new(
        Subject::RegularBundle,
        vec![in_m_squared_criterion(ideal), self_annihilating_criterion(ideal)],
        vec![],
    );
    attach_threshold(&mut r, ideal, "k > 0 and 2k+1 >= l", predicted_regular);
    Ok(r)
}

/// `I ⊆ Ann(I) ∩ m²` together with left and (Lie-level) right exactness.
pub fn aut_affine(ideal: &Ideal) -> Result<AffineReport> {
    require_proper(ideal)?;
    require_invariant(ideal)?;
    let criteria = vec![
        in_m_squared_criterion(ideal),
        self_annihilating_criterion(ideal),
        left_exact_criterion(ideal)?,
        right_exact_criterion(ideal)?,
    ];
    let mut r = AffineReport::new(Subject::AutGroups, criteria, vec![]);
    r.caveats.push(LIE_LEVEL.into());
    if truncated_power_parameters(ideal).is_some() {
        r.caveats.push(TRUNCATED_SURJECTIVE.into());
    }
    attach_threshold(&mut r, ideal, "3k+1 >= 2l", predicted_jet);
    Ok(r)
}

/// Left and right exactness, under the standing assumption `I ⊆ Ann(I) ∩ m²`.
pub fn jet_affine(ideal: &Ideal) -> Result<AffineReport> {
    require_proper(ideal)?;
    require_invariant(ideal)?;
    let hypotheses = vec![in_m_squared_criterion(ideal), self_annihilating_criterion(ideal)];
    if let Some(h) = hypotheses.iter().find(|h| !h.holds) {
        let detail = h.witness.as_ref().map(|w| format!(": {w}")).unwrap_or_default();
        return Err(WeilError::HypothesisViolated(format!("{} fails{detail}", h.requirement)));
    }
    let criteria = vec![left_exact_criterion(ideal)?, right_exact_criterion(ideal)?];
    let mut r = AffineReport::new(Subject::JetBundle, criteria, hypotheses);
    r.caveats.push(LIE_LEVEL.into());
    if truncated_power_parameters(ideal).is_some() {
        r.caveats.push(TRUNCATED_SURJECTIVE.into());
    }
    attach_threshold(&mut r, ideal, "3k+1 >= 2l", predicted_jet);
    Ok(r)
}

pub fn affine_report(subject: Subject, ideal: &Ideal) -> Result<AffineReport> {
    match subject {
        Subject::WeilBundle => weil_affine(ideal),
        Subject::RegularBundle => regular_affine(ideal),
        Subject::AutGroups => aut_affine(ideal),
        Subject::JetBundle => jet_affine(ideal),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub m: usize,
    pub l: usize,
    pub k: usize,
    pub weil: bool,
    pub regular: bool,
    pub aut: bool,
    pub jet: bool,
    /// Whether the quotient map on derivations was onto.
    pub right_exact: bool,
    pub predicted_weil: bool,
    pub predicted_jet: bool,
    pub agree: bool,
}

impl ScanRow {
    pub const CSV_HEADER: [&'static str; 10] = [
        "m", "l", "k", "weil", "regular", "aut", "jet", "predicted_weil", "predicted_jet", "agree",
    ];

    pub fn csv_record(&self) -> [String; 10] {
        let b = |x: bool| x.to_string();
        [
            self.m.to_string(),
            self.l.to_string(),
            self.k.to_string(),
            b(self.weil),
            b(self.regular),
            b(self.aut),
            b(self.jet),
            b(self.predicted_weil),
            b(self.predicted_jet),
            b(self.agree),
        ]
    }
}

fn scan_cell(a: &AlgebraRef, m: usize, l: usize, k: usize) -> Result<ScanRow> {
    let ideal = maximal_power(a, k + 1);
    let weil = weil_affine(&ideal)?.holds;
    let regular = regular_affine(&ideal)?.holds;
    let aut_report = aut_affine(&ideal)?;
    let right_exact = aut_report
        .criteria
        .iter()
        .find(|c| c.name == "right_exact")
        .map(|c| c.holds)
        .unwrap_or(false);
    let jet = match jet_affine(&ideal) {
        Ok(r) => r.holds,
        Err(WeilError::HypothesisViolated(_)) => false,
        Err(e) => return Err(e),
    };
    let predicted_weil = predicted_null_square(l, k);
    let predicted_jet = predicted_jet(l, k);
    let agree = weil == predicted_weil
        && regular == predicted_regular(l, k)
        && jet == predicted_jet
        && (!predicted_jet || aut_report.holds);
    Ok(ScanRow {
        m,
        l,
        k,
        weil,
        regular,
        aut: aut_report.holds,
        jet,
        right_exact,
        predicted_weil,
        predicted_jet,
        agree,
    })
}

/// Every cell `1 ≤ m ≤ m_max`, `0 ≤ k < l ≤ l_max`, ordered by `(m, l, k)`.
pub fn scan_cells(m_max: usize, l_max: usize) -> Vec<(usize, usize, usize)> {
    let mut cells = Vec::new();
    for m in 1..=m_max {
        for l in 1..=l_max {
            for k in 0..l {
                cells.push((m, l, k));
            }
        }
    }
    cells
}

/// Evaluates all four criteria on `(R^l_m, m^{k+1})`; cells run in parallel.
pub fn scan_truncated(m_max: usize, l_max: usize) -> Result<Vec<ScanRow>> {
    let cells = scan_cells(m_max, l_max);
    let mut algebras = Vec::new();
    for m in 1..=m_max {
        for l in 1..=l_max {
            algebras.push(((m, l), truncated_algebra(m, l)?));
        }
    }
    let lookup = |m: usize, l: usize| {
        algebras
            .iter()
            .find(|((mm, ll), _)| *mm == m && *ll == l)
            .map(|(_, a)| a.clone())
            .expect("algebra built above")
    };
    cells
        .par_iter()
        .map(|&(m, l, k)| scan_cell(&lookup(m, l), m, l, k))
        .collect()
}

pub fn scan_csv(rows: &[ScanRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(ScanRow::CSV_HEADER).expect("in-memory write");
    for r in rows {
        w.write_record(r.csv_record()).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::Ideal;

    fn power(m: usize, l: usize, k: usize) -> Ideal {
        maximal_power(&truncated_algebra(m, l).unwrap(), k + 1)
    }

    #[test]
    fn weil_examples() {
        assert!(weil_affine(&power(1, 3, 1)).unwrap().holds);
        let r = weil_affine(&power(1, 4, 1)).unwrap();
        assert!(!r.holds);
        match r.first_witness().unwrap() {
            Witness::Product { product, .. } => assert_eq!(product, "xi^4"),
            w => panic!("{w:?}"),
        }
        let a = truncated_algebra(2, 2).unwrap();
        assert!(weil_affine(&Ideal::zero(&a)).unwrap().holds);
        assert_eq!(weil_affine(&Ideal::whole(&a)).unwrap_err(), WeilError::ImproperIdeal);
    }

    #[test]
    fn regular_examples() {
        assert!(regular_affine(&power(1, 3, 1)).unwrap().holds);
        let r = regular_affine(&power(1, 2, 0)).unwrap();
        assert!(!r.holds);
        assert!(!r.criteria[0].holds);
        assert!(r.criteria[0].witness.is_some());
        let a = truncated_algebra(1, 2).unwrap();
        assert!(regular_affine(&Ideal::zero(&a)).unwrap().holds);
    }

    #[test]
    fn aut_examples() {
        assert!(aut_affine(&power(1, 3, 2)).unwrap().holds);
        let r = aut_affine(&power(1, 3, 1)).unwrap();
        assert!(!r.holds);
        let left = r.criteria.iter().find(|c| c.name == "left_exact").unwrap();
        assert!(!left.holds);
        assert!(matches!(left.witness, Some(Witness::Derivation { .. })));
        let a = truncated_algebra(1, 3).unwrap();
        assert!(aut_affine(&Ideal::zero(&a)).unwrap().holds);
    }

    #[test]
    fn jet_examples() {
        let r = jet_affine(&power(1, 3, 2)).unwrap();
        assert!(r.holds);
        assert!(r.thresholds.as_ref().unwrap().agrees);
        assert!(!jet_affine(&power(1, 3, 1)).unwrap().holds);
        assert!(jet_affine(&power(1, 2, 1)).unwrap().holds);
        assert!(matches!(
            jet_affine(&power(1, 3, 0)).unwrap_err(),
            WeilError::HypothesisViolated(_)
        ));
    }

    #[test]
    fn left_exactness_follows_half_height() {
        // Computed truth on the small range: wherever the standing hypothesis
        // holds, every derivation into m^{k+1} kills m^{k+1} exactly when 2k >= l.
        for m in 1..=2 {
            for l in 2..=4 {
                for k in 1..l {
                    match jet_affine(&power(m, l, k)) {
                        Ok(r) => assert_eq!(r.holds, 2 * k >= l, "m={m} l={l} k={k}"),
                        Err(WeilError::HypothesisViolated(_)) => assert!(2 * k + 1 < l),
                        Err(e) => panic!("{e:?}"),
                    }
                }
            }
        }
    }

    #[test]
    fn scan_rows() {
        let rows = scan_truncated(1, 3).unwrap();
        assert_eq!(rows.len(), 6);
        assert!(rows.iter().all(|r| r.agree));
        let r = rows.iter().find(|r| (r.l, r.k) == (3, 1)).unwrap();
        assert!(r.weil && !r.jet);
        let rows = scan_truncated(2, 1).unwrap();
        let r = rows.iter().find(|r| (r.m, r.l, r.k) == (2, 1, 0)).unwrap();
        assert!(r.weil && !r.regular);
    }

    #[test]
    fn csv_layout() {
        let rows = scan_truncated(1, 1).unwrap();
        let text = scan_csv(&rows);
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "m,l,k,weil,regular,aut,jet,predicted_weil,predicted_jet,agree"
        );
        assert_eq!(lines.next().unwrap(), "1,1,0,true,false,false,false,true,false,true");
    }
}
