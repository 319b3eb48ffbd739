//! Sparse multivariate polynomials over Q, used as the function algebra of `Rⁿ`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;

use crate::algebra::{graded_monomials, monomial_label, variable_names, WeilAlgebra};
use crate::linalg::{fmt_q, scale_vec, Q};

/// Exponent vector.
pub type Monomial = Vec<u32>;

#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Q) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Q::one())
    }

    /// The coordinate function `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Poly::monomial(e, Q::one())
    }

    pub fn monomial(exps: Monomial, c: Q) -> Self {
        let mut p = Poly::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Q)>) -> Self {
        let mut p = Poly::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn coefficient(&self, e: &[u32]) -> Q {
        self.terms.get(e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.nvars, other.nvars);
        let mut p = Poly::zero(self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                let e = a.iter().zip(b).map(|(i, j)| i + j).collect();
                p.add_term(e, x * y);
            }
        }
        p
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `∂/∂x_i`
    pub fn partial(&self, i: usize) -> Poly {
        let mut p = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                p.add_term(f, c * Q::from_integer(e[i].into()));
            }
        }
        p
    }

    /// Drops terms of total degree above `deg`.
    pub fn truncate(&self, deg: u32) -> Poly {
        Poly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() <= deg)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Substitutes `subs[i]` for `x_i`.
    pub fn compose(&self, subs: &[Poly]) -> Poly {
        assert_eq!(subs.len(), self.nvars);
        let m = subs.first().map(|s| s.nvars).unwrap_or(0);
        let mut p = Poly::zero(m);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(m, c.clone());
            for (s, &k) in subs.iter().zip(e) {
                if k > 0 {
                    t = t.mul(&s.pow(k));
                }
            }
            p = p.add(&t);
        }
        p
    }

    /// Value at a rational point.
    pub fn eval_point(&self, x: &[Q]) -> Q {
        let mut s = Q::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    t *= xi;
                }
            }
            s += t;
        }
        s
    }

    /// Substitutes algebra elements for the variables.
    pub fn eval_in(&self, a: &WeilAlgebra, images: &[Vec<Q>]) -> Vec<Q> {
        assert_eq!(images.len(), self.nvars);
        let mut powers: Vec<Vec<Vec<Q>>> = images.iter().map(|x| vec![a.unit(), x.clone()]).collect();
        let mut acc = vec![Q::zero(); a.dim()];
        for (e, c) in &self.terms {
            let mut t = scale_vec(c, &a.unit());
            for (i, &k) in e.iter().enumerate() {
                while powers[i].len() <= k as usize {
                    let next = a.mul(powers[i].last().unwrap(), &images[i]);
                    powers[i].push(next);
                }
                if k > 0 {
                    t = a.mul(&t, &powers[i][k as usize]);
                }
            }
            crate::linalg::axpy(&mut acc, &Q::one(), &t);
        }
        acc
    }

    pub fn format_with(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut keys: Vec<&Monomial> = self.terms.keys().collect();
        keys.sort_by(|a, b| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            da.cmp(&db).then_with(|| b.cmp(a))
        });
        let mut out = String::new();
        for (n, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let neg = c < &Q::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if n == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let is_const = e.iter().all(|&k| k == 0);
            if is_const {
                out.push_str(&fmt_q(&abs));
            } else {
                if !abs.is_one() {
                    out.push_str(&fmt_q(&abs));
                    out.push('*');
                }
                out.push_str(&monomial_label(names, e));
            }
        }
        out
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.format_with(&variable_names("x", self.nvars)))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

/// A polynomial map `Rⁿ → Rᵏ`, one component per target coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMap {
    source_dim: usize,
    components: Vec<Poly>,
}

impl PolyMap {
    pub fn new(source_dim: usize, components: Vec<Poly>) -> Self {
        assert!(components.iter().all(|p| p.nvars() == source_dim));
        PolyMap {
            source_dim,
            components,
        }
    }

    pub fn identity(n: usize) -> Self {
        PolyMap::new(n, (0..n).map(|i| Poly::var(n, i)).collect())
    }

    pub fn source_dim(&self) -> usize {
        self.source_dim
    }

    pub fn target_dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[Poly] {
        &self.components
    }

    /// `f*g = g∘f` for a function `g` on the target.
    pub fn pullback(&self, g: &Poly) -> Poly {
        if self.components.is_empty() {
            return Poly::constant(self.source_dim, g.coefficient(&[]));
        }
        g.compose(&self.components)
    }

    /// `other ∘ self`
    pub fn then(&self, other: &PolyMap) -> PolyMap {
        assert_eq!(self.target_dim(), other.source_dim());
        PolyMap::new(
            self.source_dim,
            other.components.iter().map(|g| self.pullback(g)).collect(),
        )
    }
}

/// Monomials of degree at most `deg` in graded order.
pub fn monomial_basis(nvars: usize, deg: u32) -> Vec<Monomial> {
    graded_monomials(nvars, deg)
}

/// Random polynomial with small integer coefficients and the given degree bound.
pub fn random_poly<R: Rng>(rng: &mut R, nvars: usize, deg: u32, density: f64) -> Poly {
    let mut p = Poly::zero(nvars);
    for e in graded_monomials(nvars, deg) {
        if rng.gen_bool(density) {
            p.add_term(e, Q::from_integer(rng.gen_range(-3i64..=3).into()));
        }
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::truncated_algebra;
    use crate::linalg::{q, unit_vector};

    #[test]
    fn arithmetic_and_display() {
        let x = Poly::var(2, 0);
        let y = Poly::var(2, 1);
        let p = x.add(&y).pow(2);
        assert_eq!(p.to_string(), "x1^2 + 2*x1*x2 + x2^2");
        assert_eq!(p.partial(0).to_string(), "2*x1 + 2*x2");
        assert_eq!(x.sub(&x), Poly::zero(2));
        assert_eq!(Poly::constant(1, q(-3)).to_string(), "-3");
        assert_eq!(p.truncate(1), Poly::zero(2));
    }

    #[test]
    fn composition() {
        let x = Poly::var(1, 0);
        let f = x.pow(2).add(&Poly::one(1));
        let g = f.compose(&[x.add(&Poly::one(1))]);
        assert_eq!(g.to_string(), "2 + 2*x + x^2");
        assert_eq!(g.eval_point(&[q(1)]), q(5));
    }

    #[test]
    fn evaluation_in_algebra() {
        let a = truncated_algebra(1, 1).unwrap();
        let x = Poly::var(1, 0);
        let img = vec![q(2), q(3)];
        assert_eq!(x.pow(2).eval_in(&a, &[img]), vec![q(4), q(12)]);
        let b = truncated_algebra(1, 2).unwrap();
        assert_eq!(x.pow(3).eval_in(&b, &[unit_vector(3, 1)]), vec![q(0); 3]);
    }

    #[test]
    fn map_composition() {
        let x = Poly::var(1, 0);
        let f = PolyMap::new(1, vec![x.clone(), x.pow(2)]);
        let u = Poly::var(2, 0);
        let v = Poly::var(2, 1);
        let g = PolyMap::new(2, vec![u.mul(&v)]);
        assert_eq!(f.then(&g).components()[0], x.pow(3));
    }
}
