//! Finite-dimensional Z-graded supercommutative unital algebras.

use std::collections::{BTreeMap, HashSet};
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::report::ValidationReport;
use crate::scalar::{format_scalar, sign, Scalar};

/// A sparse vector in the algebra's basis. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Element {
    coeffs: BTreeMap<usize, Scalar>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn basis(i: usize) -> Self {
        Self::term(i, Scalar::one())
    }

    pub fn term(i: usize, c: Scalar) -> Self {
        let mut e = Element::zero();
        e.add_term(i, c);
        e
    }

    pub fn from_dense(v: &[Scalar]) -> Self {
        let mut e = Element::zero();
        for (i, c) in v.iter().enumerate() {
            e.add_term(i, c.clone());
        }
        e
    }

    pub fn to_dense(&self, dim: usize) -> Vector {
        let mut v = vec![Scalar::zero(); dim];
        for (&i, c) in &self.coeffs {
            v[i] = c.clone();
        }
        v
    }

    pub fn add_term(&mut self, i: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(i) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Element, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (&i, x) in &other.coeffs {
            self.add_term(i, x * c);
        }
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        if c.is_zero() {
            return Element::zero();
        }
        Element {
            coeffs: self.coeffs.iter().map(|(&i, x)| (i, x * c)).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, i: usize) -> Scalar {
        self.coeffs.get(&i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.coeffs.iter().map(|(&i, c)| (i, c))
    }

    pub fn max_index(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    /// Keeps only the components whose basis degree satisfies `keep`.
    pub fn filter_basis(&self, keep: impl Fn(usize) -> bool) -> Element {
        Element {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(&i, _)| keep(i))
                .map(|(&i, c)| (i, c.clone()))
                .collect(),
        }
    }

    /// Renders as `3/2*a - b` using the given basis names.
    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (n, (&i, c)) in self.coeffs.iter().enumerate() {
            let neg = crate::scalar::is_negative(c);
            let abs = if neg { -c.clone() } else { c.clone() };
            if n == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !abs.is_one() {
                out.push_str(&format_scalar(&abs));
                out.push('*');
            }
            out.push_str(names.get(i).map(String::as_str).unwrap_or("?"));
        }
        out
    }
}

impl Add<&Element> for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::one());
        out
    }
}

impl Sub<&Element> for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out.add_scaled(rhs, &-Scalar::one());
        out
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        self.scale(&-Scalar::one())
    }
}

/// One structure constant `e_i * e_j = c e_k + ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductTerm {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub coeff: Scalar,
}

/// Optional Hodge bidegree of a basis element: polyvector degree `p`, form degree `q`.
pub type Bidegree = (i32, i32);

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraData {
    names: Vec<String>,
    degrees: Vec<i32>,
    bidegrees: Vec<Option<Bidegree>>,
    product: Vec<ProductTerm>,
    unit: usize,
    table: Vec<Vec<Vec<(usize, Scalar)>>>,
}

impl AlgebraData {
    /// Assembles the algebra; duplicate `(i, j, k)` triples are summed. Fails
    /// only on structural problems (ranges, names). Axioms are checked by
    /// [`validate_algebra`].
    pub fn new(
        names: Vec<String>,
        degrees: Vec<i32>,
        product: Vec<ProductTerm>,
        unit: usize,
    ) -> Result<Self> {
        let dim = names.len();
        if dim == 0 {
            return Err(Error::InvalidInput("algebra must be nonzero".into()));
        }
        if degrees.len() != dim {
            return Err(Error::InvalidInput(format!(
                "{} names but {} degrees",
                dim,
                degrees.len()
            )));
        }
        let mut seen = HashSet::new();
        for n in &names {
            if !seen.insert(n) {
                return Err(Error::InvalidInput(format!("duplicate basis name {n:?}")));
            }
        }
        if unit >= dim {
            return Err(Error::InvalidInput(format!("unit index {unit} out of range")));
        }
        let mut merged: BTreeMap<(usize, usize, usize), Scalar> = BTreeMap::new();
        for t in product {
            if t.i >= dim || t.j >= dim || t.k >= dim {
                return Err(Error::InvalidInput(format!(
                    "structure constant ({}, {}, {}) out of range",
                    t.i, t.j, t.k
                )));
            }
            *merged.entry((t.i, t.j, t.k)).or_insert_with(Scalar::zero) += t.coeff;
        }
        let product: Vec<ProductTerm> = merged
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|((i, j, k), coeff)| ProductTerm { i, j, k, coeff })
            .collect();
        let mut table = vec![vec![Vec::new(); dim]; dim];
        for t in &product {
            table[t.i][t.j].push((t.k, t.coeff.clone()));
        }
        Ok(AlgebraData {
            names,
            degrees,
            bidegrees: vec![None; dim],
            product,
            unit,
            table,
        })
    }

    pub fn with_bidegrees(mut self, bidegrees: Vec<Option<Bidegree>>) -> Result<Self> {
        if bidegrees.len() != self.dim() {
            return Err(Error::InvalidInput("bidegree list length mismatch".into()));
        }
        self.bidegrees = bidegrees;
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn degree(&self, i: usize) -> i32 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn bidegree(&self, i: usize) -> Option<Bidegree> {
        self.bidegrees[i]
    }

    pub fn bidegrees(&self) -> &[Option<Bidegree>] {
        &self.bidegrees
    }

    pub fn product_terms(&self) -> &[ProductTerm] {
        &self.product
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn unit_element(&self) -> Element {
        Element::basis(self.unit)
    }

    /// `e_i * e_j` from the structure-constant table.
    pub fn basis_product(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.table[i][j]
    }

    pub fn check_element(&self, x: &Element) -> Result<()> {
        match x.max_index() {
            Some(i) if i >= self.dim() => Err(Error::InvalidInput(format!(
                "basis index {i} out of range for dimension {}",
                self.dim()
            ))),
            _ => Ok(()),
        }
    }

    /// Bilinear product; rejects coefficients indexed outside the basis.
    pub fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        self.check_element(a)?;
        self.check_element(b)?;
        Ok(self.mul(a, b))
    }

    /// Unchecked product. Panics on out-of-range indices.
    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        let mut out = Element::zero();
        for (i, x) in a.iter() {
            for (j, y) in b.iter() {
                let xy = x * y;
                for (k, c) in &self.table[i][j] {
                    out.add_term(*k, &xy * c);
                }
            }
        }
        out
    }

    /// Degree of a homogeneous element; `None` for zero or mixed elements.
    pub fn homogeneous_degree(&self, x: &Element) -> Option<i32> {
        let mut degs = x.iter().map(|(i, _)| self.degrees[i]);
        let d = degs.next()?;
        degs.all(|e| e == d).then_some(d)
    }

    /// Splits an element into homogeneous components, keyed by degree.
    pub fn homogeneous_parts(&self, x: &Element) -> BTreeMap<i32, Element> {
        let mut parts: BTreeMap<i32, Element> = BTreeMap::new();
        for (i, c) in x.iter() {
            parts
                .entry(self.degrees[i])
                .or_default()
                .add_term(i, c.clone());
        }
        parts
    }

    /// Basis indices of a given degree, in basis order.
    pub fn indices_of_degree(&self, d: i32) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.degrees[i] == d).collect()
    }

    pub fn render(&self, x: &Element) -> String {
        x.render(&self.names)
    }
}

/// Brute-force check of every algebra axiom over all basis pairs and triples.
pub fn validate_algebra(alg: &AlgebraData) -> ValidationReport {
    let mut report = ValidationReport::new("algebra");
    let n = alg.dim();
    let name = |i: usize| alg.name(i).to_string();
    let unit = alg.unit();
    if alg.degree(unit) != 0 {
        report.violation(
            "unit-degree",
            vec![name(unit)],
            None,
            alg.degree(unit).to_string(),
            "0",
        );
    }
    for t in alg.product_terms() {
        if alg.degree(t.k) != alg.degree(t.i) + alg.degree(t.j) {
            report.violation(
                "grading",
                vec![name(t.i), name(t.j), name(t.k)],
                None,
                format!("deg {}", alg.degree(t.k)),
                format!("deg {}", alg.degree(t.i) + alg.degree(t.j)),
            );
        }
    }
    let one = alg.unit_element();
    for i in 0..n {
        let e = Element::basis(i);
        let left = alg.mul(&one, &e);
        if left != e {
            report.violation("unit-left", vec![name(i)], None, alg.render(&left), alg.render(&e));
        }
        let right = alg.mul(&e, &one);
        if right != e {
            report.violation("unit-right", vec![name(i)], None, alg.render(&right), alg.render(&e));
        }
    }
    for i in 0..n {
        for j in i..n {
            let (ei, ej) = (Element::basis(i), Element::basis(j));
            let lhs = alg.mul(&ei, &ej);
            let s = sign(alg.degree(i) as i64 * alg.degree(j) as i64);
            let rhs = alg.mul(&ej, &ei).scale(&s);
            if lhs != rhs {
                report.violation(
                    "supercommutativity",
                    vec![name(i), name(j)],
                    None,
                    alg.render(&lhs),
                    alg.render(&rhs),
                );
            }
        }
    }
    let prod: Vec<Vec<Element>> = (0..n)
        .map(|i| (0..n).map(|j| alg.mul(&Element::basis(i), &Element::basis(j))).collect())
        .collect();
    let times = |x: &Element, k: usize, left: bool| {
        let mut out = Element::zero();
        for (m, c) in x.iter() {
            out.add_scaled(if left { &prod[k][m] } else { &prod[m][k] }, c);
        }
        out
    };
    for i in 0..n {
        for j in 0..n {
            let ij = &prod[i][j];
            for k in 0..n {
                let jk = &prod[j][k];
                if ij.is_zero() && jk.is_zero() {
                    continue;
                }
                let lhs = times(ij, k, false);
                let rhs = times(jk, i, true);
                if lhs != rhs {
                    report.violation(
                        "associativity",
                        vec![name(i), name(j), name(k)],
                        None,
                        alg.render(&lhs),
                        alg.render(&rhs),
                    );
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    /// Exterior algebra on two odd generators x, y: basis 1, x, y, xy.
    pub(crate) fn exterior2() -> AlgebraData {
        let t = |i, j, k, c| ProductTerm { i, j, k, coeff: int(c) };
        AlgebraData::new(
            vec!["1".into(), "x".into(), "y".into(), "xy".into()],
            vec![0, 1, 1, 2],
            vec![
                t(0, 0, 0, 1),
                t(0, 1, 1, 1),
                t(1, 0, 1, 1),
                t(0, 2, 2, 1),
                t(2, 0, 2, 1),
                t(0, 3, 3, 1),
                t(3, 0, 3, 1),
                t(1, 2, 3, 1),
                t(2, 1, 3, -1),
            ],
            0,
        )
        .unwrap()
    }

    #[test]
    fn unit_and_odd_squares() {
        let alg = exterior2();
        let x = Element::basis(1);
        assert_eq!(alg.mul(&alg.unit_element(), &x), x);
        assert!(alg.mul(&x, &x).is_zero());
        let p = alg
            .multiply(&Element::basis(2), &Element::basis(1))
            .unwrap();
        assert_eq!(p, Element::term(3, int(-1)));
    }

    #[test]
    fn out_of_range_is_rejected() {
        let alg = exterior2();
        assert!(alg.multiply(&Element::basis(4), &Element::basis(0)).is_err());
    }

    #[test]
    fn exterior_algebra_is_valid() {
        assert!(validate_algebra(&exterior2()).passed());
    }

    #[test]
    fn flipped_sign_is_located() {
        // Exterior algebra on three odd generators with e1 * e23 negated.
        let gens = ["a", "b", "c"];
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        for mask in 0u32..8 {
            let n: String = (0..3).filter(|k| mask & (1 << k) != 0).map(|k| gens[k]).collect();
            names.push(if n.is_empty() { "1".into() } else { n });
            degrees.push(mask.count_ones() as i32);
        }
        let mut product = Vec::new();
        for p in 0u32..8 {
            for q in 0u32..8 {
                if p & q != 0 {
                    continue;
                }
                // sign of moving q's generators past p's
                let mut s = 0;
                for k in 0..3 {
                    if q & (1 << k) != 0 {
                        s += (p >> (k + 1)).count_ones();
                    }
                }
                let mut c = if s % 2 == 0 { 1 } else { -1 };
                if p == 0b001 && q == 0b110 {
                    c = -c;
                }
                product.push(ProductTerm {
                    i: p as usize,
                    j: q as usize,
                    k: (p | q) as usize,
                    coeff: int(c),
                });
            }
        }
        let alg = AlgebraData::new(names, degrees, product, 0).unwrap();
        let report = validate_algebra(&alg);
        assert!(report
            .violations()
            .iter()
            .any(|v| v.check == "associativity" && v.indices == ["a", "b", "c"]));
    }

    #[test]
    fn unit_degree_violation() {
        let alg = AlgebraData::new(
            vec!["u".into()],
            vec![1],
            vec![ProductTerm { i: 0, j: 0, k: 0, coeff: int(1) }],
            0,
        )
        .unwrap();
        assert!(validate_algebra(&alg).has_check("unit-degree"));
    }
}
