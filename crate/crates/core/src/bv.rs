//! Differential BV data: the differential, the BV operator, the derived
//! bracket, the trace functional, and their validation.
//!
//! Sign conventions (normative; the whole crate follows them):
//!
//! | rule | sign |
//! |------|------|
//! | swap `x y -> y x` | `(-1)^{|x||y|}` |
//! | odd operator `d` past `x` (`d(xy) = d(x)y + (-1)^{|x|} x d(y)`) | `(-1)^{|x|}` |
//! | bracket `[x,y] = (-1)^{|x|}(Δ(xy) - Δ(x)y - (-1)^{|x|} xΔ(y))` | shifted degree `|x|-1` |
//! | Leibniz `[x,yz] = [x,y]z + (-1)^{(|x|+1)|y|} y[x,z]` | |
//! | skew `[x,y] = -(-1)^{(|x|+1)(|y|+1)} [y,x]` | |
//! | Jacobi `[x,[y,z]] = [[x,y],z] + (-1)^{(|x|+1)(|y|+1)} [y,[x,z]]` | |
//!
//! `|x|` is always the algebra degree.

use num_traits::Zero;

use crate::algebra::{AlgebraData, Element, ProductTerm};
use crate::error::{Error, Result};
use crate::linalg::{independent_subset, intersection, Matrix, Rref, Vector};
use crate::pivot::LowestIndexFirst;
use crate::report::ValidationReport;
use crate::scalar::{format_scalar, sign, Scalar};

/// Matrix entry of a linear operator: `op(e_from) += coeff * e_to`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorEntry {
    pub from: usize,
    pub to: usize,
    pub coeff: Scalar,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DgbvData {
    alg: AlgebraData,
    dbar: Vec<Element>,
    delta: Vec<Element>,
    integral: Vec<Scalar>,
    top_degree: i32,
}

fn operator_images(dim: usize, entries: &[OperatorEntry], what: &str) -> Result<Vec<Element>> {
    let mut images = vec![Element::zero(); dim];
    for e in entries {
        if e.from >= dim || e.to >= dim {
            return Err(Error::InvalidInput(format!(
                "{what} entry ({}, {}) out of range",
                e.from, e.to
            )));
        }
        images[e.from].add_term(e.to, e.coeff.clone());
    }
    Ok(images)
}

impl DgbvData {
    pub fn new(
        alg: AlgebraData,
        dbar: &[OperatorEntry],
        delta: &[OperatorEntry],
        integral: &[(usize, Scalar)],
        top_degree: i32,
    ) -> Result<Self> {
        let dim = alg.dim();
        let dbar = operator_images(dim, dbar, "dbar")?;
        let delta = operator_images(dim, delta, "delta")?;
        let mut int = vec![Scalar::zero(); dim];
        for (i, c) in integral {
            if *i >= dim {
                return Err(Error::InvalidInput(format!("integral index {i} out of range")));
            }
            int[*i] += c;
        }
        Ok(DgbvData {
            alg,
            dbar,
            delta,
            integral: int,
            top_degree,
        })
    }

    pub fn alg(&self) -> &AlgebraData {
        &self.alg
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn top_degree(&self) -> i32 {
        self.top_degree
    }

    /// Half the top degree: the complex dimension in the geometric model.
    pub fn n(&self) -> i32 {
        self.top_degree / 2
    }

    pub fn integral_vector(&self) -> &[Scalar] {
        &self.integral
    }

    pub fn dbar_image(&self, i: usize) -> &Element {
        &self.dbar[i]
    }

    pub fn delta_image(&self, i: usize) -> &Element {
        &self.delta[i]
    }

    pub fn dbar_entries(&self) -> Vec<OperatorEntry> {
        entries_of(&self.dbar)
    }

    pub fn delta_entries(&self) -> Vec<OperatorEntry> {
        entries_of(&self.delta)
    }

    pub fn dbar(&self, x: &Element) -> Element {
        apply(&self.dbar, x)
    }

    pub fn delta(&self, x: &Element) -> Element {
        apply(&self.delta, x)
    }

    pub fn integrate(&self, x: &Element) -> Scalar {
        x.iter()
            .filter(|(i, _)| !self.integral[*i].is_zero())
            .fold(Scalar::zero(), |acc, (i, c)| acc + c * &self.integral[i])
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Element {
        self.alg.mul(a, b)
    }

    pub fn dbar_matrix(&self) -> Matrix {
        operator_matrix(self.dim(), &self.dbar)
    }

    pub fn delta_matrix(&self) -> Matrix {
        operator_matrix(self.dim(), &self.delta)
    }

    /// Derived bracket. Inhomogeneous `x` is split into homogeneous parts.
    pub fn bracket(&self, x: &Element, y: &Element) -> Result<Element> {
        self.alg.check_element(x)?;
        self.alg.check_element(y)?;
        Ok(self.br(x, y))
    }

    /// Unchecked bracket.
    pub fn br(&self, x: &Element, y: &Element) -> Element {
        let mut out = Element::zero();
        let dy = self.delta(y);
        for (d, part) in self.alg.homogeneous_parts(x) {
            let s = sign(d as i64);
            let mut inner = self.delta(&self.mul(&part, y));
            inner.add_scaled(&self.mul(&self.delta(&part), y), &-crate::scalar::one());
            inner.add_scaled(&self.mul(&part, &dy), &-s.clone());
            out.add_scaled(&inner, &s);
        }
        out
    }

    /// Same data with the trace functional multiplied by `c` (the effect of
    /// rescaling the volume form by `λ` with `c = λ²`).
    pub fn scale_integral(&self, c: &Scalar) -> Result<DgbvData> {
        if c.is_zero() {
            return Err(Error::InvalidInput(
                "integral scale must be nonzero (zero pairing is degenerate)".into(),
            ));
        }
        let mut out = self.clone();
        for v in out.integral.iter_mut() {
            *v *= c;
        }
        Ok(out)
    }
}

fn entries_of(images: &[Element]) -> Vec<OperatorEntry> {
    images
        .iter()
        .enumerate()
        .flat_map(|(from, img)| {
            img.iter().map(move |(to, c)| OperatorEntry {
                from,
                to,
                coeff: c.clone(),
            })
        })
        .collect()
}

fn apply(images: &[Element], x: &Element) -> Element {
    let mut out = Element::zero();
    for (i, c) in x.iter() {
        out.add_scaled(&images[i], c);
    }
    out
}

fn operator_matrix(dim: usize, images: &[Element]) -> Matrix {
    let cols: Vec<Vector> = images.iter().map(|e| e.to_dense(dim)).collect();
    Matrix::from_columns(dim, &cols)
}

/// Checks the differential, the BV operator and the derived bracket.
pub fn validate_dgbv(d: &DgbvData) -> ValidationReport {
    let mut report = ValidationReport::new("dgbv");
    let alg = d.alg();
    let n = d.dim();
    let name = |i: usize| alg.name(i).to_string();
    let r = |x: &Element| alg.render(x);
    if d.top_degree() % 2 != 0 {
        report.violation("top-degree-even", vec![], None, d.top_degree().to_string(), "even");
    }
    for i in 0..n {
        let e = Element::basis(i);
        let (de, be) = (d.dbar(&e), d.delta(&e));
        for (label, img, shift) in [("dbar-degree", &de, 1), ("delta-degree", &be, -1)] {
            for (k, _) in img.iter() {
                if alg.degree(k) != alg.degree(i) + shift {
                    report.violation(
                        label,
                        vec![name(i), name(k)],
                        None,
                        format!("deg {}", alg.degree(k)),
                        format!("deg {}", alg.degree(i) + shift),
                    );
                }
            }
        }
        let dd = d.dbar(&de);
        if !dd.is_zero() {
            report.violation("dbar-squared", vec![name(i)], None, r(&dd), "0");
        }
        let bb = d.delta(&be);
        if !bb.is_zero() {
            report.violation("delta-squared", vec![name(i)], None, r(&bb), "0");
        }
        let anti = &d.dbar(&be) + &d.delta(&de);
        if !anti.is_zero() {
            report.violation("anticommutation", vec![name(i)], None, r(&anti), "0");
        }
    }
    let one = alg.unit_element();
    if !d.dbar(&one).is_zero() {
        report.violation("dbar-unit", vec![name(alg.unit())], None, r(&d.dbar(&one)), "0");
    }
    if !d.delta(&one).is_zero() {
        report.violation("delta-unit", vec![name(alg.unit())], None, r(&d.delta(&one)), "0");
    }
    let basis: Vec<Element> = (0..n).map(Element::basis).collect();
    let deg = |i: usize| alg.degree(i) as i64;
    for i in 0..n {
        for j in 0..n {
            let lhs = d.dbar(&d.mul(&basis[i], &basis[j]));
            let mut rhs = d.mul(&d.dbar(&basis[i]), &basis[j]);
            rhs.add_scaled(&d.mul(&basis[i], &d.dbar(&basis[j])), &sign(deg(i)));
            if lhs != rhs {
                report.violation("dbar-derivation", vec![name(i), name(j)], None, r(&lhs), r(&rhs));
            }
        }
    }
    let brackets: Vec<Vec<Element>> = (0..n)
        .map(|i| (0..n).map(|j| d.br(&basis[i], &basis[j])).collect())
        .collect();
    for i in 0..n {
        for j in 0..n {
            let rhs = brackets[j][i].scale(&-sign((deg(i) + 1) * (deg(j) + 1)));
            if brackets[i][j] != rhs {
                report.violation(
                    "bracket-skew",
                    vec![name(i), name(j)],
                    None,
                    r(&brackets[i][j]),
                    r(&rhs),
                );
            }
        }
    }
    // bilinear extension of the basis bracket table
    let br = |x: &Element, y: &Element| {
        let mut out = Element::zero();
        for (a, p) in x.iter() {
            for (b, q) in y.iter() {
                out.add_scaled(&brackets[a][b], &(p * q));
            }
        }
        out
    };
    let prod: Vec<Vec<Element>> = (0..n)
        .map(|i| (0..n).map(|j| d.mul(&basis[i], &basis[j])).collect())
        .collect();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (bij, bik, bjk) = (&brackets[i][j], &brackets[i][k], &brackets[j][k]);
                if bij.is_zero() && bik.is_zero() && bjk.is_zero() && prod[j][k].is_zero() {
                    continue;
                }
                let lhs = br(&basis[i], &prod[j][k]);
                let mut rhs = d.mul(&brackets[i][j], &basis[k]);
                rhs.add_scaled(
                    &d.mul(&basis[j], &brackets[i][k]),
                    &sign((deg(i) + 1) * deg(j)),
                );
                if lhs != rhs {
                    report.violation(
                        "bracket-leibniz",
                        vec![name(i), name(j), name(k)],
                        None,
                        r(&lhs),
                        r(&rhs),
                    );
                }
                let lhs = br(&basis[i], &brackets[j][k]);
                let mut rhs = br(&brackets[i][j], &basis[k]);
                rhs.add_scaled(
                    &br(&basis[j], &brackets[i][k]),
                    &sign((deg(i) + 1) * (deg(j) + 1)),
                );
                if lhs != rhs {
                    report.violation(
                        "bracket-jacobi",
                        vec![name(i), name(j), name(k)],
                        None,
                        r(&lhs),
                        r(&rhs),
                    );
                }
            }
        }
    }
    report
}

/// Checks the integration-by-parts identities, the support of the trace, and
/// nondegeneracy of the pairing on harmonic representatives.
pub fn validate_integral(d: &DgbvData) -> ValidationReport {
    let mut report = ValidationReport::new("integral");
    let alg = d.alg();
    let n = d.dim();
    let name = |i: usize| alg.name(i).to_string();
    for i in 0..n {
        if !d.integral_vector()[i].is_zero() && alg.degree(i) != d.top_degree() {
            report.violation(
                "integral-support",
                vec![name(i)],
                None,
                format!("deg {}", alg.degree(i)),
                format!("deg {}", d.top_degree()),
            );
        }
    }
    let basis: Vec<Element> = (0..n).map(Element::basis).collect();
    for i in 0..n {
        let shifted = alg.degree(i) as i64 - 1;
        let (di, bi) = (d.dbar(&basis[i]), d.delta(&basis[i]));
        for j in 0..n {
            let lhs = d.integrate(&d.mul(&di, &basis[j]));
            let rhs = sign(shifted) * d.integrate(&d.mul(&basis[i], &d.dbar(&basis[j])));
            if lhs != rhs {
                report.violation(
                    "dbar-by-parts",
                    vec![name(i), name(j)],
                    None,
                    format_scalar(&lhs),
                    format_scalar(&rhs),
                );
            }
            let lhs = d.integrate(&d.mul(&bi, &basis[j]));
            let rhs = sign(shifted + 1) * d.integrate(&d.mul(&basis[i], &d.delta(&basis[j])));
            if lhs != rhs {
                report.violation(
                    "delta-by-parts",
                    vec![name(i), name(j)],
                    None,
                    format_scalar(&lhs),
                    format_scalar(&rhs),
                );
            }
        }
        let t = d.integrate(&di);
        if !t.is_zero() {
            report.note(format!(
                "integral of dbar({}) is {} (not required to vanish)",
                name(i),
                format_scalar(&t)
            ));
        }
    }
    match crate::hodge::harmonic_basis(d) {
        Ok(h) => {
            let gram: Vec<Vec<Scalar>> = h
                .iter()
                .map(|a| h.iter().map(|b| d.integrate(&d.mul(a, b))).collect())
                .collect();
            let rank = if h.is_empty() {
                0
            } else {
                Matrix::from_rows(gram).rank(&LowestIndexFirst)
            };
            if rank != h.len() {
                report.violation(
                    "nondegeneracy",
                    vec![],
                    None,
                    format!("rank {rank}"),
                    format!("rank {}", h.len()),
                );
            }
        }
        Err(e) => report.note(format!("pairing not checked: {e}")),
    }
    report
}

/// Subspace data used by the ∂∂̄-lemma check.
#[derive(Debug, Clone)]
pub struct LemmaSpaces {
    pub ker_dbar: Vec<Vector>,
    pub ker_delta: Vec<Vector>,
    pub im_dbar: Vec<Vector>,
    pub im_delta: Vec<Vector>,
    pub im_delta_dbar: Vec<Vector>,
    pub lhs: Vec<Vector>,
}

pub fn lemma_spaces(d: &DgbvData) -> LemmaSpaces {
    let n = d.dim();
    let rule = LowestIndexFirst;
    let dbar = d.dbar_matrix();
    let delta = d.delta_matrix();
    let both = delta.mul(&dbar);
    let ker_dbar = Rref::new(&dbar, &rule).kernel();
    let ker_delta = Rref::new(&delta, &rule).kernel();
    let cols = |m: &Matrix| -> Vec<Vector> {
        let all: Vec<Vector> = (0..m.cols()).map(|j| m.column(j)).collect();
        independent_subset(n, &all, &rule)
    };
    let im_dbar = cols(&dbar);
    let im_delta = cols(&delta);
    let im_delta_dbar = cols(&both);
    let mut sum = im_delta.clone();
    sum.extend(im_dbar.iter().cloned());
    let sum = independent_subset(n, &sum, &rule);
    let kk = intersection(n, &ker_dbar, &ker_delta, &rule);
    let lhs = intersection(n, &kk, &sum, &rule);
    LemmaSpaces {
        ker_dbar,
        ker_delta,
        im_dbar,
        im_delta,
        im_delta_dbar,
        lhs,
    }
}

/// Verifies `Ker ∂̄ ∩ Ker Δ ∩ (Im Δ + Im ∂̄) = Im Δ∂̄` by exact rank bookkeeping.
pub fn check_ddbar_lemma(d: &DgbvData) -> ValidationReport {
    let mut report = ValidationReport::new("ddbar-lemma");
    let n = d.dim();
    let s = lemma_spaces(d);
    report.note(format!(
        "dim Ker dbar = {}, dim Ker delta = {}, dim Im dbar = {}, dim Im delta = {}, dim Im(delta dbar) = {}, dim lhs = {}",
        s.ker_dbar.len(),
        s.ker_delta.len(),
        s.im_dbar.len(),
        s.im_delta.len(),
        s.im_delta_dbar.len(),
        s.lhs.len()
    ));
    for v in &s.lhs {
        if !crate::linalg::span_contains(n, &s.im_delta_dbar, v) {
            report.violation(
                "lemma-lhs-not-in-image",
                vec![],
                None,
                d.alg().render(&Element::from_dense(v)),
                "in Im(delta dbar)",
            );
            break;
        }
    }
    for v in &s.im_delta_dbar {
        if !crate::linalg::span_contains(n, &s.lhs, v) {
            report.violation(
                "lemma-image-not-in-lhs",
                vec![],
                None,
                d.alg().render(&Element::from_dense(v)),
                "in Ker dbar ∩ Ker delta ∩ (Im delta + Im dbar)",
            );
            break;
        }
    }
    report
}

/// Graded tensor product with Koszul signs; composite names are `x*y`.
pub fn tensor_product(d1: &DgbvData, d2: &DgbvData) -> Result<DgbvData> {
    let (a1, a2) = (d1.alg(), d2.alg());
    let (n1, n2) = (a1.dim(), a2.dim());
    let idx = |i: usize, j: usize| i * n2 + j;
    let mut names = Vec::with_capacity(n1 * n2);
    let mut degrees = Vec::with_capacity(n1 * n2);
    let mut bideg = Vec::with_capacity(n1 * n2);
    for i in 0..n1 {
        for j in 0..n2 {
            names.push(format!("{}*{}", a1.name(i), a2.name(j)));
            degrees.push(a1.degree(i) + a2.degree(j));
            bideg.push(match (a1.bidegree(i), a2.bidegree(j)) {
                (Some((p1, q1)), Some((p2, q2))) => Some((p1 + p2, q1 + q2)),
                _ => None,
            });
        }
    }
    let mut product = Vec::new();
    for t1 in a1.product_terms() {
        for t2 in a2.product_terms() {
            // (x1⊗x2)(y1⊗y2) = (-1)^{|x2||y1|} x1y1 ⊗ x2y2
            let s = sign(a2.degree(t2.i) as i64 * a1.degree(t1.j) as i64);
            product.push(ProductTerm {
                i: idx(t1.i, t2.i),
                j: idx(t1.j, t2.j),
                k: idx(t1.k, t2.k),
                coeff: s * &t1.coeff * &t2.coeff,
            });
        }
    }
    let alg = AlgebraData::new(names, degrees, product, idx(a1.unit(), a2.unit()))?
        .with_bidegrees(bideg)?;
    let op = |f: &dyn Fn(&DgbvData, usize) -> Element| -> Vec<OperatorEntry> {
        let mut out = Vec::new();
        for i in 0..n1 {
            for j in 0..n2 {
                for (k, c) in f(d1, i).iter() {
                    out.push(OperatorEntry {
                        from: idx(i, j),
                        to: idx(k, j),
                        coeff: c.clone(),
                    });
                }
                let s = sign(a1.degree(i) as i64);
                for (k, c) in f(d2, j).iter() {
                    out.push(OperatorEntry {
                        from: idx(i, j),
                        to: idx(i, k),
                        coeff: &s * c,
                    });
                }
            }
        }
        out
    };
    let dbar = op(&|d, i| d.dbar_image(i).clone());
    let delta = op(&|d, i| d.delta_image(i).clone());
    let mut integral = Vec::new();
    for i in 0..n1 {
        for j in 0..n2 {
            let c = &d1.integral_vector()[i] * &d2.integral_vector()[j];
            if !c.is_zero() {
                integral.push((idx(i, j), c));
            }
        }
    }
    DgbvData::new(
        alg,
        &dbar,
        &delta,
        &integral,
        d1.top_degree() + d2.top_degree(),
    )
}
