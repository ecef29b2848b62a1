//! Five-space decomposition `X0 ⊕ X1 ⊕ X2 ⊕ X3 ⊕ Y`, harmonic representatives,
//! and the elementary solve `r = Δ∂̄β` it enables.

use std::sync::Arc;

use crate::algebra::Element;
use crate::bv::DgbvData;
use crate::error::{Error, Result};
use crate::linalg::{rank_of, span_contains, Matrix, Rref, Vector};
use crate::pivot::{default_rule, PivotRule};

#[derive(Debug, Clone, PartialEq)]
pub struct HodgeDecomposition {
    pub x0: Vec<Element>,
    pub x1: Vec<Element>,
    pub x2: Vec<Element>,
    pub x3: Vec<Element>,
    /// Harmonic block; the unit is always its first vector.
    pub y: Vec<Element>,
}

impl HodgeDecomposition {
    pub fn dims(&self) -> [usize; 5] {
        [
            self.x0.len(),
            self.x1.len(),
            self.x2.len(),
            self.x3.len(),
            self.y.len(),
        ]
    }
}

pub fn hodge_decomposition(d: &DgbvData) -> Result<HodgeDecomposition> {
    hodge_decomposition_with(d, default_rule().as_ref())
}

pub fn hodge_decomposition_with(d: &DgbvData, rule: &dyn PivotRule) -> Result<HodgeDecomposition> {
    let alg = d.alg();
    let n = d.dim();
    let l = d.delta_matrix().mul(&d.dbar_matrix());
    let rref = Rref::new(&l, rule);
    let mut pivots = rref.pivots().to_vec();
    pivots.sort_unstable();
    let x0: Vec<Element> = pivots.iter().map(|&p| Element::basis(p)).collect();
    let x1: Vec<Element> = x0.iter().map(|x| d.dbar(x)).collect();
    let x2: Vec<Element> = x0.iter().map(|x| d.delta(x)).collect();
    let x3: Vec<Element> = x1.iter().map(|x| d.delta(x)).collect();

    // Y: per degree, extend X3 to a basis of Ker ∂̄ ∩ Ker Δ; the unit goes first.
    let mut y = Vec::new();
    let mut degrees: Vec<i32> = alg.degrees().to_vec();
    degrees.sort_unstable();
    degrees.dedup();
    for deg in degrees {
        let idx = alg.indices_of_degree(deg);
        let cols: Vec<Vector> = idx
            .iter()
            .map(|&i| {
                let mut v = d.dbar_image(i).to_dense(n);
                v.extend(d.delta_image(i).to_dense(n));
                v
            })
            .collect();
        let ker = Rref::new(&Matrix::from_columns(2 * n, &cols), rule).kernel();
        let mut candidates: Vec<Element> = Vec::new();
        if deg == alg.degree(alg.unit()) {
            candidates.push(alg.unit_element());
        }
        candidates.extend(ker.iter().map(|k| {
            let mut e = Element::zero();
            for (c, &i) in k.iter().zip(&idx) {
                e.add_term(i, c.clone());
            }
            e
        }));
        let mut span: Vec<Vector> = x3
            .iter()
            .filter(|x| alg.homogeneous_degree(x) == Some(deg))
            .map(|x| x.to_dense(n))
            .collect();
        for c in candidates {
            let v = c.to_dense(n);
            let in_kernel = d.dbar(&c).is_zero() && d.delta(&c).is_zero();
            if in_kernel && !span_contains(n, &span, &v) {
                span.push(v);
                y.push(c);
            }
        }
    }
    let unit = alg.unit_element();
    match y.iter().position(|v| *v == unit) {
        Some(0) => {}
        Some(p) => {
            let u = y.remove(p);
            y.insert(0, u);
        }
        None => {
            return Err(Error::Decomposition(
                "unit is not a harmonic representative (it is ∂̄- or Δ-nonclosed, or lies in Im Δ∂̄)"
                    .into(),
            ))
        }
    }
    let h = HodgeDecomposition { x0, x1, x2, x3, y };
    verify_decomposition(d, &h)?;
    Ok(h)
}

pub fn verify_decomposition(d: &DgbvData, h: &HodgeDecomposition) -> Result<()> {
    let n = d.dim();
    let dense = |v: &[Element]| -> Vec<Vector> { v.iter().map(|e| e.to_dense(n)).collect() };
    let r = h.x0.len();
    let rule = crate::pivot::LowestIndexFirst;
    for (block, v) in [("dbar: X0 -> X1", &h.x1), ("delta: X0 -> X2", &h.x2), ("delta dbar: X0 -> X3", &h.x3)] {
        if rank_of(n, &dense(v), &rule) != r {
            return Err(Error::Decomposition(format!("{block} is not an isomorphism")));
        }
    }
    let dbar_x2: Vec<Element> = h.x2.iter().map(|x| d.dbar(x)).collect();
    if rank_of(n, &dense(&dbar_x2), &rule) != r
        || !dbar_x2.iter().all(|x| span_contains(n, &dense(&h.x3), &x.to_dense(n)))
    {
        return Err(Error::Decomposition("dbar: X2 -> X3 is not an isomorphism".into()));
    }
    for (block, v) in [("X1", &h.x1), ("X3", &h.x3), ("Y", &h.y)] {
        if v.iter().any(|x| !d.dbar(x).is_zero()) {
            return Err(Error::Decomposition(format!("dbar does not annihilate {block}")));
        }
    }
    for (block, v) in [("X2", &h.x2), ("X3", &h.x3), ("Y", &h.y)] {
        if v.iter().any(|x| !d.delta(x).is_zero()) {
            return Err(Error::Decomposition(format!("delta does not annihilate {block}")));
        }
    }
    let mut all = Vec::new();
    for v in [&h.x0, &h.x1, &h.x2, &h.x3, &h.y] {
        all.extend(dense(v));
    }
    let rank = rank_of(n, &all, &rule);
    if all.len() != n || rank != n {
        return Err(Error::Decomposition(format!(
            "X0..X3, Y span rank {rank} with {} vectors in dimension {n}: the ∂∂̄-lemma fails",
            all.len()
        )));
    }
    Ok(())
}

/// Harmonic representatives: the unit first, then the rest of `Y`.
pub fn harmonic_basis(d: &DgbvData) -> Result<Vec<Element>> {
    Ok(hodge_decomposition(d)?.y)
}

/// A validated dGBV algebra together with its decomposition and cached
/// factorizations. Read-only after construction.
pub struct DgbvContext {
    data: DgbvData,
    rule: Arc<dyn PivotRule>,
    hodge: HodgeDecomposition,
    delta_dbar: Rref,
    delta: Rref,
}

impl DgbvContext {
    pub fn new(data: DgbvData) -> Result<Self> {
        Self::with_rule(data, default_rule())
    }

    pub fn with_rule(data: DgbvData, rule: Arc<dyn PivotRule>) -> Result<Self> {
        let hodge = hodge_decomposition_with(&data, rule.as_ref())?;
        let l = data.delta_matrix().mul(&data.dbar_matrix());
        let delta_dbar = Rref::new(&l, rule.as_ref());
        let delta = Rref::new(&data.delta_matrix(), rule.as_ref());
        Ok(DgbvContext {
            data,
            rule,
            hodge,
            delta_dbar,
            delta,
        })
    }

    pub fn data(&self) -> &DgbvData {
        &self.data
    }

    pub fn rule(&self) -> &dyn PivotRule {
        self.rule.as_ref()
    }

    pub fn rule_arc(&self) -> Arc<dyn PivotRule> {
        self.rule.clone()
    }

    pub fn hodge(&self) -> &HodgeDecomposition {
        &self.hodge
    }

    pub fn harmonic(&self) -> &[Element] {
        &self.hodge.y
    }

    pub fn in_image_of_delta(&self, x: &Element) -> bool {
        self.delta.is_consistent(&x.to_dense(self.data.dim()))
    }

    /// Returns `β` with `Δ∂̄β = r` for `r ∈ Ker ∂̄ ∩ Im Δ`; free coordinates are zero.
    pub fn ddbar_solve(&self, r: &Element) -> Result<Element> {
        self.data.alg().check_element(r)?;
        if !self.data.dbar(r).is_zero() {
            return Err(Error::Precondition(format!(
                "{} is not dbar-closed",
                self.data.alg().render(r)
            )));
        }
        if !self.in_image_of_delta(r) {
            return Err(Error::Precondition(format!(
                "{} is not in Im delta",
                self.data.alg().render(r)
            )));
        }
        match self.delta_dbar.solve(&r.to_dense(self.data.dim())) {
            Some(b) => Ok(Element::from_dense(&b)),
            None => Err(Error::Precondition(format!(
                "{} is dbar-closed and delta-exact but not in Im(delta dbar): the ∂∂̄-lemma fails",
                self.data.alg().render(r)
            ))),
        }
    }
}

/// One-off form of [`DgbvContext::ddbar_solve`].
pub fn ddbar_solve(r: &Element, d: &DgbvData) -> Result<Element> {
    DgbvContext::new(d.clone())?.ddbar_solve(r)
}
