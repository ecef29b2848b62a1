//! Checker for the axioms of a formal Frobenius manifold in flat
//! coordinates: supercommutativity, associativity, invariance, identity and
//! potentiality, each coefficientwise and exact.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::frobenius::{compare_series, FrobeniusData, StructureConstants};
use crate::report::ValidationReport;
use crate::scalar::{sign, Scalar};
use crate::series::{ScalarSeries, Variables};

fn p(vars: &Variables, a: usize) -> i64 {
    vars.is_odd(a) as i64
}

/// `A^c_{ba} = (-1)^{āb̄} A^c_{ab}`.
pub fn check_commutativity(vars: &Arc<Variables>, a: &StructureConstants) -> ValidationReport {
    let mut rep = ValidationReport::new("axioms");
    let r = vars.count();
    for x in 0..r {
        for y in x..r {
            for c in 0..r {
                let rhs = a.get(x, y, c).scale(&sign(p(vars, x) * p(vars, y)));
                compare_series(&mut rep, "commutativity", &[y, x, c], a.get(y, x, c), &rhs);
            }
        }
    }
    rep
}

/// `Σ_e A^e_{ab} A^d_{ec} = (-1)^{ā(b̄+c̄)} Σ_e A^e_{bc} A^d_{ea}`.
pub fn check_associativity(vars: &Arc<Variables>, a: &StructureConstants) -> ValidationReport {
    let mut rep = ValidationReport::new("axioms");
    let r = vars.count();
    let order = a.order();
    for x in 0..r {
        for y in 0..r {
            for z in 0..r {
                let s = sign(p(vars, x) * (p(vars, y) + p(vars, z)));
                for d in 0..r {
                    let mut lhs = ScalarSeries::zero(vars.clone(), order);
                    let mut rhs = lhs.clone();
                    for e in 0..r {
                        lhs.add_assign_scaled(&a.get(x, y, e).mul(a.get(e, z, d)).expect("same variables"), &Scalar::one());
                        rhs.add_assign_scaled(&a.get(y, z, e).mul(a.get(e, x, d)).expect("same variables"), &s);
                    }
                    compare_series(&mut rep, "associativity", &[x, y, z, d], &lhs, &rhs);
                }
            }
        }
    }
    rep
}

/// `A_{abc} = (-1)^{ā(b̄+c̄)} A_{bca}`.
pub fn check_invariance(f: &FrobeniusData) -> ValidationReport {
    let mut rep = ValidationReport::new("axioms");
    let r = f.rank();
    let v = &f.vars;
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                let lhs = f.a.lowered(a, b, c, &f.g);
                let rhs = f.a.lowered(b, c, a, &f.g).scale(&sign(p(v, a) * (p(v, b) + p(v, c))));
                compare_series(&mut rep, "invariance", &[a, b, c], &lhs, &rhs);
            }
        }
    }
    rep
}

/// `A^b_{0a} = δ^b_a`.
pub fn check_identity(f: &FrobeniusData) -> ValidationReport {
    let mut rep = ValidationReport::new("axioms");
    let r = f.rank();
    let order = f.a.order();
    for a in 0..r {
        for b in 0..r {
            let delta = if a == b { Scalar::one() } else { Scalar::zero() };
            let expect = ScalarSeries::constant(f.vars.clone(), order, delta);
            compare_series(&mut rep, "identity", &[a, b], f.a.get(0, a, b), &expect);
        }
    }
    rep
}

/// `∂_d A^c_{ab} = (-1)^{ād̄} ∂_a A^c_{db}`.
pub fn check_derivative_symmetry(f: &FrobeniusData) -> ValidationReport {
    let mut rep = ValidationReport::new("axioms");
    let r = f.rank();
    let v = &f.vars;
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                for d in 0..r {
                    let lhs = f.a.get(a, b, c).partial_derivative(d);
                    let rhs = f.a.get(d, b, c).partial_derivative(a).scale(&sign(p(v, a) * p(v, d)));
                    compare_series(&mut rep, "potentiality", &[a, b, c, d], &lhs, &rhs);
                }
            }
        }
    }
    rep
}

fn validate_shape(f: &FrobeniusData) -> Result<()> {
    let r = f.rank();
    if f.a.rank() != r || f.g.rows() != r || f.g.cols() != r || f.euler_weights.len() != r {
        return Err(Error::InvalidInput(format!(
            "index ranges disagree: {r} coordinates, A over {}, g is {}x{}",
            f.a.rank(),
            f.g.rows(),
            f.g.cols()
        )));
    }
    if r == 0 {
        return Err(Error::InvalidInput("no coordinates".into()));
    }
    Ok(())
}

/// Runs all axiom families through word length `order` (capped at what
/// the data supports).
pub fn check_axioms(f: &FrobeniusData, order: usize) -> Result<ValidationReport> {
    validate_shape(f)?;
    let mut t = f.clone();
    let r = t.rank();
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                let s = t.a.get(a, b, c).truncate(order);
                *t.a.get_mut(a, b, c) = s;
            }
        }
    }
    let mut rep = ValidationReport::new("axioms");
    rep.absorb(check_commutativity(&t.vars, &t.a));
    rep.absorb(check_associativity(&t.vars, &t.a));
    rep.absorb(check_invariance(&t));
    rep.absorb(check_identity(&t));
    rep.absorb(check_derivative_symmetry(&t));
    Ok(rep)
}
