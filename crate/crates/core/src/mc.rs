//! Normalized solution of the Maurer-Cartan equation `∂̄γ + ½[γ,γ] = 0` in
//! formal power series, built order by order with the ∂∂̄-solver.

use std::sync::Arc;

use crate::algebra::Element;
use crate::bv::DgbvData;
use crate::error::{Error, Result};
use crate::hodge::DgbvContext;
use crate::report::ValidationReport;
use crate::scalar::{frac, int, one, Scalar};
use crate::series::{ElementSeries, Monomial, Variables};

#[derive(Debug, Clone, PartialEq)]
pub struct McSolution {
    pub gamma_hat: ElementSeries,
    pub alpha: ElementSeries,
    pub order: usize,
    pub harmonic: Vec<Element>,
}

impl McSolution {
    pub fn vars(&self) -> &Arc<Variables> {
        self.gamma_hat.vars()
    }

    /// `Σ_a t^a γ_a`.
    pub fn linear_part(&self) -> ElementSeries {
        linear_series(self.vars().clone(), &self.harmonic, self.order)
    }
}

/// Coordinates dual to a harmonic basis: `deg t^a = 2 - |γ_a|`.
pub fn variables_for(harmonic: &[Element], d: &DgbvData) -> Result<Arc<Variables>> {
    let mut degs = Vec::with_capacity(harmonic.len());
    for (a, g) in harmonic.iter().enumerate() {
        let deg = d.alg().homogeneous_degree(g).ok_or_else(|| {
            Error::Precondition(format!("harmonic element {a} is not homogeneous"))
        })?;
        degs.push(2 - deg);
    }
    Ok(Variables::new(degs))
}

fn linear_series(vars: Arc<Variables>, harmonic: &[Element], order: usize) -> ElementSeries {
    let mut s = ElementSeries::zero(vars.clone(), order);
    for (a, g) in harmonic.iter().enumerate() {
        s.add_term(Monomial::var(a, vars.count()), g.clone());
    }
    s
}

fn koszul(m: &Monomial, vars: &Variables) -> Scalar {
    if m.is_odd(vars) {
        -one()
    } else {
        one()
    }
}

/// Solves through word length `order`. The harmonic basis and all tie-breaks
/// come from the context's pivot rule.
pub fn solve_mc(ctx: &DgbvContext, order: usize) -> Result<McSolution> {
    let d = ctx.data();
    let harmonic = ctx.harmonic().to_vec();
    let vars = variables_for(&harmonic, d)?;
    let mut parts = vec![ElementSeries::zero(vars.clone(), order)];
    parts.push(linear_series(vars.clone(), &harmonic, order));
    let mut alpha = ElementSeries::zero(vars.clone(), order);
    for k in 2..=order {
        let mut r = ElementSeries::zero(vars.clone(), order);
        for i in 1..k {
            r.add_assign_scaled(&parts[i].bracket(&parts[k - i], d)?, &frac(-1, 2));
        }
        let mut next = ElementSeries::zero(vars.clone(), order);
        for (m, rm) in r.iter() {
            let s = koszul(m, &vars);
            let beta = ctx.ddbar_solve(&rm.scale(&s)).map_err(|e| Error::MaurerCartan {
                order: k,
                monomial: m.render(),
                reason: e.to_string(),
            })?;
            next.add_scaled_term(m.clone(), &d.delta(&beta), &int(-1));
            alpha.add_scaled_term(m.clone(), &beta, &-s);
        }
        parts.push(next);
    }
    let mut gamma_hat = ElementSeries::zero(vars, order);
    for p in &parts {
        gamma_hat.add_assign_scaled(p, &one());
    }
    Ok(McSolution {
        gamma_hat,
        alpha,
        order,
        harmonic,
    })
}

/// `∂̄g + ½[g,g]`, with the bracket evaluated by the BV formula on the
/// series ring rather than termwise.
pub fn mc_residual(g: &ElementSeries, d: &DgbvData) -> ElementSeries {
    let mut out = g.dbar(d);
    out.add_assign_scaled(&formula_bracket(g, g, d), &frac(1, 2));
    out
}

/// Series bracket through `[X,Y] = (-1)^{|X|}(Δ(XY) - ΔX·Y - (-1)^{|X|} X·ΔY)`,
/// splitting `X` by the parity of its total degree.
pub fn formula_bracket(x: &ElementSeries, y: &ElementSeries, d: &DgbvData) -> ElementSeries {
    let alg = d.alg();
    let vars = x.vars().clone();
    let mut even = ElementSeries::zero(vars.clone(), x.order());
    let mut odd = ElementSeries::zero(vars, x.order());
    for (m, c) in x.iter() {
        for (i, q) in c.iter() {
            let total = m.degree(x.vars()) + alg.degree(i) as i64;
            let part = if total.rem_euclid(2) == 0 { &mut even } else { &mut odd };
            part.add_term(m.clone(), Element::term(i, q.clone()));
        }
    }
    let dy = y.delta(d);
    let mut out = ElementSeries::zero(x.vars().clone(), x.order().min(y.order()));
    for (part, s) in [(even, one()), (odd, -one())] {
        if part.is_empty() {
            continue;
        }
        let mut inner = part.mul(y, alg).expect("same variables").delta(d);
        inner.add_assign_scaled(&part.delta(d).mul(y, alg).expect("same variables"), &-one());
        inner.add_assign_scaled(&part.mul(&dy, alg).expect("same variables"), &-s.clone());
        out.add_assign_scaled(&inner, &s);
    }
    out
}

/// Infinitesimal gauge vector `∂̄x + [g,x]` for `x` of total degree 1.
pub fn gauge_direction(g: &ElementSeries, x: &ElementSeries, d: &DgbvData) -> Result<ElementSeries> {
    if !x.is_homogeneous_of(1, d.alg()) {
        return Err(Error::InvalidInput(format!(
            "gauge parameter must have total degree 1, found {:?}",
            x.total_degrees(d.alg())
        )));
    }
    let mut out = x.dbar(d);
    out.add_assign_scaled(&g.bracket(x, d)?, &one());
    Ok(out)
}

/// Post hoc check of the normalization conditions and the equation itself.
pub fn verify_mc(sol: &McSolution, ctx: &DgbvContext) -> ValidationReport {
    let d = ctx.data();
    let alg = d.alg();
    let vars = sol.vars();
    let mut rep = ValidationReport::new("maurer-cartan");
    let g = &sol.gamma_hat;
    let lin = sol.linear_part();
    let n = vars.count();
    for (m, c) in g.iter() {
        let expect = if m.word_len() == 1 { lin.get(m) } else { Element::zero() };
        if m.word_len() <= 1 && *c != expect {
            rep.violation("linear-part", vec![], Some(m.render()), alg.render(c), alg.render(&expect));
        }
        if m.word_len() >= 2 {
            if !ctx.in_image_of_delta(c) {
                rep.violation("coefficient-in-image-of-delta", vec![], Some(m.render()), alg.render(c), "in Im delta");
            }
            if m.exponent(0) > 0 {
                rep.violation("identity-direction-nonlinear", vec![], Some(m.render()), alg.render(c), "0");
            }
        }
    }
    for (_, c) in lin.iter() {
        if !d.dbar(c).is_zero() || !d.delta(c).is_zero() {
            rep.violation("linear-not-harmonic", vec![], None, alg.render(c), "harmonic");
        }
    }
    let flat = g.partial_derivative(0);
    let unit = ElementSeries::constant(vars.clone(), flat.order(), alg.unit_element());
    if flat != unit {
        rep.violation("flat-identity", vec!["0".into()], None, flat.render(alg), "1");
    }
    if !g.is_homogeneous_of(2, alg) {
        rep.violation("total-degree", vec![], None, format!("{:?}", g.total_degrees(alg)), "[2]");
    }
    let res = mc_residual(g, d);
    for (m, c) in res.iter() {
        rep.violation("mc-residual", vec![], Some(m.render()), alg.render(c), "0");
    }
    let via_alpha = g.sub(&lin).sub(&sol.alpha.delta(d));
    for (m, c) in via_alpha.iter() {
        rep.violation("alpha-potential", vec![], Some(m.render()), alg.render(c), "0");
    }
    if n != ctx.harmonic().len() {
        rep.violation("variable-count", vec![], None, n.to_string(), ctx.harmonic().len().to_string());
    }
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{FixtureFactory, FixtureParams, SquareFixture, TrivialFixture};

    fn ctx(f: &dyn FixtureFactory) -> DgbvContext {
        DgbvContext::new(f.build(&FixtureParams::default()).unwrap()).unwrap()
    }

    #[test]
    fn trivial_solution_is_linear() {
        let c = ctx(&TrivialFixture);
        let sol = solve_mc(&c, 4).unwrap();
        assert_eq!(sol.gamma_hat, sol.linear_part());
        assert!(sol.alpha.is_zero());
        assert!(verify_mc(&sol, &c).passed());
    }

    #[test]
    fn square_solution_satisfies_conditions() {
        let c = ctx(&SquareFixture);
        let sol = solve_mc(&c, 6).unwrap();
        let rep = verify_mc(&sol, &c);
        assert!(rep.passed(), "{rep}");
        assert!(sol.gamma_hat.iter().any(|(m, _)| m.word_len() == 2));
    }

    #[test]
    fn residual_of_linear_part_is_half_bracket() {
        let c = ctx(&SquareFixture);
        let d = c.data();
        let sol = solve_mc(&c, 3).unwrap();
        let lin = sol.linear_part();
        let res = mc_residual(&lin, d);
        let mut expect = lin.bracket(&lin, d).unwrap();
        expect = expect.scale(&frac(1, 2));
        assert_eq!(res, expect);
        assert!(!res.is_zero());
    }

    #[test]
    fn orders_are_stable() {
        let c = ctx(&SquareFixture);
        let big = solve_mc(&c, 6).unwrap();
        for m in 1..6 {
            let small = solve_mc(&c, m).unwrap();
            assert_eq!(big.gamma_hat.truncate(m), small.gamma_hat);
            assert_eq!(big.alpha.truncate(m), small.alpha);
        }
    }

    #[test]
    fn gauge_direction_rejects_wrong_degree() {
        let c = ctx(&SquareFixture);
        let sol = solve_mc(&c, 3).unwrap();
        assert!(gauge_direction(&sol.gamma_hat, &sol.gamma_hat, c.data()).is_err());
    }
}
