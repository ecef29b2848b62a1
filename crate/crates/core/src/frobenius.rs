//! Frobenius-manifold data extracted from a Maurer-Cartan solution, and the
//! identities relating structure constants, metric, potential and Euler field.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::axioms::{check_associativity, check_derivative_symmetry};
use crate::bv::DgbvData;
use crate::error::{Error, Result};
use crate::hodge::DgbvContext;
use crate::linalg::{Matrix, Rref};
use crate::mc::McSolution;
use crate::pivot::PivotRule;
use crate::report::ValidationReport;
use crate::scalar::{format_scalar, frac, int, sign, Scalar};
use crate::series::{euler_weight, ElementSeries, Monomial, ScalarSeries, Variables};
use crate::algebra::Element;

/// `A^c_{ab}(t)` for all index triples, stored densely.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    r: usize,
    entries: Vec<ScalarSeries>,
}

impl StructureConstants {
    pub fn zero(vars: Arc<Variables>, order: usize) -> Self {
        let r = vars.count();
        StructureConstants {
            r,
            entries: vec![ScalarSeries::zero(vars, order); r * r * r],
        }
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    /// `A^c_{ab}`.
    pub fn get(&self, a: usize, b: usize, c: usize) -> &ScalarSeries {
        &self.entries[(a * self.r + b) * self.r + c]
    }

    pub fn get_mut(&mut self, a: usize, b: usize, c: usize) -> &mut ScalarSeries {
        &mut self.entries[(a * self.r + b) * self.r + c]
    }

    /// `A_{abc} = Σ_e A^e_{ab} g_{ec}`.
    pub fn lowered(&self, a: usize, b: usize, c: usize, g: &Matrix) -> ScalarSeries {
        let mut out = self.get(a, b, 0).scale(&Scalar::zero());
        for e in 0..self.r {
            let m = g.get(e, c);
            if !m.is_zero() {
                out.add_assign_scaled(self.get(a, b, e), m);
            }
        }
        out
    }

    pub fn order(&self) -> usize {
        self.entries.first().map_or(0, |s| s.order())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrobeniusData {
    pub vars: Arc<Variables>,
    pub a: StructureConstants,
    pub g: Matrix,
    pub g_inv: Matrix,
    pub phi: ScalarSeries,
    /// `w_a = -½|Δ_a|` with `|Δ_a| = |γ_a| - 2`.
    pub euler_weights: Vec<Scalar>,
    pub n: i32,
    /// Optional `(p,q)` bidegrees of the harmonic basis.
    pub bidegrees: Vec<Option<(i32, i32)>>,
}

impl FrobeniusData {
    pub fn rank(&self) -> usize {
        self.vars.count()
    }

    /// `|Δ_a| = -deg t^a`.
    pub fn delta_degree(&self, a: usize) -> i32 {
        -self.vars.degree(a)
    }

    pub fn odd(&self, a: usize) -> bool {
        self.vars.is_odd(a)
    }
}

fn partials(sol: &McSolution) -> Vec<ElementSeries> {
    (0..sol.vars().count())
        .map(|a| sol.gamma_hat.partial_derivative(a))
        .collect()
}

/// Solves `∂_aγ̂ ∂_bγ̂ = Σ_c A^c_{ab} ∂_cγ̂ + D(η)` order by order, where
/// `D = ∂̄ + [γ̂, ·]`. Valid through order `N - 1`.
pub fn structure_constants(sol: &McSolution, d: &DgbvData, rule: &dyn PivotRule) -> Result<StructureConstants> {
    let vars = sol.vars().clone();
    let r = vars.count();
    let dim = d.dim();
    let order = sol.order.saturating_sub(1);
    let alg = d.alg();
    let dg = partials(sol);
    let mut cols: Vec<Vec<Scalar>> = sol.harmonic.iter().map(|h| h.to_dense(dim)).collect();
    cols.extend((0..dim).map(|i| d.dbar_image(i).to_dense(dim)));
    let rref = Rref::new(&Matrix::from_columns(dim, &cols), rule);
    let gamma = sol.gamma_hat.truncate(order);

    let mut out = StructureConstants::zero(vars.clone(), order);
    for a in 0..r {
        for b in 0..r {
            let lhs = dg[a].mul(&dg[b], alg)?;
            let mut running = ElementSeries::zero(vars.clone(), order);
            for k in 0..=order {
                let diff = lhs.homogeneous_part(k).sub(&running.homogeneous_part(k));
                let residuals: Vec<(Monomial, Element)> =
                    diff.iter().map(|(m, x)| (m.clone(), x.clone())).collect();
                for (m, x) in residuals {
                    let y = rref.solve(&x.to_dense(dim)).ok_or_else(|| Error::Pipeline {
                        stage: "structure constants".into(),
                        reason: format!(
                            "product of directions ({a},{b}) at {} is not a combination of the tangent frame modulo exact terms",
                            m.render()
                        ),
                    })?;
                    let mut single = ScalarSeries::zero(vars.clone(), order);
                    for c in 0..r {
                        if y[c].is_zero() {
                            continue;
                        }
                        single.add_term(m.clone(), y[c].clone());
                        running.add_assign_scaled(&single.mul_element(&dg[c])?, &Scalar::one());
                        out.get_mut(a, b, c).add_term(m.clone(), y[c].clone());
                        single = ScalarSeries::zero(vars.clone(), order);
                    }
                    let z = Element::from_dense(&y[r..]);
                    if !z.is_zero() {
                        let s = if m.is_odd(&vars) { -Scalar::one() } else { Scalar::one() };
                        let mut eta = ElementSeries::zero(vars.clone(), order);
                        eta.add_scaled_term(m.clone(), &z, &s);
                        running.add_assign_scaled(&deformed_dbar(&gamma, &eta, d)?, &Scalar::one());
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `∂̄x + [γ̂, x]`.
pub fn deformed_dbar(gamma: &ElementSeries, x: &ElementSeries, d: &DgbvData) -> Result<ElementSeries> {
    let mut out = x.dbar(d);
    out.add_assign_scaled(&gamma.bracket(x, d)?, &Scalar::one());
    Ok(out)
}

/// `g_{ab} = ∫∂_aγ̂ ∂_bγ̂`; fails if the series has a nonconstant term.
pub fn metric(sol: &McSolution, d: &DgbvData) -> Result<Matrix> {
    let r = sol.vars().count();
    let dg = partials(sol);
    let mut g = Matrix::zeros(r, r);
    for a in 0..r {
        for b in 0..r {
            let s = dg[a].mul(&dg[b], d.alg())?.integrate(d);
            for (m, c) in s.iter() {
                if m.is_one() {
                    g.set(a, b, c.clone());
                } else {
                    return Err(Error::Pipeline {
                        stage: "metric".into(),
                        reason: format!("g_({a},{b}) has nonconstant term {} at {}", format_scalar(c), m.render()),
                    });
                }
            }
        }
    }
    Ok(g)
}

/// `Φ = ∫(-½ ∂̄α·Δα + ⅙ γ̂³)`, valid through order `N`.
pub fn potential(sol: &McSolution, d: &DgbvData) -> Result<ScalarSeries> {
    let alg = d.alg();
    let gap = sol.gamma_hat.sub(&sol.linear_part()).sub(&sol.alpha.delta(d));
    if let Some((m, _)) = gap.iter().next() {
        return Err(Error::Pipeline {
            stage: "potential".into(),
            reason: format!("gamma minus its linear part differs from delta(alpha) at {}", m.render()),
        });
    }
    let g = &sol.gamma_hat;
    let cubic = g.mul(g, alg)?.mul(g, alg)?.integrate(d);
    let quad = sol.alpha.dbar(d).mul(&sol.alpha.delta(d), alg)?.integrate(d);
    Ok(cubic.scale(&frac(1, 6)).sub(&quad.scale(&frac(1, 2))))
}

/// Assembles all Frobenius data with the context's pivot rule.
pub fn frobenius_data(sol: &McSolution, ctx: &DgbvContext) -> Result<FrobeniusData> {
    let d = ctx.data();
    let a = structure_constants(sol, d, ctx.rule())?;
    let g = metric(sol, d)?;
    let g_inv = g.inverse(ctx.rule()).ok_or_else(|| Error::Pipeline {
        stage: "metric".into(),
        reason: "pairing on harmonic representatives is degenerate".into(),
    })?;
    let phi = potential(sol, d)?;
    let vars = sol.vars().clone();
    let euler_weights = (0..vars.count())
        .map(|a| frac(vars.degree(a) as i64, 2))
        .collect();
    let bidegrees = sol
        .harmonic
        .iter()
        .map(|h| {
            let mut bd = None;
            for (i, _) in h.iter() {
                match (bd, d.alg().bidegree(i)) {
                    (_, None) => return None,
                    (None, Some(x)) => bd = Some(x),
                    (Some(y), Some(x)) if x != y => return None,
                    _ => {}
                }
            }
            bd
        })
        .collect();
    Ok(FrobeniusData {
        vars,
        a,
        g,
        g_inv,
        phi,
        euler_weights,
        n: d.n(),
        bidegrees,
    })
}

/// `∂_a∂_b∂_c Φ` as `∂_a(∂_b(∂_c Φ))`.
pub fn third_derivative(phi: &ScalarSeries, a: usize, b: usize, c: usize) -> ScalarSeries {
    phi.partial_derivative(c).partial_derivative(b).partial_derivative(a)
}

fn render_pair(x: &Scalar, y: &Scalar) -> (String, String) {
    (format_scalar(x), format_scalar(y))
}

/// Reports every coefficient where two series differ, up to the smaller order.
pub(crate) fn compare_series(
    rep: &mut ValidationReport,
    check: &str,
    idx: &[usize],
    lhs: &ScalarSeries,
    rhs: &ScalarSeries,
) {
    let order = lhs.order().min(rhs.order());
    let diff = lhs.with_order(order).sub(&rhs.with_order(order));
    for (m, _) in diff.iter() {
        let (l, r) = render_pair(&lhs.get(m), &rhs.get(m));
        rep.violation(check, idx.iter().map(|i| i.to_string()).collect(), Some(m.render()), l, r);
    }
}

/// `A_{abc} = ∂_a∂_b∂_cΦ` and the derivative form of the potentiality axiom.
pub fn check_potentiality(f: &FrobeniusData) -> ValidationReport {
    let mut rep = ValidationReport::new("potentiality");
    let r = f.rank();
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                let lhs = f.a.lowered(a, b, c, &f.g);
                let rhs = third_derivative(&f.phi, a, b, c);
                compare_series(&mut rep, "third-derivative", &[a, b, c], &lhs, &rhs);
            }
        }
    }
    rep.absorb(check_derivative_symmetry(f));
    rep
}

fn par(f: &FrobeniusData, a: usize) -> i64 {
    f.odd(a) as i64
}

/// Curvature of `∇ = ∇₀ + A`: the `[A,A]` part and the antisymmetrized
/// `∇₀A` part, for every `(a, b, d, c)`.
pub fn connection_flatness(f: &FrobeniusData) -> ValidationReport {
    let mut rep = ValidationReport::new("flatness");
    let r = f.rank();
    for a in 0..r {
        for b in 0..r {
            let (pa, pb) = (par(f, a), par(f, b));
            for dd in 0..r {
                let pd = par(f, dd);
                for c in 0..r {
                    let mut lhs = ScalarSeries::zero(f.vars.clone(), f.a.order());
                    let mut rhs = lhs.clone();
                    for e in 0..r {
                        let pe = par(f, e);
                        let x = f.a.get(b, dd, e).mul(f.a.get(a, e, c)).expect("same variables");
                        lhs.add_assign_scaled(&x, &sign(pa * (pb + pd + pe)));
                        let y = f.a.get(a, dd, e).mul(f.a.get(b, e, c)).expect("same variables");
                        rhs.add_assign_scaled(&y, &sign(pa * pb + pb * (pa + pd + pe)));
                    }
                    compare_series(&mut rep, "curvature-quadratic", &[a, b, dd, c], &lhs, &rhs);
                    let l = f.a.get(b, dd, c).partial_derivative(a);
                    let rr = f.a.get(a, dd, c).partial_derivative(b).scale(&sign(pa * pb));
                    compare_series(&mut rep, "curvature-linear", &[a, b, dd, c], &l, &rr);
                }
            }
        }
    }
    rep
}

/// `Δ(∂_aγ̂ ∂_bγ̂ - Σ_c A^c_{ab} ∂_cγ̂) = -(∂̄ + [γ̂,·]) ∂_a∂_bγ̂` for all
/// pairs `(a, b)`; this contains every even direction and its polarizations.
pub fn check_deformed_product_identity(sol: &McSolution, f: &FrobeniusData, d: &DgbvData) -> ValidationReport {
    let mut rep = ValidationReport::new("deformed-product");
    let alg = d.alg();
    let r = f.rank();
    let dg = partials(sol);
    let order = sol.order.saturating_sub(2);
    let gamma = sol.gamma_hat.truncate(order);
    for a in 0..r {
        for b in 0..r {
            let mut inner = dg[a].mul(&dg[b], alg).expect("same variables");
            for c in 0..r {
                let t = f.a.get(a, b, c).mul_element(&dg[c]).expect("same variables");
                inner.add_assign_scaled(&t, &int(-1));
            }
            let lhs = inner.delta(d).with_order(order);
            let rhs = deformed_dbar(&gamma, &dg[b].partial_derivative(a).with_order(order), d)
                .expect("same variables")
                .scale(&int(-1));
            let diff = lhs.sub(&rhs);
            for (m, _) in diff.iter() {
                rep.violation(
                    "deformed-product-identity",
                    vec![a.to_string(), b.to_string()],
                    Some(m.render()),
                    alg.render(&lhs.get(m)),
                    alg.render(&rhs.get(m)),
                );
            }
        }
    }
    rep
}

/// Associativity of `Ã^d_{ab} = Σ_e Φ_{abe} g^{ed}`, independent of `A`.
pub fn check_wdvv(f: &FrobeniusData) -> ValidationReport {
    let r = f.rank();
    let order = f.phi.order().saturating_sub(3);
    let mut tilde = StructureConstants::zero(f.vars.clone(), order);
    let mut cache = BTreeMap::new();
    for a in 0..r {
        for b in 0..r {
            for e in 0..r {
                cache.insert((a, b, e), third_derivative(&f.phi, a, b, e));
            }
        }
    }
    for a in 0..r {
        for b in 0..r {
            for dd in 0..r {
                let t = tilde.get_mut(a, b, dd);
                for e in 0..r {
                    let gi = f.g_inv.get(e, dd);
                    if !gi.is_zero() {
                        t.add_assign_scaled(&cache[&(a, b, e)], gi);
                    }
                }
            }
        }
    }
    let mut rep = ValidationReport::new("wdvv");
    rep.absorb(check_associativity(&f.vars, &tilde));
    rep
}

/// Euler-field data and homogeneity checks.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerReport {
    pub weights: Vec<Scalar>,
    /// Eigenvalue of `[∂_a, E]` on each direction, with multiplicities.
    pub spectrum: Vec<(Scalar, usize)>,
    pub unit_eigenvalue: Scalar,
    /// Multiplicities recounted from `(p,q)` bidegrees, when available.
    pub bigraded_spectrum: Option<Vec<(Scalar, usize)>>,
    pub report: ValidationReport,
}

pub fn euler_analysis(f: &FrobeniusData) -> EulerReport {
    let mut rep = ValidationReport::new("euler");
    let r = f.rank();
    let w = &f.euler_weights;
    let half = |k: i64| frac(k, 2);
    for a in 0..r {
        let expected = half(-(f.delta_degree(a) as i64));
        if w[a] != expected {
            rep.violation("euler-weight", vec![a.to_string()], None, format_scalar(&w[a]), format_scalar(&expected));
        }
    }
    let n = f.n as i64;
    for a in 0..r {
        for b in 0..r {
            for c in 0..r {
                let (da, db, dc) = (f.delta_degree(a) as i64, f.delta_degree(b) as i64, f.delta_degree(c) as i64);
                let low = f.a.lowered(a, b, c, &f.g);
                let k = half(da + db + dc) + int(3 - n);
                compare_series(&mut rep, "homogeneity-lowered", &[a, b, c], &low.lie_derivative_euler(w), &low.scale(&k));
                let up = f.a.get(a, b, c);
                let k = half(da + db - dc) + int(1);
                compare_series(&mut rep, "homogeneity-raised", &[a, b, c], &up.lie_derivative_euler(w), &up.scale(&k));
            }
        }
    }
    let mut counts: BTreeMap<Scalar, usize> = BTreeMap::new();
    for x in w {
        *counts.entry(x.clone()).or_default() += 1;
    }
    let spectrum: Vec<_> = counts.into_iter().collect();
    let unit_eigenvalue = if r > 0 {
        euler_weight(&Monomial::var(0, r), w)
    } else {
        Scalar::zero()
    };
    if unit_eigenvalue != Scalar::one() {
        rep.violation("unit-eigenvalue", vec!["0".into()], None, format_scalar(&unit_eigenvalue), "1");
    }
    let bigraded_spectrum = if !f.bidegrees.is_empty() && f.bidegrees.iter().all(Option::is_some) {
        let mut counts: BTreeMap<Scalar, usize> = BTreeMap::new();
        let bd: Vec<(i64, i64)> = f.bidegrees.iter().map(|x| {
            let (p, q) = x.unwrap();
            (p as i64, q as i64)
        }).collect();
        let ds: std::collections::BTreeSet<i64> = bd.iter().map(|(p, q)| p + q).collect();
        for d in ds {
            // classes in H^q(Ω^{p'}) with p' = n - p and q - p' = d - n
            let mult = bd.iter().filter(|(p, q)| q - (n - p) == d - n).count();
            *counts.entry(int(1) - half(d)).or_default() += mult;
        }
        let out: Vec<_> = counts.into_iter().collect();
        if out != spectrum {
            rep.violation("bigraded-spectrum", vec![], None, render_spectrum(&out), render_spectrum(&spectrum));
        }
        Some(out)
    } else {
        None
    };
    EulerReport {
        weights: w.clone(),
        spectrum,
        unit_eigenvalue,
        bigraded_spectrum,
        report: rep,
    }
}

pub fn render_spectrum(s: &[(Scalar, usize)]) -> String {
    s.iter()
        .map(|(x, m)| format!("{} x{}", format_scalar(x), m))
        .collect::<Vec<_>>()
        .join(", ")
}
