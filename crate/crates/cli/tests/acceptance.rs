//! Acceptance suite: one line per criterion, exact comparisons throughout.
//! Runs without the libtest harness so every line is printed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use bvfrob_cli::format::{parse_dgbv_text, serialize_dgbv, DgbvFile};
use bvfrob_cli::{cmd_run, Format, Input, RunOptions};
use bvfrob_core::algebra::{validate_algebra, Element};
use bvfrob_core::axioms::check_axioms;
use bvfrob_core::bv::{check_ddbar_lemma, tensor_product, validate_dgbv, validate_integral};
use bvfrob_core::fixtures::{exterior_algebra, FixtureParams, FixtureRegistry};
use bvfrob_core::frobenius::{
    check_deformed_product_identity, check_potentiality, check_wdvv, connection_flatness, euler_analysis, frobenius_data, metric,
    structure_constants, third_derivative, FrobeniusData,
};
use bvfrob_core::hodge::DgbvContext;
use bvfrob_core::linalg::{Matrix, Rref};
use bvfrob_core::mc::{mc_residual, solve_mc, verify_mc, McSolution};
use bvfrob_core::pivot::{default_rule, HighestIndexFirst, LowestIndexFirst, PivotRegistry};
use bvfrob_core::scalar::{frac, int, sign, Scalar};
use bvfrob_core::series::{Monomial, ScalarSeries};
use bvfrob_core::{DgbvData, ValidationReport};

type Outcome = Result<String, String>;

fn fixture(name: &str, m: Option<usize>) -> DgbvData {
    FixtureRegistry::with_builtin().get(name).unwrap().build(&FixtureParams { m }).unwrap()
}

fn square_trivial(m: usize) -> DgbvData {
    tensor_product(&fixture("square", None), &exterior_algebra(m).unwrap()).unwrap()
}

/// The valid fixtures the pipeline criteria run on.
fn pipeline_fixtures() -> Vec<(&'static str, DgbvData)> {
    vec![
        ("unit", fixture("unit", None)),
        ("trivial(m=1)", fixture("trivial", Some(1))),
        ("trivial(m=2)", fixture("trivial", Some(2))),
        ("square", fixture("square", None)),
        ("square*trivial(m=1)", square_trivial(1)),
    ]
}

fn solve(d: &DgbvData, n: usize) -> (DgbvContext, McSolution, FrobeniusData) {
    let c = DgbvContext::new(d.clone()).unwrap();
    let s = solve_mc(&c, n).unwrap();
    let f = frobenius_data(&s, &c).unwrap();
    (c, s, f)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn passed(name: &str, rep: &ValidationReport) -> Result<(), String> {
    ensure(rep.passed(), || format!("{name}: {}", rep.to_string().lines().take(4).collect::<Vec<_>>().join(" | ")))
}

fn corrupt(base: &DgbvData, edit: impl FnOnce(&mut DgbvFile)) -> DgbvData {
    let mut f = DgbvFile::from_data(base);
    edit(&mut f);
    parse_dgbv_text(&serialize_dgbv(&f)).unwrap().to_data().unwrap()
}

fn all_validation(d: &DgbvData) -> Vec<ValidationReport> {
    vec![validate_algebra(d.alg()), validate_dgbv(d), validate_integral(d), check_ddbar_lemma(d)]
}

fn criterion_1() -> Outcome {
    let t = Instant::now();
    let mut valid = pipeline_fixtures();
    valid.push(("square*trivial(m=2)", square_trivial(2)));
    for (name, d) in &valid {
        for rep in all_validation(d) {
            passed(name, &rep)?;
        }
    }
    let square = fixture("square", None);
    let ext = exterior_algebra(1).unwrap();
    let cases: Vec<(&str, DgbvData, &str, Vec<&str>)> = vec![
        ("flipped sign", fixture("flipped", None), "supercommutativity", vec!["x", "y"]),
        ("order-3 operator", fixture("order3", None), "bracket-leibniz", vec![]),
        ("ddbar-lemma", fixture("zigzag", None), "lemma-lhs-not-in-image", vec![]),
        ("odd unit", corrupt(&ext, |f| f.unit = "v1".into()), "unit-degree", vec![]),
        (
            "integral off top degree",
            corrupt(&square, |f| f.integral = vec![("b".into(), "1".into())]),
            "integral-support",
            vec!["b"],
        ),
        ("zero integral", corrupt(&square, |f| f.integral.clear()), "nondegeneracy", vec![]),
        (
            "operators commute",
            corrupt(&square, |f| f.delta.retain(|e| e.0 != "b")),
            "anticommutation",
            vec!["a"],
        ),
    ];
    for (label, d, check, idx) in &cases {
        let hits: Vec<_> = all_validation(d)
            .into_iter()
            .flat_map(|r| r.violations().to_vec())
            .filter(|v| v.check == *check)
            .collect();
        ensure(!hits.is_empty(), || format!("{label}: no {check} violation"))?;
        ensure(idx.is_empty() || hits.iter().any(|v| v.indices == *idx), || {
            format!("{label}: {check} reported at {:?}, expected {idx:?}", hits[0].indices)
        })?;
    }
    let el = t.elapsed();
    ensure(el < Duration::from_secs(5), || format!("took {el:?}"))?;
    Ok(format!("{} fixtures valid, {} corruptions located, {el:.2?}", valid.len(), cases.len()))
}

fn criterion_2() -> Outcome {
    let mut runs: Vec<(&str, DgbvData, usize)> = pipeline_fixtures().into_iter().map(|(n, d)| (n, d, 4)).collect();
    runs.push(("square", fixture("square", None), 6));
    runs.push(("trivial(m=2)", fixture("trivial", Some(2)), 6));
    let mut slowest = Duration::ZERO;
    for (name, d, n) in runs {
        let t = Instant::now();
        let c = DgbvContext::new(d).unwrap();
        let s = solve_mc(&c, n).map_err(|e| format!("{name}: {e}"))?;
        ensure(mc_residual(&s.gamma_hat, c.data()).is_zero(), || format!("{name}: nonzero residual"))?;
        passed(name, &verify_mc(&s, &c))?;
        // the normalization conditions, restated directly
        let lin = s.linear_part();
        for (m, x) in s.gamma_hat.iter() {
            match m.word_len() {
                1 => ensure(*x == lin.get(m), || format!("{name}: linear term at {}", m.render()))?,
                0 => return Err(format!("{name}: constant term")),
                _ => ensure(c.in_image_of_delta(x) && m.exponent(0) == 0, || {
                    format!("{name}: coefficient at {} not in Im delta", m.render())
                })?,
            }
        }
        let unit = bvfrob_core::series::ElementSeries::constant(s.vars().clone(), n - 1, c.data().alg().unit_element());
        ensure(s.gamma_hat.partial_derivative(0) == unit, || format!("{name}: d_0 gamma != 1"))?;
        slowest = slowest.max(t.elapsed());
    }
    ensure(slowest < Duration::from_secs(60), || format!("slowest run {slowest:?}"))?;
    Ok(format!("residual zero on 7 runs, slowest {slowest:.2?}"))
}

fn criterion_3() -> Outcome {
    let mut terms = 0;
    for (name, d) in pipeline_fixtures() {
        let c = DgbvContext::new(d).unwrap();
        let s = solve_mc(&c, 4).unwrap();
        let r = s.vars().count();
        for a in 0..r {
            for b in 0..r {
                let da = s.gamma_hat.partial_derivative(a);
                let db = s.gamma_hat.partial_derivative(b);
                let series = da.mul(&db, c.data().alg()).unwrap().integrate(c.data());
                for (m, q) in series.iter() {
                    ensure(m.is_one(), || format!("{name}: g_({a},{b}) has {q} at {}", m.render()))?;
                    terms += 1;
                }
            }
        }
        metric(&s, c.data()).map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(format!("{terms} nonzero pairings, all constant"))
}

fn criterion_4() -> Outcome {
    for (name, d) in pipeline_fixtures() {
        let (_, _, f) = solve(&d, 4);
        for a in 0..f.rank() {
            for b in 0..f.rank() {
                let expect = ScalarSeries::constant(f.vars.clone(), f.a.order(), int((a == b) as i64));
                ensure(*f.a.get(0, a, b) == expect, || format!("{name}: A^{b}_(0,{a}) = {}", f.a.get(0, a, b).render()))?;
            }
        }
    }
    Ok("identity direction acts as the unit on every fixture".into())
}

fn criterion_5() -> Outcome {
    let mut runs: Vec<(&str, DgbvData, usize)> = pipeline_fixtures().into_iter().map(|(n, d)| (n, d, 4)).collect();
    runs.push(("square", fixture("square", None), 6));
    for (name, d, n) in runs {
        let (_, _, f) = solve(&d, n);
        passed(name, &check_axioms(&f, n).unwrap())?;
        passed(name, &check_wdvv(&f))?;
    }
    Ok("commutativity, associativity, invariance, identity, potentiality and WDVV via the potential".into())
}

fn criterion_6() -> Outcome {
    let mut compared = 0;
    for (name, d) in pipeline_fixtures().into_iter().chain([("square", fixture("square", None))]) {
        let (_, _, f) = solve(&d, if name == "square" { 6 } else { 4 });
        let r = f.rank();
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    let lhs = f.a.lowered(a, b, c, &f.g);
                    let rhs = third_derivative(&f.phi, a, b, c);
                    let order = lhs.order().min(rhs.order());
                    ensure(lhs.with_order(order) == rhs.with_order(order), || {
                        format!("{name}: A_({a},{b},{c}) != d^3 Phi")
                    })?;
                    compared += 1;
                }
            }
        }
        passed(name, &check_potentiality(&f))?;
    }
    Ok(format!("{compared} index triples agree"))
}

fn criterion_7() -> Outcome {
    for (name, d) in pipeline_fixtures() {
        let (c, s, f) = solve(&d, 4);
        passed(name, &check_deformed_product_identity(&s, &f, c.data()))?;
        passed(name, &connection_flatness(&f))?;
    }
    Ok("deformed-product identity and flatness hold per order".into())
}

fn criterion_8() -> Outcome {
    let mut bigraded = 0;
    for (name, d) in pipeline_fixtures() {
        let (c, s, f) = solve(&d, 4);
        let e = euler_analysis(&f);
        passed(name, &e.report)?;
        ensure(e.unit_eigenvalue == int(1), || format!("{name}: unit eigenvalue {}", e.unit_eigenvalue))?;
        // eigenvalue 1 - d/2 per harmonic class of degree d
        let mut hist = std::collections::BTreeMap::<Scalar, usize>::new();
        for h in &s.harmonic {
            let deg = c.data().alg().homogeneous_degree(h).unwrap() as i64;
            *hist.entry(int(1) - frac(deg, 2)).or_default() += 1;
        }
        ensure(e.spectrum == hist.into_iter().collect::<Vec<_>>(), || format!("{name}: spectrum"))?;
        if let Some(b) = &e.bigraded_spectrum {
            ensure(*b == e.spectrum, || format!("{name}: bigraded spectrum differs"))?;
            bigraded += 1;
        }
    }
    ensure(bigraded >= 4, || format!("only {bigraded} annotated fixtures"))?;
    Ok(format!("homogeneity exact; spectrum matches on {bigraded} bigraded fixtures"))
}

fn criterion_9() -> Outcome {
    for name in ["square", "trivial"] {
        let d = fixture(name, None);
        let (_, _, f) = solve(&d, 4);
        for c in [int(1), int(4), frac(-2, 3)] {
            let (_, _, g) = solve(&d.scale_integral(&c).unwrap(), 4);
            ensure(g.a == f.a, || format!("{name}: A changed under scale {c}"))?;
            for a in 0..f.rank() {
                for b in 0..f.rank() {
                    ensure(*g.g.get(a, b) == f.g.get(a, b) * &c, || format!("{name}: g_({a},{b}) under scale {c}"))?;
                }
            }
        }
    }
    Ok("A invariant, g scaled by c for c in {1, 4, -2/3}".into())
}

fn criterion_10() -> Outcome {
    let d = fixture("trivial", Some(2));
    let (c, s, f) = solve(&d, 4);
    ensure(s.gamma_hat == s.linear_part(), || "gamma not linear".into())?;
    ensure(s.alpha.is_zero(), || "alpha nonzero".into())?;
    let dim = d.dim();
    let h = &s.harmonic;
    let cols: Vec<_> = h.iter().map(|x| x.to_dense(dim)).collect();
    let coords = Rref::new(&Matrix::from_columns(dim, &cols), &LowestIndexFirst);
    let r = h.len();
    for a in 0..r {
        for b in 0..r {
            let y = coords.solve(&c.data().mul(&h[a], &h[b]).to_dense(dim)).ok_or("product leaves harmonics")?;
            for cc in 0..r {
                let expect = ScalarSeries::constant(f.vars.clone(), f.a.order(), y[cc].clone());
                ensure(*f.a.get(a, b, cc) == expect, || format!("A^{cc}_({a},{b})"))?;
            }
        }
    }
    // Φ = ⅙ Σ ∫(t^a γ_a)(t^b γ_b)(t^c γ_c), signs written out
    let v = f.vars.clone();
    let mut phi = ScalarSeries::zero(v.clone(), 4);
    let deg = |x: &Element| c.data().alg().homogeneous_degree(x).unwrap() as i64;
    for a in 0..r {
        for b in 0..r {
            for e in 0..r {
                let Some((n1, ab)) = Monomial::var(a, r).mul(&Monomial::var(b, r), &v) else { continue };
                let Some((n2, abe)) = ab.mul(&Monomial::var(e, r), &v) else { continue };
                let swaps = deg(&h[a]) * v.degree(b) as i64 + (deg(&h[a]) + deg(&h[b])) * v.degree(e) as i64;
                let q = c.data().integrate(&c.data().mul(&c.data().mul(&h[a], &h[b]), &h[e]));
                phi.add_term(abe, q * sign(swaps + n1 as i64 + n2 as i64) * frac(1, 6));
            }
        }
    }
    ensure(phi == f.phi, || format!("Phi = {}, expected {}", f.phi.render(), phi.render()))?;
    Ok(format!("{} cubic terms, {}^3 constants match", phi.len(), r))
}

fn criterion_11() -> Outcome {
    let d = fixture("square", None);
    let text = serialize_dgbv(&DgbvFile::from_data(&d));
    let input = Input { bytes: text.clone().into_bytes(), data: d.clone() };
    let opts = RunOptions { order: 5, pivot: default_rule(), format: Format::Full };
    let a = cmd_run(&input, &opts).unwrap().output.text;
    let b = cmd_run(&input, &opts).unwrap().output.text;
    ensure(a == b, || "reports differ".into())?;
    let pivots = PivotRegistry::with_builtin();
    ensure(pivots.names().len() >= 2, || "fewer than two pivot rules".into())?;
    for (name, d) in pipeline_fixtures() {
        let c = DgbvContext::new(d).unwrap();
        let s = solve_mc(&c, 4).unwrap();
        let lo = structure_constants(&s, c.data(), &LowestIndexFirst).unwrap();
        let hi = structure_constants(&s, c.data(), &HighestIndexFirst).unwrap();
        ensure(lo == hi, || format!("{name}: pivot rules disagree"))?;
    }
    Ok(format!("{} report bytes identical; lowest/highest pivots agree", a.len()))
}

fn criterion_12() -> Outcome {
    let sq = fixture("square", None);
    let tr = exterior_algebra(1).unwrap();
    let d = tensor_product(&sq, &tr).unwrap();
    let hs = DgbvContext::new(sq).unwrap().harmonic().len();
    let ht = DgbvContext::new(tr).unwrap().harmonic().len();
    let text = serialize_dgbv(&DgbvFile::from_data(&d));
    let input = Input { bytes: text.into_bytes(), data: d };
    let r = cmd_run(&input, &RunOptions { order: 4, pivot: default_rule(), format: Format::Summary }).unwrap();
    ensure(r.output.passed, || r.output.text.clone())?;
    let f = r.frobenius.unwrap();
    ensure(f.rank() == hs * ht, || format!("harmonic dimension {} != {hs} * {ht}", f.rank()))?;
    Ok(format!("full pipeline passes; harmonic dimension {} = {hs} * {ht}", f.rank()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("dGBV axiom suite and located corruptions", criterion_1),
        ("Maurer-Cartan solution and normalization", criterion_2),
        ("metric is constant", criterion_3),
        ("identity direction", criterion_4),
        ("Frobenius axioms and WDVV", criterion_5),
        ("third derivatives of the potential", criterion_6),
        ("deformed-product identity and flatness", criterion_7),
        ("Euler homogeneity and spectrum", criterion_8),
        ("rescaling the trace", criterion_9),
        ("closed forms on the exterior algebra", criterion_10),
        ("determinism", criterion_11),
        ("tensor product", criterion_12),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS {title}: {detail} [{:.2?}]", i + 1, t.elapsed()),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL {title}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
