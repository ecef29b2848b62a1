use std::sync::Arc;

use bvfrob_core::algebra::Element;
use bvfrob_core::fixtures::{exterior_algebra, FixtureFactory, FixtureParams, SquareFixture};
use bvfrob_core::mc::formula_bracket;
use bvfrob_core::scalar::{int, sign, Scalar};
use bvfrob_core::series::{ElementSeries, Monomial, ScalarSeries, Variables};
use bvfrob_core::{AlgebraData, DgbvData};
use proptest::prelude::*;

const ORDER: usize = 4;

fn vars() -> Arc<Variables> {
    // even, odd, even, odd, even
    Variables::new(vec![2, 1, 0, -1, -2])
}

fn monomial() -> impl Strategy<Value = Monomial> {
    (0u32..3, 0u32..2, 0u32..3, 0u32..2, 0u32..2).prop_filter_map("too long", |(a, b, c, d, e)| {
        let m = Monomial::from_exponents(vec![a, b, c, d, e], &vars()).unwrap();
        (m.word_len() <= ORDER).then_some(m)
    })
}

fn scalar_series() -> impl Strategy<Value = ScalarSeries> {
    prop::collection::vec((monomial(), -3i64..4), 0..5).prop_map(|terms| {
        let mut s = ScalarSeries::zero(vars(), ORDER);
        for (m, c) in terms {
            s.add_term(m, int(c));
        }
        s
    })
}

fn element(dim: usize) -> impl Strategy<Value = Element> {
    prop::collection::vec((0..dim, -2i64..3), 1..3).prop_map(|t| {
        let mut e = Element::zero();
        for (i, c) in t {
            e.add_term(i, int(c));
        }
        e
    })
}

fn element_series(dim: usize) -> impl Strategy<Value = ElementSeries> {
    prop::collection::vec((monomial(), element(dim)), 0..4).prop_map(|terms| {
        let mut s = ElementSeries::zero(vars(), ORDER);
        for (m, x) in terms {
            s.add_term(m, x);
        }
        s
    })
}

/// Splits a scalar series by the parity of the total degree.
fn scalar_parts(f: &ScalarSeries) -> [ScalarSeries; 2] {
    let mut out = [ScalarSeries::zero(vars(), f.order()), ScalarSeries::zero(vars(), f.order())];
    for (m, c) in f.iter() {
        out[m.is_odd(&vars()) as usize].add_term(m.clone(), c.clone());
    }
    out
}

fn element_parts(f: &ElementSeries, alg: &AlgebraData) -> [ElementSeries; 2] {
    let mut out = [ElementSeries::zero(vars(), f.order()), ElementSeries::zero(vars(), f.order())];
    for (m, x) in f.iter() {
        for (i, c) in x.iter() {
            let p = (m.is_odd(&vars()) as i32 + alg.degree(i)).rem_euclid(2) as usize;
            out[p].add_term(m.clone(), Element::term(i, c.clone()));
        }
    }
    out
}

fn square() -> DgbvData {
    SquareFixture.build(&FixtureParams::default()).unwrap()
}

proptest! {
    #[test]
    fn scalar_product_is_supercommutative(f in scalar_series(), g in scalar_series()) {
        let (fp, gp) = (scalar_parts(&f), scalar_parts(&g));
        for i in 0..2 {
            for j in 0..2 {
                let lhs = fp[i].mul(&gp[j]).unwrap();
                let rhs = gp[j].mul(&fp[i]).unwrap().scale(&sign((i * j) as i64));
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn scalar_product_is_associative(f in scalar_series(), g in scalar_series(), h in scalar_series()) {
        let lhs = f.mul(&g).unwrap().mul(&h).unwrap();
        let rhs = f.mul(&g.mul(&h).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn partials_graded_commute(f in scalar_series(), a in 0usize..5, b in 0usize..5) {
        let v = vars();
        let lhs = f.partial_derivative(b).partial_derivative(a);
        let rhs = f.partial_derivative(a).partial_derivative(b)
            .scale(&sign((v.is_odd(a) && v.is_odd(b)) as i64));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn scalar_leibniz(f in scalar_series(), g in scalar_series(), a in 0usize..5) {
        let v = vars();
        let lhs = f.mul(&g).unwrap().partial_derivative(a);
        let mut rhs = f.partial_derivative(a).mul(&g).unwrap();
        for (p, fp) in scalar_parts(&f).iter().enumerate() {
            let s = sign((v.is_odd(a) as usize * p) as i64);
            rhs.add_assign_scaled(&fp.mul(&g.partial_derivative(a)).unwrap(), &s);
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn truncation_is_coherent(f in scalar_series(), g in scalar_series(), m in 0usize..ORDER) {
        let big = f.mul(&g).unwrap().truncate(m);
        let small = f.truncate(m).mul(&g.truncate(m)).unwrap();
        prop_assert_eq!(big, small);
    }

    #[test]
    fn element_product_is_supercommutative(f in element_series(4), g in element_series(4)) {
        let d = exterior_algebra(1).unwrap();
        let alg = d.alg();
        let (fp, gp) = (element_parts(&f, alg), element_parts(&g, alg));
        for i in 0..2 {
            for j in 0..2 {
                let lhs = fp[i].mul(&gp[j], alg).unwrap();
                let rhs = gp[j].mul(&fp[i], alg).unwrap().scale(&sign((i * j) as i64));
                prop_assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn element_product_is_associative(f in element_series(8), g in element_series(8), h in element_series(8)) {
        let d = square();
        let alg = d.alg();
        let lhs = f.mul(&g, alg).unwrap().mul(&h, alg).unwrap();
        let rhs = f.mul(&g.mul(&h, alg).unwrap(), alg).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn element_leibniz(f in element_series(4), g in element_series(4), a in 0usize..5) {
        let d = exterior_algebra(1).unwrap();
        let alg = d.alg();
        let v = vars();
        let lhs = f.mul(&g, alg).unwrap().partial_derivative(a);
        let mut rhs = f.partial_derivative(a).mul(&g, alg).unwrap();
        for (p, fp) in element_parts(&f, alg).iter().enumerate() {
            let s = sign((v.is_odd(a) as usize * p) as i64);
            rhs.add_assign_scaled(&fp.mul(&g.partial_derivative(a), alg).unwrap(), &s);
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn series_dbar_is_an_odd_derivation(f in element_series(8), g in element_series(8)) {
        let d = square();
        let alg = d.alg();
        let lhs = f.mul(&g, alg).unwrap().dbar(&d);
        let mut rhs = f.dbar(&d).mul(&g, alg).unwrap();
        for (p, fp) in element_parts(&f, alg).iter().enumerate() {
            rhs.add_assign_scaled(&fp.mul(&g.dbar(&d), alg).unwrap(), &sign(p as i64));
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn termwise_bracket_matches_formula(f in element_series(8), g in element_series(8)) {
        let d = square();
        prop_assert_eq!(f.bracket(&g, &d).unwrap(), formula_bracket(&f, &g, &d));
    }

    #[test]
    fn monomial_render_parses_back(m in monomial()) {
        prop_assert_eq!(Monomial::parse(&m.render(), &vars()).unwrap(), m);
    }
}

#[test]
fn multiplying_by_one_is_identity() {
    let one = ScalarSeries::constant(vars(), ORDER, int(1));
    let mut f = ScalarSeries::zero(vars(), ORDER);
    f.add_term(Monomial::from_exponents(vec![1, 1, 0, 1, 0], &vars()).unwrap(), int(5));
    assert_eq!(f.mul(&one).unwrap(), f);
    assert_eq!(one.mul(&f).unwrap(), f);
}

#[test]
fn repeated_odd_variable_vanishes() {
    let d = exterior_algebra(1).unwrap();
    let mut f = ElementSeries::zero(vars(), ORDER);
    f.add_term(Monomial::var(1, 5), Element::basis(1));
    let mut g = ElementSeries::zero(vars(), ORDER);
    g.add_term(Monomial::var(1, 5), Element::basis(2));
    assert!(f.mul(&g, d.alg()).unwrap().is_zero());
}

#[test]
fn derivative_of_a_coordinate_is_one() {
    for a in 0..5 {
        let mut f = ScalarSeries::zero(vars(), ORDER);
        f.add_term(Monomial::var(a, 5), int(1));
        assert_eq!(f.partial_derivative(a), ScalarSeries::constant(vars(), ORDER - 1, int(1)));
    }
}

#[test]
fn derivative_past_another_odd_coordinate() {
    // ∂_3(t1 t3) = -t1 and ∂_1(t3 t1) = ∂_1(-t1 t3) = -t3
    let v = vars();
    let m = Monomial::from_exponents(vec![0, 1, 0, 1, 0], &v).unwrap();
    let mut f = ScalarSeries::zero(v.clone(), ORDER);
    f.add_term(m, int(1));
    let mut e = ScalarSeries::zero(v.clone(), ORDER - 1);
    e.add_term(Monomial::var(1, 5), int(-1));
    assert_eq!(f.partial_derivative(3), e);
    let mut e = ScalarSeries::zero(v, ORDER - 1);
    e.add_term(Monomial::var(3, 5), int(1));
    assert_eq!(f.partial_derivative(1), e);
}

/// Product of two linear series over the exterior algebra, against a
/// brute-force expansion with the signs written out by hand.
#[test]
fn linear_series_product_matches_expansion() {
    let d = exterior_algebra(1).unwrap();
    let alg = d.alg();
    let v = Variables::new(alg.degrees().iter().map(|x| 2 - x).collect());
    let n = v.count();
    let mut f = ElementSeries::zero(v.clone(), 3);
    for i in 0..n {
        f.add_term(Monomial::var(i, n), Element::basis(i));
    }
    let prod = f.mul(&f, alg).unwrap();
    let mut expect = ElementSeries::zero(v.clone(), 3);
    for i in 0..n {
        for j in 0..n {
            // t^i x_i t^j x_j = (-1)^{|x_i||t^j|} t^i t^j x_i x_j
            let Some((neg, m)) = Monomial::var(i, n).mul(&Monomial::var(j, n), &v) else {
                continue;
            };
            let s = (alg.degree(i) * v.degree(j)).rem_euclid(2) as i64 + neg as i64;
            let p = alg.mul(&Element::basis(i), &Element::basis(j));
            expect.add_scaled_term(m, &p, &sign(s));
        }
    }
    assert_eq!(prod, expect);
}

#[test]
fn euler_derivative_examples() {
    let v = Variables::new(vec![2, 0, -2]);
    let w: Vec<Scalar> = v.degrees().iter().map(|d| bvfrob_core::scalar::frac(*d as i64, 2)).collect();
    let c = ScalarSeries::constant(v.clone(), 3, int(7));
    assert!(c.lie_derivative_euler(&w).is_zero());
    let mut t0 = ScalarSeries::zero(v.clone(), 3);
    t0.add_term(Monomial::var(0, 3), int(1));
    assert_eq!(t0.lie_derivative_euler(&w), t0);
    let mut mixed = ScalarSeries::zero(v.clone(), 3);
    mixed.add_term(Monomial::from_exponents(vec![2, 1, 0], &v).unwrap(), int(1));
    mixed.add_term(Monomial::from_exponents(vec![1, 0, 1], &v).unwrap(), int(1));
    let mut expect = ScalarSeries::zero(v.clone(), 3);
    expect.add_term(Monomial::from_exponents(vec![2, 1, 0], &v).unwrap(), int(2));
    assert_eq!(mixed.lie_derivative_euler(&w), expect);
}
