//! Truncated formal power series in graded supercommuting variables.
//!
//! Terms are written with the variables to the left of the coefficient,
//! `t^M x`. Odd variables square to zero and are stored in increasing index
//! order; moving an odd variable past another odd variable, or past an
//! odd-degree coefficient, flips the sign. Partial derivatives act from the
//! left: `∂_a(t^b t^a) = (-1)^{|a||b|} t^b`. Odd operators on coefficients
//! (`∂̄`, `Δ`) pass the variables first: `∂̄(t^M x) = (-1)^{|M|} t^M ∂̄x`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::Debug;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::{AlgebraData, Element};
use crate::bv::DgbvData;
use crate::error::{Error, Result};
use crate::scalar::{format_scalar, int, Scalar};

/// Degrees of the coordinates `t^a`. Index 0 is the identity direction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Variables {
    degrees: Vec<i32>,
}

impl Variables {
    pub fn new(degrees: Vec<i32>) -> Arc<Self> {
        Arc::new(Variables { degrees })
    }

    pub fn count(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self, a: usize) -> i32 {
        self.degrees[a]
    }

    pub fn degrees(&self) -> &[i32] {
        &self.degrees
    }

    pub fn is_odd(&self, a: usize) -> bool {
        self.degrees[a].rem_euclid(2) == 1
    }
}

/// Exponent vector; odd variables have exponent 0 or 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
}

impl Ord for Monomial {
    /// Graded lexicographic: word length first, then higher powers of
    /// lower-index variables first.
    fn cmp(&self, other: &Self) -> Ordering {
        self.word_len()
            .cmp(&other.word_len())
            .then_with(|| other.exps.cmp(&self.exps))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: vec![0; nvars],
        }
    }

    pub fn var(a: usize, nvars: usize) -> Self {
        let mut m = Self::one(nvars);
        m.exps[a] = 1;
        m
    }

    /// Builds a monomial from exponents, rejecting squares of odd variables.
    pub fn from_exponents(exps: Vec<u32>, vars: &Variables) -> Option<Self> {
        if exps.len() != vars.count() {
            return None;
        }
        if exps
            .iter()
            .enumerate()
            .any(|(a, &e)| vars.is_odd(a) && e > 1)
        {
            return None;
        }
        Some(Monomial { exps })
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn exponent(&self, a: usize) -> u32 {
        self.exps[a]
    }

    pub fn word_len(&self) -> usize {
        self.exps.iter().map(|&e| e as usize).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exps.iter().all(|&e| e == 0)
    }

    pub fn degree(&self, vars: &Variables) -> i64 {
        self.exps
            .iter()
            .enumerate()
            .map(|(a, &e)| e as i64 * vars.degree(a) as i64)
            .sum()
    }

    pub fn is_odd(&self, vars: &Variables) -> bool {
        self.exps
            .iter()
            .enumerate()
            .filter(|(a, _)| vars.is_odd(*a))
            .map(|(_, &e)| e)
            .sum::<u32>()
            % 2
            == 1
    }

    /// `t^M t^N = ±t^{M+N}`; `None` if an odd variable would repeat.
    /// The flag is true when the sign is negative.
    pub fn mul(&self, other: &Monomial, vars: &Variables) -> Option<(bool, Monomial)> {
        let mut swaps = 0u32;
        let mut odd_after = 0u32;
        let mut exps = Vec::with_capacity(self.exps.len());
        // walk from the highest index down, counting odd variables of `self`
        // that an odd variable of `other` must cross
        for a in (0..self.exps.len()).rev() {
            let (x, y) = (self.exps[a], other.exps[a]);
            if vars.is_odd(a) {
                if x + y > 1 {
                    return None;
                }
                if y == 1 {
                    swaps += odd_after;
                }
                if x == 1 {
                    odd_after += 1;
                }
            }
            exps.push(x + y);
        }
        exps.reverse();
        Some((swaps % 2 == 1, Monomial { exps }))
    }

    /// Left derivative `∂_a t^M = c t^{M-a}`; returns `(c, t^{M-a})`.
    pub fn derivative(&self, a: usize, vars: &Variables) -> Option<(Scalar, Monomial)> {
        let e = self.exps[a];
        if e == 0 {
            return None;
        }
        let mut exps = self.exps.clone();
        exps[a] -= 1;
        let c = if vars.is_odd(a) {
            let before = (0..a)
                .filter(|&b| vars.is_odd(b))
                .map(|b| self.exps[b])
                .sum::<u32>();
            if before % 2 == 1 {
                -Scalar::one()
            } else {
                Scalar::one()
            }
        } else {
            int(e as i64)
        };
        Some((c, Monomial { exps }))
    }

    /// Canonical rendering, e.g. `t0^2 t3`; the empty monomial is `1`.
    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(a, &e)| {
                if e == 1 {
                    format!("t{a}")
                } else {
                    format!("t{a}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join(" ")
        }
    }

    /// Parses the canonical rendering.
    pub fn parse(s: &str, vars: &Variables) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed monomial {s:?}"));
        let mut exps = vec![0u32; vars.count()];
        let s = s.trim();
        if s != "1" {
            for tok in s.split_whitespace() {
                let tok = tok.strip_prefix('t').ok_or_else(bad)?;
                let (a, e) = match tok.split_once('^') {
                    Some((a, e)) => (a, e.parse::<u32>().map_err(|_| bad())?),
                    None => (tok, 1),
                };
                let a: usize = a.parse().map_err(|_| bad())?;
                if a >= vars.count() || e == 0 {
                    return Err(bad());
                }
                exps[a] += e;
            }
        }
        Monomial::from_exponents(exps, vars).ok_or_else(bad)
    }
}

/// Coefficient ring of a series.
pub trait Coefficient: Clone + PartialEq + Debug {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add_scaled(&mut self, other: &Self, c: &Scalar);
    fn scaled(&self, c: &Scalar) -> Self;
}

impl Coefficient for Scalar {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add_scaled(&mut self, other: &Self, c: &Scalar) {
        *self += other * c;
    }
    fn scaled(&self, c: &Scalar) -> Self {
        self * c
    }
}

impl Coefficient for Element {
    fn zero() -> Self {
        Element::zero()
    }
    fn is_zero(&self) -> bool {
        Element::is_zero(self)
    }
    fn add_scaled(&mut self, other: &Self, c: &Scalar) {
        Element::add_scaled(self, other, c)
    }
    fn scaled(&self, c: &Scalar) -> Self {
        self.scale(c)
    }
}

/// A power series truncated at word length `order`.
#[derive(Debug, Clone, PartialEq)]
pub struct Series<C> {
    vars: Arc<Variables>,
    order: usize,
    terms: BTreeMap<Monomial, C>,
}

pub type ScalarSeries = Series<Scalar>;
pub type ElementSeries = Series<Element>;

impl<C: Coefficient> Series<C> {
    pub fn zero(vars: Arc<Variables>, order: usize) -> Self {
        Series {
            vars,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Arc<Variables>, order: usize, c: C) -> Self {
        let mut s = Self::zero(vars, order);
        let one = Monomial::one(s.vars.count());
        s.add_term(one, c);
        s
    }

    pub fn vars(&self) -> &Arc<Variables> {
        &self.vars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Adds `c t^M`; silently dropped beyond the truncation order.
    pub fn add_term(&mut self, m: Monomial, c: C) {
        self.add_scaled_term(m, &c, &Scalar::one());
    }

    pub fn add_scaled_term(&mut self, m: Monomial, c: &C, s: &Scalar) {
        if m.word_len() > self.order || c.is_zero() || Zero::is_zero(s) {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.scaled(s));
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_scaled(c, s);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn get(&self, m: &Monomial) -> C {
        self.terms.get(m).cloned().unwrap_or_else(C::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &C)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_vars(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::InvalidInput("series over different variables".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, &Scalar::one())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, &-Scalar::one())
    }

    fn combine(&self, other: &Self, s: &Scalar) -> Self {
        assert_eq!(self.vars, other.vars, "series over different variables");
        let mut out = self.truncate(self.order.min(other.order));
        for (m, c) in &other.terms {
            out.add_scaled_term(m.clone(), c, s);
        }
        out
    }

    pub fn add_assign_scaled(&mut self, other: &Self, s: &Scalar) {
        for (m, c) in &other.terms {
            self.add_scaled_term(m.clone(), c, s);
        }
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero(self.vars.clone(), self.order);
        for (m, c) in &self.terms {
            out.add_scaled_term(m.clone(), c, s);
        }
        out
    }

    pub fn truncate(&self, order: usize) -> Self {
        Series {
            vars: self.vars.clone(),
            order: order.min(self.order),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.word_len() <= order)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Keeps only terms of word length exactly `k`.
    pub fn homogeneous_part(&self, k: usize) -> Self {
        Series {
            vars: self.vars.clone(),
            order: self.order,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.word_len() == k)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Same series with a lowered truncation order; useful to compare with
    /// a series that is only valid to that order.
    pub fn with_order(&self, order: usize) -> Self {
        let mut s = self.truncate(order);
        s.order = order;
        s
    }

    /// Left partial derivative. The result is valid to order `N - 1`.
    pub fn partial_derivative(&self, a: usize) -> Self {
        let mut out = Self::zero(self.vars.clone(), self.order.saturating_sub(1));
        for (m, c) in &self.terms {
            if let Some((s, rest)) = m.derivative(a, &self.vars) {
                out.add_scaled_term(rest, c, &s);
            }
        }
        out
    }

    pub fn map_coefficients<D: Coefficient>(&self, f: impl Fn(&Monomial, &C) -> D) -> Series<D> {
        let mut out = Series::zero(self.vars.clone(), self.order);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), f(m, c));
        }
        out
    }
}

impl ScalarSeries {
    /// Product in the supercommutative ring of scalar series.
    pub fn mul(&self, other: &ScalarSeries) -> Result<ScalarSeries> {
        self.check_vars(other)?;
        let order = self.order.min(other.order);
        let mut out = ScalarSeries::zero(self.vars.clone(), order);
        for (m, x) in &self.terms {
            for (n, y) in &other.terms {
                if m.word_len() + n.word_len() > order {
                    continue;
                }
                if let Some((neg, mn)) = m.mul(n, &self.vars) {
                    let c = x * y;
                    out.add_term(mn, if neg { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Scalar series times an element series: `(q t^M)(t^N x) = q t^M t^N x`.
    pub fn mul_element(&self, other: &ElementSeries) -> Result<ElementSeries> {
        if self.vars != other.vars {
            return Err(Error::InvalidInput("series over different variables".into()));
        }
        let order = self.order.min(other.order);
        let mut out = ElementSeries::zero(self.vars.clone(), order);
        for (m, q) in &self.terms {
            for (n, x) in &other.terms {
                if m.word_len() + n.word_len() > order {
                    continue;
                }
                if let Some((neg, mn)) = m.mul(n, &self.vars) {
                    out.add_scaled_term(mn, x, &if neg { -q.clone() } else { q.clone() });
                }
            }
        }
        Ok(out)
    }

    /// Euler operator `Σ_a w_a t^a ∂_a` acting on functions.
    pub fn lie_derivative_euler(&self, weights: &[Scalar]) -> ScalarSeries {
        let mut out = ScalarSeries::zero(self.vars.clone(), self.order);
        for (m, c) in &self.terms {
            let w = euler_weight(m, weights);
            out.add_term(m.clone(), c * &w);
        }
        out
    }

    /// The homogeneous total degree, if all terms share one.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|m| m.degree(&self.vars));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn render(&self) -> String {
        render_terms(self.terms.iter().map(|(m, c)| (m, format_scalar(c), c)))
    }
}

/// `Σ_a w_a · exp_a(M)`: the Euler eigenvalue of the monomial.
pub fn euler_weight(m: &Monomial, weights: &[Scalar]) -> Scalar {
    m.exponents()
        .iter()
        .zip(weights)
        .filter(|(&e, _)| e > 0)
        .fold(<Scalar as Zero>::zero(), |acc, (&e, w)| acc + w * int(e as i64))
}

fn render_terms<'a>(terms: impl Iterator<Item = (&'a Monomial, String, &'a Scalar)>) -> String {
    let mut out = String::new();
    for (m, _, c) in terms {
        let neg = crate::scalar::is_negative(c);
        let abs = if neg { -c.clone() } else { c.clone() };
        if out.is_empty() {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if m.is_one() {
            out.push_str(&format_scalar(&abs));
        } else {
            if !abs.is_one() {
                out.push_str(&format_scalar(&abs));
                out.push('*');
            }
            out.push_str(&m.render());
        }
    }
    if out.is_empty() {
        "0".into()
    } else {
        out
    }
}

impl ElementSeries {
    /// `(t^M x)(t^N y) = (-1)^{|x||N|} t^M t^N (xy)`.
    pub fn mul(&self, other: &ElementSeries, alg: &AlgebraData) -> Result<ElementSeries> {
        self.check_vars(other)?;
        let order = self.order.min(other.order);
        let mut out = ElementSeries::zero(self.vars.clone(), order);
        for (m, x) in &self.terms {
            for (n, y) in &other.terms {
                if m.word_len() + n.word_len() > order {
                    continue;
                }
                let Some((neg, mn)) = m.mul(n, &self.vars) else {
                    continue;
                };
                let x = if n.is_odd(&self.vars) {
                    odd_twist(x, alg)
                } else {
                    x.clone()
                };
                let p = alg.mul(&x, y);
                out.add_scaled_term(mn, &p, &if neg { -Scalar::one() } else { Scalar::one() });
            }
        }
        Ok(out)
    }

    /// Applies an odd coefficient operator with the Koszul sign `(-1)^{|M|}`.
    pub fn apply_odd(&self, op: impl Fn(&Element) -> Element) -> ElementSeries {
        let mut out = ElementSeries::zero(self.vars.clone(), self.order);
        for (m, x) in &self.terms {
            let s = if m.is_odd(&self.vars) {
                -Scalar::one()
            } else {
                Scalar::one()
            };
            out.add_scaled_term(m.clone(), &op(x), &s);
        }
        out
    }

    pub fn dbar(&self, d: &DgbvData) -> ElementSeries {
        self.apply_odd(|x| d.dbar(x))
    }

    pub fn delta(&self, d: &DgbvData) -> ElementSeries {
        self.apply_odd(|x| d.delta(x))
    }

    /// Termwise trace `∫(t^M x) = t^M ∫x`.
    pub fn integrate(&self, d: &DgbvData) -> ScalarSeries {
        let mut out = ScalarSeries::zero(self.vars.clone(), self.order);
        for (m, x) in &self.terms {
            out.add_term(m.clone(), d.integrate(x));
        }
        out
    }

    /// Series bracket computed termwise: `[t^M x, t^N y] = (-1)^{|N|(|x|+1)} t^M t^N [x,y]`.
    pub fn bracket(&self, other: &ElementSeries, d: &DgbvData) -> Result<ElementSeries> {
        self.check_vars(other)?;
        let alg = d.alg();
        let order = self.order.min(other.order);
        let mut out = ElementSeries::zero(self.vars.clone(), order);
        for (m, x) in &self.terms {
            for (n, y) in &other.terms {
                if m.word_len() + n.word_len() > order {
                    continue;
                }
                let Some((neg, mn)) = m.mul(n, &self.vars) else {
                    continue;
                };
                // (-1)^{|N|(|x|+1)}: for odd N, flip the even-degree part of x
                let x = if n.is_odd(&self.vars) {
                    -&odd_twist(x, alg)
                } else {
                    x.clone()
                };
                let b = d.br(&x, y);
                out.add_scaled_term(mn, &b, &if neg { -Scalar::one() } else { Scalar::one() });
            }
        }
        Ok(out)
    }

    /// Total degrees `|M| + |x|` occurring in the series.
    pub fn total_degrees(&self, alg: &AlgebraData) -> Vec<i64> {
        let mut out: Vec<i64> = self
            .terms
            .iter()
            .flat_map(|(m, x)| {
                let dm = m.degree(&self.vars);
                x.iter().map(move |(i, _)| dm + alg.degree(i) as i64)
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn is_homogeneous_of(&self, degree: i64, alg: &AlgebraData) -> bool {
        self.total_degrees(alg).iter().all(|&d| d == degree)
    }

    pub fn render(&self, alg: &AlgebraData) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        self.terms
            .iter()
            .map(|(m, x)| format!("({})*{}", alg.render(x), m.render()))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Negates the odd-degree components of `x`: `x ↦ (-1)^{|x|} x` componentwise.
pub fn odd_twist(x: &Element, alg: &AlgebraData) -> Element {
    let mut out = Element::zero();
    for (i, c) in x.iter() {
        if alg.degree(i).rem_euclid(2) == 1 {
            out.add_term(i, -c.clone());
        } else {
            out.add_term(i, c.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vars() -> Arc<Variables> {
        // t0 even, t1 odd, t2 odd, t3 even
        Variables::new(vec![2, 1, -1, 0])
    }

    fn mono(e: [u32; 4]) -> Monomial {
        Monomial::from_exponents(e.to_vec(), &vars()).unwrap()
    }

    #[test]
    fn odd_variables_anticommute() {
        let v = vars();
        let (neg, m) = mono([0, 0, 1, 0]).mul(&mono([0, 1, 0, 0]), &v).unwrap();
        assert!(neg);
        assert_eq!(m, mono([0, 1, 1, 0]));
        assert!(mono([0, 1, 0, 0]).mul(&mono([0, 1, 0, 0]), &v).is_none());
        let (neg, _) = mono([1, 0, 0, 2]).mul(&mono([0, 1, 0, 1]), &v).unwrap();
        assert!(!neg);
    }

    #[test]
    fn derivative_signs() {
        let v = vars();
        let x = ScalarSeries::constant(v.clone(), 4, int(1));
        assert_eq!(
            ScalarSeries::zero(v.clone(), 4).partial_derivative(0),
            ScalarSeries::zero(v.clone(), 3)
        );
        let mut t1t2 = ScalarSeries::zero(v.clone(), 4);
        t1t2.add_term(mono([0, 1, 1, 0]), int(1));
        // ∂_2 (t1 t2) = -t1 since t1 is odd
        let mut expect = ScalarSeries::zero(v.clone(), 3);
        expect.add_term(mono([0, 1, 0, 0]), int(-1));
        assert_eq!(t1t2.partial_derivative(2), expect);
        let mut t3 = ScalarSeries::zero(v.clone(), 4);
        t3.add_term(mono([0, 0, 0, 1]), int(1));
        assert_eq!(t3.partial_derivative(3), x.with_order(3));
    }

    #[test]
    fn monomial_render_roundtrip() {
        let v = vars();
        let m = mono([2, 1, 0, 3]);
        assert_eq!(m.render(), "t0^2 t1 t3^3");
        assert_eq!(Monomial::parse(&m.render(), &v).unwrap(), m);
        assert_eq!(Monomial::parse("1", &v).unwrap(), Monomial::one(4));
        assert!(Monomial::parse("t1^2", &v).is_err());
        assert!(Monomial::parse("t9", &v).is_err());
    }

    #[test]
    fn ordering_is_graded() {
        let mut ms = vec![mono([0, 0, 0, 2]), mono([1, 0, 0, 0]), mono([0, 0, 0, 0]), mono([1, 0, 0, 1])];
        ms.sort();
        assert_eq!(
            ms.iter().map(Monomial::render).collect::<Vec<_>>(),
            vec!["1", "t0", "t0 t3", "t3^2"]
        );
    }

    #[test]
    fn euler_weights_sum_per_variable() {
        let v = vars();
        let mut f = ScalarSeries::zero(v.clone(), 4);
        f.add_term(mono([1, 0, 1, 2]), int(3));
        f.add_term(Monomial::one(4), int(5));
        let w = vec![int(1), crate::scalar::frac(1, 2), crate::scalar::frac(-1, 2), int(0)];
        let mut expect = ScalarSeries::zero(v, 4);
        expect.add_term(mono([1, 0, 1, 2]), int(3) * crate::scalar::frac(1, 2));
        assert_eq!(f.lie_derivative_euler(&w), expect);
    }
}
