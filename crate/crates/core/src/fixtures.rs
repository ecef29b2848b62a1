//! Built-in example algebras, selectable by name through a registry.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{AlgebraData, Bidegree, ProductTerm};
use crate::bv::{DgbvData, OperatorEntry};
use crate::error::{Error, Result};
use crate::scalar::{int, Scalar};

/// Parameters a fixture may consult. Unused fields are ignored.
#[derive(Debug, Clone, Default)]
pub struct FixtureParams {
    /// Half the number of generators of the exterior algebra fixture.
    pub m: Option<usize>,
}

pub trait FixtureFactory: Send + Sync {
    fn name(&self) -> &'static str;
    fn description(&self) -> &'static str;
    /// Whether the fixture is expected to pass validation.
    fn valid(&self) -> bool {
        true
    }
    fn build(&self, params: &FixtureParams) -> Result<DgbvData>;
}

pub struct FixtureRegistry {
    factories: BTreeMap<&'static str, Arc<dyn FixtureFactory>>,
}

impl FixtureRegistry {
    pub fn empty() -> Self {
        FixtureRegistry {
            factories: BTreeMap::new(),
        }
    }

    pub fn with_builtin() -> Self {
        let mut r = Self::empty();
        r.register(Arc::new(UnitFixture));
        r.register(Arc::new(TrivialFixture));
        r.register(Arc::new(SquareFixture));
        r.register(Arc::new(Order3Fixture));
        r.register(Arc::new(ZigzagFixture));
        r.register(Arc::new(FlippedFixture));
        r
    }

    pub fn register(&mut self, f: Arc<dyn FixtureFactory>) {
        self.factories.insert(f.name(), f);
    }

    pub fn get(&self, name: &str) -> Result<Arc<dyn FixtureFactory>> {
        self.factories.get(name).cloned().ok_or_else(|| Error::Unknown {
            kind: "fixture",
            name: name.into(),
            available: self.names().join(", "),
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.factories.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<dyn FixtureFactory>> {
        self.factories.values()
    }
}

impl Default for FixtureRegistry {
    fn default() -> Self {
        Self::with_builtin()
    }
}

/// Small helper: named basis, products between non-unit elements; unit
/// products are added automatically.
struct Builder {
    names: Vec<String>,
    degrees: Vec<i32>,
    bideg: Vec<Option<Bidegree>>,
    product: Vec<ProductTerm>,
    dbar: Vec<OperatorEntry>,
    delta: Vec<OperatorEntry>,
    integral: Vec<(usize, Scalar)>,
}

impl Builder {
    fn new(basis: &[(&str, i32, Option<Bidegree>)]) -> Self {
        let mut b = Builder {
            names: basis.iter().map(|x| x.0.to_string()).collect(),
            degrees: basis.iter().map(|x| x.1).collect(),
            bideg: basis.iter().map(|x| x.2).collect(),
            product: Vec::new(),
            dbar: Vec::new(),
            delta: Vec::new(),
            integral: Vec::new(),
        };
        for i in 0..basis.len() {
            b.product.push(ProductTerm { i: 0, j: i, k: i, coeff: int(1) });
            if i != 0 {
                b.product.push(ProductTerm { i, j: 0, k: i, coeff: int(1) });
            }
        }
        b
    }

    fn idx(&self, n: &str) -> usize {
        self.names.iter().position(|x| x == n).expect("fixture name")
    }

    fn mul(mut self, x: &str, y: &str, z: &str, c: i64) -> Self {
        let (i, j, k) = (self.idx(x), self.idx(y), self.idx(z));
        self.product.push(ProductTerm { i, j, k, coeff: int(c) });
        self
    }

    fn dbar(mut self, x: &str, y: &str, c: i64) -> Self {
        let (from, to) = (self.idx(x), self.idx(y));
        self.dbar.push(OperatorEntry { from, to, coeff: int(c) });
        self
    }

    fn delta(mut self, x: &str, y: &str, c: i64) -> Self {
        let (from, to) = (self.idx(x), self.idx(y));
        self.delta.push(OperatorEntry { from, to, coeff: int(c) });
        self
    }

    fn integral(mut self, x: &str, c: i64) -> Self {
        let i = self.idx(x);
        self.integral.push((i, int(c)));
        self
    }

    fn build(self, top: i32) -> Result<DgbvData> {
        let mut alg = AlgebraData::new(self.names, self.degrees, self.product, 0)?;
        if self.bideg.iter().all(Option::is_some) {
            alg = alg.with_bidegrees(self.bideg)?;
        }
        DgbvData::new(alg, &self.dbar, &self.delta, &self.integral, top)
    }
}

/// The ground field: one basis vector, zero operators.
pub struct UnitFixture;

impl FixtureFactory for UnitFixture {
    fn name(&self) -> &'static str {
        "unit"
    }
    fn description(&self) -> &'static str {
        "the field Q with zero operators"
    }
    fn build(&self, _: &FixtureParams) -> Result<DgbvData> {
        Builder::new(&[("1", 0, Some((0, 0)))]).integral("1", 1).build(0)
    }
}

/// Exterior algebra on `2m` odd generators `v1..vm, w1..wm`, with zero
/// operators and the top monomial integrating to one.
pub struct TrivialFixture;

pub fn exterior_algebra(m: usize) -> Result<DgbvData> {
    if m == 0 || m > 6 {
        return Err(Error::InvalidInput(format!("m must be in 1..=6, got {m}")));
    }
    let r = 2 * m;
    let gens: Vec<String> = (1..=m)
        .map(|i| format!("v{i}"))
        .chain((1..=m).map(|i| format!("w{i}")))
        .collect();
    let mut masks: Vec<u32> = (0..1u32 << r).collect();
    masks.sort_by_key(|s| (s.count_ones(), std::cmp::Reverse(s.reverse_bits())));
    let index: BTreeMap<u32, usize> = masks.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let name = |s: u32| {
        if s == 0 {
            "1".to_string()
        } else {
            (0..r).filter(|b| s >> b & 1 == 1).map(|b| gens[b].as_str()).collect()
        }
    };
    let v_mask = (1u32 << m) - 1;
    let names = masks.iter().map(|&s| name(s)).collect();
    let degrees = masks.iter().map(|s| s.count_ones() as i32).collect();
    let bideg = masks
        .iter()
        .map(|&s| Some(((s & v_mask).count_ones() as i32, (s & !v_mask).count_ones() as i32)))
        .collect();
    let mut product = Vec::new();
    for &s in &masks {
        for &t in &masks {
            if s & t != 0 {
                continue;
            }
            // inversions: generator in s with a larger index than one in t
            let inv: u32 = (0..r)
                .filter(|b| t >> b & 1 == 1)
                .map(|b| (s >> (b + 1)).count_ones())
                .sum();
            product.push(ProductTerm {
                i: index[&s],
                j: index[&t],
                k: index[&(s | t)],
                coeff: int(if inv % 2 == 0 { 1 } else { -1 }),
            });
        }
    }
    let alg = AlgebraData::new(names, degrees, product, 0)?.with_bidegrees(bideg)?;
    let top = index[&((1u32 << r) - 1)];
    DgbvData::new(alg, &[], &[], &[(top, int(1))], r as i32)
}

impl FixtureFactory for TrivialFixture {
    fn name(&self) -> &'static str {
        "trivial"
    }
    fn description(&self) -> &'static str {
        "exterior algebra on 2m odd generators (default m = 2), zero operators"
    }
    fn build(&self, params: &FixtureParams) -> Result<DgbvData> {
        exterior_algebra(params.m.unwrap_or(2))
    }
}

/// Eight-dimensional algebra with a nonzero bracket `[g,g] = e`; its
/// potential has a quartic correction in `t1`.
pub struct SquareFixture;

impl FixtureFactory for SquareFixture {
    fn name(&self) -> &'static str {
        "square"
    }
    fn description(&self) -> &'static str {
        "8-dimensional algebra with a nonlinear Maurer-Cartan solution"
    }
    fn build(&self, _: &FixtureParams) -> Result<DgbvData> {
        Builder::new(&[
            ("1", 0, Some((0, 0))),
            ("g", 2, Some((1, 1))),
            ("c", 2, Some((1, 1))),
            ("a", 3, Some((2, 1))),
            ("e", 3, Some((2, 1))),
            ("b", 4, Some((2, 2))),
            ("h", 4, Some((2, 2))),
            ("w", 6, Some((3, 3))),
        ])
        .mul("g", "g", "b", 1)
        .mul("g", "c", "h", -1)
        .mul("c", "g", "h", -1)
        .mul("c", "c", "b", 1)
        .mul("g", "h", "w", 1)
        .mul("h", "g", "w", 1)
        .mul("a", "e", "w", 1)
        .mul("e", "a", "w", -1)
        .mul("c", "b", "w", -1)
        .mul("b", "c", "w", -1)
        .dbar("a", "b", 1)
        .dbar("c", "e", -1)
        .delta("a", "c", 1)
        .delta("b", "e", 1)
        .integral("w", 1)
        .build(6)
    }
}

/// Negative control: `Δ` is a third-order operator on `Λ(x,y,z)`.
pub struct Order3Fixture;

impl FixtureFactory for Order3Fixture {
    fn name(&self) -> &'static str {
        "order3"
    }
    fn description(&self) -> &'static str {
        "invalid: BV operator of order three"
    }
    fn valid(&self) -> bool {
        false
    }
    fn build(&self, _: &FixtureParams) -> Result<DgbvData> {
        Builder::new(&[
            ("1", 0, None),
            ("x", 1, None),
            ("y", 1, None),
            ("z", 1, None),
            ("xy", 2, None),
            ("xz", 2, None),
            ("yz", 2, None),
            ("xyz", 3, None),
        ])
        .mul("x", "y", "xy", 1)
        .mul("y", "x", "xy", -1)
        .mul("x", "z", "xz", 1)
        .mul("z", "x", "xz", -1)
        .mul("y", "z", "yz", 1)
        .mul("z", "y", "yz", -1)
        .mul("x", "yz", "xyz", 1)
        .mul("yz", "x", "xyz", 1)
        .mul("y", "xz", "xyz", -1)
        .mul("xz", "y", "xyz", -1)
        .mul("z", "xy", "xyz", 1)
        .mul("xy", "z", "xyz", 1)
        .delta("xyz", "xy", 1)
        .integral("xyz", 1)
        .build(3)
    }
}

/// Negative control: a differential whose cohomology is not seen by `Δ`,
/// so the ∂∂̄-lemma fails.
pub struct ZigzagFixture;

impl FixtureFactory for ZigzagFixture {
    fn name(&self) -> &'static str {
        "zigzag"
    }
    fn description(&self) -> &'static str {
        "invalid: dbar a = b with zero delta violates the ddbar-lemma"
    }
    fn valid(&self) -> bool {
        false
    }
    fn build(&self, _: &FixtureParams) -> Result<DgbvData> {
        Builder::new(&[("1", 0, None), ("a", 1, None), ("b", 2, None)])
            .dbar("a", "b", 1)
            .integral("b", 1)
            .build(2)
    }
}

/// Negative control: `Λ(x,y)` with `yx = +xy`.
pub struct FlippedFixture;

impl FixtureFactory for FlippedFixture {
    fn name(&self) -> &'static str {
        "flipped"
    }
    fn description(&self) -> &'static str {
        "invalid: exterior algebra with one product sign flipped"
    }
    fn valid(&self) -> bool {
        false
    }
    fn build(&self, _: &FixtureParams) -> Result<DgbvData> {
        Builder::new(&[("1", 0, None), ("x", 1, None), ("y", 1, None), ("xy", 2, None)])
            .mul("x", "y", "xy", 1)
            .mul("y", "x", "xy", 1)
            .integral("xy", 1)
            .build(2)
    }
}
