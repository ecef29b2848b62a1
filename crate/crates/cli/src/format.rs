//! JSON file formats: algebra input files and Frobenius data files.
//! Rationals are strings (`"-3/4"`); every index is a basis name.

use std::collections::HashMap;

use bvfrob_core::algebra::{AlgebraData, ProductTerm};
use bvfrob_core::frobenius::{FrobeniusData, StructureConstants};
use bvfrob_core::linalg::Matrix;
use bvfrob_core::pivot::LowestIndexFirst;
use bvfrob_core::scalar::{format_scalar, parse_scalar, Scalar};
use bvfrob_core::series::{Monomial, ScalarSeries, Variables};
use bvfrob_core::{DgbvData, Error, OperatorEntry, Result};
use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisEntry {
    pub name: String,
    pub degree: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<i32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DgbvFile {
    pub format_version: u32,
    pub field: String,
    pub basis: Vec<BasisEntry>,
    pub unit: String,
    #[serde(default)]
    pub product: Vec<(String, String, String, String)>,
    #[serde(default)]
    pub dbar: Vec<(String, String, String)>,
    #[serde(default)]
    pub delta: Vec<(String, String, String)>,
    pub integral: Vec<(String, String)>,
    pub top_degree: i32,
}

fn parse_err(msg: String) -> Error {
    Error::Parse(msg)
}

/// Parses text, reporting JSON syntax errors with line and column.
pub fn parse_dgbv_text(text: &str) -> Result<DgbvFile> {
    serde_json::from_str(text).map_err(|e| {
        parse_err(format!("line {}, column {}: {}", e.line(), e.column(), e))
    })
}

pub fn serialize_dgbv(file: &DgbvFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("plain data serializes");
    s.push('\n');
    s
}

impl DgbvFile {
    pub fn to_data(&self) -> Result<DgbvData> {
        if self.format_version != FORMAT_VERSION {
            return Err(parse_err(format!(
                "format_version: expected {FORMAT_VERSION}, found {}",
                self.format_version
            )));
        }
        if self.field != "Q" {
            return Err(parse_err(format!("field: only \"Q\" is supported, found {:?}", self.field)));
        }
        let mut index = HashMap::new();
        for (i, b) in self.basis.iter().enumerate() {
            if index.insert(b.name.as_str(), i).is_some() {
                return Err(parse_err(format!("basis[{i}].name: duplicate name {:?}", b.name)));
            }
        }
        let lookup = |field: String, name: &str| -> Result<usize> {
            index
                .get(name)
                .copied()
                .ok_or_else(|| parse_err(format!("{field}: unknown basis name {name:?}")))
        };
        let rat = |field: String, s: &str| -> Result<Scalar> {
            parse_scalar(s).map_err(|e| parse_err(format!("{field}: {e}")))
        };
        let unit = lookup("unit".into(), &self.unit)?;
        let mut product = Vec::new();
        for (n, (i, j, k, c)) in self.product.iter().enumerate() {
            product.push(ProductTerm {
                i: lookup(format!("product[{n}][0]"), i)?,
                j: lookup(format!("product[{n}][1]"), j)?,
                k: lookup(format!("product[{n}][2]"), k)?,
                coeff: rat(format!("product[{n}][3]"), c)?,
            });
        }
        let ops = |what: &str, list: &[(String, String, String)]| -> Result<Vec<OperatorEntry>> {
            list.iter()
                .enumerate()
                .map(|(n, (f, t, c))| {
                    Ok(OperatorEntry {
                        from: lookup(format!("{what}[{n}][0]"), f)?,
                        to: lookup(format!("{what}[{n}][1]"), t)?,
                        coeff: rat(format!("{what}[{n}][2]"), c)?,
                    })
                })
                .collect()
        };
        let dbar = ops("dbar", &self.dbar)?;
        let delta = ops("delta", &self.delta)?;
        let mut integral = Vec::new();
        for (n, (x, c)) in self.integral.iter().enumerate() {
            integral.push((lookup(format!("integral[{n}][0]"), x)?, rat(format!("integral[{n}][1]"), c)?));
        }
        let mut bideg = Vec::new();
        for (i, b) in self.basis.iter().enumerate() {
            bideg.push(match (b.p, b.q) {
                (Some(p), Some(q)) => Some((p, q)),
                (None, None) => None,
                _ => return Err(parse_err(format!("basis[{i}]: p and q must be given together"))),
            });
        }
        let mut alg = AlgebraData::new(
            self.basis.iter().map(|b| b.name.clone()).collect(),
            self.basis.iter().map(|b| b.degree).collect(),
            product,
            unit,
        )?;
        if bideg.iter().any(Option::is_some) {
            alg = alg.with_bidegrees(bideg)?;
        }
        DgbvData::new(alg, &dbar, &delta, &integral, self.top_degree)
    }

    pub fn from_data(d: &DgbvData) -> DgbvFile {
        let alg = d.alg();
        let name = |i: usize| alg.name(i).to_string();
        let op = |entries: Vec<OperatorEntry>| {
            entries
                .into_iter()
                .map(|e| (name(e.from), name(e.to), format_scalar(&e.coeff)))
                .collect()
        };
        DgbvFile {
            format_version: FORMAT_VERSION,
            field: "Q".into(),
            basis: (0..alg.dim())
                .map(|i| BasisEntry {
                    name: name(i),
                    degree: alg.degree(i),
                    p: alg.bidegree(i).map(|b| b.0),
                    q: alg.bidegree(i).map(|b| b.1),
                })
                .collect(),
            unit: name(alg.unit()),
            product: alg
                .product_terms()
                .iter()
                .map(|t| (name(t.i), name(t.j), name(t.k), format_scalar(&t.coeff)))
                .collect(),
            dbar: op(d.dbar_entries()),
            delta: op(d.delta_entries()),
            integral: d
                .integral_vector()
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != bvfrob_core::scalar::zero())
                .map(|(i, c)| (name(i), format_scalar(c)))
                .collect(),
            top_degree: d.top_degree(),
        }
    }
}

/// Frobenius data for exchange with the axiom checker. Coordinates are
/// `t0, t1, ...`; series are lists of `[monomial, rational]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FrobeniusFile {
    pub format_version: u32,
    pub variable_degrees: Vec<i32>,
    /// Word length through which the structure constants are valid.
    pub order: usize,
    pub n: i32,
    pub metric: Vec<Vec<String>>,
    pub structure_constants: Vec<StructureEntry>,
    pub potential: Vec<(String, String)>,
    pub potential_order: usize,
    pub euler_weights: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bidegrees: Vec<Option<(i32, i32)>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureEntry {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub series: Vec<(String, String)>,
}

fn series_terms(s: &ScalarSeries) -> Vec<(String, String)> {
    s.iter().map(|(m, c)| (m.render(), format_scalar(c))).collect()
}

fn parse_series(
    field: &str,
    terms: &[(String, String)],
    vars: &std::sync::Arc<Variables>,
    order: usize,
) -> Result<ScalarSeries> {
    let mut s = ScalarSeries::zero(vars.clone(), order);
    for (n, (m, c)) in terms.iter().enumerate() {
        let m = Monomial::parse(m, vars).map_err(|e| parse_err(format!("{field}[{n}][0]: {e}")))?;
        if m.word_len() > order {
            return Err(parse_err(format!("{field}[{n}][0]: {} exceeds order {order}", m.render())));
        }
        let c = parse_scalar(c).map_err(|e| parse_err(format!("{field}[{n}][1]: {e}")))?;
        s.add_term(m, c);
    }
    Ok(s)
}

impl FrobeniusFile {
    pub fn from_data(f: &FrobeniusData) -> Self {
        let r = f.rank();
        let mut sc = Vec::new();
        for a in 0..r {
            for b in 0..r {
                for c in 0..r {
                    let s = f.a.get(a, b, c);
                    if !s.is_zero() {
                        sc.push(StructureEntry { a, b, c, series: series_terms(s) });
                    }
                }
            }
        }
        FrobeniusFile {
            format_version: FORMAT_VERSION,
            variable_degrees: f.vars.degrees().to_vec(),
            order: f.a.order(),
            n: f.n,
            metric: (0..r)
                .map(|a| (0..r).map(|b| format_scalar(f.g.get(a, b))).collect())
                .collect(),
            structure_constants: sc,
            potential: series_terms(&f.phi),
            potential_order: f.phi.order(),
            euler_weights: f.euler_weights.iter().map(format_scalar).collect(),
            bidegrees: if f.bidegrees.iter().all(Option::is_some) { f.bidegrees.clone() } else { Vec::new() },
        }
    }

    pub fn to_data(&self) -> Result<FrobeniusData> {
        if self.format_version != FORMAT_VERSION {
            return Err(parse_err(format!("format_version: expected {FORMAT_VERSION}, found {}", self.format_version)));
        }
        let r = self.variable_degrees.len();
        let vars = Variables::new(self.variable_degrees.clone());
        if self.metric.len() != r || self.metric.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidInput(format!("metric must be {r}x{r}")));
        }
        let mut rows = Vec::new();
        for (i, row) in self.metric.iter().enumerate() {
            rows.push(
                row.iter()
                    .enumerate()
                    .map(|(j, x)| parse_scalar(x).map_err(|e| parse_err(format!("metric[{i}][{j}]: {e}"))))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        let g = Matrix::from_rows(rows);
        let g_inv = g
            .inverse(&LowestIndexFirst)
            .ok_or_else(|| Error::InvalidInput("metric is degenerate".into()))?;
        let mut a = StructureConstants::zero(vars.clone(), self.order);
        for (n, e) in self.structure_constants.iter().enumerate() {
            if e.a >= r || e.b >= r || e.c >= r {
                return Err(Error::InvalidInput(format!("structure_constants[{n}]: index out of range")));
            }
            let s = parse_series(&format!("structure_constants[{n}].series"), &e.series, &vars, self.order)?;
            a.get_mut(e.a, e.b, e.c).add_assign_scaled(&s, &bvfrob_core::scalar::one());
        }
        let phi = parse_series("potential", &self.potential, &vars, self.potential_order)?;
        if self.euler_weights.len() != r {
            return Err(Error::InvalidInput(format!("euler_weights must have {r} entries")));
        }
        let euler_weights = self
            .euler_weights
            .iter()
            .enumerate()
            .map(|(i, x)| parse_scalar(x).map_err(|e| parse_err(format!("euler_weights[{i}]: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        let bidegrees = if self.bidegrees.is_empty() {
            vec![None; r]
        } else if self.bidegrees.len() == r {
            self.bidegrees.clone()
        } else {
            return Err(Error::InvalidInput(format!("bidegrees must have {r} entries")));
        };
        Ok(FrobeniusData { vars, a, g, g_inv, phi, euler_weights, n: self.n, bidegrees })
    }
}

pub fn parse_frobenius_text(text: &str) -> Result<FrobeniusFile> {
    serde_json::from_str(text)
        .map_err(|e| parse_err(format!("line {}, column {}: {}", e.line(), e.column(), e)))
}

pub fn serialize_frobenius(file: &FrobeniusFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("plain data serializes");
    s.push('\n');
    s
}
