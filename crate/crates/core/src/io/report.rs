//! Certificate reports: a verdict, facts, and witnesses that a short
//! independent verifier can re-check.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::linalg::{Field, Matrix, Scalar};
use crate::ring::StructureRing;

pub const ENGINE: &str = concat!("moncat ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Positive,
    Negative,
}

/// Structure constants of a commutative ring, scalars in machine form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub field: String,
    /// `products[i][j]` = coordinates of `b_i b_j`.
    pub products: Vec<Vec<Vec<String>>>,
    pub unit: Vec<String>,
}

impl Table {
    /// From a multiplication matrix `A ⊗ A -> A` and the unit column.
    pub fn from_mult(mult: &Matrix, unit: &[Scalar]) -> Table {
        let n = unit.len();
        Table {
            field: mult.field().to_string(),
            products: (0..n)
                .map(|i| (0..n).map(|j| strings(&mult.column(i * n + j))).collect())
                .collect(),
            unit: strings(unit),
        }
    }

    pub fn of(r: &StructureRing) -> Table {
        Table {
            field: r.field().to_string(),
            products: r.product_table().iter().map(|row| row.iter().map(|v| strings(v)).collect()).collect(),
            unit: strings(&r.one()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// `Σ coefficients[i] · elements[i] = 1`.
    UnitIdeal {
        table: Table,
        elements: Vec<Vec<String>>,
        coefficients: Vec<Vec<String>>,
    },
    /// The span of `ideal` contains the generators, is closed under
    /// multiplication and misses 1.
    ProperIdeal {
        table: Table,
        generators: Vec<Vec<String>>,
        ideal: Vec<Vec<String>>,
    },
    /// `x y = 1`.
    Inverse { table: Table, x: Vec<String>, y: Vec<String> },
    /// `x, y ≠ 0` and `x y = 0`.
    ZeroDivisor { table: Table, x: Vec<String>, y: Vec<String> },
    /// `x ≠ 0` and `x^power = 0`.
    Nilpotent { table: Table, x: Vec<String>, power: usize },
    /// `matrix` (rows) is a unital multiplicative map `source -> target`.
    RingMap {
        source: Table,
        target: Table,
        matrix: Vec<Vec<String>>,
    },
    /// A chain of dimensions constant from `index` on.
    Stabilization { dims: Vec<usize>, index: usize },
    /// The table at `site` is associative, commutative and unital.
    Algebra { site: String, table: Table },
    /// Aggregate of a comparison battery; only `discrepancies = 0` passes.
    Tally { checks: usize, discrepancies: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub command: String,
    pub verdict: Verdict,
    pub facts: BTreeMap<String, String>,
    pub witnesses: Vec<Witness>,
    pub engine: String,
    pub digest: String,
}

impl CertificateReport {
    pub fn new(command: String, verdict: Verdict, digest: String) -> CertificateReport {
        CertificateReport {
            command,
            verdict,
            facts: BTreeMap::new(),
            witnesses: Vec::new(),
            engine: ENGINE.to_string(),
            digest,
        }
    }

    pub fn fact(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.facts.insert(key.to_string(), value.to_string());
        self
    }

    pub fn witness(&mut self, w: Witness) -> &mut Self {
        self.witnesses.push(w);
        self
    }

    pub fn to_machine(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_machine(text: &str) -> Result<CertificateReport, String> {
        serde_json::from_str(text).map_err(|e| e.to_string())
    }

    /// `key = value` lines in sorted key order, mirroring the machine form.
    pub fn to_text(&self) -> String {
        let value = serde_json::to_value(self).expect("reports serialize");
        let mut out = String::new();
        flatten("", &value, &mut out);
        out
    }
}

pub fn digest(text: &str) -> String {
    let hash = Sha256::digest(text.as_bytes());
    let mut out = String::from("sha256:");
    for b in hash.iter() {
        let _ = write!(out, "{b:02x}");
    }
    out
}

pub fn strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(Scalar::to_machine_string).collect()
}

pub fn matrix_rows(m: &Matrix) -> Vec<Vec<String>> {
    (0..m.rows()).map(|r| strings(m.row(r))).collect()
}

fn text_scalar(s: &str) -> &str {
    s.strip_suffix("/1").unwrap_or(s)
}

fn inline(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(text_scalar(s).to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Null => Some("-".into()),
        Value::Array(items) => {
            if items.iter().all(|i| !i.is_array() && !i.is_object()) {
                let parts: Vec<String> = items.iter().filter_map(inline).collect();
                Some(format!("[{}]", parts.join(" ")))
            } else if items.iter().all(|i| matches!(i, Value::Array(r) if r.iter().all(|x| !x.is_array() && !x.is_object()))) {
                let rows: Vec<String> = items
                    .iter()
                    .map(|r| {
                        let inner = inline(r).expect("flat row");
                        inner[1..inner.len() - 1].to_string()
                    })
                    .collect();
                Some(format!("[{}]", rows.join("; ")))
            } else {
                None
            }
        }
        Value::Object(_) => None,
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut String) {
    if let Some(s) = inline(v) {
        let _ = writeln!(out, "{prefix} = {s}");
        return;
    }
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(&join(k), x, out);
            }
        }
        Value::Array(items) => {
            for (i, x) in items.iter().enumerate() {
                flatten(&join(&i.to_string()), x, out);
            }
        }
        _ => unreachable!("scalars are inline"),
    }
}

/// Standalone re-check of every witness in a report. Uses nothing but field
/// arithmetic on the numbers written in the report.
pub fn verify_report(r: &CertificateReport) -> Result<(), String> {
    if r.verdict == Verdict::Positive && r.witnesses.is_empty() {
        return Err("positive verdict without a witness".into());
    }
    for (i, w) in r.witnesses.iter().enumerate() {
        verify_witness(w).map_err(|e| format!("witness {i}: {e}"))?;
    }
    Ok(())
}

struct Ring {
    field: Field,
    products: Vec<Vec<Vec<Scalar>>>,
    unit: Vec<Scalar>,
}

impl Ring {
    fn load(t: &Table) -> Result<Ring, String> {
        let field: Field = t.field.parse().map_err(|e: crate::Error| e.to_string())?;
        let n = t.unit.len();
        let products = t
            .products
            .iter()
            .map(|row| row.iter().map(|v| vector(field, v, n)).collect())
            .collect::<Result<Vec<Vec<_>>, _>>()?;
        if products.len() != n || products.iter().any(|r: &Vec<_>| r.len() != n) {
            return Err("product table has the wrong size".into());
        }
        Ok(Ring {
            field,
            products,
            unit: vector(field, &t.unit, n)?,
        })
    }

    fn dim(&self) -> usize {
        self.unit.len()
    }

    fn vec(&self, v: &[String]) -> Result<Vec<Scalar>, String> {
        vector(self.field, v, self.dim())
    }

    fn mul(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.dim()];
        for (i, a) in x.iter().enumerate() {
            for (j, b) in y.iter().enumerate() {
                let ab = a * b;
                for (o, c) in out.iter_mut().zip(&self.products[i][j]) {
                    *o = &*o + &(&ab * c);
                }
            }
        }
        out
    }

    fn basis(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![self.field.zero(); self.dim()];
        v[i] = self.field.one();
        v
    }
}

fn vector(field: Field, v: &[String], n: usize) -> Result<Vec<Scalar>, String> {
    if v.len() != n {
        return Err(format!("vector of length {} where {n} was expected", v.len()));
    }
    v.iter().map(|s| field.parse_scalar(s).map_err(|e| e.to_string())).collect()
}

fn is_zero(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

fn in_span(cols: &[Vec<Scalar>], field: Field, n: usize, v: &[Scalar]) -> bool {
    if cols.is_empty() {
        return is_zero(v);
    }
    Matrix::from_columns(field, n, cols).solve_vec(v).is_some()
}

fn verify_witness(w: &Witness) -> Result<(), String> {
    match w {
        Witness::UnitIdeal { table, elements, coefficients } => {
            let r = Ring::load(table)?;
            if elements.len() != coefficients.len() {
                return Err("one coefficient per element is required".into());
            }
            let mut sum = vec![r.field.zero(); r.dim()];
            for (t, s) in elements.iter().zip(coefficients) {
                let p = r.mul(&r.vec(s)?, &r.vec(t)?);
                sum = sum.iter().zip(&p).map(|(a, b)| a + b).collect();
            }
            (sum == r.unit).then_some(()).ok_or("coefficients do not sum to 1".into())
        }
        Witness::ProperIdeal { table, generators, ideal } => {
            let r = Ring::load(table)?;
            let cols = ideal.iter().map(|c| r.vec(c)).collect::<Result<Vec<_>, _>>()?;
            for g in generators {
                if !in_span(&cols, r.field, r.dim(), &r.vec(g)?) {
                    return Err("a generator lies outside the ideal".into());
                }
            }
            for c in &cols {
                for i in 0..r.dim() {
                    if !in_span(&cols, r.field, r.dim(), &r.mul(&r.basis(i), c)) {
                        return Err("the span is not closed under multiplication".into());
                    }
                }
            }
            (!in_span(&cols, r.field, r.dim(), &r.unit)).then_some(()).ok_or("the ideal contains 1".into())
        }
        Witness::Inverse { table, x, y } => {
            let r = Ring::load(table)?;
            (r.mul(&r.vec(x)?, &r.vec(y)?) == r.unit).then_some(()).ok_or("x y ≠ 1".into())
        }
        Witness::ZeroDivisor { table, x, y } => {
            let r = Ring::load(table)?;
            let (x, y) = (r.vec(x)?, r.vec(y)?);
            if is_zero(&x) || is_zero(&y) {
                return Err("a factor is zero".into());
            }
            is_zero(&r.mul(&x, &y)).then_some(()).ok_or("x y ≠ 0".into())
        }
        Witness::Nilpotent { table, x, power } => {
            let r = Ring::load(table)?;
            let x = r.vec(x)?;
            if is_zero(&x) {
                return Err("x is zero".into());
            }
            let p = (0..*power).fold(r.unit.clone(), |acc, _| r.mul(&acc, &x));
            is_zero(&p).then_some(()).ok_or("x^power ≠ 0".into())
        }
        Witness::RingMap { source, target, matrix } => {
            let (s, t) = (Ring::load(source)?, Ring::load(target)?);
            let rows = matrix.iter().map(|row| s.vec(row)).collect::<Result<Vec<_>, _>>()?;
            if rows.len() != t.dim() {
                return Err("matrix has the wrong number of rows".into());
            }
            let apply = |v: &[Scalar]| -> Vec<Scalar> {
                rows.iter()
                    .map(|row| row.iter().zip(v).fold(s.field.zero(), |acc, (a, b)| &acc + &(a * b)))
                    .collect()
            };
            if apply(&s.unit) != t.unit {
                return Err("the map is not unital".into());
            }
            for i in 0..s.dim() {
                for j in 0..s.dim() {
                    let (bi, bj) = (s.basis(i), s.basis(j));
                    if apply(&s.mul(&bi, &bj)) != t.mul(&apply(&bi), &apply(&bj)) {
                        return Err(format!("not multiplicative on ({i}, {j})"));
                    }
                }
            }
            Ok(())
        }
        Witness::Algebra { table, .. } => {
            let r = Ring::load(table)?;
            let b: Vec<Vec<Scalar>> = (0..r.dim()).map(|i| r.basis(i)).collect();
            for x in &b {
                if r.mul(&r.unit, x) != *x {
                    return Err("unit law fails".into());
                }
                for y in &b {
                    if r.mul(x, y) != r.mul(y, x) {
                        return Err("not commutative".into());
                    }
                    for z in &b {
                        if r.mul(&r.mul(x, y), z) != r.mul(x, &r.mul(y, z)) {
                            return Err("not associative".into());
                        }
                    }
                }
            }
            Ok(())
        }
        Witness::Tally { checks, discrepancies } => {
            if *checks == 0 {
                return Err("no checks were run".into());
            }
            (*discrepancies == 0).then_some(()).ok_or("discrepancies recorded".into())
        }
        Witness::Stabilization { dims, index } => {
            if *index >= dims.len().max(1) {
                return Err("index beyond the chain".into());
            }
            if dims.windows(2).any(|w| w[0] > w[1]) {
                return Err("dimensions decrease along the chain".into());
            }
            dims[*index..]
                .iter()
                .all(|&d| d == dims[*index])
                .then_some(())
                .ok_or("chain is not constant after the index".into())
        }
    }
}
