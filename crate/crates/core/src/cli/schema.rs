//! JSON documents describing endo-modules and optional Adams operations.
//!
//! ```json
//! {"ring": {"inverted_primes": [2]},
//!  "window": {"lo": 0, "hi": 1},
//!  "modules": [{"index": 0, "generators": 1, "relations": [[4]]}, ...],
//!  "maps": [{"from": 0, "matrix": [[1], [0]]}],
//!  "psi": {"k": 3, "matrices": [{"index": 0, "matrix": [[1]]}, ...]}}
//! ```
//!
//! Relations are listed column by column, matrices row by row. Entries are
//! integers or `[numerator, denominator]` pairs.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde_json::{json, Value};

use crate::adams::AdamsEndoModule;
use crate::endo::EndoModule;
use crate::error::{Error, Result};
use crate::graded::GradedRingPresentation;
use crate::lattice::{BaseRing, FPModule, IntMatrix};

/// A parsed document: the endo-module and, if present, its Adams operation.
#[derive(Clone, Debug)]
pub struct Document {
    pub endo: EndoModule,
    pub adams: Option<AdamsEndoModule>,
}

fn field<'a>(v: &'a Value, key: &str, path: &str) -> Result<&'a Value> {
    v.get(key)
        .ok_or_else(|| Error::parse(path, format!("missing field {key:?}")))
}

fn as_i64(v: &Value, path: &str) -> Result<i64> {
    v.as_i64().ok_or_else(|| Error::parse(path, "expected an integer"))
}

fn as_usize(v: &Value, path: &str) -> Result<usize> {
    v.as_u64()
        .and_then(|n| usize::try_from(n).ok())
        .ok_or_else(|| Error::parse(path, "expected a non-negative integer"))
}

fn as_array<'a>(v: &'a Value, path: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| Error::parse(path, "expected an array"))
}

fn entry(v: &Value, path: &str) -> Result<BigRational> {
    if let Some(n) = v.as_i64() {
        return Ok(BigRational::from_integer(n.into()));
    }
    if let Some([n, d]) = v.as_array().map(Vec::as_slice) {
        let n = as_i64(n, &format!("{path}/0"))?;
        let d = as_i64(d, &format!("{path}/1"))?;
        if d == 0 {
            return Err(Error::parse(format!("{path}/1"), "zero denominator"));
        }
        return Ok(BigRational::new(n.into(), d.into()));
    }
    Err(Error::parse(path, "expected an integer or a [numerator, denominator] pair"))
}

/// Rows of length `width` (or any common length if `None`).
fn rows(v: &Value, width: Option<usize>, path: &str) -> Result<Vec<Vec<BigRational>>> {
    let mut out = Vec::new();
    for (r, row) in as_array(v, path)?.iter().enumerate() {
        let rp = format!("{path}/{r}");
        let row: Vec<BigRational> = as_array(row, &rp)?
            .iter()
            .enumerate()
            .map(|(c, x)| entry(x, &format!("{rp}/{c}")))
            .collect::<Result<_>>()?;
        if let Some(w) = width {
            if row.len() != w {
                return Err(Error::parse(rp, format!("expected {w} entries, got {}", row.len())));
            }
        }
        out.push(row);
    }
    Ok(out)
}

fn matrix(v: &Value, n_rows: usize, n_cols: usize, what: &str, path: &str) -> Result<IntMatrix> {
    let rs = rows(v, None, path)?;
    if rs.len() != n_rows || rs.iter().any(|r| r.len() != n_cols) {
        let got_cols = rs.first().map_or(0, Vec::len);
        return Err(Error::parse(
            path,
            format!("{what}: expected a {n_rows}x{n_cols} matrix, got {}x{got_cols}", rs.len()),
        ));
    }
    Ok(IntMatrix::from_rational_rows(n_rows, n_cols, rs))
}

fn parse_ring(v: &Value) -> Result<BaseRing> {
    let primes_v = field(field(v, "ring", "")?, "inverted_primes", "/ring")?;
    let mut primes = Vec::new();
    for (k, p) in as_array(primes_v, "/ring/inverted_primes")?.iter().enumerate() {
        let path = format!("/ring/inverted_primes/{k}");
        let p = p.as_u64().ok_or_else(|| Error::parse(&path, "expected a prime"))?;
        if !crate::arith::is_prime(p) {
            return Err(Error::parse(path, format!("{p} is not prime")));
        }
        primes.push(p);
    }
    BaseRing::new(primes)
}

/// Reads the `index`/`from` keyed entries of `list` into window order.
fn by_index<'a>(list: &'a [Value], key: &str, indices: std::ops::Range<i64>, path: &str) -> Result<Vec<(usize, &'a Value)>> {
    let mut slots: Vec<Option<(usize, &Value)>> = vec![None; indices.clone().count()];
    for (k, item) in list.iter().enumerate() {
        let ip = format!("{path}/{k}/{key}");
        let i = as_i64(field(item, key, &format!("{path}/{k}"))?, &ip)?;
        if !indices.contains(&i) {
            return Err(Error::parse(ip, format!("index {i} outside the window")));
        }
        let slot = &mut slots[(i - indices.start) as usize];
        if slot.is_some() {
            return Err(Error::parse(ip, format!("index {i} given twice")));
        }
        *slot = Some((k, item));
    }
    slots
        .into_iter()
        .zip(indices)
        .map(|(s, i)| s.ok_or_else(|| Error::parse(path, format!("no entry for index {i}"))))
        .collect()
}

pub fn parse_document(text: &str) -> Result<Document> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::parse("", format!("invalid JSON: {e}")))?;
    let ring = parse_ring(&v)?;
    let window = field(&v, "window", "")?;
    let lo = as_i64(field(window, "lo", "/window")?, "/window/lo")?;
    let hi = as_i64(field(window, "hi", "/window")?, "/window/hi")?;
    if lo > hi {
        return Err(Error::parse("/window", format!("lo = {lo} exceeds hi = {hi}")));
    }

    let module_list = as_array(field(&v, "modules", "")?, "/modules")?;
    let mut modules = Vec::new();
    for (k, m) in by_index(module_list, "index", lo..hi + 1, "/modules")? {
        let path = format!("/modules/{k}");
        let n = as_usize(field(m, "generators", &path)?, &format!("{path}/generators"))?;
        let cols = match m.get("relations") {
            Some(r) => rows(r, Some(n), &format!("{path}/relations"))?,
            None => Vec::new(),
        };
        let module = FPModule::new(ring.clone(), n, IntMatrix::from_columns(n, &cols))
            .map_err(|e| Error::parse(format!("{path}/relations"), e.to_string()))?;
        modules.push(module);
    }

    let map_list = match v.get("maps") {
        Some(m) => as_array(m, "/maps")?.as_slice(),
        None => &[],
    };
    let mut matrices = Vec::new();
    for (k, m) in by_index(map_list, "from", lo..hi, "/maps")? {
        let off = matrices.len();
        let (src, tgt) = (modules[off].n_gens(), modules[off + 1].n_gens());
        let from = lo + off as i64;
        matrices.push(matrix(
            field(m, "matrix", &format!("/maps/{k}"))?,
            tgt,
            src,
            &format!("map from {from}"),
            &format!("/maps/{k}/matrix"),
        )?);
    }
    let endo = EndoModule::build(ring, lo, modules, matrices)?;

    let adams = match v.get("psi") {
        None | Some(Value::Null) => None,
        Some(p) => {
            let k = as_i64(field(p, "k", "/psi")?, "/psi/k")?;
            let list = as_array(field(p, "matrices", "/psi")?, "/psi/matrices")?;
            let mut ms = Vec::new();
            for (j, m) in by_index(list, "index", lo..hi + 1, "/psi/matrices")? {
                let n = endo.modules()[ms.len()].n_gens();
                let i = lo + ms.len() as i64;
                ms.push(matrix(
                    field(m, "matrix", &format!("/psi/matrices/{j}"))?,
                    n,
                    n,
                    &format!("psi at {i}"),
                    &format!("/psi/matrices/{j}/matrix"),
                )?);
            }
            Some(if endo.ring().inverts(k) || k.abs() < 2 {
                AdamsEndoModule::attach(endo.clone(), k, ms)?
            } else {
                AdamsEndoModule::attach_to_integral(endo.clone(), k, ms)?
            })
        }
    };
    Ok(Document { endo, adams })
}

fn entry_value(q: &BigRational) -> Value {
    let to_json = |n: &BigInt| match i64::try_from(n) {
        Ok(x) => json!(x),
        Err(_) => json!(n.to_string()),
    };
    if q.denom().is_one() {
        to_json(q.numer())
    } else {
        json!([to_json(q.numer()), to_json(q.denom())])
    }
}

fn rows_value(m: &IntMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array(m.row(r).iter().map(entry_value).collect()))
            .collect(),
    )
}

pub fn module_value(m: &FPModule) -> Value {
    let rel = m.relations();
    let columns: Vec<Value> = (0..rel.cols())
        .map(|c| Value::Array(rel.column(c).iter().map(entry_value).collect()))
        .collect();
    json!({"generators": m.n_gens(), "relations": columns})
}

/// The document for `endo`, with `adams` written as its `psi` block.
pub fn document_value(endo: &EndoModule, adams: Option<&AdamsEndoModule>) -> Value {
    let modules: Vec<Value> = endo
        .indices()
        .zip(endo.modules())
        .map(|(i, m)| {
            let mut v = module_value(m);
            v["index"] = json!(i);
            v
        })
        .collect();
    let maps: Vec<Value> = endo
        .maps()
        .iter()
        .enumerate()
        .map(|(off, f)| json!({"from": endo.lo() + off as i64, "matrix": rows_value(f.matrix())}))
        .collect();
    let mut doc = json!({
        "ring": {"inverted_primes": endo.ring().inverted_primes()},
        "window": {"lo": endo.lo(), "hi": endo.hi()},
        "modules": modules,
        "maps": maps,
    });
    if let Some(ae) = adams {
        let matrices: Vec<Value> = endo
            .indices()
            .zip(ae.psi_maps())
            .map(|(i, p)| json!({"index": i, "matrix": rows_value(p.matrix())}))
            .collect();
        doc["psi"] = json!({"k": ae.k(), "matrices": matrices});
    }
    doc
}

pub fn document_of(doc: &Document) -> Value {
    let endo = doc.adams.as_ref().and_then(|a| a.integral()).unwrap_or(&doc.endo);
    document_value(endo, doc.adams.as_ref())
}

pub fn parse_presentation(text: &str) -> Result<GradedRingPresentation> {
    let r: GradedRingPresentation =
        serde_json::from_str(text).map_err(|e| Error::parse("", format!("invalid presentation: {e}")))?;
    r.validate()?;
    Ok(r)
}
