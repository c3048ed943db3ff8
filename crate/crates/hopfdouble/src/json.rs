//! JSON encodings of scalars, check reports and Hopf structure constants.

use hopfdouble_core::hopf::{Hopf, HopfData};
use hopfdouble_core::linalg::Vector;
use hopfdouble_core::{CheckReport, CycField, CycNumber, Error, Result};
use num_bigint::BigInt;
use serde_json::{json, Map, Value};

fn int_json(n: &BigInt) -> Value {
    match i64::try_from(n) {
        Ok(v) => Value::from(v),
        Err(_) => Value::String(n.to_string()),
    }
}

fn int_from_json(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Parse(format!("not an integer: {}", n))),
        Value::String(s) => s.parse().map_err(|_| Error::Parse(format!("not an integer: {:?}", s))),
        other => Err(Error::Parse(format!("not an integer: {}", other))),
    }
}

/// {"num": [...], "den": [...]}, coefficients of ζ^0, ζ^1, ….
pub fn cyc_to_json(c: &CycNumber) -> Value {
    let fr = c.coefficient_fractions();
    json!({
        "num": fr.iter().map(|(n, _)| int_json(n)).collect::<Vec<_>>(),
        "den": fr.iter().map(|(_, d)| int_json(d)).collect::<Vec<_>>(),
    })
}

pub fn cyc_from_json(f: &'static CycField, v: &Value) -> Result<CycNumber> {
    let arr = |key: &str| -> Result<Vec<BigInt>> {
        v.get(key)
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse(format!("missing array {:?}", key)))?
            .iter()
            .map(int_from_json)
            .collect()
    };
    f.from_fraction_coeffs(&arr("num")?, &arr("den")?)
}

pub fn report_to_json(r: &CheckReport) -> Value {
    let strmap = |m: &std::collections::BTreeMap<String, String>| {
        Value::Object(m.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect())
    };
    let mut o = Map::new();
    o.insert("check".into(), Value::String(r.name.clone()));
    o.insert("status".into(), Value::String(r.status.as_str().into()));
    o.insert("witness".into(), strmap(&r.witness));
    o.insert(
        "counts".into(),
        Value::Object(r.counts.iter().map(|(k, v)| (k.clone(), Value::from(*v))).collect()),
    );
    if !r.details.is_empty() {
        o.insert("details".into(), strmap(&r.details));
    }
    Value::Object(o)
}

/// The structure-constant format: mult [i,j,k,c], comult [k,i,j,c], counit, antipode [i,j,c].
pub fn hopf_to_json(h: &(impl Hopf + ?Sized), p: usize) -> Value {
    let d = h.dim();
    let mut mult = Vec::new();
    for i in 0..d {
        for j in 0..d {
            for (k, c) in h.mul_basis(i, j).iter() {
                mult.push(json!([i, j, k, cyc_to_json(c)]));
            }
        }
    }
    let mut comult = Vec::new();
    for k in 0..d {
        for (t, c) in h.comul_basis(k).iter() {
            comult.push(json!([k, t / d, t % d, cyc_to_json(c)]));
        }
    }
    let mut antipode = Vec::new();
    for i in 0..d {
        for (j, c) in h.antipode(&h.basis(i)).iter() {
            antipode.push(json!([i, j, cyc_to_json(c)]));
        }
    }
    json!({
        "dim": d,
        "p": p,
        "labels": (0..d).map(|i| h.label(i)).collect::<Vec<_>>(),
        "unit": h.unit().iter().map(|(i, c)| json!([i, cyc_to_json(c)])).collect::<Vec<_>>(),
        "mult": mult,
        "comult": comult,
        "counit": (0..d).map(|i| cyc_to_json(&h.counit_basis(i))).collect::<Vec<_>>(),
        "antipode": antipode,
    })
}

fn usize_at(v: &Value, i: usize) -> Result<usize> {
    v.get(i)
        .and_then(Value::as_u64)
        .map(|x| x as usize)
        .ok_or_else(|| Error::Parse(format!("expected an index at position {}", i)))
}

/// Reads the structure-constant format back into a table-backed Hopf algebra.
pub fn hopf_from_json(v: &Value) -> Result<HopfData> {
    let get = |k: &str| v.get(k).ok_or_else(|| Error::Parse(format!("missing field {:?}", k)));
    let d = get("dim")?.as_u64().ok_or_else(|| Error::Parse("dim".into()))? as usize;
    let p = get("p")?.as_u64().ok_or_else(|| Error::Parse("p".into()))? as usize;
    let f = CycField::get(p)?;
    let labels: Vec<String> = get("labels")?
        .as_array()
        .ok_or_else(|| Error::Parse("labels".into()))?
        .iter()
        .map(|s| s.as_str().map(String::from).ok_or_else(|| Error::Parse("label".into())))
        .collect::<Result<_>>()?;
    if labels.len() != d {
        return Err(Error::Dimension(format!("{} labels for dim {}", labels.len(), d)));
    }
    let arr = |k: &str| -> Result<Vec<Value>> { Ok(get(k)?.as_array().cloned().unwrap_or_default()) };
    let mut mult = vec![Vec::new(); d * d];
    for e in arr("mult")? {
        let (i, j, k) = (usize_at(&e, 0)?, usize_at(&e, 1)?, usize_at(&e, 2)?);
        if i >= d || j >= d || k >= d {
            return Err(Error::OutOfRange { index: i.max(j).max(k), dim: d });
        }
        mult[i * d + j].push((k, cyc_from_json(f, &e[3])?));
    }
    let mut comult = vec![Vec::new(); d];
    for e in arr("comult")? {
        let (k, i, j) = (usize_at(&e, 0)?, usize_at(&e, 1)?, usize_at(&e, 2)?);
        if i >= d || j >= d || k >= d {
            return Err(Error::OutOfRange { index: i.max(j).max(k), dim: d });
        }
        comult[k].push((i * d + j, cyc_from_json(f, &e[3])?));
    }
    let mut antipode = vec![Vec::new(); d];
    for e in arr("antipode")? {
        let (i, j) = (usize_at(&e, 0)?, usize_at(&e, 1)?);
        if i >= d || j >= d {
            return Err(Error::OutOfRange { index: i.max(j), dim: d });
        }
        antipode[i].push((j, cyc_from_json(f, &e[2])?));
    }
    let mut unit = Vec::new();
    for e in arr("unit")? {
        unit.push((usize_at(&e, 0)?, cyc_from_json(f, &e[1])?));
    }
    let counit = arr("counit")?
        .iter()
        .map(|c| cyc_from_json(f, c))
        .collect::<Result<Vec<_>>>()?;
    if counit.len() != d {
        return Err(Error::Dimension(format!("{} counit values for dim {}", counit.len(), d)));
    }
    let vecs = |x: Vec<Vec<(usize, CycNumber)>>| x.into_iter().map(Vector::from_unsorted).collect::<Vec<_>>();
    let mut h = HopfData::new(
        f,
        labels,
        vecs(mult),
        Vector::from_unsorted(unit),
        vecs(comult),
        counit,
        vecs(antipode),
    )?;
    h.p = Some(p);
    Ok(h)
}
