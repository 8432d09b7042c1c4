//! JSON forms of fans, filtrations, Chern data, incidence data, condition
//! sets, configurations and equivalence reports. Output is compact with
//! sorted object keys, so equal values serialize to identical bytes.
//! Integers are written as exact JSON numbers of any size.

use std::collections::BTreeMap;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Map, Number, Value};

use crate::chern::{ChernDatum, ExplicitChern, MurphyRule};
use crate::error::{Error, Result};
use crate::exact::field::{format_rational, parse_rational};
use crate::exact::{Field, FieldTag, PrimeField, RationalField};
use crate::fan::{Character, Fan, LatticeVector};
use crate::incidence::{Configuration, EquivalenceReport, IncidenceData, Side};
use crate::klyachko::{Filtration, RayFiltration, Subspace};
use crate::moduli::{Atom, AtomKind, ConditionSet};
use crate::murphy_fan::{max_cone_count_formula, ray_count_formula, MurphyFanHandle};

/// Version of the JSON schemas below.
pub const SCHEMA_VERSION: &str = "1";

pub fn to_canonical_string(v: &Value) -> String {
    serde_json::to_string(v).expect("values always serialize")
}

pub fn parse_json(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

pub fn int(v: &BigInt) -> Value {
    Value::Number(Number::from_str(&v.to_string()).expect("integer literal"))
}

fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

fn bad(what: &str) -> Error {
    Error::Parse(format!("expected {what}"))
}

pub fn get_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => BigInt::from_str(&n.to_string()).map_err(|_| bad("an integer")),
        Value::String(s) => BigInt::from_str(s.trim()).map_err(|_| bad("an integer")),
        _ => Err(bad("an integer")),
    }
}

fn get_i64(v: &Value) -> Result<i64> {
    get_int(v)?.to_i64().ok_or_else(|| bad("a machine-size integer"))
}

fn get_usize(v: &Value) -> Result<usize> {
    get_int(v)?.to_usize().ok_or_else(|| bad("a nonnegative index"))
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key).ok_or_else(|| Error::Parse(format!("missing key '{key}'")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array().ok_or_else(|| bad(what))
}

fn int_rows(v: &Value) -> Result<Vec<Vec<BigInt>>> {
    array(v, "an array of integer arrays")?
        .iter()
        .map(|row| array(row, "an integer array")?.iter().map(get_int).collect())
        .collect()
}

fn index_rows(v: &Value) -> Result<Vec<Vec<usize>>> {
    array(v, "an array of index arrays")?
        .iter()
        .map(|row| array(row, "an index array")?.iter().map(get_usize).collect())
        .collect()
}

pub fn fan_to_json(fan: &Fan) -> Value {
    json!({
        "dim": fan.dim(),
        "rays": fan.rays().iter().map(|r| ints(&r.0)).collect::<Vec<_>>(),
        "max_cones": fan.max_cones(),
    })
}

pub fn fan_from_json(v: &Value) -> Result<Fan> {
    let dim = get_usize(field(v, "dim")?)?;
    let rays = int_rows(field(v, "rays")?)?.into_iter().map(LatticeVector).collect();
    let cones = index_rows(field(v, "max_cones")?)?;
    Fan::new(dim, rays, cones)
}

/// Σ_n with ray labels; lazy handles list every ray and the formula counts
/// in place of the cone table.
pub fn murphy_fan_to_json(h: &MurphyFanHandle) -> Result<Value> {
    let n = h.n();
    let mut out = match (h.fan(), h.ray_labels()) {
        (Some(fan), Some(labels)) => {
            let mut v = fan_to_json(fan);
            v["labels"] = json!(labels.iter().map(|l| l.to_string()).collect::<Vec<_>>());
            v
        }
        _ => {
            let mut rays: Vec<(LatticeVector, String)> = h
                .all_labels()
                .into_iter()
                .map(|l| Ok((h.ray_vector(l)?, l.to_string())))
                .collect::<Result<_>>()?;
            rays.sort();
            json!({
                "dim": n,
                "rays": rays.iter().map(|(r, _)| ints(&r.0)).collect::<Vec<_>>(),
                "labels": rays.iter().map(|(_, l)| l.clone()).collect::<Vec<_>>(),
                "max_cones": "lazy",
            })
        }
    };
    out["n"] = json!(n);
    out["ray_count"] = json!(ray_count_formula(n).to_string().parse::<Number>().expect("count"));
    out["max_cone_count"] = json!(max_cone_count_formula(n).to_string().parse::<Number>().expect("count"));
    Ok(out)
}

/// Field elements in JSON: integers as numbers, other rationals as "a/b".
pub trait JsonField: Field {
    fn elem_to_json(&self, e: &Self::Elem) -> Value;
    fn elem_from_json(&self, v: &Value) -> Result<Self::Elem>;
}

impl JsonField for RationalField {
    fn elem_to_json(&self, e: &BigRational) -> Value {
        if e.denom().is_one() {
            int(e.numer())
        } else {
            Value::String(format_rational(e))
        }
    }

    fn elem_from_json(&self, v: &Value) -> Result<BigRational> {
        match v {
            Value::String(s) => parse_rational(s),
            _ => Ok(BigRational::from_integer(get_int(v)?)),
        }
    }
}

impl JsonField for PrimeField {
    fn elem_to_json(&self, e: &u32) -> Value {
        json!(e)
    }

    fn elem_from_json(&self, v: &Value) -> Result<u32> {
        Ok(self.from_int(&get_int(v)?))
    }
}

fn rows_to_json<F: JsonField>(f: &F, rows: &[Vec<F::Elem>]) -> Value {
    Value::Array(
        rows.iter()
            .map(|r| Value::Array(r.iter().map(|e| f.elem_to_json(e)).collect()))
            .collect(),
    )
}

fn rows_from_json<F: JsonField>(f: &F, v: &Value) -> Result<Vec<Vec<F::Elem>>> {
    array(v, "a matrix")?
        .iter()
        .map(|row| array(row, "a vector")?.iter().map(|e| f.elem_from_json(e)).collect())
        .collect()
}

pub fn filtration_to_json<F: JsonField>(filt: &Filtration<F>) -> Value {
    let f = &filt.field;
    let rays: Map<String, Value> = filt
        .rays
        .iter()
        .map(|(r, rf)| {
            let steps = rf
                .steps()
                .iter()
                .map(|(j, s)| json!({"jump": j, "basis": rows_to_json(f, s.basis())}))
                .collect();
            (r.to_string(), Value::Array(steps))
        })
        .collect();
    json!({"rank": filt.rank, "field": f.tag().to_string(), "rays": rays})
}

fn filtration_with<F: JsonField>(f: F, v: &Value) -> Result<Filtration<F>> {
    let rank = get_usize(field(v, "rank")?)?;
    let rays_obj = field(v, "rays")?.as_object().ok_or_else(|| bad("an object of rays"))?;
    let mut rays = BTreeMap::new();
    for (key, steps) in rays_obj {
        let r: usize = key.parse().map_err(|_| Error::Parse(format!("ray id '{key}' is not an index")))?;
        let steps = array(steps, "a list of steps")?
            .iter()
            .map(|s| {
                let j = get_i64(field(s, "jump")?)?;
                let basis = rows_from_json(&f, field(s, "basis")?)?;
                Ok((j, Subspace::new(&f, rank, basis)?))
            })
            .collect::<Result<Vec<_>>>()?;
        rays.insert(r, RayFiltration::new(&f, rank, steps)?);
    }
    Filtration::new(f, rank, rays)
}

/// A filtration over whichever field its JSON names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyFiltration {
    Rational(Filtration<RationalField>),
    Prime(Filtration<PrimeField>),
}

pub fn filtration_from_json(v: &Value) -> Result<AnyFiltration> {
    let tag: FieldTag = field(v, "field")?.as_str().ok_or_else(|| bad("a field name"))?.parse()?;
    Ok(match tag {
        FieldTag::Rational => AnyFiltration::Rational(filtration_with(RationalField, v)?),
        FieldTag::Prime(p) => AnyFiltration::Prime(filtration_with(PrimeField::new(p as u64)?, v)?),
    })
}

pub fn incidence_to_json(i: &IncidenceData) -> Value {
    json!({
        "points": i.points(),
        "lines": i.lines(),
        "incidences": i.pairs().iter().map(|&(a, b)| json!([a, b])).collect::<Vec<_>>(),
    })
}

pub fn incidence_from_json(v: &Value) -> Result<IncidenceData> {
    let pairs = index_rows(field(v, "incidences")?)?
        .into_iter()
        .map(|p| match p[..] {
            [i, j] => Ok((i, j)),
            _ => Err(bad("incidence pairs [i, j]")),
        })
        .collect::<Result<_>>()?;
    IncidenceData::new(get_usize(field(v, "points")?)?, get_usize(field(v, "lines")?)?, pairs)
}

pub fn chern_to_json(c: &ChernDatum) -> Value {
    match c {
        ChernDatum::Explicit(e) => json!({
            "rank": e.rank,
            "cones": e.cones.iter().map(|(rays, chars)| json!({
                "rays": rays,
                "chars": chars.iter().map(|u| ints(&u.0)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        }),
        ChernDatum::Murphy(rule) => json!({"rule": "murphy", "incidence": incidence_to_json(rule.incidence())}),
    }
}

pub fn chern_from_json(v: &Value) -> Result<ChernDatum> {
    if let Some(rule) = v.get("rule") {
        if rule.as_str() != Some("murphy") {
            return Err(Error::Parse(format!("unknown Chern rule {rule}")));
        }
        return Ok(ChernDatum::Murphy(MurphyRule::new(incidence_from_json(field(v, "incidence")?)?)));
    }
    let rank = get_usize(field(v, "rank")?)?;
    let mut cones = BTreeMap::new();
    for c in array(field(v, "cones")?, "a list of cones")? {
        let mut rays: Vec<usize> = array(field(c, "rays")?, "ray indices")?
            .iter()
            .map(get_usize)
            .collect::<Result<_>>()?;
        rays.sort_unstable();
        let mut chars: Vec<Character> = int_rows(field(c, "chars")?)?.into_iter().map(Character).collect();
        chars.sort();
        cones.insert(rays, chars);
    }
    Ok(ChernDatum::Explicit(ExplicitChern { rank, cones }))
}

pub fn conditions_to_json(cs: &ConditionSet) -> Value {
    json!({
        "points": cs.points(),
        "lines": cs.lines(),
        "atoms": cs.atoms().iter().map(|a| json!({"kind": a.kind.name(), "i": a.i, "j": a.j})).collect::<Vec<_>>(),
    })
}

pub fn conditions_from_json(v: &Value) -> Result<ConditionSet> {
    let atoms = array(field(v, "atoms")?, "a list of atoms")?
        .iter()
        .map(|a| {
            let kind = AtomKind::from_name(field(a, "kind")?.as_str().ok_or_else(|| bad("an atom kind"))?)?;
            Ok(Atom::new(kind, get_usize(field(a, "i")?)?, get_usize(field(a, "j")?)?))
        })
        .collect::<Result<_>>()?;
    ConditionSet::new(get_usize(field(v, "points")?)?, get_usize(field(v, "lines")?)?, atoms)
}

fn triples_to_json<F: JsonField>(f: &F, t: &[[F::Elem; 3]]) -> Value {
    Value::Array(
        t.iter()
            .map(|v| Value::Array(v.iter().map(|e| f.elem_to_json(e)).collect()))
            .collect(),
    )
}

pub fn configuration_to_json<F: JsonField>(f: &F, c: &Configuration<F::Elem>) -> Value {
    json!({
        "field": f.tag().to_string(),
        "points": triples_to_json(f, &c.points),
        "lines": triples_to_json(f, &c.lines),
    })
}

/// Reads and normalizes a configuration over the given field.
pub fn configuration_from_json<F: JsonField>(f: &F, v: &Value) -> Result<Configuration<F::Elem>> {
    let tag: FieldTag = field(v, "field")?.as_str().ok_or_else(|| bad("a field name"))?.parse()?;
    if tag != f.tag() {
        return Err(Error::FieldMismatch(format!("configuration is over {tag}, expected {}", f.tag())));
    }
    let triples = |key: &str| -> Result<Vec<[F::Elem; 3]>> {
        rows_from_json(f, field(v, key)?)?
            .into_iter()
            .map(|r| <[F::Elem; 3]>::try_from(r).map_err(|_| bad("coordinate triples")))
            .collect()
    };
    Configuration::normalized(f, triples("points")?, triples("lines")?)
}

pub fn report_to_json(r: &EquivalenceReport) -> Value {
    let field = PrimeField::new(r.prime as u64).expect("report prime is valid");
    let discrepancy = match &r.first_discrepancy {
        None => Value::Null,
        Some((side, c)) => json!({
            "side": match side { Side::ModuliOnly => "moduli_only", Side::IncidenceOnly => "incidence_only" },
            "configuration": configuration_to_json(&field, c),
        }),
    };
    json!({
        "incidence": incidence_to_json(&r.incidence),
        "field": field.tag().to_string(),
        "equal": r.equal,
        "moduli_count": r.moduli_count,
        "incidence_count": r.incidence_count,
        "first_discrepancy": discrepancy,
    })
}
