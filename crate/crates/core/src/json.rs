//! JSON documents for coefficients, tabulated functors, transformations and
//! elements. Tables are 1-based on the wire.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::coeff::{InjCoeff, InjNat, SurCoeff, SurRule};
use crate::cosan::{canonicalize_pair, tabulate_cosan, CosanElem};
use crate::error::{Error, Result};
use crate::finset::FinFun;
use crate::san::SanElem;
use crate::tab::{TabFunctor, TabNat};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MapEntry {
    fun: FinFun,
    table: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TableDoc {
    kind: String,
    window: usize,
    sets: Vec<Vec<String>>,
    maps: Vec<MapEntry>,
}

fn schema(e: impl std::fmt::Display) -> Error {
    Error::Schema(e.to_string())
}

fn entry(fun: &FinFun, table: &FinFun) -> MapEntry {
    MapEntry {
        fun: fun.clone(),
        table: table.values().to_vec(),
    }
}

fn parse_doc(value: &Value, kind: &str) -> Result<TableDoc> {
    let doc: TableDoc = serde_json::from_value(value.clone()).map_err(schema)?;
    if doc.kind != kind {
        return Err(Error::Schema(format!("expected kind {kind:?}, found {:?}", doc.kind)));
    }
    Ok(doc)
}

/// Reads the tables of a document, checking each one is total with values
/// in `1..=|target level|`.
fn tables(doc: TableDoc, target: impl Fn(&FinFun) -> usize) -> Result<Vec<(FinFun, FinFun)>> {
    doc.maps
        .into_iter()
        .map(|e| {
            let sizes = doc.sets.get(e.fun.dom().max(e.fun.cod()));
            if sizes.is_none() {
                return Err(Error::Schema(format!("function {} outside the window", e.fun)));
            }
            let t = FinFun::new(target(&e.fun), e.table)
                .map_err(|err| Error::Schema(format!("table for {}: {err}", e.fun)))?;
            Ok((e.fun, t))
        })
        .collect()
}

pub fn inj_coeff_to_json(a: &InjCoeff) -> Value {
    let doc = TableDoc {
        kind: "inj-coeff".into(),
        window: a.window(),
        sets: a.sets().to_vec(),
        maps: a.tables().map(|(f, t)| entry(f, t)).collect(),
    };
    serde_json::to_value(doc).expect("serializable")
}

pub fn inj_coeff_from_json(value: &Value) -> Result<InjCoeff> {
    let doc = parse_doc(value, "inj-coeff")?;
    let (window, sets) = (doc.window, doc.sets.clone());
    let mut actions = BTreeMap::new();
    for (f, t) in tables(doc, |f| sets[f.dom()].len())? {
        if !f.is_injective() {
            return Err(Error::NotInjective(f.to_string()));
        }
        if actions.insert(f.clone(), t).is_some() {
            return Err(Error::Schema(format!("duplicate table for {f}")));
        }
    }
    InjCoeff::new(window, sets, actions)
}

pub fn sur_coeff_to_json(b: &SurCoeff) -> Value {
    match b {
        SurCoeff::Rule(SurRule::PPlus) => json!({"kind": "sur-coeff", "builtin": "pplus"}),
        SurCoeff::Rule(SurRule::Identity) => json!({"kind": "sur-coeff", "builtin": "identity"}),
        SurCoeff::Tabulated { window, sets, maps } => {
            let doc = TableDoc {
                kind: "sur-coeff".into(),
                window: *window,
                sets: sets.clone(),
                maps: maps.iter().map(|(f, t)| entry(f, t)).collect(),
            };
            serde_json::to_value(doc).expect("serializable")
        }
    }
}

pub fn sur_coeff_from_json(value: &Value) -> Result<SurCoeff> {
    if let Some(name) = value.get("builtin").and_then(Value::as_str) {
        if value.get("kind").and_then(Value::as_str) != Some("sur-coeff") {
            return Err(Error::Schema("expected kind \"sur-coeff\"".into()));
        }
        return SurCoeff::builtin(name);
    }
    let doc = parse_doc(value, "sur-coeff")?;
    let (window, sets) = (doc.window, doc.sets.clone());
    let mut maps = BTreeMap::new();
    for (f, t) in tables(doc, |f| sets[f.cod()].len())? {
        if !f.is_surjective() {
            return Err(Error::NotSurjective(f.to_string()));
        }
        if maps.insert(f.clone(), t).is_some() {
            return Err(Error::Schema(format!("duplicate table for {f}")));
        }
    }
    SurCoeff::tabulated(window, sets, maps)
}

pub fn tab_functor_to_json(f: &TabFunctor) -> Value {
    let doc = TableDoc {
        kind: "tab-functor".into(),
        window: f.window(),
        sets: f.sets().to_vec(),
        maps: f.entries().map(|(g, t)| entry(&g, t)).collect(),
    };
    serde_json::to_value(doc).expect("serializable")
}

pub fn tab_functor_from_json(value: &Value) -> Result<TabFunctor> {
    let doc = parse_doc(value, "tab-functor")?;
    let (window, sets) = (doc.window, doc.sets.clone());
    let entries = tables(doc, |f| sets[f.dom()].len())?;
    TabFunctor::from_entries(window, sets, entries)
}

/// A functor given either inline or as `"builtin:NAME"`, which is the
/// tabulation of the named coefficients at `window`.
pub fn functor_from_input(value: &Value, window: usize) -> Result<TabFunctor> {
    match value {
        Value::String(name) => {
            let a = InjCoeff::builtin(name, window)?;
            Ok(tabulate_cosan(&a, window)?.into_functor())
        }
        _ => tab_functor_from_json(value),
    }
}

/// `{"kind":"tab-nat","levels":[…]}`; the endpoints are embedded only when
/// given.
pub fn tab_nat_to_json(psi: &TabNat, endpoints: Option<(Value, Value)>) -> Value {
    let levels: Vec<&[usize]> = psi.levels().iter().map(FinFun::values).collect();
    let mut doc = json!({"kind": "tab-nat", "levels": levels});
    if let Some((source, target)) = endpoints {
        doc["source"] = source;
        doc["target"] = target;
    }
    doc
}

/// A parsed `tab-nat` document: 1-based level maps plus the endpoint
/// inputs, if present.
#[derive(Clone, Debug)]
pub struct NatDoc {
    pub levels: Vec<Vec<usize>>,
    pub source: Option<Value>,
    pub target: Option<Value>,
}

impl NatDoc {
    pub fn parse(value: &Value) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            kind: String,
            levels: Vec<Vec<usize>>,
            source: Option<Value>,
            target: Option<Value>,
        }
        let raw: Raw = serde_json::from_value(value.clone()).map_err(schema)?;
        if raw.kind != "tab-nat" {
            return Err(Error::Schema(format!("expected kind \"tab-nat\", found {:?}", raw.kind)));
        }
        Ok(Self {
            levels: raw.levels,
            source: raw.source,
            target: raw.target,
        })
    }

    pub fn window(&self) -> Result<usize> {
        self.levels
            .len()
            .checked_sub(1)
            .ok_or_else(|| Error::Schema("a transformation needs at least one level".into()))
    }

    /// Builds the transformation between the given functors.
    pub fn build(&self, source: TabFunctor, target: TabFunctor) -> Result<TabNat> {
        let levels = self
            .levels
            .iter()
            .enumerate()
            .map(|(k, l)| FinFun::new(target.sets().get(k).map_or(0, Vec::len), l.clone()))
            .collect::<Result<Vec<_>>>()?;
        TabNat::new(source, target, levels)
    }

    /// Builds the transformation using the embedded endpoints.
    pub fn build_embedded(&self) -> Result<TabNat> {
        let w = self.window()?;
        let missing = || Error::Schema("transformation has no embedded endpoints".into());
        let source = functor_from_input(self.source.as_ref().ok_or_else(missing)?, w)?;
        let target = functor_from_input(self.target.as_ref().ok_or_else(missing)?, w)?;
        self.build(source, target)
    }
}

/// `{"kind":"inj-nat","levels":[…]}` with 1-based level tables; a level
/// with no map (an empty source level) is an empty list.
pub fn inj_nat_to_json(tau: &InjNat) -> Value {
    let levels: Vec<Vec<usize>> = tau
        .levels()
        .iter()
        .map(|l| l.as_ref().map_or_else(Vec::new, |f| f.values().to_vec()))
        .collect();
    json!({"kind": "inj-nat", "levels": levels})
}

pub fn cosan_elem_to_json(a: &InjCoeff, e: &CosanElem) -> Value {
    json!({"n": e.level, "a": a.name(e.level, e.coeff), "epi": e.epi})
}

/// Parses `{"n":…,"a":NAME,"epi":"k>n:…"}`; the pair is canonicalized, so
/// any epi in the orbit is accepted.
pub fn cosan_elem_from_json(a: &InjCoeff, value: &Value) -> Result<CosanElem> {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Raw {
        n: usize,
        a: String,
        epi: FinFun,
    }
    let raw: Raw = serde_json::from_value(value.clone()).map_err(schema)?;
    if raw.n > a.window() {
        return Err(Error::OutOfWindow {
            size: raw.n,
            window: a.window(),
        });
    }
    let coeff = a.sets()[raw.n]
        .iter()
        .position(|s| *s == raw.a)
        .ok_or_else(|| Error::Schema(format!("no element {:?} at level {}", raw.a, raw.n)))?;
    canonicalize_pair(a, raw.n, coeff, &raw.epi)
}

pub fn san_elem_to_json(b: &SurCoeff, e: &SanElem) -> Value {
    json!({"n": e.level, "b": b.name(e.level, e.coeff), "mono": e.mono})
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inj_coeff_round_trip() {
        for name in ["powerset", "partition", "constant", "exp:3"] {
            let a = InjCoeff::builtin(name, 3).unwrap();
            let v = inj_coeff_to_json(&a);
            assert_eq!(inj_coeff_from_json(&v).unwrap(), a);
        }
    }

    #[test]
    fn tab_functor_round_trip() {
        let a = InjCoeff::builtin("exp:2", 3).unwrap();
        let f = tabulate_cosan(&a, 3).unwrap().into_functor();
        let v = tab_functor_to_json(&f);
        assert_eq!(v["maps"][0]["fun"], "0>0:");
        assert_eq!(tab_functor_from_json(&v).unwrap(), f);
        assert_eq!(functor_from_input(&json!("builtin:powerset"), 3).unwrap().sizes(), f.sizes());
    }

    #[test]
    fn sur_coeff_round_trip() {
        let p = SurCoeff::builtin("pplus").unwrap();
        assert_eq!(sur_coeff_from_json(&sur_coeff_to_json(&p)).unwrap(), p);
        let t = p.materialize(3).unwrap();
        assert_eq!(sur_coeff_from_json(&sur_coeff_to_json(&t)).unwrap(), t);
    }

    #[test]
    fn rejects_bad_documents() {
        let a = InjCoeff::builtin("exp:2", 2).unwrap();
        let mut v = inj_coeff_to_json(&a);
        v["kind"] = json!("tab-functor");
        assert!(matches!(inj_coeff_from_json(&v), Err(Error::Schema(_))));
        let mut v = inj_coeff_to_json(&a);
        v["maps"][1]["table"] = json!([7, 1]);
        assert!(inj_coeff_from_json(&v).is_err());
        let mut v = inj_coeff_to_json(&a);
        v["extra"] = json!(1);
        assert!(inj_coeff_from_json(&v).is_err());
    }

    #[test]
    fn cosan_elem_text_form() {
        let a = InjCoeff::builtin("exp:2", 3).unwrap();
        let e = cosan_elem_from_json(&a, &json!({"n": 2, "a": "2>2:2,1", "epi": "3>2:2,1,2"}))
            .unwrap();
        assert_eq!(
            cosan_elem_to_json(&a, &e),
            json!({"n": 2, "a": "2>2:1,2", "epi": "3>2:1,2,1"})
        );
    }

    #[test]
    fn nat_document() {
        let doc = NatDoc::parse(&json!({
            "kind": "tab-nat",
            "levels": [[1], [1, 1], [1, 1, 1, 1]],
            "source": "builtin:powerset",
            "target": "builtin:constant",
        }))
        .unwrap();
        let psi = doc.build_embedded().unwrap();
        assert_eq!(psi.source().sizes(), vec![1, 2, 4]);
        assert_eq!(psi.target().sizes(), vec![1, 1, 1]);
        let v = tab_nat_to_json(&psi, None);
        assert_eq!(v["levels"], json!([[1], [1, 1], [1, 1, 1, 1]]));
    }
}
