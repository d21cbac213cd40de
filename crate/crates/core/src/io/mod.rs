//! Deterministic JSON for the finite structures.
//!
//! Atoms are strings, tuples are arrays and families are `{"fam": [[k, v], …]}`.
//! Sets are arrays in canonical order. Keys of JSON objects come out sorted,
//! so serializing a parsed canonical document reproduces it byte for byte.

mod workspace;

pub use workspace::{bundled_index, Check, CategoryObjectEntry, CheckKind, MapEntry, SimplicialSource, Workspace, FORMAT_VERSION};

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::finset::{Element, FinFunction, FinSet, FiniteCategory};
use crate::topos::{NatTrans, Presheaf, Topos};

/// Parses JSON text, reporting syntax errors with their position.
pub fn parse(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Pretty-printed with a trailing newline.
pub fn to_canonical_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn invalid(path: &str, msg: impl std::fmt::Display) -> Error {
    Error::Invalid(format!("{path}: {msg}"))
}

pub fn element_to_json(e: &Element) -> Value {
    match e {
        Element::Atom(a) => Value::String(a.to_string()),
        Element::Tuple(t) => Value::Array(t.iter().map(element_to_json).collect()),
        Element::Fam(f) => json!({ "fam": f.iter().map(|(k, v)| json!([element_to_json(k), element_to_json(v)])).collect::<Vec<_>>() }),
    }
}

/// Numbers are read as atoms of their decimal form.
pub fn element_from_json(v: &Value) -> Result<Element> {
    match v {
        Value::String(s) => Ok(Element::atom(s)),
        Value::Number(n) => Ok(Element::atom(n.to_string())),
        Value::Array(items) => Ok(Element::tuple(items.iter().map(element_from_json).collect::<Result<Vec<_>>>()?)),
        Value::Object(o) if o.len() == 1 && o.contains_key("fam") => {
            let entries = array(&o["fam"], "fam")?
                .iter()
                .map(|pair| {
                    let [k, v] = pair_of(pair, "fam entry")?;
                    Ok((element_from_json(k)?, element_from_json(v)?))
                })
                .collect::<Result<Vec<_>>>()?;
            Element::fam(entries)
        }
        other => Err(Error::Invalid(format!("not an element: {other}"))),
    }
}

fn array<'v>(v: &'v Value, path: &str) -> Result<&'v Vec<Value>> {
    v.as_array().ok_or_else(|| invalid(path, "expected an array"))
}

fn pair_of<'v>(v: &'v Value, path: &str) -> Result<[&'v Value; 2]> {
    match v.as_array().map(Vec::as_slice) {
        Some([a, b]) => Ok([a, b]),
        _ => Err(invalid(path, "expected a pair")),
    }
}

fn field<'v>(o: &'v Value, key: &str, path: &str) -> Result<&'v Value> {
    o.get(key).ok_or_else(|| invalid(path, format!("missing field \"{key}\"")))
}

pub fn finset_to_json(s: &FinSet) -> Value {
    Value::Array(s.iter().map(element_to_json).collect())
}

/// Duplicates are rejected.
pub fn finset_from_json(v: &Value, path: &str) -> Result<FinSet> {
    let items = array(v, path)?.iter().map(element_from_json).collect::<Result<Vec<_>>>()?;
    let n = items.len();
    let s = FinSet::new(items);
    if s.len() != n {
        return Err(invalid(path, "duplicate elements"));
    }
    Ok(s)
}

fn pairs_to_json(f: &FinFunction) -> Value {
    Value::Array(f.pairs().map(|(x, y)| json!([element_to_json(x), element_to_json(y)])).collect())
}

fn pairs_from_json(v: &Value, dom: &FinSet, cod: &FinSet, path: &str) -> Result<FinFunction> {
    let pairs = array(v, path)?
        .iter()
        .map(|p| {
            let [x, y] = pair_of(p, path)?;
            Ok((element_from_json(x)?, element_from_json(y)?))
        })
        .collect::<Result<Vec<_>>>()?;
    FinFunction::from_pairs(dom.clone(), cod.clone(), pairs).map_err(|e| invalid(path, e))
}

pub fn function_to_json(f: &FinFunction) -> Value {
    json!({
        "domain": finset_to_json(f.dom()),
        "codomain": finset_to_json(f.cod()),
        "map": pairs_to_json(f),
    })
}

pub fn function_from_json(v: &Value, path: &str) -> Result<FinFunction> {
    let dom = finset_from_json(field(v, "domain", path)?, &format!("{path}.domain"))?;
    let cod = finset_from_json(field(v, "codomain", path)?, &format!("{path}.codomain"))?;
    pairs_from_json(field(v, "map", path)?, &dom, &cod, &format!("{path}.map"))
}

/// `{"objects", "morphisms": [[u, src, tgt]], "identities": [[x, id_x]],
/// "composition": [[g, f, g∘f]]}`.
pub fn category_to_json(c: &FiniteCategory) -> Value {
    let m = c.morphisms();
    let morphisms: Vec<Value> = (0..c.num_morphisms())
        .map(|u| {
            json!([
                element_to_json(m.get(u)),
                element_to_json(c.objects().get(c.src(u))),
                element_to_json(c.objects().get(c.tgt(u)))
            ])
        })
        .collect();
    let identities: Vec<Value> = (0..c.num_objects())
        .map(|x| json!([element_to_json(c.objects().get(x)), element_to_json(m.get(c.id(x)))]))
        .collect();
    let composition: Vec<Value> = c
        .comp_entries()
        .map(|(g, f, gf)| json!([element_to_json(m.get(g)), element_to_json(m.get(f)), element_to_json(m.get(gf))]))
        .collect();
    json!({
        "objects": finset_to_json(c.objects()),
        "morphisms": morphisms,
        "identities": identities,
        "composition": composition,
    })
}

/// Structural checks only; the axioms are left to
/// [`FiniteCategory::validate`].
pub fn category_from_json(v: &Value, path: &str) -> Result<FiniteCategory> {
    let objects = finset_from_json(field(v, "objects", path)?, &format!("{path}.objects"))?;
    let mut names = Vec::new();
    let (mut src, mut tgt) = (Vec::new(), Vec::new());
    for m in array(field(v, "morphisms", path)?, path)? {
        match m.as_array().map(Vec::as_slice) {
            Some([u, s, t]) => {
                let u = element_from_json(u)?;
                names.push(u.clone());
                src.push((u.clone(), element_from_json(s)?));
                tgt.push((u, element_from_json(t)?));
            }
            _ => return Err(invalid(path, "a morphism is [name, source, target]")),
        }
    }
    let morphisms = FinSet::new(names.clone());
    if morphisms.len() != names.len() {
        return Err(invalid(path, "duplicate morphism names"));
    }
    let src = FinFunction::from_pairs(morphisms.clone(), objects.clone(), src).map_err(|e| invalid(path, e))?;
    let tgt = FinFunction::from_pairs(morphisms.clone(), objects.clone(), tgt).map_err(|e| invalid(path, e))?;
    let identity = pairs_from_json(field(v, "identities", path)?, &objects, &morphisms, &format!("{path}.identities"))?;
    let comp = array(field(v, "composition", path)?, path)?
        .iter()
        .map(|e| match e.as_array().map(Vec::as_slice) {
            Some([g, f, gf]) => Ok((element_from_json(g)?, element_from_json(f)?, element_from_json(gf)?)),
            _ => Err(invalid(path, "a composite is [g, f, g∘f]")),
        })
        .collect::<Result<Vec<_>>>()?;
    FiniteCategory::new(objects, morphisms, src, tgt, identity, comp).map_err(|e| invalid(path, e))
}

/// `{"sets": [[c, [...]]], "actions": [[u, [[x, x·u], ...]]]}` with an action
/// per non-identity index morphism `u: c → d`, sending `x ∈ P(d)` to `P(c)`.
pub fn presheaf_to_json(topos: &Topos, p: &Presheaf) -> Value {
    let cat = topos.index();
    let sets: Vec<Value> = (0..cat.num_objects())
        .map(|c| json!([element_to_json(cat.objects().get(c)), finset_to_json(p.at(c))]))
        .collect();
    let actions: Vec<Value> = (0..cat.num_morphisms())
        .filter(|&u| !cat.is_identity(u))
        .map(|u| json!([element_to_json(cat.morphisms().get(u)), pairs_to_json(p.restrict(u))]))
        .collect();
    json!({ "sets": sets, "actions": actions })
}

/// Also accepts `{"set": [...]}` when the index category is terminal.
pub fn presheaf_from_json(topos: &Topos, v: &Value, path: &str) -> Result<Presheaf> {
    let cat = topos.index();
    if let Some(set) = v.get("set") {
        if cat.num_morphisms() != 1 {
            return Err(invalid(path, "\"set\" needs a terminal index category"));
        }
        return Ok(topos.constant(&finset_from_json(set, &format!("{path}.set"))?));
    }
    let mut at: Vec<Option<FinSet>> = vec![None; cat.num_objects()];
    for entry in array(field(v, "sets", path)?, path)? {
        let [c, s] = pair_of(entry, path)?;
        let c = cat.objects().require_index(&element_from_json(c)?, "index objects").map_err(|e| invalid(path, e))?;
        at[c] = Some(finset_from_json(s, path)?);
    }
    let at = at
        .into_iter()
        .enumerate()
        .map(|(c, s)| s.ok_or_else(|| invalid(path, format!("no set at {}", cat.objects().get(c)))))
        .collect::<Result<Vec<_>>>()?;
    let mut actions = Vec::new();
    if let Some(a) = v.get("actions") {
        for entry in array(a, path)? {
            let [u, f] = pair_of(entry, path)?;
            let u = element_from_json(u)?;
            let ui = cat.morphisms().require_index(&u, "index morphisms").map_err(|e| invalid(path, e))?;
            let f = pairs_from_json(f, &at[cat.tgt(ui)], &at[cat.src(ui)], &format!("{path}.actions.{u}"))?;
            actions.push((u, f));
        }
    }
    topos.presheaf_from_actions(at, &actions).map_err(|e| invalid(path, e))
}

/// `[[c, [[x, θ_c(x)], ...]], ...]`.
pub fn components_to_json(topos: &Topos, t: &NatTrans) -> Value {
    let cat = topos.index();
    Value::Array(
        (0..cat.num_objects())
            .map(|c| json!([element_to_json(cat.objects().get(c)), pairs_to_json(t.component(c))]))
            .collect(),
    )
}

pub fn components_from_json(topos: &Topos, dom: &Presheaf, cod: &Presheaf, v: &Value, path: &str) -> Result<NatTrans> {
    let cat = topos.index();
    let mut comps: Vec<Option<FinFunction>> = vec![None; cat.num_objects()];
    for entry in array(v, path)? {
        let [c, f] = pair_of(entry, path)?;
        let ci = cat.objects().require_index(&element_from_json(c)?, "index objects").map_err(|e| invalid(path, e))?;
        comps[ci] = Some(pairs_from_json(f, dom.at(ci), cod.at(ci), path)?);
    }
    let comps = comps
        .into_iter()
        .enumerate()
        .map(|(c, f)| f.ok_or_else(|| invalid(path, format!("no component at {}", cat.objects().get(c)))))
        .collect::<Result<Vec<_>>>()?;
    topos.nat(dom, cod, comps).map_err(|e| invalid(path, e))
}

/// A map with its endpoints inline.
pub fn nat_to_json(topos: &Topos, t: &NatTrans) -> Value {
    json!({
        "dom": presheaf_to_json(topos, t.dom()),
        "cod": presheaf_to_json(topos, t.cod()),
        "components": components_to_json(topos, t),
    })
}

pub fn nat_from_json(topos: &Topos, v: &Value, path: &str) -> Result<NatTrans> {
    let dom = presheaf_from_json(topos, field(v, "dom", path)?, &format!("{path}.dom"))?;
    let cod = presheaf_from_json(topos, field(v, "cod", path)?, &format!("{path}.cod"))?;
    components_from_json(topos, &dom, &cod, field(v, "components", path)?, &format!("{path}.components"))
}

fn object(entries: impl IntoIterator<Item = (String, Value)>) -> Value {
    Value::Object(entries.into_iter().collect::<Map<String, Value>>())
}
