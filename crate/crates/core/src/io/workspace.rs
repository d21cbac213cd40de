use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::{
    array, category_from_json, category_to_json, components_from_json, components_to_json, element_from_json,
    element_to_json, field, invalid, object, pair_of, presheaf_from_json, presheaf_to_json,
};
use crate::corpus;
use crate::error::{Error, Result};
use crate::finset::{Element, FiniteCategory};
use crate::segal::{is_segal, nerve_unchecked, CategoryObject, SegalObject, TruncatedSimplicialObject};
use crate::topos::{NatTrans, Presheaf, Topos};

pub const FORMAT_VERSION: u64 = 1;

/// A named map between named presheaves.
#[derive(Clone, Debug)]
pub struct MapEntry {
    pub dom: String,
    pub cod: String,
    pub map: NatTrans,
}

/// A category object given by named presheaves and maps, with `m` as a
/// table on composable pairs.
#[derive(Clone, Debug)]
pub struct CategoryObjectEntry {
    pub names: [String; 6],
    pub object: CategoryObject,
}

/// Where a simplicial object comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimplicialSource {
    /// The nerve of a named finite category, as constant presheaves. The
    /// axioms are not checked, so a broken table gives a broken object.
    Nerve { category: String },
    /// The nerve of a named category object.
    CategoryObject { name: String },
    Explicit {
        levels: Vec<String>,
        faces: Vec<Vec<String>>,
        degeneracies: Vec<Vec<String>>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    /// A finite category or a category object satisfies the axioms.
    Valid,
    Segal,
    Complete,
    Mono,
    Univalent,
    /// For a mono: univalent iff its classifying map is mono.
    Classification,
}

impl CheckKind {
    fn name(self) -> &'static str {
        match self {
            CheckKind::Valid => "valid",
            CheckKind::Segal => "segal",
            CheckKind::Complete => "complete",
            CheckKind::Mono => "mono",
            CheckKind::Univalent => "univalent",
            CheckKind::Classification => "classification",
        }
    }

    fn parse(s: &str) -> Option<CheckKind> {
        [
            CheckKind::Valid,
            CheckKind::Segal,
            CheckKind::Complete,
            CheckKind::Mono,
            CheckKind::Univalent,
            CheckKind::Classification,
        ]
        .into_iter()
        .find(|k| k.name() == s)
    }
}

/// An assertion about a named entity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub kind: CheckKind,
    pub target: String,
    pub expect: bool,
}

/// A topos with named presheaves, maps, categories, category objects,
/// simplicial objects and checks. Names are resolved and structure is
/// validated on load; category axioms and Segal conditions are not.
#[derive(Clone, Debug)]
pub struct Workspace {
    /// A bundled index category name, or `None` for an inline table.
    pub index_name: Option<String>,
    pub topos: Topos,
    pub presheaves: BTreeMap<String, Presheaf>,
    pub maps: BTreeMap<String, MapEntry>,
    pub categories: BTreeMap<String, FiniteCategory>,
    pub category_objects: BTreeMap<String, CategoryObjectEntry>,
    pub simplicial: BTreeMap<String, (SimplicialSource, TruncatedSimplicialObject)>,
    pub checks: BTreeMap<String, Check>,
}

/// Index categories available by name; `finset` is the terminal category.
pub fn bundled_index(name: &str) -> Option<FiniteCategory> {
    match name {
        "finset" => Some(FiniteCategory::terminal()),
        "sierpinski" => Some(corpus::chain(1)),
        _ => corpus::finite_categories().into_iter().find(|(n, _)| *n == name).map(|(_, c)| c),
    }
}

fn entries<'v>(v: &'v Value, key: &str) -> Result<Vec<(&'v String, &'v Value)>> {
    match v.get(key) {
        None => Ok(Vec::new()),
        Some(Value::Object(o)) => Ok(o.iter().collect()),
        Some(_) => Err(invalid(key, "expected an object of named entries")),
    }
}

fn name_list(v: &Value, path: &str) -> Result<Vec<String>> {
    array(v, path)?
        .iter()
        .map(|s| s.as_str().map(str::to_string).ok_or_else(|| invalid(path, "expected a name")))
        .collect()
}

impl Workspace {
    pub fn from_str(text: &str, bound: usize) -> Result<Workspace> {
        Self::from_json(&super::parse(text)?, bound)
    }

    pub fn from_json(v: &Value, bound: usize) -> Result<Workspace> {
        match v.get("version").and_then(Value::as_u64) {
            Some(FORMAT_VERSION) => {}
            Some(other) => return Err(invalid("version", format!("unsupported format version {other}"))),
            None => return Err(invalid("version", "missing format version")),
        }
        let index = field(v, "index", "workspace")?;
        let (index_name, cat) = match index {
            Value::String(name) => {
                (Some(name.clone()), bundled_index(name).ok_or_else(|| invalid("index", format!("no bundled category {name}")))?)
            }
            table => (None, category_from_json(table, "index")?),
        };
        let problems = cat.validate();
        if !problems.is_empty() {
            return Err(invalid("index", problems.join("; ")));
        }
        let topos = Topos::new(cat)?.with_bound(bound);
        let mut ws = Workspace {
            index_name,
            topos,
            presheaves: BTreeMap::new(),
            maps: BTreeMap::new(),
            categories: BTreeMap::new(),
            category_objects: BTreeMap::new(),
            simplicial: BTreeMap::new(),
            checks: BTreeMap::new(),
        };
        for (name, p) in entries(v, "presheaves")? {
            let p = presheaf_from_json(&ws.topos, p, &format!("presheaves.{name}"))?;
            ws.presheaves.insert(name.clone(), p);
        }
        for (name, m) in entries(v, "maps")? {
            let path = format!("maps.{name}");
            let dom = field(m, "dom", &path)?.as_str().ok_or_else(|| invalid(&path, "dom must be a name"))?;
            let cod = field(m, "cod", &path)?.as_str().ok_or_else(|| invalid(&path, "cod must be a name"))?;
            let (d, c) = (ws.presheaf(dom)?, ws.presheaf(cod)?);
            let map = match (m.get("components"), m.get("map")) {
                (Some(comps), _) => components_from_json(&ws.topos, d, c, comps, &path)?,
                (None, Some(pairs)) if ws.topos.num_objects() == 1 => {
                    let obj = element_to_json(ws.topos.index().objects().get(0));
                    components_from_json(&ws.topos, d, c, &json!([[obj, pairs]]), &path)?
                }
                _ => return Err(invalid(&path, "missing field \"components\"")),
            };
            ws.maps.insert(name.clone(), MapEntry { dom: dom.into(), cod: cod.into(), map });
        }
        for (name, c) in entries(v, "categories")? {
            ws.categories.insert(name.clone(), category_from_json(c, &format!("categories.{name}"))?);
        }
        for (name, c) in entries(v, "category_objects")? {
            let entry = ws.load_category_object(c, &format!("category_objects.{name}"))?;
            ws.category_objects.insert(name.clone(), entry);
        }
        for (name, s) in entries(v, "simplicial")? {
            let path = format!("simplicial.{name}");
            let source = if let Some(c) = s.get("nerve") {
                SimplicialSource::Nerve { category: c.as_str().ok_or_else(|| invalid(&path, "nerve names a category"))?.into() }
            } else if let Some(c) = s.get("category_object") {
                SimplicialSource::CategoryObject {
                    name: c.as_str().ok_or_else(|| invalid(&path, "category_object names a category object"))?.into(),
                }
            } else {
                let lists = |key: &str| -> Result<Vec<Vec<String>>> {
                    array(field(s, key, &path)?, &path)?.iter().map(|l| name_list(l, &path)).collect()
                };
                SimplicialSource::Explicit {
                    levels: name_list(field(s, "levels", &path)?, &path)?,
                    faces: lists("faces")?,
                    degeneracies: lists("degeneracies")?,
                }
            };
            let x = ws.build_simplicial(&source).map_err(|e| invalid(&path, e))?;
            ws.simplicial.insert(name.clone(), (source, x));
        }
        for (name, c) in entries(v, "checks")? {
            let path = format!("checks.{name}");
            let kind = field(c, "kind", &path)?
                .as_str()
                .and_then(CheckKind::parse)
                .ok_or_else(|| invalid(&path, "unknown check kind"))?;
            let target = field(c, "target", &path)?.as_str().ok_or_else(|| invalid(&path, "target must be a name"))?;
            let expect = field(c, "expect", &path)?.as_bool().ok_or_else(|| invalid(&path, "expect must be a boolean"))?;
            let check = Check { kind, target: target.into(), expect };
            ws.check_target_exists(&check).map_err(|e| invalid(&path, e))?;
            ws.checks.insert(name.clone(), check);
        }
        Ok(ws)
    }

    pub fn presheaf(&self, name: &str) -> Result<&Presheaf> {
        self.presheaves.get(name).ok_or_else(|| Error::Invalid(format!("no presheaf named {name}")))
    }

    pub fn map(&self, name: &str) -> Result<&NatTrans> {
        self.maps.get(name).map(|m| &m.map).ok_or_else(|| Error::Invalid(format!("no map named {name}")))
    }

    pub fn category(&self, name: &str) -> Result<&FiniteCategory> {
        self.categories.get(name).ok_or_else(|| Error::Invalid(format!("no category named {name}")))
    }

    fn load_category_object(&self, v: &Value, path: &str) -> Result<CategoryObjectEntry> {
        let name = |key: &str| -> Result<String> {
            field(v, key, path)?.as_str().map(str::to_string).ok_or_else(|| invalid(path, format!("{key} must be a name")))
        };
        let names = [name("c0")?, name("c1")?, name("s")?, name("t")?, name("e")?, String::from("m")];
        let (c0, c1) = (self.presheaf(&names[0])?.clone(), self.presheaf(&names[1])?.clone());
        let (s, t, e) = (self.map(&names[2])?.clone(), self.map(&names[3])?.clone(), self.map(&names[4])?.clone());
        for (m, dom, cod, label) in [(&s, &c1, &c0, "s"), (&t, &c1, &c0, "t"), (&e, &c0, &c1, "e")] {
            if m.dom() != dom || m.cod() != cod {
                return Err(invalid(path, format!("{label} has the wrong endpoints")));
            }
        }
        let m_table = field(v, "m", path)?.clone();
        let pairs = CategoryObject::composable(&self.topos, &s, &t)?;
        let cat = self.topos.index();
        let mut tables: Vec<BTreeMap<Element, Element>> = vec![BTreeMap::new(); cat.num_objects()];
        for entry in array(&m_table, path)? {
            let [c, rows] = pair_of(entry, path)?;
            let c = cat.objects().require_index(&element_from_json(c)?, "index objects").map_err(|e| invalid(path, e))?;
            for row in array(rows, path)? {
                let [fg, h] = pair_of(row, path)?;
                tables[c].insert(element_from_json(fg)?, element_from_json(h)?);
            }
        }
        let mut missing = None;
        let m = self.topos.nat_from_fn(&pairs.apex, &c1, |c, pt| {
            let t = pt.as_tuple().expect("pair point");
            let key = Element::tuple([t[0].clone(), t[1].clone()]);
            match tables[c].get(&key) {
                Some(h) => h.clone(),
                None => {
                    missing.get_or_insert_with(|| key.to_string());
                    t[0].clone()
                }
            }
        });
        if let Some(key) = missing {
            return Err(invalid(path, format!("m has no value at {key}")));
        }
        let m = m.map_err(|e| invalid(path, e))?;
        Ok(CategoryObjectEntry { names, object: CategoryObject { c0, c1, s, t, e, m } })
    }

    fn build_simplicial(&self, source: &SimplicialSource) -> Result<TruncatedSimplicialObject> {
        match source {
            SimplicialSource::Nerve { category } => {
                let c = CategoryObject::from_finite_category(&self.topos, self.category(category)?)?;
                Ok(nerve_unchecked(&self.topos, &c)?.simplicial)
            }
            SimplicialSource::CategoryObject { name } => {
                let c = &self.category_objects.get(name).ok_or_else(|| Error::Invalid(format!("no category object named {name}")))?.object;
                Ok(nerve_unchecked(&self.topos, c)?.simplicial)
            }
            SimplicialSource::Explicit { levels, faces, degeneracies } => {
                let levels = levels.iter().map(|n| self.presheaf(n).cloned()).collect::<Result<Vec<_>>>()?;
                let maps = |ls: &Vec<Vec<String>>| -> Result<Vec<Vec<NatTrans>>> {
                    ls.iter().map(|l| l.iter().map(|n| self.map(n).cloned()).collect()).collect()
                };
                TruncatedSimplicialObject::new(levels, maps(faces)?, maps(degeneracies)?)
            }
        }
    }

    /// A simplicial object by name: an entry of `simplicial`, or the nerve of
    /// a named category or category object.
    pub fn simplicial_object(&self, name: &str) -> Result<TruncatedSimplicialObject> {
        if let Some((_, x)) = self.simplicial.get(name) {
            return Ok(x.clone());
        }
        if self.categories.contains_key(name) {
            return self.build_simplicial(&SimplicialSource::Nerve { category: name.into() });
        }
        if self.category_objects.contains_key(name) {
            return self.build_simplicial(&SimplicialSource::CategoryObject { name: name.into() });
        }
        Err(Error::Invalid(format!("no simplicial object, category or category object named {name}")))
    }

    fn check_target_exists(&self, check: &Check) -> Result<()> {
        let name = check.target.as_str();
        let found = match check.kind {
            CheckKind::Valid => self.categories.contains_key(name) || self.category_objects.contains_key(name),
            CheckKind::Segal | CheckKind::Complete => {
                self.simplicial.contains_key(name) || self.categories.contains_key(name) || self.category_objects.contains_key(name)
            }
            CheckKind::Mono | CheckKind::Univalent | CheckKind::Classification => self.maps.contains_key(name),
        };
        if found {
            Ok(())
        } else {
            Err(Error::Invalid(format!("{} check on unknown target {name}", check.kind.name())))
        }
    }

    /// Whether the simplicial object named `name` is Segal; failed simplicial
    /// identities count as not Segal and are returned.
    pub fn segal_verdict(&self, name: &str) -> Result<(bool, Vec<String>)> {
        let x = self.simplicial_object(name)?;
        let v = x.identity_violations();
        if !v.is_empty() {
            return Ok((false, v));
        }
        Ok((is_segal(&self.topos, &x)?.is_segal(), Vec::new()))
    }

    /// Evaluates a check: the observed value.
    pub fn evaluate(&self, check: &Check) -> Result<bool> {
        let t = &self.topos;
        let name = check.target.as_str();
        match check.kind {
            CheckKind::Valid => {
                if let Some(c) = self.categories.get(name) {
                    Ok(c.validate().is_empty())
                } else {
                    let c = &self.category_objects.get(name).ok_or_else(|| Error::Invalid(format!("unknown {name}")))?.object;
                    Ok(c.violations(t)?.is_empty())
                }
            }
            CheckKind::Segal => Ok(self.segal_verdict(name)?.0),
            CheckKind::Complete => {
                if !self.segal_verdict(name)?.0 {
                    return Err(Error::Precondition(format!("{name} is not Segal")));
                }
                SegalObject::new(t, self.simplicial_object(name)?)?.is_complete(t)
            }
            CheckKind::Mono => Ok(t.is_mono(self.map(name)?)),
            CheckKind::Univalent => Ok(t.is_univalent(self.map(name)?)?.univalent),
            CheckKind::Classification => Ok(t.check_mono_classification(self.map(name)?)?.holds()),
        }
    }

    /// Canonical JSON; parsing it gives back an equal workspace.
    pub fn to_json(&self) -> Value {
        let t = &self.topos;
        let index = match &self.index_name {
            Some(n) => Value::String(n.clone()),
            None => category_to_json(t.index()),
        };
        let presheaves = object(self.presheaves.iter().map(|(n, p)| (n.clone(), presheaf_to_json(t, p))));
        let maps = object(self.maps.iter().map(|(n, m)| {
            (n.clone(), json!({ "dom": m.dom, "cod": m.cod, "components": components_to_json(t, &m.map) }))
        }));
        let categories = object(self.categories.iter().map(|(n, c)| (n.clone(), category_to_json(c))));
        let category_objects = object(self.category_objects.iter().map(|(n, c)| {
            let [c0, c1, s, tt, e, _] = &c.names;
            (n.clone(), json!({ "c0": c0, "c1": c1, "s": s, "t": tt, "e": e, "m": canonical_m_table(t, &c.object) }))
        }));
        let simplicial = object(self.simplicial.iter().map(|(n, (src, _))| {
            let v = match src {
                SimplicialSource::Nerve { category } => json!({ "nerve": category }),
                SimplicialSource::CategoryObject { name } => json!({ "category_object": name }),
                SimplicialSource::Explicit { levels, faces, degeneracies } => {
                    json!({ "levels": levels, "faces": faces, "degeneracies": degeneracies })
                }
            };
            (n.clone(), v)
        }));
        let checks = object(self.checks.iter().map(|(n, c)| {
            (n.clone(), json!({ "kind": c.kind.name(), "target": c.target, "expect": c.expect }))
        }));
        json!({
            "version": FORMAT_VERSION,
            "index": index,
            "presheaves": presheaves,
            "maps": maps,
            "categories": categories,
            "category_objects": category_objects,
            "simplicial": simplicial,
            "checks": checks,
        })
    }
}

fn canonical_m_table(topos: &Topos, c: &CategoryObject) -> Value {
    let cat = topos.index();
    Value::Array(
        (0..cat.num_objects())
            .map(|x| {
                let rows: Vec<Value> = c
                    .m
                    .component(x)
                    .pairs()
                    .map(|(pt, h)| {
                        let p = pt.as_tuple().expect("pair point");
                        json!([[element_to_json(&p[0]), element_to_json(&p[1])], element_to_json(h)])
                    })
                    .collect();
                json!([element_to_json(cat.objects().get(x)), rows])
            })
            .collect(),
    )
}
