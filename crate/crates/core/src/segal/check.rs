use std::collections::{HashMap, HashSet};

use super::TruncatedSimplicialObject;
use crate::error::{Error, Result};
use crate::finset::FiniteCategory;
use crate::topos::{NatTrans, PsDiagram, PsLimit, Topos};

/// The Segal comparison at one level: `Xn → X1 ×_{X0} … ×_{X0} X1`.
#[derive(Clone, Debug)]
pub struct SegalLevel {
    pub n: usize,
    /// Points are `(v0, e01, v1, e12, …, vn)`.
    pub limit: PsLimit,
    pub comparison: NatTrans,
    pub iso: bool,
}

/// The outcome of the Segal check at levels 2 and 3.
#[derive(Clone, Debug)]
pub struct SegalReport {
    pub levels: Vec<SegalLevel>,
}

impl SegalReport {
    pub fn is_segal(&self) -> bool {
        self.levels.iter().all(|l| l.iso)
    }
}

/// The chain shape of length `n`: vertices `0..n` and edges `i(i+1)`, with
/// arrows from each edge to its source and target vertex.
fn chain_shape(n: usize) -> Result<(FiniteCategory, Vec<(String, String, String)>)> {
    let mut objects: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
    let mut arrows = Vec::new();
    for i in 0..n {
        let e = format!("{i}{}", i + 1);
        arrows.push((format!("s{e}"), e.clone(), i.to_string()));
        arrows.push((format!("t{e}"), e.clone(), (i + 1).to_string()));
        objects.push(e);
    }
    let objs: Vec<&str> = objects.iter().map(String::as_str).collect();
    let arr: Vec<(&str, &str, &str)> = arrows.iter().map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str())).collect();
    Ok((FiniteCategory::shape(&objs, &arr)?, arrows))
}

/// The limit `X1 ×_{X0} … ×_{X0} X1` of `n` edges, points
/// `(v0, e01, v1, …, vn)`.
pub fn chain_limit(topos: &Topos, x: &TruncatedSimplicialObject, n: usize) -> Result<PsLimit> {
    let (shape, arrows) = chain_shape(n)?;
    // shape objects sort as 0, 01, 1, 12, 2, ...
    let mut objects = Vec::new();
    for i in 0..=n {
        objects.push(x.level(0).clone());
        if i < n {
            objects.push(x.level(1).clone());
        }
    }
    let named: Vec<(&str, &NatTrans)> = arrows
        .iter()
        .map(|(a, _, _)| (a.as_str(), if a.starts_with('s') { x.source() } else { x.target() }))
        .collect();
    let d = PsDiagram::over_shape(topos, shape, objects, &named)?;
    topos.limit(&d)
}

/// Builds the comparison maps at levels 2 and 3. Requires the simplicial
/// identities.
pub fn is_segal(topos: &Topos, x: &TruncatedSimplicialObject) -> Result<SegalReport> {
    let v = x.identity_violations();
    if !v.is_empty() {
        return Err(Error::Precondition(format!("simplicial identities fail: {}", v.join("; "))));
    }
    let mut levels = Vec::new();
    for n in 2..=3 {
        let limit = chain_limit(topos, x, n)?;
        let mut cone = Vec::new();
        for i in 0..=n {
            cone.push(x.vertex(n, i));
            if i < n {
                cone.push(x.edge(n, i));
            }
        }
        let comparison = limit.mediate(topos, x.level(n), &cone)?;
        let iso = comparison.is_iso();
        levels.push(SegalLevel { n, limit, comparison, iso });
    }
    Ok(SegalReport { levels })
}

/// `Z(3)` with its two structure maps.
#[derive(Clone, Debug)]
pub struct Z3 {
    /// The limit of `X1 →t X0 ←t X1 →s X0 ←s X1`, points `(p, q, u, v, w)`
    /// with `t(u) = p = t(v)` and `s(v) = q = s(w)`.
    pub limit: PsLimit,
    /// `(d1 d3, d0 d3, d1 d0): X3 → Z`.
    pub from_x3: NatTrans,
    /// `(s0 d0, id, s0 d1): X1 → Z`.
    pub from_x1: NatTrans,
}

/// The object of equivalences `X1 ×_Z X3`.
#[derive(Clone, Debug)]
pub struct EquivalencesObject {
    /// Points `(f, σ, z)`.
    pub pullback: PsLimit,
    pub u: NatTrans,
    pub s0_lift: NatTrans,
}

impl EquivalencesObject {
    pub fn carrier(&self) -> &crate::topos::Presheaf {
        &self.pullback.apex
    }
}

/// A simplicial object that has passed the Segal check.
#[derive(Clone, Debug)]
pub struct SegalObject {
    pub x: TruncatedSimplicialObject,
    pub report: SegalReport,
    inverses: Vec<NatTrans>,
}

/// Completeness verdicts from the two formulations.
#[derive(Clone, Debug)]
pub struct CompletenessReport {
    /// `s0: X0 → X_hoequiv` is iso.
    pub s0_iso: bool,
    /// The square `X0 → X3, X0 → X1` over `Z(3)` is a pullback.
    pub pullback_square: bool,
    pub hoequiv: EquivalencesObject,
}

impl CompletenessReport {
    pub fn complete(&self) -> bool {
        self.s0_iso
    }
}

impl SegalObject {
    pub fn new(topos: &Topos, x: TruncatedSimplicialObject) -> Result<SegalObject> {
        let report = is_segal(topos, &x)?;
        if !report.is_segal() {
            let bad: Vec<String> = report.levels.iter().filter(|l| !l.iso).map(|l| l.n.to_string()).collect();
            return Err(Error::Precondition(format!("Segal comparison not iso at level {}", bad.join(", "))));
        }
        let inverses = report
            .levels
            .iter()
            .map(|l| l.comparison.inverse())
            .collect::<Result<Vec<_>>>()?;
        Ok(SegalObject { x, report, inverses })
    }

    /// Inverse of the Segal comparison at level `n ∈ {2, 3}`.
    pub fn segal_inverse(&self, n: usize) -> &NatTrans {
        &self.inverses[n - 2]
    }

    pub fn segal_limit(&self, n: usize) -> &PsLimit {
        &self.report.levels[n - 2].limit
    }

    pub fn z3(&self, topos: &Topos) -> Result<Z3> {
        let x = &self.x;
        let shape = FiniteCategory::shape(
            &["p", "q", "u", "v", "w"],
            &[("tu", "u", "p"), ("tv", "v", "p"), ("sv", "v", "q"), ("sw", "w", "q")],
        )?;
        let (x0, x1) = (x.level(0).clone(), x.level(1).clone());
        let d = PsDiagram::over_shape(
            topos,
            shape,
            vec![x0.clone(), x0, x1.clone(), x1.clone(), x1],
            &[("tu", x.target()), ("tv", x.target()), ("sv", x.source()), ("sw", x.source())],
        )?;
        let limit = topos.limit(&d)?;
        let (d, s) = (|n, i| x.d(n, i).clone(), |n, i| x.s(n, i).clone());
        let u3 = d(3, 3).then(&d(2, 1))?;
        let v3 = d(3, 3).then(&d(2, 0))?;
        let w3 = d(3, 0).then(&d(2, 1))?;
        let from_x3 = limit.mediate(
            topos,
            x.level(3),
            &[v3.then(x.target())?, v3.then(x.source())?, u3, v3, w3],
        )?;
        let id1 = topos.identity(x.level(1));
        let from_x1 = limit.mediate(
            topos,
            x.level(1),
            &[
                x.target().clone(),
                x.source().clone(),
                x.target().then(&s(0, 0))?,
                id1,
                x.source().then(&s(0, 0))?,
            ],
        )?;
        Ok(Z3 { limit, from_x3, from_x1 })
    }

    pub fn hoequiv(&self, topos: &Topos) -> Result<EquivalencesObject> {
        let z = self.z3(topos)?;
        let pullback = topos.pullback(&z.from_x1, &z.from_x3)?;
        let u = pullback.legs[0].clone();
        if !u.is_mono() {
            return Err(Error::Internal("U is not mono".into()));
        }
        let x = &self.x;
        let s0 = x.s(0, 0).clone();
        let sss = s0.then(x.s(1, 0))?.then(x.s(2, 0))?;
        let s0_lift = pullback.mediate(topos, x.level(0), &[s0.clone(), sss, s0.then(&z.from_x1)?])?;
        Ok(EquivalencesObject { pullback, u, s0_lift })
    }

    /// Both completeness formulations; disagreement is an internal error.
    pub fn completeness(&self, topos: &Topos) -> Result<CompletenessReport> {
        let hoequiv = self.hoequiv(topos)?;
        let s0_iso = hoequiv.s0_lift.is_iso();
        let pullback_square = self.pullback_square_route()?;
        if s0_iso != pullback_square {
            return Err(Error::Internal(format!(
                "completeness formulations disagree: s0 iso = {s0_iso}, pullback square = {pullback_square}"
            )));
        }
        Ok(CompletenessReport { s0_iso, pullback_square, hoequiv })
    }

    pub fn is_complete(&self, topos: &Topos) -> Result<bool> {
        Ok(self.completeness(topos)?.complete())
    }

    /// Pointwise: the pairs `(f, σ) ∈ X1 × X3` that agree in `Z(3)`, joined by
    /// their `Z(3)` image, must be exactly the image of `X0` under
    /// `(s0, s0 s0 s0)`, with that map injective.
    fn pullback_square_route(&self) -> Result<bool> {
        let x = &self.x;
        let comp = |maps: &[&NatTrans]| -> Result<NatTrans> {
            let mut m = maps[0].clone();
            for f in &maps[1..] {
                m = m.then(f)?;
            }
            Ok(m)
        };
        let u3 = comp(&[x.d(3, 3), x.d(2, 1)])?;
        let v3 = comp(&[x.d(3, 3), x.d(2, 0)])?;
        let w3 = comp(&[x.d(3, 0), x.d(2, 1)])?;
        let u1 = comp(&[x.target(), x.s(0, 0)])?;
        let w1 = comp(&[x.source(), x.s(0, 0)])?;
        let s0 = x.s(0, 0);
        let sss = comp(&[x.s(0, 0), x.s(1, 0), x.s(2, 0)])?;
        for c in 0..x.level(0).sets().len() {
            let mut by_key: HashMap<(usize, usize, usize), Vec<usize>> = HashMap::new();
            for k in 0..x.level(3).at(c).len() {
                let key = (u3.component(c).at(k), v3.component(c).at(k), w3.component(c).at(k));
                by_key.entry(key).or_default().push(k);
            }
            let mut pairs: HashSet<(usize, usize)> = HashSet::new();
            for f in 0..x.level(1).at(c).len() {
                let key = (u1.component(c).at(f), f, w1.component(c).at(f));
                for &k in by_key.get(&key).into_iter().flatten() {
                    pairs.insert((f, k));
                }
            }
            let image: HashSet<(usize, usize)> = (0..x.level(0).at(c).len())
                .map(|p| (s0.component(c).at(p), sss.component(c).at(p)))
                .collect();
            if image.len() != x.level(0).at(c).len() || image != pairs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether `f: D → X1` factors through `U`.
    pub fn is_hoequiv_morphism(&self, eq: &EquivalencesObject, f: &NatTrans) -> Result<bool> {
        if f.cod() != self.x.level(1) {
            return Err(Error::Invalid("not a morphism into X1".into()));
        }
        Ok((0..f.dom().sets().len())
            .all(|c| (0..f.dom().at(c).len()).all(|k| eq.u.hits(c, f.component(c).at(k)))))
    }

    /// The lift of `f: D → X1` through `U`, if it exists.
    pub fn hoequiv_lift(&self, topos: &Topos, eq: &EquivalencesObject, f: &NatTrans) -> Result<Option<NatTrans>> {
        if !self.is_hoequiv_morphism(eq, f)? {
            return Ok(None);
        }
        let tables = (0..f.dom().sets().len())
            .map(|c| {
                let u = eq.u.component(c).indices();
                (0..f.dom().at(c).len())
                    .map(|k| u.iter().position(|&j| j == f.component(c).at(k)).expect("hit"))
                    .collect()
            })
            .collect();
        let lift = topos.nat_unchecked(f.dom(), eq.carrier(), tables);
        topos.check_nat(&lift)?;
        Ok(Some(lift))
    }

    /// Whether `f: 1 → X0` is final: the arrows into `f`, projected to their
    /// source, form an isomorphism onto `X0`.
    pub fn is_final_object(&self, topos: &Topos, f: &NatTrans) -> Result<bool> {
        let x = &self.x;
        if f.cod() != x.level(0) || f.dom() != &topos.terminal() {
            return Err(Error::Invalid("a final object candidate is a global element of X0".into()));
        }
        let x0 = x.level(0);
        let sq = topos.product(&[x0.clone(), x0.clone()])?;
        let st = sq.mediate(topos, x.level(1), &[x.source().clone(), x.target().clone()])?;
        let x0_times_1 = topos.product(&[x0.clone(), topos.terminal()])?;
        let id_f = topos.product_map(&x0_times_1, &sq, &[topos.identity(x0), f.clone()])?;
        let pb = topos.pullback(&st, &id_f)?;
        let proj = pb.legs[1].then(&x0_times_1.legs[0])?;
        Ok(proj.is_iso())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::finset::{FinFunction, FinSet};
    use crate::segal::{nerve_truncation, CategoryObject};

    fn segal_nerve(c: &FiniteCategory) -> (Topos, SegalObject) {
        let t = Topos::finset();
        let co = CategoryObject::from_finite_category(&t, c).unwrap();
        let n = nerve_truncation(&t, &co).unwrap();
        let s = SegalObject::new(&t, n.simplicial).unwrap();
        (t, s)
    }

    fn global_object(t: &Topos, x: &SegalObject, name: &str) -> NatTrans {
        let x0 = x.x.level(0);
        let one = t.terminal();
        t.nat_from_fn(&one, x0, |_, _| name.into()).unwrap()
    }

    #[test]
    fn corpus_nerves_are_segal() {
        for (_, c) in corpus::finite_categories() {
            segal_nerve(&c);
        }
        let t = Topos::finset();
        let x = TruncatedSimplicialObject::constant(&t, &t.terminal());
        assert!(is_segal(&t, &x).unwrap().is_segal());
    }

    #[test]
    fn c2_z3_has_eight_points() {
        let (t, x) = segal_nerve(&corpus::c2());
        let z = x.z3(&t).unwrap();
        assert_eq!(z.limit.apex.total_size(), 8);
        assert_eq!(x.segal_limit(3).apex.total_size(), 8);
    }

    #[test]
    fn hoequiv_of_chain_and_group() {
        let (t, x) = segal_nerve(&corpus::chain(1));
        let eq = x.hoequiv(&t).unwrap();
        assert_eq!(eq.carrier().total_size(), 2);
        assert!(x.is_complete(&t).unwrap());
        let (t, x) = segal_nerve(&corpus::c2());
        let eq = x.hoequiv(&t).unwrap();
        assert_eq!(eq.carrier().total_size(), 2);
        assert!(!x.is_complete(&t).unwrap());
    }

    #[test]
    fn c2_nerve_with_three_element_x2_fails() {
        let t = Topos::finset();
        let co = CategoryObject::from_finite_category(&t, &corpus::c2()).unwrap();
        let n = nerve_truncation(&t, &co).unwrap();
        let x = n.simplicial;
        // X2 replaced by a 3-element set with faces sending everything to e
        let three = t.constant(&FinSet::range(3));
        let levels = vec![x.level(0).clone(), x.level(1).clone(), three.clone(), x.level(3).clone()];
        let to_e = |dom: &crate::topos::Presheaf| {
            t.nat_from_fn(dom, x.level(1), |_, _| "e".into()).unwrap()
        };
        let to_0 = t.nat_from_fn(x.level(1), &three, |_, _| "0".into()).unwrap();
        let x3_to_x2 = t.nat_from_fn(x.level(3), &three, |_, _| "0".into()).unwrap();
        let x2_to_x3 = t
            .nat(&three, x.level(3), vec![FinFunction::from_indices(FinSet::range(3), x.level(3).at(0).clone(), vec![0, 0, 0]).unwrap()])
            .unwrap();
        let broken = TruncatedSimplicialObject::new(
            levels,
            vec![
                vec![x.d(1, 0).clone(), x.d(1, 1).clone()],
                vec![to_e(&three), to_e(&three), to_e(&three)],
                vec![x3_to_x2.clone(), x3_to_x2.clone(), x3_to_x2.clone(), x3_to_x2],
            ],
            vec![vec![x.s(0, 0).clone()], vec![to_0.clone(), to_0], vec![x2_to_x3.clone(), x2_to_x3.clone(), x2_to_x3]],
        )
        .unwrap();
        match is_segal(&t, &broken) {
            Err(Error::Precondition(_)) => {}
            Ok(r) => assert!(!r.is_segal()),
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn final_objects_in_a_chain() {
        let (t, x) = segal_nerve(&corpus::chain(1));
        assert!(x.is_final_object(&t, &global_object(&t, &x, "1")).unwrap());
        assert!(!x.is_final_object(&t, &global_object(&t, &x, "0")).unwrap());
        let (t, x) = segal_nerve(&FiniteCategory::terminal());
        assert!(x.is_final_object(&t, &global_object(&t, &x, "*")).unwrap());
    }

    #[test]
    fn hoequiv_morphisms() {
        let (t, x) = segal_nerve(&corpus::chain(1));
        let eq = x.hoequiv(&t).unwrap();
        let one = t.terminal();
        let arrow = t
            .nat_from_fn(&one, x.x.level(1), |_, _| crate::Element::tuple(["0".into(), "1".into()]))
            .unwrap();
        assert!(!x.is_hoequiv_morphism(&eq, &arrow).unwrap());
        let id0 = global_object(&t, &x, "0").then(x.x.s(0, 0)).unwrap();
        assert!(x.is_hoequiv_morphism(&eq, &id0).unwrap());
        assert!(x.hoequiv_lift(&t, &eq, &id0).unwrap().is_some());
    }
}
