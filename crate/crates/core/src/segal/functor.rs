use super::{Nerve, SegalObject};
use crate::error::{Error, Result};
use crate::topos::{HomSearch, NatTrans, Topos};

/// A map of Segal objects `F: W → V`, one component per level.
#[derive(Clone, Debug)]
pub struct SimplicialMap {
    pub source: SegalObject,
    pub target: SegalObject,
    pub components: Vec<NatTrans>,
}

impl SimplicialMap {
    /// Checks that the components commute with every face and degeneracy.
    pub fn new(source: SegalObject, target: SegalObject, components: Vec<NatTrans>) -> Result<SimplicialMap> {
        let (w, v) = (&source.x, &target.x);
        if components.len() != 4 {
            return Err(Error::Invalid("a simplicial map has components at levels 0 to 3".into()));
        }
        for (n, f) in components.iter().enumerate() {
            if f.dom() != w.level(n) || f.cod() != v.level(n) {
                return Err(Error::Invalid(format!("component {n} has the wrong endpoints")));
            }
        }
        for n in 1..=3 {
            for i in 0..=n {
                if w.d(n, i).then(&components[n - 1])? != components[n].then(v.d(n, i))? {
                    return Err(Error::NotNatural(format!("component does not commute with d({n},{i})")));
                }
            }
        }
        for n in 0..=2 {
            for i in 0..=n {
                if w.s(n, i).then(&components[n + 1])? != components[n].then(v.s(n, i))? {
                    return Err(Error::NotNatural(format!("component does not commute with s({n},{i})")));
                }
            }
        }
        Ok(SimplicialMap { source, target, components })
    }

    pub fn identity(x: &SegalObject) -> SimplicialMap {
        let components = x.x.levels().iter().map(NatTrans::identity).collect();
        SimplicialMap { source: x.clone(), target: x.clone(), components }
    }

    /// The map of nerves induced by `F0: C0 → D0`, `F1: C1 → D1`.
    pub fn between_nerves(topos: &Topos, w: &Nerve, v: &Nerve, f0: &NatTrans, f1: &NatTrans) -> Result<SimplicialMap> {
        let [a, b, x] = &w.pairs.legs[..] else { unreachable!() };
        let f2 = v.pairs.mediate(topos, &w.pairs.apex, &[a.then(f1)?, b.then(f1)?, x.then(f0)?])?;
        let legs3: Vec<NatTrans> = w
            .triples
            .legs
            .iter()
            .enumerate()
            .map(|(i, l)| l.then(if i < 3 { f1 } else { f0 }))
            .collect::<Result<_>>()?;
        let f3 = v.triples.mediate(topos, &w.triples.apex, &legs3)?;
        let source = SegalObject::new(topos, w.simplicial.clone())?;
        let target = SegalObject::new(topos, v.simplicial.clone())?;
        SimplicialMap::new(source, target, vec![f0.clone(), f1.clone(), f2, f3])
    }

    /// `W1 → V1 ×_{V0 × V0} (W0 × W0)` is an isomorphism.
    pub fn is_fully_faithful(&self, topos: &Topos) -> Result<bool> {
        let (w, v) = (&self.source.x, &self.target.x);
        let (f0, f1) = (&self.components[0], &self.components[1]);
        let vv = topos.product(&[v.level(0).clone(), v.level(0).clone()])?;
        let ww = topos.product(&[w.level(0).clone(), w.level(0).clone()])?;
        let st_v = vv.mediate(topos, v.level(1), &[v.source().clone(), v.target().clone()])?;
        let st_w = ww.mediate(topos, w.level(1), &[w.source().clone(), w.target().clone()])?;
        let ff = topos.product_map(&ww, &vv, &[f0.clone(), f0.clone()])?;
        let pb = topos.pullback(&st_v, &ff)?;
        let comparison = pb.mediate(topos, w.level(1), &[f1.clone(), st_w.clone(), st_w.then(&ff)?])?;
        Ok(comparison.is_iso())
    }

    /// `t ∘ U ∘ pr: W0 ×_{V0} V_hoequiv → V0` (pulled back along `s ∘ U`) has
    /// a section.
    pub fn is_essentially_surjective(&self, topos: &Topos) -> Result<bool> {
        let v = &self.target;
        let eq = v.hoequiv(topos)?;
        let su = eq.u.then(v.x.source())?;
        let pb = topos.pullback(&self.components[0], &su)?;
        let end = pb.legs[1].then(&eq.u)?.then(v.x.target())?;
        let id = topos.identity(v.x.level(0));
        Ok(HomSearch::new(topos, v.x.level(0), &pb.apex).over(&end, &id).first()?.is_some())
    }

    pub fn is_equivalence(&self, topos: &Topos) -> Result<bool> {
        Ok(self.is_fully_faithful(topos)? && self.is_essentially_surjective(topos)?)
    }
}
