use crate::error::{Error, Result};
use crate::segal::{nerve_truncation, CategoryObject, Nerve, SegalObject};
use crate::topos::{DependentProduct, HomSearch, NatTrans, PsLimit, SliceMap, Topos};

/// The internal category of fiberwise maps of `p: E → B`.
///
/// `M = (p × id)_*(E × E)`: over `(a, b)` its elements are the maps from the
/// fiber over `a` to the fiber over `b`. Level 0 of the nerve is `B`, level `n`
/// the `n`-fold wide pullback of `M` over `B`.
#[derive(Clone, Debug)]
pub struct NerveOfMap {
    pub p: NatTrans,
    /// `M` over `B × B`.
    pub m: DependentProduct,
    pub bb: PsLimit,
    pub category: CategoryObject,
    pub nerve: Nerve,
    pub segal: SegalObject,
    /// The comparison `M → (B × E → B × B)^(E × B → B × B)`, an isomorphism.
    pub alternative: NatTrans,
}

impl NerveOfMap {
    /// `M` as a presheaf.
    pub fn fiberwise_maps(&self) -> &crate::topos::Presheaf {
        self.m.object()
    }

    /// `(s, t): M → B × B`.
    pub fn endpoints(&self) -> &NatTrans {
        &self.m.slice.proj
    }
}

impl Topos {
    pub fn nerve_of_map(&self, p: &NatTrans) -> Result<NerveOfMap> {
        let (e, b) = (p.dom(), p.cod());
        let eb = self.product(&[e.clone(), b.clone()])?;
        let be = self.product(&[b.clone(), e.clone()])?;
        let bb = self.product(&[b.clone(), b.clone()])?;
        let ee = self.product(&[e.clone(), e.clone()])?;
        let id_e = self.identity(e);
        let id_b = self.identity(b);
        let along = self.product_map(&eb, &bb, &[p.clone(), id_b.clone()])?;
        let family = SliceMap::new(self.product_map(&ee, &eb, &[id_e.clone(), p.clone()])?);
        let m = self.dependent_product(&along, &family)?;
        let proj = &m.slice.proj;
        let s = proj.then(&bb.legs[0])?;
        let t = proj.then(&bb.legs[1])?;

        // e: the transpose of the diagonal of E, over the diagonal of B
        let diag = bb.mediate(self, b, &[id_b.clone(), id_b.clone()])?;
        let g = SliceMap::new(diag.clone());
        let pb = self.pullback(&along, &diag)?;
        let e_leg = pb.legs[0].then(&eb.legs[0])?;
        let h = ee.mediate(self, &pb.apex, &[e_leg.clone(), e_leg])?;
        let unit = m.transpose(self, &g, &pb, &h)?;
        self.check_unique_transpose(&m, &g, &pb, &h, &unit)?;

        // m: transpose of (e, ψ(φ(e))) over M ×_B M
        let pairs = CategoryObject::composable(self, &s, &t)?;
        let (phi, psi) = (&pairs.legs[0], &pairs.legs[1]);
        let g2 = SliceMap::new(bb.mediate(self, &pairs.apex, &[phi.then(&s)?, psi.then(&t)?])?);
        let pb2 = self.pullback(&along, &g2.proj)?;
        let (counit_pb, counit) = m.counit(self)?;
        let start = pb2.legs[0].then(&eb.legs[0])?;
        let phi2 = pb2.legs[1].then(phi)?;
        let psi2 = pb2.legs[1].then(psi)?;
        let eval = |x: &NatTrans, f: &NatTrans| -> Result<NatTrans> {
            let point = eb.mediate(self, &pb2.apex, &[x.clone(), f.then(&t)?])?;
            let at = counit_pb.mediate(self, &pb2.apex, &[point, f.clone(), f.then(proj)?])?;
            at.then(&counit)?.then(&ee.legs[1])
        };
        let mid = eval(&start, &phi2)?;
        let end = eval(&mid, &psi2)?;
        let h2 = ee.mediate(self, &pb2.apex, &[start, end])?;
        let comp = m.transpose(self, &g2, &pb2, &h2)?;

        let category = CategoryObject {
            c0: b.clone(),
            c1: m.object().clone(),
            s,
            t,
            e: unit,
            m: comp,
        };
        let violations = category.violations(self)?;
        if !violations.is_empty() {
            return Err(Error::Internal(format!("fiberwise maps fail: {}", violations.join("; "))));
        }
        let nerve = nerve_truncation(self, &category)?;
        let segal = SegalObject::new(self, nerve.simplicial.clone())
            .map_err(|err| Error::Internal(format!("nerve of a map is not Segal: {err}")))?;
        let alternative = self.alternative_comparison(p, &eb, &be, &bb, &ee, &along, &m)?;
        Ok(NerveOfMap { p: p.clone(), m, bb, category, nerve, segal, alternative })
    }

    /// Enumerates the maps `Y → Π` over the base whose counit composite is
    /// `h`; exactly one, `expected`, must exist.
    fn check_unique_transpose(
        &self,
        m: &DependentProduct,
        g: &SliceMap,
        pb: &PsLimit,
        h: &NatTrans,
        expected: &NatTrans,
    ) -> Result<()> {
        let (counit_pb, counit) = m.counit(self)?;
        let mut found = Vec::new();
        for k in HomSearch::new(self, &g.total, m.object()).over(&m.slice.proj, &g.proj).maps()? {
            let pulled = counit_pb.mediate(self, &pb.apex, &[pb.legs[0].clone(), pb.legs[1].then(&k)?, pb.legs[2].clone()])?;
            if &pulled.then(&counit)? == h {
                found.push(k);
            }
        }
        if found.len() != 1 || &found[0] != expected {
            return Err(Error::Internal(format!("identity section: {} candidates", found.len())));
        }
        Ok(())
    }

    /// `M ≅ Π_{p × id}((E × B) ×_{B × B} (B × E))`, the slice exponential of
    /// `id × p: B × E → B × B` by `p × id: E × B → B × B`.
    #[allow(clippy::too_many_arguments)]
    fn alternative_comparison(
        &self,
        p: &NatTrans,
        eb: &PsLimit,
        be: &PsLimit,
        bb: &PsLimit,
        ee: &PsLimit,
        along: &NatTrans,
        m: &DependentProduct,
    ) -> Result<NatTrans> {
        let b = p.cod();
        let other = self.product_map(be, bb, &[self.identity(b), p.clone()])?;
        let pb = self.pullback(along, &other)?;
        let alt = self.dependent_product(along, &SliceMap::new(pb.legs[0].clone()))?;
        // (e, e') ↦ ((e, p e'), (p e, e'), (p e, p e'))
        let (x, y) = (&ee.legs[0], &ee.legs[1]);
        let to_eb = eb.mediate(self, &ee.apex, &[x.clone(), y.then(p)?])?;
        let to_be = be.mediate(self, &ee.apex, &[x.then(p)?, y.clone()])?;
        let to_bb = bb.mediate(self, &ee.apex, &[x.then(p)?, y.then(p)?])?;
        let h = pb.mediate(self, &ee.apex, &[to_eb, to_be, to_bb])?;
        if !h.is_iso() {
            return Err(Error::Internal("E × E is not the fibered product".into()));
        }
        let cmp = m.induced(self, &alt, &h)?;
        if !cmp.is_iso() {
            return Err(Error::Internal("the two constructions of M are not isomorphic".into()));
        }
        Ok(cmp)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::finset::FinSet;

    fn finset_map(t: &Topos, dom: &[&str], cod: &[&str], f: &[(&str, &str)]) -> NatTrans {
        let (a, b) = (t.constant(&FinSet::atoms(dom)), t.constant(&FinSet::atoms(cod)));
        t.nat_from_fn(&a, &b, |_, e| {
            let s = e.as_atom().unwrap();
            f.iter().find(|(x, _)| *x == s).unwrap().1.into()
        })
        .unwrap()
    }

    #[test]
    fn identity_map_gives_powers_of_b() {
        let t = Topos::finset();
        let b = t.constant(&FinSet::range(2));
        let n = t.nerve_of_map(&t.identity(&b)).unwrap();
        let sizes: Vec<usize> = n.nerve.simplicial.levels().iter().map(|l| l.total_size()).collect();
        assert_eq!(sizes, vec![2, 4, 8, 16]);
        assert!(n.endpoints().is_iso());
    }

    #[test]
    fn map_to_a_point_gives_endofunctions() {
        let t = Topos::finset();
        let p = finset_map(&t, &["a", "b", "c"], &["x"], &[("a", "x"), ("b", "x"), ("c", "x")]);
        let n = t.nerve_of_map(&p).unwrap();
        assert_eq!(n.fiberwise_maps().total_size(), 27);
    }

    #[test]
    fn fiberwise_maps_are_functions_between_fibers() {
        let t = Topos::finset();
        let p = finset_map(&t, &["a", "b", "c"], &["x", "y", "z"], &[("a", "x"), ("b", "x"), ("c", "y")]);
        let n = t.nerve_of_map(&p).unwrap();
        let fib = [2usize, 1, 0];
        let proj = n.endpoints();
        for (k, pt) in n.bb.apex.at(0).iter().enumerate() {
            let (i, j) = (n.bb.components(0, k)[0], n.bb.components(0, k)[1]);
            let count = (0..proj.dom().at(0).len()).filter(|&m| proj.component(0).at(m) == k).count();
            assert_eq!(count, fib[j].pow(fib[i] as u32), "{pt:?}");
        }
    }

    #[test]
    fn bijection_has_one_map_between_singletons() {
        let t = Topos::finset();
        let p = finset_map(&t, &["a", "b"], &["x", "y"], &[("a", "x"), ("b", "y")]);
        let n = t.nerve_of_map(&p).unwrap();
        assert_eq!(n.fiberwise_maps().total_size(), 4);
    }

    #[test]
    fn nerves_in_presheaf_toposes_are_categories() {
        for (name, t) in corpus::toposes() {
            if name == "s3-sets" {
                continue;
            }
            for p in t.maps_up_to_iso(1).unwrap() {
                let n = t.nerve_of_map(&p).unwrap();
                assert!(n.category.violations(&t).unwrap().is_empty(), "{name}");
            }
        }
    }
}
