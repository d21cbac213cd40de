use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::topos::{NatTrans, Topos};

/// Verdicts for `p: E → B`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnivalenceReport {
    /// `𝒩(p)` is complete.
    pub univalent: bool,
    pub mono: bool,
    /// `s0: B → 𝒩(p)_hoequiv` is iso.
    pub s0_iso: bool,
    /// The pullback-square formulation of completeness.
    pub pullback_square: bool,
    /// Fiber oracle, in finite sets only.
    pub fiber_oracle: Option<bool>,
    /// Cardinalities per index object of `E`, `B`, `M`, `𝒩(p)_2`, `𝒩(p)_3`
    /// and the object of equivalences.
    pub sizes: ReportSizes,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportSizes {
    pub total: Vec<usize>,
    pub base: Vec<usize>,
    pub fiberwise_maps: Vec<usize>,
    pub level2: Vec<usize>,
    pub level3: Vec<usize>,
    pub equivalences: Vec<usize>,
}

impl Topos {
    /// Runs the full pipeline. In finite sets the fiber oracle runs as well
    /// and must agree.
    pub fn is_univalent(&self, p: &NatTrans) -> Result<UnivalenceReport> {
        let n = self.nerve_of_map(p)?;
        let c = n.segal.completeness(self)?;
        let fiber_oracle = if self.is_finset() { Some(self.fiber_oracle_univalent(p)?) } else { None };
        if let Some(o) = fiber_oracle {
            if o != c.complete() {
                return Err(Error::Internal(format!(
                    "nerve pipeline says univalent = {}, fiber oracle says {o}",
                    c.complete()
                )));
            }
        }
        let x = &n.nerve.simplicial;
        Ok(UnivalenceReport {
            univalent: c.complete(),
            mono: p.is_mono(),
            s0_iso: c.s0_iso,
            pullback_square: c.pullback_square,
            fiber_oracle,
            sizes: ReportSizes {
                total: p.dom().cardinalities(),
                base: p.cod().cardinalities(),
                fiberwise_maps: x.level(1).cardinalities(),
                level2: x.level(2).cardinalities(),
                level3: x.level(3).cardinalities(),
                equivalences: c.hoequiv.carrier().cardinalities(),
            },
        })
    }

    /// Completeness of `𝒩(p)` alone, without the oracle.
    pub fn nerve_is_complete(&self, p: &NatTrans) -> Result<bool> {
        self.nerve_of_map(p)?.segal.is_complete(self)
    }

    pub(crate) fn is_finset(&self) -> bool {
        self.num_objects() == 1 && self.index().num_morphisms() == 1
    }

    /// In finite sets: every fiber has at most one element and no two fibers
    /// have the same size.
    pub fn fiber_oracle_univalent(&self, p: &NatTrans) -> Result<bool> {
        if !self.is_finset() {
            return Err(Error::Precondition("the fiber oracle applies to finite sets only".into()));
        }
        let fibers = p.component(0).fibers();
        let empty = fibers.iter().filter(|f| f.is_empty()).count();
        let single = fibers.iter().filter(|f| f.len() == 1).count();
        Ok(fibers.iter().all(|f| f.len() <= 1) && empty <= 1 && single <= 1)
    }

    /// Univalent maps between presheaves with sets of size at most `max`, one
    /// per isomorphism class of arrows, in the order of
    /// [`Topos::maps_up_to_iso`].
    pub fn enumerate_univalent(&self, max: usize) -> Result<Vec<NatTrans>> {
        let maps = self.maps_up_to_iso(max)?;
        let verdicts: Vec<Result<bool>> = maps.par_iter().map(|p| self.nerve_is_complete(p)).collect();
        let mut out = Vec::new();
        for (p, v) in maps.into_iter().zip(verdicts) {
            if v? {
                out.push(p);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::finset::FinSet;

    fn sizes(maps: &[NatTrans]) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = maps.iter().map(|p| (p.dom().total_size(), p.cod().total_size())).collect();
        v.sort();
        v
    }

    #[test]
    fn identity_examples() {
        let t = Topos::finset();
        let one = t.terminal();
        assert!(t.is_univalent(&t.identity(&one)).unwrap().univalent);
        let two = t.constant(&FinSet::range(2));
        let r = t.is_univalent(&t.identity(&two)).unwrap();
        assert!(!r.univalent);
        assert!(r.mono);
    }

    #[test]
    fn oracle_examples() {
        let t = Topos::finset();
        let empty = t.initial();
        assert!(t.fiber_oracle_univalent(&t.identity(&empty)).unwrap());
        let two = t.constant(&FinSet::atoms(["0", "1"]));
        let one = t.constant(&FinSet::atoms(["1"]));
        let inc = t.nat_from_fn(&one, &two, |_, e| e.clone()).unwrap();
        assert!(t.fiber_oracle_univalent(&inc).unwrap());
        let ab = t.constant(&FinSet::atoms(["a", "b"]));
        assert!(!t.fiber_oracle_univalent(&t.to_terminal(&ab)).unwrap());
        assert!(corpus::c2_sets().fiber_oracle_univalent(&corpus::c2_sets().identity(&corpus::c2_sets().terminal())).is_err());
    }

    #[test]
    fn four_univalent_sets_maps() {
        let t = Topos::finset();
        let found = t.enumerate_univalent(2).unwrap();
        assert_eq!(sizes(&found), vec![(0, 0), (0, 1), (1, 1), (1, 2)]);
        assert_eq!(t.enumerate_univalent(0).unwrap().len(), 1);
    }

    #[test]
    fn report_serializes() {
        let t = Topos::finset();
        let r = t.is_univalent(&t.identity(&t.terminal())).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"univalent\":true"));
    }
}
