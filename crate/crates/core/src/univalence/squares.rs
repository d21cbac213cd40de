use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::topos::{HomSearch, NatTrans, Topos};

/// A pullback square from `p2: E2 → B2` to `p1: E1 → B1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PullbackSquareMorphism {
    pub source: NatTrans,
    pub target: NatTrans,
    pub f_e: NatTrans,
    pub f_b: NatTrans,
}

impl PullbackSquareMorphism {
    /// Checks that the square commutes and is a pullback.
    pub fn new(topos: &Topos, source: NatTrans, target: NatTrans, f_e: NatTrans, f_b: NatTrans) -> Result<Self> {
        if f_e.dom() != source.dom() || f_e.cod() != target.dom() || f_b.dom() != source.cod() || f_b.cod() != target.cod() {
            return Err(Error::Invalid("square maps have the wrong endpoints".into()));
        }
        if f_e.then(&target)? != source.then(&f_b)? {
            return Err(Error::Invalid("square does not commute".into()));
        }
        if !is_pullback(topos, &source, &target, &f_e, &f_b)? {
            return Err(Error::Invalid("square is not a pullback".into()));
        }
        Ok(PullbackSquareMorphism { source, target, f_e, f_b })
    }
}

fn is_pullback(topos: &Topos, p2: &NatTrans, p1: &NatTrans, f_e: &NatTrans, f_b: &NatTrans) -> Result<bool> {
    let pb = topos.pullback(p1, f_b)?;
    let cmp = pb.mediate(topos, p2.dom(), &[f_e.clone(), p2.clone(), p2.then(f_b)?])?;
    Ok(cmp.is_iso())
}

/// Both sides of "`p2` is univalent iff `f_B` is mono".
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniIffMono {
    pub p2_univalent: bool,
    pub f_b_mono: bool,
}

impl UniIffMono {
    pub fn holds(&self) -> bool {
        self.p2_univalent == self.f_b_mono
    }
}

/// `u: 1 → Ω` is univalent, and `𝒩(u)` is an internal poset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UniversalMono {
    pub univalent: bool,
    /// `(s, t): M → Ω × Ω` is mono.
    pub poset: bool,
}

/// For a mono `v: E ↪ B` with classifying map `χ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MonoClassification {
    pub univalent: bool,
    pub chi_mono: bool,
}

impl MonoClassification {
    pub fn holds(&self) -> bool {
        self.univalent == self.chi_mono
    }
}

impl Topos {
    /// Every pullback square from `p2` to `p1`.
    pub fn pullback_square_homs(&self, p2: &NatTrans, p1: &NatTrans) -> Result<Vec<PullbackSquareMorphism>> {
        let mut out = Vec::new();
        for f_b in HomSearch::new(self, p2.cod(), p1.cod()).maps()? {
            let over = p2.then(&f_b)?;
            for f_e in HomSearch::new(self, p2.dom(), p1.dom()).over(p1, &over).maps()? {
                if is_pullback(self, p2, p1, &f_e, &f_b)? {
                    out.push(PullbackSquareMorphism {
                        source: p2.clone(),
                        target: p1.clone(),
                        f_e,
                        f_b: f_b.clone(),
                    });
                }
            }
        }
        Ok(out)
    }

    /// The pullback of `p1` along `f_b`, as a square.
    pub fn pullback_square_along(&self, p1: &NatTrans, f_b: &NatTrans) -> Result<PullbackSquareMorphism> {
        let pb = self.pullback(p1, f_b)?;
        PullbackSquareMorphism::new(self, pb.legs[1].clone(), p1.clone(), pb.legs[0].clone(), f_b.clone())
    }

    /// A pullback of `p1` along a random map into its base from one of
    /// `sources`, if any such map exists.
    pub fn random_pullback_square(
        &self,
        rng: &mut impl Rng,
        p1: &NatTrans,
        sources: &[crate::topos::Presheaf],
    ) -> Result<Option<PullbackSquareMorphism>> {
        if sources.is_empty() {
            return Ok(None);
        }
        let b2 = &sources[rng.gen_range(0..sources.len())];
        match self.random_map(rng, b2, p1.cod())? {
            Some(f_b) => Ok(Some(self.pullback_square_along(p1, &f_b)?)),
            None => Ok(None),
        }
    }

    /// Computes both sides for a square over a univalent `p1`.
    pub fn check_uni_iff_mono(&self, sq: &PullbackSquareMorphism) -> Result<UniIffMono> {
        if !self.nerve_is_complete(&sq.target)? {
            return Err(Error::Precondition("the target of the square is not univalent".into()));
        }
        Ok(UniIffMono {
            p2_univalent: self.nerve_is_complete(&sq.source)?,
            f_b_mono: self.is_mono(&sq.f_b),
        })
    }

    pub fn check_universal_mono_univalent(&self) -> Result<UniversalMono> {
        let omega = self.subobject_classifier()?;
        let n = self.nerve_of_map(&omega.true_arrow)?;
        Ok(UniversalMono {
            univalent: n.segal.is_complete(self)?,
            poset: n.endpoints().is_mono(),
        })
    }

    pub fn check_mono_classification(&self, v: &NatTrans) -> Result<MonoClassification> {
        if !self.is_mono(v) {
            return Err(Error::Precondition("classification needs a mono".into()));
        }
        let omega = self.subobject_classifier()?;
        let chi = self.classify_mono(&omega, v)?;
        Ok(MonoClassification {
            univalent: self.nerve_is_complete(v)?,
            chi_mono: self.is_mono(&chi),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::finset::FinSet;

    fn sets(t: &Topos, names: &[&str]) -> crate::topos::Presheaf {
        t.constant(&FinSet::atoms(names))
    }

    fn inclusion(t: &Topos, a: &[&str], b: &[&str]) -> NatTrans {
        t.nat_from_fn(&sets(t, a), &sets(t, b), |_, e| e.clone()).unwrap()
    }

    #[test]
    fn squares_between_univalent_maps() {
        let t = Topos::finset();
        let p1 = inclusion(&t, &["1"], &["0", "1"]);
        assert_eq!(t.pullback_square_homs(&p1, &p1).unwrap().len(), 1);
        let empty = t.identity(&t.initial());
        assert_eq!(t.pullback_square_homs(&empty, &p1).unwrap().len(), 1);
        let two = t.identity(&sets(&t, &["0", "1"]));
        // pullback of an identity along any endomap is a pullback square
        assert_eq!(t.pullback_square_homs(&two, &two).unwrap().len(), 4);
    }

    #[test]
    fn uni_iff_mono_examples() {
        let t = Topos::finset();
        let p1 = inclusion(&t, &["1"], &["0", "1"]);
        let id = t.pullback_square_along(&p1, &t.identity(p1.cod())).unwrap();
        assert_eq!(t.check_uni_iff_mono(&id).unwrap(), UniIffMono { p2_univalent: true, f_b_mono: true });
        let constant = t.nat_from_fn(&sets(&t, &["a", "b"]), p1.cod(), |_, _| "1".into()).unwrap();
        let sq = t.pullback_square_along(&p1, &constant).unwrap();
        let r = t.check_uni_iff_mono(&sq).unwrap();
        assert!(!r.p2_univalent && !r.f_b_mono);
        let not_univalent = t.identity(&sets(&t, &["0", "1"]));
        let sq = t.pullback_square_along(&not_univalent, &t.identity(not_univalent.cod())).unwrap();
        assert!(matches!(t.check_uni_iff_mono(&sq), Err(Error::Precondition(_))));
    }

    #[test]
    fn mono_classification_examples() {
        let t = Topos::finset();
        let r = t.check_mono_classification(&inclusion(&t, &["1"], &["0", "1"])).unwrap();
        assert!(r.univalent && r.chi_mono);
        let r = t.check_mono_classification(&t.from_initial(&sets(&t, &["0", "1"]))).unwrap();
        assert!(!r.univalent && !r.chi_mono);
        let r = t.check_mono_classification(&t.identity(&sets(&t, &["0", "1"]))).unwrap();
        assert!(!r.univalent && !r.chi_mono);
        let ab = sets(&t, &["a", "b"]);
        assert!(t.check_mono_classification(&t.to_terminal(&ab)).is_err());
    }

    #[test]
    fn universal_mono_is_univalent() {
        for t in [Topos::finset(), corpus::c2_sets(), corpus::sierpinski()] {
            let r = t.check_universal_mono_univalent().unwrap();
            assert!(r.univalent && r.poset);
        }
    }
}
