use super::{HomSearch, NatTrans, Presheaf, PsLimit, SliceMap, Topos};
use crate::error::{check_bound, Error, Result};
use crate::finset::{Element, FinFunction, FinSet};

/// `Π_f x` for `f: A → B` and `x` over `A`.
///
/// An element at `c` is `(b, θ)` with `b ∈ B(c)` and `θ` a `Fam` sending each
/// fan key `(u, a)` (with `u: d → c`, `a ∈ A(d)`, `f(a) = B(u)(b)`) to a point
/// of `x` over `a`, naturally in `u`.
#[derive(Clone, Debug)]
pub struct DependentProduct {
    pub slice: SliceMap,
    pub along: NatTrans,
    pub family: SliceMap,
}

fn key(u: &Element, a: &Element) -> Element {
    Element::tuple([u.clone(), a.clone()])
}

impl Topos {
    /// `f*(x)`: the pullback of `x` along `f: A → B`, as an object over `A`.
    /// Points are `(a, e, b)`.
    pub fn pullback_functor(&self, f: &NatTrans, x: &SliceMap) -> Result<(SliceMap, PsLimit)> {
        if f.cod() != x.base() {
            return Err(Error::Invalid("base change along a map into the wrong base".into()));
        }
        let pb = self.pullback(f, &x.proj)?;
        Ok((SliceMap::new(pb.legs[0].clone()), pb))
    }

    /// The fan of `b ∈ B(c)`: at `d` the keys `(u, a)` with `u: d → c` and
    /// `f(a) = B(u)(b)`; with its projection to `A`.
    fn fan(&self, f: &NatTrans, c: usize, b: usize) -> Result<(Presheaf, NatTrans)> {
        let cat = self.index();
        let (a, base) = (f.dom(), f.cod());
        let n = cat.num_objects();
        let mut raw: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for d in 0..n {
            for u in cat.hom(d, c) {
                let bu = base.restrict(u).at(b);
                for ai in 0..a.at(d).len() {
                    if f.component(d).at(ai) == bu {
                        raw[d].push((u, ai));
                    }
                }
            }
        }
        let at: Vec<FinSet> = (0..n)
            .map(|d| FinSet::new(raw[d].iter().map(|&(u, ai)| key(cat.morphisms().get(u), a.at(d).get(ai)))))
            .collect();
        let restrict = (0..cat.num_morphisms())
            .map(|w| {
                let (d2, d) = (cat.src(w), cat.tgt(w));
                FinFunction::from_fn(at[d].clone(), at[d2].clone(), |k| {
                    let t = k.as_tuple().expect("fan key");
                    let u = cat.morphisms().index_of(&t[0]).expect("morphism");
                    let uw = cat.morphisms().get(cat.compose(u, w));
                    key(uw, a.restrict(w).apply(&t[1]).expect("element of A"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let fan = Presheaf::from_parts_unchecked(at, restrict);
        let to_a = self.nat_from_fn(&fan, a, |_, k| k.component(1).expect("fan key").clone())?;
        Ok((fan, to_a))
    }

    pub fn dependent_product(&self, f: &NatTrans, x: &SliceMap) -> Result<DependentProduct> {
        if x.base() != f.dom() {
            return Err(Error::Invalid("dependent product of an object over the wrong base".into()));
        }
        let cat = self.index();
        let n = cat.num_objects();
        let base = f.cod();
        let total = &x.total;
        let mut at = Vec::with_capacity(n);
        for c in 0..n {
            let mut elems = Vec::new();
            for b in 0..base.at(c).len() {
                let (fan, to_a) = self.fan(f, c, b)?;
                let sections = HomSearch::new(self, &fan, total).over(&x.proj, &to_a).run()?;
                for t in sections {
                    let mut entries = Vec::new();
                    for (d, row) in t.iter().enumerate() {
                        for (k, &v) in row.iter().enumerate() {
                            entries.push((fan.at(d).get(k).clone(), total.at(d).get(v).clone()));
                        }
                    }
                    let fam = Element::fam(entries).expect("distinct keys");
                    elems.push(Element::tuple([base.at(c).get(b).clone(), fam]));
                    check_bound(|| "dependent product".into(), elems.len(), self.bound())?;
                }
            }
            at.push(FinSet::new(elems));
        }
        // restriction along v: c' → c: (b, θ) ↦ (B(v)b, (w, a) ↦ θ(v ∘ w, a))
        let mut restrict = Vec::with_capacity(cat.num_morphisms());
        for v in 0..cat.num_morphisms() {
            let (c2, c) = (cat.src(v), cat.tgt(v));
            let map = at[c]
                .iter()
                .map(|e| {
                    let t = e.as_tuple().expect("section");
                    let b2 = base.restrict(v).apply(&t[0]).expect("element of B").clone();
                    let mut out = Vec::new();
                    for d in 0..n {
                        for w in cat.hom(d, c2) {
                            let vw = cat.morphisms().get(cat.compose(v, w));
                            for a in f.dom().at(d).iter() {
                                if let Some(val) = t[1].lookup(&key(vw, a)) {
                                    out.push((key(cat.morphisms().get(w), a), val.clone()));
                                }
                            }
                        }
                    }
                    let e2 = Element::tuple([b2, Element::fam(out).expect("distinct keys")]);
                    at[c2].index_of(&e2).ok_or_else(|| Error::Internal("restricted section is not natural".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            restrict.push(FinFunction::from_indices_unchecked(at[c].clone(), at[c2].clone(), map));
        }
        let object = Presheaf::from_parts_unchecked(at, restrict);
        let proj = self.nat_from_fn(&object, base, |_, e| e.component(0).expect("section").clone())?;
        Ok(DependentProduct {
            slice: SliceMap::new(proj),
            along: f.clone(),
            family: x.clone(),
        })
    }
}

impl DependentProduct {
    pub fn object(&self) -> &Presheaf {
        &self.slice.total
    }

    /// The counit `f*(Π_f x) → x` over `A`, with the pullback it is defined on
    /// (points `(a, (b, θ), b)`): `θ(id, a)`.
    pub fn counit(&self, topos: &Topos) -> Result<(PsLimit, NatTrans)> {
        let (_, pb) = topos.pullback_functor(&self.along, &self.slice)?;
        let cat = topos.index();
        let counit = topos.nat_from_fn(&pb.apex, &self.family.total, |c, pt| {
            let t = pt.as_tuple().expect("pullback point");
            let id = cat.morphisms().get(cat.id(c));
            let theta = t[1].component(1).expect("section");
            theta.lookup(&key(id, &t[0])).expect("total family").clone()
        })?;
        Ok((pb, counit))
    }

    /// The transpose `Y → Π_f x` over `B` of `h: f*Y → x` over `A`, where
    /// `pb` is the pullback of `f` and `g: Y → B` that `h` is defined on.
    pub fn transpose(&self, topos: &Topos, g: &SliceMap, pb: &PsLimit, h: &NatTrans) -> Result<NatTrans> {
        if h.dom() != &pb.apex || h.cod() != &self.family.total || g.base() != self.along.cod() {
            return Err(Error::Invalid("transpose of a map with the wrong shape".into()));
        }
        let cat = topos.index();
        let (a, base, y) = (self.along.dom(), self.along.cod(), &g.total);
        topos.nat_from_fn(y, self.object(), |c, e| {
            let yi = y.at(c).index_of(e).expect("element of Y");
            let b = g.proj.component(c).at(yi);
            let mut entries = Vec::new();
            for d in 0..cat.num_objects() {
                for u in cat.hom(d, c) {
                    let (yu, bu) = (y.restrict(u).at(yi), base.restrict(u).at(b));
                    for ai in 0..a.at(d).len() {
                        if self.along.component(d).at(ai) != bu {
                            continue;
                        }
                        let k = pb.position(d, &[ai, yu, bu]).expect("pullback point");
                        let v = h.component(d).at(k);
                        entries.push((
                            key(cat.morphisms().get(u), a.at(d).get(ai)),
                            self.family.total.at(d).get(v).clone(),
                        ));
                    }
                }
            }
            Element::tuple([base.at(c).get(b).clone(), Element::fam(entries).expect("distinct keys")])
        })
    }
}

impl DependentProduct {
    /// `Π_f h: Π_f x → Π_f x'` for a map `h: x → x'` over `A`.
    pub fn induced(&self, topos: &Topos, other: &DependentProduct, h: &NatTrans) -> Result<NatTrans> {
        if self.along != other.along || h.dom() != &self.family.total || h.cod() != &other.family.total {
            return Err(Error::Invalid("induced map between unrelated dependent products".into()));
        }
        if h.then(&other.family.proj)? != self.family.proj {
            return Err(Error::Invalid("induced map from a map that is not over the base".into()));
        }
        let cat = topos.index();
        let (src, dst) = (&self.family.total, &other.family.total);
        topos.nat_from_fn(self.object(), other.object(), |_, e| {
            let t = e.as_tuple().expect("section");
            let entries = t[1].as_fam().expect("family").iter().map(|(k, v)| {
                let u = cat.morphisms().index_of(k.component(0).expect("fan key")).expect("morphism");
                let d = cat.src(u);
                let i = src.at(d).index_of(v).expect("value");
                (k.clone(), dst.at(d).get(h.component(d).at(i)).clone())
            });
            Element::tuple([t[0].clone(), Element::fam(entries).expect("distinct keys")])
        })
    }
}

impl Topos {
    /// Maps `g → h` in the slice over their common base.
    pub fn slice_homs<'a>(&'a self, g: &'a SliceMap, h: &'a SliceMap) -> Result<HomSearch<'a>> {
        if g.base() != h.base() {
            return Err(Error::Invalid("slice maps over different bases".into()));
        }
        Ok(HomSearch::new(self, &g.total, &h.total).over(&h.proj, &g.proj))
    }
}
