use super::{HomSearch, NatTrans, Presheaf, PsLimit, Topos};
use crate::error::{check_bound, Error, Result};
use crate::finset::{Element, FinFunction, FinSet};

/// The internal hom `G^F` with its evaluation map.
///
/// An element at `c` is a natural family `y(c) × F → G`, encoded as a `Fam`
/// from keys `(u, x)` (with `u: d → c`, `x ∈ F(d)`) to values in `G(d)`.
#[derive(Clone, Debug)]
pub struct Exponential {
    pub object: Presheaf,
    pub base: Presheaf,
    pub target: Presheaf,
    /// `G^F × F`, points `(θ, x)`.
    pub product: PsLimit,
    pub ev: NatTrans,
}

fn key(u: &Element, x: &Element) -> Element {
    Element::tuple([u.clone(), x.clone()])
}

impl Topos {
    pub fn exponential(&self, f: &Presheaf, g: &Presheaf) -> Result<Exponential> {
        let cat = self.index();
        let n = cat.num_objects();
        let mut at = Vec::with_capacity(n);
        for c in 0..n {
            let yc = self.representable(c);
            let prod = self.product(&[yc, f.clone()])?;
            let families = HomSearch::new(self, &prod.apex, g).run()?;
            check_bound(|| "exponential".into(), families.len(), self.bound())?;
            let elems = families.into_iter().map(|t| {
                let mut entries = Vec::new();
                for (d, row) in t.iter().enumerate() {
                    for (k, &y) in row.iter().enumerate() {
                        entries.push((prod.apex.at(d).get(k).clone(), g.at(d).get(y).clone()));
                    }
                }
                Element::fam(entries).expect("keys are distinct points")
            });
            at.push(FinSet::new(elems));
        }
        // restriction along w: c' → c: θ ↦ ((v, x) ↦ θ(w ∘ v, x))
        let mut restrict = Vec::with_capacity(cat.num_morphisms());
        for w in 0..cat.num_morphisms() {
            let (c2, c) = (cat.src(w), cat.tgt(w));
            let map = at[c]
                .iter()
                .map(|theta| {
                    let mut entries = Vec::new();
                    for d in 0..n {
                        for v in cat.hom(d, c2) {
                            let wv = cat.morphisms().get(cat.compose(w, v));
                            for x in f.at(d).iter() {
                                let val = theta.lookup(&key(wv, x)).expect("total family");
                                entries.push((key(cat.morphisms().get(v), x), val.clone()));
                            }
                        }
                    }
                    let e = Element::fam(entries).expect("distinct keys");
                    at[c2].index_of(&e).ok_or_else(|| {
                        Error::Internal("restricted family is not natural".into())
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            restrict.push(FinFunction::from_indices_unchecked(at[c].clone(), at[c2].clone(), map));
        }
        let object = Presheaf::from_parts_unchecked(at, restrict);
        let product = self.product(&[object.clone(), f.clone()])?;
        let ev = self.nat_from_fn(&product.apex, g, |c, pt| {
            let t = pt.as_tuple().expect("product point");
            let id = cat.morphisms().get(cat.id(c));
            t[0].lookup(&key(id, &t[1])).expect("total family").clone()
        })?;
        Ok(Exponential {
            object,
            base: f.clone(),
            target: g.clone(),
            product,
            ev,
        })
    }
}

impl Exponential {
    /// The transpose `A → G^F` of `h: A × F → G`, where `prod` is the product
    /// `A × F` that `h` is defined on.
    pub fn transpose(&self, topos: &Topos, prod: &PsLimit, h: &NatTrans) -> Result<NatTrans> {
        if h.dom() != &prod.apex || h.cod() != &self.target || prod.legs.len() != 2 {
            return Err(Error::Invalid("transpose of a map with the wrong shape".into()));
        }
        if prod.legs[1].cod() != &self.base {
            return Err(Error::Invalid("transpose over the wrong exponent".into()));
        }
        let a = prod.legs[0].cod();
        let cat = topos.index();
        topos.nat_from_fn(a, &self.object, |c, x| {
            let xi = a.at(c).index_of(x).expect("element of A");
            let mut entries = Vec::new();
            for d in 0..cat.num_objects() {
                for u in cat.hom(d, c) {
                    let ax = a.restrict(u).at(xi);
                    for (fi, fx) in self.base.at(d).iter().enumerate() {
                        let k = prod.position(d, &[ax, fi]).expect("product point");
                        let y = h.component(d).at(k);
                        entries.push((key(cat.morphisms().get(u), fx), self.target.at(d).get(y).clone()));
                    }
                }
            }
            Element::fam(entries).expect("distinct keys")
        })
    }
}
