use super::{NatTrans, Presheaf, Topos};
use crate::error::{check_bound, Error, Result};
use crate::finset::{Element, FinFunction, FinSet};

/// The subobject classifier `Ω` with `true: 1 → Ω`.
#[derive(Clone, Debug)]
pub struct Omega {
    pub object: Presheaf,
    pub true_arrow: NatTrans,
}

impl Topos {
    /// Sieves on `c`, each a sorted tuple of morphism names.
    fn sieves(&self, c: usize) -> Result<Vec<Element>> {
        let cat = self.index();
        let inc = cat.incoming(c);
        check_bound(|| format!("sieves on {}", cat.objects().get(c)), 1usize.checked_shl(inc.len() as u32).unwrap_or(usize::MAX), self.bound())?;
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << inc.len()) {
            let member = |u: usize| inc.iter().position(|&v| v == u).is_some_and(|i| mask >> i & 1 == 1);
            let closed = (0..inc.len()).filter(|&i| mask >> i & 1 == 1).all(|i| {
                let u = inc[i];
                cat.incoming(cat.src(u)).iter().all(|&v| member(cat.compose(u, v)))
            });
            if closed {
                out.push(sieve_element(cat.morphisms(), (0..inc.len()).filter(|&i| mask >> i & 1 == 1).map(|i| inc[i])));
            }
        }
        Ok(out)
    }

    pub fn subobject_classifier(&self) -> Result<Omega> {
        let cat = self.index();
        let at = (0..cat.num_objects())
            .map(|c| self.sieves(c).map(FinSet::new))
            .collect::<Result<Vec<_>>>()?;
        let restrict = (0..cat.num_morphisms())
            .map(|w| {
                // w: c' → c, S ↦ w*S = {v | w ∘ v ∈ S}
                let (c2, c) = (cat.src(w), cat.tgt(w));
                let map = at[c]
                    .iter()
                    .map(|s| {
                        let members = s.as_tuple().expect("sieve");
                        let pulled = cat.incoming(c2).iter().copied().filter(|&v| {
                            members.contains(cat.morphisms().get(cat.compose(w, v)))
                        });
                        at[c2].index_of(&sieve_element(cat.morphisms(), pulled)).expect("pullback sieve")
                    })
                    .collect();
                FinFunction::from_indices_unchecked(at[c].clone(), at[c2].clone(), map)
            })
            .collect();
        let object = Presheaf::from_parts_unchecked(at, restrict);
        let one = self.terminal();
        let true_arrow = self.nat_from_fn(&one, &object, |c, _| {
            sieve_element(cat.morphisms(), cat.incoming(c).iter().copied())
        })?;
        Ok(Omega { object, true_arrow })
    }

    /// The characteristic map `χ: Y → Ω` of a mono `m: X ↪ Y`:
    /// `χ_c(y) = {u: d → c | Y(u)(y) ∈ im m_d}`. The pullback of `true` along
    /// `χ` is checked to have the same image as `m`.
    pub fn classify_mono(&self, omega: &Omega, m: &NatTrans) -> Result<NatTrans> {
        if !m.is_mono() {
            return Err(Error::Precondition("classifying a map that is not mono".into()));
        }
        let cat = self.index();
        let y = m.cod();
        let chi = self.nat_from_fn(y, &omega.object, |c, e| {
            let yi = y.at(c).index_of(e).expect("element of Y");
            let members = cat
                .incoming(c)
                .iter()
                .copied()
                .filter(|&u| m.hits(cat.src(u), y.restrict(u).at(yi)));
            sieve_element(cat.morphisms(), members)
        })?;
        let pb = self.pullback(&omega.true_arrow, &chi)?;
        for c in 0..cat.num_objects() {
            let mut from_pb: Vec<usize> = pb.legs[1].component(c).indices().to_vec();
            let mut from_m: Vec<usize> = m.component(c).indices().to_vec();
            from_pb.sort_unstable();
            from_m.sort_unstable();
            if from_pb != from_m {
                return Err(Error::Internal("pullback of true does not reproduce the mono".into()));
            }
        }
        Ok(chi)
    }

    /// All subpresheaves of `x`, as pointwise membership tables.
    pub fn subobjects(&self, x: &Presheaf) -> Result<Vec<Vec<Vec<bool>>>> {
        let cat = self.index();
        let vars: Vec<(usize, usize)> = (0..cat.num_objects())
            .flat_map(|c| (0..x.at(c).len()).map(move |i| (c, i)))
            .collect();
        let mut cur: Vec<Vec<bool>> = (0..cat.num_objects()).map(|c| vec![false; x.at(c).len()]).collect();
        let mut out = Vec::new();
        // decide membership in order; a member forces its restrictions
        fn go(
            k: usize,
            vars: &[(usize, usize)],
            topos: &Topos,
            x: &Presheaf,
            cur: &mut Vec<Vec<bool>>,
            out: &mut Vec<Vec<Vec<bool>>>,
        ) -> Result<()> {
            if k == vars.len() {
                let cat = topos.index();
                let closed = (0..cat.num_morphisms()).all(|u| {
                    let (c, d) = (cat.src(u), cat.tgt(u));
                    (0..x.at(d).len()).all(|i| !cur[d][i] || cur[c][x.restrict(u).at(i)])
                });
                if closed {
                    out.push(cur.clone());
                    check_bound(|| "subobject enumeration".into(), out.len(), topos.bound())?;
                }
                return Ok(());
            }
            let (c, i) = vars[k];
            for b in [false, true] {
                cur[c][i] = b;
                go(k + 1, vars, topos, x, cur, out)?;
            }
            cur[c][i] = false;
            Ok(())
        }
        go(0, &vars, self, x, &mut cur, &mut out)?;
        Ok(out)
    }

    /// The inclusion of a subpresheaf given by membership tables.
    pub fn subobject_inclusion(&self, x: &Presheaf, member: &[Vec<bool>]) -> Result<NatTrans> {
        let cat = self.index();
        let at: Vec<FinSet> = (0..cat.num_objects())
            .map(|c| FinSet::new(x.at(c).iter().zip(&member[c]).filter(|(_, &b)| b).map(|(e, _)| e.clone())))
            .collect();
        let restrict = (0..cat.num_morphisms())
            .map(|u| {
                let (c, d) = (cat.src(u), cat.tgt(u));
                FinFunction::from_fn(at[d].clone(), at[c].clone(), |e| {
                    x.restrict(u).apply(e).expect("element of X").clone()
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let sub = self.presheaf(at, restrict)?;
        self.nat_from_fn(&sub, x, |_, e| e.clone())
    }
}

fn sieve_element(morphisms: &FinSet, members: impl Iterator<Item = usize>) -> Element {
    let mut v: Vec<Element> = members.map(|u| morphisms.get(u).clone()).collect();
    v.sort();
    Element::tuple(v)
}
