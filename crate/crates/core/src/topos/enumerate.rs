use rand::seq::SliceRandom;
use rand::Rng;

use super::{HomSearch, NatTrans, Presheaf, Topos};
use crate::error::{check_bound, Result};
use crate::finset::{FinFunction, FinSet};

impl Topos {
    /// Every presheaf whose set at object `c` is `{"0", ..., sizes[c]-1}`.
    pub fn presheaves_with_sizes(&self, sizes: &[usize]) -> Result<Vec<Presheaf>> {
        let cat = self.index();
        let at: Vec<FinSet> = sizes.iter().map(|&k| FinSet::range(k)).collect();
        let free: Vec<usize> = (0..cat.num_morphisms()).filter(|&u| !cat.is_identity(u)).collect();
        let mut table: Vec<Option<Vec<usize>>> = vec![None; cat.num_morphisms()];
        for x in 0..cat.num_objects() {
            table[cat.id(x)] = Some((0..sizes[x]).collect());
        }
        let entries: Vec<(usize, usize, usize)> = cat.comp_entries().collect();
        let mut out = Vec::new();

        struct Ctx<'b> {
            topos: &'b Topos,
            sizes: &'b [usize],
            at: &'b [FinSet],
            free: &'b [usize],
            entries: &'b [(usize, usize, usize)],
        }
        fn consistent(ctx: &Ctx<'_>, table: &[Option<Vec<usize>>]) -> bool {
            // P(g ∘ f) = P(f) ∘ P(g) wherever all three are set
            ctx.entries.iter().all(|&(g, f, gf)| match (&table[g], &table[f], &table[gf]) {
                (Some(pg), Some(pf), Some(pgf)) => pg.iter().zip(pgf).all(|(&i, &j)| pf[i] == j),
                _ => true,
            })
        }
        fn go(ctx: &Ctx<'_>, k: usize, table: &mut Vec<Option<Vec<usize>>>, out: &mut Vec<Presheaf>) -> Result<()> {
            let cat = ctx.topos.index();
            if k == ctx.free.len() {
                let restrict = table
                    .iter()
                    .enumerate()
                    .map(|(u, t)| {
                        FinFunction::from_indices_unchecked(
                            ctx.at[cat.tgt(u)].clone(),
                            ctx.at[cat.src(u)].clone(),
                            t.clone().expect("complete table"),
                        )
                    })
                    .collect();
                out.push(Presheaf::from_parts_unchecked(ctx.at.to_vec(), restrict));
                return check_bound(|| "presheaf enumeration".into(), out.len(), ctx.topos.bound());
            }
            let u = ctx.free[k];
            let (dom, cod) = (ctx.sizes[cat.tgt(u)], ctx.sizes[cat.src(u)]);
            if dom > 0 && cod == 0 {
                return Ok(());
            }
            let mut f = vec![0; dom];
            loop {
                table[u] = Some(f.clone());
                if consistent(ctx, table) {
                    go(ctx, k + 1, table, out)?;
                }
                // next function in lexicographic order
                let mut i = dom;
                loop {
                    if i == 0 {
                        table[u] = None;
                        return Ok(());
                    }
                    i -= 1;
                    f[i] += 1;
                    if f[i] < cod {
                        break;
                    }
                    f[i] = 0;
                }
            }
        }
        let ctx = Ctx {
            topos: self,
            sizes,
            at: &at,
            free: &free,
            entries: &entries,
        };
        go(&ctx, 0, &mut table, &mut out)?;
        Ok(out)
    }

    /// Presheaves with every set of size at most `max`, one per isomorphism
    /// class, in a deterministic order.
    pub fn presheaves_up_to_iso(&self, max: usize) -> Result<Vec<Presheaf>> {
        let n = self.num_objects();
        let mut out: Vec<Presheaf> = Vec::new();
        let mut sizes = vec![0; n];
        loop {
            for p in self.presheaves_with_sizes(&sizes)? {
                if !out.iter().any(|q| self.isomorphic(q, &p)) {
                    out.push(p);
                }
            }
            let mut i = n;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                sizes[i] += 1;
                if sizes[i] <= max {
                    break;
                }
                sizes[i] = 0;
            }
        }
    }

    pub fn isomorphic(&self, p: &Presheaf, q: &Presheaf) -> bool {
        p.cardinalities() == q.cardinalities()
            && HomSearch::new(self, p, q).injective().first().ok().flatten().is_some()
    }

    /// Invariant of a map up to isomorphism of arrows: per object, the level
    /// sizes and the sorted fiber cardinalities.
    pub fn arrow_signature(&self, p: &NatTrans) -> Vec<(usize, Vec<usize>)> {
        (0..self.num_objects())
            .map(|c| {
                let mut fib: Vec<usize> = p.component(c).fibers().iter().map(Vec::len).collect();
                fib.sort_unstable();
                (p.dom().at(c).len(), fib)
            })
            .collect()
    }

    /// An isomorphism of arrows `(α, β)` with `q ∘ α = β ∘ p`, if one exists.
    pub fn arrow_iso(&self, p: &NatTrans, q: &NatTrans) -> Result<Option<(NatTrans, NatTrans)>> {
        if self.arrow_signature(p) != self.arrow_signature(q) {
            return Ok(None);
        }
        for beta in HomSearch::new(self, p.cod(), q.cod()).injective().maps()? {
            let bp = p.then(&beta)?;
            if let Some(t) = HomSearch::new(self, p.dom(), q.dom()).over(q, &bp).injective().first()? {
                return Ok(Some((self.nat_unchecked(p.dom(), q.dom(), t), beta)));
            }
        }
        Ok(None)
    }

    /// Every map between presheaves with sets of size at most `max`, one per
    /// isomorphism class of arrows.
    pub fn maps_up_to_iso(&self, max: usize) -> Result<Vec<NatTrans>> {
        let objs = self.presheaves_up_to_iso(max)?;
        let mut out: Vec<NatTrans> = Vec::new();
        for e in &objs {
            for b in &objs {
                for p in HomSearch::new(self, e, b).maps()? {
                    let mut seen = false;
                    for q in &out {
                        if self.arrow_iso(q, &p)?.is_some() {
                            seen = true;
                            break;
                        }
                    }
                    if !seen {
                        out.push(p);
                    }
                }
            }
        }
        Ok(out)
    }

    /// A uniformly chosen map `dom → cod`, if any exists.
    pub fn random_map(&self, rng: &mut impl Rng, dom: &Presheaf, cod: &Presheaf) -> Result<Option<NatTrans>> {
        let maps = HomSearch::new(self, dom, cod).maps()?;
        Ok(maps.choose(rng).cloned())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn c2_sets_of_size_two() {
        let t = corpus::c2_sets();
        // two involutions on two points: identity and swap
        assert_eq!(t.presheaves_with_sizes(&[2]).unwrap().len(), 2);
        assert_eq!(t.presheaves_up_to_iso(2).unwrap().len(), 4);
    }

    #[test]
    fn finset_maps_up_to_iso() {
        let t = Topos::finset();
        // maps between sets of size ≤ 1: ∅→∅, ∅→1, 1→1
        assert_eq!(t.maps_up_to_iso(1).unwrap().len(), 3);
        // iso classes of maps E → B correspond to multisets of fiber sizes
        // with |B| parts; for |E|,|B| ≤ 2 there are 1+1+1 + 1+2 + 1+2+... counted by hand:
        // B=0: ∅→∅; B=1: E=0,1,2; B=2: fibers (0,0),(0,1),(1,1),(0,2)
        assert_eq!(t.maps_up_to_iso(2).unwrap().len(), 1 + 3 + 4);
    }

    #[test]
    fn arrow_iso_is_certified() {
        let t = corpus::sierpinski();
        for p in t.maps_up_to_iso(1).unwrap() {
            let (a, b) = t.arrow_iso(&p, &p).unwrap().unwrap();
            assert!(a.is_iso() && b.is_iso());
        }
    }
}
