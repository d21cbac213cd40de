use rand::seq::SliceRandom;
use rand::RngCore;

use super::{NatTrans, Presheaf, Topos};
use crate::error::{check_bound, Error, Result};

type Filter<'a> = Box<dyn Fn(usize, usize, usize) -> bool + 'a>;

/// Backtracking enumeration of natural transformations `P → Q`, optionally
/// constrained to lie over a base (`π ∘ θ = φ` for `π: Q → R`, `φ: P → R`).
///
/// Results are per-object index tables, in a deterministic order unless an
/// RNG is supplied.
pub struct HomSearch<'a> {
    topos: &'a Topos,
    source: &'a Presheaf,
    target: &'a Presheaf,
    over: Option<(&'a NatTrans, &'a NatTrans)>,
    filter: Option<Filter<'a>>,
    injective: bool,
    stop_after: Option<usize>,
    rng: Option<&'a mut dyn RngCore>,
}

struct State {
    theta: Vec<Vec<usize>>,
    used: Vec<Vec<bool>>,
    trail: Vec<(usize, usize)>,
}

const UNSET: usize = usize::MAX;

impl<'a> HomSearch<'a> {
    pub fn new(topos: &'a Topos, source: &'a Presheaf, target: &'a Presheaf) -> HomSearch<'a> {
        HomSearch {
            topos,
            source,
            target,
            over: None,
            filter: None,
            injective: false,
            stop_after: None,
            rng: None,
        }
    }

    /// Only maps with `pi ∘ θ = phi`.
    pub fn over(mut self, pi: &'a NatTrans, phi: &'a NatTrans) -> Self {
        self.over = Some((pi, phi));
        self
    }

    /// Only maps with `filter(c, x, θ_c(x))` for every object `c` and `x ∈ P(c)`.
    pub fn filter(mut self, f: impl Fn(usize, usize, usize) -> bool + 'a) -> Self {
        self.filter = Some(Box::new(f));
        self
    }

    /// Only pointwise injective maps.
    pub fn injective(mut self) -> Self {
        self.injective = true;
        self
    }

    pub fn stop_after(mut self, n: usize) -> Self {
        self.stop_after = Some(n);
        self
    }

    /// Visit candidates in a random order.
    pub fn shuffled(mut self, rng: &'a mut dyn RngCore) -> Self {
        self.rng = Some(rng);
        self
    }

    pub fn run(self) -> Result<Vec<Vec<Vec<usize>>>> {
        let mut out = Vec::new();
        let bound = self.topos.bound();
        self.visit(|t| {
            out.push(t.to_vec());
            check_bound(|| "hom enumeration".into(), out.len(), bound)
        })?;
        Ok(out)
    }

    /// Number of maps, without storing them.
    pub fn count(self) -> Result<usize> {
        let mut n = 0usize;
        self.visit(|_| {
            n += 1;
            Ok(())
        })?;
        Ok(n)
    }

    pub fn first(self) -> Result<Option<Vec<Vec<usize>>>> {
        Ok(self.stop_after(1).run()?.pop())
    }

    /// The found maps as natural transformations.
    pub fn maps(self) -> Result<Vec<NatTrans>> {
        let (topos, p, q) = (self.topos, self.source, self.target);
        Ok(self
            .run()?
            .into_iter()
            .map(|t| topos.nat_unchecked(p, q, t))
            .collect())
    }

    fn visit(mut self, mut emit: impl FnMut(&[Vec<usize>]) -> Result<()>) -> Result<()> {
        let cat = self.topos.index();
        let n = cat.num_objects();
        let (p, q) = (self.source, self.target);
        if let Some((pi, phi)) = self.over {
            if pi.dom() != q || phi.dom() != p || pi.cod() != phi.cod() {
                return Err(Error::Invalid("hom search base maps do not match".into()));
            }
        }
        // candidate lists per object and source element
        let mut candidates: Vec<Vec<Vec<usize>>> = Vec::with_capacity(n);
        for c in 0..n {
            let fibers = self.over.map(|(pi, _)| pi.component(c).fibers());
            let mut per = Vec::with_capacity(p.at(c).len());
            for x in 0..p.at(c).len() {
                let mut ys: Vec<usize> = match (&fibers, self.over) {
                    (Some(fib), Some((_, phi))) => fib[phi.component(c).at(x)].clone(),
                    _ => (0..q.at(c).len()).collect(),
                };
                if let Some(f) = &self.filter {
                    ys.retain(|&y| f(c, x, y));
                }
                if let Some(rng) = self.rng.as_deref_mut() {
                    ys.shuffle(rng);
                }
                per.push(ys);
            }
            candidates.push(per);
        }
        if self.injective && (0..n).any(|c| p.at(c).len() > q.at(c).len()) {
            return Ok(());
        }

        let mut objs: Vec<usize> = (0..n).collect();
        objs.sort_by_key(|&c| std::cmp::Reverse(cat.incoming(c).len()));
        let vars: Vec<(usize, usize)> = objs
            .iter()
            .flat_map(|&c| (0..p.at(c).len()).map(move |x| (c, x)))
            .collect();
        let incoming: Vec<Vec<usize>> = (0..n)
            .map(|d| {
                cat.incoming(d)
                    .iter()
                    .copied()
                    .filter(|&u| !cat.is_identity(u))
                    .collect()
            })
            .collect();

        let mut st = State {
            theta: (0..n).map(|c| vec![UNSET; p.at(c).len()]).collect(),
            used: (0..n).map(|c| vec![false; q.at(c).len()]).collect(),
            trail: Vec::new(),
        };
        let ctx = Ctx {
            topos: self.topos,
            p,
            q,
            candidates: &candidates,
            incoming: &incoming,
            vars: &vars,
            injective: self.injective,
            stop_after: self.stop_after.unwrap_or(usize::MAX),
        };
        let mut found = 0usize;
        if ctx.stop_after == 0 {
            return Ok(());
        }
        search(&ctx, 0, &mut st, &mut found, &mut emit)?;
        Ok(())
    }
}

struct Ctx<'b> {
    topos: &'b Topos,
    p: &'b Presheaf,
    q: &'b Presheaf,
    candidates: &'b [Vec<Vec<usize>>],
    incoming: &'b [Vec<usize>],
    vars: &'b [(usize, usize)],
    injective: bool,
    stop_after: usize,
}

impl Ctx<'_> {
    fn allowed(&self, c: usize, x: usize, y: usize) -> bool {
        // candidate lists are short; linear scan keeps the filter and base check in one place
        self.candidates[c][x].contains(&y)
    }

    /// Sets `θ_d(x) = y` and propagates along every morphism into `d`.
    /// Returns false on a conflict; the trail records everything set.
    fn assign(&self, st: &mut State, d: usize, x: usize, y: usize) -> bool {
        if self.injective && st.used[d][y] {
            return false;
        }
        st.theta[d][x] = y;
        st.used[d][y] = true;
        st.trail.push((d, x));
        let cat = self.topos.index();
        for &u in &self.incoming[d] {
            let c = cat.src(u);
            let x2 = self.p.restrict(u).at(x);
            let y2 = self.q.restrict(u).at(y);
            let cur = st.theta[c][x2];
            if cur == UNSET {
                if !self.allowed(c, x2, y2) || (self.injective && st.used[c][y2]) {
                    return false;
                }
                st.theta[c][x2] = y2;
                st.used[c][y2] = true;
                st.trail.push((c, x2));
            } else if cur != y2 {
                return false;
            }
        }
        true
    }

    fn undo(&self, st: &mut State, mark: usize) {
        while st.trail.len() > mark {
            let (c, x) = st.trail.pop().unwrap();
            let y = st.theta[c][x];
            st.used[c][y] = false;
            st.theta[c][x] = UNSET;
        }
    }
}

fn search(
    ctx: &Ctx<'_>,
    mut k: usize,
    st: &mut State,
    found: &mut usize,
    emit: &mut dyn FnMut(&[Vec<usize>]) -> Result<()>,
) -> Result<bool> {
    while k < ctx.vars.len() && st.theta[ctx.vars[k].0][ctx.vars[k].1] != UNSET {
        k += 1;
    }
    if k == ctx.vars.len() {
        emit(&st.theta)?;
        *found += 1;
        return Ok(*found >= ctx.stop_after);
    }
    let (c, x) = ctx.vars[k];
    for &y in &ctx.candidates[c][x] {
        let mark = st.trail.len();
        let ok = ctx.assign(st, c, x, y);
        let stop = ok && search(ctx, k + 1, st, found, emit)?;
        ctx.undo(st, mark);
        if stop {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::finset::FinSet;

    #[test]
    fn function_count_in_finset() {
        let t = Topos::finset();
        let a = t.constant(&FinSet::range(3));
        let b = t.constant(&FinSet::range(2));
        assert_eq!(HomSearch::new(&t, &a, &b).count().unwrap(), 8);
        assert_eq!(HomSearch::new(&t, &b, &a).injective().count().unwrap(), 6);
        assert_eq!(HomSearch::new(&t, &a, &t.initial()).count().unwrap(), 0);
        assert_eq!(HomSearch::new(&t, &t.initial(), &a).count().unwrap(), 1);
    }

    #[test]
    fn equivariant_maps_of_free_orbit() {
        let t = corpus::c2_sets();
        let x = corpus::c2_free_orbit(&t);
        // C₂-maps from the free orbit are determined by the image of one point
        assert_eq!(HomSearch::new(&t, &x, &x).count().unwrap(), 2);
        let fixed = corpus::c2_trivial(&t, 1);
        assert_eq!(HomSearch::new(&t, &fixed, &x).count().unwrap(), 0);
    }

    #[test]
    fn every_found_map_is_natural() {
        let t = corpus::sierpinski();
        for p in corpus::small_presheaves(&t, 2).unwrap() {
            for q in corpus::small_presheaves(&t, 2).unwrap() {
                for f in HomSearch::new(&t, &p, &q).maps().unwrap() {
                    t.check_nat(&f).unwrap();
                }
            }
        }
    }

    #[test]
    fn stop_after_and_bound() {
        let t = Topos::finset().with_bound(5);
        let a = t.constant(&FinSet::range(3));
        assert_eq!(HomSearch::new(&t, &a, &a).stop_after(2).run().unwrap().len(), 2);
        assert!(matches!(
            HomSearch::new(&t, &a, &a).run(),
            Err(Error::ResourceBound { .. })
        ));
    }
}
