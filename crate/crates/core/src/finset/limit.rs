use super::{Element, FinFunction, FinSet, FiniteCategory};
use crate::error::{check_bound, Error, Result, DEFAULT_BOUND};

/// A diagram of finite sets indexed by a finite category: one set per index
/// object and one function per index morphism (covariant).
#[derive(Clone, Debug)]
pub struct Diagram {
    pub shape: FiniteCategory,
    pub objects: Vec<FinSet>,
    pub arrows: Vec<FinFunction>,
}

impl Diagram {
    /// Builds a diagram over a [`FiniteCategory::shape`], filling identities
    /// automatically. `arrows` are given by name.
    pub fn over_shape(
        shape: FiniteCategory,
        objects: Vec<FinSet>,
        arrows: &[(&str, FinFunction)],
    ) -> Result<Diagram> {
        let mut table: Vec<Option<FinFunction>> = vec![None; shape.num_morphisms()];
        for x in 0..shape.num_objects() {
            table[shape.id(x)] = Some(FinFunction::identity(&objects[x]));
        }
        for (name, f) in arrows {
            let k = shape
                .morphisms()
                .require_index(&Element::atom(name), "shape arrows")?;
            table[k] = Some(f.clone());
        }
        let arrows = table
            .into_iter()
            .enumerate()
            .map(|(k, f)| {
                f.ok_or_else(|| {
                    Error::Invalid(format!("no function for shape arrow {}", shape.morphisms().get(k)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Diagram {
            shape,
            objects,
            arrows,
        })
    }

    /// Checks that every arrow has the right endpoints and that identities and
    /// composites are preserved.
    pub fn check_functorial(&self) -> Result<()> {
        let s = &self.shape;
        if self.objects.len() != s.num_objects() || self.arrows.len() != s.num_morphisms() {
            return Err(Error::NotFunctorial("diagram size does not match its shape".into()));
        }
        for (u, f) in self.arrows.iter().enumerate() {
            if f.dom() != &self.objects[s.src(u)] || f.cod() != &self.objects[s.tgt(u)] {
                return Err(Error::NotFunctorial(format!(
                    "arrow {} has the wrong endpoints",
                    s.morphisms().get(u)
                )));
            }
        }
        for x in 0..s.num_objects() {
            if self.arrows[s.id(x)] != FinFunction::identity(&self.objects[x]) {
                return Err(Error::NotFunctorial(format!(
                    "identity of {} is not sent to an identity",
                    s.objects().get(x)
                )));
            }
        }
        for (g, f, gf) in s.comp_entries() {
            if self.arrows[f].then_unchecked(&self.arrows[g]) != self.arrows[gf] {
                return Err(Error::NotFunctorial(format!(
                    "composite {} ∘ {} is not preserved",
                    s.morphisms().get(g),
                    s.morphisms().get(f)
                )));
            }
        }
        Ok(())
    }
}

/// A limit cone: the apex, one leg per index object, and the compatible
/// index tuples in canonical (lexicographic) order.
#[derive(Clone, Debug)]
pub struct FinLimit {
    pub apex: FinSet,
    pub legs: Vec<FinFunction>,
    tuples: Vec<Vec<usize>>,
}

impl FinLimit {
    /// Position in the apex of the point with the given component indices.
    pub fn position(&self, components: &[usize]) -> Option<usize> {
        self.tuples
            .binary_search_by(|t| t.as_slice().cmp(components))
            .ok()
    }

    /// Component indices of the apex point at position `k`.
    pub fn components(&self, k: usize) -> &[usize] {
        &self.tuples[k]
    }

    /// The unique function `K → apex` commuting with the legs, for a cone
    /// given by one function per index object. Errors if the cone does not
    /// land in the limit (i.e. is not a cone).
    pub fn mediate(&self, cone: &[FinFunction]) -> Result<FinFunction> {
        if cone.len() != self.legs.len() {
            return Err(Error::Invalid("cone has the wrong number of legs".into()));
        }
        let Some(first) = cone.first() else {
            // Empty index: the limit is a point.
            return Err(Error::Invalid(
                "cannot infer the cone vertex of an empty cone; use mediate_from".into(),
            ));
        };
        self.mediate_from(first.dom(), cone)
    }

    pub fn mediate_from(&self, vertex: &FinSet, cone: &[FinFunction]) -> Result<FinFunction> {
        if cone.len() != self.legs.len() {
            return Err(Error::Invalid("cone has the wrong number of legs".into()));
        }
        for (i, (k, l)) in cone.iter().zip(&self.legs).enumerate() {
            if k.dom() != vertex || k.cod() != l.cod() {
                return Err(Error::Invalid(format!("cone leg {i} has the wrong endpoints")));
            }
        }
        let mut map = Vec::with_capacity(vertex.len());
        let mut t = vec![0; cone.len()];
        for x in 0..vertex.len() {
            for (i, k) in cone.iter().enumerate() {
                t[i] = k.at(x);
            }
            let k = self.position(&t).ok_or_else(|| {
                Error::Invalid(format!("{} does not map into the limit", vertex.get(x)))
            })?;
            map.push(k);
        }
        Ok(FinFunction::from_indices_unchecked(vertex.clone(), self.apex.clone(), map))
    }
}

/// Limit of a functorial diagram, with the default size bound.
pub fn fin_limit(d: &Diagram) -> Result<FinLimit> {
    fin_limit_bounded(d, DEFAULT_BOUND)
}

pub fn fin_limit_bounded(d: &Diagram, bound: usize) -> Result<FinLimit> {
    d.check_functorial()?;
    limit_unchecked(&d.shape, &d.objects, &d.arrows, bound)
}

/// The limit engine. Points are tuples over all index objects satisfying
/// `arrow(u)(x_src) = x_tgt` for every index morphism `u`. Search assigns
/// objects in an order that lets most components be forced by an arrow out
/// of an already assigned object, or drawn from a fiber of an arrow into one.
pub(crate) fn limit_unchecked(
    shape: &FiniteCategory,
    objects: &[FinSet],
    arrows: &[FinFunction],
    bound: usize,
) -> Result<FinLimit> {
    let n = objects.len();
    let non_id: Vec<usize> = (0..arrows.len())
        .filter(|&u| !shape.is_identity(u))
        .collect();

    // assignment order
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while order.len() < n {
        let forced = (0..n).find(|&x| {
            !placed[x] && non_id.iter().any(|&u| shape.tgt(u) == x && placed[shape.src(u)])
        });
        let fibered = || {
            (0..n).find(|&x| {
                !placed[x] && non_id.iter().any(|&u| shape.src(u) == x && placed[shape.tgt(u)])
            })
        };
        let smallest = || {
            (0..n)
                .filter(|&x| !placed[x])
                .min_by_key(|&x| objects[x].len())
                .unwrap()
        };
        let x = forced.or_else(fibered).unwrap_or_else(smallest);
        placed[x] = true;
        order.push(x);
    }

    enum Step {
        Forced { arrow: usize },
        Fiber { arrow: usize, fibers: Vec<Vec<usize>> },
        Free,
    }
    let mut rank = vec![0; n];
    for (r, &x) in order.iter().enumerate() {
        rank[x] = r;
    }
    let steps: Vec<(usize, Step, Vec<usize>)> = order
        .iter()
        .enumerate()
        .map(|(r, &x)| {
            let earlier = |y: usize| rank[y] < r;
            let step = if let Some(&u) = non_id
                .iter()
                .find(|&&u| shape.tgt(u) == x && earlier(shape.src(u)))
            {
                Step::Forced { arrow: u }
            } else if let Some(&u) = non_id
                .iter()
                .find(|&&u| shape.src(u) == x && earlier(shape.tgt(u)))
            {
                Step::Fiber {
                    arrow: u,
                    fibers: arrows[u].fibers(),
                }
            } else {
                Step::Free
            };
            // every arrow between x and earlier objects, checked once x is set
            let checks = non_id
                .iter()
                .copied()
                .filter(|&u| {
                    (shape.src(u) == x && (earlier(shape.tgt(u)) || shape.tgt(u) == x))
                        || (shape.tgt(u) == x && earlier(shape.src(u)))
                })
                .collect();
            (x, step, checks)
        })
        .collect();

    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut cur = vec![usize::MAX; n];

    fn search(
        depth: usize,
        steps: &[(usize, Step, Vec<usize>)],
        shape: &FiniteCategory,
        objects: &[FinSet],
        arrows: &[FinFunction],
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        bound: usize,
    ) -> Result<()> {
        if depth == steps.len() {
            out.push(cur.clone());
            return check_bound(|| "limit".into(), out.len(), bound);
        }
        let (x, step, checks) = &steps[depth];
        let ok = |cur: &Vec<usize>| {
            checks
                .iter()
                .all(|&u| arrows[u].at(cur[shape.src(u)]) == cur[shape.tgt(u)])
        };
        let try_value = |v: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>| {
            cur[*x] = v;
            if ok(cur) {
                search(depth + 1, steps, shape, objects, arrows, cur, out, bound)?;
            }
            Ok::<(), crate::Error>(())
        };
        match step {
            Step::Forced { arrow } => {
                let v = arrows[*arrow].at(cur[shape.src(*arrow)]);
                try_value(v, cur, out)?;
            }
            Step::Fiber { arrow, fibers } => {
                for &v in &fibers[cur[shape.tgt(*arrow)]] {
                    try_value(v, cur, out)?;
                }
            }
            Step::Free => {
                for v in 0..objects[*x].len() {
                    try_value(v, cur, out)?;
                }
            }
        }
        cur[*x] = usize::MAX;
        Ok(())
    }

    search(0, &steps, shape, objects, arrows, &mut cur, &mut out, bound)?;
    out.sort_unstable();

    let apex = FinSet::from_sorted(
        out.iter()
            .map(|t| Element::tuple(t.iter().zip(objects).map(|(&i, s)| s.get(i).clone())))
            .collect(),
    );
    let legs = (0..n)
        .map(|i| {
            FinFunction::from_indices_unchecked(
                apex.clone(),
                objects[i].clone(),
                out.iter().map(|t| t[i]).collect(),
            )
        })
        .collect();
    Ok(FinLimit {
        apex,
        legs,
        tuples: out,
    })
}

/// Pullback of `f: A → C` and `g: B → C`; points are `(a, b, c)`.
pub fn fin_pullback(f: &FinFunction, g: &FinFunction) -> Result<FinLimit> {
    let shape = FiniteCategory::shape(&["a", "b", "c"], &[("f", "a", "c"), ("g", "b", "c")])?;
    let d = Diagram::over_shape(
        shape,
        vec![f.dom().clone(), g.dom().clone(), f.cod().clone()],
        &[("f", f.clone()), ("g", g.clone())],
    )?;
    fin_limit(&d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(dom: &FinSet, cod: &FinSet, pairs: &[(&str, &str)]) -> FinFunction {
        FinFunction::from_pairs(
            dom.clone(),
            cod.clone(),
            pairs.iter().map(|&(a, b)| (a.into(), b.into())),
        )
        .unwrap()
    }

    #[test]
    fn pullback_over_a_point_is_a_product() {
        let a = FinSet::atoms(["a", "b"]);
        let c = FinSet::atoms(["c"]);
        let x = FinSet::atoms(["x"]);
        let l = fin_pullback(
            &f(&a, &x, &[("a", "x"), ("b", "x")]),
            &f(&c, &x, &[("c", "x")]),
        )
        .unwrap();
        assert_eq!(l.apex.len(), 2);
    }

    #[test]
    fn equalizer_of_identity_and_swap_is_empty() {
        let bit = FinSet::range(2);
        let shape = FiniteCategory::shape(&["a", "b"], &[("f", "a", "b"), ("g", "a", "b")]).unwrap();
        let id = FinFunction::identity(&bit);
        let swap = f(&bit, &bit, &[("0", "1"), ("1", "0")]);
        let d = Diagram::over_shape(shape, vec![bit.clone(), bit.clone()], &[("f", id), ("g", swap.clone())])
            .unwrap();
        let l = fin_limit(&d).unwrap();
        // brute force: fixed points of swap
        let fixed = bit.iter().filter(|x| swap.apply(x) == Some(x)).count();
        assert_eq!(l.apex.len(), fixed);
        assert_eq!(fixed, 0);
    }

    #[test]
    fn one_object_limit_wraps_the_set() {
        let s = FinSet::atoms(["p", "q", "r"]);
        let shape = FiniteCategory::shape(&["x"], &[]).unwrap();
        let d = Diagram::over_shape(shape, vec![s.clone()], &[]).unwrap();
        let l = fin_limit(&d).unwrap();
        assert_eq!(l.apex.len(), 3);
        assert!(l.legs[0].is_bijective());
        assert_eq!(l.apex.get(1), &Element::tuple([s.get(1).clone()]));
    }

    #[test]
    fn empty_diagram_has_a_point() {
        let shape = FiniteCategory::empty();
        let d = Diagram {
            shape,
            objects: vec![],
            arrows: vec![],
        };
        let l = fin_limit(&d).unwrap();
        assert_eq!(l.apex, FinSet::singleton());
    }

    #[test]
    fn non_functorial_diagram_is_rejected() {
        let bit = FinSet::range(2);
        let shape = FiniteCategory::shape(&["a"], &[]).unwrap();
        let swap = f(&bit, &bit, &[("0", "1"), ("1", "0")]);
        let d = Diagram {
            shape,
            objects: vec![bit],
            arrows: vec![swap],
        };
        assert!(matches!(fin_limit(&d), Err(Error::NotFunctorial(_))));
    }

    #[test]
    fn mediating_map_is_unique_and_commutes() {
        let a = FinSet::atoms(["a1", "a2"]);
        let b = FinSet::atoms(["b1", "b2", "b3"]);
        let c = FinSet::atoms(["c1", "c2"]);
        let fa = f(&a, &c, &[("a1", "c1"), ("a2", "c2")]);
        let gb = f(&b, &c, &[("b1", "c1"), ("b2", "c1"), ("b3", "c2")]);
        let l = fin_pullback(&fa, &gb).unwrap();
        assert_eq!(l.apex.len(), 3);
        // cone from K = {k}: k ↦ a1, b2, c1
        let k = FinSet::atoms(["k"]);
        let cone = [
            f(&k, &a, &[("k", "a1")]),
            f(&k, &b, &[("k", "b2")]),
            f(&k, &c, &[("k", "c1")]),
        ];
        let m = l.mediate(&cone).unwrap();
        for i in 0..3 {
            assert_eq!(m.then(&l.legs[i]).unwrap(), cone[i]);
        }
        // a non-cone is rejected
        let bad = [cone[0].clone(), f(&k, &b, &[("k", "b3")]), cone[2].clone()];
        assert!(l.mediate(&bad).is_err());
    }
}
