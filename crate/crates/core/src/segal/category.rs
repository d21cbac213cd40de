use super::TruncatedSimplicialObject;
use crate::error::{Error, Result};
use crate::finset::{FinFunction, FiniteCategory};
use crate::topos::{NatTrans, Presheaf, PsDiagram, PsLimit, Topos};

/// An internal category `(C0, C1, s, t, e, m)`.
///
/// A pair `(f, g)` is composable when `t(f) = s(g)`, and `m(f, g)` is "`g`
/// after `f`": `s(m(f, g)) = s(f)` and `t(m(f, g)) = t(g)`. The domain of `m`
/// must be [`CategoryObject::composable`], whose points are `(f, g, x)` with
/// `x = t(f) = s(g)`.
#[derive(Clone, Debug)]
pub struct CategoryObject {
    pub c0: Presheaf,
    pub c1: Presheaf,
    pub s: NatTrans,
    pub t: NatTrans,
    pub e: NatTrans,
    pub m: NatTrans,
}

impl CategoryObject {
    /// The object of composable pairs `C1 ×_{C0} C1`, points `(f, g, x)`.
    pub fn composable(topos: &Topos, s: &NatTrans, t: &NatTrans) -> Result<PsLimit> {
        topos.pullback(t, s)
    }

    /// Composable triples, points `(f, g, h, x, y)` with `x = t(f) = s(g)` and
    /// `y = t(g) = s(h)`.
    pub fn composable_triples(topos: &Topos, s: &NatTrans, t: &NatTrans) -> Result<PsLimit> {
        let shape = FiniteCategory::shape(
            &["a", "b", "c", "x", "y"],
            &[("ta", "a", "x"), ("sb", "b", "x"), ("tb", "b", "y"), ("sc", "c", "y")],
        )?;
        let c1 = s.dom().clone();
        let c0 = s.cod().clone();
        let d = PsDiagram::over_shape(
            topos,
            shape,
            vec![c1.clone(), c1.clone(), c1, c0.clone(), c0],
            &[("ta", t), ("sb", s), ("tb", t), ("sc", s)],
        )?;
        topos.limit(&d)
    }

    /// The nerve of a finite category, as a category object of constant
    /// presheaves. `m(f, g) = g ∘ f`.
    pub fn from_finite_category(topos: &Topos, c: &FiniteCategory) -> Result<CategoryObject> {
        let c0 = topos.constant(c.objects());
        let c1 = topos.constant(c.morphisms());
        let constant = |f: &FinFunction, dom: &Presheaf, cod: &Presheaf| {
            topos.nat(dom, cod, vec![f.clone(); topos.num_objects()])
        };
        let s = constant(c.src_fn(), &c1, &c0)?;
        let t = constant(c.tgt_fn(), &c1, &c0)?;
        let e = constant(c.identity_fn(), &c0, &c1)?;
        let pairs = Self::composable(topos, &s, &t)?;
        let mor = c.morphisms();
        for g in 0..c.num_morphisms() {
            for f in c.incoming(c.src(g)) {
                if c.comp(g, *f).is_none() {
                    return Err(Error::Invalid(format!("no composite {} ∘ {}", mor.get(g), mor.get(*f))));
                }
            }
        }
        let m = topos.nat_from_fn(&pairs.apex, &c1, |_, pt| {
            let p = pt.as_tuple().expect("pair");
            let (f, g) = (mor.index_of(&p[0]).expect("f"), mor.index_of(&p[1]).expect("g"));
            let gf = c.comp(g, f).expect("composite defined");
            mor.get(gf).clone()
        })?;
        Ok(CategoryObject { c0, c1, s, t, e, m })
    }

    /// The category axioms that fail, each named.
    pub fn violations(&self, topos: &Topos) -> Result<Vec<String>> {
        let mut out = Vec::new();
        let id0 = topos.identity(&self.c0);
        let id1 = topos.identity(&self.c1);
        if self.s.dom() != &self.c1 || self.s.cod() != &self.c0 || self.t.dom() != &self.c1 || self.t.cod() != &self.c0 {
            return Err(Error::Invalid("s and t must be maps C1 → C0".into()));
        }
        if self.e.dom() != &self.c0 || self.e.cod() != &self.c1 {
            return Err(Error::Invalid("e must be a map C0 → C1".into()));
        }
        let pairs = Self::composable(topos, &self.s, &self.t)?;
        if self.m.dom() != &pairs.apex || self.m.cod() != &self.c1 {
            return Err(Error::Invalid("m must be a map C1 ×_C0 C1 → C1".into()));
        }
        if self.e.then(&self.s)? != id0 {
            out.push("s ∘ e = id".into());
        }
        if self.e.then(&self.t)? != id0 {
            out.push("t ∘ e = id".into());
        }
        if self.m.then(&self.s)? != pairs.legs[0].then(&self.s)? {
            out.push("s ∘ m = s ∘ first".into());
        }
        if self.m.then(&self.t)? != pairs.legs[1].then(&self.t)? {
            out.push("t ∘ m = t ∘ second".into());
        }
        if !out.is_empty() {
            return Ok(out);
        }
        let es = self.s.then(&self.e)?;
        let et = self.t.then(&self.e)?;
        let left = pairs.mediate(topos, &self.c1, &[es, id1.clone(), self.s.clone()])?;
        if left.then(&self.m)? != id1 {
            out.push("m(e(s f), f) = f".into());
        }
        let right = pairs.mediate(topos, &self.c1, &[id1.clone(), et, self.t.clone()])?;
        if right.then(&self.m)? != id1 {
            out.push("m(f, e(t f)) = f".into());
        }
        let triples = Self::composable_triples(topos, &self.s, &self.t)?;
        let [a, b, c, x, y] = &triples.legs[..] else { unreachable!() };
        let ab = pairs.mediate(topos, &triples.apex, &[a.clone(), b.clone(), x.clone()])?.then(&self.m)?;
        let bc = pairs.mediate(topos, &triples.apex, &[b.clone(), c.clone(), y.clone()])?.then(&self.m)?;
        let l = pairs.mediate(topos, &triples.apex, &[ab, c.clone(), y.clone()])?;
        let r = pairs.mediate(topos, &triples.apex, &[a.clone(), bc, x.clone()])?;
        if l.then(&self.m)? != r.then(&self.m)? {
            out.push("m(m(f, g), h) = m(f, m(g, h))".into());
        }
        Ok(out)
    }

    pub fn validate(&self, topos: &Topos) -> Result<()> {
        let v = self.violations(topos)?;
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Invalid(format!("not a category object: {}", v.join("; "))))
        }
    }
}

/// The nerve of a category object, with the limits its upper levels are.
#[derive(Clone, Debug)]
pub struct Nerve {
    pub category: CategoryObject,
    pub pairs: PsLimit,
    pub triples: PsLimit,
    pub simplicial: TruncatedSimplicialObject,
}

/// `X2 = C1 ×_{C0} C1` and `X3 = C1 ×_{C0} C1 ×_{C0} C1`, with
/// `d0(f, g) = g`, `d1(f, g) = m(f, g)`, `d2(f, g) = f`,
/// `s0(f) = (e(s f), f)`, `s1(f) = (f, e(t f))`, and on triples
/// `d0 = (g, h)`, `d1 = (gf, h)`, `d2 = (f, hg)`, `d3 = (f, g)`,
/// `s0 = (id, f, g)`, `s1 = (f, id, g)`, `s2 = (f, g, id)`.
pub fn nerve_truncation(topos: &Topos, c: &CategoryObject) -> Result<Nerve> {
    c.validate(topos)?;
    let n = nerve_unchecked(topos, c)?;
    let v = n.simplicial.identity_violations();
    if !v.is_empty() {
        return Err(Error::Internal(format!("nerve fails simplicial identities: {}", v.join("; "))));
    }
    Ok(n)
}

/// The same construction without checking the category axioms; a broken
/// composition shows up as failed simplicial identities.
pub fn nerve_unchecked(topos: &Topos, c: &CategoryObject) -> Result<Nerve> {
    let (s, t, e, m) = (&c.s, &c.t, &c.e, &c.m);
    let pairs = CategoryObject::composable(topos, s, t)?;
    let triples = CategoryObject::composable_triples(topos, s, t)?;
    let (x2, x3) = (&pairs.apex, &triples.apex);
    let [pf, pg, px] = &pairs.legs[..] else { unreachable!() };
    let [a, b, cc, x, y] = &triples.legs[..] else { unreachable!() };
    let into2 = |legs: [NatTrans; 3], dom: &Presheaf| pairs.mediate(topos, dom, &legs);
    let into3 = |legs: [NatTrans; 5], dom: &Presheaf| triples.mediate(topos, dom, &legs);
    let id1 = topos.identity(&c.c1);

    let ab = into2([a.clone(), b.clone(), x.clone()], x3)?;
    let bc = into2([b.clone(), cc.clone(), y.clone()], x3)?;
    let d3_1 = into2([ab.then(m)?, cc.clone(), y.clone()], x3)?;
    let d3_2 = into2([a.clone(), bc.then(m)?, x.clone()], x3)?;
    let faces = vec![
        vec![t.clone(), s.clone()],
        vec![pg.clone(), m.clone(), pf.clone()],
        vec![bc, d3_1, d3_2, ab],
    ];

    let s1_0 = into2([s.then(e)?, id1.clone(), s.clone()], &c.c1)?;
    let s1_1 = into2([id1, t.then(e)?, t.clone()], &c.c1)?;
    let sf = pf.then(s)?;
    let tg = pg.then(t)?;
    let s2_0 = into3([sf.then(e)?, pf.clone(), pg.clone(), sf.clone(), px.clone()], x2)?;
    let s2_1 = into3([pf.clone(), px.then(e)?, pg.clone(), px.clone(), px.clone()], x2)?;
    let s2_2 = into3([pf.clone(), pg.clone(), tg.then(e)?, px.clone(), tg], x2)?;
    let degens = vec![vec![e.clone()], vec![s1_0, s1_1], vec![s2_0, s2_1, s2_2]];

    let levels = vec![c.c0.clone(), c.c1.clone(), x2.clone(), x3.clone()];
    let simplicial = TruncatedSimplicialObject::new(levels, faces, degens)?;
    Ok(Nerve {
        category: c.clone(),
        pairs,
        triples,
        simplicial,
    })
}
