//! Small named categories, toposes and presheaves used by the tests, the
//! command-line tool and the bundled workspace files.

use crate::error::Result;
use crate::finset::{Element, FinFunction, FinSet, FiniteCategory};
use crate::topos::{Presheaf, Topos};

/// Permutations of `{1, 2, 3}` as zero-based images, in cycle notation.
pub const S3: [(&str, [usize; 3]); 6] = [
    ("e", [0, 1, 2]),
    ("(12)", [1, 0, 2]),
    ("(13)", [2, 1, 0]),
    ("(23)", [0, 2, 1]),
    ("(123)", [1, 2, 0]),
    ("(132)", [2, 0, 1]),
];

fn s3_index(p: [usize; 3]) -> usize {
    S3.iter().position(|(_, q)| *q == p).expect("permutation")
}

pub fn c2() -> FiniteCategory {
    FiniteCategory::group(&["e", "g"], |a, b| a ^ b).expect("C2")
}

pub fn z3() -> FiniteCategory {
    FiniteCategory::group(&["e", "r", "r2"], |a, b| (a + b) % 3).expect("Z3")
}

pub fn s3() -> FiniteCategory {
    let names: Vec<&str> = S3.iter().map(|(n, _)| *n).collect();
    FiniteCategory::group(&names, |g, f| {
        let (pg, pf) = (S3[g].1, S3[f].1);
        s3_index([pg[pf[0]], pg[pf[1]], pg[pf[2]]])
    })
    .expect("S3")
}

/// The monoid `{e, g}` with `g ∘ g = g`.
pub fn idempotent() -> FiniteCategory {
    FiniteCategory::group(&["e", "g"], |a, b| a | b).expect("idempotent monoid")
}

/// The chain `0 < 1 < ... < n`.
pub fn chain(n: usize) -> FiniteCategory {
    let names: Vec<String> = (0..=n).map(|i| i.to_string()).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    FiniteCategory::preorder(&refs, |x, y| x <= y).expect("chain")
}

pub fn discrete(n: usize) -> FiniteCategory {
    let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    FiniteCategory::preorder(&refs, |x, y| x == y).expect("discrete")
}

/// Two objects and an isomorphism `f: a → b` with inverse `f'`.
pub fn walking_iso() -> FiniteCategory {
    let objects = FinSet::atoms(["a", "b"]);
    let morphisms = FinSet::atoms(["f", "f'", "id:a", "id:b"]);
    let ends = [("f", "a", "b"), ("f'", "b", "a"), ("id:a", "a", "a"), ("id:b", "b", "b")];
    let src = FinFunction::from_pairs(morphisms.clone(), objects.clone(), ends.iter().map(|&(m, s, _)| (m.into(), s.into())))
        .expect("src");
    let tgt = FinFunction::from_pairs(morphisms.clone(), objects.clone(), ends.iter().map(|&(m, _, t)| (m.into(), t.into())))
        .expect("tgt");
    let identity = FinFunction::from_pairs(
        objects.clone(),
        morphisms.clone(),
        [("a".into(), "id:a".into()), ("b".into(), "id:b".into())],
    )
    .expect("identity");
    let comp = [
        ("f'", "f", "id:a"),
        ("f", "f'", "id:b"),
        ("f", "id:a", "f"),
        ("id:b", "f", "f"),
        ("f'", "id:b", "f'"),
        ("id:a", "f'", "f'"),
        ("id:a", "id:a", "id:a"),
        ("id:b", "id:b", "id:b"),
    ];
    FiniteCategory::new(
        objects,
        morphisms,
        src,
        tgt,
        identity,
        comp.iter().map(|&(g, f, gf)| (Element::atom(g), Element::atom(f), Element::atom(gf))),
    )
    .expect("walking isomorphism")
}

pub fn parallel_arrows() -> FiniteCategory {
    FiniteCategory::shape(&["a", "b"], &[("f", "a", "b"), ("g", "a", "b")]).expect("parallel arrows")
}

/// Named finite categories for corpus-wide checks.
pub fn finite_categories() -> Vec<(&'static str, FiniteCategory)> {
    vec![
        ("terminal", FiniteCategory::terminal()),
        ("empty", FiniteCategory::empty()),
        ("c2", c2()),
        ("z3", z3()),
        ("s3", s3()),
        ("chain1", chain(1)),
        ("chain2", chain(2)),
        ("walking-iso", walking_iso()),
        ("discrete2", discrete(2)),
        ("idempotent", idempotent()),
        ("parallel", parallel_arrows()),
    ]
}

pub fn c2_sets() -> Topos {
    Topos::new(c2()).expect("C2")
}

pub fn s3_sets() -> Topos {
    Topos::new(s3()).expect("S3")
}

/// Presheaves on `0 < 1`: a map `P(1) → P(0)`.
pub fn sierpinski() -> Topos {
    Topos::new(chain(1)).expect("Sierpinski")
}

/// Named toposes for corpus-wide checks.
pub fn toposes() -> Vec<(&'static str, Topos)> {
    vec![
        ("finset", Topos::finset()),
        ("c2-sets", c2_sets()),
        ("s3-sets", s3_sets()),
        ("sierpinski", sierpinski()),
    ]
}

/// `C₂` acting freely on `{0, 1}`.
pub fn c2_free_orbit(t: &Topos) -> Presheaf {
    let s = FinSet::range(2);
    let swap = FinFunction::from_indices(s.clone(), s.clone(), vec![1, 0]).expect("swap");
    t.presheaf_from_actions(vec![s], &[("g".into(), swap)]).expect("free orbit")
}

/// `n` fixed points.
pub fn c2_trivial(t: &Topos, n: usize) -> Presheaf {
    t.constant(&FinSet::range(n))
}

/// `S₃` acting on `{1, 2, 3}`, as a right action `x · σ = σ⁻¹(x)`.
pub fn s3_natural(t: &Topos) -> Presheaf {
    let s = FinSet::atoms(["1", "2", "3"]);
    let actions: Vec<(Element, FinFunction)> = S3
        .iter()
        .map(|(name, p)| {
            let mut inv = [0; 3];
            for (i, &j) in p.iter().enumerate() {
                inv[j] = i;
            }
            (Element::atom(name), FinFunction::from_indices(s.clone(), s.clone(), inv.to_vec()).expect("permutation"))
        })
        .collect();
    t.presheaf_from_actions(vec![s], &actions).expect("natural action")
}

/// One presheaf per isomorphism class with every set of size at most `max`.
pub fn small_presheaves(t: &Topos, max: usize) -> Result<Vec<Presheaf>> {
    t.presheaves_up_to_iso(max)
}
