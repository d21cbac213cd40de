//! Acceptance criteria. Each prints one PASS/FAIL line; any failure makes the
//! target exit nonzero.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use segal_topos::corpus;
use segal_topos::segal::{nerve_truncation, CategoryObject, SegalObject};
use segal_topos::topos::HomSearch;
use segal_topos::{Element, FinSet, FiniteCategory, NatTrans, Presheaf, SliceMap, Topos, DEFAULT_BOUND};

const SET_CLASSIFICATION_LIMIT: Duration = Duration::from_secs(60);
const S3_EXAMPLE_LIMIT: Duration = Duration::from_secs(120);
const SWEEP_MAX: usize = 3;
const RANDOM_SQUARES_PER_TOPOS: usize = 100;
const ADJUNCTION_INSTANCES_PER_TOPOS: usize = 50;
const SEED: u64 = 0x5e6a1;

type Outcome = Result<String, String>;
type Criterion = fn() -> Outcome;

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn err(e: segal_topos::Error) -> String {
    e.to_string()
}

fn finset_of(t: &Topos, n: usize) -> Presheaf {
    t.constant(&FinSet::range(n))
}

/// Every function between `{0..m}` and `{0..n}` with `m, n <= max`.
fn all_finset_maps(t: &Topos, max: usize) -> Result<Vec<NatTrans>, String> {
    let mut out = Vec::new();
    for m in 0..=max {
        for n in 0..=max {
            let (a, b) = (finset_of(t, m), finset_of(t, n));
            out.extend(HomSearch::new(t, &a, &b).maps().map_err(err)?);
        }
    }
    Ok(out)
}

fn set_classification() -> Outcome {
    let t = Topos::finset();
    let start = Instant::now();
    let found = t.enumerate_univalent(SWEEP_MAX).map_err(err)?;
    let elapsed = start.elapsed();
    let point = t.constant(&FinSet::atoms(["1"]));
    let expected = [
        t.identity(&t.initial()),
        t.from_initial(&point),
        t.identity(&point),
        t.nat_from_fn(&point, &t.constant(&FinSet::atoms(["0", "1"])), |_, e| e.clone()).map_err(err)?,
    ];
    let mut matched = vec![0usize; expected.len()];
    for p in &found {
        for (i, q) in expected.iter().enumerate() {
            if t.arrow_iso(p, q).map_err(err)?.is_some() {
                matched[i] += 1;
            }
        }
    }
    let detail = format!("{} maps, matches {:?}, {:.2?}", found.len(), matched, elapsed);
    ensure(found.len() == 4 && matched == [1, 1, 1, 1] && elapsed < SET_CLASSIFICATION_LIMIT, detail)
}

fn oracle_equivalence() -> Outcome {
    let t = Topos::finset();
    let maps = all_finset_maps(&t, SWEEP_MAX)?;
    let mut disagreements = 0;
    for p in &maps {
        let nerve = t.nerve_is_complete(p).map_err(err)?;
        let oracle = t.fiber_oracle_univalent(p).map_err(err)?;
        if nerve != oracle {
            disagreements += 1;
        }
    }
    ensure(disagreements == 0, format!("{} maps, {disagreements} disagreements", maps.len()))
}

fn mono_lemma() -> Outcome {
    let t = Topos::finset();
    let maps = all_finset_maps(&t, SWEEP_MAX)?;
    let mut univalent = 0;
    let mut counterexamples = 0;
    for p in &maps {
        if t.nerve_is_complete(p).map_err(err)? {
            univalent += 1;
            if !p.is_mono() {
                counterexamples += 1;
            }
        }
    }
    ensure(counterexamples == 0, format!("{univalent} univalent of {} maps, {counterexamples} not mono", maps.len()))
}

fn s3_example() -> Outcome {
    let t = corpus::s3_sets().with_bound(DEFAULT_BOUND);
    let x = corpus::s3_natural(&t);
    let p = t.to_terminal(&x);
    let start = Instant::now();
    let r = t.is_univalent(&p).map_err(err)?;
    let elapsed = start.elapsed();
    let detail = format!(
        "univalent = {}, mono = {}, fiberwise maps {:?}, equivalences {:?}, {:.2?}",
        r.univalent, r.mono, r.sizes.fiberwise_maps, r.sizes.equivalences, elapsed
    );
    ensure(r.univalent && !r.mono && elapsed < S3_EXAMPLE_LIMIT, detail)
}

/// Small presheaves of each bundled topos plus its named examples.
fn corpus_objects(name: &str, t: &Topos) -> Result<Vec<Presheaf>, String> {
    let mut objs = corpus::small_presheaves(t, 2).map_err(err)?;
    match name {
        "c2-sets" => objs.push(corpus::c2_free_orbit(t)),
        "s3-sets" => objs.push(corpus::s3_natural(t)),
        "finset" => objs.push(finset_of(t, 3)),
        _ => {}
    }
    objs.push(t.subobject_classifier().map_err(err)?.true_arrow.cod().clone());
    Ok(objs)
}

fn identity_criterion() -> Outcome {
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for (name, t) in corpus::toposes() {
        for b in corpus_objects(name, &t)? {
            let univalent = t.nerve_is_complete(&t.identity(&b)).map_err(err)?;
            let truncated = t.is_minus1_truncated(&b).map_err(err)?;
            checked += 1;
            if univalent != truncated {
                mismatches.push(format!("{name} {:?}", b.cardinalities()));
            }
        }
    }
    ensure(mismatches.is_empty(), format!("{checked} objects, mismatches {mismatches:?}"))
}

fn universal_mono() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, t) in [("finset", Topos::finset()), ("c2-sets", corpus::c2_sets()), ("sierpinski", corpus::sierpinski())] {
        let r = t.check_universal_mono_univalent().map_err(err)?;
        ok &= r.univalent && r.poset;
        lines.push(format!("{name}: univalent {} poset {}", r.univalent, r.poset));
    }
    ensure(ok, lines.join("; "))
}

/// Isomorphisms of a finite category straight from the composition table.
fn brute_isos(c: &FiniteCategory) -> BTreeSet<Element> {
    let n = c.num_morphisms();
    (0..n)
        .filter(|&f| {
            (0..n).any(|g| {
                c.comp(g, f).is_some_and(|gf| gf == c.id(c.src(f))) && c.comp(f, g).is_some_and(|fg| fg == c.id(c.tgt(f)))
            })
        })
        .map(|f| c.morphisms().get(f).clone())
        .collect()
}

fn equivalence_oracle() -> Outcome {
    let t = Topos::finset();
    let cats = corpus::finite_categories();
    let mut bad = Vec::new();
    for (name, c) in &cats {
        let co = CategoryObject::from_finite_category(&t, c).map_err(err)?;
        let w = SegalObject::new(&t, nerve_truncation(&t, &co).map_err(err)?.simplicial).map_err(err)?;
        let eq = w.hoequiv(&t).map_err(err)?;
        let u = eq.u.component(0);
        let image: BTreeSet<Element> = u.pairs().map(|(_, f)| f.clone()).collect();
        let isos = brute_isos(c);
        let gaunt = isos.iter().all(|f| c.is_identity(c.morphisms().index_of(f).unwrap()));
        let complete = w.is_complete(&t).map_err(err)?;
        if !u.is_injective() || image != isos || complete != gaunt {
            bad.push(format!("{name}: |carrier| {} |isos| {} complete {complete} gaunt {gaunt}", u.dom().len(), isos.len()));
        }
    }
    ensure(cats.len() >= 8 && bad.is_empty(), format!("{} categories, failures {bad:?}", cats.len()))
}

/// Segal objects from the corpus: nerves of finite categories in finite sets
/// and in `C₂`-sets, and nerves of small maps in several toposes.
fn segal_corpus() -> Result<Vec<(String, Topos, SegalObject)>, String> {
    let mut out = Vec::new();
    for (ti, t) in [Topos::finset(), corpus::c2_sets()].into_iter().enumerate() {
        for (name, c) in corpus::finite_categories() {
            if ti == 1 && !matches!(name, "c2" | "chain1" | "walking-iso") {
                continue;
            }
            let co = CategoryObject::from_finite_category(&t, &c).map_err(err)?;
            let w = SegalObject::new(&t, nerve_truncation(&t, &co).map_err(err)?.simplicial).map_err(err)?;
            out.push((format!("nerve {name} in topos {ti}"), t.clone(), w));
        }
    }
    for (name, t) in corpus::toposes() {
        let maps = if name == "s3-sets" {
            vec![t.to_terminal(&corpus::s3_natural(&t))]
        } else {
            t.maps_up_to_iso(if name == "finset" { 2 } else { 1 }).map_err(err)?
        };
        for (i, p) in maps.iter().enumerate() {
            let n = t.nerve_of_map(p).map_err(err)?;
            out.push((format!("nerve of map {i} in {name}"), t.clone(), n.segal));
        }
    }
    Ok(out)
}

/// Contexts: the terminal object, and a two-element set in finite sets.
fn contexts(t: &Topos) -> Vec<Presheaf> {
    let mut v = vec![t.terminal()];
    if t.num_objects() == 1 && t.index().num_morphisms() == 1 {
        v.push(finset_of(t, 2));
    }
    v
}

const MORPHISM_CAP: usize = 40;

fn composition_laws() -> Outcome {
    let mut triples = 0usize;
    let mut failures = Vec::new();
    for (name, t, w) in segal_corpus()? {
        let x = &w.x;
        for d in contexts(&t) {
            let mut morphisms = HomSearch::new(&t, &d, x.level(1)).maps().map_err(err)?;
            morphisms.truncate(MORPHISM_CAP);
            let ends: Vec<(NatTrans, NatTrans)> = morphisms
                .iter()
                .map(|f| Ok((f.then(x.source())?, f.then(x.target())?)))
                .collect::<Result<_, segal_topos::Error>>()
                .map_err(err)?;
            for (f, (sf, tf)) in morphisms.iter().zip(&ends) {
                let left = w.compose(&t, &w.identity_morphism(sf).map_err(err)?, f).map_err(err)?;
                let right = w.compose(&t, f, &w.identity_morphism(tf).map_err(err)?).map_err(err)?;
                if &left != f || &right != f {
                    failures.push(format!("{name}: unit law"));
                }
            }
            for (i, f) in morphisms.iter().enumerate() {
                for (j, g) in morphisms.iter().enumerate() {
                    if ends[i].1 != ends[j].0 {
                        continue;
                    }
                    let gf = w.compose(&t, f, g).map_err(err)?;
                    for (k, h) in morphisms.iter().enumerate() {
                        if ends[j].1 != ends[k].0 {
                            continue;
                        }
                        triples += 1;
                        let hg = w.compose(&t, g, h).map_err(err)?;
                        if w.compose(&t, &gf, h).map_err(err)? != w.compose(&t, f, &hg).map_err(err)? {
                            failures.push(format!("{name}: associativity"));
                        }
                    }
                }
            }
        }
    }
    ensure(failures.is_empty(), format!("{triples} composable triples, failures {failures:?}"))
}

fn u_mono_and_completeness_agree() -> Outcome {
    let corpus = segal_corpus()?;
    let mut bad = Vec::new();
    for (name, t, w) in &corpus {
        let eq = w.hoequiv(t).map_err(err)?;
        let c = w.completeness(t).map_err(err)?;
        if !eq.u.is_mono() || c.s0_iso != c.pullback_square {
            bad.push(name.clone());
        }
    }
    ensure(bad.is_empty(), format!("{} Segal objects, failures {bad:?}", corpus.len()))
}

fn poset_theorem() -> Outcome {
    let t = Topos::finset();
    let found = t.enumerate_univalent(SWEEP_MAX).map_err(err)?;
    let mut max = 0;
    for p in &found {
        for q in &found {
            max = max.max(t.pullback_square_homs(p, q).map_err(err)?.len());
        }
    }
    ensure(max <= 1, format!("{} ordered pairs, largest square count {max}", found.len() * found.len()))
}

fn uni_iff_mono() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, t) in [("finset", Topos::finset()), ("c2-sets", corpus::c2_sets())] {
        let targets = t.enumerate_univalent(2).map_err(err)?;
        let sources = corpus::small_presheaves(&t, 2).map_err(err)?;
        let (mut squares, mut failures, mut attempts) = (0, 0, 0);
        while squares < RANDOM_SQUARES_PER_TOPOS && attempts < 100 * RANDOM_SQUARES_PER_TOPOS {
            attempts += 1;
            let p1 = &targets[rand::Rng::gen_range(&mut rng, 0..targets.len())];
            let Some(sq) = t.random_pullback_square(&mut rng, p1, &sources).map_err(err)? else { continue };
            squares += 1;
            if !t.check_uni_iff_mono(&sq).map_err(err)?.holds() {
                failures += 1;
            }
        }
        ok &= squares >= RANDOM_SQUARES_PER_TOPOS && failures == 0;
        lines.push(format!("{name}: {squares} squares, {failures} failures"));
    }
    ensure(ok, lines.join("; "))
}

fn random_over(rng: &mut ChaCha8Rng, t: &Topos, objs: &[Presheaf], base: &Presheaf) -> Result<Option<NatTrans>, String> {
    use rand::seq::SliceRandom;
    let total = objs.choose(rng).expect("objects");
    t.random_map(rng, total, base).map_err(err)
}

fn dependent_product_adjunction() -> Outcome {
    use rand::seq::SliceRandom;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 1);
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, t) in corpus::toposes() {
        let objs = corpus::small_presheaves(&t, 2).map_err(err)?;
        let (mut instances, mut mismatches, mut attempts) = (0, 0, 0);
        while instances < ADJUNCTION_INSTANCES_PER_TOPOS && attempts < 100 * ADJUNCTION_INSTANCES_PER_TOPOS {
            attempts += 1;
            let (a, b) = (objs.choose(&mut rng).unwrap(), objs.choose(&mut rng).unwrap());
            let Some(f) = t.random_map(&mut rng, a, b).map_err(err)? else { continue };
            let Some(x) = random_over(&mut rng, &t, &objs, a)? else { continue };
            let Some(g) = random_over(&mut rng, &t, &objs, b)? else { continue };
            let (x, g) = (SliceMap::new(x), SliceMap::new(g));
            let pi = t.dependent_product(&f, &x).map_err(err)?;
            let (pulled, _) = t.pullback_functor(&f, &g).map_err(err)?;
            let left = t.slice_homs(&g, &pi.slice).map_err(err)?.count().map_err(err)?;
            let right = t.slice_homs(&pulled, &x).map_err(err)?.count().map_err(err)?;
            instances += 1;
            if left != right {
                mismatches += 1;
            }
        }
        ok &= instances >= ADJUNCTION_INSTANCES_PER_TOPOS && mismatches == 0;
        lines.push(format!("{name}: {instances} instances, {mismatches} mismatches"));
    }
    ensure(ok, lines.join("; "))
}

fn main() {
    let criteria: [(&str, Criterion); 12] = [
        ("set classification: four univalent maps up to iso", set_classification),
        ("nerve pipeline agrees with the fiber oracle", oracle_equivalence),
        ("univalent maps of finite sets are mono", mono_lemma),
        ("natural S3-set over the point is univalent and not mono", s3_example),
        ("identity of B is univalent iff B is (-1)-truncated", identity_criterion),
        ("universal mono is univalent with a poset nerve", universal_mono),
        ("equivalences of nerves are the isomorphisms; complete iff gaunt", equivalence_oracle),
        ("associativity and unit laws", composition_laws),
        ("U is mono; completeness formulations agree", u_mono_and_completeness_agree),
        ("at most one pullback square between univalent maps", poset_theorem),
        ("univalence of a pullback iff the base map is mono", uni_iff_mono),
        ("dependent product adjunction counts", dependent_product_adjunction),
    ];
    let mut failed = 0;
    for (i, (label, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("criterion {:>2} PASS  {label} ({d}) [{secs:.1}s]", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {label} ({d}) [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
