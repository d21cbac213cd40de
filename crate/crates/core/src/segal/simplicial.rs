use crate::error::{Error, Result};
use crate::topos::{NatTrans, Presheaf, Topos};

/// A simplicial object truncated at level 3: levels `X0..X3`, faces
/// `d(n, i): Xn → X(n-1)` for `1 ≤ n ≤ 3`, degeneracies `s(n, i): Xn → X(n+1)`
/// for `n ≤ 2`. The source map is `d(1, 1)` and the target map `d(1, 0)`.
#[derive(Clone, Debug)]
pub struct TruncatedSimplicialObject {
    levels: Vec<Presheaf>,
    faces: Vec<Vec<NatTrans>>,
    degens: Vec<Vec<NatTrans>>,
}

impl TruncatedSimplicialObject {
    /// `faces[n-1][i] = d(n, i)`, `degens[n][i] = s(n, i)`. Checks endpoints
    /// only; see [`TruncatedSimplicialObject::identity_violations`].
    pub fn new(levels: Vec<Presheaf>, faces: Vec<Vec<NatTrans>>, degens: Vec<Vec<NatTrans>>) -> Result<Self> {
        if levels.len() != 4 || faces.len() != 3 || degens.len() != 3 {
            return Err(Error::Invalid("a truncated simplicial object has levels 0 to 3".into()));
        }
        for n in 1..=3 {
            if faces[n - 1].len() != n + 1 {
                return Err(Error::Invalid(format!("level {n} needs {} faces", n + 1)));
            }
            for (i, d) in faces[n - 1].iter().enumerate() {
                if d.dom() != &levels[n] || d.cod() != &levels[n - 1] {
                    return Err(Error::Invalid(format!("face d({n},{i}) has the wrong endpoints")));
                }
            }
        }
        for n in 0..=2 {
            if degens[n].len() != n + 1 {
                return Err(Error::Invalid(format!("level {n} needs {} degeneracies", n + 1)));
            }
            for (i, s) in degens[n].iter().enumerate() {
                if s.dom() != &levels[n] || s.cod() != &levels[n + 1] {
                    return Err(Error::Invalid(format!("degeneracy s({n},{i}) has the wrong endpoints")));
                }
            }
        }
        Ok(TruncatedSimplicialObject { levels, faces, degens })
    }

    /// Every level `P`, every structure map the identity.
    pub fn constant(topos: &Topos, p: &Presheaf) -> Self {
        let id = topos.identity(p);
        TruncatedSimplicialObject {
            levels: vec![p.clone(); 4],
            faces: (1..=3).map(|n| vec![id.clone(); n + 1]).collect(),
            degens: (0..=2).map(|n| vec![id.clone(); n + 1]).collect(),
        }
    }

    pub fn level(&self, n: usize) -> &Presheaf {
        &self.levels[n]
    }

    pub fn levels(&self) -> &[Presheaf] {
        &self.levels
    }

    pub fn d(&self, n: usize, i: usize) -> &NatTrans {
        &self.faces[n - 1][i]
    }

    pub fn s(&self, n: usize, i: usize) -> &NatTrans {
        &self.degens[n][i]
    }

    pub fn source(&self) -> &NatTrans {
        self.d(1, 1)
    }

    pub fn target(&self) -> &NatTrans {
        self.d(1, 0)
    }

    /// Replaces one face map, keeping everything else.
    pub fn with_face(&self, n: usize, i: usize, d: NatTrans) -> Result<Self> {
        let mut faces = self.faces.clone();
        faces[n - 1][i] = d;
        Self::new(self.levels.clone(), faces, self.degens.clone())
    }

    /// The simplicial identities that fail, each named.
    pub fn identity_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let eq = |a: &NatTrans, b: &NatTrans| a == b;
        // d_i d_j = d_{j-1} d_i, i < j
        for n in 2..=3 {
            for j in 1..=n {
                for i in 0..j {
                    let l = self.d(n, j).then(self.d(n - 1, i)).expect("endpoints");
                    let r = self.d(n, i).then(self.d(n - 1, j - 1)).expect("endpoints");
                    if !eq(&l, &r) {
                        out.push(format!("d{i}d{j} = d{}d{i} on X{n}", j - 1));
                    }
                }
            }
        }
        // d_i s_j on Xn
        for n in 0..=2 {
            for j in 0..=n {
                for i in 0..=n + 1 {
                    let l = self.s(n, j).then(self.d(n + 1, i)).expect("endpoints");
                    let (r, name) = if i == j || i == j + 1 {
                        (Some(self.identity_on(n)), "id".to_string())
                    } else if i < j {
                        (
                            (n >= 1).then(|| self.d(n, i).then(self.s(n - 1, j - 1)).expect("endpoints")),
                            format!("s{}d{i}", j - 1),
                        )
                    } else {
                        (
                            (n >= 1).then(|| self.d(n, i - 1).then(self.s(n - 1, j)).expect("endpoints")),
                            format!("s{j}d{}", i - 1),
                        )
                    };
                    if let Some(r) = r {
                        if !eq(&l, &r) {
                            out.push(format!("d{i}s{j} = {name} on X{n}"));
                        }
                    }
                }
            }
        }
        // s_i s_j = s_{j+1} s_i, i ≤ j
        for n in 0..=1 {
            for j in 0..=n {
                for i in 0..=j {
                    let l = self.s(n, j).then(self.s(n + 1, i)).expect("endpoints");
                    let r = self.s(n, i).then(self.s(n + 1, j + 1)).expect("endpoints");
                    if !eq(&l, &r) {
                        out.push(format!("s{i}s{j} = s{}s{i} on X{n}", j + 1));
                    }
                }
            }
        }
        out
    }

    fn identity_on(&self, n: usize) -> NatTrans {
        NatTrans::identity(&self.levels[n])
    }

    /// Vertex `i` of an `n`-simplex: `d0^i ∘ d_{i+1} ∘ … ∘ d_n`.
    pub fn vertex(&self, n: usize, i: usize) -> NatTrans {
        let mut m = self.identity_on(n);
        for k in (i + 1..=n).rev() {
            m = m.then(self.d(k, k)).expect("endpoints");
        }
        for k in (1..=i).rev() {
            m = m.then(self.d(k, 0)).expect("endpoints");
        }
        m
    }

    /// Edge `i → i+1` of an `n`-simplex: `d0^i ∘ d_{i+2} ∘ … ∘ d_n`.
    pub fn edge(&self, n: usize, i: usize) -> NatTrans {
        let mut m = self.identity_on(n);
        for k in (i + 2..=n).rev() {
            m = m.then(self.d(k, k)).expect("endpoints");
        }
        for k in (2..=i + 1).rev() {
            m = m.then(self.d(k, 0)).expect("endpoints");
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finset::FinSet;

    #[test]
    fn constant_object_satisfies_the_identities() {
        let t = Topos::finset();
        let x = TruncatedSimplicialObject::constant(&t, &t.constant(&FinSet::range(2)));
        assert!(x.identity_violations().is_empty());
        assert_eq!(x.vertex(3, 2), t.identity(x.level(0)));
    }

    #[test]
    fn wrong_face_is_named() {
        let t = Topos::finset();
        let two = t.constant(&FinSet::range(2));
        let x = TruncatedSimplicialObject::constant(&t, &two);
        let swap = t
            .nat(&two, &two, vec![crate::finset::FinFunction::from_indices(FinSet::range(2), FinSet::range(2), vec![1, 0]).unwrap()])
            .unwrap();
        let y = x.with_face(2, 0, swap).unwrap();
        let v = y.identity_violations();
        assert!(v.iter().any(|s| s == "d0d1 = d0d0 on X2"), "{v:?}");
    }
}
