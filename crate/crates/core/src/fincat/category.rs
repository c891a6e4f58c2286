use std::fmt;

use crate::error::{Error, Result};

/// A finite category with dense identity and composition tables.
///
/// Objects are `0..object_count()`, morphisms are `0..morphism_count()`.
/// `compose(g, f)` is `g ∘ f` and is defined exactly when `dst(f) == src(g)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FinCategory {
    objects: usize,
    morphisms: Vec<(usize, usize)>,
    identity: Vec<usize>,
    compose: Vec<Option<usize>>,
    homs: Vec<Vec<usize>>,
}

/// A single failed category law, naming the offending morphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LawViolation {
    ObjectOutOfRange { morphism: usize },
    IdentityEndpoints { object: usize, morphism: usize },
    CompositionDomain { g: usize, f: usize },
    CompositionEndpoints { g: usize, f: usize, result: usize },
    LeftIdentity { f: usize },
    RightIdentity { f: usize },
    Associativity { h: usize, g: usize, f: usize },
}

impl fmt::Display for LawViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LawViolation::ObjectOutOfRange { morphism } => {
                write!(out, "morphism {morphism} has an endpoint out of range")
            }
            LawViolation::IdentityEndpoints { object, morphism } => write!(
                out,
                "identity {morphism} of object {object} is not an endomorphism of it"
            ),
            LawViolation::CompositionDomain { g, f } => {
                write!(out, "composite {g}∘{f} defined exactly when not composable fails")
            }
            LawViolation::CompositionEndpoints { g, f, result } => {
                write!(out, "composite {g}∘{f} = {result} has wrong endpoints")
            }
            LawViolation::LeftIdentity { f } => write!(out, "identity law at {f} (id∘f ≠ f)"),
            LawViolation::RightIdentity { f } => write!(out, "identity law at {f} (f∘id ≠ f)"),
            LawViolation::Associativity { h, g, f } => {
                write!(out, "associativity at ({h}, {g}, {f})")
            }
        }
    }
}

impl FinCategory {
    /// Builds a category from raw tables and validates every law.
    pub fn new(
        objects: usize,
        morphisms: Vec<(usize, usize)>,
        identity: Vec<usize>,
        compose: impl Fn(usize, usize) -> Option<usize>,
    ) -> Result<Self> {
        let cat = Self::new_unchecked(objects, morphisms, identity, compose);
        let report = cat.validate();
        if let Some(first) = report.first() {
            return Err(Error::InvalidCategory(first.to_string()));
        }
        Ok(cat)
    }

    /// Builds a category from raw tables without checking the laws.
    ///
    /// Use [`FinCategory::validate`] to inspect the result.
    pub fn new_unchecked(
        objects: usize,
        morphisms: Vec<(usize, usize)>,
        identity: Vec<usize>,
        compose: impl Fn(usize, usize) -> Option<usize>,
    ) -> Self {
        let n = morphisms.len();
        let mut table = vec![None; n * n];
        for g in 0..n {
            for f in 0..n {
                table[g * n + f] = compose(g, f);
            }
        }
        let mut homs = vec![Vec::new(); objects * objects];
        for (i, &(s, d)) in morphisms.iter().enumerate() {
            if s < objects && d < objects {
                homs[s * objects + d].push(i);
            }
        }
        FinCategory {
            objects,
            morphisms,
            identity,
            compose: table,
            homs,
        }
    }

    pub fn object_count(&self) -> usize {
        self.objects
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn src(&self, f: usize) -> usize {
        self.morphisms[f].0
    }

    pub fn dst(&self, f: usize) -> usize {
        self.morphisms[f].1
    }

    pub fn endpoints(&self) -> &[(usize, usize)] {
        &self.morphisms
    }

    pub fn identity(&self, object: usize) -> usize {
        self.identity[object]
    }

    pub fn is_identity(&self, f: usize) -> bool {
        let (s, d) = self.morphisms[f];
        s == d && self.identity[s] == f
    }

    /// `g ∘ f`, or `None` when the pair is not composable.
    pub fn compose(&self, g: usize, f: usize) -> Option<usize> {
        self.compose[g * self.morphisms.len() + f]
    }

    /// `g ∘ f` for a pair known to be composable.
    pub fn comp(&self, g: usize, f: usize) -> usize {
        self.compose(g, f)
            .unwrap_or_else(|| panic!("morphisms {g} and {f} are not composable"))
    }

    /// Morphisms `a → b` in increasing index order.
    pub fn hom(&self, a: usize, b: usize) -> &[usize] {
        &self.homs[a * self.objects + b]
    }

    /// Position of `f` inside `hom(src f, dst f)`.
    pub fn hom_position(&self, f: usize) -> usize {
        let (s, d) = self.morphisms[f];
        self.hom(s, d)
            .iter()
            .position(|&g| g == f)
            .expect("morphism belongs to its own hom-set")
    }

    /// Morphisms with target `object`, in increasing index order.
    pub fn incoming(&self, object: usize) -> Vec<usize> {
        (0..self.morphisms.len())
            .filter(|&f| self.morphisms[f].1 == object)
            .collect()
    }

    /// Checks every category law and lists each violation.
    pub fn validate(&self) -> Vec<LawViolation> {
        let mut report = Vec::new();
        let n = self.morphisms.len();
        for (f, &(s, d)) in self.morphisms.iter().enumerate() {
            if s >= self.objects || d >= self.objects {
                report.push(LawViolation::ObjectOutOfRange { morphism: f });
            }
        }
        if !report.is_empty() {
            return report;
        }
        if self.identity.len() != self.objects {
            report.push(LawViolation::IdentityEndpoints {
                object: self.identity.len().min(self.objects),
                morphism: usize::MAX,
            });
            return report;
        }
        for (o, &id) in self.identity.iter().enumerate() {
            if id >= n || self.morphisms[id] != (o, o) {
                report.push(LawViolation::IdentityEndpoints {
                    object: o,
                    morphism: id,
                });
            }
        }
        if !report.is_empty() {
            return report;
        }
        for g in 0..n {
            for f in 0..n {
                let composable = self.dst(f) == self.src(g);
                match self.compose(g, f) {
                    Some(r) if composable => {
                        if r >= n || self.morphisms[r] != (self.src(f), self.dst(g)) {
                            report.push(LawViolation::CompositionEndpoints { g, f, result: r });
                        }
                    }
                    None if !composable => {}
                    _ => report.push(LawViolation::CompositionDomain { g, f }),
                }
            }
        }
        if !report.is_empty() {
            return report;
        }
        for f in 0..n {
            if self.comp(self.identity[self.dst(f)], f) != f {
                report.push(LawViolation::LeftIdentity { f });
            }
            if self.comp(f, self.identity[self.src(f)]) != f {
                report.push(LawViolation::RightIdentity { f });
            }
        }
        for f in 0..n {
            for g in self.outgoing_iter(self.dst(f)) {
                let gf = self.comp(g, f);
                for h in self.outgoing_iter(self.dst(g)) {
                    if self.comp(self.comp(h, g), f) != self.comp(h, gf) {
                        report.push(LawViolation::Associativity { h, g, f });
                    }
                }
            }
        }
        report
    }

    fn outgoing_iter(&self, object: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.objects).flat_map(move |d| self.hom(object, d).iter().copied())
    }

    // ---- constructors ----

    /// One object, one morphism.
    pub fn terminal() -> Self {
        Self::discrete(1)
    }

    pub fn discrete(objects: usize) -> Self {
        Self::new_unchecked(
            objects,
            (0..objects).map(|o| (o, o)).collect(),
            (0..objects).collect(),
            |g, f| (g == f).then_some(g),
        )
    }

    /// The arrow category `0 → 1`: morphisms `id_0, id_1, a`.
    pub fn arrow() -> Self {
        Self::from_preorder(2, |a, b| a <= b)
    }

    /// The thin category of a preorder: one morphism `a → b` whenever `le(a, b)`,
    /// numbered in lexicographic order of `(a, b)`.
    ///
    /// `le` must be reflexive and transitive; the result is otherwise invalid.
    pub fn from_preorder(objects: usize, le: impl Fn(usize, usize) -> bool) -> Self {
        let mut morphisms = Vec::new();
        let mut index = vec![usize::MAX; objects * objects];
        for a in 0..objects {
            for b in 0..objects {
                if le(a, b) {
                    index[a * objects + b] = morphisms.len();
                    morphisms.push((a, b));
                }
            }
        }
        let identity = (0..objects).map(|o| index[o * objects + o]).collect();
        let ends = morphisms.clone();
        Self::new_unchecked(objects, morphisms, identity, |g, f| {
            let (a, b) = ends[f];
            let (c, d) = ends[g];
            (b == c).then(|| index[a * objects + d])
        })
    }

    /// A monoid viewed as a one-object category; element 0 must be the unit and
    /// `table[g][f]` is the product `g·f`.
    pub fn monoid(table: &[Vec<usize>]) -> Result<Self> {
        let n = table.len();
        Self::new(1, vec![(0, 0); n], vec![0], |g, f| Some(table[g][f]))
    }

    /// The cyclic group of the given order as a one-object category.
    pub fn cyclic_group(order: usize) -> Self {
        Self::new_unchecked(1, vec![(0, 0); order], vec![0], |g, f| {
            Some((g + f) % order)
        })
    }

    pub fn opposite(&self) -> Self {
        let n = self.morphisms.len();
        let mut compose = vec![None; n * n];
        for g in 0..n {
            for f in 0..n {
                compose[g * n + f] = self.compose(f, g);
            }
        }
        let morphisms: Vec<_> = self.morphisms.iter().map(|&(s, d)| (d, s)).collect();
        let mut homs = vec![Vec::new(); self.objects * self.objects];
        for (i, &(s, d)) in morphisms.iter().enumerate() {
            homs[s * self.objects + d].push(i);
        }
        FinCategory {
            objects: self.objects,
            morphisms,
            identity: self.identity.clone(),
            compose,
            homs,
        }
    }

    /// The product category; object `(a, b)` is `a * |ob right| + b` and morphism
    /// `(f, g)` is `f * |mor right| + g`.
    pub fn product(left: &Self, right: &Self) -> Self {
        let (ro, rm) = (right.objects, right.morphisms.len());
        let mut morphisms = Vec::with_capacity(left.morphisms.len() * rm);
        for &(s1, d1) in &left.morphisms {
            for &(s2, d2) in &right.morphisms {
                morphisms.push((s1 * ro + s2, d1 * ro + d2));
            }
        }
        let identity = (0..left.objects * ro)
            .map(|o| left.identity[o / ro] * rm + right.identity[o % ro])
            .collect();
        Self::new_unchecked(left.objects * ro, morphisms, identity, |g, f| {
            let l = left.compose(g / rm, f / rm)?;
            let r = right.compose(g % rm, f % rm)?;
            Some(l * rm + r)
        })
    }

    /// The arrow category `B^2`: objects are the morphisms of `self`; a morphism
    /// `k → k'` is a commuting square `(p, q)` with `q ∘ k = k' ∘ p`.
    ///
    /// Squares are listed in lexicographic order of `(k, k', p, q)`.
    pub fn arrow_category(&self) -> ArrowCategory {
        let n = self.morphisms.len();
        let mut squares = Vec::new();
        for k in 0..n {
            for k2 in 0..n {
                for &p in self.hom(self.src(k), self.src(k2)) {
                    for &q in self.hom(self.dst(k), self.dst(k2)) {
                        if self.comp(q, k) == self.comp(k2, p) {
                            squares.push(Square {
                                source: k,
                                target: k2,
                                top: p,
                                bottom: q,
                            });
                        }
                    }
                }
            }
        }
        let lookup: std::collections::HashMap<Square, usize> =
            squares.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let identity = (0..n)
            .map(|k| {
                lookup[&Square {
                    source: k,
                    target: k,
                    top: self.identity[self.src(k)],
                    bottom: self.identity[self.dst(k)],
                }]
            })
            .collect();
        let category = Self::new_unchecked(
            n,
            squares.iter().map(|s| (s.source, s.target)).collect(),
            identity,
            |g, f| {
                let (sg, sf) = (squares[g], squares[f]);
                (sf.target == sg.source).then(|| {
                    lookup[&Square {
                        source: sf.source,
                        target: sg.target,
                        top: self.comp(sg.top, sf.top),
                        bottom: self.comp(sg.bottom, sf.bottom),
                    }]
                })
            },
        );
        ArrowCategory { category, squares }
    }

    /// The preorder reflection: `a ≤ b` iff some morphism `a → b` exists.
    pub fn reachable(&self, a: usize, b: usize) -> bool {
        !self.hom(a, b).is_empty()
    }
}

impl fmt::Debug for FinCategory {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        out.debug_struct("FinCategory")
            .field("objects", &self.objects)
            .field("morphisms", &self.morphisms)
            .field("identity", &self.identity)
            .finish()
    }
}

/// A commuting square `q ∘ source = target ∘ p`, i.e. a morphism of `B^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Square {
    pub source: usize,
    pub target: usize,
    pub top: usize,
    pub bottom: usize,
}

#[derive(Debug, Clone)]
pub struct ArrowCategory {
    pub category: FinCategory,
    pub squares: Vec<Square>,
}
