use std::sync::Arc;

use crate::error::{Budget, Error, Result};

use super::category::FinCategory;
use super::family::{set_limit, FinSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variance {
    Covariant,
    Contravariant,
}

/// A functor from a finite category (or its opposite) into finite sets.
///
/// For a contravariant functor the action of `g : a → b` is a function
/// `value(b) → value(a)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SetFunctor {
    shape: Arc<FinCategory>,
    variance: Variance,
    values: Vec<usize>,
    actions: Vec<Vec<usize>>,
}

impl SetFunctor {
    pub fn new(
        shape: Arc<FinCategory>,
        variance: Variance,
        values: Vec<usize>,
        actions: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let functor = SetFunctor {
            shape,
            variance,
            values,
            actions,
        };
        functor.check()?;
        Ok(functor)
    }

    pub(crate) fn new_unchecked(
        shape: Arc<FinCategory>,
        variance: Variance,
        values: Vec<usize>,
        actions: Vec<Vec<usize>>,
    ) -> Self {
        SetFunctor {
            shape,
            variance,
            values,
            actions,
        }
    }

    fn check(&self) -> Result<()> {
        let cat = &self.shape;
        if self.values.len() != cat.object_count() || self.actions.len() != cat.morphism_count() {
            return Err(Error::NotFunctorial(
                "value or action table has the wrong length".into(),
            ));
        }
        for g in 0..cat.morphism_count() {
            let (from, to) = self.direction(g);
            let act = &self.actions[g];
            if act.len() != self.values[from] || act.iter().any(|&v| v >= self.values[to]) {
                return Err(Error::NotFunctorial(format!(
                    "action of morphism {g} is not a function between the right values"
                )));
            }
        }
        for o in 0..cat.object_count() {
            let id = cat.identity(o);
            if self.actions[id].iter().enumerate().any(|(i, &v)| i != v) {
                return Err(Error::NotFunctorial(format!(
                    "identity of object {o} acts nontrivially"
                )));
            }
        }
        for f in 0..cat.morphism_count() {
            for g in 0..cat.morphism_count() {
                let Some(gf) = cat.compose(g, f) else { continue };
                let ok = (0..self.values[self.direction(gf).0]).all(|e| {
                    let stepwise = match self.variance {
                        Variance::Covariant => self.actions[g][self.actions[f][e]],
                        Variance::Contravariant => self.actions[f][self.actions[g][e]],
                    };
                    stepwise == self.actions[gf][e]
                });
                if !ok {
                    return Err(Error::NotFunctorial(format!(
                        "composite {g}∘{f} is not preserved"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The constant functor at a set of the given size.
    pub fn constant(shape: Arc<FinCategory>, variance: Variance, size: usize) -> Self {
        let values = vec![size; shape.object_count()];
        let actions = vec![(0..size).collect(); shape.morphism_count()];
        Self::new_unchecked(shape, variance, values, actions)
    }

    /// `Hom(object, −)`; elements of `value(c)` are positions in `hom(object, c)`.
    pub fn covariant_representable(shape: Arc<FinCategory>, object: usize) -> Self {
        let cat = shape.clone();
        let values = (0..cat.object_count())
            .map(|c| cat.hom(object, c).len())
            .collect();
        let actions = (0..cat.morphism_count())
            .map(|g| {
                cat.hom(object, cat.src(g))
                    .iter()
                    .map(|&f| cat.hom_position(cat.comp(g, f)))
                    .collect()
            })
            .collect();
        Self::new_unchecked(shape, Variance::Covariant, values, actions)
    }

    /// `Hom(−, object)`; elements of `value(c)` are positions in `hom(c, object)`.
    pub fn contravariant_representable(shape: Arc<FinCategory>, object: usize) -> Self {
        let cat = shape.clone();
        let values = (0..cat.object_count())
            .map(|c| cat.hom(c, object).len())
            .collect();
        let actions = (0..cat.morphism_count())
            .map(|g| {
                cat.hom(cat.dst(g), object)
                    .iter()
                    .map(|&f| cat.hom_position(cat.comp(f, g)))
                    .collect()
            })
            .collect();
        Self::new_unchecked(shape, Variance::Contravariant, values, actions)
    }

    pub fn shape(&self) -> &Arc<FinCategory> {
        &self.shape
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn value(&self, object: usize) -> FinSet {
        FinSet(self.values[object])
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn action(&self, g: usize) -> &[usize] {
        &self.actions[g]
    }

    /// `(from, to)`: the objects whose values the action of `g` maps between.
    pub fn direction(&self, g: usize) -> (usize, usize) {
        let (s, d) = (self.shape.src(g), self.shape.dst(g));
        match self.variance {
            Variance::Covariant => (s, d),
            Variance::Contravariant => (d, s),
        }
    }

    fn compatible(&self, other: &SetFunctor) -> Result<()> {
        if self.shape != other.shape || self.variance != other.variance {
            return Err(Error::ShapeMismatch(
                "functors have different shapes or variances".into(),
            ));
        }
        Ok(())
    }
}

/// A natural transformation, given by one component function per object.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NatTrans {
    pub components: Vec<Vec<usize>>,
}

impl NatTrans {
    pub fn identity(functor: &SetFunctor) -> Self {
        NatTrans {
            components: functor.values().iter().map(|&n| (0..n).collect()).collect(),
        }
    }

    /// `self ∘ first` (vertical composition).
    pub fn after(&self, first: &NatTrans) -> NatTrans {
        NatTrans {
            components: first
                .components
                .iter()
                .zip(&self.components)
                .map(|(f, g)| f.iter().map(|&e| g[e]).collect())
                .collect(),
        }
    }

    pub fn is_natural(&self, src: &SetFunctor, dst: &SetFunctor) -> bool {
        (0..src.shape().morphism_count()).all(|g| {
            let (from, to) = src.direction(g);
            (0..src.values()[from]).all(|e| {
                self.components[to][src.action(g)[e]] == dst.action(g)[self.components[from][e]]
            })
        })
    }
}

/// All natural transformations `F ⇒ G`, in lexicographic order of component tables.
pub fn enumerate_natural_transformations(f: &SetFunctor, g: &SetFunctor) -> Result<Vec<NatTrans>> {
    enumerate_natural_transformations_within(f, g, &Budget::default())
}

pub fn enumerate_natural_transformations_within(
    f: &SetFunctor,
    g: &SetFunctor,
    budget: &Budget,
) -> Result<Vec<NatTrans>> {
    f.compatible(g)?;
    let cat = f.shape().clone();
    // Slots (object, element) in lexicographic order.
    let mut slots = Vec::new();
    let mut slot_index = Vec::new();
    for o in 0..cat.object_count() {
        slot_index.push(slots.len());
        for e in 0..f.values()[o] {
            slots.push((o, e));
        }
    }
    // For each slot, the naturality constraints it participates in: for every
    // morphism with action from → to, slot (from, e) relates to slot (to, F(g)(e)).
    let mut constraints: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); slots.len()];
    for m in 0..cat.morphism_count() {
        let (from, to) = f.direction(m);
        for e in 0..f.values()[from] {
            let a = slot_index[from] + e;
            let b = slot_index[to] + f.action(m)[e];
            constraints[a.max(b)].push((m, a, b));
        }
    }
    let mut assignment = vec![0usize; slots.len()];
    let mut out = Vec::new();
    let mut visited = 0u64;
    let mut stack_depth = 0usize;
    // iterative backtracking over slot values
    let mut next_value = vec![0usize; slots.len() + 1];
    loop {
        if stack_depth == slots.len() {
            let mut components: Vec<Vec<usize>> = Vec::with_capacity(cat.object_count());
            for o in 0..cat.object_count() {
                let start = slot_index[o];
                components.push(assignment[start..start + f.values()[o]].to_vec());
            }
            out.push(NatTrans { components });
            if stack_depth == 0 {
                break;
            }
            stack_depth -= 1;
            continue;
        }
        let (o, _) = slots[stack_depth];
        let candidate = next_value[stack_depth];
        if candidate >= g.values()[o] {
            next_value[stack_depth] = 0;
            if stack_depth == 0 {
                break;
            }
            stack_depth -= 1;
            continue;
        }
        next_value[stack_depth] = candidate + 1;
        visited += 1;
        if visited > budget.enumeration {
            return Err(Error::budget(
                "natural transformations",
                budget.enumeration,
                visited,
            ));
        }
        assignment[stack_depth] = candidate;
        let ok = constraints[stack_depth].iter().all(|&(m, a, b)| {
            assignment[b] == g.action(m)[assignment[a]]
        });
        if ok {
            stack_depth += 1;
        }
    }
    Ok(out)
}

/// All functors of the given variance on `shape` with the prescribed value
/// sizes. Action tables of non-identity morphisms are chosen in index order by
/// backtracking; each composition law is checked as soon as its three
/// morphisms have tables. Order: lexicographic in those action tables.
pub fn enumerate_set_functors(
    shape: &Arc<FinCategory>,
    variance: Variance,
    values: &[usize],
    budget: &Budget,
) -> Result<Vec<SetFunctor>> {
    let cat = shape.clone();
    if values.len() != cat.object_count() {
        return Err(Error::NotFunctorial("one value per object expected".into()));
    }
    let ends = |g: usize| match variance {
        Variance::Covariant => (cat.src(g), cat.dst(g)),
        Variance::Contravariant => (cat.dst(g), cat.src(g)),
    };
    let free: Vec<usize> = (0..cat.morphism_count())
        .filter(|&g| !cat.is_identity(g))
        .collect();
    if free.iter().any(|&g| {
        let (from, to) = ends(g);
        values[from] > 0 && values[to] == 0
    }) {
        return Ok(Vec::new());
    }
    let mut position = vec![None; cat.morphism_count()];
    for (i, &g) in free.iter().enumerate() {
        position[g] = Some(i);
    }
    let mut due: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); free.len()];
    for f in 0..cat.morphism_count() {
        for g in 0..cat.morphism_count() {
            let Some(gf) = cat.compose(g, f) else { continue };
            if let Some(last) = [g, f, gf].iter().filter_map(|&h| position[h]).max() {
                due[last].push((g, f, gf));
            }
        }
    }
    let mut actions: Vec<Vec<usize>> = vec![Vec::new(); cat.morphism_count()];
    for o in 0..cat.object_count() {
        actions[cat.identity(o)] = (0..values[o]).collect();
    }
    let mut search = FunctorSearch {
        shape,
        variance,
        values,
        free: &free,
        due: &due,
        actions,
        out: Vec::new(),
        visited: 0,
        budget,
    };
    search.extend(0)?;
    Ok(search.out)
}

struct FunctorSearch<'a> {
    shape: &'a Arc<FinCategory>,
    variance: Variance,
    values: &'a [usize],
    free: &'a [usize],
    due: &'a [Vec<(usize, usize, usize)>],
    actions: Vec<Vec<usize>>,
    out: Vec<SetFunctor>,
    visited: u64,
    budget: &'a Budget,
}

impl FunctorSearch<'_> {
    fn from_to(&self, g: usize) -> (usize, usize) {
        let (s, d) = (self.shape.src(g), self.shape.dst(g));
        match self.variance {
            Variance::Covariant => (s, d),
            Variance::Contravariant => (d, s),
        }
    }

    fn law_holds(&self, (g, f, gf): (usize, usize, usize)) -> bool {
        let a = &self.actions;
        (0..self.values[self.from_to(gf).0]).all(|e| {
            let stepwise = match self.variance {
                Variance::Covariant => a[g][a[f][e]],
                Variance::Contravariant => a[f][a[g][e]],
            };
            stepwise == a[gf][e]
        })
    }

    fn extend(&mut self, depth: usize) -> Result<()> {
        if depth == self.free.len() {
            self.out.push(SetFunctor::new_unchecked(
                self.shape.clone(),
                self.variance,
                self.values.to_vec(),
                self.actions.clone(),
            ));
            return Ok(());
        }
        let g = self.free[depth];
        let (from, to) = self.from_to(g);
        let (len, radix) = (self.values[from], self.values[to]);
        let mut table = vec![0usize; len];
        loop {
            self.visited += 1;
            if self.visited > self.budget.enumeration {
                return Err(Error::budget(
                    "set-valued functors",
                    self.budget.enumeration,
                    self.visited,
                ));
            }
            self.actions[g] = table.clone();
            if self.due[depth].iter().all(|&t| self.law_holds(t)) {
                self.extend(depth + 1)?;
            }
            let mut i = len;
            loop {
                if i == 0 {
                    return Ok(());
                }
                i -= 1;
                table[i] += 1;
                if table[i] < radix {
                    break;
                }
                table[i] = 0;
            }
        }
    }
}

/// The limit of a finite diagram of set-valued functors, computed objectwise.
///
/// `edges` are `(from, to, transformation)`. Returns the limit functor and its
/// projections.
pub fn functor_limit(
    shape: &Arc<FinCategory>,
    variance: Variance,
    nodes: &[SetFunctor],
    edges: &[(usize, usize, NatTrans)],
) -> Result<(SetFunctor, Vec<NatTrans>)> {
    for node in nodes {
        if node.shape() != shape || node.variance() != variance {
            return Err(Error::ShapeMismatch("diagram node on another shape".into()));
        }
    }
    let cat = shape.clone();
    let mut tuples = Vec::with_capacity(cat.object_count());
    for o in 0..cat.object_count() {
        let sizes: Vec<usize> = nodes.iter().map(|n| n.values()[o]).collect();
        let es: Vec<(usize, usize, &[usize])> = edges
            .iter()
            .map(|(a, b, t)| (*a, *b, t.components[o].as_slice()))
            .collect();
        tuples.push(set_limit(&sizes, &es));
    }
    let values: Vec<usize> = tuples.iter().map(Vec::len).collect();
    let actions = (0..cat.morphism_count())
        .map(|g| {
            let (from, to) = match variance {
                Variance::Covariant => (cat.src(g), cat.dst(g)),
                Variance::Contravariant => (cat.dst(g), cat.src(g)),
            };
            tuples[from]
                .iter()
                .map(|t| {
                    let image: Vec<usize> = nodes
                        .iter()
                        .enumerate()
                        .map(|(i, n)| n.action(g)[t[i]])
                        .collect();
                    tuples[to]
                        .binary_search(&image)
                        .expect("limit is closed under the action")
                })
                .collect()
        })
        .collect();
    let limit = SetFunctor::new_unchecked(shape.clone(), variance, values, actions);
    let projections = (0..nodes.len())
        .map(|i| NatTrans {
            components: tuples
                .iter()
                .map(|ts| ts.iter().map(|t| t[i]).collect())
                .collect(),
        })
        .collect();
    Ok((limit, projections))
}
