use std::sync::Arc;

use crate::error::{Error, Result};

use super::category::FinCategory;

/// A functor between finite categories.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinFunctor {
    pub source: Arc<FinCategory>,
    pub target: Arc<FinCategory>,
    pub object_map: Vec<usize>,
    pub morphism_map: Vec<usize>,
}

impl FinFunctor {
    pub fn new(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        object_map: Vec<usize>,
        morphism_map: Vec<usize>,
    ) -> Result<Self> {
        let functor = FinFunctor {
            source,
            target,
            object_map,
            morphism_map,
        };
        functor.check()?;
        Ok(functor)
    }

    fn check(&self) -> Result<()> {
        let (c, d) = (&self.source, &self.target);
        if self.object_map.len() != c.object_count() || self.morphism_map.len() != c.morphism_count() {
            return Err(Error::NotFunctorial("map tables have the wrong length".into()));
        }
        if self.object_map.iter().any(|&o| o >= d.object_count())
            || self.morphism_map.iter().any(|&m| m >= d.morphism_count())
        {
            return Err(Error::NotFunctorial("image out of range".into()));
        }
        for f in 0..c.morphism_count() {
            let image = self.morphism_map[f];
            if d.src(image) != self.object_map[c.src(f)] || d.dst(image) != self.object_map[c.dst(f)] {
                return Err(Error::NotFunctorial(format!("morphism {f} lands in the wrong hom-set")));
            }
        }
        for o in 0..c.object_count() {
            if self.morphism_map[c.identity(o)] != d.identity(self.object_map[o]) {
                return Err(Error::NotFunctorial(format!("identity of object {o} not preserved")));
            }
        }
        for f in 0..c.morphism_count() {
            for g in 0..c.morphism_count() {
                if let Some(gf) = c.compose(g, f) {
                    if d.compose(self.morphism_map[g], self.morphism_map[f]) != Some(self.morphism_map[gf]) {
                        return Err(Error::NotFunctorial(format!("composite {g}∘{f} not preserved")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn identity(category: Arc<FinCategory>) -> Self {
        FinFunctor {
            object_map: (0..category.object_count()).collect(),
            morphism_map: (0..category.morphism_count()).collect(),
            source: category.clone(),
            target: category,
        }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &FinFunctor) -> Result<FinFunctor> {
        if first.target != self.source {
            return Err(Error::ShapeMismatch("functors are not composable".into()));
        }
        Ok(FinFunctor {
            source: first.source.clone(),
            target: self.target.clone(),
            object_map: first.object_map.iter().map(|&o| self.object_map[o]).collect(),
            morphism_map: first.morphism_map.iter().map(|&m| self.morphism_map[m]).collect(),
        })
    }
}

/// All functors `C → D`, ordered by object map and then morphism map.
pub fn enumerate_functors(c: &Arc<FinCategory>, d: &Arc<FinCategory>) -> Vec<FinFunctor> {
    let mut out = Vec::new();
    let n = c.object_count();
    let mut objects = vec![0usize; n];
    enumerate_object_maps(c, d, 0, &mut objects, &mut out);
    out
}

fn enumerate_object_maps(
    c: &Arc<FinCategory>,
    d: &Arc<FinCategory>,
    depth: usize,
    objects: &mut Vec<usize>,
    out: &mut Vec<FinFunctor>,
) {
    if depth == objects.len() {
        let mut morphisms = vec![usize::MAX; c.morphism_count()];
        extend_morphism_map(c, d, objects, 0, &mut morphisms, out);
        return;
    }
    for o in 0..d.object_count() {
        objects[depth] = o;
        enumerate_object_maps(c, d, depth + 1, objects, out);
    }
}

fn extend_morphism_map(
    c: &Arc<FinCategory>,
    d: &Arc<FinCategory>,
    objects: &[usize],
    f: usize,
    morphisms: &mut Vec<usize>,
    out: &mut Vec<FinFunctor>,
) {
    if f == c.morphism_count() {
        out.push(FinFunctor {
            source: c.clone(),
            target: d.clone(),
            object_map: objects.to_vec(),
            morphism_map: morphisms.clone(),
        });
        return;
    }
    let candidates: Vec<usize> = if c.is_identity(f) {
        vec![d.identity(objects[c.src(f)])]
    } else {
        d.hom(objects[c.src(f)], objects[c.dst(f)]).to_vec()
    };
    for image in candidates {
        morphisms[f] = image;
        if composition_ok(c, d, f, morphisms) {
            extend_morphism_map(c, d, objects, f + 1, morphisms, out);
        }
    }
    morphisms[f] = usize::MAX;
}

/// Checks every composite whose three morphisms have been assigned, where the
/// newest assignment is `latest`.
fn composition_ok(c: &FinCategory, d: &FinCategory, latest: usize, morphisms: &[usize]) -> bool {
    for g in 0..=latest {
        for f in 0..=latest {
            let Some(gf) = c.compose(g, f) else { continue };
            if gf > latest || (g != latest && f != latest && gf != latest) {
                continue;
            }
            if d.compose(morphisms[g], morphisms[f]) != Some(morphisms[gf]) {
                return false;
            }
        }
    }
    true
}

/// The functor category `[C, D]` with objects listed as in [`enumerate_functors`]
/// and morphisms (natural transformations) grouped by source then target functor,
/// components in lexicographic order.
#[derive(Debug, Clone)]
pub struct FunctorCategory {
    pub category: FinCategory,
    pub functors: Vec<FinFunctor>,
    /// `components[m][c]` is the component at object `c` of transformation `m`.
    pub components: Vec<Vec<usize>>,
}

pub fn functor_category(c: &Arc<FinCategory>, d: &Arc<FinCategory>) -> Result<FunctorCategory> {
    let functors = enumerate_functors(c, d);
    let mut morphisms = Vec::new();
    let mut components = Vec::new();
    let mut identity = vec![usize::MAX; functors.len()];
    for (i, f) in functors.iter().enumerate() {
        for (j, g) in functors.iter().enumerate() {
            let mut current = vec![0usize; c.object_count()];
            let mut found = Vec::new();
            transformations(c, d, f, g, 0, &mut current, &mut found);
            for comps in found {
                if i == j && comps.iter().enumerate().all(|(o, &m)| m == d.identity(f.object_map[o])) {
                    identity[i] = morphisms.len();
                }
                morphisms.push((i, j));
                components.push(comps);
            }
        }
    }
    let lookup: std::collections::HashMap<(usize, usize, Vec<usize>), usize> = morphisms
        .iter()
        .zip(&components)
        .enumerate()
        .map(|(m, (&(i, j), comps))| ((i, j, comps.clone()), m))
        .collect();
    let category = FinCategory::new(functors.len(), morphisms.clone(), identity, |b, a| {
        let (i, j) = morphisms[a];
        let (j2, k) = morphisms[b];
        if j != j2 {
            return None;
        }
        let comps: Vec<usize> = components[a]
            .iter()
            .zip(&components[b])
            .map(|(&x, &y)| d.comp(y, x))
            .collect();
        lookup.get(&(i, k, comps)).copied()
    })?;
    Ok(FunctorCategory {
        category,
        functors,
        components,
    })
}

fn transformations(
    c: &FinCategory,
    d: &FinCategory,
    f: &FinFunctor,
    g: &FinFunctor,
    object: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if object == c.object_count() {
        out.push(current.clone());
        return;
    }
    for &alpha in d.hom(f.object_map[object], g.object_map[object]) {
        current[object] = alpha;
        let natural = (0..c.morphism_count()).all(|m| {
            let (s, t) = (c.src(m), c.dst(m));
            if s > object || t > object {
                return true;
            }
            d.comp(g.morphism_map[m], current[s]) == d.comp(current[t], f.morphism_map[m])
        });
        if natural {
            transformations(c, d, f, g, object + 1, current, out);
        }
    }
}
