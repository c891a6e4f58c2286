//! Documents resolved against their label tables, and back.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use ionad::fincat::{FamilyMap, FinCategory, PointFamily, SetFunctor, Variance};
use ionad::ionad::{BasisFunctor, Ionad};
use ionad::space::{alexandroff, equivariant, equivariant_shape, sigma, FinTopSpace, GroupAction};
use ionad::Budget;

use crate::doc::{
    ActionBody, BasisBody, Body, CategoryBody, Composite, Document, FamilyBody, MapBody, Morphism,
    PresheafBody, SpaceBody,
};
use crate::error::{CliError, Result};

/// Labels of one namespace, mapped to dense indices.
#[derive(Debug, Clone)]
pub struct Labels {
    namespace: &'static str,
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Labels {
    pub fn new(namespace: &'static str, names: Vec<String>) -> Result<Self> {
        let mut index = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(CliError::Duplicate {
                    namespace,
                    label: name.clone(),
                });
            }
        }
        Ok(Labels {
            namespace,
            names,
            index,
        })
    }

    pub fn get(&self, label: &str) -> Result<usize> {
        self.index.get(label).copied().ok_or_else(|| CliError::Unresolved {
            namespace: self.namespace,
            label: label.to_string(),
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }
}

fn identity_label(object: &str) -> String {
    format!("id:{object}")
}

/// `{a,b}` for the subset of the labelled points given by `mask`.
pub fn subset_label(points: &[String], mask: u64) -> String {
    let inside: Vec<&str> = points
        .iter()
        .enumerate()
        .filter(|(i, _)| mask & (1 << i) != 0)
        .map(|(_, p)| p.as_str())
        .collect();
    format!("{{{}}}", inside.join(","))
}

#[derive(Debug, Clone)]
pub struct Category {
    pub cat: Arc<FinCategory>,
    pub objects: Vec<String>,
    pub morphisms: Vec<String>,
}

impl Category {
    /// Labels every identity `id:o` and every other morphism by `name`.
    pub fn labelled(cat: Arc<FinCategory>, objects: Vec<String>, name: impl Fn(usize) -> String) -> Self {
        let morphisms = (0..cat.morphism_count())
            .map(|g| {
                if cat.is_identity(g) {
                    identity_label(&objects[cat.src(g)])
                } else {
                    name(g)
                }
            })
            .collect();
        Category {
            cat,
            objects,
            morphisms,
        }
    }

    pub fn from_body(body: &CategoryBody) -> Result<Self> {
        let objects = Labels::new("object", body.objects.clone())?;
        let n = objects.len();
        let mut names: Vec<String> = body.objects.iter().map(|o| identity_label(o)).collect();
        let mut ends: Vec<(usize, usize)> = (0..n).map(|o| (o, o)).collect();
        for m in &body.morphisms {
            names.push(m.name.clone());
            ends.push((objects.get(&m.src)?, objects.get(&m.dst)?));
        }
        let morphisms = Labels::new("morphism", names.clone())?;
        let mut table = HashMap::new();
        for c in &body.compositions {
            let (f, g, r) = (morphisms.get(&c.first)?, morphisms.get(&c.then)?, morphisms.get(&c.result)?);
            if f < n || g < n {
                return Err(CliError::Invalid(format!(
                    "composite of `{}` then `{}` involves an identity; identities compose implicitly",
                    c.first, c.then
                )));
            }
            if ends[f].1 != ends[g].0 {
                return Err(CliError::Invalid(format!("`{}` then `{}` is not composable", c.first, c.then)));
            }
            if ends[r] != (ends[f].0, ends[g].1) {
                return Err(CliError::Invalid(format!(
                    "composite `{}` of `{}` then `{}` has the wrong endpoints",
                    c.result, c.first, c.then
                )));
            }
            if table.insert((g, f), r).is_some() {
                return Err(CliError::Duplicate {
                    namespace: "composition",
                    label: format!("{} then {}", c.first, c.then),
                });
            }
        }
        for f in n..ends.len() {
            for g in n..ends.len() {
                if ends[f].1 == ends[g].0 && !table.contains_key(&(g, f)) {
                    return Err(CliError::Invalid(format!(
                        "missing composite of `{}` then `{}`",
                        names[f], names[g]
                    )));
                }
            }
        }
        let cat = FinCategory::new(n, ends.clone(), (0..n).collect(), |g, f| {
            if ends[f].1 != ends[g].0 {
                None
            } else if f < n {
                Some(g)
            } else if g < n {
                Some(f)
            } else {
                table.get(&(g, f)).copied()
            }
        })?;
        Ok(Category {
            cat: Arc::new(cat),
            objects: body.objects.clone(),
            morphisms: names,
        })
    }

    pub fn to_body(&self) -> CategoryBody {
        let cat = &self.cat;
        let proper: Vec<usize> = (0..cat.morphism_count()).filter(|&g| !cat.is_identity(g)).collect();
        let morphisms = proper
            .iter()
            .map(|&g| Morphism {
                name: self.morphisms[g].clone(),
                src: self.objects[cat.src(g)].clone(),
                dst: self.objects[cat.dst(g)].clone(),
            })
            .collect();
        let mut compositions = Vec::new();
        for &f in &proper {
            for &g in &proper {
                if let Some(r) = cat.compose(g, f) {
                    compositions.push(Composite {
                        first: self.morphisms[f].clone(),
                        then: self.morphisms[g].clone(),
                        result: self.morphisms[r].clone(),
                    });
                }
            }
        }
        CategoryBody {
            objects: self.objects.clone(),
            morphisms,
            compositions,
        }
    }

    pub fn object_labels(&self) -> Result<Labels> {
        Labels::new("object", self.objects.clone())
    }

    pub fn morphism_labels(&self) -> Result<Labels> {
        Labels::new("morphism", self.morphisms.clone())
    }
}

#[derive(Debug, Clone)]
pub struct Space {
    pub space: FinTopSpace,
    pub points: Vec<String>,
}

impl Space {
    pub fn from_body(body: &SpaceBody) -> Result<Self> {
        let points = Labels::new("point", body.points.clone())?;
        let opens = body
            .opens
            .iter()
            .map(|open| open.iter().try_fold(0u64, |acc, p| Ok::<_, CliError>(acc | 1 << points.get(p)?)))
            .collect::<Result<Vec<u64>>>()?;
        Ok(Space {
            space: FinTopSpace::new(points.len(), opens)?,
            points: body.points.clone(),
        })
    }

    pub fn to_body(&self) -> SpaceBody {
        SpaceBody {
            points: self.points.clone(),
            opens: self
                .space
                .opens()
                .iter()
                .map(|&u| {
                    (0..self.points.len())
                        .filter(|&i| u & (1 << i) != 0)
                        .map(|i| self.points[i].clone())
                        .collect()
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Family {
    pub family: PointFamily,
    pub points: Vec<String>,
}

impl Family {
    pub fn from_body(body: &FamilyBody) -> Result<Self> {
        let points = Labels::new("point", body.points.clone())?;
        for key in body.fibers.keys() {
            points.get(key)?;
        }
        let fibers = body
            .points
            .iter()
            .map(|p| {
                body.fibers
                    .get(p)
                    .copied()
                    .ok_or_else(|| CliError::Invalid(format!("no fiber given for point `{p}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Family {
            family: PointFamily::new(fibers),
            points: body.points.clone(),
        })
    }

    /// The same family over the points of an ionad, matched by label.
    pub fn over(&self, points: &[String]) -> Result<PointFamily> {
        let mine = Labels::new("point", self.points.clone())?;
        if self.points.len() != points.len() {
            return Err(CliError::Invalid(format!(
                "family has {} points, the ionad has {}",
                self.points.len(),
                points.len()
            )));
        }
        let fibers = points
            .iter()
            .map(|p| mine.get(p).map(|i| self.family.size(i)))
            .collect::<Result<Vec<_>>>()?;
        Ok(PointFamily::new(fibers))
    }

    pub fn to_body(&self) -> FamilyBody {
        FamilyBody {
            points: self.points.clone(),
            fibers: self
                .points
                .iter()
                .enumerate()
                .map(|(i, p)| (p.clone(), self.family.size(i)))
                .collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Basis {
    pub basis: BasisFunctor,
    pub points: Vec<String>,
    pub shape: Category,
}

impl Basis {
    pub fn from_body(body: &BasisBody) -> Result<Self> {
        let points = Labels::new("point", body.points.clone())?;
        let shape = Category::from_body(&body.shape)?;
        let objects = shape.object_labels()?;
        let morphisms = shape.morphism_labels()?;
        let cat = shape.cat.clone();
        for key in body.values.keys() {
            objects.get(key)?;
        }
        let values = shape
            .objects
            .iter()
            .map(|o| {
                let row = body
                    .values
                    .get(o)
                    .ok_or_else(|| CliError::Invalid(format!("no value given for object `{o}`")))?;
                for key in row.keys() {
                    points.get(key)?;
                }
                let fibers = body
                    .points
                    .iter()
                    .map(|p| {
                        row.get(p)
                            .copied()
                            .ok_or_else(|| CliError::Invalid(format!("value of `{o}` has no fiber at point `{p}`")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(PointFamily::new(fibers))
            })
            .collect::<Result<Vec<_>>>()?;
        for key in body.actions.keys() {
            let g = morphisms.get(key)?;
            if cat.is_identity(g) {
                return Err(CliError::Invalid(format!("identity `{key}` acts implicitly")));
            }
        }
        let empty = BTreeMap::new();
        let actions = (0..cat.morphism_count())
            .map(|g| {
                let (src, dst) = (&values[cat.src(g)], &values[cat.dst(g)]);
                if cat.is_identity(g) {
                    return Ok(FamilyMap::identity(src));
                }
                let name = &shape.morphisms[g];
                let row = body.actions.get(name).unwrap_or(&empty);
                for key in row.keys() {
                    points.get(key)?;
                }
                let comps = body
                    .points
                    .iter()
                    .enumerate()
                    .map(|(x, p)| match row.get(p) {
                        Some(c) => Ok(c.clone()),
                        None if src.size(x) == 0 => Ok(Vec::new()),
                        None => Err(CliError::Invalid(format!("action of `{name}` missing at point `{p}`"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(FamilyMap::new(src.clone(), dst.clone(), comps)?)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Basis {
            basis: BasisFunctor::new(cat, points.len(), values, actions)?,
            points: body.points.clone(),
            shape,
        })
    }

    pub fn to_body(&self) -> BasisBody {
        let m = &self.basis;
        let cat = m.shape();
        let values = (0..m.object_count())
            .map(|b| {
                let row = self
                    .points
                    .iter()
                    .enumerate()
                    .map(|(x, p)| (p.clone(), m.value(b).size(x)))
                    .collect();
                (self.shape.objects[b].clone(), row)
            })
            .collect();
        let actions = (0..cat.morphism_count())
            .filter(|&g| !cat.is_identity(g))
            .map(|g| {
                let a = m.action(g);
                let row = self
                    .points
                    .iter()
                    .enumerate()
                    .filter(|&(x, _)| a.src().size(x) > 0)
                    .map(|(x, p)| (p.clone(), a.component(x).to_vec()))
                    .collect();
                (self.shape.morphisms[g].clone(), row)
            })
            .collect();
        BasisBody {
            points: self.points.clone(),
            shape: self.shape.to_body(),
            values,
            actions,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Presheaf {
    pub functor: SetFunctor,
    pub shape: Category,
}

impl Presheaf {
    pub fn from_body(body: &PresheafBody) -> Result<Self> {
        let shape = Category::from_body(&body.shape)?;
        let objects = shape.object_labels()?;
        let morphisms = shape.morphism_labels()?;
        let cat = shape.cat.clone();
        for key in body.values.keys() {
            objects.get(key)?;
        }
        let values = shape
            .objects
            .iter()
            .map(|o| {
                body.values
                    .get(o)
                    .copied()
                    .ok_or_else(|| CliError::Invalid(format!("no value given for object `{o}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        for key in body.actions.keys() {
            if cat.is_identity(morphisms.get(key)?) {
                return Err(CliError::Invalid(format!("identity `{key}` acts implicitly")));
            }
        }
        let actions = (0..cat.morphism_count())
            .map(|g| {
                // contravariant: g : a → b acts P(b) → P(a)
                let from = values[cat.dst(g)];
                if cat.is_identity(g) {
                    return Ok((0..from).collect());
                }
                let name = &shape.morphisms[g];
                match body.actions.get(name) {
                    Some(table) => Ok(table.clone()),
                    None if from == 0 => Ok(Vec::new()),
                    None => Err(CliError::Invalid(format!("no action given for `{name}`"))),
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Presheaf {
            functor: SetFunctor::new(cat, Variance::Contravariant, values, actions)?,
            shape,
        })
    }

    /// The presheaf moved onto `target`, matching objects and morphisms by label.
    pub fn onto(&self, target: &Category) -> Result<SetFunctor> {
        let mismatch = || CliError::Invalid("presheaf shape does not match the site".into());
        let objects = self.shape.object_labels()?;
        let morphisms = self.shape.morphism_labels()?;
        let (mine, theirs) = (&self.shape.cat, &target.cat);
        if mine.object_count() != theirs.object_count() || mine.morphism_count() != theirs.morphism_count() {
            return Err(mismatch());
        }
        let object_map = target
            .objects
            .iter()
            .map(|o| objects.get(o))
            .collect::<Result<Vec<_>>>()?;
        let morphism_map = target
            .morphisms
            .iter()
            .map(|g| morphisms.get(g))
            .collect::<Result<Vec<_>>>()?;
        for (g, &h) in morphism_map.iter().enumerate() {
            if (object_map[theirs.src(g)], object_map[theirs.dst(g)]) != (mine.src(h), mine.dst(h)) {
                return Err(mismatch());
            }
        }
        let values = object_map.iter().map(|&o| self.functor.values()[o]).collect();
        let actions = morphism_map.iter().map(|&h| self.functor.action(h).to_vec()).collect();
        Ok(SetFunctor::new(target.cat.clone(), Variance::Contravariant, values, actions)?)
    }

    pub fn to_body(&self) -> PresheafBody {
        let cat = &self.shape.cat;
        PresheafBody {
            shape: self.shape.to_body(),
            values: self
                .shape
                .objects
                .iter()
                .enumerate()
                .map(|(o, l)| (l.clone(), self.functor.values()[o]))
                .collect(),
            actions: (0..cat.morphism_count())
                .filter(|&g| !cat.is_identity(g))
                .map(|g| (self.shape.morphisms[g].clone(), self.functor.action(g).to_vec()))
                .collect(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Action {
    pub action: GroupAction,
    pub group: Category,
    pub space: Space,
}

impl Action {
    pub fn from_body(body: &ActionBody) -> Result<Self> {
        let group = Category::from_body(&body.group)?;
        if group.cat.object_count() != 1 {
            return Err(CliError::Invalid("a group must have exactly one object".into()));
        }
        let space = Space::from_body(&body.space)?;
        let points = Labels::new("point", space.points.clone())?;
        let elements = group.morphism_labels()?;
        for key in body.action.keys() {
            if group.cat.is_identity(elements.get(key)?) {
                return Err(CliError::Invalid(format!("identity `{key}` acts implicitly")));
            }
        }
        let table = (0..group.cat.morphism_count())
            .map(|g| {
                if group.cat.is_identity(g) {
                    return Ok((0..points.len()).collect());
                }
                let name = &group.morphisms[g];
                let row = body
                    .action
                    .get(name)
                    .ok_or_else(|| CliError::Invalid(format!("no action given for `{name}`")))?;
                for key in row.keys() {
                    points.get(key)?;
                }
                space
                    .points
                    .iter()
                    .map(|p| {
                        let image = row
                            .get(p)
                            .ok_or_else(|| CliError::Invalid(format!("action of `{name}` missing at point `{p}`")))?;
                        points.get(image)
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Action {
            action: GroupAction::new(group.cat.clone(), space.space.clone(), table)?,
            group,
            space,
        })
    }

    pub fn to_body(&self) -> ActionBody {
        let g = &self.group.cat;
        let points = &self.space.points;
        ActionBody {
            group: self.group.to_body(),
            space: self.space.to_body(),
            action: (0..g.morphism_count())
                .filter(|&e| !g.is_identity(e))
                .map(|e| {
                    let row = (0..points.len())
                        .map(|x| (points[x].clone(), points[self.action.act(e, x)].clone()))
                        .collect();
                    (self.group.morphisms[e].clone(), row)
                })
                .collect(),
        }
    }
}

/// An ionad together with the labels of its points and of its basis shape.
#[derive(Debug, Clone)]
pub struct Source {
    pub ionad: Ionad,
    pub points: Vec<String>,
    pub shape: Category,
}

impl Source {
    /// Reads an ionad from a space (Σ), a category (Alexandroff), a group
    /// action (equivariant) or a basis document.
    pub fn from_document(doc: &Document, budget: Budget) -> Result<Self> {
        let source = match &doc.body {
            Body::Space(body) => Self::of_space(&Space::from_body(body)?),
            Body::Category(body) => Self::of_category(&Category::from_body(body)?),
            Body::GroupAction(body) => Self::of_action(&Action::from_body(body)?),
            Body::Basis(body) => {
                let b = Basis::from_body(body)?;
                Source {
                    ionad: Ionad::new(b.basis)?,
                    points: b.points,
                    shape: b.shape,
                }
            }
            other => {
                return Err(CliError::Invalid(format!(
                    "a {} document does not describe an ionad",
                    other.kind()
                )))
            }
        };
        Ok(Source {
            ionad: source.ionad.with_budget(budget),
            ..source
        })
    }

    pub fn of_space(s: &Space) -> Self {
        let ionad = sigma(&s.space);
        let opens = s.space.opens();
        let objects: Vec<String> = opens.iter().map(|&u| subset_label(&s.points, u)).collect();
        let cat = ionad.basis().shape().clone();
        let shape = Category::labelled(cat.clone(), objects.clone(), |g| {
            format!("{}<{}", objects[cat.src(g)], objects[cat.dst(g)])
        });
        Source {
            ionad,
            points: s.points.clone(),
            shape,
        }
    }

    pub fn of_category(c: &Category) -> Self {
        let ionad = alexandroff(&c.cat);
        let shape = Category {
            cat: ionad.basis().shape().clone(),
            objects: c.objects.clone(),
            morphisms: c.morphisms.clone(),
        };
        Source {
            ionad,
            points: c.objects.clone(),
            shape,
        }
    }

    pub fn of_action(a: &Action) -> Self {
        let ionad = equivariant(&a.action);
        let (cat, translations) = equivariant_shape(&a.action);
        let opens = a.action.space().opens();
        let objects: Vec<String> = opens.iter().map(|&u| subset_label(&a.space.points, u)).collect();
        let shape = Category::labelled(Arc::new(cat), objects.clone(), |g| {
            let t = translations[g];
            format!("{}:{}>{}", a.group.morphisms[t.element], objects[t.src], objects[t.dst])
        });
        Source {
            ionad,
            points: a.space.points.clone(),
            shape,
        }
    }

    /// The generating basis, as a basis document body.
    pub fn basis_body(&self) -> BasisBody {
        Basis {
            basis: self.ionad.basis().clone(),
            points: self.points.clone(),
            shape: self.shape.clone(),
        }
        .to_body()
    }

    pub fn point_labels(&self) -> Result<Labels> {
        Labels::new("point", self.points.clone())
    }
}

#[derive(Debug, Clone)]
pub struct Map {
    pub src: Source,
    pub dst: Source,
    pub point_map: Vec<usize>,
}

impl Map {
    pub fn from_body(body: &MapBody, budget: Budget) -> Result<Self> {
        let src = Source::from_document(&body.src, budget)?;
        let dst = Source::from_document(&body.dst, budget)?;
        let (from, to) = (src.point_labels()?, dst.point_labels()?);
        for key in body.points.keys() {
            from.get(key)?;
        }
        let point_map = src
            .points
            .iter()
            .map(|p| {
                let image = body
                    .points
                    .get(p)
                    .ok_or_else(|| CliError::Invalid(format!("no image given for point `{p}`")))?;
                to.get(image)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Map { src, dst, point_map })
    }
}

/// Canonical form of a document: resolved, then written back.
pub fn canonicalize(doc: &Document) -> Result<Document> {
    let body = match &doc.body {
        Body::Category(b) => Body::Category(Category::from_body(b)?.to_body()),
        Body::Space(b) => Body::Space(Space::from_body(b)?.to_body()),
        Body::Family(b) => Body::Family(Family::from_body(b)?.to_body()),
        Body::Basis(b) => Body::Basis(Basis::from_body(b)?.to_body()),
        Body::Presheaf(b) => Body::Presheaf(Presheaf::from_body(b)?.to_body()),
        Body::GroupAction(b) => Body::GroupAction(Action::from_body(b)?.to_body()),
        Body::Map(b) => {
            let src = canonicalize(&b.src)?;
            let dst = canonicalize(&b.dst)?;
            let m = Map::from_body(b, Budget::default())?;
            Body::Map(MapBody {
                points: m
                    .src
                    .points
                    .iter()
                    .zip(&m.point_map)
                    .map(|(p, &y)| (p.clone(), m.dst.points[y].clone()))
                    .collect(),
                src: Box::new(src),
                dst: Box::new(dst),
            })
        }
    };
    Ok(Document::new(body))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ionad::fincat::catalog::enumerate_categories;

    fn names(cat: &FinCategory) -> Category {
        let objects = (0..cat.object_count()).map(|o| format!("o{o}")).collect();
        Category::labelled(Arc::new(cat.clone()), objects, |g| format!("m{g}"))
    }

    #[test]
    fn categories_round_trip_through_bodies() {
        for cat in enumerate_categories(2, 4) {
            let c = names(&cat);
            let back = Category::from_body(&c.to_body()).unwrap();
            assert_eq!(back.to_body(), c.to_body());
            assert_eq!(back.cat.object_count(), cat.object_count());
            assert_eq!(back.cat.morphism_count(), cat.morphism_count());
        }
    }

    #[test]
    fn alexandroff_bases_round_trip_through_bodies() {
        for cat in enumerate_categories(2, 3) {
            let body = Source::of_category(&names(&cat)).basis_body();
            let basis = Basis::from_body(&body).unwrap();
            assert_eq!(basis.to_body(), body);
            assert!(basis.basis.flatness_check().is_ok());
        }
    }

    #[test]
    fn missing_composites_are_rejected() {
        let body = CategoryBody {
            objects: vec!["x".into(), "y".into(), "z".into()],
            morphisms: vec![
                crate::doc::Morphism { name: "f".into(), src: "x".into(), dst: "y".into() },
                crate::doc::Morphism { name: "g".into(), src: "y".into(), dst: "z".into() },
            ],
            compositions: vec![],
        };
        assert!(matches!(Category::from_body(&body), Err(CliError::Invalid(_))));
    }

    #[test]
    fn labels_detect_duplicates_and_unknowns() {
        let err = Labels::new("point", vec!["a".into(), "a".into()]).unwrap_err();
        assert!(matches!(err, CliError::Duplicate { .. }));
        let l = Labels::new("point", vec!["a".into(), "b".into()]).unwrap();
        assert_eq!(l.get("b").unwrap(), 1);
        assert!(matches!(l.get("c"), Err(CliError::Unresolved { .. })));
    }

    #[test]
    fn subsets_are_labelled_in_point_order() {
        let pts = ["a".to_string(), "b".into(), "c".into()];
        assert_eq!(subset_label(&pts, 0b101), "{a,c}");
        assert_eq!(subset_label(&pts, 0), "{}");
    }

    #[test]
    fn families_are_matched_by_label() {
        let f = Family::from_body(&FamilyBody {
            points: vec!["a".into(), "b".into()],
            fibers: [("a".to_string(), 2), ("b".to_string(), 3)].into_iter().collect(),
        })
        .unwrap();
        let over = f.over(&["b".to_string(), "a".to_string()]).unwrap();
        assert_eq!((over.size(0), over.size(1)), (3, 2));
    }
}
