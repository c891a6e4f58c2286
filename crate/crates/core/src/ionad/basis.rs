use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::{FamilyMap, FinCategory, PointFamily, SetFunctor, Variance};

/// A functor `M : B → Set^X` on finite data.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BasisFunctor {
    shape: Arc<FinCategory>,
    points: usize,
    values: Vec<PointFamily>,
    actions: Vec<FamilyMap>,
}

impl BasisFunctor {
    pub fn new(
        shape: Arc<FinCategory>,
        points: usize,
        values: Vec<PointFamily>,
        actions: Vec<FamilyMap>,
    ) -> Result<Self> {
        if values.len() != shape.object_count() {
            return Err(Error::NotFunctorial(format!(
                "{} values for {} objects",
                values.len(),
                shape.object_count()
            )));
        }
        if actions.len() != shape.morphism_count() {
            return Err(Error::NotFunctorial(format!(
                "{} actions for {} morphisms",
                actions.len(),
                shape.morphism_count()
            )));
        }
        for v in &values {
            if v.points() != points {
                return Err(Error::PointMismatch {
                    expected: points,
                    found: v.points(),
                });
            }
        }
        for (g, act) in actions.iter().enumerate() {
            if act.src() != &values[shape.src(g)] || act.dst() != &values[shape.dst(g)] {
                return Err(Error::NotFunctorial(format!(
                    "action of morphism {g} has the wrong endpoints"
                )));
            }
        }
        for b in 0..shape.object_count() {
            if actions[shape.identity(b)] != FamilyMap::identity(&values[b]) {
                return Err(Error::NotFunctorial(format!(
                    "identity of object {b} acts nontrivially"
                )));
            }
        }
        for f in 0..shape.morphism_count() {
            for g in 0..shape.morphism_count() {
                let Some(gf) = shape.compose(g, f) else { continue };
                if actions[g].after(&actions[f])? != actions[gf] {
                    return Err(Error::NotFunctorial(format!(
                        "composite {g}∘{f} is not preserved"
                    )));
                }
            }
        }
        Ok(BasisFunctor {
            shape,
            points,
            values,
            actions,
        })
    }

    /// Assembles `M` from one covariant functor `M(−)(x)` per point.
    pub fn from_point_functors(
        shape: Arc<FinCategory>,
        functors: &[SetFunctor],
    ) -> Result<Self> {
        for f in functors {
            if f.shape() != &shape || f.variance() != Variance::Covariant {
                return Err(Error::ShapeMismatch(
                    "point functors must be covariant on the basis shape".into(),
                ));
            }
        }
        let points = functors.len();
        let values: Vec<PointFamily> = (0..shape.object_count())
            .map(|b| PointFamily::new(functors.iter().map(|f| f.values()[b]).collect()))
            .collect();
        let actions = (0..shape.morphism_count())
            .map(|g| {
                FamilyMap::new(
                    values[shape.src(g)].clone(),
                    values[shape.dst(g)].clone(),
                    functors.iter().map(|f| f.action(g).to_vec()).collect(),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(shape, points, values, actions)
    }

    /// One object, one point, terminal value.
    pub fn terminal() -> Self {
        let family = PointFamily::terminal(1);
        BasisFunctor {
            shape: Arc::new(FinCategory::terminal()),
            points: 1,
            actions: vec![FamilyMap::identity(&family)],
            values: vec![family],
        }
    }

    pub fn shape(&self) -> &Arc<FinCategory> {
        &self.shape
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn object_count(&self) -> usize {
        self.shape.object_count()
    }

    pub fn value(&self, b: usize) -> &PointFamily {
        &self.values[b]
    }

    pub fn values(&self) -> &[PointFamily] {
        &self.values
    }

    pub fn action(&self, g: usize) -> &FamilyMap {
        &self.actions[g]
    }

    /// `M(g)_x(s)`.
    pub fn act(&self, g: usize, x: usize, s: usize) -> usize {
        self.actions[g].apply(x, s)
    }

    /// The covariant functor `M(−)(x) : B → Set`.
    pub fn at_point(&self, x: usize) -> SetFunctor {
        SetFunctor::new(
            self.shape.clone(),
            Variance::Covariant,
            self.values.iter().map(|v| v.size(x)).collect(),
            self.actions.iter().map(|a| a.component(x).to_vec()).collect(),
        )
        .expect("a basis is functorial at every point")
    }

    /// Objects `(b, s)` of the category of elements at `x`, ordered by `b` then `s`.
    pub fn elements(&self, x: usize) -> Vec<(usize, usize)> {
        (0..self.object_count())
            .flat_map(|b| (0..self.values[b].size(x)).map(move |s| (b, s)))
            .collect()
    }

    /// Checks that every category of elements is cofiltered.
    pub fn flatness_check(&self) -> Result<(), FlatnessCounterexample> {
        for x in 0..self.points {
            if let Some(condition) = self.cofilteredness_at(x) {
                return Err(FlatnessCounterexample { point: x, condition });
            }
        }
        Ok(())
    }

    pub fn is_flat(&self) -> bool {
        self.flatness_check().is_ok()
    }

    fn cofilteredness_at(&self, x: usize) -> Option<FlatnessCondition> {
        let cat = &self.shape;
        let elements = self.elements(x);
        if elements.is_empty() {
            return Some(FlatnessCondition::Empty);
        }
        for (i, &p) in elements.iter().enumerate() {
            for &q in &elements[i + 1..] {
                let has_cone = elements.iter().any(|&(c, t)| {
                    let reaches = |(b, s): (usize, usize)| {
                        cat.hom(c, b).iter().any(|&u| self.act(u, x, t) == s)
                    };
                    reaches(p) && reaches(q)
                });
                if !has_cone {
                    return Some(FlatnessCondition::NoCommonSource { first: p, second: q });
                }
            }
        }
        for &(b, s) in &elements {
            for b2 in 0..cat.object_count() {
                let arrows: Vec<usize> = cat.hom(b, b2).to_vec();
                for (i, &g) in arrows.iter().enumerate() {
                    for &h in &arrows[i + 1..] {
                        if self.act(g, x, s) != self.act(h, x, s) {
                            continue;
                        }
                        let equalized = elements.iter().any(|&(c, t)| {
                            cat.hom(c, b).iter().any(|&k| {
                                self.act(k, x, t) == s && cat.comp(g, k) == cat.comp(h, k)
                            })
                        });
                        if !equalized {
                            return Some(FlatnessCondition::NoEqualizer {
                                element: (b, s),
                                first: g,
                                second: h,
                            });
                        }
                    }
                }
            }
        }
        None
    }
}

/// Which cofilteredness condition fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlatnessCondition {
    /// (i) the category of elements is empty.
    Empty,
    /// (ii) two elements `(b, s)` admit no common source.
    NoCommonSource {
        first: (usize, usize),
        second: (usize, usize),
    },
    /// (iii) a parallel pair out of `element` admits no equalizing morphism.
    NoEqualizer {
        element: (usize, usize),
        first: usize,
        second: usize,
    },
}

impl FlatnessCondition {
    /// The roman numeral of the failing condition.
    pub fn label(&self) -> &'static str {
        match self {
            FlatnessCondition::Empty => "(i)",
            FlatnessCondition::NoCommonSource { .. } => "(ii)",
            FlatnessCondition::NoEqualizer { .. } => "(iii)",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatnessCounterexample {
    pub point: usize,
    pub condition: FlatnessCondition,
}

impl fmt::Display for FlatnessCounterexample {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "at point {}, condition {}: ", self.point, self.condition.label())?;
        match &self.condition {
            FlatnessCondition::Empty => write!(out, "no elements"),
            FlatnessCondition::NoCommonSource { first, second } => write!(
                out,
                "elements ({}, {}) and ({}, {}) have no common source",
                first.0, first.1, second.0, second.1
            ),
            FlatnessCondition::NoEqualizer {
                element,
                first,
                second,
            } => write!(
                out,
                "morphisms {first} and {second} out of ({}, {}) have no equalizing morphism",
                element.0, element.1
            ),
        }
    }
}
