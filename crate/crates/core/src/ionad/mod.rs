//! Bases, interior comonads and their coalgebras.

mod basis;
mod coalgebra;
mod formal;
mod interior;
pub mod probe;
pub mod sample;
mod tensor;

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Budget, Error, Result};
use crate::fincat::PointFamily;

pub use basis::{BasisFunctor, FlatnessCondition, FlatnessCounterexample};
pub use coalgebra::{Coalgebra, CoalgebraViolation};
pub use formal::{formal_eq, Term};
pub use interior::{prequotient_size, InteriorValue, Witness};
pub use tensor::{hom_presheaf, tensor_presheaf, TensorValue};

/// A set of points with the interior comonad generated by a flat basis.
#[derive(Clone)]
pub struct Ionad {
    basis: Arc<BasisFunctor>,
    budget: Budget,
    cache: Arc<Mutex<HashMap<PointFamily, Arc<InteriorValue>>>>,
}

impl Ionad {
    /// Wraps a basis after checking that it is flat.
    pub fn new(basis: BasisFunctor) -> Result<Self> {
        basis.flatness_check().map_err(Error::NotFlat)?;
        Ok(Ionad {
            basis: Arc::new(basis),
            budget: Budget::default(),
            cache: Arc::default(),
        })
    }

    pub fn terminal() -> Self {
        Self::new(BasisFunctor::terminal()).expect("terminal basis is flat")
    }

    pub fn with_budget(mut self, budget: Budget) -> Self {
        self.budget = budget;
        self.cache = Arc::default();
        self
    }

    pub fn basis(&self) -> &BasisFunctor {
        &self.basis
    }

    pub fn points(&self) -> usize {
        self.basis.points()
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    /// `I A`, memoized per family.
    pub fn interior(&self, a: &PointFamily) -> Result<Arc<InteriorValue>> {
        if let Some(hit) = self.cache.lock().expect("cache lock").get(a) {
            return Ok(hit.clone());
        }
        let value = Arc::new(InteriorValue::compute(&self.basis, a, &self.budget)?);
        self.cache
            .lock()
            .expect("cache lock")
            .insert(a.clone(), value.clone());
        Ok(value)
    }

    /// Checks the three comonad identities at `A`, elementwise.
    pub fn check_comonad_laws(&self, a: &PointFamily) -> Result<Result<(), ComonadLawFailure>> {
        let m = self.basis();
        let ia = self.interior(a)?;
        let counit = ia.counit();
        for x in 0..self.points() {
            for (c, w) in ia.witnesses(x).iter().enumerate() {
                let psi = ia.transpose(w.object, w.map_index, m);
                // ε_{IA} ∘ Δ_A
                if psi[x][w.element] != c {
                    return Ok(Err(ComonadLawFailure::new(ComonadLaw::LeftCounit, x, c)));
                }
                // I(ε_A) ∘ Δ_A
                let lowered: Vec<Vec<usize>> = psi
                    .iter()
                    .enumerate()
                    .map(|(y, row)| row.iter().map(|&k| counit.apply(y, k)).collect())
                    .collect();
                if ia.class_of_map(x, w.object, &lowered, w.element) != c {
                    return Ok(Err(ComonadLawFailure::new(ComonadLaw::RightCounit, x, c)));
                }
                // Δ_{IA} ∘ Δ_A against I(Δ_A) ∘ Δ_A, compared as elements of I I (I A)
                let delta = Term::from_indices(w.object, &psi, w.element);
                let twice = delta.comultiply();
                let pushed = delta.push(&|y, t| match t {
                    Term::Atom(k) => {
                        let v = ia.witness(y, *k);
                        Term::from_indices(v.object, &ia.transpose(v.object, v.map_index, m), v.element)
                    }
                    Term::Class { .. } => unreachable!("atoms at the base level"),
                });
                if !formal_eq(m, x, &twice, &pushed) {
                    return Ok(Err(ComonadLawFailure::new(ComonadLaw::Coassociativity, x, c)));
                }
            }
        }
        Ok(Ok(()))
    }
}

impl PartialEq for Ionad {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis
    }
}

impl Eq for Ionad {}

impl fmt::Debug for Ionad {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        out.debug_struct("Ionad").field("basis", &self.basis).finish()
    }
}

/// `I A` for a basis that must be flat.
pub fn interior_apply(m: &BasisFunctor, a: &PointFamily) -> Result<InteriorValue> {
    m.flatness_check().map_err(Error::NotFlat)?;
    InteriorValue::compute(m, a, &Budget::default())
}

/// `I A` without the flatness guard, for probing non-flat bases.
pub fn interior_apply_unchecked(
    m: &BasisFunctor,
    a: &PointFamily,
    budget: &Budget,
) -> Result<InteriorValue> {
    InteriorValue::compute(m, a, budget)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComonadLaw {
    LeftCounit,
    RightCounit,
    Coassociativity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComonadLawFailure {
    pub law: ComonadLaw,
    pub point: usize,
    pub element: usize,
}

impl ComonadLawFailure {
    fn new(law: ComonadLaw, point: usize, element: usize) -> Self {
        ComonadLawFailure {
            law,
            point,
            element,
        }
    }
}

impl fmt::Display for ComonadLawFailure {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.law {
            ComonadLaw::LeftCounit => "ε_I ∘ Δ = id",
            ComonadLaw::RightCounit => "I(ε) ∘ Δ = id",
            ComonadLaw::Coassociativity => "coassociativity",
        };
        write!(out, "{name} fails at point {}, element {}", self.point, self.element)
    }
}
