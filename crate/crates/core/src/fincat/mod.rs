//! Finite categories, set-valued functors and the category `Set^X` of point families.

mod category;
pub mod catalog;
mod family;
mod functor;
mod setfunctor;
mod union_find;

pub use category::{ArrowCategory, FinCategory, LawViolation, Square};
pub use family::{
    finite_colimit, finite_limit, hom_family, set_colimit, set_limit, Cocone, Cone, DiagramEdge,
    FamilyDiagram, FamilyMap, FinSet, HomSpace, PointFamily,
};
pub use functor::{enumerate_functors, functor_category, FinFunctor, FunctorCategory};
pub use setfunctor::{
    enumerate_natural_transformations, enumerate_natural_transformations_within,
    enumerate_set_functors, functor_limit, NatTrans, SetFunctor, Variance,
};
pub use union_find::UnionFind;
