//! Unmaterialized elements of iterated interiors `I^n P`.
//!
//! An element of `I Q (x)` is a class of triples `(b, φ : M b → Q, s)`. For a
//! flat basis the coend is a filtered colimit over the category of elements,
//! so two triples agree iff they become equal after restricting along a
//! common source. That criterion is decidable by finite search and lets us
//! compare elements of `I I A` and `I I I A` without enumerating them.

use super::basis::BasisFunctor;
use super::interior::Witness;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    /// An element of the base family, by index.
    Atom(usize),
    /// The class of `(object, map, element)`; `map[y][t]` is the image of
    /// element `t` of `M(object)(y)`.
    Class {
        object: usize,
        map: Vec<Vec<Term>>,
        element: usize,
    },
}

impl Term {
    /// The triple of a witness, with atoms for the elements of `A`.
    pub fn from_witness(w: &Witness) -> Term {
        Term::Class {
            object: w.object,
            map: w
                .map
                .components()
                .iter()
                .map(|c| c.iter().map(|&e| Term::Atom(e)).collect())
                .collect(),
            element: w.element,
        }
    }

    /// The triple `(object, map, element)` over a family given by indices.
    pub fn from_indices(object: usize, map: &[Vec<usize>], element: usize) -> Term {
        Term::Class {
            object,
            map: map
                .iter()
                .map(|c| c.iter().map(|&e| Term::Atom(e)).collect())
                .collect(),
            element,
        }
    }

    /// `ε : I Q → Q` at point `x`.
    pub fn counit(&self, x: usize) -> Term {
        match self {
            Term::Atom(_) => panic!("counit of an atom"),
            Term::Class { map, element, .. } => map[x][*element].clone(),
        }
    }

    /// `Δ : I Q → I I Q`.
    pub fn comultiply(&self) -> Term {
        match self {
            Term::Atom(_) => panic!("comultiplication of an atom"),
            Term::Class {
                object,
                map,
                element,
            } => Term::Class {
                object: *object,
                map: map
                    .iter()
                    .map(|c| {
                        (0..c.len())
                            .map(|t| Term::Class {
                                object: *object,
                                map: map.clone(),
                                element: t,
                            })
                            .collect()
                    })
                    .collect(),
                element: *element,
            },
        }
    }

    /// `I f : I Q → I R` for `f` given pointwise on terms.
    pub fn push(&self, f: &dyn Fn(usize, &Term) -> Term) -> Term {
        match self {
            Term::Atom(_) => panic!("functorial action on an atom"),
            Term::Class {
                object,
                map,
                element,
            } => Term::Class {
                object: *object,
                map: map
                    .iter()
                    .enumerate()
                    .map(|(y, c)| c.iter().map(|t| f(y, t)).collect())
                    .collect(),
                element: *element,
            },
        }
    }
}

/// Equality of two terms at point `x`, valid when `m` is flat.
pub fn formal_eq(m: &BasisFunctor, x: usize, left: &Term, right: &Term) -> bool {
    match (left, right) {
        (Term::Atom(i), Term::Atom(j)) => i == j,
        (
            Term::Class {
                object: b1,
                map: f1,
                element: s1,
            },
            Term::Class {
                object: b2,
                map: f2,
                element: s2,
            },
        ) => {
            if left == right {
                return true;
            }
            let cat = m.shape();
            for (c, t) in m.elements(x) {
                for &u in cat.hom(c, *b1) {
                    if m.act(u, x, t) != *s1 {
                        continue;
                    }
                    for &v in cat.hom(c, *b2) {
                        if m.act(v, x, t) != *s2 {
                            continue;
                        }
                        let agree = (0..m.points()).all(|y| {
                            (0..m.value(c).size(y)).all(|w| {
                                formal_eq(m, y, &f1[y][m.act(u, y, w)], &f2[y][m.act(v, y, w)])
                            })
                        });
                        if agree {
                            return true;
                        }
                    }
                }
            }
            false
        }
        _ => false,
    }
}
