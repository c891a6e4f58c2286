//! Finite-limit preservation probes.
//!
//! Two levels are available. [`cartesianness_probe`] checks the interior
//! comonad `I` on sampled diagrams in `Set^X`. [`tensor_probe`] checks the
//! left Kan extension `M ⊗ (−)` on the terminal presheaf and on binary
//! products, equalizers and pullbacks of representables, which together
//! detect every failure of cofilteredness.

use std::fmt;
use std::sync::Arc;

use crate::error::{Budget, Result};
use crate::fincat::{
    finite_limit, functor_limit, set_limit, DiagramEdge, FamilyDiagram, FamilyMap, NatTrans,
    SetFunctor, Variance,
};

use super::basis::BasisFunctor;
use super::interior::InteriorValue;
use super::tensor::{tensor_presheaf, TensorValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComparisonDefect {
    NotInjective,
    NotSurjective,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeFailure {
    pub probe: String,
    pub point: usize,
    pub defect: ComparisonDefect,
}

impl fmt::Display for ProbeFailure {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.defect {
            ComparisonDefect::NotInjective => "not injective",
            ComparisonDefect::NotSurjective => "not surjective",
        };
        write!(out, "{}: comparison map {what} at point {}", self.probe, self.point)
    }
}

/// Compares apex elements, given by their images in each node, with the limit
/// of the node sets. Returns the first defect.
fn compare(images: &[Vec<usize>], limit_tuples: &[Vec<usize>]) -> Option<ComparisonDefect> {
    let mut hit = vec![false; limit_tuples.len()];
    for key in images {
        match limit_tuples.binary_search(key) {
            Ok(i) if hit[i] => return Some(ComparisonDefect::NotInjective),
            Ok(i) => hit[i] = true,
            Err(_) => unreachable!("images of a cone lie in the limit"),
        }
    }
    if hit.iter().all(|&h| h) {
        None
    } else {
        Some(ComparisonDefect::NotSurjective)
    }
}

/// Checks that `I` sends each diagram's limit cone to a limit cone.
///
/// Does not require a flat basis, so it can exhibit failures.
pub fn cartesianness_probe(
    m: &BasisFunctor,
    diagrams: &[FamilyDiagram],
    budget: &Budget,
) -> Result<Result<(), ProbeFailure>> {
    for (k, d) in diagrams.iter().enumerate() {
        let cone = finite_limit(d);
        let il = InteriorValue::compute(m, &cone.apex, budget)?;
        let nodes: Vec<InteriorValue> = d
            .nodes()
            .iter()
            .map(|n| InteriorValue::compute(m, n, budget))
            .collect::<Result<_>>()?;
        let legs: Vec<FamilyMap> = cone
            .legs
            .iter()
            .zip(&nodes)
            .map(|(leg, n)| il.map_along(leg, n))
            .collect::<Result<_>>()?;
        let edge_maps: Vec<FamilyMap> = d
            .edges()
            .iter()
            .map(|e| nodes[e.from].map_along(&e.map, &nodes[e.to]))
            .collect::<Result<_>>()?;
        for x in 0..m.points() {
            let sizes: Vec<usize> = nodes.iter().map(|n| n.carrier().size(x)).collect();
            let edges: Vec<(usize, usize, &[usize])> = d
                .edges()
                .iter()
                .zip(&edge_maps)
                .map(|(e, f)| (e.from, e.to, f.component(x)))
                .collect();
            let tuples = set_limit(&sizes, &edges);
            let images: Vec<Vec<usize>> = (0..il.carrier().size(x))
                .map(|c| legs.iter().map(|l| l.apply(x, c)).collect())
                .collect();
            if let Some(defect) = compare(&images, &tuples) {
                return Ok(Err(ProbeFailure {
                    probe: format!("diagram {k}"),
                    point: x,
                    defect,
                }));
            }
        }
    }
    Ok(Ok(()))
}

/// Diagrams built from the basis itself: the empty diagram, binary products
/// of basis values, and equalizers of parallel actions.
pub fn basis_diagrams(m: &BasisFunctor) -> Vec<FamilyDiagram> {
    let cat = m.shape();
    let n = m.points();
    let mut out = vec![FamilyDiagram::new(n, vec![], vec![]).expect("empty diagram")];
    for b in 0..m.object_count() {
        for b2 in b..m.object_count() {
            out.push(
                FamilyDiagram::new(n, vec![m.value(b).clone(), m.value(b2).clone()], vec![])
                    .expect("product diagram"),
            );
        }
    }
    for b in 0..m.object_count() {
        for b2 in 0..m.object_count() {
            let arrows = cat.hom(b, b2);
            for (i, &u) in arrows.iter().enumerate() {
                for &v in &arrows[i + 1..] {
                    let edge = |g: usize| DiagramEdge {
                        from: 0,
                        to: 1,
                        map: m.action(g).clone(),
                    };
                    out.push(
                        FamilyDiagram::new(
                            n,
                            vec![m.value(b).clone(), m.value(b2).clone()],
                            vec![edge(u), edge(v)],
                        )
                        .expect("equalizer diagram"),
                    );
                }
            }
        }
    }
    out
}

fn tensor_along(
    m: &BasisFunctor,
    src: &TensorValue,
    dst: &TensorValue,
    alpha: &NatTrans,
    x: usize,
) -> Vec<usize> {
    src.representatives[x]
        .iter()
        .map(|&(b, p, s)| dst.class(x, b, alpha.components[b][p], s, m.value(b).size(x)))
        .collect()
}

/// Checks one presheaf-level limit: `apex` with `legs` into `nodes`, and the
/// diagram `edges` between nodes.
fn check_tensor_limit(
    m: &BasisFunctor,
    name: String,
    apex: &SetFunctor,
    legs: &[NatTrans],
    nodes: &[SetFunctor],
    edges: &[(usize, usize, NatTrans)],
    budget: &Budget,
) -> Result<Result<(), ProbeFailure>> {
    let t_apex = tensor_presheaf(m, apex, budget)?;
    let t_nodes: Vec<TensorValue> = nodes
        .iter()
        .map(|p| tensor_presheaf(m, p, budget))
        .collect::<Result<_>>()?;
    for x in 0..m.points() {
        let leg_maps: Vec<Vec<usize>> = legs
            .iter()
            .zip(&t_nodes)
            .map(|(l, t)| tensor_along(m, &t_apex, t, l, x))
            .collect();
        let edge_maps: Vec<Vec<usize>> = edges
            .iter()
            .map(|(i, j, a)| tensor_along(m, &t_nodes[*i], &t_nodes[*j], a, x))
            .collect();
        let sizes: Vec<usize> = t_nodes.iter().map(|t| t.carrier.size(x)).collect();
        let es: Vec<(usize, usize, &[usize])> = edges
            .iter()
            .zip(&edge_maps)
            .map(|((i, j, _), f)| (*i, *j, f.as_slice()))
            .collect();
        let tuples = set_limit(&sizes, &es);
        let images: Vec<Vec<usize>> = (0..t_apex.carrier.size(x))
            .map(|c| leg_maps.iter().map(|l| l[c]).collect())
            .collect();
        if let Some(defect) = compare(&images, &tuples) {
            return Ok(Err(ProbeFailure {
                probe: name,
                point: x,
                defect,
            }));
        }
    }
    Ok(Ok(()))
}

/// The representable natural transformation `y(g) : y(b) → y(b')`.
fn yoneda_map(shape: &Arc<crate::fincat::FinCategory>, g: usize) -> NatTrans {
    let (b, b2) = (shape.src(g), shape.dst(g));
    NatTrans {
        components: (0..shape.object_count())
            .map(|c| {
                shape
                    .hom(c, b)
                    .iter()
                    .map(|&k| {
                        let gk = shape.comp(g, k);
                        shape.hom(c, b2).iter().position(|&h| h == gk).expect("composite in hom")
                    })
                    .collect()
            })
            .collect(),
    }
}

/// Checks that `M ⊗ (−)` preserves the terminal presheaf and binary
/// products, equalizers and pullbacks of representables.
pub fn tensor_probe(m: &BasisFunctor, budget: &Budget) -> Result<Result<(), ProbeFailure>> {
    let shape = m.shape().clone();
    let rep = |b: usize| SetFunctor::contravariant_representable(shape.clone(), b);
    let terminal = SetFunctor::constant(shape.clone(), Variance::Contravariant, 1);
    let verdict = check_tensor_limit(m, "terminal".into(), &terminal, &[], &[], &[], budget)?;
    if verdict.is_err() {
        return Ok(verdict);
    }
    for b in 0..shape.object_count() {
        for b2 in b..shape.object_count() {
            let nodes = [rep(b), rep(b2)];
            let (apex, legs) = functor_limit(&shape, Variance::Contravariant, &nodes, &[])?;
            let verdict = check_tensor_limit(
                m,
                format!("product of representables at {b} and {b2}"),
                &apex,
                &legs,
                &nodes,
                &[],
                budget,
            )?;
            if verdict.is_err() {
                return Ok(verdict);
            }
        }
    }
    for b in 0..shape.object_count() {
        for b2 in 0..shape.object_count() {
            let arrows = shape.hom(b, b2).to_vec();
            for (i, &u) in arrows.iter().enumerate() {
                for &v in &arrows[i + 1..] {
                    let nodes = [rep(b), rep(b2)];
                    let edges = [(0, 1, yoneda_map(&shape, u)), (0, 1, yoneda_map(&shape, v))];
                    let (apex, legs) = functor_limit(&shape, Variance::Contravariant, &nodes, &edges)?;
                    let verdict = check_tensor_limit(
                        m,
                        format!("equalizer of representable morphisms {u} and {v}"),
                        &apex,
                        &legs,
                        &nodes,
                        &edges,
                        budget,
                    )?;
                    if verdict.is_err() {
                        return Ok(verdict);
                    }
                }
            }
        }
    }
    for g1 in 0..shape.morphism_count() {
        for g2 in g1..shape.morphism_count() {
            if shape.dst(g1) != shape.dst(g2) {
                continue;
            }
            let nodes = [rep(shape.src(g1)), rep(shape.src(g2)), rep(shape.dst(g1))];
            let edges = [(0, 2, yoneda_map(&shape, g1)), (1, 2, yoneda_map(&shape, g2))];
            let (apex, legs) = functor_limit(&shape, Variance::Contravariant, &nodes, &edges)?;
            let verdict = check_tensor_limit(
                m,
                format!("pullback of representable morphisms {g1} and {g2}"),
                &apex,
                &legs,
                &nodes,
                &edges,
                budget,
            )?;
            if verdict.is_err() {
                return Ok(verdict);
            }
        }
    }
    Ok(Ok(()))
}
