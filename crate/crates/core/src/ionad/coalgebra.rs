use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::{
    finite_colimit, finite_limit, DiagramEdge, FamilyDiagram, FamilyMap, PointFamily,
};

use super::formal::{formal_eq, Term};
use super::interior::InteriorValue;
use super::Ionad;

/// A coalgebra `a : A → I A` of the interior comonad; an open of the ionad.
#[derive(Debug, Clone)]
pub struct Coalgebra {
    structure: FamilyMap,
    interior: Arc<InteriorValue>,
}

impl PartialEq for Coalgebra {
    fn eq(&self, other: &Self) -> bool {
        self.structure == other.structure
    }
}

impl Eq for Coalgebra {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoalgebraViolation {
    Counit { point: usize, element: usize },
    Coassociativity { point: usize, element: usize },
}

impl fmt::Display for CoalgebraViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoalgebraViolation::Counit { point, element } => {
                write!(out, "counit law at point {point}, element {element}")
            }
            CoalgebraViolation::Coassociativity { point, element } => {
                write!(out, "coassociativity at point {point}, element {element}")
            }
        }
    }
}

impl Coalgebra {
    /// Pairs a structure map with the interior it lands in. The laws are not checked.
    pub fn from_parts(structure: FamilyMap, interior: Arc<InteriorValue>) -> Result<Self> {
        if structure.dst() != interior.carrier() || structure.src() != interior.family() {
            return Err(Error::InvalidMap(
                "structure map must go from the carrier to its interior".into(),
            ));
        }
        Ok(Coalgebra {
            structure,
            interior,
        })
    }

    pub fn carrier(&self) -> &PointFamily {
        self.structure.src()
    }

    pub fn structure(&self) -> &FamilyMap {
        &self.structure
    }

    pub fn interior(&self) -> &Arc<InteriorValue> {
        &self.interior
    }
}

impl Ionad {
    pub fn coalgebra(&self, structure: FamilyMap) -> Result<Coalgebra> {
        let interior = self.interior(structure.src())?;
        Coalgebra::from_parts(structure, interior)
    }

    /// The cofree coalgebra `(I A, Δ_A)`.
    pub fn cofree(&self, a: &PointFamily) -> Result<Coalgebra> {
        let ia = self.interior(a)?;
        let iia = self.interior(ia.carrier())?;
        let delta = ia.comultiplication(self.basis(), &iia)?;
        Coalgebra::from_parts(delta, iia)
    }

    /// `Δ_A(a(e))` and `I(a)(a(e))` as elements of `I I A` over the atoms of `I A`.
    fn coassociativity_sides(
        &self,
        structure: &FamilyMap,
        ia: &InteriorValue,
        x: usize,
        class: usize,
    ) -> (Term, Term) {
        let w = ia.witness(x, class);
        let psi = ia.transpose(w.object, w.map_index, self.basis());
        let pushed = structure.after(&w.map).expect("witness lands in the carrier");
        (
            Term::from_indices(w.object, &psi, w.element),
            Term::from_indices(w.object, pushed.components(), w.element),
        )
    }

    fn coassociative_at(&self, structure: &FamilyMap, ia: &InteriorValue, x: usize, e: usize) -> bool {
        let (left, right) = self.coassociativity_sides(structure, ia, x, structure.apply(x, e));
        formal_eq(self.basis(), x, &left, &right)
    }

    /// Verifies the counit and coassociativity laws elementwise.
    pub fn coalgebra_check(&self, c: &Coalgebra) -> Result<(), CoalgebraViolation> {
        let counit = c.interior.counit();
        let a = c.carrier();
        for x in 0..a.points() {
            for e in 0..a.size(x) {
                if counit.apply(x, c.structure.apply(x, e)) != e {
                    return Err(CoalgebraViolation::Counit { point: x, element: e });
                }
            }
        }
        for x in 0..a.points() {
            for e in 0..a.size(x) {
                if !self.coassociative_at(&c.structure, &c.interior, x, e) {
                    return Err(CoalgebraViolation::Coassociativity { point: x, element: e });
                }
            }
        }
        Ok(())
    }

    /// Whether `f : A → B` satisfies `b ∘ f = I(f) ∘ a`.
    pub fn is_coalgebra_morphism(&self, src: &Coalgebra, dst: &Coalgebra, f: &FamilyMap) -> bool {
        if f.src() != src.carrier() || f.dst() != dst.carrier() {
            return false;
        }
        let ia = &src.interior;
        (0..f.src().points()).all(|x| {
            (0..f.src().size(x)).all(|e| {
                let w = ia.witness(x, src.structure.apply(x, e));
                let pushed = f.after(&w.map).expect("witness lands in the carrier");
                dst.interior.class_of_map(x, w.object, pushed.components(), w.element)
                    == dst.structure.apply(x, f.apply(x, e))
            })
        })
    }

    /// All coalgebra structures on `A`, in lexicographic order of structure tables.
    pub fn enumerate_coalgebra_structures(&self, a: &PointFamily) -> Result<Vec<Coalgebra>> {
        let ia = self.interior(a)?;
        let counit = ia.counit();
        let mut slots = Vec::new();
        let mut slot_of = Vec::new();
        for x in 0..a.points() {
            slot_of.push(slots.len());
            for e in 0..a.size(x) {
                slots.push((x, e));
            }
        }
        // candidates per slot and, per candidate, the last slot its check depends on
        let mut candidates: Vec<Vec<(usize, usize)>> = Vec::with_capacity(slots.len());
        for (i, &(x, e)) in slots.iter().enumerate() {
            let mut list = Vec::new();
            for (c, w) in ia.witnesses(x).iter().enumerate() {
                if counit.apply(x, c) != e {
                    continue;
                }
                let mut last = i;
                for (y, comp) in w.map.components().iter().enumerate() {
                    for &v in comp {
                        last = last.max(slot_of[y] + v);
                    }
                }
                list.push((c, last));
            }
            candidates.push(list);
        }
        if candidates.iter().any(Vec::is_empty) {
            return Ok(Vec::new());
        }
        let mut table: Vec<Vec<usize>> = a.fibers().iter().map(|&n| vec![0; n]).collect();
        let mut pending: Vec<Vec<usize>> = vec![Vec::new(); slots.len()];
        let mut out = Vec::new();
        let mut visited = 0u64;
        self.extend_structures(
            0,
            &slots,
            &candidates,
            &ia,
            &mut table,
            &mut pending,
            &mut out,
            &mut visited,
        )?;
        Ok(out)
    }

    #[allow(clippy::too_many_arguments)]
    fn extend_structures(
        &self,
        depth: usize,
        slots: &[(usize, usize)],
        candidates: &[Vec<(usize, usize)>],
        ia: &Arc<InteriorValue>,
        table: &mut Vec<Vec<usize>>,
        pending: &mut Vec<Vec<usize>>,
        out: &mut Vec<Coalgebra>,
        visited: &mut u64,
    ) -> Result<()> {
        if depth == slots.len() {
            let structure = FamilyMap::new(ia.family().clone(), ia.carrier().clone(), table.clone())?;
            out.push(Coalgebra::from_parts(structure, ia.clone())?);
            return Ok(());
        }
        let (x, e) = slots[depth];
        for &(c, last) in &candidates[depth] {
            *visited += 1;
            if *visited > self.budget().enumeration {
                return Err(Error::budget(
                    "coalgebra structures",
                    self.budget().enumeration,
                    *visited,
                ));
            }
            table[x][e] = c;
            pending[last].push(depth);
            let ready = std::mem::take(&mut pending[depth]);
            let partial = FamilyMap::new_unchecked(ia.family().clone(), ia.carrier().clone(), table.clone());
            let ok = ready.iter().all(|&j| {
                let (y, f) = slots[j];
                self.coassociative_at(&partial, ia, y, f)
            });
            if ok {
                self.extend_structures(depth + 1, slots, candidates, ia, table, pending, out, visited)?;
            }
            pending[depth] = ready;
            pending[last].pop();
        }
        Ok(())
    }

    /// The colimit of a diagram of coalgebras, computed on carriers.
    pub fn coalgebra_colimit(
        &self,
        nodes: &[Coalgebra],
        edges: &[(usize, usize, FamilyMap)],
    ) -> Result<(Coalgebra, Vec<FamilyMap>)> {
        for (i, (from, to, f)) in edges.iter().enumerate() {
            if !self.is_coalgebra_morphism(&nodes[*from], &nodes[*to], f) {
                return Err(Error::NonCommuting(format!("edge {i} is not a coalgebra morphism")));
            }
        }
        let diagram = FamilyDiagram::new(
            self.points(),
            nodes.iter().map(|n| n.carrier().clone()).collect(),
            edges
                .iter()
                .map(|(from, to, map)| DiagramEdge {
                    from: *from,
                    to: *to,
                    map: map.clone(),
                })
                .collect(),
        )?;
        let cocone = finite_colimit(&diagram);
        let iq = self.interior(&cocone.apex)?;
        let mut components: Vec<Vec<usize>> =
            cocone.apex.fibers().iter().map(|&n| vec![usize::MAX; n]).collect();
        for (i, node) in nodes.iter().enumerate() {
            let leg = &cocone.legs[i];
            for x in 0..self.points() {
                for e in 0..node.carrier().size(x) {
                    let q = leg.apply(x, e);
                    if components[x][q] != usize::MAX {
                        continue;
                    }
                    let w = node.interior.witness(x, node.structure.apply(x, e));
                    let pushed = leg.after(&w.map)?;
                    components[x][q] = iq.class_of_map(x, w.object, pushed.components(), w.element);
                }
            }
        }
        let structure = FamilyMap::new(cocone.apex.clone(), iq.carrier().clone(), components)?;
        let result = Coalgebra::from_parts(structure, iq)?;
        self.coalgebra_check(&result)
            .map_err(|v| Error::Internal(format!("colimit coalgebra fails: {v}")))?;
        Ok((result, cocone.legs))
    }

    /// The limit of a diagram of coalgebras, computed on carriers. The
    /// structure map inverts the comparison `I(lim A) → lim I A`.
    pub fn coalgebra_limit(
        &self,
        nodes: &[Coalgebra],
        edges: &[(usize, usize, FamilyMap)],
    ) -> Result<(Coalgebra, Vec<FamilyMap>)> {
        for (i, (from, to, f)) in edges.iter().enumerate() {
            if !self.is_coalgebra_morphism(&nodes[*from], &nodes[*to], f) {
                return Err(Error::NonCommuting(format!("edge {i} is not a coalgebra morphism")));
            }
        }
        let diagram = FamilyDiagram::new(
            self.points(),
            nodes.iter().map(|n| n.carrier().clone()).collect(),
            edges
                .iter()
                .map(|(from, to, map)| DiagramEdge {
                    from: *from,
                    to: *to,
                    map: map.clone(),
                })
                .collect(),
        )?;
        let cone = finite_limit(&diagram);
        let il = self.interior(&cone.apex)?;
        let images: Vec<FamilyMap> = nodes
            .iter()
            .zip(&cone.legs)
            .map(|(n, leg)| il.map_along(leg, &n.interior))
            .collect::<Result<_>>()?;
        let mut components = Vec::with_capacity(self.points());
        for x in 0..self.points() {
            let mut lookup = std::collections::HashMap::new();
            for c in 0..il.carrier().size(x) {
                let key: Vec<usize> = images.iter().map(|m| m.apply(x, c)).collect();
                if lookup.insert(key, c).is_some() {
                    return Err(Error::Internal(format!(
                        "interior does not preserve this limit at point {x}"
                    )));
                }
            }
            let mut row = Vec::with_capacity(cone.apex.size(x));
            for tuple in &cone.tuples[x] {
                let key: Vec<usize> = nodes
                    .iter()
                    .zip(tuple)
                    .map(|(n, &e)| n.structure.apply(x, e))
                    .collect();
                let c = lookup.get(&key).copied().ok_or_else(|| {
                    Error::Internal(format!("interior does not preserve this limit at point {x}"))
                })?;
                row.push(c);
            }
            components.push(row);
        }
        let structure = FamilyMap::new(cone.apex.clone(), il.carrier().clone(), components)?;
        let result = Coalgebra::from_parts(structure, il)?;
        self.coalgebra_check(&result)
            .map_err(|v| Error::Internal(format!("limit coalgebra fails: {v}")))?;
        Ok((result, cone.legs))
    }
}
