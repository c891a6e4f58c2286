use crate::error::{Budget, Error, Result};
use crate::fincat::{FamilyMap, HomSpace, PointFamily, UnionFind};

use super::basis::BasisFunctor;

/// The least representative `(b, φ, s)` of an interior class.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Witness {
    pub object: usize,
    pub map_index: u64,
    pub map: FamilyMap,
    pub element: usize,
}

/// `I A`, materialized: one union–find class per element, with witnesses.
///
/// Representatives `(b, φ, s)` at a point `x` are numbered by `b`, then the
/// index of `φ` in `Hom(M b, A)`, then `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteriorValue {
    family: PointFamily,
    carrier: PointFamily,
    homs: Vec<HomSpace>,
    offsets: Vec<Vec<u64>>,
    class_of: Vec<Vec<u32>>,
    witnesses: Vec<Vec<Witness>>,
}

/// Number of pre-quotient representatives `Σ_x Σ_b |Hom(M b, A)|·|M(b)(x)|`,
/// or `None` on overflow.
pub fn prequotient_size(m: &BasisFunctor, a: &PointFamily) -> Result<Option<u64>> {
    let mut total: Option<u64> = Some(0);
    for b in 0..m.object_count() {
        let hom = HomSpace::new(m.value(b), a)?;
        let per_point = m.value(b).total() as u64;
        total = match (total, hom.count()) {
            (Some(t), Some(c)) => c.checked_mul(per_point).and_then(|v| t.checked_add(v)),
            (Some(t), None) if per_point == 0 => Some(t),
            _ => None,
        };
    }
    Ok(total)
}

impl InteriorValue {
    /// Computes `I A` without checking flatness of `m`.
    pub fn compute(m: &BasisFunctor, a: &PointFamily, budget: &Budget) -> Result<Self> {
        if a.points() != m.points() {
            return Err(Error::PointMismatch {
                expected: m.points(),
                found: a.points(),
            });
        }
        let needed = prequotient_size(m, a)?.unwrap_or(u64::MAX);
        if needed > budget.fibers {
            return Err(Error::budget("interior representatives", budget.fibers, needed));
        }
        let cat = m.shape();
        let homs: Vec<HomSpace> = (0..m.object_count())
            .map(|b| HomSpace::new(m.value(b), a))
            .collect::<Result<_>>()?;
        let counts: Vec<u64> = homs.iter().map(|h| h.count().unwrap_or(0)).collect();

        // pre[g][φ'] = index of φ' ∘ M(g) in Hom(M src g, A)
        let mut pre: Vec<Vec<u64>> = vec![Vec::new(); cat.morphism_count()];
        for g in 0..cat.morphism_count() {
            if cat.is_identity(g) {
                continue;
            }
            let b2 = cat.dst(g);
            let act = m.action(g);
            pre[g] = (0..counts[b2])
                .map(|phi| {
                    let digits = homs[b2].decode(phi);
                    let mut index = 0u64;
                    for y in 0..m.points() {
                        let radix = a.size(y) as u64;
                        for &t in act.component(y) {
                            index = index * radix + digits[y][t] as u64;
                        }
                    }
                    index
                })
                .collect();
        }

        let mut offsets = Vec::with_capacity(m.points());
        let mut class_of = Vec::with_capacity(m.points());
        let mut witnesses = Vec::with_capacity(m.points());
        let mut carrier = Vec::with_capacity(m.points());
        for x in 0..m.points() {
            let mut offs = Vec::with_capacity(m.object_count() + 1);
            let mut total = 0u64;
            for b in 0..m.object_count() {
                offs.push(total);
                total += counts[b] * m.value(b).size(x) as u64;
            }
            offs.push(total);
            let mut uf = UnionFind::new(total as usize);
            for g in 0..cat.morphism_count() {
                if cat.is_identity(g) {
                    continue;
                }
                let (b, b2) = (cat.src(g), cat.dst(g));
                let (nb, nb2) = (m.value(b).size(x) as u64, m.value(b2).size(x) as u64);
                if nb == 0 {
                    continue;
                }
                let comp = m.action(g).component(x);
                for phi in 0..counts[b2] {
                    let left = offs[b] + pre[g][phi as usize] * nb;
                    let right = offs[b2] + phi * nb2;
                    for (s, &t) in comp.iter().enumerate() {
                        uf.union((left + s as u64) as usize, (right + t as u64) as usize);
                    }
                }
            }
            let (cls, reps) = uf.classes();
            let ws = reps
                .iter()
                .map(|&r| {
                    let r = r as u64;
                    let b = offs.partition_point(|&o| o <= r) - 1;
                    let nb = m.value(b).size(x) as u64;
                    let local = r - offs[b];
                    let map_index = local / nb;
                    Witness {
                        object: b,
                        map_index,
                        map: homs[b].map(map_index),
                        element: (local % nb) as usize,
                    }
                })
                .collect::<Vec<_>>();
            carrier.push(ws.len());
            witnesses.push(ws);
            class_of.push(cls.into_iter().map(|c| c as u32).collect());
            offsets.push(offs);
        }
        Ok(InteriorValue {
            family: a.clone(),
            carrier: PointFamily::new(carrier),
            homs,
            offsets,
            class_of,
            witnesses,
        })
    }

    /// The family `A` this is the interior of.
    pub fn family(&self) -> &PointFamily {
        &self.family
    }

    /// The family `I A`.
    pub fn carrier(&self) -> &PointFamily {
        &self.carrier
    }

    pub fn hom(&self, b: usize) -> &HomSpace {
        &self.homs[b]
    }

    pub fn witness(&self, x: usize, class: usize) -> &Witness {
        &self.witnesses[x][class]
    }

    pub fn witnesses(&self, x: usize) -> &[Witness] {
        &self.witnesses[x]
    }

    /// The class of `(b, φ, s)` at `x`, with `φ` given by its index.
    pub fn class(&self, x: usize, b: usize, map_index: u64, s: usize) -> usize {
        let nb = self.homs[b].src().size(x) as u64;
        self.class_of[x][(self.offsets[x][b] + map_index * nb + s as u64) as usize] as usize
    }

    /// The class of `(b, φ, s)` at `x`, with `φ` given by its components.
    pub fn class_of_map(&self, x: usize, b: usize, map: &[Vec<usize>], s: usize) -> usize {
        self.class(x, b, self.homs[b].encode(map), s)
    }

    /// Number of pre-quotient representatives at `x`.
    pub fn representatives(&self, x: usize) -> u64 {
        *self.offsets[x].last().unwrap_or(&0)
    }

    /// The raw class table at `x`, indexed by representative number.
    pub fn class_table(&self, x: usize) -> &[u32] {
        &self.class_of[x]
    }

    /// The counit `ε : I A → A`, `class(b, φ, s) ↦ φ_x(s)`.
    pub fn counit(&self) -> FamilyMap {
        let components = self
            .witnesses
            .iter()
            .enumerate()
            .map(|(x, ws)| ws.iter().map(|w| w.map.apply(x, w.element)).collect())
            .collect();
        FamilyMap::new_unchecked(self.carrier.clone(), self.family.clone(), components)
    }

    /// `I f : I A → I B` for `f : A → B`, where `target` is `I B`.
    pub fn map_along(&self, f: &FamilyMap, target: &InteriorValue) -> Result<FamilyMap> {
        if f.src() != &self.family || f.dst() != &target.family {
            return Err(Error::InvalidMap("map does not match the interior families".into()));
        }
        let components = self
            .witnesses
            .iter()
            .enumerate()
            .map(|(x, ws)| {
                ws.iter()
                    .map(|w| {
                        let pushed = f.after(&w.map).expect("witness lands in the family");
                        target.class_of_map(x, w.object, pushed.components(), w.element)
                    })
                    .collect()
            })
            .collect();
        Ok(FamilyMap::new_unchecked(
            self.carrier.clone(),
            target.carrier.clone(),
            components,
        ))
    }

    /// `ψ_φ : M b → I A`, `t ↦ class(b, φ, t)`, for the witness map `φ`.
    pub fn transpose(&self, b: usize, map_index: u64, m: &BasisFunctor) -> Vec<Vec<usize>> {
        (0..m.points())
            .map(|y| {
                (0..m.value(b).size(y))
                    .map(|t| self.class(y, b, map_index, t))
                    .collect()
            })
            .collect()
    }

    /// The comultiplication `Δ : I A → I I A`, where `iia` is `I (I A)`.
    pub fn comultiplication(&self, m: &BasisFunctor, iia: &InteriorValue) -> Result<FamilyMap> {
        if iia.family != self.carrier {
            return Err(Error::InvalidMap("second interior is not taken of this carrier".into()));
        }
        let components = self
            .witnesses
            .iter()
            .enumerate()
            .map(|(x, ws)| {
                ws.iter()
                    .map(|w| {
                        let psi = self.transpose(w.object, w.map_index, m);
                        iia.class_of_map(x, w.object, &psi, w.element)
                    })
                    .collect()
            })
            .collect();
        Ok(FamilyMap::new_unchecked(
            self.carrier.clone(),
            iia.carrier.clone(),
            components,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::FinCategory;
    use std::sync::Arc;

    fn sierpinski() -> BasisFunctor {
        let shape = Arc::new(FinCategory::from_preorder(3, |a, b| a <= b));
        let values: Vec<_> = [0b00u64, 0b10, 0b11]
            .iter()
            .map(|&m| PointFamily::indicator(2, m))
            .collect();
        let actions = (0..shape.morphism_count())
            .map(|g| {
                let (s, d) = (values[shape.src(g)].clone(), values[shape.dst(g)].clone());
                let comps = s.fibers().iter().map(|&n| vec![0; n]).collect();
                FamilyMap::new(s, d, comps).unwrap()
            })
            .collect();
        BasisFunctor::new(shape, 2, values, actions).unwrap()
    }

    /// Classical interior: union of the basic opens contained in the subset.
    fn classical_interior(subset: u64) -> u64 {
        [0b00u64, 0b10, 0b11]
            .iter()
            .filter(|&&u| u & !subset == 0)
            .fold(0, |acc, &u| acc | u)
    }

    #[test]
    fn interior_of_subsets_matches_classical_interior() {
        let m = sierpinski();
        for subset in 0..4u64 {
            let ia = InteriorValue::compute(&m, &PointFamily::indicator(2, subset), &Budget::default())
                .unwrap();
            assert_eq!(ia.carrier(), &PointFamily::indicator(2, classical_interior(subset)));
        }
    }

    #[test]
    fn terminal_family_has_terminal_interior() {
        let m = sierpinski();
        let ia = InteriorValue::compute(&m, &PointFamily::terminal(2), &Budget::default()).unwrap();
        assert_eq!(ia.carrier(), &PointFamily::terminal(2));
        assert_eq!(ia.counit(), FamilyMap::to_terminal(ia.carrier()));
    }

    #[test]
    fn budget_is_enforced() {
        let m = sierpinski();
        let tight = Budget {
            fibers: 2,
            ..Budget::default()
        };
        let err = InteriorValue::compute(&m, &PointFamily::new(vec![3, 3]), &tight).unwrap_err();
        assert!(err.is_budget());
    }

    #[test]
    fn comultiplication_on_sierpinski_subsets() {
        let m = sierpinski();
        let budget = Budget::default();
        for subset in 0..4u64 {
            let a = PointFamily::indicator(2, subset);
            let ia = InteriorValue::compute(&m, &a, &budget).unwrap();
            let iia = InteriorValue::compute(&m, ia.carrier(), &budget).unwrap();
            let delta = ia.comultiplication(&m, &iia).unwrap();
            let eps_ia = iia.counit();
            assert_eq!(eps_ia.after(&delta).unwrap(), FamilyMap::identity(ia.carrier()));
            let i_eps = iia.map_along(&ia.counit(), &ia).unwrap();
            assert_eq!(i_eps.after(&delta).unwrap(), FamilyMap::identity(ia.carrier()));
        }
    }
}
