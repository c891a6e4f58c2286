//! Continuous maps of ionads, specialisations between them, hom-categories
//! and the specialisation category.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fincat::{
    enumerate_natural_transformations_within, FamilyMap, FinCategory, HomSpace, NatTrans,
    PointFamily,
};
use crate::ionad::{formal_eq, Coalgebra, CoalgebraViolation, Ionad, InteriorValue, Term};
use crate::space::FinTopSpace;

/// A continuous map `X → Y`: a point map `f` and, for each object `b` of the
/// target basis, a coalgebra on `f⁻¹ M(b)`. The actions `f⁻¹ M(g)` must be
/// coalgebra morphisms between the liftings.
#[derive(Debug, Clone)]
pub struct ContinuousMap {
    src: Ionad,
    dst: Ionad,
    point_map: Vec<usize>,
    liftings: Vec<Coalgebra>,
}

impl PartialEq for ContinuousMap {
    fn eq(&self, other: &Self) -> bool {
        self.src == other.src
            && self.dst == other.dst
            && self.point_map == other.point_map
            && self.liftings == other.liftings
    }
}

impl Eq for ContinuousMap {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContinuityViolation {
    PointMap,
    Carrier { object: usize },
    Lifting { object: usize, violation: CoalgebraViolation },
    NotFunctorial { morphism: usize },
}

impl fmt::Display for ContinuityViolation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ContinuityViolation::PointMap => write!(out, "point map does not fit the ionads"),
            ContinuityViolation::Carrier { object } => {
                write!(out, "lifting at object {object} has the wrong carrier")
            }
            ContinuityViolation::Lifting { object, violation } => {
                write!(out, "lifting at object {object} is not a coalgebra: {violation}")
            }
            ContinuityViolation::NotFunctorial { morphism } => {
                write!(out, "action of morphism {morphism} is not a coalgebra morphism")
            }
        }
    }
}

impl ContinuousMap {
    /// Assembles a map without checking it; see [`check_continuous`].
    pub fn from_parts(src: Ionad, dst: Ionad, point_map: Vec<usize>, liftings: Vec<Coalgebra>) -> Self {
        ContinuousMap { src, dst, point_map, liftings }
    }

    pub fn identity(x: &Ionad) -> Result<Self> {
        let liftings = (0..x.basis().object_count())
            .map(|b| x.lift_basis(b))
            .collect::<Result<_>>()?;
        Ok(ContinuousMap {
            src: x.clone(),
            dst: x.clone(),
            point_map: (0..x.points()).collect(),
            liftings,
        })
    }

    /// The unique map to the terminal ionad.
    pub fn to_terminal(x: &Ionad) -> Result<Self> {
        let mut maps = ContinuousMap::enumerate(x, &Ionad::terminal(), &vec![0; x.points()])?;
        maps.pop()
            .ok_or_else(|| Error::Internal("no map to the terminal ionad".into()))
    }

    /// Every continuous map with the given point map, in lexicographic order of
    /// lifting structure tables.
    pub fn enumerate(src: &Ionad, dst: &Ionad, point_map: &[usize]) -> Result<Vec<ContinuousMap>> {
        check_point_map(src, dst, point_map)?;
        let m = dst.basis();
        let cat = m.shape();
        let candidates: Vec<Vec<Coalgebra>> = (0..m.object_count())
            .map(|b| src.enumerate_coalgebra_structures(&m.value(b).reindex(point_map)))
            .collect::<Result<_>>()?;
        let reindexed: Vec<FamilyMap> = (0..cat.morphism_count())
            .map(|g| m.action(g).reindex(point_map))
            .collect();
        let mut checks: Vec<Vec<usize>> = vec![Vec::new(); m.object_count()];
        for g in 0..cat.morphism_count() {
            checks[cat.src(g).max(cat.dst(g))].push(g);
        }
        let mut out = Vec::new();
        let mut chosen: Vec<usize> = Vec::with_capacity(m.object_count());
        fn extend(
            src: &Ionad,
            cat: &FinCategory,
            candidates: &[Vec<Coalgebra>],
            reindexed: &[FamilyMap],
            checks: &[Vec<usize>],
            chosen: &mut Vec<usize>,
            out: &mut Vec<Vec<Coalgebra>>,
        ) {
            let depth = chosen.len();
            if depth == candidates.len() {
                out.push(chosen.iter().enumerate().map(|(b, &i)| candidates[b][i].clone()).collect());
                return;
            }
            for i in 0..candidates[depth].len() {
                chosen.push(i);
                let ok = checks[depth].iter().all(|&g| {
                    let (b, b2) = (cat.src(g), cat.dst(g));
                    src.is_coalgebra_morphism(
                        &candidates[b][chosen[b]],
                        &candidates[b2][chosen[b2]],
                        &reindexed[g],
                    )
                });
                if ok {
                    extend(src, cat, candidates, reindexed, checks, chosen, out);
                }
                chosen.pop();
            }
        }
        let mut found = Vec::new();
        extend(src, cat, &candidates, &reindexed, &checks, &mut chosen, &mut found);
        for liftings in found {
            out.push(ContinuousMap {
                src: src.clone(),
                dst: dst.clone(),
                point_map: point_map.to_vec(),
                liftings,
            });
        }
        Ok(out)
    }

    pub fn src(&self) -> &Ionad {
        &self.src
    }

    pub fn dst(&self) -> &Ionad {
        &self.dst
    }

    pub fn point_map(&self) -> &[usize] {
        &self.point_map
    }

    pub fn liftings(&self) -> &[Coalgebra] {
        &self.liftings
    }

    pub fn lifting(&self, b: usize) -> &Coalgebra {
        &self.liftings[b]
    }

    /// The witness `(b', χ, t)` of the lifted structure at `s ∈ M(b)(f x)`.
    fn lifted(&self, x: usize, b: usize, s: usize) -> &crate::ionad::Witness {
        let l = &self.liftings[b];
        l.interior().witness(x, l.structure().apply(x, s))
    }

    /// `δ` on the triple `(b, φ, s)` of `J A` at `f x`: the triple
    /// `(b', f⁻¹φ ∘ χ, t)` of `I f⁻¹A` at `x`.
    fn delta_triple(&self, x: usize, b: usize, phi: &FamilyMap, s: usize) -> (usize, Vec<Vec<usize>>, usize) {
        let w = self.lifted(x, b, s);
        let map = w
            .map
            .components()
            .iter()
            .enumerate()
            .map(|(y, row)| row.iter().map(|&u| phi.apply(self.point_map[y], u)).collect())
            .collect();
        (w.object, map, w.element)
    }

    /// `f* (A, a) = δ_A ∘ f⁻¹a`, a coalgebra over the source.
    pub fn pullback_coalgebra(&self, c: &Coalgebra) -> Result<Coalgebra> {
        let fa = c.carrier().reindex(&self.point_map);
        let ifa = self.src.interior(&fa)?;
        let components = (0..self.src.points())
            .map(|x| {
                let y = self.point_map[x];
                (0..fa.size(x))
                    .map(|e| {
                        let w = c.interior().witness(y, c.structure().apply(y, e));
                        let (b, map, t) = self.delta_triple(x, w.object, &w.map, w.element);
                        ifa.class_of_map(x, b, &map, t)
                    })
                    .collect()
            })
            .collect();
        let structure = FamilyMap::new(fa, ifa.carrier().clone(), components)?;
        Coalgebra::from_parts(structure, ifa)
    }

    /// `δ_A : f⁻¹ J A → I f⁻¹ A`.
    pub fn delta(&self, a: &PointFamily) -> Result<FamilyMap> {
        let ja = self.dst.interior(a)?;
        let fa = a.reindex(&self.point_map);
        let ifa = self.src.interior(&fa)?;
        let components = (0..self.src.points())
            .map(|x| {
                ja.witnesses(self.point_map[x])
                    .iter()
                    .map(|w| {
                        let (b, map, t) = self.delta_triple(x, w.object, &w.map, w.element);
                        ifa.class_of_map(x, b, &map, t)
                    })
                    .collect()
            })
            .collect();
        FamilyMap::new(ja.carrier().reindex(&self.point_map), ifa.carrier().clone(), components)
    }
}

fn check_point_map(src: &Ionad, dst: &Ionad, point_map: &[usize]) -> Result<()> {
    if point_map.len() != src.points() || point_map.iter().any(|&y| y >= dst.points()) {
        return Err(Error::InvalidMap(format!(
            "point map must send {} points into {}",
            src.points(),
            dst.points()
        )));
    }
    Ok(())
}

/// Verifies every invariant of a continuous map.
pub fn check_continuous(m: &ContinuousMap) -> Result<(), ContinuityViolation> {
    if check_point_map(&m.src, &m.dst, &m.point_map).is_err()
        || m.liftings.len() != m.dst.basis().object_count()
    {
        return Err(ContinuityViolation::PointMap);
    }
    let basis = m.dst.basis();
    for (b, l) in m.liftings.iter().enumerate() {
        if l.carrier() != &basis.value(b).reindex(&m.point_map) {
            return Err(ContinuityViolation::Carrier { object: b });
        }
        if l.interior().family() != l.carrier()
            || l.interior().as_ref() != m.src.interior(l.carrier()).map_err(|_| ContinuityViolation::Carrier { object: b })?.as_ref()
        {
            return Err(ContinuityViolation::Carrier { object: b });
        }
        m.src
            .coalgebra_check(l)
            .map_err(|violation| ContinuityViolation::Lifting { object: b, violation })?;
    }
    let cat = basis.shape();
    for g in 0..cat.morphism_count() {
        let f = basis.action(g).reindex(&m.point_map);
        if !m.src.is_coalgebra_morphism(&m.liftings[cat.src(g)], &m.liftings[cat.dst(g)], &f) {
            return Err(ContinuityViolation::NotFunctorial { morphism: g });
        }
    }
    Ok(())
}

/// `m2 ∘ m1`: the liftings of `m2` pulled back along `m1`.
pub fn compose(m2: &ContinuousMap, m1: &ContinuousMap) -> Result<ContinuousMap> {
    if m1.dst != m2.src {
        return Err(Error::EndpointMismatch("target of the first map is not the source of the second".into()));
    }
    let liftings = m2
        .liftings
        .iter()
        .map(|l| m1.pullback_coalgebra(l))
        .collect::<Result<_>>()?;
    Ok(ContinuousMap {
        src: m1.src.clone(),
        dst: m2.dst.clone(),
        point_map: m1.point_map.iter().map(|&y| m2.point_map[y]).collect(),
        liftings,
    })
}

/// `Σ f` for a continuous map of spaces; `Err(NoLifting)` when `f` is not continuous.
pub fn sigma_map(
    src: &Ionad,
    dst: &Ionad,
    point_map: &[usize],
) -> Result<ContinuousMap> {
    ContinuousMap::enumerate(src, dst, point_map)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::NoLifting(format!("point map {point_map:?} admits no lifting")))
}

/// The point maps of `Sp(S, T)`, lexicographic.
pub fn continuous_point_maps(s: &FinTopSpace, t: &FinTopSpace) -> Vec<Vec<usize>> {
    point_maps(s.points(), t.points())
        .into_iter()
        .filter(|f| s.is_continuous(t, f))
        .collect()
}

/// Every function `n → m`, lexicographic with point 0 most significant.
pub fn point_maps(n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if m == 0 && n > 0 {
        return out;
    }
    let mut f = vec![0usize; n];
    loop {
        out.push(f.clone());
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            f[i] += 1;
            if f[i] < m {
                break;
            }
            f[i] = 0;
        }
    }
}

/// A comonad morphism `δ : f⁻¹ J ⇒ I f⁻¹`, stored at finitely many families.
/// The first families are the basis values of the target, in object order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComonadMorphismPresentation {
    pub point_map: Vec<usize>,
    pub families: Vec<PointFamily>,
    pub deltas: Vec<FamilyMap>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComonadMorphismAxiom {
    Counit,
    Comultiplication,
    Naturality,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomFailure {
    pub axiom: ComonadMorphismAxiom,
    pub family: usize,
    pub point: usize,
    pub element: usize,
}

impl fmt::Display for AxiomFailure {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.axiom {
            ComonadMorphismAxiom::Counit => "counit square",
            ComonadMorphismAxiom::Comultiplication => "comultiplication square",
            ComonadMorphismAxiom::Naturality => "naturality",
        };
        write!(
            out,
            "{what} fails at family {}, point {}, element {}",
            self.family, self.point, self.element
        )
    }
}

/// The comonad-morphism form of `m` at its basis values and at `probes`.
pub fn to_comonad_morphism(m: &ContinuousMap, probes: &[PointFamily]) -> Result<ComonadMorphismPresentation> {
    let families: Vec<PointFamily> = m
        .dst
        .basis()
        .values()
        .iter()
        .chain(probes)
        .cloned()
        .collect();
    let deltas = families.iter().map(|a| m.delta(a)).collect::<Result<_>>()?;
    let p = ComonadMorphismPresentation {
        point_map: m.point_map.clone(),
        families,
        deltas,
    };
    if let Err(failure) = check_comonad_morphism(&m.src, &m.dst, &p)? {
        return Err(Error::Internal(format!("continuous map gives a bad comonad morphism: {failure}")));
    }
    Ok(p)
}

/// The continuous map with liftings `δ_{M b} ∘ f⁻¹ δ_b`.
pub fn from_comonad_morphism(src: &Ionad, dst: &Ionad, p: &ComonadMorphismPresentation) -> Result<ContinuousMap> {
    check_point_map(src, dst, &p.point_map)?;
    let m = dst.basis();
    if p.families.len() < m.object_count() || p.families[..m.object_count()] != m.values()[..] {
        return Err(Error::InvalidMap("presentation must start with the basis values".into()));
    }
    let liftings = (0..m.object_count())
        .map(|b| {
            let lifted = dst.lift_basis(b)?;
            let carrier = m.value(b).reindex(&p.point_map);
            let interior = src.interior(&carrier)?;
            let components = (0..src.points())
                .map(|x| {
                    let y = p.point_map[x];
                    (0..carrier.size(x))
                        .map(|s| p.deltas[b].apply(x, lifted.structure().apply(y, s)))
                        .collect()
                })
                .collect();
            Coalgebra::from_parts(FamilyMap::new(carrier, interior.carrier().clone(), components)?, interior)
        })
        .collect::<Result<_>>()?;
    Ok(ContinuousMap {
        src: src.clone(),
        dst: dst.clone(),
        point_map: p.point_map.clone(),
        liftings,
    })
}

/// Checks the counit and comultiplication squares, and naturality against
/// the basis components, at every stored family.
pub fn check_comonad_morphism(
    src: &Ionad,
    dst: &Ionad,
    p: &ComonadMorphismPresentation,
) -> Result<Result<(), AxiomFailure>> {
    let m = dst.basis();
    let f = &p.point_map;
    let basis_lifted: Vec<Coalgebra> = (0..m.object_count())
        .map(|b| dst.lift_basis(b))
        .collect::<Result<_>>()?;
    // δ_{M b}(class(b, id, s)) at x, the lifted structure the presentation encodes
    let lifted = |x: usize, b: usize, s: usize| -> usize {
        p.deltas[b].apply(x, basis_lifted[b].structure().apply(f[x], s))
    };
    for (i, (a, delta)) in p.families.iter().zip(&p.deltas).enumerate() {
        let ja = dst.interior(a)?;
        let fa = a.reindex(f);
        let ifa = src.interior(&fa)?;
        if delta.src() != &ja.carrier().reindex(f) || delta.dst() != ifa.carrier() {
            return Err(Error::InvalidMap(format!("delta at family {i} has the wrong type")));
        }
        let counit = ifa.counit();
        let fail = |axiom, point, element| Ok(Err(AxiomFailure { axiom, family: i, point, element }));
        for x in 0..src.points() {
            for (e, w) in ja.witnesses(f[x]).iter().enumerate() {
                let k = delta.apply(x, e);
                if counit.apply(x, k) != w.map.apply(f[x], w.element) {
                    return fail(ComonadMorphismAxiom::Counit, x, e);
                }
                let li = src.interior(&m.value(w.object).reindex(f))?;
                let v = li.witness(x, lifted(x, w.object, w.element));
                let pushed: Vec<Vec<usize>> = v
                    .map
                    .components()
                    .iter()
                    .enumerate()
                    .map(|(y, row)| row.iter().map(|&u| w.map.apply(f[y], u)).collect())
                    .collect();
                if ifa.class_of_map(x, v.object, &pushed, v.element) != k {
                    return fail(ComonadMorphismAxiom::Naturality, x, e);
                }
                // Δ ∘ δ_A against I(δ_A) ∘ δ_{JA} ∘ f⁻¹Δ_A, as elements of I I f⁻¹A
                let kw = ifa.witness(x, k);
                let left = Term::from_indices(kw.object, &ifa.transpose(kw.object, kw.map_index, src.basis()), kw.element);
                let right_map: Vec<Vec<usize>> = v
                    .map
                    .components()
                    .iter()
                    .enumerate()
                    .map(|(y, row)| {
                        row.iter()
                            .map(|&u| delta.apply(y, ja.class(f[y], w.object, w.map_index, u)))
                            .collect()
                    })
                    .collect();
                let right = Term::from_indices(v.object, &right_map, v.element);
                if !formal_eq(src.basis(), x, &left, &right) {
                    return fail(ComonadMorphismAxiom::Comultiplication, x, e);
                }
            }
        }
    }
    Ok(Ok(()))
}

/// A specialisation `f ⇒ g`: coalgebra morphisms between the liftings,
/// natural in the basis object.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Specialisation {
    pub components: Vec<FamilyMap>,
}

impl Specialisation {
    pub fn identity(f: &ContinuousMap) -> Self {
        Specialisation {
            components: f.liftings.iter().map(|l| FamilyMap::identity(l.carrier())).collect(),
        }
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Specialisation) -> Result<Specialisation> {
        Ok(Specialisation {
            components: self
                .components
                .iter()
                .zip(&first.components)
                .map(|(g, f)| g.after(f))
                .collect::<Result<_>>()?,
        })
    }

    fn key(&self) -> Vec<Vec<Vec<usize>>> {
        self.components.iter().map(|c| c.components().to_vec()).collect()
    }
}

/// Whether `alpha` is a specialisation `f ⇒ g`.
pub fn is_specialisation(f: &ContinuousMap, g: &ContinuousMap, alpha: &Specialisation) -> bool {
    let m = f.dst.basis();
    if f.src != g.src || f.dst != g.dst || alpha.components.len() != m.object_count() {
        return false;
    }
    let components_ok = alpha.components.iter().enumerate().all(|(b, c)| {
        c.src() == f.lifting(b).carrier()
            && c.dst() == g.lifting(b).carrier()
            && f.src.is_coalgebra_morphism(f.lifting(b), g.lifting(b), c)
    });
    components_ok && natural(f, g, &alpha.components)
}

fn natural(f: &ContinuousMap, g: &ContinuousMap, components: &[FamilyMap]) -> bool {
    let m = f.dst.basis();
    let cat = m.shape();
    components.len() == m.object_count()
        && (0..cat.morphism_count()).all(|h| natural_at(f, g, components, h))
}

fn natural_at(f: &ContinuousMap, g: &ContinuousMap, components: &[FamilyMap], h: usize) -> bool {
    let m = f.dst.basis();
    let cat = m.shape();
    let (b, b2) = (cat.src(h), cat.dst(h));
    (0..f.src.points()).all(|x| {
        (0..m.value(b).size(f.point_map[x])).all(|s| {
            m.act(h, g.point_map[x], components[b].apply(x, s))
                == components[b2].apply(x, m.act(h, f.point_map[x], s))
        })
    })
}

/// All specialisations `f ⇒ g`, lexicographic in component tables.
pub fn enumerate_specialisations(f: &ContinuousMap, g: &ContinuousMap) -> Result<Vec<Specialisation>> {
    if f.src != g.src || f.dst != g.dst {
        return Err(Error::EndpointMismatch("specialisations need parallel maps".into()));
    }
    let m = f.dst.basis();
    let cat = m.shape();
    let budget = f.src.budget();
    let mut candidates = Vec::with_capacity(m.object_count());
    for b in 0..m.object_count() {
        let hom = HomSpace::new(f.lifting(b).carrier(), g.lifting(b).carrier())?;
        let count = hom.count().unwrap_or(u64::MAX);
        if count > budget.enumeration {
            return Err(Error::budget("specialisation components", budget.enumeration, count));
        }
        candidates.push(
            hom.iter()
                .filter(|c| f.src.is_coalgebra_morphism(f.lifting(b), g.lifting(b), c))
                .collect::<Vec<_>>(),
        );
    }
    let mut checks: Vec<Vec<usize>> = vec![Vec::new(); m.object_count()];
    for h in 0..cat.morphism_count() {
        checks[cat.src(h).max(cat.dst(h))].push(h);
    }
    let mut out = Vec::new();
    let mut chosen: Vec<FamilyMap> = Vec::new();
    fn extend(
        f: &ContinuousMap,
        g: &ContinuousMap,
        candidates: &[Vec<FamilyMap>],
        checks: &[Vec<usize>],
        chosen: &mut Vec<FamilyMap>,
        out: &mut Vec<Specialisation>,
    ) {
        let depth = chosen.len();
        if depth == candidates.len() {
            out.push(Specialisation { components: chosen.clone() });
            return;
        }
        for c in &candidates[depth] {
            chosen.push(c.clone());
            if checks[depth].iter().all(|&h| natural_at(f, g, chosen, h)) {
                extend(f, g, candidates, checks, chosen, out);
            }
            chosen.pop();
        }
    }
    extend(f, g, &candidates, &checks, &mut chosen, &mut out);
    Ok(out)
}

/// `Ion(X, Y)`: continuous maps as objects, specialisations as morphisms.
#[derive(Debug, Clone)]
pub struct HomCategory {
    pub category: FinCategory,
    pub maps: Vec<ContinuousMap>,
    pub cells: Vec<Specialisation>,
}

/// Enumerates `Ion(X, Y)`: point maps lexicographic, then liftings lexicographic;
/// morphisms ordered by source, target, then component tables.
pub fn hom_category(x: &Ionad, y: &Ionad) -> Result<HomCategory> {
    let count = (y.points() as u64).checked_pow(x.points() as u32).unwrap_or(u64::MAX);
    if count > x.budget().enumeration {
        return Err(Error::budget("point maps", x.budget().enumeration, count));
    }
    let mut maps = Vec::new();
    for f in point_maps(x.points(), y.points()) {
        maps.extend(ContinuousMap::enumerate(x, y, &f)?);
    }
    let mut endpoints = Vec::new();
    let mut cells = Vec::new();
    for (i, f) in maps.iter().enumerate() {
        for (j, g) in maps.iter().enumerate() {
            for alpha in enumerate_specialisations(f, g)? {
                endpoints.push((i, j));
                cells.push(alpha);
            }
        }
    }
    let category = category_of_cells(&endpoints, &cells, maps.iter().map(Specialisation::identity))?;
    Ok(HomCategory { category, maps, cells })
}

fn category_of_cells(
    endpoints: &[(usize, usize)],
    cells: &[Specialisation],
    identities: impl Iterator<Item = Specialisation>,
) -> Result<FinCategory> {
    let index: HashMap<(usize, usize, Vec<Vec<Vec<usize>>>), usize> = endpoints
        .iter()
        .zip(cells)
        .enumerate()
        .map(|(k, (&(i, j), c))| ((i, j, c.key()), k))
        .collect();
    let identity = identities
        .enumerate()
        .map(|(i, id)| {
            index
                .get(&(i, i, id.key()))
                .copied()
                .ok_or_else(|| Error::Internal("identity specialisation missing".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let objects = identity.len();
    Ok(FinCategory::new_unchecked(objects, endpoints.to_vec(), identity, |second, first| {
        let ((i, j), (j2, k)) = (endpoints[first], endpoints[second]);
        if j != j2 {
            return None;
        }
        let composite = cells[second].after(&cells[first]).ok()?;
        index.get(&(i, k, composite.key())).copied()
    }))
}

/// `V X`: points as objects, natural transformations `M(−)(x) ⇒ M(−)(y)` as morphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecialisationCategory {
    pub category: FinCategory,
    pub cells: Vec<NatTrans>,
}

pub fn specialisation_category(x: &Ionad) -> Result<SpecialisationCategory> {
    let m = x.basis();
    let at: Vec<_> = (0..x.points()).map(|p| m.at_point(p)).collect();
    let mut endpoints = Vec::new();
    let mut cells = Vec::new();
    for (i, f) in at.iter().enumerate() {
        for (j, g) in at.iter().enumerate() {
            for alpha in enumerate_natural_transformations_within(f, g, x.budget())? {
                endpoints.push((i, j));
                cells.push(alpha);
            }
        }
    }
    let index: HashMap<(usize, usize, &NatTrans), usize> = endpoints
        .iter()
        .zip(&cells)
        .enumerate()
        .map(|(k, (&(i, j), c))| ((i, j, c), k))
        .collect();
    let identity: Vec<usize> = at
        .iter()
        .enumerate()
        .map(|(i, f)| index[&(i, i, &NatTrans::identity(f))])
        .collect();
    let category = FinCategory::new_unchecked(x.points(), endpoints.clone(), identity, |second, first| {
        let ((i, j), (j2, k)) = (endpoints[first], endpoints[second]);
        (j == j2).then(|| index[&(i, k, &cells[second].after(&cells[first]))])
    });
    Ok(SpecialisationCategory { category, cells })
}

/// `ρ : f⁻¹ J ⇒ g⁻¹`, stored at finitely many families; the first are the
/// basis values of the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhoPresentation {
    pub families: Vec<PointFamily>,
    pub components: Vec<FamilyMap>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhoFailure {
    pub family: usize,
    pub point: usize,
    pub element: usize,
}

impl fmt::Display for RhoFailure {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            out,
            "square fails at family {}, point {}, element {}",
            self.family, self.point, self.element
        )
    }
}

/// `ρ_A(class(b, φ, s)) = φ(α_b(s))`.
pub fn rho_presentation(
    f: &ContinuousMap,
    g: &ContinuousMap,
    alpha: &Specialisation,
    probes: &[PointFamily],
) -> Result<RhoPresentation> {
    if !is_specialisation(f, g, alpha) {
        return Err(Error::InvalidMap("not a specialisation between these maps".into()));
    }
    let families: Vec<PointFamily> = f.dst.basis().values().iter().chain(probes).cloned().collect();
    let components = families
        .iter()
        .map(|a| {
            let ja = f.dst.interior(a)?;
            let comps = (0..f.src.points())
                .map(|x| {
                    ja.witnesses(f.point_map[x])
                        .iter()
                        .map(|w| w.map.apply(g.point_map[x], alpha.components[w.object].apply(x, w.element)))
                        .collect()
                })
                .collect();
            FamilyMap::new(ja.carrier().reindex(&f.point_map), a.reindex(&g.point_map), comps)
        })
        .collect::<Result<_>>()?;
    let p = RhoPresentation { families, components };
    if let Err(failure) = check_rho(f, g, &p)? {
        return Err(Error::Internal(format!("specialisation gives a bad transformation: {failure}")));
    }
    Ok(p)
}

/// `α_b(s) = ρ_{M b}(class(b, id, s))`.
pub fn specialisation_from_rho(f: &ContinuousMap, g: &ContinuousMap, p: &RhoPresentation) -> Result<Specialisation> {
    let m = f.dst.basis();
    if p.families.len() < m.object_count() || p.families[..m.object_count()] != m.values()[..] {
        return Err(Error::InvalidMap("presentation must start with the basis values".into()));
    }
    let components = (0..m.object_count())
        .map(|b| {
            let lifted = f.dst.lift_basis(b)?;
            let comps = (0..f.src.points())
                .map(|x| {
                    (0..m.value(b).size(f.point_map[x]))
                        .map(|s| p.components[b].apply(x, lifted.structure().apply(f.point_map[x], s)))
                        .collect()
                })
                .collect();
            FamilyMap::new(f.lifting(b).carrier().clone(), g.lifting(b).carrier().clone(), comps)
        })
        .collect::<Result<_>>()?;
    Ok(Specialisation { components })
}

/// Checks the square `γ ∘ ρJ ∘ f⁻¹Δ = Iρ ∘ δJ ∘ f⁻¹Δ` at every stored family,
/// with `ρ J` and `δ J` obtained from the basis-level data.
pub fn check_rho(f: &ContinuousMap, g: &ContinuousMap, p: &RhoPresentation) -> Result<Result<(), RhoFailure>> {
    let alpha = specialisation_from_rho(f, g, p)?;
    for (i, (a, rho)) in p.families.iter().zip(&p.components).enumerate() {
        let ja = f.dst.interior(a)?;
        let ga = a.reindex(&g.point_map);
        let iga: std::sync::Arc<InteriorValue> = f.src.interior(&ga)?;
        for x in 0..f.src.points() {
            let (fx, gx) = (f.point_map[x], g.point_map[x]);
            for (e, w) in ja.witnesses(fx).iter().enumerate() {
                // top: γ_A(class(b, φ, α_b(s))) at g x
                let t = alpha.components[w.object].apply(x, w.element);
                let (b1, map1, s1) = g.delta_triple(x, w.object, &w.map, t);
                let top = iga.class_of_map(x, b1, &map1, s1);
                // bottom: I(ρ_A)(δ_{JA}(class(b, ψ_φ, s)))
                let v = f.lifted(x, w.object, w.element);
                let map2: Vec<Vec<usize>> = v
                    .map
                    .components()
                    .iter()
                    .enumerate()
                    .map(|(y, row)| {
                        row.iter()
                            .map(|&u| rho.apply(y, ja.class(f.point_map[y], w.object, w.map_index, u)))
                            .collect()
                    })
                    .collect();
                let bottom = iga.class_of_map(x, v.object, &map2, v.element);
                if top != bottom || rho.apply(x, e) != w.map.apply(gx, t) {
                    return Ok(Err(RhoFailure { family: i, point: x, element: e }));
                }
            }
        }
    }
    Ok(Ok(()))
}
