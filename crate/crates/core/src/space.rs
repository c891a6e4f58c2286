//! Finite topological spaces and the ionads they generate.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::{FamilyMap, FinCategory, PointFamily};
use crate::ionad::{BasisFunctor, Ionad};

/// Subsets of the points are bitmasks, so spaces have at most 64 points.
pub const MAX_POINTS: usize = 64;

/// Largest point count [`lambda`] will scan all subsets of.
pub const LAMBDA_MAX_POINTS: usize = 20;

/// A finite topological space; `opens` is sorted ascending as integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinTopSpace {
    points: usize,
    opens: Vec<u64>,
}

fn full(points: usize) -> u64 {
    if points == 64 {
        u64::MAX
    } else {
        (1u64 << points) - 1
    }
}

impl FinTopSpace {
    pub fn new(points: usize, opens: impl IntoIterator<Item = u64>) -> Result<Self> {
        if points > MAX_POINTS {
            return Err(Error::InvalidSpace(format!("{points} points exceed {MAX_POINTS}")));
        }
        let mut opens: Vec<u64> = opens.into_iter().collect();
        opens.sort_unstable();
        opens.dedup();
        let all = full(points);
        if let Some(&u) = opens.iter().find(|&&u| u & !all != 0) {
            return Err(Error::InvalidSpace(format!("open {u:#b} mentions missing points")));
        }
        if opens.first() != Some(&0) {
            return Err(Error::InvalidSpace("the empty set is not open".into()));
        }
        if opens.binary_search(&all).is_err() {
            return Err(Error::InvalidSpace("the whole space is not open".into()));
        }
        for &u in &opens {
            for &v in &opens {
                if opens.binary_search(&(u & v)).is_err() {
                    return Err(Error::InvalidSpace(format!(
                        "intersection of {u:#b} and {v:#b} is not open"
                    )));
                }
                if opens.binary_search(&(u | v)).is_err() {
                    return Err(Error::InvalidSpace(format!(
                        "union of {u:#b} and {v:#b} is not open"
                    )));
                }
            }
        }
        Ok(FinTopSpace { points, opens })
    }

    pub fn discrete(points: usize) -> Self {
        Self::new(points, 0..=full(points)).expect("power set is a topology")
    }

    pub fn indiscrete(points: usize) -> Self {
        Self::new(points, [0, full(points)]).expect("indiscrete topology")
    }

    /// Two points with `{1}` open and `{0}` not.
    pub fn sierpinski() -> Self {
        Self::new(2, [0b00, 0b10, 0b11]).expect("Sierpiński topology")
    }

    /// The up-closed subsets of a preorder.
    pub fn alexandroff_of_preorder(points: usize, le: impl Fn(usize, usize) -> bool) -> Self {
        let opens = (0..=full(points)).filter(|&u| {
            (0..points).all(|x| {
                u & (1 << x) == 0 || (0..points).all(|y| !le(x, y) || u & (1 << y) != 0)
            })
        });
        Self::new(points, opens).expect("up-sets of a preorder form a topology")
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn opens(&self) -> &[u64] {
        &self.opens
    }

    pub fn full(&self) -> u64 {
        full(self.points)
    }

    pub fn is_open(&self, subset: u64) -> bool {
        self.opens.binary_search(&subset).is_ok()
    }

    /// Largest open contained in `subset`.
    pub fn interior(&self, subset: u64) -> u64 {
        self.opens
            .iter()
            .filter(|&&u| u & !subset == 0)
            .fold(0, |acc, &u| acc | u)
    }

    /// `x ≤ y` iff every open containing `x` contains `y`.
    pub fn specialisation_preorder(&self) -> Vec<Vec<bool>> {
        (0..self.points)
            .map(|x| {
                (0..self.points)
                    .map(|y| {
                        self.opens
                            .iter()
                            .all(|&u| u & (1 << x) == 0 || u & (1 << y) != 0)
                    })
                    .collect()
            })
            .collect()
    }

    pub fn is_continuous(&self, target: &FinTopSpace, point_map: &[usize]) -> bool {
        point_map.len() == self.points
            && point_map.iter().all(|&y| y < target.points)
            && target.opens.iter().all(|&v| self.is_open(preimage(point_map, v)))
    }

    /// The product topology; point `(x, y)` is `x * |T| + y`.
    pub fn product(&self, other: &FinTopSpace) -> Result<Self> {
        let points = self.points * other.points;
        if points > MAX_POINTS {
            return Err(Error::InvalidSpace(format!("product has {points} points")));
        }
        let mut rectangles = Vec::new();
        for &u in &self.opens {
            for &v in &other.opens {
                let mut r = 0u64;
                for x in 0..self.points {
                    for y in 0..other.points {
                        if u & (1 << x) != 0 && v & (1 << y) != 0 {
                            r |= 1 << (x * other.points + y);
                        }
                    }
                }
                rectangles.push(r);
            }
        }
        Self::new(points, union_closure(&rectangles))
    }

    /// The disjoint union; the points of summand `k` follow those of earlier summands.
    pub fn coproduct(spaces: &[FinTopSpace]) -> Result<Self> {
        let points: usize = spaces.iter().map(|s| s.points).sum();
        if points > MAX_POINTS {
            return Err(Error::InvalidSpace(format!("coproduct has {points} points")));
        }
        let mut opens = vec![0u64];
        let mut offset = 0;
        for s in spaces {
            opens = opens
                .iter()
                .flat_map(|&acc| s.opens.iter().map(move |&u| acc | (u << offset)))
                .collect();
            offset += s.points;
        }
        Self::new(points, opens)
    }
}

/// `f⁻¹(V)` as a bitmask.
pub fn preimage(point_map: &[usize], subset: u64) -> u64 {
    point_map
        .iter()
        .enumerate()
        .filter(|(_, &y)| subset & (1 << y) != 0)
        .fold(0, |acc, (x, _)| acc | (1 << x))
}

fn union_closure(generators: &[u64]) -> Vec<u64> {
    let mut set: std::collections::BTreeSet<u64> = generators.iter().copied().collect();
    set.insert(0);
    loop {
        let current: Vec<u64> = set.iter().copied().collect();
        let mut grew = false;
        for &a in &current {
            for &b in &current {
                grew |= set.insert(a | b);
            }
        }
        if !grew {
            return set.into_iter().collect();
        }
    }
}

/// Every topology on `points` labelled points, by brute force over families of
/// subsets. Ordered by the sorted list of opens.
pub fn enumerate_topologies(points: usize) -> Vec<FinTopSpace> {
    assert!(points <= 4, "brute-force topology enumeration is limited to 4 points");
    let all = full(points);
    let middle: Vec<u64> = (1..all).collect();
    let mut out = Vec::new();
    for choice in 0u64..(1 << middle.len()) {
        let mut opens = vec![0];
        opens.extend(
            middle
                .iter()
                .enumerate()
                .filter(|(i, _)| choice & (1 << i) != 0)
                .map(|(_, &u)| u),
        );
        if points > 0 {
            opens.push(all);
        }
        if let Ok(space) = FinTopSpace::new(points, opens) {
            out.push(space);
        }
    }
    out.sort();
    out
}

/// The ionad of a space, with the full lattice of opens as basis.
pub fn sigma(space: &FinTopSpace) -> Ionad {
    Ionad::new(spatial_basis(space, space.opens())).expect("spatial bases are flat")
}

/// The basis on a family of opens ordered by inclusion, with indicator values.
pub fn spatial_basis(space: &FinTopSpace, opens: &[u64]) -> BasisFunctor {
    let n = opens.len();
    let shape = Arc::new(FinCategory::from_preorder(n, |a, b| opens[a] & !opens[b] == 0));
    let values: Vec<PointFamily> = opens
        .iter()
        .map(|&u| PointFamily::indicator(space.points(), u))
        .collect();
    let actions = (0..shape.morphism_count())
        .map(|g| {
            let (s, d) = (&values[shape.src(g)], &values[shape.dst(g)]);
            let comps = s.fibers().iter().map(|&k| vec![0; k]).collect();
            FamilyMap::new(s.clone(), d.clone(), comps).expect("inclusion of indicators")
        })
        .collect();
    BasisFunctor::new(shape, space.points(), values, actions).expect("inclusions are functorial")
}

/// The space of opens of an ionad: fixpoints of the interior operator on subsets.
pub fn lambda(ionad: &Ionad) -> Result<FinTopSpace> {
    let points = ionad.points();
    if points > LAMBDA_MAX_POINTS {
        return Err(Error::budget(
            "subsets of points",
            1 << LAMBDA_MAX_POINTS,
            1u64.checked_shl(points as u32).unwrap_or(u64::MAX),
        ));
    }
    let mut opens = Vec::new();
    for subset in 0..=full(points) {
        if interior_operator(ionad, subset)? == subset {
            opens.push(subset);
        }
    }
    FinTopSpace::new(points, opens)
        .map_err(|e| Error::Internal(format!("fixpoints of the interior operator: {e}")))
}

/// `i(A)`: the support of `I` applied to the indicator of `A`.
pub fn interior_operator(ionad: &Ionad, subset: u64) -> Result<u64> {
    let ia = ionad.interior(&PointFamily::indicator(ionad.points(), subset))?;
    if let Some(x) = (0..ionad.points()).find(|&x| ia.carrier().size(x) > 1) {
        return Err(Error::Internal(format!(
            "interior of a subset has {} elements at point {x}",
            ia.carrier().size(x)
        )));
    }
    Ok(ia.carrier().support())
}

/// The Alexandroff ionad: basis `C^op → Set^{ob C}`, `M(c)(x) = C(c, x)`.
pub fn alexandroff(category: &FinCategory) -> Ionad {
    Ionad::new(alexandroff_basis(category)).expect("Alexandroff bases are flat")
}

pub fn alexandroff_basis(category: &FinCategory) -> BasisFunctor {
    let shape = Arc::new(category.opposite());
    let points = category.object_count();
    let values: Vec<PointFamily> = (0..points)
        .map(|c| PointFamily::new((0..points).map(|x| category.hom(c, x).len()).collect()))
        .collect();
    // the morphism h : c' → c of C is h : c → c' in C^op and acts by k ↦ k ∘ h
    let actions = (0..category.morphism_count())
        .map(|h| {
            let (c2, c) = (category.src(h), category.dst(h));
            let comps = (0..points)
                .map(|x| {
                    category
                        .hom(c, x)
                        .iter()
                        .map(|&k| category.hom_position(category.comp(k, h)))
                        .collect()
                })
                .collect();
            FamilyMap::new(values[c].clone(), values[c2].clone(), comps).expect("precomposition")
        })
        .collect();
    BasisFunctor::new(shape, points, values, actions).expect("precomposition is functorial")
}

/// A finite group, as a one-object category, acting on a space by homeomorphisms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupAction {
    group: Arc<FinCategory>,
    space: FinTopSpace,
    act: Vec<Vec<usize>>,
}

impl GroupAction {
    /// `act[g][x]` is `g·x`.
    pub fn new(group: Arc<FinCategory>, space: FinTopSpace, act: Vec<Vec<usize>>) -> Result<Self> {
        if group.object_count() != 1 {
            return Err(Error::InvalidAction("a group has exactly one object".into()));
        }
        let n = group.morphism_count();
        for g in 0..n {
            if !(0..n).any(|h| group.comp(g, h) == group.identity(0) && group.comp(h, g) == group.identity(0)) {
                return Err(Error::InvalidAction(format!("element {g} is not invertible")));
            }
        }
        if act.len() != n || act.iter().any(|row| row.len() != space.points() || row.iter().any(|&y| y >= space.points())) {
            return Err(Error::InvalidAction("action table has the wrong shape".into()));
        }
        if act[group.identity(0)].iter().enumerate().any(|(x, &y)| x != y) {
            return Err(Error::InvalidAction("the unit acts nontrivially".into()));
        }
        for g in 0..n {
            for h in 0..n {
                let gh = group.comp(g, h);
                if (0..space.points()).any(|x| act[g][act[h][x]] != act[gh][x]) {
                    return Err(Error::InvalidAction(format!(
                        "acting by {h} then {g} differs from acting by their product"
                    )));
                }
            }
            if space.opens().iter().any(|&u| !space.is_open(image(&act[g], u))) {
                return Err(Error::InvalidAction(format!("element {g} does not preserve opens")));
            }
        }
        Ok(GroupAction { group, space, act })
    }

    pub fn group(&self) -> &Arc<FinCategory> {
        &self.group
    }

    pub fn space(&self) -> &FinTopSpace {
        &self.space
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.act[g][x]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.act
    }

    /// `g(U)`.
    pub fn translate(&self, g: usize, subset: u64) -> u64 {
        image(&self.act[g], subset)
    }
}

fn image(map: &[usize], subset: u64) -> u64 {
    map.iter()
        .enumerate()
        .filter(|(x, _)| subset & (1 << x) != 0)
        .fold(0, |acc, (_, &y)| acc | (1 << y))
}

/// A morphism `U → V` of the equivariant basis shape: `g` with `g(U) ⊆ V`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Translation {
    pub src: usize,
    pub dst: usize,
    pub element: usize,
}

/// The shape of the equivariant basis, with its morphisms spelled out.
pub fn equivariant_shape(action: &GroupAction) -> (FinCategory, Vec<Translation>) {
    let opens = action.space().opens();
    let group = action.group();
    let mut morphisms = Vec::new();
    for u in 0..opens.len() {
        for v in 0..opens.len() {
            for g in 0..group.morphism_count() {
                if action.translate(g, opens[u]) & !opens[v] == 0 {
                    morphisms.push(Translation { src: u, dst: v, element: g });
                }
            }
        }
    }
    let index = |t: &Translation| morphisms.binary_search(t).expect("listed translation");
    let identity = (0..opens.len())
        .map(|u| index(&Translation { src: u, dst: u, element: group.identity(0) }))
        .collect();
    let cat = FinCategory::new_unchecked(
        opens.len(),
        morphisms.iter().map(|t| (t.src, t.dst)).collect(),
        identity,
        |second, first| {
            let (a, b) = (morphisms[first], morphisms[second]);
            (a.dst == b.src).then(|| {
                index(&Translation {
                    src: a.src,
                    dst: b.dst,
                    element: group.comp(b.element, a.element),
                })
            })
        },
    );
    (cat, morphisms)
}

/// The equivariant ionad: `M(U)(x) = {h : h·x ∈ U}`, with `(U, V, g)` acting by `h ↦ g h`.
pub fn equivariant(action: &GroupAction) -> Ionad {
    Ionad::new(equivariant_basis(action)).expect("equivariant bases are flat")
}

pub fn equivariant_basis(action: &GroupAction) -> BasisFunctor {
    let (cat, morphisms) = equivariant_shape(action);
    let opens = action.space().opens();
    let points = action.space().points();
    let group = action.group();
    let members = |u: u64, x: usize| -> Vec<usize> {
        (0..group.morphism_count())
            .filter(|&h| u & (1 << action.act(h, x)) != 0)
            .collect()
    };
    let values: Vec<PointFamily> = opens
        .iter()
        .map(|&u| PointFamily::new((0..points).map(|x| members(u, x).len()).collect()))
        .collect();
    let actions = morphisms
        .iter()
        .map(|t| {
            let comps = (0..points)
                .map(|x| {
                    let target = members(opens[t.dst], x);
                    members(opens[t.src], x)
                        .iter()
                        .map(|&h| {
                            let gh = group.comp(t.element, h);
                            target.binary_search(&gh).expect("g h x lies in V")
                        })
                        .collect()
                })
                .collect();
            FamilyMap::new(values[t.src].clone(), values[t.dst].clone(), comps)
                .expect("translation action")
        })
        .collect();
    BasisFunctor::new(Arc::new(cat), points, values, actions).expect("translations compose")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(FinTopSpace::new(2, [0b00, 0b01, 0b10, 0b11]).is_ok());
        assert!(matches!(FinTopSpace::new(2, [0b01, 0b11]), Err(Error::InvalidSpace(_))));
        assert!(matches!(
            FinTopSpace::new(3, [0b000, 0b011, 0b110, 0b111]),
            Err(Error::InvalidSpace(_))
        ));
    }

    #[test]
    fn specialisation_examples() {
        let d = FinTopSpace::discrete(3).specialisation_preorder();
        for x in 0..3 {
            for y in 0..3 {
                assert_eq!(d[x][y], x == y);
            }
        }
        let s = FinTopSpace::sierpinski().specialisation_preorder();
        assert!(s[0][1] && !s[1][0]);
        let i = FinTopSpace::indiscrete(2).specialisation_preorder();
        assert!(i.iter().flatten().all(|&b| b));
    }

    #[test]
    fn topology_counts() {
        let counts: Vec<_> = (0..=4).map(|n| enumerate_topologies(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 4, 29, 355]);
    }

    #[test]
    fn sigma_and_lambda_on_small_spaces() {
        let one = FinTopSpace::discrete(1);
        assert_eq!(sigma(&one).basis().object_count(), 2);
        let s = FinTopSpace::sierpinski();
        assert_eq!(lambda(&sigma(&s)).unwrap(), s);
        let empty = FinTopSpace::discrete(0);
        assert_eq!(lambda(&sigma(&empty)).unwrap().opens(), &[0]);
    }

    #[test]
    fn alexandroff_of_arrow_is_sierpinski() {
        let a = alexandroff(&FinCategory::arrow());
        // up-sets of 0 ≤ 1
        assert_eq!(lambda(&a).unwrap(), FinTopSpace::sierpinski());
    }

    #[test]
    fn alexandroff_of_a_group() {
        let a = alexandroff(&FinCategory::cyclic_group(2));
        assert_eq!(a.points(), 1);
        assert_eq!(a.basis().value(0).fibers(), &[2]);
    }

    #[test]
    fn equivariant_swap() {
        let z2 = Arc::new(FinCategory::cyclic_group(2));
        let action = GroupAction::new(z2, FinTopSpace::discrete(2), vec![vec![0, 1], vec![1, 0]]).unwrap();
        let ion = equivariant(&action);
        // M({0})(0) = {e}, M({0})(1) = {s}; M(X)(x) = G
        let m = ion.basis();
        let idx = |u: u64| action.space().opens().binary_search(&u).unwrap();
        assert_eq!(m.value(idx(0b01)).fibers(), &[1, 1]);
        assert_eq!(m.value(idx(0b11)).fibers(), &[2, 2]);
    }

    #[test]
    fn non_homeomorphic_action_is_rejected() {
        let z2 = Arc::new(FinCategory::cyclic_group(2));
        let err = GroupAction::new(z2, FinTopSpace::sierpinski(), vec![vec![0, 1], vec![1, 0]]);
        assert!(matches!(err, Err(Error::InvalidAction(_))));
    }

    #[test]
    fn product_and_coproduct_topologies() {
        let s = FinTopSpace::sierpinski();
        let p = s.product(&s).unwrap();
        assert_eq!(p.points(), 4);
        // up-sets of the product order on 2 × 2: 6
        assert_eq!(p.opens().len(), 6);
        let c = FinTopSpace::coproduct(&[s.clone(), FinTopSpace::discrete(1)]).unwrap();
        assert_eq!(c.opens().len(), 6);
    }
}
