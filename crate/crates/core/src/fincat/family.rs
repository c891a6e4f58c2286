use crate::error::{Error, Result};

use super::union_find::UnionFind;

/// A finite set `{0, .., size - 1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FinSet(pub usize);

impl FinSet {
    pub fn size(self) -> usize {
        self.0
    }

    pub fn contains(self, element: usize) -> bool {
        element < self.0
    }
}

/// An object of `Set^X`: one finite fiber per point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PointFamily {
    fibers: Vec<usize>,
}

impl PointFamily {
    pub fn new(fibers: Vec<usize>) -> Self {
        PointFamily { fibers }
    }

    /// Fiber size 1 everywhere.
    pub fn terminal(points: usize) -> Self {
        Self::new(vec![1; points])
    }

    /// Fiber size 0 everywhere.
    pub fn initial(points: usize) -> Self {
        Self::new(vec![0; points])
    }

    /// The 0/1 family of a subset given as a bitmask.
    pub fn indicator(points: usize, subset: u64) -> Self {
        Self::new((0..points).map(|x| ((subset >> x) & 1) as usize).collect())
    }

    pub fn points(&self) -> usize {
        self.fibers.len()
    }

    pub fn fiber(&self, x: usize) -> FinSet {
        FinSet(self.fibers[x])
    }

    pub fn size(&self, x: usize) -> usize {
        self.fibers[x]
    }

    pub fn fibers(&self) -> &[usize] {
        &self.fibers
    }

    pub fn total(&self) -> usize {
        self.fibers.iter().sum()
    }

    /// Points with a nonempty fiber, as a bitmask (points < 64).
    pub fn support(&self) -> u64 {
        self.fibers
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > 0)
            .fold(0, |acc, (x, _)| acc | (1 << x))
    }

    /// Pullback along a point map `f : X' → X`: the fiber at `x'` is the fiber at `f(x')`.
    pub fn reindex(&self, point_map: &[usize]) -> Self {
        Self::new(point_map.iter().map(|&y| self.fibers[y]).collect())
    }

    /// Restriction to the points `offset .. offset + len`.
    pub fn slice(&self, offset: usize, len: usize) -> Self {
        Self::new(self.fibers[offset..offset + len].to_vec())
    }

    pub(crate) fn check_points(&self, other: &PointFamily) -> Result<()> {
        if self.points() != other.points() {
            return Err(Error::PointMismatch {
                expected: self.points(),
                found: other.points(),
            });
        }
        Ok(())
    }
}

/// A morphism of `Set^X`: one function per point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyMap {
    src: PointFamily,
    dst: PointFamily,
    components: Vec<Vec<usize>>,
}

impl FamilyMap {
    pub fn new(src: PointFamily, dst: PointFamily, components: Vec<Vec<usize>>) -> Result<Self> {
        src.check_points(&dst)?;
        if components.len() != src.points() {
            return Err(Error::InvalidMap(format!(
                "{} components for {} points",
                components.len(),
                src.points()
            )));
        }
        for (x, comp) in components.iter().enumerate() {
            if comp.len() != src.size(x) {
                return Err(Error::InvalidMap(format!(
                    "component at point {x} has length {}, fiber has {}",
                    comp.len(),
                    src.size(x)
                )));
            }
            if let Some(e) = comp.iter().position(|&v| v >= dst.size(x)) {
                return Err(Error::InvalidMap(format!(
                    "component at point {x} sends element {e} outside the target fiber"
                )));
            }
        }
        Ok(FamilyMap {
            src,
            dst,
            components,
        })
    }

    pub(crate) fn new_unchecked(
        src: PointFamily,
        dst: PointFamily,
        components: Vec<Vec<usize>>,
    ) -> Self {
        debug_assert!(Self::new(src.clone(), dst.clone(), components.clone()).is_ok());
        FamilyMap {
            src,
            dst,
            components,
        }
    }

    pub fn identity(family: &PointFamily) -> Self {
        let components = family.fibers().iter().map(|&n| (0..n).collect()).collect();
        Self::new_unchecked(family.clone(), family.clone(), components)
    }

    /// The unique map into the terminal family.
    pub fn to_terminal(family: &PointFamily) -> Self {
        let components = family.fibers().iter().map(|&n| vec![0; n]).collect();
        Self::new_unchecked(family.clone(), PointFamily::terminal(family.points()), components)
    }

    pub fn src(&self) -> &PointFamily {
        &self.src
    }

    pub fn dst(&self) -> &PointFamily {
        &self.dst
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.components
    }

    pub fn component(&self, x: usize) -> &[usize] {
        &self.components[x]
    }

    pub fn apply(&self, x: usize, element: usize) -> usize {
        self.components[x][element]
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &FamilyMap) -> Result<FamilyMap> {
        if first.dst != self.src {
            return Err(Error::InvalidMap(
                "composite of maps whose middle families differ".into(),
            ));
        }
        let components = first
            .components
            .iter()
            .enumerate()
            .map(|(x, comp)| comp.iter().map(|&e| self.components[x][e]).collect())
            .collect();
        Ok(Self::new_unchecked(
            first.src.clone(),
            self.dst.clone(),
            components,
        ))
    }

    pub fn is_injective(&self) -> bool {
        self.components.iter().enumerate().all(|(x, comp)| {
            let mut seen = vec![false; self.dst.size(x)];
            comp.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
        })
    }

    pub fn is_surjective(&self) -> bool {
        self.components.iter().enumerate().all(|(x, comp)| {
            let mut seen = vec![false; self.dst.size(x)];
            for &v in comp {
                seen[v] = true;
            }
            seen.into_iter().all(|b| b)
        })
    }

    pub fn is_bijective(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    pub fn inverse(&self) -> Option<FamilyMap> {
        if !self.is_bijective() {
            return None;
        }
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(x, comp)| {
                let mut inv = vec![0; self.dst.size(x)];
                for (e, &v) in comp.iter().enumerate() {
                    inv[v] = e;
                }
                inv
            })
            .collect();
        Some(Self::new_unchecked(
            self.dst.clone(),
            self.src.clone(),
            components,
        ))
    }

    /// Pullback along a point map, as for [`PointFamily::reindex`].
    pub fn reindex(&self, point_map: &[usize]) -> FamilyMap {
        Self::new_unchecked(
            self.src.reindex(point_map),
            self.dst.reindex(point_map),
            point_map
                .iter()
                .map(|&y| self.components[y].clone())
                .collect(),
        )
    }
}

/// `Hom(A, B)` in `Set^X`, enumerated as a mixed-radix number.
///
/// The digit for `(x, e)` is the image of element `e` at point `x`; point 0,
/// element 0 is the most significant digit, so index order is lexicographic
/// order of component tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomSpace {
    src: PointFamily,
    dst: PointFamily,
    count: Option<u64>,
}

impl HomSpace {
    pub fn new(src: &PointFamily, dst: &PointFamily) -> Result<Self> {
        src.check_points(dst)?;
        let mut count: Option<u64> = Some(1);
        let mut empty = false;
        for x in 0..src.points() {
            for _ in 0..src.size(x) {
                let radix = dst.size(x) as u64;
                if radix == 0 {
                    empty = true;
                }
                count = count.and_then(|c| c.checked_mul(radix));
            }
        }
        if empty {
            count = Some(0);
        }
        Ok(HomSpace {
            src: src.clone(),
            dst: dst.clone(),
            count,
        })
    }

    /// Number of maps, or `None` if it does not fit in a `u64`.
    pub fn count(&self) -> Option<u64> {
        self.count
    }

    pub fn src(&self) -> &PointFamily {
        &self.src
    }

    pub fn dst(&self) -> &PointFamily {
        &self.dst
    }

    pub fn decode(&self, mut index: u64) -> Vec<Vec<usize>> {
        let mut components: Vec<Vec<usize>> =
            self.src.fibers().iter().map(|&n| vec![0; n]).collect();
        for x in (0..self.src.points()).rev() {
            let radix = self.dst.size(x) as u64;
            for e in (0..self.src.size(x)).rev() {
                components[x][e] = (index % radix) as usize;
                index /= radix;
            }
        }
        components
    }

    pub fn map(&self, index: u64) -> FamilyMap {
        FamilyMap::new_unchecked(self.src.clone(), self.dst.clone(), self.decode(index))
    }

    pub fn encode(&self, components: &[Vec<usize>]) -> u64 {
        let mut index = 0u64;
        for (x, comp) in components.iter().enumerate() {
            let radix = self.dst.size(x) as u64;
            for &v in comp {
                index = index * radix + v as u64;
            }
        }
        index
    }

    /// All maps in index order. Panics if the count overflows.
    pub fn iter(&self) -> impl Iterator<Item = FamilyMap> + '_ {
        let count = self.count.expect("hom-set too large to enumerate");
        (0..count).map(move |i| self.map(i))
    }
}

/// `Hom(A, B)` as a finite set.
pub fn hom_family(a: &PointFamily, b: &PointFamily) -> Result<FinSet> {
    let hom = HomSpace::new(a, b)?;
    match hom.count() {
        Some(n) if n <= usize::MAX as u64 => Ok(FinSet(n as usize)),
        _ => Err(Error::budget("hom-set", u64::MAX, u64::MAX)),
    }
}

/// An edge of a finite diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramEdge {
    pub from: usize,
    pub to: usize,
    pub map: FamilyMap,
}

/// A finite diagram in `Set^X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyDiagram {
    points: usize,
    nodes: Vec<PointFamily>,
    edges: Vec<DiagramEdge>,
}

impl FamilyDiagram {
    pub fn new(points: usize, nodes: Vec<PointFamily>, edges: Vec<DiagramEdge>) -> Result<Self> {
        for node in &nodes {
            if node.points() != points {
                return Err(Error::PointMismatch {
                    expected: points,
                    found: node.points(),
                });
            }
        }
        for (i, edge) in edges.iter().enumerate() {
            if edge.from >= nodes.len() || edge.to >= nodes.len() {
                return Err(Error::InvalidMap(format!("edge {i} refers to a missing node")));
            }
            if edge.map.src() != &nodes[edge.from] || edge.map.dst() != &nodes[edge.to] {
                return Err(Error::InvalidMap(format!(
                    "edge {i} does not match its endpoint families"
                )));
            }
        }
        Ok(FamilyDiagram {
            points,
            nodes,
            edges,
        })
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn nodes(&self) -> &[PointFamily] {
        &self.nodes
    }

    pub fn edges(&self) -> &[DiagramEdge] {
        &self.edges
    }

    fn edges_at(&self, x: usize) -> Vec<(usize, usize, &[usize])> {
        self.edges
            .iter()
            .map(|e| (e.from, e.to, e.map.component(x)))
            .collect()
    }
}

/// A limit cone; `tuples[x][i]` lists, for element `i` of the apex fiber at
/// `x`, the chosen element of every node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    pub apex: PointFamily,
    pub legs: Vec<FamilyMap>,
    pub tuples: Vec<Vec<Vec<usize>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocone {
    pub apex: PointFamily,
    pub legs: Vec<FamilyMap>,
}

/// Matching tuples of a diagram of finite sets, in lexicographic order.
pub fn set_limit(sizes: &[usize], edges: &[(usize, usize, &[usize])]) -> Vec<Vec<usize>> {
    // An edge is checked as soon as both of its endpoints are chosen.
    let mut due: Vec<Vec<usize>> = vec![Vec::new(); sizes.len()];
    for (i, &(from, to, _)) in edges.iter().enumerate() {
        due[from.max(to)].push(i);
    }
    let mut out = Vec::new();
    let mut tuple = vec![0; sizes.len()];
    fn go(
        depth: usize,
        sizes: &[usize],
        edges: &[(usize, usize, &[usize])],
        due: &[Vec<usize>],
        tuple: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if depth == sizes.len() {
            out.push(tuple.clone());
            return;
        }
        for v in 0..sizes[depth] {
            tuple[depth] = v;
            let ok = due[depth].iter().all(|&i| {
                let (from, to, f) = edges[i];
                f[tuple[from]] == tuple[to]
            });
            if ok {
                go(depth + 1, sizes, edges, due, tuple, out);
            }
        }
    }
    go(0, sizes, edges, &due, &mut tuple, &mut out);
    out
}

/// Colimit of a diagram of finite sets: the number of classes and, per node,
/// the injection into the classes. Classes are ordered by least member of the
/// disjoint union (nodes in order, elements in order).
pub fn set_colimit(sizes: &[usize], edges: &[(usize, usize, &[usize])]) -> (usize, Vec<Vec<usize>>) {
    let mut offsets = Vec::with_capacity(sizes.len());
    let mut total = 0;
    for &n in sizes {
        offsets.push(total);
        total += n;
    }
    let mut uf = UnionFind::new(total);
    for &(from, to, f) in edges {
        for (e, &v) in f.iter().enumerate() {
            uf.union(offsets[from] + e, offsets[to] + v);
        }
    }
    let (class_of, reps) = uf.classes();
    let injections = sizes
        .iter()
        .enumerate()
        .map(|(i, &n)| (0..n).map(|e| class_of[offsets[i] + e]).collect())
        .collect();
    (reps.len(), injections)
}

/// The limit of a finite diagram, computed pointwise.
pub fn finite_limit(diagram: &FamilyDiagram) -> Cone {
    let points = diagram.points();
    let mut tuples = Vec::with_capacity(points);
    for x in 0..points {
        let sizes: Vec<usize> = diagram.nodes().iter().map(|n| n.size(x)).collect();
        tuples.push(set_limit(&sizes, &diagram.edges_at(x)));
    }
    let apex = PointFamily::new(tuples.iter().map(Vec::len).collect());
    let legs = diagram
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, node)| {
            let components = tuples
                .iter()
                .map(|ts| ts.iter().map(|t| t[i]).collect())
                .collect();
            FamilyMap::new_unchecked(apex.clone(), node.clone(), components)
        })
        .collect();
    Cone { apex, legs, tuples }
}

/// The colimit of a finite diagram, computed pointwise.
pub fn finite_colimit(diagram: &FamilyDiagram) -> Cocone {
    let points = diagram.points();
    let mut apex = Vec::with_capacity(points);
    let mut per_point = Vec::with_capacity(points);
    for x in 0..points {
        let sizes: Vec<usize> = diagram.nodes().iter().map(|n| n.size(x)).collect();
        let (count, injections) = set_colimit(&sizes, &diagram.edges_at(x));
        apex.push(count);
        per_point.push(injections);
    }
    let apex = PointFamily::new(apex);
    let legs = diagram
        .nodes()
        .iter()
        .enumerate()
        .map(|(i, node)| {
            let components = per_point.iter().map(|inj| inj[i].clone()).collect();
            FamilyMap::new_unchecked(node.clone(), apex.clone(), components)
        })
        .collect();
    Cocone { apex, legs }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(f: &[usize]) -> PointFamily {
        PointFamily::new(f.to_vec())
    }

    #[test]
    fn hom_family_counts() {
        let a = fam(&[3, 1]);
        assert_eq!(hom_family(&a, &PointFamily::terminal(2)).unwrap(), FinSet(1));
        assert_eq!(hom_family(&PointFamily::terminal(2), &fam(&[2, 3])).unwrap(), FinSet(6));
        let (a, b) = (fam(&[1, 2]), fam(&[2, 2]));
        // brute force: every choice of image for the three source elements
        let mut brute = 0;
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let comps = vec![vec![i], vec![j, k]];
                    if FamilyMap::new(a.clone(), b.clone(), comps).is_ok() {
                        brute += 1;
                    }
                }
            }
        }
        assert_eq!(hom_family(&a, &b).unwrap(), FinSet(brute));
        assert_eq!(brute, 8);
    }

    #[test]
    fn hom_space_round_trip_and_order() {
        let hom = HomSpace::new(&fam(&[2, 1]), &fam(&[3, 2])).unwrap();
        assert_eq!(hom.count(), Some(18));
        let all: Vec<_> = hom.iter().collect();
        for (i, map) in all.iter().enumerate() {
            assert_eq!(hom.encode(map.components()), i as u64);
        }
        assert!(all.windows(2).all(|w| w[0].components() < w[1].components()));
    }

    #[test]
    fn empty_source_fiber_has_one_map_empty_target_none() {
        assert_eq!(hom_family(&fam(&[0]), &fam(&[0])).unwrap(), FinSet(1));
        assert_eq!(hom_family(&fam(&[1]), &fam(&[0])).unwrap(), FinSet(0));
    }

    #[test]
    fn mismatched_points_are_rejected() {
        assert!(matches!(
            hom_family(&fam(&[1]), &fam(&[1, 1])),
            Err(Error::PointMismatch { .. })
        ));
    }

    #[test]
    fn limit_examples() {
        let empty = FamilyDiagram::new(2, vec![], vec![]).unwrap();
        assert_eq!(finite_limit(&empty).apex, PointFamily::terminal(2));

        let product = FamilyDiagram::new(1, vec![fam(&[2]), fam(&[3])], vec![]).unwrap();
        assert_eq!(finite_limit(&product).apex, fam(&[6]));

        let (a, b) = (fam(&[5]), fam(&[4]));
        let f = FamilyMap::new(a.clone(), b.clone(), vec![vec![0, 1, 2, 3, 0]]).unwrap();
        let g = FamilyMap::new(a.clone(), b.clone(), vec![vec![0, 2, 2, 1, 3]]).unwrap();
        let eq = FamilyDiagram::new(
            1,
            vec![a, b],
            vec![
                DiagramEdge { from: 0, to: 1, map: f },
                DiagramEdge { from: 0, to: 1, map: g },
            ],
        )
        .unwrap();
        let cone = finite_limit(&eq);
        assert_eq!(cone.apex, fam(&[2]));
        assert_eq!(cone.legs[0].component(0), &[0, 2]);
    }

    #[test]
    fn colimit_examples() {
        let single = FamilyDiagram::new(1, vec![fam(&[3])], vec![]).unwrap();
        let cocone = finite_colimit(&single);
        assert_eq!(cocone.apex, fam(&[3]));
        assert_eq!(cocone.legs[0], FamilyMap::identity(&fam(&[3])));

        let sum = FamilyDiagram::new(1, vec![fam(&[2]), fam(&[3])], vec![]).unwrap();
        assert_eq!(finite_colimit(&sum).apex, fam(&[5]));

        let (one, two) = (fam(&[1]), fam(&[2]));
        let f = FamilyMap::new(one.clone(), two.clone(), vec![vec![0]]).unwrap();
        let g = FamilyMap::new(one.clone(), two.clone(), vec![vec![1]]).unwrap();
        let coeq = FamilyDiagram::new(
            1,
            vec![one, two],
            vec![
                DiagramEdge { from: 0, to: 1, map: f },
                DiagramEdge { from: 0, to: 1, map: g },
            ],
        )
        .unwrap();
        assert_eq!(finite_colimit(&coeq).apex, fam(&[1]));
    }

    #[test]
    fn composition_and_inverse() {
        let a = fam(&[2, 1]);
        let swap = FamilyMap::new(a.clone(), a.clone(), vec![vec![1, 0], vec![0]]).unwrap();
        assert_eq!(swap.after(&swap).unwrap(), FamilyMap::identity(&a));
        assert_eq!(swap.inverse().unwrap(), swap);
        let collapse = FamilyMap::to_terminal(&a);
        assert!(collapse.inverse().is_none());
        assert!(collapse.is_surjective());
    }
}
