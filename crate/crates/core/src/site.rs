//! The site generated by a basis, sheaves on it, and the comparison between
//! presheaves on the basis shape and coalgebras.

use std::fmt;
use std::sync::Arc;

use crate::error::{Budget, Error, Result};
use crate::fincat::{FamilyMap, FinCategory, HomSpace, PointFamily, SetFunctor, Variance};
use crate::ionad::{tensor_presheaf, BasisFunctor, Coalgebra, Ionad};

/// A sieve on `object`: incoming morphisms closed under precomposition.
/// `members` is sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sieve {
    pub object: usize,
    pub members: Vec<usize>,
}

impl Sieve {
    pub fn new(cat: &FinCategory, object: usize, mut members: Vec<usize>) -> Result<Self> {
        members.sort_unstable();
        members.dedup();
        if let Some(&g) = members.iter().find(|&&g| g >= cat.morphism_count() || cat.dst(g) != object) {
            return Err(Error::InvalidMap(format!("morphism {g} does not end at object {object}")));
        }
        let sieve = Sieve { object, members };
        if let Some((g, h)) = sieve.closure_defect(cat) {
            return Err(Error::InvalidMap(format!(
                "sieve contains {g} but not its composite with {h}"
            )));
        }
        Ok(sieve)
    }

    /// The sieve generated by `generators`, all ending at `object`.
    pub fn generated(cat: &FinCategory, object: usize, generators: &[usize]) -> Result<Self> {
        let mut members = Vec::new();
        for &g in generators {
            if g >= cat.morphism_count() || cat.dst(g) != object {
                return Err(Error::InvalidMap(format!("morphism {g} does not end at object {object}")));
            }
            members.extend(cat.incoming(cat.src(g)).into_iter().map(|h| cat.comp(g, h)));
        }
        Sieve::new(cat, object, members)
    }

    pub fn maximal(cat: &FinCategory, object: usize) -> Self {
        Sieve { object, members: cat.incoming(object) }
    }

    pub fn contains(&self, g: usize) -> bool {
        self.members.binary_search(&g).is_ok()
    }

    /// `h*(S) = {k : h ∘ k ∈ S}`, a sieve on the source of `h`.
    pub fn pullback(&self, cat: &FinCategory, h: usize) -> Sieve {
        let members = cat
            .incoming(cat.src(h))
            .into_iter()
            .filter(|&k| self.contains(cat.comp(h, k)))
            .collect();
        Sieve { object: cat.src(h), members }
    }

    fn closure_defect(&self, cat: &FinCategory) -> Option<(usize, usize)> {
        self.members.iter().find_map(|&g| {
            cat.incoming(cat.src(g))
                .into_iter()
                .find(|&h| !self.contains(cat.comp(g, h)))
                .map(|h| (g, h))
        })
    }
}

/// Every sieve on `object`, ordered by the bitmask of members over the
/// incoming morphisms in increasing index order.
pub fn all_sieves(cat: &FinCategory, object: usize, budget: &Budget) -> Result<Vec<Sieve>> {
    let incoming = cat.incoming(object);
    if incoming.len() > budget.sieve_arrows {
        return Err(Error::budget(
            "sieves",
            budget.sieve_arrows as u64,
            incoming.len() as u64,
        ));
    }
    let mut out = Vec::new();
    for mask in 0u64..(1 << incoming.len()) {
        let members: Vec<usize> = incoming
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &g)| g)
            .collect();
        let sieve = Sieve { object, members };
        if sieve.closure_defect(cat).is_none() {
            out.push(sieve);
        }
    }
    Ok(out)
}

/// Whether the images of the sieve's members cover `M(u)` at every point.
pub fn jointly_epi(m: &BasisFunctor, sieve: &Sieve) -> bool {
    (0..m.points()).all(|x| {
        let mut hit = vec![false; m.value(sieve.object).size(x)];
        for &g in &sieve.members {
            for &t in m.action(g).component(x) {
                hit[t] = true;
            }
        }
        hit.into_iter().all(|h| h)
    })
}

/// The topology whose covering sieves are the jointly epimorphic ones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedTopology {
    basis: Arc<BasisFunctor>,
    sieves: Vec<Vec<Sieve>>,
    covers: Vec<Vec<Sieve>>,
}

impl GeneratedTopology {
    pub fn basis(&self) -> &Arc<BasisFunctor> {
        &self.basis
    }

    /// All sieves on `object`.
    pub fn sieves(&self, object: usize) -> &[Sieve] {
        &self.sieves[object]
    }

    /// The covering sieves on `object`.
    pub fn covers(&self, object: usize) -> &[Sieve] {
        &self.covers[object]
    }

    pub fn is_covering(&self, sieve: &Sieve) -> bool {
        self.covers[sieve.object].binary_search(sieve).is_ok()
    }
}

/// Enumerates the sieves on every object, marks the covering ones and checks
/// the topology axioms.
pub fn generate_topology(m: Arc<BasisFunctor>, budget: &Budget) -> Result<GeneratedTopology> {
    m.flatness_check().map_err(Error::NotFlat)?;
    let cat = m.shape().clone();
    let mut sieves = Vec::with_capacity(cat.object_count());
    let mut covers = Vec::with_capacity(cat.object_count());
    for u in 0..cat.object_count() {
        let mut all = all_sieves(&cat, u, budget)?;
        all.sort();
        let cov: Vec<Sieve> = all.iter().filter(|s| jointly_epi(&m, s)).cloned().collect();
        sieves.push(all);
        covers.push(cov);
    }
    let topology = GeneratedTopology { basis: m, sieves, covers };
    check_axioms(&cat, &topology)?;
    Ok(topology)
}

fn check_axioms(cat: &FinCategory, t: &GeneratedTopology) -> Result<()> {
    for u in 0..cat.object_count() {
        if !t.is_covering(&Sieve::maximal(cat, u)) {
            return Err(Error::Internal(format!("maximal sieve on {u} does not cover")));
        }
        for s in t.covers(u) {
            for h in cat.incoming(u) {
                if !t.is_covering(&s.pullback(cat, h)) {
                    return Err(Error::Internal(format!(
                        "pullback of covering sieve {:?} on {u} along {h} does not cover",
                        s.members
                    )));
                }
            }
        }
        for r in t.sieves(u).iter().filter(|r| !t.is_covering(r)) {
            for s in t.covers(u) {
                if s.members.iter().all(|&h| t.is_covering(&r.pullback(cat, h))) {
                    return Err(Error::Internal(format!(
                        "sieve {:?} on {u} is locally covering but does not cover",
                        r.members
                    )));
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SheafDefect {
    NotSeparated,
    NoAmalgamation,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SheafFailure {
    pub sieve: Sieve,
    pub defect: SheafDefect,
}

impl fmt::Display for SheafFailure {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.defect {
            SheafDefect::NotSeparated => "not separated",
            SheafDefect::NoAmalgamation => "no amalgamation",
        };
        write!(
            out,
            "{what} for the covering sieve {:?} on object {}",
            self.sieve.members, self.sieve.object
        )
    }
}

/// Matching families for `p` on `sieve`: one element of `P(src g)` per member
/// `g`, compatible with precomposition. Each family lists elements in member order.
pub fn matching_families(cat: &FinCategory, p: &SetFunctor, sieve: &Sieve) -> Vec<Vec<usize>> {
    let members = &sieve.members;
    // constraints (i, k, j): P(k)(x_i) = x_j where members[j] = members[i] ∘ k
    let mut checks: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); members.len()];
    for (i, &g) in members.iter().enumerate() {
        for k in cat.incoming(cat.src(g)) {
            let j = members.binary_search(&cat.comp(g, k)).expect("sieves are closed");
            checks[i.max(j)].push((i, k, j));
        }
    }
    let sizes: Vec<usize> = members.iter().map(|&g| p.values()[cat.src(g)]).collect();
    let mut out = Vec::new();
    let mut current = vec![0usize; members.len()];
    fn extend(
        depth: usize,
        sizes: &[usize],
        checks: &[Vec<(usize, usize, usize)>],
        p: &SetFunctor,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if depth == sizes.len() {
            out.push(current.clone());
            return;
        }
        for v in 0..sizes[depth] {
            current[depth] = v;
            if checks[depth].iter().all(|&(i, k, j)| p.action(k)[current[i]] == current[j]) {
                extend(depth + 1, sizes, checks, p, current, out);
            }
        }
    }
    extend(0, &sizes, &checks, p, &mut current, &mut out);
    out
}

/// Checks the sheaf condition for every covering sieve; reports the first failure.
pub fn sheaf_check(t: &GeneratedTopology, p: &SetFunctor) -> Result<Result<(), SheafFailure>> {
    let cat = t.basis.shape();
    if p.shape() != cat || p.variance() != Variance::Contravariant {
        return Err(Error::ShapeMismatch("sheaf check needs a presheaf on the basis shape".into()));
    }
    for u in 0..cat.object_count() {
        for s in t.covers(u) {
            let families = matching_families(cat, p, s);
            let mut hit = vec![false; families.len()];
            for e in 0..p.values()[u] {
                let restricted: Vec<usize> = s.members.iter().map(|&g| p.action(g)[e]).collect();
                let i = families.binary_search(&restricted).expect("restrictions match");
                if hit[i] {
                    return Ok(Err(SheafFailure { sieve: s.clone(), defect: SheafDefect::NotSeparated }));
                }
                hit[i] = true;
            }
            if hit.iter().any(|&h| !h) {
                return Ok(Err(SheafFailure { sieve: s.clone(), defect: SheafDefect::NoAmalgamation }));
            }
        }
    }
    Ok(Ok(()))
}

impl Ionad {
    /// The coalgebra `(M b, δ_b)` with `δ_b(s) = class(b, id, s)`.
    pub fn lift_basis(&self, b: usize) -> Result<Coalgebra> {
        let m = self.basis();
        let carrier = m.value(b).clone();
        let interior = self.interior(&carrier)?;
        let id = interior.hom(b).encode(FamilyMap::identity(&carrier).components());
        let components = (0..m.points())
            .map(|x| (0..carrier.size(x)).map(|s| interior.class(x, b, id, s)).collect())
            .collect();
        let structure = FamilyMap::new(carrier, interior.carrier().clone(), components)?;
        Coalgebra::from_parts(structure, interior)
    }

    /// `L P = M ⊗ P` with its canonical structure `(b, p, s) ↦ class(b, φ_p, s)`,
    /// where `φ_p : M b → M ⊗ P` sends `t` to the class of `(b, p, t)`.
    pub fn comparison_l(&self, p: &SetFunctor) -> Result<Coalgebra> {
        let m = self.basis();
        let t = tensor_presheaf(m, p, self.budget())?;
        let interior = self.interior(&t.carrier)?;
        let components = (0..m.points())
            .map(|x| {
                t.representatives[x]
                    .iter()
                    .map(|&(b, q, s)| {
                        let phi: Vec<Vec<usize>> = (0..m.points())
                            .map(|y| {
                                let n = m.value(b).size(y);
                                (0..n).map(|u| t.class(y, b, q, u, n)).collect()
                            })
                            .collect();
                        interior.class_of_map(x, b, &phi, s)
                    })
                    .collect()
            })
            .collect();
        let structure = FamilyMap::new(t.carrier.clone(), interior.carrier().clone(), components)?;
        Coalgebra::from_parts(structure, interior)
    }

    /// `R(A, a)(b)`: the coalgebra morphisms `lift_basis(b) → (A, a)`, listed in
    /// hom-space order, together with the presheaf they form.
    pub fn comparison_r(&self, c: &Coalgebra) -> Result<CoalgebraPresheaf> {
        let m = self.basis();
        let cat = m.shape();
        let mut maps = Vec::with_capacity(m.object_count());
        for b in 0..m.object_count() {
            let lifted = self.lift_basis(b)?;
            let hom = HomSpace::new(m.value(b), c.carrier())?;
            let count = hom.count().unwrap_or(u64::MAX);
            if count > self.budget().enumeration {
                return Err(Error::budget("basis maps into a coalgebra", self.budget().enumeration, count));
            }
            maps.push(
                hom.iter()
                    .filter(|phi| self.is_coalgebra_morphism(&lifted, c, phi))
                    .collect::<Vec<_>>(),
            );
        }
        let actions = (0..cat.morphism_count())
            .map(|g| {
                let (b, b2) = (cat.src(g), cat.dst(g));
                maps[b2]
                    .iter()
                    .map(|phi| {
                        let restricted = phi.after(m.action(g)).expect("action lands in M(dst g)");
                        maps[b].iter().position(|psi| psi == &restricted).ok_or_else(|| {
                            Error::Internal("restriction of a coalgebra morphism is not one".into())
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let functor = SetFunctor::new(
            cat.clone(),
            Variance::Contravariant,
            maps.iter().map(Vec::len).collect(),
            actions,
        )?;
        Ok(CoalgebraPresheaf { functor, maps })
    }

    /// Whether the unit `P → R L P`, `p ↦ φ_p`, is bijective at every object.
    pub fn unit_is_iso(&self, p: &SetFunctor) -> Result<bool> {
        let m = self.basis();
        let lp = self.comparison_l(p)?;
        let rlp = self.comparison_r(&lp)?;
        let t = tensor_presheaf(m, p, self.budget())?;
        for b in 0..m.object_count() {
            let mut hit = vec![false; rlp.maps[b].len()];
            for q in 0..p.values()[b] {
                let phi: Vec<Vec<usize>> = (0..m.points())
                    .map(|y| {
                        let n = m.value(b).size(y);
                        (0..n).map(|u| t.class(y, b, q, u, n)).collect()
                    })
                    .collect();
                match rlp.maps[b].iter().position(|psi| psi.components() == phi.as_slice()) {
                    Some(i) if !hit[i] => hit[i] = true,
                    Some(_) => return Ok(false),
                    None => {
                        return Err(Error::Internal("unit component is not a coalgebra morphism".into()))
                    }
                }
            }
            if hit.iter().any(|&h| !h) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether the counit `L R c → c`, `(b, φ, s) ↦ φ(s)`, is bijective.
    pub fn counit_is_iso(&self, c: &Coalgebra) -> Result<bool> {
        let m = self.basis();
        let rc = self.comparison_r(c)?;
        let t = tensor_presheaf(m, &rc.functor, self.budget())?;
        for x in 0..m.points() {
            let mut hit = vec![false; c.carrier().size(x)];
            for &(b, q, s) in &t.representatives[x] {
                let e = rc.maps[b][q].apply(x, s);
                if hit[e] {
                    return Ok(false);
                }
                hit[e] = true;
            }
            if hit.iter().any(|&h| !h) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `R c` as a presheaf, with the basis maps its elements stand for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoalgebraPresheaf {
    pub functor: SetFunctor,
    pub maps: Vec<Vec<FamilyMap>>,
}

/// Every family of sets over `points` with fibers at most `max_fiber`.
pub fn small_families(points: usize, max_fiber: usize) -> Vec<PointFamily> {
    let mut out = Vec::new();
    let mut fibers = vec![0usize; points];
    loop {
        out.push(PointFamily::new(fibers.clone()));
        let mut i = points;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            fibers[i] += 1;
            if fibers[i] <= max_fiber {
                break;
            }
            fibers[i] = 0;
        }
    }
}
