use std::sync::Arc;

use crate::error::{Budget, Error, Result};
use crate::fincat::{HomSpace, PointFamily, SetFunctor, UnionFind, Variance};

use super::basis::BasisFunctor;

/// The presheaf `[M, A] = Hom(M(−), A)` on the basis shape.
///
/// Elements of `[M, A](b)` are indices into `Hom(M b, A)`.
pub fn hom_presheaf(m: &BasisFunctor, a: &PointFamily, budget: &Budget) -> Result<SetFunctor> {
    let cat = m.shape();
    let homs: Vec<HomSpace> = (0..m.object_count())
        .map(|b| HomSpace::new(m.value(b), a))
        .collect::<Result<_>>()?;
    let mut values = Vec::with_capacity(homs.len());
    for hom in &homs {
        match hom.count() {
            Some(n) if n <= budget.fibers => values.push(n as usize),
            n => {
                return Err(Error::budget(
                    "hom presheaf",
                    budget.fibers,
                    n.unwrap_or(u64::MAX),
                ))
            }
        }
    }
    let actions = (0..cat.morphism_count())
        .map(|g| {
            let (b, b2) = (cat.src(g), cat.dst(g));
            homs[b2]
                .iter()
                .map(|phi| {
                    let restricted = phi.after(m.action(g)).expect("action lands in M(dst g)");
                    homs[b].encode(restricted.components()) as usize
                })
                .collect()
        })
        .collect();
    SetFunctor::new(cat.clone(), Variance::Contravariant, values, actions)
}

/// `M ⊗ P = ∫^b P(b) × M(b)(−)` for a presheaf `P` on the basis shape.
///
/// Representatives `(b, p, s)` at `x` are numbered by `b`, then `p`, then `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorValue {
    pub carrier: PointFamily,
    offsets: Vec<Vec<usize>>,
    class_of: Vec<Vec<usize>>,
    /// Least representative `(b, p, s)` of each class.
    pub representatives: Vec<Vec<(usize, usize, usize)>>,
}

impl TensorValue {
    pub fn class(&self, x: usize, b: usize, p: usize, s: usize, fiber: usize) -> usize {
        self.class_of[x][self.offsets[x][b] + p * fiber + s]
    }

    /// The raw class table at `x`, indexed by representative number.
    pub fn class_table(&self, x: usize) -> &[usize] {
        &self.class_of[x]
    }
}

pub fn tensor_presheaf(m: &BasisFunctor, p: &SetFunctor, budget: &Budget) -> Result<TensorValue> {
    if p.shape() != m.shape() || p.variance() != Variance::Contravariant {
        return Err(Error::ShapeMismatch(
            "tensor needs a presheaf on the basis shape".into(),
        ));
    }
    let cat: &Arc<_> = m.shape();
    let needed: u64 = (0..m.object_count())
        .map(|b| p.values()[b] as u64 * m.value(b).total() as u64)
        .sum();
    if needed > budget.fibers {
        return Err(Error::budget("tensor representatives", budget.fibers, needed));
    }
    let mut carrier = Vec::with_capacity(m.points());
    let mut offsets = Vec::with_capacity(m.points());
    let mut class_of = Vec::with_capacity(m.points());
    let mut representatives = Vec::with_capacity(m.points());
    for x in 0..m.points() {
        let mut offs = Vec::with_capacity(m.object_count());
        let mut total = 0;
        for b in 0..m.object_count() {
            offs.push(total);
            total += p.values()[b] * m.value(b).size(x);
        }
        let index = |b: usize, q: usize, s: usize| offs[b] + q * m.value(b).size(x) + s;
        let mut uf = UnionFind::new(total);
        // (b, P(g)(q'), s) ~ (b', q', M(g)(s)) for g : b → b'
        for g in 0..cat.morphism_count() {
            let (b, b2) = (cat.src(g), cat.dst(g));
            for q2 in 0..p.values()[b2] {
                let q = p.action(g)[q2];
                for s in 0..m.value(b).size(x) {
                    uf.union(index(b, q, s), index(b2, q2, m.act(g, x, s)));
                }
            }
        }
        let (cls, reps) = uf.classes();
        let reps = reps
            .into_iter()
            .map(|r| {
                let b = offs.partition_point(|&o| o <= r) - 1;
                let b = (0..=b)
                    .rev()
                    .find(|&c| p.values()[c] * m.value(c).size(x) > 0 && offs[c] <= r)
                    .expect("representative lies in some block");
                let n = m.value(b).size(x);
                let local = r - offs[b];
                (b, local / n, local % n)
            })
            .collect::<Vec<_>>();
        carrier.push(reps.len());
        representatives.push(reps);
        class_of.push(cls);
        offsets.push(offs);
    }
    Ok(TensorValue {
        carrier: PointFamily::new(carrier),
        offsets,
        class_of,
        representatives,
    })
}
