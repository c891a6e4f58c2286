//! Terminal ionad, coproducts, binary products, tensors by a finite category
//! and the cotensor by the arrow category.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fincat::{FamilyMap, FinCategory, PointFamily};
use crate::ionad::{BasisFunctor, Coalgebra, InteriorValue, Ionad};
use crate::morphism::{
    check_continuous, specialisation_category, ContinuousMap, SpecialisationCategory,
};
use crate::space::FinTopSpace;

pub fn terminal_ionad() -> Ionad {
    Ionad::terminal()
}

/// A coproduct of ionads, evaluated summand by summand.
#[derive(Debug, Clone)]
pub struct CoproductIonad {
    summands: Vec<Ionad>,
    offsets: Vec<usize>,
}

/// `I A` on a coproduct: the restriction to each summand is that summand's interior.
#[derive(Debug, Clone)]
pub struct CoproductInterior {
    pub carrier: PointFamily,
    pub parts: Vec<Arc<InteriorValue>>,
}

pub fn coproduct(summands: &[Ionad]) -> CoproductIonad {
    let mut offsets = Vec::with_capacity(summands.len() + 1);
    let mut total = 0;
    for s in summands {
        offsets.push(total);
        total += s.points();
    }
    offsets.push(total);
    CoproductIonad {
        summands: summands.to_vec(),
        offsets,
    }
}

impl CoproductIonad {
    pub fn summands(&self) -> &[Ionad] {
        &self.summands
    }

    pub fn points(&self) -> usize {
        *self.offsets.last().expect("offsets end with the total")
    }

    /// First point of summand `k`.
    pub fn offset(&self, k: usize) -> usize {
        self.offsets[k]
    }

    pub fn interior(&self, a: &PointFamily) -> Result<CoproductInterior> {
        if a.points() != self.points() {
            return Err(Error::PointMismatch {
                expected: self.points(),
                found: a.points(),
            });
        }
        let parts: Vec<Arc<InteriorValue>> = self
            .summands
            .iter()
            .enumerate()
            .map(|(k, s)| s.interior(&a.slice(self.offsets[k], s.points())))
            .collect::<Result<_>>()?;
        let carrier = PointFamily::new(
            parts
                .iter()
                .flat_map(|p| p.carrier().fibers().iter().copied())
                .collect(),
        );
        Ok(CoproductInterior { carrier, parts })
    }

    /// The interior operator on subsets, evaluated summand by summand.
    pub fn interior_operator(&self, subset: u64) -> Result<u64> {
        let a = PointFamily::indicator(self.points(), subset);
        Ok(self.interior(&a)?.carrier.support())
    }

    /// The space of fixpoints of the interior operator.
    pub fn lambda(&self) -> Result<FinTopSpace> {
        let n = self.points();
        if n > crate::space::LAMBDA_MAX_POINTS {
            return Err(Error::budget("subsets of points", 1 << crate::space::LAMBDA_MAX_POINTS, 1u64 << n.min(63)));
        }
        let mut opens = Vec::new();
        for subset in 0..(1u64 << n) {
            if self.interior_operator(subset)? == subset {
                opens.push(subset);
            }
        }
        FinTopSpace::new(n, opens)
    }

    /// A single basis generating the same interior: the disjoint union of the
    /// summand shapes, each value extended by empty fibers off its summand.
    pub fn basis(&self) -> BasisFunctor {
        let n = self.points();
        let mut object_offsets = Vec::new();
        let mut morphism_offsets = Vec::new();
        let (mut objects, mut morphisms) = (0, 0);
        for s in &self.summands {
            object_offsets.push(objects);
            morphism_offsets.push(morphisms);
            objects += s.basis().object_count();
            morphisms += s.basis().shape().morphism_count();
        }
        let owner = |g: usize| morphism_offsets.partition_point(|&o| o <= g) - 1;
        let mut endpoints = Vec::with_capacity(morphisms);
        let mut identity = Vec::with_capacity(objects);
        for (k, s) in self.summands.iter().enumerate() {
            let cat = s.basis().shape();
            endpoints.extend(
                cat.endpoints()
                    .iter()
                    .map(|&(a, b)| (a + object_offsets[k], b + object_offsets[k])),
            );
            identity.extend((0..cat.object_count()).map(|o| cat.identity(o) + morphism_offsets[k]));
        }
        let shape = FinCategory::new_unchecked(objects, endpoints, identity, |g, f| {
            let k = owner(g);
            if owner(f) != k {
                return None;
            }
            let cat = self.summands[k].basis().shape();
            cat.compose(g - morphism_offsets[k], f - morphism_offsets[k])
                .map(|h| h + morphism_offsets[k])
        });
        let extend = |k: usize, fam: &PointFamily| {
            let mut fibers = vec![0; n];
            fibers[self.offsets[k]..self.offsets[k] + fam.points()].copy_from_slice(fam.fibers());
            PointFamily::new(fibers)
        };
        let mut values = Vec::with_capacity(objects);
        let mut actions = Vec::with_capacity(morphisms);
        for (k, s) in self.summands.iter().enumerate() {
            let m = s.basis();
            values.extend(m.values().iter().map(|v| extend(k, v)));
            for g in 0..m.shape().morphism_count() {
                let a = m.action(g);
                let mut comps = vec![Vec::new(); n];
                for (x, c) in a.components().iter().enumerate() {
                    comps[self.offsets[k] + x] = c.clone();
                }
                actions.push(
                    FamilyMap::new(extend(k, a.src()), extend(k, a.dst()), comps)
                        .expect("extended action"),
                );
            }
        }
        BasisFunctor::new(Arc::new(shape), n, values, actions).expect("summands are functorial")
    }

    pub fn ionad(&self) -> Ionad {
        Ionad::new(self.basis()).expect("disjoint union of flat bases is flat")
    }

    /// The injection of summand `k` into [`CoproductIonad::ionad`].
    pub fn injection(&self, k: usize) -> Result<ContinuousMap> {
        let target = self.ionad();
        let point_map: Vec<usize> = (0..self.summands[k].points()).map(|x| x + self.offsets[k]).collect();
        ContinuousMap::enumerate(&self.summands[k], &target, &point_map)?
            .into_iter()
            .next()
            .ok_or_else(|| Error::NoLifting(format!("injection of summand {k}")))
    }
}

/// The product of two ionads on the basis of open rectangles.
///
/// Point `(x, y)` is `x * |Y| + y`, object `(b, c)` is `b * |ob C| + c`, and
/// element `(s, t)` of a rectangle is `s * |N(c)(y)| + t`.
#[derive(Debug, Clone)]
pub struct ProductBasisWitness {
    pub left: Ionad,
    pub right: Ionad,
    pub product: Ionad,
}

impl ProductBasisWitness {
    pub fn point(&self, x: usize, y: usize) -> usize {
        x * self.right.points() + y
    }

    pub fn split_point(&self, p: usize) -> (usize, usize) {
        (p / self.right.points(), p % self.right.points())
    }

    pub fn object(&self, b: usize, c: usize) -> usize {
        b * self.right.basis().object_count() + c
    }

    pub fn split_object(&self, o: usize) -> (usize, usize) {
        let n = self.right.basis().object_count();
        (o / n, o % n)
    }
}

pub fn product(left: &Ionad, right: &Ionad) -> Result<ProductBasisWitness> {
    let (m, n) = (left.basis(), right.basis());
    let shape = FinCategory::product(m.shape(), n.shape());
    let (xs, ys) = (left.points(), right.points());
    let points = xs * ys;
    let rm = n.shape().morphism_count();
    let rectangle = |b: usize, c: usize| {
        PointFamily::new(
            (0..points)
                .map(|p| m.value(b).size(p / ys) * n.value(c).size(p % ys))
                .collect(),
        )
    };
    let values: Vec<PointFamily> = (0..shape.object_count())
        .map(|o| rectangle(o / n.object_count(), o % n.object_count()))
        .collect();
    let actions = (0..shape.morphism_count())
        .map(|gh| {
            let (g, h) = (gh / rm, gh % rm);
            let comps = (0..points)
                .map(|p| {
                    let (x, y) = (p / ys, p % ys);
                    let (sn, dn) = (n.value(n.shape().src(h)).size(y), n.value(n.shape().dst(h)).size(y));
                    (0..m.value(m.shape().src(g)).size(x) * sn)
                        .map(|e| m.act(g, x, e / sn) * dn + n.act(h, y, e % sn))
                        .collect()
                })
                .collect();
            FamilyMap::new(values[shape.src(gh)].clone(), values[shape.dst(gh)].clone(), comps)
        })
        .collect::<Result<_>>()?;
    let basis = BasisFunctor::new(Arc::new(shape), points, values, actions)?;
    Ok(ProductBasisWitness {
        left: left.clone(),
        right: right.clone(),
        product: Ionad::new(basis)?,
    })
}

/// `⟨f, g⟩ : Z → X × Y`, with liftings the coalgebra products `f'(b) × g'(c)`.
pub fn pair_maps(w: &ProductBasisWitness, f: &ContinuousMap, g: &ContinuousMap) -> Result<ContinuousMap> {
    if f.src() != g.src() || f.dst() != &w.left || g.dst() != &w.right {
        return Err(Error::EndpointMismatch("pairing needs maps from one source into the factors".into()));
    }
    let z = f.src();
    let point_map: Vec<usize> = f
        .point_map()
        .iter()
        .zip(g.point_map())
        .map(|(&x, &y)| w.point(x, y))
        .collect();
    let objects = w.product.basis().object_count();
    let liftings = (0..objects)
        .map(|o| {
            let (b, c) = w.split_object(o);
            let (limit, _) = z.coalgebra_limit(&[f.lifting(b).clone(), g.lifting(c).clone()], &[])?;
            Ok(limit)
        })
        .collect::<Result<Vec<_>>>()?;
    let h = ContinuousMap::from_parts(z.clone(), w.product.clone(), point_map, liftings);
    check_continuous(&h).map_err(|v| Error::Internal(format!("paired map is not continuous: {v}")))?;
    Ok(h)
}

/// Moves a coalgebra structure along a bijection of carriers.
fn transport(ionad: &Ionad, c: &Coalgebra, iso: &FamilyMap) -> Result<Coalgebra> {
    let inverse = iso
        .inverse()
        .ok_or_else(|| Error::Internal("carrier comparison is not bijective".into()))?;
    let target = ionad.interior(iso.dst())?;
    let pushed = c.interior().map_along(iso, &target)?;
    let structure = pushed.after(&c.structure().after(&inverse)?)?;
    Coalgebra::from_parts(structure, target)
}

/// The components `(f, g)` of `h : Z → X × Y`: `f'(b) = ∫^c h'(b, c)` and
/// `g'(c) = ∫^b h'(b, c)`.
pub fn unpair(w: &ProductBasisWitness, h: &ContinuousMap) -> Result<(ContinuousMap, ContinuousMap)> {
    if h.dst() != &w.product {
        return Err(Error::EndpointMismatch("map does not land in this product".into()));
    }
    let z = h.src();
    let fp: Vec<usize> = h.point_map().iter().map(|&p| w.split_point(p).0).collect();
    let gp: Vec<usize> = h.point_map().iter().map(|&p| w.split_point(p).1).collect();
    let (m, n) = (w.left.basis(), w.right.basis());
    let pm = w.product.basis();
    let cm = n.shape().morphism_count();
    // coend over one factor: nodes h'(b, c) for c, edges from morphisms of C
    let side = |first: bool, fixed: usize| -> Result<Coalgebra> {
        let (count, shape) = if first { (n.object_count(), n.shape()) } else { (m.object_count(), m.shape()) };
        let object = |v: usize| if first { w.object(fixed, v) } else { w.object(v, fixed) };
        let nodes: Vec<Coalgebra> = (0..count).map(|v| h.lifting(object(v)).clone()).collect();
        let edges: Vec<(usize, usize, FamilyMap)> = (0..shape.morphism_count())
            .map(|k| {
                let id = if first { m.shape().identity(fixed) } else { n.shape().identity(fixed) };
                let gh = if first { id * cm + k } else { k * cm + id };
                (shape.src(k), shape.dst(k), pm.action(gh).reindex(h.point_map()))
            })
            .collect();
        let (colimit, legs) = z.coalgebra_colimit(&nodes, &edges)?;
        let (value, point_map) = if first { (m.value(fixed), &fp) } else { (n.value(fixed), &gp) };
        let target = value.reindex(point_map);
        let mut comps: Vec<Vec<usize>> = colimit.carrier().fibers().iter().map(|&k| vec![usize::MAX; k]).collect();
        for (v, leg) in legs.iter().enumerate() {
            for x in 0..z.points() {
                let (_, py) = w.split_point(h.point_map()[x]);
                // elements of M(b)(px) × N(c)(py) are numbered s * |N(c)(py)| + t
                let width = if first { n.value(v).size(py) } else { n.value(fixed).size(py) };
                for e in 0..leg.src().size(x) {
                    let s = if first { e / width } else { e % width };
                    let q = leg.apply(x, e);
                    if comps[x][q] != usize::MAX && comps[x][q] != s {
                        return Err(Error::Internal("coend class has inconsistent projections".into()));
                    }
                    comps[x][q] = s;
                }
            }
        }
        let iso = FamilyMap::new(colimit.carrier().clone(), target, comps)?;
        transport(z, &colimit, &iso)
    };
    let f_liftings = (0..m.object_count()).map(|b| side(true, b)).collect::<Result<Vec<_>>>()?;
    let g_liftings = (0..n.object_count()).map(|c| side(false, c)).collect::<Result<Vec<_>>>()?;
    let f = ContinuousMap::from_parts(z.clone(), w.left.clone(), fp, f_liftings);
    let g = ContinuousMap::from_parts(z.clone(), w.right.clone(), gp, g_liftings);
    for (name, map) in [("first", &f), ("second", &g)] {
        check_continuous(map).map_err(|v| Error::Internal(format!("{name} component is not continuous: {v}")))?;
    }
    Ok((f, g))
}

/// The two projections of a product.
pub fn projections(w: &ProductBasisWitness) -> Result<(ContinuousMap, ContinuousMap)> {
    unpair(w, &ContinuousMap::identity(&w.product)?)
}

/// `C ⊗ X`: points `ob C × X`, with `(c', x)` numbered `c' * |X| + x`, basis
/// on `C^op × B` with `N(c, b)(c', x) = C(c, c') × M(b)(x)`.
pub fn tensor(category: &FinCategory, x: &Ionad) -> Result<Ionad> {
    let m = x.basis();
    let op = category.opposite();
    let shape = FinCategory::product(&op, m.shape());
    let xs = x.points();
    let points = category.object_count() * xs;
    let bo = m.object_count();
    let bm = m.shape().morphism_count();
    let values: Vec<PointFamily> = (0..shape.object_count())
        .map(|o| {
            let (c, b) = (o / bo, o % bo);
            PointFamily::new(
                (0..points)
                    .map(|p| category.hom(c, p / xs).len() * m.value(b).size(p % xs))
                    .collect(),
            )
        })
        .collect();
    let actions = (0..shape.morphism_count())
        .map(|kg| {
            // k : c'' → c in C is k : c → c'' in C^op, acting by precomposition
            let (k, g) = (kg / bm, kg % bm);
            let (c, c2) = (category.dst(k), category.src(k));
            let (b, b2) = (m.shape().src(g), m.shape().dst(g));
            let comps = (0..points)
                .map(|p| {
                    let (cp, y) = (p / xs, p % xs);
                    let (sn, dn) = (m.value(b).size(y), m.value(b2).size(y));
                    category
                        .hom(c, cp)
                        .iter()
                        .flat_map(|&h| {
                            let j = category.hom_position(category.comp(h, k));
                            (0..sn).map(move |s| (j, s))
                        })
                        .map(|(j, s)| j * dn + m.act(g, y, s))
                        .collect()
                })
                .collect();
            FamilyMap::new(values[c * bo + b].clone(), values[c2 * bo + b2].clone(), comps)
        })
        .collect::<Result<_>>()?;
    Ionad::new(BasisFunctor::new(Arc::new(shape), points, values, actions)?)
}

/// The cotensor `2 ⋔ X`.
///
/// Points are the morphisms `α : x → y` of `V X`; the basis lives on the arrow
/// category of `B`, and for `k : c → d` the set `N(k)(α)` is the pullback of
/// `α_d : M(d)(x) → M(d)(y)` and `M(k)(y) : M(c)(y) → M(d)(y)`, listed as
/// pairs `(u, v)` in lexicographic order.
#[derive(Debug, Clone)]
pub struct CotensorWitness {
    pub base: Ionad,
    pub specialisations: SpecialisationCategory,
    pub arrows: crate::fincat::ArrowCategory,
    pub pairs: Vec<Vec<Vec<(usize, usize)>>>,
    pub ionad: Ionad,
}

pub fn cotensor_arrow(x: &Ionad) -> Result<CotensorWitness> {
    let m = x.basis();
    let cat = m.shape();
    let v = specialisation_category(x)?;
    let arrows = cat.arrow_category();
    let points = v.category.morphism_count();
    let pairs: Vec<Vec<Vec<(usize, usize)>>> = (0..cat.morphism_count())
        .map(|k| {
            let (c, d) = (cat.src(k), cat.dst(k));
            (0..points)
                .map(|a| {
                    let (px, py) = v.category.endpoints()[a];
                    let alpha = &v.cells[a].components[d];
                    let mut out = Vec::new();
                    for u in 0..m.value(d).size(px) {
                        for w in 0..m.value(c).size(py) {
                            if alpha[u] == m.act(k, py, w) {
                                out.push((u, w));
                            }
                        }
                    }
                    out
                })
                .collect()
        })
        .collect();
    let values: Vec<PointFamily> = pairs
        .iter()
        .map(|per| PointFamily::new(per.iter().map(Vec::len).collect()))
        .collect();
    let actions = arrows
        .squares
        .iter()
        .map(|sq| {
            let comps = (0..points)
                .map(|a| {
                    let (px, py) = v.category.endpoints()[a];
                    let target = &pairs[sq.target][a];
                    pairs[sq.source][a]
                        .iter()
                        .map(|&(u, w)| {
                            let image = (m.act(sq.bottom, px, u), m.act(sq.top, py, w));
                            target.binary_search(&image).expect("squares preserve pullbacks")
                        })
                        .collect()
                })
                .collect();
            FamilyMap::new(values[sq.source].clone(), values[sq.target].clone(), comps)
        })
        .collect::<Result<_>>()?;
    let basis = BasisFunctor::new(Arc::new(arrows.category.clone()), points, values, actions)?;
    let ionad = Ionad::new(basis)?;
    Ok(CotensorWitness {
        base: x.clone(),
        specialisations: v,
        arrows,
        pairs,
        ionad,
    })
}

impl CotensorWitness {
    /// The evaluation map at the domain (`end = false`) or codomain (`end = true`)
    /// of each specialisation. Its lifting at `b` is the one for which every
    /// pullback projection `N(k) → M(b)` is a coalgebra morphism.
    pub fn evaluation(&self, end: bool) -> Result<ContinuousMap> {
        let cat = self.base.basis().shape();
        let ends = self.specialisations.category.endpoints();
        let point_map: Vec<usize> = ends.iter().map(|&(a, b)| if end { b } else { a }).collect();
        let lifted: Vec<Coalgebra> = (0..cat.morphism_count())
            .map(|k| self.ionad.lift_basis(k))
            .collect::<Result<_>>()?;
        for candidate in ContinuousMap::enumerate(&self.ionad, &self.base, &point_map)? {
            let compatible = (0..cat.morphism_count()).all(|k| {
                let b = if end { cat.src(k) } else { cat.dst(k) };
                let comps: Vec<Vec<usize>> = self.pairs[k]
                    .iter()
                    .map(|per| per.iter().map(|&(u, w)| if end { w } else { u }).collect())
                    .collect();
                FamilyMap::new(lifted[k].carrier().clone(), candidate.lifting(b).carrier().clone(), comps)
                    .map(|p| self.ionad.is_coalgebra_morphism(&lifted[k], candidate.lifting(b), &p))
                    .unwrap_or(false)
            });
            if compatible {
                return Ok(candidate);
            }
        }
        Err(Error::NoLifting(format!(
            "evaluation at the {} has no lifting compatible with the projections",
            if end { "codomain" } else { "domain" }
        )))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{alexandroff, lambda, sigma};

    #[test]
    fn terminal_facts() {
        let t = terminal_ionad();
        assert_eq!(lambda(&t).unwrap(), FinTopSpace::discrete(1));
        let a = PointFamily::new(vec![3]);
        assert_eq!(t.interior(&a).unwrap().carrier(), &a);
    }

    #[test]
    fn coproduct_of_spaces() {
        let (s, d) = (FinTopSpace::sierpinski(), FinTopSpace::discrete(1));
        let c = coproduct(&[sigma(&s), sigma(&d)]);
        let expected = FinTopSpace::coproduct(&[s, d]).unwrap();
        assert_eq!(c.lambda().unwrap(), expected);
        assert_eq!(lambda(&c.ionad()).unwrap(), expected);
        for k in 0..2 {
            assert!(check_continuous(&c.injection(k).unwrap()).is_ok());
        }
        let empty = coproduct(&[]);
        assert_eq!(empty.points(), 0);
        assert_eq!(empty.interior(&PointFamily::new(vec![])).unwrap().carrier.points(), 0);
    }

    #[test]
    fn product_of_spaces_and_projections() {
        let (s, d) = (FinTopSpace::sierpinski(), FinTopSpace::discrete(2));
        let w = product(&sigma(&s), &sigma(&d)).unwrap();
        assert_eq!(lambda(&w.product).unwrap(), s.product(&d).unwrap());
        let (p, q) = projections(&w).unwrap();
        assert_eq!(pair_maps(&w, &p, &q).unwrap(), ContinuousMap::identity(&w.product).unwrap());
    }

    #[test]
    fn tensor_with_terminal_is_alexandroff() {
        let c = FinCategory::arrow();
        let t = tensor(&c, &terminal_ionad()).unwrap();
        assert_eq!(t.basis().values(), alexandroff(&c).basis().values());
        let p = product(&alexandroff(&c), &sigma(&FinTopSpace::sierpinski())).unwrap();
        let t2 = tensor(&c, &sigma(&FinTopSpace::sierpinski())).unwrap();
        assert_eq!(t2.basis(), p.product.basis());
    }

    #[test]
    fn cotensor_of_sierpinski() {
        let w = cotensor_arrow(&sigma(&FinTopSpace::sierpinski())).unwrap();
        assert_eq!(w.ionad.points(), 3);
        for end in [false, true] {
            assert!(check_continuous(&w.evaluation(end).unwrap()).is_ok());
        }
        let t = cotensor_arrow(&terminal_ionad()).unwrap();
        assert_eq!(t.ionad.points(), 1);
    }
}
