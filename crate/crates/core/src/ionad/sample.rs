//! Seeded random generation of flat bases and probe families.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Budget, Result};
use crate::fincat::{enumerate_set_functors, FinCategory, PointFamily, SetFunctor, Variance};

use super::basis::BasisFunctor;

/// A family with independent uniform fiber sizes in `0..=max_fiber`.
pub fn random_family<R: Rng>(rng: &mut R, points: usize, max_fiber: usize) -> PointFamily {
    PointFamily::new((0..points).map(|_| rng.gen_range(0..=max_fiber)).collect())
}

/// Every covariant functor `shape → Set` with values of size at most
/// `max_value` whose category of elements is cofiltered.
pub fn flat_point_functors(
    shape: &Arc<FinCategory>,
    max_value: usize,
    budget: &Budget,
) -> Result<Vec<SetFunctor>> {
    let objects = shape.object_count();
    let mut out = Vec::new();
    let mut values = vec![0usize; objects];
    loop {
        for f in enumerate_set_functors(shape, Variance::Covariant, &values, budget)? {
            if BasisFunctor::from_point_functors(shape.clone(), std::slice::from_ref(&f))?.is_flat() {
                out.push(f);
            }
        }
        let mut i = objects;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            values[i] += 1;
            if values[i] <= max_value {
                break;
            }
            values[i] = 0;
        }
    }
}

/// A random flat basis: a category drawn from `shapes` and, independently per
/// point, a flat functor drawn uniformly from that category's flat functors.
///
/// `flat` must list, per shape, its flat point functors (see
/// [`flat_point_functors`]); shapes with none are skipped.
pub fn random_flat_basis<R: Rng>(
    rng: &mut R,
    shapes: &[Arc<FinCategory>],
    flat: &[Vec<SetFunctor>],
    max_points: usize,
) -> BasisFunctor {
    let usable: Vec<usize> = (0..shapes.len()).filter(|&i| !flat[i].is_empty()).collect();
    let &k = usable.choose(rng).expect("some shape admits a flat functor");
    let points = rng.gen_range(1..=max_points);
    let functors: Vec<SetFunctor> = (0..points)
        .map(|_| flat[k].choose(rng).expect("nonempty").clone())
        .collect();
    BasisFunctor::from_point_functors(shapes[k].clone(), &functors)
        .expect("pointwise flat functors assemble to a flat basis")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn flat_functors_on_the_arrow() {
        // on 0 → 1, flat functors are the representables Hom(0, −) = (1, 1) and
        // Hom(1, −) = (0, 1)
        let shape = Arc::new(FinCategory::arrow());
        let flat = flat_point_functors(&shape, 2, &Budget::default()).unwrap();
        let values: Vec<_> = flat.iter().map(|f| f.values().to_vec()).collect();
        assert_eq!(values, vec![vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn random_bases_are_flat_and_reproducible() {
        let shapes = vec![
            Arc::new(FinCategory::arrow()),
            Arc::new(FinCategory::cyclic_group(2)),
        ];
        let flat: Vec<_> = shapes
            .iter()
            .map(|s| flat_point_functors(s, 2, &Budget::default()).unwrap())
            .collect();
        let draw = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..10)
                .map(|_| random_flat_basis(&mut rng, &shapes, &flat, 3))
                .collect::<Vec<_>>()
        };
        let first = draw(7);
        assert!(first.iter().all(BasisFunctor::is_flat));
        assert_eq!(first, draw(7));
    }
}
