//! Small finite categories up to isomorphism.

use std::collections::HashSet;
use std::sync::Arc;

use super::category::FinCategory;
use super::functor::FinFunctor;

/// All categories with at most `max_objects` objects and at most
/// `max_morphisms` morphisms, one per isomorphism class.
///
/// Output is sorted by (object count, morphism count, canonical form), so it is
/// reproducible. Morphisms are numbered by `(src, dst)` with the identity first
/// in each endomorphism set.
pub fn enumerate_categories(max_objects: usize, max_morphisms: usize) -> Vec<FinCategory> {
    let mut found: Vec<(Vec<usize>, FinCategory)> = Vec::new();
    let mut seen = HashSet::new();
    for objects in 0..=max_objects {
        if objects > max_morphisms {
            break;
        }
        for sizes in hom_size_matrices(objects, max_morphisms) {
            for cat in categories_with_hom_sizes(objects, &sizes) {
                let key = canonical_form(&cat);
                if seen.insert(key.clone()) {
                    found.push((key, canonical_category(&cat)));
                }
            }
        }
    }
    found.sort_by(|a, b| {
        (a.1.object_count(), a.1.morphism_count(), &a.0).cmp(&(
            b.1.object_count(),
            b.1.morphism_count(),
            &b.0,
        ))
    });
    found.into_iter().map(|(_, c)| c).collect()
}

/// Hom-set size matrices (row-major) with nonzero diagonal and total at most `max`.
fn hom_size_matrices(objects: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut sizes = vec![0; objects * objects];
    fn go(i: usize, objects: usize, remaining: usize, sizes: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == sizes.len() {
            out.push(sizes.clone());
            return;
        }
        let diagonal = i / objects == i % objects;
        let lo = usize::from(diagonal);
        // leave room for the identities still to be placed
        let later_diagonals = (i + 1..sizes.len()).filter(|&j| j / objects == j % objects).count();
        if remaining < lo + later_diagonals {
            return;
        }
        for n in lo..=remaining - later_diagonals {
            sizes[i] = n;
            go(i + 1, objects, remaining - n, sizes, out);
        }
        sizes[i] = 0;
    }
    go(0, objects, max, &mut sizes, &mut out);
    out
}

/// Every composition table on the given hom-set sizes satisfying the
/// category laws.
fn categories_with_hom_sizes(objects: usize, sizes: &[usize]) -> Vec<FinCategory> {
    let mut ends = Vec::new();
    let mut identity = vec![0; objects];
    for a in 0..objects {
        for b in 0..objects {
            if a == b {
                identity[a] = ends.len();
            }
            for _ in 0..sizes[a * objects + b] {
                ends.push((a, b));
            }
        }
    }
    let n = ends.len();
    let is_id = |f: usize| ends[f].0 == ends[f].1 && identity[ends[f].0] == f;
    let mut table = vec![None; n * n];
    let mut free = Vec::new();
    for g in 0..n {
        for f in 0..n {
            if ends[f].1 != ends[g].0 {
                continue;
            }
            if is_id(g) {
                table[g * n + f] = Some(f);
            } else if is_id(f) {
                table[g * n + f] = Some(g);
            } else {
                free.push((g, f));
            }
        }
    }
    let hom: Vec<Vec<usize>> = (0..objects * objects)
        .map(|i| (0..n).filter(|&f| ends[f] == (i / objects, i % objects)).collect())
        .collect();
    let mut out = Vec::new();
    fill(0, &free, &ends, &hom, objects, &mut table, n, &mut |t| {
        out.push(FinCategory::new_unchecked(objects, ends.clone(), identity.clone(), |g, f| t[g * n + f]));
    });
    out
}

#[allow(clippy::too_many_arguments)]
fn fill(
    i: usize,
    free: &[(usize, usize)],
    ends: &[(usize, usize)],
    hom: &[Vec<usize>],
    objects: usize,
    table: &mut Vec<Option<usize>>,
    n: usize,
    emit: &mut dyn FnMut(&[Option<usize>]),
) {
    if i == free.len() {
        emit(table);
        return;
    }
    let (g, f) = free[i];
    for &r in &hom[ends[f].0 * objects + ends[g].1] {
        table[g * n + f] = Some(r);
        if associative_so_far(table, ends, n) {
            fill(i + 1, free, ends, hom, objects, table, n, emit);
        }
    }
    table[g * n + f] = None;
}

fn associative_so_far(table: &[Option<usize>], ends: &[(usize, usize)], n: usize) -> bool {
    for f in 0..n {
        for g in 0..n {
            if ends[f].1 != ends[g].0 {
                continue;
            }
            let Some(gf) = table[g * n + f] else { continue };
            for h in 0..n {
                if ends[g].1 != ends[h].0 {
                    continue;
                }
                let (Some(hg), Some(left)) = (table[h * n + g], table[h * n + gf]) else {
                    continue;
                };
                if let Some(right) = table[hg * n + f] {
                    if left != right {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// A relabelling: object permutation plus, for each hom-set, an ordering of
/// its morphisms (identity first).
fn relabellings(cat: &FinCategory) -> Vec<Vec<usize>> {
    let k = cat.object_count();
    let mut out = Vec::new();
    for perm in permutations(k) {
        // perm[new] = old object
        let mut choices: Vec<Vec<Vec<usize>>> = Vec::new();
        for a in 0..k {
            for b in 0..k {
                let homs = cat.hom(perm[a], perm[b]);
                let orders = if a == b {
                    let id = cat.identity(perm[a]);
                    let rest: Vec<usize> = homs.iter().copied().filter(|&f| f != id).collect();
                    permutations(rest.len())
                        .into_iter()
                        .map(|p| std::iter::once(id).chain(p.iter().map(|&i| rest[i])).collect())
                        .collect()
                } else {
                    permutations(homs.len())
                        .into_iter()
                        .map(|p| p.iter().map(|&i| homs[i]).collect())
                        .collect()
                };
                choices.push(orders);
            }
        }
        let mut index = vec![0; choices.len()];
        loop {
            // new morphism order as list of old morphisms
            let order: Vec<usize> = choices
                .iter()
                .zip(&index)
                .flat_map(|(c, &i)| c[i].iter().copied())
                .collect();
            out.push(order);
            let mut pos = choices.len();
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                index[pos] += 1;
                if index[pos] < choices[pos].len() {
                    break;
                }
                index[pos] = 0;
            }
            if index.iter().all(|&i| i == 0) {
                break;
            }
        }
    }
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = Vec::with_capacity(n);
    let mut used = vec![false; n];
    fn go(n: usize, current: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if current.len() == n {
            out.push(current.clone());
            return;
        }
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                current.push(i);
                go(n, current, used, out);
                current.pop();
                used[i] = false;
            }
        }
    }
    go(n, &mut current, &mut used, &mut out);
    out
}

fn encode_relabelled(cat: &FinCategory, order: &[usize]) -> Vec<usize> {
    let n = cat.morphism_count();
    let mut new_of_old = vec![0; n];
    for (new, &old) in order.iter().enumerate() {
        new_of_old[old] = new;
    }
    // object labels follow the order of identities
    let mut key = Vec::with_capacity(2 * n + n * n);
    let mut object_of_old = vec![0; cat.object_count()];
    let mut next = 0;
    for &old in order {
        if cat.is_identity(old) {
            object_of_old[cat.src(old)] = next;
            next += 1;
        }
    }
    for &old in order {
        key.push(object_of_old[cat.src(old)]);
        key.push(object_of_old[cat.dst(old)]);
    }
    for &g in order {
        for &f in order {
            key.push(cat.compose(g, f).map_or(usize::MAX, |r| new_of_old[r]));
        }
    }
    key
}

/// A complete isomorphism invariant: the least encoding over all relabellings.
pub fn canonical_form(cat: &FinCategory) -> Vec<usize> {
    let mut best: Option<Vec<usize>> = None;
    for order in relabellings(cat) {
        let key = encode_relabelled(cat, &order);
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    }
    let mut out = vec![cat.object_count(), cat.morphism_count()];
    out.extend(best.unwrap_or_default());
    out
}

/// The relabelled copy of `cat` realising its canonical form.
fn canonical_category(cat: &FinCategory) -> FinCategory {
    let mut best: Option<(Vec<usize>, Vec<usize>)> = None;
    for order in relabellings(cat) {
        let key = encode_relabelled(cat, &order);
        if best.as_ref().is_none_or(|(b, _)| key < *b) {
            best = Some((key, order));
        }
    }
    let Some((_, order)) = best else {
        return cat.clone();
    };
    let n = cat.morphism_count();
    let mut new_of_old = vec![0; n];
    for (new, &old) in order.iter().enumerate() {
        new_of_old[old] = new;
    }
    let mut object_of_old = vec![0; cat.object_count()];
    let mut identity = Vec::new();
    for (new, &old) in order.iter().enumerate() {
        if cat.is_identity(old) {
            object_of_old[cat.src(old)] = identity.len();
            identity.push(new);
        }
    }
    let ends = order
        .iter()
        .map(|&old| (object_of_old[cat.src(old)], object_of_old[cat.dst(old)]))
        .collect();
    FinCategory::new_unchecked(cat.object_count(), ends, identity, |g, f| {
        cat.compose(order[g], order[f]).map(|r| new_of_old[r])
    })
}

/// An isomorphism `C → D` found by backtracking, or `None`.
pub fn find_isomorphism(c: &Arc<FinCategory>, d: &Arc<FinCategory>) -> Option<FinFunctor> {
    if c.object_count() != d.object_count() || c.morphism_count() != d.morphism_count() {
        return None;
    }
    let k = c.object_count();
    for perm in permutations(k) {
        let fits = (0..k).all(|a| (0..k).all(|b| c.hom(a, b).len() == d.hom(perm[a], perm[b]).len()));
        if !fits {
            continue;
        }
        let mut image = vec![usize::MAX; c.morphism_count()];
        let mut used = vec![false; d.morphism_count()];
        if assign_morphisms(c, d, &perm, 0, &mut image, &mut used) {
            return Some(FinFunctor {
                source: c.clone(),
                target: d.clone(),
                object_map: perm,
                morphism_map: image,
            });
        }
    }
    None
}

fn assign_morphisms(
    c: &FinCategory,
    d: &FinCategory,
    objects: &[usize],
    f: usize,
    image: &mut Vec<usize>,
    used: &mut Vec<bool>,
) -> bool {
    if f == c.morphism_count() {
        return true;
    }
    let candidates: Vec<usize> = if c.is_identity(f) {
        vec![d.identity(objects[c.src(f)])]
    } else {
        d.hom(objects[c.src(f)], objects[c.dst(f)]).to_vec()
    };
    for cand in candidates {
        if used[cand] {
            continue;
        }
        image[f] = cand;
        used[cand] = true;
        let ok = (0..=f).all(|g| {
            (0..=f).all(|h| {
                if g != f && h != f {
                    return true;
                }
                match c.compose(g, h) {
                    Some(gh) if gh <= f => d.compose(image[g], image[h]) == Some(image[gh]),
                    _ => true,
                }
            })
        }) && (0..f).all(|g| {
            // composites landing on f from earlier pairs
            (0..f).all(|h| match c.compose(g, h) {
                Some(gh) if gh == f => d.compose(image[g], image[h]) == Some(cand),
                _ => true,
            })
        });
        if ok && assign_morphisms(c, d, objects, f + 1, image, used) {
            return true;
        }
        used[cand] = false;
    }
    image[f] = usize::MAX;
    false
}
