/// Disjoint sets whose representative is always the least member.
///
/// Keeping the least index as root makes class representatives canonical, so
/// quotients come out identical regardless of merge order.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(len: usize) -> Self {
        UnionFind {
            parent: (0..len).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, i: usize) -> usize {
        let mut root = i;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = i;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Merges the classes of `a` and `b`; returns `true` if they were distinct.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    /// Numbers the classes in order of their least member.
    ///
    /// Returns `(class_of, representatives)`: `class_of[i]` is the class of `i`
    /// and `representatives[k]` the least member of class `k`.
    pub fn classes(&mut self) -> (Vec<usize>, Vec<usize>) {
        let n = self.parent.len();
        let mut class_of = vec![usize::MAX; n];
        let mut reps = Vec::new();
        for i in 0..n {
            let r = self.find(i);
            if r == i {
                class_of[i] = reps.len();
                reps.push(i);
            } else {
                class_of[i] = class_of[r];
            }
        }
        (class_of, reps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn least_member_is_root() {
        let mut uf = UnionFind::new(5);
        uf.union(4, 2);
        uf.union(3, 4);
        assert_eq!(uf.find(3), 2);
        let (class_of, reps) = uf.classes();
        assert_eq!(reps, vec![0, 1, 2]);
        assert_eq!(class_of, vec![0, 1, 2, 2, 2]);
    }

    proptest! {
        #[test]
        fn classes_do_not_depend_on_merge_order(
            pairs in proptest::collection::vec((0usize..12, 0usize..12), 0..20)
        ) {
            let mut forward = UnionFind::new(12);
            for &(a, b) in &pairs {
                forward.union(a, b);
            }
            let mut backward = UnionFind::new(12);
            for &(a, b) in pairs.iter().rev() {
                backward.union(b, a);
            }
            prop_assert_eq!(forward.classes(), backward.classes());
        }
    }
}
