/// Disjoint-set forest with path compression and union by size.
#[derive(Clone, Debug)]
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    pub fn new(len: usize) -> Self {
        DisjointSets {
            parent: (0..len).collect(),
            size: vec![1; len],
        }
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

    pub fn union(&mut self, a: usize, b: usize) {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
    }

    /// Class index of every element, classes numbered by their least member.
    pub fn canonical_classes(&mut self) -> (Vec<usize>, Vec<Vec<usize>>) {
        let n = self.parent.len();
        let mut class_of_root = vec![usize::MAX; n];
        let mut class_of = vec![0; n];
        let mut members: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            let r = self.find(x);
            if class_of_root[r] == usize::MAX {
                class_of_root[r] = members.len();
                members.push(Vec::new());
            }
            class_of[x] = class_of_root[r];
            members[class_of[x]].push(x);
        }
        (class_of, members)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classes_are_numbered_by_least_member() {
        let mut uf = DisjointSets::new(5);
        uf.union(4, 1);
        uf.union(2, 3);
        uf.union(3, 4);
        let (class_of, members) = uf.canonical_classes();
        assert_eq!(class_of, vec![0, 1, 1, 1, 1]);
        assert_eq!(members, vec![vec![0], vec![1, 2, 3, 4]]);
    }
}
