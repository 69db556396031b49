//! Disjoint-set forest used by the filtration sweep, component extraction,
//! dendrogram cuts, and density clustering.

pub(crate) struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
    components: u32,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            components: n as u32,
        }
    }

    pub(crate) fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grandparent = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grandparent;
            x = grandparent;
        }
        x
    }

    /// Merges the sets containing `a` and `b`; returns true if they were
    /// distinct.
    pub(crate) fn union(&mut self, a: u32, b: u32) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
        self.components -= 1;
        true
    }

    pub(crate) fn components(&self) -> u32 {
        self.components
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unions_shrink_component_count_once_per_new_link() {
        let mut uf = UnionFind::new(4);
        assert_eq!(uf.components(), 4);
        assert!(uf.union(0, 1));
        assert!(uf.union(2, 3));
        assert_eq!(uf.components(), 2);
        assert!(!uf.union(1, 0));
        assert_eq!(uf.components(), 2);
        assert!(uf.union(0, 3));
        assert_eq!(uf.components(), 1);
        assert_eq!(uf.find(1), uf.find(2));
    }
}
