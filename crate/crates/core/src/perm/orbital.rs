//! Orbitals, subdegrees and primitivity.

use super::{PermError, PermGroup, Permutation};

/// Orbits of a group on ordered pairs.
///
/// Classes are numbered in order of their lexicographically first pair, so for
/// a transitive group the diagonal is class 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairOrbits {
    pub n: usize,
    /// Class of `(x, y)` at index `x·n + y`.
    pub color: Vec<u32>,
    pub count: usize,
}

impl PairOrbits {
    pub fn compute(degree: usize, gens: &[Permutation]) -> PairOrbits {
        let n = degree;
        let mut color = vec![u32::MAX; n * n];
        let mut count = 0u32;
        let mut queue = Vec::new();
        for start in 0..n * n {
            if color[start] != u32::MAX {
                continue;
            }
            color[start] = count;
            queue.clear();
            queue.push(start);
            while let Some(p) = queue.pop() {
                let (x, y) = (p / n, p % n);
                for g in gens {
                    let q = g.apply(x) * n + g.apply(y);
                    if color[q] == u32::MAX {
                        color[q] = count;
                        queue.push(q);
                    }
                }
            }
            count += 1;
        }
        PairOrbits {
            n,
            color,
            count: count as usize,
        }
    }

    pub fn class_of(&self, x: usize, y: usize) -> usize {
        self.color[x * self.n + y] as usize
    }
}

/// Orbital decomposition of a transitive group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitalDecomposition {
    pub rank: usize,
    /// Each orbital as its list of ordered pairs, lexicographically sorted.
    pub orbitals: Vec<Vec<(usize, usize)>>,
    /// `subdegrees[i] = |{y : (0, y) ∈ orbitals[i]}|`.
    pub subdegrees: Vec<usize>,
    /// Index of the transposed orbital.
    pub pairing: Vec<usize>,
    pub pairs: PairOrbits,
}

impl OrbitalDecomposition {
    pub fn compute(g: &PermGroup) -> Result<Self, PermError> {
        if !g.is_transitive() {
            return Err(PermError::Intransitive);
        }
        let n = g.degree();
        let pairs = PairOrbits::compute(n, g.generators());
        let rank = pairs.count;
        let mut orbitals = vec![Vec::new(); rank];
        for x in 0..n {
            for y in 0..n {
                orbitals[pairs.class_of(x, y)].push((x, y));
            }
        }
        let subdegrees = (0..rank)
            .map(|c| (0..n).filter(|&y| pairs.class_of(0, y) == c).count())
            .collect();
        let pairing = orbitals
            .iter()
            .map(|o| {
                let (x, y) = o[0];
                pairs.class_of(y, x)
            })
            .collect();
        Ok(OrbitalDecomposition {
            rank,
            orbitals,
            subdegrees,
            pairing,
            pairs,
        })
    }

    /// Undirected graph of orbital `i` united with its paired orbital.
    pub fn orbital_graph(&self, i: usize) -> crate::graph::Graph {
        let j = self.pairing[i];
        crate::graph::Graph::from_fn(self.pairs.n, |x, y| {
            let c = self.pairs.class_of(x, y);
            c == i || c == j
        })
    }

    pub fn all_orbital_graphs_connected(&self) -> bool {
        (1..self.rank).all(|i| {
            let (x, y) = self.orbitals[i][0];
            x == y || self.orbital_graph(i).is_connected()
        })
    }
}

/// A nontrivial block system, blocks sorted internally and by smallest point.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BlockSystem {
    pub blocks: Vec<Vec<usize>>,
}

impl BlockSystem {
    pub fn block_size(&self) -> usize {
        self.blocks[0].len()
    }
}

/// For each `β ≠ 0`, computes the finest block system in which `0` and `β`
/// share a block, by closing the union of `{0, β}` under the generators.
/// Returns the distinct nontrivial systems found; empty iff primitive.
pub fn block_system_oracle(g: &PermGroup) -> Result<Vec<BlockSystem>, PermError> {
    if !g.is_transitive() {
        return Err(PermError::Intransitive);
    }
    let n = g.degree();
    let mut systems: Vec<BlockSystem> = Vec::new();
    for beta in 1..n {
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut queue = vec![(0usize, beta)];
        parent[beta] = 0;
        while let Some((a, b)) = queue.pop() {
            for s in g.generators() {
                let (x, y) = (s.apply(a), s.apply(b));
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                if rx != ry {
                    parent[rx.max(ry)] = rx.min(ry);
                    queue.push((x, y));
                }
            }
        }
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut index_of_root = vec![usize::MAX; n];
        for x in 0..n {
            let r = find(&mut parent, x);
            if index_of_root[r] == usize::MAX {
                index_of_root[r] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[index_of_root[r]].push(x);
        }
        if blocks.len() > 1 {
            let system = BlockSystem { blocks };
            if !systems.contains(&system) {
                systems.push(system);
            }
        }
    }
    systems.sort_by(|a, b| a.block_size().cmp(&b.block_size()).then(a.cmp(b)));
    Ok(systems)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::named::*;

    #[test]
    fn ranks_and_subdegrees() {
        let s4 = symmetric(4).orbitals().unwrap();
        assert_eq!((s4.rank, s4.subdegrees.clone()), (2, vec![1, 3]));
        let c5 = cyclic(5).orbitals().unwrap();
        assert_eq!((c5.rank, c5.subdegrees.clone()), (5, vec![1; 5]));
        // (0, i) is paired with (0, 5 - i)
        assert_eq!(c5.pairing, vec![0, 4, 3, 2, 1]);
    }

    #[test]
    fn wreath_square_is_rank_three() {
        let w = wreath_square_product(10).orbitals().unwrap();
        assert_eq!(w.rank, 3);
        assert_eq!(w.subdegrees, vec![1, 18, 81]);
        let sizes: Vec<usize> = w.orbitals.iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![100, 1800, 8100]);
        // the 18-orbital is the 10×10 rook's graph
        assert_eq!(w.orbital_graph(1), crate::graph::named::rook(10));
    }

    #[test]
    fn primitivity_examples() {
        assert_eq!(cyclic(4).is_primitive(), Ok(false));
        assert_eq!(cyclic(5).is_primitive(), Ok(true));
        assert_eq!(symmetric(4).is_primitive(), Ok(true));
        // product action of S_m wr S_2 with m ≥ 3 is primitive: both orbital
        // graphs (rook's graph and its complement) are connected
        assert_eq!(wreath_square_product(10).is_primitive(), Ok(true));
        assert!(block_system_oracle(&wreath_square_product(10))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn oracle_examples() {
        let c4 = block_system_oracle(&cyclic(4)).unwrap();
        assert_eq!(
            c4,
            vec![BlockSystem {
                blocks: vec![vec![0, 2], vec![1, 3]]
            }]
        );
        assert!(block_system_oracle(&symmetric(4)).unwrap().is_empty());
        let d12 = block_system_oracle(&dihedral(6)).unwrap();
        let sizes: Vec<usize> = d12.iter().map(BlockSystem::block_size).collect();
        assert_eq!(sizes, vec![2, 3]);
    }

    #[test]
    fn intransitive_inputs() {
        let g =
            PermGroup::new(3, vec![Permutation::from_cycles(3, &[vec![0, 1]]).unwrap()]).unwrap();
        assert_eq!(g.orbitals(), Err(PermError::Intransitive));
        assert_eq!(g.is_primitive(), Err(PermError::Intransitive));
        assert_eq!(block_system_oracle(&g), Err(PermError::Intransitive));
        let pairs = PairOrbits::compute(3, g.generators());
        // fibers {0,1} and {2}: pairs split into 5 orbits
        assert_eq!(pairs.count, 5);
    }
}
