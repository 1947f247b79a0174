//! Graph automorphism groups by individualization and refinement.
//!
//! The search follows one path of individualizations down to a discrete
//! coloring, which fixes a base `b_0, …, b_{L-1}`. Working from the deepest
//! level upwards, for each vertex `w` of the target cell at level `i` that is
//! not already in the orbit of `b_i` under the automorphisms found so far, a
//! backtracking search looks for an automorphism fixing `b_0..b_{i-1}` and
//! mapping `b_i` to `w`. Once a level is finished the automorphisms found
//! generate the pointwise stabiliser of `b_0..b_{i-1}`, and the group order
//! is the product of the orbit lengths.

use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use thiserror::Error;

use crate::graph::Graph;
use crate::perm::{orbit_of, PermGroup, Permutation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutError {
    #[error("search budget of {budget} nodes exhausted")]
    BudgetExhausted { budget: u64 },
    #[error("coloring has {got} entries for a graph on {n} vertices")]
    ColoringSize { n: usize, got: usize },
    #[error("searches with different cell choices disagree: {0} vs {1}")]
    Inconsistent(BigUint, BigUint),
}

/// Vertex coloring with contiguous colors `0..c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Coloring {
    color: Vec<u32>,
    num_colors: usize,
}

impl Coloring {
    pub fn unit(n: usize) -> Self {
        Coloring {
            color: vec![0; n],
            num_colors: usize::from(n > 0),
        }
    }

    /// Normalises arbitrary labels to `0..c`, preserving their relative order.
    pub fn from_labels(labels: &[u64]) -> Self {
        let mut distinct: Vec<u64> = labels.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        let color = labels
            .iter()
            .map(|l| distinct.binary_search(l).unwrap() as u32)
            .collect();
        Coloring {
            color,
            num_colors: distinct.len(),
        }
    }

    pub fn len(&self) -> usize {
        self.color.len()
    }

    pub fn is_empty(&self) -> bool {
        self.color.is_empty()
    }

    pub fn color(&self, v: usize) -> usize {
        self.color[v] as usize
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    pub fn is_discrete(&self) -> bool {
        self.num_colors == self.color.len()
    }

    /// Vertices grouped by color, in color order.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_colors];
        for (v, &c) in self.color.iter().enumerate() {
            out[c as usize].push(v);
        }
        out
    }

    pub fn class_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.num_colors];
        for &c in &self.color {
            out[c as usize] += 1;
        }
        out
    }

    /// Gives `v` a color of its own, placed just before the rest of its class.
    pub fn individualize(&self, v: usize) -> Coloring {
        let labels: Vec<u64> = self
            .color
            .iter()
            .enumerate()
            .map(|(x, &c)| 2 * c as u64 + u64::from(x != v))
            .collect();
        Coloring::from_labels(&labels)
    }
}

/// Coarsest equitable refinement of `c`.
pub fn refine(g: &Graph, c: &Coloring) -> Result<Coloring, AutError> {
    if c.len() != g.n() {
        return Err(AutError::ColoringSize {
            n: g.n(),
            got: c.len(),
        });
    }
    Ok(refine_traced(g, c).0)
}

/// Refinement plus a fingerprint of every splitting step. Colors are assigned
/// from sorted signatures only, so the procedure commutes with relabelling
/// and two isomorphic inputs produce equal fingerprints.
fn refine_traced(g: &Graph, c: &Coloring) -> (Coloring, u64) {
    let n = g.n();
    let mut hasher = std::collections::hash_map::DefaultHasher::new();
    let mut current = c.clone();
    let neighbors: Vec<Vec<usize>> = (0..n).map(|v| g.neighbors(v).collect()).collect();
    loop {
        let k = current.num_colors;
        let mut signatures: Vec<(Vec<u32>, usize)> = (0..n)
            .map(|v| {
                let mut sig = vec![0u32; k + 1];
                sig[0] = current.color[v];
                for &w in &neighbors[v] {
                    sig[1 + current.color[w] as usize] += 1;
                }
                (sig, v)
            })
            .collect();
        signatures.sort_unstable();
        let mut color = vec![0u32; n];
        let mut next = 0u32;
        for i in 0..n {
            if i > 0 && signatures[i].0 != signatures[i - 1].0 {
                next += 1;
                signatures[i - 1].0.hash(&mut hasher);
                i.hash(&mut hasher);
            }
            color[signatures[i].1] = next;
        }
        let num_colors = if n == 0 { 0 } else { next as usize + 1 };
        num_colors.hash(&mut hasher);
        let refined = Coloring { color, num_colors };
        if num_colors == k {
            return (refined, hasher.finish());
        }
        current = refined;
    }
}

/// How the target cell is chosen at each individualization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellChoice {
    FirstSmallest,
    FirstLargest,
}

#[derive(Debug, Clone)]
pub struct AutOptions {
    /// Maximum number of search-tree nodes across all searches.
    pub node_budget: u64,
    /// Repeat the search with [`CellChoice::FirstLargest`] and compare orders.
    pub cross_check: bool,
}

impl Default for AutOptions {
    fn default() -> Self {
        AutOptions {
            node_budget: 10_000_000,
            cross_check: true,
        }
    }
}

/// Result of one search.
#[derive(Debug, Clone)]
pub struct AutSearch {
    pub generators: Vec<Permutation>,
    pub base: Vec<usize>,
    /// Orbit length of `base[i]` under the stabiliser of `base[..i]`.
    pub orbit_sizes: Vec<usize>,
    pub nodes: u64,
}

impl AutSearch {
    pub fn order(&self) -> BigUint {
        self.orbit_sizes
            .iter()
            .fold(BigUint::from(1u32), |acc, &s| acc * BigUint::from(s))
    }
}

struct Level {
    coloring: Coloring,
    trace: u64,
    sizes: Vec<usize>,
    target: usize,
}

struct Searcher<'a> {
    g: &'a Graph,
    edges: Vec<(usize, usize)>,
    choice: CellChoice,
    path: Vec<Level>,
    leaf: Coloring,
    nodes: u64,
    budget: u64,
}

impl<'a> Searcher<'a> {
    fn target_cell(&self, c: &Coloring) -> usize {
        let sizes = c.class_sizes();
        let candidates = sizes.iter().enumerate().filter(|(_, &s)| s > 1);
        match self.choice {
            CellChoice::FirstSmallest => candidates.min_by_key(|&(i, &s)| (s, i)).unwrap().0,
            CellChoice::FirstLargest => {
                candidates
                    .min_by_key(|&(i, &s)| (std::cmp::Reverse(s), i))
                    .unwrap()
                    .0
            }
        }
    }

    fn tick(&mut self) -> Result<(), AutError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(AutError::BudgetExhausted {
                budget: self.budget,
            });
        }
        Ok(())
    }

    fn leaf_map(&self, image: &Coloring) -> Permutation {
        let mut by_color = vec![0usize; image.len()];
        for v in 0..image.len() {
            by_color[image.color(v)] = v;
        }
        Permutation::from_images(
            (0..image.len())
                .map(|x| by_color[self.leaf.color(x)])
                .collect(),
        )
        .expect("discrete colorings give a bijection")
    }

    fn is_automorphism(&self, p: &Permutation) -> bool {
        self.edges
            .iter()
            .all(|&(u, v)| self.g.adjacent(p.apply(u), p.apply(v)))
    }

    /// Individualizes `v` in `c`, refines, and returns the result if it
    /// matches the base path at `depth`.
    fn step(&mut self, c: &Coloring, v: usize, depth: usize) -> Result<Option<Coloring>, AutError> {
        self.tick()?;
        let (next, trace) = refine_traced(self.g, &c.individualize(v));
        let expected = &self.path[depth];
        if trace != expected.trace || next.class_sizes() != expected.sizes {
            return Ok(None);
        }
        Ok(Some(next))
    }

    fn extend(&mut self, c: Coloring, depth: usize) -> Result<Option<Permutation>, AutError> {
        if depth == self.path.len() - 1 {
            let p = self.leaf_map(&c);
            return Ok(self.is_automorphism(&p).then_some(p));
        }
        let target = self.path[depth].target;
        let cell: Vec<usize> = (0..c.len()).filter(|&v| c.color(v) == target).collect();
        for u in cell {
            if let Some(next) = self.step(&c, u, depth + 1)? {
                if let Some(p) = self.extend(next, depth + 1)? {
                    return Ok(Some(p));
                }
            }
        }
        Ok(None)
    }

    fn run(g: &'a Graph, choice: CellChoice, budget: u64) -> Result<AutSearch, AutError> {
        let n = g.n();
        let mut s = Searcher {
            g,
            edges: g.edges(),
            choice,
            path: Vec::new(),
            leaf: Coloring::unit(0),
            nodes: 0,
            budget,
        };
        let (mut c, mut trace) = refine_traced(g, &Coloring::unit(n));
        let mut base = Vec::new();
        loop {
            let sizes = c.class_sizes();
            if c.is_discrete() {
                s.path.push(Level {
                    coloring: c.clone(),
                    trace,
                    sizes,
                    target: usize::MAX,
                });
                break;
            }
            let target = s.target_cell(&c);
            let b = (0..n).find(|&v| c.color(v) == target).unwrap();
            base.push(b);
            s.path.push(Level {
                coloring: c.clone(),
                trace,
                sizes,
                target,
            });
            (c, trace) = refine_traced(g, &c.individualize(b));
            s.tick()?;
        }
        s.leaf = c;

        let mut generators: Vec<Permutation> = Vec::new();
        let mut orbit_sizes = vec![1; base.len()];
        for level in (0..base.len()).rev() {
            let start = s.path[level].coloring.clone();
            let target = s.path[level].target;
            let cell: Vec<usize> = (0..n).filter(|&v| start.color(v) == target).collect();
            let mut orbit = orbit_of(n, &generators, base[level]);
            for w in cell {
                if orbit.binary_search(&w).is_ok() {
                    continue;
                }
                let found = match s.step(&start, w, level + 1)? {
                    Some(next) => s.extend(next, level + 1)?,
                    None => None,
                };
                if let Some(p) = found {
                    generators.push(p);
                    orbit = orbit_of(n, &generators, base[level]);
                }
            }
            orbit_sizes[level] = orbit.len();
        }
        Ok(AutSearch {
            generators,
            base,
            orbit_sizes,
            nodes: s.nodes,
        })
    }
}

/// Runs a single search with the given cell choice.
pub fn automorphism_search(
    g: &Graph,
    choice: CellChoice,
    node_budget: u64,
) -> Result<AutSearch, AutError> {
    Searcher::run(g, choice, node_budget)
}

/// Full automorphism group of `g`, with the order confirmed by a second
/// search using a different cell choice when `opts.cross_check` is set.
pub fn automorphism_group_with(g: &Graph, opts: &AutOptions) -> Result<PermGroup, AutError> {
    let first = automorphism_search(g, CellChoice::FirstSmallest, opts.node_budget)?;
    let group = PermGroup::new(g.n(), first.generators.clone()).expect("generators match degree");
    let order = group.order();
    if order != first.order() {
        return Err(AutError::Inconsistent(order, first.order()));
    }
    if opts.cross_check {
        let remaining = opts.node_budget.saturating_sub(first.nodes);
        let second = automorphism_search(g, CellChoice::FirstLargest, remaining)?;
        if second.order() != order {
            return Err(AutError::Inconsistent(order, second.order()));
        }
    }
    Ok(group)
}

pub fn automorphism_group(g: &Graph) -> Result<PermGroup, AutError> {
    automorphism_group_with(g, &AutOptions::default())
}

pub fn is_vertex_transitive(g: &Graph) -> Result<bool, AutError> {
    Ok(automorphism_group(g)?.is_transitive())
}

/// True iff `p` maps edges to edges (and hence non-edges to non-edges).
pub fn is_graph_automorphism(g: &Graph, p: &Permutation) -> bool {
    p.degree() == g.n()
        && g.edges()
            .iter()
            .all(|&(u, v)| g.adjacent(p.apply(u), p.apply(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    #[test]
    fn refine_examples() {
        let c5 = cycle(5);
        assert_eq!(refine(&c5, &Coloring::unit(5)).unwrap(), Coloring::unit(5));
        let p3 = refine(&path(3), &Coloring::unit(3)).unwrap();
        assert_eq!(p3.num_colors(), 2);
        assert_eq!(p3.color(0), p3.color(2));
        assert_ne!(p3.color(0), p3.color(1));
        let pet = refine(&petersen(), &Coloring::unit(10).individualize(0)).unwrap();
        let mut sizes = pet.class_sizes();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 3, 6]);
        assert!(matches!(
            refine(&c5, &Coloring::unit(4)),
            Err(AutError::ColoringSize { .. })
        ));
    }

    #[test]
    fn refine_never_merges() {
        let g = path(6);
        let start = Coloring::from_labels(&[0, 1, 0, 1, 0, 1]);
        let r = refine(&g, &start).unwrap();
        for u in 0..6 {
            for v in 0..6 {
                if start.color(u) != start.color(v) {
                    assert_ne!(r.color(u), r.color(v));
                }
            }
        }
        assert_eq!(refine(&g, &r).unwrap(), r);
    }

    #[test]
    fn small_orders() {
        let order = |g: &Graph| automorphism_group(g).unwrap().order();
        assert_eq!(order(&cycle(5)), BigUint::from(10u32));
        assert_eq!(order(&petersen()), BigUint::from(120u32));
        assert_eq!(order(&complete(5)), BigUint::from(120u32));
        assert_eq!(order(&path(3)), BigUint::from(2u32));
        assert_eq!(order(&edgeless(1)), BigUint::from(1u32));
        assert_eq!(order(&rook(3)), BigUint::from(72u32));
    }

    #[test]
    fn transitivity() {
        assert!(is_vertex_transitive(&complete(3)).unwrap());
        assert!(!is_vertex_transitive(&path(3)).unwrap());
        assert!(is_vertex_transitive(&petersen()).unwrap());
    }

    #[test]
    fn generators_are_symmetries() {
        let g = petersen();
        let group = automorphism_group(&g).unwrap();
        assert!(group
            .generators()
            .iter()
            .all(|p| is_graph_automorphism(&g, p)));
    }

    #[test]
    fn budget_is_reported() {
        let err = automorphism_search(&petersen(), CellChoice::FirstSmallest, 3).unwrap_err();
        assert_eq!(err, AutError::BudgetExhausted { budget: 3 });
    }
}
