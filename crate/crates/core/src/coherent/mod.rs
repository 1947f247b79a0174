//! Coherent configurations.
//!
//! A configuration is a coloring of the ordered pairs of `0..n` into classes
//! `0..r`. Intersection numbers use the traditional indexing
//! `A_i A_j = Σ_k p_{ij}^k A_k`: for `(x, y)` in class `k`, `p_{ij}^k` counts
//! the `z` with `(x, z)` in class `i` and `(z, y)` in class `j`. (Some of the
//! early rank 3 literature writes `A_i A_j = Σ p_{jk}^{(i)} A_k` instead.)

pub mod spectrum;

use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{parse_decimal, Graph};
use crate::perm::orbital::PairOrbits;
use crate::perm::PermGroup;
pub use spectrum::{krein_check, scheme_spectrum, KreinVerdict, SchemeSpectrum, SpectrumError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoherentError {
    #[error("expected {expected} entries, got {got}")]
    Size { expected: usize, got: usize },
    #[error("class indices are not contiguous: class {0} is unused")]
    NonContiguous(usize),
    #[error("class {class} mixes diagonal and off-diagonal pairs, witness {cell:?}")]
    DiagonalNotUnion { class: usize, cell: (usize, usize) },
    #[error("transpose of class {class} is not a class, witness {cell:?}")]
    TransposeNotClosed { class: usize, cell: (usize, usize) },
    #[error("intersection number p[{i}][{j}][{k}] is not constant, witness {cell:?}")]
    IntersectionInconsistent {
        i: usize,
        j: usize,
        k: usize,
        cell: (usize, usize),
    },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A validated coherent configuration with its intersection numbers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoherentConfiguration {
    n: usize,
    rank: usize,
    color: Vec<u32>,
    fibers: Vec<usize>,
    pairing: Vec<usize>,
    class_sizes: Vec<usize>,
    /// Nonzero `(i, j, p_{ij}^k)` for each `k`, sorted by `(i, j)`.
    p: Vec<Vec<(u32, u32, u32)>>,
}

impl CoherentConfiguration {
    /// Validates the axioms and computes the intersection numbers.
    ///
    /// `colors[x·n + y]` is the class of `(x, y)`.
    pub fn from_color_matrix(n: usize, colors: Vec<u32>) -> Result<Self, CoherentError> {
        if colors.len() != n * n {
            return Err(CoherentError::Size {
                expected: n * n,
                got: colors.len(),
            });
        }
        let rank = colors.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        let mut class_sizes = vec![0usize; rank];
        let mut first_cell = vec![None; rank];
        for (idx, &c) in colors.iter().enumerate() {
            class_sizes[c as usize] += 1;
            first_cell[c as usize].get_or_insert((idx / n, idx % n));
        }
        if let Some(unused) = class_sizes.iter().position(|&s| s == 0) {
            return Err(CoherentError::NonContiguous(unused));
        }
        let first_cell: Vec<(usize, usize)> = first_cell.into_iter().map(Option::unwrap).collect();
        let at = |x: usize, y: usize| colors[x * n + y] as usize;

        for x in 0..n {
            for y in 0..n {
                let c = at(x, y);
                let (fx, fy) = first_cell[c];
                if (fx == fy) != (x == y) {
                    return Err(CoherentError::DiagonalNotUnion {
                        class: c,
                        cell: (x, y),
                    });
                }
            }
        }
        let pairing: Vec<usize> = first_cell.iter().map(|&(x, y)| at(y, x)).collect();
        for x in 0..n {
            for y in 0..n {
                let c = at(x, y);
                if at(y, x) != pairing[c] {
                    return Err(CoherentError::TransposeNotClosed {
                        class: c,
                        cell: (x, y),
                    });
                }
            }
        }

        let codes = |x: usize, y: usize| -> Vec<u64> {
            let mut v: Vec<u64> = (0..n)
                .map(|z| (at(x, z) * rank + at(z, y)) as u64)
                .collect();
            v.sort_unstable();
            v
        };
        let reference: Vec<Vec<u64>> = first_cell.iter().map(|&(x, y)| codes(x, y)).collect();
        let mismatch = (0..n * n).into_par_iter().find_first(|&idx| {
            let (x, y) = (idx / n, idx % n);
            codes(x, y) != reference[at(x, y)]
        });
        if let Some(idx) = mismatch {
            let (x, y) = (idx / n, idx % n);
            let k = at(x, y);
            let got = codes(x, y);
            let code = got
                .iter()
                .zip(&reference[k])
                .find(|(a, b)| a != b)
                .map(|(a, _)| *a)
                .unwrap_or(0) as usize;
            return Err(CoherentError::IntersectionInconsistent {
                i: code / rank,
                j: code % rank,
                k,
                cell: (x, y),
            });
        }
        let p = reference
            .iter()
            .map(|codes| {
                let mut out: Vec<(u32, u32, u32)> = Vec::new();
                for &code in codes {
                    let (i, j) = ((code as usize / rank) as u32, (code as usize % rank) as u32);
                    match out.last_mut() {
                        Some(last) if last.0 == i && last.1 == j => last.2 += 1,
                        _ => out.push((i, j, 1)),
                    }
                }
                out
            })
            .collect();
        let mut fibers: Vec<usize> = (0..n).map(|x| at(x, x)).collect();
        fibers.sort_unstable();
        fibers.dedup();
        Ok(CoherentConfiguration {
            n,
            rank,
            color: colors,
            fibers,
            pairing,
            class_sizes,
            p,
        })
    }

    /// Coarsest coherent configuration refining {diagonal, edges, non-edges}
    /// of `g`, by two-dimensional Weisfeiler–Leman refinement.
    pub fn wl2_closure(g: &Graph) -> Self {
        let n = g.n();
        let labels: Vec<u64> = (0..n * n)
            .map(|idx| {
                let (x, y) = (idx / n, idx % n);
                if x == y {
                    0
                } else if g.adjacent(x, y) {
                    1
                } else {
                    2
                }
            })
            .collect();
        let colors = wl2_refine(n, normalize(&labels));
        CoherentConfiguration::from_color_matrix(n, colors)
            .expect("stable two-dimensional refinement is coherent")
    }

    /// The configuration of orbits of `g` on ordered pairs.
    pub fn from_group_orbitals(g: &PermGroup) -> Self {
        let orbits = PairOrbits::compute(g.degree(), g.generators());
        CoherentConfiguration::from_color_matrix(g.degree(), orbits.color)
            .expect("orbital partitions are coherent")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of classes.
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn class_of(&self, x: usize, y: usize) -> usize {
        self.color[x * self.n + y] as usize
    }

    pub fn colors(&self) -> &[u32] {
        &self.color
    }

    /// Diagonal classes.
    pub fn fibers(&self) -> &[usize] {
        &self.fibers
    }

    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    /// `p_{ij}^k`.
    pub fn p(&self, i: usize, j: usize, k: usize) -> u32 {
        let row = &self.p[k];
        row.binary_search_by(|&(a, b, _)| (a as usize, b as usize).cmp(&(i, j)))
            .map(|pos| row[pos].2)
            .unwrap_or(0)
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.rank).all(|k| {
            self.p[k]
                .iter()
                .all(|&(i, j, c)| self.p(j as usize, i as usize, k) == c)
        })
    }

    /// Whether every class is a union of classes of `finer`, i.e. `finer`
    /// refines this configuration.
    pub fn is_refined_by(&self, finer: &CoherentConfiguration) -> bool {
        if finer.n != self.n {
            return false;
        }
        let mut image = vec![u32::MAX; finer.rank];
        finer.color.iter().zip(&self.color).all(|(&f, &c)| {
            let slot = &mut image[f as usize];
            if *slot == u32::MAX {
                *slot = c;
            }
            *slot == c
        })
    }

    /// Text format: `"n r"`, then `n` rows of `n` class indices.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{} {}", self.n, self.rank).unwrap();
        for x in 0..self.n {
            let row: Vec<String> = (0..self.n)
                .map(|y| self.class_of(x, y).to_string())
                .collect();
            writeln!(s, "{}", row.join(" ")).unwrap();
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, CoherentError> {
        let err = |line: usize, msg: &str| CoherentError::Parse {
            line,
            msg: msg.to_string(),
        };
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| err(1, "missing header"))?;
        let (n, r) = crate::graph::parse_pair(header).ok_or_else(|| err(1, "expected \"n r\""))?;
        if n > 1024 {
            return Err(err(1, "configuration too large"));
        }
        let mut colors = Vec::with_capacity(n * n);
        for x in 0..n {
            let line = lines.next().ok_or_else(|| err(x + 2, "truncated matrix"))?;
            let row: Vec<usize> = line
                .split(' ')
                .map(parse_decimal)
                .collect::<Option<_>>()
                .ok_or_else(|| err(x + 2, "expected space-separated class indices"))?;
            if row.len() != n {
                return Err(err(x + 2, "row length differs from n"));
            }
            if row.iter().any(|&c| c >= r) {
                return Err(err(x + 2, "class index out of range"));
            }
            colors.extend(row.into_iter().map(|c| c as u32));
        }
        if lines.any(|l| !l.is_empty()) {
            return Err(err(n + 2, "trailing content after matrix"));
        }
        let cc = CoherentConfiguration::from_color_matrix(n, colors)?;
        if cc.rank != r {
            return Err(err(1, "declared class count does not match the matrix"));
        }
        Ok(cc)
    }
}

fn normalize(labels: &[u64]) -> Vec<u32> {
    let mut distinct = labels.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    labels
        .iter()
        .map(|l| distinct.binary_search(l).unwrap() as u32)
        .collect()
}

/// Recolors each pair by its old color and the multiset of color pairs
/// `(c(x,z), c(z,y))` until the number of colors stops growing. New colors
/// are ranks of sorted signatures, so the result does not depend on the
/// number of worker threads.
fn wl2_refine(n: usize, mut colors: Vec<u32>) -> Vec<u32> {
    let mut count = colors.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
    loop {
        let current = &colors;
        let signatures: Vec<Vec<u64>> = (0..n * n)
            .into_par_iter()
            .map(|idx| {
                let (x, y) = (idx / n, idx % n);
                let mut sig: Vec<u64> = Vec::with_capacity(n + 1);
                for z in 0..n {
                    sig.push(current[x * n + z] as u64 * count as u64 + current[z * n + y] as u64);
                }
                sig.sort_unstable();
                sig.insert(0, current[idx] as u64);
                sig
            })
            .collect();
        let mut order: Vec<usize> = (0..n * n).collect();
        order.par_sort_by(|&a, &b| signatures[a].cmp(&signatures[b]));
        let mut next = vec![0u32; n * n];
        let mut c = 0u32;
        for w in 0..order.len() {
            if w > 0 && signatures[order[w]] != signatures[order[w - 1]] {
                c += 1;
            }
            next[order[w]] = c;
        }
        let new_count = if n == 0 { 0 } else { c as usize + 1 };
        colors = next;
        if new_count == count {
            return colors;
        }
        count = new_count;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;
    use crate::perm::named as groups;
    use crate::perm::Permutation;

    fn pentagon_colors() -> Vec<u32> {
        let g = named::cycle(5);
        (0..25)
            .map(|i| {
                let (x, y) = (i / 5, i % 5);
                if x == y {
                    0
                } else if g.adjacent(x, y) {
                    1
                } else {
                    2
                }
            })
            .collect()
    }

    #[test]
    fn pentagon_is_coherent() {
        let cc = CoherentConfiguration::from_color_matrix(5, pentagon_colors()).unwrap();
        assert_eq!(cc.rank(), 3);
        assert_eq!(cc.fibers(), &[0]);
        assert_eq!(cc.p(1, 1, 0), 2);
        assert_eq!(cc.p(1, 1, 1), 0);
        assert_eq!(cc.p(1, 1, 2), 1);
        assert!(cc.is_commutative());
    }

    #[test]
    fn trivial_scheme() {
        let colors = (0..9).map(|i| u32::from(i / 3 != i % 3)).collect();
        let cc = CoherentConfiguration::from_color_matrix(3, colors).unwrap();
        assert_eq!(cc.rank(), 2);
        assert_eq!(cc.p(1, 1, 0), 2);
        assert_eq!(cc.p(1, 1, 1), 1);
    }

    #[test]
    fn axiom_violations() {
        // a directed triangle colored apart from its reverse, but with the
        // reverse merged into the diagonal class
        let mut colors = vec![0u32; 9];
        colors[1] = 1;
        assert!(matches!(
            CoherentConfiguration::from_color_matrix(3, colors),
            Err(CoherentError::DiagonalNotUnion { .. })
        ));
        // (0,1) in class 1 but (1,0) in class 2 together with (0,2)
        let colors = vec![0, 1, 2, 2, 0, 2, 2, 2, 0];
        assert!(matches!(
            CoherentConfiguration::from_color_matrix(3, colors),
            Err(CoherentError::TransposeNotClosed { .. })
        ));
        // path 0-1-2 colored as a graph: not coherent
        let colors = vec![0, 1, 2, 1, 0, 1, 2, 1, 0];
        assert!(matches!(
            CoherentConfiguration::from_color_matrix(3, colors),
            Err(CoherentError::IntersectionInconsistent { .. })
        ));
        assert!(matches!(
            CoherentConfiguration::from_color_matrix(2, vec![0, 2, 2, 0]),
            Err(CoherentError::NonContiguous(1))
        ));
    }

    #[test]
    fn closure_examples() {
        let c5 = CoherentConfiguration::wl2_closure(&named::cycle(5));
        assert_eq!(c5.rank(), 3);
        assert_eq!(c5.colors(), pentagon_colors().as_slice());
        let p3 = CoherentConfiguration::wl2_closure(&named::path(3));
        assert!(p3.rank() > 3);
        assert_eq!(p3.fibers().len(), 2);
        assert_eq!(
            CoherentConfiguration::wl2_closure(&named::petersen()).rank(),
            3
        );
    }

    #[test]
    fn group_configurations() {
        let s3 = CoherentConfiguration::from_group_orbitals(&groups::symmetric(3));
        assert_eq!(s3.rank(), 2);
        let swap =
            PermGroup::new(3, vec![Permutation::from_cycles(3, &[vec![0, 1]]).unwrap()]).unwrap();
        let cc = CoherentConfiguration::from_group_orbitals(&swap);
        assert_eq!(cc.fibers().len(), 2);
        let w = CoherentConfiguration::from_group_orbitals(&groups::wreath_square_product(10));
        assert_eq!(w.rank(), 3);
        assert_eq!(w.class_sizes(), &[100, 1800, 8100]);
    }

    #[test]
    fn text_format() {
        let cc = CoherentConfiguration::from_color_matrix(5, pentagon_colors()).unwrap();
        let text = cc.to_text();
        assert!(text.starts_with("5 3\n0 1 2 2 1\n"));
        assert_eq!(CoherentConfiguration::parse(&text).unwrap(), cc);
        assert!(CoherentConfiguration::parse("2 2\n0 1\n").is_err());
        assert!(CoherentConfiguration::parse("2 3\n0 1\n1 0\n").is_err());
        assert!(CoherentConfiguration::parse("2 2\n0 1\n1 2\n").is_err());
    }
}
