//! Permutations and permutation groups.
//!
//! Groups carry a lazily built base and strong generating set
//! ([`chain::StabChain`]) for order and membership, and the orbital machinery
//! used for the rank, subdegrees and the orbital-graph primitivity test.

pub mod chain;
pub mod orbital;
pub mod sample;

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigUint;
use thiserror::Error;

use crate::graph::parse_decimal;
pub use chain::StabChain;
pub use orbital::{block_system_oracle, BlockSystem, OrbitalDecomposition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("image list is not a bijection on 0..{0}")]
    NotBijection(usize),
    #[error("point {point} out of range for degree {degree}")]
    OutOfRange { point: usize, degree: usize },
    #[error("group is not transitive")]
    Intransitive,
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A bijection of `0..n` stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation {
            images: (0..n as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(PermError::NotBijection(n));
            }
            seen[x] = true;
        }
        Ok(Permutation {
            images: images.into_iter().map(|x| x as u32).collect(),
        })
    }

    /// Builds a permutation of degree `n` from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for &x in cycle {
                if x >= n {
                    return Err(PermError::OutOfRange {
                        point: x,
                        degree: n,
                    });
                }
                if touched[x] {
                    return Err(PermError::NotBijection(n));
                }
                touched[x] = true;
            }
            for (i, &x) in cycle.iter().enumerate() {
                images[x] = cycle[(i + 1) % cycle.len()];
            }
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.images[x] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &x)| i == x as usize)
    }

    /// `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(self.after(other))
    }

    /// Unchecked composition: `self(other(x))`.
    pub(crate) fn after(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: other
                .images
                .iter()
                .map(|&x| self.images[x as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn is_even(&self) -> bool {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut transpositions = 0;
        for start in 0..n {
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.apply(x);
                len += 1;
            }
            if len > 0 {
                transpositions += len - 1;
            }
        }
        transpositions % 2 == 0
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.apply(start) == start {
                continue;
            }
            let mut cycle = Vec::new();
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    /// Smallest point moved, if any.
    pub fn first_moved(&self) -> Option<usize> {
        (0..self.degree()).find(|&x| self.apply(x) != x)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(usize::to_string).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

/// A permutation group given by generators, with its stabiliser chain built
/// on first use.
#[derive(Debug, Clone)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    base_prefix: Vec<usize>,
    chain: OnceLock<StabChain>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, PermError> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(PermError::DegreeMismatch(degree, g.degree()));
        }
        Ok(PermGroup {
            degree,
            generators,
            base_prefix: Vec::new(),
            chain: OnceLock::new(),
        })
    }

    pub fn trivial(degree: usize) -> Self {
        PermGroup::new(degree, Vec::new()).unwrap()
    }

    /// Same group, but its chain will start with the given base points.
    pub fn with_base_prefix(&self, prefix: &[usize]) -> Self {
        PermGroup {
            degree: self.degree,
            generators: self.generators.clone(),
            base_prefix: prefix.to_vec(),
            chain: OnceLock::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn chain(&self) -> &StabChain {
        self.chain
            .get_or_init(|| StabChain::build(self.degree, &self.generators, &self.base_prefix))
    }

    pub fn order(&self) -> BigUint {
        self.chain().order()
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        p.degree() == self.degree && self.chain().contains(p)
    }

    /// Orbit of `x`, sorted.
    pub fn orbit(&self, x: usize) -> Vec<usize> {
        orbit_of(self.degree, &self.generators, x)
    }

    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree];
        let mut out = Vec::new();
        for x in 0..self.degree {
            if !seen[x] {
                let o = self.orbit(x);
                for &y in &o {
                    seen[y] = true;
                }
                out.push(o);
            }
        }
        out
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbit(0).len() == self.degree
    }

    /// Pointwise stabiliser of `x`, generated by the chain's strong generators.
    pub fn stabilizer(&self, x: usize) -> PermGroup {
        let g = self.with_base_prefix(&[x]);
        let gens = g.chain().stabilizer_generators(1);
        PermGroup::new(self.degree, gens).unwrap()
    }

    /// Rank, subdegrees and orbitals of a transitive group.
    pub fn orbitals(&self) -> Result<OrbitalDecomposition, PermError> {
        OrbitalDecomposition::compute(self)
    }

    /// A transitive group is primitive iff every non-diagonal orbital, united
    /// with its paired orbital, spans a connected graph.
    pub fn is_primitive(&self) -> Result<bool, PermError> {
        Ok(self.orbitals()?.all_orbital_graphs_connected())
    }

    /// Parses the generator file format: first line `"degree n"`, then one
    /// generator per line in cycle notation `(0 1 2)(3 4)` or as an image
    /// list `[1,2,0,4,3]`. Blank lines are ignored.
    pub fn parse(text: &str) -> Result<PermGroup, PermError> {
        let err = |line: usize, msg: &str| PermError::Parse {
            line,
            msg: msg.to_string(),
        };
        let mut lines = text.lines().enumerate();
        let degree = loop {
            let (i, line) = lines
                .next()
                .ok_or_else(|| err(1, "missing \"degree n\" line"))?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let rest = line
                .strip_prefix("degree")
                .ok_or_else(|| err(i + 1, "expected \"degree n\""))?;
            let n = parse_decimal(rest.trim()).ok_or_else(|| err(i + 1, "bad degree"))?;
            if n > crate::graph::MAX_VERTICES {
                return Err(err(i + 1, "degree too large"));
            }
            break n;
        };
        let mut gens = Vec::new();
        for (i, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let p = parse_generator(degree, line).map_err(|m| err(i + 1, &m))?;
            gens.push(p);
        }
        PermGroup::new(degree, gens)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("degree {}\n", self.degree);
        for g in &self.generators {
            s.push_str(&g.to_string());
            s.push('\n');
        }
        s
    }
}

fn parse_generator(degree: usize, line: &str) -> Result<Permutation, String> {
    if let Some(body) = line.strip_prefix('[') {
        let body = body.strip_suffix(']').ok_or("unterminated image list")?;
        let images: Vec<usize> = if body.trim().is_empty() {
            Vec::new()
        } else {
            body.split(',')
                .map(|s| parse_decimal(s.trim()))
                .collect::<Option<_>>()
                .ok_or("bad image list entry")?
        };
        if images.len() != degree {
            return Err(format!(
                "image list has {} entries, expected {degree}",
                images.len()
            ));
        }
        return Permutation::from_images(images).map_err(|e| e.to_string());
    }
    let mut cycles = Vec::new();
    let mut rest = line;
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or("expected '(' or '['")?;
        let close = body.find(')').ok_or("unterminated cycle")?;
        let cycle: Vec<usize> = body[..close]
            .split_whitespace()
            .map(parse_decimal)
            .collect::<Option<_>>()
            .ok_or("bad cycle entry")?;
        cycles.push(cycle);
        rest = body[close + 1..].trim_start();
    }
    Permutation::from_cycles(degree, &cycles).map_err(|e| e.to_string())
}

pub(crate) fn orbit_of(degree: usize, gens: &[Permutation], x: usize) -> Vec<usize> {
    let mut seen = vec![false; degree];
    seen[x] = true;
    let mut orbit = vec![x];
    let mut i = 0;
    while i < orbit.len() {
        let y = orbit[i];
        for g in gens {
            let z = g.apply(y);
            if !seen[z] {
                seen[z] = true;
                orbit.push(z);
            }
        }
        i += 1;
    }
    orbit.sort_unstable();
    orbit
}

/// Common generator sets.
pub mod named {
    use super::{PermGroup, Permutation};

    pub fn cycle(n: usize) -> Permutation {
        Permutation::from_images((0..n).map(|i| (i + 1) % n).collect()).unwrap()
    }

    pub fn cyclic(n: usize) -> PermGroup {
        PermGroup::new(n, vec![cycle(n)]).unwrap()
    }

    pub fn symmetric(n: usize) -> PermGroup {
        let mut gens = Vec::new();
        if n >= 2 {
            gens.push(cycle(n));
            gens.push(Permutation::from_cycles(n, &[vec![0, 1]]).unwrap());
        }
        PermGroup::new(n, gens).unwrap()
    }

    pub fn alternating(n: usize) -> PermGroup {
        let gens = (2..n)
            .map(|i| Permutation::from_cycles(n, &[vec![0, 1, i]]).unwrap())
            .collect();
        PermGroup::new(n, gens).unwrap()
    }

    pub fn dihedral(n: usize) -> PermGroup {
        let reflection = Permutation::from_images((0..n).map(|i| (n - i) % n).collect()).unwrap();
        PermGroup::new(n, vec![cycle(n), reflection]).unwrap()
    }

    /// `S_m wr S_2` in product action on `m²` points `(i, j) ↦ m·i + j`.
    pub fn wreath_square_product(m: usize) -> PermGroup {
        let n = m * m;
        let base = symmetric(m);
        let mut gens = Vec::new();
        for h in base.generators() {
            gens.push(
                Permutation::from_images((0..n).map(|x| m * h.apply(x / m) + x % m).collect())
                    .unwrap(),
            );
            gens.push(
                Permutation::from_images((0..n).map(|x| m * (x / m) + h.apply(x % m)).collect())
                    .unwrap(),
            );
        }
        gens.push(Permutation::from_images((0..n).map(|x| m * (x % m) + x / m).collect()).unwrap());
        PermGroup::new(n, gens).unwrap()
    }
}
