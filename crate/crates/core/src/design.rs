//! The projective plane PG(2,4), its hyperovals, and the Witt design
//! S(3,6,22) obtained by extending the plane by one point.

use std::fmt::Write as _;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{parse_decimal, Graph};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DesignError {
    #[error("hyperoval classification produced class sizes {0:?}, expected three classes of 56")]
    Classification(Vec<usize>),
    #[error("no hyperoval class extends the plane to a Steiner system")]
    NoValidExtension,
    #[error("design verification failed: {0:?}")]
    Verification(Vec<SteinerFailure>),
    #[error("block {block} is disjoint from {count} blocks, expected 16")]
    DisjointDegree { block: usize, count: usize },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// The field with four elements `{0, 1, ω, ω²}` encoded as `0, 1, 2, 3`,
/// with `ω² = ω + 1`. Addition is XOR of the bit encodings.
pub mod gf4 {
    pub const ADD: [[u8; 4]; 4] = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]];
    pub const MUL: [[u8; 4]; 4] = [[0, 0, 0, 0], [0, 1, 2, 3], [0, 2, 3, 1], [0, 3, 1, 2]];
    pub const INV: [u8; 4] = [0, 1, 3, 2];

    pub fn add(a: u8, b: u8) -> u8 {
        ADD[a as usize][b as usize]
    }

    pub fn mul(a: u8, b: u8) -> u8 {
        MUL[a as usize][b as usize]
    }
}

type Vec3 = [u8; 3];

fn dot(a: &Vec3, b: &Vec3) -> u8 {
    (0..3).fold(0, |acc, i| gf4::add(acc, gf4::mul(a[i], b[i])))
}

/// All nonzero vectors of GF(4)³ scaled so the first nonzero coordinate is 1,
/// in lexicographic order.
fn normalized_vectors() -> Vec<Vec3> {
    let mut out = Vec::new();
    for a in 0..4u8 {
        for b in 0..4u8 {
            for c in 0..4u8 {
                let v = [a, b, c];
                if v.iter().find(|&&x| x != 0) == Some(&1) {
                    out.push(v);
                }
            }
        }
    }
    out
}

/// Point-line incidence structure of PG(2,4).
#[derive(Debug, Clone)]
pub struct ProjectivePlane {
    /// Homogeneous coordinates of the 21 points.
    pub points: Vec<Vec3>,
    /// Each line as a sorted list of five point indices; lines sorted.
    pub lines: Vec<Vec<usize>>,
}

impl ProjectivePlane {
    /// Points are the 1-dimensional subspaces of GF(4)³; the line with dual
    /// coordinates `a` is the 2-dimensional subspace `{x : a·x = 0}`.
    pub fn pg24() -> Self {
        let points = normalized_vectors();
        let mut lines: Vec<Vec<usize>> = points
            .iter()
            .map(|a| {
                (0..points.len())
                    .filter(|&i| dot(a, &points[i]) == 0)
                    .collect()
            })
            .collect();
        lines.sort();
        ProjectivePlane { points, lines }
    }

    pub fn num_points(&self) -> usize {
        self.points.len()
    }

    pub fn line_masks(&self) -> Vec<u32> {
        self.lines.iter().map(|l| mask_of(l)).collect()
    }

    /// Checks the plane axioms: 5 points per line, 5 lines per point, and
    /// every pair of distinct points on exactly one line.
    pub fn is_valid(&self) -> bool {
        let v = self.num_points();
        if self.lines.iter().any(|l| l.len() != 5) {
            return false;
        }
        let masks = self.line_masks();
        for p in 0..v {
            if masks.iter().filter(|&&m| m >> p & 1 == 1).count() != 5 {
                return false;
            }
            for q in p + 1..v {
                let pair = (1u32 << p) | (1 << q);
                if masks.iter().filter(|&&m| m & pair == pair).count() != 1 {
                    return false;
                }
            }
        }
        true
    }

    /// All 6-sets of points meeting every line in at most two points, as
    /// sorted index lists in lexicographic order.
    pub fn hyperovals(&self) -> Vec<Vec<usize>> {
        let masks = self.line_masks();
        let v = self.num_points();
        let mut found: Vec<Vec<usize>> = (0..v)
            .into_par_iter()
            .flat_map_iter(|first| {
                let mut local = Vec::new();
                let mut chosen = vec![first];
                extend_arc(&masks, v, 1u32 << first, &mut chosen, &mut local);
                local
            })
            .collect();
        found.sort();
        found
    }
}

fn mask_of(points: &[usize]) -> u32 {
    points.iter().fold(0, |m, &p| m | 1 << p)
}

// Depth-first over increasing point indices, pruning as soon as a line holds three chosen points.
fn extend_arc(
    masks: &[u32],
    v: usize,
    set: u32,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if chosen.len() == 6 {
        out.push(chosen.clone());
        return;
    }
    let last = *chosen.last().unwrap();
    for p in last + 1..v {
        let next = set | 1 << p;
        if masks.iter().any(|&m| (m & next).count_ones() > 2) {
            continue;
        }
        chosen.push(p);
        extend_arc(masks, v, next, chosen, out);
        chosen.pop();
    }
}

/// Partitions hyperovals into the classes of the equivalence relation
/// generated by "meet in an even number of points".
///
/// For PG(2,4) this yields three classes of 56; anything else is an error.
pub fn classify_hyperovals(hyperovals: &[Vec<usize>]) -> Result<Vec<Vec<Vec<usize>>>, DesignError> {
    let masks: Vec<u32> = hyperovals.iter().map(|h| mask_of(h)).collect();
    let mut parent: Vec<usize> = (0..masks.len()).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for a in 0..masks.len() {
        for b in a + 1..masks.len() {
            if (masks[a] & masks[b]).count_ones() % 2 == 0 {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut classes: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut root_of_class: Vec<usize> = Vec::new();
    for (i, h) in hyperovals.iter().enumerate() {
        let r = find(&mut parent, i);
        match root_of_class.iter().position(|&x| x == r) {
            Some(c) => classes[c].push(h.clone()),
            None => {
                root_of_class.push(r);
                classes.push(vec![h.clone()]);
            }
        }
    }
    let sizes: Vec<usize> = classes.iter().map(Vec::len).collect();
    if sizes != [56, 56, 56] {
        return Err(DesignError::Classification(sizes));
    }
    Ok(classes)
}

/// A 3-(v, k, 1) design given by its block list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteinerSystem {
    pub t: usize,
    pub k: usize,
    pub v: usize,
    /// Sorted blocks, lexicographically ordered.
    pub blocks: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SteinerFailure {
    BlockSize { block: usize, size: usize },
    PointOutOfRange { block: usize, point: usize },
    TripleUncovered([usize; 3]),
    TripleRepeated { triple: [usize; 3], count: usize },
    BlockCount(usize),
    PointDegree { point: usize, count: usize },
    PairDegree { pair: [usize; 2], count: usize },
}

/// Outcome of [`verify_steiner`]; every failed assertion is listed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SteinerReport {
    pub triples_checked: usize,
    pub failures: Vec<SteinerFailure>,
}

impl SteinerReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

impl SteinerSystem {
    /// S(3,6,22): the 21 lines of PG(2,4) extended by the new point 21, plus
    /// the 56 hyperovals of one even-intersection class.
    pub fn s3622() -> Result<SteinerSystem, DesignError> {
        let plane = ProjectivePlane::pg24();
        let classes = classify_hyperovals(&plane.hyperovals())?;
        let infinity = plane.num_points();
        for class in &classes {
            let mut blocks: Vec<Vec<usize>> = plane
                .lines
                .iter()
                .map(|l| {
                    let mut b = l.clone();
                    b.push(infinity);
                    b
                })
                .collect();
            blocks.extend(class.iter().cloned());
            blocks.sort();
            let s = SteinerSystem {
                t: 3,
                k: 6,
                v: infinity + 1,
                blocks,
            };
            if verify_steiner(&s).passed() {
                return Ok(s);
            }
        }
        Err(DesignError::NoValidExtension)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "{} {}", self.v, self.blocks.len()).unwrap();
        for b in &self.blocks {
            let row: Vec<String> = b.iter().map(usize::to_string).collect();
            writeln!(s, "{}", row.join(" ")).unwrap();
        }
        s
    }

    /// Parses the design text format: `"v b"`, then `b` lines of six sorted
    /// point labels, lines in lexicographic order.
    pub fn parse(text: &str) -> Result<SteinerSystem, DesignError> {
        let err = |line: usize, msg: &str| DesignError::Parse {
            line,
            msg: msg.to_string(),
        };
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| err(1, "missing header"))?;
        let (v, b) = crate::graph::parse_pair(header).ok_or_else(|| err(1, "expected \"v b\""))?;
        if v > 64 || b > 10_000 {
            return Err(err(1, "design too large"));
        }
        let mut blocks: Vec<Vec<usize>> = Vec::with_capacity(b);
        for i in 0..b {
            let line = lines
                .next()
                .ok_or_else(|| err(i + 2, "truncated block list"))?;
            let block: Vec<usize> = line
                .split(' ')
                .map(parse_decimal)
                .collect::<Option<_>>()
                .ok_or_else(|| err(i + 2, "expected space-separated labels"))?;
            if block.len() != 6 {
                return Err(err(i + 2, "blocks must have six points"));
            }
            if block.windows(2).any(|w| w[0] >= w[1]) {
                return Err(err(i + 2, "block labels must be strictly increasing"));
            }
            if block.iter().any(|&p| p >= v) {
                return Err(err(i + 2, "point label out of range"));
            }
            if blocks.last().is_some_and(|prev| *prev >= block) {
                return Err(err(i + 2, "blocks must be strictly sorted"));
            }
            blocks.push(block);
        }
        if lines.any(|l| !l.is_empty()) {
            return Err(err(b + 2, "trailing content after block list"));
        }
        Ok(SteinerSystem {
            t: 3,
            k: 6,
            v,
            blocks,
        })
    }

    /// Graph on the blocks, two blocks adjacent when disjoint. Must be 16-regular.
    pub fn disjoint_block_graph(&self) -> Result<Graph, DesignError> {
        let masks: Vec<u64> = self.blocks.iter().map(|b| block_mask(b)).collect();
        let g = Graph::from_fn(masks.len(), |a, b| masks[a] & masks[b] == 0);
        for block in 0..g.n() {
            let count = g.degree(block);
            if count != 16 {
                return Err(DesignError::DisjointDegree { block, count });
            }
        }
        Ok(g)
    }
}

fn block_mask(b: &[usize]) -> u64 {
    b.iter().fold(0, |m, &p| m | 1 << p)
}

/// Exhaustively checks the S(3,6,22) properties: every triple in exactly one
/// block, 77 blocks, 21 blocks per point and 5 per pair.
pub fn verify_steiner(s: &SteinerSystem) -> SteinerReport {
    let mut report = SteinerReport::default();
    let v = s.v;
    for (i, b) in s.blocks.iter().enumerate() {
        if b.len() != 6 {
            report.failures.push(SteinerFailure::BlockSize {
                block: i,
                size: b.len(),
            });
        }
        if let Some(&point) = b.iter().find(|&&p| p >= v || p >= 64) {
            report
                .failures
                .push(SteinerFailure::PointOutOfRange { block: i, point });
        }
    }
    if !report.failures.is_empty() {
        return report;
    }
    let masks: Vec<u64> = s.blocks.iter().map(|b| block_mask(b)).collect();
    for a in 0..v {
        for b in a + 1..v {
            for c in b + 1..v {
                let t = 1u64 << a | 1 << b | 1 << c;
                let count = masks.iter().filter(|&&m| m & t == t).count();
                report.triples_checked += 1;
                match count {
                    1 => {}
                    0 => report
                        .failures
                        .push(SteinerFailure::TripleUncovered([a, b, c])),
                    _ => report.failures.push(SteinerFailure::TripleRepeated {
                        triple: [a, b, c],
                        count,
                    }),
                }
            }
        }
    }
    if s.blocks.len() != 77 {
        report
            .failures
            .push(SteinerFailure::BlockCount(s.blocks.len()));
    }
    for point in 0..v {
        let count = masks.iter().filter(|&&m| m >> point & 1 == 1).count();
        if count != 21 {
            report
                .failures
                .push(SteinerFailure::PointDegree { point, count });
        }
        for q in point + 1..v {
            let pair = 1u64 << point | 1 << q;
            let count = masks.iter().filter(|&&m| m & pair == pair).count();
            if count != 5 {
                report.failures.push(SteinerFailure::PairDegree {
                    pair: [point, q],
                    count,
                });
            }
        }
    }
    report
}
