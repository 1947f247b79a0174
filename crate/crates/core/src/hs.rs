//! The Higman–Sims graph on a star vertex, the 22 points and the 77 blocks of
//! S(3,6,22).

use thiserror::Error;

use crate::design::SteinerSystem;
use crate::graph::{Graph, SrgParams};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HsError {
    #[error("design must have 22 points and 77 blocks of size 6")]
    BadDesign,
    #[error("vertex {vertex} has degree {degree}, expected 22")]
    Degree { vertex: usize, degree: usize },
    #[error("graph is not strongly regular")]
    NotStronglyRegular,
    #[error("graph has parameters {0}, expected (100, 22, 0, 6)")]
    WrongParameters(SrgParams),
}

/// Vertex numbering: star = 0, points = 1..=22, blocks = 23..=99.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HsVertexLabeling {
    pub points: usize,
    pub blocks: usize,
}

impl HsVertexLabeling {
    pub const STAR: usize = 0;

    pub fn point(&self, p: usize) -> usize {
        1 + p
    }

    pub fn block(&self, b: usize) -> usize {
        1 + self.points + b
    }

    pub fn total(&self) -> usize {
        1 + self.points + self.blocks
    }

    pub fn point_vertices(&self) -> std::ops::Range<usize> {
        1..1 + self.points
    }

    pub fn block_vertices(&self) -> std::ops::Range<usize> {
        1 + self.points..self.total()
    }
}

pub const HS_PARAMS: SrgParams = SrgParams {
    n: 100,
    k: 22,
    lambda: 0,
    mu: 6,
};

/// Builds the graph: star ~ every point, point ~ block when incident, and
/// block ~ block when disjoint.
pub fn build_hs_graph(design: &SteinerSystem) -> Result<(Graph, HsVertexLabeling), HsError> {
    if design.v != 22 || design.blocks.len() != 77 || design.blocks.iter().any(|b| b.len() != 6) {
        return Err(HsError::BadDesign);
    }
    let labels = HsVertexLabeling {
        points: design.v,
        blocks: design.blocks.len(),
    };
    let mut edges = Vec::with_capacity(1100);
    for p in 0..labels.points {
        edges.push((HsVertexLabeling::STAR, labels.point(p)));
    }
    for (b, block) in design.blocks.iter().enumerate() {
        for &p in block {
            edges.push((labels.point(p), labels.block(b)));
        }
        for (c, other) in design.blocks.iter().enumerate().skip(b + 1) {
            if block.iter().all(|p| !other.contains(p)) {
                edges.push((labels.block(b), labels.block(c)));
            }
        }
    }
    let g = Graph::new(labels.total(), &edges).map_err(|_| HsError::BadDesign)?;
    for vertex in 0..g.n() {
        let degree = g.degree(vertex);
        if degree != 22 {
            return Err(HsError::Degree { vertex, degree });
        }
    }
    Ok((g, labels))
}

/// Confirms the graph is strongly regular with parameters (100, 22, 0, 6).
pub fn verify_hs(g: &Graph) -> Result<SrgParams, HsError> {
    let params = g.check_srg().ok_or(HsError::NotStronglyRegular)?;
    if params != HS_PARAMS {
        return Err(HsError::WrongParameters(params));
    }
    Ok(params)
}

/// Builds S(3,6,22) and then the Higman–Sims graph.
pub fn higman_sims_graph() -> Graph {
    let design = SteinerSystem::s3622().expect("S(3,6,22) construction");
    build_hs_graph(&design).expect("Higman-Sims construction").0
}

/// True iff no two adjacent vertices have a common neighbour.
pub fn is_triangle_free(g: &Graph) -> bool {
    g.edges()
        .iter()
        .all(|&(u, v)| g.common_neighbor_count(u, v) == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn construction_degrees() {
        let design = SteinerSystem::s3622().unwrap();
        let (g, labels) = build_hs_graph(&design).unwrap();
        assert_eq!(g.n(), 100);
        assert_eq!(g.edge_count(), 1100);
        assert_eq!(g.degree(0), 22);
        let block_vertex = labels.block(0);
        let point_nbrs = g
            .neighbors(block_vertex)
            .filter(|&u| labels.point_vertices().contains(&u))
            .count();
        let block_nbrs = g
            .neighbors(block_vertex)
            .filter(|&u| labels.block_vertices().contains(&u))
            .count();
        assert_eq!((point_nbrs, block_nbrs), (6, 16));
    }

    #[test]
    fn parameters_and_triangles() {
        let g = higman_sims_graph();
        assert_eq!(verify_hs(&g), Ok(HS_PARAMS));
        assert!(is_triangle_free(&g));
    }

    #[test]
    fn block_part_is_disjointness_graph() {
        let design = SteinerSystem::s3622().unwrap();
        let (g, labels) = build_hs_graph(&design).unwrap();
        let blocks: Vec<usize> = labels.block_vertices().collect();
        assert_eq!(g.induced(&blocks), design.disjoint_block_graph().unwrap());
    }

    #[test]
    fn rejects_bad_design() {
        let mut design = SteinerSystem::s3622().unwrap();
        design.blocks.pop();
        assert_eq!(build_hs_graph(&design), Err(HsError::BadDesign));
        assert!(matches!(
            verify_hs(&crate::graph::named::petersen()),
            Err(HsError::WrongParameters(_))
        ));
    }
}
