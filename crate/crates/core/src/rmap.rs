//! Rooted bipartite maps as rotation systems: a pair of permutations on the
//! edge labels `{1..k}` whose cycles are the counterclockwise angular orders
//! of edges around white and black vertices. Faces, genus, degrees, the
//! descendant relation and the expander condition all derive from this pair.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::Permutation;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapError {
    #[error("rotations act on different edge sets ({white} vs {black})")]
    SizeMismatch { white: usize, black: usize },
    #[error("expected {expected} black weights, got {got}")]
    WeightCountMismatch { expected: usize, got: usize },
    #[error("black weights must be positive")]
    NonPositiveWeight,
    #[error("root {root} is not an edge label in 1..={k}")]
    BadRoot { root: usize, k: usize },
    #[error("the underlying graph is not connected")]
    Disconnected,
    #[error("unknown vertex {side:?} #{index}")]
    UnknownVertex { side: Side, index: usize },
    #[error("operation requires a one-face map; this map has {faces} faces")]
    MultiFace { faces: usize },
    #[error("map schema is invalid: {reason}")]
    BadSchema { reason: String },
}

/// Which colour class a vertex (or an edge end) belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    White,
    Black,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::White => Side::Black,
            Side::Black => Side::White,
        }
    }
}

/// A vertex, addressed by its colour class and its position in the canonical
/// cycle order of the owning rotation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId {
    pub side: Side,
    pub index: usize,
}

/// The angular sector counterclockwise-after an edge end at its vertex.
/// A map with `k` edges has exactly `2k` corners, one per edge end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Corner {
    pub edge: usize,
    pub side: Side,
}

impl Corner {
    /// Encodes the corner as a point of the face permutation on `{1..2k}`:
    /// white corners are `1..=k`, black corners are `k+1..=2k`.
    pub fn to_point(self, k: usize) -> usize {
        match self.side {
            Side::White => self.edge,
            Side::Black => k + self.edge,
        }
    }

    pub fn from_point(point: usize, k: usize) -> Corner {
        if point <= k {
            Corner {
                edge: point,
                side: Side::White,
            }
        } else {
            Corner {
                edge: point - k,
                side: Side::Black,
            }
        }
    }
}

/// Ordered pairs `(from, to)` of white-vertex indices where `to` is reached
/// from some corner of `from` by a double step along the one-face boundary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescendantRelation {
    pub pairs: std::collections::BTreeSet<(usize, usize)>,
}

impl DescendantRelation {
    pub fn contains(&self, from: usize, to: usize) -> bool {
        self.pairs.contains(&(from, to))
    }
}

/// A rooted bipartite map: rotations for the two colour classes, a root
/// edge, and one positive weight per black vertex.
///
/// Face count is the cycle count of `compose(sigma_white, sigma_black)`;
/// a one-face map built from a factorization of the long cycle has its
/// boundary reading the edge labels as `1, 2, ..., k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "MapSchema", into = "MapSchema")]
pub struct RootedBipartiteMap {
    k: usize,
    sigma_white: Permutation,
    sigma_black: Permutation,
    root: usize,
    black_weights: Vec<u64>,
    white_cycles: Vec<Vec<usize>>,
    black_cycles: Vec<Vec<usize>>,
    face_count: usize,
    genus: usize,
}

impl RootedBipartiteMap {
    /// Validates and assembles a map from its rotation pair. `weights` may
    /// be omitted for single-black maps, where the weight is forced to the
    /// number of white vertices.
    pub fn from_factorization(
        sigma_white: Permutation,
        sigma_black: Permutation,
        weights: Option<Vec<u64>>,
        root: usize,
    ) -> Result<Self, MapError> {
        let k = sigma_white.size();
        if sigma_black.size() != k {
            return Err(MapError::SizeMismatch {
                white: k,
                black: sigma_black.size(),
            });
        }
        if root < 1 || root > k {
            return Err(MapError::BadRoot { root, k });
        }
        let white_cycles = sigma_white.cycle_decomposition().cycles;
        let black_cycles = sigma_black.cycle_decomposition().cycles;

        if !is_connected(k, &white_cycles, &black_cycles) {
            return Err(MapError::Disconnected);
        }

        let black_weights = match weights {
            Some(w) => {
                if w.len() != black_cycles.len() {
                    return Err(MapError::WeightCountMismatch {
                        expected: black_cycles.len(),
                        got: w.len(),
                    });
                }
                if w.contains(&0) {
                    return Err(MapError::NonPositiveWeight);
                }
                w
            }
            None => {
                if black_cycles.len() == 1 {
                    vec![white_cycles.len() as u64]
                } else {
                    return Err(MapError::WeightCountMismatch {
                        expected: black_cycles.len(),
                        got: 0,
                    });
                }
            }
        };

        let boundary = sigma_white
            .compose(&sigma_black)
            .expect("sizes checked above");
        let face_count = boundary.cycle_count();
        let vertices = white_cycles.len() + black_cycles.len();
        // Euler: 2 - 2g = V - k + F. Connectivity makes the genus a
        // non-negative integer; a failure here is a convention bug.
        let chi = vertices as i64 - k as i64 + face_count as i64;
        assert!(
            chi <= 2 && (2 - chi) % 2 == 0,
            "Euler characteristic {chi} is not of the form 2 - 2g"
        );
        let genus = ((2 - chi) / 2) as usize;

        Ok(RootedBipartiteMap {
            k,
            sigma_white,
            sigma_black,
            root,
            black_weights,
            white_cycles,
            black_cycles,
            face_count,
            genus,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn sigma_white(&self) -> &Permutation {
        &self.sigma_white
    }

    pub fn sigma_black(&self) -> &Permutation {
        &self.sigma_black
    }

    pub fn black_weights(&self) -> &[u64] {
        &self.black_weights
    }

    /// White vertices as canonical rotation cycles.
    pub fn white_cycles(&self) -> &[Vec<usize>] {
        &self.white_cycles
    }

    pub fn black_cycles(&self) -> &[Vec<usize>] {
        &self.black_cycles
    }

    pub fn white_count(&self) -> usize {
        self.white_cycles.len()
    }

    pub fn black_count(&self) -> usize {
        self.black_cycles.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.white_cycles.len() + self.black_cycles.len()
    }

    pub fn face_count(&self) -> usize {
        self.face_count
    }

    /// The genus from `2 - 2g = V - k + F`.
    pub fn genus(&self) -> usize {
        self.genus
    }

    /// True when the single face reads the edge labels as `1, 2, ..., k`,
    /// i.e. `compose(sigma_white, sigma_black)` is the long cycle.
    pub fn boundary_is_canonical(&self) -> bool {
        self.face_count == 1
            && self
                .sigma_white
                .compose(&self.sigma_black)
                .expect("same size")
                == Permutation::long_cycle(self.k)
    }

    /// Index of the white vertex owning an edge.
    pub fn white_vertex_of(&self, edge: usize) -> usize {
        self.white_cycles
            .iter()
            .position(|c| c.contains(&edge))
            .expect("edge label in range")
    }

    pub fn black_vertex_of(&self, edge: usize) -> usize {
        self.black_cycles
            .iter()
            .position(|c| c.contains(&edge))
            .expect("edge label in range")
    }

    pub fn degree(&self, vertex: VertexId) -> Result<usize, MapError> {
        let cycles = match vertex.side {
            Side::White => &self.white_cycles,
            Side::Black => &self.black_cycles,
        };
        cycles
            .get(vertex.index)
            .map(Vec::len)
            .ok_or(MapError::UnknownVertex {
                side: vertex.side,
                index: vertex.index,
            })
    }

    /// The face permutation on the `2k` corners, faces listed in clockwise
    /// boundary order: a white corner of edge `e` steps to the black corner
    /// of `sigma_black(e)`, and a black corner of `e` to the white corner of
    /// `sigma_white(e)`. The double step on white corners is therefore
    /// `compose(sigma_white, sigma_black)`, so a factorization map has one
    /// face whose white corners appear in the edge order `1, 2, ..., k`.
    pub fn face_corner_permutation(&self) -> Permutation {
        let k = self.k;
        let mut images = vec![0usize; 2 * k];
        for e in 1..=k {
            let white = Corner {
                edge: e,
                side: Side::White,
            };
            let black = Corner {
                edge: e,
                side: Side::Black,
            };
            images[white.to_point(k) - 1] = Corner {
                edge: self.sigma_black.apply(e),
                side: Side::Black,
            }
            .to_point(k);
            images[black.to_point(k) - 1] = Corner {
                edge: self.sigma_white.apply(e),
                side: Side::White,
            }
            .to_point(k);
        }
        Permutation::from_images(images).expect("face steps form a bijection")
    }

    /// Successor of an edge along the boundary: the edge of the white corner
    /// two face steps after the white corner of `edge`.
    pub fn boundary_successor(&self, edge: usize) -> usize {
        self.sigma_white.apply(self.sigma_black.apply(edge))
    }

    /// The descendant relation on white vertices of a one-face map:
    /// `(i, j)` is present when some corner of white vertex `i` reaches a
    /// corner of white vertex `j` in two steps of the boundary walk — the
    /// walk oriented the way the sliding engine's residual permutation
    /// goes, which sends the white corner of `boundary_successor(e)` to the
    /// white corner of `e`.
    pub fn descendants(&self) -> Result<DescendantRelation, MapError> {
        if self.face_count != 1 {
            return Err(MapError::MultiFace {
                faces: self.face_count,
            });
        }
        let owner: Vec<usize> = (1..=self.k).map(|e| self.white_vertex_of(e)).collect();
        let mut pairs = std::collections::BTreeSet::new();
        for e in 1..=self.k {
            pairs.insert((owner[self.boundary_successor(e) - 1], owner[e - 1]));
        }
        Ok(DescendantRelation { pairs })
    }

    /// The expander test: one face, the Hall condition on every non-empty
    /// proper subset of black vertices (more white neighbours than the sum
    /// of its weights), and total weight equal to the white vertex count.
    pub fn is_expander(&self) -> bool {
        if self.face_count != 1 {
            return false;
        }
        let total: u64 = self.black_weights.iter().sum();
        if total != self.white_count() as u64 {
            return false;
        }
        let blacks = self.black_count();
        debug_assert!(
            blacks <= 32,
            "subset enumeration expects few black vertices"
        );
        for subset in 1..((1u64 << blacks) - 1) {
            let mut neighbour_whites = vec![false; self.white_count()];
            let mut weight_sum = 0u64;
            for (b, cycle) in self.black_cycles.iter().enumerate() {
                if subset & (1 << b) == 0 {
                    continue;
                }
                weight_sum += self.black_weights[b];
                for &e in cycle {
                    neighbour_whites[self.white_vertex_of(e)] = true;
                }
            }
            let neighbours = neighbour_whites.iter().filter(|&&x| x).count() as u64;
            if neighbours <= weight_sum {
                return false;
            }
        }
        true
    }

    /// Applies an edge relabelling to both rotations, the root and the
    /// weights (which follow their vertices into the new canonical order).
    pub fn relabel(&self, relabelling: &Permutation) -> Result<Self, MapError> {
        assert_eq!(relabelling.size(), self.k, "relabelling acts on the edges");
        let inv = relabelling.inverse();
        let conjugate = |p: &Permutation| {
            relabelling
                .compose(p)
                .and_then(|pi| pi.compose(&inv))
                .expect("sizes agree")
        };
        let sigma_white = conjugate(&self.sigma_white);
        let sigma_black = conjugate(&self.sigma_black);
        // Weights follow vertex identity: old black cycle i becomes the new
        // cycle whose minimum is the least relabelled edge of cycle i.
        let mut keyed: Vec<(usize, u64)> = self
            .black_cycles
            .iter()
            .zip(&self.black_weights)
            .map(|(cycle, &w)| {
                let min = cycle.iter().map(|&e| relabelling.apply(e)).min().unwrap();
                (min, w)
            })
            .collect();
        keyed.sort_unstable();
        let weights = keyed.into_iter().map(|(_, w)| w).collect();
        Self::from_factorization(
            sigma_white,
            sigma_black,
            Some(weights),
            relabelling.apply(self.root),
        )
    }

    /// Relabels the edges of a one-face map so the boundary reads
    /// `1, 2, ..., k` starting from the root edge, which becomes edge 1.
    /// Returns the renumbered map and the relabelling applied.
    pub fn renumber_from_root(&self) -> Result<(Self, Permutation), MapError> {
        if self.face_count != 1 {
            return Err(MapError::MultiFace {
                faces: self.face_count,
            });
        }
        let mut images = vec![0usize; self.k];
        let mut edge = self.root;
        for label in 1..=self.k {
            images[edge - 1] = label;
            edge = self.boundary_successor(edge);
        }
        let relabelling = Permutation::from_images(images).expect("boundary visits every edge");
        let renumbered = self.relabel(&relabelling)?;
        debug_assert!(renumbered.boundary_is_canonical());
        Ok((renumbered, relabelling))
    }
}

fn is_connected(k: usize, white_cycles: &[Vec<usize>], black_cycles: &[Vec<usize>]) -> bool {
    // Union-find over vertices; every edge links its white and black vertex.
    let n = white_cycles.len() + black_cycles.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut white_of = vec![0usize; k];
    for (i, cycle) in white_cycles.iter().enumerate() {
        for &e in cycle {
            white_of[e - 1] = i;
        }
    }
    let mut black_of = vec![0usize; k];
    for (i, cycle) in black_cycles.iter().enumerate() {
        for &e in cycle {
            black_of[e - 1] = white_cycles.len() + i;
        }
    }
    for e in 0..k {
        let a = find(&mut parent, white_of[e]);
        let b = find(&mut parent, black_of[e]);
        parent[a] = b;
    }
    let root = find(&mut parent, 0);
    (0..n).all(|v| find(&mut parent, v) == root)
}

/// Wire format for maps; field names and cycle form are part of the
/// interchange contract. Cycles are canonical (rotated to start at their
/// minimum, sorted by minimum) and must partition `1..=k` on both sides.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MapSchema {
    pub k: usize,
    pub sigma_white: Vec<Vec<usize>>,
    pub sigma_black: Vec<Vec<usize>>,
    pub root: usize,
    pub black_weights: Vec<u64>,
}

impl From<RootedBipartiteMap> for MapSchema {
    fn from(map: RootedBipartiteMap) -> MapSchema {
        MapSchema {
            k: map.k,
            sigma_white: map.white_cycles.clone(),
            sigma_black: map.black_cycles.clone(),
            root: map.root,
            black_weights: map.black_weights.clone(),
        }
    }
}

impl TryFrom<MapSchema> for RootedBipartiteMap {
    type Error = MapError;

    fn try_from(schema: MapSchema) -> Result<Self, MapError> {
        let build = |cycles: &[Vec<usize>], side: &str| -> Result<Permutation, MapError> {
            let listed: usize = cycles.iter().map(Vec::len).sum();
            if listed != schema.k {
                return Err(MapError::BadSchema {
                    reason: format!(
                        "sigma_{side} cycles list {listed} edge ends, expected {}",
                        schema.k
                    ),
                });
            }
            Permutation::from_cycles(schema.k, cycles).map_err(|e| MapError::BadSchema {
                reason: format!("sigma_{side}: {e}"),
            })
        };
        let sigma_white = build(&schema.sigma_white, "white")?;
        let sigma_black = build(&schema.sigma_black, "black")?;
        RootedBipartiteMap::from_factorization(
            sigma_white,
            sigma_black,
            Some(schema.black_weights),
            schema.root,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{enumerate_symmetric_group, Shard};

    fn star() -> RootedBipartiteMap {
        RootedBipartiteMap::from_factorization(
            Permutation::identity(3),
            Permutation::long_cycle(3),
            Some(vec![3]),
            1,
        )
        .unwrap()
    }

    #[test]
    fn star_map_shape() {
        let m = star();
        assert_eq!(m.white_count(), 3);
        assert_eq!(m.black_count(), 1);
        assert_eq!(m.face_count(), 1);
        assert_eq!(m.genus(), 0);
        assert!(m.boundary_is_canonical());
        // Weight can be filled in when omitted for single-black maps.
        let filled = RootedBipartiteMap::from_factorization(
            Permutation::identity(3),
            Permutation::long_cycle(3),
            None,
            1,
        )
        .unwrap();
        assert_eq!(filled.black_weights(), &[3]);
    }

    #[test]
    fn single_edge_map() {
        let m = RootedBipartiteMap::from_factorization(
            Permutation::long_cycle(1),
            Permutation::long_cycle(1),
            Some(vec![1]),
            1,
        )
        .unwrap();
        assert_eq!(m.vertex_count(), 2);
        assert_eq!(m.face_count(), 1);
        assert_eq!(m.genus(), 0);
        assert_eq!(
            m.degree(VertexId {
                side: Side::White,
                index: 0
            })
            .unwrap(),
            1
        );
        assert_eq!(
            m.degree(VertexId {
                side: Side::Black,
                index: 0
            })
            .unwrap(),
            1
        );
        // Its face permutation is the 2-cycle on its two corners.
        assert_eq!(
            m.face_corner_permutation(),
            Permutation::parse_cycles(2, "(1 2)").unwrap()
        );
    }

    #[test]
    fn four_vertices_five_edges_one_face_is_genus_one() {
        // sigma_white = (1 3)(2 4 5) factorizes the long cycle with a black
        // rotation of two cycles: 4 vertices, 5 edges, 1 face, a torus map.
        let sigma_white = Permutation::parse_cycles(5, "(1 3)(2 4 5)").unwrap();
        let sigma_black = sigma_white
            .inverse()
            .compose(&Permutation::long_cycle(5))
            .unwrap();
        assert_eq!(sigma_black.cycle_count(), 2);
        let m =
            RootedBipartiteMap::from_factorization(sigma_white, sigma_black, Some(vec![1, 1]), 1)
                .unwrap();
        assert_eq!(m.vertex_count(), 4);
        assert_eq!(m.face_count(), 1);
        assert_eq!(m.genus(), 1);
    }

    #[test]
    fn disconnected_input_is_rejected() {
        // Two disjoint single edges.
        let id = Permutation::identity(2);
        assert!(matches!(
            RootedBipartiteMap::from_factorization(id.clone(), id, Some(vec![1, 1]), 1),
            Err(MapError::Disconnected)
        ));
    }

    #[test]
    fn weight_validation() {
        let err = RootedBipartiteMap::from_factorization(
            Permutation::identity(3),
            Permutation::long_cycle(3),
            Some(vec![1, 2]),
            1,
        );
        assert!(matches!(
            err,
            Err(MapError::WeightCountMismatch {
                expected: 1,
                got: 2
            })
        ));
        let err = RootedBipartiteMap::from_factorization(
            Permutation::identity(3),
            Permutation::long_cycle(3),
            Some(vec![0]),
            1,
        );
        assert!(matches!(err, Err(MapError::NonPositiveWeight)));
    }

    #[test]
    fn star_face_permutation_is_a_single_alternating_six_cycle() {
        let m = star();
        let face = m.face_corner_permutation();
        assert_eq!(face.cycle_count(), 1);
        // Alternation: white corners (points 1..=3) map into black corners
        // (points 4..=6) and back.
        for e in 1..=3 {
            assert!(face.apply(e) > 3);
            assert!(face.apply(3 + e) <= 3);
        }
    }

    #[test]
    fn face_count_equals_face_permutation_cycles_for_all_pairs() {
        // Works for every connected pair, one face or not.
        for k in 1..=4 {
            let perms: Vec<_> = enumerate_symmetric_group(k, Shard::whole())
                .unwrap()
                .collect();
            for sw in &perms {
                for sb in &perms {
                    let weights = vec![1u64; sb.cycle_count()];
                    let Ok(m) = RootedBipartiteMap::from_factorization(
                        sw.clone(),
                        sb.clone(),
                        Some(weights),
                        1,
                    ) else {
                        continue;
                    };
                    let face = m.face_corner_permutation();
                    assert_eq!(face.cycle_count(), m.face_count());
                    // Alternation invariant.
                    for e in 1..=k {
                        assert!(face.apply(e) > k);
                        assert!(face.apply(k + e) <= k);
                    }
                    // Genus is a non-negative integer by construction.
                    let chi = m.vertex_count() as i64 - k as i64 + m.face_count() as i64;
                    assert_eq!(2 - 2 * (m.genus() as i64), chi);
                }
            }
        }
    }

    #[test]
    fn factorization_maps_have_one_canonical_face() {
        // For every sigma_white in S_k with the derived black rotation, the
        // face permutation has a single 2k-cycle and the boundary reads the
        // edges in label order.
        for k in 1..=6 {
            let long = Permutation::long_cycle(k);
            for sw in enumerate_symmetric_group(k, Shard::whole()).unwrap() {
                let sb = sw.inverse().compose(&long).unwrap();
                let weights = vec![1u64; sb.cycle_count()];
                let m = RootedBipartiteMap::from_factorization(sw, sb, Some(weights), 1)
                    .expect("factorization pairs are connected");
                assert_eq!(m.face_count(), 1);
                assert_eq!(m.face_corner_permutation().cycle_count(), 1);
                assert!(m.boundary_is_canonical());
                for e in 1..=k {
                    assert_eq!(m.boundary_successor(e), e % k + 1);
                }
            }
        }
    }

    #[test]
    fn star_descendants_form_a_cyclic_orientation() {
        let m = star();
        let rel = m.descendants().unwrap();
        assert!(rel.contains(1, 0));
        assert!(rel.contains(2, 1));
        assert!(rel.contains(0, 2));
        assert_eq!(rel.pairs.len(), 3);
    }

    #[test]
    fn degree_two_white_vertex_self_descends() {
        // One white vertex with both edges to the same black pair of leaves.
        let m = RootedBipartiteMap::from_factorization(
            Permutation::parse_cycles(2, "(1 2)").unwrap(),
            Permutation::identity(2),
            Some(vec![1, 1]),
            1,
        )
        .unwrap();
        assert_eq!(m.face_count(), 1);
        let rel = m.descendants().unwrap();
        assert!(rel.contains(0, 0));
    }

    #[test]
    fn descendants_require_one_face() {
        // Boundary (1)(2): two faces.
        let m = RootedBipartiteMap::from_factorization(
            Permutation::parse_cycles(2, "(1 2)").unwrap(),
            Permutation::parse_cycles(2, "(1 2)").unwrap(),
            Some(vec![1]),
            1,
        )
        .unwrap();
        assert_eq!(m.face_count(), 2);
        assert!(matches!(
            m.descendants(),
            Err(MapError::MultiFace { faces: 2 })
        ));
    }

    #[test]
    fn expander_conditions() {
        assert!(star().is_expander());

        // Two blacks with weights (1,1) where b1 is adjacent to w1 only.
        let sigma_white = Permutation::parse_cycles(3, "(1 2)").unwrap();
        let sigma_black = Permutation::parse_cycles(3, "(2 3)").unwrap();
        let m =
            RootedBipartiteMap::from_factorization(sigma_white, sigma_black, Some(vec![1, 1]), 1)
                .unwrap();
        assert_eq!(m.face_count(), 1);
        assert_eq!(m.black_count(), 2);
        assert!(!m.is_expander());
    }

    #[test]
    fn degree_reports_unknown_vertices() {
        let m = star();
        assert_eq!(
            m.degree(VertexId {
                side: Side::Black,
                index: 0
            })
            .unwrap(),
            3
        );
        assert!(matches!(
            m.degree(VertexId {
                side: Side::Black,
                index: 1
            }),
            Err(MapError::UnknownVertex { .. })
        ));
    }

    #[test]
    fn renumber_from_root_inverts_relabelling() {
        let sigma_white = Permutation::parse_cycles(5, "(1 3)(2 4 5)").unwrap();
        let sigma_black = sigma_white
            .inverse()
            .compose(&Permutation::long_cycle(5))
            .unwrap();
        let m =
            RootedBipartiteMap::from_factorization(sigma_white, sigma_black, Some(vec![1, 1]), 1)
                .unwrap();
        assert!(m.boundary_is_canonical());

        let shuffle = Permutation::parse_cycles(5, "(1 2)").unwrap();
        let relabelled = m.relabel(&shuffle).unwrap();
        assert!(!relabelled.boundary_is_canonical());
        // Renumbering from the (relocated) root undoes the relabelling.
        let (renumbered, rho) = relabelled.renumber_from_root().unwrap();
        assert!(renumbered.boundary_is_canonical());
        assert_eq!(renumbered.root(), 1);
        assert_eq!(rho.apply(relabelled.root()), 1);
        assert_eq!(renumbered, m);
    }

    #[test]
    fn schema_round_trip() {
        let m = star();
        let json = serde_json::to_string(&m).unwrap();
        assert!(json.contains("\"sigma_white\":[[1],[2],[3]]"));
        assert!(json.contains("\"black_weights\":[3]"));
        let back: RootedBipartiteMap = serde_json::from_str(&json).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn schema_rejects_non_partitions() {
        let bad =
            r#"{"k":2,"sigma_white":[[1]],"sigma_black":[[1,2]],"root":1,"black_weights":[1]}"#;
        assert!(serde_json::from_str::<RootedBipartiteMap>(bad).is_err());
    }
}
