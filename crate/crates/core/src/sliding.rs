//! The edge-sliding transformation. A configuration is a map with a set of
//! special edges whose ends may carry a boundary direction; sliding moves
//! clockwise-directed ends to the next residual corner along the boundary,
//! counterclockwise-directed ends to the previous one, and flips every
//! direction. It is an involution and preserves the face count.
//!
//! Sliding is defined on graphs, not bipartite maps: a valid slide of a
//! bipartite map can reattach an end to a vertex of the same colour (the
//! colour-change bijections recolour afterwards). The engine therefore runs
//! on a colour-tagged rotation graph, with conversions to and from
//! `RootedBipartiteMap` at the boundary.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::Permutation;
use crate::rmap::{MapError, MapSchema, RootedBipartiteMap, Side};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SlideError {
    #[error("configuration violates the corner rules: {0:?}")]
    Invalid(Vec<Violation>),
    #[error("special edge {edge} is not an edge label in 1..={k}")]
    BadSpecialEdge { edge: usize, k: usize },
    #[error("directions must be given exactly for the special edges")]
    DirectionKeys,
    #[error("graph is not representable as a bipartite map: {reason}")]
    NotBipartite { reason: String },
    #[error("random generator gave up after {attempts} attempts")]
    GeneratorExhausted { attempts: usize },
    #[error(transparent)]
    Map(#[from] MapError),
}

/// A violated corner rule, by residual corner index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    /// The special ends in a corner are not ordered clockwise-directed
    /// first, undirected next, counterclockwise-directed last.
    CornerOrder { vertex: usize, corner: usize },
    /// A corner holds a clockwise end while its boundary successor holds a
    /// counterclockwise end.
    ForbiddenPattern { corner: usize, next_corner: usize },
}

/// Boundary direction assigned to the end of a special edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EndDirection {
    #[serde(rename = "cw")]
    Clockwise,
    #[serde(rename = "ccw")]
    Counterclockwise,
    #[serde(rename = "none")]
    Undirected,
}

impl EndDirection {
    pub fn flipped(self) -> EndDirection {
        match self {
            EndDirection::Clockwise => EndDirection::Counterclockwise,
            EndDirection::Counterclockwise => EndDirection::Clockwise,
            EndDirection::Undirected => EndDirection::Undirected,
        }
    }

    /// Group rank inside a corner: clockwise, undirected, counterclockwise.
    fn rank(self) -> usize {
        match self {
            EndDirection::Clockwise => 0,
            EndDirection::Undirected => 1,
            EndDirection::Counterclockwise => 2,
        }
    }
}

/// Directions at the two ends of one special edge, keyed by end slot: the
/// `white` entry is the end that sits at the white vertex in a bipartite
/// map (and keeps its identity if sliding moves it elsewhere).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectionPair {
    pub white: EndDirection,
    pub black: EndDirection,
}

impl DirectionPair {
    pub fn flipped(self) -> DirectionPair {
        DirectionPair {
            white: self.white.flipped(),
            black: self.black.flipped(),
        }
    }
}

/// One end of an edge, identified by edge label and slot. The slot names
/// the end itself, not the colour of the vertex currently holding it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EndRef {
    pub edge: usize,
    pub slot: Side,
}

impl EndRef {
    pub fn partner(self) -> EndRef {
        EndRef {
            edge: self.edge,
            slot: self.slot.opposite(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexData {
    pub colour: Side,
    /// Counterclockwise angular order of the ends at this vertex.
    pub rotation: Vec<EndRef>,
    /// Weight, carried for black vertices.
    pub weight: Option<u64>,
}

/// A vertex-coloured rotation system on `k` edges (`2k` ends). Unlike a
/// bipartite map, an edge may connect two vertices of the same colour; this
/// occurs transiently between a slide and the recolouring step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationGraph {
    k: usize,
    root: usize,
    vertices: Vec<VertexData>,
}

impl RotationGraph {
    pub fn from_map(map: &RootedBipartiteMap) -> RotationGraph {
        let mut vertices = Vec::with_capacity(map.vertex_count());
        for cycle in map.white_cycles() {
            vertices.push(VertexData {
                colour: Side::White,
                rotation: cycle
                    .iter()
                    .map(|&edge| EndRef {
                        edge,
                        slot: Side::White,
                    })
                    .collect(),
                weight: None,
            });
        }
        for (cycle, &weight) in map.black_cycles().iter().zip(map.black_weights()) {
            vertices.push(VertexData {
                colour: Side::Black,
                rotation: cycle
                    .iter()
                    .map(|&edge| EndRef {
                        edge,
                        slot: Side::Black,
                    })
                    .collect(),
                weight: Some(weight),
            });
        }
        let mut graph = RotationGraph {
            k: map.k(),
            root: map.root(),
            vertices,
        };
        graph.canonicalize();
        graph
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn vertices(&self) -> &[VertexData] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn colour(&self, vertex: usize) -> Side {
        self.vertices[vertex].colour
    }

    pub fn degree(&self, vertex: usize) -> usize {
        self.vertices[vertex].rotation.len()
    }

    /// Changes a vertex's colour; a vertex turning white loses its weight.
    pub fn recolour(&mut self, vertex: usize, colour: Side) {
        self.vertices[vertex].colour = colour;
        if colour == Side::White {
            self.vertices[vertex].weight = None;
        }
    }

    /// Rotates every rotation to start at its least end; cyclic rotations
    /// compare equal exactly when the graphs agree.
    fn canonicalize(&mut self) {
        for vertex in &mut self.vertices {
            if vertex.rotation.is_empty() {
                continue;
            }
            let min_at = vertex
                .rotation
                .iter()
                .enumerate()
                .min_by_key(|&(_, end)| end)
                .map(|(i, _)| i)
                .expect("non-empty rotation");
            vertex.rotation.rotate_left(min_at);
        }
    }

    /// Position of every end: `positions[end_key] = (vertex, index)`.
    fn positions(&self) -> Vec<(usize, usize)> {
        let mut positions = vec![(usize::MAX, usize::MAX); 2 * self.k];
        for (vi, vertex) in self.vertices.iter().enumerate() {
            for (pos, end) in vertex.rotation.iter().enumerate() {
                positions[end_key(*end, self.k)] = (vi, pos);
            }
        }
        debug_assert!(positions.iter().all(|&(v, _)| v != usize::MAX));
        positions
    }

    pub fn vertex_of_end(&self, end: EndRef) -> usize {
        self.positions()[end_key(end, self.k)].0
    }

    /// Number of faces of the full graph: orbits of the step that goes from
    /// an end to the rotation successor of its partner.
    pub fn face_count(&self) -> usize {
        let positions = self.positions();
        let mut seen = vec![false; 2 * self.k];
        let mut faces = 0;
        for start in 0..2 * self.k {
            if seen[start] {
                continue;
            }
            faces += 1;
            let mut current = start;
            while !seen[current] {
                seen[current] = true;
                let end = end_from_key(current, self.k);
                let (vi, pos) = positions[end_key(end.partner(), self.k)];
                let rotation = &self.vertices[vi].rotation;
                let next = rotation[(pos + 1) % rotation.len()];
                current = end_key(next, self.k);
            }
        }
        faces
    }

    /// Strict conversion: every edge must have one end at a white vertex
    /// and one at a black vertex. `weights` follow the canonical order of
    /// black vertices; omitted weights are carried from the vertices, the
    /// single-black weight is forced, and anything still missing becomes 1.
    pub fn to_bipartite_map(
        &self,
        weights: Option<Vec<u64>>,
    ) -> Result<RootedBipartiteMap, SlideError> {
        let mut white_images = vec![0usize; self.k];
        let mut black_images = vec![0usize; self.k];
        for vertex in &self.vertices {
            let images = match vertex.colour {
                Side::White => &mut white_images,
                Side::Black => &mut black_images,
            };
            let rotation = &vertex.rotation;
            for (pos, end) in rotation.iter().enumerate() {
                let next = rotation[(pos + 1) % rotation.len()];
                if images[end.edge - 1] != 0 {
                    return Err(SlideError::NotBipartite {
                        reason: format!(
                            "edge {} has both ends on {:?} vertices",
                            end.edge, vertex.colour
                        ),
                    });
                }
                images[end.edge - 1] = next.edge;
            }
        }
        if let Some(missing) = white_images.iter().position(|&v| v == 0) {
            return Err(SlideError::NotBipartite {
                reason: format!("edge {} has no end on a white vertex", missing + 1),
            });
        }
        let sigma_white =
            Permutation::from_images(white_images).map_err(|e| SlideError::NotBipartite {
                reason: format!("white rotations do not form a permutation: {e}"),
            })?;
        let sigma_black =
            Permutation::from_images(black_images).map_err(|e| SlideError::NotBipartite {
                reason: format!("black rotations do not form a permutation: {e}"),
            })?;

        let black_vertices: Vec<&VertexData> = self
            .vertices
            .iter()
            .filter(|v| v.colour == Side::Black)
            .collect();
        let weights = match weights {
            Some(w) => Some(w),
            None if black_vertices.len() == 1 => None, // forced to the white count
            None => {
                // Carry weights by vertex identity into canonical order.
                let mut keyed: Vec<(usize, u64)> = black_vertices
                    .iter()
                    .map(|v| {
                        let min_edge = v.rotation.iter().map(|e| e.edge).min().expect("non-empty");
                        (min_edge, v.weight.unwrap_or(1))
                    })
                    .collect();
                keyed.sort_unstable();
                Some(keyed.into_iter().map(|(_, w)| w).collect())
            }
        };
        Ok(RootedBipartiteMap::from_factorization(
            sigma_white,
            sigma_black,
            weights,
            self.root,
        )?)
    }

    /// Recolours every vertex by 2-colouring the underlying graph, keeping
    /// as many current colours as possible (per connected component, with
    /// the lowest-index vertex keeping its colour on a tie). Fails if some
    /// component has an odd cycle.
    pub fn recolour_bipartite(&mut self) -> Result<(), SlideError> {
        let positions = self.positions();
        let n = self.vertices.len();
        let mut assigned: Vec<Option<bool>> = vec![None; n]; // parity per vertex
        let mut component: Vec<Vec<usize>> = Vec::new();
        for start in 0..n {
            if assigned[start].is_some() {
                continue;
            }
            let mut members = Vec::new();
            let mut queue = std::collections::VecDeque::new();
            assigned[start] = Some(false);
            queue.push_back(start);
            while let Some(v) = queue.pop_front() {
                members.push(v);
                let parity = assigned[v].expect("assigned before queueing");
                for end in self.vertices[v].rotation.clone() {
                    let (u, _) = positions[end_key(end.partner(), self.k)];
                    match assigned[u] {
                        None => {
                            assigned[u] = Some(!parity);
                            queue.push_back(u);
                        }
                        Some(p) if p == parity => {
                            return Err(SlideError::NotBipartite {
                                reason: "the graph contains an odd cycle".to_string(),
                            });
                        }
                        Some(_) => {}
                    }
                }
            }
            component.push(members);
        }
        for members in component {
            let colour_for = |parity: bool, flip: bool| {
                if parity != flip {
                    Side::Black
                } else {
                    Side::White
                }
            };
            let agreement = |flip: bool| {
                members
                    .iter()
                    .filter(|&&v| {
                        colour_for(assigned[v].expect("assigned"), flip) == self.vertices[v].colour
                    })
                    .count()
            };
            let keep = agreement(false);
            let swap = agreement(true);
            let anchor = *members.iter().min().expect("components are non-empty");
            let flip = match swap.cmp(&keep) {
                std::cmp::Ordering::Greater => true,
                std::cmp::Ordering::Less => false,
                std::cmp::Ordering::Equal => {
                    colour_for(assigned[anchor].expect("assigned"), false)
                        != self.vertices[anchor].colour
                }
            };
            for &v in &members {
                let colour = colour_for(assigned[v].expect("assigned"), flip);
                if self.vertices[v].colour != colour {
                    self.recolour(v, colour);
                }
            }
        }
        Ok(())
    }
}

fn end_key(end: EndRef, _k: usize) -> usize {
    let slot = match end.slot {
        Side::White => 0,
        Side::Black => 1,
    };
    (end.edge - 1) * 2 + slot
}

fn end_from_key(key: usize, _k: usize) -> EndRef {
    EndRef {
        edge: key / 2 + 1,
        slot: if key % 2 == 0 {
            Side::White
        } else {
            Side::Black
        },
    }
}

/// A corner of the residual graph: the angular sector counterclockwise
/// after `anchor` (a surviving end), or the full angle of a vertex whose
/// edges are all special. `contents` lists the special ends inside, in
/// counterclockwise angular order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidualCorner {
    pub vertex: usize,
    pub anchor: Option<EndRef>,
    pub contents: Vec<EndRef>,
}

/// Residual corners with the face permutation of the residual graph, in
/// clockwise boundary order; full-angle corners are fixed points.
#[derive(Debug, Clone)]
pub struct ResidualStructure {
    pub corners: Vec<ResidualCorner>,
    pub sigma_res: Vec<usize>,
    anchor_index: BTreeMap<EndRef, usize>,
    full_index: BTreeMap<usize, usize>,
}

impl ResidualStructure {
    pub fn corner_of_anchor(&self, anchor: EndRef) -> Option<usize> {
        self.anchor_index.get(&anchor).copied()
    }

    pub fn full_corner_of_vertex(&self, vertex: usize) -> Option<usize> {
        self.full_index.get(&vertex).copied()
    }

    /// Number of residual faces (cycles of `sigma_res`).
    pub fn face_count(&self) -> usize {
        let mut seen = vec![false; self.sigma_res.len()];
        let mut faces = 0;
        for start in 0..self.sigma_res.len() {
            if seen[start] {
                continue;
            }
            faces += 1;
            let mut c = start;
            while !seen[c] {
                seen[c] = true;
                c = self.sigma_res[c];
            }
        }
        faces
    }
}

/// A sliding configuration: the full rotation graph (special ends in
/// place), the special edge set, and a direction pair per special edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlidingConfig {
    graph: RotationGraph,
    special_edges: BTreeSet<usize>,
    directions: BTreeMap<usize, DirectionPair>,
}

impl SlidingConfig {
    pub fn new(
        mut graph: RotationGraph,
        special_edges: BTreeSet<usize>,
        directions: BTreeMap<usize, DirectionPair>,
    ) -> Result<SlidingConfig, SlideError> {
        for &edge in &special_edges {
            if edge < 1 || edge > graph.k {
                return Err(SlideError::BadSpecialEdge { edge, k: graph.k });
            }
        }
        if directions.keys().copied().collect::<BTreeSet<_>>() != special_edges {
            return Err(SlideError::DirectionKeys);
        }
        graph.canonicalize();
        Ok(SlidingConfig {
            graph,
            special_edges,
            directions,
        })
    }

    pub fn from_map(
        map: &RootedBipartiteMap,
        special_edges: BTreeSet<usize>,
        directions: BTreeMap<usize, DirectionPair>,
    ) -> Result<SlidingConfig, SlideError> {
        SlidingConfig::new(RotationGraph::from_map(map), special_edges, directions)
    }

    pub fn graph(&self) -> &RotationGraph {
        &self.graph
    }

    pub fn graph_mut(&mut self) -> &mut RotationGraph {
        &mut self.graph
    }

    pub fn special_edges(&self) -> &BTreeSet<usize> {
        &self.special_edges
    }

    pub fn directions(&self) -> &BTreeMap<usize, DirectionPair> {
        &self.directions
    }

    /// Direction of an end: undirected unless its edge is special.
    pub fn direction_of(&self, end: EndRef) -> EndDirection {
        match self.directions.get(&end.edge) {
            None => EndDirection::Undirected,
            Some(pair) => match end.slot {
                Side::White => pair.white,
                Side::Black => pair.black,
            },
        }
    }

    /// Corners of the graph minus the special edges, with the residual face
    /// permutation. Every special end lies in exactly one corner.
    pub fn residual_structure(&self) -> ResidualStructure {
        let graph = &self.graph;
        let mut corners = Vec::new();
        let mut anchor_index = BTreeMap::new();
        let mut full_index = BTreeMap::new();

        for (vi, vertex) in graph.vertices.iter().enumerate() {
            let rotation = &vertex.rotation;
            let surviving: Vec<usize> = (0..rotation.len())
                .filter(|&p| !self.special_edges.contains(&rotation[p].edge))
                .collect();
            if surviving.is_empty() {
                full_index.insert(vi, corners.len());
                corners.push(ResidualCorner {
                    vertex: vi,
                    anchor: None,
                    contents: rotation.clone(),
                });
                continue;
            }
            for (si, &pos) in surviving.iter().enumerate() {
                let next_pos = surviving[(si + 1) % surviving.len()];
                let mut contents = Vec::new();
                let mut p = (pos + 1) % rotation.len();
                while p != next_pos {
                    contents.push(rotation[p]);
                    p = (p + 1) % rotation.len();
                }
                anchor_index.insert(rotation[pos], corners.len());
                corners.push(ResidualCorner {
                    vertex: vi,
                    anchor: Some(rotation[pos]),
                    contents,
                });
            }
        }

        // sigma_res: the boundary walk leaves the corner of a surviving end
        // across that end's edge and continues in the sector just before
        // the far end, i.e. the corner anchored at the previous surviving
        // end there. This is the orientation under which a clockwise end
        // sliding to the next corner lands beside the crossed edge's far
        // end, at the counterclockwise top of its new corner.
        let positions = graph.positions();
        let mut sigma_res = vec![0usize; corners.len()];
        for (ci, corner) in corners.iter().enumerate() {
            match corner.anchor {
                None => sigma_res[ci] = ci,
                Some(anchor) => {
                    let partner = anchor.partner();
                    let (vi, mut pos) = positions[end_key(partner, graph.k)];
                    let rotation = &graph.vertices[vi].rotation;
                    let previous = loop {
                        pos = (pos + rotation.len() - 1) % rotation.len();
                        if !self.special_edges.contains(&rotation[pos].edge) {
                            break rotation[pos];
                        }
                    };
                    sigma_res[ci] = anchor_index[&previous];
                }
            }
        }

        ResidualStructure {
            corners,
            sigma_res,
            anchor_index,
            full_index,
        }
    }

    /// Checks the two corner rules; an empty list means the configuration
    /// is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let residual = self.residual_structure();
        let mut violations = Vec::new();
        for (ci, corner) in residual.corners.iter().enumerate() {
            let ranks: Vec<usize> = corner
                .contents
                .iter()
                .map(|&end| self.direction_of(end).rank())
                .collect();
            let ordered = match corner.anchor {
                Some(_) => ranks.windows(2).all(|w| w[0] <= w[1]),
                // Full-angle corners are cyclic: valid iff some rotation of
                // the sequence is ordered, i.e. at most one cyclic descent.
                None => cyclic_descents(&ranks) <= 1,
            };
            if !ordered {
                violations.push(Violation::CornerOrder {
                    vertex: corner.vertex,
                    corner: ci,
                });
            }
        }
        for (ci, corner) in residual.corners.iter().enumerate() {
            let has_cw = corner
                .contents
                .iter()
                .any(|&end| self.direction_of(end) == EndDirection::Clockwise);
            if !has_cw {
                continue;
            }
            let next = residual.sigma_res[ci];
            let next_has_ccw = residual.corners[next]
                .contents
                .iter()
                .any(|&end| self.direction_of(end) == EndDirection::Counterclockwise);
            if next_has_ccw {
                violations.push(Violation::ForbiddenPattern {
                    corner: ci,
                    next_corner: next,
                });
            }
        }
        violations
    }

    /// Contents of a corner linearized so the direction groups come in
    /// clockwise, undirected, counterclockwise order. Anchored corners are
    /// already linear; full-angle corners rotate past their single descent.
    fn linearized_contents(&self, corner: &ResidualCorner) -> Vec<EndRef> {
        if corner.anchor.is_some() || corner.contents.len() <= 1 {
            return corner.contents.clone();
        }
        let ranks: Vec<usize> = corner
            .contents
            .iter()
            .map(|&end| self.direction_of(end).rank())
            .collect();
        let n = ranks.len();
        let start = (0..n)
            .find(|&i| ranks[i] > ranks[(i + 1) % n])
            .map(|i| (i + 1) % n)
            .unwrap_or(0);
        let mut contents = corner.contents.clone();
        contents.rotate_left(start);
        contents
    }

    /// Applies the slide: clockwise ends move to the next residual corner,
    /// counterclockwise ends to the previous one, undirected ends stay, and
    /// all directions flip. Requires a valid configuration.
    pub fn slide(&self) -> Result<SlidingConfig, SlideError> {
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(SlideError::Invalid(violations));
        }
        let residual = self.residual_structure();
        let corner_count = residual.corners.len();

        // Split each corner into its three direction groups.
        let mut groups: Vec<[Vec<EndRef>; 3]> = Vec::with_capacity(corner_count);
        for corner in &residual.corners {
            let mut split: [Vec<EndRef>; 3] = Default::default();
            for end in self.linearized_contents(corner) {
                split[self.direction_of(end).rank()].push(end);
            }
            groups.push(split);
        }
        let mut sigma_res_inv = vec![0usize; corner_count];
        for (c, &t) in residual.sigma_res.iter().enumerate() {
            sigma_res_inv[t] = c;
        }

        // New corner contents: arrivals from the next corner (previously
        // counterclockwise, now clockwise), stayers, then arrivals from the
        // previous corner (previously clockwise, now counterclockwise).
        let new_contents: Vec<Vec<EndRef>> = (0..corner_count)
            .map(|c| {
                let mut contents = groups[residual.sigma_res[c]][2].clone();
                contents.extend_from_slice(&groups[c][1]);
                contents.extend_from_slice(&groups[sigma_res_inv[c]][0]);
                contents
            })
            .collect();
        debug_assert_eq!(
            new_contents.iter().map(Vec::len).sum::<usize>(),
            2 * self.special_edges.len()
        );

        // Rebuild the rotations by interleaving surviving ends with the new
        // contents of their corners.
        let mut vertices = self.graph.vertices.clone();
        for (vi, vertex) in self.graph.vertices.iter().enumerate() {
            if let Some(full) = residual.full_corner_of_vertex(vi) {
                vertices[vi].rotation = new_contents[full].clone();
                continue;
            }
            let mut rotation = Vec::with_capacity(vertex.rotation.len());
            for &end in &vertex.rotation {
                if self.special_edges.contains(&end.edge) {
                    continue;
                }
                let corner = residual
                    .corner_of_anchor(end)
                    .expect("surviving ends anchor corners");
                rotation.push(end);
                rotation.extend_from_slice(&new_contents[corner]);
            }
            vertices[vi].rotation = rotation;
        }

        let directions = self
            .directions
            .iter()
            .map(|(&edge, pair)| (edge, pair.flipped()))
            .collect();
        let slid = SlidingConfig::new(
            RotationGraph {
                k: self.graph.k,
                root: self.graph.root,
                vertices,
            },
            self.special_edges.clone(),
            directions,
        )?;
        debug_assert!(slid.validate().is_empty());
        Ok(slid)
    }
}

fn cyclic_descents(ranks: &[usize]) -> usize {
    let n = ranks.len();
    if n <= 1 {
        return 0;
    }
    (0..n).filter(|&i| ranks[i] > ranks[(i + 1) % n]).count()
}

/// Wire format: the bipartite map schema extended with the special edges
/// and per-edge direction pairs. The `white`/`black` entries refer to the
/// end at the white/black vertex of the map.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfigSchema {
    #[serde(flatten)]
    pub map: MapSchema,
    pub special_edges: Vec<usize>,
    pub directions: Vec<DirectionEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DirectionEntry {
    pub edge: usize,
    pub white: EndDirection,
    pub black: EndDirection,
}

impl SlidingConfig {
    /// Reads a configuration whose underlying graph is a bipartite map.
    pub fn from_schema(schema: ConfigSchema) -> Result<SlidingConfig, SlideError> {
        let map = RootedBipartiteMap::try_from(schema.map)?;
        let special: BTreeSet<usize> = schema.special_edges.iter().copied().collect();
        if special.len() != schema.special_edges.len() {
            return Err(SlideError::DirectionKeys);
        }
        let mut directions = BTreeMap::new();
        for entry in schema.directions {
            if directions
                .insert(
                    entry.edge,
                    DirectionPair {
                        white: entry.white,
                        black: entry.black,
                    },
                )
                .is_some()
            {
                return Err(SlideError::DirectionKeys);
            }
        }
        SlidingConfig::from_map(&map, special, directions)
    }

    /// Writes the configuration back as a schema. The graph must be a
    /// bipartite map (recolour first if a slide changed end attachments);
    /// direction pairs are re-keyed by the colour of the hosting vertex.
    pub fn to_schema(&self) -> Result<ConfigSchema, SlideError> {
        let map = self.graph.to_bipartite_map(None)?;
        let mut directions = Vec::new();
        for &edge in self.directions.keys() {
            let white_end = EndRef {
                edge,
                slot: Side::White,
            };
            let black_end = EndRef {
                edge,
                slot: Side::Black,
            };
            let (at_white, at_black) =
                if self.graph.colour(self.graph.vertex_of_end(white_end)) == Side::White {
                    (white_end, black_end)
                } else {
                    (black_end, white_end)
                };
            directions.push(DirectionEntry {
                edge,
                white: self.direction_of(at_white),
                black: self.direction_of(at_black),
            });
        }
        Ok(ConfigSchema {
            map: MapSchema::from(map),
            special_edges: self.special_edges.iter().copied().collect(),
            directions,
        })
    }
}

/// Deterministic pseudorandom valid configuration on `k` edges: a random
/// connected bipartite map, a random special subset, and corner-consistent
/// random directions. Identical `(k, seed)` inputs give identical configs.
pub fn random_valid_config(k: usize, seed: u64) -> Result<SlidingConfig, SlideError> {
    assert!((1..=8).contains(&k), "generator is tuned for k <= 8");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const ATTEMPTS: usize = 10_000;
    for _ in 0..ATTEMPTS {
        let sigma_white = random_permutation(k, &mut rng);
        let sigma_black = random_permutation(k, &mut rng);
        let blacks = sigma_black.cycle_count();
        let Ok(map) = RootedBipartiteMap::from_factorization(
            sigma_white,
            sigma_black,
            Some(vec![1; blacks]),
            1,
        ) else {
            continue; // disconnected pair
        };
        let special: BTreeSet<usize> = (1..=k).filter(|_| rng.gen_bool(1.0 / 3.0)).collect();
        // Assign directions corner by corner so the ordering rule holds by
        // construction: a clockwise block, an undirected block, then a
        // counterclockwise block.
        let undirected = special
            .iter()
            .map(|&e| {
                (
                    e,
                    DirectionPair {
                        white: EndDirection::Undirected,
                        black: EndDirection::Undirected,
                    },
                )
            })
            .collect();
        let mut config = SlidingConfig::from_map(&map, special.clone(), undirected)?;
        let residual = config.residual_structure();
        let mut directions: BTreeMap<usize, DirectionPair> = config.directions.clone();
        for corner in &residual.corners {
            let contents = &corner.contents;
            let cw_upto = rng.gen_range(0..=contents.len());
            let none_upto = rng.gen_range(cw_upto..=contents.len());
            for (i, end) in contents.iter().enumerate() {
                let direction = if i < cw_upto {
                    EndDirection::Clockwise
                } else if i < none_upto {
                    EndDirection::Undirected
                } else {
                    EndDirection::Counterclockwise
                };
                let pair = directions.get_mut(&end.edge).expect("special edge");
                match end.slot {
                    Side::White => pair.white = direction,
                    Side::Black => pair.black = direction,
                }
            }
        }
        config.directions = directions;
        if config.validate().is_empty() {
            return Ok(config);
        }
        // Otherwise the forbidden pattern fired; redraw everything.
    }
    Err(SlideError::GeneratorExhausted { attempts: ATTEMPTS })
}

/// Runs the sliding property suite on `cases` deterministically generated
/// valid configurations with at most `max_k` edges: slide twice returns the
/// input, the face count is preserved, directions flip, undirected special
/// edges keep their incidence, and nothing is created or destroyed.
/// Returns one message per failed case; an empty list is a clean pass.
pub fn sliding_property_suite(cases: usize, seed: u64, max_k: usize) -> Vec<String> {
    let max_k = max_k.clamp(1, 8);
    let mut failures = Vec::new();
    for case in 0..cases {
        let k = case % max_k + 1;
        let case_seed = seed.wrapping_add(case as u64);
        let tag = format!("case {case} (k={k}, seed={case_seed})");
        let config = match random_valid_config(k, case_seed) {
            Ok(config) => config,
            Err(e) => {
                failures.push(format!("{tag}: generator failed: {e}"));
                continue;
            }
        };
        if !config.validate().is_empty() {
            failures.push(format!("{tag}: generated config is invalid"));
            continue;
        }
        let slid = match config.slide() {
            Ok(slid) => slid,
            Err(e) => {
                failures.push(format!("{tag}: slide failed: {e}"));
                continue;
            }
        };
        if slid.graph().face_count() != config.graph().face_count() {
            failures.push(format!(
                "{tag}: face count changed {} -> {}",
                config.graph().face_count(),
                slid.graph().face_count()
            ));
        }
        if slid.graph().vertex_count() != config.graph().vertex_count()
            || slid.special_edges() != config.special_edges()
        {
            failures.push(format!("{tag}: vertex or special-edge set changed"));
        }
        for (edge, pair) in config.directions() {
            if slid.directions()[edge] != pair.flipped() {
                failures.push(format!("{tag}: direction of edge {edge} did not flip"));
            }
            if pair.white == EndDirection::Undirected && pair.black == EndDirection::Undirected {
                for slot in [Side::White, Side::Black] {
                    let end = EndRef { edge: *edge, slot };
                    if slid.graph().vertex_of_end(end) != config.graph().vertex_of_end(end) {
                        failures.push(format!("{tag}: undirected end {end:?} moved"));
                    }
                }
            }
        }
        match slid.slide() {
            Ok(back) if back == config => {}
            Ok(_) => failures.push(format!("{tag}: double slide is not the identity")),
            Err(e) => failures.push(format!("{tag}: second slide failed: {e}")),
        }
    }
    failures
}

fn random_permutation(k: usize, rng: &mut ChaCha8Rng) -> Permutation {
    let mut images: Vec<usize> = (1..=k).collect();
    for i in (1..k).rev() {
        let j = rng.gen_range(0..=i);
        images.swap(i, j);
    }
    Permutation::from_images(images).expect("shuffled identity")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star_map() -> RootedBipartiteMap {
        RootedBipartiteMap::from_factorization(
            Permutation::identity(3),
            Permutation::long_cycle(3),
            None,
            1,
        )
        .unwrap()
    }

    fn no_directions(edges: &BTreeSet<usize>) -> BTreeMap<usize, DirectionPair> {
        edges
            .iter()
            .map(|&e| {
                (
                    e,
                    DirectionPair {
                        white: EndDirection::Undirected,
                        black: EndDirection::Undirected,
                    },
                )
            })
            .collect()
    }

    #[test]
    fn residual_of_zero_special_edges_is_the_face_structure() {
        let map = star_map();
        let config = SlidingConfig::from_map(&map, BTreeSet::new(), BTreeMap::new()).unwrap();
        let residual = config.residual_structure();
        // All 2k corners survive and every corner is empty.
        assert_eq!(residual.corners.len(), 6);
        assert!(residual.corners.iter().all(|c| c.contents.is_empty()));
        assert_eq!(residual.face_count(), 1);
        assert_eq!(config.graph().face_count(), 1);
    }

    #[test]
    fn residual_with_all_edges_special_gives_full_corners() {
        let map = RootedBipartiteMap::from_factorization(
            Permutation::long_cycle(1),
            Permutation::long_cycle(1),
            Some(vec![1]),
            1,
        )
        .unwrap();
        let special: BTreeSet<usize> = [1].into();
        let config =
            SlidingConfig::from_map(&map, special.clone(), no_directions(&special)).unwrap();
        let residual = config.residual_structure();
        assert_eq!(residual.corners.len(), 2);
        assert!(residual.corners.iter().all(|c| c.anchor.is_none()));
        // Full corners are fixed points of sigma_res.
        assert_eq!(residual.sigma_res, vec![0, 1]);
    }

    #[test]
    fn undirected_slide_is_identity() {
        let map = star_map();
        let special: BTreeSet<usize> = [2].into();
        let config =
            SlidingConfig::from_map(&map, special.clone(), no_directions(&special)).unwrap();
        let slid = config.slide().unwrap();
        assert_eq!(slid, config);
    }

    #[test]
    fn slide_flips_directions() {
        let map = star_map();
        let special: BTreeSet<usize> = [2].into();
        let mut directions = BTreeMap::new();
        directions.insert(
            2,
            DirectionPair {
                white: EndDirection::Clockwise,
                black: EndDirection::Undirected,
            },
        );
        let config = SlidingConfig::from_map(&map, special, directions).unwrap();
        assert!(config.validate().is_empty());
        let slid = config.slide().unwrap();
        assert_eq!(
            slid.directions()[&2],
            DirectionPair {
                white: EndDirection::Counterclockwise,
                black: EndDirection::Undirected,
            }
        );
        // Face count is preserved.
        assert_eq!(slid.graph().face_count(), config.graph().face_count());
        // Involution.
        assert_eq!(slid.slide().unwrap(), config);
    }

    #[test]
    fn ordering_violation_is_reported() {
        // Two special edges at the star's black vertex whose angular order
        // is undirected then clockwise: that breaks the corner rule when
        // both land in the same residual corner.
        let map = star_map();
        let special: BTreeSet<usize> = [1, 2].into();
        let mut directions = no_directions(&special);
        directions.insert(
            2,
            DirectionPair {
                white: EndDirection::Undirected,
                black: EndDirection::Clockwise,
            },
        );
        // At the black vertex the rotation is (1 2 3): removing 1 and 2
        // leaves the corner after 3 holding ends 1 then 2 in ccw order.
        // Directions: end 1 undirected, end 2 clockwise -> out of order.
        let config = SlidingConfig::from_map(&map, special, directions).unwrap();
        let violations = config.validate();
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::CornerOrder { .. })));
        assert!(matches!(config.slide(), Err(SlideError::Invalid(_))));
    }

    #[test]
    fn forbidden_pattern_is_reported() {
        // Two whites of degree two and three blacks; edges 2 and 3 special.
        // The residual corner holding the clockwise end of edge 3 steps to
        // the corner holding the counterclockwise end of edge 2.
        let sigma_white = Permutation::parse_cycles(4, "(1 2)(3 4)").unwrap();
        let sigma_black = sigma_white
            .inverse()
            .compose(&Permutation::long_cycle(4))
            .unwrap();
        let map =
            RootedBipartiteMap::from_factorization(sigma_white, sigma_black, Some(vec![1; 3]), 1)
                .unwrap();
        let special: BTreeSet<usize> = [2, 3].into();
        let mut directions = no_directions(&special);
        directions.insert(
            2,
            DirectionPair {
                white: EndDirection::Undirected,
                black: EndDirection::Counterclockwise,
            },
        );
        directions.insert(
            3,
            DirectionPair {
                white: EndDirection::Clockwise,
                black: EndDirection::Undirected,
            },
        );
        let config = SlidingConfig::from_map(&map, special, directions).unwrap();
        let violations = config.validate();
        assert!(
            violations
                .iter()
                .any(|v| matches!(v, Violation::ForbiddenPattern { .. })),
            "got {violations:?}"
        );
    }

    #[test]
    fn generator_is_deterministic_and_valid() {
        let a = random_valid_config(5, 42).unwrap();
        let b = random_valid_config(5, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.validate().is_empty());
        let c = random_valid_config(5, 43).unwrap();
        assert!(c.validate().is_empty());
    }

    #[test]
    fn involution_and_invariants_hold_on_generated_configs() {
        let mut checked = 0usize;
        for seed in 0..250u64 {
            let k = (seed % 8 + 1) as usize;
            let config = random_valid_config(k, seed).unwrap();
            let slid = config.slide().unwrap();
            // Face preservation, edge/vertex preservation, direction flip.
            assert_eq!(slid.graph().face_count(), config.graph().face_count());
            assert_eq!(slid.graph().vertex_count(), config.graph().vertex_count());
            assert_eq!(slid.special_edges(), config.special_edges());
            for (edge, pair) in config.directions() {
                assert_eq!(slid.directions()[edge], pair.flipped());
            }
            // Undirected special edges keep their incidence.
            for (&edge, pair) in config.directions() {
                if pair.white == EndDirection::Undirected && pair.black == EndDirection::Undirected
                {
                    for slot in [Side::White, Side::Black] {
                        let end = EndRef { edge, slot };
                        assert_eq!(
                            slid.graph().vertex_of_end(end),
                            config.graph().vertex_of_end(end)
                        );
                    }
                }
            }
            // Involution.
            assert_eq!(slid.slide().unwrap(), config);
            checked += 1;
        }
        assert_eq!(checked, 250);
    }

    #[test]
    fn schema_round_trip() {
        let config = random_valid_config(6, 7).unwrap();
        let schema = config.to_schema().unwrap();
        let text = serde_json::to_string(&schema).unwrap();
        let parsed: ConfigSchema = serde_json::from_str(&text).unwrap();
        let back = SlidingConfig::from_schema(parsed).unwrap();
        assert_eq!(back, config);
    }

    #[test]
    fn bipartite_conversion_round_trip() {
        let map = star_map();
        let graph = RotationGraph::from_map(&map);
        let back = graph.to_bipartite_map(None).unwrap();
        assert_eq!(back, map);
    }

    #[test]
    fn residual_of_colour_change_configs_isolates_the_odd_black_vertex() {
        // Marking all edges of the odd-degree black vertex of a two-black
        // expander special leaves the star at the other black vertex plus
        // one isolated vertex, whose full-angle corner is a fixed point.
        let ctx = crate::enumeration::EnumContext::default();
        for map in ctx.enumerate_x(5, 2, 2).unwrap() {
            let odd_black = (0..2)
                .find(|&b| map.black_cycles()[b].len() % 2 == 1)
                .unwrap();
            let special: BTreeSet<usize> =
                map.black_cycles()[odd_black].iter().copied().collect();
            let config =
                SlidingConfig::from_map(&map, special.clone(), no_directions(&special)).unwrap();
            let residual = config.residual_structure();
            let odd_black_vertex = map.white_count() + odd_black;
            let full_corners: Vec<&ResidualCorner> = residual
                .corners
                .iter()
                .filter(|c| c.anchor.is_none())
                .collect();
            assert_eq!(full_corners.len(), 1);
            assert_eq!(full_corners[0].vertex, odd_black_vertex);
            let index = residual.full_corner_of_vertex(odd_black_vertex).unwrap();
            assert_eq!(residual.sigma_res[index], index);
        }
    }
}
