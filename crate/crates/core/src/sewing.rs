//! The incremental sewing engine for marked bipolar maps.
//!
//! Starting from the single oriented edge, each move extends the map by
//! exactly one new edge:
//!
//! * `m_e` — if missing east edges sit above the active vertex, the new edge
//!   fills the southernmost missing slot (its upper endpoint is the slot's
//!   anchor when the slot is the topmost one of its face, otherwise a fresh
//!   vertex); otherwise a fresh vertex is stacked on top and the map's top
//!   moves up. The active vertex moves to the new edge's upper endpoint.
//! * `m_{i,j}` — a face with `i+1` west and `j+1` east edges is sewn east of
//!   the boundary: the old active vertex becomes the face's north, the `i+1`
//!   edges below it on the eastern boundary become the face's west side (if
//!   fewer exist, the remainder are recorded as missing west edges hanging
//!   below the start vertex), and the southernmost east edge is created with
//!   the face's south as lower endpoint. The `j` remaining east edges stay
//!   missing above the new active vertex.
//!
//! Everything is invertible: [`decode_map`] peels moves off a finished (or
//! partial) construction, which is the exactness proof behind the round-trip
//! tests.

use crate::moves::{LatticePath, Move};
use thiserror::Error;

pub type VertexId = usize;
pub type EdgeId = usize;
pub type FaceId = usize;

#[derive(Debug, Error, PartialEq)]
pub enum SewingError {
    #[error("invalid map structure: {0}")]
    Invalid(String),
    #[error("operation requires a completed map")]
    NotCompleted,
}

/// Rotation data at a vertex: outgoing (`up`) and incoming (`down`) edges,
/// both ordered west to east. The clockwise rotation is `up` followed by
/// `down` reversed.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VertexRec {
    pub up: Vec<EdgeId>,
    pub down: Vec<EdgeId>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeRec {
    pub tail: VertexId,
    pub head: VertexId,
    /// Bounded face on the west side, if any.
    pub west_face: Option<FaceId>,
    /// Bounded face on the east side, if any.
    pub east_face: Option<FaceId>,
}

/// Face edge lists, bottom to top; `None` marks a missing edge.
#[derive(Clone, Debug, PartialEq)]
pub struct FaceRec {
    pub west: Vec<Option<EdgeId>>,
    pub east: Vec<Option<EdgeId>>,
}

impl FaceRec {
    pub fn degree(&self) -> usize {
        self.west.len() + self.east.len()
    }
}

/// A missing east edge above the active vertex, owned by `face` at position
/// `index` of its east list. `upper` is the anchor vertex when the slot is
/// the topmost missing slot of its face (the face's north).
#[derive(Clone, Debug, PartialEq)]
pub struct PendingSlot {
    pub face: FaceId,
    pub index: usize,
    pub upper: Option<VertexId>,
}

/// A group of missing west edges below the start vertex, created by one face
/// move that wrapped around the bottom of the map.
#[derive(Clone, Debug, PartialEq)]
pub struct WestGroup {
    pub face: FaceId,
    pub missing: usize,
    /// The fresh bottom vertex created by the deficit (the face's south).
    pub bottom: VertexId,
}

/// A marked bipolar map under construction (or completed).
#[derive(Clone, Debug)]
pub struct MarkedBipolarMap {
    pub(crate) verts: Vec<VertexRec>,
    pub(crate) vert_alive: Vec<bool>,
    pub(crate) edges: Vec<EdgeRec>,
    pub(crate) edge_alive: Vec<bool>,
    pub(crate) faces: Vec<FaceRec>,
    pub(crate) face_alive: Vec<bool>,
    /// Eastern boundary, real part: bottom vertex up to the active vertex.
    pub(crate) east_verts: Vec<VertexId>,
    pub(crate) east_edges: Vec<EdgeId>,
    /// Missing east edges above the active vertex; `last()` fills next.
    pub(crate) pending: Vec<PendingSlot>,
    /// Western boundary from the start vertex up to the top.
    pub(crate) west_verts: Vec<VertexId>,
    pub(crate) west_edges: Vec<EdgeId>,
    /// Missing west structure below the start vertex, top to bottom.
    pub(crate) below_start: Vec<WestGroup>,
    pub(crate) start: VertexId,
    /// `(move, active vertex before the move)`, in order of application.
    pub(crate) move_log: Vec<(Move, VertexId)>,
}

impl MarkedBipolarMap {
    /// The initial map: a single edge from the start vertex to the active one.
    pub fn new() -> Self {
        let verts = vec![
            VertexRec { up: vec![0], down: vec![] },
            VertexRec { up: vec![], down: vec![0] },
        ];
        let edges = vec![EdgeRec { tail: 0, head: 1, west_face: None, east_face: None }];
        MarkedBipolarMap {
            verts,
            vert_alive: vec![true, true],
            edges,
            edge_alive: vec![true],
            faces: Vec::new(),
            face_alive: Vec::new(),
            east_verts: vec![0, 1],
            east_edges: vec![0],
            pending: Vec::new(),
            west_verts: vec![0, 1],
            west_edges: vec![0],
            below_start: Vec::new(),
            start: 0,
            move_log: Vec::new(),
        }
    }

    /// Reassemble a map from serialized parts (codec use). Serialized maps
    /// are dense, so every entry is alive.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_parts(
        verts: Vec<VertexRec>,
        edges: Vec<EdgeRec>,
        faces: Vec<FaceRec>,
        east_verts: Vec<VertexId>,
        east_edges: Vec<EdgeId>,
        pending: Vec<PendingSlot>,
        west_verts: Vec<VertexId>,
        west_edges: Vec<EdgeId>,
        below_start: Vec<WestGroup>,
        start: VertexId,
        move_log: Vec<(Move, VertexId)>,
    ) -> Self {
        let vert_alive = vec![true; verts.len()];
        let edge_alive = vec![true; edges.len()];
        let face_alive = vec![true; faces.len()];
        MarkedBipolarMap {
            verts,
            vert_alive,
            edges,
            edge_alive,
            faces,
            face_alive,
            east_verts,
            east_edges,
            pending,
            west_verts,
            west_edges,
            below_start,
            start,
            move_log,
        }
    }

    fn new_vertex(&mut self) -> VertexId {
        self.verts.push(VertexRec::default());
        self.vert_alive.push(true);
        self.verts.len() - 1
    }

    fn new_edge(&mut self, tail: VertexId, head: VertexId, west_face: Option<FaceId>) -> EdgeId {
        let id = self.edges.len();
        self.edges.push(EdgeRec { tail, head, west_face, east_face: None });
        self.edge_alive.push(true);
        self.verts[tail].up.push(id);
        self.verts[head].down.push(id);
        id
    }

    /// Current active vertex (top of the real eastern boundary).
    pub fn active(&self) -> VertexId {
        *self.east_verts.last().expect("east boundary nonempty")
    }

    pub fn start_vertex(&self) -> VertexId {
        self.start
    }

    pub fn edge_count(&self) -> usize {
        self.edge_alive.iter().filter(|&&a| a).count()
    }

    pub fn vertex_count(&self) -> usize {
        self.vert_alive.iter().filter(|&&a| a).count()
    }

    pub fn bounded_face_count(&self) -> usize {
        self.face_alive.iter().filter(|&&a| a).count()
    }

    /// Degrees of bounded faces, in creation order.
    pub fn face_degrees(&self) -> Vec<usize> {
        self.faces
            .iter()
            .zip(&self.face_alive)
            .filter(|(_, &a)| a)
            .map(|(f, _)| f.degree())
            .collect()
    }

    pub fn missing_east(&self) -> usize {
        self.pending.len()
    }

    pub fn missing_west(&self) -> usize {
        self.below_start.iter().map(|g| g.missing).sum()
    }

    /// Completed means no missing edges on either boundary.
    pub fn is_completed(&self) -> bool {
        self.pending.is_empty() && self.below_start.is_empty()
    }

    /// Source (bottom) of a completed map.
    pub fn source(&self) -> Result<VertexId, SewingError> {
        if !self.is_completed() {
            return Err(SewingError::NotCompleted);
        }
        Ok(self.east_verts[0])
    }

    /// Sink (top) of a completed map.
    pub fn sink(&self) -> Result<VertexId, SewingError> {
        if !self.is_completed() {
            return Err(SewingError::NotCompleted);
        }
        Ok(self.active())
    }

    /// West / east boundary edge counts (only meaningful once completed).
    pub fn west_boundary_len(&self) -> usize {
        self.west_edges.len()
    }

    pub fn east_boundary_len(&self) -> usize {
        self.east_edges.len()
    }

    /// The move word applied so far, with the active vertex before each move.
    pub fn move_log(&self) -> &[(Move, VertexId)] {
        &self.move_log
    }

    /// Apply one move of the sewing construction.
    pub fn apply_move(&mut self, mv: Move) {
        let active = self.active();
        self.move_log.push((mv, active));
        match mv {
            Move::Edge => {
                if let Some(slot) = self.pending.pop() {
                    let upper = match slot.upper {
                        Some(v) => v,
                        None => self.new_vertex(),
                    };
                    let e = self.new_edge(active, upper, Some(slot.face));
                    self.faces[slot.face].east[slot.index] = Some(e);
                    self.east_verts.push(upper);
                    self.east_edges.push(e);
                } else {
                    let u = self.new_vertex();
                    let e = self.new_edge(active, u, None);
                    self.east_verts.push(u);
                    self.east_edges.push(e);
                    self.west_verts.push(u);
                    self.west_edges.push(e);
                }
            }
            Move::Face { i, j } => {
                let north = active;
                let fid = self.faces.len();
                let need = i as usize + 1;
                let take = need.min(self.east_edges.len());
                let mut west: Vec<Option<EdgeId>> = Vec::with_capacity(need);
                for _ in 0..take {
                    let e = self.east_edges.pop().expect("checked");
                    self.east_verts.pop();
                    self.edges[e].east_face = Some(fid);
                    west.push(Some(e));
                }
                west.reverse();
                let south;
                if take < need {
                    let deficit = need - take;
                    debug_assert!(self.east_edges.is_empty());
                    self.east_verts.clear();
                    south = self.new_vertex();
                    self.east_verts.push(south);
                    let mut full = vec![None; deficit];
                    full.extend(west);
                    west = full;
                    self.below_start.push(WestGroup { face: fid, missing: deficit, bottom: south });
                } else {
                    south = *self.east_verts.last().expect("south exists");
                }
                let upper = if j == 0 { north } else { self.new_vertex() };
                let e_new = self.new_edge(south, upper, Some(fid));
                let mut east = vec![None; j as usize + 1];
                east[0] = Some(e_new);
                self.faces.push(FaceRec { west, east });
                self.face_alive.push(true);
                // Missing east slots, topmost (anchored at the north) first so
                // that the slot at index 1 is filled next.
                for idx in (1..=j as usize).rev() {
                    self.pending.push(PendingSlot {
                        face: fid,
                        index: idx,
                        upper: if idx == j as usize { Some(north) } else { None },
                    });
                }
                self.east_verts.push(upper);
                self.east_edges.push(e_new);
            }
        }
    }

    /// Multigraph adjacency over vertex ids (multi-edges repeated).
    pub fn adjacency(&self) -> Vec<Vec<VertexId>> {
        let mut adj = vec![Vec::new(); self.verts.len()];
        for (e, alive) in self.edges.iter().zip(&self.edge_alive) {
            if *alive {
                adj[e.tail].push(e.head);
                adj[e.head].push(e.tail);
            }
        }
        adj
    }

    fn remove_edge(&mut self, e: EdgeId) -> Result<(), SewingError> {
        let EdgeRec { tail, head, .. } = self.edges[e];
        if self.verts[tail].up.pop() != Some(e) {
            return Err(SewingError::Invalid(format!(
                "edge {e} is not the east-most outgoing edge of its tail"
            )));
        }
        if self.verts[head].down.pop() != Some(e) {
            return Err(SewingError::Invalid(format!(
                "edge {e} is not the east-most incoming edge of its head"
            )));
        }
        self.edge_alive[e] = false;
        Ok(())
    }

    fn remove_vertex(&mut self, v: VertexId) -> Result<(), SewingError> {
        if !self.verts[v].up.is_empty() || !self.verts[v].down.is_empty() {
            return Err(SewingError::Invalid(format!(
                "vertex {v} still has incident edges"
            )));
        }
        self.vert_alive[v] = false;
        Ok(())
    }

    /// Undo the most recent move; returns it. Used by [`decode_map`].
    fn undo_move(&mut self) -> Result<Move, SewingError> {
        let invalid = |msg: &str| SewingError::Invalid(msg.to_string());
        let &e_last = self
            .east_edges
            .last()
            .ok_or_else(|| invalid("empty eastern boundary"))?;
        let head = self.edges[e_last].head;
        let tail = self.edges[e_last].tail;
        let wf = self.edges[e_last].west_face;
        let is_face_creation =
            wf.is_some_and(|f| self.faces[f].east[0] == Some(e_last));

        if is_face_creation {
            let f = wf.expect("checked");
            let j = self.faces[f].east.len() - 1;
            let i = self.faces[f].west.len() - 1;
            if self.faces[f].east[1..].iter().any(|s| s.is_some()) {
                return Err(invalid("face with filled east slots cannot be the last move"));
            }
            // Pop this face's missing slots (they are the next ones to fill).
            for idx in 1..=j {
                match self.pending.pop() {
                    Some(slot) if slot.face == f && slot.index == idx => {}
                    _ => return Err(invalid("pending slots do not match last face")),
                }
            }
            self.remove_edge(e_last)?;
            self.east_edges.pop();
            self.east_verts.pop();
            if j >= 1 {
                self.remove_vertex(head)?;
            }
            let deficit = self.faces[f].west.iter().take_while(|s| s.is_none()).count();
            let west_real: Vec<EdgeId> = self.faces[f].west[deficit..]
                .iter()
                .map(|s| s.ok_or_else(|| invalid("missing west edge above a real one")))
                .collect::<Result<_, _>>()?;
            if deficit > 0 {
                match self.below_start.pop() {
                    Some(g) if g.face == f && g.missing == deficit && g.bottom == tail => {}
                    _ => return Err(invalid("below-start group does not match last face")),
                }
                if self.east_verts != vec![tail] {
                    return Err(invalid("deficit face must own the whole east chain"));
                }
                self.east_verts.clear();
                self.remove_vertex(tail)?;
                let first = *west_real
                    .first()
                    .ok_or_else(|| invalid("deficit face with no real west edge"))?;
                self.east_verts.push(self.edges[first].tail);
            } else if *self.east_verts.last().ok_or_else(|| invalid("empty chain"))? != tail {
                return Err(invalid("east chain does not end at the face's south"));
            }
            for &e in &west_real {
                if self.edges[e].tail != *self.east_verts.last().expect("nonempty") {
                    return Err(invalid("restored west edge does not chain"));
                }
                self.edges[e].east_face = None;
                self.east_edges.push(e);
                self.east_verts.push(self.edges[e].head);
            }
            self.face_alive[f] = false;
            self.move_log.pop();
            Ok(Move::Face { i: i as u64, j: j as u64 })
        } else {
            // Last move was m_e.
            let degree = self.verts[head].up.len() + self.verts[head].down.len();
            if degree == 1 && Some(&head) == self.west_verts.last() {
                // Top-type: the edge extended both boundaries.
                if self.west_edges.last() != Some(&e_last) {
                    return Err(invalid("west boundary does not end with the last edge"));
                }
                self.remove_edge(e_last)?;
                self.remove_vertex(head)?;
                self.east_edges.pop();
                self.east_verts.pop();
                self.west_edges.pop();
                self.west_verts.pop();
            } else {
                // Fill-type: restore the pending slot.
                let f = wf.ok_or_else(|| invalid("fill edge without a west face"))?;
                let idx = self.faces[f]
                    .east
                    .iter()
                    .position(|s| *s == Some(e_last))
                    .ok_or_else(|| invalid("fill edge not on its face's east side"))?;
                if idx == 0 || self.faces[f].east[idx + 1..].iter().any(|s| s.is_some()) {
                    return Err(invalid("fill edge is not the topmost filled slot"));
                }
                self.faces[f].east[idx] = None;
                self.remove_edge(e_last)?;
                let upper = if degree == 1 {
                    self.remove_vertex(head)?;
                    None
                } else {
                    Some(head)
                };
                self.pending.push(PendingSlot { face: f, index: idx, upper });
                self.east_edges.pop();
                self.east_verts.pop();
            }
            self.move_log.pop();
            Ok(Move::Edge)
        }
    }

    /// Compare the map structure (ignoring the move log).
    pub fn structural_eq(&self, other: &MarkedBipolarMap) -> bool {
        self.verts == other.verts
            && self.vert_alive == other.vert_alive
            && self.edges == other.edges
            && self.edge_alive == other.edge_alive
            && self.faces == other.faces
            && self.face_alive == other.face_alive
            && self.east_verts == other.east_verts
            && self.east_edges == other.east_edges
            && self.pending == other.pending
            && self.west_verts == other.west_verts
            && self.west_edges == other.west_edges
            && self.below_start == other.below_start
            && self.start == other.start
    }

    /// Distance to the source along repeated south-east edges (the SE tree).
    fn dist_se(&self, source: VertexId) -> Result<Vec<Option<u64>>, SewingError> {
        let mut dist: Vec<Option<u64>> = vec![None; self.verts.len()];
        dist[source] = Some(0);
        for v0 in 0..self.verts.len() {
            if !self.vert_alive[v0] || dist[v0].is_some() {
                continue;
            }
            let mut chain = vec![v0];
            let mut v = v0;
            while dist[v].is_none() {
                let e = *self.verts[v]
                    .down
                    .last()
                    .ok_or_else(|| SewingError::Invalid(format!("vertex {v} has no SE edge")))?;
                v = self.edges[e].tail;
                if dist[v].is_none() {
                    chain.push(v);
                }
            }
            let mut d = dist[v].expect("anchored");
            for &u in chain.iter().rev() {
                d += 1;
                dist[u] = Some(d);
            }
        }
        Ok(dist)
    }

    /// Distance to the sink along repeated north-west edges (the NW tree).
    fn dist_nw(&self, sink: VertexId) -> Result<Vec<Option<u64>>, SewingError> {
        let mut dist: Vec<Option<u64>> = vec![None; self.verts.len()];
        dist[sink] = Some(0);
        for v0 in 0..self.verts.len() {
            if !self.vert_alive[v0] || dist[v0].is_some() {
                continue;
            }
            let mut chain = vec![v0];
            let mut v = v0;
            while dist[v].is_none() {
                let e = *self.verts[v]
                    .up
                    .first()
                    .ok_or_else(|| SewingError::Invalid(format!("vertex {v} has no NW edge")))?;
                v = self.edges[e].head;
                if dist[v].is_none() {
                    chain.push(v);
                }
            }
            let mut d = dist[v].expect("anchored");
            for &u in chain.iter().rev() {
                d += 1;
                dist[u] = Some(d);
            }
        }
        Ok(dist)
    }

    /// NW-tree parent of each edge: the west-most north-going edge at the
    /// upper endpoint. At the sink, each edge's parent is its west neighbor;
    /// the root (parent `None`) is the top west-boundary edge.
    pub fn nw_tree(&self) -> Result<Vec<Option<EdgeId>>, SewingError> {
        let sink = self.sink()?;
        let mut parent = vec![None; self.edges.len()];
        for (e, rec) in self.edges.iter().enumerate() {
            if !self.edge_alive[e] {
                continue;
            }
            if rec.head != sink {
                parent[e] = Some(self.verts[rec.head].up[0]);
            } else {
                let pos = self.verts[sink]
                    .down
                    .iter()
                    .position(|&x| x == e)
                    .expect("edge registered at sink");
                parent[e] = if pos == 0 {
                    None
                } else {
                    Some(self.verts[sink].down[pos - 1])
                };
            }
        }
        Ok(parent)
    }

    /// SE-tree parent of each edge: the east-most south-going edge at the
    /// lower endpoint; mirrored convention at the source (root = bottom east
    /// boundary edge).
    pub fn se_tree(&self) -> Result<Vec<Option<EdgeId>>, SewingError> {
        let source = self.source()?;
        let mut parent = vec![None; self.edges.len()];
        for (e, rec) in self.edges.iter().enumerate() {
            if !self.edge_alive[e] {
                continue;
            }
            if rec.tail != source {
                parent[e] = Some(*self.verts[rec.tail].down.last().expect("nonempty"));
            } else {
                let pos = self.verts[source]
                    .up
                    .iter()
                    .position(|&x| x == e)
                    .expect("edge registered at source");
                parent[e] = if pos + 1 == self.verts[source].up.len() {
                    None
                } else {
                    Some(self.verts[source].up[pos + 1])
                };
            }
        }
        Ok(parent)
    }

    /// Contour path of a completed map: edges in creation (Peano) order,
    /// positions read off the SE/NW tree distances of their endpoints. The
    /// result starts at `(0, ℓ-1)` and ends at `(k-1, 0)`.
    pub fn contour_path(&self) -> Result<LatticePath, SewingError> {
        let source = self.source()?;
        let sink = self.sink()?;
        let dse = self.dist_se(source)?;
        let dnw = self.dist_nw(sink)?;
        let mut positions = Vec::with_capacity(self.edges.len());
        for (e, rec) in self.edges.iter().enumerate() {
            if !self.edge_alive[e] {
                return Err(SewingError::Invalid(
                    "completed maps must have contiguous live edges".into(),
                ));
            }
            let x = dse[rec.tail].ok_or_else(|| SewingError::Invalid("unreachable tail".into()))?;
            let y = dnw[rec.head].ok_or_else(|| SewingError::Invalid("unreachable head".into()))?;
            positions.push((x as i64, y as i64));
        }
        let start = positions[0];
        let mut moves = Vec::with_capacity(positions.len().saturating_sub(1));
        for w in positions.windows(2) {
            let (dx, dy) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
            let mv = if (dx, dy) == (1, -1) {
                Move::Edge
            } else if dx <= 0 && dy >= 0 {
                Move::Face { i: (-dx) as u64, j: dy as u64 }
            } else {
                return Err(SewingError::Invalid(format!(
                    "tree distances produce a non-move increment ({dx}, {dy})"
                )));
            };
            moves.push(mv);
        }
        if start != (0, (self.west_boundary_len() as i64) - 1) {
            return Err(SewingError::Invalid("contour start is off".into()));
        }
        Ok(LatticePath::new(start, moves))
    }
}

impl Default for MarkedBipolarMap {
    fn default() -> Self {
        Self::new()
    }
}

/// Build a marked bipolar map from a move word.
pub fn build_map(moves: &[Move]) -> MarkedBipolarMap {
    let mut map = MarkedBipolarMap::new();
    for &mv in moves {
        map.apply_move(mv);
    }
    map
}

/// Recover the move word of a map produced by the sewing construction.
pub fn decode_map(map: &MarkedBipolarMap) -> Result<Vec<Move>, SewingError> {
    let mut work = map.clone();
    let mut rev = Vec::new();
    while work.edge_count() > 1 {
        rev.push(work.undo_move()?);
    }
    if !work.pending.is_empty() || !work.below_start.is_empty() {
        return Err(SewingError::Invalid(
            "decoding terminated with missing edges outstanding".into(),
        ));
    }
    if work.vertex_count() != 2 || work.east_edges.len() != 1 {
        return Err(SewingError::Invalid(
            "decoding did not reach the initial single-edge map".into(),
        ));
    }
    rev.reverse();
    Ok(rev)
}

/// A structural defect reported by [`validate_bipolar`].
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    RotationInconsistent(String),
    Cyclic(String),
    FaceChainBroken(String),
    BoundaryBroken(String),
    PendingBroken(String),
    PoleNotUnique(String),
    EulerMismatch(String),
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (kind, msg) = match self {
            Violation::RotationInconsistent(m) => ("rotation", m),
            Violation::Cyclic(m) => ("acyclicity", m),
            Violation::FaceChainBroken(m) => ("face", m),
            Violation::BoundaryBroken(m) => ("boundary", m),
            Violation::PendingBroken(m) => ("pending", m),
            Violation::PoleNotUnique(m) => ("poles", m),
            Violation::EulerMismatch(m) => ("euler", m),
        };
        write!(f, "{kind}: {msg}")
    }
}

/// Diagnostic validation; an empty report means no defect was found.
pub fn validate_bipolar(map: &MarkedBipolarMap) -> Vec<Violation> {
    let mut out = Vec::new();

    // Rotation system consistency.
    for (e, rec) in map.edges.iter().enumerate() {
        if !map.edge_alive[e] {
            continue;
        }
        if map.verts[rec.tail].up.iter().filter(|&&x| x == e).count() != 1 {
            out.push(Violation::RotationInconsistent(format!(
                "edge {e} not registered exactly once at tail {}",
                rec.tail
            )));
        }
        if map.verts[rec.head].down.iter().filter(|&&x| x == e).count() != 1 {
            out.push(Violation::RotationInconsistent(format!(
                "edge {e} not registered exactly once at head {}",
                rec.head
            )));
        }
    }
    for (v, rec) in map.verts.iter().enumerate() {
        if !map.vert_alive[v] {
            continue;
        }
        for &e in rec.up.iter() {
            if !map.edge_alive.get(e).copied().unwrap_or(false) || map.edges[e].tail != v {
                out.push(Violation::RotationInconsistent(format!(
                    "vertex {v} lists edge {e} as outgoing incorrectly"
                )));
            }
        }
        for &e in rec.down.iter() {
            if !map.edge_alive.get(e).copied().unwrap_or(false) || map.edges[e].head != v {
                out.push(Violation::RotationInconsistent(format!(
                    "vertex {v} lists edge {e} as incoming incorrectly"
                )));
            }
        }
    }

    // Acyclicity via Kahn's algorithm, using the edge array as ground truth.
    {
        let mut indeg = vec![0usize; map.verts.len()];
        let mut succ = vec![Vec::new(); map.verts.len()];
        for (e, rec) in map.edges.iter().enumerate() {
            if map.edge_alive[e] {
                indeg[rec.head] += 1;
                succ[rec.tail].push(rec.head);
            }
        }
        let live_verts = map.vertex_count();
        let mut queue: Vec<VertexId> = (0..map.verts.len())
            .filter(|&v| map.vert_alive[v] && indeg[v] == 0)
            .collect();
        let mut seen = 0;
        while let Some(v) = queue.pop() {
            seen += 1;
            for &h in &succ[v] {
                indeg[h] -= 1;
                if indeg[h] == 0 {
                    queue.push(h);
                }
            }
        }
        if seen != live_verts {
            out.push(Violation::Cyclic(format!(
                "orientation has a directed cycle ({seen} of {live_verts} vertices sorted)"
            )));
        }
    }

    // Face side chains.
    for (f, rec) in map.faces.iter().enumerate() {
        if !map.face_alive[f] {
            continue;
        }
        if rec.west.is_empty() || rec.east.is_empty() {
            out.push(Violation::FaceChainBroken(format!("face {f} has an empty side")));
            continue;
        }
        let check_chain = |side: &[Option<EdgeId>], name: &str, out: &mut Vec<Violation>| {
            let mut prev_head: Option<VertexId> = None;
            for slot in side.iter().flatten() {
                let e = *slot;
                if let Some(ph) = prev_head {
                    if map.edges[e].tail != ph {
                        out.push(Violation::FaceChainBroken(format!(
                            "face {f} {name} side does not chain at edge {e}"
                        )));
                    }
                }
                prev_head = Some(map.edges[e].head);
            }
        };
        // West side: missing only as a prefix; east side: filled as a prefix.
        let wdef = rec.west.iter().take_while(|s| s.is_none()).count();
        if rec.west[wdef..].iter().any(|s| s.is_none()) {
            out.push(Violation::FaceChainBroken(format!(
                "face {f} has a missing west edge above a real one"
            )));
        }
        if rec.east[0].is_none() {
            out.push(Violation::FaceChainBroken(format!(
                "face {f} lacks its southernmost east edge"
            )));
        }
        let efill = rec.east.iter().take_while(|s| s.is_some()).count();
        if rec.east[efill..].iter().any(|s| s.is_some()) {
            out.push(Violation::FaceChainBroken(format!(
                "face {f} has a filled east slot above a missing one"
            )));
        }
        check_chain(&rec.west, "west", &mut out);
        check_chain(&rec.east, "east", &mut out);
    }

    // Boundary chains.
    if map.east_verts.len() != map.east_edges.len() + 1 {
        out.push(Violation::BoundaryBroken("east boundary length mismatch".into()));
    } else {
        for (idx, &e) in map.east_edges.iter().enumerate() {
            if map.edges[e].tail != map.east_verts[idx] || map.edges[e].head != map.east_verts[idx + 1]
            {
                out.push(Violation::BoundaryBroken(format!(
                    "east boundary edge {e} does not connect its neighbors"
                )));
            }
        }
    }
    if map.west_verts.len() != map.west_edges.len() + 1 {
        out.push(Violation::BoundaryBroken("west boundary length mismatch".into()));
    } else {
        for (idx, &e) in map.west_edges.iter().enumerate() {
            if map.edges[e].tail != map.west_verts[idx] || map.edges[e].head != map.west_verts[idx + 1]
            {
                out.push(Violation::BoundaryBroken(format!(
                    "west boundary edge {e} does not connect its neighbors"
                )));
            }
        }
        if map.west_verts.first() != Some(&map.start) {
            out.push(Violation::BoundaryBroken("west boundary does not start at the start vertex".into()));
        }
    }

    // Pending slots point at genuinely missing east positions.
    for slot in &map.pending {
        let ok = map
            .faces
            .get(slot.face)
            .map(|f| slot.index > 0 && slot.index < f.east.len() && f.east[slot.index].is_none())
            .unwrap_or(false);
        if !ok {
            out.push(Violation::PendingBroken(format!(
                "pending slot (face {}, index {}) does not match its face",
                slot.face, slot.index
            )));
        }
    }

    if map.is_completed() {
        let sources: Vec<VertexId> = (0..map.verts.len())
            .filter(|&v| map.vert_alive[v] && map.verts[v].down.is_empty())
            .collect();
        let sinks: Vec<VertexId> = (0..map.verts.len())
            .filter(|&v| map.vert_alive[v] && map.verts[v].up.is_empty())
            .collect();
        if sources.len() != 1 || sources[0] != map.east_verts[0] {
            out.push(Violation::PoleNotUnique(format!("sources: {sources:?}")));
        }
        if sinks.len() != 1 || Some(&sinks[0]) != map.east_verts.last() {
            out.push(Violation::PoleNotUnique(format!("sinks: {sinks:?}")));
        }
        let v = map.vertex_count() as i64;
        let e = map.edge_count() as i64;
        let f = map.bounded_face_count() as i64 + 1; // plus the outer face
        if v - e + f != 2 {
            out.push(Violation::EulerMismatch(format!(
                "V - E + F = {} (want 2)",
                v - e + f
            )));
        }
    }

    out
}
