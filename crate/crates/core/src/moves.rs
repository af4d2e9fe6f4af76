//! The move alphabet and lattice paths.
//!
//! A move is either the edge move `m_e` or a face move `m_{i,j}` (a face with
//! `i + 1` west edges and `j + 1` east edges, hence degree `i + j + 2`).
//! Read as a walk increment, `m_e ↦ (1, -1)` and `m_{i,j} ↦ (-i, j)`.

use serde::{Deserialize, Serialize};

/// One step of the sewing construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Move {
    /// `m_e`: sew a single edge.
    Edge,
    /// `m_{i,j}`: sew a face with `i + 1` west edges and `j + 1` east edges.
    Face { i: u64, j: u64 },
}

impl Move {
    /// Walk increment of the move.
    #[inline]
    pub fn increment(self) -> (i64, i64) {
        match self {
            Move::Edge => (1, -1),
            Move::Face { i, j } => (-(i as i64), j as i64),
        }
    }

    /// Degree of the face sewn by a face move (`i + j + 2`); `None` for `m_e`.
    #[inline]
    pub fn face_degree(self) -> Option<u64> {
        match self {
            Move::Edge => None,
            Move::Face { i, j } => Some(i + j + 2),
        }
    }

    /// Stable text key, used in frequency tables and the text codec.
    pub fn key(self) -> String {
        match self {
            Move::Edge => "E".to_string(),
            Move::Face { i, j } => format!("F {i} {j}"),
        }
    }
}

/// A finite lattice path: a start position plus a word of moves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticePath {
    pub start: (i64, i64),
    pub moves: Vec<Move>,
}

impl LatticePath {
    pub fn new(start: (i64, i64), moves: Vec<Move>) -> Self {
        LatticePath { start, moves }
    }

    /// All visited positions, including the start (`moves.len() + 1` entries).
    pub fn positions(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::with_capacity(self.moves.len() + 1);
        let (mut x, mut y) = self.start;
        out.push((x, y));
        for m in &self.moves {
            let (dx, dy) = m.increment();
            x += dx;
            y += dy;
            out.push((x, y));
        }
        out
    }

    pub fn end(&self) -> (i64, i64) {
        let (mut x, mut y) = self.start;
        for m in &self.moves {
            let (dx, dy) = m.increment();
            x += dx;
            y += dy;
        }
        (x, y)
    }

    /// Does every visited position (start included) lie in the closed quadrant?
    pub fn stays_in_quadrant(&self) -> bool {
        self.positions().iter().all(|&(x, y)| x >= 0 && y >= 0)
    }
}
