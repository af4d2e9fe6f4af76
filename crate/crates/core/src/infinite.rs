//! Local limit of the map-building machine: a half-plane complex grown from
//! a bi-infinite move sequence, exposed through finite windows.
//!
//! The move at index k is drawn from its own counter-based stream, so
//! enlarging a window never changes moves already generated. The complex is
//! built in two sweeps over a shared vertex store seeded with the integer
//! line (edges between consecutive non-negative indices only): a reverse
//! sweep realizes moves at negative indices below the line, then a forward
//! sweep realizes moves at non-negative indices above it. The root is the
//! line vertex 0, the active vertex of the move at index 0.
//!
//! A vertex's neighborhood is final ("absorbed") once every machine that
//! can still touch it has passed it by: line vertices need both sweeps,
//! vertices above the line only the forward sweep, vertices below only the
//! reverse sweep. A ball is certified when every vertex in it is absorbed;
//! a certified ball can never change under window extension.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::canon::{canonical_code, RootedGraph};
use crate::moves::Move;
use crate::rng::Stream;
use crate::stepdist::StepDistribution;

#[derive(Debug, Error, PartialEq)]
pub enum InfiniteError {
    #[error("window range is empty or inverted: start {m0}, limit {m_max}")]
    InvalidRange { m0: u64, m_max: u64 },
    #[error("ball of radius {radius} not certified within window limit {m_max}")]
    NotCertified { radius: u64, m_max: u64 },
}

/// Moves at indices -m ..= m of a bi-infinite sequence. Each index draws
/// from its own stream, so windows of different widths (or offsets standing
/// in for a translated root) agree wherever they overlap.
#[derive(Clone, Debug)]
pub struct MoveWindow {
    pub seed: u64,
    pub m: u64,
    pub offset: i64,
    moves: Vec<Move>,
}

impl MoveWindow {
    pub fn generate(seed: u64, m: u64, dist: &StepDistribution) -> Self {
        Self::generate_offset(seed, m, 0, dist)
    }

    /// Window centered at sequence position `offset`: `get(k)` returns the
    /// move at absolute index `offset + k`.
    pub fn generate_offset(seed: u64, m: u64, offset: i64, dist: &StepDistribution) -> Self {
        let m_i = m as i64;
        let moves = (-m_i..=m_i)
            .map(|k| dist.sample_move(&mut Stream::indexed(seed, offset + k)))
            .collect();
        MoveWindow { seed, m, offset, moves }
    }

    /// Move at relative index k in [-m, m].
    pub fn get(&self, k: i64) -> Move {
        let m_i = self.m as i64;
        assert!(-m_i <= k && k <= m_i, "index {k} outside window +-{m_i}");
        self.moves[(k + m_i) as usize]
    }

    /// Moves at indices -1, -2, ..., -m (reverse sweep order).
    pub fn reverse_moves(&self) -> Vec<Move> {
        (1..=self.m as i64).map(|k| self.get(-k)).collect()
    }

    /// Moves at indices 0, 1, ..., m (forward sweep order).
    pub fn forward_moves(&self) -> Vec<Move> {
        (0..=self.m as i64).map(|k| self.get(k)).collect()
    }
}

/// Where a vertex sits relative to the integer line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum VertexSide {
    /// Line vertex with its integer coordinate.
    Line(i64),
    /// Created above the line by the forward sweep.
    Upper,
    /// Created below the line by the reverse sweep.
    Lower,
}

/// Stable identity of a vertex across windows of different widths:
/// line vertices by coordinate, others by (sweep, move index, counter).
pub type VertexLabel = (u8, i64, u32);

#[derive(Clone, Debug)]
struct IVert {
    side: VertexSide,
    label: VertexLabel,
    adj: Vec<usize>,
    fwd_absorbed: bool,
    rev_absorbed: bool,
}

#[derive(Clone, Debug)]
pub struct HalfPlaneComplex {
    verts: Vec<IVert>,
    line: BTreeMap<i64, usize>,
    root: usize,
}

/// One sweep's boundary bookkeeping. The chain to the right of the active
/// vertex is an explicit stack (nearest on top) continuing along the line
/// from `right_line_next`; the region to the left is an explicit stack of
/// vertices sitting above pending gaps, continuing with bare line gaps from
/// `left_line_next` leftward.
#[derive(Clone, Debug)]
struct Machine {
    active: usize,
    right: Vec<usize>,
    right_line_next: i64,
    left: Vec<usize>,
    left_line_next: i64,
}

impl Machine {
    fn new(root: usize) -> Self {
        Machine {
            active: root,
            right: Vec::new(),
            right_line_next: 1,
            left: Vec::new(),
            left_line_next: -1,
        }
    }

    /// Net walk coordinates implied by the stacks; tested against the walk
    /// increments driving the machine.
    #[cfg(test)]
    fn x_net(&self) -> i64 {
        self.right.len() as i64 - (self.right_line_next - 1)
    }
    #[cfg(test)]
    fn y_net(&self) -> i64 {
        self.left.len() as i64 - (-1 - self.left_line_next)
    }
}

impl HalfPlaneComplex {
    /// Build from explicit sweep inputs. `rev[t]` is the move at index
    /// -(t+1); `fwd[t]` is the move at index t.
    pub fn from_moves(rev: &[Move], fwd: &[Move]) -> Self {
        let mut cx = HalfPlaneComplex {
            verts: Vec::new(),
            line: BTreeMap::new(),
            root: 0,
        };
        cx.root = cx.line_vertex(0);
        let mut machine = Machine::new(cx.root);
        for (t, &mv) in rev.iter().enumerate() {
            cx.reverse_step(&mut machine, mv, -(t as i64) - 1);
        }
        let mut machine = Machine::new(cx.root);
        for (t, &mv) in fwd.iter().enumerate() {
            cx.forward_step(&mut machine, mv, t as i64);
        }
        cx
    }

    pub fn build(window: &MoveWindow) -> Self {
        Self::from_moves(&window.reverse_moves(), &window.forward_moves())
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn vertex_count(&self) -> usize {
        self.verts.len()
    }

    pub fn side(&self, v: usize) -> VertexSide {
        self.verts[v].side
    }

    pub fn label(&self, v: usize) -> VertexLabel {
        self.verts[v].label
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.verts[v].adj
    }

    pub fn is_fwd_absorbed(&self, v: usize) -> bool {
        self.verts[v].fwd_absorbed
    }

    pub fn is_rev_absorbed(&self, v: usize) -> bool {
        self.verts[v].rev_absorbed
    }

    /// A vertex is settled once no remaining sweep can add edges at it.
    pub fn is_absorbed(&self, v: usize) -> bool {
        let r = &self.verts[v];
        match r.side {
            VertexSide::Line(_) => r.fwd_absorbed && r.rev_absorbed,
            VertexSide::Upper => r.fwd_absorbed,
            VertexSide::Lower => r.rev_absorbed,
        }
    }

    /// Labels of vertices absorbed on each side; grows monotonically with
    /// the window because sweeps only replay longer prefixes.
    pub fn absorbed_labels(&self) -> std::collections::BTreeSet<(VertexLabel, u8)> {
        let mut out = std::collections::BTreeSet::new();
        for v in &self.verts {
            if v.fwd_absorbed {
                out.insert((v.label, 0u8));
            }
            if v.rev_absorbed {
                out.insert((v.label, 1u8));
            }
        }
        out
    }

    fn line_vertex(&mut self, i: i64) -> usize {
        if let Some(&v) = self.line.get(&i) {
            return v;
        }
        let v = self.verts.len();
        self.verts.push(IVert {
            side: VertexSide::Line(i),
            label: (0, i, 0),
            adj: Vec::new(),
            fwd_absorbed: false,
            rev_absorbed: false,
        });
        self.line.insert(i, v);
        // Line edges join consecutive non-negative coordinates only.
        if i >= 1 {
            if let Some(&u) = self.line.get(&(i - 1)) {
                self.add_edge(u, v);
            }
        }
        if i >= 0 {
            if let Some(&u) = self.line.get(&(i + 1)) {
                self.add_edge(v, u);
            }
        }
        v
    }

    fn fresh_vertex(&mut self, side: VertexSide, label: VertexLabel) -> usize {
        let v = self.verts.len();
        self.verts.push(IVert {
            side,
            label,
            adj: Vec::new(),
            fwd_absorbed: false,
            rev_absorbed: false,
        });
        v
    }

    fn add_edge(&mut self, u: usize, v: usize) {
        self.verts[u].adj.push(v);
        self.verts[v].adj.push(u);
    }

    fn next_right(&mut self, mc: &mut Machine) -> usize {
        mc.right.pop().unwrap_or_else(|| {
            let i = mc.right_line_next;
            mc.right_line_next += 1;
            self.line_vertex(i)
        })
    }

    fn next_left(&mut self, mc: &mut Machine) -> usize {
        mc.left.pop().unwrap_or_else(|| {
            let i = mc.left_line_next;
            mc.left_line_next -= 1;
            self.line_vertex(i)
        })
    }

    /// Forward sweep, one move: builds above the line.
    fn forward_step(&mut self, mc: &mut Machine, mv: Move, k: i64) {
        match mv {
            Move::Edge => {
                // Cross the nearest gap on the left; its upper vertex
                // already exists (ghost, anchor, or bare line vertex).
                let upper = self.next_left(mc);
                self.add_edge(mc.active, upper);
                mc.right.push(mc.active);
                mc.active = upper;
            }
            Move::Face { i, j } => {
                let north = mc.active;
                let mut south = north;
                for t in 0..=i {
                    let v = self.next_right(mc);
                    if t < i {
                        self.verts[v].fwd_absorbed = true;
                    }
                    south = v;
                }
                let apex = if j == 0 {
                    north
                } else {
                    // Ghosts for the interior gaps, the old active above
                    // the deepest one, and a fresh apex as new active.
                    let ghosts: Vec<usize> = (1..j)
                        .map(|c| self.fresh_vertex(VertexSide::Upper, (1, k, c as u32)))
                        .collect();
                    mc.left.push(north);
                    for &g in ghosts.iter().rev() {
                        mc.left.push(g);
                    }
                    self.fresh_vertex(VertexSide::Upper, (1, k, 0))
                };
                self.add_edge(south, apex);
                mc.right.push(south);
                mc.active = apex;
            }
        }
    }

    /// Reverse sweep, one move at negative index: builds below the line.
    fn reverse_step(&mut self, mc: &mut Machine, mv: Move, k: i64) {
        match mv {
            Move::Edge => {
                // Pass rightward over an existing edge; the old active now
                // sits above a filled gap in the left region.
                let s = self.next_right(mc);
                mc.left.push(mc.active);
                mc.active = s;
            }
            Move::Face { i, j } => {
                let s = self.next_right(mc);
                let old = mc.active;
                let north = if j == 0 {
                    old
                } else {
                    self.verts[old].rev_absorbed = true;
                    let mut top = old;
                    for t in 1..=j {
                        top = self.next_left(mc);
                        if t < j {
                            self.verts[top].rev_absorbed = true;
                        }
                    }
                    top
                };
                // Newly exposed west side of the face: i fresh vertices
                // strung between the north corner and s.
                let mut prev = north;
                let mut exposed = Vec::with_capacity(i as usize);
                for c in 0..i {
                    let x = self.fresh_vertex(VertexSide::Lower, (2, k, c as u32));
                    self.add_edge(prev, x);
                    exposed.push(x);
                    prev = x;
                }
                self.add_edge(prev, s);
                mc.right.push(s);
                for &x in exposed.iter().rev() {
                    mc.right.push(x);
                }
                mc.active = north;
            }
        }
    }

    /// Ball of the given radius around the root in the graph metric,
    /// materializing line vertices as the search reaches them.
    pub fn extract_ball(&mut self, radius: u64) -> RootedBall {
        let mut dist: BTreeMap<usize, u64> = BTreeMap::new();
        let mut order = vec![self.root];
        dist.insert(self.root, 0);
        let mut head = 0;
        while head < order.len() {
            let v = order[head];
            head += 1;
            let d = dist[&v];
            if d == radius {
                continue;
            }
            // Line neighbors may not be materialized yet.
            if let VertexSide::Line(i) = self.verts[v].side {
                if i >= 1 {
                    self.line_vertex(i - 1);
                }
                if i >= 0 {
                    self.line_vertex(i + 1);
                }
            }
            for idx in 0..self.verts[v].adj.len() {
                let u = self.verts[v].adj[idx];
                if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(u) {
                    e.insert(d + 1);
                    order.push(u);
                }
            }
        }
        let index: BTreeMap<usize, usize> =
            order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adj = vec![Vec::new(); order.len()];
        for (&v, &i) in &index {
            for &u in &self.verts[v].adj {
                if let Some(&ju) = index.get(&u) {
                    adj[i].push(ju);
                }
            }
        }
        let certified = order.iter().all(|&v| self.is_absorbed(v));
        RootedBall {
            graph: RootedGraph::new(adj, 0),
            radius,
            certified,
        }
    }
}

/// A rooted ball extracted from the complex. When `certified` is true the
/// ball is its final value: no wider window can change it.
#[derive(Clone, Debug)]
pub struct RootedBall {
    pub graph: RootedGraph,
    pub radius: u64,
    pub certified: bool,
}

impl RootedBall {
    pub fn code(&self) -> Vec<u8> {
        canonical_code(&self.graph)
    }
}

/// Grow the window by doubling until the radius-`radius` ball at the root
/// certifies; returns the ball and the window width that achieved it.
pub fn grow_until_certified(
    seed: u64,
    radius: u64,
    dist: &StepDistribution,
    m0: u64,
    m_max: u64,
) -> Result<(RootedBall, u64), InfiniteError> {
    if m0 == 0 || m0 > m_max {
        return Err(InfiniteError::InvalidRange { m0, m_max });
    }
    let mut m = m0;
    loop {
        let window = MoveWindow::generate(seed, m, dist);
        let mut cx = HalfPlaneComplex::build(&window);
        let ball = cx.extract_ball(radius);
        if ball.certified {
            return Ok((ball, m));
        }
        if m >= m_max {
            return Err(InfiniteError::NotCertified { radius, m_max });
        }
        m = (m * 2).min(m_max);
    }
}
