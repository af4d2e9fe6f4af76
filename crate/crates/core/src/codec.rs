//! Text and JSON formats: move scripts, the map document, and CSV reals.
//!
//! Moves serialize one per line (`E`, or `F <i> <j>`); decode errors carry
//! 1-based line numbers. Maps serialize to a single JSON document with all
//! construction state indexed in creation order, so equal move sequences
//! give byte-identical documents; decode rebuilds the map and validates it.
//! Reals destined for CSV render with 17 significant digits so a reload is
//! bit-faithful.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::moves::Move;
use crate::sewing::{
    validate_bipolar, EdgeRec, FaceRec, MarkedBipolarMap, PendingSlot, VertexRec, WestGroup,
};

#[derive(Debug, Error)]
pub enum CodecError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("dangling {kind} index {index}")]
    DanglingIndex { kind: &'static str, index: usize },
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("document fails map validation: {0}")]
    InvalidMap(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

/// One move per line: `E` or `F <i> <j>`; trailing newline included.
pub fn moves_text_encode(moves: &[Move]) -> String {
    let mut out = String::new();
    for m in moves {
        match m {
            Move::Edge => out.push('E'),
            Move::Face { i, j } => out.push_str(&format!("F {i} {j}")),
        }
        out.push('\n');
    }
    out
}

/// Exact inverse of [`moves_text_encode`]; blank lines are permitted.
pub fn moves_text_decode(text: &str) -> Result<Vec<Move>, CodecError> {
    let mut moves = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut parts = raw.split_whitespace();
        match parts.next() {
            None => continue,
            Some("E") => {
                if parts.next().is_some() {
                    return Err(CodecError::Parse {
                        line,
                        msg: "unexpected tokens after E".into(),
                    });
                }
                moves.push(Move::Edge);
            }
            Some("F") => {
                let mut field = |name: &str| -> Result<u64, CodecError> {
                    parts
                        .next()
                        .ok_or_else(|| CodecError::Parse {
                            line,
                            msg: format!("F is missing {name}"),
                        })?
                        .parse()
                        .map_err(|e| CodecError::Parse {
                            line,
                            msg: format!("bad {name}: {e}"),
                        })
                };
                let i = field("i")?;
                let j = field("j")?;
                if parts.next().is_some() {
                    return Err(CodecError::Parse {
                        line,
                        msg: "unexpected tokens after F i j".into(),
                    });
                }
                moves.push(Move::Face { i, j });
            }
            Some(tok) => {
                return Err(CodecError::Parse {
                    line,
                    msg: format!("unknown move '{tok}'"),
                })
            }
        }
    }
    Ok(moves)
}

/// 17-significant-digit rendering for CSV reals (bit-faithful reload).
pub fn csv_real(x: f64) -> String {
    format!("{x:.16e}")
}

/// Assemble a CSV document from a header and stringified rows.
pub fn csv_document(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

#[derive(Serialize, Deserialize)]
struct RotationDoc {
    up: Vec<usize>,
    down: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct FaceDoc {
    west: Vec<Option<usize>>,
    east: Vec<Option<usize>>,
}

#[derive(Serialize, Deserialize)]
struct BoundaryDoc {
    verts: Vec<usize>,
    edges: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct PendingDoc {
    face: usize,
    index: usize,
    upper: Option<usize>,
}

#[derive(Serialize, Deserialize)]
struct GroupDoc {
    face: usize,
    missing: usize,
    bottom: usize,
}

/// The single-document map schema: everything indexed in creation order.
#[derive(Serialize, Deserialize)]
struct MapDoc {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    rotations: Vec<RotationDoc>,
    faces: Vec<FaceDoc>,
    source: Option<usize>,
    sink: Option<usize>,
    west_boundary: BoundaryDoc,
    east_boundary: BoundaryDoc,
    start: usize,
    active: usize,
    pending: Vec<PendingDoc>,
    below_start: Vec<GroupDoc>,
    missing_east: usize,
    missing_west: usize,
    move_log: Vec<(String, usize)>,
}

pub fn map_json_encode(map: &MarkedBipolarMap) -> Result<String, CodecError> {
    if map.vert_alive.iter().any(|a| !a)
        || map.edge_alive.iter().any(|a| !a)
        || map.face_alive.iter().any(|a| !a)
    {
        return Err(CodecError::Schema(
            "map has retired entries; only forward-built maps serialize".into(),
        ));
    }
    let doc = MapDoc {
        vertex_count: map.verts.len(),
        edges: map.edges.iter().map(|e| (e.tail, e.head)).collect(),
        rotations: map
            .verts
            .iter()
            .map(|v| RotationDoc {
                up: v.up.clone(),
                down: v.down.clone(),
            })
            .collect(),
        faces: map
            .faces
            .iter()
            .map(|f| FaceDoc {
                west: f.west.clone(),
                east: f.east.clone(),
            })
            .collect(),
        source: map.source().ok(),
        sink: map.sink().ok(),
        west_boundary: BoundaryDoc {
            verts: map.west_verts.clone(),
            edges: map.west_edges.clone(),
        },
        east_boundary: BoundaryDoc {
            verts: map.east_verts.clone(),
            edges: map.east_edges.clone(),
        },
        start: map.start,
        active: map.active(),
        pending: map
            .pending
            .iter()
            .map(|p| PendingDoc {
                face: p.face,
                index: p.index,
                upper: p.upper,
            })
            .collect(),
        below_start: map
            .below_start
            .iter()
            .map(|g| GroupDoc {
                face: g.face,
                missing: g.missing,
                bottom: g.bottom,
            })
            .collect(),
        missing_east: map.missing_east(),
        missing_west: map.missing_west(),
        move_log: map
            .move_log
            .iter()
            .map(|(m, v)| (moves_text_encode(&[*m]).trim().to_string(), *v))
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    Ok(text)
}

fn check_index(kind: &'static str, index: usize, len: usize) -> Result<(), CodecError> {
    if index >= len {
        Err(CodecError::DanglingIndex { kind, index })
    } else {
        Ok(())
    }
}

pub fn map_json_decode(text: &str) -> Result<MarkedBipolarMap, CodecError> {
    let doc: MapDoc = serde_json::from_str(text)?;
    let nv = doc.vertex_count;
    let ne = doc.edges.len();
    let nf = doc.faces.len();
    if doc.rotations.len() != nv {
        return Err(CodecError::Schema(format!(
            "vertex_count {nv} but {} rotation entries",
            doc.rotations.len()
        )));
    }
    for &(t, h) in &doc.edges {
        check_index("vertex", t, nv)?;
        check_index("vertex", h, nv)?;
    }
    for r in &doc.rotations {
        for &e in r.up.iter().chain(&r.down) {
            check_index("edge", e, ne)?;
        }
    }
    // Side faces are implied by membership: a face is east of its west-side
    // edges and west of its east-side edges.
    let mut edges: Vec<EdgeRec> = doc
        .edges
        .iter()
        .map(|&(tail, head)| EdgeRec {
            tail,
            head,
            west_face: None,
            east_face: None,
        })
        .collect();
    for (fi, f) in doc.faces.iter().enumerate() {
        for slot in f.west.iter().flatten() {
            check_index("edge", *slot, ne)?;
            if edges[*slot].east_face.replace(fi).is_some() {
                return Err(CodecError::Schema(format!(
                    "edge {slot} appears on the west side of two faces"
                )));
            }
        }
        for slot in f.east.iter().flatten() {
            check_index("edge", *slot, ne)?;
            if edges[*slot].west_face.replace(fi).is_some() {
                return Err(CodecError::Schema(format!(
                    "edge {slot} appears on the east side of two faces"
                )));
            }
        }
    }
    for b in [&doc.west_boundary, &doc.east_boundary] {
        for &v in &b.verts {
            check_index("vertex", v, nv)?;
        }
        for &e in &b.edges {
            check_index("edge", e, ne)?;
        }
    }
    for p in &doc.pending {
        check_index("face", p.face, nf)?;
        if let Some(u) = p.upper {
            check_index("vertex", u, nv)?;
        }
    }
    for g in &doc.below_start {
        check_index("face", g.face, nf)?;
        check_index("vertex", g.bottom, nv)?;
    }
    check_index("vertex", doc.start, nv)?;
    check_index("vertex", doc.active, nv)?;
    if doc.east_boundary.verts.last() != Some(&doc.active) {
        return Err(CodecError::Schema(
            "active marker disagrees with the east boundary".into(),
        ));
    }
    if doc.missing_east != doc.pending.len() {
        return Err(CodecError::Schema(
            "missing_east counter disagrees with the pending list".into(),
        ));
    }
    let west_missing: usize = doc.below_start.iter().map(|g| g.missing).sum();
    if doc.missing_west != west_missing {
        return Err(CodecError::Schema(
            "missing_west counter disagrees with the deficit groups".into(),
        ));
    }
    let mut move_log = Vec::with_capacity(doc.move_log.len());
    for (s, v) in &doc.move_log {
        check_index("vertex", *v, nv)?;
        let parsed =
            moves_text_decode(s).map_err(|e| CodecError::Schema(format!("move_log: {e}")))?;
        if parsed.len() != 1 {
            return Err(CodecError::Schema(format!(
                "move_log entry '{s}' is not a single move"
            )));
        }
        move_log.push((parsed[0], *v));
    }
    let map = MarkedBipolarMap::from_parts(
        doc.rotations
            .into_iter()
            .map(|r| VertexRec {
                up: r.up,
                down: r.down,
            })
            .collect(),
        std::mem::take(&mut edges),
        doc.faces
            .into_iter()
            .map(|f| FaceRec {
                west: f.west,
                east: f.east,
            })
            .collect(),
        doc.east_boundary.verts,
        doc.east_boundary.edges,
        doc.pending
            .into_iter()
            .map(|p| PendingSlot {
                face: p.face,
                index: p.index,
                upper: p.upper,
            })
            .collect(),
        doc.west_boundary.verts,
        doc.west_boundary.edges,
        doc.below_start
            .into_iter()
            .map(|g| WestGroup {
                face: g.face,
                missing: g.missing,
                bottom: g.bottom,
            })
            .collect(),
        doc.start,
        move_log,
    );
    let violations = validate_bipolar(&map);
    if !violations.is_empty() {
        return Err(CodecError::InvalidMap(format!("{violations:?}")));
    }
    Ok(map)
}
