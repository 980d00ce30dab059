//! Hexagonal prism lattice with diagonals.
//!
//! Each layer is a honeycomb of unit edge length, layers are stacked 1.5 apart
//! and every pair of vertices at Euclidean distance at most 2 is joined.
//!
//! All geometry runs on an integer affine frame: `X` counts sqrt(3)/2 along the
//! x axis, `Y` counts halves along y and `Z` is the layer. In that frame
//! `4 * dist^2 = 3 dX^2 + dY^2 + 9 dZ^2`, so adjacency and segment crossing are
//! decided exactly.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::LatticeError;

pub const LAYER_SPACING: f64 = 1.5;
/// Squared distance threshold in quarter units (`2^2 * 4`).
const MAX_QUAD: i64 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sublattice {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeVertex {
    pub layer: i32,
    pub u: i32,
    pub v: i32,
    pub sublattice: Sublattice,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub fn distance(&self, o: &Point3) -> f64 {
        ((self.x - o.x).powi(2) + (self.y - o.y).powi(2) + (self.z - o.z).powi(2)).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeClass {
    NonDiagonal,
    Diagonal,
    LayerNonDiagonal,
    LayerDiagonal,
}

impl EdgeClass {
    pub const ALL: [EdgeClass; 4] = [
        EdgeClass::NonDiagonal,
        EdgeClass::Diagonal,
        EdgeClass::LayerNonDiagonal,
        EdgeClass::LayerDiagonal,
    ];
}

impl fmt::Display for EdgeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EdgeClass::NonDiagonal => "non-diagonal",
            EdgeClass::Diagonal => "diagonal",
            EdgeClass::LayerNonDiagonal => "layer-non-diagonal",
            EdgeClass::LayerDiagonal => "layer-diagonal",
        };
        f.write_str(s)
    }
}

impl fmt::Display for LatticeVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {:?})", self.layer, self.u, self.v, self.sublattice)
    }
}

/// Offset to a neighbour: layer, u, v deltas and the target sublattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Offset {
    pub dl: i32,
    pub du: i32,
    pub dv: i32,
    pub to: Sublattice,
}

impl LatticeVertex {
    pub const ORIGIN: LatticeVertex = LatticeVertex::new(0, 0, 0, Sublattice::A);

    pub const fn new(layer: i32, u: i32, v: i32, sublattice: Sublattice) -> Self {
        LatticeVertex { layer, u, v, sublattice }
    }

    /// Integer affine coordinates `(X, Y, Z)`.
    pub fn grid(&self) -> [i64; 3] {
        let (u, v) = (self.u as i64, self.v as i64);
        let y = match self.sublattice {
            Sublattice::A => 3 * v,
            Sublattice::B => 3 * v + 2,
        };
        [2 * u + v, y, self.layer as i64]
    }

    /// Inverse of [`grid`](Self::grid); `None` when the point is not a vertex.
    pub fn from_grid(g: [i64; 3]) -> Option<Self> {
        let [x, y, z] = g;
        let (sub, v) = match y.rem_euclid(3) {
            0 => (Sublattice::A, y.div_euclid(3)),
            2 => (Sublattice::B, (y - 2).div_euclid(3)),
            _ => return None,
        };
        if (x - v).rem_euclid(2) != 0 {
            return None;
        }
        let u = (x - v).div_euclid(2);
        Some(LatticeVertex::new(z as i32, u as i32, v as i32, sub))
    }

    pub fn cartesian(&self) -> Point3 {
        let [x, y, z] = self.grid();
        Point3 {
            x: x as f64 * 3f64.sqrt() / 2.0,
            y: y as f64 / 2.0,
            z: z as f64 * LAYER_SPACING,
        }
    }

    /// `4 * dist^2` to `other`, exact.
    pub fn quad_distance(&self, other: &LatticeVertex) -> i64 {
        let a = self.grid();
        let b = other.grid();
        let (dx, dy, dz) = (a[0] - b[0], a[1] - b[1], a[2] - b[2]);
        3 * dx * dx + dy * dy + 9 * dz * dz
    }

    pub fn is_adjacent(&self, other: &LatticeVertex) -> bool {
        let q = self.quad_distance(other);
        q > 0 && q <= MAX_QUAD
    }

    pub fn offset(&self, o: &Offset) -> LatticeVertex {
        LatticeVertex::new(self.layer + o.dl, self.u + o.du, self.v + o.dv, o.to)
    }

    pub fn neighbors(&self) -> impl Iterator<Item = LatticeVertex> + '_ {
        offsets(self.sublattice).iter().map(move |o| self.offset(o))
    }
}

/// The 20 neighbour offsets of a vertex on sublattice `s`, found by scanning
/// a box with the distance test. Order: by distance, then layer, u, v.
pub fn offsets(s: Sublattice) -> &'static [Offset] {
    static TABLE: OnceLock<[Vec<Offset>; 2]> = OnceLock::new();
    let t = TABLE.get_or_init(|| [build_offsets(Sublattice::A), build_offsets(Sublattice::B)]);
    match s {
        Sublattice::A => &t[0],
        Sublattice::B => &t[1],
    }
}

fn build_offsets(s: Sublattice) -> Vec<Offset> {
    let origin = LatticeVertex::new(0, 0, 0, s);
    let mut found = Vec::new();
    for dl in -1..=1 {
        for du in -3..=3 {
            for dv in -3..=3 {
                for to in [Sublattice::A, Sublattice::B] {
                    let o = Offset { dl, du, dv, to };
                    let w = origin.offset(&o);
                    if origin.is_adjacent(&w) {
                        found.push((origin.quad_distance(&w), o));
                    }
                }
            }
        }
    }
    found.sort_by_key(|(q, o)| (*q, o.dl, o.du, o.dv, o.to));
    found.into_iter().map(|(_, o)| o).collect()
}

pub fn classify_edge(a: &LatticeVertex, b: &LatticeVertex) -> Result<EdgeClass, LatticeError> {
    if !a.is_adjacent(b) {
        return Err(LatticeError::NotAdjacent(*a, *b));
    }
    let q = a.quad_distance(b);
    Ok(if a.layer == b.layer {
        if q == 4 {
            EdgeClass::NonDiagonal
        } else {
            EdgeClass::Diagonal
        }
    } else if q == 9 {
        EdgeClass::LayerNonDiagonal
    } else {
        EdgeClass::LayerDiagonal
    })
}

/// Common neighbours of both endpoints, sorted.
pub fn edge_neighborhood(a: &LatticeVertex, b: &LatticeVertex) -> Result<Vec<LatticeVertex>, LatticeError> {
    if !a.is_adjacent(b) {
        return Err(LatticeError::NotAdjacent(*a, *b));
    }
    let set: BTreeSet<LatticeVertex> = a.neighbors().filter(|w| w.is_adjacent(b)).collect();
    Ok(set.into_iter().collect())
}

type V3 = [i128; 3];

fn sub(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn cross(a: V3, b: V3) -> V3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: V3, b: V3) -> i128 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn wide(v: &LatticeVertex) -> V3 {
    let g = v.grid();
    [g[0] as i128, g[1] as i128, g[2] as i128]
}

/// Whether two straight segments cross. Touching at a shared endpoint is not a
/// crossing; any other common point, including collinear overlap, is. The
/// test is affine invariant so it runs on the integer frame without rounding.
pub fn segments_cross(e1: (LatticeVertex, LatticeVertex), e2: (LatticeVertex, LatticeVertex)) -> bool {
    let same = (e1.0 == e2.0 && e1.1 == e2.1) || (e1.0 == e2.1 && e1.1 == e2.0);
    if same {
        return false;
    }
    let (p1, p2, q1, q2) = (wide(&e1.0), wide(&e1.1), wide(&e2.0), wide(&e2.1));
    let d1 = sub(p2, p1);
    let d2 = sub(q2, q1);
    let r = sub(q1, p1);
    if dot(cross(d1, r), sub(q2, p1)) != 0 {
        return false; // not coplanar
    }
    let shared = e1.0 == e2.0 || e1.0 == e2.1 || e1.1 == e2.0 || e1.1 == e2.1;
    let n = cross(d1, d2);
    if n == [0, 0, 0] {
        if cross(d1, r) != [0, 0, 0] {
            return false; // parallel, distinct lines
        }
        // collinear: overlap of parameter ranges along d1
        let len = dot(d1, d1);
        let (t1, t2) = (dot(r, d1), dot(sub(q2, p1), d1));
        let (lo, hi) = (t1.min(t2).max(0), t1.max(t2).min(len));
        return if shared { hi > lo } else { hi >= lo };
    }
    let nn = dot(n, n);
    let s = dot(cross(r, d2), n);
    let t = dot(cross(r, d1), n);
    if !(0..=nn).contains(&s) || !(0..=nn).contains(&t) {
        return false;
    }
    // the unique common point; with a shared endpoint it is that endpoint
    !shared
}
