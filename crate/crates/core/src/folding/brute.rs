//! Exhaustive search for short strings.
//!
//! Residue 0 sits on the origin (an A vertex). Residue 1 only tries one
//! neighbour per orbit of the origin's stabiliser: three rotations about the
//! vertical axis, the mirror x -> -x and the layer flip, twelve maps in all.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::conformation::{build_conformation, Conformation};
use crate::error::FoldError;
use crate::lattice::{segments_cross, LatticeVertex};
use crate::sequence::HpSequence;

#[derive(Debug, Clone, PartialEq)]
pub struct BruteResult {
    pub conformation: Conformation,
    pub max_contacts: usize,
    pub nodes: u64,
    /// False when the budget ran out and `max_contacts` is only a lower bound.
    pub exhaustive: bool,
}

/// One of the twelve lattice symmetries fixing the origin, as a map on
/// Cartesian points.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Symmetry {
    pub rotation: u8,
    pub mirror: bool,
    pub flip: bool,
}

impl Symmetry {
    pub fn all() -> Vec<Symmetry> {
        let mut out = Vec::with_capacity(12);
        for rotation in 0..3 {
            for mirror in [false, true] {
                for flip in [false, true] {
                    out.push(Symmetry { rotation, mirror, flip });
                }
            }
        }
        out
    }

    /// Image of `v`, or `None` if it is not a lattice vertex.
    pub fn apply(&self, v: &LatticeVertex) -> Option<LatticeVertex> {
        let p = v.cartesian();
        let (mut x, mut y, mut z) = (p.x, p.y, p.z);
        if self.mirror {
            x = -x;
        }
        let t = (120.0 * self.rotation as f64).to_radians();
        (x, y) = (x * t.cos() - y * t.sin(), x * t.sin() + y * t.cos());
        if self.flip {
            z = -z;
        }
        let gx = x / (3f64.sqrt() / 2.0);
        let gy = 2.0 * y;
        let gz = z / crate::lattice::LAYER_SPACING;
        let r = [gx.round(), gy.round(), gz.round()];
        if (gx - r[0]).abs() > 1e-6 || (gy - r[1]).abs() > 1e-6 || (gz - r[2]).abs() > 1e-6 {
            return None;
        }
        LatticeVertex::from_grid([r[0] as i64, r[1] as i64, r[2] as i64])
    }
}

/// Indices into the origin's neighbour list, one per symmetry orbit.
pub fn second_residue_representatives() -> &'static [usize] {
    static REPS: OnceLock<Vec<usize>> = OnceLock::new();
    REPS.get_or_init(|| {
        let origin = LatticeVertex::ORIGIN;
        let ns: Vec<LatticeVertex> = origin.neighbors().collect();
        let syms = Symmetry::all();
        let mut reps = Vec::new();
        let mut seen = vec![false; ns.len()];
        for i in 0..ns.len() {
            if seen[i] {
                continue;
            }
            reps.push(i);
            for g in &syms {
                let img = g.apply(&ns[i]).expect("symmetry maps vertices to vertices");
                let j = ns.iter().position(|w| *w == img).expect("symmetry preserves the neighbourhood");
                seen[j] = true;
            }
        }
        reps
    })
}

struct Walker<'a> {
    place: Vec<LatticeVertex>,
    occ: HashMap<LatticeVertex, usize>,
    nodes: u64,
    budget: u64,
    len: usize,
    visit: &'a mut dyn FnMut(&[LatticeVertex]) -> Option<()>,
}

impl Walker<'_> {
    fn free_and_clean(&self, w: &LatticeVertex) -> bool {
        if self.occ.contains_key(w) {
            return false;
        }
        let prev = self.place[self.place.len() - 1];
        self.place.windows(2).all(|e| !segments_cross((prev, *w), (e[0], e[1])))
    }

    /// Depth-first over extensions; `None` aborts (budget or visitor).
    fn grow(&mut self) -> Option<()> {
        if self.place.len() == self.len {
            return (self.visit)(&self.place);
        }
        let prev = self.place[self.place.len() - 1];
        let cands: Vec<LatticeVertex> = if self.place.len() == 1 {
            let ns: Vec<LatticeVertex> = prev.neighbors().collect();
            second_residue_representatives().iter().map(|&i| ns[i]).collect()
        } else {
            prev.neighbors().collect()
        };
        for w in cands {
            if !self.free_and_clean(&w) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            self.occ.insert(w, self.place.len());
            self.place.push(w);
            let r = self.grow();
            self.place.pop();
            self.occ.remove(&w);
            r?;
        }
        Some(())
    }
}

/// Calls `f` on every reduced self-avoiding, non-crossing walk of `len`
/// vertices. Returns the number of nodes expanded.
pub fn for_each_walk(len: usize, budget: u64, mut f: impl FnMut(&[LatticeVertex])) -> Result<u64, FoldError> {
    let mut visit = |p: &[LatticeVertex]| {
        f(p);
        Some(())
    };
    walk(len, budget, &mut visit)
}

fn walk(
    len: usize,
    budget: u64,
    visit: &mut dyn FnMut(&[LatticeVertex]) -> Option<()>,
) -> Result<u64, FoldError> {
    if len == 0 {
        return Ok(0);
    }
    let mut w = Walker {
        place: vec![LatticeVertex::ORIGIN],
        occ: HashMap::from([(LatticeVertex::ORIGIN, 0)]),
        nodes: 1,
        budget,
        len,
        visit,
    };
    match w.grow() {
        Some(()) => Ok(w.nodes),
        None => Err(FoldError::BudgetExceeded { budget, best: None }),
    }
}

/// Highest contact count over all conformations of `seq`, with a witness.
/// Ties go to the lexicographically smallest placement.
pub fn brute_force_max(seq: &HpSequence, budget: u64) -> Result<BruteResult, FoldError> {
    let h: Vec<bool> = seq.residues().iter().map(|r| r.is_h()).collect();
    let len = h.len();
    // most contacts residue t can still add when placed: it has 20
    // neighbours, one taken by its predecessor
    let mut h_before = 0usize;
    let mut gain = vec![0usize; len];
    for t in 0..len {
        if h[t] {
            gain[t] = h_before.min(19);
        }
        if t >= 1 && h[t - 1] {
            h_before += 1;
        }
    }
    let mut rest = vec![0usize; len + 1];
    for t in (0..len).rev() {
        rest[t] = rest[t + 1] + gain[t];
    }

    let mut best: Option<(usize, Vec<LatticeVertex>)> = None;
    let mut s = Search { h: &h, rest: &rest, best: &mut best, nodes: 0, budget };
    let done = s.run(len);
    let nodes = s.nodes;
    let finish = |(count, place): (usize, Vec<LatticeVertex>), exhaustive: bool| -> Result<BruteResult, FoldError> {
        let c = build_conformation(seq.clone(), place)?;
        debug_assert_eq!(c.census().contacts, count);
        Ok(BruteResult { conformation: c, max_contacts: count, nodes, exhaustive })
    };
    match (done, best) {
        (true, Some(b)) => finish(b, true),
        (false, b) => Err(FoldError::BudgetExceeded { budget, best: b.map(|b| finish(b, false)).transpose()?.map(Box::new) }),
        (true, None) => unreachable!("a straight walk always exists"),
    }
}

struct Search<'a> {
    h: &'a [bool],
    rest: &'a [usize],
    best: &'a mut Option<(usize, Vec<LatticeVertex>)>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn run(&mut self, len: usize) -> bool {
        let mut place = vec![LatticeVertex::ORIGIN];
        let mut occ = HashMap::from([(LatticeVertex::ORIGIN, 0usize)]);
        self.nodes = 1;
        if len == 1 {
            *self.best = Some((0, place));
            return true;
        }
        self.dfs(&mut place, &mut occ, 0, len)
    }

    fn dfs(&mut self, place: &mut Vec<LatticeVertex>, occ: &mut HashMap<LatticeVertex, usize>, score: usize, len: usize) -> bool {
        let t = place.len();
        if t == len {
            let better = match self.best.as_ref() {
                None => true,
                Some((b, p)) => score > *b || (score == *b && place.as_slice() < p.as_slice()),
            };
            if better {
                *self.best = Some((score, place.clone()));
            }
            return true;
        }
        if let Some((b, _)) = self.best.as_ref() {
            if score + self.rest[t] < *b {
                return true;
            }
        }
        let prev = place[t - 1];
        let ns: Vec<LatticeVertex> = prev.neighbors().collect();
        let cands: Vec<LatticeVertex> =
            if t == 1 { second_residue_representatives().iter().map(|&i| ns[i]).collect() } else { ns };
        for w in cands {
            if occ.contains_key(&w) || place.windows(2).any(|e| segments_cross((prev, w), (e[0], e[1]))) {
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return false;
            }
            let add = if self.h[t] {
                w.neighbors().filter(|x| matches!(occ.get(x), Some(&j) if j + 1 < t && self.h[j])).count()
            } else {
                0
            };
            occ.insert(w, t);
            place.push(w);
            let ok = self.dfs(place, occ, score + add, len);
            place.pop();
            occ.remove(&w);
            if !ok {
                return false;
            }
        }
        true
    }
}

/// For one walk, the largest number of alternating edges inside the
/// neighbourhood of a loss edge, for every H/P labelling of its residues.
/// Bit `i` of the index set means residue `i` is H. Agrees with running the
/// full check on each labelled conformation, at a fraction of the cost.
pub fn lemma2_profile(walk: &[LatticeVertex]) -> Vec<usize> {
    let len = walk.len();
    assert!(len <= 20, "profile is exponential in the walk length");
    let occ: HashMap<LatticeVertex, usize> = walk.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    // for each (residue i, neighbour w): occupant of w and the set of binding
    // edges lying inside N(f(i), w)
    struct Slot {
        i: usize,
        occupant: Option<usize>,
        inside: u32,
    }
    let mut slots = Vec::new();
    for (i, x) in walk.iter().enumerate() {
        for w in x.neighbors() {
            let occupant = occ.get(&w).copied();
            if matches!(occupant, Some(j) if j + 1 == i || i + 1 == j) {
                continue;
            }
            let mut inside = 0u32;
            for e in 0..len.saturating_sub(1) {
                let (a, b) = (walk[e], walk[e + 1]);
                let near = |p: &LatticeVertex| p.is_adjacent(x) && p.is_adjacent(&w);
                if near(&a) && near(&b) {
                    inside |= 1 << e;
                }
            }
            slots.push(Slot { i, occupant, inside });
        }
    }
    (0u32..1 << len)
        .map(|mask| {
            let is_h = |j: usize| mask >> j & 1 == 1;
            let mut alt = 0u32;
            for e in 0..len.saturating_sub(1) {
                if is_h(e) != is_h(e + 1) {
                    alt |= 1 << e;
                }
            }
            slots
                .iter()
                .filter(|s| is_h(s.i) && !matches!(s.occupant, Some(j) if is_h(j)))
                .map(|s| (s.inside & alt).count_ones() as usize)
                .max()
                .unwrap_or(0)
        })
        .collect()
}
