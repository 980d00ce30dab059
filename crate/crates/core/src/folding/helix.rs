//! Stacked-hexagon helix.
//!
//! H's fill a hexagon ring six at a time, one layer per ring, all rings
//! vertically aligned. The step from slot 6 of a ring to slot 1 of the ring
//! above is a slanted inter-layer edge. P-runs leave the core sideways inside
//! their own layer, each within an angular sector reserved for the ring
//! boundary they interrupt.
//!
//! A partly filled top ring loses contacts against a full stack. When that
//! loss is larger than what a few spare H's gain sitting just outside a lower
//! ring ("bumps", entered from slot i and left towards slot i+1), the spare
//! H's go there instead.

use std::collections::{BTreeSet, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::route::{unit, Builder, Guide};
use crate::conformation::Conformation;
use crate::error::FoldError;
use crate::lattice::{LatticeVertex, Point3, Sublattice};
use crate::sequence::HpSequence;

const ROUTE_BUDGET: u64 = 50_000;
const MAX_BUMPED_TRIES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RingSite {
    /// Ring slot 1..=6, counterclockwise.
    Slot(u8),
    /// Outside slot i, between slots i and i+1 in traversal order.
    Bump(u8),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HelixSite {
    pub layer: i32,
    pub site: RingSite,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HelixPlan {
    /// Target of each H, in sequence order.
    pub sites: Vec<HelixSite>,
    pub full_rings: usize,
    /// Slots used in the top ring when it is not full.
    pub top_slots: usize,
    pub bumps: Vec<(i32, u8)>,
    /// Adjacent H-H pairs of the core, bound or not.
    pub adjacent_pairs: usize,
}

/// Ring slots at layer 0, counterclockwise from -30 degrees around the
/// hexagon centre.
const RING: [LatticeVertex; 6] = [
    LatticeVertex::new(0, 1, 0, Sublattice::A),
    LatticeVertex::new(0, 1, 0, Sublattice::B),
    LatticeVertex::new(0, 0, 1, Sublattice::A),
    LatticeVertex::new(0, 0, 0, Sublattice::B),
    LatticeVertex::new(0, 0, 0, Sublattice::A),
    LatticeVertex::new(0, 1, -1, Sublattice::B),
];

fn centre() -> (f64, f64) {
    (3f64.sqrt() / 2.0, 0.5)
}

/// Angle of slot `i` (1-based) in degrees.
fn slot_angle(i: u8) -> f64 {
    -30.0 + 60.0 * (i as f64 - 1.0)
}

fn at_layer(v: LatticeVertex, layer: i32) -> LatticeVertex {
    LatticeVertex { layer, ..v }
}

fn slot(i: u8, layer: i32) -> LatticeVertex {
    at_layer(RING[i as usize - 1], layer)
}

/// The nearest neighbour of slot `i` off the ring.
fn bump(i: u8, layer: i32) -> LatticeVertex {
    let s = slot(i, 0);
    let o = s
        .neighbors()
        .find(|w| w.layer == 0 && s.quad_distance(w) == 4 && !RING.contains(w))
        .expect("ring vertex has an outward neighbour");
    at_layer(o, layer)
}

impl HelixSite {
    pub fn vertex(&self) -> LatticeVertex {
        match self.site {
            RingSite::Slot(i) => slot(i, self.layer),
            RingSite::Bump(i) => bump(i, self.layer),
        }
    }
}

/// Angle of `v` around the ring axis, in degrees within `[lo, lo + 360)`.
fn angle_from(v: &LatticeVertex, lo: f64) -> f64 {
    let p = v.cartesian();
    let (cx, cy) = centre();
    let a = (p.y - cy).atan2(p.x - cx).to_degrees();
    lo + (a - lo).rem_euclid(360.0)
}

fn sites_for(n: usize, bumps: &BTreeSet<(i32, u8)>) -> Vec<HelixSite> {
    let mut out = Vec::with_capacity(n);
    let mut layer = 0;
    while out.len() < n {
        for i in 1..=6u8 {
            if out.len() == n {
                break;
            }
            out.push(HelixSite { layer, site: RingSite::Slot(i) });
            if out.len() < n && bumps.contains(&(layer, i)) {
                out.push(HelixSite { layer, site: RingSite::Bump(i) });
            }
        }
        layer += 1;
    }
    out
}

fn adjacent_pairs(vs: &[LatticeVertex]) -> usize {
    let set: HashSet<LatticeVertex> = vs.iter().copied().collect();
    vs.iter().map(|v| v.neighbors().filter(|w| set.contains(w)).count()).sum::<usize>() / 2
}

fn make_plan(n: usize, bumps: BTreeSet<(i32, u8)>, adjacent_pairs: usize) -> HelixPlan {
    let ring_h = n - bumps.len();
    HelixPlan {
        sites: sites_for(n, &bumps),
        full_rings: ring_h / 6,
        top_slots: ring_h % 6,
        bumps: bumps.into_iter().collect(),
        adjacent_pairs,
    }
}

/// Candidate H cores for `n` H's, most adjacent pairs first and the plain
/// stack of rings last. Bumped cores are kept only when they beat it.
fn candidate_cores(n: usize) -> Vec<HelixPlan> {
    // rings holding `m` H's, as a vertex set with its pair count
    let mut rings: HashMap<usize, (HashSet<LatticeVertex>, usize)> = HashMap::new();
    let mut pairs = |bumps: &BTreeSet<(i32, u8)>| {
        let (set, a) = rings.entry(n - bumps.len()).or_insert_with_key(|&m| {
            let vs: Vec<LatticeVertex> = sites_for(m, &BTreeSet::new()).iter().map(|s| s.vertex()).collect();
            let a = adjacent_pairs(&vs);
            (vs.into_iter().collect(), a)
        });
        let bs: Vec<LatticeVertex> = bumps.iter().map(|&(z, i)| bump(i, z)).collect();
        let to_rings: usize = bs.iter().map(|v| v.neighbors().filter(|w| set.contains(w)).count()).sum();
        *a + to_rings + adjacent_pairs(&bs)
    };
    let plain = pairs(&BTreeSet::new());
    let mut seen = HashSet::new();
    let mut found: Vec<(usize, BTreeSet<(i32, u8)>)> = Vec::new();
    let mut consider = |bumps: BTreeSet<(i32, u8)>| {
        // bumps sit on full rings only
        let full = (n - bumps.len()) / 6;
        if bumps.iter().any(|&(z, _)| z < 0 || z as usize >= full) || !seen.insert(bumps.clone()) {
            return;
        }
        let a = pairs(&bumps);
        if a > plain {
            found.push((a, bumps));
        }
    };
    // runs of consecutive bumps on up to two layers
    let max_layer = (n / 6).min(4) as i32;
    let run = |z: i32, first: u8, c: usize| (first..first + c as u8).map(move |i| (z, i));
    for b in 1..=10usize.min(n) {
        for z1 in 0..max_layer {
            for c1 in 1..=5usize.min(b) {
                let c2 = b - c1;
                if c2 > 5 {
                    continue;
                }
                for f1 in 1..=(6 - c1) as u8 {
                    if c2 == 0 {
                        consider(run(z1, f1, c1).collect());
                        continue;
                    }
                    for z2 in (0..max_layer).filter(|&z| z != z1) {
                        for f2 in 1..=(6 - c2) as u8 {
                            consider(run(z1, f1, c1).chain(run(z2, f2, c2)).collect());
                        }
                    }
                }
            }
        }
    }
    // stable sort, so ties keep the order they were generated in
    found.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.len().cmp(&b.1.len())));
    found.truncate(MAX_BUMPED_TRIES);
    let mut out: Vec<HelixPlan> = found.into_iter().map(|(a, b)| make_plan(n, b, a)).collect();
    out.push(make_plan(n, BTreeSet::new(), plain));
    out
}

/// The core [`helix_arrangement`] settles on: the first candidate whose
/// P-runs can all be routed.
pub fn plan_helix(seq: &HpSequence) -> Result<HelixPlan, FoldError> {
    fold(seq).map(|(_, p)| p)
}

/// Sector `[lo, hi)` in degrees and layer reserved for the P-run between two
/// consecutive core H's.
fn sector(from: &HelixSite, to: &HelixSite) -> (i32, f64, f64) {
    use RingSite::*;
    match (from.site, to.site) {
        (Slot(i), Bump(_)) => (from.layer, slot_angle(i) - 1.0, slot_angle(i) + 29.0),
        (Bump(i), Slot(_)) => (from.layer, slot_angle(i) + 29.0, slot_angle(i + 1) - 1.0),
        (Slot(6), Slot(1)) => (to.layer, slot_angle(6) - 1.0, slot_angle(7) - 1.0),
        (Slot(i), Slot(_)) => (from.layer, slot_angle(i) - 1.0, slot_angle(i + 1) - 1.0),
        (Bump(_), Bump(_)) => unreachable!("bumps are never consecutive"),
    }
}

pub fn helix_arrangement(seq: &HpSequence) -> Result<Conformation, FoldError> {
    fold(seq).map(|(c, _)| c)
}

fn fold(seq: &HpSequence) -> Result<(Conformation, HelixPlan), FoldError> {
    if seq.n() == 0 {
        return Err(FoldError::TooFewH { needed: 1, found: 0 });
    }
    let mut first_err = None;
    for plan in candidate_cores(seq.n()) {
        match fold_on(seq, &plan) {
            Ok(c) => return Ok((c, plan)),
            Err(e @ FoldError::InfeasibleRouting { .. }) => {
                first_err.get_or_insert(e);
            }
            Err(e) => return Err(e),
        }
    }
    Err(first_err.expect("the plain core is always a candidate"))
}

fn fold_on(seq: &HpSequence, plan: &HelixPlan) -> Result<Conformation, FoldError> {
    let hs = seq.h_positions();
    let core: Vec<LatticeVertex> = plan.sites.iter().map(|s| s.vertex()).collect();
    let core_set: HashSet<LatticeVertex> = core.iter().copied().collect();
    let mut b = Builder::new(seq);
    for (t, &i) in hs.iter().enumerate() {
        b.place(i, core[t]);
    }
    // leading P's hang below the first H, trailing ones rise above the last
    let first = core[0];
    for i in 0..hs[0] {
        b.place(i, at_layer(first, first.layer - (hs[0] - i) as i32));
    }
    let last = core[core.len() - 1];
    let last_i = hs[hs.len() - 1];
    for i in last_i + 1..seq.len() {
        b.place(i, at_layer(last, last.layer + (i - last_i) as i32));
    }

    let index_of: HashMap<usize, usize> = hs.iter().enumerate().map(|(t, &i)| (i, t)).collect();
    // short runs have the fewest options, so they go first
    let mut runs: Vec<_> = seq.p_runs().iter().filter(|r| r.start > 0 && r.end() < seq.len()).copied().collect();
    runs.sort_by_key(|r| (r.len, r.start));
    for run in runs {
        let (x, y) = (run.start - 1, run.end());
        let (tx, ty) = (index_of[&x], index_of[&y]);
        let (layer, lo, hi) = sector(&plan.sites[tx], &plan.sites[ty]);
        let (px, py) = (core[tx].cartesian(), core[ty].cartesian());
        let mid = (lo + hi) / 2.0;
        let dir = unit([mid.to_radians().cos(), mid.to_radians().sin(), 0.0]);
        let guide = Guide {
            out: Point3 { z: layer as f64 * 1.5, ..px },
            back: Point3 { z: layer as f64 * 1.5, ..py },
            dir,
            step: 0.9,
        };
        let in_sector = |w: &LatticeVertex| {
            w.layer == layer && !core_set.contains(w) && {
                let a = angle_from(w, lo);
                a < hi
            }
        };
        if b.route(x, y, &in_sector, &guide, ROUTE_BUDGET).is_ok() {
            continue;
        }
        let in_layer = |w: &LatticeVertex| w.layer == layer && !core_set.contains(w);
        if b.route(x, y, &in_layer, &guide, ROUTE_BUDGET).is_ok() {
            continue;
        }
        // single P's wedged between bumps may need the layer above or below
        let nearby = |w: &LatticeVertex| (w.layer - layer).abs() <= 1 && !core_set.contains(w);
        if b.route(x, y, &nearby, &guide, ROUTE_BUDGET).is_ok() {
            continue;
        }
        return Err(FoldError::InfeasibleRouting { start: run.start, len: run.len });
    }
    b.finish()
}
