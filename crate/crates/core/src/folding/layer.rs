//! Two-layer chain packing.
//!
//! The first `m1 = floor(n/2)` H's go into layer 1 as `r` serpentine chains
//! of `s` H's each; the remaining H's go into layer 0 in the reverse cell
//! order so that H number `m1 + 1` lies straight below H number `m1`. An odd
//! extra H goes beside the first cell of layer 0. P-runs between upper H's
//! rise into layers 2 and up, those between lower H's drop into layers -1
//! and down, and the run across the split leaves the footprint sideways.

use std::collections::{HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::route::{Builder, Guide};
use crate::conformation::Conformation;
use crate::error::{DomainError, FoldError};
use crate::lattice::{LatticeVertex, Sublattice};
use crate::sequence::HpSequence;

const ROUTE_BUDGET: u64 = 200_000;
const UPPER: i32 = 1;
const LOWER: i32 = 0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    Left,
    Right,
    Up,
    Down,
    InsideLeft,
    InsideRight,
    InsideUp,
    InsideDown,
    Middle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerPlan {
    pub f_split: usize,
    pub r: usize,
    pub s: usize,
    /// Cell (row, column) of each upper-layer H, in sequence order.
    pub upper_cells: Vec<(usize, usize)>,
    /// Region of every H, keyed by residue index.
    pub region_of: Vec<(usize, Region)>,
}

/// Chain count and length for `m1` H's: the divisor pair closest to square,
/// or a near-square grid with one short chain when that pair is `1 x m1` for
/// `m1 > 3`.
pub fn chain_factorization(m1: usize) -> Result<(usize, usize), DomainError> {
    if m1 < 1 {
        return Err(DomainError::Invalid("m1 must be positive".into()));
    }
    let mut r = (1..=m1).take_while(|i| i * i <= m1).filter(|i| m1.is_multiple_of(*i)).last().unwrap_or(1);
    let mut s = m1 / r;
    if r == 1 && m1 > 3 {
        r = (m1 as f64).sqrt().floor() as usize;
        while r * r > m1 {
            r -= 1;
        }
        while (r + 1) * (r + 1) <= m1 {
            r += 1;
        }
        s = m1.div_ceil(r);
    }
    Ok((r, s))
}

/// Vertex at row `j`, column `c` of layer `layer`. Columns step along x by
/// sqrt(3)/2 through the zigzag of one honeycomb row; rows stack along y.
pub fn cell(layer: i32, j: i64, c: i64) -> LatticeVertex {
    let v = j;
    if (c - v).rem_euclid(2) == 0 {
        LatticeVertex::new(layer, ((c - v) / 2) as i32, v as i32, Sublattice::A)
    } else {
        LatticeVertex::new(layer, ((c - v + 1) / 2) as i32, (v - 1) as i32, Sublattice::B)
    }
}

fn serpentine(m1: usize, r: usize, s: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(m1);
    for j in 0..r {
        let len = s.min(m1 - out.len());
        if j % 2 == 0 {
            out.extend((0..len).map(|c| (j, c)));
        } else {
            out.extend((0..len).map(|c| (j, s - 1 - c)));
        }
        if out.len() == m1 {
            break;
        }
    }
    out
}

fn region(r: usize, s: usize, (j, c): (usize, usize)) -> Region {
    if j == 0 {
        Region::Down
    } else if j + 1 == r {
        Region::Up
    } else if c == 0 {
        Region::Left
    } else if c + 1 == s {
        Region::Right
    } else if j == 1 {
        Region::InsideDown
    } else if j + 2 == r {
        Region::InsideUp
    } else if c == 1 {
        Region::InsideLeft
    } else if c + 2 == s {
        Region::InsideRight
    } else {
        Region::Middle
    }
}

pub fn plan_layers(seq: &HpSequence) -> Result<LayerPlan, FoldError> {
    let n = seq.n();
    if n < 2 {
        return Err(FoldError::TooFewH { needed: 2, found: n });
    }
    let m1 = n / 2;
    let (r, s) = chain_factorization(m1).expect("m1 >= 1");
    let upper_cells = serpentine(m1, r, s);
    let hs = seq.h_positions();
    let mut region_of = Vec::with_capacity(n);
    for (t, &i) in hs.iter().enumerate() {
        let reg = if t < m1 {
            region(r, s, upper_cells[t])
        } else if t < 2 * m1 {
            region(r, s, upper_cells[2 * m1 - 1 - t])
        } else {
            Region::Down
        };
        region_of.push((i, reg));
    }
    Ok(LayerPlan { f_split: m1, r, s, upper_cells, region_of })
}

/// Orders in which the P-runs are routed. Routing is greedy per run, so
/// when one order paints itself into a corner another is tried.
#[derive(Debug, Clone, Copy)]
enum RunOrder {
    ShortFirst,
    Forward,
    Backward,
    LongFirst,
    Shuffled(u64),
}

const SHUFFLED_TRIES: u64 = 24;

pub fn layer_arrangement(seq: &HpSequence) -> Result<Conformation, FoldError> {
    let plan = plan_layers(seq)?;
    let mut first_err = None;
    let fixed = [RunOrder::ShortFirst, RunOrder::Forward, RunOrder::Backward, RunOrder::LongFirst];
    let orders = || fixed.into_iter().chain((0..SHUFFLED_TRIES).map(RunOrder::Shuffled));
    // an interior H of the packed core only touches the four vertices above
    // it, so dense P's can run out of room; then the columns are spread to
    // every other cell, trading contacts for space
    for (stride, order) in [1, 2].into_iter().flat_map(|st| orders().map(move |o| (st, o))) {
        match arrange(seq, &plan, stride, order) {
            Err(e @ FoldError::InfeasibleRouting { .. }) => {
                first_err.get_or_insert(e);
            }
            done => return done,
        }
    }
    Err(first_err.expect("at least one order tried"))
}

fn arrange(seq: &HpSequence, plan: &LayerPlan, stride: i64, order: RunOrder) -> Result<Conformation, FoldError> {
    let m1 = plan.f_split;
    let hs = seq.h_positions();
    let n = hs.len();
    let at = |layer: i32, (j, c): (usize, usize)| cell(layer, j as i64, stride * c as i64);
    let mut core = Vec::with_capacity(n);
    core.extend(plan.upper_cells.iter().map(|&jc| at(UPPER, jc)));
    core.extend(plan.upper_cells.iter().rev().map(|&jc| at(LOWER, jc)));
    if n % 2 == 1 {
        core.push(cell(LOWER, 0, -stride));
    }
    let footprint: HashSet<(i32, i32, Sublattice)> = core.iter().map(|v| (v.u, v.v, v.sublattice)).collect();

    let mut b = Builder::new(seq);
    for (t, &i) in hs.iter().enumerate() {
        b.place(i, core[t]);
    }
    // leading P's extend row 0 of the upper layer leftwards, trailing P's do
    // the same in the lower layer past the odd extra H
    for i in 0..hs[0] {
        b.place(i, cell(UPPER, 0, -((hs[0] - i) as i64)));
    }
    let last_i = hs[n - 1];
    let skip = if n % 2 == 1 { stride } else { 0 };
    for i in last_i + 1..seq.len() {
        b.place(i, cell(LOWER, 0, -((i - last_i) as i64 + skip)));
    }

    let index_of: HashMap<usize, usize> = hs.iter().enumerate().map(|(t, &i)| (i, t)).collect();
    let up = [0.0, 0.0, 1.0];
    let down = [0.0, 0.0, -1.0];
    let mut runs: Vec<_> = seq.p_runs().iter().filter(|r| r.start > 0 && r.end() < seq.len()).copied().collect();
    // the bridge first: it needs the free ends of the footprint rows; then
    // short runs, which have the fewest options
    let bridge = |r: &crate::sequence::Run| index_of[&(r.start - 1)] + 1 != m1;
    match order {
        RunOrder::ShortFirst => runs.sort_by_key(|r| (bridge(r), r.len, r.start)),
        RunOrder::Forward => runs.sort_by_key(|r| (bridge(r), r.start)),
        RunOrder::Backward => runs.sort_by_key(|r| (bridge(r), std::cmp::Reverse(r.start))),
        RunOrder::LongFirst => runs.sort_by_key(|r| (bridge(r), std::cmp::Reverse(r.len), r.start)),
        RunOrder::Shuffled(seed) => {
            runs.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
            runs.sort_by_key(|r| bridge(r));
        }
    }
    for run in runs {
        let (x, y) = (run.start - 1, run.end());
        let tx = index_of[&x];
        let (px, py) = (core[tx].cartesian(), core[tx + 1].cartesian());
        let outside = |w: &LatticeVertex| !footprint.contains(&(w.u, w.v, w.sublattice));
        let anywhere = |w: &LatticeVertex| w.layer != UPPER && w.layer != LOWER || outside(w);
        // a chain turn may join H's 2 apart, which no single vertex of the
        // side layer reaches; such runs may step out beside the footprint
        let ok = if tx + 1 < m1 {
            let guide = Guide { out: px, back: py, dir: up, step: 1.5 };
            let side = |w: &LatticeVertex| w.layer > UPPER;
            let beside = |w: &LatticeVertex| w.layer > UPPER || (w.layer == UPPER && outside(w));
            route_any(&mut b, x, y, &guide, &[&side, &beside, &anywhere])
        } else if tx + 1 > m1 {
            let guide = Guide { out: px, back: py, dir: down, step: 1.5 };
            let side = |w: &LatticeVertex| w.layer < LOWER;
            let beside = |w: &LatticeVertex| w.layer < LOWER || (w.layer == LOWER && outside(w));
            route_any(&mut b, x, y, &guide, &[&side, &beside, &anywhere])
        } else {
            // across the split: sideways out of the last upper row
            let (j, _) = plan.upper_cells[m1 - 1];
            let dx = if j % 2 == 0 { 1.0 } else { -1.0 };
            let guide = Guide { out: px, back: py, dir: [dx, 0.0, 0.0], step: 0.9 };
            let side = |w: &LatticeVertex| {
                (w.layer == UPPER || w.layer == LOWER) && !footprint.contains(&(w.u, w.v, w.sublattice))
            };
            let wide = |w: &LatticeVertex| !footprint.contains(&(w.u, w.v, w.sublattice)) || w.layer > UPPER || w.layer < LOWER;
            route_any(&mut b, x, y, &guide, &[&side, &wide])
        };
        if !ok {
            return Err(FoldError::InfeasibleRouting { start: run.start, len: run.len });
        }
    }
    b.finish()
}

fn route_any(b: &mut Builder, x: usize, y: usize, guide: &Guide, zones: &[&dyn Fn(&LatticeVertex) -> bool]) -> bool {
    zones.iter().any(|z| b.route(x, y, *z, guide, ROUTE_BUDGET).is_ok())
}
