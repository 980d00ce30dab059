//! Incremental placement with crossing checks, and a depth-first router that
//! threads a P-run between two placed residues.

use std::collections::HashMap;

use crate::conformation::{build_conformation, nearby_edges, Conformation};
use crate::error::FoldError;
use crate::lattice::{segments_cross, LatticeVertex, Point3};
use crate::sequence::HpSequence;

/// Preferred shape of a routed run: an out-leg starting at `out` and a
/// back-leg ending at `back`, both heading along `dir`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Guide {
    pub out: Point3,
    pub back: Point3,
    pub dir: [f64; 3],
    pub step: f64,
}

impl Guide {
    fn target(&self, t: usize, m: usize) -> Point3 {
        let half = m.div_ceil(2);
        let (base, h) = if t <= half { (self.out, t) } else { (self.back, m + 1 - t) };
        let d = h as f64 * self.step;
        Point3 { x: base.x + self.dir[0] * d, y: base.y + self.dir[1] * d, z: base.z + self.dir[2] * d }
    }
}

pub(crate) struct Builder<'a> {
    seq: &'a HpSequence,
    slots: Vec<Option<LatticeVertex>>,
    occ: HashMap<LatticeVertex, usize>,
}

/// Route search gave up, either exhausted or over budget.
pub(crate) struct NoRoute;

impl<'a> Builder<'a> {
    pub fn new(seq: &'a HpSequence) -> Self {
        Builder { seq, slots: vec![None; seq.len()], occ: HashMap::new() }
    }

    pub fn is_free(&self, v: &LatticeVertex) -> bool {
        !self.occ.contains_key(v)
    }

    pub fn place(&mut self, i: usize, v: LatticeVertex) {
        debug_assert!(self.slots[i].is_none() && self.is_free(&v));
        self.slots[i] = Some(v);
        self.occ.insert(v, i);
    }

    fn unplace(&mut self, i: usize) {
        if let Some(v) = self.slots[i].take() {
            self.occ.remove(&v);
        }
    }

    /// Would the segment `a`-`b` cross any edge between consecutive placed
    /// residues?
    pub fn crosses(&self, a: &LatticeVertex, b: &LatticeVertex) -> bool {
        nearby_edges(a, b, &self.occ, self.slots.len()).into_iter().any(|j| match (self.slots[j], self.slots[j + 1]) {
            (Some(p), Some(q)) => segments_cross((*a, *b), (p, q)),
            _ => false,
        })
    }

    /// Places residues `x+1 .. y` (exclusive) on vertices accepted by `zone`,
    /// given that `x` and `y` are placed. All-or-nothing.
    pub fn route(
        &mut self,
        x: usize,
        y: usize,
        zone: &dyn Fn(&LatticeVertex) -> bool,
        guide: &Guide,
        budget: u64,
    ) -> Result<(), NoRoute> {
        let end = self.slots[y].expect("route end placed");
        let mut nodes = 0;
        if self.dfs(x + 1, x, y, end, zone, guide, &mut nodes, budget) {
            Ok(())
        } else {
            Err(NoRoute)
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn dfs(
        &mut self,
        j: usize,
        x: usize,
        y: usize,
        end: LatticeVertex,
        zone: &dyn Fn(&LatticeVertex) -> bool,
        guide: &Guide,
        nodes: &mut u64,
        budget: u64,
    ) -> bool {
        if j == y {
            return true;
        }
        let prev = self.slots[j - 1].expect("previous residue placed");
        let m = y - x - 1;
        let rest = (y - j - 1) as i64; // residues still to place after j
        let reach = 16 * (rest + 1) * (rest + 1);
        let goal = guide.target(j - x, m);
        let mut cands: Vec<(f64, LatticeVertex)> = prev
            .neighbors()
            .filter(|w| self.is_free(w) && zone(w) && w.quad_distance(&end) <= reach)
            .map(|w| {
                let p = w.cartesian();
                let d = (p.x - goal.x).powi(2) + (p.y - goal.y).powi(2) + (p.z - goal.z).powi(2);
                (d, w)
            })
            .collect();
        cands.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (_, w) in cands {
            *nodes += 1;
            if *nodes > budget {
                return false;
            }
            if self.crosses(&prev, &w) {
                continue;
            }
            self.place(j, w);
            let closes = j + 1 < y || !self.crosses(&w, &end);
            if closes && self.dfs(j + 1, x, y, end, zone, guide, nodes, budget) {
                return true;
            }
            self.unplace(j);
            if *nodes > budget {
                return false;
            }
        }
        false
    }

    pub fn finish(self) -> Result<Conformation, FoldError> {
        let placement: Vec<LatticeVertex> = self.slots.into_iter().map(|s| s.expect("every residue placed")).collect();
        Ok(build_conformation(self.seq.clone(), placement)?)
    }
}

pub(crate) fn unit(v: [f64; 3]) -> [f64; 3] {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    [v[0] / n, v[1] / n, v[2] / n]
}
