//! Embeddings of an HP string into the lattice, their validation and the
//! edge census (binding, contact, alternating and loss edges).

use std::collections::HashMap;
use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::ConformationError;
use crate::lattice::{edge_neighborhood, segments_cross, LatticeVertex};
use crate::sequence::HpSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct EdgeCensus {
    pub binding: usize,
    pub contacts: usize,
    pub alternating: usize,
    pub loss: usize,
}

/// Exact value `numerator / denominator` with denominator 1 or 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundValue {
    pub numerator: i64,
    pub denominator: i64,
}

impl BoundValue {
    pub fn ratio(&self) -> Rational64 {
        Rational64::new(self.numerator, self.denominator)
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }
}

impl fmt::Display for BoundValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denominator == 1 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/{}", self.numerator, self.denominator)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conformation {
    sequence: HpSequence,
    placement: Vec<LatticeVertex>,
    census: EdgeCensus,
    contact_degree: Vec<usize>,
    loss_degree: Vec<usize>,
}

/// Finds residue `j` occupying each vertex.
pub(crate) fn occupancy(placement: &[LatticeVertex]) -> HashMap<LatticeVertex, usize> {
    placement.iter().enumerate().map(|(i, v)| (*v, i)).collect()
}

/// Binding edges (by start index) that could cross edge `(a, b)`: those with
/// an endpoint on `a`, `b` or one of their neighbours. Two crossing edges of
/// length at most 2 always have endpoints within distance 2 of each other.
pub(crate) fn nearby_edges(
    a: &LatticeVertex,
    b: &LatticeVertex,
    occ: &HashMap<LatticeVertex, usize>,
    len: usize,
) -> Vec<usize> {
    let mut out = Vec::new();
    let around = [*a, *b].into_iter().chain(a.neighbors()).chain(b.neighbors());
    for x in around {
        if let Some(&j) = occ.get(&x) {
            if j > 0 {
                out.push(j - 1);
            }
            if j + 1 < len {
                out.push(j);
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

pub fn build_conformation(seq: HpSequence, placement: Vec<LatticeVertex>) -> Result<Conformation, ConformationError> {
    let n = seq.len();
    if placement.len() != n {
        return Err(ConformationError::LengthMismatch { expected: n, found: placement.len() });
    }
    for i in 0..n.saturating_sub(1) {
        if !placement[i].is_adjacent(&placement[i + 1]) {
            return Err(ConformationError::NonAdjacentStep(i));
        }
    }
    let mut seen: HashMap<LatticeVertex, usize> = HashMap::with_capacity(n);
    for (j, v) in placement.iter().enumerate() {
        if let Some(&i) = seen.get(v) {
            return Err(ConformationError::SelfIntersection(i, j));
        }
        seen.insert(*v, j);
    }
    for i in 0..n.saturating_sub(1) {
        let (a, b) = (placement[i], placement[i + 1]);
        let hit = nearby_edges(&a, &b, &seen, n)
            .into_iter()
            .filter(|&j| j > i)
            .find(|&j| segments_cross((a, b), (placement[j], placement[j + 1])));
        if let Some(j) = hit {
            return Err(ConformationError::BindingCross(i, j));
        }
    }

    let mut census = EdgeCensus { binding: n - 1, ..Default::default() };
    census.alternating = (0..n - 1).filter(|&i| seq.is_h(i) != seq.is_h(i + 1)).count();
    let mut contact_degree = vec![0; n];
    let mut loss_degree = vec![0; n];
    for i in seq.h_positions().iter().copied() {
        for w in placement[i].neighbors() {
            match seen.get(&w) {
                Some(&j) if j + 1 == i || i + 1 == j => {}
                Some(&j) if seq.is_h(j) => contact_degree[i] += 1,
                _ => loss_degree[i] += 1,
            }
        }
    }
    census.contacts = contact_degree.iter().sum::<usize>() / 2;
    // a loss edge has exactly one H endpoint, so per-H counts do not overlap
    census.loss = loss_degree.iter().sum();
    Ok(Conformation { sequence: seq, placement, census, contact_degree, loss_degree })
}

impl Conformation {
    pub fn sequence(&self) -> &HpSequence {
        &self.sequence
    }

    pub fn placement(&self) -> &[LatticeVertex] {
        &self.placement
    }

    pub fn census(&self) -> EdgeCensus {
        self.census
    }

    /// Contact edges at each residue (0 for P).
    pub fn contact_degree(&self) -> &[usize] {
        &self.contact_degree
    }

    /// Loss edges at each residue (0 for P).
    pub fn loss_degree(&self) -> &[usize] {
        &self.loss_degree
    }

    /// Contacts tallied per H, so each contact edge counts twice. This is
    /// the quantity the upper bound and the folder lower bounds refer to.
    pub fn contact_score(&self) -> usize {
        2 * self.census.contacts
    }
}

/// Number of contact edges: unordered adjacent H-H pairs that are not bound.
pub fn count_contacts(c: &Conformation) -> usize {
    c.census.contacts
}

pub fn edge_census(c: &Conformation) -> EdgeCensus {
    c.census
}

/// `18n - k/2`, exact.
pub fn upper_bound(seq: &HpSequence) -> BoundValue {
    let (n, k) = (seq.n() as i64, seq.k() as i64);
    if k % 2 == 0 {
        BoundValue { numerator: 18 * n - k / 2, denominator: 1 }
    } else {
        BoundValue { numerator: 36 * n - k, denominator: 2 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma2Report {
    pub loss_edges: usize,
    /// Most alternating edges with both endpoints in the neighbourhood of one
    /// loss edge.
    pub max_alternating: usize,
    /// Loss edges exceeding four, as (H vertex, other vertex, count).
    pub violations: Vec<(LatticeVertex, LatticeVertex, usize)>,
    /// Most binding edges touching either endpoint of one loss edge.
    pub max_incident_binding: usize,
}

impl Lemma2Report {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_lemma2(c: &Conformation) -> Lemma2Report {
    let seq = &c.sequence;
    let place = &c.placement;
    let occ = occupancy(place);
    let alternating = |j: usize| j + 1 < place.len() && seq.is_h(j) != seq.is_h(j + 1);
    let mut report = Lemma2Report { loss_edges: 0, max_alternating: 0, violations: Vec::new(), max_incident_binding: 0 };
    for &i in seq.h_positions() {
        let x = place[i];
        for w in x.neighbors() {
            let other = occ.get(&w).copied();
            match other {
                Some(j) if j + 1 == i || i + 1 == j => continue,
                Some(j) if seq.is_h(j) => continue,
                _ => {}
            }
            report.loss_edges += 1;
            let hood = edge_neighborhood(&x, &w).expect("neighbours are adjacent");
            let mut count = 0;
            for u in &hood {
                if let Some(&j) = occ.get(u) {
                    if alternating(j) && hood.binary_search(&place[j + 1]).is_ok() {
                        count += 1;
                    }
                }
            }
            let degree = |r: Option<usize>| match r {
                Some(r) => usize::from(r > 0) + usize::from(r + 1 < place.len()),
                None => 0,
            };
            report.max_incident_binding = report.max_incident_binding.max(degree(Some(i)) + degree(other));
            report.max_alternating = report.max_alternating.max(count);
            if count > 4 {
                report.violations.push((x, w, count));
            }
        }
    }
    report
}
