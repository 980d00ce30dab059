//! Bound arithmetic, theorem checks, random instances and the benchmark.
//!
//! Contact counts compared against bounds are per-H tallies
//! ([`Conformation::contact_score`]), twice the number of contact edges.

use num_rational::Rational64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conformation::{check_lemma2, upper_bound, BoundValue, Conformation};
use crate::error::{DomainError, FoldError};
use crate::folding::{brute_force_max, chain_factorization, helix_arrangement, layer_arrangement, Algorithm};
use crate::sequence::{HpSequence, Residue};

pub fn helix_lower_bound(n: usize, k: usize) -> i64 {
    9 * n as i64 - 36 + 2 * k as i64
}

pub fn layer_lower_bound(n: usize, k: usize, r: usize, s: usize) -> i64 {
    14 * n as i64 + 24 * r as i64 - 22 * s as i64 - 314 + 2 * k as i64
}

/// `upper / lower`, undefined when `lower <= 0`.
pub fn formula_ratio(upper: BoundValue, lower: i64) -> Option<Rational64> {
    (lower > 0).then(|| upper.ratio() / Rational64::from_integer(lower))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thresholds {
    pub helix_regime: bool,
    pub layer_regime: bool,
    pub aspect_condition: bool,
    /// Sign of `11s - 12r`.
    pub aspect_sign: i8,
}

impl Thresholds {
    pub fn new(k: usize, rs: Option<(usize, usize)>) -> Self {
        let d = rs.map_or(0, |(r, s)| 11 * s as i64 - 12 * r as i64);
        Thresholds {
            helix_regime: k > 13,
            layer_regime: k > 132,
            aspect_condition: rs.is_some() && d == 0,
            aspect_sign: d.signum() as i8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FoldReport {
    pub n: usize,
    pub k: usize,
    pub algorithm: Algorithm,
    /// Contact edges.
    pub contacts: usize,
    /// Per-H contact tally, the quantity the bounds speak about.
    pub contact_score: usize,
    pub paper_lower_bound: i64,
    pub upper_bound: BoundValue,
    /// Upper bound over the formula lower bound.
    pub formula_ratio: Option<Rational64>,
    /// Upper bound over the measured score; `None` when it is zero.
    pub ratio: Option<Rational64>,
    pub r: Option<usize>,
    pub s: Option<usize>,
    pub thresholds: Thresholds,
}

pub fn fold_report(seq: &HpSequence, c: &Conformation, algorithm: Algorithm) -> FoldReport {
    let (n, k) = (seq.n(), seq.k());
    let ub = upper_bound(seq);
    let rs = match algorithm {
        Algorithm::Layer if n >= 2 => chain_factorization(n / 2).ok(),
        _ => None,
    };
    let lower = match (algorithm, rs) {
        (Algorithm::Layer, Some((r, s))) => layer_lower_bound(n, k, r, s),
        _ => helix_lower_bound(n, k),
    };
    let score = c.contact_score();
    FoldReport {
        n,
        k,
        algorithm,
        contacts: c.census().contacts,
        contact_score: score,
        paper_lower_bound: lower,
        upper_bound: ub,
        formula_ratio: formula_ratio(ub, lower),
        ratio: (score > 0).then(|| ub.ratio() / Rational64::from_integer(score as i64)),
        r: rs.map(|p| p.0),
        s: rs.map(|p| p.1),
        thresholds: Thresholds::new(k, rs),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub applicable: bool,
    pub satisfied: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    pub helix: Verdict,
    pub layer: Verdict,
}

pub fn theorem_check(report: &FoldReport) -> Verdicts {
    let check = |applicable: bool, limit: Rational64| Verdict {
        applicable,
        satisfied: !applicable || report.formula_ratio.is_some_and(|q| q <= limit),
    };
    let t = report.thresholds;
    Verdicts {
        helix: check(report.algorithm == Algorithm::Helix && t.helix_regime, Rational64::from_integer(2)),
        layer: check(report.algorithm == Algorithm::Layer && t.layer_regime && t.aspect_condition, Rational64::new(9, 7)),
    }
}

/// HP string with exactly `n` H's in `k` runs. Run lengths are a uniform
/// composition of `n` into `k` parts; interior P-runs have length 1 to 4 and
/// the flanks 0 to 2.
pub fn random_hp(n: usize, k: usize, seed: u64) -> Result<HpSequence, DomainError> {
    if k < 1 || k > n {
        return Err(DomainError::Invalid(format!("need 1 <= k <= n, got n = {n}, k = {k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cuts: Vec<usize> = sample(&mut rng, n - 1, k - 1).into_iter().map(|c| c + 1).collect();
    cuts.sort_unstable();
    cuts.push(n);
    let mut out = Vec::new();
    let lead = rng.gen_range(0..=2);
    out.extend(std::iter::repeat_n(Residue::P, lead));
    let mut prev = 0;
    for (t, &c) in cuts.iter().enumerate() {
        if t > 0 {
            let gap = rng.gen_range(1..=4);
            out.extend(std::iter::repeat_n(Residue::P, gap));
        }
        out.extend(std::iter::repeat_n(Residue::H, c - prev));
        prev = c;
    }
    let trail = rng.gen_range(0..=2);
    out.extend(std::iter::repeat_n(Residue::P, trail));
    Ok(HpSequence::new(out).expect("non-empty"))
}

pub fn fold_with(seq: &HpSequence, algorithm: Algorithm, budget: u64) -> Result<Conformation, FoldError> {
    match algorithm {
        Algorithm::Helix => helix_arrangement(seq),
        Algorithm::Layer => layer_arrangement(seq),
        Algorithm::BruteForce => brute_force_max(seq, budget).map(|r| r.conformation),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub count: usize,
    pub n_min: usize,
    pub n_max: usize,
    pub k_min: usize,
    pub k_max: usize,
    pub seed: u64,
    pub algorithms: Vec<Algorithm>,
    pub budget: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub seed: u64,
    pub n: usize,
    pub k: usize,
    pub algorithm: Algorithm,
    pub sequence: String,
    pub outcome: Result<FoldReport, String>,
    pub lemma2_max: Option<usize>,
}

impl BenchRow {
    /// Measured score above the upper bound: never acceptable.
    pub fn bound_violation(&self) -> bool {
        matches!(&self.outcome, Ok(r) if Rational64::from_integer(r.contact_score as i64) > r.upper_bound.ratio())
    }
}

/// Instance `i` of a suite: its seed, then `n` and `k` drawn from it.
pub fn suite_instance(cfg: &BenchConfig, i: usize) -> (u64, HpSequence) {
    let seed = cfg.seed.wrapping_add(i as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let n = rng.gen_range(cfg.n_min..=cfg.n_max.max(cfg.n_min));
    let k_hi = cfg.k_max.min(n).max(cfg.k_min.min(n));
    let k = rng.gen_range(cfg.k_min.min(k_hi).max(1)..=k_hi);
    (seed, random_hp(n, k, seed).expect("1 <= k <= n"))
}

pub fn bench(cfg: &BenchConfig) -> Vec<BenchRow> {
    let rows: Vec<Vec<BenchRow>> = (0..cfg.count)
        .into_par_iter()
        .map(|i| {
            let (seed, seq) = suite_instance(cfg, i);
            cfg.algorithms
                .iter()
                .map(|&alg| {
                    let folded = fold_with(&seq, alg, cfg.budget);
                    BenchRow {
                        seed,
                        n: seq.n(),
                        k: seq.k(),
                        algorithm: alg,
                        sequence: seq.compact(),
                        lemma2_max: folded.as_ref().ok().map(|c| check_lemma2(c).max_alternating),
                        outcome: folded.map(|c| fold_report(&seq, &c, alg)).map_err(|e| e.to_string()),
                    }
                })
                .collect()
        })
        .collect();
    rows.into_iter().flatten().collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSummary {
    pub rows: usize,
    pub failures: usize,
    pub bound_violations: usize,
    pub below_lower_bound: usize,
    pub min_ratio: Option<f64>,
    pub median_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
}

pub fn summarize(rows: &[BenchRow]) -> BenchSummary {
    let mut ratios: Vec<Rational64> = rows.iter().filter_map(|r| r.outcome.as_ref().ok()?.ratio).collect();
    ratios.sort();
    let f = |q: &Rational64| *q.numer() as f64 / *q.denom() as f64;
    BenchSummary {
        rows: rows.len(),
        failures: rows.iter().filter(|r| r.outcome.is_err()).count(),
        bound_violations: rows.iter().filter(|r| r.bound_violation()).count(),
        below_lower_bound: rows
            .iter()
            .filter(|r| matches!(&r.outcome, Ok(rep) if (rep.contact_score as i64) < rep.paper_lower_bound))
            .count(),
        min_ratio: ratios.first().map(f),
        median_ratio: ratios.get(ratios.len() / 2).map(f),
        max_ratio: ratios.last().map(f),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequence::parse_hp;

    #[test]
    fn helix_report_values() {
        let s = parse_hp("H14P2H8P1H11").unwrap();
        let c = helix_arrangement(&s).unwrap();
        let r = fold_report(&s, &c, Algorithm::Helix);
        assert_eq!(r.paper_lower_bound, 267);
        assert_eq!(r.upper_bound.to_f64(), 592.5);
        assert!(!r.thresholds.helix_regime);
    }

    fn upper_bound_for(n: i64, k: i64) -> BoundValue {
        BoundValue { numerator: 36 * n - k, denominator: 2 }
    }

    #[test]
    fn theorem_boundaries() {
        // (1800 - 7) / (900 - 36 + 28)
        let q = formula_ratio(BoundValue { numerator: 3586, denominator: 2 }, helix_lower_bound(100, 14)).unwrap();
        assert_eq!(q, Rational64::new(1793, 892));
        // 2 * 892 = 1784: the ratio only drops to 2 once 4.5k >= 72
        assert!(q > Rational64::from_integer(2));
        for k in 14..40usize {
            let q = formula_ratio(upper_bound_for(100, k as i64), helix_lower_bound(100, k)).unwrap();
            assert_eq!(q <= Rational64::from_integer(2), k >= 16, "k = {k}");
        }
        assert!(Thresholds::new(14, None).helix_regime);
        assert!(!Thresholds::new(13, None).helix_regime);
        let t = Thresholds::new(133, Some((22, 24)));
        assert!(t.layer_regime && t.aspect_condition);
        assert!(!Thresholds::new(132, Some((22, 24))).layer_regime);
        assert_eq!(Thresholds::new(1, Some((3, 4))).aspect_sign, 1);
        assert_eq!(Thresholds::new(1, Some((12, 12))).aspect_sign, -1);
    }

    #[test]
    fn layer_formula_instance() {
        assert_eq!(layer_lower_bound(1056, 133, 22, 24), 14736);
        let ub = BoundValue { numerator: 36 * 1056 - 133, denominator: 2 };
        let q = formula_ratio(ub, 14736).unwrap();
        assert!(q <= Rational64::new(9, 7));
        assert!((*q.numer() as f64 / *q.denom() as f64 - 1.2854).abs() < 1e-4);
    }

    #[test]
    fn random_hp_shape() {
        let s = random_hp(5, 5, 1).unwrap();
        assert_eq!((s.n(), s.k()), (5, 5));
        let s = random_hp(5, 1, 1).unwrap();
        assert_eq!((s.n(), s.k()), (5, 1));
        assert_eq!(random_hp(36, 7, 42).unwrap(), random_hp(36, 7, 42).unwrap());
        assert!(random_hp(3, 4, 0).is_err());
        assert!(random_hp(3, 0, 0).is_err());
    }

    #[test]
    fn composition_is_uniform() {
        // compositions of 5 into 3 parts: C(4, 2) = 6, each about 1/6
        let mut counts = std::collections::HashMap::new();
        for seed in 0..6000 {
            let s = random_hp(5, 3, seed).unwrap();
            let parts: Vec<usize> = s.h_runs().iter().map(|r| r.len).collect();
            *counts.entry(parts).or_insert(0) += 1;
        }
        assert_eq!(counts.len(), 6);
        for c in counts.values() {
            assert!((800..1200).contains(c), "{counts:?}");
        }
    }

    #[test]
    fn empty_bench() {
        let cfg = BenchConfig { count: 0, n_min: 1, n_max: 1, k_min: 1, k_max: 1, seed: 0, algorithms: vec![Algorithm::Helix], budget: 1 };
        assert!(bench(&cfg).is_empty());
    }

    #[test]
    fn zero_contacts_ratio_undefined() {
        let s = parse_hp("PPHPP").unwrap();
        let c = helix_arrangement(&s).unwrap();
        assert_eq!(fold_report(&s, &c, Algorithm::Helix).ratio, None);
    }
}
