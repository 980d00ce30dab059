//! Text formats: the conformation document (JSON), XYZ point clouds and the
//! tab-separated report and benchmark tables.

use std::fmt::Write as _;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analysis::{theorem_check, BenchRow, FoldReport, Thresholds};
use crate::conformation::{build_conformation, check_lemma2, upper_bound, BoundValue, Conformation, EdgeCensus};
use crate::error::{ConformationError, ParseError};
use crate::lattice::{LatticeVertex, Sublattice};
use crate::sequence::{HpSequence, Residue};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueRecord {
    pub index: usize,
    pub residue: char,
    pub layer: i32,
    pub u: i32,
    pub v: i32,
    pub sublattice: Sublattice,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lemma2Summary {
    pub loss_edges: usize,
    pub max_alternating: usize,
    pub violations: usize,
    /// Binding edges touching a loss edge's endpoints, at most.
    pub max_incident_binding: usize,
}

/// Exhaustive-search statistics, present for brute-force folds.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub max_contacts: usize,
    pub nodes: u64,
    pub exhaustive: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConformationDoc {
    pub format_version: u32,
    pub sequence: String,
    pub residues: Vec<ResidueRecord>,
    pub census: EdgeCensus,
    pub contact_score: usize,
    pub upper_bound: BoundValue,
    pub lemma2: Lemma2Summary,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<FoldReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchSummary>,
}

#[derive(Debug, Error)]
pub enum DocumentError {
    #[error("malformed document: {0}")]
    Malformed(#[from] serde_json::Error),
    #[error("unsupported format version {0}")]
    Version(u32),
    #[error("document has no residues")]
    Empty,
    #[error("residue record {position} has index {found}")]
    Index { position: usize, found: usize },
    #[error("residue {0}: letter must be H or P")]
    Letter(usize),
    #[error("residues spell {residues} but the sequence field says {sequence}")]
    SequenceMismatch { residues: String, sequence: String },
    #[error("sequence field: {0}")]
    Sequence(#[from] ParseError),
}

/// Why a document could not be turned back into a conformation.
#[derive(Debug, Error)]
pub enum LoadError {
    #[error(transparent)]
    Document(#[from] DocumentError),
    #[error("invalid conformation: {0}")]
    Conformation(#[from] ConformationError),
}

pub fn document(c: &Conformation) -> ConformationDoc {
    let residues = c
        .placement()
        .iter()
        .zip(c.sequence().residues())
        .enumerate()
        .map(|(index, (v, r))| ResidueRecord {
            index,
            residue: r.as_char(),
            layer: v.layer,
            u: v.u,
            v: v.v,
            sublattice: v.sublattice,
        })
        .collect();
    let l2 = check_lemma2(c);
    ConformationDoc {
        format_version: FORMAT_VERSION,
        sequence: c.sequence().to_string(),
        residues,
        census: c.census(),
        contact_score: c.contact_score(),
        upper_bound: upper_bound(c.sequence()),
        lemma2: Lemma2Summary {
            loss_edges: l2.loss_edges,
            max_alternating: l2.max_alternating,
            violations: l2.violations.len(),
            max_incident_binding: l2.max_incident_binding,
        },
        report: None,
        search: None,
    }
}

pub fn to_json(doc: &ConformationDoc) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("document serializes");
    s.push('\n');
    s
}

pub fn from_json(text: &str) -> Result<ConformationDoc, DocumentError> {
    let doc: ConformationDoc = serde_json::from_str(text)?;
    if doc.format_version != FORMAT_VERSION {
        return Err(DocumentError::Version(doc.format_version));
    }
    Ok(doc)
}

/// Rebuilds and revalidates the conformation a document describes. Claimed
/// census and bound values are ignored here; see [`claim_mismatches`].
pub fn load(doc: &ConformationDoc) -> Result<Conformation, LoadError> {
    if doc.residues.is_empty() {
        return Err(DocumentError::Empty.into());
    }
    let mut residues = Vec::with_capacity(doc.residues.len());
    let mut placement = Vec::with_capacity(doc.residues.len());
    for (position, r) in doc.residues.iter().enumerate() {
        if r.index != position {
            return Err(DocumentError::Index { position, found: r.index }.into());
        }
        residues.push(match r.residue.to_ascii_uppercase() {
            'H' => Residue::H,
            'P' => Residue::P,
            _ => return Err(DocumentError::Letter(position).into()),
        });
        placement.push(LatticeVertex::new(r.layer, r.u, r.v, r.sublattice));
    }
    let seq = HpSequence::new(residues).map_err(DocumentError::from)?;
    let claimed: HpSequence = doc.sequence.parse().map_err(DocumentError::from)?;
    if claimed != seq {
        return Err(DocumentError::SequenceMismatch { residues: seq.to_string(), sequence: doc.sequence.clone() }.into());
    }
    Ok(build_conformation(seq, placement)?)
}

/// Fields whose claimed value differs from a fresh recount, as
/// `(field, claimed, recounted)`.
pub fn claim_mismatches(doc: &ConformationDoc, c: &Conformation) -> Vec<(String, String, String)> {
    let fresh = document(c);
    let mut out = Vec::new();
    let mut cmp = |field: &str, a: String, b: String| {
        if a != b {
            out.push((field.to_string(), a, b));
        }
    };
    let (x, y) = (doc.census, fresh.census);
    cmp("census.binding", x.binding.to_string(), y.binding.to_string());
    cmp("census.contacts", x.contacts.to_string(), y.contacts.to_string());
    cmp("census.alternating", x.alternating.to_string(), y.alternating.to_string());
    cmp("census.loss", x.loss.to_string(), y.loss.to_string());
    cmp("contact_score", doc.contact_score.to_string(), fresh.contact_score.to_string());
    cmp("upper_bound", doc.upper_bound.to_string(), fresh.upper_bound.to_string());
    out
}

/// XYZ point cloud: count line, comment line, then `C` for H and `O` for P
/// with Cartesian coordinates.
pub fn xyz(c: &Conformation) -> String {
    let recs: Vec<(char, LatticeVertex)> =
        c.sequence().residues().iter().zip(c.placement()).map(|(r, v)| (r.as_char(), *v)).collect();
    xyz_records(&c.sequence().to_string(), &recs)
}

/// Same as [`xyz`], straight from `(letter, vertex)` pairs.
pub fn xyz_records(comment: &str, recs: &[(char, LatticeVertex)]) -> String {
    let mut s = format!("{}\n{}\n", recs.len(), comment);
    for (r, v) in recs {
        let p = v.cartesian();
        let tag = if r.eq_ignore_ascii_case(&'H') { 'C' } else { 'O' };
        writeln!(s, "{tag} {:.6} {:.6} {:.6}", p.x, p.y, p.z).unwrap();
    }
    s
}

fn rational(q: Option<Rational64>) -> String {
    match q {
        Some(q) if *q.denom() == 1 => q.numer().to_string(),
        Some(q) => format!("{}/{}", q.numer(), q.denom()),
        None => "inf".into(),
    }
}

fn thresholds(t: &Thresholds) -> String {
    let flag = |b: bool| if b { '1' } else { '0' };
    let sign = match t.aspect_sign {
        1 => '+',
        -1 => '-',
        _ => '0',
    };
    format!(
        "helix={},layer={},aspect={},sign={}",
        flag(t.helix_regime),
        flag(t.layer_regime),
        flag(t.aspect_condition),
        sign
    )
}

/// One `key<TAB>value` line per report field, then the theorem verdicts.
pub fn report_table(r: &FoldReport) -> String {
    let v = theorem_check(r);
    let verdict = |a: bool, s: bool| match (a, s) {
        (false, _) => "n/a",
        (true, true) => "holds",
        (true, false) => "fails",
    };
    let mut s = String::new();
    let mut line = |k: &str, v: String| writeln!(s, "{k}\t{v}").unwrap();
    line("algorithm", r.algorithm.to_string());
    line("n", r.n.to_string());
    line("k", r.k.to_string());
    line("contact_edges", r.contacts.to_string());
    line("contacts", r.contact_score.to_string());
    line("lower_bound", r.paper_lower_bound.to_string());
    line("upper_bound", r.upper_bound.to_string());
    line("formula_ratio", rational(r.formula_ratio));
    line("measured_ratio", rational(r.ratio));
    if let (Some(rr), Some(ss)) = (r.r, r.s) {
        line("r", rr.to_string());
        line("s", ss.to_string());
    }
    line("thresholds", thresholds(&r.thresholds));
    line("helix_theorem", verdict(v.helix.applicable, v.helix.satisfied).into());
    line("layer_theorem", verdict(v.layer.applicable, v.layer.satisfied).into());
    s
}

pub const BENCH_COLUMNS: [&str; 11] = [
    "seed",
    "n",
    "k",
    "algorithm",
    "contacts",
    "lower_bound",
    "upper_bound_num",
    "upper_bound_den",
    "formula_ratio",
    "measured_ratio",
    "thresholds",
];

/// Tab-separated benchmark table. `contacts` is the per-H tally the bounds
/// are stated in; rows whose fold failed read `error` there.
pub fn bench_table(rows: &[BenchRow]) -> String {
    let mut s = BENCH_COLUMNS.join("\t");
    s.push('\n');
    for row in rows {
        let cells: Vec<String> = match &row.outcome {
            Ok(r) => vec![
                row.seed.to_string(),
                r.n.to_string(),
                r.k.to_string(),
                r.algorithm.to_string(),
                r.contact_score.to_string(),
                r.paper_lower_bound.to_string(),
                r.upper_bound.numerator.to_string(),
                r.upper_bound.denominator.to_string(),
                rational(r.formula_ratio),
                rational(r.ratio),
                thresholds(&r.thresholds),
            ],
            Err(_) => {
                let mut v = vec![row.seed.to_string(), row.n.to_string(), row.k.to_string(), row.algorithm.to_string()];
                v.push("error".into());
                v.extend(std::iter::repeat_n("-".to_string(), 6));
                v
            }
        };
        s.push_str(&cells.join("\t"));
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::folding::helix_arrangement;
    use crate::sequence::parse_hp;

    fn ring() -> Conformation {
        helix_arrangement(&parse_hp("PHHHHHHP").unwrap()).unwrap()
    }

    #[test]
    fn json_round_trip() {
        let c = ring();
        let doc = document(&c);
        let back = from_json(&to_json(&doc)).unwrap();
        assert_eq!(back, doc);
        assert_eq!(load(&back).unwrap(), c);
        assert!(claim_mismatches(&back, &c).is_empty());
    }

    #[test]
    fn field_names() {
        let text = to_json(&document(&ring()));
        for f in ["\"index\"", "\"residue\"", "\"layer\"", "\"u\"", "\"v\"", "\"sublattice\"", "\"format_version\""] {
            assert!(text.contains(f), "{f}");
        }
    }

    #[test]
    fn duplicate_vertex_is_invalid() {
        let mut doc = document(&ring());
        let first = doc.residues[0].clone();
        let r = &mut doc.residues[2];
        (r.layer, r.u, r.v, r.sublattice) = (first.layer, first.u, first.v, first.sublattice);
        assert!(matches!(load(&doc), Err(LoadError::Conformation(_))));
    }

    #[test]
    fn inflated_claim_is_reported() {
        let c = ring();
        let mut doc = document(&c);
        doc.census.contacts += 1;
        doc.contact_score += 2;
        let diff = claim_mismatches(&doc, &c);
        assert_eq!(diff.len(), 2);
        assert_eq!(diff[0], ("census.contacts".into(), "11".into(), "10".into()));
    }

    #[test]
    fn bad_documents() {
        assert!(matches!(from_json("{"), Err(DocumentError::Malformed(_))));
        let mut doc = document(&ring());
        doc.format_version = 99;
        assert!(matches!(from_json(&to_json(&doc)), Err(DocumentError::Version(99))));
        let mut doc = document(&ring());
        doc.sequence = "HPH".into();
        assert!(matches!(load(&doc), Err(LoadError::Document(DocumentError::SequenceMismatch { .. }))));
        doc.residues.clear();
        assert!(matches!(load(&doc), Err(LoadError::Document(DocumentError::Empty))));
    }

    #[test]
    fn xyz_layout() {
        let c = helix_arrangement(&parse_hp("HPH").unwrap()).unwrap();
        let text = xyz(&c);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "3");
        assert!(lines[2].starts_with("C ") && lines[3].starts_with("O ") && lines[4].starts_with("C "));
        assert_eq!(xyz_records("", &[]), "0\n\n");
    }

    #[test]
    fn xyz_keeps_unit_steps() {
        let c = ring();
        let pts: Vec<[f64; 3]> = xyz(&c)
            .lines()
            .skip(2)
            .map(|l| {
                let f: Vec<f64> = l.split_whitespace().skip(1).map(|x| x.parse().unwrap()).collect();
                [f[0], f[1], f[2]]
            })
            .collect();
        for (i, w) in c.placement().windows(2).enumerate() {
            if crate::lattice::classify_edge(&w[0], &w[1]) == Ok(crate::lattice::EdgeClass::NonDiagonal) {
                let d: f64 = (0..3).map(|a| (pts[i][a] - pts[i + 1][a]).powi(2)).sum::<f64>().sqrt();
                assert!((d - 1.0).abs() < 1e-5, "{d}");
            }
        }
    }
}
