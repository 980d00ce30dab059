//! HP strings, their run structure and the run-count asymptotics.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{DomainError, ParseError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Residue {
    H,
    P,
}

impl Residue {
    pub fn is_h(self) -> bool {
        self == Residue::H
    }

    pub fn as_char(self) -> char {
        match self {
            Residue::H => 'H',
            Residue::P => 'P',
        }
    }
}

/// Maximal block of equal residues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Run {
    pub start: usize,
    pub len: usize,
}

impl Run {
    pub fn end(&self) -> usize {
        self.start + self.len
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HpSequence {
    residues: Vec<Residue>,
    h_runs: Vec<Run>,
    p_runs: Vec<Run>,
    h_positions: Vec<usize>,
}

impl HpSequence {
    pub fn new(residues: Vec<Residue>) -> Result<Self, ParseError> {
        if residues.is_empty() {
            return Err(ParseError::EmptyInput);
        }
        let mut h_runs = Vec::new();
        let mut p_runs = Vec::new();
        let mut i = 0;
        while i < residues.len() {
            let mut j = i;
            while j < residues.len() && residues[j] == residues[i] {
                j += 1;
            }
            let run = Run { start: i, len: j - i };
            match residues[i] {
                Residue::H => h_runs.push(run),
                Residue::P => p_runs.push(run),
            }
            i = j;
        }
        let h_positions = (0..residues.len()).filter(|&i| residues[i].is_h()).collect();
        Ok(HpSequence { residues, h_runs, p_runs, h_positions })
    }

    pub fn residues(&self) -> &[Residue] {
        &self.residues
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }

    /// Number of H residues.
    pub fn n(&self) -> usize {
        self.h_positions.len()
    }

    /// Number of maximal H-runs.
    pub fn k(&self) -> usize {
        self.h_runs.len()
    }

    pub fn h_runs(&self) -> &[Run] {
        &self.h_runs
    }

    pub fn p_runs(&self) -> &[Run] {
        &self.p_runs
    }

    pub fn h_positions(&self) -> &[usize] {
        &self.h_positions
    }

    pub fn is_h(&self, i: usize) -> bool {
        self.residues[i].is_h()
    }

    /// Run-length form, e.g. `H3P6H2`.
    pub fn compact(&self) -> String {
        let mut runs: Vec<(Residue, usize)> = Vec::new();
        for &r in &self.residues {
            match runs.last_mut() {
                Some((c, n)) if *c == r => *n += 1,
                _ => runs.push((r, 1)),
            }
        }
        runs.iter()
            .map(|(r, n)| if *n == 1 { r.as_char().to_string() } else { format!("{}{}", r.as_char(), n) })
            .collect()
    }
}

impl fmt::Display for HpSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.residues {
            write!(f, "{}", r.as_char())?;
        }
        Ok(())
    }
}

impl std::str::FromStr for HpSequence {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse_hp(s)
    }
}

/// Parses `HHPPH`, `hhpph` or the compact `H2P2H` / `H^2P^2H` forms.
/// Whitespace anywhere is ignored; positions in errors are char offsets into
/// the original text.
pub fn parse_hp(text: &str) -> Result<HpSequence, ParseError> {
    let chars: Vec<(usize, char)> = text.chars().enumerate().filter(|(_, c)| !c.is_whitespace()).collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let r = match c.to_ascii_uppercase() {
            'H' => Residue::H,
            'P' => Residue::P,
            '^' | '0'..='9' => return Err(ParseError::MalformedCount { position: pos }),
            _ => return Err(ParseError::InvalidChar { position: pos, found: c }),
        };
        i += 1;
        let mut caret = None;
        if i < chars.len() && chars[i].1 == '^' {
            caret = Some(chars[i].0);
            i += 1;
        }
        let digits_start = i;
        while i < chars.len() && chars[i].1.is_ascii_digit() {
            i += 1;
        }
        let count = if i == digits_start {
            if let Some(p) = caret {
                return Err(ParseError::MalformedCount { position: p });
            }
            1
        } else {
            let s: String = chars[digits_start..i].iter().map(|(_, c)| c).collect();
            let p = chars[digits_start].0;
            let n: usize = s.parse().map_err(|_| ParseError::MalformedCount { position: p })?;
            if n == 0 {
                return Err(ParseError::ZeroCount { position: p });
            }
            n
        };
        out.extend(std::iter::repeat_n(r, count));
    }
    HpSequence::new(out)
}

/// Expected number of H-runs in a random H-composition of `n`, asymptotic form.
pub fn expected_runs(n: u64) -> Result<f64, DomainError> {
    if n == 0 {
        return Err(DomainError::Invalid("n must be positive".into()));
    }
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    let nf = n as f64;
    let c = (6.0 / std::f64::consts::PI).sqrt();
    Ok(c * nf.sqrt() * (0.5 * nf.ln() + EULER_GAMMA - (std::f64::consts::PI / 6.0).sqrt().ln()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_plain_and_counts() {
        let s = parse_hp("HHPPHPHH").unwrap();
        assert_eq!(s.len(), 8);
        assert_eq!(s.n(), 5);
        assert_eq!(s.k(), 3);
        assert_eq!(s.h_runs(), &[Run { start: 0, len: 2 }, Run { start: 4, len: 1 }, Run { start: 6, len: 2 }]);
        assert_eq!(s.p_runs(), &[Run { start: 2, len: 2 }, Run { start: 5, len: 1 }]);
    }

    #[test]
    fn parse_compact_forms() {
        let a = parse_hp("H3P6H2").unwrap();
        assert_eq!(a.to_string(), "HHHPPPPPPHH");
        let b = parse_hp("h^3 p^6\nH2").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.compact(), "H3P6H2");
        assert_eq!(parse_hp("P").unwrap().n(), 0);
        assert_eq!(parse_hp("P").unwrap().k(), 0);
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse_hp(""), Err(ParseError::EmptyInput));
        assert_eq!(parse_hp("  \n"), Err(ParseError::EmptyInput));
        assert_eq!(parse_hp("HXH"), Err(ParseError::InvalidChar { position: 1, found: 'X' }));
        assert_eq!(parse_hp("3H"), Err(ParseError::MalformedCount { position: 0 }));
        assert_eq!(parse_hp("H^P"), Err(ParseError::MalformedCount { position: 1 }));
        assert_eq!(parse_hp("H0"), Err(ParseError::ZeroCount { position: 1 }));
        assert!(matches!(parse_hp("H99999999999999999999999"), Err(ParseError::MalformedCount { .. })));
    }

    #[test]
    fn expected_runs_values() {
        assert!(expected_runs(0).is_err());
        // the parts-count form sqrt(3Y/2pi) * (ln Y + 2 gamma - 2 ln sqrt(pi/6))
        let n = 500f64;
        let pi = std::f64::consts::PI;
        let want = (3.0 * n / (2.0 * pi)).sqrt() * (n.ln() + 2.0 * 0.5772156649015329 - 2.0 * (pi / 6.0).sqrt().ln());
        assert!((expected_runs(500).unwrap() - want).abs() < 1e-9);
        assert!((expected_runs(500).unwrap() - 123.8).abs() < 0.5);
        assert!(expected_runs(1).unwrap() > 0.0);
    }
}
