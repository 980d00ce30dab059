//! Constructive folders and the exhaustive oracle.

mod brute;
mod helix;
mod layer;
mod route;

use serde::{Deserialize, Serialize};

pub use brute::{brute_force_max, for_each_walk, lemma2_profile, second_residue_representatives, BruteResult, Symmetry};
pub use helix::{helix_arrangement, plan_helix, HelixPlan, HelixSite, RingSite};
pub use layer::{cell, chain_factorization, layer_arrangement, plan_layers, LayerPlan, Region};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    Helix,
    Layer,
    BruteForce,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Helix => "helix",
            Algorithm::Layer => "layer",
            Algorithm::BruteForce => "brute",
        }
    }
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
