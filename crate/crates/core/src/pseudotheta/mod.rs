//! Pseudo-theta series over ℚ.
//!
//! A pseudo-theta series sits on V₀ ⊆ V₁ ⊆ V: it sums over V₁ − V₀ but uses
//! the Weil representation of V. For g in N·A·K ⊂ SL₂(ℝ) (identity at the
//! finite places) it equals
//!   (ρδ)^{(d−d₁)/2}·θ_{A,1}(g) − (ρδ)^{(d−d₀)/2}·θ_{A,0}(g),
//! with θ_{A,1}, θ_{A,0} the ordinary theta series of V₁ and V₀. Everything
//! here is a truncated lattice sum with a certified tail.

mod group;
mod lattice;
mod series;
mod specfile;
mod vandermonde;

pub use group::{
    gaussian_weight, iwasawa, parse_group_word, parse_rational, parse_real, weil_action, GL2RealElement,
    IwasawaData, Nak,
};
pub use lattice::{Gram, LdlCertificate, QuadLatticeTriple};
pub use series::{
    approximation_check, inner_theta, outer_theta, pseudo_theta_eval, required_radius, required_radius_for,
    tail_bound,
    theta_series, ApproximationReport, ComplexQ, PseudoThetaSpec, ThetaValue,
};
pub use specfile::{parse_spec, serialize_spec};
pub use vandermonde::{gn_separation_demo, SeparationReport};

/// Parse a group word and reduce it to its N·A·K coordinates.
pub fn nak_from_word(word: &str, digits: u32) -> crate::Result<Nak> {
    iwasawa(&parse_group_word(word, digits)?)?.to_nak(digits)
}
