//! Bundled data sets.

use crate::error::Result;
use crate::io::parse_projector_set;
use crate::state::PureState;
use crate::tolerance::Tolerances;

/// Eighteen rays in dimension 4 forming nine orthonormal bases, each ray in
/// exactly two of them (Cabello–Estebaranz–García-Alcaine).
pub const CABELLO18_JSON: &str = include_str!("../data/cabello18.json");

pub fn cabello18() -> Result<Vec<PureState>> {
    parse_projector_set(CABELLO18_JSON, &Tolerances::default())
}
