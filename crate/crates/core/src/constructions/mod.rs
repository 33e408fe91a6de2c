//! Explicit constructions: triangular sets, the `L` operator calculus and the
//! four-direction pipeline.

pub mod fixtures;
pub mod operators;
pub mod pipeline;

use serde::{Deserialize, Serialize};

use crate::field::Prime;
use crate::plane::PointSet;

pub use fixtures::{figure_fixture, Fixture};
pub use operators::{
    basis_vector, l_operator, progression_length, shift, unit_progression, verify_lemma,
    LemmaReport, RowVector,
};
pub use pipeline::{
    apply_l_rowwise, build_c11, build_m11, build_n11, four_direction_search, pairing_background,
    FourDirectionOutcome, ParamMenu, PipelineParams, RowPairing, SignedMatrix,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TriangleVariant {
    /// `{(a,b) : b < a}`, special directions `(1,0), (0,1), (1,1)`.
    Lower,
    /// `{(a,b) : a >= 1, a + b <= p - 1}`, special directions
    /// `(1,0), (0,1), (1,-1)`.
    Upper,
}

/// Triangular set with `p(p-1)/2` points.
pub fn triangle_set(p: Prime, variant: TriangleVariant) -> PointSet {
    let q = p.get();
    PointSet::from_fn(p, |pt| match variant {
        TriangleVariant::Lower => pt.y < pt.x,
        TriangleVariant::Upper => pt.x >= 1 && pt.x + pt.y < q,
    })
}
