//! On-disk document formats: channel specs, state specs, and ensembles.
//!
//! Complex numbers are serialized as `[re, im]` two-element arrays
//! everywhere so files round-trip bit-exactly; matrices are 2×2 row-major
//! arrays of such pairs.

use qroof::{
    c64, density_from_bloch, BlochVector, ChannelSpec, DensityOperator, Ensemble, KrausPair,
    Mat2, C64,
};
use serde::{Deserialize, Serialize};
use std::path::Path;

/// A complex scalar on disk: `[re, im]`.
pub type ComplexPair = [f64; 2];
/// A 2×2 complex matrix on disk, row-major.
pub type MatrixEntries = [[ComplexPair; 2]; 2];

fn cx(v: ComplexPair) -> C64 {
    c64(v[0], v[1])
}

#[cfg(test)]
fn pair(c: C64) -> ComplexPair {
    [c.re, c.im]
}

fn matrix(entries: &MatrixEntries) -> Mat2 {
    Mat2::new(
        cx(entries[0][0]),
        cx(entries[0][1]),
        cx(entries[1][0]),
        cx(entries[1][1]),
    )
}

#[cfg(test)]
fn entries(m: &Mat2) -> MatrixEntries {
    [[pair(m.m00), pair(m.m01)], [pair(m.m10), pair(m.m11)]]
}

/// Channel document with a `kind` discriminator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ChannelSpecFile {
    Kraus { a: MatrixEntries, b: MatrixEntries },
    PhaseDamping { z: ComplexPair },
    AmplitudeDamping { p: f64 },
    Canonical { a00: ComplexPair, a11: ComplexPair, b01: ComplexPair, b10: ComplexPair },
}

impl ChannelSpecFile {
    /// Validates the document into a channel spec, reporting the offending
    /// field on failure.
    pub fn to_spec(&self) -> Result<ChannelSpec, String> {
        match self {
            Self::Kraus { a, b } => KrausPair::new(matrix(a), matrix(b))
                .map(ChannelSpec::from_pair)
                .map_err(|e| format!("fields `a`/`b`: {e}")),
            Self::PhaseDamping { z } => ChannelSpec::phase_damping(cx(*z))
                .map_err(|e| format!("field `z`: {e}")),
            Self::AmplitudeDamping { p } => ChannelSpec::amplitude_damping(*p)
                .map_err(|e| format!("field `p`: {e}")),
            Self::Canonical { a00, a11, b01, b10 } => {
                ChannelSpec::canonical(cx(*a00), cx(*a11), cx(*b01), cx(*b10))
                    .map_err(|e| format!("fields `a00`/`a11`/`b01`/`b10`: {e}"))
            }
        }
    }

    /// The document describing an in-memory spec; writing it and parsing
    /// the result reproduces the spec exactly.
    #[cfg(test)]
    pub fn from_spec(spec: &ChannelSpec) -> Self {
        match *spec {
            ChannelSpec::PhaseDamping { z } => Self::PhaseDamping { z: pair(z) },
            ChannelSpec::AmplitudeDamping { p } => Self::AmplitudeDamping { p },
            ChannelSpec::Canonical { a00, a11, b01, b10 } => Self::Canonical {
                a00: pair(a00),
                a11: pair(a11),
                b01: pair(b01),
                b10: pair(b10),
            },
            ChannelSpec::Kraus(ref pair_) => {
                Self::Kraus { a: entries(&pair_.a()), b: entries(&pair_.b()) }
            }
        }
    }
}

/// State document: exactly one of a Bloch vector or a density matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateSpecFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bloch: Option<[f64; 3]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<MatrixEntries>,
}

impl StateSpecFile {
    pub fn to_state(&self) -> Result<DensityOperator, String> {
        match (&self.bloch, &self.matrix) {
            (Some(b), None) => density_from_bloch(BlochVector::new(b[0], b[1], b[2]))
                .map_err(|e| format!("field `bloch`: {e}")),
            (None, Some(m)) => DensityOperator::new(matrix(m))
                .map_err(|e| format!("field `matrix`: {e}")),
            (Some(_), Some(_)) => {
                Err("give either `bloch` or `matrix`, not both".to_string())
            }
            (None, None) => Err("missing `bloch` or `matrix`".to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleMemberFile {
    pub weight: f64,
    pub state: StateSpecFile,
}

/// Ensemble document: weighted states, weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleSpecFile {
    pub members: Vec<EnsembleMemberFile>,
}

impl EnsembleSpecFile {
    pub fn to_ensemble(&self) -> Result<Ensemble, String> {
        let mut members = Vec::with_capacity(self.members.len());
        for (i, m) in self.members.iter().enumerate() {
            let state = m.state.to_state().map_err(|e| format!("member {i}: {e}"))?;
            members.push((m.weight, state));
        }
        Ensemble::new(members).map_err(|e| format!("field `members`: {e}"))
    }
}

/// Reads and parses a document, prefixing every failure with the path.
pub fn load<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}
