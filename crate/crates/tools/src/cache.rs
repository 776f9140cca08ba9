//! JSON documents for complement bases and cached basis chains.

use std::path::Path;

use serde::{Deserialize, Serialize};

use scarmps_core::embedding::{ComplementBasis, Provenance};
use scarmps_core::mps::Family;
use scarmps_core::sweep::PreparedPoint;
use scarmps_core::{CMatrix, Complex64};

use crate::error::{Result, ToolError};

/// One complement basis: `states[row][column] = [re, im]`, columns are the
/// basis states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisDocument {
    pub g: f64,
    pub provenance: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    pub states: Vec<Vec<[f64; 2]>>,
}

impl BasisDocument {
    pub fn from_basis(basis: &ComplementBasis) -> Self {
        let (provenance, a) = match basis.provenance {
            Provenance::AnalyticGhz { a } => ("analytic_ghz", Some(a)),
            Provenance::Numerical => ("numerical", None),
        };
        let states = (0..basis.states.nrows())
            .map(|r| {
                (0..basis.states.ncols())
                    .map(|c| {
                        let z = basis.states[(r, c)];
                        [z.re, z.im]
                    })
                    .collect()
            })
            .collect();
        Self {
            g: basis.g,
            provenance: provenance.into(),
            a,
            states,
        }
    }

    pub fn to_basis(&self) -> std::result::Result<ComplementBasis, String> {
        let rows = self.states.len();
        let cols = self.states.first().map_or(0, Vec::len);
        if rows == 0 || cols == 0 || self.states.iter().any(|r| r.len() != cols) {
            return Err("ragged or empty state matrix".into());
        }
        let provenance = match (self.provenance.as_str(), self.a) {
            ("analytic_ghz", Some(a)) => Provenance::AnalyticGhz { a },
            ("numerical", _) => Provenance::Numerical,
            (other, _) => return Err(format!("unknown provenance `{other}`")),
        };
        let states = CMatrix::from_fn(rows, cols, |r, c| {
            let [re, im] = self.states[r][c];
            Complex64::new(re, im)
        });
        Ok(ComplementBasis {
            g: self.g,
            states,
            provenance,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CachedPoint {
    pub continuity_lost: bool,
    pub rank_deficient: bool,
    pub basis: BasisDocument,
}

/// A sweep's prepared bases, reusable by later runs over the same grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainCache {
    pub family: String,
    pub chain_step: f64,
    pub chain_start: f64,
    pub points: Vec<CachedPoint>,
}

impl ChainCache {
    pub fn new(family: Family, chain_step: f64, chain_start: f64, points: &[PreparedPoint]) -> Self {
        Self {
            family: family.label().into(),
            chain_step,
            chain_start,
            points: points
                .iter()
                .map(|p| CachedPoint {
                    continuity_lost: p.continuity_lost,
                    rank_deficient: p.rank_deficient,
                    basis: BasisDocument::from_basis(&p.basis),
                })
                .collect(),
        }
    }

    pub fn prepared_points(&self) -> std::result::Result<Vec<PreparedPoint>, String> {
        self.points
            .iter()
            .map(|p| {
                let basis = p.basis.to_basis()?;
                Ok(PreparedPoint {
                    g: basis.g,
                    basis,
                    continuity_lost: p.continuity_lost,
                    rank_deficient: p.rank_deficient,
                })
            })
            .collect()
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| ToolError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| ToolError::Format {
            path: path.into(),
            message: e.to_string(),
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self).expect("serializable");
        text.push('\n');
        std::fs::write(path, text).map_err(|e| ToolError::io(path, e))
    }
}
