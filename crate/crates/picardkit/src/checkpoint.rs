//! JSON checkpoint of the rank pipeline so it can resume across runs.

use std::fs;
use std::path::Path;

use picardkit_core::lattice::{AlgorithmB, CertificateKind, RankCertificate, Witness};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::formats::{matrix_from_json, matrix_to_json};
use crate::report::MinorDto;

pub const CHECKPOINT_SCHEMA: &str = "picardkit.algorithm-b/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Checkpoint {
    pub schema: String,
    pub inputs_digest: String,
    pub p: u32,
    pub v_mu: u64,
    pub lower: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub best: Option<MinorDto>,
    pub history: Vec<u64>,
}

pub fn minor_dto(c: &RankCertificate) -> Option<MinorDto> {
    match &c.witness {
        Witness::Minor { labels, partners, matrix } => {
            Some(MinorDto { labels: labels.clone(), partners: partners.clone(), matrix: matrix_to_json(matrix) })
        }
        Witness::Tate { .. } => None,
    }
}

impl Checkpoint {
    pub fn from_state(b: &AlgorithmB) -> Self {
        Checkpoint {
            schema: CHECKPOINT_SCHEMA.to_string(),
            inputs_digest: b.inputs_digest.clone(),
            p: b.p,
            v_mu: b.v_mu,
            lower: b.lower(),
            best: b.best.as_ref().and_then(minor_dto),
            history: b.history.clone(),
        }
    }

    /// Rebuild the state; the stored certificate is re-verified.
    pub fn to_state(&self) -> Result<AlgorithmB, CliError> {
        if self.schema != CHECKPOINT_SCHEMA {
            return Err(CliError::Invalid(format!("checkpoint schema {:?} is not {CHECKPOINT_SCHEMA}", self.schema)));
        }
        let mut b = AlgorithmB::new(self.p, self.v_mu, self.inputs_digest.clone());
        if let Some(m) = &self.best {
            let cert = RankCertificate {
                kind: CertificateKind::Lower,
                value: self.lower,
                witness: Witness::Minor {
                    labels: m.labels.clone(),
                    partners: m.partners.clone(),
                    matrix: matrix_from_json(&m.matrix)?,
                },
            };
            cert.verify().map_err(|e| CliError::Invalid(format!("checkpoint: {e}")))?;
            b.best = Some(cert);
        } else if self.lower != 0 {
            return Err(CliError::Invalid(String::from("checkpoint claims a lower bound without a certificate")));
        }
        b.history = self.history.clone();
        Ok(b)
    }

    pub fn load(path: &Path) -> Result<Option<Self>, CliError> {
        if !path.exists() {
            return Ok(None);
        }
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map(Some).map_err(|e| CliError::Invalid(format!("checkpoint: {e}")))
    }

    /// Write to a sibling temporary file, then rename over `path`.
    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        let tmp = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_string_pretty(self).expect("checkpoint serializes"))?;
        fs::rename(&tmp, path)?;
        Ok(())
    }
}
