//! JSON files exchanged between prover and verifier: match reports, Merkle
//! commitments, membership proofs and polynomial certificates.
//!
//! Field elements are fixed-width lowercase hex, byte strings are plain hex.
//! Every file carries `schema_version` and an echo of the configuration that
//! produced it.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};
use crate::hashmatch::{
    hex_digest, MatchAlgorithm, MatchCounters, MatchReport, Occurrence, PatternSet, RollingParams,
};
use crate::merkle::{MerkleProof, MerkleTree};
use crate::mimc::MimcParams;
use crate::polyeval::{
    BezoutCertificate, Certificate, CertificateMode, Polynomial, WindowPolynomial,
};

pub const SCHEMA_VERSION: u32 = 1;

/// Challenge seed used when the caller does not pick one.
pub const DEFAULT_CHALLENGE_SEED: &[u8] = b"zkmatch-challenge-v1";

/// Flag name to value, as given on the command line.
pub type ConfigEcho = BTreeMap<String, String>;

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("artifact types serialize");
    s.push('\n');
    s
}

/// Parses any artifact and rejects unknown schema versions.
pub fn from_json<T: DeserializeOwned + Versioned>(text: &str) -> Result<T> {
    let value: T =
        serde_json::from_str(text).map_err(|e| Error::Input(format!("malformed artifact: {e}")))?;
    if value.schema_version() != SCHEMA_VERSION {
        return Err(Error::Input(format!(
            "unsupported schema_version {} (expected {SCHEMA_VERSION})",
            value.schema_version()
        )));
    }
    Ok(value)
}

pub trait Versioned {
    fn schema_version(&self) -> u32;
}

macro_rules! versioned {
    ($($t:ty),*) => {
        $(impl Versioned for $t {
            fn schema_version(&self) -> u32 {
                self.schema_version
            }
        })*
    };
}

versioned!(MatchReportFile, CommitmentFile, ProofFile, CertificateFile);

/// A prime field for a modulus read back from a file.
pub fn field_for_modulus(modulus: u64) -> Result<PrimeField> {
    if modulus >= crate::field::MIN_BYTE_MODULUS {
        PrimeField::new(modulus)
    } else {
        PrimeField::new_small(modulus)
    }
}

fn decode_element(field: &PrimeField, s: &str, what: &str) -> Result<FieldElement> {
    field
        .from_hex(s)
        .map_err(|e| Error::Input(format!("{what}: {e}")))
}

fn encode_poly(field: &PrimeField, p: &Polynomial) -> Vec<String> {
    p.coeffs().iter().map(|&c| field.to_hex(c)).collect()
}

fn decode_poly(field: &PrimeField, coeffs: &[String], what: &str) -> Result<Polynomial> {
    let cs = coeffs
        .iter()
        .map(|c| decode_element(field, c, what))
        .collect::<Result<Vec<_>>>()?;
    Ok(Polynomial::from_coeffs(cs))
}

fn decode_bytes(s: &str, what: &str) -> Result<Vec<u8>> {
    hex::decode(s).map_err(|e| Error::Input(format!("{what}: {e}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternMatches {
    pub index: usize,
    pub pattern: String,
    pub occurrences: Vec<Occurrence>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchReportFile {
    pub schema_version: u32,
    pub algorithm: MatchAlgorithm,
    pub documents: usize,
    pub any_match: bool,
    pub total_occurrences: usize,
    pub patterns: Vec<PatternMatches>,
    pub counters: MatchCounters,
    pub config: ConfigEcho,
}

impl MatchReportFile {
    pub fn new(
        report: &MatchReport,
        patterns: &PatternSet,
        algorithm: MatchAlgorithm,
        documents: usize,
        config: ConfigEcho,
    ) -> Self {
        let patterns = patterns
            .patterns()
            .iter()
            .enumerate()
            .map(|(index, p)| PatternMatches {
                index,
                pattern: hex::encode(p),
                occurrences: report.occurrences.get(&index).cloned().unwrap_or_default(),
            })
            .collect();
        MatchReportFile {
            schema_version: SCHEMA_VERSION,
            algorithm,
            documents,
            any_match: report.any_match(),
            total_occurrences: report.total_occurrences(),
            patterns,
            counters: report.counters,
            config,
        }
    }
}

/// Binds the public parameters a Merkle commitment depends on.
pub fn merkle_params_fingerprint(mimc: &MimcParams, policy: &str, window_len: usize) -> String {
    let mut h = Sha256::new();
    h.update(mimc.field().modulus().to_be_bytes());
    h.update(mimc.digest().as_bytes());
    h.update((policy.len() as u64).to_be_bytes());
    h.update(policy.as_bytes());
    h.update((window_len as u64).to_be_bytes());
    hex_digest(h)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommitmentHeader {
    pub field_modulus: u64,
    pub mimc_fingerprint: String,
    pub mimc_seed: String,
    pub policy: String,
    pub window_len: usize,
    pub depth: usize,
    pub leaf_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CommitmentFile {
    pub schema_version: u32,
    pub header: CommitmentHeader,
    pub params_fingerprint: String,
    pub root: String,
    pub config: ConfigEcho,
}

impl CommitmentFile {
    pub fn new(
        tree: &MerkleTree,
        mimc: &MimcParams,
        policy: &str,
        window_len: usize,
        config: ConfigEcho,
    ) -> Self {
        CommitmentFile {
            schema_version: SCHEMA_VERSION,
            header: CommitmentHeader {
                field_modulus: mimc.field().modulus(),
                mimc_fingerprint: mimc.digest(),
                mimc_seed: hex::encode(mimc.seed()),
                policy: policy.to_string(),
                window_len,
                depth: tree.depth(),
                leaf_count: tree.leaf_count(),
            },
            params_fingerprint: merkle_params_fingerprint(mimc, policy, window_len),
            root: mimc.field().to_hex(tree.root()),
            config,
        }
    }

    /// Rebuilds the MiMC instance from the header and checks it against the
    /// recorded fingerprints.
    pub fn mimc(&self) -> Result<MimcParams> {
        let h = &self.header;
        let field = field_for_modulus(h.field_modulus)?;
        let mimc = MimcParams::from_seed(field, &decode_bytes(&h.mimc_seed, "mimc_seed")?)?;
        if mimc.digest() != h.mimc_fingerprint
            || merkle_params_fingerprint(&mimc, &h.policy, h.window_len) != self.params_fingerprint
        {
            return Err(Error::Config(
                "commitment header does not match its fingerprints".into(),
            ));
        }
        Ok(mimc)
    }

    pub fn root(&self) -> Result<FieldElement> {
        let field = field_for_modulus(self.header.field_modulus)?;
        decode_element(&field, &self.root, "root")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProofFile {
    pub schema_version: u32,
    pub pattern: String,
    pub siblings: Vec<String>,
    pub directions: Vec<u8>,
    pub root: String,
    pub params_fingerprint: String,
    pub config: ConfigEcho,
}

impl ProofFile {
    pub fn new(
        proof: &MerkleProof,
        field: &PrimeField,
        params_fingerprint: &str,
        config: ConfigEcho,
    ) -> Self {
        ProofFile {
            schema_version: SCHEMA_VERSION,
            pattern: hex::encode(&proof.leaf_bytes),
            siblings: proof.siblings.iter().map(|&s| field.to_hex(s)).collect(),
            directions: proof.directions.iter().map(|&d| d as u8).collect(),
            root: field.to_hex(proof.root),
            params_fingerprint: params_fingerprint.to_string(),
            config,
        }
    }

    pub fn to_proof(&self, field: &PrimeField) -> Result<MerkleProof> {
        let directions = self
            .directions
            .iter()
            .map(|&d| match d {
                0 => Ok(false),
                1 => Ok(true),
                other => Err(Error::Input(format!(
                    "direction bit must be 0 or 1, got {other}"
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MerkleProof {
            leaf_bytes: decode_bytes(&self.pattern, "pattern")?,
            siblings: self
                .siblings
                .iter()
                .map(|s| decode_element(field, s, "sibling"))
                .collect::<Result<_>>()?,
            directions,
            root: decode_element(field, &self.root, "root")?,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub schema_version: u32,
    pub mode: CertificateMode,
    pub h: String,
    pub field_modulus: u64,
    pub base: u64,
    pub window_len: usize,
    pub rolling_params_fingerprint: String,
    pub challenge_seed: String,
    pub document_id: String,
    pub window_count: usize,
    pub window_polynomial: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<Vec<String>>,
    pub config: ConfigEcho,
}

/// A certificate file decoded into library types.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecodedCertificate {
    pub window_polynomial: Polynomial,
    pub h: FieldElement,
    pub certificate: Certificate,
    pub challenge_seed: Vec<u8>,
}

impl CertificateFile {
    pub fn new(
        w: &WindowPolynomial,
        h: FieldElement,
        cert: &Certificate,
        params: &RollingParams,
        challenge_seed: &[u8],
        config: ConfigEcho,
    ) -> Self {
        let f = params.field();
        let (quotient, s, t) = match cert {
            Certificate::Containment { quotient } => (Some(encode_poly(f, quotient)), None, None),
            Certificate::Absence(b) => {
                (None, Some(encode_poly(f, &b.s)), Some(encode_poly(f, &b.t)))
            }
        };
        CertificateFile {
            schema_version: SCHEMA_VERSION,
            mode: cert.mode(),
            h: f.to_hex(h),
            field_modulus: f.modulus(),
            base: params.base().value(),
            window_len: params.window_len(),
            rolling_params_fingerprint: params.digest(),
            challenge_seed: hex::encode(challenge_seed),
            document_id: w.source.document_id.clone(),
            window_count: w.window_count,
            window_polynomial: encode_poly(f, &w.poly),
            quotient,
            s,
            t,
            config,
        }
    }

    /// Rolling parameters as recorded in the file.
    pub fn rolling_params(&self) -> Result<RollingParams> {
        RollingParams::new(
            field_for_modulus(self.field_modulus)?,
            self.base,
            self.window_len,
        )
    }

    pub fn decode(&self) -> Result<DecodedCertificate> {
        let f = field_for_modulus(self.field_modulus)?;
        let certificate = match (self.mode, &self.quotient, &self.s, &self.t) {
            (CertificateMode::Containment, Some(q), None, None) => Certificate::Containment {
                quotient: decode_poly(&f, q, "quotient")?,
            },
            (CertificateMode::Absence, None, Some(s), Some(t)) => {
                Certificate::Absence(BezoutCertificate {
                    s: decode_poly(&f, s, "s")?,
                    t: decode_poly(&f, t, "t")?,
                })
            }
            _ => {
                return Err(Error::Input(format!(
                    "{:?} certificate has the wrong set of polynomials",
                    self.mode
                )))
            }
        };
        Ok(DecodedCertificate {
            window_polynomial: decode_poly(&f, &self.window_polynomial, "window_polynomial")?,
            h: decode_element(&f, &self.h, "h")?,
            certificate,
            challenge_seed: decode_bytes(&self.challenge_seed, "challenge_seed")?,
        })
    }
}
