//! Privacy-preserving substring matching toolkit.
//!
//! Rolling-hash search over corpora, MiMC-Merkle commitments to the legal
//! windows of a text, product-tree polynomial containment and absence
//! certificates, and a constraint-count model of the matching circuits.

pub mod artifact;
pub mod circuitmodel;
pub mod error;
pub mod field;
pub mod hashmatch;
pub mod merkle;
pub mod mimc;
pub mod polyeval;
pub mod workload;

pub use error::{Error, Result};
pub use field::{FieldElement, PrimeField};
pub use hashmatch::{
    corpus_match, fingerprint, naive_match, rabin_karp_match, roll, Corpus, MatchAlgorithm,
    MatchCounters, MatchReport, PatternSet, RollingParams,
};
pub use merkle::{AlphabetPolicy, LegalPatternSet, MerkleProof, MerkleTree};
pub use mimc::MimcParams;
pub use polyeval::{
    BezoutCertificate, Certificate, CertificateMode, PolyRing, Polynomial, ProductTree,
    WindowPolynomial,
};
