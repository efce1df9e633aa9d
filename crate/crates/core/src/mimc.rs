//! MiMC permutation, Miyaguchi-Preneel compression and byte hashing.
//!
//! The permutation runs `x <- (x + key + c_i)^e` for each round constant and
//! adds the key once more at the end. Constants are derived from a seed with
//! SHA-256 so any party can rebuild them, and [`MimcParams::digest`] pins the
//! whole parameterization for artifact headers.

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};
use crate::hashmatch::hex_digest;

pub const DEFAULT_SEED: &[u8] = b"zkmatch-mimc-v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MimcParams {
    field: PrimeField,
    exponent: u64,
    round_constants: Vec<FieldElement>,
    seed: Vec<u8>,
}

impl MimcParams {
    /// Default parameters over `field` with the default seed.
    pub fn for_field(field: PrimeField) -> Result<Self> {
        Self::from_seed(field, DEFAULT_SEED)
    }

    /// Smallest valid exponent, `2 * ceil(bits / log2(e))` rounds and constants
    /// from `seed`. If `permute(0, 0) == 0` the seed gets a `/n` suffix and
    /// the derivation repeats.
    pub fn from_seed(field: PrimeField, seed: &[u8]) -> Result<Self> {
        let exponent = smallest_exponent(&field)?;
        let rounds = default_rounds(&field, exponent);
        let mut effective = seed.to_vec();
        for attempt in 1u32.. {
            let params = MimcParams {
                field,
                exponent,
                round_constants: derive_round_constants(&field, &effective, rounds),
                seed: effective.clone(),
            };
            if !params
                .permute(FieldElement::ZERO, FieldElement::ZERO)
                .is_zero()
            {
                return Ok(params);
            }
            effective = seed.to_vec();
            effective.extend_from_slice(format!("/{attempt}").as_bytes());
        }
        unreachable!()
    }

    /// Explicit exponent and constants, e.g. for test vectors.
    pub fn with_constants(
        field: PrimeField,
        exponent: u64,
        round_constants: Vec<FieldElement>,
    ) -> Result<Self> {
        if round_constants.is_empty() {
            return Err(Error::Config("MiMC needs at least one round".into()));
        }
        if exponent < 3 || gcd(exponent, field.modulus() - 1) != 1 {
            return Err(Error::Config(format!(
                "exponent {exponent} is not a permutation exponent modulo {}",
                field.modulus()
            )));
        }
        Ok(MimcParams {
            field,
            exponent,
            round_constants,
            seed: Vec::new(),
        })
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn rounds(&self) -> usize {
        self.round_constants.len()
    }

    pub fn round_constants(&self) -> &[FieldElement] {
        &self.round_constants
    }

    /// The seed actually used, after any rotation.
    pub fn seed(&self) -> &[u8] {
        &self.seed
    }

    /// Hex SHA-256 of modulus || exponent || rounds || seed (integers as
    /// 8-byte big-endian).
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.field.modulus().to_be_bytes());
        h.update(self.exponent.to_be_bytes());
        h.update((self.rounds() as u64).to_be_bytes());
        h.update(&self.seed);
        hex_digest(h)
    }

    pub fn permute(&self, x: FieldElement, key: FieldElement) -> FieldElement {
        let f = &self.field;
        let x = self
            .round_constants
            .iter()
            .fold(x, |x, &c| f.pow(f.add(f.add(x, key), c), self.exponent));
        f.add(x, key)
    }

    /// `permute(left, key = right) + left + right`.
    pub fn compress(&self, left: FieldElement, right: FieldElement) -> FieldElement {
        let f = &self.field;
        f.add(f.add(self.permute(left, right), left), right)
    }

    /// Absorbs each byte with [`compress`](Self::compress), starting from the
    /// length of `data` as a field element.
    pub fn hash_bytes(&self, data: &[u8]) -> FieldElement {
        let f = &self.field;
        data.iter().fold(f.reduce(data.len() as u64), |state, &b| {
            self.compress(state, f.reduce(b as u64))
        })
    }

    /// Leaf value used to pad Merkle trees.
    pub fn empty_leaf(&self) -> FieldElement {
        self.compress(FieldElement::ZERO, FieldElement::ZERO)
    }
}

/// Constant `i` is SHA-256(seed || i as 8-byte big-endian) reduced modulo p.
pub fn derive_round_constants(field: &PrimeField, seed: &[u8], rounds: usize) -> Vec<FieldElement> {
    (0..rounds as u64)
        .map(|i| {
            let mut h = Sha256::new();
            h.update(seed);
            h.update(i.to_be_bytes());
            field.reduce_be_bytes(&h.finalize())
        })
        .collect()
}

/// Smallest odd prime `e` with `gcd(e, p - 1) = 1`.
pub fn smallest_exponent(field: &PrimeField) -> Result<u64> {
    let pm1 = field.modulus() - 1;
    (3u64..)
        .step_by(2)
        .take_while(|&e| e < field.modulus())
        .find(|&e| crate::field::is_prime(e) && gcd(e, pm1) == 1)
        .ok_or_else(|| Error::Config(format!("no MiMC exponent for modulus {}", field.modulus())))
}

/// `2 * ceil(bits(p) / log2(e))`.
pub fn default_rounds(field: &PrimeField, exponent: u64) -> usize {
    2 * (field.bits() as f64 / (exponent as f64).log2()).ceil() as usize
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
