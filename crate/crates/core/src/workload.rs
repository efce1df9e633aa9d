//! Seeded synthetic inputs for benchmarks and sweeps.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::field::{FieldElement, PrimeField};
use crate::hashmatch::{Corpus, PatternSet};
use crate::polyeval::Polynomial;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The first `k` lowercase letters, `1 <= k <= 26`.
pub fn lowercase(k: usize) -> Vec<u8> {
    (b'a'..=b'z').take(k.clamp(1, 26)).collect()
}

pub fn random_text(rng: &mut impl Rng, len: usize, alphabet: &[u8]) -> Vec<u8> {
    (0..len)
        .map(|_| *alphabet.choose(rng).expect("non-empty alphabet"))
        .collect()
}

/// `docs` documents of `doc_len` bytes and `k` patterns of length `t`, about
/// half of them copied from document windows.
pub fn match_workload(
    seed: u64,
    docs: usize,
    doc_len: usize,
    k: usize,
    t: usize,
    alphabet: &[u8],
) -> Result<(Corpus, PatternSet)> {
    let mut g = rng(seed);
    let texts: Vec<Vec<u8>> = (0..docs)
        .map(|_| random_text(&mut g, doc_len, alphabet))
        .collect();
    let patterns = (0..k)
        .map(|_| {
            if g.gen_bool(0.5) && doc_len >= t {
                let d = &texts[g.gen_range(0..docs)];
                let i = g.gen_range(0..=doc_len - t);
                d[i..i + t].to_vec()
            } else {
                random_text(&mut g, t, alphabet)
            }
        })
        .collect();
    Ok((Corpus::from_texts(texts)?, PatternSet::new(patterns)?))
}

pub fn random_element(rng: &mut impl Rng, field: &PrimeField) -> FieldElement {
    field.reduce(rng.gen_range(0..field.modulus()))
}

/// `n` pairwise distinct field elements; `n` must not exceed the field size.
pub fn distinct_elements(rng: &mut impl Rng, field: &PrimeField, n: usize) -> Vec<FieldElement> {
    let mut seen = std::collections::HashSet::with_capacity(n);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x = random_element(rng, field);
        if seen.insert(x) {
            out.push(x);
        }
    }
    out
}

/// A polynomial of exactly degree `deg`.
pub fn random_poly(rng: &mut impl Rng, field: &PrimeField, deg: usize) -> Polynomial {
    let mut c: Vec<FieldElement> = (0..deg).map(|_| random_element(rng, field)).collect();
    c.push(field.reduce(rng.gen_range(1..field.modulus())));
    Polynomial::from_coeffs(c)
}
