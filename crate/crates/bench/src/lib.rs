//! Fixed-seed fixtures shared by the criterion benches.

use zkmatch_core::merkle::build_tree;
use zkmatch_core::workload::{
    distinct_elements, lowercase, match_workload, random_poly, random_text, rng,
};
use zkmatch_core::{
    AlphabetPolicy, Corpus, FieldElement, LegalPatternSet, MerkleTree, MimcParams, PatternSet,
    Polynomial, PrimeField, RollingParams,
};

pub const DOCS: usize = 4;
pub const PATTERNS: usize = 8;
pub const WINDOW: usize = 8;

pub struct Matching {
    pub corpus: Corpus,
    pub patterns: PatternSet,
    pub params: RollingParams,
}

pub fn matching(doc_len: usize) -> Matching {
    let (corpus, patterns) = match_workload(
        doc_len as u64,
        DOCS,
        doc_len,
        PATTERNS,
        WINDOW,
        &lowercase(4),
    )
    .expect("valid workload");
    let params =
        RollingParams::with_default_base(PrimeField::goldilocks(), WINDOW).expect("valid params");
    Matching {
        corpus,
        patterns,
        params,
    }
}

/// `n` distinct points and a polynomial of degree `n - 1`.
pub fn points_and_poly(n: usize) -> (Vec<FieldElement>, Polynomial) {
    let field = PrimeField::goldilocks();
    let mut g = rng(n as u64);
    let points = distinct_elements(&mut g, &field, n);
    let f = random_poly(&mut g, &field, n.saturating_sub(1));
    (points, f)
}

pub struct Commitment {
    pub text: Vec<u8>,
    pub set: LegalPatternSet,
    pub tree: MerkleTree,
    pub mimc: MimcParams,
}

pub fn commitment(text_len: usize) -> Commitment {
    let text = random_text(&mut rng(text_len as u64), text_len, &lowercase(26));
    let set = LegalPatternSet::from_texts([text.as_slice()], WINDOW, &AlphabetPolicy::printable())
        .expect("valid window length");
    let mimc = MimcParams::for_field(PrimeField::goldilocks()).expect("default parameters");
    let tree = build_tree(&set, &mimc).expect("non-empty set");
    Commitment {
        text,
        set,
        tree,
        mimc,
    }
}
