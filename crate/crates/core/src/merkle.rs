//! Legal-window filtering and a MiMC Merkle tree over the legal pattern set.
//!
//! Leaves are the sorted, deduplicated windows of a text whose bytes all pass
//! an [`AlphabetPolicy`]. Membership of a candidate pattern is first decided
//! by the hash set; only members get a proof.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::mimc::MimcParams;

/// Byte predicate deciding which windows may enter the legal set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphabetPolicy {
    name: String,
    allowed: [bool; 256],
}

impl AlphabetPolicy {
    pub fn from_predicate(name: &str, pred: impl Fn(u8) -> bool) -> Self {
        let mut allowed = [false; 256];
        for b in 0..=255u8 {
            allowed[b as usize] = pred(b);
        }
        AlphabetPolicy {
            name: name.to_string(),
            allowed,
        }
    }

    /// Unreserved URL characters: ASCII letters, digits, `-`, `.`, `_`, `~`.
    pub fn url() -> Self {
        Self::from_predicate("url", |b| b.is_ascii_alphanumeric() || b"-._~".contains(&b))
    }

    /// Visible ASCII, `!` through `~`.
    pub fn printable() -> Self {
        Self::from_predicate("printable", |b| b.is_ascii_graphic())
    }

    pub fn any() -> Self {
        Self::from_predicate("any", |_| true)
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name {
            "url" => Ok(Self::url()),
            "printable" => Ok(Self::printable()),
            "any" => Ok(Self::any()),
            other => Err(Error::Config(format!("unknown alphabet policy {other:?}"))),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn allows(&self, b: u8) -> bool {
        self.allowed[b as usize]
    }
}

/// Deduplicated legal windows, indexed in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LegalPatternSet {
    patterns: Vec<Vec<u8>>,
    window_len: usize,
    index: HashMap<Vec<u8>, usize>,
}

impl LegalPatternSet {
    fn from_windows<'a>(windows: impl IntoIterator<Item = &'a [u8]>, window_len: usize) -> Self {
        let sorted: BTreeSet<&[u8]> = windows.into_iter().collect();
        let patterns: Vec<Vec<u8>> = sorted.into_iter().map(<[u8]>::to_vec).collect();
        let index = patterns
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i))
            .collect();
        LegalPatternSet {
            patterns,
            window_len,
            index,
        }
    }

    /// Legal windows of several texts together. Windows never span texts.
    pub fn from_texts<'a>(
        texts: impl IntoIterator<Item = &'a [u8]>,
        window_len: usize,
        policy: &AlphabetPolicy,
    ) -> Result<Self> {
        if window_len == 0 {
            return Err(Error::Input("window length must be at least 1".into()));
        }
        let texts: Vec<&[u8]> = texts.into_iter().collect();
        let windows = texts
            .iter()
            .flat_map(|t| legal_windows(t, window_len, policy));
        Ok(Self::from_windows(windows, window_len))
    }

    pub fn patterns(&self) -> &[Vec<u8>] {
        &self.patterns
    }

    pub fn window_len(&self) -> usize {
        self.window_len
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn position(&self, pattern: &[u8]) -> Option<usize> {
        self.index.get(pattern).copied()
    }

    /// Expected O(1) membership test.
    pub fn contains(&self, pattern: &[u8]) -> bool {
        self.index.contains_key(pattern)
    }
}

fn legal_windows<'a>(
    text: &'a [u8],
    t: usize,
    policy: &'a AlphabetPolicy,
) -> impl Iterator<Item = &'a [u8]> + 'a {
    // run = number of consecutive allowed bytes ending at i.
    let mut run = 0usize;
    text.iter().enumerate().filter_map(move |(i, &b)| {
        run = if policy.allows(b) { run + 1 } else { 0 };
        (run >= t).then(|| &text[i + 1 - t..=i])
    })
}

/// All length-`window_len` windows of `text` made only of allowed bytes.
pub fn filter_windows(
    text: &[u8],
    window_len: usize,
    policy: &AlphabetPolicy,
) -> Result<LegalPatternSet> {
    LegalPatternSet::from_texts([text], window_len, policy)
}

pub fn set_contains(set: &LegalPatternSet, pattern: &[u8]) -> bool {
    set.contains(pattern)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MerkleTree {
    depth: usize,
    /// Row 0 holds the padded leaves, the last row the root.
    levels: Vec<Vec<FieldElement>>,
    leaf_count: usize,
    build_compressions: u64,
}

impl MerkleTree {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn root(&self) -> FieldElement {
        self.levels[self.depth][0]
    }

    pub fn leaf_count(&self) -> usize {
        self.leaf_count
    }

    pub fn levels(&self) -> &[Vec<FieldElement>] {
        &self.levels
    }

    /// Compression calls spent building the tree, leaf hashing included.
    pub fn build_compressions(&self) -> u64 {
        self.build_compressions
    }
}

/// Hashes every pattern into a leaf, pads with `compress(0, 0)` to a power of
/// two (at least two leaves) and folds pairs up to the root.
pub fn build_tree(set: &LegalPatternSet, mimc: &MimcParams) -> Result<MerkleTree> {
    if set.is_empty() {
        return Err(Error::Build(
            "cannot build a Merkle tree over an empty set".into(),
        ));
    }
    let padded = set.len().next_power_of_two().max(2);
    let depth = padded.trailing_zeros() as usize;
    let mut leaves: Vec<FieldElement> = set
        .patterns
        .par_iter()
        .map(|p| mimc.hash_bytes(p))
        .collect();
    let mut compressions: u64 = set.patterns.iter().map(|p| p.len() as u64).sum();
    if padded > leaves.len() {
        leaves.resize(padded, mimc.empty_leaf());
        compressions += 1;
    }
    let mut levels = Vec::with_capacity(depth + 1);
    levels.push(leaves);
    for _ in 0..depth {
        let below = levels.last().expect("non-empty");
        let next: Vec<FieldElement> = below
            .par_chunks(2)
            .map(|c| mimc.compress(c[0], c[1]))
            .collect();
        compressions += next.len() as u64;
        levels.push(next);
    }
    Ok(MerkleTree {
        depth,
        levels,
        leaf_count: set.len(),
        build_compressions: compressions,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MerkleProof {
    pub leaf_bytes: Vec<u8>,
    pub siblings: Vec<FieldElement>,
    /// `false`: the running node is a left child and its sibling sits to the right.
    pub directions: Vec<bool>,
    pub root: FieldElement,
}

impl MerkleProof {
    pub fn depth(&self) -> usize {
        self.siblings.len()
    }
}

/// Sibling path for a member; direction bit `j` is bit `j` of the leaf index.
pub fn prove_membership(
    tree: &MerkleTree,
    set: &LegalPatternSet,
    pattern: &[u8],
) -> Result<MerkleProof> {
    let index = set.position(pattern).ok_or(Error::NotMember)?;
    if tree.leaf_count != set.len() {
        return Err(Error::Input("tree was not built from this set".into()));
    }
    let mut siblings = Vec::with_capacity(tree.depth);
    let mut directions = Vec::with_capacity(tree.depth);
    let mut i = index;
    for level in &tree.levels[..tree.depth] {
        siblings.push(level[i ^ 1]);
        directions.push(i & 1 == 1);
        i >>= 1;
    }
    Ok(MerkleProof {
        leaf_bytes: pattern.to_vec(),
        siblings,
        directions,
        root: tree.root(),
    })
}

/// Recomputes the root from the leaf and path; returns whether it equals
/// `root` and how many path compressions that took. A proof naming a
/// different root than the trusted one is rejected.
pub fn verify_membership_counted(
    root: FieldElement,
    proof: &MerkleProof,
    mimc: &MimcParams,
) -> Result<(bool, usize)> {
    if proof.siblings.len() != proof.directions.len() {
        return Err(Error::Input(format!(
            "proof has {} siblings but {} direction bits",
            proof.siblings.len(),
            proof.directions.len()
        )));
    }
    if proof.siblings.is_empty() {
        return Err(Error::Input("proof has no siblings".into()));
    }
    let mut node = mimc.hash_bytes(&proof.leaf_bytes);
    let mut calls = 0;
    for (&sib, &is_right) in proof.siblings.iter().zip(&proof.directions) {
        node = if is_right {
            mimc.compress(sib, node)
        } else {
            mimc.compress(node, sib)
        };
        calls += 1;
    }
    Ok((node == root && proof.root == root, calls))
}

pub fn verify_membership(
    root: FieldElement,
    proof: &MerkleProof,
    mimc: &MimcParams,
) -> Result<bool> {
    verify_membership_counted(root, proof, mimc).map(|(ok, _)| ok)
}
