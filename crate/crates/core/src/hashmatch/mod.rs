//! Rabin fingerprints, rolling updates, and naive / Rabin-Karp matching over
//! multi-document corpora.
//!
//! Every search records exact operation counters in [`MatchCounters`] so the
//! cost of each method can be compared against its closed-form complexity.

mod corpus;

use std::collections::{BTreeMap, HashMap};
use std::ops::AddAssign;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};

pub use corpus::{parse_escaped, Corpus, Document};

/// Smallest prime above the byte range; makes the per-position byte lift injective.
pub const DEFAULT_BASE: u64 = 257;

/// Base, window length and the cached weight of the outgoing byte.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RollingParams {
    field: PrimeField,
    base: FieldElement,
    window_len: usize,
    top_weight: FieldElement,
}

impl RollingParams {
    pub fn new(field: PrimeField, base: u64, window_len: usize) -> Result<Self> {
        if window_len == 0 {
            return Err(Error::Input("window length must be at least 1".into()));
        }
        let base = field.reduce(base);
        if base.is_zero() {
            return Err(Error::Config("rolling base reduces to zero".into()));
        }
        let top_weight = field.pow(base, window_len as u64 - 1);
        Ok(RollingParams {
            field,
            base,
            window_len,
            top_weight,
        })
    }

    pub fn with_default_base(field: PrimeField, window_len: usize) -> Result<Self> {
        Self::new(field, DEFAULT_BASE, window_len)
    }

    /// Same field and base, different window length.
    pub fn with_window_len(&self, window_len: usize) -> Result<Self> {
        Self::new(self.field, self.base.value(), window_len)
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn base(&self) -> FieldElement {
        self.base
    }

    pub fn window_len(&self) -> usize {
        self.window_len
    }

    /// `base^(window_len - 1)`.
    pub fn top_weight(&self) -> FieldElement {
        self.top_weight
    }

    /// Hex SHA-256 over modulus, base and window length (8-byte big-endian each).
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        h.update(self.field.modulus().to_be_bytes());
        h.update(self.base.value().to_be_bytes());
        h.update((self.window_len as u64).to_be_bytes());
        hex_digest(h)
    }
}

pub(crate) fn hex_digest(h: Sha256) -> String {
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

/// `sum window[i] * base^(m-1-i)` evaluated by Horner's rule.
pub fn fingerprint(window: &[u8], params: &RollingParams) -> Result<FieldElement> {
    if window.len() != params.window_len {
        return Err(Error::Input(format!(
            "window has length {}, expected {}",
            window.len(),
            params.window_len
        )));
    }
    Ok(horner_bytes(window, params))
}

fn horner_bytes(bytes: &[u8], params: &RollingParams) -> FieldElement {
    let f = &params.field;
    bytes.iter().fold(FieldElement::ZERO, |acc, &b| {
        f.add(f.mul(acc, params.base), f.reduce(b as u64))
    })
}

/// Slides a fingerprint one byte to the right.
///
/// `hash_old` must be the fingerprint of a window starting with `out_byte`;
/// otherwise the result is meaningless.
#[inline]
pub fn roll(
    hash_old: FieldElement,
    out_byte: u8,
    in_byte: u8,
    params: &RollingParams,
) -> FieldElement {
    let f = &params.field;
    let stripped = f.sub(
        hash_old,
        f.mul(f.reduce(out_byte as u64), params.top_weight),
    );
    f.add(f.mul(params.base, stripped), f.reduce(in_byte as u64))
}

/// Fingerprints of every length-`window_len` window of `text`, by rolling.
pub fn window_fingerprints(text: &[u8], params: &RollingParams) -> Vec<FieldElement> {
    let t = params.window_len;
    if text.len() < t {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(text.len() - t + 1);
    let mut h = horner_bytes(&text[..t], params);
    out.push(h);
    for i in 0..text.len() - t {
        h = roll(h, text[i], text[i + t], params);
        out.push(h);
    }
    out
}

/// Exact operation counts for a search.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchCounters {
    /// Text windows whose fingerprint was produced (from scratch or by rolling).
    pub window_hashes_computed: u64,
    /// Patterns fingerprinted during preprocessing.
    pub pattern_hashes_computed: u64,
    /// Byte-level hashing work: one per byte absorbed or per rolling update.
    pub hash_steps: u64,
    /// Fingerprint-table probes, one per text window.
    pub hash_comparisons: u64,
    /// Individual byte comparisons.
    pub char_comparisons: u64,
    /// (pattern, offset) alignments tried by the naive method.
    pub alignments_checked: u64,
}

impl AddAssign for MatchCounters {
    fn add_assign(&mut self, o: Self) {
        self.window_hashes_computed += o.window_hashes_computed;
        self.pattern_hashes_computed += o.pattern_hashes_computed;
        self.hash_steps += o.hash_steps;
        self.hash_comparisons += o.hash_comparisons;
        self.char_comparisons += o.char_comparisons;
        self.alignments_checked += o.alignments_checked;
    }
}

/// The K short strings being searched for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternSet {
    patterns: Vec<Vec<u8>>,
    uniform_len: Option<usize>,
}

impl PatternSet {
    /// Rejects empty patterns. `uniform_len` is set when all lengths agree.
    pub fn new(patterns: Vec<Vec<u8>>) -> Result<Self> {
        if let Some(i) = patterns.iter().position(|p| p.is_empty()) {
            return Err(Error::Input(format!("pattern {i} is empty")));
        }
        let uniform_len = match patterns.split_first() {
            Some((first, rest)) if rest.iter().all(|p| p.len() == first.len()) => Some(first.len()),
            _ => None,
        };
        Ok(PatternSet {
            patterns,
            uniform_len,
        })
    }

    pub fn empty() -> Self {
        PatternSet {
            patterns: Vec::new(),
            uniform_len: None,
        }
    }

    pub fn patterns(&self) -> &[Vec<u8>] {
        &self.patterns
    }

    pub fn uniform_len(&self) -> Option<usize> {
        self.uniform_len
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Occurrence {
    pub document: String,
    pub offset: usize,
}

/// Per-pattern occurrences plus the counters accumulated while finding them.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchReport {
    /// pattern index -> occurrences sorted by (document, offset). Every pattern
    /// index of the searched set has an entry, possibly empty.
    pub occurrences: BTreeMap<usize, Vec<Occurrence>>,
    pub counters: MatchCounters,
}

impl MatchReport {
    fn for_patterns(k: usize) -> Self {
        MatchReport {
            occurrences: (0..k).map(|i| (i, Vec::new())).collect(),
            counters: MatchCounters::default(),
        }
    }

    /// Whether any pattern occurred anywhere.
    pub fn any_match(&self) -> bool {
        self.occurrences.values().any(|v| !v.is_empty())
    }

    pub fn total_occurrences(&self) -> usize {
        self.occurrences.values().map(Vec::len).sum()
    }

    fn merge(&mut self, other: MatchReport) {
        for (k, v) in other.occurrences {
            self.occurrences.entry(k).or_default().extend(v);
        }
        self.counters += other.counters;
    }

    fn sort(&mut self) {
        for v in self.occurrences.values_mut() {
            v.sort();
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatchAlgorithm {
    Naive,
    RabinKarp,
}

/// Document id used when a single text is searched outside a corpus.
pub const SINGLE_TEXT_ID: &str = "0";

/// Counts compared bytes up to and including the first mismatch.
#[inline]
fn compare_bytes(a: &[u8], b: &[u8], counters: &mut MatchCounters) -> bool {
    for (x, y) in a.iter().zip(b) {
        counters.char_comparisons += 1;
        if x != y {
            return false;
        }
    }
    true
}

/// Every offset where `pattern` occurs in `text`, by direct comparison.
pub fn naive_match(
    text: &[u8],
    pattern: &[u8],
    counters: &mut MatchCounters,
) -> Result<Vec<usize>> {
    if pattern.is_empty() {
        return Err(Error::Input("empty pattern".into()));
    }
    if pattern.len() > text.len() {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for i in 0..=text.len() - pattern.len() {
        counters.alignments_checked += 1;
        if compare_bytes(&text[i..i + pattern.len()], pattern, counters) {
            out.push(i);
        }
    }
    Ok(out)
}

fn naive_doc(doc_id: &str, text: &[u8], patterns: &PatternSet) -> Result<MatchReport> {
    let mut report = MatchReport::for_patterns(patterns.len());
    for (k, p) in patterns.patterns.iter().enumerate() {
        let offsets = naive_match(text, p, &mut report.counters)?;
        report
            .occurrences
            .insert(k, to_occurrences(doc_id, offsets));
    }
    Ok(report)
}

fn to_occurrences(doc_id: &str, offsets: Vec<usize>) -> Vec<Occurrence> {
    offsets
        .into_iter()
        .map(|offset| Occurrence {
            document: doc_id.to_string(),
            offset,
        })
        .collect()
}

/// Rabin-Karp over one text. All patterns must have length `params.window_len()`.
/// Every fingerprint hit is byte-verified before it is reported.
pub fn rabin_karp_match(
    text: &[u8],
    patterns: &PatternSet,
    params: &RollingParams,
) -> Result<MatchReport> {
    let indices: Vec<usize> = (0..patterns.len()).collect();
    let mut report = MatchReport::for_patterns(patterns.len());
    let table = PatternTable::new(patterns, &indices, params, &mut report.counters)?;
    let doc = table.scan(SINGLE_TEXT_ID, text);
    report.merge(doc);
    Ok(report)
}

/// Fingerprints of one group of equal-length patterns; built once, scanned
/// against any number of texts.
struct PatternTable<'a> {
    params: RollingParams,
    patterns: &'a PatternSet,
    table: HashMap<FieldElement, Vec<usize>>,
}

impl<'a> PatternTable<'a> {
    /// `indices` select the group from `patterns`; occurrences are reported
    /// under those indices.
    fn new(
        patterns: &'a PatternSet,
        indices: &[usize],
        params: &RollingParams,
        counters: &mut MatchCounters,
    ) -> Result<Self> {
        let t = params.window_len;
        let mut table: HashMap<FieldElement, Vec<usize>> = HashMap::new();
        for &k in indices {
            let p = &patterns.patterns[k];
            if p.len() != t {
                return Err(Error::Input(format!(
                    "pattern {k} has length {}, window length is {t}",
                    p.len()
                )));
            }
            counters.pattern_hashes_computed += 1;
            counters.hash_steps += t as u64;
            table.entry(horner_bytes(p, params)).or_default().push(k);
        }
        Ok(PatternTable {
            params: *params,
            patterns,
            table,
        })
    }

    fn scan(&self, doc_id: &str, text: &[u8]) -> MatchReport {
        let params = &self.params;
        let t = params.window_len;
        let mut report = MatchReport::default();
        if text.len() < t {
            return report;
        }
        let c = &mut report.counters;
        let mut hits: Vec<(usize, usize)> = Vec::new();
        let mut h = horner_bytes(&text[..t], params);
        c.hash_steps += t as u64;
        let last = text.len() - t;
        for i in 0..=last {
            c.window_hashes_computed += 1;
            c.hash_comparisons += 1;
            if let Some(candidates) = self.table.get(&h) {
                for &k in candidates {
                    if compare_bytes(&text[i..i + t], &self.patterns.patterns[k], c) {
                        hits.push((k, i));
                    } else {
                        log::debug!("fingerprint collision: pattern {k} at {doc_id}:{i}");
                    }
                }
            }
            if i < last {
                h = roll(h, text[i], text[i + t], params);
                c.hash_steps += 1;
            }
        }
        for (k, offset) in hits {
            report.occurrences.entry(k).or_default().push(Occurrence {
                document: doc_id.to_string(),
                offset,
            });
        }
        report
    }
}

/// One table per distinct pattern length, all sharing `params`' field and base.
fn pattern_tables<'a>(
    patterns: &'a PatternSet,
    params: &RollingParams,
    counters: &mut MatchCounters,
) -> Result<Vec<PatternTable<'a>>> {
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (k, p) in patterns.patterns.iter().enumerate() {
        groups.entry(p.len()).or_default().push(k);
    }
    groups
        .into_iter()
        .map(|(len, indices)| {
            let sub_params = if len == params.window_len {
                *params
            } else {
                params.with_window_len(len)?
            };
            PatternTable::new(patterns, &indices, &sub_params, counters)
        })
        .collect()
}

/// Searches every document of `corpus` for every pattern.
///
/// Documents are processed in parallel; the merged report is ordered by
/// (document id, offset). With Rabin-Karp, patterns are fingerprinted once and
/// patterns of differing lengths are searched in one pass per length using
/// `params`' field and base.
pub fn corpus_match(
    corpus: &Corpus,
    patterns: &PatternSet,
    params: &RollingParams,
    algo: MatchAlgorithm,
) -> Result<MatchReport> {
    let mut report = MatchReport::for_patterns(patterns.len());
    let per_doc: Vec<Result<MatchReport>> = match algo {
        MatchAlgorithm::Naive => corpus
            .documents()
            .par_iter()
            .map(|d| naive_doc(&d.id, &d.bytes, patterns))
            .collect(),
        MatchAlgorithm::RabinKarp => {
            let tables = pattern_tables(patterns, params, &mut report.counters)?;
            corpus
                .documents()
                .par_iter()
                .map(|d| {
                    let mut doc = MatchReport::default();
                    for table in &tables {
                        doc.merge(table.scan(&d.id, &d.bytes));
                    }
                    Ok(doc)
                })
                .collect()
        }
    };
    for r in per_doc {
        report.merge(r?);
    }
    report.sort();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params_1e9(window_len: usize) -> RollingParams {
        RollingParams::new(PrimeField::new(1_000_000_007).unwrap(), 256, window_len).unwrap()
    }

    #[test]
    fn fingerprint_examples() {
        let p = params_1e9(3);
        assert_eq!(
            fingerprint(b"abc", &p).unwrap().value(),
            97 * 65536 + 98 * 256 + 99
        );
        assert_eq!(fingerprint(b"abc", &p).unwrap().value(), 6_382_179);
        assert_eq!(fingerprint(&[0, 0, 0], &p).unwrap(), FieldElement::ZERO);
        let p1 = params_1e9(1);
        assert_eq!(fingerprint(b"z", &p1).unwrap().value(), b'z' as u64);
        assert!(matches!(fingerprint(b"ab", &p), Err(Error::Input(_))));
    }

    #[test]
    fn roll_examples() {
        let p = params_1e9(3);
        let h = p.field().reduce(6_382_179);
        assert_eq!(roll(h, b'a', b'd', &p).value(), 6_447_972);
        let hx = fingerprint(b"xxx", &p).unwrap();
        assert_eq!(roll(hx, b'x', b'x', &p), hx);
        let p1 = params_1e9(1);
        assert_eq!(
            roll(p1.field().reduce(b'q' as u64), b'q', b'r', &p1).value(),
            b'r' as u64
        );
    }

    #[test]
    fn params_validation() {
        let f = PrimeField::goldilocks();
        assert!(RollingParams::new(f, 257, 0).is_err());
        assert!(RollingParams::new(PrimeField::new(257).unwrap(), 257, 3).is_err());
        let p = RollingParams::with_default_base(f, 4).unwrap();
        assert_eq!(p.top_weight(), f.pow(f.reduce(257), 3));
        assert_eq!(p.digest().len(), 64);
        assert_ne!(p.digest(), p.with_window_len(5).unwrap().digest());
    }

    #[test]
    fn naive_examples() {
        let mut c = MatchCounters::default();
        assert_eq!(naive_match(b"abcabc", b"abc", &mut c).unwrap(), vec![0, 3]);
        assert!(c.char_comparisons <= 4 * 3);
        assert_eq!(c.alignments_checked, 4);
        assert!(naive_match(b"ab", b"abc", &mut c).unwrap().is_empty());
        assert_eq!(naive_match(b"xyz", b"xyz", &mut c).unwrap(), vec![0]);
        assert!(matches!(
            naive_match(b"abc", b"", &mut c),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn empty_pattern_set_still_counts_windows() {
        let p = params_1e9(3);
        let r = rabin_karp_match(b"abcdef", &PatternSet::empty(), &p).unwrap();
        assert!(r.occurrences.is_empty());
        assert_eq!(r.counters.window_hashes_computed, 4);
        assert_eq!(r.counters.hash_steps, 6);
    }

    #[test]
    fn mixed_lengths_rejected_by_single_pass() {
        let p = params_1e9(3);
        let ps = PatternSet::new(vec![b"abc".to_vec(), b"ab".to_vec()]).unwrap();
        assert_eq!(ps.uniform_len(), None);
        assert!(matches!(
            rabin_karp_match(b"abcabc", &ps, &p),
            Err(Error::Input(_))
        ));
        assert!(PatternSet::new(vec![b"".to_vec()]).is_err());
    }

    #[test]
    fn grouped_corpus_search_handles_mixed_lengths() {
        let p = params_1e9(3);
        let corpus = Corpus::from_texts(vec![b"abcab".to_vec()]).unwrap();
        let ps = PatternSet::new(vec![b"abc".to_vec(), b"ab".to_vec(), b"b".to_vec()]).unwrap();
        let r = corpus_match(&corpus, &ps, &p, MatchAlgorithm::RabinKarp).unwrap();
        let offs = |k: usize| {
            r.occurrences[&k]
                .iter()
                .map(|o| o.offset)
                .collect::<Vec<_>>()
        };
        assert_eq!(offs(0), vec![0]);
        assert_eq!(offs(1), vec![0, 3]);
        assert_eq!(offs(2), vec![1, 4]);
    }

    /// Brute-force search for two distinct 2-byte windows with equal fingerprints mod 97.
    fn collision_pair(params: &RollingParams) -> ([u8; 2], [u8; 2]) {
        let mut seen: HashMap<FieldElement, [u8; 2]> = HashMap::new();
        for a in b'a'..=b'z' {
            for b in b'a'..=b'z' {
                let h = fingerprint(&[a, b], params).unwrap();
                if let Some(&prev) = seen.get(&h) {
                    return (prev, [a, b]);
                }
                seen.insert(h, [a, b]);
            }
        }
        unreachable!("676 windows cannot inject into 97 residues")
    }

    #[test]
    fn collisions_are_never_reported() {
        let field = PrimeField::new_small(97).unwrap();
        let params = RollingParams::with_default_base(field, 2).unwrap();
        let (x, y) = collision_pair(&params);
        assert_ne!(x, y);
        assert_eq!(
            fingerprint(&x, &params).unwrap(),
            fingerprint(&y, &params).unwrap()
        );
        let text = [y[0], y[1], b'-', x[0], x[1]];
        let r =
            rabin_karp_match(&text, &PatternSet::new(vec![x.to_vec()]).unwrap(), &params).unwrap();
        let offs: Vec<usize> = r.occurrences[&0].iter().map(|o| o.offset).collect();
        assert_eq!(offs, vec![3]);
        // The collision was looked at byte-by-byte and rejected.
        assert!(r.counters.char_comparisons >= 3);
    }

    fn small_alphabet_text(max_len: usize) -> impl Strategy<Value = (Vec<u8>, u8)> {
        (2u8..=26).prop_flat_map(move |k| (prop::collection::vec(0..k, 0..max_len), Just(k)))
    }

    proptest! {
        #[test]
        fn rolling_matches_direct_recomputation((text, _) in small_alphabet_text(512), t in 1usize..12) {
            let params = RollingParams::with_default_base(PrimeField::goldilocks(), t).unwrap();
            let text: Vec<u8> = text.iter().map(|c| b'a' + c).collect();
            let rolled = window_fingerprints(&text, &params);
            prop_assert_eq!(rolled.len(), (text.len() + 1).saturating_sub(t));
            for (i, h) in rolled.iter().enumerate() {
                prop_assert_eq!(*h, fingerprint(&text[i..i + t], &params).unwrap());
            }
        }

        #[test]
        fn rabin_karp_agrees_with_naive(
            (text, k) in small_alphabet_text(200),
            t in 1usize..5,
            npat in 0usize..5,
            seed in any::<u64>(),
        ) {
            let text: Vec<u8> = text.iter().map(|c| b'a' + c).collect();
            // Patterns drawn from the text when possible so matches are common.
            let mut patterns = Vec::new();
            let mut s = seed;
            for _ in 0..npat {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                if text.len() >= t && s % 3 != 0 {
                    let at = (s >> 33) as usize % (text.len() - t + 1);
                    patterns.push(text[at..at + t].to_vec());
                } else {
                    patterns.push((0..t).map(|j| b'a' + ((s >> (j * 5)) % k as u64) as u8).collect());
                }
            }
            let ps = PatternSet::new(patterns.clone()).unwrap();
            let field = PrimeField::new_small(97).unwrap();
            let params = RollingParams::with_default_base(field, t).unwrap();
            let rk = rabin_karp_match(&text, &ps, &params).unwrap();
            for (i, p) in patterns.iter().enumerate() {
                let want = naive_match(&text, p, &mut MatchCounters::default()).unwrap();
                let got: Vec<usize> = rk.occurrences[&i].iter().map(|o| o.offset).collect();
                prop_assert_eq!(got, want);
            }
            prop_assert_eq!(rk.counters.window_hashes_computed as usize, (text.len() + 1).saturating_sub(t));
        }
    }
}
