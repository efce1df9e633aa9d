//! Containment and absence certificates over window polynomials.
//!
//! A text's window polynomial `w(x) = prod (x - h_i)` has one root per window
//! fingerprint, multiplicities included. A pattern with fingerprint `h` is
//! contained (at the fingerprint level) iff `w(h) = 0`, certified by the exact
//! quotient `Q` with `w = (x - h) Q`. Otherwise `gcd(w, x - h) = 1` and the
//! Bezout cofactors `(s, t)` with `w s + (x - h) t = 1` certify absence.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{PolyRing, Polynomial, ProductTree};
use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::hashmatch::{fingerprint, window_fingerprints, Corpus, RollingParams, SINGLE_TEXT_ID};

/// Where a window polynomial came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowSource {
    pub document_id: String,
    pub window_len: usize,
    /// [`RollingParams::digest`] of the parameters used.
    pub params_digest: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowPolynomial {
    pub poly: Polynomial,
    pub source: WindowSource,
    pub window_count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BezoutCertificate {
    pub s: Polynomial,
    pub t: Polynomial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateMode {
    Containment,
    Absence,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// `w = (x - h) * quotient`.
    Containment {
        quotient: Polynomial,
    },
    Absence(BezoutCertificate),
}

impl Certificate {
    pub fn mode(&self) -> CertificateMode {
        match self {
            Certificate::Containment { .. } => CertificateMode::Containment,
            Certificate::Absence(_) => CertificateMode::Absence,
        }
    }
}

fn from_fingerprints(
    hashes: &[FieldElement],
    params: &RollingParams,
    document_id: &str,
) -> Result<WindowPolynomial> {
    let ring = PolyRing::new(*params.field());
    let tree = ProductTree::new(&ring, hashes)?;
    Ok(WindowPolynomial {
        poly: tree.root().clone(),
        source: WindowSource {
            document_id: document_id.to_string(),
            window_len: params.window_len(),
            params_digest: params.digest(),
        },
        window_count: hashes.len(),
    })
}

/// `prod (x - h_i)` over the fingerprints of every window of `text`, built
/// with a product tree.
pub fn window_polynomial(text: &[u8], params: &RollingParams) -> Result<WindowPolynomial> {
    if text.len() < params.window_len() {
        return Err(Error::Input(format!(
            "text of length {} has no window of length {}",
            text.len(),
            params.window_len()
        )));
    }
    from_fingerprints(&window_fingerprints(text, params), params, SINGLE_TEXT_ID)
}

/// Window polynomial over all windows of all documents; windows never span
/// documents and documents shorter than the window contribute nothing.
pub fn window_polynomial_for_corpus(
    corpus: &Corpus,
    params: &RollingParams,
) -> Result<WindowPolynomial> {
    let hashes: Vec<FieldElement> = corpus
        .documents()
        .iter()
        .flat_map(|d| window_fingerprints(&d.bytes, params))
        .collect();
    if hashes.is_empty() {
        return Err(Error::Input(format!(
            "no document has a window of length {}",
            params.window_len()
        )));
    }
    from_fingerprints(&hashes, params, "*")
}

fn check_pattern(
    w: &WindowPolynomial,
    params: &RollingParams,
    pattern: &[u8],
) -> Result<FieldElement> {
    if w.source.params_digest != params.digest() {
        return Err(Error::Config(
            "window polynomial was built with different rolling parameters".into(),
        ));
    }
    fingerprint(pattern, params)
}

/// Exact quotient of `w` by `x - h` for the pattern fingerprint `h`.
pub fn prove_containment(
    w: &WindowPolynomial,
    pattern: &[u8],
    params: &RollingParams,
) -> Result<Polynomial> {
    let h = check_pattern(w, params, pattern)?;
    let ring = PolyRing::new(*params.field());
    let (q, r) = ring.divmod(&w.poly, &Polynomial::linear_root(params.field(), h))?;
    if !r.is_zero() {
        return Err(Error::NotContained);
    }
    Ok(q)
}

/// Bezout cofactors proving `gcd(w, x - h) = 1`.
pub fn prove_absence(
    w: &WindowPolynomial,
    pattern: &[u8],
    params: &RollingParams,
) -> Result<BezoutCertificate> {
    let h = check_pattern(w, params, pattern)?;
    let ring = PolyRing::new(*params.field());
    if ring.eval(&w.poly, h).is_zero() {
        return Err(Error::IsContained);
    }
    let x = ring.xgcd(&w.poly, &Polynomial::linear_root(params.field(), h))?;
    debug_assert_eq!(x.g, Polynomial::one());
    Ok(BezoutCertificate { s: x.s, t: x.t })
}

fn absorb_poly(h: &mut Sha256, p: &Polynomial) {
    h.update((p.len() as u64).to_be_bytes());
    for c in p.coeffs() {
        h.update(c.value().to_be_bytes());
    }
}

/// Fiat-Shamir style challenge point: SHA-256 over the seed and every input
/// of the check, reduced modulo p.
pub fn challenge_point(
    ring: &PolyRing,
    w: &Polynomial,
    h: FieldElement,
    cert: &Certificate,
    challenge_seed: &[u8],
) -> FieldElement {
    let mut d = Sha256::new();
    d.update(challenge_seed);
    d.update(ring.field().modulus().to_be_bytes());
    d.update(h.value().to_be_bytes());
    absorb_poly(&mut d, w);
    match cert {
        Certificate::Containment { quotient } => {
            d.update([0u8]);
            absorb_poly(&mut d, quotient);
        }
        Certificate::Absence(b) => {
            d.update([1u8]);
            absorb_poly(&mut d, &b.s);
            absorb_poly(&mut d, &b.t);
        }
    }
    ring.field().reduce_be_bytes(&d.finalize())
}

/// Checks a certificate both coefficient-wise and at a derived challenge point.
///
/// A certificate whose kind disagrees with `mode` is malformed and reported as
/// an input error rather than `false`.
pub fn verify_certificate(
    ring: &PolyRing,
    w: &Polynomial,
    h: FieldElement,
    cert: &Certificate,
    mode: CertificateMode,
    challenge_seed: &[u8],
) -> Result<bool> {
    if cert.mode() != mode {
        return Err(Error::Input(format!(
            "expected a {mode:?} certificate, got {:?}",
            cert.mode()
        )));
    }
    let f = ring.field();
    let linear = Polynomial::linear_root(f, h);
    let r = challenge_point(ring, w, h, cert, challenge_seed);
    let w_r = ring.eval(w, r);
    let lin_r = f.sub(r, h);
    let ok = match cert {
        Certificate::Containment { quotient } => {
            let exact = ring.mul(&linear, quotient) == *w;
            let spot = f.mul(lin_r, ring.eval(quotient, r)) == w_r;
            exact && spot
        }
        Certificate::Absence(BezoutCertificate { s, t }) => {
            let lhs = ring.add(&ring.mul(w, s), &ring.mul(&linear, t));
            let exact = lhs == Polynomial::one();
            let spot = f.add(f.mul(w_r, ring.eval(s, r)), f.mul(lin_r, ring.eval(t, r)))
                == FieldElement::ONE;
            exact && spot
        }
    };
    Ok(ok)
}
