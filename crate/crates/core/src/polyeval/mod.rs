//! Univariate polynomials over a prime field and the product-tree machinery
//! built on them: NTT multiplication, Newton division, fast multipoint
//! evaluation, fast interpolation and the extended Euclidean algorithm.
//!
//! [`certificate`] turns these into containment and absence certificates over
//! the polynomial whose roots are the window fingerprints of a text.

pub mod certificate;
mod division;
mod gcd;
mod ntt;
mod tree;

use crate::error::Result;
use crate::field::{FieldElement, PrimeField};

pub use certificate::{
    prove_absence, prove_containment, verify_certificate, window_polynomial,
    window_polynomial_for_corpus, BezoutCertificate, Certificate, CertificateMode,
    WindowPolynomial, WindowSource,
};
pub use gcd::Xgcd;
pub use tree::ProductTree;

/// Coefficients in ascending degree with no trailing zeros; the zero
/// polynomial has no coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<FieldElement>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(FieldElement::ONE)
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn from_coeffs(mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    /// `x - root`.
    pub fn linear_root(field: &PrimeField, root: FieldElement) -> Self {
        Polynomial {
            coeffs: vec![field.neg(root), FieldElement::ONE],
        }
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<FieldElement> {
        self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<FieldElement> {
        self.coeffs.last().copied()
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or(FieldElement::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Some(FieldElement::ONE)
    }
}

/// Schoolbook below this many output coefficients.
pub const DEFAULT_NTT_THRESHOLD: usize = 64;
/// Long division below this divisor degree.
pub const DEFAULT_DIVISION_THRESHOLD: usize = 64;

/// Polynomial arithmetic over one field, with the crossover points between
/// the quadratic and the fast algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PolyRing {
    field: PrimeField,
    ntt_threshold: usize,
    division_threshold: usize,
}

impl PolyRing {
    pub fn new(field: PrimeField) -> Self {
        PolyRing {
            field,
            ntt_threshold: DEFAULT_NTT_THRESHOLD,
            division_threshold: DEFAULT_DIVISION_THRESHOLD,
        }
    }

    pub fn with_thresholds(
        field: PrimeField,
        ntt_threshold: usize,
        division_threshold: usize,
    ) -> Self {
        PolyRing {
            field,
            ntt_threshold,
            division_threshold,
        }
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    pub fn add(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        let f = &self.field;
        let n = a.len().max(b.len());
        Polynomial::from_coeffs((0..n).map(|i| f.add(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn sub(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        let f = &self.field;
        let n = a.len().max(b.len());
        Polynomial::from_coeffs((0..n).map(|i| f.sub(a.coeff(i), b.coeff(i))).collect())
    }

    pub fn neg(&self, a: &Polynomial) -> Polynomial {
        Polynomial::from_coeffs(a.coeffs.iter().map(|&c| self.field.neg(c)).collect())
    }

    pub fn scale(&self, a: &Polynomial, k: FieldElement) -> Polynomial {
        Polynomial::from_coeffs(a.coeffs.iter().map(|&c| self.field.mul(c, k)).collect())
    }

    /// Horner evaluation.
    pub fn eval(&self, a: &Polynomial, x: FieldElement) -> FieldElement {
        let f = &self.field;
        a.coeffs
            .iter()
            .rev()
            .fold(FieldElement::ZERO, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn derivative(&self, a: &Polynomial) -> Polynomial {
        let f = &self.field;
        Polynomial::from_coeffs(
            a.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| f.mul(c, f.reduce(i as u64)))
                .collect(),
        )
    }

    /// Scales to leading coefficient one. The zero polynomial stays zero.
    pub fn make_monic(&self, a: &Polynomial) -> Polynomial {
        match a.leading() {
            None => Polynomial::zero(),
            Some(lc) => self.scale(
                a,
                self.field.inv(lc).expect("leading coefficient is nonzero"),
            ),
        }
    }

    /// Quadratic-time product.
    pub fn mul_schoolbook(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        if a.is_zero() || b.is_zero() {
            return Polynomial::zero();
        }
        let f = &self.field;
        let mut out = vec![FieldElement::ZERO; a.len() + b.len() - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            for (j, &y) in b.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(x, y));
            }
        }
        Polynomial::from_coeffs(out)
    }

    /// Whether a product of this many coefficients goes through the NTT.
    pub fn uses_ntt(&self, result_len: usize) -> bool {
        result_len >= self.ntt_threshold && ntt::supports(&self.field, result_len)
    }

    pub fn mul(&self, a: &Polynomial, b: &Polynomial) -> Polynomial {
        if a.is_zero() || b.is_zero() {
            return Polynomial::zero();
        }
        let result_len = a.len() + b.len() - 1;
        if self.uses_ntt(result_len) {
            ntt::mul(&self.field, a, b)
        } else {
            self.mul_schoolbook(a, b)
        }
    }

    /// `a mod x^n`.
    pub fn truncate(&self, a: &Polynomial, n: usize) -> Polynomial {
        Polynomial::from_coeffs(a.coeffs.iter().take(n).copied().collect())
    }

    /// Quotient and remainder; Newton inversion once the divisor degree
    /// reaches the division threshold, long division otherwise.
    pub fn divmod(&self, a: &Polynomial, d: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        match d.degree() {
            Some(dd) if dd >= self.division_threshold && a.len() > d.len() => {
                self.divmod_newton(a, d)
            }
            _ => self.divmod_long(a, d),
        }
    }

    pub fn rem(&self, a: &Polynomial, d: &Polynomial) -> Result<Polynomial> {
        Ok(self.divmod(a, d)?.1)
    }
}
