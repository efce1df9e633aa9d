use super::{PolyRing, Polynomial};
use crate::error::{Error, Result};

/// `a * s + b * t = g` with `g` monic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Xgcd {
    pub g: Polynomial,
    pub s: Polynomial,
    pub t: Polynomial,
}

impl PolyRing {
    /// Classical extended Euclid, normalized so the gcd is monic. Quadratic in
    /// the input degrees.
    pub fn xgcd(&self, a: &Polynomial, b: &Polynomial) -> Result<Xgcd> {
        if a.is_zero() && b.is_zero() {
            return Err(Error::Domain("gcd(0, 0) is undefined".into()));
        }
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Polynomial::one(), Polynomial::zero());
        let (mut t0, mut t1) = (Polynomial::zero(), Polynomial::one());
        while !r1.is_zero() {
            let (q, r) = self.divmod(&r0, &r1)?;
            let s = self.sub(&s0, &self.mul(&q, &s1));
            let t = self.sub(&t0, &self.mul(&q, &t1));
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s);
            (t0, t1) = (t1, t);
        }
        let lc_inv = self.field.inv(r0.leading().expect("nonzero gcd"))?;
        Ok(Xgcd {
            g: self.scale(&r0, lc_inv),
            s: self.scale(&s0, lc_inv),
            t: self.scale(&t0, lc_inv),
        })
    }
}
