use super::{PolyRing, Polynomial};
use crate::error::{Error, Result};
use crate::field::FieldElement;

/// `x^(len-1) * a(1/x)` for `deg a < len`.
fn reverse_padded(a: &Polynomial, len: usize) -> Polynomial {
    let mut c = a.coeffs().to_vec();
    c.resize(len, FieldElement::ZERO);
    c.reverse();
    Polynomial::from_coeffs(c)
}

impl PolyRing {
    pub fn divmod_long(&self, a: &Polynomial, d: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        let f = &self.field;
        let lc = d
            .leading()
            .ok_or_else(|| Error::Domain("division by the zero polynomial".into()))?;
        if a.len() < d.len() {
            return Ok((Polynomial::zero(), a.clone()));
        }
        let lc_inv = f.inv(lc)?;
        let dl = d.len();
        let mut rem = a.coeffs().to_vec();
        let mut q = vec![FieldElement::ZERO; a.len() - dl + 1];
        for i in (0..q.len()).rev() {
            let c = f.mul(rem[i + dl - 1], lc_inv);
            q[i] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &dc) in d.coeffs().iter().enumerate() {
                rem[i + j] = f.sub(rem[i + j], f.mul(c, dc));
            }
        }
        rem.truncate(dl - 1);
        Ok((Polynomial::from_coeffs(q), Polynomial::from_coeffs(rem)))
    }

    /// Power series inverse of `h` modulo `x^n`; `h(0)` must be nonzero.
    pub fn inverse_series(&self, h: &Polynomial, n: usize) -> Result<Polynomial> {
        let f = &self.field;
        let h0 = h.coeff(0);
        if h0.is_zero() {
            return Err(Error::Domain(
                "series with zero constant term has no inverse".into(),
            ));
        }
        let mut g = Polynomial::constant(f.inv(h0)?);
        let two = Polynomial::constant(f.reduce(2));
        let mut prec = 1;
        while prec < n {
            prec = (2 * prec).min(n);
            // g <- g * (2 - h g) mod x^prec
            let hg = self.truncate(&self.mul(&self.truncate(h, prec), &g), prec);
            g = self.truncate(&self.mul(&g, &self.sub(&two, &hg)), prec);
        }
        Ok(g)
    }

    /// Division through the reversed polynomials: `rev(q) = rev(a) / rev(d) mod x^k`.
    pub fn divmod_newton(
        &self,
        a: &Polynomial,
        d: &Polynomial,
    ) -> Result<(Polynomial, Polynomial)> {
        if d.is_zero() {
            return Err(Error::Domain("division by the zero polynomial".into()));
        }
        if a.len() < d.len() {
            return Ok((Polynomial::zero(), a.clone()));
        }
        let k = a.len() - d.len() + 1;
        let inv = self.inverse_series(&reverse_padded(d, d.len()), k)?;
        let rev_a = self.truncate(&reverse_padded(a, a.len()), k);
        let q_rev = self.truncate(&self.mul(&rev_a, &inv), k);
        let q = reverse_padded(&q_rev, k);
        let r = self.truncate(&self.sub(a, &self.mul(&q, d)), d.len() - 1);
        Ok((q, r))
    }
}
