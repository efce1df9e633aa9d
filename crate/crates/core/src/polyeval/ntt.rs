use super::Polynomial;
use crate::field::{FieldElement, PrimeField};

pub(super) fn supports(field: &PrimeField, len: usize) -> bool {
    len.next_power_of_two().trailing_zeros() <= field.two_adicity()
}

/// In-place iterative radix-2 transform. `values.len()` must be a power of two
/// and `root` a primitive root of unity of that order.
fn transform(field: &PrimeField, values: &mut [FieldElement], root: FieldElement) {
    let n = values.len();
    let log_n = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - log_n);
        if i < j {
            values.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let w_len = field.pow(root, (n / len) as u64);
        let half = len / 2;
        let mut twiddles = Vec::with_capacity(half);
        let mut w = FieldElement::ONE;
        for _ in 0..half {
            twiddles.push(w);
            w = field.mul(w, w_len);
        }
        for chunk in values.chunks_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for ((u, v), &tw) in lo.iter_mut().zip(hi.iter_mut()).zip(&twiddles) {
                let t = field.mul(*v, tw);
                *v = field.sub(*u, t);
                *u = field.add(*u, t);
            }
        }
        len <<= 1;
    }
}

pub(super) fn mul(field: &PrimeField, a: &Polynomial, b: &Polynomial) -> Polynomial {
    let result_len = a.len() + b.len() - 1;
    let n = result_len.next_power_of_two();
    let root = field
        .root_of_unity(n as u64)
        .expect("caller checked two-adicity");
    let mut fa = a.coeffs().to_vec();
    let mut fb = b.coeffs().to_vec();
    fa.resize(n, FieldElement::ZERO);
    fb.resize(n, FieldElement::ZERO);
    transform(field, &mut fa, root);
    transform(field, &mut fb, root);
    for (x, &y) in fa.iter_mut().zip(&fb) {
        *x = field.mul(*x, y);
    }
    let inv_root = field.inv(root).expect("roots of unity are nonzero");
    transform(field, &mut fa, inv_root);
    let n_inv = field.inv(field.reduce(n as u64)).expect("n < p");
    fa.truncate(result_len);
    for x in fa.iter_mut() {
        *x = field.mul(*x, n_inv);
    }
    Polynomial::from_coeffs(fa)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transform_matches_direct_dft() {
        let f = PrimeField::goldilocks();
        let n = 16;
        let w = f.root_of_unity(n).unwrap();
        let input: Vec<FieldElement> = (0..n).map(|i| f.reduce(i * i + 3)).collect();
        let mut fast = input.clone();
        transform(&f, &mut fast, w);
        for (k, &got) in fast.iter().enumerate() {
            let direct = input
                .iter()
                .enumerate()
                .fold(FieldElement::ZERO, |acc, (j, &x)| {
                    f.add(acc, f.mul(x, f.pow(w, (j * k) as u64)))
                });
            assert_eq!(got, direct);
        }
    }

    #[test]
    fn support_limits() {
        let f = PrimeField::new_small(97).unwrap();
        assert!(supports(&f, 32));
        assert!(!supports(&f, 33));
    }
}
