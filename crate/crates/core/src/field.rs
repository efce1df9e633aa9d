//! Prime-field arithmetic over a runtime-configured 64-bit modulus.
//!
//! Elements are plain residues; every operation goes through a [`PrimeField`]
//! context that carries the modulus. The default field is the 64-bit prime
//! `2^64 - 2^32 + 1`, whose two-adicity of 32 admits power-of-two NTTs, and it
//! gets a dedicated reduction path. Any other prime uses `u128` remainder.

use std::cell::Cell;
use std::fmt;

use crate::error::{Error, Result};

/// `2^64 - 2^32 + 1`.
pub const DEFAULT_MODULUS: u64 = 0xffff_ffff_0000_0001;

const EPSILON: u64 = 0xffff_ffff;

/// Smallest modulus that embeds every byte value plus one separator.
pub const MIN_BYTE_MODULUS: u64 = 257;

thread_local! {
    static MUL_COUNT: Cell<u64> = const { Cell::new(0) };
}

/// Number of field multiplications performed on this thread since the last reset.
pub fn mul_count() -> u64 {
    MUL_COUNT.with(|c| c.get())
}

pub fn reset_mul_count() {
    MUL_COUNT.with(|c| c.set(0));
}

/// Runs `f` and returns its result together with the number of field
/// multiplications it performed on the current thread.
pub fn count_muls<R>(f: impl FnOnce() -> R) -> (R, u64) {
    let before = mul_count();
    let out = f();
    (out, mul_count() - before)
}

/// A fully reduced residue. Only meaningful together with the field it came from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement(u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    #[inline]
    pub fn value(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Reduction {
    Goldilocks,
    Generic,
}

/// Field parameters: the prime modulus, its two-adicity and a multiplicative generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    modulus: u64,
    two_adicity: u32,
    generator: u64,
    reduction: Reduction,
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField::goldilocks()
    }
}

impl PrimeField {
    /// The default 64-bit field.
    pub fn goldilocks() -> Self {
        PrimeField {
            modulus: DEFAULT_MODULUS,
            two_adicity: 32,
            generator: 7,
            reduction: Reduction::Goldilocks,
        }
    }

    /// A field large enough to embed bytes injectively (modulus >= 257).
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus < MIN_BYTE_MODULUS {
            return Err(Error::Config(format!(
                "modulus {modulus} is below {MIN_BYTE_MODULUS} and cannot embed a byte"
            )));
        }
        Self::new_small(modulus)
    }

    /// Any odd prime modulus, including ones too small to embed bytes
    /// injectively. Used for exhaustive tests over tiny fields.
    pub fn new_small(modulus: u64) -> Result<Self> {
        if modulus == DEFAULT_MODULUS {
            return Ok(Self::goldilocks());
        }
        if modulus < 3 || !is_prime(modulus) {
            return Err(Error::Config(format!(
                "modulus {modulus} is not an odd prime"
            )));
        }
        let two_adicity = (modulus - 1).trailing_zeros();
        let generator = find_generator(modulus);
        Ok(PrimeField {
            modulus,
            two_adicity,
            generator,
            reduction: Reduction::Generic,
        })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn two_adicity(&self) -> u32 {
        self.two_adicity
    }

    pub fn generator(&self) -> FieldElement {
        FieldElement(self.generator)
    }

    /// Bit length of the modulus.
    pub fn bits(&self) -> u32 {
        64 - self.modulus.leading_zeros()
    }

    /// Width in hex digits of the canonical serialization.
    pub fn hex_width(&self) -> usize {
        self.bits().div_ceil(4) as usize
    }

    /// Accepts `value` only if it is already reduced.
    pub fn element(&self, value: u64) -> Result<FieldElement> {
        if value >= self.modulus {
            return Err(Error::Input(format!(
                "{value} is not reduced modulo {}",
                self.modulus
            )));
        }
        Ok(FieldElement(value))
    }

    #[inline]
    pub fn reduce(&self, value: u64) -> FieldElement {
        FieldElement(value % self.modulus)
    }

    #[inline]
    pub fn reduce_u128(&self, value: u128) -> FieldElement {
        match self.reduction {
            Reduction::Goldilocks => FieldElement(reduce_goldilocks(value)),
            Reduction::Generic => FieldElement((value % self.modulus as u128) as u64),
        }
    }

    /// Reduces a big-endian byte string interpreted as an unsigned integer.
    pub fn reduce_be_bytes(&self, bytes: &[u8]) -> FieldElement {
        let p = self.modulus as u128;
        let mut acc: u128 = 0;
        for &b in bytes {
            acc = ((acc << 8) | b as u128) % p;
        }
        FieldElement(acc as u64)
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        let (s, carry) = a.0.overflowing_add(b.0);
        if carry || s >= self.modulus {
            FieldElement(s.wrapping_sub(self.modulus))
        } else {
            FieldElement(s)
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 >= b.0 {
            FieldElement(a.0 - b.0)
        } else {
            FieldElement(a.0 + (self.modulus - b.0))
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElement) -> FieldElement {
        if a.0 == 0 {
            a
        } else {
            FieldElement(self.modulus - a.0)
        }
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        MUL_COUNT.with(|c| c.set(c.get() + 1));
        self.reduce_u128(a.0 as u128 * b.0 as u128)
    }

    #[inline]
    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    /// Square-and-multiply.
    pub fn pow(&self, a: FieldElement, mut e: u64) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            e >>= 1;
            if e > 0 {
                base = self.square(base);
            }
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::Domain("zero has no inverse".into()));
        }
        let (mut r0, mut r1) = (self.modulus as i128, a.0 as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        let p = self.modulus as i128;
        Ok(FieldElement(t0.rem_euclid(p) as u64))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// A primitive root of unity of the given power-of-two order.
    pub fn root_of_unity(&self, order: u64) -> Result<FieldElement> {
        if order == 0 || !order.is_power_of_two() {
            return Err(Error::Input(format!(
                "root order {order} is not a power of two"
            )));
        }
        let log = order.trailing_zeros();
        if log > self.two_adicity {
            return Err(Error::Unsupported(format!(
                "order 2^{log} exceeds two-adicity {} of modulus {}",
                self.two_adicity, self.modulus
            )));
        }
        Ok(self.pow(self.generator(), (self.modulus - 1) >> log))
    }

    /// Lowercase, fixed-width, big-endian hex.
    pub fn to_hex(&self, a: FieldElement) -> String {
        format!("{:0width$x}", a.0, width = self.hex_width())
    }

    pub fn from_hex(&self, s: &str) -> Result<FieldElement> {
        if s.len() != self.hex_width() {
            return Err(Error::Input(format!(
                "field element hex must be {} digits, got {:?}",
                self.hex_width(),
                s
            )));
        }
        if !s
            .bytes()
            .all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b))
        {
            return Err(Error::Input(format!("not lowercase hex: {s:?}")));
        }
        let v = u64::from_str_radix(s, 16).map_err(|e| Error::Input(e.to_string()))?;
        self.element(v)
    }
}

#[inline]
fn reduce_goldilocks(x: u128) -> u64 {
    let lo = x as u64;
    let hi = (x >> 64) as u64;
    let hi_hi = hi >> 32;
    let hi_lo = hi & EPSILON;
    // 2^96 = -1 and 2^64 = 2^32 - 1 modulo the prime.
    let (mut t0, borrow) = lo.overflowing_sub(hi_hi);
    if borrow {
        t0 = t0.wrapping_sub(EPSILON);
    }
    let t1 = hi_lo * EPSILON;
    let (s, carry) = t0.overflowing_add(t1);
    let s = s.wrapping_add(EPSILON * carry as u64);
    if s >= DEFAULT_MODULUS {
        s - DEFAULT_MODULUS
    } else {
        s
    }
}

#[inline]
fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for p in BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in BASES {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

// Brent's variant of Pollard's rho; `n` must be composite and odd.
fn pollard_rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let (mut x, mut y, mut d) = (2u64, 2u64, 1u64);
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
        c += 1;
    }
}

/// Distinct prime factors, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
    }
    let mut stack = vec![n];
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            out.push(m);
            continue;
        }
        let d = pollard_rho(m);
        stack.push(d);
        stack.push(m / d);
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn find_generator(p: u64) -> u64 {
    let factors = prime_factors(p - 1);
    (2..p)
        .find(|&g| factors.iter().all(|&q| powmod(g, (p - 1) / q, p) != 1))
        .expect("every prime field has a generator")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f97() -> PrimeField {
        PrimeField::new_small(97).unwrap()
    }

    #[test]
    fn small_field_examples() {
        let f = f97();
        assert_eq!(f.add(f.reduce(96), f.reduce(5)), f.reduce(4));
        assert_eq!(f.mul(f.reduce(10), f.reduce(10)), f.reduce(3));
        assert_eq!(f.inv(f.reduce(2)).unwrap(), f.reduce(49));
        assert_eq!(f.pow(f.reduce(2), 10), f.reduce(54));
        assert_eq!(f.inv(f.reduce(96)).unwrap(), f.reduce(96));
        assert_eq!(f.inv(FieldElement::ONE).unwrap(), FieldElement::ONE);
    }

    #[test]
    fn zero_has_no_inverse() {
        assert!(matches!(
            f97().inv(FieldElement::ZERO),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn rejects_bad_moduli() {
        assert!(PrimeField::new(97).is_err());
        assert!(PrimeField::new(258).is_err());
        assert!(PrimeField::new_small(91).is_err());
        assert!(PrimeField::new_small(2).is_err());
        assert!(PrimeField::new(257).is_ok());
    }

    #[test]
    fn goldilocks_parameters_match_generic_derivation() {
        assert!(is_prime(DEFAULT_MODULUS));
        assert_eq!(
            prime_factors(DEFAULT_MODULUS - 1),
            vec![2, 3, 5, 17, 257, 65537]
        );
        assert_eq!(find_generator(DEFAULT_MODULUS), 7);
        assert_eq!((DEFAULT_MODULUS - 1).trailing_zeros(), 32);
    }

    #[test]
    fn generator_of_97() {
        let f = f97();
        // 96 = 2^5 * 3, and 5 is the least primitive root mod 97.
        assert_eq!(f.generator().value(), 5);
        assert_eq!(f.two_adicity(), 5);
    }

    #[test]
    fn roots_of_unity() {
        let f = PrimeField::goldilocks();
        assert_eq!(f.root_of_unity(1).unwrap(), FieldElement::ONE);
        assert_eq!(f.root_of_unity(2).unwrap(), f.neg(FieldElement::ONE));
        let w = f.root_of_unity(8).unwrap();
        assert_eq!(f.pow(w, 8), FieldElement::ONE);
        assert_eq!(f.pow(w, 4), f.neg(FieldElement::ONE));
        let w32 = f.root_of_unity(1 << 32).unwrap();
        assert_eq!(f.pow(w32, 1 << 31), f.neg(FieldElement::ONE));
        assert!(matches!(
            f.root_of_unity(1 << 33),
            Err(Error::Unsupported(_))
        ));
        assert!(matches!(
            f97().root_of_unity(64),
            Err(Error::Unsupported(_))
        ));
        assert!(f.root_of_unity(6).is_err());
    }

    #[test]
    fn hex_roundtrip_and_width() {
        let f = PrimeField::goldilocks();
        assert_eq!(f.hex_width(), 16);
        assert_eq!(f.to_hex(f.reduce(255)), "00000000000000ff");
        assert_eq!(f.from_hex("00000000000000ff").unwrap(), f.reduce(255));
        assert!(f.from_hex("ff").is_err());
        assert!(f.from_hex("00000000000000FF").is_err());
        assert!(f.from_hex("ffffffffffffffff").is_err());
        let s = f97();
        assert_eq!(s.hex_width(), 2);
        assert_eq!(s.to_hex(s.reduce(96)), "60");
    }

    #[test]
    fn mul_counter_tracks_multiplications() {
        let f = PrimeField::goldilocks();
        let (_, n) = count_muls(|| {
            let a = f.reduce(3);
            f.mul(f.mul(a, a), a)
        });
        assert_eq!(n, 2);
    }

    fn arb_triple() -> impl Strategy<Value = (u64, u64, u64)> {
        (0..DEFAULT_MODULUS, 0..DEFAULT_MODULUS, 0..DEFAULT_MODULUS)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn goldilocks_reduction_matches_u128_remainder(x in any::<u128>()) {
            prop_assert_eq!(reduce_goldilocks(x) as u128, x % DEFAULT_MODULUS as u128);
        }

        #[test]
        fn ring_axioms((a, b, c) in arb_triple()) {
            let f = PrimeField::goldilocks();
            let (a, b, c) = (f.reduce(a), f.reduce(b), f.reduce(c));
            prop_assert_eq!(f.add(a, b), f.add(b, a));
            prop_assert_eq!(f.mul(a, b), f.mul(b, a));
            prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
            prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.add(f.sub(a, b), b), a);
            prop_assert_eq!(f.add(a, f.neg(a)), FieldElement::ZERO);
            prop_assert_eq!(f.add(a, FieldElement::ZERO), a);
            prop_assert_eq!(f.mul(a, FieldElement::ONE), a);
            prop_assert_eq!(f.mul(a, FieldElement::ZERO), FieldElement::ZERO);
        }

        #[test]
        fn generic_field_agrees_with_integer_oracle(a in 0u64..1_000_000_007, b in 0u64..1_000_000_007) {
            let f = PrimeField::new(1_000_000_007).unwrap();
            let p = 1_000_000_007u128;
            prop_assert_eq!(f.mul(f.reduce(a), f.reduce(b)).value() as u128, a as u128 * b as u128 % p);
            prop_assert_eq!(f.add(f.reduce(a), f.reduce(b)).value() as u128, (a as u128 + b as u128) % p);
        }

        #[test]
        fn inverse_is_two_sided(a in 1..DEFAULT_MODULUS) {
            let f = PrimeField::goldilocks();
            let a = f.reduce(a);
            let ai = f.inv(a).unwrap();
            prop_assert_eq!(f.mul(a, ai), FieldElement::ONE);
            prop_assert_eq!(f.mul(ai, a), FieldElement::ONE);
        }

        #[test]
        fn pow_is_additive_in_exponent(a in 0..DEFAULT_MODULUS, e1 in 0u64..1 << 40, e2 in 0u64..1 << 40) {
            let f = PrimeField::goldilocks();
            let a = f.reduce(a);
            prop_assert_eq!(f.pow(a, e1 + e2), f.mul(f.pow(a, e1), f.pow(a, e2)));
        }

        #[test]
        fn fermat(a in 1..DEFAULT_MODULUS) {
            let f = PrimeField::goldilocks();
            prop_assert_eq!(f.pow(f.reduce(a), DEFAULT_MODULUS - 1), FieldElement::ONE);
        }
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let f = f97();
        for a in 0..97 {
            let a = f.reduce(a);
            let mut acc = FieldElement::ONE;
            for e in 0..200u64 {
                assert_eq!(f.pow(a, e), acc);
                acc = f.mul(acc, a);
            }
        }
    }

    #[test]
    fn is_prime_small_range() {
        let sieve: Vec<bool> = (0..2000u64)
            .map(|n| n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
            .collect();
        for (n, &p) in sieve.iter().enumerate() {
            assert_eq!(is_prime(n as u64), p, "{n}");
        }
    }
}
