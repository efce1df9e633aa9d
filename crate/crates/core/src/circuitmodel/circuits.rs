use super::{
    CircuitShape, Constraint, ConstraintSystem, Gadget, LinearCombination as Lc, Var, Visibility,
    Witness,
};
use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};
use crate::mimc::MimcParams;

/// Values for every input wire of a circuit, public and private alike.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CircuitInputs {
    Naive {
        text: Vec<u8>,
        pattern: Vec<u8>,
    },
    RabinKarp {
        base: FieldElement,
        public_hashes: Vec<FieldElement>,
        pattern: Vec<u8>,
    },
    Merkle {
        root: FieldElement,
        leaf: FieldElement,
        siblings: Vec<FieldElement>,
        directions: Vec<bool>,
    },
    /// Coefficient vectors, lowest degree first; shorter vectors are zero-padded.
    PolyIdentity {
        r: FieldElement,
        a: Vec<FieldElement>,
        s: Vec<FieldElement>,
        b: Vec<FieldElement>,
        t: Vec<FieldElement>,
    },
}

/// Builds the constraint list and, when `values` is present, the assignment
/// along the same code path.
struct Builder {
    field: PrimeField,
    variables: Vec<Visibility>,
    constraints: Vec<Constraint>,
    values: Option<Vec<FieldElement>>,
}

impl Builder {
    fn new(field: PrimeField, synthesize: bool) -> Self {
        Builder {
            field,
            variables: vec![Visibility::Public],
            constraints: Vec::new(),
            values: synthesize.then(|| vec![FieldElement::ONE]),
        }
    }

    fn input(&mut self, vis: Visibility, value: Option<FieldElement>) -> Var {
        if let Some(vals) = &mut self.values {
            vals.push(value.expect("input value while synthesizing"));
        }
        self.variables.push(vis);
        Var(self.variables.len() - 1)
    }

    /// Internal wire; `compute` only runs while synthesizing.
    fn wire(&mut self, compute: impl FnOnce(&Self) -> FieldElement) -> Var {
        let value = self.values.is_some().then(|| compute(self));
        self.input(Visibility::Internal, value)
    }

    fn val(&self, lc: &Lc) -> FieldElement {
        lc.eval(&self.field, self.values.as_ref().expect("synthesizing"))
    }

    fn enforce(&mut self, a: Lc, b: Lc, c: Lc, gadget: Gadget) {
        self.constraints.push(Constraint { a, b, c, gadget });
    }

    fn neg_one(&self) -> FieldElement {
        self.field.neg(FieldElement::ONE)
    }

    /// `z = a * b`.
    fn product(&mut self, a: Lc, b: Lc, gadget: Gadget) -> Var {
        let f = self.field;
        let z = self.wire(|s| f.mul(s.val(&a), s.val(&b)));
        self.enforce(a, b, Lc::var(z), gadget);
        z
    }

    /// `e = 1` iff `d = 0`: `d * inv = 1 - e` and `d * e = 0`.
    fn is_zero(&mut self, d: Lc) -> Var {
        let f = self.field;
        let inv = self.wire(|s| {
            let v = s.val(&d);
            if v.is_zero() {
                FieldElement::ZERO
            } else {
                f.inv(v).expect("nonzero")
            }
        });
        let e = self.wire(|s| {
            if s.val(&d).is_zero() {
                FieldElement::ONE
            } else {
                FieldElement::ZERO
            }
        });
        let neg_one = self.neg_one();
        self.enforce(
            d.clone(),
            Lc::var(inv),
            Lc::one().add_term(e, neg_one),
            Gadget::IsZero,
        );
        self.enforce(d, Lc::var(e), Lc::zero(), Gadget::IsZero);
        e
    }

    /// Boolean OR: `x * y = x + y - z`.
    fn or(&mut self, x: Var, y: Var) -> Var {
        let f = self.field;
        let z = self.wire(|s| {
            let (a, b) = (s.val(&Lc::var(x)), s.val(&Lc::var(y)));
            f.sub(f.add(a, b), f.mul(a, b))
        });
        let c = Lc::var(x)
            .add_term(y, FieldElement::ONE)
            .add_term(z, self.neg_one());
        self.enforce(Lc::var(x), Lc::var(y), c, Gadget::OrChain);
        z
    }

    fn fold_or(&mut self, flags: &[Var]) -> Var {
        let mut acc = flags[0];
        for &m in &flags[1..] {
            acc = self.or(acc, m);
        }
        acc
    }

    fn assert_equal(&mut self, lhs: Lc, rhs: Lc) {
        self.enforce(lhs, Lc::one(), rhs, Gadget::Assert);
    }

    fn boolean(&mut self, b: Var, gadget: Gadget) {
        let one_minus = Lc::one().add_term(b, self.neg_one());
        self.enforce(Lc::var(b), one_minus, Lc::zero(), gadget);
    }

    /// Eight booleanity constraints plus one recomposition.
    fn byte_decompose(&mut self, x: Var) {
        let mut sum = Lc::zero();
        for k in 0..8 {
            let b = self.wire(|s| bit((s.val(&Lc::var(x)).value() >> k) & 1 == 1));
            self.boolean(b, Gadget::ByteDecompose);
            sum = sum.add_term(b, self.field.reduce(1 << k));
        }
        self.enforce(sum, Lc::one(), Lc::var(x), Gadget::ByteDecompose);
    }

    /// `acc * r = next - c`, i.e. `next = acc * r + c`.
    fn horner_step(&mut self, acc: Lc, r: Var, c: Lc) -> Var {
        let f = self.field;
        let next = self.wire(|s| f.add(f.mul(s.val(&acc), s.val(&Lc::var(r))), s.val(&c)));
        let rhs = Lc::var(next).minus(&f, &c);
        self.enforce(acc, Lc::var(r), rhs, Gadget::HornerStep);
        next
    }

    /// `t^e` by left-to-right square and multiply.
    fn power(&mut self, t: Lc, e: u64) -> Var {
        let bits = 64 - e.leading_zeros();
        let mut acc: Option<Var> = None;
        for i in (0..bits - 1).rev() {
            let cur = acc.map_or_else(|| t.clone(), Lc::var);
            let sq = self.product(cur.clone(), cur, Gadget::MimcRound);
            acc = Some(if (e >> i) & 1 == 1 {
                self.product(Lc::var(sq), t.clone(), Gadget::MimcRound)
            } else {
                sq
            });
        }
        acc.expect("exponent is at least 3")
    }

    /// Miyaguchi-Preneel compression of `left` and `right`, as an affine
    /// combination of wires.
    fn compress(&mut self, mimc: &MimcParams, left: Lc, right: Lc) -> Lc {
        let mut x = left.clone();
        for &c in mimc.round_constants() {
            let t = x.plus(&right).add_term(Var::ONE, c);
            x = Lc::var(self.power(t, mimc.exponent()));
        }
        x.plus(&right).plus(&left).plus(&right)
    }

    fn finish(self, shape: CircuitShape) -> (ConstraintSystem, Option<Witness>) {
        let witness = self.values.map(|assignment| Witness {
            public_inputs: self
                .variables
                .iter()
                .zip(&assignment)
                .filter(|(v, _)| **v == Visibility::Public)
                .map(|(_, &x)| x)
                .collect(),
            assignment,
        });
        let cs = ConstraintSystem {
            field: self.field,
            variables: self.variables,
            constraints: self.constraints,
            shape,
        };
        (cs, witness)
    }
}

fn bit(b: bool) -> FieldElement {
    if b {
        FieldElement::ONE
    } else {
        FieldElement::ZERO
    }
}

fn byte(f: &PrimeField, b: u8) -> FieldElement {
    f.reduce(b as u64)
}

fn naive(
    field: PrimeField,
    n: usize,
    t: usize,
    range_checks: bool,
    inputs: Option<(&[u8], &[u8])>,
) -> (ConstraintSystem, Option<Witness>) {
    let mut b = Builder::new(field, inputs.is_some());
    let text: Vec<Var> = (0..n)
        .map(|i| b.input(Visibility::Public, inputs.map(|(x, _)| byte(&field, x[i]))))
        .collect();
    let pattern: Vec<Var> = (0..t)
        .map(|j| b.input(Visibility::Private, inputs.map(|(_, p)| byte(&field, p[j]))))
        .collect();
    if range_checks {
        for &v in text.iter().chain(&pattern) {
            b.byte_decompose(v);
        }
    }
    let neg_one = b.neg_one();
    let mut matches = Vec::with_capacity(n - t + 1);
    for i in 0..=n - t {
        let mut all = None;
        for j in 0..t {
            let eq = b.is_zero(Lc::var(text[i + j]).add_term(pattern[j], neg_one));
            all = Some(match all {
                None => eq,
                Some(prev) => b.product(Lc::var(prev), Lc::var(eq), Gadget::AndChain),
            });
        }
        matches.push(all.expect("t >= 1"));
    }
    let any = b.fold_or(&matches);
    b.assert_equal(Lc::var(any), Lc::one());
    b.finish(CircuitShape::Naive {
        text_len: n,
        pattern_len: t,
        range_checks,
    })
}

fn rabin_karp(
    field: PrimeField,
    kp: usize,
    t: usize,
    inputs: Option<(FieldElement, &[FieldElement], &[u8])>,
) -> (ConstraintSystem, Option<Witness>) {
    let mut b = Builder::new(field, inputs.is_some());
    let base = b.input(Visibility::Public, inputs.map(|(x, _, _)| x));
    let hashes: Vec<Var> = (0..kp)
        .map(|k| b.input(Visibility::Public, inputs.map(|(_, h, _)| h[k])))
        .collect();
    let pattern: Vec<Var> = (0..t)
        .map(|j| {
            b.input(
                Visibility::Private,
                inputs.map(|(_, _, p)| byte(&field, p[j])),
            )
        })
        .collect();
    let mut acc = Lc::zero();
    for &p in &pattern {
        acc = Lc::var(b.horner_step(acc, base, Lc::var(p)));
    }
    let neg_one = b.neg_one();
    let hits: Vec<Var> = hashes
        .iter()
        .map(|&h| b.is_zero(acc.clone().add_term(h, neg_one)))
        .collect();
    let any = b.fold_or(&hits);
    b.assert_equal(Lc::var(any), Lc::one());
    b.finish(CircuitShape::RabinKarp {
        public_hash_count: kp,
        pattern_len: t,
    })
}

struct MerkleValues<'a> {
    root: FieldElement,
    leaf: FieldElement,
    siblings: &'a [FieldElement],
    directions: &'a [bool],
}

fn merkle(
    mimc: &MimcParams,
    d: usize,
    inputs: Option<MerkleValues<'_>>,
) -> (ConstraintSystem, Option<Witness>) {
    let field = *mimc.field();
    let mut b = Builder::new(field, inputs.is_some());
    let root = b.input(Visibility::Public, inputs.as_ref().map(|v| v.root));
    let leaf = b.input(Visibility::Private, inputs.as_ref().map(|v| v.leaf));
    let siblings: Vec<Var> = (0..d)
        .map(|j| b.input(Visibility::Private, inputs.as_ref().map(|v| v.siblings[j])))
        .collect();
    let dirs: Vec<Var> = (0..d)
        .map(|j| {
            let value = inputs.as_ref().map(|v| bit(v.directions[j]));
            b.input(Visibility::Private, value)
        })
        .collect();
    let mut cur = Lc::var(leaf);
    for j in 0..d {
        let (dir, sib) = (dirs[j], Lc::var(siblings[j]));
        b.boolean(dir, Gadget::Boolean);
        let f = field;
        // left = cur + dir * (sib - cur), right = sib + dir * (cur - sib)
        let left = b.wire(|s| {
            if s.val(&Lc::var(dir)).is_zero() {
                s.val(&cur)
            } else {
                s.val(&sib)
            }
        });
        let right = b.wire(|s| {
            if s.val(&Lc::var(dir)).is_zero() {
                s.val(&sib)
            } else {
                s.val(&cur)
            }
        });
        b.enforce(
            Lc::var(dir),
            sib.clone().minus(&f, &cur),
            Lc::var(left).minus(&f, &cur),
            Gadget::Selector,
        );
        b.enforce(
            Lc::var(dir),
            cur.clone().minus(&f, &sib),
            Lc::var(right).minus(&f, &sib),
            Gadget::Selector,
        );
        cur = b.compress(mimc, Lc::var(left), Lc::var(right));
    }
    b.assert_equal(cur, Lc::var(root));
    b.finish(CircuitShape::Merkle {
        depth: d,
        mimc: mimc.clone(),
    })
}

struct PolyValues<'a> {
    r: FieldElement,
    coeffs: [&'a [FieldElement]; 4],
}

fn poly_identity(
    field: PrimeField,
    degs: [usize; 4],
    inputs: Option<PolyValues<'_>>,
) -> (ConstraintSystem, Option<Witness>) {
    let mut b = Builder::new(field, inputs.is_some());
    let r = b.input(Visibility::Public, inputs.as_ref().map(|v| v.r));
    let mut evals = Vec::with_capacity(4);
    for (k, &deg) in degs.iter().enumerate() {
        let coeffs: Vec<Var> = (0..=deg)
            .map(|i| {
                let c = inputs
                    .as_ref()
                    .map(|v| v.coeffs[k].get(i).copied().unwrap_or(FieldElement::ZERO));
                b.input(Visibility::Private, c)
            })
            .collect();
        let mut acc = Lc::var(coeffs[deg]);
        for i in (0..deg).rev() {
            acc = Lc::var(b.horner_step(acc, r, Lc::var(coeffs[i])));
        }
        evals.push(acc);
    }
    let first = b.product(evals[0].clone(), evals[1].clone(), Gadget::Product);
    let second = b.product(evals[2].clone(), evals[3].clone(), Gadget::Product);
    b.assert_equal(
        Lc::var(first).add_term(second, FieldElement::ONE),
        Lc::one(),
    );
    let [deg_a, deg_s, deg_b, deg_t] = degs;
    b.finish(CircuitShape::PolyIdentity {
        deg_a,
        deg_s,
        deg_b,
        deg_t,
    })
}

fn check_byte_field(field: &PrimeField) -> Result<()> {
    if field.modulus() < 256 {
        return Err(Error::Config(format!(
            "byte circuits need p > 255, got {}",
            field.modulus()
        )));
    }
    Ok(())
}

/// Naive matching circuit without byte range checks.
pub fn build_naive_circuit(
    field: PrimeField,
    text_len: usize,
    pattern_len: usize,
) -> Result<ConstraintSystem> {
    naive_shape(field, text_len, pattern_len, false)
}

/// Naive matching circuit plus a byte decomposition of every input byte.
pub fn build_naive_circuit_with_range_checks(
    field: PrimeField,
    text_len: usize,
    pattern_len: usize,
) -> Result<ConstraintSystem> {
    naive_shape(field, text_len, pattern_len, true)
}

fn naive_shape(
    field: PrimeField,
    n: usize,
    t: usize,
    range_checks: bool,
) -> Result<ConstraintSystem> {
    if t == 0 || t > n {
        return Err(Error::Input(format!(
            "naive circuit needs 1 <= T <= N, got N={n} T={t}"
        )));
    }
    check_byte_field(&field)?;
    Ok(naive(field, n, t, range_checks, None).0)
}

pub fn build_rabin_karp_circuit(
    field: PrimeField,
    public_hash_count: usize,
    pattern_len: usize,
) -> Result<ConstraintSystem> {
    if public_hash_count == 0 || pattern_len == 0 {
        return Err(Error::Input(format!(
            "Rabin-Karp circuit needs KP >= 1 and T >= 1, got KP={public_hash_count} T={pattern_len}"
        )));
    }
    check_byte_field(&field)?;
    Ok(rabin_karp(field, public_hash_count, pattern_len, None).0)
}

pub fn build_merkle_circuit(depth: usize, mimc: &MimcParams) -> Result<ConstraintSystem> {
    if depth == 0 {
        return Err(Error::Input("Merkle circuit needs depth >= 1".into()));
    }
    Ok(merkle(mimc, depth, None).0)
}

pub fn build_poly_identity_circuit(
    field: PrimeField,
    deg_a: usize,
    deg_s: usize,
    deg_b: usize,
    deg_t: usize,
) -> ConstraintSystem {
    poly_identity(field, [deg_a, deg_s, deg_b, deg_t], None).0
}

/// Constrained multiplications per MiMC round for exponent `e`.
pub fn mimc_round_cost(e: u64) -> usize {
    let bits = 64 - e.leading_zeros() as usize;
    (bits - 1) + (e.count_ones() as usize - 1)
}

fn shape_mismatch(what: &str) -> Error {
    Error::Input(format!("inputs do not match circuit shape: {what}"))
}

/// Assigns every wire of `cs` from `inputs`. The result does not have to
/// satisfy `cs`; use [`check_satisfied`](super::check_satisfied) for that.
pub fn synthesize_witness(cs: &ConstraintSystem, inputs: &CircuitInputs) -> Result<Witness> {
    let field = cs.field;
    let (rebuilt, witness) = match (&cs.shape, inputs) {
        (
            CircuitShape::Naive {
                text_len,
                pattern_len,
                range_checks,
            },
            CircuitInputs::Naive { text, pattern },
        ) => {
            if text.len() != *text_len || pattern.len() != *pattern_len {
                return Err(shape_mismatch("text or pattern length"));
            }
            naive(
                field,
                *text_len,
                *pattern_len,
                *range_checks,
                Some((text, pattern)),
            )
        }
        (
            CircuitShape::RabinKarp {
                public_hash_count,
                pattern_len,
            },
            CircuitInputs::RabinKarp {
                base,
                public_hashes,
                pattern,
            },
        ) => {
            if public_hashes.len() != *public_hash_count || pattern.len() != *pattern_len {
                return Err(shape_mismatch("hash count or pattern length"));
            }
            rabin_karp(
                field,
                *public_hash_count,
                *pattern_len,
                Some((*base, public_hashes, pattern)),
            )
        }
        (
            CircuitShape::Merkle { depth, mimc },
            CircuitInputs::Merkle {
                root,
                leaf,
                siblings,
                directions,
            },
        ) => {
            if siblings.len() != *depth || directions.len() != *depth {
                return Err(shape_mismatch("path length"));
            }
            let values = MerkleValues {
                root: *root,
                leaf: *leaf,
                siblings,
                directions,
            };
            merkle(mimc, *depth, Some(values))
        }
        (
            CircuitShape::PolyIdentity {
                deg_a,
                deg_s,
                deg_b,
                deg_t,
            },
            CircuitInputs::PolyIdentity { r, a, s, b, t },
        ) => {
            let degs = [*deg_a, *deg_s, *deg_b, *deg_t];
            let coeffs = [a.as_slice(), s.as_slice(), b.as_slice(), t.as_slice()];
            if coeffs.iter().zip(degs).any(|(c, d)| c.len() > d + 1) {
                return Err(shape_mismatch("polynomial degree"));
            }
            poly_identity(field, degs, Some(PolyValues { r: *r, coeffs }))
        }
        _ => return Err(shape_mismatch("circuit kind")),
    };
    debug_assert_eq!(rebuilt.constraints.len(), cs.constraints.len());
    Ok(witness.expect("synthesized"))
}
