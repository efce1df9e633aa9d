//! Bilinear (rank-1) constraint systems for the four verification strategies,
//! witness synthesis, satisfaction checking and constraint tallies.
//!
//! One constraint is one `<A,w> * <B,w> = <C,w>` row; linear combinations are
//! free. Variable 0 is the constant one and is public.

mod circuits;
mod tally;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{FieldElement, PrimeField};
use crate::mimc::MimcParams;

pub use circuits::{
    build_merkle_circuit, build_naive_circuit, build_naive_circuit_with_range_checks,
    build_poly_identity_circuit, build_rabin_karp_circuit, mimc_round_cost, synthesize_witness,
    CircuitInputs,
};
pub use tally::{closed_form_tally, write_tally_csv, ConstraintTally, TallyRow, GADGET_COLUMNS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(pub usize);

impl Var {
    pub const ONE: Var = Var(0);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Visibility {
    Public,
    Private,
    Internal,
}

/// Sparse `sum coeff * var`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearCombination(pub Vec<(Var, FieldElement)>);

impl LinearCombination {
    pub fn zero() -> Self {
        LinearCombination(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        LinearCombination(vec![(v, FieldElement::ONE)])
    }

    pub fn constant(c: FieldElement) -> Self {
        LinearCombination(vec![(Var::ONE, c)])
    }

    pub fn one() -> Self {
        Self::var(Var::ONE)
    }

    pub fn add_term(mut self, v: Var, c: FieldElement) -> Self {
        self.0.push((v, c));
        self
    }

    pub fn plus(mut self, other: &LinearCombination) -> Self {
        self.0.extend_from_slice(&other.0);
        self
    }

    pub fn minus(mut self, field: &PrimeField, other: &LinearCombination) -> Self {
        self.0
            .extend(other.0.iter().map(|&(v, c)| (v, field.neg(c))));
        self
    }

    pub fn eval(&self, field: &PrimeField, values: &[FieldElement]) -> FieldElement {
        self.0.iter().fold(FieldElement::ZERO, |acc, &(v, c)| {
            field.add(acc, field.mul(c, values[v.0]))
        })
    }

    fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().map(|&(v, _)| v)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gadget {
    IsZero,
    MimcRound,
    ByteDecompose,
    HornerStep,
    Selector,
    Boolean,
    AndChain,
    OrChain,
    Product,
    Assert,
}

impl Gadget {
    pub const ALL: [Gadget; 10] = [
        Gadget::IsZero,
        Gadget::MimcRound,
        Gadget::ByteDecompose,
        Gadget::HornerStep,
        Gadget::Selector,
        Gadget::Boolean,
        Gadget::AndChain,
        Gadget::OrChain,
        Gadget::Product,
        Gadget::Assert,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Gadget::IsZero => "iszero",
            Gadget::MimcRound => "mimc_round",
            Gadget::ByteDecompose => "byte_decompose",
            Gadget::HornerStep => "horner_step",
            Gadget::Selector => "selector",
            Gadget::Boolean => "boolean",
            Gadget::AndChain => "and_chain",
            Gadget::OrChain => "or_chain",
            Gadget::Product => "product",
            Gadget::Assert => "assert",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub a: LinearCombination,
    pub b: LinearCombination,
    pub c: LinearCombination,
    pub gadget: Gadget,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CircuitKind {
    Naive,
    RabinKarp,
    Merkle,
    PolyIdentity,
}

impl CircuitKind {
    pub fn name(self) -> &'static str {
        match self {
            CircuitKind::Naive => "naive",
            CircuitKind::RabinKarp => "rabin_karp",
            CircuitKind::Merkle => "merkle",
            CircuitKind::PolyIdentity => "poly_identity",
        }
    }
}

/// Everything needed to rebuild a circuit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CircuitShape {
    Naive {
        text_len: usize,
        pattern_len: usize,
        range_checks: bool,
    },
    RabinKarp {
        public_hash_count: usize,
        pattern_len: usize,
    },
    Merkle {
        depth: usize,
        mimc: MimcParams,
    },
    PolyIdentity {
        deg_a: usize,
        deg_s: usize,
        deg_b: usize,
        deg_t: usize,
    },
}

impl CircuitShape {
    pub fn kind(&self) -> CircuitKind {
        match self {
            CircuitShape::Naive { .. } => CircuitKind::Naive,
            CircuitShape::RabinKarp { .. } => CircuitKind::RabinKarp,
            CircuitShape::Merkle { .. } => CircuitKind::Merkle,
            CircuitShape::PolyIdentity { .. } => CircuitKind::PolyIdentity,
        }
    }

    pub fn params_echo(&self) -> BTreeMap<String, u64> {
        let pairs: Vec<(&str, u64)> = match self {
            CircuitShape::Naive {
                text_len,
                pattern_len,
                range_checks,
            } => vec![
                ("text_len", *text_len as u64),
                ("pattern_len", *pattern_len as u64),
                ("range_checks", *range_checks as u64),
            ],
            CircuitShape::RabinKarp {
                public_hash_count,
                pattern_len,
            } => vec![
                ("public_hash_count", *public_hash_count as u64),
                ("pattern_len", *pattern_len as u64),
            ],
            CircuitShape::Merkle { depth, mimc } => vec![
                ("depth", *depth as u64),
                ("rounds", mimc.rounds() as u64),
                ("exponent", mimc.exponent()),
            ],
            CircuitShape::PolyIdentity {
                deg_a,
                deg_s,
                deg_b,
                deg_t,
            } => vec![
                ("deg_a", *deg_a as u64),
                ("deg_s", *deg_s as u64),
                ("deg_b", *deg_b as u64),
                ("deg_t", *deg_t as u64),
            ],
        };
        pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstraintSystem {
    pub field: PrimeField,
    pub variables: Vec<Visibility>,
    pub constraints: Vec<Constraint>,
    pub shape: CircuitShape,
}

impl ConstraintSystem {
    pub fn kind(&self) -> CircuitKind {
        self.shape.kind()
    }

    pub fn params_echo(&self) -> BTreeMap<String, u64> {
        self.shape.params_echo()
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn num_constraints(&self) -> usize {
        self.constraints.len()
    }

    /// Per-gadget counts by enumerating the constraints.
    pub fn tally(&self) -> ConstraintTally {
        let mut t = ConstraintTally::default();
        for c in &self.constraints {
            t.record(c.gadget, 1);
        }
        t
    }

    /// Variables that are neither public nor used by any constraint.
    pub fn dangling_variables(&self) -> Vec<Var> {
        let mut used = vec![false; self.variables.len()];
        for c in &self.constraints {
            for v in c.a.vars().chain(c.b.vars()).chain(c.c.vars()) {
                used[v.0] = true;
            }
        }
        self.variables
            .iter()
            .enumerate()
            .filter(|&(i, vis)| !used[i] && *vis != Visibility::Public)
            .map(|(i, _)| Var(i))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub assignment: Vec<FieldElement>,
    pub public_inputs: Vec<FieldElement>,
}

/// Whether every constraint holds under `w`.
pub fn check_satisfied(cs: &ConstraintSystem, w: &Witness) -> Result<bool> {
    if w.assignment.len() != cs.variables.len() {
        return Err(Error::Input(format!(
            "witness has {} values for {} variables",
            w.assignment.len(),
            cs.variables.len()
        )));
    }
    let f = &cs.field;
    let v = &w.assignment;
    Ok(cs
        .constraints
        .iter()
        .all(|c| f.mul(c.a.eval(f, v), c.b.eval(f, v)) == c.c.eval(f, v)))
}

/// Index of the first violated constraint, if any.
pub fn first_violation(cs: &ConstraintSystem, w: &Witness) -> Option<usize> {
    let f = &cs.field;
    let v = &w.assignment;
    cs.constraints
        .iter()
        .position(|c| f.mul(c.a.eval(f, v), c.b.eval(f, v)) != c.c.eval(f, v))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hashmatch::{fingerprint, RollingParams};

    fn gold() -> PrimeField {
        PrimeField::goldilocks()
    }

    fn naive_inputs(text: &[u8], pattern: &[u8]) -> CircuitInputs {
        CircuitInputs::Naive {
            text: text.to_vec(),
            pattern: pattern.to_vec(),
        }
    }

    fn all_shapes() -> Vec<ConstraintSystem> {
        let mimc97 = MimcParams::for_field(PrimeField::new_small(97).unwrap()).unwrap();
        let mut out = Vec::new();
        for n in 1..7 {
            for t in 1..=n {
                out.push(build_naive_circuit(gold(), n, t).unwrap());
                out.push(build_naive_circuit_with_range_checks(gold(), n, t).unwrap());
            }
        }
        for kp in 1..6 {
            for t in 1..5 {
                out.push(build_rabin_karp_circuit(gold(), kp, t).unwrap());
            }
        }
        for d in 1..4 {
            out.push(build_merkle_circuit(d, &mimc97).unwrap());
        }
        for degs in [[0, 0, 0, 0], [1, 0, 1, 0], [3, 2, 1, 4]] {
            out.push(build_poly_identity_circuit(
                gold(),
                degs[0],
                degs[1],
                degs[2],
                degs[3],
            ));
        }
        out
    }

    #[test]
    fn examples() {
        let cs = build_naive_circuit(gold(), 1, 1).unwrap();
        assert_eq!(cs.num_constraints(), 3);
        let cs = build_rabin_karp_circuit(gold(), 1, 1).unwrap();
        assert_eq!(cs.num_constraints(), 4);
        let mimc = MimcParams::for_field(gold()).unwrap();
        let cs = build_merkle_circuit(1, &mimc).unwrap();
        assert_eq!(cs.num_constraints(), 188);
        assert_eq!(
            build_poly_identity_circuit(gold(), 0, 0, 0, 0).num_constraints(),
            3
        );
        assert_eq!(mimc_round_cost(7), 4);
        assert_eq!(mimc_round_cost(5), 3);
    }

    #[test]
    fn invalid_dimensions() {
        assert!(matches!(
            build_naive_circuit(gold(), 2, 3),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            build_naive_circuit(gold(), 2, 0),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            build_rabin_karp_circuit(gold(), 0, 3),
            Err(Error::Input(_))
        ));
        assert!(matches!(
            build_rabin_karp_circuit(gold(), 3, 0),
            Err(Error::Input(_))
        ));
        let mimc = MimcParams::for_field(gold()).unwrap();
        assert!(matches!(
            build_merkle_circuit(0, &mimc),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn closed_form_matches_enumeration() {
        for cs in all_shapes() {
            let tally = cs.tally();
            assert_eq!(tally, closed_form_tally(&cs.shape), "{:?}", cs.shape);
            assert_eq!(tally.total as usize, cs.num_constraints());
            assert_eq!(tally.by_gadget.values().sum::<u64>(), tally.total);
        }
    }

    #[test]
    fn every_variable_is_used_or_public() {
        for cs in all_shapes() {
            assert!(cs.dangling_variables().is_empty(), "{:?}", cs.shape);
            assert_eq!(cs.variables[0], Visibility::Public);
        }
    }

    #[test]
    fn naive_witnesses() {
        let cs = build_naive_circuit(gold(), 6, 2).unwrap();
        let w = synthesize_witness(&cs, &naive_inputs(b"abcabd", b"bd")).unwrap();
        assert!(check_satisfied(&cs, &w).unwrap());
        assert_eq!(w.assignment.len(), cs.num_variables());
        let again = synthesize_witness(&cs, &naive_inputs(b"abcabd", b"bd")).unwrap();
        assert_eq!(w, again);

        let w = synthesize_witness(&cs, &naive_inputs(b"abcabd", b"db")).unwrap();
        assert!(!check_satisfied(&cs, &w).unwrap());
        assert_eq!(first_violation(&cs, &w), Some(cs.num_constraints() - 1));

        let ranged = build_naive_circuit_with_range_checks(gold(), 6, 2).unwrap();
        let w = synthesize_witness(&ranged, &naive_inputs(b"abcabd", b"ca")).unwrap();
        assert!(check_satisfied(&ranged, &w).unwrap());
    }

    #[test]
    fn shape_mismatch_is_an_input_error() {
        let cs = build_naive_circuit(gold(), 6, 2).unwrap();
        assert!(matches!(
            synthesize_witness(&cs, &naive_inputs(b"abc", b"bd")),
            Err(Error::Input(_))
        ));
        let rk = CircuitInputs::RabinKarp {
            base: FieldElement::ONE,
            public_hashes: vec![FieldElement::ONE],
            pattern: b"ab".to_vec(),
        };
        assert!(matches!(synthesize_witness(&cs, &rk), Err(Error::Input(_))));
        let short = Witness {
            assignment: vec![FieldElement::ONE],
            public_inputs: vec![FieldElement::ONE],
        };
        assert!(matches!(check_satisfied(&cs, &short), Err(Error::Input(_))));
    }

    #[test]
    fn empty_circuit_is_satisfied() {
        let cs = ConstraintSystem {
            field: gold(),
            variables: vec![Visibility::Public],
            constraints: Vec::new(),
            shape: CircuitShape::PolyIdentity {
                deg_a: 0,
                deg_s: 0,
                deg_b: 0,
                deg_t: 0,
            },
        };
        let w = Witness {
            assignment: vec![FieldElement::ONE],
            public_inputs: vec![FieldElement::ONE],
        };
        assert!(check_satisfied(&cs, &w).unwrap());
    }

    #[test]
    fn rabin_karp_witnesses() {
        let f = gold();
        let params = RollingParams::with_default_base(f, 3).unwrap();
        let h = fingerprint(b"abc", &params).unwrap();
        let cs = build_rabin_karp_circuit(f, 3, 3).unwrap();
        let inputs = |hashes: Vec<FieldElement>| CircuitInputs::RabinKarp {
            base: params.base(),
            public_hashes: hashes,
            pattern: b"abc".to_vec(),
        };
        let w = synthesize_witness(&cs, &inputs(vec![f.reduce(1), h, f.reduce(2)])).unwrap();
        assert!(check_satisfied(&cs, &w).unwrap());
        let w = synthesize_witness(
            &cs,
            &inputs(vec![f.reduce(1), f.add(h, FieldElement::ONE), f.reduce(2)]),
        )
        .unwrap();
        assert!(!check_satisfied(&cs, &w).unwrap());
    }

    fn is_free_inverse(cs: &ConstraintSystem, w: &Witness, v: Var) -> bool {
        let mut uses = cs.constraints.iter().filter(|c| {
            c.a.vars()
                .chain(c.b.vars())
                .chain(c.c.vars())
                .any(|x| x == v)
        });
        uses.all(|c| {
            c.gadget == Gadget::IsZero
                && c.b == LinearCombination::var(v)
                && c.a.eval(&cs.field, &w.assignment).is_zero()
        })
    }

    #[test]
    fn single_wire_tamper_breaks_satisfaction() {
        let mimc97 = MimcParams::for_field(PrimeField::new_small(97).unwrap()).unwrap();
        let f97 = *mimc97.field();
        let leaf = mimc97.hash_bytes(b"x");
        let sib = f97.reduce(11);
        let root = mimc97.compress(sib, leaf);
        let cases = vec![
            (
                build_naive_circuit(gold(), 5, 2).unwrap(),
                naive_inputs(b"hello", b"ll"),
            ),
            (
                build_merkle_circuit(1, &mimc97).unwrap(),
                CircuitInputs::Merkle {
                    root,
                    leaf,
                    siblings: vec![sib],
                    directions: vec![true],
                },
            ),
            (
                build_poly_identity_circuit(gold(), 1, 0, 1, 0),
                // (x + 2) * 1 + (x + 1) * (-1) = 1
                CircuitInputs::PolyIdentity {
                    r: gold().reduce(5),
                    a: vec![gold().reduce(2), FieldElement::ONE],
                    s: vec![FieldElement::ONE],
                    b: vec![FieldElement::ONE, FieldElement::ONE],
                    t: vec![gold().neg(FieldElement::ONE)],
                },
            ),
        ];
        for (cs, inputs) in cases {
            let w = synthesize_witness(&cs, &inputs).unwrap();
            assert!(check_satisfied(&cs, &w).unwrap(), "{:?}", cs.shape);
            for i in 1..w.assignment.len() {
                let mut bad = w.clone();
                bad.assignment[i] = cs.field.add(bad.assignment[i], FieldElement::ONE);
                if check_satisfied(&cs, &bad).unwrap() {
                    // Only the inverse hint of an iszero whose input is zero is free.
                    assert!(is_free_inverse(&cs, &w, Var(i)), "{:?} wire {i}", cs.shape);
                }
            }
        }
    }

    #[test]
    fn merkle_direction_flip_fails() {
        let mimc = MimcParams::for_field(gold()).unwrap();
        let leaf = mimc.hash_bytes(b"ab");
        let sibs = [gold().reduce(3), gold().reduce(4)];
        let mid = mimc.compress(leaf, sibs[0]);
        let root = mimc.compress(sibs[1], mid);
        let cs = build_merkle_circuit(2, &mimc).unwrap();
        let inputs = |dirs: Vec<bool>| CircuitInputs::Merkle {
            root,
            leaf,
            siblings: sibs.to_vec(),
            directions: dirs,
        };
        let w = synthesize_witness(&cs, &inputs(vec![false, true])).unwrap();
        assert!(check_satisfied(&cs, &w).unwrap());
        let w = synthesize_witness(&cs, &inputs(vec![true, true])).unwrap();
        assert!(!check_satisfied(&cs, &w).unwrap());
    }

    #[test]
    fn tally_csv() {
        let cs = build_rabin_karp_circuit(gold(), 2, 3).unwrap();
        let rows = [TallyRow {
            kind: cs.kind(),
            param_name: "public_hash_count".into(),
            param_value: 2,
            tally: cs.tally(),
        }];
        let mut buf = Vec::new();
        write_tally_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "kind,param_name,param_value,total,iszero,mimc_round,byte_decompose,horner_step,selector,boolean,and_chain,or_chain,product,assert"
        );
        assert_eq!(
            lines.next().unwrap(),
            "rabin_karp,public_hash_count,2,9,4,0,0,3,0,0,0,1,0,1"
        );
        let mut buf = Vec::new();
        write_tally_csv(&mut buf, &[]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 1);
    }
}
