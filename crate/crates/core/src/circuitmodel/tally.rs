use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use super::{mimc_round_cost, CircuitKind, CircuitShape, Gadget};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ConstraintTally {
    pub total: u64,
    pub by_gadget: BTreeMap<Gadget, u64>,
}

impl ConstraintTally {
    pub fn record(&mut self, gadget: Gadget, count: u64) {
        if count == 0 {
            return;
        }
        *self.by_gadget.entry(gadget).or_default() += count;
        self.total += count;
    }

    pub fn get(&self, gadget: Gadget) -> u64 {
        self.by_gadget.get(&gadget).copied().unwrap_or(0)
    }
}

/// Per-gadget counts computed from the shape alone, without building.
pub fn closed_form_tally(shape: &CircuitShape) -> ConstraintTally {
    let mut t = ConstraintTally::default();
    match shape {
        CircuitShape::Naive {
            text_len,
            pattern_len,
            range_checks,
        } => {
            let (n, p) = (*text_len as u64, *pattern_len as u64);
            let offsets = n - p + 1;
            t.record(Gadget::IsZero, 2 * offsets * p);
            t.record(Gadget::AndChain, offsets * (p - 1));
            t.record(Gadget::OrChain, offsets - 1);
            t.record(Gadget::Assert, 1);
            if *range_checks {
                t.record(Gadget::ByteDecompose, 9 * (n + p));
            }
        }
        CircuitShape::RabinKarp {
            public_hash_count,
            pattern_len,
        } => {
            let kp = *public_hash_count as u64;
            t.record(Gadget::HornerStep, *pattern_len as u64);
            t.record(Gadget::IsZero, 2 * kp);
            t.record(Gadget::OrChain, kp - 1);
            t.record(Gadget::Assert, 1);
        }
        CircuitShape::Merkle { depth, mimc } => {
            let d = *depth as u64;
            t.record(Gadget::Boolean, d);
            t.record(Gadget::Selector, 2 * d);
            t.record(
                Gadget::MimcRound,
                d * mimc.rounds() as u64 * mimc_round_cost(mimc.exponent()) as u64,
            );
            t.record(Gadget::Assert, 1);
        }
        CircuitShape::PolyIdentity {
            deg_a,
            deg_s,
            deg_b,
            deg_t,
        } => {
            t.record(Gadget::HornerStep, (deg_a + deg_s + deg_b + deg_t) as u64);
            t.record(Gadget::Product, 2);
            t.record(Gadget::Assert, 1);
        }
    }
    t
}

/// Gadget columns of the tally CSV, in order.
pub const GADGET_COLUMNS: [Gadget; 10] = Gadget::ALL;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TallyRow {
    pub kind: CircuitKind,
    pub param_name: String,
    pub param_value: u64,
    pub tally: ConstraintTally,
}

/// `kind,param_name,param_value,total,<gadget columns>`; header always written.
pub fn write_tally_csv<W: Write>(out: W, rows: &[TallyRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["kind", "param_name", "param_value", "total"];
    header.extend(GADGET_COLUMNS.iter().map(|g| g.name()));
    let io = |e: csv::Error| Error::Input(format!("writing tally CSV: {e}"));
    w.write_record(&header).map_err(io)?;
    for row in rows {
        let mut rec = vec![
            row.kind.name().to_string(),
            row.param_name.clone(),
            row.param_value.to_string(),
            row.tally.total.to_string(),
        ];
        rec.extend(GADGET_COLUMNS.iter().map(|&g| row.tally.get(g).to_string()));
        w.write_record(&rec).map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::Input(format!("writing tally CSV: {e}")))?;
    Ok(())
}
