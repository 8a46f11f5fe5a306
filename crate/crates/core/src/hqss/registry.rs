//! Bookkeeping for qubits scattered across separable registers.
//!
//! Channel copies and decoys start as independent registers. Measurements
//! that span registers (a dishonest agent Bell-measuring arbitrary slot
//! pairs) first merge the registers involved; qubits collapsed by a
//! measurement are factored back out into their own small registers, so
//! register sizes stay bounded by the entanglement actually present.
//! Qubits are addressed by stable ids, never by shifting positions.

use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::qcore::{BellOutcome, Bit, DensityMatrix2, Ket, Unitary2};

/// Stable identifier of one tracked qubit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum QubitId {
    /// Qubit s of the 4n-qubit signal register (copy l holds 4l..4l+3 in
    /// A, B, C, D order).
    Signal(u32),
    /// Decoy i of the 3n prepared decoys.
    Decoy(u32),
    /// Per-copy secret qubit introduced in the reconstruction phase.
    Secret(u32),
}

impl std::fmt::Display for QubitId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            QubitId::Signal(s) => write!(f, "p{}", s + 1),
            QubitId::Decoy(d) => write!(f, "d{}", d + 1),
            QubitId::Secret(l) => write!(f, "s{}", l + 1),
        }
    }
}

#[derive(Debug, Clone)]
struct Register {
    ket: Ket,
    qubits: Vec<QubitId>,
}

#[derive(Debug, Clone, Default)]
pub(crate) struct Registry {
    registers: Vec<Option<Register>>,
    index: HashMap<QubitId, (usize, usize)>,
}

impl Registry {
    pub fn new() -> Self {
        Registry::default()
    }

    pub fn insert(&mut self, ket: Ket, qubits: Vec<QubitId>) {
        assert_eq!(ket.num_qubits(), qubits.len());
        let slot = self.registers.len();
        for (pos, &id) in qubits.iter().enumerate() {
            let previous = self.index.insert(id, (slot, pos));
            assert!(previous.is_none(), "qubit {id} inserted twice");
        }
        self.registers.push(Some(Register { ket, qubits }));
    }

    fn locate(&self, id: QubitId) -> (usize, usize) {
        *self
            .index
            .get(&id)
            .unwrap_or_else(|| panic!("unknown qubit {id}"))
    }

    fn register(&self, slot: usize) -> &Register {
        self.registers[slot].as_ref().expect("live register")
    }

    /// Tensor the registers holding `a` and `b` into one (no-op when they
    /// already share a register).
    fn merge(&mut self, a: QubitId, b: QubitId) -> Result<usize> {
        let (slot_a, _) = self.locate(a);
        let (slot_b, _) = self.locate(b);
        if slot_a == slot_b {
            return Ok(slot_a);
        }
        let reg_a = self.registers[slot_a].take().expect("live register");
        let reg_b = self.registers[slot_b].take().expect("live register");
        let ket = reg_a.ket.tensor(&reg_b.ket)?;
        let mut qubits = reg_a.qubits;
        qubits.extend(reg_b.qubits);
        let slot = self.registers.len();
        for (pos, &id) in qubits.iter().enumerate() {
            self.index.insert(id, (slot, pos));
        }
        self.registers.push(Some(Register { ket, qubits }));
        Ok(slot)
    }

    /// Factor a computationally collapsed qubit out into its own register.
    fn split_collapsed_qubit(&mut self, id: QubitId, bit: Bit) {
        let (slot, pos) = self.locate(id);
        if self.register(slot).qubits.len() == 1 {
            return;
        }
        let reg = self.registers[slot].take().expect("live register");
        let rest = reg.ket.factor_out_qubit(pos, bit.as_u8());
        let rest_qubits: Vec<QubitId> = reg.qubits.iter().copied().filter(|&q| q != id).collect();
        let rest_slot = self.registers.len();
        for (p, &q) in rest_qubits.iter().enumerate() {
            self.index.insert(q, (rest_slot, p));
        }
        self.registers.push(Some(Register {
            ket: rest,
            qubits: rest_qubits,
        }));
        let own_slot = self.registers.len();
        self.index.insert(id, (own_slot, 0));
        self.registers.push(Some(Register {
            ket: Ket::basis_state(1, bit.as_u8() as usize),
            qubits: vec![id],
        }));
    }

    /// Factor a Bell-collapsed ordered pair out into its own register.
    fn split_collapsed_pair(&mut self, a: QubitId, b: QubitId, outcome: BellOutcome) {
        let (slot, pos_a) = self.locate(a);
        let (_, pos_b) = self.locate(b);
        if self.register(slot).qubits.len() == 2 {
            return;
        }
        let reg = self.registers[slot].take().expect("live register");
        let rest = reg
            .ket
            .factor_out_pair((pos_a, pos_b), &outcome.pair_amps());
        let rest_qubits: Vec<QubitId> = reg
            .qubits
            .iter()
            .copied()
            .filter(|&q| q != a && q != b)
            .collect();
        let rest_slot = self.registers.len();
        for (p, &q) in rest_qubits.iter().enumerate() {
            self.index.insert(q, (rest_slot, p));
        }
        self.registers.push(Some(Register {
            ket: rest,
            qubits: rest_qubits,
        }));
        let pair_slot = self.registers.len();
        self.index.insert(a, (pair_slot, 0));
        self.index.insert(b, (pair_slot, 1));
        self.registers.push(Some(Register {
            ket: outcome.state(),
            qubits: vec![a, b],
        }));
    }

    pub fn apply_1q(&mut self, id: QubitId, gate: &Unitary2) -> Result<()> {
        let (slot, pos) = self.locate(id);
        let reg = self.registers[slot].as_mut().expect("live register");
        reg.ket = reg.ket.apply_1q(gate, pos)?;
        Ok(())
    }

    /// Computational-basis measurement; the qubit collapses and is factored
    /// out into its own register.
    pub fn measure_z<R: Rng>(&mut self, id: QubitId, rng: &mut R) -> Result<Bit> {
        let (slot, pos) = self.locate(id);
        let reg = self.registers[slot].as_mut().expect("live register");
        let (bit, post) = reg.ket.measure_computational(pos, rng)?;
        reg.ket = post;
        self.split_collapsed_qubit(id, bit);
        Ok(bit)
    }

    /// X-basis measurement: outcome Zero means |+>, One means |->.
    pub fn measure_x<R: Rng>(&mut self, id: QubitId, rng: &mut R) -> Result<Bit> {
        let h = Unitary2::hadamard();
        self.apply_1q(id, &h)?;
        let bit = self.measure_z(id, rng)?;
        // Rotate the factored-out qubit back to the |+>/|-> eigenstate.
        self.apply_1q(id, &h)?;
        Ok(bit)
    }

    /// Bell measurement of the ordered pair (a, b); registers are merged on
    /// demand and the collapsed pair is factored back out.
    pub fn measure_bell<R: Rng>(
        &mut self,
        a: QubitId,
        b: QubitId,
        rng: &mut R,
    ) -> Result<BellOutcome> {
        let slot = self.merge(a, b)?;
        let (_, pos_a) = self.locate(a);
        let (_, pos_b) = self.locate(b);
        let reg = self.registers[slot].as_mut().expect("live register");
        let (outcome, post) = reg.ket.measure_bell((pos_a, pos_b), rng)?;
        reg.ket = post;
        self.split_collapsed_pair(a, b, outcome);
        Ok(outcome)
    }

    pub fn reduced_density(&self, id: QubitId) -> Result<DensityMatrix2> {
        let (slot, pos) = self.locate(id);
        self.register(slot).ket.reduced_density_1q(pos)
    }

    /// The register ket and this qubit's position inside it.
    #[cfg(test)]
    pub fn ket_of(&self, id: QubitId) -> (&Ket, usize) {
        let (slot, pos) = self.locate(id);
        (&self.register(slot).ket, pos)
    }

    /// Snapshot of the requested qubits as one ket, in the given order.
    /// Every register touched must be fully covered by `ids`.
    pub fn assemble(&self, ids: &[QubitId]) -> Result<Ket> {
        let mut slots = Vec::new();
        for &id in ids {
            let (slot, _) = self.locate(id);
            if !slots.contains(&slot) {
                slots.push(slot);
            }
        }
        let mut combined: Option<Ket> = None;
        let mut order = Vec::new();
        for slot in slots {
            let reg = self.register(slot);
            for &q in &reg.qubits {
                assert!(
                    ids.contains(&q),
                    "register holding {q} is entangled beyond the requested set"
                );
                order.push(q);
            }
            combined = Some(match combined {
                None => reg.ket.clone(),
                Some(k) => k.tensor(&reg.ket)?,
            });
        }
        let combined = combined.expect("at least one qubit requested");
        let perm: Vec<usize> = ids
            .iter()
            .map(|id| order.iter().position(|q| q == id).expect("qubit present"))
            .collect();
        combined.permute_qubits(&perm)
    }
}
