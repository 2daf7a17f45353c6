//! Randomized contract fuzzing of the resource store.
//!
//! Drives `get_node` with handles drawn from a small alphabet (so found,
//! created and exhaustion paths all occur) and re-checks the whole contract
//! after every call: behavior trichotomy, found-case frame, created-case
//! head shape and marshaled name, exhaustion no-op, list well-formedness and
//! freshness. Deterministic for a fixed seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use thiserror::Error;

use crate::logic_lists::{linked_ll, sep_from_list, to_ll, unchanged_ll, LogicList};
use crate::memory_model::{Bank, Memory, MemorySnapshot, NodeRef};
use crate::resource_store::{get_node, handle_to_tpm, list_handles, Context, ReturnCode, Slot};

#[derive(Debug, Clone)]
pub struct FuzzConfig {
    pub ops: u64,
    pub seed: u64,
    pub bank_capacity: usize,
    /// Handle alphabet size; `None` means `2 * bank_capacity`.
    pub alphabet: Option<u32>,
}

impl FuzzConfig {
    pub fn new(ops: u64, seed: u64, bank_capacity: usize) -> FuzzConfig {
        FuzzConfig {
            ops,
            seed,
            bank_capacity,
            alphabet: None,
        }
    }

    fn alphabet_size(&self) -> u32 {
        self.alphabet
            .unwrap_or_else(|| (2 * self.bank_capacity) as u32)
            .max(1)
    }
}

/// Return-code counts over one run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CodeHistogram {
    pub found: u64,
    pub created: u64,
    pub memory: u64,
    pub marshal_fail: u64,
}

impl CodeHistogram {
    fn bump(&mut self, code: ReturnCode) -> Result<(), String> {
        match code {
            ReturnCode::FOUND => self.found += 1,
            ReturnCode::CREATED => self.created += 1,
            ReturnCode::MEMORY => self.memory += 1,
            ReturnCode::MARSHAL_FAIL => self.marshal_fail += 1,
            other => return Err(format!("unexpected return code {other}")),
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FuzzReport {
    pub ops: u64,
    pub final_list_len: usize,
    pub allocated: usize,
    pub histogram: CodeHistogram,
}

/// An invariant violation at one operation. Replaying the same seed for
/// `prefix_len` operations reproduces it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("op {op_index} (handle {handle}): {detail}; minimal reproducing prefix: {prefix_len} ops")]
pub struct FuzzViolation {
    pub op_index: u64,
    pub prefix_len: u64,
    pub handle: u32,
    pub detail: String,
}

/// Pre-call observation of the whole store state.
pub struct StoreObservation {
    pub snapshot: MemorySnapshot,
    pub list: LogicList,
    pub ctx: Context,
    pub out: Slot,
}

pub fn observe(bank: &Bank, ctx: &Context, out: &Slot) -> Result<StoreObservation, String> {
    let list = to_ll(bank, ctx.rsrc_list, NodeRef::NIL).map_err(|e| e.to_string())?;
    Ok(StoreObservation {
        snapshot: bank.snapshot(),
        list,
        ctx: *ctx,
        out: *out,
    })
}

/// The full invariant battery for one `get_node` call.
pub fn check_get_node_transition(
    before: &StoreObservation,
    bank: &Bank,
    ctx: &Context,
    out: &Slot,
    handle: u32,
    code: ReturnCode,
) -> Result<(), String> {
    if !bank.valid_bank() {
        return Err("bank validity lost".into());
    }
    let list = to_ll(bank, ctx.rsrc_list, NodeRef::NIL)
        .map_err(|e| format!("list no longer translates: {e}"))?;
    if !linked_ll(bank, ctx.rsrc_list, NodeRef::NIL, &list) {
        return Err("resource list is not well-formed".into());
    }

    // Trichotomy: the pre-state determines which single behavior applies.
    let handles_before = list_handles(&before.snapshot, &before.list);
    let expected = if handles_before.contains(&handle) {
        ReturnCode::FOUND
    } else if before.snapshot.alloc_idx() < bank.capacity() {
        ReturnCode::CREATED
    } else {
        ReturnCode::MEMORY
    };
    if code != expected {
        return Err(format!("expected code {expected}, got {code}"));
    }

    match code {
        ReturnCode::FOUND => {
            if bank.snapshot() != before.snapshot {
                return Err("found case modified memory".into());
            }
            if *ctx != before.ctx || list != before.list {
                return Err("found case modified the list".into());
            }
            if !unchanged_ll(&before.snapshot, bank, &before.list) {
                return Err("found case broke list stability".into());
            }
            let position = before
                .list
                .iter()
                .position(|r| r == out.content)
                .ok_or("found case returned a ref outside the list")?;
            if handles_before[position] != handle {
                return Err("found case returned a node with the wrong handle".into());
            }
            if handles_before[..position].contains(&handle) {
                return Err("found case skipped an earlier match".into());
            }
        }
        ReturnCode::CREATED => {
            let new_cell = before.snapshot.alloc_idx();
            if out.content != NodeRef::cell(new_cell) {
                return Err("created case did not return the next allocable cell".into());
            }
            if bank.alloc_idx() != new_cell + 1 {
                return Err("created case did not advance the cursor by one".into());
            }
            if ctx.rsrc_list != out.content || ctx.field0 != before.ctx.field0 {
                return Err("created case did not install the new head".into());
            }
            if list != LogicList::cons_cell(new_cell, &before.list) {
                return Err("created case list is not [new] ++ old".into());
            }
            if !unchanged_ll(&before.snapshot, bank, &before.list) {
                return Err("created case disturbed the old elements".into());
            }
            let node = bank.node(new_cell);
            if node.handle != handle {
                return Err("created node carries the wrong handle".into());
            }
            if node.rsrc.name_size != 4 {
                return Err("created node name_size is not 4".into());
            }
            let tpm = handle_to_tpm(handle);
            let expected_name = [
                (tpm >> 24) as u8,
                (tpm >> 16) as u8,
                (tpm >> 8) as u8,
                tpm as u8,
            ];
            if node.rsrc.name[..4] != expected_name {
                return Err("created node name is not the marshaled TPM handle".into());
            }
            if node.rsrc.name[4..].iter().any(|b| *b != 0) || node.rsrc.aux != 0 {
                return Err("created node payload was not zeroed".into());
            }
        }
        ReturnCode::MEMORY => {
            if bank.snapshot() != before.snapshot {
                return Err("memory failure modified the bank".into());
            }
            if *ctx != before.ctx || *out != before.out {
                return Err("memory failure modified context or slot".into());
            }
        }
        other => return Err(format!("unexpected return code {other}")),
    }

    // Freshness and slot separation hold in every behavior.
    if !bank.is_fresh_free(list.iter().chain([ctx.rsrc_list, out.content])) {
        return Err("freshness lost: a known ref entered the allocable region".into());
    }
    if !sep_from_list(out.location(), &list) {
        return Err("slot location aliases the list".into());
    }
    Ok(())
}

/// Run `ops` seeded lookups with the invariant battery after each call.
pub fn run_fuzz(config: &FuzzConfig) -> Result<FuzzReport, FuzzViolation> {
    let violation = |op_index: u64, handle: u32, detail: String| FuzzViolation {
        op_index,
        prefix_len: op_index + 1,
        handle,
        detail,
    };
    let mut bank = Bank::new(config.bank_capacity).map_err(|e| violation(0, 0, e.to_string()))?;
    let mut ctx = Context::new();
    let mut out = Slot::new(0);
    let mut histogram = CodeHistogram::default();
    let alphabet = config.alphabet_size();
    let mut rng = ChaCha20Rng::seed_from_u64(config.seed);

    for op_index in 0..config.ops {
        let handle: u32 = rng.gen_range(0..alphabet);
        let before =
            observe(&bank, &ctx, &out).map_err(|detail| violation(op_index, handle, detail))?;
        let code = get_node(&mut bank, &mut ctx, handle, &mut out);
        histogram
            .bump(code)
            .map_err(|detail| violation(op_index, handle, detail))?;
        check_get_node_transition(&before, &bank, &ctx, &out, handle, code)
            .map_err(|detail| violation(op_index, handle, detail))?;
    }

    let final_list = to_ll(&bank, ctx.rsrc_list, NodeRef::NIL)
        .map_err(|e| violation(config.ops, 0, e.to_string()))?;
    Ok(FuzzReport {
        ops: config.ops,
        final_list_len: final_list.len(),
        allocated: bank.alloc_idx(),
        histogram,
    })
}
