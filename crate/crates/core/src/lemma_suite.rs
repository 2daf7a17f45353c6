//! Exhaustive small-scope lemma checker.
//!
//! Instead of proving the linked-list lemmas inductively, this module
//! enumerates every heap configuration up to a size bound and evaluates each
//! lemma's universally-quantified statement over all bindings of its free
//! variables within the heap. A lemma that holds on every configuration up
//! to the bound is reported with an empty counterexample list.
//!
//! A heap configuration fixes the number of allocated cells `n`, a `next`
//! assignment for each allocated cell into `{NIL} ∪ {0..n-1}`, and a handle
//! from the two-letter alphabet `{0, 1}` (handles are irrelevant to the
//! structural lemmas; two values witness match and mismatch). For each
//! `n <= N` that is `(n+1)^n * 2^n` configurations, so the stream yields
//! `Σ_{n=0..N} (n+1)^n * 2^n` heaps in total.
//!
//! The registry is deliberately paired with a mutant registry: one falsified
//! variant per lemma. A harness that cannot refute the mutants would not be
//! trusted to verify the lemmas, so the mutants are part of the test
//! surface.

use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use thiserror::Error;

use crate::logic_lists::{linked_ll, sep_from_list, to_ll, Location, LogicList};
use crate::memory_model::{Bank, Memory, MemorySnapshot, NodeRef};

/// Inclusive bounds for the size guard.
pub const MIN_MAX_NODES: usize = 1;
pub const MAX_MAX_NODES: usize = 6;

/// Witnesses kept per report; the violation count is always exact.
pub const MAX_WITNESSES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SuiteError {
    #[error("max-nodes must be within [{MIN_MAX_NODES}, {MAX_MAX_NODES}], got {0}")]
    ScopeOutOfRange(usize),
    #[error("unknown lemma: {0}")]
    UnknownLemma(String),
    #[error("invalid heap configuration: {0}")]
    InvalidHeapConfig(String),
}

fn validate_scope(max_nodes: usize) -> Result<(), SuiteError> {
    if !(MIN_MAX_NODES..=MAX_MAX_NODES).contains(&max_nodes) {
        return Err(SuiteError::ScopeOutOfRange(max_nodes));
    }
    Ok(())
}

/// One point of the enumeration: `n_allocated` cells inside a bank of
/// `capacity` cells, with fixed next and handle assignments.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HeapConfig {
    capacity: usize,
    next: Vec<NodeRef>,
    handles: Vec<u32>,
}

impl HeapConfig {
    /// Configurations with exactly `n` allocated cells: `(n+1)^n * 2^n`.
    pub fn config_count(n: usize) -> u64 {
        (n as u64 + 1).pow(n as u32) * (1u64 << n)
    }

    /// Closed-form total across `n = 0..=max_nodes`.
    pub fn total_configs(max_nodes: usize) -> u64 {
        (0..=max_nodes).map(Self::config_count).sum()
    }

    /// The `index`-th configuration with `n` allocated cells (mixed-radix
    /// decode; bijective for `index < config_count(n)`).
    pub fn decode(capacity: usize, n: usize, index: u64) -> HeapConfig {
        debug_assert!(n <= capacity);
        debug_assert!(index < Self::config_count(n));
        let mut rest = index;
        let radix = n as u64 + 1;
        let next = (0..n)
            .map(|_| {
                let digit = rest % radix;
                rest /= radix;
                match digit {
                    0 => NodeRef::NIL,
                    d => NodeRef::cell(d as usize - 1),
                }
            })
            .collect();
        let handles = (0..n)
            .map(|_| {
                let bit = (rest & 1) as u32;
                rest >>= 1;
                bit
            })
            .collect();
        debug_assert_eq!(rest, 0);
        HeapConfig {
            capacity,
            next,
            handles,
        }
    }

    /// Build a configuration by hand; next entries must be NIL or point at
    /// an allocated cell, handles come from `{0, 1}`.
    pub fn new(
        capacity: usize,
        next: Vec<NodeRef>,
        handles: Vec<u32>,
    ) -> Result<HeapConfig, SuiteError> {
        let n = next.len();
        if handles.len() != n {
            return Err(SuiteError::InvalidHeapConfig(
                "next and handle assignments must have equal length".into(),
            ));
        }
        if n > capacity {
            return Err(SuiteError::InvalidHeapConfig(format!(
                "{n} allocated cells exceed capacity {capacity}"
            )));
        }
        if let Some(r) = next.iter().find(|r| r.index().is_some_and(|i| i >= n)) {
            return Err(SuiteError::InvalidHeapConfig(format!(
                "next ref {r:?} points outside the allocated cells"
            )));
        }
        if handles.iter().any(|h| *h > 1) {
            return Err(SuiteError::InvalidHeapConfig(
                "handles come from the alphabet {0, 1}".into(),
            ));
        }
        Ok(HeapConfig {
            capacity,
            next,
            handles,
        })
    }

    pub fn n_allocated(&self) -> usize {
        self.next.len()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Realize the configuration as a bank. The allocated cells carry the
    /// assignments; the allocable region stays zeroed.
    pub fn build_bank(&self) -> Bank {
        let mut bank = Bank::new(self.capacity).expect("capacity >= 1");
        for _ in 0..self.n_allocated() {
            bank.calloc_node();
        }
        for (i, (next, handle)) in self.next.iter().zip(&self.handles).enumerate() {
            let node = bank.node_mut(i);
            node.next = *next;
            node.handle = *handle;
        }
        bank
    }
}

impl fmt::Debug for HeapConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} next={:?} handles={:?}",
            self.n_allocated(),
            self.next,
            self.handles
        )
    }
}

/// Every heap configuration with up to `max_nodes` allocated cells, each
/// realized in a bank of capacity `max_nodes`.
pub fn enumerate_heaps(max_nodes: usize) -> Result<impl Iterator<Item = HeapConfig>, SuiteError> {
    validate_scope(max_nodes)?;
    Ok((0..=max_nodes).flat_map(move |n| {
        (0..HeapConfig::config_count(n)).map(move |index| HeapConfig::decode(max_nodes, n, index))
    }))
}

// ---------------------------------------------------------------------------
// Binding helpers
// ---------------------------------------------------------------------------

fn ref_key(r: NodeRef) -> usize {
    r.index().map_or(0, |i| i + 1)
}

/// Per-heap table of translation images for every (bgn, end) pair, plus the
/// deduplicated candidate logic lists observable in the heap.
struct Segments {
    refs: Vec<NodeRef>,
    table: Vec<Option<LogicList>>,
}

impl Segments {
    fn compute(mem: &impl Memory) -> Segments {
        let mut refs = vec![NodeRef::NIL];
        refs.extend((0..mem.capacity()).map(NodeRef::cell));
        let width = refs.len();
        let mut table = Vec::with_capacity(width * width);
        for &b in &refs {
            for &e in &refs {
                table.push(to_ll(mem, b, e).ok());
            }
        }
        Segments { refs, table }
    }

    fn image(&self, b: NodeRef, e: NodeRef) -> Option<&LogicList> {
        self.table[ref_key(b) * self.refs.len() + ref_key(e)].as_ref()
    }

    /// Distinct translation images, the candidate space for list-valued
    /// quantifiers.
    fn candidates(&self) -> Vec<&LogicList> {
        let mut out: Vec<&LogicList> = Vec::new();
        for ll in self.table.iter().flatten() {
            if !out.contains(&ll) {
                out.push(ll);
            }
        }
        out
    }
}

/// A single-field memory tweak; applying one to a snapshot yields the
/// second snapshot of a stability binding.
#[derive(Clone, Copy, PartialEq, Eq)]
enum Tweak {
    Next { cell: usize, to: NodeRef },
    Handle { cell: usize, to: u32 },
    Aux { cell: usize },
    NameByte { cell: usize },
    NameSize { cell: usize },
    AllocIdx,
}

impl fmt::Display for Tweak {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tweak::Next { cell, to } => write!(f, "next({cell}):={to:?}"),
            Tweak::Handle { cell, to } => write!(f, "handle({cell}):={to}"),
            Tweak::Aux { cell } => write!(f, "aux({cell})+=1"),
            Tweak::NameByte { cell } => write!(f, "name[0]({cell})^=0xff"),
            Tweak::NameSize { cell } => write!(f, "name_size({cell})+=1"),
            Tweak::AllocIdx => write!(f, "alloc_idx-=1"),
        }
    }
}

fn apply_tweak(snap: &MemorySnapshot, tweak: Tweak) -> MemorySnapshot {
    let mut out = snap.clone();
    match tweak {
        Tweak::Next { cell, to } => out.cells[cell].next = to,
        Tweak::Handle { cell, to } => out.cells[cell].handle = to,
        Tweak::Aux { cell } => out.cells[cell].rsrc.aux = out.cells[cell].rsrc.aux.wrapping_add(1),
        Tweak::NameByte { cell } => out.cells[cell].rsrc.name[0] ^= 0xff,
        Tweak::NameSize { cell } => out.cells[cell].rsrc.name_size += 1,
        Tweak::AllocIdx => out.alloc_idx -= 1,
    }
    out
}

/// Tweaks that can influence the list predicates: every next-field
/// rewiring plus the cursor decrement.
fn structural_tweaks(capacity: usize, alloc_idx: usize) -> Vec<Tweak> {
    let mut out = Vec::new();
    for cell in 0..capacity {
        out.push(Tweak::Next {
            cell,
            to: NodeRef::NIL,
        });
        for to in 0..capacity {
            out.push(Tweak::Next {
                cell,
                to: NodeRef::cell(to),
            });
        }
    }
    if alloc_idx > 0 {
        out.push(Tweak::AllocIdx);
    }
    out
}

/// The full single-field mutation family: structural tweaks plus payload
/// mutations the predicates must ignore.
fn all_tweaks(capacity: usize, alloc_idx: usize) -> Vec<Tweak> {
    let mut out = structural_tweaks(capacity, alloc_idx);
    for cell in 0..capacity {
        out.push(Tweak::Handle { cell, to: 0 });
        out.push(Tweak::Handle { cell, to: 1 });
        out.push(Tweak::Aux { cell });
        out.push(Tweak::NameByte { cell });
        out.push(Tweak::NameSize { cell });
    }
    out
}

fn allocated_distinct(mem: &impl Memory, ll: &LogicList) -> bool {
    ll.iter().all(|r| mem.is_allocated(r)) && ll.pairwise_distinct()
}

// ---------------------------------------------------------------------------
// Registered lemmas
// ---------------------------------------------------------------------------

/// L-correspond: linked_ll(m,b,e,ll) ⟺ to_ll(m,b,e) = ll without a cycle
/// error, with allocated, pairwise-distinct elements.
fn check_correspond(bank: &Bank) -> Vec<String> {
    let segs = Segments::compute(bank);
    let candidates = segs.candidates();
    let mut bad = Vec::new();
    for &b in &segs.refs {
        for &e in &segs.refs {
            // Forward: a well-formed translation image must link.
            if let Some(ll) = segs.image(b, e) {
                if allocated_distinct(bank, ll) && !linked_ll(bank, b, e, ll) {
                    bad.push(format!("forward: bgn={b:?} end={e:?} ll={ll:?}"));
                }
            }
            // Backward: anything that links must be that image.
            for ll in &candidates {
                if linked_ll(bank, b, e, ll)
                    && !(segs.image(b, e) == Some(ll) && allocated_distinct(bank, ll))
                {
                    bad.push(format!("backward: bgn={b:?} end={e:?} ll={ll:?}"));
                }
            }
        }
    }
    bad
}

/// L-split: a linked l1 ++ l2 with nonempty l2 splits at q = head(l2) into
/// linked halves.
fn check_split(bank: &Bank) -> Vec<String> {
    let segs = Segments::compute(bank);
    let mut bad = Vec::new();
    for &b in &segs.refs {
        for &e in &segs.refs {
            let Some(ll) = segs.image(b, e) else { continue };
            if !linked_ll(bank, b, e, ll) {
                continue;
            }
            for at in 0..ll.len() {
                let (l1, l2) = ll.split_at(at);
                let q = l2.first().expect("l2 nonempty");
                if !(linked_ll(bank, b, q, &l1) && linked_ll(bank, q, e, &l2)) {
                    bad.push(format!("bgn={b:?} end={e:?} mid={q:?} ll={ll:?}"));
                }
            }
        }
    }
    bad
}

/// L-merge: linked halves whose elements are separated from each other and
/// from the far end concatenate into a linked whole.
fn check_merge(bank: &Bank) -> Vec<String> {
    let segs = Segments::compute(bank);
    let mut bad = Vec::new();
    for &b in &segs.refs {
        for &q in &segs.refs {
            let Some(l1) = segs.image(b, q) else { continue };
            if !linked_ll(bank, b, q, l1) {
                continue;
            }
            for &e in &segs.refs {
                let Some(l2) = segs.image(q, e) else { continue };
                if !linked_ll(bank, q, e, l2) {
                    continue;
                }
                let separated = l1.iter().all(|r| !l2.contains(r)) && !l1.contains(e);
                if !separated {
                    continue;
                }
                if !linked_ll(bank, b, e, &l1.concat(l2)) {
                    bad.push(format!("bgn={b:?} mid={q:?} end={e:?} l1={l1:?} l2={l2:?}"));
                }
            }
        }
    }
    bad
}

/// L-stable: a linked list stays linked in any snapshot that leaves its
/// elements unchanged.
fn check_stable(bank: &Bank) -> Vec<String> {
    let segs = Segments::compute(bank);
    let s1 = bank.snapshot();
    let tweaks = all_tweaks(bank.capacity(), bank.alloc_idx());
    let mut bad = Vec::new();
    for &b in &segs.refs {
        for &e in &segs.refs {
            let Some(ll) = segs.image(b, e) else { continue };
            if !linked_ll(&s1, b, e, ll) {
                continue;
            }
            for &tweak in &tweaks {
                let s2 = apply_tweak(&s1, tweak);
                if crate::logic_lists::unchanged_ll(&s1, &s2, ll) && !linked_ll(&s2, b, e, ll) {
                    bad.push(format!("bgn={b:?} end={e:?} ll={ll:?} tweak={tweak}"));
                }
            }
        }
    }
    bad
}

/// L-unchanged-trans: unchanged_ll composes across an intermediate
/// snapshot.
fn check_unchanged_trans(bank: &Bank) -> Vec<String> {
    use crate::logic_lists::unchanged_ll;
    let segs = Segments::compute(bank);
    let candidates = segs.candidates();
    let s1 = bank.snapshot();
    let tweaks = structural_tweaks(bank.capacity(), bank.alloc_idx());
    let mut bad = Vec::new();
    for &t1 in &tweaks {
        let s2 = apply_tweak(&s1, t1);
        for &t2 in &tweaks {
            if matches!(t2, Tweak::AllocIdx) && s2.alloc_idx() == 0 {
                continue;
            }
            let s3 = apply_tweak(&s2, t2);
            for ll in &candidates {
                if unchanged_ll(&s1, &s2, ll)
                    && unchanged_ll(&s2, &s3, ll)
                    && !unchanged_ll(&s1, &s3, ll)
                {
                    bad.push(format!("ll={ll:?} t1={t1} t2={t2}"));
                }
            }
        }
    }
    bad
}

/// L-cons-head: an allocated node separated from a linked list and from its
/// end, whose next is the list head, extends it to a linked list.
fn check_cons_head(bank: &Bank) -> Vec<String> {
    check_cons_head_inner(bank, true)
}

fn check_cons_head_inner(bank: &Bank, with_separation_guard: bool) -> Vec<String> {
    let segs = Segments::compute(bank);
    let mut bad = Vec::new();
    for cell in 0..bank.alloc_idx() {
        let r = NodeRef::cell(cell);
        let b = bank.node(cell).next;
        for &e in &segs.refs {
            let Some(ll) = segs.image(b, e) else { continue };
            if !linked_ll(bank, b, e, ll) {
                continue;
            }
            if with_separation_guard && (ll.contains(r) || e == r) {
                continue;
            }
            if !linked_ll(bank, r, e, &LogicList::cons_cell(cell, ll)) {
                bad.push(format!("r={r:?} end={e:?} ll={ll:?}"));
            }
        }
    }
    bad
}

/// L-distinct: a linked logic list has pairwise-distinct elements.
fn check_distinct(bank: &Bank) -> Vec<String> {
    let segs = Segments::compute(bank);
    let candidates = segs.candidates();
    let mut bad = Vec::new();
    for &b in &segs.refs {
        for &e in &segs.refs {
            for ll in &candidates {
                if linked_ll(bank, b, e, ll) && !ll.pairwise_distinct() {
                    bad.push(format!("bgn={b:?} end={e:?} ll={ll:?}"));
                }
            }
        }
    }
    bad
}

/// L-sep-cons: separation from [r] ++ ll decomposes into separation from r
/// and separation from ll.
fn check_sep_cons(bank: &Bank) -> Vec<String> {
    let segs = Segments::compute(bank);
    let mut locations = vec![Location::Context(0), Location::Slot(0)];
    locations.extend((0..bank.capacity()).map(Location::BankCell));
    let mut bad = Vec::new();
    for ll in segs.candidates() {
        for cell in 0..bank.capacity() {
            let consed = LogicList::cons_cell(cell, ll);
            for &loc in &locations {
                let whole = sep_from_list(loc, &consed);
                let parts = loc.separated(Location::BankCell(cell)) && sep_from_list(loc, ll);
                if whole != parts {
                    bad.push(format!("loc={loc:?} r=#{cell} ll={ll:?}"));
                }
            }
        }
    }
    bad
}

/// L-nth-bounds: every element of a linked list is allocated and the last
/// element's next is the end sentinel.
fn check_nth_bounds(bank: &Bank) -> Vec<String> {
    let segs = Segments::compute(bank);
    let mut bad = Vec::new();
    for &b in &segs.refs {
        for &e in &segs.refs {
            let Some(ll) = segs.image(b, e) else { continue };
            if !linked_ll(bank, b, e, ll) {
                continue;
            }
            if let Some(k) = (0..ll.len()).find(|&k| !bank.is_allocated(ll.get(k).unwrap())) {
                bad.push(format!("bgn={b:?} end={e:?} ll={ll:?} k={k} unallocated"));
            }
            if let Some(last) = ll.last() {
                if bank.node(last.index().unwrap()).next != e {
                    bad.push(format!("bgn={b:?} end={e:?} ll={ll:?} next(last)!=end"));
                }
            }
        }
    }
    bad
}

// ---------------------------------------------------------------------------
// Mutants: one deliberately falsified variant per lemma. A harness that
// cannot refute these is not exploring the binding space.
// ---------------------------------------------------------------------------

/// Forward direction without the allocation requirement.
fn mutant_correspond(bank: &Bank) -> Vec<String> {
    let segs = Segments::compute(bank);
    let mut bad = Vec::new();
    for &b in &segs.refs {
        for &e in &segs.refs {
            if let Some(ll) = segs.image(b, e) {
                if ll.pairwise_distinct() && !linked_ll(bank, b, e, ll) {
                    bad.push(format!("bgn={b:?} end={e:?} ll={ll:?}"));
                }
            }
        }
    }
    bad
}

/// Claims the left half links from the split point.
fn mutant_split(bank: &Bank) -> Vec<String> {
    let segs = Segments::compute(bank);
    let mut bad = Vec::new();
    for &b in &segs.refs {
        for &e in &segs.refs {
            let Some(ll) = segs.image(b, e) else { continue };
            if !linked_ll(bank, b, e, ll) {
                continue;
            }
            for at in 0..ll.len() {
                let (l1, l2) = ll.split_at(at);
                let q = l2.first().expect("l2 nonempty");
                if !linked_ll(bank, q, e, &l1) {
                    bad.push(format!("bgn={b:?} end={e:?} mid={q:?}"));
                }
            }
        }
    }
    bad
}

/// Merge without the end-separation hypothesis.
fn mutant_merge(bank: &Bank) -> Vec<String> {
    let segs = Segments::compute(bank);
    let mut bad = Vec::new();
    for &b in &segs.refs {
        for &q in &segs.refs {
            let Some(l1) = segs.image(b, q) else { continue };
            if !linked_ll(bank, b, q, l1) {
                continue;
            }
            for &e in &segs.refs {
                let Some(l2) = segs.image(q, e) else { continue };
                if !linked_ll(bank, q, e, l2) {
                    continue;
                }
                if !l1.iter().all(|r| !l2.contains(r)) {
                    continue;
                }
                if !linked_ll(bank, b, e, &l1.concat(l2)) {
                    bad.push(format!("bgn={b:?} mid={q:?} end={e:?}"));
                }
            }
        }
    }
    bad
}

/// Stability without the unchanged_ll hypothesis.
fn mutant_stable(bank: &Bank) -> Vec<String> {
    let segs = Segments::compute(bank);
    let s1 = bank.snapshot();
    let tweaks = all_tweaks(bank.capacity(), bank.alloc_idx());
    let mut bad = Vec::new();
    for &b in &segs.refs {
        for &e in &segs.refs {
            let Some(ll) = segs.image(b, e) else { continue };
            if !linked_ll(&s1, b, e, ll) {
                continue;
            }
            for &tweak in &tweaks {
                let s2 = apply_tweak(&s1, tweak);
                if !linked_ll(&s2, b, e, ll) {
                    bad.push(format!("bgn={b:?} end={e:?} tweak={tweak}"));
                }
            }
        }
    }
    bad
}

/// Transitivity with the second hypothesis dropped.
fn mutant_unchanged_trans(bank: &Bank) -> Vec<String> {
    use crate::logic_lists::unchanged_ll;
    let segs = Segments::compute(bank);
    let candidates = segs.candidates();
    let s1 = bank.snapshot();
    let tweaks = structural_tweaks(bank.capacity(), bank.alloc_idx());
    let mut bad = Vec::new();
    for &t1 in &tweaks {
        let s2 = apply_tweak(&s1, t1);
        for &t2 in &tweaks {
            if matches!(t2, Tweak::AllocIdx) && s2.alloc_idx() == 0 {
                continue;
            }
            let s3 = apply_tweak(&s2, t2);
            for ll in &candidates {
                if unchanged_ll(&s1, &s2, ll) && !unchanged_ll(&s1, &s3, ll) {
                    bad.push(format!("ll={ll:?} t1={t1} t2={t2}"));
                }
            }
        }
    }
    bad
}

/// Cons without the separation guard; refuted by the self-loop heap.
fn mutant_cons_head(bank: &Bank) -> Vec<String> {
    check_cons_head_inner(bank, false)
}

/// Negated conclusion: claims every linked list has a duplicate.
fn mutant_distinct(bank: &Bank) -> Vec<String> {
    let segs = Segments::compute(bank);
    let candidates = segs.candidates();
    let mut bad = Vec::new();
    for &b in &segs.refs {
        for &e in &segs.refs {
            for ll in &candidates {
                if linked_ll(bank, b, e, ll) && ll.pairwise_distinct() {
                    bad.push(format!("bgn={b:?} end={e:?} ll={ll:?}"));
                }
            }
        }
    }
    bad
}

/// Ignores the head when decomposing separation.
fn mutant_sep_cons(bank: &Bank) -> Vec<String> {
    let segs = Segments::compute(bank);
    let mut locations = vec![Location::Context(0), Location::Slot(0)];
    locations.extend((0..bank.capacity()).map(Location::BankCell));
    let mut bad = Vec::new();
    for ll in segs.candidates() {
        for cell in 0..bank.capacity() {
            let consed = LogicList::cons_cell(cell, ll);
            for &loc in &locations {
                if sep_from_list(loc, &consed) != sep_from_list(loc, ll) {
                    bad.push(format!("loc={loc:?} r=#{cell} ll={ll:?}"));
                }
            }
        }
    }
    bad
}

/// Claims the last element's next is always NIL.
fn mutant_nth_bounds(bank: &Bank) -> Vec<String> {
    let segs = Segments::compute(bank);
    let mut bad = Vec::new();
    for &b in &segs.refs {
        for &e in &segs.refs {
            let Some(ll) = segs.image(b, e) else { continue };
            if !linked_ll(bank, b, e, ll) {
                continue;
            }
            if let Some(last) = ll.last() {
                if bank.node(last.index().unwrap()).next != NodeRef::NIL {
                    bad.push(format!("bgn={b:?} end={e:?} ll={ll:?}"));
                }
            }
        }
    }
    bad
}

// ---------------------------------------------------------------------------
// Registry and runner
// ---------------------------------------------------------------------------

/// A named executable lemma: the check returns one entry per falsifying
/// binding found in the heap.
pub struct Lemma {
    pub name: &'static str,
    check: fn(&Bank) -> Vec<String>,
}

impl Lemma {
    pub fn check_bank(&self, bank: &Bank) -> Vec<String> {
        (self.check)(bank)
    }
}

const REGISTRY: &[Lemma] = &[
    Lemma {
        name: "L-correspond",
        check: check_correspond,
    },
    Lemma {
        name: "L-split",
        check: check_split,
    },
    Lemma {
        name: "L-merge",
        check: check_merge,
    },
    Lemma {
        name: "L-stable",
        check: check_stable,
    },
    Lemma {
        name: "L-unchanged-trans",
        check: check_unchanged_trans,
    },
    Lemma {
        name: "L-cons-head",
        check: check_cons_head,
    },
    Lemma {
        name: "L-distinct",
        check: check_distinct,
    },
    Lemma {
        name: "L-sep-cons",
        check: check_sep_cons,
    },
    Lemma {
        name: "L-nth-bounds",
        check: check_nth_bounds,
    },
];

const MUTANTS: &[Lemma] = &[
    Lemma {
        name: "L-correspond~no-alloc-guard",
        check: mutant_correspond,
    },
    Lemma {
        name: "L-split~wrong-segment",
        check: mutant_split,
    },
    Lemma {
        name: "L-merge~no-end-sep",
        check: mutant_merge,
    },
    Lemma {
        name: "L-stable~no-unchanged-hyp",
        check: mutant_stable,
    },
    Lemma {
        name: "L-unchanged-trans~dropped-hyp",
        check: mutant_unchanged_trans,
    },
    Lemma {
        name: "L-cons-head~no-sep-guard",
        check: mutant_cons_head,
    },
    Lemma {
        name: "L-distinct~negated",
        check: mutant_distinct,
    },
    Lemma {
        name: "L-sep-cons~dropped-head",
        check: mutant_sep_cons,
    },
    Lemma {
        name: "L-nth-bounds~nil-tail",
        check: mutant_nth_bounds,
    },
];

/// The registered lemmas, every one a theorem of the model.
pub fn registry() -> &'static [Lemma] {
    REGISTRY
}

/// Falsified variants, one per registered lemma (same order, name prefixed
/// by the original).
pub fn mutants() -> &'static [Lemma] {
    MUTANTS
}

fn find_lemma(name: &str) -> Result<&'static Lemma, SuiteError> {
    REGISTRY
        .iter()
        .chain(MUTANTS)
        .find(|l| l.name == name)
        .ok_or_else(|| SuiteError::UnknownLemma(name.to_string()))
}

/// Evaluate one lemma over all bindings within one heap.
pub fn check_lemma(name: &str, heap: &HeapConfig) -> Result<bool, SuiteError> {
    let lemma = find_lemma(name)?;
    Ok(lemma.check_bank(&heap.build_bank()).is_empty())
}

/// A falsifying binding, with the heap it was found in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub heap: HeapConfig,
    pub binding: String,
}

/// Per-lemma result of a suite run.
#[derive(Debug, Clone)]
pub struct LemmaReport {
    pub lemma_name: String,
    pub configs_checked: u64,
    /// Exact number of falsifying bindings across all configurations.
    pub violations: u64,
    /// The first [`MAX_WITNESSES`] counterexamples in enumeration order.
    pub counterexamples: Vec<Counterexample>,
    pub elapsed_ms: u64,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Check one lemma against every heap configuration up to `max_nodes`.
///
/// Heaps are scanned in deterministic enumeration order; chunks of the
/// index space run in parallel and are merged back in order, so two runs
/// produce identical reports modulo `elapsed_ms`.
pub fn run_lemma(lemma: &Lemma, max_nodes: usize) -> Result<LemmaReport, SuiteError> {
    validate_scope(max_nodes)?;
    const CHUNK: u64 = 1024;
    let started = Instant::now();
    let mut configs_checked = 0u64;
    let mut violations = 0u64;
    let mut counterexamples = Vec::new();
    for n in 0..=max_nodes {
        let count = HeapConfig::config_count(n);
        let chunks = count.div_ceil(CHUNK);
        let results: Vec<(u64, Vec<Counterexample>)> = (0..chunks)
            .into_par_iter()
            .map(|chunk| {
                let lo = chunk * CHUNK;
                let hi = (lo + CHUNK).min(count);
                let mut found = 0u64;
                let mut witnesses = Vec::new();
                for index in lo..hi {
                    let heap = HeapConfig::decode(max_nodes, n, index);
                    let bank = heap.build_bank();
                    let bindings = lemma.check_bank(&bank);
                    found += bindings.len() as u64;
                    for binding in bindings {
                        if witnesses.len() < MAX_WITNESSES {
                            witnesses.push(Counterexample {
                                heap: heap.clone(),
                                binding,
                            });
                        }
                    }
                }
                (found, witnesses)
            })
            .collect();
        for (found, witnesses) in results {
            violations += found;
            for w in witnesses {
                if counterexamples.len() < MAX_WITNESSES {
                    counterexamples.push(w);
                }
            }
        }
        configs_checked += count;
    }
    Ok(LemmaReport {
        lemma_name: lemma.name.to_string(),
        configs_checked,
        violations,
        counterexamples,
        elapsed_ms: started.elapsed().as_millis() as u64,
    })
}

/// Run every registered lemma. The suite passes iff every report has an
/// empty counterexample list.
pub fn run_suite(max_nodes: usize) -> Result<Vec<LemmaReport>, SuiteError> {
    validate_scope(max_nodes)?;
    registry().iter().map(|l| run_lemma(l, max_nodes)).collect()
}

pub fn suite_passes(reports: &[LemmaReport]) -> bool {
    reports.iter().all(LemmaReport::passed)
}
