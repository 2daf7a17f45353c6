//! Executable logic-list definitions.
//!
//! A [`LogicList`] is the mathematical image of a concrete linked list: the
//! finite sequence of node references from a start ref up to (excluding) an
//! end sentinel. [`to_ll`] translates concrete memory into that image,
//! [`linked_ll`] is the inductive well-formedness relation between the two,
//! and [`unchanged_ll`] states list stability between two snapshots. All of
//! them are total functions here: where the mathematical definitions are
//! partial, the executable versions return an explicit [`CycleError`] or
//! plain `false`.

use std::fmt;

use thiserror::Error;

use crate::memory_model::{Memory, NodeRef};

/// Finite ordered sequence of non-NIL node references.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LogicList {
    elems: Vec<NodeRef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicListError {
    #[error("logic lists contain no NIL entry")]
    NilElement,
}

impl LogicList {
    pub fn empty() -> LogicList {
        LogicList::default()
    }

    /// Build from references, rejecting NIL entries.
    pub fn from_refs<I>(refs: I) -> Result<LogicList, LogicListError>
    where
        I: IntoIterator<Item = NodeRef>,
    {
        let elems: Vec<NodeRef> = refs.into_iter().collect();
        if elems.iter().any(|r| r.is_nil()) {
            return Err(LogicListError::NilElement);
        }
        Ok(LogicList { elems })
    }

    /// Build from cell indices; non-NIL by construction.
    pub fn of_cells<I>(indices: I) -> LogicList
    where
        I: IntoIterator<Item = usize>,
    {
        LogicList {
            elems: indices.into_iter().map(NodeRef::cell).collect(),
        }
    }

    /// `[cell(index)] ++ tail`.
    pub fn cons_cell(index: usize, tail: &LogicList) -> LogicList {
        let mut elems = Vec::with_capacity(tail.len() + 1);
        elems.push(NodeRef::cell(index));
        elems.extend_from_slice(&tail.elems);
        LogicList { elems }
    }

    pub fn concat(&self, other: &LogicList) -> LogicList {
        let mut elems = self.elems.clone();
        elems.extend_from_slice(&other.elems);
        LogicList { elems }
    }

    /// Split into `(self[..at], self[at..])`. Panics if `at > len`.
    pub fn split_at(&self, at: usize) -> (LogicList, LogicList) {
        let (a, b) = self.elems.split_at(at);
        (
            LogicList { elems: a.to_vec() },
            LogicList { elems: b.to_vec() },
        )
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn get(&self, k: usize) -> Option<NodeRef> {
        self.elems.get(k).copied()
    }

    pub fn first(&self) -> Option<NodeRef> {
        self.elems.first().copied()
    }

    pub fn last(&self) -> Option<NodeRef> {
        self.elems.last().copied()
    }

    pub fn contains(&self, r: NodeRef) -> bool {
        self.elems.contains(&r)
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeRef> + '_ {
        self.elems.iter().copied()
    }

    pub fn as_slice(&self) -> &[NodeRef] {
        &self.elems
    }

    pub fn pairwise_distinct(&self) -> bool {
        self.elems
            .iter()
            .enumerate()
            .all(|(k, r)| !self.elems[k + 1..].contains(r))
    }
}

impl fmt::Debug for LogicList {
    // Prints as the bare element sequence: [#0, #1].
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.elems.iter()).finish()
    }
}

/// A whole-object memory location. Two locations are separated exactly when
/// they differ in class or in index, which is what byte-level separation
/// degenerates to in the index model.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Location {
    /// A node cell of the bank.
    BankCell(usize),
    /// A context object.
    Context(usize),
    /// An output slot (the model of a node double-pointer argument).
    Slot(usize),
}

impl Location {
    pub fn separated(self, other: Location) -> bool {
        self != other
    }
}

/// Separation between a location and every cell of a logic list.
pub fn sep_from_list(loc: Location, ll: &LogicList) -> bool {
    ll.iter().all(|r| {
        let i = r.index().expect("logic lists contain no NIL entry");
        loc.separated(Location::BankCell(i))
    })
}

/// The chain from `bgn` never reached `end` within `capacity + 1` steps:
/// the list is circular or `end` does not occur on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no path from {bgn:?} to {end:?}: cycle or unreachable end")]
pub struct CycleError {
    pub bgn: NodeRef,
    pub end: NodeRef,
}

/// Translate the concrete list from `bgn` up to (excluding) `end` into its
/// logic list.
///
/// `end` may be NIL for a full list or a node ref for a list segment that
/// stops just before it. The walk takes at most `capacity + 1` steps — a
/// well-formed chain visits each cell at most once — and reports
/// [`CycleError`] instead of diverging where the mathematical definition
/// would be undefined.
pub fn to_ll<M: Memory>(mem: &M, bgn: NodeRef, end: NodeRef) -> Result<LogicList, CycleError> {
    let mut elems = Vec::new();
    let mut cur = bgn;
    while cur != end {
        let Some(i) = cur.index() else {
            // Hit NIL before end: end is unreachable from bgn.
            return Err(CycleError { bgn, end });
        };
        if elems.len() > mem.capacity() {
            return Err(CycleError { bgn, end });
        }
        elems.push(cur);
        cur = mem.node(i).next;
    }
    Ok(LogicList { elems })
}

/// The inductive linking predicate: `ll` is exactly the well-formed list
/// from `bgn` to `end`.
///
/// Base case: `bgn == end` and `ll` is empty. Step case: `bgn != end`, `bgn`
/// is non-NIL and allocated, `ll = [bgn] ++ tail` with `bgn` separated from
/// every element of `tail`, and the tail links from `bgn`'s successor.
/// Returns `false` instead of faulting on any malformed input.
pub fn linked_ll<M: Memory>(mem: &M, bgn: NodeRef, end: NodeRef, ll: &LogicList) -> bool {
    let mut cur = bgn;
    let mut rest = ll.as_slice();
    loop {
        if cur == end {
            return rest.is_empty();
        }
        let Some(i) = cur.index() else {
            return false;
        };
        if i >= mem.alloc_idx() {
            return false;
        }
        let Some((&head, tail)) = rest.split_first() else {
            return false;
        };
        if head != cur || tail.contains(&cur) {
            return false;
        }
        cur = mem.node(i).next;
        rest = tail;
    }
}

/// Stability of a logic list between two memory states: every element is
/// allocated in both and keeps the same `next` field.
///
/// Both states must come from banks of the same capacity.
pub fn unchanged_ll<A: Memory, B: Memory>(before: &A, after: &B, ll: &LogicList) -> bool {
    assert_eq!(
        before.capacity(),
        after.capacity(),
        "snapshots must come from the same bank lineage"
    );
    ll.iter().all(|r| {
        let Some(i) = r.index() else {
            return false;
        };
        before.is_allocated(r) && after.is_allocated(r) && before.node(i).next == after.node(i).next
    })
}
