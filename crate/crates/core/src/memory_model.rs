//! Node bank and static allocator.
//!
//! All node storage lives in a [`Bank`]: a fixed-capacity array of [`Node`]
//! cells plus a monotone allocation cursor. Node "addresses" are bank indices
//! wrapped in [`NodeRef`], so validity, separation and freshness are decidable
//! by plain index arithmetic. [`MemorySnapshot`] captures the full cell array
//! at a program point, which is what the stability predicates compare.

use std::fmt;

use thiserror::Error;

/// Byte capacity of a resource name. Must stay >= 4 so a marshaled 32-bit
/// handle always fits.
pub const NAME_CAPACITY: usize = 16;

/// Default bank capacity used by the CLI harnesses.
pub const DEFAULT_BANK_CAPACITY: usize = 64;

/// Reference to a node cell in a bank, or the null sentinel.
///
/// A non-NIL reference is only meaningful for banks whose capacity exceeds
/// its index; everything that stores refs into cells (the store operations,
/// the heap enumerator) keeps them in range.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct NodeRef(Option<usize>);

impl NodeRef {
    /// The null sentinel.
    pub const NIL: NodeRef = NodeRef(None);

    /// Reference to the cell at `index`.
    pub fn cell(index: usize) -> NodeRef {
        NodeRef(Some(index))
    }

    pub fn is_nil(self) -> bool {
        self.0.is_none()
    }

    /// The bank index, or `None` for NIL.
    pub fn index(self) -> Option<usize> {
        self.0
    }
}

impl fmt::Debug for NodeRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            None => write!(f, "NIL"),
            Some(i) => write!(f, "#{i}"),
        }
    }
}

/// Resource payload stored in a node: a fixed-capacity name buffer plus one
/// small stand-in scalar for the real library's nested unions.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Resource {
    pub name: [u8; NAME_CAPACITY],
    /// Bytes of `name` in use; never exceeds `NAME_CAPACITY`.
    pub name_size: usize,
    pub aux: u32,
}

impl Default for Resource {
    fn default() -> Self {
        Resource {
            name: [0; NAME_CAPACITY],
            name_size: 0,
            aux: 0,
        }
    }
}

/// One cell of the bank: a handle keying the node, the stored resource, and
/// the reference to the next list element.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Node {
    pub handle: u32,
    pub rsrc: Resource,
    pub next: NodeRef,
}

/// Read access to node memory, implemented by [`Bank`] and
/// [`MemorySnapshot`] so the list predicates work over either.
pub trait Memory {
    fn capacity(&self) -> usize;

    /// The allocation cursor: cells below it are allocated, cells at or
    /// above it form the allocable region.
    fn alloc_idx(&self) -> usize;

    fn node(&self, index: usize) -> &Node;

    /// Allocated means non-NIL with index below the cursor. This is the
    /// model's notion of validity.
    fn is_allocated(&self, r: NodeRef) -> bool {
        r.index().is_some_and(|i| i < self.alloc_idx())
    }

    /// `next` field of a non-NIL reference.
    fn next_of(&self, r: NodeRef) -> Option<NodeRef> {
        r.index().map(|i| self.node(i).next)
    }

    /// Freshness: every non-NIL reference in `refs` lies below the
    /// allocation cursor, i.e. all known references are separated from the
    /// allocable region `[alloc_idx, capacity)`.
    fn is_fresh_free<I>(&self, refs: I) -> bool
    where
        I: IntoIterator<Item = NodeRef>,
    {
        refs.into_iter().all(|r| match r.index() {
            None => true,
            Some(i) => i < self.alloc_idx(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BankError {
    #[error("bank capacity must be at least 1")]
    ZeroCapacity,
}

/// Fixed-capacity array of node cells with a monotone allocation cursor.
///
/// There is no deallocation: the cursor only moves forward, one cell per
/// successful [`Bank::calloc_node`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Bank {
    cells: Vec<Node>,
    alloc_idx: usize,
}

impl Bank {
    /// A bank of `capacity` zeroed cells with the cursor at 0.
    pub fn new(capacity: usize) -> Result<Bank, BankError> {
        if capacity == 0 {
            return Err(BankError::ZeroCapacity);
        }
        Ok(Bank {
            cells: vec![Node::default(); capacity],
            alloc_idx: 0,
        })
    }

    /// Bank validity: the cursor stays within `0..=capacity`. Maintained by
    /// every operation; exposed so harnesses can assert it.
    pub fn valid_bank(&self) -> bool {
        self.alloc_idx <= self.cells.len()
    }

    /// Allocate the next cell, zeroing every field, and return its
    /// reference. Returns NIL (leaving the bank untouched) once all cells
    /// have been handed out.
    pub fn calloc_node(&mut self) -> NodeRef {
        debug_assert!(self.valid_bank());
        if self.alloc_idx == self.cells.len() {
            return NodeRef::NIL;
        }
        let index = self.alloc_idx;
        // Mimics calloc: the handed-out cell is zeroed even if something
        // scribbled on the allocable region earlier.
        self.cells[index] = Node::default();
        self.alloc_idx += 1;
        debug_assert!(self.valid_bank());
        NodeRef::cell(index)
    }

    /// Deep copy of the current memory state.
    pub fn snapshot(&self) -> MemorySnapshot {
        MemorySnapshot {
            cells: self.cells.clone(),
            alloc_idx: self.alloc_idx,
        }
    }

    /// Mutable access to a cell. Callers own the ref-range discipline: any
    /// `next` written here must be NIL or below the bank's capacity.
    pub fn node_mut(&mut self, index: usize) -> &mut Node {
        &mut self.cells[index]
    }

    /// The node referenced by `r`, or `None` for NIL.
    pub fn get(&self, r: NodeRef) -> Option<&Node> {
        r.index().map(|i| &self.cells[i])
    }
}

impl Memory for Bank {
    fn capacity(&self) -> usize {
        self.cells.len()
    }

    fn alloc_idx(&self) -> usize {
        self.alloc_idx
    }

    fn node(&self, index: usize) -> &Node {
        &self.cells[index]
    }
}

/// Immutable copy of a bank's cells and cursor at one program point.
/// Plays the role of a label: the stability predicates relate two of these.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MemorySnapshot {
    pub(crate) cells: Vec<Node>,
    pub(crate) alloc_idx: usize,
}

impl Memory for MemorySnapshot {
    fn capacity(&self) -> usize {
        self.cells.len()
    }

    fn alloc_idx(&self) -> usize {
        self.alloc_idx
    }

    fn node(&self, index: usize) -> &Node {
        &self.cells[index]
    }
}
