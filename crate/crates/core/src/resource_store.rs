//! The resource store: a context holding the list head, node creation, and
//! the handle-keyed search-or-create operation.
//!
//! `get_node` has three disjoint, complete behaviors — found (616), created
//! (1611) and memory failure (833) — plus a degenerate marshal-failure code
//! (900) that is unreachable while the name buffer holds at least 4 bytes.

use crate::logic_lists::{to_ll, CycleError, Location, LogicList};
use crate::marshal::marshal_u32;
use crate::memory_model::{Bank, Memory, NodeRef};

/// Store-level return code.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct ReturnCode(u32);

impl ReturnCode {
    /// Search hit.
    pub const FOUND: ReturnCode = ReturnCode(616);
    /// Node creation succeeded (shares the success value of FOUND).
    pub const OK_CREATE: ReturnCode = ReturnCode::FOUND;
    /// Bank exhausted; nothing was modified.
    pub const MEMORY: ReturnCode = ReturnCode(833);
    /// A node was created and added as the new list head.
    pub const CREATED: ReturnCode = ReturnCode(1611);
    /// The resource name buffer could not hold the marshaled handle.
    pub const MARSHAL_FAIL: ReturnCode = ReturnCode(900);

    pub fn value(self) -> u32 {
        self.0
    }
}

impl std::fmt::Display for ReturnCode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The simplified context: one scalar field plus the resource-list head.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Context {
    pub field0: i32,
    pub rsrc_list: NodeRef,
}

impl Context {
    pub fn new() -> Context {
        Context::default()
    }
}

/// Output slot standing in for a node double-pointer argument. Slots form
/// their own location class, so they never alias bank cells.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Slot {
    pub id: usize,
    pub content: NodeRef,
}

impl Slot {
    pub fn new(id: usize) -> Slot {
        Slot {
            id,
            content: NodeRef::NIL,
        }
    }

    pub fn location(&self) -> Location {
        Location::Slot(self.id)
    }
}

/// Convert a resource handle to its TPM handle. Fixed as an injective
/// involution: `tpm = handle XOR 0x8000_0000`.
pub fn handle_to_tpm(handle: u32) -> u32 {
    handle ^ 0x8000_0000
}

/// The logic-list image of the store's resource list.
pub fn store_list<M: Memory>(mem: &M, ctx: &Context) -> Result<LogicList, CycleError> {
    to_ll(mem, ctx.rsrc_list, NodeRef::NIL)
}

/// Handles of a logic list's nodes, in list order.
pub fn list_handles<M: Memory>(mem: &M, ll: &LogicList) -> Vec<u32> {
    ll.iter()
        .map(|r| {
            mem.node(r.index().expect("logic lists contain no NIL entry"))
                .handle
        })
        .collect()
}

#[cfg(debug_assertions)]
fn debug_check_preconditions(bank: &Bank, ctx: &Context, out: &Slot) {
    use crate::logic_lists::linked_ll;
    debug_assert!(bank.valid_bank());
    let ll = store_list(bank, ctx).expect("resource list must be well-formed");
    debug_assert!(linked_ll(bank, ctx.rsrc_list, NodeRef::NIL, &ll));
    debug_assert!(
        bank.is_fresh_free(ll.iter().chain([ctx.rsrc_list, out.content])),
        "known refs must be separated from the allocable region"
    );
}

/// Allocate a node for `handle` and push it as the new list head.
///
/// On success the old head becomes the second element, `out` receives the
/// new ref, and the code is [`ReturnCode::OK_CREATE`]. On exhaustion the
/// code is [`ReturnCode::MEMORY`] and bank, context and slot are untouched.
pub fn create_node(bank: &mut Bank, ctx: &mut Context, handle: u32, out: &mut Slot) -> ReturnCode {
    #[cfg(debug_assertions)]
    debug_check_preconditions(bank, ctx, out);

    let r = bank.calloc_node();
    let Some(index) = r.index() else {
        return ReturnCode::MEMORY;
    };
    let node = bank.node_mut(index);
    node.handle = handle;
    node.next = ctx.rsrc_list;
    ctx.rsrc_list = r;
    out.content = r;
    ReturnCode::OK_CREATE
}

/// Search the resource list for `handle`; create and prepend a node when
/// absent.
///
/// Behaviors:
/// - found: `out` receives the first node in list order whose handle
///   matches, code 616, list untouched;
/// - created: a fresh node is pushed as the new head, its name is set to
///   the marshaled TPM handle (4 big-endian bytes), `out` receives it,
///   code 1611;
/// - memory failure: bank exhausted, nothing modified, code 833.
///
/// Code 900 signals that the marshaled handle did not fit the name buffer;
/// unreachable while [`crate::memory_model::NAME_CAPACITY`] >= 4.
pub fn get_node(bank: &mut Bank, ctx: &mut Context, handle: u32, out: &mut Slot) -> ReturnCode {
    #[cfg(debug_assertions)]
    debug_check_preconditions(bank, ctx, out);

    // Linear scan, first match wins. Duplicate handles are permitted.
    let mut cur = ctx.rsrc_list;
    let mut steps = 0usize;
    while let Some(index) = cur.index() {
        assert!(steps <= bank.capacity(), "resource list is circular");
        let node = bank.node(index);
        if node.handle == handle {
            out.content = cur;
            return ReturnCode::FOUND;
        }
        cur = node.next;
        steps += 1;
    }

    let tpm_handle = handle_to_tpm(handle);
    let code = create_node(bank, ctx, handle, out);
    if code != ReturnCode::OK_CREATE {
        return code;
    }

    let index = out.content.index().expect("create success sets the slot");
    let node = bank.node_mut(index);
    let mut offset = 0;
    match marshal_u32(tpm_handle, &mut node.rsrc.name, &mut offset) {
        Ok(()) => {
            node.rsrc.name_size = 4;
            ReturnCode::CREATED
        }
        Err(_) => ReturnCode::MARSHAL_FAIL,
    }
}
