use crate::mask::MASK_CAPACITY;

/// Resource limits shared by every computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest group order that may be constructed.
    pub max_order: usize,
    /// Largest number of subgroups a lattice may hold.
    pub max_subgroups: usize,
    /// Branch-and-bound node budget for a single cover instance.
    pub solver_nodes: u64,
    /// Orders up to this bound get an exhaustive associativity check;
    /// larger tables are checked with Light's test on a generating set.
    pub exhaustive_assoc_bound: usize,
    /// Test hook: makes the cover solver report a non-minimal value.
    pub fault_injection: bool,
}

impl Limits {
    pub const DEFAULT_MAX_ORDER: usize = 128;
    pub const HARD_MAX_ORDER: usize = MASK_CAPACITY;

    pub fn with_max_order(mut self, max_order: usize) -> Self {
        self.max_order = max_order.min(Self::HARD_MAX_ORDER);
        self
    }

    pub fn with_solver_nodes(mut self, nodes: u64) -> Self {
        self.solver_nodes = nodes;
        self
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_order: Self::DEFAULT_MAX_ORDER,
            max_subgroups: 200_000,
            solver_nodes: 100_000_000,
            exhaustive_assoc_bound: 128,
            fault_injection: false,
        }
    }
}
