//! Finite groups, their subgroup lattices, and three covering invariants:
//! the covering number σ(G), the cyclic covering number σ_c(G), and the
//! injective hom-complexity IC(G;H), each with a checkable cover
//! certificate.
//!
//! ```
//! use grpinv::{parse_spec, Analyzed, Limits, ExtNat};
//!
//! let limits = Limits::default();
//! let g = Analyzed::from_spec(&parse_spec("C3^3").unwrap(), &limits).unwrap();
//! let h = Analyzed::from_spec(&parse_spec("C3").unwrap(), &limits).unwrap();
//! assert_eq!(grpinv::ic(&g, &h, &limits).unwrap().value, ExtNat::Finite(13));
//! assert_eq!(grpinv::sigma(&g, &limits).unwrap().value, ExtNat::Finite(4));
//! ```

pub mod corpus;
pub mod cover;
pub mod error;
pub mod extnat;
pub mod group;
pub mod invariants;
pub mod iso;
pub mod lattice;
pub mod limits;
pub mod mask;
pub mod report;
pub mod spec;
pub mod verify;

pub use error::{Error, Result};
pub use extnat::ExtNat;
pub use group::{build, FiniteGroup};
pub use invariants::{ic, sigma, sigma_c, Analyzed, InvariantKind, InvariantReport};
pub use lattice::{Subgroup, SubgroupLattice};
pub use limits::Limits;
pub use spec::{parse_spec, GroupSpec};

/// Version string embedded in JSON output.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
