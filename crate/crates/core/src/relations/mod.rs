//! Linear relations among roots of unity: order bounds, primitive decomposition and
//! the two exhaustive root searches.

pub mod det819;
mod dz;
pub mod pair63;
mod partition;

pub use det819::{det_search_819, DetHit, DetSearchConfig, DetSearchReport};
pub use dz::{dz_admissible, dz_enumerate_maximal, OrderBoundQuery};
pub use pair63::{pair_search_63, PairHit};
pub use partition::{primitive_partition, PartitionVerdict, RelationTerm, MAX_RELATION_LEN};
