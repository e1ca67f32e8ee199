//! Exact combinatorics for r-cross t-intersecting families of set partitions.

pub mod audit;
pub mod constructions;
pub mod covers;
pub mod error;
pub mod format;
pub mod interval;
pub mod iso;
pub mod partition;
pub mod pool;
pub mod search;
pub mod stirling;
pub mod verify;

pub use error::{Error, Result};
pub use partition::{enumerate_partitions, universe, Block, Family, GroundSet, Partition};
pub use pool::Parallelism;
pub use search::{DualContext, SearchResult, TupleContext};
pub use stirling::{binomial, stirling, BigCount};
pub use verify::{verify_theorem, TheoremId, TheoremReport};
