//! Induced subgraphs of the Hamming graph H(n, k) with more than
//! `k^(n-1)` vertices and maximum degree at most `ceil(sqrt(n))`: their
//! construction, exact counting, instance certification, and brute-force
//! cross-checks on small instances.

pub mod brute_force;
pub mod cli;
pub mod construction;
pub mod counting;
pub mod error;
pub mod hamming;
pub mod isoperimetry;
mod logsign;
pub mod partition;
pub mod verifier;

pub use construction::{classify, in_witness, select_witness, witness_neighbors, zero_blocks, ClassLabel, Side, WitnessSpec};
pub use counting::{CountSummary, ResidueCounts};
pub use error::{Error, Result};
pub use hamming::{are_adjacent, neighbors, rank, unrank, HammingParams, Vertex, VertexId};
pub use partition::{make_partition, validate_partition, BalancedPartition, PartitionViolation};
pub use verifier::{certify, CertifyOptions, CheckStatus, Mode, WitnessCertificate};
