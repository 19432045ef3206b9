//! Witnesses that finitely generated infinite-index subgroups of free groups
//! are disjoint from nontrivial normal subgroups.
//!
//! Given a finitely generated subgroup `H ≤ F` of a free group, this crate
//! constructs — explicitly, with every intermediate object inspectable — a
//! nontrivial normal subgroup `N ⊴ F` with `H ∩ N = 1`, whenever one exists
//! (that is, whenever `H` has infinite index). The construction climbs a
//! tower of subgroups:
//!
//! * `H`, presented by its folded core graph ([`graph`]);
//! * `K = H * Q`, a finite-index completion of that graph ([`completion`]);
//! * `I ⊴ F`, the kernel of `K`'s coset action, with its Cayley cover and
//!   coset representatives `b₁ = 1, …, b_m` ([`normal_core`]);
//! * `I = (I ∩ H) * J`, an adapted free factorization, and
//!   `L = ⟨⟨J⟩⟩_I`, which meets `H` trivially ([`factor`]);
//! * `N = ⋂ᵢ bᵢ⁻¹ L bᵢ`, normal in `F` and still disjoint from `H`, with an
//!   explicit nontrivial witness element ([`pipeline`]).
//!
//! Every pipeline run re-verifies its own claims by bounded enumeration
//! before reporting. The [`cli`] module exposes the whole construction as a
//! command-line tool with deterministic text, JSON, and DOT output.

pub mod cli;
pub mod completion;
pub mod dot;
pub mod error;
pub mod factor;
pub mod graph;
pub mod normal_core;
pub mod pipeline;
mod union_find;
pub mod word;

pub use error::{Error, Result};
pub use graph::{CoreGraph, Cover, SubgroupIndex};
pub use pipeline::{run_pipeline, Chain, PipelineConfig, PipelineStatus, WitnessReport};
pub use word::{Alphabet, Word};
