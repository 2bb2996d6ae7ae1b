// SPDX-License-Identifier: Apache-2.0

//! Simplicity of Steinberg algebras attached to contracting self-similar
//! groupoids acting on the path spaces of finite graphs.
//!
//! The pipeline is: check congruence-freeness of the inverse semigroup
//! ([`structure`]), collapse each orbit of vertices to one ([`collapse`]),
//! compute the nucleus and its Moore diagram ([`nucleus`]), then run the
//! recurrent-subgroup and coset-kernel test ([`simplicity`]).
//!
//! Group elements are states of a partial transducer ([`machine`]); the
//! inverse semigroup and its algebra live in [`semigroup`] and [`algebra`].

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod catalog;
pub mod collapse;
pub mod graph;
pub mod lift;
pub mod machine;
pub mod nucleus;
pub mod pipeline;
pub mod scc;
pub mod semigroup;
pub mod simplicity;
pub mod structure;

pub use graph::{EdgeId, Graph, GraphError, Path, RawEdge, RawGraph, VertexId};

