// SPDX-License-Identifier: Apache-2.0

//! Nonzero elements `p g q*` of the inverse semigroup generated by the graph
//! and the groupoid. Zero is `None` throughout.

use alloc::string::String;
use core::fmt::Write as _;

use crate::graph::{EdgeId, Path, VertexId};
use crate::machine::{ElementRef, MachineError, MachineStore};

/// `p g q*` with `g ∈ Iso(r(q), r(p))`; acts on `q Γ*` by `q m ↦ p g(m)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalElement {
    left: Path,
    group: ElementRef,
    right: Path,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SemigroupError {
    #[error("range/domain mismatch: need dom g = r(q) and im g = r(p)")]
    Mismatch,
}

impl CanonicalElement {
    pub fn make(store: &MachineStore, p: Path, g: ElementRef, q: Path) -> Result<CanonicalElement, SemigroupError> {
        if store.dom(g) != q.range() || store.im(g) != p.range() {
            return Err(SemigroupError::Mismatch);
        }
        Ok(CanonicalElement {
            left: p,
            group: g,
            right: q,
        })
    }

    /// The idempotent `v`.
    pub fn vertex(store: &MachineStore, v: VertexId) -> CanonicalElement {
        CanonicalElement {
            left: Path::anchor(v),
            group: store.identity(v),
            right: Path::anchor(v),
        }
    }

    /// `e = e·id_{r(e)}·r(e)*`.
    pub fn edge(store: &MachineStore, e: EdgeId) -> CanonicalElement {
        let graph = store.graph();
        CanonicalElement {
            left: Path::edge(graph, e),
            group: store.identity(graph.rng(e)),
            right: Path::anchor(graph.rng(e)),
        }
    }

    pub fn edge_star(store: &MachineStore, e: EdgeId) -> CanonicalElement {
        let graph = store.graph();
        CanonicalElement {
            left: Path::anchor(graph.rng(e)),
            group: store.identity(graph.rng(e)),
            right: Path::edge(graph, e),
        }
    }

    /// A path `p` viewed as `p·id·r(p)*`.
    pub fn path(store: &MachineStore, p: &Path) -> CanonicalElement {
        CanonicalElement {
            left: p.clone(),
            group: store.identity(p.range()),
            right: Path::anchor(p.range()),
        }
    }

    /// `pp*`.
    pub fn projection(store: &MachineStore, p: &Path) -> CanonicalElement {
        CanonicalElement {
            left: p.clone(),
            group: store.identity(p.range()),
            right: p.clone(),
        }
    }

    /// A groupoid element `g = im(g)·g·dom(g)*`.
    pub fn group(store: &MachineStore, g: ElementRef) -> CanonicalElement {
        CanonicalElement {
            left: Path::anchor(store.im(g)),
            group: g,
            right: Path::anchor(store.dom(g)),
        }
    }

    pub fn left(&self) -> &Path {
        &self.left
    }

    pub fn group_part(&self) -> ElementRef {
        self.group
    }

    pub fn right(&self) -> &Path {
        &self.right
    }

    /// `(p g q*)* = q g⁻¹ p*`.
    pub fn star(&self, store: &mut MachineStore) -> CanonicalElement {
        let inv = store.inverse(self.group);
        CanonicalElement {
            left: self.right.clone(),
            group: inv,
            right: self.left.clone(),
        }
    }

    pub fn is_idempotent(&self, store: &MachineStore) -> bool {
        self.left == self.right && store.is_identity(self.group)
    }

    /// Canonical product; `Ok(None)` is zero.
    pub fn multiply(&self, t: &CanonicalElement, store: &mut MachineStore) -> Result<Option<CanonicalElement>, MachineError> {
        let graph = store.graph().clone();
        let (p, g, q) = (&self.left, self.group, &self.right);
        let (w, h, x) = (&t.left, t.group, &t.right);
        if let Some(m) = w.strip_prefix(q, &graph) {
            let (gm, g_m) = store.act_path(g, &m).expect("m starts at dom g");
            let left = p.concat(&gm).expect("g(m) starts at r(p)");
            let group = store.multiply(g_m, h)?.expect("dom g|_m = r(w) = im h");
            return Ok(Some(CanonicalElement {
                left,
                group,
                right: x.clone(),
            }));
        }
        if let Some(m) = q.strip_prefix(w, &graph) {
            let hinv = store.inverse(h);
            let (hm, hinv_m) = store.act_path(hinv, &m).expect("m starts at im h");
            let h_at = store.inverse(hinv_m);
            let group = store.multiply(g, h_at)?.expect("im h|_{h^-1(m)} = r(q) = dom g");
            let right = x.concat(&hm).expect("h^-1(m) starts at r(x)");
            return Ok(Some(CanonicalElement {
                left: p.clone(),
                group,
                right,
            }));
        }
        Ok(None)
    }

    /// `q m ↦ p g(m)`; `None` off the domain `q Γ*`.
    pub fn act_on_path(&self, store: &MachineStore, w: &Path) -> Option<Path> {
        let m = w.strip_prefix(&self.right, store.graph())?;
        let (gm, _) = store.act_path(self.group, &m)?;
        self.left.concat(&gm)
    }

    pub fn display(&self, store: &MachineStore) -> String {
        let graph = store.graph();
        let mut out = String::new();
        if !self.left.is_empty() {
            let _ = write!(out, "{}", graph.display_path(&self.left));
        }
        if !store.is_identity(self.group) || (self.left.is_empty() && self.right.is_empty()) {
            if !out.is_empty() {
                out.push('·');
            }
            out.push_str(&store.label(self.group));
        }
        if !self.right.is_empty() {
            if !out.is_empty() {
                out.push('·');
            }
            let _ = write!(out, "({})*", graph.display_path(&self.right));
        }
        out
    }
}

/// Product of two possibly-zero elements.
pub fn multiply_opt(
    s: Option<&CanonicalElement>,
    t: Option<&CanonicalElement>,
    store: &mut MachineStore,
) -> Result<Option<CanonicalElement>, MachineError> {
    match (s, t) {
        (Some(s), Some(t)) => s.multiply(t, store),
        _ => Ok(None),
    }
}
