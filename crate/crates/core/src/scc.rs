// SPDX-License-Identifier: Apache-2.0

//! Strongly connected components (iterative Tarjan) and the condensation DAG.
//!
//! Every directed structure in the crate (the base graph, the Moore diagram's
//! ℋ-subgraph, the Schreier graph Δ) goes through this one routine, so it works
//! on plain adjacency lists indexed by `usize`.

use alloc::vec;
use alloc::vec::Vec;

/// Partition of a directed graph into strongly connected components.
///
/// Components are listed in topological order of the condensation: if some
/// vertex of component `a` reaches a vertex of component `b != a`, then
/// `a < b`. Vertices inside a component are sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condensation {
    pub components: Vec<Vec<usize>>,
    pub component_of: Vec<usize>,
    /// Successor components in the condensation DAG (sorted, deduplicated).
    pub successors: Vec<Vec<usize>>,
    /// Whether the component carries at least one edge (a self-loop or size > 1).
    pub cyclic: Vec<bool>,
}

impl Condensation {
    pub fn new(adjacency: &[Vec<usize>]) -> Self {
        let mut components = tarjan(adjacency);
        // Tarjan emits sinks first.
        components.reverse();
        for c in &mut components {
            c.sort_unstable();
        }
        let n = adjacency.len();
        let mut component_of = vec![usize::MAX; n];
        for (cid, comp) in components.iter().enumerate() {
            for &v in comp {
                component_of[v] = cid;
            }
        }
        let mut successors = vec![Vec::new(); components.len()];
        let mut cyclic = vec![false; components.len()];
        for (u, outs) in adjacency.iter().enumerate() {
            let cu = component_of[u];
            for &v in outs {
                let cv = component_of[v];
                if cu == cv {
                    cyclic[cu] = true;
                } else {
                    successors[cu].push(cv);
                }
            }
        }
        for s in &mut successors {
            s.sort_unstable();
            s.dedup();
        }
        Condensation {
            components,
            component_of,
            successors,
            cyclic,
        }
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// Components with no outgoing edge in the condensation.
    pub fn sinks(&self) -> Vec<usize> {
        (0..self.components.len())
            .filter(|&c| self.successors[c].is_empty())
            .collect()
    }

    /// Vertices that lie on some nonempty directed cycle.
    pub fn cyclic_vertices(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .components
            .iter()
            .enumerate()
            .filter(|(c, _)| self.cyclic[*c])
            .flat_map(|(_, comp)| comp.iter().copied())
            .collect();
        out.sort_unstable();
        out
    }
}

/// Iterative Tarjan; returns components in reverse topological order.
pub fn tarjan(adjacency: &[Vec<usize>]) -> Vec<Vec<usize>> {
    const UNVISITED: usize = usize::MAX;
    let n = adjacency.len();
    let mut index = vec![UNVISITED; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut comps: Vec<Vec<usize>> = Vec::new();
    let mut next_index = 0usize;
    // (vertex, position of next successor to visit)
    let mut call: Vec<(usize, usize)> = Vec::new();

    for root in 0..n {
        if index[root] != UNVISITED {
            continue;
        }
        call.push((root, 0));
        index[root] = next_index;
        low[root] = next_index;
        next_index += 1;
        stack.push(root);
        on_stack[root] = true;

        while let Some(&mut (v, ref mut pos)) = call.last_mut() {
            if *pos < adjacency[v].len() {
                let w = adjacency[v][*pos];
                *pos += 1;
                if index[w] == UNVISITED {
                    index[w] = next_index;
                    low[w] = next_index;
                    next_index += 1;
                    stack.push(w);
                    on_stack[w] = true;
                    call.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            call.pop();
            if let Some(&(parent, _)) = call.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                let mut comp = Vec::new();
                loop {
                    let w = stack.pop().expect("tarjan stack underflow");
                    on_stack[w] = false;
                    comp.push(w);
                    if w == v {
                        break;
                    }
                }
                comps.push(comp);
            }
        }
    }
    comps
}
