use std::collections::BTreeSet;

use super::{EdgeId, MultiGraph};
use crate::error::{Error, Result};

/// Cut edges of a connected multigraph (low-link DFS).
///
/// The DFS skips the tree edge by id rather than by parent vertex, so a
/// parallel copy of a tree edge counts as a back edge and parallel edges are
/// never reported.
pub fn find_bridges(g: &MultiGraph) -> Result<BTreeSet<EdgeId>> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let n = g.order();
    let mut bridges = BTreeSet::new();
    if n == 0 {
        return Ok(bridges);
    }
    const UNSEEN: usize = usize::MAX;
    let mut order = vec![UNSEEN; n];
    let mut low = vec![0; n];
    let mut timer = 0;
    // (vertex, edge used to enter it, next incidence index)
    let mut stack: Vec<(usize, Option<EdgeId>, usize)> = vec![(0, None, 0)];
    order[0] = timer;
    low[0] = timer;
    timer += 1;

    while let Some(&mut (v, parent_edge, ref mut next)) = stack.last_mut() {
        if let Some(&e) = g.incident(v).get(*next) {
            *next += 1;
            if Some(e) == parent_edge {
                continue;
            }
            let w = g.other_end(e, v);
            if order[w] == UNSEEN {
                order[w] = timer;
                low[w] = timer;
                timer += 1;
                stack.push((w, Some(e), 0));
            } else {
                low[v] = low[v].min(order[w]);
            }
        } else {
            stack.pop();
            if let (Some(e), Some(&(parent, _, _))) = (parent_edge, stack.last()) {
                low[parent] = low[parent].min(low[v]);
                if low[v] > order[parent] {
                    bridges.insert(e);
                }
            }
        }
    }
    Ok(bridges)
}
