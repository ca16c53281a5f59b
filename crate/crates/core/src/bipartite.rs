//! Hopcroft–Karp maximum matching.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::random::BipartiteGraph;

const NIL: u32 = u32::MAX;

/// Maximum matching as `mate[left] = Some(right)`. Deterministic: BFS layers
/// and DFS both scan neighbours in ascending order.
pub fn maximum_matching(b: &BipartiteGraph) -> Vec<Option<u32>> {
    let (nl, nr) = (b.left(), b.right());
    let mut mate_l = vec![NIL; nl];
    let mut mate_r = vec![NIL; nr];
    let mut dist = vec![u32::MAX; nl];
    let mut queue = VecDeque::new();
    let mut iter = vec![0usize; nl];
    loop {
        // layered BFS from free left vertices
        queue.clear();
        for a in 0..nl {
            if mate_l[a] == NIL {
                dist[a] = 0;
                queue.push_back(a as u32);
            } else {
                dist[a] = u32::MAX;
            }
        }
        let mut reachable_free = false;
        while let Some(a) = queue.pop_front() {
            for &r in b.neighbors(a) {
                let m = mate_r[r as usize];
                if m == NIL {
                    reachable_free = true;
                } else if dist[m as usize] == u32::MAX {
                    dist[m as usize] = dist[a as usize] + 1;
                    queue.push_back(m);
                }
            }
        }
        if !reachable_free {
            break;
        }
        iter.iter_mut().for_each(|i| *i = 0);
        let mut augmented = false;
        for a in 0..nl {
            if mate_l[a] == NIL && augment(b, a as u32, &mut mate_l, &mut mate_r, &mut dist, &mut iter) {
                augmented = true;
            }
        }
        if !augmented {
            break;
        }
    }
    mate_l.into_iter().map(|m| (m != NIL).then_some(m)).collect()
}

// Iterative DFS along the BFS layers.
fn augment(
    b: &BipartiteGraph,
    root: u32,
    mate_l: &mut [u32],
    mate_r: &mut [u32],
    dist: &mut [u32],
    iter: &mut [usize],
) -> bool {
    let mut stack: Vec<u32> = vec![root];
    let mut via: Vec<u32> = Vec::new();
    while let Some(&a) = stack.last() {
        let nbrs = b.neighbors(a);
        let ai = a as usize;
        if iter[ai] == nbrs.len() {
            dist[ai] = u32::MAX;
            stack.pop();
            via.pop();
            continue;
        }
        let r = nbrs[iter[ai]];
        iter[ai] += 1;
        let m = mate_r[r as usize];
        if m == NIL {
            // flip the path
            via.push(r);
            for (&l, &rr) in stack.iter().zip(via.iter()) {
                mate_l[l as usize] = rr;
                mate_r[rr as usize] = l;
            }
            return true;
        }
        if dist[m as usize] == dist[ai] + 1 {
            via.push(r);
            stack.push(m);
        }
    }
    false
}

/// Perfect matching of a balanced bipartite graph, or `None` if none exists.
pub fn perfect_matching(b: &BipartiteGraph) -> Result<Option<Vec<u32>>> {
    if b.left() != b.right() {
        return Err(Error::invalid(format!("unbalanced sides {} and {}", b.left(), b.right())));
    }
    let m = maximum_matching(b);
    Ok(m.into_iter().collect::<Option<Vec<u32>>>())
}
