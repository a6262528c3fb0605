//! Small directed-graph utilities over adjacency lists.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

/// Tarjan's algorithm without recursion. Returns a component id per node;
/// ids are assigned in reverse topological order.
pub fn scc(succ: &[Vec<usize>]) -> Vec<usize> {
    let n = succ.len();
    const UNSEEN: usize = usize::MAX;
    let mut index = vec![UNSEEN; n];
    let mut low = vec![0usize; n];
    let mut on_stack = vec![false; n];
    let mut comp = vec![UNSEEN; n];
    let mut stack: Vec<usize> = Vec::new();
    let mut next_index = 0;
    let mut next_comp = 0;
    let mut call: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != UNSEEN {
            continue;
        }
        call.push((root, 0));
        while let Some(&mut (v, ref mut child)) = call.last_mut() {
            if *child == 0 && index[v] == UNSEEN {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if let Some(&w) = succ[v].get(*child) {
                *child += 1;
                if index[w] == UNSEEN {
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
                while let Some(w) = stack.pop() {
                    on_stack[w] = false;
                    comp[w] = next_comp;
                    if w == v {
                        break;
                    }
                }
                next_comp += 1;
            }
        }
    }
    comp
}

/// Nodes reachable from `start`.
pub fn reachable(succ: &[Vec<usize>], start: usize) -> Vec<bool> {
    let mut seen = vec![false; succ.len()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(v) = queue.pop_front() {
        for &w in &succ[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Shortest path `from → to` as a list of edge ids, where `edges[e] = (src, dst)`
/// and only edges with `allowed[e]` are used. Empty when `from == to`.
pub fn bfs_edge_path(
    n: usize,
    edges: &[(usize, usize)],
    allowed: &[bool],
    from: usize,
    to: usize,
) -> Option<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(s, _)) in edges.iter().enumerate() {
        if allowed[e] {
            out[s].push(e);
        }
    }
    let mut via = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if v == to {
            let mut path = Vec::new();
            let mut cur = to;
            while cur != from {
                let e = via[cur];
                path.push(e);
                cur = edges[e].0;
            }
            path.reverse();
            return Some(path);
        }
        for &e in &out[v] {
            let w = edges[e].1;
            if !seen[w] {
                seen[w] = true;
                via[w] = e;
                queue.push_back(w);
            }
        }
    }
    None
}
