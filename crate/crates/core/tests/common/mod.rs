//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's algorithms; only plain edge lists go in.

#![allow(dead_code)]

use std::collections::VecDeque;

pub type Edge = (usize, usize, f64);

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    r
}

/// Whether `chosen` (indices into `edges`) spans all `n` nodes acyclically.
pub fn is_spanning_tree(n: usize, edges: &[Edge], chosen: &[usize]) -> bool {
    if chosen.len() + 1 != n {
        return false;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    for &i in chosen {
        let (u, v, _) = edges[i];
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a == b {
            return false;
        }
        parent[a] = b;
    }
    true
}

/// Minimum spanning tree weight by trying every `(n-1)`-subset of edges.
pub fn brute_force_mst(n: usize, edges: &[Edge]) -> Option<(f64, Vec<usize>)> {
    fn go(n: usize, edges: &[Edge], from: usize, chosen: &mut Vec<usize>, best: &mut Option<(f64, Vec<usize>)>) {
        if chosen.len() + 1 == n {
            if is_spanning_tree(n, edges, chosen) {
                let w: f64 = chosen.iter().map(|&i| edges[i].2).sum();
                if best.as_ref().is_none_or(|(b, _)| w < *b) {
                    *best = Some((w, chosen.clone()));
                }
            }
            return;
        }
        for i in from..edges.len() {
            chosen.push(i);
            go(n, edges, i + 1, chosen, best);
            chosen.pop();
        }
    }
    let mut best = None;
    go(n, edges, 0, &mut Vec::new(), &mut best);
    best
}

/// Component label per node of the forest `tree` minus `cut`.
pub fn components(n: usize, tree: &[Edge], cut: &[usize]) -> Vec<usize> {
    let mut adj = vec![Vec::new(); n];
    for (i, &(u, v, _)) in tree.iter().enumerate() {
        if !cut.contains(&i) {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = next;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if label[y] == usize::MAX {
                    label[y] = next;
                    queue.push_back(y);
                }
            }
        }
        next += 1;
    }
    label
}

/// Validity index of the clustering obtained by cutting `cut` (indices into
/// `tree`), straight from the definitions.
pub fn dbcvi(n: usize, tree: &[Edge], cut: &[usize]) -> f64 {
    let label = components(n, tree, cut);
    let k = label.iter().max().map_or(0, |m| m + 1);
    let mut total = 0.0;
    for c in 0..k {
        let size = label.iter().filter(|&&l| l == c).count();
        let disp = tree
            .iter()
            .enumerate()
            .filter(|(i, &(u, v, _))| !cut.contains(i) && label[u] == c && label[v] == c)
            .map(|(_, e)| e.2)
            .fold(0.0, f64::max);
        let sep = if k == 1 {
            1.0
        } else {
            tree.iter()
                .enumerate()
                .filter(|(i, &(u, v, _))| cut.contains(i) && (label[u] == c) != (label[v] == c))
                .map(|(_, e)| e.2)
                .fold(f64::INFINITY, f64::min)
        };
        let v = (sep - disp) / sep.max(disp);
        total += size as f64 / n as f64 * v;
    }
    total
}

/// Adjusted Rand index by the pair-counting definition over all node pairs.
pub fn pair_counting_ari(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len();
    let (mut both, mut only_a, mut only_b, mut neither) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        for j in i + 1..n {
            match (a[i] == a[j], b[i] == b[j]) {
                (true, true) => both += 1.0,
                (true, false) => only_a += 1.0,
                (false, true) => only_b += 1.0,
                (false, false) => neither += 1.0,
            }
        }
    }
    let pairs = both + only_a + only_b + neither;
    let expected = (both + only_a) * (both + only_b) / pairs;
    let max = ((both + only_a) + (both + only_b)) / 2.0;
    (both - expected) / (max - expected)
}
