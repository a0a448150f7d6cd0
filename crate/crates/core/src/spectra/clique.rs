//! Exact maximum clique by branch and bound with a greedy-coloring bound.

/// Maximum clique of an undirected graph given by its adjacency matrix.
pub struct CliqueSearch<'a> {
    adjacent: &'a [Vec<bool>],
    best: Vec<usize>,
    explored: u64,
}

/// One maximum clique (vertex indices, ascending) and the number of search
/// nodes expanded.
pub fn max_clique(adjacent: &[Vec<bool>]) -> (Vec<usize>, u64) {
    let n = adjacent.len();
    if n == 0 {
        return (Vec::new(), 0);
    }
    // decreasing degree, ties by index, so the result is deterministic
    let mut order: Vec<usize> = (0..n).collect();
    let degree = |v: usize| adjacent[v].iter().filter(|&&b| b).count();
    order.sort_by_key(|&v| (std::cmp::Reverse(degree(v)), v));
    let mut search = CliqueSearch {
        adjacent,
        best: vec![order[0]],
        explored: 0,
    };
    let mut current = Vec::new();
    search.expand(&mut current, order);
    let mut best = search.best;
    best.sort_unstable();
    (best, search.explored)
}

impl CliqueSearch<'_> {
    /// Greedy coloring of `candidates` in their given order; returns the
    /// vertices sorted by color together with each one's color number.
    fn color(&self, candidates: &[usize]) -> Vec<(usize, usize)> {
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in candidates {
            match classes.iter_mut().find(|c| c.iter().all(|&u| !self.adjacent[u][v])) {
                Some(c) => c.push(v),
                None => classes.push(vec![v]),
            }
        }
        classes
            .into_iter()
            .enumerate()
            .flat_map(|(k, c)| c.into_iter().map(move |v| (v, k + 1)))
            .collect()
    }

    fn expand(&mut self, current: &mut Vec<usize>, candidates: Vec<usize>) {
        self.explored += 1;
        let colored = self.color(&candidates);
        let mut remaining: Vec<usize> = candidates;
        for &(v, bound) in colored.iter().rev() {
            if current.len() + bound <= self.best.len() {
                return;
            }
            current.push(v);
            let next: Vec<usize> = remaining
                .iter()
                .copied()
                .filter(|&u| u != v && self.adjacent[v][u])
                .collect();
            if next.is_empty() {
                if current.len() > self.best.len() {
                    self.best = current.clone();
                }
            } else {
                self.expand(current, next);
            }
            current.pop();
            remaining.retain(|&u| u != v);
        }
    }
}
