//! Highest-label push-relabel with the gap heuristic and periodic global
//! relabeling. Infinite capacities stay infinite in the residual graph.

use crate::reduction::{Capacity, FlowNetwork};

pub(crate) struct Hlpp {
    n: usize,
    s: usize,
    t: usize,
    head: Vec<usize>,
    res: Vec<f64>,
    start: Vec<usize>,
    adj: Vec<usize>,
    label: Vec<usize>,
    excess: Vec<f64>,
    cur: Vec<usize>,
    count: Vec<usize>,
    buckets: Vec<Vec<usize>>,
    highest: usize,
    relabels: usize,
    /// Amount pushed along infinite source arcs.
    big: f64,
}

impl Hlpp {
    pub(crate) fn new(g: &FlowNetwork, s: usize, t: usize) -> Self {
        let n = g.node_count();
        let m = g.arc_count();
        let mut head = Vec::with_capacity(2 * m);
        let mut res = Vec::with_capacity(2 * m);
        let mut degree = vec![0usize; n + 1];
        for a in g.arcs() {
            head.push(a.head);
            res.push(a.capacity.as_f64());
            head.push(a.tail);
            res.push(0.0);
            degree[a.tail] += 1;
            degree[a.head] += 1;
        }
        let mut start = vec![0usize; n + 1];
        for v in 0..n {
            start[v + 1] = start[v] + degree[v];
        }
        let mut fill = start.clone();
        let mut adj = vec![0usize; 2 * m];
        for (i, a) in g.arcs().iter().enumerate() {
            adj[fill[a.tail]] = 2 * i;
            fill[a.tail] += 1;
            adj[fill[a.head]] = 2 * i + 1;
            fill[a.head] += 1;
        }
        let big = g.finite_capacity_total() + 1.0;
        Hlpp {
            n,
            s,
            t,
            head,
            res,
            cur: start[..n].to_vec(),
            start,
            adj,
            label: vec![0; n],
            excess: vec![0.0; n],
            count: vec![0; 2 * n + 1],
            buckets: vec![Vec::new(); 2 * n + 1],
            highest: 0,
            relabels: 0,
            big,
        }
    }

    fn tail_of(&self, e: usize) -> usize {
        self.head[e ^ 1]
    }

    fn push(&mut self, e: usize, amount: f64) {
        let v = self.tail_of(e);
        let w = self.head[e];
        let was_idle = self.excess[w] <= 0.0;
        if amount >= self.res[e] {
            // saturating: take the residual exactly
            let r = self.res[e];
            self.res[e] = 0.0;
            self.res[e ^ 1] += r;
            self.excess[v] -= r;
            self.excess[w] += r;
        } else {
            self.res[e] -= amount;
            self.res[e ^ 1] += amount;
            self.excess[v] -= amount;
            self.excess[w] += amount;
        }
        if self.excess[v] < 0.0 && v != self.s {
            self.excess[v] = 0.0;
        }
        if was_idle {
            self.activate(w);
        }
    }

    fn activate(&mut self, v: usize) {
        if v == self.s || v == self.t || self.excess[v] <= 0.0 {
            return;
        }
        let h = self.label[v];
        if h >= 2 * self.n {
            return;
        }
        self.buckets[h].push(v);
        self.highest = self.highest.max(h);
    }

    fn global_relabel(&mut self) {
        let n = self.n;
        let unset = usize::MAX;
        let mut label = vec![unset; n];
        let mut queue = std::collections::VecDeque::new();
        // the source keeps label n and is never passed through from the sink
        label[self.s] = n;
        label[self.t] = 0;
        for root in [self.t, self.s] {
            queue.push_back(root);
            while let Some(w) = queue.pop_front() {
                for &e in &self.adj[self.start[w]..self.start[w + 1]] {
                    // e leaves w, so e^1 enters w from u
                    let u = self.head[e];
                    if label[u] == unset && self.res[e ^ 1] > 0.0 {
                        label[u] = label[w] + 1;
                        queue.push_back(u);
                    }
                }
            }
        }
        self.count.iter_mut().for_each(|c| *c = 0);
        for b in self.buckets.iter_mut() {
            b.clear();
        }
        self.highest = 0;
        for v in 0..n {
            let h = if label[v] == unset { 2 * n } else { label[v].min(2 * n) };
            self.label[v] = h;
            self.count[h] += 1;
            self.cur[v] = self.start[v];
        }
        for v in 0..n {
            self.activate(v);
        }
    }

    fn relabel(&mut self, v: usize) {
        let n = self.n;
        let old = self.label[v];
        let mut best = 2 * n;
        for &e in &self.adj[self.start[v]..self.start[v + 1]] {
            if self.res[e] > 0.0 {
                best = best.min(self.label[self.head[e]] + 1);
            }
        }
        let new = best.min(2 * n);
        self.count[old] -= 1;
        self.label[v] = new;
        self.count[new] += 1;
        self.cur[v] = self.start[v];
        if old < n && self.count[old] == 0 {
            // gap: nodes above `old` can no longer reach the sink
            for u in 0..n {
                let h = self.label[u];
                if h > old && h < n && u != self.s {
                    self.count[h] -= 1;
                    self.label[u] = n + 1;
                    self.count[n + 1] += 1;
                    self.cur[u] = self.start[u];
                    self.activate(u);
                }
            }
        }
    }

    fn discharge(&mut self, v: usize) {
        let end = self.start[v + 1];
        while self.excess[v] > 0.0 {
            if self.cur[v] == end {
                self.relabel(v);
                self.relabels += 1;
                if self.label[v] >= 2 * self.n {
                    return;
                }
                if self.relabels >= self.n {
                    self.relabels = 0;
                    self.global_relabel();
                    return;
                }
                continue;
            }
            let e = self.adj[self.cur[v]];
            let w = self.head[e];
            if self.res[e] > 0.0 && self.label[v] == self.label[w] + 1 {
                let amount = self.excess[v].min(self.res[e]);
                self.push(e, amount);
                if self.res[e] > 0.0 {
                    continue;
                }
            }
            self.cur[v] += 1;
        }
    }

    /// Runs to completion; afterwards `excess[t]` is the max-flow value.
    /// The caller guarantees that no all-infinite s-t path exists.
    pub(crate) fn run(&mut self) -> f64 {
        let s = self.s;
        self.label[s] = self.n;
        for i in self.start[s]..self.start[s + 1] {
            let e = self.adj[i];
            let r = self.res[e];
            if r > 0.0 {
                let amount = if r.is_infinite() { self.big } else { r };
                self.excess[s] += amount;
                self.push(e, amount);
            }
        }
        self.global_relabel();
        loop {
            while self.highest > 0 && self.buckets[self.highest].is_empty() {
                self.highest -= 1;
            }
            let Some(v) = self.buckets[self.highest].pop() else {
                break;
            };
            if self.label[v] != self.highest || self.excess[v] <= 0.0 {
                continue;
            }
            self.discharge(v);
            self.activate(v);
        }
        self.excess[self.t]
    }

    /// Nodes reachable from the source through arcs with residual above `tol`.
    pub(crate) fn source_side(&self) -> Vec<bool> {
        let tol = 1e-11 * self.big.max(1.0);
        let mut seen = vec![false; self.n];
        seen[self.s] = true;
        let mut stack = vec![self.s];
        while let Some(v) = stack.pop() {
            for &e in &self.adj[self.start[v]..self.start[v + 1]] {
                let w = self.head[e];
                if !seen[w] && self.res[e] > tol {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }
}

/// Whether `t` is reachable from `s` using infinite arcs only.
pub(crate) fn infinite_path(g: &FlowNetwork, s: usize, t: usize) -> bool {
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); g.node_count()];
    for a in g.arcs() {
        if a.capacity == Capacity::Infinite {
            out[a.tail].push(a.head);
        }
    }
    let mut seen = vec![false; g.node_count()];
    seen[s] = true;
    let mut stack = vec![s];
    while let Some(v) = stack.pop() {
        if v == t {
            return true;
        }
        for &w in &out[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    false
}
