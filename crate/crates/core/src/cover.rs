//! Exact minimum edge cover of the coding hypergraph. Phase one certifies
//! the covering number by branch and bound (optionally across threads,
//! sharing an atomic incumbent); phase two re-derives the first cover of
//! that size under canonical branching, single-threaded, so the committed
//! cover never depends on scheduling.

use crate::bitset::VertexSet;
use crate::codebook::{assemble_codebook, VPCodebook};
use crate::decodability::FiberRule;
use crate::error::{Error, Result};
use crate::hypergraph::{enumerate_maximal_edges_under, CodingHypergraph};
use crate::model::{rate_of, Alphabet, ProblemInstance, Rate};
use rayon::prelude::*;
use std::sync::atomic::{AtomicBool, AtomicU64, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

#[derive(Debug, Clone, Copy, Default)]
pub struct CoverBudget {
    pub node_limit: Option<u64>,
    pub time_limit: Option<Duration>,
}

#[derive(Debug, Clone)]
pub struct CoverSolution {
    /// Edge ids into the hypergraph, in commit order.
    pub edges: Vec<u32>,
    pub t: u64,
    /// Proved minimum, as opposed to a budget-exhausted incumbent.
    pub optimal: bool,
    /// Search nodes expanded; varies with scheduling, reported only as a
    /// side channel.
    pub nodes: u64,
}

struct Scratch {
    blocked: Vec<bool>,
}

struct Search<'a> {
    edges: &'a [Vec<u32>],
    vertex_edges: &'a [Vec<u32>],
    n: usize,
    max_edge_len: usize,
    incumbent: AtomicUsize,
    best: Mutex<Vec<u32>>,
    nodes: AtomicU64,
    node_limit: u64,
    deadline: Option<Instant>,
    exhausted: AtomicBool,
}

impl<'a> Search<'a> {
    fn fresh(&self, edge: u32, covered: &VertexSet) -> usize {
        self.edges[edge as usize]
            .iter()
            .filter(|&&v| !covered.contains(v))
            .count()
    }

    /// Number of fresh vertices the best remaining edge can cover, plus a
    /// lower bound on the edges still needed: the counting bound
    /// ceil(uncovered / best) and a greedy packing of uncovered vertices no
    /// two of which share an edge, whichever is larger.
    fn bound(&self, covered: &VertexSet, uncovered: usize, scratch: &mut Scratch) -> (usize, usize) {
        let mut max_fresh = 0;
        for id in 0..self.edges.len() as u32 {
            let f = self.fresh(id, covered);
            if f > max_fresh {
                max_fresh = f;
                if max_fresh == self.max_edge_len {
                    break;
                }
            }
        }
        debug_assert!(max_fresh > 0);
        let counting = uncovered.div_ceil(max_fresh);
        scratch.blocked.fill(false);
        let mut packing = 0;
        for v in 0..self.n as u32 {
            if covered.contains(v) {
                continue;
            }
            let open = self.vertex_edges[v as usize]
                .iter()
                .all(|&e| !scratch.blocked[e as usize]);
            if open {
                packing += 1;
                for &e in &self.vertex_edges[v as usize] {
                    scratch.blocked[e as usize] = true;
                }
            }
        }
        (counting.max(packing), max_fresh)
    }

    /// Uncovered vertex lying in the fewest edges, smallest id on ties.
    fn branch_vertex(&self, covered: &VertexSet) -> u32 {
        let mut best = u32::MAX;
        let mut best_degree = usize::MAX;
        for v in 0..self.n as u32 {
            if !covered.contains(v) {
                let d = self.vertex_edges[v as usize].len();
                if d < best_degree {
                    best_degree = d;
                    best = v;
                }
            }
        }
        debug_assert_ne!(best, u32::MAX);
        best
    }

    fn candidates(&self, v: u32, covered: &VertexSet) -> Vec<(usize, u32)> {
        let mut cands: Vec<(usize, u32)> = self.vertex_edges[v as usize]
            .iter()
            .map(|&e| (self.fresh(e, covered), e))
            .collect();
        cands.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        cands
    }

    fn out_of_budget(&self) -> bool {
        if self.exhausted.load(Ordering::Relaxed) {
            return true;
        }
        let node = self.nodes.fetch_add(1, Ordering::Relaxed);
        if node >= self.node_limit {
            self.exhausted.store(true, Ordering::Relaxed);
            return true;
        }
        if let Some(deadline) = self.deadline {
            if node % 1024 == 0 && Instant::now() >= deadline {
                self.exhausted.store(true, Ordering::Relaxed);
                return true;
            }
        }
        false
    }

    /// Phase one: improve the shared incumbent for as long as the budget
    /// lasts. Covers strictly smaller than the incumbent replace it.
    fn optimize(
        &self,
        covered: &mut VertexSet,
        uncovered: usize,
        chosen: &mut Vec<u32>,
        scratch: &mut Scratch,
    ) {
        if self.out_of_budget() {
            return;
        }
        if uncovered == 0 {
            let mut best = self.best.lock().unwrap();
            if chosen.len() < self.incumbent.load(Ordering::Acquire) {
                self.incumbent.store(chosen.len(), Ordering::Release);
                *best = chosen.clone();
            }
            return;
        }
        if chosen.len() + 1 >= self.incumbent.load(Ordering::Acquire) {
            return;
        }
        let (lb, max_fresh) = self.bound(covered, uncovered, scratch);
        if chosen.len() + lb >= self.incumbent.load(Ordering::Acquire) {
            return;
        }
        let v = self.branch_vertex(covered);
        for (f, e) in self.candidates(v, covered) {
            let incumbent = self.incumbent.load(Ordering::Acquire);
            if chosen.len() + 1 >= incumbent {
                return;
            }
            // Covering `uncovered` within budget edges of yield <= max_fresh
            // forces the next edge to cover at least this much.
            let budget = incumbent - 1 - chosen.len();
            let min_fresh = uncovered.saturating_sub((budget - 1) * max_fresh);
            if f < min_fresh.max(1) {
                break;
            }
            let mut added = Vec::with_capacity(f);
            for &w in &self.edges[e as usize] {
                if covered.insert(w) {
                    added.push(w);
                }
            }
            debug_assert_eq!(added.len(), f);
            chosen.push(e);
            self.optimize(covered, uncovered - f, chosen, scratch);
            chosen.pop();
            for &w in &added {
                covered.remove(w);
            }
        }
    }

    /// Phase two: first cover of exactly `target` edges in canonical
    /// branching order. Runs only after `target` is certified feasible.
    fn witness(
        &self,
        covered: &mut VertexSet,
        uncovered: usize,
        chosen: &mut Vec<u32>,
        target: usize,
        scratch: &mut Scratch,
    ) -> Option<Vec<u32>> {
        self.nodes.fetch_add(1, Ordering::Relaxed);
        if uncovered == 0 {
            return Some(chosen.clone());
        }
        let budget = target - chosen.len();
        if budget == 0 {
            return None;
        }
        let (lb, max_fresh) = self.bound(covered, uncovered, scratch);
        if lb > budget {
            return None;
        }
        let min_fresh = uncovered.saturating_sub((budget - 1) * max_fresh);
        let v = self.branch_vertex(covered);
        for (f, e) in self.candidates(v, covered) {
            if f < min_fresh.max(1) {
                break;
            }
            let mut added = Vec::with_capacity(f);
            for &w in &self.edges[e as usize] {
                if covered.insert(w) {
                    added.push(w);
                }
            }
            chosen.push(e);
            let found = self.witness(covered, uncovered - f, chosen, target, scratch);
            chosen.pop();
            for &w in &added {
                covered.remove(w);
            }
            if found.is_some() {
                return found;
            }
        }
        None
    }

    fn greedy(&self) -> Vec<u32> {
        let mut covered = VertexSet::new(self.n);
        let mut chosen = Vec::new();
        let mut uncovered = self.n;
        while uncovered > 0 {
            let mut pick = (0usize, u32::MAX);
            for id in 0..self.edges.len() as u32 {
                let f = self.fresh(id, &covered);
                if f > pick.0 {
                    pick = (f, id);
                }
            }
            let (f, id) = pick;
            for &w in &self.edges[id as usize] {
                covered.insert(w);
            }
            uncovered -= f;
            chosen.push(id);
        }
        chosen
    }
}

pub fn min_cover(hg: &CodingHypergraph, budget: &CoverBudget) -> Result<CoverSolution> {
    if hg.edges.is_empty() {
        return Err(Error::Input("hypergraph has no edges".into()));
    }
    let n = hg.vertex_count() as usize;
    let vertex_edges = hg.vertex_edges();
    if let Some(v) = vertex_edges.iter().position(|ids| ids.is_empty()) {
        return Err(Error::Input(format!("vertex {v} lies in no edge")));
    }
    let search = Search {
        edges: &hg.edges,
        vertex_edges: &vertex_edges,
        n,
        max_edge_len: hg.max_edge_size(),
        incumbent: AtomicUsize::new(usize::MAX),
        best: Mutex::new(Vec::new()),
        nodes: AtomicU64::new(0),
        node_limit: budget.node_limit.unwrap_or(u64::MAX),
        deadline: budget.time_limit.map(|d| Instant::now() + d),
        exhausted: AtomicBool::new(false),
    };

    let greedy = search.greedy();
    search.incumbent.store(greedy.len(), Ordering::Release);
    *search.best.lock().unwrap() = greedy;

    let mut scratch = Scratch {
        blocked: vec![false; hg.edges.len()],
    };
    let (root_lb, root_max_fresh) = search.bound(&VertexSet::new(n), n, &mut scratch);

    if root_lb < search.incumbent.load(Ordering::Acquire) {
        let v = search.branch_vertex(&VertexSet::new(n));
        let cands = search.candidates(v, &VertexSet::new(n));
        cands.par_iter().for_each(|&(f, e)| {
            let incumbent = search.incumbent.load(Ordering::Acquire);
            if incumbent <= root_lb {
                return;
            }
            let budget_edges = incumbent - 1;
            let min_fresh = n.saturating_sub((budget_edges - 1) * root_max_fresh);
            if f < min_fresh.max(1) {
                return;
            }
            let mut covered = VertexSet::new(n);
            for &w in &search.edges[e as usize] {
                covered.insert(w);
            }
            let mut chosen = vec![e];
            let mut scratch = Scratch {
                blocked: vec![false; search.edges.len()],
            };
            search.optimize(&mut covered, n - f, &mut chosen, &mut scratch);
        });
    }

    let t = search.incumbent.load(Ordering::Acquire);
    if search.exhausted.load(Ordering::Relaxed) {
        return Ok(CoverSolution {
            edges: search.best.lock().unwrap().clone(),
            t: t as u64,
            optimal: false,
            nodes: search.nodes.load(Ordering::Relaxed),
        });
    }

    let mut covered = VertexSet::new(n);
    let mut chosen = Vec::new();
    let canonical = search
        .witness(&mut covered, n, &mut chosen, t, &mut scratch)
        .expect("certified cover size must be reachable");
    Ok(CoverSolution {
        edges: canonical,
        t: t as u64,
        optimal: true,
        nodes: search.nodes.load(Ordering::Relaxed),
    })
}

/// Turns a cover into a codebook: realisations go to the first covering
/// edge, ids follow the cover order (empty leftovers dropped), decoders
/// come from the canonical slice witnesses of the shrunken fibers.
pub fn build_codebook(
    sol: &CoverSolution,
    hg: &CodingHypergraph,
    inst: &ProblemInstance,
    rule: &FiberRule,
) -> Result<VPCodebook> {
    let uni = hg.universe;
    let n = uni.size() as usize;
    const UNASSIGNED: u64 = u64::MAX;
    let mut assignment = vec![UNASSIGNED; n];
    for (pos, &edge) in sol.edges.iter().enumerate() {
        for &v in &hg.edges[edge as usize] {
            if assignment[v as usize] == UNASSIGNED {
                assignment[v as usize] = pos as u64;
            }
        }
    }
    if let Some(v) = assignment.iter().position(|&c| c == UNASSIGNED) {
        return Err(Error::Structure(format!(
            "cover does not reach realisation {:?}",
            uni.realisation(v as u32)
        )));
    }

    // Drop cover positions whose fiber was fully absorbed by earlier edges.
    let mut used = vec![false; sol.edges.len()];
    for &pos in &assignment {
        used[pos as usize] = true;
    }
    let mut renumber = vec![UNASSIGNED; sol.edges.len()];
    let mut t = 0u64;
    for (pos, &live) in used.iter().enumerate() {
        if live {
            renumber[pos] = t;
            t += 1;
        }
    }
    for c in assignment.iter_mut() {
        *c = renumber[*c as usize];
    }

    assemble_codebook(assignment, t, inst, &uni, rule)
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub codebook: VPCodebook,
    pub rate: Rate,
    pub t: u64,
    pub optimal: bool,
    pub vertex_count: u64,
    pub edge_count: usize,
    pub max_edge_size: usize,
    pub nodes: u64,
}

pub fn solve_under(
    rule: &FiberRule,
    inst: &ProblemInstance,
    alphabet: Alphabet,
    budget: &CoverBudget,
    edge_cap: usize,
) -> Result<SolveOutcome> {
    let hg = enumerate_maximal_edges_under(rule, inst, alphabet, edge_cap)?;
    let sol = min_cover(&hg, budget)?;
    let codebook = build_codebook(&sol, &hg, inst, rule)?;
    debug_assert!(!sol.optimal || sol.t >= alphabet.k() as u64);
    Ok(SolveOutcome {
        rate: rate_of(sol.t, alphabet)?,
        t: sol.t,
        optimal: sol.optimal,
        vertex_count: hg.vertex_count(),
        edge_count: hg.edges.len(),
        max_edge_size: hg.max_edge_size(),
        nodes: sol.nodes,
        codebook,
    })
}

pub fn solve(
    inst: &ProblemInstance,
    alphabet: Alphabet,
    budget: &CoverBudget,
    edge_cap: usize,
) -> Result<SolveOutcome> {
    solve_under(&FiberRule::vp(inst), inst, alphabet, budget, edge_cap)
}
