//! Enumeration of the coding hypergraph: vertices are all realisations,
//! hyperedges the maximal valid fibers. Validity is downward-closed, so the
//! recursive extension scheme for maximal cliques carries over with the
//! pairwise test replaced by the incremental slice oracle.

use crate::decodability::{FiberRule, SliceTracker};
use crate::error::{Error, Result};
use crate::model::{Alphabet, ProblemInstance, Universe, SOLVE_SIZE_GUARD};

/// Default ceiling on enumerated edges before giving up.
pub const DEFAULT_EDGE_CAP: usize = 2_000_000;

#[derive(Debug, Clone)]
pub struct CodingHypergraph {
    pub universe: Universe,
    /// Maximal valid fibers as sorted vertex lists, in lexicographic order
    /// of their member lists.
    pub edges: Vec<Vec<u32>>,
}

impl CodingHypergraph {
    pub fn vertex_count(&self) -> u64 {
        self.universe.size()
    }

    pub fn max_edge_size(&self) -> usize {
        self.edges.iter().map(|e| e.len()).max().unwrap_or(0)
    }

    /// edge ids containing each vertex, ids ascending.
    pub fn vertex_edges(&self) -> Vec<Vec<u32>> {
        let mut by_vertex = vec![Vec::new(); self.universe.size() as usize];
        for (id, edge) in self.edges.iter().enumerate() {
            for &v in edge {
                by_vertex[v as usize].push(id as u32);
            }
        }
        by_vertex
    }
}

struct Enumerator {
    cap: usize,
    edges: Vec<Vec<u32>>,
}

impl Enumerator {
    /// Children extend `current` by each candidate in turn; vertices before
    /// the chosen one move to the exclusion side. A set is reported exactly
    /// when both sides die out, which happens on the unique increasing
    /// insertion order of each maximal fiber.
    fn extend(
        &mut self,
        current: &mut Vec<u32>,
        tracker: &SliceTracker<'_>,
        candidates: &[u32],
        excluded: &[u32],
    ) -> Result<()> {
        if candidates.is_empty() && excluded.is_empty() {
            if self.edges.len() >= self.cap {
                return Err(Error::Capacity(format!(
                    "more than {} maximal edges; raise the edge cap to enumerate this instance",
                    self.cap
                )));
            }
            self.edges.push(current.clone());
            return Ok(());
        }
        for (pos, &v) in candidates.iter().enumerate() {
            let mut child = tracker.clone();
            child.add(v);
            let next_candidates: Vec<u32> = candidates[pos + 1..]
                .iter()
                .copied()
                .filter(|&u| child.can_add(u))
                .collect();
            let next_excluded: Vec<u32> = excluded
                .iter()
                .chain(&candidates[..pos])
                .copied()
                .filter(|&u| child.can_add(u))
                .collect();
            current.push(v);
            self.extend(current, &child, &next_candidates, &next_excluded)?;
            current.pop();
        }
        Ok(())
    }
}

pub fn enumerate_maximal_edges(
    inst: &ProblemInstance,
    alphabet: Alphabet,
    edge_cap: usize,
) -> Result<CodingHypergraph> {
    enumerate_maximal_edges_under(&FiberRule::vp(inst), inst, alphabet, edge_cap)
}

/// Enumeration under an arbitrary witness rule; the pliable solver passes
/// its per-receiver fixed choices here.
pub fn enumerate_maximal_edges_under(
    rule: &FiberRule,
    inst: &ProblemInstance,
    alphabet: Alphabet,
    edge_cap: usize,
) -> Result<CodingHypergraph> {
    let size = inst
        .realisation_count(alphabet)
        .filter(|&n| n <= SOLVE_SIZE_GUARD)
        .ok_or_else(|| {
            Error::Capacity(format!(
                "k^m exceeds the solve guard of {SOLVE_SIZE_GUARD} realisations"
            ))
        })?;
    let uni = Universe::new(inst.m(), alphabet)?;
    let mut enumerator = Enumerator {
        cap: edge_cap,
        edges: Vec::new(),
    };
    let tracker = SliceTracker::new(&uni, inst, rule);
    let all: Vec<u32> = (0..size as u32).collect();
    let mut current = Vec::new();
    enumerator.extend(&mut current, &tracker, &all, &[])?;
    Ok(CodingHypergraph {
        universe: uni,
        edges: enumerator.edges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decodability::is_maximal_fiber;
    use crate::model::parse_instance;

    fn hypergraph(text: &str) -> (ProblemInstance, Alphabet, CodingHypergraph) {
        let (inst, alphabet) = parse_instance(text).unwrap();
        let hg = enumerate_maximal_edges(&inst, alphabet, DEFAULT_EDGE_CAP).unwrap();
        (inst, alphabet, hg)
    }

    #[test]
    fn singleton_family_edge_counts() {
        let (_, _, hg) = hypergraph(r#"{"m":3,"k":2,"receivers":[[1],[2],[3]]}"#);
        assert_eq!(hg.edges.len(), 16);
        assert!(hg.edges.iter().all(|e| e.len() == 2));

        let (_, _, hg) = hypergraph(r#"{"m":3,"k":3,"receivers":[[1],[2],[3]]}"#);
        assert_eq!(hg.edges.len(), 225);
        assert_eq!(hg.max_edge_size(), 4);
    }

    #[test]
    fn contains_the_known_four_element_edge() {
        let (_, _, hg) = hypergraph(r#"{"m":3,"k":3,"receivers":[[1],[2],[3]]}"#);
        let uni = hg.universe;
        let mut target: Vec<u32> = [[0, 0, 0], [0, 0, 1], [1, 1, 2], [2, 1, 2]]
            .iter()
            .map(|r| uni.index_of(r).unwrap())
            .collect();
        target.sort_unstable();
        assert!(hg.edges.contains(&target));
    }

    #[test]
    fn two_message_single_receiver_edges() {
        let (_, _, hg) = hypergraph(r#"{"m":2,"k":2,"receivers":[[1]]}"#);
        // receiver {1} slices by x_1, needing x_2 constant per slice: the
        // maximal sets pick one x_2 value per x_1 value.
        let expect: Vec<Vec<u32>> = vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]];
        assert_eq!(hg.edges, expect);
    }

    #[test]
    fn edges_are_maximal_valid_and_cover_all_vertices() {
        for text in [
            r#"{"m":3,"k":2,"receivers":[[1],[2],[3]]}"#,
            r#"{"m":3,"k":2,"receivers":[[],[1],[1,2],[1,3]]}"#,
            r#"{"m":2,"k":3,"receivers":[[1],[2]]}"#,
        ] {
            let (inst, _, hg) = hypergraph(text);
            let mut covered = vec![false; hg.vertex_count() as usize];
            for edge in &hg.edges {
                assert!(is_maximal_fiber(edge, &inst, &hg.universe).unwrap());
                for &v in edge {
                    covered[v as usize] = true;
                }
            }
            assert!(covered.iter().all(|&c| c));
        }
    }

    #[test]
    fn edge_order_is_lexicographic_without_duplicates() {
        let (_, _, hg) = hypergraph(r#"{"m":3,"k":3,"receivers":[[1],[2],[3]]}"#);
        for pair in hg.edges.windows(2) {
            assert!(pair[0] < pair[1]);
        }
    }

    #[test]
    fn nested_family_edge_counts() {
        let (_, _, hg) = hypergraph(r#"{"m":3,"k":2,"receivers":[[],[1],[1,2],[1,3]]}"#);
        assert_eq!(hg.edges.len(), 12);
        assert!(hg.edges.iter().all(|e| e.len() == 2));

        let (_, _, hg) = hypergraph(r#"{"m":3,"k":3,"receivers":[[],[1],[1,2],[1,3]]}"#);
        assert_eq!(hg.edges.len(), 153);
        assert!(hg.edges.iter().all(|e| e.len() == 3));
    }

    #[test]
    fn edge_cap_is_enforced() {
        let (inst, alphabet) =
            parse_instance(r#"{"m":3,"k":3,"receivers":[[1],[2],[3]]}"#).unwrap();
        let err = enumerate_maximal_edges(&inst, alphabet, 10).unwrap_err();
        assert!(matches!(err, Error::Capacity(_)), "{err}");
    }
}
