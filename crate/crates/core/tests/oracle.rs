//! Naive reference implementations checked against the library: validity
//! straight from the definition, maximal sets by full subset scan, covering
//! numbers by exhaustive combination search, and decoder tables replayed
//! slice by slice. The heavy instances are exhausted completely: every
//! receiver family at m=3, k=2 and every family at m=2 for k up to 4.

use vpcode::cover::{min_cover, solve, CoverBudget};
use vpcode::decodability::{is_valid_fiber, is_valid_fiber_under, verify_codebook, FiberRule};
use vpcode::hypergraph::{enumerate_maximal_edges, DEFAULT_EDGE_CAP};
use vpcode::linear::{decodable_indices, LinearEncoder, PrimeField};
use vpcode::model::{parse_instance, Alphabet, ProblemInstance, ReceiverSet, Universe};

fn realisation(v: u32, m: usize, k: u32) -> Vec<u32> {
    (0..m)
        .map(|j| v / k.pow((m - 1 - j) as u32) % k)
        .collect()
}

/// Validity from the definition: group the members along each receiver's
/// side information and ask for a constant coordinate outside it, or the
/// forced one when a choice is given.
fn naive_valid(
    members: &[u32],
    m: usize,
    k: u32,
    receivers: &[Vec<usize>],
    choice: Option<&[usize]>,
) -> bool {
    receivers.iter().enumerate().all(|(r, h)| {
        let mut slices: Vec<(Vec<u32>, Vec<Vec<u32>>)> = Vec::new();
        for &v in members {
            let x = realisation(v, m, k);
            let key: Vec<u32> = h.iter().map(|&i| x[i]).collect();
            match slices.iter_mut().find(|(existing, _)| *existing == key) {
                Some((_, slice)) => slice.push(x),
                None => slices.push((key, vec![x])),
            }
        }
        slices.iter().all(|(_, slice)| {
            (0..m).any(|i| {
                let allowed = match choice {
                    Some(c) => i == c[r],
                    None => !h.contains(&i),
                };
                allowed && slice.iter().all(|x| x[i] == slice[0][i])
            })
        })
    })
}

/// All maximal valid subsets by scanning every subset of the universe;
/// usable up to 16 realisations.
fn naive_maximal_edges(n: u32, m: usize, k: u32, receivers: &[Vec<usize>]) -> Vec<Vec<u32>> {
    assert!(n <= 16);
    let members_of = |mask: u32| -> Vec<u32> { (0..n).filter(|v| mask & (1 << v) != 0).collect() };
    let valid: Vec<u32> = (1u32..1 << n)
        .filter(|&mask| naive_valid(&members_of(mask), m, k, receivers, None))
        .collect();
    let mut edges: Vec<Vec<u32>> = valid
        .iter()
        .filter(|&&mask| !valid.iter().any(|&other| other != mask && other & mask == mask))
        .map(|&mask| members_of(mask))
        .collect();
    edges.sort();
    edges
}

/// Smallest number of edges covering all n vertices, by trying every
/// combination at each size.
fn naive_cover_number(edges: &[Vec<u32>], n: u32) -> usize {
    let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
    let masks: Vec<u32> = edges
        .iter()
        .map(|e| e.iter().fold(0u32, |acc, &v| acc | 1 << v))
        .collect();
    fn extend(masks: &[u32], start: usize, left: usize, covered: u32, full: u32) -> bool {
        if covered == full {
            return true;
        }
        if left == 0 {
            return false;
        }
        (start..masks.len())
            .any(|i| extend(masks, i + 1, left - 1, covered | masks[i], full))
    }
    (1..=edges.len())
        .find(|&r| extend(&masks, 0, r, 0, full))
        .expect("edges cover the universe")
}

/// Decoder tables replayed from the definition: per receiver, each
/// nonempty slice of each fiber must have exactly one entry whose index is
/// new to the receiver and whose value holds across the slice.
fn naive_codebook_ok(cb: &vpcode::codebook::VPCodebook, receivers: &[Vec<usize>]) -> bool {
    let (m, k) = (cb.m, cb.k);
    for fiber in cb.fibers() {
        if !naive_valid(&fiber, m, k, receivers, None) {
            return false;
        }
    }
    // decoder tables follow the codebook's canonical receiver order, which
    // need not match the family order given to this function
    for table in &cb.decoders {
        let h = &table.receiver.members();
        let mut expected: Vec<(u64, Vec<u32>)> = Vec::new();
        for (c, fiber) in cb.fibers().iter().enumerate() {
            let mut keys: Vec<Vec<u32>> = Vec::new();
            for &v in fiber {
                let x = realisation(v, m, k);
                let key: Vec<u32> = h.iter().map(|&i| x[i]).collect();
                if !keys.contains(&key) {
                    keys.push(key);
                }
            }
            keys.sort();
            expected.extend(keys.into_iter().map(|key| (c as u64, key)));
        }
        if table.entries.len() != expected.len() {
            return false;
        }
        for (entry, (c, key)) in table.entries.iter().zip(expected) {
            if entry.codeword != c || entry.side_info != key {
                return false;
            }
            if h.contains(&entry.index) || entry.index >= m {
                return false;
            }
            let consistent = cb.fibers()[c as usize].iter().all(|&v| {
                let x = realisation(v, m, k);
                let in_slice = h.iter().map(|&i| x[i]).collect::<Vec<_>>() == key;
                !in_slice || x[entry.index] == entry.value
            });
            if !consistent {
                return false;
            }
        }
    }
    true
}

fn family_instance(m: usize, k: u32, receivers: &[Vec<usize>]) -> (ProblemInstance, Alphabet) {
    let one_based: Vec<Vec<usize>> = receivers
        .iter()
        .map(|h| h.iter().map(|&i| i + 1).collect())
        .collect();
    let doc = serde_json::json!({"m": m, "k": k, "receivers": one_based});
    parse_instance(&doc.to_string()).unwrap()
}

/// Every subset of {∅, {1}, {2}, {1,2}, {3}, {1,3}, {2,3}} as a receiver
/// family: edges, covering number, and codebook all match the naive
/// reference.
#[test]
fn exhaustive_families_m3_binary() {
    let all_h: Vec<Vec<usize>> = (0u32..7)
        .map(|mask| (0..3).filter(|&i| mask & (1 << i) != 0).collect())
        .collect();
    for family in 1u32..128 {
        let receivers: Vec<Vec<usize>> = (0..7)
            .filter(|&j| family & (1 << j) != 0)
            .map(|j| all_h[j as usize].clone())
            .collect();
        let (inst, alphabet) = family_instance(3, 2, &receivers);

        let hg = enumerate_maximal_edges(&inst, alphabet, DEFAULT_EDGE_CAP).unwrap();
        let naive_edges = naive_maximal_edges(8, 3, 2, &receivers);
        assert_eq!(hg.edges, naive_edges, "edges differ for family {family:#b}");

        let sol = min_cover(&hg, &CoverBudget::default()).unwrap();
        assert!(sol.optimal);
        let naive_t = naive_cover_number(&naive_edges, 8) as u64;
        assert_eq!(sol.t, naive_t, "covering number differs for family {family:#b}");

        let out = solve(&inst, alphabet, &CoverBudget::default(), DEFAULT_EDGE_CAP).unwrap();
        assert!(verify_codebook(&out.codebook, &inst, alphabet).unwrap().ok);
        assert!(naive_codebook_ok(&out.codebook, &receivers));
    }
}

/// Same full sweep at m=2 for k = 2, 3, 4.
#[test]
fn exhaustive_families_m2_small_alphabets() {
    let all_h: Vec<Vec<usize>> = vec![vec![], vec![0], vec![1]];
    for k in 2u32..=4 {
        for family in 1u32..8 {
            let receivers: Vec<Vec<usize>> = (0..3)
                .filter(|&j| family & (1 << j) != 0)
                .map(|j| all_h[j as usize].clone())
                .collect();
            let (inst, alphabet) = family_instance(2, k, &receivers);
            let n = k * k;

            let hg = enumerate_maximal_edges(&inst, alphabet, DEFAULT_EDGE_CAP).unwrap();
            let naive_edges = naive_maximal_edges(n, 2, k, &receivers);
            assert_eq!(hg.edges, naive_edges, "edges differ for k={k} family {family:#b}");

            let sol = min_cover(&hg, &CoverBudget::default()).unwrap();
            assert!(sol.optimal);
            assert_eq!(sol.t, naive_cover_number(&naive_edges, n) as u64);

            let out = solve(&inst, alphabet, &CoverBudget::default(), DEFAULT_EDGE_CAP).unwrap();
            assert!(verify_codebook(&out.codebook, &inst, alphabet).unwrap().ok);
            assert!(naive_codebook_ok(&out.codebook, &receivers));
        }
    }
}

#[test]
fn fiber_oracle_agrees_on_every_subset_of_the_ternary_universe_slices() {
    // spot the library oracle against the naive one on all subsets of a
    // 3-message binary universe under the singleton family, both free and
    // with a forced witness per receiver
    let receivers = vec![vec![0usize], vec![1], vec![2]];
    let (inst, alphabet) = family_instance(3, 2, &receivers);
    let uni = Universe::new(3, alphabet).unwrap();
    let choice = [1usize, 0, 0];
    let rule = FiberRule::pliable(&inst, &choice).unwrap();
    for mask in 1u32..256 {
        let members: Vec<u32> = (0..8).filter(|v| mask & (1 << v) != 0).collect();
        assert_eq!(
            is_valid_fiber(&members, &inst, &uni),
            naive_valid(&members, 3, 2, &receivers, None),
            "free validity differs on {members:?}"
        );
        assert_eq!(
            is_valid_fiber_under(&rule, &members, &inst, &uni),
            naive_valid(&members, 3, 2, &receivers, Some(&choice)),
            "forced validity differs on {members:?}"
        );
    }
}

#[test]
fn forced_witness_rejects_the_free_witness_fiber() {
    // the four-element fiber where receiver {2} sees x2=1 on a slice whose
    // first message varies: fine when any new index may serve, invalid
    // once receiver {2} is pinned to index 1
    let receivers = vec![vec![0usize], vec![1], vec![2]];
    let (inst, alphabet) = family_instance(3, 3, &receivers);
    let uni = Universe::new(3, alphabet).unwrap();
    let members: Vec<u32> = [[0, 0, 0], [0, 0, 1], [1, 1, 2], [2, 1, 2]]
        .iter()
        .map(|r| uni.index_of(r).unwrap())
        .collect();
    assert!(is_valid_fiber(&members, &inst, &uni));
    let choice = [1usize, 0, 0];
    let rule = FiberRule::pliable(&inst, &choice).unwrap();
    assert!(!is_valid_fiber_under(&rule, &members, &inst, &uni));
    assert!(!naive_valid(&members, 3, 3, &receivers, Some(&choice)));
}

#[test]
fn verifier_and_naive_check_agree_on_corruptions() {
    let receivers = vec![vec![0usize], vec![1], vec![2]];
    let (inst, alphabet) = family_instance(3, 2, &receivers);
    let out = solve(&inst, alphabet, &CoverBudget::default(), DEFAULT_EDGE_CAP).unwrap();
    let good = out.codebook;
    assert!(verify_codebook(&good, &inst, alphabet).unwrap().ok);
    assert!(naive_codebook_ok(&good, &receivers));

    // flip one decoded value
    let mut tampered = good.clone();
    tampered.decoders[0].entries[0].value ^= 1;
    assert!(!verify_codebook(&tampered, &inst, alphabet).unwrap().ok);
    assert!(!naive_codebook_ok(&tampered, &receivers));

    // drop one entry
    let mut tampered = good.clone();
    tampered.decoders[1].entries.remove(0);
    assert!(!verify_codebook(&tampered, &inst, alphabet).unwrap().ok);
    assert!(!naive_codebook_ok(&tampered, &receivers));

    // reroute one realisation to another codeword; both checks must agree
    // on whatever that does
    for target in 0..good.t {
        let mut tampered = good.clone();
        tampered.assignment[0] = target;
        let report = verify_codebook(&tampered, &inst, alphabet).unwrap();
        assert_eq!(report.ok, naive_codebook_ok(&tampered, &receivers));
    }
}

#[test]
fn linear_decodability_matches_pairwise_scan() {
    // j is decodable iff no two realisations share the codeword and the
    // side information yet differ at j
    fn naive_decodable(enc: &LinearEncoder, h: &[usize], q: u32) -> Vec<usize> {
        let m = enc.m();
        let total = q.pow(m as u32);
        let encode = |v: u32| {
            let x = realisation(v, m, q);
            (0..enc.t())
                .map(|i| {
                    enc.row(i)
                        .iter()
                        .zip(&x)
                        .fold(0u32, |acc, (&a, &xv)| (acc + a * xv) % q)
                })
                .collect::<Vec<_>>()
        };
        (0..m)
            .filter(|&j| {
                !h.contains(&j)
                    && (0..total).all(|v| {
                        let (x, cx) = (realisation(v, m, q), encode(v));
                        (0..total).all(|w| {
                            let (y, cy) = (realisation(w, m, q), encode(w));
                            cx != cy
                                || h.iter().any(|&i| x[i] != y[i])
                                || x[j] == y[j]
                        })
                    })
            })
            .collect()
    }

    let cases: Vec<(u32, &str)> = vec![
        (2, "1,1,0;0,1,1"),
        (2, "1,0,0;0,1,0;0,0,1"),
        (2, "1,1,1"),
        (2, "0,0,0;0,0,0"),
        (3, "1,1,0;0,1,1"),
        (3, "1,2,0;0,1,2"),
        (3, "2,2,2"),
    ];
    for (q, text) in cases {
        let field = PrimeField::new(q).unwrap();
        let enc = LinearEncoder::parse(text, field).unwrap();
        for h_mask in 0u32..7 {
            let h: Vec<usize> = (0..3).filter(|&i| h_mask & (1 << i) != 0).collect();
            let fast = decodable_indices(&enc, ReceiverSet::from_members(&h), field);
            assert_eq!(fast, naive_decodable(&enc, &h, q), "q={q} enc={text} h={h:?}");
        }
    }
}
