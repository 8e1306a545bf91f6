//! Canonical data types shared by every other module: problem instances,
//! message alphabets, realisations and their dense lexicographic indexing,
//! broadcast rates, and the JSON instance format.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Instances with at most this many realisations may be solved exactly.
/// Larger instances are still accepted for verification and bounds.
pub const SOLVE_SIZE_GUARD: u64 = 1 << 24;

/// Message alphabet size `k >= 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet {
    k: u32,
}

impl Alphabet {
    pub fn new(k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::Input(format!("alphabet size must be >= 2, got {k}")));
        }
        Ok(Alphabet { k })
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.k)
    }
}

/// A receiver's side-information set, stored as a bitmask over 0-based
/// message indices. Receivers are named by these sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ReceiverSet {
    mask: u64,
}

impl ReceiverSet {
    pub fn from_mask(mask: u64) -> Self {
        ReceiverSet { mask }
    }

    pub fn empty() -> Self {
        ReceiverSet { mask: 0 }
    }

    #[inline]
    pub fn mask(&self) -> u64 {
        self.mask
    }

    #[inline]
    pub fn contains(&self, index: usize) -> bool {
        self.mask >> index & 1 == 1
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    /// 0-based member indices in increasing order.
    pub fn members(&self) -> Vec<usize> {
        (0..64).filter(|i| self.contains(*i)).collect()
    }

    /// 1-based member indices in increasing order, as used in JSON.
    pub fn members_one_based(&self) -> Vec<usize> {
        self.members().into_iter().map(|i| i + 1).collect()
    }

    /// 0-based indices of `[0:m-1]` outside the set, in increasing order.
    pub fn complement(&self, m: usize) -> Vec<usize> {
        (0..m).filter(|i| !self.contains(*i)).collect()
    }

    /// Bitmask of `[0:m-1]` outside the set.
    #[inline]
    pub fn complement_mask(&self, m: usize) -> u64 {
        !self.mask & ((1u64 << m) - 1)
    }

    pub fn from_members(members: &[usize]) -> Self {
        let mut mask = 0;
        for &i in members {
            mask |= 1u64 << i;
        }
        ReceiverSet { mask }
    }
}

/// A problem instance `(m, U)`: message count and the family of
/// side-information sets, one per receiver.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemInstance {
    m: usize,
    receivers: Vec<ReceiverSet>,
}

impl ProblemInstance {
    /// Builds an instance from 0-based side-information sets, enforcing the
    /// instance invariants: every set is a proper subset of `[0:m-1]`, sets
    /// are distinct, and at least one receiver exists.
    pub fn new(m: usize, receivers: Vec<ReceiverSet>) -> Result<Self> {
        if m == 0 {
            return Err(Error::Input("message count m must be positive".into()));
        }
        if m > 64 {
            return Err(Error::Input(format!(
                "message count m must be at most 64, got {m}"
            )));
        }
        if receivers.is_empty() {
            return Err(Error::Input("instance must have at least one receiver".into()));
        }
        let full = (1u64 << m) - 1;
        for r in &receivers {
            if r.mask() & !full != 0 {
                return Err(Error::Input(format!(
                    "receiver {:?} references a message index above m={m}",
                    r.members_one_based()
                )));
            }
            if r.mask() == full {
                return Err(Error::Input(
                    "no receiver has side information H = [1:m]".into(),
                ));
            }
        }
        let mut sorted: Vec<ReceiverSet> = receivers.clone();
        sorted.sort_by_key(|r| r.members());
        for pair in sorted.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::Input(format!(
                    "duplicate receiver {:?}",
                    pair[0].members_one_based()
                )));
            }
        }
        Ok(ProblemInstance { m, receivers: sorted })
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    /// Receivers in canonical order (lexicographic by sorted member list).
    #[inline]
    pub fn receivers(&self) -> &[ReceiverSet] {
        &self.receivers
    }

    pub fn receiver_count(&self) -> usize {
        self.receivers.len()
    }

    /// Number of realisations `k^m`, or `None` on overflow.
    pub fn realisation_count(&self, alphabet: Alphabet) -> Option<u64> {
        let mut n: u64 = 1;
        for _ in 0..self.m {
            n = n.checked_mul(alphabet.k() as u64)?;
        }
        Some(n)
    }
}

/// A length-`m` message realisation with entries in `[0:k-1]`.
pub type Realisation = Vec<u32>;

/// Dense lexicographic rank of a realisation, `values[0]` most significant.
pub fn canonical_index(r: &[u32], alphabet: Alphabet, m: usize) -> Result<u64> {
    if r.len() != m {
        return Err(Error::Input(format!(
            "realisation has length {}, expected {m}",
            r.len()
        )));
    }
    let k = alphabet.k() as u64;
    let mut index = 0u64;
    for &v in r {
        if v >= alphabet.k() {
            return Err(Error::Input(format!(
                "realisation entry {v} out of range [0:{}]",
                alphabet.k() - 1
            )));
        }
        index = index * k + v as u64;
    }
    Ok(index)
}

/// Dense enumeration of `[0:k-1]^m`: converts between realisations and
/// their canonical indices. Construction requires `k^m <= 2^32` so indices
/// fit a `u32`; the stricter [`SOLVE_SIZE_GUARD`] is enforced separately by
/// the solving entry points.
#[derive(Debug, Clone, Copy)]
pub struct Universe {
    m: usize,
    k: u32,
    size: u64,
}

impl Universe {
    pub fn new(m: usize, alphabet: Alphabet) -> Result<Self> {
        let mut size: u64 = 1;
        for _ in 0..m {
            size = size
                .checked_mul(alphabet.k() as u64)
                .filter(|&s| s <= u32::MAX as u64 + 1)
                .ok_or_else(|| {
                    Error::Capacity(format!(
                        "k^m exceeds 2^32 for k={} m={m}; dense enumeration unavailable",
                        alphabet.k()
                    ))
                })?;
        }
        Ok(Universe { m, k: alphabet.k(), size })
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.k
    }

    #[inline]
    pub fn alphabet(&self) -> Alphabet {
        Alphabet { k: self.k }
    }

    /// `k^m`, the vertex count of the coding hypergraph.
    #[inline]
    pub fn size(&self) -> u64 {
        self.size
    }

    /// Decodes a dense index into its realisation.
    pub fn realisation(&self, index: u32) -> Realisation {
        let mut out = vec![0u32; self.m];
        self.write_realisation(index, &mut out);
        out
    }

    /// Decodes a dense index into a caller-provided buffer.
    #[inline]
    pub fn write_realisation(&self, index: u32, out: &mut [u32]) {
        debug_assert_eq!(out.len(), self.m);
        let mut rest = index as u64;
        for slot in out.iter_mut().rev() {
            *slot = (rest % self.k as u64) as u32;
            rest /= self.k as u64;
        }
        debug_assert_eq!(rest, 0);
    }

    /// Canonical index of a realisation.
    pub fn index_of(&self, r: &[u32]) -> Result<u32> {
        let idx = canonical_index(r, self.alphabet(), self.m)?;
        Ok(idx as u32)
    }

    /// Projection of the realisation at `index` onto the members of `set`,
    /// packed as a dense sub-index (members in increasing order, first
    /// member most significant).
    #[inline]
    pub fn project(&self, index: u32, set: ReceiverSet) -> u64 {
        let mut rest = index as u64;
        let mut packed = 0u64;
        let mut place = 1u64;
        for i in (0..self.m).rev() {
            let digit = rest % self.k as u64;
            rest /= self.k as u64;
            if set.contains(i) {
                packed += digit * place;
                place *= self.k as u64;
            }
        }
        packed
    }

    /// Bitmask over message indices where the realisations at `a` and `b`
    /// agree.
    #[inline]
    pub fn agreement_mask(&self, a: u32, b: u32) -> u64 {
        let mut ra = a as u64;
        let mut rb = b as u64;
        let mut mask = 0u64;
        for i in (0..self.m).rev() {
            if ra % self.k as u64 == rb % self.k as u64 {
                mask |= 1u64 << i;
            }
            ra /= self.k as u64;
            rb /= self.k as u64;
        }
        mask
    }
}

/// Broadcast rate `log t / log k`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Rate(pub f64);

impl Rate {
    pub fn value(&self) -> f64 {
        self.0
    }
}

impl fmt::Display for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.4}", self.0)
    }
}

/// Rate of a code with `t` codewords at alphabet size `k`.
pub fn rate_of(t: u64, alphabet: Alphabet) -> Result<Rate> {
    if t == 0 {
        return Err(Error::Input("codeword count t must be positive".into()));
    }
    Ok(Rate((t as f64).ln() / (alphabet.k() as f64).ln()))
}

/// JSON document shape for problem instances.
#[derive(Debug, Serialize, Deserialize)]
pub struct InstanceDoc {
    pub m: usize,
    pub k: u32,
    pub receivers: Vec<Vec<usize>>,
}

/// Parses the instance JSON format, validating all instance invariants.
/// Receiver arrays hold sorted 1-based message indices; an empty array is
/// the receiver with no side information.
pub fn parse_instance(text: &str) -> Result<(ProblemInstance, Alphabet)> {
    let doc: InstanceDoc = serde_json::from_str(text)
        .map_err(|e| Error::Input(format!("instance JSON: {e}")))?;
    instance_from_doc(&doc)
}

pub fn instance_from_doc(doc: &InstanceDoc) -> Result<(ProblemInstance, Alphabet)> {
    let alphabet = Alphabet::new(doc.k)?;
    if doc.m == 0 || doc.m > 64 {
        return Err(Error::Input(format!(
            "message count m must be in [1:64], got {}",
            doc.m
        )));
    }
    let mut receivers = Vec::with_capacity(doc.receivers.len());
    for list in &doc.receivers {
        let mut mask = 0u64;
        for &i in list {
            if i == 0 || i > doc.m {
                return Err(Error::Input(format!(
                    "receiver index {i} out of range [1:{}]",
                    doc.m
                )));
            }
            if mask >> (i - 1) & 1 == 1 {
                return Err(Error::Input(format!(
                    "receiver {list:?} repeats index {i}"
                )));
            }
            mask |= 1u64 << (i - 1);
        }
        receivers.push(ReceiverSet::from_mask(mask));
    }
    let inst = ProblemInstance::new(doc.m, receivers)?;
    Ok((inst, alphabet))
}

/// Serialises an instance back to its JSON document form.
pub fn instance_to_doc(inst: &ProblemInstance, alphabet: Alphabet) -> InstanceDoc {
    InstanceDoc {
        m: inst.m(),
        k: alphabet.k(),
        receivers: inst
            .receivers()
            .iter()
            .map(|r| r.members_one_based())
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alpha(k: u32) -> Alphabet {
        Alphabet::new(k).unwrap()
    }

    #[test]
    fn canonical_index_examples() {
        assert_eq!(canonical_index(&[0, 0, 0], alpha(3), 3).unwrap(), 0);
        assert_eq!(canonical_index(&[2, 2, 2], alpha(3), 3).unwrap(), 26);
        assert_eq!(canonical_index(&[0, 0, 1], alpha(3), 3).unwrap(), 1);
    }

    #[test]
    fn canonical_index_rejects_out_of_range() {
        assert!(canonical_index(&[0, 3, 0], alpha(3), 3).is_err());
        assert!(canonical_index(&[0, 0], alpha(3), 3).is_err());
    }

    #[test]
    fn index_round_trip_is_identity() {
        for (m, k) in [(3usize, 3u32), (4, 2), (2, 7), (5, 3), (1, 9)] {
            let uni = Universe::new(m, alpha(k)).unwrap();
            assert!(uni.size() <= 100_000);
            for idx in 0..uni.size() as u32 {
                let r = uni.realisation(idx);
                assert_eq!(uni.index_of(&r).unwrap(), idx);
            }
        }
    }

    #[test]
    fn projection_matches_manual_packing() {
        let uni = Universe::new(3, alpha(3)).unwrap();
        let idx = uni.index_of(&[2, 0, 1]).unwrap();
        // project onto {1,3} (0-based {0,2}): digits (2,1) -> 2*3+1
        let set = ReceiverSet::from_members(&[0, 2]);
        assert_eq!(uni.project(idx, set), 7);
        assert_eq!(uni.project(idx, ReceiverSet::empty()), 0);
    }

    #[test]
    fn agreement_mask_flags_equal_coordinates() {
        let uni = Universe::new(3, alpha(3)).unwrap();
        let a = uni.index_of(&[1, 0, 2]).unwrap();
        let b = uni.index_of(&[1, 2, 2]).unwrap();
        assert_eq!(uni.agreement_mask(a, b), 0b101);
    }

    #[test]
    fn parse_singleton_family_instance() {
        let (inst, alphabet) =
            parse_instance(r#"{"m":3,"k":3,"receivers":[[1],[2],[3]]}"#).unwrap();
        assert_eq!(inst.m(), 3);
        assert_eq!(alphabet.k(), 3);
        assert_eq!(inst.receiver_count(), 3);
        assert_eq!(inst.receivers()[0].members_one_based(), vec![1]);
    }

    #[test]
    fn parse_chained_instance_with_empty_receiver() {
        let (inst, alphabet) =
            parse_instance(r#"{"m":3,"k":2,"receivers":[[],[1],[1,2],[1,3]]}"#).unwrap();
        assert_eq!(alphabet.k(), 2);
        assert_eq!(inst.receiver_count(), 4);
        assert!(inst.receivers()[0].is_empty());
        assert_eq!(inst.receivers()[2].members_one_based(), vec![1, 2]);
    }

    #[test]
    fn parse_rejects_receiver_knowing_everything() {
        let err = parse_instance(r#"{"m":2,"k":2,"receivers":[[1,2]]}"#).unwrap_err();
        assert!(err.to_string().contains("no receiver has side information"));
    }

    #[test]
    fn parse_rejects_small_alphabet_and_duplicates() {
        assert!(parse_instance(r#"{"m":3,"k":1,"receivers":[[1]]}"#).is_err());
        assert!(parse_instance(r#"{"m":3,"k":2,"receivers":[[1],[1]]}"#).is_err());
        assert!(parse_instance(r#"{"m":3,"k":2,"receivers":[]}"#).is_err());
        assert!(parse_instance(r#"{"m":3,"k":2,"receivers":[[4]]}"#).is_err());
        assert!(parse_instance(r#"not json"#).is_err());
    }

    #[test]
    fn receivers_are_canonically_ordered() {
        let (inst, _) =
            parse_instance(r#"{"m":3,"k":2,"receivers":[[2],[1,3],[1],[1,2]]}"#).unwrap();
        let lists: Vec<Vec<usize>> = inst
            .receivers()
            .iter()
            .map(|r| r.members_one_based())
            .collect();
        assert_eq!(lists, vec![vec![1], vec![1, 2], vec![1, 3], vec![2]]);
    }

    #[test]
    fn rate_examples() {
        assert!((rate_of(7, alpha(3)).unwrap().value() - 1.7712).abs() < 1e-4);
        assert!((rate_of(11, alpha(4)).unwrap().value() - 1.7297).abs() < 1e-4);
        for k in 2..10 {
            assert_eq!(rate_of(k as u64, alpha(k)).unwrap().value(), 1.0);
        }
    }

    #[test]
    fn rate_is_increasing_in_t() {
        let mut last = 0.0;
        for t in 1..200u64 {
            let r = rate_of(t, alpha(3)).unwrap().value();
            assert!(r > last || t == 1);
            last = r;
        }
    }
}
