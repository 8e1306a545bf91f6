//! Fixed-capacity bitset over dense vertex ids, used for hyperedge members
//! and cover bookkeeping.

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    words: Vec<u64>,
    len: usize,
}

impl VertexSet {
    pub fn new(capacity: usize) -> Self {
        VertexSet {
            words: vec![0; capacity.div_ceil(64)],
            len: 0,
        }
    }

    pub fn from_members(capacity: usize, members: &[u32]) -> Self {
        let mut s = VertexSet::new(capacity);
        for &v in members {
            s.insert(v);
        }
        s
    }

    #[inline]
    pub fn contains(&self, v: u32) -> bool {
        self.words[v as usize / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: u32) -> bool {
        let word = &mut self.words[v as usize / 64];
        let bit = 1u64 << (v % 64);
        if *word & bit == 0 {
            *word |= bit;
            self.len += 1;
            true
        } else {
            false
        }
    }

    #[inline]
    pub fn remove(&mut self, v: u32) -> bool {
        let word = &mut self.words[v as usize / 64];
        let bit = 1u64 << (v % 64);
        if *word & bit != 0 {
            *word &= !bit;
            self.len -= 1;
            true
        } else {
            false
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &bits)| {
            let mut rest = bits;
            std::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let b = rest.trailing_zeros();
                    rest &= rest - 1;
                    Some(w as u32 * 64 + b)
                }
            })
        })
    }

    /// Number of members of `other` not present in `self`.
    pub fn count_missing(&self, other: &[u32]) -> usize {
        other.iter().filter(|&&v| !self.contains(v)).count()
    }

    pub fn union_with(&mut self, other: &[u32]) {
        for &v in other {
            self.insert(v);
        }
    }

    pub fn smallest_absent(&self, capacity: usize) -> Option<u32> {
        for (w, &bits) in self.words.iter().enumerate() {
            if bits != u64::MAX {
                let v = w as u32 * 64 + (!bits).trailing_zeros();
                if (v as usize) < capacity {
                    return Some(v);
                }
                return None;
            }
        }
        None
    }
}
