//! Fixed-capacity vertex sets backed by u64 blocks.

/// A subset of {0, .., n-1} as a bitmask.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct VertexSet {
    blocks: Vec<u64>,
}

impl VertexSet {
    pub fn empty(n: usize) -> VertexSet {
        VertexSet { blocks: vec![0; n.div_ceil(64)] }
    }

    pub fn insert(&mut self, v: usize) {
        self.blocks[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        self.blocks[v / 64] &= !(1 << (v % 64));
    }

    pub fn contains(&self, v: usize) -> bool {
        self.blocks[v / 64] >> (v % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        for (a, b) in self.blocks.iter_mut().zip(&other.blocks) {
            *a &= b;
        }
    }

    /// Drops every member less than or equal to v.
    pub fn retain_above(&mut self, v: usize) {
        for (i, b) in self.blocks.iter_mut().enumerate() {
            if i < v / 64 {
                *b = 0;
            } else if i == v / 64 {
                let shift = v % 64 + 1;
                *b = if shift == 64 { 0 } else { *b & (!0u64 << shift) };
            }
        }
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(i, &block)| {
            let mut b = block;
            std::iter::from_fn(move || {
                if b == 0 {
                    return None;
                }
                let tz = b.trailing_zeros() as usize;
                b &= b - 1;
                Some(64 * i + tz)
            })
        })
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}
