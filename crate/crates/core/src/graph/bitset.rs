//! Fixed-width vertex sets packed into `u64` words.

/// Number of `u64` words needed to hold `n` bits.
#[inline]
pub const fn words_for(n: usize) -> usize {
    n.div_ceil(64)
}

/// Set of vertex ids in `0..n`, one bit per vertex.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: usize,
    words: Vec<u64>,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            words: vec![0; words_for(n)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self {
            n,
            words: vec![!0; words_for(n)],
        };
        s.trim();
        s
    }

    pub fn from_vertices(n: usize, vs: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(n);
        for v in vs {
            s.insert(v);
        }
        s
    }

    fn trim(&mut self) {
        let rem = self.n % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// Universe size.
    #[inline]
    pub fn capacity(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.n && (self.words[v >> 6] >> (v & 63)) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        assert!(v < self.n, "vertex {v} out of range {}", self.n);
        self.words[v >> 6] |= 1 << (v & 63);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        if v < self.n {
            self.words[v >> 6] &= !(1 << (v & 63));
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// `self &= other`, where `other` is a packed row of the same width.
    #[inline]
    pub fn intersect_with(&mut self, other: &[u64]) {
        for (a, b) in self.words.iter_mut().zip(other) {
            *a &= b;
        }
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    /// `|self ∩ row|` without materializing the intersection.
    #[inline]
    pub fn count_and(&self, row: &[u64]) -> usize {
        and_count(&self.words, row)
    }

    pub fn iter(&self) -> Ones<'_> {
        Ones {
            words: &self.words,
            idx: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl std::fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Popcount of the bitwise AND of two equally long word slices.
#[inline]
pub fn and_count(a: &[u64], b: &[u64]) -> usize {
    let mut total = 0u64;
    for (x, y) in a.iter().zip(b) {
        total += (x & y).count_ones() as u64;
    }
    total as usize
}

/// Iterator over set bits in increasing order.
pub struct Ones<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Ones<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let bit = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * 64 + bit);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

/// Iterate the set bits of a raw word slice.
pub fn ones(words: &[u64]) -> Ones<'_> {
    Ones {
        words,
        idx: 0,
        cur: words.first().copied().unwrap_or(0),
    }
}

/// Position of the `rank`-th set bit (0-based) in `words`, if there is one.
pub fn select(words: &[u64], mut rank: usize) -> Option<usize> {
    for (i, &w) in words.iter().enumerate() {
        let c = w.count_ones() as usize;
        if rank < c {
            let mut w = w;
            for _ in 0..rank {
                w &= w - 1;
            }
            return Some(i * 64 + w.trailing_zeros() as usize);
        }
        rank -= c;
    }
    None
}
