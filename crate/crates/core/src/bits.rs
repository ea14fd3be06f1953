//! Subset encodings over a ground set of at most 16 indexed elements.
//!
//! Element `i` of a ground set is bit `i` of a `u32` mask.

/// Iterator over the indices of set bits, lowest first.
#[derive(Clone, Copy)]
pub struct Bits(u32);

impl Iterator for Bits {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

pub fn bits(mask: u32) -> Bits {
    Bits(mask)
}

#[inline]
pub fn size(mask: u32) -> usize {
    mask.count_ones() as usize
}

#[inline]
pub fn full(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

#[inline]
pub fn bit(i: usize) -> u32 {
    1u32 << i
}

/// All `k`-subsets of the set bits of `within`, in lexicographic order of
/// their sorted index tuples.
pub fn combinations(within: u32, k: usize) -> Vec<u32> {
    let idx: Vec<usize> = bits(within).collect();
    let mut out = Vec::new();
    if k > idx.len() {
        return out;
    }
    let n = idx.len();
    let mut pos: Vec<usize> = (0..k).collect();
    loop {
        out.push(pos.iter().fold(0u32, |m, &p| m | bit(idx[p])));
        let mut i = k;
        while i > 0 && pos[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        pos[i - 1] += 1;
        for j in i..k {
            pos[j] = pos[j - 1] + 1;
        }
    }
}

/// Every subset of `within`, visited in reflected Gray-code order so that
/// consecutive subsets differ in exactly one element.
pub struct GraySubsets {
    slots: Vec<u32>,
    counter: u64,
    current: u32,
}

impl GraySubsets {
    pub fn new(within: u32) -> Self {
        GraySubsets {
            slots: bits(within).map(bit).collect(),
            counter: 0,
            current: 0,
        }
    }
}

impl Iterator for GraySubsets {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        let total = 1u64 << self.slots.len();
        if self.counter >= total {
            return None;
        }
        if self.counter > 0 {
            let flip = self.counter.trailing_zeros() as usize;
            self.current ^= self.slots[flip];
        }
        self.counter += 1;
        Some(self.current)
    }
}

/// Compresses the bits of `mask` selected by `within` into a dense mask
/// (bit `j` of the result is the `j`-th selected bit of `mask`).
pub fn compress(mask: u32, within: u32) -> u32 {
    let mut out = 0u32;
    for (j, i) in bits(within).enumerate() {
        if mask & bit(i) != 0 {
            out |= bit(j);
        }
    }
    out
}
