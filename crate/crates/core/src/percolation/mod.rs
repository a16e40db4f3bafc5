//! Sampling of p = 1/2 site configurations and union-find cluster labeling.

use std::sync::Arc;

use crate::lattice::{DomainKind, SiteIndex};
use crate::rng::{CounterRng, SeedRecord};

mod events;
pub use events::*;

/// Which site state is clustered.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Open,
    Closed,
    /// Cluster both colors in one structure (roots never mix colors).
    Both,
}

/// One open/closed sample of every site of a truncated domain at p = 1/2.
#[derive(Debug, Clone)]
pub struct Configuration {
    pub index: Arc<SiteIndex>,
    words: Vec<u64>,
    pub seed_record: Option<SeedRecord>,
}

impl Configuration {
    /// Fair-coin sample, fully determined by the seed record.
    pub fn sample(index: Arc<SiteIndex>, seed: SeedRecord) -> Self {
        let n_words = index.len().div_ceil(64);
        let rng = CounterRng::new(seed);
        let mut words: Vec<u64> = (0..n_words as u64).map(|i| rng.word_at(i)).collect();
        // mask tail bits so whole-word statistics stay honest
        let tail = index.len() % 64;
        if tail != 0 {
            if let Some(last) = words.last_mut() {
                *last &= (1u64 << tail) - 1;
            }
        }
        Configuration { index, words, seed_record: Some(seed) }
    }

    /// Build from an explicit per-site predicate (test hook / forced configurations).
    pub fn from_fn(index: Arc<SiteIndex>, mut open: impl FnMut(crate::lattice::SiteCoord) -> bool) -> Self {
        let mut words = vec![0u64; index.len().div_ceil(64)];
        for i in 0..index.len() {
            if open(index.site_at(i)) {
                words[i >> 6] |= 1u64 << (i & 63);
            }
        }
        Configuration { index, words, seed_record: None }
    }

    /// Build from a bit mask over site indices (exhaustive enumeration driver).
    pub fn from_mask(index: Arc<SiteIndex>, mask: u64) -> Self {
        assert!(index.len() <= 64, "from_mask supports at most 64 sites");
        let tail = index.len() % 64;
        let m = if tail == 0 { mask } else { mask & ((1u64 << tail) - 1) };
        Configuration { index, words: vec![m], seed_record: None }
    }

    pub fn all(index: Arc<SiteIndex>, open: bool) -> Self {
        Self::from_fn(index, |_| open)
    }

    #[inline]
    pub fn is_open(&self, idx: usize) -> bool {
        (self.words[idx >> 6] >> (idx & 63)) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.len() == 0
    }

    pub fn open_count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// Union-find component structure over site indices.
///
/// `parent[i] < 0` marks a root with component size `-parent[i]`.
#[derive(Debug, Clone)]
pub struct ClusterLabeling {
    parent: Vec<i32>,
    pub phase: Phase,
}

impl ClusterLabeling {
    /// Label `c` by unioning adjacent same-phase sites.
    pub fn build(c: &Configuration, phase: Phase) -> Self {
        let mut lab = ClusterLabeling { parent: Vec::new(), phase };
        lab.rebuild(c, phase);
        lab
    }

    /// Re-label in place, reusing the parent buffer.
    ///
    /// Two passes over the rows: horizontal same-color runs are written
    /// directly (head root plus direct children, no finds), then vertical
    /// neighbors are unioned wordwise. Within a row the two upward neighbor
    /// offsets are constant, so the color matches of 64 sites at a time reduce
    /// to shifted xors of the configuration words.
    pub fn rebuild(&mut self, c: &Configuration, phase: Phase) {
        self.phase = phase;
        self.parent.clear();
        self.parent.resize(c.len(), -1);
        let index = &c.index;
        let dom = &index.domain;
        let words = &c.words;

        // 64 configuration bits starting at a (possibly negative) site index;
        // bits outside the valid range are garbage and must be masked off.
        #[inline(always)]
        fn chunk(words: &[u64], pos: isize) -> u64 {
            if pos <= -64 {
                return 0;
            }
            if pos < 0 {
                return chunk(words, 0) << (-pos as u32);
            }
            let w = (pos >> 6) as usize;
            let b = (pos & 63) as u32;
            let lo = words.get(w).copied().unwrap_or(0) >> b;
            if b == 0 {
                lo
            } else {
                lo | (words.get(w + 1).copied().unwrap_or(0) << (64 - b))
            }
        }
        #[inline(always)]
        fn matches(phase: Phase, a: u64, b: u64) -> u64 {
            match phase {
                Phase::Open => a & b,
                Phase::Closed => !a & !b,
                Phase::Both => !(a ^ b),
            }
        }
        // mask of chunk bits in [lo, hi), clamped to the word
        #[inline(always)]
        fn range_mask(lo: isize, hi: isize) -> u64 {
            let lo = lo.clamp(0, 64) as u32;
            let hi = hi.clamp(0, 64) as u32;
            if hi <= lo {
                return 0;
            }
            let ones = if hi == 64 { !0u64 } else { (1u64 << hi) - 1 };
            ones & !((1u64 << lo) - 1)
        }
        #[inline(always)]
        fn bit(words: &[u64], i: usize) -> bool {
            (words[i >> 6] >> (i & 63)) & 1 == 1
        }

        for h in dom.h_min..=dom.h_max {
            let Some((_, start, end)) = index.row(h) else { continue };
            let mut s = start;
            while s < end {
                let color = bit(words, s);
                let mut e = s + 1;
                while e < end && bit(words, e) == color {
                    e += 1;
                }
                let joins = match phase {
                    Phase::Both => true,
                    Phase::Open => color,
                    Phase::Closed => !color,
                };
                if joins && e - s > 1 {
                    self.parent[s] = -((e - s) as i32);
                    for k in s + 1..e {
                        self.parent[k] = s as i32;
                    }
                }
                s = e;
            }
        }

        for h in dom.h_min..dom.h_max {
            let Some((m_lo, start, end)) = index.row(h) else { continue };
            let Some((m_lo_u, start_u, end_u)) = index.row(h + 1) else { continue };
            if start == end || start_u == end_u {
                continue;
            }
            // neighbor (m, h+1) of site i sits at i + d, (m-1, h+1) at i + d - 1
            let d = start_u as isize - start as isize + (m_lo - m_lo_u) as isize;
            let mut i0 = start;
            while i0 < end {
                let base = i0 as isize;
                let here = chunk(words, base);
                let in_row = range_mask(0, end as isize - base);
                let m0 = matches(phase, here, chunk(words, base + d))
                    & range_mask(start_u as isize - d - base, end_u as isize - d - base)
                    & in_row;
                let m1 = matches(phase, here, chunk(words, base + d - 1))
                    & range_mask(start_u as isize - d + 1 - base, end_u as isize - d + 1 - base)
                    & in_row;
                let mut bits = m0;
                while bits != 0 {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    self.union(i0 + b, (base + b as isize + d) as usize);
                }
                let mut bits = m1;
                while bits != 0 {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    self.union(i0 + b, (base + b as isize + d - 1) as usize);
                }
                i0 += 64;
            }
        }
    }

    /// Label only the sites of one half-space (`h >= 0` or `h <= 0`) of a
    /// full-plane configuration; sites outside stay singletons.
    pub fn build_halfspace(c: &Configuration, phase: Phase, upper: bool) -> Self {
        let index = &c.index;
        let dom = &index.domain;
        let mut lab = ClusterLabeling { parent: vec![-1; c.len()], phase };
        #[inline(always)]
        fn joins(phase: Phase, a: bool, b: bool) -> bool {
            match phase {
                Phase::Open => a & b,
                Phase::Closed => !a & !b,
                Phase::Both => a == b,
            }
        }
        let (h_from, h_to) = if upper { (0.max(dom.h_min), dom.h_max) } else { (dom.h_min, 0.min(dom.h_max)) };
        for h in h_from..=h_to {
            let (m_lo, start, end) = index.row(h).unwrap();
            if start == end {
                continue;
            }
            for i in start..end - 1 {
                if joins(phase, c.is_open(i), c.is_open(i + 1)) {
                    lab.union(i, i + 1);
                }
            }
            if h + 1 > h_to {
                continue;
            }
            if let Some((m_lo_u, start_u, end_u)) = index.row(h + 1) {
                if start_u == end_u {
                    continue;
                }
                let width_u = end_u - start_u;
                for i in start..end {
                    let m = m_lo + (i - start) as i32;
                    let off = m - m_lo_u;
                    let oi = c.is_open(i);
                    if off >= 0 && (off as usize) < width_u {
                        let j = start_u + off as usize;
                        if joins(phase, oi, c.is_open(j)) {
                            lab.union(i, j);
                        }
                    }
                    if off >= 1 && (off as usize) <= width_u {
                        let j = start_u + off as usize - 1;
                        if joins(phase, oi, c.is_open(j)) {
                            lab.union(i, j);
                        }
                    }
                }
            }
        }
        lab
    }

    #[inline]
    pub fn find(&mut self, mut i: usize) -> u32 {
        // path halving
        while self.parent[i] >= 0 {
            let p = self.parent[i] as usize;
            if self.parent[p] >= 0 {
                self.parent[i] = self.parent[p];
                i = self.parent[p] as usize;
            } else {
                return p as u32;
            }
        }
        i as u32
    }

    #[inline]
    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a) as usize;
        let rb = self.find(b) as usize;
        if ra == rb {
            return;
        }
        // union by size
        let (big, small) = if self.parent[ra] <= self.parent[rb] { (ra, rb) } else { (rb, ra) };
        self.parent[big] += self.parent[small];
        self.parent[small] = big as i32;
    }

    #[inline]
    pub fn same_cluster(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    pub fn cluster_size(&mut self, i: usize) -> usize {
        let r = self.find(i) as usize;
        (-self.parent[r]) as usize
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }
}

/// Convenience: sampled configuration + Both-phase labeling for a domain kind.
pub fn domain_index(kind: DomainKind, segment_n: i32, truncation: i32) -> crate::error::Result<Arc<SiteIndex>> {
    Ok(Arc::new(SiteIndex::new(crate::lattice::DomainSpec::new(
        kind, segment_n, truncation,
    )?)))
}
