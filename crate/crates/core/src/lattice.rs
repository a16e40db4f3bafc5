//! Triangular-lattice geometry.
//!
//! Sites are written in the integer basis `{1, j}` with `j = e^{i*pi/3}`, so the
//! site `(m, h)` sits at the Euclidean point `(m + h/2, h*sqrt(3)/2)`. Infinite
//! domains are truncated to a finite box in `(m, h)` coordinates; all geometry
//! is done on the integer coordinates and the Euclidean embedding is only used
//! for box-shaped arm-event regions.

use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// The six neighbor offsets of the triangular lattice, in the fixed order used
/// everywhere in this crate.
pub const NEIGHBOR_OFFSETS: [(i32, i32); 6] =
    [(1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1)];

/// A lattice site `m + h*j`, `j = e^{i*pi/3}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
pub struct SiteCoord {
    pub m: i32,
    pub h: i32,
}

impl SiteCoord {
    pub const fn new(m: i32, h: i32) -> Self {
        SiteCoord { m, h }
    }

    /// Euclidean embedding `(x, y)` of the site.
    pub fn position(&self) -> (f64, f64) {
        (
            self.m as f64 + 0.5 * self.h as f64,
            self.h as f64 * 3f64.sqrt() / 2.0,
        )
    }
}

/// Which of the three studied lattices a domain truncates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum DomainKind {
    /// Upper half-plane: sites with `h >= 0`.
    HalfPlane,
    /// The whole plane.
    FullPlane,
    /// The whole plane minus the ray `{(m, 0): m <= cut_end}` on the real axis.
    CutPlane { cut_end: i32 },
}

/// A truncated domain: a box `[m_min, m_max] x [h_min, h_max]` in lattice
/// coordinates, minus the cut for [`DomainKind::CutPlane`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct DomainSpec {
    pub kind: DomainKind,
    /// Truncation extent `Lambda` (lateral and vertical, in lattice units).
    pub truncation: i32,
    /// The segment `[1, n]` under study.
    pub segment_n: i32,
    pub m_min: i32,
    pub m_max: i32,
    pub h_min: i32,
    pub h_max: i32,
}

/// Default truncation for a segment of `n` sites.
pub fn default_truncation(segment_n: i32) -> i32 {
    (4 * segment_n).max(256)
}

impl DomainSpec {
    /// Standard truncated box: `m in [-Lambda, n + Lambda]`, and `h in [0, Lambda]`
    /// for the half-plane or `h in [-Lambda, Lambda]` otherwise.
    pub fn new(kind: DomainKind, segment_n: i32, truncation: i32) -> Result<Self> {
        if segment_n < 1 {
            return Err(Error::Argument(format!("segment_n must be >= 1, got {segment_n}")));
        }
        if truncation < segment_n {
            return Err(Error::Argument(format!(
                "truncation {truncation} below design floor segment_n = {segment_n}"
            )));
        }
        let h_min = match kind {
            DomainKind::HalfPlane => 0,
            _ => -truncation,
        };
        Ok(DomainSpec {
            kind,
            truncation,
            segment_n,
            m_min: -truncation,
            m_max: segment_n + truncation,
            h_min,
            h_max: truncation,
        })
    }

    /// Explicit box, for toy domains and arm-event geometry.
    pub fn with_box(
        kind: DomainKind,
        segment_n: i32,
        m_range: (i32, i32),
        h_range: (i32, i32),
    ) -> Result<Self> {
        let (m_min, m_max) = m_range;
        let (h_min, h_max) = h_range;
        if m_min > m_max || h_min > h_max {
            return Err(Error::Argument("empty box".into()));
        }
        if matches!(kind, DomainKind::HalfPlane) && h_min < 0 {
            return Err(Error::Argument("half-plane box must have h_min >= 0".into()));
        }
        Ok(DomainSpec {
            kind,
            truncation: (m_max - m_min).max(h_max - h_min),
            segment_n,
            m_min,
            m_max,
            h_min,
            h_max,
        })
    }

    /// Half-plane box roughly centered on the origin, for arm events.
    pub fn half_plane_centered(radius: i32) -> Result<Self> {
        Self::with_box(DomainKind::HalfPlane, 1, (-radius, radius), (0, radius))
    }

    pub fn contains(&self, s: SiteCoord) -> bool {
        if s.m < self.m_min || s.m > self.m_max || s.h < self.h_min || s.h > self.h_max {
            return false;
        }
        match self.kind {
            DomainKind::CutPlane { cut_end } => !(s.h == 0 && s.m <= cut_end),
            _ => true,
        }
    }

    /// The subset of the 6 triangular neighbors of `s` that lie in the domain,
    /// in the fixed offset order.
    pub fn neighbors(&self, s: SiteCoord) -> Result<Vec<SiteCoord>> {
        if !self.contains(s) {
            return Err(Error::Domain(format!("site ({}, {}) outside domain", s.m, s.h)));
        }
        Ok(NEIGHBOR_OFFSETS
            .iter()
            .map(|&(dm, dh)| SiteCoord::new(s.m + dm, s.h + dh))
            .filter(|&t| self.contains(t))
            .collect())
    }

    /// Boundary `∂_T [a, b]` of an interval of axis sites: the sites outside the
    /// interval, but adjacent to at least one of `{a, ..., b} x {0}`, that lie in
    /// this domain. For a cut plane the interval sits on the removed line and the
    /// boundary lives in the remaining lattice.
    pub fn boundary_of_interval(&self, a: i32, b: i32) -> Result<BoundarySet> {
        if a > b {
            return Err(Error::Argument(format!("interval [{a}, {b}] has a > b")));
        }
        if a < self.m_min || b > self.m_max {
            return Err(Error::Argument(format!(
                "interval [{a}, {b}] outside truncation [{}, {}]",
                self.m_min, self.m_max
            )));
        }
        let mut sites = BTreeSet::new();
        for m in a..=b {
            for &(dm, dh) in &NEIGHBOR_OFFSETS {
                let t = SiteCoord::new(m + dm, dh);
                let in_interval = t.h == 0 && t.m >= a && t.m <= b;
                if !in_interval && self.contains(t) {
                    sites.insert(t);
                }
            }
        }
        Ok(BoundarySet { sites })
    }
}

/// Boundary of an interval on the real axis: a set of sites.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundarySet {
    pub sites: BTreeSet<SiteCoord>,
}

/// Dense, stable 0..N-1 indexing of the sites of a truncated domain.
///
/// Rows (fixed `h`) are laid out bottom-to-top, each row left-to-right. On a
/// cut plane the `h = 0` row starts just right of the cut.
#[derive(Debug, Clone)]
pub struct SiteIndex {
    pub domain: DomainSpec,
    row_m_min: Vec<i32>,
    row_start: Vec<usize>,
    len: usize,
}

impl SiteIndex {
    pub fn new(domain: DomainSpec) -> Self {
        let nrows = (domain.h_max - domain.h_min + 1) as usize;
        let mut row_m_min = Vec::with_capacity(nrows);
        let mut row_start = Vec::with_capacity(nrows + 1);
        let mut acc = 0usize;
        for h in domain.h_min..=domain.h_max {
            let m_lo = match domain.kind {
                DomainKind::CutPlane { cut_end } if h == 0 => domain.m_min.max(cut_end + 1),
                _ => domain.m_min,
            };
            row_m_min.push(m_lo);
            row_start.push(acc);
            acc += (domain.m_max - m_lo + 1).max(0) as usize;
        }
        row_start.push(acc);
        SiteIndex { domain, row_m_min, row_start, len: acc }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn row(&self, h: i32) -> Option<(i32, usize, usize)> {
        if h < self.domain.h_min || h > self.domain.h_max {
            return None;
        }
        let r = (h - self.domain.h_min) as usize;
        Some((self.row_m_min[r], self.row_start[r], self.row_start[r + 1]))
    }

    #[inline]
    pub fn index_of(&self, s: SiteCoord) -> Option<usize> {
        let (m_lo, start, end) = self.row(s.h)?;
        if s.m < m_lo || s.m > self.domain.m_max {
            return None;
        }
        let idx = start + (s.m - m_lo) as usize;
        debug_assert!(idx < end);
        Some(idx)
    }

    pub fn site_at(&self, idx: usize) -> SiteCoord {
        debug_assert!(idx < self.len);
        let r = self.row_start.partition_point(|&s| s <= idx) - 1;
        let m = self.row_m_min[r] + (idx - self.row_start[r]) as i32;
        SiteCoord::new(m, self.domain.h_min + r as i32)
    }

    pub fn sites(&self) -> impl Iterator<Item = SiteCoord> + '_ {
        (0..self.len).map(move |i| self.site_at(i))
    }

    /// Index of the axis site `(m, 0)`, if present.
    #[inline]
    pub fn axis_index(&self, m: i32) -> Option<usize> {
        self.index_of(SiteCoord::new(m, 0))
    }
}
