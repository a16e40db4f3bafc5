//! Reference implementations: plain BFS connectivity and exhaustive
//! enumeration over tiny domains. Deliberately independent of the union-find
//! code paths; used by tests and the `verify` command.

use std::collections::VecDeque;
use std::sync::Arc;

use crate::lattice::{SiteCoord, SiteIndex, NEIGHBOR_OFFSETS};
use crate::percolation::Configuration;

fn neighbors_idx(index: &SiteIndex, i: usize) -> impl Iterator<Item = usize> + '_ {
    let s = index.site_at(i);
    NEIGHBOR_OFFSETS
        .iter()
        .filter_map(move |&(dm, dh)| index.index_of(SiteCoord::new(s.m + dm, s.h + dh)))
}

/// BFS component labels over sites of one color; `-1` for the other color.
pub fn bfs_labels(c: &Configuration, open: bool) -> Vec<i32> {
    let index = &c.index;
    let mut labels = vec![-1i32; index.len()];
    let mut next = 0;
    for start in 0..index.len() {
        if c.is_open(start) != open || labels[start] >= 0 {
            continue;
        }
        labels[start] = next;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for j in neighbors_idx(index, i) {
                if c.is_open(j) == open && labels[j] < 0 {
                    labels[j] = next;
                    queue.push_back(j);
                }
            }
        }
        next += 1;
    }
    labels
}

pub fn bfs_component_count(c: &Configuration, open: bool) -> usize {
    let labels = bfs_labels(c, open);
    labels.iter().copied().max().map_or(0, |m| (m + 1) as usize)
}

/// Whether an `open`-colored path joins some site of `from` to some of `to`.
pub fn bfs_connected(c: &Configuration, open: bool, from: &[usize], to: &[usize]) -> bool {
    let labels = bfs_labels(c, open);
    let mut hits = vec![];
    for &i in from {
        if c.is_open(i) == open {
            hits.push(labels[i]);
        }
    }
    to.iter().any(|&j| c.is_open(j) == open && hits.contains(&labels[j]))
}

/// Open clusters meeting the segment `[1, n] x {0}`, by BFS labels.
pub fn bfs_count_segment_clusters(c: &Configuration) -> u32 {
    let labels = bfs_labels(c, true);
    let mut seen = vec![];
    for m in 1..=c.index.domain.segment_n {
        if let Some(i) = c.index.axis_index(m) {
            if c.is_open(i) && !seen.contains(&labels[i]) {
                seen.push(labels[i]);
            }
        }
    }
    seen.len() as u32
}

/// Arm indicator by BFS, independent of the union-find route.
pub fn bfs_arm_indicator(c: &Configuration, m_in: i32, n_out: i32, three: bool) -> bool {
    let index = &c.index;
    let in_box = |i: usize, r: f64| {
        let (x, y) = index.site_at(i).position();
        x.abs() <= r && y.abs() <= r
    };
    let labels_open = bfs_labels(c, true);
    let crossing = |labels: &[i32], color: bool| -> Vec<i32> {
        let mut inner = vec![];
        let mut ext = vec![];
        for i in 0..index.len() {
            if c.is_open(i) != color {
                continue;
            }
            if in_box(i, m_in as f64) {
                inner.push(labels[i]);
            } else if !in_box(i, n_out as f64) {
                ext.push(labels[i]);
            }
        }
        inner.retain(|l| ext.contains(l));
        inner.sort_unstable();
        inner.dedup();
        inner
    };
    let open_cross = crossing(&labels_open, true);
    if !three {
        return !open_cross.is_empty();
    }
    if open_cross.is_empty() {
        return false;
    }
    let labels_closed = bfs_labels(c, false);
    let closed_cross = crossing(&labels_closed, false);
    if closed_cross.len() < 2 {
        return false;
    }
    // witnesses: one exterior site per closed crossing cluster
    let witness: Vec<usize> = closed_cross
        .iter()
        .map(|&l| {
            (0..index.len())
                .find(|&i| !c.is_open(i) && labels_closed[i] == l && !in_box(i, n_out as f64))
                .unwrap()
        })
        .collect();
    for &o in &open_cross {
        // component labels of the domain minus the open cluster o
        let mut comp = vec![-1i32; index.len()];
        let mut next = 0;
        for start in 0..index.len() {
            if labels_open[start] == o || comp[start] >= 0 {
                continue;
            }
            comp[start] = next;
            let mut queue = VecDeque::from([start]);
            while let Some(i) = queue.pop_front() {
                for j in neighbors_idx(index, i) {
                    if labels_open[j] != o && comp[j] < 0 {
                        comp[j] = next;
                        queue.push_back(j);
                    }
                }
            }
            next += 1;
        }
        let mut ids: Vec<i32> = witness.iter().map(|&i| comp[i]).collect();
        ids.sort_unstable();
        ids.dedup();
        if ids.len() >= 2 {
            return true;
        }
    }
    false
}

/// Both-color crossing `(-inf, 1] <-> [k, floor(k(1+eps))]` by BFS.
pub fn bfs_w_prime(c: &Configuration, k: i32, eps: f64) -> bool {
    let dom = &c.index.domain;
    let m_hi = (k as f64 * (1.0 + eps)).floor() as i32;
    let axis: Vec<usize> = (dom.m_min..=1).filter_map(|m| c.index.axis_index(m)).collect();
    let win: Vec<usize> = (k..=m_hi).filter_map(|m| c.index.axis_index(m)).collect();
    bfs_connected(c, true, &axis, &win) && bfs_connected(c, false, &axis, &win)
}

/// Exact expectation of `f` under the uniform measure on all configurations
/// of a tiny domain (at most 24 sites).
pub fn exhaustive_mean(index: &Arc<SiteIndex>, mut f: impl FnMut(&Configuration) -> f64) -> f64 {
    let n = index.len();
    assert!(n <= 24, "exhaustive enumeration limited to 24 sites, got {n}");
    let total = 1u64 << n;
    let mut sum = 0.0;
    for mask in 0..total {
        sum += f(&Configuration::from_mask(index.clone(), mask));
    }
    sum / total as f64
}
