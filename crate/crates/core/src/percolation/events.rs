//! Per-sample observables: segment cluster counts, window counts T(i), cut-plane
//! counts S(i)/T~(i), half-plane crossing events W/W'/W~, arm events and B(i).
//!
//! Connection conventions follow the set-to-set rule: `A <-> B` requires open
//! vertices `x in A`, `y in B` joined by an open path (and the color-swapped
//! rule for closed connections). Rays like `(-inf, 0]` are truncated at the
//! domain box.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::error::{Error, Result};
use crate::estimators::ScalePartition;
use crate::lattice::{DomainKind, SiteCoord, NEIGHBOR_OFFSETS};

use super::{ClusterLabeling, Configuration, Phase};

/// Per-window counts of T(i); `t0` is the pre-window `k in [2, a(1)]` count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowCounts {
    pub t0: u32,
    pub t: Vec<u32>,
}

impl WindowCounts {
    pub fn total(&self) -> u32 {
        self.t0 + self.t.iter().sum::<u32>()
    }
}

/// Cut-plane per-window counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CutCounts {
    /// Closed clusters joining the two boundary sets.
    pub s: u32,
    /// Open clusters joining them while avoiding the middle boundary.
    pub t_tilde: u32,
}

/// Roots of open clusters touching the truncated ray `(-inf, 0]` on the axis.
pub fn ray_connected_roots(c: &Configuration, lab: &mut ClusterLabeling) -> HashSet<u32> {
    let mut roots = HashSet::new();
    let m_min = c.index.domain.m_min;
    for m in m_min..=0 {
        if let Some(i) = c.index.axis_index(m) {
            if c.is_open(i) {
                roots.insert(lab.find(i));
            }
        }
    }
    roots
}

/// Number of distinct open clusters meeting the segment `[1, n] x {0}`.
pub fn count_segment_clusters(c: &Configuration, lab: &mut ClusterLabeling) -> u32 {
    let n = c.index.domain.segment_n;
    let mut roots = Vec::new();
    for m in 1..=n {
        if let Some(i) = c.index.axis_index(m) {
            if c.is_open(i) {
                roots.push(lab.find(i));
            }
        }
    }
    roots.sort_unstable();
    roots.dedup();
    roots.len() as u32
}

/// Segment cluster counts for every prefix `[1, n]`, `n in ns` (common random
/// numbers across segment lengths). `ns` must be ascending.
pub fn count_segment_clusters_prefixes(
    c: &Configuration,
    lab: &mut ClusterLabeling,
    ns: &[i32],
) -> Vec<u32> {
    let mut out = Vec::with_capacity(ns.len());
    let mut seen = HashSet::new();
    let mut count = 0u32;
    let mut next = 0usize;
    let n_max = *ns.last().unwrap_or(&0);
    for k in 1..=n_max {
        if let Some(i) = c.index.axis_index(k) {
            if c.is_open(i) && seen.insert(lab.find(i)) {
                count += 1;
            }
        }
        while next < ns.len() && ns[next] == k {
            out.push(count);
            next += 1;
        }
    }
    while next < ns.len() {
        out.push(count);
        next += 1;
    }
    out
}

/// Right-hand side of the cluster-count rewrite:
/// `1 + sum_{k=2}^{n} 1{k not<-> [1,k-1]} - sum_{k=1}^{n} 1{k closed}`.
///
/// Holds sample-wise against [`count_segment_clusters`]; a closed `k` is never
/// connected to anything, so it contributes to both sums.
pub fn segment_decomposition_rhs(c: &Configuration, lab: &mut ClusterLabeling) -> i64 {
    let n = c.index.domain.segment_n;
    let mut seen = HashSet::new();
    let mut not_connected = 0i64;
    let mut closed = 0i64;
    for k in 1..=n {
        let i = match c.index.axis_index(k) {
            Some(i) => i,
            None => continue,
        };
        if c.is_open(i) {
            let r = lab.find(i);
            if k >= 2 && !seen.contains(&r) {
                not_connected += 1;
            }
            seen.insert(r);
        } else {
            closed += 1;
            if k >= 2 {
                not_connected += 1;
            }
        }
    }
    1 + not_connected - closed
}

/// `sum_{k=2}^{n} 1{k not<-> (-inf, k-1]}` with the truncated ray.
pub fn count_not_connected_left(c: &Configuration, lab: &mut ClusterLabeling) -> i64 {
    let n = c.index.domain.segment_n;
    let mut seen = ray_connected_roots(c, lab);
    // fold in site 1 before the k = 2 term
    let mut count = 0i64;
    for k in 1..=n {
        let i = match c.index.axis_index(k) {
            Some(i) => i,
            None => continue,
        };
        if c.is_open(i) {
            let r = lab.find(i);
            if k >= 2 && !seen.contains(&r) {
                count += 1;
            }
            seen.insert(r);
        } else if k >= 2 {
            count += 1;
        }
    }
    count
}

fn check_partition(c: &Configuration, p: &ScalePartition) -> Result<()> {
    if matches!(c.index.domain.kind, DomainKind::CutPlane { .. }) {
        return Err(Error::Argument("window_T is defined on half/full planes".into()));
    }
    if p.n != c.index.domain.segment_n {
        return Err(Error::Argument(format!(
            "partition n = {} does not match domain segment_n = {}",
            p.n, c.index.domain.segment_n
        )));
    }
    Ok(())
}

/// Per-site evaluation of T(i): the number of `k in (a(i), a(i+1)]` that are
/// open, not connected to `[1, k-1]`, and connected to the truncated ray
/// `(-inf, 0]`.
pub fn window_t(c: &Configuration, lab: &mut ClusterLabeling, p: &ScalePartition) -> Result<WindowCounts> {
    check_partition(c, p)?;
    let ray = ray_connected_roots(c, lab);
    let mut seen = HashSet::new();
    let mut t = vec![0u32; p.window_count()];
    let mut t0 = 0u32;
    for k in 1..=p.n {
        let i = match c.index.axis_index(k) {
            Some(i) => i,
            None => continue,
        };
        if !c.is_open(i) {
            continue;
        }
        let r = lab.find(i);
        if k >= 2 && !seen.contains(&r) && ray.contains(&r) {
            match p.window_of(k) {
                Some(w) => t[w - 1] += 1,
                None => t0 += 1,
            }
        }
        seen.insert(r);
    }
    Ok(WindowCounts { t0, t })
}

/// Cluster-set evaluation of T(i): the number of open clusters meeting
/// `(a(i), a(i+1)]`, avoiding `[1, a(i)]` and meeting `(-inf, 0]`.
/// Independent route cross-checked against [`window_t`].
pub fn window_t_clusterwise(
    c: &Configuration,
    lab: &mut ClusterLabeling,
    p: &ScalePartition,
) -> Result<WindowCounts> {
    check_partition(c, p)?;
    assert!(p.window_count() <= 128, "clusterwise route limited to 128 windows");
    let ray = ray_connected_roots(c, lab);
    // per open cluster: windows met and smallest open axis position >= 1
    let mut met: HashMap<u32, (i32, u128)> = HashMap::new();
    for k in 1..=p.n {
        let i = match c.index.axis_index(k) {
            Some(i) => i,
            None => continue,
        };
        if !c.is_open(i) {
            continue;
        }
        let r = lab.find(i);
        let e = met.entry(r).or_insert((k, 0));
        if let Some(w) = p.window_of(k) {
            e.1 |= 1u128 << (w - 1);
        }
    }
    let mut t = vec![0u32; p.window_count()];
    let mut t0 = 0u32;
    for (r, (minpos, windows)) in met {
        if !ray.contains(&r) || minpos < 2 {
            continue;
        }
        let mut placed = false;
        for w in 1..=p.window_count() {
            let (lo, _) = p.window_bounds(w);
            if windows & (1u128 << (w - 1)) != 0 && minpos > lo {
                t[w - 1] += 1;
                placed = true;
                break; // the cluster avoids [1, a(w)] only up to its minimum
            }
        }
        if !placed && minpos <= p.a(1) {
            t0 += 1;
        }
    }
    Ok(WindowCounts { t0, t })
}

fn roots_in_sites(
    c: &Configuration,
    lab: &mut ClusterLabeling,
    sites: impl IntoIterator<Item = SiteCoord>,
    open: bool,
) -> HashSet<u32> {
    let mut out = HashSet::new();
    for s in sites {
        if let Some(i) = c.index.index_of(s) {
            if c.is_open(i) == open {
                out.insert(lab.find(i));
            }
        }
    }
    out
}

/// S(i) and T~(i) on the cut plane `C \ L(i)`, `L(i) = (-inf, a(i+1)]`.
///
/// S(i) counts closed clusters joining `bd[a(i)+1, a(i+1)]` with `bd(-inf, 0]`;
/// T~(i) counts open clusters joining the same two boundary sets while not
/// connected to `bd[1, a(i)]`. The labeling must be phase `Both`.
pub fn window_s(
    c: &Configuration,
    lab: &mut ClusterLabeling,
    p: &ScalePartition,
    i: usize,
) -> Result<CutCounts> {
    let dom = &c.index.domain;
    let cut_end = match dom.kind {
        DomainKind::CutPlane { cut_end } => cut_end,
        _ => return Err(Error::Argument("window_s requires a cut-plane domain".into())),
    };
    let (lo, hi) = p.window_bounds(i);
    if lo >= hi {
        return Ok(CutCounts { s: 0, t_tilde: 0 });
    }
    if cut_end != hi {
        return Err(Error::Argument(format!(
            "cut_end {cut_end} does not match window upper endpoint a(i+1) = {hi}"
        )));
    }
    let b_win = dom.boundary_of_interval(lo + 1, hi)?.sites;
    let b_ray = dom.boundary_of_interval(dom.m_min, 0)?.sites;
    let b_mid = if lo >= 1 { dom.boundary_of_interval(1, lo)?.sites } else { Default::default() };

    let closed_win = roots_in_sites(c, lab, b_win.iter().copied(), false);
    let closed_ray = roots_in_sites(c, lab, b_ray.iter().copied(), false);
    let s = closed_win.intersection(&closed_ray).count() as u32;

    let open_win = roots_in_sites(c, lab, b_win.iter().copied(), true);
    let open_ray = roots_in_sites(c, lab, b_ray.iter().copied(), true);
    let open_mid = roots_in_sites(c, lab, b_mid.iter().copied(), true);
    let t_tilde = open_win
        .intersection(&open_ray)
        .filter(|r| !open_mid.contains(r))
        .count() as u32;

    Ok(CutCounts { s, t_tilde })
}

/// Outcome of the half-plane two-color crossing events at one window `[k, k(1+eps)]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WEvents {
    /// Open and closed path both exist from `(-inf, 1]` to `[k, k(1+eps)]`.
    pub w_prime: bool,
    /// Some closed crossing lies below some open crossing.
    pub w: bool,
    /// Color swap of `w`.
    pub w_tilde: bool,
    /// The lowest crossing of either color is closed (given `w_prime`).
    pub lowest_closed: bool,
}

fn axis_interval_roots(
    c: &Configuration,
    lab: &mut ClusterLabeling,
    m_lo: i32,
    m_hi: i32,
) -> (HashSet<u32>, HashSet<u32>) {
    let mut open = HashSet::new();
    let mut closed = HashSet::new();
    for m in m_lo..=m_hi {
        if let Some(i) = c.index.axis_index(m) {
            let r = lab.find(i);
            if c.is_open(i) {
                open.insert(r);
            } else {
                closed.insert(r);
            }
        }
    }
    (open, closed)
}

/// Crossing clusters from `(-inf, 1]` to `[k, m_hi]`, ordered lowest first.
/// Returns `true` per entry when the cluster is closed.
///
/// The order is recovered by growing a region from the axis gap `(1, k)`:
/// each crossing cluster together with the axis separates the box, so exactly
/// one not-yet-ordered crossing is adjacent to the grown region at a time.
fn order_crossings(
    c: &Configuration,
    lab: &mut ClusterLabeling,
    k: i32,
    open_cross: &HashSet<u32>,
    closed_cross: &HashSet<u32>,
) -> Vec<bool> {
    let idx = &c.index;
    let mut remaining: HashMap<u32, bool> = HashMap::new();
    for &r in open_cross {
        remaining.insert(r, false);
    }
    for &r in closed_cross {
        remaining.insert(r, true);
    }
    let total = remaining.len();
    let mut blocked: HashMap<u32, Vec<usize>> = HashMap::new();
    let mut visited = vec![false; idx.len()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    let mut order = Vec::with_capacity(total);

    let push = |i: usize,
                    lab: &mut ClusterLabeling,
                    remaining: &HashMap<u32, bool>,
                    blocked: &mut HashMap<u32, Vec<usize>>,
                    visited: &mut Vec<bool>,
                    queue: &mut VecDeque<usize>| {
        if visited[i] {
            return;
        }
        let r = lab.find(i);
        if remaining.contains_key(&r) {
            blocked.entry(r).or_default().push(i);
        } else {
            visited[i] = true;
            queue.push_back(i);
        }
    };

    for m in 2..k {
        if let Some(i) = idx.axis_index(m) {
            push(i, lab, &remaining, &mut blocked, &mut visited, &mut queue);
        }
    }

    while order.len() < total {
        while let Some(i) = queue.pop_front() {
            let s = idx.site_at(i);
            for &(dm, dh) in &NEIGHBOR_OFFSETS {
                if let Some(j) = idx.index_of(SiteCoord::new(s.m + dm, s.h + dh)) {
                    push(j, lab, &remaining, &mut blocked, &mut visited, &mut queue);
                }
            }
        }
        // exactly one remaining crossing should be adjacent to the region
        let mut hits: Vec<u32> = blocked
            .iter()
            .filter(|(r, v)| remaining.contains_key(r) && !v.is_empty())
            .map(|(r, _)| *r)
            .collect();
        hits.sort_unstable();
        assert!(
            hits.len() == 1,
            "crossing order ambiguity: {} candidates adjacent at once",
            hits.len()
        );
        let chosen = hits[0];
        order.push(remaining.remove(&chosen).unwrap());
        for i in blocked.remove(&chosen).unwrap_or_default() {
            if !visited[i] {
                visited[i] = true;
                queue.push_back(i);
            }
        }
    }
    order
}

/// Evaluate W'_k, W_k and the color swap on a half-plane configuration.
pub fn event_w(c: &Configuration, lab: &mut ClusterLabeling, k: i32, eps: f64) -> Result<WEvents> {
    let dom = &c.index.domain;
    if !matches!(dom.kind, DomainKind::HalfPlane) {
        return Err(Error::Argument("event_w requires a half-plane domain".into()));
    }
    if k < 3 || eps <= 0.0 {
        return Err(Error::Argument(format!("need k >= 3 and eps > 0, got k = {k}, eps = {eps}")));
    }
    let m_hi = (k as f64 * (1.0 + eps)).floor() as i32;
    if m_hi > dom.segment_n {
        return Err(Error::Argument(format!(
            "k(1+eps) = {m_hi} exceeds segment_n = {}",
            dom.segment_n
        )));
    }
    let (a_open, a_closed) = axis_interval_roots(c, lab, dom.m_min, 1);
    let (c_open, c_closed) = axis_interval_roots(c, lab, k, m_hi);
    let open_cross: HashSet<u32> = a_open.intersection(&c_open).copied().collect();
    let closed_cross: HashSet<u32> = a_closed.intersection(&c_closed).copied().collect();
    let w_prime = !open_cross.is_empty() && !closed_cross.is_empty();
    if !w_prime {
        return Ok(WEvents { w_prime, w: false, w_tilde: false, lowest_closed: false });
    }
    let order = order_crossings(c, lab, k, &open_cross, &closed_cross);
    let mut seen_closed = false;
    let mut seen_open = false;
    let mut w = false;
    let mut w_tilde = false;
    for &is_closed in &order {
        if is_closed {
            if seen_open {
                w_tilde = true;
            }
            seen_closed = true;
        } else {
            if seen_closed {
                w = true;
            }
            seen_open = true;
        }
    }
    Ok(WEvents { w_prime, w, w_tilde, lowest_closed: order[0] })
}

/// The two sides of the exact crossing dichotomy on the truncated box:
/// an open path `[1, k] <-> [k(1+eps), inf)` (the far arc absorbs the right and
/// top box edges) versus a closed path `(-inf, 1] <-> [k, k(1+eps)]` (the ray
/// arc absorbs the left box edge). Exactly one of the two holds in every
/// configuration.
pub fn duality_dichotomy(
    c: &Configuration,
    lab: &mut ClusterLabeling,
    k: i32,
    eps: f64,
) -> Result<(bool, bool)> {
    let dom = &c.index.domain;
    if !matches!(dom.kind, DomainKind::HalfPlane) {
        return Err(Error::Argument("duality_dichotomy requires a half-plane domain".into()));
    }
    if k < 2 || eps <= 0.0 {
        return Err(Error::Argument("need k >= 2 and eps > 0".into()));
    }
    let m_hi = (k as f64 * (1.0 + eps)).floor() as i32;
    if m_hi > dom.segment_n || m_hi <= k {
        return Err(Error::Argument("window [k, k(1+eps)] out of range".into()));
    }
    let idx = &c.index;
    let site = |m: i32, h: i32| idx.index_of(SiteCoord::new(m, h));

    // arc B = [1, k] x {0}
    let mut b_open = HashSet::new();
    for m in 1..=k {
        if let Some(i) = site(m, 0) {
            if c.is_open(i) {
                b_open.insert(lab.find(i));
            }
        }
    }
    // arc D = [m_hi, m_max] x {0} + right edge + top edge (incl. top-left corner)
    let mut d_open = HashSet::new();
    let d_push = |i: usize, lab: &mut ClusterLabeling, set: &mut HashSet<u32>| {
        if c.is_open(i) {
            set.insert(lab.find(i));
        }
    };
    for m in m_hi..=dom.m_max {
        if let Some(i) = site(m, 0) {
            d_push(i, lab, &mut d_open);
        }
    }
    for h in 1..=dom.h_max {
        if let Some(i) = site(dom.m_max, h) {
            d_push(i, lab, &mut d_open);
        }
    }
    for m in dom.m_min..dom.m_max {
        if let Some(i) = site(m, dom.h_max) {
            d_push(i, lab, &mut d_open);
        }
    }
    let open_crossing = b_open.intersection(&d_open).next().is_some();

    // arc C = [k, m_hi] x {0}; arc A = left edge + [m_min, 1] x {0}
    let mut c_closed = HashSet::new();
    for m in k..=m_hi {
        if let Some(i) = site(m, 0) {
            if !c.is_open(i) {
                c_closed.insert(lab.find(i));
            }
        }
    }
    let mut a_closed = HashSet::new();
    for m in dom.m_min..=1 {
        if let Some(i) = site(m, 0) {
            if !c.is_open(i) {
                a_closed.insert(lab.find(i));
            }
        }
    }
    for h in 1..=dom.h_max {
        if let Some(i) = site(dom.m_min, h) {
            if !c.is_open(i) {
                a_closed.insert(lab.find(i));
            }
        }
    }
    let closed_crossing = a_closed.intersection(&c_closed).next().is_some();
    Ok((open_crossing, closed_crossing))
}

/// Arm-event flavor.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArmKind {
    OneArm,
    ThreeArm,
}

#[inline]
fn in_euclid_box(s: SiteCoord, r: f64) -> bool {
    let (x, y) = s.position();
    x.abs() <= r && y.abs() <= r
}

/// Arm indicator on a half-plane box centered at the origin.
///
/// `one_arm`: an open path from `[-m, m]^2` to `H \ [-n, n]^2`.
/// `three_arm`: additionally two disjoint closed such paths; disjointness is
/// certified by locating closed crossings in two different components of the
/// domain minus the open crossing's cluster.
pub fn arm_indicator(
    c: &Configuration,
    lab: &mut ClusterLabeling,
    m_in: i32,
    n_out: i32,
    kind: ArmKind,
) -> Result<bool> {
    let dom = &c.index.domain;
    if !matches!(dom.kind, DomainKind::HalfPlane) {
        return Err(Error::Argument("arm_indicator requires a half-plane domain".into()));
    }
    if m_in < 1 || m_in >= n_out {
        return Err(Error::Argument(format!("need 1 <= m < n, got m = {m_in}, n = {n_out}")));
    }
    if dom.m_max <= n_out || -dom.m_min <= n_out {
        return Err(Error::Argument("outer box not strictly inside the truncation".into()));
    }
    let idx = &c.index;
    let r_in = m_in as f64;
    let r_out = n_out as f64;

    let mut inner_open = HashSet::new();
    let mut inner_closed = HashSet::new();
    let mut ext_open = HashSet::new();
    let mut ext_closed: HashMap<u32, usize> = HashMap::new(); // root -> witness site
    for i in 0..idx.len() {
        let s = idx.site_at(i);
        if in_euclid_box(s, r_in) {
            let r = lab.find(i);
            if c.is_open(i) {
                inner_open.insert(r);
            } else {
                inner_closed.insert(r);
            }
        } else if !in_euclid_box(s, r_out) {
            let r = lab.find(i);
            if c.is_open(i) {
                ext_open.insert(r);
            } else {
                ext_closed.entry(r).or_insert(i);
            }
        }
    }
    let open_cross: Vec<u32> = inner_open.intersection(&ext_open).copied().collect();
    if matches!(kind, ArmKind::OneArm) {
        return Ok(!open_cross.is_empty());
    }
    if open_cross.is_empty() {
        return Ok(false);
    }
    let closed_cross: Vec<(u32, usize)> = inner_closed
        .iter()
        .filter_map(|r| ext_closed.get(r).map(|&i| (*r, i)))
        .collect();
    if closed_cross.len() < 2 {
        return Ok(false);
    }
    for &o in &open_cross {
        let mut comp = components_excluding(c, lab, o);
        let mut ids = HashSet::new();
        for &(_, witness) in &closed_cross {
            ids.insert(comp.find(witness));
            if ids.len() >= 2 {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Connected components of the domain graph with one cluster's sites removed.
fn components_excluding(c: &Configuration, lab: &mut ClusterLabeling, root: u32) -> ClusterLabeling {
    let idx = &c.index;
    let dom = &idx.domain;
    let excluded: Vec<bool> = (0..idx.len()).map(|i| lab.find(i) == root).collect();
    let mut comp = ClusterLabeling { parent: vec![-1; idx.len()], phase: Phase::Both };
    for h in dom.h_min..=dom.h_max {
        let (m_lo, start, end) = idx.row(h).unwrap();
        if start == end {
            continue;
        }
        for i in start..end - 1 {
            if !excluded[i] && !excluded[i + 1] {
                comp.union(i, i + 1);
            }
        }
        if let Some((m_lo_u, start_u, end_u)) = idx.row(h + 1) {
            if start_u == end_u {
                continue;
            }
            let width_u = end_u - start_u;
            for i in start..end {
                if excluded[i] {
                    continue;
                }
                let m = m_lo + (i - start) as i32;
                let off = m - m_lo_u;
                if off >= 0 && (off as usize) < width_u {
                    let j = start_u + off as usize;
                    if !excluded[j] {
                        comp.union(i, j);
                    }
                }
                if off >= 1 && (off as usize) <= width_u {
                    let j = start_u + off as usize - 1;
                    if !excluded[j] {
                        comp.union(i, j);
                    }
                }
            }
        }
    }
    comp
}

/// Axis spans (min and max axis position) per cluster in one half-space
/// labeling, split by color.
struct AxisSpans {
    open: HashMap<u32, (i32, i32)>,
    closed: HashMap<u32, (i32, i32)>,
}

fn axis_spans(c: &Configuration, lab: &mut ClusterLabeling) -> AxisSpans {
    let dom = &c.index.domain;
    let mut open = HashMap::new();
    let mut closed = HashMap::new();
    for m in dom.m_min..=dom.m_max {
        if let Some(i) = c.index.axis_index(m) {
            let r = lab.find(i);
            let map = if c.is_open(i) { &mut open } else { &mut closed };
            let e = map.entry(r).or_insert((m, m));
            e.0 = e.0.min(m);
            e.1 = e.1.max(m);
        }
    }
    AxisSpans { open, closed }
}

/// Reading of the "open paths from one of the vertices k+j, k-1+j" clause of
/// B_u(i, k).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BVertexRule {
    /// Each of the two open connections may start from either vertex.
    #[default]
    EitherVertex,
    /// A single vertex must carry both open connections.
    SingleVertex,
}

/// B(i) for every window of the partition, from one full-plane sample.
pub fn event_b_all(c: &Configuration, p: &ScalePartition, rule: BVertexRule) -> Result<Vec<bool>> {
    if !matches!(c.index.domain.kind, DomainKind::FullPlane) {
        return Err(Error::Argument("event_b requires a full-plane domain".into()));
    }
    let mut upper = ClusterLabeling::build_halfspace(c, Phase::Both, true);
    let mut lower = ClusterLabeling::build_halfspace(c, Phase::Both, false);
    let spans_u = axis_spans(c, &mut upper);
    let spans_l = axis_spans(c, &mut lower);
    let idx = &c.index;

    let check_half = |k: i32,
                          a_i: i32,
                          lab: &mut ClusterLabeling,
                          spans: &AxisSpans,
                          verts: [(i32, i32); 2]|
     -> bool {
        let ki = match idx.axis_index(k) {
            Some(i) => i,
            None => return false,
        };
        if c.is_open(ki) {
            return false;
        }
        let span = spans.closed.get(&lab.find(ki));
        if !matches!(span, Some(&(lo, hi)) if lo <= 1 && hi >= a_i) {
            return false;
        }
        let mut left = false;
        let mut right = false;
        for (m, h) in verts {
            if let Some(vi) = idx.index_of(SiteCoord::new(m, h)) {
                if c.is_open(vi) {
                    if let Some(&(lo, hi)) = spans.open.get(&lab.find(vi)) {
                        let l = lo <= 0;
                        let r = hi >= a_i + 1;
                        match rule {
                            BVertexRule::SingleVertex => {
                                if l && r {
                                    return true;
                                }
                            }
                            BVertexRule::EitherVertex => {
                                left |= l;
                                right |= r;
                            }
                        }
                    }
                }
            }
        }
        matches!(rule, BVertexRule::EitherVertex) && left && right
    };

    let mut out = Vec::with_capacity(p.window_count());
    for i in 1..=p.window_count() {
        let a_i = p.a(i);
        let mut hit = false;
        for k in 1..=a_i {
            if check_half(k, a_i, &mut upper, &spans_u, [(k, 1), (k - 1, 1)])
                || check_half(k, a_i, &mut lower, &spans_l, [(k, -1), (k + 1, -1)])
            {
                hit = true;
                break;
            }
        }
        out.push(hit);
    }
    Ok(out)
}

/// B(i) for a single window.
pub fn event_b(c: &Configuration, p: &ScalePartition, i: usize, rule: BVertexRule) -> Result<bool> {
    if i < 1 || i > p.window_count() {
        return Err(Error::Argument(format!("window index {i} out of range")));
    }
    Ok(event_b_all(c, p, rule)?[i - 1])
}
