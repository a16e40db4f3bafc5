//! Monte Carlo campaigns: segment-cluster expectations, window grids T(i)/eps,
//! cut-plane S/T~ statistics, crossing events, arm probabilities and B(i).
//!
//! Every campaign is sharded into fixed-size blocks of trials; shards run on
//! the current rayon pool and merge in shard order, so results are bit-exact
//! for any worker count given the master seed.

use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{default_truncation, DomainKind, DomainSpec, SiteIndex};
use crate::percolation::{
    arm_indicator, count_segment_clusters_prefixes, event_b_all, event_w, ray_connected_roots,
    window_s, window_t, ArmKind, BVertexRule, ClusterLabeling, Configuration, Phase,
};
use crate::rng::SeedRecord;

/// Stream ids keep independent campaigns on disjoint RNG streams.
pub mod streams {
    pub const SEGMENT: u64 = 1;
    pub const LEADING: u64 = 2;
    pub const WINDOWS: u64 = 3;
    pub const CUT: u64 = 4;
    pub const CROSSING: u64 = 5;
    pub const ARM: u64 = 6;
    pub const B_EVENT: u64 = 7;
}

/// Geometric scale partition `a(1) < ... < a(M+1) = n` of `[1, n]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalePartition {
    pub n: i32,
    pub eps: f64,
    /// Number of windows M.
    pub m: usize,
    a: Vec<i32>,
}

impl ScalePartition {
    /// `M = floor((ln n - ln ln n / 2) / ln(1+eps))`,
    /// `a(j) = floor(n / (1+eps)^(M-j+1))` with `a(M+1) = n`.
    pub fn new(n: i32, eps: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::Argument(format!("partition needs n >= 3, got {n}")));
        }
        if !(eps > 0.0) || !eps.is_finite() {
            return Err(Error::Argument(format!("partition needs eps > 0, got {eps}")));
        }
        let ln_n = (n as f64).ln();
        let m_f = ((ln_n - 0.5 * ln_n.ln()) / (1.0 + eps).ln()).floor();
        let m = if m_f > 0.0 { m_f as usize } else { 0 };
        let mut a = Vec::with_capacity(m + 1);
        for j in 1..=m {
            a.push((n as f64 / (1.0 + eps).powi((m - j + 1) as i32)).floor() as i32);
        }
        a.push(n);
        Ok(ScalePartition { n, eps, m, a })
    }

    pub fn window_count(&self) -> usize {
        self.m
    }

    /// `a(j)` for `1 <= j <= M+1`.
    pub fn a(&self, j: usize) -> i32 {
        self.a[j - 1]
    }

    /// Bounds `(a(i), a(i+1)]` of window `1 <= i <= M`.
    pub fn window_bounds(&self, i: usize) -> (i32, i32) {
        (self.a[i - 1], self.a[i])
    }

    /// Window containing `k in [1, n]`, or `None` when `k <= a(1)`.
    pub fn window_of(&self, k: i32) -> Option<usize> {
        if self.m == 0 || k <= self.a[0] {
            return None;
        }
        Some(self.a.partition_point(|&x| x < k))
    }
}

/// Streaming first/second-moment accumulator, mergeable across shards.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Accumulator {
    pub observable: String,
    /// Hash of the campaign parameters; merges require equal fingerprints.
    pub fingerprint: u64,
    pub trials: u64,
    pub sum: f64,
    pub sum_sq: f64,
}

impl Accumulator {
    pub fn new(observable: impl Into<String>, fingerprint: u64) -> Self {
        Accumulator { observable: observable.into(), fingerprint, trials: 0, sum: 0.0, sum_sq: 0.0 }
    }

    #[inline]
    pub fn push(&mut self, x: f64) {
        self.trials += 1;
        self.sum += x;
        self.sum_sq += x * x;
    }

    pub fn merge(&mut self, other: &Accumulator) -> Result<()> {
        if self.fingerprint != other.fingerprint || self.observable != other.observable {
            return Err(Error::Argument(format!(
                "accumulator mismatch: {}#{:x} vs {}#{:x}",
                self.observable, self.fingerprint, other.observable, other.fingerprint
            )));
        }
        self.trials += other.trials;
        self.sum += other.sum;
        self.sum_sq += other.sum_sq;
        Ok(())
    }

    pub fn mean(&self) -> f64 {
        self.sum / self.trials as f64
    }

    /// Unbiased sample variance (trials - 1 in the denominator).
    pub fn variance(&self) -> f64 {
        if self.trials < 2 {
            return f64::NAN;
        }
        let n = self.trials as f64;
        ((self.sum_sq - self.sum * self.sum / n) / (n - 1.0)).max(0.0)
    }

    pub fn stderr(&self) -> f64 {
        (self.variance() / self.trials as f64).sqrt()
    }
}

/// Parameter hash for accumulator fingerprints (FNV-1a over raw bytes).
pub fn fingerprint(parts: &[u64]) -> u64 {
    let mut h = 0xcbf29ce484222325u64;
    for p in parts {
        for b in p.to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
    }
    h
}

/// Summary of one estimated observable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub observable: String,
    pub mean: f64,
    pub stderr: f64,
    pub trials: u64,
    pub truncation: i32,
    /// Mean shift when the truncation is doubled, when computed.
    pub doubling_delta: Option<f64>,
}

impl EstimateReport {
    pub fn from_acc(acc: &Accumulator, truncation: i32) -> Self {
        EstimateReport {
            observable: acc.observable.clone(),
            mean: acc.mean(),
            stderr: acc.stderr(),
            trials: acc.trials,
            truncation,
            doubling_delta: None,
        }
    }
}

/// Common campaign knobs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunOpts {
    pub trials: u64,
    pub master_seed: u64,
    /// Override of the default truncation `max(4n, 256)`.
    pub truncation: Option<i32>,
    /// Trials per shard; shards merge in order, so this does not change results.
    pub shard_size: u64,
}

impl RunOpts {
    pub fn new(trials: u64, master_seed: u64) -> Self {
        RunOpts { trials, master_seed, truncation: None, shard_size: 256 }
    }

    pub fn with_truncation(mut self, t: i32) -> Self {
        self.truncation = Some(t);
        self
    }
}

/// Run `trials` independent trials in fixed-size shards, merging shard states
/// in shard order. `step` must not depend on anything but the trial index.
fn sharded<S: Send>(
    trials: u64,
    shard_size: u64,
    make: impl Fn() -> S + Sync,
    step: impl Fn(&mut S, u64) + Sync,
    mut merge: impl FnMut(&mut S, S),
) -> Option<S> {
    let shard_size = shard_size.max(1);
    let n_shards = trials.div_ceil(shard_size);
    let mut shards: Vec<S> = (0..n_shards)
        .into_par_iter()
        .map(|s| {
            let mut state = make();
            let lo = s * shard_size;
            let hi = (lo + shard_size).min(trials);
            for t in lo..hi {
                step(&mut state, t);
            }
            state
        })
        .collect();
    let mut out = if shards.is_empty() { None } else { Some(shards.remove(0)) };
    if let Some(acc) = out.as_mut() {
        for s in shards {
            merge(acc, s);
        }
    }
    out
}

fn build_index(kind: DomainKind, n: i32, opts: &RunOpts) -> Result<(Arc<SiteIndex>, i32)> {
    let lambda = opts.truncation.unwrap_or_else(|| default_truncation(n));
    let spec = DomainSpec::new(kind, n, lambda)?;
    Ok((Arc::new(SiteIndex::new(spec)), lambda))
}

/// E_G(n) for each requested segment length, all lengths evaluated on the same
/// samples (common random numbers). `ns` must be strictly ascending.
pub fn estimate_segment_expectation_multi(
    ns: &[i32],
    kind: DomainKind,
    opts: &RunOpts,
) -> Result<Vec<EstimateReport>> {
    if opts.trials < 2 {
        return Err(Error::Argument("need at least 2 trials".into()));
    }
    if ns.is_empty() || ns.windows(2).any(|w| w[0] >= w[1]) || ns[0] < 1 {
        return Err(Error::Argument("segment lengths must be ascending and >= 1".into()));
    }
    let n_max = *ns.last().unwrap();
    let (index, lambda) = build_index(kind, n_max, opts)?;
    let fp = fingerprint(&[streams::SEGMENT, n_max as u64, lambda as u64, opts.master_seed]);
    let make = || {
        let accs: Vec<Accumulator> = ns
            .iter()
            .map(|n| Accumulator::new(format!("segment_clusters(n={n})"), fp))
            .collect();
        (accs, None::<ClusterLabeling>)
    };
    let ns_owned = ns.to_vec();
    let state = sharded(
        opts.trials,
        opts.shard_size,
        make,
        |(accs, lab), t| {
            let c = Configuration::sample(index.clone(), SeedRecord::new(opts.master_seed, streams::SEGMENT, t));
            let lab = lab.get_or_insert_with(|| ClusterLabeling::build(&c, Phase::Open));
            lab.rebuild(&c, Phase::Open);
            let counts = count_segment_clusters_prefixes(&c, lab, &ns_owned);
            for (a, k) in accs.iter_mut().zip(counts) {
                a.push(k as f64);
            }
        },
        |(a, _), (b, _)| {
            for (x, y) in a.iter_mut().zip(&b) {
                x.merge(y).expect("shard fingerprints agree");
            }
        },
    )
    .expect("trials >= 2");
    Ok(state.0.iter().map(|a| EstimateReport::from_acc(a, lambda)).collect())
}

pub fn estimate_segment_expectation(n: i32, kind: DomainKind, opts: &RunOpts) -> Result<EstimateReport> {
    Ok(estimate_segment_expectation_multi(&[n], kind, opts)?.remove(0))
}

/// `P(1 not<-> (-inf, 0]) - 1/2`, the slope of the linear term of E_G(n).
pub fn estimate_leading_constant(kind: DomainKind, opts: &RunOpts) -> Result<EstimateReport> {
    if opts.trials < 2 {
        return Err(Error::Argument("need at least 2 trials".into()));
    }
    let (index, lambda) = build_index(kind, 1, opts)?;
    let fp = fingerprint(&[streams::LEADING, lambda as u64, opts.master_seed]);
    let acc = sharded(
        opts.trials,
        opts.shard_size,
        || (Accumulator::new("leading_constant", fp), None::<ClusterLabeling>),
        |(acc, lab), t| {
            let c = Configuration::sample(index.clone(), SeedRecord::new(opts.master_seed, streams::LEADING, t));
            let lab = lab.get_or_insert_with(|| ClusterLabeling::build(&c, Phase::Open));
            lab.rebuild(&c, Phase::Open);
            let not_connected = match index.axis_index(1) {
                Some(i) if c.is_open(i) => {
                    let ray = ray_connected_roots(&c, lab);
                    !ray.contains(&lab.find(i))
                }
                _ => true, // a closed site connects to nothing
            };
            acc.push(if not_connected { 1.0 } else { 0.0 });
        },
        |(a, _), (b, _)| a.merge(&b).expect("shard fingerprints agree"),
    )
    .expect("trials >= 2")
    .0;
    let mut rep = EstimateReport::from_acc(&acc, lambda);
    rep.mean -= 0.5;
    Ok(rep)
}

/// One n at one eps: raw per-window accumulators of T(i) plus the pre-window
/// count and the total, from which L-hat follows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowGridResult {
    pub n: i32,
    pub eps: f64,
    pub partition: ScalePartition,
    pub truncation: i32,
    /// Count over `k in [2, a(1)]` (the f0 region).
    pub f0: Accumulator,
    /// T(i) per window, i = 1..M.
    pub windows: Vec<Accumulator>,
    /// `t0 + sum_i T(i)` per sample.
    pub total: Accumulator,
}

impl WindowGridResult {
    /// `L-hat = E[t0 + sum T(i)] / ln n` with its standard error.
    pub fn l_hat(&self) -> (f64, f64) {
        let ln_n = (self.n as f64).ln();
        (self.total.mean() / ln_n, self.total.stderr() / ln_n)
    }

    /// `E[T(i)] / eps` report for window i.
    pub fn window_over_eps(&self, i: usize) -> EstimateReport {
        let a = &self.windows[i - 1];
        EstimateReport {
            observable: format!("T({i})/eps(n={},eps={})", self.n, self.eps),
            mean: a.mean() / self.eps,
            stderr: a.stderr() / self.eps,
            trials: a.trials,
            truncation: self.truncation,
            doubling_delta: None,
        }
    }
}

/// Window grid at one n across an eps grid, every eps evaluated on the same
/// samples and the same open-cluster labeling (common random numbers).
pub fn estimate_window_grid(
    n: i32,
    eps_grid: &[f64],
    kind: DomainKind,
    opts: &RunOpts,
) -> Result<Vec<WindowGridResult>> {
    if opts.trials < 2 {
        return Err(Error::Argument("need at least 2 trials".into()));
    }
    if matches!(kind, DomainKind::CutPlane { .. }) {
        return Err(Error::Argument("window grid runs on half/full planes".into()));
    }
    let partitions: Vec<ScalePartition> =
        eps_grid.iter().map(|&e| ScalePartition::new(n, e)).collect::<Result<_>>()?;
    let (index, lambda) = build_index(kind, n, opts)?;
    let fp = fingerprint(&[streams::WINDOWS, n as u64, lambda as u64, opts.master_seed]);
    let make = || {
        let grids: Vec<WindowGridResult> = partitions
            .iter()
            .map(|p| WindowGridResult {
                n,
                eps: p.eps,
                partition: p.clone(),
                truncation: lambda,
                f0: Accumulator::new(format!("f0(n={n},eps={})", p.eps), fp),
                windows: (1..=p.window_count())
                    .map(|i| Accumulator::new(format!("T({i})(n={n},eps={})", p.eps), fp))
                    .collect(),
                total: Accumulator::new(format!("window_total(n={n},eps={})", p.eps), fp),
            })
            .collect();
        (grids, None::<ClusterLabeling>)
    };
    let state = sharded(
        opts.trials,
        opts.shard_size,
        make,
        |(grids, lab), t| {
            let c = Configuration::sample(index.clone(), SeedRecord::new(opts.master_seed, streams::WINDOWS, t));
            let lab = lab.get_or_insert_with(|| ClusterLabeling::build(&c, Phase::Open));
            lab.rebuild(&c, Phase::Open);
            for g in grids.iter_mut() {
                let w = window_t(&c, lab, &g.partition).expect("partition matches domain");
                g.f0.push(w.t0 as f64);
                for (a, &x) in g.windows.iter_mut().zip(&w.t) {
                    a.push(x as f64);
                }
                g.total.push(w.total() as f64);
            }
        },
        |(a, _), (b, _)| {
            for (x, y) in a.iter_mut().zip(&b) {
                x.f0.merge(&y.f0).expect("shard fingerprints agree");
                for (u, v) in x.windows.iter_mut().zip(&y.windows) {
                    u.merge(v).expect("shard fingerprints agree");
                }
                x.total.merge(&y.total).expect("shard fingerprints agree");
            }
        },
    )
    .expect("trials >= 2");
    Ok(state.0)
}

/// Cut-plane statistics for one window `(a(i), a(i+1)]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CutWindowReport {
    pub n: i32,
    pub eps: f64,
    pub window: usize,
    pub bounds: (i32, i32),
    pub truncation: i32,
    pub s: Accumulator,
    /// Indicator of `S >= 1`, so `E[S] - P(S >= 1)` is available directly.
    pub s_pos: Accumulator,
    pub t_tilde: Accumulator,
    /// Samples violating the alternation heuristic `T~ = S - 1{S >= 1}`.
    /// Not expected to be 0: a closed circuit around the cut tip can shield
    /// the open crossing from the far lip without joining the two boundary
    /// sets, so crossings of the two sets need not alternate in color.
    pub identity_violations: u64,
}

/// S(i) and T~(i) on `CutPlane(a(i+1))`.
pub fn estimate_cut_window(n: i32, eps: f64, i: usize, opts: &RunOpts) -> Result<CutWindowReport> {
    if opts.trials < 2 {
        return Err(Error::Argument("need at least 2 trials".into()));
    }
    let p = ScalePartition::new(n, eps)?;
    if i < 1 || i > p.window_count() {
        return Err(Error::Argument(format!("window index {i} out of 1..={}", p.window_count())));
    }
    let (_, hi) = p.window_bounds(i);
    let (index, lambda) = build_index(DomainKind::CutPlane { cut_end: hi }, n, opts)?;
    let fp = fingerprint(&[streams::CUT, n as u64, i as u64, lambda as u64, opts.master_seed]);
    let make = || {
        (
            Accumulator::new(format!("S({i})(n={n},eps={eps})"), fp),
            Accumulator::new(format!("S({i})>=1(n={n},eps={eps})"), fp),
            Accumulator::new(format!("T~({i})(n={n},eps={eps})"), fp),
            0u64,
            None::<ClusterLabeling>,
        )
    };
    let (s, s_pos, t_tilde, violations, _) = sharded(
        opts.trials,
        opts.shard_size,
        make,
        |(s, sp, tt, viol, lab), t| {
            let c = Configuration::sample(index.clone(), SeedRecord::new(opts.master_seed, streams::CUT, t));
            let lab = lab.get_or_insert_with(|| ClusterLabeling::build(&c, Phase::Both));
            lab.rebuild(&c, Phase::Both);
            let counts = window_s(&c, lab, &p, i).expect("window matches cut");
            s.push(counts.s as f64);
            sp.push((counts.s >= 1) as u8 as f64);
            tt.push(counts.t_tilde as f64);
            if counts.t_tilde != counts.s.saturating_sub(1) {
                *viol += 1;
            }
        },
        |a, b| {
            a.0.merge(&b.0).expect("shard fingerprints agree");
            a.1.merge(&b.1).expect("shard fingerprints agree");
            a.2.merge(&b.2).expect("shard fingerprints agree");
            a.3 += b.3;
        },
    )
    .expect("trials >= 2");
    Ok(CutWindowReport {
        n,
        eps,
        window: i,
        bounds: p.window_bounds(i),
        truncation: lambda,
        s,
        s_pos,
        t_tilde,
        identity_violations: violations,
    })
}

/// Half-plane crossing-event statistics at one window `[k, k(1+eps)]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossingReport {
    pub k: i32,
    pub eps: f64,
    pub truncation: i32,
    pub w_prime: Accumulator,
    pub w: Accumulator,
    pub w_tilde: Accumulator,
    pub lowest_closed: Accumulator,
    /// Samples violating `W' = W or W~` (expected 0).
    pub union_violations: u64,
}

/// P(W'_k), P(W_k) and the color swap on the half plane.
pub fn estimate_crossing(k: i32, eps: f64, opts: &RunOpts) -> Result<CrossingReport> {
    if opts.trials < 2 {
        return Err(Error::Argument("need at least 2 trials".into()));
    }
    let m_hi = (k as f64 * (1.0 + eps)).floor() as i32;
    let (index, lambda) = build_index(DomainKind::HalfPlane, m_hi, opts)?;
    let fp = fingerprint(&[streams::CROSSING, k as u64, lambda as u64, opts.master_seed]);
    let make = || {
        (
            Accumulator::new(format!("W'(k={k},eps={eps})"), fp),
            Accumulator::new(format!("W(k={k},eps={eps})"), fp),
            Accumulator::new(format!("W~(k={k},eps={eps})"), fp),
            Accumulator::new(format!("lowest_closed(k={k},eps={eps})"), fp),
            0u64,
            None::<ClusterLabeling>,
        )
    };
    let st = sharded(
        opts.trials,
        opts.shard_size,
        make,
        |(wp, w, wt, lc, viol, lab), t| {
            let c = Configuration::sample(index.clone(), SeedRecord::new(opts.master_seed, streams::CROSSING, t));
            let lab = lab.get_or_insert_with(|| ClusterLabeling::build(&c, Phase::Both));
            lab.rebuild(&c, Phase::Both);
            let ev = event_w(&c, lab, k, eps).expect("k(1+eps) inside domain");
            wp.push(ev.w_prime as u8 as f64);
            w.push(ev.w as u8 as f64);
            wt.push(ev.w_tilde as u8 as f64);
            lc.push(ev.lowest_closed as u8 as f64);
            if ev.w_prime != (ev.w || ev.w_tilde) {
                *viol += 1;
            }
        },
        |a, b| {
            a.0.merge(&b.0).expect("shard fingerprints agree");
            a.1.merge(&b.1).expect("shard fingerprints agree");
            a.2.merge(&b.2).expect("shard fingerprints agree");
            a.3.merge(&b.3).expect("shard fingerprints agree");
            a.4 += b.4;
        },
    )
    .expect("trials >= 2");
    Ok(CrossingReport {
        k,
        eps,
        truncation: lambda,
        w_prime: st.0,
        w: st.1,
        w_tilde: st.2,
        lowest_closed: st.3,
        union_violations: st.4,
    })
}

/// pi-hat_1(m, n) or pi-hat_3(m, n) on a centered half-plane box.
pub fn estimate_arm(m_in: i32, n_out: i32, kind: ArmKind, opts: &RunOpts) -> Result<EstimateReport> {
    if opts.trials < 2 {
        return Err(Error::Argument("need at least 2 trials".into()));
    }
    if m_in < 1 || m_in >= n_out {
        return Err(Error::Argument(format!("need 1 <= m < n, got m = {m_in}, n = {n_out}")));
    }
    let radius = opts.truncation.unwrap_or_else(|| default_truncation(n_out));
    if radius <= n_out {
        return Err(Error::Argument("truncation must exceed the outer box".into()));
    }
    let index = Arc::new(SiteIndex::new(DomainSpec::half_plane_centered(radius)?));
    let lambda = radius;
    let name = match kind {
        ArmKind::OneArm => format!("pi1({m_in},{n_out})"),
        ArmKind::ThreeArm => format!("pi3({m_in},{n_out})"),
    };
    let fp = fingerprint(&[streams::ARM, m_in as u64, n_out as u64, lambda as u64, opts.master_seed]);
    let acc = sharded(
        opts.trials,
        opts.shard_size,
        || (Accumulator::new(name.clone(), fp), None::<ClusterLabeling>),
        |(acc, lab), t| {
            let c = Configuration::sample(index.clone(), SeedRecord::new(opts.master_seed, streams::ARM, t));
            let lab = lab.get_or_insert_with(|| ClusterLabeling::build(&c, Phase::Both));
            lab.rebuild(&c, Phase::Both);
            let hit = arm_indicator(&c, lab, m_in, n_out, kind).expect("box inside truncation");
            acc.push(hit as u8 as f64);
        },
        |(a, _), (b, _)| a.merge(&b).expect("shard fingerprints agree"),
    )
    .expect("trials >= 2")
    .0;
    Ok(EstimateReport::from_acc(&acc, lambda))
}

/// P(B(i)) per window from full-plane samples (all windows share samples).
pub fn estimate_event_b(
    n: i32,
    eps: f64,
    rule: BVertexRule,
    opts: &RunOpts,
) -> Result<Vec<EstimateReport>> {
    if opts.trials < 2 {
        return Err(Error::Argument("need at least 2 trials".into()));
    }
    let p = ScalePartition::new(n, eps)?;
    let (index, lambda) = build_index(DomainKind::FullPlane, n, opts)?;
    let fp = fingerprint(&[streams::B_EVENT, n as u64, lambda as u64, opts.master_seed]);
    let make = || {
        (1..=p.window_count())
            .map(|i| Accumulator::new(format!("B({i})(n={n},eps={eps})"), fp))
            .collect::<Vec<_>>()
    };
    let accs = sharded(
        opts.trials,
        opts.shard_size,
        make,
        |accs, t| {
            let c = Configuration::sample(index.clone(), SeedRecord::new(opts.master_seed, streams::B_EVENT, t));
            let hits = event_b_all(&c, &p, rule).expect("full-plane domain");
            for (a, hit) in accs.iter_mut().zip(hits) {
                a.push(hit as u8 as f64);
            }
        },
        |a, b| {
            for (x, y) in a.iter_mut().zip(&b) {
                x.merge(y).expect("shard fingerprints agree");
            }
        },
    )
    .expect("trials >= 2");
    Ok(accs.iter().map(|a| EstimateReport::from_acc(a, lambda)).collect())
}
