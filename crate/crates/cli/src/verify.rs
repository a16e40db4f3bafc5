//! Self-check suites behind `percolog verify`.

use std::sync::Arc;

use anyhow::{bail, Result};
use clap::ValueEnum;
use percolog::lattice::{DomainKind, DomainSpec, SiteIndex};
use percolog::oracle;
use percolog::percolation::{
    arm_indicator, count_segment_clusters, duality_dichotomy, event_w, segment_decomposition_rhs,
    ArmKind, ClusterLabeling, Configuration, Phase,
};
use percolog::rng::SeedRecord;

#[derive(Clone, Copy, ValueEnum)]
pub enum Suite {
    /// Exhaustive enumeration on toy domains vs the estimators.
    Enumeration,
    /// Per-sample exact identities on random samples.
    Identities,
}

pub fn run(suite: Suite) -> Result<()> {
    match suite {
        Suite::Enumeration => enumeration(),
        Suite::Identities => identities(),
    }
}

fn boxed(kind: DomainKind, n: i32, ms: (i32, i32), hs: (i32, i32)) -> Arc<SiteIndex> {
    Arc::new(SiteIndex::new(DomainSpec::with_box(kind, n, ms, hs).unwrap()))
}

fn check(name: &str, ok: bool, detail: String) -> Result<()> {
    if ok {
        println!("ok - {name}");
        Ok(())
    } else {
        bail!("{name}: {detail}");
    }
}

/// MC mean of an indicator vs its exact value, within 5 binomial sigma.
fn mc_close(exact: f64, mean: f64, trials: u64) -> bool {
    let se = (exact * (1.0 - exact) / trials as f64).sqrt();
    (mean - exact).abs() <= 5.0 * se.max(1e-9)
}

fn enumeration() -> Result<()> {
    let trials = 100_000u64;

    // expected segment-cluster count on a 12-site strip
    let idx = boxed(DomainKind::HalfPlane, 3, (-1, 4), (0, 1));
    let exact = oracle::exhaustive_mean(&idx, |c| oracle::bfs_count_segment_clusters(c) as f64);
    let mut lab = ClusterLabeling::build(&Configuration::all(idx.clone(), true), Phase::Open);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for t in 0..trials {
        let c = Configuration::sample(idx.clone(), SeedRecord::new(201, 0, t));
        lab.rebuild(&c, Phase::Open);
        let x = count_segment_clusters(&c, &mut lab) as f64;
        sum += x;
        sum_sq += x * x;
    }
    let mean = sum / trials as f64;
    let se = ((sum_sq - sum * sum / trials as f64) / (trials - 1) as f64 / trials as f64).sqrt();
    check(
        "segment count enumeration",
        (mean - exact).abs() <= 5.0 * se,
        format!("MC {mean} vs exact {exact} (se {se})"),
    )?;

    // arm probabilities on a 14-site box around the origin
    let idx = boxed(DomainKind::HalfPlane, 2, (-3, 3), (0, 1));
    for (kind, name, seed) in
        [(ArmKind::OneArm, "pi1 enumeration", 202), (ArmKind::ThreeArm, "pi3 enumeration", 203)]
    {
        let three = matches!(kind, ArmKind::ThreeArm);
        let exact =
            oracle::exhaustive_mean(&idx, |c| oracle::bfs_arm_indicator(c, 1, 2, three) as u8 as f64);
        let via_event = oracle::exhaustive_mean(&idx, |c| {
            let mut lab = ClusterLabeling::build(c, Phase::Both);
            arm_indicator(c, &mut lab, 1, 2, kind).unwrap() as u8 as f64
        });
        check(name, exact == via_event, format!("oracle {exact} vs event {via_event}"))?;
        let mut lab = ClusterLabeling::build(&Configuration::all(idx.clone(), true), Phase::Both);
        let mut hits = 0u64;
        for t in 0..trials {
            let c = Configuration::sample(idx.clone(), SeedRecord::new(seed, 0, t));
            lab.rebuild(&c, Phase::Both);
            hits += arm_indicator(&c, &mut lab, 1, 2, kind).unwrap() as u64;
        }
        let mean = hits as f64 / trials as f64;
        check(
            &format!("{name} (monte carlo)"),
            mc_close(exact, mean, trials),
            format!("MC {mean} vs exact {exact}"),
        )?;
    }

    // P(W') on an 18-site strip
    let idx = boxed(DomainKind::HalfPlane, 6, (-1, 7), (0, 1));
    let exact = oracle::exhaustive_mean(&idx, |c| oracle::bfs_w_prime(c, 3, 1.0) as u8 as f64);
    let via_event = oracle::exhaustive_mean(&idx, |c| {
        let mut lab = ClusterLabeling::build(c, Phase::Both);
        event_w(c, &mut lab, 3, 1.0).unwrap().w_prime as u8 as f64
    });
    check("w' enumeration", exact == via_event, format!("oracle {exact} vs event {via_event}"))?;
    let mut lab = ClusterLabeling::build(&Configuration::all(idx.clone(), true), Phase::Both);
    let mut hits = 0u64;
    for t in 0..trials {
        let c = Configuration::sample(idx.clone(), SeedRecord::new(204, 0, t));
        lab.rebuild(&c, Phase::Both);
        hits += event_w(&c, &mut lab, 3, 1.0).unwrap().w_prime as u64;
    }
    check(
        "w' enumeration (monte carlo)",
        mc_close(exact, hits as f64 / trials as f64, trials),
        format!("MC {} vs exact {exact}", hits as f64 / trials as f64),
    )
}

fn identities() -> Result<()> {
    let trials = 10_000u64;

    let idx = Arc::new(SiteIndex::new(
        DomainSpec::new(DomainKind::HalfPlane, 12, 16).unwrap(),
    ));
    let mut lab = ClusterLabeling::build(&Configuration::all(idx.clone(), true), Phase::Open);
    for t in 0..trials {
        let c = Configuration::sample(idx.clone(), SeedRecord::new(205, 0, t));
        lab.rebuild(&c, Phase::Open);
        let count = count_segment_clusters(&c, &mut lab) as i64;
        if count != segment_decomposition_rhs(&c, &mut lab) {
            bail!("segment decomposition identity: trial {t}");
        }
        if count != oracle::bfs_count_segment_clusters(&c) as i64 {
            bail!("union-find vs search oracle: trial {t}");
        }
    }
    println!("ok - segment decomposition identity ({trials} samples)");
    println!("ok - union-find vs search oracle ({trials} samples)");

    let mut lab = ClusterLabeling::build(&Configuration::all(idx.clone(), true), Phase::Both);
    for t in 0..trials {
        let c = Configuration::sample(idx.clone(), SeedRecord::new(206, 0, t));
        lab.rebuild(&c, Phase::Both);
        let (open_cross, closed_cross) = duality_dichotomy(&c, &mut lab, 4, 1.0).unwrap();
        if open_cross == closed_cross {
            bail!("duality dichotomy: trial {t} gives ({open_cross}, {closed_cross})");
        }
        let ev = event_w(&c, &mut lab, 4, 1.0).unwrap();
        if ev.w_prime != (ev.w || ev.w_tilde) {
            bail!("w' union identity: trial {t}");
        }
    }
    println!("ok - duality dichotomy ({trials} samples)");
    println!("ok - w' union identity ({trials} samples)");
    Ok(())
}
