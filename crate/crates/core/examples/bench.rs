//! Per-trial throughput of the main estimators at campaign sizes.
//! Run with `cargo run --release -p percolog --example bench`.

use std::time::Instant;
use percolog::estimators::*;
use percolog::lattice::DomainKind;
use percolog::percolation::ArmKind;
fn main() {
    for (n, l, tr) in [(64i32, 256i32, 200u32), (128, 256, 150), (256, 256, 100), (512, 512, 40), (1024, 1024, 10)] {
        let t0 = Instant::now();
        let _ = estimate_window_grid(n, &[1.0, 0.5, 0.25], DomainKind::HalfPlane, &RunOpts::new(tr as u64, 1).with_truncation(l)).unwrap();
        println!("grid n={n} L={l}: {:?}/trial", t0.elapsed() / tr);
    }
    let p = ScalePartition::new(256, 0.25).unwrap();
    let m = p.window_count();
    let t0 = Instant::now();
    let r = estimate_cut_window(256, 0.25, m, &RunOpts::new(100, 1).with_truncation(256)).unwrap();
    println!("cut n=256 window {m} bounds {:?}: {:?}/trial s={} t~={}", r.bounds, t0.elapsed() / 100, r.s.mean(), r.t_tilde.mean());
    for (nout, r_t, tr) in [(8i32, 32i32, 2000u32), (16, 64, 1000), (32, 128, 500)] {
        let t0 = Instant::now();
        let _ = estimate_arm(1, nout, ArmKind::ThreeArm, &RunOpts::new(tr as u64, 1).with_truncation(r_t)).unwrap();
        println!("arm n_out={nout} r={r_t}: {:?}/trial", t0.elapsed() / tr);
    }
}
