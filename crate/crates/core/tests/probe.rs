use std::time::Instant;

use curvature_core::curve::{builtin, BuiltinParams};
use curvature_core::framing::asymptotic_normal;
use curvature_core::invariants::{
    framing_push_scale, linking_gauss, pushed_curve, writhe_average, writhe_gauss,
};

#[test]
#[ignore]
fn probe_kovaleva_pieces() {
    let c = builtin::<f64>("kovaleva", BuiltinParams::default()).unwrap();
    let t0 = Instant::now();
    let framed = asymptotic_normal(&c, 2048).unwrap();
    println!("framing: {:?}", t0.elapsed());

    let t0 = Instant::now();
    let eps = framing_push_scale(&c);
    println!("push scale: {:?} (eps={eps})", t0.elapsed());
    let t0 = Instant::now();
    let pushed = pushed_curve(&c, &framed.normal, eps).unwrap();
    println!(
        "push fit: {:?} (deg={})",
        t0.elapsed(),
        pushed.xyz.iter().map(|s| s.degree()).max().unwrap()
    );

    let t0 = Instant::now();
    let (v, l) = linking_gauss(&c, &pushed).unwrap();
    println!("linking_gauss: {:?} -> {v} ({l})", t0.elapsed());

    let t0 = Instant::now();
    let w = writhe_gauss(&c).unwrap();
    println!("writhe_gauss: {:?} -> {w}", t0.elapsed());

    let t0 = Instant::now();
    let (m, se) = writhe_average(&c, 2000, 7).unwrap();
    println!("writhe_average(2000): {:?} -> {m} +- {se}", t0.elapsed());
}
