use coshbar::propagator::{free_kernel, spectral_kernel};
use coshbar::PhysicalParams;

fn barrier(v8: f64) -> PhysicalParams {
    PhysicalParams::natural(1.0, v8 / 8.0).unwrap()
}

#[test]
fn semigroup_on_trapezoid_grid() {
    let p = barrier(2.0);
    // tau = 2 keeps the kernel resolvable at the ends while the cut-off tails stay below 1e-3
    let (xf, xi, t1, t2) = (0.3, -0.4, 2.0, 2.0);
    let dz = 0.1;
    let n = (16.0 / dz) as usize;
    let mut sum = 0.0;
    for j in 0..=n {
        let z = -8.0 + j as f64 * dz;
        let w = if j == 0 || j == n { 0.5 } else { 1.0 };
        let a = spectral_kernel(&p, xf, z, t1).unwrap().value;
        let b = spectral_kernel(&p, z, xi, t2).unwrap().value;
        sum += w * a * b;
    }
    let composed = sum * dz;
    let direct = spectral_kernel(&p, xf, xi, t1 + t2).unwrap().value;
    assert!((composed - direct).abs() < 1e-3 * direct, "{composed} vs {direct}");
}

#[test]
fn short_time_approaches_free_kernel() {
    let p = barrier(0.5);
    let k = spectral_kernel(&p, 0.0, 0.0, 0.01).unwrap().value;
    let free = free_kernel(1.0, 1.0, 0.0, 0.0, 0.01);
    assert!((k - free).abs() < 0.01 * free, "{k} vs {free}");
}

#[test]
fn barrier_suppresses_crossing() {
    let values: Vec<f64> = [0.0, 0.5, 2.0]
        .iter()
        .map(|&v8| spectral_kernel(&barrier(v8), 0.5, -0.5, 1.0).unwrap().value)
        .collect();
    assert!(values[0] > values[1] && values[1] > values[2], "{values:?}");
}

#[test]
fn imaginary_part_is_negligible() {
    for v8 in [0.5, 2.0, 20.0] {
        for (xf, xi) in [(0.0, 0.0), (1.0, -0.3), (-2.0, 0.7)] {
            let k = spectral_kernel(&barrier(v8), xf, xi, 1.0).unwrap();
            assert!(k.value > 0.0);
            assert!(k.imag_ratio < 1e-10, "v8={v8} ({xf}, {xi}) {}", k.imag_ratio);
        }
    }
}
