use bucketprobe_core::exact::ExactCounter;
use bucketprobe_core::poisson::AnalyticContext;
use bucketprobe_core::specialfn::tree_fn;
use bucketprobe_core::Complex64;
use num_traits::ToPrimitive;
use std::f64::consts::PI;

fn ln_factorial(n: usize) -> f64 {
    (1..=n).map(|k| (k as f64).ln()).sum()
}

#[test]
fn almost_full_generating_function() {
    for b in 1..=3usize {
        let max_n = 120;
        let counter = ExactCounter::new(b, 0, max_n).unwrap();
        for &z in &[0.05, 0.12, 0.2] {
            let omega = |j: usize| Complex64::from_polar(1.0, 2.0 * PI * j as f64 / b as f64);
            let ratios: Vec<Complex64> = (0..b)
                .map(|j| tree_fn(omega(j) * z).unwrap() / z)
                .collect();
            for &x in &[0.3, 0.7] {
                let mut product = Complex64::new(1.0, 0.0);
                for r in &ratios {
                    product *= Complex64::new(x, 0.0) - r;
                }
                let rhs = x.powi(b as i32) - product.re;
                assert!(product.im.abs() < 1e-12);
                let mut lhs = 0.0;
                for i in 0.. {
                    if b * i >= max_n {
                        break;
                    }
                    for d in 0..b {
                        let size = b * i + d;
                        let f = counter.almost_full(i, d).unwrap().to_f64().unwrap();
                        let log_term = f.ln() + size as f64 * (b as f64 * z).ln() - ln_factorial(size);
                        lhs += log_term.exp() * x.powi(d as i32);
                    }
                }
                assert!((lhs - rhs).abs() < 1e-8, "b={b} z={z} x={x}: {lhs} vs {rhs}");
            }
        }
    }
}

fn t0_closed_form(b: usize, alpha: f64) -> f64 {
    let z = alpha * (-alpha).exp();
    let mut den = Complex64::new(1.0, 0.0);
    for j in 1..b {
        let w = Complex64::from_polar(1.0, 2.0 * PI * j as f64 / b as f64);
        den *= Complex64::new(1.0, 0.0) - tree_fn(w * z).unwrap() / alpha;
    }
    b as f64 * (1.0 - alpha) / den.re
}

#[test]
fn poisson_transform_of_last_bucket_not_full() {
    let (b, alpha) = (2usize, 0.5);
    let target = t0_closed_form(b, alpha);
    let ctx = AnalyticContext::new(b, alpha).unwrap();
    assert!((ctx.t_d(0).unwrap() - target).abs() < 1e-10);
    let mut gaps = Vec::new();
    for m in [20usize, 40, 80] {
        let lambda = alpha * b as f64 * m as f64;
        let hi = (lambda + 6.0 * lambda.sqrt()).ceil() as usize;
        let counter = ExactCounter::new(b, m, hi).unwrap();
        let mut avg = 0.0;
        let mut mass = 0.0;
        for n in 0..=hi {
            let q = counter.last_not_full(m, n).unwrap().to_f64().unwrap();
            let log_w = -lambda + n as f64 * lambda.ln() - ln_factorial(n);
            let ratio = (q.ln() - n as f64 * (m as f64).ln()).exp();
            avg += log_w.exp() * if q == 0.0 { 0.0 } else { ratio };
            mass += log_w.exp();
        }
        gaps.push((avg / mass - target).abs());
    }
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    assert!(gaps[2] < 0.01, "{gaps:?}");
}
