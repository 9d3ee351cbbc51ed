//! Special functions for the counting normalizations: Riemann zeta by
//! Euler-Maclaurin, the gamma function by Lanczos, the completed zeta,
//! and unit-ball volumes. Accuracy target is 12+ significant digits on the
//! arguments that actually occur (small even integers), cross-checked
//! against closed forms in the tests.

use std::f64::consts::PI;

/// Bernoulli numbers B_2, B_4, ..., B_20.
const BERNOULLI: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// Riemann zeta for real s > 1 by Euler-Maclaurin with cutoff 20.
pub fn zeta(s: f64) -> f64 {
    assert!(s > 1.0, "zeta implemented for s > 1");
    let n = 20.0f64;
    let mut sum = 0.0;
    for k in 1..20u32 {
        sum += (k as f64).powf(-s);
    }
    sum += n.powf(1.0 - s) / (s - 1.0);
    sum += 0.5 * n.powf(-s);
    // correction terms B_{2k}/(2k)! * s(s+1)...(s+2k-2) * n^{-s-2k+1}
    let mut rising = s; // s(s+1)...(s+2k-2), starts at k=1 with just s
    let mut factorial = 2.0; // (2k)!
    for (k, b) in BERNOULLI.iter().enumerate() {
        let term = b / factorial * rising * n.powf(-s - 2.0 * k as f64 - 1.0);
        sum += term;
        // advance: rising gains the factors (s+2k-1)(s+2k), the factorial
        // moves from (2k)! to (2k+2)!
        let kk = 2.0 * (k as f64 + 1.0);
        rising *= (s + kk - 1.0) * (s + kk);
        factorial *= (kk + 1.0) * (kk + 2.0);
    }
    sum
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Gamma function by the Lanczos approximation (reflection for x < 1/2).
pub fn gamma(x: f64) -> f64 {
    if x < 0.5 {
        PI / ((PI * x).sin() * gamma(1.0 - x))
    } else {
        let x = x - 1.0;
        let mut a = LANCZOS[0];
        let t = x + LANCZOS_G + 0.5;
        for (i, c) in LANCZOS.iter().enumerate().skip(1) {
            a += c / (x + i as f64);
        }
        (2.0 * PI).sqrt() * t.powf(x + 0.5) * (-t).exp() * a
    }
}

/// Completed zeta: pi^(-z/2) Gamma(z/2) zeta(z).
pub fn xi(z: f64) -> f64 {
    PI.powf(-z / 2.0) * gamma(z / 2.0) * zeta(z)
}

/// Lebesgue volume of the unit ball in R^n.
pub fn unit_ball_volume(n: usize) -> f64 {
    PI.powf(n as f64 / 2.0) / gamma(n as f64 / 2.0 + 1.0)
}
