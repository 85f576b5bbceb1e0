use std::f64::consts::PI;
use std::sync::OnceLock;

use num::complex::Complex64;
use num::{BigInt, One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactlin::{rational_to_f64, Rational};

pub const ZETA2: f64 = PI * PI / 6.0;

/// B_0..B_n by the Akiyama–Tanigawa recurrence (B_1 = +1/2 convention; only
/// even indices are used here).
pub fn bernoulli(n: usize) -> Vec<Rational> {
    let mut a: Vec<Rational> = Vec::with_capacity(n + 1);
    let mut out = Vec::with_capacity(n + 1);
    for m in 0..=n {
        a.push(Rational::new(BigInt::one(), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            let diff = &a[j - 1] - &a[j];
            a[j - 1] = diff * Rational::from_integer(BigInt::from(j));
        }
        out.push(a[0].clone());
    }
    out
}

fn factorial(n: usize) -> Rational {
    (1..=n).fold(Rational::one(), |acc, k| acc * Rational::from_integer(BigInt::from(k)))
}

const SERIES_TERMS: usize = 24;

/// B_{2k}/(2k+1)!, k = 1..SERIES_TERMS.
fn dilog_coefficients() -> &'static [f64] {
    static C: OnceLock<Vec<f64>> = OnceLock::new();
    C.get_or_init(|| {
        let b = bernoulli(2 * SERIES_TERMS);
        (1..=SERIES_TERMS)
            .map(|k| rational_to_f64(&(&b[2 * k] / factorial(2 * k + 1))))
            .collect()
    })
}

/// |B_{2n}| / (2n·(2n+1)!), n = 1..CLAUSEN_TERMS.
const CLAUSEN_TERMS: usize = 40;

fn clausen_coefficients() -> &'static [f64] {
    static C: OnceLock<Vec<f64>> = OnceLock::new();
    C.get_or_init(|| {
        let b = bernoulli(2 * CLAUSEN_TERMS);
        (1..=CLAUSEN_TERMS)
            .map(|n| {
                let mag = if b[2 * n] < Rational::zero() { -b[2 * n].clone() } else { b[2 * n].clone() };
                let den = factorial(2 * n + 1) * Rational::from_integer(BigInt::from(2 * n));
                rational_to_f64(&(mag / den))
            })
            .collect()
    })
}

/// Maps −0.0 imaginary parts to +0.0 so points on the negative real axis
/// take arg = +π.
pub fn unsign_zero(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        Complex64::new(z.re, 0.0)
    } else {
        z
    }
}

/// Principal logarithm, with a zero imaginary part read as +0.
pub fn clog(z: Complex64) -> Complex64 {
    unsign_zero(z).ln()
}

/// Series in u = −log(1 − z), valid for |z| ≤ 1 and Re z ≤ 1/2.
fn dilog_series(z: Complex64) -> Complex64 {
    let u = -clog(Complex64::new(1.0, 0.0) - z);
    let u2 = u * u;
    let mut sum = u - u2 / 4.0;
    let mut p = u;
    for c in dilog_coefficients() {
        p *= u2;
        let t = p * *c;
        sum += t;
        if t.norm() < 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

/// Li₂ for |z| ≤ 1.
fn dilog_unit_disk(z: Complex64) -> Complex64 {
    if z.re <= 0.5 {
        return dilog_series(z);
    }
    if z == Complex64::new(1.0, 0.0) {
        return Complex64::new(ZETA2, 0.0);
    }
    // reflection; here |1 − z| < 1
    let one = Complex64::new(1.0, 0.0);
    -dilog_series(one - z) + ZETA2 - clog(z) * clog(one - z)
}

/// Principal branch of Li₂, cut along [1, ∞). Points exactly on the cut
/// (zero imaginary part of either sign) take the value approached from the
/// upper half-plane: Li₂(x) = Re + iπ·ln x for x > 1.
pub fn dilog(z: Complex64) -> Complex64 {
    let z = unsign_zero(z);
    if z == Complex64::new(0.0, 0.0) {
        return z;
    }
    if z.im == 0.0 && z.re > 1.0 {
        let x = z.re;
        let re = -dilog_unit_disk(Complex64::new(1.0 / x, 0.0)).re + 2.0 * ZETA2 - 0.5 * x.ln().powi(2);
        return Complex64::new(re, PI * x.ln());
    }
    if z.norm_sqr() <= 1.0 {
        return dilog_unit_disk(z);
    }
    // inversion: Li₂(z) + Li₂(1/z) = −π²/6 − ½ log²(−z), z ∉ [0, ∞)
    let l = clog(-z);
    -dilog_unit_disk(z.inv()) - ZETA2 - 0.5 * l * l
}

/// Cl₂(θ) = Σ sin(kθ)/k², summed from its expansion around θ = 0 after
/// reducing θ to (−π, π].
pub fn clausen(theta: f64) -> f64 {
    let two_pi = 2.0 * PI;
    let mut t = theta.rem_euclid(two_pi);
    if t > PI {
        t -= two_pi;
    }
    if t == 0.0 {
        return 0.0;
    }
    let t2 = t * t;
    let mut sum = t - t * t.abs().ln();
    let mut p = t;
    for c in clausen_coefficients() {
        p *= t2;
        let term = p * c;
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    sum
}

/// Li₂((z−1)/z) − Li₂(z) + π²/6 − log z·log(1−z) + ½log²z.
pub fn fe1_residual(z: Complex64) -> f64 {
    let one = Complex64::new(1.0, 0.0);
    let lhs = dilog((z - one) / z) - dilog(z);
    let rhs = -ZETA2 + clog(z) * clog(one - z) - 0.5 * clog(z) * clog(z);
    (lhs - rhs).norm()
}

/// Li₂(1/(1−z)) − Li₂(z) − π²/6 − log(−z)·log(1−z) + ½log²(1−z).
pub fn fe2_residual(z: Complex64) -> f64 {
    let one = Complex64::new(1.0, 0.0);
    let lhs = dilog(one / (one - z)) - dilog(z);
    let l1 = clog(one - z);
    let rhs = ZETA2 + clog(-z) * l1 - 0.5 * l1 * l1;
    (lhs - rhs).norm()
}

#[derive(Clone, Debug, PartialEq)]
pub struct FunctionalEquationReport {
    pub samples: usize,
    pub rejected: usize,
    pub max_residual_1: f64,
    pub max_residual_2: f64,
    /// Residuals at z = −μ and z = −1/μ for both identities.
    pub mu_instances: Vec<(String, f64)>,
}

/// Every branch cut of every term in both identities lies on the real axis,
/// so samples from [−4, 4]² closer than this to it are rejected.
pub const CUT_MARGIN: f64 = 1e-3;

pub fn accept_sample(z: Complex64) -> bool {
    z.im.abs() >= CUT_MARGIN
}

pub fn mu_complex() -> Complex64 {
    Complex64::new(0.5, 3f64.sqrt() / 2.0)
}

pub fn check_functional_equations(samples: usize, seed: u64) -> FunctionalEquationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut m1, mut m2) = (0f64, 0f64);
    let mut accepted = 0;
    let mut rejected = 0;
    while accepted < samples {
        let z = Complex64::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0));
        if !accept_sample(z) {
            rejected += 1;
            continue;
        }
        accepted += 1;
        m1 = m1.max(fe1_residual(z));
        m2 = m2.max(fe2_residual(z));
    }
    let mu = mu_complex();
    let mu_instances = vec![
        ("eq1 at -mu".to_string(), fe1_residual(-mu)),
        ("eq2 at -mu".to_string(), fe2_residual(-mu)),
        ("eq1 at -1/mu".to_string(), fe1_residual(-mu.inv())),
        ("eq2 at -1/mu".to_string(), fe2_residual(-mu.inv())),
    ];
    FunctionalEquationReport { samples, rejected, max_residual_1: m1, max_residual_2: m2, mu_instances }
}

#[cfg(test)]
#[allow(clippy::excessive_precision)]
mod tests {
    use super::*;
    use crate::exactlin::ratio;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn bernoulli_values() {
        let b = bernoulli(12);
        assert_eq!(b[2], ratio(1, 6));
        assert_eq!(b[4], ratio(-1, 30));
        assert_eq!(b[6], ratio(1, 42));
        assert_eq!(b[12], ratio(-691, 2730));
        assert!(b[3].is_zero() && b[11].is_zero());
    }

    /// Σ z^k/k² summed directly; fine on |z| ≤ 0.6 or on the circle with
    /// enough terms for the tolerance used.
    fn power_series(z: Complex64, terms: usize) -> Complex64 {
        let mut s = c(0.0, 0.0);
        let mut p = c(1.0, 0.0);
        for k in 1..=terms {
            p *= z;
            s += p / (k * k) as f64;
        }
        s
    }

    #[test]
    fn special_values() {
        assert_eq!(dilog(c(0.0, 0.0)), c(0.0, 0.0));
        assert!((dilog(c(1.0, 0.0)) - c(ZETA2, 0.0)).norm() < 1e-15);
        assert!((dilog(c(-1.0, 0.0)) - c(-ZETA2 / 2.0, 0.0)).norm() < 1e-15);
        // Li₂(1/2) = π²/12 − ½ ln² 2
        let half = PI * PI / 12.0 - 0.5 * 2f64.ln().powi(2);
        assert!((dilog(c(0.5, 0.0)).re - half).abs() < 1e-15);
        // upper side of the cut
        let two = dilog(c(2.0, 0.0));
        assert!((two.re - PI * PI / 4.0).abs() < 1e-14);
        assert!((two.im - PI * 2f64.ln()).abs() < 1e-14);
        assert_eq!(dilog(c(2.0, -0.0)), two);
        assert!((dilog(c(2.0, 1e-300)) - two).norm() < 1e-14);
    }

    #[test]
    fn minus_mu_on_the_circle() {
        // −μ = e^{4πi/3}. Re Li₂(e^{iθ}) = π²/6 − θ(2π − θ)/4 on [0, 2π].
        let z = dilog(-mu_complex());
        let theta = 4.0 * PI / 3.0;
        assert!((z.re - (ZETA2 - theta * (2.0 * PI - theta) / 4.0)).abs() < 1e-14);
        // Im = Σ sin(4πk/3)/k² = (√3/2)·Σ_k χ(k)/k² with χ = (−1, +1, 0) on k mod 3;
        // the tail after N terms is O(1/N²).
        let mut s = 0.0;
        for k in 1..=3_000_000usize {
            s += match k % 3 {
                1 => -1.0,
                2 => 1.0,
                _ => 0.0,
            } / (k * k) as f64;
        }
        let im = s * 3f64.sqrt() / 2.0;
        assert!((z.im - im).abs() < 1e-11, "{} vs {}", z.im, im);
        assert!((z.im + 0.676_627_737_606_435_75).abs() < 1e-15);
    }

    #[test]
    fn agrees_with_direct_series_inside_disk() {
        for &(re, im) in &[(0.3, 0.2), (-0.5, 0.1), (0.1, -0.55), (0.55, 0.0), (-0.2, -0.3)] {
            let z = c(re, im);
            assert!(rel(dilog(z), power_series(z, 200)) < 1e-14, "{z}");
        }
    }

    #[test]
    fn reference_values_far_out() {
        // values of Li₂ from an independent 50-digit evaluation
        let cases = [
            (c(3.0, 4.0), c(-0.604_807_012_061_199_98, 3.733_619_532_294_385_9)),
            (c(-1e6, 1.0), c(-97.079_099_055_466_048, 1.381_551_155_795_966_9e-5)),
            (c(0.9, 0.1), c(1.264_186_732_338_754, 0.243_735_679_981_014_05)),
            (c(1e5, -1e5), c(-69.192_971_749_782_05, -27.943_291_330_434_344)),
            (c(-0.99, 0.999), c(-0.906_572_819_609_545_72, 0.673_429_349_843_868_95)),
            (c(1.0001, -0.0002), c(1.645_467_914_445_156_8, -0.002_084_421_067_682_047_5)),
            (c(1e6, 1e6), c(-99.151_422_040_017_33, 33.368_625_139_733_567)),
            (c(0.5, 0.866_025_403_784_438_6), c(0.274_155_677_808_037_77, 1.014_941_606_409_653_6)),
        ];
        for (z, want) in cases {
            assert!(rel(dilog(z), want) < 1e-13, "{z}: {} vs {want}", dilog(z));
        }
    }

    #[test]
    fn clausen_values() {
        assert_eq!(clausen(0.0), 0.0);
        // Catalan by its alternating series with the tail halved
        let n = 200_000;
        let mut g = 0.0;
        for k in 0..n {
            let s = if k % 2 == 0 { 1.0 } else { -1.0 };
            g += s / ((2 * k + 1) as f64).powi(2);
        }
        g += 0.5 / ((2 * n + 1) as f64).powi(2);
        assert!((clausen(PI / 2.0) - g).abs() < 1e-13);
        assert!((clausen(PI / 2.0) - 0.915_965_594_177_219).abs() < 1e-15);
        assert!((clausen(2.0 * PI / 3.0) - 0.676_627_737_606_435_7).abs() < 1e-15);
        // duplication Cl₂(2θ) = 2Cl₂(θ) − 2Cl₂(π − θ)
        for th in [0.3, 1.0, PI / 3.0, 2.5] {
            let lhs = clausen(2.0 * th);
            let rhs = 2.0 * clausen(th) - 2.0 * clausen(PI - th);
            assert!((lhs - rhs).abs() < 1e-14, "{th}");
        }
    }

    #[test]
    fn functional_equations_at_fixed_points() {
        assert!(fe1_residual(c(-1.0, 0.0)) < 1e-13);
        let r = check_functional_equations(1000, 0);
        assert!(r.max_residual_1 < 1e-12 && r.max_residual_2 < 1e-12, "{r:?}");
        for (name, v) in &r.mu_instances {
            assert!(*v < 1e-13, "{name}: {v}");
        }
        assert!(!accept_sample(c(2.0, 0.0)));
    }

    proptest! {
        #[test]
        fn clausen_is_odd_and_periodic(t in -10.0f64..10.0) {
            prop_assert!((clausen(-t) + clausen(t)).abs() < 1e-14);
            prop_assert!((clausen(t + 2.0 * PI) - clausen(t)).abs() < 1e-13);
            prop_assert!((clausen(t) - dilog(Complex64::from_polar(1.0, t)).im).abs() < 1e-13);
        }

        #[test]
        fn inversion_identity(re in -50.0f64..50.0, im in -50.0f64..50.0) {
            let z = c(re, im);
            prop_assume!(im.abs() > 1e-6 || re < 0.0);
            prop_assume!(z.norm() > 1e-6);
            let l = clog(-z);
            let lhs = dilog(z) + dilog(z.inv());
            let rhs = -ZETA2 - 0.5 * l * l;
            prop_assert!((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()));
        }
    }
}
