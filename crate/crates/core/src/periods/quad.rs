//! Adaptive Gauss–Kronrod (7/15) quadrature for complex integrands on [0, 1],
//! and its tensor nesting on [0, 1]².

use num::complex::Complex64;

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

/// Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Clone, Copy, Debug)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions { abs_tol: 1e-10, rel_tol: 1e-12, max_intervals: 20_000 }
    }
}

struct Piece {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

fn gk15<F: FnMut(f64) -> Complex64>(f: &mut F, a: f64, b: f64) -> Piece {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        k += s * WGK[i];
        if i % 2 == 1 {
            g += s * WG[i / 2];
        }
    }
    Piece { a, b, value: k * h, error: ((k - g) * h).norm() }
}

/// ∫₀¹ f. Bisects the interval with the largest error estimate until the
/// summed estimate is within tolerance; the subdivision is deterministic.
pub fn integrate<F: FnMut(f64) -> Complex64>(mut f: F, opts: QuadOptions) -> Result<Complex64> {
    let mut pieces = vec![gk15(&mut f, 0.0, 1.0)];
    loop {
        let total: Complex64 = pieces.iter().map(|p| p.value).sum();
        let err: f64 = pieces.iter().map(|p| p.error).sum();
        if !total.re.is_finite() || !total.im.is_finite() {
            return Err(Error::Quadrature("non-finite integrand".into()));
        }
        if err <= opts.abs_tol.max(opts.rel_tol * total.norm()) {
            return Ok(total);
        }
        if pieces.len() >= opts.max_intervals {
            return Err(Error::Quadrature(format!("error estimate {err:e} after {} intervals", pieces.len())));
        }
        let (worst, _) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("nonempty");
        let p = pieces.swap_remove(worst);
        let m = 0.5 * (p.a + p.b);
        pieces.push(gk15(&mut f, p.a, m));
        pieces.push(gk15(&mut f, m, p.b));
    }
}

/// ∫₀¹∫₀¹ f(u, s) ds du as an adaptive integral of adaptive integrals.
pub fn integrate_2d<F: Fn(f64, f64) -> Complex64>(f: F, opts: QuadOptions) -> Result<Complex64> {
    let inner = QuadOptions { abs_tol: opts.abs_tol * 0.1, ..opts };
    let mut failure = None;
    let v = integrate(
        |u| match integrate(|s| f(u, s), inner) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        },
        opts,
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(v),
    }
}
