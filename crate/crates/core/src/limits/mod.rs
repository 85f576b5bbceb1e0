//! The limiting frame e₀, e₁, e₂, d₁..d_K near t = 0: the pairing Q, the
//! monodromy logarithm N, conjugation at t, model normal functions R and
//! R_i, and the limits of their pairings with η and the d_j.

use std::f64::consts::PI;

use num::complex::Complex64;
use num::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exactlin::{kernel_basis, rat, rational_to_f64, QMatrix, Rational};

const I: Complex64 = Complex64::new(0.0, 1.0);

pub const DEFAULT_DK: usize = 19;

#[derive(Clone, Debug, PartialEq)]
pub struct Frame {
    dk: usize,
    q_d: QMatrix,
}

impl Frame {
    /// dK classes d_j with Q(d_i, d_j) = δ_ij.
    pub fn new(dk: usize) -> Self {
        Frame { dk, q_d: QMatrix::identity(dk) }
    }

    pub fn with_gram(q_d: QMatrix) -> Result<Self> {
        if q_d.rows() != q_d.cols() {
            return Err(Error::DimensionMismatch { expected: q_d.rows(), got: q_d.cols() });
        }
        if q_d != q_d.transpose() {
            return Err(Error::Malformed("Gram matrix of the d_j is not symmetric".into()));
        }
        Ok(Frame { dk: q_d.rows(), q_d })
    }

    pub fn dk(&self) -> usize {
        self.dk
    }

    pub fn dim(&self) -> usize {
        3 + self.dk
    }

    /// Position of d_j (1-based j).
    pub fn d_index(&self, j: usize) -> Result<usize> {
        if j == 0 || j > self.dk {
            return Err(Error::IndexOutOfRange(format!("d_{j} with dK = {}", self.dk)));
        }
        Ok(2 + j)
    }

    /// Full Gram matrix on (e₀, e₁, e₂, d₁..d_K).
    pub fn gram(&self) -> QMatrix {
        let n = self.dim();
        let mut g = QMatrix::zeros(n, n);
        g[(0, 2)] = rat(-1);
        g[(2, 0)] = rat(-1);
        g[(1, 1)] = rat(1);
        for i in 0..self.dk {
            for j in 0..self.dk {
                g[(3 + i, 3 + j)] = self.q_d[(i, j)].clone();
            }
        }
        g
    }

    /// N as a matrix acting on coordinate columns: e₂ ↦ e₁ ↦ e₀ ↦ 0, d_j ↦ 0.
    pub fn monodromy(&self) -> QMatrix {
        let mut n = QMatrix::zeros(self.dim(), self.dim());
        n[(1, 2)] = rat(1);
        n[(0, 1)] = rat(1);
        n
    }

    pub fn basis_vector(&self, k: usize) -> FrameVector {
        let mut v = FrameVector::zero(self);
        v.c[k] = Complex64::new(1.0, 0.0);
        v
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrameVector {
    pub c: Vec<Complex64>,
}

impl FrameVector {
    pub fn zero(frame: &Frame) -> Self {
        FrameVector { c: vec![Complex64::zero(); frame.dim()] }
    }

    fn check(&self, frame: &Frame) -> Result<()> {
        if self.c.len() != frame.dim() {
            return Err(Error::DimensionMismatch { expected: frame.dim(), got: self.c.len() });
        }
        if self.c.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Malformed("non-finite frame coefficient".into()));
        }
        Ok(())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        FrameVector { c: self.c.iter().map(|x| x * s).collect() }
    }

    pub fn sub(&self, o: &FrameVector) -> Self {
        FrameVector { c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }

    pub fn max_norm(&self) -> f64 {
        self.c.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Im(l) = −log|t| / 2π.
pub fn im_l(t: Complex64) -> Result<f64> {
    if t == Complex64::zero() {
        return Err(Error::ZeroParameter);
    }
    Ok(-t.norm().ln() / (2.0 * PI))
}

/// Complex conjugation of the coefficients, with ē₀ = e₀,
/// ē₁ = e₁ + 2i·Im(l)·e₀, ē₂ = e₂ + 2i·Im(l)·e₁ − 2·Im(l)²·e₀, d̄_j = d_j.
pub fn conjugate_at(v: &FrameVector, t: Complex64, frame: &Frame) -> Result<FrameVector> {
    v.check(frame)?;
    let y = im_l(t)?;
    let mut out: Vec<Complex64> = v.c.iter().map(|z| z.conj()).collect();
    let (c1, c2) = (out[1], out[2]);
    out[0] += c1 * (2.0 * y) * I - c2 * (2.0 * y * y);
    out[1] += c2 * (2.0 * y) * I;
    Ok(FrameVector { c: out })
}

/// (v − v̄) / 2i.
pub fn im_part(v: &FrameVector, t: Complex64, frame: &Frame) -> Result<FrameVector> {
    let cv = conjugate_at(v, t, frame)?;
    Ok(v.sub(&cv).scale(1.0 / (2.0 * I)))
}

/// Bilinear Q.
pub fn pair(u: &FrameVector, v: &FrameVector, frame: &Frame) -> Result<Complex64> {
    u.check(frame)?;
    v.check(frame)?;
    let mut s = -(u.c[0] * v.c[2] + u.c[2] * v.c[0]) + u.c[1] * v.c[1];
    for i in 0..frame.dk {
        for j in 0..frame.dk {
            let q = &frame.q_d[(i, j)];
            if !q.is_zero() {
                s += u.c[3 + i] * v.c[3 + j] * rational_to_f64(q);
            }
        }
    }
    Ok(s)
}

/// Polynomial in t.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly(pub Vec<Complex64>);

impl Poly {
    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn eval(&self, t: Complex64) -> Complex64 {
        self.0.iter().rev().fold(Complex64::zero(), |acc, c| acc * t + c)
    }

    /// Degree ≤ 3, coefficients uniform in the unit disk.
    pub fn random(rng: &mut ChaCha8Rng) -> Self {
        Poly(
            (0..4)
                .map(|_| Complex64::from_polar(rng.gen_range(0.0..1.0), rng.gen_range(0.0..2.0 * PI)))
                .collect(),
        )
    }
}

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// κ(t) = g(t)e₀ + Σ h_i(t)d_i. Only the real parts of the polynomials are
/// used, so η stays a real class.
#[derive(Clone, Debug, PartialEq)]
pub struct EtaTails {
    pub g: Poly,
    pub h: Vec<Poly>,
}

impl EtaTails {
    pub fn zero(dk: usize) -> Self {
        EtaTails { g: Poly::zero(), h: vec![Poly::zero(); dk] }
    }

    pub fn random(dk: usize, seed: u64) -> Self {
        let mut rng = rng_for(seed, 0);
        EtaTails { g: Poly::random(&mut rng), h: (0..dk).map(|_| Poly::random(&mut rng)).collect() }
    }
}

/// η = e₂ + i·Im(l)·e₁ + κ(t), with the size of η − η̄ as a reality residual.
pub fn eta_at(t: Complex64, frame: &Frame, tails: &EtaTails) -> Result<(FrameVector, f64)> {
    if tails.h.len() != frame.dk {
        return Err(Error::DimensionMismatch { expected: frame.dk, got: tails.h.len() });
    }
    let y = im_l(t)?;
    let mut v = FrameVector::zero(frame);
    v.c[2] = Complex64::new(1.0, 0.0);
    v.c[1] = I * y;
    v.c[0] = Complex64::new(tails.g.eval(t).re, 0.0);
    for (j, h) in tails.h.iter().enumerate() {
        v.c[3 + j] = Complex64::new(h.eval(t).re, 0.0);
    }
    let residual = conjugate_at(&v, t, frame)?.sub(&v).max_norm();
    Ok((v, residual))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModelKind {
    /// Trivial singularity, limit value L.
    R,
    /// Singularity d_i (1-based).
    Ri(usize),
}

/// R(t) = iL·e₀ + t(α₀e₀ + α₁e₁ + α₂e₂ + Σ β_j d_j), or
/// R_i(t) = α₀e₀ + α₁e₁ + α₂e₂ + i·log(t)·d_i + Σ_{j≠i} β_j d_j.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalFunctionModel {
    pub kind: ModelKind,
    pub l_value: f64,
    pub alpha: [Poly; 3],
    pub beta: Vec<Poly>,
}

impl NormalFunctionModel {
    pub fn zero_tails(kind: ModelKind, dk: usize, l_value: f64) -> Self {
        NormalFunctionModel {
            kind,
            l_value,
            alpha: [Poly::zero(), Poly::zero(), Poly::zero()],
            beta: vec![Poly::zero(); dk],
        }
    }

    pub fn random_tails(kind: ModelKind, dk: usize, l_value: f64, seed: u64) -> Self {
        let stream = match kind {
            ModelKind::R => 1,
            ModelKind::Ri(i) => 1 + i as u64,
        };
        let mut rng = rng_for(seed, stream);
        let alpha = [Poly::random(&mut rng), Poly::random(&mut rng), Poly::random(&mut rng)];
        let beta = (1..=dk)
            .map(|j| match kind {
                ModelKind::Ri(i) if i == j => Poly::zero(),
                _ => Poly::random(&mut rng),
            })
            .collect();
        NormalFunctionModel { kind, l_value, alpha, beta }
    }

    pub fn eval(&self, t: Complex64, frame: &Frame) -> Result<FrameVector> {
        if t == Complex64::zero() {
            return Err(Error::ZeroParameter);
        }
        if self.beta.len() != frame.dk() {
            return Err(Error::DimensionMismatch { expected: frame.dk(), got: self.beta.len() });
        }
        let mut v = FrameVector::zero(frame);
        match self.kind {
            ModelKind::R => {
                for k in 0..3 {
                    v.c[k] = t * self.alpha[k].eval(t);
                }
                v.c[0] += I * self.l_value;
                for (j, b) in self.beta.iter().enumerate() {
                    v.c[3 + j] = t * b.eval(t);
                }
            }
            ModelKind::Ri(i) => {
                let di = frame.d_index(i)?;
                for k in 0..3 {
                    v.c[k] = self.alpha[k].eval(t);
                }
                for (j, b) in self.beta.iter().enumerate() {
                    v.c[3 + j] = b.eval(t);
                }
                v.c[di] = I * t.ln();
            }
        }
        Ok(v)
    }

    /// The vector whose imaginary part is paired: R(t), or R_i(t)/log t.
    fn paired_vector(&self, t: Complex64, frame: &Frame) -> Result<FrameVector> {
        let v = self.eval(t, frame)?;
        Ok(match self.kind {
            ModelKind::R => v,
            ModelKind::Ri(_) => v.scale(1.0 / t.ln()),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Eta,
    D(usize),
}

/// |t| = 10⁻², 10⁻⁴, …, 10⁻¹² at arg t = 0.3.
pub fn default_t_sequence() -> Vec<Complex64> {
    (1..=6).map(|k| Complex64::from_polar(10f64.powi(-2 * k), 0.3)).collect()
}

fn check_sequence(ts: &[Complex64]) -> Result<()> {
    if ts.len() < 2 {
        return Err(Error::BadSequence("need at least two parameters".into()));
    }
    if ts.iter().any(|t| *t == Complex64::zero()) {
        return Err(Error::ZeroParameter);
    }
    if ts.windows(2).any(|w| w[1].norm() >= w[0].norm()) {
        return Err(Error::BadSequence("|t| must be strictly decreasing".into()));
    }
    if ts[0].norm() >= 1.0 {
        return Err(Error::BadSequence("|t| must stay below 1".into()));
    }
    Ok(())
}

/// Value at h = 0 of the interpolating polynomial through (h_k, f_k).
pub fn neville_at_zero(h: &[f64], f: &[Complex64]) -> Complex64 {
    let mut p = f.to_vec();
    let n = p.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (p[i + 1] * h[i] - p[i] * h[i + m]) / (h[i] - h[i + m]);
        }
    }
    p[0]
}

#[derive(Clone, Debug, PartialEq)]
pub struct LimitReport {
    pub limit: Complex64,
    pub values: Vec<Complex64>,
    /// Changes in the extrapolated value as each further t is added.
    pub corrections: Vec<f64>,
    /// "1/log|t|" or "|t|".
    pub variable: &'static str,
}

impl LimitReport {
    /// Size of the last extrapolation correction.
    pub fn error_estimate(&self) -> f64 {
        self.corrections.last().copied().unwrap_or(f64::INFINITY)
    }
}

fn extrapolate(values: Vec<Complex64>, h: Vec<f64>, variable: &'static str) -> Result<LimitReport> {
    let estimates: Vec<Complex64> = (1..=values.len()).map(|m| neville_at_zero(&h[..m], &values[..m])).collect();
    let corrections: Vec<f64> = estimates.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    let limit = estimates[estimates.len() - 1];
    let first = corrections[0];
    let last = corrections[corrections.len() - 1];
    let scale = 1.0 + limit.norm();
    if !limit.re.is_finite() || !limit.im.is_finite() || last > first + 1e-12 * scale {
        return Err(Error::NonConvergent(format!(
            "extrapolation corrections grow from {first:.3e} to {last:.3e}"
        )));
    }
    Ok(LimitReport { limit, values, corrections, variable })
}

/// lim Q(Im R(t), target) for kind R, or lim Q(Im(R_i(t)/log t), target)
/// for kind R_i, by polynomial extrapolation in |t| or 1/log|t|.
pub fn limit_of_pairing(
    nf: &NormalFunctionModel,
    target: Target,
    frame: &Frame,
    eta_tails: &EtaTails,
    ts: &[Complex64],
) -> Result<LimitReport> {
    check_sequence(ts)?;
    let mut values = Vec::with_capacity(ts.len());
    for &t in ts {
        let im = im_part(&nf.paired_vector(t, frame)?, t, frame)?;
        let tv = match target {
            Target::Eta => eta_at(t, frame, eta_tails)?.0,
            Target::D(j) => frame.basis_vector(frame.d_index(j)?),
        };
        values.push(pair(&im, &tv, frame)?);
    }
    let (h, var) = match nf.kind {
        ModelKind::R => (ts.iter().map(|t| t.norm()).collect(), "|t|"),
        ModelKind::Ri(_) => (ts.iter().map(|t| 1.0 / t.norm().ln()).collect(), "1/log|t|"),
    };
    extrapolate(values, h, var)
}

#[derive(Clone, Debug)]
pub struct IndependenceReport {
    /// Rows: R, R_1..R_K. Columns: η, d_1..d_K.
    pub matrix: Vec<Vec<Complex64>>,
    pub det: Complex64,
    pub l_value: f64,
    pub independent: bool,
    pub t_sequence: Vec<Complex64>,
}

/// Determinant by LU with partial pivoting.
pub fn complex_det(m: &[Vec<Complex64>]) -> Complex64 {
    let n = m.len();
    let mut a: Vec<Vec<Complex64>> = m.to_vec();
    let mut det = Complex64::new(1.0, 0.0);
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].norm().total_cmp(&a[j][c].norm())).expect("rows");
        if a[p][c] == Complex64::zero() {
            return Complex64::zero();
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for i in c + 1..n {
            let f = a[i][c] / a[c][c];
            for j in c..n {
                let v = a[c][j];
                a[i][j] -= f * v;
            }
        }
    }
    det
}

/// The (1+K)×(1+K) matrix of limits of Q(Im R, ·) and Q(Im(R_i/log t), ·)
/// against η and the d_j. `models` is R followed by R_1..R_K.
pub fn independence_matrix(
    frame: &Frame,
    l_value: f64,
    models: &[NormalFunctionModel],
    eta_tails: &EtaTails,
    ts: &[Complex64],
) -> Result<IndependenceReport> {
    if l_value == 0.0 || !l_value.is_finite() {
        return Err(Error::ZeroLimit);
    }
    let k = frame.dk();
    if models.len() != k + 1 {
        return Err(Error::DimensionMismatch { expected: k + 1, got: models.len() });
    }
    let want = std::iter::once(ModelKind::R).chain((1..=k).map(ModelKind::Ri));
    for (m, w) in models.iter().zip(want) {
        if m.kind != w {
            return Err(Error::Malformed(format!("expected model {w:?}, got {:?}", m.kind)));
        }
    }
    let targets: Vec<Target> = std::iter::once(Target::Eta).chain((1..=k).map(Target::D)).collect();
    let mut matrix = Vec::with_capacity(k + 1);
    for m in models {
        let row = targets
            .iter()
            .map(|&tg| limit_of_pairing(m, tg, frame, eta_tails, ts).map(|r| r.limit))
            .collect::<Result<Vec<_>>>()?;
        matrix.push(row);
    }
    let det = complex_det(&matrix);
    Ok(IndependenceReport {
        independent: det.norm() > 1e-6 * l_value.abs().max(1.0),
        matrix,
        det,
        l_value,
        t_sequence: ts.to_vec(),
    })
}

/// R, R_1..R_K with zero tails (`seed` = None) or seeded random tails, and
/// the matching η tails.
pub fn standard_models(dk: usize, l_value: f64, seed: Option<u64>) -> (Vec<NormalFunctionModel>, EtaTails) {
    let kinds = std::iter::once(ModelKind::R).chain((1..=dk).map(ModelKind::Ri));
    match seed {
        None => (
            kinds.map(|k| NormalFunctionModel::zero_tails(k, dk, l_value)).collect(),
            EtaTails::zero(dk),
        ),
        Some(s) => (
            kinds.map(|k| NormalFunctionModel::random_tails(k, dk, l_value, s)).collect(),
            EtaTails::random(dk, s),
        ),
    }
}

/// Smallest k with m^k = 0, if m is nilpotent.
pub fn nilpotency_index(m: &QMatrix) -> Option<usize> {
    let n = m.rows();
    let mut p = QMatrix::identity(n);
    for k in 1..=n {
        let mut next = QMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                next[(i, j)] = (0..n)
                    .filter(|&l| !p[(i, l)].is_zero() && !m[(l, j)].is_zero())
                    .map(|l| &p[(i, l)] * &m[(l, j)])
                    .sum();
            }
        }
        p = next;
        if (0..n).all(|i| p.row(i).iter().all(Zero::is_zero)) {
            return Some(k);
        }
    }
    None
}

/// Ker N as exact vectors.
pub fn monodromy_kernel(frame: &Frame) -> Vec<Vec<Rational>> {
    kernel_basis(&frame.monodromy())
}
