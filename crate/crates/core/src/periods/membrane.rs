use std::f64::consts::PI;

use num::complex::Complex64;

use super::dilog::{clog, dilog, unsign_zero};
use super::quad::{integrate, integrate_2d, QuadOptions};
use crate::arrangement::{Arrangement, FormSel};
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Paths closer than this to a singular point are rejected.
pub const PATH_CLEARANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Segment {
    pub z0: Complex64,
    pub z1: Complex64,
}

impl Segment {
    pub fn new(z0: Complex64, z1: Complex64) -> Result<Self> {
        if z0 == z1 {
            return Err(Error::Malformed("segment with equal endpoints".into()));
        }
        Ok(Segment { z0, z1 })
    }

    pub fn at(&self, s: f64) -> Complex64 {
        self.z0 + (self.z1 - self.z0) * s
    }

    /// Distance from p, and the parameter of the closest point.
    pub fn distance(&self, p: Complex64) -> (f64, f64) {
        let d = self.z1 - self.z0;
        let s = (((p - self.z0) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
        ((self.at(s) - p).norm(), s)
    }
}

/// Li₂ at w1, continued from the principal value at w0 along the straight
/// path between them.
fn dilog_continued(w0: Complex64, w1: Complex64) -> Complex64 {
    let v = dilog(w1);
    let (w0, w1) = (unsign_zero(w0), unsign_zero(w1));
    let up0 = w0.im >= 0.0;
    let up1 = w1.im >= 0.0;
    if up0 == up1 {
        return v;
    }
    let s = w0.im / (w0.im - w1.im);
    let x = w0.re + s * (w1.re - w0.re);
    if x <= 1.0 {
        return v;
    }
    let jump = 2.0 * PI * I * clog(w1);
    if up0 {
        v + jump
    } else {
        v - jump
    }
}

/// The branch of log(1 − w) that pairs with the principal Li₂(w), including
/// the upper-side convention on the cut.
fn log_one_minus(w: Complex64) -> Complex64 {
    let w = unsign_zero(w);
    if w.im == 0.0 && w.re > 1.0 {
        Complex64::new((w.re - 1.0).ln(), -PI)
    } else {
        clog(Complex64::new(1.0, 0.0) - w)
    }
}

/// −Li₂(−(b/a)z) + log z·(log(a+bz) − log(1+(b/a)z)), all principal.
pub fn log_antiderivative(a: Complex64, b: Complex64, z: Complex64) -> Complex64 {
    let c = b / a;
    let one = Complex64::new(1.0, 0.0);
    -dilog(-c * z) + clog(z) * (clog(a + b * z) - clog(one + c * z))
}

fn check_path(a: Complex64, b: Complex64, seg: &Segment) -> Result<()> {
    let (d0, s0) = seg.distance(Complex64::new(0.0, 0.0));
    if d0 <= PATH_CLEARANCE {
        return Err(Error::Singularity(format!("segment meets z = 0 near s = {s0:.6}")));
    }
    if b != Complex64::new(0.0, 0.0) {
        let (d1, s1) = seg.distance(-a / b);
        if d1 <= PATH_CLEARANCE {
            return Err(Error::Singularity(format!("segment meets the zero of a + bz near s = {s1:.6}")));
        }
    } else if a == Complex64::new(0.0, 0.0) {
        return Err(Error::Singularity("a = b = 0".into()));
    }
    Ok(())
}

/// ∫_seg log(a+bz)/z dz with log(a+bz) starting on the branch `start_log` at
/// z0 and continued along the segment. Returns the integral and the branch
/// value at z1.
pub fn log_line_integral_from(
    a: Complex64,
    b: Complex64,
    seg: &Segment,
    start_log: Complex64,
) -> Result<(Complex64, Complex64)> {
    check_path(a, b, seg)?;
    let (z0, z1) = (seg.z0, seg.z1);
    let dlogz = clog(z1 / z0);
    let end_log = start_log + clog((a + b * z1) / (a + b * z0));
    if a == Complex64::new(0.0, 0.0) {
        return Ok((0.5 * (end_log * end_log - start_log * start_log), end_log));
    }
    let c = b / a;
    let (w0, w1) = (-c * z0, -c * z1);
    let k = start_log - log_one_minus(w0);
    let value = -(dilog_continued(w0, w1) - dilog(w0)) + k * dlogz;
    Ok((value, end_log))
}

/// ∫_seg log(a+bz)/z dz, starting from the principal log(a + b·z0).
pub fn log_line_integral(a: Complex64, b: Complex64, seg: &Segment) -> Result<Complex64> {
    let start = clog(a + b * seg.z0);
    log_line_integral_from(a, b, seg, start).map(|r| r.0)
}

/// The same integral by adaptive quadrature, with the logarithm continued
/// along the segment.
pub fn log_line_integral_quadrature(
    a: Complex64,
    b: Complex64,
    seg: &Segment,
    opts: QuadOptions,
) -> Result<Complex64> {
    check_path(a, b, seg)?;
    let w0 = a + b * seg.z0;
    let l0 = clog(w0);
    let dz = seg.z1 - seg.z0;
    integrate(|s| (l0 + clog((a + b * seg.at(s)) / w0)) / seg.at(s) * dz, opts)
}

/// y(s) = (α + βs)/(γ + δs), s ∈ [0, 1].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mobius {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
    pub delta: Complex64,
}

impl Mobius {
    pub fn straight(y0: Complex64, y1: Complex64) -> Self {
        Mobius { alpha: y0, beta: y1 - y0, gamma: Complex64::new(1.0, 0.0), delta: Complex64::new(0.0, 0.0) }
    }

    pub fn at(&self, s: f64) -> Complex64 {
        (self.alpha + self.beta * s) / (self.gamma + self.delta * s)
    }

    pub fn derivative(&self, s: f64) -> Complex64 {
        let den = self.gamma + self.delta * s;
        (self.beta * self.gamma - self.alpha * self.delta) / (den * den)
    }

    fn reversed(&self) -> Self {
        // s ↦ 1 − s
        Mobius {
            alpha: self.alpha + self.beta,
            beta: -self.beta,
            gamma: self.gamma + self.delta,
            delta: -self.delta,
        }
    }
}

/// A path y(s) on the line x = a + b·y.
#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub label: String,
    pub a: Complex64,
    pub b: Complex64,
    pub path: Mobius,
}

impl Edge {
    pub fn point(&self, s: f64) -> (Complex64, Complex64) {
        let y = self.path.at(s);
        (self.a + self.b * y, y)
    }

    pub fn tangent(&self, s: f64) -> (Complex64, Complex64) {
        let dy = self.path.derivative(s);
        (self.b * dy, dy)
    }
}

/// A closed boundary loop of a 2-chain in the chart, as consecutive edges.
#[derive(Clone, Debug, PartialEq)]
pub struct Membrane {
    pub edges: Vec<Edge>,
}

fn close(p: (Complex64, Complex64), q: (Complex64, Complex64)) -> bool {
    (p.0 - q.0).norm() < 1e-9 && (p.1 - q.1).norm() < 1e-9
}

impl Membrane {
    pub fn new(edges: Vec<Edge>) -> Result<Self> {
        if edges.len() < 2 {
            return Err(Error::DegenerateMembrane("fewer than two edges".into()));
        }
        for (k, e) in edges.iter().enumerate() {
            let next = &edges[(k + 1) % edges.len()];
            if close(e.point(0.0), e.point(1.0)) {
                return Err(Error::DegenerateMembrane(format!("edge {} has equal endpoints", e.label)));
            }
            if !close(e.point(1.0), next.point(0.0)) {
                return Err(Error::DegenerateMembrane(format!("edge {} does not meet {}", e.label, next.label)));
            }
        }
        Ok(Membrane { edges })
    }

    /// The triangle with straight edges (straight in y, on the lines through
    /// consecutive vertices). Vertices are (x, y).
    pub fn from_vertices(v: [(Complex64, Complex64); 3]) -> Result<Self> {
        let mut edges = Vec::with_capacity(3);
        for k in 0..3 {
            let (p, q) = (v[k], v[(k + 1) % 3]);
            if close(p, q) {
                return Err(Error::DegenerateMembrane(format!("vertices {k} and {} coincide", (k + 1) % 3)));
            }
            if (q.1 - p.1).norm() < 1e-12 {
                return Err(Error::DegenerateMembrane(format!("edge {k} is not a graph over y")));
            }
            let b = (q.0 - p.0) / (q.1 - p.1);
            edges.push(Edge { label: format!("v{k}v{}", (k + 1) % 3), a: p.0 - b * p.1, b, path: Mobius::straight(p.1, q.1) });
        }
        Membrane::new(edges)
    }

    /// The boundary chain T of δ_{i,lmn} on the plane L_i: on each line
    /// L_i ∩ M_β the arc where ψ = M_σβ/M_σ²β is real and ≤ 0, run from the
    /// pole of ψ to its zero, with σ = (l m n).
    pub fn klm_chain(arr: &Arrangement, i: usize, l: usize, m: usize, n: usize) -> Result<Self> {
        if !(l < m && m < n) {
            return Err(Error::BadOrdering(format!("need l < m < n, got ({l}, {m}, {n})")));
        }
        let mut edges = Vec::with_capacity(3);
        for (beta, s1, s2) in [(l, m, n), (m, n, l), (n, l, m)] {
            let (a, b) = arr.chart_line(i, beta)?;
            let (a, b) = (a.embed(), b.embed());
            let on_line = |sel: FormSel| -> Result<(Complex64, Complex64)> {
                let [rx, ry, r1] = arr.restricted_form(i, sel)?.map(|c| c.embed());
                Ok((rx * a + r1, rx * b + ry))
            };
            let (p0, q0) = on_line(FormSel::M(s1))?;
            let (r0, t0) = on_line(FormSel::M(s2))?;
            // ψ(y) = −τ, τ = (1 − s)/s: y = −(p0·s + r0·(1 − s))/(q0·s + t0·(1 − s))
            let path = Mobius { alpha: -r0, beta: r0 - p0, gamma: t0, delta: q0 - t0 };
            if path.delta != Complex64::new(0.0, 0.0) {
                let s_inf = -path.gamma / path.delta;
                if s_inf.im.abs() < 1e-12 && (0.0..=1.0).contains(&s_inf.re) {
                    return Err(Error::ChartFailure(format!("arc on M{beta} crosses Z = 0")));
                }
            }
            edges.push(Edge { label: format!("M{beta}"), a, b, path });
        }
        Membrane::new(edges)
    }

    /// Opposite orientation.
    pub fn reversed(&self) -> Self {
        let edges = self
            .edges
            .iter()
            .rev()
            .map(|e| Edge { label: e.label.clone(), a: e.a, b: e.b, path: e.path.reversed() })
            .collect();
        Membrane { edges }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct MembraneIntegral {
    pub value: Complex64,
    /// Contribution of each edge, in order.
    pub edge_terms: Vec<(String, Complex64)>,
}

fn chord_points(e: &Edge) -> Vec<f64> {
    fn refine(e: &Edge, s0: f64, s1: f64, depth: u32, out: &mut Vec<f64>) {
        let (y0, y1) = (e.path.at(s0), e.path.at(s1));
        let mid = e.path.at(0.5 * (s0 + s1));
        let dev = (mid - 0.5 * (y0 + y1)).norm();
        let mut clearance = f64::INFINITY;
        if y0 != y1 {
            let seg = Segment { z0: y0, z1: y1 };
            clearance = seg.distance(Complex64::new(0.0, 0.0)).0;
            if e.b != Complex64::new(0.0, 0.0) {
                clearance = clearance.min(seg.distance(-e.a / e.b).0);
            }
        }
        if depth < 40 && dev > 0.05 * clearance.min(1.0) {
            let m = 0.5 * (s0 + s1);
            refine(e, s0, m, depth + 1, out);
            refine(e, m, s1, depth + 1, out);
        } else {
            out.push(s1);
        }
    }
    let mut out = vec![0.0];
    let n = 16;
    for k in 0..n {
        refine(e, k as f64 / n as f64, (k + 1) as f64 / n as f64, 0, &mut out);
    }
    out
}

/// ∫_Γ dx/x ∧ dy/y for a 2-chain Γ with the given boundary, computed as
/// ∮_∂Γ log x · dy/y by Stokes. Each edge lies on a line x = a + b·y, so the
/// boundary integral is a chain of log line integrals in y, with the branch
/// of log x carried continuously around the loop. Fails when the loop winds
/// around x = 0 or y = 0, since no membrane then avoids the axes.
pub fn membrane_integral(m: &Membrane) -> Result<MembraneIntegral> {
    let (x0, _) = m.edges[0].point(0.0);
    let start_log = clog(x0);
    let mut log_x = start_log;
    let mut y_turn = Complex64::new(0.0, 0.0);
    let mut total = Complex64::new(0.0, 0.0);
    let mut edge_terms = Vec::with_capacity(m.edges.len());
    for e in &m.edges {
        let mut acc = Complex64::new(0.0, 0.0);
        let pts = chord_points(e);
        for w in pts.windows(2) {
            let (y0, y1) = (e.path.at(w[0]), e.path.at(w[1]));
            if y0 == y1 {
                continue;
            }
            let seg = Segment::new(y0, y1)?;
            let (v, end) = log_line_integral_from(e.a, e.b, &seg, log_x)
                .map_err(|err| Error::Singularity(format!("edge {}: {err}", e.label)))?;
            acc += v;
            log_x = end;
            y_turn += clog(y1 / y0);
        }
        total += acc;
        edge_terms.push((e.label.clone(), acc));
    }
    let x_wind = ((log_x - start_log) / (2.0 * PI * I)).re.round() as i64;
    let y_wind = (y_turn / (2.0 * PI * I)).re.round() as i64;
    if x_wind != 0 || y_wind != 0 {
        return Err(Error::Singularity(format!(
            "boundary winds {x_wind} times around x = 0 and {y_wind} times around y = 0"
        )));
    }
    Ok(MembraneIntegral { value: total, edge_terms })
}

/// Continuous arguments and the mean of log|·| over samples of a closed loop.
fn arg_range(vals: &[Complex64]) -> (f64, f64, f64) {
    let mut arg = vals[0].arg();
    let (mut lo, mut hi) = (arg, arg);
    let mut log_mod = 0.0;
    for w in vals.windows(2) {
        arg += (w[1] / w[0]).arg();
        lo = lo.min(arg);
        hi = hi.max(arg);
    }
    for v in vals {
        log_mod += v.norm().ln();
    }
    (lo, hi, log_mod / vals.len() as f64)
}

/// Independent oracle: integrates dx/x ∧ dy/y directly over the cone from an
/// apex G to the boundary loop, by tensor Gauss–Kronrod on each edge's
/// patch (u, s) ↦ G + u·(E(s) − G). The apex takes, in each coordinate, the
/// middle of the loop's argument range, so every ray from G to the loop
/// avoids x = 0 and y = 0.
pub fn membrane_quadrature(m: &Membrane, opts: QuadOptions) -> Result<Complex64> {
    let samples = 512;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for e in &m.edges {
        for k in 0..samples {
            let (x, y) = e.point(k as f64 / samples as f64);
            xs.push(x);
            ys.push(y);
        }
    }
    xs.push(xs[0]);
    ys.push(ys[0]);
    let mut apex = [Complex64::new(0.0, 0.0); 2];
    for (slot, vals, name) in [(0, &xs, "x"), (1, &ys, "y")] {
        if vals.iter().any(|v| v.norm() <= PATH_CLEARANCE) {
            return Err(Error::Singularity(format!("boundary meets {name} = 0")));
        }
        let (lo, hi, lm) = arg_range(vals);
        if hi - lo >= 2.0 * PI - 1e-9 {
            return Err(Error::Singularity(format!("boundary surrounds {name} = 0")));
        }
        apex[slot] = Complex64::from_polar(lm.exp(), 0.5 * (lo + hi));
    }
    let [gx, gy] = apex;
    let mut total = Complex64::new(0.0, 0.0);
    for e in &m.edges {
        total += integrate_2d(
            |u, s| {
                let (ex, ey) = e.point(s);
                let (tx, ty) = e.tangent(s);
                let x = gx + (ex - gx) * u;
                let y = gy + (ey - gy) * u;
                let (xu, yu) = (ex - gx, ey - gy);
                let (xs, ys) = (tx * u, ty * u);
                (xu * ys - xs * yu) / (x * y)
            },
            opts,
        )?;
    }
    Ok(total)
}
