//! The higher Chow cycles γ_{ijk,l}, λ_{il}, δ_{i,lmn}: boundaries, the
//! singularity invariant at t = 0 derived from the local blow-up residue
//! rule, coordinates in the kernel basis B, and the spanning check.

use std::collections::BTreeMap;
use std::fmt;

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::arrangement::FormSel;
use crate::degeneration::{
    basis_labels, expected_kernel_dimension, hodge_kernel_basis, pairs, reduce, w_class,
    BasisLabel, GeneratorIndex, H2Class, RawClass,
};
use crate::error::{Error, Result};
use crate::exactlin::{format_rational, in_span, in_span_many, rank, rat, Matrix, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Gamma,
    Lambda,
    Delta,
}

/// γ(i<j<k; l), λ(i; l), δ(i; l<m<n).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CycleSpec {
    Gamma { i: usize, j: usize, k: usize, l: usize },
    Lambda { i: usize, l: usize },
    Delta { i: usize, l: usize, m: usize, n: usize },
}

impl CycleSpec {
    pub fn kind(&self) -> Kind {
        match self {
            CycleSpec::Gamma { .. } => Kind::Gamma,
            CycleSpec::Lambda { .. } => Kind::Lambda,
            CycleSpec::Delta { .. } => Kind::Delta,
        }
    }

    pub fn indices(&self) -> Vec<usize> {
        match *self {
            CycleSpec::Gamma { i, j, k, l } => vec![i, j, k, l],
            CycleSpec::Lambda { i, l } => vec![i, l],
            CycleSpec::Delta { i, l, m, n } => vec![i, l, m, n],
        }
    }

    pub fn from_parts(kind: Kind, idx: &[usize]) -> Result<Self> {
        match (kind, idx) {
            (Kind::Gamma, &[i, j, k, l]) => Ok(CycleSpec::Gamma { i, j, k, l }),
            (Kind::Lambda, &[i, l]) => Ok(CycleSpec::Lambda { i, l }),
            (Kind::Delta, &[i, l, m, n]) => Ok(CycleSpec::Delta { i, l, m, n }),
            _ => Err(Error::Malformed(format!("{kind:?} with indices {idx:?}"))),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({"kind": self.kind(), "indices": self.indices()})
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct Raw {
            kind: Kind,
            indices: Vec<usize>,
        }
        let r: Raw = serde_json::from_value(v.clone()).map_err(|e| Error::Malformed(e.to_string()))?;
        Self::from_parts(r.kind, &r.indices)
    }
}

impl fmt::Display for CycleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CycleSpec::Gamma { i, j, k, l } => write!(f, "γ_{{{i}{j}{k},{l}}}"),
            CycleSpec::Lambda { i, l } => write!(f, "λ_{{{i}{l}}}"),
            CycleSpec::Delta { i, l, m, n } => write!(f, "δ_{{{i},{l}{m}{n}}}"),
        }
    }
}

/// The rational function carried by a precycle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Function {
    Ratio { zero: FormSel, pole: FormSel },
    /// The family parameter t, constant along each fiber.
    Parameter,
}

/// A function on the line L_i ∩ M_l, with a rational weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Precycle {
    /// (i, l) for L_i ∩ M_l.
    pub support: (usize, usize),
    pub function: Function,
    pub weight: Rational,
}

impl Precycle {
    /// The same data with L and M exchanged.
    fn swapped(&self) -> Precycle {
        let function = match self.function {
            Function::Ratio { zero, pole } => Function::Ratio { zero: zero.swapped(), pole: pole.swapped() },
            Function::Parameter => Function::Parameter,
        };
        Precycle { support: (self.support.1, self.support.0), function, weight: self.weight.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HigherCycle {
    pub d: usize,
    pub spec: CycleSpec,
    pub terms: Vec<Precycle>,
}

fn in_range(d: usize, xs: &[usize]) -> bool {
    xs.iter().all(|x| (1..=d).contains(x))
}

pub fn build_cycle(d: usize, spec: CycleSpec) -> Result<HigherCycle> {
    let oor = || Error::IndexOutOfRange(format!("{spec} with d = {d}"));
    let terms = match spec {
        CycleSpec::Gamma { i, j, k, l } => {
            if !(i < j && j < k) {
                return Err(Error::BadOrdering(format!("{spec}: need i < j < k")));
            }
            if !in_range(d, &[i, j, k, l]) {
                return Err(oor());
            }
            let sigma = [(i, j, k), (j, k, i), (k, i, j)];
            sigma
                .iter()
                .map(|&(a, s1, s2)| Precycle {
                    support: (a, l),
                    function: Function::Ratio { zero: FormSel::L(s1), pole: FormSel::L(s2) },
                    weight: rat(1),
                })
                .collect()
        }
        CycleSpec::Delta { i, l, m, n } => {
            if !(l < m && m < n) {
                return Err(Error::BadOrdering(format!("{spec}: need l < m < n")));
            }
            if !in_range(d, &[i, l, m, n]) {
                return Err(oor());
            }
            let sigma = [(l, m, n), (m, n, l), (n, l, m)];
            sigma
                .iter()
                .map(|&(b, s1, s2)| Precycle {
                    support: (i, b),
                    function: Function::Ratio { zero: FormSel::M(s1), pole: FormSel::M(s2) },
                    weight: rat(1),
                })
                .collect()
        }
        CycleSpec::Lambda { i, l } => {
            if !in_range(d, &[i, l]) {
                return Err(oor());
            }
            vec![Precycle { support: (i, l), function: Function::Parameter, weight: rat(1) }]
        }
    };
    Ok(HigherCycle { d, spec, terms })
}

/// A point on some line L_i ∩ M_l where a form of the arrangement vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DivPoint {
    /// p^{ij}_l = L_i ∩ L_j ∩ M_l, i < j.
    Node { i: usize, j: usize, l: usize },
    /// L_i ∩ M_l ∩ M_m, l < m.
    Dual { i: usize, l: usize, m: usize },
}

impl fmt::Display for DivPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DivPoint::Node { i, j, l } => write!(f, "p^{i}{j}_{l}"),
            DivPoint::Dual { i, l, m } => write!(f, "q^{l}{m}_{i}"),
        }
    }
}

fn point_on(support: (usize, usize), form: FormSel) -> DivPoint {
    let (a, l) = support;
    match form {
        FormSel::L(b) => DivPoint::Node { i: a.min(b), j: a.max(b), l },
        FormSel::M(m) => DivPoint::Dual { i: a, l: l.min(m), m: l.max(m) },
    }
}

/// Exact formal Q-combination of points.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DivisorOnLines {
    pub points: BTreeMap<DivPoint, Rational>,
}

impl DivisorOnLines {
    fn add(&mut self, p: DivPoint, c: Rational) {
        let e = self.points.entry(p).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.points.remove(&p);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.points.is_empty()
    }
}

impl fmt::Display for DivisorOnLines {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.points.is_empty() {
            return write!(f, "0");
        }
        let t: Vec<String> = self.points.iter().map(|(p, c)| format!("({c})[{p}]")).collect();
        write!(f, "{}", t.join(" + "))
    }
}

pub fn boundary_of_terms(terms: &[Precycle]) -> DivisorOnLines {
    let mut div = DivisorOnLines::default();
    for t in terms {
        if let Function::Ratio { zero, pole } = t.function {
            div.add(point_on(t.support, zero), t.weight.clone());
            div.add(point_on(t.support, pole), -t.weight.clone());
        }
    }
    div
}

pub fn boundary_divisor(c: &HigherCycle) -> DivisorOnLines {
    boundary_of_terms(&c.terms)
}

/// Local contribution of one zero (sign +1) or pole (sign −1) of a function
/// on L_α ∩ M_l to the t = 0 invariant: an exceptional class and a marker
/// for the component [p × P¹] that has to cancel globally.
struct Residue {
    class: RawClass,
    markers: DivisorOnLines,
}

/// Blow-up rule at a zero of L_β on L_α ∩ M_l. The exceptional curve over
/// p^{αβ}_l lands on the component with the larger L-index, so only the
/// smaller index carries it; both sides see the p-line marker.
fn residue_of(support: (usize, usize), form: FormSel, sign: &Rational, r: &mut Residue) {
    let (a, l) = support;
    let p = point_on(support, form);
    r.markers.add(p, sign.clone());
    if let FormSel::L(b) = form {
        if a < b {
            let e = r.class.entry(GeneratorIndex::exc(a, b, l)).or_insert_with(Rational::zero);
            *e += sign;
        }
    }
}

/// Class at t = 0 of the strict transform of L_i ∩ M_l inside L̃_i: it loses
/// the exceptional curves blown up onto L̃_i and meets those blown up onto
/// the other components.
fn line_class(d: usize, i: usize, l: usize) -> RawClass {
    let mut c = RawClass::new();
    c.insert(GeneratorIndex::Line(i), rat(1));
    for i2 in 1..=d {
        if i2 < i {
            c.insert(GeneratorIndex::exc(i2, i, l), rat(-1));
        } else if i2 > i {
            c.insert(GeneratorIndex::exc(i, i2, l), rat(1));
        }
    }
    c
}

/// Which special fiber.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fiber {
    Zero,
    Infinity,
}

fn singularity_of_terms(d: usize, terms: &[Precycle], label: &str) -> Result<H2Class> {
    reduce(d, &raw_singularity(d, terms, label)?)
}

/// The residue sum before the relations are applied.
fn raw_singularity(d: usize, terms: &[Precycle], label: &str) -> Result<RawClass> {
    let mut r = Residue { class: RawClass::new(), markers: DivisorOnLines::default() };
    for t in terms {
        match t.function {
            Function::Ratio { zero, pole } => {
                residue_of(t.support, zero, &t.weight, &mut r);
                residue_of(t.support, pole, &-t.weight.clone(), &mut r);
            }
            Function::Parameter => {
                let (i, l) = t.support;
                for (g, c) in line_class(d, i, l) {
                    let e = r.class.entry(g).or_insert_with(Rational::zero);
                    *e += c * &t.weight;
                }
            }
        }
    }
    if !r.markers.is_zero() {
        return Err(Error::MarkerMismatch(format!("{label}: {}", r.markers)));
    }
    r.class.retain(|_, c| !c.is_zero());
    Ok(r.class)
}

pub fn singularity_at_zero(c: &HigherCycle) -> Result<H2Class> {
    singularity_of_terms(c.d, &c.terms, &c.spec.to_string())
}

/// At t = ∞ the roles of L and M are exchanged; the same rules are applied
/// to the relabeled terms (a convention, see the README).
pub fn singularity_at(c: &HigherCycle, fiber: Fiber) -> Result<H2Class> {
    match fiber {
        Fiber::Zero => singularity_at_zero(c),
        Fiber::Infinity => {
            let swapped: Vec<Precycle> = c.terms.iter().map(Precycle::swapped).collect();
            singularity_of_terms(c.d, &swapped, &format!("{} at ∞", c.spec))
        }
    }
}

/// Singularity of a weighted combination of cycles.
pub fn singularity_of_combination(d: usize, combo: &[(CycleSpec, i64)]) -> Result<H2Class> {
    let mut acc = H2Class::zero(d);
    for (spec, w) in combo {
        let s = singularity_at_zero(&build_cycle(d, *spec)?)?;
        acc = acc.add_scaled(&s, &rat(*w));
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InB {
    Coefficients(Vec<Rational>),
    NotInSpan { residual: H2Class },
}

/// Coordinates of `x` in the basis B (ordered as `basis_labels`).
pub fn express_in_b(x: &H2Class, d: usize) -> Result<InB> {
    if x.d != d {
        return Err(Error::DimensionMismatch { expected: d, got: x.d });
    }
    express_in_basis(&hodge_kernel_basis(d)?, x)
}

/// As `express_in_b` with B already computed. Outside the span, the residual
/// is `x` minus the part carried by the pivot coordinates.
pub fn express_in_basis(basis: &[H2Class], x: &H2Class) -> Result<InB> {
    let vecs: Vec<_> = basis.iter().map(H2Class::to_vector).collect();
    let target = x.to_vector();
    if let Some(c) = in_span(&vecs, &target)? {
        return Ok(InB::Coefficients(c));
    }
    let n = vecs.len();
    let mut cols = vecs;
    cols.push(target.clone());
    let (r, piv) = Matrix::from_columns(&cols, target.len())?.rref();
    let mut residual = x.clone();
    for (row, &pc) in piv.iter().enumerate() {
        if pc < n {
            residual = residual.add_scaled(&basis[pc], &-r[(row, n)].clone());
        }
    }
    Ok(InB::NotInSpan { residual })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Gammas,
    Lambdas,
    Both,
    Deltas,
}

pub fn family_members(d: usize, family: Family) -> Vec<CycleSpec> {
    let mut v = Vec::new();
    let gammas = |v: &mut Vec<CycleSpec>| {
        for i in 1..=d {
            for j in i + 1..=d {
                for k in j + 1..=d {
                    for l in 1..=d {
                        v.push(CycleSpec::Gamma { i, j, k, l });
                    }
                }
            }
        }
    };
    let lambdas = |v: &mut Vec<CycleSpec>| {
        for i in 1..=d {
            for l in 1..=d {
                v.push(CycleSpec::Lambda { i, l });
            }
        }
    };
    match family {
        Family::Gammas => gammas(&mut v),
        Family::Lambdas => lambdas(&mut v),
        Family::Both => {
            gammas(&mut v);
            lambdas(&mut v);
        }
        Family::Deltas => {
            for i in 1..=d {
                for l in 1..=d {
                    for m in l + 1..=d {
                        for n in m + 1..=d {
                            v.push(CycleSpec::Delta { i, l, m, n });
                        }
                    }
                }
            }
        }
    }
    v
}

/// Both sides of the spanning identity for one (i, j, l).
#[derive(Clone, Debug)]
pub struct CombinationCheck {
    pub i: usize,
    pub j: usize,
    pub l: usize,
    /// w^{ij}_l = Σ_{l'} (e^{ij}_l − e^{ij}_{l'}).
    pub target: H2Class,
    /// sing₀(λ_jl − λ_il − Σ_{k<i} γ_{kij,l} + Σ_{i<k<j} γ_{ikj,l} − Σ_{j<k} γ_{ijk,l}).
    pub direct: H2Class,
    /// sing₀(λ_il − λ_jl + Σ_{k<i} γ_{kij,l} − Σ_{i<k<j} γ_{ikj,l} + Σ_{j<k} γ_{ijk,l}).
    pub reversed: H2Class,
}

impl CombinationCheck {
    pub fn direct_matches(&self) -> bool {
        self.direct == self.target
    }

    pub fn reversed_matches(&self) -> bool {
        self.reversed == self.target
    }
}

/// The combination λ_jl − λ_il − Σ_{k<i} γ_{kij,l} + Σ_{i<k<j} γ_{ikj,l} − Σ_{j<k} γ_{ijk,l}
/// scaled by `sign`.
pub fn spanning_combination(d: usize, i: usize, j: usize, l: usize, sign: i64) -> Vec<(CycleSpec, i64)> {
    let mut c = vec![(CycleSpec::Lambda { i: j, l }, sign), (CycleSpec::Lambda { i, l }, -sign)];
    for k in 1..=d {
        if k < i {
            c.push((CycleSpec::Gamma { i: k, j: i, k: j, l }, -sign));
        } else if i < k && k < j {
            c.push((CycleSpec::Gamma { i, j: k, k: j, l }, sign));
        } else if j < k {
            c.push((CycleSpec::Gamma { i, j, k, l }, -sign));
        }
    }
    c
}

pub fn combination_check(d: usize, i: usize, j: usize, l: usize) -> Result<CombinationCheck> {
    if !(i < j && j <= d && (1..=d).contains(&l)) {
        return Err(Error::IndexOutOfRange(format!("({i}, {j}; {l}) with d = {d}")));
    }
    Ok(CombinationCheck {
        i,
        j,
        l,
        target: w_class(d, i, j, l)?,
        direct: singularity_of_combination(d, &spanning_combination(d, i, j, l, 1))?,
        reversed: singularity_of_combination(d, &spanning_combination(d, i, j, l, -1))?,
    })
}

#[derive(Clone, Debug)]
pub struct SpanReport {
    pub d: usize,
    pub rank: usize,
    pub expected: usize,
    pub spanning: bool,
    /// Every (i, j, l) for which the direct combination gives w^{ij}_l.
    pub direct_combination_ok: bool,
    pub reversed_combination_ok: bool,
    pub combinations: Vec<CombinationCheck>,
}

pub fn span_rank(d: usize, family: Family) -> Result<SpanReport> {
    let min = if matches!(family, Family::Lambdas) { 2 } else { 3 };
    if d < min {
        return Err(Error::InvalidDegree { d, min });
    }
    let rows = family_members(d, family)
        .into_iter()
        .map(|s| build_cycle(d, s).and_then(|c| singularity_at_zero(&c)).map(|x| x.to_vector()))
        .collect::<Result<Vec<_>>>()?;
    let n = crate::degeneration::canonical_generators(d).len();
    let r = rank(&Matrix::from_rows(rows, n)?);
    let expected = expected_kernel_dimension(d);
    let mut combinations = Vec::new();
    if matches!(family, Family::Both) {
        for (i, j) in pairs(d) {
            for l in 1..=d {
                combinations.push(combination_check(d, i, j, l)?);
            }
        }
    }
    Ok(SpanReport {
        d,
        rank: r,
        expected,
        spanning: r == expected,
        direct_combination_ok: combinations.iter().all(CombinationCheck::direct_matches),
        reversed_combination_ok: combinations.iter().all(CombinationCheck::reversed_matches),
        combinations,
    })
}

/// An exceptional line P over a blow-up center: the pair of L-indices (or M
/// on the δ side) and the index of the other family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ExceptionalLine {
    pub side: Side,
    pub pair: (usize, usize),
    pub other: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Side {
    L,
    M,
}

impl fmt::Display for ExceptionalLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.pair;
        write!(f, "P{a}{b}")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FormalCycle {
    pub terms: BTreeMap<ExceptionalLine, Rational>,
}

impl FormalCycle {
    pub fn coefficient_sum(&self) -> Rational {
        self.terms.values().fold(Rational::zero(), |a, b| a + b)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let t: Vec<_> = self
            .terms
            .iter()
            .map(|(p, c)| {
                serde_json::json!({
                    "line": p.to_string(), "side": p.side, "pair": [p.pair.0, p.pair.1],
                    "center": p.other, "coeff": format_rational(c),
                })
            })
            .collect();
        serde_json::Value::Array(t)
    }
}

impl fmt::Display for FormalCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        for (k, (p, c)) in self.terms.iter().enumerate() {
            let neg = c < &Rational::zero();
            let mag = if neg { -c.clone() } else { c.clone() };
            if k > 0 {
                s.push_str(if neg { " − " } else { " + " });
            } else if neg {
                s.push('−');
            }
            if mag != rat(1) {
                s.push_str(&format!("{mag}·"));
            }
            s.push_str(&p.to_string());
        }
        write!(f, "{s}")
    }
}

/// Boundary in the threefold: the exceptional classes produced by the
/// residue rule, read as lines P over the blow-up centers.
fn boundary_from_terms(d: usize, terms: &[Precycle], side: Side, label: &str) -> Result<FormalCycle> {
    let mut fc = FormalCycle::default();
    for (g, c) in raw_singularity(d, terms, label)? {
        if let GeneratorIndex::Exc { i, j, l } = g {
            fc.terms.insert(ExceptionalLine { side, pair: (i, j), other: l }, c);
        }
    }
    Ok(fc)
}

/// C_{ijk,l} over the exceptional lines of the L-side blow-up.
pub fn threefold_boundary(d: usize, i: usize, j: usize, k: usize, l: usize) -> Result<FormalCycle> {
    let c = build_cycle(d, CycleSpec::Gamma { i, j, k, l })?;
    boundary_from_terms(d, &c.terms, Side::L, &c.spec.to_string())
}

/// The same construction for δ_{i,lmn}, where L and M exchange roles.
pub fn threefold_boundary_delta(d: usize, i: usize, l: usize, m: usize, n: usize) -> Result<FormalCycle> {
    let c = build_cycle(d, CycleSpec::Delta { i, l, m, n })?;
    let swapped: Vec<Precycle> = c.terms.iter().map(Precycle::swapped).collect();
    boundary_from_terms(d, &swapped, Side::M, &c.spec.to_string())
}

/// `express_in_basis` for many classes at once.
pub fn express_many_in_basis(basis: &[H2Class], xs: &[H2Class]) -> Result<Vec<InB>> {
    let vecs: Vec<_> = basis.iter().map(H2Class::to_vector).collect();
    let targets: Vec<_> = xs.iter().map(H2Class::to_vector).collect();
    in_span_many(&vecs, &targets)?
        .into_iter()
        .zip(xs)
        .map(|(c, x)| match c {
            Some(c) => Ok(InB::Coefficients(c)),
            None => express_in_basis(basis, x),
        })
        .collect()
}

/// Rows of the singularity report.
pub fn report_rows(basis: &[H2Class], d: usize, specs: &[CycleSpec]) -> Result<Vec<serde_json::Value>> {
    let classes = specs
        .iter()
        .map(|s| singularity_at_zero(&build_cycle(d, *s)?))
        .collect::<Result<Vec<_>>>()?;
    let coords = express_many_in_basis(basis, &classes)?;
    Ok(specs
        .iter()
        .zip(classes)
        .zip(coords)
        .map(|((spec, class), c)| {
            let in_b = match c {
                InB::Coefficients(c) => {
                    serde_json::Value::Array(c.iter().map(|x| format_rational(x).into()).collect())
                }
                InB::NotInSpan { residual } => serde_json::json!({"residual": residual.to_json()}),
            };
            serde_json::json!({"cycle": spec.to_json(), "class": class.to_json(), "in_B": in_b})
        })
        .collect())
}

pub fn report_row(basis: &[H2Class], d: usize, spec: CycleSpec) -> Result<serde_json::Value> {
    Ok(report_rows(basis, d, &[spec])?.remove(0))
}

/// Nonzero B-coordinates, labeled.
pub fn labeled_coefficients(d: usize, c: &[Rational]) -> Vec<(BasisLabel, Rational)> {
    basis_labels(d)
        .into_iter()
        .zip(c.iter().cloned())
        .filter(|(_, x)| !x.is_zero())
        .collect()
}

#[cfg(test)]
mod tests;
