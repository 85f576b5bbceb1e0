//! The 2d planes L_i, M_l in P³, their general-position certificate, and the
//! distinguished points used downstream.

use std::fmt;

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{kernel_basis, CycloNumber, Matrix};

/// c_X·X + c_Y·Y + c_Z·Z + c_W·W.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinearForm {
    pub coeffs: [CycloNumber; 4],
}

impl LinearForm {
    pub fn new(coeffs: [CycloNumber; 4]) -> Result<Self> {
        if coeffs.iter().all(Zero::is_zero) {
            return Err(Error::Malformed("linear form with all coefficients zero".into()));
        }
        Ok(LinearForm { coeffs })
    }

    pub fn from_ints(c: [(i64, i64); 4]) -> Result<Self> {
        Self::new(c.map(|(a, b)| CycloNumber::from_ints(a, b)))
    }

    pub fn eval(&self, p: &[CycloNumber; 4]) -> CycloNumber {
        self.coeffs
            .iter()
            .zip(p)
            .fold(CycloNumber::zero(), |acc, (c, x)| &acc + &(c * x))
    }
}

/// Selects one of the forms, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormSel {
    L(usize),
    M(usize),
}

impl FormSel {
    /// L ↔ M.
    pub fn swapped(self) -> Self {
        match self {
            FormSel::L(i) => FormSel::M(i),
            FormSel::M(i) => FormSel::L(i),
        }
    }
}

impl fmt::Display for FormSel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormSel::L(i) => write!(f, "L{i}"),
            FormSel::M(i) => write!(f, "M{i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct P3Point {
    pub coords: [CycloNumber; 4],
}

impl P3Point {
    /// Scales so the last nonzero coordinate is 1.
    pub fn normalized(coords: [CycloNumber; 4]) -> Result<Self> {
        let Some(last) = coords.iter().rev().find(|c| !c.is_zero()).cloned() else {
            return Err(Error::Malformed("zero vector is not a projective point".into()));
        };
        Ok(P3Point { coords: coords.map(|c| &c / &last) })
    }

    /// (X/Z, Y/Z).
    pub fn chart(&self) -> Option<ChartPoint> {
        let [x, y, z, _] = &self.coords;
        if z.is_zero() {
            return None;
        }
        Some(ChartPoint { x: x / z, y: y / z })
    }
}

impl fmt::Display for P3Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = &self.coords;
        write!(f, "[{a} : {b} : {c} : {d}]")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChartPoint {
    pub x: CycloNumber,
    pub y: CycloNumber,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub pairs: usize,
    pub triples: usize,
    pub quadruples: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Arrangement {
    pub d: usize,
    #[serde(rename = "L")]
    pub l: Vec<LinearForm>,
    #[serde(rename = "M")]
    pub m: Vec<LinearForm>,
    #[serde(skip)]
    certified: bool,
}

impl Arrangement {
    pub fn new(l: Vec<LinearForm>, m: Vec<LinearForm>) -> Result<Self> {
        if l.len() != m.len() {
            return Err(Error::DimensionMismatch { expected: l.len(), got: m.len() });
        }
        if l.len() < 2 {
            return Err(Error::InvalidDegree { d: l.len(), min: 2 });
        }
        Ok(Arrangement { d: l.len(), l, m, certified: false })
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    /// Runs the general-position check and records the result.
    pub fn certify(mut self) -> Result<(Self, Certificate)> {
        let cert = validate_general_position(&self)?;
        self.certified = true;
        Ok((self, cert))
    }

    pub fn form(&self, s: FormSel) -> Result<&LinearForm> {
        let (v, i) = match s {
            FormSel::L(i) => (&self.l, i),
            FormSel::M(i) => (&self.m, i),
        };
        if i == 0 || i > v.len() {
            return Err(Error::IndexOutOfRange(format!("{s} with d = {}", self.d)));
        }
        Ok(&v[i - 1])
    }

    pub fn selectors(&self) -> Vec<FormSel> {
        (1..=self.d).map(FormSel::L).chain((1..=self.d).map(FormSel::M)).collect()
    }

    /// The same forms with the roles of L and M exchanged.
    pub fn swapped(&self) -> Self {
        Arrangement { d: self.d, l: self.m.clone(), m: self.l.clone(), certified: self.certified }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("arrangement serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let a: Arrangement = serde_json::from_str(s).map_err(|e| Error::Malformed(e.to_string()))?;
        if a.l.len() != a.d || a.m.len() != a.d {
            return Err(Error::Malformed(format!("d = {} but {} L and {} M forms", a.d, a.l.len(), a.m.len())));
        }
        Arrangement::new(a.l, a.m)
    }

    /// The form `s` restricted to the plane L_i, written in the chart
    /// (x, y) = (X/Z, Y/Z) as r_x·x + r_y·y + r_1. Needs L_i to have a
    /// nonzero W-coefficient so that W can be eliminated.
    pub fn restricted_form(&self, i: usize, s: FormSel) -> Result<[CycloNumber; 3]> {
        let plane = self.form(FormSel::L(i))?;
        let f = self.form(s)?;
        let lw = &plane.coeffs[3];
        if lw.is_zero() {
            return Err(Error::ChartFailure(format!("plane L{i} contains the W direction")));
        }
        let k = &f.coeffs[3] / lw;
        let r = |j: usize| &f.coeffs[j] - &(&k * &plane.coeffs[j]);
        Ok([r(0), r(1), r(2)])
    }

    /// L_i ∩ M_β in the chart as x = a + b·y.
    pub fn chart_line(&self, i: usize, beta: usize) -> Result<(CycloNumber, CycloNumber)> {
        let [rx, ry, r1] = self.restricted_form(i, FormSel::M(beta))?;
        if rx.is_zero() {
            return Err(Error::ChartFailure(format!("L{i} ∩ M{beta} is not a graph over y")));
        }
        Ok((-(&r1 / &rx), -(&ry / &rx)))
    }
}

fn form_matrix(a: &Arrangement, sels: &[FormSel]) -> Result<Matrix<CycloNumber>> {
    let rows = sels
        .iter()
        .map(|&s| a.form(s).map(|f| f.coeffs.to_vec()))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows, 4)
}

fn names(sels: &[FormSel]) -> Vec<String> {
    sels.iter().map(ToString::to_string).collect()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Every pair of forms is a distinct plane, every triple meets in one point,
/// and no four share a point. Reports the first violating subset.
pub fn validate_general_position(a: &Arrangement) -> Result<Certificate> {
    if a.d < 2 {
        return Err(Error::InvalidDegree { d: a.d, min: 2 });
    }
    let sels = a.selectors();
    let mut cert = Certificate { pairs: 0, triples: 0, quadruples: 0 };
    for k in 2..=4 {
        for idx in subsets(sels.len(), k) {
            let sub: Vec<FormSel> = idx.iter().map(|&i| sels[i]).collect();
            let m = form_matrix(a, &sub)?;
            let ok = if k == 4 { !m.determinant()?.is_zero() } else { m.rank() == k };
            if !ok {
                return Err(Error::GeneralPosition(names(&sub)));
            }
            match k {
                2 => cert.pairs += 1,
                3 => cert.triples += 1,
                _ => cert.quadruples += 1,
            }
        }
    }
    Ok(cert)
}

pub fn intersection_point(a: &Arrangement, f1: FormSel, f2: FormSel, f3: FormSel) -> Result<P3Point> {
    let sels = [f1, f2, f3];
    let m = form_matrix(a, &sels)?;
    let k = kernel_basis(&m);
    if k.len() != 1 {
        return Err(Error::DegenerateTriple(names(&sels)));
    }
    let v = k.into_iter().next().expect("one kernel vector");
    P3Point::normalized([v[0].clone(), v[1].clone(), v[2].clone(), v[3].clone()])
}

/// p^{ij}_l = L_i ∩ L_j ∩ M_l.
pub fn node_point(a: &Arrangement, i: usize, j: usize, l: usize) -> Result<P3Point> {
    intersection_point(a, FormSel::L(i), FormSel::L(j), FormSel::M(l))
}

/// The vertices L_i∩M_l∩M_m, L_i∩M_m∩M_n, L_i∩M_l∩M_n of the triangle cut
/// out on the plane L_i, in the chart (X/Z, Y/Z).
pub fn triangle_vertices(
    a: &Arrangement,
    i: usize,
    l: usize,
    m: usize,
    n: usize,
) -> Result<[ChartPoint; 3]> {
    if l == m || m == n || l == n {
        return Err(Error::DegenerateTriple(names(&[FormSel::M(l), FormSel::M(m), FormSel::M(n)])));
    }
    if !a.is_certified() {
        validate_general_position(a)?;
    }
    let pairs = [(l, m), (m, n), (l, n)];
    let mut out = Vec::with_capacity(3);
    for (p, q) in pairs {
        let pt = intersection_point(a, FormSel::L(i), FormSel::M(p), FormSel::M(q))?;
        let c = pt
            .chart()
            .ok_or_else(|| Error::ChartFailure(format!("L{i} ∩ M{p} ∩ M{q} = {pt}")))?;
        out.push(c);
    }
    Ok(out.try_into().expect("three vertices"))
}

/// L_i: coordinate planes X, Y, Z, W; M_l: the forms with sixth-root-of-unity
/// coefficients for which dx/x ∧ dy/y extends over the family.
pub fn tempered_arrangement() -> Arrangement {
    let c = CycloNumber::from_ints;
    let one = || c(1, 0);
    let zero = || c(0, 0);
    let neg = || c(-1, 0);
    let mu = CycloNumber::mu;
    let f = |x: [CycloNumber; 4]| LinearForm::new(x).expect("nonzero form");
    let l = vec![
        f([one(), zero(), zero(), zero()]),
        f([zero(), one(), zero(), zero()]),
        f([zero(), zero(), one(), zero()]),
        f([zero(), zero(), zero(), one()]),
    ];
    let m = vec![
        f([one(), mu(), neg(), one()]),
        f([mu(), neg(), one(), one()]),
        f([neg(), one(), mu(), one()]),
        f([one(), one(), one(), -mu()]),
    ];
    let a = Arrangement::new(l, m).expect("four and four");
    let (a, _) = a.certify().expect("tempered arrangement is in general position");
    a
}
