//! Generators and relations for the (−1,−1) part of H₂ of the blown-up
//! singular fiber, the intersection map φ against its components, and the
//! kernel basis B.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{format_rational, parse_rational, rank, rat, Matrix, QMatrix, QVector, Rational};

/// l_i, or the exceptional curve e^{ij}_l over p^{ij}_l (always i < j).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GeneratorIndex {
    Line(usize),
    Exc { i: usize, j: usize, l: usize },
}

impl GeneratorIndex {
    pub fn exc(i: usize, j: usize, l: usize) -> Self {
        GeneratorIndex::Exc { i: i.min(j), j: i.max(j), l }
    }

    fn check(&self, d: usize) -> Result<()> {
        let ok = match *self {
            GeneratorIndex::Line(i) => (1..=d).contains(&i),
            GeneratorIndex::Exc { i, j, l } => i >= 1 && i < j && j <= d && (1..=d).contains(&l),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange(format!("{self} with d = {d}")))
        }
    }
}

impl fmt::Display for GeneratorIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorIndex::Line(i) => write!(f, "l_{i}"),
            GeneratorIndex::Exc { i, j, l } => write!(f, "e_{i}_{j}_{l}"),
        }
    }
}

impl FromStr for GeneratorIndex {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::ParseGenerator(s.to_string());
        let mut parts = s.split('_');
        let head = parts.next().ok_or_else(bad)?;
        let nums = parts.map(|p| p.parse::<usize>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
        match (head, nums.as_slice()) {
            ("l", [i]) => Ok(GeneratorIndex::Line(*i)),
            ("e", [i, j, l]) if i < j => Ok(GeneratorIndex::Exc { i: *i, j: *j, l: *l }),
            _ => Err(bad()),
        }
    }
}

pub fn binom2(d: usize) -> usize {
    d * d.saturating_sub(1) / 2
}

/// Ordered pairs i < j.
pub fn pairs(d: usize) -> Vec<(usize, usize)> {
    let mut v = Vec::with_capacity(binom2(d));
    for i in 1..=d {
        for j in i + 1..=d {
            v.push((i, j));
        }
    }
    v
}

/// l_1..l_d, then e^{ij}_l with l < d, pairs in lexicographic order.
pub fn canonical_generators(d: usize) -> Vec<GeneratorIndex> {
    let mut g: Vec<_> = (1..=d).map(GeneratorIndex::Line).collect();
    for (i, j) in pairs(d) {
        for l in 1..d {
            g.push(GeneratorIndex::Exc { i, j, l });
        }
    }
    g
}

/// All generators before the relations are imposed.
pub fn raw_generators(d: usize) -> Vec<GeneratorIndex> {
    let mut g: Vec<_> = (1..=d).map(GeneratorIndex::Line).collect();
    for (i, j) in pairs(d) {
        for l in 1..=d {
            g.push(GeneratorIndex::Exc { i, j, l });
        }
    }
    g
}

pub fn expected_dimension(d: usize) -> usize {
    d + (d - 1) * binom2(d)
}

pub fn expected_kernel_dimension(d: usize) -> usize {
    1 + (d - 1) * binom2(d)
}

fn check_degree(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::InvalidDegree { d, min: 2 });
    }
    Ok(())
}

pub type RawClass = BTreeMap<GeneratorIndex, Rational>;

fn add_to(m: &mut RawClass, g: GeneratorIndex, c: Rational) {
    let e = m.entry(g).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        m.remove(&g);
    }
}

/// A class in canonical coordinates: no e^{ij}_d, no zero entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H2Class {
    pub d: usize,
    coords: BTreeMap<GeneratorIndex, Rational>,
}

impl H2Class {
    pub fn zero(d: usize) -> Self {
        H2Class { d, coords: BTreeMap::new() }
    }

    pub fn generator(d: usize, g: GeneratorIndex) -> Result<Self> {
        reduce(d, &RawClass::from([(g, rat(1))]))
    }

    pub fn coords(&self) -> &BTreeMap<GeneratorIndex, Rational> {
        &self.coords
    }

    pub fn coeff(&self, g: GeneratorIndex) -> Rational {
        self.coords.get(&g).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn to_vector(&self) -> QVector {
        canonical_generators(self.d).iter().map(|g| self.coeff(*g)).collect()
    }

    pub fn from_vector(d: usize, v: &[Rational]) -> Result<Self> {
        let gens = canonical_generators(d);
        if v.len() != gens.len() {
            return Err(Error::DimensionMismatch { expected: gens.len(), got: v.len() });
        }
        let coords = gens
            .into_iter()
            .zip(v)
            .filter(|(_, c)| !c.is_zero())
            .map(|(g, c)| (g, c.clone()))
            .collect();
        Ok(H2Class { d, coords })
    }

    pub fn add(&self, other: &H2Class) -> H2Class {
        self.add_scaled(other, &rat(1))
    }

    pub fn add_scaled(&self, other: &H2Class, c: &Rational) -> H2Class {
        assert_eq!(self.d, other.d, "classes for different d");
        let mut m = self.coords.clone();
        for (g, x) in &other.coords {
            add_to(&mut m, *g, x * c);
        }
        H2Class { d: self.d, coords: m }
    }

    pub fn scaled(&self, c: &Rational) -> H2Class {
        H2Class::zero(self.d).add_scaled(self, c)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let coords: Vec<_> = self
            .coords
            .iter()
            .map(|(g, v)| serde_json::json!({"gen": g.to_string(), "val": format_rational(v)}))
            .collect();
        serde_json::json!({"d": self.d, "coords": coords})
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        #[derive(Deserialize)]
        struct Entry {
            gen: String,
            val: String,
        }
        #[derive(Deserialize)]
        struct Raw {
            d: usize,
            coords: Vec<Entry>,
        }
        let raw: Raw = serde_json::from_value(v.clone()).map_err(|e| Error::Malformed(e.to_string()))?;
        check_degree(raw.d)?;
        let mut m = RawClass::new();
        for e in raw.coords {
            let g: GeneratorIndex = e.gen.parse()?;
            if matches!(g, GeneratorIndex::Exc { l, .. } if l == raw.d) {
                return Err(Error::Malformed(format!("{g} is not a canonical coordinate")));
            }
            add_to(&mut m, g, parse_rational(&e.val)?);
        }
        reduce(raw.d, &m)
    }
}

impl fmt::Display for H2Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coords.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self.coords.iter().map(|(g, c)| format!("({c})·{g}")).collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Serialize for H2Class {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// Rewrites e^{ij}_d = l_j − l_i − Σ_{l<d} e^{ij}_l.
pub fn reduce(d: usize, raw: &RawClass) -> Result<H2Class> {
    check_degree(d)?;
    let mut out = RawClass::new();
    for (g, c) in raw {
        g.check(d)?;
        match *g {
            GeneratorIndex::Exc { i, j, l } if l == d => {
                add_to(&mut out, GeneratorIndex::Line(j), c.clone());
                add_to(&mut out, GeneratorIndex::Line(i), -c.clone());
                for l2 in 1..d {
                    add_to(&mut out, GeneratorIndex::Exc { i, j, l: l2 }, -c.clone());
                }
            }
            _ => add_to(&mut out, *g, c.clone()),
        }
    }
    Ok(H2Class { d, coords: out })
}

#[derive(Clone, Debug)]
pub struct Presentation {
    pub generators: Vec<GeneratorIndex>,
    /// l_j − l_i − Σ_l e^{ij}_l for each pair.
    pub relations: Vec<RawClass>,
    pub dimension: usize,
}

pub fn presentation(d: usize) -> Result<Presentation> {
    check_degree(d)?;
    let generators = raw_generators(d);
    let relations: Vec<RawClass> = pairs(d)
        .into_iter()
        .map(|(i, j)| {
            let mut r = RawClass::new();
            add_to(&mut r, GeneratorIndex::Line(j), rat(1));
            add_to(&mut r, GeneratorIndex::Line(i), rat(-1));
            for l in 1..=d {
                add_to(&mut r, GeneratorIndex::Exc { i, j, l }, rat(-1));
            }
            r
        })
        .collect();
    let rows: Vec<QVector> = relations
        .iter()
        .map(|r| generators.iter().map(|g| r.get(g).cloned().unwrap_or_else(Rational::zero)).collect())
        .collect();
    let rel = Matrix::from_rows(rows, generators.len())?;
    let dimension = generators.len() - rank(&rel);
    Ok(Presentation { generators, relations, dimension })
}

/// φ of a single raw generator: its intersection numbers with L̃_1..L̃_d.
pub fn phi_of_generator(d: usize, g: GeneratorIndex) -> Result<QVector> {
    g.check(d)?;
    let mut col = vec![Rational::zero(); d];
    match g {
        GeneratorIndex::Line(i) => {
            for (r, x) in col.iter_mut().enumerate() {
                *x = if r + 1 == i { rat(1 - d as i64) } else { rat(1) };
            }
        }
        GeneratorIndex::Exc { i, j, .. } => {
            col[i - 1] = rat(1);
            col[j - 1] = rat(-1);
        }
    }
    Ok(col)
}

/// φ on a raw coordinate map, without reducing first.
pub fn phi_raw(d: usize, raw: &RawClass) -> Result<QVector> {
    let mut out = vec![Rational::zero(); d];
    for (g, c) in raw {
        for (o, x) in out.iter_mut().zip(phi_of_generator(d, *g)?) {
            *o += x * c;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct PhiMatrix {
    pub d: usize,
    pub matrix: QMatrix,
}

impl PhiMatrix {
    pub fn apply(&self, x: &H2Class) -> Result<QVector> {
        self.matrix.mul_vec(&x.to_vector())
    }
}

pub fn phi_matrix(d: usize) -> Result<PhiMatrix> {
    check_degree(d)?;
    let cols = canonical_generators(d)
        .into_iter()
        .map(|g| phi_of_generator(d, g))
        .collect::<Result<Vec<_>>>()?;
    Ok(PhiMatrix { d, matrix: Matrix::from_columns(&cols, d)? })
}

/// Labels of the elements of B, in the order `hodge_kernel_basis` returns them.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisLabel {
    SumL,
    W { i: usize, j: usize, l: usize },
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::SumL => write!(f, "sum_l"),
            BasisLabel::W { i, j, l } => write!(f, "w_{i}_{j}_{l}"),
        }
    }
}

pub fn basis_labels(d: usize) -> Vec<BasisLabel> {
    let mut v = vec![BasisLabel::SumL];
    for (i, j) in pairs(d) {
        for l in 1..d {
            v.push(BasisLabel::W { i, j, l });
        }
    }
    v
}

/// w^{ij}_l = Σ_{l'} (e^{ij}_l − e^{ij}_{l'}), in canonical form.
pub fn w_class(d: usize, i: usize, j: usize, l: usize) -> Result<H2Class> {
    let mut raw = RawClass::new();
    for l2 in 1..=d {
        add_to(&mut raw, GeneratorIndex::exc(i, j, l), rat(1));
        add_to(&mut raw, GeneratorIndex::exc(i, j, l2), rat(-1));
    }
    reduce(d, &raw)
}

pub fn sum_l_class(d: usize) -> H2Class {
    let coords = (1..=d).map(|i| (GeneratorIndex::Line(i), rat(1))).collect();
    H2Class { d, coords }
}

fn basis_element(d: usize, b: BasisLabel) -> Result<H2Class> {
    match b {
        BasisLabel::SumL => Ok(sum_l_class(d)),
        BasisLabel::W { i, j, l } => w_class(d, i, j, l),
    }
}

/// B, checked to lie in Ker φ, to be independent, and to have the size of
/// the kernel.
pub fn hodge_kernel_basis(d: usize) -> Result<Vec<H2Class>> {
    check_degree(d)?;
    let phi = phi_matrix(d)?;
    let b = basis_labels(d)
        .into_iter()
        .map(|l| basis_element(d, l))
        .collect::<Result<Vec<_>>>()?;
    for (x, lab) in b.iter().zip(basis_labels(d)) {
        if !phi.apply(x)?.iter().all(Zero::is_zero) {
            return Err(Error::Consistency(format!("{lab} is not in Ker φ for d = {d}")));
        }
    }
    let n = canonical_generators(d).len();
    let stacked = Matrix::from_rows(b.iter().map(H2Class::to_vector).collect(), n)?;
    if rank(&stacked) != b.len() {
        return Err(Error::Consistency(format!("B is linearly dependent for d = {d}")));
    }
    let kernel_dim = n - rank(&phi.matrix);
    if b.len() != kernel_dim {
        return Err(Error::Consistency(format!(
            "|B| = {} but dim Ker φ = {kernel_dim} for d = {d}",
            b.len()
        )));
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::kernel_basis;
    use proptest::prelude::*;

    fn raw(entries: &[(GeneratorIndex, i64)]) -> RawClass {
        let mut m = RawClass::new();
        for (g, c) in entries {
            add_to(&mut m, *g, rat(*c));
        }
        m
    }

    #[test]
    fn presentation_dimensions() {
        let p = presentation(2).unwrap();
        assert_eq!(p.generators.len(), 4);
        assert_eq!(p.relations.len(), 1);
        assert_eq!(p.dimension, 3);
        assert_eq!(presentation(4).unwrap().dimension, 22);
        assert_eq!(presentation(5).unwrap().dimension, 45);
        assert!(presentation(1).is_err());
        for d in 2..=8 {
            // d(1 + (d−1)²/2), kept in integers
            assert_eq!(2 * presentation(d).unwrap().dimension, d * (2 + (d - 1) * (d - 1)));
        }
    }

    #[test]
    fn reduce_examples() {
        let e = GeneratorIndex::exc;
        let l = GeneratorIndex::Line;
        let r = reduce(4, &raw(&[(e(1, 2, 4), 1)])).unwrap();
        let want = reduce(4, &raw(&[(l(2), 1), (l(1), -1), (e(1, 2, 1), -1), (e(1, 2, 2), -1), (e(1, 2, 3), -1)])).unwrap();
        assert_eq!(r, want);
        assert_eq!(reduce(4, &raw(&[(l(1), 1)])).unwrap().to_string(), "(1)·l_1");
        let s = reduce(4, &raw(&[(e(1, 2, 1), 1), (e(1, 2, 2), 1), (e(1, 2, 3), 1), (e(1, 2, 4), 1)])).unwrap();
        assert_eq!(s, reduce(4, &raw(&[(l(2), 1), (l(1), -1)])).unwrap());
        assert!(reduce(4, &raw(&[(e(1, 5, 1), 1)])).is_err());
    }

    #[test]
    fn phi_columns() {
        let phi = phi_matrix(4).unwrap();
        assert_eq!(phi.matrix.rows(), 4);
        assert_eq!(phi.matrix.cols(), 22);
        assert_eq!(phi.matrix.column(0), vec![rat(-3), rat(1), rat(1), rat(1)]);
        assert_eq!(phi.matrix.column(4), vec![rat(1), rat(-1), rat(0), rat(0)]);
        assert_eq!(rank(&phi.matrix), 3);
        assert_eq!(kernel_basis(&phi.matrix).len(), 19);
    }

    #[test]
    fn phi_kills_relations() {
        for d in 2..=8 {
            for r in presentation(d).unwrap().relations {
                assert!(phi_raw(d, &r).unwrap().iter().all(Zero::is_zero));
            }
        }
    }

    #[test]
    fn basis_sizes_and_span() {
        let b2 = hodge_kernel_basis(2).unwrap();
        assert_eq!(b2.len(), 2);
        let e = GeneratorIndex::exc;
        // w¹²₁ = e¹²₁ − e¹²₂, written canonically
        assert_eq!(b2[1], reduce(2, &raw(&[(e(1, 2, 1), 1), (e(1, 2, 2), -1)])).unwrap());
        assert_eq!(hodge_kernel_basis(4).unwrap().len(), 19);
        for d in [5, 6] {
            let b = hodge_kernel_basis(d).unwrap();
            assert_eq!(b.len(), expected_kernel_dimension(d));
            let phi = phi_matrix(d).unwrap();
            let n = phi.matrix.cols();
            let mut cols: Vec<QVector> = b.iter().map(H2Class::to_vector).collect();
            let bm = Matrix::from_columns(&cols, n).unwrap();
            cols.extend(kernel_basis(&phi.matrix));
            let stacked = Matrix::from_columns(&cols, n).unwrap();
            assert_eq!(rank(&stacked), rank(&bm));
        }
    }

    #[test]
    fn generator_names_round_trip() {
        for d in 2..=5 {
            for g in raw_generators(d) {
                assert_eq!(g.to_string().parse::<GeneratorIndex>().unwrap(), g);
            }
        }
        assert!("e_2_1_1".parse::<GeneratorIndex>().is_err());
        assert!("x_1".parse::<GeneratorIndex>().is_err());
    }

    #[test]
    fn class_json_round_trip() {
        let w = w_class(4, 1, 3, 2).unwrap();
        let j = w.to_json();
        assert_eq!(j["coords"][0]["gen"], "l_1");
        assert_eq!(H2Class::from_json(&j).unwrap(), w);
        let bad = serde_json::json!({"d": 4, "coords": [{"gen": "e_1_2_4", "val": "1/1"}]});
        assert!(H2Class::from_json(&bad).is_err());
    }

    #[test]
    fn kernel_counts() {
        for d in 2..=8 {
            let phi = phi_matrix(d).unwrap();
            assert_eq!(rank(&phi.matrix), d - 1);
            assert_eq!(phi.matrix.cols() - rank(&phi.matrix), expected_kernel_dimension(d));
            assert_eq!(presentation(d).unwrap().dimension, expected_dimension(d));
        }
    }

    fn arb_raw(d: usize) -> impl Strategy<Value = RawClass> {
        let gens = raw_generators(d);
        proptest::collection::vec((0..gens.len(), -5i64..=5), 0..12).prop_map(move |v| {
            let mut m = RawClass::new();
            for (k, c) in v {
                add_to(&mut m, gens[k], rat(c));
            }
            m
        })
    }

    proptest! {
        #[test]
        fn reduce_is_projection_and_phi_is_well_defined(
            (d, r) in (2usize..=6).prop_flat_map(|d| (Just(d), arb_raw(d))),
        ) {
            let c = reduce(d, &r).unwrap();
            prop_assert_eq!(reduce(d, c.coords()).unwrap(), c.clone());
            let phi = phi_matrix(d).unwrap();
            prop_assert_eq!(phi.apply(&c).unwrap(), phi_raw(d, &r).unwrap());
        }

    }
}
