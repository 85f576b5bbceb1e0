use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::complex::Complex64;
use num::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{rat, rational_serde, rational_to_f64, Rational};

/// a + b·μ in Q(μ), μ = (1 + √3 i)/2, so μ² = μ − 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct CycloNumber {
    #[serde(with = "rational_serde")]
    pub a: Rational,
    #[serde(with = "rational_serde")]
    pub b: Rational,
}

impl CycloNumber {
    pub fn new(a: Rational, b: Rational) -> Self {
        CycloNumber { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        CycloNumber::new(rat(a), rat(b))
    }

    pub fn rational(a: Rational) -> Self {
        CycloNumber::new(a, Rational::zero())
    }

    pub fn mu() -> Self {
        CycloNumber::from_ints(0, 1)
    }

    /// Complex conjugation: μ ↦ 1 − μ.
    pub fn conj(&self) -> Self {
        CycloNumber::new(&self.a + &self.b, -&self.b)
    }

    /// x·conj(x) = a² + ab + b².
    pub fn norm(&self) -> Rational {
        &self.a * &self.a + &self.a * &self.b + &self.b * &self.b
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conj();
        Some(CycloNumber::new(c.a / &n, c.b / &n))
    }

    pub fn embed(&self) -> Complex64 {
        let a = rational_to_f64(&self.a);
        let b = rational_to_f64(&self.b);
        Complex64::new(a + 0.5 * b, b * (3f64.sqrt() / 2.0))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = CycloNumber::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }
}

impl fmt::Display for CycloNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}μ", self.b),
            (false, false) => write!(f, "{} + {}μ", self.a, self.b),
        }
    }
}

impl Zero for CycloNumber {
    fn zero() -> Self {
        CycloNumber::from_ints(0, 0)
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for CycloNumber {
    fn one() -> Self {
        CycloNumber::from_ints(1, 0)
    }
}

impl<'a> Add<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn add(self, o: &CycloNumber) -> CycloNumber {
        CycloNumber::new(&self.a + &o.a, &self.b + &o.b)
    }
}

impl<'a> Sub<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn sub(self, o: &CycloNumber) -> CycloNumber {
        CycloNumber::new(&self.a - &o.a, &self.b - &o.b)
    }
}

impl<'a> Mul<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    // (a + bμ)(c + dμ) = ac + (ad + bc)μ + bdμ², μ² = μ − 1
    fn mul(self, o: &CycloNumber) -> CycloNumber {
        let bd = &self.b * &o.b;
        CycloNumber::new(
            &self.a * &o.a - &bd,
            &self.a * &o.b + &self.b * &o.a + bd,
        )
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl<'a> Div<&'a CycloNumber> for &'a CycloNumber {
    type Output = CycloNumber;
    fn div(self, o: &CycloNumber) -> CycloNumber {
        let inv = o.inv().expect("division by zero in Q(μ)");
        self * &inv
    }
}

impl Neg for &CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        CycloNumber::new(-&self.a, -&self.b)
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for CycloNumber {
            type Output = CycloNumber;
            fn $m(self, o: CycloNumber) -> CycloNumber {
                (&self).$m(&o)
            }
        }
    };
}
owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl Neg for CycloNumber {
    type Output = CycloNumber;
    fn neg(self) -> CycloNumber {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::ratio;
    use proptest::prelude::*;

    fn c(a: i64, b: i64) -> CycloNumber {
        CycloNumber::from_ints(a, b)
    }

    fn close(z: Complex64, w: Complex64, tol: f64) -> bool {
        (z - w).norm() < tol
    }

    #[test]
    fn embed_examples() {
        let h = 3f64.sqrt() / 2.0;
        assert!(close(CycloNumber::mu().embed(), Complex64::new(0.5, h), 1e-15));
        let mu2 = CycloNumber::mu().pow(2);
        assert_eq!(mu2, c(-1, 1));
        assert!(close(mu2.embed(), Complex64::new(-0.5, h), 1e-15));
        assert!(close(c(2, -1).embed(), Complex64::new(1.5, -h), 1e-15));
    }

    #[test]
    fn mu_is_primitive_sixth_root() {
        let mu = CycloNumber::mu();
        for k in 1..6 {
            assert_ne!(mu.pow(k), CycloNumber::one(), "μ^{k}");
        }
        assert_eq!(mu.pow(6), CycloNumber::one());
        assert!(close(mu.embed().powu(6), Complex64::new(1.0, 0.0), 1e-14));
    }

    #[test]
    fn conjugation_matches_complex_conjugate() {
        let x = c(3, -5);
        assert!(close(x.conj().embed(), x.embed().conj(), 1e-13));
        assert_eq!(CycloNumber::mu().conj(), c(1, -1));
        assert_eq!((&x * &x.conj()), CycloNumber::rational(x.norm()));
    }

    #[test]
    fn serde_shape() {
        let x = CycloNumber::new(ratio(1, 3), ratio(-2, 1));
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"a":"1/3","b":"-2/1"}"#);
        let y: CycloNumber = serde_json::from_str(&s).unwrap();
        assert_eq!(x, y);
    }

    fn arb() -> impl Strategy<Value = CycloNumber> {
        (-20i64..20, 1i64..9, -20i64..20, 1i64..9)
            .prop_map(|(p, q, r, s)| CycloNumber::new(ratio(p, q), ratio(r, s)))
    }

    proptest! {
        #[test]
        fn field_axioms(x in arb(), y in arb(), z in arb()) {
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x * &y, &y * &x);
            if !x.is_zero() {
                prop_assert_eq!(&x * &x.inv().unwrap(), CycloNumber::one());
            }
        }

        #[test]
        fn embed_is_ring_hom(
            (a, b, c2, d) in (-3i64..=3, -3i64..=3, -3i64..=3, -3i64..=3),
        ) {
            let x = CycloNumber::new(ratio(a, 3), ratio(b, 2));
            let y = CycloNumber::new(ratio(c2, 5), ratio(d, 7));
            prop_assert!((( &x * &y).embed() - x.embed() * y.embed()).norm() < 1e-12);
            prop_assert!(((&x + &y).embed() - x.embed() - y.embed()).norm() < 1e-12);
            let n = (&x * &x.conj()).embed();
            prop_assert!(n.im.abs() < 1e-12 && n.re >= -1e-12);
        }
    }
}
