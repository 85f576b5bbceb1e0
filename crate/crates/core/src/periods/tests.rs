use super::*;
use crate::error::Error;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn seg(a: Complex64, b: Complex64) -> Segment {
    Segment::new(a, b).unwrap()
}

#[test]
fn log_line_integral_examples() {
    let v = log_line_integral(c(1.0, 0.0), c(0.0, 0.0), &seg(c(1.0, 0.0), c(2.0, 0.0))).unwrap();
    assert!(v.norm() < 1e-16);
    let w = log_line_integral(c(1.0, 0.0), c(1.0, 0.0), &seg(c(1.0, 0.0), c(2.0, 0.0))).unwrap();
    assert!((w - c(0.614_279_333_459_567_7, 0.0)).norm() < 1e-12);
    let q = log_line_integral_quadrature(c(1.0, 0.0), c(1.0, 0.0), &seg(c(1.0, 0.0), c(2.0, 0.0)), QuadOptions::default())
        .unwrap();
    assert!((w - q).norm() < 1e-12);
    // a = 1, b = −μ from −i/√3 to 2 − μ
    let mu = mu_complex();
    let s = seg(c(0.0, -1.0 / 3f64.sqrt()), c(2.0, 0.0) - mu);
    let v = log_line_integral(c(1.0, 0.0), -mu, &s).unwrap();
    let q = log_line_integral_quadrature(c(1.0, 0.0), -mu, &s, QuadOptions::default()).unwrap();
    assert!((v - q).norm() < 1e-9, "{v} vs {q}");
}

#[test]
fn log_line_integral_rejects_singular_paths() {
    let e = log_line_integral(c(1.0, 0.0), c(1.0, 0.0), &seg(c(-1.0, -1.0), c(1.0, 1.0)));
    assert!(matches!(e, Err(Error::Singularity(_))));
    let e = log_line_integral(c(1.0, 0.0), c(1.0, 0.0), &seg(c(-2.0, -1.0), c(0.0, 1.0)));
    assert!(matches!(e, Err(Error::Singularity(_))));
    assert!(Segment::new(c(1.0, 0.0), c(1.0, 0.0)).is_err());
}

#[test]
fn log_line_integral_crosses_cuts_continuously() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    while checked < 300 {
        let mut r = || c(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let (a, b, z0, z1) = (r(), r(), r(), r());
        let s = seg(z0, z1);
        if s.distance(c(0.0, 0.0)).0 < 0.05 || s.distance(-a / b).0 < 0.05 {
            continue;
        }
        let v = log_line_integral(a, b, &s).unwrap();
        let q = log_line_integral_quadrature(a, b, &s, QuadOptions::default()).unwrap();
        assert!((v - q).norm() < 1e-9, "a={a} b={b} {z0}->{z1}: {v} vs {q}");
        checked += 1;
    }
}

#[test]
fn antiderivative_derivative() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let near_cut = |w: Complex64| w.arg().abs() > PI - 0.01 || w.norm() < 1e-3;
    let mut n = 0;
    while n < 1000 {
        let mut r = || c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let (a, b, z) = (r(), r(), r());
        let cc = b / a;
        let one = c(1.0, 0.0);
        if [a + b * z, z, one + cc * z].into_iter().any(near_cut) || (-cc * z - one).norm() < 1e-3 {
            continue;
        }
        let h = 1e-6;
        let fd = (log_antiderivative(a, b, z + h) - log_antiderivative(a, b, z - h)) / (2.0 * h);
        let want = clog(a + b * z) / z;
        assert!((fd - want).norm() / want.norm().max(1e-3) < 1e-6, "{a} {b} {z}: {fd} vs {want}");
        n += 1;
    }
}

#[test]
fn closed_form() {
    let aj = aj_closed_form();
    assert!((-aj.re - ZETA2).abs() < 1e-15);
    assert!((-aj.im - 6.0 * dilog(-mu_complex()).im).abs() < 1e-15);
    assert!((-aj.im + 6.0 * clausen(2.0 * PI / 3.0)).abs() < 1e-14);
    assert!((aj - c(-1.644_934_066_848_226_4, 4.059_766_425_638_614_5)).norm() < 1e-13);
}

#[test]
fn tempered_membrane_vertices_and_value() {
    let m = tempered_membrane().unwrap();
    let mu = mu_complex();
    let corner = |k: usize| m.edges[k].point(0.0);
    let want = [
        (c(1.0 / 3.0, 0.0) + mu / 3.0, -(2.0 * mu - 1.0) / 3.0),
        (-mu, c(2.0, 0.0) - mu),
        (2.0 * mu - 1.0, mu - 1.0),
    ];
    for k in 0..3 {
        assert!((corner(k).0 - want[k].0).norm() < 1e-14 && (corner(k).1 - want[k].1).norm() < 1e-14, "{k}");
    }
    let r = membrane_integral(&m).unwrap();
    assert!((r.value + aj_closed_form()).norm() < 1e-8, "{}", r.value);
    let q = membrane_quadrature(&m, QuadOptions::default()).unwrap();
    assert!((q - r.value).norm() < 1e-6, "{q}");
    assert_eq!(r.edge_terms.len(), 3);
    let sum: Complex64 = r.edge_terms.iter().map(|t| t.1).sum();
    assert!((sum - r.value).norm() < 1e-12);
    let rev = membrane_integral(&m.reversed()).unwrap();
    assert!((rev.value + r.value).norm() < 1e-10);
}

#[test]
fn straight_triangles() {
    let v0 = (c(1.0, 0.0), c(1.0, 0.0));
    assert!(matches!(Membrane::from_vertices([v0, v0, (c(2.0, 0.0), c(3.0, 1.0))]), Err(Error::DegenerateMembrane(_))));
    let through_origin = Membrane::from_vertices([(c(-1.0, 0.0), c(1.0, 0.0)), (c(1.0, 0.0), c(2.0, 0.0)), (c(2.0, 1.0), c(3.0, 1.0))]).unwrap();
    assert!(matches!(membrane_integral(&through_origin), Err(Error::Singularity(_))));
}

fn arb_vertex() -> impl Strategy<Value = (Complex64, Complex64)> {
    (1.0f64..3.0, -1.0f64..1.0, 1.0f64..3.0, -1.0f64..1.0).prop_map(|(a, b, c2, d)| (c(a, b), c(c2, d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn swapping_vertices_flips_sign(p in arb_vertex(), q in arb_vertex(), r in arb_vertex()) {
        prop_assume!((p.1 - q.1).norm() > 0.05 && (q.1 - r.1).norm() > 0.05 && (p.1 - r.1).norm() > 0.05);
        let m = Membrane::from_vertices([p, q, r]).unwrap();
        let s = Membrane::from_vertices([q, p, r]).unwrap();
        let a = membrane_integral(&m).unwrap().value;
        let b = membrane_integral(&s).unwrap().value;
        prop_assert!((a + b).norm() < 1e-10);
        let o = membrane_quadrature(&m, QuadOptions::default()).unwrap();
        prop_assert!((o - a).norm() < 1e-7, "{} vs {}", o, a);
    }
}
