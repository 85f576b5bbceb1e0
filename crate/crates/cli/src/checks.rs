use serde_json::{json, Value};

use hodge_degen::cycles::{
    build_cycle, family_members, report_rows, singularity_at_zero, span_rank, threefold_boundary, Family,
};
use hodge_degen::degeneration::{
    basis_labels, expected_dimension, expected_kernel_dimension, hodge_kernel_basis, phi_matrix, presentation,
};
use hodge_degen::exactlin::{format_rational, rank, rat};
use hodge_degen::limits::{
    default_t_sequence, independence_matrix, monodromy_kernel, nilpotency_index, standard_models, Frame, DEFAULT_DK,
};
use hodge_degen::periods::{
    aj_closed_form, check_functional_equations, membrane_integral, membrane_quadrature, tempered_membrane,
    QuadOptions, ZETA2,
};
use hodge_degen::{Error, Result};

use crate::report::{Check, Status};

pub const BASIS: &str = "lemma:basis";
pub const COMPUTATION: &str = "lemma:computation";
pub const MAIN: &str = "thm:main";
pub const LIMIT_INVARIANT: &str = "thm:limit-invariant";
pub const HODGE_D: &str = "thm:hodge-d";
pub const GRIFFITHS: &str = "thm:griffiths";

/// |Im AJ| above this certifies a non-torsion limit.
pub const NONTRIVIAL_IM: f64 = 4.0;

fn cx(re: f64, im: f64) -> Value {
    json!([re, im])
}

fn checked(name: &str, anchor: &'static str, f: impl FnOnce() -> Result<Check>) -> Check {
    f().unwrap_or_else(|e| Check::errored(name, anchor, &e))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyArg {
    Gamma,
    Lambda,
    Delta,
    All,
}

pub fn basis(d: usize) -> Result<Vec<Check>> {
    if d < 2 {
        return Err(Error::InvalidDegree { d, min: 2 });
    }
    let dim = checked("dimension", BASIS, || {
        let p = presentation(d)?;
        let want = expected_dimension(d);
        Ok(Check::new(
            "dimension",
            BASIS,
            Status::from_bool(p.dimension == want),
            json!({"d": d, "dimension": p.dimension, "expected": want, "relations": p.relations.len()}),
        ))
    });
    let ker = checked("kernel_dimension", BASIS, || {
        let phi = phi_matrix(d)?;
        let k = phi.matrix.cols() - rank(&phi.matrix);
        let want = expected_kernel_dimension(d);
        Ok(Check::new(
            "kernel_dimension",
            BASIS,
            Status::from_bool(k == want),
            json!({"d": d, "kernel": k, "expected": want}),
        ))
    });
    let labels: Vec<String> = basis_labels(d).iter().map(ToString::to_string).collect();
    let b = match hodge_kernel_basis(d) {
        Ok(b) => Check::new(
            "basis_B",
            BASIS,
            Status::Pass,
            json!({"d": d, "size": b.len(), "in_kernel": true, "independent": true, "spans": true, "labels": labels}),
        ),
        Err(e) => Check::errored("basis_B", BASIS, &e),
    };
    Ok(vec![dim, ker, b])
}

pub fn sing(d: usize, family: FamilyArg) -> Result<Vec<Check>> {
    if d < 3 {
        return Err(Error::InvalidDegree { d, min: 3 });
    }
    let fams: &[Family] = match family {
        FamilyArg::Gamma => &[Family::Gammas],
        FamilyArg::Lambda => &[Family::Lambdas],
        FamilyArg::Delta => &[Family::Deltas],
        FamilyArg::All => &[Family::Gammas, Family::Lambdas, Family::Deltas],
    };
    let mut checks = Vec::new();
    checks.push(checked("singularities", COMPUTATION, || {
        let basis = hodge_kernel_basis(d)?;
        let specs: Vec<_> = fams.iter().flat_map(|f| family_members(d, *f)).collect();
        let rows = report_rows(&basis, d, &specs)?;
        let ok = rows.iter().all(|r| r["in_B"].is_array());
        Ok(Check::new("singularities", COMPUTATION, Status::from_bool(ok), json!({"d": d, "rows": rows})))
    }));
    if fams.contains(&Family::Deltas) {
        checks.push(delta_trivial(d));
    }
    let f = match family {
        FamilyArg::All => Family::Both,
        FamilyArg::Delta => Family::Deltas,
        FamilyArg::Gamma => Family::Gammas,
        FamilyArg::Lambda => Family::Lambdas,
    };
    match span_rank(d, f) {
        Ok(r) => {
            let (status, expected) = match family {
                FamilyArg::All => (Status::from_bool(r.spanning), r.expected),
                FamilyArg::Delta => (Status::from_bool(r.rank == 0), 0),
                _ => (Status::Skipped, r.expected),
            };
            let data = json!({"d": d, "rank": r.rank, "expected": expected, "spanning": r.rank == r.expected});
            checks.push(Check::new("span_rank", MAIN, status, data));
            if family == FamilyArg::All {
                let minus_one = rat(-1);
                let direct_minus_w = r.combinations.iter().all(|c| c.direct == c.target.scaled(&minus_one));
                checks.push(Check::new(
                    "spanning_combination",
                    MAIN,
                    Status::from_bool(r.reversed_combination_ok),
                    json!({
                        "d": d,
                        "combinations": r.combinations.len(),
                        "reversed_ok": r.reversed_combination_ok,
                        "direct_ok": r.direct_combination_ok,
                        "direct_gives_minus_w": direct_minus_w,
                    }),
                ));
            }
        }
        Err(e) => checks.push(Check::errored("span_rank", MAIN, &e)),
    }
    Ok(checks)
}

fn delta_trivial(d: usize) -> Check {
    checked("delta_trivial", LIMIT_INVARIANT, || {
        let mut nonzero = Vec::new();
        let mut n = 0;
        for s in family_members(d, Family::Deltas) {
            n += 1;
            if !singularity_at_zero(&build_cycle(d, s)?)?.is_zero() {
                nonzero.push(s.to_string());
            }
        }
        Ok(Check::new(
            "delta_trivial",
            LIMIT_INVARIANT,
            Status::from_bool(nonzero.is_empty()),
            json!({"d": d, "cycles": n, "nonzero": nonzero}),
        ))
    })
}

pub fn aj(oracle: bool) -> Vec<Check> {
    let aj = aj_closed_form();
    let mut checks = vec![Check::new(
        "closed_form",
        LIMIT_INVARIANT,
        Status::from_bool(aj.im.abs() > NONTRIVIAL_IM && (-aj.re - ZETA2).abs() < 1e-10),
        json!({
            "closed_form": cx(aj.re, aj.im),
            "re_minus_aj_minus_zeta2": -aj.re - ZETA2,
            "nontrivial": aj.im.abs() > NONTRIVIAL_IM,
        }),
    )];
    checks.push(checked("membrane", LIMIT_INVARIANT, || {
        let mi = membrane_integral(&tempered_membrane()?)?;
        let diff = (mi.value + aj).norm();
        let edges: Vec<Value> =
            mi.edge_terms.iter().map(|(l, z)| json!({"edge": l, "value": cx(z.re, z.im)})).collect();
        Ok(Check::new(
            "membrane",
            LIMIT_INVARIANT,
            Status::from_bool(diff < 1e-8),
            json!({
                "closed_form": cx(aj.re, aj.im),
                "membrane": cx(-mi.value.re, -mi.value.im),
                "abs_diff": diff,
                "edges": edges,
            }),
        ))
    }));
    if oracle {
        checks.push(checked("quadrature_oracle", LIMIT_INVARIANT, || {
            let q = -membrane_quadrature(&tempered_membrane()?, QuadOptions::default())?;
            let diff = (q - aj).norm();
            Ok(Check::new(
                "quadrature_oracle",
                LIMIT_INVARIANT,
                Status::from_bool(diff < 1e-6),
                json!({"closed_form": cx(aj.re, aj.im), "quadrature": cx(q.re, q.im), "abs_diff": diff}),
            ))
        }));
    }
    let fe = check_functional_equations(1000, 0);
    let mu_ok = fe.mu_instances.iter().all(|(_, r)| *r < 1e-12);
    let mu: Vec<Value> = fe.mu_instances.iter().map(|(n, r)| json!({"instance": n, "residual": r})).collect();
    checks.push(Check::new(
        "functional_equations",
        LIMIT_INVARIANT,
        Status::from_bool(fe.max_residual_1 < 1e-12 && fe.max_residual_2 < 1e-12 && mu_ok),
        json!({
            "samples": fe.samples,
            "rejected": fe.rejected,
            "max_residual_1": fe.max_residual_1,
            "max_residual_2": fe.max_residual_2,
            "mu_instances": mu,
        }),
    ));
    checks
}

/// Default limit constant: |Im AJ|.
pub fn default_l() -> f64 {
    aj_closed_form().im.abs()
}

pub fn pairing(seed: Option<u64>, l_value: f64) -> Result<Vec<Check>> {
    if l_value == 0.0 || !l_value.is_finite() {
        return Err(Error::ZeroLimit);
    }
    let frame = Frame::new(DEFAULT_DK);
    let order = nilpotency_index(&frame.monodromy());
    let ker = monodromy_kernel(&frame).len();
    let mono = Check::new(
        "monodromy",
        HODGE_D,
        Status::from_bool(order == Some(3) && ker == DEFAULT_DK + 1),
        json!({"dK": DEFAULT_DK, "kernel_dimension": ker, "nilpotency_index": order}),
    );
    let ts = default_t_sequence();
    let (models, tails) = standard_models(DEFAULT_DK, l_value, seed);
    let limits = match independence_matrix(&frame, l_value, &models, &tails, &ts) {
        Ok(rep) => {
            let m = &rep.matrix;
            let mut worst: f64 = (m[0][0] + l_value).norm();
            for j in 1..m.len() {
                worst = worst.max(m[0][j].norm());
                for i in 1..m.len() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    worst = worst.max((m[i][j] - want).norm());
                }
            }
            let matrix: Vec<Value> =
                m.iter().map(|row| Value::Array(row.iter().map(|z| cx(z.re, z.im)).collect())).collect();
            vec![
                Check::new(
                    "pairing_limits",
                    HODGE_D,
                    Status::from_bool(worst < 1e-4),
                    json!({"max_deviation": worst, "tolerance": 1e-4}),
                ),
                Check::new(
                    "limit_matrix",
                    HODGE_D,
                    Status::from_bool(rep.independent),
                    json!({
                        "matrix": matrix,
                        "det": cx(rep.det.re, rep.det.im),
                        "L": l_value,
                        "verdict": if rep.independent { "independent" } else { "dependent" },
                        "seed": seed,
                        "t_sequence": rep.t_sequence.iter().map(|t| cx(t.re, t.im)).collect::<Vec<_>>(),
                    }),
                ),
            ]
        }
        Err(e) => vec![Check::errored("limit_matrix", HODGE_D, &e)],
    };
    Ok(std::iter::once(mono).chain(limits).collect())
}

pub fn threefold(d: usize) -> Check {
    checked("threefold_boundary", GRIFFITHS, || {
        let mut n = 0;
        let mut bad = Vec::new();
        for i in 1..=d {
            for j in i + 1..=d {
                for k in j + 1..=d {
                    for l in 1..=d {
                        let c = threefold_boundary(d, i, j, k, l)?;
                        let want = [((i, j), 1), ((j, k), 1), ((i, k), -1)];
                        let ok = c.terms.len() == 3
                            && want.iter().all(|(p, s)| {
                                c.terms.iter().any(|(line, coeff)| {
                                    line.pair == *p && line.other == l && format_rational(coeff) == format!("{s}/1")
                                })
                            });
                        n += 1;
                        if !ok {
                            bad.push(format!("C_{i}{j}{k},{l} = {c}"));
                        }
                    }
                }
            }
        }
        Ok(Check::new(
            "threefold_boundary",
            GRIFFITHS,
            Status::from_bool(bad.is_empty()),
            json!({"d": d, "checked": n, "mismatches": bad}),
        ))
    })
}

pub type Group = Box<dyn Fn() -> Vec<Check> + Send + Sync>;

/// Every suite at its default settings, grouped for parallel execution.
pub fn verify_all_groups() -> Vec<Group> {
    let mut g: Vec<Group> = Vec::new();
    for d in 2..=8 {
        g.push(Box::new(move || basis(d).unwrap_or_else(|e| vec![Check::errored("basis", BASIS, &e)])));
    }
    for d in 3..=6 {
        g.push(Box::new(move || {
            sing(d, FamilyArg::All)
                .unwrap_or_else(|e| vec![Check::errored("sing", MAIN, &e)])
                .into_iter()
                .filter(|c| c.name != "singularities")
                .collect()
        }));
        g.push(Box::new(move || vec![threefold(d)]));
    }
    g.push(Box::new(|| aj(true)));
    g.push(Box::new(|| pairing(Some(0), default_l()).unwrap_or_else(|e| vec![Check::errored("pairing", HODGE_D, &e)])));
    g.push(Box::new(|| pairing(None, default_l()).unwrap_or_else(|e| vec![Check::errored("pairing", HODGE_D, &e)])));
    g
}
