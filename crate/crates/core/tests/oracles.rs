//! Independent computations of the same coefficients.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use toric_mirror::series::Exponent;
use toric_mirror::slab::{normalize, solve_slabs};
use toric_mirror::trees::{b_coefficient, exp_form, leaf_labels, product_expansion, Grading};
use toric_mirror::{fixtures, kaehler_data, Decomposition, KaehlerData};

/// Laurent polynomials in `x, y, t`, cut off at weight `a + b + 3c`.
type Dense = BTreeMap<(i64, i64, i64), BigRational>;

fn weight(e: &(i64, i64, i64)) -> i64 {
    e.0 + e.1 + 3 * e.2
}

fn dense_mul(a: &Dense, b: &Dense, cap: i64) -> Dense {
    let mut out = Dense::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = (ea.0 + eb.0, ea.1 + eb.1, ea.2 + eb.2);
            if weight(&e) <= cap {
                *out.entry(e).or_insert_with(BigRational::zero) += ca * cb;
            }
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `[t^d] log(1 + h)`, with `h` of positive weight.
fn log_t_coeffs(h: &Dense, cap: i64) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); (cap / 3 + 1) as usize];
    let mut power = h.clone();
    let mut n = 1i64;
    while !power.is_empty() {
        let c = BigRational::new(
            BigInt::from(if n % 2 == 1 { 1 } else { -1 }),
            BigInt::from(n),
        );
        for (e, x) in &power {
            if e.0 == 0 && e.1 == 0 {
                out[e.2 as usize] += &c * x;
            }
        }
        power = dense_mul(&power, h, cap);
        n += 1;
    }
    out
}

/// `g(t)` making `log(1 + x + y + t/(xy) + g)` free of pure powers of `t`.
fn local_p2_oracle(k: usize) -> Vec<BigRational> {
    let mut h = Dense::new();
    for e in [(1, 0, 0), (0, 1, 0), (-1, -1, 1)] {
        h.insert(e, BigRational::one());
    }
    let mut g = vec![BigRational::zero(); k + 1];
    for d in 1..=k {
        let log = log_t_coeffs(&h, 3 * d as i64);
        g[d] = -log[d].clone();
        h.insert((0, 0, d as i64), g[d].clone());
    }
    g
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn origin_g(dec: &Decomposition, kd: &KaehlerData, k: u32) -> BTreeMap<Vec<i64>, BigRational> {
    let o = dec.origin().unwrap();
    let sf = normalize(dec, kd, o, k).unwrap();
    sf.g.terms()
        .iter()
        .map(|(e, c)| (e.q.clone(), c.clone()))
        .collect()
}

#[test]
fn local_p2_solver_matches_dense_oracle_to_order_6() {
    let dec = fixtures::local_p2();
    let kd = kaehler_data(&dec).unwrap();
    let oracle = local_p2_oracle(6);
    assert_eq!(
        &oracle[1..6],
        &[int(-2), int(5), int(-32), int(286), int(-3038)]
    );
    let g = origin_g(&dec, &kd, 6);
    for (d, c) in oracle.iter().enumerate().skip(1) {
        assert_eq!(
            g.get(&vec![d as i64]).cloned().unwrap_or_default(),
            *c,
            "t^{d}"
        );
    }
}

fn interior_or_all(dec: &Decomposition, kd: &KaehlerData) -> Vec<usize> {
    (0..dec.num_vertices())
        .filter(|&v| kd.rank == 0 || dec.is_interior_vertex(v))
        .collect()
}

#[test]
fn product_exp_and_solver_agree_for_every_fixture_to_order_5() {
    for name in fixtures::NAMES {
        let dec = fixtures::by_name(name).unwrap();
        let kd = kaehler_data(&dec).unwrap();
        for k in 0..=5 {
            let fs = solve_slabs(&dec, &kd, k)
                .unwrap()
                .slab_functions(&dec, &kd)
                .unwrap();
            for v in interior_or_all(&dec, &kd) {
                let pe = product_expansion(&dec, &kd, v, k).unwrap();
                let ef = exp_form(&dec, &kd, v, k).unwrap();
                assert_eq!(
                    pe.slab,
                    fs[v].f.with_truncation(pe.slab.truncation().clone()),
                    "{name} k={k}"
                );
                assert_eq!(pe.product, pe.slab, "{name} k={k} product");
                assert_eq!(ef.series, ef.slab, "{name} k={k} exp form");
                for (q, b) in &pe.b {
                    assert_eq!(fs[v].g.coeff(q), *b, "{name} k={k} b{q:?}");
                }
                assert_eq!(pe.b.len(), fs[v].g.len(), "{name} k={k}");
            }
        }
    }
}

#[test]
fn explicit_tree_counts_reproduce_g() {
    let cases: [(&str, i64); 3] = [("interval", 4), ("local-p2", 3), ("star-square", 3)];
    for (name, max) in cases {
        let dec = fixtures::by_name(name).unwrap();
        let kd = kaehler_data(&dec).unwrap();
        let k = max as u32;
        for v in interior_or_all(&dec, &kd) {
            let sf = normalize(&dec, &kd, v, k).unwrap();
            let labels = leaf_labels(&sf);
            let grading = Grading::at_vertex(&dec, &kd, v).unwrap();
            for a in 0..=max {
                for b in 0..=max {
                    let q: Vec<i64> = if kd.rank == 1 { vec![a] } else { vec![a, b] };
                    if (kd.rank == 1 && b > 0)
                        || q.iter().sum::<i64>() == 0
                        || q.iter().sum::<i64>() > max
                    {
                        continue;
                    }
                    let e = Exponent::new(vec![0; dec.dim()], 0, q.clone());
                    let count = b_coefficient(&e, &labels, &grading, 64).unwrap();
                    assert_eq!(count, sf.g.coeff(&e), "{name} v={v} q={q:?}");
                }
            }
        }
    }
}

/// Decompositions with two interior lattice points, `(0)`/`(1)` or `(0,0)`/`(1,0)`.
const TWO_INTERIOR: [&str; 3] = [
    r#"{"dim": 1, "vertices": [[-1], [0], [1], [2]], "maximal_cells": [[0, 1], [1, 2], [2, 3]], "base_cell": 1}"#,
    r#"{"dim": 2, "vertices": [[0, 0], [-1, -1], [0, 1], [1, 0], [2, 0]],
        "maximal_cells": [[0, 2, 1], [2, 3, 4], [0, 3, 2], [4, 3, 1], [3, 0, 1]], "base_cell": 0}"#,
    r#"{"dim": 2, "vertices": [[0, 0], [-1, 0], [0, -1], [0, 1], [1, 0], [2, 0]],
        "maximal_cells": [[3, 4, 5], [4, 2, 5], [0, 4, 3], [4, 0, 2], [0, 3, 1], [2, 0, 1]], "base_cell": 2}"#,
];

#[test]
fn tree_expansions_at_both_interior_points_agree_with_the_solver() {
    use toric_mirror::series::transport_slab;
    use toric_mirror::slab::verify_conditions;

    for doc in TWO_INTERIOR {
        let dec = toric_mirror::parse_input(doc).unwrap();
        let kd = kaehler_data(&dec).unwrap();
        let k = 3;
        assert!(verify_conditions(&dec, &kd, k).unwrap().all_pass());
        let interior: Vec<usize> = (0..dec.num_vertices())
            .filter(|&v| dec.is_interior_vertex(v))
            .collect();
        assert_eq!(interior.len(), 2);
        let fs = solve_slabs(&dec, &kd, k)
            .unwrap()
            .slab_functions(&dec, &kd)
            .unwrap();
        for &v in &interior {
            let pe = product_expansion(&dec, &kd, v, k).unwrap();
            assert_eq!(pe.product, pe.slab);
            assert_eq!(exp_form(&dec, &kd, v, k).unwrap().series, pe.slab);
            let labels = leaf_labels(&fs[v]);
            let grading = Grading::at_vertex(&dec, &kd, v).unwrap();
            for (q, c) in fs[v].g.terms() {
                if q.deg() <= 2 {
                    assert_eq!(
                        &b_coefficient(q, &labels, &grading, 64).unwrap(),
                        c,
                        "{q:?}"
                    );
                }
            }
        }
        // Two tree expansions, with different label sets, describe one function.
        let (a, b) = (interior[0], interior[1]);
        assert_eq!(transport_slab(&dec, &kd, &fs[a].f, a, b).unwrap(), fs[b].f);
    }
}
