//! Every cross-check the library offers, run on one decomposition.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use serde_json::{json, Value};
use toric_mirror::linalg::IntMatrix;
use toric_mirror::polytope::monodromy_p;
use toric_mirror::series::{transport_slab, Exponent};
use toric_mirror::slab::{
    lift_invariance_for, solve_slabs, solve_slabs_in_order, verify_slab_functions,
    vertical_initial, SlabFunction,
};
use toric_mirror::trees::{b_coefficient, exp_form, leaf_labels, product_expansion, Grading};
use toric_mirror::{Decomposition, KaehlerData, Result};

/// Pure-`Q` degrees up to which `b_q` is recounted by explicit enumeration.
const EXPLICIT_B_DEGREE: i64 = 3;
const LEAF_CAP: usize = 64;

#[derive(Debug, Default)]
pub struct Outcome {
    pub checks: BTreeMap<String, bool>,
    pub errors: BTreeMap<String, String>,
}

impl Outcome {
    pub fn pass(&self) -> bool {
        self.errors.is_empty() && self.checks.values().all(|&b| b)
    }

    pub fn to_json(&self) -> Value {
        json!({ "pass": self.pass(), "checks": self.checks, "errors": self.errors })
    }

    fn record(&mut self, name: &str, r: Result<bool>) {
        match r {
            Ok(b) => {
                self.checks.insert(name.into(), b);
            }
            Err(e) => {
                self.errors.insert(name.into(), e.to_string());
            }
        }
    }
}

fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect())
        .collect()
}

fn adjacent_pairs(dec: &Decomposition) -> Vec<(usize, usize)> {
    let n = dec.num_vertices();
    (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| a != b && dec.adjacent(a, b))
        .collect()
}

fn corrections_vertices(dec: &Decomposition, kd: &KaehlerData) -> Vec<usize> {
    (0..dec.num_vertices())
        .filter(|&v| kd.rank == 0 || dec.is_interior_vertex(v))
        .collect()
}

fn expansions_agree(
    dec: &Decomposition,
    kd: &KaehlerData,
    fs: &[SlabFunction],
    k: u32,
) -> Result<bool> {
    for v in corrections_vertices(dec, kd) {
        let pe = product_expansion(dec, kd, v, k)?;
        let ef = exp_form(dec, kd, v, k)?;
        if pe.product != pe.slab || ef.series != ef.slab || pe.slab != ef.slab {
            return Ok(false);
        }
        let g = fs[v].g.with_truncation(pe.slab.truncation().clone());
        let b_terms: Vec<(Exponent, _)> = g
            .terms()
            .iter()
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        if pe.b != b_terms {
            return Ok(false);
        }
    }
    Ok(true)
}

fn explicit_b_agrees(
    dec: &Decomposition,
    kd: &KaehlerData,
    fs: &[SlabFunction],
    k: u32,
) -> Result<bool> {
    if kd.rank == 0 {
        return Ok(true);
    }
    for v in corrections_vertices(dec, kd) {
        let grading = Grading::at_vertex(dec, kd, v)?;
        let labels = leaf_labels(&fs[v]);
        let max = EXPLICIT_B_DEGREE.min(i64::from(k));
        for q in pure_q_exponents(dec.dim(), kd.rank, max) {
            let b = b_coefficient(&q, &labels, &grading, LEAF_CAP)?;
            if b != fs[v].g.coeff(&q) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All `q ∈ N^r` with `1 ≤ |q| ≤ max`.
fn pure_q_exponents(n: usize, rank: usize, max: i64) -> Vec<Exponent> {
    let mut out = vec![vec![]];
    for _ in 0..rank {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                let used: i64 = p.iter().sum();
                (0..=max - used).map(move |x| {
                    let mut p = p.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out.into_iter()
        .filter(|q| q.iter().sum::<i64>() >= 1)
        .map(|q| Exponent::new(vec![0; n], 0, q))
        .collect()
}

fn transports_round_trip(
    dec: &Decomposition,
    kd: &KaehlerData,
    fs: &[SlabFunction],
) -> Result<bool> {
    for (a, b) in adjacent_pairs(dec) {
        let there = transport_slab(dec, kd, &fs[a].f, a, b)?;
        if there != fs[b].f || transport_slab(dec, kd, &there, b, a)? != fs[a].f {
            return Ok(false);
        }
    }
    Ok(true)
}

fn monodromy_consistent(dec: &Decomposition, kd: &KaehlerData) -> Result<bool> {
    let size = dec.dim() + 1 + kd.rank;
    for (a, b) in adjacent_pairs(dec) {
        let t = monodromy_p(dec, kd, a, b)?;
        let back = monodromy_p(dec, kd, b, a)?;
        if !t.is_unipotent() || !t.det().is_one() || t.compose(&back) != identity(size) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn run(dec: &Decomposition, kd: &KaehlerData, k: u32) -> Outcome {
    let mut out = Outcome::default();
    out.record("strict_convexity", Ok(kd.rank == 0 || kd.strictly_convex));
    let fs = match solve_slabs(dec, kd, k).and_then(|s| s.slab_functions(dec, kd)) {
        Ok(fs) => fs,
        Err(e) => {
            out.record("solve", Err(e));
            return out;
        }
    };
    out.record(
        "conditions",
        verify_slab_functions(dec, kd, &fs, k).map(|r| r.all_pass()),
    );
    out.record(
        "solve_order_independent",
        (|| {
            let reversed: Vec<usize> = (0..dec.num_vertices()).rev().collect();
            Ok(solve_slabs_in_order(dec, kd, k, &reversed)?.slab_functions(dec, kd)? == fs)
        })(),
    );
    let initial = vertical_initial(dec, kd);
    out.record(
        "lift_invariance",
        lift_invariance_for(dec, kd, &fs, &initial).map(|r| r.all_pass()),
    );
    out.record("transport_round_trip", transports_round_trip(dec, kd, &fs));
    out.record("monodromy_unipotent", monodromy_consistent(dec, kd));
    out.record(
        "oracle_product_exp_solver",
        expansions_agree(dec, kd, &fs, k),
    );
    out.record("oracle_explicit_trees", explicit_b_agrees(dec, kd, &fs, k));

    // Negative controls: a planted pure-Q term must be caught.
    if kd.rank > 0 && k >= 1 {
        let mut bad = fs.clone();
        let v = dec.origin().unwrap_or(0);
        bad[v] = bad[v].corrupted(1);
        out.record(
            "control_conditions_detect_corruption",
            verify_slab_functions(dec, kd, &bad, k).map(|r| !r.all_pass()),
        );
        out.record(
            "control_lift_detects_corruption",
            lift_invariance_for(dec, kd, &bad, &initial).map(|r| !r.all_pass()),
        );
    }
    out
}
