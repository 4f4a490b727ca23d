//! One PASS/FAIL line per acceptance criterion, driven through the binary
//! where the criterion names a command and through the library otherwise.
//! Runs without the test harness so the lines always reach stdout.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use serde_json::Value;
use toric_mirror::kaehler::member_pbar;
use toric_mirror::linalg::IntMatrix;
use toric_mirror::polytope::monodromy_p;
use toric_mirror::series::{transport_slab, Exponent, Series, Truncation};
use toric_mirror::slab::{solve_slabs, verify_conditions};
use toric_mirror::{fixtures, kaehler_data, LatticeVector};

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_toric-mirror"))
        .args(args)
        .output()
        .expect("binary runs");
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), json)
}

fn ok(args: &[&str]) -> Value {
    let (code, json) = run(args);
    assert_eq!(code, 0, "{args:?} exited with {code}: {json}");
    json
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn ints(v: &Value) -> Vec<i64> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_i64().unwrap())
        .collect()
}

/// `(m, r, q) -> coefficient` from a serialized series.
type Term = ((Vec<i64>, i64, Vec<i64>), BigRational);

fn terms(v: &Value) -> Vec<Term> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|t| {
            let c: BigRational = t["coeff"].as_str().unwrap().parse().unwrap();
            ((ints(&t["m"]), t["r"].as_i64().unwrap(), ints(&t["q"])), c)
        })
        .collect()
}

fn criterion_1() -> Result<String, String> {
    let json = ok(&["slab", "--fixture", "local-p2", "--order", "5"]);
    let g: Vec<(i64, BigRational)> = terms(&json["slab"]["g"])
        .into_iter()
        .map(|((m, _, q), c)| {
            assert!(m.iter().all(|&x| x == 0));
            (q[0], c)
        })
        .collect();
    let want: Vec<(i64, BigRational)> = [-2, 5, -32, 286, -3038]
        .iter()
        .enumerate()
        .map(|(i, &c)| (i as i64 + 1, int(c)))
        .collect();
    if g == want {
        Ok(json["slab"]["g_text"].as_str().unwrap().to_string())
    } else {
        Err(format!("got {g:?}"))
    }
}

fn criterion_2() -> Result<String, String> {
    let want = [
        ("-1", "1 + x + x*t + x^2*t"),
        ("0", "x^-1 + 1 + t + x*t"),
        ("1", "x^-2*t^-1 + x^-1*t^-1 + x^-1 + 1"),
    ];
    for (v, f) in want {
        let json = ok(&["slab", "--fixture", "interval", "--vertex", v]);
        let got = json["slab"]["f_text"].as_str().unwrap();
        if got != f {
            return Err(format!("vertex {v}: {got}"));
        }
    }
    let dec = fixtures::interval();
    let kd = kaehler_data(&dec).unwrap();
    let o = dec.origin().unwrap();
    let f0 = solve_slabs(&dec, &kd, 5)
        .unwrap()
        .slab_function(&dec, &kd, o)
        .unwrap()
        .f;
    let p = Truncation::polynomial();
    let mono = |m: i64, q: i64| {
        Series::monomial(
            Exponent::new(vec![m], 0, vec![q]),
            BigRational::one(),
            p.clone(),
        )
    };
    let one = Series::one(1, 1, p.clone());
    let product = one.add(&mono(-1, 0)).mul(&one.add(&mono(1, 1))).unwrap();
    if product != f0 {
        return Err(format!("(1 + x^-1)(1 + x*t) = {product}, f_0 = {f0}"));
    }
    Ok("three vertex functions verbatim, f_0 = (1 + x^-1)(1 + x*t)".into())
}

fn criterion_3() -> Result<String, String> {
    let json = ok(&["slab", "--fixture", "star-square", "--order", "3"]);
    let g: BTreeSet<(Vec<i64>, String)> = terms(&json["slab"]["g"])
        .into_iter()
        .map(|((_, _, q), c)| (q, c.to_string()))
        .collect();
    let want: BTreeSet<(Vec<i64>, String)> = [
        ([1, 0], "1"),
        ([0, 1], "1"),
        ([1, 1], "3"),
        ([2, 1], "5"),
        ([1, 2], "5"),
    ]
    .into_iter()
    .map(|(q, c)| (q.to_vec(), c.to_string()))
    .collect();
    if g == want {
        Ok(json["slab"]["g_text"].as_str().unwrap().to_string())
    } else {
        Err(format!("got {g:?}"))
    }
}

fn criterion_4() -> Result<String, String> {
    let kaehler = |name: &str| ok(&["analyze", "--fixture", name]);
    let interval = kaehler("interval");
    let gens: Vec<Vec<i64>> = interval["kaehler"]["generators"]
        .as_array()
        .unwrap()
        .iter()
        .map(ints)
        .collect();
    let points: Vec<&str> = interval["lattice_points"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| p.as_str().unwrap())
        .collect();
    // Generator values listed in the order of the lattice points -1, 0, 1.
    let by_point: Vec<i64> = points
        .iter()
        .map(|p| ints(&interval["psibar_by_point"][*p])[0])
        .collect();
    if interval["kaehler"]["rank"] != 1 || gens.len() != 1 || by_point != vec![0, 0, 1] {
        return Err(format!("interval: {gens:?} {by_point:?}"));
    }
    let p2 = kaehler("local-p2");
    let psi = &p2["psibar_by_point"];
    let others_zero = ["(0,0)", "(1,0)", "(0,1)"]
        .iter()
        .all(|p| ints(&psi[*p]) == vec![0]);
    if p2["kaehler"]["rank"] != 1 || ints(&psi["(-1,-1)"]) != vec![1] || !others_zero {
        return Err(format!("local P2: {psi}"));
    }
    let square = kaehler("star-square");
    if square["kaehler"]["rank"] != 2 || square["strictly_convex"] != true {
        return Err(format!("star-square: {}", square["kaehler"]));
    }
    let simplex = kaehler("simplex");
    if simplex["kaehler"]["rank"] != 0 || !simplex["walls"].as_array().unwrap().is_empty() {
        return Err("simplex should have rank 0 and no walls".into());
    }
    Ok("Q = N, N, N^2; psibar values as expected".into())
}

fn criterion_5() -> Result<String, String> {
    let json = ok(&["expand", "--fixture", "local-p2", "--order", "4"]);
    // In the frame of the interior point `x^a y^b t^c = x^{a+c} y^{b+c} z^c`.
    let mut by_degree = [0usize; 5];
    for f in json["factors"].as_array().unwrap() {
        let m = ints(&f["exponent"]["m"]);
        let c = ints(&f["exponent"]["q"])[0];
        let (px, py) = (m[0] + c, m[1] + c);
        let degree = px + py + c;
        if px < 0 || py < 0 {
            return Err(format!("factor outside x, y, z: {f}"));
        }
        if degree > 4 {
            continue;
        }
        let a: BigRational = f["a"].as_str().unwrap().parse().unwrap();
        let sign = if degree % 2 == 1 { 1 } else { -1 };
        if a != int(sign) {
            return Err(format!("a = {a} for {}", f["monomial"]));
        }
        by_degree[degree as usize] += 1;
    }
    if by_degree[1..] != [3, 3, 6, 12] {
        return Err(format!("factor counts by degree {by_degree:?}"));
    }
    let trees = ok(&["trees", "--fixture", "local-p2", "--target", "x2y2"]);
    let mut internal: Vec<i64> = trees["types"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["internal_vertices"].as_i64().unwrap())
        .collect();
    internal.sort_unstable();
    let signs: Vec<i64> = trees["types"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["sign"].as_i64().unwrap())
        .collect();
    let sign_ok = signs
        .iter()
        .zip(trees["types"].as_array().unwrap())
        .all(|(s, t)| {
            *s == if t["internal_vertices"].as_i64().unwrap() % 2 == 0 {
                1
            } else {
                -1
            }
        });
    if internal != vec![2, 3, 3] || !sign_ok || trees["coefficient"] != "-1" {
        return Err(format!(
            "x2y2 types: internal vertices {internal:?}, coefficient {}",
            trees["coefficient"]
        ));
    }
    Ok("signs +,-,+,- through degree 4 (3, 3, 6, 12 factors); x2y2 from 3 types, a = -1".into())
}

fn criterion_6() -> Result<String, String> {
    for k in 0..=5 {
        let k = k.to_string();
        let (code, json) = run(&["selfcheck", "--order", &k]);
        if code != 0 {
            return Err(format!("selfcheck --order {k}: exit {code}: {json}"));
        }
    }
    Ok("selfcheck exit 0 for k = 0..5 on all fixtures".into())
}

fn criterion_7() -> Result<String, String> {
    let json = ok(&[
        "broken-lines",
        "--fixture",
        "interval",
        "--vertex",
        "0",
        "--order",
        "1",
    ]);
    let lines = json["lines"].as_array().unwrap();
    let finals: BTreeSet<(Vec<i64>, i64, Vec<i64>)> = lines
        .iter()
        .map(|l| {
            let e = &l["segments"].as_array().unwrap().last().unwrap()["exponent"];
            (ints(&e["m"]), e["r"].as_i64().unwrap(), ints(&e["q"]))
        })
        .collect();
    let want: BTreeSet<(Vec<i64>, i64, Vec<i64>)> = [(0, 0), (0, 1), (-1, 0), (1, 1)]
        .into_iter()
        .map(|(m, q)| (vec![m], -1, vec![q]))
        .collect();
    if lines.len() != 4 || finals != want || json["unbent"] != 2 {
        return Err(format!(
            "{} lines, finals {finals:?}, unbent {}",
            lines.len(),
            json["unbent"]
        ));
    }
    let lift = ok(&["broken-lines", "--fixture", "interval", "--order", "5"]);
    let pairs = lift["lift_invariance"]["pairs"].as_array().unwrap().len();
    if lift["lift_invariance"]["all_pass"] != true || pairs == 0 {
        return Err("lift invariance failed at k = 5".into());
    }
    Ok(format!(
        "4 lines, 2 unbent; lift invariant over {pairs} vertex pairs at k = 5"
    ))
}

fn criterion_8() -> Result<String, String> {
    let slab = ok(&["slab", "--fixture", "local-p2", "--order", "6"]);
    let from_solver = terms(&slab["slab"]["g"])
        .into_iter()
        .find(|((_, _, q), _)| q == &vec![6])
        .map(|t| t.1);
    let expand = ok(&["expand", "--fixture", "local-p2", "--order", "6"]);
    let from_trees: Option<BigRational> = expand["b"]
        .as_array()
        .unwrap()
        .iter()
        .find(|b| ints(&b["exponent"]["q"]) == vec![6])
        .map(|b| b["b"].as_str().unwrap().parse().unwrap());
    match (from_solver, from_trees) {
        (Some(a), Some(b)) if a == b => Ok(format!("coefficient of t^6 = {a} on both paths")),
        (a, b) => Err(format!("solver {a:?}, trees {b:?}")),
    }
}

fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect())
        .collect()
}

fn criterion_9() -> Result<String, String> {
    let mut runner = TestRunner::new(Config {
        cases: 32,
        failure_persistence: None,
        ..Config::default()
    });
    let fixture = |i: usize| fixtures::by_name(fixtures::NAMES[i]).unwrap();
    let mut checks = 0;

    runner
        .run(&(0usize..4, 0u32..=4), |(i, k)| {
            let dec = fixture(i);
            let kd = kaehler_data(&dec).unwrap();
            prop_assert!(verify_conditions(&dec, &kd, k).unwrap().all_pass());
            let fs = solve_slabs(&dec, &kd, k)
                .unwrap()
                .slab_functions(&dec, &kd)
                .unwrap();
            for (a, fa) in fs.iter().enumerate() {
                for b in (0..dec.num_vertices()).filter(|&b| b != a && dec.adjacent(a, b)) {
                    let there = transport_slab(&dec, &kd, &fa.f, a, b).unwrap();
                    prop_assert_eq!(
                        transport_slab(&dec, &kd, &there, b, a).unwrap(),
                        fa.f.clone()
                    );
                    let t = monodromy_p(&dec, &kd, a, b).unwrap();
                    prop_assert!(t.is_unipotent());
                    let size = dec.dim() + 1 + kd.rank;
                    prop_assert_eq!(
                        t.compose(&monodromy_p(&dec, &kd, b, a).unwrap()),
                        identity(size)
                    );
                }
            }
            Ok(())
        })
        .map_err(|e| format!("conditions/transport/monodromy: {e}"))?;
    checks += 1;

    let term = (-2i64..=2, -2i64..=2, 1i64..=3, -3i64..=3);
    runner
        .run(&prop::collection::vec(term, 0..5), |ts| {
            let trunc = Truncation::q_degree(4);
            let h = Series::from_terms(
                ts.into_iter()
                    .map(|(a, b, q, c)| (Exponent::new(vec![a, b], 0, vec![q]), int(c))),
                trunc.clone(),
            );
            let f = Series::one(2, 1, trunc).add(&h);
            prop_assert_eq!(f.log().unwrap().exp_in(2, 1).unwrap(), f);
            prop_assert_eq!(h.exp_in(2, 1).unwrap().log().unwrap(), h);
            Ok(())
        })
        .map_err(|e| format!("log/exp: {e}"))?;
    checks += 1;

    let coords = prop::collection::vec(-3i64..=3, 4);
    runner
        .run(
            &(
                1usize..3,
                0usize..5,
                coords,
                prop::collection::vec(0i64..=3, 4),
            ),
            |(i, v, m, q)| {
                let dec = fixture(i);
                let kd = kaehler_data(&dec).unwrap();
                let v = v % dec.num_vertices();
                let r = kd.rank;
                let q: Vec<Vec<BigInt>> = vec![
                    q[..r].iter().map(|&x| BigInt::from(x)).collect(),
                    q[2..2 + r].iter().map(|&x| BigInt::from(x)).collect(),
                ];
                let (m1, m2) = (
                    LatticeVector::from_i64(&m[..2]),
                    LatticeVector::from_i64(&m[2..]),
                );
                prop_assert!(member_pbar(
                    &dec,
                    &kd,
                    v,
                    &LatticeVector::zero(2),
                    &vec![BigInt::zero(); r]
                ));
                if member_pbar(&dec, &kd, v, &m1, &q[0]) && member_pbar(&dec, &kd, v, &m2, &q[1]) {
                    let m = LatticeVector(m1.0.iter().zip(&m2.0).map(|(a, b)| a + b).collect());
                    let sum: Vec<BigInt> = q[0].iter().zip(&q[1]).map(|(a, b)| a + b).collect();
                    prop_assert!(member_pbar(&dec, &kd, v, &m, &sum));
                }
                Ok(())
            },
        )
        .map_err(|e| format!("P̄_v closure: {e}"))?;
    checks += 1;

    Ok(format!("{checks} randomized families green; full suites: cargo test -p toric-mirror --test properties"))
}

fn main() -> std::process::ExitCode {
    type Criterion = (u32, &'static str, fn() -> Result<String, String>, Duration);
    let criteria: [Criterion; 9] = [
        (
            1,
            "local P2 normalization to order 5",
            criterion_1,
            Duration::from_secs(10),
        ),
        (
            2,
            "interval slab functions and factorization",
            criterion_2,
            Duration::from_secs(1),
        ),
        (
            3,
            "star-square g through degree 3",
            criterion_3,
            Duration::from_secs(10),
        ),
        (
            4,
            "Kaehler data of the fixtures",
            criterion_4,
            Duration::from_secs(10),
        ),
        (
            5,
            "local P2 product factors and x2y2 trees",
            criterion_5,
            Duration::from_secs(30),
        ),
        (
            6,
            "oracle equivalence for k <= 5",
            criterion_6,
            Duration::from_secs(60),
        ),
        (
            7,
            "broken lines and lift invariance",
            criterion_7,
            Duration::from_secs(10),
        ),
        (
            8,
            "order-6 local P2: solver vs trees",
            criterion_8,
            Duration::from_secs(60),
        ),
        (
            9,
            "randomized property suites",
            criterion_9,
            Duration::from_secs(120),
        ),
    ];
    let mut failed = Vec::new();
    for (n, name, check, budget) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = match result {
            Ok(detail) if elapsed > budget => {
                Err(format!("{detail}; took {elapsed:.2?}, budget {budget:?}"))
            }
            r => r,
        };
        match &result {
            Ok(detail) => println!("PASS criterion {n}: {name} [{elapsed:.2?}] {detail}"),
            Err(why) => {
                println!("FAIL criterion {n}: {name} [{elapsed:.2?}] {why}");
                failed.push(n);
            }
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 9 criteria pass");
        std::process::ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::ExitCode::FAILURE
    }
}
