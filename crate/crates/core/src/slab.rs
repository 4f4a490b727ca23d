//! Normalized slab functions, the mirror equation and broken lines.
//!
//! Every slab function is a frame shift of one homogeneous polynomial
//! `F = Σ_m c_m z^{(m, ψ̄(m), 1)}` over the lattice points of `σ`, with
//! corrections `c_m ∈ 1 + k[Q]^+`. In the frame of a vertex `v`,
//! `f_v = Σ_m c_m z^{(m - v, ψ̄(m) - ψ̄(v))}`, so frames are related by
//! monomial shifts and the only real condition is that `log f_v` has no
//! pure-`Q` part. The correction `c_v` enters that part linearly at each
//! degree and nothing else of the same degree does, which gives a
//! triangular solve.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::kaehler::{cell_linear_part, member_pbar, KaehlerData};
use crate::linalg;
use crate::polytope::{int_list_json, lattice_points, monodromy_p, Decomposition, LatticeVector};
use crate::series::{
    frame_shift, transport_slab, Exponent, Potential, Series, Truncation, VarNames,
};

fn to_i64(xs: &[BigInt]) -> Result<Vec<i64>> {
    LatticeVector(xs.to_vec()).to_i64()
}

/// Exponent of the lattice point `u` in the frame of `v`.
fn naive_exponent(dec: &Decomposition, kd: &KaehlerData, v: usize, u: usize) -> Result<Exponent> {
    frame_shift(dec, kd, u, v)
}

/// `Σ_{m ∈ σ∩M} z^{(m - v, ψ̄(m) - ψ̄(v))}`.
pub fn naive_slab(
    dec: &Decomposition,
    kd: &KaehlerData,
    v: usize,
    trunc: &Truncation,
) -> Result<Series> {
    let terms = (0..dec.num_vertices())
        .map(|u| Ok((naive_exponent(dec, kd, v, u)?, BigRational::one())))
        .collect::<Result<Vec<_>>>()?;
    Ok(Series::from_terms(terms, trunc.clone()))
}

/// The window in which pure-`Q` parts of `log f_v` up to order `k` are exact.
///
/// Let `L` be the linear part of `ψ̄` on a cell `τ ∋ v`, `w = Σ_k L_k` and
/// `deg_w(m, q) = Σq - w·m`; this is nonnegative on `P̄_v` and vanishes on
/// pure `Q` only at `0`. Terms of `deg_w = 0` are the edges of `τ`, which the
/// dual-basis sum `ℓ` makes strictly positive. `λ` is the least positive integer making
/// `ℓ + λ·deg_w` nonnegative on the remaining support, so the window
/// `{deg_w ≤ k, ℓ·m + λ·deg_w ≤ λk}` is cut out by nonnegative additive
/// functions and contains every pure-`Q` exponent of degree at most `k`.
pub fn frame_truncation(
    dec: &Decomposition,
    kd: &KaehlerData,
    v: usize,
    k: u32,
) -> Result<Truncation> {
    let n = dec.dim();
    let cell = if dec.base_vertices().contains(&v) {
        dec.base_cell()
    } else {
        *dec.cells_containing(v)
            .first()
            .ok_or_else(|| Error::UnknownVertex(v.to_string()))?
    };
    let lin = cell_linear_part(dec, kd, cell, v);
    let w: Vec<BigInt> = lin.iter().map(|row| row.iter().sum()).collect();
    let w = to_i64(&w)?;
    let inv = linalg::unimodular_inverse(&linalg::transpose(&dec.edge_vectors(cell, v)))
        .ok_or_else(|| Error::Internal("cell is not a standard simplex".into()))?;
    let ell: Vec<BigInt> = (0..n)
        .map(|i| inv.iter().map(|row| row[i].clone()).sum())
        .collect();
    let ell = to_i64(&ell)?;
    // λ ≥ 1 keeps the degree-zero support itself inside the window.
    let mut lambda = 1i64;
    for u in 0..dec.num_vertices() {
        if u == v {
            continue;
        }
        let e = naive_exponent(dec, kd, v, u)?;
        let cost = e.deg() - w.iter().zip(&e.m).map(|(a, b)| a * b).sum::<i64>();
        let lm: i64 = ell.iter().zip(&e.m).map(|(a, b)| a * b).sum();
        match cost.signum() {
            -1 => return Err(Error::Internal(format!("ψ̄ is not convex at vertex {v}"))),
            0 if lm < 1 => {
                return Err(Error::TruncationOverflow(format!(
                    "degree-zero support at vertex {v} is not salient; ψ̄ is not strictly convex"
                )))
            }
            0 => {}
            _ => lambda = lambda.max(-lm.div_euclid(cost)),
        }
    }
    let cap = (i64::from(k) * (1 + lambda)).max(1);
    let factor_cap =
        u32::try_from(cap).map_err(|_| Error::TruncationOverflow("factor cap too large".into()))?;
    let pts = lattice_points(dec);
    let diam = pts
        .iter()
        .flat_map(|a| {
            pts.iter()
                .map(move |b| a.sub(b).0.iter().map(|x| x.abs()).max().unwrap_or_default())
        })
        .max()
        .unwrap_or_default()
        .to_i64()
        .ok_or_else(|| Error::ExponentOverflow("diameter".into()))?;
    Ok(Truncation {
        order: Some(k),
        weights: w,
        potential: Some(Potential { ell, lambda }),
        support_bound: Some(cap * diam.max(1)),
        factor_cap,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlabFunction {
    pub vertex: usize,
    /// Exact polynomial in the frame of `vertex`.
    pub f: Series,
    pub order: u32,
    /// Pure-`Q` correction attached to `vertex` itself.
    pub g: Series,
}

impl SlabFunction {
    pub fn to_json(&self, dec: &Decomposition, names: &VarNames) -> Value {
        json!({
            "vertex": self.vertex,
            "point": dec.vertex(self.vertex),
            "order": self.order,
            "f": self.f.to_json(),
            "g": self.g.to_json(),
            "f_text": self.f.render(names),
            "g_text": self.g.render(names),
        })
    }

    /// Adds `t^d` (first generator of `Q`) to `g` and `f`, for negative controls.
    pub fn corrupted(&self, d: i64) -> Self {
        let mut out = self.clone();
        let Some(e0) = self.f.terms().keys().next() else {
            return out;
        };
        if e0.q.is_empty() {
            return out;
        }
        let mut q = vec![0; e0.q.len()];
        q[0] = d;
        let e = Exponent::new(vec![0; e0.m.len()], 0, q);
        out.f.add_term(e.clone(), BigRational::one());
        out.g.add_term(e, BigRational::one());
        out
    }
}

/// Corrections `c_m` for every lattice point, up to `Q`-degree `order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlabSolution {
    pub order: u32,
    pub corrections: Vec<Series>,
}

impl SlabSolution {
    pub fn slab_function(
        &self,
        dec: &Decomposition,
        kd: &KaehlerData,
        v: usize,
    ) -> Result<SlabFunction> {
        let f = frame_polynomial(dec, kd, &self.corrections, v, &Truncation::polynomial())?;
        let one = Series::one(dec.dim(), kd.rank, Truncation::polynomial());
        Ok(SlabFunction {
            vertex: v,
            f,
            order: self.order,
            g: self.corrections[v].sub(&one),
        })
    }

    pub fn slab_functions(
        &self,
        dec: &Decomposition,
        kd: &KaehlerData,
    ) -> Result<Vec<SlabFunction>> {
        (0..dec.num_vertices())
            .map(|v| self.slab_function(dec, kd, v))
            .collect()
    }
}

/// `Σ_u c_u z^{(u - v, ψ̄(u) - ψ̄(v))}` in the given window.
fn frame_polynomial(
    dec: &Decomposition,
    kd: &KaehlerData,
    corrections: &[Series],
    v: usize,
    trunc: &Truncation,
) -> Result<Series> {
    let mut out = Series::zero(trunc.clone());
    for (u, c) in corrections.iter().enumerate() {
        let base = naive_exponent(dec, kd, v, u)?;
        for (e, x) in c.terms() {
            out.add_term(base.checked_add(e)?, x.clone());
        }
    }
    Ok(out)
}

pub fn solve_slabs(dec: &Decomposition, kd: &KaehlerData, k: u32) -> Result<SlabSolution> {
    let order: Vec<usize> = (0..dec.num_vertices()).collect();
    solve_slabs_in_order(dec, kd, k, &order)
}

/// The triangular solve, visiting vertices in `visit` order within each degree.
pub fn solve_slabs_in_order(
    dec: &Decomposition,
    kd: &KaehlerData,
    k: u32,
    visit: &[usize],
) -> Result<SlabSolution> {
    let poly = Truncation::polynomial();
    let mut corrections = vec![Series::one(dec.dim(), kd.rank, poly); dec.num_vertices()];
    if kd.rank > 0 {
        for d in 1..=k {
            for &v in visit {
                let window = frame_truncation(dec, kd, v, d)?;
                let lg = frame_polynomial(dec, kd, &corrections, v, &window)?.log()?;
                let part = lg.pure_q_degree(i64::from(d));
                if part.is_empty() {
                    continue;
                }
                corrections[v] = corrections[v].sub(&part);
                let check = frame_polynomial(dec, kd, &corrections, v, &window)?.log()?;
                if !check.pure_q_degree(i64::from(d)).is_empty() {
                    return Err(Error::Internal(format!(
                        "degree {d} correction at vertex {v} did not cancel the pure-Q part"
                    )));
                }
            }
        }
    }
    for c in &corrections {
        c.assert_integral()?;
    }
    Ok(SlabSolution {
        order: k,
        corrections,
    })
}

/// The normalized slab function at `v` to `Q`-order `k`.
pub fn normalize(dec: &Decomposition, kd: &KaehlerData, v: usize, k: u32) -> Result<SlabFunction> {
    if v >= dec.num_vertices() {
        return Err(Error::UnknownVertex(v.to_string()));
    }
    solve_slabs(dec, kd, k)?.slab_function(dec, kd, v)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexConditions {
    pub vertex: usize,
    pub constant_term_one: bool,
    pub exponents_in_pbar: bool,
    pub no_pure_q_in_log: bool,
    /// Lowest degree of a pure-`Q` term of `log f_v`.
    pub first_failure_degree: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransportCheck {
    pub from: usize,
    pub to: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionReport {
    pub order: u32,
    pub vertices: Vec<VertexConditions>,
    pub transports: Vec<TransportCheck>,
    /// One slab function per vertex, so slabs meeting at `v` agree there.
    pub condition4_by_construction: bool,
}

impl ConditionReport {
    pub fn condition1(&self) -> bool {
        self.vertices
            .iter()
            .all(|v| v.constant_term_one && v.exponents_in_pbar)
    }

    pub fn condition2(&self) -> bool {
        self.transports.iter().all(|t| t.pass)
    }

    pub fn condition3(&self) -> bool {
        self.vertices.iter().all(|v| v.no_pure_q_in_log)
    }

    pub fn all_pass(&self) -> bool {
        self.condition1()
            && self.condition2()
            && self.condition3()
            && self.condition4_by_construction
    }

    pub fn first_failure_degree(&self) -> Option<i64> {
        self.vertices
            .iter()
            .filter_map(|v| v.first_failure_degree)
            .min()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order,
            "condition1": self.condition1(),
            "condition2": self.condition2(),
            "condition3": self.condition3(),
            "condition4": self.condition4_by_construction,
            "first_failure_degree": self.first_failure_degree(),
            "vertices": self.vertices.iter().map(|v| json!({
                "vertex": v.vertex,
                "constant_term_one": v.constant_term_one,
                "exponents_in_pbar": v.exponents_in_pbar,
                "no_pure_q_in_log": v.no_pure_q_in_log,
                "first_failure_degree": v.first_failure_degree,
            })).collect::<Vec<_>>(),
            "transports": self.transports.iter().map(|t| json!({
                "from": t.from, "to": t.to, "pass": t.pass,
            })).collect::<Vec<_>>(),
        })
    }
}

pub fn verify_conditions(dec: &Decomposition, kd: &KaehlerData, k: u32) -> Result<ConditionReport> {
    let fs = solve_slabs(dec, kd, k)?.slab_functions(dec, kd)?;
    verify_slab_functions(dec, kd, &fs, k)
}

/// Checks conditions 1-3 on an arbitrary family of per-vertex functions.
pub fn verify_slab_functions(
    dec: &Decomposition,
    kd: &KaehlerData,
    fs: &[SlabFunction],
    k: u32,
) -> Result<ConditionReport> {
    let mut vertices = Vec::new();
    for sf in fs {
        let v = sf.vertex;
        let constant_term_one = sf.f.constant_term().is_one();
        let exponents_in_pbar = sf.f.terms().keys().all(|e| {
            let m = LatticeVector::from_i64(&e.m);
            let q: Vec<BigInt> = e.q.iter().map(|&x| BigInt::from(x)).collect();
            e.r == 0 && member_pbar(dec, kd, v, &m, &q)
        });
        let first_failure_degree = if constant_term_one {
            let window = frame_truncation(dec, kd, v, k)?;
            let pq = sf.f.with_truncation(window).log()?.pure_q_part();
            pq.terms().keys().map(Exponent::deg).min()
        } else {
            Some(0)
        };
        vertices.push(VertexConditions {
            vertex: v,
            constant_term_one,
            exponents_in_pbar,
            no_pure_q_in_log: first_failure_degree.is_none(),
            first_failure_degree,
        });
    }
    let mut transports = Vec::new();
    for a in fs {
        for b in fs {
            if a.vertex != b.vertex && dec.adjacent(a.vertex, b.vertex) {
                let moved = transport_slab(dec, kd, &a.f, a.vertex, b.vertex)?;
                transports.push(TransportCheck {
                    from: a.vertex,
                    to: b.vertex,
                    pass: moved == b.f,
                });
            }
        }
    }
    Ok(ConditionReport {
        order: k,
        vertices,
        transports,
        condition4_by_construction: true,
    })
}

/// Membership of `(m, q, d)` in the cone over `Ξ_ψ̄`.
pub fn cone_membership(
    dec: &Decomposition,
    kd: &KaehlerData,
    m: &[BigInt],
    q: &[BigInt],
    d: &BigInt,
) -> bool {
    if q.len() != kd.rank || m.len() != dec.dim() {
        return false;
    }
    if d.is_zero() {
        return m.iter().all(Zero::is_zero) && linalg::is_nonneg(q);
    }
    if d.is_negative() {
        return false;
    }
    for c in 0..dec.cells().len() {
        let Some(lam) = dec.barycentric(c, m, d) else {
            continue;
        };
        if lam.iter().any(Signed::is_negative) {
            continue;
        }
        // Unimodular cells give integral coordinates.
        let lam: Vec<BigInt> = lam.iter().map(|x| x.to_integer()).collect();
        let verts = &dec.cells()[c].vertex_indices;
        return (0..kd.rank).all(|k| {
            let psi: BigInt = verts
                .iter()
                .zip(&lam)
                .map(|(&u, l)| l * &kd.psibar[u][k])
                .sum();
            q[k] >= psi
        });
    }
    false
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    /// `(m, 1, ψ̄(m))` for theta functions; `None` for the apexes.
    pub exponent: Option<Exponent>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MirrorEquation {
    pub q_choice: Vec<i64>,
    /// Homogenized `F`, with `r` the degree.
    pub f_homogeneous: Series,
    /// `f` at the origin.
    pub f_dehomogenized: Series,
    pub generators: Vec<Generator>,
    /// Rays of the cone over `Ξ_ψ̄` in `M + Z + Q^gp`.
    pub cone_rays: Vec<Exponent>,
    pub homogeneous_text: String,
    pub dehomogenized_text: String,
}

impl MirrorEquation {
    pub fn to_json(&self) -> Value {
        json!({
            "q_choice": self.q_choice,
            "F": self.f_homogeneous.to_json(),
            "f": self.f_dehomogenized.to_json(),
            "generators": self.generators.iter().map(|g| json!({
                "name": g.name,
                "exponent": g.exponent.as_ref().map(Exponent::to_json),
            })).collect::<Vec<_>>(),
            "cone_rays": self.cone_rays.iter().map(Exponent::to_json).collect::<Vec<_>>(),
            "equation": self.homogeneous_text,
            "dehomogenized": self.dehomogenized_text,
        })
    }
}

/// `U W = z^q V_0 F` and its dehomogenization `u w = z^q f`.
pub fn mirror_equation(
    dec: &Decomposition,
    kd: &KaehlerData,
    k: u32,
    q_choice: Option<&[BigInt]>,
) -> Result<MirrorEquation> {
    if kd.rank == 0 {
        return Err(Error::RankZeroQ);
    }
    let q_choice: Vec<BigInt> = match q_choice {
        Some(q) => q.to_vec(),
        None => kd
            .generators
            .iter()
            .enumerate()
            .map(|(i, _)| BigInt::from(i64::from(i == 0)))
            .collect(),
    };
    if q_choice.len() != kd.rank
        || !linalg::is_nonneg(&q_choice)
        || q_choice.iter().all(Zero::is_zero)
    {
        return Err(Error::MalformedInput(format!(
            "q choice must be a nonzero element of N^{}",
            kd.rank
        )));
    }
    let q_choice = to_i64(&q_choice)?;
    let fs = solve_slabs(dec, kd, k)?.slab_functions(dec, kd)?;
    let homogenize = |sf: &SlabFunction| -> Result<Series> {
        let mut by = Exponent::new(
            dec.vertex(sf.vertex).to_i64()?,
            1,
            to_i64(&kd.psibar[sf.vertex])?,
        );
        by.r = 1;
        sf.f.shift(&by)
    };
    let f_homogeneous = homogenize(&fs[0])?;
    for sf in &fs[1..] {
        if homogenize(sf)? != f_homogeneous {
            return Err(Error::Internal(format!(
                "homogenization from vertex {} disagrees",
                sf.vertex
            )));
        }
    }
    let origin = dec
        .origin()
        .ok_or_else(|| Error::Internal("no origin".into()))?;
    let f_dehomogenized = fs[origin].f.clone();

    let mut generators = Vec::new();
    for p in lattice_points(dec) {
        let u = dec.vertex_index(&p).expect("lattice points are vertices");
        generators.push(Generator {
            name: format!("theta{p}"),
            exponent: Some(Exponent::new(p.to_i64()?, 1, to_i64(&kd.psibar[u])?)),
        });
    }
    generators.push(Generator {
        name: "U".into(),
        exponent: None,
    });
    generators.push(Generator {
        name: "W".into(),
        exponent: None,
    });

    let mut cone_rays: Vec<Exponent> = (0..dec.num_vertices())
        .map(|u| {
            Ok(Exponent::new(
                dec.vertex(u).to_i64()?,
                1,
                to_i64(&kd.psibar[u])?,
            ))
        })
        .collect::<Result<_>>()?;
    for i in 0..kd.rank {
        let mut q = vec![0; kd.rank];
        q[i] = 1;
        cone_rays.push(Exponent::new(vec![0; dec.dim()], 0, q));
    }
    cone_rays.sort();

    let names = VarNames::standard(dec.dim(), kd.rank);
    let zq = names.monomial(&Exponent::new(vec![0; dec.dim()], 0, q_choice.clone()));
    let homogeneous_text = format!("U*W = {zq} * V0 * ({})", f_homogeneous.render(&names));
    let dehomogenized_text = format!("u*w = {zq} * ({})", f_dehomogenized.render(&names));
    Ok(MirrorEquation {
        q_choice,
        f_homogeneous,
        f_dehomogenized,
        generators,
        cone_rays,
        homogeneous_text,
        dehomogenized_text,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    /// Direction in `M + Z`.
    pub direction: Vec<i64>,
    pub exponent: Exponent,
    pub coefficient: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrokenLine {
    pub base_vertex: usize,
    pub segments: Vec<Segment>,
    pub bent: bool,
}

impl BrokenLine {
    pub fn final_monomial(&self) -> (&Exponent, &BigRational) {
        let s = self.segments.last().expect("a broken line has segments");
        (&s.exponent, &s.coefficient)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "base_vertex": self.base_vertex,
            "bent": self.bent,
            "segments": self.segments.iter().map(|s| json!({
                "direction": s.direction,
                "exponent": s.exponent.to_json(),
                "coeff": s.coefficient.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

fn direction(e: &Exponent) -> Vec<i64> {
    let mut d: Vec<i64> = e.m.iter().map(|x| -x).collect();
    d.push(-e.r);
    d
}

/// One broken line per term of `z^{initial} f_v`: coming in with direction
/// `(0, 1)`, crossing the slab once and picking up that term.
pub fn broken_lines_for(sf: &SlabFunction, initial: &Exponent) -> Result<Vec<BrokenLine>> {
    if initial.r != -1 || initial.m.iter().any(|&x| x != 0) {
        return Err(Error::MalformedInput(
            "initial exponent must have m = 0 and r = -1".into(),
        ));
    }
    let incoming = Segment {
        direction: direction(initial),
        exponent: initial.clone(),
        coefficient: BigRational::one(),
    };
    sf.f.terms()
        .iter()
        .map(|(e, c)| {
            let out = initial.checked_add(e)?;
            Ok(BrokenLine {
                base_vertex: sf.vertex,
                segments: vec![
                    incoming.clone(),
                    Segment {
                        direction: direction(&out),
                        exponent: out,
                        coefficient: c.clone(),
                    },
                ],
                bent: e.m.iter().any(|&x| x != 0),
            })
        })
        .collect()
}

pub fn enumerate_broken_lines(
    dec: &Decomposition,
    kd: &KaehlerData,
    v: usize,
    initial: &Exponent,
    k: u32,
) -> Result<Vec<BrokenLine>> {
    broken_lines_for(&normalize(dec, kd, v, k)?, initial)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftResult {
    pub base_vertex: usize,
    pub initial: Exponent,
    pub lift: Series,
}

/// Sum of the final monomials of all broken lines.
pub fn lift_from_lines(sf: &SlabFunction, initial: &Exponent) -> Result<LiftResult> {
    let lines = broken_lines_for(sf, initial)?;
    let lift = Series::from_terms(
        lines.iter().map(|l| {
            let (e, c) = l.final_monomial();
            (e.clone(), c.clone())
        }),
        Truncation::polynomial(),
    );
    Ok(LiftResult {
        base_vertex: sf.vertex,
        initial: initial.clone(),
        lift,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftReport {
    pub pairs: Vec<(usize, usize, bool)>,
}

impl LiftReport {
    pub fn all_pass(&self) -> bool {
        self.pairs.iter().all(|p| p.2)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "all_pass": self.all_pass(),
            "pairs": self.pairs.iter().map(|(a, b, p)| json!({"from": a, "to": b, "pass": p})).collect::<Vec<_>>(),
        })
    }
}

fn exponent_vector(e: &Exponent) -> Vec<BigInt> {
    e.m.iter()
        .chain(std::iter::once(&e.r))
        .chain(&e.q)
        .map(|&x| BigInt::from(x))
        .collect()
}

fn vector_exponent(x: &[BigInt], n: usize) -> Result<Exponent> {
    let x = to_i64(x)?;
    Ok(Exponent::new(x[..n].to_vec(), x[n], x[n + 1..].to_vec()))
}

pub fn lift_invariance(
    dec: &Decomposition,
    kd: &KaehlerData,
    initial: &Exponent,
    k: u32,
) -> Result<LiftReport> {
    let fs = solve_slabs(dec, kd, k)?.slab_functions(dec, kd)?;
    lift_invariance_for(dec, kd, &fs, initial)
}

/// For every adjacent pair, the monodromy image of `Lift_v` must be `Lift_{v'}`.
pub fn lift_invariance_for(
    dec: &Decomposition,
    kd: &KaehlerData,
    fs: &[SlabFunction],
    initial: &Exponent,
) -> Result<LiftReport> {
    let lifts: Vec<LiftResult> = fs
        .iter()
        .map(|sf| lift_from_lines(sf, initial))
        .collect::<Result<_>>()?;
    let mut pairs = Vec::new();
    for a in &lifts {
        for b in &lifts {
            if a.base_vertex != b.base_vertex && !dec.adjacent(a.base_vertex, b.base_vertex) {
                continue;
            }
            let t = monodromy_p(dec, kd, b.base_vertex, a.base_vertex)?;
            let moved = Series::from_terms(
                a.lift
                    .terms()
                    .iter()
                    .map(|(e, c)| {
                        Ok((
                            vector_exponent(&t.apply(&exponent_vector(e)), dec.dim())?,
                            c.clone(),
                        ))
                    })
                    .collect::<Result<Vec<_>>>()?,
                Truncation::polynomial(),
            );
            pairs.push((a.base_vertex, b.base_vertex, moved == b.lift));
        }
    }
    Ok(LiftReport { pairs })
}

/// The standard initial exponent `(0, -1, 0)`.
pub fn vertical_initial(dec: &Decomposition, kd: &KaehlerData) -> Exponent {
    Exponent::new(vec![0; dec.dim()], -1, vec![0; kd.rank])
}

pub fn psibar_json(kd: &KaehlerData, v: usize) -> Value {
    int_list_json(&kd.psibar[v])
}
