//! The monoid of integral convex PL functions and the universal function.
//!
//! A PL function on the fan over `σ × {1}` is fixed by its values at the
//! vertices; normalizing it to vanish on the base cell leaves one free value
//! per remaining vertex. Convexity is a family of linear inequalities, one per
//! interior wall, so `P` is the set of lattice points of a polyhedral cone in
//! those free coordinates. We only support the case where that cone is
//! unimodular simplicial, which makes `P` and its dual `Q` free.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix};
use crate::polytope::{int_list_json, interior_walls, Decomposition, LatticeVector, Wall};

/// `ε(φ) = φ(a) + φ(b) - Σ c_i φ(u_i)`, as coefficients over all vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BendingFunctional {
    pub wall: Wall,
    pub coefficients: Vec<BigInt>,
}

impl BendingFunctional {
    pub fn apply(&self, values: &[BigInt]) -> BigInt {
        linalg::dot(&self.coefficients, values)
    }

    /// Applies the functional coordinatewise to vector-valued vertex data.
    pub fn apply_vec(&self, values: &[Vec<BigInt>], width: usize) -> Vec<BigInt> {
        (0..width)
            .map(|i| {
                self.coefficients
                    .iter()
                    .zip(values)
                    .map(|(c, v)| c * &v[i])
                    .sum()
            })
            .collect()
    }
}

pub fn bending_functional(dec: &Decomposition, wall: &Wall) -> BendingFunctional {
    let mut coefficients = vec![BigInt::zero(); dec.num_vertices()];
    coefficients[wall.opposite.0] += BigInt::one();
    coefficients[wall.opposite.1] += BigInt::one();
    for (u, c) in wall.facet.iter().zip(&wall.coefficients) {
        coefficients[*u] -= c;
    }
    BendingFunctional {
        wall: wall.clone(),
        coefficients,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KaehlerData {
    pub rank: usize,
    /// One row per generator of `P`, one value per vertex.
    pub generators: Vec<Vec<BigInt>>,
    /// `ψ̄(v)` in `N^r`, indexed by vertex.
    pub psibar: Vec<Vec<BigInt>>,
    pub walls: Vec<Wall>,
    pub bending: Vec<BendingFunctional>,
    /// `ε(ψ̄)` per wall.
    pub bending_images: Vec<Vec<BigInt>>,
    pub strictly_convex: bool,
}

impl KaehlerData {
    pub fn to_json(&self) -> Value {
        let psibar: serde_json::Map<String, Value> = self
            .psibar
            .iter()
            .enumerate()
            .map(|(i, p)| (i.to_string(), int_list_json(p)))
            .collect();
        json!({
            "rank": self.rank,
            "generators": self.generators.iter().map(|g| int_list_json(g)).collect::<Vec<_>>(),
            "psibar": psibar,
            "strictly_convex": self.strictly_convex,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Ray {
    v: Vec<BigInt>,
    /// Indices of processed constraints this ray is tight on.
    tight: Vec<usize>,
}

/// Extreme rays of the pointed cone `{x : E x ≥ 0}` by double description.
///
/// Returns `None` when `E` does not have full column rank (the cone has a
/// lineality space).
pub fn extreme_rays(rows: &[Vec<BigInt>], dim: usize) -> Option<Vec<Vec<BigInt>>> {
    if dim == 0 {
        return Some(Vec::new());
    }
    // Greedy choice of an initial basis of constraints.
    let mut basis: Vec<usize> = Vec::new();
    for i in 0..rows.len() {
        let mut trial: IntMatrix = basis.iter().map(|&j| rows[j].clone()).collect();
        trial.push(rows[i].clone());
        if linalg::rank(&trial) == trial.len() {
            basis.push(i);
            if basis.len() == dim {
                break;
            }
        }
    }
    if basis.len() < dim {
        return None;
    }
    let b: IntMatrix = basis.iter().map(|&j| rows[j].clone()).collect();
    let inv = linalg::inverse(&linalg::to_rat(&b))?;
    let mut rays: Vec<Ray> = (0..dim)
        .map(|j| {
            let col: Vec<BigRational> = inv.iter().map(|r| r[j].clone()).collect();
            let v = linalg::clear_denominators(&col);
            let tight = basis
                .iter()
                .copied()
                .filter(|&k| linalg::dot(&rows[k], &v).is_zero())
                .collect();
            Ray { v, tight }
        })
        .collect();
    let mut processed = basis.clone();
    for (i, a) in rows.iter().enumerate() {
        if basis.contains(&i) {
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|r| linalg::dot(a, &r.v)).collect();
        let mut next: Vec<Ray> = Vec::new();
        for (r, val) in rays.iter().zip(&vals) {
            if !val.is_negative() {
                let mut r = r.clone();
                if val.is_zero() {
                    r.tight.push(i);
                }
                next.push(r);
            }
        }
        for (p, vp) in rays.iter().zip(&vals) {
            if !vp.is_positive() {
                continue;
            }
            for (n, vn) in rays.iter().zip(&vals) {
                if !vn.is_negative() {
                    continue;
                }
                let common: Vec<usize> = p
                    .tight
                    .iter()
                    .copied()
                    .filter(|k| n.tight.contains(k))
                    .collect();
                if common.len() + 2 < dim {
                    continue;
                }
                let adjacent = rays.iter().all(|r| {
                    std::ptr::eq(r, p)
                        || std::ptr::eq(r, n)
                        || !common.iter().all(|k| r.tight.contains(k))
                });
                if !adjacent {
                    continue;
                }
                let v: Vec<BigInt> = p.v.iter().zip(&n.v).map(|(x, y)| vp * y - vn * x).collect();
                let v = linalg::primitive(v);
                let mut tight = common;
                tight.push(i);
                next.push(Ray { v, tight });
            }
        }
        processed.push(i);
        rays = next;
    }
    let mut out: Vec<Vec<BigInt>> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    out.dedup();
    Some(out)
}

/// Computes `P`, `Q` and `ψ̄` for a valid decomposition.
pub fn kaehler_data(dec: &Decomposition) -> Result<KaehlerData> {
    let walls = interior_walls(dec);
    let bending: Vec<BendingFunctional> =
        walls.iter().map(|w| bending_functional(dec, w)).collect();
    let base = dec.base_vertices();
    let free: Vec<usize> = (0..dec.num_vertices())
        .filter(|v| !base.contains(v))
        .collect();
    let rows: IntMatrix = bending
        .iter()
        .map(|b| free.iter().map(|&v| b.coefficients[v].clone()).collect())
        .collect();
    let rays = extreme_rays(&rows, free.len())
        .ok_or_else(|| Error::ConeNotSmooth("convexity cone contains a line".into()))?;
    if rays.len() != free.len() {
        return Err(Error::ConeNotSmooth(format!(
            "convexity cone has {} extreme rays in dimension {}",
            rays.len(),
            free.len()
        )));
    }
    if !free.is_empty() && linalg::det(&rays).abs() != BigInt::one() {
        return Err(Error::ConeNotSmooth(
            "extreme rays do not form a lattice basis".into(),
        ));
    }
    let mut generators: Vec<Vec<BigInt>> = rays
        .iter()
        .map(|ray| {
            let mut g = vec![BigInt::zero(); dec.num_vertices()];
            for (&v, x) in free.iter().zip(ray) {
                g[v] = x.clone();
            }
            g
        })
        .collect();
    generators.sort_by(|a, b| b.cmp(a));
    let rank = generators.len();
    let psibar: Vec<Vec<BigInt>> = (0..dec.num_vertices())
        .map(|v| generators.iter().map(|g| g[v].clone()).collect())
        .collect();
    let bending_images: Vec<Vec<BigInt>> =
        bending.iter().map(|b| b.apply_vec(&psibar, rank)).collect();
    let strictly_convex = bending_images
        .iter()
        .all(|img| img.iter().any(|x| !x.is_zero()));
    Ok(KaehlerData {
        rank,
        generators,
        psibar,
        walls,
        bending,
        bending_images,
        strictly_convex,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexityReport {
    pub bending_images: Vec<Vec<BigInt>>,
    pub strictly_convex: bool,
}

/// Strict convexity: every wall bends by a nonzero element of `Q`.
pub fn check_strict_convexity(
    kd: &KaehlerData,
    override_psibar: Option<&[Vec<BigInt>]>,
) -> Result<ConvexityReport> {
    let psibar = override_psibar.unwrap_or(&kd.psibar);
    if psibar.len() != kd.psibar.len() || psibar.iter().any(|p| p.len() != kd.rank) {
        return Err(Error::MalformedInput(
            "ψ̄ override has the wrong shape".into(),
        ));
    }
    let images: Vec<Vec<BigInt>> = kd
        .bending
        .iter()
        .map(|b| b.apply_vec(psibar, kd.rank))
        .collect();
    if let Some((i, _)) = images
        .iter()
        .enumerate()
        .find(|(_, img)| !linalg::is_nonneg(img))
    {
        return Err(Error::OverrideNotConvex(format!(
            "wall {i} bends the wrong way"
        )));
    }
    let strictly_convex = images.iter().all(|img| img.iter().any(|x| !x.is_zero()));
    Ok(ConvexityReport {
        bending_images: images,
        strictly_convex,
    })
}

/// Linear part of `ψ̄ - ψ̄(v)` on `T_v τ` for each maximal cell `τ ∋ v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalPLFunction {
    pub vertex: usize,
    /// `(cell, L)` with row `i` of `L` the value on the `i`-th unit vector.
    pub pieces: Vec<(usize, IntMatrix)>,
}

pub fn local_pl_function(dec: &Decomposition, kd: &KaehlerData, v: usize) -> LocalPLFunction {
    let pieces = dec
        .cells_containing(v)
        .into_iter()
        .map(|c| (c, cell_linear_part(dec, kd, c, v)))
        .collect();
    LocalPLFunction { vertex: v, pieces }
}

/// Rows: images of the unit vectors of `M` under the linear part of `ψ̄` on
/// cell `c`, based at its vertex `v`.
pub(crate) fn cell_linear_part(
    dec: &Decomposition,
    kd: &KaehlerData,
    c: usize,
    v: usize,
) -> IntMatrix {
    let n = dec.dim();
    let edges = dec.edge_vectors(c, v);
    let others: Vec<usize> = dec.cells()[c]
        .vertex_indices
        .iter()
        .copied()
        .filter(|&u| u != v)
        .collect();
    // Columns of E are the edges; E^{-1} is integral for a standard simplex.
    let e_cols = linalg::transpose(&edges);
    let e_inv = linalg::unimodular_inverse(&e_cols).expect("standard simplex");
    (0..n)
        .map(|i| {
            (0..kd.rank)
                .map(|k| {
                    others
                        .iter()
                        .enumerate()
                        .map(|(j, &u)| &e_inv[j][i] * (&kd.psibar[u][k] - &kd.psibar[v][k]))
                        .sum()
                })
                .collect()
        })
        .collect()
}

/// Nonnegative integral coordinates of `m` in the edge basis of some cell at `v`.
pub(crate) fn wedge_coordinates(
    dec: &Decomposition,
    v: usize,
    m: &[BigInt],
) -> Option<(usize, Vec<BigInt>)> {
    for c in dec.cells_containing(v) {
        let e_cols = linalg::transpose(&dec.edge_vectors(c, v));
        let inv = linalg::unimodular_inverse(&e_cols).expect("standard simplex");
        let lam = linalg::mat_vec(&inv, m);
        if linalg::is_nonneg(&lam) {
            return Some((c, lam));
        }
    }
    None
}

/// `φ_v(m)` for `m` in the tangent wedge of `σ` at `v`.
pub fn phi_v(
    dec: &Decomposition,
    kd: &KaehlerData,
    v: usize,
    m: &LatticeVector,
) -> Result<Vec<BigInt>> {
    let (c, lam) = wedge_coordinates(dec, v, &m.0)
        .ok_or_else(|| Error::OutsideTangentWedge(format!("{m} at vertex {v}")))?;
    let others: Vec<usize> = dec.cells()[c]
        .vertex_indices
        .iter()
        .copied()
        .filter(|&u| u != v)
        .collect();
    Ok((0..kd.rank)
        .map(|k| {
            others
                .iter()
                .zip(&lam)
                .map(|(&u, l)| l * (&kd.psibar[u][k] - &kd.psibar[v][k]))
                .sum()
        })
        .collect())
}

/// Membership of `(m, q)` in `P̄_v`.
pub fn member_pbar(
    dec: &Decomposition,
    kd: &KaehlerData,
    v: usize,
    m: &LatticeVector,
    q: &[BigInt],
) -> bool {
    match phi_v(dec, kd, v, m) {
        Ok(phi) => q.len() == kd.rank && q.iter().zip(&phi).all(|(a, b)| a >= b),
        Err(_) => false,
    }
}

/// Vertex index to `ψ̄` lookup keyed by coordinates, for display.
pub fn psibar_by_point(
    dec: &Decomposition,
    kd: &KaehlerData,
) -> BTreeMap<LatticeVector, Vec<BigInt>> {
    dec.vertices()
        .iter()
        .cloned()
        .zip(kd.psibar.iter().cloned())
        .collect()
}
