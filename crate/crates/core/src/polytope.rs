//! Lattice polytopes decomposed into standard simplices.
//!
//! A [`Decomposition`] is the combinatorial input of the whole pipeline: a
//! lattice polytope containing the origin, cut into unimodular simplices,
//! with a distinguished base cell having the origin as a vertex. Everything
//! else (walls, vertex fans, monodromy) is derived from it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result, ValidationIssue, ValidationKind};
use crate::kaehler::KaehlerData;
use crate::linalg::{self, IntMatrix};

/// A point or vector of `M = Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LatticeVector(pub Vec<BigInt>);

impl LatticeVector {
    pub fn zero(n: usize) -> Self {
        Self(vec![BigInt::zero(); n])
    }

    pub fn from_i64(v: &[i64]) -> Self {
        Self(v.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// Checked narrowing for use in series exponents.
    pub fn to_i64(&self) -> Result<Vec<i64>> {
        self.0
            .iter()
            .map(|x| {
                x.to_i64().ok_or_else(|| {
                    Error::ExponentOverflow(format!("coordinate {x} exceeds 64 bits"))
                })
            })
            .collect()
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Serialize for LatticeVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        int_list_json(&self.0).serialize(s)
    }
}

/// Integers that fit in 64 bits become JSON numbers, larger ones decimal strings.
pub fn int_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::String(x.to_string()),
    }
}

pub fn int_list_json(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(int_json).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Simplex {
    pub vertex_indices: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Decomposition {
    dim: usize,
    vertices: Vec<LatticeVector>,
    cells: Vec<Simplex>,
    base_cell: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Wall {
    /// Sorted vertex indices of the codimension-one cell.
    pub facet: Vec<usize>,
    pub cells: (usize, usize),
    /// Opposite vertex in `cells.0` and in `cells.1`.
    pub opposite: (usize, usize),
    /// `a + b = sum_i c_i u_i` with `sum_i c_i = 2`, aligned with `facet`.
    #[serde(serialize_with = "ser_ints")]
    pub coefficients: Vec<BigInt>,
}

fn ser_ints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    int_list_json(v).serialize(s)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexFan {
    pub vertex: usize,
    /// Maximal cones, each given by `n + 1` primitive generators in `Z^n + Z`.
    pub cones: Vec<Vec<Vec<BigInt>>>,
}

/// An integral linear map on `Z^n + Z` (or `Z^n + Z + Z^r`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonodromyMap {
    pub source: usize,
    pub target: usize,
    pub matrix: IntMatrix,
}

impl MonodromyMap {
    pub fn apply(&self, x: &[BigInt]) -> Vec<BigInt> {
        linalg::mat_vec(&self.matrix, x)
    }

    pub fn compose(&self, other: &MonodromyMap) -> IntMatrix {
        linalg::mat_mul(&self.matrix, &other.matrix)
    }

    pub fn det(&self) -> BigInt {
        linalg::det(&self.matrix)
    }

    /// `(T - I)^2 = 0`, which forces every eigenvalue to be one.
    pub fn is_unipotent(&self) -> bool {
        let n = self.matrix.len();
        let nil: IntMatrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let d = if i == j {
                            BigInt::one()
                        } else {
                            BigInt::zero()
                        };
                        &self.matrix[i][j] - d
                    })
                    .collect()
            })
            .collect();
        linalg::mat_mul(&nil, &nil)
            .iter()
            .flatten()
            .all(Zero::is_zero)
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.issues.is_empty()
    }

    fn push(&mut self, kind: ValidationKind, detail: impl Into<String>) {
        self.issues.push(ValidationIssue {
            kind,
            detail: detail.into(),
        });
    }

    pub fn into_result(self) -> Result<()> {
        match self.issues.into_iter().next() {
            None => Ok(()),
            Some(i) => Err(Error::Validation {
                kind: i.kind,
                detail: i.detail,
            }),
        }
    }
}

fn parse_int(v: &Value, what: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                Ok(BigInt::from(i))
            } else if let Some(u) = n.as_u64() {
                Ok(BigInt::from(u))
            } else {
                Err(Error::MalformedInput(format!(
                    "{what}: {n} is not an integer"
                )))
            }
        }
        Value::String(s) => s
            .trim()
            .parse::<BigInt>()
            .map_err(|_| Error::MalformedInput(format!("{what}: {s:?} is not a decimal integer"))),
        other => Err(Error::MalformedInput(format!(
            "{what}: expected integer, got {other}"
        ))),
    }
}

fn parse_index(v: &Value, what: &str) -> Result<usize> {
    parse_int(v, what)?
        .to_usize()
        .ok_or_else(|| Error::MalformedInput(format!("{what}: not a valid index")))
}

fn field<'a>(obj: &'a serde_json::Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::MalformedInput(format!("missing field {key:?}")))
}

fn array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::MalformedInput(format!("{what}: expected array")))
}

/// Parses and validates a decomposition document.
pub fn parse_input(document: &str) -> Result<Decomposition> {
    let value: Value =
        serde_json::from_str(document).map_err(|e| Error::MalformedInput(e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::MalformedInput("top level must be an object".into()))?;
    let dim = parse_index(field(obj, "dim")?, "dim")?;
    let vertices = array(field(obj, "vertices")?, "vertices")?
        .iter()
        .enumerate()
        .map(|(i, v)| {
            array(v, "vertex")?
                .iter()
                .map(|x| parse_int(x, &format!("vertices[{i}]")))
                .collect::<Result<Vec<_>>>()
                .map(LatticeVector)
        })
        .collect::<Result<Vec<_>>>()?;
    let cells = array(field(obj, "maximal_cells")?, "maximal_cells")?
        .iter()
        .map(|c| {
            array(c, "cell")?
                .iter()
                .map(|x| parse_index(x, "cell index"))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let base_cell = parse_index(field(obj, "base_cell")?, "base_cell")?;
    let dec = Decomposition::new(dim, vertices, cells, base_cell)?;
    validate(&dec).into_result()?;
    Ok(dec)
}

impl Decomposition {
    /// Structural construction; geometric checks live in [`validate`].
    pub fn new(
        dim: usize,
        vertices: Vec<LatticeVector>,
        cells: Vec<Vec<usize>>,
        base_cell: usize,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::MalformedInput("dim must be positive".into()));
        }
        if vertices.is_empty() {
            return Err(Error::MalformedInput("no vertices".into()));
        }
        if cells.is_empty() {
            return Err(Error::MalformedInput("no maximal cells".into()));
        }
        for (i, v) in vertices.iter().enumerate() {
            if v.dim() != dim {
                return Err(Error::MalformedInput(format!(
                    "vertex {i} has {} coordinates, expected {dim}",
                    v.dim()
                )));
            }
        }
        let distinct: BTreeSet<_> = vertices.iter().collect();
        if distinct.len() != vertices.len() {
            return Err(Error::MalformedInput("duplicate vertex".into()));
        }
        let mut simplices = Vec::with_capacity(cells.len());
        for (c, cell) in cells.into_iter().enumerate() {
            if cell.len() != dim + 1 {
                return Err(Error::MalformedInput(format!(
                    "cell {c} has {} vertices, expected {}",
                    cell.len(),
                    dim + 1
                )));
            }
            if let Some(&bad) = cell.iter().find(|&&i| i >= vertices.len()) {
                return Err(Error::MalformedInput(format!(
                    "cell {c} references vertex {bad}"
                )));
            }
            if cell.iter().collect::<BTreeSet<_>>().len() != cell.len() {
                return Err(Error::MalformedInput(format!("cell {c} repeats a vertex")));
            }
            simplices.push(Simplex {
                vertex_indices: cell,
            });
        }
        if base_cell >= simplices.len() {
            return Err(Error::MalformedInput(format!(
                "base_cell {base_cell} out of range"
            )));
        }
        Ok(Self {
            dim,
            vertices,
            cells: simplices,
            base_cell,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[LatticeVector] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &LatticeVector {
        &self.vertices[i]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn cells(&self) -> &[Simplex] {
        &self.cells
    }

    pub fn base_cell(&self) -> usize {
        self.base_cell
    }

    pub fn base_vertices(&self) -> &[usize] {
        &self.cells[self.base_cell].vertex_indices
    }

    pub fn vertex_index(&self, p: &LatticeVector) -> Option<usize> {
        self.vertices.iter().position(|v| v == p)
    }

    pub fn origin(&self) -> Option<usize> {
        self.vertices.iter().position(LatticeVector::is_zero)
    }

    pub fn cells_containing(&self, v: usize) -> Vec<usize> {
        (0..self.cells.len())
            .filter(|&c| self.cells[c].vertex_indices.contains(&v))
            .collect()
    }

    /// Whether `v` and `w` are vertices of a common maximal cell.
    pub fn adjacent(&self, v: usize, w: usize) -> bool {
        self.cells
            .iter()
            .any(|c| c.vertex_indices.contains(&v) && c.vertex_indices.contains(&w))
    }

    /// Edge vectors `u - v` for the vertices `u != v` of cell `c`.
    pub fn edge_vectors(&self, c: usize, v: usize) -> Vec<Vec<BigInt>> {
        self.cells[c]
            .vertex_indices
            .iter()
            .filter(|&&u| u != v)
            .map(|&u| self.vertices[u].sub(&self.vertices[v]).0)
            .collect()
    }

    /// The `n + 1` columns `(u_j, 1)` of cell `c`, as rows.
    fn homogeneous_rows(&self, c: usize) -> IntMatrix {
        self.cells[c]
            .vertex_indices
            .iter()
            .map(|&u| {
                let mut r = self.vertices[u].0.clone();
                r.push(BigInt::one());
                r
            })
            .collect()
    }

    /// Coordinates `lambda` with `(p, w) = sum_j lambda_j (u_j, 1)` over the
    /// vertices of cell `c`, in the cell's vertex order.
    pub fn barycentric(&self, c: usize, p: &[BigInt], w: &BigInt) -> Option<Vec<BigRational>> {
        let cols = linalg::transpose(&self.homogeneous_rows(c));
        let mut rhs: Vec<BigRational> = p
            .iter()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect();
        rhs.push(BigRational::from_integer(w.clone()));
        linalg::solve(&linalg::to_rat(&cols), &rhs)
    }

    fn facet_map(&self) -> BTreeMap<Vec<usize>, Vec<(usize, usize)>> {
        let mut map: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
        for (c, cell) in self.cells.iter().enumerate() {
            for &opp in &cell.vertex_indices {
                let mut facet: Vec<usize> = cell
                    .vertex_indices
                    .iter()
                    .copied()
                    .filter(|&u| u != opp)
                    .collect();
                facet.sort_unstable();
                map.entry(facet).or_default().push((c, opp));
            }
        }
        map
    }

    /// Codimension-one cells lying on the boundary of the polytope.
    pub fn boundary_facets(&self) -> Vec<Vec<usize>> {
        self.facet_map()
            .into_iter()
            .filter(|(_, adj)| adj.len() == 1)
            .map(|(f, _)| f)
            .collect()
    }

    pub fn is_interior_vertex(&self, v: usize) -> bool {
        !self.boundary_facets().iter().any(|f| f.contains(&v))
    }

    /// Sign of the point `p` relative to the hyperplane through `facet`.
    fn side(&self, facet: &[usize], p: &LatticeVector) -> BigInt {
        let base = &self.vertices[facet[0]];
        let mut rows: IntMatrix = facet[1..]
            .iter()
            .map(|&u| self.vertices[u].sub(base).0)
            .collect();
        rows.push(p.sub(base).0);
        linalg::det(&rows).signum()
    }

    /// Chains of faces of dimension at least one, longest chains only. The
    /// simplex spanned by the barycenters of each chain is one top-dimensional
    /// cell of the discriminant locus; this list is descriptive only.
    pub fn discriminant_cells(&self) -> Vec<Vec<Vec<usize>>> {
        let mut out = BTreeSet::new();
        for cell in &self.cells {
            let mut chains: Vec<Vec<Vec<usize>>> = Vec::new();
            let mut full = cell.vertex_indices.clone();
            full.sort_unstable();
            chains.push(vec![full]);
            // Peel vertices off until the smallest face is an edge.
            for _ in 0..self.dim - 1 {
                let mut next = Vec::new();
                for chain in chains {
                    let last = chain.last().unwrap();
                    for drop in last {
                        let face: Vec<usize> = last.iter().copied().filter(|u| u != drop).collect();
                        let mut c = chain.clone();
                        c.push(face);
                        next.push(c);
                    }
                }
                chains = next;
            }
            for mut c in chains {
                c.reverse();
                out.insert(c);
            }
        }
        out.into_iter().collect()
    }
}

/// Checks every geometric invariant of a decomposition into standard simplices.
pub fn validate(dec: &Decomposition) -> ValidationReport {
    let mut report = ValidationReport::default();
    let n = dec.dim;
    match dec.origin() {
        None => report.push(ValidationKind::OriginMissing, "0 is not a vertex"),
        Some(o) => {
            if !dec.base_vertices().contains(&o) {
                report.push(
                    ValidationKind::BaseCellWithoutOrigin,
                    format!("base cell {} does not contain the origin", dec.base_cell),
                );
            }
        }
    }
    for c in 0..dec.cells.len() {
        let v0 = dec.cells[c].vertex_indices[0];
        let d = linalg::det(&dec.edge_vectors(c, v0));
        if d.abs() != BigInt::one() {
            report.push(
                ValidationKind::NonStandardSimplex,
                format!("cell {c} has lattice volume {}", d.abs()),
            );
        }
    }
    if !report.is_ok() {
        return report;
    }

    let facets = dec.facet_map();
    for (facet, adj) in &facets {
        match adj.as_slice() {
            [(c, opp)] => {
                let s = dec.side(facet, &dec.vertices[*opp]);
                let escapes = dec
                    .vertices
                    .iter()
                    .any(|p| !dec.side(facet, p).is_zero() && dec.side(facet, p) != s);
                if escapes {
                    report.push(
                        ValidationKind::NotCovering,
                        format!("boundary facet {facet:?} of cell {c} is not on the boundary of the hull"),
                    );
                }
            }
            [(c1, a), (c2, b)] => {
                let sa = dec.side(facet, &dec.vertices[*a]);
                let sb = dec.side(facet, &dec.vertices[*b]);
                if sa == sb {
                    report.push(
                        ValidationKind::BadFaceIntersection,
                        format!("cells {c1} and {c2} overlap across facet {facet:?}"),
                    );
                }
            }
            more => report.push(
                ValidationKind::BadFaceIntersection,
                format!("facet {facet:?} is shared by {} cells", more.len()),
            ),
        }
    }

    let used: BTreeSet<usize> = dec
        .cells
        .iter()
        .flat_map(|c| c.vertex_indices.iter().copied())
        .collect();
    for v in 0..dec.vertices.len() {
        if !used.contains(&v) {
            report.push(
                ValidationKind::NotCovering,
                format!("vertex {v} lies in no cell"),
            );
        }
    }

    // A cell's barycenter inside another closed cell means overlapping interiors.
    let scale = BigInt::from(n + 1);
    for a in 0..dec.cells.len() {
        let centroid: Vec<BigInt> = (0..n)
            .map(|i| {
                dec.cells[a]
                    .vertex_indices
                    .iter()
                    .map(|&u| dec.vertices[u].0[i].clone())
                    .sum()
            })
            .collect();
        for b in 0..dec.cells.len() {
            if a == b {
                continue;
            }
            if let Some(lam) = dec.barycentric(b, &centroid, &scale) {
                if lam.iter().all(|x| !x.is_negative()) {
                    report.push(
                        ValidationKind::BadFaceIntersection,
                        format!("cells {a} and {b} have overlapping interiors"),
                    );
                }
            }
        }
    }

    // Dual graph connectivity.
    let mut seen = vec![false; dec.cells.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(c) = stack.pop() {
        for adj in facets.values().filter(|a| a.len() == 2) {
            for (x, y) in [(adj[0].0, adj[1].0), (adj[1].0, adj[0].0)] {
                if x == c && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    if seen.iter().any(|s| !s) {
        report.push(
            ValidationKind::NotCovering,
            "cells do not form a connected decomposition",
        );
    }
    report
}

/// All integer points of the polytope, sorted lexicographically.
///
/// A standard simplex has no lattice points besides its vertices, so for a
/// valid decomposition these are exactly the vertices.
pub fn lattice_points(dec: &Decomposition) -> Vec<LatticeVector> {
    let mut pts = dec.vertices.clone();
    pts.sort();
    pts
}

/// Interior codimension-one cells with their integral affine relation.
pub fn interior_walls(dec: &Decomposition) -> Vec<Wall> {
    let n = dec.dim;
    let mut walls = Vec::new();
    for (facet, adj) in dec.facet_map() {
        let [(c1, a), (c2, b)] = adj.as_slice() else {
            continue;
        };
        // Solve sum_i c_i (u_i, 1) = (a + b, 2).
        let cols: IntMatrix = (0..=n)
            .map(|row| {
                facet
                    .iter()
                    .map(|&u| {
                        if row < n {
                            dec.vertices[u].0[row].clone()
                        } else {
                            BigInt::one()
                        }
                    })
                    .collect()
            })
            .collect();
        let mut rhs: Vec<BigRational> = (0..n)
            .map(|i| BigRational::from_integer(&dec.vertices[*a].0[i] + &dec.vertices[*b].0[i]))
            .collect();
        rhs.push(BigRational::from_integer(BigInt::from(2)));
        let coefficients = solve_overdetermined(&cols, &rhs)
            .expect("opposite vertices of a wall satisfy an affine relation");
        let coefficients = coefficients
            .iter()
            .map(|x| linalg::as_integer(x).expect("unimodular cells give integral wall relations"))
            .collect();
        walls.push(Wall {
            facet,
            cells: (*c1, *c2),
            opposite: (*a, *b),
            coefficients,
        });
    }
    walls
}

/// Exact solve of an `(m+1) x m` system of full column rank.
fn solve_overdetermined(cols: &IntMatrix, rhs: &[BigRational]) -> Option<Vec<BigRational>> {
    let m = cols.first().map_or(0, Vec::len);
    let rows = cols.len();
    // Pick m independent rows, solve, verify the rest.
    let mut chosen: Vec<usize> = Vec::new();
    for r in 0..rows {
        let mut trial: IntMatrix = chosen.iter().map(|&i| cols[i].clone()).collect();
        trial.push(cols[r].clone());
        if linalg::rank(&trial) == trial.len() {
            chosen.push(r);
        }
        if chosen.len() == m {
            break;
        }
    }
    let a: IntMatrix = chosen.iter().map(|&i| cols[i].clone()).collect();
    let b: Vec<BigRational> = chosen.iter().map(|&i| rhs[i].clone()).collect();
    let x = linalg::solve(&linalg::to_rat(&a), &b)?;
    for r in 0..rows {
        let lhs: BigRational = cols[r]
            .iter()
            .zip(&x)
            .map(|(c, xi)| BigRational::from_integer(c.clone()) * xi)
            .sum();
        if lhs != rhs[r] {
            return None;
        }
    }
    Some(x)
}

/// The fan of tangent wedges at vertex `v`, in `M_R + R`.
pub fn fan_structure(dec: &Decomposition, v: usize) -> VertexFan {
    let mut down = Vec::new();
    let mut up = Vec::new();
    for c in dec.cells_containing(v) {
        let edges: Vec<Vec<BigInt>> = dec
            .edge_vectors(c, v)
            .into_iter()
            .map(|mut e| {
                e.push(BigInt::zero());
                e
            })
            .collect();
        let mut apex_down: Vec<BigInt> = dec.vertices[v].0.iter().map(|x| -x).collect();
        apex_down.push(-BigInt::one());
        let mut apex_up = vec![BigInt::zero(); dec.dim];
        apex_up.push(BigInt::one());
        let mut d = edges.clone();
        d.push(apex_down);
        let mut u = edges;
        u.push(apex_up);
        down.push(d.into_iter().map(linalg::primitive).collect());
        up.push(u.into_iter().map(linalg::primitive).collect());
    }
    down.extend(up);
    VertexFan {
        vertex: v,
        cones: down,
    }
}

fn check_adjacent(dec: &Decomposition, v: usize, w: usize) -> Result<()> {
    if v >= dec.num_vertices() || w >= dec.num_vertices() {
        return Err(Error::UnknownVertex(format!("{v} or {w}")));
    }
    if v != w && !dec.adjacent(v, w) {
        return Err(Error::NotAdjacent(v, w));
    }
    Ok(())
}

/// `(m, r) -> (m + r (v - v'), r)` on `Z^n + Z`.
pub fn monodromy_lambda(dec: &Decomposition, v: usize, w: usize) -> Result<MonodromyMap> {
    check_adjacent(dec, v, w)?;
    let n = dec.dim;
    let shift = dec.vertices[v].sub(&dec.vertices[w]).0;
    let matrix = (0..=n)
        .map(|i| {
            (0..=n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else if j == n && i < n {
                        shift[i].clone()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    Ok(MonodromyMap {
        source: v,
        target: w,
        matrix,
    })
}

/// `(m, r, q) -> (m + r (v - v'), r, q + r (psibar(v) - psibar(v')))` on
/// `Z^n + Z + Z^r`.
pub fn monodromy_p(
    dec: &Decomposition,
    kd: &KaehlerData,
    v: usize,
    w: usize,
) -> Result<MonodromyMap> {
    check_adjacent(dec, v, w)?;
    let n = dec.dim;
    let size = n + 1 + kd.rank;
    let mut shift = dec.vertices[v].sub(&dec.vertices[w]).0;
    shift.push(BigInt::zero());
    shift.extend(kd.psibar[v].iter().zip(&kd.psibar[w]).map(|(a, b)| a - b));
    let matrix = (0..size)
        .map(|i| {
            (0..size)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else if j == n {
                        shift[i].clone()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    Ok(MonodromyMap {
        source: v,
        target: w,
        matrix,
    })
}
