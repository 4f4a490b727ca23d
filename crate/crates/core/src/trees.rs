//! Types of labelled tropical disks and pointed tropical curves.
//!
//! Two independent routes lead from the leaf labels to the slab function.
//! Explicit enumeration lists every tree type of a given weight, in a
//! canonical form, and sums signs. The level recursion groups the same sum
//! by the decomposition at the root: the signed count `a_w` of disks of
//! weight `w` is `c_w` minus the coefficient of `z^w` in the product of
//! `(1 + a_u z^u)` over strictly lower weights, which is exactly the
//! merging argument behind the product expansion.
//!
//! Weights are graded by `level = deg_w + Φ`, an additive function that is
//! at least one on every label, so both routes terminate.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::kaehler::KaehlerData;
use crate::polytope::Decomposition;
use crate::series::{Exponent, Series, Truncation};
use crate::slab::{frame_truncation, normalize, SlabFunction};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TreeType {
    Leaf(Exponent),
    Node(Vec<TreeType>),
}

impl TreeType {
    /// Node with children put in canonical order.
    pub fn node(mut children: Vec<TreeType>) -> Self {
        children.sort_by_cached_key(|c| (c.weight(), c.encoding()));
        TreeType::Node(children)
    }

    pub fn weight(&self) -> Exponent {
        match self {
            TreeType::Leaf(e) => e.clone(),
            TreeType::Node(cs) => {
                let mut it = cs.iter().map(TreeType::weight);
                let first = it.next().expect("nodes have children");
                it.fold(first, |a, b| {
                    a.checked_add(&b).expect("tree weights fit in 64 bits")
                })
            }
        }
    }

    pub fn vertex_count(&self) -> usize {
        match self {
            TreeType::Leaf(_) => 1,
            TreeType::Node(cs) => 1 + cs.iter().map(TreeType::vertex_count).sum::<usize>(),
        }
    }

    /// `|V̂|`.
    pub fn non_leaf_count(&self) -> usize {
        match self {
            TreeType::Leaf(_) => 0,
            TreeType::Node(cs) => 1 + cs.iter().map(TreeType::non_leaf_count).sum::<usize>(),
        }
    }

    pub fn edge_count(&self) -> usize {
        self.vertex_count() - 1
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            TreeType::Leaf(_) => 1,
            TreeType::Node(cs) => cs.iter().map(TreeType::leaf_count).sum(),
        }
    }

    /// `(-1)^{|V̂|}`.
    pub fn sign(&self) -> i64 {
        if self.non_leaf_count().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Whether the weights of siblings are pairwise distinct everywhere.
    pub fn is_stable(&self) -> bool {
        match self {
            TreeType::Leaf(_) => true,
            TreeType::Node(cs) => {
                let ws: BTreeSet<Exponent> = cs.iter().map(TreeType::weight).collect();
                ws.len() == cs.len() && cs.iter().all(TreeType::is_stable)
            }
        }
    }

    /// Deterministic string identifying the type.
    pub fn encoding(&self) -> String {
        match self {
            TreeType::Leaf(e) => {
                let m: Vec<String> = e.m.iter().map(i64::to_string).collect();
                let q: Vec<String> = e.q.iter().map(i64::to_string).collect();
                format!("L[{};{}]", m.join(","), q.join(","))
            }
            TreeType::Node(cs) => {
                let inner: Vec<String> = cs.iter().map(TreeType::encoding).collect();
                format!("N({})", inner.join(","))
            }
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            TreeType::Leaf(e) => {
                let label: Vec<i64> = e.m.iter().chain(&e.q).copied().collect();
                json!({"label": label})
            }
            TreeType::Node(cs) => {
                json!({"children": cs.iter().map(TreeType::to_json).collect::<Vec<_>>()})
            }
        }
    }

    /// Graphviz rendering with edges pointing towards the root.
    pub fn to_dot(&self, name: &str) -> String {
        fn walk(t: &TreeType, next: &mut usize, out: &mut Vec<String>) -> usize {
            let id = *next;
            *next += 1;
            match t {
                TreeType::Leaf(e) => {
                    out.push(format!(
                        "  n{id} [shape=box,label=\"{:?};{:?}\"];",
                        e.m, e.q
                    ));
                }
                TreeType::Node(cs) => {
                    out.push(format!("  n{id} [shape=point];"));
                    for c in cs {
                        let cid = walk(c, next, out);
                        out.push(format!("  n{cid} -> n{id};"));
                    }
                }
            }
            id
        }
        let mut lines = Vec::new();
        let mut next = 0;
        walk(self, &mut next, &mut lines);
        format!("digraph {name} {{\n{}\n}}\n", lines.join("\n"))
    }
}

fn factorial(k: usize) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `|Aut(Γ)|`: permutations of isomorphic sibling subtrees, at every node.
pub fn aut_count(tree: &TreeType) -> BigInt {
    match tree {
        TreeType::Leaf(_) => BigInt::one(),
        TreeType::Node(cs) => {
            let mut groups: BTreeMap<String, usize> = BTreeMap::new();
            for c in cs {
                *groups.entry(c.encoding()).or_default() += 1;
            }
            let own: BigInt = groups.values().map(|&k| factorial(k)).product();
            own * cs.iter().map(aut_count).product::<BigInt>()
        }
    }
}

/// The additive function `deg_w + ℓ·m + λ·deg_w` of a frame window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grading {
    trunc: Truncation,
}

impl Grading {
    pub fn from_truncation(trunc: Truncation) -> Self {
        Self { trunc }
    }

    pub fn at_vertex(dec: &Decomposition, kd: &KaehlerData, v: usize) -> Result<Self> {
        Ok(Self {
            trunc: frame_truncation(dec, kd, v, 1)?,
        })
    }

    pub fn level(&self, e: &Exponent) -> i64 {
        self.trunc.deg_w(e) + self.trunc.potential_of(e).unwrap_or(0)
    }
}

/// Leaf labels `S`: the exponents of `f_v` outside `Q`, with coefficients.
pub fn leaf_labels(sf: &SlabFunction) -> Vec<(Exponent, BigRational)> {
    sf.f.terms()
        .iter()
        .filter(|(e, _)| !e.is_pure_q())
        .map(|(e, c)| (e.clone(), c.clone()))
        .collect()
}

fn sub(a: &Exponent, b: &Exponent) -> Exponent {
    a.checked_add(&b.neg())
        .expect("tree weights fit in 64 bits")
}

/// Explicit enumeration of tree types over a fixed label set.
pub struct TreeEnumerator {
    labels: Vec<Exponent>,
    grading: Grading,
    leaf_cap: usize,
    reverse: bool,
    universe: Vec<Exponent>,
    stable: HashMap<Exponent, Vec<TreeType>>,
    unstable: HashMap<Exponent, Vec<TreeType>>,
}

impl TreeEnumerator {
    /// Prepares enumeration of every weight up to `max_level`.
    pub fn new(
        labels: &[Exponent],
        grading: Grading,
        max_level: i64,
        leaf_cap: usize,
    ) -> Result<Self> {
        for l in labels {
            if grading.level(l) < 1 {
                return Err(Error::Internal(format!("label {l:?} has level below one")));
            }
            if l.is_pure_q() {
                return Err(Error::MalformedInput(format!("label {l:?} lies in Q")));
            }
        }
        let mut seen: BTreeSet<Exponent> = BTreeSet::new();
        let mut frontier: Vec<Exponent> = labels
            .iter()
            .filter(|l| grading.level(l) <= max_level)
            .cloned()
            .collect();
        while let Some(w) = frontier.pop() {
            if !seen.insert(w.clone()) {
                continue;
            }
            for l in labels {
                let next = w.checked_add(l)?;
                if grading.level(&next) <= max_level && !seen.contains(&next) {
                    frontier.push(next);
                }
            }
        }
        let mut universe: Vec<Exponent> = seen.into_iter().filter(|e| !e.is_pure_q()).collect();
        universe.sort_by_key(|e| (grading.level(e), e.clone()));
        Ok(Self {
            labels: labels.to_vec(),
            grading,
            leaf_cap,
            reverse: false,
            universe,
            stable: HashMap::new(),
            unstable: HashMap::new(),
        })
    }

    /// Explore candidates in the opposite order; the canonical result must not change.
    pub fn reversed(mut self) -> Self {
        self.reverse = true;
        self
    }

    fn check_cap(&self, trees: &[TreeType]) -> Result<()> {
        match trees.iter().find(|t| t.leaf_count() > self.leaf_cap) {
            Some(_) => Err(Error::LeafCapExceeded(self.leaf_cap)),
            None => Ok(()),
        }
    }

    /// Splittings of `target` into at least two parts of lower level.
    fn splittings(&self, target: &Exponent, distinct: bool) -> Vec<Vec<Exponent>> {
        let top = self.grading.level(target);
        let mut cands: Vec<&Exponent> = self
            .universe
            .iter()
            .filter(|u| self.grading.level(u) < top)
            .collect();
        if self.reverse {
            cands.reverse();
        }
        let mut out = Vec::new();
        let mut chosen = Vec::new();
        self.split_rec(&cands, 0, target, top, distinct, &mut chosen, &mut out);
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn split_rec(
        &self,
        cands: &[&Exponent],
        start: usize,
        rest: &Exponent,
        rest_level: i64,
        distinct: bool,
        chosen: &mut Vec<Exponent>,
        out: &mut Vec<Vec<Exponent>>,
    ) {
        for i in start..cands.len() {
            let c = cands[i];
            let l = self.grading.level(c);
            if l > rest_level {
                continue;
            }
            let rem = sub(rest, c);
            chosen.push(c.clone());
            if rem.is_zero() {
                if chosen.len() >= 2 {
                    out.push(chosen.clone());
                }
            } else if rest_level - l >= 1 {
                let next = if distinct { i + 1 } else { i };
                self.split_rec(cands, next, &rem, rest_level - l, distinct, chosen, out);
            }
            chosen.pop();
        }
    }

    /// Stable disk types of weight `target`.
    pub fn disk_types(&mut self, target: &Exponent) -> Result<Vec<TreeType>> {
        if let Some(t) = self.stable.get(target) {
            return Ok(t.clone());
        }
        let mut out: BTreeSet<TreeType> = BTreeSet::new();
        if self.labels.contains(target) {
            out.insert(TreeType::Leaf(target.clone()));
        }
        if !target.is_pure_q() {
            for parts in self.splittings(target, true) {
                for t in self.combine_stable(&parts)? {
                    out.insert(t);
                }
            }
        }
        let out: Vec<TreeType> = out.into_iter().collect();
        self.check_cap(&out)?;
        self.stable.insert(target.clone(), out.clone());
        Ok(out)
    }

    fn combine_stable(&mut self, parts: &[Exponent]) -> Result<Vec<TreeType>> {
        let mut acc: Vec<Vec<TreeType>> = vec![Vec::new()];
        for p in parts {
            let mut opts = self.disk_types(p)?;
            if self.reverse {
                opts.reverse();
            }
            if opts.is_empty() {
                return Ok(Vec::new());
            }
            acc = acc
                .into_iter()
                .flat_map(|prefix| {
                    opts.iter().map(move |o| {
                        let mut p = prefix.clone();
                        p.push(o.clone());
                        p
                    })
                })
                .collect();
        }
        Ok(acc.into_iter().map(TreeType::node).collect())
    }

    /// Disk types without the stability condition.
    pub fn unstable_disk_types(&mut self, target: &Exponent) -> Result<Vec<TreeType>> {
        if let Some(t) = self.unstable.get(target) {
            return Ok(t.clone());
        }
        let mut out: BTreeSet<TreeType> = BTreeSet::new();
        if self.labels.contains(target) {
            out.insert(TreeType::Leaf(target.clone()));
        }
        if !target.is_pure_q() {
            for parts in self.splittings(target, false) {
                for t in self.combine_unstable(&parts)? {
                    out.insert(t);
                }
            }
        }
        let out: Vec<TreeType> = out.into_iter().collect();
        self.check_cap(&out)?;
        self.unstable.insert(target.clone(), out.clone());
        Ok(out)
    }

    fn combine_unstable(&mut self, parts: &[Exponent]) -> Result<Vec<TreeType>> {
        let mut groups: Vec<(Exponent, usize)> = Vec::new();
        for p in parts {
            match groups.iter_mut().find(|(e, _)| e == p) {
                Some(g) => g.1 += 1,
                None => groups.push((p.clone(), 1)),
            }
        }
        let mut acc: Vec<Vec<TreeType>> = vec![Vec::new()];
        for (w, k) in groups {
            let opts = self.unstable_disk_types(&w)?;
            if opts.is_empty() {
                return Ok(Vec::new());
            }
            // Multisets of size k from opts, as non-decreasing index tuples.
            let mut choices: Vec<Vec<usize>> = vec![Vec::new()];
            for _ in 0..k {
                choices = choices
                    .into_iter()
                    .flat_map(|c| {
                        let lo = c.last().copied().unwrap_or(0);
                        (lo..opts.len()).map(move |i| {
                            let mut c = c.clone();
                            c.push(i);
                            c
                        })
                    })
                    .collect();
            }
            let opts = &opts;
            acc = acc
                .into_iter()
                .flat_map(|prefix| {
                    choices.iter().map(move |c| {
                        let mut p = prefix.clone();
                        p.extend(c.iter().map(|&i| opts[i].clone()));
                        p
                    })
                })
                .collect();
        }
        Ok(acc.into_iter().map(TreeType::node).collect())
    }

    /// Pointed rational curve types with root weight `q ∈ Q`.
    pub fn curve_types(&mut self, q: &Exponent) -> Result<Vec<TreeType>> {
        if !q.is_pure_q() || q.deg() == 0 {
            return Err(Error::MalformedInput(
                "curve root weight must be a nonzero element of Q".into(),
            ));
        }
        let mut out = BTreeSet::new();
        for parts in self.splittings(q, true) {
            for t in self.combine_stable(&parts)? {
                out.insert(t);
            }
        }
        let out: Vec<TreeType> = out.into_iter().collect();
        self.check_cap(&out)?;
        Ok(out)
    }
}

/// Stable disk types of weight `target` with leaves in `labels`.
pub fn enumerate_disk_types(
    target: &Exponent,
    labels: &[Exponent],
    grading: &Grading,
    leaf_cap: usize,
) -> Result<Vec<TreeType>> {
    if target.is_pure_q() {
        return Err(Error::MalformedInput(
            "disk weight must lie outside Q".into(),
        ));
    }
    TreeEnumerator::new(labels, grading.clone(), grading.level(target), leaf_cap)?
        .disk_types(target)
}

/// Product of the coefficients of the leaves, looked up in `labels`.
pub fn leaf_product(tree: &TreeType, labels: &[(Exponent, BigRational)]) -> BigRational {
    match tree {
        TreeType::Leaf(e) => label_coeff(labels, e),
        TreeType::Node(cs) => cs.iter().map(|c| leaf_product(c, labels)).product(),
    }
}

fn plain(labels: &[(Exponent, BigRational)]) -> Vec<Exponent> {
    labels.iter().map(|(e, _)| e.clone()).collect()
}

/// `a_m = Σ (-1)^{|V̂|} ∏ c_leaf` over stable disk types.
pub fn a_coefficient(
    target: &Exponent,
    labels: &[(Exponent, BigRational)],
    grading: &Grading,
    leaf_cap: usize,
) -> Result<BigRational> {
    let types = enumerate_disk_types(target, &plain(labels), grading, leaf_cap)?;
    Ok(types
        .iter()
        .map(|t| BigRational::from_integer(t.sign().into()) * leaf_product(t, labels))
        .sum())
}

/// `b_q = Σ (-1)^{|V̂|-1} ∏ c_leaf` over pointed curve types, counting the root in `V̂`.
pub fn b_coefficient(
    q: &Exponent,
    labels: &[(Exponent, BigRational)],
    grading: &Grading,
    leaf_cap: usize,
) -> Result<BigRational> {
    let mut en = TreeEnumerator::new(&plain(labels), grading.clone(), grading.level(q), leaf_cap)?;
    let types = en.curve_types(q)?;
    Ok(types
        .iter()
        .map(|t| -BigRational::from_integer(t.sign().into()) * leaf_product(t, labels))
        .sum())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductExpansion {
    pub vertex: usize,
    /// Nonzero `a_m`, ordered by level and then exponent.
    pub factors: Vec<(Exponent, BigRational)>,
    /// Pure-`Q` coefficients of the product, i.e. `b_q`.
    pub b: Vec<(Exponent, BigRational)>,
    pub product: Series,
    /// The normalized slab function in the same window.
    pub slab: Series,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpForm {
    pub vertex: usize,
    /// `Σ_m (Σ_Γ (-1)^{|V̂|}/|Aut Γ|) z^m` over unstable types.
    pub exponent_sum: Series,
    pub series: Series,
    pub slab: Series,
}

fn check_interior(dec: &Decomposition, kd: &KaehlerData, v: usize) -> Result<()> {
    if v >= dec.num_vertices() {
        return Err(Error::UnknownVertex(v.to_string()));
    }
    // Without walls there are no corrections and every vertex is admissible.
    if kd.rank > 0 && !dec.is_interior_vertex(v) {
        return Err(Error::VertexNotInterior(v));
    }
    Ok(())
}

fn max_level(trunc: &Truncation) -> i64 {
    let k = i64::from(trunc.order.unwrap_or(0));
    k + trunc.potential.as_ref().map_or(0, |p| p.lambda * k) + 1
}

/// Weights of level `l` that can carry a factor: labels and the support of
/// the running product.
fn level_weights<'a>(
    grading: &Grading,
    labels: &'a [(Exponent, BigRational)],
    running: &'a Series,
    l: i64,
) -> BTreeSet<Exponent> {
    labels
        .iter()
        .map(|(e, _)| e)
        .chain(running.terms().keys())
        .filter(|e| !e.is_pure_q() && grading.level(e) == l)
        .cloned()
        .collect()
}

fn label_coeff(labels: &[(Exponent, BigRational)], w: &Exponent) -> BigRational {
    labels
        .iter()
        .find(|(e, _)| e == w)
        .map_or_else(BigRational::zero, |(_, c)| c.clone())
}

/// `∏ (1 + a_m z^m)` over weights with nonzero `M`-part, to `Q`-order `k`.
pub fn product_expansion(
    dec: &Decomposition,
    kd: &KaehlerData,
    v: usize,
    k: u32,
) -> Result<ProductExpansion> {
    check_interior(dec, kd, v)?;
    let sf = normalize(dec, kd, v, k)?;
    let window = frame_truncation(dec, kd, v, k)?;
    let grading = Grading::from_truncation(window.clone());
    let labels: Vec<(Exponent, BigRational)> = leaf_labels(&sf)
        .into_iter()
        .filter(|(e, _)| window.admits(e))
        .collect();
    let one = Series::one(dec.dim(), kd.rank, window.clone());
    let mut product = one.clone();
    let mut factors = Vec::new();
    for l in 1..=max_level(&window) {
        let mut new = Vec::new();
        for w in level_weights(&grading, &labels, &product, l) {
            let a = label_coeff(&labels, &w) - product.coeff(&w);
            if !a.is_zero() {
                new.push((w, a));
            }
        }
        for (w, a) in &new {
            let factor = one.add(&Series::monomial(w.clone(), a.clone(), window.clone()));
            product = product.mul(&factor)?;
        }
        factors.extend(new);
    }
    let b = product
        .terms()
        .iter()
        .filter(|(e, _)| e.is_pure_q() && e.deg() > 0)
        .map(|(e, c)| (e.clone(), c.clone()))
        .collect();
    Ok(ProductExpansion {
        vertex: v,
        factors,
        b,
        product,
        slab: sf.f.with_truncation(window),
    })
}

/// `exp(Σ T_m z^m)` with `T_m` the automorphism-weighted count of unstable types.
pub fn exp_form(dec: &Decomposition, kd: &KaehlerData, v: usize, k: u32) -> Result<ExpForm> {
    check_interior(dec, kd, v)?;
    let sf = normalize(dec, kd, v, k)?;
    let window = frame_truncation(dec, kd, v, k)?;
    let grading = Grading::from_truncation(window.clone());
    let labels: Vec<(Exponent, BigRational)> = leaf_labels(&sf)
        .into_iter()
        .filter(|(e, _)| window.admits(e))
        .collect();
    let mut running = Series::one(dec.dim(), kd.rank, window.clone());
    let mut exponent_sum = Series::zero(window.clone());
    for l in 1..=max_level(&window) {
        let mut new = Vec::new();
        for w in level_weights(&grading, &labels, &running, l) {
            let t = label_coeff(&labels, &w) - running.coeff(&w);
            if !t.is_zero() {
                new.push((w, t));
            }
        }
        for (w, t) in &new {
            let term = Series::monomial(w.clone(), t.clone(), window.clone());
            running = running.mul(&term.exp_in(dec.dim(), kd.rank)?)?;
            exponent_sum.add_term(w.clone(), t.clone());
        }
    }
    Ok(ExpForm {
        vertex: v,
        exponent_sum,
        series: running,
        slab: sf.f.with_truncation(window),
    })
}
