//! Sparse truncated series over `M + Z + Q^gp` with exact rational coefficients.
//!
//! Truncation is a finite window of exponents closed under "going down": if a
//! product of monomials lies in the window then so does every partial
//! product. Discarding what falls outside is then a ring quotient, so every
//! coefficient that survives is exact.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// An element of `M + Z + Q^gp`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Exponent {
    pub m: Vec<i64>,
    pub r: i64,
    pub q: Vec<i64>,
}

fn overflow() -> Error {
    Error::ExponentOverflow("exponent arithmetic left the 64-bit range".into())
}

impl Exponent {
    pub fn new(m: Vec<i64>, r: i64, q: Vec<i64>) -> Self {
        Self { m, r, q }
    }

    pub fn zero(n: usize, rank: usize) -> Self {
        Self {
            m: vec![0; n],
            r: 0,
            q: vec![0; rank],
        }
    }

    /// `Σ q_i`.
    pub fn deg(&self) -> i64 {
        self.q.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.r == 0 && self.m.iter().all(|&x| x == 0) && self.q.iter().all(|&x| x == 0)
    }

    /// Supported purely on `Q`: `m = 0` and `r = 0`.
    pub fn is_pure_q(&self) -> bool {
        self.r == 0 && self.m.iter().all(|&x| x == 0)
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let add = |a: &[i64], b: &[i64]| -> Result<Vec<i64>> {
            a.iter()
                .zip(b)
                .map(|(x, y)| x.checked_add(*y).ok_or_else(overflow))
                .collect()
        };
        Ok(Self {
            m: add(&self.m, &other.m)?,
            r: self.r.checked_add(other.r).ok_or_else(overflow)?,
            q: add(&self.q, &other.q)?,
        })
    }

    pub fn neg(&self) -> Self {
        Self {
            m: self.m.iter().map(|x| -x).collect(),
            r: -self.r,
            q: self.q.iter().map(|x| -x).collect(),
        }
    }

    pub fn checked_scale(&self, k: i64) -> Result<Self> {
        let mul = |a: &[i64]| -> Result<Vec<i64>> {
            a.iter()
                .map(|x| x.checked_mul(k).ok_or_else(overflow))
                .collect()
        };
        Ok(Self {
            m: mul(&self.m)?,
            r: self.r.checked_mul(k).ok_or_else(overflow)?,
            q: mul(&self.q)?,
        })
    }

    pub fn to_json(&self) -> Value {
        json!({"m": self.m, "r": self.r, "q": self.q})
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg()
            .cmp(&other.deg())
            .then_with(|| self.q.cmp(&other.q))
            .then_with(|| self.r.cmp(&other.r))
            .then_with(|| self.m.cmp(&other.m))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Linear potential `Φ(m, q) = ℓ·m + λ·deg_w(m, q)`, bounded by `λ k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Potential {
    pub ell: Vec<i64>,
    pub lambda: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Truncation {
    /// Maximal `deg_w`; `None` means exact polynomial arithmetic.
    pub order: Option<u32>,
    /// `deg_w(m, q) = Σ q - w·m`; empty means `w = 0`.
    pub weights: Vec<i64>,
    pub potential: Option<Potential>,
    /// Bound on `‖m‖_∞`.
    pub support_bound: Option<i64>,
    /// Maximal number of nonconstant factors in a surviving product.
    pub factor_cap: u32,
}

impl Truncation {
    /// No truncation at all; `log`/`exp` still stop after `factor_cap` terms.
    pub fn polynomial() -> Self {
        Self {
            order: None,
            weights: Vec::new(),
            potential: None,
            support_bound: None,
            factor_cap: 64,
        }
    }

    /// Plain `Q`-degree window `deg q ≤ k`.
    pub fn q_degree(k: u32) -> Self {
        Self {
            order: Some(k),
            weights: Vec::new(),
            potential: None,
            support_bound: None,
            factor_cap: k.max(1),
        }
    }

    pub fn deg_w(&self, e: &Exponent) -> i64 {
        e.deg()
            - self
                .weights
                .iter()
                .zip(&e.m)
                .map(|(w, m)| w * m)
                .sum::<i64>()
    }

    pub fn potential_of(&self, e: &Exponent) -> Option<i64> {
        self.potential.as_ref().map(|p| {
            p.ell.iter().zip(&e.m).map(|(l, m)| l * m).sum::<i64>() + p.lambda * self.deg_w(e)
        })
    }

    pub fn admits(&self, e: &Exponent) -> bool {
        let Some(k) = self.order else { return true };
        let k = i64::from(k);
        if self.deg_w(e) > k {
            return false;
        }
        if let Some(r) = self.support_bound {
            if e.m.iter().any(|x| x.abs() > r) {
                return false;
            }
        }
        match (&self.potential, self.potential_of(e)) {
            (Some(p), Some(phi)) => phi <= p.lambda * k,
            _ => true,
        }
    }

    /// Same window at a different order.
    pub fn with_order(&self, k: u32) -> Self {
        let mut t = self.clone();
        t.order = Some(k);
        t
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Series {
    terms: BTreeMap<Exponent, BigRational>,
    trunc: Truncation,
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl Series {
    pub fn zero(trunc: Truncation) -> Self {
        Self {
            terms: BTreeMap::new(),
            trunc,
        }
    }

    pub fn one(n: usize, rank: usize, trunc: Truncation) -> Self {
        Self::monomial(Exponent::zero(n, rank), BigRational::one(), trunc)
    }

    pub fn monomial(e: Exponent, c: BigRational, trunc: Truncation) -> Self {
        let mut s = Self::zero(trunc);
        s.add_term(e, c);
        s
    }

    /// Builds a series, summing repeated exponents and dropping what the
    /// window excludes.
    pub fn from_terms(
        terms: impl IntoIterator<Item = (Exponent, BigRational)>,
        trunc: Truncation,
    ) -> Self {
        let mut s = Self::zero(trunc);
        for (e, c) in terms {
            s.add_term(e, c);
        }
        s
    }

    pub fn add_term(&mut self, e: Exponent, c: BigRational) {
        if c.is_zero() || !self.trunc.admits(&e) {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn truncation(&self) -> &Truncation {
        &self.trunc
    }

    /// Re-filters into another window.
    pub fn with_truncation(&self, trunc: Truncation) -> Self {
        Self::from_terms(self.terms.clone(), trunc)
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, BigRational> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &Exponent) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn constant_term(&self) -> BigRational {
        self.terms
            .iter()
            .find(|(e, _)| e.is_zero())
            .map_or_else(BigRational::zero, |(_, c)| c.clone())
    }

    fn dims(&self) -> Option<(usize, usize)> {
        self.terms.keys().next().map(|e| (e.m.len(), e.q.len()))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut s = self.clone();
        for (e, c) in &other.terms {
            s.add_term(e.clone(), c.clone());
        }
        s
    }

    pub fn neg(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
            trunc: self.trunc.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return Self::zero(self.trunc.clone());
        }
        Self {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
            trunc: self.trunc.clone(),
        }
    }

    /// Truncated product, in the window of `self`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut acc: HashMap<Exponent, BigRational> =
            HashMap::with_capacity(self.len() * other.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea.checked_add(eb)?;
                if !self.trunc.admits(&e) {
                    continue;
                }
                let c = ca * cb;
                acc.entry(e).and_modify(|x| *x += &c).or_insert(c);
            }
        }
        let terms = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        Ok(Self {
            terms,
            trunc: self.trunc.clone(),
        })
    }

    /// Multiplies by a monomial without re-filtering (a change of frame).
    pub fn shift(&self, by: &Exponent) -> Result<Self> {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| Ok((e.checked_add(by)?, c.clone())))
            .collect::<Result<_>>()?;
        Ok(Self {
            terms,
            trunc: self.trunc.clone(),
        })
    }

    pub fn pure_q_part(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.is_pure_q())
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
            trunc: self.trunc.clone(),
        }
    }

    /// Pure-`Q` terms of `Q`-degree exactly `d`.
    pub fn pure_q_degree(&self, d: i64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.is_pure_q() && e.deg() == d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
            trunc: self.trunc.clone(),
        }
    }

    fn one_like(&self) -> Self {
        match self.dims() {
            Some((n, r)) => Self::one(n, r, self.trunc.clone()),
            None => Self::zero(self.trunc.clone()),
        }
    }

    fn check_constant(&self, expected: &BigRational, err: Error) -> Result<()> {
        if &self.constant_term() == expected {
            Ok(())
        } else {
            Err(err)
        }
    }

    /// Sum of `coeffs[i] h^i` for `i ≥ 1`, failing if `h^J` is still nonzero.
    fn compose(h: &Self, coeff: impl Fn(i64) -> BigRational) -> Result<Self> {
        let mut out = Self::zero(h.trunc.clone());
        let mut power = h.clone();
        let mut i = 1i64;
        while !power.is_empty() {
            if i > i64::from(h.trunc.factor_cap) {
                return Err(Error::TruncationOverflow(format!(
                    "power {i} of a series without constant term is still nonzero; the window is not finite"
                )));
            }
            out = out.add(&power.scale(&coeff(i)));
            power = power.mul(h)?;
            i += 1;
        }
        Ok(out)
    }

    /// `log f = Σ (-1)^{i+1} (f-1)^i / i`.
    pub fn log(&self) -> Result<Self> {
        self.check_constant(&BigRational::one(), Error::ConstantTermNotOne)?;
        let h = self.sub(&self.one_like());
        Self::compose(&h, |i| ratio(if i % 2 == 1 { 1 } else { -1 }, i))
    }

    pub fn exp(&self) -> Result<Self> {
        self.check_constant(&BigRational::zero(), Error::ConstantTermNotZero)?;
        let mut fact = BigInt::one();
        let coeffs: Vec<BigRational> = (1..=i64::from(self.trunc.factor_cap) + 1)
            .map(|i| {
                fact *= BigInt::from(i);
                BigRational::new(BigInt::one(), fact.clone())
            })
            .collect();
        let tail = Self::compose(self, |i| coeffs[(i - 1) as usize].clone())?;
        let one = match self.dims() {
            Some((n, r)) => Self::one(n, r, self.trunc.clone()),
            None => {
                return Err(Error::Internal(
                    "exp of an empty series needs explicit dimensions".into(),
                ))
            }
        };
        Ok(one.add(&tail))
    }

    /// `exp` with explicit dimensions, so `exp(0) = 1` is well defined.
    pub fn exp_in(&self, n: usize, rank: usize) -> Result<Self> {
        if self.is_empty() {
            return Ok(Self::one(n, rank, self.trunc.clone()));
        }
        self.exp()
    }

    pub fn power(&self, e: i64) -> Result<Self> {
        let base = if e < 0 {
            self.check_constant(&BigRational::one(), Error::ConstantTermNotOne)?;
            let h = self.sub(&self.one_like());
            // (1 + h)^{-1} = Σ (-h)^i.
            self.one_like().add(&Self::compose(&h, |i| {
                ratio(if i % 2 == 0 { 1 } else { -1 }, 1)
            })?)
        } else {
            self.clone()
        };
        let mut k = e.unsigned_abs();
        let mut out = self.one_like();
        if out.is_empty() && k > 0 {
            return Ok(Self::zero(self.trunc.clone()));
        }
        let mut sq = base;
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&sq)?;
            }
            k >>= 1;
            if k > 0 {
                sq = sq.mul(&sq)?;
            }
        }
        Ok(out)
    }

    /// Coefficients must all be integers.
    pub fn assert_integral(&self) -> Result<()> {
        match self.terms.iter().find(|(_, c)| !c.is_integer()) {
            None => Ok(()),
            Some((e, c)) => Err(Error::NonIntegralCoefficient(format!("{c} at {e:?}"))),
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .map(|(e, c)| json!({"m": e.m, "r": e.r, "q": e.q, "coeff": c.to_string()}))
                .collect(),
        )
    }

    pub fn render(&self, names: &VarNames) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (e, c)) in self.terms.iter().enumerate() {
            let mono = names.monomial(e);
            let (neg, abs) = if c.is_negative() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            match (abs.is_one(), mono.is_empty()) {
                (true, true) => s.push('1'),
                (true, false) => s.push_str(&mono),
                (false, true) => s.push_str(&abs.to_string()),
                (false, false) => {
                    s.push_str(&abs.to_string());
                    s.push('*');
                    s.push_str(&mono);
                }
            }
        }
        s
    }
}

/// Variable names for plain-text rendering.
#[derive(Debug, Clone)]
pub struct VarNames {
    pub m: Vec<String>,
    pub r: String,
    pub q: Vec<String>,
}

impl VarNames {
    pub fn standard(n: usize, rank: usize) -> Self {
        let m = match n {
            1 => vec!["x".to_string()],
            2 => vec!["x".into(), "y".into()],
            3 => vec!["x".into(), "y".into(), "w".into()],
            _ => (1..=n).map(|i| format!("x{i}")).collect(),
        };
        let q = match rank {
            1 => vec!["t".to_string()],
            _ => (1..=rank).map(|i| format!("t{i}")).collect(),
        };
        Self {
            m,
            r: "s".into(),
            q,
        }
    }

    pub fn monomial(&self, e: &Exponent) -> String {
        let mut parts = Vec::new();
        let mut push = |name: &str, k: i64| match k {
            0 => {}
            1 => parts.push(name.to_string()),
            _ => parts.push(format!("{name}^{k}")),
        };
        for (name, &k) in self.m.iter().zip(&e.m) {
            push(name, k);
        }
        push(&self.r, e.r);
        for (name, &k) in self.q.iter().zip(&e.q) {
            push(name, k);
        }
        parts.join("*")
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, r) = self.dims().unwrap_or((0, 0));
        f.write_str(&self.render(&VarNames::standard(n, r)))
    }
}

/// `z^{(v - v', 0, ψ̄(v) - ψ̄(v'))} f`: the slab function at `v` seen from `v'`.
pub fn transport_slab(
    dec: &crate::polytope::Decomposition,
    kd: &crate::kaehler::KaehlerData,
    f: &Series,
    v: usize,
    w: usize,
) -> Result<Series> {
    if v >= dec.num_vertices() || w >= dec.num_vertices() {
        return Err(Error::UnknownVertex(format!("{v} or {w}")));
    }
    if v != w && !dec.adjacent(v, w) {
        return Err(Error::NotAdjacent(v, w));
    }
    f.shift(&frame_shift(dec, kd, v, w)?)
}

/// The exponent `(v - w, 0, ψ̄(v) - ψ̄(w))`.
pub fn frame_shift(
    dec: &crate::polytope::Decomposition,
    kd: &crate::kaehler::KaehlerData,
    v: usize,
    w: usize,
) -> Result<Exponent> {
    let m = dec.vertex(v).sub(dec.vertex(w)).to_i64()?;
    let q = crate::polytope::LatticeVector(
        kd.psibar[v]
            .iter()
            .zip(&kd.psibar[w])
            .map(|(a, b)| a - b)
            .collect(),
    )
    .to_i64()?;
    Ok(Exponent::new(m, 0, q))
}
