//! Vertex, target and q-choice syntax.

use num_bigint::BigInt;
use toric_mirror::series::{frame_shift, Exponent, VarNames};
use toric_mirror::{Decomposition, Error, KaehlerData, LatticeVector, Result};

fn int(s: &str) -> Result<BigInt> {
    s.trim()
        .parse()
        .map_err(|_| Error::MalformedInput(format!("not an integer: {s:?}")))
}

fn small(s: &str) -> Result<i64> {
    s.trim()
        .parse()
        .map_err(|_| Error::MalformedInput(format!("not a 64-bit integer: {s:?}")))
}

fn ints(s: &str) -> Result<Vec<BigInt>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(int).collect()
}

/// `None` selects the origin; `@k` is a table index; otherwise comma-separated
/// coordinates, with a lone `0` standing for the origin in any dimension.
pub fn vertex(dec: &Decomposition, spec: Option<&str>) -> Result<usize> {
    let origin = || {
        dec.origin()
            .ok_or_else(|| Error::UnknownVertex("origin".into()))
    };
    let Some(spec) = spec else { return origin() };
    let spec = spec.trim();
    if let Some(idx) = spec.strip_prefix('@') {
        let i: usize = idx.parse().map_err(|_| Error::UnknownVertex(spec.into()))?;
        return if i < dec.num_vertices() {
            Ok(i)
        } else {
            Err(Error::UnknownVertex(spec.into()))
        };
    }
    if spec == "0" {
        return origin();
    }
    let p = LatticeVector(ints(spec)?);
    if p.dim() != dec.dim() {
        return Err(Error::UnknownVertex(format!(
            "{spec}: expected {} coordinates",
            dec.dim()
        )));
    }
    dec.vertex_index(&p)
        .ok_or_else(|| Error::UnknownVertex(spec.into()))
}

/// The frame exponent of the lattice point `v - (1, ..., 1)`, if there is one.
fn z_exponent(dec: &Decomposition, kd: &KaehlerData, v: usize) -> Result<Exponent> {
    let p = LatticeVector(dec.vertex(v).0.iter().map(|x| x - 1).collect());
    let u = dec
        .vertex_index(&p)
        .ok_or_else(|| Error::MalformedInput(format!("z needs the lattice point {p}")))?;
    frame_shift(dec, kd, u, v)
}

/// Either `m;q` with comma-separated integers, or a monomial such as `x2y2`,
/// `x^-1t`, `x2yz` or `t1t2^2`. `z` is the frame monomial of the point
/// `v - (1, ..., 1)`; for local P² at the origin that is `x^-1 y^-1 t`.
pub fn target(dec: &Decomposition, kd: &KaehlerData, v: usize, spec: &str) -> Result<Exponent> {
    let n = dec.dim();
    let spec = spec.trim();
    if spec
        .chars()
        .all(|c| c.is_ascii_digit() || ",;- ".contains(c))
    {
        let (m, q) = spec.split_once(';').unwrap_or((spec, ""));
        let m = m.split(',').map(small).collect::<Result<Vec<_>>>()?;
        let q = if q.trim().is_empty() {
            vec![0; kd.rank]
        } else {
            q.split(',').map(small).collect::<Result<_>>()?
        };
        if m.len() != n || q.len() != kd.rank {
            return Err(Error::MalformedInput(format!(
                "target needs {n} + {} integers",
                kd.rank
            )));
        }
        return Ok(Exponent::new(m, 0, q));
    }
    let names = VarNames::standard(n, kd.rank);
    let mut vars: Vec<(String, Exponent)> = Vec::new();
    for (i, name) in names.m.iter().enumerate() {
        let mut m = vec![0; n];
        m[i] = 1;
        vars.push((name.clone(), Exponent::new(m, 0, vec![0; kd.rank])));
    }
    for (i, name) in names.q.iter().enumerate() {
        let mut q = vec![0; kd.rank];
        q[i] = 1;
        vars.push((name.clone(), Exponent::new(vec![0; n], 0, q)));
    }
    vars.sort_by_key(|(name, _)| std::cmp::Reverse(name.len()));

    let mut out = Exponent::zero(n, kd.rank);
    let mut rest = spec.trim_start_matches('*');
    while !rest.is_empty() {
        let (base, tail) = if let Some(tail) = rest.strip_prefix('z') {
            (z_exponent(dec, kd, v)?, tail)
        } else {
            let (name, e) = vars
                .iter()
                .find(|(name, _)| rest.starts_with(name.as_str()))
                .ok_or_else(|| Error::MalformedInput(format!("unknown variable in {rest:?}")))?;
            (e.clone(), &rest[name.len()..])
        };
        let (power, tail) = power(tail)?;
        out = out.checked_add(&base.checked_scale(power)?)?;
        rest = tail.trim_start_matches('*');
    }
    Ok(out)
}

fn power(s: &str) -> Result<(i64, &str)> {
    let (body, signed) = match s.strip_prefix('^') {
        Some(b) => (b, true),
        None => (s, false),
    };
    let sign_len = usize::from(signed && body.starts_with('-'));
    let digits = body[sign_len..]
        .chars()
        .take_while(char::is_ascii_digit)
        .count();
    if digits == 0 {
        if signed {
            return Err(Error::MalformedInput(format!(
                "missing exponent after '^' in {s:?}"
            )));
        }
        return Ok((1, s));
    }
    let end = sign_len + digits;
    Ok((small(&body[..end])?, &body[end..]))
}

pub fn q_choice(spec: &str) -> Result<Vec<BigInt>> {
    ints(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use toric_mirror::{fixtures, kaehler_data};

    #[test]
    fn vertex_syntax() {
        let dec = fixtures::local_p2();
        let o = dec.origin().unwrap();
        assert_eq!(vertex(&dec, None).unwrap(), o);
        assert_eq!(vertex(&dec, Some("0")).unwrap(), o);
        assert_eq!(vertex(&dec, Some("0,0")).unwrap(), o);
        assert_eq!(vertex(&dec, Some("@1")).unwrap(), 1);
        assert_eq!(vertex(&dec, Some("-1,-1")).unwrap(), 2);
        assert!(matches!(
            vertex(&dec, Some("5,5")),
            Err(Error::UnknownVertex(_))
        ));
        assert!(matches!(
            vertex(&dec, Some("@9")),
            Err(Error::UnknownVertex(_))
        ));
        let iv = fixtures::interval();
        assert_eq!(
            iv.vertex(vertex(&iv, Some("-1")).unwrap()),
            &LatticeVector::from_i64(&[-1])
        );
    }

    #[test]
    fn target_syntax() {
        let dec = fixtures::local_p2();
        let kd = kaehler_data(&dec).unwrap();
        let o = dec.origin().unwrap();
        let e = |m: [i64; 2], q: i64| Exponent::new(m.to_vec(), 0, vec![q]);
        assert_eq!(target(&dec, &kd, o, "x2y2").unwrap(), e([2, 2], 0));
        assert_eq!(target(&dec, &kd, o, "2,2;0").unwrap(), e([2, 2], 0));
        assert_eq!(target(&dec, &kd, o, "2,2").unwrap(), e([2, 2], 0));
        assert_eq!(target(&dec, &kd, o, "x2yz").unwrap(), e([1, 0], 1));
        assert_eq!(target(&dec, &kd, o, "x^-1*t").unwrap(), e([-1, 0], 1));
        assert_eq!(target(&dec, &kd, o, "t^3").unwrap(), e([0, 0], 3));
        assert!(target(&dec, &kd, o, "q").is_err());
        assert!(target(&dec, &kd, o, "1,2,3").is_err());
    }
}
