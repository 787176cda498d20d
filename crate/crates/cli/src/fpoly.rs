//! Polynomials in `k1..kn` typed on the command line.
//!
//! Grammar: a sum of terms `c*k1^a*k3^b`, where `c` is an integer or a fraction
//! `p/q`. `p<d>` is short for the power sum `k1^d + … + kn^d`.

use anyhow::{anyhow, bail, Result};
use locuslab_core::scalar::TowerScalar;
use locuslab_core::symbolic::MultiPoly;

pub fn parse_polynomial(src: &str, n: usize) -> Result<MultiPoly> {
    let src: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    if let Some(d) = src.strip_prefix('p') {
        let d: u32 = d
            .parse()
            .map_err(|_| anyhow!("power sum '{src}' needs an integer degree"))?;
        return Ok((0..n).fold(MultiPoly::zero(n), |acc, i| {
            acc.add(&MultiPoly::var(n, i).pow(d))
        }));
    }
    if src.is_empty() {
        bail!("empty polynomial");
    }
    let mut out = MultiPoly::zero(n);
    let mut rest = src.as_str();
    let mut col = 1;
    while !rest.is_empty() {
        let (neg, body) = match rest.as_bytes()[0] {
            b'+' => (false, &rest[1..]),
            b'-' => (true, &rest[1..]),
            _ if col == 1 => (false, rest),
            _ => bail!("column {col}: expected '+' or '-'"),
        };
        let skipped = rest.len() - body.len();
        let end = body.find(['+', '-']).unwrap_or(body.len());
        let term =
            parse_term(&body[..end], n).map_err(|e| anyhow!("column {}: {e}", col + skipped))?;
        out = if neg { out.sub(&term) } else { out.add(&term) };
        col += skipped + end;
        rest = &body[end..];
    }
    Ok(out)
}

fn parse_term(term: &str, n: usize) -> Result<MultiPoly> {
    if term.is_empty() {
        bail!("empty term");
    }
    let mut acc = MultiPoly::one(n);
    for factor in term.split('*') {
        if let Some(var) = factor.strip_prefix('k') {
            let (idx, exp) = match var.split_once('^') {
                Some((i, e)) => (
                    i,
                    e.parse::<u32>()
                        .map_err(|_| anyhow!("bad exponent in '{factor}'"))?,
                ),
                None => (var, 1),
            };
            let i: usize = idx
                .parse()
                .map_err(|_| anyhow!("bad variable '{factor}'"))?;
            if i == 0 || i > n {
                bail!("variable '{factor}' outside k1..k{n}");
            }
            acc = acc.mul(&MultiPoly::var(n, i - 1).pow(exp));
        } else {
            let c = match factor.split_once('/') {
                Some((p, q)) => {
                    let p: i64 = p
                        .parse()
                        .map_err(|_| anyhow!("bad coefficient '{factor}'"))?;
                    let q: i64 = q
                        .parse()
                        .map_err(|_| anyhow!("bad coefficient '{factor}'"))?;
                    if q == 0 {
                        bail!("zero denominator in '{factor}'");
                    }
                    TowerScalar::from_frac(p, q)
                }
                None => TowerScalar::from_int(
                    factor
                        .parse()
                        .map_err(|_| anyhow!("bad factor '{factor}'"))?,
                ),
            };
            acc = acc.scale(&c);
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(n: usize, i: usize) -> MultiPoly {
        MultiPoly::var(n, i)
    }

    #[test]
    fn power_sum() {
        let p = parse_polynomial("p3", 2).unwrap();
        assert_eq!(p, k(2, 0).pow(3).add(&k(2, 1).pow(3)));
    }

    #[test]
    fn explicit_terms() {
        let p = parse_polynomial("k1^2 - 3/2*k1*k2 + 4", 2).unwrap();
        let expected = k(2, 0)
            .pow(2)
            .sub(&k(2, 0).mul(&k(2, 1)).scale(&TowerScalar::from_frac(3, 2)))
            .add(&MultiPoly::constant(2, TowerScalar::from_int(4)));
        assert_eq!(p, expected);
        assert_eq!(parse_polynomial("-k2", 2).unwrap(), k(2, 1).neg());
    }

    #[test]
    fn errors() {
        assert!(parse_polynomial("k3", 2).is_err());
        assert!(parse_polynomial("k1^x", 2).is_err());
        assert!(parse_polynomial("", 2).is_err());
        assert!(parse_polynomial("2*k1 + 1/0", 2).is_err());
    }
}
