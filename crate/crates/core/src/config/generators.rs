use num_integer::Integer;

use crate::scalar::{rat, TowerScalar};

use super::{ConfigError, Configuration, Hyperplane};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoxeterFamily {
    A,
    B,
    C,
    D,
    /// Dihedral group of order `2p`.
    I2(u32),
}

impl std::str::FromStr for CoxeterFamily {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "A" | "a" => Ok(CoxeterFamily::A),
            "B" | "b" => Ok(CoxeterFamily::B),
            "C" | "c" => Ok(CoxeterFamily::C),
            "D" | "d" => Ok(CoxeterFamily::D),
            _ => s
                .strip_prefix("I2(")
                .and_then(|r| r.strip_suffix(')'))
                .and_then(|p| p.parse().ok())
                .map(CoxeterFamily::I2)
                .ok_or_else(|| format!("unknown Coxeter family '{s}'")),
        }
    }
}

fn unit_diff(n: usize, i: usize, j: usize, sign: i64) -> Vec<TowerScalar> {
    let mut v = vec![TowerScalar::zero(); n];
    v[i] = TowerScalar::one();
    v[j] = TowerScalar::from_int(sign);
    v
}

fn unit(n: usize, i: usize, c: i64) -> Vec<TowerScalar> {
    let mut v = vec![TowerScalar::zero(); n];
    v[i] = TowerScalar::from_int(c);
    v
}

/// Per-orbit multiplicities: one value, or one value per orbit.
fn orbit_mults(mults: &[u32], orbits: usize, what: &str) -> Result<Vec<u32>, ConfigError> {
    let out = match mults.len() {
        1 => vec![mults[0]; orbits],
        n if n == orbits => mults.to_vec(),
        n => {
            return Err(ConfigError::NonInvariant(format!(
                "{what} has {orbits} mirror orbit(s) but {n} multiplicities were given"
            )))
        }
    };
    if out.contains(&0) {
        return Err(ConfigError::InvalidParameters(
            "multiplicities must be positive".into(),
        ));
    }
    Ok(out)
}

/// `cos(πj/p)` and `sin(πj/p)` as exact scalars.
///
/// Angles that are multiples of `π/12` use square roots in `Q(i)`; other angles
/// use the cyclotomic base of order `lcm(4, 2p)`.
pub fn cos_sin_pi(j: i64, p: u32) -> (TowerScalar, TowerScalar) {
    let g = (j.rem_euclid(2 * p as i64)).gcd(&(p as i64)).max(1);
    let (j, p) = (j / g, p as i64 / g);
    if 12 % p == 0 {
        let k = j * (12 / p);
        return (cos12(k), cos12(6 - k));
    }
    let order = (4u32).lcm(&(2 * p as u32));
    let step = (order as i64) / (2 * p);
    let z = TowerScalar::zeta_power(order, step * j);
    let zi = TowerScalar::zeta_power(order, -step * j);
    let half = TowerScalar::from_frac(1, 2);
    let c = z.add(&zi).mul(&half);
    let s = z.sub(&zi).mul(&half).mul(&TowerScalar::i().neg());
    (c, s)
}

/// `cos(kπ/12)`.
fn cos12(k: i64) -> TowerScalar {
    let mut k = k.rem_euclid(24);
    if k > 12 {
        k = 24 - k;
    }
    if k > 6 {
        return cos12(12 - k).neg();
    }
    let r2 = TowerScalar::sqrt_int(4, 2);
    let r3 = TowerScalar::sqrt_int(4, 3);
    let r6 = TowerScalar::sqrt_int(4, 6);
    let q = |n, d| TowerScalar::from_frac(n, d);
    match k {
        0 => TowerScalar::one(),
        1 => r6.add(&r2).mul(&q(1, 4)),
        2 => r3.mul(&q(1, 2)),
        3 => r2.mul(&q(1, 2)),
        4 => q(1, 2),
        5 => r6.sub(&r2).mul(&q(1, 4)),
        _ => TowerScalar::zero(),
    }
}

/// Mirror configurations of the classical and dihedral Coxeter groups.
///
/// `A_n` lives in `C^{n+1}` (normals `e_i - e_j`); `B_n`, `C_n`, `D_n` in `C^n`;
/// `I₂(p)` has normals at angles `πj/p`, with two orbits when `p` is even.
pub fn make_coxeter(
    family: CoxeterFamily,
    rank: usize,
    mults: &[u32],
) -> Result<Configuration, ConfigError> {
    if mults.is_empty() {
        return Err(ConfigError::InvalidParameters(
            "no multiplicities given".into(),
        ));
    }
    let mut hs = Vec::new();
    let dim = match family {
        CoxeterFamily::A => {
            if rank == 0 {
                return Err(ConfigError::InvalidParameters(
                    "rank must be positive".into(),
                ));
            }
            let m = orbit_mults(mults, 1, "A_n")?[0];
            let n = rank + 1;
            for i in 0..n {
                for j in i + 1..n {
                    hs.push(Hyperplane::linear(unit_diff(n, i, j, -1), m));
                }
            }
            n
        }
        CoxeterFamily::B | CoxeterFamily::C => {
            if rank == 0 {
                return Err(ConfigError::InvalidParameters(
                    "rank must be positive".into(),
                ));
            }
            let orbits = if rank == 1 { 1 } else { 2 };
            let ms = orbit_mults(mults, orbits, "B_n/C_n")?;
            let short = if family == CoxeterFamily::B { 1 } else { 2 };
            let n = rank;
            for i in 0..n {
                for j in i + 1..n {
                    hs.push(Hyperplane::linear(unit_diff(n, i, j, -1), ms[0]));
                    hs.push(Hyperplane::linear(unit_diff(n, i, j, 1), ms[0]));
                }
                hs.push(Hyperplane::linear(
                    unit(n, i, short),
                    *ms.last().expect("nonempty"),
                ));
            }
            n
        }
        CoxeterFamily::D => {
            if rank < 2 {
                return Err(ConfigError::InvalidParameters(
                    "D_n needs rank at least 2".into(),
                ));
            }
            let orbits = if rank == 2 { 2 } else { 1 };
            let ms = orbit_mults(mults, orbits, "D_n")?;
            let n = rank;
            for i in 0..n {
                for j in i + 1..n {
                    hs.push(Hyperplane::linear(unit_diff(n, i, j, -1), ms[0]));
                    hs.push(Hyperplane::linear(
                        unit_diff(n, i, j, 1),
                        *ms.last().expect("nonempty"),
                    ));
                }
            }
            n
        }
        CoxeterFamily::I2(p) => {
            if p < 1 {
                return Err(ConfigError::InvalidParameters("p must be positive".into()));
            }
            let ms = if p % 2 == 1 {
                if mults.len() == 2 && mults[0] != mults[1] {
                    return Err(ConfigError::NonInvariant(format!(
                        "all mirrors of I2({p}) are conjugate for odd p"
                    )));
                }
                orbit_mults(&mults[..1], 1, "I2(p)")?
            } else {
                orbit_mults(mults, 2, "I2(p)")?
            };
            for j in 0..p {
                let (c, s) = cos_sin_pi(j as i64, p);
                let m = ms[(j as usize) % ms.len()];
                hs.push(Hyperplane::linear(vec![c, s], m));
            }
            2
        }
    };
    Ok(Configuration::new(dim, hs)?.canonical())
}

/// Maps a possibly negative parameter to a multiplicity: `m ↦ -1 - m` for `m < 0`.
fn normalize_mult(m: i64) -> u32 {
    if m < 0 {
        (-1 - m) as u32
    } else {
        m as u32
    }
}

/// Deformed root system `A_n(m)` in `C^{n+1}`: `e_i - e_j` (multiplicity `m`) and
/// `e_i - √m e_{n+1}` (multiplicity 1).
pub fn deformed_an(n: usize, m: i64) -> Result<Configuration, ConfigError> {
    if n == 0 {
        return Err(ConfigError::InvalidParameters("n must be positive".into()));
    }
    if m == 0 {
        return Err(ConfigError::InvalidParameters(
            "m = 0 collapses the deformed legs".into(),
        ));
    }
    let dim = n + 1;
    let mut hs = Vec::new();
    let mm = normalize_mult(m);
    if mm > 0 {
        for i in 0..n {
            for j in i + 1..n {
                hs.push(Hyperplane::linear(unit_diff(dim, i, j, -1), mm));
            }
        }
    }
    let root = TowerScalar::sqrt_int(4, m);
    for i in 0..n {
        let mut v = unit(dim, i, 1);
        v[n] = root.neg();
        hs.push(Hyperplane::linear(v, 1));
    }
    Ok(Configuration::new(dim, hs)?.canonical())
}

/// Deformed system `C_{n+1}(m, l)` in `C^{n+1}` with `k = (2m+1)/(2l+1)`.
pub fn deformed_cn(n: usize, m: i64, l: i64) -> Result<Configuration, ConfigError> {
    if n == 0 {
        return Err(ConfigError::InvalidParameters("n must be positive".into()));
    }
    let k = rat(2 * m + 1, 2 * l + 1);
    if n >= 2 && !k.is_integer() {
        return Err(ConfigError::InvalidParameters(format!(
            "k = (2m+1)/(2l+1) = {}/{} is not an integer",
            k.numer(),
            k.denom()
        )));
    }
    let dim = n + 1;
    let mut hs = Vec::new();
    let root = TowerScalar::sqrt_rational(4, &k);
    if n >= 2 {
        let kk: i64 = k
            .numer()
            .try_into()
            .map_err(|_| ConfigError::InvalidParameters("k too large".into()))?;
        let mk = normalize_mult(kk);
        if mk > 0 {
            for i in 0..n {
                for j in i + 1..n {
                    hs.push(Hyperplane::linear(unit_diff(dim, i, j, -1), mk));
                    hs.push(Hyperplane::linear(unit_diff(dim, i, j, 1), mk));
                }
            }
        }
    }
    let mm = normalize_mult(m);
    if mm > 0 {
        for i in 0..n {
            hs.push(Hyperplane::linear(unit(dim, i, 2), mm));
        }
    }
    let ml = normalize_mult(l);
    if ml > 0 {
        let mut v = vec![TowerScalar::zero(); dim];
        v[n] = root.scale_int(2);
        hs.push(Hyperplane::linear(v, ml));
    }
    for i in 0..n {
        for sign in [1, -1] {
            let mut v = unit(dim, i, 1);
            v[n] = root.scale_int(sign);
            hs.push(Hyperplane::linear(v, 1));
        }
    }
    Ok(Configuration::new(dim, hs)?.canonical())
}

/// Points `z_j` on the line with multiplicities: hyperplanes `x - z_j = 0`.
pub fn points_1d(points: &[(TowerScalar, u32)]) -> Result<Configuration, ConfigError> {
    let hs = points
        .iter()
        .map(|(z, m)| Hyperplane::affine(vec![TowerScalar::one()], z.neg(), *m))
        .collect();
    Configuration::new(1, hs)
}
