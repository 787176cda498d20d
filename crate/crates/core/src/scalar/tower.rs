use std::fmt;

use num_integer::Integer;
use thiserror::Error;

use super::cyclo::{prime_factors, square_free_split, table};
use super::{TowerScalar, GAUSSIAN};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TowerError {
    #[error("radicand {0} is a perfect square or a unit")]
    Trivial(i64),
    #[error("radicand {0} is a product of earlier radicands modulo squares")]
    Dependent(i64),
    #[error("cyclotomic order {0} must be a positive multiple of 4")]
    BadOrder(u32),
    #[error("radicand {0} is too large")]
    Overflow(i64),
}

/// Generators of a coefficient field: the cyclotomic base `Q(ζ_order)` plus
/// square roots of positive square-free integers (negative radicands fold into `i`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldTower {
    order: u32,
    radicands: Vec<u64>,
}

impl Default for FieldTower {
    fn default() -> Self {
        Self::gaussian()
    }
}

impl FieldTower {
    /// `Q(i)`.
    pub fn gaussian() -> Self {
        FieldTower {
            order: GAUSSIAN,
            radicands: Vec::new(),
        }
    }

    pub fn with_order(order: u32) -> Result<Self, TowerError> {
        if order == 0 || !order.is_multiple_of(4) {
            return Err(TowerError::BadOrder(order));
        }
        Ok(FieldTower {
            order,
            radicands: Vec::new(),
        })
    }

    /// Builds a tower from signed radicands, rejecting trivial or dependent ones.
    pub fn new(order: u32, radicands: &[i64]) -> Result<Self, TowerError> {
        let mut tower = Self::with_order(order)?;
        for &d in radicands {
            let free = tower.free_part(d)?;
            if free == 1 {
                return Err(TowerError::Trivial(d));
            }
            if tower.spans(free) {
                return Err(TowerError::Dependent(d));
            }
            tower.radicands.push(free);
        }
        tower.radicands.sort_unstable();
        Ok(tower)
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn radicands(&self) -> &[u64] {
        &self.radicands
    }

    /// Square-free part of `|d|` with base-absorbed primes removed.
    fn free_part(&self, d: i64) -> Result<u64, TowerError> {
        if d == 0 {
            return Err(TowerError::Trivial(0));
        }
        if d.unsigned_abs() > 1 << 40 {
            return Err(TowerError::Overflow(d));
        }
        let (_, free) = square_free_split(d.unsigned_abs());
        let t = table(self.order);
        Ok(prime_factors(free)
            .into_iter()
            .filter(|p| !t.absorbs_prime(*p))
            .product())
    }

    /// Whether `√n` (n positive square-free over free primes) lies in the tower.
    fn spans(&self, n: u64) -> bool {
        // towers are small: try every subset product modulo squares
        let r = self.radicands.len();
        (0u32..1 << r).any(|mask| {
            let mut v = 1u64;
            for (j, &d) in self.radicands.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    let g = v.gcd(&d);
                    v = (v / g) * (d / g);
                }
            }
            v == n
        })
    }

    /// Whether a radical key produced by scalar arithmetic is representable.
    pub fn contains_radical(&self, n: u64) -> bool {
        self.free_part(n as i64)
            .map(|f| self.spans(f))
            .unwrap_or(false)
    }

    /// Whether every basis element of `s` lives in this tower.
    pub fn contains(&self, s: &TowerScalar) -> bool {
        self.order.is_multiple_of(s.order) && s.terms.iter().all(|t| self.contains_radical(t.rad))
    }

    /// Adjoins `√d`, returning the (possibly extended) tower and the scalar `√d`.
    pub fn adjoin_sqrt(&self, d: i64) -> Result<(FieldTower, TowerScalar), TowerError> {
        let free = self.free_part(d)?;
        let mut tower = self.clone();
        if free != 1 && !self.spans(free) {
            tower.radicands.push(free);
            tower.radicands.sort_unstable();
        }
        Ok((tower.clone(), TowerScalar::sqrt_int(tower.order, d)))
    }

    /// Extends the cyclotomic base to `lcm(order, m)`, dropping radicands it absorbs.
    pub fn with_cyclotomic(&self, m: u32) -> Result<FieldTower, TowerError> {
        let order = self.order.lcm(&m);
        let mut out = FieldTower::with_order(order)?;
        for &r in &self.radicands {
            let free = out.free_part(r as i64)?;
            if free != 1 && !out.spans(free) {
                out.radicands.push(free);
            }
        }
        out.radicands.sort_unstable();
        Ok(out)
    }

    /// Smallest tower containing both.
    pub fn merge(&self, o: &FieldTower) -> FieldTower {
        let mut out = self
            .with_cyclotomic(o.order)
            .expect("orders of valid towers are multiples of 4");
        for &r in &o.radicands {
            out = out
                .adjoin_sqrt(r as i64)
                .expect("radicands of valid towers are nonzero")
                .0;
        }
        out
    }

    /// Smallest tower containing every radical of the given scalars.
    pub fn covering<'a>(scalars: impl IntoIterator<Item = &'a TowerScalar>) -> FieldTower {
        let mut out = FieldTower::gaussian();
        for s in scalars {
            if !out.order.is_multiple_of(s.order) {
                out = out
                    .with_cyclotomic(s.order)
                    .expect("scalar orders are valid");
            }
            for t in &s.terms {
                if t.rad > 1 && !out.contains_radical(t.rad) {
                    for p in prime_factors(t.rad) {
                        out = out.adjoin_sqrt(p as i64).expect("prime radicand").0;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.order == GAUSSIAN {
            write!(f, "Q(i)")?;
        } else {
            write!(f, "Q(z{})", self.order)?;
        }
        for r in &self.radicands {
            write!(f, "[r{r}]")?;
        }
        Ok(())
    }
}
