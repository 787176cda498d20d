//! Cyclotomic base fields `Q(ζ_N)` with `4 | N`.
//!
//! Elements of the base are stored in the power basis `ζ^0 .. ζ^{φ(N)-1}`.
//! Each order gets one lazily built table shared by every scalar.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_integer::Integer;

/// Reduction data for one cyclotomic order.
#[derive(Debug)]
pub(crate) struct CycloTable {
    pub order: u32,
    pub phi: u32,
    /// `ζ^e` for `e in 0..order`, as sparse integer vectors in the power basis.
    pub powers: Vec<Vec<(u32, i64)>>,
    /// Exponents `k` coprime to the order; `ζ -> ζ^k` runs over the Galois group.
    pub units: Vec<u32>,
}

impl CycloTable {
    fn build(order: u32) -> CycloTable {
        let phi_poly = cyclotomic_poly(order);
        let phi = (phi_poly.len() - 1) as u32;
        let mut powers = Vec::with_capacity(order as usize);
        let mut cur = vec![0i64; phi as usize];
        cur[0] = 1;
        for _ in 0..order {
            powers.push(
                cur.iter()
                    .enumerate()
                    .filter(|(_, c)| **c != 0)
                    .map(|(i, c)| (i as u32, *c))
                    .collect(),
            );
            // multiply by ζ and reduce with the monic Φ_N
            let top = cur[phi as usize - 1];
            for i in (1..phi as usize).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for (i, c) in phi_poly.iter().take(phi as usize).enumerate() {
                    cur[i] -= top * c;
                }
            }
        }
        let units = (1..order).filter(|k| k.gcd(&order) == 1).collect();
        CycloTable {
            order,
            phi,
            powers,
            units,
        }
    }

    /// Whether `√p` (p prime) already lies in `Q(ζ_N)`.
    pub fn absorbs_prime(&self, p: u64) -> bool {
        if p == 2 {
            self.order.is_multiple_of(8)
        } else {
            (self.order as u64).is_multiple_of(p)
        }
    }
}

/// Integer coefficients of `Φ_n`, lowest degree first.
pub(crate) fn cyclotomic_poly(n: u32) -> Vec<i64> {
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let den = cyclotomic_poly(d);
            num = exact_div(&num, &den);
        }
    }
    num
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dn = den.len() - 1;
    let qn = rem.len() - 1 - dn;
    let mut q = vec![0i64; qn + 1];
    for i in (0..=qn).rev() {
        let c = rem[i + dn];
        q[i] = c;
        if c != 0 {
            for (j, d) in den.iter().enumerate() {
                rem[i + j] -= c * d;
            }
        }
    }
    debug_assert!(rem.iter().all(|c| *c == 0));
    q
}

pub(crate) fn table(order: u32) -> Arc<CycloTable> {
    thread_local! {
        static LAST: std::cell::RefCell<Option<Arc<CycloTable>>> = const { std::cell::RefCell::new(None) };
    }
    if let Some(t) = LAST.with(|l| l.borrow().as_ref().filter(|t| t.order == order).cloned()) {
        return t;
    }
    let t = shared_table(order);
    LAST.with(|l| *l.borrow_mut() = Some(t.clone()));
    t
}

fn shared_table(order: u32) -> Arc<CycloTable> {
    static TABLES: OnceLock<Mutex<HashMap<u32, Arc<CycloTable>>>> = OnceLock::new();
    let map = TABLES.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = map.lock().expect("cyclotomic table cache poisoned");
    guard
        .entry(order)
        .or_insert_with(|| Arc::new(CycloTable::build(order)))
        .clone()
}

/// Legendre symbol `(a/p)` for odd prime `p`.
pub(crate) fn legendre(a: u64, p: u64) -> i64 {
    let a = a % p;
    if a == 0 {
        return 0;
    }
    let mut r = 1u64;
    let mut b = a;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits `n > 0` as `s^2 * f` with `f` square-free.
pub(crate) fn square_free_split(mut n: u64) -> (u64, u64) {
    let mut square = 1u64;
    let mut free = 1u64;
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        for _ in 0..e / 2 {
            square *= p;
        }
        if e % 2 == 1 {
            free *= p;
        }
        p += 1;
    }
    free *= n;
    (square, free)
}
