//! Arbitrary-precision complex floats on top of `astro-float`.

use std::cell::RefCell;
use std::fmt;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::{BigInt, Sign};

use crate::scalar::Rational;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

pub(crate) fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Real big float with an attached working precision (bits).
pub fn big_from_int(n: &BigInt, prec: usize) -> BigFloat {
    let (sign, digits) = n.to_u64_digits();
    let base = BigFloat::from_u64(u64::MAX, prec).add(&BigFloat::from_u64(1, prec), prec, RM);
    let mut acc = BigFloat::from_u64(0, prec);
    for d in digits.iter().rev() {
        acc = acc
            .mul(&base, prec, RM)
            .add(&BigFloat::from_u64(*d, prec), prec, RM);
    }
    if sign == Sign::Minus {
        acc = acc.neg();
    }
    acc
}

pub fn big_from_rational(q: &Rational, prec: usize) -> BigFloat {
    let n = big_from_int(q.numer(), prec + 8);
    let d = big_from_int(q.denom(), prec + 8);
    n.div(&d, prec, RM)
}

pub fn big_to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let s = with_consts(|cc| x.format(Radix::Dec, RM, cc)).unwrap_or_default();
    s.parse::<f64>().unwrap_or(f64::NAN)
}

pub fn pi(prec: usize) -> BigFloat {
    with_consts(|cc| cc.pi(prec, RM))
}

/// Complex number with `re`/`im` parts at precision `prec`.
#[derive(Clone, Debug)]
pub struct HpComplex {
    pub re: BigFloat,
    pub im: BigFloat,
    pub prec: usize,
}

impl HpComplex {
    pub fn zero(prec: usize) -> Self {
        HpComplex {
            re: BigFloat::from_u64(0, prec),
            im: BigFloat::from_u64(0, prec),
            prec,
        }
    }

    pub fn from_parts(re: BigFloat, im: BigFloat, prec: usize) -> Self {
        HpComplex { re, im, prec }
    }

    pub fn from_f64(re: f64, im: f64, prec: usize) -> Self {
        HpComplex {
            re: BigFloat::from_f64(re, prec),
            im: BigFloat::from_f64(im, prec),
            prec,
        }
    }

    pub fn from_i64(re: i64, prec: usize) -> Self {
        HpComplex {
            re: BigFloat::from_i64(re, prec),
            im: BigFloat::from_u64(0, prec),
            prec,
        }
    }

    pub fn from_rational(q: &Rational, prec: usize) -> Self {
        HpComplex {
            re: big_from_rational(q, prec),
            im: BigFloat::from_u64(0, prec),
            prec,
        }
    }

    pub fn i(prec: usize) -> Self {
        HpComplex {
            re: BigFloat::from_u64(0, prec),
            im: BigFloat::from_u64(1, prec),
            prec,
        }
    }

    /// `e^{iθ}` for real `θ`.
    pub fn cis(theta: &BigFloat, prec: usize) -> Self {
        let (c, s) = with_consts(|cc| (theta.cos(prec, RM, cc), theta.sin(prec, RM, cc)));
        HpComplex { re: c, im: s, prec }
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.prec;
        HpComplex {
            re: self.re.add(&o.re, p, RM),
            im: self.im.add(&o.im, p, RM),
            prec: p,
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.prec;
        HpComplex {
            re: self.re.sub(&o.re, p, RM),
            im: self.im.sub(&o.im, p, RM),
            prec: p,
        }
    }

    pub fn neg(&self) -> Self {
        HpComplex {
            re: self.re.neg(),
            im: self.im.neg(),
            prec: self.prec,
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.prec;
        let rr = self.re.mul(&o.re, p, RM);
        let ii = self.im.mul(&o.im, p, RM);
        let ri = self.re.mul(&o.im, p, RM);
        let ir = self.im.mul(&o.re, p, RM);
        HpComplex {
            re: rr.sub(&ii, p, RM),
            im: ri.add(&ir, p, RM),
            prec: p,
        }
    }

    pub fn scale(&self, s: &BigFloat) -> Self {
        let p = self.prec;
        HpComplex {
            re: self.re.mul(s, p, RM),
            im: self.im.mul(s, p, RM),
            prec: p,
        }
    }

    pub fn norm_sqr(&self) -> BigFloat {
        let p = self.prec;
        self.re
            .mul(&self.re, p, RM)
            .add(&self.im.mul(&self.im, p, RM), p, RM)
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt(self.prec, RM)
    }

    pub fn conj(&self) -> Self {
        HpComplex {
            re: self.re.clone(),
            im: self.im.neg(),
            prec: self.prec,
        }
    }

    pub fn recip(&self) -> Self {
        let p = self.prec;
        let n = self.norm_sqr();
        HpComplex {
            re: self.re.div(&n, p, RM),
            im: self.im.neg().div(&n, p, RM),
            prec: p,
        }
    }

    pub fn div(&self, o: &Self) -> Self {
        self.mul(&o.recip())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let p = self.prec;
        if self.is_zero() {
            return self.clone();
        }
        let r = self.abs();
        let two = BigFloat::from_u64(2, p);
        // sqrt((r + re)/2) and sign(im) sqrt((r - re)/2)
        let a = r.add(&self.re, p, RM).div(&two, p, RM).abs().sqrt(p, RM);
        let b = r.sub(&self.re, p, RM).div(&two, p, RM).abs().sqrt(p, RM);
        let b = if self.im.is_negative() { b.neg() } else { b };
        HpComplex {
            re: a,
            im: b,
            prec: p,
        }
    }

    /// Principal argument in `(-π, π]`.
    pub fn arg(&self) -> BigFloat {
        atan2(&self.im, &self.re, self.prec)
    }

    pub fn ln_abs(&self) -> BigFloat {
        let p = self.prec;
        with_consts(|cc| self.abs().ln(p, RM, cc))
    }

    pub fn to_c64(&self) -> (f64, f64) {
        (big_to_f64(&self.re), big_to_f64(&self.im))
    }

    pub fn with_prec(&self, prec: usize) -> Self {
        let mut re = self.re.clone();
        let mut im = self.im.clone();
        let _ = re.set_precision(prec, RM);
        let _ = im.set_precision(prec, RM);
        HpComplex { re, im, prec }
    }
}

impl fmt::Display for HpComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_c64();
        write!(f, "{re:e}{:+e}i", im)
    }
}

pub fn atan2(y: &BigFloat, x: &BigFloat, prec: usize) -> BigFloat {
    let p = prec;
    let pi = pi(p);
    if x.is_zero() {
        let half = pi.div(&BigFloat::from_u64(2, p), p, RM);
        return if y.is_negative() {
            half.neg()
        } else if y.is_zero() {
            BigFloat::from_u64(0, p)
        } else {
            half
        };
    }
    let base = with_consts(|cc| y.div(x, p, RM).atan(p, RM, cc));
    if x.is_positive() {
        base
    } else if y.is_negative() {
        base.sub(&pi, p, RM)
    } else {
        base.add(&pi, p, RM)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_of_minus_one() {
        let z = HpComplex::from_i64(-1, 128).sqrt();
        let (re, im) = z.to_c64();
        assert!(re.abs() < 1e-30);
        assert!((im - 1.0).abs() < 1e-15);
    }

    #[test]
    fn arg_quadrants() {
        let p = 128;
        let z = HpComplex::from_f64(-1.0, 1.0, p);
        let a = big_to_f64(&z.arg());
        assert!((a - 3.0 * std::f64::consts::FRAC_PI_4).abs() < 1e-14);
        let z = HpComplex::from_f64(-1.0, -1.0, p);
        assert!((big_to_f64(&z.arg()) + 3.0 * std::f64::consts::FRAC_PI_4).abs() < 1e-14);
    }

    #[test]
    fn big_int_conversion() {
        let n: BigInt = BigInt::from(3u64) << 100;
        let f = big_from_int(&n, 256);
        let back = big_to_f64(&f);
        assert!((back / 2f64.powi(100) - 3.0).abs() < 1e-12);
    }
}
