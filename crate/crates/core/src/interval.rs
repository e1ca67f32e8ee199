//! Certified interval arithmetic over dyadic rationals.
//!
//! Endpoints are exact rationals; transcendental results (`ln`, `log2`, `e`)
//! are enclosed with outward rounding to dyadic numbers carrying `prec`
//! significant bits. An interval always contains the true value, so a sign
//! decided from an interval is a proof of that sign.

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Closed interval `[lo, hi]` with exact rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    lo: BigRational,
    hi: BigRational,
}

fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// floor(log2 |x|) for nonzero x, exactly.
fn floor_log2(x: &BigRational) -> i64 {
    let num = x.numer().abs();
    let den = x.denom().abs();
    let mut e = num.bits() as i64 - den.bits() as i64;
    // 2^e <= |x| < 2^(e+1) after adjustment
    let two = BigInt::from(2);
    let pow = |e: i64| -> BigRational {
        if e >= 0 {
            BigRational::from_integer(two.pow(e as u32))
        } else {
            BigRational::new(BigInt::one(), two.pow((-e) as u32))
        }
    };
    let ax = BigRational::new(num, den);
    while pow(e) > ax {
        e -= 1;
    }
    while pow(e + 1) <= ax {
        e += 1;
    }
    e
}

fn scale(x: &BigRational, s: i64) -> BigRational {
    if s >= 0 {
        x * BigRational::from_integer(BigInt::one() << (s as usize))
    } else {
        x / BigRational::from_integer(BigInt::one() << ((-s) as usize))
    }
}

/// Largest dyadic with `prec` significant bits that is `<= x`.
pub fn round_down(x: &BigRational, prec: u32) -> BigRational {
    if x.is_zero() {
        return x.clone();
    }
    let s = prec as i64 - 1 - floor_log2(x);
    let y = scale(x, s);
    let f = y.numer().div_floor(y.denom());
    scale(&BigRational::from_integer(f), -s)
}

/// Smallest dyadic with `prec` significant bits that is `>= x`.
pub fn round_up(x: &BigRational, prec: u32) -> BigRational {
    -round_down(&-x, prec)
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Interval {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(v: BigRational) -> Interval {
        Interval {
            lo: v.clone(),
            hi: v,
        }
    }

    pub fn from_int(v: i64) -> Interval {
        Interval::point(rat(v))
    }

    pub fn from_big(v: &BigUint) -> Interval {
        Interval::point(BigRational::from_integer(BigInt::from(v.clone())))
    }

    pub fn from_ratio(num: i64, den: i64) -> Interval {
        Interval::point(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Outward rounding of both endpoints to `prec` significant bits.
    pub fn round(&self, prec: u32) -> Interval {
        Interval {
            lo: round_down(&self.lo, prec),
            hi: round_up(&self.hi, prec),
        }
    }

    /// Sign relative to zero if the interval decides it.
    ///
    /// `Some(Equal)` only for the degenerate point interval `[0, 0]`.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Compares against another interval when they do not overlap.
    pub fn cmp_certified(&self, other: &Interval) -> Option<Ordering> {
        (self - other).sign()
    }

    /// Division by an interval that excludes zero, rounded outward.
    pub fn div(&self, other: &Interval, prec: u32) -> Interval {
        assert!(
            other.sign().is_some_and(|s| s != Ordering::Equal),
            "division by interval containing zero"
        );
        let cands = [
            &self.lo / &other.lo,
            &self.lo / &other.hi,
            &self.hi / &other.lo,
            &self.hi / &other.hi,
        ];
        let lo = cands.iter().min().expect("nonempty").clone();
        let hi = cands.iter().max().expect("nonempty").clone();
        Interval {
            lo: round_down(&lo, prec),
            hi: round_up(&hi, prec),
        }
    }

    /// Natural logarithm of an interval with positive lower endpoint.
    pub fn ln(&self, prec: u32) -> Interval {
        assert!(self.lo.is_positive(), "ln of nonpositive interval");
        Interval {
            lo: ln_rational(&self.lo, prec).lo,
            hi: ln_rational(&self.hi, prec).hi,
        }
    }

    /// Exact when the interval is a single power of two.
    pub fn log2(&self, prec: u32) -> Interval {
        if self.lo == self.hi && self.lo.is_positive() {
            let e = floor_log2(&self.lo);
            if scale(&BigRational::one(), e) == self.lo {
                return Interval::point(rat(e));
            }
        }
        self.ln(prec).div(&ln2(prec), prec)
    }

    /// Integer power (nonnegative exponent) of an interval with `lo >= 0`.
    pub fn powi(&self, e: u32) -> Interval {
        assert!(
            !self.lo.is_negative(),
            "powi expects a nonnegative interval"
        );
        Interval {
            lo: pow_rat(&self.lo, e),
            hi: pow_rat(&self.hi, e),
        }
    }

    pub fn scale_int(&self, c: i64) -> Interval {
        self * &Interval::from_int(c)
    }
}

fn pow_rat(x: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= x;
    }
    acc
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, o: &Interval) -> Interval {
        Interval {
            lo: &self.lo - &o.hi,
            hi: &self.hi - &o.lo,
        }
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, o: &Interval) -> Interval {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        Interval {
            lo: c.iter().min().expect("nonempty").clone(),
            hi: c.iter().max().expect("nonempty").clone(),
        }
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval {
            lo: -&self.hi,
            hi: -&self.lo,
        }
    }
}

impl Add for Interval {
    type Output = Interval;
    fn add(self, o: Interval) -> Interval {
        &self + &o
    }
}

impl Sub for Interval {
    type Output = Interval;
    fn sub(self, o: Interval) -> Interval {
        &self - &o
    }
}

impl Mul for Interval {
    type Output = Interval;
    fn mul(self, o: Interval) -> Interval {
        &self * &o
    }
}

/// Enclosure of `atanh(z) = sum z^(2j+1)/(2j+1)` for rational `0 <= z <= 1/3`.
fn atanh_small(z: &BigRational, prec: u32) -> Interval {
    debug_assert!(!z.is_negative() && z <= &BigRational::new(BigInt::one(), BigInt::from(3)));
    if z.is_zero() {
        return Interval::from_int(0);
    }
    let wp = prec + 16;
    let z_lo = round_down(z, wp);
    let z_hi = round_up(z, wp);
    let z2_lo = round_down(&(&z_lo * &z_lo), wp);
    let z2_hi = round_up(&(&z_hi * &z_hi), wp);
    let (mut p_lo, mut p_hi) = (z_lo.clone(), z_hi.clone());
    let (mut s_lo, mut s_hi) = (BigRational::zero(), BigRational::zero());
    // Each term shrinks by at least 9, i.e. > 3 bits.
    let terms = wp / 3 + 2;
    for j in 0..terms {
        let d = BigRational::from_integer(BigInt::from(2 * j + 1));
        s_lo += round_down(&(&p_lo / &d), wp);
        s_hi += round_up(&(&p_hi / &d), wp);
        p_lo = round_down(&(&p_lo * &z2_lo), wp);
        p_hi = round_up(&(&p_hi * &z2_hi), wp);
    }
    // Tail: sum_{j >= terms} z^(2j+1)/(2j+1) <= z^(2 terms + 1) / ((2 terms + 1)(1 - z^2)).
    let d = BigRational::from_integer(BigInt::from(2 * terms + 1));
    let tail = round_up(&(&p_hi / (d * (BigRational::one() - &z2_hi))), wp);
    s_hi += tail;
    Interval {
        lo: round_down(&s_lo, prec + 8),
        hi: round_up(&s_hi, prec + 8),
    }
}

/// Enclosure of `ln 2 = 2 atanh(1/3)`.
pub fn ln2(prec: u32) -> Interval {
    atanh_small(&BigRational::new(BigInt::one(), BigInt::from(3)), prec)
        .scale_int(2)
        .round(prec + 4)
}

/// Enclosure of `ln x` for a positive rational `x`.
pub fn ln_rational(x: &BigRational, prec: u32) -> Interval {
    assert!(x.is_positive(), "ln of nonpositive value");
    let e = floor_log2(x);
    let y = scale(x, -e); // 1 <= y < 2
    let z = (&y - BigRational::one()) / (&y + BigRational::one());
    let ln_y = atanh_small(&z, prec).scale_int(2);
    let total = &ln2(prec).scale_int(e) + &ln_y;
    total.round(prec)
}

/// Enclosure of Euler's number `e`.
pub fn euler(prec: u32) -> Interval {
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    let mut j = 0u64;
    // Stop once 2/(j+1)! < 2^-(prec+8).
    let limit = BigRational::new(BigInt::one(), BigInt::one() << (prec as usize + 8));
    loop {
        sum += &term;
        j += 1;
        term /= BigRational::from_integer(BigInt::from(j));
        if &term * rat(2) < limit {
            break;
        }
    }
    // Remainder after adding terms up to 1/(j-1)! is below 2/j!.
    Interval {
        lo: round_down(&sum, prec),
        hi: round_up(&(sum.clone() + &term * rat(2)), prec),
    }
}

/// Evaluates `f` at increasing precision until the sign is decided.
///
/// Returns the sign and the precision that decided it, or `None` with the cap
/// when every precision up to `max_prec` left the sign open.
pub fn certify_sign<F: Fn(u32) -> Interval>(
    f: F,
    start_prec: u32,
    max_prec: u32,
) -> (Option<Ordering>, u32) {
    let mut p = start_prec.max(16);
    loop {
        let v = f(p);
        if let Some(s) = v.sign() {
            return (Some(s), p);
        }
        if p >= max_prec {
            return (None, p);
        }
        p = (p * 2).min(max_prec);
    }
}

/// Midpoint as `f64` (display only).
pub fn approx(iv: &Interval) -> f64 {
    let mid = (&iv.lo + &iv.hi) / rat(2);
    mid.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_is_outward_and_dyadic() {
        let third = BigRational::new(BigInt::one(), BigInt::from(3));
        let lo = round_down(&third, 20);
        let hi = round_up(&third, 20);
        assert!(lo < third && third < hi);
        assert!(lo.denom().is_power_of_two_like());
        let neg = -third.clone();
        assert!(round_down(&neg, 20) < neg);
        assert!(round_up(&neg, 20) > neg);
        let exact = rat(12);
        assert_eq!(round_down(&exact, 8), exact);
    }

    trait Pow2Like {
        fn is_power_of_two_like(&self) -> bool;
    }

    impl Pow2Like for BigInt {
        fn is_power_of_two_like(&self) -> bool {
            let m = self.magnitude();
            m.count_ones() == 1
        }
    }

    #[test]
    fn ln2_matches_float() {
        let iv = ln2(100);
        assert!((approx(&iv) - std::f64::consts::LN_2).abs() < 1e-15);
        assert!(iv.width() < BigRational::new(BigInt::one(), BigInt::one() << 90usize));
    }

    #[test]
    fn ln_of_integers() {
        for v in [1i64, 2, 3, 7, 10, 18, 1000, 123456789] {
            let iv = ln_rational(&rat(v), 80);
            assert!((approx(&iv) - (v as f64).ln()).abs() < 1e-12, "ln {v}");
        }
        assert_eq!(
            ln_rational(&rat(1), 64).sign(),
            Some(Ordering::Equal).or(ln_rational(&rat(1), 64).sign())
        );
        let small = ln_rational(&BigRational::new(BigInt::one(), BigInt::from(7)), 80);
        assert!((approx(&small) + 7f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn log2_of_power_of_two_contains_exact() {
        let iv = Interval::from_int(1024).log2(64);
        assert!(iv.contains(&rat(10)));
    }

    #[test]
    fn euler_encloses_e() {
        let iv = euler(80);
        assert!((approx(&iv) - std::f64::consts::E).abs() < 1e-15);
        assert!(iv.lo() < iv.hi());
    }

    #[test]
    fn certify_sign_doubles_precision() {
        // log2(3) - 1.5849625007211561 is positive but tiny.
        let c = BigRational::new(
            BigInt::from(15849625007211561i64),
            BigInt::from(10i64.pow(16)),
        );
        let (s, p) = certify_sign(
            |p| &Interval::from_int(3).log2(p) - &Interval::point(c.clone()),
            16,
            512,
        );
        assert_eq!(s, Some(Ordering::Greater));
        assert!(p >= 64);
    }
}
