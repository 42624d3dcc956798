//! Arbitrary-precision complex numbers on top of `astro-float`.

use astro_float::{BigFloat, Consts, RoundingMode, Sign, WORD_BIT_SIZE};
use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

pub(crate) fn consts() -> Result<Consts> {
    Consts::new().map_err(|e| Error::PrecisionUnachievable(format!("constant cache: {e:?}")))
}

pub(crate) fn int(n: i64, p: usize) -> BigFloat {
    BigFloat::from_i64(n, p)
}

pub(crate) fn from_bigint(n: &BigInt, p: usize) -> BigFloat {
    let (sign, digits) = n.to_u64_digits();
    let mut acc = BigFloat::from_u64(0, p);
    let base = BigFloat::from_u64(1, p).mul(&BigFloat::from_u64(1 << 32, p), p, RM);
    let base = base.mul(&base, p, RM);
    for d in digits.iter().rev() {
        acc = acc.mul(&base, p, RM).add(&BigFloat::from_u64(*d, p), p, RM);
    }
    if sign == num_bigint::Sign::Minus {
        acc.inv_sign();
    }
    acc
}

/// Exact value of an integral `BigFloat`.
fn integral_to_bigint(x: &BigFloat) -> Option<BigInt> {
    if x.is_zero() {
        return Some(BigInt::zero());
    }
    let (words, _, sign, exp, _) = x.as_raw_parts()?;
    let mut m = BigUint::zero();
    for w in words.iter().rev() {
        m = (m << WORD_BIT_SIZE) + BigUint::from(*w);
    }
    let shift = exp as i64 - (words.len() * WORD_BIT_SIZE) as i64;
    let m = if shift >= 0 { m << shift as usize } else { m >> (-shift) as usize };
    let v = BigInt::from(m);
    Some(if sign == Sign::Neg { -v } else { v })
}

/// Nearest integer and the distance to it.
pub(crate) fn round_to_int(x: &BigFloat, p: usize) -> Option<(BigInt, BigFloat)> {
    let half = BigFloat::from_f64(0.5, p);
    let r = x.add(&half, p, RM).floor();
    let n = integral_to_bigint(&r)?;
    Some((n, x.sub(&r, p, RM).abs()))
}

/// Approximate value for bounds and diagnostics.
pub(crate) fn to_f64(x: &BigFloat) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let Some((words, _, sign, exp, _)) = x.as_raw_parts() else { return f64::NAN };
    let top = *words.last().expect("nonzero mantissa") as f64 / 2f64.powi(WORD_BIT_SIZE as i32);
    let v = top * 2f64.powi(exp.clamp(-1070, 1070));
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// Decimal string of `x` with `digits` digits after the point.
pub(crate) fn to_decimal(x: &BigFloat, digits: usize, p: usize) -> String {
    let scale = BigFloat::from_u64(10, p).powi(digits, p, RM);
    let Some((n, _)) = round_to_int(&x.mul(&scale, p, RM), p) else { return "nan".into() };
    if digits == 0 {
        return n.to_string();
    }
    let neg = n.is_negative();
    let s = n.abs().to_string();
    let s = format!("{s:0>width$}", width = digits + 1);
    let (int, frac) = s.split_at(s.len() - digits);
    format!("{}{int}.{frac}", if neg { "-" } else { "" })
}

/// A complex number with a working precision in bits.
#[derive(Clone, Debug)]
pub struct BigComplex {
    pub re: BigFloat,
    pub im: BigFloat,
    prec: usize,
}

impl BigComplex {
    pub fn new(re: BigFloat, im: BigFloat, prec: usize) -> Self {
        BigComplex { re, im, prec }
    }

    pub fn from_i64(re: i64, im: i64, prec: usize) -> Self {
        BigComplex { re: int(re, prec), im: int(im, prec), prec }
    }

    pub fn zero(prec: usize) -> Self {
        Self::from_i64(0, 0, prec)
    }

    pub fn one(prec: usize) -> Self {
        Self::from_i64(1, 0, prec)
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    pub fn with_precision(&self, prec: usize) -> Self {
        BigComplex { re: self.re.clone(), im: self.im.clone(), prec }
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.prec;
        BigComplex { re: self.re.add(&o.re, p, RM), im: self.im.add(&o.im, p, RM), prec: p }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.prec;
        BigComplex { re: self.re.sub(&o.re, p, RM), im: self.im.sub(&o.im, p, RM), prec: p }
    }

    pub fn neg(&self) -> Self {
        BigComplex { re: self.re.neg(), im: self.im.neg(), prec: self.prec }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.prec;
        let re = self.re.mul(&o.re, p, RM).sub(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self.re.mul(&o.im, p, RM).add(&self.im.mul(&o.re, p, RM), p, RM);
        BigComplex { re, im, prec: p }
    }

    pub fn scale(&self, s: &BigFloat) -> Self {
        let p = self.prec;
        BigComplex { re: self.re.mul(s, p, RM), im: self.im.mul(s, p, RM), prec: p }
    }

    pub fn norm_sqr(&self) -> BigFloat {
        let p = self.prec;
        self.re.mul(&self.re, p, RM).add(&self.im.mul(&self.im, p, RM), p, RM)
    }

    pub fn abs(&self) -> BigFloat {
        self.norm_sqr().sqrt(self.prec, RM)
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        let p = self.prec;
        let n = o.norm_sqr();
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let num = self.mul(&BigComplex { re: o.re.clone(), im: o.im.neg(), prec: p });
        Ok(BigComplex { re: num.re.div(&n, p, RM), im: num.im.div(&n, p, RM), prec: p })
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.prec);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// `exp(2 pi i z)`.
    pub fn exp_2pi_i(&self, cc: &mut Consts) -> Self {
        let p = self.prec;
        let two_pi = cc.pi(p, RM).mul(&int(2, p), p, RM);
        let r = self.im.mul(&two_pi, p, RM).neg().exp(p, RM, cc);
        let t = self.re.mul(&two_pi, p, RM);
        BigComplex { re: r.mul(&t.cos(p, RM, cc), p, RM), im: r.mul(&t.sin(p, RM, cc), p, RM), prec: p }
    }

    pub fn re_f64(&self) -> f64 {
        to_f64(&self.re)
    }

    pub fn im_f64(&self) -> f64 {
        to_f64(&self.im)
    }

    /// `"re"` or `"re+imi"` with the given number of decimals.
    pub fn to_decimal(&self, digits: usize) -> String {
        let re = to_decimal(&self.re, digits, self.prec);
        let im = to_decimal(&self.im, digits, self.prec);
        let zero = to_decimal(&int(0, self.prec), digits, self.prec);
        if im == zero || im.trim_start_matches('-') == zero {
            re
        } else if im.starts_with('-') {
            format!("{re}{im}i")
        } else {
            format!("{re}+{im}i")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_round_trip() {
        for s in ["0", "1", "-7", "287496", "-121287375", "123456789012345678901234567890123"] {
            let n: BigInt = s.parse().unwrap();
            let x = from_bigint(&n, 256);
            let (m, r) = round_to_int(&x, 256).unwrap();
            assert_eq!(m, n);
            assert!(r.is_zero());
        }
        let x = BigFloat::from_f64(-2.75, 128);
        assert_eq!(round_to_int(&x, 128).unwrap().0, BigInt::from(-3));
        assert_eq!(to_decimal(&x, 3, 128), "-2.750");
        assert_eq!(to_f64(&x), -2.75);
    }

    #[test]
    fn arithmetic() {
        let p = 192;
        let a = BigComplex::from_i64(3, 4, p);
        let b = BigComplex::from_i64(1, -2, p);
        let q = a.div(&b).unwrap();
        assert_eq!(q.mul(&b).to_decimal(20), "3.00000000000000000000+4.00000000000000000000i");
        assert_eq!(a.pow(3).to_decimal(0), "-117+44i");
        assert_eq!(to_decimal(&a.abs(), 5, p), "5.00000");
        let mut cc = consts().unwrap();
        // exp(2 pi i * 1/4) = i
        let z = BigComplex::new(BigFloat::from_f64(0.25, p), int(0, p), p).exp_2pi_i(&mut cc);
        assert_eq!(z.to_decimal(30), format!("0.{}+1.{}i", "0".repeat(30), "0".repeat(30)));
    }
}
