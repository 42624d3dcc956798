use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default bound on `|D|`.
pub const DEFAULT_MAX_ABS_DISC: i64 = 1_000_000;

/// A reduced positive definite binary quadratic form `a x^2 + b xy + c y^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ReducedForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl ReducedForm {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn gcd(&self) -> i64 {
        self.a.gcd(&self.b).gcd(&self.c)
    }

    pub fn is_primitive(&self) -> bool {
        self.gcd() == 1
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        a > 0 && b.abs() <= a && a <= c && ((b.abs() != a && a != c) || b >= 0)
    }
}

impl fmt::Display for ReducedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Checks `D < 0`, `D = 0, 1 mod 4` and `|D| <= max_abs`.
pub fn check_discriminant(d: i64, max_abs: i64) -> Result<()> {
    if d >= 0 {
        return Err(Error::BadDiscriminant(d, "must be negative".into()));
    }
    if !matches!(d.rem_euclid(4), 0 | 1) {
        return Err(Error::BadDiscriminant(d, "must be 0 or 1 mod 4".into()));
    }
    if d.checked_abs().is_none_or(|a| a > max_abs) {
        return Err(Error::BadDiscriminant(d, format!("|D| exceeds {max_abs}")));
    }
    Ok(())
}

/// All reduced forms of discriminant `d`, primitive or not, sorted.
pub fn all_reduced_forms(d: i64) -> Result<Vec<ReducedForm>> {
    check_discriminant(d, i64::MAX)?;
    let n = -d;
    let mut out = Vec::new();
    // a <= sqrt(|D| / 3)
    let mut a = 1;
    while 3 * a * a <= n {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            let f = ReducedForm { a, b, c };
            if f.is_reduced() {
                out.push(f);
            }
        }
        a += 1;
    }
    out.sort();
    Ok(out)
}

/// Primitive reduced forms of discriminant `d`; their number is `h(d)`.
pub fn reduced_forms(d: i64) -> Result<Vec<ReducedForm>> {
    reduced_forms_bounded(d, DEFAULT_MAX_ABS_DISC)
}

pub fn reduced_forms_bounded(d: i64, max_abs: i64) -> Result<Vec<ReducedForm>> {
    check_discriminant(d, max_abs)?;
    Ok(all_reduced_forms(d)?.into_iter().filter(ReducedForm::is_primitive).collect())
}

pub fn class_number(d: i64) -> Result<usize> {
    Ok(reduced_forms(d)?.len())
}

/// The reduced form properly equivalent to the positive definite form `(a, b, c)`.
pub fn reduce_form(a: &BigInt, b: &BigInt, c: &BigInt) -> Result<ReducedForm> {
    let disc = b * b - BigInt::from(4) * a * c;
    if !disc.is_negative() || !a.is_positive() {
        return Err(Error::Invariant("form is not positive definite".into()));
    }
    let (mut a, mut b, mut c) = (a.clone(), b.clone(), c.clone());
    loop {
        // b into (-a, a]
        let two_a: BigInt = &a * 2;
        let mut r = b.mod_floor(&two_a);
        if r > a {
            r -= &two_a;
        }
        if r != b {
            c = (&r * &r - &disc) / (&a * 4);
            b = r;
        }
        if a > c {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        if (a == c || -&b == a) && b.is_negative() {
            b = -b;
        }
        break;
    }
    let conv = |x: &BigInt| x.to_i64().ok_or_else(|| Error::Invariant("reduced form out of range".into()));
    let f = ReducedForm { a: conv(&a)?, b: conv(&b)?, c: conv(&c)? };
    debug_assert!(f.is_reduced() && !disc.is_zero());
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_class_numbers() {
        assert_eq!(reduced_forms(-4).unwrap(), vec![ReducedForm { a: 1, b: 0, c: 1 }]);
        assert_eq!(
            reduced_forms(-15).unwrap(),
            vec![ReducedForm { a: 1, b: 1, c: 4 }, ReducedForm { a: 2, b: 1, c: 2 }]
        );
        assert_eq!(class_number(-23).unwrap(), 3);
        assert_eq!(class_number(-16).unwrap(), 1);
        // (2, 0, 2) is reduced but not primitive
        assert_eq!(all_reduced_forms(-16).unwrap().len(), 2);
    }

    #[test]
    fn bad_discriminants() {
        assert!(matches!(reduced_forms(-5), Err(Error::BadDiscriminant(..))));
        assert!(matches!(reduced_forms(12), Err(Error::BadDiscriminant(..))));
        assert!(matches!(reduced_forms(-4_000_004), Err(Error::BadDiscriminant(..))));
        assert!(reduced_forms_bounded(-4_000_004, 10_000_000).is_ok());
    }

    #[test]
    fn reduction() {
        let r = |a: i64, b: i64, c: i64| reduce_form(&a.into(), &b.into(), &c.into()).unwrap();
        assert_eq!(r(4, 0, 1), ReducedForm { a: 1, b: 0, c: 4 });
        assert_eq!(r(1, 2, 2), ReducedForm { a: 1, b: 0, c: 1 });
        assert_eq!(r(2, -1, 2), ReducedForm { a: 2, b: 1, c: 2 });
        assert_eq!(r(7, 9, 3), ReducedForm { a: 1, b: 1, c: 1 });
    }
}
