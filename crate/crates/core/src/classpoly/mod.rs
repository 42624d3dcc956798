//! Reduced forms, `j`-invariants and Hilbert class polynomials.

pub mod complex;
pub mod forms;
pub mod j;

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::quad::{FracIdeal, QuadOrder};
use crate::tori::IsogenyCert;
use complex::{from_bigint, round_to_int, to_f64, RM};

pub use complex::BigComplex;
pub use forms::{all_reduced_forms, class_number, reduce_form, reduced_forms, reduced_forms_bounded, ReducedForm, DEFAULT_MAX_ABS_DISC};
pub use j::{j_from_tau, j_of_form, j_series, lattice_form, q_terms, reduce_tau, tau_of_lattice};

/// Coefficients must be within this distance of an integer.
pub const ROUNDING_TOLERANCE: f64 = 1e-10;

/// Default working precision in bits.
pub const DEFAULT_PRECISION_BITS: usize = 512;

/// How hard to try when rounding coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    pub bits: usize,
    pub max_retries: u32,
    pub max_abs_disc: i64,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy { bits: DEFAULT_PRECISION_BITS, max_retries: 5, max_abs_disc: DEFAULT_MAX_ABS_DISC }
    }
}

impl PrecisionPolicy {
    pub fn with_bits(bits: usize) -> Self {
        PrecisionPolicy { bits, ..Self::default() }
    }
}

/// A monic integer polynomial whose roots are the `j`-invariants of discriminant `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassPolynomial {
    pub d: i64,
    /// Constant term first; the last entry is `1`.
    pub coeffs: Vec<BigInt>,
    /// Largest distance of a computed coefficient to its integer.
    pub max_residue: f64,
    /// Precision (bits) at which rounding succeeded.
    pub precision: usize,
}

impl ClassPolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn to_json(&self) -> Value {
        json!({
            "D": self.d,
            "coeffs": self.coeffs.iter().map(ToString::to_string).collect::<Vec<_>>(),
        })
    }

    /// `H(z)` and `sum |c_k| |z|^k`.
    pub fn evaluate(&self, z: &BigComplex) -> (BigComplex, BigFloat) {
        let p = z.precision();
        let mut acc = BigComplex::zero(p);
        let mut size = BigFloat::from_i64(0, p);
        let mut zk_abs = BigFloat::from_i64(1, p);
        let zabs = z.abs();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z).add(&BigComplex::new(from_bigint(c, p), BigFloat::from_i64(0, p), p));
        }
        for c in &self.coeffs {
            size = size.add(&from_bigint(&c.abs(), p).mul(&zk_abs, p, RM), p, RM);
            zk_abs = zk_abs.mul(&zabs, p, RM);
        }
        (acc, size)
    }
}

fn poly_mul_linear(poly: &[BigComplex], root: &BigComplex) -> Vec<BigComplex> {
    let p = root.precision();
    let mut out = vec![BigComplex::zero(p); poly.len() + 1];
    for (k, c) in poly.iter().enumerate() {
        out[k + 1] = out[k + 1].add(c);
        out[k] = out[k].sub(&c.mul(root));
    }
    out
}

/// Bits needed to hold the largest coefficient, from `|j| <= exp(pi sqrt|D| / a) + 2079`.
fn size_bits(forms: &[ReducedForm], d: i64) -> usize {
    let s = (-d as f64).sqrt();
    forms
        .iter()
        .map(|f| (std::f64::consts::PI * s / f.a as f64) / std::f64::consts::LN_2 + 12.0)
        .sum::<f64>()
        .ceil() as usize
}

/// `prod (x - j(tau_Q))` over reduced forms, rounded to integers.
pub fn hilbert_class_poly(d: i64, policy: &PrecisionPolicy) -> Result<ClassPolynomial> {
    let forms = reduced_forms_bounded(d, policy.max_abs_disc)?;
    let mut bits = policy.bits.max(64) + size_bits(&forms, d);
    let tol = BigFloat::from_f64(ROUNDING_TOLERANCE, 128);
    let mut last = String::new();
    for _ in 0..=policy.max_retries {
        let roots = forms.par_iter().map(|f| j_of_form(f, bits)).collect::<Result<Vec<_>>>()?;
        let mut poly = vec![BigComplex::one(bits)];
        for r in &roots {
            poly = poly_mul_linear(&poly, r);
        }
        let mut coeffs = Vec::with_capacity(poly.len());
        let mut worst = BigFloat::from_i64(0, bits);
        for c in &poly {
            let (n, res) = round_to_int(&c.re, bits).ok_or_else(|| Error::PrecisionUnachievable("coefficient is not finite".into()))?;
            let res = res.add(&c.im.abs(), bits, RM);
            if res.cmp(&worst).is_some_and(|o| o > 0) {
                worst = res;
            }
            coeffs.push(n);
        }
        if worst.cmp(&tol).is_some_and(|o| o < 0) && coeffs.last().is_some_and(BigInt::is_one) {
            return Ok(ClassPolynomial { d, coeffs, max_residue: to_f64(&worst), precision: bits });
        }
        last = format!("residue {:e} at {bits} bits", to_f64(&worst));
        bits *= 2;
    }
    Err(Error::PrecisionExhausted(last))
}

/// Outcome of evaluating a class polynomial at the `j`-invariant of a lattice.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CmVerification {
    pub discriminant: i64,
    pub form: ReducedForm,
    /// `j` as a decimal string (an integer when `h = 1`).
    pub j: String,
    /// `|H(j)| / sum |c_k| |j|^k`.
    pub relative_residue: f64,
    pub multiplier_ring_matches: bool,
    pub passed: bool,
}

/// Evaluates `H_{disc(o)}` at `j(tau_l)`.
pub fn verify_cm_j(l: &FracIdeal, o: &QuadOrder, policy: &PrecisionPolicy) -> Result<CmVerification> {
    let h = hilbert_class_poly(o.discriminant(), policy)?;
    let form = lattice_form(l)?;
    let bits = h.precision;
    let jv = j_of_form(&form, bits)?;
    let (val, size) = h.evaluate(&jv);
    let rel = val.abs().div(&size.max(&BigFloat::from_i64(1, bits)), bits, RM);
    let relative_residue = to_f64(&rel);
    Ok(CmVerification {
        discriminant: o.discriminant(),
        form,
        j: j_string(&jv),
        relative_residue,
        multiplier_ring_matches: l.multiplier_ring() == *o,
        passed: relative_residue < ROUNDING_TOLERANCE,
    })
}

/// Integer string when `j` is within tolerance of an integer, else a 30-decimal approximation.
pub fn j_string(j: &BigComplex) -> String {
    let p = j.precision();
    if let Some((n, res)) = round_to_int(&j.re, p) {
        let res = to_f64(&res) + to_f64(&j.im).abs();
        if res < ROUNDING_TOLERANCE {
            return n.to_string();
        }
    }
    j.to_decimal(30)
}

/// Fills the `j`-invariants of a certificate and checks both against their class polynomials.
pub fn certify_j(cert: &mut IsogenyCert, policy: &PrecisionPolicy) -> Result<[CmVerification; 2]> {
    let src = verify_cm_j(cert.source.lattice(), cert.source.order(), policy)?;
    let tgt = verify_cm_j(cert.target.lattice(), cert.target.order(), policy)?;
    cert.j_source = Some(src.j.clone());
    cert.j_target = Some(tgt.j.clone());
    Ok([src, tgt])
}

/// `true` when every coefficient is an exact integer equal to `expected` (constant term first).
pub fn coefficients_equal(h: &ClassPolynomial, expected: &[i64]) -> bool {
    h.coeffs.len() == expected.len() && h.coeffs.iter().zip(expected).all(|(a, b)| *a == BigInt::from(*b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::ImQuadField;

    #[test]
    fn small_class_polynomials() {
        let pol = PrecisionPolicy::with_bits(256);
        assert!(coefficients_equal(&hilbert_class_poly(-4, &pol).unwrap(), &[-1728, 1]));
        assert!(coefficients_equal(&hilbert_class_poly(-3, &pol).unwrap(), &[0, 1]));
        assert!(coefficients_equal(&hilbert_class_poly(-16, &pol).unwrap(), &[-287496, 1]));
        let h15 = hilbert_class_poly(-15, &pol).unwrap();
        assert!(coefficients_equal(&h15, &[-121287375, 191025, 1]));
        assert!(h15.max_residue < ROUNDING_TOLERANCE);
        assert_eq!(h15.to_json()["coeffs"][0], "-121287375");
    }

    #[test]
    fn cm_verification() {
        let pol = PrecisionPolicy::with_bits(256);
        let gauss = QuadOrder::from_discriminant(-4).unwrap();
        let o2 = QuadOrder::new(ImQuadField::new(-1).unwrap(), 2).unwrap();
        let v = verify_cm_j(&FracIdeal::from_order(&gauss), &gauss, &pol).unwrap();
        assert!(v.passed && v.multiplier_ring_matches);
        assert_eq!(v.j, "1728");
        let v = verify_cm_j(&FracIdeal::from_order(&o2), &o2, &pol).unwrap();
        assert!(v.passed);
        assert_eq!(v.j, "287496");
        let v = verify_cm_j(&FracIdeal::from_order(&gauss), &o2, &pol).unwrap();
        assert!(!v.passed && !v.multiplier_ring_matches);
    }
}
