//! `j(tau) = E4(q)^3 / Delta(q)` from `q`-expansions.

use astro_float::BigFloat;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::complex::{consts, int, to_f64, BigComplex, RM};
use super::forms::{reduce_form, ReducedForm};
use crate::error::{Error, Result};
use crate::quad::FracIdeal;

/// Terms beyond this are never summed.
const MAX_TERMS: usize = 1_000_000;

/// Smallest `N` such that both tails after `q^N` are below `2^-bits`.
///
/// With `r = |q| = exp(-2 pi y)`, the `E4` tail is at most
/// `240 zeta(3) sum_{n > N} n^3 r^n <= 291 (N+1)^3 r^(N+1) / (1 - rho)` with
/// `rho = ((N+2)/(N+1))^3 r`, and the pentagonal tail is at most `r^(N+1) / (1 - r)`.
pub fn q_terms(im_tau: f64, bits: usize) -> Result<usize> {
    if im_tau.is_nan() || im_tau <= 0.0 {
        return Err(Error::NotUpperHalfPlane);
    }
    let log2r = -2.0 * std::f64::consts::PI * im_tau / std::f64::consts::LN_2;
    let r = log2r.exp2();
    let target = -(bits as f64);
    for n in 1..=MAX_TERMS {
        let m = (n + 1) as f64;
        let rho = ((m + 1.0) / m).powi(3) * r;
        if rho >= 1.0 {
            continue;
        }
        let e4 = 291f64.log2() + 3.0 * m.log2() + m * log2r - (1.0 - rho).log2();
        let pent = m * log2r - (1.0 - r).log2();
        if e4 < target && pent < target {
            return Ok(n);
        }
    }
    Err(Error::PrecisionUnachievable(format!("more than {MAX_TERMS} q-terms needed at Im(tau) = {im_tau}")))
}

/// `j(tau)` straight from the series, without moving `tau`.
///
/// The result is accurate to roughly `2^-prec` in absolute value.
pub fn j_series(tau: &BigComplex, prec: usize) -> Result<BigComplex> {
    let y = to_f64(&tau.im);
    if !tau.im.is_positive() || y.is_nan() || y <= 0.0 {
        return Err(Error::NotUpperHalfPlane);
    }
    let wp = working_bits(y, prec);
    let terms = q_terms(y, wp)?;
    let mut cc = consts()?;
    let tau = tau.with_precision(wp);
    let q = tau.exp_2pi_i(&mut cc);
    let mut powers = Vec::with_capacity(terms + 1);
    powers.push(BigComplex::one(wp));
    for n in 1..=terms {
        let next = powers[n - 1].mul(&q);
        powers.push(next);
    }
    let mut e4 = BigComplex::zero(wp);
    for (n, qn) in powers.iter().enumerate().skip(1) {
        e4 = e4.add(&qn.scale(&int(sigma3(n as u64) as i64, wp)));
    }
    e4 = e4.scale(&int(240, wp)).add(&BigComplex::one(wp));
    // prod (1 - q^n) = sum_k (-1)^k q^(k(3k-1)/2)
    let mut eta = BigComplex::one(wp);
    for k in 1i64.. {
        let e1 = (k * (3 * k - 1) / 2) as usize;
        if e1 > terms {
            break;
        }
        let e2 = (k * (3 * k + 1) / 2) as usize;
        let mut pair = powers[e1].clone();
        if e2 <= terms {
            pair = pair.add(&powers[e2]);
        }
        eta = if k % 2 == 1 { eta.sub(&pair) } else { eta.add(&pair) };
    }
    let delta = q.mul(&eta.pow(24));
    let j = e4.pow(3).div(&delta)?;
    Ok(j.with_precision(prec))
}

/// `|j|` is about `exp(2 pi y)`, so relative errors are scaled by it.
fn working_bits(y: f64, prec: usize) -> usize {
    prec + (2.0 * std::f64::consts::PI * y / std::f64::consts::LN_2).ceil() as usize + 64
}

fn sigma3(n: u64) -> u64 {
    (1..=n).filter(|d| n.is_multiple_of(*d)).map(|d| d * d * d).sum()
}

/// Moves `tau` into the standard fundamental domain.
pub fn reduce_tau(tau: &BigComplex) -> Result<BigComplex> {
    if !tau.im.is_positive() {
        return Err(Error::NotUpperHalfPlane);
    }
    let p = tau.precision();
    let half = BigFloat::from_f64(0.5, p);
    let one = int(1, p);
    let mut t = tau.clone();
    for _ in 0..10_000 {
        let shift = t.re.add(&half, p, RM).floor();
        t = BigComplex::new(t.re.sub(&shift, p, RM), t.im.clone(), p);
        let n = t.norm_sqr();
        if n.cmp(&one).is_some_and(|c| c >= 0) {
            return Ok(t);
        }
        // -1/t = -conj(t) / |t|^2
        t = BigComplex::new(t.re.neg().div(&n, p, RM), t.im.div(&n, p, RM), p);
    }
    Err(Error::PrecisionUnachievable("tau did not reach the fundamental domain".into()))
}

/// `j(tau)` for any `tau` in the upper half plane.
pub fn j_from_tau(tau: &BigComplex, prec: usize) -> Result<BigComplex> {
    j_series(&reduce_tau(&tau.with_precision(prec + 64))?, prec)
}

/// `tau = (-b + sqrt(D)) / 2a` for a positive definite form.
pub fn tau_of_form(f: &ReducedForm, prec: usize) -> BigComplex {
    let p = prec;
    let two_a = int(2 * f.a, p);
    let re = int(-f.b, p).div(&two_a, p, RM);
    let im = int(-f.discriminant(), p).sqrt(p, RM).div(&two_a, p, RM);
    BigComplex::new(re, im, p)
}

/// `j` of a reduced form's root, with the precision raised to cover `|j|`.
pub fn j_of_form(f: &ReducedForm, prec: usize) -> Result<BigComplex> {
    let y = (-f.discriminant() as f64).sqrt() / (2 * f.a) as f64;
    j_series(&tau_of_form(f, working_bits(y, prec)), prec)
}

/// `L = Z w1 + Z w2` is homothetic to `Z + Z tau` with `tau` in the fundamental domain.
pub fn tau_of_lattice(l: &FracIdeal, prec: usize) -> Result<(BigComplex, ReducedForm)> {
    let f = lattice_form(l)?;
    Ok((tau_of_form(&f, prec), f))
}

/// The reduced form attached to the homothety class of `l`.
pub fn lattice_form(l: &FracIdeal) -> Result<ReducedForm> {
    let k = l.field();
    let [w1, w2] = l.basis();
    let mut tau = k.div(&w2, &w1)?;
    // the embedding sends sqrt(d) to i sqrt|d|, so Im(tau) has the sign of its omega coefficient
    if tau.b.is_negative() {
        tau = k.inverse(&tau)?;
    }
    if tau.b.is_zero() {
        return Err(Error::Invariant("lattice basis is degenerate".into()));
    }
    // minimal polynomial x^2 - tr x + norm, cleared of denominators
    let (tr, nm) = (k.trace(&tau), k.norm(&tau));
    let den = num_integer::Integer::lcm(tr.denom(), nm.denom());
    let scale = |x: &BigRational| (x * BigRational::from_integer(den.clone())).to_integer();
    let (a, b, c) = (den.clone(), -scale(&tr), scale(&nm));
    let g = num_integer::Integer::gcd(&num_integer::Integer::gcd(&a, &b), &c);
    let div = |x: BigInt| x / &g;
    reduce_form(&div(a), &div(b), &div(c))
}
