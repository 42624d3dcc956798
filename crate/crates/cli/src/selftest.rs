//! A fixed-seed pass over the library's invariants.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use serrehom::classpoly::{class_number, coefficients_equal, hilbert_class_poly, j_from_tau, j_string, BigComplex, PrecisionPolicy};
use serrehom::gmodule::rational::decomposition_map;
use serrehom::gmodule::{standard, PresentedModule, RationalGModule};
use serrehom::quad::{FieldElement, ImQuadField, QuadOrder};
use serrehom::tori::{apply_ses, hom_torus, maximal_order_isogeny, res_torus, CMCurve};
use serrehom::twisted::{Action, GaloisGroup, IntegralRing, TwistedRingElement};
use serrehom::Result;

use crate::envelope::Envelope;
use crate::CliError;

const SEED: u64 = 0x5e77e;

/// The `(d, f)` pairs used for the isogeny and exactness checks.
pub const ORDERS: [(i64, u64); 6] = [(-1, 2), (-1, 5), (-3, 2), (-3, 3), (-7, 2), (-2, 3)];

struct Check {
    name: &'static str,
    outcome: Result<bool>,
}

fn random_element<R: IntegralRing>(rng: &mut ChaCha8Rng, ring: &R, group: GaloisGroup) -> TwistedRingElement<R> {
    let coeffs = group
        .elements()
        .map(|_| {
            let c: Vec<BigInt> = (0..ring.z_rank()).map(|_| rng.gen_range(-20i64..=20).into()).collect();
            ring.from_coords(&c)
        })
        .collect();
    TwistedRingElement::from_coeffs(ring.clone(), group, coeffs).expect("coefficient count matches the group")
}

fn ring_axioms<R: IntegralRing>(rng: &mut ChaCha8Rng, ring: &R, group: GaloisGroup, trials: usize) -> Result<bool> {
    for _ in 0..trials {
        let [a, b, c] = [0; 3].map(|_| random_element(rng, ring, group));
        let assoc = a.tr_mul(&b)?.tr_mul(&c)? == a.tr_mul(&b.tr_mul(&c)?)?;
        let left = a.tr_mul(&b.tr_add(&c)?)? == a.tr_mul(&b)?.tr_add(&a.tr_mul(&c)?)?;
        let right = a.tr_add(&b)?.tr_mul(&c)? == a.tr_mul(&c)?.tr_add(&b.tr_mul(&c)?)?;
        if !(assoc && left && right) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn annihilation(k: ImQuadField, action: Action) -> Result<bool> {
    let g = GaloisGroup::c2(action);
    let s = TwistedRingElement::group_element(k, g, 1);
    let one = TwistedRingElement::one(k, g);
    Ok(s.tr_add(&one)?.tr_mul(&s.tr_sub(&one)?)?.is_zero())
}

fn decomposition_is_isomorphism() -> Result<bool> {
    let k = ImQuadField::new(-1)?;
    let g = GaloisGroup::c2(Action::Trivial);
    let v = RationalGModule::simple(k, g, 1)?.direct_sum(&RationalGModule::simple(k, g, -1)?)?;
    Ok(v.is_isomorphism(&RationalGModule::regular(k, g)?, &decomposition_map()))
}

fn orders() -> Result<Vec<QuadOrder>> {
    ORDERS.iter().map(|&(d, f)| QuadOrder::new(ImQuadField::new(d)?, f)).collect()
}

fn functor_unit() -> Result<bool> {
    for o in orders()? {
        let e = CMCurve::standard(o, Action::Conjugation);
        let (t, c) = hom_torus(&standard::ring_module(&o, e.group()), &e)?;
        if !(c.is_trivial() && t.chart(0, &FieldElement::one())? == *e.lattice()) {
            return Ok(false);
        }
        let (free, _) = hom_torus(&PresentedModule::free(o, e.group(), 1), &e)?;
        if free != res_torus(&e, e.group())? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn isogenies() -> Result<bool> {
    for o in orders()? {
        let cert = maximal_order_isogeny(&CMCurve::standard(o, Action::Conjugation))?;
        let f = BigInt::from(o.conductor());
        if !(cert.degree == f && cert.kernel.order == f && cert.source.order().is_maximal() && cert.verify()) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn exactness() -> Result<bool> {
    for o in orders()? {
        let e = CMCurve::standard(o, Action::Conjugation);
        let r = apply_ses(&standard::maximal_order_sequence(&o, e.group())?, &e)?;
        if !(r.exact && r.bookkeeping_consistent) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn class_numbers() -> Result<bool> {
    Ok(class_number(-4)? == 1 && class_number(-15)? == 2 && class_number(-23)? == 3 && class_number(-71)? == 7)
}

fn class_polynomials() -> Result<bool> {
    let p = PrecisionPolicy::with_bits(256);
    Ok(coefficients_equal(&hilbert_class_poly(-4, &p)?, &[-1728, 1])
        && coefficients_equal(&hilbert_class_poly(-16, &p)?, &[-287496, 1])
        && coefficients_equal(&hilbert_class_poly(-15, &p)?, &[-121287375, 191025, 1]))
}

fn j_values() -> Result<bool> {
    let p = 256;
    let j = |y: i64| j_from_tau(&BigComplex::from_i64(0, y, p), p).map(|v| j_string(&v));
    Ok(j(1)? == "1728" && j(2)? == "287496")
}

fn checks() -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let gaussian = QuadOrder::from_discriminant(-4).expect("valid discriminant");
    let k = gaussian.field();
    vec![
        Check {
            name: "twisted ring axioms over Z, trivial action",
            outcome: ring_axioms(&mut rng, &serrehom::twisted::Integers, GaloisGroup::c2(Action::Trivial), 100),
        },
        Check {
            name: "twisted ring axioms over Z[i], conjugation",
            outcome: ring_axioms(&mut rng, &gaussian, GaloisGroup::c2(Action::Conjugation), 100),
        },
        Check {
            name: "(s + 1)(s - 1) = 0 in F<C2>",
            outcome: annihilation(k, Action::Trivial).and_then(|a| Ok(a && annihilation(k, Action::Conjugation)?)),
        },
        Check { name: "F + twist(F) -> F<C2> is an isomorphism", outcome: decomposition_is_isomorphism() },
        Check { name: "Hom(R, E) = E and Hom(R<G>, E) = Res E", outcome: functor_unit() },
        Check { name: "maximal order isogeny has degree f", outcome: isogenies() },
        Check { name: "0 -> O -> O_F -> O_F/O -> 0 stays exact", outcome: exactness() },
        Check { name: "class numbers", outcome: class_numbers() },
        Check { name: "Hilbert class polynomials", outcome: class_polynomials() },
        Check { name: "j(i) = 1728 and j(2i) = 287496", outcome: j_values() },
    ]
}

pub fn run() -> Result<Envelope, CliError> {
    let results = checks();
    let mut human = String::new();
    let mut rows = Vec::new();
    let mut all = true;
    for c in &results {
        let (passed, detail) = match &c.outcome {
            Ok(b) => (*b, None),
            Err(e) => (false, Some(e.to_string())),
        };
        all &= passed;
        human.push_str(&format!("{} {}{}\n", if passed { "PASS" } else { "FAIL" }, c.name, detail.as_ref().map(|d| format!(": {d}")).unwrap_or_default()));
        rows.push(json!({ "name": c.name, "passed": passed, "error": detail }));
    }
    human.push_str(&format!("{} of {} checks passed\n", results.iter().filter(|c| matches!(c.outcome, Ok(true))).count(), results.len()));
    let outputs = json!({ "checks": rows, "passed": all });
    Ok(Envelope::new("selftest", json!({ "seed": SEED }), outputs, human).failing(!all))
}
