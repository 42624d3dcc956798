//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Run with `cargo test -p serrehom-cli --test acceptance`. Lines go straight to
//! stderr so they show up without `--nocapture`.

#[path = "../../core/tests/common/mod.rs"]
mod gen;

use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rand::Rng;

use gen::*;
use serrehom::classpoly::{class_number, coefficients_equal, hilbert_class_poly, j_from_tau, BigComplex, PrecisionPolicy};
use serrehom::gmodule::adjunction::{coinduced_action, diagonal_action, tuple_law, tuples_equal};
use serrehom::gmodule::rational::decomposition_map;
use serrehom::gmodule::{split_surjection, standard, CoinductionAdjunction, PresentedModule, RationalGModule, RestrictionAdjunction};
use serrehom::linalg::field::{identity, inverse, mat_mul};
use serrehom::quad::{FieldElement, ImQuadField, QuadOrder};
use serrehom::tori::{apply_ses, hom_ideal, hom_torus, maximal_order_isogeny, res_torus, CMCurve};
use serrehom::twisted::{Action, CoeffRing, GaloisGroup, Integers, TwistedRingElement};

const ORDERS: [(i64, u64); 6] = [(-1, 2), (-1, 5), (-3, 2), (-3, 3), (-7, 2), (-2, 3)];

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn twisted_axioms<R: CoeffRing>(a: &TwistedRingElement<R>, b: &TwistedRingElement<R>, c: &TwistedRingElement<R>) -> bool {
    let m = |x: &TwistedRingElement<R>, y: &TwistedRingElement<R>| x.tr_mul(y).unwrap();
    let p = |x: &TwistedRingElement<R>, y: &TwistedRingElement<R>| x.tr_add(y).unwrap();
    m(&m(a, b), c) == m(a, &m(b, c)) && m(a, &p(b, c)) == p(&m(a, b), &m(a, c)) && m(&p(a, b), c) == p(&m(a, c), &m(b, c))
}

fn sigma_commutes<R: CoeffRing>(ring: &R, group: GaloisGroup, r: &R::Elem) -> bool {
    let s = TwistedRingElement::group_element(ring.clone(), group, 1);
    let lhs = s.tr_mul(&TwistedRingElement::scalar(ring.clone(), group, r.clone())).unwrap();
    let sr = TwistedRingElement::<R>::act(ring, &group, 1, r);
    lhs == TwistedRingElement::scalar(ring.clone(), group, sr).tr_mul(&s).unwrap()
}

fn criterion_1() -> Outcome {
    let mut r = rng(1);
    let trivial = GaloisGroup::c2(Action::Trivial);
    let conj = GaloisGroup::c2(Action::Conjugation);
    let gauss = QuadOrder::from_discriminant(-4).unwrap();
    for i in 0..1000 {
        let [a, b, c] = [0; 3].map(|_| twisted(&mut r, &Integers, trivial, 100));
        ensure(twisted_axioms(&a, &b, &c), || format!("Z<C2> triple {i}"))?;
        let [a, b, c] = [0; 3].map(|_| twisted(&mut r, &gauss, conj, 100));
        ensure(twisted_axioms(&a, &b, &c), || format!("Z[i]<C2> triple {i}"))?;
    }
    for i in 0..100 {
        let x = integral_element(&mut r, &gauss, 100);
        ensure(sigma_commutes(&gauss, conj, &x), || format!("sigma r = conj(r) sigma fails for r #{i}"))?;
    }
    Ok("2000 triples, 100 commutations".into())
}

fn criterion_2() -> Outcome {
    for d in FIELDS {
        let k = ImQuadField::new(d).unwrap();
        for action in [Action::Trivial, Action::Conjugation] {
            let g = GaloisGroup::c2(action);
            let s = TwistedRingElement::group_element(k, g, 1);
            let one = TwistedRingElement::one(k, g);
            let prod = s.tr_add(&one).unwrap().tr_mul(&s.tr_sub(&one).unwrap()).unwrap();
            ensure(prod.is_zero(), || format!("d = {d}, {action:?}: {prod:?}"))?;
        }
    }
    Ok(format!("{} fields, both actions", FIELDS.len()))
}

fn criterion_3() -> Outcome {
    for d in FIELDS {
        let k = ImQuadField::new(d).unwrap();
        let g = GaloisGroup::c2(Action::Trivial);
        let v = RationalGModule::simple(k, g, 1).unwrap().direct_sum(&RationalGModule::simple(k, g, -1).unwrap()).unwrap();
        let w = RationalGModule::regular(k, g).unwrap();
        let phi = decomposition_map();
        let inv = inverse(&k, &phi).ok_or("decomposition map is singular")?;
        ensure(mat_mul(&k, &phi, &inv) == identity(&k, 2), || "phi * phi^-1 != 1".into())?;
        // sigma acts by s on F<G> and by diag(1, -1) on F + twist(F)
        ensure(mat_mul(&k, &phi, &v.sigma) == mat_mul(&k, &w.sigma, &phi), || format!("d = {d}: not equivariant"))?;
        ensure(w.is_equivariant(&v, &inv) && v.is_isomorphism(&w, &phi), || format!("d = {d}: inverse not equivariant"))?;
    }
    Ok("invertible and equivariant".into())
}

fn criterion_4() -> Outcome {
    let mut r = rng(4);
    let mut max_dim = 0;
    for i in 0..20 {
        let k = ImQuadField::new(FIELDS[r.gen_range(0..FIELDS.len())]).unwrap();
        let g = if i % 2 == 0 { GaloisGroup::c2(Action::Trivial) } else { GaloisGroup::c2(Action::Conjugation) };
        let s = random_surjection(&mut r, k, g);
        max_dim = max_dim.max(s.v.dim());
        ensure(s.v.dim() <= 6, || "dimension above 6".into())?;
        ensure(s.v.is_equivariant(&s.w, &s.phi), || format!("case {i}: phi not equivariant"))?;
        let avg = split_surjection(&s.v, &s.w, &s.phi, &s.section).map_err(|e| format!("case {i}: {e}"))?;
        ensure(s.w.is_equivariant(&s.v, &avg), || format!("case {i}: average not equivariant"))?;
        ensure(mat_mul(&k, &s.phi, &avg) == identity(&k, s.w.dim()), || format!("case {i}: not a section"))?;
    }
    Ok(format!("20 surjections, dim V <= {max_dim}"))
}

fn criterion_5() -> Outcome {
    let mut r = rng(5);
    for i in 0..20 {
        let o = random_order(&mut r);
        let g = GaloisGroup::c2(if i % 2 == 0 { Action::Conjugation } else { Action::Trivial });
        let plain = random_module(&mut r, &o, GaloisGroup::trivial(), 2);
        let module = random_module(&mut r, &o, g, 2);
        ensure(RestrictionAdjunction::new(&plain, &module).unwrap().round_trips().unwrap(), || format!("restriction pair {i}"))?;
        ensure(CoinductionAdjunction::new(&module, &plain).unwrap().round_trips().unwrap(), || format!("coinduction pair {i}"))?;
        let x = random_module(&mut r, &o, g, 3);
        let f: Vec<Vec<_>> = g.elements().map(|_| (0..x.gens()).map(|_| twisted(&mut r, &o, g, 5)).collect()).collect();
        let gt = tuple_law(&x, &f).unwrap();
        for sigma in g.elements() {
            let s = TwistedRingElement::group_element(o, g, sigma);
            let literal: Vec<_> = f[g.inv(sigma)].iter().map(|c| s.tr_mul(c).unwrap()).collect();
            ensure(gt[sigma] == literal, || format!("tuple law at sigma = {sigma}, case {i}"))?;
            let lhs = tuple_law(&x, &diagonal_action(&x, sigma, &f).unwrap()).unwrap();
            ensure(tuples_equal(&x, &lhs, &coinduced_action(&x, sigma, &gt).unwrap()), || format!("tuple law not equivariant, case {i}"))?;
        }
    }
    Ok("20 + 20 round trips, tuple law literal".into())
}

fn criterion_6() -> Outcome {
    let mut r = rng(6);
    let mut nonstandard = 0;
    for i in 0..10 {
        let e = random_curve(&mut r);
        nonstandard += usize::from(e.lattice() != &CMCurve::standard(*e.order(), e.action()).lattice().clone());
        let (t, c) = hom_torus(&standard::ring_module(e.order(), e.group()), &e).map_err(|x| x.to_string())?;
        ensure(c.is_trivial() && t.dim() == 1, || format!("case {i}: not one-dimensional and connected"))?;
        ensure(t.chart(0, &FieldElement::one()).unwrap() == *e.lattice(), || format!("case {i}: lattice differs from L"))?;
        let (free, c) = hom_torus(&PresentedModule::free(*e.order(), e.group(), 1), &e).unwrap();
        ensure(c.is_trivial() && free == res_torus(&e, e.group()).unwrap(), || format!("case {i}: Hom(R<G>, E) != Res E"))?;
    }
    Ok(format!("10 curves ({nonstandard} with L != O)"))
}

fn criterion_7() -> Outcome {
    let mut r = rng(7);
    let mut ranks = [0; 4];
    for i in 0..30 {
        let e = random_curve(&mut r);
        let m = torsion_free_module(&mut r, e.order(), e.group());
        ensure(m.is_torsion_free(), || format!("case {i}: module has torsion"))?;
        let (t, _) = hom_torus(&m, &e).unwrap();
        let rank = m.rank_over_r();
        ranks[rank.min(3)] += 1;
        ensure(t.dim() == rank, || format!("case {i}: dim {} != rank {rank}", t.dim()))?;
    }
    Ok(format!("30 modules, ranks 1/2/3: {}/{}/{}", ranks[1], ranks[2], ranks[3]))
}

fn order(d: i64, f: u64) -> QuadOrder {
    QuadOrder::new(ImQuadField::new(d).unwrap(), f).unwrap()
}

fn criterion_8() -> Outcome {
    for (d, f) in ORDERS {
        let o = order(d, f);
        let cert = maximal_order_isogeny(&CMCurve::standard(o, Action::Conjugation)).map_err(|e| format!("({d}, {f}): {e}"))?;
        let fb = BigInt::from(f);
        ensure(cert.degree == fb && cert.kernel.order == fb, || format!("({d}, {f}): degree {}", cert.degree))?;
        ensure(cert.source.lattice().multiplier_ring() == o.maximal_order(), || format!("({d}, {f}): E' not CM by O_F"))?;
        ensure(cert.target.lattice().multiplier_ring() == o, || format!("({d}, {f}): E not CM by O"))?;
        ensure(cert.verify(), || format!("({d}, {f}): certificate does not verify"))?;
    }
    Ok("6 orders".into())
}

fn criterion_9() -> Outcome {
    for (d, f) in ORDERS {
        let o = order(d, f);
        let e = CMCurve::standard(o, Action::Conjugation);
        let ses = standard::maximal_order_sequence(&o, e.group()).unwrap();
        let rep = apply_ses(&ses, &e).map_err(|x| format!("({d}, {f}): {x}"))?;
        ensure(rep.exact && rep.left_injective && rep.middle_exact && rep.right_surjective, || format!("({d}, {f}): {rep:?}"))?;
        ensure(rep.dims == [0, 1, 1], || format!("({d}, {f}): dims {:?}", rep.dims))?;
        ensure(rep.component_orders[0] == BigInt::from(f), || format!("({d}, {f}): |Hom(O_F/O, E)| = {}", rep.component_orders[0]))?;
        ensure(rep.identity_degree == Some(BigInt::from(f)) && rep.bookkeeping_consistent, || format!("({d}, {f}): bookkeeping {rep:?}"))?;
    }
    Ok("6 sequences exact".into())
}

fn criterion_10() -> Outcome {
    let mut r = rng(10);
    for i in 0..50 {
        let e = random_curve(&mut r);
        let ideal = conj_stable_ideal(&mut r, e.order());
        let m = standard::ideal_module(e.order(), e.group(), &ideal, 1).unwrap();
        let (t, _) = hom_torus(&m, &e).unwrap();
        let w = ideal.basis()[0].clone();
        let shortcut = hom_ideal(&ideal, &e).map_err(|x| format!("case {i}: {x}"))?;
        ensure(t.chart(0, &w).unwrap() == *shortcut.lattice(), || format!("case {i}: lattices differ"))?;
    }
    Ok("50 rank-one modules".into())
}

/// Counts reduced primitive forms with `a` outermost, independent of the library's enumeration.
fn recount(d: i64) -> usize {
    let mut n = 0;
    let mut a = 1;
    while 3 * a * a <= -d {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            if num_integer::gcd(num_integer::gcd(a, b), c) == 1 {
                n += 1;
            }
        }
        a += 1;
    }
    n
}

fn distance_to(j: &BigComplex, n: i64) -> f64 {
    let diff = j.sub(&BigComplex::from_i64(n, 0, j.precision()));
    diff.re_f64().hypot(diff.im_f64())
}

fn criterion_11() -> Outcome {
    // 100 decimal digits
    let bits = 333;
    for (y, expected) in [(1, 1728), (2, 287496)] {
        let j = j_from_tau(&BigComplex::from_i64(0, y, bits), bits).unwrap();
        let res = distance_to(&j, expected);
        ensure(res < 1e-20, || format!("j({y}i) is {res:e} from {expected}"))?;
    }
    let policy = PrecisionPolicy::default();
    let goldens: [(i64, &[i64]); 3] = [(-4, &[-1728, 1]), (-16, &[-287496, 1]), (-15, &[-121287375, 191025, 1])];
    for (d, coeffs) in goldens {
        let h = hilbert_class_poly(d, &policy).unwrap();
        ensure(coefficients_equal(&h, coeffs), || format!("H_{d} = {:?}", h.coeffs))?;
        ensure(h.max_residue < 1e-10, || format!("H_{d} residue {:e}", h.max_residue))?;
    }
    let cheap = PrecisionPolicy::with_bits(128);
    let mut count = 0;
    for n in 3i64..=200 {
        let d = -n;
        if !matches!(d.rem_euclid(4), 0 | 1) {
            continue;
        }
        let h = hilbert_class_poly(d, &cheap).unwrap();
        let expected = recount(d);
        ensure(h.degree() == expected && class_number(d).unwrap() == expected, || format!("D = {d}: degree {} vs {expected}", h.degree()))?;
        count += 1;
    }
    Ok(format!("goldens exact, {count} discriminants with deg H_D = h(D)"))
}

fn run_bin(args: &[&str]) -> Vec<u8> {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_serrehom"))
        .args(args)
        .env_remove(serrehom_cli::PREC_ENV)
        .output()
        .expect("binary runs");
    assert_eq!(out.status.code(), Some(0), "{args:?}");
    out.stdout
}

fn criterion_12() -> Outcome {
    for disc in ["-16", "-27", "-60"] {
        let base = ["max-isogeny", "-D", disc, "--certify-j", "--json"];
        let runs: Vec<Vec<u8>> = (0..3).map(|_| run_bin(&base)).collect();
        ensure(runs.windows(2).all(|w| w[0] == w[1]), || format!("D = {disc}: repeated runs differ"))?;
        for threads in ["1", "4"] {
            let mut args = vec!["--threads", threads];
            args.extend_from_slice(&base);
            ensure(run_bin(&args) == runs[0], || format!("D = {disc}: --threads {threads} differs"))?;
        }
    }
    Ok("byte-identical over 3 runs and 1 vs 4 threads".into())
}

struct Criterion {
    number: usize,
    name: &'static str,
    limit: Option<Duration>,
    check: fn() -> Outcome,
}

#[test]
fn acceptance_criteria() {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { number: 1, name: "twisted ring axioms", limit: secs(5), check: criterion_1 },
        Criterion { number: 2, name: "(s + 1)(s - 1) = 0", limit: None, check: criterion_2 },
        Criterion { number: 3, name: "F + twist(F) = F<G>", limit: None, check: criterion_3 },
        Criterion { number: 4, name: "averaged section", limit: None, check: criterion_4 },
        Criterion { number: 5, name: "adjunction round trips", limit: None, check: criterion_5 },
        Criterion { number: 6, name: "functor unit", limit: None, check: criterion_6 },
        Criterion { number: 7, name: "dimension law", limit: None, check: criterion_7 },
        Criterion { number: 8, name: "isogeny from the maximal order", limit: secs(10), check: criterion_8 },
        Criterion { number: 9, name: "exactness", limit: None, check: criterion_9 },
        Criterion { number: 10, name: "hom_ideal = hom_torus", limit: secs(30), check: criterion_10 },
        Criterion { number: 11, name: "numerical certification", limit: secs(60), check: criterion_11 },
        Criterion { number: 12, name: "determinism", limit: None, check: criterion_12 },
    ];
    let mut failures = Vec::new();
    let mut err = std::io::stderr();
    // start below the harness's own "test ... " prefix
    let _ = writeln!(err);
    for c in &criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
            (o, _) => o,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d.clone()),
            Err(e) => ("FAIL", e.clone()),
        };
        let limit = c.limit.map(|l| format!(" / {}s", l.as_secs())).unwrap_or_default();
        let _ = writeln!(err, "{tag} criterion {:>2} {:<32} {:>9.3}s{limit}  {detail}", c.number, c.name, elapsed.as_secs_f64());
        if outcome.is_err() {
            failures.push(c.number);
        }
    }
    assert!(failures.is_empty(), "failed criteria: {failures:?}");
}
