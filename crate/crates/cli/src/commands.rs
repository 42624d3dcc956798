//! The subcommands, each returning an [`Envelope`].

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{json, Value};

use serrehom::classpoly::{certify_j, class_number, hilbert_class_poly, ClassPolynomial, PrecisionPolicy};
use serrehom::gmodule::parse::{parse_module_source, AnyModule, RingSpec};
use serrehom::gmodule::rational::decompose_c2_with_alpha;
use serrehom::gmodule::{rationalize, PresentedModule};
use serrehom::quad::{FieldElement, ImQuadField, QuadOrder};
use serrehom::tori::{hom_torus_full, maximal_order_isogeny, res_torus, CMCurve};
use serrehom::twisted::{Action, IntegralRing};

use crate::envelope::Envelope;
use crate::{default_precision, ActionFlag, ClassPolyArgs, CliError, HomArgs, MaxIsogenyArgs, OrderArgs, OrderInfoArgs};

impl OrderArgs {
    pub fn inputs(&self) -> Value {
        match (self.disc, self.d, self.f) {
            (Some(disc), _, _) => json!({ "D": disc }),
            (None, d, f) => json!({ "d": d, "f": f }),
        }
    }

    pub fn resolve(&self) -> Result<QuadOrder, CliError> {
        match (self.disc, self.d, self.f) {
            (Some(disc), None, None) => QuadOrder::from_discriminant(disc).map_err(CliError::from_input),
            (None, Some(d), Some(f)) => ImQuadField::new(d)
                .and_then(|k| QuadOrder::new(k, f))
                .map_err(CliError::from_input),
            _ => Err(CliError::input("give either -D <disc> or both --d and --f")),
        }
    }
}

fn omega_name(k: &ImQuadField) -> String {
    if k.d().rem_euclid(4) == 1 {
        format!("(1 + sqrt({}))/2", k.d())
    } else {
        format!("sqrt({})", k.d())
    }
}

fn element_name(x: &FieldElement, k: &ImQuadField) -> String {
    let [a, b] = x.coords();
    let w = omega_name(k);
    match (a.is_zero(), b.is_zero()) {
        (true, true) => "0".into(),
        (false, true) => a.to_string(),
        (true, false) => format!("{b}*{w}"),
        (false, false) => format!("{a} + {b}*{w}"),
    }
}

pub fn order_info(args: &OrderInfoArgs) -> Result<Envelope, CliError> {
    let o = args.order.resolve()?;
    let k = o.field();
    let f = o.conductor();
    let h = class_number(o.discriminant()).map_err(CliError::from_computation)?;
    let alpha = o.purely_imaginary_generator();
    let outputs = json!({
        "discriminant": o.discriminant(),
        "d": k.d(),
        "f": f,
        "fundamental_discriminant": k.disc(),
        "maximal": o.is_maximal(),
        "index_in_maximal_order": f,
        "omega": omega_name(&k),
        "basis": ["1", format!("{f}*omega")],
        "purely_imaginary_generator": alpha,
        "class_number": h,
    });
    let mut human = String::new();
    let _ = writeln!(human, "order           Z + {f}*O_F in {k}");
    let _ = writeln!(human, "discriminant    {}", o.discriminant());
    let _ = writeln!(human, "d               {}", k.d());
    let _ = writeln!(human, "conductor f     {f}");
    let _ = writeln!(human, "disc(O_F)       {}", k.disc());
    let _ = writeln!(human, "[O_F : O]       {f}{}", if o.is_maximal() { " (maximal)" } else { "" });
    let _ = writeln!(human, "basis           1, {f}*omega   omega = {}", omega_name(&k));
    let _ = writeln!(human, "alpha           {}", element_name(&alpha, &k));
    let _ = writeln!(human, "class number    {h}");
    Ok(Envelope::new("order-info", args.order.inputs(), outputs, human))
}

pub fn max_isogeny(args: &MaxIsogenyArgs) -> Result<Envelope, CliError> {
    let o = args.order.resolve()?;
    let bits = match (args.certify_j, args.prec) {
        (false, _) => None,
        (true, Some(p)) if p < 64 => return Err(CliError::input("--prec must be at least 64")),
        (true, Some(p)) => Some(p),
        (true, None) => Some(default_precision()?),
    };
    let e = CMCurve::standard(o, Action::Conjugation);
    let mut cert = maximal_order_isogeny(&e).map_err(CliError::from_computation)?;
    let f = BigInt::from(o.conductor());
    let checks = json!({
        "verified": cert.verify(),
        "degree_equals_conductor": cert.degree == f,
        "kernel_order_equals_conductor": cert.kernel.order == f,
        "source_is_maximal": cert.source.order().is_maximal(),
        "target_order_matches": *cert.target.order() == o,
        "kernel_cyclic": cert.kernel.is_cyclic(),
    });
    let mut failed = checks.as_object().unwrap().values().any(|v| v != &Value::Bool(true));
    let cm = match bits {
        Some(b) => {
            let [src, tgt] = certify_j(&mut cert, &PrecisionPolicy::with_bits(b)).map_err(CliError::from_computation)?;
            failed |= !(src.passed && tgt.passed && src.multiplier_ring_matches && tgt.multiplier_ring_matches);
            Some([src, tgt])
        }
        None => None,
    };
    let mut human = String::new();
    let _ = writeln!(human, "isogeny E' -> E with E = C / O, O of discriminant {}", o.discriminant());
    let _ = writeln!(human, "source E'       CM by discriminant {}", cert.source.order().discriminant());
    let _ = writeln!(human, "degree          {}", cert.degree);
    let inv: Vec<String> = cert.kernel.invariants.iter().map(ToString::to_string).collect();
    let _ = writeln!(
        human,
        "kernel          order {}, invariants [{}], {}",
        cert.kernel.order,
        inv.join(", "),
        if cert.kernel.is_cyclic() { "cyclic" } else { "not cyclic" }
    );
    let _ = writeln!(human, "verified        {}", cert.verify());
    if let Some([src, tgt]) = &cm {
        for (name, c) in [("j(E')", src), ("j(E)", tgt)] {
            let _ = writeln!(
                human,
                "{name:<15} {}   H_{}(j) residue {:.1e}  {}",
                c.j,
                c.discriminant,
                c.relative_residue,
                if c.passed { "PASS" } else { "FAIL" }
            );
        }
    }
    let mut inputs = args.order.inputs();
    inputs["certify_j"] = json!(args.certify_j);
    let outputs = json!({
        "certificate": cert.to_json(),
        "checks": checks,
        "cm_checks": cm,
    });
    let mut env = Envelope::new("max-isogeny", inputs, outputs, human).failing(failed);
    if let Some(b) = bits {
        env = env.with_precision(b);
    }
    Ok(env)
}

/// `x^2 + 191025*x - 121287375`.
pub fn format_polynomial(h: &ClassPolynomial) -> String {
    let n = h.degree();
    let mut s = match n {
        1 => "x".to_string(),
        _ => format!("x^{n}"),
    };
    for k in (0..n).rev() {
        let c = &h.coeffs[k];
        if *c == BigInt::from(0) {
            continue;
        }
        let mag = c.magnitude();
        s.push_str(if *c < BigInt::from(0) { " - " } else { " + " });
        let unit = *mag == 1u32.into();
        match (k, unit) {
            (0, _) => s.push_str(&mag.to_string()),
            (1, true) => s.push('x'),
            (1, false) => s.push_str(&format!("{mag}*x")),
            (_, true) => s.push_str(&format!("x^{k}")),
            (_, false) => s.push_str(&format!("{mag}*x^{k}")),
        }
    }
    s
}

pub fn class_poly(args: &ClassPolyArgs) -> Result<Envelope, CliError> {
    let bits = match args.prec {
        Some(p) if p < 64 => return Err(CliError::input("--prec must be at least 64")),
        Some(p) => p,
        None => default_precision()?,
    };
    let h = hilbert_class_poly(args.disc, &PrecisionPolicy::with_bits(bits)).map_err(CliError::from_computation)?;
    let text = format_polynomial(&h);
    let outputs = json!({
        "polynomial": h.to_json(),
        "text": text,
        "degree": h.degree(),
        "class_number": class_number(args.disc).map_err(CliError::from_computation)?,
        "max_rounding_residue": h.max_residue,
        "working_precision_bits": h.precision,
    });
    let inputs = json!({ "D": args.disc, "prec": args.prec });
    Ok(Envelope::new("class-poly", inputs, outputs, format!("{text}\n")).with_precision(bits))
}

pub fn hom(args: &HomArgs) -> Result<Envelope, CliError> {
    let text = std::fs::read_to_string(&args.module)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", args.module.display())))?;
    let mut src = parse_module_source(&text).map_err(CliError::from_input)?;
    let from_flag = args.disc.map(QuadOrder::from_discriminant).transpose().map_err(CliError::from_input)?;
    // the curve's order: from the module header, else from -D
    let (ring, order) = match (src.ring, from_flag) {
        (Some(RingSpec::Order(o)), Some(p)) if o != p => {
            return Err(CliError::input(format!(
                "module is over the order of discriminant {}, but -D {} was given",
                o.discriminant(),
                p.discriminant()
            )))
        }
        (Some(RingSpec::Order(o)), _) => (RingSpec::Order(o), o),
        (Some(RingSpec::Integers), Some(p)) => (RingSpec::Integers, p),
        (Some(RingSpec::Integers), None) => return Err(CliError::input("a module over Z needs -D to name the curve")),
        (None, Some(p)) => (RingSpec::Order(p), p),
        (None, None) => return Err(CliError::input("the module file names no ring; pass -D")),
    };
    if let Some(flag) = args.action {
        src.action = Some(match flag {
            ActionFlag::Trivial => Action::Trivial,
            ActionFlag::Conj => Action::Conjugation,
        });
    }
    src.ring = Some(ring);
    let module = src.resolve(None, None, None).map_err(CliError::from_input)?;
    let (report, human) = match &module {
        AnyModule::Integers(m) => hom_report(m, order)?,
        AnyModule::Order(m) => hom_report(m, order)?,
    };
    let inputs = json!({
        "module": args.module.file_name().map(|s| s.to_string_lossy().into_owned()),
        "module_text": text,
        "D": args.disc,
        "action": args.action.map(|a| match a { ActionFlag::Trivial => "trivial", ActionFlag::Conj => "conj" }),
    });
    let failed = report["descent"]["present"] == json!(true)
        && (report["descent"]["involution"] != json!(true) || report["descent"]["stabilizes_lattice"] != json!(true));
    Ok(Envelope::new("hom", inputs, report, human).failing(failed))
}

fn hom_report<R: IntegralRing>(m: &PresentedModule<R>, order: QuadOrder) -> Result<(Value, String), CliError> {
    let group = m.group();
    let e = CMCurve::standard(order, group.action());
    let h = hom_torus_full(m, &e).map_err(CliError::from_computation)?;
    let t = &h.torus;
    let v = rationalize(m, Some(order.field())).map_err(CliError::from_computation)?;
    let (r, r_twist) = if group.order() == 2 {
        let d = decompose_c2_with_alpha(&v, &order.purely_imaginary_generator()).map_err(CliError::from_computation)?;
        if !d.verify(&v) {
            return Err(CliError::internal("decomposition does not conjugate to the diagonal model"));
        }
        (d.r, d.r_twist)
    } else {
        (v.dim(), 0)
    };
    let equals_curve = t.dim() == 1
        && h.components.is_trivial()
        && t.chart(0, &FieldElement::one()).is_ok_and(|l| &l == e.lattice());
    let equals_res = h.components.is_trivial() && res_torus(&e, group).is_ok_and(|r| &r == t);
    let descent = json!({
        "present": t.descent.is_some(),
        "involution": t.descent_is_involution(),
        "stabilizes_lattice": t.descent_stabilizes_lattice(),
    });
    let report = json!({
        "curve": e.to_json(),
        "group_order": group.order(),
        "action": group.action(),
        "generators": m.gens(),
        "relations": m.relations().rows(),
        "rank_over_ring": m.rank_over_r(),
        "dimension": t.dim(),
        "torus": t.to_json(),
        "component_group": h.components,
        "descent": descent,
        "decomposition": { "r": r, "r_twist": r_twist },
        "equals_curve": equals_curve,
        "equals_res": equals_res,
    });
    let inv: Vec<String> = h.components.invariants.iter().map(|d| format!("Z/{d}")).collect();
    let mut human = String::new();
    let _ = writeln!(human, "curve           E = C / O, O of discriminant {}, action {:?}", order.discriminant(), group.action());
    let _ = writeln!(human, "module          {} generators, {} relations, rank {}", m.gens(), m.relations().rows(), m.rank_over_r());
    let _ = writeln!(human, "dimension       {}", t.dim());
    let _ = writeln!(human, "components      {}", if inv.is_empty() { "0".to_string() } else { inv.join(" + ") });
    let _ = writeln!(
        human,
        "descent         {}",
        match t.descent {
            None => "none".to_string(),
            Some(_) => format!("involution {}, stabilizes lattice {}", t.descent_is_involution(), t.descent_stabilizes_lattice()),
        }
    );
    let _ = writeln!(human, "decomposition   r = {r}, r' = {r_twist}");
    if equals_curve {
        let _ = writeln!(human, "equals E");
    }
    if equals_res {
        let _ = writeln!(human, "equals Res E");
    }
    Ok((report, human))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(coeffs: &[i64]) -> ClassPolynomial {
        ClassPolynomial { d: 0, coeffs: coeffs.iter().map(|&c| c.into()).collect(), max_residue: 0.0, precision: 0 }
    }

    #[test]
    fn polynomials_print_like_algebra() {
        assert_eq!(format_polynomial(&poly(&[0, 1])), "x");
        assert_eq!(format_polynomial(&poly(&[-1728, 1])), "x - 1728");
        assert_eq!(format_polynomial(&poly(&[-121287375, 191025, 1])), "x^2 + 191025*x - 121287375");
        assert_eq!(format_polynomial(&poly(&[1, -1, 0, 1])), "x^3 - x + 1");
    }

    #[test]
    fn order_args_need_one_form() {
        assert!(OrderArgs::default().resolve().is_err());
        let o = OrderArgs { disc: Some(-16), d: None, f: None }.resolve().unwrap();
        assert_eq!((o.field().d(), o.conductor()), (-1, 2));
        let p = OrderArgs { disc: None, d: Some(-1), f: Some(2) }.resolve().unwrap();
        assert_eq!(o, p);
        assert_eq!(OrderArgs { disc: Some(-5), d: None, f: None }.resolve().unwrap_err().code, 2);
    }
}
