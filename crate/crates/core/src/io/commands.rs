//! Command dispatch: each verb runs one engine operation on a workspace and
//! turns the outcome into a certificate report.

use crate::crosscheck::{
    corpus_suite, global_sections_check, monoid_suite, presheaf_suite, CheckOptions, SuiteTally, CRITERIA,
};
use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};
use crate::localization::{
    certify_localization, certify_open_immersion, conservativity_check, localize_element, localize_multset,
    partition_of_unity, ImmersionCertificate, LocalizationResult, MultSet,
};
use crate::monoid::{e_of_morphism, EndElement, EndRing, MonoidObject};
use crate::quotient::{base_change_quotient, quotient_ideal, quotient_sequence, IdealHandle, QuotientResult};
use crate::ring::StructureRing;
use crate::scheme::{
    check_cover, closed_subscheme, default_probe_pairs, describe_failures, function_field, glue_check,
    irreducibility_probe, is_integral, is_reduced, is_weakly_integral, local_ring_at, GluedScheme,
    IntegralFailure, OverlapSpec, QcIdealSheaf,
};

use super::corpus::corpus_generate;
use super::report::{digest, matrix_rows, strings, CertificateReport, Table, Verdict, Witness};
use super::workspace::{format_matrix, parse_matrix, Workspace};

pub const VERBS: [&str; 16] = [
    "check-monoid",
    "end-ring",
    "localize",
    "quotient",
    "quotient-ideal",
    "check-cover",
    "certify-immersion",
    "check-conservative",
    "check-basechange",
    "integrality",
    "function-field",
    "glue",
    "closed-subscheme",
    "local-ring",
    "cross-check",
    "corpus-run",
];

#[derive(Clone, Debug)]
pub struct RunOptions {
    /// Corpus field for `corpus-run` and workspace-free `cross-check`.
    pub field: Option<Field>,
    pub dim_max: usize,
    /// Random presheaves generated for the global-sections check.
    pub presheaves: usize,
    pub seed: u64,
    pub checks: CheckOptions,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            field: None,
            dim_max: 3,
            presheaves: 24,
            seed: 1,
            checks: CheckOptions::default(),
        }
    }
}

/// Runs `verb`. `Ok` means a verdict was reached, positive or negative.
pub fn run_command(verb: &str, args: &[String], ws: Option<&Workspace>, opts: &RunOptions) -> Result<CertificateReport> {
    let echo = std::iter::once(verb.to_string()).chain(args.iter().cloned()).collect::<Vec<_>>().join(" ");
    let source = match ws {
        Some(w) => w.emit(),
        None => format!("corpus {} {}", opts.field.map_or("all".into(), |f| f.to_string()), opts.dim_max),
    };
    let mut r = CertificateReport::new(echo, Verdict::Negative, digest(&source));
    let need = || ws.ok_or_else(|| Error::input(format!("`{verb}` needs a workspace (--workspace PATH)")));
    match verb {
        "check-monoid" => check_monoid(&mut r, need()?, args)?,
        "end-ring" => end_ring(&mut r, need()?, args)?,
        "localize" => localize(&mut r, need()?, args)?,
        "quotient" => quotient(&mut r, need()?, args)?,
        "quotient-ideal" => quotient_by_ideal(&mut r, need()?, args)?,
        "check-cover" => cover(&mut r, need()?, args)?,
        "certify-immersion" => immersion(&mut r, need()?, args)?,
        "check-conservative" => conservative(&mut r, need()?, args)?,
        "check-basechange" => basechange(&mut r, need()?, args)?,
        "integrality" => integrality(&mut r, need()?, args)?,
        "function-field" => field_of_fractions(&mut r, need()?, args)?,
        "glue" => glue(&mut r, need()?, args)?,
        "closed-subscheme" => subscheme(&mut r, need()?, args, opts.checks)?,
        "local-ring" => local_ring(&mut r, need()?, args, opts.checks)?,
        "cross-check" => cross_check(&mut r, ws, args, opts)?,
        "corpus-run" => corpus_run(&mut r, args, opts)?,
        _ => {
            return Err(Error::input(format!(
                "unknown verb `{verb}`; expected one of: {}",
                VERBS.join(", ")
            )))
        }
    }
    Ok(r)
}

fn usage(args: &[String], min: usize, text: &str) -> Result<()> {
    if args.len() < min {
        return Err(Error::input(format!("usage: {text}")));
    }
    Ok(())
}

fn show(v: &[Scalar]) -> String {
    let parts: Vec<String> = v.iter().map(|s| s.to_string()).collect();
    format!("[{}]", parts.join(" "))
}

fn dims(d: &[usize]) -> String {
    let parts: Vec<String> = d.iter().map(usize::to_string).collect();
    format!("[{}]", parts.join(" "))
}

fn ring_of(ws: &Workspace, name: &str) -> Result<EndRing> {
    EndRing::new(ws.monoid(name)?)
}

/// An element argument: a declared element of `monoid`, or literal
/// global-section coordinates such as `[1 0]`.
fn element(ws: &Workspace, e: &EndRing, monoid: &str, arg: &str) -> Result<EndElement> {
    let section = if arg.starts_with('[') {
        let m = parse_matrix(ws.field, arg).map_err(|m| Error::input(format!("`{arg}`: {m}")))?;
        if m.rows() != 1 {
            return Err(Error::input(format!("`{arg}` is not a single row")));
        }
        m.row(0).to_vec()
    } else {
        let d = ws.element_decl(arg)?;
        if d.of != monoid {
            return Err(Error::input(format!("element `{arg}` belongs to `{}`, not `{monoid}`", d.of)));
        }
        d.section.clone()
    };
    e.from_section(&section)
}

fn elements(ws: &Workspace, e: &EndRing, monoid: &str, args: &[String]) -> Result<Vec<EndElement>> {
    args.iter().map(|a| element(ws, e, monoid, a)).collect()
}

fn coords(ts: &[EndElement]) -> Vec<Vec<String>> {
    ts.iter().map(|t| strings(t.coords())).collect()
}

fn ring_map(source: &StructureRing, target: &StructureRing, m: &Matrix) -> Witness {
    Witness::RingMap {
        source: Table::of(source),
        target: Table::of(target),
        matrix: matrix_rows(m),
    }
}

/// Multiplication table of `a` at `site`, for nonempty sites.
fn site_table(a: &MonoidObject, site: usize) -> Table {
    Table::from_mult(a.mult().component(site), &a.unit().component(site).column(0))
}

fn instance_facts(r: &mut CertificateReport, a: &MonoidObject) {
    let inst = a.instance();
    let kind = match inst.space() {
        None => "vector spaces".to_string(),
        Some(s) => format!("presheaves on {} opens", s.len()),
    };
    r.fact("instance", kind).fact("carrier.dims", dims(a.carrier().dims()));
}

fn check_monoid(r: &mut CertificateReport, ws: &Workspace, args: &[String]) -> Result<()> {
    usage(args, 1, "check-monoid MONOID")?;
    let a = ws.monoid_unchecked(&args[0])?;
    instance_facts(r, a);
    let c = a.check();
    r.fact("failures", c.failures.len());
    for (k, f) in c.failures.iter().enumerate() {
        r.fact(
            &format!("failure.{k}"),
            format!("{} at `{}` on basis {:?}", f.axiom, f.site, f.basis),
        );
    }
    if c.pass {
        r.verdict = Verdict::Positive;
        for s in 0..a.instance().sites() {
            if a.carrier().dim(s) > 0 {
                r.witness(Witness::Algebra {
                    site: a.instance().site_name(s),
                    table: site_table(a, s),
                });
            }
        }
        if r.witnesses.is_empty() {
            r.fact("note", "zero monoid: every axiom holds vacuously");
            r.witness(Witness::Stabilization { dims: vec![0], index: 0 });
        }
    }
    Ok(())
}

fn end_ring(r: &mut CertificateReport, ws: &Workspace, args: &[String]) -> Result<()> {
    usage(args, 1, "end-ring MONOID")?;
    let e = ring_of(ws, &args[0])?;
    let a = e.monoid();
    instance_facts(r, a);
    r.fact("dim", e.dim());
    for i in 0..e.dim() {
        r.fact(&format!("basis.{i}.section"), show(&e.section(&e.basis_element(i))));
    }
    let top = a.instance().top();
    let target = site_table(a, top);
    r.verdict = Verdict::Positive;
    r.witness(Witness::RingMap {
        source: Table::of(e.ring()),
        target,
        matrix: matrix_rows(&e.section_matrix()),
    });
    Ok(())
}

/// Dimensions of `ker t^k` for `k = 0, 1, ...` until two agree, summed over
/// sites.
fn kernel_chain(e: &EndRing, t: &EndElement) -> (Vec<usize>, usize) {
    let t_a = e.endomorphism(t);
    let total = e.monoid().carrier().total_dim();
    let mut out = Vec::new();
    for k in 0..=total + 1 {
        let nullity: usize = t_a
            .components()
            .iter()
            .map(|m| m.cols() - m.pow(k).rank())
            .sum();
        out.push(nullity);
        if out.len() >= 2 && out[out.len() - 1] == out[out.len() - 2] {
            let index = out.len() - 2;
            return (out, index);
        }
    }
    let index = out.len() - 1;
    (out, index)
}

fn localization_facts(r: &mut CertificateReport, l: &LocalizationResult) {
    let b = l.localized();
    r.fact("element", show(l.element.coords()))
        .fact("index", l.index)
        .fact("localized.dims", dims(b.carrier().dims()))
        .fact("localized.end-ring.dim", l.target_ring.dim());
    for s in 0..b.instance().sites() {
        if b.carrier().dim(s) > 0 {
            let site = b.instance().site_name(s);
            r.fact(&format!("localized.mult.{site}"), format_matrix(b.mult().component(s)));
            r.fact(&format!("localized.unit.{site}"), format_matrix(b.unit().component(s)));
        }
    }
}

fn localize(r: &mut CertificateReport, ws: &Workspace, args: &[String]) -> Result<()> {
    usage(args, 2, "localize MONOID ELEMENT...")?;
    let e = ring_of(ws, &args[0])?;
    let ts = elements(ws, &e, &args[0], &args[1..])?;
    let l = if ts.len() == 1 {
        localize_element(&e, &ts[0])?
    } else {
        localize_multset(&e, &MultSet::new(ts))?
    };
    localization_facts(r, &l);
    let target = l.target_ring.ring();
    let x = l.image(&l.element);
    let y = target
        .inverse(x.coords())
        .ok_or_else(|| Error::self_test("t is not invertible in ℰ(A_t)"))?;
    let (chain, index) = kernel_chain(&e, &l.element);
    r.verdict = Verdict::Positive;
    r.witness(ring_map(e.ring(), target, &l.ring_map))
        .witness(Witness::Inverse {
            table: Table::of(target),
            x: strings(x.coords()),
            y: strings(&y),
        })
        .witness(Witness::Stabilization { dims: chain, index });
    Ok(())
}

fn quotient_facts(r: &mut CertificateReport, e: &EndRing, q: &QuotientResult) {
    let gens: Vec<_> = q.generators.iter().map(|g| g.coords().to_vec()).collect();
    let ideal = e.ring().ideal(&gens);
    r.fact("generators", q.generators.iter().map(|g| show(g.coords())).collect::<Vec<_>>().join(", "))
        .fact("quotient.dims", dims(q.quotient().carrier().dims()))
        .fact("quotient.end-ring.dim", q.target_ring.dim())
        .fact("ideal.dim", ideal.cols());
    r.verdict = Verdict::Positive;
    r.witness(ring_map(e.ring(), q.target_ring.ring(), &q.ring_map));
    match partition_of_unity(e, &q.generators) {
        Some(s) => r.witness(Witness::UnitIdeal {
            table: Table::of(e.ring()),
            elements: coords(&q.generators),
            coefficients: coords(&s),
        }),
        None => r.witness(Witness::ProperIdeal {
            table: Table::of(e.ring()),
            generators: coords(&q.generators),
            ideal: (0..ideal.cols()).map(|c| strings(&ideal.column(c))).collect(),
        }),
    };
}

fn quotient(r: &mut CertificateReport, ws: &Workspace, args: &[String]) -> Result<()> {
    usage(args, 1, "quotient MONOID ELEMENT...")?;
    let e = ring_of(ws, &args[0])?;
    let ts = elements(ws, &e, &args[0], &args[1..])?;
    let q = quotient_sequence(&e, &ts)?;
    quotient_facts(r, &e, &q);
    Ok(())
}

fn quotient_by_ideal(r: &mut CertificateReport, ws: &Workspace, args: &[String]) -> Result<()> {
    usage(args, 1, "quotient-ideal MONOID GENERATOR... [: GENERATOR...]")?;
    let e = ring_of(ws, &args[0])?;
    let rest = &args[1..];
    let (first, second) = match rest.iter().position(|a| a == ":") {
        Some(k) => (&rest[..k], Some(&rest[k + 1..])),
        None => (rest, None),
    };
    let j = IdealHandle::new(&e, elements(ws, &e, &args[0], first)?)?;
    let alt = second
        .map(|g| IdealHandle::new(&e, elements(ws, &e, &args[0], g)?))
        .transpose()?;
    let q = quotient_ideal(&e, &j, alt.as_ref())?;
    quotient_facts(r, &e, &q);
    r.fact("ideal.proper", j.proper);
    if alt.is_some() {
        r.fact("generator-independent", true);
    }
    Ok(())
}

fn cover(r: &mut CertificateReport, ws: &Workspace, args: &[String]) -> Result<()> {
    usage(args, 1, "check-cover MONOID ELEMENT...")?;
    let e = ring_of(ws, &args[0])?;
    let ts = elements(ws, &e, &args[0], &args[1..])?;
    let c = check_cover(&e, &ts)?;
    if !c.verify(&e) {
        return Err(Error::self_test("cover certificate fails its own check"));
    }
    r.fact("elements", c.elements.iter().map(|t| show(t.coords())).collect::<Vec<_>>().join(", "));
    if c.positive {
        r.verdict = Verdict::Positive;
        r.witness(Witness::UnitIdeal {
            table: Table::of(e.ring()),
            elements: coords(&c.elements),
            coefficients: coords(&c.coefficients),
        });
    } else {
        let ideal = c.proper_ideal.clone().unwrap_or_else(|| Matrix::zeros(e.field(), e.dim(), 0));
        r.fact("reason", "the elements generate a proper ideal of ℰ(A)");
        r.witness(Witness::ProperIdeal {
            table: Table::of(e.ring()),
            generators: coords(&c.elements),
            ideal: (0..ideal.cols()).map(|k| strings(&ideal.column(k))).collect(),
        });
    }
    Ok(())
}

fn immersion_facts(r: &mut CertificateReport, c: &ImmersionCertificate) {
    r.fact("epi", c.epi.pass)
        .fact("epi.source.dim", c.epi.source_dim)
        .fact("epi.target.dim", c.epi.target_dim)
        .fact("epi.tensor.dim", c.epi.tensor_dim)
        .fact("flat", c.flat.pass)
        .fact("flat.basis", serde_json::to_value(c.flatness).map(|v| v.as_str().unwrap_or("").to_string()).unwrap_or_default())
        .fact("finite-presentation", c.finite_presentation);
    for (k, p) in c.flat.probes.iter().enumerate() {
        r.fact(
            &format!("probe.{k}"),
            format!("{} -> {} exact={}", dims(&p.before), dims(&p.after), p.exact),
        );
    }
}

fn immersion(r: &mut CertificateReport, ws: &Workspace, args: &[String]) -> Result<()> {
    usage(args, 1, "certify-immersion MAP | certify-immersion MONOID ELEMENT")?;
    let (c, witness) = if args.len() == 1 {
        let f = ws.map(&args[0])?;
        let c = certify_open_immersion(f)?;
        let (ea, eb) = (EndRing::new(f.source())?, EndRing::new(f.target())?);
        let ef = e_of_morphism(f, &ea, &eb)?;
        (c, ring_map(ea.ring(), eb.ring(), &ef))
    } else {
        let e = ring_of(ws, &args[0])?;
        let l = localize_element(&e, &element(ws, &e, &args[0], &args[1])?)?;
        let c = certify_localization(&l)?;
        (c, ring_map(e.ring(), l.target_ring.ring(), &l.ring_map))
    };
    immersion_facts(r, &c);
    if c.positive {
        r.verdict = Verdict::Positive;
        r.witness(witness);
    }
    Ok(())
}

fn conservative(r: &mut CertificateReport, ws: &Workspace, args: &[String]) -> Result<()> {
    usage(args, 3, "check-conservative MONOID MODULE-MAP ELEMENT...")?;
    let e = ring_of(ws, &args[0])?;
    let u = ws.modmap(&args[1])?;
    let ts = elements(ws, &e, &args[0], &args[2..])?;
    let c = conservativity_check(&e, &ts, u)?;
    r.fact("partition", c.partition)
        .fact("global.iso", c.global.iso)
        .fact("global.kernel.dim", c.global.kernel_dim)
        .fact("global.cokernel.dim", c.global.cokernel_dim);
    for (k, l) in c.local.iter().enumerate() {
        r.fact(
            &format!("local.{k}"),
            format!("iso={} kernel={} cokernel={}", l.iso, l.kernel_dim, l.cokernel_dim),
        );
    }
    match partition_of_unity(&e, &ts) {
        Some(s) if c.partition => {
            r.verdict = Verdict::Positive;
            r.witness(Witness::UnitIdeal {
                table: Table::of(e.ring()),
                elements: coords(&ts),
                coefficients: coords(&s),
            });
        }
        _ => {
            let gens: Vec<_> = ts.iter().map(|t| t.coords().to_vec()).collect();
            let ideal = e.ring().ideal(&gens);
            r.fact("reason", "not a partition of unity: the elements generate a proper ideal");
            r.witness(Witness::ProperIdeal {
                table: Table::of(e.ring()),
                generators: coords(&ts),
                ideal: (0..ideal.cols()).map(|k| strings(&ideal.column(k))).collect(),
            });
        }
    }
    Ok(())
}

fn basechange(r: &mut CertificateReport, ws: &Workspace, args: &[String]) -> Result<()> {
    usage(args, 2, "check-basechange MONOID ELEMENT GENERATOR... | check-basechange MAP GENERATOR...")?;
    let (e, f, gens, witness) = if let Ok(f) = ws.map(&args[0]) {
        let e = EndRing::new(f.source())?;
        let source = ws
            .monoid_names()
            .into_iter()
            .find(|n| ws.monoid_unchecked(n).is_ok_and(|a| a == f.source()))
            .ok_or_else(|| Error::input("map source is not a declared monoid"))?;
        let gens = elements(ws, &e, &source, &args[1..])?;
        let eb = EndRing::new(f.target())?;
        let w = ring_map(e.ring(), eb.ring(), &e_of_morphism(f, &e, &eb)?);
        (e, f.clone(), gens, w)
    } else {
        usage(args, 3, "check-basechange MONOID ELEMENT GENERATOR...")?;
        let e = ring_of(ws, &args[0])?;
        let l = localize_element(&e, &element(ws, &e, &args[0], &args[1])?)?;
        let gens = elements(ws, &e, &args[0], &args[2..])?;
        let w = ring_map(e.ring(), l.target_ring.ring(), &l.ring_map);
        (e, l.structure, gens, w)
    };
    let q = quotient_sequence(&e, &gens)?;
    let b = base_change_quotient(&q, &f)?;
    r.fact("tensor.dim", b.tensor_dim)
        .fact("quotient.dim", b.quotient_dim)
        .fact("extended-ideal.dim", b.extended_ideal_dim)
        .fact("iso", b.iso);
    r.verdict = Verdict::Positive;
    r.witness(witness);
    Ok(())
}

fn failure_witnesses(r: &mut CertificateReport, e: &EndRing, failures: &[IntegralFailure]) {
    let table = Table::of(e.ring());
    if let Some(n) = e.ring().nilpotent_witness() {
        r.witness(Witness::Nilpotent {
            table: table.clone(),
            x: strings(&n.element),
            power: n.index,
        });
    }
    for f in failures {
        if let IntegralFailure::NotDomain { x, y } = f {
            r.witness(Witness::ZeroDivisor {
                table: table.clone(),
                x: strings(x),
                y: strings(y),
            });
        }
    }
}

fn integrality(r: &mut CertificateReport, ws: &Workspace, args: &[String]) -> Result<()> {
    usage(args, 1, "integrality MONOID")?;
    let e = ring_of(ws, &args[0])?;
    let v = is_integral(&e)?;
    let reduced = is_reduced(&e);
    let probe = irreducibility_probe(&e, &default_probe_pairs(&e))?;
    r.fact("integral", v.integral)
        .fact("reduced", reduced.reduced)
        .fact("nilradical.dim", reduced.nilradical_dim)
        .fact("weakly-integral", is_weakly_integral(&e).is_domain())
        .fact("route", v.route)
        .fact("failures", describe_failures(&v.failures))
        .fact("probe.pairs", probe.pairs.len())
        .fact("probe.all-nonzero", probe.all_nonzero)
        .fact("probe.informational", probe.informational);
    match &v.fraction {
        Some(k) if v.integral => {
            r.verdict = Verdict::Positive;
            let target = k.target_ring.ring();
            r.witness(ring_map(e.ring(), target, &k.ring_map));
            for i in 0..e.dim() {
                let x = k.image(&e.basis_element(i));
                if let Some(y) = target.inverse(x.coords()) {
                    r.witness(Witness::Inverse {
                        table: Table::of(target),
                        x: strings(x.coords()),
                        y: strings(&y),
                    });
                }
            }
        }
        _ => failure_witnesses(r, &e, &v.failures),
    }
    Ok(())
}

fn field_of_fractions(r: &mut CertificateReport, ws: &Workspace, args: &[String]) -> Result<()> {
    usage(args, 1, "function-field MONOID")?;
    let e = ring_of(ws, &args[0])?;
    let v = is_integral(&e)?;
    if !v.integral {
        r.fact("reason", format!("not integral: {}", describe_failures(&v.failures)));
        failure_witnesses(r, &e, &v.failures);
        return Ok(());
    }
    let k = function_field(&e)?;
    r.fact("dim", k.field.dim())
        .fact("inverses", k.inverses.len())
        .fact("stable-under", k.stable_under.len());
    r.verdict = Verdict::Positive;
    r.witness(ring_map(e.ring(), &k.field, &k.from_ring));
    for (x, y) in &k.inverses {
        r.witness(Witness::Inverse {
            table: Table::of(&k.field),
            x: strings(x),
            y: strings(y),
        });
    }
    Ok(())
}

/// Charts and overlap data of a declared scheme.
fn scheme_data(ws: &Workspace, name: &str) -> Result<(Vec<MonoidObject>, Vec<OverlapSpec>)> {
    let s = ws.scheme_decl(name)?;
    let charts = s
        .charts
        .iter()
        .map(|c| ws.monoid(c).cloned())
        .collect::<Result<Vec<_>>>()?;
    let mut specs = Vec::with_capacity(s.overlaps.len());
    for o in &s.overlaps {
        let (ei, ej) = (EndRing::new(&charts[o.i])?, EndRing::new(&charts[o.j])?);
        let t_ij = element(ws, &ei, &s.charts[o.i], &o.t_ij)?;
        let t_ji = element(ws, &ej, &s.charts[o.j], &o.t_ji)?;
        let (li, lj) = (localize_element(&ei, &t_ij)?, localize_element(&ej, &t_ji)?);
        let (src, tgt) = (li.localized().carrier(), lj.localized().carrier());
        let inst = src.instance();
        let mut transition: Vec<Matrix> = (0..inst.sites())
            .map(|s| Matrix::zeros(ws.field, tgt.dim(s), src.dim(s)))
            .collect();
        for (site, m) in &o.at {
            let k = match inst.space() {
                None if site == "*" => 0,
                None => return Err(Error::input(format!("site `{site}`: plain vector spaces use `*`"))),
                Some(sp) => sp
                    .index_of(site)
                    .ok_or_else(|| Error::input(format!("unknown open `{site}`")))?,
            };
            transition[k] = m.clone();
        }
        specs.push(OverlapSpec {
            i: o.i,
            j: o.j,
            t_ij,
            t_ji,
            transition,
        });
    }
    Ok((charts, specs))
}

fn glued(ws: &Workspace, name: &str) -> Result<GluedScheme> {
    let (charts, specs) = scheme_data(ws, name)?;
    glue_check(&charts, &specs)?.map_err(|reason| Error::input(format!("scheme `{name}` does not glue: {reason}")))
}

fn glue(r: &mut CertificateReport, ws: &Workspace, args: &[String]) -> Result<()> {
    usage(args, 1, "glue SCHEME")?;
    let (charts, specs) = scheme_data(ws, &args[0])?;
    r.fact("charts", charts.len()).fact("overlaps", specs.len());
    match glue_check(&charts, &specs)? {
        Ok(x) => {
            r.verdict = Verdict::Positive;
            r.fact("triples", x.triples_checked).fact("global.dim", x.global_dim);
            for (k, c) in x.charts.iter().enumerate() {
                r.witness(Witness::Algebra {
                    site: format!("chart {k}"),
                    table: Table::of(c.ring.ring()),
                });
            }
            for o in &x.overlaps {
                r.witness(ring_map(o.from_i.target_ring.ring(), o.from_j.target_ring.ring(), &o.e_phi));
            }
        }
        Err(reason) => {
            r.fact("reason", reason);
        }
    }
    Ok(())
}

fn ideal_sheaf(ws: &Workspace, name: &str) -> Result<(GluedScheme, QcIdealSheaf)> {
    let decl = ws.ideals_decl(name)?;
    let s = ws.scheme_decl(&decl.on)?;
    let x = glued(ws, &decl.on)?;
    let gens = decl
        .charts
        .iter()
        .zip(&x.charts)
        .zip(&s.charts)
        .map(|((g, chart), monoid)| elements(ws, &chart.ring, monoid, g))
        .collect::<Result<Vec<_>>>()?;
    let j = QcIdealSheaf::new(&x, gens)?;
    Ok((x, j))
}

fn sheaf_facts(r: &mut CertificateReport, j: &QcIdealSheaf) {
    r.fact("sheaf.valid", j.valid);
    for c in &j.checks {
        r.fact(&format!("overlap.{}-{}", c.i, c.j), if c.pass { "agree" } else { "disagree" });
    }
}

/// Consistency of a closed subscheme or local ring; a failure contradicts
/// the theory rather than the input.
fn subscheme_agree(checks: CheckOptions, ok: bool, what: impl FnOnce() -> String) -> Result<()> {
    if ok != (checks.fault == Some(9)) {
        return Ok(());
    }
    Err(Error::self_test(format!("{}: {}", CRITERIA[8], what())))
}

fn subscheme(r: &mut CertificateReport, ws: &Workspace, args: &[String], checks: CheckOptions) -> Result<()> {
    usage(args, 1, "closed-subscheme IDEAL-SHEAF")?;
    let (x, j) = ideal_sheaf(ws, &args[0])?;
    sheaf_facts(r, &j);
    if !j.valid {
        r.fact("reason", "the chart ideals do not agree on an overlap");
        return Ok(());
    }
    let y = closed_subscheme(&x, &j)?;
    r.fact("empty", y.empty).fact("global.dim", y.glued.global_dim);
    for (k, q) in y.quotients.iter().enumerate() {
        r.fact(&format!("chart.{k}.dims"), dims(q.quotient().carrier().dims()));
    }
    for (k, b) in y.base_change.iter().enumerate() {
        r.fact(
            &format!("base-change.{k}"),
            format!("tensor={} quotient={} iso={}", b.tensor_dim, b.quotient_dim, b.iso),
        );
        subscheme_agree(checks, b.iso && b.tensor_dim == b.quotient_dim, || {
            format!("base-change square {k} is not an isomorphism")
        })?;
    }
    r.verdict = Verdict::Positive;
    for q in &y.quotients {
        r.witness(ring_map(q.source_ring.ring(), q.target_ring.ring(), &q.ring_map));
    }
    Ok(())
}

fn local_ring(r: &mut CertificateReport, ws: &Workspace, args: &[String], checks: CheckOptions) -> Result<()> {
    usage(args, 1, "local-ring IDEAL-SHEAF")?;
    let (x, j) = ideal_sheaf(ws, &args[0])?;
    if !j.valid {
        return Err(Error::input("the ideal sheaf is not quasi-coherent; see closed-subscheme"));
    }
    let y = closed_subscheme(&x, &j)?;
    let o = local_ring_at(&x, &y)?;
    r.fact("chart", o.chart)
        .fact("dim", o.ring.dim())
        .fact("maximal.dim", o.maximal.cols())
        .fact("maximal.nilpotency", o.maximal_nilpotency)
        .fact("residue.dim", o.residue.dim())
        .fact("units-verified", o.units_verified)
        .fact("pairs-agree", o.pairs_agree)
        .fact(
            "chart-independent",
            o.chart_independent.map_or("single chart".to_string(), |b| b.to_string()),
        );
    let local = o.units_verified > 0 && o.residue.dim() + o.maximal.cols() == o.ring.dim();
    subscheme_agree(checks, local && o.pairs_agree && o.chart_independent != Some(false), || {
        "the local ring fails locality or depends on the construction".to_string()
    })?;
    r.verdict = Verdict::Positive;
    r.witness(ring_map(&o.ring, &o.residue, &o.residue_map));
    for c in 0..o.maximal.cols() {
        r.witness(Witness::Nilpotent {
            table: Table::of(&o.ring),
            x: strings(&o.maximal.column(c)),
            power: o.maximal_nilpotency,
        });
    }
    Ok(())
}

fn tally_facts(r: &mut CertificateReport, tallies: &[SuiteTally]) -> usize {
    let mut total = 0;
    for t in tallies {
        let counts: Vec<String> = t.counts.iter().filter(|(_, &n)| n > 0).map(|(k, n)| format!("{k}={n}")).collect();
        r.fact(
            &format!("suite.{}", t.name),
            format!(
                "dim={} integral={} reduced={} domain={} {}",
                t.dim,
                t.integral,
                t.reduced,
                t.domain,
                counts.join(" ")
            ),
        );
    }
    for (c, name) in CRITERIA.iter().enumerate().take(8) {
        let n: usize = tallies.iter().map(|t| t.count(c + 1)).sum();
        r.fact(&format!("total.{name}"), n);
        total += n;
    }
    total
}

fn finish_battery(r: &mut CertificateReport, checks: usize) {
    r.fact("discrepancies", 0);
    r.verdict = Verdict::Positive;
    r.witness(Witness::Tally {
        checks,
        discrepancies: 0,
    });
}

fn cross_check(r: &mut CertificateReport, ws: Option<&Workspace>, args: &[String], opts: &RunOptions) -> Result<()> {
    let Some(ws) = ws else {
        let fields = match opts.field {
            Some(f) => vec![f],
            None => vec![Field::Prime(2), Field::Prime(3), Field::Rational],
        };
        let mut tallies = Vec::new();
        for f in &fields {
            tallies.extend(corpus_suite(&corpus_generate(*f, opts.dim_max)?, opts.checks)?);
        }
        let mut checks = tally_facts(r, &tallies);
        let mut presheaves = 0;
        for f in &fields {
            presheaves += presheaf_suite(*f, opts.presheaves, opts.seed, opts.checks)?;
        }
        r.fact("total.presheaf", presheaves);
        checks += presheaves;
        finish_battery(r, checks);
        return Ok(());
    };
    let names: Vec<String> = if args.is_empty() { ws.monoid_names() } else { args.to_vec() };
    let mut tallies = Vec::new();
    let mut presheaves = 0;
    for name in &names {
        let a = ws.monoid(name)?;
        if !a.instance().is_presheaf() {
            tallies.push(monoid_suite(name, a, opts.checks)?);
            continue;
        }
        presheaves += global_sections_check(a.carrier(), opts.checks).map(|_| 1)?;
        let inst = a.instance();
        for s in 0..inst.sites() {
            if a.carrier().dim(s) == 0 {
                continue;
            }
            let site = MonoidObject::finvect(
                ws.field,
                a.mult().component(s).clone(),
                a.unit().component(s).column(0),
            )?;
            tallies.push(monoid_suite(&format!("{name}@{}", inst.site_name(s)), &site, opts.checks)?);
        }
    }
    let checks = tally_facts(r, &tallies) + presheaves;
    r.fact("total.presheaf", presheaves);
    finish_battery(r, checks);
    Ok(())
}

fn corpus_run(r: &mut CertificateReport, args: &[String], opts: &RunOptions) -> Result<()> {
    if !args.is_empty() {
        return Err(Error::input("usage: corpus-run [--field F] [--dim-max N]"));
    }
    let field = opts.field.unwrap_or(Field::Prime(2));
    let corpus = corpus_generate(field, opts.dim_max)?;
    r.fact("field", field).fact("dim-max", opts.dim_max).fact("monoids", corpus.len());
    let tallies = corpus_suite(&corpus, opts.checks)?;
    let mut checks = tally_facts(r, &tallies);
    let presheaves = presheaf_suite(field, opts.presheaves, opts.seed, opts.checks)?;
    r.fact("total.presheaf", presheaves);
    checks += presheaves;
    finish_battery(r, checks);
    Ok(())
}
