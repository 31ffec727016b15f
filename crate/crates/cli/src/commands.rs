//! Subcommands. Each returns a verdict, a JSON result and text lines.

use serde::Serialize;
use serde_json::{json, Value};

use excomp::bhk::{Context, Interpreter, Signature};
use excomp::cetcs::{audit, check_weakly_lextensive, check_wellpointed, AuditSuite, DepProdSpec};
use excomp::depprod::{
    build_dependent_product, check_family_properties, iso_to_oracle, oracle_dependent_product,
    verify_universal_property,
};
use excomp::excompletion::{ex_compose, ex_eq, is_cover, is_iso, is_mono, ExCompletion};
use excomp::finset::compose;
use excomp::fullness::{build_full_family, check_fullness};
use excomp::qcart::{find_pseudo_eqrel_witnesses, is_choice_object, weak_equalizer, weak_pullback};
use excomp::{Limits, WeakLimitStrategy};

use crate::formula::{parse_context, parse_formula};
use crate::instance::Instance;

pub const SCHEMA: &str = "excomp-report";
pub const VERSION: u32 = 1;

#[derive(Clone, Copy, Debug)]
pub struct Settings {
    pub strategy: WeakLimitStrategy,
    pub seed: u64,
    pub limits: Limits,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad invocation or unparsable input: exit status 2.
    Usage(String),
    /// The command could not complete: exit status 1.
    Runtime(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Runtime(m) => f.write_str(m),
        }
    }
}

impl From<excomp::Error> for CliError {
    fn from(e: excomp::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub struct Outcome {
    pub passed: bool,
    pub result: Value,
    pub text: Vec<String>,
}

#[derive(Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub version: u32,
    pub command: String,
    pub strategy: WeakLimitStrategy,
    pub seed: u64,
    pub passed: bool,
    pub result: Value,
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn check_base(inst: &Instance, s: &Settings) -> Result<Outcome, CliError> {
    let mut passed = true;
    let mut text = Vec::new();
    let mut sets = Vec::new();
    for (name, set) in &inst.sets {
        let choice = set.len() > s.limits.max_carrier || is_choice_object(set);
        passed &= choice;
        text.push(format!("set {name}: {} elements, choice object: {}", set.len(), yes(choice)));
        sets.push(json!({"name": name, "size": set.len(), "choice": choice}));
    }

    let mut relations = Vec::new();
    for (name, span) in &inst.relations {
        if span.left_foot() != span.right_foot() {
            continue;
        }
        let equivalence = span.image().is_equivalence();
        let witnesses = find_pseudo_eqrel_witnesses(span, s.strategy)?.is_ok();
        let agree = equivalence == witnesses;
        passed &= agree;
        text.push(format!(
            "relation {name}: equivalence {}, witnesses found {}",
            yes(equivalence),
            yes(witnesses)
        ));
        relations.push(json!({"name": name, "equivalence": equivalence, "witnesses": witnesses}));
    }

    let mut limits = Vec::new();
    let names: Vec<&String> = inst.maps.keys().collect();
    for (k, a) in names.iter().enumerate() {
        for b in &names[k..] {
            let (f, g) = (&inst.maps[*a], &inst.maps[*b]);
            if f.cod() == g.cod() {
                let wpb = weak_pullback(f, g, s.strategy)?;
                let commutes = compose(f, wpb.left())? == compose(g, wpb.right())?;
                let universal = f.dom().elements().all(|x| {
                    g.dom().elements().all(|y| {
                        f.apply(x) != g.apply(y)
                            || wpb.apex().elements().any(|p| wpb.left().apply(p) == x && wpb.right().apply(p) == y)
                    })
                });
                passed &= commutes && universal;
                text.push(format!(
                    "weak pullback of {a}, {b}: {} elements, weakly universal: {}",
                    wpb.apex().len(),
                    yes(commutes && universal)
                ));
                limits.push(json!({"kind": "weak_pullback", "maps": [a, b], "apex": wpb.apex().len(), "ok": commutes && universal}));
            }
            if a != b && f.dom() == g.dom() && f.cod() == g.cod() {
                let (_, e) = weak_equalizer(f, g, s.strategy)?;
                let equalizes = compose(f, &e)? == compose(g, &e)?;
                let universal = f.dom().elements().all(|x| f.apply(x) != g.apply(x) || e.in_image(x));
                passed &= equalizes && universal;
                text.push(format!(
                    "weak equalizer of {a}, {b}: {} elements, weakly universal: {}",
                    e.dom().len(),
                    yes(equalizes && universal)
                ));
                limits.push(json!({"kind": "weak_equalizer", "maps": [a, b], "apex": e.dom().len(), "ok": equalizes && universal}));
            }
        }
    }
    Ok(Outcome {
        passed,
        result: json!({"sets": sets, "relations": relations, "limits": limits}),
        text,
    })
}

pub fn complete(inst: &Instance, s: &Settings) -> Result<Outcome, CliError> {
    let ex = ExCompletion::new(s.strategy);
    let mut passed = true;
    let mut text = Vec::new();
    let mut objects = Vec::new();
    for name in inst.sets.keys() {
        let obj = match inst.object(&ex, name) {
            Ok(o) => o,
            Err(e) => {
                passed = false;
                text.push(format!("object {name}: {e}"));
                objects.push(json!({"name": name, "error": e.to_string()}));
                continue;
            }
        };
        let classes: Vec<Vec<String>> = obj
            .classes()
            .iter()
            .map(|c| c.iter().map(|&x| obj.carrier().label(x)).collect())
            .collect();
        // the kernel pair of the quotient map relates exactly the related pairs
        let q = ex.quotient(&obj);
        let kp = ex.kernel_pair(&q)?;
        let round_trip = kp.relation() == *obj.relation();
        passed &= round_trip;
        text.push(format!(
            "object {name}: {} classes {:?}, quotient/kernel-pair round trip: {}",
            classes.len(),
            classes,
            yes(round_trip)
        ));
        objects.push(json!({"name": name, "classes": classes, "round_trip": round_trip}));
    }
    let mut arrows = Vec::new();
    for name in inst.maps.keys() {
        match inst.arrow(&ex, name) {
            Ok(f) => {
                let (cover, mono, iso) = (is_cover(&f), is_mono(&f), is_iso(&f)?);
                let (c, m) = ex.image_factorization(&f)?;
                let factors = is_cover(&c) && is_mono(&m) && ex_eq(&ex_compose(&m, &c)?, &f)?;
                passed &= factors && iso == (cover && mono);
                text.push(format!(
                    "arrow {name}: cover {}, mono {}, iso {}, image factorization {}",
                    yes(cover),
                    yes(mono),
                    yes(iso),
                    yes(factors)
                ));
                arrows.push(json!({"name": name, "cover": cover, "mono": mono, "iso": iso, "factorization": factors}));
            }
            Err(e) => {
                text.push(format!("map {name}: not an arrow of the completion ({e})"));
                arrows.push(json!({"name": name, "error": e}));
            }
        }
    }
    Ok(Outcome {
        passed,
        result: json!({"objects": objects, "arrows": arrows}),
        text,
    })
}

pub fn bhk(inst: &Instance, s: &Settings, formula: &str, context: &str) -> Result<Outcome, CliError> {
    let phi = parse_formula(formula, &inst.sets).map_err(|e| CliError::Usage(format!("formula: {e}")))?;
    let vars = parse_context(context).map_err(|e| CliError::Usage(format!("context: {e}")))?;
    let mut ctx = Context::empty();
    for (v, set) in &vars {
        let sort = inst.set(set).map_err(CliError::Usage)?;
        ctx = ctx.extend(v, sort);
    }
    let mut sig = Signature::default();
    for (name, map) in &inst.maps {
        sig = sig.with_map(name, map.clone());
    }
    for (name, span) in &inst.relations {
        sig = sig.with_relation(name, span.as_presubobject());
    }
    let interp = Interpreter::new(s.strategy, s.limits);
    let p = interp.interpret(&phi, &ctx, &sig)?;
    let holds = p.elements();
    let satisfied: Vec<Vec<String>> = ctx
        .object()
        .elements()
        .filter(|&e| holds[e])
        .map(|e| {
            ctx.decode(e)
                .iter()
                .zip(ctx.vars())
                .map(|(&x, (v, sort))| format!("{v}={}", sort.label(x)))
                .collect()
        })
        .collect();
    let mut text = vec![
        format!("formula: {phi}"),
        format!("evidence: {} elements", p.rep().dom().len()),
        format!("holds at {} of {} points", satisfied.len(), ctx.object().len()),
    ];
    text.extend(satisfied.iter().map(|t| format!("  {}", if t.is_empty() { "()".into() } else { t.join(", ") })));
    Ok(Outcome {
        passed: true,
        result: json!({
            "formula": phi.to_string(),
            "context": vars,
            "evidence": p.rep().dom().len(),
            "points": ctx.object().len(),
            "satisfied": satisfied,
        }),
        text,
    })
}

/// `f` and `g` as named on the command line or through a pair.
pub fn resolve_pair<'a>(inst: &'a Instance, f: Option<&'a str>, g: Option<&'a str>, pair: Option<&'a str>) -> Result<(&'a str, &'a str), CliError> {
    match (f, g, pair) {
        (Some(f), Some(g), None) => Ok((f, g)),
        (None, None, Some(p)) => inst
            .doc
            .pairs
            .get(p)
            .map(|d| (d.f.as_str(), d.g.as_str()))
            .ok_or_else(|| CliError::Usage(format!("unknown pair `{p}`"))),
        _ => Err(CliError::Usage("give either --f and --g or --pair".into())),
    }
}

pub fn fullness(inst: &Instance, s: &Settings, f: &str, g: &str) -> Result<Outcome, CliError> {
    let (fm, gm) = (inst.map(f).map_err(CliError::Usage)?, inst.map(g).map_err(CliError::Usage)?);
    for (name, set) in [("I", fm.cod()), ("X", fm.dom()), ("Y", gm.dom())] {
        s.limits.check_carrier(name, set)?;
    }
    let fam = build_full_family(fm, gm, s.limits)?;
    let props = excomp::fullness::check_family_properties(&fam);
    let report = check_fullness(&fam, s.limits)?;
    let passed = props.is_ok() && report.passed();
    let mut text = vec![
        format!("codes: {}", fam.codes().len()),
        format!("family properties: {}", props.as_ref().map_or_else(|e| e.clone(), |_| "ok".into())),
        format!("pseudo-relations checked: {}, covered: {}", report.relations_checked, report.covered),
    ];
    for miss in report.misses() {
        text.push(format!("  miss over index {}: {:?}", miss.index, miss.relation));
    }
    Ok(Outcome {
        passed,
        result: json!({
            "codes": fam.codes().len(),
            "family_properties": props.err(),
            "relations_checked": report.relations_checked,
            "covered": report.covered,
            "misses": report.misses().collect::<Vec<_>>(),
        }),
        text,
    })
}

pub fn depprod(inst: &Instance, s: &Settings, f: &str, g: &str, oracle: bool) -> Result<Outcome, CliError> {
    let ex = ExCompletion::new(s.strategy);
    let fa = inst.arrow(&ex, f).map_err(runtime)?;
    let ga = inst.arrow(&ex, g).map_err(runtime)?;
    let res = build_dependent_product(&fa, &ga, s.strategy, s.limits)?;
    let props = check_family_properties(&res);
    let univ = verify_universal_property(&res);
    let counts = res.classes_per_index();
    let mut passed = props.is_ok() && univ.passed();
    let mut text = vec![
        format!("codes: {}, classes: {}", res.g_obj.carrier().len(), res.g_obj.class_count()),
        format!("classes per index: {counts:?}"),
        format!("family properties: {}", props.as_ref().map_or_else(|e| e.clone(), |_| "ok".into())),
        format!(
            "universal property: {} functional relations, {} existence and {} uniqueness failures",
            univ.relations_checked, univ.existence_failures, univ.uniqueness_failures
        ),
    ];
    let mut result = json!({
        "codes": res.g_obj.carrier().len(),
        "classes": res.g_obj.class_count(),
        "classes_per_index": counts,
        "family_properties": props.err(),
        "universal": univ,
    });
    if oracle {
        let o = oracle_dependent_product(&fa, &ga)?;
        let iso = iso_to_oracle(&res, &o);
        passed &= iso.is_ok();
        match &iso {
            Ok(r) => text.push(format!("iso: yes, classes per index: {:?}", r.classes_per_index)),
            Err(e) => text.push(format!("iso: no ({e})")),
        }
        result["oracle"] = json!({
            "iso": iso.is_ok(),
            "sections_per_index": o.sections_per_index,
            "error": iso.err(),
        });
    }
    Ok(Outcome { passed, result, text })
}

pub fn cetcs(inst: Option<&Instance>, s: &Settings) -> Result<Outcome, CliError> {
    let mut suite = AuditSuite::bundled(s.seed)?;
    if let Some(inst) = inst {
        extend_suite(&mut suite, inst, s)?;
    }
    let report = audit(&suite, s.strategy, s.seed, s.limits)?;
    let lex = check_weakly_lextensive(s.strategy)?;
    let wp = check_wellpointed(s.strategy)?;
    let passed = report.passed() && lex.passed() && wp.passed();
    let mut text = Vec::new();
    for a in &report.axioms {
        let mut line = format!("{:<4} {:<8} {} [{}; {} checks]", a.id, a.verdict.label(), a.statement, a.evidence, a.checks);
        if let excomp::cetcs::Verdict::Skipped { reason } = &a.verdict {
            line.push_str(&format!(" ({reason})"));
        }
        if !a.skipped_instances.is_empty() {
            line.push_str(&format!(" ({} instances over the caps)", a.skipped_instances.len()));
        }
        text.push(line);
        if let excomp::cetcs::Verdict::Fail { witness, failures } = &a.verdict {
            text.push(format!("     {failures} failures; first: {:?}: {}", witness.probe, witness.detail));
        }
    }
    for law in [&lex, &wp] {
        for p in &law.properties {
            text.push(format!("{:<8} {}: {} [{} checks]", p.verdict.label(), law.name, p.property, p.checks));
        }
    }
    Ok(Outcome {
        passed,
        result: json!({"audit": report, "weakly_lextensive": lex, "well_pointed": wp}),
        text,
    })
}

/// Adds the document's objects and composable pairs that fit the size cap.
fn extend_suite(suite: &mut AuditSuite, inst: &Instance, s: &Settings) -> Result<(), CliError> {
    let ex = ExCompletion::new(s.strategy);
    let max = s.limits.max_carrier.min(3);
    let spec = |name: &str| -> Result<Vec<usize>, CliError> {
        let o = inst.object(&ex, name)?;
        Ok(o.carrier().elements().map(|x| o.class_of(x)).collect())
    };
    for name in inst.sets.keys() {
        let o = spec(name)?;
        if o.len() <= max && !suite.objects.contains(&o) {
            suite.objects.push(o);
        }
    }
    for def in inst.doc.pairs.values() {
        let (f, g) = (&inst.doc.maps[&def.f], &inst.doc.maps[&def.g]);
        let p = DepProdSpec {
            i: spec(&f.cod)?,
            x: spec(&f.dom)?,
            y: spec(&g.dom)?,
            f: inst.maps[&def.f].table().to_vec(),
            g: inst.maps[&def.g].table().to_vec(),
        };
        if [&p.i, &p.x, &p.y].iter().all(|o| o.len() <= s.limits.max_carrier) {
            suite.pairs.push(p);
        }
    }
    Ok(())
}
