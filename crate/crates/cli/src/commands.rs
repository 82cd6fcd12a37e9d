use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use anyhow::{anyhow, bail, ensure, Context as _, Result};
use serde::Serialize;
use serde_json::json;

use redprod_core::fragments::{
    approximate_by_grid, classify_classical, classify_fragment, eliminate_inf_step, encode_classical, grid_thresholds,
    mk_scp_instance, mk_scp_instance_classical, palyutin_to_horn, stability_criterion, ApproxGrid, ScpMonotonicity,
};
use redprod_core::products::{
    bipreservation_in, filter_from_generators, palyutin_equiv_in_pool, reduced_product_capped, Basis, DEFAULT_CAP,
};
use redprod_core::semantics::{eval as evaluate, tuple_at, tuple_count};
use redprod_core::syntax::{
    formula_bounds, is_identifier, parse_classical, parse_classical_inferred, parse_formula, parse_formula_inferred, parse_pl,
};
use redprod_core::{
    Assignment, ClassicalFormula, ClassicalSignature, FiniteFilter, FiniteMetricStructure, Formula, FragmentLabel,
    PLFunc, Rational, Signature,
};

use crate::file::{load_structure, structure_json};
use crate::{
    ApproxArgs, CheckArgs, EquivArgs, EvalArgs, FactorArgs, GenScpArgs, Mono, PreserveArgs, ProductArgs,
    SignatureSource, StabilityArgs, ToHornArgs, Verdict,
};

pub struct Context {
    pub json: bool,
    pub strict_lipschitz: bool,
}

impl Context {
    fn load(&self, path: &Path) -> Result<FiniteMetricStructure> {
        load_structure(path, self.strict_lipschitz)
    }

    fn emit(&self, value: &impl Serialize, text: impl FnOnce() -> String) -> Result<()> {
        if self.json {
            print(&serde_json::to_string_pretty(value)?)
        } else {
            print(&text())
        }
    }
}

/// Writes a line to standard output; a closed pipe is not an error.
fn print(text: &str) -> Result<()> {
    match writeln!(std::io::stdout().lock(), "{text}") {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

fn merge_named<T: Clone + PartialEq>(
    into: &mut Vec<T>,
    from: &[T],
    name: impl Fn(&T) -> &str,
    what: &str,
) -> Result<()> {
    for item in from {
        match into.iter().find(|x| name(x) == name(item)) {
            Some(existing) if existing != item => bail!("{what} `{}` is used inconsistently", name(item)),
            Some(_) => {}
            None => into.push(item.clone()),
        }
    }
    Ok(())
}

/// Signature inferred jointly from several continuous formulas.
fn infer_signature(texts: &[&str]) -> Result<Signature> {
    let mut sig = Signature::new(Rational::ONE);
    for text in texts {
        let (_, s) = parse_formula_inferred(text).with_context(|| format!("in `{text}`"))?;
        merge_named(&mut sig.constants, &s.constants, |c| c, "constant")?;
        merge_named(&mut sig.functions, &s.functions, |f| &f.name, "function")?;
        merge_named(&mut sig.predicates, &s.predicates, |p| &p.name, "predicate")?;
    }
    Ok(sig)
}

fn infer_classical(texts: &[&str]) -> Result<ClassicalSignature> {
    let mut sig = ClassicalSignature::default();
    for text in texts {
        let (_, s) = parse_classical_inferred(text).with_context(|| format!("in `{text}`"))?;
        merge_named(&mut sig.constants, &s.constants, |c| c, "constant")?;
        merge_named(&mut sig.functions, &s.functions, |f| &f.0, "function")?;
        merge_named(&mut sig.relations, &s.relations, |r| &r.0, "relation")?;
    }
    Ok(sig)
}

fn signature_for(ctx: &Context, source: &SignatureSource, texts: &[&str]) -> Result<Signature> {
    match &source.structure {
        Some(path) => Ok(ctx.load(path)?.signature),
        None => infer_signature(texts),
    }
}

fn classical_signature_for(ctx: &Context, source: &SignatureSource, texts: &[&str]) -> Result<ClassicalSignature> {
    match &source.structure {
        Some(path) => Ok(ctx.load(path)?.signature.classical()),
        None => infer_classical(texts),
    }
}

fn formula(text: &str, sig: &Signature) -> Result<Formula> {
    parse_formula(text, sig).with_context(|| format!("in `{text}`"))
}

fn classical(text: &str, sig: &ClassicalSignature) -> Result<ClassicalFormula> {
    parse_classical(text, sig).with_context(|| format!("in `{text}`"))
}

/// Parses `text` against `sig`, encoding it first when it is classical.
fn formula_or_encoding(text: &str, sig: &Signature, is_classical: bool) -> Result<(Formula, String)> {
    if is_classical {
        let f = classical(text, &sig.classical())?;
        Ok((encode_classical(&f), f.to_string()))
    } else {
        let f = formula(text, sig)?;
        let echo = f.to_string();
        Ok((f, echo))
    }
}

fn label_names(labels: impl IntoIterator<Item = FragmentLabel>) -> Vec<&'static str> {
    labels.into_iter().map(FragmentLabel::name).collect()
}

pub fn check(ctx: &Context, a: &CheckArgs) -> Result<Verdict> {
    let wanted = a
        .fragment
        .as_deref()
        .map(|s| s.parse::<FragmentLabel>().map_err(|e| anyhow!(e)))
        .transpose()?;
    let is_classical = a.classical || wanted.is_some_and(FragmentLabel::is_classical);
    let (echo, labels) = if is_classical {
        let sig = classical_signature_for(ctx, &a.signature, &[&a.formula])?;
        let f = classical(&a.formula, &sig)?;
        (f.to_string(), classify_classical(&f))
    } else {
        let sig = signature_for(ctx, &a.signature, &[&a.formula])?;
        let f = formula(&a.formula, &sig)?;
        (f.to_string(), classify_fragment(&f))
    };
    let names = label_names(labels.iter().copied());
    let member = wanted.map(|w| labels.contains(&w));
    let report = json!({
        "formula": echo,
        "classical": is_classical,
        "fragments": names,
        "fragment": wanted.map(FragmentLabel::name),
        "member": member,
    });
    ctx.emit(&report, || match (wanted, member) {
        (Some(w), Some(true)) => format!("{w}: yes"),
        (Some(w), _) => format!("{w}: no ({})", names.join(", ")),
        _ => names.join("\n"),
    })?;
    Ok(member.map_or(Verdict::Success, Verdict::Holds))
}

/// Splits `x=a,y=(b,c)` at the commas that start a new `var=` item, so
/// labels may themselves contain commas.
fn split_assignments(items: &[String]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for item in items {
        let mut fresh = true;
        for piece in item.split(',') {
            let starts_item = piece.split_once('=').is_some_and(|(v, _)| is_identifier(v.trim()));
            match out.last_mut() {
                Some(last) if !fresh && !starts_item => {
                    last.push(',');
                    last.push_str(piece);
                }
                _ => out.push(piece.to_string()),
            }
            fresh = false;
        }
    }
    out
}

fn parse_assignment(m: &FiniteMetricStructure, items: &[String]) -> Result<Assignment> {
    split_assignments(items)
        .iter()
        .map(|item| {
            let (var, label) = item
                .split_once('=')
                .ok_or_else(|| anyhow!("assignment `{item}` is not of the form var=label"))?;
            let p = m.point(label).ok_or_else(|| anyhow!("no point labelled `{label}`"))?;
            Ok((var.trim().to_string(), p))
        })
        .collect()
}

pub fn eval(ctx: &Context, a: &EvalArgs) -> Result<Verdict> {
    let m = ctx.load(&a.structure)?;
    let (f, echo) = formula_or_encoding(&a.formula, &m.signature, a.classical)?;
    let assignment = parse_assignment(&m, &a.assign)?;
    let value = evaluate(&m, &f, &assignment)?;
    let labels: BTreeMap<&str, &str> = assignment.iter().map(|(v, &p)| (v.as_str(), m.labels[p].as_str())).collect();
    let mut report = json!({ "formula": echo, "assignment": labels, "value": value });
    if a.classical {
        report["holds"] = json!(value.is_zero());
    }
    ctx.emit(&report, || value.to_string())?;
    Ok(Verdict::Success)
}

fn parse_indices(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|s| s.trim().parse::<usize>().with_context(|| format!("`{s}` is not an index")))
        .collect()
}

/// Reads `kernel=0,1`, `ultra=i`, `gen=0,1;1,2` or `trivial`.
fn parse_filter(spec: &str, n: usize) -> Result<FiniteFilter> {
    let spec = spec.trim();
    if spec == "trivial" {
        return Ok(FiniteFilter::trivial(n));
    }
    let (kind, rest) = spec
        .split_once('=')
        .ok_or_else(|| anyhow!("filter `{spec}` should be kernel=..., ultra=..., gen=... or trivial"))?;
    let filter = match kind.trim() {
        "kernel" => FiniteFilter::principal(n, &parse_indices(rest)?)?,
        "ultra" => {
            let i = rest.trim().parse().with_context(|| format!("`{rest}` is not an index"))?;
            FiniteFilter::ultra(n, i)?
        }
        "gen" => {
            let sets = rest.split(';').map(parse_indices).collect::<Result<Vec<_>>>()?;
            filter_from_generators(&sets, n)?
        }
        other => bail!("unknown filter kind `{other}`"),
    };
    Ok(filter)
}

fn load_factors(ctx: &Context, a: &FactorArgs) -> Result<(Vec<FiniteMetricStructure>, FiniteFilter)> {
    let factors = a.structures.iter().map(|p| ctx.load(p)).collect::<Result<Vec<_>>>()?;
    let filter = parse_filter(&a.filter, factors.len())?;
    Ok((factors, filter))
}

pub fn product(ctx: &Context, a: &ProductArgs) -> Result<Verdict> {
    let (factors, filter) = load_factors(ctx, &a.factors)?;
    let rp = reduced_product_capped(&factors, &filter, a.factors.cap.unwrap_or(DEFAULT_CAP))?;
    let doc = serde_json::to_string_pretty(&structure_json(&rp.result))?;
    match &a.output {
        None => print(&doc)?,
        Some(path) => {
            std::fs::write(path, format!("{doc}\n")).with_context(|| format!("cannot write {}", path.display()))?;
            let report = json!({
                "output": path.display().to_string(),
                "points": rp.result.size(),
                "kernel": filter.kernel(),
            });
            ctx.emit(&report, || format!("wrote {} ({} points)", path.display(), rp.result.size()))?;
        }
    }
    Ok(Verdict::Success)
}

pub fn preserve(ctx: &Context, a: &PreserveArgs) -> Result<Verdict> {
    let (factors, filter) = load_factors(ctx, &a.factors)?;
    let (f, _) = formula_or_encoding(&a.formula, &factors[0].signature, a.classical)?;
    let rp = reduced_product_capped(&factors, &filter, a.factors.cap.unwrap_or(DEFAULT_CAP))?;
    let report = bipreservation_in(&f, &rp)?;
    ctx.emit(&report, || {
        let mut out = vec![
            format!("formula: {}", report.formula),
            format!("kernel: {:?}", report.kernel),
        ];
        for row in &report.rows {
            let at = if report.variables.is_empty() {
                String::new()
            } else {
                let pairs: Vec<String> = report.variables.iter().zip(&row.tuple).map(|(v, p)| format!("{v}={p}")).collect();
                format!("[{}] ", pairs.join(", "))
            };
            out.push(format!(
                "{at}product {} limsup {} liminf {}{}{}",
                row.product_value,
                row.limsup,
                row.liminf,
                if row.preserved { "" } else { "  NOT PRESERVED" },
                if row.copreserved { "" } else { "  NOT COPRESERVED" },
            ));
        }
        out.push(format!("preserved: {}", report.preserved));
        out.push(format!("copreserved: {}", report.copreserved));
        out.join("\n")
    })?;
    Ok(Verdict::Holds(report.bipreserved()))
}

pub fn gen_scp(ctx: &Context, a: &GenScpArgs) -> Result<Verdict> {
    let xs: Vec<&str> = a.vars.iter().map(String::as_str).collect();
    let mut texts = vec![a.phi.as_str()];
    texts.extend(a.psi.iter().map(String::as_str));
    if a.classical {
        ensure!(a.connectives.is_empty(), "the classical schema takes no connectives");
        let sig = classical_signature_for(ctx, &a.signature, &texts)?;
        let phi = classical(&a.phi, &sig)?;
        let psis = a.psi.iter().map(|t| classical(t, &sig)).collect::<Result<Vec<_>>>()?;
        let f = mk_scp_instance_classical(&phi, &psis, &xs)?;
        ctx.emit(&json!({ "sentence": f.to_string() }), || f.to_string())?;
        return Ok(Verdict::Success);
    }
    let sig = signature_for(ctx, &a.signature, &texts)?;
    let phi = formula(&a.phi, &sig)?;
    let psis = a.psi.iter().map(|t| formula(t, &sig)).collect::<Result<Vec<_>>>()?;
    let ds = if a.connectives.is_empty() {
        vec![PLFunc::identity(); psis.len()]
    } else {
        a.connectives
            .iter()
            .map(|t| parse_pl(t).with_context(|| format!("in `{t}`")))
            .collect::<Result<Vec<_>>>()?
    };
    let mono = match a.mono {
        Mono::Nondecreasing => ScpMonotonicity::Nondecreasing,
        Mono::Nonincreasing => ScpMonotonicity::Nonincreasing,
    };
    let c = mk_scp_instance(&phi, &psis, &ds, &xs, mono)?;
    let report = json!({ "sentence": c.sentence.to_string(), "threshold": c.threshold });
    ctx.emit(&report, || c.to_string())?;
    Ok(Verdict::Success)
}

pub fn to_horn(ctx: &Context, a: &ToHornArgs) -> Result<Verdict> {
    let (f, _) = parse_classical_inferred(&a.formula).with_context(|| format!("in `{}`", a.formula))?;
    let horn = palyutin_to_horn(&f)?;
    let report = json!({
        "input": f.to_string(),
        "horn": horn.to_string(),
        "fragments": label_names(classify_classical(&horn)),
    });
    ctx.emit(&report, || horn.to_string())?;
    Ok(Verdict::Success)
}

pub fn equiv(ctx: &Context, a: &EquivArgs) -> Result<Verdict> {
    ensure!(a.structures.len() == 2, "equiv compares exactly two structures, got {}", a.structures.len());
    let m = ctx.load(&a.structures[0])?;
    let n = ctx.load(&a.structures[1])?;
    let pool: Vec<&str> = a.pool.iter().map(String::as_str).collect();
    let verdict = palyutin_equiv_in_pool(&m, &n, a.depth, &Basis::standard(), &pool)?;
    for w in &verdict.warnings {
        eprintln!("warning: {w}");
    }
    ctx.emit(&verdict, || match &verdict.separator {
        None => format!(
            "equivalent on Palyutin sentences of depth <= {} ({} checked)",
            verdict.depth, verdict.checked
        ),
        Some(s) => format!("separated by {}: {} vs {}", s.sentence, s.left, s.right),
    })?;
    Ok(Verdict::Holds(verdict.equivalent))
}

pub fn stability(ctx: &Context, a: &StabilityArgs) -> Result<Verdict> {
    let sig = signature_for(ctx, &a.signature, &[&a.phi])?;
    let phi = formula(&a.phi, &sig)?;
    let c = stability_criterion(&phi, &sig, &a.x, &a.y, &a.z)?;
    let report = json!({ "sentence": c.sentence.to_string(), "threshold": c.threshold });
    ctx.emit(&report, || c.to_string())?;
    Ok(Verdict::Success)
}

/// Largest `|f - g|` over every assignment of the free variables of `f` and
/// `g` in each structure.
fn deviation(structures: &[FiniteMetricStructure], f: &Formula, g: &Formula) -> Result<Rational> {
    let mut vars = f.free_vars();
    vars.extend(g.free_vars());
    let vars: Vec<String> = vars.into_iter().collect();
    let mut worst = Rational::ZERO;
    for m in structures {
        for t in 0..tuple_count(m.size(), vars.len()) {
            let assignment: Assignment = vars.iter().cloned().zip(tuple_at(m.size(), vars.len(), t)).collect();
            let gap = (evaluate(m, f, &assignment)? - evaluate(m, g, &assignment)?).abs();
            worst = worst.max(gap);
        }
    }
    Ok(worst)
}

pub fn approx(ctx: &Context, a: &ApproxArgs) -> Result<Verdict> {
    let measured = a.measure.iter().map(|p| ctx.load(p)).collect::<Result<Vec<_>>>()?;
    let mut texts = vec![a.phi.as_str()];
    texts.extend(a.gamma.as_deref());
    texts.extend(a.helper.iter().map(String::as_str));
    let sig = match (&a.signature.structure, measured.first()) {
        (None, Some(m)) => m.signature.clone(),
        _ => signature_for(ctx, &a.signature, &texts)?,
    };
    let phi = formula(&a.phi, &sig)?;
    let (target, theta, thresholds) = match (&a.gamma, &a.var) {
        (Some(gamma), Some(var)) => {
            ensure!(a.helper.is_empty() && a.margin.is_empty(), "--helper and --margin do not apply with --gamma");
            let gamma = formula(gamma, &sig)?;
            let d = match &a.connective {
                Some(t) => parse_pl(t).with_context(|| format!("in `{t}`"))?,
                None => PLFunc::identity(),
            };
            let target = Formula::inf(var, Formula::Max(vec![phi.clone(), Formula::unary(d.clone(), gamma.clone())]));
            let (lo, hi) = bounds(a, &target, &sig)?;
            let theta = eliminate_inf_step(&phi, &gamma, var, &d, a.eps, (lo, hi))?;
            (target, theta, grid_thresholds(a.eps, lo, hi)?)
        }
        _ => {
            ensure!(a.connective.is_none(), "--connective needs --gamma");
            let (lo, hi) = bounds(a, &phi, &sig)?;
            let thresholds = grid_thresholds(a.eps, lo, hi)?;
            let k = thresholds.len() - 1;
            let helpers = if a.helper.is_empty() {
                thresholds[..k].iter().map(|&r| Formula::shifted(phi.clone(), -r)).collect()
            } else {
                a.helper.iter().map(|t| formula(t, &sig)).collect::<Result<Vec<_>>>()?
            };
            let margins = match a.margin.as_slice() {
                [] => vec![a.eps / Rational::from(2); k],
                [l] => vec![*l; k],
                ls => ls.to_vec(),
            };
            let grid = ApproxGrid::new(thresholds.clone(), helpers, margins)?;
            (phi.clone(), approximate_by_grid(&phi, &grid)?, thresholds)
        }
    };
    let gap = if measured.is_empty() {
        None
    } else {
        Some(deviation(&measured, &target, &theta)?)
    };
    let report = json!({
        "target": target.to_string(),
        "approximation": theta.to_string(),
        "thresholds": thresholds,
        "fragments": label_names(classify_fragment(&theta)),
        "max_deviation": gap,
    });
    ctx.emit(&report, || {
        let mut out = theta.to_string();
        if let Some(g) = gap {
            out.push_str(&format!("\nmax deviation over {} structure(s): {g}", measured.len()));
        }
        out
    })?;
    Ok(Verdict::Success)
}

fn bounds(a: &ApproxArgs, target: &Formula, sig: &Signature) -> Result<(Rational, Rational)> {
    let (lo, hi) = match (a.lo, a.hi) {
        (Some(lo), Some(hi)) => (lo, hi),
        (lo, hi) => {
            let (l, h) = formula_bounds(target, sig)?;
            (lo.unwrap_or(l), hi.unwrap_or(h))
        }
    };
    Ok((lo, hi))
}
