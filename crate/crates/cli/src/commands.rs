use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use fvm_core::coalgebras::{bimorph_correspondence, check_coalgebra, lifted_op};
use fvm_core::comonads::{check_comonad_laws, Kind, Params};
use fvm_core::games::{decide, CountBackend, Fragment, Query};
use fvm_core::harness::{
    find_case, registry, replay_violation, run_fvm, run_translated_fvm, search_counterexample, Expectation, FvmOp,
    Translation,
};
use fvm_core::kleisli::{check_kleisli_law, exhaustive_bases, law, KleisliLaw, LAW_NAMES};
use fvm_core::spectra::char_poly;
use fvm_core::structures::{
    disjoint_union, enumerate_pointed, enumerate_structures, merge, pointed_coproduct, product, reduct,
    structure_to_value, translate_connectivity, translate_equality, translate_global, translate_weak, vee,
    EnumerateOptions, SilentMode,
};
use fvm_core::{Signature, Structure, Term};
use serde_json::{json, Value};

use crate::io::{coalgebra_value, emit, read_coalgebra, read_structure, read_structures};
use crate::{
    CheckArgs, CoalgCommand, ComonadCommand, ComonadParams, ComposeArgs, CospectralArgs, ExpectArg, FragmentArg,
    FvmArgs, KappaCommand, KindArg, LiftArgs, OpArg, TranslateArgs, TranslationArg,
};

impl From<KindArg> for Kind {
    fn from(k: KindArg) -> Kind {
        match k {
            KindArg::Ef => Kind::Ef,
            KindArg::Pebble => Kind::Pebble,
            KindArg::Modal => Kind::Modal,
            KindArg::Cos => Kind::Cos,
        }
    }
}

impl From<FragmentArg> for Fragment {
    fn from(f: FragmentArg) -> Fragment {
        match f {
            FragmentArg::Pe => Fragment::Pe,
            FragmentArg::Exist => Fragment::Exist,
            FragmentArg::Count => Fragment::Count,
            FragmentArg::Full => Fragment::Full,
        }
    }
}

impl From<OpArg> for FvmOp {
    fn from(op: OpArg) -> FvmOp {
        match op {
            OpArg::DisjointUnion => FvmOp::DisjointUnion,
            OpArg::PointedCoproduct => FvmOp::PointedCoproduct,
            OpArg::Product => FvmOp::Product,
            OpArg::Merge => FvmOp::Merge,
            OpArg::Vee => FvmOp::Vee,
            OpArg::Reduct => FvmOp::Reduct,
        }
    }
}

impl From<TranslationArg> for Translation {
    fn from(t: TranslationArg) -> Translation {
        match t {
            TranslationArg::Equality => Translation::Equality,
            TranslationArg::Connectivity => Translation::Connectivity,
            TranslationArg::Global => Translation::Global,
            TranslationArg::Weak => Translation::Weak,
        }
    }
}

pub fn run(command: crate::Command, seed: u64) -> Result<bool> {
    use crate::Command::*;
    match command {
        Check(args) => check(args),
        Compose(args) => compose(args),
        Translate(args) => translate(args),
        Comonad(cmd) => comonad(cmd, seed),
        Kappa(cmd) => kappa(cmd, seed),
        Coalg(cmd) => coalg(cmd),
        Cospectral(args) => cospectral(args),
        Fvm(args) => fvm(args, seed),
        Laws => laws(),
    }
}

/// Parses `E:2,P:1`.
fn parse_signature(text: &str) -> Result<Signature> {
    let mut rels = Vec::new();
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, arity) = part
            .split_once(':')
            .ok_or_else(|| anyhow!("signature entries look like NAME:ARITY, got `{part}`"))?;
        let arity: usize = arity.trim().parse().with_context(|| format!("arity in `{part}`"))?;
        rels.push((name.trim().to_string(), arity));
    }
    Ok(Signature::new(rels)?)
}

fn check(args: CheckArgs) -> Result<bool> {
    let (a, b) = (read_structure(&args.a)?, read_structure(&args.b)?);
    let backend = if args.wl { CountBackend::Wl } else { CountBackend::Auto };
    let q = Query::new(args.fragment.into(), args.kind.into(), args.k)
        .with_backend(backend)
        .with_witness(args.witness.is_some());
    let v = decide(&q, &a, &b)?;
    if let (Some(path), Some(w)) = (&args.witness, &v.witness) {
        emit(&serde_json::to_value(w)?, Some(path))?;
    }
    emit(&serde_json::to_value(&v)?, None)?;
    eprintln!("{} {} k={}: {}", v.fragment, v.kind, v.k, v.result);
    Ok(v.result)
}

fn binary(op: &str, inputs: &[Structure]) -> Result<(Structure, Structure)> {
    match inputs {
        [a, b] => Ok((a.clone(), b.clone())),
        _ => bail!("{op} takes two structures, got {}", inputs.len()),
    }
}

fn first_binary_relation(s: &Structure) -> Result<String> {
    s.signature()
        .relations()
        .iter()
        .find(|(_, a)| *a == 2)
        .map(|(n, _)| n.clone())
        .ok_or_else(|| anyhow!("merge needs a binary relation"))
}

fn compose(args: ComposeArgs) -> Result<bool> {
    let inputs = read_structures(&args.inputs)?;
    let out = match args.op {
        OpArg::DisjointUnion => {
            let (a, b) = binary("disjoint-union", &inputs)?;
            disjoint_union(&a, &b)?
        }
        OpArg::PointedCoproduct => {
            let (a, b) = binary("pointed-coproduct", &inputs)?;
            pointed_coproduct(&a, &b)?
        }
        OpArg::Product => product(&inputs)?,
        OpArg::Merge => {
            let (a, b) = binary("merge", &inputs)?;
            let rel = match args.relation {
                Some(r) => r,
                None => first_binary_relation(&a)?,
            };
            merge(&a, &b, &rel)?
        }
        OpArg::Vee => {
            let (a, b) = binary("vee", &inputs)?;
            vee(&a, &b)?
        }
        OpArg::Reduct => {
            let [a] = inputs.as_slice() else {
                bail!("reduct takes one structure")
            };
            let tau = args.signature.ok_or_else(|| anyhow!("reduct needs --signature"))?;
            reduct(a, &parse_signature(&tau)?)?
        }
    };
    emit(&structure_to_value(&out), args.output.as_deref())?;
    eprintln!("composite with {} elements", out.size());
    Ok(true)
}

fn translate(args: TranslateArgs) -> Result<bool> {
    let a = read_structure(&args.input)?;
    let out = match args.to {
        TranslationArg::Equality => translate_equality(&a)?,
        TranslationArg::Connectivity => translate_connectivity(&a)?,
        TranslationArg::Global => translate_global(&a)?,
        TranslationArg::Weak => {
            let mode = if args.keep_silent_raw {
                SilentMode::Raw
            } else if args.close_silent {
                SilentMode::Close
            } else {
                SilentMode::Erase
            };
            translate_weak(&a, &args.silent, mode)?
        }
    };
    emit(&structure_to_value(&out), args.output.as_deref())?;
    eprintln!("translated structure with {} elements", out.size());
    Ok(true)
}

fn comonad_params(p: &ComonadParams) -> Params {
    let mut params = Params::new(p.kind.into(), p.k);
    if let Some(t) = p.trunc {
        params = params.with_trunc(t);
    }
    if let Some(l) = p.limit {
        params = params.with_limit(l);
    }
    params
}

fn comonad(cmd: ComonadCommand, seed: u64) -> Result<bool> {
    match cmd {
        ComonadCommand::Build {
            params,
            input,
            output,
            legend,
        } => {
            let base = read_structure(&input)?;
            let c = comonad_params(&params).build(&base)?;
            let carrier = structure_to_value(&c.carrier.structure);
            let names = json!(c.legend());
            match output {
                Some(path) => {
                    emit(&carrier, Some(&path))?;
                    emit(&names, legend.as_deref())?;
                }
                None => match legend {
                    Some(path) => {
                        emit(&names, Some(&path))?;
                        emit(&carrier, None)?;
                    }
                    None => emit(&json!({"carrier": carrier, "legend": names}), None)?,
                },
            }
            eprintln!("{} k={}: carrier with {} elements", c.kind(), c.k(), c.size());
            Ok(true)
        }
        ComonadCommand::Laws {
            params,
            max_size,
            samples,
            signature,
        } => {
            let params = comonad_params(&params);
            let sig = parse_signature(&signature)?;
            let opts = EnumerateOptions::new(max_size).up_to_iso();
            let all = if params.kind == Kind::Modal {
                enumerate_pointed(&sig, &opts)?
            } else {
                enumerate_structures(&sig, &opts)?
            };
            // The closed-walk comonad only accepts loopless undirected graphs.
            let (pool, comonads): (Vec<_>, Vec<_>) = all
                .into_iter()
                .filter_map(|base| params.build(&base).ok().map(|c| (base, c)))
                .unzip();
            let mut reports = Vec::new();
            for c in &comonads {
                reports.push(check_comonad_laws(c, &pool, samples, seed)?);
            }
            let failing = reports.iter().filter(|r| !r.passed()).count();
            emit(
                &json!({
                    "kind": params.kind,
                    "k": params.k,
                    "trunc": params.trunc,
                    "bases": reports.len(),
                    "failing": failing,
                    "reports": reports,
                }),
                None,
            )?;
            eprintln!(
                "{} k={}: {} bases, {failing} failing",
                params.kind,
                params.k,
                reports.len()
            );
            Ok(failing == 0)
        }
    }
}

fn registered_law(args: &crate::LawArgs) -> Result<KleisliLaw> {
    Ok(law(&args.law, args.k, args.trunc)?)
}

fn kappa(cmd: KappaCommand, seed: u64) -> Result<bool> {
    match cmd {
        KappaCommand::Apply { law, inputs, element } => {
            let l = registered_law(&law)?;
            let bases = read_structures(&inputs)?;
            let inst = l.instantiate(&bases)?;
            let t: Term = match element.trim().parse::<u32>() {
                Ok(i) => {
                    if i as usize >= inst.source.size() {
                        bail!("element {i} is outside the carrier of size {}", inst.source.size());
                    }
                    inst.source.carrier.label(i).clone()
                }
                Err(_) => serde_json::from_str(&element).context("--element must be an index or a JSON term")?,
            };
            let image = l.kappa_term(&t)?;
            emit(
                &json!({
                    "law": l.name,
                    "element": t.to_string(),
                    "image": image.to_string(),
                    "element_term": t,
                    "image_term": image,
                }),
                None,
            )?;
            eprintln!("{}: {t} ↦ {image}", l.name);
            Ok(true)
        }
        KappaCommand::Check {
            law,
            max_size,
            samples,
            signature,
            report,
        } => {
            let l = registered_law(&law)?;
            let bases = exhaustive_bases(&l, &parse_signature(&signature)?, max_size)?;
            let r = check_kleisli_law(&l, &bases, samples, seed)?;
            emit(&serde_json::to_value(&r)?, report.as_deref())?;
            eprintln!(
                "{}: {} operand tuples, {}",
                l.name,
                r.bases,
                if r.passed() { "all checks pass" } else { "checks fail" }
            );
            Ok(r.passed())
        }
    }
}

/// The Kleisli law behind lifting `op` for the given comonad.
fn lift_law(args: &LiftArgs) -> Result<KleisliLaw> {
    let name = match (args.op, args.params.kind) {
        (OpArg::DisjointUnion, KindArg::Ef) => "coproduct-ef",
        (OpArg::Product, KindArg::Ef) => "product-ef",
        (OpArg::Product, KindArg::Modal) => "product-modal",
        (OpArg::Merge, KindArg::Modal) => "merge-modal",
        _ => bail!("no coalgebra lifting is registered for this operation and comonad"),
    };
    Ok(law(name, args.params.k, None)?)
}

fn read_operands(l: &KleisliLaw, paths: &[impl AsRef<Path>]) -> Result<Vec<fvm_core::coalgebras::Coalgebra>> {
    if paths.len() != l.arity() {
        bail!("{} takes {} operands, got {}", l.name, l.arity(), paths.len());
    }
    paths
        .iter()
        .zip(&l.operands)
        .map(|(p, params)| read_coalgebra(p.as_ref(), *params))
        .collect()
}

fn coalg(cmd: CoalgCommand) -> Result<bool> {
    match cmd {
        CoalgCommand::Check { params, input } => {
            let c = read_coalgebra(&input, Params::new(params.kind.into(), params.k))?;
            let r = check_coalgebra(&c)?;
            emit(&serde_json::to_value(&r)?, None)?;
            eprintln!(
                "{} elements: {}",
                c.size(),
                r.failure.as_deref().unwrap_or("coalgebra laws hold")
            );
            Ok(r.passed())
        }
        CoalgCommand::Lift { lift, inputs, output } => {
            let l = lift_law(&lift)?;
            let operands = read_operands(&l, &inputs)?;
            let lifted = lifted_op(&l, &operands)?;
            let mut value = coalgebra_value(&lifted.coalgebra)?;
            let obj = value.as_object_mut().expect("object");
            obj.insert("law".into(), json!(l.name));
            obj.insert("composite".into(), structure_to_value(&lifted.composite.structure));
            obj.insert("universal".into(), json!(lifted.universal.table));
            emit(&value, output.as_deref())?;
            eprintln!(
                "{}: lifted coalgebra with {} of {} cofree elements",
                l.name,
                lifted.coalgebra.size(),
                lifted.cofree.size()
            );
            Ok(true)
        }
        CoalgCommand::BimorphCount { lift, alpha, betas } => {
            let l = lift_law(&lift)?;
            let betas = read_operands(&l, &betas)?;
            let alpha = read_coalgebra(&alpha, l.source)?;
            let r = bimorph_correspondence(&l, &alpha, &betas)?;
            emit(&serde_json::to_value(&r)?, None)?;
            eprintln!(
                "{}: {} bimorphisms, {} morphisms into the lift",
                l.name, r.bimorphisms, r.morphisms
            );
            Ok(r.passed())
        }
    }
}

fn cospectral(args: CospectralArgs) -> Result<bool> {
    let (g, h) = (read_structure(&args.g)?, read_structure(&args.h)?);
    let (pg, ph) = (char_poly(&g)?, char_poly(&h)?);
    let same = pg == ph;
    emit(
        &json!({
            "cospectral": same,
            "G": pg,
            "H": ph,
        }),
        None,
    )?;
    eprintln!("{pg} vs {ph}: {}", if same { "cospectral" } else { "not cospectral" });
    Ok(same)
}

fn fvm(args: FvmArgs, seed: u64) -> Result<bool> {
    let mut case = find_case(
        args.op.into(),
        args.kind.into(),
        args.fragment.into(),
        args.translation.map(Into::into),
    )?
    .with_seed(seed);
    if let Some(k) = args.k {
        if k == 0 {
            bail!("--k must be at least 1");
        }
        case = case.with_k(k);
    }
    if let Some(n) = args.sizes {
        case = case.with_max_size(n);
    }
    if let Some(s) = args.samples {
        case = case.with_samples(s);
    }
    if let Some(e) = args.expect {
        case = case.with_expectation(match e {
            ExpectArg::Theorem => Expectation::Theorem,
            ExpectArg::Counterexample => Expectation::Counterexample,
        });
    }
    let expect_violation = case.expectation == Expectation::Counterexample;
    if args.exhaustive {
        let witness = search_counterexample(&case)?;
        let replays = match &witness {
            Some(v) => replay_violation(&case, v)?,
            None => false,
        };
        let ok = witness.is_some() == expect_violation && (witness.is_none() || replays);
        emit(
            &json!({
                "case": case,
                "exhaustive": true,
                "witness": witness,
                "replays": replays,
                "seed": seed,
            }),
            args.report.as_deref(),
        )?;
        eprintln!(
            "{} k={}→{}: {}",
            case.name,
            case.k_in,
            case.k_out,
            if witness.is_some() {
                "counterexample found"
            } else {
                "no counterexample"
            }
        );
        return Ok(ok);
    }
    let report = if case.translation.is_some() {
        run_translated_fvm(&case)?
    } else {
        run_fvm(&case)?
    };
    let report = if args.timing { report } else { report.without_timing() };
    emit(&serde_json::to_value(&report)?, args.report.as_deref())?;
    eprintln!(
        "{} k={}→{}: {:?}, {} samples, {} premise hits, {} violations",
        case.name, case.k_in, case.k_out, report.status, report.samples, report.premise_hits, report.violation_count
    );
    Ok(report.passed())
}

fn laws() -> Result<bool> {
    let kleisli: Vec<Value> = LAW_NAMES
        .iter()
        .map(|name| {
            let l = law(name, 1, None)?;
            Ok(json!({
                "name": l.name,
                "operation": l.operation,
                "source": l.source.kind,
                "operands": l.operands.iter().map(|p| p.kind).collect::<Vec<_>>(),
            }))
        })
        .collect::<Result<_>>()?;
    let cases = registry();
    emit(&json!({"kleisli_laws": kleisli, "fvm_cases": cases}), None)?;
    eprintln!("{} Kleisli laws, {} composition cases", kleisli.len(), cases.len());
    Ok(true)
}
