use std::collections::BTreeMap;
use std::path::Path;

use serde_json::{json, Value};
use tensorpres::gallery::{
    c_r_matrix, ccnr_check, maximally_entangled_state, product_state, random_unit_vector, swap_corner_map,
};
use tensorpres::preserver::{build_standard_form, default_recover_tol, recover_candidates, verify_on_products};
use tensorpres::{norm, tol, ComplexMatrix, Error, Flag, Form, NormSpec, SuperOp, TensorShape};

use crate::matrix_file::{load, MatrixFile};
use crate::report::{sig12, Outcome, RunReport};
use crate::{CliError, Context, DemoKind, NormFlags};

impl NormFlags {
    /// Exactly one norm flag must be present.
    pub fn resolve(&self) -> Result<NormSpec, CliError> {
        let mut picked = Vec::new();
        if let Some(k) = &self.ky_fan {
            let k = k
                .parse::<usize>()
                .map_err(|_| CliError::InvalidSpec(format!("--ky-fan expects a positive integer, got '{k}'")))?;
            picked.push(NormSpec::KyFan(k));
        }
        if let Some(p) = &self.schatten {
            let p = p
                .parse::<f64>()
                .map_err(|_| CliError::InvalidSpec(format!("--schatten expects a number, got '{p}'")))?;
            picked.push(NormSpec::Schatten(p));
        }
        if self.spectral {
            picked.push(NormSpec::Spectral);
        }
        if self.trace_norm {
            picked.push(NormSpec::TraceNorm);
        }
        if self.frobenius {
            picked.push(NormSpec::Frobenius);
        }
        match picked.as_slice() {
            [one] => Ok(*one),
            [] => Err(CliError::InvalidSpec(
                "give one of --ky-fan K, --schatten P, --spectral, --trace-norm, --frobenius".into(),
            )),
            _ => Err(CliError::InvalidSpec("give exactly one norm flag".into())),
        }
    }
}

fn spec_error(e: Error) -> CliError {
    match e {
        Error::InvalidNorm(msg) => CliError::InvalidSpec(msg),
        other => CliError::Library(other),
    }
}

fn report(ctx: &Context, inputs: BTreeMap<String, String>, results: Value, verdict: &str, tolerances: BTreeMap<String, f64>) -> RunReport {
    RunReport {
        command: ctx.argv.clone(),
        inputs_sha256: inputs,
        results,
        verdict: verdict.to_string(),
        tolerances,
        seed: ctx.seed,
    }
}

fn input(path: &Path) -> Result<(MatrixFile, BTreeMap<String, String>), CliError> {
    let (file, digest) = load(path)?;
    let mut inputs = BTreeMap::new();
    inputs.insert(path.display().to_string(), digest);
    Ok((file, inputs))
}

fn flags_text(flags: &[Flag]) -> String {
    flags.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(",")
}

pub fn parse_shape(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| CliError::Malformed(format!("bad shape '{text}', expected e.g. 2,3")))
        })
        .collect()
}

pub fn cmd_norm(ctx: &Context, file: &Path, flags: &NormFlags) -> Result<Outcome, CliError> {
    let spec = flags.resolve()?;
    let (mf, inputs) = input(file)?;
    let m = mf.to_matrix()?;
    spec.validate(m.rows(), m.cols()).map_err(spec_error)?;
    let value = norm(&m, spec).map_err(spec_error)?;
    let text = sig12(value);
    let results = json!({ "spec": spec.to_string(), "value": value, "display": text });
    Ok(Outcome {
        report: report(ctx, inputs, results, "ok", BTreeMap::new()),
        exit: 0,
        human: text,
        artifacts: Vec::new(),
    })
}

pub fn cmd_verify(
    ctx: &Context,
    file: &Path,
    shape: Option<&[usize]>,
    flags: &NormFlags,
    trials: usize,
) -> Result<Outcome, CliError> {
    let spec = flags.resolve()?;
    let (mf, inputs) = input(file)?;
    let phi = mf.to_superop(shape)?;
    let v = verify_on_products(&phi, spec, trials, ctx.seed).map_err(spec_error)?;
    let tol_verify = ctx.tol.unwrap_or(tol::VERIFY);
    let pass = v.max_deviation <= tol_verify * v.scale;
    let verdict = if pass { "pass" } else { "fail" };
    let results = json!({
        "spec": spec.to_string(),
        "max_deviation": v.max_deviation,
        "scale": v.scale,
        "products_tested": v.tested,
        "random_trials": trials,
    });
    let human = format!(
        "{verdict}: {spec} max deviation {:.3e} over {} product matrices",
        v.max_deviation, v.tested
    );
    Ok(Outcome {
        report: report(ctx, inputs, results, verdict, BTreeMap::from([("verify".into(), tol_verify)])),
        exit: if pass { 0 } else { 1 },
        human,
        artifacts: Vec::new(),
    })
}

fn form_json(form: &Form, residual: f64) -> Value {
    json!({
        "flags": form.flags.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        "residual": residual,
        "u": MatrixFile::from_matrix(&form.u),
        "v": MatrixFile::from_matrix(&form.v),
    })
}

pub fn cmd_recover(ctx: &Context, file: &Path, shape: Option<&[usize]>) -> Result<Outcome, CliError> {
    let (mf, inputs) = input(file)?;
    let phi = mf.to_superop(shape)?;
    let tol_recover = ctx.tol.unwrap_or_else(|| default_recover_tol(phi.shape()));
    let (candidates, closest, tested) = recover_candidates(&phi, tol_recover).map_err(CliError::Library)?;
    let tolerances = BTreeMap::from([("recover".into(), tol_recover), ("unitary".into(), tol::UNITARY)]);
    let outcome = match candidates.as_slice() {
        [] => Outcome {
            report: report(
                ctx,
                inputs,
                json!({ "flags_tested": tested, "closest_kronecker_distance": closest }),
                "NotStandardForm",
                tolerances,
            ),
            exit: 1,
            human: format!("NotStandardForm: {tested} flag sets tested, closest Kronecker distance {closest:.3e}"),
            artifacts: Vec::new(),
        },
        [only] => Outcome {
            report: report(
                ctx,
                inputs,
                json!({ "flags_tested": tested, "form": form_json(&only.form, only.residual) }),
                "StandardFormFound",
                tolerances,
            ),
            exit: 0,
            human: format!(
                "StandardFormFound: flags {} residual {:.3e}",
                flags_text(&only.form.flags),
                only.residual
            ),
            artifacts: vec![
                ("u.json".into(), MatrixFile::from_matrix(&only.form.u)),
                ("v.json".into(), MatrixFile::from_matrix(&only.form.v)),
            ],
        },
        many => {
            let mut artifacts = Vec::new();
            for (i, c) in many.iter().enumerate() {
                artifacts.push((format!("candidate_{i}_u.json"), MatrixFile::from_matrix(&c.form.u)));
                artifacts.push((format!("candidate_{i}_v.json"), MatrixFile::from_matrix(&c.form.v)));
            }
            let sets: Vec<String> = many.iter().map(|c| flags_text(&c.form.flags)).collect();
            Outcome {
                report: report(
                    ctx,
                    inputs,
                    json!({
                        "flags_tested": tested,
                        "candidates": many.iter().map(|c| form_json(&c.form, c.residual)).collect::<Vec<_>>(),
                    }),
                    "AmbiguousRecovery",
                    tolerances,
                ),
                exit: 4,
                human: format!("AmbiguousRecovery: flag sets {}", sets.join(" | ")),
                artifacts,
            }
        }
    };
    Ok(outcome)
}

pub fn cmd_ccnr(ctx: &Context, file: &Path, shape: Option<&[usize]>) -> Result<Outcome, CliError> {
    let (mf, inputs) = input(file)?;
    let rho = mf.to_matrix()?;
    let dims = shape
        .map(|s| s.to_vec())
        .or_else(|| mf.shape.clone())
        .ok_or_else(|| CliError::Malformed("no --shape given and none in the file".into()))?;
    let [m, n] = dims[..] else {
        return Err(CliError::Malformed(format!("CCNR needs a bipartite shape m,n, got {dims:?}")));
    };
    let r = ccnr_check(&rho, (m, n)).map_err(|e| CliError::Malformed(e.to_string()))?;
    let margin = ctx.tol.unwrap_or(tol::CCNR);
    let flagged = r.realignment_trace_norm > 1.0 + margin;
    let verdict = if flagged { "entangled" } else { "inconclusive" };
    let results = json!({
        "realignment_trace_norm": r.realignment_trace_norm,
        "flagged_entangled": flagged,
        "warnings": r.warnings,
    });
    let mut human = format!(
        "realignment trace norm {} {}",
        sig12(r.realignment_trace_norm),
        if flagged { "flagged entangled" } else { "not flagged" }
    );
    for w in &r.warnings {
        human.push_str(&format!("\nwarning: {w}"));
    }
    Ok(Outcome {
        report: report(ctx, inputs, results, verdict, BTreeMap::from([("ccnr".into(), margin)])),
        exit: if flagged { 1 } else { 0 },
        human,
        artifacts: Vec::new(),
    })
}

pub struct DemoArgs<'a> {
    pub kind: DemoKind,
    pub shape: &'a [usize],
    pub r: f64,
    pub spec: Option<&'a str>,
    pub pure: bool,
}

fn artifact_outcome(ctx: &Context, name: &str, file: MatrixFile, results: Value) -> Outcome {
    let human = file.to_json();
    Outcome {
        report: report(ctx, BTreeMap::new(), results, "ok", BTreeMap::new()),
        exit: 0,
        human,
        artifacts: vec![(name.to_string(), file)],
    }
}

pub fn cmd_demo(ctx: &Context, args: &DemoArgs) -> Result<Outcome, CliError> {
    let shape = TensorShape::new(args.shape.to_vec()).map_err(|e| CliError::Malformed(e.to_string()))?;
    match args.kind {
        DemoKind::Standard => {
            let form = Form::random(&shape, ctx.seed);
            let phi = build_standard_form(&form, &shape).map_err(CliError::Library)?;
            let results = json!({
                "shape": shape.dims(),
                "form": form_json(&form, 0.0),
                "superoperator": MatrixFile::from_superop(&phi),
            });
            Ok(artifact_outcome(ctx, "standard.json", MatrixFile::from_superop(&phi), results))
        }
        DemoKind::Swap => {
            let [m, n] = shape.dims()[..] else {
                return Err(CliError::Malformed("swap demo needs a bipartite shape m,n".into()));
            };
            let phi: SuperOp = swap_corner_map(m, n).map_err(CliError::Library)?;
            let results = json!({ "shape": shape.dims(), "superoperator": MatrixFile::from_superop(&phi) });
            Ok(artifact_outcome(ctx, "swap.json", MatrixFile::from_superop(&phi), results))
        }
        DemoKind::Entangled => {
            let rho: ComplexMatrix = maximally_entangled_state();
            let bip = TensorShape::bipartite(2, 2).expect("2,2");
            let file = MatrixFile::from_matrix(&rho).with_shape(&bip);
            let results = json!({ "state": file });
            Ok(artifact_outcome(ctx, "entangled.json", file, results))
        }
        DemoKind::Product => {
            let [m, n] = shape.dims()[..] else {
                return Err(CliError::Malformed("product demo needs a bipartite shape m,n".into()));
            };
            let rho = if args.pure {
                let x = random_unit_vector(m, ctx.seed);
                let y = random_unit_vector(n, ctx.seed.wrapping_add(1));
                product_state(&x, &y).map_err(CliError::Library)?
            } else {
                let a = ComplexMatrix::identity(m).scale_re(1.0 / m as f64);
                let b = ComplexMatrix::identity(n).scale_re(1.0 / n as f64);
                a.kron(&b)
            };
            let file = MatrixFile::from_matrix(&rho).with_shape(&shape);
            let results = json!({ "pure": args.pure, "state": file });
            Ok(artifact_outcome(ctx, "product.json", file, results))
        }
        DemoKind::Cr => {
            let c = c_r_matrix(args.r).map_err(|e| CliError::Malformed(e.to_string()))?;
            let bip = TensorShape::bipartite(2, 2).expect("2,2");
            let pt = c.partial_transpose(&bip, 1).map_err(CliError::Library)?;
            let specs: Vec<NormSpec> = match args.spec {
                Some(s) => vec![s.parse().map_err(spec_error)?],
                None => vec![
                    NormSpec::Spectral,
                    NormSpec::KyFan(2),
                    NormSpec::TraceNorm,
                    NormSpec::Schatten(3.0),
                    NormSpec::Frobenius,
                ],
            };
            let mut rows = Vec::new();
            let mut lines = vec![format!("{:<12} {:>16} {:>16}", "norm", "C_r", "(Id x T)(C_r)")];
            for spec in specs {
                spec.validate(4, 4).map_err(spec_error)?;
                let a = norm(&c, spec).map_err(spec_error)?;
                let b = norm(&pt, spec).map_err(spec_error)?;
                lines.push(format!("{:<12} {:>16} {:>16}", spec.to_string(), sig12(a), sig12(b)));
                rows.push(json!({ "spec": spec.to_string(), "c_r": a, "partial_transpose": b }));
            }
            let results = json!({ "r": args.r, "norms": rows });
            Ok(Outcome {
                report: report(ctx, BTreeMap::new(), results, "ok", BTreeMap::new()),
                exit: 0,
                human: lines.join("\n"),
                artifacts: vec![
                    ("c_r.json".into(), MatrixFile::from_matrix(&c).with_shape(&bip)),
                    ("c_r_pt.json".into(), MatrixFile::from_matrix(&pt).with_shape(&bip)),
                ],
            })
        }
    }
}
