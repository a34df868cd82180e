use std::fs;
use std::path::{Path, PathBuf};

use nielsen_core::abelian::{abelian_reduce, predicted_components};
use nielsen_core::certify::{ac_normalize_2gen_nilpotent, frattini_lift, heisenberg_canonicalize};
use nielsen_core::corpus;
use nielsen_core::explorer::{self, Budget, ExportFormat, GraphQuery, Mode};
use nielsen_core::structure::{frattini, is_class_c, is_nilpotent, rank_and_weight};
use nielsen_core::{Certificate, Error, Group, GroupSpec, Prediction, Tuple};
use serde_json::{json, Value};

use crate::{FormatArg, GraphArgs, GroupArg, ModeArg, TupleArg, VerifyCommand};

pub struct Context {
    pub workers: Option<usize>,
}

/// Output of a command: a JSON document or raw text (DOT).
pub enum Doc {
    Json(Value),
    Text(String),
}

#[derive(Debug)]
pub struct CliError {
    code: String,
    message: String,
    context: Value,
    exit: u8,
}

impl CliError {
    pub fn usage(message: &str) -> CliError {
        CliError {
            code: "usage".into(),
            message: message.into(),
            context: Value::Null,
            exit: 2,
        }
    }

    fn io(path: &Path, e: std::io::Error) -> CliError {
        CliError {
            code: "io".into(),
            message: e.to_string(),
            context: json!({ "path": path.display().to_string() }),
            exit: 2,
        }
    }

    pub fn exit_code(&self) -> u8 {
        self.exit
    }

    pub fn to_json(&self) -> Value {
        json!({ "code": self.code, "message": self.message, "context": self.context })
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> CliError {
        let exit = match e {
            Error::BudgetExceeded { .. } => 3,
            Error::NoCertificate(_) => 4,
            _ => 2,
        };
        let context = match &e {
            Error::BudgetExceeded {
                what,
                required,
                limit,
            } => json!({ "what": what, "required": required, "limit": limit }),
            Error::Parse { offset, .. } => json!({ "offset": offset }),
            _ => Value::Null,
        };
        CliError {
            code: e.code().into(),
            message: e.to_string(),
            context,
            exit,
        }
    }
}

type Out = Result<Doc, CliError>;

pub fn emit(doc: &Doc, output: Option<&Path>) -> Result<(), CliError> {
    let text = match doc {
        Doc::Json(v) => serde_json::to_string_pretty(v).expect("json values serialize") + "\n",
        Doc::Text(s) => s.clone(),
    };
    match output {
        Some(p) => fs::write(p, text).map_err(|e| CliError::io(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_group(arg: &GroupArg) -> Result<Group, CliError> {
    if let Some(name) = arg.group.strip_prefix("builtin:") {
        return Ok(corpus::builtin(name)?);
    }
    let path = PathBuf::from(&arg.group);
    let text = fs::read_to_string(&path).map_err(|e| CliError::io(&path, e))?;
    Ok(Group::from_spec(GroupSpec::from_json(&text)?)?)
}

fn load_tuple(g: &Group, arg: &TupleArg) -> Result<Tuple, CliError> {
    match (&arg.tuple, &arg.words) {
        (Some(t), _) => Ok(Tuple::parse(g, t)?),
        (None, Some(w)) => Ok(Tuple::from_words(g, w)?),
        (None, None) => Err(CliError::usage("--tuple or --words is required")),
    }
}

fn mode(m: ModeArg) -> Mode {
    match m {
        ModeArg::Nielsen => Mode::Nielsen,
        ModeArg::Ac => Mode::Ac,
    }
}

fn budget(limit: Option<u64>) -> Budget {
    let mut b = Budget::default();
    if let Some(v) = limit {
        b.max_vertices = v;
    }
    b
}

fn query(ctx: &Context, a: &GraphArgs) -> Result<GraphQuery, CliError> {
    let g = load_group(&a.group)?;
    let mut q = GraphQuery::new(&g, a.n, mode(a.mode)).with_budget(budget(a.budget));
    if let Some(s) = &a.conjugators {
        let elems = s
            .split(';')
            .map(|e| g.parse_element(e.trim()))
            .collect::<Result<Vec<_>, _>>()?;
        q = q.with_conjugators(elems);
    }
    if let Some(w) = ctx.workers {
        q = q.with_workers(w);
    }
    Ok(q)
}

pub fn components(ctx: &Context, a: &GraphArgs) -> Out {
    let q = query(ctx, a)?;
    Ok(Doc::Json(explorer::components(&q)?.to_json()))
}

pub fn path(ctx: &Context, a: &GraphArgs, from: &str, to: &str) -> Out {
    let q = query(ctx, a)?;
    let from = Tuple::parse(&q.group, from)?;
    let to = Tuple::parse(&q.group, to)?;
    let cert = explorer::find_path(&q, &from, &to)?
        .ok_or_else(|| Error::NoCertificate("the tuples lie in different components".into()))?;
    Ok(Doc::Json(cert.to_json()))
}

fn nielsen_certificate(g: &Group, t: &Tuple) -> Result<Certificate, CliError> {
    if g.heisenberg().is_some() {
        return Ok(heisenberg_canonicalize(g, t)?);
    }
    if let Some(form) = g.abelian_form() {
        return Ok(abelian_reduce(&form, t)?);
    }
    Ok(frattini_lift(g, t.len(), t)?)
}

pub fn certify(g: &GroupArg, m: ModeArg, t: &TupleArg, basis: Option<&str>) -> Out {
    let g = load_group(g)?;
    let t = load_tuple(&g, t)?;
    let cert = match m {
        ModeArg::Nielsen => nielsen_certificate(&g, &t)?,
        ModeArg::Ac => {
            let basis = match basis {
                Some(b) => Tuple::parse(&g, b)?,
                None => Tuple::new(&g, g.generators())?,
            };
            ac_normalize_2gen_nilpotent(&g, &t, &basis)?
        }
    };
    Ok(Doc::Json(cert.to_json()))
}

pub fn canonicalize(g: &GroupArg, t: &TupleArg) -> Out {
    let g = load_group(g)?;
    let t = load_tuple(&g, t)?;
    let cert = nielsen_certificate(&g, &t)?;
    Ok(Doc::Json(json!({
        "canonical": cert.target().to_json(),
        "certificate": cert.to_json(),
    })))
}

fn prediction_json(p: Prediction) -> Value {
    match p {
        Prediction::Empty => json!({ "components": 0, "empty": true }),
        Prediction::Components(c) => json!({ "components": c }),
    }
}

pub fn predict(g: &GroupArg, n: usize) -> Out {
    let g = load_group(g)?;
    let form = g.abelianization()?.form;
    let mut doc = prediction_json(predicted_components(&form, n));
    doc["abelian_invariants"] = json!(form.to_string());
    doc["n"] = json!(n);
    Ok(Doc::Json(doc))
}

pub fn verify_certificate(path: &Path) -> Out {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let v: Value = serde_json::from_str(&text).map_err(Error::from)?;
    let cert = Certificate::from_json(&v)?;
    Ok(Doc::Json(json!({
        "replay": true,
        "kind": cert.kind().as_str(),
        "moves": cert.moves().len(),
        "used_fallback": cert.used_fallback(),
    })))
}

pub fn verify(ctx: &Context, c: VerifyCommand) -> Out {
    match c {
        VerifyCommand::Preimage {
            group,
            n,
            budget: b,
        } => {
            let g = load_group(&group)?;
            let report =
                run_with_workers(ctx, || explorer::verify_preimage_theorem(&g, n, budget(b)))?;
            Ok(Doc::Json(report.to_json()))
        }
        VerifyCommand::AbelianCount { group, n } => {
            let g = load_group(&group)?;
            let form = g.abelian_form().ok_or_else(|| {
                Error::BackendMismatch("abelian-count needs an abelian group spec".into())
            })?;
            let mut q = GraphQuery::new(&g, n, Mode::Nielsen);
            if let Some(w) = ctx.workers {
                q = q.with_workers(w);
            }
            let explored = explorer::components(&q)?.component_count;
            let predicted = predicted_components(&form, n);
            let count = match predicted {
                Prediction::Empty => 0,
                Prediction::Components(c) => c,
            };
            Ok(Doc::Json(json!({
                "explored": explored,
                "predicted": count,
                "agree": explored == count,
            })))
        }
        VerifyCommand::Corpus => {
            let mut rows = Vec::new();
            let mut mismatches = 0;
            for (name, g) in corpus::finite_corpus() {
                let c = is_class_c(&g)?;
                let nil = is_nilpotent(&g)?;
                mismatches += usize::from(c != nil);
                rows.push(json!({ "group": name, "class_c": c, "nilpotent": nil }));
            }
            Ok(Doc::Json(
                json!({ "groups": rows, "mismatches": mismatches }),
            ))
        }
        VerifyCommand::Certificate { certificate } => verify_certificate(&certificate),
    }
}

fn run_with_workers<T: Send>(
    ctx: &Context,
    f: impl FnOnce() -> Result<T, Error> + Send,
) -> Result<T, CliError> {
    match ctx.workers {
        Some(w) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(w)
                .build()
                .map_err(|e| CliError::usage(&e.to_string()))?;
            Ok(pool.install(f)?)
        }
        None => Ok(f()?),
    }
}

pub fn export(ctx: &Context, a: &GraphArgs, format: FormatArg) -> Out {
    let q = query(ctx, a)?;
    let text = match format {
        FormatArg::Dot => explorer::export_graph(&q, ExportFormat::Dot)?,
        FormatArg::Json => explorer::export_graph(&q, ExportFormat::Json)?,
    };
    Ok(Doc::Text(text))
}

pub fn inspect(g: &GroupArg) -> Out {
    let g = load_group(g)?;
    let ab = g.abelianization()?.form;
    let mut doc = json!({
        "kind": g.kind_name(),
        "order": g.order(),
        "abelianization": ab.to_string(),
        "generators": g.generators().iter().map(|e| g.format_element(e)).collect::<Vec<_>>(),
    });
    if g.is_finite() {
        let (rank, weight) = rank_and_weight(&g)?;
        doc["rank"] = json!(rank);
        doc["weight"] = json!(weight);
        doc["nilpotent"] = json!(is_nilpotent(&g)?);
        doc["class_c"] = json!(is_class_c(&g)?);
        doc["frattini_order"] = json!(frattini(&g)?.order());
    }
    Ok(Doc::Json(doc))
}
