//! The `kcontact` command line.
//!
//! Every subcommand reads JSON documents (see [`document`]) and prints JSON on
//! stdout. Exit status: 0 on success, 1 when the mathematics says no (invalid
//! cone, obstruction, failed identity), 2 on misuse or malformed input.

pub mod catalog;
pub mod document;
pub mod svg;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::cone::GoodCone;
use crate::construct::{close_chain, example_family_d, obstructed_family};
use crate::error::{Error, Result};
use crate::euler::verify_global_identity;
use crate::exactnum::{V2, V3};
use crate::graph::{count_nontrivial_chains, extract_graph, toric_condition_check};
use crate::json;
use crate::reeb::{choose_transverse_circle, is_admissible, isotropy_profile, moment_polygon, ReebVector};
use crate::surgery::{blowdown_delete, cut, find_blowdown_normal, plan_blowdown_sequence, replace_range, SurgeryPlan};

pub use document::Document;

#[derive(Parser, Debug)]
#[command(name = "kcontact", version, about = "Good cones, Reeb rays and their invariants")]
struct Cli {
    /// Discriminant d of Q(sqrt d) for Reeb rays that do not state one.
    #[arg(long, global = true, default_value_t = crate::exactnum::DEFAULT_D)]
    d: u64,
    /// Seed for randomized constructions.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Radius of lattice searches.
    #[arg(long = "box", global = true, default_value_t = crate::surgery::DEFAULT_BOX)]
    search_box: u32,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check convexity and the Delzant condition.
    Validate { file: PathBuf },
    /// Lens-space invariants (b, f) of one face or of all faces.
    Invariants {
        file: PathBuf,
        #[arg(long)]
        face: Option<usize>,
        /// Include the gluing matrix.
        #[arg(long)]
        gluing: bool,
    },
    /// Rank of the Reeb ray and admissibility.
    Rank { file: PathBuf },
    /// Isotropy profile and moment polygon.
    Profile { file: PathBuf },
    /// Isotropy graph with its canonical form.
    Graph { file: PathBuf },
    /// Global Euler-sum identity.
    EulerCheck {
        file: PathBuf,
        /// Transverse circle; chosen automatically when absent.
        #[arg(long, allow_hyphen_values = true)]
        y: Option<String>,
    },
    /// Cut the cone by {t . v >= 0}.
    Blowup {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
    },
    /// Delete face i, replace it by --t, or search a replacement with --find.
    Blowdown {
        file: PathBuf,
        #[arg(long)]
        face: usize,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "find")]
        t: Option<String>,
        #[arg(long)]
        find: bool,
        /// Constraint v0 . t = value for --find.
        #[arg(long, allow_hyphen_values = true, requires = "value")]
        v0: Option<String>,
        #[arg(long, allow_hyphen_values = true, requires = "v0")]
        value: Option<String>,
    },
    /// Blow-down plan keeping the listed faces, or replay of a stored plan.
    Plan {
        file: PathBuf,
        #[arg(long, required_unless_present = "replay")]
        keep: Option<String>,
        #[arg(long)]
        replay: Option<PathBuf>,
    },
    /// Build an explicit family member.
    Construct {
        family: Family,
        #[arg(long)]
        k: u64,
    },
    /// Close a convex chain of normals into a good cone.
    Close { file: PathBuf },
    /// Search v with det(v_min, v) = det(v, v_max) = 1.
    ToricCheck {
        #[arg(long, allow_hyphen_values = true)]
        vmin: String,
        #[arg(long, allow_hyphen_values = true)]
        vmax: String,
    },
    /// SVG of the moment cross-section.
    Render {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Content-addressed document store.
    Catalog {
        #[command(subcommand)]
        op: CatalogOp,
    },
}

#[derive(Subcommand, Debug)]
enum CatalogOp {
    Add {
        file: PathBuf,
        #[arg(long)]
        store: PathBuf,
    },
    List {
        #[arg(long)]
        store: PathBuf,
    },
    Get {
        hash: String,
        #[arg(long)]
        store: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Example,
    Obstructed,
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Io(_) => 2,
        _ => 1,
    }
}

/// Runs the command line `args` (including the program name), writing to
/// `out` and `err`; returns the exit status.
pub fn run_with<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    2
                }
            };
        }
    };
    let mut ctx = Ctx { cli: &cli, err, raw: None };
    match ctx.dispatch() {
        Ok(v) => {
            if let Some(v) = v {
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&v).expect("json"));
            }
            if let Some(text) = ctx.raw.take() {
                let _ = write!(out, "{text}");
            }
            0
        }
        Err(Failure { error, report }) => {
            if let Some(r) = report {
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&r).expect("json"));
            }
            let _ = writeln!(ctx.err, "error: {error}");
            exit_code(&error)
        }
    }
}

pub fn run(args: Vec<String>) -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// An error with an optional JSON report for stdout.
struct Failure {
    error: Error,
    report: Option<Value>,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Failure {
        let report = match &error {
            Error::NotGood(r) => Some(serde_json::to_value(r).expect("json")),
            _ => None,
        };
        Failure { error, report }
    }
}

type Out = std::result::Result<Option<Value>, Failure>;

struct Ctx<'a> {
    cli: &'a Cli,
    err: &'a mut dyn Write,
    /// Non-JSON output, printed verbatim.
    raw: Option<String>,
}

fn parse_ints(s: &str, n: usize, what: &str) -> Result<Vec<BigInt>> {
    let xs: std::result::Result<Vec<BigInt>, _> = s.split(',').map(|x| x.trim().parse::<BigInt>()).collect();
    match xs {
        Ok(xs) if xs.len() == n => Ok(xs),
        _ => Err(Error::Parse(format!("--{what} expects {n} comma-separated integers, got \"{s}\""))),
    }
}

fn parse_v3_arg(s: &str, what: &str) -> Result<V3> {
    let xs = parse_ints(s, 3, what)?;
    Ok(V3::new(xs[0].clone(), xs[1].clone(), xs[2].clone()))
}

fn parse_v2_arg(s: &str, what: &str) -> Result<V2> {
    let xs = parse_ints(s, 2, what)?;
    Ok(V2([xs[0].clone(), xs[1].clone()]))
}

fn parse_list(s: &str, what: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|x| x.trim().parse::<usize>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|_| Error::Parse(format!("--{what} expects comma-separated indices, got \"{s}\"")))
}

fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    document::parse_text(&path.display().to_string(), &text)
}

impl Ctx<'_> {
    fn note(&mut self, msg: &str) {
        let _ = writeln!(self.err, "note: {msg}");
    }

    /// Loads and orients a document; the cone is not yet required to be good.
    fn load(&mut self, path: &Path) -> Result<Document> {
        let mut doc = Document::from_json(&read_json(path)?, self.cli.d)?;
        let (cone, flipped) = doc.cone.oriented();
        if flipped {
            self.note("normals listed clockwise; using the reversed order");
            doc.cone = cone;
        }
        Ok(doc)
    }

    fn load_good(&mut self, path: &Path) -> Result<Document> {
        let doc = self.load(path)?;
        doc.cone.require_good()?;
        Ok(doc)
    }

    fn load_with_reeb(&mut self, path: &Path) -> Result<(GoodCone, ReebVector)> {
        let doc = self.load_good(path)?;
        let r = doc.reeb.ok_or_else(|| Error::Parse(format!("{}: document has no \"reeb\"", path.display())))?;
        Ok((doc.cone, r))
    }

    fn dispatch(&mut self) -> Out {
        let cli = self.cli;
        match &cli.cmd {
            Cmd::Validate { file } => {
                let doc = self.load(file)?;
                let report = doc.cone.validate();
                if report.is_good {
                    Ok(Some(json!({"is_good": true})))
                } else {
                    Err(Failure { error: Error::NotGood(report.clone()), report: Some(serde_json::to_value(report).expect("json")) })
                }
            }
            Cmd::Invariants { file, face, gluing } => {
                let doc = self.load_good(file)?;
                let one = |i: usize| -> Result<Value> {
                    if i >= doc.cone.len() {
                        return Err(Error::Precondition(format!("face {i} out of range 0..{}", doc.cone.len())));
                    }
                    let fi = doc.cone.face_invariants(i as isize)?;
                    let mut v = json!({
                        "b": json::int(&fi.b),
                        "f": json::int(&fi.f),
                        "blowdown": doc.cone.can_blowdown_to_orbit(i as isize)?,
                    });
                    if *gluing {
                        v["gluing"] = json::mat3(&fi.gluing);
                    }
                    Ok(v)
                };
                match face {
                    Some(i) => Ok(Some(one(*i)?)),
                    None => {
                        let all = (0..doc.cone.len())
                            .map(|i| one(i).map(|mut v| {
                                v["face"] = json!(i);
                                v
                            }))
                            .collect::<Result<Vec<_>>>()?;
                        Ok(Some(Value::Array(all)))
                    }
                }
            }
            Cmd::Rank { file } => {
                let (cone, r) = self.load_with_reeb(file)?;
                Ok(Some(json!({"rank": r.rank(), "admissible": is_admissible(&cone, &r)?})))
            }
            Cmd::Profile { file } => {
                let (cone, r) = self.load_with_reeb(file)?;
                let mut v = isotropy_profile(&cone, &r)?.to_json();
                v["polygon"] = moment_polygon(&cone, &r)?.to_json();
                Ok(Some(v))
            }
            Cmd::Graph { file } => {
                let (cone, r) = self.load_with_reeb(file)?;
                if !is_admissible(&cone, &r)? {
                    return Err(Error::Inadmissible.into());
                }
                let g = extract_graph(&cone, &r)?;
                let mut v = g.to_json();
                v["nontrivial_chains"] = json::int(&count_nontrivial_chains(&g));
                Ok(Some(v))
            }
            Cmd::EulerCheck { file, y } => {
                let (cone, r) = self.load_with_reeb(file)?;
                let y = match y {
                    Some(s) => parse_v3_arg(s, "y")?,
                    None => choose_transverse_circle(&cone, &r, cli.search_box)?,
                };
                let rep = verify_global_identity(&cone, &r, &y)?;
                let mut v = rep.to_json();
                v["y"] = json::v3(&y);
                if !rep.ok {
                    return Err(Failure { error: Error::Identity("lhs != rhs".into()), report: Some(v) });
                }
                Ok(Some(v))
            }
            Cmd::Blowup { file, t } => {
                let doc = self.load_good(file)?;
                let t = parse_v3_arg(t, "t")?;
                Ok(Some(cut(&doc.cone, &t)?.to_json()))
            }
            Cmd::Blowdown { file, face, t, find, v0, value } => {
                let doc = self.load_good(file)?;
                let cone = &doc.cone;
                if *face >= cone.len() {
                    return Err(Error::Precondition(format!("face {face} out of range 0..{}", cone.len())).into());
                }
                if let Some(t) = t {
                    let t = parse_v3_arg(t, "t")?;
                    let out = replace_range(cone, *face, *face, &t)?;
                    return Ok(Some(json!({"cone": out.to_json(), "replaced": face, "t": json::v3(&t)})));
                }
                if *find {
                    let constraint = match (v0, value) {
                        (Some(v0), Some(val)) => {
                            let val = val.trim().parse::<BigInt>().map_err(|_| Error::Parse(format!("--value expects an integer, got \"{val}\"")))?;
                            Some((parse_v3_arg(v0, "v0")?, val))
                        }
                        _ => None,
                    };
                    return match find_blowdown_normal(cone, *face, constraint, cli.search_box)? {
                        Some(t) => {
                            let out = replace_range(cone, *face, *face, &t)?;
                            Ok(Some(json!({"cone": out.to_json(), "replaced": face, "t": json::v3(&t)})))
                        }
                        None => Err(Error::SearchExhausted(format!("no admissible normal for face {face} within radius {}", cli.search_box)).into()),
                    };
                }
                match blowdown_delete(cone, *face) {
                    Ok(out) => Ok(Some(json!({"cone": out.to_json(), "deleted": face}))),
                    Err(e) => {
                        let i = *face as isize;
                        let fi = cone.face_invariants(i)?;
                        let report = json!({
                            "blowdown": false,
                            "face": face,
                            "b": json::int(&fi.b),
                            "f": json::int(&fi.f),
                            "neighbors": [json::v3(cone.n(i - 1)), json::v3(cone.n(i + 1))],
                            "delzant_pair": crate::exactnum::is_delzant_pair(cone.n(i - 1), cone.n(i + 1)),
                            "reason": e.to_string(),
                        });
                        Err(Failure { error: e, report: Some(report) })
                    }
                }
            }
            Cmd::Plan { file, keep, replay } => {
                let doc = self.load_good(file)?;
                if let Some(p) = replay {
                    let plan = SurgeryPlan::from_json(&read_json(p)?)?;
                    let out = plan.replay(&doc.cone)?;
                    return Ok(Some(json!({"result": out.to_json(), "steps": plan.steps.len()})));
                }
                let keep = parse_list(keep.as_deref().unwrap_or_default(), "keep")?;
                let plan = plan_blowdown_sequence(&doc.cone, &keep, cli.search_box)?;
                let out = plan.replay(&doc.cone)?;
                Ok(Some(json!({"plan": plan.to_json(), "result": out.to_json()})))
            }
            Cmd::Construct { family, k } => {
                let doc = match family {
                    Family::Example => {
                        let (cone, r) = example_family_d(*k, cli.d)?;
                        let mut d = Document::new(cone, Some(r));
                        d.name = Some(format!("example k={k}"));
                        d.provenance = Some(format!("construct example --k {k} --d {}", cli.d));
                        d.to_json()
                    }
                    Family::Obstructed => {
                        let o = obstructed_family(*k, cli.seed)?;
                        let mut d = Document::new(o.cone, Some(o.reeb));
                        d.name = Some(format!("obstructed k={k}"));
                        d.provenance = Some(format!("construct obstructed --k {k} --seed {}", cli.seed));
                        let mut v = d.to_json();
                        v["steps"] = o
                            .steps
                            .iter()
                            .map(|s| json!({"a": json::int(&s.a), "c": json::int(&s.c), "e": json::int(&s.e)}))
                            .collect();
                        v
                    }
                };
                Ok(Some(doc))
            }
            Cmd::Close { file } => {
                let chain = document::parse_normals(&read_json(file)?)?;
                let t = close_chain(&chain, 1 << 20)?;
                let mut all = chain;
                all.push(t.clone());
                Ok(Some(json!({"t": json::v3(&t), "cone": GoodCone::good(all)?.to_json()})))
            }
            Cmd::ToricCheck { vmin, vmax } => {
                let v = toric_condition_check(&parse_v2_arg(vmin, "vmin")?, &parse_v2_arg(vmax, "vmax")?)?;
                Ok(Some(json!({"v": v.as_ref().map(json::v2)})))
            }
            Cmd::Render { file, out } => {
                let (cone, r) = self.load_with_reeb(file)?;
                let text = svg::render_svg(&cone, &r)?;
                match out {
                    Some(p) => {
                        fs::write(p, &text).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?;
                        Ok(Some(json!({"written": p.display().to_string(), "faces": cone.len()})))
                    }
                    None => {
                        self.raw = Some(text);
                        Ok(None)
                    }
                }
            }
            Cmd::Catalog { op } => match op {
                CatalogOp::Add { file, store } => {
                    let doc = self.load(file)?;
                    let hash = catalog::Store::new(store).add(&doc)?;
                    Ok(Some(json!({"hash": hash})))
                }
                CatalogOp::List { store } => Ok(Some(catalog::Store::new(store).list()?)),
                CatalogOp::Get { hash, store } => Ok(Some(catalog::Store::new(store).get(hash)?)),
            },
        }
    }
}
