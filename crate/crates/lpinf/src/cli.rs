//! The `lpinf` command line: argument parsing, dispatch and reports.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::dgla::{total_cohomology, DgLie};
use crate::error::{Error, Result, Violation};
use crate::io::{self, name, Resolved, SpecDocument};
use crate::leibniz::{htan_compatibility, tuples, LeibnizInfty};
use crate::lfmod::{InftyMorphism, LfModule};
use crate::lp::{leibniz_from_lp, lie_quotient, WeakLp};
use crate::model::{path_object, pullback, strictify_cofibration, strictify_fibration};
use crate::scalar::fmt_q;
use crate::trees::{enumerate_mlrt, TreeEvaluator};

/// Directory searched for inputs given by bare file name that do not exist
/// relative to the working directory.
pub const FIXTURE_DIR_VAR: &str = "LPINF_FIXTURES";

#[derive(Debug, Parser)]
#[command(
    name = "lpinf",
    version,
    about = "Exact checks for ∞-modules, weak Loday–Pirashvili modules and Leibniz∞[1] algebras"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Recursive,
    Closed,
    Trees,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate every object in a document.
    Validate { input: PathBuf },
    /// Evaluate λ_N on all basis tuples of the selected weak LP module.
    Leibniz {
        input: PathBuf,
        #[arg(long)]
        arity: usize,
        #[arg(long, value_enum, default_value = "all")]
        method: Method,
        /// Also verify the Leibniz∞[1] identities through the given arity.
        #[arg(long)]
        identities: bool,
    },
    /// Enumerate classes of monotonically labelled rooted trees with N vertices.
    Trees {
        #[arg(long)]
        n: usize,
    },
    /// Verify the homotopies of a certificate file against a document.
    Homotopy {
        input: PathBuf,
        #[arg(long)]
        certificate: PathBuf,
    },
    /// Strictify a fibration or cofibration.
    Strictify {
        input: PathBuf,
        #[arg(long)]
        morphism: Option<String>,
    },
    /// Pull a fibration back along a morphism with the same target.
    Pullback {
        input: PathBuf,
        #[arg(long)]
        fibration: String,
        #[arg(long)]
        along: String,
    },
    /// Build and verify the path object of a module.
    Path {
        input: PathBuf,
        #[arg(long)]
        module: Option<String>,
    },
    /// Tangent cohomology, or total CE cohomology truncated by weight.
    Cohomology {
        input: PathBuf,
        #[arg(long, conflicts_with = "total", required_unless_present = "total")]
        tangent: bool,
        #[arg(long, requires = "weight_cutoff")]
        total: bool,
        #[arg(long)]
        weight_cutoff: Option<usize>,
        /// With --tangent, also report H(M, d₀) for this module.
        #[arg(long)]
        module: Option<String>,
    },
    /// Lie quotient of the document's Leibniz algebra (or of the LP module's).
    QuotientLie { input: PathBuf },
    /// Compare the Leibniz bracket on H_tan(M) with the truncation of λ₂.
    HtanCheck { input: PathBuf },
}

/// Machine-readable outcome of one command; fields are written in this order.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub input_digest: String,
    pub status: String,
    pub exit_code: i32,
    pub timing_ms: u64,
    pub details: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<SpecDocument>,
}

impl Report {
    /// Header fields first, then the produced document with its tables
    /// nested under `output`.
    pub fn render(&self) -> String {
        let header = Report {
            output: None,
            ..self.clone()
        };
        let mut text =
            toml::to_string_pretty(&header).expect("reports contain only strings and integers");
        if let Some(doc) = &self.output {
            for line in io::serialize(doc).lines() {
                text.push('\n');
                match line.strip_prefix('[') {
                    Some(rest) => {
                        text.push_str("[output.");
                        text.push_str(rest);
                    }
                    None => text.push_str(line),
                }
            }
            text.push('\n');
        }
        text
    }
}

/// Result of a command body before it is wrapped into a report.
#[derive(Default)]
struct Outcome {
    details: Vec<String>,
    output: Option<SpecDocument>,
}

impl Outcome {
    fn line(&mut self, s: impl Into<String>) {
        self.details.push(s.into());
    }
}

/// Input problems that are not mathematical failures.
fn input_error(msg: impl Into<String>) -> Error {
    Error::Parse {
        line: 0,
        column: 0,
        message: msg.into(),
    }
}

fn locate_input(p: &Path) -> PathBuf {
    if p.exists() || p.components().count() != 1 {
        return p.to_path_buf();
    }
    if let Some(dir) = std::env::var_os(FIXTURE_DIR_VAR) {
        let dir = PathBuf::from(dir);
        for cand in [dir.join(p), dir.join(p).with_extension("toml")] {
            if cand.exists() {
                return cand;
            }
        }
    }
    p.to_path_buf()
}

struct Inputs {
    texts: Vec<(PathBuf, String)>,
}

impl Inputs {
    fn read(&mut self, p: &Path) -> Result<usize> {
        let path = locate_input(p);
        let text = std::fs::read_to_string(&path)
            .map_err(|e| input_error(format!("cannot read {}: {e}", path.display())))?;
        self.texts.push((path, text));
        Ok(self.texts.len() - 1)
    }

    fn digest(&self) -> String {
        let mut h = Sha256::new();
        for (_, t) in &self.texts {
            h.update((t.len() as u64).to_le_bytes());
            h.update(t.as_bytes());
        }
        let bytes = h.finalize();
        format!(
            "sha256:{}",
            bytes.iter().map(|b| format!("{b:02x}")).collect::<String>()
        )
    }

    /// Parses and resolves input `i`; located errors name the file.
    fn load(&self, i: usize) -> Result<(SpecDocument, Resolved)> {
        let (path, text) = &self.texts[i];
        io::load(text).map_err(|e| with_file(e, path))
    }
}

fn with_file(e: Error, path: &Path) -> Error {
    match e {
        Error::Parse {
            line,
            column,
            message,
        } => Error::Parse {
            line,
            column,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    }
}

/// Runs a parsed command line. Never panics on bad input.
pub fn run(cli: &Cli) -> Report {
    let start = Instant::now();
    let mut inputs = Inputs { texts: Vec::new() };
    let (command, result) = dispatch(&cli.command, &mut inputs);
    let mut report = Report {
        command: command.to_string(),
        input_digest: inputs.digest(),
        timing_ms: start.elapsed().as_millis() as u64,
        ..Report::default()
    };
    match result {
        Ok(out) => {
            report.status = "certificate".into();
            report.exit_code = 0;
            report.details = out.details;
            report.output = out.output;
        }
        Err(e) => {
            let math = e.is_mathematical();
            report.status = if math { "violation" } else { "input-error" }.into();
            report.exit_code = if math { 1 } else { 2 };
            report.witness = Some(e.to_string());
        }
    }
    report
}

fn dispatch(cmd: &Command, inputs: &mut Inputs) -> (&'static str, Result<Outcome>) {
    match cmd {
        Command::Validate { input } => ("validate", validate(inputs, input)),
        Command::Leibniz {
            input,
            arity,
            method,
            identities,
        } => (
            "leibniz",
            leibniz(inputs, input, *arity, *method, *identities),
        ),
        Command::Trees { n } => ("trees", trees(*n)),
        Command::Homotopy { input, certificate } => {
            ("homotopy", homotopy(inputs, input, certificate))
        }
        Command::Strictify { input, morphism } => {
            ("strictify", strictify(inputs, input, morphism.as_deref()))
        }
        Command::Pullback {
            input,
            fibration,
            along,
        } => ("pullback", pullback_cmd(inputs, input, fibration, along)),
        Command::Path { input, module } => ("path", path(inputs, input, module.as_deref())),
        Command::Cohomology {
            input,
            tangent,
            total: _,
            weight_cutoff,
            module,
        } => (
            "cohomology",
            cohomology(inputs, input, *tangent, *weight_cutoff, module.as_deref()),
        ),
        Command::QuotientLie { input } => ("quotient-lie", quotient_lie(inputs, input)),
        Command::HtanCheck { input } => ("htan-check", htan_check(inputs, input)),
    }
}

fn load_one(inputs: &mut Inputs, p: &Path) -> Result<(SpecDocument, Resolved)> {
    let i = inputs.read(p)?;
    inputs.load(i)
}

fn weak_lp(res: &Resolved) -> WeakLp {
    res.lp
        .clone()
        .unwrap_or_else(|| WeakLp::identity(&res.algebra))
}

fn classification(f: &InftyMorphism) -> Result<String> {
    let c = f.classify()?;
    let mut kinds = Vec::new();
    if c.weak_equivalence {
        kinds.push("weak equivalence");
    }
    if c.fibration {
        kinds.push("fibration");
    }
    if c.cofibration {
        kinds.push("cofibration");
    }
    Ok(if kinds.is_empty() {
        "unclassified".into()
    } else {
        kinds.join(", ")
    })
}

fn validate(inputs: &mut Inputs, input: &Path) -> Result<Outcome> {
    let (_, res) = load_one(inputs, input)?;
    let mut out = Outcome::default();
    let g = &res.algebra;
    g.verify_ce_square_zero()?;
    out.line(format!(
        "algebra: dimension {}, axioms hold, d_CE² = 0",
        g.dim()
    ));
    for (n, m) in &res.modules {
        m.verify_square_zero()?;
        out.line(format!("module {n}: dimension {}, d_tot² = 0", m.dim()));
    }
    for (n, f) in &res.morphisms {
        f.validate()?;
        out.line(format!(
            "morphism {n}: F∘d_tot = d_tot∘F, {}",
            classification(f)?
        ));
    }
    for (n, h) in &res.homotopies {
        h.verify()?;
        out.line(format!("homotopy {n}: direct and path-object routes agree"));
    }
    if let Some(l) = &res.leibniz {
        l.validate()?;
        out.line(format!(
            "leibniz: dimension {}, Leibniz rule holds, lie: {}",
            l.dim(),
            l.is_lie()
        ));
    }
    if res.lp.is_some() {
        out.line("lp: selected morphism lands in the adjoint module");
    }
    Ok(out)
}

fn tuple_name(m: &LfModule, args: &[usize]) -> String {
    args.iter()
        .map(|&i| m.space().name(i))
        .collect::<Vec<_>>()
        .join(", ")
}

fn leibniz(
    inputs: &mut Inputs,
    input: &Path,
    arity: usize,
    method: Method,
    identities: bool,
) -> Result<Outcome> {
    if arity == 0 {
        return Err(input_error("--arity must be at least 1"));
    }
    let (_, res) = load_one(inputs, input)?;
    let ev = LeibnizInfty::new(weak_lp(&res));
    let m = ev.f.module().clone();
    let mut trees = TreeEvaluator::new(&ev);
    let mut out = Outcome::default();
    let all = tuples(ev.dim(), arity);
    let mut nonzero = 0;
    for args in &all {
        let value = match method {
            Method::Recursive => ev.lambda_recursive(args),
            Method::Closed => ev.lambda_closed_form(args),
            Method::Trees => trees.lambda(args),
            Method::All => {
                let r = ev.lambda_recursive(args);
                for (other, v) in [
                    ("closed form", ev.lambda_closed_form(args)),
                    ("trees", trees.lambda(args)),
                ] {
                    if v != r {
                        return Err(Violation::new(
                            format!("recursion = {other}"),
                            format!(
                                "λ_{arity}({}): {} vs {}",
                                tuple_name(&m, args),
                                m.render(&r),
                                m.render(&v)
                            ),
                        )
                        .into());
                    }
                }
                r
            }
        };
        if !value.is_zero() {
            nonzero += 1;
            out.line(format!(
                "λ_{arity}({}) = {}",
                tuple_name(&m, args),
                m.render(&value)
            ));
        }
    }
    let methods = match method {
        Method::All => "recursive, closed, trees agree".to_string(),
        other => format!("{other:?}").to_lowercase(),
    };
    out.details.insert(
        0,
        format!(
            "arity {arity}: {} tuples, {nonzero} nonzero, {methods}",
            all.len()
        ),
    );
    if identities {
        ev.verify_identities(arity)?;
        out.line(format!("Leibniz∞[1] identities hold through arity {arity}"));
    }
    Ok(out)
}

fn trees(n: usize) -> Result<Outcome> {
    if n == 0 || n > 8 {
        return Err(input_error("--n must be between 1 and 8"));
    }
    let classes = enumerate_mlrt(n);
    let mut out = Outcome::default();
    out.line(format!("n = {n}: {} classes", classes.len()));
    for c in &classes {
        let (tree, labels) = c.representative();
        out.line(format!(
            "parents {:?} labels {:?} size {}",
            tree.parents(),
            labels,
            c.size
        ));
    }
    Ok(out)
}

fn homotopy(inputs: &mut Inputs, input: &Path, certificate: &Path) -> Result<Outcome> {
    let a = inputs.read(input)?;
    let b = inputs.read(certificate)?;
    let (pa, ta) = inputs.texts[a].clone();
    let (pb, tb) = inputs.texts[b].clone();
    let mut doc = io::parse(&ta).map_err(|e| with_file(e, &pa))?;
    let cert = io::parse(&tb).map_err(|e| with_file(e, &pb))?;
    if cert.homotopies.is_empty() {
        return Err(with_file(
            input_error("the certificate contains no homotopies"),
            &pb,
        ));
    }
    let names: Vec<String> = cert
        .homotopies
        .keys()
        .map(|k| k.get_ref().clone())
        .collect();
    // everything but the certificate's homotopies must resolve against the input text
    doc.homotopies.clear();
    io::resolve(&doc, &ta).map_err(|e| with_file(e, &pa))?;
    doc.merge(cert, &tb).map_err(|e| with_file(e, &pb))?;
    let res = io::resolve(&doc, &tb).map_err(|e| with_file(e, &pb))?;
    let mut out = Outcome::default();
    for n in names {
        let c = &res.homotopies[&n];
        c.verify()?;
        out.line(format!(
            "{n}: F − F′ = d_tot∘H + H∘d_tot; path-object route agrees"
        ));
    }
    Ok(out)
}

fn pick<'a, V>(
    map: &'a std::collections::BTreeMap<String, V>,
    key: Option<&str>,
    what: &str,
) -> Result<(String, &'a V)> {
    match key {
        Some(k) => map
            .get(k)
            .map(|v| (k.to_string(), v))
            .ok_or_else(|| input_error(format!("unknown {what} {k:?}"))),
        None => map
            .iter()
            .next()
            .map(|(k, v)| (k.clone(), v))
            .ok_or_else(|| input_error(format!("the document has no {what}"))),
    }
}

fn module_name(res: &Resolved, m: &LfModule) -> Option<String> {
    res.modules
        .iter()
        .find(|(_, v)| ***v == *m)
        .map(|(k, _)| k.clone())
}

fn base_document(g: &DgLie) -> SpecDocument {
    SpecDocument {
        algebra: Some(io::algebra_spec(g)),
        ..SpecDocument::default()
    }
}

fn strictify(inputs: &mut Inputs, input: &Path, morphism: Option<&str>) -> Result<Outcome> {
    let (_, res) = load_one(inputs, input)?;
    let (fname, phi) = pick(&res.morphisms, morphism, "morphism")?;
    let src = module_name(&res, &phi.source).unwrap_or_else(|| "M".into());
    let tgt = module_name(&res, &phi.target).unwrap_or_else(|| "N".into());
    let c = phi.classify()?;
    let mut out = Outcome::default();
    let mut doc = base_document(&res.algebra);
    doc.modules
        .insert(name(src.clone()), io::module_spec(&phi.source));
    doc.modules
        .insert(name(tgt.clone()), io::module_spec(&phi.target));
    if c.fibration {
        let st = strictify_fibration(phi)?;
        let new = format!("{src}_strict");
        doc.modules
            .insert(name(new.clone()), io::module_spec(&st.module));
        doc.morphisms
            .insert(name("psi"), io::morphism_spec(&new, &src, &st.psi));
        doc.morphisms.insert(
            name("psi_inverse"),
            io::morphism_spec(&src, &new, &st.psi_inverse),
        );
        doc.morphisms
            .insert(name("strict"), io::morphism_spec(&new, &tgt, &st.strict));
        out.line(format!(
            "{fname}: fibration; {fname}∘psi has vanishing higher components"
        ));
    } else if c.cofibration {
        let st = strictify_cofibration(phi)?;
        let new = format!("{tgt}_strict");
        doc.modules
            .insert(name(new.clone()), io::module_spec(&st.module));
        doc.morphisms
            .insert(name("psi"), io::morphism_spec(&tgt, &new, &st.psi));
        doc.morphisms.insert(
            name("psi_inverse"),
            io::morphism_spec(&new, &tgt, &st.psi_inverse),
        );
        doc.morphisms
            .insert(name("strict"), io::morphism_spec(&src, &new, &st.strict));
        out.line(format!(
            "{fname}: cofibration; psi∘{fname} has vanishing higher components"
        ));
    } else {
        return Err(Violation::new(
            "fibration or cofibration",
            format!("the leading component of {fname} is neither surjective nor injective"),
        )
        .into());
    }
    out.output = Some(doc);
    Ok(out)
}

fn pullback_cmd(
    inputs: &mut Inputs,
    input: &Path,
    fibration: &str,
    along: &str,
) -> Result<Outcome> {
    let (_, res) = load_one(inputs, input)?;
    let (_, phi) = pick(&res.morphisms, Some(fibration), "morphism")?;
    let (_, psi) = pick(&res.morphisms, Some(along), "morphism")?;
    let pb = pullback(phi, psi)?;
    pb.module.verify_square_zero()?;
    let src = module_name(&res, &phi.source).unwrap_or_else(|| "E".into());
    let base = module_name(&res, &psi.source).unwrap_or_else(|| "P".into());
    let mut out = Outcome::default();
    out.line(format!(
        "pullback: dimension {}, kernel of the leading component has dimension {}",
        pb.module.dim(),
        pb.kernel.len()
    ));
    out.line("square commutes exactly; d_tot² = 0 on the pullback");
    out.line(format!(
        "projection to {base}: {}",
        classification(&pb.to_base)?
    ));
    let mut doc = base_document(&res.algebra);
    doc.modules
        .insert(name(src.clone()), io::module_spec(&phi.source));
    doc.modules
        .insert(name(base.clone()), io::module_spec(&psi.source));
    doc.modules
        .insert(name("pullback"), io::module_spec(&pb.module));
    doc.morphisms.insert(
        name("to_base"),
        io::morphism_spec("pullback", &base, &pb.to_base),
    );
    doc.morphisms.insert(
        name("to_source"),
        io::morphism_spec("pullback", &src, &pb.to_source),
    );
    out.output = Some(doc);
    Ok(out)
}

fn path(inputs: &mut Inputs, input: &Path, module: Option<&str>) -> Result<Outcome> {
    let (_, res) = load_one(inputs, input)?;
    let (mname, m) = pick(&res.modules, module, "module")?;
    let p = path_object(m)?;
    p.total.verify_square_zero()?;
    p.verify()?;
    let mut out = Outcome::default();
    out.line(format!(
        "J({mname}): dimension {}, d_tot² = 0",
        p.total.dim()
    ));
    out.line("ε₀∘s = ε₁∘s = id, (ε₀,ε₁)∘s = Δ");
    out.line(format!("s: {}", classification(&p.s)?));
    out.line(format!("(ε₀,ε₁): {}", classification(&p.eps)?));
    let mut doc = base_document(&res.algebra);
    doc.modules.insert(name(mname.clone()), io::module_spec(m));
    doc.modules.insert(name("J"), io::module_spec(&p.total));
    doc.morphisms
        .insert(name("s"), io::morphism_spec(&mname, "J", &p.s));
    doc.morphisms
        .insert(name("eps0"), io::morphism_spec("J", &mname, &p.eps0));
    doc.morphisms
        .insert(name("eps1"), io::morphism_spec("J", &mname, &p.eps1));
    out.output = Some(doc);
    Ok(out)
}

fn cohomology(
    inputs: &mut Inputs,
    input: &Path,
    tangent: bool,
    cutoff: Option<usize>,
    module: Option<&str>,
) -> Result<Outcome> {
    let (_, res) = load_one(inputs, input)?;
    let g = &res.algebra;
    let mut out = Outcome::default();
    if tangent {
        for h in g.tangent_cohomology()? {
            out.line(format!("H_tan^{}(g) = {}", h.degree, h.dimension));
        }
        if let Some(mn) = module {
            let (_, m) = pick(&res.modules, Some(mn), "module")?;
            for h in m.tangent_cohomology()? {
                out.line(format!("H_tan^{}({mn}) = {}", h.degree, h.dimension));
            }
        }
        return Ok(out);
    }
    let w = cutoff.ok_or_else(|| input_error("--total requires --weight-cutoff"))?;
    let t = total_cohomology(g, w);
    if t.truncation_warning {
        out.line(format!(
            "warning: g has elements of positive degree, so C(g) has generators of degree <= 0 and no degree is guaranteed stable at weight cutoff {w}"
        ));
    }
    for d in &t.degrees {
        let flag = if d.stabilized {
            "stabilized"
        } else {
            "truncated"
        };
        out.line(format!("H_tot^{} = {} ({flag})", d.degree, d.dimension));
    }
    Ok(out)
}

fn quotient_lie(inputs: &mut Inputs, input: &Path) -> Result<Outcome> {
    let (_, res) = load_one(inputs, input)?;
    let l = match &res.leibniz {
        Some(l) => l.clone(),
        None => leibniz_from_lp(&weak_lp(&res))?,
    };
    let q = lie_quotient(&l)?;
    let mut out = Outcome::default();
    out.line(format!("Leibniz kernel: dimension {}", q.kernel.len()));
    for v in &q.kernel {
        out.line(format!("kernel vector: {}", describe(&l.space, v)));
    }
    out.line(format!("Lie quotient: dimension {}", q.lie.dim()));
    out.line("the quotient bracket satisfies the dg Lie axioms; the round trip reproduces L");
    out.output = Some(base_document(&q.lie));
    Ok(out)
}

fn describe(sp: &crate::graded::GradedSpace, v: &[crate::scalar::Q]) -> String {
    let e = crate::dgla::vec_to_ce(v);
    if e.is_zero() {
        return "0".into();
    }
    e.terms()
        .map(|(_, t, c)| format!("({}) {}", fmt_q(c), sp.name(t)))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn htan_check(inputs: &mut Inputs, input: &Path) -> Result<Outcome> {
    let (_, res) = load_one(inputs, input)?;
    let ev = LeibnizInfty::new(weak_lp(&res));
    let cert = htan_compatibility(&ev)?;
    let m = ev.f.module();
    let mut out = Outcome::default();
    out.line(format!(
        "H_tan(M): dimension {}",
        cert.representatives.len()
    ));
    for (i, r) in cert.representatives.iter().enumerate() {
        out.line(format!(
            "class {}: representative {}",
            cert.leibniz.space.name(i),
            describe(m.space(), r)
        ));
    }
    for ((a, b), terms) in &cert.leibniz.bracket {
        let v = terms
            .iter()
            .map(|(c, x)| format!("({}) {}", fmt_q(x), cert.leibniz.space.name(*c)))
            .collect::<Vec<_>>();
        out.line(format!(
            "{} ◇ {} = {}",
            cert.leibniz.space.name(*a),
            cert.leibniz.space.name(*b),
            v.join(" + ")
        ));
    }
    out.line(format!(
        "H(f₀) is equivariant; ◇ agrees with the weight-0 part of λ₂; lie: {}",
        cert.leibniz.is_lie()
    ));
    Ok(out)
}
