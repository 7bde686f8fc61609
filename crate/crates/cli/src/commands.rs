//! Argument parsing and command dispatch. Every command is a thin adapter over
//! the library.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Display;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand};

use twistalg::endo::endo_g_algebra;
use twistalg::fixtures::{fixture, Between, On};
use twistalg::foundations::{Elem, FieldSpec, GradingGroup, Window};
use twistalg::g_algebra::{
    associated_g_algebra, associated_left_g_algebra, check_g_algebra_iso, compress, principal_dimension_obstruction,
    validate_g_algebra, Side,
};
use twistalg::graded_algebra::{check_graded_iso, validate_algebra};
use twistalg::twisting::{
    check_inverse_twist_relation, delta, gamma, twist_equivalence_from_iso, verify_twisting_system, zhang_twist,
};
use twistalg::{Error, Verdict};

use crate::format::{self, Document};
use crate::report::{Format, Report, Status};
use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "twistalg", version, about = "Exact computations with graded algebras, G-algebras and Zhang twists")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Field of scalars: `q` or `fp:<p>`.
    #[arg(long, global = true)]
    pub field: Option<FieldSpec>,
    /// Degree window `lo..hi` (fixture window, or a restriction of the input algebra).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub window: Option<Window>,
    /// Index window `lo..hi` for associated and endomorphism G-algebras.
    #[arg(long = "index-window", global = true, allow_hyphen_values = true)]
    pub index_window: Option<Window>,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Write the output here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Which object of the input to operate on, when there are several.
    #[arg(long, global = true)]
    pub name: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check associativity and units of every algebra and G-algebra.
    Validate { files: Vec<PathBuf> },
    /// Build the associated G-algebra `Ā` with `Ā_{f,g} = A_{f⁻¹g}`.
    Zalg { files: Vec<PathBuf> },
    /// Build the left variant `Â` with `Â_{f,g} = A_{fg⁻¹}`.
    ZalgLeft { files: Vec<PathBuf> },
    /// Twist an algebra by a verified twisting system.
    Twist { files: Vec<PathBuf> },
    /// Check the twisting identity and the inverse relation.
    VerifyTwist { files: Vec<PathBuf> },
    /// Twisting system of a principal map.
    Delta { files: Vec<PathBuf> },
    /// Principal map of a twisting system.
    Gamma { files: Vec<PathBuf> },
    /// Compression of a G-algebra along a principal map.
    Compress { files: Vec<PathBuf> },
    /// Certify a G-algebra morphism or graded map as an isomorphism.
    CheckIso { files: Vec<PathBuf> },
    /// Dimension obstruction to principal maps.
    Obstruct { files: Vec<PathBuf> },
    /// Endomorphism G-algebra of a bigraded module.
    Endo { files: Vec<PathBuf> },
    /// Twisting system and twist induced by an isomorphism `Ā → B̄`.
    FromIso { files: Vec<PathBuf> },
    /// Emit a named example bundle.
    Fixture { fixture: String },
}

impl Command {
    fn label(&self) -> &'static str {
        match self {
            Command::Validate { .. } => "validate",
            Command::Zalg { .. } => "zalg",
            Command::ZalgLeft { .. } => "zalg-left",
            Command::Twist { .. } => "twist",
            Command::VerifyTwist { .. } => "verify-twist",
            Command::Delta { .. } => "delta",
            Command::Gamma { .. } => "gamma",
            Command::Compress { .. } => "compress",
            Command::CheckIso { .. } => "check-iso",
            Command::Obstruct { .. } => "obstruct",
            Command::Endo { .. } => "endo",
            Command::FromIso { .. } => "from-iso",
            Command::Fixture { .. } => "fixture",
        }
    }
}

pub enum Output {
    Document(Document),
    Report(Report),
}

impl Output {
    pub fn exit_code(&self) -> u8 {
        match self {
            Output::Document(_) => 0,
            Output::Report(r) => r.status.exit_code(),
        }
    }

    pub fn render(&self, format: Format) -> String {
        match self {
            Output::Document(d) => format::print(d),
            Output::Report(r) => r.render(format),
        }
    }
}

fn default_window(name: &str) -> Window {
    match name {
        "eg2" => Window::Interval { lo: -2, hi: 2 },
        "q-plane" => Window::Interval { lo: 0, hi: 6 },
        _ => Window::Interval { lo: -3, hi: 3 },
    }
}

fn load(files: &[PathBuf], field: Option<FieldSpec>, stdin: &mut dyn Read) -> Result<Document, CliError> {
    if files.is_empty() {
        return Err(CliError::Usage("no input files".into()));
    }
    let mut doc: Option<Document> = None;
    for path in files {
        let text = if path.as_os_str() == "-" {
            let mut s = String::new();
            stdin
                .read_to_string(&mut s)
                .map_err(|source| CliError::Io { path: path.clone(), source })?;
            s
        } else {
            std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?
        };
        let f = field.or(doc.as_ref().map(|d| d.field));
        doc = Some(
            format::parse_into(&text, f, doc)
                .map_err(|source| CliError::Parse { path: path.display().to_string(), source })?,
        );
    }
    Ok(doc.expect("at least one file"))
}

fn pick<'a, T>(map: &'a BTreeMap<String, T>, name: Option<&str>, kind: &str) -> Result<(&'a String, &'a T), CliError> {
    match name {
        Some(n) => map
            .get_key_value(n)
            .ok_or_else(|| CliError::Usage(format!("no {kind} named `{n}` in the input"))),
        None if map.len() == 1 => Ok(map.iter().next().expect("one entry")),
        None if map.is_empty() => Err(CliError::Usage(format!("the input has no {kind}"))),
        None => {
            let names: Vec<&str> = map.keys().map(String::as_str).collect();
            Err(CliError::Usage(format!("several {kind}s ({}); choose one with --name", names.join(", "))))
        }
    }
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, name: &str, kind: &str) -> Result<&'a T, CliError> {
    map.get(name).ok_or_else(|| CliError::Usage(format!("no {kind} named `{name}` in the input")))
}

fn verdict_report<W: Display>(command: &str, object: &str, v: &Verdict<W>) -> Report {
    match v {
        Verdict::Holds { checked, skipped } => {
            Report::new(command, object, Status::Holds).with("checked", checked).with("skipped", skipped)
        }
        Verdict::Fails(w) => Report::new(command, object, Status::Fails).with("witness", w),
    }
}

fn fresh(doc: &Document, group: &GradingGroup) -> Document {
    Document::new(doc.field, group.clone())
}

fn index_bounds(keys: impl Iterator<Item = Elem>, group: &GradingGroup) -> Result<Window, CliError> {
    let keys: Vec<Elem> = keys.collect();
    if group.is_finite() {
        return Ok(Window::Whole);
    }
    let lo = keys.iter().map(|g| g.0).min().ok_or_else(|| CliError::Usage("module has no rows".into()))?;
    let hi = keys.iter().map(|g| g.0).max().expect("nonempty");
    Ok(Window::interval(lo, hi)?)
}

/// Runs a parsed command line, reading `-` inputs from `stdin`.
pub fn execute(cli: &Cli, stdin: &mut dyn Read) -> Result<Output, CliError> {
    let cmd = cli.command.label();
    let name = cli.name.as_deref();
    let files = match &cli.command {
        Command::Fixture { fixture: which } => {
            let field = cli.field.unwrap_or(FieldSpec::Rationals);
            let window = cli.window.unwrap_or_else(|| default_window(which));
            let bundle = fixture(which, field, window)?;
            return Ok(Output::Document(Document::from_bundle(&bundle)));
        }
        Command::Validate { files }
        | Command::Zalg { files }
        | Command::ZalgLeft { files }
        | Command::Twist { files }
        | Command::VerifyTwist { files }
        | Command::Delta { files }
        | Command::Gamma { files }
        | Command::Compress { files }
        | Command::CheckIso { files }
        | Command::Obstruct { files }
        | Command::Endo { files }
        | Command::FromIso { files } => files,
    };
    let doc = load(files, cli.field, stdin)?;
    let out = match &cli.command {
        Command::Validate { .. } => {
            let mut report = Report::new(cmd, name.unwrap_or("document"), Status::Holds);
            let mut witness = None;
            for (k, a) in &doc.algebras {
                if name.is_some_and(|n| n != k) {
                    continue;
                }
                let v = validate_algebra(a);
                report.push("algebra", format!("{k} {} violations, {} checked", v.violations.len(), v.checked));
                if witness.is_none() {
                    witness = v.violations.first().map(|w| format!("{k}: {w}"));
                }
            }
            for (k, r) in &doc.g_algebras {
                if name.is_some_and(|n| n != k) {
                    continue;
                }
                let v = validate_g_algebra(r);
                report.push("galgebra", format!("{k} {} violations, {} checked", v.violations.len(), v.checked));
                if witness.is_none() {
                    witness = v.violations.first().map(|w| format!("{k}: {w}"));
                }
            }
            if report.lines.is_empty() {
                return Err(CliError::Usage("nothing to validate".into()));
            }
            if let Some(w) = witness {
                report.status = Status::Fails;
                report.push("witness", w);
            }
            Output::Report(report)
        }
        Command::Zalg { .. } | Command::ZalgLeft { .. } => {
            let (k, a) = pick(&doc.algebras, name, "algebra")?;
            let a = match cli.window {
                Some(w) => a.restrict(w)?,
                None => a.clone(),
            };
            let index = cli.index_window.unwrap_or(a.window());
            let mut out = fresh(&doc, a.group());
            let (r, suffix) = if matches!(cli.command, Command::Zalg { .. }) {
                (associated_g_algebra(&a, index)?, "bar")
            } else {
                (associated_left_g_algebra(&a, index)?, "hat")
            };
            let base = out.add_algebra(k, a);
            out.add_g_algebra(&format!("{base}{suffix}"), r);
            Output::Document(out)
        }
        Command::Twist { .. } => {
            let (k, t) = pick(&doc.twists, name, "twist")?;
            let a = lookup(&doc.algebras, &t.on, "algebra")?;
            match verify_twisting_system(a, &t.value)? {
                Verdict::Fails(w) => Output::Report(Report::new(cmd, k, Status::Fails).with("witness", w)),
                Verdict::Holds { .. } => {
                    let mut out = fresh(&doc, a.group());
                    out.add_algebra(&format!("{}.{k}", t.on), zhang_twist(a, &t.value)?);
                    Output::Document(out)
                }
            }
        }
        Command::VerifyTwist { .. } => {
            let (k, t) = pick(&doc.twists, name, "twist")?;
            let a = lookup(&doc.algebras, &t.on, "algebra")?;
            let v = verify_twisting_system(a, &t.value)?;
            let mut report = verdict_report(cmd, k, &v);
            if v.holds() {
                let inv = check_inverse_twist_relation(a, &t.value)?;
                if let Verdict::Fails(w) = inv {
                    report = Report::new(cmd, k, Status::Fails).with("witness", format!("inverse relation {w}"));
                }
            }
            Output::Report(report)
        }
        Command::Delta { .. } => {
            let (k, t) = pick(&doc.principals, name, "principal map")?;
            let r = lookup(&doc.g_algebras, &t.on, "galgebra")?;
            let base = doc
                .origins
                .get(&t.on)
                .ok_or_else(|| CliError::Algebra(Error::NotAssociated))?;
            let tau = delta(r, &t.value)?;
            let mut out = fresh(&doc, r.group());
            out.algebras.insert(base.clone(), lookup(&doc.algebras, base, "algebra")?.clone());
            out.add_g_algebra(&t.on, r.clone());
            out.twists.insert(k.clone(), On { on: base.clone(), value: tau });
            Output::Document(out)
        }
        Command::Gamma { .. } => {
            let (k, t) = pick(&doc.twists, name, "twist")?;
            let a = lookup(&doc.algebras, &t.on, "algebra")?;
            let existing = doc.g_algebras.iter().find(|(n, r)| {
                doc.origins.get(*n) == Some(&t.on)
                    && r.origin().is_some_and(|o| o.side == Side::Right)
                    && cli.index_window.is_none_or(|w| r.index() == w)
            });
            let (rname, r) = match existing {
                Some((n, r)) => (n.clone(), r.clone()),
                None => {
                    let index = cli.index_window.unwrap_or(a.window());
                    (format!("{}bar", t.on), associated_g_algebra(a, index)?)
                }
            };
            let p = gamma(&r, &t.value)?;
            let mut out = fresh(&doc, a.group());
            out.algebras.insert(t.on.clone(), a.clone());
            out.add_g_algebra(&rname, r);
            out.principals.insert(k.clone(), On { on: rname, value: p });
            Output::Document(out)
        }
        Command::Compress { .. } => {
            let (k, t) = pick(&doc.principals, name, "principal map")?;
            let r = lookup(&doc.g_algebras, &t.on, "galgebra")?;
            let mut out = fresh(&doc, r.group());
            out.add_algebra(&format!("{}.{k}", t.on), compress(r, &t.value)?);
            Output::Document(out)
        }
        Command::CheckIso { .. } => {
            let use_map = match name {
                Some(n) => !doc.morphisms.contains_key(n) && doc.maps.contains_key(n),
                None => doc.morphisms.is_empty() && !doc.maps.is_empty(),
            };
            if use_map {
                let (k, m) = pick(&doc.maps, name, "map")?;
                let src = lookup(&doc.algebras, &m.source, "algebra")?;
                let tgt = lookup(&doc.algebras, &m.target, "algebra")?;
                Output::Report(verdict_report(cmd, k, &check_graded_iso(src, tgt, &m.value)))
            } else {
                let (k, m) = pick(&doc.morphisms, name, "morphism")?;
                let src = lookup(&doc.g_algebras, &m.source, "galgebra")?;
                let tgt = lookup(&doc.g_algebras, &m.target, "galgebra")?;
                Output::Report(verdict_report(cmd, k, &check_g_algebra_iso(src, tgt, &m.value)?))
            }
        }
        Command::Obstruct { .. } => {
            let (k, r) = pick(&doc.g_algebras, name, "galgebra")?;
            let report = principal_dimension_obstruction(r);
            let mut out = if report.is_empty() {
                Report::new(cmd, k, Status::Holds).with("message", "no dimension obstruction on the window")
            } else {
                Report::new(cmd, k, Status::Fails).with("message", "no principal map exists on the window")
            };
            for e in &report.entries {
                out.push("entry", e);
            }
            Output::Report(out)
        }
        Command::Endo { .. } => {
            let (k, p) = pick(&doc.modules, name, "module")?;
            let grp = p.value.base().group();
            let index = match cli.index_window {
                Some(w) => w,
                None => index_bounds(p.value.rows().keys().copied(), grp)?,
            };
            let h = endo_g_algebra(&p.value, index)?;
            let mut out = fresh(&doc, grp);
            out.add_g_algebra(&format!("{k}.end"), h);
            Output::Document(out)
        }
        Command::FromIso { .. } => {
            let (k, m) = pick(&doc.morphisms, name, "morphism")?;
            let abar = lookup(&doc.g_algebras, &m.source, "galgebra")?;
            let bbar = lookup(&doc.g_algebras, &m.target, "galgebra")?;
            let eq = twist_equivalence_from_iso(abar, bbar, &m.value)?;
            let mut out = fresh(&doc, abar.group());
            out.add_g_algebra(&m.source, abar.clone());
            out.add_g_algebra(&m.target, bbar.clone());
            let window = eq.twisted.window();
            let a = out.add_algebra(&format!("{k}.source"), abar.origin().expect("certified").base.restrict(window)?);
            let b = out.add_algebra(&format!("{k}.base"), bbar.origin().expect("certified").base.restrict(window)?);
            let twisted = out.add_algebra(&format!("{k}.twisted"), eq.twisted);
            out.principals.insert(format!("{k}.T"), On { on: m.target.clone(), value: eq.principal });
            out.twists.insert(format!("{k}.tau"), On { on: b, value: eq.tau });
            out.maps.insert(format!("{k}.iso"), Between { source: a, target: twisted, value: eq.iso });
            Output::Document(out)
        }
        Command::Fixture { .. } => unreachable!("handled above"),
    };
    Ok(out)
}

fn error_status(e: &CliError) -> Option<Status> {
    match e {
        CliError::Algebra(
            Error::UnverifiedPrincipalMap(_) | Error::UnverifiedTwistingSystem(_) | Error::UncertifiedIso(_),
        ) => Some(Status::Fails),
        _ => None,
    }
}

/// Parses `args`, runs the command and writes its output; returns the exit status.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            if code == 0 {
                let _ = write!(stdout, "{}", e.render());
                return 0;
            }
            let _ = write!(stderr, "{}", e.render());
            return 2;
        }
    };
    let (text, code) = match execute(&cli, stdin) {
        Ok(out) => (out.render(cli.format), out.exit_code()),
        Err(e) => match error_status(&e) {
            Some(status) => {
                let r = Report::new(cli.command.label(), cli.name.as_deref().unwrap_or("input"), status)
                    .with("witness", &e);
                (r.render(cli.format), status.exit_code())
            }
            None => {
                let _ = writeln!(stderr, "error: {e}");
                if cli.format == Format::Machine {
                    let r = Report::new(cli.command.label(), cli.name.as_deref().unwrap_or("input"), Status::Error)
                        .with("message", &e);
                    (r.render(cli.format), 2)
                } else {
                    return 2;
                }
            }
        },
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                let _ = writeln!(stderr, "error: {}: {e}", path.display());
                return 2;
            }
        }
        None => {
            let _ = stdout.write_all(text.as_bytes());
        }
    }
    code
}
