use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ppdiv_core::algebra::{render_grid, AlgebraError, SectionAlgebra};
use ppdiv_core::base::BaseVariety;
use ppdiv_core::doc::{ppdivisor_to_json, ActionDoc, DocError, Document, PPDivDoc};
use ppdiv_core::downgrade::{downgrade, DowngradeError};
use ppdiv_core::galois::{descent_dimensions, gillard_cocycle, is_galois_action, ActionGroup, GaloisError};
use ppdiv_core::lattice::LatticeVector;
use ppdiv_core::ppdiv::{base_change, PPDivError, PolyhedralDivisor};

#[derive(Parser)]
#[command(
    name = "ppdiv",
    version,
    about = "Exact computations with proper polyhedral divisors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a document; for pp-divisors also print the properness certificate.
    Validate { path: PathBuf },
    /// Print the evaluation D(m).
    Eval {
        path: PathBuf,
        /// Weight, e.g. `1,2`.
        #[arg(long, allow_hyphen_values = true)]
        m: String,
    },
    /// Print the properness certificate.
    Proper { path: PathBuf },
    /// Dimensions of graded pieces over a box of weights.
    Hilbert {
        path: PathBuf,
        /// Inclusive ranges per coordinate, e.g. `0..4,0..4`.
        #[arg(long = "box", allow_hyphen_values = true)]
        bx: String,
        /// Print a JSON cell map instead of the table.
        #[arg(long)]
        json: bool,
        /// Tabulate -deg(floor D(m) + floor D(-m)) instead of dimensions.
        #[arg(long)]
        colength: bool,
        /// Count base characters of a toric-base divisor inside `--ubox`.
        #[arg(long, requires = "ubox")]
        fine: bool,
        /// Ranges of base characters for `--fine`, e.g. `0..2,0..2`.
        #[arg(long, allow_hyphen_values = true)]
        ubox: Option<String>,
    },
    /// Downgrade an affine toric variety to a subtorus action.
    Downgrade {
        path: PathBuf,
        /// Write the pp-divisor document here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check the axioms of a Galois semilinear action.
    CheckAction {
        /// pp-divisor over the field of the action.
        ppdiv: PathBuf,
        /// Action document.
        action: PathBuf,
    },
    /// Dimensions of fixed spaces of a Galois action per orbit of weights.
    Descend {
        /// pp-divisor over the field of the action.
        ppdiv: PathBuf,
        /// Action document; must pass check-action.
        action: PathBuf,
        /// Inclusive ranges per coordinate, e.g. `0..6,0..6`.
        #[arg(long = "box", allow_hyphen_values = true)]
        bx: String,
    },
    /// Base change from Q to Q(sqrt d).
    Basechange {
        path: PathBuf,
        /// Squarefree radicand, e.g. `-1`.
        #[arg(long, allow_hyphen_values = true)]
        d: i64,
        /// Write the pp-divisor document here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Validation(String),
    Axiom(String),
    Unsupported(String),
    /// A complete report that ends in a failed check; printed on stdout.
    Report {
        text: String,
        code: u8,
    },
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Validation(_) => 2,
            Failure::Axiom(_) => 3,
            Failure::Unsupported(_) => 4,
            Failure::Report { code, .. } => *code,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Validation(m) | Failure::Axiom(m) | Failure::Unsupported(m) => m,
            Failure::Report { text, .. } => text,
        }
    }
}

impl From<DocError> for Failure {
    fn from(e: DocError) -> Self {
        Failure::Validation(e.to_string())
    }
}

impl From<PPDivError> for Failure {
    fn from(e: PPDivError) -> Self {
        match e {
            PPDivError::UnsupportedBase(_) | PPDivError::CannotCertifySplitting(_) => {
                Failure::Unsupported(e.to_string())
            }
            _ => Failure::Validation(e.to_string()),
        }
    }
}

impl From<AlgebraError> for Failure {
    fn from(e: AlgebraError) -> Self {
        match e {
            AlgebraError::PPDiv(inner) => inner.into(),
            AlgebraError::BoxRank { .. } => Failure::Usage(e.to_string()),
            AlgebraError::RankTooHigh(_) | AlgebraError::UnsupportedBase(_) | AlgebraError::InfinitePiece(_) => {
                Failure::Unsupported(e.to_string())
            }
            _ => Failure::Validation(e.to_string()),
        }
    }
}

impl From<DowngradeError> for Failure {
    fn from(e: DowngradeError) -> Self {
        match e {
            DowngradeError::RankTooHigh(_) => Failure::Unsupported(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

impl From<GaloisError> for Failure {
    fn from(e: GaloisError) -> Self {
        match e {
            GaloisError::ActionInvalid(_) => Failure::Axiom(e.to_string()),
            GaloisError::PPDiv(inner) => inner.into(),
            GaloisError::Algebra(inner) => inner.into(),
            GaloisError::RankTooHigh(_) | GaloisError::UnsupportedOrder(_) | GaloisError::InfinitePiece(_) => {
                Failure::Unsupported(e.to_string())
            }
            _ => Failure::Validation(e.to_string()),
        }
    }
}

type Outcome = Result<String, Failure>;

fn read_document(path: &Path) -> Result<Document, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Document::parse(&text).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn read_ppdiv(path: &Path) -> Result<PPDivDoc, Failure> {
    read_document(path)?
        .into_ppdivisor()
        .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn read_action(path: &Path) -> Result<ActionDoc, Failure> {
    read_document(path)?
        .into_action()
        .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn parse_box(s: &str) -> Result<Vec<(i64, i64)>, Failure> {
    s.split(',')
        .map(|r| {
            let (lo, hi) = r
                .split_once("..")
                .ok_or_else(|| Failure::Usage(format!("invalid range {r:?}; expected lo..hi")))?;
            let parse = |x: &str| {
                x.trim()
                    .parse::<i64>()
                    .map_err(|_| Failure::Usage(format!("invalid range {r:?}; expected lo..hi")))
            };
            Ok((parse(lo)?, parse(hi)?))
        })
        .collect()
}

fn parse_weight(s: &str, rank: usize) -> Result<LatticeVector, Failure> {
    let v: Result<Vec<i64>, _> = s.split(',').map(|x| x.trim().parse::<i64>()).collect();
    let v = v.map_err(|_| Failure::Usage(format!("invalid weight {s:?}; expected integers like 1,2")))?;
    if v.len() != rank {
        return Err(Failure::Usage(format!("weight {s:?} must have {rank} coordinates")));
    }
    Ok(LatticeVector(v))
}

fn summary(d: &PolyhedralDivisor) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "lattice rank: {}", d.lattice_rank());
    let _ = writeln!(out, "tail: {}", d.tail());
    let _ = writeln!(out, "base: {}", d.base());
    for (p, c) in d.entries() {
        let _ = writeln!(out, "  {c} at {p}");
    }
    out
}

fn certificate(d: &PolyhedralDivisor) -> Result<(String, bool), Failure> {
    let cert = d.is_proper()?;
    Ok((cert.render(), cert.is_proper()))
}

fn cmd_validate(path: &Path) -> Outcome {
    match read_document(path)? {
        Document::PPDivisor(doc) => {
            let d = &doc.divisor;
            let mut out = String::from("kind: ppdivisor\n");
            out.push_str(&summary(d));
            if d.base().is_curve() {
                let _ = writeln!(out, "locus: {}", d.loc()?);
            }
            let (cert, proper) = certificate(d)?;
            out.push_str(&cert);
            if proper {
                Ok(out)
            } else {
                Err(Failure::Report { text: out, code: 2 })
            }
        }
        other => Ok(format!("kind: {}\nvalid\n", other.kind())),
    }
}

fn cmd_eval(path: &Path, m: &str) -> Outcome {
    let d = read_ppdiv(path)?.divisor;
    let m = parse_weight(m, d.lattice_rank())?;
    Ok(format!("D({m}) = {}\n", d.evaluate(&m)?))
}

fn cmd_proper(path: &Path) -> Outcome {
    let (cert, proper) = certificate(&read_ppdiv(path)?.divisor)?;
    if proper {
        Ok(cert)
    } else {
        Err(Failure::Report { text: cert, code: 2 })
    }
}

fn cmd_hilbert(path: &Path, bx: &str, json: bool, colength: bool, fine: Option<&str>) -> Outcome {
    let d = read_ppdiv(path)?.divisor;
    let bx = parse_box(bx)?;
    let alg = SectionAlgebra::new(d)?;
    if let Some(ubox) = fine {
        let ubox = parse_box(ubox)?;
        let mut cells = Vec::new();
        for m in ppdiv_core::algebra::box_points(&bx) {
            let piece = alg.toric_piece(&m, &ubox)?;
            cells.push((m, piece.basis.len()));
        }
        if json {
            let map: serde_json::Map<String, serde_json::Value> = cells
                .iter()
                .map(|(m, n)| (key(m), serde_json::Value::from(*n as u64)))
                .collect();
            return Ok(serde_json::to_string_pretty(&map).expect("json") + "\n");
        }
        let lookup: std::collections::BTreeMap<_, _> = cells.into_iter().collect();
        return Ok(render_grid(&bx, |m| lookup[m].to_string()));
    }
    if colength {
        let mut cells = std::collections::BTreeMap::new();
        for m in ppdiv_core::algebra::box_points(&bx) {
            let c = alg.product_colength(&m)?;
            cells.insert(
                m,
                c.map_or("-".to_string(), |q| ppdiv_core::exactnum::rational::format_rational(&q)),
            );
        }
        if json {
            let map: serde_json::Map<String, serde_json::Value> = cells
                .iter()
                .map(|(m, c)| (key(m), serde_json::Value::from(c.clone())))
                .collect();
            return Ok(serde_json::to_string_pretty(&map).expect("json") + "\n");
        }
        return Ok(render_grid(&bx, |m| cells[m].clone()));
    }
    let table = alg.hilbert_table(&bx)?;
    if json {
        Ok(serde_json::to_string_pretty(&table.cell_map()).expect("json") + "\n")
    } else {
        Ok(table.render())
    }
}

fn key(m: &LatticeVector) -> String {
    let parts: Vec<String> = m.entries().iter().map(|x| x.to_string()).collect();
    parts.join(",")
}

fn cmd_downgrade(path: &Path, output: Option<&Path>) -> Outcome {
    let input = read_document(path)?
        .into_downgrade_input()
        .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
    let out = downgrade(&input.input)?;
    let doc = ppdivisor_to_json(&out.ppdiv, Some(format!("downgrade of {}", path.display())));
    let mut text = out.render();
    if matches!(out.ppdiv.base(), BaseVariety::ProjLine(_) | BaseVariety::AffLine(_)) {
        text.push_str("cross-check: compare `ppdiv hilbert` on the output with monomial counts of the input cone\n");
    }
    match output {
        Some(p) => {
            fs::write(p, &doc).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))?;
            let _ = writeln!(text, "wrote {}", p.display());
        }
        None => {
            text.push_str("---\n");
            text.push_str(&doc);
        }
    }
    Ok(text)
}

fn pass(b: bool) -> &'static str {
    if b {
        "pass"
    } else {
        "FAIL"
    }
}

fn cmd_check_action(ppdiv: &Path, action: &Path) -> Outcome {
    let d = read_ppdiv(ppdiv)?.divisor;
    let a = read_action(action)?;
    if d.base().field() != a.field {
        return Err(Failure::Validation(format!(
            "the divisor lives over {} but the action over {}",
            d.base().field(),
            a.field
        )));
    }
    let report = is_galois_action(&a.action, &d)?;
    let gillard = gillard_cocycle(&a.action, &d)?;
    let mut out = String::new();
    let group = match a.action.group {
        ActionGroup::Z2 => "Z/2",
        ActionGroup::Trivial => "trivial",
    };
    let _ = writeln!(out, "group: {group} ({})", pass(report.twist_ok));
    let auto = &report.automorphism;
    let _ = writeln!(
        out,
        "automorphism equality: {} ({} samples)",
        pass(auto.holds()),
        auto.samples.len()
    );
    for f in &auto.failures {
        let _ = writeln!(out, "  {f}");
    }
    let sq = &report.square_law;
    let _ = writeln!(out, "square law: {}", pass(sq.holds()));
    if !sq.psi_square_identity {
        let _ = writeln!(out, "  base map squared is not the identity");
    }
    if !sq.lattice_square_identity {
        let _ = writeln!(out, "  lattice map squared is not the identity");
    }
    for (m, f) in &sq.pluri_failures {
        let _ = writeln!(out, "  composed plurifunction at {m} is {f}, not 1");
    }
    let _ = writeln!(
        out,
        "gillard identity (a): {}",
        pass(gillard.identity_failures.is_empty())
    );
    for m in &gillard.identity_failures {
        let _ = writeln!(out, "  fails at m = {m}");
    }
    let _ = writeln!(
        out,
        "gillard identity (b): {}",
        pass(gillard.cocycle_failures.is_empty())
    );
    for m in &gillard.cocycle_failures {
        let _ = writeln!(out, "  fails at m = {m}");
    }
    if report.holds() && gillard.holds() {
        Ok(out)
    } else {
        Err(Failure::Report { text: out, code: 3 })
    }
}

fn cmd_descend(ppdiv: &Path, action: &Path, bx: &str) -> Outcome {
    let d = read_ppdiv(ppdiv)?.divisor;
    let a = read_action(action)?;
    let bx = parse_box(bx)?;
    let cells = descent_dimensions(&a.action, &d, &bx)?;
    let orbits: Vec<String> = cells
        .iter()
        .map(|c| {
            let o: Vec<String> = c.orbit.iter().map(ToString::to_string).collect();
            format!("{{{}}}", o.join(" "))
        })
        .collect();
    let w = orbits.iter().map(String::len).max().unwrap_or(0).max("orbit".len());
    let mut out = format!("{:<w$}  dim_L V  dim_Q V^G\n", "orbit");
    for (o, c) in orbits.iter().zip(&cells) {
        let _ = writeln!(out, "{o:<w$}  {:>7}  {:>9}", c.dim_l, c.dim_q_fixed);
    }
    Ok(out)
}

fn cmd_basechange(path: &Path, radicand: i64, output: Option<&Path>) -> Outcome {
    let doc = read_ppdiv(path)?;
    let d = base_change(&doc.divisor, radicand)?;
    let text = ppdivisor_to_json(&d, doc.note);
    match output {
        Some(p) => {
            fs::write(p, &text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display())))?;
            Ok(format!("wrote {}\n", p.display()))
        }
        None => Ok(text),
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate { path } => cmd_validate(&path),
        Command::Eval { path, m } => cmd_eval(&path, &m),
        Command::Proper { path } => cmd_proper(&path),
        Command::Hilbert {
            path,
            bx,
            json,
            colength,
            fine,
            ubox,
        } => cmd_hilbert(&path, &bx, json, colength, if fine { ubox.as_deref() } else { None }),
        Command::Downgrade { path, output } => cmd_downgrade(&path, output.as_deref()),
        Command::CheckAction { ppdiv, action } => cmd_check_action(&ppdiv, &action),
        Command::Descend { ppdiv, action, bx } => cmd_descend(&ppdiv, &action, &bx),
        Command::Basechange { path, d, output } => cmd_basechange(&path, d, output.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure::Report { text, code }) => {
            print!("{text}");
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
