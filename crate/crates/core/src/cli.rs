//! The `twistcodes` command line.
//!
//! Every command prints one JSON document on stdout. `--pretty` switches to
//! a human-readable rendering. Exit status: 0 on success, 1 on usage or
//! input errors, 2 when a verification fails (the JSON then carries the
//! witness when one exists).

use std::collections::BTreeMap;
use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::codes::{self, GenMatrix};
use crate::error::{Error, Result};
use crate::ferrers::{self, BlockProfile, FerrersDiagram};
use crate::gf::{prime_power, FieldElem, FieldTower, Level};
use crate::msrd::{self, SumRankProfile};
use crate::presets;
use crate::ratfun::RatFun;
use crate::twist::{self, TwistAut};
use crate::wire;

const PAPER_S5: &str = include_str!("../fixtures/paper_s5.json");

#[derive(Parser, Debug)]
#[command(name = "twistcodes", version, about = "Rank-metric codes from twisted automorphisms of rational function fields")]
struct Cli {
    /// Worker threads for enumerations (default: TWISTCODES_THREADS, else all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Preset {
    /// F_27 with modulus a^3 - a + 1 over F_3.
    PaperS5,
}

#[derive(Args, Clone, Debug)]
struct TowerArgs {
    /// Characteristic.
    #[arg(long, default_value_t = 3)]
    p: u32,
    /// F_q = F_{p^s}.
    #[arg(long, default_value_t = 1)]
    s: usize,
    /// Degree of F_{q^m} over F_q.
    #[arg(long, default_value_t = 3)]
    m: usize,
    /// Degree of a top extension F_{q^{mr}}.
    #[arg(long)]
    r: Option<usize>,
    /// Seed for generated moduli.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Use fixed moduli instead of generated ones.
    #[arg(long, value_enum)]
    preset: Option<Preset>,
}

impl TowerArgs {
    fn build(&self) -> Result<FieldTower> {
        match self.preset {
            Some(Preset::PaperS5) => Ok(presets::paper_s5_base()),
            None => FieldTower::generate(self.p, self.s, self.m, self.r, self.seed),
        }
    }
}

#[derive(Args, Clone, Debug)]
struct TwistArgs {
    #[command(flatten)]
    tower: TowerArgs,
    /// `auto`, an integer, or a JSON element of F_{q^m}.
    #[arg(long, default_value = "auto")]
    lambda: String,
}

impl TwistArgs {
    fn build(&self) -> Result<TwistAut> {
        let tower = self.tower.build()?;
        if self.lambda == "auto" {
            TwistAut::with_auto_lambda(&tower)
        } else {
            let base = tower.truncated(Level::Fqm);
            TwistAut::new(&base, parse_elem(&base, Level::Fqm, &self.lambda)?)
        }
    }
}

#[derive(Args, Clone, Debug)]
struct PointArgs {
    /// JSON array of polynomials over F_{q^m}; default: the basis `a^i x^j`.
    #[arg(long)]
    points: Option<String>,
    /// Use the first `n` default points.
    #[arg(long)]
    n: Option<usize>,
}

impl PointArgs {
    fn build(&self, phi: &TwistAut) -> Result<Vec<RatFun>> {
        match &self.points {
            Some(s) => {
                let v = parse_json(s)?;
                v.as_array()
                    .ok_or_else(|| Error::Parse("points must be an array".into()))?
                    .iter()
                    .map(|p| wire::ratfun_from_json(phi.funcs(), p))
                    .collect()
            }
            None => {
                let basis = phi.constant_basis();
                let n = self.n.unwrap_or(basis.len());
                if n > basis.len() {
                    return Err(Error::BadDimension(format!("n = {n} exceeds the {} basis points", basis.len())));
                }
                Ok(basis.into_iter().take(n).collect())
            }
        }
    }
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Orders, moduli and generators of a field tower.
    FieldInfo(TowerArgs),
    /// Valid twist parameters lambda (norm of order q - 1).
    FindLambda {
        /// Field size q (a prime power).
        #[arg(long)]
        q: u64,
        /// Extension degree m.
        #[arg(long)]
        m: usize,
        /// List every valid lambda, not just the first.
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Moore matrix of points under the twisted automorphism.
    Moore {
        #[command(flatten)]
        twist: TwistArgs,
        #[command(flatten)]
        points: PointArgs,
        /// Number of rows (default: square).
        #[arg(long)]
        rows: Option<usize>,
    },
    /// Build a code.
    #[command(subcommand)]
    Construct(ConstructCmd),
    /// Reduce a code over F_{q^m}(x) modulo an irreducible f.
    Reduce {
        #[arg(long)]
        code: PathBuf,
        /// JSON polynomial over F_{q^m}, or `paper-quartic`.
        #[arg(long, conflicts_with = "r")]
        f: Option<String>,
        /// Degree of a seeded irreducible modulus (default: the fallback degree).
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        allow_small_degree: bool,
    },
    /// Echelon-form MRD certificate of a reduced code.
    Certify {
        #[arg(long)]
        code: PathBuf,
    },
    /// Minimum rank distance by enumeration.
    Distance {
        #[arg(long)]
        code: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u128,
    },
    /// Generalised twisted Gabidulin generator.
    TwistedGabidulin {
        #[command(flatten)]
        tower: TowerArgs,
        /// Code dimension.
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        h: usize,
        #[arg(long = "frob", default_value_t = 1)]
        frob: usize,
        /// Integer or JSON element of F_{q^m}.
        #[arg(long)]
        eta: String,
        /// JSON array of F_{q^m} elements; default: the basis over F_q.
        #[arg(long)]
        points: Option<String>,
    },
    /// dim(C ∩ C^(q^s)) for each s, or dim(C ∩ D).
    Intersect {
        #[arg(long)]
        code: PathBuf,
        #[arg(long = "frob", value_delimiter = ',', default_value = "1")]
        frob: Vec<usize>,
        #[arg(long)]
        other: Option<PathBuf>,
    },
    /// Smallest degree r whose seeded modulus gives a certified reduction.
    SearchR {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        r_min: Option<usize>,
        #[arg(long)]
        r_max: usize,
        #[arg(long, default_value_t = 3)]
        tries: u64,
    },
    /// Ferrers diagram codes: bounds, construction, verification
    #[command(subcommand)]
    Ferrers(FerrersCmd),
    /// Maximum sum-rank distance codes
    #[command(subcommand)]
    Msrd(MsrdCmd),
    /// Rebuild a worked example and diff it against the embedded golden file.
    #[command(subcommand)]
    Fixture(FixtureCmd),
}

#[derive(Subcommand, Debug)]
enum ConstructCmd {
    /// `Ev(L_k)` at the given points.
    Mrd {
        #[command(flatten)]
        twist: TwistArgs,
        #[command(flatten)]
        points: PointArgs,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Subcommand, Debug)]
enum FerrersCmd {
    /// Upper bound on the dimension for distance d.
    Bound {
        /// Column heights of the diagram.
        #[arg(long, value_delimiter = ',', required_unless_present = "profile")]
        heights: Vec<usize>,
        /// Blocks as `r:m` pairs, e.g. `2:2,4:2`.
        #[arg(long, value_delimiter = ',')]
        profile: Vec<String>,
        /// Minimum rank distance.
        #[arg(long)]
        d: usize,
    },
    /// Optimal code for a block profile.
    Construct {
        #[command(flatten)]
        twist: TwistArgs,
        /// Blocks as `r:m` pairs.
        #[arg(long, value_delimiter = ',')]
        profile: Vec<String>,
        /// Minimum rank distance.
        #[arg(long)]
        d: usize,
        /// Column heights for the systematic variant.
        #[arg(long, value_delimiter = ',')]
        heights: Vec<usize>,
        /// Exhaustive check if q^K fits, else this many random codewords.
        #[arg(long, default_value_t = 100_000)]
        budget: u128,
        #[arg(long, default_value_t = 0)]
        verify_seed: u64,
    },
    /// Fit, optimality and distance of a code read from JSON.
    Verify {
        #[arg(long)]
        code: PathBuf,
        /// Overrides the code's d.
        #[arg(long)]
        d: Option<usize>,
        #[arg(long, default_value_t = 100_000)]
        budget: u128,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand, Debug)]
enum MsrdCmd {
    Construct {
        #[command(flatten)]
        twist: TwistArgs,
        /// Block lengths n_1,..,n_l.
        #[arg(long, value_delimiter = ',')]
        profile: Vec<usize>,
        /// Code dimension.
        #[arg(long)]
        k: usize,
        /// Also compute the distance when the enumeration fits.
        #[arg(long)]
        budget: Option<u128>,
    },
    Distance {
        #[arg(long)]
        code: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u128,
    },
}

#[derive(Subcommand, Debug)]
enum FixtureCmd {
    /// The F_27 example: G, its reduction by the quartic, the certificate and intersections.
    PaperS5,
}

struct Output {
    json: Value,
    text: Option<String>,
    status: i32,
}

impl Output {
    fn ok(json: Value) -> Output {
        Output { json, text: None, status: 0 }
    }

    fn with_text(mut self, text: String) -> Output {
        self.text = Some(text);
        self
    }

    fn check(mut self, passed: bool) -> Output {
        if !passed {
            self.status = 2;
        }
        self
    }
}

fn parse_json(s: &str) -> Result<Value> {
    serde_json::from_str(s).map_err(|e| Error::Parse(format!("{e}: {s}")))
}

fn parse_elem(tower: &FieldTower, level: Level, s: &str) -> Result<FieldElem> {
    wire::elem_from_json(tower, level, &parse_json(s)?)
}

fn read_json(path: &PathBuf) -> Result<Value> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Error::Parse(e.to_string()))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?
    };
    parse_json(&text)
}

fn read_code(path: &PathBuf) -> Result<GenMatrix> {
    wire::code_from_json(&read_json(path)?)
}

fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.first().map_or(0, Vec::len);
    let widths: Vec<usize> = (0..cols).map(|j| rows.iter().map(|r| r[j].chars().count()).max().unwrap_or(0)).collect();
    rows.iter()
        .map(|r| {
            r.iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:<w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn parse_profile(items: &[String]) -> Result<BlockProfile> {
    let blocks = items
        .iter()
        .map(|s| {
            let (r, m) = s.split_once(':').ok_or_else(|| Error::Parse(format!("block {s:?} is not r:m")))?;
            let n = |x: &str| x.trim().parse::<usize>().map_err(|e| Error::Parse(format!("{x:?}: {e}")));
            Ok((n(r)?, n(m)?))
        })
        .collect::<Result<Vec<_>>>()?;
    BlockProfile::new(blocks)
}

fn code_output(g: &GenMatrix) -> Output {
    Output::ok(wire::code_to_json(g)).with_text(table(&g.format_rows()))
}

fn run(cmd: Cmd) -> Result<Output> {
    match cmd {
        Cmd::FieldInfo(t) => {
            let tower = t.build()?;
            let levels: Vec<Value> = Level::ALL
                .iter()
                .filter(|&&l| tower.has_level(l))
                .map(|&l| {
                    let f = tower.field(l)?;
                    let modulus = match (tower.modulus(l), l.below()) {
                        (Some(m), Some(b)) => Some(crate::PolyRing::new(tower.field(b)?).format(&m, "t")),
                        _ => None,
                    };
                    Ok(json!({
                        "level": l.name(),
                        "order": f.order().to_string(),
                        "degree": tower.degree(l),
                        "generator": tower.format(&f.generator()),
                        "modulus": modulus,
                    }))
                })
                .collect::<Result<_>>()?;
            Ok(Output::ok(json!({"tower": wire::tower_to_json(&tower), "levels": levels})))
        }
        Cmd::FindLambda { q, m, all, seed } => {
            let (p, s) = prime_power(q).ok_or_else(|| Error::InvalidTower(format!("{q} is not a prime power")))?;
            let tower = FieldTower::generate(p, s, m, None, seed)?;
            let found: Vec<FieldElem> = if all { tower.lambdas().collect() } else { vec![tower.find_lambda()?] };
            let text = found.iter().map(|l| tower.format(l)).collect::<Vec<_>>().join("\n");
            Ok(Output::ok(json!({
                "tower": wire::tower_to_json(&tower),
                "lambdas": found.iter().map(|l| wire::elem_to_json(&tower, l)).collect::<Vec<_>>(),
                "formatted": found.iter().map(|l| tower.format(l)).collect::<Vec<_>>(),
            }))
            .with_text(text))
        }
        Cmd::Moore { twist, points, rows } => {
            let phi = twist.build()?;
            let pts = points.build(&phi)?;
            let rows = rows.unwrap_or(pts.len());
            let m = twist::moore_rows(&phi, &pts, rows);
            let funcs = phi.funcs();
            let formatted: Vec<Vec<String>> = m.to_rows().iter().map(|r| r.iter().map(|g| funcs.format(g)).collect()).collect();
            let tower = phi.tower();
            let independent = twist::independent_over_k(&phi, &pts);
            Ok(Output::ok(json!({
                "tower": wire::tower_to_json(tower),
                "lambda": wire::elem_to_json(tower, phi.lambda()),
                "entries": m.to_rows().iter().map(|r| r.iter().map(|g| wire::ratfun_to_json(tower, g)).collect::<Vec<_>>()).collect::<Vec<_>>(),
                "formatted": formatted,
                "independent": independent,
            }))
            .with_text(table(&formatted)))
        }
        Cmd::Construct(ConstructCmd::Mrd { twist, points, k }) => {
            let phi = twist.build()?;
            let pts = points.build(&phi)?;
            Ok(code_output(&codes::construct_mrd(&phi, &pts, k)?))
        }
        Cmd::Reduce { code, f, r, seed, allow_small_degree } => {
            let g = read_code(&code)?;
            let base = g.tower().truncated(Level::Fqm);
            let reduced = match (f, r) {
                (Some(f), _) if f == "paper-quartic" => codes::reduce_code(&g, &presets::paper_quartic(&base), allow_small_degree)?,
                (Some(f), _) => codes::reduce_code(&g, &wire::poly_from_json(&base, Level::Fqm, &parse_json(&f)?)?, allow_small_degree)?,
                (None, Some(r)) => codes::reduce_code(&g, &base.irreducible(r, seed)?, allow_small_degree)?,
                (None, None) => codes::fallback_reduction(&g)?,
            };
            Ok(code_output(&reduced))
        }
        Cmd::Certify { code } => {
            let g = read_code(&code)?;
            let cert = codes::certify_mrd(&g)?;
            let text = format!(
                "certified: {}\nchecked: {} of {}\ntime: {} ms",
                cert.certified, cert.count_checked, cert.total, cert.wall_time_ms
            );
            Ok(Output::ok(wire::certificate_to_json(g.tower(), &cert)).with_text(text).check(cert.certified))
        }
        Cmd::Distance { code, budget } => {
            let g = read_code(&code)?;
            let d = codes::min_rank_distance(&g, budget)?;
            let singleton = g.n() - g.k() + 1;
            Ok(Output::ok(json!({"distance": d, "singleton": singleton, "mrd": d == singleton})).check(d == singleton))
        }
        Cmd::TwistedGabidulin { tower, k, h, frob, eta, points } => {
            let tower = tower.build()?.truncated(Level::Fqm);
            let eta = parse_elem(&tower, Level::Fqm, &eta)?;
            let pts = match points {
                Some(s) => parse_json(&s)?
                    .as_array()
                    .ok_or_else(|| Error::Parse("points must be an array".into()))?
                    .iter()
                    .map(|p| wire::elem_from_json(&tower, Level::Fqm, p))
                    .collect::<Result<Vec<_>>>()?,
                None => tower.field(Level::Fqm)?.basis(Level::Fq),
            };
            Ok(code_output(&codes::twisted_gabidulin(&tower, k, h, frob, &eta, &pts)?))
        }
        Cmd::Intersect { code, frob, other } => {
            let g = read_code(&code)?;
            match other {
                Some(o) => {
                    let h = read_code(&o)?;
                    Ok(Output::ok(json!({"dim": codes::intersection_dim(&g, &h)?})))
                }
                None => {
                    let dims = frob
                        .iter()
                        .map(|&s| Ok((s.to_string(), json!(codes::intersection_dim(&g, &codes::frobenius_code(&g, s)?)?))))
                        .collect::<Result<serde_json::Map<_, _>>>()?;
                    Ok(Output::ok(json!({"k": g.k(), "dims": dims})))
                }
            }
        }
        Cmd::SearchR { code, r_min, r_max, tries } => {
            let g = read_code(&code)?;
            let attempts = codes::search_reduction_degree(&g, r_min, r_max, tries)?;
            let base = g.tower().truncated(Level::Fqm);
            let found = attempts.last().filter(|a| a.certificate.certified);
            let json = json!({
                "attempts": attempts.iter().map(|a| json!({
                    "r": a.r,
                    "seed": a.seed,
                    "f": wire::poly_to_json(&base, &a.modulus),
                    "certified": a.certificate.certified,
                    "count_checked": a.certificate.count_checked as u64,
                })).collect::<Vec<_>>(),
                "r": found.map(|a| a.r),
                "fallback_r": codes::fallback_degree(g.tower().q() as usize, g.k()),
            });
            Ok(Output::ok(json).check(found.is_some()))
        }
        Cmd::Ferrers(FerrersCmd::Bound { heights, profile, d }) => {
            let mut out = serde_json::Map::new();
            let diagram = if profile.is_empty() {
                FerrersDiagram::new(heights)?
            } else {
                let p = parse_profile(&profile)?;
                out.insert("block_bound".into(), json!(ferrers::block_bound(&p, d)?));
                p.diagram()
            };
            let bound = ferrers::es_bound(&diagram, d)?;
            out.insert("heights".into(), json!(diagram.heights()));
            out.insert("d".into(), json!(d));
            out.insert("bound".into(), json!(bound));
            Ok(Output::ok(Value::Object(out)).with_text(bound.to_string()))
        }
        Cmd::Ferrers(FerrersCmd::Construct { twist, profile, d, heights, budget, verify_seed }) => {
            let phi = twist.build()?;
            let p = parse_profile(&profile)?;
            let code = if heights.is_empty() {
                ferrers::construct_ferrers(&p, d, &phi)?
            } else {
                ferrers::construct_ferrers_general(&p, &FerrersDiagram::new(heights)?, d, &phi)?
            };
            let report = ferrers::verify_ferrers(&code, d, budget, verify_seed)?;
            let ok = report.fits && report.distance_ok;
            Ok(Output::ok(wire::ferrers_to_json(&code, Some(&report))).check(ok))
        }
        Cmd::Ferrers(FerrersCmd::Verify { code, d, budget, seed }) => {
            let code = wire::ferrers_from_json(&read_json(&code)?)?;
            let d = d.unwrap_or(code.d);
            let report = ferrers::verify_ferrers(&code, d, budget, seed)?;
            let tower = code.fq.tower().truncated(Level::Fq);
            let ok = report.fits && report.distance_ok;
            Ok(Output::ok(wire::ferrers_report_to_json(&tower, &report)).check(ok))
        }
        Cmd::Msrd(MsrdCmd::Construct { twist, profile, k, budget }) => {
            let phi = twist.build()?;
            let code = msrd::construct_msrd(&SumRankProfile::new(profile)?, k, &phi)?;
            let report = budget.map(|b| msrd::distance_report(&code, b)).transpose()?;
            let ok = report.as_ref().is_none_or(|r| r.msrd);
            let rows: Vec<Vec<String>> = code.g.to_rows().iter().map(|r| r.iter().map(|x| code.tower.format(x)).collect()).collect();
            let mut text = table(&rows);
            if let Some(r) = &report {
                text.push_str(&format!(
                    "\nsum-rank distance: {} (singleton {}, {} classes, msrd: {})",
                    r.distance, r.singleton, r.classes, r.msrd
                ));
            }
            Ok(Output::ok(wire::msrd_to_json(&code, report.as_ref())).with_text(text).check(ok))
        }
        Cmd::Msrd(MsrdCmd::Distance { code, budget }) => {
            let code = wire::msrd_from_json(&read_json(&code)?)?;
            let report = msrd::distance_report(&code, budget)?;
            Ok(Output::ok(wire::msrd_report_to_json(&report)).check(report.msrd))
        }
        Cmd::Fixture(FixtureCmd::PaperS5) => paper_s5(),
    }
}

/// Differences between a golden matrix of strings and a computed one.
fn diff_rows(name: &str, expected: &Value, got: &[Vec<String>], out: &mut Vec<Value>) {
    let exp: Vec<Vec<String>> = serde_json::from_value(expected.clone()).unwrap_or_default();
    let rows = exp.len().max(got.len());
    for i in 0..rows {
        let cols = exp.get(i).map_or(0, Vec::len).max(got.get(i).map_or(0, Vec::len));
        for j in 0..cols {
            let e = exp.get(i).and_then(|r| r.get(j));
            let g = got.get(i).and_then(|r| r.get(j));
            if e != g {
                out.push(json!({"at": format!("{name}[{i}][{j}]"), "expected": e, "got": g}));
            }
        }
    }
}

fn paper_s5() -> Result<Output> {
    let golden: Value = serde_json::from_str(PAPER_S5).expect("embedded fixture is valid JSON");
    let g = presets::paper_generator()?;
    let reduced = presets::paper_reduced_generator()?;
    let cert = codes::certify_mrd(&reduced)?;
    let mut diff = Vec::new();
    diff_rows("G", &golden["G"], &g.format_rows(), &mut diff);
    diff_rows("G_reduced", &golden["G_reduced"], &reduced.format_rows(), &mut diff);
    let mut dims = BTreeMap::new();
    let golden_dims = golden["intersection_dims"].as_object().cloned().unwrap_or_default();
    for (s, want) in &golden_dims {
        let s_val: usize = s.parse().map_err(|_| Error::Parse(format!("bad exponent {s}")))?;
        let got = codes::intersection_dim(&reduced, &codes::frobenius_code(&reduced, s_val)?)?;
        if Some(got as u64) != want.as_u64() {
            diff.push(json!({"at": format!("intersection_dims[{s}]"), "expected": want, "got": got}));
        }
        dims.insert(s_val, got);
    }
    let gc = &golden["certificate"];
    for (key, got) in [
        ("total", json!(cert.total as u64)),
        ("count_checked", json!(cert.count_checked as u64)),
        ("certified", json!(cert.certified)),
    ] {
        if gc[key] != got {
            diff.push(json!({"at": format!("certificate.{key}"), "expected": gc[key], "got": got}));
        }
    }
    let passed = diff.is_empty() && cert.certified;
    let text = format!(
        "G:\n{}\n\nG reduced:\n{}\n\ncertified: {} ({} of {}, {} ms)\nintersections: {:?}\ndiff: {}",
        table(&g.format_rows()),
        table(&reduced.format_rows()),
        cert.certified,
        cert.count_checked,
        cert.total,
        cert.wall_time_ms,
        dims,
        if diff.is_empty() { "empty".to_string() } else { format!("{} entries", diff.len()) },
    );
    Ok(Output::ok(json!({
        "certified": cert.certified,
        "certificate": wire::certificate_to_json(reduced.tower(), &cert),
        "G": g.format_rows(),
        "G_reduced": reduced.format_rows(),
        "intersection_dims": dims,
        "diff": diff,
        "match": diff.is_empty(),
    }))
    .with_text(text)
    .check(passed))
}

fn threads(flag: Option<usize>) -> Option<usize> {
    flag.or_else(|| std::env::var("TWISTCODES_THREADS").ok()?.parse().ok()).filter(|&n| n > 0)
}

/// Runs the command line given by `args` (program name first), writing to
/// stdout and stderr; returns the exit status.
pub fn run_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads(cli.threads) {
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return 1;
        }
    };
    let pretty = cli.pretty;
    match pool.install(|| run(cli.cmd)) {
        Ok(out) => {
            match (&out.text, pretty) {
                (Some(t), true) => println!("{t}"),
                (None, true) => println!("{}", serde_json::to_string_pretty(&out.json).unwrap()),
                _ => println!("{}", out.json),
            }
            out.status
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

pub fn main() -> i32 {
    run_args(std::env::args_os())
}
