//! Command-line front end. Exit codes: 0 tame or certified, 1 a
//! mathematical finding such as a witness, 2 input error.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use tame_core::arrangement::Arrangement;
use tame_core::completion::{complete_maxtame_s2, reduce_n_plus_2};
use tame_core::families;
use tame_core::oracle::{cross_check_addable, falsify_tameness, SampleConfig};
use tame_core::tameness::{addable_set, is_m_tame, maxtame_certificate, TamenessVerdict};
use tame_core::{Error, Ray, Region};

use crate::io::{self, addable_json, parse_circles, parse_region, ray_json, region_to_json, witness_json, InputError};
use crate::render::{render, Projection, RenderSpec};

/// Environment variable selecting the default render style.
pub const STYLE_ENV: &str = "TAME_RENDER_STYLE";

#[derive(Parser, Debug)]
#[command(name = "tame", version, about = "Exact tools for tame open regions of spheres")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide m-tameness; prints a balanced witness when it fails.
    Check {
        #[arg(long)]
        m: usize,
        file: PathBuf,
    },
    /// Describe the addable set of an n-tame region.
    Addable { file: PathBuf },
    /// Run the maxtame certificate.
    Certify { file: PathBuf },
    /// Complete a 3-tame region of the 2-sphere to a maxtame region.
    Complete {
        file: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        /// Also write the step log as JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Merge two components of an n-tame region with n + 2 components.
    Reduce {
        file: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Generate a certified example region.
    Gen {
        family: Family,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// Use the other of the two circle choices (s1 only).
        #[arg(long)]
        flip: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Build the arrangement of great circles listed in a file.
    Arrange {
        circles: PathBuf,
        #[arg(long)]
        stats: bool,
    },
    /// Render a region as SVG.
    Render {
        file: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "stereographic")]
        projection: ProjectionArg,
        /// Shade the antipodal set as well.
        #[arg(long)]
        antipode: bool,
    },
    /// Randomised falsification and addable-set cross-check.
    Oracle {
        file: PathBuf,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 64)]
        bound: u32,
        /// Also compare the addable set with direct probing.
        #[arg(long)]
        addable: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// n + 1 simplicial components on S^{n-1} (`--n`).
    Simplex,
    /// A (2k+1)-gon with 2k + 1 triangles (`--k`).
    FamilyA,
    /// 2k + 2 triangles (`--k`).
    FamilyB,
    /// Seven components from a perturbed six-triangle member.
    FamilyB7,
    /// Alternating arcs on the circle for k antipodal pairs (`--k`, odd).
    S1,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectionArg {
    Stereographic,
    Orthographic,
}

/// Outcome of a command: exit code plus text for stdout.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

#[derive(Debug)]
pub enum Failure {
    Input(String),
    Finding(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Failure {
        Failure::Input(e.to_string())
    }
}

fn math(e: Error) -> Failure {
    match e {
        Error::NotTame { m, witness } => Failure::Finding(
            json!({"verdict": "not-tame", "m": m, "witness": witness_json(&witness)}).to_string(),
        ),
        other => Failure::Input(other.to_string()),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Region, Failure> {
    parse_region(&read(path)?).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn ok(v: serde_json::Value) -> Result<Outcome, Failure> {
    Ok(Outcome { code: 0, stdout: format!("{v}\n") })
}

fn found(v: serde_json::Value) -> Result<Outcome, Failure> {
    Ok(Outcome { code: 1, stdout: format!("{v}\n") })
}

fn s1_directions(k: usize) -> Result<Vec<Ray>, Failure> {
    // Rational directions spread over a half turn.
    (0..k)
        .map(|i| {
            let t = i as i64;
            let kk = k as i64;
            Ray::from_ints(&[kk - 2 * t, 2 * t + 1]).map_err(|e| Failure::Input(e.to_string()))
        })
        .collect()
}

/// Runs a parsed command.
pub fn execute(cmd: Command) -> Result<Outcome, Failure> {
    match cmd {
        Command::Check { m, file } => {
            let r = load(&file)?;
            match is_m_tame(&r, m) {
                TamenessVerdict::Tame { .. } => ok(json!({"verdict": "tame", "m": m})),
                TamenessVerdict::NotTame { witness, .. } => {
                    found(json!({"verdict": "not-tame", "m": m, "witness": witness_json(&witness)}))
                }
            }
        }
        Command::Addable { file } => {
            let r = load(&file)?;
            let a = addable_set(&r).map_err(math)?;
            ok(addable_json(&a))
        }
        Command::Certify { file } => {
            let r = load(&file)?;
            let rep = maxtame_certificate(&r).map_err(math)?;
            let reps: Vec<_> = rep.residual.representatives().iter().map(ray_json).collect();
            let v = json!({
                "certified": rep.certified,
                "components": r.component_count(),
                "residual_cells": rep.residual.cells().len(),
                "residual_points": reps,
            });
            if rep.certified { ok(v) } else { found(v) }
        }
        Command::Complete { file, out, trace } => {
            let r = load(&file)?;
            let t = complete_maxtame_s2(&r).map_err(math)?;
            write(&out, &region_to_json(&t.final_region))?;
            let steps: Vec<_> = t
                .steps
                .iter()
                .map(|s| {
                    json!({
                        "operation": s.operation,
                        "face": s.face,
                        "added_cells": s.added.len(),
                        "residual_cells": s.residual_cells,
                        "components": s.region.component_count(),
                    })
                })
                .collect();
            let log = json!({
                "certified": t.certified,
                "coarsened_components": t.coarsened.component_count(),
                "hemispheres": t.hemispheres.iter().map(ray_json).collect::<Vec<_>>(),
                "balanced_four": t.balanced_four.iter().map(ray_json).collect::<Vec<_>>(),
                "steps": steps,
                "components": t.final_region.component_count(),
            });
            if let Some(p) = trace {
                write(&p, &format!("{log:#}\n"))?;
            }
            if t.certified { ok(log) } else { found(log) }
        }
        Command::Reduce { file, out } => {
            let r = load(&file)?;
            let red = reduce_n_plus_2(&r).map_err(math)?;
            if let Some(p) = out {
                write(&p, &region_to_json(&red.region))?;
            }
            ok(json!({
                "merged": red.merged,
                "components": red.region.component_count(),
                "note": red.note,
            }))
        }
        Command::Gen { family, n, k, flip, out } => {
            let region = match family {
                Family::Simplex => families::simplex_family(n.unwrap_or(3)),
                Family::FamilyA => families::family_a(k.unwrap_or(1)),
                Family::FamilyB => families::family_b(k.unwrap_or(2)),
                Family::FamilyB7 => families::perturbed_family_b_7(),
                Family::S1 => families::s1_maxtame(&s1_directions(k.unwrap_or(3))?, flip),
            }
            .map_err(math)?;
            let text = region_to_json(&region);
            match out {
                Some(p) => {
                    write(&p, &text)?;
                    ok(json!({"written": p.display().to_string(), "components": region.component_count()}))
                }
                None => Ok(Outcome { code: 0, stdout: text }),
            }
        }
        Command::Arrange { circles, stats } => {
            let normals = parse_circles(&read(&circles)?).map_err(|e| Failure::Input(format!("{}: {e}", circles.display())))?;
            let arr = Arrangement::build(&normals).map_err(math)?;
            let s = arr.stats();
            if stats {
                Ok(Outcome { code: 0, stdout: format!("{s}\n") })
            } else {
                ok(json!({
                    "vertices": s.vertices, "edges": s.edges, "faces": s.faces,
                    "triangles": s.triangles, "quads": s.quads, "euler": s.euler_ok,
                }))
            }
        }
        Command::Render { file, out, projection, antipode } => {
            let r = load(&file)?;
            let style = std::env::var(STYLE_ENV).ok();
            let mut spec = RenderSpec::styled(style.as_deref());
            spec.projection = match projection {
                ProjectionArg::Stereographic => Projection::Stereographic,
                ProjectionArg::Orthographic => Projection::Orthographic,
            };
            if antipode {
                spec.antipode_fill = Some("#e0e0e0".into());
            }
            let svg = render(&r, &spec).map_err(|e| Failure::Input(e.to_string()))?;
            write(&out, &svg)?;
            ok(json!({"written": out.display().to_string(), "bytes": svg.len()}))
        }
        Command::Oracle { file, m, samples, seed, bound, addable } => {
            let r = load(&file)?;
            let cfg = SampleConfig { seed, samples, denominator_bound: bound };
            if let Some(w) = falsify_tameness(&r, m, cfg) {
                return found(json!({"verdict": "not-tame", "m": m, "seed": seed, "witness": witness_json(&w)}));
            }
            let mut v = json!({"verdict": "no-witness", "m": m, "seed": seed, "samples": samples});
            if addable {
                let rep = cross_check_addable(&r, cfg).map_err(math)?;
                v["addable_check"] = json!({
                    "samples": rep.samples, "addable": rep.addable,
                    "not_addable": rep.not_addable, "inside": rep.inside,
                });
            }
            ok(v)
        }
    }
}

/// Parses arguments and runs, writing to the given streams.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 { write!(stdout, "{e}") } else { write!(stderr, "{e}") };
            return code;
        }
    };
    match execute(cli.command) {
        Ok(o) => {
            let _ = stdout.write_all(o.stdout.as_bytes());
            o.code
        }
        Err(Failure::Finding(s)) => {
            let _ = writeln!(stdout, "{s}");
            1
        }
        Err(Failure::Input(s)) => {
            let _ = writeln!(stderr, "error: {s}");
            2
        }
    }
}

#[doc(hidden)]
pub use io::FORMAT;
