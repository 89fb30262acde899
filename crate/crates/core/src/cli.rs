//! The `folcone` command-line surface.
//!
//! Exit codes: 0 success, 1 invalid input, 2 mathematical failure
//! (no transverse class, overlapping family, failed oracle check, product-type
//! system where cycles are required), 3 I/O or syntax error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::arith::parse_rat_list;
use crate::foliation::{
    classify_ray, family_report, foliation_cone, homology_cone, verify_disk_subcone, DiskBasis,
    DiskVerdict,
};
use crate::io::{
    parse_plane, parse_system_file, render_classification_text, render_cone_text,
    render_family_text, render_json, slice_plot_data,
};
use crate::markov::{
    class_of, decompose_into_minimal_loops, enumerate_periodic_strings, minimal_loops,
    validate_system, MarkovSystem, DEFAULT_ENUM_CAP,
};
use crate::orbit::{brute_force_cone, convergence_report, render_convergence_text, SimulationConfig};
use crate::Error;

#[derive(Debug, Parser)]
#[command(name = "folcone", version, about = "Exact foliation cones from symbolic Markov data")]
struct Cli {
    /// Write the report to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a system file and print counts.
    Check { file: PathBuf },
    /// List minimal loops, and optionally every periodic string up to a length.
    Loops {
        file: PathBuf,
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Homology cone, foliation cone and facet inequalities.
    Cone {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Classify the rational ray through a vector.
    Classify {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        ray: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Oracle checks: completeness of the loops, hull of all periodic strings,
    /// integer decomposition of every periodic string.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 10)]
        max_len: usize,
        #[arg(long, default_value_t = 6)]
        integer_max_len: usize,
    },
    /// Check that the disk orthant lies in the foliation cone.
    Disk { file: PathBuf },
    /// Pairwise interior overlaps of several foliation cones.
    Family {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Random orbits, closed-walk containment and convergence statistics.
    Simulate {
        file: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        steps: usize,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 10)]
        window: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// CSV of the foliation cone's section by a 2-plane.
    Slice {
        file: PathBuf,
        /// Two vectors separated by `;`, e.g. "1,0;0,1".
        #[arg(long, allow_hyphen_values = true)]
        plane: String,
    },
}

/// Periodic-string budget, overridable with `FOLCONE_ENUM_CAP`.
pub fn enum_cap() -> usize {
    std::env::var("FOLCONE_ENUM_CAP")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ENUM_CAP)
}

pub fn load_system(path: &Path) -> Result<MarkovSystem, Error> {
    let text = fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let doc = parse_system_file(&text)?;
    let name = doc.name.clone().unwrap_or_else(|| {
        path.file_stem()
            .map_or("system".to_string(), |s| s.to_string_lossy().into_owned())
    });
    Ok(validate_system(&doc)?.with_name(name))
}

/// Runs the CLI on `argv` (including the program name) and returns the exit code.
pub fn cli_dispatch<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(rendered.as_bytes());
                    0
                }
                _ => {
                    let _ = stderr.write_all(rendered.as_bytes());
                    Error::Usage(String::new()).exit_code()
                }
            };
        }
    };
    match run(&cli) {
        Ok(output) => {
            let written = match &cli.out {
                Some(path) => fs::write(path, &output)
                    .map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
                None => stdout
                    .write_all(output.as_bytes())
                    .map_err(|e| Error::Io(e.to_string())),
            };
            match written {
                Ok(()) => 0,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    e.exit_code()
                }
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            if let Error::FamilyViolation { report, .. } = &e {
                let _ = stderr.write_all(report.as_bytes());
            }
            e.exit_code()
        }
    }
}

fn run(cli: &Cli) -> Result<String, Error> {
    match &cli.command {
        Command::Check { file } => {
            let s = load_system(file)?;
            Ok(format!(
                "system: {}\nletters: {}\ntransitions: {}\nminimal loops: {}\nproduct-type: {}\n",
                s.name(),
                s.letter_count(),
                s.transitions().len(),
                minimal_loops(&s).len(),
                s.is_product_type()
            ))
        }
        Command::Loops { file, max_len } => {
            let s = load_system(file)?;
            let mut out = String::new();
            let loops = minimal_loops(&s);
            out.push_str(&format!("minimal loops: {}\n", loops.len()));
            for l in &loops {
                out.push_str(&format!("  {} {}\n", s.format_word(&l.word), l.class));
            }
            if let Some(l) = max_len {
                let strings = enumerate_periodic_strings(&s, *l, enum_cap())?;
                out.push_str(&format!("periodic strings (length <= {l}): {}\n", strings.len()));
                for p in &strings {
                    out.push_str(&format!("  {} {}\n", s.format_word(p.word()), class_of(&s, p)?));
                }
            }
            Ok(out)
        }
        Command::Cone { file, format } => {
            let r = foliation_cone(&load_system(file)?)?;
            Ok(match format {
                Format::Text => render_cone_text(&r),
                Format::Json => render_json(&r),
            })
        }
        Command::Classify { file, ray, format } => {
            let x = parse_rat_list(ray).ok_or_else(|| Error::Usage(format!("bad ray `{ray}`")))?;
            let r = foliation_cone(&load_system(file)?)?;
            let c = classify_ray(&r, &x)?;
            Ok(match format {
                Format::Text => render_classification_text(&c),
                Format::Json => render_json(&c),
            })
        }
        Command::Verify {
            file,
            max_len,
            integer_max_len,
        } => verify(&load_system(file)?, *max_len, *integer_max_len),
        Command::Disk { file } => {
            let s = load_system(file)?;
            let verdict = verify_disk_subcone(&s, &DiskBasis::from_system(&s))?;
            Ok(match verdict {
                DiskVerdict::Subcone => format!(
                    "disks: {}\nverdict: subcone\nthe disk orthant lies in the foliation cone\n",
                    s.rank()
                ),
                DiskVerdict::NotSubcone {
                    loop_index,
                    column,
                    value,
                } => format!(
                    "disks: {}\nverdict: not a subcone\nloop {} {} has coordinate {value} in column {}\n",
                    s.rank(),
                    loop_index,
                    s.format_word(&minimal_loops(&s)[loop_index].word),
                    column + 1
                ),
            })
        }
        Command::Family { files, format } => {
            let systems = files
                .iter()
                .map(|f| load_system(f))
                .collect::<Result<Vec<_>, _>>()?;
            let f = family_report(&systems)?;
            let rendered = match format {
                Format::Text => render_family_text(&f),
                Format::Json => render_json(&f),
            };
            if !f.violations.is_empty() {
                return Err(Error::FamilyViolation {
                    pairs: f.violations.clone(),
                    report: rendered,
                });
            }
            Ok(rendered)
        }
        Command::Simulate {
            file,
            steps,
            trials,
            seed,
            window,
            format,
        } => {
            let s = load_system(file)?;
            let config = SimulationConfig {
                steps: *steps,
                trials: *trials,
                seed: *seed,
                window: *window,
            };
            let r = convergence_report(&s, &config)?;
            Ok(match format {
                Format::Text => render_convergence_text(&r),
                Format::Json => render_json(&r),
            })
        }
        Command::Slice { file, plane } => {
            let (u, v) =
                parse_plane(plane).ok_or_else(|| Error::Usage(format!("bad plane `{plane}`")))?;
            let r = foliation_cone(&load_system(file)?)?;
            Ok(slice_plot_data(&r, &u, &v)?.to_csv())
        }
    }
}

fn verify(s: &MarkovSystem, max_len: usize, integer_max_len: usize) -> Result<String, Error> {
    let cap = enum_cap();
    let mut out = String::new();
    let mut failures = Vec::new();
    let mut record = |name: &str, ok: bool, detail: String| {
        out.push_str(&format!("{} {name}: {detail}\n", if ok { "PASS" } else { "FAIL" }));
        if !ok {
            failures.push(name.to_string());
        }
    };

    let loops = minimal_loops(s);
    let by_filter: Vec<Vec<usize>> = enumerate_periodic_strings(s, s.letter_count(), cap)?
        .into_iter()
        .map(|p| p.word().to_vec())
        .filter(|w| {
            let mut seen = w.clone();
            seen.sort();
            seen.dedup();
            seen.len() == w.len()
        })
        .collect();
    let from_loops: Vec<Vec<usize>> = loops.iter().map(|l| l.word.clone()).collect();
    record(
        "loop completeness",
        by_filter == from_loops,
        format!("{} minimal loops, {} distinct-letter periodic strings", from_loops.len(), by_filter.len()),
    );

    let hull = homology_cone(s);
    let oracle_len = max_len.max(s.letter_count());
    let brute = brute_force_cone(s, oracle_len, cap)?;
    record(
        "hull of periodic strings",
        brute == hull,
        format!("length <= {oracle_len}, {} generators", hull.generators.len()),
    );

    let mut checked = 0usize;
    let mut bad = 0usize;
    if integer_max_len >= 1 {
        for p in enumerate_periodic_strings(s, integer_max_len, cap)? {
            let parts = decompose_into_minimal_loops(s, &p)?;
            let mut sum = crate::markov::HomologyClass::zero(s.rank());
            let mut len = 0;
            for (l, m) in &parts {
                sum.add_assign(&l.class.scaled(*m as i64));
                len += l.word.len() * m;
            }
            checked += 1;
            if sum != class_of(s, &p)? || len != p.len() {
                bad += 1;
            }
        }
    }
    record(
        "integer decomposition",
        bad == 0,
        format!("{checked} periodic strings of length <= {integer_max_len}, {bad} mismatches"),
    );

    if failures.is_empty() {
        Ok(out)
    } else {
        Err(Error::VerifyFailed(out))
    }
}
