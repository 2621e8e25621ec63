//! Command-line interface.
//!
//! Exit codes: 0 = success/verified, 1 = verification failure, 2 = input
//! error.

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::mirror::{
    atlas_section, common_chart, enumerate_invertible, mirror_pipeline,
    rational_point_probe, shared_setup_check, CorpusEntry, MirrorError,
};
use crate::poly::{
    exponent_matrix, parse_polynomial, weight_system, Polynomial, WeightSystem,
};
use crate::symmetry::{
    aut_group, is_cy_type, parse_group_spec, DiagonalGroup,
};
use crate::toric::verify_mirror_ambient;
use num_bigint::BigInt;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Parser, Debug)]
#[command(
    name = "bhk",
    about = "Exact mirror constructions for invertible quasi-homogeneous polynomials"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Write output to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Analyze a polynomial and group: weights, atoms, symmetry data,
    /// mirror data, ambient verification.
    Analyze {
        poly: String,
        /// Group generators: semicolon-separated comma-rational vectors;
        /// `j` is the exponential element.
        #[arg(long, default_value = "j")]
        group: String,
    },
    /// Compute the mirror pair (requires Calabi-Yau type).
    Mirror {
        poly: String,
        #[arg(long, default_value = "j")]
        group: String,
    },
    /// Compare the mirrors of two polynomials sharing weights and group.
    Compare {
        poly1: String,
        poly2: String,
        #[arg(long, default_value = "j")]
        group: String,
        /// Number of rational probe points.
        #[arg(long, default_value_t = 0)]
        probe: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Enumerate invertible polynomials for a weight system.
    Enumerate {
        /// Comma-separated weights c0,c1,...
        #[arg(long)]
        weights: String,
        #[arg(long)]
        degree: u64,
        #[arg(long, default_value = "j")]
        group: String,
        /// Compare all pairs of enumerated polynomials.
        #[arg(long, default_value_t = false)]
        compare_all: bool,
    },
    /// Verify every entry of a corpus file (JSON lines).
    Verify {
        #[arg(long)]
        corpus: std::path::PathBuf,
    },
}

fn emit(cli_out: &Option<std::path::PathBuf>, text: String) -> Result<(), String> {
    match cli_out {
        Some(path) => std::fs::write(path, text).map_err(|e| e.to_string()),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn parse_inputs(
    poly: &str,
    group: &str,
) -> Result<(Polynomial, WeightSystem, DiagonalGroup), String> {
    let p = parse_polynomial(poly).map_err(|e| format!("bad polynomial: {e}"))?;
    let e = exponent_matrix(&p).map_err(|e| format!("bad polynomial: {e}"))?;
    let w = weight_system(&e).map_err(|e| format!("no positive weight system: {e}"))?;
    let aut = aut_group(&e);
    let g = parse_group_spec(group, &w, &aut)?;
    Ok((p, w, g))
}

fn report_text(r: &crate::mirror::MirrorReport) -> String {
    let mut out = Vec::new();
    out.push(format!("input: {}", r.input.polynomial));
    out.push(format!(
        "weights: ({}) degree {}",
        r.weights.c.join(","),
        r.weights.d
    ));
    out.push(format!(
        "calabi_yau: {}{}",
        r.calabi_yau.holds,
        r.calabi_yau
            .diagnostic
            .as_ref()
            .map(|d| format!(" ({d})"))
            .unwrap_or_default()
    ));
    out.push(format!("atoms: {}", r.atoms.join(" + ")));
    out.push(format!(
        "aut: order {} invariants ({})",
        r.aut.order,
        r.aut.invariants.join(",")
    ));
    out.push(format!(
        "group: order {} invariants ({}) sl={} contains_j={}",
        r.group.order,
        r.group.invariants.join(","),
        r.group.is_sl,
        r.group.contains_j
    ));
    out.push(format!(
        "transpose weights: ({}) degree {}",
        r.transpose.weights.c.join(","),
        r.transpose.weights.d
    ));
    out.push(format!(
        "dual group: order {} invariants ({})",
        r.dual_group.order,
        r.dual_group.invariants.join(",")
    ));
    if let Some(q) = &r.quotients {
        out.push(format!(
            "quotients: G~ ({}) G^T~ ({})",
            q.g_tilde.invariants.join(","),
            q.gt_tilde.invariants.join(",")
        ));
    }
    if let Some(a) = &r.ambient {
        out.push(format!(
            "ambient: weights ({}) quotient ({}) verified={}",
            a.relation_weights.join(","),
            a.quotient_invariants.join(","),
            a.verified
        ));
    }
    if let Some(at) = &r.atlas {
        out.push(format!("shared chart: {}", at.shared_chart));
        for (i, side) in at.dehom_maps.iter().enumerate() {
            out.push(format!("dehom[{i}]: {}", side.join("; ")));
        }
        if let Some(p) = &at.probe {
            out.push(format!(
                "probe: {}/{} passed (seed {})",
                p.passes, p.samples, p.seed
            ));
        }
    }
    out.join("\n")
}

fn render_report(
    r: &crate::mirror::MirrorReport,
    format: Format,
) -> Result<String, String> {
    match format {
        Format::Json => serde_json::to_string_pretty(r).map_err(|e| e.to_string()),
        Format::Text => Ok(report_text(r)),
    }
}

#[derive(Serialize)]
struct EnumerateOut {
    weights: Vec<String>,
    degree: String,
    polynomials: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    comparisons: Vec<ComparisonOut>,
}

#[derive(Serialize)]
struct ComparisonOut {
    left: String,
    right: String,
    shared_chart: String,
    probe_passes: usize,
    probe_samples: usize,
}

#[derive(Serialize)]
struct VerifyOut {
    entries: usize,
    checks: usize,
    failures: Vec<String>,
}

/// Runs the CLI on explicit arguments; returns the process exit code.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            // clap help/version exit with success.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn run(cli: &Cli) -> Result<i32, String> {
    match &cli.command {
        Command::Analyze { poly, group } => {
            let (p, _, g) = parse_inputs(poly, group)?;
            let report = mirror_pipeline(&p, &g).map_err(|e| e.to_string())?;
            emit(&cli.out, render_report(&report, cli.format)?)?;
            Ok(0)
        }
        Command::Mirror { poly, group } => {
            let (p, _, g) = parse_inputs(poly, group)?;
            let e = exponent_matrix(&p).map_err(|e| e.to_string())?;
            let cy = is_cy_type(&e, &g).map_err(|e| e.to_string())?;
            if !cy.holds() {
                return Err(cy
                    .diagnostic()
                    .unwrap_or_else(|| "not of Calabi-Yau type".into()));
            }
            let report = mirror_pipeline(&p, &g).map_err(|e| e.to_string())?;
            emit(&cli.out, render_report(&report, cli.format)?)?;
            Ok(if report.ambient.as_ref().is_some_and(|a| a.verified) {
                0
            } else {
                1
            })
        }
        Command::Compare {
            poly1,
            poly2,
            group,
            probe,
            seed,
        } => {
            let (p1, _, g) = parse_inputs(poly1, group)?;
            let p2 = parse_polynomial(poly2).map_err(|e| e.to_string())?;
            let e1 = exponent_matrix(&p1).map_err(|e| e.to_string())?;
            let e2 = exponent_matrix(&p2).map_err(|e| e.to_string())?;
            let verdict = shared_setup_check(&e1, &e2, &g).map_err(|e| e.to_string())?;
            if !verdict.ok() {
                return Err(verdict.reason.unwrap_or_else(|| "setup mismatch".into()));
            }
            let atlas = common_chart(&e1, &e2, &g).map_err(|e| e.to_string())?;
            let probe_record = match rational_point_probe(&atlas, *probe, *seed) {
                Ok(r) => r,
                Err(MirrorError::ProbeFailure { sample, point }) => {
                    eprintln!("probe failed at sample {sample}: ({point})");
                    return Ok(1);
                }
                Err(e) => return Err(e.to_string()),
            };
            let mut report = mirror_pipeline(&p1, &g).map_err(|e| e.to_string())?;
            report.atlas = Some(atlas_section(&atlas, Some(&probe_record)));
            emit(&cli.out, render_report(&report, cli.format)?)?;
            Ok(0)
        }
        Command::Enumerate {
            weights,
            degree,
            group,
            compare_all,
        } => {
            let c: Result<Vec<BigInt>, _> =
                weights.split(',').map(|t| t.trim().parse::<BigInt>()).collect();
            let c = c.map_err(|e| format!("bad weights: {e}"))?;
            if c.iter().any(|x| x <= &BigInt::from(0)) {
                return Err("weights must be positive".into());
            }
            let w = WeightSystem::from_weights(c, BigInt::from(*degree));
            let matrices = enumerate_invertible(&w);
            let polys: Vec<Polynomial> = matrices
                .iter()
                .map(Polynomial::from_exponent_matrix)
                .collect();
            let mut comparisons = Vec::new();
            if *compare_all {
                for a in 0..matrices.len() {
                    for b in a + 1..matrices.len() {
                        let aut = aut_group(&matrices[a]);
                        let wa = weight_system(&matrices[a]).map_err(|e| e.to_string())?;
                        let g = parse_group_spec(group, &wa, &aut)?;
                        let verdict = shared_setup_check(&matrices[a], &matrices[b], &g)
                            .map_err(|e| e.to_string())?;
                        if !verdict.ok() {
                            continue;
                        }
                        let atlas = common_chart(&matrices[a], &matrices[b], &g)
                            .map_err(|e| e.to_string())?;
                        let record = rational_point_probe(&atlas, 10, 1)
                            .map_err(|e| e.to_string())?;
                        comparisons.push(ComparisonOut {
                            left: polys[a].to_string(),
                            right: polys[b].to_string(),
                            shared_chart: atlas.shared_chart.to_string(),
                            probe_passes: record.passes,
                            probe_samples: record.samples,
                        });
                    }
                }
            }
            let out = EnumerateOut {
                weights: w.weights().iter().map(|x| x.to_string()).collect(),
                degree: w.degree().to_string(),
                polynomials: polys.iter().map(|p| p.to_string()).collect(),
                comparisons,
            };
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&out).map_err(|e| e.to_string())?,
                Format::Text => {
                    let mut lines = vec![format!(
                        "weights ({}) degree {}: {} polynomial(s)",
                        out.weights.join(","),
                        out.degree,
                        out.polynomials.len()
                    )];
                    lines.extend(out.polynomials.iter().cloned());
                    for c in &out.comparisons {
                        lines.push(format!(
                            "compare {} ~ {}: chart {} probe {}/{}",
                            c.left, c.right, c.shared_chart, c.probe_passes, c.probe_samples
                        ));
                    }
                    lines.join("\n")
                }
            };
            emit(&cli.out, text)?;
            Ok(0)
        }
        Command::Verify { corpus } => {
            let data = std::fs::read_to_string(corpus).map_err(|e| e.to_string())?;
            let mut entries = 0usize;
            let mut checks = 0usize;
            let mut failures = Vec::new();
            for (lineno, line) in data.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() {
                    continue;
                }
                let entry: CorpusEntry = serde_json::from_str(line)
                    .map_err(|e| format!("line {}: {e}", lineno + 1))?;
                entries += 1;
                let e = entry.matrix();
                for gi in 0..entry.groups.len() {
                    let g = entry.group(gi);
                    checks += 1;
                    match verify_mirror_ambient(&e, &g) {
                        Ok(v) if v.passed() => {}
                        Ok(v) => failures.push(format!(
                            "line {}: group {}: {:?}",
                            lineno + 1,
                            gi,
                            v.clauses.iter().filter(|c| !c.passed).collect::<Vec<_>>()
                        )),
                        Err(err) => {
                            failures.push(format!("line {}: group {}: {err}", lineno + 1, gi))
                        }
                    }
                }
            }
            let out = VerifyOut {
                entries,
                checks,
                failures: failures.clone(),
            };
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&out).map_err(|e| e.to_string())?,
                Format::Text => format!(
                    "{} entries, {} checks, {} failure(s){}",
                    out.entries,
                    out.checks,
                    out.failures.len(),
                    if out.failures.is_empty() {
                        String::new()
                    } else {
                        format!("\n{}", out.failures.join("\n"))
                    }
                ),
            };
            emit(&cli.out, text)?;
            Ok(if failures.is_empty() { 0 } else { 1 })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analyze_smoke() {
        let code = run_cli(["bhk", "analyze", "x0^5+x1^5+x2^5+x3^5+x4^5", "--group", "j"]);
        assert_eq!(code, 0);
    }

    #[test]
    fn mirror_rejects_non_cy() {
        let code = run_cli(["bhk", "mirror", "x0^3"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn compare_with_probe() {
        let code = run_cli([
            "bhk",
            "compare",
            "x0^5+x1^5+x2^5+x3^5+x4^5",
            "x0^4*x1+x1^4*x2+x2^4*x3+x3^4*x4+x4^5",
            "--group",
            "j",
            "--probe",
            "5",
            "--format",
            "json",
        ]);
        assert_eq!(code, 0);
    }

    #[test]
    fn compare_rejects_weight_mismatch() {
        let code = run_cli([
            "bhk",
            "compare",
            "x0^5+x1^5+x2^5+x3^5+x4^5",
            "x0^4+x1^4+x2^4+x3^4+x4^2",
        ]);
        assert_eq!(code, 2);
    }

    #[test]
    fn enumerate_quintics() {
        let code = run_cli([
            "bhk",
            "enumerate",
            "--weights",
            "1,1,1,1,1",
            "--degree",
            "5",
            "--format",
            "json",
        ]);
        assert_eq!(code, 0);
    }

    #[test]
    fn bad_polynomial_is_input_error() {
        let code = run_cli(["bhk", "analyze", "3*x0^5"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn verify_corpus_file() {
        let corpus = crate::mirror::generate_corpus(2, 6, 200);
        let lines: Vec<String> = corpus
            .iter()
            .map(|e| serde_json::to_string(e).unwrap())
            .collect();
        let dir = std::env::temp_dir();
        let path = dir.join("bhk-test-corpus.jsonl");
        std::fs::write(&path, lines.join("\n")).unwrap();
        let code = run_cli([
            "bhk",
            "verify",
            "--corpus",
            path.to_str().unwrap(),
            "--format",
            "json",
        ]);
        std::fs::remove_file(&path).ok();
        assert_eq!(code, 0);
    }
}
