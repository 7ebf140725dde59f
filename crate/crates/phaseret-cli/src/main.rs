//! Command-line front end: generate magnitude-agreement pairs, sample
//! magnitudes along lines, verify agreement, probe the Gabor/Bargmann
//! relation, and evaluate the series/integral identities.
//!
//! Exit codes: 0 success (or agreement), 2 a disagreement verdict,
//! 1 any error.

mod lines;
mod report;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use phaseret::gabor::{
    bargmann_transform, gabor_bargmann_residual, gabor_transform, QuadratureSpec, Signal,
};
use phaseret::hadamard::{magnitude_on_line, HadamardForm, MagnitudeProfile};
use phaseret::pairs::{
    hyperbolic_lattice_pair, infinite_lines_b_prime, mcdonald_pair, parallel_pair, quartic_pair,
    rational_angle_pair, rotation_order, universal_base, universal_partner, AmbiguityPair,
    HyperbolicSign, PairConstraint, SeriesInfo,
};
use phaseret::primary::Genus;
use phaseret::roots::{decompose, RootSystem};
use phaseret::verify::{
    agreement_report, gamma_integral, gamma_integral_quadrature, jensen_bound,
    jensen_bound_check, jensen_c, universal_series_sum, JensenBoundInput, SeriesId, Verdict,
};

use lines::{parse_complex, parse_grid, parse_lines, NamedLine};
use report::{agreement_json, f17, join_object, profile_json};

#[derive(Parser)]
#[command(name = "phaseret", about = "Entire-function pairs with matching magnitudes on lines", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PairKind {
    /// single-line pair from one exclusive root (and its mirror)
    SingleLine,
    /// 1 - z^2/(1+i)^2 vs 1 - z^2/(1-i)^2 on R and iR
    Quartic,
    /// cosh(pi z/2) +- i sinh(pi z/2) on R + iZ
    Coshsinh,
    /// custom rational-angle pair from one fundamental root
    Rational,
    /// custom two-parallel-lines pair from one lattice base
    Parallel,
    /// universal-family base against the partner for spacing 1/m
    Universal,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum WhichForm {
    F,
    G,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SignalKind {
    Gaussian,
    /// preimage of 1 - z^2/(1+i)^2
    Quartic,
    /// preimage of cosh(pi z/2) + i sinh(pi z/2)
    CoshsinhPlus,
    /// preimage of cosh(pi z/2) - i sinh(pi z/2)
    CoshsinhMinus,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeriesKind {
    /// sum_k ( log|(4k-3)/(4k+1)| + 4/(4k+1) ) = pi
    PiIdentity,
    /// b_m of the universal family (pass --m)
    #[value(name = "b-m")]
    BM,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a pair manifest (JSON)
    Gen {
        #[arg(long, value_enum)]
        kind: PairKind,
        /// line spacing for parallel/universal kinds
        #[arg(long, default_value_t = 1.0)]
        tau: f64,
        /// intersection angle in radians for the rational kind
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
        theta: f64,
        /// fundamental-domain root as re,im
        #[arg(long, allow_hyphen_values = true)]
        root: Option<String>,
        /// imaginary linear coefficient of f (parallel kind)
        #[arg(long, default_value_t = 0.0)]
        b: f64,
        #[arg(long = "series-K", visible_alias = "K", default_value_t = 1_000_000)]
        series_k: u64,
        /// partner index for the universal kind
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long, default_value_t = 3)]
        n_max: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sample |f| along one line (CSV or JSON)
    Eval {
        #[arg(long)]
        pair: Option<PathBuf>,
        #[arg(long)]
        form: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = WhichForm::F)]
        which: WhichForm,
        #[arg(long)]
        line: String,
        #[arg(long, default_value = "-5:5:1001", allow_hyphen_values = true)]
        grid: String,
        #[arg(long, default_value_t = 2000)]
        truncation: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check magnitude agreement of a pair on a line set
    Verify {
        #[arg(long)]
        pair: PathBuf,
        /// comma-separated line specs: R, iR, R+1.5i, rot(0.5),
        /// family(R, tau=0.5, n=-2..2)
        #[arg(long)]
        lines: String,
        #[arg(long, default_value = "-5:5:1001", allow_hyphen_values = true)]
        grid: String,
        #[arg(long, default_value_t = 2000)]
        truncation: u64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gabor/Bargmann relation residuals for a built-in signal
    Transform {
        #[arg(long, value_enum)]
        signal: SignalKind,
        #[arg(long, default_value = "-2:2:5", allow_hyphen_values = true)]
        grid: String,
        /// also write the sampled signal as CSV (columns t,re,im)
        #[arg(long)]
        signal_csv: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Jensen root-count bound for a built-in signal
    Jensen {
        #[arg(long, value_enum)]
        signal: SignalKind,
        #[arg(long, default_value = "1,2,5,10,50")]
        radii: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Named coefficient series (symmetric partial sum + tail)
    Series {
        #[arg(long, value_enum)]
        id: SeriesKind,
        #[arg(long, default_value_t = 1)]
        m: u32,
        #[arg(long = "series-K", visible_alias = "K", default_value_t = 1_000_000)]
        series_k: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Gamma-quotient identity for int_0^inf (1+t^2)^{-lambda/2} dt
    Gamma {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    // exit code 2 is reserved for disagreement verdicts, so argument
    // errors (which clap exits 2 for by default) are remapped to 1
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(1)
        }
    }
}

fn emit(out: Option<&PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{content}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Gen {
            kind,
            tau,
            theta,
            root,
            b,
            series_k,
            m,
            n_max,
            out,
        } => {
            let pair = generate(kind, tau, theta, root.as_deref(), b, series_k, m, n_max)?;
            let json = serde_json::to_string_pretty(&pair)?;
            emit(out.as_ref(), &format!("{json}\n"))?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Eval {
            pair,
            form,
            which,
            line,
            grid,
            truncation,
            format,
            out,
        } => {
            let form = load_form(pair.as_deref(), form.as_deref(), which)?;
            let grid = parse_grid(&grid)?;
            let parsed = parse_lines(&line, grid)?;
            let mut profiles: Vec<(String, MagnitudeProfile)> = Vec::new();
            for NamedLine { label, line } in parsed {
                profiles.push((label.clone(), magnitude_on_line(&form, &line, truncation)?));
            }
            let content = match format {
                Format::Csv => {
                    let mut s = String::new();
                    for (i, (label, p)) in profiles.iter().enumerate() {
                        let csv = p.to_csv(label);
                        // one header for the whole file
                        s.push_str(if i == 0 { &csv } else { csv.split_once('\n').unwrap().1 });
                    }
                    s
                }
                Format::Json => {
                    let items: Vec<String> = profiles
                        .iter()
                        .map(|(label, p)| profile_json(label, p))
                        .collect();
                    format!("{{\"profiles\":[{}]}}\n", items.join(","))
                }
            };
            emit(out.as_ref(), &content)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Verify {
            pair,
            lines,
            grid,
            truncation,
            tol,
            out,
        } => {
            let pair: AmbiguityPair = read_json(&pair)?;
            let grid = parse_grid(&grid)?;
            let parsed = parse_lines(&lines, grid)?;
            let mut entries = Vec::new();
            let mut any_disagree = false;
            let mut all_agree = true;
            for NamedLine { label, line } in &parsed {
                let pf = magnitude_on_line(&pair.f, line, truncation)?;
                let pg = magnitude_on_line(&pair.g, line, truncation)?;
                let rep = agreement_report(&pf, &pg, tol)?;
                any_disagree |= rep.verdict == Verdict::Disagree;
                all_agree &= rep.verdict == Verdict::Agree;
                entries.push(agreement_json(label, &rep));
            }

            // agreement on two lines meeting at an irrational angle forces
            // phase equality; reaching it with structurally different
            // forms means the evaluation pipeline is inconsistent
            if all_agree && !forms_phase_equal(&pair.f, &pair.g) {
                if let Some((a, b)) = irrational_intersection(&parsed) {
                    bail!(
                        "internal consistency failure: {a:?} and {b:?} intersect at an \
                         irrational angle, magnitudes agree, yet the forms differ by more \
                         than a phase"
                    );
                }
            }

            let overall = if any_disagree {
                "disagree"
            } else if all_agree {
                "agree"
            } else {
                "inconclusive"
            };
            let content = format!(
                "{{\"overall\":\"{overall}\",\"tolerance\":{},\"truncation\":{truncation},\"lines\":[{}]}}\n",
                f17(tol),
                entries.join(",")
            );
            emit(out.as_ref(), &content)?;
            Ok(if any_disagree {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            })
        }

        Command::Transform {
            signal,
            grid,
            signal_csv,
            out,
        } => {
            let sig = built_in_signal(signal);
            if let Some(path) = &signal_csv {
                fs::write(path, sig.to_csv())
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            let grid = parse_grid(&grid)?;
            let q = QuadratureSpec::default();
            let mut probes = Vec::new();
            for x in grid.points() {
                for w in grid.points() {
                    let value = gabor_transform(&sig, x, w, &q)?;
                    let r = gabor_bargmann_residual(&sig, x, w, &q)?;
                    probes.push(format!(
                        "{{\"x\":{},\"omega\":{},\"value\":[{},{}],\"residual\":{}}}",
                        f17(x),
                        f17(w),
                        f17(value.re),
                        f17(value.im),
                        f17(r)
                    ));
                }
            }
            let content = format!(
                "{{\"signal\":\"{}\",\"probes\":[{}]}}\n",
                signal_name(signal),
                probes.join(",")
            );
            emit(out.as_ref(), &content)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Jensen { signal, radii, out } => {
            let sig = built_in_signal(signal);
            let roots = signal_roots(signal)?;
            let q = QuadratureSpec::default();
            let lead = bargmann_transform(&sig, Complex64::new(0.0, 0.0), &q)?;
            let input = JensenBoundInput {
                origin_multiplicity: 0,
                lead,
                l2_norm_sq: sig.l2_norm_sq(),
            };
            let c = jensen_c(&input);
            let mut checks = Vec::new();
            let mut all_ok = true;
            for r_str in radii.split(',') {
                let r: f64 = r_str.trim().parse().context("bad radius list")?;
                let ok = jensen_bound_check(&roots, &input, r);
                all_ok &= ok;
                let bound = jensen_bound(&input, r);
                checks.push(format!(
                    "{{\"r\":{},\"count\":{},\"bound\":{},\"ok\":{ok}}}",
                    f17(r),
                    roots.count_in_disk(r),
                    f17(bound)
                ));
            }
            let content = format!(
                "{{\"signal\":\"{}\",\"c\":{},\"checks\":[{}]}}\n",
                signal_name(signal),
                f17(c),
                checks.join(",")
            );
            emit(out.as_ref(), &content)?;
            Ok(if all_ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }

        Command::Series {
            id,
            m,
            series_k,
            out,
        } => {
            let series_id = match id {
                SeriesKind::PiIdentity => SeriesId::PiIdentity,
                SeriesKind::BM => SeriesId::BM { m },
            };
            let s = universal_series_sum(series_id, series_k)?;
            let name = match id {
                SeriesKind::PiIdentity => "pi_identity".to_string(),
                SeriesKind::BM => format!("b_{m}"),
            };
            let content = join_object(&[
                ("id", format!("{name:?}")),
                ("k", series_k.to_string()),
                ("value", f17(s.value)),
                ("tail", f17(s.tail)),
            ]) + "\n";
            emit(out.as_ref(), &content)?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Gamma { lambda, out } => {
            let closed = gamma_integral(lambda)?;
            let quad = gamma_integral_quadrature(lambda)?;
            let content = join_object(&[
                ("lambda", f17(lambda)),
                ("closed_form", f17(closed)),
                ("quadrature", f17(quad)),
                ("difference", f17((closed - quad).abs())),
            ]) + "\n";
            emit(out.as_ref(), &content)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn generate(
    kind: PairKind,
    tau: f64,
    theta: f64,
    root: Option<&str>,
    b: f64,
    series_k: u64,
    m: u32,
    n_max: u32,
) -> Result<AmbiguityPair> {
    match kind {
        PairKind::SingleLine => {
            let base = parse_complex(root.ok_or_else(|| anyhow!("--root re,im required"))?)?;
            Ok(mcdonald_pair(
                1.0,
                0.0,
                0.0,
                vec![],
                vec![],
                0,
                Genus::new(0).unwrap(),
                RootSystem::empty(),
                RootSystem::from_points(&[(base, 1)])?,
            )?)
        }
        PairKind::Quartic => Ok(quartic_pair()),
        PairKind::Coshsinh => Ok(hyperbolic_lattice_pair(series_k)?),
        PairKind::Rational => {
            let base = parse_complex(root.ok_or_else(|| anyhow!("--root re,im required"))?)?;
            Ok(rational_angle_pair(
                theta,
                1.0,
                0.0,
                0.0,
                vec![],
                vec![],
                0,
                Genus::new(0).unwrap(),
                RootSystem::empty(),
                &[(base, 1)],
            )?)
        }
        PairKind::Parallel => {
            let base = parse_complex(root.ok_or_else(|| anyhow!("--root re,im required"))?)?;
            let fundamental = [(base, 1u32)];
            let b_prime = infinite_lines_b_prime(tau, &fundamental, b, series_k)?;
            let mut pair = parallel_pair(
                tau,
                1.0,
                0.0,
                0.0,
                vec![Complex64::new(0.0, b)],
                vec![Complex64::new(0.0, b_prime.value)],
                0,
                Genus::new(1).unwrap(),
                RootSystem::empty(),
                &fundamental,
                series_k.min(100_000),
                1e-6,
            )?;
            pair.series = Some(SeriesInfo {
                k: series_k,
                value: b_prime.value,
                tail: b_prime.tail,
            });
            Ok(pair)
        }
        PairKind::Universal => {
            let base = universal_base(n_max);
            let (partner, series) = universal_partner(m, n_max, series_k)?;
            let radius = f64::from(n_max).exp() + 4.0;
            let decomposition = decompose(&base.roots, &partner.roots, radius)?;
            Ok(AmbiguityPair {
                f: base,
                g: partner,
                constraint: PairConstraint::InfiniteLines {
                    tau: 1.0 / f64::from(m),
                },
                decomposition,
                series: Some(series),
            })
        }
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_form(
    pair: Option<&std::path::Path>,
    form: Option<&std::path::Path>,
    which: WhichForm,
) -> Result<HadamardForm> {
    match (pair, form) {
        (Some(p), None) => {
            let pair: AmbiguityPair = read_json(&p.to_path_buf())?;
            Ok(match which {
                WhichForm::F => pair.f,
                WhichForm::G => pair.g,
            })
        }
        (None, Some(p)) => read_json(&p.to_path_buf()),
        _ => bail!("pass exactly one of --pair or --form"),
    }
}

fn built_in_signal(kind: SignalKind) -> Signal {
    match kind {
        SignalKind::Gaussian => Signal::gaussian(),
        SignalKind::Quartic => Signal::quartic_preimage(),
        SignalKind::CoshsinhPlus => Signal::hyperbolic_preimage(HyperbolicSign::Plus),
        SignalKind::CoshsinhMinus => Signal::hyperbolic_preimage(HyperbolicSign::Minus),
    }
}

fn signal_name(kind: SignalKind) -> &'static str {
    match kind {
        SignalKind::Gaussian => "gaussian",
        SignalKind::Quartic => "quartic",
        SignalKind::CoshsinhPlus => "coshsinh-plus",
        SignalKind::CoshsinhMinus => "coshsinh-minus",
    }
}

/// Root system of the Bargmann transform of a built-in signal.
fn signal_roots(kind: SignalKind) -> Result<RootSystem> {
    Ok(match kind {
        SignalKind::Gaussian => RootSystem::empty(),
        SignalKind::Quartic => quartic_pair().f.roots,
        SignalKind::CoshsinhPlus => hyperbolic_lattice_pair(10_000)?.f.roots,
        SignalKind::CoshsinhMinus => hyperbolic_lattice_pair(10_000)?.g.roots,
    })
}

/// Structural phase-equality of two forms: equal up to the leading phase.
fn forms_phase_equal(f: &HadamardForm, g: &HadamardForm) -> bool {
    f.scale == g.scale
        && f.poly == g.poly
        && f.origin_multiplicity == g.origin_multiplicity
        && f.genus == g.genus
        && f.roots == g.roots
}

/// First pair of origin lines whose intersection angle is not a rational
/// multiple of pi.
fn irrational_intersection(lines: &[NamedLine]) -> Option<(&str, &str)> {
    for (i, a) in lines.iter().enumerate() {
        for b in &lines[i + 1..] {
            if a.line.anchor.norm() > 1e-12 || b.line.anchor.norm() > 1e-12 {
                continue;
            }
            let mut angle = (a.line.direction.arg() - b.line.direction.arg()).abs()
                % std::f64::consts::PI;
            if angle > std::f64::consts::FRAC_PI_2 {
                angle = std::f64::consts::PI - angle;
            }
            if angle > 1e-9 && rotation_order(angle).is_none() {
                return Some((&a.label, &b.label));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phase_equality_is_structural() {
        let pair = quartic_pair();
        assert!(!forms_phase_equal(&pair.f, &pair.g));
        assert!(forms_phase_equal(&pair.f, &pair.f.clone()));
    }

    #[test]
    fn irrational_detection() {
        let grid = phaseret::hadamard::GridSpec::new(-1.0, 1.0, 11);
        let rational = parse_lines("R,iR", grid).unwrap();
        assert!(irrational_intersection(&rational).is_none());
        let irrational = parse_lines("R,rot(1.0)", grid).unwrap();
        assert!(irrational_intersection(&irrational).is_some());
        // parallel lines never intersect
        let parallel = parse_lines("R,R+1i", grid).unwrap();
        assert!(irrational_intersection(&parallel).is_none());
    }
}
