mod args;
mod render;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use cmbasin::equidist::{convergence_report_with, gross_radius_exponent, FamilySpec};
use cmbasin::exec::{init_workers, Exec};
use cmbasin::intersect::{
    haar_integral_with, intersection_corollary_with, intersection_theorem_b_with, quasicanonical_degree,
    IntegralOptions, MultiplicityReport,
};
use cmbasin::lattice::{make_datum, LtDatum, Mat2};
use cmbasin::levels::{basin_class, check_primitive, components_with, in_basin, subgroup_build, CongruenceSubgroup, LevelSpec};
use cmbasin::padic::{format_rational, parse_rational, ExtKind, QuadExtDesc};
use cmbasin::selftest::{run_selftest, Fault};
use cmbasin::Error;

use args::{Cli, Command, ExtArg, FieldArgs, VariantArg};
use render::*;

enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Res<T> = std::result::Result<T, Failure>;

struct Output {
    body: String,
    /// Extra file written next to the main output.
    side: Option<(PathBuf, String)>,
    ok: bool,
}

impl Output {
    fn json(body: String) -> Self {
        Output { body, side: None, ok: true }
    }
}

fn field(args: &FieldArgs) -> Res<QuadExtDesc> {
    let kind = match args.ext {
        ExtArg::Unramified => ExtKind::Unramified,
        ExtArg::Ramified => ExtKind::Ramified,
    };
    Ok(match &args.delta {
        Some(d) => QuadExtDesc::new(args.p, kind, parse_rational(d)?)?,
        None => QuadExtDesc::standard(args.p, kind)?,
    })
}

fn field_out(e: &QuadExtDesc) -> Field {
    Field { p: e.p(), ext: e.kind().as_str(), delta: format_rational(e.delta()) }
}

fn parse_lambda(s: &str, p: u64) -> Res<[i64; 2]> {
    let bad = || Error::Parse(format!("lambda must be two integers \"a,b\", got {s:?}"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let row = [a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?];
    check_primitive(row, p)?;
    Ok(row)
}

fn parse_level(s: &str, p: u64) -> Res<CongruenceSubgroup> {
    Ok(subgroup_build(&LevelSpec::parse(s)?, p)?)
}

fn parse_s_range(s: &str) -> Res<(u32, u32)> {
    let bad = || Error::Parse(format!("s-range must look like \"1..6\", got {s:?}"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let lo: u32 = a.trim().parse().map_err(|_| bad())?;
    let hi: u32 = b.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad().into());
    }
    Ok((lo, hi))
}

fn datum(e: &QuadExtDesc, tau: &str) -> Res<(Mat2, LtDatum)> {
    let m = Mat2::parse(tau, e.p())?;
    let d = make_datum(&m, e)?;
    Ok((m, d))
}

fn row_str(r: [i64; 2]) -> String {
    format!("{},{}", r[0], r[1])
}

fn multiplicity_json(input: Input, r: &MultiplicityReport) -> String {
    to_json(&IntersectOut {
        input,
        m: q(&r.m),
        factors: Factors {
            zeta: q(&r.zeta),
            i_e: r.i_e,
            i_f: r.i_f,
            e: r.e,
            q_pow_s: r.q_pow_s,
            integral: q(&r.integral.value),
            vol_u: q(&r.vol_u),
            residue_degree: r.residue_degree,
            ratio_to_corollary: r.ratio_to_corollary.as_ref().map(q),
        },
        integral_histogram: histogram(&r.integral.histogram),
        integral_depth: r.integral.depth,
        integer: r.integer,
        variant: r.variant.as_str(),
    })
}

fn csv_path(explicit: Option<PathBuf>, out: Option<&Path>) -> Option<PathBuf> {
    explicit.or_else(|| out.map(|p| p.with_extension("csv")))
}

fn run(cli: Cli, exec: Exec) -> Res<Output> {
    let opts = IntegralOptions { exec, ..Default::default() };
    match cli.command {
        Command::Conductor { field: f, tau } => {
            let e = field(&f)?;
            let (m, d) = datum(&e, &tau)?;
            Ok(Output::json(to_json(&ConductorOut {
                field: field_out(&e),
                tau: m.to_string(),
                normalized_tau: d.m_tau().to_string(),
                conductor: d.conductor(),
            })))
        }
        Command::Basin { field: f, tau, level, lambda } => {
            let e = field(&f)?;
            let (m, d) = datum(&e, &tau)?;
            let u = parse_level(&level, e.p())?;
            let basin = basin_class(&d, &u)?;
            let (lambda, in_b) = match lambda {
                Some(l) => {
                    let row = parse_lambda(&l, e.p())?;
                    (Some(row_str(row)), Some(in_basin(&d, row, &u)?))
                }
                None => (None, None),
            };
            Ok(Output::json(to_json(&BasinOut {
                field: field_out(&e),
                tau: m.to_string(),
                level: u.spec().to_string(),
                level_n: u.level_n(),
                basin: basin.to_string(),
                lambda,
                in_basin: in_b,
            })))
        }
        Command::Components { p, level } => {
            let u = parse_level(&level, p)?;
            let comps = components_with(&u, exec)
                .into_iter()
                .map(|c| ComponentOut { class: c.to_string(), orbit_size: c.orbit_size })
                .collect();
            Ok(Output::json(to_json(&ComponentsOut {
                p,
                level: u.spec().to_string(),
                index: u.index().to_string(),
                level_n: u.level_n(),
                components: comps,
            })))
        }
        Command::Integral { field: f, tau, lambda, level } => {
            let e = field(&f)?;
            let (m, d) = datum(&e, &tau)?;
            let row = parse_lambda(&lambda, e.p())?;
            let u = parse_level(&level, e.p())?;
            let r = haar_integral_with(&d, row, &u, &opts)?;
            let input = Input { field: field_out(&e), tau: m.to_string(), lambda: row_str(row), level: u.spec().to_string() };
            Ok(Output::json(to_json(&IntegralOut {
                input,
                value: q(&r.value),
                depth: r.depth,
                histogram: histogram(&r.histogram),
                certified: r.certified,
                cells: r.cells,
            })))
        }
        Command::Intersect { field: f, tau, lambda, level, variant, residue_degree } => {
            let e = field(&f)?;
            let (m, d) = datum(&e, &tau)?;
            let row = parse_lambda(&lambda, e.p())?;
            let u = parse_level(&level, e.p())?;
            let r = match variant {
                VariantArg::Corollary => intersection_corollary_with(&d, row, &u, &opts)?,
                VariantArg::TheoremB => intersection_theorem_b_with(&d, row, &u, residue_degree, &opts)?,
            };
            let input = Input { field: field_out(&e), tau: m.to_string(), lambda: row_str(row), level: u.spec().to_string() };
            Ok(Output::json(multiplicity_json(input, &r)))
        }
        Command::Msdegree { field: f, s } => {
            let e = field(&f)?;
            let qc = quasicanonical_degree(&e, s);
            let gross = if s >= 1 { Some(q(&gross_radius_exponent(&e, s)?)) } else { None };
            Ok(Output::json(to_json(&MsdegreeOut {
                field: field_out(&e),
                s,
                m_s: q(&qc.value),
                flagged: qc.flagged,
                gross_radius_exponent: gross,
            })))
        }
        Command::Equidist { field: f, level, s_range, tau, csv } => {
            let e = field(&f)?;
            let u = parse_level(&level, e.p())?;
            let (s_min, s_max) = parse_s_range(&s_range)?;
            let g0 = tau.as_deref().map(|t| Mat2::parse(t, e.p())).transpose()?;
            let spec = FamilySpec { ext: e.clone(), level: u, s_min, s_max, g0 };
            let rep = convergence_report_with(&spec, exec)?;
            let mut table = String::from("s,lambda,m,MT,exponent\n");
            for p in &rep.profiles {
                for en in &p.entries {
                    table.push_str(&format!("{},{},{},{},{}\n", p.s, en.class, q(&en.m), p.mt, sig12(&en.exponent)));
                }
            }
            let out = EquidistOut {
                family: FamilyOut {
                    field: field_out(&e),
                    level: spec.level.spec().to_string(),
                    s_min,
                    s_max,
                    g0: spec.g0.as_ref().map(|g| g.to_string()),
                    basin: rep.profiles[0].basin.to_string(),
                },
                profiles: rep
                    .profiles
                    .iter()
                    .map(|p| ProfileOut {
                        s: p.s,
                        mt: p.mt,
                        basin: p.basin.to_string(),
                        argmax: p.argmax().to_string(),
                        m_sum: q(&p.m_sum()),
                        entries: p
                            .entries
                            .iter()
                            .map(|en| EntryOut {
                                lambda: en.class.to_string(),
                                m: q(&en.m),
                                exponent: q(&en.exponent),
                                in_basin: en.in_basin,
                            })
                            .collect(),
                    })
                    .collect(),
                verdicts: VerdictsOut {
                    non_basin_decreasing: rep.verdicts.non_basin_decreasing,
                    basin_bounded_below: rep.verdicts.basin_bounded_below,
                    basin_infimum: q(&rep.verdicts.basin_infimum),
                    argmax_from: rep.verdicts.argmax_from,
                    basin_level_disagreements: rep
                        .verdicts
                        .basin_level_disagreements
                        .iter()
                        .map(|d| DisagreementOut { s: d.s, n: d.n, lambda: d.class.to_string() })
                        .collect(),
                },
            };
            let side = csv_path(csv, cli.out.as_deref()).map(|p| (p, table));
            Ok(Output { body: to_json(&out), side, ok: true })
        }
        Command::Selftest { inject_fault } => {
            let fault = inject_fault.map(|f| f.parse::<Fault>()).transpose()?;
            let rep = run_selftest(exec, fault);
            Ok(Output { body: rep.render(), side: None, ok: rep.passed() })
        }
    }
}

/// Writes through a temporary file in the target directory, then renames.
fn write_atomic(path: &Path, body: &str) -> Res<()> {
    let io = |e: std::io::Error| Failure::Io(format!("{}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(body.as_bytes()).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

fn report_error(code: &str, message: String) {
    eprintln!("{}", serde_json::to_string(&ErrorOut { error: code, message }).expect("serializable"));
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ").to_string();
            report_error("ParseError", first);
            return ExitCode::from(2);
        }
    };
    let exec = match cli.threads {
        Some(1) => Exec::Sequential,
        Some(n) => {
            init_workers(n as usize);
            Exec::Parallel
        }
        None => Exec::Parallel,
    };
    let out_path = cli.out.clone();
    let result = run(cli, exec).and_then(|o| {
        match &out_path {
            Some(p) => write_atomic(p, &o.body)?,
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout
                    .write_all(o.body.as_bytes())
                    .and_then(|_| stdout.flush())
                    .map_err(|e| Failure::Io(e.to_string()))?;
            }
        }
        if let Some((p, body)) = &o.side {
            write_atomic(p, body)?;
        }
        Ok(o.ok)
    });
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Lib(e)) => {
            report_error(e.code(), e.to_string());
            ExitCode::from(if matches!(e, Error::Parse(_)) { 2 } else { 3 })
        }
        Err(Failure::Io(msg)) => {
            report_error("IoError", msg);
            ExitCode::from(3)
        }
    }
}
