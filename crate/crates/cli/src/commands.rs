use std::fmt::Write as _;
use std::path::Path;

use diracgraph::complex::{simplex_distance, CliqueComplex};
use diracgraph::dynamics::{lax_deform, LaxConfig, LaxVariant};
use diracgraph::geometry::{self, format_rational, Rational};
use diracgraph::hodge::{self, Hodge};
use diracgraph::morphisms::lefschetz_report_json;
use diracgraph::operators::{DiracMatrix, LaplacianBlocks};
use diracgraph::report::{format_complex, format_float, to_canonical_string, InvariantReport};
use diracgraph::{exact, spectra, SimpleGraph};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::{CliError, Command, Format, Global, Variant};

/// Largest Dirac matrix whose characteristic polynomial is computed exactly.
const EXACT_CHARPOLY_LIMIT: usize = 120;

struct Setup {
    graph: SimpleGraph,
    complex: CliqueComplex,
    dirac: DiracMatrix,
    blocks: LaplacianBlocks,
    hodge: Hodge,
}

fn read_graph(path: &Path) -> Result<SimpleGraph, CliError> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    }
    .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    diracgraph::parse_edge_list(&text).map_err(|e| match e {
        diracgraph::Error::Parse { line, message } => {
            CliError::Usage(format!("{}:{line}: {message}", path.display()))
        }
        other => other.into(),
    })
}

fn setup(g: &Global, path: &Path) -> Result<Setup, CliError> {
    let graph = read_graph(path)?;
    let complex = diracgraph::build_complex(&graph, g.max_dim);
    let dirac = diracgraph::dirac(&complex, &diracgraph::Orientation::canonical(&complex));
    let blocks = diracgraph::laplacian(&dirac)?;
    let hodge = Hodge::with_tolerance(&dirac, &blocks, g.tol);
    Ok(Setup { graph, complex, dirac, blocks, hodge })
}

fn big(x: i128) -> Value {
    i64::try_from(x).map(Value::from).unwrap_or_else(|_| Value::from(x.to_string()))
}

fn big_u(x: u128) -> Value {
    u64::try_from(x).map(Value::from).unwrap_or_else(|_| Value::from(x.to_string()))
}

fn complex_json(z: Complex64) -> Value {
    json!({"re": z.re, "im": z.im})
}

fn floats(xs: &[f64]) -> String {
    xs.iter().map(|&x| format_float(x)).collect::<Vec<_>>().join(" ")
}

fn joined<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

fn rational_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

/// A command result in both output formats.
struct Report {
    json: Value,
    text: String,
}

pub fn dispatch(g: &Global, cmd: &Command) -> Result<String, CliError> {
    let report = match cmd {
        Command::Analyze { input } => analyze(&setup(g, input)?)?,
        Command::Cohomology { input } => cohomology(&setup(g, input)?),
        Command::Curvature { input } => curvature(&setup(g, input)?)?,
        Command::Morse { input, f } => morse(g, &setup(g, input)?, f.as_deref())?,
        Command::Spectrum { input } => spectrum(&setup(g, input)?),
        Command::Zeta { input, s, s_im } => zeta(&setup(g, input)?, Complex64::new(*s, *s_im)),
        Command::Distance { first, second } => distance(&read_graph(first)?, &read_graph(second)?)?,
        Command::Magnitude { input } => magnitude(&read_graph(input)?)?,
        Command::Trees { input } => trees(&setup(g, input)?)?,
        Command::Deform { input, t_end, h, variant, snapshot_every, snapshots } => {
            return deform(g, &setup(g, input)?, *t_end, *h, *variant, *snapshot_every, snapshots.as_deref());
        }
        Command::Lefschetz { input, z, terms } => lefschetz(&setup(g, input)?, *z, *terms)?,
        Command::Dimension { input } => dimension(&read_graph(input)?),
        Command::Contract { input } => contract(&read_graph(input)?),
    };
    Ok(match g.format {
        Format::Json => to_canonical_string(&report.json),
        Format::Text => report.text,
    })
}

fn invariants(s: &Setup) -> Result<Vec<InvariantReport>, CliError> {
    let chi = s.complex.euler_characteristic();
    let d = s.dirac.lower();
    let d2 = (&d * &d).iter().map(|x| x.abs()).max().unwrap_or(0);
    let ep = hodge::euler_poincare_check(&s.complex, &s.hodge);
    let parity = s.dirac.parity();
    let heat = s.hodge.heat_kernel(1.0)?;
    let curv_sum: Rational = geometry::curvatures(&s.complex).iter().sum();
    Ok(vec![
        InvariantReport::exact("nilpotency d^2 = 0", d2, 0),
        InvariantReport::exact("euler-poincare", ep.chi_cohomological, ep.chi_combinatorial),
        InvariantReport::relative("mckean-singer str(exp(-L)) = chi", hodge::super_trace(&heat, &parity)?, chi as f64, 1e-8),
        InvariantReport::relative("super trace str(L) = 0", hodge::super_trace(&s.blocks.to_f64(), &parity)?, 0.0, 1e-8),
        InvariantReport::relative("gauss-bonnet sum K = chi", rational_f64(&curv_sum), chi as f64, 0.0),
    ])
}

fn analyze(s: &Setup) -> Result<Report, CliError> {
    let chi = s.complex.euler_characteristic();
    let betti = s.hodge.betti_numbers();
    let dirac_spec = diracgraph::linalg::SymEigen::new(&s.dirac.to_f64()).values;
    let spectra_by_degree: Vec<Vec<f64>> =
        (0..s.hodge.degree_count()).map(|k| s.hodge.spectral_summary(k).eigenvalues).collect();
    let exact_poly = if s.dirac.dim() <= EXACT_CHARPOLY_LIMIT { exact::charpoly(&s.dirac.entries).ok() } else { None };
    let (det_value, det_exact) = match &exact_poly {
        Some(p) => {
            let low = p.iter().position(|&c| c != 0).unwrap_or(0);
            let rank = p.len() - 1 - low;
            let sign = if rank % 2 == 0 { 1 } else { -1 };
            (big(sign * p[low]), true)
        }
        None => (json!(spectra::pseudo_det(&s.dirac.to_f64())), false),
    };
    let torsion = spectra::analytic_torsion(&s.blocks);
    let inv = invariants(s)?;
    let json = json!({
        "vertices": s.graph.ids(),
        "counts": s.complex.counts(),
        "chi": chi,
        "betti": betti,
        "charpoly": exact_poly.as_ref().map(|p| exact::format_polynomial(p)),
        "charpolyCoefficients": exact_poly.as_ref().map(|p| p.iter().map(|&c| big(c)).collect::<Vec<_>>()),
        "diracSpectrum": dirac_spec,
        "laplacianSpectra": spectra_by_degree,
        "pseudoDet": {"value": det_value, "exact": det_exact},
        "torsion": torsion,
        "invariants": inv.iter().map(InvariantReport::to_json).collect::<Vec<_>>(),
    });
    let mut text = String::new();
    let _ = writeln!(text, "vertices: {}", s.graph.order());
    let _ = writeln!(text, "simplex counts: {}", joined(&s.complex.counts()));
    let _ = writeln!(text, "euler characteristic: {chi}");
    let _ = writeln!(text, "betti numbers: {}", joined(&betti));
    if let Some(p) = &exact_poly {
        let _ = writeln!(text, "characteristic polynomial: {}", exact::format_polynomial(p));
    }
    let det_text = match &json["pseudoDet"]["value"] {
        Value::Number(n) if det_exact => n.to_string(),
        Value::String(s) => s.clone(),
        v => format_float(v.as_f64().unwrap_or(f64::NAN)),
    };
    let _ = writeln!(text, "Det(D) = {det_text}{}", if det_exact { "" } else { " (floating point)" });
    let _ = writeln!(text, "analytic torsion: {}", format_float(torsion));
    let _ = writeln!(text, "dirac spectrum: {}", floats(&dirac_spec));
    for (k, spec) in spectra_by_degree.iter().enumerate() {
        let _ = writeln!(text, "L{k} spectrum: {}", floats(spec));
    }
    let _ = writeln!(text, "invariants:");
    for r in &inv {
        let _ = writeln!(
            text,
            "  {}: {} ({} vs {})",
            r.name,
            verdict(r.pass),
            format_float(r.lhs),
            format_float(r.rhs)
        );
    }
    Ok(Report { json, text })
}

fn cohomology(s: &Setup) -> Report {
    let json = hodge::cohomology_report(&s.complex, &s.hodge);
    let mut text = String::new();
    let _ = writeln!(text, "simplex counts: {}", joined(&s.complex.counts()));
    let _ = writeln!(text, "betti numbers: {}", joined(&s.hodge.betti_numbers()));
    let _ = writeln!(text, "euler characteristic: {}", s.complex.euler_characteristic());
    for k in 0..s.hodge.degree_count() {
        let _ = writeln!(text, "L{k} spectrum: {}", floats(&s.hodge.spectral_summary(k).eigenvalues));
    }
    Report { json, text }
}

fn curvature(s: &Setup) -> Result<Report, CliError> {
    let ks = geometry::curvatures(&s.complex);
    let sum: Rational = ks.iter().sum();
    let chi = s.complex.euler_characteristic();
    let holds = sum == Rational::from_integer(chi);
    let entries: Vec<Value> = ks
        .iter()
        .enumerate()
        .map(|(x, k)| json!({"vertex": s.graph.id(x), "value": format_rational(k), "approx": rational_f64(k)}))
        .collect();
    let json = json!({"curvatures": entries, "sum": format_rational(&sum), "chi": chi, "gaussBonnet": holds});
    let mut text = String::new();
    for (x, k) in ks.iter().enumerate() {
        let _ = writeln!(text, "K({}) = {}", s.graph.id(x), format_rational(k));
    }
    let _ = writeln!(text, "sum = {} (chi = {chi}) {}", format_rational(&sum), verdict(holds));
    Ok(Report { json, text })
}

fn morse(g: &Global, s: &Setup, f: Option<&str>) -> Result<Report, CliError> {
    let n = s.graph.order();
    let values: Vec<f64> = match (f, g.seed) {
        (Some(list), _) => {
            let parsed: Result<Vec<f64>, _> =
                list.split(',').map(|t| t.trim()).filter(|t| !t.is_empty()).map(str::parse).collect();
            let parsed = parsed.map_err(|e| CliError::Usage(format!("--f: {e}")))?;
            if parsed.len() != n {
                return Err(CliError::Usage(format!("--f has {} values for {n} vertices", parsed.len())));
            }
            parsed
        }
        (None, Some(seed)) => geometry::random_morse_function(n, seed),
        (None, None) => return Err(CliError::Usage("morse needs --f values or --seed".into())),
    };
    let data = geometry::poincare_hopf(&s.graph, &values)?;
    let chi = s.complex.euler_characteristic();
    let sum = data.index_sum();
    let entries: Vec<Value> = (0..n)
        .map(|x| json!({"vertex": s.graph.id(x), "value": values[x], "index": data.indices[x]}))
        .collect();
    let critical: Vec<u32> = data.critical.iter().map(|&x| s.graph.id(x)).collect();
    let json = json!({
        "indices": entries,
        "critical": critical,
        "sum": sum,
        "chi": chi,
        "poincareHopf": sum == chi,
        "seed": if f.is_none() { g.seed } else { None },
    });
    let mut text = String::new();
    for x in 0..n {
        let _ = writeln!(text, "i({}) = {} (f = {})", s.graph.id(x), data.indices[x], format_float(values[x]));
    }
    let _ = writeln!(text, "critical vertices: {}", joined(&critical));
    let _ = writeln!(text, "sum = {sum} (chi = {chi}) {}", verdict(sum == chi));
    Ok(Report { json, text })
}

fn spectrum(s: &Setup) -> Report {
    let values = diracgraph::linalg::SymEigen::new(&s.dirac.to_f64()).values;
    let scale = values.iter().fold(1.0f64, |m, x| m.max(x.abs()));
    let symmetric = values.iter().zip(values.iter().rev()).all(|(a, b)| (a + b).abs() <= 1e-8 * scale);
    let by_degree: Vec<Vec<f64>> =
        (0..s.hodge.degree_count()).map(|k| s.hodge.spectral_summary(k).eigenvalues).collect();
    let json = json!({"dirac": values, "laplacian": by_degree, "symmetric": symmetric});
    let mut text = String::new();
    let _ = writeln!(text, "dirac spectrum: {}", floats(&values));
    let _ = writeln!(text, "symmetric about 0: {}", verdict(symmetric));
    for (k, spec) in by_degree.iter().enumerate() {
        let _ = writeln!(text, "L{k} spectrum: {}", floats(spec));
    }
    Report { json, text }
}

fn zeta(s: &Setup, arg: Complex64) -> Report {
    let z = spectra::dirac_zeta(&s.dirac, arg);
    let dz = spectra::dirac_zeta_derivative(&s.dirac, arg);
    let json = json!({
        "s": complex_json(arg),
        "value": complex_json(z.value),
        "derivative": complex_json(dz),
        "branch": "principal",
    });
    let s = format_complex(arg.re, arg.im);
    let text = format!(
        "zeta({s}) = {}\nzeta'({s}) = {}\nbranch: principal\n",
        format_complex(z.value.re, z.value.im),
        format_complex(dz.re, dz.im),
    );
    Report { json, text }
}

fn distance(a: &SimpleGraph, b: &SimpleGraph) -> Result<Report, CliError> {
    let sd = simplex_distance(a, b)?;
    let da = spectra::aligned_dirac(a);
    let db = spectra::aligned_dirac(b);
    let r = spectra::spectral_distance(&da.map(|x| x as f64), &db.map(|x| x as f64))?;
    let deg = spectra::max_column_support(&[&da, &db]);
    let deg_bound = deg as f64 * rational_f64(&sd);
    let json = json!({
        "distance": r.distance,
        "bound": r.bound,
        "lidskii": r.distance <= r.bound + 1e-12,
        "deg": deg,
        "simplexDistance": format_rational(&sd),
        "degBound": deg_bound,
        "degBoundHolds": r.distance <= deg_bound + 1e-12,
    });
    let text = format!(
        "spectral distance: {}\nentrywise bound: {} {}\nsimplex distance: {}\ndeg: {deg}\ndeg * simplex distance: {} {}\n",
        format_float(r.distance),
        format_float(r.bound),
        verdict(r.distance <= r.bound + 1e-12),
        format_rational(&sd),
        format_float(deg_bound),
        verdict(r.distance <= deg_bound + 1e-12),
    );
    Ok(Report { json, text })
}

fn magnitude(g: &SimpleGraph) -> Result<Report, CliError> {
    let m = spectra::magnitude(g)?;
    Ok(Report { json: json!({"magnitude": m}), text: format!("magnitude: {}\n", format_float(m)) })
}

fn trees(s: &Setup) -> Result<Report, CliError> {
    let t = spectra::kirchhoff_trees(&s.graph)?;
    let st = spectra::simplex_graph_trees(&s.complex)?;
    Ok(Report {
        json: json!({"spanningTrees": big_u(t), "simplexGraphTrees": big_u(st)}),
        text: format!("spanning trees: {t}\nsimplex graph spanning trees: {st}\n"),
    })
}

fn deform(
    g: &Global,
    s: &Setup,
    t_end: f64,
    h: f64,
    variant: Variant,
    snapshot_every: Option<usize>,
    snapshots: Option<&Path>,
) -> Result<String, CliError> {
    if !(t_end > 0.0) || !(h > 0.0) {
        return Err(CliError::Usage("--T and --h must be positive".into()));
    }
    if snapshot_every == Some(0) {
        return Err(CliError::Usage("--snapshot-every must be positive".into()));
    }
    if snapshot_every.is_some() && snapshots.is_none() && g.format == Format::Text {
        return Err(CliError::Usage("--snapshot-every needs --snapshots <file> in text mode".into()));
    }
    let config = LaxConfig {
        t_end,
        h,
        variant: match variant {
            Variant::Real => LaxVariant::Real,
            Variant::Complex => LaxVariant::Complexified,
        },
        snapshot_every,
        ..LaxConfig::default()
    };
    let traj = lax_deform(&s.dirac, &config)?;
    let snaps = snapshot_every.map(|_| traj.snapshots_json());
    if let (Some(path), Some(snaps)) = (snapshots, &snaps) {
        std::fs::write(path, to_canonical_string(snaps))
            .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    }
    Ok(match g.format {
        Format::Text => traj.to_csv(),
        Format::Json => {
            let rows: Vec<Value> = traj
                .records
                .iter()
                .map(|r| {
                    json!({
                        "t": r.t,
                        "trM": r.diagnostics.tr_m,
                        "spectrumError": r.diagnostics.spectrum_error,
                        "nilpotencyError": r.diagnostics.nilpotency_error,
                    })
                })
                .collect();
            let mut out = json!({
                "T": t_end,
                "h": h,
                "variant": match variant { Variant::Real => "real", Variant::Complex => "complex" },
                "trajectory": rows,
                "monotone": traj.monotonicity_violations().is_empty(),
                "maxSpectrumError": traj.max_spectrum_error(),
                "maxNilpotencyError": traj.max_nilpotency_error(),
                "maxLaplacianError": traj.max_laplacian_error(),
            });
            if let Some(snaps) = snaps {
                out["snapshots"] = snaps;
            }
            to_canonical_string(&out)
        }
    })
}

fn lefschetz(s: &Setup, z: Option<f64>, terms: usize) -> Result<Report, CliError> {
    let json = lefschetz_report_json(&s.complex, &s.hodge, z.map(|z| (Complex64::new(z, 0.0), terms)))?;
    let mut text = String::new();
    let maps = json["automorphisms"].as_array().cloned().unwrap_or_default();
    let _ = writeln!(text, "automorphisms: {}", maps.len());
    for m in &maps {
        let fixed: Vec<String> = m["fixedSimplices"]
            .as_array()
            .map(|a| {
                a.iter()
                    .map(|f| format!("{}:{}", f["simplex"], f["index"]))
                    .collect()
            })
            .unwrap_or_default();
        let _ = write!(text, "map {} L = {} fixed [{}]", m["map"], m["lefschetz"], fixed.join(" "));
        if let Some(zeta) = m.get("zeta") {
            let _ = write!(text, " zeta = {}", format_float(zeta["re"].as_f64().unwrap_or(f64::NAN)));
        }
        text.push('\n');
    }
    if let Some(p) = json.get("zetaProduct") {
        let _ = writeln!(text, "zeta product: {}", format_float(p["re"].as_f64().unwrap_or(f64::NAN)));
    }
    Ok(Report { json, text })
}

fn dimension(g: &SimpleGraph) -> Report {
    let d = geometry::dimension(g);
    Report {
        json: json!({"dimension": format_rational(&d), "approx": rational_f64(&d)}),
        text: format!("dimension: {} ({})\n", format_rational(&d), format_float(rational_f64(&d))),
    }
}

fn contract(g: &SimpleGraph) -> Report {
    let c = geometry::contract(g);
    let json = json!({
        "contractible": c.contractible,
        "removed": c.steps,
        "remaining": c.reduced.ids(),
    });
    let status = serde_json::to_value(c.contractible).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    let text = format!(
        "status: {status}\nremoved: {}\nremaining: {}\n",
        joined(&c.steps),
        joined(c.reduced.ids())
    );
    Report { json, text }
}
