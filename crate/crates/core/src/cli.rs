//! The `witnesslab` command-line front end.
//!
//! Every subcommand renders a human report (`--format text`), CSV or JSON.
//! JSON documents carry a `"command"` field and follow
//! `schemas/output.schema.json`. Exit codes: 0 success, 2 usage, 3 domain
//! error, 4 solver non-convergence.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::circuits::{decode_message, superdense_run, Message};
use crate::optim::{generalized_robustness_with, optimal_witness};
use crate::qmat::{expectation, fidelity, ComplexMatrix, DensityMatrix, HermitianOp, Pauli, C64};
use crate::readout::{add_noise, noisy_pauli_vector, pauli_tomography_with};
use crate::relax::{
    crossing_time, sweep, Quantity, RelaxationParams, DEFAULT_T1, T2_CARBON, T2_HYDROGEN,
};
use crate::states::{
    bell_diagonal, bell_state, pauli_labels, pauli_vector, BellDiagonalParams, BellKind,
    ThermalParams,
};
use crate::tolerance::Tolerances;
use crate::witness::{
    detection_region_grid, eval_witness, f_witness, table1_witness, BDClass, CorrelationPair,
    PauliWitness, Verdict,
};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_CONVERGENCE: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "witnesslab",
    version,
    about = "Two-qubit entanglement witnesses, robustness and relaxation"
)]
pub struct Cli {
    /// Output format; reports default to text, data series to csv.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the output here instead of standard output.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for every noisy quantity.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Correlations, F and Pauli witnesses of a state.
    Witness {
        #[arg(long)]
        state: StateSpec,
        /// Optimal witness of a Bell state (repeatable).
        #[arg(long = "table1", value_name = "KIND")]
        table1: Vec<BellKind>,
        /// Custom witness c_I,c_x,c_y,c_z (repeatable).
        #[arg(long = "witness", value_name = "C", allow_hyphen_values = true, value_parser = parse_witness)]
        witness: Vec<PauliWitness>,
        /// Standard deviation of Gaussian noise added to each correlation.
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
    },
    /// Solve the witness-optimality program for Bell states.
    OptimalWitness {
        kind: Option<BellKind>,
        #[arg(long, conflicts_with = "kind")]
        all: bool,
    },
    /// Generalized robustness of entanglement.
    Robustness {
        #[arg(long)]
        state: StateSpec,
    },
    /// F, W and robustness along T1/T2 relaxation.
    RelaxSweep {
        #[arg(long, default_value = "bell:phi-")]
        state: StateSpec,
        #[arg(long, default_value_t = T2_HYDROGEN)]
        t2i: f64,
        #[arg(long, default_value_t = T2_CARBON)]
        t2s: f64,
        #[arg(long, default_value_t = DEFAULT_T1)]
        t1i: f64,
        #[arg(long, default_value_t = DEFAULT_T1)]
        t1s: f64,
        #[arg(long, default_value_t = 1.0)]
        t_max: f64,
        #[arg(long, default_value_t = 200)]
        steps: usize,
        /// Bell state whose optimal witness is tracked.
        #[arg(long, default_value = "phi-")]
        witness: BellKind,
    },
    /// Classify a grid over the Bell-diagonal cube.
    DetectRegion {
        #[arg(long, default_value_t = 21)]
        resolution: usize,
    },
    /// Superdense coding on a thermal ensemble.
    Sdc {
        /// Polarizations eps_I,eps_S.
        #[arg(long, value_parser = parse_pair)]
        eps: (f64, f64),
        /// Message bits x,z.
        #[arg(long, value_parser = parse_bits)]
        msg: (u8, u8),
    },
    /// Pauli-basis tomography of a (noisy) state; JSON output can be read
    /// back with `file:`.
    Tomography {
        #[arg(long)]
        state: StateSpec,
        #[arg(long, default_value_t = 0.0)]
        noise: f64,
    },
}

/// `bell:<kind>`, `bd:<c1,c2,c3>`, `identity` or `file:<path>`.
#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Bell(BellKind),
    BellDiagonal(BellDiagonalParams),
    Identity,
    File(PathBuf),
}

impl FromStr for StateSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "identity" {
            return Ok(StateSpec::Identity);
        }
        let (kind, rest) = s.split_once(':').ok_or_else(|| {
            format!(
                "state spec {s:?} is not one of bell:<kind>, bd:<c1,c2,c3>, identity, file:<path>"
            )
        })?;
        match kind {
            "bell" => rest
                .parse()
                .map(StateSpec::Bell)
                .map_err(|e: Error| e.to_string()),
            "bd" => {
                let c = parse_floats(rest, 3)?;
                Ok(StateSpec::BellDiagonal(BellDiagonalParams::new(
                    c[0], c[1], c[2],
                )))
            }
            "file" if !rest.is_empty() => Ok(StateSpec::File(PathBuf::from(rest))),
            _ => Err(format!("unknown state spec {s:?}")),
        }
    }
}

fn parse_floats(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| format!("{p:?} is not a number"))
        })
        .collect::<Result<_, _>>()?;
    if v.len() != n {
        return Err(format!(
            "expected {n} comma-separated numbers, got {}",
            v.len()
        ));
    }
    Ok(v)
}

fn parse_witness(s: &str) -> Result<PauliWitness, String> {
    let c = parse_floats(s, 4)?;
    Ok(PauliWitness::new(c[0], c[1], c[2], c[3]))
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let c = parse_floats(s, 2)?;
    Ok((c[0], c[1]))
}

fn parse_bits(s: &str) -> Result<(u8, u8), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [x, z] => {
            let bit = |p: &str| match p {
                "0" => Ok(0),
                "1" => Ok(1),
                _ => Err(format!("message bit {p:?} is not 0 or 1")),
            };
            Ok((bit(x)?, bit(z)?))
        }
        _ => Err(format!("expected two bits x,z, got {s:?}")),
    }
}

#[derive(Deserialize)]
struct Entry {
    re: f64,
    im: f64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum StateFile {
    Bare(Vec<Entry>),
    Wrapped { density_matrix: Vec<Entry> },
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Lib(e) => match e.root() {
                Error::Convergence { .. } => EXIT_CONVERGENCE,
                _ => EXIT_DOMAIN,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => m.clone(),
            Failure::Lib(e) => e.to_string(),
        }
    }
}

fn load_state(spec: &StateSpec, tol: &Tolerances) -> Result<DensityMatrix, Failure> {
    match spec {
        StateSpec::Bell(kind) => Ok(bell_state(*kind)),
        StateSpec::BellDiagonal(params) => Ok(bell_diagonal(params)?),
        StateSpec::Identity => Ok(DensityMatrix::maximally_mixed(4)?),
        StateSpec::File(path) => load_state_file(path, tol),
    }
}

fn load_state_file(path: &Path, tol: &Tolerances) -> Result<DensityMatrix, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let parsed: StateFile = serde_json::from_str(&text).map_err(|e| {
        Failure::Usage(format!(
            "{}: expected 16 {{\"re\", \"im\"}} entries (row-major), optionally under \"density_matrix\": {e}",
            path.display()
        ))
    })?;
    let entries = match parsed {
        StateFile::Bare(v) | StateFile::Wrapped { density_matrix: v } => v,
    };
    if entries.len() != 16 {
        return Err(Failure::Usage(format!(
            "{}: expected 16 entries, found {}",
            path.display(),
            entries.len()
        )));
    }
    let data: Vec<C64> = entries.iter().map(|e| C64::new(e.re, e.im)).collect();
    let m = ComplexMatrix::from_slice(4, &data)?;
    Ok(DensityMatrix::with_tolerance(
        HermitianOp::with_tolerance(m, tol)?,
        tol,
    )?)
}

/// `%g`-style rendering with 6 significant digits.
pub fn sig6(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    let out = if (-5..6).contains(&exp) {
        trim_zeros(format!("{:.*}", (5 - exp).max(0) as usize, x))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    };
    if out == "-0" {
        "0".into()
    } else {
        out
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn opt6(x: Option<f64>) -> String {
    x.map_or_else(|| "none".into(), sig6)
}

fn opt_csv(x: Option<f64>) -> String {
    x.map_or_else(String::new, |v| v.to_string())
}

fn matrix_json(m: &ComplexMatrix) -> Value {
    Value::Array(
        m.entries()
            .iter()
            .map(|z| json!({"re": z.re, "im": z.im}))
            .collect(),
    )
}

fn coeffs_json(w: &PauliWitness) -> Value {
    json!({"c_i": w.c_i, "c_x": w.c_x, "c_y": w.c_y, "c_z": w.c_z})
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Detected => "detected",
        Verdict::Inconclusive => "inconclusive",
        Verdict::NotDetected => "not_detected",
    }
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn cmd_witness(
    state: &StateSpec,
    table1: &[BellKind],
    custom: &[PauliWitness],
    noise: f64,
    seed: u64,
    format: Format,
    tol: &Tolerances,
) -> Result<String, Failure> {
    let rho = load_state(state, tol)?;
    if noise < 0.0 {
        return Err(Error::Domain(format!("noise sigma must be ≥ 0, got {noise}")).into());
    }
    let mut corr = [0.0; 3];
    for (k, p) in [Pauli::X, Pauli::Y, Pauli::Z].into_iter().enumerate() {
        let v = expectation(&rho, &HermitianOp::pauli_string(p, p))?;
        corr[k] = if noise > 0.0 {
            add_noise(v, noise, seed.wrapping_add(k as u64))?
        } else {
            v
        };
    }
    let [xx, yy, zz] = corr;
    let f = f_witness(&CorrelationPair::new(xx, zz)?)?;
    let f_verdict = Verdict::of(f, tol.psd);

    let mut witnesses: Vec<(String, PauliWitness)> = table1
        .iter()
        .map(|k| (format!("table1:{k}"), table1_witness(*k)))
        .collect();
    witnesses.extend(custom.iter().map(|w| {
        (
            format!("custom:{},{},{},{}", w.c_i, w.c_x, w.c_y, w.c_z),
            *w,
        )
    }));
    let mut rows = Vec::new();
    for (name, w) in &witnesses {
        let value = if noise > 0.0 {
            w.c_i + w.c_x * xx + w.c_y * yy + w.c_z * zz
        } else {
            eval_witness(w, &rho)?
        };
        let valid = w.is_valid(tol)?;
        rows.push((name.clone(), *w, value, valid, Verdict::of(value, tol.psd)));
    }

    Ok(match format {
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "<XX> = {}", sig6(xx)).unwrap();
            writeln!(s, "<YY> = {}", sig6(yy)).unwrap();
            writeln!(s, "<ZZ> = {}", sig6(zz)).unwrap();
            writeln!(s, "F = {}  ({})", sig6(f), f_verdict.describe()).unwrap();
            for (name, _, value, valid, verdict) in &rows {
                let note = if *valid { "" } else { ", not a valid witness" };
                writeln!(
                    s,
                    "W[{name}] = {}  ({}{note})",
                    sig6(*value),
                    verdict.describe()
                )
                .unwrap();
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("quantity,value,verdict\n");
            for (q, v) in [("xx", xx), ("yy", yy), ("zz", zz)] {
                writeln!(s, "{q},{v},").unwrap();
            }
            writeln!(s, "F,{f},{}", verdict_name(f_verdict)).unwrap();
            for (name, _, value, _, verdict) in &rows {
                writeln!(s, "W[{name}],{value},{}", verdict_name(*verdict)).unwrap();
            }
            s
        }
        Format::Json => to_json(&json!({
            "command": "witness",
            "correlations": {"xx": xx, "yy": yy, "zz": zz},
            "f": {"value": f, "verdict": verdict_name(f_verdict)},
            "witnesses": rows.iter().map(|(name, w, value, valid, verdict)| json!({
                "name": name,
                "coefficients": coeffs_json(w),
                "value": value,
                "valid": valid,
                "verdict": verdict_name(*verdict),
            })).collect::<Vec<_>>(),
        })),
    })
}

fn cmd_optimal_witness(
    kind: Option<BellKind>,
    all: bool,
    format: Format,
) -> Result<String, Failure> {
    let kinds: Vec<BellKind> = match (kind, all) {
        (Some(k), _) => vec![k],
        (None, true) => BellKind::ALL.to_vec(),
        (None, false) => {
            return Err(Failure::Usage(
                "optimal-witness needs a Bell kind or --all".into(),
            ))
        }
    };
    let rows: Vec<(BellKind, PauliWitness, f64)> = kinds
        .into_iter()
        .map(|k| {
            let (w, obj) = optimal_witness(k);
            (k, w, obj)
        })
        .collect();
    Ok(match format {
        Format::Text => {
            let mut s = String::new();
            for (k, w, obj) in &rows {
                writeln!(
                    s,
                    "{k}: (c_I, c_x, c_y, c_z) = ({}, {}, {}, {})  objective = {}",
                    sig6(w.c_i),
                    sig6(w.c_x),
                    sig6(w.c_y),
                    sig6(w.c_z),
                    sig6(*obj)
                )
                .unwrap();
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("kind,c_i,c_x,c_y,c_z,objective\n");
            for (k, w, obj) in &rows {
                writeln!(s, "{k},{},{},{},{},{obj}", w.c_i, w.c_x, w.c_y, w.c_z).unwrap();
            }
            s
        }
        Format::Json => to_json(&json!({
            "command": "optimal-witness",
            "witnesses": rows.iter().map(|(k, w, obj)| json!({
                "kind": k.name(),
                "coefficients": coeffs_json(w),
                "objective": obj,
            })).collect::<Vec<_>>(),
        })),
    })
}

fn cmd_robustness(state: &StateSpec, format: Format, tol: &Tolerances) -> Result<String, Failure> {
    let rho = load_state(state, tol)?;
    let r = generalized_robustness_with(&rho, tol)?;
    let residual = r.certificate_residual(&rho)?;
    Ok(match format {
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "generalized robustness = {}", sig6(r.value)).unwrap();
            writeln!(s, "lower bound = {}", sig6(r.lower_bound)).unwrap();
            writeln!(s, "iterations = {}", r.iterations).unwrap();
            writeln!(
                s,
                "certificate residual (min PT eigenvalue) = {}",
                sig6(residual)
            )
            .unwrap();
            s
        }
        Format::Csv => format!(
            "value,lower_bound,iterations,certificate_residual\n{},{},{},{}\n",
            r.value, r.lower_bound, r.iterations, residual
        ),
        Format::Json => to_json(&json!({
            "command": "robustness",
            "value": r.value,
            "lower_bound": r.lower_bound,
            "iterations": r.iterations,
            "certificate_residual": residual,
            "certificate_state": r.certificate_state.as_ref().map(|c| matrix_json(c.matrix())),
        })),
    })
}

#[allow(clippy::too_many_arguments)]
fn cmd_relax_sweep(
    state: &StateSpec,
    params: RelaxationParams,
    t_max: f64,
    steps: usize,
    kind: BellKind,
    format: Format,
    tol: &Tolerances,
) -> Result<String, Failure> {
    let rho = load_state(state, tol)?;
    let s = sweep(&rho, &params, &table1_witness(kind), t_max, steps)?;
    let gr_end = crossing_time(&s, Quantity::GR);
    let w_cross = crossing_time(&s, Quantity::W);
    Ok(match format {
        Format::Text => {
            let mut out = String::new();
            writeln!(out, "tau_c (F crossing) = {} s", opt6(s.tau_c)).unwrap();
            writeln!(out, "W crossing = {} s", opt6(w_cross)).unwrap();
            writeln!(out, "GR end = {} s", opt6(gr_end)).unwrap();
            writeln!(out, "tau_R = {} s", opt6(s.tau_r)).unwrap();
            writeln!(out, "tau_W = {} s", opt6(s.tau_w)).unwrap();
            writeln!(out, "{:>12} {:>12} {:>12} {:>12}", "time", "F", "W", "GR").unwrap();
            for k in 0..s.len() {
                writeln!(
                    out,
                    "{:>12} {:>12} {:>12} {:>12}",
                    sig6(s.times[k]),
                    sig6(s.f_values[k]),
                    sig6(s.w_values[k]),
                    sig6(s.gr_values[k])
                )
                .unwrap();
            }
            out
        }
        Format::Csv => {
            let mut out = String::new();
            writeln!(out, "# tau_c={}", opt_csv(s.tau_c)).unwrap();
            writeln!(out, "# tau_r={}", opt_csv(s.tau_r)).unwrap();
            writeln!(out, "# tau_w={}", opt_csv(s.tau_w)).unwrap();
            writeln!(out, "# w_crossing={}", opt_csv(w_cross)).unwrap();
            writeln!(out, "# gr_end={}", opt_csv(gr_end)).unwrap();
            out.push_str("time,f,w,gr\n");
            for k in 0..s.len() {
                writeln!(
                    out,
                    "{},{},{},{}",
                    s.times[k], s.f_values[k], s.w_values[k], s.gr_values[k]
                )
                .unwrap();
            }
            out
        }
        Format::Json => to_json(&json!({
            "command": "relax-sweep",
            "params": params,
            "witness": kind.name(),
            "tau_c": s.tau_c,
            "tau_r": s.tau_r,
            "tau_w": s.tau_w,
            "w_crossing": w_cross,
            "gr_end": gr_end,
            "times": s.times,
            "f": s.f_values,
            "w": s.w_values,
            "gr": s.gr_values,
        })),
    })
}

fn cmd_detect_region(resolution: usize, format: Format) -> Result<String, Failure> {
    let grid = detection_region_grid(resolution)?;
    Ok(match format {
        Format::Text => {
            let mut s = format!("{} grid points\n", grid.len());
            for class in BDClass::ALL {
                let n = grid.iter().filter(|(_, c)| *c == class).count();
                writeln!(s, "{class}: {n}").unwrap();
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("c1,c2,c3,class\n");
            for (p, class) in &grid {
                writeln!(s, "{},{},{},{class}", p.c1, p.c2, p.c3).unwrap();
            }
            s
        }
        Format::Json => to_json(&json!({
            "command": "detect-region",
            "resolution": resolution,
            "points": grid.iter().map(|(p, class)| json!({
                "c1": p.c1, "c2": p.c2, "c3": p.c3, "class": class.name(),
            })).collect::<Vec<_>>(),
        })),
    })
}

fn cmd_sdc(
    eps: (f64, f64),
    msg: (u8, u8),
    format: Format,
    tol: &Tolerances,
) -> Result<String, Failure> {
    let thermal = ThermalParams::new(eps.0, eps.1)?;
    let m = Message::from_bits(msg.0, msg.1)?;
    let run = superdense_run(&thermal, m)?;
    let decoded = decode_message(run.mz_i, run.mz_s, tol.eq);
    let success = decoded == Some(m);
    let decoded_bits = decoded.map(|d| d.bits());
    Ok(match format {
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "mz_I = {}", sig6(run.mz_i)).unwrap();
            writeln!(s, "mz_S = {}", sig6(run.mz_s)).unwrap();
            match decoded_bits {
                Some((x, z)) => writeln!(
                    s,
                    "decoded (x, z) = ({x}, {z})  {}",
                    if success { "success" } else { "mismatch" }
                )
                .unwrap(),
                None => writeln!(s, "decoded (x, z) = inconclusive (zero magnetization)").unwrap(),
            }
            s
        }
        Format::Csv => {
            let (dx, dz) = decoded_bits.map_or((String::new(), String::new()), |(x, z)| {
                (x.to_string(), z.to_string())
            });
            format!(
                "eps_i,eps_s,x,z,mz_i,mz_s,decoded_x,decoded_z,success\n{},{},{},{},{},{},{dx},{dz},{success}\n",
                eps.0, eps.1, msg.0, msg.1, run.mz_i, run.mz_s
            )
        }
        Format::Json => to_json(&json!({
            "command": "sdc",
            "eps": [eps.0, eps.1],
            "message": [msg.0, msg.1],
            "mz_i": run.mz_i,
            "mz_s": run.mz_s,
            "decoded": decoded_bits.map(|(x, z)| [x, z]),
            "success": success,
        })),
    })
}

fn cmd_tomography(
    state: &StateSpec,
    noise: f64,
    seed: u64,
    format: Format,
    tol: &Tolerances,
) -> Result<String, Failure> {
    let rho = load_state(state, tol)?;
    let e = if noise == 0.0 {
        pauli_vector(&rho)?
    } else {
        noisy_pauli_vector(&rho, noise, seed)?
    };
    let t = pauli_tomography_with(&e, tol)?;
    let fid = fidelity(&t.state, &rho)?;
    let m = t.state.matrix();
    Ok(match format {
        Format::Text => {
            let mut s = String::new();
            for r in 0..4 {
                let row: Vec<String> = (0..4)
                    .map(|c| {
                        let z = m.get(r, c);
                        format!("{:>10} {:>+10}i", sig6(z.re), sig6(z.im))
                    })
                    .collect();
                writeln!(s, "{}", row.join("  ")).unwrap();
            }
            writeln!(s, "projection distance = {}", sig6(t.projection_distance)).unwrap();
            writeln!(s, "fidelity with input = {}", sig6(fid)).unwrap();
            s
        }
        Format::Csv => {
            let mut s = String::from("row,col,re,im\n");
            for r in 0..4 {
                for c in 0..4 {
                    let z = m.get(r, c);
                    writeln!(s, "{r},{c},{},{}", z.re, z.im).unwrap();
                }
            }
            s
        }
        Format::Json => to_json(&json!({
            "command": "tomography",
            "pauli_labels": pauli_labels(),
            "pauli_vector": e,
            "density_matrix": matrix_json(m),
            "projection_distance": t.projection_distance,
            "fidelity": fid,
        })),
    })
}

fn execute(cli: &Cli, tol: &Tolerances) -> Result<String, Failure> {
    let report = cli.format.unwrap_or(Format::Text);
    let data = cli.format.unwrap_or(Format::Csv);
    match &cli.command {
        Command::Witness {
            state,
            table1,
            witness,
            noise,
        } => cmd_witness(state, table1, witness, *noise, cli.seed, report, tol),
        Command::OptimalWitness { kind, all } => cmd_optimal_witness(*kind, *all, report),
        Command::Robustness { state } => cmd_robustness(state, report, tol),
        Command::RelaxSweep {
            state,
            t2i,
            t2s,
            t1i,
            t1s,
            t_max,
            steps,
            witness,
        } => {
            let params = RelaxationParams::new(*t1i, *t2i, *t1s, *t2s)?;
            cmd_relax_sweep(state, params, *t_max, *steps, *witness, data, tol)
        }
        Command::DetectRegion { resolution } => cmd_detect_region(*resolution, data),
        Command::Sdc { eps, msg } => cmd_sdc(*eps, *msg, report, tol),
        Command::Tomography { state, noise } => {
            cmd_tomography(state, *noise, cli.seed, report, tol)
        }
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// the result to `out` or to `--output`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    let tol = match Tolerances::from_env() {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    match execute(&cli, &tol) {
        Ok(text) => {
            let written = match &cli.output {
                Some(path) => std::fs::write(path, text.as_bytes()),
                None => out.write_all(text.as_bytes()),
            };
            match written {
                Ok(()) => EXIT_OK,
                Err(e) => {
                    let _ = writeln!(err, "error: cannot write output: {e}");
                    EXIT_DOMAIN
                }
            }
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.exit_code()
        }
    }
}
