use std::fs::File;
use std::io::{self, Read, Write};

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use dirac_abc::export::{
    sample_fields, write_csv, ScanRow, StateRow, SCAN_HEADER, SOLVE_HEADER, WAVEFUNCTION_HEADER,
};
use dirac_abc::model::{cyclotron_frequency, effective_frequency};
use dirac_abc::oracle::{discretized_eigenvalues, refinement_study};
use dirac_abc::quantization::{energy_from_frequency, solve_general, solve_preferring_closed_form};
use dirac_abc::{
    BoundState, Branch, DerivedQuantities, GammaConvention, GridSpec, HalfInteger, OracleReport,
    QuantumNumbers, RadialFunction, SolutionSet, Spin, SystemParams,
};

use crate::{
    BranchFilter, CliError, Convention, Format, OutputArgs, PhysArgs, ScanArgs, ScanParam,
    SolveArgs, SpectrumArgs, StateArgs, VerifyArgs, WavefunctionArgs,
};

const NORM_TOL: f64 = 1e-10;

fn usage(msg: impl Into<String>) -> anyhow::Error {
    CliError::Usage(msg.into()).into()
}

impl PhysArgs {
    fn params(&self) -> Result<SystemParams> {
        let e = self.e.ok_or_else(|| usage("--e is required"))?;
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(usage(format!("--tol {} must be > 0", self.tol)));
        }
        let convention = match self.gamma_convention {
            Convention::Linear => GammaConvention::Linear,
            Convention::AsPrinted => GammaConvention::AsPrinted,
        };
        Ok(SystemParams::new(self.m0, e, self.z, self.phi, self.b)?
            .with_gamma_convention(convention))
    }
}

impl StateArgs {
    fn n(&self) -> Result<u32> {
        self.n.ok_or_else(|| usage("--n is required"))
    }

    fn ml(&self) -> Result<HalfInteger> {
        let ml = self.ml.ok_or_else(|| usage("--ml is required"))?;
        Ok(HalfInteger::from_f64(ml)?)
    }

    fn spin(&self) -> Result<Spin> {
        let s = self.s.ok_or_else(|| usage("--s is required"))?;
        Ok(Spin::from_sign(s)?)
    }
}

impl BranchFilter {
    fn branches(self) -> &'static [Branch] {
        match self {
            BranchFilter::Positive => &[Branch::Positive],
            BranchFilter::Negative => &[Branch::Negative],
            BranchFilter::Both => &Branch::BOTH,
        }
    }
}

fn emit(out: &Option<std::path::PathBuf>, bytes: &[u8]) -> Result<()> {
    match out {
        Some(path) => File::create(path)
            .and_then(|mut f| f.write_all(bytes))
            .with_context(|| format!("writing {}", path.display())),
        None => io::stdout()
            .lock()
            .write_all(bytes)
            .context("writing stdout"),
    }
}

fn render<T: Serialize>(
    output: &OutputArgs,
    header: &[&str],
    rows: &[T],
    fields: impl Fn(&T) -> Vec<String>,
) -> Result<()> {
    let mut buf = Vec::new();
    match output.format {
        Format::Csv => write_csv(&mut buf, header, rows.iter().map(fields))?,
        Format::Json => {
            serde_json::to_writer_pretty(&mut buf, rows)?;
            buf.push(b'\n');
        }
    }
    emit(&output.out, &buf)
}

fn warn(context: &str, err: &dirac_abc::Error) {
    eprintln!(
        "warning={} {context} detail={}",
        err.name(),
        err.to_string().replace('\n', " ")
    );
}

fn solve_one(
    params: &SystemParams,
    qn: &QuantumNumbers,
    tol: f64,
    closed_form: bool,
) -> dirac_abc::Result<SolutionSet> {
    // without Coulomb coupling only the closed forms (resonance) apply
    let closed_form = closed_form || (params.coulomb_coupling() == 0.0 && qn.n <= 2);
    if closed_form {
        solve_preferring_closed_form(params, qn, tol)
    } else {
        solve_general(params, qn, tol)
    }
}

/// States for every requested branch; a branch that fails is reported as a
/// warning as long as another one succeeds.
fn solve_states(
    params: &SystemParams,
    state: &StateArgs,
    branch: BranchFilter,
    tol: f64,
    closed_form: bool,
) -> Result<Vec<BoundState>> {
    let (n, ml, s) = (state.n()?, state.ml()?, state.spin()?);
    let mut states = Vec::new();
    let mut errors = Vec::new();
    for &b in branch.branches() {
        let qn = QuantumNumbers::new(n, ml, s, b)?;
        match solve_one(params, &qn, tol, closed_form) {
            Ok(set) => states.extend(set.states),
            Err(e) => errors.push((b, e)),
        }
    }
    if states.is_empty() {
        if let Some((_, e)) = errors.into_iter().next() {
            return Err(e.into());
        }
    } else {
        for (b, e) in &errors {
            warn(&format!("branch={}", b.sign()), e);
        }
    }
    Ok(states)
}

pub fn spectrum(args: &SpectrumArgs) -> Result<()> {
    let mut params = args.phys.params()?;
    let omega_c = cyclotron_frequency(&params);
    let omega = match (args.omega, args.omega_equals_half_cyclotron) {
        (Some(w), true) if (w - omega_c / 2.0).abs() > 1e-12 * w.abs().max(1.0) => {
            return Err(usage(format!(
                "--omega {w} contradicts ω_c/2 = {}",
                omega_c / 2.0
            )));
        }
        (_, true) => omega_c / 2.0,
        (Some(w), false) => w,
        (None, false) => {
            return Err(usage(
                "--omega or --omega-equals-half-cyclotron is required",
            ))
        }
    };
    params = params.with_omega(omega)?;
    let omega_bar = effective_frequency(omega, omega_c)?;

    if args.ml_max.is_nan() || args.ml_max < 0.0 {
        return Err(usage("--ml-max must be ≥ 0"));
    }
    let twice_max = (2.0 * args.ml_max).floor() as i32;
    let mut rows = Vec::new();
    for n in 1..=args.n_max {
        for twice in (-twice_max..=twice_max).filter(|t| t % 2 != 0) {
            let ml = HalfInteger::from_twice(twice)?;
            for s in [Spin::Up, Spin::Down] {
                for &b in args.branch.branches() {
                    let qn = QuantumNumbers::new(n, ml, s, b)?;
                    let row = energy_from_frequency(omega_bar, &qn, &params).and_then(|energy| {
                        let d = DerivedQuantities::on_shell(&params, &qn, energy, omega_bar)?;
                        Ok(StateRow {
                            n,
                            ml: ml.value(),
                            s: s.sign(),
                            branch: b.sign(),
                            energy,
                            omega,
                            omega_bar,
                            a_bar: d.a_bar,
                            gamma: d.gamma,
                            kappa: d.kappa,
                        })
                    });
                    match row {
                        Ok(row) => rows.push(row),
                        Err(e) => warn(
                            &format!("n={n} ml={ml} s={} branch={}", s.sign(), b.sign()),
                            &e,
                        ),
                    }
                }
            }
        }
    }
    render(&args.output, &SOLVE_HEADER, &rows, StateRow::csv_fields)
}

pub fn solve(args: &SolveArgs) -> Result<()> {
    let params = args.phys.params()?;
    let states = solve_states(
        &params,
        &args.state,
        args.branch,
        args.phys.tol,
        args.closed_form,
    )?;
    let rows: Vec<StateRow> = states.iter().map(StateRow::from_state).collect();
    render(&args.output, &SOLVE_HEADER, &rows, StateRow::csv_fields)
}

pub fn wavefunction(args: &WavefunctionArgs) -> Result<()> {
    if args.branch == BranchFilter::Both {
        return Err(usage("wavefunction needs a single --branch"));
    }
    if args.points < 2 {
        return Err(usage("--points must be ≥ 2"));
    }
    let params = args.phys.params()?;
    let states = solve_states(&params, &args.state, args.branch, args.phys.tol, false)?;
    let state = states.get(args.root).ok_or_else(|| {
        usage(format!(
            "--root {} but only {} admissible roots",
            args.root,
            states.len()
        ))
    })?;
    let rf = RadialFunction::from_state(state)?.normalize(NORM_TOL)?;
    let x_max = args.x_max.unwrap_or_else(|| rf.tail_cutoff());
    if !(x_max > 0.0 && x_max.is_finite()) {
        return Err(usage(format!("--x-max {x_max} must be > 0")));
    }
    let samples = rf.sample(x_max, args.points);
    render(&args.output, &WAVEFUNCTION_HEADER, &samples, sample_fields)
}

fn scan_values(args: &ScanArgs) -> Result<Vec<f64>> {
    if args.steps == 0 {
        return Err(usage("--steps must be ≥ 1"));
    }
    if !(args.from.is_finite() && args.to.is_finite()) {
        return Err(usage("--from and --to must be finite"));
    }
    let last = (args.steps - 1).max(1) as f64;
    Ok((0..args.steps)
        .map(|i| args.from + (args.to - args.from) * i as f64 / last)
        .collect())
}

fn scan_point(args: &ScanArgs, base: &SystemParams, value: f64) -> dirac_abc::Result<ScanRow> {
    let mut params = *base;
    let mut ml = args.state.ml;
    match args.param {
        ScanParam::Z => params.z = value,
        ScanParam::Phi => params.phi_ab = value,
        ScanParam::B => params.b = value,
        ScanParam::Ml => ml = Some(value),
    }
    params.validate()?;
    let ml = HalfInteger::from_f64(ml.unwrap_or(f64::NAN))?;
    let n = args.state.n.unwrap_or(0);
    let s = Spin::from_sign(args.state.s.unwrap_or(0))?;
    let first = |b| -> dirac_abc::Result<BoundState> {
        let qn = QuantumNumbers::new(n, ml, s, b)?;
        let set = solve_one(&params, &qn, args.phys.tol, args.closed_form)?;
        Ok(set
            .states
            .into_iter()
            .next()
            .expect("solvers return at least one state"))
    };
    let plus = first(Branch::Positive)?;
    let minus = first(Branch::Negative)?;
    Ok(ScanRow {
        param_value: value,
        energy_plus: plus.energy,
        energy_minus: minus.energy,
        omega: plus.omega,
    })
}

pub fn scan(args: &ScanArgs) -> Result<()> {
    let base = args.phys.params()?;
    args.state.n()?;
    args.state.spin()?;
    if args.param != ScanParam::Ml {
        args.state.ml()?;
    }
    let values = scan_values(args)?;
    // rayon's indexed collect keeps parameter order
    let results: Vec<dirac_abc::Result<ScanRow>> = values
        .par_iter()
        .map(|&v| scan_point(args, &base, v))
        .collect();
    let mut rows = Vec::with_capacity(results.len());
    for (value, result) in values.iter().zip(results) {
        match result {
            Ok(row) => rows.push(row),
            Err(e) => warn(&format!("param_value={value}"), &e),
        }
    }
    render(&args.output, &SCAN_HEADER, &rows, ScanRow::csv_fields)
}

#[derive(Serialize)]
struct VerifyRecord {
    state: StateRow,
    #[serde(flatten)]
    report: OracleReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    coarse_eigenvalue: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    extrapolated: Option<f64>,
}

fn read_rows(path: &std::path::Path) -> Result<Vec<StateRow>> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        io::stdin()
            .read_to_string(&mut text)
            .context("reading stdin")?;
    } else {
        File::open(path)
            .and_then(|mut f| f.read_to_string(&mut text))
            .with_context(|| format!("reading {}", path.display()))?;
    }
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let rows = reader
        .deserialize()
        .collect::<std::result::Result<Vec<StateRow>, _>>()
        .map_err(|e| usage(format!("malformed state CSV: {e}")))?;
    if rows.is_empty() {
        return Err(usage("no states to verify"));
    }
    Ok(rows)
}

pub fn verify(args: &VerifyArgs) -> Result<()> {
    let states = match &args.input {
        Some(path) => read_rows(path)?
            .iter()
            .map(StateRow::to_bound_state)
            .collect::<dirac_abc::Result<Vec<_>>>()?,
        None => {
            let params = args.phys.params()?;
            solve_states(&params, &args.state, args.branch, args.phys.tol, false)?
        }
    };
    let grid = GridSpec::new(args.x_min, args.x_max, args.points)?;

    let mut records = Vec::with_capacity(states.len());
    for state in &states {
        let record = if args.refine {
            let study = refinement_study(state, &grid)?;
            VerifyRecord {
                state: StateRow::from_state(state),
                coarse_eigenvalue: Some(study.coarse.matched_eigenvalue),
                error_ratio: Some(study.error_ratio),
                extrapolated: Some(study.extrapolated),
                report: study.fine,
            }
        } else {
            VerifyRecord {
                state: StateRow::from_state(state),
                report: discretized_eigenvalues(state, &grid, state.qn.n as usize + 3)?,
                coarse_eigenvalue: None,
                error_ratio: None,
                extrapolated: None,
            }
        };
        records.push(record);
    }

    let mut buf = serde_json::to_vec_pretty(&records)?;
    buf.push(b'\n');
    emit(&args.out, &buf)?;

    let failed: Vec<String> = records
        .iter()
        .filter(|r| !r.report.verified)
        .map(|r| {
            format!(
                "n={} ml={} s={} overlap={}",
                r.state.n, r.state.ml, r.state.s, r.report.overlap
            )
        })
        .collect();
    if !failed.is_empty() {
        return Err(
            CliError::OracleMismatch(format!("unverified states: {}", failed.join("; "))).into(),
        );
    }
    Ok(())
}
