//! Acceptance checks. Each test prints one `criterion N: PASS|FAIL` line.
//! Run with `--nocapture` to see them.

use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use dirac_abc::heun::{self, HeunParams};
use dirac_abc::model::{cyclotron_frequency, effective_frequency};
use dirac_abc::oracle::refinement_study;
use dirac_abc::quantization::{energy_from_frequency, solve_general, DEFAULT_TOL};
use dirac_abc::{
    BoundState, Branch, GridSpec, HalfInteger, QuantumNumbers, RadialFunction, Spin, SystemParams,
};

fn report(criterion: u32, pass: bool, detail: &str, elapsed: Duration, budget: Duration) -> bool {
    let ok = pass && elapsed <= budget;
    println!(
        "criterion {criterion}: {} {detail} [{:.3} s, budget {} s]",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs()
    );
    ok
}

#[derive(Debug, Clone, Copy)]
struct Case {
    params: SystemParams,
    ml: HalfInteger,
    s: Spin,
}

impl Case {
    fn coupling(&self) -> f64 {
        self.params.z * self.params.e_abs * self.params.e_abs
    }

    fn shifted(&self) -> f64 {
        self.ml.value() + self.params.e_abs * self.params.phi_ab
    }

    fn gamma(&self) -> f64 {
        (self.shifted().powi(2) - self.coupling().powi(2)).sqrt()
    }

    fn delta(&self) -> f64 {
        2.0 * self.gamma() + 1.0 - self.s.value()
    }

    fn kappa(&self, n: u32) -> f64 {
        f64::from(n) + self.gamma() + 1.0 - self.s.value() - self.shifted()
    }

    /// Closed-form (E, ω) for n ∈ {1, 2}, evaluated directly.
    fn closed_form(&self, n: u32) -> Option<(f64, f64)> {
        let delta = self.delta();
        let a_sq = match n {
            1 => 2.0 * delta,
            2 => 4.0 * (2.0 * delta + 1.0),
            _ => unreachable!(),
        };
        let zc2 = self.coupling().powi(2);
        let denom = 1.0 - 8.0 * self.kappa(n) * zc2 / a_sq;
        if denom <= 0.0 {
            return None;
        }
        let m0 = self.params.m0;
        let e_sq = m0 * m0 / denom;
        let omega_bar = 4.0 * zc2 * e_sq / (m0 * a_sq);
        let omega = omega_bar + self.params.e_abs * self.params.b / (2.0 * m0);
        Some((e_sq.sqrt(), omega))
    }

    fn qn(&self, n: u32, branch: Branch) -> QuantumNumbers {
        QuantumNumbers::new(n, self.ml, self.s, branch).unwrap()
    }
}

/// Subcritical parameter set, kept away from γ = 0.
fn random_case(rng: &mut StdRng) -> Case {
    loop {
        let m0 = rng.gen_range(0.5..2.0);
        let e = rng.gen_range(0.5..1.5);
        let z = rng.gen_range(0.01..0.4);
        let phi = rng.gen_range(-0.4..0.4);
        let b = rng.gen_range(0.0..3.0);
        let twice = 2 * rng.gen_range(-4..4) + 1;
        let s = if rng.gen_bool(0.5) {
            Spin::Up
        } else {
            Spin::Down
        };
        let case = Case {
            params: SystemParams::new(m0, e, z, phi, b).unwrap(),
            ml: HalfInteger::from_twice(twice).unwrap(),
            s,
        };
        if case.shifted().powi(2) - case.coupling().powi(2) > 0.01 {
            return case;
        }
    }
}

/// Random cases where the closed form for `n` admits a bound state.
fn solvable_cases(seed: u64, n: u32, count: usize) -> Vec<Case> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let case = random_case(&mut rng);
        if case.closed_form(n).is_some() {
            out.push(case);
        }
    }
    out
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// States for the oracle: n ∈ {1, 2, 3}, both spins, several m_l, both
/// branches. All have exponent p ≳ 3/2, where the grid error is O(h²);
/// below that the leading error is O(h^{2p−1}).
fn oracle_panel() -> Vec<BoundState> {
    let p = |z: f64, phi: f64, b: f64| SystemParams::new(1.0, 1.0, z, phi, b).unwrap();
    let ml = |v: f64| HalfInteger::from_f64(v).unwrap();
    let entries = [
        (p(0.1, 0.0, 0.0), 1, 0.5, Spin::Down, Branch::Positive),
        (p(0.1, 0.0, 0.0), 1, 0.5, Spin::Down, Branch::Negative),
        (p(0.1, 0.0, 0.0), 1, -0.5, Spin::Down, Branch::Positive),
        (p(0.1, 0.0, 0.0), 1, 1.5, Spin::Up, Branch::Positive),
        (p(0.1, 0.3, 2.0), 1, 2.5, Spin::Up, Branch::Positive),
        (p(0.1, 0.0, 0.0), 2, 0.5, Spin::Down, Branch::Positive),
        (p(0.1, 0.0, 0.0), 2, 0.5, Spin::Down, Branch::Negative),
        (p(0.1, 0.0, 0.0), 2, 1.5, Spin::Up, Branch::Positive),
        (p(0.1, 0.0, 0.0), 2, -1.5, Spin::Down, Branch::Positive),
        (p(0.3, 0.0, 0.0), 2, -1.5, Spin::Down, Branch::Positive),
        (p(0.1, 0.0, 0.0), 3, 0.5, Spin::Down, Branch::Positive),
        (p(0.1, 0.0, 0.0), 3, 2.5, Spin::Up, Branch::Positive),
    ];
    entries
        .iter()
        .flat_map(|&(params, n, m, s, b)| {
            let qn = QuantumNumbers::new(n, ml(m), s, b).unwrap();
            solve_general(&params, &qn, DEFAULT_TOL).unwrap().states
        })
        .collect()
}

fn running_example() -> BoundState {
    let params = SystemParams::new(1.0, 1.0, 0.1, 0.0, 0.0).unwrap();
    let qn = QuantumNumbers::new(
        1,
        HalfInteger::from_f64(0.5).unwrap(),
        Spin::Up,
        Branch::Positive,
    )
    .unwrap();
    solve_general(&params, &qn, DEFAULT_TOL)
        .unwrap()
        .states
        .remove(0)
}

#[test]
fn criterion_1_resonance_gives_rest_energy() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(1);
    let mut failures = Vec::new();
    for _ in 0..100 {
        let case = random_case(&mut rng);
        let n = rng.gen_range(1..20);
        let branch = if rng.gen_bool(0.5) {
            Branch::Positive
        } else {
            Branch::Negative
        };
        let omega_c = cyclotron_frequency(&case.params);
        let params = case.params.with_omega(omega_c / 2.0).unwrap();
        let omega_bar = effective_frequency(omega_c / 2.0, omega_c).unwrap();
        let energy = energy_from_frequency(omega_bar, &case.qn(n, branch), &params).unwrap();
        let expected = branch.value() * params.m0;
        if omega_bar != 0.0 || energy.to_bits() != expected.to_bits() {
            failures.push((case, n, energy));
        }
    }
    let pass = failures.is_empty();
    let detail = format!("100 random states, {} not bitwise ±m0", failures.len());
    assert!(
        report(1, pass, &detail, start.elapsed(), Duration::from_secs(1)),
        "{failures:?}"
    );
}

#[test]
fn criterion_2_general_solver_matches_closed_forms() {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    let mut failures = Vec::new();
    for n in [1, 2] {
        for case in solvable_cases(20 + u64::from(n), n, 60) {
            let (e_cf, omega_cf) = case.closed_form(n).unwrap();
            for branch in Branch::BOTH {
                let set = solve_general(&case.params, &case.qn(n, branch), DEFAULT_TOL);
                match set {
                    Ok(set) if set.states.len() == 1 => {
                        let st = &set.states[0];
                        let err =
                            rel(st.energy, branch.value() * e_cf).max(rel(st.omega, omega_cf));
                        worst = worst.max(err);
                        if err > 1e-10 {
                            failures.push(format!("{case:?} n={n}: err {err:e}"));
                        }
                    }
                    other => failures.push(format!("{case:?} n={n}: {other:?}")),
                }
                count += 1;
            }
        }
    }
    let pass = failures.is_empty();
    let detail =
        format!("{count} states from 120 random parameter sets, worst relative error {worst:.2e}");
    assert!(
        report(2, pass, &detail, start.elapsed(), Duration::from_secs(5)),
        "{failures:#?}"
    );
}

/// Dense polynomial in Ā, ascending coefficients.
type Poly = Vec<f64>;

fn poly_add(a: &Poly, b: &Poly) -> Poly {
    (0..a.len().max(b.len()))
        .map(|i| a.get(i).copied().unwrap_or(0.0) + b.get(i).copied().unwrap_or(0.0))
        .collect()
}

fn poly_scale(a: &Poly, c: f64) -> Poly {
    a.iter().map(|v| v * c).collect()
}

fn poly_times_a(a: &Poly) -> Poly {
    std::iter::once(0.0).chain(a.iter().copied()).collect()
}

/// a_0 .. a_{n+1} with Ā symbolic and ℰ = 2n.
fn symbolic_coefficients(n: u32, delta: f64) -> Vec<Poly> {
    let eps = 2.0 * f64::from(n);
    let mut a: Vec<Poly> = vec![vec![1.0], vec![0.0, -1.0 / delta]];
    for k in 0..n as usize {
        let kf = k as f64;
        let denom = (kf + 2.0) * (kf + 1.0 + delta);
        let next = poly_add(
            &poly_scale(&poly_times_a(&a[k + 1]), -1.0 / denom),
            &poly_scale(&a[k], (2.0 * kf - eps) / denom),
        );
        a.push(next);
    }
    a
}

#[test]
fn criterion_3_truncation_roots() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for n in [1u32, 2] {
        for case in solvable_cases(30 + u64::from(n), n, 40) {
            let delta = case.delta();
            let coeffs = symbolic_coefficients(n, delta);
            let last = &coeffs[n as usize + 1];
            // a_2 = c0 + c2 Ā², a_3 = Ā (c1 + c3 Ā²)
            let root_sq_sym = match n {
                1 => -last[0] / last[2],
                _ => -last[1] / last[3],
            };
            let expected = if n == 1 {
                2.0 * delta
            } else {
                4.0 * (2.0 * delta + 1.0)
            };
            let st = solve_general(&case.params, &case.qn(n, Branch::Positive), DEFAULT_TOL)
                .unwrap()
                .states
                .remove(0);
            let err = rel(st.a_bar_root.powi(2), expected).max(rel(root_sq_sym, expected));
            worst = worst.max(err);
            count += 1;
            if err > 1e-10 {
                failures.push(format!(
                    "n={n} δ={delta}: Ā²={} symbolic {root_sq_sym} expected {expected}",
                    st.a_bar_root.powi(2)
                ));
            }
        }
    }
    let pass = failures.is_empty();
    let detail = format!("{count} roots, worst relative error {worst:.2e}");
    assert!(
        report(3, pass, &detail, start.elapsed(), Duration::from_secs(1)),
        "{failures:#?}"
    );
}

#[test]
fn criterion_4_energy_independent_of_field() {
    let start = Instant::now();
    let ml = |v: f64| HalfInteger::from_f64(v).unwrap();
    let configs = [
        (0.2, 0.1, ml(0.5), Spin::Down),
        (0.15, -0.2, ml(1.5), Spin::Up),
        (0.3, 0.0, ml(-0.5), Spin::Down),
    ];
    let mut worst_e: f64 = 0.0;
    let mut worst_w: f64 = 0.0;
    for (z, phi, m, s) in configs {
        for n in [1, 2] {
            let qn = QuantumNumbers::new(n, m, s, Branch::Positive).unwrap();
            let solve_at = |b: f64| {
                let params = SystemParams::new(1.3, 0.8, z, phi, b).unwrap();
                let st = solve_general(&params, &qn, DEFAULT_TOL)
                    .unwrap()
                    .states
                    .remove(0);
                (st.energy, st.omega - cyclotron_frequency(&params) / 2.0)
            };
            let (e0, w0) = solve_at(0.0);
            for i in 1..=50 {
                let (e, w) = solve_at(5.0 * f64::from(i) / 50.0);
                worst_e = worst_e.max(rel(e, e0));
                worst_w = worst_w.max(rel(w, w0));
            }
        }
    }
    let pass = worst_e < 1e-12 && worst_w < 1e-12;
    let detail =
        format!("B ∈ [0, 5], max relative change E {worst_e:.2e}, ω − ω_c/2 {worst_w:.2e}");
    assert!(report(
        4,
        pass,
        &detail,
        start.elapsed(),
        Duration::from_secs(1)
    ));
}

#[test]
fn criterion_5_oracle_closure() {
    let start = Instant::now();
    let states = oracle_panel();
    let grid = GridSpec::with_default_origin(12.0, 8000).unwrap();
    let mut failures = Vec::new();
    let mut worst_extrap: f64 = 0.0;
    let mut worst_overlap: f64 = 1.0;
    let (mut ratio_lo, mut ratio_hi) = (f64::INFINITY, 0.0f64);
    for st in &states {
        let (n, gamma, s) = (f64::from(st.qn.n), st.derived.gamma, st.qn.s.value());
        let target = 2.0 * n + 2.0 * gamma.abs() + 2.0 - s;
        let label = format!(
            "n={} ml={} s={} Ā={:.4}",
            st.qn.n,
            st.qn.m_l,
            st.qn.s.sign(),
            st.a_bar_root
        );
        match refinement_study(st, &grid) {
            Ok(study) => {
                let extrap = (study.extrapolated - target).abs();
                let overlap = study.coarse.overlap.min(study.fine.overlap);
                worst_extrap = worst_extrap.max(extrap);
                worst_overlap = worst_overlap.min(overlap);
                ratio_lo = ratio_lo.min(study.error_ratio);
                ratio_hi = ratio_hi.max(study.error_ratio);
                if !(3.5..=4.5).contains(&study.error_ratio) || extrap >= 1e-5 || overlap < 0.999 {
                    failures.push(format!(
                        "{label}: ratio {} extrap err {extrap:e} overlap {overlap}",
                        study.error_ratio
                    ));
                }
            }
            Err(e) => failures.push(format!("{label}: {e}")),
        }
    }
    let pass = failures.is_empty() && states.len() >= 10;
    let detail = format!(
        "{} states, ratio ∈ [{ratio_lo:.3}, {ratio_hi:.3}], worst extrapolated error {worst_extrap:.2e}, min overlap {worst_overlap:.6}",
        states.len()
    );
    assert!(
        report(5, pass, &detail, start.elapsed(), Duration::from_secs(60)),
        "{failures:#?}"
    );
}

#[test]
fn criterion_6_ode_residual() {
    let start = Instant::now();
    let mut states: Vec<BoundState> = Vec::new();
    for n in [1, 2] {
        for case in solvable_cases(60 + u64::from(n), n, 25) {
            for branch in Branch::BOTH {
                states.extend(
                    solve_general(&case.params, &case.qn(n, branch), DEFAULT_TOL)
                        .unwrap()
                        .states,
                );
            }
        }
    }
    states.push(running_example());
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for st in &states {
        let rf = RadialFunction::from_state(st)
            .unwrap()
            .normalize(1e-10)
            .unwrap();
        let peak = rf.peak();
        let max_res = (0..100)
            .map(|i| rf.ode_residual_at(0.1 + 5.9 * f64::from(i) / 99.0).unwrap())
            .fold(0.0, f64::max)
            / peak;
        worst = worst.max(max_res);
        if max_res >= 1e-7 {
            failures.push(format!(
                "n={} ml={} s={} γ={}: {max_res:e}",
                st.qn.n,
                st.qn.m_l,
                st.qn.s.sign(),
                st.derived.gamma
            ));
        }
    }
    let pass = failures.is_empty();
    let detail = format!("{} states, worst residual/peak {worst:.2e}", states.len());
    assert!(
        report(6, pass, &detail, start.elapsed(), Duration::from_secs(1)),
        "{failures:#?}"
    );
}

#[test]
fn criterion_7_boundary_and_normalization() {
    let start = Instant::now();
    let mut states = oracle_panel();
    for n in [1, 2] {
        for case in solvable_cases(70 + u64::from(n), n, 25) {
            states.extend(
                solve_general(&case.params, &case.qn(n, Branch::Positive), DEFAULT_TOL)
                    .unwrap()
                    .states,
            );
        }
    }
    states.push(running_example());

    let mut failures = Vec::new();
    let (mut worst_origin, mut worst_tail, mut worst_norm) = (0.0f64, 0.0f64, 0.0f64);
    for st in &states {
        let rf = RadialFunction::from_state(st)
            .unwrap()
            .normalize(1e-10)
            .unwrap();
        let peak = rf.peak();
        let origin = rf.radial_value(1e-6).abs() / peak;
        let tail = rf.radial_value(20.0).abs() / peak;
        let norm = (rf.norm_squared(1e-12).unwrap() - 1.0).abs();
        worst_origin = worst_origin.max(origin);
        worst_tail = worst_tail.max(tail);
        worst_norm = worst_norm.max(norm);
        if origin >= 1e-3 || tail >= 1e-12 || norm > 1e-8 {
            failures.push(format!(
                "n={} ml={} s={} exponent {:.4}: |φ(1e-6)|/peak {origin:.2e}, |φ(20)|/peak {tail:.2e}, |‖φ‖²−1| {norm:.2e}",
                st.qn.n,
                st.qn.m_l,
                st.qn.s.sign(),
                rf.exponent
            ));
        }
    }
    let pass = failures.is_empty();
    let detail = format!(
        "{} states, {} failing; worst |φ(1e-6)|/peak {worst_origin:.2e}, |φ(20)|/peak {worst_tail:.2e}, |‖φ‖²−1| {worst_norm:.2e}",
        states.len(),
        failures.len()
    );
    let ok = report(7, pass, &detail, start.elapsed(), Duration::from_secs(2));
    for f in &failures {
        println!("  {f}");
    }
    assert!(ok, "{failures:#?}");
}

#[test]
fn criterion_8_recurrence_fidelity() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for _ in 0..1000 {
        let a = rng.gen_range(-10.0..10.0);
        let delta = rng.gen_range(0.01..10.0);
        let eps = rng.gen_range(-10.0..20.0);
        let c = heun::coefficients(HeunParams::new(a, delta, eps).unwrap(), 3).coeffs;
        let a1 = -a / delta;
        let a2 = (a * a - delta * eps) / (2.0 * delta * (1.0 + delta));
        let a3 = -(a * a2 - (2.0 - eps) * a1) / (3.0 * (2.0 + delta));
        // error measured against the size of the terms that cancel
        let scale2 = (a * a + (delta * eps).abs()) / (2.0 * delta * (1.0 + delta));
        let scale3 = ((a * a2).abs() + ((2.0 - eps) * a1).abs()) / (3.0 * (2.0 + delta));
        let errs = [
            rel(c[1], a1),
            (c[2] - a2).abs() / scale2,
            (c[3] - a3).abs() / scale3.max(f64::MIN_POSITIVE),
        ];
        let err = errs.iter().copied().fold(0.0, f64::max);
        worst = worst.max(err);
        if err > 1e-14 {
            failures.push(format!("Ā={a} δ={delta} ℰ={eps}: {errs:?}"));
        }
    }
    let mut odd_nonzero = 0;
    for _ in 0..100 {
        let params =
            HeunParams::new(0.0, rng.gen_range(0.01..10.0), rng.gen_range(-10.0..40.0)).unwrap();
        let c = heun::coefficients(params, 40).coeffs;
        odd_nonzero += c.iter().skip(1).step_by(2).filter(|v| **v != 0.0).count();
    }
    let pass = failures.is_empty() && odd_nonzero == 0;
    let detail = format!(
        "1000 triples, worst error {worst:.2e}; {odd_nonzero} nonzero odd coefficients at Ā = 0"
    );
    assert!(
        report(8, pass, &detail, start.elapsed(), Duration::from_secs(1)),
        "{failures:#?}"
    );
}
