//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any fails.

mod common;

use std::f64::consts::{FRAC_PI_2, PI};
use std::time::{Duration, Instant};

use common::*;
use rand::{rngs::StdRng, Rng, SeedableRng};
use robin_dce::general::{spectrum_general, GeneralSpectrumRequest};
use robin_dce::kinematics::{DampedCosineMotion, MotionSpectrum};
use robin_dce::rates::{angular_table, frequency_spectrum, rate_ratio, ratio_minimum, total_rate, MINIMUM_SEARCH};
use robin_dce::spectrum::{f_tilde, f_tilde_dirichlet, f_tilde_neumann, theta_cutoff, DimensionlessPoint, RobinCondition};
use robin_dce::{Execution, QuadratureConfig};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn cfg() -> QuadratureConfig {
    QuadratureConfig::default()
}

fn bc_of(beta: Beta) -> RobinCondition {
    match beta {
        Some(b) => RobinCondition::from_gamma(b).unwrap(),
        None => RobinCondition::Neumann,
    }
}

fn ft(alpha: f64, beta: f64, theta: f64) -> f64 {
    f_tilde(&DimensionlessPoint::new(alpha, beta, theta).unwrap())
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let r = rate_ratio(&RobinCondition::Neumann, &cfg()).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    ensure((r / 11.0 - 1.0).abs() <= 0.05, format!("ratio {r} not within 5% of 11"))?;
    ensure(elapsed < Duration::from_secs(10), format!("took {elapsed:?}"))?;
    Ok(format!("N/D ratio = {r:.10} in {:.2?}", elapsed))
}

fn criterion_2() -> Outcome {
    let m = ratio_minimum(MINIMUM_SEARCH.0, MINIMUM_SEARCH.1, &cfg(), Execution::Parallel).map_err(|e| e.to_string())?;
    ensure((1.5..=2.5).contains(&m.beta), format!("beta* = {} outside [1.5, 2.5]", m.beta))?;
    ensure(m.ratio < 0.5, format!("ratio* = {} not < 0.5", m.ratio))?;
    ensure(rel(m.ratio, RATIO_STAR_RIEMANN) <= 1e-6, format!("ratio* = {} vs frozen {RATIO_STAR_RIEMANN}", m.ratio))?;
    ensure(rel(m.beta, BETA_STAR) <= 1e-4, format!("beta* = {} vs frozen {BETA_STAR}", m.beta))?;
    Ok(format!("beta* = {:.6}, ratio* = {:.10}", m.beta, m.ratio))
}

fn criterion_3() -> Outcome {
    let c = cfg();
    let ratio = |bc: RobinCondition| rate_ratio(&bc, &c).map_err(|e| e.to_string());
    let at_star = ratio(RobinCondition::finite(BETA_STAR).unwrap())?;
    let at_1000 = ratio(RobinCondition::finite(1e3).unwrap())?;
    let neumann = ratio(RobinCondition::Neumann)?;
    ensure(at_star < 1.0 && at_star < at_1000, format!("not dipping: {at_star} vs {at_1000}"))?;
    ensure(rel(at_1000, neumann) <= 0.02, format!("ratio(1e3) = {at_1000} vs Neumann {neumann}"))?;
    ensure(rel(at_1000, RATIO_1000_RIEMANN) <= 1e-6, format!("ratio(1e3) = {at_1000} vs frozen {RATIO_1000_RIEMANN}"))?;
    Ok(format!("ratio(beta*) = {at_star:.6}, ratio(1e3) = {at_1000:.6}, Neumann = {neumann:.6}"))
}

fn criterion_4() -> Outcome {
    let mut worst: f64 = 0.0;
    for beta in [Some(0.0), Some(1.0), Some(2.0), Some(5.0), None] {
        let bc = bc_of(beta);
        for alpha in [0.1, 0.2, 0.3, 0.4, 0.45] {
            let a = frequency_spectrum(alpha, &bc, &cfg()).map_err(|e| e.to_string())?;
            let b = frequency_spectrum(1.0 - alpha, &bc, &cfg()).map_err(|e| e.to_string())?;
            let d = (a - b).abs() / a;
            ensure(d <= 0.01, format!("{bc} alpha={alpha}: {a} vs {b}"))?;
            worst = worst.max(d);
        }
    }
    Ok(format!("max relative asymmetry {worst:.2e}"))
}

fn criterion_5() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let mut checked = 0;
    for alpha in [0.6, 0.75, 0.9] {
        let edge = theta_cutoff(alpha).map_err(|e| e.to_string())?;
        for _ in 0..1000 {
            let theta = rng.gen_range(edge..=FRAC_PI_2);
            if theta == edge {
                continue;
            }
            let beta = rng.gen_range(0.0..10.0);
            let v = ft(alpha, beta, theta);
            ensure(v == 0.0, format!("F~({alpha}, {beta}, {theta}) = {v} beyond the cone"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} samples outside the cone are exactly zero"))
}

fn criterion_6() -> Outcome {
    let mut worst_d: f64 = 0.0;
    let mut worst_n: f64 = 0.0;
    for i in 0..50 {
        let alpha = 0.02 * (i as f64 + 0.5);
        for j in 0..50 {
            let theta = FRAC_PI_2 * j as f64 / 49.0;
            let diff = (ft(alpha, 1e-8, theta) - f_tilde_dirichlet(alpha, theta)).abs();
            ensure(diff <= 1e-10, format!("Dirichlet limit off by {diff} at ({alpha}, {theta})"))?;
            worst_d = worst_d.max(diff);

            // Away from grazing and from the cone edge, where the limits do not commute.
            let s = theta.sin();
            let d = (1.0 - alpha).powi(2) - (alpha * s).powi(2);
            if d < 0.05 || theta > FRAC_PI_2 - 0.2 {
                continue;
            }
            let n = f_tilde_neumann(alpha, theta).map_err(|e| e.to_string())?;
            let r = rel(ft(alpha, 1e4, theta), n);
            ensure(r <= 0.01, format!("Neumann limit off by {r} at ({alpha}, {theta})"))?;
            worst_n = worst_n.max(r);
        }
    }
    Ok(format!("Dirichlet max abs diff {worst_d:.1e}, Neumann max rel diff {worst_n:.1e}"))
}

fn criterion_7() -> Outcome {
    for beta in [1.0, 10.0, 1e3] {
        let v = ft(0.25, beta, FRAC_PI_2);
        ensure(v == 0.0, format!("F~(0.25, {beta}, pi/2) = {v}"))?;
    }
    let n = f_tilde_neumann(0.25, FRAC_PI_2).map_err(|e| e.to_string())?;
    ensure((n - 0.0220971).abs() <= 1e-7, format!("Neumann grazing value {n}"))?;
    Ok(format!("finite beta gives 0 at grazing, Neumann gives {n:.7}"))
}

fn criterion_8() -> Outcome {
    let grid: Vec<f64> = (0..200).map(|i| FRAC_PI_2 * i as f64 / 199.0).collect();
    let curve = |gamma: f64| -> Result<Vec<f64>, String> {
        let bc = RobinCondition::from_gamma(gamma).unwrap();
        Ok(angular_table(&grid, 0.5, 1.0, &bc, Execution::Parallel).map_err(|e| e.to_string())?.values)
    };
    let argmax = |v: &[f64]| (0..v.len()).fold(0, |b, i| if v[i] > v[b] { i } else { b });
    let g0 = curve(0.0)?;
    let g1 = curve(1.0)?;
    let g2 = curve(2.0)?;
    ensure(argmax(&g0) == 0 && argmax(&g1) == 0, "gamma in {0, 1} not maximal at theta = 0")?;
    ensure(g2[0] == 0.0, format!("gamma = 2 at theta = 0 is {}", g2[0]))?;
    let peak = grid[argmax(&g2)];
    ensure((0.8..=1.2).contains(&peak), format!("gamma = 2 peak at {peak}"))?;
    for (i, (&a, &b)) in g2.iter().zip(&g0).enumerate() {
        let below = if b > 0.0 { a < b } else { a <= b };
        ensure(below, format!("gamma = 2 not below gamma = 0 at theta = {}", grid[i]))?;
    }
    Ok(format!("gamma = 2 peaks at theta = {peak:.4} rad"))
}

fn criterion_9() -> Outcome {
    let f = frequency_spectrum(0.5, &RobinCondition::Dirichlet, &cfg()).map_err(|e| e.to_string())?;
    ensure((f - PI / 32.0).abs() <= 1e-9, format!("F(0.5, Dirichlet) = {f}"))?;
    let v = ft(0.5, 0.0, 0.0);
    ensure((v - 0.0625).abs() <= 1e-15, format!("F~(0.5, 0, 0) = {v}"))?;
    Ok(format!("F(0.5, D) - pi/32 = {:.1e}, F~(0.5, 0, 0) = {v}", f - PI / 32.0))
}

fn general(motion: MotionSpectrum) -> Result<f64, String> {
    spectrum_general(&GeneralSpectrumRequest {
        motion,
        bc: RobinCondition::finite(1.0).unwrap(),
        omega: 0.5,
        theta: 0.3,
        cfg: cfg(),
    })
    .map_err(|e| e.to_string())
}

fn criterion_10() -> Outcome {
    let mut devs = Vec::new();
    for q in [20.0, 50.0, 100.0, 200.0] {
        let m = DampedCosineMotion::new(0.1, 1.0, q).unwrap();
        let line = MotionSpectrum::MonochromaticLine(m.monochromatic_line().map_err(|e| e.to_string())?);
        let l = general(MotionSpectrum::ClosedFormLorentzian(m))?;
        devs.push(rel(l, general(line)?));
    }
    ensure(devs[3] < 0.02, format!("deviation at w0 tau = 200 is {}", devs[3]))?;
    ensure(devs.windows(2).all(|w| w[1] < w[0]), format!("deviations not decreasing: {devs:?}"))?;
    Ok(format!("deviations {:?}", devs.iter().map(|d| format!("{d:.2e}")).collect::<Vec<_>>()))
}

/// Midpoint sum of the partner-frequency integral of the general spectrum,
/// mapped to `t in (0, 1)` via `w' = a + (t / (1 - t))^2`.
fn general_oracle(m: &DampedCosineMotion, gamma: f64, omega: f64, theta: f64, n: usize) -> f64 {
    let a = omega * theta.sin();
    let g2 = gamma * gamma;
    let integrand = |t: f64| {
        let s = t / (1.0 - t);
        let wp = a + s * s;
        let jac = 2.0 * s / ((1.0 - t) * (1.0 - t));
        let kz2 = s * s * (2.0 * a + s * s);
        let q = m.fourier(omega + wp);
        let bracket = 1.0 - g2 * a * a - g2 * omega * wp;
        jac * kz2.sqrt() * q * q / (1.0 + g2 * kz2) * bracket * bracket / (2.0 * PI)
    };
    let integral = robin_dce::quadrature::riemann_oracle(integrand, 0.0, 1.0, n);
    let kz = omega * theta.cos();
    4.0 * omega * kz * kz / (1.0 + g2 * kz * kz) * integral / (8.0 * PI.powi(3))
}

fn criterion_11() -> Outcome {
    const N: usize = 1_000_000;
    const N_AXIS: usize = 10_000;
    let mut worst: f64 = 0.0;
    let mut check = |what: String, value: f64, oracle: f64| -> Result<(), String> {
        let r = rel(value, oracle);
        worst = worst.max(r);
        ensure(r <= 1e-6, format!("{what}: {value} vs oracle {oracle}"))
    };

    let c = cfg();
    for beta in [Some(0.0), Some(1.0), Some(2.0), Some(5.0), Some(1e3), None] {
        let bc = bc_of(beta);
        for alpha in [0.1, 0.3, 0.45, 0.5, 0.55, 0.7, 0.9] {
            if beta.is_none() && alpha == 0.5 {
                continue;
            }
            let v = frequency_spectrum(alpha, &bc, &c).map_err(|e| e.to_string())?;
            check(format!("F({alpha}, {bc})"), v, frequency_oracle(alpha, beta, N))?;
        }
    }

    for beta in [Some(0.0), Some(BETA_STAR), Some(1e3), None] {
        let bc = bc_of(beta);
        let v = total_rate(&bc, &c).map_err(|e| e.to_string())?;
        let oracle = total_oracle(beta, N_AXIS, N_AXIS);
        check(format!("total rate ({bc})"), v, oracle)?;
        if beta == Some(0.0) {
            ensure(rel(oracle, F_DIRICHLET_RIEMANN) <= 1e-12, format!("oracle drifted: {oracle}"))?;
        }
    }

    for q in [20.0, 200.0] {
        let m = DampedCosineMotion::new(0.1, 1.0, q).unwrap();
        let v = general(MotionSpectrum::ClosedFormLorentzian(m))?;
        check(format!("general spectrum (w0 tau = {q})"), v, general_oracle(&m, 1.0, 0.5, 0.3, N))?;
    }
    Ok(format!("max relative deviation from midpoint oracles {worst:.2e}"))
}

fn main() {
    let criteria: [Criterion; 11] = [
        ("Neumann/Dirichlet factor", criterion_1),
        ("suppression location", criterion_2),
        ("non-monotonic ratio curve", criterion_3),
        ("spectrum symmetry", criterion_4),
        ("emission cone", criterion_5),
        ("limit recovery", criterion_6),
        ("non-commuting grazing limits", criterion_7),
        ("angular-spectrum shape", criterion_8),
        ("closed-form spot values", criterion_9),
        ("general-motion convergence", criterion_10),
        ("quadrature oracle", criterion_11),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {:>2} ({name}): {detail} [{secs:.1}s]", i + 1),
            Err(detail) => {
                failures += 1;
                println!("FAIL criterion {:>2} ({name}): {detail} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures > 0 {
        std::process::exit(1);
    }
}
