//! End-to-end acceptance checks. Runs without the libtest harness so that every
//! criterion prints one status line; the process fails if any criterion fails.

use std::f64::consts::PI;
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use oscillabound::cayleylab::{
    clique_search, config_search, coloring_threshold, parabola_triangle_forces_degenerate,
    periodic_coloring_verify, upper_density_estimate, BoxSet, CliqueInstance, ConfigOutcome,
    CurveOracle,
};
use oscillabound::padic::{
    certified_bound_padic, lambda_lattice, mu_hat_padic_exact, sphere_character_sum, PadicScalar,
    PadicWindow,
};
use oscillabound::polycore::{
    high_frequency_betas, low_frequency_alphas, phi_from_frequency, rational_pow,
    vandermonde_interpolation, CurveFamily, ExpPoly, RationalPoly,
};
use oscillabound::realosc::{
    certified_constant_real, derivative_level_set, merge_intervals, mu_hat_real,
    mu_hat_real_estimate,
    oscillatory_integral, superlevel_decompose, vdc_bound, Window, DEFAULT_TOL,
};
use oscillabound::spectral::{
    hoffman_chromatic_bound, hoffman_ratio_bound, independence_pipeline, operator_ratio_bound,
    Domain, MinimizeOptions,
};
use oscillabound::{BigInt, BigRational, Error};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn fam(lists: &[&[i64]]) -> CurveFamily {
    CurveFamily::from_i64(lists).unwrap()
}

fn real_families() -> Vec<(&'static str, CurveFamily)> {
    vec![
        ("(x, x^2)", fam(&[&[0, 1], &[0, 0, 1]])),
        ("(x, x^3)", fam(&[&[0, 1], &[0, 0, 0, 1]])),
        ("(x^2, x^3, x^5)", fam(&[&[0, 0, 1], &[0, 0, 0, 1], &[0, 0, 0, 0, 0, 1]])),
    ]
}

fn configs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn normalization() -> Check {
    for (name, f) in real_families() {
        let w = Window::new(1.0, 3.0).unwrap();
        let v = mu_hat_real(&f, &w, &vec![0.0; f.m()], DEFAULT_TOL).map_err(|e| e.to_string())?;
        ensure!((v - 1.0).abs() <= 1e-12, "real {name}: mu_hat(0) = {v}");
    }
    let f = fam(&[&[0, 1], &[0, 0, 1]]);
    for p in [2, 3, 5] {
        let w = PadicWindow::new(p, 1, 3).unwrap();
        let m = mu_hat_padic_exact(&f, &w, &[q(0, 1), q(0, 1)]).map_err(|e| e.to_string())?;
        ensure!(m.exact == Some(BigRational::one()), "p = {p}: mu_hat(0) = {:?}", m.exact);
    }
    Ok("real 1 within 1e-12, p-adic exactly 1".into())
}

/// `N/p^e` with `N` prime to `p` (or zero), for the brute-force oracle.
fn split_power(x: &BigRational, p: u64) -> (BigInt, i64) {
    if x.is_zero() {
        return (BigInt::zero(), 0);
    }
    let pb = BigInt::from(p);
    let (mut n, mut d) = (x.numer().clone(), x.denom().clone());
    let mut e = 0i64;
    while (&d % &pb).is_zero() {
        d /= &pb;
        e += 1;
    }
    while (&n % &pb).is_zero() {
        n /= &pb;
        e -= 1;
    }
    assert!(d.is_one() || d == BigInt::from(-1), "oracle inputs have p-power denominators");
    (n * d, e)
}

fn pow_u128(p: u64, e: u32) -> u128 {
    (p as u128).pow(e)
}

/// `∫_{p^{-k} Z_p} ψ(h(s)) ds` by summing `x mod p^K`, valid when every `h_j p^{-jk}` with
/// `j >= 1` becomes integral after multiplying by `p^K`.
fn brute_ball(h: &RationalPoly, k: i64, kk: u32, p: u64) -> (f64, f64) {
    let scaled: Vec<(BigInt, i64)> = h
        .coeffs()
        .iter()
        .enumerate()
        .map(|(j, c)| split_power(&(c * rational_pow(p, -(j as i64) * k)), p))
        .collect();
    let d = scaled.iter().map(|(_, e)| *e).max().unwrap_or(0).max(0) as u32;
    let modulus = pow_u128(p, d);
    let m_big = BigInt::from(modulus);
    // only positive powers of p in the denominator survive ψ
    let coeffs: Vec<u128> = scaled
        .iter()
        .map(|(n, e)| {
            if *e <= 0 {
                return 0;
            }
            let r = (n * BigInt::from(p).pow((d as i64 - e) as u32)).mod_floor(&m_big);
            r.to_u128().unwrap()
        })
        .collect();
    let count = pow_u128(p, kk);
    let (mut re, mut im) = (0.0, 0.0);
    for x in 0..count {
        let xm = x % modulus;
        let mut acc: u128 = 0;
        for c in coeffs.iter().rev() {
            acc = (acc * xm + c) % modulus;
        }
        let theta = 2.0 * PI * acc as f64 / modulus as f64;
        re += theta.cos();
        im += theta.sin();
    }
    let w = (p as f64).powi(k as i32) / count as f64;
    (re * w, im * w)
}

fn random_unit(rng: &mut ChaCha8Rng, p: u64) -> i64 {
    loop {
        let u = rng.gen_range(1..(p * p) as i64);
        if u % p as i64 != 0 {
            return if rng.gen_bool(0.5) { u } else { -u };
        }
    }
}

fn random_padic(rng: &mut ChaCha8Rng, p: u64) -> BigRational {
    q(random_unit(rng, p), 1) * rational_pow(p, rng.gen_range(-2..=2))
}

fn padic_oracle() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut resampled = 0;
    let mut worst = 0.0f64;
    for p in [2u64, 3, 5] {
        let mut done = 0;
        while done < 100 {
            let deg = rng.gen_range(1..=3usize);
            let coeffs: Vec<BigRational> = (0..=deg)
                .map(|j| {
                    if j < deg && rng.gen_bool(0.25) {
                        BigRational::zero()
                    } else {
                        random_padic(&mut rng, p)
                    }
                })
                .collect();
            let f = RationalPoly::new(coeffs);
            let lambda = random_padic(&mut rng, p);
            let r: i64 = rng.gen_range(-2..=3);
            let kk = r + deg as i64 + 3;
            let h = f.scale(&lambda);
            // the residue sum is exact only when p^K absorbs every denominator on the ball
            let need = h
                .coeffs()
                .iter()
                .enumerate()
                .skip(1)
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| split_power(&(c * rational_pow(p, -(j as i64) * r)), p).1)
                .max()
                .unwrap_or(0);
            if kk < need {
                resampled += 1;
                continue;
            }
            let kk = kk as u32;
            let (o1, o2) = (brute_ball(&h, r, kk, p), brute_ball(&h, r - 1, kk, p));
            let oracle = (o1.0 - o2.0, o1.1 - o2.1);
            let scalar = PadicScalar::from_rational(&lambda, p).unwrap();
            let got = sphere_character_sum(&f, &scalar, r).map_err(|e| e.to_string())?;
            let err = (got.re - oracle.0).hypot(got.im - oracle.1);
            worst = worst.max(err);
            ensure!(
                err <= 1e-9,
                "p = {p}, f = {:?}, λ = {lambda}, r = {r}: {got} vs {oracle:?}",
                f.to_strings()
            );
            done += 1;
        }
    }
    Ok(format!("300 instances, max deviation {worst:.1e}, {resampled} resampled"))
}

fn worked_value() -> Check {
    let f = fam(&[&[0, 1], &[0, 0, 1]]);
    let w = PadicWindow::new(3, 1, 2).unwrap();
    let m = mu_hat_padic_exact(&f, &w, &[q(3, 1), q(0, 1)]).map_err(|e| e.to_string())?;
    ensure!(m.exact == Some(q(1, 4)), "got {:?}", m.exact);
    Ok("mu_hat(3, 0) = 1/4".into())
}

fn padic_floor() -> Check {
    let f = fam(&[&[0, 1], &[0, 0, 1]]);
    let w = PadicWindow::new(3, 1, 4).unwrap();
    let bound = certified_bound_padic(&f, &w).map_err(|e| e.to_string())?;
    let floor = bound.floor_rational();
    ensure!(floor == q(-36, 1), "floor {floor}");
    let lattice = lambda_lattice(3, 2);
    let mut min = f64::INFINITY;
    for l in &lattice {
        let m = mu_hat_padic_exact(&f, &w, l).map_err(|e| e.to_string())?;
        if let Some(x) = &m.exact {
            ensure!(x >= &floor, "exact value {x} below the floor at {l:?}");
        }
        ensure!(m.value >= -36.0, "value {} below the floor at {l:?}", m.value);
        min = min.min(m.value);
    }
    Ok(format!("{} lattice points, min {min:.6} >= -36", lattice.len()))
}

fn random_exppoly(rng: &mut ChaCha8Rng, n: u32) -> ExpPoly {
    ExpPoly::new((0..=n).map(|j| {
        let c = 10f64.powf(rng.gen_range(-1.5..1.5)) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        (j, if j == 0 || j == n || rng.gen_bool(0.8) { c } else { 0.0 })
    }))
}

fn sup_abs(phi: &ExpPoly, w: &Window) -> f64 {
    (0..=400)
        .map(|i| phi.eval(w.a + (w.t - w.a) * i as f64 / 400.0).abs())
        .fold(0.0, f64::max)
}

fn vdc_validation() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut done = 0;
    let mut slack = f64::INFINITY;
    while done < 200 {
        let n = rng.gen_range(1..=4);
        let phi = random_exppoly(&mut rng, n);
        let a = rng.gen_range(0.0..1.0);
        let w = Window::new(a, a + rng.gen_range(0.3..2.5)).unwrap();
        let k = rng.gen_range(1..=n.min(3));
        let dk = phi.derivative(k);
        let eta = sup_abs(&dk, &w) * rng.gen_range(0.05..0.9);
        if !(eta > 0.0) {
            continue;
        }
        let set = derivative_level_set(&phi, k, eta, &w).map_err(|e| e.to_string())?;
        let fails = set.witness_failures(&phi, 64);
        ensure!(fails.is_empty(), "witness failures {fails:?}");
        let Some(iv) = set.intervals.get(rng.gen_range(0..set.len().max(1))) else {
            continue;
        };
        ensure!(iv.k == k && iv.monotone, "bad witness {iv:?}");
        let osc = oscillatory_integral(&phi, iv.lo, iv.hi, 1e-10).map_err(|e| e.to_string())?;
        let bound = vdc_bound(k, 2.0 * PI * iv.eta);
        let lhs = osc.value.norm();
        ensure!(
            lhs <= bound + 1e-6,
            "k = {k}, η = {}, [{}, {}]: |I| = {lhs} > {bound}",
            iv.eta,
            iv.lo,
            iv.hi
        );
        slack = slack.min(bound - lhs);
        done += 1;
    }
    Ok(format!("200 intervals, min slack {slack:.3e}"))
}

fn log_uniform(rng: &mut ChaCha8Rng) -> f64 {
    let mag = 10f64.powf(rng.gen_range(-6.0..6.0));
    if rng.gen_bool(0.5) {
        mag
    } else {
        -mag
    }
}

fn real_floor() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut total = 0;
    let mut lowest = f64::INFINITY;
    let (mut coarse, mut worst_error) = (0, 0.0f64);
    for (name, f) in real_families() {
        let c = certified_constant_real(&f).map_err(|e| e.to_string())?.c;
        let windows: Vec<Window> = [1.0, 5.0, 25.0]
            .iter()
            .map(|len| Window::new(1.0, 1.0 + len).unwrap())
            .collect();
        for _ in 0..10_000 {
            let lambda: Vec<f64> = (0..f.m()).map(|_| log_uniform(&mut rng)).collect();
            for w in &windows {
                let floor = -c / w.length();
                // when f64 phases cannot reach `tol`, the enclosure `estimate ± error` still decides
                let (v, err) = match mu_hat_real_estimate(&f, w, &lambda, DEFAULT_TOL) {
                    Ok(m) => (m.value, m.error),
                    Err(Error::NonConvergence { estimate, error }) => {
                        coarse += 1;
                        worst_error = worst_error.max(error);
                        (estimate, error)
                    }
                    Err(e) => return Err(format!("{name}, λ = {lambda:?}, {w:?}: {e}")),
                };
                ensure!(v - err >= floor - 1e-6, "{name}, λ = {lambda:?}: {v} ± {err} < {floor}");
                lowest = lowest.min(v);
                total += 1;
            }
        }
    }
    Ok(format!(
        "{total} evaluations, zero violations, lowest value {lowest:.4}; \
         {coarse} above tolerance with error <= {worst_error:.1e}"
    ))
}

fn interpolation() -> Check {
    for n in 1..=12usize {
        let check = |sol: &[BigRational], target: &dyn Fn(usize) -> BigRational| {
            (1..=n).all(|j| {
                let jj = BigRational::from_integer((j as i64).into());
                let mut pow = jj.clone();
                let mut s = BigRational::zero();
                for c in sol {
                    s += c * &pow;
                    pow *= &jj;
                }
                s == target(j)
            })
        };
        ensure!(check(&low_frequency_alphas(n), &|_| BigRational::one()), "alphas n = {n}");
        for ell in 1..=n {
            let b = high_frequency_betas(n, ell);
            ensure!(
                check(&b, &|j| if j == ell { BigRational::one() } else { BigRational::zero() }),
                "betas n = {n}, ell = {ell}"
            );
        }
        let target: Vec<BigRational> = (1..=n).map(|j| q(j as i64 * j as i64 - 3, 7)).collect();
        let sol = vandermonde_interpolation(n, &target);
        ensure!(check(&sol, &|j| target[j - 1].clone()), "general target n = {n}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for (_, f) in real_families() {
        let n = f.n();
        let alphas: Vec<f64> = low_frequency_alphas(n).iter().map(|x| x.to_f64().unwrap()).collect();
        let betas: Vec<Vec<f64>> = (1..=n)
            .map(|l| high_frequency_betas(n, l).iter().map(|x| x.to_f64().unwrap()).collect())
            .collect();
        for _ in 0..100 {
            let lambda: Vec<f64> = (0..f.m()).map(|_| rng.gen_range(-5.0..5.0)).collect();
            let t = rng.gen_range(-1.0..1.5);
            let phi = phi_from_frequency(&f, &lambda).unwrap();
            let d = phi.derivatives_at(t, n);
            let scale = (1..=n).map(|k| d[k].abs()).fold(1.0, f64::max);
            // Σ α_k Φ^{(k)} = Φ - Φ(-∞)
            let lhs: f64 = alphas.iter().zip(&d[1..]).map(|(a, x)| a * x).sum();
            let r1 = (lhs - (d[0] - phi.coeff(0))).abs() / scale;
            worst = worst.max(r1);
            // Σ β^{(ℓ)}_k Φ^{(k)} = c_ℓ e^{ℓt}
            for (l, b) in betas.iter().enumerate() {
                let lhs: f64 = b.iter().zip(&d[1..]).map(|(a, x)| a * x).sum();
                let j = l as u32 + 1;
                let r2 = (lhs - phi.coeff(j) * (j as f64 * t).exp()).abs() / scale;
                worst = worst.max(r2);
            }
        }
    }
    ensure!(worst <= 1e-8, "reconstruction residual {worst:e}");
    Ok(format!("exact for n <= 12, reconstruction residual {worst:.1e}"))
}

fn decomposition_caps() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut max_super, mut max_merged) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let n = rng.gen_range(1..=5u32);
        let phi = random_exppoly(&mut rng, n);
        let a = rng.gen_range(-1.0..1.0);
        let w = Window::new(a, a + rng.gen_range(0.5..3.0)).unwrap();
        let level = sup_abs(&phi, &w) * rng.gen_range(0.01..0.95);
        if level > 0.0 {
            let sup = superlevel_decompose(&phi, level, &w).map_err(|e| e.to_string())?;
            ensure!(sup.len() <= 3 * n as usize, "{} superlevel intervals for n = {n}", sup.len());
            max_super = max_super.max(sup.len() as f64 / (3 * n) as f64);
        }
        let mut sets = Vec::new();
        for k in 1..=n {
            let eta = sup_abs(&phi.derivative(k), &w) * rng.gen_range(0.01..0.95);
            if eta > 0.0 {
                let s = derivative_level_set(&phi, k, eta, &w).map_err(|e| e.to_string())?;
                sets.push(s.intervals.iter().map(|i| (i.lo, i.hi)).collect());
            }
        }
        let merged = merge_intervals(&sets);
        let cap = 2 * (n as usize).pow(4);
        ensure!(merged.len() <= cap, "{} merged intervals > {cap}", merged.len());
        for piece in &merged {
            let (lo, hi) = sets[piece.set][piece.source];
            ensure!(lo <= piece.lo && piece.hi <= hi, "piece escapes its source");
        }
        max_merged = max_merged.max(merged.len() as f64 / cap as f64);
    }
    Ok(format!(
        "100 instances, peak use {:.0}% of 3n and {:.0}% of 2n^4",
        100.0 * max_super,
        100.0 * max_merged
    ))
}

fn spectral_formulas() -> Check {
    let m = -1.0 / 3.0;
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-15;
    let r = hoffman_ratio_bound(m).map_err(|e| e.to_string())?;
    ensure!(close(r, 0.25), "ratio {r}");
    let o = operator_ratio_bound(m, 1.0, 0.0).map_err(|e| e.to_string())?;
    ensure!(close(o, 0.25), "operator {o}");
    let c = hoffman_chromatic_bound(m, 1.0).map_err(|e| e.to_string())?;
    ensure!(close(c, 4.0), "chromatic {c}");
    let guards = [
        hoffman_ratio_bound(0.0),
        hoffman_ratio_bound(0.5),
        operator_ratio_bound(m, -1.0, 0.0),
        operator_ratio_bound(m, 1.0, -0.1),
        hoffman_chromatic_bound(0.1, 1.0),
        hoffman_chromatic_bound(m, 0.0),
    ];
    ensure!(
        guards.iter().all(|g| matches!(g, Err(Error::Hypothesis(_)))),
        "guards: {guards:?}"
    );
    Ok("1/4, 1/4, 4 and six guard errors".into())
}

fn pipeline_consistency() -> Check {
    let options = MinimizeOptions {
        budget: 4000,
        seed: 10,
        ..MinimizeOptions::default()
    };
    let mut lines = Vec::new();
    for (name, f) in real_families() {
        for len in [1.0, 5.0] {
            let d = Domain::Real(Window::new(1.0, 1.0 + len).unwrap());
            let r = independence_pipeline(&f, &d, &options).map_err(|e| format!("{name}: {e}"))?;
            ensure!(
                r.empirical_minimum >= r.certified_floor,
                "{name}: {} < {}",
                r.empirical_minimum,
                r.certified_floor
            );
            lines.push(format!("{name} min {:.3}", r.empirical_minimum));
        }
    }
    let f = fam(&[&[0, 1], &[0, 0, 1]]);
    for t in [2, 4] {
        let d = Domain::Padic(PadicWindow::new(3, 1, t).unwrap());
        let r = independence_pipeline(&f, &d, &options).map_err(|e| format!("p-adic: {e}"))?;
        ensure!(r.empirical_minimum >= r.certified_floor, "p-adic T = {t}");
        lines.push(format!("Q_3 T={t} min {:.3}", r.empirical_minimum));
    }
    for cfg in ["pipeline_parabola.toml", "padic_pipeline.toml"] {
        let out = Command::new(env!("CARGO_BIN_EXE_oscillabound"))
            .arg("pipeline")
            .arg(configs_dir().join(cfg))
            .output()
            .map_err(|e| e.to_string())?;
        ensure!(out.status.code() == Some(0), "{cfg}: exit {:?}", out.status.code());
    }
    Ok(format!("{}; CLI exit 0", lines.join(", ")))
}

fn triangle_free() -> Check {
    let f = fam(&[&[0, 1], &[0, 0, 1]]);
    let oracle = CurveOracle::parametrized(f.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut edges = 0usize;
    for _ in 0..500 {
        // integer parameters make edges common: (0, 0) is adjacent to every point
        let integral = rng.gen_bool(0.5);
        let points: Vec<Vec<f64>> = (0..50)
            .map(|_| {
                let s: f64 = if integral { rng.gen_range(-10..=10) as f64 } else { rng.gen_range(-10.0..10.0) };
                vec![s, s * s]
            })
            .collect();
        let inst = CliqueInstance { points, oracle: oracle.clone() };
        let c = clique_search(&inst, 16).map_err(|e| e.to_string())?;
        ensure!(c.vertices.len() < 3, "clique of size {}", c.vertices.len());
        edges += c.vertices.len().saturating_sub(1);
    }
    // an integer triangle 0, u, u + w forces s r = 0 exactly
    for _ in 0..200 {
        let (s, r) = (q(rng.gen_range(-50..50), rng.gen_range(1..9)), q(rng.gen_range(-50..50), rng.gen_range(1..9)));
        ensure!(parabola_triangle_forces_degenerate(&s, &r), "oracle fails at {s}, {r}");
    }
    Ok(format!("500 samples of 50 points, largest clique <= 2 ({edges} samples with an edge)"))
}

fn coloring() -> Check {
    let f = |t: f64| 2.0 + (2.0 * PI * t).cos();
    let th = coloring_threshold(&f).map_err(|e| e.to_string())?;
    let r = periodic_coloring_verify(&f, th.min_n, 100_000, 12).map_err(|e| e.to_string())?;
    ensure!(r.violations == 0, "{} violations with n = {}", r.violations, r.n);
    Ok(format!("n = {}, 100000 edges, 0 violations", r.n))
}

fn configuration() -> Check {
    let f = fam(&[&[0, 1], &[0, 0, 1]]);
    let w = Window::new(1.0, 3.0).unwrap();
    let set = BoxSet::stripes(2, 0, 0.0, 3.0, 9.0).map_err(|e| e.to_string())?;
    let density = upper_density_estimate(&set, &[200.0]).map_err(|e| e.to_string())?;
    match config_search(&f, &w, &set, 0.01).map_err(|e| e.to_string())? {
        ConfigOutcome::Found { x1, x2, s, residual } => {
            ensure!(residual <= 1e-9, "residual {residual}");
            ensure!(set.contains(&x1) && set.contains(&x2), "endpoints outside the set");
            ensure!((1f64.exp()..=3f64.exp()).contains(&s), "s = {s} outside [e^a, e^T]");
            Ok(format!(
                "found at s = {s:.4}, residual {residual:.1e}, density {:.3}",
                density[0].estimate
            ))
        }
        ConfigOutcome::NotFound { scanned } => Err(format!("not found after {scanned} candidates")),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Check); 13] = [
        ("normalization", normalization),
        ("p-adic oracle equivalence", padic_oracle),
        ("worked p-adic value", worked_value),
        ("certified p-adic floor", padic_floor),
        ("van der Corput validation", vdc_validation),
        ("certified real floor", real_floor),
        ("interpolation identities", interpolation),
        ("decomposition caps", decomposition_caps),
        ("spectral formulas", spectral_formulas),
        ("pipeline consistency", pipeline_consistency),
        ("parabola triangle-freeness", triangle_free),
        ("coloring properness", coloring),
        ("configuration demo", configuration),
    ];
    let filter = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        if let Some(f) = &filter {
            if !name.contains(f.as_str()) {
                continue;
            }
        }
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {:>2} PASS {name} ({secs:.1} s): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.1} s): {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
