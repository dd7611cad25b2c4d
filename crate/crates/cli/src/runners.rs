//! The five experiment runners.

use crate::output::{fmt_float, json_path, write_csv, write_summary, Metadata};
use crate::{CliError, EigenstatesArgs, EvolveArgs, NnsdArgs, RdmSpectrumArgs, TheoryArgs};
use ktops_core::entanglement::{linear_entropy, schmidt_spectrum, von_neumann_entropy};
use ktops_core::histogram::{fraction_outside, Histogram};
use ktops_core::rmt::{
    gamma_factor, mean_linear_entropy, monte_carlo_mean_entropies, pooled_rdm_eigenvalues,
    EnsembleKind, MPDensity,
};
use ktops_core::spectral::{
    diagonalize_floquet, eigenstate_entanglement_average, nnsd_by_sectors, nnsd_from_angles,
    parity_operator, parity_sectors, pooled_eigenstate_schmidt_values, wigner_surmise_cdf,
    NnsdResult,
};
use ktops_core::spin::Spin;
use ktops_core::tops::{
    build_floquet, coherent_state, maximally_entangled_state, product_state, BipartiteState,
    TopConfig,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

type Result<T> = std::result::Result<T, CliError>;

fn parse_spin(j: f64, name: &str) -> Result<Spin> {
    Spin::new(j).map_err(|_| {
        CliError::Usage(format!("--{} = {} is not a positive half-integer spin", name, j))
    })
}

fn parse_ensemble(s: &str) -> Result<EnsembleKind> {
    s.parse::<EnsembleKind>().map_err(|e| CliError::Usage(e.to_string()))
}

fn check_cap(dim: usize, cap: usize) -> Result<()> {
    if dim > cap {
        Err(CliError::DimCap { dim, cap })
    } else {
        Ok(())
    }
}

pub fn run_evolve(args: &EvolveArgs) -> Result<()> {
    let j1 = parse_spin(args.j1, "j1")?;
    let j2 = parse_spin(args.j2, "j2")?;
    let cfg = TopConfig::new(j1, j2, args.k, args.epsilon, args.alpha1, args.alpha2)?;
    check_cap(cfg.total_dim(), args.dim_cap)?;
    let (n, m) = (cfg.n_dim(), cfg.m_dim());

    let psi0: BipartiteState<f64> = match args.initial.as_str() {
        "product" => {
            let v1 = coherent_state::<f64>(j1, args.theta, args.phi)?;
            let v2 = coherent_state::<f64>(j2, args.theta, args.phi)?;
            product_state(&v1.view(), &v2.view())?
        }
        "entangled" => maximally_entangled_state::<f64>(n, m)?,
        other => {
            return Err(CliError::Usage(format!(
                "--initial must be 'product' or 'entangled', got '{}'",
                other
            )))
        }
    };

    let plateau_start = args.plateau_start.unwrap_or(args.steps / 2);
    if plateau_start > args.steps {
        return Err(CliError::Usage(format!(
            "--plateau-start {} lies beyond --steps {}",
            plateau_start, args.steps
        )));
    }

    let u = build_floquet(&cfg)?;
    let mut series: Vec<(f64, f64)> = Vec::with_capacity(args.steps + 1);
    let mut renormalizations = 0usize;
    let mut current = psi0.amplitudes().clone();
    for _t in 0..=args.steps {
        let state = BipartiteState::new(n, m, current.clone())?;
        let spec = schmidt_spectrum(&state)?;
        series.push((von_neumann_entropy(&spec), linear_entropy(&spec)));
        let mut next = u.apply(&current.view());
        let norm: f64 = next.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            let inv = 1.0 / norm;
            next.map_inplace(|c| *c *= inv);
            renormalizations += 1;
        }
        current = next;
    }

    let window = &series[plateau_start..];
    let wn = window.len() as f64;
    let mean_sv = window.iter().map(|w| w.0).sum::<f64>() / wn;
    let mean_sr = window.iter().map(|w| w.1).sum::<f64>() / wn;
    let std_sv = (window.iter().map(|w| (w.0 - mean_sv).powi(2)).sum::<f64>() / wn).sqrt();
    let std_sr = (window.iter().map(|w| (w.1 - mean_sr).powi(2)).sum::<f64>() / wn).sqrt();

    let nf = n as f64;
    let mut meta = Metadata::new("evolve");
    meta.push("j1", j1);
    meta.push("j2", j2);
    meta.push_float("k", args.k);
    meta.push_float("epsilon", args.epsilon);
    meta.push_float("alpha1", args.alpha1);
    meta.push_float("alpha2", args.alpha2);
    meta.push("steps", args.steps);
    meta.push("initial", &args.initial);
    meta.push_float("theta", args.theta);
    meta.push_float("phi", args.phi);
    meta.push("plateau_start", plateau_start);
    meta.push("seed", args.seed);
    meta.push("n_dim", n);
    meta.push("m_dim", m);
    meta.push("renormalizations", renormalizations);
    meta.push_float("ref_ln_0.6n", (0.6 * nf).ln());
    meta.push_float("ref_ln_n", nf.ln());
    meta.push_float("ref_sr_saturation", 1.0 - 2.0 / nf);
    meta.push_float("ref_sr_max", 1.0 - 1.0 / nf);

    let rows = series.iter().enumerate().map(|(t, (sv, sr))| {
        vec![t.to_string(), fmt_float(*sv), fmt_float(*sr)]
    });
    write_csv(&args.out, &meta, &["t", "s_v", "s_r"], rows)?;
    write_summary(
        &args.out,
        json!({
            "metadata": meta.to_json(),
            "plateau": {
                "start": plateau_start,
                "mean_s_v": mean_sv,
                "std_s_v": std_sv,
                "mean_s_r": mean_sr,
                "std_s_r": std_sr,
            },
            "references": {
                "ln_0.6n": (0.6 * nf).ln(),
                "ln_n": nf.ln(),
                "sr_saturation": 1.0 - 2.0 / nf,
                "sr_max": 1.0 - 1.0 / nf,
            },
        }),
    )?;
    eprintln!(
        "evolve: plateau S_V = {:.4} +- {:.4} (ln(0.6N) = {:.4}), S_R = {:.4}; wrote {} and {}",
        mean_sv,
        std_sv,
        (0.6 * nf).ln(),
        mean_sr,
        args.out.display(),
        json_path(&args.out).display()
    );
    Ok(())
}

pub fn run_eigenstates(args: &EigenstatesArgs) -> Result<()> {
    let j1 = parse_spin(args.j1, "j1")?;
    let ensemble = parse_ensemble(&args.ensemble)?;
    let n = j1.dim();
    if args.q_list.is_empty() {
        return Err(CliError::Usage("--q-list must not be empty".into()));
    }
    if args.trials < 2 {
        return Err(CliError::Usage("--trials must be at least 2".into()));
    }

    // resolve every Q to an integral M before any heavy work
    let mut sweep: Vec<(f64, Spin, usize)> = Vec::new();
    for &q in &args.q_list {
        if !(q >= 1.0) {
            return Err(CliError::Usage(format!("Q = {} must be >= 1", q)));
        }
        let m_real = q * n as f64;
        let m = m_real.round() as usize;
        if (m_real - m as f64).abs() > 1e-9 {
            return Err(CliError::Usage(format!(
                "Q = {} gives non-integral M = Q*N = {}",
                q, m_real
            )));
        }
        let j2 = Spin::from_twice((m - 1) as u32)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        check_cap(n * m, args.dim_cap)?;
        sweep.push((q, j2, m));
    }

    let alphas: Vec<f64> = if args.compare_parity { vec![0.0, args.alpha] } else { vec![args.alpha] };

    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut summary_rows = Vec::new();
    for &(q, j2, m) in &sweep {
        let gamma: f64 = gamma_factor(q)?;
        let theory_sv = (gamma * n as f64).ln();
        let theory_sr = mean_linear_entropy::<f64>(n, m);
        let mc = monte_carlo_mean_entropies::<f64>(n, m, ensemble, args.trials, args.seed)?;
        for &alpha in &alphas {
            let cfg = TopConfig::new(j1, j2, args.k, args.epsilon, alpha, alpha)?;
            let u = build_floquet(&cfg)?;
            let spec = diagonalize_floquet(&u)?;
            let avg = eigenstate_entanglement_average(&spec, n, m)?;
            rows.push(vec![
                fmt_float(q),
                n.to_string(),
                m.to_string(),
                (n * m).to_string(),
                fmt_float(alpha),
                fmt_float(avg.sv_mean),
                fmt_float(avg.sv_std_err),
                fmt_float(avg.sr_mean),
                fmt_float(avg.sr_std_err),
                fmt_float(gamma),
                fmt_float(theory_sv),
                fmt_float(theory_sr),
                fmt_float(mc.sv_mean),
                fmt_float(mc.sv_std_err),
                fmt_float(mc.sr_mean),
                fmt_float(mc.sr_std_err),
            ]);
            summary_rows.push(json!({
                "q": q,
                "m_dim": m,
                "alpha": alpha,
                "sv_eigenstates": avg.sv_mean,
                "sv_theory": theory_sv,
                "sv_montecarlo": mc.sv_mean,
                "sr_eigenstates": avg.sr_mean,
                "sr_theory": theory_sr,
                "sr_montecarlo": mc.sr_mean,
            }));
        }
    }

    let mut meta = Metadata::new("eigenstates");
    meta.push("j1", j1);
    meta.push("n_dim", n);
    meta.push_float("k", args.k);
    meta.push_float("epsilon", args.epsilon);
    meta.push_float("alpha", args.alpha);
    meta.push("q_list", args.q_list.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(" "));
    meta.push("compare_parity", args.compare_parity);
    meta.push("trials", args.trials);
    meta.push("ensemble", ensemble);
    meta.push("seed", args.seed);
    meta.push_float("ln_n", (n as f64).ln());

    write_csv(
        &args.out,
        &meta,
        &[
            "q",
            "n_dim",
            "m_dim",
            "total_dim",
            "alpha",
            "sv_eigenstates",
            "sv_se",
            "sr_eigenstates",
            "sr_se",
            "gamma",
            "ln_gamma_n",
            "sr_theory",
            "mc_sv",
            "mc_sv_se",
            "mc_sr",
            "mc_sr_se",
        ],
        rows,
    )?;
    write_summary(
        &args.out,
        json!({ "metadata": meta.to_json(), "rows": summary_rows }),
    )?;
    eprintln!(
        "eigenstates: {} sweep point(s); wrote {} and {}",
        sweep.len() * alphas.len(),
        args.out.display(),
        json_path(&args.out).display()
    );
    Ok(())
}

pub fn run_rdm_spectrum(args: &RdmSpectrumArgs) -> Result<()> {
    let j1 = parse_spin(args.j1, "j1")?;
    let j2 = parse_spin(args.j2, "j2")?;
    let ensemble = parse_ensemble(&args.ensemble)?;
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    if args.bins < 2 {
        return Err(CliError::Usage("--bins must be at least 2".into()));
    }
    let cfg = TopConfig::new(j1, j2, args.k, args.epsilon, args.alpha1, args.alpha2)?;
    check_cap(cfg.total_dim(), args.dim_cap)?;
    let (n, m) = (cfg.n_dim(), cfg.m_dim());
    let q = m as f64 / n as f64;
    let mp = MPDensity::<f64>::new(n, q)?;
    let hi = mp.lambda_max() * 1.2;

    let u = build_floquet(&cfg)?;
    let spec = diagonalize_floquet(&u)?;
    let eig_values = pooled_eigenstate_schmidt_values(&spec, n, m)?;
    let eig_hist = Histogram::from_values(&eig_values, args.bins, 0.0, hi)?;

    let mc_values = pooled_rdm_eigenvalues::<f64>(n, m, ensemble, args.trials, args.seed)?;
    let mc_hist = Histogram::from_values(&mc_values, args.bins, 0.0, hi)?;

    let theory_masses = mp.bin_masses(eig_hist.edges())?;
    let width = eig_hist.bin_width();
    let theory_density: Vec<f64> = theory_masses.iter().map(|m| m / width).collect();

    let l1_eig = eig_hist.l1_distance_to_masses(&theory_masses);
    let l1_mc = mc_hist.l1_distance_to_masses(&theory_masses);
    let leak_eig: f64 = fraction_outside(&eig_values, mp.lambda_min(), mp.lambda_max());
    let leak_mc: f64 = fraction_outside(&mc_values, mp.lambda_min(), mp.lambda_max());

    let mut meta = Metadata::new("rdm-spectrum");
    meta.push("j1", j1);
    meta.push("j2", j2);
    meta.push("n_dim", n);
    meta.push("m_dim", m);
    meta.push_float("q", q);
    meta.push_float("k", args.k);
    meta.push_float("epsilon", args.epsilon);
    meta.push_float("alpha1", args.alpha1);
    meta.push_float("alpha2", args.alpha2);
    meta.push("trials", args.trials);
    meta.push("bins", args.bins);
    meta.push("ensemble", ensemble);
    meta.push("seed", args.seed);
    meta.push_float("lambda_min", mp.lambda_min());
    meta.push_float("lambda_max", mp.lambda_max());

    let rows = (0..eig_hist.bins()).map(|i| {
        vec![
            fmt_float(eig_hist.edges()[i]),
            fmt_float(eig_hist.edges()[i + 1]),
            fmt_float(eig_hist.densities()[i]),
            fmt_float(mc_hist.densities()[i]),
            fmt_float(theory_density[i]),
        ]
    });
    write_csv(
        &args.out,
        &meta,
        &["bin_lo", "bin_hi", "eigenstate_density", "montecarlo_density", "theory_density"],
        rows,
    )?;
    write_summary(
        &args.out,
        json!({
            "metadata": meta.to_json(),
            "l1_eigenstates_vs_theory": l1_eig,
            "l1_montecarlo_vs_theory": l1_mc,
            "out_of_support_fraction_eigenstates": leak_eig,
            "out_of_support_fraction_montecarlo": leak_mc,
        }),
    )?;
    eprintln!(
        "rdm-spectrum: l1(eigenstates) = {:.4}, l1(monte carlo) = {:.4}; wrote {} and {}",
        l1_eig,
        l1_mc,
        args.out.display(),
        json_path(&args.out).display()
    );
    Ok(())
}

pub fn run_theory(args: &TheoryArgs) -> Result<()> {
    if args.q_list.is_empty() {
        return Err(CliError::Usage("--q-list must not be empty".into()));
    }
    if args.n_dim == 0 {
        return Err(CliError::Usage("--n-dim must be at least 1".into()));
    }
    let n = args.n_dim;
    let mut rows = Vec::new();
    for &q in &args.q_list {
        if !(q >= 1.0) {
            return Err(CliError::Usage(format!("Q = {} must be >= 1", q)));
        }
        let gamma: f64 = gamma_factor(q)?;
        let mp = MPDensity::<f64>::new(n, q)?;
        let sv_quad = mp.entropy_bound()?;
        // Eq.-style mean linear entropy with real-valued M = Q N
        let m = q * n as f64;
        let sr = 1.0 - (m + n as f64 + 1.0) / (m * n as f64 + 2.0);
        rows.push(vec![
            fmt_float(q),
            fmt_float(gamma),
            fmt_float((gamma * n as f64).ln()),
            fmt_float(sv_quad),
            fmt_float(mp.lambda_min()),
            fmt_float(mp.lambda_max()),
            fmt_float(sr),
        ]);
    }

    let mut meta = Metadata::new("theory");
    meta.push("n_dim", n);
    meta.push("q_list", args.q_list.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(" "));
    meta.push_float("ln_n", (n as f64).ln());

    write_csv(
        &args.out,
        &meta,
        &["q", "gamma", "ln_gamma_n", "sv_quadrature", "lambda_min", "lambda_max", "sr_mean"],
        rows,
    )?;
    write_summary(&args.out, json!({ "metadata": meta.to_json() }))?;
    eprintln!(
        "theory: {} row(s); wrote {} and {}",
        args.q_list.len(),
        args.out.display(),
        json_path(&args.out).display()
    );
    Ok(())
}

pub fn run_nnsd(args: &NnsdArgs) -> Result<()> {
    let j1 = parse_spin(args.j1, "j1")?;
    let j2 = parse_spin(args.j2, "j2")?;
    if args.bins < 2 {
        return Err(CliError::Usage("--bins must be at least 2".into()));
    }
    let cfg = TopConfig::new(j1, j2, args.k, args.epsilon, args.alpha1, args.alpha2)?;
    check_cap(cfg.total_dim(), args.dim_cap)?;
    let d = cfg.total_dim();

    let mut meta = Metadata::new("nnsd");
    meta.push("j1", j1);
    meta.push("j2", j2);
    meta.push_float("k", args.k);
    meta.push_float("epsilon", args.epsilon);
    meta.push_float("alpha1", args.alpha1);
    meta.push_float("alpha2", args.alpha2);
    meta.push("total_dim", d);
    meta.push("bins", args.bins);
    meta.push("seed", args.seed);
    meta.push("split_parity", args.split_parity);
    meta.push("control", args.control.clone().unwrap_or_else(|| "none".into()));

    let mut warning: Option<String> = None;
    let result: NnsdResult<f64> = match args.control.as_deref() {
        Some("picket") => {
            let angles: Vec<f64> =
                (0..d).map(|k| k as f64 * std::f64::consts::TAU / d as f64).collect();
            nnsd_from_angles(&angles, args.bins)?
        }
        Some("poisson") => {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let angles: Vec<f64> =
                (0..d).map(|_| rng.gen::<f64>() * std::f64::consts::TAU).collect();
            nnsd_from_angles(&angles, args.bins)?
        }
        Some(other) => {
            return Err(CliError::Usage(format!(
                "--control must be 'picket' or 'poisson', got '{}'",
                other
            )))
        }
        None => {
            let u = build_floquet(&cfg)?;
            let spec = diagonalize_floquet(&u)?;
            if args.split_parity {
                let r = parity_operator::<f64>(j1, j2)?;
                let sectors = parity_sectors(&spec, &r)?;
                meta.push("parity_sectors", sectors.sectors.len());
                meta.push_float("parity_label_residual", sectors.max_label_residual);
                nnsd_by_sectors(&sectors, args.bins)?
            } else {
                if args.alpha1 == 0.0 && args.alpha2 == 0.0 {
                    warning = Some(
                        "alpha1 = alpha2 = 0 without --split-parity: parity sectors overlap and \
                         corrupt the spacing statistics"
                            .into(),
                    );
                }
                nnsd_from_angles(spec.eigenangles(), args.bins)?
            }
        }
    };
    if let Some(w) = &warning {
        meta.push("warning", w);
    }
    meta.push_float("mean_spacing", result.mean_spacing);
    meta.push_float("ks_distance", result.ks_distance);

    let hist = &result.histogram;
    let rows = (0..hist.bins()).map(|i| {
        let lo = hist.edges()[i];
        let hi = hist.edges()[i + 1];
        let wigner = (wigner_surmise_cdf(hi) - wigner_surmise_cdf(lo)) / (hi - lo);
        vec![
            fmt_float(lo),
            fmt_float(hi),
            fmt_float(hist.densities()[i]),
            fmt_float(wigner),
        ]
    });
    write_csv(
        &args.out,
        &meta,
        &["s_lo", "s_hi", "empirical_density", "wigner_density"],
        rows,
    )?;

    // raw spacings alongside
    let spacings_path = {
        let stem = args.out.file_stem().and_then(|s| s.to_str()).unwrap_or("nnsd");
        args.out.with_file_name(format!("{}_spacings.csv", stem))
    };
    write_csv(
        &spacings_path,
        &meta,
        &["index", "spacing"],
        result.spacings.iter().enumerate().map(|(i, s)| vec![i.to_string(), fmt_float(*s)]),
    )?;

    write_summary(
        &args.out,
        json!({
            "metadata": meta.to_json(),
            "ks_distance": result.ks_distance,
            "mean_spacing": result.mean_spacing,
            "spacing_count": result.spacings.len(),
            "warning": warning,
        }),
    )?;
    eprintln!(
        "nnsd: {} spacings, KS distance to the Wigner surmise = {:.4}; wrote {}, {} and {}",
        result.spacings.len(),
        result.ks_distance,
        args.out.display(),
        spacings_path.display(),
        json_path(&args.out).display()
    );
    Ok(())
}
