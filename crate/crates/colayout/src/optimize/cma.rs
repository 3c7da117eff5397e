//! Covariance matrix adaptation evolution strategy, (mu/mu_w, lambda):
//! rank-based recombination, rank-one and rank-mu covariance updates, and
//! cumulative step-size adaptation.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::asa::StopReason;
use super::linalg::{sym_eigen, SquareMat};
use crate::error::{Error, Result};
use crate::num::{count, real, Real};

#[derive(Clone, Debug, PartialEq)]
pub struct CmaConfig<R> {
    /// Initial step size.
    pub sigma0: R,
    /// Population size; `None` selects `4 + floor(3 ln n)`.
    pub lambda: Option<usize>,
    /// Parent count; `None` selects `lambda / 2`.
    pub mu: Option<usize>,
    pub max_evals: usize,
    /// Stop when the best objective value stagnates within this spread over
    /// a trailing generation window.
    pub tol_f: R,
    pub seed: u64,
}

impl<R: Real> Default for CmaConfig<R> {
    fn default() -> Self {
        Self {
            sigma0: real(0.5),
            lambda: None,
            mu: None,
            max_evals: 20_000,
            tol_f: real(1e-10),
            seed: 0,
        }
    }
}

/// Per-generation diagnostics; the eigenvalue columns let tests assert the
/// covariance stays symmetric positive-definite.
#[derive(Clone, Debug)]
pub struct CmaIter<R> {
    pub evals: usize,
    pub best_f: R,
    pub sigma: R,
    pub min_eigenvalue: R,
    pub max_eigenvalue: R,
    pub covariance_asymmetry: R,
}

#[derive(Clone, Debug)]
pub struct CmaTrace<R> {
    pub iterations: Vec<CmaIter<R>>,
    pub evals: usize,
    pub stop: StopReason,
}

#[derive(Clone, Debug)]
pub struct CmaSolution<R> {
    pub x: Vec<R>,
    pub f: R,
    pub trace: CmaTrace<R>,
}

fn standard_normal<R: Real>(rng: &mut ChaCha8Rng) -> R {
    // Box-Muller; u1 in (0, 1] avoids ln(0).
    let u1 = R::one() - rng.random_range(R::zero()..R::one());
    let u2: R = rng.random_range(R::zero()..R::one());
    let two = real::<R>(2.0);
    (-two * u1.ln()).sqrt() * (two * R::PI() * u2).cos()
}

/// Minimize `f` starting from mean `x0`. Non-finite objective values are
/// ranked worst. Deterministic per seed; the initial point is evaluated so
/// the reported best is never worse than `f(x0)`.
pub fn cma_minimize<R: Real>(
    mut f: impl FnMut(&[R]) -> R,
    x0: &[R],
    config: &CmaConfig<R>,
) -> Result<CmaSolution<R>> {
    let n = x0.len();
    if n == 0 {
        return Err(Error::InvalidArgument("cma: empty start point".into()));
    }
    if x0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteStart);
    }
    if !(config.sigma0.is_finite() && config.sigma0 > R::zero()) {
        return Err(Error::InvalidArgument("cma: sigma0 must be positive".into()));
    }
    let nf = count::<R>(n);
    let lambda = config.lambda.unwrap_or(4 + (3.0 * (n as f64).ln()).floor() as usize);
    if lambda < 2 {
        return Err(Error::InvalidArgument("cma: lambda must be at least 2".into()));
    }
    let mu = config.mu.unwrap_or(lambda / 2).max(1).min(lambda);

    // Logarithmic recombination weights.
    let mut weights: Vec<R> = (0..mu)
        .map(|i| real::<R>(((mu as f64) + 0.5).ln() - ((i + 1) as f64).ln()))
        .collect();
    let wsum: R = weights.iter().copied().sum();
    for w in &mut weights {
        *w = *w / wsum;
    }
    let mu_eff: R = R::one() / weights.iter().map(|&w| w * w).sum::<R>();

    // Strategy constants (standard defaults).
    let two = real::<R>(2.0);
    let c_sigma = (mu_eff + two) / (nf + mu_eff + real(5.0));
    let d_sigma = R::one()
        + two * (((mu_eff - R::one()) / (nf + R::one())).sqrt() - R::one()).max(R::zero())
        + c_sigma;
    let c_c = (real::<R>(4.0) + mu_eff / nf) / (nf + real::<R>(4.0) + two * mu_eff / nf);
    let c_1 = two / ((nf + real(1.3)) * (nf + real(1.3)) + mu_eff);
    let c_mu = (R::one() - c_1).min(
        two * (mu_eff - two + R::one() / mu_eff) / ((nf + two) * (nf + two) + mu_eff),
    );
    let chi_n = nf.sqrt()
        * (R::one() - R::one() / (real::<R>(4.0) * nf)
            + R::one() / (real::<R>(21.0) * nf * nf));

    let mut mean = x0.to_vec();
    let mut sigma = config.sigma0;
    let mut cov = SquareMat::<R>::identity(n);
    let mut p_sigma = vec![R::zero(); n];
    let mut p_c = vec![R::zero(); n];

    let mut best_x = x0.to_vec();
    let mut best_f = f(x0);
    let mut evals = 1usize;
    if !best_f.is_finite() {
        best_f = R::infinity();
    }

    let mut trace = CmaTrace {
        iterations: Vec::new(),
        evals,
        stop: StopReason::MaxEvals,
    };
    let window = 10 + (30 * n).div_ceil(lambda);
    let mut best_history: Vec<R> = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut generation = 0usize;
    while evals + lambda <= config.max_evals {
        generation += 1;

        // Eigendecomposition C = B D^2 B^T used for sampling and for C^{-1/2}.
        let eig = sym_eigen(&cov);
        let min_eig = eig.values[0];
        let max_eig = eig.values[n - 1];
        if !(min_eig > R::zero()) {
            trace.stop = StopReason::ConditionLimit;
            break;
        }
        if max_eig / min_eig > real(1e14) {
            trace.stop = StopReason::ConditionLimit;
            break;
        }
        let d_sqrt: Vec<R> = eig.values.iter().map(|&v| v.sqrt()).collect();

        // Sample lambda candidates: x = m + sigma * B D z.
        let mut zs: Vec<Vec<R>> = Vec::with_capacity(lambda);
        let mut ys: Vec<Vec<R>> = Vec::with_capacity(lambda);
        let mut xs: Vec<Vec<R>> = Vec::with_capacity(lambda);
        let mut fs: Vec<R> = Vec::with_capacity(lambda);
        for _ in 0..lambda {
            let z: Vec<R> = (0..n).map(|_| standard_normal(&mut rng)).collect();
            let mut y = vec![R::zero(); n];
            for (col, &zk) in z.iter().enumerate() {
                let dz = d_sqrt[col] * zk;
                for (row, yr) in y.iter_mut().enumerate() {
                    *yr = *yr + eig.vectors.get(row, col) * dz;
                }
            }
            let x: Vec<R> = (0..n).map(|i| mean[i] + sigma * y[i]).collect();
            fs.push(f(&x));
            zs.push(z);
            ys.push(y);
            xs.push(x);
        }
        evals += lambda;

        // Rank candidates; non-finite values sort worst, ties by index.
        let mut order: Vec<usize> = (0..lambda).collect();
        order.sort_by(|&i, &j| {
            match (fs[i].is_finite(), fs[j].is_finite()) {
                (true, false) => std::cmp::Ordering::Less,
                (false, true) => std::cmp::Ordering::Greater,
                (false, false) => i.cmp(&j),
                (true, true) => fs[i].partial_cmp(&fs[j]).unwrap().then(i.cmp(&j)),
            }
        });
        let leader = order[0];
        if fs[leader].is_finite() && fs[leader] < best_f {
            best_f = fs[leader];
            best_x.clone_from(&xs[leader]);
        }

        // Weighted recombination of the mu best.
        let old_mean = mean.clone();
        for m in &mut mean {
            *m = R::zero();
        }
        for (rank, &idx) in order.iter().take(mu).enumerate() {
            for i in 0..n {
                mean[i] = mean[i] + weights[rank] * xs[idx][i];
            }
        }
        let mean_shift: Vec<R> = (0..n).map(|i| (mean[i] - old_mean[i]) / sigma).collect();

        // p_sigma update needs C^{-1/2} (m' - m) / sigma = B D^{-1} B^T shift.
        let mut bt_shift = vec![R::zero(); n];
        for col in 0..n {
            let mut acc = R::zero();
            for row in 0..n {
                acc = acc + eig.vectors.get(row, col) * mean_shift[row];
            }
            bt_shift[col] = acc / d_sqrt[col];
        }
        let mut c_inv_sqrt_shift = vec![R::zero(); n];
        for row in 0..n {
            let mut acc = R::zero();
            for col in 0..n {
                acc = acc + eig.vectors.get(row, col) * bt_shift[col];
            }
            c_inv_sqrt_shift[row] = acc;
        }
        let path_decay = (c_sigma * (two - c_sigma) * mu_eff).sqrt();
        for i in 0..n {
            p_sigma[i] = (R::one() - c_sigma) * p_sigma[i] + path_decay * c_inv_sqrt_shift[i];
        }
        let p_sigma_norm = p_sigma.iter().map(|&v| v * v).sum::<R>().sqrt();

        let gen_r = count::<R>(generation);
        let expected_decay =
            (R::one() - (R::one() - c_sigma).powf(two * gen_r)).sqrt();
        let h_sigma = p_sigma_norm / expected_decay
            < (real::<R>(1.4) + two / (nf + R::one())) * chi_n;

        let cc_decay = (c_c * (two - c_c) * mu_eff).sqrt();
        for i in 0..n {
            p_c[i] = (R::one() - c_c) * p_c[i]
                + if h_sigma { cc_decay * mean_shift[i] } else { R::zero() };
        }

        // Covariance update: rank-one from p_c, rank-mu from the top samples.
        let delta_h = if h_sigma {
            R::zero()
        } else {
            c_c * (two - c_c)
        };
        let keep = R::one() - c_1 - c_mu;
        for i in 0..n {
            for j in 0..n {
                let mut v = (keep + c_1 * delta_h) * cov.get(i, j) + c_1 * p_c[i] * p_c[j];
                for (rank, &idx) in order.iter().take(mu).enumerate() {
                    v = v + c_mu * weights[rank] * ys[idx][i] * ys[idx][j];
                }
                cov.set(i, j, v);
            }
        }
        cov.symmetrize();

        // Cumulative step-size adaptation.
        sigma = sigma * ((c_sigma / d_sigma) * (p_sigma_norm / chi_n - R::one())).exp();

        trace.iterations.push(CmaIter {
            evals,
            best_f,
            sigma,
            min_eigenvalue: min_eig,
            max_eigenvalue: max_eig,
            covariance_asymmetry: cov.asymmetry(),
        });

        best_history.push(best_f);
        if best_history.len() > window {
            let recent = &best_history[best_history.len() - window..];
            let lo = recent.iter().copied().fold(R::infinity(), R::min);
            let hi = recent.iter().copied().fold(R::neg_infinity(), R::max);
            if (hi - lo).abs() < config.tol_f {
                trace.stop = StopReason::ToleranceReached;
                break;
            }
        }
        if !sigma.is_finite() || sigma <= R::zero() {
            trace.stop = StopReason::ConditionLimit;
            break;
        }
    }

    trace.evals = evals;
    Ok(CmaSolution {
        x: best_x,
        f: best_f,
        trace,
    })
}
