//! Multipath channel sampling, LS channel estimation and MSE evaluation.
//!
//! Noise model: unit-energy training symbols and complex AWGN of variance
//! σ² = 10^(−EbN0/10) per received sample.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::construct::{fixture, fixture_ids, read_family, seed};
use crate::error::{Error, Result};
use crate::seq::{Family, PhaseSequence};
use crate::training::{build_ls_model_matrix, build_training_matrix, GsmConfig, TrainingMatrix};

/// Taps h_{p,i}: one row of λ+1 gains per transmit antenna.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelRealization {
    pub taps: Vec<Vec<Complex64>>,
}

impl ChannelRealization {
    /// Taps stacked antenna by antenna, matching the LS model matrix columns.
    pub fn stacked(&self) -> DVector<Complex64> {
        DVector::from_iterator(
            self.taps.iter().map(Vec::len).sum(),
            self.taps.iter().flatten().copied(),
        )
    }
}

fn complex_gaussian(rng: &mut impl Rng, variance: f64) -> Complex64 {
    let s = (variance / 2.0).sqrt();
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * s, im * s)
}

/// I.i.d. zero-mean complex Gaussian taps with E|h|² = 1/(λ+1).
pub fn sample_channel(lambda: usize, nt: usize, rng: &mut impl Rng) -> ChannelRealization {
    let var = 1.0 / (lambda + 1) as f64;
    ChannelRealization {
        taps: (0..nt)
            .map(|_| (0..=lambda).map(|_| complex_gaussian(rng, var)).collect())
            .collect(),
    }
}

pub fn ebn0_to_noise_var(ebn0_db: f64) -> f64 {
    10f64.powf(-ebn0_db / 10.0)
}

/// Lowest achievable normalized MSE σ²/E.
pub fn mse_floor(noise_var: f64, energy: usize) -> f64 {
    noise_var / energy as f64
}

/// Factorized LS estimator ĥ = (XᴴX)⁻¹Xᴴy for a fixed model matrix.
#[derive(Clone, Debug)]
pub struct LsEstimator {
    x: DMatrix<Complex64>,
    xh: DMatrix<Complex64>,
    gram: DMatrix<Complex64>,
    gram_inv: DMatrix<Complex64>,
    projector: DMatrix<Complex64>,
}

/// Pivot ratio below which the normal matrix counts as singular.
const RANK_TOL: f64 = 1e-12;

impl LsEstimator {
    pub fn new(x: DMatrix<Complex64>, matrix_id: &str) -> Result<Self> {
        let xh = x.adjoint();
        let gram = &xh * &x;
        let rank_err = || Error::RankDeficient {
            matrix: matrix_id.to_string(),
        };
        let max_diag = (0..gram.nrows()).map(|i| gram[(i, i)].re).fold(0.0, f64::max);
        let chol = gram.clone().cholesky().ok_or_else(rank_err)?;
        let l = chol.l_dirty();
        let min_pivot = (0..l.nrows()).map(|i| l[(i, i)].norm_sqr()).fold(f64::INFINITY, f64::min);
        if max_diag.is_nan() || max_diag <= 0.0 || min_pivot / max_diag < RANK_TOL {
            return Err(rank_err());
        }
        let gram_inv = chol.inverse();
        let projector = &gram_inv * &xh;
        Ok(Self {
            x,
            xh,
            gram,
            gram_inv,
            projector,
        })
    }

    pub fn model(&self) -> &DMatrix<Complex64> {
        &self.x
    }

    pub fn estimate(&self, y: &DVector<Complex64>) -> DVector<Complex64> {
        &self.projector * y
    }

    /// ‖XᴴXĥ − Xᴴy‖.
    pub fn residual(&self, y: &DVector<Complex64>, h_hat: &DVector<Complex64>) -> f64 {
        (&self.gram * h_hat - &self.xh * y).norm()
    }

    pub fn trace_inverse(&self) -> f64 {
        self.gram_inv.trace().re
    }

    /// σ²/(Nt(λ+1)) · Tr((XᴴX)⁻¹).
    pub fn analytic_mse(&self, noise_var: f64) -> f64 {
        noise_var * self.trace_inverse() / self.x.ncols() as f64
    }
}

pub fn ls_estimate(x: &DMatrix<Complex64>, y: &DVector<Complex64>) -> Result<DVector<Complex64>> {
    Ok(LsEstimator::new(x.clone(), "X")?.estimate(y))
}

pub fn analytic_mse(x: &DMatrix<Complex64>, noise_var: f64) -> Result<f64> {
    Ok(LsEstimator::new(x.clone(), "X")?.analytic_mse(noise_var))
}

/// Where the simulated training matrix comes from.
///
/// * a fixture or catalog id (`table4`), or a family file path: the E-CZCS
///   (or any family) laid out on the antennas;
/// * `random-binary:<N>x<L>`: random ±1 sequences in the same layout;
/// * `zadoff-chu:<N>x<L>`: Zadoff-Chu sequences with the smallest roots
///   coprime to L, in the same layout.
pub fn resolve_training(source: &str, cfg: &GsmConfig, q: u32, seed_value: u64) -> Result<TrainingMatrix> {
    let shape = |spec: &str| -> Result<(usize, usize)> {
        let (n, l) = spec
            .split_once('x')
            .ok_or_else(|| Error::Config(format!("expected <N>x<L>, got `{spec}`")))?;
        let parse = |s: &str| s.parse::<usize>().map_err(|e| Error::Config(format!("{s}: {e}")));
        Ok((parse(n)?, parse(l)?))
    };
    if let Some(spec) = source.strip_prefix("random-binary:") {
        let (n, l) = shape(spec)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed_value);
        return baseline_random_binary(cfg, n, l, &mut rng);
    }
    if let Some(spec) = source.strip_prefix("zadoff-chu:") {
        let (n, l) = shape(spec)?;
        return baseline_zadoff_chu(cfg, n, l, &default_zc_roots(l, cfg.na * n));
    }
    let family = if fixture_ids().any(|id| id == source) {
        fixture(source)?
    } else if Path::new(source).exists() {
        read_family(Path::new(source), q)?
    } else {
        seed(source)?.family
    };
    build_training_matrix(&family, cfg, source)
}

pub fn random_binary_family(m: usize, n: usize, l: usize, rng: &mut impl Rng) -> Result<Family> {
    let sets = (0..m)
        .map(|_| {
            (0..n)
                .map(|_| PhaseSequence::new(2, (0..l).map(|_| rng.random_range(0..2u32)).collect()))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Family::from_members(sets)
}

/// Random ±1 sequences in the same antenna layout as an E-CZCS training matrix.
pub fn baseline_random_binary(cfg: &GsmConfig, n: usize, l: usize, rng: &mut impl Rng) -> Result<TrainingMatrix> {
    let fam = random_binary_family(cfg.na, n, l, rng)?;
    build_training_matrix(&fam, cfg, &format!("random-binary:{n}x{l}"))
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Zadoff-Chu sequence exp(−iπ r k(k+c)/len) with c = len mod 2, as phases
/// over the 2·len-th roots of unity.
pub fn zadoff_chu(len: usize, root: usize) -> Result<PhaseSequence> {
    if len == 0 {
        return Err(Error::EmptySequence);
    }
    if root == 0 || gcd(root, len) != 1 {
        return Err(Error::Config(format!("root {root} is not coprime with length {len}")));
    }
    let q = 2 * len as i64;
    let odd = (len % 2) as i64;
    PhaseSequence::from_residues(
        q as u32,
        (0..len as i64).map(|k| (-(root as i64) * k * (k + odd)).rem_euclid(q)),
    )
}

/// The smallest `count` roots coprime to `len`.
pub fn default_zc_roots(len: usize, count: usize) -> Vec<usize> {
    (1..).filter(|&r| gcd(r, len) == 1).take(count).collect()
}

/// Zadoff-Chu sequences in the E-CZCS layout; roots are assigned set by
/// set, member by member.
pub fn baseline_zadoff_chu(cfg: &GsmConfig, n: usize, len: usize, roots: &[usize]) -> Result<TrainingMatrix> {
    if roots.len() < cfg.na * n {
        return Err(Error::Config(format!(
            "need {} Zadoff-Chu roots, got {}",
            cfg.na * n,
            roots.len()
        )));
    }
    let sets = roots[..cfg.na * n]
        .chunks(n)
        .map(|rs| rs.iter().map(|&r| zadoff_chu(len, r)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    let fam = Family::from_members(sets)?;
    build_training_matrix(&fam, cfg, &format!("zadoff-chu:{n}x{len}"))
}

/// ZCCS (or any family) in the same layout; identical to the E-CZCS builder.
pub fn baseline_zccs(family: &Family, cfg: &GsmConfig, id: &str) -> Result<TrainingMatrix> {
    build_training_matrix(family, cfg, id)
}

fn default_trials() -> usize {
    1000
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Training source, see [`resolve_training`].
    pub training: String,
    pub nt: usize,
    pub na: usize,
    #[serde(default = "default_q")]
    pub q: u32,
    pub ebn0_db: Vec<f64>,
    pub lambdas: Vec<usize>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    /// Drop the noise entirely (σ² = 0).
    #[serde(default)]
    pub noiseless: bool,
}

fn default_q() -> u32 {
    2
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        if self.ebn0_db.is_empty() || self.lambdas.is_empty() {
            return Err(Error::Config("EbN0 and lambda grids must be nonempty".into()));
        }
        GsmConfig::new(self.nt, self.na)?;
        Ok(())
    }

    pub fn gsm(&self) -> GsmConfig {
        GsmConfig {
            nt: self.nt,
            na: self.na,
            order: 2,
        }
    }

    pub fn noise_var(&self, ebn0_db: f64) -> f64 {
        if self.noiseless {
            0.0
        } else {
            ebn0_to_noise_var(ebn0_db)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MsePoint {
    pub ebn0_db: f64,
    pub lambda: usize,
    /// `None` when the point could not be simulated.
    pub empirical_mse: Option<f64>,
    pub analytic_mse: Option<f64>,
    pub floor: f64,
    pub trials: usize,
    pub matrix_id: String,
    /// Largest normal-equation residual seen over the trials.
    pub max_residual: f64,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MseReport {
    pub points: Vec<MsePoint>,
}

impl MseReport {
    pub fn point(&self, ebn0_db: f64, lambda: usize) -> Option<&MsePoint> {
        self.points
            .iter()
            .find(|p| p.ebn0_db == ebn0_db && p.lambda == lambda)
    }

    pub fn to_csv(&self) -> String {
        let num = |v: Option<f64>| v.map_or("NaN".to_string(), |x| format!("{x:e}"));
        let mut out = String::from("# noise variance per sample = 10^(-EbN0_dB/10), unit-energy symbols\n");
        out.push_str("EbN0_dB,lambda,empirical_mse,analytic_mse,floor,trials,matrix_id,status\n");
        for p in &self.points {
            out.push_str(&format!(
                "{},{},{},{},{:e},{},{},{}\n",
                p.ebn0_db,
                p.lambda,
                num(p.empirical_mse),
                num(p.analytic_mse),
                p.floor,
                p.trials,
                p.matrix_id,
                p.failure.as_deref().unwrap_or("ok"),
            ));
        }
        out
    }
}

/// Per-trial generator: the master seed with the stream selected by
/// (grid point, trial), so results do not depend on scheduling.
pub fn trial_rng(master: u64, point: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(((point as u64) << 32) | trial as u64);
    rng
}

/// Monte-Carlo normalized MSE ‖ĥ − h‖²/(Nt(λ+1)) over the (EbN0, λ) grid.
///
/// Grid points run in parallel; trials within a point are summed in order,
/// so the report is bit-identical for a given seed.
pub fn monte_carlo_mse(psi: &TrainingMatrix, cfg: &SimConfig) -> Result<MseReport> {
    cfg.validate()?;
    let id = psi.meta().source.clone();
    let estimators: Vec<(usize, Result<LsEstimator>)> = cfg
        .lambdas
        .iter()
        .map(|&lambda| {
            let est = build_ls_model_matrix(psi, lambda).and_then(|x| LsEstimator::new(x, &id));
            (lambda, est)
        })
        .collect();
    let grid: Vec<(usize, f64, usize)> = cfg
        .ebn0_db
        .iter()
        .flat_map(|&e| (0..estimators.len()).map(move |li| (e, li)))
        .enumerate()
        .map(|(i, (e, li))| (i, e, li))
        .collect();
    let nt = psi.nt();
    let points = grid
        .par_iter()
        .map(|&(index, ebn0, li)| {
            let (lambda, est) = &estimators[li];
            let noise_var = cfg.noise_var(ebn0);
            let floor = mse_floor(noise_var, psi.energy());
            let mut point = MsePoint {
                ebn0_db: ebn0,
                lambda: *lambda,
                empirical_mse: None,
                analytic_mse: None,
                floor,
                trials: cfg.trials,
                matrix_id: id.clone(),
                max_residual: 0.0,
                failure: None,
            };
            let est = match est {
                Ok(e) => e,
                Err(e) => {
                    point.failure = Some(match e {
                        Error::RankDeficient { .. } => "rank-deficient".to_string(),
                        other => other.to_string(),
                    });
                    return point;
                }
            };
            let x = est.model();
            let cols = x.ncols() as f64;
            let mut total = 0.0;
            for trial in 0..cfg.trials {
                let mut rng = trial_rng(cfg.seed, index, trial);
                let h = sample_channel(*lambda, nt, &mut rng).stacked();
                let mut y = x * &h;
                if noise_var > 0.0 {
                    for s in y.iter_mut() {
                        *s += complex_gaussian(&mut rng, noise_var);
                    }
                }
                let h_hat = est.estimate(&y);
                point.max_residual = point.max_residual.max(est.residual(&y, &h_hat));
                total += (&h_hat - &h).norm_squared() / cols;
            }
            point.empirical_mse = Some(total / cfg.trials as f64);
            point.analytic_mse = Some(est.analytic_mse(noise_var));
            point
        })
        .collect();
    Ok(MseReport { points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::fixture;
    use crate::training::Entry;

    fn table4_psi() -> TrainingMatrix {
        build_training_matrix(&fixture("table4").unwrap(), &GsmConfig::new(4, 2).unwrap(), "table4").unwrap()
    }

    #[test]
    fn tap_statistics() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let one = sample_channel(0, 1, &mut rng);
        assert_eq!(one.taps[0].len(), 1);
        let lambda = 3;
        let draws = 100_000;
        let mut acc = 0.0;
        for _ in 0..draws {
            acc += sample_channel(lambda, 1, &mut rng).taps[0][2].norm_sqr();
        }
        let var = acc / draws as f64;
        assert!((var * 4.0 - 1.0).abs() < 0.02, "{var}");
    }

    #[test]
    fn sampling_is_reproducible() {
        let a = sample_channel(4, 3, &mut trial_rng(11, 2, 5));
        let b = sample_channel(4, 3, &mut trial_rng(11, 2, 5));
        assert_eq!(a, b);
        assert_ne!(a, sample_channel(4, 3, &mut trial_rng(11, 2, 6)));
    }

    #[test]
    fn noiseless_recovery_and_matched_filter() {
        let psi = table4_psi();
        let x = build_ls_model_matrix(&psi, 9).unwrap();
        let h = sample_channel(9, 4, &mut ChaCha8Rng::seed_from_u64(1)).stacked();
        let y = &x * &h;
        let h_hat = ls_estimate(&x, &y).unwrap();
        assert!((&h_hat - &h).norm() < 1e-10);
        let matched = x.adjoint() * &y / Complex64::new(48.0, 0.0);
        assert!((&matched - &h_hat).norm() < 1e-10);
    }

    #[test]
    fn duplicated_rows_are_rank_deficient() {
        let psi = table4_psi();
        let mut rows = psi.rows().to_vec();
        rows[1] = rows[0].clone();
        let dup = TrainingMatrix::from_rows(2, rows, psi.meta().clone()).unwrap();
        let x = build_ls_model_matrix(&dup, 2).unwrap();
        let err = LsEstimator::new(x, "dup").unwrap_err();
        assert!(matches!(err, Error::RankDeficient { ref matrix } if matrix == "dup"));
    }

    #[test]
    fn analytic_mse_floor_and_scaling() {
        let psi = table4_psi();
        let x = build_ls_model_matrix(&psi, 9).unwrap();
        let a = analytic_mse(&x, 0.1).unwrap();
        assert!((a - 0.1 / 48.0).abs() < 1e-12);
        assert!((analytic_mse(&x, 0.2).unwrap() - 2.0 * a).abs() < 1e-12);
        let x10 = build_ls_model_matrix(&psi, 10).unwrap();
        assert!(analytic_mse(&x10, 0.1).unwrap() > 0.1 / 48.0 * (1.0 + 1e-9));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rnd = baseline_random_binary(&GsmConfig::new(4, 2).unwrap(), 2, 24, &mut rng).unwrap();
        let xr = build_ls_model_matrix(&rnd, 9).unwrap();
        assert!(analytic_mse(&xr, 0.1).unwrap() > 0.1 / 48.0);
    }

    #[test]
    fn zadoff_chu_sequences() {
        let z = zadoff_chu(3, 1).unwrap();
        assert_eq!((z.q(), z.phases()), (6, &[0u32, 4, 0][..]));
        assert!(zadoff_chu(24, 2).is_err());
        assert_eq!(default_zc_roots(24, 4), vec![1, 5, 7, 11]);
        // constant amplitude, zero periodic autocorrelation sidelobes
        let z = zadoff_chu(24, 5).unwrap();
        for u in 1..24 {
            assert!(crate::correlation::pccf(&z, &z, u).unwrap().is_zero());
        }
        let m = baseline_zadoff_chu(&GsmConfig::new(4, 2).unwrap(), 2, 24, &[1, 5, 7, 11]).unwrap();
        assert!(m.column_activity().iter().all(|&a| a == 2));
    }

    #[test]
    fn random_baseline_layout() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = baseline_random_binary(&GsmConfig::new(4, 2).unwrap(), 2, 24, &mut rng).unwrap();
        assert!(m.column_activity().iter().all(|&a| a == 2));
        assert!(m.rows()[0][24..48].iter().all(|e| *e == Entry::Zero));
    }

    #[test]
    fn report_determinism_and_noiseless_run() {
        let psi = table4_psi();
        let cfg = SimConfig {
            training: "table4".into(),
            nt: 4,
            na: 2,
            q: 2,
            ebn0_db: vec![8.0, 16.0],
            lambdas: vec![3, 9, 12],
            trials: 50,
            seed: 42,
            noiseless: false,
        };
        let a = monte_carlo_mse(&psi, &cfg).unwrap();
        let b = monte_carlo_mse(&psi, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_csv(), b.to_csv());
        assert_eq!(a.points.len(), 6);
        let quiet = monte_carlo_mse(&psi, &SimConfig { noiseless: true, ..cfg }).unwrap();
        assert!(quiet.points.iter().all(|p| p.empirical_mse.unwrap() < 1e-18));
    }

    #[test]
    fn singular_points_are_marked() {
        let t3 = fixture("table3").unwrap();
        let psi = baseline_zccs(&t3, &GsmConfig::new(4, 2).unwrap(), "table3").unwrap();
        let cfg = SimConfig {
            training: "table3".into(),
            nt: 4,
            na: 2,
            q: 2,
            ebn0_db: vec![16.0],
            lambdas: vec![5, 12],
            trials: 10,
            seed: 0,
            noiseless: false,
        };
        let r = monte_carlo_mse(&psi, &cfg).unwrap();
        assert!(r.point(16.0, 5).unwrap().failure.is_none());
        let bad = r.point(16.0, 12).unwrap();
        assert_eq!(bad.failure.as_deref(), Some("rank-deficient"));
        assert!(r.to_csv().contains("NaN"));
    }

    #[test]
    fn config_validation() {
        let mut cfg: SimConfig = serde_json::from_str(
            r#"{"training":"table4","nt":4,"na":2,"ebn0_db":[16],"lambdas":[9]}"#,
        )
        .unwrap();
        assert!(cfg.validate().is_ok());
        assert_eq!(cfg.trials, 1000);
        cfg.trials = 0;
        assert!(cfg.validate().is_err());
        assert!(resolve_training("zadoff-chu:2x24", &GsmConfig::new(4, 2).unwrap(), 2, 0).is_ok());
        assert!(resolve_training("nope", &GsmConfig::new(4, 2).unwrap(), 2, 0).is_err());
    }
}
