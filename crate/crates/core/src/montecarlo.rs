//! Sequential importance sampling of constant-margin tables.
//!
//! Columns are filled left to right, one whole column per step. A column
//! `x` with `x_j ≤ r_j` and `Σ x_j = t` is proposed with mass proportional to
//!
//! ```text
//! Π_j C(r_j − x_j + n_left − 1, n_left − 1)
//! ```
//!
//! where `r_j` is row `j`'s remaining sum and `n_left` the number of columns
//! after this one. The column is drawn row by row from its exact conditional
//! law, using a backward convolution over the rows below. The last column is
//! forced. Every remainder with the right total can be completed, so there
//! are no dead ends, and `1/q` is an unbiased estimate of the count.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numeric::{binomial, pairwise_sum, LnFactorialTable, LogEstimate};
use crate::table::TableSpec;

/// A sampled table with its importance weight `1/q`, stored as `ln(1/q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub matrix: Vec<Vec<u64>>,
    pub log_weight: f64,
}

/// Sampler for one spec. Holds a log-factorial table sized for the largest
/// binomial the proposal needs.
#[derive(Debug, Clone)]
pub struct Sampler {
    spec: TableSpec,
    ln_fact: LnFactorialTable,
}

impl Sampler {
    pub fn new(spec: &TableSpec) -> Result<Self> {
        spec.positive_density()?;
        let limit = spec.s() + spec.n();
        if limit > 50_000_000 {
            return Err(Error::ResourceLimit {
                what: "sampler lookup table size".into(),
                cap: 50_000_000,
            });
        }
        Ok(Sampler {
            spec: *spec,
            ln_fact: LnFactorialTable::new(limit as usize),
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Sample {
        let m = self.spec.m() as usize;
        let n = self.spec.n() as usize;
        let t = self.spec.t() as usize;
        let mut matrix = vec![vec![0u64; n]; m];
        let mut row_left = vec![self.spec.s(); m];
        let mut log_q = 0.0;
        // weight[j][x] = w_j(x) / w_j(0); below[j][u] is the mass of rows j.. summing to u
        let mut weight = vec![vec![0.0f64; t + 1]; m];
        let mut below = vec![vec![0.0f64; t + 1]; m + 1];
        let mut mass = Vec::with_capacity(t + 1);

        for col in 0..n {
            let after = (n - col - 1) as u64;
            if after == 0 {
                for j in 0..m {
                    matrix[j][col] = row_left[j];
                    row_left[j] = 0;
                }
                break;
            }
            for j in 0..m {
                let r = row_left[j] as usize;
                let base = self.ln_fact.ln_binomial(r + after as usize - 1, after as usize - 1);
                for (x, w) in weight[j].iter_mut().enumerate() {
                    *w = if x <= r {
                        (self.ln_fact.ln_binomial(r - x + after as usize - 1, after as usize - 1) - base).exp()
                    } else {
                        0.0
                    };
                }
            }
            below[m].fill(0.0);
            below[m][0] = 1.0;
            for j in (0..m).rev() {
                let (head, tail) = below.split_at_mut(j + 1);
                let (cur, next) = (&mut head[j], &tail[0]);
                for u in 0..=t {
                    cur[u] = (0..=u).map(|x| weight[j][x] * next[u - x]).sum();
                }
                // rescale each level; only ratios within a level are used
                let top = cur.iter().copied().fold(0.0, f64::max);
                if top > 0.0 {
                    cur.iter_mut().for_each(|v| *v /= top);
                }
            }
            let mut u = t;
            for j in 0..m {
                mass.clear();
                mass.extend((0..=u).map(|x| weight[j][x] * below[j + 1][u - x]));
                let total: f64 = mass.iter().sum();
                let x = if j + 1 == m {
                    u
                } else {
                    let mut v = rng.gen::<f64>() * total;
                    let mut pick = u;
                    for (x, &w) in mass.iter().enumerate() {
                        if w > 0.0 {
                            pick = x;
                            if v < w {
                                break;
                            }
                            v -= w;
                        }
                    }
                    pick
                };
                debug_assert!(mass[x] > 0.0, "proposal dead end");
                log_q += (mass[x] / total).ln();
                matrix[j][col] = x as u64;
                row_left[j] -= x as u64;
                u -= x;
            }
            debug_assert_eq!(u, 0);
        }
        debug_assert!(row_left.iter().all(|&r| r == 0));
        Sample {
            matrix,
            log_weight: -log_q,
        }
    }
}

pub fn sample_table<R: Rng + ?Sized>(spec: &TableSpec, rng: &mut R) -> Result<Sample> {
    Ok(Sampler::new(spec)?.sample(rng))
}

/// Generator for sample `index` of a run seeded with `seed`: each sample is
/// a pure function of `(seed, index)`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Importance-sampling estimate of the count.
#[derive(Debug, Clone, PartialEq)]
pub struct McEstimate {
    pub mean: LogEstimate,
    /// `ln` of the standard error of the mean; `-inf` when every weight is
    /// identical.
    pub log_standard_error: f64,
    pub sample_count: u64,
    pub seed: u64,
    pub effective_sample_size: f64,
}

impl McEstimate {
    pub fn standard_error(&self) -> LogEstimate {
        LogEstimate::from_ln(self.log_standard_error)
    }

    /// Standard error divided by the mean.
    pub fn relative_standard_error(&self) -> f64 {
        (self.log_standard_error - self.mean.ln()).exp()
    }

    /// Distance from `ln_target` to the mean, in standard errors.
    pub fn z_score(&self, ln_target: f64) -> f64 {
        let diff = (ln_target - self.mean.ln()).exp() - 1.0;
        if diff == 0.0 {
            return 0.0;
        }
        diff / self.relative_standard_error()
    }

    /// Whether the target lies within `k` standard errors of the mean, with
    /// a rounding allowance for the case where every weight is identical.
    pub fn within(&self, ln_target: f64, k: f64) -> bool {
        let diff = ((ln_target - self.mean.ln()).exp() - 1.0).abs();
        diff <= k * self.relative_standard_error() + 8.0 * f64::EPSILON
    }
}

pub fn mc_estimate(spec: &TableSpec, samples: u64, seed: u64) -> Result<McEstimate> {
    if samples < 2 {
        return Err(Error::invalid("at least two samples are needed for a standard error"));
    }
    let sampler = Sampler::new(spec)?;
    let log_weights: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| sampler.sample(&mut sample_rng(seed, i)).log_weight)
        .collect();
    Ok(summarize(&log_weights, seed))
}

/// Mean, standard error and effective sample size of log-weights, computed
/// after scaling by the largest weight.
fn summarize(log_weights: &[f64], seed: u64) -> McEstimate {
    let count = log_weights.len() as f64;
    let max = log_weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let scaled: Vec<f64> = log_weights.iter().map(|w| (w - max).exp()).collect();
    let sum = pairwise_sum(&scaled);
    let mean = sum / count;
    let dev: Vec<f64> = scaled.iter().map(|w| (w - mean) * (w - mean)).collect();
    let variance = pairwise_sum(&dev) / (count - 1.0);
    let squares: Vec<f64> = scaled.iter().map(|w| w * w).collect();
    let ess = sum * sum / pairwise_sum(&squares);
    McEstimate {
        mean: LogEstimate::from_ln(max + mean.ln()),
        log_standard_error: max + (variance / count).sqrt().ln(),
        sample_count: log_weights.len() as u64,
        seed,
        effective_sample_size: ess.min(count),
    }
}

/// Result of enumerating every path the proposal can take.
#[derive(Debug, Clone, PartialEq)]
pub struct ProposalAudit {
    /// `Σ q(path)·w(path)`, the exact expectation of the weight.
    pub expected_weight: BigRational,
    /// `Σ q(path)`; equals one when the proposal never dead-ends.
    pub total_probability: BigRational,
    /// Number of distinct tables reached.
    pub paths: u64,
}

/// Walks the full proposal tree in exact arithmetic. Intended for tiny specs.
pub fn audit_proposal(spec: &TableSpec) -> Result<ProposalAudit> {
    spec.positive_density()?;
    if spec.cells() > 16 {
        return Err(Error::ResourceLimit {
            what: "proposal enumeration limited to m·n ≤ 16".into(),
            cap: 16,
        });
    }
    let m = spec.m() as usize;
    let n = spec.n() as usize;
    let mut walk = Walk {
        m,
        n,
        t: spec.t(),
        s: spec.s(),
        row_left: vec![spec.s(); m],
        matrix: vec![vec![0; n]; m],
        audit: ProposalAudit {
            expected_weight: BigRational::zero(),
            total_probability: BigRational::zero(),
            paths: 0,
        },
    };
    walk.visit(0, BigRational::one(), BigRational::one());
    Ok(walk.audit)
}

struct Walk {
    m: usize,
    n: usize,
    t: u64,
    s: u64,
    row_left: Vec<u64>,
    matrix: Vec<Vec<u64>>,
    audit: ProposalAudit,
}

impl Walk {
    /// Every column `x` with `x_j ≤ r_j` and `Σ x_j = t`, with its exact
    /// unnormalized proposal mass.
    fn columns(&self, col: usize) -> Vec<(Vec<u64>, BigUint)> {
        let after = (self.n - col - 1) as u64;
        let mut out = Vec::new();
        let mut x = vec![0u64; self.m];
        self.compose(0, self.t, after, &mut x, &mut out);
        out
    }

    fn compose(&self, j: usize, left: u64, after: u64, x: &mut Vec<u64>, out: &mut Vec<(Vec<u64>, BigUint)>) {
        if j == self.m {
            if left == 0 {
                let w = (0..self.m)
                    .map(|i| {
                        if after == 0 {
                            BigUint::one()
                        } else {
                            binomial(self.row_left[i] - x[i] + after - 1, after - 1)
                        }
                    })
                    .product();
                out.push((x.clone(), w));
            }
            return;
        }
        for v in 0..=left.min(self.row_left[j]) {
            x[j] = v;
            self.compose(j + 1, left - v, after, x, out);
        }
        x[j] = 0;
    }

    fn visit(&mut self, col: usize, prob: BigRational, weight: BigRational) {
        if col == self.n {
            assert!(self.row_left.iter().all(|&r| r == 0));
            for j in 0..self.m {
                assert_eq!(self.matrix[j].iter().sum::<u64>(), self.s);
            }
            for k in 0..self.n {
                assert_eq!((0..self.m).map(|j| self.matrix[j][k]).sum::<u64>(), self.t);
            }
            self.audit.expected_weight += &prob * &weight;
            self.audit.total_probability += prob;
            self.audit.paths += 1;
            return;
        }
        let mut options = self.columns(col);
        if col + 1 == self.n {
            options.retain(|(x, _)| *x == self.row_left);
        }
        let total: BigUint = options.iter().map(|(_, w)| w).sum();
        for (x, w) in options {
            let p = BigRational::new(BigInt::from(w), BigInt::from(total.clone()));
            let next_prob = &prob * &p;
            let next_weight = &weight / &p;
            for j in 0..self.m {
                self.row_left[j] -= x[j];
                self.matrix[j][col] = x[j];
            }
            self.visit(col + 1, next_prob, next_weight);
            for j in 0..self.m {
                self.row_left[j] += x[j];
            }
        }
    }
}
