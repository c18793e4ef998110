//! Random instances and an auditor that compares the inclusion-exclusion
//! dimension against the greedy basis size.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{FpMatrix, Prime};
use crate::multispace::{MultiVectorSpace, OperationPolicy};
use crate::subspace::{AmbientId, Subspace};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorConfig {
    pub primes: Vec<u64>,
    pub max_ambient_dim: usize,
    pub max_components: usize,
    /// Upper bound on the number of distinct ambient spaces per instance.
    pub max_ambients: usize,
    pub policy: OperationPolicy,
    pub seed: u64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        GeneratorConfig {
            primes: vec![2, 3],
            max_ambient_dim: 4,
            max_components: 4,
            max_ambients: 2,
            policy: OperationPolicy::Total,
            seed: 0,
        }
    }
}

impl GeneratorConfig {
    fn validated_primes(&self) -> Result<Vec<Prime>> {
        if self.max_ambient_dim == 0 || self.max_components == 0 || self.max_ambients == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        if self.primes.is_empty() {
            return Err(Error::NotPrime(0));
        }
        self.primes.iter().map(|&p| Prime::new(p)).collect()
    }
}

/// Builds the instance for `draw`. The result depends only on the config and
/// `draw`; each draw reads its own ChaCha stream.
pub fn random_instance(cfg: &GeneratorConfig, draw: u64) -> Result<MultiVectorSpace> {
    let primes = cfg.validated_primes()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(draw);

    let ambient_count = rng.gen_range(1..=cfg.max_ambients);
    let ambients: Vec<AmbientId> = (1..=ambient_count)
        .map(|i| {
            let p = *primes.choose(&mut rng).expect("nonempty");
            let n = rng.gen_range(1..=cfg.max_ambient_dim);
            AmbientId::new(format!("A{i}"), p, n)
        })
        .collect();

    let k = rng.gen_range(1..=cfg.max_components);
    let mut components = Vec::with_capacity(k);
    for _ in 0..k {
        let ambient = ambients.choose(&mut rng).expect("nonempty");
        let p = ambient.prime();
        let n = ambient.dim();
        let rows = rng.gen_range(0..=cfg.max_ambient_dim);
        let entries = (0..rows * n).map(|_| rng.gen_range(0..p.get())).collect();
        let generators = FpMatrix::new(p, rows, n, entries)?;
        components.push(Subspace::span(ambient, &generators)?);
    }
    MultiVectorSpace::new(components, cfg.policy)
}

/// An instance on which the inclusion-exclusion value and the greedy basis
/// size disagree, with what is needed to regenerate it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscrepancyReport {
    pub instance: MultiVectorSpace,
    pub ie_value: i64,
    pub greedy_value: usize,
    pub seed: u64,
    pub draw: u64,
}

impl DiscrepancyReport {
    /// Recomputes both values from the stored instance.
    pub fn still_disagrees(&self) -> Result<bool> {
        Ok(compare(&self.instance)?.is_some())
    }
}

fn compare(instance: &MultiVectorSpace) -> Result<Option<(i64, usize)>> {
    let ie = instance.dim_inclusion_exclusion()?;
    let greedy = instance.dim_greedy()?;
    Ok((ie != greedy as i64).then_some((ie, greedy)))
}

/// Audits one instance; `None` when both values agree.
pub fn audit(
    instance: &MultiVectorSpace,
    seed: u64,
    draw: u64,
) -> Result<Option<DiscrepancyReport>> {
    Ok(
        compare(instance)?.map(|(ie_value, greedy_value)| DiscrepancyReport {
            instance: instance.clone(),
            ie_value,
            greedy_value,
            seed,
            draw,
        }),
    )
}

/// Audits a sequence of `(draw, instance)` pairs in parallel. Reports come
/// back in input order.
pub fn audit_instances(
    instances: Vec<(u64, MultiVectorSpace)>,
    seed: u64,
) -> Result<Vec<DiscrepancyReport>> {
    let found: Vec<Option<DiscrepancyReport>> = instances
        .par_iter()
        .map(|(draw, m)| audit(m, seed, *draw))
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// Audits draws `0..trials` of the generator.
pub fn find_formula_discrepancies(
    cfg: &GeneratorConfig,
    trials: u64,
) -> Result<Vec<DiscrepancyReport>> {
    let found: Vec<Option<DiscrepancyReport>> = (0..trials)
        .into_par_iter()
        .map(|draw| audit(&random_instance(cfg, draw)?, cfg.seed, draw))
        .collect::<Result<_>>()?;
    Ok(found.into_iter().flatten().collect())
}

/// Deletes coordinate `coord` from every component living in `ambient`.
fn project_out(
    m: &MultiVectorSpace,
    ambient: &AmbientId,
    coord: usize,
) -> Result<MultiVectorSpace> {
    let smaller = AmbientId::new(ambient.label(), ambient.prime(), ambient.dim() - 1);
    let components = m
        .components()
        .iter()
        .map(|c| {
            if c.ambient() != ambient {
                return Ok(c.clone());
            }
            let rows: Vec<Vec<u32>> = c
                .basis()
                .row_iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(i, _)| i != coord)
                        .map(|(_, &x)| x)
                        .collect()
                })
                .collect();
            Subspace::from_vectors(&smaller, &rows)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(
        MultiVectorSpace::with_names(components, m.names().to_vec(), m.policy())?
            .with_caps(m.caps()),
    )
}

fn reductions(m: &MultiVectorSpace) -> Vec<MultiVectorSpace> {
    let mut out = Vec::new();
    if m.k() > 1 {
        for drop in 0..m.k() {
            let keep: Vec<usize> = (0..m.k()).filter(|&i| i != drop).collect();
            out.push(m.select(&keep));
        }
    }
    for ambient in m.ambients() {
        if ambient.dim() > 1 {
            for coord in 0..ambient.dim() {
                if let Ok(smaller) = project_out(m, &ambient, coord) {
                    out.push(smaller);
                }
            }
        }
    }
    out
}

/// Repeatedly applies the first single reduction (drop a component, or delete
/// one ambient coordinate) that keeps the two values apart. The result admits
/// no such reduction.
pub fn minimize_counterexample(report: &DiscrepancyReport) -> DiscrepancyReport {
    let mut best = report.clone();
    'outer: loop {
        for candidate in reductions(&best.instance) {
            if let Ok(Some((ie_value, greedy_value))) = compare(&candidate) {
                best = DiscrepancyReport {
                    instance: candidate,
                    ie_value,
                    greedy_value,
                    seed: best.seed,
                    draw: best.draw,
                };
                continue 'outer;
            }
        }
        return best;
    }
}
