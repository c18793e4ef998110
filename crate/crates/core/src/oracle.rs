//! Exhaustive reference implementations.
//!
//! Nothing here calls into row reduction: subspaces are expanded into explicit
//! element sets from their basis rows, membership is set lookup, and chains
//! are evaluated coefficient tuple by coefficient tuple. Only the prime field
//! arithmetic is shared with the fast paths.

use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::field::{FpScalar, Prime};
use crate::multispace::{Dependence, MultiVectorSpace, OperationPolicy, TaggedVector};
use crate::subspace::{AmbientId, Subspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    pub enumeration_cap: usize,
    pub coefficient_cap: u128,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            enumeration_cap: 729,
            coefficient_cap: 1_000_000,
        }
    }
}

/// All linear combinations of `rows`, as an explicit set.
fn expand(p: Prime, n: usize, rows: &[&[u32]], cap: usize) -> Result<HashSet<Vec<u32>>> {
    let mut out: HashSet<Vec<u32>> = HashSet::new();
    out.insert(vec![0; n]);
    for row in rows {
        let mut next = HashSet::with_capacity(out.len() * p.get() as usize);
        for v in &out {
            for alpha in 0..p.get() {
                let w: Vec<u32> = v
                    .iter()
                    .zip(row.iter())
                    .map(|(&x, &r)| p.add(x, p.mul(alpha, r)))
                    .collect();
                next.insert(w);
            }
            if next.len() > cap {
                return Err(Error::EnumerationTooLarge {
                    size: next.len() as u128,
                    cap: cap as u128,
                });
            }
        }
        out = next;
    }
    Ok(out)
}

fn elements(s: &Subspace, cap: usize) -> Result<HashSet<Vec<u32>>> {
    let rows: Vec<&[u32]> = s.basis().row_iter().collect();
    expand(s.prime(), s.ambient().dim(), &rows, cap)
}

/// A multi-vector space with every component expanded into its elements.
struct Universe {
    components: Vec<(AmbientId, HashSet<Vec<u32>>)>,
    policy: OperationPolicy,
}

impl Universe {
    fn new(m: &MultiVectorSpace, cfg: &OracleConfig) -> Result<Self> {
        let components = m
            .components()
            .iter()
            .map(|c| Ok((c.ambient().clone(), elements(c, cfg.enumeration_cap)?)))
            .collect::<Result<_>>()?;
        Ok(Universe {
            components,
            policy: m.policy(),
        })
    }

    fn in_component(&self, i: usize, v: &TaggedVector) -> bool {
        let (a, set) = &self.components[i];
        a == v.ambient() && set.contains(v.coords())
    }

    fn contains(&self, v: &TaggedVector) -> bool {
        (0..self.components.len()).any(|i| self.in_component(i, v))
    }

    fn union(&self) -> BTreeSet<TaggedVector> {
        self.components
            .iter()
            .flat_map(|(a, set)| {
                set.iter()
                    .map(move |c| TaggedVector::new(a, c.clone()).expect("expanded from basis"))
            })
            .collect()
    }

    fn scale(&self, alpha: u32, a: &TaggedVector) -> Option<TaggedVector> {
        let exists = match self.policy {
            OperationPolicy::Total => true,
            OperationPolicy::Closed => self.contains(a),
        };
        if !exists {
            return None;
        }
        let p = a.prime();
        let coords = a.coords().iter().map(|&x| p.mul(alpha, x)).collect();
        Some(TaggedVector::new(a.ambient(), coords).expect("reduced"))
    }

    fn add(&self, x: &TaggedVector, y: &TaggedVector) -> Option<TaggedVector> {
        if x.ambient() != y.ambient() {
            return None;
        }
        let exists = match self.policy {
            OperationPolicy::Total => true,
            OperationPolicy::Closed => (0..self.components.len())
                .any(|i| self.in_component(i, x) && self.in_component(i, y)),
        };
        if !exists {
            return None;
        }
        let p = x.prime();
        let coords = x
            .coords()
            .iter()
            .zip(y.coords())
            .map(|(&a, &b)| p.add(a, b))
            .collect();
        Some(TaggedVector::new(x.ambient(), coords).expect("reduced"))
    }

    fn chain(&self, coeffs: &[u32], vectors: &[TaggedVector]) -> Option<TaggedVector> {
        let mut acc = self.scale(coeffs[0], &vectors[0])?;
        for (&c, v) in coeffs[1..].iter().zip(&vectors[1..]) {
            let t = self.scale(c, v)?;
            acc = self.add(&acc, &t)?;
        }
        Some(acc)
    }
}

/// Values of every existing chain over `generators` that lie in the union,
/// found by extending chains one step at a time until nothing new appears.
pub fn brute_span(
    m: &MultiVectorSpace,
    generators: &[TaggedVector],
    cfg: &OracleConfig,
) -> Result<BTreeSet<TaggedVector>> {
    let u = Universe::new(m, cfg)?;
    let mut reached: BTreeSet<TaggedVector> = BTreeSet::new();
    for a in generators {
        for alpha in 0..a.prime().get() {
            if let Some(t) = u.scale(alpha, a) {
                reached.insert(t);
            }
        }
    }
    loop {
        if reached.len() > cfg.enumeration_cap {
            return Err(Error::EnumerationTooLarge {
                size: reached.len() as u128,
                cap: cfg.enumeration_cap as u128,
            });
        }
        let mut grown = reached.clone();
        for r in &reached {
            for a in generators {
                for alpha in 0..a.prime().get() {
                    if let Some(s) = u.scale(alpha, a).and_then(|t| u.add(r, &t)) {
                        grown.insert(s);
                    }
                }
            }
        }
        if grown.len() == reached.len() {
            break;
        }
        reached = grown;
    }
    // the empty chain: zero of each component
    for (a, _) in &u.components {
        reached.insert(TaggedVector::zero(a));
    }
    Ok(reached.into_iter().filter(|v| u.contains(v)).collect())
}

/// Tries every not-all-zero coefficient tuple in lexicographic order and
/// reports the first whose chain exists and evaluates to zero.
pub fn brute_dependent(
    m: &MultiVectorSpace,
    vectors: &[TaggedVector],
    cfg: &OracleConfig,
) -> Result<Dependence> {
    if vectors.is_empty() {
        return Ok(Dependence { witness: None });
    }
    let tuples = vectors
        .iter()
        .fold(1u128, |acc, v| acc.saturating_mul(v.prime().get() as u128));
    if tuples > cfg.coefficient_cap {
        return Err(Error::SearchTooLarge {
            size: tuples,
            cap: cfg.coefficient_cap,
        });
    }
    let u = Universe::new(m, cfg)?;
    let mut coeffs = vec![0u32; vectors.len()];
    loop {
        // advance the odometer first so the all-zero tuple is skipped
        let mut i = coeffs.len();
        loop {
            if i == 0 {
                return Ok(Dependence { witness: None });
            }
            i -= 1;
            coeffs[i] += 1;
            if coeffs[i] < vectors[i].prime().get() {
                break;
            }
            coeffs[i] = 0;
        }
        if let Some(v) = u.chain(&coeffs, vectors) {
            if v.coords().iter().all(|&x| x == 0) {
                let witness = coeffs
                    .iter()
                    .zip(vectors)
                    .map(|(&c, v)| FpScalar::new(c as u64, v.prime()).expect("reduced"))
                    .collect();
                return Ok(Dependence {
                    witness: Some(witness),
                });
            }
        }
    }
}

/// Set intersection of the two element sets.
pub fn brute_intersection(
    s1: &Subspace,
    s2: &Subspace,
    cfg: &OracleConfig,
) -> Result<BTreeSet<Vec<u32>>> {
    if s1.ambient() != s2.ambient() {
        return Ok(BTreeSet::new());
    }
    let a = elements(s1, cfg.enumeration_cap)?;
    let b = elements(s2, cfg.enumeration_cap)?;
    Ok(a.intersection(&b).cloned().collect())
}

/// Every element of `s`, via direct expansion.
pub fn brute_elements(s: &Subspace, cfg: &OracleConfig) -> Result<BTreeSet<Vec<u32>>> {
    Ok(elements(s, cfg.enumeration_cap)?.into_iter().collect())
}

/// Every element of the union of `m`, via direct expansion.
pub fn brute_union(m: &MultiVectorSpace, cfg: &OracleConfig) -> Result<BTreeSet<TaggedVector>> {
    Ok(Universe::new(m, cfg)?.union())
}

/// The subspace criterion by direct scan: every candidate element lies in
/// the parent union and every `α·a + b` that exists under the parent's policy
/// lands in the candidate union.
pub fn brute_subspace_check(
    candidate: &MultiVectorSpace,
    parent: &MultiVectorSpace,
    cfg: &OracleConfig,
) -> Result<bool> {
    let elems = Universe::new(candidate, cfg)?.union();
    brute_subset_check(&elems, parent, cfg)
}

/// [`brute_subspace_check`] for an arbitrary finite subset of the parent.
pub fn brute_subset_check(
    elems: &BTreeSet<TaggedVector>,
    parent: &MultiVectorSpace,
    cfg: &OracleConfig,
) -> Result<bool> {
    let u = Universe::new(parent, cfg)?;
    if !elems.iter().all(|v| u.contains(v)) {
        return Ok(false);
    }
    for a in elems {
        for alpha in 0..a.prime().get() {
            let Some(t) = u.scale(alpha, a) else {
                continue;
            };
            for b in elems {
                if let Some(r) = u.add(&t, b) {
                    if !elems.contains(&r) {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}
