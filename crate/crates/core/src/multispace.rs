//! Multi-vector spaces: finite unions of subspaces whose operations are only
//! partially defined.
//!
//! Whether `x + y` or `α·a` "exists" is pinned down by an [`OperationPolicy`]:
//!
//! * `TOTAL`: every operation between vectors of one ambient space is defined
//!   and computed in that ambient space.
//! * `CLOSED`: `x + y` is defined only when a single component contains both
//!   operands, and `α·a` only when some component contains `a`.
//!
//! Operations across different ambient spaces are never defined.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{first_dependency, FpMatrix, FpScalar, Prime};
use crate::subspace::{pow_saturating, AmbientId, Subspace, DEFAULT_ENUMERATION_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum OperationPolicy {
    #[default]
    Total,
    Closed,
}

impl fmt::Display for OperationPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OperationPolicy::Total => "TOTAL",
            OperationPolicy::Closed => "CLOSED",
        })
    }
}

impl FromStr for OperationPolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "TOTAL" => Ok(OperationPolicy::Total),
            "CLOSED" => Ok(OperationPolicy::Closed),
            other => Err(format!(
                "unknown policy `{other}` (expected TOTAL or CLOSED)"
            )),
        }
    }
}

/// Size limits applied by the exhaustive parts of the engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Maximum number of vectors any enumeration or closure may hold.
    pub enumeration: usize,
    /// Maximum number of coefficient states a dependence search may visit.
    pub coefficients: u128,
    /// Maximum number of components for subset sums.
    pub subsets: usize,
    /// Maximum number of vector triples the axiom validator may visit.
    pub triples: u128,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            enumeration: DEFAULT_ENUMERATION_CAP,
            coefficients: 1_000_000,
            subsets: 12,
            triples: 10_000_000,
        }
    }
}

/// A vector of the union, tagged with the ambient space it belongs to.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TaggedVector {
    ambient: AmbientId,
    coords: Vec<u32>,
}

impl TaggedVector {
    pub fn new(ambient: &AmbientId, coords: Vec<u32>) -> Result<Self> {
        ambient.check_vector(&coords)?;
        Ok(TaggedVector {
            ambient: ambient.clone(),
            coords,
        })
    }

    pub fn zero(ambient: &AmbientId) -> Self {
        TaggedVector {
            ambient: ambient.clone(),
            coords: ambient.zero_vector(),
        }
    }

    pub fn ambient(&self) -> &AmbientId {
        &self.ambient
    }

    pub fn coords(&self) -> &[u32] {
        &self.coords
    }

    pub fn prime(&self) -> Prime {
        self.ambient.prime()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&x| x == 0)
    }

    /// Ambient scalar multiple; the scalar must come from the ambient field.
    pub(crate) fn scaled(&self, alpha: u32) -> TaggedVector {
        let p = self.prime();
        TaggedVector {
            ambient: self.ambient.clone(),
            coords: self.coords.iter().map(|&x| p.mul(alpha, x)).collect(),
        }
    }

    /// Ambient sum; both vectors must share an ambient.
    pub(crate) fn plus(&self, other: &TaggedVector) -> TaggedVector {
        debug_assert_eq!(self.ambient, other.ambient);
        let p = self.prime();
        TaggedVector {
            ambient: self.ambient.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(&a, &b)| p.add(a, b))
                .collect(),
        }
    }
}

impl fmt::Display for TaggedVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.coords.iter().map(|x| x.to_string()).collect();
        write!(f, "{}({})", self.ambient.label(), cells.join(","))
    }
}

/// One term `α·a` of a left-to-right operation chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainTerm {
    scalar: FpScalar,
    vector: TaggedVector,
}

impl ChainTerm {
    pub fn new(scalar: FpScalar, vector: TaggedVector) -> Result<Self> {
        if scalar.prime() != vector.prime() {
            return Err(Error::PrimeMismatch {
                expected: vector.prime().get(),
                found: scalar.prime().get(),
            });
        }
        Ok(ChainTerm { scalar, vector })
    }

    pub fn scalar(&self) -> FpScalar {
        self.scalar
    }

    pub fn vector(&self) -> &TaggedVector {
        &self.vector
    }
}

/// Outcome of a dependence test. `witness` holds one coefficient per input
/// vector, in input order, whenever the vectors are dependent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dependence {
    pub witness: Option<Vec<FpScalar>>,
}

impl Dependence {
    pub fn is_dependent(&self) -> bool {
        self.witness.is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvarianceReport {
    pub cardinalities: Vec<usize>,
    pub all_agree: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdditiveReport {
    pub union_dim: usize,
    pub first_dim: usize,
    pub second_dim: usize,
    pub intersection_dim: usize,
}

impl AdditiveReport {
    pub fn right_side(&self) -> i64 {
        self.first_dim as i64 + self.second_dim as i64 - self.intersection_dim as i64
    }

    pub fn agree(&self) -> bool {
        self.union_dim as i64 == self.right_side()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub closure_checks: u64,
    pub closure_violations: Vec<String>,
    pub associativity_checks: u64,
    pub associativity_violations: Vec<String>,
    pub distributivity_checks: u64,
    pub distributivity_violations: Vec<String>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.closure_violations.is_empty()
            && self.associativity_violations.is_empty()
            && self.distributivity_violations.is_empty()
    }
}

/// A union of component subspaces together with the policy deciding which
/// cross-component operations exist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiVectorSpace {
    components: Vec<Subspace>,
    names: Vec<String>,
    policy: OperationPolicy,
    caps: Caps,
}

impl MultiVectorSpace {
    pub fn new(components: Vec<Subspace>, policy: OperationPolicy) -> Result<Self> {
        let names = (1..=components.len()).map(|i| format!("V{i}")).collect();
        Self::with_names(components, names, policy)
    }

    pub fn with_names(
        components: Vec<Subspace>,
        names: Vec<String>,
        policy: OperationPolicy,
    ) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::NoComponents);
        }
        Self::build(components, names, policy, Caps::default())
    }

    /// Like `with_names`, but an empty component list is accepted.
    fn build(
        components: Vec<Subspace>,
        names: Vec<String>,
        policy: OperationPolicy,
        caps: Caps,
    ) -> Result<Self> {
        if names.len() != components.len() {
            return Err(Error::DimensionMismatch {
                expected: components.len(),
                found: names.len(),
            });
        }
        let mut seen: HashMap<&str, &AmbientId> = HashMap::new();
        for c in &components {
            let a = c.ambient();
            if let Some(prev) = seen.insert(a.label(), a) {
                if prev != a {
                    return Err(Error::AmbientMismatch {
                        left: prev.to_string(),
                        right: a.to_string(),
                    });
                }
            }
        }
        Ok(MultiVectorSpace {
            components,
            names,
            policy,
            caps,
        })
    }

    pub fn components(&self) -> &[Subspace] {
        &self.components
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn policy(&self) -> OperationPolicy {
        self.policy
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    pub fn with_policy(mut self, policy: OperationPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn with_caps(mut self, caps: Caps) -> Self {
        self.caps = caps;
        self
    }

    /// Number of components.
    pub fn k(&self) -> usize {
        self.components.len()
    }

    /// Distinct ambient spaces in order of first use.
    pub fn ambients(&self) -> Vec<AmbientId> {
        let mut out: Vec<AmbientId> = Vec::new();
        for c in &self.components {
            if !out.contains(c.ambient()) {
                out.push(c.ambient().clone());
            }
        }
        out
    }

    /// A copy of this space with only the listed components, in that order.
    pub fn select(&self, indices: &[usize]) -> MultiVectorSpace {
        MultiVectorSpace {
            components: indices
                .iter()
                .map(|&i| self.components[i].clone())
                .collect(),
            names: indices.iter().map(|&i| self.names[i].clone()).collect(),
            policy: self.policy,
            caps: self.caps,
        }
    }

    /// The instance whose components are those of `self` followed by those
    /// of `other`.
    pub fn concat(&self, other: &MultiVectorSpace) -> Result<MultiVectorSpace> {
        self.require_same_policy(other)?;
        let mut components = self.components.clone();
        components.extend(other.components.iter().cloned());
        let mut names = self.names.clone();
        names.extend(other.names.iter().cloned());
        Self::build(components, names, self.policy, self.caps)
    }

    fn require_same_policy(&self, other: &MultiVectorSpace) -> Result<()> {
        if self.policy != other.policy {
            return Err(Error::PolicyMismatch {
                left: self.policy.to_string(),
                right: other.policy.to_string(),
            });
        }
        Ok(())
    }

    fn components_containing<'a>(
        &'a self,
        v: &'a TaggedVector,
    ) -> impl Iterator<Item = &'a Subspace> + 'a {
        self.components
            .iter()
            .filter(move |c| c.ambient() == v.ambient() && c.contains(v.coords()).unwrap_or(false))
    }

    pub fn union_contains(&self, v: &TaggedVector) -> bool {
        self.components_containing(v).next().is_some()
    }

    /// Every element of the union.
    pub fn enumerate_union(&self) -> Result<BTreeSet<TaggedVector>> {
        let mut out = BTreeSet::new();
        for c in &self.components {
            for coords in c.enumerate(self.caps.enumeration)? {
                out.insert(TaggedVector {
                    ambient: c.ambient().clone(),
                    coords,
                });
            }
            if out.len() > self.caps.enumeration {
                return Err(Error::EnumerationTooLarge {
                    size: out.len() as u128,
                    cap: self.caps.enumeration as u128,
                });
            }
        }
        Ok(out)
    }

    /// `α·a` if it exists under the policy.
    pub fn scale(&self, alpha: FpScalar, a: &TaggedVector) -> Option<TaggedVector> {
        if alpha.prime() != a.prime() {
            return None;
        }
        match self.policy {
            OperationPolicy::Total => Some(a.scaled(alpha.value())),
            OperationPolicy::Closed => self.union_contains(a).then(|| a.scaled(alpha.value())),
        }
    }

    /// `x + y` if it exists under the policy.
    pub fn add(&self, x: &TaggedVector, y: &TaggedVector) -> Option<TaggedVector> {
        if x.ambient() != y.ambient() {
            return None;
        }
        let defined = match self.policy {
            OperationPolicy::Total => true,
            OperationPolicy::Closed => self.components.iter().any(|c| {
                c.ambient() == x.ambient()
                    && c.contains(x.coords()).unwrap_or(false)
                    && c.contains(y.coords()).unwrap_or(false)
            }),
        };
        defined.then(|| x.plus(y))
    }

    /// Evaluates `α₁·a₁ + α₂·a₂ + ⋯` strictly left to right. Returns `None` as
    /// soon as one step does not exist.
    pub fn evaluate_chain(&self, terms: &[ChainTerm]) -> Result<Option<TaggedVector>> {
        let (first, rest) = terms.split_first().ok_or(Error::EmptyChain)?;
        let Some(mut acc) = self.scale(first.scalar, &first.vector) else {
            return Ok(None);
        };
        for t in rest {
            let Some(term) = self.scale(t.scalar, &t.vector) else {
                return Ok(None);
            };
            match self.add(&acc, &term) {
                Some(s) => acc = s,
                None => return Ok(None),
            }
        }
        Ok(Some(acc))
    }

    /// Decides whether some not-all-zero coefficient tuple makes the chain
    /// over `vectors` (in the given order) exist and evaluate to zero.
    ///
    /// A chain mixing ambient spaces never exists, so such lists are
    /// independent. Under `TOTAL` in one ambient this is a rank test; under
    /// `CLOSED` it is a search over the reachable partial sums, one layer per
    /// vector.
    pub fn linearly_dependent(&self, vectors: &[TaggedVector]) -> Result<Dependence> {
        let Some(first) = vectors.first() else {
            return Ok(Dependence { witness: None });
        };
        if vectors.iter().any(|v| v.ambient() != first.ambient()) {
            return Ok(Dependence { witness: None });
        }
        match self.policy {
            OperationPolicy::Total => {
                let ambient = first.ambient();
                let rows: Vec<&[u32]> = vectors.iter().map(|v| v.coords()).collect();
                let m = FpMatrix::from_rows(ambient.prime(), ambient.dim(), &rows)?;
                let p = ambient.prime();
                Ok(Dependence {
                    witness: first_dependency(&m).map(|c| {
                        c.into_iter()
                            .map(|x| FpScalar::new(x as u64, p).expect("reduced"))
                            .collect()
                    }),
                })
            }
            OperationPolicy::Closed => self.closed_dependence(vectors),
        }
    }

    #[allow(clippy::needless_range_loop)]
    fn closed_dependence(&self, vectors: &[TaggedVector]) -> Result<Dependence> {
        let p = vectors[0].prime();
        // (value, some coefficient nonzero) -> (parent index in previous layer, coefficient)
        struct Node {
            value: TaggedVector,
            nonzero: bool,
            parent: usize,
            coeff: u32,
        }
        let mut layers: Vec<Vec<Node>> = Vec::with_capacity(vectors.len());
        let mut visited: u128 = 0;
        for (j, v) in vectors.iter().enumerate() {
            if !self.union_contains(v) {
                // no multiple of v exists, so no chain through it does either
                return Ok(Dependence { witness: None });
            }
            let mut index: HashMap<(TaggedVector, bool), usize> = HashMap::new();
            let mut layer: Vec<Node> = Vec::new();
            let prev_count = if j == 0 { 1 } else { layers[j - 1].len() };
            for parent in 0..prev_count {
                for alpha in 0..p.get() {
                    let term = v.scaled(alpha);
                    let (value, nonzero) = if j == 0 {
                        (term, alpha != 0)
                    } else {
                        let prev = &layers[j - 1][parent];
                        match self.add(&prev.value, &term) {
                            Some(s) => (s, prev.nonzero || alpha != 0),
                            None => continue,
                        }
                    };
                    let key = (value, nonzero);
                    if index.contains_key(&key) {
                        continue;
                    }
                    visited += 1;
                    if visited > self.caps.coefficients {
                        return Err(Error::SearchTooLarge {
                            size: visited,
                            cap: self.caps.coefficients,
                        });
                    }
                    index.insert(key.clone(), layer.len());
                    layer.push(Node {
                        value: key.0,
                        nonzero,
                        parent,
                        coeff: alpha,
                    });
                }
            }
            if layer.is_empty() {
                return Ok(Dependence { witness: None });
            }
            layers.push(layer);
        }
        let last = layers.last().expect("nonempty input");
        let Some(mut at) = last.iter().position(|n| n.nonzero && n.value.is_zero()) else {
            return Ok(Dependence { witness: None });
        };
        let mut coeffs = vec![0u32; vectors.len()];
        for j in (0..vectors.len()).rev() {
            let node = &layers[j][at];
            coeffs[j] = node.coeff;
            at = node.parent;
        }
        Ok(Dependence {
            witness: Some(
                coeffs
                    .into_iter()
                    .map(|c| FpScalar::new(c as u64, p).expect("reduced"))
                    .collect(),
            ),
        })
    }

    /// All values of existing chains over elements of `generators`, whether
    /// or not they lie in the union.
    pub fn reachable_values(&self, generators: &[TaggedVector]) -> Result<BTreeSet<TaggedVector>> {
        let mut reached: BTreeSet<TaggedVector> = BTreeSet::new();
        let mut terms: Vec<TaggedVector> = Vec::new();
        for a in generators {
            for alpha in FpScalar::all(a.prime()) {
                if let Some(t) = self.scale(alpha, a) {
                    terms.push(t);
                }
            }
        }
        let mut frontier: Vec<TaggedVector> = Vec::new();
        for t in &terms {
            if reached.insert(t.clone()) {
                frontier.push(t.clone());
            }
        }
        while !frontier.is_empty() {
            self.check_enumeration(reached.len())?;
            let mut next = Vec::new();
            for r in &frontier {
                for t in &terms {
                    if let Some(s) = self.add(r, t) {
                        if reached.insert(s.clone()) {
                            next.push(s);
                        }
                    }
                }
            }
            frontier = next;
        }
        self.check_enumeration(reached.len())?;
        Ok(reached)
    }

    fn check_enumeration(&self, size: usize) -> Result<()> {
        if size > self.caps.enumeration {
            return Err(Error::EnumerationTooLarge {
                size: size as u128,
                cap: self.caps.enumeration as u128,
            });
        }
        Ok(())
    }

    /// The linearly spanning set: values of existing chains over
    /// `generators` that lie in the union. The empty chain counts as the zero
    /// vector of every component.
    pub fn linear_span(&self, generators: &[TaggedVector]) -> Result<BTreeSet<TaggedVector>> {
        let mut span: BTreeSet<TaggedVector> = self
            .reachable_values(generators)?
            .into_iter()
            .filter(|v| self.union_contains(v))
            .collect();
        span.extend(self.ambients().iter().map(TaggedVector::zero));
        Ok(span)
    }

    /// The union of all component bases, in component order then row order.
    pub fn component_basis_vectors(&self) -> Vec<TaggedVector> {
        self.components
            .iter()
            .flat_map(|c| {
                c.basis().row_iter().map(move |r| TaggedVector {
                    ambient: c.ambient().clone(),
                    coords: r.to_vec(),
                })
            })
            .collect()
    }

    /// Starts from the union of the component bases and removes one vector
    /// from a dependence witness at a time until the set is independent.
    ///
    /// Only vectors with a nonzero witness coefficient are eligible. By default
    /// the eligible vector listed first in the starting set is removed; a
    /// `removal_order` (a permutation of starting-set positions) ranks the
    /// candidates instead.
    pub fn greedy_basis(&self, removal_order: Option<&[usize]>) -> Result<Vec<TaggedVector>> {
        let start = self.component_basis_vectors();
        let rank: Vec<usize> = match removal_order {
            None => (0..start.len()).collect(),
            Some(order) => {
                if order.len() != start.len() {
                    return Err(Error::InvalidPermutation(start.len()));
                }
                let mut rank = vec![usize::MAX; start.len()];
                for (r, &pos) in order.iter().enumerate() {
                    if pos >= start.len() || rank[pos] != usize::MAX {
                        return Err(Error::InvalidPermutation(start.len()));
                    }
                    rank[pos] = r;
                }
                rank
            }
        };
        let mut current: Vec<(usize, TaggedVector)> = start.into_iter().enumerate().collect();
        loop {
            let vectors: Vec<TaggedVector> = current.iter().map(|(_, v)| v.clone()).collect();
            let Some(witness) = self.linearly_dependent(&vectors)?.witness else {
                return Ok(vectors);
            };
            let victim = current
                .iter()
                .zip(&witness)
                .enumerate()
                .filter(|(_, (_, c))| !c.is_zero())
                .min_by_key(|(_, ((pos, _), _))| rank[*pos])
                .map(|(i, _)| i)
                .expect("a witness has a nonzero coefficient");
            current.remove(victim);
        }
    }

    /// Cardinality of the default greedy basis.
    pub fn dim_greedy(&self) -> Result<usize> {
        Ok(self.greedy_basis(None)?.len())
    }

    /// Runs the greedy basis under `trials` random removal orders.
    pub fn basis_invariance_check(&self, trials: usize, seed: u64) -> Result<InvarianceReport> {
        let n = self.component_basis_vectors().len();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut cardinalities = Vec::with_capacity(trials);
        for _ in 0..trials {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(&mut rng);
            cardinalities.push(self.greedy_basis(Some(&order))?.len());
        }
        let all_agree = cardinalities.windows(2).all(|w| w[0] == w[1]);
        Ok(InvarianceReport {
            cardinalities,
            all_agree,
        })
    }

    /// The alternating sum over all nonempty subsets of components of the
    /// dimension of their common intersection. Subsets spanning more than one
    /// ambient space have an empty intersection and contribute 0.
    pub fn dim_inclusion_exclusion(&self) -> Result<i64> {
        let k = self.k();
        if k > self.caps.subsets {
            return Err(Error::TooManyComponents {
                count: k,
                cap: self.caps.subsets,
            });
        }
        // meets[mask] is the intersection over the components in mask
        let mut meets: Vec<Option<Subspace>> = vec![None; 1 << k];
        let mut total: i64 = 0;
        for mask in 1usize..(1 << k) {
            let low = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            let meet = if rest == 0 {
                Some(self.components[low].clone())
            } else {
                match &meets[rest] {
                    Some(s) if s.ambient() == self.components[low].ambient() => {
                        Some(s.intersect(&self.components[low])?)
                    }
                    _ => None,
                }
            };
            let d = meet.as_ref().map_or(0, |s| s.dim() as i64);
            if mask.count_ones() % 2 == 1 {
                total += d;
            } else {
                total -= d;
            }
            meets[mask] = meet;
        }
        Ok(total)
    }

    /// Checks that every component is closed under its operations,
    /// that mixed additions associate wherever both bracketings exist, and that
    /// `(k₁ + k₂)·a = k₁·a + k₂·a` wherever both sides exist.
    pub fn validate_axioms(&self) -> Result<ValidationReport> {
        let mut report = ValidationReport::default();
        let k = self.k();
        if k > 128 {
            return Err(Error::TooManyComponents { count: k, cap: 128 });
        }

        // (i) closure of each component under α·a + b
        for (name, c) in self.names.iter().zip(&self.components) {
            let elems = c.enumerate(self.caps.enumeration)?;
            let members: HashSet<&Vec<u32>> = elems.iter().collect();
            let p = c.prime();
            for alpha in 0..p.get() {
                for a in &elems {
                    for b in &elems {
                        report.closure_checks += 1;
                        let r: Vec<u32> = a
                            .iter()
                            .zip(b)
                            .map(|(&x, &y)| p.add(p.mul(alpha, x), y))
                            .collect();
                        if !members.contains(&r) {
                            report.closure_violations.push(format!(
                                "{name}: {alpha}·{a:?} + {b:?} = {r:?} leaves the component"
                            ));
                        }
                    }
                }
            }
        }

        // membership masks over the union, grouped by ambient
        let union = self.enumerate_union()?;
        let mut masks: HashMap<&TaggedVector, u128> = HashMap::new();
        for v in &union {
            let mut m = 0u128;
            for (i, c) in self.components.iter().enumerate() {
                if c.ambient() == v.ambient() && c.contains(v.coords())? {
                    m |= 1 << i;
                }
            }
            masks.insert(v, m);
        }
        let mask_of = |v: &TaggedVector| masks.get(v).copied().unwrap_or(0);
        let mut by_ambient: BTreeMap<&AmbientId, Vec<&TaggedVector>> = BTreeMap::new();
        for v in &union {
            by_ambient.entry(v.ambient()).or_default().push(v);
        }

        let triples: u128 = by_ambient.values().map(|e| (e.len() as u128).pow(3)).sum();
        if triples > self.caps.triples {
            return Err(Error::SearchTooLarge {
                size: triples,
                cap: self.caps.triples,
            });
        }

        // (ii) (a +ᵢ b) +ⱼ c = a +ᵢ (b +ⱼ c)
        for (ambient, elems) in &by_ambient {
            let ops: u128 = self
                .components
                .iter()
                .enumerate()
                .filter(|(_, c)| c.ambient() == *ambient)
                .fold(0, |m, (i, _)| m | 1 << i);
            for &a in elems {
                for &b in elems {
                    let ab = a.plus(b);
                    for &c in elems {
                        let bc = b.plus(c);
                        let exists = match self.policy {
                            // every +ᵢ on this ambient is the ambient addition
                            OperationPolicy::Total => ops != 0,
                            OperationPolicy::Closed => {
                                let outer_i = mask_of(a) & mask_of(b) & mask_of(&bc);
                                let outer_j = mask_of(&ab) & mask_of(c) & mask_of(b);
                                outer_i != 0 && outer_j != 0
                            }
                        };
                        if !exists {
                            continue;
                        }
                        report.associativity_checks += 1;
                        let left = ab.plus(c);
                        let right = a.plus(&bc);
                        if left != right {
                            report.associativity_violations.push(format!(
                                "({a} + {b}) + {c} = {left} but {a} + ({b} + {c}) = {right}"
                            ));
                        }
                    }
                }
            }
        }

        // (iii) read as (k₁ + k₂)·a = k₁·a + k₂·a
        for a in &union {
            let p = a.prime();
            for k1 in FpScalar::all(p) {
                for k2 in FpScalar::all(p) {
                    let (Some(x), Some(y), Some(lhs)) =
                        (self.scale(k1, a), self.scale(k2, a), self.scale(k1 + k2, a))
                    else {
                        continue;
                    };
                    let Some(rhs) = self.add(&x, &y) else {
                        continue;
                    };
                    report.distributivity_checks += 1;
                    if lhs != rhs {
                        report.distributivity_violations.push(format!(
                            "({k1} + {k2})·{a} = {lhs} but {k1}·{a} + {k2}·{a} = {rhs}"
                        ));
                    }
                }
            }
        }
        Ok(report)
    }
}

impl fmt::Display for MultiVectorSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [", self.policy)?;
        for (i, (n, c)) in self.names.iter().zip(&self.components).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{n} = {c}")?;
        }
        write!(f, "]")
    }
}

/// Number of elements in a union of subspaces of one ambient space, by
/// inclusion-exclusion over element counts.
fn union_size(parts: &[Subspace], caps: &Caps) -> Result<u128> {
    let parts = prune_contained(parts);
    if parts.len() == 1 {
        return Ok(parts[0].size());
    }
    if parts.len() > caps.subsets {
        return Err(Error::TooManyComponents {
            count: parts.len(),
            cap: caps.subsets,
        });
    }
    let k = parts.len();
    let p = parts.first().map_or(2, |s| s.prime().get()) as u128;
    let mut meets: Vec<Option<Subspace>> = vec![None; 1 << k];
    let mut total: i128 = 0;
    for mask in 1usize..(1 << k) {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let meet = match &meets[rest] {
            None => parts[low].clone(),
            Some(s) => s.intersect(&parts[low])?,
        };
        let size = pow_saturating(p, meet.dim());
        if size == u128::MAX {
            return Err(Error::EnumerationTooLarge {
                size,
                cap: caps.enumeration as u128,
            });
        }
        if mask.count_ones() % 2 == 1 {
            total += size as i128;
        } else {
            total -= size as i128;
        }
        meets[mask] = Some(meet);
    }
    Ok(total as u128)
}

/// Drops duplicates and parts contained in another part.
fn prune_contained(parts: &[Subspace]) -> Vec<Subspace> {
    let mut kept: Vec<Subspace> = Vec::new();
    for (i, s) in parts.iter().enumerate() {
        let absorbed = parts
            .iter()
            .enumerate()
            .any(|(j, t)| j != i && s.is_subspace_of(t) && (s != t || j < i));
        if !absorbed {
            kept.push(s.clone());
        }
    }
    kept
}

/// True when a union of subspaces of one ambient is itself a subspace,
/// i.e. when it has as many elements as the sum of the parts.
fn union_is_subspace(parts: &[Subspace], caps: &Caps) -> Result<bool> {
    let Some(first) = parts.first() else {
        return Ok(true);
    };
    let mut sum = first.clone();
    for s in &parts[1..] {
        sum = sum.sum(s)?;
    }
    Ok(union_size(parts, caps)? == sum.size())
}

/// Subspace criterion for multi-vector spaces: the candidate union lies in
/// the parent union, and every existing `α·a + b` with `a`, `b` in the
/// candidate union lands back in the candidate union. Existence follows the
/// parent's policy.
///
/// Under `TOTAL` the criterion holds iff, per ambient, the union of the
/// candidate components is a subspace. Under `CLOSED` it holds iff, per
/// parent component `P`, the candidate union intersected with `P` is a
/// subspace. Both reduce to comparing element counts.
pub fn is_multi_subspace(candidate: &MultiVectorSpace, parent: &MultiVectorSpace) -> Result<bool> {
    let caps = parent.caps;
    for c in &candidate.components {
        let meets: Vec<Subspace> = parent
            .components
            .iter()
            .filter(|p| p.ambient() == c.ambient())
            .map(|p| c.intersect(p))
            .collect::<Result<_>>()?;
        if meets.is_empty() {
            return Ok(false);
        }
        if meets.iter().any(|m| m == c) {
            continue;
        }
        if union_size(&meets, &caps)? != c.size() {
            return Ok(false);
        }
    }
    for ambient in candidate.ambients() {
        let parts: Vec<Subspace> = candidate
            .components
            .iter()
            .filter(|c| c.ambient() == &ambient)
            .cloned()
            .collect();
        match parent.policy {
            OperationPolicy::Total => {
                if !union_is_subspace(&parts, &caps)? {
                    return Ok(false);
                }
            }
            OperationPolicy::Closed => {
                for p in parent.components.iter().filter(|p| p.ambient() == &ambient) {
                    let traces: Vec<Subspace> = parts
                        .iter()
                        .map(|c| c.intersect(p))
                        .collect::<Result<_>>()?;
                    if !union_is_subspace(&traces, &caps)? {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Subspace criterion for an arbitrary finite subset of a parent union,
/// checked by scanning every `α`, `a`, `b`.
pub fn is_closed_subset(elements: &BTreeSet<TaggedVector>, parent: &MultiVectorSpace) -> bool {
    if !elements.iter().all(|v| parent.union_contains(v)) {
        return false;
    }
    for a in elements {
        for alpha in FpScalar::all(a.prime()) {
            let Some(t) = parent.scale(alpha, a) else {
                continue;
            };
            for b in elements {
                if let Some(r) = parent.add(&t, b) {
                    if !elements.contains(&r) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Pairwise intersections of components sharing an ambient, without
/// duplicates. The union of the result is the intersection of the unions; it
/// may have no components at all.
pub fn intersect_multispaces(
    first: &MultiVectorSpace,
    second: &MultiVectorSpace,
) -> Result<MultiVectorSpace> {
    first.require_same_policy(second)?;
    let mut components: Vec<Subspace> = Vec::new();
    let mut names = Vec::new();
    for (ni, s) in first.names.iter().zip(&first.components) {
        for (nj, t) in second.names.iter().zip(&second.components) {
            if s.ambient() != t.ambient() {
                continue;
            }
            let meet = s.intersect(t)?;
            if !components.contains(&meet) {
                components.push(meet);
                names.push(format!("{ni}&{nj}"));
            }
        }
    }
    MultiVectorSpace::build(components, names, first.policy, first.caps)
}

/// Both sides of `dim(V₁ ∪ V₂) = dim V₁ + dim V₂ − dim(V₁ ∩ V₂)`, each measured
/// with the greedy basis.
pub fn additive_formula_check(
    first: &MultiVectorSpace,
    second: &MultiVectorSpace,
) -> Result<AdditiveReport> {
    let union = first.concat(second)?;
    let meet = intersect_multispaces(first, second)?;
    Ok(AdditiveReport {
        union_dim: union.dim_greedy()?,
        first_dim: first.dim_greedy()?,
        second_dim: second.dim_greedy()?,
        intersection_dim: meet.dim_greedy()?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    fn amb(label: &str, p: u64, n: usize) -> AmbientId {
        AmbientId::new(label, gf(p), n)
    }

    fn line(a: &AmbientId, v: &[u32]) -> Subspace {
        Subspace::from_vectors(a, &[v]).unwrap()
    }

    fn tv(a: &AmbientId, v: &[u32]) -> TaggedVector {
        TaggedVector::new(a, v.to_vec()).unwrap()
    }

    fn s(p: u64, v: u64) -> FpScalar {
        FpScalar::new(v, gf(p)).unwrap()
    }

    fn three_lines(policy: OperationPolicy) -> MultiVectorSpace {
        let a = amb("A", 2, 2);
        MultiVectorSpace::new(
            vec![line(&a, &[1, 0]), line(&a, &[0, 1]), line(&a, &[1, 1])],
            policy,
        )
        .unwrap()
    }

    fn two_lines(policy: OperationPolicy) -> MultiVectorSpace {
        let a = amb("A", 2, 2);
        MultiVectorSpace::new(vec![line(&a, &[1, 0]), line(&a, &[0, 1])], policy).unwrap()
    }

    #[test]
    fn construction_rules() {
        assert_eq!(
            MultiVectorSpace::new(vec![], OperationPolicy::Total),
            Err(Error::NoComponents)
        );
        let a = amb("A", 2, 2);
        let a3 = amb("A", 3, 2);
        let err = MultiVectorSpace::new(
            vec![Subspace::full(&a), Subspace::full(&a3)],
            OperationPolicy::Total,
        );
        assert!(matches!(err, Err(Error::AmbientMismatch { .. })));
    }

    #[test]
    fn policy_round_trips_through_text() {
        for p in [OperationPolicy::Total, OperationPolicy::Closed] {
            assert_eq!(p.to_string().parse::<OperationPolicy>().unwrap(), p);
        }
        assert!("total".parse::<OperationPolicy>().is_err());
    }

    #[test]
    fn union_contains_examples() {
        let a = amb("A", 2, 2);
        let m = MultiVectorSpace::new(vec![line(&a, &[0, 1])], OperationPolicy::Total).unwrap();
        assert!(m.union_contains(&TaggedVector::zero(&a)));
        assert!(!m.union_contains(&tv(&a, &[1, 0])));
        assert!(m.union_contains(&tv(&a, &[0, 1])));
        let b = amb("B", 2, 2);
        assert!(!m.union_contains(&TaggedVector::zero(&b)));
    }

    #[test]
    fn chain_examples() {
        let a = amb("A", 2, 2);
        let m = two_lines(OperationPolicy::Total);
        let x = tv(&a, &[1, 0]);
        let y = tv(&a, &[0, 1]);
        let single = [ChainTerm::new(s(2, 1), x.clone()).unwrap()];
        assert_eq!(m.evaluate_chain(&single).unwrap(), Some(x.clone()));

        let pair = [
            ChainTerm::new(s(2, 1), x.clone()).unwrap(),
            ChainTerm::new(s(2, 1), y.clone()).unwrap(),
        ];
        assert_eq!(m.evaluate_chain(&pair).unwrap(), Some(tv(&a, &[1, 1])));

        let closed = two_lines(OperationPolicy::Closed);
        assert_eq!(closed.evaluate_chain(&pair).unwrap(), None);
        assert_eq!(m.evaluate_chain(&[]), Err(Error::EmptyChain));
    }

    #[test]
    fn chain_term_rejects_foreign_scalar() {
        let a = amb("A", 2, 2);
        assert!(ChainTerm::new(s(3, 1), tv(&a, &[1, 0])).is_err());
    }

    #[test]
    fn chains_never_cross_ambients() {
        let a = amb("A", 2, 1);
        let b = amb("B", 2, 1);
        let m = MultiVectorSpace::new(
            vec![Subspace::full(&a), Subspace::full(&b)],
            OperationPolicy::Total,
        )
        .unwrap();
        let chain = [
            ChainTerm::new(s(2, 0), tv(&a, &[1])).unwrap(),
            ChainTerm::new(s(2, 0), tv(&b, &[1])).unwrap(),
        ];
        assert_eq!(m.evaluate_chain(&chain).unwrap(), None);
    }

    #[test]
    fn dependence_examples() {
        let a = amb("A", 2, 2);
        for policy in [OperationPolicy::Total, OperationPolicy::Closed] {
            let m = MultiVectorSpace::new(vec![Subspace::full(&a)], policy).unwrap();
            let d = m.linearly_dependent(&[TaggedVector::zero(&a)]).unwrap();
            assert_eq!(d.witness, Some(vec![s(2, 1)]));

            let d = m
                .linearly_dependent(&[tv(&a, &[1, 0]), tv(&a, &[0, 1])])
                .unwrap();
            assert!(!d.is_dependent());

            let d = m
                .linearly_dependent(&[tv(&a, &[1, 0]), tv(&a, &[1, 0])])
                .unwrap();
            assert_eq!(d.witness, Some(vec![s(2, 1), s(2, 1)]));
        }
    }

    #[test]
    fn zero_vector_gets_unit_coefficient_after_independent_prefix() {
        let a = amb("A", 3, 2);
        let m = MultiVectorSpace::new(vec![Subspace::full(&a)], OperationPolicy::Total).unwrap();
        let d = m
            .linearly_dependent(&[tv(&a, &[1, 0]), tv(&a, &[0, 1]), TaggedVector::zero(&a)])
            .unwrap();
        assert_eq!(d.witness, Some(vec![s(3, 0), s(3, 0), s(3, 1)]));
    }

    #[test]
    fn closed_policy_can_make_total_dependence_vanish() {
        // under TOTAL the three lines are dependent; under CLOSED no component
        // holds two of them, so no nonzero chain through all three exists
        let a = amb("A", 2, 2);
        let vs = [tv(&a, &[1, 0]), tv(&a, &[0, 1]), tv(&a, &[1, 1])];
        assert!(three_lines(OperationPolicy::Total)
            .linearly_dependent(&vs)
            .unwrap()
            .is_dependent());
        assert!(!three_lines(OperationPolicy::Closed)
            .linearly_dependent(&vs)
            .unwrap()
            .is_dependent());
    }

    #[test]
    fn witnesses_evaluate_to_zero() {
        let a = amb("A", 3, 2);
        let m = MultiVectorSpace::new(
            vec![Subspace::full(&a), line(&a, &[1, 2])],
            OperationPolicy::Closed,
        )
        .unwrap();
        let vs = [tv(&a, &[1, 0]), tv(&a, &[0, 1]), tv(&a, &[1, 2])];
        let w = m.linearly_dependent(&vs).unwrap().witness.unwrap();
        let chain: Vec<ChainTerm> = w
            .iter()
            .zip(&vs)
            .map(|(c, v)| ChainTerm::new(*c, v.clone()).unwrap())
            .collect();
        assert!(m.evaluate_chain(&chain).unwrap().unwrap().is_zero());
        assert!(w.iter().any(|c| !c.is_zero()));
    }

    #[test]
    fn closed_search_respects_cap() {
        let a = amb("A", 3, 3);
        let m = MultiVectorSpace::new(vec![Subspace::full(&a)], OperationPolicy::Closed)
            .unwrap()
            .with_caps(Caps {
                coefficients: 5,
                ..Caps::default()
            });
        let err = m.linearly_dependent(&[tv(&a, &[1, 0, 0]), tv(&a, &[0, 1, 0])]);
        assert!(matches!(err, Err(Error::SearchTooLarge { .. })));
    }

    #[test]
    fn span_examples() {
        let a = amb("A", 3, 2);
        let m = MultiVectorSpace::new(vec![Subspace::full(&a)], OperationPolicy::Total).unwrap();
        let zero: BTreeSet<_> = [TaggedVector::zero(&a)].into_iter().collect();
        assert_eq!(m.linear_span(&[]).unwrap(), zero);
        let v = tv(&a, &[1, 2]);
        let span = m.linear_span(std::slice::from_ref(&v)).unwrap();
        let expected: BTreeSet<_> = [TaggedVector::zero(&a), v.clone(), tv(&a, &[2, 1])]
            .into_iter()
            .collect();
        assert_eq!(span, expected);
    }

    #[test]
    fn span_is_filtered_to_the_union() {
        let m = two_lines(OperationPolicy::Total);
        let gens = m.component_basis_vectors();
        let reach = m.reachable_values(&gens).unwrap();
        assert_eq!(reach.len(), 4);
        let span = m.linear_span(&gens).unwrap();
        assert_eq!(span, m.enumerate_union().unwrap());
        assert_eq!(span.len(), 3);
    }

    #[test]
    fn span_of_all_bases_is_sum_space_when_union_is_closed() {
        let m = three_lines(OperationPolicy::Total);
        let a = amb("A", 2, 2);
        let full: BTreeSet<_> = Subspace::full(&a)
            .enumerate(729)
            .unwrap()
            .into_iter()
            .map(|c| tv(&a, &c))
            .collect();
        assert_eq!(m.linear_span(&m.component_basis_vectors()).unwrap(), full);
    }

    #[test]
    fn greedy_examples() {
        let a = amb("A", 3, 3);
        let plane = Subspace::from_vectors(&a, &[[1, 2, 0], [0, 1, 1]]).unwrap();
        let m = MultiVectorSpace::new(vec![plane.clone()], OperationPolicy::Total).unwrap();
        let b = m.greedy_basis(None).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b[0].coords(), plane.basis().row(0));
        assert_eq!(b[1].coords(), plane.basis().row(1));

        assert_eq!(two_lines(OperationPolicy::Total).dim_greedy().unwrap(), 2);
        let g = three_lines(OperationPolicy::Total)
            .greedy_basis(None)
            .unwrap();
        let a2 = amb("A", 2, 2);
        // default removal drops the first witness participant, (1,0)
        assert_eq!(g, vec![tv(&a2, &[0, 1]), tv(&a2, &[1, 1])]);
    }

    #[test]
    fn greedy_with_removal_order() {
        let m = three_lines(OperationPolicy::Total);
        let a = amb("A", 2, 2);
        let g = m.greedy_basis(Some(&[2, 1, 0])).unwrap();
        assert_eq!(g, vec![tv(&a, &[1, 0]), tv(&a, &[0, 1])]);
        assert_eq!(
            m.greedy_basis(Some(&[0, 0, 1])),
            Err(Error::InvalidPermutation(3))
        );
        assert_eq!(
            m.greedy_basis(Some(&[0])),
            Err(Error::InvalidPermutation(3))
        );
    }

    #[test]
    fn greedy_under_closed_keeps_three_lines() {
        assert_eq!(
            three_lines(OperationPolicy::Closed).dim_greedy().unwrap(),
            3
        );
    }

    #[test]
    fn invariance_examples() {
        let r = three_lines(OperationPolicy::Total)
            .basis_invariance_check(20, 1)
            .unwrap();
        assert_eq!(r.cardinalities, vec![2; 20]);
        assert!(r.all_agree);
        let r = two_lines(OperationPolicy::Closed)
            .basis_invariance_check(1, 9)
            .unwrap();
        assert!(r.all_agree);
        let r = two_lines(OperationPolicy::Total)
            .basis_invariance_check(0, 9)
            .unwrap();
        assert!(r.all_agree && r.cardinalities.is_empty());
    }

    #[test]
    fn inclusion_exclusion_examples() {
        let a = amb("A", 3, 3);
        let s = Subspace::from_vectors(&a, &[[1, 0, 0], [0, 1, 0]]).unwrap();
        let t = Subspace::from_vectors(&a, &[[0, 1, 0], [0, 0, 1]]).unwrap();
        let one = MultiVectorSpace::new(vec![s.clone()], OperationPolicy::Total).unwrap();
        assert_eq!(one.dim_inclusion_exclusion().unwrap(), 2);
        let two = MultiVectorSpace::new(vec![s, t], OperationPolicy::Total).unwrap();
        // 2 + 2 - 1
        assert_eq!(two.dim_inclusion_exclusion().unwrap(), 3);
        assert_eq!(two.dim_greedy().unwrap(), 3);
        let m = three_lines(OperationPolicy::Total);
        assert_eq!(m.dim_inclusion_exclusion().unwrap(), 3);
        assert_eq!(m.dim_greedy().unwrap(), 2);
    }

    #[test]
    fn inclusion_exclusion_cross_ambient_subsets_count_zero() {
        let a = amb("A", 2, 2);
        let b = amb("B", 3, 1);
        let m = MultiVectorSpace::new(
            vec![Subspace::full(&a), Subspace::full(&b)],
            OperationPolicy::Total,
        )
        .unwrap();
        assert_eq!(m.dim_inclusion_exclusion().unwrap(), 3);
    }

    #[test]
    fn inclusion_exclusion_cap() {
        let a = amb("A", 2, 1);
        let m =
            MultiVectorSpace::new(vec![Subspace::full(&a); 13], OperationPolicy::Total).unwrap();
        assert_eq!(
            m.dim_inclusion_exclusion(),
            Err(Error::TooManyComponents { count: 13, cap: 12 })
        );
    }

    #[test]
    fn multi_subspace_examples() {
        let a = amb("A", 2, 2);
        let parent =
            MultiVectorSpace::new(vec![Subspace::full(&a)], OperationPolicy::Total).unwrap();
        assert!(is_multi_subspace(&parent, &parent).unwrap());
        let zero = MultiVectorSpace::new(vec![Subspace::zero(&a)], OperationPolicy::Total).unwrap();
        assert!(is_multi_subspace(&zero, &parent).unwrap());
        let diag = MultiVectorSpace::new(vec![line(&a, &[1, 1])], OperationPolicy::Total).unwrap();
        assert!(is_multi_subspace(&diag, &parent).unwrap());
        // two lines: (1,0) + (0,1) = (1,1) escapes
        assert!(!is_multi_subspace(&two_lines(OperationPolicy::Total), &parent).unwrap());
        // all three lines cover GF(2)^2
        assert!(is_multi_subspace(&three_lines(OperationPolicy::Total), &parent).unwrap());
    }

    #[test]
    fn multi_subspace_needs_containment() {
        let a = amb("A", 2, 2);
        let parent = two_lines(OperationPolicy::Closed);
        let diag = MultiVectorSpace::new(vec![line(&a, &[1, 1])], OperationPolicy::Closed).unwrap();
        assert!(!is_multi_subspace(&diag, &parent).unwrap());
        // under CLOSED the two lines of the parent are fine on their own
        assert!(is_multi_subspace(&parent, &parent).unwrap());
    }

    #[test]
    fn closed_subset_example() {
        let a = amb("A", 2, 2);
        let parent =
            MultiVectorSpace::new(vec![Subspace::full(&a)], OperationPolicy::Total).unwrap();
        let single: BTreeSet<_> = [tv(&a, &[1, 0])].into_iter().collect();
        assert!(!is_closed_subset(&single, &parent));
        let with_zero: BTreeSet<_> = [tv(&a, &[1, 0]), TaggedVector::zero(&a)]
            .into_iter()
            .collect();
        assert!(is_closed_subset(&with_zero, &parent));
    }

    #[test]
    fn intersect_multispaces_examples() {
        let a = amb("A", 2, 2);
        let m = three_lines(OperationPolicy::Total);
        let mm = intersect_multispaces(&m, &m).unwrap();
        assert_eq!(mm.enumerate_union().unwrap(), m.enumerate_union().unwrap());

        let x = MultiVectorSpace::new(vec![line(&a, &[1, 0])], OperationPolicy::Total).unwrap();
        let y = MultiVectorSpace::new(vec![line(&a, &[0, 1])], OperationPolicy::Total).unwrap();
        let xy = intersect_multispaces(&x, &y).unwrap();
        assert_eq!(
            xy.enumerate_union().unwrap(),
            [TaggedVector::zero(&a)].into_iter().collect()
        );

        let b = amb("B", 2, 2);
        let z = MultiVectorSpace::new(vec![Subspace::full(&b)], OperationPolicy::Total).unwrap();
        let none = intersect_multispaces(&x, &z).unwrap();
        assert_eq!(none.k(), 0);
        assert!(none.enumerate_union().unwrap().is_empty());
        assert_eq!(none.dim_greedy().unwrap(), 0);

        assert!(matches!(
            intersect_multispaces(&x, &x.clone().with_policy(OperationPolicy::Closed)),
            Err(Error::PolicyMismatch { .. })
        ));
    }

    #[test]
    fn additive_examples() {
        let m = three_lines(OperationPolicy::Total);
        let r = additive_formula_check(&m, &m).unwrap();
        assert_eq!(r.union_dim, 2);
        assert_eq!(r.right_side(), 2);
        assert!(r.agree());

        let a = amb("A", 2, 2);
        let x = MultiVectorSpace::new(vec![line(&a, &[1, 0])], OperationPolicy::Total).unwrap();
        let y = MultiVectorSpace::new(vec![line(&a, &[0, 1])], OperationPolicy::Total).unwrap();
        let r = additive_formula_check(&x, &y).unwrap();
        assert_eq!(
            (r.union_dim, r.first_dim, r.second_dim, r.intersection_dim),
            (2, 1, 1, 0)
        );

        let b = amb("B", 3, 1);
        let u = MultiVectorSpace::new(vec![Subspace::full(&a)], OperationPolicy::Closed).unwrap();
        let v = MultiVectorSpace::new(vec![Subspace::full(&b)], OperationPolicy::Closed).unwrap();
        let r = additive_formula_check(&u, &v).unwrap();
        assert_eq!(
            (r.union_dim, r.first_dim, r.second_dim, r.intersection_dim),
            (3, 2, 1, 0)
        );
    }

    #[test]
    fn validation_examples() {
        let a = amb("A", 3, 2);
        let single =
            MultiVectorSpace::new(vec![line(&a, &[1, 2])], OperationPolicy::Closed).unwrap();
        assert!(single.validate_axioms().unwrap().is_valid());

        let m = three_lines(OperationPolicy::Total);
        let r = m.validate_axioms().unwrap();
        assert!(r.is_valid());
        assert_eq!(r.associativity_checks, 64);

        let b = amb("B", 2, 1);
        let c = amb("C", 3, 1);
        let split = MultiVectorSpace::new(
            vec![Subspace::full(&b), Subspace::full(&c)],
            OperationPolicy::Closed,
        )
        .unwrap();
        let r = split.validate_axioms().unwrap();
        assert!(r.is_valid());
        // triples only ever combine vectors of one ambient
        assert_eq!(r.associativity_checks, 8 + 27);
    }

    #[test]
    fn validation_counts_closed_triples() {
        // two lines of GF(2)^2 under CLOSED: a triple is checked only when
        // every bracketing stays inside one line, i.e. a, b, c on one line
        let r = two_lines(OperationPolicy::Closed)
            .validate_axioms()
            .unwrap();
        assert!(r.is_valid());
        // 8 triples on each line, the all-zero triple counted once
        assert_eq!(r.associativity_checks, 8 + 8 - 1);
    }
}
