//! Subspaces of a labelled coordinate space GF(p)^n, kept in canonical RREF.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{rref, solve_membership, FpMatrix, Prime};

/// Default ceiling on the number of vectors an enumeration may produce (3^6).
pub const DEFAULT_ENUMERATION_CAP: usize = 729;

/// Identifies the coordinate space a vector or subspace lives in. Subspaces
/// under different ids never share elements, not even the zero vector.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AmbientId {
    label: Arc<str>,
    p: Prime,
    n: usize,
}

impl AmbientId {
    pub fn new(label: impl AsRef<str>, p: Prime, n: usize) -> Self {
        AmbientId {
            label: Arc::from(label.as_ref()),
            p,
            n,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Number of vectors in the whole ambient space, saturating.
    pub fn size(&self) -> u128 {
        pow_saturating(self.p.get() as u128, self.n)
    }

    pub fn zero_vector(&self) -> Vec<u32> {
        vec![0; self.n]
    }

    /// Checks that `v` is a coordinate vector of this space.
    pub fn check_vector(&self, v: &[u32]) -> Result<()> {
        if v.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: v.len(),
            });
        }
        for &x in v {
            self.p.check(x as u64)?;
        }
        Ok(())
    }
}

impl fmt::Display for AmbientId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = GF({})^{}", self.label, self.p, self.n)
    }
}

pub(crate) fn pow_saturating(base: u128, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base);
    }
    acc
}

/// A subspace stored by its RREF basis, so equal subspaces have equal bases.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: AmbientId,
    basis: FpMatrix,
}

impl Subspace {
    /// Span of the rows of `generators`.
    pub fn span(ambient: &AmbientId, generators: &FpMatrix) -> Result<Self> {
        if generators.prime() != ambient.p {
            return Err(Error::PrimeMismatch {
                expected: ambient.p.get(),
                found: generators.prime().get(),
            });
        }
        if generators.cols() != ambient.n {
            return Err(Error::DimensionMismatch {
                expected: ambient.n,
                found: generators.cols(),
            });
        }
        Ok(Subspace {
            ambient: ambient.clone(),
            basis: rref(generators).basis(),
        })
    }

    /// Span of a list of coordinate vectors.
    pub fn from_vectors<R: AsRef<[u32]>>(ambient: &AmbientId, vectors: &[R]) -> Result<Self> {
        let m = FpMatrix::from_rows(ambient.p, ambient.n, vectors)?;
        Self::span(ambient, &m)
    }

    pub fn zero(ambient: &AmbientId) -> Self {
        Subspace {
            ambient: ambient.clone(),
            basis: FpMatrix::zeros(ambient.p, 0, ambient.n),
        }
    }

    pub fn full(ambient: &AmbientId) -> Self {
        Subspace {
            ambient: ambient.clone(),
            basis: FpMatrix::identity(ambient.p, ambient.n),
        }
    }

    pub fn ambient(&self) -> &AmbientId {
        &self.ambient
    }

    pub fn prime(&self) -> Prime {
        self.ambient.p
    }

    /// Canonical basis: RREF, no zero rows.
    pub fn basis(&self) -> &FpMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    /// Number of elements, saturating at `u128::MAX`.
    pub fn size(&self) -> u128 {
        pow_saturating(self.prime().get() as u128, self.dim())
    }

    pub fn contains(&self, v: &[u32]) -> Result<bool> {
        self.ambient.check_vector(v)?;
        Ok(solve_membership(&self.basis, v)?.is_some())
    }

    fn require_same_ambient(&self, other: &Subspace) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::AmbientMismatch {
                left: self.ambient.to_string(),
                right: other.ambient.to_string(),
            });
        }
        Ok(())
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        Ok(self.zassenhaus(other)?.0)
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace> {
        Ok(self.zassenhaus(other)?.1)
    }

    /// Returns `(sum, intersection)` from one elimination of the block matrix
    ///
    /// ```text
    /// [ U | U ]
    /// [ W | 0 ]
    /// ```
    ///
    /// Rows of the reduced matrix with a nonzero left half give a basis of
    /// U + W; rows whose left half vanished carry a basis of U ∩ W on the right.
    pub fn zassenhaus(&self, other: &Subspace) -> Result<(Subspace, Subspace)> {
        self.require_same_ambient(other)?;
        let n = self.ambient.n;
        let p = self.ambient.p;
        let rows = self.dim() + other.dim();
        let mut entries = Vec::with_capacity(rows * 2 * n);
        for r in self.basis.row_iter() {
            entries.extend_from_slice(r);
            entries.extend_from_slice(r);
        }
        for r in other.basis.row_iter() {
            entries.extend_from_slice(r);
            entries.extend(std::iter::repeat_n(0, n));
        }
        let block = FpMatrix::new(p, rows, 2 * n, entries)?;
        let reduced = rref(&block);
        let sum_rank = reduced.pivots.iter().take_while(|&&c| c < n).count();
        let sum_basis = reduced.matrix.row_slice(0..sum_rank).col_slice(0..n);
        let meet = reduced
            .matrix
            .row_slice(sum_rank..reduced.rank)
            .col_slice(n..2 * n);
        Ok((
            Subspace {
                ambient: self.ambient.clone(),
                basis: sum_basis,
            },
            Subspace {
                ambient: self.ambient.clone(),
                basis: rref(&meet).basis(),
            },
        ))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.ambient == other.ambient
            && self
                .basis
                .row_iter()
                .all(|r| solve_membership(&other.basis, r).ok().flatten().is_some())
    }

    /// Every element, ordered lexicographically by coefficient tuple over the
    /// canonical basis (first coefficient most significant).
    pub fn enumerate(&self, cap: usize) -> Result<Vec<Vec<u32>>> {
        let size = self.size();
        if size > cap as u128 {
            return Err(Error::EnumerationTooLarge {
                size,
                cap: cap as u128,
            });
        }
        let p = self.prime();
        let n = self.ambient.n;
        let d = self.dim();
        let mut out = Vec::with_capacity(size as usize);
        let mut coeffs = vec![0u32; d];
        loop {
            let mut v = vec![0u32; n];
            for (c, row) in coeffs.iter().zip(self.basis.row_iter()) {
                if *c != 0 {
                    for (x, &b) in v.iter_mut().zip(row) {
                        *x = p.add(*x, p.mul(*c, b));
                    }
                }
            }
            out.push(v);
            // odometer with the last coefficient running fastest
            let mut i = d;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                coeffs[i] += 1;
                if coeffs[i] < p.get() {
                    break;
                }
                coeffs[i] = 0;
            }
        }
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "span{{")?;
        for (i, r) in self.basis.row_iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let cells: Vec<String> = r.iter().map(|x| x.to_string()).collect();
            write!(f, "{}", cells.join(","))?;
        }
        write!(f, "}} in {}", self.ambient.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn amb(p: u64, n: usize) -> AmbientId {
        AmbientId::new("A", Prime::new(p).unwrap(), n)
    }

    fn set(v: Vec<Vec<u32>>) -> BTreeSet<Vec<u32>> {
        v.into_iter().collect()
    }

    #[test]
    fn span_examples() {
        let a = amb(2, 2);
        let empty: [[u32; 2]; 0] = [];
        assert_eq!(Subspace::from_vectors(&a, &empty).unwrap().dim(), 0);
        let s = Subspace::from_vectors(&a, &[[1, 0], [0, 1], [1, 1]]).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(s.enumerate(729).unwrap().len(), 4);

        let a3 = amb(3, 2);
        let s = Subspace::from_vectors(&a3, &[[1, 1]]).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(s.basis().row(0), &[1, 1]);
    }

    #[test]
    fn span_rejects_wrong_shape() {
        let a = amb(2, 2);
        let m = FpMatrix::zeros(Prime::new(2).unwrap(), 1, 3);
        assert!(matches!(
            Subspace::span(&a, &m),
            Err(Error::DimensionMismatch { .. })
        ));
        let m = FpMatrix::zeros(Prime::new(3).unwrap(), 1, 2);
        assert!(matches!(
            Subspace::span(&a, &m),
            Err(Error::PrimeMismatch { .. })
        ));
    }

    #[test]
    fn contains_examples() {
        let a = amb(2, 2);
        assert!(Subspace::full(&a).contains(&[1, 1]).unwrap());
        let line = Subspace::from_vectors(&a, &[[1, 1]]).unwrap();
        assert!(!line.contains(&[1, 0]).unwrap());
        assert!(line.contains(&[0, 0]).unwrap());
        assert!(Subspace::zero(&a).contains(&[0, 0]).unwrap());
        assert!(line.contains(&[1]).is_err());
    }

    #[test]
    fn sum_examples() {
        let a = amb(2, 2);
        let s = Subspace::from_vectors(&a, &[[1, 1]]).unwrap();
        assert_eq!(s.sum(&Subspace::zero(&a)).unwrap(), s);
        assert_eq!(s.sum(&s).unwrap(), s);
        let x = Subspace::from_vectors(&a, &[[1, 0]]).unwrap();
        let y = Subspace::from_vectors(&a, &[[0, 1]]).unwrap();
        assert_eq!(x.sum(&y).unwrap(), Subspace::full(&a));
    }

    #[test]
    fn intersect_examples() {
        let a = amb(2, 2);
        let x = Subspace::from_vectors(&a, &[[1, 0]]).unwrap();
        let y = Subspace::from_vectors(&a, &[[0, 1]]).unwrap();
        assert_eq!(x.intersect(&x).unwrap(), x);
        assert_eq!(x.intersect(&y).unwrap(), Subspace::zero(&a));
        assert_eq!(Subspace::full(&a).intersect(&y).unwrap(), y);
    }

    #[test]
    fn intersect_needs_shared_ambient() {
        let p = Prime::new(2).unwrap();
        let a = AmbientId::new("A", p, 2);
        let b = AmbientId::new("B", p, 2);
        let err = Subspace::full(&a).intersect(&Subspace::full(&b));
        assert!(matches!(err, Err(Error::AmbientMismatch { .. })));
    }

    #[test]
    fn intersect_planes_in_gf3_cubed() {
        // x+y = 0 and z = 0 meet in span{(1,2,0)}
        let a = amb(3, 3);
        let s = Subspace::from_vectors(&a, &[[1, 2, 0], [0, 0, 1]]).unwrap();
        let t = Subspace::from_vectors(&a, &[[1, 0, 0], [0, 1, 0]]).unwrap();
        let meet = s.intersect(&t).unwrap();
        let brute: BTreeSet<_> = set(s.enumerate(729).unwrap())
            .intersection(&set(t.enumerate(729).unwrap()))
            .cloned()
            .collect();
        assert_eq!(set(meet.enumerate(729).unwrap()), brute);
        assert_eq!(meet.basis().row(0), &[1, 2, 0]);
    }

    #[test]
    fn equality_examples() {
        let a = amb(2, 2);
        let s = Subspace::from_vectors(&a, &[[1, 1], [1, 0]]).unwrap();
        let t = Subspace::from_vectors(&a, &[[1, 0], [0, 1]]).unwrap();
        assert_eq!(s, t);
        let a1 = amb(2, 1);
        assert_ne!(Subspace::zero(&a1), Subspace::full(&a1));
        assert_eq!(s, s.clone());
    }

    #[test]
    fn enumerate_examples() {
        let a = amb(2, 3);
        assert_eq!(
            Subspace::zero(&a).enumerate(729).unwrap(),
            vec![vec![0, 0, 0]]
        );
        let a2 = amb(2, 2);
        let line = Subspace::from_vectors(&a2, &[[1, 1]]).unwrap();
        assert_eq!(line.enumerate(729).unwrap(), vec![vec![0, 0], vec![1, 1]]);
        let a3 = amb(3, 2);
        let all = Subspace::full(&a3).enumerate(729).unwrap();
        assert_eq!(all.len(), 9);
        assert_eq!(set(all.clone()).len(), 9);
        assert_eq!(all[1], vec![0, 1]);
        assert_eq!(all[3], vec![1, 0]);
    }

    #[test]
    fn enumerate_respects_cap() {
        let a = amb(3, 7);
        assert_eq!(
            Subspace::full(&a).enumerate(729),
            Err(Error::EnumerationTooLarge {
                size: 2187,
                cap: 729
            })
        );
        assert_eq!(
            Subspace::full(&amb(3, 6)).enumerate(729).unwrap().len(),
            729
        );
    }

    #[test]
    fn containment_order() {
        let a = amb(5, 3);
        let s = Subspace::from_vectors(&a, &[[1, 2, 3]]).unwrap();
        let t = Subspace::from_vectors(&a, &[[1, 2, 3], [0, 1, 1]]).unwrap();
        assert!(s.is_subspace_of(&t));
        assert!(!t.is_subspace_of(&s));
    }
}
