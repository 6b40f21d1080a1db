//! Complex matrix representations of finite groups and their characters.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, SubgroupRef};
use crate::linalg::{self, c, CMatrix};

/// A representation of a subgroup `H` of some parent group.
///
/// `matrices[i]` is the image of `domain.elements()[i]`.
#[derive(Clone, Debug)]
pub struct Representation {
    domain: SubgroupRef,
    dim: usize,
    matrices: Vec<CMatrix>,
}

/// Outcome of [`Representation::validate`].
#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub valid: bool,
    pub max_deviation: f64,
    /// Pair `(g, h)` where `ρ(g)ρ(h) − ρ(gh)` is largest; `(e, e)` stands for
    /// the identity check.
    pub worst_pair: Option<(usize, usize)>,
}

#[derive(Clone, Debug)]
pub struct Character {
    domain: SubgroupRef,
    values: Vec<Complex64>,
}

/// Basis adapted to the fixed subspace of a subgroup.
#[derive(Clone, Debug)]
pub struct AdaptedBasis {
    pub matrix: CMatrix,
    pub fixed_dim: usize,
}

impl Representation {
    /// Checks shapes only; use [`Self::validate`] for the homomorphism test.
    pub fn new(domain: SubgroupRef, dim: usize, matrices: Vec<CMatrix>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Shape("representation dimension must be positive".into()));
        }
        if matrices.len() != domain.order() {
            return Err(Error::Shape(format!(
                "{} matrices for a group of order {}",
                matrices.len(),
                domain.order()
            )));
        }
        for (i, m) in matrices.iter().enumerate() {
            if m.shape() != (dim, dim) {
                return Err(Error::Shape(format!(
                    "matrix of element {} has shape {:?}, expected {dim}×{dim}",
                    domain.elements()[i],
                    m.shape()
                )));
            }
        }
        Ok(Self { domain, dim, matrices })
    }

    /// Like [`Self::new`] but also rejects matrices that fail validation at `tol`.
    pub fn new_validated(domain: SubgroupRef, dim: usize, matrices: Vec<CMatrix>, tol: f64) -> Result<Self> {
        let rep = Self::new(domain, dim, matrices)?;
        let report = rep.validate(tol);
        if !report.valid {
            return Err(Error::InvalidRep(format!(
                "homomorphism deviation {:.3e} at {:?}",
                report.max_deviation, report.worst_pair
            )));
        }
        Ok(rep)
    }

    /// Builds a rep from a closure on parent element indices.
    pub fn from_fn(domain: SubgroupRef, dim: usize, f: impl Fn(usize) -> CMatrix) -> Result<Self> {
        let matrices = domain.elements().iter().map(|&g| f(g)).collect();
        Self::new(domain, dim, matrices)
    }

    pub fn trivial(domain: SubgroupRef, dim: usize) -> Result<Self> {
        Self::from_fn(domain, dim, |_| linalg::identity(dim))
    }

    /// Left regular representation: `ρ(g) e_h = e_{gh}`, basis ordered as the
    /// domain's elements.
    pub fn regular(domain: SubgroupRef) -> Self {
        let n = domain.order();
        let parent = domain.parent().clone();
        let matrices = domain
            .elements()
            .iter()
            .map(|&g| {
                let mut m = CMatrix::zeros(n, n);
                for (j, &h) in domain.elements().iter().enumerate() {
                    let row = domain.position(parent.mul(g, h)).expect("closed subgroup");
                    m[(row, j)] = c(1.0, 0.0);
                }
                m
            })
            .collect();
        Self { domain, dim: n, matrices }
    }

    /// One-dimensional rep from scalar values listed per domain element.
    pub fn one_dim(domain: SubgroupRef, values: &[Complex64]) -> Result<Self> {
        let matrices = values.iter().map(|&z| CMatrix::from_element(1, 1, z)).collect();
        Self::new(domain, 1, matrices)
    }

    pub fn domain(&self) -> &SubgroupRef {
        &self.domain
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        self.domain.parent()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    /// Image of parent element `g`, which must lie in the domain.
    pub fn matrix(&self, g: usize) -> Result<&CMatrix> {
        self.domain
            .position(g)
            .map(|i| &self.matrices[i])
            .ok_or_else(|| Error::InvalidSubgroup(format!("element {g} is not in the representation's domain")))
    }

    pub fn validate(&self, tol: f64) -> ValidationReport {
        let g = self.domain.parent();
        let e = g.identity();
        let id_dev = linalg::max_abs_diff(&self.matrices[self.domain.position(e).unwrap()], &linalg::identity(self.dim));
        let mut worst = (id_dev, (e, e));
        let els = self.domain.elements();
        for (i, &a) in els.iter().enumerate() {
            for (j, &b) in els.iter().enumerate() {
                let ab = self.domain.position(g.mul(a, b)).unwrap();
                let dev = linalg::max_abs_diff(&(&self.matrices[i] * &self.matrices[j]), &self.matrices[ab]);
                if dev > worst.0 {
                    worst = (dev, (a, b));
                }
            }
        }
        ValidationReport { valid: worst.0 <= tol, max_deviation: worst.0, worst_pair: Some(worst.1) }
    }

    pub fn character(&self) -> Character {
        Character { domain: self.domain.clone(), values: self.matrices.iter().map(|m| m.trace()).collect() }
    }

    pub fn restrict(&self, sub: &SubgroupRef) -> Result<Self> {
        if !sub.is_subgroup_of(&self.domain) {
            return Err(Error::InvalidSubgroup("restriction target is not a subgroup of the domain".into()));
        }
        let matrices = sub.elements().iter().map(|&g| self.matrix(g).cloned()).collect::<Result<_>>()?;
        Ok(Self { domain: sub.clone(), dim: self.dim, matrices })
    }

    /// Induced representation on `ambient ⊇ H`, with block `(i, j)` of
    /// `Ind(g)` equal to `ρ(t_i⁻¹ g t_j)` when that element lies in `H`.
    pub fn induce(&self, ambient: &SubgroupRef) -> Result<Self> {
        let t = self.domain.left_transversal_in(ambient)?;
        let g = self.domain.parent();
        let (m, d) = (t.len(), self.dim);
        let matrices = ambient
            .elements()
            .iter()
            .map(|&x| {
                let mut out = CMatrix::zeros(m * d, m * d);
                for (i, &ti) in t.iter().enumerate() {
                    for (j, &tj) in t.iter().enumerate() {
                        let h = g.mul(g.mul(g.inv(ti), x), tj);
                        if let Some(p) = self.domain.position(h) {
                            out.view_mut((i * d, j * d), (d, d)).copy_from(&self.matrices[p]);
                        }
                    }
                }
                out
            })
            .collect();
        Ok(Self { domain: ambient.clone(), dim: m * d, matrices })
    }

    /// Induction to the whole parent group.
    pub fn induce_to_parent(&self) -> Result<Self> {
        self.induce(&SubgroupRef::full(self.group().clone()))
    }

    pub fn is_isomorphic(&self, other: &Representation, tol: f64) -> Result<bool> {
        if self.domain != other.domain {
            return Err(Error::GroupMismatch("representations live on different groups".into()));
        }
        Ok(self.dim == other.dim
            && self.character().values.iter().zip(&other.character().values).all(|(a, b)| (a - b).norm() <= tol))
    }

    /// `S⁻¹ ρ(g) S` for every element.
    pub fn conjugate_by(&self, s: &CMatrix) -> Result<Self> {
        if s.shape() != (self.dim, self.dim) {
            return Err(Error::Shape("conjugating matrix has the wrong size".into()));
        }
        let inv = linalg::inverse(s).ok_or(Error::SingularBasis)?;
        let matrices = self.matrices.iter().map(|m| &inv * m * s).collect();
        Ok(Self { domain: self.domain.clone(), dim: self.dim, matrices })
    }

    pub fn direct_sum(&self, other: &Representation) -> Result<Self> {
        if self.domain != other.domain {
            return Err(Error::GroupMismatch("direct sum of reps on different groups".into()));
        }
        let d = self.dim + other.dim;
        let matrices = self
            .matrices
            .iter()
            .zip(&other.matrices)
            .map(|(a, b)| {
                let mut out = CMatrix::zeros(d, d);
                out.view_mut((0, 0), a.shape()).copy_from(a);
                out.view_mut((self.dim, self.dim), b.shape()).copy_from(b);
                out
            })
            .collect();
        Ok(Self { domain: self.domain.clone(), dim: d, matrices })
    }

    /// Averaging projector `(1/|H|) Σ_{h∈H} ρ(h)`.
    pub fn averaging_projector(&self, sub: &SubgroupRef) -> Result<CMatrix> {
        if !sub.is_subgroup_of(&self.domain) {
            return Err(Error::InvalidSubgroup("projector subgroup is not inside the domain".into()));
        }
        let mut p = CMatrix::zeros(self.dim, self.dim);
        for &h in sub.elements() {
            p += self.matrix(h)?;
        }
        Ok(p / c(sub.order() as f64, 0.0))
    }

    /// Basis whose first `fixed_dim` columns span the `H`-fixed vectors and
    /// whose remaining columns span the kernel of the averaging projector.
    pub fn adapted_basis(&self, sub: &SubgroupRef, tol: f64) -> Result<AdaptedBasis> {
        let p = self.averaging_projector(sub)?;
        let scale = 1.0 + linalg::max_abs(&p);
        if linalg::max_abs_diff(&(&p * &p), &p) > 1e-8 * scale {
            return Err(Error::InvalidRep("averaging projector is not idempotent".into()));
        }
        let image = linalg::column_space(&p, tol);
        let kernel = linalg::nullspace(&p, tol);
        if image.ncols() + kernel.ncols() != self.dim {
            return Err(Error::InvalidRep("image and kernel of the projector do not fill the space".into()));
        }
        let matrix = linalg::hstack(&image, &kernel);
        if linalg::inverse(&matrix).is_none() {
            return Err(Error::SingularBasis);
        }
        Ok(AdaptedBasis { fixed_dim: image.ncols(), matrix })
    }

    /// `C_to⁻¹ · ρ(g) · C_from`: coordinates of `r` in `from` to coordinates of
    /// `g·r` in `to`.
    pub fn matrix_in_bases(&self, g: usize, from: &CMatrix, to: &CMatrix) -> Result<CMatrix> {
        let rho = self.matrix(g)?;
        if from.shape() != rho.shape() || to.shape() != rho.shape() {
            return Err(Error::Shape("basis size differs from representation dimension".into()));
        }
        let to_inv = linalg::inverse(to).ok_or(Error::SingularBasis)?;
        if linalg::inverse(from).is_none() {
            return Err(Error::SingularBasis);
        }
        Ok(to_inv * rho * from)
    }
}

impl Character {
    pub fn new(domain: SubgroupRef, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != domain.order() {
            return Err(Error::Shape("character length differs from group order".into()));
        }
        Ok(Self { domain, values })
    }

    pub fn domain(&self) -> &SubgroupRef {
        &self.domain
    }

    /// Values listed per domain element.
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Value at parent element `g`.
    pub fn at(&self, g: usize) -> Option<Complex64> {
        self.domain.position(g).map(|i| self.values[i])
    }

    /// `(1/|G|) Σ_g conj(self(g)) · other(g)`.
    pub fn inner_product(&self, other: &Character) -> Result<Complex64> {
        if self.domain != other.domain {
            return Err(Error::GroupMismatch("characters live on different groups".into()));
        }
        let sum: Complex64 = self.values.iter().zip(&other.values).map(|(a, b)| a.conj() * b).sum();
        Ok(sum / self.values.len() as f64)
    }

    /// Largest spread of values within a conjugacy class of the domain.
    pub fn class_function_defect(&self) -> f64 {
        let g = self.domain.parent();
        let mut worst = 0.0f64;
        for (i, &a) in self.domain.elements().iter().enumerate() {
            for &x in self.domain.elements() {
                let b = g.mul(g.mul(x, a), g.inv(x));
                let j = self.domain.position(b).unwrap();
                worst = worst.max((self.values[i] - self.values[j]).norm());
            }
        }
        worst
    }
}
