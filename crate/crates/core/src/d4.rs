//! The dihedral group of the square and the representations used with it.
//!
//! Element `i < 4` is `s^i` (rotation by `i·π/2`), element `4 + i` is `t·s^i`
//! where `t` is the reflection `(x, y) ↦ (x, −y)`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, SubgroupRef};
use crate::linalg::{self, c, CMatrix};
use crate::rep::Representation;

pub const E: usize = 0;
pub const S: usize = 1;
pub const S2: usize = 2;
pub const S3: usize = 3;
pub const T: usize = 4;
pub const TS: usize = 5;
pub const TS2: usize = 6;
pub const TS3: usize = 7;

pub fn group() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::dihedral(4).expect("D4 table is valid"))
}

/// Planar action of element `g` on a point.
pub fn apply(g: usize, p: [f64; 2]) -> [f64; 2] {
    let mut q = p;
    for _ in 0..g % 4 {
        q = [-q[1], q[0]];
    }
    if g >= 4 {
        q = [q[0], -q[1]];
    }
    q
}

fn subgroup(gens: &[usize]) -> SubgroupRef {
    SubgroupRef::generate(group(), gens).expect("valid generators")
}

/// `{e, t, ts2, s2}`
pub fn h1() -> SubgroupRef {
    subgroup(&[T, S2])
}

/// `{e, ts, ts3, s2}`
pub fn h2() -> SubgroupRef {
    subgroup(&[TS, S2])
}

/// The rotation subgroup.
pub fn h3() -> SubgroupRef {
    subgroup(&[S])
}

fn one_dim_on(domain: SubgroupRef, value: impl Fn(usize) -> Complex64) -> Representation {
    let vals: Vec<Complex64> = domain.elements().iter().map(|&g| value(g)).collect();
    Representation::one_dim(domain, &vals).expect("one value per element")
}

/// Character of `H1` sending `t ↦ −1`, `ts2 ↦ 1`, `s2 ↦ −1`.
pub fn r1() -> Representation {
    one_dim_on(h1(), |g| c(if g == T || g == S2 { -1.0 } else { 1.0 }, 0.0))
}

/// Character of `H2` sending `ts ↦ 1`, `ts3 ↦ −1`, `s2 ↦ −1`.
pub fn r2() -> Representation {
    one_dim_on(h2(), |g| c(if g == TS3 || g == S2 { -1.0 } else { 1.0 }, 0.0))
}

/// Character of the rotation subgroup sending `s ↦ i`.
pub fn r3() -> Representation {
    let i = c(0.0, 1.0);
    one_dim_on(h3(), |g| i.powu(g as u32))
}

fn from_generators(rho_s: CMatrix, rho_t: CMatrix) -> Representation {
    let dim = rho_s.nrows();
    Representation::from_fn(SubgroupRef::full(group()), dim, |g| {
        let rot = (0..g % 4).fold(linalg::identity(dim), |acc, _| acc * &rho_s);
        if g >= 4 {
            &rho_t * rot
        } else {
            rot
        }
    })
    .expect("square matrices of equal size")
}

/// Orthogonal 2-dim irreducible rep with reflections
/// `ts2 ↦ (cos2θ, −sin2θ; −sin2θ, −cos2θ)` and
/// `ts3 ↦ (sin2θ, cos2θ; cos2θ, −sin2θ)`.
///
/// Changing `θ` conjugates by a rotation: `ρ_θ = Rot(θ)⁻¹ ρ_0 Rot(θ)`.
pub fn two_dim(theta: f64) -> Representation {
    let (s, co) = (2.0 * theta).sin_cos();
    let ts2 = linalg::real_matrix(&[&[co, -s], &[-s, -co]]);
    let ts3 = linalg::real_matrix(&[&[s, co], &[co, -s]]);
    // s = ts2·ts3 and t = ts2·s^2
    let rho_s = &ts2 * &ts3;
    let rho_t = &ts2 * &rho_s * &rho_s;
    from_generators(rho_s, rho_t)
}

/// Unitary 2-dim irreducible rep with `s ↦ diag(i, −i)` and `t ↦ (0 1; 1 0)`.
pub fn two_dim_unitary() -> Representation {
    let rho_s = linalg::complex_matrix(&[&[c(0.0, 1.0), c(0.0, 0.0)], &[c(0.0, 0.0), c(0.0, -1.0)]]);
    let rho_t = linalg::real_matrix(&[&[0.0, 1.0], &[1.0, 0.0]]);
    from_generators(rho_s, rho_t)
}

fn sign_rep(s_sign: f64, t_sign: f64) -> Representation {
    one_dim_on(SubgroupRef::full(group()), |g| {
        let v = s_sign.powi((g % 4) as i32) * if g >= 4 { t_sign } else { 1.0 };
        c(v, 0.0)
    })
}

/// The five irreducible reps `A1, A2, B1, B2, E`, verified by the orthogonality
/// relations before being returned.
pub fn irreps() -> Result<Vec<(&'static str, Representation)>> {
    let list = vec![
        ("A1", sign_rep(1.0, 1.0)),
        ("A2", sign_rep(1.0, -1.0)),
        ("B1", sign_rep(-1.0, 1.0)),
        ("B2", sign_rep(-1.0, -1.0)),
        ("E", two_dim(0.0)),
    ];
    let dim_sq: usize = list.iter().map(|(_, r)| r.dim() * r.dim()).sum();
    if dim_sq != 8 {
        return Err(Error::InvalidRep(format!("irreducible dimensions square-sum to {dim_sq}")));
    }
    for (i, (name_a, a)) in list.iter().enumerate() {
        if !a.validate(1e-12).valid {
            return Err(Error::InvalidRep(format!("{name_a} is not a homomorphism")));
        }
        for (j, (name_b, b)) in list.iter().enumerate() {
            let ip = a.character().inner_product(&b.character())?;
            let expect = if i == j { 1.0 } else { 0.0 };
            if (ip - c(expect, 0.0)).norm() > 1e-12 {
                return Err(Error::InvalidRep(format!("<{name_a}, {name_b}> = {ip}")));
            }
        }
    }
    Ok(list)
}
