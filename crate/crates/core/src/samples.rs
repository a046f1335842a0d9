//! Small reference groups used by tests, the acceptance suite and the CLI.

use std::sync::Arc;

use crate::gf::{Elem, FieldSpec};
use crate::group::{MatrixGroup, DEFAULT_GROUP_CAP};
use crate::linalg::Matrix;
use crate::poly::Ring;

/// `F_9 = F_3[t]/(t^2 + 1)`.
pub fn f9() -> Arc<FieldSpec> {
    FieldSpec::extension(3, vec![1, 0, 1]).expect("t^2 + 1 is irreducible over F_3")
}

/// The element `a = t - 1` of `F_9`, a root of `a^2 - a - 1`.
pub fn f9_a() -> Elem {
    f9().from_coeffs(&[2, 1]).expect("valid coefficients")
}

/// Over `F_9`: `τ: y ↦ y + a x` and `σ: y ↦ y + x, z ↦ z + x` with `a` from
/// [`f9_a`], returned as `[σ, τ]`. The group has order 9 and
/// `S^G = k[x, (a-1)y^3 - a y x^2 + z x^2, z^3 - x^2 z]`.
pub fn f9_two_transvections() -> (Arc<FieldSpec>, Vec<Matrix>) {
    let f = f9();
    let a = f9_a();
    let mut sigma = Matrix::identity(3);
    sigma.set(0, 1, Elem::ONE);
    sigma.set(0, 2, Elem::ONE);
    let mut tau = Matrix::identity(3);
    tau.set(0, 1, a);
    (f, vec![sigma, tau])
}

pub fn f9_xyz_ring() -> Ring {
    Ring::deglex(f9(), 3).with_names(vec!["x".into(), "y".into(), "z".into()])
}

/// Three unipotent generators over `F_3` in dimension 5:
/// `g1: x4 ↦ x4 + x3 + x2`, `g2: x5 ↦ x5 + x3 - x2 + x1`,
/// `g3: x4 ↦ x4 - x3 - x2 - x1, x5 ↦ x5 - x3 - x2 - x1`.
pub fn f3_dim5_generators() -> (Arc<FieldSpec>, Vec<Matrix>) {
    let f = FieldSpec::prime(3).expect("3 is prime");
    let m1 = f.from_int(-1);
    let mut g1 = Matrix::identity(5);
    g1.set(2, 3, Elem::ONE);
    g1.set(1, 3, Elem::ONE);
    let mut g2 = Matrix::identity(5);
    g2.set(2, 4, Elem::ONE);
    g2.set(1, 4, m1);
    g2.set(0, 4, Elem::ONE);
    let mut g3 = Matrix::identity(5);
    for c in [3, 4] {
        for r in 0..3 {
            g3.set(r, c, m1);
        }
    }
    (f, vec![g1, g2, g3])
}

/// A single `n × n` Jordan block with eigenvalue 1 over `F_p`.
pub fn jordan_block(p: u32, n: usize) -> (Arc<FieldSpec>, Matrix) {
    let f = FieldSpec::prime(p).expect("prime");
    let mut m = Matrix::identity(n);
    for i in 0..n.saturating_sub(1) {
        m.set(i, i + 1, Elem::ONE);
    }
    (f, m)
}

/// `x_2 ↦ x_2 + c x_1` over `field`.
pub fn rank_two_transvection(c: Elem) -> Matrix {
    let mut m = Matrix::identity(2);
    m.set(0, 1, c);
    m
}

pub fn group(field: &Arc<FieldSpec>, gens: &[Matrix]) -> MatrixGroup {
    let n = gens.first().map_or(0, Matrix::rows);
    MatrixGroup::generate(field, n, gens, DEFAULT_GROUP_CAP, true).expect("reference group")
}
