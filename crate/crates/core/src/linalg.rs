//! Minimal 4×4 complex-matrix helpers for the composite probe⊗auxiliary
//! integrator: arithmetic, adjoints, and Hermitian eigenvalues via cyclic
//! Jacobi sweeps with unitary 2×2 rotations.

use num_complex::Complex;

use crate::scalar::{lit, Real};

pub type C<T> = Complex<T>;

/// Dense 4×4 complex matrix with value semantics.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat4<T>(pub [[C<T>; 4]; 4]);

impl<T: Real> Mat4<T> {
    pub fn zeros() -> Self {
        Mat4([[C::new(T::zero(), T::zero()); 4]; 4])
    }

    pub fn from_diagonal(d: [T; 4]) -> Self {
        let mut m = Self::zeros();
        for (i, &x) in d.iter().enumerate() {
            m.0[i][i] = C::new(x, T::zero());
        }
        m
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        let mut out = Self::zeros();
        for i in 0..4 {
            for k in 0..4 {
                let a = self.0[i][k];
                if a == C::new(T::zero(), T::zero()) {
                    continue;
                }
                for j in 0..4 {
                    out.0[i][j] += a * rhs.0[k][j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros();
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] = self.0[j][i].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> C<T> {
        self.0[0][0] + self.0[1][1] + self.0[2][2] + self.0[3][3]
    }

    /// out = self + rhs · s (s real).
    pub fn add_scaled(&self, rhs: &Self, s: T) -> Self {
        let mut out = *self;
        for i in 0..4 {
            for j in 0..4 {
                out.0[i][j] += rhs.0[i][j] * s;
            }
        }
        out
    }

    /// Largest entrywise deviation from Hermiticity, max |m_ij − m̄_ji|.
    pub fn hermiticity_defect(&self) -> T {
        let mut worst = T::zero();
        for i in 0..4 {
            for j in i..4 {
                let d = self.0[i][j] - self.0[j][i].conj();
                worst = worst.max(d.norm_sqr().sqrt());
            }
        }
        worst
    }

    /// Eigenvalues of a (numerically) Hermitian matrix, ascending.
    ///
    /// Cyclic Jacobi: each sweep annihilates every off-diagonal pair with an
    /// exact 2×2 unitary similarity; quadratic convergence makes a handful
    /// of sweeps enough at double precision.
    pub fn hermitian_eigenvalues(&self) -> [T; 4] {
        // Work on the Hermitian part so tiny integrator asymmetries cannot
        // produce complex diagonals.
        let mut a = self.add_scaled(&self.adjoint(), T::one());
        let half = lit::<T>(0.5);
        for i in 0..4 {
            for j in 0..4 {
                a.0[i][j] *= half;
            }
        }

        let tol = T::epsilon() * lit::<T>(16.0);
        for _sweep in 0..60 {
            let mut off = T::zero();
            for p in 0..4 {
                for q in (p + 1)..4 {
                    off += a.0[p][q].norm_sqr();
                }
            }
            if off.sqrt() <= tol * (T::one() + a.trace().re.abs()) {
                break;
            }
            for p in 0..4 {
                for q in (p + 1)..4 {
                    jacobi_rotate(&mut a, p, q);
                }
            }
        }

        let mut evals = [a.0[0][0].re, a.0[1][1].re, a.0[2][2].re, a.0[3][3].re];
        evals.sort_by(|x, y| x.partial_cmp(y).expect("eigenvalues are finite"));
        evals
    }
}

/// One Jacobi step: diagonalize the 2×2 Hermitian block (p, q) exactly and
/// apply the corresponding unitary similarity to the full matrix.
fn jacobi_rotate<T: Real>(a: &mut Mat4<T>, p: usize, q: usize) {
    let apq = a.0[p][q];
    let m = apq.norm_sqr().sqrt();
    if m <= T::epsilon() {
        return;
    }
    let app = a.0[p][p].re;
    let aqq = a.0[q][q].re;
    let d = (app - aqq) * lit::<T>(0.5);
    let r = (d * d + m * m).sqrt();

    // Orthonormal eigenvectors of [[app, apq], [āpq, aqq]]:
    // v1 = (apq, g), v2 = (−g, āpq) with g = λ1 − app = r − d. For d > 0 the
    // subtraction cancels catastrophically (the roundoff would re-rotate the
    // diagonal separation into the off-diagonal entries), so use the
    // rationalized form m²/(r + d) there.
    let g = if d > T::zero() {
        m * m / (r + d)
    } else {
        r - d
    };
    let norm = (m * m + g * g).sqrt();
    if norm <= T::epsilon() {
        return;
    }
    let v1 = (apq / norm, C::new(g / norm, T::zero()));
    let v2 = (C::new(-(g / norm), T::zero()), apq.conj() / norm);

    // Columns of U: e_p ↦ v1, e_q ↦ v2. Apply A ← U† A U.
    // Right multiplication: columns p, q.
    for i in 0..4 {
        let cp = a.0[i][p];
        let cq = a.0[i][q];
        a.0[i][p] = cp * v1.0 + cq * v1.1;
        a.0[i][q] = cp * v2.0 + cq * v2.1;
    }
    // Left multiplication by U†: rows p, q with conjugated coefficients.
    for j in 0..4 {
        let rp = a.0[p][j];
        let rq = a.0[q][j];
        a.0[p][j] = rp * v1.0.conj() + rq * v1.1.conj();
        a.0[q][j] = rp * v2.0.conj() + rq * v2.1.conj();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C<f64> {
        C::new(re, im)
    }

    #[test]
    fn diagonal_matrix_eigenvalues() {
        let m = Mat4::from_diagonal([0.4, 0.1, 0.3, 0.2]);
        assert_eq!(m.hermitian_eigenvalues(), [0.1, 0.2, 0.3, 0.4]);
    }

    #[test]
    fn known_two_by_two_block() {
        // Central block [[0.5, b], [b̄, 0.5]] has eigenvalues 0.5 ± |b|.
        let mut m = Mat4::from_diagonal([0.0, 0.5, 0.5, 0.0]);
        m.0[1][2] = c(0.3, 0.1);
        m.0[2][1] = c(0.3, -0.1);
        let evals = m.hermitian_eigenvalues();
        let b = (0.3f64 * 0.3 + 0.1 * 0.1).sqrt();
        // Ascending: the two untouched zeros sit below 0.5 − |b|.
        assert!((evals[0] - 0.0).abs() < 1e-14);
        assert!((evals[1] - 0.0).abs() < 1e-14);
        assert!((evals[2] - (0.5 - b)).abs() < 1e-14);
        assert!((evals[3] - (0.5 + b)).abs() < 1e-14);
    }

    #[test]
    fn eigenvalues_preserve_trace_and_frobenius_norm() {
        // Hermitian matrices are normal: Σλ = tr, Σλ² = ‖A‖²_F.
        let mut rng = crate::test_rng::SplitMix64::new(0x00e1_6e11);
        for _ in 0..50 {
            let mut m = Mat4::<f64>::zeros();
            for i in 0..4 {
                m.0[i][i] = c(rng.uniform(-1.0, 1.0), 0.0);
                for j in (i + 1)..4 {
                    let z = c(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
                    m.0[i][j] = z;
                    m.0[j][i] = z.conj();
                }
            }
            let evals = m.hermitian_eigenvalues();
            let tr: f64 = (0..4).map(|i| m.0[i][i].re).sum();
            let fro: f64 =
                m.0.iter()
                    .flat_map(|row| row.iter())
                    .map(|z| z.norm_sqr())
                    .sum();
            let sum: f64 = evals.iter().sum();
            let sq: f64 = evals.iter().map(|x| x * x).sum();
            assert!((sum - tr).abs() < 1e-12);
            assert!((sq - fro).abs() < 1e-11, "sq={sq} fro={fro}");
        }
    }

    #[test]
    fn projector_mixture_is_psd() {
        // ρ = Σ w_k |ψ_k⟩⟨ψ_k| must have eigenvalues ≥ 0.
        let mut rng = crate::test_rng::SplitMix64::new(0x9d);
        let mut rho = Mat4::<f64>::zeros();
        for &w in &[0.5, 0.3, 0.2] {
            let mut v = [c(0.0, 0.0); 4];
            let mut n = 0.0;
            for entry in v.iter_mut() {
                *entry = c(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
                n += entry.norm_sqr();
            }
            let n = n.sqrt();
            for i in 0..4 {
                for j in 0..4 {
                    rho.0[i][j] += v[i] * v[j].conj() * (w / (n * n));
                }
            }
        }
        let evals = rho.hermitian_eigenvalues();
        assert!(evals[0] > -1e-14);
        assert!((evals.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn matmul_and_adjoint_agree_with_hand_expansion() {
        let mut a = Mat4::<f64>::zeros();
        let mut b = Mat4::<f64>::zeros();
        a.0[0][1] = c(1.0, 2.0);
        a.0[2][3] = c(0.0, -1.0);
        b.0[1][2] = c(3.0, 0.5);
        b.0[3][0] = c(-2.0, 1.0);
        let ab = a.matmul(&b);
        assert_eq!(ab.0[0][2], c(1.0, 2.0) * c(3.0, 0.5));
        assert_eq!(ab.0[2][0], c(0.0, -1.0) * c(-2.0, 1.0));
        assert_eq!(a.adjoint().0[1][0], c(1.0, -2.0));
    }
}
