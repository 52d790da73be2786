//! Two-qubit states in the correlation-tensor form
//! `Θ_{μν} = tr[ρ σ_μ ⊗ σ_ν]`, Pauli order `(𝟙, σ1, σ2, σ3)`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{diag, mat_vec, norm, scale_mat, scale_vec, svd3, symmetric_eigen, Mat3, Vec3};
use crate::scalar::Real;

/// A two-qubit state: Alice's Bloch vector `a`, Bob's Bloch vector `b` and
/// the spin correlation matrix `T`. Serialized as `{"a", "b", "T"}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateRepr<T>", into = "StateRepr<T>")]
#[serde(bound(
    serialize = "T: Real + Serialize",
    deserialize = "T: Real + Deserialize<'de>"
))]
pub struct TwoQubitState<T> {
    a: Vec3<T>,
    b: Vec3<T>,
    t: Mat3<T>,
}

#[derive(Clone, Serialize, Deserialize)]
struct StateRepr<T> {
    a: Vec3<T>,
    b: Vec3<T>,
    #[serde(rename = "T")]
    t: Mat3<T>,
}

impl<T: Real> TryFrom<StateRepr<T>> for TwoQubitState<T> {
    type Error = Error;
    fn try_from(r: StateRepr<T>) -> Result<Self> {
        Self::new(r.a, r.b, r.t)
    }
}

impl<T: Real> From<TwoQubitState<T>> for StateRepr<T> {
    fn from(s: TwoQubitState<T>) -> Self {
        StateRepr {
            a: s.a,
            b: s.b,
            t: s.t,
        }
    }
}

impl<T: Real> TwoQubitState<T> {
    /// Builds a state and checks that the reconstructed density operator is
    /// positive semidefinite.
    pub fn new(a: Vec3<T>, b: Vec3<T>, t: Mat3<T>) -> Result<Self> {
        let s = Self { a, b, t };
        s.validate()?;
        Ok(s)
    }

    /// Skips validation. Used for states produced by maps that are known to
    /// preserve positivity.
    pub(crate) fn from_parts(a: Vec3<T>, b: Vec3<T>, t: Mat3<T>) -> Self {
        Self { a, b, t }
    }

    /// Singlet `(|01⟩ − |10⟩)/√2`: `a = b = 0`, `T = −I₃`.
    pub fn singlet() -> Self {
        let z = [T::zero(); 3];
        Self::from_parts(z, z, diag([-T::one(); 3]))
    }

    /// `𝟙/4`, Θ = diag(1, 0, 0, 0).
    pub fn maximally_mixed() -> Self {
        let z = [T::zero(); 3];
        Self::from_parts(z, z, [[T::zero(); 3]; 3])
    }

    /// `cos α|00⟩ + sin α|11⟩` for `α ∈ [0, π/4]`.
    pub fn from_schmidt(alpha: T) -> Result<Self> {
        let limit = T::FRAC_PI_4();
        let tol = T::construction_tol();
        if !(alpha >= -tol && alpha <= limit + tol) {
            return Err(Error::AngleOutOfRange {
                alpha: alpha.as_f64(),
                limit: limit.as_f64(),
            });
        }
        let alpha = alpha.max(T::zero()).min(limit);
        let two = alpha + alpha;
        let (s, c) = two.sin_cos();
        let bloch = [T::zero(), T::zero(), c];
        Ok(Self::from_parts(bloch, bloch, diag([s, -s, T::one()])))
    }

    /// Pure state from amplitudes in the basis `|00⟩, |01⟩, |10⟩, |11⟩`
    /// (first qubit Alice's). The vector is normalized.
    pub fn from_state_vector(psi: [Complex<T>; 4]) -> Result<Self> {
        let n2 = psi.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
        if !(n2 > T::construction_tol()) {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let inv = T::one() / n2.sqrt();
        let psi = psi.map(|z| z * inv);
        let paulis = pauli_basis::<T>();
        let mut theta = [[T::zero(); 4]; 4];
        for (mu, sm) in paulis.iter().enumerate() {
            for (nu, sn) in paulis.iter().enumerate() {
                let op = kron(sm, sn);
                let mut acc = Complex::new(T::zero(), T::zero());
                for i in 0..4 {
                    for j in 0..4 {
                        acc = acc + psi[i].conj() * op[i][j] * psi[j];
                    }
                }
                theta[mu][nu] = acc.re;
            }
        }
        Ok(Self::from_theta(&theta))
    }

    /// Reads `a`, `b`, `T` out of a 4×4 Θ without validation.
    fn from_theta(theta: &[[T; 4]; 4]) -> Self {
        let mut a = [T::zero(); 3];
        let mut b = [T::zero(); 3];
        let mut t = [[T::zero(); 3]; 3];
        for i in 0..3 {
            a[i] = theta[i + 1][0];
            b[i] = theta[0][i + 1];
            for j in 0..3 {
                t[i][j] = theta[i + 1][j + 1];
            }
        }
        Self::from_parts(a, b, t)
    }

    pub fn alice_bloch(&self) -> Vec3<T> {
        self.a
    }

    pub fn bob_bloch(&self) -> Vec3<T> {
        self.b
    }

    pub fn correlation(&self) -> Mat3<T> {
        self.t
    }

    /// The 4×4 matrix `(1, bᵀ; a, T)`.
    pub fn theta(&self) -> [[T; 4]; 4] {
        let mut th = [[T::zero(); 4]; 4];
        th[0][0] = T::one();
        for i in 0..3 {
            th[0][i + 1] = self.b[i];
            th[i + 1][0] = self.a[i];
            for j in 0..3 {
                th[i + 1][j + 1] = self.t[i][j];
            }
        }
        th
    }

    /// Mixture with white noise, `ρ_p = p ρ + (1 − p) 𝟙/4`.
    pub fn add_isotropic_noise(&self, p: T) -> Result<Self> {
        let tol = T::construction_tol();
        if !(p >= -tol && p <= T::one() + tol) {
            return Err(Error::ProbabilityOutOfRange(p.as_f64()));
        }
        let p = p.max(T::zero()).min(T::one());
        Ok(Self::from_parts(
            scale_vec(p, &self.a),
            scale_vec(p, &self.b),
            scale_mat(p, &self.t),
        ))
    }

    /// Convex combination `p·self + (1 − p)·other`.
    pub fn mix(&self, other: &Self, p: T) -> Result<Self> {
        let tol = T::construction_tol();
        if !(p >= -tol && p <= T::one() + tol) {
            return Err(Error::ProbabilityOutOfRange(p.as_f64()));
        }
        let q = T::one() - p;
        let mut t = self.t;
        for (i, row) in t.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = p * *v + q * other.t[i][j];
            }
        }
        let lerp = |x: &Vec3<T>, y: &Vec3<T>| [0, 1, 2].map(|i| p * x[i] + q * y[i]);
        Ok(Self::from_parts(lerp(&self.a, &other.a), lerp(&self.b, &other.b), t))
    }

    /// `ρ = ¼ Σ Θ_{μν} σ_μ ⊗ σ_ν`.
    pub fn density_matrix(&self) -> [[Complex<T>; 4]; 4] {
        let paulis = pauli_basis::<T>();
        let theta = self.theta();
        let quarter = T::lit(0.25);
        let mut rho = [[Complex::new(T::zero(), T::zero()); 4]; 4];
        for (mu, sm) in paulis.iter().enumerate() {
            for (nu, sn) in paulis.iter().enumerate() {
                let c = theta[mu][nu] * quarter;
                if c == T::zero() {
                    continue;
                }
                let op = kron(sm, sn);
                for i in 0..4 {
                    for j in 0..4 {
                        rho[i][j] = rho[i][j] + op[i][j] * c;
                    }
                }
            }
        }
        rho
    }

    /// Eigenvalues of `ρ`, descending.
    pub fn density_eigenvalues(&self) -> [T; 4] {
        // Hermitian H = A + iB embeds as the real symmetric [[A, −B], [B, A]],
        // whose spectrum is that of H with every eigenvalue doubled.
        let rho = self.density_matrix();
        let mut m = [[T::zero(); 8]; 8];
        for i in 0..4 {
            for j in 0..4 {
                let z = rho[i][j];
                m[i][j] = z.re;
                m[i + 4][j + 4] = z.re;
                m[i][j + 4] = -z.im;
                m[i + 4][j] = z.im;
            }
        }
        let (ev, _) = symmetric_eigen(m);
        [ev[0], ev[2], ev[4], ev[6]]
    }

    /// Checks Bloch norms, singular values of `T`, trace and positivity.
    pub fn validate(&self) -> Result<()> {
        let tol = T::interface_tol();
        let all_finite = self.a.iter().chain(self.b.iter()).all(|v| v.is_finite())
            && self.t.iter().flatten().all(|v| v.is_finite());
        if !all_finite {
            return Err(Error::InvalidState("non-finite entry".into()));
        }
        for (name, v) in [("a", &self.a), ("b", &self.b)] {
            let n = norm(v);
            if n > T::one() + tol {
                return Err(Error::InvalidState(format!("|{name}| = {n} exceeds 1")));
            }
        }
        let s1 = svd3(&self.t)[0];
        if s1 > T::one() + tol {
            return Err(Error::InvalidState(format!(
                "largest singular value of T is {s1}"
            )));
        }
        let ev = self.density_eigenvalues();
        let trace = ev.iter().fold(T::zero(), |acc, &x| acc + x);
        if (trace - T::one()).abs() > tol {
            return Err(Error::InvalidState(format!("trace {trace}")));
        }
        if ev[3] < -tol {
            return Err(Error::InvalidState(format!(
                "density operator has eigenvalue {}",
                ev[3]
            )));
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_ok()
    }

    /// Alice-side linear map `a → K a`, `T → K T`.
    pub(crate) fn map_alice(&self, k: &Mat3<T>) -> Self {
        Self::from_parts(mat_vec(k, &self.a), self.b, crate::linalg::mat_mul(k, &self.t))
    }

    /// Bob-side linear map `b → L b`, `T → T Lᵀ`.
    pub(crate) fn map_bob(&self, l: &Mat3<T>) -> Self {
        let lt = crate::linalg::transpose(l);
        Self::from_parts(self.a, mat_vec(l, &self.b), crate::linalg::mat_mul(&self.t, &lt))
    }
}

type C2<T> = [[Complex<T>; 2]; 2];

fn pauli_basis<T: Real>() -> [C2<T>; 4] {
    let o = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let i = Complex::new(T::zero(), T::one());
    [
        [[one, o], [o, one]],
        [[o, one], [one, o]],
        [[o, -i], [i, o]],
        [[one, o], [o, -one]],
    ]
}

fn kron<T: Real>(x: &C2<T>, y: &C2<T>) -> [[Complex<T>; 4]; 4] {
    let mut out = [[Complex::new(T::zero(), T::zero()); 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = x[i][j] * y[k][l];
                }
            }
        }
    }
    out
}
