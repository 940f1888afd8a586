use num_complex::Complex;
use num_traits::Zero;

use super::{LindbladSystem, ModelError, ModelParams};
use crate::angular::{spin_ops, wigner3j, HalfInteger};
use crate::linalg::ComplexMatrix;
use crate::scalar::Real;

/// Global phase attached to the spontaneous-emission operators. It drops
/// out of `LᴴL` and `LρLᴴ`, so spectra do not depend on the choice.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum JumpPhase {
    /// Constant `i`, as in the hand-written f=1 → F=0 operators.
    #[default]
    Imaginary,
    /// `i^(F−f)`.
    DeltaF,
}

impl JumpPhase {
    fn factor<T: Real>(self, f: HalfInteger, big_f: HalfInteger) -> Complex<T> {
        let i = Complex::new(T::zero(), T::one());
        match self {
            JumpPhase::Imaginary => i,
            JumpPhase::DeltaF => match (big_f.twice_value() - f.twice_value()) / 2 {
                -1 => -i,
                0 => Complex::new(T::one(), T::zero()),
                _ => i,
            },
        }
    }
}

fn real<T: Real>(x: T) -> Complex<T> {
    Complex::new(x, T::zero())
}

/// Lab-frame 4-level Hamiltonian `t ↦ H(t)` in the basis
/// `|1,1⟩, |1,0⟩, |1,−1⟩, |0,0⟩_e`.
///
/// `p.j` and `p.omega_r` enter as the full drive amplitudes, so the
/// rotating-frame average equals [`build_full4_rwa`] evaluated at `j/2` and
/// `omega_r/2`. The RF frequency is `omega_larmor + p.delta_rf`; the optical
/// detuning is implied by `omega_laser − omega_0` and `p.delta_opt` is unused.
pub fn build_full4_time_dep(
    p: &ModelParams<f64>,
    omega_larmor: f64,
    omega_laser: f64,
    omega_0: f64,
) -> impl Fn(f64) -> ComplexMatrix<f64> {
    let (j, omega_r) = (p.j, p.omega_r);
    let omega_rf = omega_larmor + p.delta_rf;
    move |t| {
        let jc = j * (omega_rf * t).cos();
        let oc = -omega_r * (omega_laser * t).cos();
        ComplexMatrix::from_real_rows(&[
            &[omega_larmor, jc, 0.0, 0.0],
            &[jc, 0.0, jc, oc],
            &[0.0, jc, -omega_larmor, 0.0],
            &[0.0, oc, 0.0, omega_0],
        ])
    }
}

/// Diagonal generator `diag(ω_RF, 0, −ω_RF, ω)` of the rotating frame.
pub fn build_grwa_generator<T: Real>(omega_rf: T, omega_laser: T) -> ComplexMatrix<T> {
    ComplexMatrix::from_diag(&[
        real(omega_rf),
        Complex::zero(),
        real(-omega_rf),
        real(omega_laser),
    ])
}

/// Rotating-frame 4-level system with the hand-written jump phase.
pub fn build_full4_rwa<T: Real>(p: &ModelParams<T>) -> LindbladSystem<T> {
    build_full4_rwa_with(p, JumpPhase::Imaginary)
}

/// Rotating-frame 4-level system: ground block `−δFz + J√2 Fx`, optical
/// coupling `−Ω_R` between `|1,0⟩` and `|0,0⟩_e`, excited energy `−Δ`.
/// Jumps are `c √(Γ/3) |1,−ε⟩⟨0,0|` for ε = −1, 0, +1 (labels `sp-1`, `sp0`,
/// `sp+1`) plus, when `gamma_g > 0`, the nine ground relaxation channels.
pub fn build_full4_rwa_with<T: Real>(p: &ModelParams<T>, phase: JumpPhase) -> LindbladSystem<T> {
    let (fx, _, fz) = spin_ops::<T>(HalfInteger::integer(1));
    let hg = &fz.scale_real(-p.delta_rf) + &fx.scale_real(p.j * T::of(2.0).sqrt());
    let mut h = ComplexMatrix::zeros(4, 4);
    for r in 0..3 {
        for c in 0..3 {
            h[(r, c)] = hg[(r, c)];
        }
    }
    h[(1, 3)] = real(-p.omega_r);
    h[(3, 1)] = real(-p.omega_r);
    h[(3, 3)] = real(-p.delta_opt);

    let c = phase.factor::<T>(HalfInteger::integer(1), HalfInteger::integer(0));
    let amp = (p.gamma_sp / T::of(3.0)).sqrt();
    let mut jumps = Vec::new();
    for (eps, label) in [(-1i32, "sp-1"), (0, "sp0"), (1, "sp+1")] {
        // |1,−ε⟩ sits at index 1 + ε in the descending-m layout
        let row = (1 + eps) as usize;
        jumps.push((
            label.to_string(),
            ComplexMatrix::unit(4, row, 3).scale(c * real(amp)),
        ));
    }
    if p.gamma_g > T::zero() {
        for (label, l) in ground_relaxation_labelled(p.gamma_g) {
            let mut big = ComplexMatrix::zeros(4, 4);
            for r in 0..3 {
                for col in 0..3 {
                    big[(r, col)] = l[(r, col)];
                }
            }
            jumps.push((label, big));
        }
    }
    LindbladSystem::new(h, jumps, true)
        .expect("rotating-frame Hamiltonian is Hermitian by construction")
}

/// Spontaneous-emission operators `c √Γ Σ (f 1 F; −m ε M) |f m⟩⟨F M|` for
/// ε = −1, 0, +1, on the ground-then-excited space of dimension
/// `(2f+1) + (2F+1)`, both blocks ordered by descending projection.
pub fn build_spont_jumps<T: Real>(
    f: HalfInteger,
    big_f: HalfInteger,
    gamma_sp: T,
    phase: JumpPhase,
) -> Result<Vec<ComplexMatrix<T>>, ModelError> {
    let (tf, tbig) = (f.twice_value(), big_f.twice_value());
    if tf < 0 || tbig < 0 || (tf - tbig).abs() > 2 || (tf - tbig) % 2 != 0 || (tf == 0 && tbig == 0)
    {
        return Err(ModelError::TransitionForbidden {
            f: f.to_string(),
            big_f: big_f.to_string(),
        });
    }
    let ng = f.multiplicity();
    let n = ng + big_f.multiplicity();
    let c = phase.factor::<T>(f, big_f) * real(gamma_sp.sqrt());
    let one = HalfInteger::integer(1);
    let mut out = Vec::with_capacity(3);
    for eps in [-1, 0, 1] {
        let e = HalfInteger::integer(eps);
        let mut l = ComplexMatrix::zeros(n, n);
        for (a, m) in f.projections().enumerate() {
            for (b, big_m) in big_f.projections().enumerate() {
                let minus_m = HalfInteger::from_twice(-m.twice_value());
                let w = wigner3j::<T>(f, one, big_f, minus_m, e, big_m);
                if w != T::zero() {
                    l[(a, ng + b)] = c * real(w);
                }
            }
        }
        out.push(l);
    }
    Ok(out)
}

/// Isotropic ground relaxation `√(γ/3) |1m⟩⟨1n|` over all nine index pairs.
pub fn build_ground_relaxation<T: Real>(gamma_g: T) -> Vec<ComplexMatrix<T>> {
    ground_relaxation_labelled(gamma_g)
        .into_iter()
        .map(|(_, l)| l)
        .collect()
}

pub(crate) fn ground_relaxation_labelled<T: Real>(gamma_g: T) -> Vec<(String, ComplexMatrix<T>)> {
    let amp = real((gamma_g / T::of(3.0)).sqrt());
    let m_of = |k: usize| 1 - k as i32;
    let mut out = Vec::with_capacity(9);
    for r in 0..3 {
        for c in 0..3 {
            out.push((
                format!("g({},{})", m_of(r), m_of(c)),
                ComplexMatrix::unit(3, r, c).scale(amp),
            ));
        }
    }
    out
}
