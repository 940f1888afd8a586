//! Asymptotic-limit and time-evolution checks, and real-part grouping.

use num_complex::Complex;
use num_traits::Zero;

use super::SpectraError;
use crate::linalg::{eig, eigvals, expm, ComplexMatrix, Lu};
use crate::model::{build_eff3, ModelParams};
use crate::scalar::{cabs, Real};
use crate::superop::{devectorize, vectorize, Origin, SuperOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AsymptoteKind {
    /// `J → 0`: real parts approach the spectrum of the detuning term `δF_z`.
    SmallJ,
    /// `J → ∞`: real parts approach the spectrum of the RF coupling term.
    LargeJ,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoteCheck<T> {
    /// Largest deviation at each grid point, in grid order.
    pub deviations: Vec<T>,
    pub max_deviation: T,
    /// Whether every grid point satisfied the regime condition.
    pub in_regime: bool,
}

fn sorted_real<T: Real>(mut v: Vec<T>) -> Vec<T> {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal));
    v
}

/// Compares sorted real parts of the effective `Ĥ_NH` at each `J` in `grid`
/// with the spectrum of the limiting Hermitian term: `{−δ, 0, δ}` for small
/// `J`, `{−√2 J, 0, √2 J}` (the coupling term's eigenvalues) for large `J`.
/// Points outside `J ≤ δ/10` or `J ≥ 10·max(δ, Ω)` are evaluated but
/// logged and flagged.
pub fn asymptote_check<T: Real>(
    kind: AsymptoteKind,
    p: &ModelParams<T>,
    grid: &[T],
) -> Result<AsymptoteCheck<T>, SpectraError> {
    let delta = p.delta_rf.abs();
    let mut deviations = Vec::with_capacity(grid.len());
    let mut in_regime = true;
    for &j in grid {
        let ok = match kind {
            AsymptoteKind::SmallJ => j <= delta / T::of(10.0),
            AsymptoteKind::LargeJ => j >= T::of(10.0) * delta.max(p.omega),
        };
        if !ok {
            log::warn!("J = {j} is outside the {kind:?} regime");
            in_regime = false;
        }
        let h = build_eff3(&p.with_param("j", j)?)?.non_hermitian_hamiltonian();
        let got = sorted_real(eigvals(&h)?.iter().map(|z| z.re).collect());
        let limit = match kind {
            AsymptoteKind::SmallJ => vec![-delta, T::zero(), delta],
            AsymptoteKind::LargeJ => {
                let s = T::of(2.0).sqrt() * j;
                vec![-s, T::zero(), s]
            }
        };
        let dev = got
            .iter()
            .zip(&limit)
            .fold(T::zero(), |m, (&a, &b)| m.max((a - b).abs()));
        deviations.push(dev);
    }
    let max_deviation = deviations.iter().fold(T::zero(), |m, &d| m.max(d));
    Ok(AsymptoteCheck {
        deviations,
        max_deviation,
        in_regime,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvolveCheck<T> {
    pub rho_expm: ComplexMatrix<T>,
    /// `None` when the generator has no complete eigenbasis.
    pub rho_eig: Option<ComplexMatrix<T>>,
    /// Largest elementwise `|ρ_expm − ρ_eig|`.
    pub difference: Option<T>,
    /// Largest `|Tr ρ(t) − Tr ρ₀|` over both propagations.
    pub trace_drift: T,
}

fn trace_preserving<T>(l: &SuperOperator<T>) -> bool {
    match l.origin {
        Origin::FullLiouvillian => true,
        Origin::Hybrid(q) => q == 1.0,
        Origin::NhhSuper => false,
    }
}

fn check_state<T: Real>(rho: &ComplexMatrix<T>) -> Result<(), SpectraError> {
    let scale = rho.max_abs().max(T::one());
    let tol = T::of(1e-10) * scale;
    if !rho.is_hermitian(tol) {
        return Err(SpectraError::InvalidState("not Hermitian".into()));
    }
    let tr = rho.trace();
    if cabs(tr - Complex::new(T::one(), T::zero())) > tol {
        return Err(SpectraError::InvalidState(format!("trace {} ≠ 1", tr.re)));
    }
    if eigvals(rho)?.iter().any(|z| z.re < -tol) {
        return Err(SpectraError::InvalidState(
            "not positive semidefinite".into(),
        ));
    }
    Ok(())
}

/// Eigenvalues, right eigenvectors and expansion coefficients.
type Expansion<T> = (Vec<Complex<T>>, ComplexMatrix<T>, Vec<Complex<T>>);

/// Right eigenvectors of `l` and the expansion coefficients of `v0` in them,
/// or `None` when the eigenbasis is numerically incomplete.
fn eigen_expansion<T: Real>(
    l: &ComplexMatrix<T>,
    v0: &[Complex<T>],
) -> Result<Option<Expansion<T>>, SpectraError> {
    let e = eig(l, false)?;
    let v = e.right_vectors;
    let lu = match Lu::new(&v) {
        Ok(lu) => lu,
        Err(_) => return Ok(None),
    };
    let c = lu.solve_vec(v0);
    // an ill-conditioned basis shows up as huge coefficients
    let cmax = c.iter().fold(T::zero(), |m, z| m.max(cabs(*z)));
    let vnorm = v0
        .iter()
        .fold(T::zero(), |m, z| m.max(cabs(*z)))
        .max(T::of(1e-300));
    if !(cmax / vnorm < T::of(1e8)) {
        return Ok(None);
    }
    Ok(Some((e.values, v, c)))
}

/// Propagates `rho0` to time `t` by the matrix exponential and by the
/// eigen-expansion of `l`, which must be trace preserving.
pub fn evolve_check(
    l: &SuperOperator<f64>,
    rho0: &ComplexMatrix<f64>,
    t: f64,
) -> Result<EvolveCheck<f64>, SpectraError> {
    if !trace_preserving(l) {
        return Err(SpectraError::NotTracePreserving);
    }
    check_state(rho0)?;
    let v0 = vectorize(rho0, l.basis)?;
    let propagator = expm(&l.matrix.scale_real(t))?;
    let rho_expm = devectorize(&propagator.mul_vec(&v0), l.basis)?;
    let tr0 = rho0.trace();
    let mut drift = cabs(rho_expm.trace() - tr0);

    let (rho_eig, difference) = match eigen_expansion(&l.matrix, &v0)? {
        None => {
            log::warn!("generator is defective; eigen-expansion skipped");
            (None, None)
        }
        Some((values, v, c)) => {
            let n = values.len();
            let mut vt = vec![Complex::zero(); n];
            for k in 0..n {
                let w = c[k] * (values[k] * t).exp();
                for (i, slot) in vt.iter_mut().enumerate() {
                    *slot += w * v[(i, k)];
                }
            }
            let rho = devectorize(&vt, l.basis)?;
            drift = drift.max(cabs(rho.trace() - tr0));
            let diff = rho.max_diff(&rho_expm);
            (Some(rho), Some(diff))
        }
    };
    Ok(EvolveCheck {
        rho_expm,
        rho_eig,
        difference,
        trace_drift: drift,
    })
}

/// The eigenvector of `l` whose eigenvalue is closest to zero, as a density
/// matrix with unit trace.
pub fn stationary_state<T: Real>(l: &SuperOperator<T>) -> Result<ComplexMatrix<T>, SpectraError> {
    let e = eig(&l.matrix, false)?;
    let k = (0..e.values.len())
        .min_by(|&a, &b| {
            cabs(e.values[a])
                .partial_cmp(&cabs(e.values[b]))
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .ok_or(SpectraError::InvalidGrid("empty generator".into()))?;
    let rho = devectorize(&e.right_vectors.column(k), l.basis)?;
    let tr = rho.trace();
    if cabs(tr) == T::zero() {
        return Err(SpectraError::InvalidState(
            "zero-eigenvalue vector is traceless".into(),
        ));
    }
    Ok(rho.scale(Complex::new(T::one(), T::zero()) / tr))
}

/// Groups eigenvalue indices by real part: sorted by `Re` descending and
/// split wherever consecutive real parts differ by more than `gap`.
pub fn group_by_real_part<T: Real>(values: &[Complex<T>], gap: T) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        values[b]
            .re
            .partial_cmp(&values[a].re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for &i in &order {
        match groups.last_mut() {
            Some(g)
                if (values[*g.last().expect("groups are non-empty")].re - values[i].re) <= gap =>
            {
                g.push(i)
            }
            _ => groups.push(vec![i]),
        }
    }
    groups
}
