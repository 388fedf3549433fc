//! Named channel constructions used by fixtures, examples and tests.

use crate::channel::KrausStep;
use crate::matlin::ComplexMatrix;
use num_complex::Complex64;

/// Weyl shift-clock Kraus family of the depolarizing channel on ℂ^N: the N²
/// operators (1/N)·u_{x,y} with u_{x,y} = Σ_z ω^{zy} |z+x⟩⟨z|, indices mod N.
pub fn depolarizing_step(n: usize) -> KrausStep {
    let mut kraus = Vec::with_capacity(n * n);
    let omega = 2.0 * std::f64::consts::PI / n as f64;
    for x in 0..n {
        for y in 0..n {
            let m = ComplexMatrix::from_fn(n, n, |i, j| {
                if i == (j + x) % n {
                    Complex64::from_polar(1.0 / n as f64, omega * (j * y) as f64)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            });
            kraus.push(m);
        }
    }
    KrausStep::new(n, kraus)
        .expect("depolarizing family is well formed")
        .with_label(format!("depolarizing-{n}"))
}

/// Amplitude damping with decay probability γ.
pub fn amplitude_damping_step(gamma: f64) -> KrausStep {
    let t0 = ComplexMatrix::from_rows(&[
        vec![(1.0, 0.0), (0.0, 0.0)],
        vec![(0.0, 0.0), ((1.0 - gamma).sqrt(), 0.0)],
    ])
    .unwrap();
    let t1 = ComplexMatrix::from_rows(&[
        vec![(0.0, 0.0), (gamma.sqrt(), 0.0)],
        vec![(0.0, 0.0), (0.0, 0.0)],
    ])
    .unwrap();
    KrausStep::new(2, vec![t0, t1])
        .expect("amplitude damping family is well formed")
        .with_label(format!("amplitude-damping-{gamma}"))
}

/// The 1↔2 permutation unitary on ℂ³.
pub fn permutation_u() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![(0.0, 0.0), (1.0, 0.0), (0.0, 0.0)],
        vec![(1.0, 0.0), (0.0, 0.0), (0.0, 0.0)],
        vec![(0.0, 0.0), (0.0, 0.0), (1.0, 0.0)],
    ])
    .unwrap()
}

/// The 3×3 phase unitary v = (1/√3)·[[ω, ω̄, 1], [ω̄, ω, 1], [1, 1, 1]]
/// with ω = e^{2πi/3}.
pub fn phase_v() -> ComplexMatrix {
    let s = 1.0 / 3.0f64.sqrt();
    let w = Complex64::from_polar(s, 2.0 * std::f64::consts::PI / 3.0);
    let wb = w.conj();
    let one = Complex64::new(s, 0.0);
    ComplexMatrix::new(3, 3, vec![w, wb, one, wb, w, one, one, one, one]).unwrap()
}

fn d1() -> ComplexMatrix {
    ComplexMatrix::diag_real(&[
        (1.0f64 / 6.0).sqrt(),
        (1.0f64 / 3.0).sqrt(),
        (1.0f64 / 2.0).sqrt(),
    ])
}

fn d2() -> ComplexMatrix {
    ComplexMatrix::diag_real(&[
        (5.0f64 / 6.0).sqrt(),
        (2.0f64 / 3.0).sqrt(),
        (1.0f64 / 2.0).sqrt(),
    ])
}

/// Kraus operators (t₁, t₂) of the first two-step example channel on ℂ³:
/// t₁ = u·|t₁| with |t₁|² = diag(1/6, 1/3, 1/2), and t₂ = |t₂| with
/// |t₂|² = diag(5/6, 2/3, 1/2).
pub fn example_t_kraus() -> (ComplexMatrix, ComplexMatrix) {
    (permutation_u().mul(&d1()), d2())
}

/// Kraus operators (s₁, s₂) of the second example channel on ℂ³:
/// s₁ = v·|s₁| and s₂ = u·|s₂| with the same absolute values as t₁, t₂.
pub fn example_s_kraus() -> (ComplexMatrix, ComplexMatrix) {
    (phase_v().mul(&d1()), permutation_u().mul(&d2()))
}

pub fn example_t_step() -> KrausStep {
    let (t1, t2) = example_t_kraus();
    KrausStep::new(3, vec![t1, t2]).unwrap().with_label("T-step")
}

pub fn example_s_step() -> KrausStep {
    let (s1, s2) = example_s_kraus();
    KrausStep::new(3, vec![s1, s2]).unwrap().with_label("S-step")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn families_are_normalized() {
        for step in [
            depolarizing_step(2),
            depolarizing_step(3),
            amplitude_damping_step(0.5),
            example_t_step(),
            example_s_step(),
        ] {
            let r = step.validate(1e-9);
            assert!(r.passed, "{:?} defect {}", step.label(), r.defect);
        }
    }

    #[test]
    fn example_unitaries_are_unitary() {
        for u in [permutation_u(), phase_v()] {
            let d = u
                .adjoint()
                .mul(&u)
                .frobenius_distance(&ComplexMatrix::identity(3));
            assert!(d < 1e-14);
        }
    }
}
