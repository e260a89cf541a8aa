use super::AlgElement;
use crate::analysis::CMatrix;
use crate::cohomology::MackeyGroup;
use num_complex::Complex64;
use std::f64::consts::TAU;

fn omega(k: i64, m: u64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * k.rem_euclid(m as i64) as f64 / m as f64)
}

/// j(f)(z, x) = z̄·f(x). With this coordinate j(f∗_σ g) = j(f)∗j(g), and j(f)
/// sits in the k = 1 Fourier component.
pub fn mackey_embed(f: &AlgElement, mg: &MackeyGroup) -> AlgElement {
    let n = mg.base_len;
    let mut out = vec![Complex64::new(0.0, 0.0); mg.group.len()];
    for k in 0..mg.m {
        for x in 0..n {
            out[mg.index(k, x)] = omega(-(k as i64), mg.m) * f.coeffs[x];
        }
    }
    AlgElement::new(out)
}

/// ξ_k(x) = (1/m) Σ_z ξ(z, x) z^k for k = 0..m; ξ_k lies in C(G, σ^k).
pub fn fourier_components(xi: &AlgElement, mg: &MackeyGroup) -> Vec<AlgElement> {
    let (n, m) = (mg.base_len, mg.m);
    (0..m)
        .map(|k| {
            AlgElement::new(
                (0..n)
                    .map(|x| {
                        (0..m).map(|j| xi.coeffs[mg.index(j, x)] * omega((j * k) as i64, m)).sum::<Complex64>()
                            / m as f64
                    })
                    .collect(),
            )
        })
        .collect()
}

/// The untwisted group algebra of the Mackey group, with the fiber μ_m carrying
/// total mass `fiber_mass` (1 for the normalised Haar measure).
#[derive(Debug, Clone)]
pub struct MackeyAlgebra {
    pub group: MackeyGroup,
    pub fiber_mass: f64,
}

impl MackeyAlgebra {
    pub fn new(group: MackeyGroup) -> Self {
        MackeyAlgebra { group, fiber_mass: 1.0 }
    }

    fn weight(&self) -> f64 {
        self.fiber_mass / self.group.m as f64
    }

    /// (ξ∗ζ)(g) = Σ_h w·ξ(h)ζ(h⁻¹g) with w = fiber_mass / m.
    pub fn convolve(&self, xi: &AlgElement, zeta: &AlgElement) -> AlgElement {
        let g = &self.group.group;
        let mut out = vec![Complex64::new(0.0, 0.0); g.len()];
        for h in 0..g.len() {
            if xi.coeffs[h] == Complex64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..g.len() {
                out[g.op(h, k)] += xi.coeffs[h] * zeta.coeffs[k];
            }
        }
        AlgElement::new(out.into_iter().map(|z| z * self.weight()).collect())
    }

    /// Left convolution by ξ on ℓ^p of the Mackey group.
    pub fn left_regular(&self, xi: &AlgElement) -> CMatrix {
        let g = &self.group.group;
        let w = self.weight();
        CMatrix::from_fn(g.len(), g.len(), |a, b| xi.coeffs[g.op(a, g.inv(b))] * w)
    }
}
