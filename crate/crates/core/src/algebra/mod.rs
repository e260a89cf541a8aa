//! Twisted convolution algebras C_c(𝒢, σ) and their regular representations.

mod mackey;
mod monomial;
pub mod torus;

pub use mackey::{fourier_components, mackey_embed, MackeyAlgebra};
pub use monomial::MonomialMatrix;

use crate::analysis::{pnorm, AnalysisError, CMatrix, Exponent, NormEstimate, PnormConfig};
use crate::cohomology::Cocycle;
use crate::structures::{Carrier, FiniteGroup};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Sub};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AlgebraError {
    #[error("element has {got} coefficients, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("bad rotation parameter: {0}")]
    BadTheta(String),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Cohomology(#[from] crate::cohomology::CohomologyError),
}

/// A function on the arrows, stored densely.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgElement {
    pub coeffs: Vec<Complex64>,
}

impl AlgElement {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        AlgElement { coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, a: usize) -> Complex64 {
        self.coeffs[a]
    }

    pub fn scale(&self, c: Complex64) -> Self {
        AlgElement { coeffs: self.coeffs.iter().map(|z| z * c).collect() }
    }

    pub fn max_diff(&self, other: &AlgElement) -> f64 {
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

impl Add for &AlgElement {
    type Output = AlgElement;
    fn add(self, rhs: &AlgElement) -> AlgElement {
        AlgElement { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &AlgElement {
    type Output = AlgElement;
    fn sub(self, rhs: &AlgElement) -> AlgElement {
        AlgElement { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Mul<Complex64> for &AlgElement {
    type Output = AlgElement;
    fn mul(self, c: Complex64) -> AlgElement {
        self.scale(c)
    }
}

/// C_c(𝒢, σ) with (f∗g)(γ) = Σ_{α ∈ 𝒢_{s(γ)}} f(γα⁻¹) g(α) σ(γα⁻¹, α).
#[derive(Debug, Clone)]
pub struct TwistedAlgebra<C> {
    cocycle: Cocycle<C>,
    sigma: Vec<Complex64>,
    composable: Vec<(usize, usize, usize)>,
    /// Source fibers 𝒢_x, one per unit in unit order.
    fibers: Vec<Vec<usize>>,
    /// (unit position, index inside that fiber) for every arrow.
    place: Vec<(usize, usize)>,
}

pub type GroupAlgebra = TwistedAlgebra<FiniteGroup>;
pub type GroupoidAlgebra = TwistedAlgebra<crate::structures::FiniteGroupoid>;

impl<C: Carrier + Clone + PartialEq> TwistedAlgebra<C> {
    pub fn new(cocycle: Cocycle<C>) -> Self {
        let sigma = cocycle.table().iter().map(|z| z.to_complex()).collect();
        let g = cocycle.carrier();
        let composable = g.composable();
        let units = g.unit_list().to_vec();
        let mut fibers = vec![Vec::new(); units.len()];
        let mut place = vec![(0, 0); g.size()];
        for a in 0..g.size() {
            let u = units.iter().position(|&x| x == g.source(a)).expect("source is a unit");
            place[a] = (u, fibers[u].len());
            fibers[u].push(a);
        }
        TwistedAlgebra { cocycle, sigma, composable, fibers, place }
    }

    pub fn cocycle(&self) -> &Cocycle<C> {
        &self.cocycle
    }

    pub fn carrier(&self) -> &C {
        self.cocycle.carrier()
    }

    pub fn dim(&self) -> usize {
        self.carrier().size()
    }

    fn sigma(&self, a: usize, b: usize) -> Complex64 {
        self.sigma[a * self.dim() + b]
    }

    pub fn zero(&self) -> AlgElement {
        AlgElement::new(vec![Complex64::new(0.0, 0.0); self.dim()])
    }

    pub fn delta(&self, a: usize) -> AlgElement {
        let mut f = self.zero();
        f.coeffs[a] = Complex64::new(1.0, 0.0);
        f
    }

    /// The unit of the algebra: the indicator of the unit space.
    pub fn one(&self) -> AlgElement {
        let mut f = self.zero();
        for &x in self.carrier().unit_list() {
            f.coeffs[x] = Complex64::new(1.0, 0.0);
        }
        f
    }

    pub fn element(&self, coeffs: Vec<Complex64>) -> Result<AlgElement, AlgebraError> {
        if coeffs.len() != self.dim() {
            return Err(AlgebraError::DimensionMismatch { expected: self.dim(), got: coeffs.len() });
        }
        Ok(AlgElement::new(coeffs))
    }

    pub fn convolve(&self, f: &AlgElement, g: &AlgElement) -> AlgElement {
        let mut out = self.zero();
        for &(a, b, ab) in &self.composable {
            let (x, y) = (f.coeffs[a], g.coeffs[b]);
            if x != Complex64::new(0.0, 0.0) && y != Complex64::new(0.0, 0.0) {
                out.coeffs[ab] += x * y * self.sigma(a, b);
            }
        }
        out
    }

    /// f*(γ) = conj(σ(γ⁻¹, γ) f(γ⁻¹)).
    pub fn star(&self, f: &AlgElement) -> AlgElement {
        let g = self.carrier();
        AlgElement::new(
            (0..self.dim()).map(|a| (self.sigma(g.inverse(a), a) * f.coeffs[g.inverse(a)]).conj()).collect(),
        )
    }

    pub fn fibers(&self) -> &[Vec<usize>] {
        &self.fibers
    }

    /// λ_x(f) on ℓ^p(𝒢_x): M[ε, γ] = f(εγ⁻¹) σ(εγ⁻¹, γ), rows and columns in
    /// increasing arrow order.
    pub fn rep_matrix(&self, f: &AlgElement, unit_pos: usize) -> CMatrix {
        let g = self.carrier();
        let fib = &self.fibers[unit_pos];
        CMatrix::from_fn(fib.len(), fib.len(), |i, j| {
            let (eps, gamma) = (fib[i], fib[j]);
            let a = g.compose(eps, g.inverse(gamma)).expect("same source");
            f.coeffs[a] * self.sigma(a, gamma)
        })
    }

    /// ⊕_x λ_x(f) on ℓ^p(𝒢) = ⊕_x ℓ^p(𝒢_x), basis ordered fiber by fiber.
    pub fn regular(&self, f: &AlgElement) -> CMatrix {
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        let mut offset = 0;
        for u in 0..self.fibers.len() {
            let block = self.rep_matrix(f, u);
            let k = block.nrows();
            m.view_mut((offset, offset), (k, k)).copy_from(&block);
            offset += k;
        }
        m
    }

    /// Position of an arrow in the basis of [`Self::regular`].
    pub fn regular_index(&self, a: usize) -> usize {
        let (u, i) = self.place[a];
        self.fibers[..u].iter().map(|f| f.len()).sum::<usize>() + i
    }

    /// regular(δ_a) for every arrow a.
    pub fn basis_matrices(&self) -> Vec<CMatrix> {
        (0..self.dim()).map(|a| self.regular(&self.delta(a))).collect()
    }

    pub fn sup_norm(&self, f: &AlgElement) -> f64 {
        f.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// max over units of the ℓ¹ sums of f over 𝒢_x and over 𝒢^x.
    pub fn i_norm(&self, f: &AlgElement) -> f64 {
        let g = self.carrier();
        let mut best = 0.0f64;
        for &x in g.unit_list() {
            let src: f64 = (0..self.dim()).filter(|&a| g.source(a) == x).map(|a| f.coeffs[a].norm()).sum();
            let rng: f64 = (0..self.dim()).filter(|&a| g.range(a) == x).map(|a| f.coeffs[a].norm()).sum();
            best = best.max(src).max(rng);
        }
        best
    }

    /// ‖f‖ in F^p_λ: the supremum over units of ‖λ_x(f)‖_p.
    pub fn reduced_norm(&self, f: &AlgElement, p: Exponent, cfg: &PnormConfig) -> Result<NormEstimate, AlgebraError> {
        let mut est: Option<NormEstimate> = None;
        for u in 0..self.fibers.len() {
            let e = pnorm(&self.rep_matrix(f, u), p, cfg)?;
            est = Some(match est {
                None => e,
                Some(prev) => prev.max(e),
            });
        }
        Ok(est.unwrap_or(NormEstimate::exact(0.0)))
    }
}

impl TwistedAlgebra<FiniteGroup> {
    /// λ^σ(f) on ℓ^p(G): L[x, z] = f(xz⁻¹) σ(xz⁻¹, z).
    pub fn left_regular(&self, f: &AlgElement) -> CMatrix {
        self.rep_matrix(f, 0)
    }

    /// The right regular σ̄-representation: R[x, z] = conj(σ(x, y)) when z = xy.
    pub fn right_regular(&self, y: usize) -> CMatrix {
        let g = self.carrier();
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for x in 0..n {
            m[(x, g.op(x, y))] = self.sigma(x, y).conj();
        }
        m
    }

    fn exponents(&self, m: u64) -> Option<Vec<u64>> {
        self.cocycle.exponents(m)
    }

    /// λ^σ(δ_y) over μ_m, exactly. None when σ does not take values in μ_m.
    pub fn left_regular_exact(&self, y: usize, m: u64) -> Option<MonomialMatrix> {
        let g = self.carrier();
        let e = self.exponents(m)?;
        let n = self.dim();
        let rows = (0..n).map(|z| g.op(y, z)).collect();
        let exps = (0..n).map(|z| e[y * n + z]).collect();
        Some(MonomialMatrix::new(m, rows, exps))
    }

    /// The right regular σ̄-representation of y over μ_m, exactly.
    pub fn right_regular_exact(&self, y: usize, m: u64) -> Option<MonomialMatrix> {
        let g = self.carrier();
        let e = self.exponents(m)?;
        let n = self.dim();
        let yi = g.inv(y);
        let rows: Vec<usize> = (0..n).map(|z| g.op(z, yi)).collect();
        let exps = (0..n).map(|z| (m - e[rows[z] * n + y]) % m).collect();
        Some(MonomialMatrix::new(m, rows, exps))
    }
}
