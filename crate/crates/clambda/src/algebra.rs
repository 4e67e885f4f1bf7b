//! Parameters of the C_λ-extended oscillator and its truncated Fock-space operators.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO_SUM_TOL: f64 = 1e-12;

/// λ and α_0..α_{λ-1}, with β_μ and β̄_ν precomputed.
///
/// All indices are cyclic mod λ except `beta_bar`, which is extended to every
/// integer by β̄_{ν+λ} = β̄_ν + 1.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraParams {
    lambda: usize,
    alpha: Vec<f64>,
    beta: Vec<f64>,
    beta_bar: Vec<f64>,
}

impl AlgebraParams {
    pub fn new(lambda: usize, alpha: &[f64]) -> Result<Self> {
        validate_params(lambda, alpha)
    }

    /// Builds the parameters from β̄_1..β̄_{λ-1}.
    pub fn from_beta_bar(lambda: usize, beta_bar: &[f64]) -> Result<Self> {
        if lambda < 2 {
            return Err(Error::Shape(format!("lambda must be >= 2, got {lambda}")));
        }
        if beta_bar.len() != lambda - 1 {
            return Err(Error::Shape(format!(
                "expected {} beta_bar values, got {}",
                lambda - 1,
                beta_bar.len()
            )));
        }
        let mut beta = vec![0.0; lambda + 1];
        for mu in 1..lambda {
            beta[mu] = lambda as f64 * beta_bar[mu - 1] - mu as f64;
        }
        let mut alpha: Vec<f64> = (0..lambda - 1).map(|mu| beta[mu + 1] - beta[mu]).collect();
        let partial: f64 = alpha.iter().sum();
        alpha.push(-partial);
        validate_params(lambda, &alpha)
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alpha
    }

    pub fn alpha(&self, mu: i64) -> f64 {
        self.alpha[self.wrap(mu)]
    }

    pub fn beta(&self, mu: i64) -> f64 {
        self.beta[self.wrap(mu)]
    }

    /// β̄_ν for any integer ν.
    pub fn beta_bar(&self, nu: i64) -> f64 {
        let l = self.lambda as i64;
        let q = nu.div_euclid(l);
        self.beta_bar[nu.rem_euclid(l) as usize] + q as f64
    }

    /// β̄_1..β̄_{λ-1}.
    pub fn beta_bars(&self) -> &[f64] {
        &self.beta_bar[1..]
    }

    pub fn gamma(&self, mu: i64) -> f64 {
        0.5 * (self.beta(mu) + self.beta(mu + 1))
    }

    pub fn fock_index(&self, n: usize) -> FockIndex {
        FockIndex { n, k: n / self.lambda, mu: n % self.lambda }
    }

    fn wrap(&self, mu: i64) -> usize {
        mu.rem_euclid(self.lambda as i64) as usize
    }
}

/// n = kλ + μ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockIndex {
    pub n: usize,
    pub k: usize,
    pub mu: usize,
}

pub fn validate_params(lambda: usize, alpha: &[f64]) -> Result<AlgebraParams> {
    if lambda < 2 {
        return Err(Error::Shape(format!("lambda must be >= 2, got {lambda}")));
    }
    if alpha.len() != lambda {
        return Err(Error::Shape(format!(
            "alpha has {} entries, expected {lambda}",
            alpha.len()
        )));
    }
    if alpha.iter().any(|a| !a.is_finite()) {
        return Err(Error::Shape("alpha entries must be finite".into()));
    }
    let sum: f64 = alpha.iter().sum();
    if sum.abs() > ZERO_SUM_TOL {
        return Err(Error::ZeroSumViolation { sum });
    }
    let mut beta = vec![0.0; lambda];
    for mu in 1..lambda {
        beta[mu] = beta[mu - 1] + alpha[mu - 1];
        if beta[mu] <= -(mu as f64) {
            return Err(Error::PositivityViolation { mu, beta: beta[mu] });
        }
    }
    let beta_bar = (0..lambda)
        .map(|nu| (beta[nu] + nu as f64) / lambda as f64)
        .collect();
    Ok(AlgebraParams { lambda, alpha: alpha.to_vec(), beta, beta_bar })
}

/// F(n) = n + β_{n mod λ}.
pub fn structure_function(params: &AlgebraParams, n: usize) -> f64 {
    n as f64 + params.beta(n as i64)
}

/// E_n = n + γ_μ + 1/2 for n ≡ μ.
pub fn energy_eigenvalue(params: &AlgebraParams, n: usize) -> f64 {
    n as f64 + params.gamma(n as i64) + 0.5
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpKind {
    A,
    Adag,
    N,
    P(usize),
    H0,
    Jplus,
    Jminus,
    J0,
}

impl std::str::FromStr for OpKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "a" => OpKind::A,
            "adag" => OpKind::Adag,
            "N" | "n" => OpKind::N,
            "H0" | "h0" => OpKind::H0,
            "Jplus" | "jplus" => OpKind::Jplus,
            "Jminus" | "jminus" => OpKind::Jminus,
            "J0" | "j0" => OpKind::J0,
            other => {
                let mu = other
                    .strip_prefix('P')
                    .and_then(|r| r.parse().ok())
                    .ok_or_else(|| Error::Config(format!("unknown operator {other}")))?;
                OpKind::P(mu)
            }
        })
    }
}

/// Dense K×K matrix in the number basis |0⟩..|K-1⟩.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    pub dim: usize,
    pub entries: DMatrix<Complex64>,
}

impl TruncatedOperator {
    pub fn zeros(dim: usize) -> Self {
        TruncatedOperator { dim, entries: DMatrix::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        TruncatedOperator { dim, entries: DMatrix::identity(dim, dim) }
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[(row, col)]
    }

    pub fn mul(&self, other: &TruncatedOperator) -> TruncatedOperator {
        TruncatedOperator { dim: self.dim, entries: &self.entries * &other.entries }
    }

    pub fn commutator(&self, other: &TruncatedOperator) -> TruncatedOperator {
        TruncatedOperator {
            dim: self.dim,
            entries: &self.entries * &other.entries - &other.entries * &self.entries,
        }
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let x = nalgebra::DVector::from_column_slice(v);
        (&self.entries * x).iter().copied().collect()
    }

    /// max |A_ij - B_ij| over the leading `block`×`block` corner.
    pub fn max_diff_on_block(&self, other: &TruncatedOperator, block: usize) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..block.min(self.dim) {
            for j in 0..block.min(self.dim) {
                worst = worst.max((self.entries[(i, j)] - other.entries[(i, j)]).norm());
            }
        }
        worst
    }
}

pub fn build_operator(params: &AlgebraParams, kind: OpKind, k: usize) -> Result<TruncatedOperator> {
    let lambda = params.lambda();
    if k < lambda {
        return Err(Error::TruncationTooSmall(format!("K = {k} < lambda = {lambda}")));
    }
    let f = |n: usize| structure_function(params, n);
    let mut op = TruncatedOperator::zeros(k);
    let m = &mut op.entries;
    match kind {
        OpKind::A => {
            for n in 1..k {
                m[(n - 1, n)] = Complex64::new(f(n).sqrt(), 0.0);
            }
        }
        OpKind::Adag => {
            for n in 0..k - 1 {
                m[(n + 1, n)] = Complex64::new(f(n + 1).sqrt(), 0.0);
            }
        }
        OpKind::N => {
            for n in 0..k {
                m[(n, n)] = Complex64::new(n as f64, 0.0);
            }
        }
        OpKind::P(mu) => {
            if mu >= lambda {
                return Err(Error::Index(format!("projector index {mu} >= lambda {lambda}")));
            }
            for n in (mu..k).step_by(lambda) {
                m[(n, n)] = Complex64::new(1.0, 0.0);
            }
        }
        OpKind::H0 => {
            for n in 0..k {
                m[(n, n)] = Complex64::new(energy_eigenvalue(params, n), 0.0);
            }
        }
        OpKind::J0 => {
            for n in 0..k {
                m[(n, n)] = Complex64::new(energy_eigenvalue(params, n) / lambda as f64, 0.0);
            }
        }
        OpKind::Jplus => {
            for n in 0..k.saturating_sub(lambda) {
                let prod: f64 = (1..=lambda).map(|j| f(n + j)).product();
                m[(n + lambda, n)] = Complex64::new(prod.sqrt() / lambda as f64, 0.0);
            }
        }
        OpKind::Jminus => {
            for n in lambda..k {
                let prod: f64 = (0..lambda).map(|j| f(n - j)).product();
                m[(n - lambda, n)] = Complex64::new(prod.sqrt() / lambda as f64, 0.0);
            }
        }
    }
    Ok(op)
}

/// f(J₀, P_μ) of [J₊, J₋] = f(J₀, P_μ), restricted to F_μ at J₀-eigenvalue `j0`.
pub fn sga_structure_poly(params: &AlgebraParams, j0: f64, mu: usize) -> Result<f64> {
    let lambda = params.lambda();
    if mu >= lambda {
        return Err(Error::Index(format!("mu = {mu} >= lambda = {lambda}")));
    }
    let l = lambda as f64;
    let mu = mu as i64;
    let a = |i: i64| params.alpha(i);
    let cum = |from: i64, to: i64| -> f64 { (from..=to).map(|m| a(mu + m)).sum() };
    let pl = |l_idx: i64| l * j0 + 0.5 * (2.0 * l_idx as f64 + 1.0 + a(mu) + 2.0 * cum(1, l_idx));
    let pj = |j: i64| {
        l * j0 + 0.5 * (-2.0 * j as f64 - 1.0 + a(mu) + 2.0 * cum(1, lambda as i64 - j - 1))
    };
    let lam = lambda as i64;
    let mut total: f64 = (0..=lam - 2).map(pl).product();
    let lead = l * j0 - 0.5 * (1.0 + a(mu));
    for i in 1..lam {
        let left: f64 = (1..i).map(pj).product();
        let right: f64 = (0..=lam - i - 2).map(pl).product();
        total += lead * left * right;
    }
    Ok(-total / l)
}

/// Interior block size K - λ used by all matrix identities.
pub fn interior(params: &AlgebraParams, k: usize) -> usize {
    k.saturating_sub(params.lambda())
}
