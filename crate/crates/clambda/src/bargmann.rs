//! Bargmann-space realizations. Operators act on polynomial coefficient vectors
//! as factored differential operators; matrix-valued operators route between
//! the λ components of a vector function.

use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::algebra::{build_operator, sga_structure_poly, structure_function, AlgebraParams, OpKind};
use crate::error::{Error, Result};
use crate::measures::{power_integrals, weight_function, WeightFunction, QUAD_TOL};
use crate::special::gamma::{ln_gamma, ln_pochhammer};
use crate::states::StateVector;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const MAX_INNER_DEGREE: usize = 32;
const ODE_STEP: f64 = 0.2;
const ODE_HALF_WIDTH: usize = 6;

/// One scalar polynomial (sector bases) or λ of them (vector bases);
/// `components[c][k]` is the coefficient of z^k.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyFunction {
    pub components: Vec<Vec<Complex64>>,
}

impl PolyFunction {
    pub fn scalar(coeffs: Vec<Complex64>) -> Self {
        PolyFunction { components: vec![coeffs] }
    }

    pub fn vector(components: Vec<Vec<Complex64>>) -> Self {
        PolyFunction { components }
    }

    pub fn zero(n_components: usize) -> Self {
        PolyFunction { components: vec![Vec::new(); n_components] }
    }

    /// z^k in component `comp` of an `n_components`-vector.
    pub fn monomial(n_components: usize, comp: usize, k: usize) -> Self {
        let mut f = Self::zero(n_components);
        f.components[comp] = vec![ZERO; k + 1];
        f.components[comp][k] = Complex64::new(1.0, 0.0);
        f
    }

    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn coeff(&self, comp: usize, k: usize) -> Complex64 {
        self.components.get(comp).and_then(|c| c.get(k)).copied().unwrap_or(ZERO)
    }

    /// Highest power with a nonzero coefficient, None for the zero function.
    pub fn degree(&self) -> Option<usize> {
        self.components
            .iter()
            .filter_map(|c| c.iter().rposition(|x| *x != ZERO))
            .max()
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        PolyFunction { components: self.components.iter().map(|c| c.iter().map(|x| x * s).collect()).collect() }
    }

    pub fn add(&self, other: &PolyFunction) -> PolyFunction {
        let n = self.n_components().max(other.n_components());
        let components = (0..n)
            .map(|c| {
                let len = self.components.get(c).map_or(0, Vec::len).max(other.components.get(c).map_or(0, Vec::len));
                (0..len).map(|k| self.coeff(c, k) + other.coeff(c, k)).collect()
            })
            .collect();
        PolyFunction { components }
    }

    pub fn sub(&self, other: &PolyFunction) -> PolyFunction {
        self.add(&other.scaled(Complex64::new(-1.0, 0.0)))
    }

    /// max |coefficient|.
    pub fn max_abs(&self) -> f64 {
        self.components.iter().flatten().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Value at a point, component by component.
    pub fn eval(&self, z: Complex64) -> Vec<Complex64> {
        self.components
            .iter()
            .map(|c| c.iter().rev().fold(ZERO, |acc, x| acc * z + x))
            .collect()
    }
}

/// First-order factors of the realizations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Atom {
    MulZ,
    D,
    /// z d/dz + c
    Euler(f64),
    /// d/dz + c/z
    DPlusCOverZ(f64),
    Scale(f64),
}

impl Atom {
    fn apply(self, p: &[Complex64]) -> Result<Vec<Complex64>> {
        Ok(match self {
            Atom::MulZ => std::iter::once(ZERO).chain(p.iter().copied()).collect(),
            Atom::D => p.iter().enumerate().skip(1).map(|(k, x)| x * k as f64).collect(),
            Atom::Euler(c) => p.iter().enumerate().map(|(k, x)| x * (k as f64 + c)).collect(),
            Atom::DPlusCOverZ(c) => {
                if let Some(p0) = p.first() {
                    if c != 0.0 && *p0 != ZERO {
                        return Err(Error::NonPolynomialResult(format!(
                            "d/dz + {c}/z applied to a function with constant term {p0}"
                        )));
                    }
                }
                p.iter().enumerate().skip(1).map(|(k, x)| x * (k as f64 + c)).collect()
            }
            Atom::Scale(s) => p.iter().map(|x| x * s).collect(),
        })
    }
}

/// Matrix element `from` → `to` of an operator-valued matrix. Atoms are listed
/// as written and applied right to left.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub from: usize,
    pub to: usize,
    pub atoms: Vec<Atom>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiffOpDescriptor {
    pub n_components: usize,
    pub blocks: Vec<Block>,
}

impl DiffOpDescriptor {
    fn diagonal(n: usize, atoms: impl Fn(usize) -> Vec<Atom>) -> Self {
        DiffOpDescriptor { n_components: n, blocks: (0..n).map(|c| Block { from: c, to: c, atoms: atoms(c) }).collect() }
    }

    pub fn apply(&self, f: &PolyFunction) -> Result<PolyFunction> {
        if f.n_components() != self.n_components {
            return Err(Error::Shape(format!(
                "operator acts on {} components, function has {}",
                self.n_components,
                f.n_components()
            )));
        }
        let mut out = PolyFunction::zero(self.n_components);
        for block in &self.blocks {
            let mut p = f.components[block.from].clone();
            for atom in block.atoms.iter().rev() {
                p = atom.apply(&p)?;
            }
            let target = &mut out.components[block.to];
            if target.len() < p.len() {
                target.resize(p.len(), ZERO);
            }
            for (t, x) in target.iter_mut().zip(&p) {
                *t += x;
            }
        }
        Ok(out)
    }

    /// self ∘ inner.
    pub fn compose(&self, inner: &DiffOpDescriptor) -> DiffOpDescriptor {
        let mut blocks = Vec::new();
        for b1 in &inner.blocks {
            for b2 in self.blocks.iter().filter(|b| b.from == b1.to) {
                let atoms = b2.atoms.iter().chain(&b1.atoms).copied().collect();
                blocks.push(Block { from: b1.from, to: b2.to, atoms });
            }
        }
        DiffOpDescriptor { n_components: self.n_components, blocks }
    }

    fn power(&self, n: usize, scale: f64) -> DiffOpDescriptor {
        let mut acc = self.clone();
        for _ in 1..n {
            acc = self.compose(&acc);
        }
        for b in &mut acc.blocks {
            b.atoms.insert(0, Atom::Scale(scale));
        }
        acc
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Basis {
    /// entire functions ψ^(α)_μ(z) of the sector F_μ
    SectorAlpha { mu: usize, alpha: usize },
    /// λ-component ψ^(0)(z) built from the α = 0 sector functions
    VectorAlpha0,
    /// λ-component ψ(z) = D(z) ψ^(0)(z^λ)
    Eigenstate,
}

impl Basis {
    pub fn tag(&self) -> String {
        match self {
            Basis::SectorAlpha { mu, alpha } => format!("sector(mu={mu},alpha={alpha})"),
            Basis::VectorAlpha0 => "vector_alpha0".into(),
            Basis::Eigenstate => "eigenstate".into(),
        }
    }

    fn n_components(&self, params: &AlgebraParams) -> usize {
        match self {
            Basis::SectorAlpha { .. } => 1,
            _ => params.lambda(),
        }
    }
}

impl FromStr for Basis {
    type Err = Error;
    /// `vector`, `eigenstate`, or `sector:<mu>:<alpha>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vector" | "vector_alpha0" => Ok(Basis::VectorAlpha0),
            "eigenstate" => Ok(Basis::Eigenstate),
            _ => {
                let parts: Vec<&str> = s.split(':').collect();
                match parts.as_slice() {
                    ["sector", mu, alpha] => Ok(Basis::SectorAlpha {
                        mu: mu.parse().map_err(|_| Error::Config(format!("bad mu in {s}")))?,
                        alpha: alpha.parse().map_err(|_| Error::Config(format!("bad alpha in {s}")))?,
                    }),
                    _ => Err(Error::Config(format!("unknown basis {s}"))),
                }
            }
        }
    }
}

fn check_sector(params: &AlgebraParams, mu: usize, alpha: usize) -> Result<()> {
    let lambda = params.lambda();
    if alpha > lambda / 2 || mu + alpha + 1 > lambda {
        return Err(Error::Sector { mu, alpha, lambda });
    }
    Ok(())
}

fn check_op(params: &AlgebraParams, op: OpKind) -> Result<()> {
    match op {
        OpKind::P(nu) if nu >= params.lambda() => {
            Err(Error::Index(format!("projector index {nu} >= lambda {}", params.lambda())))
        }
        _ => Ok(()),
    }
}

/// The differential-operator form of `op` in `basis`.
pub fn realization(params: &AlgebraParams, basis: Basis, op: OpKind) -> Result<DiffOpDescriptor> {
    check_op(params, op)?;
    let lambda = params.lambda();
    let l = lambda as f64;
    let bb = |nu: usize| params.beta_bar(nu as i64);
    match basis {
        Basis::SectorAlpha { mu, alpha } => {
            check_sector(params, mu, alpha)?;
            let atoms = match op {
                OpKind::N => vec![Atom::Scale(l), Atom::Euler(mu as f64 / l)],
                OpKind::J0 => vec![Atom::Euler(0.5 * (bb(mu) + bb(mu + 1)))],
                OpKind::H0 => vec![Atom::Scale(l), Atom::Euler(0.5 * (bb(mu) + bb(mu + 1)))],
                OpKind::P(nu) => vec![Atom::Scale(if nu == mu { 1.0 } else { 0.0 })],
                OpKind::Jplus => {
                    let mut v = vec![Atom::Scale(l.powi(alpha as i32 - 1)), Atom::MulZ];
                    v.extend((mu + 1..=mu + alpha).map(|nu| Atom::Euler(bb(nu))));
                    v
                }
                OpKind::Jminus => {
                    let mut v = vec![Atom::Scale(l.powi((lambda - alpha) as i32 - 1))];
                    v.extend((1..=mu).map(|nu| Atom::Euler(bb(nu) + 1.0)));
                    v.extend((mu + alpha + 1..lambda).map(|nu| Atom::Euler(bb(nu))));
                    v.push(Atom::D);
                    v
                }
                OpKind::A | OpKind::Adag => {
                    return Err(Error::UnsupportedOp(format!("{op:?} changes the sector; use a vector basis")))
                }
            };
            Ok(DiffOpDescriptor { n_components: 1, blocks: vec![Block { from: 0, to: 0, atoms }] })
        }
        Basis::VectorAlpha0 => {
            let prod: f64 = (1..lambda).map(bb).product();
            let j0 = |c: usize| vec![Atom::Euler((c as f64 + params.gamma(c as i64) + 0.5) / l)];
            Ok(match op {
                OpKind::Adag => {
                    let mut blocks: Vec<Block> = (1..lambda)
                        .map(|nu| Block { from: nu - 1, to: nu, atoms: vec![Atom::Scale((l * bb(nu)).sqrt())] })
                        .collect();
                    blocks.push(Block {
                        from: lambda - 1,
                        to: 0,
                        atoms: vec![Atom::Scale(1.0 / (l.powi(lambda as i32 - 1) * prod).sqrt()), Atom::MulZ],
                    });
                    DiffOpDescriptor { n_components: lambda, blocks }
                }
                OpKind::A => {
                    let mut blocks: Vec<Block> = (1..lambda)
                        .map(|nu| Block {
                            from: nu,
                            to: nu - 1,
                            atoms: vec![Atom::Scale((l / bb(nu)).sqrt()), Atom::Euler(bb(nu))],
                        })
                        .collect();
                    blocks.push(Block {
                        from: 0,
                        to: lambda - 1,
                        atoms: vec![Atom::Scale((l.powi(lambda as i32 + 1) * prod).sqrt()), Atom::D],
                    });
                    DiffOpDescriptor { n_components: lambda, blocks }
                }
                OpKind::N => DiffOpDescriptor::diagonal(lambda, |c| vec![Atom::Scale(l), Atom::Euler(c as f64 / l)]),
                OpKind::P(nu) => DiffOpDescriptor {
                    n_components: lambda,
                    blocks: vec![Block { from: nu, to: nu, atoms: vec![] }],
                },
                OpKind::J0 => DiffOpDescriptor::diagonal(lambda, j0),
                OpKind::H0 => DiffOpDescriptor::diagonal(lambda, |c| {
                    let mut v = vec![Atom::Scale(l)];
                    v.extend(j0(c));
                    v
                }),
                OpKind::Jplus => realization(params, basis, OpKind::Adag)?.power(lambda, 1.0 / l),
                OpKind::Jminus => realization(params, basis, OpKind::A)?.power(lambda, 1.0 / l),
            })
        }
        Basis::Eigenstate => {
            let j0 = |c: usize| vec![Atom::Scale(1.0 / l), Atom::Euler(params.gamma(c as i64) + 0.5)];
            Ok(match op {
                OpKind::Adag => DiffOpDescriptor {
                    n_components: lambda,
                    blocks: (0..lambda).map(|c| Block { from: c, to: (c + 1) % lambda, atoms: vec![Atom::MulZ] }).collect(),
                },
                OpKind::A => {
                    let mut blocks: Vec<Block> = (1..lambda)
                        .map(|nu| Block { from: nu, to: nu - 1, atoms: vec![Atom::DPlusCOverZ(params.beta(nu as i64))] })
                        .collect();
                    blocks.push(Block { from: 0, to: lambda - 1, atoms: vec![Atom::D] });
                    DiffOpDescriptor { n_components: lambda, blocks }
                }
                OpKind::N => DiffOpDescriptor::diagonal(lambda, |_| vec![Atom::Euler(0.0)]),
                OpKind::P(nu) => DiffOpDescriptor {
                    n_components: lambda,
                    blocks: vec![Block { from: nu, to: nu, atoms: vec![] }],
                },
                OpKind::J0 => DiffOpDescriptor::diagonal(lambda, j0),
                OpKind::H0 => DiffOpDescriptor::diagonal(lambda, |c| vec![Atom::Euler(params.gamma(c as i64) + 0.5)]),
                OpKind::Jplus => realization(params, basis, OpKind::Adag)?.power(lambda, 1.0 / l),
                OpKind::Jminus => realization(params, basis, OpKind::A)?.power(lambda, 1.0 / l),
            })
        }
    }
}

pub fn apply_realization(params: &AlgebraParams, basis: Basis, op: OpKind, f: &PolyFunction) -> Result<PolyFunction> {
    realization(params, basis, op)?.apply(f)
}

/// ln of the z^k coefficient of φ^(α)_{μ,k}.
fn ln_phi_coef(params: &AlgebraParams, mu: usize, alpha: usize, k: usize) -> f64 {
    let lambda = params.lambda();
    let bb = |nu: usize| params.beta_bar(nu as i64);
    let r = (lambda - 2 * alpha) as f64;
    let mut l = -ln_gamma(k as f64 + 1.0);
    for nu in mu + 1..=mu + alpha {
        l += ln_pochhammer(bb(nu), k);
    }
    for nu in 1..=mu {
        l -= ln_pochhammer(bb(nu) + 1.0, k);
    }
    for nu in mu + alpha + 1..lambda {
        l -= ln_pochhammer(bb(nu), k);
    }
    0.5 * l - 0.5 * r * k as f64 * (lambda as f64).ln()
}

/// φ^(α)_{μ,k}(z), the image of |kλ + μ⟩.
pub fn basis_function(params: &AlgebraParams, mu: usize, alpha: usize, k: usize) -> Result<PolyFunction> {
    check_sector(params, mu, alpha)?;
    let mut c = vec![ZERO; k + 1];
    c[k] = Complex64::new(ln_phi_coef(params, mu, alpha, k).exp(), 0.0);
    Ok(PolyFunction::scalar(c))
}

/// Fock coefficients → Bargmann function. A sector basis keeps only the F_μ components.
pub fn bargmann_transform(params: &AlgebraParams, psi: &StateVector, basis: Basis) -> Result<PolyFunction> {
    transform_coeffs(params, &psi.coeffs, basis)
}

fn transform_coeffs(params: &AlgebraParams, c: &[Complex64], basis: Basis) -> Result<PolyFunction> {
    let lambda = params.lambda();
    if c.len() < lambda {
        return Err(Error::TruncationTooSmall(format!("{} coefficients < lambda = {lambda}", c.len())));
    }
    let sector = |mu: usize, alpha: usize| -> Vec<Complex64> {
        (mu..c.len()).step_by(lambda).enumerate().map(|(k, n)| c[n] * ln_phi_coef(params, mu, alpha, k).exp()).collect()
    };
    Ok(match basis {
        Basis::SectorAlpha { mu, alpha } => {
            check_sector(params, mu, alpha)?;
            PolyFunction::scalar(sector(mu, alpha))
        }
        Basis::VectorAlpha0 => PolyFunction::vector((0..lambda).map(|mu| sector(mu, 0)).collect()),
        Basis::Eigenstate => {
            let mut comps = vec![vec![ZERO; c.len()]; lambda];
            let mut ln_f = 0.0;
            for (n, cn) in c.iter().enumerate() {
                if n > 0 {
                    ln_f += structure_function(params, n).ln();
                }
                comps[n % lambda][n] = cn * (-0.5 * ln_f).exp();
            }
            PolyFunction::vector(comps)
        }
    })
}

/// ⟨z^k, z^k⟩ = π λ^{r(k+1)} ∫ y^k h(y) dy for k ≤ max_degree.
fn monomial_norms(weight: &WeightFunction, max_degree: usize) -> Result<Vec<f64>> {
    if max_degree > MAX_INNER_DEGREE {
        return Err(Error::Domain(format!("inner products need degree <= {MAX_INNER_DEGREE}, got {max_degree}")));
    }
    let p = weight.problem();
    let ln_l = (p.params().lambda() as f64).ln();
    let r = p.r() as f64;
    let m = power_integrals(weight, max_degree, QUAD_TOL)?;
    Ok(m.iter().enumerate().map(|(k, m)| std::f64::consts::PI * (r * (k + 1) as f64 * ln_l).exp() * m).collect())
}

fn inner_with_norms(norms: &[f64], f: &[Complex64], g: &[Complex64]) -> Complex64 {
    f.iter().zip(g).zip(norms).map(|((a, b), n)| a.conj() * b * n).sum()
}

/// ∫ d²z h(|z|²/λ^r) f(z)* g(z) for scalar polynomials.
pub fn bargmann_inner_product(weight: &WeightFunction, f: &PolyFunction, g: &PolyFunction) -> Result<Complex64> {
    if f.n_components() != 1 || g.n_components() != 1 {
        return Err(Error::Shape("bargmann_inner_product takes scalar functions".into()));
    }
    let deg = f.degree().unwrap_or(0).min(g.degree().unwrap_or(0));
    let norms = monomial_norms(weight, deg)?;
    Ok(inner_with_norms(&norms, &f.components[0], &g.components[0]))
}

/// Σ_μ of the sector-μ products, the α = 0 weights h^(0)_μ on the diagonal.
pub fn vector_inner_product(weights: &[WeightFunction], f: &PolyFunction, g: &PolyFunction) -> Result<Complex64> {
    if f.n_components() != weights.len() || g.n_components() != weights.len() {
        return Err(Error::Shape("one weight per component is required".into()));
    }
    let mut total = ZERO;
    for (mu, w) in weights.iter().enumerate() {
        let deg = f.components[mu].len().min(g.components[mu].len());
        if deg == 0 {
            continue;
        }
        let norms = monomial_norms(w, deg - 1)?;
        total += inner_with_norms(&norms, &f.components[mu], &g.components[mu]);
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckRow {
    pub basis: String,
    pub label: String,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub rows: Vec<CheckRow>,
    pub max_residual: f64,
    pub tol: f64,
    pub pass: bool,
}

impl CheckReport {
    fn new(rows: Vec<CheckRow>, tol: f64) -> Self {
        let max_residual = rows.iter().map(|r| r.residual).fold(0.0, f64::max);
        CheckReport { rows, max_residual, tol, pass: max_residual <= tol }
    }
}

fn rel_diff(a: &PolyFunction, b: &PolyFunction) -> f64 {
    a.sub(b).max_abs() / a.max_abs().max(b.max_abs()).max(1.0)
}

const ALL_OPS: [OpKind; 7] = [OpKind::A, OpKind::Adag, OpKind::N, OpKind::H0, OpKind::J0, OpKind::Jplus, OpKind::Jminus];

/// Fock states whose images have degree ≤ `max_degree`.
fn fock_range(params: &AlgebraParams, basis: Basis, max_degree: usize) -> Vec<usize> {
    let lambda = params.lambda();
    match basis {
        Basis::SectorAlpha { mu, .. } => (0..=max_degree).map(|k| k * lambda + mu).collect(),
        Basis::VectorAlpha0 => (0..(max_degree + 1) * lambda).collect(),
        Basis::Eigenstate => (0..=max_degree).collect(),
    }
}

/// transform(M e_n) against realization(transform(e_n)) for every operator.
pub fn check_intertwining(params: &AlgebraParams, basis: Basis, max_degree: usize, tol: f64) -> Result<CheckReport> {
    let lambda = params.lambda();
    let states = fock_range(params, basis, max_degree);
    let dim = states.iter().max().copied().unwrap_or(0) + 2 * lambda + 1;
    let ops = ALL_OPS.iter().copied().chain((0..lambda).map(OpKind::P));
    let mut rows = Vec::new();
    for op in ops {
        let real = match realization(params, basis, op) {
            Ok(r) => r,
            Err(Error::UnsupportedOp(_)) => continue,
            Err(e) => return Err(e),
        };
        let m = build_operator(params, op, dim)?;
        let mut worst: f64 = 0.0;
        for &n in &states {
            let mut e = vec![ZERO; dim];
            e[n] = Complex64::new(1.0, 0.0);
            let lhs = transform_coeffs(params, &m.apply(&e), basis)?;
            let rhs = real.apply(&transform_coeffs(params, &e, basis)?)?;
            worst = worst.max(rel_diff(&lhs, &rhs));
        }
        rows.push(CheckRow { basis: basis.tag(), label: format!("{op:?}"), residual: worst });
    }
    Ok(CheckReport::new(rows, tol))
}

/// Monomials representing Fock states: z^k (sector), ω^k in component μ
/// (vector), z^{kλ+μ} in component μ (eigenstate).
fn fock_monomials(params: &AlgebraParams, basis: Basis, max_degree: usize) -> Vec<(usize, PolyFunction)> {
    let lambda = params.lambda();
    let nc = basis.n_components(params);
    match basis {
        Basis::SectorAlpha { mu, .. } => (0..=max_degree).map(|k| (mu, PolyFunction::monomial(1, 0, k))).collect(),
        Basis::VectorAlpha0 => (0..lambda)
            .flat_map(|mu| (0..=max_degree).map(move |k| (mu, PolyFunction::monomial(nc, mu, k))))
            .collect(),
        Basis::Eigenstate => (0..=max_degree).map(|n| (n % lambda, PolyFunction::monomial(nc, n % lambda, n))).collect(),
    }
}

/// [J₀, J±] = ±J±, [J₊, J₋] = f(J₀, P_μ), and [a, a†] = 1 + α_μ in vector bases.
pub fn check_commutators(params: &AlgebraParams, basis: Basis, max_degree: usize, tol: f64) -> Result<CheckReport> {
    let op = |k: OpKind| realization(params, basis, k);
    let (jp, jm, j0) = (op(OpKind::Jplus)?, op(OpKind::Jminus)?, op(OpKind::J0)?);
    let vector = !matches!(basis, Basis::SectorAlpha { .. });
    let ladder = if vector { Some((op(OpKind::A)?, op(OpKind::Adag)?)) } else { None };
    let comm = |x: &DiffOpDescriptor, y: &DiffOpDescriptor, f: &PolyFunction| -> Result<PolyFunction> {
        Ok(x.apply(&y.apply(f)?)?.sub(&y.apply(&x.apply(f)?)?))
    };
    let mut worst = [0.0f64; 4];
    for (mu, f) in fock_monomials(params, basis, max_degree) {
        let r = rel_diff(&comm(&j0, &jp, &f)?, &jp.apply(&f)?);
        worst[0] = worst[0].max(r);
        let r = rel_diff(&comm(&j0, &jm, &f)?, &jm.apply(&f)?.scaled(Complex64::new(-1.0, 0.0)));
        worst[1] = worst[1].max(r);
        // f is a J₀ eigenfunction
        let j0f = j0.apply(&f)?;
        let (c, k) = (0..f.n_components())
            .flat_map(|c| (0..f.components[c].len()).map(move |k| (c, k)))
            .find(|&(c, k)| f.coeff(c, k) != ZERO)
            .expect("monomial");
        let eig = (j0f.coeff(c, k) / f.coeff(c, k)).re;
        let rhs = f.scaled(Complex64::new(sga_structure_poly(params, eig, mu)?, 0.0));
        worst[2] = worst[2].max(rel_diff(&comm(&jp, &jm, &f)?, &rhs));
        if let Some((a, ad)) = &ladder {
            let rhs = f.scaled(Complex64::new(1.0 + params.alpha(mu as i64), 0.0));
            worst[3] = worst[3].max(rel_diff(&comm(a, ad, &f)?, &rhs));
        }
    }
    let labels = ["[J0,J+]=J+", "[J0,J-]=-J-", "[J+,J-]=f(J0,P)", "[a,a+]=1+sum alpha P"];
    let n = if vector { 4 } else { 3 };
    let rows = (0..n).map(|i| CheckRow { basis: basis.tag(), label: labels[i].into(), residual: worst[i] }).collect();
    Ok(CheckReport::new(rows, tol))
}

/// Eigenstate-basis operators against D(z)·(vector α = 0 operators in ω = z^λ)·D(z)^{-1}.
pub fn check_d_conjugation(params: &AlgebraParams, max_degree: usize, tol: f64) -> Result<CheckReport> {
    let lambda = params.lambda();
    let l = lambda as f64;
    // D_μ(z) = (Π_{ν≤μ} β̄_ν)^{-1/2} (z/√λ)^μ
    let d: Vec<f64> = (0..lambda)
        .map(|mu| {
            let prod: f64 = (1..=mu).map(|nu| params.beta_bar(nu as i64)).product();
            prod.powf(-0.5) * l.powf(-0.5 * mu as f64)
        })
        .collect();
    let lift = |f: &PolyFunction| -> PolyFunction {
        let comps = (0..lambda)
            .map(|mu| {
                let src = &f.components[mu];
                let mut out = vec![ZERO; src.len().saturating_sub(1) * lambda + mu + 1];
                for (k, x) in src.iter().enumerate() {
                    out[k * lambda + mu] = x * d[mu];
                }
                out
            })
            .collect();
        PolyFunction::vector(comps)
    };
    let mut rows = Vec::new();
    let ops = ALL_OPS.iter().copied().chain((0..lambda).map(OpKind::P));
    for op in ops {
        let (v, e) = (realization(params, Basis::VectorAlpha0, op)?, realization(params, Basis::Eigenstate, op)?);
        let mut worst: f64 = 0.0;
        for (_, f) in fock_monomials(params, Basis::VectorAlpha0, max_degree) {
            worst = worst.max(rel_diff(&e.apply(&lift(&f))?, &lift(&v.apply(&f)?)));
        }
        rows.push(CheckRow { basis: "eigenstate vs D(z) vector".into(), label: format!("{op:?}"), residual: worst });
    }
    Ok(CheckReport::new(rows, tol))
}

/// ⟨X f, g⟩ = ⟨f, X† g⟩ by quadrature for every sample pair.
///
/// Sector bases test (J₊, J₋) and (J₀, J₀) with the sector weight; the vector
/// basis tests (a†, a) with the α = 0 weights. Residuals are relative to max(1, |lhs|).
pub fn check_hermiticity(params: &AlgebraParams, basis: Basis, samples: &[PolyFunction], tol: f64) -> Result<CheckReport> {
    let pairs: Vec<(OpKind, OpKind)> = match basis {
        Basis::SectorAlpha { .. } => vec![(OpKind::Jplus, OpKind::Jminus), (OpKind::J0, OpKind::J0)],
        Basis::VectorAlpha0 => vec![(OpKind::Adag, OpKind::A), (OpKind::J0, OpKind::J0)],
        Basis::Eigenstate => return Err(Error::UnsupportedOp("Hermiticity is checked in the sector and vector bases".into())),
    };
    let weights: Vec<WeightFunction> = match basis {
        Basis::SectorAlpha { mu, alpha } => vec![weight_function(params, mu, alpha)?],
        _ => (0..params.lambda()).map(|mu| weight_function(params, mu, 0)).collect::<Result<_>>()?,
    };
    let mut applied = Vec::new();
    for (x, xd) in pairs {
        let (rx, rxd) = (realization(params, basis, x)?, realization(params, basis, xd)?);
        for (i, f) in samples.iter().enumerate() {
            for (j, g) in samples.iter().enumerate() {
                applied.push((x, xd, i, j, rx.apply(f)?, g, f, rxd.apply(g)?));
            }
        }
    }
    let top = applied
        .iter()
        .flat_map(|t| t.4.components.iter().chain(t.7.components.iter()).chain(t.5.components.iter()))
        .map(|c| c.len())
        .max()
        .unwrap_or(1)
        .max(1);
    // the products only need monomial norms, shared by every pair
    let norms: Vec<Vec<f64>> = weights.iter().map(|w| monomial_norms(w, top - 1)).collect::<Result<_>>()?;
    let inner = |f: &PolyFunction, g: &PolyFunction| -> Complex64 {
        f.components.iter().zip(&g.components).zip(&norms).map(|((a, b), n)| inner_with_norms(n, a, b)).sum()
    };
    let mut rows = Vec::new();
    for (x, xd, i, j, xf, g, f, xdg) in applied {
        let lhs = inner(&xf, g);
        let rhs = inner(f, &xdg);
        rows.push(CheckRow {
            basis: basis.tag(),
            label: format!("<{x:?} f{i}, f{j}> = <f{i}, {xd:?} f{j}>"),
            residual: (lhs - rhs).norm() / lhs.norm().max(1.0),
        });
    }
    Ok(CheckReport::new(rows, tol))
}

/// Coefficients of Π_j (θ - c_j) as a polynomial in θ, lowest power first.
fn theta_poly(roots: &[f64]) -> Vec<f64> {
    let mut p = vec![1.0];
    for &c in roots {
        let mut q = vec![0.0; p.len() + 1];
        for (i, &x) in p.iter().enumerate() {
            q[i + 1] += x;
            q[i] -= c * x;
        }
        p = q;
    }
    p
}

/// Relative residual of the weight's differential equation at y,
/// (-1)^α Π(θ - β̄_ν + 2) h - (-1)^{λ-α} (d/dy) Π(θ - β̄_ν) Π(θ - β̄_ν + 1) h with θ = y d/dy,
/// with θ-derivatives from a polynomial fit in ln y.
pub fn ode_residual(params: &AlgebraParams, mu: usize, alpha: usize, y: f64) -> Result<f64> {
    let w = weight_function(params, mu, alpha)?;
    let lambda = params.lambda();
    let bb = |nu: usize| params.beta_bar(nu as i64);
    let left_roots: Vec<f64> = (mu + 1..=mu + alpha).map(|nu| bb(nu) - 2.0).collect();
    // d/dy = y^{-1} θ, so the right factor gains a θ root at 0
    let right_roots: Vec<f64> = std::iter::once(0.0)
        .chain((1..=mu).map(bb))
        .chain((mu + alpha + 1..lambda).map(|nu| bb(nu) - 1.0))
        .collect();
    let (pl, pr) = (theta_poly(&left_roots), theta_poly(&right_roots));
    let npts = 2 * ODE_HALF_WIDTH + 1;
    let y_max = w.problem().y_max();
    if !(y < y_max) {
        return Err(Error::Domain(format!("y = {y} outside the support")));
    }
    // keep the stencil well inside a finite support
    let step = ODE_STEP.min((y_max / y).ln() / (2.0 * ODE_HALF_WIDTH as f64));
    let s0 = y.ln();
    let vals: Vec<f64> = (0..npts)
        .map(|i| w.eval((s0 + (i as f64 - ODE_HALF_WIDTH as f64) * step).exp()))
        .collect::<Result<_>>()?;
    // fit h(s0 + t) = Σ c_j t^j; θ^j h(y) = j! c_j
    let vand = DMatrix::from_fn(npts, npts, |i, j| ((i as f64 - ODE_HALF_WIDTH as f64) * step).powi(j as i32));
    let c = vand
        .lu()
        .solve(&DVector::from_vec(vals))
        .ok_or_else(|| Error::Domain("singular stencil".into()))?;
    let theta = |j: usize| c[j] * (1..=j).map(|x| x as f64).product::<f64>();
    let apply = |p: &[f64]| -> (f64, f64) {
        p.iter().enumerate().fold((0.0, 0.0), |(s, a), (j, x)| (s + x * theta(j), a + (x * theta(j)).abs()))
    };
    let sign = |n: usize| if n % 2 == 0 { 1.0 } else { -1.0 };
    let (l, la) = apply(&pl);
    let (r, ra) = apply(&pr);
    let resid = sign(alpha) * y * l - sign(lambda - alpha) * r;
    Ok(resid.abs() / (y * la + ra).max(f64::MIN_POSITIVE))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn sector_j0_and_perelomov() {
        let p = AlgebraParams::from_beta_bar(2, &[1.7]).unwrap();
        let f = PolyFunction::monomial(1, 0, 3);
        let g = apply_realization(&p, Basis::SectorAlpha { mu: 0, alpha: 1 }, OpKind::J0, &f).unwrap();
        assert!((g.coeff(0, 3) - c(3.0 + 0.5 * 1.7)).norm() < 1e-15);
        let g = apply_realization(&p, Basis::SectorAlpha { mu: 0, alpha: 1 }, OpKind::Jminus, &f).unwrap();
        assert_eq!(g.coeff(0, 2), c(3.0));
        let g = apply_realization(&p, Basis::SectorAlpha { mu: 1, alpha: 0 }, OpKind::Jplus, &f).unwrap();
        assert_eq!(g.coeff(0, 4), c(0.5));
    }

    #[test]
    fn basis_function_values() {
        let p = AlgebraParams::from_beta_bar(2, &[2.5]).unwrap();
        assert!((basis_function(&p, 0, 1, 0).unwrap().coeff(0, 0) - c(1.0)).norm() < 1e-14);
        let f = basis_function(&p, 0, 1, 1).unwrap();
        assert!((f.coeff(0, 1).re - 2.5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn pole_is_refused() {
        let p = AlgebraParams::from_beta_bar(2, &[0.8]).unwrap();
        let f = PolyFunction::vector(vec![vec![], vec![c(1.0)]]);
        let r = apply_realization(&p, Basis::Eigenstate, OpKind::A, &f);
        assert!(matches!(r, Err(Error::NonPolynomialResult(_))));
        let r = apply_realization(&p, Basis::SectorAlpha { mu: 0, alpha: 1 }, OpKind::A, &f);
        assert!(matches!(r, Err(Error::UnsupportedOp(_))));
    }

    #[test]
    fn theta_polynomial() {
        assert_eq!(theta_poly(&[1.0, 2.0]), vec![2.0, -3.0, 1.0]);
    }
}
