//! Orbital layer: overlap integrals of the two trap modes and the spin-model
//! parameters derived from them.

use crate::error::{Error, Result};
use crate::quadrature::GaussHermite;

/// Default Gauss–Hermite order for the harmonic-oscillator integrals. The
/// integrands are polynomial of degree at most 4 times a Gaussian, so this is
/// far beyond what exactness requires; the doubling check guards it anyway.
pub const DEFAULT_QUADRATURE_ORDER: usize = 16;

/// Largest change tolerated in any integral when the node count is doubled.
pub const QUADRATURE_TOL: f64 = 1e-10;

/// Interaction couplings in units of `g_1D` (normalized so that `Ã₁ = 1` for
/// the harmonic orbitals), the dipole element and single-particle energies.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ModeIntegrals {
    /// Intra-mode interaction of mode 0.
    pub a1: f64,
    /// Intra-mode interaction of mode 1.
    pub a2: f64,
    /// Pair tunneling amplitude.
    pub a3: f64,
    /// Inter-mode density-density coupling.
    pub a4: f64,
    /// `<0|x|1>` in oscillator lengths.
    pub kappa: f64,
    pub eps0: f64,
    pub eps1: f64,
}

impl ModeIntegrals {
    pub fn new(a1: f64, a2: f64, a3: f64, a4: f64, kappa: f64, eps0: f64, eps1: f64) -> Result<Self> {
        let mi = Self { a1, a2, a3, a4, kappa, eps0, eps1 };
        mi.validate()?;
        Ok(mi)
    }

    /// `σ = Ã₁ + Ã₂`.
    pub fn sigma_a(&self) -> f64 {
        self.a1 + self.a2
    }

    /// Constraints implied by real orbitals of definite parity.
    pub fn validate(&self) -> Result<()> {
        let all = [self.a1, self.a2, self.a3, self.a4, self.kappa, self.eps0, self.eps1];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("mode integrals must be finite".into()));
        }
        if [self.a1, self.a2, self.a3, self.a4].iter().any(|&a| a < 0.0) {
            return Err(Error::Constraint("couplings A1..A4 must be non-negative".into()));
        }
        let scale = self.a4.abs().max(self.a3.abs()).max(1.0);
        if (self.a4 - 4.0 * self.a3).abs() > 1e-10 * scale {
            return Err(Error::Constraint(format!(
                "real orbitals require A4 = 4 A3, got A4 = {}, A3 = {}",
                self.a4, self.a3
            )));
        }
        if self.sigma_a() < 2.0 * self.a3 - 1e-12 * scale {
            return Err(Error::Constraint(format!(
                "real orbitals require A1 + A2 >= 2 A3, got {} < {}",
                self.sigma_a(),
                2.0 * self.a3
            )));
        }
        Ok(())
    }
}

/// Normalized Hermite polynomials `h_n` such that `ψ_n(x) = h_n(x) e^{-x²/2}`
/// are the oscillator eigenfunctions. Returns `(h_0(x), ..., h_max(x))`.
fn hermite_factors(max: usize, x: f64) -> Vec<f64> {
    let mut h = Vec::with_capacity(max + 1);
    h.push(std::f64::consts::PI.powf(-0.25));
    if max >= 1 {
        h.push(std::f64::consts::SQRT_2 * x * h[0]);
    }
    for n in 1..max {
        let next = (2.0 / (n + 1) as f64).sqrt() * x * h[n] - (n as f64 / (n + 1) as f64).sqrt() * h[n - 1];
        h.push(next);
    }
    h
}

/// Raw integrals for the lowest two oscillator orbitals at a given order.
struct RawIntegrals {
    v0000: f64,
    v1111: f64,
    v0011: f64,
    v0101: f64,
    kappa: f64,
    eps0: f64,
    eps1: f64,
}

impl RawIntegrals {
    fn compute(order: usize) -> Result<Self> {
        let q = GaussHermite::new(order)?;
        // ∫ ψiψjψkψl dx = ∫ hihjhkhl e^{-2x²} dx; substitute y = √2 x.
        let quartic = |i: usize, j: usize, k: usize, l: usize| {
            q.integrate(|y| {
                let h = hermite_factors(1, y / std::f64::consts::SQRT_2);
                h[i] * h[j] * h[k] * h[l]
            }) / std::f64::consts::SQRT_2
        };
        let kappa = q.integrate(|x| {
            let h = hermite_factors(1, x);
            h[0] * x * h[1]
        });
        // ε_n = ½ ∫ (ψ'² + x²ψ²) dx with ψ' = (h' - x h) e^{-x²/2} and h_n' = √(2n) h_{n-1}.
        let energy = |n: usize| {
            0.5 * q.integrate(|x| {
                let h = hermite_factors(n, x);
                let dh = if n == 0 { 0.0 } else { (2.0 * n as f64).sqrt() * h[n - 1] };
                (dh - x * h[n]).powi(2) + x * x * h[n] * h[n]
            })
        };
        Ok(Self {
            v0000: quartic(0, 0, 0, 0),
            v1111: quartic(1, 1, 1, 1),
            v0011: quartic(0, 0, 1, 1),
            v0101: quartic(0, 1, 0, 1),
            kappa,
            eps0: energy(0),
            eps1: energy(1),
        })
    }

    fn named(&self) -> [(&'static str, f64); 7] {
        [
            ("V0000", self.v0000),
            ("V1111", self.v1111),
            ("V0011", self.v0011),
            ("V0101", self.v0101),
            ("kappa", self.kappa),
            ("eps0", self.eps0),
            ("eps1", self.eps1),
        ]
    }
}

/// Integrals for the ground and first excited oscillator orbitals, with the
/// couplings normalized to `Ã₁ = 1`.
pub fn harmonic_mode_integrals() -> Result<ModeIntegrals> {
    harmonic_mode_integrals_with_order(DEFAULT_QUADRATURE_ORDER)
}

pub fn harmonic_mode_integrals_with_order(order: usize) -> Result<ModeIntegrals> {
    let raw = RawIntegrals::compute(order)?;
    let refined = RawIntegrals::compute(2 * order)?;
    for ((name, a), (_, b)) in raw.named().into_iter().zip(refined.named()) {
        let change = (a - b).abs();
        if change.is_nan() || change >= QUADRATURE_TOL {
            return Err(Error::Quadrature { integral: name, change });
        }
    }
    let a1 = refined.v0000;
    // A4 = V0101 + V1010 + V1001 + V0110; all four coincide for real orbitals.
    ModeIntegrals::new(
        1.0,
        refined.v1111 / a1,
        refined.v0011 / a1,
        4.0 * refined.v0101 / a1,
        refined.kappa,
        refined.eps0,
        refined.eps1,
    )
}

/// Scalars defining the two-mode model in spin form, in oscillator units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SystemParams {
    pub n_particles: usize,
    /// Rescaled coupling `g = N g_1D`.
    pub g: f64,
    /// Single-particle level spacing `ε₁ - ε₀`.
    pub delta_eps: f64,
    /// `Ã₁ - Ã₂`.
    pub delta_a: f64,
    pub eta: f64,
    pub xi: f64,
    /// Acceleration parameter `λ = 2χκ`, the quantity being estimated.
    pub lambda_acc: f64,
    /// Phase-accumulation time.
    pub t: f64,
}

impl SystemParams {
    /// Harmonic-orbital values `η = 0.625`, `ξ = -0.6`, `ΔA = 0.25`, `δε = 1`.
    pub fn harmonic(n_particles: usize, g: f64, lambda_acc: f64, t: f64) -> Result<Self> {
        derive_params(&harmonic_mode_integrals()?, n_particles, g, lambda_acc, t, None)
    }

    pub fn g_1d(&self) -> f64 {
        self.g / self.n_particles as f64
    }

    pub fn q(&self) -> f64 {
        renormalized_q(self)
    }

    pub fn with_delta_eps(mut self, delta_eps: f64) -> Self {
        self.delta_eps = delta_eps;
        self
    }

    pub fn with_g(mut self, g: f64) -> Self {
        self.g = g;
        self
    }

    pub fn with_lambda(mut self, lambda_acc: f64) -> Self {
        self.lambda_acc = lambda_acc;
        self
    }

    pub fn with_t(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    /// Finiteness, ranges, and the sign constraints on `(η, ξ)`.
    pub fn validate(&self) -> Result<()> {
        if self.n_particles == 0 {
            return Err(Error::InvalidInput("at least one particle is required".into()));
        }
        let named = [
            ("g", self.g),
            ("delta_eps", self.delta_eps),
            ("delta_a", self.delta_a),
            ("eta", self.eta),
            ("xi", self.xi),
            ("lambda", self.lambda_acc),
            ("t", self.t),
        ];
        if let Some((name, value)) = named.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("{name} = {value} is not finite")));
        }
        if self.g < 0.0 {
            return Err(Error::InvalidInput(format!("g = {} must be non-negative", self.g)));
        }
        if self.t < 0.0 {
            return Err(Error::InvalidInput(format!("t = {} must be non-negative", self.t)));
        }
        check_sign_constraints(self.eta, self.xi)
    }
}

/// `sgn(η) = -sgn(ξ)` whenever both are nonzero, and `ξ ≤ 0` or `ξ ≥ 1`.
pub fn check_sign_constraints(eta: f64, xi: f64) -> Result<()> {
    const SLACK: f64 = 1e-12;
    if eta != 0.0 && xi != 0.0 && eta.signum() == xi.signum() {
        return Err(Error::Constraint(format!(
            "eta and xi must have opposite signs (eta = {eta}, xi = {xi})"
        )));
    }
    if xi > SLACK && xi < 1.0 - SLACK {
        return Err(Error::Constraint(format!("xi must be <= 0 or >= 1, got {xi}")));
    }
    Ok(())
}

/// Spin-model parameters from mode integrals. `delta_eps_override` replaces
/// the orbital level spacing, which the figures treat as a free knob.
pub fn derive_params(
    mi: &ModeIntegrals,
    n_particles: usize,
    g: f64,
    lambda_acc: f64,
    t: f64,
    delta_eps_override: Option<f64>,
) -> Result<SystemParams> {
    mi.validate()?;
    let sigma = mi.sigma_a();
    let denominator = sigma - (2.0 * mi.a3 + mi.a4);
    if denominator.abs() < 1e-12 {
        return Err(Error::SingularModeGeometry { denominator });
    }
    let params = SystemParams {
        n_particles,
        g,
        delta_eps: delta_eps_override.unwrap_or(mi.eps1 - mi.eps0),
        delta_a: mi.a1 - mi.a2,
        eta: (mi.a4 + 2.0 * mi.a3 - sigma) / 2.0,
        xi: (sigma + 2.0 * mi.a3 - mi.a4) / denominator,
        lambda_acc,
        t,
    };
    params.validate()?;
    Ok(params)
}

/// Interaction-renormalized level spacing `q = g (N-1)/N ΔA/2 - δε`.
pub fn renormalized_q(p: &SystemParams) -> f64 {
    let n = p.n_particles as f64;
    p.g * ((n - 1.0) / n) * (p.delta_a / 2.0) - p.delta_eps
}

/// Lieb–Liniger-type estimate of how far the gas is from the two-mode regime.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Validity {
    pub gamma: f64,
    /// Advisory: `γ ≤ 1`.
    pub two_mode_ok: bool,
}

/// `γ ≈ 1.5 g_1D^{4/3} N^{-2/3}`.
pub fn validity_gamma(g_1d: f64, n_particles: usize) -> Result<Validity> {
    if n_particles == 0 {
        return Err(Error::InvalidInput("at least one particle is required".into()));
    }
    if !g_1d.is_finite() || g_1d < 0.0 {
        return Err(Error::InvalidInput(format!("g_1D = {g_1d} must be finite and non-negative")));
    }
    let gamma = 1.5 * g_1d.powf(4.0 / 3.0) * (n_particles as f64).powf(-2.0 / 3.0);
    Ok(Validity { gamma, two_mode_ok: gamma <= 1.0 })
}
