//! Single-mode coherent feedback through a beamsplitter, analysed one
//! quadrature at a time with exact scalar transfer functions.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{GaussianRational as Q, Poly, RationalFn};
use crate::Complex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    Q,
    P,
}

impl Quadrature {
    pub fn name(self) -> &'static str {
        match self {
            Quadrature::Q => "q",
            Quadrature::P => "p",
        }
    }
}

fn is_real_or_imaginary(z: &Q) -> bool {
    z.re.is_zero() || z.im.is_zero()
}

/// Single-mode plant with `Ω₋ = 0`, purely imaginary pump `Ω₊` and
/// quadrature couplings `c_q = C₋ + C₊`, `c_p = C₋ - C₊`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadPlantParams {
    omega_plus: Q,
    /// `c_q · c_p`, always real.
    coupling: Q,
    channels: Option<(Q, Q)>,
}

impl QuadPlantParams {
    pub fn new(omega_plus: Q, c_q: Q, c_p: Q) -> Result<Self> {
        if !is_real_or_imaginary(&c_q) || !is_real_or_imaginary(&c_p) {
            return Err(Error::Parameter(
                "each quadrature coupling must be real or purely imaginary".into(),
            ));
        }
        let mut p = Self::from_coupling(omega_plus, &c_q * &c_p)?;
        p.channels = Some((c_q, c_p));
        Ok(p)
    }

    /// Builds from the product `c_q · c_p` alone.
    pub fn from_coupling(omega_plus: Q, coupling: Q) -> Result<Self> {
        if !omega_plus.re.is_zero() {
            return Err(Error::Parameter(format!(
                "pump must be purely imaginary, got {omega_plus}"
            )));
        }
        if !coupling.is_real() {
            return Err(Error::Parameter(format!(
                "coupling product must be real, got {coupling}"
            )));
        }
        Ok(Self {
            omega_plus,
            coupling,
            channels: None,
        })
    }

    /// `K ≡ 1`: no pump, no coupling.
    pub fn identity() -> Self {
        Self {
            omega_plus: Q::zero(),
            coupling: Q::zero(),
            channels: None,
        }
    }

    pub fn omega_plus(&self) -> &Q {
        &self.omega_plus
    }

    pub fn coupling(&self) -> &Q {
        &self.coupling
    }

    pub fn channels(&self) -> Option<&(Q, Q)> {
        self.channels.as_ref()
    }

    /// `(C₋, C₊)` recovered from the quadrature couplings, when known.
    pub fn annihilation_couplings(&self) -> Option<(Q, Q)> {
        let (cq, cp) = self.channels.as_ref()?;
        let half = Q::from_ratio(1, 2);
        Some((&(cq + cp) * &half, &(cq - cp) * &half))
    }

    pub fn is_identity(&self) -> bool {
        self.omega_plus.is_zero() && self.coupling.is_zero()
    }

    /// `iΩ₊`, real by construction.
    fn detuning(&self) -> Q {
        self.omega_plus.mul_i()
    }

    /// `(s + iΩ₊ ∓ c/2)/(s + iΩ₊ ± c/2)` with `-iΩ₊` on the p quadrature.
    pub fn transfer(&self, quad: Quadrature) -> RationalFn {
        let shift = match quad {
            Quadrature::Q => self.detuning(),
            Quadrature::P => -&self.detuning(),
        };
        let half_c = &self.coupling * &Q::from_ratio(1, 2);
        let num = Poly::new(vec![&shift - &half_c, Q::one()]);
        let den = Poly::new(vec![&shift + &half_c, Q::one()]);
        RationalFn::new(num, den)
    }

    pub fn quadrature_transfer(&self) -> (RationalFn, RationalFn) {
        (self.transfer(Quadrature::Q), self.transfer(Quadrature::P))
    }
}

/// `G_q(s) · G_p(-s) = 1`.
pub fn check_quadrature_duality(gq: &RationalFn, gp: &RationalFn) -> bool {
    (gq * &gp.reflect()).is_one()
}

/// Beamsplitter `[[α, β], [β, -α]]` with `α² + β² = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Beamsplitter {
    alpha: Q,
}

impl Beamsplitter {
    pub fn new(alpha: Q) -> Result<Self> {
        if !alpha.is_real() {
            return Err(Error::Parameter(format!("beamsplitter α must be real, got {alpha}")));
        }
        if alpha.re.abs() > num_rational::BigRational::one() {
            return Err(Error::Parameter(format!("beamsplitter needs |α| ≤ 1, got {alpha}")));
        }
        Ok(Self { alpha })
    }

    pub fn alpha(&self) -> &Q {
        &self.alpha
    }

    pub fn beta_sq(&self) -> Q {
        &Q::one() - &(&self.alpha * &self.alpha)
    }

    pub fn beta(&self) -> f64 {
        self.beta_sq().to_complex().re.max(0.0).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeedbackNetwork {
    pub plant: QuadPlantParams,
    pub controller: QuadPlantParams,
    pub bs: Beamsplitter,
}

impl FeedbackNetwork {
    pub fn new(plant: QuadPlantParams, controller: QuadPlantParams, bs: Beamsplitter) -> Self {
        Self { plant, controller, bs }
    }

    /// `G_j K_j`.
    pub fn loop_gain(&self, quad: Quadrature) -> RationalFn {
        &self.plant.transfer(quad) * &self.controller.transfer(quad)
    }

    /// `T_j = (α + G_j K_j)/(1 + α G_j K_j)`.
    pub fn closed_loop_quadrature(&self, quad: Quadrature) -> Result<RationalFn> {
        let l = self.loop_gain(quad);
        let a = RationalFn::constant(self.bs.alpha.clone());
        let den = &RationalFn::one() + &(&a * &l);
        if den.is_zero() {
            return Err(Error::DegenerateNetwork(format!(
                "1 + α·G·K vanishes identically on the {} quadrature",
                quad.name()
            )));
        }
        Ok(&(&a + &l) / &den)
    }

    pub fn closed_loop(&self) -> Result<(RationalFn, RationalFn)> {
        Ok((
            self.closed_loop_quadrature(Quadrature::Q)?,
            self.closed_loop_quadrature(Quadrature::P)?,
        ))
    }

    /// `(1+α)X ∓ (1-α)Y`; zero exactly when `T_j` vanishes at the origin
    /// (away from cancellations).
    pub fn squeezing_residual(&self, quad: Quadrature) -> Q {
        let (x, y) = residual_terms(&self.plant, &self.controller);
        let one = Q::one();
        let a = &self.bs.alpha;
        let lhs = &(&one + a) * &x;
        let rhs = &(&one - a) * &y;
        match quad {
            Quadrature::Q => &lhs - &rhs,
            Quadrature::P => &lhs + &rhs,
        }
    }

    /// `S_j = β² G_j K_j / ((1 + α G_j K_j)(α + G_j K_j))` at `s`.
    pub fn sensitivity_quadrature(&self, quad: Quadrature, s: Complex) -> Result<Complex> {
        let l = self.loop_gain(quad);
        if l.den().eval_complex(s).norm() == 0.0 {
            return Err(Error::PoleEvaluation { s, eigenvalue: s });
        }
        let gk = l.eval_complex(s);
        let alpha = self.bs.alpha.to_complex();
        let den = (Complex::new(1.0, 0.0) + alpha * gk) * (alpha + gk);
        if den.norm() == 0.0 {
            return Err(Error::PoleEvaluation { s, eigenvalue: s });
        }
        Ok(self.bs.beta_sq().to_complex() * gk / den)
    }

    pub fn sensitivity(&self, s: Complex) -> Result<(Complex, Complex)> {
        Ok((
            self.sensitivity_quadrature(Quadrature::Q, s)?,
            self.sensitivity_quadrature(Quadrature::P, s)?,
        ))
    }
}

/// `X = ¼cc' - Ω₊Ω₊'`, `Y = (i/2)(cΩ₊' + c'Ω₊)`.
pub fn residual_terms(plant: &QuadPlantParams, controller: &QuadPlantParams) -> (Q, Q) {
    let (c, w) = (&plant.coupling, &plant.omega_plus);
    let (c2, w2) = (&controller.coupling, &controller.omega_plus);
    let x = &(&(c * c2) * &Q::from_ratio(1, 4)) - &(w * w2);
    let y = &(&(c * w2) + &(c2 * w)).mul_i() * &Q::from_ratio(1, 2);
    (x, y)
}

/// Beamsplitter settings that put a zero of `T_j` at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaSolution {
    pub quadrature: Quadrature,
    /// The solution when it is a physical beamsplitter (`|α| ≤ 1`).
    pub alpha: Option<Q>,
    /// The solution before the physicality gate.
    pub raw: Option<Q>,
    /// From the residual: `(Y-X)/(X+Y)` on q, `(X+Y)/(Y-X)` on p.
    pub from_residual: Option<Q>,
    /// From `α = -G_j(0) K_j(0)`.
    pub from_closed_loop: Option<Q>,
    /// For `K ≡ 1`: `(±iΩ₊ - c/2)/(±iΩ₊ + c/2)`, the reduced-condition formula.
    pub identity_controller_formula: Option<Q>,
    /// Set when the formula values above disagree with `from_closed_loop`.
    pub disagreement: bool,
    /// Set when the residual vanishes identically in α (`X = Y = 0` or `X ± Y = 0`).
    pub residual_unsolvable: bool,
    /// `|α| = 1`: `β = 0`, the loop is open and `T ≡ ±1`, so the zero cancels.
    pub disconnected: bool,
}

impl AlphaSolution {
    pub fn physical(&self) -> bool {
        self.alpha.is_some()
    }
}

fn is_physical(a: &Q) -> bool {
    a.is_real() && a.re.abs() <= num_rational::BigRational::one()
}

pub fn solve_alpha_for_squeezing(
    plant: &QuadPlantParams,
    controller: &QuadPlantParams,
    quad: Quadrature,
) -> AlphaSolution {
    let (x, y) = residual_terms(plant, controller);
    let (num, den) = match quad {
        Quadrature::Q => (&y - &x, &x + &y),
        Quadrature::P => (&x + &y, &y - &x),
    };
    let from_residual = den.inv().map(|d| &num * &d);
    let g0 = plant.transfer(quad).eval(&Q::zero());
    let k0 = controller.transfer(quad).eval(&Q::zero());
    let from_closed_loop = match (g0, k0) {
        (Some(g), Some(k)) => Some(-&(&g * &k)),
        _ => None,
    };
    let identity_controller_formula = controller.is_identity().then(|| {
        let d = match quad {
            Quadrature::Q => plant.detuning(),
            Quadrature::P => -&plant.detuning(),
        };
        let half_c = &plant.coupling * &Q::from_ratio(1, 2);
        (&d + &half_c).inv().map(|inv| &(&d - &half_c) * &inv)
    });
    let identity_controller_formula = identity_controller_formula.flatten();
    let disagreement = match &from_closed_loop {
        Some(direct) => [&from_residual, &identity_controller_formula]
            .iter()
            .any(|v| v.as_ref().is_some_and(|v| v != direct)),
        None => false,
    };
    let raw = from_closed_loop.clone().or_else(|| from_residual.clone());
    let alpha = raw.clone().filter(is_physical);
    let disconnected = alpha
        .as_ref()
        .is_some_and(|a| a.re.abs() == num_rational::BigRational::one());
    AlphaSolution {
        quadrature: quad,
        alpha,
        raw,
        from_residual,
        from_closed_loop,
        identity_controller_formula,
        disagreement,
        residual_unsolvable: den.is_zero(),
        disconnected,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthesisSign {
    /// Upper sign; targets the q quadrature.
    Plus,
    /// Lower sign; targets the p quadrature.
    Minus,
}

impl SynthesisSign {
    pub fn quadrature(self) -> Quadrature {
        match self {
            SynthesisSign::Plus => Quadrature::Q,
            SynthesisSign::Minus => Quadrature::P,
        }
    }
}

/// Controller pump `Ω₊'` for a controller sharing the plant's coupling:
/// `∓(ic/2)((1+α)c ∓ 2(1-α)iΩ₊)/((1-α)c ∓ 2(1+α)iΩ₊)`.
pub fn synthesize_matched_controller(
    plant: &QuadPlantParams,
    alpha: &Q,
    sign: SynthesisSign,
) -> Result<QuadPlantParams> {
    let one = Q::one();
    let two = Q::from_int(2);
    let c = &plant.coupling;
    let iw = plant.detuning();
    let sgn = match sign {
        SynthesisSign::Plus => Q::one(),
        SynthesisSign::Minus => -&Q::one(),
    };
    let num = &(&(&one + alpha) * c) - &(&(&sgn * &two) * &(&(&one - alpha) * &iw));
    let den = &(&(&one - alpha) * c) - &(&(&sgn * &two) * &(&(&one + alpha) * &iw));
    let inv = den
        .inv()
        .ok_or_else(|| Error::SynthesisSingular("denominator (1-α)c ∓ 2(1+α)iΩ₊ vanishes".into()))?;
    let pref = &(&(-&sgn) * &c.mul_i()) * &Q::from_ratio(1, 2);
    let omega = &(&pref * &num) * &inv;
    if !omega.re.is_zero() {
        return Err(Error::Parameter(format!(
            "synthesized pump {omega} is not purely imaginary"
        )));
    }
    let mut k = QuadPlantParams::from_coupling(omega, c.clone())?;
    k.channels = plant.channels.clone();
    Ok(k)
}

/// One frequency sample of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub omega: f64,
    pub t_q: f64,
    pub t_p: f64,
    pub s_q: f64,
    pub s_p: f64,
}

/// `points` log-spaced frequencies in `[from, to]`; `|T|` and `|S|` at `s = iω`.
/// Samples at a pole report `inf`.
pub fn frequency_sweep(net: &FeedbackNetwork, from: f64, to: f64, points: usize) -> Result<Vec<SweepRow>> {
    if !(from > 0.0 && to > from && points >= 2) {
        return Err(Error::Parameter(
            "sweep needs 0 < from < to and at least two points".into(),
        ));
    }
    let (tq, tp) = net.closed_loop()?;
    let ratio = to / from;
    let rows = (0..points)
        .map(|k| {
            let omega = match k {
                0 => from,
                k if k == points - 1 => to,
                k => from * ratio.powf(k as f64 / (points - 1) as f64),
            };
            let s = Complex::new(0.0, omega);
            let mag = |r: &RationalFn| r.eval_complex(s).norm();
            let sens = |q| {
                net.sensitivity_quadrature(q, s)
                    .map(|z| z.norm())
                    .unwrap_or(f64::INFINITY)
            };
            SweepRow {
                omega,
                t_q: mag(&tq),
                t_p: mag(&tp),
                s_q: sens(Quadrature::Q),
                s_p: sens(Quadrature::P),
            }
        })
        .collect();
    Ok(rows)
}
