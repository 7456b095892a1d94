//! Exact constant cascades for the pair-finding, matching-growth,
//! augmentation and iterated-separation steps.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rational::{ceil_big, int, log10_abs, min_rat, pow, to_f64, Rational};

/// Largest number of separation rounds whose epsilon cascade is computed
/// exactly; (eps/2)^(3^L) has about 3^L digits.
pub const EXACT_LEVEL_CAP: usize = 12;

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Domain(msg()))
    }
}

fn check_omega(omega: &Rational) -> Result<()> {
    require(omega >= &int(1), || format!("Omega must be at least 1, got {omega}"))
}

fn check_unit_open(name: &str, r: &Rational) -> Result<()> {
    require(r > &Rational::zero() && r < &int(1), || format!("{name} must lie in (0, 1), got {r}"))
}

/// Regular-pair finder constants: (alpha, eps_rl) with
/// alpha = tau rho / (Omega^2 M) and eps_rl = min(eps, rho^2 / (8 Omega)).
pub fn lemma41_constants(
    omega: &Rational,
    eps: &Rational,
    rho: &Rational,
    tau: &Rational,
    m: usize,
) -> Result<(Rational, Rational)> {
    check_omega(omega)?;
    check_unit_open("rho", rho)?;
    check_unit_open("tau", tau)?;
    require(eps > &Rational::zero(), || format!("epsilon must be positive, got {eps}"))?;
    require(m >= 1, || "M must be at least 1".into())?;
    let alpha = tau * rho / (omega * omega * int(m));
    let eps_rl = min_rat(eps, &(rho * rho / (int(8) * omega)));
    Ok((alpha, eps_rl))
}

pub fn lemma41_alpha(omega: &Rational, eps: &Rational, rho: &Rational, tau: &Rational, m: usize) -> Result<Rational> {
    Ok(lemma41_constants(omega, eps, rho, tau, m)?.0)
}

/// Matching-growth size constant: the pair-finder constant at tau / 2.
pub fn lemma44_alpha(omega: &Rational, rho: &Rational, eps: &Rational, tau: &Rational, m: usize) -> Result<Rational> {
    lemma41_alpha(omega, eps, rho, &(tau / int(2)), m)
}

/// Constants of one augment-or-separate step.
#[derive(Debug, Clone)]
pub struct AugmentSchedule {
    pub omega: Rational,
    pub tau: Rational,
    pub rho: Rational,
    pub eps: Rational,
    pub m: usize,
    /// tau^2 / (32 Omega^2).
    pub base: Rational,
    /// Level densities tau^(l) for l = 0 ..= ceil(2 Omega / tau).
    pub tau_levels: Vec<Rational>,
    pub tau_prime: Rational,
    pub alpha: Rational,
    /// Growth constants mu^(l) for eps^3 and tau^(l).
    pub mu_levels: Vec<Rational>,
    pub pi: Rational,
    /// Whether eps < alpha, as the step requires.
    pub eps_admissible: bool,
}

fn check_augment_domain(omega: &Rational, tau: &Rational) -> Result<usize> {
    check_omega(omega)?;
    require(omega.is_integer(), || format!("Omega must be an integer, got {omega}"))?;
    require(tau > &Rational::zero() && tau < &(int(1) / (int(2) * omega)), || {
        format!("tau must lie in (0, 1/(2 Omega)), got {tau}")
    })?;
    ceil_big(&(int(2) * omega / tau)).to_usize().ok_or_else(|| Error::Domain("level count overflows".into()))
}

fn level_base(omega: &Rational, tau: &Rational) -> Rational {
    tau * tau / (int(32) * omega * omega)
}

/// Growth target tau' = tau^(0) / (2 Omega) of one augmentation step.
pub fn lemma46_tau_prime(omega: &Rational, tau: &Rational) -> Result<Rational> {
    let top = check_augment_domain(omega, tau)?;
    Ok(pow(&level_base(omega, tau), top + 2) / (int(2) * omega))
}

/// Builds the level schedule for an augmentation step. Requires integral
/// Omega >= 1 and 0 < tau < 1 / (2 Omega).
pub fn lemma46_schedule(
    omega: &Rational,
    tau: &Rational,
    rho: &Rational,
    eps: &Rational,
    m: usize,
) -> Result<AugmentSchedule> {
    let top = check_augment_domain(omega, tau)?;
    check_unit_open("rho", rho)?;
    require(eps > &Rational::zero(), || format!("epsilon must be positive, got {eps}"))?;
    let base = level_base(omega, tau);
    let tau_levels: Vec<Rational> = (0..=top).map(|l| pow(&base, top - l + 2)).collect();
    let tau_prime = &tau_levels[0] / (int(2) * omega);
    let alpha = &tau_prime * rho / (int(16) * omega);
    let eps3 = eps * eps * eps;
    let mu_levels = tau_levels.iter().map(|t| lemma44_alpha(omega, rho, &eps3, t, m)).collect::<Result<Vec<_>>>()?;
    let mu_min = mu_levels.iter().min().cloned().unwrap_or_else(Rational::zero);
    let pi = eps / int(2) * mu_min;
    let eps_admissible = eps < &alpha;
    Ok(AugmentSchedule {
        omega: omega.clone(),
        tau: tau.clone(),
        rho: rho.clone(),
        eps: eps.clone(),
        m,
        base,
        tau_levels,
        tau_prime,
        alpha,
        mu_levels,
        pi,
        eps_admissible,
    })
}

impl AugmentSchedule {
    pub fn top_level(&self) -> usize {
        self.tau_levels.len() - 1
    }

    /// Checks (tau^2 / 8 Omega) (tau^(l) / 4 Omega) = tau^(l-1) for every
    /// level; returns the first level where it fails.
    pub fn descent_identity(&self) -> std::result::Result<(), usize> {
        let factor = &self.tau * &self.tau / (int(8) * &self.omega) / (int(4) * &self.omega);
        for l in 1..self.tau_levels.len() {
            if &factor * &self.tau_levels[l] != self.tau_levels[l - 1] {
                return Err(l);
            }
        }
        Ok(())
    }

    /// Matching density used at level `l`: tau^(l) rho / (8 Omega).
    pub fn level_density(&self, l: usize) -> Rational {
        &self.tau_levels[l.min(self.top_level())] * &self.rho / (int(8) * &self.omega)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "Omega": exact(&self.omega),
            "tau": exact(&self.tau),
            "rho": exact(&self.rho),
            "epsilon": exact(&self.eps),
            "M": self.m,
            "base": exact(&self.base),
            "tau_levels": self.tau_levels.iter().map(exact).collect::<Vec<_>>(),
            "tau_prime": exact(&self.tau_prime),
            "alpha": exact(&self.alpha),
            "mu_levels": self.mu_levels.iter().map(exact).collect::<Vec<_>>(),
            "pi": exact(&self.pi),
            "epsilon_admissible": self.eps_admissible,
            "descent_identity": self.descent_identity().is_ok(),
        })
    }
}

/// How the separation cascade obtains tau'.
#[derive(Debug, Clone)]
pub enum TauPrime {
    /// From the augmentation schedule at tau = rho / 2.
    Derived,
    Explicit(Rational),
}

/// Constants of the iterated separation.
#[derive(Debug, Clone)]
pub struct SeparationSchedule {
    pub tau_prime: Rational,
    pub levels: usize,
    pub rho_levels: Vec<Rational>,
    pub beta: Rational,
    pub eps_levels: Vec<Rational>,
    pub eps_prime: Rational,
    pub pi_levels: Vec<Rational>,
    pub big_pi_levels: Vec<Rational>,
    pub pi: Rational,
    pub eps_sum_within_budget: bool,
    pub eps_admissible: bool,
}

/// eps^(l) = (eps/2)^(3^(L - l)) for l = 0 ..= L.
pub fn epsilon_levels(eps: &Rational, levels: usize) -> Result<Vec<Rational>> {
    require(levels >= 1, || "the number of separation rounds must be positive".into())?;
    require(levels <= EXACT_LEVEL_CAP, || format!("{levels} rounds exceed the exact cap of {EXACT_LEVEL_CAP}"))?;
    let half = eps / int(2);
    Ok((0..=levels).map(|l| pow(&half, 3usize.pow((levels - l) as u32))).collect())
}

/// Number of rounds L = ceil(2 / tau') + 1.
pub fn separation_rounds(tau_prime: &Rational) -> Result<BigInt> {
    require(tau_prime > &Rational::zero(), || format!("tau' must be positive, got {tau_prime}"))?;
    Ok(ceil_big(&(int(2) / tau_prime)) + BigInt::one())
}

pub fn lemma47_schedule(
    omega: &Rational,
    rho: &Rational,
    eps: &Rational,
    m: usize,
    tau_prime: &TauPrime,
) -> Result<SeparationSchedule> {
    check_omega(omega)?;
    check_unit_open("rho", rho)?;
    require(rho < &(int(1) / omega), || format!("rho must be below 1/Omega, got {rho}"))?;
    require(eps > &Rational::zero(), || format!("epsilon must be positive, got {eps}"))?;
    let tau_prime = match tau_prime {
        TauPrime::Derived => lemma46_schedule(omega, &(rho / int(2)), rho, eps, m)?.tau_prime,
        TauPrime::Explicit(t) => t.clone(),
    };
    let rounds = separation_rounds(&tau_prime)?;
    let levels = rounds.to_usize().filter(|&l| l <= EXACT_LEVEL_CAP).ok_or_else(|| {
        Error::Domain(format!(
            "L = ceil(2/tau') + 1 has about 10^{:.1} rounds; exact cascades stop at {EXACT_LEVEL_CAP}",
            -log10_abs(&tau_prime) + 2f64.log10()
        ))
    })?;
    let step = &tau_prime / (int(16) * omega);
    let mut rho_levels = vec![rho.clone()];
    for l in 1..=levels {
        let next = &rho_levels[l - 1] * &step;
        rho_levels.push(next);
    }
    let beta = rho_levels[levels].clone();
    let eps_levels = epsilon_levels(eps, levels)?;
    let eps_prime = eps_levels[0].clone();
    // The smallest growth constant sits at the lowest level density
    // tau^(0) = 2 Omega tau'.
    let tau0 = int(2) * omega * &tau_prime;
    let pi_levels: Vec<Rational> = (0..levels)
        .map(|l| {
            let eps_next = &eps_levels[l + 1];
            eps_next / int(2) * (&tau0 / int(2)) * &rho_levels[l] / (omega * omega * int(m))
        })
        .collect();
    let mut big_pi_levels = vec![rho / (int(2) * omega)];
    for l in 0..levels {
        let next = &big_pi_levels[l] * &pi_levels[l];
        big_pi_levels.push(next);
    }
    let pi = big_pi_levels[levels].clone();
    let total: Rational = eps_levels.iter().cloned().sum();
    Ok(SeparationSchedule {
        tau_prime,
        levels,
        eps_admissible: eps < &beta,
        rho_levels,
        beta,
        eps_levels,
        eps_prime,
        pi_levels,
        big_pi_levels,
        pi,
        eps_sum_within_budget: &total <= eps,
    })
}

impl SeparationSchedule {
    pub fn to_json(&self) -> Value {
        json!({
            "tau_prime": exact(&self.tau_prime),
            "L": self.levels,
            "rho_levels": self.rho_levels.iter().map(exact).collect::<Vec<_>>(),
            "beta": exact(&self.beta),
            "epsilon_levels": self.eps_levels.iter().map(exact).collect::<Vec<_>>(),
            "epsilon_prime": exact(&self.eps_prime),
            "pi_levels": self.pi_levels.iter().map(exact).collect::<Vec<_>>(),
            "Pi_levels": self.big_pi_levels.iter().map(exact).collect::<Vec<_>>(),
            "pi": exact(&self.pi),
            "epsilon_sum_within_budget": self.eps_sum_within_budget,
            "epsilon_admissible": self.eps_admissible,
        })
    }
}

/// `{"exact": "p/q", "decimal": f, "log10": l}`.
pub fn exact(r: &Rational) -> Value {
    json!({ "exact": r.to_string(), "decimal": to_f64(r), "log10": log10_abs(r) })
}

/// The regular-pair threshold tau rho / (4 Omega).
pub fn pair_density(omega: &Rational, rho: &Rational, tau: &Rational) -> Rational {
    tau * rho / (int(4) * omega)
}
