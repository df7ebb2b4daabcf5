//! Real-order modified Bessel functions `I_nu`, `K_nu` and their
//! derivatives, in scaled form.
//!
//! Branch layout per order `nu` and argument `x`:
//!
//! * `x >= max(30, nu^2/2)` — exponentially scaled large-argument
//!   expansions for both `I` and `K`;
//! * `2 < x < max(30, nu^2/2)` — `I` by the ascending series (all terms
//!   positive, no cancellation at any argument), `K` by the Steed
//!   continued fraction plus the stable upward recurrence.  The reflection
//!   and log-series forms lose roughly `e^{2x}` in relative accuracy here,
//!   which is why this middle branch exists;
//! * `x <= 2` — `I` by the ascending series; `K` by the reflection formula
//!   `(pi/2)(I_{-nu} - I_nu)/sin(nu pi)` for non-integer order and by the
//!   dedicated log-series (the limit of the reflection formula) for
//!   integer order.
//!
//! Derivatives come only from the order recurrences `I_0' = I_1`,
//! `K_0' = -K_1`, `I_nu' = I_{nu-1} - (nu/x) I_nu` and
//! `K_nu' = (nu/x) K_nu - K_{nu+1}`; no numerical differentiation anywhere.
//!
//! Orders extremely close to (but not at) an integer go through the
//! reflection formula and lose accuracy like `eps / |sin(nu pi)|`; exact
//! integer and half-integer orders, the only ones the eigenvalue formulas
//! produce, are full precision.

// reference constants are written with guard digits
#![allow(clippy::excessive_precision)]

use crate::error::MathError;
use crate::real::Real;
use crate::scaled::ScaledValue;

use super::gamma::{ln_gamma_signed, sin_pi};

/// Hard cap on ascending-series terms.
const SERIES_MAX_TERMS: usize = 500;
/// Hard cap on continued-fraction / asymptotic iterations.
const TAIL_MAX_TERMS: usize = 500;

/// Term/partial-sum ratio at which series terminate (~1e-17 in double
/// precision).
fn series_tol<T: Real>() -> T {
    T::epsilon() * T::of(0.05)
}

/// Argument beyond which the large-argument expansions take over.
fn asymptotic_cutoff<T: Real>(order: T) -> T {
    let by_order = order * order / T::of(2.0);
    T::of(30.0).max(by_order)
}

fn check_domain<T: Real>(nu: T, x: T, who: &str) -> Result<(), MathError> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(MathError::Domain(format!(
            "{who} requires x > 0, got x = {x}"
        )));
    }
    if !(nu >= T::zero()) || !nu.is_finite() {
        return Err(MathError::Domain(format!(
            "{who} requires nu >= 0, got nu = {nu}"
        )));
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// I_nu
// ---------------------------------------------------------------------------

/// Ascending series `I_o(x) = sum_s (x/2)^{o+2s} / (s! Gamma(o+s+1))`.
///
/// Valid for any real order that is not a negative integer (the caller maps
/// those to `|o|` first).  All terms share one sign for `o > -1`, and for
/// negative non-integer orders the leading term dominates, so plain
/// accumulation under a scaled prefactor is accurate.
fn iv_series<T: Real>(order: T, x: T) -> Result<ScaledValue<T>, MathError> {
    debug_assert!(
        order >= T::zero() || order.fract() != T::zero(),
        "negative integer orders must be reflected by the caller"
    );
    let (ln_g, sign) = ln_gamma_signed(order + T::one());
    debug_assert!(sign != T::zero());
    let prefix_ln = order * (x / T::of(2.0)).ln() - ln_g;
    let q = x * x / T::of(4.0);
    let tol = series_tol::<T>();
    let mut term = T::one();
    let mut sum = T::one();
    // the sum itself can pass through zero for negative orders, so the
    // termination scale is the largest term seen, not the partial sum
    let mut max_term = T::one();
    for s in 0..SERIES_MAX_TERMS {
        let sf = T::of_usize(s);
        term = term * q / ((sf + T::one()) * (order + sf + T::one()));
        sum += term;
        max_term = max_term.max(term.abs());
        // terms may jump once near a gamma pole of the prefactor, so give
        // the recurrence a few steps before trusting smallness
        if s >= 2 && term.abs() <= tol * max_term {
            return Ok(ScaledValue::new(sum * sign, prefix_ln));
        }
    }
    Err(MathError::NoConvergence(SERIES_MAX_TERMS))
}

/// Large-argument expansion `I_nu(x) ~ e^x / sqrt(2 pi x) * S(nu, x)`.
fn iv_asymptotic<T: Real>(nu: T, x: T) -> ScaledValue<T> {
    let mu = T::of(4.0) * nu * nu;
    let eight_x = T::of(8.0) * x;
    let tol = series_tol::<T>();
    let mut term = T::one();
    let mut sum = T::one();
    for k in 0..TAIL_MAX_TERMS {
        let kf = T::of_usize(k);
        let odd = T::of(2.0) * kf + T::one();
        let next = -term * (mu - odd * odd) / (eight_x * (kf + T::one()));
        if next.abs() >= term.abs() && k > 0 {
            break; // asymptotic tail started diverging
        }
        term = next;
        sum += term;
        if term.abs() <= tol * sum.abs() {
            break;
        }
    }
    let mantissa = sum / (T::of(2.0) * T::PI() * x).sqrt();
    ScaledValue::new(mantissa, x)
}

/// `I_order(x)` for any real order, including the negative ones needed by
/// the derivative recurrence at `0 < nu < 1`.
pub(crate) fn iv_any_order<T: Real>(order: T, x: T) -> Result<ScaledValue<T>, MathError> {
    if order < T::zero() && order.fract() == T::zero() {
        // I_{-n} = I_n
        return iv_any_order(-order, x);
    }
    if x >= asymptotic_cutoff(order.abs()) {
        // beyond the cutoff I_{-u} and I_u agree to ~e^{-2x}, far below
        // working precision
        Ok(iv_asymptotic(order.abs(), x))
    } else {
        iv_series(order, x)
    }
}

/// Modified Bessel function of the first kind, `I_nu(x)`, scaled.
pub fn bessel_iv<T: Real>(nu: T, x: T) -> Result<ScaledValue<T>, MathError> {
    check_domain(nu, x, "bessel_iv")?;
    iv_any_order(nu, x)
}

// ---------------------------------------------------------------------------
// K_nu
// ---------------------------------------------------------------------------

/// Large-argument expansion `K_nu(x) ~ sqrt(pi/(2x)) e^{-x} * S'(nu, x)`.
fn kv_asymptotic<T: Real>(nu: T, x: T) -> ScaledValue<T> {
    let mu = T::of(4.0) * nu * nu;
    let eight_x = T::of(8.0) * x;
    let tol = series_tol::<T>();
    let mut term = T::one();
    let mut sum = T::one();
    for k in 0..TAIL_MAX_TERMS {
        let kf = T::of_usize(k);
        let odd = T::of(2.0) * kf + T::one();
        let next = term * (mu - odd * odd) / (eight_x * (kf + T::one()));
        if next.abs() >= term.abs() && k > 0 {
            break;
        }
        term = next;
        sum += term;
        if term.abs() <= tol * sum.abs() {
            break;
        }
    }
    let mantissa = sum * (T::PI() / (T::of(2.0) * x)).sqrt();
    ScaledValue::new(mantissa, -x)
}

/// Steed's continued fraction for `(K_u, K_{u+1})`, `|u| <= 1/2`, `x > 2`,
/// after Thompson and Barnett.  Returns mantissas relative to `e^{-x}`.
fn kv_cf2<T: Real>(u: T, x: T) -> Result<(T, T), MathError> {
    debug_assert!(u.abs() <= T::of(0.5) + T::epsilon());
    debug_assert!(x > T::one());
    let two = T::of(2.0);
    let a0 = u * u - T::of(0.25);

    let mut a = a0;
    let mut b = two * (x + T::one());
    let mut d = b.recip();
    let mut delta = d;
    let mut f = d;
    let mut prev = T::zero();
    let mut cur = T::one();
    let mut q = -a0;
    let mut c = -a0;
    let mut s = T::one() + q * delta;

    let mut converged = false;
    for k in 2..TAIL_MAX_TERMS {
        let kf = T::of_usize(k);
        a -= two * (kf - T::one());
        b += two;
        d = (a * d + b).recip();
        delta *= b * d - T::one();
        f += delta;

        let t = (prev - (b - two) * cur) / a;
        prev = cur;
        cur = t;
        c *= -a / kf;
        q += c * t;
        s += q * delta;

        if (q * delta).abs() < s.abs() * T::epsilon() * T::of(0.5) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(MathError::NoConvergence(TAIL_MAX_TERMS));
    }

    let ku = (T::PI() / (two * x)).sqrt() / s;
    let ku1 = ku * (T::of(0.5) + u + x + a0 * f) / x;
    Ok((ku, ku1))
}

/// `(K_nu, K_{nu+1})` for `x > 2` via CF2 at the fractional order plus the
/// stable upward recurrence.
fn kv_recurrence_pair<T: Real>(nu: T, x: T) -> Result<(ScaledValue<T>, ScaledValue<T>), MathError> {
    let n = nu.round();
    let u = nu - n;
    let steps = n.to_usize().unwrap_or(0);
    let (mut k0, mut k1) = kv_cf2(u, x)?;
    let mut scale = -x;
    let renorm_at = T::max_value().sqrt();
    for i in 1..=steps {
        let w = u + T::of_usize(i);
        let k2 = T::of(2.0) * w / x * k1 + k0;
        k0 = k1;
        k1 = k2;
        if k1 > renorm_at {
            let ln = k1.ln();
            let fac = ln.exp();
            k0 /= fac;
            k1 /= fac;
            scale += ln;
        }
    }
    // the loop leaves (k0, k1) = (K_nu, K_{nu+1})
    Ok((ScaledValue::new(k0, scale), ScaledValue::new(k1, scale)))
}

/// Reflection formula for non-integer order, `x <= 2`.
fn kv_reflection<T: Real>(nu: T, x: T) -> Result<ScaledValue<T>, MathError> {
    debug_assert!(nu.fract() != T::zero());
    let i_neg = iv_series(-nu, x)?;
    let i_pos = iv_series(nu, x)?;
    let s = sin_pi(nu);
    Ok((i_neg - i_pos) * (T::PI() / (T::of(2.0) * s)))
}

/// Integer-order log-series (the limit of the reflection formula), `x <= 2`:
///
/// `K_n = 1/2 (x/2)^{-n} sum_{s<n} ((n-s-1)!/s!) (-x^2/4)^s`
/// `      + (-1)^{n+1} ln(x/2) I_n(x)`
/// `      + (-1)^n 1/2 (x/2)^n sum_s (psi(s+1)+psi(n+s+1)) (x^2/4)^s / (s!(n+s)!)`.
fn kv_integer_series<T: Real>(n: u32, x: T) -> Result<ScaledValue<T>, MathError> {
    let nf = T::of_usize(n as usize);
    let half_x_ln = (x / T::of(2.0)).ln();
    let q = x * x / T::of(4.0);
    let tol = series_tol::<T>();
    let euler = T::of(0.577_215_664_901_532_86);

    // finite sum, folded under the prefactor (n-1)!/2 * (x/2)^{-n}
    let finite = if n == 0 {
        ScaledValue::zero()
    } else {
        let (ln_g, _) = ln_gamma_signed(nf);
        let prefix = ln_g - T::of(2.0).ln() - nf * half_x_ln;
        let mut term = T::one();
        let mut sum = T::one();
        for s in 0..(n as usize - 1) {
            let sf = T::of_usize(s);
            term = term * (-q) / ((sf + T::one()) * (nf - sf - T::one()));
            sum += term;
        }
        ScaledValue::new(sum, prefix)
    };

    // alternating sign (-1)^{n+1} in front of ln(x/2) I_n(x)
    let parity = if n.is_multiple_of(2) { -T::one() } else { T::one() };
    let log_part = iv_series(nf, x)? * (parity * half_x_ln);

    // digamma sum, folded under (x/2)^n / (2 * n!)
    let (ln_gn1, _) = ln_gamma_signed(nf + T::one());
    let prefix = nf * half_x_ln - T::of(2.0).ln() - ln_gn1;
    let mut harmonic_s = T::zero(); // H_s
    let mut harmonic_ns = (1..=n)
        .map(|i| (T::of_usize(i as usize)).recip())
        .sum::<T>(); // H_{n+s}
    let mut base = T::one(); // q^s n! / (s! (n+s)!)
    let mut sum = -T::of(2.0) * euler + harmonic_ns;
    let mut max_term = sum.abs();
    for s in 0..SERIES_MAX_TERMS {
        let sf = T::of_usize(s);
        base = base * q / ((sf + T::one()) * (nf + sf + T::one()));
        harmonic_s += (sf + T::one()).recip();
        harmonic_ns += (nf + sf + T::one()).recip();
        let term = base * (-T::of(2.0) * euler + harmonic_s + harmonic_ns);
        sum += term;
        max_term = max_term.max(term.abs());
        if s >= 2 && term.abs() <= tol * max_term {
            let psi_part = ScaledValue::new(-parity * sum, prefix);
            return Ok(finite + log_part + psi_part);
        }
    }
    Err(MathError::NoConvergence(SERIES_MAX_TERMS))
}

fn kv_any<T: Real>(nu: T, x: T) -> Result<ScaledValue<T>, MathError> {
    if x >= asymptotic_cutoff(nu) {
        Ok(kv_asymptotic(nu, x))
    } else if x > T::of(2.0) {
        Ok(kv_recurrence_pair(nu, x)?.0)
    } else if nu.fract() == T::zero() {
        kv_integer_series(nu.to_u32().expect("small integer order"), x)
    } else {
        kv_reflection(nu, x)
    }
}

/// Modified Bessel function of the second kind, `K_nu(x)`, scaled.
///
/// `K` is positive and strictly decreasing in `x`; both properties are
/// exercised on grids in the tests.
pub fn bessel_kv<T: Real>(nu: T, x: T) -> Result<ScaledValue<T>, MathError> {
    check_domain(nu, x, "bessel_kv")?;
    kv_any(nu, x)
}

/// `(K_nu(x), K_{nu+1}(x))`, each computed on its canonical branch.
pub fn bessel_kv_pair<T: Real>(nu: T, x: T) -> Result<(ScaledValue<T>, ScaledValue<T>), MathError> {
    check_domain(nu, x, "bessel_kv_pair")?;
    Ok((kv_any(nu, x)?, kv_any(nu + T::one(), x)?))
}

// ---------------------------------------------------------------------------
// Quartet
// ---------------------------------------------------------------------------

/// `I_nu`, `K_nu` and their derivatives at one `(nu, x)`, derivatives built
/// exclusively from the order recurrences.
#[derive(Clone, Copy, Debug)]
pub struct BesselQuartet<T> {
    pub nu: T,
    pub x: T,
    pub i: ScaledValue<T>,
    pub k: ScaledValue<T>,
    pub i_prime: ScaledValue<T>,
    pub k_prime: ScaledValue<T>,
}

impl<T: Real> BesselQuartet<T> {
    /// `| (I K' - I' K) + 1/x | * x`, the Wronskian residual relative to the
    /// exact value `-1/x`.
    pub fn wronskian_residual(&self) -> T {
        let w = self.i * self.k_prime - self.i_prime * self.k;
        let exact = ScaledValue::from_value(-self.x.recip());
        (w - exact)
            .ratio(&exact)
            .map(|r| r.abs())
            .unwrap_or_else(|_| T::infinity())
    }
}

/// Evaluates the quartet `(I_nu, K_nu, I_nu', K_nu')` at `(nu, x)`.
pub fn bessel_quartet<T: Real>(nu: T, x: T) -> Result<BesselQuartet<T>, MathError> {
    check_domain(nu, x, "bessel_quartet")?;
    let i = iv_any_order(nu, x)?;
    let i_prime = if nu == T::zero() {
        // I_0' = I_1
        iv_any_order(T::one(), x)?
    } else {
        // I_nu' = I_{nu-1} - (nu/x) I_nu
        iv_any_order(nu - T::one(), x)? - i * (nu / x)
    };
    let (k, k_next) = bessel_kv_pair(nu, x)?;
    // K_nu' = (nu/x) K_nu - K_{nu+1}  (K_0' = -K_1 when nu = 0)
    let k_prime = k * (nu / x) - k_next;
    Ok(BesselQuartet {
        nu,
        x,
        i,
        k,
        i_prime,
        k_prime,
    })
}
