//! Closed-form and transcendental-equation reference values used to validate
//! the FEM pipeline: the half-line and sector model quotients, separable
//! interval eigenvalues, the radial disk eigenvalue via modified Bessel
//! functions, and a certified trial-function upper bound on a single block.

use crate::error::{invalid, Error, Result};
use crate::geometry::{MollifiedProfile, SectorBlockParams};
use crate::quad::{adaptive_simpson, gl_composite};

/// A positive root of a transcendental equation, with λ = -k².
#[derive(Debug, Clone, Copy)]
pub struct TranscendentalRoot {
    pub k: f64,
    pub lambda: f64,
    pub bracket: (f64, f64),
    pub tolerance: f64,
}

/// Bisection for an increasing-through-zero function on [lo, hi], down to
/// |g(k)| ≤ 1e-12.
fn bisect_root(g: &dyn Fn(f64) -> f64, lo: f64, hi: f64) -> Result<TranscendentalRoot> {
    let (glo, ghi) = (g(lo), g(hi));
    if !(glo < 0.0 && ghi > 0.0) {
        return Err(Error::NoRoot(format!(
            "no sign change on [{lo}, {hi}]: g = ({glo}, {ghi})"
        )));
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        let gm = g(mid);
        if gm.abs() <= 1e-13 || (b - a) <= f64::EPSILON * mid.abs() {
            return Ok(TranscendentalRoot {
                k: mid,
                lambda: -mid * mid,
                bracket: (lo, hi),
                tolerance: gm.abs(),
            });
        }
        if gm < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    let k = 0.5 * (a + b);
    Ok(TranscendentalRoot {
        k,
        lambda: -k * k,
        bracket: (lo, hi),
        tolerance: g(k).abs(),
    })
}

fn check_negative_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 {
        return Err(Error::NoRoot(format!(
            "alpha = {alpha} > 0 has no negative eigenvalue"
        )));
    }
    Ok(())
}

/// Rayleigh quotient of the half-line minimizer exp(αt) truncated to [0, T],
/// by composite Gauss–Legendre quadrature on `n` points. Converges to -α²
/// from below as T grows (the truncated quotient is the Robin–Neumann
/// interval value, slightly lower than -α²).
pub fn halfline_quotient(alpha: f64, t_max: f64, n: usize) -> Result<f64> {
    if !(alpha < 0.0) || !(t_max > 0.0) {
        return Err(invalid("halfline_quotient needs alpha < 0 and T > 0"));
    }
    let panels = n.div_ceil(crate::quad::GL_ORDER).max(4);
    let grad = gl_composite(
        &mut |t: f64| (alpha * (alpha * t).exp()).powi(2),
        0.0,
        t_max,
        panels,
    );
    let den = gl_composite(&mut |t: f64| (2.0 * alpha * t).exp(), 0.0, t_max, panels);
    // Boundary term: α·f(0)², f(0) = 1.
    Ok((grad + alpha) / den)
}

/// Negative eigenvalue of -d²/dt² on [0, ell] with Robin (parameter α) at 0
/// and Neumann at ell: k·tanh(k·ell) = |α|, λ = -k².
pub fn interval_robin_neumann(ell: f64, alpha: f64) -> Result<f64> {
    Ok(interval_robin_neumann_root(ell, alpha)?.map_or(0.0, |r| r.lambda))
}

/// Root form of `interval_robin_neumann`; `None` for alpha = 0.
pub fn interval_robin_neumann_root(ell: f64, alpha: f64) -> Result<Option<TranscendentalRoot>> {
    if !(ell > 0.0) {
        return Err(invalid("interval length must be > 0"));
    }
    check_negative_alpha(alpha)?;
    if alpha == 0.0 {
        return Ok(None);
    }
    let am = -alpha;
    let g = move |k: f64| k * (k * ell).tanh() - am;
    Ok(Some(bisect_root(&g, 1e-12, am + 10.0 + 10.0 / ell)?))
}

/// Negative eigenvalue with Robin (parameter α) at both ends: the symmetric
/// ground state solves k·tanh(k·ell/2) = |α|.
pub fn interval_robin_robin(ell: f64, alpha: f64) -> Result<f64> {
    if !(ell > 0.0) {
        return Err(invalid("interval length must be > 0"));
    }
    check_negative_alpha(alpha)?;
    if alpha == 0.0 {
        return Ok(0.0);
    }
    let am = -alpha;
    let g = move |k: f64| k * (0.5 * k * ell).tanh() - am;
    Ok(bisect_root(&g, 1e-12, am + 10.0 + 10.0 / ell)?.lambda)
}

/// Negative eigenvalue of the disk of radius R with Robin parameter α: the
/// radial ground state I₀(kr) satisfies k·I₁(kR) + α·I₀(kR) = 0.
pub fn disk_robin(radius: f64, alpha: f64) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(invalid("disk radius must be > 0"));
    }
    check_negative_alpha(alpha)?;
    if alpha == 0.0 {
        return Ok(0.0);
    }
    let am = -alpha;
    let g = move |k: f64| k * bessel_i1_over_i0(k * radius) - am;
    Ok(bisect_root(&g, 1e-12, am + 10.0 + 10.0 / radius)?.lambda)
}

/// Rayleigh quotient of the sector minimizer exp(αy/sin θ) on the infinite
/// sector of half-opening θ (Robin on both edges), truncated at height T.
/// Converges to -α²/sin²θ.
pub fn sector_quotient(theta: f64, alpha: f64, t_max: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < std::f64::consts::FRAC_PI_2) {
        return Err(invalid("sector angle must lie in (0, pi/2)"));
    }
    if !(alpha < 0.0) || !(t_max > 0.0) {
        return Err(invalid("sector_quotient needs alpha < 0 and T > 0"));
    }
    let s = theta.sin();
    let decay = -2.0 * alpha / s;
    let panels = ((t_max * decay).ceil() as usize).clamp(64, 4000);
    // Width at height y is 2y·tanθ; the two edges have dσ = dy/cosθ.
    let a = gl_composite(
        &mut |y: f64| y * (-decay * y).exp(),
        0.0,
        t_max,
        panels,
    ) * 2.0
        * theta.tan();
    let bd = gl_composite(&mut |y: f64| (-decay * y).exp(), 0.0, t_max, panels) * 2.0
        / theta.cos();
    Ok((alpha / s).powi(2) + alpha * bd / a)
}

/// Quintic smoothstep cutoff: 0 for s ≤ -3/4, 1 for s ≥ -1/2.
fn chi(s: f64) -> f64 {
    if s <= -0.75 {
        0.0
    } else if s >= -0.5 {
        1.0
    } else {
        let u = (s + 0.75) / 0.25;
        u * u * u * (10.0 + u * (-15.0 + 6.0 * u))
    }
}

fn chi_prime(s: f64) -> f64 {
    if s <= -0.75 || s >= -0.5 {
        0.0
    } else {
        let u = (s + 0.75) / 0.25;
        30.0 * u * u * (1.0 - u) * (1.0 - u) / 0.25
    }
}

/// Rayleigh quotient of the Lemma-4-style trial function
/// v(x, y) = exp(-α(y-L)/sin θ)·χ((y-L)/L) over the unit-scale block: a
/// certified upper bound on E(Q̃) (Dirichlet-sides operator), hence on E(Q),
/// by the min-max principle. Always ≥ -α²/sin²θ.
pub fn lemma4_trial_quotient(params: SectorBlockParams, alpha: f64) -> Result<f64> {
    if !(alpha < 0.0) {
        return Err(invalid("trial quotient needs alpha < 0"));
    }
    let profile = MollifiedProfile::new(params)?;
    let s = params.theta.sin();
    let l = params.l;
    let k = -alpha / s;
    let v = move |y: f64| ((y - l) * k).exp() * chi((y - l) / l);
    let vp = move |y: f64| ((y - l) * k).exp() * (k * chi((y - l) / l) + chi_prime((y - l) / l) / l);
    let y_floor = 0.25 * l;

    let half = profile.half_width();
    let inner = |f: &dyn Fn(f64) -> f64, top: f64| -> Result<f64> {
        if top <= y_floor {
            return Ok(0.0);
        }
        adaptive_simpson(&mut |y| f(y), y_floor, top, 1e-12)
    };
    let grad = 2.0
        * adaptive_simpson(
            &mut |x| inner(&|y| vp(y) * vp(y), profile.height(x)).unwrap_or(0.0),
            0.0,
            half,
            1e-9,
        )?;
    let den = 2.0
        * adaptive_simpson(
            &mut |x| inner(&|y| v(y) * v(y), profile.height(x)).unwrap_or(0.0),
            0.0,
            half,
            1e-9,
        )?;
    let boundary = 2.0
        * adaptive_simpson(
            &mut |x| {
                let h = profile.height(x);
                let hp = profile.slope(x);
                v(h) * v(h) * (1.0 + hp * hp).sqrt()
            },
            0.0,
            half,
            1e-9,
        )?;
    Ok((grad + alpha * boundary) / den)
}

// ---------------------------------------------------------------------------
// Modified Bessel functions I0, I1 (relative accuracy ≤ 1e-12).
//
// Power series for |x| ≤ 16; above that the optimally truncated asymptotic
// expansion, whose irreducible relative error e^{-2x} is below 2e-14. (The
// crossover must sit above ~15: at x = 12 the asymptotic floor is only
// ~4e-11.)
// ---------------------------------------------------------------------------

const BESSEL_SWITCH: f64 = 16.0;

fn bessel_series(x: f64) -> (f64, f64) {
    let q = 0.25 * x * x;
    let (mut s0, mut s1) = (1.0, 1.0);
    let (mut t0, mut t1) = (1.0, 1.0);
    for m in 1..200 {
        let mf = m as f64;
        t0 *= q / (mf * mf);
        t1 *= q / (mf * (mf + 1.0));
        s0 += t0;
        s1 += t1;
        if t0 < 1e-17 * s0 && t1 < 1e-17 * s1 {
            break;
        }
    }
    (s0, 0.5 * x * s1)
}

/// (e^{-x}·I0, e^{-x}·I1) from the asymptotic expansion, x > BESSEL_SWITCH.
fn bessel_asymptotic_scaled(x: f64) -> (f64, f64) {
    let sum = |mu: f64| -> f64 {
        let mut total = 1.0;
        let mut term = 1.0_f64;
        let mut prev = f64::INFINITY;
        for kk in 1..60 {
            let kf = kk as f64;
            term *= (mu - (2.0 * kf - 1.0).powi(2)) / (kf * 8.0 * x);
            // (-1)^k is folded in: each factor carries the sign flip.
            term = -term;
            if term.abs() >= prev {
                break;
            }
            total += term;
            prev = term.abs();
            if term.abs() < 1e-17 {
                break;
            }
        }
        total
    };
    let front = 1.0 / (2.0 * std::f64::consts::PI * x).sqrt();
    (front * sum(0.0), front * sum(4.0))
}

/// Modified Bessel function I0.
pub fn bessel_i0(x: f64) -> f64 {
    let x = x.abs();
    if x <= BESSEL_SWITCH {
        bessel_series(x).0
    } else {
        bessel_asymptotic_scaled(x).0 * x.exp()
    }
}

/// Modified Bessel function I1 (for x ≥ 0).
pub fn bessel_i1(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x <= BESSEL_SWITCH {
        bessel_series(x).1
    } else {
        bessel_asymptotic_scaled(x).1 * x.exp()
    }
}

/// I1(x)/I0(x), overflow-free for large x.
pub fn bessel_i1_over_i0(x: f64) -> f64 {
    if x <= BESSEL_SWITCH {
        let (i0, i1) = bessel_series(x);
        i1 / i0
    } else {
        let (i0, i1) = bessel_asymptotic_scaled(x);
        i1 / i0
    }
}
