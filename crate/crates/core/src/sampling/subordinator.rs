//! Random variance factor of a ggBm.
//!
//! `Y_β` has density `M_β`. For `β < 1` it is `S^{−β}` with `S` one-sided
//! β-stable (`E e^{−sS} = e^{−s^β}`), and `S` comes from Kanter's
//! representation `S = (a(U)/E)^{(1−β)/β}`. For `β = 1`, `Y = 1`.

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::{Exp1, Open01};

use crate::error::{Error, Result};
use crate::rng::RngSpec;
use crate::special::kanter_weight;

fn check_stable_beta(beta: f64) -> Result<()> {
    if beta > 0.0 && beta < 1.0 {
        Ok(())
    } else {
        Err(Error::param("beta", beta, "must lie in (0, 1)"))
    }
}

fn kanter_pair<R: Rng + ?Sized>(beta: f64, rng: &mut R) -> (f64, f64) {
    let u: f64 = rng.sample(Open01);
    let e: f64 = rng.sample(Exp1);
    (kanter_weight(beta, u), e)
}

/// One-sided β-stable draw from `rng`, `0 < β < 1`.
pub fn draw_one_sided_stable<R: Rng + ?Sized>(beta: f64, rng: &mut R) -> Result<f64> {
    check_stable_beta(beta)?;
    let (a, e) = kanter_pair(beta, rng);
    Ok((a / e).powf((1.0 - beta) / beta))
}

pub fn sample_one_sided_stable(beta: f64, rng: RngSpec) -> Result<f64> {
    draw_one_sided_stable(beta, &mut rng.rng())
}

/// M-Wright draw `Y_β` from `rng`, `0 < β ≤ 1`.
///
/// Computed as `(E/a(U))^{1−β}`, which is `S^{−β}` for the Kanter draw `S`
/// without forming `S` (it overflows for small β).
pub fn draw_mwright<R: Rng + ?Sized>(beta: f64, rng: &mut R) -> Result<f64> {
    if beta == 1.0 {
        return Ok(1.0);
    }
    check_stable_beta(beta)?;
    let (a, e) = kanter_pair(beta, rng);
    Ok((e / a).powf(1.0 - beta))
}

pub fn sample_mwright(beta: f64, rng: RngSpec) -> Result<f64> {
    draw_mwright(beta, &mut rng.rng())
}
