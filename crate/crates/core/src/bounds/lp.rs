use super::simplex::{simplex_solve, LinearProgram};
use super::BoundsError;

pub const LP_VARS: [&str; 7] = [
    "a111000", "a110100", "a110010", "a201000", "a200010", "a101010", "a200100",
];

/// The per-n² linear program whose minimum bounds `a200100` from below.
pub fn cyclic_lp(delta_hat: f64, eps_hat: f64) -> Result<LinearProgram, BoundsError> {
    if delta_hat.is_nan() || delta_hat <= 0.0 || eps_hat.is_nan() || eps_hat < 0.0 || (6.0 * delta_hat + eps_hat - 1.0).abs() > 1e-9 {
        return Err(BoundsError::BadParameters(format!(
            "need delta_hat > 0, eps_hat >= 0 and 6*delta_hat + eps_hat = 1, got ({delta_hat}, {eps_hat})"
        )));
    }
    let d2 = delta_hat * delta_hat;
    let de = delta_hat * eps_hat;
    let mut lp = LinearProgram::new(LP_VARS);
    lp.objective = vec![0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0];
    //              111000 110100 110010 201000 200010 101010 200100
    lp.between(vec![2.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0], d2 - de, d2);
    lp.between(vec![1.0, 1.0, 1.0, 2.0, 2.0, 1.0, 0.0], d2 - 5.0 * de, d2 + 4.0 * de);
    lp.between(vec![0.0, 2.0, 2.0, 0.0, 0.0, 0.0, 4.0], d2 - 7.0 * de, d2 + 6.0 * de);
    lp.between(
        vec![0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 1.0],
        d2 / 2.0 - eps_hat * eps_hat / 2.0,
        d2 / 2.0,
    );
    Ok(lp)
}

pub fn cyclic_lp_bound(delta_hat: f64, eps_hat: f64) -> Result<f64, BoundsError> {
    Ok(simplex_solve(&cyclic_lp(delta_hat, eps_hat)?)?.value)
}

/// Leading-order slack of the final counting inequality; positive means the
/// assumed `ell = alpha n` is impossible.
pub fn contradiction_margin(alpha: f64, t_hat: f64) -> f64 {
    let lhs = 1.0 / 6.0 - alpha / 2.0 + alpha * alpha / 2.0 + t_hat;
    let rhs = (1.0 - 2.0 * alpha).powi(2) / 2.0;
    lhs - rhs
}
