use crate::grid::{integral_abs_pow, l2_norm, h1_norm, Field, Params};

/// Time-continuity constant `C` with `||u(t) - u(t')|| <= C |t - t'|^{1/2}`,
/// built from sup-in-time bounds over the sampled `fields`:
///
/// `C^2 = 2 ( 1/2 sup||u||_{H^1}^2 + sup||V u||^2 + |lambda| sup||u||_{2s1+2}^{2s1+2}
///        + a sup||u||_{2s2+2}^{2s2+2} + b sup||u||_{2-alpha}^{2-alpha} )`.
///
/// `||Lap u||_{H^{-1}}` is bounded by `||u||_{H^1}`.
pub fn holder_constant<'a>(fields: impl IntoIterator<Item = &'a Field>, params: &Params) -> f64 {
    let mut sup = [0.0_f64; 5];
    for u in fields {
        let h1 = h1_norm(u);
        let vu: f64 = u
            .values()
            .iter()
            .zip(u.domain().potential())
            .map(|(z, v)| v * v * z.norm_sqr())
            .sum::<f64>()
            * u.domain().quad_weight();
        let terms = [
            0.5 * h1 * h1,
            vu,
            params.lambda.abs() * integral_abs_pow(u, 2.0 * params.sigma1 + 2.0),
            params.a * integral_abs_pow(u, 2.0 * params.sigma2 + 2.0),
            params.b * integral_abs_pow(u, 2.0 - params.alpha),
        ];
        for (s, t) in sup.iter_mut().zip(terms) {
            *s = s.max(t);
        }
    }
    (2.0 * sup.iter().sum::<f64>()).sqrt()
}

/// `||u - v|| / |t - s|^{1/2}`.
pub fn holder_ratio(u: &Field, t: f64, v: &Field, s: f64) -> f64 {
    let diff = u.difference(v).expect("fields on one grid");
    l2_norm(&diff) / (t - s).abs().sqrt()
}
