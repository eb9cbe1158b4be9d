//! Published closed-form expressions for `U(τ)` and `C(τ)` of the averaged
//! states, evaluated term by term for side-by-side comparison with the
//! numerically computed measures.
//!
//! These are *not* used by any sweep. They disagree with the Wootters
//! concurrence for `0 < p < 1` (e.g. they go negative at `p = 0.5, β = 0`)
//! and their tightness cannot be reproduced from the entropic definition with
//! the default observable pair. Logarithms are natural, as printed. Values
//! may be NaN where a logarithm or square root argument turns negative.

/// Common-noise tightness with decay `e^{-n²β/2}`.
pub fn cqn_tightness(p: f64, beta: f64, n: f64) -> f64 {
    let e = (-0.5 * n * n * beta).exp();
    let big = (0.5 * n * n * beta).exp();
    let ln16 = 16f64.ln();
    let t1 = -4.0 * e.atanh() - 2.0 * (1.0 - 2.0 * e + p).ln() + 2.0 * (1.0 + 2.0 * e + p).ln();
    let t2 = -ln16 - 2.0 * (0.25 - 0.25 * e).ln() - 2.0 * (1.0 + e).ln() - 2.0 * (1.0 + p) * (1.0 + p).ln();
    let t3 = (1.0 + p) * (1.0 - 2.0 * e + p).ln() + (1.0 + p) * (1.0 + 2.0 * e + p).ln();
    e * (t1 + big * (t2 + t3)) / ln16
}

/// Common-noise concurrence with decay `e^{-n²β/2}`.
pub fn cqn_concurrence(p: f64, beta: f64, n: f64) -> f64 {
    let e = (-0.5 * n * n * beta).exp();
    let big = (0.5 * n * n * beta).exp();
    let t4 = (e * (-2.0 + big + big * p)).sqrt();
    let t5 = (e * (2.0 + big + big * p)).sqrt();
    -(1.0 - p).sqrt() - 0.5 * t4 + 0.5 * t5
}

/// Independent-noise tightness with decay `e^{-4β}`.
pub fn iqn_tightness(p: f64, beta: f64) -> f64 {
    let f = (-4.0 * beta).exp();
    let big = (4.0 * beta).exp();
    let ln16 = 16f64.ln();
    let fp = f * p;
    let u1 = 2.0 * fp.atanh() + (1.0 + p - 2.0 * fp).ln() - (1.0 + p + 2.0 * fp).ln();
    let u2 = -2.0 * (1.0 + p) * (1.0 + p).ln() + (1.0 + p) * (1.0 + p - 2.0 * fp).ln();
    let u3 = (1.0 - fp).ln() + (1.0 + fp).ln();
    let u4 = (1.0 + p) * (1.0 + p + 2.0 * fp).ln();
    f * (-2.0 * p * u1 + big * (u2 - 2.0 * u3 + u4)) / ln16
}

/// Independent-noise concurrence with decay `e^{-4β}`.
pub fn iqn_concurrence(p: f64, beta: f64) -> f64 {
    let f = (-4.0 * beta).exp();
    let big = (4.0 * beta).exp();
    -(1.0 - p).sqrt() - 0.5 * (1.0 + p - 2.0 * f * p).sqrt() + 0.5 * (f * (big + 2.0 * p + big * p)).sqrt()
}
