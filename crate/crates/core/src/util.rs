//! Cancellation-free `ln(1+w)` and `exp(w)-1` for complex arguments.

use num_complex::Complex64;

pub(crate) fn ln1p_c(w: Complex64) -> Complex64 {
    if w.norm() < 1e-4 {
        w * (1.0 - w * (0.5 - w * (1.0 / 3.0 - 0.25 * w)))
    } else {
        (1.0 + w).ln()
    }
}

pub(crate) fn expm1_c(w: Complex64) -> Complex64 {
    if w.norm() < 1e-4 {
        w * (1.0 + w * (0.5 + w * (1.0 / 6.0 + w / 24.0)))
    } else {
        w.exp() - 1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_arguments_match_real_functions() {
        let w = Complex64::new(3e-6, 0.0);
        assert!((ln1p_c(w).re - 3e-6f64.ln_1p()).abs() < 1e-15 * 3e-6);
        assert!((expm1_c(w).re - 3e-6f64.exp_m1()).abs() < 1e-15 * 3e-6);
        let z = Complex64::new(0.3, -0.2);
        assert!((expm1_c(ln1p_c(z)) - z).norm() < 1e-15);
    }
}
