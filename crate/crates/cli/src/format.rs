//! Number and string formatting shared by the text reports.

use qtm_core::{Complex, GammaString, MachineSpec};

/// Fixed-point with at most 12 decimals, trailing zeros trimmed; magnitudes below `1e-6`
/// switch to scientific notation so that rounding residue stays visible.
pub fn real(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    if x.abs() < 1e-6 {
        return format!("{x:.3e}");
    }
    let fixed = format!("{x:.12}");
    let trimmed = fixed.trim_end_matches('0').trim_end_matches('.');
    if trimmed == "-0" {
        "0".to_string()
    } else {
        trimmed.to_string()
    }
}

pub fn complex(z: Complex<f64>) -> String {
    if z.im == 0.0 {
        real(z.re)
    } else if z.re == 0.0 {
        format!("{}i", real(z.im))
    } else if z.im < 0.0 {
        format!("{}-{}i", real(z.re), real(-z.im))
    } else {
        format!("{}+{}i", real(z.re), real(z.im))
    }
}

/// A data-slot string in double quotes.
pub fn quoted(spec: &MachineSpec, x: &GammaString) -> String {
    format!("\"{}\"", x.display(spec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reals() {
        assert_eq!(real(0.0), "0");
        assert_eq!(real(-0.0), "0");
        assert_eq!(real(1.0), "1");
        assert_eq!(real(0.5), "0.5");
        assert_eq!(real(std::f64::consts::FRAC_1_SQRT_2), "0.707106781187");
        assert_eq!(real(1e-9), "1.000e-9");
        assert_eq!(real(2.2e-16), "2.200e-16");
        assert_eq!(real(-0.25), "-0.25");
        assert_eq!(real(0.9999999999999998), "1");
    }

    #[test]
    fn complexes() {
        assert_eq!(complex(Complex::new(0.5, 0.0)), "0.5");
        assert_eq!(complex(Complex::new(0.0, -1.0)), "-1i");
        assert_eq!(complex(Complex::new(0.5, -0.5)), "0.5-0.5i");
        assert_eq!(complex(Complex::new(0.5, 0.25)), "0.5+0.25i");
    }
}
