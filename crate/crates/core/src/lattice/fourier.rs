use std::f64::consts::PI;

use num::complex::Complex64;

use super::{check_dim, LatticeError, LatticeSignal, Stencil};

/// `(2π)^{-d} Σ_x e^{ip·x} w(x)`, summed in lexicographic point order.
pub fn dft_eval(w: &LatticeSignal, p: &[f64]) -> Result<Complex64, LatticeError> {
    check_dim(w.dim(), p.len())?;
    let sum: Complex64 = w
        .iter()
        .map(|(x, v)| v.to_c64() * Complex64::from_polar(1.0, x.dot(p)))
        .sum();
    Ok(sum * (2.0 * PI).powi(-(w.dim() as i32)))
}

/// The symbol `σ̂(p) = Σ_{y∈T} a_y e^{−ip·y}`.
pub fn sigma_hat(s: &Stencil, p: &[f64]) -> Result<Complex64, LatticeError> {
    check_dim(s.dim(), p.len())?;
    Ok(s.taps()
        .iter()
        .map(|(y, a)| a.to_c64() * Complex64::from_polar(1.0, -y.dot(p)))
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{apply_adjoint, apply_stencil, LatticePoint};
    use crate::scalar::Scalar;

    #[test]
    fn impulse_transform() {
        let d0 = LatticeSignal::delta(LatticePoint::origin(2), Scalar::one());
        let v = dft_eval(&d0, &[0.3, -1.7]).unwrap();
        assert!((v - Complex64::new((2.0 * PI).powi(-2), 0.0)).norm() < 1e-15);

        let y = LatticePoint::from(3);
        let dy = LatticeSignal::delta(y, Scalar::one());
        let p = 0.7;
        let expect = Complex64::from_polar(1.0, 3.0 * p) / (2.0 * PI);
        assert!((dft_eval(&dy, &[p]).unwrap() - expect).norm() < 1e-15);
    }

    #[test]
    fn constant_and_null_symbols() {
        let c = Scalar::from_int(2, -5);
        let st = Stencil::new(1, [(LatticePoint::from(0), c.clone())]).unwrap();
        assert_eq!(sigma_hat(&st, &[1.234]).unwrap(), c.to_c64());
        let two = Stencil::new(1, [(0.into(), Scalar::one()), (1.into(), Scalar::one())]).unwrap();
        assert!(sigma_hat(&two, &[PI]).unwrap().norm() < 1e-15);
    }

    #[test]
    fn parseval_riemann_sum() {
        // Riemann sum of |ŵ|^2 over the torus on a 4096-point grid.
        let w = LatticeSignal::from_values_1d(
            -2,
            &[Scalar::from_int(1, 1), Scalar::from_int(3, 0), Scalar::from_int(0, -2), Scalar::from_int(5, 4)],
        );
        let n = 4096;
        let mut integral = 0.0;
        for k in 0..n {
            let p = -PI + 2.0 * PI * k as f64 / n as f64;
            integral += dft_eval(&w, &[p]).unwrap().norm_sqr();
        }
        integral *= 2.0 * PI / n as f64;
        let lhs = 2.0 * PI * integral;
        let rhs = w.norm_sqr().to_c64().re;
        assert!((lhs - rhs).abs() / rhs <= 1e-6, "{lhs} vs {rhs}");
    }

    #[test]
    fn symbol_identity_on_fixed_instance() {
        let st = Stencil::new(
            1,
            [(0.into(), Scalar::from_int(1, 2)), (2.into(), Scalar::from_int(-3, 0)), ((-1).into(), Scalar::i())],
        )
        .unwrap();
        let psi = LatticeSignal::from_values_1d(0, &[Scalar::from_int(1, 0), Scalar::from_int(0, 3)]);
        let f = apply_stencil(&st, &psi).unwrap();
        let g = apply_adjoint(&st, &psi).unwrap();
        for k in 0..32 {
            let p = [-3.0 + 0.2 * k as f64];
            let sig = sigma_hat(&st, &p).unwrap();
            let ps = dft_eval(&psi, &p).unwrap();
            let lhs = dft_eval(&f, &p).unwrap();
            assert!((lhs - sig * ps).norm() <= 1e-12 * lhs.norm().max(1e-300));
            let lhs = dft_eval(&g, &p).unwrap();
            assert!((lhs - sig.conj() * ps).norm() <= 1e-12 * lhs.norm().max(1e-300));
        }
    }
}
