//! Complex roots of rational polynomials: balanced companion-matrix
//! eigenvalues, Newton polish, and a residual-based enclosure radius.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::upoly::QPoly;

/// A root approximation; some root of the polynomial lies within `radius`
/// of `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxRoot {
    pub z: Complex64,
    pub radius: f64,
}

fn balance(m: &mut DMatrix<f64>) {
    // Parlett-Reinsch diagonal similarity scaling, radix 2.
    const RADIX: f64 = 2.0;
    let n = m.nrows();
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let (mut c, mut r) = (0.0f64, 0.0f64);
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].abs();
                    r += m[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / RADIX;
            while c < g {
                f *= RADIX;
                c *= RADIX * RADIX;
            }
            g = r * RADIX;
            while c > g {
                f /= RADIX;
                c /= RADIX * RADIX;
            }
            if (c + r) / f < 0.95 * s {
                done = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
    }
}

/// Eigenvalues via the real Schur form. Francis iterations can stall on
/// spectra symmetric under `z -> -z`; shifting the matrix breaks the symmetry.
fn eigenvalues(m: &DMatrix<f64>) -> Option<Vec<Complex64>> {
    let n = m.nrows();
    let scale = m.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(1.0);
    for sigma in [0.0, std::f64::consts::FRAC_1_PI, -std::f64::consts::FRAC_1_SQRT_2] {
        let shifted = m + DMatrix::<f64>::identity(n, n) * (sigma * scale);
        if let Some(schur) = Schur::try_new(shifted, f64::EPSILON, 100 * n.max(10)) {
            let eig = schur.complex_eigenvalues();
            return Some(eig.iter().map(|z| z - sigma * scale).collect());
        }
    }
    None
}

/// Aberth-Ehrlich simultaneous iteration on a monic polynomial.
fn aberth(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let radius = 1.0 + coeffs[..n].iter().fold(0.0f64, |a, c| a.max(c.abs()));
    let mut z: Vec<Complex64> = (0..n)
        .map(|i| Complex64::from_polar(radius * 0.5, 0.4 + std::f64::consts::TAU * i as f64 / n as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp, _) = eval_with_bound(coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * sum);
            z[i] -= step;
            moved = moved.max(step.norm() / z[i].norm().max(1e-300));
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

fn eval_with_bound(coeffs: &[f64], z: Complex64) -> (Complex64, Complex64, f64) {
    // Horner for p and p', plus the running bound sum |a_i| |z|^i.
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    let mut mag = 0.0;
    let az = z.norm();
    for &a in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
        mag = mag * az + a.abs();
    }
    (p, dp, mag)
}

/// All complex roots, with multiplicity, of a nonzero polynomial.
pub fn polynomial_roots(poly: &QPoly) -> Vec<ApproxRoot> {
    let monic = poly.monic();
    let n = monic.degree().unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    let coeffs = monic.to_f64();
    let mut comp = DMatrix::<f64>::zeros(n, n);
    for i in 1..n {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..n {
        comp[(i, n - 1)] = -coeffs[i];
    }
    balance(&mut comp);
    let roots = match eigenvalues(&comp) {
        Some(eig) => polish(&coeffs, &eig),
        None => polish(&coeffs, &aberth(&coeffs)),
    };
    if collapsed(&roots) {
        // two starting points were polished onto the same root
        polish(&coeffs, &aberth(&coeffs))
    } else {
        roots
    }
}

fn collapsed(roots: &[ApproxRoot]) -> bool {
    roots.iter().enumerate().any(|(i, a)| {
        roots[i + 1..]
            .iter()
            .any(|b| (a.z - b.z).norm() <= 1e-9 * a.z.norm().max(1.0))
    })
}

fn polish(coeffs: &[f64], start: &[Complex64]) -> Vec<ApproxRoot> {
    let n = coeffs.len() - 1;
    let eps = f64::EPSILON;
    let gamma = 2.0 * n as f64 * eps / (1.0 - 2.0 * n as f64 * eps);
    start
        .iter()
        .map(|&z0| {
            let mut z = z0;
            for _ in 0..60 {
                let (p, dp, _) = eval_with_bound(coeffs, z);
                if dp.norm() == 0.0 {
                    break;
                }
                let step = p / dp;
                z -= step;
                if step.norm() <= 4.0 * eps * z.norm().max(1e-300) {
                    break;
                }
            }
            let (p, dp, mag) = eval_with_bound(coeffs, z);
            // Some root lies within n |p(z)| / |p'(z)|; inflate |p(z)| by the
            // evaluation and coefficient-rounding error.
            let residual = p.norm() + gamma * mag + eps * mag;
            let radius = if dp.norm() > 0.0 {
                n as f64 * residual / dp.norm()
            } else {
                f64::INFINITY
            };
            ApproxRoot { z, radius }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted(mut r: Vec<ApproxRoot>) -> Vec<ApproxRoot> {
        r.sort_by(|a, b| (a.z.re, a.z.im).partial_cmp(&(b.z.re, b.z.im)).unwrap());
        r
    }

    #[test]
    fn integer_roots() {
        // (x-1)(x-3)(x-9)
        let r = sorted(polynomial_roots(&QPoly::from_ints([-27, 39, -13, 1])));
        for (root, want) in r.iter().zip([1.0, 3.0, 9.0]) {
            assert!((root.z.re - want).abs() < 1e-12);
            assert!(root.z.im.abs() < 1e-12);
            assert!(root.radius < 1e-9);
            assert!((root.z.re - want).abs() <= root.radius);
        }
    }

    #[test]
    fn complex_pair() {
        let r = polynomial_roots(&QPoly::from_ints([3, 0, 1]));
        assert_eq!(r.len(), 2);
        for root in r {
            assert!((root.z.norm() - 3f64.sqrt()).abs() < 1e-14);
            assert!(root.z.re.abs() < 1e-14);
        }
    }

    #[test]
    fn wide_magnitude_range() {
        // (x - 1)(x - 125)(x^2 + 25)(x^2 - 3x + 125)
        let a = QPoly::from_ints([-1, 1]);
        let b = QPoly::from_ints([-125, 1]);
        let c = QPoly::from_ints([25, 0, 1]);
        let d = QPoly::from_ints([125, -3, 1]);
        let p = &(&(&a * &b) * &c) * &d;
        let roots = polynomial_roots(&p);
        assert_eq!(roots.len(), 6);
        let mut mags: Vec<f64> = roots.iter().map(|r| r.z.norm()).collect();
        mags.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let want = [1.0, 5.0, 5.0, 125f64.sqrt(), 125f64.sqrt(), 125.0];
        for (m, w) in mags.iter().zip(want) {
            assert!((m - w).abs() / w < 1e-12, "{m} vs {w}");
        }
    }

    #[test]
    fn symmetric_spectrum() {
        // x^4 + x^2 + 25 has roots +-1.5 +- 1.658i; plain Francis steps stall
        let roots = polynomial_roots(&QPoly::from_ints([25, 0, 1, 0, 1]));
        assert_eq!(roots.len(), 4);
        for r in &roots {
            assert!((r.z.re.abs() - 1.5).abs() < 1e-12);
            assert!((r.z.norm() - 5f64.sqrt()).abs() < 1e-12);
        }
    }

    #[test]
    fn aberth_fallback() {
        let mut z = aberth(&[25.0, 0.0, 1.0, 0.0, 1.0]);
        z.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        for r in z {
            assert!((r.norm() - 5f64.sqrt()).abs() < 1e-10);
        }
    }

    #[test]
    fn enclosure_contains_true_root() {
        let p = QPoly::from_ints([-2, 0, 1]); // +-sqrt(2)
        for r in polynomial_roots(&p) {
            let d = (r.z.re.abs() - 2f64.sqrt()).abs();
            assert!(d <= r.radius.max(1e-16));
        }
    }
}
