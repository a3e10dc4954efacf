//! Dense vector kernels on complex slices.

use crate::C64;

/// Hermitian inner product `x^H y`.
#[inline]
pub fn dot(x: &[C64], y: &[C64]) -> C64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).fold(C64::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b)
}

#[inline]
pub fn norm2(x: &[C64]) -> f64 {
    let ss: f64 = x.iter().map(|v| v.norm_sqr()).sum();
    if ss.is_finite() && ss > 1e-280 {
        return ss.sqrt();
    }
    // rescale when squaring under- or overflows
    let m = norm_inf(x);
    if m == 0.0 || !m.is_finite() {
        return m;
    }
    m * x.iter().map(|v| (v / m).norm_sqr()).sum::<f64>().sqrt()
}

/// `y += alpha * x`
#[inline]
pub fn axpy(alpha: C64, x: &[C64], y: &mut [C64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

#[inline]
pub fn scale(alpha: C64, x: &mut [C64]) {
    for v in x {
        *v *= alpha;
    }
}

/// `a - b` as a new vector.
pub fn sub(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn conj(x: &[C64]) -> Vec<C64> {
    x.iter().map(|v| v.conj()).collect()
}

pub fn zeros(n: usize) -> Vec<C64> {
    vec![C64::new(0.0, 0.0); n]
}

pub fn ones(n: usize) -> Vec<C64> {
    vec![C64::new(1.0, 0.0); n]
}

/// Promote a real slice to complex.
pub fn from_real(x: &[f64]) -> Vec<C64> {
    x.iter().map(|&v| C64::new(v, 0.0)).collect()
}

/// Largest entry modulus.
pub fn norm_inf(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_conjugates_first_argument() {
        let x = [C64::new(0.0, 1.0)];
        let y = [C64::new(0.0, 1.0)];
        assert_eq!(dot(&x, &y), C64::new(1.0, 0.0));
    }

    #[test]
    fn norm_is_zero_only_for_zero_vector() {
        assert_eq!(norm2(&zeros(4)), 0.0);
        assert!(norm2(&[C64::new(0.0, 1e-300)]) > 0.0);
        assert!((norm2(&[C64::new(3.0, 4.0)]) - 5.0).abs() < 1e-15);
    }

    #[test]
    fn complex_product_modulus() {
        let a = C64::new(1.3, -0.7);
        let b = C64::new(-2.1, 0.4);
        let p = a * b;
        let lhs = (p * p.conj()).re;
        let rhs = a.norm_sqr() * b.norm_sqr();
        assert!((lhs - rhs).abs() <= 4.0 * f64::EPSILON * rhs);
    }
}
