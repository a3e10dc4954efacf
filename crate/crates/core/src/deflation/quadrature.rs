use std::f64::consts::PI;

/// Gauss-Legendre nodes (ascending) and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// `(P_q(x), P_q'(x))` by the three-term recurrence.
fn legendre(q: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=q {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let p = if q == 0 { 1.0 } else { p1 };
    let dp = if q == 0 { 0.0 } else { q as f64 * (x * p1 - p0) / (x * x - 1.0) };
    (p, dp)
}

/// q-point Gauss-Legendre rule by Newton iteration on `P_q`.
///
/// Nodes are computed in the right half and mirrored, so the rule is exactly
/// symmetric and an odd `q` has an exact zero node.
pub fn legendre_gauss(q: usize) -> QuadratureRule {
    assert!(q >= 1, "quadrature order must be at least 1");
    let mut nodes = vec![0.0; q];
    let mut weights = vec![0.0; q];
    let qf = q as f64;
    for i in 0..q / 2 {
        let mut x = (PI * (i as f64 + 0.75) / (qf + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(q, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(q, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[q - 1 - i] = x;
        nodes[i] = -x;
        weights[q - 1 - i] = w;
        weights[i] = w;
    }
    if q % 2 == 1 {
        let (_, dp) = legendre(q, 0.0);
        nodes[q / 2] = 0.0;
        weights[q / 2] = 2.0 / (dp * dp);
    }
    QuadratureRule { nodes, weights }
}
