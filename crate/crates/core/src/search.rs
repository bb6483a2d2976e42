//! One-dimensional searches on smooth 1-periodic functions: extrema and
//! zeros located on a sample lattice and refined locally.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Minimizes a unimodal `f` on `[a, b]` by golden-section search.
pub fn golden_section_min<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut iters = 0;
    while (b - a).abs() > tol && iters < 200 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        iters += 1;
    }
    if fc < fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Bisection for a root of `f` in `[a, b]`, where `f(a)` and `f(b)` should differ in sign.
/// If the signs agree after all, returns the endpoint with the smaller `|f|`.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    if (fa < 0.0) == (fb < 0.0) {
        return if fa.abs() <= fb.abs() { a } else { b };
    }
    for _ in 0..200 {
        if (b - a).abs() <= tol {
            break;
        }
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Global minimum of a 1-periodic `f`: lattice scan with `samples` points,
/// then golden-section refinement around the best node.
pub fn periodic_min<F: Fn(f64) -> f64>(f: F, samples: usize, tol: f64) -> (f64, f64) {
    let h = 1.0 / samples as f64;
    let (mut best_j, mut best) = (0, f64::INFINITY);
    for j in 0..samples {
        let v = f(j as f64 * h);
        if v < best {
            best = v;
            best_j = j;
        }
    }
    let x0 = best_j as f64 * h;
    let (x, v) = golden_section_min(|x| f(x.rem_euclid(1.0)), x0 - h, x0 + h, tol);
    if v < best {
        (x.rem_euclid(1.0), v)
    } else {
        (x0, best)
    }
}

pub fn periodic_max<F: Fn(f64) -> f64>(f: F, samples: usize, tol: f64) -> (f64, f64) {
    let (x, v) = periodic_min(|x| -f(x), samples, tol);
    (x, -v)
}

/// Options for [`periodic_zeros`].
#[derive(Debug, Clone, Copy)]
pub struct ZeroSearch {
    pub samples: usize,
    /// Bisection width for sign-changing zeros.
    pub root_tol: f64,
    /// `|f|` below this at a local minimum of `|f|` counts as a (tangential) zero.
    pub zero_tol: f64,
}

impl Default for ZeroSearch {
    fn default() -> Self {
        Self { samples: 4096, root_tol: 1e-12, zero_tol: 1e-10 }
    }
}

/// All zeros of a 1-periodic `f` in `[0, 1)`, sorted.
pub fn periodic_zeros<F: Fn(f64) -> f64>(f: F, opts: ZeroSearch) -> Vec<f64> {
    let n = opts.samples;
    let vals: Vec<f64> = (0..n).map(|j| f(j as f64 / n as f64)).collect();
    periodic_zeros_sampled(f, &vals, opts)
}

/// [`periodic_zeros`] with the lattice values `f(j / len)` already at hand.
pub fn periodic_zeros_sampled<F: Fn(f64) -> f64>(f: F, vals: &[f64], opts: ZeroSearch) -> Vec<f64> {
    let n = vals.len();
    let h = 1.0 / n as f64;
    let mut roots = Vec::new();
    for j in 0..n {
        let (x0, v0, v1) = (j as f64 * h, vals[j], vals[(j + 1) % n]);
        if v0 == 0.0 {
            roots.push(x0);
        } else if v1 != 0.0 && (v0 < 0.0) != (v1 < 0.0) {
            roots.push(bisect(|x| f(x), x0, x0 + h, opts.root_tol).rem_euclid(1.0));
        }
    }
    // tangential zeros: local minima of |f| without a neighbouring sign change
    for j in 0..n {
        let prev = vals[(j + n - 1) % n];
        let (cur, next) = (vals[j], vals[(j + 1) % n]);
        let same_sign = cur != 0.0 && (prev < 0.0) == (cur < 0.0) && (next < 0.0) == (cur < 0.0);
        if same_sign && cur.abs() <= prev.abs() && cur.abs() <= next.abs() {
            let x0 = j as f64 * h;
            let (x, v) = golden_section_min(|x| f(x.rem_euclid(1.0)).abs(), x0 - h, x0 + h, opts.root_tol);
            if v < opts.zero_tol {
                roots.push(x.rem_euclid(1.0));
            }
        }
    }
    roots.sort_by(|a, b| a.total_cmp(b));
    let mut out: Vec<f64> = Vec::with_capacity(roots.len());
    for r in roots {
        let dup = out.iter().any(|&s| {
            let d = (r - s).abs();
            d.min(1.0 - d) < 1e-9
        });
        if !dup {
            out.push(r);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    #[test]
    fn finds_sine_zeros() {
        let z = periodic_zeros(|x| (TAU * x).sin(), ZeroSearch::default());
        assert_eq!(z.len(), 2);
        assert_eq!(z[0], 0.0);
        assert!((z[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn finds_tangential_zero() {
        let z = periodic_zeros(|x| 1.0 + (TAU * x).sin(), ZeroSearch::default());
        assert_eq!(z.len(), 1);
        assert!((z[0] - 0.75).abs() < 1e-6);
        assert!(periodic_zeros(|x| 1.5 + (TAU * x).sin(), ZeroSearch::default()).is_empty());
    }

    #[test]
    fn zeros_off_lattice() {
        let z = periodic_zeros(|x| 0.5 + (TAU * x).sin(), ZeroSearch::default());
        assert_eq!(z.len(), 2);
        assert!((z[0] - 7.0 / 12.0).abs() < 1e-11);
        assert!((z[1] - 11.0 / 12.0).abs() < 1e-11);
    }

    #[test]
    fn periodic_extrema() {
        let (x, v) = periodic_min(|x| (TAU * (x - 0.123)).cos(), 256, 1e-12);
        assert!((x - 0.623).abs() < 1e-6);
        assert!((v + 1.0).abs() < 1e-12);
        let (x, v) = periodic_max(|x| (TAU * (x - 0.9999)).cos(), 256, 1e-12);
        assert!((x - 0.9999).abs() < 1e-6 || x < 1e-6);
        assert!((v - 1.0).abs() < 1e-12);
    }
}
