//! Real roots of quadratic and cubic polynomials.

use crate::scalar::Real;

/// Real roots of `a·z² + b·z + c`, ascending. Repeated roots appear twice.
///
/// Discriminants within `interface_tol` (relative to `b²`) of zero are
/// treated as a double root.
pub fn quadratic_real_roots<T: Real>(a: T, b: T, c: T) -> Vec<T> {
    if a == T::zero() {
        if b == T::zero() {
            return Vec::new();
        }
        return vec![-c / b];
    }
    let four = T::lit(4.0);
    let disc = b * b - four * a * c;
    let scale = (b * b).max((four * a * c).abs()).max(T::min_positive_value());
    let disc = if disc < T::zero() {
        if disc >= -T::interface_tol() * scale {
            T::zero()
        } else {
            return Vec::new();
        }
    } else {
        disc
    };
    let sign = if b < T::zero() { -T::one() } else { T::one() };
    let q = -(b + sign * disc.sqrt()) / T::lit(2.0);
    let mut roots = if q == T::zero() {
        vec![T::zero(), T::zero()]
    } else {
        vec![q / a, c / q]
    };
    sort(&mut roots);
    roots
}

/// Real roots of `a·z³ + b·z² + c·z + d`, ascending.
///
/// Closed-form Cardano / trigonometric solution, polished by Newton steps.
/// When the discriminant is too close to zero for the closed form to
/// resolve the root multiplicity, falls back to
/// [`cubic_real_roots_bracketed`].
pub fn cubic_real_roots<T: Real>(a: T, b: T, c: T, d: T) -> Vec<T> {
    let coeff_scale = a.abs().max(b.abs()).max(c.abs()).max(d.abs());
    if coeff_scale == T::zero() {
        return Vec::new();
    }
    if a.abs() <= T::epsilon() * coeff_scale {
        return quadratic_real_roots(b, c, d);
    }
    let (bb, cc, dd) = (b / a, c / a, d / a);
    let three = T::lit(3.0);
    let two = T::lit(2.0);
    let p = cc - bb * bb / three;
    let q = two * bb * bb * bb / T::lit(27.0) - bb * cc / three + dd;
    let half_q = q / two;
    let third_p = p / three;
    let disc = half_q * half_q + third_p * third_p * third_p;
    let scale = (half_q * half_q)
        .max((third_p * third_p * third_p).abs())
        .max(T::min_positive_value());
    if disc.abs() <= T::construction_tol() * scale {
        return cubic_real_roots_bracketed(a, b, c, d);
    }

    let shift = bb / three;
    let mut roots = if disc > T::zero() {
        let sign = if half_q < T::zero() { -T::one() } else { T::one() };
        let u = (-half_q - sign * disc.sqrt()).cbrt();
        let t = if u == T::zero() { T::zero() } else { u - p / (three * u) };
        vec![t - shift]
    } else {
        let r = two * (-third_p).sqrt();
        let arg = (three * q / (two * p) * (-three / p).sqrt())
            .max(-T::one())
            .min(T::one());
        let phi = arg.acos();
        let two_pi = T::TAU();
        (0..3)
            .map(|k| {
                let k = T::lit(k as f64);
                r * ((phi - two_pi * k) / three).cos() - shift
            })
            .collect()
    };
    for root in roots.iter_mut() {
        *root = newton_polish(bb, cc, dd, *root);
    }
    sort(&mut roots);
    roots
}

/// Bracketing fallback: bisection for one real root of the monic cubic
/// inside its Cauchy bound, then the remaining pair from the deflated
/// quadratic.
pub fn cubic_real_roots_bracketed<T: Real>(a: T, b: T, c: T, d: T) -> Vec<T> {
    if a == T::zero() {
        return quadratic_real_roots(b, c, d);
    }
    let (bb, cc, dd) = (b / a, c / a, d / a);
    let eval = |z: T| ((z + bb) * z + cc) * z + dd;
    let bound = T::one() + bb.abs().max(cc.abs()).max(dd.abs());
    let (mut lo, mut hi) = (-bound, bound);
    // Monic cubic: eval(lo) < 0 < eval(hi).
    for _ in 0..400 {
        let mid = (lo + hi) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        if eval(mid) < T::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = (lo + hi) / T::lit(2.0);
    let qb = bb + root;
    let qc = cc + root * qb;
    let mut roots = quadratic_real_roots(T::one(), qb, qc);
    roots.push(root);
    sort(&mut roots);
    roots
}

fn newton_polish<T: Real>(b: T, c: T, d: T, mut z: T) -> T {
    for _ in 0..3 {
        let f = ((z + b) * z + c) * z + d;
        let df = (T::lit(3.0) * z + T::lit(2.0) * b) * z + c;
        if df == T::zero() {
            break;
        }
        let step = f / df;
        let next = z - step;
        let f_next = ((next + b) * next + c) * next + d;
        if f_next.abs() > f.abs() {
            break;
        }
        z = next;
    }
    z
}

fn sort<T: Real>(v: &mut [T]) {
    v.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
}
