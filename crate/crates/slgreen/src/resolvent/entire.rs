//! Entire functions of the spectral parameter used by every resolvent
//! kernel: `C(w) = cos(sqrt(w))` and `S(w) = sin(sqrt(w))/sqrt(w)` are even
//! in `sqrt(w)`, hence entire in `w`, so no branch cut ever enters the
//! evaluators. The regularized differences `V(w) = (1 - C(w))/w` and
//! `W(w) = (1 - S(w))/w` keep the numerators cancellation-free near `w = 0`.

use num_complex::Complex64;

const SERIES_CUT: f64 = 0.25;
const DEFECT_CUT: f64 = 4.0;
const TERMS: usize = 20;

/// `cos(sqrt(w))`, entire in `w`.
pub fn cos_sqrt(w: Complex64) -> Complex64 {
    if w.norm() < SERIES_CUT {
        // sum (-1)^k w^k / (2k)!
        let mut term = Complex64::new(1.0, 0.0);
        let mut acc = term;
        for k in 1..TERMS {
            term *= -w / ((2 * k - 1) as f64 * (2 * k) as f64);
            acc += term;
        }
        acc
    } else {
        w.sqrt().cos()
    }
}

/// `sin(sqrt(w))/sqrt(w)`, entire in `w`, value 1 at 0.
pub fn sinc_sqrt(w: Complex64) -> Complex64 {
    if w.norm() < SERIES_CUT {
        // sum (-1)^k w^k / (2k+1)!
        let mut term = Complex64::new(1.0, 0.0);
        let mut acc = term;
        for k in 1..TERMS {
            term *= -w / ((2 * k) as f64 * (2 * k + 1) as f64);
            acc += term;
        }
        acc
    } else {
        let s = w.sqrt();
        s.sin() / s
    }
}

/// `V(w) = (1 - cos(sqrt(w)))/w = 2 sin^2(sqrt(w)/2)/w`, value 1/2 at 0.
pub fn versine_ratio(w: Complex64) -> Complex64 {
    if w.norm() < SERIES_CUT {
        // sum (-1)^k w^k / (2k+2)!
        let mut term = Complex64::new(0.5, 0.0);
        let mut acc = term;
        for k in 1..TERMS {
            term *= -w / ((2 * k + 1) as f64 * (2 * k + 2) as f64);
            acc += term;
        }
        acc
    } else {
        let half = w.sqrt() * 0.5;
        let s = half.sin();
        2.0 * s * s / w
    }
}

/// `W(w) = (1 - sin(sqrt(w))/sqrt(w))/w`, value 1/6 at 0.
pub fn sinc_defect(w: Complex64) -> Complex64 {
    if w.norm() < DEFECT_CUT {
        // sum (-1)^k w^k / (2k+3)!
        let mut term = Complex64::new(1.0 / 6.0, 0.0);
        let mut acc = term;
        for k in 1..TERMS {
            term *= -w / ((2 * k + 2) as f64 * (2 * k + 3) as f64);
            acc += term;
        }
        acc
    } else {
        (1.0 - sinc_sqrt(w)) / w
    }
}

/// `(-2 + 2 cos(sqrt(z)) + z * sin(sqrt(z))/sqrt(z)) / z^2`: the reduced
/// Krein-von Neumann characteristic, value -1/12 at 0.
pub fn kvn_reduced(z: Complex64) -> Complex64 {
    if z.norm() < DEFECT_CUT {
        // coefficient of z^m: 2 (-1)^m / (2m+4)! - (-1)^m / (2m+3)!
        let mut acc = Complex64::new(0.0, 0.0);
        let mut pw = Complex64::new(1.0, 0.0);
        let mut fact = 6.0; // 3!
        for m in 0..TERMS {
            // at this point fact = (2m+3)!
            let f3 = fact;
            let f4 = fact * (2 * m + 4) as f64;
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            acc += pw * sign * (2.0 / f4 - 1.0 / f3);
            pw *= z;
            fact = f4 * (2 * m + 5) as f64;
        }
        acc
    } else {
        (-2.0 + 2.0 * cos_sqrt(z) + z * sinc_sqrt(z)) / (z * z)
    }
}

/// `(cos(sqrt(z)) - sin(sqrt(z))/sqrt(z)) / z`: the reduced characteristic of
/// the tan-root problem (`u(0) = 0`, `u'(1) = u(1)`), value -1/3 at 0.
pub fn tan_root_reduced(z: Complex64) -> Complex64 {
    if z.norm() < DEFECT_CUT {
        // C - S = sum_{k>=1} (-1)^k (2k)/(2k+1)! z^k
        let mut acc = Complex64::new(0.0, 0.0);
        let mut pw = Complex64::new(1.0, 0.0);
        let mut fact = 6.0; // 3!
        for m in 0..TERMS {
            let k = m + 1;
            // fact = (2k+1)!
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            acc += pw * sign * (2 * k) as f64 / fact;
            pw *= z;
            fact *= (2 * k + 2) as f64 * (2 * k + 3) as f64;
        }
        acc
    } else {
        (cos_sqrt(z) - sinc_sqrt(z)) / z
    }
}
