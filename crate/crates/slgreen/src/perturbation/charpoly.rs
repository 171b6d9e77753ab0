//! Exact characteristic polynomials of small rational matrices and rigorous
//! real-root extraction: Sturm isolation, rational-root recognition with
//! exact verification, and quadratic-surd factors.

use crate::poly::Poly;
use crate::rational::{fmt_rat, int, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Monic characteristic polynomial `det(lambda*I - M)` via Faddeev-LeVerrier.
pub fn char_poly(m: &[Vec<Rat>]) -> Poly {
    let n = m.len();
    let mut coeffs = vec![Rat::zero(); n + 1];
    coeffs[n] = Rat::one();
    let mut mk = m.to_vec();
    for k in 1..=n {
        let ck = -trace(&mk) / int(k as i64);
        coeffs[n - k] = ck.clone();
        if k < n {
            // M_{k+1} = M (M_k + c_k I)
            let mut shifted = mk.clone();
            for (i, row) in shifted.iter_mut().enumerate() {
                row[i] = std::mem::replace(&mut row[i], Rat::zero()) + &ck;
            }
            mk = mat_mul(m, &shifted);
        }
    }
    Poly::from_coeffs(coeffs)
}

fn trace(m: &[Vec<Rat>]) -> Rat {
    m.iter().enumerate().map(|(i, row)| row[i].clone()).sum()
}

fn mat_mul(a: &[Vec<Rat>], b: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = a.len();
    let mut out = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = Rat::zero();
            for k in 0..n {
                acc += &a[i][k] * &b[k][j];
            }
            out[i][j] = acc;
        }
    }
    out
}

/// Exact rank by Gaussian elimination.
pub fn rational_rank(m: &[Vec<Rat>]) -> usize {
    if m.is_empty() {
        return 0;
    }
    let rows = m.len();
    let cols = m[0].len();
    let mut a = m.to_vec();
    let mut rank = 0;
    let mut col = 0;
    while rank < rows && col < cols {
        let pivot = (rank..rows).find(|&r| !a[r][col].is_zero());
        let Some(p) = pivot else {
            col += 1;
            continue;
        };
        a.swap(rank, p);
        let inv = a[rank][col].recip();
        for c in col..cols {
            a[rank][c] = &a[rank][c] * &inv;
        }
        for r in 0..rows {
            if r != rank && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..cols {
                    a[r][c] = &a[r][c] - &f * &a[rank][c];
                }
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

/// Exact nullspace basis of a square rational matrix.
pub fn rational_nullspace(m: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    let n = m.len();
    let mut a = m.to_vec();
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut row = 0;
    for col in 0..n {
        let pivot = (row..n).find(|&r| !a[r][col].is_zero());
        let Some(p) = pivot else { continue };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for c in 0..n {
            a[row][c] = &a[row][c] * &inv;
        }
        for r in 0..n {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..n {
                    a[r][c] = &a[r][c] - &f * &a[row][c];
                }
            }
        }
        pivots.push((row, col));
        row += 1;
        if row == n {
            break;
        }
    }
    let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![Rat::zero(); n];
        v[free] = Rat::one();
        for &(r, c) in &pivots {
            v[c] = -a[r][free].clone();
        }
        basis.push(v);
    }
    basis
}

/// `(a + b*sqrt(d))/den` with integer parts, `d >= 0` square-reduced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Surd {
    pub add: BigInt,
    pub coeff: BigInt,
    pub disc: BigInt,
    pub den: BigInt,
}

impl Surd {
    pub fn to_f64(&self) -> f64 {
        let a = self.add.to_f64().unwrap();
        let b = self.coeff.to_f64().unwrap();
        let d = self.disc.to_f64().unwrap();
        let den = self.den.to_f64().unwrap();
        (a + b * d.sqrt()) / den
    }

    /// Renders like `(-5-sqrt(30))/60`.
    pub fn to_display(&self) -> String {
        let sqrt_part = if self.coeff.is_one() {
            format!("sqrt({})", self.disc)
        } else if self.coeff == BigInt::from(-1) {
            format!("-sqrt({})", self.disc)
        } else {
            format!("{}*sqrt({})", self.coeff, self.disc)
        };
        let num = if self.add.is_zero() {
            sqrt_part
        } else if sqrt_part.starts_with('-') {
            format!("{}{}", self.add, sqrt_part)
        } else {
            format!("{}+{}", self.add, sqrt_part)
        };
        if self.den.is_one() {
            num
        } else {
            format!("({})/{}", num, self.den)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EigenValueRep {
    Rational(Rat),
    Surd(Surd),
    Numeric(f64),
}

impl EigenValueRep {
    pub fn to_f64(&self) -> f64 {
        match self {
            EigenValueRep::Rational(r) => crate::rational::to_f64(r),
            EigenValueRep::Surd(s) => s.to_f64(),
            EigenValueRep::Numeric(v) => *v,
        }
    }

    pub fn exact_string(&self) -> Option<String> {
        match self {
            EigenValueRep::Rational(r) => Some(fmt_rat(r)),
            EigenValueRep::Surd(s) => Some(s.to_display()),
            EigenValueRep::Numeric(_) => None,
        }
    }
}

fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    let mut a = a.monic();
    let mut b = b.monic();
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b);
        a = b;
        b = r.monic();
    }
    a
}

fn square_free_part(p: &Poly) -> Poly {
    let g = poly_gcd(p, &p.derivative());
    if g.degree() == 0 {
        return p.monic();
    }
    p.div_rem(&g).0.monic()
}

fn sturm_chain(p: &Poly) -> Vec<Poly> {
    let mut chain = vec![p.clone(), p.derivative()];
    while !chain.last().unwrap().is_zero() {
        let n = chain.len();
        let (_, r) = chain[n - 2].div_rem(&chain[n - 1]);
        chain.push(-r);
    }
    chain.pop();
    chain
}

fn sign_changes(chain: &[Poly], x: &Rat) -> usize {
    let mut changes = 0;
    let mut last: Option<bool> = None;
    for p in chain {
        let v = p.eval(x);
        if v.is_zero() {
            continue;
        }
        let sign = v.is_positive();
        if let Some(prev) = last {
            if prev != sign {
                changes += 1;
            }
        }
        last = Some(sign);
    }
    changes
}

/// Cauchy bound on the magnitude of real roots.
fn root_bound(p: &Poly) -> Rat {
    let lead = p.coeffs().last().unwrap().clone();
    let mut max = Rat::zero();
    for c in &p.coeffs()[..p.degree()] {
        let q = (c / &lead).abs();
        if q > max {
            max = q;
        }
    }
    max + int(1)
}

/// Isolating intervals `(lo, hi]` for every real root of a square-free
/// polynomial, endpoints chosen off the roots.
fn isolate_roots(p: &Poly) -> Vec<(Rat, Rat)> {
    if p.degree() == 0 {
        return Vec::new();
    }
    let chain = sturm_chain(p);
    let bound = root_bound(p);
    let mut stack = vec![(-bound.clone(), bound)];
    let mut out = Vec::new();
    while let Some((lo, hi)) = stack.pop() {
        let count = sign_changes(&chain, &lo).saturating_sub(sign_changes(&chain, &hi));
        match count {
            0 => {}
            1 => out.push((lo, hi)),
            _ => {
                let mut mid = (&lo + &hi) / int(2);
                // Nudge off a root so interval endpoints stay regular.
                while p.eval(&mid).is_zero() {
                    mid = (&lo + &mid) / int(2);
                }
                stack.push((lo, mid.clone()));
                stack.push((mid, hi));
            }
        }
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

/// Sign-based bisection of a bracketed simple root, `iters` halvings.
fn bisect(p: &Poly, lo: &Rat, hi: &Rat, iters: usize) -> (Rat, Rat) {
    let mut lo = lo.clone();
    let mut hi = hi.clone();
    let mut flo = p.eval(&lo);
    if flo.is_zero() {
        // Endpoint regularity is ensured by the caller; be defensive anyway.
        return (lo.clone(), lo);
    }
    for _ in 0..iters {
        let mid = (&lo + &hi) / int(2);
        let fm = p.eval(&mid);
        if fm.is_zero() {
            return (mid.clone(), mid);
        }
        if fm.is_positive() == flo.is_positive() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// Simplest rational (smallest denominator, Stern-Brocot sense) in `[lo, hi]`.
fn simplest_in(lo: &Rat, hi: &Rat) -> Rat {
    assert!(lo <= hi);
    if lo == hi {
        return lo.clone();
    }
    if lo.is_negative() && !hi.is_negative() {
        return Rat::zero();
    }
    if !lo.is_positive() {
        return -simplest_pos(&-hi.clone(), &-lo.clone());
    }
    simplest_pos(lo, hi)
}

fn simplest_pos(lo: &Rat, hi: &Rat) -> Rat {
    // 0 < lo < hi
    let fl = lo.floor();
    if &fl == lo {
        return lo.clone();
    }
    if hi >= &(&fl + int(1)) {
        return fl + int(1);
    }
    let frac = simplest_pos(&(hi - &fl).recip(), &(lo - &fl).recip());
    fl + frac.recip()
}

/// Reduce `sqrt(d)` to `s*sqrt(d')` with `d'` free of small square factors.
fn reduce_sqrt(d: &BigInt) -> (BigInt, BigInt) {
    let mut s = BigInt::one();
    let mut rem = d.clone();
    let mut p = BigInt::from(2);
    let limit = BigInt::from(100_000);
    while &(&p * &p) <= &rem && p <= limit {
        let p2 = &p * &p;
        while (&rem % &p2).is_zero() {
            rem /= &p2;
            s *= &p;
        }
        p += 1;
    }
    // Whole remainder a perfect square?
    let r = rem.sqrt();
    if &(&r * &r) == &rem {
        s *= &r;
        rem = BigInt::one();
    }
    (s, rem)
}

/// Exact surd roots of an integerized quadratic `a x^2 + b x + c` with
/// nonnegative discriminant.
fn quadratic_surds(a: &BigInt, b: &BigInt, c: &BigInt) -> Vec<EigenValueRep> {
    let disc = b * b - BigInt::from(4) * a * c;
    assert!(
        !disc.is_negative(),
        "complex quadratic factor in a real-spectrum matrix"
    );
    let (s, d) = reduce_sqrt(&disc);
    if d.is_one() {
        // Perfect square: two rational roots.
        let two_a = BigInt::from(2) * a;
        return vec![
            EigenValueRep::Rational(Rat::new(-b + &s, two_a.clone())),
            EigenValueRep::Rational(Rat::new(-b - &s, two_a)),
        ];
    }
    let mut out = Vec::new();
    for sign in [1i64, -1] {
        let mut add = -b.clone();
        let mut coeff = &s * BigInt::from(sign);
        let mut den = BigInt::from(2) * a;
        let g = add.gcd(&coeff).gcd(&den);
        if !g.is_zero() && !g.is_one() {
            add /= &g;
            coeff /= &g;
            den /= &g;
        }
        if den.is_negative() {
            add = -add;
            coeff = -coeff;
            den = -den;
        }
        out.push(EigenValueRep::Surd(Surd { add, coeff, disc: d.clone(), den }));
    }
    out
}

fn integerize(p: &Poly) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for c in p.coeffs() {
        lcm = lcm.lcm(c.denom());
    }
    p.coeffs()
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect()
}

const BISECT_ITERS: usize = 140;

/// All real roots of `p` with multiplicity, as exact rationals, exact
/// quadratic surds (degree <= 2 remainders and rational quartic
/// factorizations), or high-precision numerics otherwise. The total count
/// (with multiplicity) must equal `deg p`: callers pass characteristic
/// polynomials of matrices known to have real spectra.
pub fn real_eigenvalues(p: &Poly) -> Vec<(EigenValueRep, usize)> {
    let mut out: Vec<(EigenValueRep, usize)> = Vec::new();
    let mut rest = p.monic();

    // Exact rational roots first, with multiplicity.
    let sf = square_free_part(&rest);
    for (lo, hi) in isolate_roots(&sf) {
        let (rlo, rhi) = bisect(&sf, &lo, &hi, BISECT_ITERS);
        let candidate = simplest_in(&rlo, &rhi);
        if rest.eval(&candidate).is_zero() {
            let linear = Poly::from_coeffs(vec![-candidate.clone(), Rat::one()]);
            let mut mult = 0;
            loop {
                let (q, r) = rest.div_rem(&linear);
                if r.is_zero() {
                    rest = q;
                    mult += 1;
                } else {
                    break;
                }
            }
            out.push((EigenValueRep::Rational(candidate), mult));
        }
    }

    match rest.degree() {
        0 => {}
        1 => {
            let r = -rest.coeff(0) / rest.coeff(1);
            out.push((EigenValueRep::Rational(r), 1));
        }
        2 => {
            let c = integerize(&rest);
            for root in quadratic_surds(&c[2], &c[1], &c[0]) {
                out.push((root, 1));
            }
        }
        _ => {
            let sf = square_free_part(&rest);
            assert_eq!(
                sf.degree(),
                rest.degree(),
                "unexpected repeated irrational eigenvalue"
            );
            let intervals: Vec<(Rat, Rat)> = isolate_roots(&sf)
                .into_iter()
                .map(|(lo, hi)| bisect(&sf, &lo, &hi, BISECT_ITERS))
                .collect();
            assert_eq!(intervals.len(), sf.degree(), "matrix spectrum must be real");
            if rest.degree() == 4 {
                if let Some(factors) = quartic_quadratic_split(&rest, &intervals) {
                    for f in factors {
                        let c = integerize(&f);
                        for root in quadratic_surds(&c[2], &c[1], &c[0]) {
                            out.push((root, 1));
                        }
                    }
                    out.sort_by(|a, b| a.0.to_f64().partial_cmp(&b.0.to_f64()).unwrap());
                    return out;
                }
            }
            for (lo, hi) in intervals {
                let mid = (&lo + &hi) / int(2);
                out.push((EigenValueRep::Numeric(crate::rational::to_f64(&mid)), 1));
            }
        }
    }

    out.sort_by(|a, b| a.0.to_f64().partial_cmp(&b.0.to_f64()).unwrap());
    out
}

/// Attempts to split a monic rational quartic with four bracketed real roots
/// into two rational quadratics: candidate sum/product coefficients are
/// recognized from the root intervals and verified by exact division.
fn quartic_quadratic_split(p: &Poly, intervals: &[(Rat, Rat)]) -> Option<Vec<Poly>> {
    const PAIRINGS: [[usize; 4]; 3] = [[0, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]];
    for pairing in PAIRINGS {
        let (i, j) = (pairing[0], pairing[1]);
        let s_lo = &intervals[i].0 + &intervals[j].0;
        let s_hi = &intervals[i].1 + &intervals[j].1;
        let s = simplest_in(&s_lo, &s_hi);
        let (q_lo, q_hi) = product_interval(&intervals[i], &intervals[j]);
        let q = simplest_in(&q_lo, &q_hi);
        let factor = Poly::from_coeffs(vec![q, -s, Rat::one()]);
        let (quot, rem) = p.div_rem(&factor);
        if rem.is_zero() {
            return Some(vec![factor, quot]);
        }
    }
    None
}

fn product_interval(a: &(Rat, Rat), b: &(Rat, Rat)) -> (Rat, Rat) {
    let corners = [
        &a.0 * &b.0,
        &a.0 * &b.1,
        &a.1 * &b.0,
        &a.1 * &b.1,
    ];
    let mut lo = corners[0].clone();
    let mut hi = corners[0].clone();
    for c in &corners[1..] {
        if c < &lo {
            lo = c.clone();
        }
        if c > &hi {
            hi = c.clone();
        }
    }
    (lo, hi)
}
