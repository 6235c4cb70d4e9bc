//! Exact arithmetic: big rationals, multiprecision reals, and the
//! number-theoretic helpers every recovery step needs.
//!
//! Rationals and floats are backed by GMP/MPFR through `rug`. A `Rational`
//! is always held in lowest terms with a positive denominator, so reading a
//! denominator off a rational is canonical. A `Float` carries its own
//! mantissa precision in bits; operations never silently drop below the
//! working precision of their inputs.

use std::collections::BTreeSet;

use rug::float::Constant;
use rug::ops::NegAssign;

use crate::error::{Error, Result};

pub use rug::{Float, Integer, Rational};

/// Smallest supported mantissa precision in bits.
pub const MIN_PRECISION: u32 = 64;

/// Default mantissa precision in bits.
pub const DEFAULT_PRECISION: u32 = 128;

/// Trial-division cutoff; larger factors fall through to Pollard rho.
const TRIAL_LIMIT: u64 = 1_000_000;

/// pi at the requested precision.
pub fn pi(prec: u32) -> Float {
    Float::with_val(prec, Constant::Pi)
}

/// 2^exp as a float, used for precision-derived tolerances like 2^(-prec/2).
pub fn pow2(prec: u32, exp: i32) -> Float {
    Float::with_val(prec, Float::i_exp(1, exp))
}

/// Greatest common divisor by Euclid's algorithm; gcd(0, 0) = 0.
pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &WITNESSES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent-cycle Pollard rho; `n` must be odd, composite, and free of factors
/// below the trial limit.
fn pollard_rho(n: u64) -> u64 {
    for c in 1..64u64 {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = gcd(x.abs_diff(y), n);
        }
        if d != n {
            return d;
        }
    }
    unreachable!("pollard rho exhausted parameter choices for {n}")
}

fn factor_recursive(n: u64, out: &mut Vec<u64>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let d = pollard_rho(n);
    factor_recursive(d, out);
    factor_recursive(n / d, out);
}

/// Prime factorization of `n >= 1` as `(prime, exponent)` pairs with strictly
/// increasing primes. The empty product is returned for `n = 1`.
///
/// Trial division runs to 10^6; anything surviving is split by Pollard rho,
/// so the full 64-bit range is supported.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut primes: Vec<u64> = Vec::new();
    for p in [2u64, 3, 5] {
        while n.is_multiple_of(p) {
            primes.push(p);
            n /= p;
        }
    }
    // wheel over residues coprime to 30
    const WHEEL: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut d = 7u64;
    let mut w = 0usize;
    while d <= TRIAL_LIMIT && d * d <= n {
        while n.is_multiple_of(d) {
            primes.push(d);
            n /= d;
        }
        d += WHEEL[w];
        w = (w + 1) % WHEEL.len();
    }
    if n > 1 {
        if d * d > n {
            // no divisor up to sqrt(n): prime
            primes.push(n);
        } else {
            factor_recursive(n, &mut primes);
        }
    }
    primes.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// All positive divisors of `n >= 1` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let snapshot = out.clone();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            out.extend(snapshot.iter().map(|d| d * pk));
        }
    }
    out.sort_unstable();
    out
}

/// Writes `n = k^2 * f` with `f` squarefree and `k` maximal.
pub fn square_decompose(n: u64) -> (u64, u64) {
    assert!(n >= 1, "square_decompose requires n >= 1");
    let mut k = 1u64;
    let mut f = 1u64;
    for (p, e) in factorize(n) {
        k *= p.pow(e / 2);
        if e % 2 == 1 {
            f *= p;
        }
    }
    (k, f)
}

/// Closest rational to `x` with denominator at most `max_den`, by walking the
/// continued-fraction convergents and the final semiconvergent.
fn limit_denominator(x: &Rational, max_den: &Integer) -> Rational {
    if x.denom() <= max_den {
        return x.clone();
    }
    let mut p0 = Integer::from(0);
    let mut q0 = Integer::from(1);
    let mut p1 = Integer::from(1);
    let mut q1 = Integer::from(0);
    let mut n = x.numer().clone();
    let mut d = x.denom().clone();
    loop {
        let (a, r) = n.div_rem_floor(d.clone());
        let q2 = &q0 + Integer::from(&a * &q1);
        if q2 > *max_den {
            break;
        }
        let p2 = &p0 + Integer::from(&a * &p1);
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        n = d;
        d = r;
        debug_assert!(d != 0, "exact termination implies denom <= max_den");
    }
    let k = Integer::from(max_den - &q0) / &q1;
    let semi = Rational::from((p0 + Integer::from(&k * &p1), q0 + Integer::from(&k * &q1)));
    let conv = Rational::from((p1, q1));
    let d_semi = Rational::from(&semi - x).abs();
    let d_conv = Rational::from(&conv - x).abs();
    if d_conv <= d_semi {
        conv
    } else {
        semi
    }
}

/// Best rational approximant of `x` with denominator at most `max_denominator`,
/// accepted only when it lands within `tol` of `x`.
///
/// The float is converted to its exact binary rational first, so the search
/// itself is exact; only the final tolerance check touches float arithmetic.
pub fn rationalize(x: &Float, max_denominator: &Integer, tol: &Float) -> Result<Rational> {
    assert!(tol.is_sign_positive() && !tol.is_zero(), "tol must be > 0");
    assert!(*max_denominator >= 1, "max_denominator must be >= 1");
    if !x.is_finite() {
        return Err(Error::Domain(format!("cannot rationalize {x}")));
    }
    let exact = x
        .to_rational()
        .expect("finite float converts to a rational");
    let best = limit_denominator(&exact, max_denominator);
    let prec = x.prec() + 32;
    let mut diff = Float::with_val(prec, &best);
    diff -= x;
    diff.abs_mut();
    if diff <= *tol {
        Ok(best)
    } else {
        Err(Error::NoApproximant(format!(
            "nearest fraction {best} misses {x} by {diff:.3e} (> tol)"
        )))
    }
}

/// Exact integer roots of `a x^2 + b x + c` (a != 0).
fn integer_quadratic_roots(a: &Integer, b: &Integer, c: &Integer) -> Vec<Integer> {
    let disc = Integer::from(b * b) - Integer::from(4) * Integer::from(a * c);
    if disc < 0 {
        return vec![];
    }
    let (sq, rem) = disc.sqrt_rem(Integer::new());
    if rem != 0 {
        return vec![];
    }
    let two_a = Integer::from(2 * a);
    let mut out = vec![];
    for sign in [1i32, -1] {
        let num = Integer::from(&sq * sign) - b;
        if num.is_divisible(&two_a) {
            let root = num.div_exact(&two_a);
            if !out.contains(&root) {
                out.push(root);
            }
        }
    }
    out
}

/// All integer roots of `a3 u^3 + a2 u^2 + a1 u + a0` (a3 != 0), each listed
/// once, ascending.
///
/// Any integer root divides the constant term, so divisor enumeration of
/// |a0| plus exact evaluation is complete; `a0 = 0` contributes the root 0
/// and deflates to a quadratic solved exactly.
pub fn integer_cubic_roots(
    a3: &Integer,
    a2: &Integer,
    a1: &Integer,
    a0: &Integer,
) -> Result<Vec<Integer>> {
    assert!(*a3 != 0, "leading coefficient must be nonzero");
    let eval = |u: &Integer| -> Integer {
        let mut acc = Integer::from(a3 * u);
        acc += a2;
        acc *= u;
        acc += a1;
        acc *= u;
        acc += a0;
        acc
    };
    let mut roots: BTreeSet<Integer> = BTreeSet::new();
    if *a0 == 0 {
        roots.insert(Integer::new());
        for r in integer_quadratic_roots(a3, a2, a1) {
            roots.insert(r);
        }
    } else {
        let abs = Integer::from(a0.abs_ref());
        let abs = abs.to_u64().ok_or_else(|| {
            Error::Overflow(format!(
                "constant term {a0} exceeds 64-bit divisor enumeration"
            ))
        })?;
        for d in divisors(abs) {
            let mut u = Integer::from(d);
            if eval(&u) == 0 {
                roots.insert(u.clone());
            }
            u.neg_assign();
            if eval(&u) == 0 {
                roots.insert(u);
            }
        }
    }
    Ok(roots.into_iter().collect())
}

/// Parses "p/q" or a plain integer string into a rational.
pub fn rational_from_str(s: &str) -> Result<Rational> {
    let r: Rational = s
        .trim()
        .parse()
        .map_err(|_| Error::Domain(format!("cannot parse rational from {s:?}")))?;
    Ok(r)
}

/// Canonical "p/q" rendering, denominator always present ("6/1", "91/864").
pub fn rational_str(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses a decimal (or integer, or "p/q") string into a float at `prec` bits.
pub fn parse_decimal(s: &str, prec: u32) -> Result<Float> {
    let t = s.trim();
    if t.contains('/') {
        let r = rational_from_str(t)?;
        return Ok(Float::with_val(prec, &r));
    }
    let incomplete =
        Float::parse(t).map_err(|_| Error::Domain(format!("cannot parse number from {s:?}")))?;
    Ok(Float::with_val(prec, incomplete))
}

/// Decimal rendering with enough digits to round-trip the mantissa.
pub fn float_decimal(x: &Float) -> String {
    let digits = (x.prec() as f64 * std::f64::consts::LOG10_2).ceil() as usize + 2;
    x.to_string_radix(10, Some(digits))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(12, 18), 6);
        assert_eq!(gcd(7, 0), 7);
        assert_eq!(gcd(0, 7), 7);
        assert_eq!(gcd(35, 64), 1);
        assert_eq!(gcd(0, 0), 0);
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(1), Vec::<(u64, u32)>::new());
        assert_eq!(factorize(385), vec![(5, 1), (7, 1), (11, 1)]);
        assert_eq!(factorize(864), vec![(2, 5), (3, 3)]);
        assert_eq!(factorize(2), vec![(2, 1)]);
    }

    #[test]
    fn factorize_beyond_trial_limit_uses_rho() {
        // both primes exceed the 10^6 trial cutoff
        let p = 1_000_003u64;
        let q = 1_000_033u64;
        assert!(is_prime(p) && is_prime(q));
        assert_eq!(factorize(p * q), vec![(p, 1), (q, 1)]);
        assert_eq!(factorize(p * p), vec![(p, 2)]);
    }

    #[test]
    fn square_decompose_examples() {
        assert_eq!(square_decompose(128), (8, 2));
        assert_eq!(square_decompose(1), (1, 1));
        assert_eq!(square_decompose(10), (1, 10));
        assert_eq!(square_decompose(864), (12, 6));
    }

    #[test]
    fn divisors_of_sixty() {
        assert_eq!(divisors(60), vec![1, 2, 3, 4, 5, 6, 10, 12, 15, 20, 30, 60]);
        assert_eq!(divisors(1), vec![1]);
    }

    #[test]
    fn is_prime_spot_checks() {
        assert!(is_prime(2));
        assert!(is_prime(97));
        assert!(is_prime(1_000_003));
        assert!(!is_prime(1));
        assert!(!is_prime(0));
        assert!(!is_prime(1_000_001)); // 101 * 9901
    }

    #[test]
    fn rationalize_integer_input() {
        let x = Float::with_val(128, 6);
        let tol = Float::with_val(128, 1e-20);
        let r = rationalize(&x, &Integer::from(1_000_000), &tol).unwrap();
        assert_eq!(r, Rational::from((6, 1)));
        assert_eq!(rational_str(&r), "6/1");
    }

    #[test]
    fn rationalize_recovers_chi_of_123() {
        // 1 + 1/2 + 1/3 rendered at 128 bits
        let x = Float::with_val(128, Rational::from((11, 6)));
        let tol = Float::with_val(128, 1e-9);
        let r = rationalize(&x, &Integer::from(1_000_000), &tol).unwrap();
        assert_eq!(r, Rational::from((11, 6)));
    }

    #[test]
    fn rationalize_recovers_t_of_123() {
        let x = Float::with_val(128, Rational::from((91, 864)));
        let tol = Float::with_val(128, 1e-9);
        let r = rationalize(&x, &Integer::from(1_000_000), &tol).unwrap();
        assert_eq!(r, Rational::from((91, 864)));
    }

    #[test]
    fn rationalize_rejects_irrational_under_tight_tol() {
        let x = Float::with_val(128, 2).sqrt();
        let tol = Float::with_val(128, 1e-9);
        let err = rationalize(&x, &Integer::from(10), &tol).unwrap_err();
        assert!(matches!(err, Error::NoApproximant(_)));
    }

    #[test]
    fn rationalize_handles_negatives() {
        let x = Float::with_val(128, Rational::from((-7, 3)));
        let tol = Float::with_val(128, 1e-20);
        let r = rationalize(&x, &Integer::from(1000), &tol).unwrap();
        assert_eq!(r, Rational::from((-7, 3)));
    }

    #[test]
    fn cubic_roots_for_weights_123() {
        let roots = integer_cubic_roots(
            &Integer::from(1),
            &Integer::from(-12),
            &Integer::from(47),
            &Integer::from(-60),
        )
        .unwrap();
        assert_eq!(
            roots,
            vec![Integer::from(3), Integer::from(4), Integer::from(5)]
        );
    }

    #[test]
    fn cubic_triple_root() {
        let roots = integer_cubic_roots(
            &Integer::from(1),
            &Integer::from(-6),
            &Integer::from(12),
            &Integer::from(-8),
        )
        .unwrap();
        assert_eq!(roots, vec![Integer::from(2)]);
    }

    #[test]
    fn cubic_zero_constant_term() {
        let roots = integer_cubic_roots(
            &Integer::from(1),
            &Integer::from(0),
            &Integer::from(1),
            &Integer::from(0),
        )
        .unwrap();
        assert_eq!(roots, vec![Integer::from(0)]);

        // u(u-1)(u+2) = u^3 + u^2 - 2u
        let roots = integer_cubic_roots(
            &Integer::from(1),
            &Integer::from(1),
            &Integer::from(-2),
            &Integer::from(0),
        )
        .unwrap();
        assert_eq!(
            roots,
            vec![Integer::from(-2), Integer::from(0), Integer::from(1)]
        );
    }

    #[test]
    fn rational_string_round_trip() {
        let r = rational_from_str("91/864").unwrap();
        assert_eq!(rational_str(&r), "91/864");
        let r = rational_from_str("6").unwrap();
        assert_eq!(rational_str(&r), "6/1");
        assert!(rational_from_str("not a number").is_err());
    }

    #[test]
    fn parse_decimal_forms() {
        let x = parse_decimal("1.5", 128).unwrap();
        assert_eq!(x, Float::with_val(128, 1.5));
        let y = parse_decimal("3/2", 128).unwrap();
        assert_eq!(y, x);
        assert!(parse_decimal("nope", 128).is_err());
    }
}
