//! Trigonometric sums carried by the singular points: the order-t⁰ heat-trace
//! contribution T, cotangent-square sums, higher-dimensional Dedekind sums,
//! and the Donnelly fixed-point factor.
//!
//! T is a rational number (it is fixed by the Galois action on the root-of-
//! unity data), but no closed denominator formula is available, so sums are
//! evaluated in multiprecision floating point and rational reconstruction is
//! attempted afterwards with a denominator bound of 10⁶·s². The closed form
//! `t_closed` rewrites each 1/(sin²·sin²) block through
//!
//! ```text
//! 1/(sin²α sin²β) = 1 + cot²α + cot²β + cot²α·cot²β
//! Σ_{j=1}^{N-1} cot²(jπ/N) = (N−1)(N−2)/3
//! ```
//!
//! which collapses the non-Dedekind part of T to the exact rational
//! (−3 + χ/3 + 2p/3)/16.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{self, Float, Integer, Rational};
use crate::topology::{symmetric_functions, WeightTriple};

/// A trigonometric sum at a working precision, with the exact rational
/// attached when reconstruction succeeded.
///
/// When `reconstructed` is present it lies within 2^(−precision/2) of
/// `value`.
#[derive(Clone, Debug)]
pub struct TrigSumResult {
    pub value: Float,
    pub precision: u32,
    pub reconstructed: Option<Rational>,
}

impl TrigSumResult {
    pub fn to_json(&self) -> Value {
        json!({
            "decimal": exact::float_decimal(&self.value),
            "precision": self.precision,
            "rational": self.reconstructed.as_ref().map(exact::rational_str),
        })
    }
}

fn reduce_mod(mult: i64, j: u64, modulus: u64) -> u64 {
    let m = modulus as i128;
    ((mult as i128 * j as i128).rem_euclid(m)) as u64
}

/// sin²(kπ/n) for 1 ≤ k < n.
fn sin_sq(k: u64, n: u64, prec: u32) -> Float {
    debug_assert!(k >= 1 && k < n);
    let mut angle = exact::pi(prec);
    angle *= Float::with_val(prec, k);
    angle /= Float::with_val(prec, n);
    let s = angle.sin();
    s.square()
}

/// cot(kπ/n) for 1 ≤ k < n.
fn cot(k: u64, n: u64, prec: u32) -> Float {
    debug_assert!(k >= 1 && k < n);
    let mut angle = exact::pi(prec);
    angle *= Float::with_val(prec, k);
    angle /= Float::with_val(prec, n);
    let (s, c) = angle.sin_cos(Float::new(prec));
    c / s
}

/// Σ cot²(jπ/N) in closed form: (N−1)(N−2)/3. Zero for N = 1 (empty sum)
/// and N = 2 (cot(π/2) = 0).
pub fn cot_sq_sum(n: u64) -> Rational {
    assert!(n >= 1);
    Rational::from(((n - 1) * (n.saturating_sub(2)), 3))
}

/// Σ_{j=1}^{N−1} cot²(jπ/N) term by term, the numeric oracle for
/// [`cot_sq_sum`].
pub fn cot_sq_sum_direct(n: u64, prec: u32) -> Float {
    assert!(n >= 1);
    let mut acc = Float::new(prec);
    for j in 1..n {
        acc += cot(j, n, prec).square();
    }
    acc
}

/// Higher-dimensional Dedekind sum
/// `d(p0; p1,p2,p3,p4) = Σ_{j=1}^{p0−1} Π_i cot(jπ·p_i/p0)`.
///
/// The empty sum (p0 = 1) is exactly zero. A pole — some jπ·p_i/p0 landing on
/// a multiple of π — means the precondition was violated and is reported as a
/// domain error.
pub fn dedekind4(p0: u64, multipliers: [i64; 4], prec: u32) -> Result<Float> {
    assert!(p0 >= 1);
    let mut acc = Float::new(prec);
    for j in 1..p0 {
        let mut term = Float::with_val(prec, 1);
        for &m in &multipliers {
            let k = reduce_mod(m, j, p0);
            if k == 0 {
                return Err(Error::Domain(format!(
                    "dedekind4 pole: {m}·{j}·π/{p0} is a multiple of π"
                )));
            }
            term *= cot(k, p0, prec);
        }
        acc += term;
    }
    Ok(acc)
}

/// Donnelly's fixed-point factor b̃₀ for a cone point of order N with
/// rotation multiple m:
/// `1/(16 sin²(jπ/N) sin²(mjπ/N)) = |det((I − A_{γʲ})⁻¹)|`
/// for the 4×4 block rotation A with angles 2jπ/N and 2mjπ/N.
pub fn donnelly_b0(n: u64, m: u64, j: u64, prec: u32) -> Result<Float> {
    let j1 = if n == 0 { 0 } else { j % n };
    if n < 2 || j1 == 0 {
        return Err(Error::Domain(format!(
            "b0 undefined: j = {j} is a multiple of the cone order {n}"
        )));
    }
    let j2 = reduce_mod(m as i64, j, n);
    if j2 == 0 {
        return Err(Error::Domain(format!(
            "b0 undefined: m·j = {m}·{j} is a multiple of the cone order {n}"
        )));
    }
    let mut denom = Float::with_val(prec, 16);
    denom *= sin_sq(j1, n, prec);
    denom *= sin_sq(j2, n, prec);
    Ok(Float::with_val(prec, 1) / denom)
}

fn fixed_point_views(w: &WeightTriple) -> [(u64, u64, u64); 3] {
    let [n1, n2, n3] = w.weights();
    [(n1, n2, n3), (n2, n1, n3), (n3, n1, n2)]
}

fn reconstruct(w: &WeightTriple, value: &Float, prec: u32) -> Option<Rational> {
    if value.is_zero() {
        return Some(Rational::new());
    }
    let sym = symmetric_functions(w);
    let s = Integer::from(sym.s);
    let spec_bound = Integer::from(1_000_000u64) * Integer::from(&s * &s);
    // Error budget: roughly one ulp of |value| per summed term. A
    // denominator is only certifiable while 1/(2q·bound) clears it, so cap
    // the search at the q where that breaks down; this also keeps the
    // float's own binary denominator (which slips under the s² bound once
    // the weights are large) out of reach.
    let mut err = Float::with_val(64, value);
    err.abs_mut();
    err *= Float::with_val(64, 4 * sym.p + 16);
    err *= exact::pow2(64, -(prec as i32));
    let certifiable = (Float::with_val(64, Rational::from((1, 2))) / err)
        .sqrt()
        .floor()
        .to_integer()?;
    let bound = spec_bound.min(certifiable);
    if bound < 1 {
        return None;
    }
    let tol = exact::pow2(prec, -((prec / 2) as i32));
    let approx = exact::rationalize(value, &bound, &tol).ok()?;
    // uniqueness: any other rational with denominator ≤ bound sits at least
    // 1/(q·bound) away, so the match is genuine only strictly inside half
    // that separation; a coincidental convergent fails this
    let sep = Rational::from((Integer::from(1), Integer::from(2 * approx.denom()) * &bound));
    let mut diff = Float::with_val(prec + 64, &approx);
    diff -= value;
    diff.abs_mut();
    if diff < Float::with_val(prec, &sep) {
        Some(approx)
    } else {
        None
    }
}

/// The singular heat-trace contribution, summed term by term:
///
/// ```text
/// T = Σᵢ (1/Nᵢ) Σ_{j=1}^{Nᵢ−1} 1/(16 sin²(Nₐjπ/Nᵢ) sin²(N_bjπ/Nᵢ))
/// ```
///
/// where at the singular point of order Nᵢ the other two weights Nₐ, N_b act
/// as the rotation multiples. Weights equal to 1 contribute empty sums.
pub fn t_direct(w: &WeightTriple, prec: u32) -> TrigSumResult {
    let mut total = Float::new(prec);
    for (ni, na, nb) in fixed_point_views(w) {
        if ni == 1 {
            continue;
        }
        let mut local = Float::new(prec);
        for j in 1..ni {
            let k1 = reduce_mod(na as i64, j, ni);
            let k2 = reduce_mod(nb as i64, j, ni);
            debug_assert!(k1 != 0 && k2 != 0, "coprimality precludes poles");
            let mut denom = Float::with_val(prec, 16);
            denom *= sin_sq(k1, ni, prec);
            denom *= sin_sq(k2, ni, prec);
            local += Float::with_val(prec, 1) / denom;
        }
        local /= Float::with_val(prec, ni);
        total += local;
    }
    let reconstructed = reconstruct(w, &total, prec);
    TrigSumResult {
        value: total,
        precision: prec,
        reconstructed,
    }
}

/// T through the cotangent expansion: the exact rational part
/// `(−3 + χ/3 + 2p/3)/16` plus the Dedekind sums
/// `Σᵢ d(Nᵢ; Nₐ,Nₐ,N_b,N_b)/(16Nᵢ)`.
///
/// Agrees with [`t_direct`] to within 2^(−prec/2); the direct sum is the
/// defining expression and remains the authority.
pub fn t_closed(w: &WeightTriple, prec: u32) -> TrigSumResult {
    let sym = symmetric_functions(w);
    let chi = Rational::from((sym.r, sym.s));
    // (−3 + χ/3 + 2p/3) / 16
    let mut rational_part = chi / 3u32;
    rational_part += Rational::from((2 * sym.p, 3));
    rational_part -= 3u32;
    rational_part /= 16u32;

    let mut total = Float::with_val(prec, &rational_part);
    for (ni, na, nb) in fixed_point_views(w) {
        if ni == 1 {
            continue;
        }
        let d = dedekind4(ni, [na as i64, na as i64, nb as i64, nb as i64], prec)
            .expect("pairwise coprime weights cannot hit a pole");
        total += d / Float::with_val(prec, 16 * ni);
    }
    let reconstructed = reconstruct(w, &total, prec);
    TrigSumResult {
        value: total,
        precision: prec,
        reconstructed,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triple(a: u64, b: u64, c: u64) -> WeightTriple {
        WeightTriple::new(a, b, c).unwrap()
    }

    fn assert_close(x: &Float, expect: &Rational, tol: f64) {
        let mut diff = Float::with_val(x.prec(), expect);
        diff -= x;
        diff.abs_mut();
        assert!(
            diff < Float::with_val(x.prec(), tol),
            "expected {expect}, got {x} (|diff| = {diff:.3e})"
        );
    }

    #[test]
    fn cot_sq_sum_examples() {
        assert_eq!(cot_sq_sum(1), Rational::from(0));
        assert_eq!(cot_sq_sum(2), Rational::from(0));
        assert_eq!(cot_sq_sum(3), Rational::from((2, 3)));
        assert_eq!(cot_sq_sum(5), Rational::from(4));
        assert_eq!(cot_sq_sum(7), Rational::from(10));
    }

    #[test]
    fn cot_sq_sum_direct_matches_closed_form() {
        for n in [1u64, 2, 3, 5, 7, 12] {
            let direct = cot_sq_sum_direct(n, 128);
            assert_close(&direct, &cot_sq_sum(n), 1e-30);
        }
    }

    #[test]
    fn dedekind4_examples() {
        let zero = dedekind4(1, [1, 1, 1, 1], 128).unwrap();
        assert!(zero.is_zero());
        let d2 = dedekind4(2, [1, 1, 1, 1], 128).unwrap();
        assert_close(&d2, &Rational::from(0), 1e-30);
        // 2·cot²(π/3)·cot²(2π/3) = 2/9
        let d3 = dedekind4(3, [1, 1, 2, 2], 128).unwrap();
        assert_close(&d3, &Rational::from((2, 9)), 1e-30);
    }

    #[test]
    fn dedekind4_negative_multiplier_is_odd_symmetric() {
        // d(5; −1,1,2,2) = −d(5; 1,1,2,2)
        let plus = dedekind4(5, [1, 1, 2, 2], 128).unwrap();
        let minus = dedekind4(5, [-1, 1, 2, 2], 128).unwrap();
        let mut sum = plus;
        sum += &minus;
        assert!(sum.abs() < Float::with_val(128, 1e-30));
    }

    #[test]
    fn dedekind4_reports_poles() {
        assert!(matches!(
            dedekind4(6, [2, 1, 1, 1], 128),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            dedekind4(4, [8, 1, 1, 1], 128),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn donnelly_b0_examples() {
        let b = donnelly_b0(2, 1, 1, 128).unwrap();
        assert_close(&b, &Rational::from((1, 16)), 1e-30);
        let b = donnelly_b0(3, 1, 1, 128).unwrap();
        assert_close(&b, &Rational::from((1, 9)), 1e-30);
        let b = donnelly_b0(3, 2, 1, 128).unwrap();
        assert_close(&b, &Rational::from((1, 9)), 1e-30);
    }

    #[test]
    fn donnelly_b0_rejects_trivial_rotation() {
        assert!(matches!(donnelly_b0(3, 1, 3, 128), Err(Error::Domain(_))));
        assert!(matches!(donnelly_b0(3, 1, 0, 128), Err(Error::Domain(_))));
    }

    #[test]
    fn t_direct_examples() {
        let t = t_direct(&triple(1, 1, 1), 128);
        assert!(t.value.is_zero());
        assert_eq!(t.reconstructed.unwrap(), Rational::from(0));

        let t = t_direct(&triple(1, 1, 2), 128);
        assert_eq!(t.reconstructed.unwrap(), Rational::from((1, 32)));

        let t = t_direct(&triple(1, 2, 3), 128);
        assert_eq!(t.reconstructed.unwrap(), Rational::from((91, 864)));
        assert_close(&t.value, &Rational::from((91, 864)), 1e-30);
    }

    #[test]
    fn t_closed_matches_t_direct_spot_values() {
        for (a, b, c) in [(1, 1, 1), (1, 1, 2), (1, 2, 3), (2, 3, 5), (3, 4, 7)] {
            let w = triple(a, b, c);
            let direct = t_direct(&w, 128);
            let closed = t_closed(&w, 128);
            let mut diff = direct.value.clone();
            diff -= &closed.value;
            diff.abs_mut();
            assert!(
                diff < exact::pow2(128, -64),
                "closed form diverges from direct sum on {w}: {diff:.3e}"
            );
        }
        assert_eq!(
            t_closed(&triple(1, 2, 3), 128).reconstructed.unwrap(),
            Rational::from((91, 864))
        );
        assert_eq!(
            t_closed(&triple(1, 1, 2), 128).reconstructed.unwrap(),
            Rational::from((1, 32))
        );
        assert!(t_closed(&triple(1, 1, 1), 128).value.abs() < exact::pow2(128, -64));
    }

    #[test]
    fn reconstruction_refuses_uncertifiable_precision() {
        // near-equal large weights make T ~ 2·10⁹ with a true denominator
        // beyond what 128 bits can certify: better no rational than a
        // coincidental convergent
        let w = triple(9997, 9998, 9999);
        let t = t_direct(&w, 128);
        assert!(t.reconstructed.is_none());
        // at 512 bits the value is certifiable and round-trips at 640
        let t512 = t_direct(&w, 512);
        let r = t512.reconstructed.expect("certifiable at 512 bits");
        let t640 = t_direct(&w, 640);
        let mut diff = Float::with_val(640, &r);
        diff -= &t640.value;
        diff.abs_mut();
        assert!(diff < exact::pow2(640, -256), "|r − T| = {diff:.3e}");
    }

    #[test]
    fn trig_sum_json_shape() {
        let t = t_direct(&triple(1, 2, 3), 128);
        let v = t.to_json();
        assert_eq!(v["rational"], "91/864");
        assert_eq!(v["precision"], 128);
        assert!(v["decimal"]
            .as_str()
            .unwrap()
            .contains("05324074074074074074074074074074074"));
    }
}
