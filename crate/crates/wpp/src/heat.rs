//! Heat-trace coefficients 𝔞₀, 𝔞₁, 𝔞₂ of the Laplacian on p-forms, and the
//! extraction formulas that invert them.
//!
//! On a 4-dimensional Kähler orbifold with isolated cone points the
//! spectrum of Δ_p determines
//!
//! ```text
//! 𝔞₀(Δ_p) = k(p)·Vol/(16π²)
//! 𝔞₁(Δ_p) = k₀(p)·∫τ/(96π²),          ∫τ = 2π·∫c₁∧ω
//! 𝔞₂(Δ_p) = (k₁+k₂/2+k₃)/(5760π²)·∫τ² + k₁/180·∫c₂ − (4k₁+k₂)/720·∫c₁² + k(p)·T
//! ```
//!
//! with the form-degree coefficients k, k₀..k₃ of the smooth expansion and
//! the singular sum T. π-bearing quantities are kept as exact rational
//! coefficients of the appropriate power of π for as long as possible: 𝔞₀
//! carries π⁻², ∫τ² carries π², and T is π-free, so for an extremal metric
//! (∫τ² = 96π²·d) the whole 𝔞₂ row is an exact rational.
//!
//! One constant deserves a note: inverting the 𝔞₁ chain above gives
//! `b = 72·𝔞₁²/𝔞₀`, which is what [`extract_b`] uses. Solving the printed
//! form 𝔞₁ = √(2π·𝔞₀·b)/(24π) instead would give 288π·𝔞₁²/𝔞₀, off by a
//! factor of 4π; the derivation chain is self-consistent with
//! [`heat_coefficients`], so it wins.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{self, Float, Integer, Rational};
use crate::topology::{chern_numbers, symmetric_functions, ChernData, WeightTriple};
use crate::trig;

/// Coefficients of the p-form heat expansion in dimension n.
///
/// `k` scales 𝔞₀ and the singular term, `k0` scales 𝔞₁, and `k1,k2,k3`
/// weight ‖R‖², |Ric|², τ² inside 𝔞₂.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FormDegreeCoefficients {
    pub n: u32,
    pub p: u32,
    pub k: i64,
    pub k0: i64,
    pub k1: i64,
    pub k2: i64,
    pub k3: i64,
}

fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let mut acc = 1i64;
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// The five Gilkey coefficients for p-forms in even dimension n; binomials
/// with a negative upper index vanish, which covers the small-p rows.
pub fn k_coefficients(n: u32, p: u32) -> FormDegreeCoefficients {
    assert!(n.is_multiple_of(2), "even dimension required");
    assert!(p <= n, "form degree at most the dimension");
    let (ni, pi) = (n as i64, p as i64);
    let c0 = binomial(ni, pi);
    let c1 = binomial(ni - 2, pi - 1);
    let c2 = binomial(ni - 4, pi - 2);
    FormDegreeCoefficients {
        n,
        p,
        k: c0,
        k0: c0 - 6 * c1,
        k1: 2 * c0 - 30 * c1 + 180 * c2,
        k2: -2 * c0 + 180 * c1 - 720 * c2,
        k3: 5 * c0 - 60 * c1 + 180 * c2,
    }
}

/// Weights of τ², |ρ₀|², |B₀|² after rewriting the Riemannian curvature
/// integrand k₁‖R‖² + k₂|Ric|² + k₃τ² through the Kählerian decomposition
/// (m = 2): ‖R‖² = 4(|U|²+|Z|²+|W|²), |ρ₀|² = |Z|², τ² = 24|U|²,
/// |B₀|² = |W|² − |U|².
#[derive(Clone, PartialEq, Debug)]
pub struct CurvatureCombination {
    pub c_tau: Rational,
    pub c_rho: Rational,
    pub c_b: Rational,
}

pub fn curvature_combination(fdc: &FormDegreeCoefficients) -> CurvatureCombination {
    assert_eq!(fdc.n, 4, "the Kählerian rewrite is four-dimensional");
    let (k1, k2, k3) = (fdc.k1, fdc.k2, fdc.k3);
    CurvatureCombination {
        c_tau: Rational::from((k1, 3)) + Rational::from((k2, 4)) + Rational::from(k3),
        c_rho: Rational::from(2 * (2 * k1 + k2)),
        c_b: Rational::from(4 * k1),
    }
}

/// 𝔞₂(Δ_p), exactly, for ∫τ² = `tau_sq_pi2`·π² and singular sum `t`:
/// `(k₁+k₂/2+k₃)·tau_sq_pi2/5760 + k₁·c/180 − (4k₁+k₂)·b/720 + k·t`.
pub fn a2_rational(
    fdc: &FormDegreeCoefficients,
    chern: &ChernData,
    tau_sq_pi2: &Rational,
    t: &Rational,
) -> Rational {
    let (k, k1, k2, k3) = (fdc.k, fdc.k1, fdc.k2, fdc.k3);
    let mut acc = Rational::from((2 * k1 + k2 + 2 * k3, 2 * 5760)) * tau_sq_pi2;
    acc += Rational::from((k1, 180)) * &chern.c;
    acc -= Rational::from((4 * k1 + k2, 720)) * &chern.b;
    acc += Rational::from(k) * t;
    acc
}

/// 𝔞₂(Δ_p) numerically, for an arbitrary real ∫τ² and singular sum.
pub fn a2_real(
    fdc: &FormDegreeCoefficients,
    chern: &ChernData,
    tau_sq: &Float,
    t: &Float,
    prec: u32,
) -> Float {
    let (k, k1, k2, k3) = (fdc.k, fdc.k1, fdc.k2, fdc.k3);
    let pi_sq = exact::pi(prec).square();
    let mut acc = Float::with_val(prec, tau_sq);
    acc *= Float::with_val(prec, Rational::from((2 * k1 + k2 + 2 * k3, 2 * 5760)));
    acc /= &pi_sq;
    acc += Float::with_val(prec, Rational::from((k1, 180)) * &chern.c);
    acc -= Float::with_val(prec, Rational::from((4 * k1 + k2, 720)) * &chern.b);
    let mut sing = Float::with_val(prec, t);
    sing *= Float::with_val(prec, k);
    acc += sing;
    acc
}

/// Heat coefficients of Δ_p at a working precision.
///
/// `a2_exact` is populated when the metric is extremal (no explicit ∫τ²
/// supplied) and the singular sum reconstructed to a rational, since 𝔞₂ is
/// then itself rational.
#[derive(Clone, Debug)]
pub struct HeatCoefficients {
    pub p: u32,
    pub a0: Float,
    pub a1: Float,
    pub a2: Float,
    pub a2_exact: Option<Rational>,
    pub precision: u32,
}

impl HeatCoefficients {
    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "a0": exact::float_decimal(&self.a0),
            "a1": exact::float_decimal(&self.a1),
            "a2": exact::float_decimal(&self.a2),
            "a2_exact": self.a2_exact.as_ref().map(exact::rational_str),
            "precision": self.precision,
        })
    }
}

/// Forward model: 𝔞₀, 𝔞₁, 𝔞₂ of Δ_p for the plane with the given weights and
/// volume. With `tau_sq` absent the metric is taken extremal, i.e.
/// ∫τ² = 96π²·d, the Bochner-Kähler value.
pub fn heat_coefficients(
    w: &WeightTriple,
    vol: &Float,
    p: u32,
    tau_sq: Option<&Float>,
    prec: u32,
) -> Result<HeatCoefficients> {
    if !(vol.is_finite() && vol.is_sign_positive() && !vol.is_zero()) {
        return Err(Error::Domain("volume must be positive".into()));
    }
    let fdc = k_coefficients(4, p);
    let chern = chern_numbers(w);
    let sym = symmetric_functions(w);
    let pi = exact::pi(prec);

    // a0 = k vol / (16 π²)
    let mut a0 = Float::with_val(prec, vol);
    a0 *= Float::with_val(prec, fdc.k);
    a0 /= Float::with_val(prec, 16) * pi.clone().square();

    // a1 = k0 ∫c₁∧ω / (48π), ∫c₁∧ω = (p/√s)√(2 vol)
    let mut c1w = Float::with_val(prec, 2);
    c1w *= vol;
    c1w /= Float::with_val(prec, sym.s);
    c1w.sqrt_mut();
    c1w *= Float::with_val(prec, sym.p);
    let mut a1 = c1w;
    a1 *= Float::with_val(prec, fdc.k0);
    a1 /= Float::with_val(prec, 48) * pi;

    let t = trig::t_direct(w, prec);
    let (a2, a2_exact) = match tau_sq {
        Some(ts) => (a2_real(&fdc, &chern, ts, &t.value, prec), None),
        None => {
            let extremal_pi2 = Rational::from(96) * &chern.d;
            match &t.reconstructed {
                Some(t_rat) => {
                    let exact_a2 = a2_rational(&fdc, &chern, &extremal_pi2, t_rat);
                    (Float::with_val(prec, &exact_a2), Some(exact_a2))
                }
                None => {
                    let mut ts = Float::with_val(prec, &extremal_pi2);
                    ts *= exact::pi(prec).square();
                    (a2_real(&fdc, &chern, &ts, &t.value, prec), None)
                }
            }
        }
    };

    Ok(HeatCoefficients {
        p,
        a0,
        a1,
        a2,
        a2_exact,
        precision: prec,
    })
}

/// Hears ∫c₁² from the 0-form invariants: b = 72·𝔞₁²/𝔞₀, reconstructed to a
/// rational under the given denominator bound and tolerance.
pub fn extract_b(
    a0: &Float,
    a1: &Float,
    max_denominator: &Integer,
    tol: &Float,
) -> Result<Rational> {
    if !(a0.is_sign_positive() && !a0.is_zero() && a0.is_finite()) {
        return Err(Error::Inconsistent("a0 must be positive".into()));
    }
    if !(a1.is_sign_positive() && !a1.is_zero() && a1.is_finite()) {
        return Err(Error::Inconsistent(
            "a1 must be positive (total scalar curvature is positive)".into(),
        ));
    }
    let prec = a0.prec().max(a1.prec());
    let mut x = Float::with_val(prec, a1);
    x.square_mut();
    x *= Float::with_val(prec, 72);
    x /= a0;
    exact::rationalize(&x, max_denominator, tol)
}

/// Hears ∫c₂ from the pair of 𝔞₂ values: −6(𝔞₂(Δ₁) − 4𝔞₂(Δ₀) + b/12).
/// Both ∫τ² and T cancel in this combination, so it is metric-independent.
pub fn extract_c2(
    a2_0: &Float,
    a2_1: &Float,
    b: &Rational,
    max_denominator: &Integer,
    tol: &Float,
) -> Result<Rational> {
    let prec = a2_0.prec().max(a2_1.prec());
    let mut x = Float::with_val(prec, a2_1);
    let mut four_a20 = Float::with_val(prec, a2_0);
    four_a20 *= Float::with_val(prec, 4);
    x -= four_a20;
    x += Float::with_val(prec, Rational::from(b / 12u32));
    x *= Float::with_val(prec, -6);
    exact::rationalize(&x, max_denominator, tol)
}

/// Hears ∫τ² from 𝔞₂(Δ₀): 960π²·(𝔞₂(Δ₀) − c/90 + b/120 − T). A non-positive
/// result cannot come from a metric and is rejected.
pub fn extract_tau_sq(a2_0: &Float, b: &Rational, c: &Rational, t: &Float) -> Result<Float> {
    let prec = a2_0.prec().max(t.prec());
    let mut x = Float::with_val(prec, a2_0);
    x -= Float::with_val(prec, Rational::from(c / 90u32));
    x += Float::with_val(prec, Rational::from(b / 120u32));
    x -= t;
    x *= Float::with_val(prec, 960);
    x *= exact::pi(prec).square();
    if !(x.is_sign_positive() && !x.is_zero()) {
        return Err(Error::Inconsistent(format!(
            "extracted ∫τ² = {x:.6e} is not positive"
        )));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triple(a: u64, b: u64, c: u64) -> WeightTriple {
        WeightTriple::new(a, b, c).unwrap()
    }

    fn fdc0() -> FormDegreeCoefficients {
        k_coefficients(4, 0)
    }

    fn fdc1() -> FormDegreeCoefficients {
        k_coefficients(4, 1)
    }

    #[test]
    fn table_rows_for_p0_and_p1() {
        let f = fdc0();
        assert_eq!((f.k, f.k0, f.k1, f.k2, f.k3), (1, 1, 2, -2, 5));
        let f = fdc1();
        assert_eq!((f.k, f.k0, f.k1, f.k2, f.k3), (4, -2, -22, 172, -40));
    }

    #[test]
    fn k_coefficients_p2_from_formulas() {
        let f = k_coefficients(4, 2);
        assert_eq!((f.k, f.k0, f.k1, f.k2, f.k3), (6, -6, 132, -372, 90));
    }

    #[test]
    fn curvature_combination_rows() {
        let c = curvature_combination(&fdc0());
        assert_eq!(c.c_tau, Rational::from((31, 6)));
        assert_eq!(c.c_rho, Rational::from(4));
        assert_eq!(c.c_b, Rational::from(8));

        let c = curvature_combination(&fdc1());
        assert_eq!(c.c_tau, Rational::from((-13, 3)));
        assert_eq!(c.c_rho, Rational::from(256));
        assert_eq!(c.c_b, Rational::from(-88));

        let zero = FormDegreeCoefficients {
            n: 4,
            p: 0,
            k: 0,
            k0: 0,
            k1: 0,
            k2: 0,
            k3: 0,
        };
        let c = curvature_combination(&zero);
        assert_eq!(c.c_tau, Rational::from(0));
        assert_eq!(c.c_rho, Rational::from(0));
        assert_eq!(c.c_b, Rational::from(0));
    }

    #[test]
    fn a2_rational_coefficients_reduce_to_paper_row_p0() {
        // (k1 + k2/2 + k3)/5760 = 1/960, k1/180 = 1/90, (4k1+k2)/720 = 1/120
        let f = fdc0();
        assert_eq!(
            Rational::from((2 * f.k1 + f.k2 + 2 * f.k3, 2 * 5760)),
            Rational::from((1, 960))
        );
        assert_eq!(Rational::from((f.k1, 180)), Rational::from((1, 90)));
        assert_eq!(
            Rational::from((4 * f.k1 + f.k2, 720)),
            Rational::from((1, 120))
        );
    }

    #[test]
    fn extremal_a2_values() {
        // (1,2,3): a2(Δ0) = 7/30 + 11/540 − 1/20 + 91/864 = 89/288
        let w = triple(1, 2, 3);
        let h0 = heat_coefficients(&w, &Float::with_val(128, 1), 0, None, 128).unwrap();
        assert_eq!(h0.a2_exact.unwrap(), Rational::from((89, 288)));
        // a2(Δ1) = 2d/5 − 11c/90 − 7b/60 + 4T = 31/72
        let h1 = heat_coefficients(&w, &Float::with_val(128, 1), 1, None, 128).unwrap();
        assert_eq!(h1.a2_exact.unwrap(), Rational::from((31, 72)));
        // (1,1,1): a2(Δ0) = 3/10 + 1/30 − 3/40 = 31/120
        let h =
            heat_coefficients(&triple(1, 1, 1), &Float::with_val(128, 1), 0, None, 128).unwrap();
        assert_eq!(h.a2_exact.unwrap(), Rational::from((31, 120)));
        // and a2(Δ1) = −13/60 feeds the extract_c2 example
        let h =
            heat_coefficients(&triple(1, 1, 1), &Float::with_val(128, 1), 1, None, 128).unwrap();
        assert_eq!(h.a2_exact.unwrap(), Rational::from((-13, 60)));
    }

    #[test]
    fn extract_b_from_synthesized_invariants() {
        let tol = Float::with_val(128, 1e-9);
        let bound = Integer::from(100_000_000u64);
        for (w, vol, expect) in [
            (triple(1, 2, 3), Rational::from(1), Rational::from(6)),
            (triple(1, 1, 1), Rational::from((1, 2)), Rational::from(9)),
            (
                triple(5, 7, 11),
                Rational::from(1),
                Rational::from((529, 385)),
            ),
        ] {
            let v = Float::with_val(128, &vol);
            let h = heat_coefficients(&w, &v, 0, None, 128).unwrap();
            assert!(h.a0.is_sign_positive() && h.a1.is_sign_positive());
            let b = extract_b(&h.a0, &h.a1, &bound, &tol).unwrap();
            assert_eq!(b, expect, "weights {w}");
        }
    }

    #[test]
    fn extract_b_explicit_values() {
        // a0 = 1/(16π²), a1 = √3/(24π) → b = 6
        let prec = 128;
        let pi = exact::pi(prec);
        let a0 = Float::with_val(prec, 1) / (Float::with_val(prec, 16) * pi.clone().square());
        let a1 = Float::with_val(prec, 3).sqrt() / (Float::with_val(prec, 24) * pi);
        let b = extract_b(
            &a0,
            &a1,
            &Integer::from(100_000_000u64),
            &Float::with_val(prec, 1e-9),
        )
        .unwrap();
        assert_eq!(b, Rational::from(6));
    }

    #[test]
    fn extract_b_rejects_nonpositive() {
        let x = Float::with_val(128, 1);
        let y = Float::with_val(128, -1);
        let bound = Integer::from(100u32);
        let tol = Float::with_val(128, 1e-9);
        assert!(matches!(
            extract_b(&y, &x, &bound, &tol),
            Err(Error::Inconsistent(_))
        ));
        assert!(matches!(
            extract_b(&x, &y, &bound, &tol),
            Err(Error::Inconsistent(_))
        ));
    }

    #[test]
    fn extract_c2_examples() {
        let tol = Float::with_val(128, 1e-9);
        let bound = Integer::from(100_000_000u64);
        let f = |r: Rational| Float::with_val(128, &r);
        // weights (1,2,3)
        let c = extract_c2(
            &f(Rational::from((89, 288))),
            &f(Rational::from((31, 72))),
            &Rational::from(6),
            &bound,
            &tol,
        )
        .unwrap();
        assert_eq!(c, Rational::from((11, 6)));
        // weights (1,1,1)
        let c = extract_c2(
            &f(Rational::from((31, 120))),
            &f(Rational::from((-13, 60))),
            &Rational::from(9),
            &bound,
            &tol,
        )
        .unwrap();
        assert_eq!(c, Rational::from(3));
        // degenerate zero case: a2_1 = 4 a2_0 and b = 0
        let c = extract_c2(
            &f(Rational::from((1, 4))),
            &f(Rational::from(1)),
            &Rational::from(0),
            &bound,
            &tol,
        )
        .unwrap();
        assert_eq!(c, Rational::from(0));
    }

    #[test]
    fn extract_tau_sq_examples() {
        let prec = 128;
        let f = |r: Rational| Float::with_val(prec, &r);
        let pi_sq = exact::pi(prec).square();

        // extremal (1,2,3): 224π²
        let v = extract_tau_sq(
            &f(Rational::from((89, 288))),
            &Rational::from(6),
            &Rational::from((11, 6)),
            &f(Rational::from((91, 864))),
        )
        .unwrap();
        let expect = Float::with_val(prec, 224) * pi_sq.clone();
        let mut diff = v.clone();
        diff -= &expect;
        diff.abs_mut();
        assert!(diff < Float::with_val(prec, 1e-28));

        // extremal (1,1,1): 288π²
        let v = extract_tau_sq(
            &f(Rational::from((31, 120))),
            &Rational::from(9),
            &Rational::from(3),
            &f(Rational::from(0)),
        )
        .unwrap();
        let expect = Float::with_val(prec, 288) * pi_sq.clone();
        let mut diff = v.clone();
        diff -= &expect;
        diff.abs_mut();
        assert!(diff < Float::with_val(prec, 1e-28));

        // linearity: shifting a2_0 by 1/(960π²) shifts ∫τ² by exactly 1
        let mut shifted = f(Rational::from((31, 120)));
        shifted += Float::with_val(prec, 1) / (Float::with_val(prec, 960) * pi_sq.clone());
        let v2 = extract_tau_sq(
            &shifted,
            &Rational::from(9),
            &Rational::from(3),
            &f(Rational::from(0)),
        )
        .unwrap();
        let mut diff = v2;
        diff -= &v;
        diff -= 1u32;
        diff.abs_mut();
        assert!(diff < Float::with_val(prec, 1e-28));
    }

    #[test]
    fn extract_tau_sq_rejects_negative() {
        let f = |r: Rational| Float::with_val(128, &r);
        let err = extract_tau_sq(
            &f(Rational::from(0)),
            &Rational::from(0),
            &Rational::from(90), // c/90 = 1 pushes the combination negative
            &f(Rational::from(0)),
        )
        .unwrap_err();
        assert!(matches!(err, Error::Inconsistent(_)));
    }

    #[test]
    fn non_extremal_tau_sq_is_threaded_through() {
        let w = triple(1, 2, 3);
        let prec = 128;
        let pi_sq = exact::pi(prec).square();
        let mut ts = Float::with_val(prec, 224) * pi_sq;
        ts += 10u32; // not the extremal value
        let h = heat_coefficients(&w, &Float::with_val(prec, 1), 0, Some(&ts), prec).unwrap();
        assert!(h.a2_exact.is_none());
        // a2 differs from the extremal one by 10/(960π²)
        let extremal = heat_coefficients(&w, &Float::with_val(prec, 1), 0, None, prec).unwrap();
        let mut diff = h.a2.clone();
        diff -= &extremal.a2;
        let expect =
            Float::with_val(prec, 10) / (Float::with_val(prec, 960) * exact::pi(prec).square());
        diff -= &expect;
        diff.abs_mut();
        assert!(diff < Float::with_val(prec, 1e-30));
    }

    #[test]
    fn heat_json_shape() {
        let h =
            heat_coefficients(&triple(1, 2, 3), &Float::with_val(128, 1), 0, None, 128).unwrap();
        let v = h.to_json();
        assert_eq!(v["p"], 0);
        assert_eq!(v["a2_exact"], "89/288");
        assert_eq!(v["precision"], 128);
    }
}
