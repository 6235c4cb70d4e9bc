//! Extremal (Bochner-Kähler) metrics through the moment polytope: exact
//! simplex moments, the extremal scalar curvature as an affine function on
//! the polytope, two independent routes to ∫τ², and the extremality
//! detector.
//!
//! The moment image of the labeled plane is the triangle P_λ² with vertices
//! (−λ,−λ), (2λ,−λ), (−λ,2λ). (The defining inequalities as usually printed,
//! ⟨x,μ_r⟩ − λ ≥ 0 with μ₃ = −e₁−e₂, cut out the empty set for λ > 0; the
//! triangle here is the unique one matching the standard moments
//! vol(P₁²) = 9/2, centroid 0, ∫xᵢ² = 9/4, ∫x₁x₂ = −9/8.)
//!
//! Integrals of polynomials over the triangle are evaluated exactly by an
//! affine change of variables to the standard simplex and the monomial
//! moment formula ∫ uᵃvᵇ du dv = a!·b!/(a+b+2)!. No quadrature, no floating
//! point: both routes to ∫τ² are rational and must agree identically.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{self, Float, Integer, Rational};
use crate::heat::extract_tau_sq;
use crate::topology::{chern_numbers, symmetric_functions, WeightTriple};

/// The moment triangle P_λ² for a Kähler class parameter λ > 0.
#[derive(Clone, PartialEq, Debug)]
pub struct PolytopeSpec {
    pub lambda: Rational,
    pub vertices: [[Rational; 2]; 3],
}

impl PolytopeSpec {
    pub fn new(lambda: Rational) -> Result<Self> {
        if lambda <= 0 {
            return Err(Error::Domain("lambda must be positive".into()));
        }
        let l = &lambda;
        let neg = -l.clone();
        let two = Rational::from(2 * l);
        let vertices = [
            [neg.clone(), neg.clone()],
            [two.clone(), neg.clone()],
            [neg, two],
        ];
        Ok(Self { lambda, vertices })
    }

    /// 9λ²/2.
    pub fn area(&self) -> Rational {
        Rational::from((9, 2)) * Rational::from(&self.lambda * &self.lambda)
    }

    /// The centroid sits at the origin.
    pub fn centroid(&self) -> [Rational; 2] {
        let mut cx = Rational::new();
        let mut cy = Rational::new();
        for v in &self.vertices {
            cx += &v[0];
            cy += &v[1];
        }
        [cx / 3u32, cy / 3u32]
    }
}

fn rat_pow(x: &Rational, e: u32) -> Rational {
    let mut acc = Rational::from(1);
    for _ in 0..e {
        acc *= x;
    }
    acc
}

/// ∫_{P_λ²} x₁^{e1} x₂^{e2} dx, exact; scales as λ^{2+e1+e2}.
pub fn simplex_moment(e1: u32, e2: u32, lambda: &Rational) -> Rational {
    assert!(e1 + e2 <= 8, "moment degree beyond desk scale");
    // x = (3λu − λ, 3λv − λ) maps the standard simplex onto P_λ², with
    // Jacobian 9λ²; expand both binomials and use ∫ uᵃvᵇ = a!b!/(a+b+2)!.
    let mut acc = Rational::new();
    for i in 0..=e1 {
        for j in 0..=e2 {
            let binoms = Integer::from(Integer::binomial_u(e1, i))
                * Integer::from(Integer::binomial_u(e2, j));
            let mut term = Rational::from((binoms, Integer::from(1)));
            term *= Rational::from(Integer::from(Integer::i_pow_u(3, i + j)));
            if (e1 + e2 - i - j) % 2 == 1 {
                term = -term;
            }
            let num = Integer::from(Integer::factorial(i)) * Integer::from(Integer::factorial(j));
            let den = Integer::from(Integer::factorial(i + j + 2));
            term *= Rational::from((num, den));
            acc += term;
        }
    }
    acc *= 9u32;
    acc * rat_pow(lambda, 2 + e1 + e2)
}

/// The extremal scalar curvature τ_λ at a point of the moment polytope:
///
/// ```text
/// τ_λ(x) = (1/λ)·[ (n/(m+1))·Σ_r 1/N̂_r
///                  + (2(m+2)/(m+1))·Σ_j (1/N̂_{m+1} − 1/N̂_j)·x_j/λ ]
/// ```
///
/// with n = 2m and N̂_r the product of the other weights. Only m = 2 is the
/// plane's own geometry; other m just evaluate the displayed coefficients.
pub fn tau_lambda(w: &WeightTriple, m: u32, lambda: &Rational, x: &[Rational; 2]) -> Rational {
    assert!(m >= 1);
    let [n1, n2, n3] = w.weights();
    let s = symmetric_functions(w).s;
    // 1/N̂_r = N_r/s
    let inv_hat = |nr: u64| Rational::from((nr, s));
    let n = 2 * m;
    let mut acc = Rational::from((n, m + 1)) * (inv_hat(n1) + inv_hat(n2) + inv_hat(n3));
    let slope = Rational::from((2 * (m + 2), m + 1));
    for (nj, xj) in [(n1, &x[0]), (n2, &x[1])] {
        let mut term = inv_hat(n3) - inv_hat(nj);
        term *= &slope;
        term *= xj;
        term /= lambda;
        acc += term;
    }
    acc / lambda
}

/// τ₁ for m = 2 written out: (4/(3N₁N₂N₃))·(p + 2N₃(x₁+x₂) − 2N₁x₁ − 2N₂x₂).
pub fn tau1_m2(w: &WeightTriple, x: &[Rational; 2]) -> Rational {
    let [n1, n2, n3] = w.weights();
    let sym = symmetric_functions(w);
    let mut acc = Rational::from(sym.p);
    acc += Rational::from(2 * (n3 as i128 - n1 as i128)) * &x[0];
    acc += Rational::from(2 * (n3 as i128 - n2 as i128)) * &x[1];
    acc * Rational::from((4, 3 * sym.s))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TauSqRoute {
    ClosedForm,
    PolytopeIntegration,
}

impl TauSqRoute {
    fn as_str(&self) -> &'static str {
        match self {
            TauSqRoute::ClosedForm => "closed_form",
            TauSqRoute::PolytopeIntegration => "polytope_integration",
        }
    }
}

/// ∫τ² of the extremal metric as an exact multiple of π².
#[derive(Clone, PartialEq, Debug)]
pub struct TauSqResult {
    pub pi2_coefficient: Rational,
    pub route: TauSqRoute,
}

impl TauSqResult {
    pub fn to_json(&self) -> Value {
        json!({
            "pi2_coefficient": exact::rational_str(&self.pi2_coefficient),
            "route": self.route.as_str(),
        })
    }
}

/// s·(2π)²·∫_{P_λ²}(τ_λ)² dx as a coefficient of π²; independent of λ
/// because τ² integrates scale-invariantly in complex dimension two.
pub fn tau_sq_polytope_at_lambda(w: &WeightTriple, lambda: &Rational) -> Rational {
    let zero = Rational::new();
    let one = Rational::from(1);
    // τ_λ = a + b·x₁ + c·x₂ over P_λ²
    let a = tau_lambda(w, 2, lambda, &[zero.clone(), zero.clone()]);
    let b = tau_lambda(w, 2, lambda, &[one.clone(), zero.clone()]) - &a;
    let c = tau_lambda(w, 2, lambda, &[zero, one]) - &a;
    let m00 = simplex_moment(0, 0, lambda);
    let m10 = simplex_moment(1, 0, lambda);
    let m01 = simplex_moment(0, 1, lambda);
    let m20 = simplex_moment(2, 0, lambda);
    let m02 = simplex_moment(0, 2, lambda);
    let m11 = simplex_moment(1, 1, lambda);
    let mut integral = Rational::from(&a * &a) * m00;
    integral += (2 * Rational::from(&a * &b)) * m10;
    integral += (2 * Rational::from(&a * &c)) * m01;
    integral += Rational::from(&b * &b) * m20;
    integral += Rational::from(&c * &c) * m02;
    integral += (2 * Rational::from(&b * &c)) * m11;
    integral * Rational::from(4 * symmetric_functions(w).s)
}

/// ∫τ² of the extremal metric by the requested route, cross-checked against
/// the other one; they are both exact, so any discrepancy is a bug.
pub fn tau_sq_integral(w: &WeightTriple, route: TauSqRoute) -> Result<TauSqResult> {
    let closed = Rational::from(96 * &chern_numbers(w).d);
    let polytope = tau_sq_polytope_at_lambda(w, &Rational::from(1));
    if closed != polytope {
        return Err(Error::Internal(format!(
            "∫τ² routes disagree on {w}: closed {closed} vs polytope {polytope}"
        )));
    }
    let pi2_coefficient = match route {
        TauSqRoute::ClosedForm => closed,
        TauSqRoute::PolytopeIntegration => polytope,
    };
    Ok(TauSqResult {
        pi2_coefficient,
        route,
    })
}

/// Outcome of the extremality test, with both sides of the comparison.
#[derive(Clone, Debug)]
pub struct ExtremalCheck {
    pub extremal: bool,
    pub extracted: Float,
    pub expected: Float,
    pub expected_pi2_coefficient: Rational,
    pub relative_deviation: Float,
}

impl ExtremalCheck {
    pub fn to_json(&self) -> Value {
        json!({
            "extremal": self.extremal,
            "extracted_tau_sq": exact::float_decimal(&self.extracted),
            "expected_tau_sq": exact::float_decimal(&self.expected),
            "expected_pi2_coefficient": exact::rational_str(&self.expected_pi2_coefficient),
            "relative_deviation": exact::float_decimal(&self.relative_deviation),
        })
    }
}

/// Hears whether the metric is extremal: extracts ∫τ² from 𝔞₂(Δ₀) (with the
/// singular sum supplied by the caller) and compares it to the Bochner-Kähler
/// value 96π²·d within `rel_tol`.
pub fn check_extremal(
    w: &WeightTriple,
    a2_0: &Float,
    t: &Float,
    rel_tol: &Float,
) -> Result<ExtremalCheck> {
    assert!(
        rel_tol.is_sign_positive() && !rel_tol.is_zero(),
        "rel_tol must be > 0"
    );
    let chern = chern_numbers(w);
    let extracted = extract_tau_sq(a2_0, &chern.b, &chern.c, t)?;
    let prec = extracted.prec();
    let expected_pi2_coefficient = Rational::from(96 * &chern.d);
    let mut expected = exact::pi(prec).square();
    expected *= Float::with_val(prec, &expected_pi2_coefficient);
    let mut dev = Float::with_val(prec, &extracted);
    dev /= &expected;
    dev -= 1u32;
    dev.abs_mut();
    Ok(ExtremalCheck {
        extremal: dev <= *rel_tol,
        extracted,
        expected,
        expected_pi2_coefficient,
        relative_deviation: dev,
    })
}
