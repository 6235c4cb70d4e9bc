//! Topological invariants of the weighted projective plane CP²(N₁,N₂,N₃).
//!
//! Everything here is a closed form obtained from the fixed-point data of the
//! standard circle action: the isolated fixed point of order N₃ and the
//! orbi-sphere CP¹(N₁,N₂) with normal degree N₃/(N₁N₂). The headline values
//! are the Chern numbers
//!
//! ```text
//! b = ∫ c₁² = (N₁+N₂+N₃)² / (N₁N₂N₃)
//! c = ∫ c₂  = 1/N₁ + 1/N₂ + 1/N₃   (the orbifold Euler characteristic)
//! d = b − 2c = (N₁²+N₂²+N₃²) / (N₁N₂N₃)
//! ```
//!
//! together with the elementary symmetric data (p, q, r, s) of the weights.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{self, Float, Rational};

/// Pairwise-coprime positive weights, stored ascending.
///
/// Any argument order is accepted; the canonical order is N₁ ≤ N₂ ≤ N₃.
/// Weights equal to 1 mark smooth points, so (1,1,1) is plain CP².
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct WeightTriple {
    n: [u64; 3],
}

impl WeightTriple {
    pub fn new(a: u64, b: u64, c: u64) -> Result<Self> {
        if a == 0 || b == 0 || c == 0 {
            return Err(Error::InvalidWeights("weights must be positive".into()));
        }
        let mut n = [a, b, c];
        n.sort_unstable();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            if exact::gcd(n[i], n[j]) != 1 {
                return Err(Error::InvalidWeights(format!(
                    "weights not pairwise coprime: gcd({}, {}) > 1",
                    n[i], n[j]
                )));
            }
        }
        Ok(Self { n })
    }

    pub fn weights(&self) -> [u64; 3] {
        self.n
    }

    pub fn n1(&self) -> u64 {
        self.n[0]
    }

    pub fn n2(&self) -> u64 {
        self.n[1]
    }

    pub fn n3(&self) -> u64 {
        self.n[2]
    }

    /// True exactly for (1,1,1), the smooth projective plane.
    pub fn is_smooth(&self) -> bool {
        self.n == [1, 1, 1]
    }

    pub fn to_json(&self) -> Value {
        json!([self.n[0], self.n[1], self.n[2]])
    }
}

impl fmt::Display for WeightTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.n[0], self.n[1], self.n[2])
    }
}

/// Elementary/power-sum symmetric functions of the weights.
///
/// `p = ΣNᵢ`, `q = ΣNᵢ²`, `r = ΣᵢⱼNᵢNⱼ`, `s = N₁N₂N₃`; they satisfy
/// `p² = q + 2r`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SymmetricData {
    pub p: u64,
    pub q: u64,
    pub r: u64,
    pub s: u64,
}

pub fn symmetric_functions(w: &WeightTriple) -> SymmetricData {
    let [n1, n2, n3] = w.weights();
    let big = |x: u128| -> u64 { u64::try_from(x).expect("symmetric data exceeds 64 bits") };
    let (a, b, c) = (n1 as u128, n2 as u128, n3 as u128);
    SymmetricData {
        p: big(a + b + c),
        q: big(a * a + b * b + c * c),
        r: big(a * b + a * c + b * c),
        s: big(a * b * c),
    }
}

/// The pair of Chern numbers and their difference combination, exact.
#[derive(Clone, PartialEq, Debug)]
pub struct ChernData {
    /// ∫ c₁² = p²/s
    pub b: Rational,
    /// ∫ c₂ = r/s, the orbifold Euler characteristic
    pub c: Rational,
    /// b − 2c = q/s
    pub d: Rational,
}

impl ChernData {
    pub fn to_json(&self) -> Value {
        json!({
            "b": exact::rational_str(&self.b),
            "c": exact::rational_str(&self.c),
            "d": exact::rational_str(&self.d),
        })
    }
}

pub fn chern_numbers(w: &WeightTriple) -> ChernData {
    let sym = symmetric_functions(w);
    let s = sym.s;
    ChernData {
        b: Rational::from((sym.p * sym.p, s)),
        c: Rational::from((sym.r, s)),
        d: Rational::from((sym.q, s)),
    }
}

/// Localization values tied to a choice of Kähler class.
///
/// `sigma_degree` is the degree N₃/(N₁N₂) of the normal orbi-bundle of the
/// minimal orbi-sphere; it is purely topological. Area, volume and ∫c₁∧ω
/// depend on the class, parametrized either by the moment-map range
/// `y_max − y_min` or by the volume. The exact fields are populated when the
/// determining input was rational.
#[derive(Clone, Debug)]
pub struct LocalizationData {
    pub sigma_degree: Rational,
    pub area_sigma: Float,
    pub volume: Float,
    pub c1_wedge_omega: Float,
    pub area_exact: Option<Rational>,
    pub volume_exact: Option<Rational>,
}

/// Evaluates the localization suite from a moment-map range, a volume, or
/// both (in which case they must agree: 2·vol = b_Σ·range²).
pub fn localization_suite(
    w: &WeightTriple,
    y_range: Option<&Rational>,
    vol: Option<&Float>,
    prec: u32,
) -> Result<LocalizationData> {
    let sym = symmetric_functions(w);
    let b_sigma = Rational::from((w.n3(), w.n1() * w.n2()));

    let (volume, area_sigma, area_exact, volume_exact) = match (y_range, vol) {
        (Some(y), maybe_vol) => {
            if *y <= 0 {
                return Err(Error::Domain("y_range must be positive".into()));
            }
            let area = Rational::from(&b_sigma * y);
            let vol_exact = Rational::from(&area * y) / 2u32;
            let vol_f = Float::with_val(prec, &vol_exact);
            if let Some(v) = maybe_vol {
                // both given: enforce 2 vol = b_sigma * range^2
                let mut diff = Float::with_val(prec, v);
                diff -= &vol_f;
                diff.abs_mut();
                let mut scale = Float::with_val(prec, v);
                scale.abs_mut();
                let tol = exact::pow2(prec, -((prec / 2) as i32)) * scale;
                if diff > tol {
                    return Err(Error::Inconsistent(format!(
                        "volume {v} and moment range {y} violate 2·vol = b_Σ·range²"
                    )));
                }
            }
            (
                vol_f,
                Float::with_val(prec, &area),
                Some(area),
                Some(vol_exact),
            )
        }
        (None, Some(v)) => {
            if !(v.is_finite() && v.is_sign_positive() && !v.is_zero()) {
                return Err(Error::Domain("volume must be positive".into()));
            }
            // area^2 = 2 b_sigma vol
            let mut area = Float::with_val(prec, &b_sigma);
            area *= v;
            area *= 2u32;
            area.sqrt_mut();
            (v.clone(), area, None, None)
        }
        (None, None) => {
            return Err(Error::Domain(
                "either y_range or vol must be supplied".into(),
            ))
        }
    };

    // ∫ c₁∧ω = (p/√s)·√(2 vol)
    let mut c1w = Float::with_val(prec, 2);
    c1w *= &volume;
    c1w /= Float::with_val(prec, sym.s);
    c1w.sqrt_mut();
    c1w *= Float::with_val(prec, sym.p);

    Ok(LocalizationData {
        sigma_degree: b_sigma,
        area_sigma,
        volume,
        c1_wedge_omega: c1w,
        area_exact,
        volume_exact,
    })
}
