//! The inverse problem: from spectral data (or from the Chern numbers
//! directly) back to the weights.
//!
//! The route is entirely exact once b, c, d are rational. Since the
//! numerator and denominator of c = r/s are coprime, s = N₁N₂N₃ is read off
//! as the denominator of c; then p = √(s·b), q = s·d, r = s·c are integers,
//! and u = N₁+N₂ solves
//!
//! ```text
//! u³ − 2p·u² + (p²+r)·u + (s − p·r) = 0.
//! ```
//!
//! Each integer root u with 0 < u < p proposes N₃ = p − u, v = s/N₃ and the
//! quadratic t² − ut + v whose roots are N₁, N₂. Validation is exact and a
//! surviving candidate is unique up to permutation; several distinct
//! candidates would contradict the uniqueness theorem and abort loudly.
//! The single root case p² = 3r happens exactly for the smooth plane
//! (1,1,1) and is flagged as `degenerate`.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::exact::{self, Float, Integer, Rational};
use crate::heat::{extract_b, extract_c2};
use crate::topology::{chern_numbers, symmetric_functions, WeightTriple};

/// Heat invariants 𝔞₀(Δ₀), 𝔞₁(Δ₀), 𝔞₂(Δ₀), 𝔞₂(Δ₁) as parsed multiprecision
/// values, plus the denominator bound used for rational reconstruction.
#[derive(Clone, Debug)]
pub struct SpectralInput {
    pub a0: Float,
    pub a1: Float,
    pub a2_0: Float,
    pub a2_1: Float,
    pub max_denominator: Integer,
}

impl SpectralInput {
    pub const DEFAULT_MAX_DENOMINATOR: u64 = 100_000_000;

    /// Parses decimal strings at the given precision. a₀ and a₁ must be
    /// positive (volume and total scalar curvature are).
    pub fn from_decimals(
        a0: &str,
        a1: &str,
        a2_0: &str,
        a2_1: &str,
        prec: u32,
        max_denominator: Option<u64>,
    ) -> Result<Self> {
        let a0 = exact::parse_decimal(a0, prec)?;
        let a1 = exact::parse_decimal(a1, prec)?;
        let a2_0 = exact::parse_decimal(a2_0, prec)?;
        let a2_1 = exact::parse_decimal(a2_1, prec)?;
        if !(a0.is_sign_positive() && !a0.is_zero()) {
            return Err(Error::Inconsistent("a0 must be positive".into()));
        }
        if !(a1.is_sign_positive() && !a1.is_zero()) {
            return Err(Error::Inconsistent("a1 must be positive".into()));
        }
        Ok(Self {
            a0,
            a1,
            a2_0,
            a2_1,
            max_denominator: Integer::from(
                max_denominator.unwrap_or(Self::DEFAULT_MAX_DENOMINATOR),
            ),
        })
    }
}

/// Full audit trail of one recovery.
#[derive(Clone, Debug)]
pub struct RecoveryReport {
    pub weights: WeightTriple,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
    pub p: u64,
    pub q: u64,
    pub r: u64,
    pub s: u64,
    pub cubic_roots: Vec<i64>,
    pub candidates: Vec<WeightTriple>,
    pub degenerate: bool,
}

impl RecoveryReport {
    pub fn to_json(&self) -> Value {
        json!({
            "weights": self.weights.to_json(),
            "b": exact::rational_str(&self.b),
            "c": exact::rational_str(&self.c),
            "d": exact::rational_str(&self.d),
            "p": self.p,
            "q": self.q,
            "r": self.r,
            "s": self.s,
            "cubic_roots": self.cubic_roots,
            "degenerate": self.degenerate,
        })
    }
}

fn rational_to_u64(x: &Rational, what: &str) -> Result<u64> {
    if x.denom() != &1 {
        return Err(Error::Inconsistent(format!(
            "{what} = {x} is not an integer"
        )));
    }
    x.numer()
        .to_u64()
        .ok_or_else(|| Error::Inconsistent(format!("{what} = {x} out of 64-bit range")))
}

/// The exact tier: weights from b = ∫c₁², c = ∫c₂, d = b − 2c.
pub fn recover_from_bcd(b: &Rational, c: &Rational, d: &Rational) -> Result<RecoveryReport> {
    for (x, name) in [(b, "b"), (c, "c"), (d, "d")] {
        if *x <= 0 {
            return Err(Error::Inconsistent(format!(
                "{name} = {x} must be positive"
            )));
        }
    }
    if (b - Rational::from(2 * c)) != *d {
        return Err(Error::Inconsistent(format!(
            "b − 2c = {} disagrees with d = {d}",
            (b - Rational::from(2 * c))
        )));
    }

    // s is the denominator of c: numerator and denominator of r/s are coprime
    let s = c
        .denom()
        .to_u64()
        .ok_or_else(|| Error::Inconsistent("denominator of c out of 64-bit range".into()))?;

    let p_sq = rational_to_u64(&(b * Rational::from(s)), "s·b")?;
    let (p_root, rem) = Integer::from(p_sq).sqrt_rem(Integer::new());
    if rem != 0 {
        return Err(Error::Inconsistent(format!(
            "s·b = {p_sq} is not a perfect square"
        )));
    }
    let p = p_root.to_u64().expect("fits: square root of a u64");
    let q = rational_to_u64(&(d * Rational::from(s)), "s·d")?;
    let r = rational_to_u64(&(c * Rational::from(s)), "s·c")?;
    if p * p != q + 2 * r {
        return Err(Error::Inconsistent(format!(
            "p² = {} but q + 2r = {}",
            p * p,
            q + 2 * r
        )));
    }
    let degenerate = p * p == 3 * r;

    // u³ − 2p·u² + (p²+r)·u + (s − p·r) = 0
    let coeff_a2 = Integer::from(-2) * Integer::from(p);
    let coeff_a1 = Integer::from(p) * Integer::from(p) + Integer::from(r);
    let coeff_a0 = Integer::from(s) - Integer::from(p) * Integer::from(r);
    let roots = exact::integer_cubic_roots(&Integer::from(1), &coeff_a2, &coeff_a1, &coeff_a0)?;

    let mut cubic_roots = Vec::new();
    let mut candidates = Vec::new();
    for root in &roots {
        cubic_roots.push(
            root.to_i64()
                .ok_or_else(|| Error::Inconsistent(format!("cubic root {root} out of range")))?,
        );
        let u = match root.to_u64() {
            Some(u) if u > 0 && u < p => u,
            _ => continue, // weights are positive: 0 < u = N₁+N₂ < p
        };
        let n3 = p - u;
        if s % n3 != 0 {
            continue;
        }
        let v = s / n3;
        // N₁, N₂ are the roots of t² − ut + v
        let disc = match (u * u).checked_sub(4 * v) {
            Some(disc) => disc,
            None => continue,
        };
        let (w_root, w_rem) = Integer::from(disc).sqrt_rem(Integer::new());
        if w_rem != 0 {
            continue;
        }
        let w = w_root.to_u64().expect("fits");
        if (u - w) % 2 != 0 {
            continue;
        }
        let n1 = (u - w) / 2;
        let n2 = (u + w) / 2;
        if n1 == 0 || n1 * n2 != v {
            continue;
        }
        let triple = match WeightTriple::new(n1, n2, n3) {
            Ok(t) => t,
            Err(_) => continue, // not pairwise coprime
        };
        let sym = symmetric_functions(&triple);
        if (sym.p, sym.q, sym.r, sym.s) != (p, q, r, s) {
            continue;
        }
        candidates.push(triple);
    }

    let weights = match candidates.first() {
        None => {
            return Err(Error::Inconsistent(
                "no weight triple reproduces the given Chern numbers".into(),
            ))
        }
        Some(first) => {
            if candidates.iter().any(|t| t != first) {
                return Err(Error::Ambiguous(format!(
                    "distinct candidates {:?} from (b, c, d) = ({b}, {c}, {d})",
                    candidates
                )));
            }
            *first
        }
    };
    if degenerate && !weights.is_smooth() {
        return Err(Error::Ambiguous(format!(
            "p² = 3r must force the smooth plane but produced {weights}"
        )));
    }

    Ok(RecoveryReport {
        weights,
        b: b.clone(),
        c: c.clone(),
        d: d.clone(),
        p,
        q,
        r,
        s,
        cubic_roots,
        candidates,
        degenerate,
    })
}

/// The spectral tier end to end: hear b from (𝔞₀, 𝔞₁), c from the 𝔞₂
/// pair, then recover the weights. `tol` gates the rational
/// reconstructions.
pub fn recover_weights(input: &SpectralInput, tol: &Float) -> Result<RecoveryReport> {
    let b = extract_b(&input.a0, &input.a1, &input.max_denominator, tol)?;
    let c = extract_c2(&input.a2_0, &input.a2_1, &b, &input.max_denominator, tol)?;
    let d = &b - Rational::from(2 * &c);
    recover_from_bcd(&b, &c, &d)
}

/// Three prime weights from b alone.
///
/// D, the denominator of b, is the product of the weights that do not divide
/// p = N₁+N₂+N₃. The case split follows how many primes D carries; in each
/// branch the numerator l of b equals the missing weights times a perfect
/// square, so its squarefree part finishes the job.
pub fn recover_prime(b: &Rational) -> Result<WeightTriple> {
    if *b <= 0 {
        return Err(Error::Inconsistent(format!("b = {b} must be positive")));
    }
    let hypothesis =
        |detail: &str| Error::Inconsistent(format!("not three prime weights: {detail}"));

    let d_int = b
        .denom()
        .to_u64()
        .ok_or_else(|| hypothesis("denominator of b out of 64-bit range"))?;
    let l = b
        .numer()
        .to_u64()
        .ok_or_else(|| hypothesis("numerator of b out of 64-bit range"))?;

    let d_factors = exact::factorize(d_int);
    if d_factors.iter().any(|&(_, e)| e > 1) {
        return Err(hypothesis(&format!(
            "denominator {d_int} of b is not squarefree"
        )));
    }
    let known: Vec<u64> = d_factors.iter().map(|&(p, _)| p).collect();

    let (_, squarefree) = exact::square_decompose(l);
    let candidate: Vec<u64> = match known.len() {
        3 => known,
        2 => {
            // l = p²/N₃ = N₃ · (p/N₃)²
            let mut v = known;
            v.push(squarefree);
            v
        }
        1 => {
            // l = p²/(N₂N₃) = N₂N₃ · (p/(N₂N₃))²
            let rest = exact::factorize(squarefree);
            if rest.len() != 2 {
                return Err(hypothesis(&format!(
                    "squarefree part {squarefree} of the numerator is not a product of two primes"
                )));
            }
            let mut v = known;
            v.extend(rest.iter().map(|&(p, _)| p));
            v
        }
        0 => {
            // b integral: p² is s times a perfect square
            let all = exact::factorize(squarefree);
            if all.len() != 3 {
                return Err(hypothesis(&format!(
                    "squarefree part {squarefree} of b is not a product of three primes"
                )));
            }
            all.iter().map(|&(p, _)| p).collect()
        }
        n => {
            return Err(hypothesis(&format!(
                "denominator of b has {n} prime factors"
            )))
        }
    };

    if !candidate.iter().all(|&w| exact::is_prime(w)) {
        return Err(hypothesis(&format!(
            "candidate weights {candidate:?} are not all prime"
        )));
    }
    let triple = WeightTriple::new(candidate[0], candidate[1], candidate[2])
        .map_err(|e| hypothesis(&e.to_string()))?;
    if chern_numbers(&triple).b != *b {
        return Err(hypothesis(&format!(
            "candidate {triple} does not reproduce b = {b}"
        )));
    }
    Ok(triple)
}

/// Weights from b together with a fixed Euler characteristic, which pins
/// c directly.
pub fn recover_with_chi(b: &Rational, chi: &Rational) -> Result<RecoveryReport> {
    if *chi <= 0 {
        return Err(Error::Inconsistent(format!("χ = {chi} must be positive")));
    }
    let d = b - Rational::from(2 * chi);
    if d <= 0 {
        return Err(Error::Inconsistent(format!(
            "b − 2χ = {d} must be positive"
        )));
    }
    recover_from_bcd(b, chi, &d)
}
