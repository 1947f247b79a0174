//! Parameter feasibility for strongly regular graphs, Moore graph valencies
//! and the generalized quadrangle/octagon inequality.
//!
//! All arithmetic is exact: eigenvalues and multiplicities live in `Q(√D)`
//! where `D = (λ − μ)² + 4(k − μ)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Roots;
use num_rational::Ratio;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graph::SrgParams;

type Q = Ratio<i128>;

/// `a + b√d` with rational `a, b`. `d` is never a nonzero perfect square when
/// `b ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadSurd {
    a: Q,
    b: Q,
    d: i128,
}

impl QuadSurd {
    pub fn rational(a: Q, d: i128) -> Self {
        QuadSurd { a, b: Q::zero(), d }
    }

    pub fn integer(a: i128, d: i128) -> Self {
        QuadSurd::rational(Q::from_integer(a), d)
    }

    /// `√d` itself, folded into the rational part when `d` is a perfect square.
    pub fn sqrt(d: i128) -> Self {
        let root = d.sqrt();
        if root * root == d {
            QuadSurd::integer(root, d)
        } else {
            QuadSurd {
                a: Q::zero(),
                b: Q::from_integer(1),
                d,
            }
        }
    }

    fn scale(self, c: Q) -> Self {
        QuadSurd {
            a: self.a * c,
            b: self.b * c,
            d: self.d,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn as_integer(&self) -> Option<i128> {
        (self.is_rational() && self.a.is_integer()).then(|| self.a.to_integer())
    }

    /// Exact sign.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.cmp(&Q::zero());
        let sb = self.b.cmp(&Q::zero());
        if sb == Ordering::Equal || sa == sb {
            return if sa == Ordering::Equal { sb } else { sa };
        }
        if sa == Ordering::Equal {
            return sb;
        }
        // opposite signs: compare a² with b²d
        let a2 = self.a * self.a;
        let b2d = self.b * self.b * Q::from_integer(self.d);
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => Ordering::Equal,
        }
    }

    pub fn to_f64(&self) -> f64 {
        let r = |q: Q| *q.numer() as f64 / *q.denom() as f64;
        r(self.a) + r(self.b) * (self.d as f64).sqrt()
    }
}

impl Add for QuadSurd {
    type Output = QuadSurd;
    fn add(self, o: QuadSurd) -> QuadSurd {
        QuadSurd {
            a: self.a + o.a,
            b: self.b + o.b,
            d: self.d,
        }
    }
}

impl Sub for QuadSurd {
    type Output = QuadSurd;
    fn sub(self, o: QuadSurd) -> QuadSurd {
        self + (-o)
    }
}

impl Neg for QuadSurd {
    type Output = QuadSurd;
    fn neg(self) -> QuadSurd {
        QuadSurd {
            a: -self.a,
            b: -self.b,
            d: self.d,
        }
    }
}

impl Mul for QuadSurd {
    type Output = QuadSurd;
    fn mul(self, o: QuadSurd) -> QuadSurd {
        QuadSurd {
            a: self.a * o.a + self.b * o.b * Q::from_integer(self.d),
            b: self.a * o.b + self.b * o.a,
            d: self.d,
        }
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.a);
        }
        let den = num_integer::lcm(*self.a.denom(), *self.b.denom());
        let a = (self.a * Q::from_integer(den)).to_integer();
        let b = (self.b * Q::from_integer(den)).to_integer();
        let mut s = String::new();
        if a != 0 {
            s.push_str(&a.to_string());
        }
        s.push(if b < 0 {
            '-'
        } else if a != 0 {
            '+'
        } else {
            ' '
        });
        let s = s.trim_end().to_string();
        let coef = if b.abs() == 1 {
            String::new()
        } else {
            b.abs().to_string()
        };
        let body = format!("{s}{coef}sqrt({})", self.d);
        if den == 1 {
            write!(f, "{body}")
        } else {
            write!(f, "({body})/{den}")
        }
    }
}

/// Nontrivial eigenvalues `r > s` with multiplicities `f`, `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SrgSpectrum {
    pub r: QuadSurd,
    pub s: QuadSurd,
    pub f: QuadSurd,
    pub g_mult: QuadSurd,
    pub discriminant: i128,
}

impl SrgSpectrum {
    /// Closed forms for the eigenvalues and multiplicities of `p`, or `None`
    /// when the discriminant is not positive.
    pub fn of(p: &SrgParams) -> Option<SrgSpectrum> {
        let (n, k, l, m) = (p.n as i128, p.k as i128, p.lambda as i128, p.mu as i128);
        let d = (l - m) * (l - m) + 4 * (k - m);
        if d <= 0 {
            return None;
        }
        let half = Q::new(1, 2);
        let root = QuadSurd::sqrt(d);
        let lm = QuadSurd::integer(l - m, d);
        let r = (lm + root).scale(half);
        let s = (lm - root).scale(half);
        // (2k + (n−1)(λ−μ))/√D = (2k + (n−1)(λ−μ))·√D / D
        let skew = root.scale(Q::new(2 * k + (n - 1) * (l - m), d));
        let nm1 = QuadSurd::integer(n - 1, d);
        Some(SrgSpectrum {
            r,
            s,
            f: (nm1 - skew).scale(half),
            g_mult: (nm1 + skew).scale(half),
            discriminant: d,
        })
    }

    /// `λ − μ = −1` and `2k = n − 1`: `f = g = (n − 1)/2` with irrational eigenvalues allowed.
    pub fn is_conference(p: &SrgParams) -> bool {
        p.lambda + 1 == p.mu && 2 * p.k + 1 == p.n
    }

    pub fn multiplicities(&self) -> Option<(u64, u64)> {
        let f = self.f.as_integer()?;
        let g = self.g_mult.as_integer()?;
        (f >= 0 && g >= 0).then_some((f as u64, g as u64))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    /// `k(k − λ − 1) = (n − k − 1)μ` with `λ < k`, `μ ≤ k < n`.
    CountingIdentity,
    /// `f`, `g` nonnegative integers.
    Integrality,
    /// `(r+1)(k+r+2rs) ≤ (k+r)(s+1)²` and `(s+1)(k+s+2rs) ≤ (k+s)(r+1)²`.
    Krein,
    /// `n ≤ f(f+3)/2` and `n ≤ g(g+3)/2`.
    AbsoluteBound,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SrgVerdict {
    pub params: SrgParams,
    pub spectrum: Option<SrgSpectrum>,
    pub failed: Vec<Condition>,
    pub conference: bool,
    /// `μ = 0` or `μ = k`: the graph or its complement is disconnected.
    pub imprimitive: bool,
}

impl SrgVerdict {
    pub fn feasible(&self) -> bool {
        self.failed.is_empty()
    }

    pub fn flags(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.conference {
            out.push("conference");
        }
        if self.imprimitive {
            out.push("imprimitive");
        }
        if let Some(s) = &self.spectrum {
            if !s.r.is_rational() {
                out.push("irrational");
            }
        }
        out
    }
}

/// Runs the four-condition battery on `p`. Infeasibility is a verdict, not an error.
pub fn srg_feasible(p: &SrgParams) -> SrgVerdict {
    let mut failed = Vec::new();
    if !p.satisfies_counting_identity() {
        failed.push(Condition::CountingIdentity);
    }
    let spectrum = SrgSpectrum::of(p);
    match &spectrum {
        None => {
            failed.extend([
                Condition::Integrality,
                Condition::Krein,
                Condition::AbsoluteBound,
            ]);
        }
        Some(sp) => {
            if sp.multiplicities().is_none() {
                failed.push(Condition::Integrality);
            }
            let d = sp.discriminant;
            let k = QuadSurd::integer(p.k as i128, d);
            let one = QuadSurd::integer(1, d);
            let two = QuadSurd::integer(2, d);
            let (r, s) = (sp.r, sp.s);
            let rs2 = two * r * s;
            let krein1 = (k + r) * (s + one) * (s + one) - (r + one) * (k + r + rs2);
            let krein2 = (k + s) * (r + one) * (r + one) - (s + one) * (k + s + rs2);
            if krein1.signum() == Ordering::Less || krein2.signum() == Ordering::Less {
                failed.push(Condition::Krein);
            }
            let n = QuadSurd::integer(p.n as i128, d);
            let three = QuadSurd::integer(3, d);
            let half = Q::new(1, 2);
            let bound = |m: QuadSurd| (m * (m + three)).scale(half) - n;
            if bound(sp.f).signum() == Ordering::Less || bound(sp.g_mult).signum() == Ordering::Less
            {
                failed.push(Condition::AbsoluteBound);
            }
        }
    }
    SrgVerdict {
        params: *p,
        spectrum,
        failed,
        conference: SrgSpectrum::is_conference(p),
        imprimitive: p.mu == 0 || p.mu == p.k,
    }
}

/// Feasible parameter sets with `5 ≤ n ≤ max_n` and `1 ≤ k ≤ n − 2`, sorted by
/// `(n, k, λ, μ)`. Imprimitive sets that pass the battery are included and flagged.
pub fn enumerate_feasible(max_n: u64) -> Vec<SrgVerdict> {
    let mut out: Vec<SrgVerdict> = (5..=max_n.max(4))
        .into_par_iter()
        .flat_map_iter(|n| {
            let mut local = Vec::new();
            for k in 1..=n - 2 {
                for lambda in 0..k {
                    let num = k * (k - lambda - 1);
                    let den = n - k - 1;
                    if num % den != 0 {
                        continue;
                    }
                    let mu = num / den;
                    if mu > k {
                        continue;
                    }
                    let v = srg_feasible(&SrgParams::new(n, k, lambda, mu));
                    if v.feasible() {
                        local.push(v);
                    }
                }
            }
            local
        })
        .collect();
    out.sort_by_key(|v| v.params);
    out
}

/// Valencies `k ∈ [2, k_max]` for which `(k² + 1, k, 0, 1)` is feasible.
pub fn moore_valencies(k_max: u64) -> Vec<u64> {
    (2..=k_max)
        .filter(|&k| srg_feasible(&SrgParams::new(k * k + 1, k, 0, 1)).feasible())
        .collect()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FeasibilityError {
    #[error("gonality {0} is not one of 2, 3, 4, 6, 8")]
    Gonality(u32),
    #[error("the inequality is stated for quadrangles and octagons only, got gonality {0}")]
    NotQuadrangleOrOctagon(u32),
    #[error("s and t must be positive, with t > 1")]
    Order,
}

/// Generalized polygon orders: `s + 1` points per line, `t + 1` lines per point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GenPolygonParams {
    #[serde(rename = "s")]
    pub s_pts: u64,
    #[serde(rename = "t")]
    pub t_lines: u64,
    pub gon: u32,
}

impl GenPolygonParams {
    pub fn new(s_pts: u64, t_lines: u64, gon: u32) -> Result<Self, FeasibilityError> {
        if ![2, 3, 4, 6, 8].contains(&gon) {
            return Err(FeasibilityError::Gonality(gon));
        }
        if s_pts == 0 || t_lines == 0 {
            return Err(FeasibilityError::Order);
        }
        Ok(GenPolygonParams {
            s_pts,
            t_lines,
            gon,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GqVerdict {
    pub params: GenPolygonParams,
    /// `s ≤ t²`.
    pub pass: bool,
    /// `t ≤ s²`, reported when `s > 1`.
    pub dual_pass: Option<bool>,
}

pub fn gq_bound(p: &GenPolygonParams) -> Result<GqVerdict, FeasibilityError> {
    if p.gon != 4 && p.gon != 8 {
        return Err(FeasibilityError::NotQuadrangleOrOctagon(p.gon));
    }
    if p.t_lines <= 1 {
        return Err(FeasibilityError::Order);
    }
    let (s, t) = (p.s_pts as u128, p.t_lines as u128);
    Ok(GqVerdict {
        params: *p,
        pass: s <= t * t,
        dual_pass: (s > 1).then_some(t <= s * s),
    })
}
