//! Moebius maps `x -> (ax + b)/(cx + d)` acting on `[0, 1]`.
//!
//! Maps with `a, b >= 0`, `c, d > 0` and `ad - bc != 0` form a semigroup under
//! composition. The sign of `ad - bc` decides the shape on `[0, 1]`: a
//! negative sign means decreasing and convex, a positive sign increasing and
//! concave. The two families used by the gcd operator are
//! `mu_k(x) = x/(x + 2^k)` (sign +1) and `nu_k(x) = 1/(2^k x + 1)` (sign -1).

use crate::error::{Error, Result};

/// Largest `k` for which `2^k` and `2^{2k}`-scaled coefficients stay exact
/// and the maps keep a nonzero determinant in double precision.
pub const MAX_K: u32 = 62;

/// `2^k` as an exact float.
#[inline]
pub fn pow2(k: u32) -> f64 {
    f64::from_bits(((1023 + k as u64) & 0x7ff) << 52)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MoebiusMap {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl MoebiusMap {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let finite = [a, b, c, d].iter().all(|v| v.is_finite());
        if !finite || a < 0.0 || b < 0.0 || !(c > 0.0) || !(d > 0.0) {
            return Err(Error::Moebius(format!(
                "coefficients ({a}, {b}, {c}, {d}) need a, b >= 0 and c, d > 0"
            )));
        }
        if a * d - b * c == 0.0 {
            return Err(Error::Moebius(format!("({a}, {b}, {c}, {d}) is degenerate")));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn identity() -> Self {
        Self { a: 1.0, b: 0.0, c: 0.0, d: 1.0 }
    }

    pub fn coefficients(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn determinant(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    /// `signum(ad - bc)`; never 0.
    pub fn sign(&self) -> i8 {
        if self.determinant() > 0.0 {
            1
        } else {
            -1
        }
    }

    #[inline]
    pub fn apply(&self, x: f64) -> f64 {
        (self.a * x + self.b) / (self.c * x + self.d)
    }

    /// Sup norm on `[0, 1]`; the map is monotone so an endpoint attains it.
    pub fn sup_norm(&self) -> f64 {
        (self.b / self.d).abs().max(((self.a + self.b) / (self.c + self.d)).abs())
    }

    /// `|ad - bc| / (cd)`, the per-term quantity of the derivative-summability
    /// condition. Invariant under rescaling of the coefficients.
    pub fn derivative_weight(&self) -> f64 {
        self.determinant().abs() / (self.c * self.d)
    }

    /// Same function with all four coefficients multiplied by `factor > 0`;
    /// used to fold a positive series weight into a term.
    pub fn scaled_numerator(&self, factor: f64) -> Result<Self> {
        Self::new(self.a * factor, self.b * factor, self.c, self.d)
    }
}

/// `outer(inner(x))` as a matrix product. Coefficients are divided by their
/// largest magnitude so repeated compositions do not drift toward overflow.
pub fn compose(outer: &MoebiusMap, inner: &MoebiusMap) -> Result<MoebiusMap> {
    let a = outer.a * inner.a + outer.b * inner.c;
    let b = outer.a * inner.b + outer.b * inner.d;
    let c = outer.c * inner.a + outer.d * inner.c;
    let d = outer.c * inner.b + outer.d * inner.d;
    let scale = a.abs().max(b.abs()).max(c.abs()).max(d.abs());
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::Moebius("composition overflowed".into()));
    }
    MoebiusMap::new(a / scale, b / scale, c / scale, d / scale)
}

fn check_k(k: u32) -> Result<()> {
    if (1..=MAX_K).contains(&k) {
        Ok(())
    } else {
        Err(Error::Parameter(format!("k = {k} outside 1..={MAX_K}")))
    }
}

/// `mu_k(x) = x / (x + 2^k)`.
pub fn mu(k: u32) -> Result<MoebiusMap> {
    check_k(k)?;
    MoebiusMap::new(1.0, 0.0, 1.0, pow2(k))
}

/// `nu_k(x) = 1 / (2^k x + 1)`.
pub fn nu(k: u32) -> Result<MoebiusMap> {
    check_k(k)?;
    MoebiusMap::new(0.0, 1.0, pow2(k), 1.0)
}

/// A finite signed sum `sum_i eps_i m_i` whose terms satisfy
/// `eps_i * sign(m_i) < 0`, so every term is decreasing and convex.
#[derive(Clone, Debug, Default)]
pub struct MoebiusSeries {
    terms: Vec<(i8, MoebiusMap)>,
}

impl MoebiusSeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, eps: i8, m: MoebiusMap) -> Result<()> {
        if eps != 1 && eps != -1 {
            return Err(Error::Moebius(format!("term sign {eps} must be +1 or -1")));
        }
        if eps * m.sign() >= 0 {
            return Err(Error::Moebius(format!(
                "term with eps = {eps} and sign(m) = {} is not decreasing-convex",
                m.sign()
            )));
        }
        self.terms.push((eps, m));
        Ok(())
    }

    pub fn terms(&self) -> &[(i8, MoebiusMap)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.terms.iter().rev().map(|(e, m)| f64::from(*e) * m.apply(x)).sum()
    }

    /// The series for `g_1` truncated after `k_max` values of `k`:
    /// `+2^-k nu_k - 2^-k mu_k`, i.e. `1/(2^k + 2^{2k} x) - x/(2^k x + 2^{2k})`.
    pub fn g1_truncated(k_max: u32) -> Result<Self> {
        check_k(k_max)?;
        let mut s = Self::new();
        for k in 1..=k_max {
            let w = 1.0 / pow2(k);
            s.push(1, MoebiusMap::new(0.0, 1.0, pow2(k), 1.0)?.scaled_numerator(w)?)?;
            s.push(-1, mu(k)?.scaled_numerator(w)?)?;
        }
        Ok(s)
    }
}

/// Partial sums `(sum ||m_i||_inf, sum |a_i d_i - b_i c_i| / (c_i d_i))` of
/// the two summability conditions over the finite term list.
pub fn s_condition_partial_sums(s: &MoebiusSeries) -> (f64, f64) {
    s.terms.iter().rev().fold((0.0, 0.0), |(sup, der), (_, m)| {
        (sup + m.sup_norm(), der + m.derivative_weight())
    })
}

/// `g_1(x) = sum_{k=1..K} 2^-k (1/(1 + 2^k x) - x/(x + 2^k))`, summed from the
/// smallest term up. The omitted tail is at most `2^-K`.
pub fn g1_series(x: f64, k_max: u32) -> f64 {
    (1..=k_max.min(1023))
        .rev()
        .map(|k| {
            let p = pow2(k);
            (1.0 / (1.0 + p * x) - x / (x + p)) / p
        })
        .sum()
}
