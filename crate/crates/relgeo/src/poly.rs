//! Dense integer polynomials: arithmetic, exact division, gcd by the
//! primitive pseudo-remainder sequence, and fraction-free determinants.
//! Exact arithmetic only — these feed the rational growth series.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Coefficients in ascending degree order, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly(pub Vec<BigInt>);

impl Poly {
    pub fn zero() -> Poly {
        Poly(Vec::new())
    }

    pub fn one() -> Poly {
        Poly(vec![BigInt::one()])
    }

    pub fn constant(c: impl Into<BigInt>) -> Poly {
        let c = c.into();
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly(vec![c])
        }
    }

    pub fn x() -> Poly {
        Poly(vec![BigInt::zero(), BigInt::one()])
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Poly {
        let mut p = Poly(coeffs);
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn leading(&self) -> BigInt {
        self.0.last().cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeff(&self, n: usize) -> BigInt {
        self.0.get(n).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) + other.coeff(i));
        }
        Poly::from_coeffs(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i) - other.coeff(i));
        }
        Poly::from_coeffs(out)
    }

    pub fn neg(&self) -> Poly {
        Poly(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }

    pub fn scale(&self, c: &BigInt) -> Poly {
        Poly::from_coeffs(self.0.iter().map(|a| a * c).collect())
    }

    /// Division with the guarantee that it is exact; panics otherwise
    /// (callers only divide by known factors).
    pub fn div_exact(&self, d: &Poly) -> Poly {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Poly::zero();
        }
        let mut rem = self.0.clone();
        let dd = d.degree().unwrap();
        let nd = self.degree().unwrap();
        assert!(nd >= dd, "inexact polynomial division");
        let mut q = vec![BigInt::zero(); nd - dd + 1];
        let lead = d.leading();
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] / &lead;
            assert!(&c * &lead == rem[k + dd], "inexact polynomial division");
            q[k] = c.clone();
            for (i, dc) in d.0.iter().enumerate() {
                let v = &c * dc;
                rem[k + i] -= v;
            }
        }
        assert!(rem.iter().all(|c| c.is_zero()), "inexact polynomial division");
        Poly::from_coeffs(q)
    }

    /// Integer content (gcd of coefficients), nonnegative.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.0 {
            g = int_gcd(&g, c);
        }
        g
    }

    pub fn primitive_part(&self) -> Poly {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        Poly(self.0.iter().map(|a| a / &c).collect())
    }

    /// Pseudo-remainder of self by d (premultiplying so the division is
    /// integral).
    fn pseudo_rem(&self, d: &Poly) -> Poly {
        let dd = d.degree().unwrap();
        let mut r = self.clone();
        let lead = d.leading();
        while let Some(dr) = r.degree() {
            if dr < dd {
                break;
            }
            let shift = dr - dd;
            let c = r.leading();
            // r := lead·r − c·x^shift·d
            let mut next = r.scale(&lead).0;
            for (i, dc) in d.0.iter().enumerate() {
                next[shift + i] -= &c * dc;
            }
            r = Poly::from_coeffs(next);
        }
        r
    }

    /// Polynomial gcd over the integers (primitive PRS), with positive
    /// leading coefficient.
    pub fn gcd(&self, other: &Poly) -> Poly {
        if self.is_zero() {
            return make_lead_positive(other.clone());
        }
        if other.is_zero() {
            return make_lead_positive(self.clone());
        }
        let content = int_gcd(&self.content(), &other.content());
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        loop {
            let r = a.pseudo_rem(&b);
            if r.is_zero() {
                return make_lead_positive(b.primitive_part().scale(&content));
            }
            a = b;
            b = r.primitive_part();
        }
    }

    /// Taylor coefficients of self / den as a power series (den(0) = ±1).
    pub fn series_div(&self, den: &Poly, n: usize) -> Vec<BigInt> {
        let d0 = den.coeff(0);
        assert!(d0.is_one() || (-&d0).is_one(), "denominator constant term must be ±1");
        let mut out = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.coeff(k);
            for j in 1..=k {
                acc -= den.coeff(j) * &out[k - j];
            }
            out.push(acc / &d0);
        }
        out
    }

    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = match i {
                0 => c.to_string(),
                1 if c.is_one() => var.to_string(),
                1 if (-c).is_one() => format!("-{var}"),
                1 => format!("{c}*{var}"),
                _ if c.is_one() => format!("{var}^{i}"),
                _ if (-c).is_one() => format!("-{var}^{i}"),
                _ => format!("{c}*{var}^{i}"),
            };
            parts.push(term);
        }
        let mut s = parts[0].clone();
        for p in &parts[1..] {
            if let Some(stripped) = p.strip_prefix('-') {
                s.push_str(" - ");
                s.push_str(stripped);
            } else {
                s.push_str(" + ");
                s.push_str(p);
            }
        }
        s
    }
}

fn make_lead_positive(p: Poly) -> Poly {
    if p.leading().is_negative() {
        p.neg()
    } else {
        p
    }
}

fn int_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let mut a = a.abs();
    let mut b = b.abs();
    while !b.is_zero() {
        let r = &a % &b;
        a = b;
        b = r;
    }
    a
}

/// Fraction-free (Bareiss) determinant of a square polynomial matrix.
pub fn determinant(mut m: Vec<Vec<Poly>>) -> Poly {
    let n = m.len();
    if n == 0 {
        return Poly::one();
    }
    let mut sign = false;
    let mut prev = Poly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = !sign;
                }
                None => return Poly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.div_exact(&prev);
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        det.neg()
    } else {
        det
    }
}

/// Reduced rational function with den(0) = 1 and nonnegative-sense
/// normalization; Taylor coefficients are exact word counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeries {
    pub num: Poly,
    pub den: Poly,
}

impl RationalSeries {
    pub fn new(num: Poly, den: Poly) -> RationalSeries {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return RationalSeries { num, den: Poly::one() };
        }
        let g = num.gcd(&den);
        let mut num = num.div_exact(&g);
        let mut den = den.div_exact(&g);
        let d0 = den.coeff(0);
        if (-&d0).is_one() {
            num = num.neg();
            den = den.neg();
        } else {
            assert!(d0.is_one(), "denominator constant term must be ±1 after reduction");
        }
        RationalSeries { num, den }
    }

    pub fn coefficients(&self, n: usize) -> Vec<BigInt> {
        self.num.series_div(&self.den, n)
    }

    pub fn render(&self) -> String {
        format!("({}) / ({})", self.num.render("z"), self.den.render("z"))
    }
}
