//! Truncated Taylor arithmetic in derivative convention.
//!
//! A [`Jet`] of order `m` stores `f(t), f'(t), ..., f^(m)(t)`: entry `j` is the
//! `j`-th derivative itself, not the factorial-scaled Taylor coefficient.
//! Binary operations truncate to the smaller of the two orders.
//!
//! Transcendental functions convert to scaled coefficients internally, run
//! the usual coefficient recurrences and convert back.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq)]
pub struct Jet {
    d: Vec<f64>,
}

fn factorials(order: usize) -> Vec<f64> {
    let mut f = Vec::with_capacity(order + 1);
    let mut acc = 1.0;
    f.push(acc);
    for k in 1..=order {
        acc *= k as f64;
        f.push(acc);
    }
    f
}

fn binomial_row(j: usize) -> Vec<f64> {
    let mut row = vec![1.0; j + 1];
    for i in 1..j {
        row[i] = row[i - 1] * (j - i + 1) as f64 / i as f64;
    }
    row
}

impl Jet {
    pub fn constant(value: f64, order: usize) -> Jet {
        let mut d = vec![0.0; order + 1];
        d[0] = value;
        Jet { d }
    }

    /// The independent variable evaluated at `value`.
    pub fn variable(value: f64, order: usize) -> Jet {
        let mut j = Jet::constant(value, order);
        if order >= 1 {
            j.d[1] = 1.0;
        }
        j
    }

    /// Builds a jet from derivative values `f, f', f'', ...`.
    pub fn from_derivatives(d: Vec<f64>) -> Jet {
        assert!(!d.is_empty(), "a jet needs at least a value entry");
        Jet { d }
    }

    fn from_taylor(c: Vec<f64>) -> Jet {
        let f = factorials(c.len() - 1);
        Jet {
            d: c.iter().zip(&f).map(|(c, f)| c * f).collect(),
        }
    }

    fn taylor(&self) -> Vec<f64> {
        let f = factorials(self.order());
        self.d.iter().zip(&f).map(|(d, f)| d / f).collect()
    }

    pub fn order(&self) -> usize {
        self.d.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.d[0]
    }

    /// The `j`-th derivative, if the jet carries it.
    pub fn get(&self, j: usize) -> Option<f64> {
        self.d.get(j).copied()
    }

    pub fn derivatives(&self) -> &[f64] {
        &self.d
    }

    pub fn truncate(&self, order: usize) -> Jet {
        Jet {
            d: self.d[..=order.min(self.order())].to_vec(),
        }
    }

    /// Derivative of the represented function; the order drops by one.
    pub fn derivative(&self) -> Option<Jet> {
        (self.order() >= 1).then(|| Jet {
            d: self.d[1..].to_vec(),
        })
    }

    /// `k`-fold derivative.
    pub fn nth_derivative(&self, k: usize) -> Option<Jet> {
        (self.order() >= k).then(|| Jet {
            d: self.d[k..].to_vec(),
        })
    }

    /// Like [`Jet::derivative`] but reports the missing depth as an error.
    pub fn try_derivative(&self, what: &str) -> Result<Jet> {
        self.derivative().ok_or_else(|| Error::JetDepth {
            what: what.to_string(),
            needed: 1,
            available: 0,
        })
    }

    /// Re-expresses a jet in `t` as a jet in another parameter `s`, given
    /// `dt/ds` as a jet in `t`. Uses `d/ds = (dt/ds) d/dt` repeatedly.
    pub fn reparametrize(&self, dt_ds: &Jet) -> Jet {
        let mut out = vec![self.value()];
        let mut cur = self.clone();
        while let Some(d) = cur.derivative() {
            cur = &d * dt_ds;
            out.push(cur.value());
        }
        Jet { d: out }
    }

    pub fn scale(&self, k: f64) -> Jet {
        Jet {
            d: self.d.iter().map(|v| v * k).collect(),
        }
    }

    pub fn add_scalar(&self, k: f64) -> Jet {
        let mut d = self.d.clone();
        d[0] += k;
        Jet { d }
    }

    pub fn try_recip(&self) -> Result<Jet> {
        Jet::constant(1.0, self.order()).try_div(self)
    }

    pub fn try_div(&self, rhs: &Jet) -> Result<Jet> {
        let b0 = rhs.value();
        if b0 == 0.0 || !b0.is_finite() {
            return Err(Error::Domain {
                op: "division by",
                value: b0,
            });
        }
        let m = self.order().min(rhs.order());
        let a = self.taylor();
        let b = rhs.taylor();
        let mut c = vec![0.0; m + 1];
        for k in 0..=m {
            let mut acc = a[k];
            for j in 1..=k {
                acc -= b[j] * c[k - j];
            }
            c[k] = acc / b0;
        }
        Ok(Jet::from_taylor(c))
    }

    pub fn try_sqrt(&self) -> Result<Jet> {
        let a0 = self.value();
        if !(a0 > 0.0) {
            return Err(Error::Domain {
                op: "sqrt",
                value: a0,
            });
        }
        let a = self.taylor();
        let m = self.order();
        let mut r = vec![0.0; m + 1];
        r[0] = a0.sqrt();
        for k in 1..=m {
            let mut acc = a[k];
            for j in 1..k {
                acc -= r[j] * r[k - j];
            }
            r[k] = acc / (2.0 * r[0]);
        }
        Ok(Jet::from_taylor(r))
    }

    pub fn exp(&self) -> Jet {
        let a = self.taylor();
        let m = self.order();
        let mut e = vec![0.0; m + 1];
        e[0] = a[0].exp();
        for k in 1..=m {
            let acc: f64 = (1..=k).map(|j| j as f64 * a[j] * e[k - j]).sum();
            e[k] = acc / k as f64;
        }
        Jet::from_taylor(e)
    }

    pub fn try_ln(&self) -> Result<Jet> {
        let a0 = self.value();
        if !(a0 > 0.0) {
            return Err(Error::Domain {
                op: "log",
                value: a0,
            });
        }
        let a = self.taylor();
        let m = self.order();
        let mut l = vec![0.0; m + 1];
        l[0] = a0.ln();
        for k in 1..=m {
            let acc: f64 = (1..k).map(|j| (k - j) as f64 * a[j] * l[k - j]).sum();
            l[k] = (a[k] - acc / k as f64) / a0;
        }
        Ok(Jet::from_taylor(l))
    }

    /// Joint recurrence for a pair `(u, v)` with `u' = x' v`, `v' = sign x' u`.
    fn paired(&self, u0: f64, v0: f64, sign: f64) -> (Jet, Jet) {
        let a = self.taylor();
        let m = self.order();
        let mut u = vec![0.0; m + 1];
        let mut v = vec![0.0; m + 1];
        u[0] = u0;
        v[0] = v0;
        for k in 1..=m {
            let mut su = 0.0;
            let mut sv = 0.0;
            for j in 1..=k {
                su += j as f64 * a[j] * v[k - j];
                sv += j as f64 * a[j] * u[k - j];
            }
            u[k] = su / k as f64;
            v[k] = sign * sv / k as f64;
        }
        (Jet::from_taylor(u), Jet::from_taylor(v))
    }

    pub fn sin_cos(&self) -> (Jet, Jet) {
        let x = self.value();
        self.paired(x.sin(), x.cos(), -1.0)
    }

    pub fn sin(&self) -> Jet {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Jet {
        self.sin_cos().1
    }

    pub fn try_tan(&self) -> Result<Jet> {
        let (s, c) = self.sin_cos();
        s.try_div(&c)
    }

    pub fn sinh_cosh(&self) -> (Jet, Jet) {
        let x = self.value();
        self.paired(x.sinh(), x.cosh(), 1.0)
    }

    pub fn sinh(&self) -> Jet {
        self.sinh_cosh().0
    }

    pub fn cosh(&self) -> Jet {
        self.sinh_cosh().1
    }

    /// Integer power by repeated squaring; valid for any base value, except
    /// zero with a negative exponent.
    pub fn try_powi(&self, n: i64) -> Result<Jet> {
        let mut base = if n < 0 { self.try_recip()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Jet::constant(1.0, self.order());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Ok(acc)
    }

    /// Real power with a constant exponent; needs a positive base.
    pub fn try_powf(&self, p: f64) -> Result<Jet> {
        if p.fract() == 0.0 && p.abs() <= 64.0 {
            return self.try_powi(p as i64);
        }
        let a0 = self.value();
        if !(a0 > 0.0) {
            return Err(Error::Domain {
                op: "non-integer power",
                value: a0,
            });
        }
        let a = self.taylor();
        let m = self.order();
        let mut b = vec![0.0; m + 1];
        b[0] = a0.powf(p);
        for k in 1..=m {
            let acc: f64 = (1..=k)
                .map(|j| (p * j as f64 - (k - j) as f64) * a[j] * b[k - j])
                .sum();
            b[k] = acc / (k as f64 * a0);
        }
        Ok(Jet::from_taylor(b))
    }
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet{:?}", self.d)
    }
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        let m = self.order().min(rhs.order());
        Jet {
            d: (0..=m).map(|j| self.d[j] + rhs.d[j]).collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        let m = self.order().min(rhs.order());
        Jet {
            d: (0..=m).map(|j| self.d[j] - rhs.d[j]).collect(),
        }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    /// Leibniz rule on derivative entries.
    fn mul(self, rhs: &Jet) -> Jet {
        let m = self.order().min(rhs.order());
        let d = (0..=m)
            .map(|j| {
                let c = binomial_row(j);
                (0..=j).map(|i| c[i] * self.d[i] * rhs.d[j - i]).sum()
            })
            .collect();
        Jet { d }
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: &Jet) -> Jet {
                (&self).$m(rhs)
            }
        }
        impl $tr<Jet> for &Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        -&self
    }
}
