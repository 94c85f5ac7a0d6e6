//! Truncated univariate Taylor arithmetic.
//!
//! A [`Jet`] stores the Taylor coefficients `f(x0), f'(x0), f''(x0)/2!, ...`
//! of a function at a point, up to a fixed order. Composing jets through
//! `+ - * /`, `powf` and `exp` propagates derivatives exactly (to rounding),
//! which gives machine-accurate high-order derivatives of the compactly
//! supported cutoff functions without symbolic algebra.

/// Taylor coefficients `c[k] = f^(k)(x0) / k!` up to a fixed truncation order.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    c: Vec<f64>,
}

impl Jet {
    /// The constant function `a`.
    pub fn constant(a: f64, order: usize) -> Self {
        let mut c = vec![0.0; order + 1];
        c[0] = a;
        Jet { c }
    }

    /// The identity `x`, expanded at `x0`.
    pub fn variable(x0: f64, order: usize) -> Self {
        let mut c = vec![0.0; order + 1];
        c[0] = x0;
        if order >= 1 {
            c[1] = 1.0;
        }
        Jet { c }
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// `k!`-rescaled coefficient, i.e. the k-th derivative at `x0`.
    pub fn derivative(&self, k: usize) -> f64 {
        assert!(k <= self.order());
        self.c[k] * factorial(k)
    }

    pub fn add(&self, rhs: &Jet) -> Jet {
        self.zip(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Jet) -> Jet {
        self.zip(rhs, |a, b| a - b)
    }

    pub fn mul(&self, rhs: &Jet) -> Jet {
        let order = self.order().min(rhs.order());
        let mut c = vec![0.0; order + 1];
        for k in 0..=order {
            let mut acc = 0.0;
            for j in 0..=k {
                acc += self.c[j] * rhs.c[k - j];
            }
            c[k] = acc;
        }
        Jet { c }
    }

    pub fn scale(&self, t: f64) -> Jet {
        Jet { c: self.c.iter().map(|x| x * t).collect() }
    }

    /// `self^a` for real exponent `a`; requires a nonzero leading value.
    /// Recurrence from `f h' = a h f'`:
    /// `h_k = (1/(k f_0)) * sum_{j=1..k} ((a+1) j - k) f_j h_{k-j}`.
    pub fn powf(&self, a: f64) -> Jet {
        let order = self.order();
        let f0 = self.c[0];
        assert!(f0 != 0.0, "powf of a jet with zero value");
        let mut h = vec![0.0; order + 1];
        h[0] = f0.powf(a);
        for k in 1..=order {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += ((a + 1.0) * j as f64 - k as f64) * self.c[j] * h[k - j];
            }
            h[k] = acc / (k as f64 * f0);
        }
        Jet { c: h }
    }

    /// `exp(self)`. Recurrence `h_k = (1/k) sum_{j=1..k} j f_j h_{k-j}`.
    pub fn exp(&self) -> Jet {
        let order = self.order();
        let mut h = vec![0.0; order + 1];
        h[0] = self.c[0].exp();
        for k in 1..=order {
            let mut acc = 0.0;
            for j in 1..=k {
                acc += j as f64 * self.c[j] * h[k - j];
            }
            h[k] = acc / k as f64;
        }
        Jet { c: h }
    }

    fn zip(&self, rhs: &Jet, f: impl Fn(f64, f64) -> f64) -> Jet {
        let order = self.order().min(rhs.order());
        let c = (0..=order).map(|k| f(self.c[k], rhs.c[k])).collect();
        Jet { c }
    }
}

pub fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// Factorial of the total order of a multi-index, `|alpha|!`.
pub fn multi_total_factorial(alpha: &[usize]) -> f64 {
    factorial(alpha.iter().sum())
}

/// Componentwise factorial `alpha! = alpha_1! * ... * alpha_d!`.
pub fn multi_factorial(alpha: &[usize]) -> f64 {
    alpha.iter().map(|&a| factorial(a)).product()
}
