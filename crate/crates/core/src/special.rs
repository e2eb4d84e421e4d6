//! Special functions: the standard normal, Loader's saddle-point binomial
//! probabilities and the regularized incomplete beta function.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// `ln(2 pi)`.
const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Standard normal cumulative distribution function.
pub fn norm_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Standard normal density.
pub fn norm_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

// ln(k!) - (k + 1/2) ln k + k - ln sqrt(2 pi) for k = 1..=15
#[allow(clippy::excessive_precision)]
const STIRLING_ERRORS: [f64; 15] = [
    0.081_061_466_795_327_258_22,
    0.041_340_695_955_409_294_09,
    0.027_677_925_684_998_339_15,
    0.020_790_672_103_765_093_11,
    0.016_644_691_189_821_192_16,
    0.013_876_128_823_070_747_99,
    0.011_896_709_945_891_770_10,
    0.010_411_265_261_972_096_50,
    0.009_255_462_182_712_732_918,
    0.008_330_563_433_362_871_256,
    0.007_573_675_487_951_840_795,
    0.006_942_840_107_209_529_866,
    0.006_408_994_188_004_207_068,
    0.005_951_370_112_758_847_736,
    0.005_554_733_551_962_801_371,
];

/// Error of Stirling's approximation to `ln k!`.
fn stirling_error(k: u64) -> f64 {
    const S0: f64 = 1.0 / 12.0;
    const S1: f64 = 1.0 / 360.0;
    const S2: f64 = 1.0 / 1260.0;
    const S3: f64 = 1.0 / 1680.0;
    const S4: f64 = 1.0 / 1188.0;
    if k == 0 {
        return 0.0;
    }
    if k <= 15 {
        return STIRLING_ERRORS[k as usize - 1];
    }
    let n = k as f64;
    let nn = n * n;
    if k > 500 {
        (S0 - S1 / nn) / n
    } else if k > 80 {
        (S0 - (S1 - S2 / nn) / nn) / n
    } else if k > 35 {
        (S0 - (S1 - (S2 - S3 / nn) / nn) / nn) / n
    } else {
        (S0 - (S1 - (S2 - (S3 - S4 / nn) / nn) / nn) / nn) / n
    }
}

/// Deviance term `x ln(x / m) + m - x`, evaluated without cancellation when
/// `x` is close to `m`.
fn deviance(x: f64, m: f64) -> f64 {
    if (x - m).abs() < 0.1 * (x + m) {
        let mut v = (x - m) / (x + m);
        let mut s = (x - m) * v;
        if s.abs() < f64::MIN_POSITIVE {
            return s;
        }
        let mut ej = 2.0 * x * v;
        v *= v;
        for j in 1..1000 {
            ej *= v;
            let s1 = s + ej / (2 * j + 1) as f64;
            if s1 == s {
                return s1;
            }
            s = s1;
        }
    }
    x * (x / m).ln() + m - x
}

/// `ln P(X = k)` for `X ~ Binomial(n, p)`, with `q = 1 - p` supplied by the
/// caller so that an accurately formed complement is not lost.
///
/// Relative accuracy of the exponentiated value is a few ulps for any `n`.
pub fn ln_binom_pmf(k: u64, n: u64, p: f64, q: f64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    if p == 0.0 {
        return if k == 0 { 0.0 } else { f64::NEG_INFINITY };
    }
    if q == 0.0 {
        return if k == n { 0.0 } else { f64::NEG_INFINITY };
    }
    let nf = n as f64;
    if k == 0 {
        if n == 0 {
            return 0.0;
        }
        return if p < 0.1 {
            -deviance(nf, nf * q) - nf * p
        } else {
            nf * q.ln()
        };
    }
    if k == n {
        return if q < 0.1 {
            -deviance(nf, nf * p) - nf * q
        } else {
            nf * p.ln()
        };
    }
    let kf = k as f64;
    let lf = LN_2PI + kf.ln() + (-kf / nf).ln_1p();
    saddle_exponent(k, n, p, q) - 0.5 * lf
}

// ln of the pmf without its 1/sqrt(2 pi k (n-k)/n) factor, 0 < k < n
fn saddle_exponent(k: u64, n: u64, p: f64, q: f64) -> f64 {
    let (nf, kf) = (n as f64, k as f64);
    stirling_error(n)
        - stirling_error(k)
        - stirling_error(n - k)
        - deviance_at_product(kf, nf, p)
        - deviance_at_product(nf - kf, nf, q)
}

// deviance(x, n p) with a first-order correction for the rounding of n p
fn deviance_at_product(x: f64, n: f64, p: f64) -> f64 {
    let m = n * p;
    let m_err = n.mul_add(p, -m);
    deviance(x, m) + (1.0 - x / m) * m_err
}

/// `P(X = k)` for `X ~ Binomial(n, p)`; see [`ln_binom_pmf`].
pub fn binom_pmf(k: u64, n: u64, p: f64, q: f64) -> f64 {
    if k == 0 || k >= n || p == 0.0 || q == 0.0 {
        return ln_binom_pmf(k, n, p, q).exp();
    }
    // keep the large ln(2 pi k) out of the exponent
    let (nf, kf) = (n as f64, k as f64);
    saddle_exponent(k, n, p, q).exp() / (2.0 * PI * kf * (nf - kf) / nf).sqrt()
}

/// Outcome of a continued-fraction evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum ContinuedFraction {
    Converged(f64),
    Exhausted,
}

pub(crate) const CF_MAX_ITERATIONS: usize = 500;
const CF_TOLERANCE: f64 = 1e-15;

/// Modified Lentz evaluation of the continued fraction for `I_x(a, b)`,
/// without the `x^a (1-x)^b / (a B(a, b))` prefactor. Converges quickly for
/// `x < (a + 1) / (a + b + 2)`.
pub(crate) fn beta_continued_fraction(a: f64, b: f64, x: f64) -> ContinuedFraction {
    const TINY: f64 = 1e-300;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=CF_MAX_ITERATIONS {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < CF_TOLERANCE {
            return ContinuedFraction::Converged(h);
        }
    }
    ContinuedFraction::Exhausted
}

/// Regularized incomplete beta function `I_x(a, b)` for integer-valued
/// `a, b >= 1`, i.e. the binomial tail `P(Binomial(a + b - 1, x) >= a)`.
///
/// Returns `None` when the continued fraction does not converge within its
/// iteration budget.
pub fn regularized_incomplete_beta(a: u64, b: u64, x: f64) -> Option<f64> {
    incomplete_beta_pq(a, b, x, 1.0 - x)
}

/// [`regularized_incomplete_beta`] with the complement `y = 1 - x` supplied.
pub(crate) fn incomplete_beta_pq(a: u64, b: u64, x: f64, y: f64) -> Option<f64> {
    assert!(
        a >= 1 && b >= 1,
        "integer shape parameters must be positive"
    );
    if x <= 0.0 {
        return Some(0.0);
    }
    if y <= 0.0 {
        return Some(1.0);
    }
    let n = a + b - 1;
    let (af, bf) = (a as f64, b as f64);
    if x < (af + 1.0) / (af + bf + 2.0) {
        // x^a y^b / (a B(a,b)) = y P(Bin(n, x) = a)
        match beta_continued_fraction(af, bf, x) {
            ContinuedFraction::Converged(h) => Some(y * binom_pmf(a, n, x, y) * h),
            ContinuedFraction::Exhausted => None,
        }
    } else {
        match beta_continued_fraction(bf, af, y) {
            ContinuedFraction::Converged(h) => Some(1.0 - x * binom_pmf(b, n, y, x) * h),
            ContinuedFraction::Exhausted => None,
        }
    }
}
