//! Exact characteristic polynomials of incidence matrices, Perron root
//! isolation, the spectral dimension formula for the graph-directed
//! attractors, and the algebraic certificate that the boundary
//! intersection dimension never equals 𝔰−1.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::buchi::{BuchiAutomaton, Cardinality};
use crate::line::LineParams;
use crate::{Error, Result};

/// Absolute tolerance for root bisection. Overridable through the
/// `TWINDRAGON_TOL` environment variable.
pub const ROOT_TOL_DEFAULT: f64 = 1e-12;
/// Tolerance for reported numeric comparisons (gap checks).
pub const CMP_TOL: f64 = 1e-9;

pub fn root_tol() -> f64 {
    std::env::var("TWINDRAGON_TOL")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(ROOT_TOL_DEFAULT)
}

/// A polynomial with arbitrary-precision integer coefficients,
/// ascending by degree. The zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntPolynomial {
    pub coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn from_i64(coeffs: &[i64]) -> Self {
        let mut coeffs: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Coefficient strings, ascending by degree.
    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl std::fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {sign} ")?;
            }
            let show_mag = !mag.is_one() || k == 0;
            if show_mag {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Exact monic characteristic polynomial det(xI − M) of a square
/// nonnegative integer matrix, by the Faddeev–LeVerrier recurrence.
/// All intermediate divisions are exact.
pub fn char_poly(m: &[Vec<u64>]) -> IntPolynomial {
    let n = m.len();
    for row in m {
        assert_eq!(row.len(), n, "matrix must be square");
    }
    if n == 0 {
        return IntPolynomial {
            coeffs: vec![BigInt::one()],
        };
    }
    let big: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let matmul = |a: &Vec<Vec<BigInt>>, b: &Vec<Vec<BigInt>>| -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for k in 0..n {
                if a[i][k].is_zero() {
                    continue;
                }
                for j in 0..n {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
        out
    };
    let trace = |a: &Vec<Vec<BigInt>>| -> BigInt { (0..n).map(|i| a[i][i].clone()).sum() };

    // p(x) = x^n + a_{n-1} x^{n-1} + … + a_0.
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut mk = big.clone();
    for k in 1..=n {
        let ak = -trace(&mk) / BigInt::from(k as i64);
        coeffs[n - k] = ak.clone();
        if k < n {
            let mut shifted = mk;
            for (i, row) in shifted.iter_mut().enumerate().take(n) {
                row[i] += &ak;
            }
            mk = matmul(&big, &shifted);
        }
    }
    IntPolynomial { coeffs }
}

/// Largest real eigenvalue of a nonnegative integer matrix: the largest
/// real root of its characteristic polynomial in [0, max row sum],
/// isolated by sign-change bracketing and bisection on the exact
/// polynomial.
pub fn perron_root(m: &[Vec<u64>]) -> f64 {
    let n = m.len();
    if n == 0 {
        return 0.0;
    }
    let poly = char_poly(m);
    let max_row_sum: u64 = m.iter().map(|row| row.iter().sum()).max().unwrap_or(0);
    if max_row_sum == 0 {
        return 0.0;
    }
    let hi = BigRational::from_integer(BigInt::from(max_row_sum));
    // Largest sample with p ≤ 0 gives the bracket below the root.
    let samples = 1024i64;
    let mut lo = None;
    for k in (0..=samples).rev() {
        let x = &hi * BigRational::new(BigInt::from(k), BigInt::from(samples));
        let v = poly.eval_rational(&x);
        if v.is_zero() {
            return rational_to_f64(&x);
        }
        if v.is_negative() {
            lo = Some((x, k));
            break;
        }
    }
    let Some((mut lo, k)) = lo else {
        // No sign change found: the spectral radius of a nonnegative
        // matrix with positive row sum is ≥ the min positive entry; at
        // this sampling density that does not happen for the small
        // matrices we produce.
        return 0.0;
    };
    let mut hi = &hi * BigRational::new(BigInt::from(k + 1), BigInt::from(samples));
    let tol = root_tol();
    let two = BigInt::from(2);
    for _ in 0..200 {
        let width = rational_to_f64(&(&hi - &lo));
        if width <= tol {
            break;
        }
        let mid = (&lo + &hi) / BigRational::from_integer(two.clone());
        let v = poly.eval_rational(&mid);
        if v.is_zero() {
            return rational_to_f64(&mid);
        }
        if v.is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    rational_to_f64(&((&lo + &hi) / BigRational::from_integer(two)))
}

fn rational_to_f64(x: &BigRational) -> f64 {
    // Good enough for tolerance targets far above f64 granularity.
    let num = x.numer();
    let den = x.denom();
    let fnum: f64 = num.to_string().parse().unwrap_or(f64::NAN);
    let fden: f64 = den.to_string().parse().unwrap_or(f64::NAN);
    fnum / fden
}

/// The constants of the boundary dimension: λ with λ³ = λ² + 2,
/// 𝔰 = log λ / log √2, and λ⁴/4.
#[derive(Clone, Copy, Debug)]
pub struct LambdaConstants {
    pub lambda: f64,
    pub s: f64,
    pub lambda4_over_4: f64,
}

pub fn lambda_constants() -> LambdaConstants {
    let f = |x: f64| x * x * x - x * x - 2.0;
    let (mut lo, mut hi) = (1.0f64, 2.0f64);
    while hi - lo > 1e-14 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lambda = 0.5 * (lo + hi);
    LambdaConstants {
        lambda,
        s: lambda.ln() / 2.0f64.sqrt().ln(),
        lambda4_over_4: lambda.powi(4) / 4.0,
    }
}

/// Full dimension report for a trimmed, all-terminal automaton read as
/// a graph-directed system with contraction ratio 1/4.
#[derive(Clone, Debug, Serialize)]
pub struct DimensionReport {
    pub line: Option<(i64, i64, i64)>,
    pub boundary: bool,
    pub states: usize,
    pub edges: usize,
    pub empty: bool,
    pub scc_sizes: Vec<usize>,
    /// Characteristic polynomial coefficients per SCC, ascending.
    pub char_polys: Vec<Vec<String>>,
    pub beta: Option<f64>,
    pub dimension: Option<f64>,
    pub cardinality: Option<Cardinality>,
    pub dimension_equals_s_minus_1: bool,
    #[serde(skip)]
    pub scc_char_polys: Vec<IntPolynomial>,
    #[serde(skip)]
    pub beta_scc: Option<usize>,
}

impl DimensionReport {
    pub fn annotate_line(&mut self, l: &LineParams, boundary: bool) {
        self.line = Some((l.p, l.q, l.r));
        self.boundary = boundary;
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

/// Computes β as the maximum Perron root over the SCCs of a trimmed
/// automaton and the Hausdorff dimension log β / log 4 of the attractor.
pub fn hausdorff_dimension(a: &BuchiAutomaton) -> Result<DimensionReport> {
    if !a.is_trimmed()? {
        return Err(Error::NotTrimmed);
    }
    if a.state_count() == 0 {
        return Ok(DimensionReport {
            line: None,
            boundary: false,
            states: 0,
            edges: 0,
            empty: true,
            scc_sizes: vec![],
            char_polys: vec![],
            beta: None,
            dimension: None,
            cardinality: Some(Cardinality::Finite(0)),
            dimension_equals_s_minus_1: false,
            scc_char_polys: vec![],
            beta_scc: None,
        });
    }
    let scc = a.scc_decompose();
    let mut polys = Vec::new();
    let mut beta = 0.0f64;
    let mut beta_scc = 0usize;
    for (ci, m) in scc.incidence.iter().enumerate() {
        polys.push(char_poly(m));
        let root = perron_root(m);
        if root > beta {
            beta = root;
            beta_scc = ci;
        }
    }
    let dimension = beta.ln() / 4.0f64.ln();
    let consts = lambda_constants();
    Ok(DimensionReport {
        line: None,
        boundary: false,
        states: a.state_count(),
        edges: a.edge_count(),
        empty: false,
        scc_sizes: scc.components.iter().map(|c| c.len()).collect(),
        char_polys: polys.iter().map(|p| p.coeff_strings()).collect(),
        beta: Some(beta),
        dimension: Some(dimension),
        cardinality: Some(a.classify_cardinality()?),
        dimension_equals_s_minus_1: (dimension - (consts.s - 1.0)).abs() <= CMP_TOL,
        scc_char_polys: polys,
        beta_scc: Some(beta_scc),
    })
}

/// Certificate that the attractor dimension is not 𝔰−1.
#[derive(Clone, Debug, Serialize)]
pub struct NeverSMinus1Certificate {
    pub ok: bool,
    pub beta: f64,
    pub lambda4_over_4: f64,
    pub gap: f64,
    /// Monic integer polynomial with β as a root (char poly of its SCC).
    pub beta_char_poly: Vec<String>,
    /// The minimal polynomial 4x³−9x²+2x−1 of λ⁴/4, ascending.
    pub min_poly: Vec<String>,
    /// Rational root candidates of the minimal polynomial, with the
    /// exact value of the polynomial at each (all nonzero).
    pub rational_root_checks: Vec<(String, String)>,
}

/// The minimal polynomial 4x³ − 9x² + 2x − 1 of λ⁴/4.
pub fn lambda4_min_poly() -> IntPolynomial {
    IntPolynomial::from_i64(&[-1, 2, -9, 4])
}

/// Verifies that β ≠ λ⁴/4, i.e. the dimension is not 𝔰−1: numerically
/// (gap above tolerance) and exactly (β is an algebraic integer, λ⁴/4
/// is not, by the rational root test on its non-monic minimal
/// polynomial).
pub fn check_not_s_minus_1(report: &DimensionReport) -> Result<NeverSMinus1Certificate> {
    if report.empty {
        return Err(Error::EmptyReport);
    }
    let beta = report.beta.expect("nonempty report has beta");
    let beta_poly = &report.scc_char_polys[report.beta_scc.expect("nonempty")];
    let consts = lambda_constants();
    let gap = (beta - consts.lambda4_over_4).abs();

    let min_poly = lambda4_min_poly();
    // Candidates ±(divisors of 1)/(divisors of 4).
    let mut checks = Vec::new();
    let mut all_nonzero = true;
    for den in [1i64, 2, 4] {
        for sign in [1i64, -1] {
            let cand = BigRational::new(BigInt::from(sign), BigInt::from(den));
            let v = min_poly.eval_rational(&cand);
            if v.is_zero() {
                all_nonzero = false;
            }
            checks.push((cand.to_string(), v.to_string()));
        }
    }
    let ok = gap > CMP_TOL && all_nonzero && beta_poly.is_monic();
    Ok(NeverSMinus1Certificate {
        ok,
        beta,
        lambda4_over_4: consts.lambda4_over_4,
        gap,
        beta_char_poly: beta_poly.coeff_strings(),
        min_poly: min_poly.coeff_strings(),
        rational_root_checks: checks,
    })
}
