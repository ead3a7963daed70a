//! Closed forms and secular equations for the standard graph families.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::OracleError;

/// End conditions of an interval oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum IntervalBc {
    /// Dirichlet at both ends.
    DD,
    /// Neumann at one end, Dirichlet at the other.
    DN,
}

pub fn interval_eigenvalues(length: f64, bc: IntervalBc, n: usize) -> Result<Vec<f64>, OracleError> {
    if !(length > 0.0) {
        return Err(OracleError::Parameter(format!("interval length must be positive, got {length}")));
    }
    Ok((1..=n)
        .map(|m| {
            let k = match bc {
                IntervalBc::DD => m as f64,
                IntervalBc::DN => m as f64 - 0.5,
            } * PI
                / length;
            k * k
        })
        .collect())
}

/// Which symmetry class of the loop an eigenvalue comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Family {
    /// Antisymmetric on the loop, vanishing at the junction: `k` integer.
    Odd,
    /// Symmetric on the loop, solving the secular equation.
    Even,
    /// Both families produce the same value.
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Level {
    pub energy: f64,
    pub k: f64,
    pub family: Family,
    pub multiplicity: usize,
}

/// Expand tagged levels into a plain ascending list with multiplicity.
pub fn expand(levels: &[Level]) -> Vec<f64> {
    levels.iter().flat_map(|l| std::iter::repeat(l.energy).take(l.multiplicity)).collect()
}

fn merge(mut levels: Vec<Level>) -> Vec<Level> {
    levels.sort_by(|a, b| a.k.total_cmp(&b.k));
    let mut out: Vec<Level> = Vec::with_capacity(levels.len());
    for l in levels {
        match out.last_mut() {
            Some(prev) if (prev.k - l.k).abs() <= 1e-12 * l.k.max(1.0) => {
                prev.multiplicity += l.multiplicity;
                if prev.family != l.family {
                    prev.family = Family::Both;
                }
            }
            _ => out.push(l),
        }
    }
    out
}

/// Determinant form of the even-mode condition on a balloon with a loop of
/// length 2π and a Dirichlet string of length `string`. No poles.
pub fn balloon_secular(k: f64, string: f64) -> f64 {
    (k * PI).cos() * (k * string).cos() - 2.0 * (k * PI).sin() * (k * string).sin()
}

/// Positive roots of `cot(kL) = 2 tan(kπ)` up to `k_max`, one per interval
/// between consecutive poles of either side. Poles shared by both sides are
/// themselves roots of the determinant form.
pub fn balloon_secular_roots(string: f64, k_max: f64) -> Result<Vec<f64>, OracleError> {
    if !(string > 0.0) {
        return Err(OracleError::Parameter(format!("string length must be positive, got {string}")));
    }
    let mut poles = vec![0.0];
    let mut m = 1;
    while (m as f64) * PI / string <= k_max + 2.0 {
        poles.push(m as f64 * PI / string);
        m += 1;
    }
    let mut m = 0;
    while m as f64 + 0.5 <= k_max + 2.0 {
        poles.push(m as f64 + 0.5);
        m += 1;
    }
    poles.sort_by(f64::total_cmp);
    let mut merged: Vec<(f64, bool)> = Vec::new();
    for p in poles {
        match merged.last_mut() {
            Some((q, shared)) if (p - *q).abs() <= 1e-12 * p.max(1.0) => *shared = true,
            _ => merged.push((p, false)),
        }
    }

    let mut roots = Vec::new();
    for w in merged.windows(2) {
        let (lo, hi) = (w[0].0, w[1].0);
        if w[0].1 && lo > 0.0 {
            roots.push(lo);
        }
        if lo > k_max {
            break;
        }
        roots.push(bisect_between_poles(string, lo, hi));
    }
    roots.retain(|&k| k <= k_max);
    for &k in &roots {
        let r = balloon_secular(k, string);
        if r.abs() >= 1e-10 {
            return Err(OracleError::Bracket { lo: k, hi: k });
        }
    }
    Ok(roots)
}

/// The cot form runs from +∞ to −∞ between consecutive poles. Its sign is
/// read off the determinant form times `sin(kL)cos(kπ)`, whose sign is
/// constant on the open interval, so nothing is evaluated near a pole.
fn bisect_between_poles(string: f64, lo: f64, hi: f64) -> f64 {
    let mid = 0.5 * (lo + hi);
    let orientation = ((mid * string).sin() * (mid * PI).cos()).signum();
    let positive = |k: f64| balloon_secular(k, string) * orientation > 0.0;
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if positive(m) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// The `n` lowest eigenvalues (with multiplicity) of the balloon: loop of
/// length 2π, Dirichlet string of length `string`.
pub fn balloon_levels(string: f64, n: usize) -> Result<Vec<Level>, OracleError> {
    // at most one even root per pole interval, plus one odd level per integer
    let k_max = n as f64 + 1.0;
    let mut levels: Vec<Level> = balloon_secular_roots(string, k_max)?
        .into_iter()
        .map(|k| Level { energy: k * k, k, family: Family::Even, multiplicity: 1 })
        .collect();
    levels.extend((1..=n).map(|j| Level { energy: (j * j) as f64, k: j as f64, family: Family::Odd, multiplicity: 1 }));
    Ok(truncate(merge(levels), n))
}

pub fn balloon_eigenvalues(string: f64, n: usize) -> Result<Vec<f64>, OracleError> {
    Ok(expand(&balloon_levels(string, n)?)[..n].to_vec())
}

fn truncate(levels: Vec<Level>, n: usize) -> Vec<Level> {
    let mut count = 0;
    levels
        .into_iter()
        .take_while(|l| {
            let keep = count < n;
            count += l.multiplicity;
            keep
        })
        .collect()
}

/// `E_2 / E_1` of the balloon.
pub fn balloon_ratio(string: f64) -> Result<f64, OracleError> {
    let e = balloon_eigenvalues(string, 2)?;
    Ok(e[1] / e[0])
}

/// Shift `arctan(1/√N)/π` of the even family on the fancy balloon.
pub fn fancy_balloon_shift(n_edges: usize) -> f64 {
    (1.0 / (n_edges as f64).sqrt()).atan() / PI
}

/// String of length π attached to `n_edges` parallel edges of length π.
/// Even family `(j ± c)²`, odd family `j²` with multiplicity `N - 1`.
pub fn fancy_balloon_levels(n_edges: usize, n: usize) -> Result<Vec<Level>, OracleError> {
    if n_edges < 2 {
        return Err(OracleError::Parameter(format!("fancy balloon needs at least 2 parallel edges, got {n_edges}")));
    }
    let c = fancy_balloon_shift(n_edges);
    let mut levels = Vec::new();
    for j in 0..=n {
        for k in [j as f64 - c, j as f64 + c] {
            if k > 0.0 {
                levels.push(Level { energy: k * k, k, family: Family::Even, multiplicity: 1 });
            }
        }
        if j >= 1 {
            levels.push(Level { energy: (j * j) as f64, k: j as f64, family: Family::Odd, multiplicity: n_edges - 1 });
        }
    }
    Ok(truncate(merge(levels), n))
}

pub fn fancy_balloon_eigenvalues(n_edges: usize, n: usize) -> Result<Vec<f64>, OracleError> {
    Ok(expand(&fancy_balloon_levels(n_edges, n)?)[..n].to_vec())
}

/// `L^cl_{γ,1} = Γ(γ+1) / (2√π Γ(γ+3/2))`.
pub fn classical_constant(gamma: f64) -> f64 {
    libm::tgamma(gamma + 1.0) / (2.0 * PI.sqrt() * libm::tgamma(gamma + 1.5))
}

/// Pöschl–Teller well `-2a²sech²(a(x-π))` on a loop of length 2π joined to
/// a half-line. The bound state `sech(a(x-π))` continues as `e^{-ay}` on the
/// half-line, and the vertex condition forces `tanh(aπ) = 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PoschlTellerBalloon {
    pub a: f64,
    pub e1: f64,
    /// `|E_1|^{3/2} / ∫|V|²`, by quadrature.
    pub q_three_halves: f64,
    /// `|E_1|^2 / ∫|V|^{5/2}`, by quadrature.
    pub q_two: f64,
    /// The same quotients from the closed-form antiderivatives.
    pub q_three_halves_closed: f64,
    pub q_two_closed: f64,
}

/// Root of `tanh(aπ) = 1/2`, by bisection.
pub fn poschl_teller_parameter() -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (mid * PI).tanh() < 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn poschl_teller_balloon() -> PoschlTellerBalloon {
    let a = poschl_teller_parameter();
    let e1 = -a * a;
    let v = |x: f64| 2.0 * a * a / (a * (x - PI)).cosh().powi(2);
    let integral = |p: f64| crate::quadrature::adaptive_simpson(&|x: f64| v(x).powf(p), 0.0, 2.0 * PI, 1e-14);
    let q_three_halves = e1.abs().powf(1.5) / integral(2.0);
    let q_two = e1.abs().powi(2) / integral(2.5);

    // ∫_0^X sech⁴ = t - t³/3 and
    // ∫_0^X sech⁵ = s³t/4 + 3st/8 + (3/4) arctan(tanh(X/2)), t = tanh X, s = sech X
    let x = a * PI;
    let (t, s) = (x.tanh(), 1.0 / x.cosh());
    let sech4 = t - t.powi(3) / 3.0;
    let sech5 = s.powi(3) * t / 4.0 + 3.0 * s * t / 8.0 + 0.75 * (x / 2.0).tanh().atan();
    let q_three_halves_closed = a.powi(3) / (8.0 * a.powi(3) * sech4);
    let q_two_closed = 1.0 / (2f64.powf(3.5) * sech5);
    PoschlTellerBalloon { a, e1, q_three_halves, q_two, q_three_halves_closed, q_two_closed }
}

/// Eigenvalues of a graph whose lengths are all multiplied by `s` (with the
/// potential rescaled to match).
pub fn scale_eigenvalues(values: &[f64], s: f64) -> Vec<f64> {
    values.iter().map(|e| e / (s * s)).collect()
}

/// Balloon ratio over `points` equally spaced string lengths in `[lo, hi]`.
pub fn balloon_ratio_sweep(lo: f64, hi: f64, points: usize) -> Result<Vec<(f64, f64)>, OracleError> {
    (0..points)
        .map(|i| {
            let l = if points == 1 { lo } else { lo + (hi - lo) * i as f64 / (points - 1) as f64 };
            balloon_ratio(l).map(|r| (l, r))
        })
        .collect()
}
