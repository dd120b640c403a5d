//! Quadrature rules: adaptive Gauss-Kronrod for smooth integrands and the
//! double-exponential (tanh-sinh / exp-sinh) family for endpoint
//! singularities and semi-infinite ranges.

use crate::error::{Error, Result};
use std::f64::consts::FRAC_PI_2;

/// Value and error estimate of a quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quad {
    pub value: f64,
    pub error: f64,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut rk = fc * WGK[7];
    let mut rg = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        rk += WGK[j] * s;
        if j % 2 == 1 {
            rg += WG[j / 2] * s;
        }
    }
    (rk * h, ((rk - rg) * h).abs())
}

/// Globally adaptive Gauss-Kronrod (7/15) on a finite interval.
pub fn gauss_kronrod<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64, abs_tol: f64) -> Result<Quad> {
    if a == b {
        return Ok(Quad { value: 0.0, error: 0.0 });
    }
    let (v, e) = gk15(&f, a, b);
    let mut parts = vec![(a, b, v, e)];
    let mut total = v;
    let mut err = e;
    for _ in 0..2000 {
        if !total.is_finite() {
            return Err(Error::QuadratureFailure("non-finite integrand".into()));
        }
        if err <= abs_tol.max(rel_tol * total.abs()) {
            break;
        }
        // bisect the interval with the largest error
        let (imax, _) = parts
            .iter()
            .enumerate()
            .fold((0, -1.0), |acc, (i, p)| if p.3 > acc.1 { (i, p.3) } else { acc });
        let (pa, pb, pv, pe) = parts.swap_remove(imax);
        let m = 0.5 * (pa + pb);
        if m <= pa || m >= pb {
            break;
        }
        let (v1, e1) = gk15(&f, pa, m);
        let (v2, e2) = gk15(&f, m, pb);
        total += v1 + v2 - pv;
        err += e1 + e2 - pe;
        parts.push((pa, m, v1, e1));
        parts.push((m, pb, v2, e2));
    }
    // re-sum to shed accumulated drift
    let value: f64 = parts.iter().map(|p| p.2).sum();
    let error: f64 = parts.iter().map(|p| p.3).sum();
    if !value.is_finite() {
        return Err(Error::QuadratureFailure("non-finite integrand".into()));
    }
    Ok(Quad { value, error })
}

const DE_MAX_LEVEL: usize = 9;
const DE_T_MAX: f64 = 6.5;

/// Runs a double-exponential rule given a node map `t -> Option<(x, w)>`.
/// The map also returns the distances of `x` to both ends, the nearer one
/// computed without cancellation.
fn double_exponential<F, M>(f: &F, map: M, rel_tol: f64) -> Result<Quad>
where
    F: Fn(f64, f64, f64) -> f64,
    M: Fn(f64) -> Option<(f64, f64, f64, f64)>,
{
    let eval = |t: f64| -> f64 {
        match map(t) {
            Some((x, w, dl, dr)) if w > 0.0 && w.is_finite() => {
                let fx = f(x, dl, dr);
                if fx.is_finite() {
                    w * fx
                } else {
                    0.0
                }
            }
            _ => 0.0,
        }
    };
    // level 0: integer nodes
    let mut h = 1.0;
    let mut sum = eval(0.0);
    let mut k = 1.0;
    while k <= DE_T_MAX {
        sum += eval(k) + eval(-k);
        k += 1.0;
    }
    let mut prev = sum * h;
    let mut err = f64::INFINITY;
    for _level in 1..=DE_MAX_LEVEL {
        h *= 0.5;
        let mut t = h;
        let mut add = 0.0;
        while t <= DE_T_MAX {
            add += eval(t) + eval(-t);
            t += 2.0 * h;
        }
        sum += add;
        let cur = sum * h;
        err = (cur - prev).abs();
        if !cur.is_finite() {
            return Err(Error::QuadratureFailure("non-finite double-exponential sum".into()));
        }
        prev = cur;
        if err <= rel_tol * cur.abs() || (cur == 0.0 && err == 0.0) {
            // the level difference overestimates the error quadratically
            return Ok(Quad { value: cur, error: err });
        }
    }
    Ok(Quad { value: prev, error: err })
}

/// tanh-sinh quadrature on `[a, b]`; tolerates integrable singularities at
/// both endpoints. Abscissae near `a` are formed as `a + d` with `d`
/// computed directly, so when `a = 0` points cluster down to subnormal
/// distances without cancellation.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<Quad> {
    tanh_sinh_endpoints(|x, _, _| f(x), a, b, rel_tol)
}

/// tanh-sinh where the integrand also receives `(x - a, b - x)`, the nearer
/// of which is exact; convolution kernels singular at an endpoint use it to
/// avoid forming `b - x` by subtraction.
pub fn tanh_sinh_endpoints<F: Fn(f64, f64, f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<Quad> {
    if a == b {
        return Ok(Quad { value: 0.0, error: 0.0 });
    }
    let len = b - a;
    let map = |t: f64| -> Option<(f64, f64, f64, f64)> {
        let u = FRAC_PI_2 * t.sinh();
        let e = (-2.0 * u.abs()).exp();
        // distance to the nearer endpoint
        let d = len * e / (1.0 + e);
        if d == 0.0 {
            return None;
        }
        let ch = u.cosh();
        let w = 0.5 * len * FRAC_PI_2 * t.cosh() / (ch * ch);
        if t < 0.0 {
            Some((a + d, w, d, len - d))
        } else {
            Some((b - d, w, len - d, d))
        }
    };
    double_exponential(&f, map, rel_tol)
}

/// exp-sinh quadrature on `[a, ∞)`: handles algebraic or exponential decay at
/// infinity and an integrable singularity at `a`.
pub fn exp_sinh<F: Fn(f64) -> f64>(f: F, a: f64, rel_tol: f64) -> Result<Quad> {
    let map = |t: f64| -> Option<(f64, f64, f64, f64)> {
        let u = FRAC_PI_2 * t.sinh();
        let d = u.exp();
        if d == 0.0 || !d.is_finite() {
            return None;
        }
        let w = FRAC_PI_2 * t.cosh() * d;
        Some((a + d, w, d, f64::INFINITY))
    };
    double_exponential(&|x, _, _| f(x), map, rel_tol)
}
