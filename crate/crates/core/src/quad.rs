//! Globally adaptive Gauss–Kronrod quadrature (7-point Gauss, 15-point Kronrod).
//!
//! Used as an independent oracle for the closed forms elsewhere in the crate
//! (Fourier transforms, the Lobachevsky function, simplex volumes), so it
//! deliberately knows nothing about the integrands it is handed.

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_225,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

const MAX_PANELS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for (j, (&x, &w)) in XGK[..7].iter().zip(&WGK[..7]).enumerate() {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Panel {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Integrates `f` over `[a, b]` until the summed panel error estimate drops
/// below `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Integral> {
    if a == b {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
        });
    }
    let mut panels = vec![kronrod(&f, a, b)];
    loop {
        let value: f64 = panels.iter().map(|p| p.value).sum();
        let error: f64 = panels.iter().map(|p| p.error).sum();
        if error <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(Integral { value, error });
        }
        if panels.len() >= MAX_PANELS {
            return Err(Error::Numerical(format!(
                "quadrature on [{a}, {b}] did not converge: error estimate {error:e} after {MAX_PANELS} panels"
            )));
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("at least one panel");
        let p = panels.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid <= p.a || mid >= p.b {
            return Err(Error::Numerical(format!(
                "quadrature panel [{}, {}] cannot be bisected further",
                p.a, p.b
            )));
        }
        panels.push(kronrod(&f, p.a, mid));
        panels.push(kronrod(&f, mid, p.b));
    }
}

/// Sums [`integrate`] over consecutive breakpoints, so that kinks of a
/// piecewise-smooth integrand sit on panel edges.
pub fn integrate_pieces<F: Fn(f64) -> f64>(
    f: F,
    breakpoints: &[f64],
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Integral> {
    let pieces = breakpoints.len().saturating_sub(1).max(1) as f64;
    let mut total = Integral {
        value: 0.0,
        error: 0.0,
    };
    for w in breakpoints.windows(2) {
        let part = integrate(&f, w[0], w[1], abs_tol / pieces, rel_tol)?;
        total.value += part.value;
        total.error += part.error;
    }
    Ok(total)
}
