//! Dormand-Prince 5(4) step for a 4-component autonomous system.

pub(crate) type Vec4 = [f64; 4];

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// 5th-order weights minus the embedded 4th-order weights.
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

pub(crate) struct Step {
    pub y: Vec4,
    /// Derivative at the new point (first stage of the next step).
    pub dy: Vec4,
    pub err: Vec4,
}

fn axpy(y: &Vec4, h: f64, terms: &[(f64, &Vec4)]) -> Vec4 {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (c, k) in terms {
            acc += c * k[i];
        }
        *o += h * acc;
    }
    out
}

/// One step of size `h` from `y` with derivative `k1 = f(y)`.
pub(crate) fn step<E>(
    f: &impl Fn(&Vec4) -> Result<Vec4, E>,
    y: &Vec4,
    k1: &Vec4,
    h: f64,
) -> Result<Step, E> {
    let k2 = f(&axpy(y, h, &[(A21, k1)]))?;
    let k3 = f(&axpy(y, h, &[(A31, k1), (A32, &k2)]))?;
    let k4 = f(&axpy(y, h, &[(A41, k1), (A42, &k2), (A43, &k3)]))?;
    let k5 = f(&axpy(y, h, &[(A51, k1), (A52, &k2), (A53, &k3), (A54, &k4)]))?;
    let k6 = f(&axpy(
        y,
        h,
        &[(A61, k1), (A62, &k2), (A63, &k3), (A64, &k4), (A65, &k5)],
    ))?;
    let y_new = axpy(
        y,
        h,
        &[(A71, k1), (A73, &k3), (A74, &k4), (A75, &k5), (A76, &k6)],
    );
    let k7 = f(&y_new)?;
    let mut err = [0.0; 4];
    for i in 0..4 {
        err[i] = h
            * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
    }
    Ok(Step { y: y_new, dy: k7, err })
}

/// Max-norm of the error scaled by `abs_tol + rel_tol * max(|y|, |y_new|)`.
pub(crate) fn error_norm(err: &Vec4, y: &Vec4, y_new: &Vec4, rel_tol: f64, abs_tol: f64) -> f64 {
    let mut norm: f64 = 0.0;
    for i in 0..4 {
        let sc = abs_tol + rel_tol * y[i].abs().max(y_new[i].abs());
        norm = norm.max(err[i].abs() / sc);
    }
    norm
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_is_reproduced() {
        // y' = y on every component; one step of 0.1 is accurate to ~h^6.
        let f = |y: &Vec4| -> Result<Vec4, ()> { Ok(*y) };
        let y = [1.0, 2.0, -1.0, 0.5];
        let s = step(&f, &y, &y, 0.1).unwrap();
        for ((y0, y1), err) in y.iter().zip(s.y).zip(s.err) {
            let exact = y0 * 0.1f64.exp();
            assert!((y1 - exact).abs() < 1e-8 * exact.abs());
            assert!(err.abs() < 1e-7);
        }
    }

    #[test]
    fn fifth_order_convergence() {
        let f = |y: &Vec4| -> Result<Vec4, ()> { Ok([-y[1], y[0], 0.0, 1.0]) };
        let y0 = [1.0, 0.0, 0.0, 0.0];
        let run = |n: usize| {
            let h = 1.0 / n as f64;
            let mut y = y0;
            for _ in 0..n {
                let k = f(&y).unwrap();
                y = step(&f, &y, &k, h).unwrap().y;
            }
            (y[0] - 1f64.cos()).abs()
        };
        let ratio = run(10) / run(20);
        assert!(ratio > 25.0, "observed ratio {ratio}");
    }
}
