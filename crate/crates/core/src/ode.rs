//! Single Dormand–Prince 5(4) step for a complex scalar autonomous ODE.
//! The field is autonomous, so the stage abscissae never appear.

use num_complex::Complex64;

use crate::error::Result;

const A21: f64 = 0.2;
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

const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

pub(crate) struct Step<S> {
    pub y: Complex64,
    /// Field value at the new point (first stage of the next step).
    pub k_end: Complex64,
    /// Auxiliary state produced by the field at the new point.
    pub aux_end: S,
    /// Embedded error estimate (absolute, in `y` units).
    pub err: f64,
}

/// One step of size `h` from `y` with `k1 = f(y)`. The field returns `None`
/// when it cannot be evaluated safely at a stage point; the step is then
/// reported as `Ok(None)` so the caller can shrink `h`.
pub(crate) fn dopri5_step<S, F>(f: &mut F, y: Complex64, k1: Complex64, h: f64) -> Result<Option<Step<S>>>
where
    F: FnMut(Complex64) -> Result<Option<(Complex64, S)>>,
{
    macro_rules! stage {
        ($e:expr) => {
            match f($e)? {
                Some(v) => v,
                None => return Ok(None),
            }
        };
    }
    let (k2, _) = stage!(y + k1 * (h * A21));
    let (k3, _) = stage!(y + (k1 * A31 + k2 * A32) * h);
    let (k4, _) = stage!(y + (k1 * A41 + k2 * A42 + k3 * A43) * h);
    let (k5, _) = stage!(y + (k1 * A51 + k2 * A52 + k3 * A53 + k4 * A54) * h);
    let (k6, _) = stage!(y + (k1 * A61 + k2 * A62 + k3 * A63 + k4 * A64 + k5 * A65) * h);
    let y_new = y + (k1 * A71 + k3 * A73 + k4 * A74 + k5 * A75 + k6 * A76) * h;
    let (k7, aux) = stage!(y_new);
    let err = ((k1 * E1 + k3 * E3 + k4 * E4 + k5 * E5 + k6 * E6 + k7 * E7) * h).norm();
    Ok(Some(Step { y: y_new, k_end: k7, aux_end: aux, err }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotates_on_unit_circle() {
        // z' = i z, exact solution e^{it}
        let mut f = |z: Complex64| -> Result<Option<(Complex64, ())>> { Ok(Some((Complex64::i() * z, ()))) };
        let mut z = Complex64::new(1.0, 0.0);
        let h = 0.05;
        for _ in 0..40 {
            let k1 = Complex64::i() * z;
            z = dopri5_step(&mut f, z, k1, h).unwrap().unwrap().y;
        }
        assert!((z - Complex64::from_polar(1.0, 2.0)).norm() < 1e-9);
    }
}
