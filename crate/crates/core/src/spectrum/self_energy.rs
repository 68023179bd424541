use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::CouplingParams;

/// Minimum distance to a band edge at which the self-energy is evaluated.
pub const BRANCH_POINT_TOL: f64 = 1e-10;

/// Riemann sheet of the emitter resolvent. `First` is the physical sheet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SheetTag {
    First,
    Second,
}

impl SheetTag {
    /// Sign relating `S(z)` to the reference root `R(z) ~ z^2`: `S = sign * R`.
    fn branch_sign(self) -> f64 {
        match self {
            SheetTag::First => -1.0,
            SheetTag::Second => 1.0,
        }
    }
}

impl fmt::Display for SheetTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SheetTag::First => write!(f, "first"),
            SheetTag::Second => write!(f, "second"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelfEnergyEval {
    pub z: Complex64,
    pub sheet: SheetTag,
    pub sigma: Complex64,
    pub s_branch: Complex64,
}

/// Real-axis points are read as `E + i0+`.
fn upper_lip(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        Complex64::new(z.re, 0.0)
    } else {
        z
    }
}

/// `sqrt((z^2 - J+^2)(z^2 - J-^2))` on the branch that behaves as `+z^2` at
/// infinity, with cuts only along the two bands.
///
/// Each pair `sqrt(z - a) sqrt(z + a)` of principal roots is cut on `[-a, a]`;
/// the product of the outer and inner pairs cancels the cut across the gap.
fn reference_root(params: &CouplingParams, z: Complex64) -> Complex64 {
    let (inner, outer) = params.band_edges();
    let pair = |a: f64| (z - a).sqrt() * (z + a).sqrt();
    pair(outer) * pair(inner)
}

fn check_branch_points(params: &CouplingParams, z: Complex64) -> Result<()> {
    let (inner, outer) = params.band_edges();
    for bp in [outer, -outer, inner, -inner] {
        let d = (z - bp).norm();
        if d < BRANCH_POINT_TOL {
            return Err(Error::BranchPointProximity {
                z,
                branch_point: bp,
                distance: d,
            });
        }
    }
    Ok(())
}

/// `S(z)` on the requested sheet.
pub fn s_branch(params: &CouplingParams, z: Complex64, sheet: SheetTag) -> Complex64 {
    sheet.branch_sign() * reference_root(params, upper_lip(z))
}

/// Whether `z = 0` solves `z = Sigma(z)` on this sheet. That happens when
/// `J+ J- + S(0)` vanishes, i.e. the zero-energy pole of `Sigma` cancels.
pub fn zero_mode_on_sheet(params: &CouplingParams, sheet: SheetTag) -> bool {
    if params.g() == 0.0 {
        return true;
    }
    let jm = params.j_minus();
    if jm == 0.0 {
        return false;
    }
    // S(0) = sign * R(0) = -sign * J+ |J-|; need J+ J- + S(0) = 0.
    match sheet {
        SheetTag::First => jm < 0.0,
        SheetTag::Second => jm > 0.0,
    }
}

/// `Sigma'(0)` on a sheet that carries the zero mode.
fn sigma_prime_at_zero(params: &CouplingParams, sheet: SheetTag) -> Complex64 {
    let (j1, j2, g) = (params.j1(), params.j2(), params.g());
    if g == 0.0 {
        return Complex64::default();
    }
    let gap = (j1 * j1 - j2 * j2).abs();
    let value = g * g * (1.0 + sheet.branch_sign() * (j1 * j1 + j2 * j2) / gap) / (2.0 * j1 * j1);
    Complex64::new(value, 0.0)
}

/// Emitter self-energy `Sigma(z) = g^2 (z^2 + J+ J- + S(z)) / (2 j1^2 z)`.
///
/// On the first sheet `S` is fixed by `z Sigma(z) -> g^2` at infinity; the
/// second sheet flips the sign of `S`. At `z = 0` the removable limit is
/// returned when it exists.
pub fn self_energy(params: &CouplingParams, z: Complex64, sheet: SheetTag) -> Result<SelfEnergyEval> {
    let z = upper_lip(z);
    let s = s_branch(params, z, sheet);
    let g2 = params.g() * params.g();
    if g2 == 0.0 {
        return Ok(SelfEnergyEval {
            z,
            sheet,
            sigma: Complex64::default(),
            s_branch: s,
        });
    }
    check_branch_points(params, z)?;
    if z == Complex64::default() {
        if zero_mode_on_sheet(params, sheet) {
            return Ok(SelfEnergyEval {
                z,
                sheet,
                sigma: Complex64::default(),
                s_branch: s,
            });
        }
        return Err(Error::Precondition(format!(
            "Sigma has a pole at z = 0 on the {sheet} sheet"
        )));
    }
    let j1 = params.j1();
    let p = params.j_plus() * params.j_minus();
    let z2 = z * z;
    let plus = z2 + p + s;
    let minus = z2 + p - s;
    // (z^2+P+S)(z^2+P-S) = 4 j1^2 z^2, so use whichever form avoids cancellation.
    let sigma = if plus.norm() >= minus.norm() {
        g2 * plus / (2.0 * j1 * j1 * z)
    } else {
        2.0 * g2 * z / minus
    };
    Ok(SelfEnergyEval {
        z,
        sheet,
        sigma,
        s_branch: s,
    })
}

/// Analytic `d Sigma / dz`.
pub fn self_energy_derivative(params: &CouplingParams, z: Complex64, sheet: SheetTag) -> Result<Complex64> {
    let z = upper_lip(z);
    let g2 = params.g() * params.g();
    if g2 == 0.0 {
        return Ok(Complex64::default());
    }
    check_branch_points(params, z)?;
    if z == Complex64::default() {
        if zero_mode_on_sheet(params, sheet) {
            return Ok(sigma_prime_at_zero(params, sheet));
        }
        return Err(Error::Precondition(format!(
            "Sigma has a pole at z = 0 on the {sheet} sheet"
        )));
    }
    let (inner, outer) = params.band_edges();
    let j1 = params.j1();
    let p = params.j_plus() * params.j_minus();
    let r = reference_root(params, z);
    let s = sheet.branch_sign() * r;
    let ds = sheet.branch_sign() * z * (2.0 * z * z - outer * outer - inner * inner) / r;
    let z2 = z * z;
    let plus = z2 + p + s;
    let minus = z2 + p - s;
    if plus.norm() >= minus.norm() {
        // d/dz [plus / z] = (z plus' - plus) / z^2
        Ok(g2 * (z * (2.0 * z + ds) - plus) / (2.0 * j1 * j1 * z2))
    } else {
        // d/dz [z / minus] = (minus - z minus') / minus^2
        Ok(2.0 * g2 * (minus - z * (2.0 * z - ds)) / (minus * minus))
    }
}

/// Self-energy of the bare semi-infinite chain seen from its first site,
/// `Xi = j2^2 / (z - j1^2 / (z - Xi))`, on the branch consistent with
/// [`self_energy`] (so `Sigma = g^2 / (z - Xi)`).
pub fn reservoir_self_energy(params: &CouplingParams, z: Complex64, sheet: SheetTag) -> Result<Complex64> {
    let z = upper_lip(z);
    check_branch_points(params, z)?;
    if z == Complex64::default() {
        return Err(Error::Precondition("reservoir self-energy at z = 0".into()));
    }
    let (j1, j2) = (params.j1(), params.j2());
    let p = j1 * j1 - j2 * j2;
    let s = s_branch(params, z, sheet);
    let z2 = z * z;
    let num = z2 - p + s;
    let den = z2 - p - s;
    // (z^2-P+S)(z^2-P-S) = 4 j2^2 z^2.
    Ok(if num.norm() >= den.norm() {
        num / (2.0 * z)
    } else {
        2.0 * j2 * j2 * z / den
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(j1: f64, j2: f64, g: f64) -> CouplingParams {
        CouplingParams::new(j1, j2, g).unwrap()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn decoupled_emitter_has_no_self_energy() {
        let q = p(1.5, 1.0, 0.0);
        for z in [c(0.3, 0.1), c(2.0, 0.0), c(-5.0, -1.0)] {
            assert_eq!(self_energy(&q, z, SheetTag::First).unwrap().sigma, c(0.0, 0.0));
        }
    }

    #[test]
    fn asymptotic_sum_rule_fixes_first_sheet() {
        let q = p(1.5, 1.0, 0.5);
        let z = c(10.0, 0.0);
        let zs = z * self_energy(&q, z, SheetTag::First).unwrap().sigma;
        // Leading correction is g^2 j2^2 / z^2, about 1.03% here.
        assert!((zs.re - 0.25).abs() < 0.011 * 0.25);
        let xi = 1.0 / (10.0 - 2.25 / (10.0 - 1.0 / (10.0 - 2.25 / 10.0)));
        assert!((zs.re - 2.5 / (10.0 - xi)).abs() < 1e-4);
        let far = c(0.0, 1e4);
        let zs = far * self_energy(&q, far, SheetTag::First).unwrap().sigma;
        assert!((zs - 0.25).norm() < 1e-6);
    }

    #[test]
    fn assembled_form_holds() {
        let q = p(1.2, 0.7, 0.9);
        for &sheet in &[SheetTag::First, SheetTag::Second] {
            for z in [c(0.2, 0.3), c(3.0, -0.2), c(-1.0, 0.01), c(0.1, 0.0)] {
                let e = self_energy(&q, z, sheet).unwrap();
                let direct = 0.81 * (z * z + (1.44 - 0.49) + e.s_branch) / (2.0 * 1.44 * z);
                assert!((e.sigma - direct).norm() < 1e-12 * (1.0 + direct.norm()));
            }
        }
    }

    #[test]
    fn physical_sign_inside_bands() {
        for q in [p(1.5, 1.0, 0.7), p(2.0 / 3.0, 1.0, 1.2), p(1.0, 1.0, 0.5)] {
            let (inner, outer) = q.band_edges();
            for i in 1..200 {
                let e = inner + (outer - inner) * i as f64 / 200.0;
                for x in [e, -e] {
                    let s = self_energy(&q, c(x, 0.0), SheetTag::First).unwrap().sigma;
                    assert!(s.im < 0.0, "Im Sigma({x}) = {}", s.im);
                }
            }
        }
    }

    #[test]
    fn second_sheet_continues_through_the_cut() {
        let q = p(1.5, 1.0, 0.7);
        let x = 1.7;
        let eps = 1e-9;
        let below_first = self_energy(&q, c(x, -eps), SheetTag::First).unwrap().sigma;
        let above_first = self_energy(&q, c(x, eps), SheetTag::First).unwrap().sigma;
        let below_second = self_energy(&q, c(x, -eps), SheetTag::Second).unwrap().sigma;
        // Crossing the cut from above lands on the second sheet.
        assert!((above_first - below_second).norm() < 1e-6);
        assert!((above_first - below_first).norm() > 0.1);
        // Off the bands both sheets differ but the first sheet is continuous.
        let a = self_energy(&q, c(0.2, 1e-9), SheetTag::First).unwrap().sigma;
        let b = self_energy(&q, c(0.2, -1e-9), SheetTag::First).unwrap().sigma;
        assert!((a - b).norm() < 1e-6);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let q = p(1.3, 0.8, 0.6);
        for &sheet in &[SheetTag::First, SheetTag::Second] {
            for z in [c(0.2, 0.4), c(3.0, -0.5), c(-0.1, 0.2), c(1.0, 0.3)] {
                let h = 1e-6;
                let fd = (self_energy(&q, z + h, sheet).unwrap().sigma
                    - self_energy(&q, z - h, sheet).unwrap().sigma)
                    / (2.0 * h);
                let an = self_energy_derivative(&q, z, sheet).unwrap();
                assert!((fd - an).norm() < 1e-7 * (1.0 + an.norm()), "{z}: {fd} vs {an}");
            }
        }
    }

    #[test]
    fn branch_point_proximity_is_rejected() {
        let q = p(1.5, 1.0, 0.3);
        assert!(matches!(
            self_energy(&q, c(2.5 + 1e-12, 0.0), SheetTag::First),
            Err(Error::BranchPointProximity { .. })
        ));
        assert!(matches!(
            self_energy(&q, c(-0.5, 0.0), SheetTag::Second),
            Err(Error::BranchPointProximity { .. })
        ));
    }

    #[test]
    fn zero_limit_path() {
        let trivial = p(1.0, 1.5, 2.5);
        assert!(zero_mode_on_sheet(&trivial, SheetTag::First));
        assert_eq!(self_energy(&trivial, c(0.0, 0.0), SheetTag::First).unwrap().sigma, c(0.0, 0.0));
        // Removable limit agrees with nearby values.
        let d0 = self_energy_derivative(&trivial, c(0.0, 0.0), SheetTag::First).unwrap();
        let near = self_energy(&trivial, c(1e-5, 0.0), SheetTag::First).unwrap().sigma / 1e-5;
        assert!((d0 - near).norm() < 1e-6);
        assert!((d0.re + 6.25 / 1.25).abs() < 1e-12);

        let topo = p(1.5, 1.0, 0.5);
        assert!(!zero_mode_on_sheet(&topo, SheetTag::First));
        assert!(zero_mode_on_sheet(&topo, SheetTag::Second));
        assert!(self_energy(&topo, c(0.0, 0.0), SheetTag::First).is_err());
        let d0 = self_energy_derivative(&topo, c(0.0, 0.0), SheetTag::Second).unwrap();
        assert!((d0.re - 0.25 / 1.25).abs() < 1e-12);
    }

    #[test]
    fn reservoir_consistency() {
        let q = p(1.0, 1.5, 0.8);
        for &sheet in &[SheetTag::First, SheetTag::Second] {
            let z = c(0.7, 0.4);
            let xi = reservoir_self_energy(&q, z, sheet).unwrap();
            let sigma = self_energy(&q, z, sheet).unwrap().sigma;
            assert!((sigma - 0.64 / (z - xi)).norm() < 1e-12);
            // Xi is a root of the continued-fraction fixed point on either sheet.
            let back = 2.25 / (z - 1.0 / (z - xi));
            assert!((back - xi).norm() < 1e-12);
        }
    }

    #[test]
    fn reservoir_large_z() {
        for q in [p(1.0, 1.5, 0.3), p(1.5, 1.0, 0.3), p(0.2, 3.0, 1.0)] {
            for z in [c(50.0, 0.0), c(0.0, 50.0), c(-35.0, 35.0)] {
                let xi = reservoir_self_energy(&q, z, SheetTag::First).unwrap();
                let lead = q.j2() * q.j2() / z;
                assert!((xi - lead).norm() < 1e-2 * lead.norm());
            }
        }
    }
}
