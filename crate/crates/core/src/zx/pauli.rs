use num_complex::Complex64;

use super::EvaluatedMap;
use crate::error::{Error, Result};

/// Relative tolerance used when matching entries.
const TOLERANCE: f64 = 1e-9;

/// True iff `a = c · P · b · Q` for Pauli products `P` (outputs), `Q`
/// (inputs) and a nonzero scalar `c`. Brute force over all Pauli pairs.
pub fn equiv_mod_pauli_scalar(a: &EvaluatedMap, b: &EvaluatedMap) -> Result<bool> {
    if a.num_inputs != b.num_inputs || a.num_outputs != b.num_outputs {
        return Err(Error::argument(format!(
            "shape mismatch: {}->{} vs {}->{}",
            a.num_inputs, a.num_outputs, b.num_inputs, b.num_outputs
        )));
    }
    if a.num_inputs + a.num_outputs > 12 {
        return Err(Error::capacity("Pauli search is limited to 6 + 6 qubits"));
    }
    let scale = a.max_abs().max(b.max_abs());
    if scale == 0.0 {
        return Ok(true);
    }
    let tol = TOLERANCE * scale;
    if a.is_zero(tol) || b.is_zero(tol) {
        return Ok(a.is_zero(tol) && b.is_zero(tol));
    }
    let (rows, cols) = (a.rows(), a.cols());
    // Largest entry of a fixes the scalar.
    let (k, _) = a
        .data
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm_sqr().total_cmp(&y.1.norm_sqr()))
        .expect("non-empty");
    let (kr, kc) = (k / cols, k % cols);
    let sign = |mask: usize, idx: usize| {
        if (mask & idx).count_ones() % 2 == 1 {
            -1.0
        } else {
            1.0
        }
    };
    // (P b Q)[r][c] = sz(r^px) sz'(c) b[r^px][c^qx] with P = X^px Z^pz,
    // Q = Z^qz X^qx; any phase from the ordering is absorbed in c.
    for px in 0..rows {
        for pz in 0..rows {
            for qx in 0..cols {
                for qz in 0..cols {
                    let entry = |r: usize, c: usize| -> Complex64 {
                        b.get(r ^ px, c ^ qx) * (sign(pz, r ^ px) * sign(qz, c))
                    };
                    let pivot = entry(kr, kc);
                    if pivot.norm() <= tol {
                        continue;
                    }
                    let c = a.get(kr, kc) / pivot;
                    let ok = (0..rows).all(|r| {
                        (0..cols).all(|col| (a.get(r, col) - c * entry(r, col)).norm() <= tol)
                    });
                    if ok {
                        return Ok(true);
                    }
                }
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;

    #[test]
    fn map_is_equivalent_to_itself() {
        let m = EvaluatedMap::from_gates(2, &[Gate::h(0), Gate::cz(0, 1)]).unwrap();
        assert!(equiv_mod_pauli_scalar(&m, &m).unwrap());
    }

    #[test]
    fn pauli_factor_is_ignored() {
        let cz = EvaluatedMap::from_gates(2, &[Gate::cz(0, 1)]).unwrap();
        let zcz = EvaluatedMap::from_gates(2, &[Gate::cz(0, 1), Gate::z(0)]).unwrap();
        let xcz = EvaluatedMap::from_gates(2, &[Gate::x(1), Gate::cz(0, 1)]).unwrap();
        assert!(equiv_mod_pauli_scalar(&zcz, &cz).unwrap());
        assert!(equiv_mod_pauli_scalar(&xcz, &cz).unwrap());
    }

    #[test]
    fn cz_is_not_identity() {
        let cz = EvaluatedMap::from_gates(2, &[Gate::cz(0, 1)]).unwrap();
        let id = EvaluatedMap::identity(2);
        assert!(!equiv_mod_pauli_scalar(&cz, &id).unwrap());
    }

    #[test]
    fn scalar_is_ignored() {
        let cz = EvaluatedMap::from_gates(2, &[Gate::cz(0, 1)]).unwrap();
        let mut scaled = cz.clone();
        scaled
            .data
            .iter_mut()
            .for_each(|a| *a *= Complex64::new(0.0, -3.5));
        assert!(equiv_mod_pauli_scalar(&scaled, &cz).unwrap());
    }

    #[test]
    fn shape_mismatch_is_an_argument_error() {
        let a = EvaluatedMap::identity(1);
        let b = EvaluatedMap::identity(2);
        assert!(matches!(
            equiv_mod_pauli_scalar(&a, &b),
            Err(Error::Argument(_))
        ));
    }
}
