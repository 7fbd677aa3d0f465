use crate::error::{Error, Result};

/// Per-epoch adversarial speeds, inversely proportional to each node's
/// scheduling priority: `v_i ∝ c_i / ||obs_i||^2`, scaled so the speeds sum
/// to `v_total`.
pub fn assign_adversarial_velocities(c: &[f64], observables: &[Vec<f64>], v_total: f64) -> Result<Vec<f64>> {
    if c.len() != observables.len() {
        return Err(Error::LengthMismatch {
            what: "observables",
            expected: c.len(),
            got: observables.len(),
        });
    }
    let raw = c
        .iter()
        .zip(observables)
        .enumerate()
        .map(|(node, (&ci, obs))| {
            let sq: f64 = obs.iter().map(|x| x * x).sum();
            if sq > 0.0 && sq.is_finite() {
                Ok(ci / sq)
            } else {
                Err(Error::ZeroNormObservable { node })
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    let total: f64 = raw.iter().sum();
    if total <= 0.0 {
        return Ok(vec![v_total / c.len() as f64; c.len()]);
    }
    Ok(raw.iter().map(|r| v_total * r / total).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn symmetric_split() {
        let v = assign_adversarial_velocities(&[1.0; 3], &vec![vec![1.0, 2.0]; 3], 6.0).unwrap();
        assert!(v.iter().all(|&x| close(x, 2.0)));
    }

    #[test]
    fn proportional_to_c() {
        let v = assign_adversarial_velocities(&[1.0, 4.0], &[vec![1.0], vec![1.0]], 5.0).unwrap();
        assert!(close(v[0], 1.0) && close(v[1], 4.0));
    }

    #[test]
    fn inverse_square_norm() {
        let v = assign_adversarial_velocities(&[1.0, 1.0], &[vec![2.0, 0.0], vec![0.0, 1.0]], 5.0).unwrap();
        assert!(close(v[0], 1.0) && close(v[1], 4.0));
    }

    #[test]
    fn zero_norm_rejected() {
        assert!(matches!(
            assign_adversarial_velocities(&[1.0, 1.0], &[vec![1.0], vec![0.0, 0.0]], 1.0),
            Err(Error::ZeroNormObservable { node: 1 })
        ));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn sums_to_total(
                rows in proptest::collection::vec((0.01f64..50.0, proptest::collection::vec(0.1f64..1e4, 1..20)), 1..12),
                v_total in 0.1f64..100.0,
            ) {
                let c: Vec<f64> = rows.iter().map(|r| r.0).collect();
                let obs: Vec<Vec<f64>> = rows.into_iter().map(|r| r.1).collect();
                let v = assign_adversarial_velocities(&c, &obs, v_total).unwrap();
                prop_assert!((v.iter().sum::<f64>() - v_total).abs() < 1e-9);
                prop_assert!(v.iter().all(|&x| x >= 0.0));
            }
        }
    }
}
