use crate::aoi::{Aoi, AoiCostFunction, CostViolation};
use crate::error::Result;

/// Whittle index `W(x) = x f(x+1) - sum_{k<=x} f(k)` for `x = 1..=M`, with
/// `f(M+1)` read as `f(M)`.
#[derive(Debug, Clone, PartialEq)]
pub struct WhittleIndexTable {
    index: Vec<f64>,
}

impl WhittleIndexTable {
    /// Builds the table from raw monotone values `f(1..=M)`.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(CostViolation::Empty.into());
        }
        if let Some(i) = values.windows(2).position(|w| w[1] < w[0]) {
            return Err(CostViolation::NotMonotone {
                index: i + 2,
                previous: values[i],
                value: values[i + 1],
            }
            .into());
        }
        // Summed term by term as sum_k (f(x+1) - f(k)) so flat stretches give an
        // exact zero.
        let m = values.len();
        let index = (1..=m)
            .map(|x| {
                let next = values[x.min(m - 1)];
                values[..x].iter().map(|f| next - f).sum()
            })
            .collect();
        Ok(WhittleIndexTable { index })
    }

    pub fn from_cost(f: &AoiCostFunction) -> Result<Self> {
        Self::from_values(f.values())
    }

    /// Index at AoI `a`; AoI beyond `M` reads `W(M)`, the value the clamped
    /// cost function gives there.
    pub fn at(&self, a: Aoi) -> f64 {
        self.index[a.get().min(self.index.len()) - 1]
    }

    pub fn values(&self) -> &[f64] {
        &self.index
    }
}

/// Whittle index of `f` at AoI `x`. Rejects non-monotone `f`.
pub fn whittle_index(f: &AoiCostFunction, x: Aoi) -> Result<f64> {
    Ok(WhittleIndexTable::from_cost(f)?.at(x))
}

/// Source (0-based) with the largest index at its current AoI, ties to the
/// smallest source.
pub fn whittle_schedule_step(tables: &[WhittleIndexTable], aois: &[Aoi]) -> usize {
    debug_assert_eq!(tables.len(), aois.len());
    let mut best = 0;
    let mut best_value = f64::NEG_INFINITY;
    for (i, (table, &a)) in tables.iter().zip(aois).enumerate() {
        let w = table.at(a);
        if w > best_value {
            best = i;
            best_value = w;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn aoi(a: usize) -> Aoi {
        Aoi::new(a).unwrap()
    }

    fn cost(f: impl Fn(f64) -> f64, m: usize) -> AoiCostFunction {
        AoiCostFunction::monotone((1..=m).map(|j| f(j as f64)).collect()).unwrap()
    }

    #[test]
    fn index_examples() {
        assert_eq!(whittle_index(&cost(|x| x, 5), aoi(2)).unwrap(), 3.0);
        assert_eq!(whittle_index(&cost(|x| x * x, 5), aoi(1)).unwrap(), 3.0);
        let flat = cost(|_| 2.5, 6);
        for a in 1..=6 {
            assert_eq!(whittle_index(&flat, aoi(a)).unwrap(), 0.0);
        }
    }

    #[test]
    fn boundary_uses_clamped_cost() {
        // W(3) = 3 f(3) - (1 + 2 + 3)
        let t = WhittleIndexTable::from_cost(&cost(|x| x, 3)).unwrap();
        assert_eq!(t.at(aoi(3)), 3.0);
        assert_eq!(t.at(aoi(9)), 3.0);
    }

    #[test]
    fn rejects_non_monotone() {
        let f = AoiCostFunction::new(vec![1.0, 0.5, 2.0], 2.0, false).unwrap();
        assert!(matches!(
            whittle_index(&f, aoi(1)),
            Err(Error::InvalidCost(CostViolation::NotMonotone { index: 2, .. }))
        ));
    }

    #[test]
    fn step_examples() {
        let tables = vec![
            WhittleIndexTable::from_cost(&cost(|x| 2.0 * x, 5)).unwrap(),
            WhittleIndexTable::from_cost(&cost(|x| x, 5)).unwrap(),
        ];
        assert_eq!(whittle_schedule_step(&tables, &[aoi(1), aoi(3)]), 1);
        assert_eq!(whittle_schedule_step(&tables, &[aoi(2), aoi(3)]), 0);

        let same = vec![tables[1].clone(), tables[1].clone()];
        assert_eq!(whittle_schedule_step(&same, &[aoi(4), aoi(4)]), 0);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn monotone_cost_gives_monotone_index(mut raw in proptest::collection::vec(0.0f64..100.0, 1..40)) {
                raw.sort_by(f64::total_cmp);
                let t = WhittleIndexTable::from_values(&raw).unwrap();
                for w in t.values().windows(2) {
                    prop_assert!(w[1] >= w[0] - 1e-9 * w[0].abs().max(1.0));
                }
            }

            #[test]
            fn constant_cost_gives_zero_index(c in 0.0f64..50.0, m in 1usize..30) {
                let t = WhittleIndexTable::from_values(&vec![c; m]).unwrap();
                prop_assert!(t.values().iter().all(|&w| w == 0.0));
            }
        }
    }
}
