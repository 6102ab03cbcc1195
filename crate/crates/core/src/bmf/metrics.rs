//! Matrix-level comparisons between a context and its approximation.

use crate::bitset::AttributeSet;
use crate::context::FormalContext;
use crate::error::{Error, Result};

/// Boolean product `S·H`: `(g, m)` is incident iff some factor `j` has
/// `(g, j) ∈ S` and `(j, m) ∈ H`. Objects come from `S`, attributes from `H`.
pub fn boolean_product(s: &FormalContext, h: &FormalContext) -> Result<FormalContext> {
    if s.num_attributes() != h.num_objects() {
        return Err(Error::dims(s.num_attributes(), h.num_objects()));
    }
    let rows = s
        .rows()
        .iter()
        .map(|factors| {
            let mut row = AttributeSet::empty(h.num_attributes());
            for j in factors.iter() {
                row.union_with(h.row(j));
            }
            row
        })
        .collect();
    FormalContext::new(s.objects().to_vec(), h.attributes().to_vec(), rows)
}

/// Number of cells where the incidences differ.
pub fn mismatches(a: &FormalContext, b: &FormalContext) -> Result<usize> {
    if a.num_objects() != b.num_objects() {
        return Err(Error::dims(a.num_objects(), b.num_objects()));
    }
    if a.num_attributes() != b.num_attributes() {
        return Err(Error::dims(a.num_attributes(), b.num_attributes()));
    }
    Ok(a.rows().iter().zip(b.rows()).map(|(x, y)| x.union(y).difference(&x.intersection(y)).len()).sum())
}

/// `‖I_a − I_b‖_F`, i.e. the square root of the mismatch count.
pub fn frobenius_error(a: &FormalContext, b: &FormalContext) -> Result<f64> {
    Ok((mismatches(a, b)? as f64).sqrt())
}

/// Hamming distance relative to `|G|·|M|`, in percent.
pub fn hamming_percent(a: &FormalContext, b: &FormalContext) -> Result<f64> {
    let d = mismatches(a, b)?;
    let cells = a.num_objects() * a.num_attributes();
    Ok(if cells == 0 { 0.0 } else { 100.0 * d as f64 / cells as f64 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    fn identity(n: usize) -> FormalContext {
        let table: Vec<Vec<bool>> = (0..n).map(|i| (0..n).map(|j| i == j).collect()).collect();
        FormalContext::from_table((0..n).map(|i| format!("g{i}")), (0..n).map(|i| i.to_string()), &table).unwrap()
    }

    #[test]
    fn identity_factor_reproduces_context() {
        let k = fixtures::living_beings();
        let s = identity(8).with_object_names(k.objects().to_vec()).unwrap();
        let h = k.with_object_names((0..8).map(|i| i.to_string()).collect()).unwrap();
        assert_eq!(boolean_product(&s, &h).unwrap(), k);
    }

    #[test]
    fn zero_factor_gives_empty_context() {
        let s = FormalContext::from_rows(["a", "b"], ["0"], &[".", "."]).unwrap();
        let h = FormalContext::from_rows(["0"], ["x", "y"], &["XX"]).unwrap();
        assert_eq!(boolean_product(&s, &h).unwrap().incidences(), 0);
        assert!(boolean_product(&h, &h).is_err());
    }

    #[test]
    fn metric_values() {
        let k = fixtures::living_beings();
        assert_eq!(frobenius_error(&k, &k).unwrap(), 0.0);
        assert_eq!(hamming_percent(&k, &k).unwrap(), 0.0);
        let mut table: Vec<Vec<bool>> = (0..8).map(|g| (0..9).map(|m| k.incident(g, m)).collect()).collect();
        table[3][2] = !table[3][2];
        let k2 = FormalContext::from_table(k.objects().to_vec(), k.attributes().to_vec(), &table).unwrap();
        assert_eq!(frobenius_error(&k, &k2).unwrap(), 1.0);
        assert!(frobenius_error(&k, &identity(8)).is_err());
    }

    #[test]
    fn reported_mismatch_counts_round_as_printed() {
        // 41 x 55 cells: 73 and 72 wrong incidences both print as 3.2 %
        for d in [72usize, 73] {
            assert_eq!(format!("{:.1}", 100.0 * d as f64 / (41.0 * 55.0)), "3.2");
        }
        assert_eq!(format!("{:.2}", 72f64.sqrt()), "8.49");
        assert_eq!(format!("{:.2}", 73f64.sqrt()), "8.54");
    }

    proptest! {
        #[test]
        fn product_is_monotone_in_factors(
            s in proptest::collection::vec(proptest::collection::vec(any::<bool>(), 3), 4),
            h in proptest::collection::vec(proptest::collection::vec(any::<bool>(), 5), 3),
            extra_col in proptest::collection::vec(any::<bool>(), 4),
            extra_row in proptest::collection::vec(any::<bool>(), 5),
        ) {
            let sc = FormalContext::from_table((0..4).map(|i| i.to_string()), (0..3).map(|i| i.to_string()), &s).unwrap();
            let hc = FormalContext::from_table((0..3).map(|i| i.to_string()), (0..5).map(|i| i.to_string()), &h).unwrap();
            let s2: Vec<Vec<bool>> = s.iter().zip(&extra_col).map(|(r, &b)| { let mut r = r.clone(); r.push(b); r }).collect();
            let mut h2 = h.clone();
            h2.push(extra_row);
            let sc2 = FormalContext::from_table((0..4).map(|i| i.to_string()), (0..4).map(|i| i.to_string()), &s2).unwrap();
            let hc2 = FormalContext::from_table((0..4).map(|i| i.to_string()), (0..5).map(|i| i.to_string()), &h2).unwrap();
            let p = boolean_product(&sc, &hc).unwrap();
            let p2 = boolean_product(&sc2, &hc2).unwrap();
            for g in 0..4 {
                prop_assert!(p.row(g).is_subset(p2.row(g)));
            }
        }
    }
}
