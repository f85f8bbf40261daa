//! Observed order of convergence from a sequence of refinements.

/// Orders `log(e_k / e_{k+1}) / log(refinement)` for consecutive levels.
pub fn observed_orders(errors: &[f64], refinement: f64) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).ln() / refinement.ln()).collect()
}

/// True when every observed order lies in `[lo, hi]`.
pub fn orders_within(orders: &[f64], lo: f64, hi: f64) -> bool {
    !orders.is_empty() && orders.iter().all(|o| (lo..=hi).contains(o))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_order_sequence() {
        let errors = [1.0, 0.25, 0.0625];
        let orders = observed_orders(&errors, 2.0);
        assert_eq!(orders.len(), 2);
        assert!(orders.iter().all(|o| (o - 2.0).abs() < 1e-12));
        assert!(orders_within(&orders, 1.8, 2.2));
        assert!(!orders_within(&[], 1.8, 2.2));
    }
}
