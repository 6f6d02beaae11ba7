//! Deterministic ranking of damping strategies by dominant-mode results.

use super::mode::damping_ratio;

/// One comparison row: a strategy name with its dominant mode and damping
/// ratio.
#[derive(Clone, Debug, PartialEq)]
pub struct RankedStrategy {
    pub strategy: String,
    /// Dominant-mode decay rate, 1/s.
    pub sigma: f64,
    /// Dominant-mode angular frequency, rad/s.
    pub omega: f64,
    /// Damping ratio (fraction, not percent); negative ratios mean growth.
    pub zeta: f64,
}

/// Ranks strategies by damping ratio, best first.
///
/// The primary key is the damping ratio at reporting precision (0.1
/// percentage point); rows that tie there are ordered by the faster decay
/// rate, then by name, so output order is stable run to run.
pub fn rank_strategies(entries: &[(String, f64, f64)]) -> Vec<RankedStrategy> {
    let mut rows: Vec<RankedStrategy> = entries
        .iter()
        .map(|(name, sigma, omega)| RankedStrategy {
            strategy: name.clone(),
            sigma: *sigma,
            omega: *omega,
            zeta: damping_ratio(*sigma, *omega).unwrap_or(f64::NEG_INFINITY),
        })
        .collect();
    rows.sort_by(|a, b| {
        let ka = (a.zeta * 1000.0).round();
        let kb = (b.zeta * 1000.0).round();
        kb.total_cmp(&ka)
            .then(a.sigma.total_cmp(&b.sigma))
            .then(a.strategy.cmp(&b.strategy))
    });
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_pairs_rank_in_expected_order() {
        let entries: Vec<(String, f64, f64)> = [
            ("GFL_POD_P", -0.631503, 5.90218),
            ("NO_PSS", -0.263220, 5.34158),
            ("GFM_Droop", -0.629683, 5.29911),
            ("PSS", -0.781214, 5.84032),
            ("GFL_POD_Q", -0.631767, 5.39000),
            ("REGFM", -0.637492, 5.36776),
            ("GFM_VSM", -0.676476, 5.34967),
        ]
        .iter()
        .map(|(n, s, w)| (n.to_string(), *s, *w))
        .collect();
        let ranked = rank_strategies(&entries);
        let order: Vec<&str> = ranked.iter().map(|r| r.strategy.as_str()).collect();
        assert_eq!(
            order,
            [
                "PSS",
                "GFM_VSM",
                "REGFM",
                "GFM_Droop",
                "GFL_POD_Q",
                "GFL_POD_P",
                "NO_PSS"
            ]
        );
    }

    #[test]
    fn single_entry_passes_through() {
        let ranked = rank_strategies(&[("ONLY".to_string(), -0.5, 5.0)]);
        assert_eq!(ranked.len(), 1);
        assert_eq!(ranked[0].strategy, "ONLY");
        assert!((ranked[0].zeta - 0.5 / (0.25f64 + 25.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn equal_modes_tie_break_by_name() {
        let ranked = rank_strategies(&[
            ("zeta_b".to_string(), -0.5, 5.0),
            ("zeta_a".to_string(), -0.5, 5.0),
        ]);
        assert_eq!(ranked[0].strategy, "zeta_a");
        assert_eq!(ranked[1].strategy, "zeta_b");
    }

    #[test]
    fn rounding_ties_prefer_faster_decay() {
        // Same damping ratio at reporting precision; the more negative sigma
        // ranks first.
        let ranked = rank_strategies(&[
            ("slow".to_string(), -0.629683, 5.29911),
            ("fast".to_string(), -0.637492, 5.36776),
        ]);
        assert_eq!(ranked[0].strategy, "fast");
    }
}
