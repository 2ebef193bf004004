use log::warn;

use crate::dynamics::rabi_frequency;

/// True when the Rabi frequency 2α₀√Γ_eff reaches the anharmonicity, where
/// the two-level truncation stops being trustworthy.
pub fn exceeds_anharmonicity(alpha0: f64, gamma_eff: f64, anharmonicity: f64) -> bool {
    rabi_frequency(alpha0, gamma_eff) >= anharmonicity
}

pub(crate) fn check_anharmonicity(alpha0: f64, gamma_eff: f64, anharmonicity: f64) -> bool {
    let hit = exceeds_anharmonicity(alpha0, gamma_eff, anharmonicity);
    if hit {
        warn!(
            "Rabi frequency {:.4} reaches the anharmonicity {anharmonicity}; higher levels would be excited",
            rabi_frequency(alpha0, gamma_eff)
        );
    }
    hit
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_is_inclusive() {
        assert!(exceeds_anharmonicity(25.0, 1.0, 50.0));
        assert!(!exceeds_anharmonicity(24.999, 1.0, 50.0));
        assert!(exceeds_anharmonicity(12.5, 4.0, 50.0));
    }
}
