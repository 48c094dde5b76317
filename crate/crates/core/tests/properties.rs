mod common;

use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn reverse_and_normalize_verify(seed in any::<u64>()) {
        common::reverse_and_normalize(seed)?;
    }

    #[test]
    fn transversal_lift_verifies(seed in any::<u64>()) {
        common::transversal_lift(seed)?;
    }

    #[test]
    fn quotient_lift_verifies(seed in any::<u64>()) {
        common::quotient_lift(seed)?;
    }

    #[test]
    fn sandwich_verifies(seed in any::<u64>()) {
        common::sandwich(seed)?;
    }

    #[test]
    fn reversal_duality(seed in any::<u64>()) {
        common::reversal_duality(seed)?;
    }
}
