//! Formatter invariants over generated programs.

mod common;

use common::gen::program;
use proptest::prelude::*;
use prolint::config::{CommaStyle, Config};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn formatter_invariants(text in program()) {
        prop_assume!(!common::exceeds_clause_limit(&text, &Config::default()));
        if let Err(e) = common::check_invariants(&text, &Config::default()) {
            prop_assert!(false, "{}", e);
        }
    }

    #[test]
    fn formatter_invariants_structured_commas(text in program()) {
        let mut cfg = Config::default();
        cfg.comma_style = CommaStyle::Structured;
        prop_assume!(!common::exceeds_clause_limit(&text, &cfg));
        if let Err(e) = common::check_invariants(&text, &cfg) {
            prop_assert!(false, "{}", e);
        }
    }

    #[test]
    fn formatter_invariants_narrow(text in program()) {
        let mut cfg = Config::default();
        cfg.max_line_length = 40;
        cfg.indent_size = 2;
        prop_assume!(!common::exceeds_clause_limit(&text, &cfg));
        if let Err(e) = common::check_invariants(&text, &cfg) {
            prop_assert!(false, "{}", e);
        }
    }
}
