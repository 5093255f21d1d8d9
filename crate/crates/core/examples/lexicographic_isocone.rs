//! Lexicographic isocone over a poset: order consistency and saturation sampling.

use nc_causal::experiment::default_lex_fixtures;
use nc_causal::isocone::{lex_order_consistency_check, saturation_check};

fn main() {
    for (name, l) in default_lex_fixtures() {
        let consistency = lex_order_consistency_check(&l, 500, 1);
        let saturation = saturation_check(&l, 100, 200, 1);
        println!(
            "{name:<18} dims {:?}: {} related of {} pairs, consistent {}; saturation: {}",
            l.dims(),
            consistency.related_pairs,
            consistency.pairs_checked,
            consistency.passed,
            saturation.verdict
        );
    }
}
