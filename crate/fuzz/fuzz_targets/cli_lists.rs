#![no_main]

use libfuzzer_sys::fuzz_target;
use triset::problems::ProblemName;
use triset::selection::SelectionMethod;
use triset_bench::lists;
use triset_bench::Algorithm;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(seeds) = lists::parse_seeds(s) {
        assert!(seeds.len() as u64 <= lists::MAX_SEEDS);
    }
    let _ = lists::parse_sizes(s);
    let _ = lists::parse_problems(s);
    let _ = lists::parse_algorithms(s);
    let _ = lists::parse_selections(s);
    let _ = s.parse::<ProblemName>();
    let _ = s.parse::<SelectionMethod>();
    let _ = s.parse::<Algorithm>();
});
