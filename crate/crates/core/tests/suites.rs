//! The check suites over seeded samples of every fixture.

mod common;

use common::*;
use finsler_core::verify::{run_checks, CheckKind, CheckOptions};

#[test]
fn default_suites_pass_except_kahler_on_m4() {
    let opts = CheckOptions { points: 5, ..CheckOptions::default() };
    for (name, model) in all() {
        let kinds: Vec<_> = CheckKind::DEFAULT.iter().chain(CheckKind::EXTRA.iter()).copied().collect();
        for r in run_checks(&model, &kinds, &opts) {
            let expect_fail = name == "m4" && r.kind == CheckKind::Kahler;
            println!("{name} {:<22} max {:.3e} pass {} {:?}", r.kind.name(), r.max, r.pass, r.note);
            assert_eq!(r.pass, !expect_fail, "{name} {}: {r:?}", r.kind.name());
        }
    }
}
