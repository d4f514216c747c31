#![no_main]

use libfuzzer_sys::fuzz_target;
use triband::experiments::sweep::SweepAxis;
use triband::SchemeKind;

fuzz_target!(|input: &str| {
    if let Ok(s) = input.parse::<SchemeKind>() {
        assert_eq!(s.name().parse::<SchemeKind>().unwrap(), s);
    }
    if let Ok(a) = input.parse::<SweepAxis>() {
        assert_eq!(a.name().parse::<SweepAxis>().unwrap(), a);
    }
});
