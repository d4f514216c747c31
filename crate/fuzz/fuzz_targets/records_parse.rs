#![no_main]

use libfuzzer_sys::fuzz_target;
use triband::experiments::records::{parse_csv, to_csv_string};

fuzz_target!(|data: &[u8]| {
    if let Ok(records) = parse_csv(data) {
        let text = to_csv_string(&records);
        let again = parse_csv(text.as_bytes()).expect("serialized records parse");
        assert_eq!(records, again);
    }
});
