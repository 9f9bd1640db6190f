#![no_main]

use libfuzzer_sys::fuzz_target;
use spinpoly_cli::output::OutputRecord;

fuzz_target!(|input: &str| {
    let Ok(record) = OutputRecord::from_json(input) else {
        return;
    };
    let again = OutputRecord::from_json(&record.to_json()).expect("own output parses");
    assert_eq!(again, record);
    let _ = record.to_csv();
});
