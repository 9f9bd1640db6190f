#![no_main]

use libfuzzer_sys::fuzz_target;
use spinpoly::SpinLabel;

fuzz_target!(|input: &str| {
    if let Ok(j) = input.parse::<SpinLabel>() {
        // Display must parse back to the same label.
        assert_eq!(j.to_string().parse::<SpinLabel>(), Ok(j));
    }
});
