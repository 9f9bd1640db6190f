#![no_main]

use libfuzzer_sys::fuzz_target;
use spinpoly::Axis;

fuzz_target!(|input: &str| {
    if let Ok(axis) = input.parse::<Axis>() {
        let n: f64 = axis.components().iter().map(|x| x * x).sum();
        assert!((n - 1.0).abs() < 1e-12, "{input:?} gave {axis:?}");
    }
});
