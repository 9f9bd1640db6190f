#![no_main]

use clap::Parser;
use libfuzzer_sys::fuzz_target;
use spinpoly_cli::Cli;

// Argument parsing only; running the commands would just fuzz the timer.
fuzz_target!(|input: &str| {
    let args = std::iter::once("spinpoly").chain(input.split('\0'));
    let _ = Cli::try_parse_from(args);
});
