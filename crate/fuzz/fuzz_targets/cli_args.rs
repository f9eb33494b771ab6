#![no_main]

use clap::Parser;
use libfuzzer_sys::fuzz_target;
use pseudospline_cli::{build_symbol, Cli, Command};

// NUL-separated argument vectors; only parsing and symbol construction run.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let args = std::iter::once("pseudospline").chain(text.split('\0'));
    let Ok(cli) = Cli::try_parse_from(args) else { return };
    let scheme = match &cli.command {
        Command::Mask { scheme, .. } | Command::Support { scheme } => scheme,
        _ => return,
    };
    // keep constructions small
    if scheme.n.is_some_and(|n| n > 6) || scheme.l.is_some_and(|l| l > 6) {
        return;
    }
    let _ = build_symbol(scheme);
});
