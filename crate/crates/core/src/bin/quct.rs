// SPDX-License-Identifier: Apache-2.0

use clap::Parser;

fn main() {
    std::process::exit(quct::cli::main_with(quct::cli::Cli::parse()));
}
