// Copyright 2026 The qdm-cphase Authors
// SPDX-License-Identifier: Apache-2.0

fn main() -> std::process::ExitCode {
    qdm_cphase::cli::main()
}
