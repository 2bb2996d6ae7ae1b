// SPDX-License-Identifier: Apache-2.0

fn main() {
    std::process::exit(ssg::cli::main());
}
