//! Generates `include/quatorder.h` with cbindgen. The header is
//! committed so C consumers can read it without a Rust toolchain; this
//! script rewrites it only when the generated text actually changes.

use std::env;
use std::fs;
use std::path::PathBuf;

fn main() {
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=build.rs");

    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").expect("CARGO_MANIFEST_DIR"));
    let config = cbindgen::Config {
        language: cbindgen::Language::C,
        cpp_compat: true,
        include_guard: Some("QUATORDER_H".into()),
        header: Some("/* C API for the quatorder library. Generated by cbindgen; do not edit. */".into()),
        documentation: true,
        ..Default::default()
    };
    let bindings = cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("cbindgen failed to generate the header");

    let mut generated = Vec::new();
    bindings.write(&mut generated);
    let header = crate_dir.join("include").join("quatorder.h");
    if fs::read(&header).ok().as_deref() != Some(generated.as_slice()) {
        fs::create_dir_all(header.parent().expect("include dir")).expect("create include dir");
        fs::write(&header, &generated).expect("write header");
    }
}
