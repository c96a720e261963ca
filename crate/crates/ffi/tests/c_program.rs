//! Compiles a C program against the generated header and the static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <stdio.h>
#include "klein_freq.h"

int main(void) {
    int64_t coords[9] = {0, 0, 1, 0, 1, 1, 1, 0, 1};
    KfFace *face = NULL;
    if (kf_face_from_vertices(coords, 3, &face) != KF_STATUS_OK) return 10;
    uint64_t ld = 0;
    if (kf_face_integer_distance(face, &ld) != KF_STATUS_OK || ld != 1) return 11;
    KfFrequency r;
    if (kf_frequency_exact(face, 1e-6, &r) != KF_STATUS_OK) return 12;
    kf_face_free(face);
    int64_t cf[4];
    uintptr_t len = 0;
    if (kf_cf_expand(7, 5, KF_PARITY_SHORTEST, cf, 4, &len) != KF_STATUS_OK) return 13;
    if (kf_face_from_json("not json", &face) != KF_STATUS_INVALID_ARGUMENT) return 14;
    printf("%.6f %zu %lld%lld%lld\n", r.value, (size_t)len, (long long)cf[0], (long long)cf[1], (long long)cf[2]);
    return 0;
}
"#;

#[test]
fn header_compiles_and_links() {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<test> -> target/<profile>
    let profile_dir = std::env::current_exe()
        .unwrap()
        .parent()
        .unwrap()
        .parent()
        .unwrap()
        .to_path_buf();
    let lib = profile_dir.join("libklein_freq_ffi.a");
    assert!(lib.exists(), "static library missing at {}", lib.display());
    let work = std::env::temp_dir().join(format!("klein-freq-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&work).unwrap();
    let src = work.join("main.c");
    let exe = work.join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let status = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&exe)
        .arg(&src)
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "0.430464 3 122\n");
}
