//! Compiles a C program against the generated header and the static library.

use std::path::PathBuf;
use std::process::Command;

const PROGRAM: &str = r#"
#include <math.h>
#include <stdio.h>
#include <string.h>
#include "spiralkit.h"

int main(void) {
    SkCircle c0 = {{10.0, 7.0}, 5.0}, c1 = {{0.0, 0.0}, 2.0};
    SkTransition *t = NULL;
    if (sk_solve_s_shape(c0, c1, 0.32, SK_BRANCH_LEFT, &t) != SK_STATUS_OK) return 1;
    SkFrame f;
    if (sk_transition_frame(t, &f) != SK_STATUS_OK) return 2;
    if (fabs(f.b0.x - 20.0 / 7.0) > 1e-12 || fabs(f.theta - 0.867967) > 1e-4) return 3;
    SkSpiral s;
    if (sk_transition_spiral(t, 0, &s) != SK_STATUS_OK) return 4;
    double k;
    if (sk_curvature(s.points, 1.0, &k) != SK_STATUS_OK || fabs(k - 1.0 / s.end_radius) > 1e-9) return 5;
    sk_transition_free(t);

    SkCircle near = {{6.0, 0.0}, 5.0};
    if (sk_solve_s_shape(near, c1, 0.32, SK_BRANCH_LEFT, &t) != SK_STATUS_INFEASIBLE || t != NULL) return 6;
    if (strstr(sk_last_error_message(), "Theorem 3") == NULL) return 7;

    char *json = NULL;
    const char *scene = "{\"kind\": \"point_circle\", \"point\": [0, 0], "
                        "\"circles\": [{\"center\": [13, 15.198684153570664], \"radius\": 5}], \"alpha0\": 0.32}";
    if (sk_solve_json(scene, &json) != SK_STATUS_OK) return 8;
    if (strstr(json, "\"feasible\": true") == NULL) return 9;
    sk_string_free(json);
    printf("ok %s\n", sk_version());
    return 0;
}
"#;

fn cc() -> Option<String> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok())
        .map(String::from)
}

#[test]
fn c_program_links_and_runs() {
    let Some(cc) = cc() else {
        eprintln!("no C compiler found; skipping");
        return;
    };
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<test binary>
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libspiralkit_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());

    let work = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("c_client");
    std::fs::create_dir_all(&work).unwrap();
    let src = work.join("main.c");
    let exe = work.join("main");
    std::fs::write(&src, PROGRAM).unwrap();
    let status = Command::new(&cc)
        .args(["-std=c99", "-Wall", "-Wextra", "-Werror", "-I"])
        .arg(manifest.join("include"))
        .arg(&src)
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success(), "C compile failed");
    let out = Command::new(&exe).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "C client exited with {:?}", out.status);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok 0.1.0"));
}
