//! The generated header must compile as C and as C++, and a C program must
//! link against the static library.

use std::path::{Path, PathBuf};
use std::process::Command;

fn header_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("include")
}

fn run(cmd: &mut Command) -> String {
    let out = cmd.output().expect("compiler runs");
    assert!(out.status.success(), "{:?} failed:\n{}", cmd, String::from_utf8_lossy(&out.stderr));
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn header_parses_as_c_and_cpp() {
    let header = header_dir().join("openshop.h");
    run(Command::new("cc").args(["-fsyntax-only", "-std=c99", "-Wall", "-Werror", "-x", "c"]).arg(&header));
    run(Command::new("c++").args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c++"]).arg(&header));
}

const PROGRAM: &str = r#"
#include <stdio.h>
#include "openshop.h"

int main(void) {
    OsInstance *inst = NULL;
    OsSchedule *sched = NULL;
    char *lmax = NULL;
    if (os_instance_from_json("{\"m\":2,\"n\":3,\"p\":[[3,0,1],[0,3,1]],\"q\":[0,0,3]}", &inst) != OS_STATUS_OK) return 1;
    if (os_solve_jackson(inst, &sched) != OS_STATUS_OK) return 2;
    if (os_schedule_lmax(inst, sched, &lmax) != OS_STATUS_OK) return 3;
    printf("%s\n", lmax);
    os_string_free(lmax);
    os_schedule_free(sched);
    if (os_instance_from_json("{\"m\":1}", &inst) != OS_STATUS_PARSE_ERROR) return 4;
    printf("%s\n", os_last_error_message());
    os_instance_free(inst);
    return 0;
}
"#;

#[test]
fn c_program_links_static_library() {
    // tests run from target/<profile>/deps; the static library sits one up
    let exe = std::env::current_exe().unwrap();
    let profile_dir = exe.parent().and_then(Path::parent).unwrap();
    let lib = profile_dir.join("libopenshop_ffi.a");
    assert!(lib.exists(), "missing {}", lib.display());
    let tmp = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let src = tmp.join("ffi_smoke.c");
    let bin = tmp.join("ffi_smoke");
    std::fs::write(&src, PROGRAM).unwrap();
    run(Command::new("cc")
        .arg("-I")
        .arg(header_dir())
        .arg(&src)
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&bin));
    let stdout = run(&mut Command::new(&bin));
    let mut lines = stdout.lines();
    assert_eq!(lines.next(), Some("7"));
    assert!(lines.next().unwrap().starts_with("n:"), "{stdout}");
}
