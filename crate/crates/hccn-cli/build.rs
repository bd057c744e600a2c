use std::process::Command;

/// Embed a short build identifier so output files can be traced back to the
/// exact sources that produced them. Falls back to "unknown" outside a git
/// checkout (e.g. a vendored tarball).
fn main() {
    let rev = Command::new("git")
        .args(["rev-parse", "--short", "HEAD"])
        .output()
        .ok()
        .filter(|o| o.status.success())
        .and_then(|o| String::from_utf8(o.stdout).ok())
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .unwrap_or_else(|| "unknown".to_string());
    println!("cargo:rustc-env=HCCN_BUILD_ID={rev}");
    // Re-run when the checked-out commit moves.
    println!("cargo:rerun-if-changed=../../.git/HEAD");
}
