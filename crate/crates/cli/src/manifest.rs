//! Run manifests: enough to re-run a command and byte-compare its outputs.

use sha2::{Digest, Sha256};

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Render a manifest: tool version, command line, timestamp, seed, the
/// digests of every written file, and the governing config echo.
pub fn render(
    command: &str,
    seed: Option<u64>,
    outputs: &[(String, String)],
    config_echo: &str,
) -> String {
    let mut out = String::new();
    out.push_str("# luxbot run manifest v1\n");
    out.push_str("[run]\n");
    out.push_str(&format!("tool = luxbot {}\n", env!("CARGO_PKG_VERSION")));
    out.push_str(&format!("command = {command}\n"));
    out.push_str(&format!("created = {}\n", chrono::Utc::now().to_rfc3339()));
    if let Some(seed) = seed {
        out.push_str(&format!("seed = {seed}\n"));
    }
    out.push_str("\n[outputs]\n");
    for (name, digest) in outputs {
        out.push_str(&format!("{name} = sha256:{digest}\n"));
    }
    out.push_str("\n# ---- config echo ----\n");
    out.push_str(config_echo);
    out
}
