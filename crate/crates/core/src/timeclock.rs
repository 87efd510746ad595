//! Wall-clock measurement that degrades gracefully on targets without a
//! monotonic clock (wasm). Measured times are diagnostics only; candidate
//! payloads and counts never depend on them.

use std::time::Duration;

/// Runs `f` and returns its result together with the elapsed wall time.
/// On wasm the elapsed time is reported as zero.
pub fn measure<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    #[cfg(not(target_arch = "wasm32"))]
    {
        let start = std::time::Instant::now();
        let out = f();
        (out, start.elapsed())
    }
    #[cfg(target_arch = "wasm32")]
    {
        (f(), Duration::ZERO)
    }
}
