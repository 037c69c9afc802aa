//! Holds the `acceptance` test target, which runs the workspace's
//! end-to-end checks and prints one PASS or FAIL line for each.
//!
//! ```text
//! cargo test -p automart-suite --test acceptance
//! ```
