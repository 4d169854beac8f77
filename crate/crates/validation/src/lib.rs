//! Acceptance checks for `fsig-core` live in `tests/acceptance.rs`.
