//! Holds the workspace acceptance run (`tests/acceptance.rs`), which prints
//! one PASS/FAIL line per criterion and exits non-zero if any fails.
