//! Holds the `acceptance` test target, which runs every scenario with its
//! default configuration and prints one PASS/FAIL line per criterion.
//!
//! Run it alone with `cargo test -p seqprob-validation --test acceptance`.
