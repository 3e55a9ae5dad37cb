//! Holds no code. The checks live in `tests/acceptance.rs`, run with
//! `cargo test -p craft-acceptance --test acceptance`.
