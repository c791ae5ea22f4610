//! Reference implementations shared by the integration tests.

#![allow(dead_code)]

pub mod series_oracle;
