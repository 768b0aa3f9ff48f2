#![no_std]

extern crate alloc;

pub mod field;
pub mod valuation;
pub mod approx;
pub mod scramble;
pub mod rings;
pub mod sample;
pub mod topology;
pub mod locsent;
