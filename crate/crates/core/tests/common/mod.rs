#![allow(dead_code)]

pub mod gen;
pub mod jones;
pub mod oracle;
