pub mod check;
pub mod cli;
pub mod dims;
pub mod elaborate;
pub mod error;
pub mod expr;
pub mod frontend;
pub mod interval;
pub mod model;
pub mod netlist;
pub mod path;
pub mod quantity;
pub mod solve;
pub mod stdlib;
