//! Text notation for NMR pulse programs.
//!
//! A program is a `-`-separated list of events: RF rotations `Rx1(pi/3)`,
//! gradient crushes `Gz`, the coupling delay `tau` and general delays
//! `d(n/(12*J))`. See [`parser`] for the grammar.

mod ast;
mod eval;
pub mod parser;

pub use ast::{render, AngleExpr, Axis, BinaryOp, PulseEvent, PulseSequence, Spins, Symbol};
pub use eval::{evaluate, Bindings, ConcreteEvent, ConcreteSequence, EvalError};
pub use parser::{parse, ParseError, ParseErrorKind};
