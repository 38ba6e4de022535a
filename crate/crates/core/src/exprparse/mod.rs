//! Plain-text problem files and expressions: parsing and rendering.
//!
//! Jets are written `name_digits`, one digit per coordinate derivative, so
//! `a_13` is `∂1∂3 a`. Rendering produces text that parses back to an
//! expression with the same normal form.

mod error;
mod lexer;
mod parser;
mod problem;
mod render;

pub use error::{ParseError, Position};
pub use parser::Scope;
pub use problem::{parse, parse_expr, Declaration, Mode, ProblemSpec};
pub use render::{render, render_nf};
