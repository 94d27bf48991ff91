//! Compliance verification for security directives.
//!
//! Directive measures are written in a small line-oriented DSL ([`dsl`]), compiled
//! into description-logic class definitions held in a [`kb::KnowledgeBase`], and
//! checked against an organization's asserted measures by the [`reasoner`]. The
//! [`gap`] module reports the (article, task, object) measures an organization is
//! still missing, and [`turtle`] reads and writes knowledge bases as Turtle.

pub mod dsl;
pub mod gap;
pub mod kb;
pub mod reasoner;
pub mod turtle;
