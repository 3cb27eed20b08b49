//! Graph complexes: specs, enumeration, differentials and algebraic structure.

mod action;
mod audit;
mod compose;
mod differential;
mod enumerate;
mod extension;
mod gradings;
mod hairy;
mod loops;
mod mc;
mod spec;

pub use action::{class_image, gc_action, vertex_insertion};
pub use audit::{closed_form_bound, degree_audit, fiber_dimension, form_degree, AuditRow, DegreeAudit};
pub use compose::{compose, unital_insert};
pub use extension::{solve_cocycle_extension, Extension};
pub use gradings::{excess_audit, excess_of, hairy_excess, hodge, loop_order, total_excess, ExcessAudit, HomogeneousSampler};
pub use hairy::{bracket, cup, hair_count, pre_lie};
pub use differential::{differential, differential_of, differential_with};
pub use enumerate::{check_window, enumerate, loop_grading, BasisTable};
pub use loops::{hedgehog, loop_classes, loop_graph, Congruence, LoopClassReport, LoopClassRow};
pub use mc::{corona, scaling, split_by_hairs, tripod_series, truncate_hairs, MaurerCartan, Twisted};
pub use spec::{ComplexSpec, Family, HairBound, Twist, Window};

use crate::graph::GraphError;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invalid complex: {0}")]
    Spec(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("window is not finite: {0}")]
    Window(String),
    #[error("no solution: {0}")]
    Unsolvable(String),
}
