//! Symbolic-numeric verification engine for soliton structures on a
//! radiating spherically symmetric metric in outgoing null coordinates
//! (u, r, theta, phi).
//!
//! The pipeline: second-order jets ([`jet`]) feed scalar fields ([`field`]),
//! which define the metric and its curvature ([`metric`], [`curvature`]),
//! which feed Lie derivatives and soliton residuals ([`lie`], [`soliton`]),
//! plus the closed-form candidate solutions ([`separation`], [`potential`]),
//! a least-squares nonexistence probe ([`lsq`]) and report plumbing
//! ([`grid`], [`report`]).

// Tensor algebra reads best with explicit index loops over 0..4.
#![allow(clippy::needless_range_loop)]

pub mod curvature;
pub mod error;
pub mod field;
pub mod grid;
pub mod jet;
pub mod lie;
pub mod lsq;
pub mod mass;
pub mod metric;
pub mod potential;
pub mod report;
pub mod separation;
pub mod soliton;

pub use error::{Error, Result};
pub use field::ScalarField;
pub use grid::{AxisSpec, SampleGrid};
pub use jet::{Coord, DomainLimits, Jet2, JetError, Point4};
pub use lie::VectorField4;
pub use lsq::{BasisSpec, FitResult, ProbeReport};
pub use mass::MassFunction;
pub use potential::{GradientConvention, PotentialSpec};
pub use report::{
    emit, render, run, CheckResult, Command, OutputFormat, ResidualReport, RunConfig, Tolerances,
    Verdict,
};
pub use separation::SeparationFamily;
pub use soliton::{FlowClass, SolitonParams, SolvedSolution};
