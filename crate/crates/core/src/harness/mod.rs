//! Synthetic data, the FDG classifier, experiment runs and file formats.

pub mod config;
pub mod experiment;
pub mod generate;
pub mod io;

pub use experiment::{
    build_instance, fdg_classify, reference_fdg, run_experiment, structure_counts, Classification,
    ExperimentConfig, ExperimentReport, Instance, Method, StructureCounts,
};
pub use generate::{generate_models, perturb, perturb_with, smooth_fdg, smooth_pdf, GeneratorConfig, Perturbation, ATTR_MAX};
pub use config::{bench_plan, Settings};
