pub mod acceptance;
pub mod algebra;
pub mod c_operator;
pub mod cli;
pub mod closed_forms;
pub mod matrix_model;
pub mod perturbation;
pub mod spectral;
