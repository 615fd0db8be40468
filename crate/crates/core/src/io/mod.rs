//! JSON interchange: games, densities, reports and certificates.

mod game;
mod report;

pub use game::{
    digraph_game, load_game, named_game, parse_density_json, parse_game, DensityJson, GameJson, GroupRef,
    LoadedGame, Number,
};
pub use report::{
    complex_matrix, complex_rows, verify_certificate, BoundReport, BoundType, Certificate, ComplexRows, ValueJson,
    Verification,
};

#[cfg(test)]
mod tests;
