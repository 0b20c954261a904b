//! Constructive searches and small distance experiments built on the
//! compression statistics.

mod distance;
mod erdos_straus;
mod witness;

pub use distance::{
    anning_lower_bound, integer_distance_line, pairwise_integer_distances,
    rational_distance_family, unit_distance_pairs, unit_gap_point, IntegerDistanceLine,
    RationalFamily, UNIT_DISTANCE_TOL,
};
pub use erdos_straus::{erdos_straus_solve, write_erdos_straus_csv, ErdosStrausSearch, UnitFractionSolution};
pub use witness::{
    power_sum_search, product_search, sandwich_search, write_json_lines, ExistenceWitness,
    SandwichTheorem,
};
