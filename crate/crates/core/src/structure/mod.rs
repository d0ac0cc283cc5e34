//! Structural checks on ordered triple systems: sum properties, bicycles
//! and Steiner subsystems.
//!
//! Systems are ordered by the natural order on integers and every edge is
//! read ascending as `(a, b, c)`.

mod bicycle;
mod sts;
mod sum;

pub use bicycle::{
    check_bicycle_antipode_theorem, find_bicycle_in_sts, find_bicycles, is_steiner, Bicycle,
    PaschConfig,
};
pub use sts::{find_sub_sts, find_sub_sts_within, SteinerSubsystem};
pub use sum::{
    check_lower_sum_property, check_sum_property, check_upper_sum_property,
    lower_sum_by_links, upper_sum_by_links, SumPropertyReport,
};

pub use crate::verify::is_bipartite_coloring;
