//! Bundled arrangement files.

use crate::geometry::{decone, parse_arrangement, parse_central, Arrangement, CentralArrangement};
use crate::qnum::QNum;

pub const THREE_CENTRAL: &str = include_str!("../../../corpus/three_central.arr");
pub const FOUR_LINES: &str = include_str!("../../../corpus/fig2_four_lines.arr");
pub const ICOSIDODECAHEDRAL: &str = include_str!("../../../corpus/icosidodecahedral.central3");
pub const ICOSIDODECA_DECONE: &str = include_str!("../../../corpus/icosidodeca_decone.arr");
pub const DOUBLE_STAR: &str = include_str!("../../../corpus/double_star.arr");
pub const THREE_LINES_PRESENTATION: &str = include_str!("../../../corpus/three_lines_presentation.pres");

/// Index of the plane sent to infinity when deconing the icosidodecahedral arrangement.
pub const ICOSIDODECA_INFINITY: usize = 15;

/// Lines of the deconed icosidodecahedral arrangement kept in the double star (0-based).
pub const DOUBLE_STAR_LINES: [usize; 10] = [5, 6, 7, 8, 9, 10, 11, 12, 13, 14];

pub fn three_central() -> Arrangement<QNum> {
    parse_arrangement(THREE_CENTRAL).expect("bundled file parses")
}

pub fn four_lines() -> Arrangement<QNum> {
    parse_arrangement(FOUR_LINES).expect("bundled file parses")
}

pub fn icosidodecahedral() -> CentralArrangement<QNum> {
    parse_central(ICOSIDODECAHEDRAL).expect("bundled file parses")
}

pub fn icosidodeca_decone() -> Arrangement<QNum> {
    parse_arrangement(ICOSIDODECA_DECONE).expect("bundled file parses")
}

pub fn double_star() -> Arrangement<QNum> {
    parse_arrangement(DOUBLE_STAR).expect("bundled file parses")
}

/// Recomputes the deconed icosidodecahedral arrangement from the central one.
pub fn derive_icosidodeca_decone() -> Arrangement<QNum> {
    decone(&icosidodecahedral(), ICOSIDODECA_INFINITY).expect("valid infinity index")
}

/// Recomputes the double star from the deconed icosidodecahedral arrangement.
pub fn derive_double_star() -> Arrangement<QNum> {
    derive_icosidodeca_decone()
        .subarrangement(&DOUBLE_STAR_LINES)
        .expect("distinct lines")
}
