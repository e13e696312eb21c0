//! Bundled presentations.

use crate::model::EndPeriodic;
use crate::schema::Presentation;

pub const LINE: &str = include_str!("../fixtures/line.json");
pub const ROSERAY: &str = include_str!("../fixtures/roseray.json");
pub const ROSE2: &str = include_str!("../fixtures/rose2.json");
pub const FIG1: &str = include_str!("../fixtures/fig1.json");
pub const BROKEN: &str = include_str!("../fixtures/broken.json");

/// Name and text of every valid bundled presentation.
pub const ALL: [(&str, &str); 4] = [
    ("line", LINE),
    ("roseray", ROSERAY),
    ("rose2", ROSE2),
    ("fig1", FIG1),
];

pub fn presentation(text: &str) -> Presentation {
    Presentation::from_json(text).expect("bundled fixture parses")
}

pub fn load(text: &str) -> EndPeriodic {
    EndPeriodic::new(presentation(text)).expect("bundled fixture validates")
}

pub fn line() -> EndPeriodic {
    load(LINE)
}

pub fn roseray() -> EndPeriodic {
    load(ROSERAY)
}

pub fn rose2() -> EndPeriodic {
    load(ROSE2)
}

pub fn fig1() -> EndPeriodic {
    load(FIG1)
}
