//! Built-in decompositions, embedded as input documents.

use crate::polytope::{parse_input, Decomposition};

pub const NAMES: [&str; 4] = ["interval", "local-p2", "star-square", "simplex"];

const INTERVAL: &str = r#"{"dim": 1, "vertices": [[-1], [0], [1]], "maximal_cells": [[0, 1], [1, 2]], "base_cell": 0}"#;

const LOCAL_P2: &str = r#"{
  "dim": 2,
  "vertices": [[1, 0], [0, 1], [-1, -1], [0, 0]],
  "maximal_cells": [[3, 0, 1], [3, 1, 2], [3, 2, 0]],
  "base_cell": 0
}"#;

const STAR_SQUARE: &str = r#"{
  "dim": 2,
  "vertices": [[0, 0], [1, 0], [0, 1], [-1, 0], [0, -1]],
  "maximal_cells": [[0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 1]],
  "base_cell": 0
}"#;

const SIMPLEX: &str =
    r#"{"dim": 1, "vertices": [[0], [1]], "maximal_cells": [[0, 1]], "base_cell": 0}"#;

pub fn document(name: &str) -> Option<&'static str> {
    match name {
        "interval" => Some(INTERVAL),
        "local-p2" => Some(LOCAL_P2),
        "star-square" => Some(STAR_SQUARE),
        "simplex" => Some(SIMPLEX),
        _ => None,
    }
}

pub fn by_name(name: &str) -> Option<Decomposition> {
    document(name).map(|d| parse_input(d).expect("built-in fixture is valid"))
}

pub fn interval() -> Decomposition {
    by_name("interval").unwrap()
}

pub fn local_p2() -> Decomposition {
    by_name("local-p2").unwrap()
}

pub fn star_square() -> Decomposition {
    by_name("star-square").unwrap()
}

pub fn simplex() -> Decomposition {
    by_name("simplex").unwrap()
}
