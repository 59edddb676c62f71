//! A small reference game used throughout the test-suite and docs.
//!
//! Eight vertices, six distinct priorities, three vertices owned by player 0.
//! Player 0 wins vertices 0,1,2,4,5; player 1 wins 3,6,7 (she can lock the
//! play into the odd 3-3 cycle between vertices 3 and 7).

use crate::pgsolver::{parse_pgsolver, ExplicitGame};

pub const EIGHT_VERTEX_GAME: &str = "\
parity 7;
0 5 1 1;
1 6 0 4,6;
2 4 0 1;
3 2 1 2,6,7;
4 1 0 0,5;
5 2 1 1;
6 3 1 5,2,7;
7 3 1 3;
";

pub fn eight_vertex_game() -> ExplicitGame {
    parse_pgsolver(EIGHT_VERTEX_GAME).expect("reference game is well-formed")
}

/// Winning regions of the reference game.
pub const W0_IDS: [u64; 5] = [0, 1, 2, 4, 5];
pub const W1_IDS: [u64; 3] = [3, 6, 7];
