//! Reachability in directed grid graphs with a working set far below the
//! grid size.
//!
//! The grid is cut into blocks of side about `N^{1/3}`. Each block's
//! rim-to-rim reachability becomes a circle graph, which is rewritten into a
//! plane gadget graph whose edges carry level labels. The gadgets are
//! stitched along the grid edges between blocks and searched from `s` with
//! a separator-based recursion. See [`pipeline::solve`].

pub mod block;
pub mod check;
pub mod circle;
pub mod gadget;
pub mod grid;
pub mod ledger;
pub mod level;
pub mod oracle;
pub mod pipeline;
pub mod plane;
pub mod separator;
pub mod stats;
pub mod token;

pub use circle::{CircleGraph, InnerSolver};
pub use gadget::{GadgetGraph, TransformOptions};
pub use grid::{bfs_reachable, gen_random, parse_grid, write_grid, GridGraph, VertexId};
pub use ledger::{Ledger, LedgerSnapshot};
pub use level::{Label, Level};
pub use pipeline::{solve, Mode, SolveConfig, SolveError, SolveReport};
pub use separator::{ReachConfig, Strategy};
pub use token::TokenOptions;
