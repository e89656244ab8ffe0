//! Session files and command dispatch for the `petit` binary.

pub mod run;
pub mod session;

pub use run::{run, Outcome, Settings, COMMANDS};
pub use session::{parse_session, Context, Format, SessionFile};
