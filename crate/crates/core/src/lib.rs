pub mod error;
pub mod linalg;
pub mod quantum;
pub mod sdp;
pub mod metrics;
pub mod realist;
pub mod seesaw;
pub mod oracle;
pub mod audit;
pub mod io;
pub mod plot;
pub mod cli;
