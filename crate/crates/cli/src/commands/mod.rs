pub mod fuzz;
pub mod reproduce;
pub mod verify;

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    Fig1a,
    Fig1b,
    Fig2,
    Fig3,
}

impl Figure {
    pub fn as_str(self) -> &'static str {
        match self {
            Figure::Fig1a => "fig1a",
            Figure::Fig1b => "fig1b",
            Figure::Fig2 => "fig2",
            Figure::Fig3 => "fig3",
        }
    }
}

#[derive(Debug)]
pub enum CommandError {
    Numeric(ps_purify::Error),
    Io(std::io::Error),
}

impl std::fmt::Display for CommandError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CommandError::Numeric(e) => write!(f, "{e}"),
            CommandError::Io(e) => write!(f, "i/o: {e}"),
        }
    }
}

impl From<ps_purify::Error> for CommandError {
    fn from(e: ps_purify::Error) -> Self {
        CommandError::Numeric(e)
    }
}

impl From<std::io::Error> for CommandError {
    fn from(e: std::io::Error) -> Self {
        CommandError::Io(e)
    }
}

impl From<csv::Error> for CommandError {
    fn from(e: csv::Error) -> Self {
        match e.into_kind() {
            csv::ErrorKind::Io(io) => CommandError::Io(io),
            other => CommandError::Io(std::io::Error::other(format!("{other:?}"))),
        }
    }
}

impl From<serde_json::Error> for CommandError {
    fn from(e: serde_json::Error) -> Self {
        CommandError::Io(e.into())
    }
}
