use std::fmt;

/// Failure of a command, with the exit code it maps to.
#[derive(Debug)]
pub enum Error {
    /// Malformed input: bad JSON, unknown fields or names, out-of-range options.
    Input(String),
    Io(String, std::io::Error),
    Core(giwa_core::Error),
    Context(String, Box<Error>),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn context(self, ctx: impl Into<String>) -> Self {
        Error::Context(ctx.into(), Box::new(self))
    }

    /// `2` for input and precondition problems, `3` for exhausted resources
    /// or precision.
    pub fn exit_code(&self) -> u8 {
        use giwa_core::Error as E;
        match self {
            Error::Input(_) | Error::Io(..) => 2,
            Error::Core(E::Resource(_) | E::Precision(_) | E::NotStabilized(_)) => 3,
            Error::Core(_) => 2,
            Error::Context(_, inner) => inner.exit_code(),
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Input(m) => f.write_str(m),
            Error::Io(path, e) => write!(f, "{path}: {e}"),
            Error::Core(e) => write!(f, "{e}"),
            Error::Context(c, inner) => write!(f, "{c}: {inner}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<giwa_core::Error> for Error {
    fn from(e: giwa_core::Error) -> Self {
        Error::Core(e)
    }
}
