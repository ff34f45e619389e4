use crate::crawl::CrawlError;
use crate::eval::EvalError;
use crate::taxonomy::TaxonomyError;
use crate::tgraph::TGraphError;

/// Any failure surfaced by the command-line tool.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Crawl(#[from] CrawlError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    TGraph(#[from] TGraphError),
    #[error(transparent)]
    Taxonomy(#[from] TaxonomyError),
}

impl Error {
    /// 1 for usage and configuration problems, 2 for failures at run time.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Taxonomy(_) => 1,
            Error::Crawl(e) => {
                if e.is_runtime() {
                    2
                } else {
                    1
                }
            }
            Error::Eval(EvalError::Crawl { source, .. }) if !source.is_runtime() => 1,
            Error::Eval(EvalError::Spec(_) | EvalError::BlockSize) => 1,
            Error::Eval(_) => 2,
            Error::TGraph(TGraphError::Io { .. }) => 2,
            Error::TGraph(_) => 1,
        }
    }
}
