//! Check registry, result cache, runner and report formats behind the command-line tool.

pub mod cache;
pub mod eval;
pub mod registry;
pub mod report;
pub mod runner;

pub use cache::{Cache, CacheEntry, CacheKey, CacheStat, ALGORITHM_VERSION, CACHE_DIR_ENV};
pub use eval::{eval, parse_tau, EvalFunction};
pub use registry::{find_check, list_checks, registry, Check, CheckEnv, Evidence, Threshold};
pub use report::{parse_json, render, CheckResult, Format, Record, Status, Summary};
pub use runner::{evaluate, resolve, run_checks, Selection};
