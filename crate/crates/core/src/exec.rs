//! Execution-mode switch: data-parallel scans with a sequential fallback.
//!
//! Scans over independent items (players, tree classes, oracle cases) go
//! through [`map_slice`], which dispatches to rayon when the `parallel`
//! feature is enabled and the caller asked for [`ExecMode::Auto`]. Results
//! are collected in input order either way, so the two modes are
//! indistinguishable except for wall-clock time.

/// How scans over independent work items execute.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ExecMode {
    /// Use the parallel pool when compiled in; otherwise sequential.
    #[default]
    Auto,
    /// Always run sequentially, even when the parallel pool is available.
    Sequential,
}

#[cfg(feature = "parallel")]
pub(crate) fn map_slice<T, U, F>(items: &[T], mode: ExecMode, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    match mode {
        ExecMode::Auto => items.par_iter().map(f).collect(),
        ExecMode::Sequential => items.iter().map(f).collect(),
    }
}

#[cfg(not(feature = "parallel"))]
pub(crate) fn map_slice<T, U, F>(items: &[T], _mode: ExecMode, f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    items.iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_modes_preserve_order() {
        let items: Vec<u64> = (0..100).collect();
        let auto = map_slice(&items, ExecMode::Auto, |&x| x * x);
        let seq = map_slice(&items, ExecMode::Sequential, |&x| x * x);
        assert_eq!(auto, seq);
        assert_eq!(auto[7], 49);
    }
}
