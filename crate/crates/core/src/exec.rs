//! Execution strategy for per-cell maps and fixture sweeps.
//!
//! With the `parallel` feature the work is spread over the rayon pool;
//! without it every map runs sequentially. Results always come back in index
//! order, so the output never depends on the schedule.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// How a batch of independent evaluations is executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    Sequential,
    /// Falls back to sequential execution when the `parallel` feature is off.
    #[default]
    Parallel,
}

impl Mode {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Mode::Parallel
    }
}

/// Per-cell maps below this size stay on the calling thread.
pub const CELL_PAR_THRESHOLD: usize = 64;

/// Maps `f` over `0..n` and collects in index order.
pub fn map_indexed<T, F>(mode: Mode, n: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Send + Sync,
{
    #[cfg(feature = "parallel")]
    if mode.is_parallel() {
        return (0..n).into_par_iter().map(f).collect();
    }
    let _ = mode;
    (0..n).map(f).collect()
}

/// Fallible variant of [`map_indexed`]; the first error in index order wins.
pub fn try_map_indexed<T, E, F>(mode: Mode, n: usize, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Send + Sync,
{
    map_indexed(mode, n, f).into_iter().collect()
}

/// Per-cell map: parallel only when there are enough cells to pay for it.
pub(crate) fn try_map_cells<T, E, F>(n: usize, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(usize) -> Result<T, E> + Send + Sync,
{
    let mode = if n >= CELL_PAR_THRESHOLD {
        Mode::Parallel
    } else {
        Mode::Sequential
    };
    try_map_indexed(mode, n, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn modes_agree_and_preserve_order() {
        let seq = map_indexed(Mode::Sequential, 1000, |i| i * i);
        let par = map_indexed(Mode::Parallel, 1000, |i| i * i);
        assert_eq!(seq, par);
        assert_eq!(seq[31], 961);
    }

    #[test]
    fn first_error_in_index_order() {
        let r: Result<Vec<usize>, usize> =
            try_map_indexed(
                Mode::Parallel,
                100,
                |i| if i % 7 == 3 { Err(i) } else { Ok(i) },
            );
        assert_eq!(r, Err(3));
    }
}
