//! Index-ordered evaluation of independent sweep points.
//!
//! With the `parallel` feature (default) work is spread over the rayon pool;
//! without it every sweep runs on the calling thread. Results are always
//! returned in input order, so both paths produce identical output.

/// Evaluates `f` at every item of `items`, preserving order.
pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        parallel::map(items, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        sequential::map(items, f)
    }
}

/// Like [`map`] but stops at the first error.
pub fn try_map<T, U, E, F>(items: &[T], f: F) -> Result<Vec<U>, E>
where
    T: Sync,
    U: Send,
    E: Send,
    F: Fn(&T) -> Result<U, E> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        parallel::try_map(items, f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        sequential::try_map(items, f)
    }
}

pub mod sequential {
    pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
    where
        F: Fn(&T) -> U,
    {
        items.iter().map(f).collect()
    }

    pub fn try_map<T, U, E, F>(items: &[T], f: F) -> Result<Vec<U>, E>
    where
        F: Fn(&T) -> Result<U, E>,
    {
        items.iter().map(f).collect()
    }
}

#[cfg(feature = "parallel")]
pub mod parallel {
    use rayon::prelude::*;

    pub fn map<T, U, F>(items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        items.par_iter().map(f).collect()
    }

    /// The reported error is the one with the lowest index, matching the
    /// sequential path.
    pub fn try_map<T, U, E, F>(items: &[T], f: F) -> Result<Vec<U>, E>
    where
        T: Sync,
        U: Send,
        E: Send,
        F: Fn(&T) -> Result<U, E> + Sync + Send,
    {
        let results: Vec<Result<U, E>> = items.par_iter().map(f).collect();
        results.into_iter().collect()
    }
}

/// `points` evenly spaced values from `start` to `stop` inclusive.
/// A single point yields `[start]`.
pub fn linspace(start: f64, stop: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (points - 1) as f64;
            (0..points)
                .map(|i| {
                    if i == points - 1 {
                        stop
                    } else {
                        start + step * i as f64
                    }
                })
                .collect()
        }
    }
}
