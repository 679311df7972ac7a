//! Order-preserving maps over evaluation grids.
//!
//! With the `parallel` feature (on by default) [`Execution::Parallel`] runs on
//! the rayon pool; without it, every execution mode falls back to a plain
//! sequential loop. Results are always returned in input order, so tables do
//! not depend on scheduling.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => items.par_iter().map(f).collect(),
            _ => items.iter().map(f).collect(),
        }
    }

    /// Midpoint sum of `f` over `n` panels of `[a, b]`, split across workers
    /// when parallel. Chunked partial sums are combined in a fixed order.
    pub fn midpoint_sum<F>(self, f: F, a: f64, b: f64, n: usize) -> f64
    where
        F: Fn(f64) -> f64 + Sync + Send,
    {
        const CHUNK: usize = 256;
        let h = (b - a) / n as f64;
        let starts: Vec<usize> = (0..n).step_by(CHUNK).collect();
        let partial = self.map(&starts, |&s| {
            (s..(s + CHUNK).min(n))
                .map(|i| f(a + (i as f64 + 0.5) * h))
                .sum::<f64>()
        });
        partial.iter().sum::<f64>() * (b - a) / n as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_preserved() {
        let xs: Vec<u64> = (0..1000).collect();
        for exec in [Execution::Sequential, Execution::Parallel] {
            let ys = exec.map(&xs, |x| x * x);
            assert!(ys.iter().enumerate().all(|(i, &y)| y == (i * i) as u64));
        }
    }

    #[test]
    fn midpoint_sum_is_schedule_independent() {
        let f = |x: f64| (3.0 * x).sin() + x * x;
        let a = Execution::Sequential.midpoint_sum(f, 0.0, 2.0, 100_000);
        let b = Execution::Parallel.midpoint_sum(f, 0.0, 2.0, 100_000);
        assert_eq!(a.to_bits(), b.to_bits());
        let exact = (1.0 - (6.0_f64).cos()) / 3.0 + 8.0 / 3.0;
        assert!((a - exact).abs() < 1e-9);
    }
}
