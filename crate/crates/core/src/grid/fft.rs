//! N-dimensional complex FFTs over an origin-centred periodic grid.
//!
//! Plans are cached per thread, so concurrent callers never share mutable
//! planner state. Line transforms can optionally run on the rayon pool; every
//! line is transformed independently, so the result does not depend on the
//! schedule.

use std::cell::RefCell;
use std::collections::HashMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

static PARALLEL_LINES: AtomicBool = AtomicBool::new(false);

/// Enable or disable data-parallel line transforms (off by default).
pub fn set_parallel(enabled: bool) {
    PARALLEL_LINES.store(enabled, Ordering::Relaxed);
}

pub fn parallel_enabled() -> bool {
    PARALLEL_LINES.load(Ordering::Relaxed)
}

type PlanPair = (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>);

thread_local! {
    static PLANS: RefCell<(FftPlanner<f64>, HashMap<usize, PlanPair>)> =
        RefCell::new((FftPlanner::new(), HashMap::new()));
}

fn plans(n: usize) -> PlanPair {
    PLANS.with(|cell| {
        let mut guard = cell.borrow_mut();
        let (planner, cache) = &mut *guard;
        if let Some(p) = cache.get(&n) {
            return p.clone();
        }
        let pair = (planner.plan_fft_forward(n), planner.plan_fft_inverse(n));
        cache.insert(n, pair.clone());
        pair
    })
}

fn transform_lines(lines: &mut [Complex64], n: usize, inverse: bool) {
    if parallel_enabled() && lines.len() >= 4 * n {
        let chunk = n * (lines.len() / n / rayon::current_num_threads().max(1)).max(1);
        lines.par_chunks_mut(chunk).for_each(|block| {
            let (fwd, inv) = plans(n);
            let plan = if inverse { inv } else { fwd };
            let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
            plan.process_with_scratch(block, &mut scratch);
        });
    } else {
        let (fwd, inv) = plans(n);
        let plan = if inverse { inv } else { fwd };
        let mut scratch = vec![Complex64::new(0.0, 0.0); plan.get_inplace_scratch_len()];
        plan.process_with_scratch(lines, &mut scratch);
    }
}

fn transform(data: &mut [Complex64], dim: usize, n: usize, inverse: bool) {
    let total = data.len();
    debug_assert_eq!(total, n.pow(dim as u32));
    let mut buf = vec![Complex64::new(0.0, 0.0); total];
    for axis in 0..dim {
        let stride = n.pow((dim - 1 - axis) as u32);
        if stride == 1 {
            transform_lines(data, n, inverse);
            continue;
        }
        let outer = total / (n * stride);
        for o in 0..outer {
            for inner in 0..stride {
                let line = (o * stride + inner) * n;
                let base = o * n * stride + inner;
                for j in 0..n {
                    buf[line + j] = data[base + j * stride];
                }
            }
        }
        transform_lines(&mut buf, n, inverse);
        for o in 0..outer {
            for inner in 0..stride {
                let line = (o * stride + inner) * n;
                let base = o * n * stride + inner;
                for j in 0..n {
                    data[base + j * stride] = buf[line + j];
                }
            }
        }
    }
    if inverse {
        let scale = 1.0 / total as f64;
        for v in data.iter_mut() {
            *v *= scale;
        }
    }
}

/// Unnormalized forward transform, in place.
pub(crate) fn forward(data: &mut [Complex64], dim: usize, n: usize) {
    transform(data, dim, n, false);
}

/// Normalized inverse transform, in place.
pub(crate) fn inverse(data: &mut [Complex64], dim: usize, n: usize) {
    transform(data, dim, n, true);
}
