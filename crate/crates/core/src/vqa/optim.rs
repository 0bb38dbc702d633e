//! Nelder-Mead simplex minimizer for noisy, derivative-free cost
//! landscapes.
//!
//! Standard reflection/expansion/contraction/shrink moves; for dimensions
//! of eight and above the coefficients switch to the dimension-adapted
//! variant (expansion `1 + 2/d`, contraction `0.75 - 1/(2d)`, shrink
//! `1 - 1/d`), which behaves much better in high dimension.
//!
//! Two stopping rules complement the evaluation budget, both tuned for
//! shot-noisy objectives: a classic simplex f-spread tolerance, and a
//! stagnation window that stops when the best value seen has not improved
//! by more than the tolerance for a fixed number of evaluations. The
//! stagnation rule is what terminates runs on noise-saturated landscapes,
//! where the f-spread never collapses below the shot-noise floor.

/// Stopping configuration.
#[derive(Clone, Copy, Debug)]
pub struct NmOptions {
    /// Hard cap on cost-function evaluations.
    pub max_evals: usize,
    /// Simplex f-spread below which the search is declared converged, and
    /// the minimum decrease of the best value that counts as progress.
    pub ftol: f64,
    /// Evaluations without progress before stopping; 0 disables the rule.
    pub stall_evals: usize,
    /// Offset added to each coordinate in turn to seed the simplex.
    pub simplex_step: f64,
}

impl Default for NmOptions {
    fn default() -> Self {
        NmOptions {
            max_evals: 400,
            ftol: 1e-3,
            stall_evals: 120,
            simplex_step: 0.6,
        }
    }
}

/// Result of one minimization run.
#[derive(Clone, Debug)]
pub struct NmResult {
    pub best_x: Vec<f64>,
    pub best_f: f64,
    /// Total cost-function evaluations performed.
    pub evals: usize,
    /// Every cost value in evaluation order.
    pub trace: Vec<f64>,
}

struct Tracker<F> {
    f: F,
    trace: Vec<f64>,
    best_x: Vec<f64>,
    best_f: f64,
    last_improvement: usize,
    ftol: f64,
}

impl<F: FnMut(&[f64]) -> f64> Tracker<F> {
    fn eval(&mut self, x: &[f64]) -> f64 {
        let v = (self.f)(x);
        self.trace.push(v);
        if v < self.best_f - self.ftol {
            self.best_f = v;
            self.best_x = x.to_vec();
            self.last_improvement = self.trace.len();
        } else if v < self.best_f {
            // Track the value without resetting the stagnation window.
            self.best_f = v;
            self.best_x = x.to_vec();
        }
        v
    }
}

/// Minimizes `f` starting from `x0`.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(f: F, x0: &[f64], opts: &NmOptions) -> NmResult {
    let dim = x0.len();
    assert!(dim > 0, "cannot optimize zero parameters");

    let (alpha, gamma, beta, sigma) = if dim >= 8 {
        let d = dim as f64;
        (1.0, 1.0 + 2.0 / d, 0.75 - 1.0 / (2.0 * d), 1.0 - 1.0 / d)
    } else {
        (1.0, 2.0, 0.5, 0.5)
    };

    let mut t = Tracker {
        f,
        trace: Vec::new(),
        best_x: x0.to_vec(),
        best_f: f64::INFINITY,
        last_improvement: 0,
        ftol: opts.ftol,
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    for i in 0..dim {
        let mut v = x0.to_vec();
        v[i] += opts.simplex_step;
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| t.eval(v)).collect();

    let stop = |t: &Tracker<F>, values: &[f64]| {
        if t.trace.len() >= opts.max_evals {
            return true;
        }
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &v in values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if hi - lo <= opts.ftol {
            return true;
        }
        opts.stall_evals > 0 && t.trace.len() - t.last_improvement >= opts.stall_evals
    };

    while !stop(&t, &values) {
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        let best = order[0];
        let second_worst = order[dim - 1];
        let worst = order[dim];

        let mut centroid = vec![0.0; dim];
        for &i in &order[..dim] {
            for (c, x) in centroid.iter_mut().zip(&simplex[i]) {
                *c += x;
            }
        }
        for c in centroid.iter_mut() {
            *c /= dim as f64;
        }

        let lerp = |from: &[f64], coeff: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(from)
                .map(|(c, x)| c + coeff * (c - x))
                .collect()
        };

        let reflected = lerp(&simplex[worst], alpha);
        let fr = t.eval(&reflected);

        if fr < values[best] {
            let expanded = lerp(&simplex[worst], alpha * gamma);
            let fe = t.eval(&expanded);
            if fe < fr {
                simplex[worst] = expanded;
                values[worst] = fe;
            } else {
                simplex[worst] = reflected;
                values[worst] = fr;
            }
        } else if fr < values[second_worst] {
            simplex[worst] = reflected;
            values[worst] = fr;
        } else {
            let (base, fbase) = if fr < values[worst] {
                (reflected.clone(), fr)
            } else {
                (simplex[worst].clone(), values[worst])
            };
            let contracted: Vec<f64> = centroid
                .iter()
                .zip(&base)
                .map(|(c, x)| c + beta * (x - c))
                .collect();
            let fc = t.eval(&contracted);
            if fc < fbase {
                simplex[worst] = contracted;
                values[worst] = fc;
            } else {
                let anchor = simplex[best].clone();
                for i in 0..=dim {
                    if i == best {
                        continue;
                    }
                    let shrunk: Vec<f64> = anchor
                        .iter()
                        .zip(&simplex[i])
                        .map(|(b, x)| b + sigma * (x - b))
                        .collect();
                    values[i] = t.eval(&shrunk);
                    simplex[i] = shrunk;
                    if t.trace.len() >= opts.max_evals {
                        break;
                    }
                }
            }
        }
    }

    NmResult {
        best_x: t.best_x,
        best_f: t.best_f,
        evals: t.trace.len(),
        trace: t.trace,
    }
}
