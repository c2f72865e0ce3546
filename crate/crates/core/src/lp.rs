//! Exact feasibility for systems `A z <= b, z >= 0` by the auxiliary-variable
//! simplex method with Bland's rule.

use crate::scalar::Scalar;

struct Tableau<F> {
    rows: Vec<Vec<F>>,
    rhs: Vec<F>,
    basis: Vec<usize>,
    cost: Vec<F>,
    value: F,
}

impl<F: Scalar> Tableau<F> {
    fn pivot(&mut self, leave: usize, enter: usize) {
        let p = self.rows[leave][enter].clone();
        for v in self.rows[leave].iter_mut() {
            *v = v.clone() / p.clone();
        }
        self.rhs[leave] = self.rhs[leave].clone() / p;
        let pivot_row = self.rows[leave].clone();
        let pivot_rhs = self.rhs[leave].clone();
        for i in 0..self.rows.len() {
            if i == leave {
                continue;
            }
            let f = self.rows[i][enter].clone();
            if f.is_zero() {
                continue;
            }
            for (v, pv) in self.rows[i].iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v = v.clone() - f.clone() * pv.clone();
                }
            }
            self.rhs[i] = self.rhs[i].clone() - f * pivot_rhs.clone();
        }
        let f = self.cost[enter].clone();
        if !f.is_zero() {
            for (c, pv) in self.cost.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *c = c.clone() - f.clone() * pv.clone();
                }
            }
            self.value = self.value.clone() + f * pivot_rhs;
        }
        self.basis[leave] = enter;
    }

    /// Maximizes the current objective; returns false if unbounded.
    fn optimize(&mut self) -> bool {
        loop {
            let Some(enter) = self.cost.iter().position(Scalar::is_positive) else {
                return true;
            };
            let mut best: Option<(usize, F)> = None;
            for i in 0..self.rows.len() {
                let coef = &self.rows[i][enter];
                if !coef.is_positive() {
                    continue;
                }
                let ratio = self.rhs[i].clone() / coef.clone();
                let better = match &best {
                    None => true,
                    Some((j, r)) => match ratio.compare(r) {
                        std::cmp::Ordering::Less => true,
                        std::cmp::Ordering::Equal => self.basis[i] < self.basis[*j],
                        std::cmp::Ordering::Greater => false,
                    },
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((leave, _)) => self.pivot(leave, enter),
                None => return false,
            }
        }
    }
}

/// Returns some `z >= 0` with `A z <= b`, or `None` if the system is infeasible.
pub fn find_feasible<F: Scalar>(a: &[Vec<F>], b: &[F]) -> Option<Vec<F>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    if b.iter().all(|v| !v.is_negative()) {
        return Some(vec![F::zero(); n]);
    }
    // columns: z_0..z_{n-1}, x0 = n, slacks n+1..n+m
    let width = n + 1 + m;
    let x0 = n;
    let mut rows = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        let mut r = Vec::with_capacity(width);
        r.extend(row.iter().cloned());
        r.push(-F::one());
        r.extend((0..m).map(|j| if i == j { F::one() } else { F::zero() }));
        rows.push(r);
    }
    let mut cost = vec![F::zero(); width];
    cost[x0] = -F::one();
    let mut t = Tableau {
        rows,
        rhs: b.to_vec(),
        basis: (0..m).map(|i| n + 1 + i).collect(),
        cost,
        value: F::zero(),
    };
    let leave = (0..m)
        .min_by(|&i, &j| t.rhs[i].compare(&t.rhs[j]))
        .expect("at least one constraint");
    t.pivot(leave, x0);
    let bounded = t.optimize();
    debug_assert!(bounded, "auxiliary problem is bounded by 0");
    if !t.value.is_zero() {
        return None;
    }
    let mut z = vec![F::zero(); n];
    for (i, &var) in t.basis.iter().enumerate() {
        if var < n {
            z[var] = t.rhs[i].clone();
        }
    }
    Some(z)
}
