//! Term builders for `H = H_A + lambda * (H1 + H2 + H3 + H4 + H5 + H6)`.
//!
//! Each builder returns a model whose contributions all carry one label and
//! are unscaled; [`assemble`] applies `lambda` to the penalties.

use alloc::vec::Vec;

use super::index::VarIndex;
use super::model::{Label, QuboModel};
use super::QuboError;
use crate::graph::{Graph, WeightMatrix};

/// Sparse affine form `constant + sum coef * x_var` with distinct variables.
#[derive(Debug, Clone, Default)]
pub(crate) struct LinExpr {
    terms: Vec<(usize, i64)>,
    constant: i64,
}

impl LinExpr {
    pub(crate) fn constant(c: i64) -> Self {
        LinExpr {
            terms: Vec::new(),
            constant: c,
        }
    }

    pub(crate) fn sum(vars: impl IntoIterator<Item = usize>) -> Self {
        LinExpr {
            terms: vars.into_iter().map(|v| (v, 1)).collect(),
            constant: 0,
        }
    }

    pub(crate) fn push(&mut self, var: usize, coef: i64) {
        self.terms.push((var, coef));
    }

    fn add_to(&self, model: &mut QuboModel, label: Label, factor: i64) {
        for &(v, c) in &self.terms {
            model.add_linear(label, v, factor * c);
        }
        if self.constant != 0 {
            model.add_offset(label, factor * self.constant);
        }
    }

    /// `factor * self * other`, binary squares folded to linear.
    fn add_product(&self, other: &LinExpr, model: &mut QuboModel, label: Label, factor: i64) {
        for &(a, ca) in &self.terms {
            for &(b, cb) in &other.terms {
                model.add_quadratic(label, a, b, factor * ca * cb);
            }
        }
        for &(a, ca) in &self.terms {
            model.add_linear(label, a, factor * ca * other.constant);
        }
        for &(b, cb) in &other.terms {
            model.add_linear(label, b, factor * cb * self.constant);
        }
        let c = factor * self.constant * other.constant;
        if c != 0 {
            model.add_offset(label, c);
        }
    }

    fn add_square(&self, model: &mut QuboModel, label: Label, factor: i64) {
        self.add_product(self, model, label, factor);
    }
}

fn check_index(g: &Graph, idx: &VarIndex) -> Result<(), QuboError> {
    if g.n() != idx.n() || idx.root() >= g.n() || idx.targets().iter().any(|&t| t >= g.n()) {
        return Err(QuboError::IndexMismatch);
    }
    Ok(())
}

/// Objective: weight `w[i][j]` on every pair `(X_{i,s}^k, X_{j,s+1}^k)`,
/// `s` in `[0, S)`. Dwelling (`i == j`) is free.
pub fn build_objective(
    g: &Graph,
    wm: &WeightMatrix,
    idx: &VarIndex,
) -> Result<QuboModel, QuboError> {
    check_index(g, idx)?;
    if wm.n() != idx.n() {
        return Err(QuboError::IndexMismatch);
    }
    let n = idx.n();
    let mut model = QuboModel::new(idx.num_vars());
    for k in 0..idx.m() {
        for s in 0..idx.steps() {
            for i in 0..n {
                for (j, &w) in wm.row(i).iter().enumerate() {
                    if i != j && w != 0 {
                        model.add_quadratic(
                            Label::Objective,
                            idx.x(k, s, i),
                            idx.x(k, s + 1, j),
                            w,
                        );
                    }
                }
            }
        }
    }
    Ok(model)
}

/// `(1 - X_{root,0}^{k1})^2`.
pub fn build_h1(idx: &VarIndex) -> QuboModel {
    let mut model = QuboModel::new(idx.num_vars());
    if idx.m() > 0 {
        let mut e = LinExpr::constant(1);
        e.push(idx.x(0, 0, idx.root()), -1);
        e.add_square(&mut model, Label::H1, 1);
    }
    model
}

/// `sum_k (1 - X_{k,S}^k)^2`.
pub fn build_h2(idx: &VarIndex) -> QuboModel {
    let mut model = QuboModel::new(idx.num_vars());
    for (k, &t) in idx.targets().iter().enumerate() {
        let mut e = LinExpr::constant(1);
        e.push(idx.x(k, idx.steps(), t), -1);
        e.add_square(&mut model, Label::H2, 1);
    }
    model
}

fn layer(idx: &VarIndex, k: usize, s: usize) -> LinExpr {
    LinExpr::sum((0..idx.n()).map(|i| idx.x(k, s, i)))
}

/// `sum_{k,s} (sum_i X)^2 - sum_i X`: at most one vertex per path and step.
pub fn build_h3(idx: &VarIndex) -> QuboModel {
    let mut model = QuboModel::new(idx.num_vars());
    for k in 0..idx.m() {
        for s in 0..idx.layers() {
            let e = layer(idx, k, s);
            e.add_square(&mut model, Label::H3, 1);
            e.add_to(&mut model, Label::H3, -1);
        }
    }
    model
}

/// `sum_{k, s<S} sum_i X_s - (sum_i X_s)(sum_i X_{s+1})`: once a path is
/// occupied it stays occupied. Empty prefixes cost nothing.
pub fn build_h4(idx: &VarIndex) -> QuboModel {
    let mut model = QuboModel::new(idx.num_vars());
    for k in 0..idx.m() {
        for s in 0..idx.steps() {
            let cur = layer(idx, k, s);
            let next = layer(idx, k, s + 1);
            cur.add_to(&mut model, Label::H4, 1);
            cur.add_product(&next, &mut model, Label::H4, -1);
        }
    }
    model
}

/// `sum_k sum_{i not terminal} sum_{s<S} X_{i,s}^k X_{i,s+1}^k`.
pub fn build_h5(g: &Graph, idx: &VarIndex) -> Result<QuboModel, QuboError> {
    check_index(g, idx)?;
    let mut model = QuboModel::new(idx.num_vars());
    for k in 0..idx.m() {
        for i in (0..idx.n()).filter(|&i| !g.is_terminal(i)) {
            for s in 0..idx.steps() {
                model.add_quadratic(Label::H5, idx.x(k, s, i), idx.x(k, s + 1, i), 1);
            }
        }
    }
    Ok(model)
}

/// Overlap requirement with binary slack, quadratized.
///
/// For every target `k` after the first, `(O_k - y_k - 1)^2` where `O_k`
/// sums the overlap indicators shared with `k`'s partners and `y_k` is the
/// binary-expanded slack. Each indicator `z = X_a X_b` is enforced by the
/// AND penalty `X_a X_b - 2 X_a z - 2 X_b z + 3 z`, which is 0 exactly when
/// `z` equals the product and at least 1 otherwise.
pub fn build_h6(idx: &VarIndex) -> QuboModel {
    let mut model = QuboModel::new(idx.num_vars());
    let m = idx.m();
    for k in 1..m {
        let mut e = LinExpr::constant(-1);
        for j in idx.partners(k) {
            for s in 0..idx.layers() {
                for i in 0..idx.n() {
                    e.push(idx.overlap(k, j, s, i), 1);
                }
            }
        }
        for bit in 0..idx.slack_bits() {
            e.push(idx.slack(k, bit), -(1i64 << bit));
        }
        e.add_square(&mut model, Label::H6, 1);
    }
    for a in 0..m {
        for b in a + 1..m {
            for s in 0..idx.layers() {
                for i in 0..idx.n() {
                    let (xa, xb, z) = (idx.x(a, s, i), idx.x(b, s, i), idx.overlap(a, b, s, i));
                    model.add_quadratic(Label::H6, xa, xb, 1);
                    model.add_quadratic(Label::H6, xa, z, -2);
                    model.add_quadratic(Label::H6, xb, z, -2);
                    model.add_linear(Label::H6, z, 3);
                }
            }
        }
    }
    model
}

/// `H_A + lambda * (H1 + .. + H6)` with provenance kept per label.
pub fn assemble(
    g: &Graph,
    wm: &WeightMatrix,
    idx: &VarIndex,
    lambda: i64,
) -> Result<QuboModel, QuboError> {
    if lambda <= 0 {
        return Err(QuboError::NonPositiveLambda(lambda));
    }
    let mut model = build_objective(g, wm, idx)?;
    model.add_scaled(&build_h1(idx), lambda);
    model.add_scaled(&build_h2(idx), lambda);
    model.add_scaled(&build_h3(idx), lambda);
    model.add_scaled(&build_h4(idx), lambda);
    model.add_scaled(&build_h5(g, idx)?, lambda);
    model.add_scaled(&build_h6(idx), lambda);
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_weight_matrix;
    use crate::qubo::index::{default_slack_bits, OverlapRule};
    use alloc::vec;

    fn index_for(g: &Graph, steps: usize) -> VarIndex {
        VarIndex::new(
            g.n(),
            steps,
            g.terminals().to_vec(),
            g.root(),
            default_slack_bits(steps),
            OverlapRule::Preceding,
        )
    }

    fn set(idx: &VarIndex, cells: &[(usize, usize, usize)]) -> Vec<bool> {
        let mut x = vec![false; idx.num_vars()];
        for &(k, s, i) in cells {
            x[idx.x(k, s, i)] = true;
        }
        x
    }

    #[test]
    fn objective_single_edge() {
        let g = Graph::new(2, [(0, 1, 5)], vec![0], 0).unwrap();
        let wm = build_weight_matrix(&g, 10_000).unwrap();
        let idx = index_for(&g, 1);
        let h = build_objective(&g, &wm, &idx).unwrap();
        assert_eq!(h.quadratic_coeff(idx.x(0, 0, 0), idx.x(0, 1, 1)), 5);
        assert_eq!(h.quadratic_coeff(idx.x(0, 0, 1), idx.x(0, 1, 0)), 5);
        assert_eq!(h.quadratic_coeff(idx.x(0, 0, 0), idx.x(0, 1, 0)), 0);
        assert_eq!(h.quadratic_coeff(idx.x(0, 0, 1), idx.x(0, 1, 1)), 0);
        assert_eq!(h.quadratic().len(), 2);
        assert!(h.linear().is_empty());
    }

    #[test]
    fn objective_empty_terminals() {
        let g = Graph::new(2, [(0, 1, 5)], vec![0], 0).unwrap();
        let wm = build_weight_matrix(&g, 10_000).unwrap();
        let idx = VarIndex::new(2, 1, vec![], 0, 1, OverlapRule::Preceding);
        let h = build_objective(&g, &wm, &idx).unwrap();
        assert!(h.is_empty());
        assert_eq!(h.num_vars(), 0);
        assert!(build_h1(&idx).is_empty());
        assert!(build_h6(&idx).is_empty());
    }

    #[test]
    fn objective_rejects_foreign_index() {
        let g = Graph::new(2, [(0, 1, 5)], vec![0], 0).unwrap();
        let wm = build_weight_matrix(&g, 10_000).unwrap();
        let idx = VarIndex::new(3, 1, vec![0], 0, 1, OverlapRule::Preceding);
        assert_eq!(
            build_objective(&g, &wm, &idx),
            Err(QuboError::IndexMismatch)
        );
    }

    #[test]
    fn objective_pair_count_path3() {
        // brute-force expansion: every (s, i, j) with i != j and a nonzero
        // padded weight yields one pair term
        let g = Graph::new(3, [(0, 1, 5), (1, 2, 7)], vec![1], 0).unwrap();
        let wm = build_weight_matrix(&g, 10_000).unwrap();
        let idx = index_for(&g, 2);
        let h = build_objective(&g, &wm, &idx).unwrap();
        let mut expected = 0;
        for _s in 0..2 {
            for i in 0..3 {
                for j in 0..3 {
                    if i != j && wm.get(i, j) != 0 {
                        expected += 1;
                    }
                }
            }
        }
        assert_eq!(expected, 12);
        assert_eq!(h.quadratic().len(), expected);
    }

    #[test]
    fn h1_values() {
        let g = Graph::new(3, [(0, 1, 5), (1, 2, 7)], vec![0, 2], 0).unwrap();
        let idx = index_for(&g, 2);
        let h1 = build_h1(&idx);
        assert_eq!(h1.linear_coeff(idx.x(0, 0, 0)), -1);
        assert_eq!(h1.offset(), 1);
        assert_eq!(h1.energy(&vec![false; idx.num_vars()]), 1);
        assert_eq!(h1.energy(&vec![true; idx.num_vars()]), 0);
        assert_eq!(h1.energy(&set(&idx, &[(0, 0, 0)])), 0);
        assert_eq!(h1.energy(&set(&idx, &[(0, 1, 0)])), 1);
    }

    #[test]
    fn h2_values() {
        let g = Graph::new(3, [(0, 1, 5), (1, 2, 7)], vec![0, 2], 0).unwrap();
        let idx = index_for(&g, 2);
        let h2 = build_h2(&idx);
        assert_eq!(h2.energy(&vec![false; idx.num_vars()]), 2);
        assert_eq!(h2.energy(&set(&idx, &[(0, 2, 0), (1, 2, 2)])), 0);
        assert_eq!(h2.energy(&set(&idx, &[(1, 2, 2)])), 1);
    }

    #[test]
    fn h3_values() {
        let g = Graph::new(3, [(0, 1, 5), (1, 2, 7)], vec![0], 0).unwrap();
        let idx = index_for(&g, 2);
        let h3 = build_h3(&idx);
        assert!(h3.linear().is_empty());
        assert_eq!(h3.quadratic_coeff(idx.x(0, 1, 0), idx.x(0, 1, 2)), 2);
        assert_eq!(h3.energy(&set(&idx, &[(0, 1, 1)])), 0);
        assert_eq!(h3.energy(&set(&idx, &[(0, 1, 1), (0, 1, 2)])), 2);
        assert_eq!(h3.energy(&set(&idx, &[])), 0);
    }

    #[test]
    fn h4_values() {
        let g = Graph::new(3, [(0, 1, 5), (1, 2, 7)], vec![0], 0).unwrap();
        let idx = index_for(&g, 2);
        let h4 = build_h4(&idx);
        assert_eq!(h4.energy(&set(&idx, &[(0, 1, 0), (0, 2, 1)])), 0);
        assert_eq!(h4.energy(&set(&idx, &[(0, 1, 0)])), 1);
        assert_eq!(h4.energy(&set(&idx, &[(0, 2, 0)])), 0);
    }

    #[test]
    fn h5_values() {
        let g = Graph::new(3, [(0, 1, 5), (1, 2, 7)], vec![0, 2], 0).unwrap();
        let idx = index_for(&g, 2);
        let h5 = build_h5(&g, &idx).unwrap();
        assert_eq!(h5.energy(&set(&idx, &[(0, 0, 1), (0, 1, 1)])), 1);
        assert_eq!(h5.energy(&set(&idx, &[(1, 0, 1), (1, 1, 1), (1, 2, 1)])), 2);
        assert_eq!(h5.energy(&set(&idx, &[(0, 0, 0), (0, 1, 0), (0, 2, 0)])), 0);
        assert_eq!(h5.energy(&set(&idx, &[(0, 0, 0), (0, 1, 1), (0, 2, 2)])), 0);
    }

    fn h6_with(idx: &VarIndex, cells: &[(usize, usize, usize)], y: usize) -> i64 {
        let mut x = set(idx, cells);
        idx.settle_auxiliary(&mut x);
        for bit in 0..idx.slack_bits() {
            x[idx.slack(1, bit)] = (y >> bit) & 1 == 1;
        }
        build_h6(idx).energy(&x)
    }

    #[test]
    fn h6_values() {
        let g = Graph::new(4, [(0, 1, 5), (1, 2, 7), (2, 3, 1)], vec![0, 3], 0).unwrap();
        let idx = index_for(&g, 3);
        // one shared cell, y = 0
        assert_eq!(h6_with(&idx, &[(0, 0, 0), (1, 0, 0)], 0), 0);
        // nothing shared, y = 0
        assert_eq!(h6_with(&idx, &[(0, 0, 0), (1, 1, 2)], 0), 1);
        // three shared cells, y = 2
        let cells = [
            (0, 0, 0),
            (1, 0, 0),
            (0, 1, 0),
            (1, 1, 0),
            (0, 2, 0),
            (1, 2, 0),
        ];
        assert_eq!(h6_with(&idx, &cells, 2), 0);
        assert_eq!(h6_with(&idx, &cells, 0), 4);
    }

    #[test]
    fn and_gadget_penalizes_wrong_indicator() {
        let g = Graph::new(2, [(0, 1, 5)], vec![0, 1], 0).unwrap();
        let idx = index_for(&g, 1);
        let h6 = build_h6(&idx);
        let mut x = set(&idx, &[(0, 0, 0), (1, 0, 0)]);
        idx.settle_auxiliary(&mut x);
        assert_eq!(h6.energy(&x), 0);
        x[idx.overlap(0, 1, 0, 0)] = false;
        // gadget 1 plus the now-unsatisfied overlap requirement 1
        assert_eq!(h6.energy(&x), 2);
    }

    #[test]
    fn lambda_must_be_positive() {
        let g = Graph::new(2, [(0, 1, 5)], vec![0, 1], 0).unwrap();
        let wm = build_weight_matrix(&g, 10_000).unwrap();
        let idx = index_for(&g, 1);
        assert_eq!(
            assemble(&g, &wm, &idx, 0),
            Err(QuboError::NonPositiveLambda(0))
        );
        assert_eq!(
            assemble(&g, &wm, &idx, -5),
            Err(QuboError::NonPositiveLambda(-5))
        );
    }

    #[test]
    fn feasible_path3_energy_is_path_weight() {
        // root 0; first target 0 dwells at the root, target 2 walks 0 -> 1 -> 2
        let g = Graph::new(3, [(0, 1, 5), (1, 2, 7)], vec![0, 2], 0).unwrap();
        let wm = build_weight_matrix(&g, 10_000).unwrap();
        let idx = index_for(&g, 2);
        let model = assemble(&g, &wm, &idx, 10_000).unwrap();
        let mut x = set(
            &idx,
            &[
                (0, 0, 0),
                (0, 1, 0),
                (0, 2, 0),
                (1, 0, 0),
                (1, 1, 1),
                (1, 2, 2),
            ],
        );
        idx.settle_auxiliary(&mut x);
        // brute-force evaluation of the objective on this assignment
        let mut objective = 0;
        for k in 0..2 {
            for s in 0..2 {
                for i in 0..3 {
                    for j in 0..3 {
                        if x[idx.x(k, s, i)] && x[idx.x(k, s + 1, j)] {
                            objective += wm.get(i, j);
                        }
                    }
                }
            }
        }
        assert_eq!(objective, 12);
        assert_eq!(model.energy(&x), objective);
        for label in Label::PENALTIES {
            assert_eq!(model.label_energy(label, &x), 0, "{label}");
        }
    }
}
