use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use core::fmt;

/// Which term of `H = H_A + lambda * (H1 + .. + H6)` a coefficient came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    Objective,
    H1,
    H2,
    H3,
    H4,
    H5,
    H6,
}

impl Label {
    pub const ALL: [Label; 7] = [
        Label::Objective,
        Label::H1,
        Label::H2,
        Label::H3,
        Label::H4,
        Label::H5,
        Label::H6,
    ];

    pub const PENALTIES: [Label; 6] = [
        Label::H1,
        Label::H2,
        Label::H3,
        Label::H4,
        Label::H5,
        Label::H6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Label::Objective => "H_A",
            Label::H1 => "H1",
            Label::H2 => "H2",
            Label::H3 => "H3",
            Label::H4 => "H4",
            Label::H5 => "H5",
            Label::H6 => "H6",
        }
    }

    /// Position among the six penalties, `None` for the objective.
    pub fn penalty_index(self) -> Option<usize> {
        Label::PENALTIES.iter().position(|&l| l == self)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Terms {
    linear: BTreeMap<usize, i64>,
    quadratic: BTreeMap<(usize, usize), i64>,
    offset: i64,
}

fn bump<K: Ord>(map: &mut BTreeMap<K, i64>, key: K, c: i64) {
    if c == 0 {
        return;
    }
    match map.entry(key) {
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if *o.get() == 0 {
                o.remove();
            }
        }
        Entry::Vacant(v) => {
            v.insert(c);
        }
    }
}

impl Terms {
    fn add_linear(&mut self, i: usize, c: i64) {
        bump(&mut self.linear, i, c);
    }

    fn add_quadratic(&mut self, i: usize, j: usize, c: i64) {
        if i == j {
            self.add_linear(i, c);
        } else {
            bump(&mut self.quadratic, (i.min(j), i.max(j)), c);
        }
    }

    fn energy(&self, x: &[bool]) -> i64 {
        let mut e = self.offset;
        for (&i, &c) in &self.linear {
            if x[i] {
                e += c;
            }
        }
        for (&(i, j), &c) in &self.quadratic {
            if x[i] && x[j] {
                e += c;
            }
        }
        e
    }
}

/// Sparse integer QUBO `offset + sum a_i x_i + sum_{i<j} b_ij x_i x_j` over
/// binary `x`, with each contribution tagged by its [`Label`].
///
/// Squares are folded into the linear part (`x*x = x`), so quadratic keys
/// always have `i < j`. Equality compares coefficients only; provenance is
/// metadata.
#[derive(Debug, Clone)]
pub struct QuboModel {
    num_vars: usize,
    total: Terms,
    parts: BTreeMap<Label, Terms>,
}

impl PartialEq for QuboModel {
    fn eq(&self, other: &Self) -> bool {
        self.num_vars == other.num_vars && self.total == other.total
    }
}

impl Eq for QuboModel {}

impl QuboModel {
    pub fn new(num_vars: usize) -> Self {
        QuboModel {
            num_vars,
            total: Terms::default(),
            parts: BTreeMap::new(),
        }
    }

    /// Unlabeled model from raw coefficients.
    pub fn from_coefficients(
        num_vars: usize,
        linear: impl IntoIterator<Item = (usize, i64)>,
        quadratic: impl IntoIterator<Item = ((usize, usize), i64)>,
        offset: i64,
    ) -> Self {
        let mut total = Terms {
            offset,
            ..Terms::default()
        };
        for (i, c) in linear {
            assert!(i < num_vars, "variable {i} out of range");
            total.add_linear(i, c);
        }
        for ((i, j), c) in quadratic {
            assert!(i < num_vars && j < num_vars, "variable out of range");
            total.add_quadratic(i, j, c);
        }
        QuboModel {
            num_vars,
            total,
            parts: BTreeMap::new(),
        }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn linear(&self) -> &BTreeMap<usize, i64> {
        &self.total.linear
    }

    pub fn quadratic(&self) -> &BTreeMap<(usize, usize), i64> {
        &self.total.quadratic
    }

    pub fn offset(&self) -> i64 {
        self.total.offset
    }

    pub fn linear_coeff(&self, i: usize) -> i64 {
        self.total.linear.get(&i).copied().unwrap_or(0)
    }

    pub fn quadratic_coeff(&self, i: usize, j: usize) -> i64 {
        if i == j {
            return self.linear_coeff(i);
        }
        self.total
            .quadratic
            .get(&(i.min(j), i.max(j)))
            .copied()
            .unwrap_or(0)
    }

    pub fn num_terms(&self) -> usize {
        self.total.linear.len() + self.total.quadratic.len()
    }

    pub fn is_empty(&self) -> bool {
        self.num_terms() == 0 && self.total.offset == 0
    }

    /// Labels that contributed at least one coefficient or offset.
    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        self.parts.keys().copied()
    }

    pub fn add_linear(&mut self, label: Label, i: usize, c: i64) {
        assert!(i < self.num_vars, "variable {i} out of range");
        self.total.add_linear(i, c);
        self.parts.entry(label).or_default().add_linear(i, c);
    }

    pub fn add_quadratic(&mut self, label: Label, i: usize, j: usize, c: i64) {
        assert!(
            i < self.num_vars && j < self.num_vars,
            "variable out of range"
        );
        self.total.add_quadratic(i, j, c);
        self.parts.entry(label).or_default().add_quadratic(i, j, c);
    }

    pub fn add_offset(&mut self, label: Label, c: i64) {
        self.total.offset += c;
        self.parts.entry(label).or_default().offset += c;
    }

    /// `self += factor * other`, keeping `other`'s labels.
    pub fn add_scaled(&mut self, other: &QuboModel, factor: i64) {
        assert_eq!(self.num_vars, other.num_vars, "variable count mismatch");
        for (&label, part) in &other.parts {
            for (&i, &c) in &part.linear {
                self.add_linear(label, i, factor * c);
            }
            for (&(i, j), &c) in &part.quadratic {
                self.add_quadratic(label, i, j, factor * c);
            }
            if part.offset != 0 {
                self.add_offset(label, factor * part.offset);
            }
        }
    }

    /// The contributions tagged `label`, as a standalone model.
    pub fn restrict(&self, label: Label) -> QuboModel {
        let part = self.parts.get(&label).cloned().unwrap_or_default();
        let mut parts = BTreeMap::new();
        parts.insert(label, part.clone());
        QuboModel {
            num_vars: self.num_vars,
            total: part,
            parts,
        }
    }

    /// Exact energy of an assignment.
    pub fn energy(&self, x: &[bool]) -> i64 {
        assert_eq!(x.len(), self.num_vars, "assignment length mismatch");
        self.total.energy(x)
    }

    /// Energy of one label's contributions only.
    pub fn label_energy(&self, label: Label, x: &[bool]) -> i64 {
        assert_eq!(x.len(), self.num_vars, "assignment length mismatch");
        self.parts.get(&label).map_or(0, |p| p.energy(x))
    }

    /// Largest absolute coefficient (linear or quadratic).
    pub fn max_abs_coefficient(&self) -> i64 {
        self.total
            .linear
            .values()
            .chain(self.total.quadratic.values())
            .map(|c| c.abs())
            .max()
            .unwrap_or(0)
    }

    /// Smallest nonzero absolute coefficient.
    pub fn min_abs_coefficient(&self) -> i64 {
        self.total
            .linear
            .values()
            .chain(self.total.quadratic.values())
            .map(|c| c.abs())
            .filter(|&c| c > 0)
            .min()
            .unwrap_or(0)
    }
}
