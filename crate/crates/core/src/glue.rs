//! Glue vectors, glue groups and the gluing construction `⋃_{g∈Γ}(L+g)`.
//!
//! Glue vectors carry exact rational coordinates in the basis of the base
//! lattice, reduced into `[0,1)`, so coset arithmetic and group tests are
//! exact. Ambient vectors are kept alongside for geometry and decoding.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::error::{Error, Result};
use crate::hnf::hermite_normal_form;
use crate::lattice::{Lattice, MEMBERSHIP_TOL};
use crate::matrix::Matrix;

/// Default cap on the number of glue words accepted by
/// [`enumerate_glue_groups`].
pub const DEFAULT_WORD_LIMIT: usize = 4096;

/// A coset representative of `L*/L`.
#[derive(Clone, PartialEq)]
pub struct GlueVector {
    ambient: Vec<f64>,
    coords: Vec<BigRational>,
    denominator: BigInt,
}

fn frac(r: &BigRational) -> BigRational {
    r - r.floor()
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.numer().to_f64().unwrap_or(f64::NAN) / r.denom().to_f64().unwrap_or(f64::NAN)
}

impl GlueVector {
    /// Builds the canonical representative of `coords` (reduced mod 1).
    pub fn from_coords(base: &Lattice, coords: &[BigRational]) -> Result<Self> {
        if coords.len() != base.dim() {
            return Err(Error::BaseMismatch);
        }
        let coords: Vec<BigRational> = coords.iter().map(frac).collect();
        let denominator = coords.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let real: Vec<f64> = coords.iter().map(rational_to_f64).collect();
        Ok(GlueVector { ambient: base.point(&real), coords, denominator })
    }

    /// Snaps an ambient vector of `L*` to its coset of `L`: the numerical
    /// basis coordinates are rounded to rationals whose denominator divides
    /// `det(gram)`.
    pub fn snap(base: &Lattice, ambient: &[f64]) -> Result<Self> {
        let det = base.det_gram();
        let d = det.round();
        if d < 1.0 || (det - d).abs() > MEMBERSHIP_TOL * det.max(1.0) {
            return Err(Error::UnsupportedLattice(format!(
                "{} is not integral (det gram {det})",
                base.label()
            )));
        }
        let u = base.coordinates_in_span(ambient)?;
        let d = d as i64;
        let mut coords = Vec::with_capacity(u.len());
        let mut worst: f64 = 0.0;
        for &x in &u {
            let num = (x * d as f64).round();
            worst = worst.max((x - num / d as f64).abs());
            coords.push(BigRational::new(BigInt::from(num as i64), BigInt::from(d)));
        }
        if worst >= MEMBERSHIP_TOL {
            return Err(Error::SnapFailed(worst));
        }
        GlueVector::from_coords(base, &coords)
    }

    pub fn zero(base: &Lattice) -> Self {
        GlueVector {
            ambient: vec![0.0; base.ambient_dim()],
            coords: vec![BigRational::zero(); base.dim()],
            denominator: BigInt::one(),
        }
    }

    pub fn ambient(&self) -> &[f64] {
        &self.ambient
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    /// Coordinates as strings such as `"1/2"`.
    pub fn coord_strings(&self) -> Vec<String> {
        self.coords.iter().map(|c| c.to_string()).collect()
    }

    fn consistent_with(&self, base: &Lattice) -> bool {
        if self.coords.len() != base.dim() || self.ambient.len() != base.ambient_dim() {
            return false;
        }
        let real: Vec<f64> = self.coords.iter().map(rational_to_f64).collect();
        let p = base.point(&real);
        p.iter().zip(&self.ambient).all(|(a, b)| (a - b).abs() < MEMBERSHIP_TOL * (1.0 + a.abs()))
    }
}

impl fmt::Debug for GlueVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GlueVector({})", self.coord_strings().join(", "))
    }
}

/// Sum of two glue vectors modulo `base`.
pub fn add_mod_lattice(a: &GlueVector, b: &GlueVector, base: &Lattice) -> Result<GlueVector> {
    if !a.consistent_with(base) || !b.consistent_with(base) {
        return Err(Error::BaseMismatch);
    }
    let sum: Vec<BigRational> = a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect();
    GlueVector::from_coords(base, &sum)
}

/// True iff `subset` contains zero and is closed under addition modulo
/// `base`.
pub fn is_group(base: &Lattice, subset: &[GlueVector]) -> bool {
    let keys: BTreeSet<&[BigRational]> = subset.iter().map(|g| g.coords()).collect();
    if !subset.iter().any(GlueVector::is_zero) {
        return false;
    }
    for a in subset {
        for b in subset {
            match add_mod_lattice(a, b, base) {
                Ok(s) if keys.contains(s.coords()) => {}
                _ => return false,
            }
        }
    }
    true
}

/// The printed glue vectors of a catalog lattice, in the order
/// `g0, g1, ...`.
pub fn standard_glue_vectors(name: &str) -> Result<Vec<GlueVector>> {
    let h = 0.5;
    let (base, ambient): (Lattice, Vec<Vec<f64>>) = match name {
        "E6" => {
            let s = 3f64.sqrt() / 6.0;
            (
                catalog::e6(),
                vec![vec![0.0; 6], vec![-h, -h, -h, -h, -h, s], vec![h, h, h, h, h, -s]],
            )
        }
        _ => {
            if let Some(n) = name.strip_prefix('D').and_then(|s| s.parse::<usize>().ok()).filter(|&n| n >= 2) {
                let mut e1 = vec![0.0; n];
                e1[0] = 1.0;
                let mut g3 = vec![h; n];
                g3[0] = -h;
                (catalog::dn(n), vec![vec![0.0; n], vec![h; n], e1, g3])
            } else if let Some(n) = name.strip_prefix('Z').and_then(|s| s.parse::<usize>().ok()).filter(|&n| n >= 1) {
                (catalog::zn(n), vec![vec![0.0; n]])
            } else {
                return Err(Error::UnsupportedLattice(name.to_string()));
            }
        }
    };
    ambient.iter().map(|a| GlueVector::snap(&base, a)).collect()
}

/// The full set of glue words `(L₁*/L₁) × … × (Lₖ*/Lₖ)` of a product
/// lattice together with its addition table.
///
/// Word indices are mixed-radix with the first component most
/// significant, so for two components of sizes `p, q` the word
/// `g_ij` has index `i·q + j`.
#[derive(Debug)]
pub struct GlueWords {
    base: Lattice,
    component_names: Vec<String>,
    component_dims: Vec<usize>,
    component_sizes: Vec<usize>,
    words: Vec<GlueVector>,
    table: Vec<Vec<usize>>,
}

impl GlueWords {
    /// Builds the glue words of `L₁ × … × Lₖ` from each component's glue
    /// vectors (first vector must be zero, the set must be a group).
    pub fn new(components: &[(String, Lattice, Vec<GlueVector>)]) -> Result<Arc<Self>> {
        Self::with_limit(components, DEFAULT_WORD_LIMIT)
    }

    pub fn with_limit(components: &[(String, Lattice, Vec<GlueVector>)], limit: usize) -> Result<Arc<Self>> {
        if components.is_empty() {
            return Err(Error::InvalidArgument("no components".into()));
        }
        let count = components.iter().try_fold(1usize, |acc, (_, _, g)| acc.checked_mul(g.len()));
        let count = count.unwrap_or(usize::MAX);
        if count > limit {
            return Err(Error::TooManyWords { count, limit });
        }
        for (_, lat, glues) in components {
            if glues.first().map_or(true, |g| !g.is_zero()) {
                return Err(Error::InvalidArgument(format!("first glue vector of {} must be zero", lat.label())));
            }
            if !is_group(lat, glues) {
                return Err(Error::NotAGroup);
            }
        }
        let mut base = components[0].1.clone();
        for (_, lat, _) in &components[1..] {
            base = base.product(lat);
        }
        let sizes: Vec<usize> = components.iter().map(|c| c.2.len()).collect();
        let mut words = Vec::with_capacity(count);
        for idx in 0..count {
            let digits = mixed_radix(idx, &sizes);
            let coords: Vec<BigRational> = digits
                .iter()
                .zip(components)
                .flat_map(|(&d, (_, _, glues))| glues[d].coords().iter().cloned())
                .collect();
            words.push(GlueVector::from_coords(&base, &coords)?);
        }
        let lookup: HashMap<Vec<BigRational>, usize> =
            words.iter().enumerate().map(|(i, w)| (w.coords().to_vec(), i)).collect();
        if lookup.len() != words.len() {
            return Err(Error::InvalidArgument("component glue vectors are not distinct cosets".into()));
        }
        let mut table = vec![vec![0; count]; count];
        for i in 0..count {
            for j in 0..count {
                let s = add_mod_lattice(&words[i], &words[j], &base)?;
                table[i][j] = *lookup.get(s.coords()).ok_or(Error::NotAGroup)?;
            }
        }
        Ok(Arc::new(GlueWords {
            base,
            component_names: components.iter().map(|c| c.0.clone()).collect(),
            component_dims: components.iter().map(|c| c.1.dim()).collect(),
            component_sizes: sizes,
            words,
            table,
        }))
    }

    /// Glue words of a product of catalog lattices, e.g. `["E6", "E6"]`.
    pub fn from_catalog(names: &[&str]) -> Result<Arc<Self>> {
        let comps = names
            .iter()
            .map(|&n| Ok((n.to_string(), catalog::lookup(n)?.lattice, standard_glue_vectors(n)?)))
            .collect::<Result<Vec<_>>>()?;
        GlueWords::new(&comps)
    }

    pub fn base(&self) -> &Lattice {
        &self.base
    }

    pub fn base_name(&self) -> String {
        self.component_names.join("x")
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn word(&self, i: usize) -> &GlueVector {
        &self.words[i]
    }

    pub fn component_sizes(&self) -> &[usize] {
        &self.component_sizes
    }

    pub fn component_dims(&self) -> &[usize] {
        &self.component_dims
    }

    /// Index of `a + b` modulo the base lattice.
    pub fn add(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    /// Per-component glue indices of word `i`.
    pub fn digits(&self, i: usize) -> Vec<usize> {
        mixed_radix(i, &self.component_sizes)
    }

    /// Index of the word with the given per-component indices.
    pub fn index_of(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.component_sizes).fold(0, |acc, (&d, &s)| acc * s + d)
    }

    /// Label such as `g12`.
    pub fn label(&self, i: usize) -> String {
        let digits = self.digits(i);
        let sep = if self.component_sizes.iter().any(|&s| s > 10) { "," } else { "" };
        format!("g{}", digits.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(sep))
    }

    /// Parses a label produced by [`GlueWords::label`].
    pub fn parse_label(&self, label: &str) -> Result<usize> {
        let body = label
            .strip_prefix('g')
            .ok_or_else(|| Error::InvalidArgument(format!("bad glue word label `{label}`")))?;
        let digits: Option<Vec<usize>> = if body.contains(',') {
            body.split(',').map(|d| d.parse().ok()).collect()
        } else {
            body.chars().map(|c| c.to_digit(10).map(|d| d as usize)).collect()
        };
        let digits = digits.ok_or_else(|| Error::InvalidArgument(format!("bad glue word label `{label}`")))?;
        if digits.len() != self.component_sizes.len()
            || digits.iter().zip(&self.component_sizes).any(|(&d, &s)| d >= s)
        {
            return Err(Error::InvalidArgument(format!("glue word `{label}` out of range")));
        }
        Ok(self.index_of(&digits))
    }

    fn closure(&self, seed: &[usize]) -> Vec<bool> {
        let mut member = vec![false; self.len()];
        member[0] = true;
        let mut elems = vec![0usize];
        let mut queue: VecDeque<usize> = seed.iter().copied().collect();
        while let Some(x) = queue.pop_front() {
            if member[x] {
                continue;
            }
            member[x] = true;
            let current = elems.clone();
            elems.push(x);
            for y in current {
                let s = self.add(x, y);
                if !member[s] {
                    queue.push_back(s);
                }
            }
            let d = self.add(x, x);
            if !member[d] {
                queue.push_back(d);
            }
        }
        member
    }

    fn is_closed(&self, indices: &[usize]) -> bool {
        let set: BTreeSet<usize> = indices.iter().copied().collect();
        set.contains(&0) && indices.iter().all(|&a| indices.iter().all(|&b| set.contains(&self.add(a, b))))
    }
}

fn mixed_radix(mut idx: usize, sizes: &[usize]) -> Vec<usize> {
    let mut digits = vec![0; sizes.len()];
    for (d, &s) in digits.iter_mut().zip(sizes).rev() {
        *d = idx % s;
        idx /= s;
    }
    digits
}

/// A subgroup `Γ` of the glue words, stored as sorted word indices.
#[derive(Clone)]
pub struct GlueGroup {
    words: Arc<GlueWords>,
    indices: Vec<usize>,
}

impl GlueGroup {
    /// Validates that `indices` form a group.
    pub fn new(words: &Arc<GlueWords>, indices: &[usize]) -> Result<Self> {
        let mut idx: Vec<usize> = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        if idx.iter().any(|&i| i >= words.len()) {
            return Err(Error::InvalidArgument("glue word index out of range".into()));
        }
        if !words.is_closed(&idx) {
            return Err(Error::NotAGroup);
        }
        Ok(GlueGroup { words: Arc::clone(words), indices: idx })
    }

    /// Group from labels such as `["g00", "g11", "g22"]`.
    pub fn from_labels(words: &Arc<GlueWords>, labels: &[&str]) -> Result<Self> {
        let idx = labels.iter().map(|l| words.parse_label(l)).collect::<Result<Vec<_>>>()?;
        GlueGroup::new(words, &idx)
    }

    pub fn words(&self) -> &Arc<GlueWords> {
        &self.words
    }

    pub fn base(&self) -> &Lattice {
        self.words.base()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn order(&self) -> usize {
        self.indices.len()
    }

    pub fn elements(&self) -> Vec<GlueVector> {
        self.indices.iter().map(|&i| self.words.word(i).clone()).collect()
    }

    pub fn labels(&self) -> Vec<String> {
        self.indices.iter().map(|&i| self.words.label(i)).collect()
    }

    /// `{g00,g11,g22}` style rendering.
    pub fn display_labels(&self) -> String {
        format!("{{{}}}", self.labels().join(","))
    }

    fn sort_key(&self) -> (usize, &[usize]) {
        (self.order(), &self.indices)
    }
}

impl fmt::Debug for GlueGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GlueGroup{}", self.display_labels())
    }
}

impl PartialEq for GlueGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.words, &other.words) && self.indices == other.indices
    }
}

/// All subgroups of the glue words, ordered by size and then
/// lexicographically by sorted word indices.
pub fn enumerate_glue_groups(words: &Arc<GlueWords>) -> Vec<GlueGroup> {
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut queue: VecDeque<Vec<bool>> = VecDeque::new();
    let trivial = words.closure(&[]);
    seen.insert(vec![0]);
    queue.push_back(trivial);
    while let Some(member) = queue.pop_front() {
        let current: Vec<usize> = (0..words.len()).filter(|&i| member[i]).collect();
        for w in 0..words.len() {
            if member[w] {
                continue;
            }
            let mut seed = current.clone();
            seed.push(w);
            let next = words.closure(&seed);
            let idx: Vec<usize> = (0..words.len()).filter(|&i| next[i]).collect();
            if seen.insert(idx) {
                queue.push_back(next);
            }
        }
    }
    let mut groups: Vec<GlueGroup> =
        seen.into_iter().map(|indices| GlueGroup { words: Arc::clone(words), indices }).collect();
    groups.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    groups
}

/// A permutation of glue-word indices.
pub type Symmetry = Vec<usize>;

/// An orbit of glue groups under a set of symmetries.
#[derive(Debug, Clone)]
pub struct SymmetryClass {
    pub representative: GlueGroup,
    pub members: Vec<GlueGroup>,
}

fn apply(perm: &[usize], indices: &[usize]) -> Vec<usize> {
    let mut out: Vec<usize> = indices.iter().map(|&i| perm[i]).collect();
    out.sort_unstable();
    out
}

/// Partitions `groups` into orbits under the permutation group generated
/// by `symmetries`. The representative of each orbit is its least member
/// in the (order, sorted indices) ordering.
pub fn symmetry_classes(groups: &[GlueGroup], symmetries: &[Symmetry]) -> Result<Vec<SymmetryClass>> {
    let Some(first) = groups.first() else { return Ok(Vec::new()) };
    let words = Arc::clone(first.words());
    if groups.iter().any(|g| !Arc::ptr_eq(g.words(), &words)) {
        return Err(Error::BaseMismatch);
    }
    let n = words.len();
    for (k, perm) in symmetries.iter().enumerate() {
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidSymmetry(format!("symmetry {k} is not a permutation of {n} glue words")));
        }
        for g in groups {
            if !words.is_closed(&apply(perm, g.indices())) {
                return Err(Error::InvalidSymmetry(format!(
                    "symmetry {k} maps {} to a non-group",
                    g.display_labels()
                )));
            }
        }
    }
    let input: BTreeSet<&[usize]> = groups.iter().map(|g| g.indices()).collect();
    let mut assigned: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut classes = Vec::new();
    for g in groups {
        if assigned.contains(g.indices()) {
            continue;
        }
        let mut orbit: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue = VecDeque::from([g.indices().to_vec()]);
        while let Some(x) = queue.pop_front() {
            if !orbit.insert(x.clone()) {
                continue;
            }
            for perm in symmetries {
                let y = apply(perm, &x);
                if !orbit.contains(&y) {
                    queue.push_back(y);
                }
            }
        }
        let mut members: Vec<GlueGroup> = orbit
            .iter()
            .filter(|x| input.contains(x.as_slice()))
            .map(|x| GlueGroup { words: Arc::clone(&words), indices: x.clone() })
            .collect();
        members.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
        let least = orbit
            .iter()
            .min_by(|a, b| (a.len(), a.as_slice()).cmp(&(b.len(), b.as_slice())))
            .expect("orbit contains the seed");
        assigned.extend(orbit.iter().cloned());
        classes.push(SymmetryClass {
            representative: GlueGroup { words: Arc::clone(&words), indices: least.clone() },
            members,
        });
    }
    classes.sort_by(|a, b| a.representative.sort_key().cmp(&b.representative.sort_key()));
    Ok(classes)
}

/// One representative per symmetry orbit.
pub fn reduce_by_symmetry(groups: &[GlueGroup], symmetries: &[Symmetry]) -> Result<Vec<GlueGroup>> {
    if symmetries.is_empty() {
        return Ok(groups.to_vec());
    }
    Ok(symmetry_classes(groups, symmetries)?.into_iter().map(|c| c.representative).collect())
}

/// Permutation induced by mapping per-component digits.
fn digit_symmetry(words: &GlueWords, f: impl Fn(&[usize]) -> Vec<usize>) -> Symmetry {
    (0..words.len()).map(|i| words.index_of(&f(&words.digits(i)))).collect()
}

/// Exchange of the two factors of a two-component product (`g_ij ↔ g_ji`).
pub fn swap_components(words: &GlueWords) -> Result<Symmetry> {
    if words.component_sizes().len() != 2 || words.component_sizes()[0] != words.component_sizes()[1] {
        return Err(Error::InvalidSymmetry("swap needs two equal components".into()));
    }
    Ok(digit_symmetry(words, |d| vec![d[1], d[0]]))
}

/// Relabels glue index `a ↔ b` inside component `component`.
pub fn exchange_in_component(words: &GlueWords, component: usize, a: usize, b: usize) -> Result<Symmetry> {
    let sizes = words.component_sizes();
    if component >= sizes.len() || a >= sizes[component] || b >= sizes[component] {
        return Err(Error::InvalidSymmetry("component or glue index out of range".into()));
    }
    Ok(digit_symmetry(words, |d| {
        let mut d = d.to_vec();
        if d[component] == a {
            d[component] = b;
        } else if d[component] == b {
            d[component] = a;
        }
        d
    }))
}

/// The three `D6×D6` symmetries: factor swap, and `g1 ↔ g3` in either
/// factor (negating the first coordinate of that factor).
pub fn d6xd6_symmetries(words: &GlueWords) -> Result<Vec<Symmetry>> {
    Ok(vec![swap_components(words)?, exchange_in_component(words, 0, 1, 3)?, exchange_in_component(words, 1, 1, 3)?])
}

/// `E6×E6` symmetries: factor swap and `g1 ↔ g2` in either factor
/// (negating that factor).
pub fn e6xe6_symmetries(words: &GlueWords) -> Result<Vec<Symmetry>> {
    Ok(vec![swap_components(words)?, exchange_in_component(words, 0, 1, 2)?, exchange_in_component(words, 1, 1, 2)?])
}

/// True iff `Γ` equals the direct product of its projections onto the
/// component lattices.
pub fn is_product_group(group: &GlueGroup) -> bool {
    let words = group.words();
    let k = words.component_sizes().len();
    let product: usize = (0..k)
        .map(|c| group.indices().iter().map(|&i| words.digits(i)[c]).collect::<BTreeSet<_>>().len())
        .product();
    product == group.order()
}

/// A glued lattice with the group it came from.
#[derive(Debug, Clone)]
pub struct GluedLattice {
    pub result: Lattice,
    pub source: GlueGroup,
}

impl GluedLattice {
    /// Checks the determinant index formula, membership of every glue
    /// vector and of every base basis row.
    pub fn verify(&self) -> Result<()> {
        let base = self.source.base();
        let k = self.source.order() as f64;
        let expected = base.det_gram() / (k * k);
        if (self.result.det_gram() - expected).abs() > 1e-9 * expected {
            return Err(Error::InvalidArgument(format!(
                "glued determinant {} != {expected}",
                self.result.det_gram()
            )));
        }
        for g in self.source.elements() {
            if !self.result.contains(g.ambient()) {
                return Err(Error::InvalidArgument(format!("{g:?} is not in the glued lattice")));
            }
        }
        for i in 0..base.dim() {
            if !self.result.contains(base.basis().row(i)) {
                return Err(Error::InvalidArgument(format!("base row {i} is not in the glued lattice")));
            }
        }
        Ok(())
    }
}

/// Integer matrix `s·[I; coords(Γ)]` and the scale `s`.
fn stacked_integer_rows(group: &GlueGroup) -> (Vec<Vec<BigInt>>, BigInt) {
    let n = group.base().dim();
    let elements = group.elements();
    let s = elements.iter().fold(BigInt::one(), |acc, g| acc.lcm(g.denominator()));
    let mut rows: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { s.clone() } else { BigInt::zero() }).collect())
        .collect();
    for g in &elements {
        rows.push(g.coords().iter().map(|c| (c * BigRational::from_integer(s.clone())).to_integer()).collect());
    }
    (rows, s)
}

/// Generator matrix of `⋃_{g∈Γ}(L+g)` via the Hermite normal form of the
/// stacked base and glue rows.
pub fn glued_generator(group: &GlueGroup) -> Result<GluedLattice> {
    let base = group.base();
    if !group.words().is_closed(group.indices()) {
        return Err(Error::NotAGroup);
    }
    let (rows, s) = stacked_integer_rows(group);
    let h = hermite_normal_form(&rows);
    let n = base.dim();
    if h.len() != n {
        return Err(Error::RankDeficient { det: 0.0 });
    }
    let s_f = s.to_f64().unwrap_or(f64::NAN);
    let coord_rows: Vec<Vec<f64>> =
        h.iter().map(|r| r.iter().map(|x| x.to_f64().unwrap_or(f64::NAN) / s_f).collect()).collect();
    let coord_matrix = Matrix::from_rows(&coord_rows)?;
    let basis = coord_matrix.mul(base.basis())?;
    let label = format!("{}/{}", words_label(group), group.display_labels());
    let glued = GluedLattice { result: Lattice::with_label(basis, label)?, source: group.clone() };
    Ok(glued)
}

fn words_label(group: &GlueGroup) -> String {
    group.words().base_name()
}

/// Independent floating-point route: LLL on the ambient generating set
/// (base rows plus glue vectors), dropping the dependent vectors.
pub fn glued_generator_lll(group: &GlueGroup) -> Result<Lattice> {
    let base = group.base();
    let mut gens = base.basis().row_vecs();
    gens.extend(group.elements().iter().filter(|g| !g.is_zero()).map(|g| g.ambient().to_vec()));
    let rows = crate::reduce::lll_generating_set(&gens);
    if rows.len() != base.dim() {
        return Err(Error::RankDeficient { det: 0.0 });
    }
    Lattice::with_label(Matrix::from_rows(&rows)?, format!("{}/{}(lll)", words_label(group), group.display_labels()))
}

/// Serialized form of a glue group: base name plus element coordinates as
/// rational strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlueGroupJson {
    pub base: String,
    pub labels: Vec<String>,
    pub elements: Vec<Vec<String>>,
}

impl GlueGroupJson {
    pub fn from_group(group: &GlueGroup) -> Self {
        GlueGroupJson {
            base: group.words().base_name(),
            labels: group.labels(),
            elements: group.elements().iter().map(GlueVector::coord_strings).collect(),
        }
    }

    /// Rebuilds the group against the glue words of the named base.
    pub fn to_group(&self) -> Result<GlueGroup> {
        let names: Vec<&str> = self.base.split('x').collect();
        let words = GlueWords::from_catalog(&names)?;
        let mut idx = Vec::with_capacity(self.elements.len());
        for (k, elem) in self.elements.iter().enumerate() {
            let coords = elem
                .iter()
                .map(|s| parse_rational(s))
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::Parse { line: k + 1, msg: e.to_string() })?;
            let g = GlueVector::from_coords(words.base(), &coords)?;
            let i = (0..words.len())
                .find(|&i| words.word(i).coords() == g.coords())
                .ok_or_else(|| Error::InvalidArgument(format!("element {k} is not a glue word")))?;
            idx.push(i);
        }
        GlueGroup::new(&words, &idx)
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidArgument(format!("bad rational `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() || den.is_negative() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e6_glue() -> (Lattice, Vec<GlueVector>) {
        (catalog::e6(), standard_glue_vectors("E6").unwrap())
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn standard_vectors() {
        let (_, g) = e6_glue();
        assert_eq!(g.len(), 3);
        let s = 3f64.sqrt() / 6.0;
        let expect = [-0.5, -0.5, -0.5, -0.5, -0.5, s];
        // g1's canonical representative differs from the printed vector by a lattice point.
        let diff: Vec<f64> = g[1].ambient().iter().zip(&expect).map(|(a, b)| a - b).collect();
        assert!(catalog::e6().contains(&diff));
        assert!(g.iter().all(|v| v.denominator() <= &BigInt::from(3)));

        let d = standard_glue_vectors("D6").unwrap();
        assert_eq!(d.len(), 4);
        assert_eq!(d[2].ambient(), &[1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert_eq!(standard_glue_vectors("Z5").unwrap().len(), 1);
        assert!(matches!(standard_glue_vectors("K12"), Err(Error::UnsupportedLattice(_))));
    }

    #[test]
    fn coords_are_canonical() {
        for name in ["E6", "D6", "D5", "Z3"] {
            for g in standard_glue_vectors(name).unwrap() {
                for c in g.coords() {
                    assert!(!c.is_negative() && c < &BigRational::one());
                    assert!((c * BigRational::from_integer(g.denominator().clone())).is_integer());
                }
            }
        }
    }

    #[test]
    fn multiplication_tables() {
        let (e6, g) = e6_glue();
        assert_eq!(add_mod_lattice(&g[1], &g[2], &e6).unwrap(), g[0]);
        assert_eq!(add_mod_lattice(&g[1], &g[1], &e6).unwrap(), g[2]);
        let d6 = catalog::d6();
        let d = standard_glue_vectors("D6").unwrap();
        assert_eq!(add_mod_lattice(&d[1], &d[2], &d6).unwrap(), d[3]);
        for x in &d {
            assert!(add_mod_lattice(x, x, &d6).unwrap().is_zero());
        }
        assert_eq!(add_mod_lattice(&g[1], &d[1], &e6), Err(Error::BaseMismatch));
    }

    #[test]
    fn group_tests() {
        let (e6, g) = e6_glue();
        assert!(is_group(&e6, &g[..1]));
        assert!(!is_group(&e6, &g[..2]));
        assert!(is_group(&e6, &g));
        let words = GlueWords::from_catalog(&["E6", "E6"]).unwrap();
        let elems: Vec<GlueVector> = [0, 4, 8].iter().map(|&i| words.word(i).clone()).collect();
        assert!(is_group(words.base(), &elems));
    }

    #[test]
    fn glue_word_labels_round_trip() {
        let words = GlueWords::from_catalog(&["D6", "D6"]).unwrap();
        assert_eq!(words.len(), 16);
        assert_eq!(words.label(7), "g13");
        assert_eq!(words.parse_label("g32").unwrap(), 14);
        assert!(words.parse_label("g4").is_err());
        assert!(words.parse_label("x00").is_err());
    }

    #[test]
    fn word_limit() {
        let comps: Vec<(String, Lattice, Vec<GlueVector>)> = (0..3)
            .map(|_| ("D6".to_string(), catalog::d6(), standard_glue_vectors("D6").unwrap()))
            .collect();
        assert!(matches!(GlueWords::with_limit(&comps, 16), Err(Error::TooManyWords { count: 64, limit: 16 })));
    }

    #[test]
    fn enumeration_small_cases() {
        let z = GlueWords::from_catalog(&["Z1", "Z1"]).unwrap();
        assert_eq!(enumerate_glue_groups(&z).len(), 1);
        let e = GlueWords::from_catalog(&["E6", "E6"]).unwrap();
        let groups = enumerate_glue_groups(&e);
        let sets: Vec<Vec<usize>> = groups.iter().map(|g| g.indices().to_vec()).collect();
        assert_eq!(
            sets,
            vec![vec![0], vec![0, 1, 2], vec![0, 3, 6], vec![0, 4, 8], vec![0, 5, 7], (0..9).collect()]
        );
    }

    #[test]
    fn symmetry_reduction_e6() {
        let e = GlueWords::from_catalog(&["E6", "E6"]).unwrap();
        let groups = enumerate_glue_groups(&e);
        assert_eq!(reduce_by_symmetry(&groups, &[]).unwrap().len(), 6);
        // Swapping factors alone merges only E6xE6* with E6*xE6.
        assert_eq!(reduce_by_symmetry(&groups, &[swap_components(&e).unwrap()]).unwrap().len(), 5);
        assert_eq!(reduce_by_symmetry(&groups, &e6xe6_symmetries(&e).unwrap()).unwrap().len(), 4);
    }

    #[test]
    fn invalid_symmetries() {
        let e = GlueWords::from_catalog(&["E6", "E6"]).unwrap();
        let groups = enumerate_glue_groups(&e);
        let mut not_perm: Vec<usize> = (0..9).collect();
        not_perm[1] = 0;
        assert!(matches!(reduce_by_symmetry(&groups, &[not_perm]), Err(Error::InvalidSymmetry(_))));
        // Exchanging g01 and g11 is a permutation but breaks group structure.
        let mut bad: Vec<usize> = (0..9).collect();
        bad.swap(1, 4);
        assert!(matches!(reduce_by_symmetry(&groups, &[bad]), Err(Error::InvalidSymmetry(_))));
    }

    #[test]
    fn product_detection() {
        let e = GlueWords::from_catalog(&["E6", "E6"]).unwrap();
        assert!(is_product_group(&GlueGroup::from_labels(&e, &["g00", "g01", "g02"]).unwrap()));
        assert!(!is_product_group(&GlueGroup::from_labels(&e, &["g00", "g11", "g22"]).unwrap()));
        assert!(is_product_group(&GlueGroup::from_labels(&e, &["g00"]).unwrap()));
        assert!(matches!(GlueGroup::from_labels(&e, &["g00", "g11"]), Err(Error::NotAGroup)));
    }

    #[test]
    fn trivial_gluing_returns_base() {
        let e = GlueWords::from_catalog(&["E6", "E6"]).unwrap();
        let g = glued_generator(&GlueGroup::from_labels(&e, &["g00"]).unwrap()).unwrap();
        assert!(g.result.gram().max_abs_diff(e.base().gram()) < 1e-9);
        g.verify().unwrap();
    }

    #[test]
    fn glued_determinants() {
        let e = GlueWords::from_catalog(&["E6", "E6"]).unwrap();
        let g = glued_generator(&GlueGroup::from_labels(&e, &["g00", "g11", "g22"]).unwrap()).unwrap();
        assert!((g.result.det_gram() - 1.0).abs() < 1e-9);
        g.verify().unwrap();
        let d = GlueWords::from_catalog(&["D6", "D6"]).unwrap();
        let g = glued_generator(&GlueGroup::from_labels(&d, &["g00", "g11", "g23", "g32"]).unwrap()).unwrap();
        assert!((g.result.det_gram() - 1.0).abs() < 1e-9);
        g.verify().unwrap();
    }

    #[test]
    fn lll_route_agrees_on_determinant() {
        let d = GlueWords::from_catalog(&["D6", "D6"]).unwrap();
        let group = GlueGroup::from_labels(&d, &["g00", "g11", "g23", "g32"]).unwrap();
        let l = glued_generator_lll(&group).unwrap();
        assert!((l.det_gram() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn json_round_trip() {
        let e = GlueWords::from_catalog(&["E6", "E6"]).unwrap();
        let group = GlueGroup::from_labels(&e, &["g00", "g12", "g21"]).unwrap();
        let json = GlueGroupJson::from_group(&group);
        assert_eq!(json.base, "E6xE6");
        assert!(json.elements.iter().flatten().any(|s| s.contains('/')));
        let text = serde_json::to_string(&json).unwrap();
        let back: GlueGroupJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_group().unwrap().indices(), group.indices());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("1/2").unwrap(), r(1, 2));
        assert_eq!(parse_rational("3").unwrap(), r(3, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("a/2").is_err());
    }
}
