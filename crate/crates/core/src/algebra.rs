// SPDX-License-Identifier: Apache-2.0

//! The contracted semigroup algebra over ℚ or 𝔽_p, ideal-membership probes,
//! and exact integer linear algebra (Smith normal form, nullspaces).

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::graph::{Path, VertexId};
use crate::machine::{ElementRef, MachineError, MachineStore};
use crate::semigroup::CanonicalElement;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("element is not in KM: support element {0} has a nontrivial right path")]
    NotInKm(String),
    #[error("scalars from different fields")]
    FieldMismatch,
}

/// ℚ or 𝔽_p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl Field {
    /// `0` selects ℚ, a prime `p` selects 𝔽_p.
    pub fn from_characteristic(c: u64) -> Result<Field, AlgebraError> {
        match c {
            0 => Ok(Field::Rational),
            p if is_prime(p) => Ok(Field::Prime(p)),
            other => Err(AlgebraError::NotPrime(other)),
        }
    }

    pub fn characteristic(self) -> u64 {
        match self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, n: i64) -> Scalar {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(self, n: &BigInt) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(n.clone())),
            Field::Prime(p) => {
                let r = n.mod_floor(&BigInt::from(p));
                Scalar::Prime {
                    value: r.to_u64().expect("residue fits"),
                    p,
                }
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => f.write_str("Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { value: u64, p: u64 },
}

fn mod_pow(b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u128;
    let mut bb = b as u128 % p as u128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * bb % p as u128;
        }
        bb = bb * bb % p as u128;
        e >>= 1;
    }
    r as u64
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Prime { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
        }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Prime { value: a, p }, Scalar::Prime { value: b, p: q }) if p == q => Scalar::Prime {
                value: ((*a as u128 + *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => panic!("{}", AlgebraError::FieldMismatch),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(a) => Scalar::Rational(-a),
            Scalar::Prime { value, p } => Scalar::Prime {
                value: (*p - *value) % *p,
                p: *p,
            },
        }
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        match (self, o) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Prime { value: a, p }, Scalar::Prime { value: b, p: q }) if p == q => Scalar::Prime {
                value: ((*a as u128 * *b as u128) % *p as u128) as u64,
                p: *p,
            },
            _ => panic!("{}", AlgebraError::FieldMismatch),
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(a) => Scalar::Rational(a.recip()),
            Scalar::Prime { value, p } => Scalar::Prime {
                value: mod_pow(*value, *p - 2, *p),
                p: *p,
            },
        })
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{q}"),
            Scalar::Prime { value, .. } => write!(f, "{value}"),
        }
    }
}

/// Finite linear combination of nonzero semigroup elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraElement {
    field: Field,
    terms: BTreeMap<CanonicalElement, Scalar>,
}

impl AlgebraElement {
    pub fn zero(field: Field) -> AlgebraElement {
        AlgebraElement {
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(field: Field, s: CanonicalElement) -> AlgebraElement {
        let mut a = AlgebraElement::zero(field);
        a.add_term(s, field.one());
        a
    }

    pub fn from_terms(field: Field, terms: impl IntoIterator<Item = (CanonicalElement, Scalar)>) -> AlgebraElement {
        let mut a = AlgebraElement::zero(field);
        for (s, k) in terms {
            a.add_term(s, k);
        }
        a
    }

    /// `Σ_v v`, the unit of the algebra over a finite graph.
    pub fn one(store: &MachineStore, field: Field) -> AlgebraElement {
        AlgebraElement::from_terms(
            field,
            store
                .graph()
                .vertices()
                .map(|v| (CanonicalElement::vertex(store, v), field.one())),
        )
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CanonicalElement, &Scalar)> {
        self.terms.iter()
    }

    pub fn support(&self) -> Vec<CanonicalElement> {
        self.terms.keys().cloned().collect()
    }

    pub fn coefficient(&self, s: &CanonicalElement) -> Scalar {
        self.terms.get(s).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add_term(&mut self, s: CanonicalElement, k: Scalar) {
        assert_eq!(k.field(), self.field, "{}", AlgebraError::FieldMismatch);
        let sum = match self.terms.get(&s) {
            Some(old) => old.add(&k),
            None => k,
        };
        if sum.is_zero() {
            self.terms.remove(&s);
        } else {
            self.terms.insert(s, sum);
        }
    }

    pub fn add(&self, o: &AlgebraElement) -> AlgebraElement {
        let mut out = self.clone();
        for (s, k) in &o.terms {
            out.add_term(s.clone(), k.clone());
        }
        out
    }

    pub fn scale(&self, k: &Scalar) -> AlgebraElement {
        AlgebraElement::from_terms(self.field, self.terms.iter().map(|(s, c)| (s.clone(), c.mul(k))))
    }

    pub fn sub(&self, o: &AlgebraElement) -> AlgebraElement {
        self.add(&o.scale(&self.field.from_i64(-1)))
    }

    pub fn multiply(&self, o: &AlgebraElement, store: &mut MachineStore) -> Result<AlgebraElement, MachineError> {
        let mut out = AlgebraElement::zero(self.field);
        for (s, a) in &self.terms {
            for (t, b) in &o.terms {
                if let Some(st) = s.multiply(t, store)? {
                    out.add_term(st, a.mul(b));
                }
            }
        }
        Ok(out)
    }

    /// `a·x` for a single semigroup element `x`.
    pub fn multiply_by_element(&self, x: &CanonicalElement, store: &mut MachineStore) -> Result<AlgebraElement, MachineError> {
        self.multiply(&AlgebraElement::monomial(self.field, x.clone()), store)
    }

    pub fn display(&self, store: &MachineStore) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (s, k)) in self.terms.iter().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            if *k != self.field.one() {
                out.push_str(&alloc::format!("({k})"));
            }
            out.push_str(&s.display(store));
        }
        out
    }
}

/// Cuntz–Krieger generators `v − Σ_{e ∈ vΓ¹} ee*` and the principal one.
#[derive(Clone, Debug)]
pub struct CkGenerators {
    pub per_vertex: Vec<(VertexId, AlgebraElement)>,
    pub principal: AlgebraElement,
}

pub fn ck_generators(store: &MachineStore, field: Field) -> CkGenerators {
    let graph = store.graph().clone();
    let mut per_vertex = Vec::new();
    let mut principal = AlgebraElement::zero(field);
    for v in graph.vertices() {
        let mut a = AlgebraElement::monomial(field, CanonicalElement::vertex(store, v));
        for &e in graph.out_edges(v) {
            let p = Path::edge(&graph, e);
            a.add_term(CanonicalElement::projection(store, &p), field.from_i64(-1));
        }
        principal = principal.add(&a);
        per_vertex.push((v, a));
    }
    CkGenerators { per_vertex, principal }
}

/// Evidence for non-membership in the tight ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TightCertificate {
    /// Index into the list of certified subgroups passed by the caller.
    pub subgroup: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TightStatus {
    InTight(usize),
    NotInTight(TightCertificate),
    Unknown(usize),
}

/// Frontier size at which the bounded probe gives up.
pub const PROBE_FRONTIER_CAP: usize = 1 << 16;

/// Whether `a` lies in the span of `{g : g ∈ H}` for `H ⊆ Iso(v, v)`.
pub fn supported_in(a: &AlgebraElement, store: &MachineStore, v: VertexId, elements: &[ElementRef]) -> bool {
    a.terms().all(|(s, _)| {
        s.left().is_empty()
            && s.right().is_empty()
            && s.left().source() == v
            && s.right().source() == v
            && elements.contains(&s.group_part())
            && store.dom(s.group_part()) == v
    })
}

/// Bounded test of `a ∈ I_tight`: `a·vΓⁿ = 0` for some `n ≤ bound` at each
/// vertex. Nonzero elements supported in one of `certified` (recurrent
/// subgroups given as (base vertex, elements)) are reported as outside.
pub fn tight_membership(
    a: &AlgebraElement,
    store: &mut MachineStore,
    bound: usize,
    certified: &[(VertexId, Vec<ElementRef>)],
) -> Result<TightStatus, MachineError> {
    if !a.is_zero() {
        for (i, (v, h)) in certified.iter().enumerate() {
            if supported_in(a, store, *v, h) {
                return Ok(TightStatus::NotInTight(TightCertificate { subgroup: i }));
            }
        }
    }
    let graph = store.graph().clone();
    let mut worst = 0;
    for v in graph.vertices() {
        let mut frontier = vec![Path::anchor(v)];
        let mut level = 0;
        loop {
            let mut alive = Vec::new();
            for p in &frontier {
                let ap = a.multiply_by_element(&CanonicalElement::path(store, p), store)?;
                if !ap.is_zero() {
                    alive.push(p.clone());
                }
            }
            if alive.is_empty() {
                worst = worst.max(level);
                break;
            }
            if level == bound {
                return Ok(TightStatus::Unknown(bound));
            }
            let mut next = Vec::new();
            for p in &alive {
                for &e in graph.out_edges(p.range()) {
                    next.push(p.extended(&graph, e));
                }
            }
            if next.len() > PROBE_FRONTIER_CAP {
                return Ok(TightStatus::Unknown(level));
            }
            frontier = next;
            level += 1;
        }
    }
    Ok(TightStatus::InTight(worst))
}

/// Shortest (then lexicographically least) `q ∈ r(p)Γ*` with `|q| ≤ bound`
/// and `a·p·q = 0`.
pub fn singular_probe(
    a: &AlgebraElement,
    p: &Path,
    store: &mut MachineStore,
    bound: usize,
) -> Result<Option<Path>, MachineError> {
    let graph = store.graph().clone();
    let mut level = vec![Path::anchor(p.range())];
    for _ in 0..=bound {
        for q in &level {
            let pq = p.concat(q).expect("q starts at r(p)");
            if a.multiply_by_element(&CanonicalElement::path(store, &pq), store)?.is_zero() {
                return Ok(Some(q.clone()));
            }
        }
        let mut next = Vec::new();
        for q in &level {
            for &e in graph.out_edges(q.range()) {
                next.push(q.extended(&graph, e));
            }
        }
        if next.is_empty() || next.len() > PROBE_FRONTIER_CAP {
            break;
        }
        level = next;
    }
    Ok(None)
}

/// The unique decomposition `a = Σ_p p·a_p` with `a_p` in the groupoid
/// algebra, for `a` supported on elements `p·g`.
pub fn decompose_in_m(a: &AlgebraElement, store: &MachineStore) -> Result<Vec<(Path, AlgebraElement)>, AlgebraError> {
    let mut parts: BTreeMap<Path, AlgebraElement> = BTreeMap::new();
    for (s, k) in a.terms() {
        if !s.right().is_empty() {
            return Err(AlgebraError::NotInKm(s.display(store)));
        }
        let g = CanonicalElement::group(store, s.group_part());
        parts
            .entry(s.left().clone())
            .or_insert_with(|| AlgebraElement::zero(a.field()))
            .add_term(g, k.clone());
    }
    Ok(parts.into_iter().collect())
}

/// Dense integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntegerMatrix {
        IntegerMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[Vec<i64>]) -> IntegerMatrix {
        let mut m = IntegerMatrix::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged matrix");
            for (j, &x) in r.iter().enumerate() {
                m.set(i, j, BigInt::from(x));
            }
        }
        m
    }

    /// Rows given as 0/1 strings such as `"1001"`.
    pub fn from_bit_rows(rows: &[&str]) -> IntegerMatrix {
        let cols = rows.first().map_or(0, |r| r.len());
        let parsed: Vec<Vec<i64>> = rows
            .iter()
            .map(|r| r.bytes().map(|b| i64::from(b == b'1')).collect())
            .collect();
        IntegerMatrix::from_rows(cols, &parsed)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, o: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, o.rows);
        let mut out = IntegerMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = out.get(i, j) + a * o.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[a] += k·row[b]
    fn add_row(&mut self, a: usize, b: usize, k: &BigInt) {
        for j in 0..self.cols {
            let v = self.get(a, j) + k * self.get(b, j);
            self.set(a, j, v);
        }
    }

    /// col[a] += k·col[b]
    fn add_col(&mut self, a: usize, b: usize, k: &BigInt) {
        for i in 0..self.rows {
            let v = self.get(i, a) + k * self.get(i, b);
            self.set(i, a, v);
        }
    }

    fn negate_row(&mut self, a: usize) {
        for j in 0..self.cols {
            let v = -self.get(a, j);
            self.set(a, j, v);
        }
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let r: Vec<String> = self.row(i).iter().map(|x| alloc::format!("{x}")).collect();
            writeln!(f, "[{}]", r.join(" "))?;
        }
        Ok(())
    }
}

/// `U·M·V = D` with `D` diagonal, `d₁ | d₂ | …`, `U`, `V` unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    /// Nonzero diagonal entries, positive, in divisibility order.
    pub divisors: Vec<BigInt>,
    pub rank: usize,
    pub cols: usize,
    pub u: IntegerMatrix,
    pub v: IntegerMatrix,
    pub d: IntegerMatrix,
}

impl SnfResult {
    /// Nullity of the matrix over the given field, read off the divisors.
    pub fn nullity(&self, field: Field) -> usize {
        match field {
            Field::Rational => self.cols - self.rank,
            Field::Prime(p) => {
                let p = BigInt::from(p);
                self.cols - self.divisors.iter().filter(|d| !d.is_multiple_of(&p)).count()
            }
        }
    }

    /// Whether every divisor is 1 (nullity `cols − rank` in every field).
    pub fn is_unimodular_chain(&self) -> bool {
        self.divisors.iter().all(|d| d.is_one())
    }

    /// Primes dividing some divisor.
    pub fn bad_primes(&self) -> Vec<u64> {
        let mut out = Vec::new();
        for d in &self.divisors {
            for p in prime_factors(d) {
                if !out.contains(&p) {
                    out.push(p);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Prime factors of `n` by trial division. Divisors arising from coset
/// matrices are tiny, so this never meets a large prime in practice.
pub fn prime_factors(n: &BigInt) -> Vec<u64> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut d = 2u64;
    while n > BigInt::one() {
        let bd = BigInt::from(d);
        if &bd * &bd > n {
            out.push(n.to_u64().expect("prime cofactor beyond u64"));
            break;
        }
        if n.is_multiple_of(&bd) {
            out.push(d);
            while n.is_multiple_of(&bd) {
                n /= &bd;
            }
        }
        d += 1;
    }
    out
}

fn min_abs_position<I: Iterator<Item = (usize, usize)>>(m: &IntegerMatrix, cells: I) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for (i, j) in cells {
        let x = m.get(i, j);
        if x.is_zero() {
            continue;
        }
        let a = x.abs();
        if best.as_ref().is_none_or(|(_, b)| a < *b) {
            best = Some(((i, j), a));
        }
    }
    best.map(|(pos, _)| pos)
}

/// Smith normal form with the minimum-absolute-value pivot rule.
pub fn smith_normal_form(m: &IntegerMatrix) -> SnfResult {
    let (rows, cols) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntegerMatrix::identity(rows);
    let mut v = IntegerMatrix::identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_abs_position(&d, (t..rows).flat_map(|i| (t..cols).map(move |j| (i, j)))) else {
            break;
        };
        d.swap_rows(t, pi);
        u.swap_rows(t, pi);
        d.swap_cols(t, pj);
        v.swap_cols(t, pj);
        loop {
            // Clear column t and row t by Euclidean steps, re-pivoting on the
            // smallest remainder.
            let mut clean = true;
            for i in t + 1..rows {
                if !d.get(i, t).is_zero() {
                    let q = -d.get(i, t).div_floor(d.get(t, t));
                    d.add_row(i, t, &q);
                    u.add_row(i, t, &q);
                    clean &= d.get(i, t).is_zero();
                }
            }
            for j in t + 1..cols {
                if !d.get(t, j).is_zero() {
                    let q = -d.get(t, j).div_floor(d.get(t, t));
                    d.add_col(j, t, &q);
                    v.add_col(j, t, &q);
                    clean &= d.get(t, j).is_zero();
                }
            }
            if !clean {
                let cells = (t..rows).map(|i| (i, t)).chain((t + 1..cols).map(|j| (t, j)));
                let (pi, pj) = min_abs_position(&d, cells).expect("pivot is nonzero");
                d.swap_rows(t, pi);
                u.swap_rows(t, pi);
                d.swap_cols(t, pj);
                v.swap_cols(t, pj);
                continue;
            }
            // Divisibility: fold an offending row into row t and repeat.
            let pivot = d.get(t, t).clone();
            let offending = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d.get(i, j).is_multiple_of(&pivot)));
            match offending {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if d.get(t, t).is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let divisors: Vec<BigInt> = (0..rows.min(cols))
        .map(|i| d.get(i, i).clone())
        .filter(|x| !x.is_zero())
        .collect();
    SnfResult {
        rank: divisors.len(),
        divisors,
        cols,
        u,
        v,
        d,
    }
}

/// Reduced row echelon form over a field; returns (matrix, pivot columns).
pub fn rref(m: &IntegerMatrix, field: Field) -> (Vec<Vec<Scalar>>, Vec<usize>) {
    let mut a: Vec<Vec<Scalar>> = (0..m.rows)
        .map(|i| m.row(i).iter().map(|x| field.from_bigint(x)).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        let Some(p) = (r..m.rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inv().expect("nonzero pivot");
        for x in a[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for i in 0..m.rows {
            if i != r && !a[i][c].is_zero() {
                let k = a[i][c].clone();
                let pivot_row = a[r].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x = x.sub(&k.mul(y));
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.rows {
            break;
        }
    }
    (a, pivots)
}

pub fn rank_over(m: &IntegerMatrix, field: Field) -> usize {
    rref(m, field).1.len()
}

/// Basis of `{x : M x = 0}` over the field, one vector per free column,
/// with a 1 in that column.
pub fn nullspace(m: &IntegerMatrix, field: Field) -> Vec<Vec<Scalar>> {
    let (a, pivots) = rref(m, field);
    let mut basis = Vec::new();
    for free in (0..m.cols).filter(|c| !pivots.contains(c)) {
        let mut x = vec![field.zero(); m.cols];
        x[free] = field.one();
        for (r, &pc) in pivots.iter().enumerate() {
            x[pc] = a[r][free].neg();
        }
        basis.push(x);
    }
    basis
}

/// `M·x` over the field.
pub fn apply(m: &IntegerMatrix, x: &[Scalar], field: Field) -> Vec<Scalar> {
    (0..m.rows)
        .map(|i| {
            m.row(i)
                .iter()
                .zip(x)
                .fold(field.zero(), |acc, (a, b)| acc.add(&field.from_bigint(a).mul(b)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Graph, RawEdge, RawGraph};
    use crate::machine::{GeneratorSpec, RuleSpec};

    fn jjj_matrix() -> IntegerMatrix {
        IntegerMatrix::from_bit_rows(&["1111", "1001", "0110", "1010", "0101", "1100", "0011"])
    }

    fn nn_matrix() -> IntegerMatrix {
        IntegerMatrix::from_bit_rows(&["1111", "1001", "0110", "1010", "0101"])
    }

    fn check_certificate(m: &IntegerMatrix, s: &SnfResult) {
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        for w in s.divisors.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
    }

    #[test]
    fn jjj_rank_and_f2_kernel() {
        let m = jjj_matrix();
        let s = smith_normal_form(&m);
        check_certificate(&m, &s);
        assert_eq!(s.rank, 4);
        assert_eq!(s.divisors, [1, 1, 1, 2].map(BigInt::from).to_vec());
        assert!(nullspace(&m, Field::Rational).is_empty());
        let k = nullspace(&m, Field::Prime(2));
        assert_eq!(k.len(), 1);
        assert!(k[0].iter().all(|x| *x == Field::Prime(2).one()));
        assert_eq!(s.nullity(Field::Prime(2)), 1);
        assert_eq!(s.nullity(Field::Prime(3)), 0);
        assert_eq!(s.bad_primes(), vec![2]);
    }

    #[test]
    fn nn_kernel_is_one_one_minus_minus() {
        let m = nn_matrix();
        let s = smith_normal_form(&m);
        check_certificate(&m, &s);
        assert_eq!(s.rank, 3);
        let k = nullspace(&m, Field::Rational);
        assert_eq!(k.len(), 1);
        let q = |n: i64| Field::Rational.from_i64(n);
        // Normalise so the first entry is 1.
        let lead = k[0][0].inv().unwrap();
        let v: Vec<Scalar> = k[0].iter().map(|x| x.mul(&lead)).collect();
        assert_eq!(v, vec![q(1), q(1), q(-1), q(-1)]);
    }

    #[test]
    fn identity_matrix_has_unit_divisors() {
        let m = IntegerMatrix::identity(5);
        let s = smith_normal_form(&m);
        assert!(s.is_unimodular_chain());
        assert_eq!(s.rank, 5);
        assert!(nullspace(&m, Field::Prime(3)).is_empty());
    }

    #[test]
    fn snf_of_zero_and_empty() {
        let s = smith_normal_form(&IntegerMatrix::zeros(3, 2));
        assert_eq!(s.rank, 0);
        assert_eq!(s.nullity(Field::Rational), 2);
        let s = smith_normal_form(&IntegerMatrix::zeros(0, 3));
        assert_eq!(s.nullity(Field::Prime(5)), 3);
    }

    #[test]
    fn field_parsing() {
        assert_eq!(Field::from_characteristic(0), Ok(Field::Rational));
        assert_eq!(Field::from_characteristic(7), Ok(Field::Prime(7)));
        assert_eq!(Field::from_characteristic(6), Err(AlgebraError::NotPrime(6)));
        assert_eq!(Field::Prime(5).from_i64(-1), Scalar::Prime { value: 4, p: 5 });
        assert_eq!(Field::Prime(7).from_i64(3).inv(), Some(Field::Prime(7).from_i64(5)));
    }

    #[test]
    fn prime_factorisation() {
        assert_eq!(prime_factors(&BigInt::from(360)), vec![2, 3, 5]);
        assert_eq!(prime_factors(&BigInt::from(1)), Vec::<u64>::new());
        assert_eq!(prime_factors(&BigInt::from(97)), vec![97]);
    }

    fn example_9_3_graph_store() -> MachineStore {
        let raw = RawGraph {
            vertices: vec!["x".into(), "y".into()],
            edges: ["i:x:x", "j:x:x", "e:x:y", "f:x:y", "m:y:y", "n:y:y", "g:y:x", "h:y:x"]
                .iter()
                .map(|s| {
                    let p: Vec<&str> = s.split(':').collect();
                    RawEdge::new(p[0], p[1], p[2])
                })
                .collect(),
        };
        MachineStore::new(&Graph::new(&raw).unwrap())
    }

    #[test]
    fn ck_generator_of_x_has_four_projections() {
        let s = example_9_3_graph_store();
        let ck = ck_generators(&s, Field::Rational);
        let (_, x) = &ck.per_vertex[0];
        let shown = x.display(&s);
        assert_eq!(x.support().len(), 5);
        for e in ["i", "j", "e", "f"] {
            assert!(shown.contains(&alloc::format!("(-1){e}·({e})*")), "{shown}");
        }
        let sum = ck.per_vertex.iter().fold(AlgebraElement::zero(Field::Rational), |acc, (_, a)| acc.add(a));
        assert_eq!(sum, ck.principal);
    }

    #[test]
    fn ck_generator_kills_each_out_edge_and_is_tight() {
        let mut s = example_9_3_graph_store();
        let graph = s.graph().clone();
        for field in [Field::Rational, Field::Prime(2)] {
            let ck = ck_generators(&s, field);
            for (v, a) in &ck.per_vertex {
                for &e in graph.out_edges(*v) {
                    let ae = a.multiply_by_element(&CanonicalElement::edge(&s, e), &mut s).unwrap();
                    assert!(ae.is_zero());
                }
                assert_eq!(tight_membership(a, &mut s, 4, &[]).unwrap(), TightStatus::InTight(1));
            }
            assert_eq!(
                tight_membership(&ck.principal, &mut s, 4, &[]).unwrap(),
                TightStatus::InTight(1)
            );
        }
    }

    #[test]
    fn unit_is_neutral_and_zero_absorbs() {
        let mut s = example_9_3_graph_store();
        let one = AlgebraElement::one(&s, Field::Rational);
        let ck = ck_generators(&s, Field::Rational);
        let a = &ck.per_vertex[1].1;
        assert_eq!(&one.multiply(a, &mut s).unwrap(), a);
        assert_eq!(&a.multiply(&one, &mut s).unwrap(), a);
        let z = AlgebraElement::zero(Field::Rational);
        assert!(a.multiply(&z, &mut s).unwrap().is_zero());
    }

    #[test]
    fn vertex_is_unknown_under_small_bound() {
        let mut s = example_9_3_graph_store();
        let x = AlgebraElement::monomial(Field::Rational, CanonicalElement::vertex(&s, VertexId(0)));
        assert_eq!(tight_membership(&x, &mut s, 2, &[]).unwrap(), TightStatus::Unknown(2));
    }

    #[test]
    fn ck_generators_are_singular_on_sampled_paths() {
        let mut s = example_9_3_graph_store();
        let graph = s.graph().clone();
        let ck = ck_generators(&s, Field::Prime(3));
        for (v, a) in &ck.per_vertex {
            for n in 0..3 {
                for p in graph.paths_from(*v, n).unwrap() {
                    let q = singular_probe(a, &p, &mut s, 3).unwrap().expect("killing extension");
                    assert!(q.len() <= 1);
                }
            }
        }
    }

    fn basilica() -> (MachineStore, ElementRef, ElementRef) {
        let g = Graph::new(&RawGraph {
            vertices: vec!["v".into()],
            edges: vec![RawEdge::new("e", "v", "v"), RawEdge::new("f", "v", "v")],
        })
        .unwrap();
        let specs = vec![
            GeneratorSpec::new("c", "v", "v", vec![RuleSpec::new("e", "e", &[]), RuleSpec::new("f", "f", &["d"])]),
            GeneratorSpec::new("d", "v", "v", vec![RuleSpec::new("e", "f", &["c"]), RuleSpec::new("f", "e", &[])]),
        ];
        let (s, m) = MachineStore::load_generators(&g, &specs).unwrap();
        (s, m["c"], m["d"])
    }

    #[test]
    fn decomposition_groups_by_left_path() {
        let (s, c, d) = basilica();
        let graph = s.graph().clone();
        let f = Path::edge(&graph, graph.edge("f").unwrap());
        let v = Path::anchor(VertexId(0));
        let k = Field::Rational;
        let fc = CanonicalElement::make(&s, f.clone(), c, v.clone()).unwrap();
        let fd = CanonicalElement::make(&s, f.clone(), d, v.clone()).unwrap();
        let a = AlgebraElement::from_terms(k, [(fc, k.one()), (fd, k.one())]);
        let parts = decompose_in_m(&a, &s).unwrap();
        let expected = AlgebraElement::from_terms(
            k,
            [(CanonicalElement::group(&s, c), k.one()), (CanonicalElement::group(&s, d), k.one())],
        );
        assert_eq!(parts, vec![(f.clone(), expected)]);

        let in_kg = AlgebraElement::monomial(k, CanonicalElement::group(&s, c));
        assert_eq!(decompose_in_m(&in_kg, &s).unwrap(), vec![(v, in_kg.clone())]);

        let e_star = CanonicalElement::edge_star(&s, graph.edge("e").unwrap());
        let bad = AlgebraElement::monomial(k, e_star);
        assert!(matches!(decompose_in_m(&bad, &s), Err(AlgebraError::NotInKm(_))));
    }
}
