//! Graphs, graph states and codeword stabilized codes.
//!
//! A CWS code here is a graph `Γ` and a single nonzero codeword `w`. Its
//! logical basis is `|0_L⟩ = |Γ⟩` and `|1_L⟩ = Z^w |Γ⟩`. The logical frame is
//! `X_L = Z^w` and `Z_L = K_j` for the smallest `j` with `w_j = 1`, where
//! `K_i = X_i Z^{N(i)}` are the graph-state stabilizers.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::OnceLock;

use ndarray::Array2;
use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::pauli::{GeneratorSet, PauliOperator, Phase, MAX_QUBITS};
use crate::scalar::Scalar;

/// Largest vertex count accepted by graph enumeration.
pub const MAX_SEARCH_VERTICES: usize = 6;

/// Simple undirected graph on at most 8 vertices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: u8,
    // bit j of rows[i] is the edge i–j
    rows: [u8; MAX_QUBITS],
}

impl Graph {
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::SizeOutOfRange(n, 1, MAX_QUBITS));
        }
        Ok(Self { n: n as u8, rows: [0; MAX_QUBITS] })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(a, b) in edges {
            if a >= n || b >= n || a == b {
                return Err(Error::InvalidCode(format!("bad edge ({a}, {b}) for {n} vertices")));
            }
            g.set_edge(a, b, true);
        }
        Ok(g)
    }

    /// Builds a graph from an adjacency matrix, which must be symmetric with
    /// zero diagonal.
    pub fn from_adjacency(adj: &[Vec<bool>]) -> Result<Self> {
        let n = adj.len();
        let mut g = Self::empty(n)?;
        for (i, row) in adj.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidCode(format!("adjacency row {i} has {} entries, expected {n}", row.len())));
            }
            if row[i] {
                return Err(Error::InvalidCode(format!("adjacency diagonal entry {i} is nonzero")));
            }
            for (j, &e) in row.iter().enumerate() {
                if e != adj[j][i] {
                    return Err(Error::InvalidCode(format!("adjacency is not symmetric at ({i}, {j})")));
                }
                if e {
                    g.set_edge(i, j, true);
                }
            }
        }
        Ok(g)
    }

    /// Parses semicolon separated bit rows, e.g. `"011;101;110"`.
    pub fn parse_rows(s: &str) -> Result<Self> {
        let adj = s
            .split(';')
            .map(|row| {
                row.trim()
                    .chars()
                    .map(|c| match c {
                        '0' => Ok(false),
                        '1' => Ok(true),
                        other => Err(Error::Parse(format!("invalid adjacency character '{other}'"))),
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_adjacency(&adj)
    }

    pub fn to_rows_string(&self) -> String {
        (0..self.n())
            .map(|i| (0..self.n()).map(|j| if self.has_edge(i, j) { '1' } else { '0' }).collect::<String>())
            .collect::<Vec<_>>()
            .join(";")
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.rows[a] >> b & 1 == 1
    }

    fn set_edge(&mut self, a: usize, b: usize, on: bool) {
        if on {
            self.rows[a] |= 1 << b;
            self.rows[b] |= 1 << a;
        } else {
            self.rows[a] &= !(1 << b);
            self.rows[b] &= !(1 << a);
        }
    }

    pub fn neighbors(&self, v: usize) -> u8 {
        self.rows[v]
    }

    /// Edges `(i, j)` with `i < j` in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).filter(|&(i, j)| self.has_edge(i, j)).collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    /// Upper triangle as an integer; pair `(0,1)` is the most significant bit,
    /// followed by `(0,2)`, …, `(n-2,n-1)`.
    pub fn upper_bits(&self) -> u32 {
        let n = self.n();
        let mut code = 0u32;
        for i in 0..n {
            for j in i + 1..n {
                code = code << 1 | self.has_edge(i, j) as u32;
            }
        }
        code
    }

    pub fn from_upper_bits(n: usize, code: u32) -> Result<Self> {
        let mut g = Self::empty(n)?;
        let m = n * (n - 1) / 2;
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                if code >> (m - 1 - k) & 1 == 1 {
                    g.set_edge(i, j, true);
                }
                k += 1;
            }
        }
        Ok(g)
    }

    pub fn upper_bits_string(&self) -> String {
        let m = self.n() * (self.n() - 1) / 2;
        if m == 0 {
            return String::new();
        }
        format!("{:0width$b}", self.upper_bits(), width = m)
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let mut g = Self { n: self.n, rows: [0; MAX_QUBITS] };
        for (i, j) in self.edges() {
            g.set_edge(perm[i], perm[j], true);
        }
        g
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen::<bool>() {
                    g.set_edge(i, j, true);
                }
            }
        }
        Ok(g)
    }

    /// Graph-state stabilizer `K_v = X_v Z^{N(v)}`.
    pub fn stabilizer(&self, v: usize) -> PauliOperator {
        let n = self.n();
        let z = (0..n).filter(|&j| self.has_edge(v, j)).fold(0u16, |acc, j| acc | 1 << (n - 1 - j));
        PauliOperator::from_bits(n, 1 << (n - 1 - v), z, Phase::PlusOne).expect("valid size")
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({}; {})", self.n, self.to_rows_string())
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_rows_string())
    }
}

struct PermTable {
    pairs: usize,
    // for each permutation, the upper-triangle position every pair maps to
    maps: Vec<u8>,
}

fn perm_table(n: usize) -> &'static PermTable {
    static TABLES: [OnceLock<PermTable>; MAX_QUBITS + 1] = [const { OnceLock::new() }; MAX_QUBITS + 1];
    TABLES[n].get_or_init(|| {
        let pair_index = |a: usize, b: usize| {
            let (i, j) = if a < b { (a, b) } else { (b, a) };
            // position of (i, j) in row-major upper triangle order
            i * (2 * n - i - 1) / 2 + (j - i - 1)
        };
        let pairs = n * n.saturating_sub(1) / 2;
        let mut maps = Vec::new();
        let mut perm: Vec<usize> = (0..n).collect();
        permutations(&mut perm, 0, &mut |p| {
            for i in 0..n {
                for j in i + 1..n {
                    maps.push(pair_index(p[i], p[j]) as u8);
                }
            }
        });
        PermTable { pairs, maps }
    })
}

fn permutations(perm: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == perm.len() {
        visit(perm);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permutations(perm, k + 1, visit);
        perm.swap(k, i);
    }
}

/// All permutations of `0..n` (used by tests and property checks).
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    permutations(&mut perm, 0, &mut |p| out.push(p.to_vec()));
    out
}

fn canonical_code(n: usize, code: u32) -> u32 {
    let table = perm_table(n);
    let m = table.pairs;
    if m == 0 {
        return 0;
    }
    let present: Vec<usize> = (0..m).filter(|&k| code >> (m - 1 - k) & 1 == 1).collect();
    table
        .maps
        .chunks_exact(m)
        .map(|map| present.iter().fold(0u32, |acc, &k| acc | 1 << (m - 1 - map[k] as usize)))
        .min()
        .unwrap_or(code)
}

/// Isomorphism-class representative: the relabeling whose upper-triangle
/// bit string is lexicographically smallest.
pub fn canonical_graph(g: &Graph) -> Graph {
    let n = g.n();
    Graph::from_upper_bits(n, canonical_code(n, g.upper_bits())).expect("same size")
}

/// The code relabelled onto its canonical graph. Among the relabellings that
/// reach it, the one giving the smallest codeword is used.
pub fn canonical_cws(code: &CwsCode) -> CwsCode {
    let target = canonical_graph(code.graph());
    all_permutations(code.n())
        .iter()
        .map(|p| code.permute(p))
        .filter(|c| *c.graph() == target)
        .min_by_key(|c| c.codeword())
        .expect("the canonical graph is reachable by some relabelling")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphMode {
    All,
    NonIsomorphic,
}

/// Every labelled graph on `n` vertices, or one canonical representative per
/// isomorphism class (in increasing canonical order).
pub fn enumerate_graphs(n: usize, mode: GraphMode) -> Result<Vec<Graph>> {
    if !(2..=MAX_SEARCH_VERTICES).contains(&n) {
        return Err(Error::SizeOutOfRange(n, 2, MAX_SEARCH_VERTICES));
    }
    let m = n * (n - 1) / 2;
    let codes = 0..1u32 << m;
    match mode {
        GraphMode::All => codes.map(|c| Graph::from_upper_bits(n, c)).collect(),
        GraphMode::NonIsomorphic => {
            let reps: BTreeSet<u32> = codes.map(|c| canonical_code(n, c)).collect();
            reps.into_iter().map(|c| Graph::from_upper_bits(n, c)).collect()
        }
    }
}

/// `2^{-n/2} Σ_x i^{xᵀΓx} |x⟩`. Since `xᵀΓx` is twice the number of edges
/// inside `x`, every amplitude is `±2^{-n/2}`.
pub fn graph_state<T: Scalar>(g: &Graph) -> Vec<Complex<T>> {
    let n = g.n();
    let amp = T::lit(2f64.powf(-(n as f64) / 2.0));
    let edges = g.edges();
    (0..1usize << n)
        .map(|b| {
            let bit = |q: usize| b >> (n - 1 - q) & 1 == 1;
            let inside = edges.iter().filter(|&&(i, j)| bit(i) && bit(j)).count();
            let s = if inside % 2 == 0 { amp } else { -amp };
            Complex::new(s, T::zero())
        })
        .collect()
}

/// Codeword stabilized code with a single nonzero codeword.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CwsCode {
    graph: Graph,
    // bit n-1-k addresses qubit k, matching the Pauli bit layout
    codeword: u16,
}

impl CwsCode {
    pub fn new(graph: Graph, codeword: u16) -> Result<Self> {
        let n = graph.n();
        if codeword == 0 {
            return Err(Error::InvalidCode("codeword w = 0 gives a degenerate code".into()));
        }
        if codeword & !PauliOperator::full_mask(n) != 0 {
            return Err(Error::InvalidCode(format!("codeword wider than {n} qubits")));
        }
        Ok(Self { graph, codeword })
    }

    /// Codeword from a bit string such as `"011"` (qubit 0 first).
    pub fn with_codeword_str(graph: Graph, w: &str) -> Result<Self> {
        let w = w.trim();
        if w.len() != graph.n() {
            return Err(Error::Parse(format!("codeword \"{w}\" has {} bits, graph has {} vertices", w.len(), graph.n())));
        }
        let mut mask = 0u16;
        for c in w.chars() {
            mask = mask << 1
                | match c {
                    '0' => 0,
                    '1' => 1,
                    other => return Err(Error::Parse(format!("invalid codeword character '{other}'"))),
                };
        }
        Self::new(graph, mask)
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn codeword(&self) -> u16 {
        self.codeword
    }

    pub fn codeword_bit(&self, qubit: usize) -> bool {
        self.codeword >> (self.n() - 1 - qubit) & 1 == 1
    }

    pub fn codeword_string(&self) -> String {
        (0..self.n()).map(|q| if self.codeword_bit(q) { '1' } else { '0' }).collect()
    }

    /// `Z^w`, which maps `|0_L⟩` to `|1_L⟩`.
    pub fn logical_x(&self) -> PauliOperator {
        PauliOperator::z_string(self.n(), self.codeword).expect("valid size")
    }

    /// Index of the first qubit in the support of `w`.
    pub fn logical_z_vertex(&self) -> usize {
        (0..self.n()).find(|&q| self.codeword_bit(q)).expect("w is nonzero")
    }

    /// Same code with its vertices relabelled by `perm`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let n = self.n();
        let mut w = 0u16;
        for q in 0..n {
            if self.codeword_bit(q) {
                w |= 1 << (n - 1 - perm[q]);
            }
        }
        Self { graph: self.graph.permute(perm), codeword: w }
    }
}

/// Dense logical basis vectors of a `k = 1` code.
#[derive(Clone, Debug, PartialEq)]
pub struct LogicalBasis<T> {
    pub ket0: Vec<Complex<T>>,
    pub ket1: Vec<Complex<T>>,
}

impl<T: Scalar> LogicalBasis<T> {
    pub fn n(&self) -> usize {
        self.ket0.len().trailing_zeros() as usize
    }

    pub fn check_orthonormal(&self, tol: T) -> Result<()> {
        let n0 = inner(&self.ket0, &self.ket0);
        let n1 = inner(&self.ket1, &self.ket1);
        let ov = inner(&self.ket0, &self.ket1);
        if (n0.re - T::one()).abs() > tol || (n1.re - T::one()).abs() > tol || ov.norm() > tol {
            return Err(Error::Consistency(format!(
                "logical basis not orthonormal: |0|² = {n0}, |1|² = {n1}, ⟨0|1⟩ = {ov}"
            )));
        }
        Ok(())
    }

    /// `|0_L⟩⟨0_L| + |1_L⟩⟨1_L|`.
    pub fn projector(&self) -> Array2<Complex<T>> {
        let dim = self.ket0.len();
        Array2::from_shape_fn((dim, dim), |(i, j)| {
            self.ket0[i] * self.ket0[j].conj() + self.ket1[i] * self.ket1[j].conj()
        })
    }
}

/// `⟨a|b⟩`.
pub fn inner<T: Scalar>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    a.iter().zip(b).fold(Complex::new(T::zero(), T::zero()), |acc, (x, y)| acc + x.conj() * y)
}

/// `|⟨a|b⟩|`, which is 1 exactly when two unit vectors agree up to global phase.
pub fn overlap_up_to_phase<T: Scalar>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    inner(a, b).norm()
}

pub fn logical_basis<T: Scalar>(c: &CwsCode) -> LogicalBasis<T> {
    let ket0 = graph_state::<T>(c.graph());
    let w = c.codeword() as usize;
    let ket1 = ket0
        .iter()
        .enumerate()
        .map(|(b, a)| if (w & b).count_ones() % 2 == 0 { *a } else { -*a })
        .collect();
    LogicalBasis { ket0, ket1 }
}

/// Codespace stabilizers and logical frame of a CWS code.
///
/// The generators are `∏ K_i^{a_i}` over a basis of `{a : a·w = 0}`; every
/// returned operator is checked against the dense logical basis.
pub fn codespace_generators(c: &CwsCode) -> Result<GeneratorSet> {
    let n = c.n();
    let g = c.graph();
    let j0 = c.logical_z_vertex();
    let mut gens = Vec::with_capacity(n - 1);
    for i in (0..n).filter(|&i| i != j0) {
        let mut op = g.stabilizer(i);
        if c.codeword_bit(i) {
            op = op.multiply(&g.stabilizer(j0))?;
        }
        gens.push(op);
    }
    let set = GeneratorSet::new(gens, g.stabilizer(j0), c.logical_x())
        .map_err(|e| Error::Consistency(format!("CWS generator construction: {e}")))?;

    let basis = logical_basis::<f64>(c);
    let close = |a: &[Complex<f64>], b: &[Complex<f64>]| a.iter().zip(b).all(|(x, y)| (x - y).norm() < 1e-12);
    for op in set.generators() {
        if !close(&op.apply(&basis.ket0), &basis.ket0) || !close(&op.apply(&basis.ket1), &basis.ket1) {
            return Err(Error::Consistency(format!("generator {op} does not fix the codespace")));
        }
    }
    let zl = set.logical_z();
    let neg1: Vec<_> = basis.ket1.iter().map(|a| -a).collect();
    if !close(&zl.apply(&basis.ket0), &basis.ket0) || !close(&zl.apply(&basis.ket1), &neg1) {
        return Err(Error::Consistency(format!("logical Z {zl} has the wrong action")));
    }
    if !close(&set.logical_x().apply(&basis.ket0), &basis.ket1) {
        return Err(Error::Consistency("logical X does not map |0_L⟩ to |1_L⟩".into()));
    }
    Ok(set)
}

/// Logical basis of a code given by stabilizer generators: `|0_L⟩` is the
/// joint +1 eigenvector of the generators and `Z_L`, and `|1_L⟩ = X_L|0_L⟩`.
/// The global phase is fixed by making the largest amplitude of `|0_L⟩`
/// (first one on ties) real and positive.
pub fn basis_from_generators<T: Scalar>(set: &GeneratorSet) -> Result<LogicalBasis<T>> {
    let n = set.n();
    let dim = 1usize << n;
    let half = T::lit(0.5);
    let mut ops = set.generators().to_vec();
    ops.push(*set.logical_z());
    let project = |b: usize| {
        let mut v = vec![Complex::new(T::zero(), T::zero()); dim];
        v[b] = Complex::new(T::one(), T::zero());
        for g in &ops {
            let gv = g.apply(&v);
            for (a, c) in v.iter_mut().zip(gv) {
                *a = (*a + c) * half;
            }
        }
        v
    };
    // ⟨b|Π|b⟩ = Σ_{g ∈ group} ⟨b|g|b⟩ / 2^n; pick the basis state with the
    // largest overlap for a well-conditioned projection.
    let (best, _) = (0..dim)
        .map(|b| (b, inner(&project(b), &project(b)).re))
        .fold((0, T::neg_infinity()), |acc, (b, w)| if w > acc.1 { (b, w) } else { acc });
    let mut ket0 = project(best);
    let norm = inner(&ket0, &ket0).re.sqrt();
    if norm < T::lit(1e-6) {
        return Err(Error::Consistency("codespace projection vanished".into()));
    }
    let (mut lead, mut lead_abs) = (ket0[0], T::zero());
    for a in &ket0 {
        if a.norm() > lead_abs + T::lit(1e-9) {
            lead = *a;
            lead_abs = a.norm();
        }
    }
    let rot = lead.conj() / Complex::new(lead_abs * norm, T::zero());
    for a in ket0.iter_mut() {
        *a = *a * rot;
    }
    let ket1 = set.logical_x().apply(&ket0);
    let basis = LogicalBasis { ket0, ket1 };
    basis.check_orthonormal(T::lit(T::REAL_TOL))?;
    Ok(basis)
}

/// Graph-state preparation circuit: `H` on every qubit, `CZ` per edge, and a
/// comment naming the logical X operator `Z^w`.
pub fn emit_encoding_circuit(c: &CwsCode) -> String {
    let mut out = String::new();
    for q in 0..c.n() {
        out.push_str(&format!("H q{q}\n"));
    }
    for (i, j) in c.graph().edges() {
        out.push_str(&format!("CZ q{i} q{j}\n"));
    }
    out.push_str(&format!("# logical_x: {}\n", c.logical_x()));
    out
}

/// Runs a circuit in the `H q<i>` / `CZ q<i> q<j>` text format on `|0…0⟩`.
pub fn simulate_circuit<T: Scalar>(n: usize, text: &str) -> Result<Vec<Complex<T>>> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::SizeOutOfRange(n, 1, MAX_QUBITS));
    }
    let dim = 1usize << n;
    let mut psi = vec![Complex::new(T::zero(), T::zero()); dim];
    psi[0] = Complex::new(T::one(), T::zero());
    let qubit = |tok: &str, line: usize| -> Result<usize> {
        tok.strip_prefix('q')
            .and_then(|d| d.parse::<usize>().ok())
            .filter(|&q| q < n)
            .ok_or_else(|| Error::Parse(format!("line {line}: bad qubit `{tok}`")))
    };
    let h = T::FRAC_1_SQRT_2();
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        match toks.as_slice() {
            ["H", q] => {
                let bit = 1 << (n - 1 - qubit(q, ln + 1)?);
                for b in (0..dim).filter(|b| b & bit == 0) {
                    let (a0, a1) = (psi[b], psi[b | bit]);
                    psi[b] = (a0 + a1) * h;
                    psi[b | bit] = (a0 - a1) * h;
                }
            }
            ["CZ", a, b] => {
                let mask = 1 << (n - 1 - qubit(a, ln + 1)?) | 1 << (n - 1 - qubit(b, ln + 1)?);
                for (idx, amp) in psi.iter_mut().enumerate() {
                    if idx & mask == mask {
                        *amp = -*amp;
                    }
                }
            }
            _ => return Err(Error::Parse(format!("line {}: unrecognised gate `{line}`", ln + 1))),
        }
    }
    Ok(psi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn approx_eq(a: &[Complex<f64>], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x.re - y).abs() < 1e-12 && x.im.abs() < 1e-12)
    }

    #[test]
    fn graph_state_small_examples() {
        let empty = Graph::empty(2).unwrap();
        assert!(approx_eq(&graph_state::<f64>(&empty), &[0.5, 0.5, 0.5, 0.5]));
        let edge = Graph::from_edges(2, &[(0, 1)]).unwrap();
        assert!(approx_eq(&graph_state::<f64>(&edge), &[0.5, 0.5, 0.5, -0.5]));
    }

    #[test]
    fn edge_code_basis_and_generators() {
        let edge = Graph::from_edges(2, &[(0, 1)]).unwrap();
        let code = CwsCode::with_codeword_str(edge, "01").unwrap();
        let b = logical_basis::<f64>(&code);
        assert!(approx_eq(&b.ket1, &[0.5, -0.5, 0.5, 0.5]));
        let set = codespace_generators(&code).unwrap();
        assert_eq!(set.generators().len(), 1);
        assert_eq!(set.generators()[0].to_string(), "XZ");
        assert_eq!(set.logical_z().to_string(), "ZX");
        assert_eq!(set.logical_x().to_string(), "IZ");
    }

    #[test]
    fn zero_codeword_rejected() {
        let g = Graph::empty(3).unwrap();
        assert!(CwsCode::new(g, 0).is_err());
        assert!(CwsCode::with_codeword_str(g, "01").is_err());
        assert!(CwsCode::with_codeword_str(g, "0a1").is_err());
    }

    #[test]
    fn adjacency_validation() {
        assert!(Graph::parse_rows("01;10").is_ok());
        assert!(Graph::parse_rows("01;00").is_err());
        assert!(Graph::parse_rows("11;11").is_err());
        assert!(Graph::parse_rows("01;1").is_err());
        let g = Graph::parse_rows("011;101;110").unwrap();
        assert_eq!(g.edge_count(), 3);
        assert_eq!(g.to_rows_string(), "011;101;110");
    }

    #[test]
    fn path_relabelings_share_canonical_form() {
        let p1 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let p2 = Graph::from_edges(3, &[(1, 0), (0, 2)]).unwrap();
        assert_eq!(canonical_graph(&p1), canonical_graph(&p2));
        let c = canonical_graph(&p1);
        assert_eq!(canonical_graph(&c), c);
    }

    #[test]
    fn graph_counts() {
        assert_eq!(enumerate_graphs(3, GraphMode::All).unwrap().len(), 8);
        assert_eq!(enumerate_graphs(4, GraphMode::NonIsomorphic).unwrap().len(), 11);
        assert!(enumerate_graphs(1, GraphMode::All).is_err());
        assert!(enumerate_graphs(7, GraphMode::All).is_err());
    }

    #[test]
    fn encoding_circuit_text() {
        let e = CwsCode::with_codeword_str(Graph::empty(2).unwrap(), "11").unwrap();
        assert_eq!(emit_encoding_circuit(&e), "H q0\nH q1\n# logical_x: ZZ\n");
        let tri = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let text = emit_encoding_circuit(&CwsCode::with_codeword_str(tri, "100").unwrap());
        assert_eq!(text.lines().filter(|l| l.starts_with("H ")).count(), 3);
        assert_eq!(text.lines().filter(|l| l.starts_with("CZ ")).count(), 3);
    }

    #[test]
    fn circuit_matches_graph_state_exhaustive_small() {
        for n in 2..=4 {
            for g in enumerate_graphs(n, GraphMode::All).unwrap() {
                let code = CwsCode::new(g, 1).unwrap();
                let sim = simulate_circuit::<f64>(n, &emit_encoding_circuit(&code)).unwrap();
                let direct = graph_state::<f64>(&g);
                assert!(sim.iter().zip(&direct).all(|(a, b)| (a - b).norm() < 1e-12), "{g:?}");
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let n = rng.gen_range(5..=6);
            let g = Graph::random(n, &mut rng).unwrap();
            let code = CwsCode::new(g, 1).unwrap();
            let sim = simulate_circuit::<f64>(n, &emit_encoding_circuit(&code)).unwrap();
            assert!(sim.iter().zip(graph_state::<f64>(&g)).all(|(a, b)| (a - b).norm() < 1e-12));
        }
    }

    #[test]
    fn upper_bits_roundtrip() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.upper_bits_string(), "100001");
        assert_eq!(Graph::from_upper_bits(4, g.upper_bits()).unwrap(), g);
    }
}
